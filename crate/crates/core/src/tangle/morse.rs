use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("line {line}: unknown token {token:?}")]
    UnknownToken { line: usize, token: String },
    #[error("line {line}: expected `<token> <pos>`")]
    Malformed { line: usize },
    #[error("line {line}: bad position {text:?}")]
    BadPosition { line: usize, text: String },
    #[error("line {line}: position {pos} out of range for {width} strands")]
    OutOfRange {
        line: usize,
        pos: usize,
        width: usize,
    },
    #[error("line {line}: cap with fewer than two strands (negative strand count)")]
    NegativeStrands { line: usize },
    #[error("unclosed strands: {width} strands remain at the top")]
    Unclosed { width: usize },
}

/// One elementary piece of a diagram, acting at a 0-based strand position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slice {
    Cup(usize),
    Cap(usize),
    /// `cross+`: over strand runs from lower-left to upper-right.
    CrossPos(usize),
    /// `cross-`: over strand runs from lower-right to upper-left.
    CrossNeg(usize),
}

impl Slice {
    pub fn pos(self) -> usize {
        match self {
            Slice::Cup(p) | Slice::Cap(p) | Slice::CrossPos(p) | Slice::CrossNeg(p) => p,
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Slice::CrossPos(_) | Slice::CrossNeg(_))
    }

    /// +1 for `cross+`, −1 for `cross-`, 0 otherwise.
    pub fn token_sign(self) -> i64 {
        match self {
            Slice::CrossPos(_) => 1,
            Slice::CrossNeg(_) => -1,
            _ => 0,
        }
    }

    /// A crossing at `pos` with the given token sign.
    pub fn crossing(pos: usize, sign: i64) -> Slice {
        if sign > 0 {
            Slice::CrossPos(pos)
        } else {
            Slice::CrossNeg(pos)
        }
    }

    /// Same kind, other position.
    pub fn at(self, pos: usize) -> Slice {
        match self {
            Slice::Cup(_) => Slice::Cup(pos),
            Slice::Cap(_) => Slice::Cap(pos),
            Slice::CrossPos(_) => Slice::CrossPos(pos),
            Slice::CrossNeg(_) => Slice::CrossNeg(pos),
        }
    }

    /// Crossing with the opposite token; other slices unchanged.
    pub fn switched(self) -> Slice {
        match self {
            Slice::CrossPos(p) => Slice::CrossNeg(p),
            Slice::CrossNeg(p) => Slice::CrossPos(p),
            s => s,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Slice::Cup(_) => "cup",
            Slice::Cap(_) => "cap",
            Slice::CrossPos(_) => "cross+",
            Slice::CrossNeg(_) => "cross-",
        }
    }

    fn check(self, width: usize) -> Result<usize, (usize, bool)> {
        let p = self.pos();
        match self {
            Slice::Cup(_) if p <= width => Ok(width + 2),
            Slice::Cap(_) if width < 2 => Err((p, true)),
            Slice::Cap(_) if p + 1 < width => Ok(width - 2),
            Slice::CrossPos(_) | Slice::CrossNeg(_) if p + 1 < width => Ok(width),
            _ => Err((p, false)),
        }
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.token(), self.pos())
    }
}

/// A closed diagram read bottom to top. `widths[i]` is the strand count below slice `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorseLink {
    slices: Vec<Slice>,
    widths: Vec<usize>,
}

impl MorseLink {
    pub fn new(slices: Vec<Slice>) -> Result<Self, MorseError> {
        Self::validate(slices, None)
    }

    fn validate(slices: Vec<Slice>, lines: Option<&[usize]>) -> Result<Self, MorseError> {
        let mut widths = Vec::with_capacity(slices.len() + 1);
        let mut w = 0;
        widths.push(w);
        for (i, s) in slices.iter().enumerate() {
            let line = lines.map_or(i + 1, |l| l[i]);
            w = s.check(w).map_err(|(pos, negative)| {
                if negative {
                    MorseError::NegativeStrands { line }
                } else {
                    MorseError::OutOfRange {
                        line,
                        pos,
                        width: w,
                    }
                }
            })?;
            widths.push(w);
        }
        if w != 0 {
            return Err(MorseError::Unclosed { width: w });
        }
        Ok(Self { slices, widths })
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Strand counts at levels `0..=len`.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn max_width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    /// Slice indices of all crossings.
    pub fn crossings(&self) -> Vec<usize> {
        (0..self.slices.len())
            .filter(|&i| self.slices[i].is_crossing())
            .collect()
    }

    /// Number of cap slices (equal to the number of cups).
    pub fn caps(&self) -> usize {
        self.slices
            .iter()
            .filter(|s| matches!(s, Slice::Cap(_)))
            .count()
    }

    /// Replace slices `start..end` by `with`, revalidating.
    pub fn splice(&self, start: usize, end: usize, with: &[Slice]) -> Result<Self, MorseError> {
        let mut slices = self.slices[..start].to_vec();
        slices.extend_from_slice(with);
        slices.extend_from_slice(&self.slices[end..]);
        Self::new(slices)
    }

    /// Stack `other` above `self`: a split union.
    pub fn stack(&self, other: &MorseLink) -> MorseLink {
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&other.slices);
        Self::new(slices).expect("stacking closed diagrams is closed")
    }
}

impl fmt::Display for MorseLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slices {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for MorseLink {
    type Err = MorseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_morse(s)
    }
}

/// Parse the line format: `cup <pos>`, `cap <pos>`, `cross+ <pos>`, `cross- <pos>`,
/// with `#` comments and blank lines ignored. `;` also separates slices.
pub fn parse_morse(text: &str) -> Result<MorseLink, MorseError> {
    let mut slices = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let mut words = stmt.split_whitespace();
            let Some(token) = words.next() else { continue };
            let (Some(pos_text), None) = (words.next(), words.next()) else {
                return Err(MorseError::Malformed { line });
            };
            let pos: usize = pos_text.parse().map_err(|_| MorseError::BadPosition {
                line,
                text: pos_text.to_string(),
            })?;
            let slice = match token {
                "cup" => Slice::Cup(pos),
                "cap" => Slice::Cap(pos),
                "cross+" => Slice::CrossPos(pos),
                "cross-" => Slice::CrossNeg(pos),
                other => {
                    return Err(MorseError::UnknownToken {
                        line,
                        token: other.to_string(),
                    })
                }
            };
            slices.push(slice);
            lines.push(line);
        }
    }
    MorseLink::validate(slices, Some(&lines))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let u = parse_morse("cup 0\ncap 0").unwrap();
        assert_eq!(u.max_width(), 2);
        assert_eq!(u.widths(), &[0, 2, 0]);
        let k = parse_morse("cup 0\ncross+ 0\ncap 0").unwrap();
        assert_eq!(k.crossings(), vec![1]);
        assert_eq!(
            parse_morse("cup 0\ncap 1"),
            Err(MorseError::OutOfRange {
                line: 2,
                pos: 1,
                width: 2
            })
        );
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(
            parse_morse("# c\ncup 0\ntwist 0\n"),
            Err(MorseError::UnknownToken {
                line: 3,
                token: "twist".into()
            })
        );
        assert_eq!(
            parse_morse("cup 0\n"),
            Err(MorseError::Unclosed { width: 2 })
        );
        assert_eq!(
            parse_morse("cap 0"),
            Err(MorseError::NegativeStrands { line: 1 })
        );
        assert_eq!(parse_morse("cup"), Err(MorseError::Malformed { line: 1 }));
        assert_eq!(
            parse_morse("cup x"),
            Err(MorseError::BadPosition {
                line: 1,
                text: "x".into()
            })
        );
        assert_eq!(
            parse_morse("cup 0\ncross+ 1\ncap 0"),
            Err(MorseError::OutOfRange {
                line: 2,
                pos: 1,
                width: 2
            })
        );
    }

    #[test]
    fn round_trip_and_comments() {
        let src = "# trefoil\ncup 0 # outer\ncup 1\ncross+ 0; cross+ 0\ncross+ 0\ncap 1\ncap 0\n";
        let l = parse_morse(src).unwrap();
        assert_eq!(l.len(), 7);
        assert_eq!(parse_morse(&l.to_string()).unwrap(), l);
    }
}
