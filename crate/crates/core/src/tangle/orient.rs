use thiserror::Error;

use super::morse::{MorseError, MorseLink, Slice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("expected {expected} orientation flags, got {got}")]
    FlipCount { expected: usize, got: usize },
    #[error("component index {index} out of range ({components} components)")]
    FlipIndex { index: usize, components: usize },
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// A strand segment: `pos` at `level`, where level `i` lies below slice `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub level: usize,
    pub pos: usize,
}

struct Trace {
    up: Vec<Vec<bool>>,
    component: Vec<Vec<usize>>,
    walks: Vec<Vec<(Node, bool)>>,
}

fn trace(link: &MorseLink) -> Trace {
    let slices = link.slices();
    let widths = link.widths();
    let mut up: Vec<Vec<Option<bool>>> = widths.iter().map(|&w| vec![None; w]).collect();
    let mut component: Vec<Vec<usize>> = widths.iter().map(|&w| vec![0; w]).collect();
    let mut walks = Vec::new();

    let step_up = |i: usize, k: usize| -> (usize, usize, bool) {
        match slices[i] {
            Slice::Cap(p) if k == p => (i, p + 1, false),
            Slice::Cap(p) if k == p + 1 => (i, p, false),
            Slice::Cap(p) => (i + 1, if k < p { k } else { k - 2 }, true),
            Slice::Cup(p) => (i + 1, if k < p { k } else { k + 2 }, true),
            s if k == s.pos() => (i + 1, k + 1, true),
            s if k == s.pos() + 1 => (i + 1, k - 1, true),
            _ => (i + 1, k, true),
        }
    };
    let step_down = |i: usize, k: usize| -> (usize, usize, bool) {
        match slices[i - 1] {
            Slice::Cup(p) if k == p => (i, p + 1, true),
            Slice::Cup(p) if k == p + 1 => (i, p, true),
            Slice::Cup(p) => (i - 1, if k < p { k } else { k - 2 }, false),
            Slice::Cap(p) => (i - 1, if k < p { k } else { k + 2 }, false),
            s if k == s.pos() => (i - 1, k + 1, false),
            s if k == s.pos() + 1 => (i - 1, k - 1, false),
            _ => (i - 1, k, false),
        }
    };

    for level in 0..widths.len() {
        for pos in 0..widths[level] {
            if up[level][pos].is_some() {
                continue;
            }
            let c = walks.len();
            let mut walk = Vec::new();
            let (mut i, mut k, mut d) = (level, pos, true);
            while up[i][k].is_none() {
                up[i][k] = Some(d);
                component[i][k] = c;
                walk.push((Node { level: i, pos: k }, d));
                (i, k, d) = if d { step_up(i, k) } else { step_down(i, k) };
            }
            walks.push(walk);
        }
    }
    Trace {
        up: up
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap).collect())
            .collect(),
        component,
        walks,
    }
}

/// A diagram with a chosen orientation per component.
///
/// Components are numbered in tracing order: the first unvisited segment at the
/// lowest level, leftmost first, initially traversed upward. `flips[c]`
/// reverses component `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDiagram {
    link: MorseLink,
    flips: Vec<bool>,
    up: Vec<Vec<bool>>,
    component: Vec<Vec<usize>>,
    walks: Vec<Vec<(Node, bool)>>,
}

impl OrientedDiagram {
    pub fn new(link: MorseLink) -> Self {
        let t = trace(&link);
        let flips = vec![false; t.walks.len()];
        Self {
            link,
            flips,
            up: t.up,
            component: t.component,
            walks: t.walks,
        }
    }

    pub fn with_flips(link: MorseLink, flips: Vec<bool>) -> Result<Self, OrientError> {
        let mut d = Self::new(link);
        if flips.len() != d.flips.len() {
            return Err(OrientError::FlipCount {
                expected: d.flips.len(),
                got: flips.len(),
            });
        }
        for (c, f) in flips.iter().enumerate() {
            if *f {
                d.flip(c);
            }
        }
        Ok(d)
    }

    /// Reverse the listed components (repeats toggle).
    pub fn flipping(link: MorseLink, components: &[usize]) -> Result<Self, OrientError> {
        let mut d = Self::new(link);
        for &c in components {
            if c >= d.flips.len() {
                return Err(OrientError::FlipIndex {
                    index: c,
                    components: d.flips.len(),
                });
            }
            d.flip(c);
        }
        Ok(d)
    }

    fn flip(&mut self, c: usize) {
        self.flips[c] = !self.flips[c];
        for (row, comps) in self.up.iter_mut().zip(&self.component) {
            for (u, &k) in row.iter_mut().zip(comps) {
                if k == c {
                    *u = !*u;
                }
            }
        }
    }

    pub fn link(&self) -> &MorseLink {
        &self.link
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn components(&self) -> usize {
        self.flips.len()
    }

    pub fn is_up(&self, node: Node) -> bool {
        self.up[node.level][node.pos]
    }

    pub fn component_of(&self, node: Node) -> usize {
        self.component[node.level][node.pos]
    }

    /// Segments of each component in tracing order, with the traced (unflipped) direction.
    pub fn walks(&self) -> &[Vec<(Node, bool)>] {
        &self.walks
    }

    /// True when the two strands entering the crossing at slice `i` point the same way.
    pub fn is_parallel(&self, i: usize) -> bool {
        let p = self.link.slices()[i].pos();
        self.up[i][p] == self.up[i][p + 1]
    }

    /// Oriented sign of the crossing at slice `i` (0 if not a crossing).
    pub fn crossing_sign(&self, i: usize) -> i64 {
        let s = self.link.slices()[i];
        if !s.is_crossing() {
            return 0;
        }
        if self.is_parallel(i) {
            s.token_sign()
        } else {
            -s.token_sign()
        }
    }

    pub fn writhe(&self) -> i64 {
        self.link
            .crossings()
            .into_iter()
            .map(|i| self.crossing_sign(i))
            .sum()
    }

    /// Equivalent diagram in which every crossing has both strands pointing the
    /// same way: each antiparallel crossing is replaced by an S-shaped detour
    /// through a cup, a crossing with the opposite token, and a cap.
    pub fn normal_form(&self) -> MorseLink {
        let mut out = Vec::with_capacity(self.link.len());
        for (i, &s) in self.link.slices().iter().enumerate() {
            if !s.is_crossing() || self.is_parallel(i) {
                out.push(s);
                continue;
            }
            let p = s.pos();
            let flipped = s.switched().at(p + 1);
            if self.up[i][p] {
                out.extend([Slice::Cup(p), flipped, Slice::Cap(p + 2)]);
            } else {
                out.extend([Slice::Cup(p + 2), flipped, Slice::Cap(p)]);
            }
        }
        MorseLink::new(out).expect("detours keep the diagram closed")
    }

    /// Replace slices `start..end` by `with`, carrying the orientation across
    /// from every level outside the rewritten window.
    pub fn replace(&self, start: usize, end: usize, with: &[Slice]) -> Result<Self, OrientError> {
        let link = self.link.splice(start, end, with)?;
        let mut out = Self::new(link);
        let top = start + with.len();
        let mut decided: Vec<Option<bool>> = vec![None; out.components()];
        for level in (0..=start).chain(top..out.up.len()) {
            let old_level = if level <= start {
                level
            } else {
                level - top + end
            };
            for pos in 0..out.up[level].len() {
                let c = out.component[level][pos];
                let want_flip = out.up[level][pos] != self.up[old_level][pos];
                match decided[c] {
                    None => decided[c] = Some(want_flip),
                    Some(f) => debug_assert_eq!(f, want_flip, "inconsistent orientation transfer"),
                }
            }
        }
        for (c, f) in decided.into_iter().enumerate() {
            if f == Some(true) {
                out.flip(c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::morse::parse_morse;

    fn od(s: &str) -> OrientedDiagram {
        OrientedDiagram::new(parse_morse(s).unwrap())
    }

    #[test]
    fn unknot_directions() {
        let d = od("cup 0; cap 0");
        assert_eq!(d.components(), 1);
        assert!(d.is_up(Node { level: 1, pos: 0 }));
        assert!(!d.is_up(Node { level: 1, pos: 1 }));
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn kink_signs() {
        assert_eq!(od("cup 0; cup 2; cross+ 1; cap 2; cap 0").writhe(), 1);
        assert_eq!(od("cup 0; cup 2; cross- 1; cap 2; cap 0").writhe(), -1);
        // Curl whose strands are antiparallel at the crossing.
        assert_eq!(od("cup 0; cross+ 0; cap 0").writhe(), -1);
        assert_eq!(
            od("cup 0; cup 2; cross+ 1; cap 2; cup 2; cross- 1; cap 2; cap 0").writhe(),
            0
        );
    }

    #[test]
    fn knot_writhe_ignores_flip() {
        for s in [
            "cup 0; cup 1; cross+ 0; cross+ 0; cross+ 0; cap 1; cap 0",
            "cup 0; cup 1; cup 2; cross+ 0; cross- 1; cross+ 0; cross- 1; cap 2; cap 1; cap 0",
            "cup 0; cross+ 0; cap 0",
        ] {
            let l = parse_morse(s).unwrap();
            let a = OrientedDiagram::new(l.clone());
            let b = OrientedDiagram::flipping(l, &[0]).unwrap();
            assert_eq!(a.components(), 1);
            assert_eq!(a.writhe(), b.writhe());
        }
    }

    #[test]
    fn hopf_flip_changes_sign() {
        let l = parse_morse("cup 0; cup 1; cross+ 0; cross+ 0; cap 1; cap 0").unwrap();
        let a = OrientedDiagram::new(l.clone());
        assert_eq!(a.components(), 2);
        assert_eq!(a.writhe(), 2);
        assert_eq!(
            OrientedDiagram::flipping(l.clone(), &[1]).unwrap().writhe(),
            -2
        );
        assert_eq!(
            OrientedDiagram::flipping(l.clone(), &[2]),
            Err(OrientError::FlipIndex {
                index: 2,
                components: 2
            })
        );
        assert!(OrientedDiagram::with_flips(l, vec![true]).is_err());
    }

    #[test]
    fn normal_form_is_braidlike_and_keeps_writhe() {
        for s in [
            "cup 0; cross+ 0; cap 0",
            "cup 0; cup 2; cross+ 1; cross+ 1; cap 2; cap 0",
            "cup 0; cup 2; cross+ 1; cross- 2; cross+ 0; cap 2; cap 0",
        ] {
            let d = od(s);
            let nf = OrientedDiagram::new(d.normal_form());
            assert!(nf.link().crossings().into_iter().all(|i| nf.is_parallel(i)));
            assert_eq!(nf.writhe(), d.writhe());
        }
    }

    #[test]
    fn replace_keeps_orientation_outside() {
        let l = parse_morse("cup 0; cup 1; cross+ 0; cross+ 0; cap 1; cap 0").unwrap();
        let d = OrientedDiagram::flipping(l, &[1]).unwrap();
        let e = d.replace(2, 3, &[Slice::CrossNeg(0)]).unwrap();
        assert_eq!(e.writhe(), 0);
        for level in [0, 1, 2, 4, 5, 6] {
            for pos in 0..e.link().widths()[level] {
                let n = Node { level, pos };
                assert_eq!(e.is_up(n), d.is_up(n));
            }
        }
    }
}
