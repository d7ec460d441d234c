//! Local diagram moves: Reidemeister II/III, cup/cap slides, snakes, and kinks.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::contract::Evaluator;
use super::morse::Slice;
use super::orient::{OrientError, OrientedDiagram};
use crate::braidfuse::{BraidError, Failure, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Insert two opposite crossings on neighbouring strands.
    VerticalInsert,
    /// Remove two stacked opposite crossings.
    VerticalCancel,
    /// Slide a strand across a crossing (braid relation).
    Triangle,
    /// Pass a strand across a cup on one side, both crossings of equal token.
    CupSlide,
    /// Pass a strand across a cap.
    CapSlide,
    /// Insert a zigzag into a strand.
    Snake,
    /// Replace a cap-cup turnback by a cup-cap threaded through opposite crossings.
    HorizontalThread,
    /// Inverse of `HorizontalThread`.
    HorizontalUnthread,
}

impl Move {
    pub const ALL: [Move; 8] = [
        Move::VerticalInsert,
        Move::VerticalCancel,
        Move::Triangle,
        Move::CupSlide,
        Move::CapSlide,
        Move::Snake,
        Move::HorizontalThread,
        Move::HorizontalUnthread,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Move::VerticalInsert => "vertical-insert",
            Move::VerticalCancel => "vertical-cancel",
            Move::Triangle => "triangle",
            Move::CupSlide => "cup-slide",
            Move::CapSlide => "cap-slide",
            Move::Snake => "snake",
            Move::HorizontalThread => "horizontal-thread",
            Move::HorizontalUnthread => "horizontal-unthread",
        }
    }
}

/// Where a move applies. `index` is a slice index (or a level for insertions),
/// `pos` a strand position, `variant` selects token or side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub index: usize,
    pub pos: usize,
    pub variant: i64,
}

fn site(index: usize, pos: usize, variant: i64) -> Site {
    Site {
        index,
        pos,
        variant,
    }
}

/// All sites where `mv` applies.
pub fn sites(d: &OrientedDiagram, mv: Move) -> Vec<Site> {
    let link = d.link();
    let s = link.slices();
    let w = link.widths();
    let mut out = Vec::new();
    match mv {
        Move::VerticalInsert => {
            for (level, &width) in w.iter().enumerate() {
                for p in 0..width.saturating_sub(1) {
                    out.extend([site(level, p, 1), site(level, p, -1)]);
                }
            }
        }
        Move::VerticalCancel => {
            for i in 0..s.len().saturating_sub(1) {
                if s[i].is_crossing() && s[i + 1] == s[i].switched() {
                    out.push(site(i, s[i].pos(), 0));
                }
            }
        }
        Move::Triangle => {
            for i in 0..s.len().saturating_sub(2) {
                let (a, b, c) = (s[i], s[i + 1], s[i + 2]);
                if !(a.is_crossing() && b.is_crossing() && c.is_crossing()) || a.pos() != c.pos() {
                    continue;
                }
                if a.pos().abs_diff(b.pos()) != 1 {
                    continue;
                }
                let (ta, tb, tc) = (a.token_sign(), b.token_sign(), c.token_sign());
                if ta == tc && ta != tb {
                    continue;
                }
                out.push(site(i, a.pos(), 0));
            }
        }
        Move::CupSlide => {
            for (i, sl) in s.iter().enumerate() {
                if let Slice::Cup(p) = *sl {
                    if p < w[i] {
                        out.extend([site(i, p, 2), site(i, p, -2)]);
                    }
                    if p >= 1 {
                        out.extend([site(i, p, 1), site(i, p, -1)]);
                    }
                }
            }
        }
        Move::CapSlide => {
            for (i, sl) in s.iter().enumerate() {
                if let Slice::Cap(p) = *sl {
                    if p + 2 < w[i] {
                        out.extend([site(i, p, 2), site(i, p, -2)]);
                    }
                    if p >= 1 {
                        out.extend([site(i, p, 1), site(i, p, -1)]);
                    }
                }
            }
        }
        Move::Snake => {
            for (level, &width) in w.iter().enumerate() {
                for p in 0..width {
                    out.extend([site(level, p, 1), site(level, p, -1)]);
                }
            }
        }
        Move::HorizontalThread => {
            for i in 0..s.len().saturating_sub(1) {
                if let (Slice::Cap(p), Slice::Cup(q)) = (s[i], s[i + 1]) {
                    if p == q {
                        out.extend([site(i, p, 1), site(i, p, -1)]);
                    }
                }
            }
        }
        Move::HorizontalUnthread => {
            for i in 0..s.len().saturating_sub(3) {
                if let (Slice::Cup(q), Slice::Cap(r)) = (s[i], s[i + 3]) {
                    let (a, b) = (s[i + 1], s[i + 2]);
                    if q >= 1
                        && r == q
                        && a.is_crossing()
                        && b == a.switched().at(q + 1)
                        && a.pos() + 1 == q
                    {
                        out.push(site(i, q - 1, 0));
                    }
                }
            }
        }
    }
    out
}

/// Apply `mv` at `at` (which must come from [`sites`]).
pub fn apply(d: &OrientedDiagram, mv: Move, at: Site) -> Result<OrientedDiagram, OrientError> {
    let Site {
        index: i,
        pos: p,
        variant: v,
    } = at;
    let s = d.link().slices();
    match mv {
        Move::VerticalInsert => d.replace(i, i, &[Slice::crossing(p, v), Slice::crossing(p, -v)]),
        Move::VerticalCancel => d.replace(i, i + 2, &[]),
        Move::Triangle => {
            let (a, b, c) = (s[i], s[i + 1], s[i + 2]);
            let (lo, hi) = (a.pos(), b.pos());
            d.replace(i, i + 3, &[c.at(hi), b.at(lo), a.at(hi)])
        }
        Move::CupSlide => {
            let t = v.signum();
            if v.abs() == 2 {
                // The strand that ends right of the cup starts on its left.
                d.replace(
                    i,
                    i + 1,
                    &[
                        Slice::Cup(p + 1),
                        Slice::crossing(p, t),
                        Slice::crossing(p + 1, t),
                    ],
                )
            } else {
                d.replace(
                    i,
                    i + 1,
                    &[
                        Slice::Cup(p - 1),
                        Slice::crossing(p, t),
                        Slice::crossing(p - 1, t),
                    ],
                )
            }
        }
        Move::CapSlide => {
            let t = v.signum();
            if v.abs() == 2 {
                d.replace(
                    i,
                    i + 1,
                    &[
                        Slice::crossing(p + 1, t),
                        Slice::crossing(p, t),
                        Slice::Cap(p + 1),
                    ],
                )
            } else {
                d.replace(
                    i,
                    i + 1,
                    &[
                        Slice::crossing(p - 1, t),
                        Slice::crossing(p, t),
                        Slice::Cap(p - 1),
                    ],
                )
            }
        }
        Move::Snake => {
            if v > 0 {
                d.replace(i, i, &[Slice::Cup(p + 1), Slice::Cap(p)])
            } else {
                d.replace(i, i, &[Slice::Cup(p), Slice::Cap(p + 1)])
            }
        }
        Move::HorizontalThread => d.replace(
            i,
            i + 2,
            &[
                Slice::Cup(p + 1),
                Slice::crossing(p, v),
                Slice::crossing(p + 2, -v),
                Slice::Cap(p + 1),
            ],
        ),
        Move::HorizontalUnthread => d.replace(i, i + 4, &[Slice::Cap(p), Slice::Cup(p)]),
    }
}

/// Add a curl with oriented sign `sign` to the strand at `pos` on `level`.
pub fn insert_kink(
    d: &OrientedDiagram,
    level: usize,
    pos: usize,
    sign: i64,
) -> Result<OrientedDiagram, OrientError> {
    d.replace(
        level,
        level,
        &[
            Slice::Cup(pos + 1),
            Slice::crossing(pos, sign),
            Slice::Cap(pos + 1),
        ],
    )
}

/// Random walk of regular-isotopy moves; the bracket must never change.
///
/// Moves that would widen the diagram by more than two strands, or grow it
/// past three times its length plus twelve slices, are skipped so that each
/// contraction stays small.
pub fn verify_regular_isotopy(
    d: &OrientedDiagram,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport, BraidError> {
    let ev = Evaluator::new(n)?;
    let want = ev.bracket(d);
    let max_width = d.link().max_width() + 2;
    let max_len = 3 * d.link().len() + 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut report = VerifyReport {
        suite: "isotopy".into(),
        n,
        checked: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    let mut cur = d.clone();
    for _ in 0..trials {
        let options: Vec<(Move, Vec<Site>)> = Move::ALL
            .iter()
            .map(|&mv| (mv, sites(&cur, mv)))
            .filter(|(_, s)| !s.is_empty())
            .collect();
        let Some((mv, candidates)) = options.choose(&mut rng) else {
            break;
        };
        let at = *candidates.choose(&mut rng).expect("nonempty");
        let next = apply(&cur, *mv, at).expect("sites produce valid diagrams");
        if next.link().max_width() > max_width || next.link().len() > max_len {
            continue;
        }
        report.checked += 1;
        *counts.entry(mv.name()).or_default() += 1;
        let got = ev.bracket(&next);
        if got != want {
            report.failures.push(Failure {
                case: mv.name().to_string(),
                tuple: vec![at.index, at.pos],
                lhs: got.to_string(),
                rhs: want.to_string(),
            });
        }
        if next.writhe() != cur.writhe() {
            report.failures.push(Failure {
                case: format!("{} writhe", mv.name()),
                tuple: vec![at.index, at.pos],
                lhs: next.writhe().to_string(),
                rhs: cur.writhe().to_string(),
            });
        }
        cur = next;
    }
    report.notes.push(
        counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidfuse::twist_factor;
    use crate::tangle::morse::parse_morse;

    fn od(s: &str) -> OrientedDiagram {
        OrientedDiagram::new(parse_morse(s).unwrap())
    }

    const UNKNOT: &str = "cup 0; cap 0";
    const TREFOIL3: &str =
        "cup 0; cup 1; cup 2; cross+ 0; cross+ 1; cross+ 0; cross+ 1; cap 2; cap 1; cap 0";
    const HOPF_PLAT: &str = "cup 0; cup 2; cross+ 1; cross+ 1; cap 2; cap 0";

    fn check_every_site(s: &str, n: usize) {
        let d = od(s);
        let ev = Evaluator::new(n).unwrap();
        let want = ev.bracket(&d);
        for mv in Move::ALL {
            for at in sites(&d, mv) {
                let e = apply(&d, mv, at).unwrap();
                assert_eq!(ev.bracket(&e), want, "{s}: {mv:?} at {at:?}");
                assert_eq!(e.writhe(), d.writhe(), "{s}: {mv:?} at {at:?}");
            }
        }
    }

    #[test]
    fn unknot_vertical_insert() {
        let d = od(UNKNOT);
        let e = apply(&d, Move::VerticalInsert, site(1, 0, 1)).unwrap();
        assert_eq!(e.link().crossings().len(), 2);
        let ev = Evaluator::new(1).unwrap();
        assert_eq!(ev.bracket(&e), ev.bracket(&d));
    }

    #[test]
    fn trefoil_triangle_slide() {
        let d = od(TREFOIL3);
        let at = sites(&d, Move::Triangle);
        assert!(!at.is_empty());
        let ev = Evaluator::new(2).unwrap();
        for a in at {
            assert_eq!(
                ev.bracket(&apply(&d, Move::Triangle, a).unwrap()),
                ev.bracket(&d)
            );
        }
    }

    #[test]
    fn every_site_of_small_diagrams() {
        for n in 1..=2 {
            for s in [
                UNKNOT,
                HOPF_PLAT,
                TREFOIL3,
                "cup 0; cross+ 0; cap 0",
                "cup 0; cup 2; cap 1; cup 1; cap 2; cap 0",
            ] {
                check_every_site(s, n);
            }
        }
    }

    #[test]
    fn kink_changes_bracket_by_twist() {
        for n in 1..=3 {
            let ev = Evaluator::new(n).unwrap();
            let a = twist_factor(n).unwrap();
            let d = od(TREFOIL3);
            for sign in [1, -1] {
                let k = insert_kink(&d, 3, 1, sign).unwrap();
                assert_eq!(k.writhe(), d.writhe() + sign);
                assert_eq!(ev.bracket(&k), ev.bracket(&d) * a.pow(sign).unwrap());
                assert_eq!(ev.homfly(&k), ev.homfly(&d));
            }
        }
    }

    #[test]
    fn random_walks_are_deterministic_and_pass() {
        let d = od(HOPF_PLAT);
        let r1 = verify_regular_isotopy(&d, 2, 40, 7).unwrap();
        let r2 = verify_regular_isotopy(&d, 2, 40, 7).unwrap();
        assert!(r1.passed(), "{r1}");
        assert_eq!(r1, r2);
        assert!(r1.checked > 0);
    }
}
