//! Small named diagrams used by tests, benches and the CLI.

use super::morse::{parse_morse, MorseLink};
use super::moves::insert_kink;
use super::orient::OrientedDiagram;

/// `(name, diagram text)`.
pub const CORPUS: &[(&str, &str)] = &[
    ("unknot", "cup 0\ncap 0\n"),
    ("kink+", "cup 0\ncup 2\ncross+ 1\ncap 2\ncap 0\n"),
    ("kink-", "cup 0\ncup 2\ncross- 1\ncap 2\ncap 0\n"),
    ("curl", "cup 0\ncross+ 0\ncap 0\n"),
    ("unlink2", "cup 0\ncup 2\ncap 2\ncap 0\n"),
    ("hopf+", "cup 0\ncup 1\ncross+ 0\ncross+ 0\ncap 1\ncap 0\n"),
    ("hopf-", "cup 0\ncup 1\ncross- 0\ncross- 0\ncap 1\ncap 0\n"),
    (
        "hopf-plat",
        "cup 0\ncup 2\ncross+ 1\ncross+ 1\ncap 2\ncap 0\n",
    ),
    (
        "trefoil+",
        "cup 0\ncup 1\ncross+ 0\ncross+ 0\ncross+ 0\ncap 1\ncap 0\n",
    ),
    (
        "trefoil-",
        "cup 0\ncup 1\ncross- 0\ncross- 0\ncross- 0\ncap 1\ncap 0\n",
    ),
    (
        "trefoil3+",
        "cup 0\ncup 1\ncup 2\ncross+ 0\ncross+ 1\ncross+ 0\ncross+ 1\ncap 2\ncap 1\ncap 0\n",
    ),
    (
        "figure8",
        "cup 0\ncup 1\ncup 2\ncross+ 0\ncross- 1\ncross+ 0\ncross- 1\ncap 2\ncap 1\ncap 0\n",
    ),
];

pub fn get(name: &str) -> Option<MorseLink> {
    CORPUS
        .iter()
        .find(|(k, _)| *k == name)
        .map(|(_, text)| parse_morse(text).expect("corpus diagrams are valid"))
}

pub fn all() -> Vec<(&'static str, MorseLink)> {
    CORPUS
        .iter()
        .map(|(k, t)| (*k, parse_morse(t).expect("corpus diagrams are valid")))
        .collect()
}

/// Unknot carrying `|k|` curls of sign `k.signum()` on its left strand.
pub fn unknot_with_kinks(k: i64) -> OrientedDiagram {
    let mut d = OrientedDiagram::new(get("unknot").unwrap());
    for _ in 0..k.unsigned_abs() {
        d = insert_kink(&d, 1, 0, k.signum()).expect("level 1 has a strand at 0");
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_with_expected_components() {
        let comps: Vec<(&str, usize)> = all()
            .into_iter()
            .map(|(k, l)| (k, OrientedDiagram::new(l).components()))
            .collect();
        for (k, c) in comps {
            let want = if k.starts_with("hopf") || k == "unlink2" {
                2
            } else {
                1
            };
            assert_eq!(c, want, "{k}");
        }
        assert!(get("nope").is_none());
    }

    #[test]
    fn kinks_have_writhe_k() {
        for k in -2..=2 {
            assert_eq!(unknot_with_kinks(k).writhe(), k);
        }
    }
}
