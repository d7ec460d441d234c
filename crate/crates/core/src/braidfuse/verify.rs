//! Exact identity checks over all basis tuples.

use std::fmt;

use serde::Serialize;

use super::{
    braiding, braiding_constants, braiding_inverse, fusion, twist_factor, BraidError,
    BraidOperator, FusionMatrix, StateVector,
};
use crate::exec::Exec;
use crate::qlaurent::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub tuple: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(suite: &str, n: usize) -> Self {
        Self {
            suite: suite.to_string(),
            n,
            checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{} n={}: {} ({} checked, {} failed)",
            self.suite,
            self.n,
            verdict,
            self.checked,
            self.failures.len()
        )?;
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for fail in &self.failures {
            write!(
                f,
                "\n  {} {:?}: lhs = {} ; rhs = {}",
                fail.case, fail.tuple, fail.lhs, fail.rhs
            )?;
        }
        Ok(())
    }
}

/// Deliberate corruptions used to confirm that each suite can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mutation {
    #[default]
    None,
    /// Braiding built with `β` replaced by `γ`.
    BetaAsGamma,
    /// Creation amplitude `M^{0n}` multiplied by `q`.
    CreationScaled,
    /// Identity operator used in place of `B⁻¹`.
    IdentityInverse,
}

impl std::str::FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Mutation::None),
            "beta-as-gamma" => Ok(Mutation::BetaAsGamma),
            "creation-scaled" => Ok(Mutation::CreationScaled),
            "identity-inverse" => Ok(Mutation::IdentityInverse),
            other => Err(format!(
                "unknown mutation {other:?} (expected none, beta-as-gamma, creation-scaled, identity-inverse)"
            )),
        }
    }
}

/// `(B, B⁻¹, M)` for rank `n`, with an optional corruption applied.
pub fn operators(
    n: usize,
    mutation: Mutation,
) -> Result<(BraidOperator, BraidOperator, FusionMatrix), BraidError> {
    let mut b = braiding(n)?;
    let mut binv = braiding_inverse(n)?;
    let mut m = fusion(n)?;
    match mutation {
        Mutation::None => {}
        Mutation::BetaAsGamma => {
            let (al, _, ga) = braiding_constants(n);
            b = BraidOperator::from_constants(n, &al, &ga, &ga);
        }
        Mutation::CreationScaled => {
            let v = m.creation(0, n) * LaurentPoly::q(1, 1);
            m.set_creation(0, n, v);
        }
        Mutation::IdentityInverse => binv = BraidOperator::identity(n),
    }
    Ok((b, binv, m))
}

fn basis_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| (0..=n).map(move |a| [t.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

fn fail(case: &str, tuple: &[usize], lhs: &impl fmt::Display, rhs: &impl fmt::Display) -> Failure {
    Failure {
        case: case.to_string(),
        tuple: tuple.to_vec(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn state_diff(
    case: &str,
    tuple: &[usize],
    lhs: &StateVector,
    rhs: &StateVector,
) -> Option<Failure> {
    (lhs != rhs).then(|| fail(case, tuple, &render_state(lhs), &render_state(rhs)))
}

fn render_state(s: &StateVector) -> String {
    if s.is_empty() {
        return "0".into();
    }
    s.amplitudes()
        .map(|(t, v)| format!("({v}){t:?}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Both sides of the braid relation on `V^{⊗3}` for one operator.
pub fn verify_yang_baxter_with(op: &BraidOperator, label: &str, exec: Exec) -> VerifyReport {
    let n = op.rank();
    let triples = basis_tuples(n, 3);
    let mut report = VerifyReport::new("yang-baxter", n);
    report.checked = triples.len();
    report.failures = exec
        .map(&triples, |t| {
            let s = StateVector::basis(n, t);
            let lhs = s
                .apply_operator(op, 0)
                .apply_operator(op, 1)
                .apply_operator(op, 0);
            let rhs = s
                .apply_operator(op, 1)
                .apply_operator(op, 0)
                .apply_operator(op, 1);
            state_diff(label, t, &lhs, &rhs)
        })
        .into_iter()
        .flatten()
        .collect();
    report
}

pub fn verify_yang_baxter(n: usize, exec: Exec) -> Result<VerifyReport, BraidError> {
    verify_yang_baxter_mutated(n, Mutation::None, exec)
}

pub fn verify_yang_baxter_mutated(
    n: usize,
    mutation: Mutation,
    exec: Exec,
) -> Result<VerifyReport, BraidError> {
    let (b, binv, _) = operators(n, mutation)?;
    let mut report = verify_yang_baxter_with(&b, "B", exec);
    report
        .failures
        .extend(verify_yang_baxter_with(&binv, "B^-1", exec).failures);
    report
        .notes
        .push("each triple checked for B and B^-1".into());
    Ok(report)
}

/// `B ∘ B⁻¹ = B⁻¹ ∘ B = I` on every basis pair.
pub fn verify_inverse_with(b: &BraidOperator, binv: &BraidOperator) -> VerifyReport {
    let n = b.rank();
    let mut report = VerifyReport::new("inverse", n);
    let id = BraidOperator::identity(n);
    for (label, prod) in [("B.B^-1", b.compose(binv)), ("B^-1.B", binv.compose(b))] {
        for t in basis_tuples(n, 2) {
            report.checked += 1;
            let inp = (t[0], t[1]);
            if prod.column(inp) != id.column(inp) {
                let got = prod
                    .column(inp)
                    .map(|c| format!("{c:?}"))
                    .unwrap_or_else(|| "0".into());
                report.failures.push(fail(label, &t, &got, &"identity"));
            }
        }
    }
    report
}

pub fn verify_inverse(n: usize) -> Result<VerifyReport, BraidError> {
    let (b, binv, _) = operators(n, Mutation::None)?;
    Ok(verify_inverse_with(&b, &binv))
}

/// Closing one output of a crossing against a created pair yields a multiple
/// of the identity: `c = c₀²·a⁻¹` for `B` and `c₀²·a` for `B⁻¹`.
pub fn verify_fusion_condition_with(
    b: &BraidOperator,
    binv: &BraidOperator,
    m: &FusionMatrix,
) -> VerifyReport {
    let n = b.rank();
    let mut report = VerifyReport::new("fusion", n);
    let a = twist_factor(n).expect("rank checked by operator construction");
    let sign = LaurentPoly::constant(m.phase().square_sign());
    for (label, op, expect) in [
        ("B", b, &sign * &a.inverse().unwrap()),
        ("B^-1", binv, &sign * &a),
    ] {
        report.notes.push(format!("{label}: constant {expect}"));
        for c in 0..=n {
            let out = StateVector::basis(n, &[c])
                .apply_cup(m, 1)
                .apply_operator(op, 0)
                .apply_cap(m, 1);
            for a_out in 0..=n {
                report.checked += 1;
                let got = out
                    .amplitude(&[a_out])
                    .scale(&m.phase().square_sign().into());
                let want = if a_out == c {
                    expect.clone()
                } else {
                    LaurentPoly::zero()
                };
                if got != want {
                    report.failures.push(fail(label, &[a_out, c], &got, &want));
                }
            }
        }
    }
    report
}

pub fn verify_fusion_condition(n: usize) -> Result<VerifyReport, BraidError> {
    let (b, binv, m) = operators(n, Mutation::None)?;
    Ok(verify_fusion_condition_with(&b, &binv, &m))
}

/// Horizontal move: a cup-cap pair threaded through opposite crossings equals
/// the cap-cup turnback. Vertical move: `B⁻¹` then `B` is the identity.
pub fn verify_reidemeister2_with(
    b: &BraidOperator,
    binv: &BraidOperator,
    m: &FusionMatrix,
) -> VerifyReport {
    let n = b.rank();
    let mut report = VerifyReport::new("reidemeister2", n);
    for t in basis_tuples(n, 2) {
        let s = StateVector::basis(n, &t);
        let turnback = s.apply_cap(m, 0).apply_cup(m, 0);
        for (label, left, right) in [
            ("horizontal B|B^-1", b, binv),
            ("horizontal B^-1|B", binv, b),
        ] {
            let threaded = s
                .apply_cup(m, 1)
                .apply_operator(left, 0)
                .apply_operator(right, 2)
                .apply_cap(m, 1);
            for out in basis_tuples(n, 2) {
                report.checked += 1;
                let (l, r) = (threaded.amplitude(&out), turnback.amplitude(&out));
                if l != r {
                    report
                        .failures
                        .push(fail(label, &[out[0], t[0], out[1], t[1]], &l, &r));
                }
            }
        }
        for (label, first, second) in [("vertical", binv, b), ("vertical reversed", b, binv)] {
            let back = s.apply_operator(first, 0).apply_operator(second, 0);
            for out in basis_tuples(n, 2) {
                report.checked += 1;
                let l = back.amplitude(&out);
                let r = if out == t {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                if l != r {
                    report
                        .failures
                        .push(fail(label, &[out[0], out[1], t[0], t[1]], &l, &r));
                }
            }
        }
    }
    report
}

pub fn verify_reidemeister2(n: usize) -> Result<VerifyReport, BraidError> {
    let (b, binv, m) = operators(n, Mutation::None)?;
    Ok(verify_reidemeister2_with(&b, &binv, &m))
}

/// `q^{−1/(2(n+1))} B − q^{1/(2(n+1))} B⁻¹ = (q^{−1/2} − q^{1/2}) I`.
pub fn verify_skein_operator_with(b: &BraidOperator, binv: &BraidOperator) -> VerifyReport {
    let n = b.rank();
    let big = 2 * (n as i64 + 1);
    let mut report = VerifyReport::new("skein", n);
    let lhs = b
        .scale(&LaurentPoly::q(-1, big))
        .sub(&binv.scale(&LaurentPoly::q(1, big)));
    let rhs = BraidOperator::diagonal(n, &(LaurentPoly::q(-1, 2) - LaurentPoly::q(1, 2)));
    for t in basis_tuples(n, 2) {
        report.checked += 1;
        let inp = (t[0], t[1]);
        if lhs.column(inp) != rhs.column(inp) {
            let show = |op: &BraidOperator| {
                op.column(inp)
                    .map(|c| format!("{c:?}"))
                    .unwrap_or_else(|| "0".into())
            };
            report
                .failures
                .push(fail("operator", &t, &show(&lhs), &show(&rhs)));
        }
    }
    report
}

pub fn verify_skein_operator(n: usize) -> Result<VerifyReport, BraidError> {
    let (b, binv, _) = operators(n, Mutation::None)?;
    Ok(verify_skein_operator_with(&b, &binv))
}
