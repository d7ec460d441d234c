use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use serde_json::json;
use yyknot::braidfuse::{
    operators, verify_fusion_condition_with, verify_inverse_with, verify_reidemeister2_with,
    verify_skein_operator_with, verify_yang_baxter_with, Mutation, VerifyReport,
};
use yyknot::tangle::{corpus, verify_regular_isotopy, OrientedDiagram};
use yyknot::Exec;

use crate::output::json_doc;
use crate::{Format, Report, Suite, VerifyArgs};

pub fn run(args: &VerifyArgs, format: Format, exec: Exec) -> Result<Report> {
    let n = args.n as usize;
    let mutation: Mutation = args.mutate.parse().map_err(|e: String| anyhow!(e))?;
    let (b, binv, m) = operators(n, mutation)?;
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;

    let mut reports: Vec<VerifyReport> = Vec::new();
    if wants(Suite::YangBaxter) {
        let mut r = verify_yang_baxter_with(&b, "B", exec);
        r.failures
            .extend(verify_yang_baxter_with(&binv, "B^-1", exec).failures);
        r.notes.push("each triple checked for B and B^-1".into());
        reports.push(r);
    }
    if wants(Suite::Inverse) {
        reports.push(verify_inverse_with(&b, &binv));
    }
    if wants(Suite::Reidemeister2) {
        reports.push(verify_reidemeister2_with(&b, &binv, &m));
    }
    if wants(Suite::Fusion) {
        reports.push(verify_fusion_condition_with(&b, &binv, &m));
    }
    if wants(Suite::Skein) {
        reports.push(verify_skein_operator_with(&b, &binv));
    }
    if wants(Suite::Isotopy) {
        let diagrams = corpus::all();
        let results = exec.map(&diagrams, |(name, link)| {
            verify_regular_isotopy(
                &OrientedDiagram::new(link.clone()),
                n,
                args.trials,
                args.seed,
            )
            .map(|mut r| {
                r.suite = format!("isotopy[{name}]");
                r
            })
        });
        for r in results {
            reports.push(r?);
        }
    }

    let ok = reports.iter().all(VerifyReport::passed);
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(s, "{}", if ok { "all suites passed" } else { "FAILED" });
            s
        }
        Format::Json => json_doc(
            "verify",
            json!({ "n": n, "mutation": args.mutate, "passed": ok, "reports": reports }),
        ),
    };
    Ok(Report { text, ok })
}
