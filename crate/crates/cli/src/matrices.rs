use std::fmt::Write as _;

use anyhow::Result;
use serde_json::{json, Value};
use yyknot::braidfuse::{braiding, braiding_inverse, fusion, BraidOperator};

use crate::output::json_doc;
use crate::{Format, RankArgs, Report};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|a| (0..=n).map(move |b| (a, b))).collect()
}

type Entry = ((usize, usize), (usize, usize), String);

fn dense(op: &BraidOperator) -> Vec<Entry> {
    let n = op.rank();
    let mut out = Vec::new();
    for inp in pairs(n) {
        for o in pairs(n) {
            out.push((o, inp, op.entry(o, inp).to_string()));
        }
    }
    out
}

pub fn run(args: &RankArgs, format: Format) -> Result<Report> {
    let n = args.n as usize;
    let b = dense(&braiding(n)?);
    let binv = dense(&braiding_inverse(n)?);
    let m = fusion(n)?;
    let ann: Vec<_> = m
        .annihilation_entries()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
    let cre: Vec<_> = m
        .creation_entries()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
    let inv: Vec<_> = m
        .inverse_entries()
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect();

    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for (name, entries) in [("B", &b), ("B^-1", &binv)] {
                let _ = writeln!(s, "{name} (n={n}, {} entries; in -> out)", entries.len());
                for ((c, d), (a, bb), v) in entries.iter() {
                    let _ = writeln!(s, "  {name}[({a},{bb}) -> ({c},{d})] = {v}");
                }
            }
            let _ = writeln!(s, "fusion phase c0 = {:?}", m.phase());
            for (name, entries) in [("M_", &ann), ("M^", &cre), ("M^-1", &inv)] {
                for ((a, bb), v) in entries.iter() {
                    let _ = writeln!(s, "  {name}({a},{bb}) = {v}");
                }
            }
            s
        }
        Format::Json => {
            let op = |entries: &[Entry]| -> Value {
                entries
                    .iter()
                    .map(|(o, i, v)| json!({"in": [i.0, i.1], "out": [o.0, o.1], "value": v}))
                    .collect()
            };
            let fm = |entries: &[((usize, usize), String)]| -> Value {
                entries
                    .iter()
                    .map(|(k, v)| json!({"pair": [k.0, k.1], "value": v}))
                    .collect()
            };
            json_doc(
                "matrices",
                json!({
                    "n": n,
                    "braiding": op(&b),
                    "braiding_inverse": op(&binv),
                    "fusion_phase": format!("{:?}", m.phase()),
                    "annihilation": fm(&ann),
                    "creation": fm(&cre),
                    "fusion_inverse": fm(&inv),
                }),
            )
        }
    };
    Ok(Report { text, ok: true })
}
