use std::fmt::Write as _;

use anyhow::Result;
use serde_json::json;
use yyknot::lie_an::CartanData;

use crate::output::json_doc;
use crate::{Format, RankArgs, Report};

pub fn run(args: &RankArgs, format: Format) -> Result<Report> {
    let cartan = CartanData::new(args.n as usize)?;
    let chain = cartan.weight_chain();
    let gram = cartan.gram(&chain)?;
    let ok = cartan.duality_holds(&chain)?;
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "weight chain (Dynkin labels):");
            for (i, w) in chain.iter().enumerate() {
                let _ = writeln!(s, "  lambda^{i} = {:?}", render(&w.labels));
            }
            let _ = writeln!(s, "gram matrix:");
            for row in &gram {
                let _ = writeln!(s, "  {}", render(row).join(" "));
            }
            let _ = writeln!(s, "duality: {}", if ok { "holds" } else { "FAILS" });
            s
        }
        Format::Json => json_doc(
            "lie",
            json!({
                "n": args.n,
                "chain": chain.iter().map(|w| render(&w.labels)).collect::<Vec<_>>(),
                "gram": gram.iter().map(|r| render(r)).collect::<Vec<_>>(),
                "duality": ok,
            }),
        ),
    };
    Ok(Report { text, ok })
}

fn render<T: ToString>(row: &[T]) -> Vec<String> {
    row.iter().map(ToString::to_string).collect()
}
