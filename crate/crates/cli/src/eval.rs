use anyhow::{Context, Result};
use serde_json::json;
use yyknot::tangle::{parse_morse, Evaluator, OrientedDiagram};

use crate::output::json_doc;
use crate::{EvalArgs, Format, Report};

pub fn run(args: &EvalArgs, format: Format) -> Result<Report> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let link = parse_morse(&text).with_context(|| format!("parsing {}", args.file.display()))?;
    let diagram = OrientedDiagram::flipping(link, &args.flip_component)?;
    let ev = Evaluator::new(args.n as usize)?;
    let inv = ev.invariants(&diagram);
    let text = match format {
        Format::Text => format!(
            "components: {}\nbracket: {}\nwrithe: {}\nhomfly: {}\n",
            diagram.components(),
            inv.bracket,
            inv.writhe,
            inv.homfly
        ),
        Format::Json => json_doc(
            "eval",
            json!({
                "n": args.n,
                "components": diagram.components(),
                "flips": diagram.flips(),
                "bracket": inv.bracket.to_string(),
                "writhe": inv.writhe,
                "homfly": inv.homfly.to_string(),
                "bracket_terms": inv.bracket,
                "homfly_terms": inv.homfly,
            }),
        ),
    };
    Ok(Report { text, ok: true })
}
