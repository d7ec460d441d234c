use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

pub const FORMAT_VERSION: u32 = 1;

/// Pretty JSON with the version field first, newline terminated.
pub fn json_doc(command: &str, mut body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("format_version".into(), json!(FORMAT_VERSION));
    doc.insert("command".into(), json!(command));
    if let Value::Object(map) = &mut body {
        doc.append(map);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{:.12e}-{:.12e}i", z.re, -z.im)
    } else {
        format!("{:.12e}+{:.12e}i", z.re, z.im)
    }
}

pub fn complex_list(w: &[Complex64]) -> String {
    let parts: Vec<String> = w.iter().map(|z| complex(*z)).collect();
    format!("[{}]", parts.join(", "))
}

/// `re,im;re,im;...`
pub fn parse_points(text: &str) -> Result<Vec<Complex64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|pair| {
            let mut it = pair.split(',');
            let (Some(re), Some(im), None) = (it.next(), it.next(), it.next()) else {
                bail!("expected re,im but got {pair:?}");
            };
            let re: f64 = re
                .trim()
                .parse()
                .with_context(|| format!("bad real part in {pair:?}"))?;
            let im: f64 = im
                .trim()
                .parse()
                .with_context(|| format!("bad imaginary part in {pair:?}"))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        assert_eq!(
            parse_points("1,2; -0.5,0").unwrap(),
            vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)]
        );
        assert!(parse_points("1;2").is_err());
        assert!(parse_points("").unwrap().is_empty());
    }

    #[test]
    fn version_first() {
        let s = json_doc("x", json!({"a": 1}));
        assert!(s.starts_with("{\n  \"format_version\": 1,"));
    }
}
