//! Text format for finite algebras.
//!
//! ```text
//! algebra z4
//! signature: mul/2, inv/1, e/0
//! size 4
//! labels: 0 1 2 3
//! op mul:
//! 0 1 2 3  1 2 3 0  2 3 0 1  3 0 1 2
//! op inv:
//! 0 3 2 1
//! op e:
//! 0
//! ```

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::termlang::parse_signature;

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: 1, msg: msg.into() }
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut name = None;
    let mut sig = None;
    let mut size = None;
    let mut labels = None;
    let mut tables: Vec<(usize, String, Vec<u32>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("algebra ") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("signature:") {
            sig = Some(parse_signature(rest).map_err(|e| match e {
                Error::Syntax { col, msg, .. } => Error::Syntax { line: ln, col, msg },
                other => other,
            })?);
        } else if let Some(rest) = line.strip_prefix("size ") {
            size = Some(rest.trim().parse::<usize>().map_err(|_| syntax(ln, "bad size"))?);
        } else if let Some(rest) = line.strip_prefix("labels:") {
            labels = Some(rest.split_whitespace().map(str::to_string).collect::<Vec<_>>());
        } else if let Some(rest) = line.strip_prefix("op ") {
            let op = rest.trim().strip_suffix(':').ok_or_else(|| syntax(ln, "expected `op <name>:`"))?;
            tables.push((ln, op.trim().to_string(), Vec::new()));
        } else {
            let (_, _, cur) = tables.last_mut().ok_or_else(|| syntax(ln, format!("unexpected `{line}`")))?;
            for tok in line.split_whitespace() {
                cur.push(tok.parse::<u32>().map_err(|_| syntax(ln, format!("bad entry `{tok}`")))?);
            }
        }
    }
    let name = name.ok_or_else(|| Error::Format("missing `algebra <name>` header".into()))?;
    let sig = sig.ok_or_else(|| Error::Format("missing `signature:` line".into()))?;
    let size = size.ok_or_else(|| Error::Format("missing `size` line".into()))?;
    let mut ordered = vec![None; sig.len()];
    for (ln, op, t) in tables {
        let s = sig.lookup(&op).ok_or_else(|| Error::UnknownSymbol(op.clone()))?;
        if ordered[s].is_some() {
            return Err(syntax(ln, format!("table for `{op}` given twice")));
        }
        ordered[s] = Some(t);
    }
    let tables = ordered
        .into_iter()
        .enumerate()
        .map(|(s, t)| t.ok_or_else(|| Error::Format(format!("missing table for `{}`", sig.name(s)))))
        .collect::<Result<Vec<_>>>()?;
    let alg = FiniteAlgebra::new(&name, sig, size, tables)?;
    match labels {
        Some(l) => alg.with_labels(l),
        None => Ok(alg),
    }
}

pub fn write_algebra(a: &FiniteAlgebra) -> String {
    let mut out = format!("algebra {}\nsignature: {}\nsize {}\n", a.name(), a.signature(), a.size());
    if let Some(l) = a.labels() {
        out.push_str(&format!("labels: {}\n", l.join(" ")));
    }
    let n = a.size();
    for s in 0..a.signature().len() {
        out.push_str(&format!("op {}:\n", a.signature().name(s)));
        let t = a.table(s);
        let row = if a.signature().arity(s) == 0 { 1 } else { n };
        for chunk in t.chunks(row) {
            let line: Vec<String> = chunk.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;

    #[test]
    fn round_trip() {
        for a in [groups::cyclic(4), groups::quaternion(), groups::symmetric(3)] {
            let text = write_algebra(&a);
            assert_eq!(parse_algebra(&text).unwrap(), a);
        }
    }

    #[test]
    fn errors() {
        let ok = "algebra z2\nsignature: f/1\nsize 2\nop f:\n1 0\n";
        assert!(parse_algebra(ok).is_ok());
        assert!(parse_algebra("algebra z2\nsignature: f/1\nsize 2\nop f:\n1\n").is_err());
        assert!(parse_algebra("algebra z2\nsignature: f/1\nsize 2\nop g:\n1 0\n").is_err());
        assert!(matches!(
            parse_algebra("algebra z2\nsignature: f/1\nsize 2\nop f:\n1 x\n"),
            Err(Error::Syntax { line: 5, .. })
        ));
        assert!(parse_algebra("signature: f/1\nsize 2\nop f:\n1 0\n").is_err());
    }
}
