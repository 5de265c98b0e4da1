//! `--key value` overrides applied on top of a config document.

use cvdv_bench::{BenchError, Config, Result};
use toml::{Table, Value};

const TOP_LEVEL: &[&str] = &["seed", "jobs", "benchmarks"];

/// Short names accepted on the command line.
fn alias<'a>(section: &str, key: &'a str) -> &'a str {
    match (section, key) {
        ("gkp", "nd") => "stages",
        ("vqe", "W") => "capacity",
        _ => key,
    }
}

/// Split `--a 1 --b.c x` into pairs. Values that are not TOML literals are
/// taken as strings.
pub fn parse_pairs(args: &[String]) -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .ok_or_else(|| BenchError::Config(format!("expected --key, got '{flag}'")))?;
        let (key, raw) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| BenchError::Config(format!("--{key} needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        out.push((key, literal(&raw)));
    }
    Ok(out)
}

fn literal(raw: &str) -> Value {
    match toml::from_str::<Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.into())),
        Err(_) => Value::String(raw.into()),
    }
}

/// Apply overrides; bare keys go to `section` unless they are top-level.
pub fn apply(cfg: &Config, section: Option<&str>, pairs: &[(String, Value)]) -> Result<Config> {
    let mut doc: Table = toml::from_str(&cfg.to_toml()).map_err(|e| BenchError::Config(e.to_string()))?;
    for (key, value) in pairs {
        let (table, field) = match key.split_once('.') {
            Some((t, f)) => (Some(t), f),
            None if TOP_LEVEL.contains(&key.as_str()) => (None, key.as_str()),
            None => (section, key.as_str()),
        };
        let value = match value {
            // Integers are accepted where floats are expected.
            Value::Integer(i) if is_float_field(&doc, table, field) => Value::Float(*i as f64),
            v => v.clone(),
        };
        match table {
            None => {
                doc.insert(field.to_string(), value);
            }
            Some(t) => {
                let field = alias(t, field);
                let entry = doc.entry(t.to_string()).or_insert_with(|| Value::Table(Table::new()));
                let tab = entry
                    .as_table_mut()
                    .ok_or_else(|| BenchError::Config(format!("'{t}' is not a config section")))?;
                tab.insert(field.to_string(), value);
            }
        }
    }
    let text = toml::to_string(&doc).map_err(|e| BenchError::Config(e.to_string()))?;
    Config::from_toml(&text)
}

fn is_float_field(doc: &Table, table: Option<&str>, field: &str) -> bool {
    let current = match table {
        None => doc.get(field),
        Some(t) => doc.get(t).and_then(|v| v.as_table()).and_then(|t| t.get(field)),
    };
    matches!(current, Some(Value::Float(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_and_alias() {
        let pairs = parse_pairs(&["--nd".into(), "5".into(), "--squeeze=0.3".into(), "--seed".into(), "9".into()]).unwrap();
        let cfg = apply(&Config::default(), Some("gkp"), &pairs).unwrap();
        assert_eq!(cfg.gkp.stages, 5);
        assert_eq!(cfg.gkp.squeeze, 0.3);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn integer_for_float_field() {
        let pairs = parse_pairs(&["--alpha".into(), "2".into()]).unwrap();
        assert_eq!(apply(&Config::default(), Some("cat"), &pairs).unwrap().cat.alpha, 2.0);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let pairs = parse_pairs(&["--bogus".into(), "1".into()]).unwrap();
        assert!(apply(&Config::default(), Some("cat"), &pairs).is_err());
    }
}
