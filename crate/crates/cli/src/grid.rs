//! Grid syntax: comma-separated items, each a number, an inclusive integer
//! range `a..b`, a stepped range `a..b:step`, or `a..b@k` for `k`
//! log-spaced points.

use crate::error::CliError;

fn bad(key: &str, text: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid grid for {key}: {text:?} ({why})"))
}

fn number(key: &str, text: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw.trim().parse().map_err(|_| bad(key, text, format!("{raw:?} is not a number")))?;
    if !v.is_finite() {
        return Err(bad(key, text, "values must be finite"));
    }
    Ok(v)
}

/// Expands a grid into its values in the order written. Duplicates are kept
/// out; the first occurrence wins.
pub fn parse_real(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(bad(key, text, "empty item"));
        }
        let Some((lo, rest)) = item.split_once("..") else {
            out.push(number(key, text, item)?);
            continue;
        };
        let lo = number(key, text, lo)?;
        if let Some((hi, k)) = rest.split_once('@') {
            let hi = number(key, text, hi)?;
            let k: usize = k.trim().parse().map_err(|_| bad(key, text, "point count after @"))?;
            if k < 2 || lo <= 0.0 || hi <= lo {
                return Err(bad(key, text, "log ranges need 0 < a < b and at least 2 points"));
            }
            let (a, b) = (lo.ln(), hi.ln());
            out.extend((0..k).map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp()));
        } else {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (number(key, text, hi)?, number(key, text, step)?),
                None => (number(key, text, rest)?, 1.0),
            };
            if step <= 0.0 || hi < lo {
                return Err(bad(key, text, "ranges need a <= b and a positive step"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize;
            if count > 10_000_000 {
                return Err(bad(key, text, "range too long"));
            }
            out.extend((0..=count).map(|i| lo + step * i as f64));
        }
    }
    let mut seen = Vec::with_capacity(out.len());
    for v in out {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    Ok(seen)
}

/// Integer grid; log-spaced points are rounded to the nearest integer.
pub fn parse_int(key: &str, text: &str) -> Result<Vec<u64>, CliError> {
    let mut out: Vec<u64> = Vec::new();
    for v in parse_real(key, text)? {
        let log_item = text.contains('@');
        let r = v.round();
        if !log_item && (v - r).abs() > 1e-9 {
            return Err(bad(key, text, format!("{v} is not an integer")));
        }
        if r < 0.0 || r > u64::MAX as f64 {
            return Err(bad(key, text, format!("{v} out of range")));
        }
        let r = r as u64;
        if !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_int("n", "2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_int("n", "2, 4..6, 4").unwrap(), vec![2, 4, 5, 6]);
        assert_eq!(parse_real("e", "0.6,0.52").unwrap(), vec![0.6, 0.52]);
        let stepped = parse_real("e", "0.01..0.05:0.01").unwrap();
        assert_eq!(stepped.len(), 5);
        assert!((stepped[4] - 0.05).abs() < 1e-15);
    }

    #[test]
    fn log_ranges() {
        let m = parse_int("m", "10..1000000@100").unwrap();
        assert_eq!(m.len(), 100);
        assert_eq!((m[0], m[99]), (10, 1_000_000));
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "a", "5..2", "1..3:0", "1.5", "1,,2", "0..10@5", "1..2@1"] {
            assert!(parse_int("n", text).is_err(), "{text}");
        }
        assert!(parse_real("e", "nan").is_err());
    }
}
