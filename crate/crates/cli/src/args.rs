use std::fmt;
use std::str::FromStr;

/// A list of angles written as `start:stop:count` (inclusive, evenly spaced),
/// a comma list, or a single value. The original text is kept for echoing.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    pub values: Vec<f64>,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = |what: &str| format!("invalid grid {s:?}: {what}");
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("expected start:stop:count"));
            }
            let a: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| bad("start is not a number"))?;
            let b: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| bad("stop is not a number"))?;
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| bad("count is not an integer"))?;
            match n {
                0 => return Err(bad("count must be positive")),
                1 => vec![a],
                _ => (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        } else {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad("not a number")))
                .collect::<Result<Vec<_>, _>>()?
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad("values must be finite"));
        }
        Ok(Self {
            text: s.to_string(),
            values,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Non-negative integers: comma-separated items, each `k`, `a:b` or `a:b:step`
/// (inclusive ranges).
#[derive(Debug, Clone, PartialEq)]
pub struct IntList {
    text: String,
    pub values: Vec<usize>,
}

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = |what: &str| format!("invalid integer list {s:?}: {what}");
        let mut values = Vec::new();
        for item in s.split(',') {
            let parts = item
                .split(':')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| bad("not a non-negative integer"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            match parts.as_slice() {
                [k] => values.push(*k),
                [a, b] if a <= b => values.extend(*a..=*b),
                [a, b, step] if a <= b && *step > 0 => values.extend((*a..=*b).step_by(*step)),
                _ => return Err(bad("expected k, a:b or a:b:step with a <= b")),
            }
        }
        if values.is_empty() {
            return Err(bad("empty"));
        }
        Ok(Self {
            text: s.to_string(),
            values,
        })
    }
}

impl fmt::Display for IntList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
