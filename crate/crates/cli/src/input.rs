use std::fmt;
use std::path::Path;

use omegalab::algebra::{parse_polynomial, ParseError, Polynomial};
use omegalab::polymatroid::SetFunction;

/// Anything that should end the run with the usage exit status.
#[derive(Debug)]
pub enum InputError {
    Usage(String),
    Parse { text: String, error: ParseError },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Usage(msg) => write!(f, "error: {msg}"),
            InputError::Parse { text, error } => {
                write!(f, "error: {error}")?;
                if let Some(pos) = error.position() {
                    let line = text.replace('\n', " ");
                    let caret = line.chars().take(pos).count();
                    write!(f, "\n  {line}\n  {}^", " ".repeat(caret))?;
                }
                Ok(())
            }
        }
    }
}

pub fn usage(msg: impl Into<String>) -> InputError {
    InputError::Usage(msg.into())
}

/// The polynomial text from exactly one of an inline argument or a file.
pub fn polynomial_text(inline: Option<&str>, file: Option<&Path>) -> Result<String, InputError> {
    match (inline, file) {
        (Some(_), Some(_)) => Err(usage("give either an inline polynomial or --file, not both")),
        (None, None) => Err(usage("no polynomial given (pass it inline or with --file)")),
        (Some(t), None) => Ok(t.to_string()),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map(|s| {
                s.lines()
                    .filter(|l| !l.trim_start().starts_with('#'))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .map_err(|e| usage(format!("cannot read {}: {e}", p.display()))),
    }
}

/// Identifiers in order of (alphabetic prefix, numeric suffix).
pub fn infer_vars(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, names: &mut Vec<String>| {
        if !cur.is_empty() && !names.contains(cur) {
            names.push(cur.clone());
        }
        cur.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphabetic() || c == '_' || (!cur.is_empty() && c.is_ascii_alphanumeric()) {
            cur.push(c);
        } else {
            flush(&mut cur, &mut names);
        }
    }
    flush(&mut cur, &mut names);
    names.sort_by_key(|name| {
        let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (prefix, digits) = name.split_at(split);
        (prefix.to_string(), digits.parse::<u64>().unwrap_or(0), name.clone())
    });
    names
}

pub fn split_vars(spec: &str) -> Result<Vec<String>, InputError> {
    let vars: Vec<String> = spec.split(',').map(|s| s.trim().to_string()).collect();
    if vars.iter().any(|v| v.is_empty()) {
        return Err(usage(format!("bad variable list `{spec}`")));
    }
    Ok(vars)
}

pub fn load_polynomial(
    inline: Option<&str>,
    file: Option<&Path>,
    vars: Option<&str>,
) -> Result<(Polynomial, Vec<String>), InputError> {
    let text = polynomial_text(inline, file)?;
    let vars = match vars {
        Some(v) => split_vars(v)?,
        None => infer_vars(&text),
    };
    if vars.is_empty() {
        return Err(usage("no variables (pass --vars)"));
    }
    let p = parse_polynomial(&text, &vars).map_err(|error| InputError::Parse { text, error })?;
    Ok((p, vars))
}

/// Comma separated rational numbers.
pub fn rational_list(spec: &str, name: &str) -> Result<Vec<omegalab::algebra::Rational>, InputError> {
    spec.split(',')
        .map(|s| omegalab::algebra::parse_rational(s.trim()).ok_or_else(|| usage(format!("bad number `{s}` in {name}"))))
        .collect()
}

/// Basis list such as `12,13,14,23,24,34`, elements written as 1-based
/// digits. `ground` extends the ground set beyond the largest element.
pub fn matroid(spec: &str, ground: Option<usize>) -> Result<SetFunction, InputError> {
    let mut bases = Vec::new();
    for word in spec.split(',').map(str::trim) {
        let mut basis = Vec::new();
        for c in word.chars() {
            let digit = c
                .to_digit(10)
                .filter(|&d| d >= 1)
                .ok_or_else(|| usage(format!("bad element `{c}` in basis `{word}` (use digits 1-9)")))?;
            basis.push(digit as usize - 1);
        }
        bases.push(basis);
    }
    let largest = bases.iter().flatten().map(|&e| e + 1).max().unwrap_or(0);
    let n = ground.unwrap_or(largest);
    if n < largest {
        return Err(usage(format!("--ground {n} is smaller than element {largest}")));
    }
    SetFunction::matroid_from_bases(n, &bases).map_err(|e| usage(e.to_string()))
}

/// Full value table of length `2^n` in bitmask order.
pub fn table(spec: &str) -> Result<SetFunction, InputError> {
    let values: Vec<i64> = spec
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| usage(format!("bad table entry `{s}`"))))
        .collect::<Result<_, _>>()?;
    let len = values.len();
    if !len.is_power_of_two() {
        return Err(usage(format!("table has {len} entries, expected a power of two")));
    }
    SetFunction::new(len.trailing_zeros() as usize, values).map_err(|e| usage(e.to_string()))
}
