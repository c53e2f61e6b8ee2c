//! Text formats for instances.
//!
//! * Set-function tables: first line `n`, then `2^n` lines `bitmask value`.
//!   Bitmasks are decimal or `0b`-prefixed binary; bit `i` is element `i`.
//!   Blank lines and `#` comments are ignored.
//! * Quadratics: JSON `{"hessian": [[..]], "linear": [..]}` (`H`/`h` accepted).
//! * Halfspace matrices: one row per line, whitespace-separated, with the
//!   right-hand side in the last column (`a_1 .. a_n b` means `aᵀx <= b`).
//! * Regions: `box`, `covering`, `cardinality:K`, `knapsack:w1,..,wn:B`,
//!   `halfspaces:PATH`, or a path to a JSON region.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::objectives::{MultilinearExtension, Objective, Quadratic, QuadraticSpec, SetFunctionTable};
use crate::regions::{Region, RegionKind};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::Parse(format!("line {line}: '{token}' is not a number")))
}

pub fn parse_set_function_table(text: &str) -> Result<SetFunctionTable> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?;
    let n: usize =
        header.parse().map_err(|_| Error::Parse(format!("line {first}: expected ground-set size, got '{header}'")))?;
    if n == 0 || n > crate::objectives::MAX_GROUND_SET {
        return Err(Error::InvalidObjective(format!("ground set size {n} is outside 1..=20")));
    }
    let size = 1usize << n;
    let mut values = vec![None; size];
    for (line, content) in lines {
        let mut tokens = content.split_whitespace();
        let (Some(mask), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse(format!("line {line}: expected 'bitmask value'")));
        };
        let mask = match mask.strip_prefix("0b") {
            Some(bits) => usize::from_str_radix(bits, 2),
            None => mask.parse(),
        }
        .map_err(|_| Error::Parse(format!("line {line}: bad bitmask '{mask}'")))?;
        if mask >= size {
            return Err(Error::Parse(format!("line {line}: bitmask {mask} out of range for n = {n}")));
        }
        if values[mask].replace(parse_f64(value, line)?).is_some() {
            return Err(Error::Parse(format!("line {line}: duplicate bitmask {mask}")));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(mask, v)| v.ok_or_else(|| Error::Parse(format!("missing entry for bitmask {mask}"))))
        .collect::<Result<Vec<_>>>()?;
    SetFunctionTable::new(n, values)
}

pub fn format_set_function_table(table: &SetFunctionTable) -> String {
    let mut out = format!("{}\n", table.n());
    for (mask, v) in table.values().iter().enumerate() {
        let _ = writeln!(out, "{mask} {v}");
    }
    out
}

pub fn parse_matrix_text(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = content_lines(text)
        .map(|(line, content)| content.split_whitespace().map(|t| parse_f64(t, line)).collect())
        .collect::<Result<_>>()?;
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(Error::Parse("matrix rows have different lengths".into()));
        }
    }
    Ok(rows)
}

pub fn parse_quadratic_spec(text: &str) -> Result<QuadraticSpec> {
    Ok(serde_json::from_str(text)?)
}

/// Either supported objective family, loaded from a file.
#[derive(Debug, Clone)]
pub enum AnyObjective {
    Quadratic(Quadratic),
    Multilinear(MultilinearExtension),
}

impl AnyObjective {
    pub fn as_multilinear(&self) -> Option<&MultilinearExtension> {
        match self {
            AnyObjective::Multilinear(m) => Some(m),
            AnyObjective::Quadratic(_) => None,
        }
    }

    /// Structural problems found when the objective was loaded unchecked.
    pub fn issues(&self) -> Vec<String> {
        match self {
            AnyObjective::Quadratic(q) => q.spec().issues(),
            AnyObjective::Multilinear(m) => m
                .table()
                .submodularity_violation()
                .map(|v| format!("not submodular at S={:#b}, i={}, j={}", v.subset, v.i, v.j))
                .into_iter()
                .collect(),
        }
    }
}

impl Objective for AnyObjective {
    fn dim(&self) -> usize {
        match self {
            AnyObjective::Quadratic(q) => q.dim(),
            AnyObjective::Multilinear(m) => m.dim(),
        }
    }
    fn value(&self, x: &[f64]) -> f64 {
        match self {
            AnyObjective::Quadratic(q) => q.value(x),
            AnyObjective::Multilinear(m) => m.value(x),
        }
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            AnyObjective::Quadratic(q) => q.gradient(x),
            AnyObjective::Multilinear(m) => m.gradient(x),
        }
    }
    fn smoothness(&self) -> Option<f64> {
        match self {
            AnyObjective::Quadratic(q) => q.smoothness(),
            AnyObjective::Multilinear(m) => m.smoothness(),
        }
    }
}

/// Loads `*.json` as a quadratic and anything else as a set-function table.
/// With `validate = false` only shape errors are rejected.
pub fn load_objective(path: &Path, validate: bool) -> Result<AnyObjective> {
    let text = std::fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let spec = parse_quadratic_spec(&text)?;
        let q = if validate { Quadratic::new(spec)? } else { Quadratic::new_unchecked(spec)? };
        Ok(AnyObjective::Quadratic(q))
    } else {
        let table = parse_set_function_table(&text)?;
        let m = if validate { MultilinearExtension::new(table)? } else { MultilinearExtension::new_unchecked(table) };
        Ok(AnyObjective::Multilinear(m))
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|t| parse_f64(t.trim(), 1)).collect()
}

/// Parses a region description for an objective of dimension `dim`.
pub fn parse_region(spec: &str, dim: usize) -> Result<Region> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "box" if rest.is_empty() => Ok(Region::unit_box(dim)),
        "covering" if rest.is_empty() => Region::covering(dim),
        "cardinality" => Region::cardinality(dim, parse_f64(rest, 1)?),
        "knapsack" => {
            let (w, b) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse("knapsack region needs 'knapsack:w1,..,wn:B'".into()))?;
            let weights = parse_list(w)?;
            if weights.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: weights.len() });
            }
            Region::knapsack(weights, parse_f64(b, 1)?)
        }
        "halfspaces" => {
            let rows = parse_matrix_text(&std::fs::read_to_string(rest)?)?;
            let (a, b) = rows
                .into_iter()
                .map(|mut r| {
                    if r.len() != dim + 1 {
                        return Err(Error::Parse(format!("halfspace rows need {} columns (a and b)", dim + 1)));
                    }
                    let b = r.pop().unwrap_or_default();
                    Ok((r, b))
                })
                .collect::<Result<(Vec<_>, Vec<_>)>>()?;
            Region::halfspaces(dim, a, b)
        }
        _ if spec.ends_with(".json") => {
            let region: Region = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
            if region.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: region.dim() });
            }
            Ok(region)
        }
        _ => Err(Error::Parse(format!(
            "unknown region '{spec}' (expected box, covering, cardinality:K, knapsack:W:B, halfspaces:PATH or a .json file)"
        ))),
    }
}

/// Inverse of [`parse_region`] for the inline kinds; `None` for halfspaces.
pub fn region_to_spec(region: &Region) -> Option<String> {
    match region.kind() {
        RegionKind::Box => Some("box".into()),
        RegionKind::Cardinality { k } => Some(format!("cardinality:{k}")),
        RegionKind::Knapsack { weights, budget } => {
            Some(format!("knapsack:{}:{budget}", weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")))
        }
        RegionKind::Halfspaces { .. } => None,
    }
}
