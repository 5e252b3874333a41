//! Exact solution counts for `φ(m1)+φ(m2) = φ(n1)+φ(n2)`, `m1+m2 = n1+n2`
//! over ordered quadruples from a finite integer set.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::algebra::{checked_prime_power, is_integral, is_prime, UniPoly};
use crate::report::VerificationReport;

#[derive(Debug, Error)]
pub enum DiophantineError {
    #[error("the set of integers is empty")]
    EmptySet,
    #[error("phi must have integer coefficients and degree at least 2")]
    BadCurve,
    #[error("quadruple {0:?} does not solve the system")]
    NotASolution([i64; 4]),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("bad set spec {spec:?}: {reason}")]
    BadSetSpec { spec: String, reason: String },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionClass {
    Diagonal,
    Antidiagonal,
    Other,
}

/// Counts of ordered solution quadruples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionTally {
    pub set_size: u64,
    pub total: u64,
    pub diagonal: u64,
    pub antidiagonal: u64,
    pub other: u64,
    /// Solutions with `m1 ≡ n1` and `m2 ≡ n2` mod `p^i`, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residue_constrained: Option<u64>,
}

fn integer_coeffs(phi: &UniPoly<BigRational>) -> Result<Vec<(u32, BigInt)>, DiophantineError> {
    if phi.degree().unwrap_or(0) < 2 || !phi.terms().all(|(_, c)| is_integral(c)) {
        return Err(DiophantineError::BadCurve);
    }
    Ok(phi.terms().map(|(e, c)| (e, c.to_integer())).collect())
}

fn eval_int(coeffs: &[(u32, BigInt)], x: i64) -> BigInt {
    let x = BigInt::from(x);
    coeffs.iter().map(|(e, c)| c * x.pow(*e)).sum()
}

fn dedup(set: &[i64]) -> Vec<i64> {
    set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Hash-join count over the key `(m1+m2, φ(m1)+φ(m2))`; with `residue =
/// Some((p, i))` also counts the subset where the pairs agree mod `p^i`.
pub fn count_solutions(
    phi: &UniPoly<BigRational>,
    set: &[i64],
    residue: Option<(u64, u32)>,
) -> Result<SolutionTally, DiophantineError> {
    let coeffs = integer_coeffs(phi)?;
    let a = dedup(set);
    if a.is_empty() {
        return Err(DiophantineError::EmptySet);
    }
    let q = match residue {
        Some((p, i)) => Some(
            checked_prime_power(p, i)
                .ok_or_else(|| DiophantineError::HypothesisFailed(format!("modulus {p}^{i} too large")))?
                as i64,
        ),
        None => None,
    };
    let values: Vec<BigInt> = a.iter().map(|x| eval_int(&coeffs, *x)).collect();

    // Per key: number of pairs and number of diagonal partners inside the group.
    let mut groups: HashMap<(i64, BigInt), (u64, u64)> = HashMap::new();
    let mut constrained: HashMap<(i64, BigInt, i64, i64), u64> = HashMap::new();
    for (i, m1) in a.iter().enumerate() {
        for (j, m2) in a.iter().enumerate() {
            let key = (m1 + m2, &values[i] + &values[j]);
            if let Some(q) = q {
                *constrained.entry((key.0, key.1.clone(), m1.rem_euclid(q), m2.rem_euclid(q))).or_default() += 1;
            }
            let g = groups.entry(key).or_default();
            g.0 += 1;
            g.1 += if i == j { 1 } else { 2 };
        }
    }
    let n = a.len() as u64;
    let total: u64 = groups.values().map(|(c, _)| c * c).sum();
    let diagonal = 2 * n * n - n;
    let antidiagonal: u64 = groups.iter().filter(|((s, _), _)| *s == 0).map(|(_, (c, d))| c * c - d).sum();
    Ok(SolutionTally {
        set_size: n,
        total,
        diagonal,
        antidiagonal,
        other: total - diagonal - antidiagonal,
        residue_constrained: q.map(|_| constrained.values().map(|c| c * c).sum()),
    })
}

pub fn classify_solution(quad: [i64; 4], phi: &UniPoly<BigRational>) -> Result<SolutionClass, DiophantineError> {
    let coeffs = integer_coeffs(phi)?;
    let [m1, m2, n1, n2] = quad;
    let solves =
        m1 + m2 == n1 + n2 && eval_int(&coeffs, m1) + eval_int(&coeffs, m2) == eval_int(&coeffs, n1) + eval_int(&coeffs, n2);
    if !solves {
        return Err(DiophantineError::NotASolution(quad));
    }
    Ok(if (m1, m2) == (n1, n2) || (m1, m2) == (n2, n1) {
        SolutionClass::Diagonal
    } else if m1 + m2 == 0 && n1 + n2 == 0 {
        SolutionClass::Antidiagonal
    } else {
        SolutionClass::Other
    })
}

/// Compares `total` against `residue_constrained`; the counting argument bounds
/// their ratio by `deg φ` when `p` exceeds the degree and every coefficient.
pub fn discrete_ratio_report(
    phi: &UniPoly<BigRational>,
    set: &[i64],
    p: u64,
    i: u32,
) -> Result<VerificationReport, DiophantineError> {
    let coeffs = integer_coeffs(phi)?;
    let deg = phi.degree().expect("checked") as u64;
    if !is_prime(p) {
        return Err(DiophantineError::HypothesisFailed(format!("{p} is not prime")));
    }
    if p <= deg {
        return Err(DiophantineError::HypothesisFailed(format!("p = {p} must exceed deg phi = {deg}")));
    }
    let pb = BigInt::from(p);
    if let Some((_, c)) = coeffs.iter().find(|(_, c)| c.abs() >= pb) {
        return Err(DiophantineError::HypothesisFailed(format!("p = {p} must exceed every |coefficient|, found {c}")));
    }
    let tally = count_solutions(phi, set, Some((p, i)))?;
    let constrained = tally.residue_constrained.expect("requested");
    let ratio = tally.total as f64 / constrained as f64;
    let set_sorted = dedup(set);
    Ok(VerificationReport::new(
        "discrete-ratio",
        "fourth-moment counting bound for exponential sums over integer sets",
        json!({
            "phi": format!("{phi:?}"),
            "set_size": tally.set_size,
            "set_min": set_sorted.first(),
            "set_max": set_sorted.last(),
            "p": p,
            "i": i,
        }),
    )
    .quantity("tally", &tally)
    .quantity("norm_ratio_fourth_root", ratio.powf(0.25))
    .quantity("constant_fourth_root", (deg as f64).powf(0.25))
    .conclude(ratio, deg as f64, "deg(phi); norm constant deg(phi)^(1/4)", 0.0))
}

/// Parses `range:a..b` (inclusive), `list:1,2,5` or `file:PATH` (one integer per line).
pub fn parse_set_spec(spec: &str) -> Result<Vec<i64>, DiophantineError> {
    let bad = |reason: &str| DiophantineError::BadSetSpec { spec: spec.into(), reason: reason.into() };
    let (kind, body) = spec.split_once(':').ok_or_else(|| bad("expected kind:value"))?;
    let parse_int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad(&format!("not an integer: {s:?}")));
    match kind {
        "range" => {
            let (a, b) = body.split_once("..").ok_or_else(|| bad("expected a..b"))?;
            let (a, b) = (parse_int(a)?, parse_int(b)?);
            if a > b {
                return Err(bad("empty range"));
            }
            Ok((a..=b).collect())
        }
        "list" => body.split(',').filter(|s| !s.trim().is_empty()).map(parse_int).collect(),
        "file" => {
            let text = std::fs::read_to_string(Path::new(body))
                .map_err(|source| DiophantineError::Io { path: body.into(), source })?;
            text.lines().filter(|l| !l.trim().is_empty()).map(parse_int).collect()
        }
        _ => Err(bad("kind must be range, list or file")),
    }
}
