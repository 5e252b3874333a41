//! Built-in curve names accepted wherever a polynomial is expected.

use num_rational::BigRational;
use num_traits::{Float, FloatConst};

use super::CliError;
use crate::algebra::{parse_poly, UniPoly};
use crate::extension_numeric::CurveHandle;
use crate::padic::jb_curve;

pub const REGISTRY_HELP: &str = "parabola, cubic, monomial:k, jb:k, cosh (real only) or an inline polynomial such as \"x^3 - 2x\"";

fn order_suffix(spec: &str, prefix: &str) -> Result<Option<u32>, CliError> {
    match spec.strip_prefix(prefix) {
        Some(k) => k
            .trim()
            .parse::<u32>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{prefix}k needs a nonnegative integer k, got {spec:?}"))),
        None => Ok(None),
    }
}

/// A polynomial from a registry name or inline text.
pub fn resolve_poly(spec: &str) -> Result<UniPoly<BigRational>, CliError> {
    let spec = spec.trim();
    let text = match spec {
        "parabola" => "x^2".to_string(),
        "cubic" => "x^3".to_string(),
        "cosh" => return Err(CliError::Usage("cosh is not a polynomial; use it with verify-real --handle".into())),
        _ => {
            if let Some(k) = order_suffix(spec, "monomial:")? {
                format!("x^{k}")
            } else if let Some(k) = order_suffix(spec, "jb:")? {
                if k < 3 {
                    return Err(CliError::Usage(format!("jb:k needs k >= 3, got {k}")));
                }
                return Ok(jb_curve(k));
            } else {
                spec.to_string()
            }
        }
    };
    parse_poly(&text).map_err(|e| CliError::Usage(format!("cannot read curve {spec:?} ({e}); expected {REGISTRY_HELP}")))
}

/// A real curve handle; `cosh` is `cosh t − 1`, everything else is a polynomial.
pub fn resolve_real_handle<T: Float + FloatConst + Send + Sync + 'static>(spec: &str) -> Result<CurveHandle<T>, CliError> {
    if spec.trim() == "cosh" {
        Ok(CurveHandle::cosh_minus_one())
    } else {
        Ok(CurveHandle::from_poly(&resolve_poly(spec)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(resolve_poly("parabola").unwrap(), parse_poly("x^2").unwrap());
        assert_eq!(resolve_poly("monomial:5").unwrap(), parse_poly("x^5").unwrap());
        assert_eq!(resolve_poly("jb:4").unwrap(), parse_poly("2x^4 - 4x^2").unwrap());
        assert_eq!(resolve_poly("x^3 + 1/2 x").unwrap(), parse_poly("x^3 + x/2").unwrap());
        assert!(resolve_poly("monomial:x").is_err());
        assert!(resolve_poly("cosh").is_err());
        assert_eq!(resolve_real_handle::<f64>("cosh").unwrap().name(), CurveHandle::<f64>::cosh_minus_one().name());
    }
}
