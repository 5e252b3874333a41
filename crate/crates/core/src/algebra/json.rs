use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::multivariate::MultiPoly;
use super::ring::Domain;
use super::univariate::UniPoly;
use super::AlgebraError;

/// Wire format for rational polynomials:
/// `{"vars": [...], "terms": [{"exp": [..], "num": "...", "den": "..."}]}`
/// with big integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

fn term(exp: Vec<u32>, c: &BigRational) -> TermJson {
    TermJson { exp, num: c.numer().to_string(), den: c.denom().to_string() }
}

impl PolyJson {
    pub fn from_uni(p: &UniPoly<BigRational>, var: &str) -> Self {
        // Highest degree first reads naturally.
        let mut terms: Vec<TermJson> = p.terms().map(|(e, c)| term(vec![e], c)).collect();
        terms.reverse();
        Self { vars: vec![var.to_string()], terms }
    }

    pub fn from_multi<const N: usize>(p: &MultiPoly<BigRational, N>, vars: [&str; N]) -> Self {
        let mut terms: Vec<TermJson> = p.terms().map(|(e, c)| term(e.to_vec(), c)).collect();
        terms.reverse();
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), terms }
    }

    fn coeff(t: &TermJson) -> Result<BigRational, AlgebraError> {
        let num: BigInt = t.num.parse().map_err(|_| AlgebraError::Json(format!("bad numerator {:?}", t.num)))?;
        let den: BigInt = t.den.parse().map_err(|_| AlgebraError::Json(format!("bad denominator {:?}", t.den)))?;
        if den <= BigInt::from(0) {
            return Err(AlgebraError::Json(format!("denominator must be positive, got {den}")));
        }
        Ok(BigRational::new(num, den))
    }

    pub fn to_uni(&self) -> Result<UniPoly<BigRational>, AlgebraError> {
        if self.vars.len() != 1 {
            return Err(AlgebraError::Json(format!("expected 1 variable, found {}", self.vars.len())));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let [e] = t.exp[..] else {
                return Err(AlgebraError::Json(format!("exponent vector {:?} has wrong length", t.exp)));
            };
            terms.push((e, Self::coeff(t)?));
        }
        Ok(UniPoly::from_terms(Domain::Rational, terms))
    }

    pub fn to_multi<const N: usize>(&self) -> Result<MultiPoly<BigRational, N>, AlgebraError> {
        if self.vars.len() != N {
            return Err(AlgebraError::Json(format!("expected {N} variables, found {}", self.vars.len())));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let exp: [u32; N] = t
                .exp
                .as_slice()
                .try_into()
                .map_err(|_| AlgebraError::Json(format!("exponent vector {:?} has wrong length", t.exp)))?;
            terms.push((exp, Self::coeff(t)?));
        }
        Ok(MultiPoly::from_terms(Domain::Rational, terms))
    }
}
