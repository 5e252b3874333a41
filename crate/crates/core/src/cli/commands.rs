use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::registry::{resolve_poly, resolve_real_handle};
use super::*;
use crate::algebra::{float_to_rational, MultiPoly, PolyJson, UniPoly};
use crate::complexcurve::{check_complex_hypotheses, sod_zero_census, AnalyticHandle, ContourSpec};
use crate::diophantine::{discrete_ratio_report, parse_set_spec};
use crate::extension_numeric::{verify_convex_theorem, verify_real_theorem, RealTheoremOptions, WeightKind};
use crate::extension_padic::{verify_padic_theorem, PadicMomentInstance};
use crate::padic::{find_sod_split_primes, hensel_lift_residue, reduce_poly, simple_roots_mod_p, verify_prop_jb};
use crate::partitions::{estimate_c_phi, kdv_all_bases, kdv_pair_count, KdvContext, PartitionSpec};
use crate::rolle::{check_prop_rolle_fails, check_rolle_failure};
use crate::sod::{first_order_difference, second_order_difference, CurveSpec, Field};

fn rejected(e: impl std::fmt::Display) -> CliError {
    CliError::Rejected(e.to_string())
}

fn value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

pub(super) fn run(command: &Command, seed: Option<u64>) -> Result<Envelope, CliError> {
    match command {
        Command::Sod(a) => sod(a),
        Command::Hensel(a) => hensel(a),
        Command::JbVerify(a) => jb_verify(a),
        Command::PrimeSearch(a) => prime_search(a),
        Command::KdvCount(a) => kdv_count(a),
        Command::DioCount(a) => dio_count(a),
        Command::VerifyReal(a) => match a.precision {
            PrecisionArg::F64 => verify_real::<f64>(a),
            PrecisionArg::F32 => verify_real::<f32>(a),
        },
        Command::VerifyPadic(a) => verify_padic(a),
        Command::Voorhoeve(a) => voorhoeve(a, seed.unwrap_or(0)),
        Command::Rolle(a) => rolle(a),
        Command::Batch(_) => Err(CliError::Usage("batch jobs cannot run batch".into())),
    }
}

fn format_coeff(c: &BigRational, first: bool, monomial: &str) -> String {
    let sign = if c.is_negative() {
        if first {
            "-"
        } else {
            " - "
        }
    } else if first {
        ""
    } else {
        " + "
    };
    let a = c.abs();
    let body = if monomial.is_empty() {
        a.to_string()
    } else if a.is_one() {
        monomial.to_string()
    } else {
        format!("{a}{monomial}")
    };
    format!("{sign}{body}")
}

/// Human-readable form such as `3X + 3Y`, highest terms first.
pub fn format_multi<const N: usize>(p: &MultiPoly<BigRational, N>, vars: [&str; N]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<_> = p.terms().collect();
    let mut ordered = terms.clone();
    ordered.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    let mut out = String::new();
    for (i, (exp, c)) in ordered.into_iter().enumerate() {
        let monomial: String = exp
            .iter()
            .zip(vars.iter())
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        out.push_str(&format_coeff(c, i == 0, &monomial));
    }
    out
}

fn sod(a: &SodArgs) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi)?;
    let chi = first_order_difference(&phi).map_err(rejected)?;
    let psi = second_order_difference(&phi).map_err(rejected)?;
    let result = json!({
        "phi": phi.to_string(),
        "chi": PolyJson::from_multi(&chi, ["X", "Y"]),
        "chi_text": format_multi(&chi, ["X", "Y"]),
        "psi": PolyJson::from_multi(&psi, ["X", "Y", "Z"]),
        "psi_text": format_multi(&psi, ["X", "Y", "Z"]),
    });
    Ok(Envelope::new(
        "sod",
        "phi(X+Y-Z) - phi(X) - phi(Y) + phi(Z) = (X-Z)(Y-Z) psi(X,Y,Z)",
        true,
        result,
    ))
}

/// `D f` with integer coefficients, `D` the common denominator.
fn integer_multiple(f: &UniPoly<BigRational>) -> Vec<(u32, BigInt)> {
    let d = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    f.terms().map(|(e, c)| (e, (c * BigRational::from_integer(d.clone())).to_integer())).collect()
}

fn hensel(a: &HenselArgs) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi)?;
    let f = reduce_poly(&phi, a.p, a.precision).map_err(rejected)?;
    let (simple, multiple) = simple_roots_mod_p(&f).map_err(rejected)?;
    let targets: Vec<u64> = match a.root {
        Some(r) if simple.contains(&(r % a.p)) => vec![r % a.p],
        Some(r) => return Err(CliError::Hypothesis(format!("{r} is not a simple root of phi mod {}", a.p))),
        None => simple.clone(),
    };
    let modulus = BigInt::from(a.p).pow(a.precision);
    let integer = integer_multiple(&phi);
    let mut roots = Vec::new();
    let mut all_verified = true;
    for r in targets {
        let x = hensel_lift_residue(&f, r).map_err(rejected)?;
        let xb = BigInt::from(x.rep());
        let value: BigInt = integer.iter().map(|(e, c)| c * xb.pow(*e)).sum();
        let verified = value.mod_floor(&modulus).is_zero();
        all_verified &= verified;
        roots.push(json!({ "residue": r, "lifted": x.rep(), "verified": verified }));
    }
    let result = json!({
        "phi": phi.to_string(),
        "p": a.p,
        "precision": a.precision,
        "modulus": modulus.to_string(),
        "roots": roots,
        "multiple_roots_mod_p": multiple,
    });
    Ok(Envelope::new("hensel", "simple roots mod p lift uniquely to roots mod p^N", all_verified, result))
}

const JB_ANCHOR: &str = "fibers of the differencing polynomial of 2X^k - kX^2 split completely over Z_p";

fn jb_verify(a: &JbArgs) -> Result<Envelope, CliError> {
    let report = verify_prop_jb(a.k, a.p, a.precision, a.samples).map_err(|e| match e {
        crate::padic::PadicError::HypothesisFailed(h) => CliError::Hypothesis(h),
        other => rejected(other),
    })?;
    let pass = report.cond_a && report.cond_b;
    Ok(Envelope::new("jb-verify", JB_ANCHOR, pass, value(&report)))
}

fn prime_search(a: &PrimeSearchArgs) -> Result<Envelope, CliError> {
    let primes = find_sod_split_primes(a.k, a.bound);
    Ok(Envelope::new("prime-search", JB_ANCHOR, true, json!({ "k": a.k, "bound": a.bound, "primes": primes })))
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    BigRational::from_str(s)
        .ok()
        .or_else(|| s.parse::<f64>().ok().and_then(float_to_rational))
        .ok_or_else(|| CliError::Usage(format!("cannot read {s:?} as a rational such as 1/4 or 0.25")))
}

fn kdv_count(a: &KdvArgs) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi)?;
    let field = match a.field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
        FieldArg::Padic => Field::Padic { p: a.p.ok_or_else(|| CliError::Usage("--field padic needs --p".into()))? },
    };
    let curve = CurveSpec::new(phi, field).map_err(rejected)?;
    let spec = PartitionSpec::new(field, a.r).map_err(rejected)?;
    let ctx = KdvContext::new(&curve, &spec).map_err(rejected)?;
    let (c, c_info) = match &a.c {
        Some(s) => {
            let c = parse_rational(s)?;
            (c.clone(), json!({ "source": "supplied", "value": c.to_string(), "heuristic": false }))
        }
        None => {
            let est = estimate_c_phi(&curve, &spec, a.density).map_err(rejected)?;
            let info = json!({
                "source": "estimate",
                "value": est.c.to_string(),
                "approx": est.as_f64(),
                "min_fiber": est.min_fiber.to_string(),
                "m_phi": est.m_phi.to_string(),
                "samples": est.samples,
                "heuristic": est.heuristic,
            });
            (est.c, info)
        }
    };
    let bound = 625 * (curve.degree() as u64 - 1);
    let anchor = "at most 625(deg phi - 1) surviving cell pairs per admissible base pair";
    match &a.base {
        Some(base) if !a.all_bases => {
            let idx: Vec<usize> = base
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("--base expects two cell indices \"i,j\", got {base:?}")))?;
            let cells = ctx.cells();
            let [i, j] = idx[..] else {
                return Err(CliError::Usage(format!("--base expects two cell indices, got {base:?}")));
            };
            let (Some(i1), Some(i1p)) = (cells.get(i), cells.get(j)) else {
                return Err(CliError::Usage(format!("cell indices must be below {}", cells.len())));
            };
            let count = kdv_pair_count(&ctx, i1, i1p, &c).map_err(|e| match e {
                crate::partitions::PartitionError::HypothesisFailed(h) => CliError::Hypothesis(h),
                other => rejected(other),
            })?;
            let pass = count.count <= bound;
            let result = json!({ "field": field, "r": a.r, "c": c_info, "count": count, "bound": bound });
            Ok(Envelope::new("kdv-count", anchor, pass, result))
        }
        _ => {
            let summary = kdv_all_bases(&ctx, &c).map_err(rejected)?;
            let pass = summary.pass;
            Ok(Envelope::new("kdv-count", anchor, pass, json!({ "c": c_info, "summary": summary })))
        }
    }
}

fn dio_count(a: &DioArgs) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi)?;
    let set = parse_set_spec(&a.set_spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = discrete_ratio_report(&phi, &set, a.p, a.i).map_err(rejected)?;
    Ok(Envelope::new("dio-count", &report.anchor.clone(), report.pass, value(&report)))
}

/// Reads `1`, `-2.5`, `0.5+0.25i`, `-i`, `3i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => t.parse::<f64>().ok(),
    };
    match split {
        Some(i) => Some(Complex64::new(body[..i].parse().ok()?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

fn verify_real<T: Float + FloatConst + Send + Sync + 'static>(a: &VerifyRealArgs) -> Result<Envelope, CliError> {
    let curve = match (&a.phi, &a.handle) {
        (Some(s), None) | (None, Some(s)) => resolve_real_handle::<T>(s)?,
        _ => return Err(CliError::Usage("give exactly one of --phi or --handle".into())),
    };
    if a.r == 0 {
        return Err(CliError::Usage("--R must be at least 1".into()));
    }
    let f: Vec<Complex<T>> = match &a.f {
        None => vec![Complex::new(T::one(), T::zero()); a.r],
        Some(list) => {
            let values: Vec<Complex64> = list
                .split(',')
                .map(|s| parse_complex(s).ok_or_else(|| CliError::Usage(format!("cannot read {s:?} as a complex number"))))
                .collect::<Result<_, _>>()?;
            if values.len() != a.r {
                return Err(CliError::Usage(format!("--f lists {} values for R = {} cells", values.len(), a.r)));
            }
            values
                .iter()
                .map(|z| Complex::new(T::from(z.re).expect("float"), T::from(z.im).expect("float")))
                .collect()
        }
    };
    let opts = RealTheoremOptions {
        k: a.k,
        weight: match a.weight {
            WeightArg::Fejer => WeightKind::FejerSquare,
            WeightArg::Indicator => WeightKind::Indicator,
        },
        density: a.grid_density,
        node_factor: a.node_factor,
        refine: !a.no_refine,
        csv: a.csv.clone(),
    };
    let run = if a.convex { verify_convex_theorem } else { verify_real_theorem };
    let report = run(&curve, &f, a.c, &opts).map_err(|e| match e {
        crate::extension_numeric::ExtensionError::HypothesisFailed(h) => CliError::Hypothesis(h),
        other => rejected(other),
    })?;
    Ok(Envelope::new("verify-real", &report.anchor.clone(), report.pass, value(&report)))
}

fn verify_padic(a: &VerifyPadicArgs) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi)?;
    let inst = PadicMomentInstance::new(a.p, a.i, a.m, phi).map_err(rejected)?;
    let (counts, report) = verify_padic_theorem(&inst, a.c, a.budget).map_err(rejected)?;
    let pass = report.pass;
    let anchor = report.anchor.clone();
    Ok(Envelope::new("verify-padic", &anchor, pass, json!({ "counts": counts, "report": report })))
}

fn voorhoeve(a: &VoorhoeveArgs, seed: u64) -> Result<Envelope, CliError> {
    let phi = resolve_poly(&a.phi_handle)?;
    let handle = AnalyticHandle::<f64>::from_poly(&phi);
    let hyp = check_complex_hypotheses(&handle, a.k, a.beta).map_err(|e| match e {
        crate::complexcurve::ComplexCurveError::HypothesisFailed(h) => CliError::Hypothesis(h),
        other => rejected(other),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(a.pairs);
    while pairs.len() < a.pairs {
        let mut point = || Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(-0.5..=0.5));
        let (t1, t1p) = (point(), point());
        if t1 != t1p {
            pairs.push((t1, t1p));
        }
    }
    let contour = ContourSpec { nodes_per_side: a.nodes, ..Default::default() };
    let census: Vec<_> = pairs
        .par_iter()
        .map(|(t1, t1p)| sod_zero_census(&handle, *t1, *t1p, a.k, &contour))
        .collect::<Result<_, _>>()
        .map_err(rejected)?;
    let max_v = census.iter().map(|c| c.voorhoeve.value).fold(0.0, f64::max);
    let max_err = census.iter().map(|c| c.voorhoeve.error_estimate).fold(0.0, f64::max);
    let all_below_one = census.iter().all(|c| c.below_one);
    let max_roots = census.iter().filter_map(|c| c.fiber_roots_in_square).max();
    let roots_ok = max_roots.map_or(true, |m| m as u32 <= a.k.saturating_sub(2));
    let bound = 2f64.sqrt() / std::f64::consts::PI;
    let mut report = crate::report::VerificationReport::new(
        "voorhoeve",
        "Voorhoeve index of the (k-1)-th derivative of the differenced curve on the unit square is at most sqrt(2)/pi",
        json!({ "phi": phi.to_string(), "k": a.k, "beta": a.beta, "pairs": a.pairs, "nodes_per_side": a.nodes }),
    )
    .seed(Some(seed))
    .quantity("hypotheses", &hyp)
    .quantity("max_voorhoeve", max_v)
    .quantity("max_error_estimate", max_err)
    .quantity("all_below_one", all_below_one)
    .quantity("max_fiber_roots_in_square", max_roots)
    .quantity("fiber_root_bound", a.k.saturating_sub(2))
    .quantity("census", &census)
    .conclude(max_v, bound, "sqrt(2)/pi", max_err);
    if !all_below_one {
        report = report.fail("an index reached 1");
    } else if !roots_ok {
        report = report.fail("more than k-2 fiber roots in the square");
    }
    let mut env = Envelope::new("voorhoeve", &report.anchor.clone(), report.pass, value(&report));
    env.seed = Some(seed);
    Ok(env)
}

fn rolle(a: &RolleArgs) -> Result<Envelope, CliError> {
    let primes: Vec<u64> = a
        .p_list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("not a prime: {s:?}"))))
        .collect::<Result<_, _>>()?;
    if primes.is_empty() {
        return Err(CliError::Usage("--p-list is empty".into()));
    }
    let mut rows = Vec::new();
    let mut pass = true;
    for p in primes {
        let failure = check_rolle_failure(p).map_err(|e| CliError::Hypothesis(e.to_string()))?;
        let interpolation = if p > 2 {
            Some(check_prop_rolle_fails(p).map_err(|e| CliError::Hypothesis(e.to_string()))?)
        } else {
            None
        };
        let row_pass = failure.pass && interpolation.as_ref().map_or(true, |r| r.pass);
        pass &= row_pass;
        rows.push(json!({ "p": p, "pass": row_pass, "rolle_failure": failure, "interpolation_failure": interpolation }));
    }
    Ok(Envelope::new(
        "rolle",
        "Rolle's theorem and quadratic interpolation fail over Z_p",
        pass,
        json!({ "primes": rows }),
    ))
}
