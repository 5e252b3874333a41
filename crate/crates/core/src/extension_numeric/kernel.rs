use std::collections::{BTreeSet, HashMap};

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rayon::prelude::*;

use super::curve::CurveHandle;
use super::weight::WeightSpec;
use super::ExtensionError;
use crate::numerics::{gauss_legendre, pairwise_sum, GaussRule};

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("float constant")
}

/// Integration region for the extension operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// One cell `J` of the partition into `R` intervals.
    Cell(usize),
    /// All of `[−1/2, 1/2]`.
    Whole,
}

/// Nodes needed on an interval of length `len` so that the phase
/// `2π γ(ξ)·x` turns by less than one radian between nodes.
pub fn required_nodes<T: Float>(radius: T, speed: T, len: T) -> usize {
    (c::<T>(8.0) * (T::one() + radius * speed * len)).ceil().to_usize().unwrap_or(usize::MAX)
}

fn cell_bounds<T: Float>(j: usize, r: usize) -> (T, T) {
    let rr = c::<T>(r as f64);
    (c::<T>(-0.5) + c::<T>(j as f64) / rr, c::<T>(-0.5) + c::<T>((j + 1) as f64) / rr)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionValue<T> {
    pub value: Complex<T>,
    /// Nodes per cell.
    pub nodes: usize,
    /// `|E_{2n} − E_n|`.
    pub error_estimate: T,
}

fn cell_integral<T: Float + FloatConst + Send + Sync + 'static>(curve: &CurveHandle<T>, rule: &GaussRule<T>, a: T, b: T, x: [T; 2]) -> Complex<T> {
    let half = (b - a) / c(2.0);
    let mid = (a + b) / c(2.0);
    let two_pi = c::<T>(2.0) * T::PI();
    let mut re = Vec::with_capacity(rule.nodes.len());
    let mut im = Vec::with_capacity(rule.nodes.len());
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let xi = mid + half * *t;
        let theta = -two_pi * (xi * x[0] + curve.value(xi) * x[1]);
        re.push(*w * theta.cos());
        im.push(*w * theta.sin());
    }
    Complex::new(pairwise_sum(&re) * half, pairwise_sum(&im) * half)
}

/// `E_I f(x) = ∫_I f(ξ) e(γ(ξ)·x) dξ` with `e(t) = e^{−2πit}` and `f` constant
/// on each of the `f.len()` cells.
pub fn extension_eval<T: Float + FloatConst + Send + Sync + 'static>(
    curve: &CurveHandle<T>,
    f: &[Complex<T>],
    region: Region,
    x: [T; 2],
    nodes: Option<usize>,
) -> Result<ExtensionValue<T>, ExtensionError> {
    let r = f.len();
    if r == 0 {
        return Err(ExtensionError::BadInput("f needs at least one cell".into()));
    }
    let cells: Vec<usize> = match region {
        Region::Cell(j) if j < r => vec![j],
        Region::Cell(j) => return Err(ExtensionError::BadInput(format!("cell {j} outside a partition of {r}"))),
        Region::Whole => (0..r).collect(),
    };
    let radius = x[0].hypot(x[1]);
    let required = required_nodes(radius, curve.sup_speed(), T::one() / c(r as f64));
    let n = nodes.unwrap_or(required);
    if n < required {
        return Err(ExtensionError::ResolutionTooLow { nodes: n, required });
    }
    let coarse = gauss_legendre::<T>(n);
    let fine = gauss_legendre::<T>(2 * n);
    let zero = Complex::new(T::zero(), T::zero());
    let (mut e1, mut e2) = (zero, zero);
    for j in cells {
        if f[j] == zero {
            continue;
        }
        let (a, b) = cell_bounds::<T>(j, r);
        e1 = e1 + f[j] * cell_integral(curve, &coarse, a, b, x);
        e2 = e2 + f[j] * cell_integral(curve, &fine, a, b, x);
    }
    Ok(ExtensionValue { value: e1, nodes: n, error_estimate: (e2 - e1).norm() })
}

/// `S f(x) = (Σ_J |E_J f(x)|²)^{1/2}` over the `f.len()` cells.
pub fn square_function_eval<T: Float + FloatConst + Send + Sync + 'static>(
    curve: &CurveHandle<T>,
    f: &[Complex<T>],
    x: [T; 2],
    nodes: Option<usize>,
) -> Result<ExtensionValue<T>, ExtensionError> {
    let mut sq = T::zero();
    let mut err = T::zero();
    let mut used = 0;
    for j in 0..f.len() {
        let e = extension_eval(curve, f, Region::Cell(j), x, nodes)?;
        sq = sq + e.value.norm_sqr();
        err = err + e.error_estimate;
        used = e.nodes;
    }
    Ok(ExtensionValue { value: Complex::new(sq.sqrt(), T::zero()), nodes: used, error_estimate: err })
}

/// Trapezoidal lattice `center + (i h₁, j h₂)`, `|i| ≤ N₁`, `|j| ≤ N₂`, with
/// half weight on the boundary lines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub center: [T; 2],
    pub step: [T; 2],
    pub half_counts: [usize; 2],
}

impl<T: Float + FloatConst + Send + Sync + 'static> GridSpec<T> {
    /// Lattice over the truncation box of `weight`, fine enough that the
    /// band-limited integrands `|E|⁴ W` and `S⁴ W` are not aliased.
    pub fn for_weight(weight: &WeightSpec<T>, curve: &CurveHandle<T>, density: T) -> Self {
        let inv = T::one() / weight.diameter;
        let band = [c::<T>(2.0) + inv, c::<T>(2.0) * curve.range_on_unit() + inv];
        let u = weight.truncation_radius();
        let mut step = [T::zero(); 2];
        let mut half_counts = [0; 2];
        for a in 0..2 {
            let h_max = c::<T>(0.9) / band[a] / density;
            half_counts[a] = (u / h_max).ceil().to_usize().expect("finite grid").max(1);
            step[a] = u / c(half_counts[a] as f64);
        }
        Self { center: weight.center, step, half_counts }
    }

    pub fn refined(&self) -> Self {
        Self { step: [self.step[0] / c(2.0), self.step[1] / c(2.0)], half_counts: [2 * self.half_counts[0], 2 * self.half_counts[1]], ..*self }
    }

    pub fn coordinate(&self, axis: usize, i: i64) -> T {
        self.center[axis] + self.step[axis] * c(i as f64)
    }

    pub fn trapezoid_weight(&self, axis: usize, i: i64) -> T {
        if i.unsigned_abs() as usize == self.half_counts[axis] {
            c(0.5)
        } else {
            T::one()
        }
    }

    pub fn num_points(&self) -> usize {
        (2 * self.half_counts[0] + 1) * (2 * self.half_counts[1] + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L4Norm<T> {
    pub norm: T,
    pub fourth_power: T,
    /// Bound on the fourth power lost to truncation.
    pub tail_bound: T,
    pub points: usize,
}

/// `(∫ |v|⁴ W_B)^{1/4}` on the lattice; `sup` bounds `|v|` and feeds the tail bound.
pub fn l4_weighted_norm<T: Float + FloatConst + Send + Sync + 'static>(
    grid: &GridSpec<T>,
    weight: &WeightSpec<T>,
    sup: T,
    value: impl Fn([T; 2]) -> T + Sync,
) -> L4Norm<T> {
    let [n1, n2] = grid.half_counts.map(|n| n as i64);
    let rows: Vec<T> = (-n2..=n2)
        .into_par_iter()
        .map(|j| {
            let x2 = grid.coordinate(1, j);
            let terms: Vec<T> = (-n1..=n1)
                .map(|i| {
                    let x = [grid.coordinate(0, i), x2];
                    value(x).powi(4) * weight.eval(x) * grid.trapezoid_weight(0, i)
                })
                .collect();
            pairwise_sum(&terms) * grid.trapezoid_weight(1, j)
        })
        .collect();
    let fourth_power = pairwise_sum(&rows) * grid.step[0] * grid.step[1];
    L4Norm { norm: fourth_power.powf(c(0.25)), fourth_power, tail_bound: sup.powi(4) * weight.tail_mass(), points: grid.num_points() }
}

const BLOCK: usize = 64;
const LANES: usize = 8;

struct NodeTable<T> {
    xi: Vec<T>,
    phi: Vec<T>,
    weight: Vec<T>,
    /// `e^{−2πi ξ h₁}` for stepping along a row.
    step: Vec<Complex<T>>,
}

/// Node counts grow geometrically so that only a few rules are built.
fn ladder(required: usize) -> usize {
    let mut n = 8usize;
    while n < required {
        n = (n + n / 8).div_ceil(8) * 8;
    }
    n
}

/// Evaluates every `E_J f` on the lattice rows, one block of `x₁` at a time.
pub(crate) struct GridKernel<'a, T> {
    f: &'a [Complex<T>],
    grid: GridSpec<T>,
    speed: T,
    node_factor: T,
    tables: HashMap<(usize, usize), NodeTable<T>>,
}

impl<'a, T: Float + FloatConst + Send + Sync + 'static> GridKernel<'a, T> {
    pub(crate) fn new(curve: &'a CurveHandle<T>, f: &'a [Complex<T>], grid: GridSpec<T>, node_factor: T, rows: &[i64]) -> Self {
        let mut k = Self { f, grid, speed: curve.sup_speed(), node_factor, tables: HashMap::new() };
        let mut wanted = BTreeSet::new();
        for j in rows {
            for (start, len) in k.blocks() {
                for cell in k.active_cells() {
                    wanted.insert((cell, k.nodes_for(start, len, *j)));
                }
            }
        }
        let sizes: BTreeSet<usize> = wanted.iter().map(|(_, n)| *n).collect();
        let rules: HashMap<usize, GaussRule<T>> = sizes.into_par_iter().map(|n| (n, gauss_legendre::<T>(n))).collect();
        let r = f.len();
        let two_pi = c::<T>(2.0) * T::PI();
        let h1 = grid.step[0];
        for (cell, n) in wanted {
            let rule = &rules[&n];
            let (a, b) = cell_bounds::<T>(cell, r);
            let half = (b - a) / c(2.0);
            let mid = (a + b) / c(2.0);
            let xi: Vec<T> = rule.nodes.iter().map(|t| mid + half * *t).collect();
            let phi = xi.iter().map(|x| curve.value(*x)).collect();
            let weight = rule.weights.iter().map(|w| *w * half).collect();
            let step = xi.iter().map(|x| Complex::from_polar(T::one(), -two_pi * *x * h1)).collect();
            k.tables.insert((cell, n), NodeTable { xi, phi, weight, step });
        }
        k
    }

    fn active_cells(&self) -> Vec<usize> {
        let zero = Complex::new(T::zero(), T::zero());
        (0..self.f.len()).filter(|j| self.f[*j] != zero).collect()
    }

    fn blocks(&self) -> Vec<(i64, usize)> {
        let n1 = self.grid.half_counts[0] as i64;
        let mut out = Vec::new();
        let mut i = -n1;
        while i <= n1 {
            let len = ((n1 - i + 1) as usize).min(BLOCK);
            out.push((i, len));
            i += len as i64;
        }
        out
    }

    fn nodes_for(&self, start: i64, len: usize, j: i64) -> usize {
        let x1 = self.grid.coordinate(0, start).abs().max(self.grid.coordinate(0, start + len as i64 - 1).abs());
        let radius = x1.hypot(self.grid.coordinate(1, j));
        let base = required_nodes(radius, self.speed, T::one() / c(self.f.len() as f64));
        ladder((c::<T>(base as f64) * self.node_factor).ceil().to_usize().expect("finite"))
    }

    /// `E_J f` for every active cell at every point of row `j`:
    /// `out[cell_slot][i + N₁]`.
    pub(crate) fn row(&self, j: i64) -> Vec<Vec<Complex<T>>> {
        let cells = self.active_cells();
        let x2 = self.grid.coordinate(1, j);
        let width = 2 * self.grid.half_counts[0] + 1;
        let two_pi = c::<T>(2.0) * T::PI();
        let mut out = vec![vec![Complex::new(T::zero(), T::zero()); width]; cells.len()];
        let mut offset = 0;
        for (start, len) in self.blocks() {
            let x1 = self.grid.coordinate(0, start);
            for (slot, cell) in cells.iter().enumerate() {
                let table = &self.tables[&(*cell, self.nodes_for(start, len, j))];
                let mut re = [T::zero(); BLOCK];
                let mut im = [T::zero(); BLOCK];
                // Independent nodes advance side by side so the updates vectorize.
                for start_node in (0..table.xi.len()).step_by(LANES) {
                    let mut zr = [T::zero(); LANES];
                    let mut zi = [T::zero(); LANES];
                    let mut sr = [T::one(); LANES];
                    let mut si = [T::zero(); LANES];
                    for l in 0..LANES.min(table.xi.len() - start_node) {
                        let m = start_node + l;
                        let theta = -two_pi * (table.xi[m] * x1 + table.phi[m] * x2);
                        let (s, co) = theta.sin_cos();
                        zr[l] = table.weight[m] * co;
                        zi[l] = table.weight[m] * s;
                        sr[l] = table.step[m].re;
                        si[l] = table.step[m].im;
                    }
                    for p in 0..len {
                        let mut ar = T::zero();
                        let mut ai = T::zero();
                        for l in 0..LANES {
                            ar = ar + zr[l];
                            ai = ai + zi[l];
                            let nr = zr[l] * sr[l] - zi[l] * si[l];
                            zi[l] = zr[l] * si[l] + zi[l] * sr[l];
                            zr[l] = nr;
                        }
                        re[p] = re[p] + ar;
                        im[p] = im[p] + ai;
                    }
                }
                for p in 0..len {
                    out[slot][offset + p] = self.f[*cell] * Complex::new(re[p], im[p]);
                }
            }
            offset += len;
        }
        out
    }
}

/// Per-point values of every `E_J f` on a lattice, for dumps and invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    pub grid: GridSpec<T>,
    /// Indices of the cells carrying a nonzero value of `f`.
    pub cells: Vec<usize>,
    /// `values[point][slot]`, points in row-major order from the lowest `x₂`.
    pub values: Vec<Vec<Complex<T>>>,
}

impl<T: Float> GridField<T> {
    pub fn point(&self, index: usize) -> [T; 2] {
        let width = 2 * self.grid.half_counts[0] + 1;
        let (j, i) = (index / width, index % width);
        [
            self.grid.center[0] + self.grid.step[0] * c((i as i64 - self.grid.half_counts[0] as i64) as f64),
            self.grid.center[1] + self.grid.step[1] * c((j as i64 - self.grid.half_counts[1] as i64) as f64),
        ]
    }

    pub fn extension(&self, index: usize) -> Complex<T> {
        self.values[index].iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + *b)
    }

    pub fn square_function(&self, index: usize) -> T {
        self.values[index].iter().fold(T::zero(), |a, b| a + b.norm_sqr()).sqrt()
    }
}

pub fn sample_grid<T: Float + FloatConst + Send + Sync + 'static>(
    curve: &CurveHandle<T>,
    f: &[Complex<T>],
    grid: GridSpec<T>,
    node_factor: T,
) -> GridField<T> {
    let n2 = grid.half_counts[1] as i64;
    let rows: Vec<i64> = (-n2..=n2).collect();
    let kernel = GridKernel::new(curve, f, grid, node_factor, &rows);
    let cells = kernel.active_cells();
    let mut values = Vec::with_capacity(grid.num_points());
    for j in rows {
        let row = kernel.row(j);
        for i in 0..2 * grid.half_counts[0] + 1 {
            values.push(row.iter().map(|cell| cell[i]).collect());
        }
    }
    GridField { grid, cells, values }
}

/// Weighted sums `∫ |E f|⁴ W` and `∫ (S f)⁴ W` on a lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourthPowers<T> {
    pub extension: T,
    pub square: T,
    pub points: usize,
}

pub(crate) fn weighted_fourth_powers<T: Float + FloatConst + Send + Sync + 'static>(
    curve: &CurveHandle<T>,
    f: &[Complex<T>],
    weight: &WeightSpec<T>,
    grid: GridSpec<T>,
    node_factor: T,
) -> FourthPowers<T> {
    let n2 = grid.half_counts[1] as i64;
    let n1 = grid.half_counts[0] as i64;
    // With real f and a centred weight, |E_J f(−x)| = |E_J f(x)|: only x₂ ≥ 0 is needed.
    let symmetric = f.iter().all(|v| v.im == T::zero()) && weight.center == [T::zero(); 2];
    let rows: Vec<i64> = if symmetric { (0..=n2).collect() } else { (-n2..=n2).collect() };
    let kernel = GridKernel::new(curve, f, grid, node_factor, &rows);
    let sums: Vec<(T, T)> = rows
        .par_iter()
        .map(|&j| {
            let row = kernel.row(j);
            let x2 = grid.coordinate(1, j);
            let mut ext = Vec::with_capacity(row.first().map_or(0, Vec::len));
            let mut sq = Vec::with_capacity(ext.capacity());
            for i in -n1..=n1 {
                let idx = (i + n1) as usize;
                let w = weight.eval([grid.coordinate(0, i), x2]) * grid.trapezoid_weight(0, i);
                let mut e = Complex::new(T::zero(), T::zero());
                let mut s = T::zero();
                for cell in &row {
                    e = e + cell[idx];
                    s = s + cell[idx].norm_sqr();
                }
                let e2 = e.norm_sqr();
                ext.push(e2 * e2 * w);
                sq.push(s * s * w);
            }
            let mult = grid.trapezoid_weight(1, j) * if symmetric && j > 0 { c(2.0) } else { T::one() };
            (pairwise_sum(&ext) * mult, pairwise_sum(&sq) * mult)
        })
        .collect();
    let (ext, sq): (Vec<T>, Vec<T>) = sums.into_iter().unzip();
    let area = grid.step[0] * grid.step[1];
    FourthPowers { extension: pairwise_sum(&ext) * area, square: pairwise_sum(&sq) * area, points: grid.num_points() }
}
