//! Float experiments for mollifier sequences: Dirac pairings, the fiberwise
//! approximate unit on a trivial line bundle and group convolution on ℝ.
//!
//! Every number here is evidence about pointwise or uniform convergence on a
//! grid. Operator-level (equibounded) convergence is not something a
//! quadrature can certify.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MollifierError {
    #[error("grid too coarse: h·n = {0} exceeds the allowed product")]
    GridTooCoarse(f64),
    #[error("sampled grid does not cover the support of the mollifier at scale {0}")]
    SupportNotCovered(u32),
    #[error("scale must be at least 1")]
    InvalidScale,
    #[error("only dimensions 1 and 2 are supported, got {0}")]
    UnsupportedDimension(usize),
    #[error("quadrature control failed in {experiment} at n = {n}: {coarse:e} at h vs {fine:e} at h/2")]
    QuadratureControl {
        experiment: String,
        n: u32,
        coarse: f64,
        fine: f64,
    },
}

/// All tolerances used by the experiments.
#[derive(Clone, Debug, Serialize)]
pub struct MollifierConfig {
    /// Grid spacing is `grid_factor / n`.
    pub grid_factor: f64,
    /// Pairings refuse grids with `h·n` above this.
    pub max_grid_product: f64,
    pub normalization_tol: f64,
    /// Allowed relative change of an error when the grid is halved.
    pub doubling_tol: f64,
    /// Errors below this are treated as zero by the doubling control and
    /// the monotonicity check.
    pub zero_floor: f64,
    pub decay_tol: f64,
    /// Base grid spacing in the fiber experiment.
    pub base_spacing: f64,
}

impl Default for MollifierConfig {
    fn default() -> Self {
        MollifierConfig {
            grid_factor: 0.1,
            max_grid_product: 0.2,
            normalization_tol: 1e-8,
            doubling_tol: 0.1,
            zero_floor: 1e-12,
            decay_tol: 1e-2,
            base_spacing: 0.05,
        }
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn raw_bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// `ε(y) = c·exp(−1/(1−|y|²))` on the open unit ball, with `c` chosen so
/// that `∫ε = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct BumpProfile {
    pub dim: usize,
    pub constant: f64,
    pub radius: f64,
    /// Difference between the normalisation at two resolutions.
    pub normalization_error: f64,
    /// `∫|y|ε(y)dy`.
    pub first_moment: f64,
}

const PROFILE_INTERVALS: usize = 20_000;

impl BumpProfile {
    pub fn standard(dim: usize) -> Result<Self, MollifierError> {
        let mass = |n: usize| match dim {
            1 => Ok(simpson(|y| raw_bump(y * y), -1.0, 1.0, n)),
            2 => Ok(2.0 * std::f64::consts::PI * simpson(|r| r * raw_bump(r * r), 0.0, 1.0, n)),
            d => Err(MollifierError::UnsupportedDimension(d)),
        };
        let m = mass(PROFILE_INTERVALS)?;
        let m2 = mass(2 * PROFILE_INTERVALS)?;
        let constant = 1.0 / m2;
        let moment = match dim {
            1 => 2.0 * simpson(|y| y * raw_bump(y * y), 0.0, 1.0, 2 * PROFILE_INTERVALS),
            _ => {
                2.0 * std::f64::consts::PI
                    * simpson(|r| r * r * raw_bump(r * r), 0.0, 1.0, 2 * PROFILE_INTERVALS)
            }
        };
        Ok(BumpProfile {
            dim,
            constant,
            radius: 1.0,
            normalization_error: ((m - m2) * constant).abs(),
            first_moment: moment * constant,
        })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.constant * raw_bump(y.iter().map(|v| v * v).sum())
    }

    /// `ε_n(y) = n^d ε(ny)`.
    pub fn scaled(&self, n: u32, y: &[f64]) -> f64 {
        let n = n as f64;
        let ny: Vec<f64> = y.iter().map(|v| v * n).collect();
        n.powi(self.dim as i32) * self.eval(&ny)
    }
}

/// Samples on the centred grid `{h·j : |j_i| ≤ half_width}` in `ℝ^d`.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub dim: usize,
    pub h: f64,
    pub half_width: usize,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn sample(
        dim: usize,
        h: f64,
        half_width: usize,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self, MollifierError> {
        if !(1..=2).contains(&dim) {
            return Err(MollifierError::UnsupportedDimension(dim));
        }
        assert!(h > 0.0, "grid spacing must be positive");
        let side = 2 * half_width + 1;
        let mut values = Vec::with_capacity(side.pow(dim as u32));
        let coord = |i: usize| (i as f64 - half_width as f64) * h;
        if dim == 1 {
            for i in 0..side {
                values.push(f(&[coord(i)]));
            }
        } else {
            for i in 0..side {
                for j in 0..side {
                    values.push(f(&[coord(i), coord(j)]));
                }
            }
        }
        Ok(SampledFunction {
            dim,
            h,
            half_width,
            values,
        })
    }

    fn at(&self, idx: &[isize]) -> f64 {
        let side = 2 * self.half_width + 1;
        let off = |i: isize| (i + self.half_width as isize) as usize;
        match self.dim {
            1 => self.values[off(idx[0])],
            _ => self.values[off(idx[0]) * side + off(idx[1])],
        }
    }
}

/// Simpson weights on `-j..=j`, symmetric about the origin.
fn simpson_weights(j: usize) -> Vec<f64> {
    (0..=2 * j)
        .map(|i| {
            if i == 0 || i == 2 * j {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect()
}

/// Discrete `ε_n` on the grid of spacing `h`: Simpson-weighted kernel values
/// renormalised to total mass 1, together with the mass before
/// renormalisation.
struct DiscreteKernel {
    j: usize,
    weights: Vec<f64>,
    raw_mass: f64,
}

fn discrete_kernel(
    bump: &BumpProfile,
    n: u32,
    h: f64,
    config: &MollifierConfig,
) -> Result<DiscreteKernel, MollifierError> {
    if n == 0 {
        return Err(MollifierError::InvalidScale);
    }
    let product = h * n as f64;
    if product > config.max_grid_product + 1e-12 {
        return Err(MollifierError::GridTooCoarse(product));
    }
    let j = (bump.radius / product - 1e-9).ceil().max(1.0) as usize;
    let w1 = simpson_weights(j);
    let coord = |i: usize| (i as f64 - j as f64) * h;
    let mut weights = Vec::new();
    if bump.dim == 1 {
        for (i, w) in w1.iter().enumerate() {
            weights.push(w * bump.scaled(n, &[coord(i)]));
        }
    } else {
        for (a, wa) in w1.iter().enumerate() {
            for (b, wb) in w1.iter().enumerate() {
                weights.push(wa * wb * bump.scaled(n, &[coord(a), coord(b)]));
            }
        }
    }
    let cell = (h / 3.0).powi(bump.dim as i32);
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    Ok(DiscreteKernel {
        j,
        weights,
        raw_mass: total * cell,
    })
}

impl DiscreteKernel {
    fn offsets(&self, dim: usize) -> Vec<Vec<isize>> {
        let r = -(self.j as isize)..=self.j as isize;
        if dim == 1 {
            r.map(|a| vec![a]).collect()
        } else {
            r.clone()
                .flat_map(|a| r.clone().map(move |b| vec![a, b]))
                .collect()
        }
    }
}

/// Quadrature of `∫ f·ε_n` on the grid of the sample.
pub fn dirac_pairing(
    f: &SampledFunction,
    bump: &BumpProfile,
    n: u32,
    config: &MollifierConfig,
) -> Result<f64, MollifierError> {
    if f.dim != bump.dim {
        return Err(MollifierError::UnsupportedDimension(f.dim));
    }
    let k = discrete_kernel(bump, n, f.h, config)?;
    if k.j > f.half_width {
        return Err(MollifierError::SupportNotCovered(n));
    }
    Ok(k.offsets(f.dim)
        .iter()
        .zip(&k.weights)
        .map(|(idx, w)| w * f.at(idx))
        .sum())
}

/// Mass `∫ε_n` of the kernel as sampled on the grid of spacing `grid_factor/n`
/// before renormalisation.
pub fn kernel_mass(bump: &BumpProfile, n: u32, config: &MollifierConfig) -> Result<f64, MollifierError> {
    Ok(discrete_kernel(bump, n, config.grid_factor / n as f64, config)?.raw_mass)
}

pub type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A smooth test function with a bound on `‖∇f‖` over the unit ball.
pub struct TestFunction {
    pub name: String,
    pub dim: usize,
    pub f: ScalarFn,
    pub grad_bound: f64,
}

impl TestFunction {
    pub fn new(
        name: &str,
        dim: usize,
        grad_bound: f64,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TestFunction {
            name: name.to_string(),
            dim,
            f: Box::new(f),
            grad_bound,
        }
    }
}

/// The functions used by the rate experiment unless others are given.
pub fn standard_test_functions() -> Vec<TestFunction> {
    vec![
        TestFunction::new("constant", 1, 0.0, |_| 3.0),
        TestFunction::new("linear", 1, 2.0, |y| 2.0 * y[0] - 1.0),
        TestFunction::new("cos", 1, 1.0_f64.sin(), |y| y[0].cos()),
        TestFunction::new("exp", 1, 1.0_f64.exp(), |y| y[0].exp()),
        TestFunction::new("sin_plus_square", 1, 3.0, |y| y[0].sin() + y[0] * y[0]),
        TestFunction::new("gaussian_2d", 2, (2.0_f64).sqrt() * (-0.5_f64).exp(), |y| {
            (-(y[0] * y[0] + y[1] * y[1])).exp()
        }),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub n: u32,
    pub error: f64,
    pub error_half_grid: f64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateTable {
    pub name: String,
    pub rows: Vec<RateRow>,
    pub max_ratio: f64,
    pub all_hold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub first_moment: f64,
    pub tables: Vec<RateTable>,
    pub all_hold: bool,
    pub evidence: &'static str,
}

const EVIDENCE: &str = "pointwise-uniform quadrature evidence";

fn doubling_ok(coarse: f64, fine: f64, config: &MollifierConfig) -> bool {
    if coarse.abs() < config.zero_floor && fine.abs() < config.zero_floor {
        return true;
    }
    (coarse - fine).abs() <= config.doubling_tol * fine.abs().max(config.zero_floor)
}

/// Tabulates `|∫fε_n − f(0)|` against the mean-value bound `(C/n)·sup‖∇f‖`
/// with `C = ∫|y|ε(y)dy`.
pub fn dirac_rate_experiment(
    functions: &[TestFunction],
    ns: &[u32],
    config: &MollifierConfig,
) -> Result<RateReport, MollifierError> {
    let mut tables = Vec::new();
    for tf in functions {
        let bump = BumpProfile::standard(tf.dim)?;
        let f0 = (tf.f)(&vec![0.0; tf.dim]);
        let rows: Result<Vec<RateRow>, MollifierError> = ns
            .par_iter()
            .map(|&n| {
                let err_at = |h: f64| -> Result<f64, MollifierError> {
                    let half = (1.0 / (h * n as f64)).ceil() as usize + 1;
                    let s = SampledFunction::sample(tf.dim, h, half, &tf.f)?;
                    Ok((dirac_pairing(&s, &bump, n, config)? - f0).abs())
                };
                let h = config.grid_factor / n as f64;
                let error = err_at(h)?;
                let error_half_grid = err_at(h / 2.0)?;
                if !doubling_ok(error, error_half_grid, config) {
                    return Err(MollifierError::QuadratureControl {
                        experiment: format!("dirac_rate/{}", tf.name),
                        n,
                        coarse: error,
                        fine: error_half_grid,
                    });
                }
                let bound = bump.first_moment / n as f64 * tf.grad_bound;
                let ratio = if bound > 0.0 { error / bound } else { 0.0 };
                Ok(RateRow {
                    n,
                    error,
                    error_half_grid,
                    bound,
                    ratio,
                    holds: error <= bound + config.zero_floor,
                })
            })
            .collect();
        let rows = rows?;
        let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let all_hold = rows.iter().all(|r| r.holds);
        tables.push(RateTable {
            name: tf.name.clone(),
            rows,
            max_ratio,
            all_hold,
        });
    }
    let all_hold = tables.iter().all(|t| t.all_hold);
    Ok(RateReport {
        first_moment: BumpProfile::standard(1)?.first_moment,
        tables,
        all_hold,
        evidence: EVIDENCE,
    })
}

/// Whether errors are non-increasing from some point on, ignoring values
/// below the zero floor.
pub fn eventually_monotone(errors: &[f64], floor: f64) -> bool {
    let clean: Vec<f64> = errors.iter().map(|&e| if e < floor { 0.0 } else { e }).collect();
    // the tail must be non-increasing and start no later than the midpoint
    let mut start = clean.len();
    while start > 0 && (start == clean.len() || clean[start - 1] >= clean[start]) {
        start -= 1;
    }
    start <= clean.len() / 2
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub n: u32,
    pub error: f64,
    pub error_half_grid: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub experiment: String,
    pub rows: Vec<DecayRow>,
    pub eventually_monotone: bool,
    pub final_error: f64,
    pub below_tolerance: bool,
    pub evidence: &'static str,
}

fn decay_report(
    experiment: &str,
    ns: &[u32],
    config: &MollifierConfig,
    error_at: impl Fn(u32, f64) -> Result<f64, MollifierError> + Sync,
) -> Result<DecayReport, MollifierError> {
    let rows: Result<Vec<DecayRow>, MollifierError> = ns
        .par_iter()
        .map(|&n| {
            let h = config.grid_factor / n as f64;
            let error = error_at(n, h)?;
            let error_half_grid = error_at(n, h / 2.0)?;
            if !doubling_ok(error, error_half_grid, config) {
                return Err(MollifierError::QuadratureControl {
                    experiment: experiment.to_string(),
                    n,
                    coarse: error,
                    fine: error_half_grid,
                });
            }
            Ok(DecayRow {
                n,
                error,
                error_half_grid,
            })
        })
        .collect();
    let rows = rows?;
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let final_error = errors.last().copied().unwrap_or(0.0);
    Ok(DecayReport {
        experiment: experiment.to_string(),
        eventually_monotone: eventually_monotone(&errors, config.zero_floor),
        final_error,
        below_tolerance: final_error < config.decay_tol,
        rows,
        evidence: EVIDENCE,
    })
}

/// Partition of unity on ℝ by unit bumps centred at the integers,
/// normalised pointwise. Centres are enumerated `0, 1, −1, 2, −2, …`.
pub struct IntegerPartition;

impl IntegerPartition {
    pub fn center(i: usize) -> f64 {
        let k = i.div_ceil(2) as f64;
        if i % 2 == 1 {
            k
        } else {
            -k
        }
    }

    fn phi(x: f64) -> f64 {
        raw_bump(x * x)
    }

    /// `χ_i(x)`.
    pub fn chi(i: usize, x: f64) -> f64 {
        let lo = x.floor() as i64 - 1;
        let denom: f64 = (lo..=lo + 3).map(|c| Self::phi(x - c as f64)).sum();
        Self::phi(x - Self::center(i)) / denom
    }

    /// `Σ_{i<n} χ_i(x)`.
    pub fn partial_sum(n: usize, x: f64) -> f64 {
        (0..n).map(|i| Self::chi(i, x)).sum()
    }
}

/// A strictly positive fiber density on the trivial bundle `ℝ × ℝ`.
pub type Density = fn(f64, f64) -> f64;

pub fn unit_density(_: f64, _: f64) -> f64 {
    1.0
}

pub fn wavy_density(x: f64, y: f64) -> f64 {
    1.5 + (2.0 * x).sin() * (3.0 * y).cos()
}

/// Sup over base nodes of `|π_*(f·e_n)(x) − f(x,0)|` where
/// `e_n(x,y) = Σ_{i<n} χ_i(x) ε_n(y)/ρ(x,y)` and the fiber integral is taken
/// against `ρ(x,y)dy`. `base_extent` bounds the base nodes.
pub fn fiber_dirac_experiment(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    rho: Density,
    base_extent: f64,
    ns: &[u32],
    config: &MollifierConfig,
) -> Result<DecayReport, MollifierError> {
    let bump = BumpProfile::standard(1)?;
    let nodes = (base_extent / config.base_spacing).round() as i64;
    decay_report("fiber_dirac", ns, config, |n, h| {
        let k = discrete_kernel(&bump, n, h, config)?;
        let mut worst: f64 = 0.0;
        for ix in -nodes..=nodes {
            let x = ix as f64 * config.base_spacing;
            let chi = IntegerPartition::partial_sum(n as usize, x);
            let mut pushed = 0.0;
            for (jy, w) in (-(k.j as isize)..=k.j as isize).zip(&k.weights) {
                let y = jy as f64 * h;
                let r = rho(x, y);
                let e_n = chi * w / r;
                pushed += f(x, y) * e_n * r;
            }
            worst = worst.max((pushed - f(x, 0.0)).abs());
        }
        Ok(worst)
    })
}

/// Sup over grid nodes of `|a*ε_n − a|` for convolution on the group ℝ,
/// `(a*ε_n)(x) = ∫ a(x−y)ε_n(y)dy`. Nodes cover `[-extent, extent]`.
pub fn group_approx_unit_demo(
    a: &(dyn Fn(f64) -> f64 + Sync),
    extent: f64,
    ns: &[u32],
    config: &MollifierConfig,
) -> Result<DecayReport, MollifierError> {
    let bump = BumpProfile::standard(1)?;
    decay_report("group_approx_unit", ns, config, |n, h| {
        let k = discrete_kernel(&bump, n, h, config)?;
        let nodes = (extent / h).ceil() as i64;
        let mut worst: f64 = 0.0;
        for ix in -nodes..=nodes {
            let x = ix as f64 * h;
            let conv: f64 = (-(k.j as isize)..=k.j as isize)
                .zip(&k.weights)
                .map(|(jy, w)| w * a(x - jy as f64 * h))
                .sum();
            worst = worst.max((conv - a(x)).abs());
        }
        Ok(worst)
    })
}

/// The unnormalised bump `exp(−1/(1−x²))`, used as a test element.
pub fn bump_function(x: f64) -> f64 {
    raw_bump(x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MollifierConfig {
        MollifierConfig::default()
    }

    fn sample1(n: u32, f: impl Fn(&[f64]) -> f64) -> SampledFunction {
        let h = 0.1 / n as f64;
        SampledFunction::sample(1, h, 12, f).unwrap()
    }

    #[test]
    fn profile_is_normalised() {
        for d in [1, 2] {
            let b = BumpProfile::standard(d).unwrap();
            assert!(b.normalization_error < 1e-10, "{}", b.normalization_error);
        }
        assert!(BumpProfile::standard(3).is_err());
        let b = BumpProfile::standard(1).unwrap();
        for n in [1, 4, 16] {
            let m = kernel_mass(&b, n, &cfg()).unwrap();
            assert!((m - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn pairing_examples() {
        let b = BumpProfile::standard(1).unwrap();
        for n in 1..=64 {
            let one = dirac_pairing(&sample1(n, |_| 1.0), &b, n, &cfg()).unwrap();
            assert!((one - 1.0).abs() < 1e-8);
            let odd = dirac_pairing(&sample1(n, |y| y[0]), &b, n, &cfg()).unwrap();
            assert!(odd.abs() < 1e-8);
        }
        let e4 = (dirac_pairing(&sample1(4, |y| y[0].cos()), &b, 4, &cfg()).unwrap() - 1.0).abs();
        let e8 = (dirac_pairing(&sample1(8, |y| y[0].cos()), &b, 8, &cfg()).unwrap() - 1.0).abs();
        assert!(e4 / e8 >= 3.0, "{e4} {e8}");
    }

    #[test]
    fn pairing_errors() {
        let b = BumpProfile::standard(1).unwrap();
        let coarse = SampledFunction::sample(1, 0.1, 40, |_| 1.0).unwrap();
        assert!(matches!(
            dirac_pairing(&coarse, &b, 4, &cfg()),
            Err(MollifierError::GridTooCoarse(_))
        ));
        let narrow = SampledFunction::sample(1, 0.01, 3, |_| 1.0).unwrap();
        assert_eq!(
            dirac_pairing(&narrow, &b, 1, &cfg()),
            Err(MollifierError::SupportNotCovered(1))
        );
        assert_eq!(
            dirac_pairing(&narrow, &b, 0, &cfg()),
            Err(MollifierError::InvalidScale)
        );
    }

    #[test]
    fn two_dimensional_pairing() {
        let b = BumpProfile::standard(2).unwrap();
        let n = 4;
        let f = SampledFunction::sample(2, 0.1 / n as f64, 11, |y| 1.0 + y[0] - 3.0 * y[1]).unwrap();
        assert!((dirac_pairing(&f, &b, n, &cfg()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_of_unity() {
        for i in 0..40 {
            let x = -3.0 + 0.15 * i as f64;
            let total = IntegerPartition::partial_sum(20, x);
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert_eq!(IntegerPartition::center(0), 0.0);
        assert_eq!(IntegerPartition::center(1), 1.0);
        assert_eq!(IntegerPartition::center(2), -1.0);
    }

    #[test]
    fn monotone_helper() {
        assert!(eventually_monotone(&[0.1, 0.5, 0.2, 0.1, 0.05], 1e-12));
        assert!(!eventually_monotone(&[0.1, 0.05, 0.2, 0.3, 0.4], 1e-12));
        assert!(eventually_monotone(&[0.0, 1e-15, 0.0], 1e-12));
    }

    #[test]
    fn zero_inputs() {
        let ns = [2, 4, 8];
        let r = fiber_dirac_experiment(&|_, _| 0.0, unit_density, 3.0, &ns, &cfg()).unwrap();
        assert_eq!(r.final_error, 0.0);
        let r = group_approx_unit_demo(&|_| 0.0, 2.0, &ns, &cfg()).unwrap();
        assert_eq!(r.final_error, 0.0);
    }
}
