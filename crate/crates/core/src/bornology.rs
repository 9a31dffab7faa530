//! Disked hulls of finitely many rational points and their Minkowski gauges.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{format_rational, Rational};
use crate::simplex::{solve_lp, LpOutcome};

pub const MAX_DIM: usize = 16;
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BornologyError {
    #[error("point has dimension {got}, disk has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("disk too large: dimension ≤ {MAX_DIM} and at most {MAX_GENERATORS} generators")]
    TooLarge,
    #[error("term {0} of the sequence differs from the limit outside the span of the disk")]
    OffSpan(usize),
}

/// The disked hull of finitely many generators in `ℚ^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopalDisk {
    dim: usize,
    generators: Vec<Vec<Rational>>,
}

impl PolytopalDisk {
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self, BornologyError> {
        if dim > MAX_DIM || generators.len() > MAX_GENERATORS {
            return Err(BornologyError::TooLarge);
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(BornologyError::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        Ok(PolytopalDisk { dim, generators })
    }

    /// The unit ℓ¹ ball, hull of the standard basis.
    pub fn unit_l1(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() })
                    .collect()
            })
            .collect();
        PolytopalDisk { dim, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    fn check_point(&self, v: &[Rational]) -> Result<(), BornologyError> {
        if v.len() != self.dim {
            return Err(BornologyError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GaugeValue {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for GaugeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeValue::Finite(r) => f.write_str(&format_rational(r)),
            GaugeValue::Infinite => f.write_str("inf"),
        }
    }
}

impl GaugeValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            GaugeValue::Finite(r) => Some(r),
            GaugeValue::Infinite => None,
        }
    }
}

/// The gauge with its certificates: `coefficients` reconstruct `v` with
/// `Σ|λ_i| = value`; `dual` has `|y·d_i| ≤ 1` and `y·v = value`, proving
/// minimality. For an infinite gauge `farkas` has `y·d_i = 0` and `y·v ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeResult {
    pub value: GaugeValue,
    pub coefficients: Option<Vec<Rational>>,
    pub dual: Option<Vec<Rational>>,
    pub farkas: Option<Vec<Rational>>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl GaugeResult {
    /// Re-checks every certificate exactly.
    pub fn verify(&self, disk: &PolytopalDisk, v: &[Rational]) -> bool {
        match &self.value {
            GaugeValue::Finite(value) => {
                let (Some(lambda), Some(y)) = (&self.coefficients, &self.dual) else {
                    return false;
                };
                let l1: Rational = lambda.iter().map(|x| x.abs()).sum();
                let recon = (0..disk.dim).all(|k| {
                    let s: Rational = lambda
                        .iter()
                        .zip(&disk.generators)
                        .map(|(l, g)| l * &g[k])
                        .sum();
                    s == v[k]
                });
                let dual_ok = disk
                    .generators
                    .iter()
                    .all(|g| dot(y, g).abs() <= Rational::from_integer(1.into()));
                l1 == *value && recon && dual_ok && dot(y, v) == *value
            }
            GaugeValue::Infinite => {
                let Some(y) = &self.farkas else { return false };
                disk.generators.iter().all(|g| dot(y, g).is_zero()) && !dot(y, v).is_zero()
            }
        }
    }
}

/// `‖v‖_D = min Σ(λ⁺_i + λ⁻_i)` subject to `Σ(λ⁺_i − λ⁻_i) d_i = v`.
pub fn disked_hull_gauge(
    disk: &PolytopalDisk,
    v: &[Rational],
) -> Result<GaugeResult, BornologyError> {
    disk.check_point(v)?;
    let k = disk.generators.len();
    let a: Vec<Vec<Rational>> = (0..disk.dim)
        .map(|row| {
            let mut r: Vec<Rational> = disk.generators.iter().map(|g| g[row].clone()).collect();
            r.extend(disk.generators.iter().map(|g| -&g[row]));
            r
        })
        .collect();
    let c = vec![Rational::from_integer(1.into()); 2 * k];
    let result = match solve_lp(&a, v, &c) {
        LpOutcome::Optimal { x, value, dual } => GaugeResult {
            value: GaugeValue::Finite(value),
            coefficients: Some((0..k).map(|i| &x[i] - &x[k + i]).collect()),
            dual: Some(dual),
            farkas: None,
        },
        LpOutcome::Infeasible { farkas } => GaugeResult {
            value: GaugeValue::Infinite,
            coefficients: None,
            dual: None,
            farkas: Some(farkas),
        },
        LpOutcome::Unbounded => unreachable!("gauge objective is bounded below by 0"),
    };
    debug_assert!(result.verify(disk, v));
    Ok(result)
}

/// A polytopal disk is bounded, so `|v_j| ≤ bound_j · ‖v‖_D` with
/// `bound_j = max_i |d_i,j|`, the support value of `±e_j` over the disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormingCertificate {
    pub norming: bool,
    pub coordinate_bounds: Vec<Rational>,
}

pub fn is_norming(disk: &PolytopalDisk) -> NormingCertificate {
    let coordinate_bounds = (0..disk.dim)
        .map(|j| {
            disk.generators
                .iter()
                .map(|g| g[j].abs())
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    NormingCertificate {
        norming: true,
        coordinate_bounds,
    }
}

/// Smallest `r` with `S ⊆ r·D`.
pub fn absorbs(disk: &PolytopalDisk, points: &[Vec<Rational>]) -> Result<GaugeValue, BornologyError> {
    let mut best = GaugeValue::Finite(Rational::zero());
    for p in points {
        let g = disked_hull_gauge(disk, p)?.value;
        if g > best {
            best = g;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MackeyReport {
    pub gauges: Vec<GaugeValue>,
    /// Least-squares slope of `log g_n` against `log n` over nonzero terms.
    pub slope: Option<f64>,
    pub convergent: bool,
}

/// Gauges `‖v_n − v‖_D` for `n = 1..N` and a fitted decay exponent. The
/// sequence is reported convergent when every gauge vanishes or the slope is
/// below `slope_threshold`.
pub fn mackey_rate(
    seq: &[Vec<Rational>],
    limit: &[Rational],
    disk: &PolytopalDisk,
    slope_threshold: f64,
) -> Result<MackeyReport, BornologyError> {
    let mut gauges = Vec::with_capacity(seq.len());
    for (i, v) in seq.iter().enumerate() {
        disk.check_point(v)?;
        disk.check_point(limit)?;
        let diff: Vec<Rational> = v.iter().zip(limit).map(|(a, b)| a - b).collect();
        let g = disked_hull_gauge(disk, &diff)?.value;
        if g == GaugeValue::Infinite {
            return Err(BornologyError::OffSpan(i + 1));
        }
        gauges.push(g);
    }
    let points: Vec<(f64, f64)> = gauges
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let x = g.finite()?.to_f64()?;
            (x > 0.0).then(|| (((i + 1) as f64).ln(), x.ln()))
        })
        .collect();
    let slope = least_squares_slope(&points);
    let all_zero = gauges.iter().all(|g| g.finite().is_some_and(|r| r.is_zero()));
    let convergent = all_zero || slope.is_some_and(|s| s < slope_threshold);
    Ok(MackeyReport {
        gauges,
        slope,
        convergent,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Membership in `⋃_{|λ|≤1} λ·conv(gens)` over real scalars: `v` or `−v`
/// must be a combination `Σμ_i g_i` with `μ ≥ 0`, `Σμ_i ≤ 1`.
pub fn circled_hull_membership(
    generators: &[Vec<Rational>],
    v: &[Rational],
) -> Result<bool, BornologyError> {
    let dim = v.len();
    if let Some(g) = generators.iter().find(|g| g.len() != dim) {
        return Err(BornologyError::DimensionMismatch {
            expected: dim,
            got: g.len(),
        });
    }
    let k = generators.len();
    let one = Rational::from_integer(1.into());
    for sign in [one.clone(), -one.clone()] {
        let mut a: Vec<Vec<Rational>> = (0..dim)
            .map(|row| {
                let mut r: Vec<Rational> = generators.iter().map(|g| g[row].clone()).collect();
                r.push(Rational::zero());
                r
            })
            .collect();
        a.push(vec![one.clone(); k + 1]);
        let mut b: Vec<Rational> = v.iter().map(|x| x * &sign).collect();
        b.push(one.clone());
        if matches!(
            solve_lp(&a, &b, &vec![Rational::zero(); k + 1]),
            LpOutcome::Optimal { .. }
        ) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn pt(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn l1_gauges() {
        let d = PolytopalDisk::unit_l1(2);
        let g = disked_hull_gauge(&d, &pt(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(g.value, GaugeValue::Finite(rat_int(1)));
        assert!(g.verify(&d, &pt(&[(1, 2), (1, 2)])));
        let e1 = pt(&[(1, 1), (0, 1)]);
        assert_eq!(disked_hull_gauge(&d, &e1).unwrap().value, GaugeValue::Finite(rat_int(1)));
        assert_eq!(
            disked_hull_gauge(&d, &pt(&[(0, 1), (0, 1)])).unwrap().value,
            GaugeValue::Finite(rat_int(0))
        );
        assert_eq!(
            disked_hull_gauge(&d, &pt(&[(-3, 1), (1, 4)])).unwrap().value,
            GaugeValue::Finite(rat(13, 4))
        );
    }

    #[test]
    fn off_span_is_infinite() {
        let d = PolytopalDisk::new(2, vec![pt(&[(1, 1), (1, 1)])]).unwrap();
        let v = pt(&[(1, 1), (0, 1)]);
        let g = disked_hull_gauge(&d, &v).unwrap();
        assert_eq!(g.value, GaugeValue::Infinite);
        assert!(g.verify(&d, &v));
    }

    #[test]
    fn norming_and_absorption() {
        let d = PolytopalDisk::unit_l1(2);
        assert!(is_norming(&d).norming);
        let z = PolytopalDisk::new(1, vec![pt(&[(0, 1)])]).unwrap();
        assert_eq!(is_norming(&z).coordinate_bounds, vec![rat_int(0)]);
        assert_eq!(
            absorbs(&d, &[pt(&[(2, 1), (0, 1)])]).unwrap(),
            GaugeValue::Finite(rat_int(2))
        );
        let line = PolytopalDisk::new(2, vec![pt(&[(1, 1), (0, 1)])]).unwrap();
        assert_eq!(
            absorbs(&line, &[pt(&[(0, 1), (1, 1)])]).unwrap(),
            GaugeValue::Infinite
        );
    }

    #[test]
    fn mackey_examples() {
        let d = PolytopalDisk::unit_l1(2);
        let zero = pt(&[(0, 1), (0, 1)]);
        let seq: Vec<_> = (1..=32).map(|n| pt(&[(1, n), (0, 1)])).collect();
        let r = mackey_rate(&seq, &zero, &d, -0.1).unwrap();
        assert!((r.slope.unwrap() + 1.0).abs() < 1e-9);
        assert!(r.convergent);
        let constant = vec![zero.clone(); 5];
        assert!(mackey_rate(&constant, &zero, &d, -0.1).unwrap().convergent);
        let alt: Vec<_> = (1..=16)
            .map(|n| pt(&[(if n % 2 == 0 { 1 } else { -1 }, 1), (0, 1)]))
            .collect();
        let r = mackey_rate(&alt, &zero, &d, -0.1).unwrap();
        assert!(!r.convergent);
        let line = PolytopalDisk::new(2, vec![pt(&[(1, 1), (0, 1)])]).unwrap();
        assert_eq!(
            mackey_rate(&[pt(&[(0, 1), (1, 1)])], &zero, &line, -0.1),
            Err(BornologyError::OffSpan(1))
        );
    }

    #[test]
    fn circled_hull() {
        let gens = vec![pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (1, 1)])];
        assert!(circled_hull_membership(&gens, &pt(&[(-1, 1), (0, 1)])).unwrap());
        assert!(circled_hull_membership(&gens, &pt(&[(1, 2), (1, 2)])).unwrap());
        assert!(!circled_hull_membership(&gens, &pt(&[(2, 1), (0, 1)])).unwrap());
        // inside the disked hull but not in any λ·conv(gens)
        assert!(!circled_hull_membership(&gens, &pt(&[(1, 2), (-1, 2)])).unwrap());
    }
}
