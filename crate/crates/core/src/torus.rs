//! The noncommutative torus on Laurent polynomials in `u, v` with
//! `vu = e^{2πiθ}uv`, plus the finite models attached to it.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::ConvAlgebra;
use crate::groupoid::{action_groupoid, cyclic_group, cyclic_group_table};
use crate::scalar::Gq;

pub const MODE_CAP: i64 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("elements live over different θ")]
    ThetaMismatch,
    #[error("the zero element has no simplicity report")]
    ZeroElement,
    #[error("mode ({0},{1}) exceeds the cap |k|,|m| ≤ {MODE_CAP}")]
    ModeCap(i64, i64),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error("invalid θ: {0}")]
    Theta(String),
}

/// A rational θ is kept exactly so that integrality of `kθ` is decided
/// without rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Theta {
    Rational(i64, i64),
    Float(f64),
}

impl Theta {
    pub fn golden() -> Self {
        Theta::Float((5.0_f64.sqrt() - 1.0) / 2.0)
    }

    pub fn parse(s: &str) -> Result<Self, TorusError> {
        let s = s.trim();
        if s == "golden" {
            return Ok(Theta::golden());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| TorusError::Theta(s.into()))?;
            let q: i64 = q.trim().parse().map_err(|_| TorusError::Theta(s.into()))?;
            if q <= 0 {
                return Err(TorusError::Theta(s.into()));
            }
            return Ok(Theta::Rational(p, q));
        }
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Theta::Float)
            .ok_or_else(|| TorusError::Theta(s.into()))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Theta::Rational(p, q) => p as f64 / q as f64,
            Theta::Float(x) => x,
        }
    }

    /// Fractional part of `jθ` in `[0,1)`.
    pub fn frac_multiple(&self, j: i64) -> f64 {
        match *self {
            Theta::Rational(p, q) => {
                let r = ((j as i128 * p as i128).rem_euclid(q as i128)) as f64;
                r / q as f64
            }
            Theta::Float(x) => {
                let y = j as f64 * x;
                y - y.floor()
            }
        }
    }

    /// `e^{2πi jθ}`.
    pub fn phase(&self, j: i64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.frac_multiple(j))
    }

    /// The Cesàro average `D_n(jθ) = (1/(2n+1)) Σ_{|l|≤n} e^{2πi l jθ}`.
    pub fn dirichlet(&self, j: i64, n: u32) -> f64 {
        let x = self.frac_multiple(j);
        if x == 0.0 {
            return 1.0;
        }
        let m = (2 * n + 1) as f64;
        (PI * m * x).sin() / (m * (PI * x).sin())
    }

    /// The same average summed term by term.
    pub fn dirichlet_literal(&self, j: i64, n: u32) -> Complex64 {
        let n = n as i64;
        let s: Complex64 = (-n..=n).map(|l| self.phase(l * j)).sum();
        s / (2 * n + 1) as f64
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Rational(p, q) => write!(f, "{p}/{q}"),
            Theta::Float(x) => write!(f, "{x:.17}"),
        }
    }
}

/// Finite sum `Σ c_{k,m} u^k v^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    pub theta: Theta,
    pub coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl TorusElement {
    pub fn zero(theta: Theta) -> Self {
        TorusElement {
            theta,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(theta: Theta, k: i64, m: i64, c: Complex64) -> Self {
        let mut e = Self::zero(theta);
        e.add_term(k, m, c);
        e
    }

    pub fn one(theta: Theta) -> Self {
        Self::monomial(theta, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn u(theta: Theta) -> Self {
        Self::monomial(theta, 1, 0, Complex64::new(1.0, 0.0))
    }

    pub fn v(theta: Theta) -> Self {
        Self::monomial(theta, 0, 1, Complex64::new(1.0, 0.0))
    }

    /// Builds an element and enforces the mode cap.
    pub fn from_terms(
        theta: Theta,
        terms: impl IntoIterator<Item = ((i64, i64), Complex64)>,
    ) -> Result<Self, TorusError> {
        let mut e = Self::zero(theta);
        for ((k, m), c) in terms {
            if k.abs() > MODE_CAP || m.abs() > MODE_CAP {
                return Err(TorusError::ModeCap(k, m));
            }
            e.add_term(k, m, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, k: i64, m: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.coeffs.entry((k, m)).or_default();
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&(k, m));
        }
    }

    pub fn coeff(&self, k: i64, m: i64) -> Complex64 {
        self.coeffs.get(&(k, m)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        if self.theta != other.theta {
            return Err(TorusError::ThetaMismatch);
        }
        let mut out = self.clone();
        for (&(k, m), &c) in &other.coeffs {
            out.add_term(k, m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.theta);
        for (&(k, m), &x) in &self.coeffs {
            out.add_term(k, m, x * c);
        }
        out
    }

    /// `Σ|c|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient distance, treating absent modes as zero.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for key in self.coeffs.keys().chain(other.coeffs.keys()) {
            worst = worst.max((self.coeff(key.0, key.1) - other.coeff(key.0, key.1)).norm());
        }
        worst
    }

    /// Parses sums like `u+v`, `2u^3v^-1 - 0.5`, `1+u^3`; each term is a
    /// coefficient followed by `u^k` and then `v^m`.
    pub fn parse(theta: Theta, s: &str) -> Result<Self, TorusError> {
        let err = || TorusError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut current = String::new();
        for (i, ch) in compact.chars().enumerate() {
            let after_caret = current.ends_with('^');
            if (ch == '+' || ch == '-') && i > 0 && !after_caret {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        let mut out = Vec::new();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1.0, b),
                None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
            };
            let split = body.find(['u', 'v']).unwrap_or(body.len());
            let (num, mono) = body.split_at(split);
            let num = num.trim_end_matches('*');
            let coef = if num.is_empty() {
                1.0
            } else {
                num.parse::<f64>().map_err(|_| err())?
            };
            let (mut k, mut m) = (0, 0);
            let mut rest = mono;
            for (letter, slot) in [('u', &mut k), ('v', &mut m)] {
                if let Some(r) = rest.strip_prefix(letter) {
                    let r = r.trim_start_matches('*');
                    if let Some(r) = r.strip_prefix('^') {
                        let end = r
                            .char_indices()
                            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                            .map_or(r.len(), |(i, _)| i);
                        *slot = r[..end].parse().map_err(|_| err())?;
                        rest = r[end..].trim_start_matches('*');
                    } else {
                        *slot = 1;
                        rest = r;
                    }
                }
            }
            if !rest.is_empty() || (num.is_empty() && mono.is_empty()) {
                return Err(err());
            }
            out.push(((k, m), Complex64::new(sign * coef, 0.0)));
        }
        Self::from_terms(theta, out)
    }
}

/// `(u^k v^m)(u^{k'} v^{m'}) = e^{2πiθ m k'} u^{k+k'} v^{m+m'}`.
pub fn torus_mul(a: &TorusElement, b: &TorusElement) -> Result<TorusElement, TorusError> {
    if a.theta != b.theta {
        return Err(TorusError::ThetaMismatch);
    }
    let mut out = TorusElement::zero(a.theta);
    for (&(k, m), &x) in &a.coeffs {
        for (&(k2, m2), &y) in &b.coeffs {
            out.add_term(k + k2, m + m2, x * y * a.theta.phase(m * k2));
        }
    }
    Ok(out)
}

/// `(u^k v^m)* = e^{2πiθkm} u^{−k} v^{−m}` extended antilinearly.
pub fn torus_star(a: &TorusElement) -> TorusElement {
    let mut out = TorusElement::zero(a.theta);
    for (&(k, m), &c) in &a.coeffs {
        out.add_term(-k, -m, c.conj() * a.theta.phase(k * m));
    }
    out
}

fn rescale_modes(a: &TorusElement, factor: impl Fn(i64, i64) -> f64) -> TorusElement {
    let mut out = TorusElement::zero(a.theta);
    for (&(k, m), &c) in &a.coeffs {
        out.add_term(k, m, c * factor(k, m));
    }
    out
}

/// `(1/(2n+1)) Σ_{|j|≤n} u^j a u^{−j}`, which scales mode `(k,m)` by `D_n(mθ)`.
pub fn phi1_partial(a: &TorusElement, n: u32) -> TorusElement {
    rescale_modes(a, |_, m| a.theta.dirichlet(m, n))
}

/// `(1/(2n+1)) Σ_{|j|≤n} v^j a v^{−j}`, which scales mode `(k,m)` by `D_n(kθ)`.
pub fn phi2_partial(a: &TorusElement, n: u32) -> TorusElement {
    rescale_modes(a, |k, _| a.theta.dirichlet(k, n))
}

fn conjugation_average(a: &TorusElement, n: u32, w: (i64, i64)) -> TorusElement {
    let one = Complex64::new(1.0, 0.0);
    let mut sum = TorusElement::zero(a.theta);
    for j in -(n as i64)..=n as i64 {
        let left = TorusElement::monomial(a.theta, w.0 * j, w.1 * j, one);
        let right = TorusElement::monomial(a.theta, -w.0 * j, -w.1 * j, one);
        let term = torus_mul(&torus_mul(&left, a).expect("same θ"), &right).expect("same θ");
        sum = sum.add(&term).expect("same θ");
    }
    sum.scale(Complex64::new(1.0 / (2 * n + 1) as f64, 0.0))
}

/// `Φ₁` computed by multiplying out every conjugate.
pub fn phi1_literal(a: &TorusElement, n: u32) -> TorusElement {
    conjugation_average(a, n, (1, 0))
}

/// `Φ₂` computed by multiplying out every conjugate.
pub fn phi2_literal(a: &TorusElement, n: u32) -> TorusElement {
    conjugation_average(a, n, (0, 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityRow {
    pub n: u32,
    pub residual: f64,
    pub residual_literal: Option<f64>,
    pub closed_vs_literal: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AveragingReport {
    pub theta: String,
    /// `ν = Σ|a_{k,m}|²`.
    pub nu: f64,
    pub constant_term: f64,
    pub rows: Vec<SimplicityRow>,
    /// Modes of `a*a` with `k ≠ 0` whose `Φ₂` factor equals 1 at every tested `n`.
    pub non_decaying_modes: Vec<(i64, i64)>,
    pub first_below_tolerance: Option<u32>,
    pub tolerance: f64,
}

/// Tracks `c_n = Φ₁,n(Φ₂,n(a*a))` against `ν·1`. The residual is the ℓ¹
/// norm of the coefficient difference. Literal sums are evaluated for
/// `n ≤ literal_max`.
pub fn simplicity_experiment(
    a: &TorusElement,
    ns: &[u32],
    literal_max: u32,
    tolerance: f64,
) -> Result<AveragingReport, TorusError> {
    if a.is_zero() {
        return Err(TorusError::ZeroElement);
    }
    let b = torus_mul(&torus_star(a), a)?;
    let nu: f64 = a.coeffs.values().map(|c| c.norm_sqr()).sum();
    let target = TorusElement::monomial(a.theta, 0, 0, Complex64::new(nu, 0.0));
    let residual = |c: &TorusElement| c.add(&target.scale(Complex64::new(-1.0, 0.0))).expect("θ").l1_norm();
    let mut rows = Vec::new();
    for &n in ns {
        let closed = phi1_partial(&phi2_partial(&b, n), n);
        let (residual_literal, closed_vs_literal) = if n <= literal_max {
            let lit = phi1_literal(&phi2_literal(&b, n), n);
            (Some(residual(&lit)), Some(lit.max_diff(&closed)))
        } else {
            (None, None)
        };
        rows.push(SimplicityRow {
            n,
            residual: residual(&closed),
            residual_literal,
            closed_vs_literal,
        });
    }
    let non_decaying_modes = b
        .coeffs
        .keys()
        .filter(|&&(k, _)| k != 0 && ns.iter().all(|&n| a.theta.dirichlet(k, n) == 1.0))
        .copied()
        .collect();
    Ok(AveragingReport {
        theta: a.theta.to_string(),
        nu,
        constant_term: b.coeff(0, 0).re,
        first_below_tolerance: rows.iter().find(|r| r.residual < tolerance).map(|r| r.n),
        rows,
        non_decaying_modes,
        tolerance,
    })
}

type Matrix = Vec<Vec<Complex64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_pow(a: &Matrix, inverse: &Matrix, e: i64) -> Matrix {
    let n = a.len();
    let mut out: Matrix = (0..n)
        .map(|i| (0..n).map(|j| Complex64::new((i == j) as u8 as f64, 0.0)).collect())
        .collect();
    let base = if e < 0 { inverse } else { a };
    for _ in 0..e.unsigned_abs() {
        out = mat_mul(&out, base);
    }
    out
}

fn mat_dist(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Clock `U = diag(ω^j)` and shift `V e_j = e_{j−1}`, with `ω = e^{2πi/N}`.
pub fn clock_shift(n: usize) -> (Matrix, Matrix) {
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![vec![zero; n]; n];
    let mut v = vec![vec![zero; n]; n];
    for j in 0..n {
        u[j][j] = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        v[(j + n - 1) % n][j] = Complex64::new(1.0, 0.0);
    }
    (u, v)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClockShiftCertificate {
    pub size: usize,
    /// `max |VU − ωUV|`.
    pub relation_error: f64,
    /// Worst violation of `π(xy) = π(x)π(y)` over monomials with exponents in `(−N, N)`.
    pub multiplicativity_error: f64,
    pub holds: bool,
}

/// Checks that `u^k v^m ↦ U^k V^m` is multiplicative for `θ = 1/N`.
pub fn clock_shift_check(n: usize, tolerance: f64) -> ClockShiftCertificate {
    assert!(n >= 2, "clock and shift need N ≥ 2");
    let (u, v) = clock_shift(n);
    let conj_t = |m: &Matrix| -> Matrix {
        (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect()
    };
    let (ui, vi) = (conj_t(&u), conj_t(&v));
    let omega = Complex64::from_polar(1.0, 2.0 * PI / n as f64);
    let vu = mat_mul(&v, &u);
    let uv: Matrix = mat_mul(&u, &v)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x * omega).collect())
        .collect();
    let relation_error = mat_dist(&vu, &uv);
    let theta = Theta::Rational(1, n as i64);
    let range = -(n as i64 - 1)..n as i64;
    let pi = |k: i64, m: i64| mat_mul(&mat_pow(&u, &ui, k), &mat_pow(&v, &vi, m));
    let mut worst: f64 = 0.0;
    for k in range.clone() {
        for m in range.clone() {
            let x = pi(k, m);
            for k2 in range.clone() {
                for m2 in range.clone() {
                    let prod = torus_mul(
                        &TorusElement::monomial(theta, k, m, Complex64::new(1.0, 0.0)),
                        &TorusElement::monomial(theta, k2, m2, Complex64::new(1.0, 0.0)),
                    )
                    .expect("same θ");
                    let ((kk, mm), c) = prod.coeffs.iter().next().map(|(a, b)| (*a, *b)).expect("monomial");
                    let rhs: Matrix = pi(kk, mm)
                        .into_iter()
                        .map(|r| r.into_iter().map(|z| z * c).collect())
                        .collect();
                    worst = worst.max(mat_dist(&mat_mul(&x, &pi(k2, m2)), &rhs));
                }
            }
        }
    }
    ClockShiftCertificate {
        size: n,
        relation_error,
        multiplicativity_error: worst,
        holds: relation_error < tolerance && worst < tolerance,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossedProductCertificate {
    pub q: usize,
    pub dim: usize,
    pub tables_equal: bool,
    /// First basis pair whose products disagree.
    pub mismatch: Option<(usize, usize)>,
    pub conjugation_identity: bool,
}

/// Compares the convolution algebra of `ℤ_q ⋉ ℤ_q` (rotation action,
/// counting Haar) with the crossed product `C(ℤ_q) ⋊ ℤ_q`, whose basis
/// `δ_g⊗δ_x` multiplies as `(δ_g⊗δ_x)(δ_h⊗δ_y) = [x = g·y] δ_{gh}⊗δ_x`.
/// The arrow `(g, x')` corresponds to `δ_g⊗δ_{g·x'}`.
pub fn crossed_product_bridge(q: usize) -> CrossedProductCertificate {
    assert!(q >= 1);
    let table = cyclic_group_table(q);
    let group = cyclic_group(q).expect("cyclic group");
    let act: Vec<Vec<usize>> = (0..q).map(|g| (0..q).map(|x| (g + x) % q).collect()).collect();
    let conv = ConvAlgebra::counting(action_groupoid(&group, q, &act).expect("rotation action"));
    let dim = q * q;
    let cp_index = |g: usize, x: usize| g * q + x;
    // arrow (g, x') ↦ δ_g ⊗ δ_{g·x'}
    let arrow_to_cp = |arrow: usize| {
        let (g, xp) = (arrow / q, arrow % q);
        cp_index(g, act[g][xp])
    };
    let cp_mul = |i: usize, j: usize| -> Option<usize> {
        let (g, x) = (i / q, i % q);
        let (h, y) = (j / q, j % q);
        (x == act[g][y]).then(|| cp_index(table[g][h], x))
    };
    let mut mismatch = None;
    'outer: for a in 0..dim {
        for b in 0..dim {
            let prod = conv.convolve(&conv.delta(a), &conv.delta(b)).expect("same parent");
            let mut transported = vec![Gq::zero(); dim];
            for (arrow, c) in prod.coeffs().iter().enumerate() {
                transported[arrow_to_cp(arrow)] = c.clone();
            }
            let mut expected = vec![Gq::zero(); dim];
            if let Some(k) = cp_mul(arrow_to_cp(a), arrow_to_cp(b)) {
                expected[k] = Gq::int(1);
            }
            if transported != expected {
                mismatch = Some((a, b));
                break 'outer;
            }
        }
    }
    // (δ_g⊗1)(δ_e⊗δ_y)(δ_{g⁻¹}⊗1) = δ_e⊗δ_{g·y}, computed in the crossed product
    let mul_vec = |a: &[Gq], b: &[Gq]| -> Vec<Gq> {
        let mut out = vec![Gq::zero(); dim];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                if let Some(k) = cp_mul(i, j) {
                    out[k] += &(x * y);
                }
            }
        }
        out
    };
    let group_el = |g: usize| -> Vec<Gq> {
        let mut v = vec![Gq::zero(); dim];
        for x in 0..q {
            v[cp_index(g, x)] = Gq::int(1);
        }
        v
    };
    let conjugation_identity = (0..q).all(|g| {
        let ginv = (q - g) % q;
        (0..q).all(|y| {
            let mut b = vec![Gq::zero(); dim];
            b[cp_index(0, y)] = Gq::int(1);
            let lhs = mul_vec(&mul_vec(&group_el(g), &b), &group_el(ginv));
            let mut rhs = vec![Gq::zero(); dim];
            rhs[cp_index(0, act[g][y])] = Gq::int(1);
            lhs == rhs
        })
    });
    CrossedProductCertificate {
        q,
        dim,
        tables_equal: mismatch.is_none(),
        mismatch,
        conjugation_identity,
    }
}
