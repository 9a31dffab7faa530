//! Discrete Haar systems: one positive weight per arrow, invariant under
//! right translation.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::FiniteGroupoid;
use crate::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HaarError {
    #[error("expected {expected} weights, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("weight of arrow {0} is not positive")]
    NotPositive(usize),
    #[error("w({0}·{1}) != w({0})")]
    NotInvariant(usize, usize),
}

/// `weights[h] = λ_{s(h)}({h})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HaarSystem {
    weights: Vec<Rational>,
}

impl HaarSystem {
    pub fn weight(&self, h: usize) -> &Rational {
        &self.weights[h]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_counting(&self) -> bool {
        self.weights.iter().all(|w| w.is_one())
    }

    /// Normal form `u(x) = w(1_x)`; right invariance forces `w(h) = u(t(h))`.
    pub fn object_weights(&self, g: &FiniteGroupoid) -> Vec<Rational> {
        (0..g.n_objects())
            .map(|x| self.weights[g.unit(x)].clone())
            .collect()
    }

    /// Builds `w(h) = u(t(h))` and re-validates it.
    pub fn from_object_weights(g: &FiniteGroupoid, u: &[Rational]) -> Result<Self, HaarError> {
        if u.len() != g.n_objects() {
            return Err(HaarError::WrongLength {
                expected: g.n_objects(),
                got: u.len(),
            });
        }
        let w: Vec<Rational> = (0..g.n_arrows()).map(|h| u[g.tgt(h)].clone()).collect();
        validate_haar(g, w)
    }

    /// Product weights `w(g,h) = w_G(g)·w_H(h)` on `G × H`, in the arrow order
    /// of [`super::product_groupoid`].
    pub fn product(&self, other: &HaarSystem) -> HaarSystem {
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a * b);
            }
        }
        HaarSystem { weights }
    }
}

pub fn counting_haar(g: &FiniteGroupoid) -> HaarSystem {
    HaarSystem {
        weights: vec![Rational::one(); g.n_arrows()],
    }
}

/// Accepts `w` iff every weight is positive and `w(hg) = w(h)` on every
/// composable pair.
pub fn validate_haar(g: &FiniteGroupoid, w: Vec<Rational>) -> Result<HaarSystem, HaarError> {
    if w.len() != g.n_arrows() {
        return Err(HaarError::WrongLength {
            expected: g.n_arrows(),
            got: w.len(),
        });
    }
    if let Some(h) = w.iter().position(|x| x.is_zero() || x.is_negative()) {
        return Err(HaarError::NotPositive(h));
    }
    for h in 0..g.n_arrows() {
        for &k in g.t_fiber(g.src(h)) {
            let hk = g.compose(h, k).expect("composable");
            if w[hk] != w[h] {
                return Err(HaarError::NotInvariant(h, k));
            }
        }
    }
    Ok(HaarSystem { weights: w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, pair_groupoid, terminal_groupoid};
    use crate::scalar::{rat, rat_int};

    #[test]
    fn counting_weights() {
        let t = terminal_groupoid();
        assert_eq!(counting_haar(&t).weights(), &[rat_int(1)]);
        let z2 = cyclic_group(2).unwrap();
        let h = counting_haar(&z2);
        assert_eq!(h.weights(), &[rat_int(1), rat_int(1)]);
        let p3 = pair_groupoid(3).unwrap();
        let h = counting_haar(&p3);
        assert_eq!(h.len(), 9);
        // brute-force invariance over every composable pair
        for (a, b) in p3.composable_pairs() {
            assert_eq!(h.weight(p3.compose(a, b).unwrap()), h.weight(a));
        }
        assert!(validate_haar(&p3, h.weights().to_vec()).is_ok());
    }

    #[test]
    fn target_dependent_weights_are_invariant() {
        let p2 = pair_groupoid(2).unwrap();
        // w((x,y)) = u(x), u = (1, 2)
        let w: Vec<Rational> = (0..4).map(|h| rat_int(1 + p2.tgt(h) as i64)).collect();
        let haar = validate_haar(&p2, w).unwrap();
        assert_eq!(haar.object_weights(&p2), vec![rat_int(1), rat_int(2)]);
    }

    #[test]
    fn source_dependent_weights_are_not() {
        let p2 = pair_groupoid(2).unwrap();
        let a01 = p2.arrow_by_label("(0,1)").unwrap();
        let a10 = p2.arrow_by_label("(1,0)").unwrap();
        let a00 = p2.arrow_by_label("(0,0)").unwrap();
        let mut w = vec![rat_int(1); 4];
        w[a00] = rat_int(2);
        let err = validate_haar(&p2, w.clone()).unwrap_err();
        assert!(matches!(err, HaarError::NotInvariant(..)));
        // the documented witness: h = (0,1), g = (1,0) gives hg = (0,0)
        assert_eq!(p2.compose(a01, a10), Some(a00));
        assert_ne!(w[a00], w[a01]);
    }

    #[test]
    fn zero_weight_is_rejected() {
        let p2 = pair_groupoid(2).unwrap();
        let mut w = vec![rat(1, 2); 4];
        w[3] = rat_int(0);
        assert_eq!(validate_haar(&p2, w), Err(HaarError::NotPositive(3)));
        assert_eq!(
            validate_haar(&p2, vec![rat_int(1)]),
            Err(HaarError::WrongLength {
                expected: 4,
                got: 1
            })
        );
    }
}
