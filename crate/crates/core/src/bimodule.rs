//! Bimodules over finite algebras, convolution bimodules of bibundles,
//! balanced tensor products and the functoriality constraint τ̂.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgebraError, ConvAlgebra, FiniteAlgebra, Side};
use crate::bibundle::{
    check_biequivariant, compose_bibundles, find_biequivariant_iso, identity_bibundle,
    is_biprincipal, is_right_principal, opposite_bibundle, Bibundle, BibundleError, Composite,
};
use crate::groupoid::HaarSystem;
use crate::linalg::{Accumulator, LinearMap, LinearSystem, SparseVec, Subspace};
use crate::scalar::Gq;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("left action not associative at ({0}, {1}) on basis vector {2}")]
    LeftAssociativity(usize, usize, usize),
    #[error("right action not associative on basis vector {0} at ({1}, {2})")]
    RightAssociativity(usize, usize, usize),
    #[error("actions do not commute at ({0}, {1}, {2})")]
    Commutation(usize, usize, usize),
    #[error("middle algebras differ")]
    MiddleMismatch,
    #[error("bibundle is not right principal")]
    NotPrincipal,
    #[error("Haar system does not match the groupoid it is used with")]
    HaarMismatch,
    #[error("bibundles are not composable")]
    NotComposable,
    #[error("map is not biequivariant at point {0}")]
    NotEquivariant(usize),
    #[error("algebra has no star structure")]
    NoStar,
    #[error("map does not vanish on relation {0}")]
    NotWellDefined(usize),
    #[error(transparent)]
    Bibundle(#[from] BibundleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An `A`-`B` bimodule on `Gq^dim`, given by the actions of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left: FiniteAlgebra,
    right: FiniteAlgebra,
    dim: usize,
    /// `e_a · m_i` at `a·dim + i`.
    lact: Vec<SparseVec>,
    /// `m_i · f_b` at `i·dim B + b`.
    ract: Vec<SparseVec>,
}

impl Bimodule {
    /// Validates associativity of both actions and their commutation on
    /// basis vectors.
    pub fn new(
        left: FiniteAlgebra,
        right: FiniteAlgebra,
        dim: usize,
        lact: Vec<SparseVec>,
        ract: Vec<SparseVec>,
    ) -> Result<Self, BimoduleError> {
        for (table, expected) in [(&lact, left.dim() * dim), (&ract, dim * right.dim())] {
            if table.len() != expected {
                return Err(BimoduleError::WrongLength {
                    expected,
                    got: table.len(),
                });
            }
        }
        let m = Bimodule {
            left,
            right,
            dim,
            lact,
            ract,
        };
        m.check_axioms()?;
        Ok(m)
    }

    fn check_axioms(&self) -> Result<(), BimoduleError> {
        let (na, nb) = (self.left.dim(), self.right.dim());
        for i in 0..self.dim {
            let mi = SparseVec::unit(i);
            for a in 0..na {
                for a2 in 0..na {
                    let lhs = self.act_left(self.left.basis_product(a, a2), &mi);
                    let rhs = self.act_left(&SparseVec::unit(a), self.basis_left(a2, i));
                    if lhs != rhs {
                        return Err(BimoduleError::LeftAssociativity(a, a2, i));
                    }
                }
                for b in 0..nb {
                    let lhs = self.act_right(self.basis_left(a, i), &SparseVec::unit(b));
                    let rhs = self.act_left(&SparseVec::unit(a), self.basis_right(i, b));
                    if lhs != rhs {
                        return Err(BimoduleError::Commutation(a, i, b));
                    }
                }
            }
            for b in 0..nb {
                for b2 in 0..nb {
                    let lhs = self.act_right(&mi, self.right.basis_product(b, b2));
                    let rhs = self.act_right(self.basis_right(i, b), &SparseVec::unit(b2));
                    if lhs != rhs {
                        return Err(BimoduleError::RightAssociativity(i, b, b2));
                    }
                }
            }
        }
        Ok(())
    }

    /// `A` as an `A`-`A` bimodule by multiplication.
    pub fn regular(a: &FiniteAlgebra) -> Self {
        let n = a.dim();
        let table: Vec<SparseVec> = (0..n * n)
            .map(|ij| a.basis_product(ij / n, ij % n).clone())
            .collect();
        Bimodule {
            left: a.clone(),
            right: a.clone(),
            dim: n,
            lact: table.clone(),
            ract: table,
        }
    }

    /// Both actions identically zero.
    pub fn zero_action(left: &FiniteAlgebra, right: &FiniteAlgebra, dim: usize) -> Self {
        Bimodule {
            left: left.clone(),
            right: right.clone(),
            dim,
            lact: vec![SparseVec::new(); left.dim() * dim],
            ract: vec![SparseVec::new(); dim * right.dim()],
        }
    }

    pub fn left_algebra(&self) -> &FiniteAlgebra {
        &self.left
    }

    pub fn right_algebra(&self) -> &FiniteAlgebra {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_left(&self, a: usize, i: usize) -> &SparseVec {
        &self.lact[a * self.dim + i]
    }

    pub fn basis_right(&self, i: usize, b: usize) -> &SparseVec {
        &self.ract[i * self.right.dim() + b]
    }

    pub fn act_left(&self, a: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (x, s) in a.iter() {
            for (i, t) in m.iter() {
                acc.add_scaled(&(s * t), self.basis_left(*x, *i));
            }
        }
        acc.finish()
    }

    pub fn act_right(&self, m: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, t) in m.iter() {
            for (y, s) in b.iter() {
                acc.add_scaled(&(s * t), self.basis_right(*i, *y));
            }
        }
        acc.finish()
    }
}

/// First `(side, algebra basis, module basis)` where `f` fails to commute
/// with an action.
pub fn bimodule_map_witness(
    f: &LinearMap,
    from: &Bimodule,
    to: &Bimodule,
) -> Option<(Side, usize, usize)> {
    for i in 0..from.dim() {
        for a in 0..from.left.dim() {
            let lhs = f.apply(from.basis_left(a, i));
            let rhs = to.act_left(&SparseVec::unit(a), &f.columns[i]);
            if lhs != rhs {
                return Some((Side::Left, a, i));
            }
        }
        for b in 0..from.right.dim() {
            let lhs = f.apply(from.basis_right(i, b));
            let rhs = to.act_right(&f.columns[i], &SparseVec::unit(b));
            if lhs != rhs {
                return Some((Side::Right, b, i));
            }
        }
    }
    None
}

/// `M(P)` with the convolution actions of `A(G)` and `A(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvBimodule {
    pub bibundle: Bibundle,
    pub left_algebra: ConvAlgebra,
    pub right_algebra: ConvAlgebra,
    pub module: Bimodule,
}

impl ConvBimodule {
    /// `(a·m)(p) = Σ_{s(h)=l(p)} a(h⁻¹) m(h·p) w(h)`, summed literally.
    pub fn left_action_literal(&self, a: &[Gq], m: &[Gq]) -> Vec<Gq> {
        let p = &self.bibundle;
        let g = p.left();
        let w = self.left_algebra.haar();
        (0..p.n_points())
            .map(|x| {
                let mut sum = Gq::zero();
                for &h in g.s_fiber(p.l(x)) {
                    let hp = p.left_act(h, x).expect("in domain");
                    let t = &a[g.inv(h)] * &m[hp];
                    if !t.is_zero() {
                        sum += &t.scale(w.weight(h));
                    }
                }
                sum
            })
            .collect()
    }

    /// `(m·b)(p) = Σ_{s(h)=r(p)} m(p·h⁻¹) b(h) w(h)`, summed literally.
    pub fn right_action_literal(&self, m: &[Gq], b: &[Gq]) -> Vec<Gq> {
        let p = &self.bibundle;
        let k = p.right();
        let w = self.right_algebra.haar();
        (0..p.n_points())
            .map(|x| {
                let mut sum = Gq::zero();
                for &h in k.s_fiber(p.r(x)) {
                    let ph = p.right_act(x, k.inv(h)).expect("in domain");
                    let t = &m[ph] * &b[h];
                    if !t.is_zero() {
                        sum += &t.scale(w.weight(h));
                    }
                }
                sum
            })
            .collect()
    }
}

fn check_haar(p: &Bibundle, hg: &HaarSystem, hh: &HaarSystem) -> Result<(), BimoduleError> {
    if hg.len() != p.left().n_arrows() || hh.len() != p.right().n_arrows() {
        return Err(BimoduleError::HaarMismatch);
    }
    Ok(())
}

/// Builds `M(P)`; the basis action tables come from the literal sums on
/// delta functions, and the bimodule axioms are re-verified exactly.
pub fn conv_bimodule(
    p: &Bibundle,
    haar_left: &HaarSystem,
    haar_right: &HaarSystem,
) -> Result<ConvBimodule, BimoduleError> {
    check_haar(p, haar_left, haar_right)?;
    let left_algebra = ConvAlgebra::new(p.left().clone(), haar_left.clone())?;
    let right_algebra = ConvAlgebra::new(p.right().clone(), haar_right.clone())?;
    let n = p.n_points();
    let mut cb = ConvBimodule {
        bibundle: p.clone(),
        left_algebra,
        right_algebra,
        module: Bimodule::zero_action(&FiniteAlgebra::ground_field(), &FiniteAlgebra::ground_field(), 0),
    };
    let delta = |len: usize, i: usize| SparseVec::unit(i).to_dense(len);
    let (na, nb) = (p.left().n_arrows(), p.right().n_arrows());
    let mut lact = Vec::with_capacity(na * n);
    for a in 0..na {
        for i in 0..n {
            lact.push(SparseVec::from_dense(
                &cb.left_action_literal(&delta(na, a), &delta(n, i)),
            ));
        }
    }
    let mut ract = Vec::with_capacity(n * nb);
    for i in 0..n {
        for b in 0..nb {
            ract.push(SparseVec::from_dense(
                &cb.right_action_literal(&delta(n, i), &delta(nb, b)),
            ));
        }
    }
    cb.module = Bimodule::new(
        cb.left_algebra.to_finite_algebra(),
        cb.right_algebra.to_finite_algebra(),
        n,
        lact,
        ract,
    )?;
    Ok(cb)
}

/// A quotient `V / R` with basis given by the non-pivot coordinates of the
/// echelon form of `R`.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    relations: Subspace,
    basis: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl QuotientSpace {
    pub fn new(relations: Subspace) -> Self {
        let basis = relations.complement_basis();
        let mut position = vec![None; relations.ambient()];
        for (k, &c) in basis.iter().enumerate() {
            position[c] = Some(k);
        }
        QuotientSpace {
            relations,
            basis,
            position,
        }
    }

    pub fn ambient(&self) -> usize {
        self.relations.ambient()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Ambient coordinates whose classes form the quotient basis.
    pub fn basis_coordinates(&self) -> &[usize] {
        &self.basis
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// `Π`: ambient vector to quotient coordinates.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.relations
            .reduce(v.clone())
            .map_indices(|c| self.position[c].expect("reduced vectors avoid pivots"))
    }

    /// The section of `Π` picking basis coordinates.
    pub fn lift(&self, q: &SparseVec) -> SparseVec {
        q.map_indices(|k| self.basis[k])
    }
}

/// Descends a map given on ambient basis vectors through the quotient,
/// after checking that it kills every relation.
pub fn descend(
    q: &QuotientSpace,
    rows: usize,
    image: impl Fn(usize) -> SparseVec,
) -> Result<LinearMap, BimoduleError> {
    let apply = |v: &SparseVec| {
        let mut acc = Accumulator::new();
        for (c, x) in v.iter() {
            acc.add_scaled(x, &image(*c));
        }
        acc.finish()
    };
    for (c, row) in q.relations().pivot_rows() {
        if !apply(row).is_zero() {
            return Err(BimoduleError::NotWellDefined(c));
        }
    }
    Ok(LinearMap::from_columns(
        rows,
        q.basis_coordinates().iter().map(|&c| image(c)).collect(),
    ))
}

/// `M ⊗_B N` as a quotient of `M ⊗ N` (coordinate `i·dim N + j`), with its
/// induced `A`-`C` bimodule structure.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub quotient: QuotientSpace,
    pub bimodule: Bimodule,
    pub dim_left: usize,
    pub dim_right: usize,
}

pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<TensorProduct, BimoduleError> {
    if m.right_algebra() != n.left_algebra() {
        return Err(BimoduleError::MiddleMismatch);
    }
    let (dm, dn) = (m.dim(), n.dim());
    let tensor = |x: &SparseVec, y: &SparseVec| crate::algebra::tensor_vectors(x, y, dn);
    let mut rel = Subspace::new(dm * dn);
    for i in 0..dm {
        let mi = SparseVec::unit(i);
        for b in 0..m.right_algebra().dim() {
            for j in 0..dn {
                let nj = SparseVec::unit(j);
                let r = tensor(m.basis_right(i, b), &nj).sub(&tensor(&mi, n.basis_left(b, j)));
                if !r.is_zero() {
                    rel.insert(r);
                }
            }
        }
    }
    let quotient = QuotientSpace::new(rel);
    let d = quotient.dim();
    let (na, nc) = (m.left_algebra().dim(), n.right_algebra().dim());
    let mut lact = vec![SparseVec::new(); na * d];
    for a in 0..na {
        let map = descend(&quotient, d, |c| {
            quotient.project(&tensor(m.basis_left(a, c / dn), &SparseVec::unit(c % dn)))
        })?;
        for k in 0..d {
            lact[a * d + k] = map.columns[k].clone();
        }
    }
    let mut ract = vec![SparseVec::new(); d * nc];
    for c in 0..nc {
        let map = descend(&quotient, d, |x| {
            quotient.project(&tensor(&SparseVec::unit(x / dn), n.basis_right(x % dn, c)))
        })?;
        for k in 0..d {
            ract[k * nc + c] = map.columns[k].clone();
        }
    }
    let bimodule = Bimodule::new(
        m.left_algebra().clone(),
        n.right_algebra().clone(),
        d,
        lact,
        ract,
    )?;
    Ok(TensorProduct {
        quotient,
        bimodule,
        dim_left: dm,
        dim_right: dn,
    })
}

/// Everything computed while certifying `τ̂_{P,Q}`.
#[derive(Clone, Debug)]
pub struct TauCertificate {
    pub composite: Composite,
    pub tensor: TensorProduct,
    pub target: ConvBimodule,
    /// `τ̂` on `M(P) ⊗ M(Q)` before passing to the quotient.
    pub ambient_map: LinearMap,
    /// `τ̂` on the quotient basis.
    pub map: LinearMap,
    pub representative_independent: bool,
    pub well_defined: bool,
    pub bimodule_map: bool,
    pub rank: usize,
}

impl TauCertificate {
    pub fn is_iso(&self) -> bool {
        self.representative_independent
            && self.well_defined
            && self.bimodule_map
            && self.rank == self.tensor.quotient.dim()
            && self.rank == self.composite.bibundle.n_points()
    }
}

/// `τ̂(f⊗g)[p,q] = Σ_{h: s(h) = r(p)} f(p·h⁻¹) g(h·q) w(h)`, evaluated on
/// every composable pair and compared across each orbit.
pub fn tau_hat(
    p: &Bibundle,
    q: &Bibundle,
    haar_g: &HaarSystem,
    haar_h: &HaarSystem,
    haar_k: &HaarSystem,
) -> Result<TauCertificate, BimoduleError> {
    if p.right() != q.left() {
        return Err(BimoduleError::NotComposable);
    }
    check_haar(p, haar_g, haar_h)?;
    check_haar(q, haar_h, haar_k)?;
    if !is_right_principal(p).holds() || !is_right_principal(q).holds() {
        return Err(BimoduleError::NotPrincipal);
    }
    let mp = conv_bimodule(p, haar_g, haar_h)?;
    let mq = conv_bimodule(q, haar_h, haar_k)?;
    let tensor = tensor_over(&mp.module, &mq.module)?;
    let composite = compose_bibundles(p, q)?;
    let target = conv_bimodule(&composite.bibundle, haar_g, haar_k)?;
    let h = p.right();
    let dq = q.n_points();
    let n_classes = composite.bibundle.n_points();

    // value of τ̂(δ_a ⊗ δ_b) at each composable pair, stored per pair
    let per_pair: Vec<SparseVec> = composite
        .pairs
        .iter()
        .map(|&(x, y)| {
            SparseVec::from_pairs(h.s_fiber(p.r(x)).iter().map(|&k| {
                let a = p.right_act(x, h.inv(k)).expect("in domain");
                let b = q.left_act(k, y).expect("in domain");
                (a * dq + b, Gq::real(haar_h.weight(k).clone()))
            }))
        })
        .collect();
    let representative_independent = composite
        .class_of_pair
        .iter()
        .enumerate()
        .all(|(i, &c)| per_pair[i] == per_pair[composite.representative[c]]);
    let mut columns = vec![Vec::new(); p.n_points() * dq];
    for (c, &rep) in composite.representative.iter().enumerate() {
        for (ab, w) in per_pair[rep].iter() {
            columns[*ab].push((c, w.clone()));
        }
    }
    let ambient_map = LinearMap::from_columns(
        n_classes,
        columns.into_iter().map(SparseVec::from_pairs).collect(),
    );
    let (map, well_defined) =
        match descend(&tensor.quotient, n_classes, |c| ambient_map.columns[c].clone()) {
            Ok(m) => (m, true),
            Err(_) => (
                LinearMap::from_columns(
                    n_classes,
                    tensor
                        .quotient
                        .basis_coordinates()
                        .iter()
                        .map(|&c| ambient_map.columns[c].clone())
                        .collect(),
                ),
                false,
            ),
        };
    let bimodule_map = bimodule_map_witness(&map, &tensor.bimodule, &target.module).is_none();
    let rank = map.rank();
    Ok(TauCertificate {
        composite,
        tensor,
        target,
        ambient_map,
        map,
        representative_independent,
        well_defined,
        bimodule_map,
        rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceCertificate {
    pub taus_are_isos: bool,
    /// The canonical `[[p,q],r] ↦ [p,[q,r]]` is a well-defined biequivariant
    /// bijection.
    pub associator_ok: bool,
    /// First `(p,q,r)` on which the two routes disagree.
    pub failure: Option<(usize, usize, usize)>,
    pub checked: usize,
}

impl CoherenceCertificate {
    pub fn holds(&self) -> bool {
        self.taus_are_isos && self.associator_ok && self.failure.is_none()
    }
}

/// Compares `τ̂_{P∘Q,R} ∘ (τ̂_{P,Q} ⊗ id)` with `τ̂_{P,Q∘R} ∘ (id ⊗ τ̂_{Q,R})`
/// through the associator on every `δ_p ⊗ δ_q ⊗ δ_r`.
pub fn tau_coherence_check(
    p: &Bibundle,
    q: &Bibundle,
    r: &Bibundle,
    haars: [&HaarSystem; 4],
) -> Result<CoherenceCertificate, BimoduleError> {
    let [hg, hh, hk, hl] = haars;
    let pq = tau_hat(p, q, hg, hh, hk)?;
    let qr = tau_hat(q, r, hh, hk, hl)?;
    let pq_r = tau_hat(&pq.composite.bibundle, r, hg, hk, hl)?;
    let p_qr = tau_hat(p, &qr.composite.bibundle, hg, hh, hl)?;
    let taus_are_isos = pq.is_iso() && qr.is_iso() && pq_r.is_iso() && p_qr.is_iso();

    // associator on points, checked on every member of every class
    let n1 = pq_r.composite.bibundle.n_points();
    let mut assoc = vec![usize::MAX; n1];
    let mut associator_ok = true;
    for (i, &(x, z)) in pq_r.composite.pairs.iter().enumerate() {
        let c = pq_r.composite.class_of_pair[i];
        for (j, &(a, b)) in pq.composite.pairs.iter().enumerate() {
            if pq.composite.class_of_pair[j] != x {
                continue;
            }
            let y = qr.composite.class_of(b, z).expect("composable");
            let target = p_qr.composite.class_of(a, y).expect("composable");
            if assoc[c] == usize::MAX {
                assoc[c] = target;
            } else if assoc[c] != target {
                associator_ok = false;
            }
        }
    }
    associator_ok = associator_ok
        && check_biequivariant(&pq_r.composite.bibundle, &p_qr.composite.bibundle, &assoc).is_ok();

    let (dp, dq, dr) = (p.n_points(), q.n_points(), r.n_points());
    let dqr = qr.composite.bibundle.n_points();
    let mut failure = None;
    let mut checked = 0;
    'cube: for a in 0..dp {
        for b in 0..dq {
            let route1_mid = &pq.ambient_map.columns[a * dq + b];
            for c in 0..dr {
                checked += 1;
                let mut acc = Accumulator::new();
                for (x, s) in route1_mid.iter() {
                    acc.add_scaled(s, &pq_r.ambient_map.columns[x * dr + c]);
                }
                let route1 = acc.finish().map_indices(|i| assoc[i]);
                let mut acc = Accumulator::new();
                for (y, s) in qr.ambient_map.columns[b * dr + c].iter() {
                    acc.add_scaled(s, &p_qr.ambient_map.columns[a * dqr + y]);
                }
                let route2 = acc.finish();
                if route1 != route2 {
                    failure = Some((a, b, c));
                    break 'cube;
                }
            }
        }
    }
    Ok(CoherenceCertificate {
        taus_are_isos,
        associator_ok,
        failure,
        checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessCertificate {
    pub side: Side,
    pub dim_tensor: usize,
    pub dim_module: usize,
    pub rank: usize,
    pub well_defined: bool,
}

impl SmoothnessCertificate {
    pub fn is_iso(&self) -> bool {
        self.well_defined && self.rank == self.dim_tensor && self.rank == self.dim_module
    }
}

/// Certifies that `A ⊗_A M → M` (left) or `M ⊗_B B → M` (right) is an
/// isomorphism.
pub fn smoothness_check(m: &Bimodule, side: Side) -> Result<SmoothnessCertificate, BimoduleError> {
    let (t, action): (TensorProduct, Box<dyn Fn(usize) -> SparseVec>) = match side {
        Side::Right => {
            let b = m.right_algebra();
            let t = tensor_over(m, &Bimodule::regular(b))?;
            let nb = b.dim();
            (t, Box::new(move |c| m.basis_right(c / nb, c % nb).clone()))
        }
        _ => {
            let a = m.left_algebra();
            let t = tensor_over(&Bimodule::regular(a), m)?;
            let dm = m.dim();
            (t, Box::new(move |c| m.basis_left(c / dm, c % dm).clone()))
        }
    };
    let (map, well_defined) = match descend(&t.quotient, m.dim(), &action) {
        Ok(map) => (map, true),
        Err(_) => (LinearMap::from_columns(m.dim(), Vec::new()), false),
    };
    Ok(SmoothnessCertificate {
        side,
        dim_tensor: t.quotient.dim(),
        dim_module: m.dim(),
        rank: map.rank(),
        well_defined,
    })
}

pub fn self_induced_check(a: &FiniteAlgebra) -> Result<SmoothnessCertificate, BimoduleError> {
    smoothness_check(&Bimodule::regular(a), Side::Left)
}

/// A module-linear section of the action map: `σ: M → M ⊗ B` for the right
/// side (coordinate `i·dim B + b`), `σ: M → A ⊗ M` for the left side
/// (coordinate `a·dim M + i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSection {
    pub side: Side,
    pub images: Vec<SparseVec>,
}

/// Exact linear solve for a section; `None` means the complete system is
/// infeasible, which in finite dimension disproves existence.
pub fn find_module_section(m: &Bimodule, side: Side) -> Option<ModuleSection> {
    let d = m.dim();
    let right = matches!(side, Side::Right);
    let alg = if right { m.right_algebra() } else { m.left_algebra() };
    let na = alg.dim();
    let width = d * na;
    let var = |i: usize, c: usize| i * width + c;
    // coordinate of a pure tensor: right side (m_j, f_b) ↦ j·na + b,
    // left side (e_a, m_j) ↦ a·d + j
    let coord = |j: usize, b: usize| if right { j * na + b } else { b * d + j };
    let act = |c: usize| {
        if right {
            m.basis_right(c / na, c % na).clone()
        } else {
            m.basis_left(c / d, c % d).clone()
        }
    };
    let mut sys = LinearSystem::new(d * width);
    for i in 0..d {
        let mut rows: Vec<Vec<(usize, Gq)>> = vec![Vec::new(); d];
        for c in 0..width {
            for (k, x) in act(c).iter() {
                rows[*k].push((var(i, c), x.clone()));
            }
        }
        for (k, row) in rows.into_iter().enumerate() {
            let rhs = if k == i { Gq::from(1) } else { Gq::zero() };
            sys.add_equation(SparseVec::from_pairs(row), rhs);
        }
    }
    // linearity: σ(m_i · x) = σ(m_i) · x on the right, σ(x · m_i) = x · σ(m_i)
    // on the left, with the algebra acting on the free tensor factor
    for i in 0..d {
        for x in 0..na {
            let moved = if right {
                m.basis_right(i, x).clone()
            } else {
                m.basis_left(x, i).clone()
            };
            let mut rows: Vec<Vec<(usize, Gq)>> = vec![Vec::new(); width];
            for (l, s) in moved.iter() {
                for c in 0..width {
                    rows[c].push((var(*l, c), s.clone()));
                }
            }
            for j in 0..d {
                for b in 0..na {
                    let prod = if right {
                        alg.basis_product(b, x)
                    } else {
                        alg.basis_product(x, b)
                    };
                    for (b2, s) in prod.iter() {
                        rows[coord(j, *b2)].push((var(i, coord(j, b)), -s));
                    }
                }
            }
            for row in rows {
                sys.add_equation(SparseVec::from_pairs(row), Gq::zero());
            }
        }
    }
    let sol = sys.solve()?;
    let section = ModuleSection {
        side,
        images: (0..d)
            .map(|i| SparseVec::from_dense(&sol[i * width..(i + 1) * width]))
            .collect(),
    };
    assert!(
        verify_module_section(m, &section),
        "solver returned an invalid section"
    );
    Some(section)
}

/// Independent check of a module section by multiplying out.
pub fn verify_module_section(m: &Bimodule, s: &ModuleSection) -> bool {
    let d = m.dim();
    let right = matches!(s.side, Side::Right);
    let alg = if right { m.right_algebra() } else { m.left_algebra() };
    let na = alg.dim();
    let act = |t: &SparseVec| {
        let mut acc = Accumulator::new();
        for (c, x) in t.iter() {
            let v = if right {
                m.basis_right(c / na, c % na)
            } else {
                m.basis_left(c / d, c % d)
            };
            acc.add_scaled(x, v);
        }
        acc.finish()
    };
    let sigma = |v: &SparseVec| {
        let mut acc = Accumulator::new();
        for (i, x) in v.iter() {
            acc.add_scaled(x, &s.images[*i]);
        }
        acc.finish()
    };
    let act_free = |t: &SparseVec, x: usize| {
        let mut acc = Accumulator::new();
        for (c, y) in t.iter() {
            let (j, b) = if right { (c / na, c % na) } else { (c % d, c / d) };
            let prod = if right {
                alg.basis_product(b, x)
            } else {
                alg.basis_product(x, b)
            };
            for (b2, z) in prod.iter() {
                let k = if right { j * na + b2 } else { b2 * d + j };
                acc.add(k, y * z);
            }
        }
        acc.finish()
    };
    for i in 0..d {
        if act(&s.images[i]) != SparseVec::unit(i) {
            return false;
        }
        for x in 0..na {
            let moved = if right {
                m.basis_right(i, x)
            } else {
                m.basis_left(x, i)
            };
            if sigma(moved) != act_free(&s.images[i], x) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegeneracyReport {
    pub side: Side,
    pub surjective: bool,
    /// In finite dimension every surjective linear map splits, so the
    /// plain, split and strong grades coincide.
    pub split: bool,
    pub strong: bool,
    pub grades_coincide: bool,
}

pub fn nondegeneracy_class(m: &Bimodule, side: Side) -> NondegeneracyReport {
    let mut image = Subspace::new(m.dim());
    for i in 0..m.dim() {
        if matches!(side, Side::Right) {
            for b in 0..m.right_algebra().dim() {
                image.insert(m.basis_right(i, b).clone());
            }
        } else {
            for a in 0..m.left_algebra().dim() {
                image.insert(m.basis_left(a, i).clone());
            }
        }
    }
    let surjective = image.rank() == m.dim();
    NondegeneracyReport {
        side,
        surjective,
        split: surjective,
        strong: surjective,
        grades_coincide: true,
    }
}

#[derive(Clone, Debug)]
pub struct PushforwardCertificate {
    /// `M(P') → M(P)`, `f ↦ f ∘ φ`.
    pub map: LinearMap,
    pub bijective: bool,
    pub bimodule_map: bool,
}

impl PushforwardCertificate {
    pub fn is_iso(&self) -> bool {
        self.bijective && self.bimodule_map
    }
}

/// The coefficient reindexing induced by a biequivariant bijection
/// `φ: P → P'`.
pub fn pushforward(
    p: &Bibundle,
    p2: &Bibundle,
    phi: &[usize],
    haar_left: &HaarSystem,
    haar_right: &HaarSystem,
) -> Result<PushforwardCertificate, BimoduleError> {
    check_biequivariant(p, p2, phi).map_err(BimoduleError::NotEquivariant)?;
    let m = conv_bimodule(p, haar_left, haar_right)?;
    let m2 = conv_bimodule(p2, haar_left, haar_right)?;
    let mut inv = vec![0; phi.len()];
    for (x, &y) in phi.iter().enumerate() {
        inv[y] = x;
    }
    // (f∘φ)(x) = f(φ(x)), so δ_y ↦ δ_{φ⁻¹(y)}
    let map = LinearMap::from_columns(
        p.n_points(),
        inv.iter().map(|&x| SparseVec::unit(x)).collect(),
    );
    let bijective = map.is_bijective();
    let bimodule_map = bimodule_map_witness(&map, &m2.module, &m.module).is_none();
    Ok(PushforwardCertificate {
        map,
        bijective,
        bimodule_map,
    })
}

/// `M†`: the conjugate space of `M` with `b·m = m·b*` and `m·a = a*·m`,
/// written in conjugated coordinates.
pub fn dagger_bimodule(m: &Bimodule) -> Result<Bimodule, BimoduleError> {
    let (a, b) = (m.left_algebra(), m.right_algebra());
    if !a.has_star() || !b.has_star() {
        return Err(BimoduleError::NoStar);
    }
    let d = m.dim();
    let mut lact = Vec::with_capacity(b.dim() * d);
    for y in 0..b.dim() {
        let ys = b.star(&SparseVec::unit(y)).expect("star");
        for i in 0..d {
            lact.push(m.act_right(&SparseVec::unit(i), &ys).conj());
        }
    }
    let mut ract = Vec::with_capacity(d * a.dim());
    for i in 0..d {
        for x in 0..a.dim() {
            let xs = a.star(&SparseVec::unit(x)).expect("star");
            ract.push(m.act_left(&xs, &SparseVec::unit(i)).conj());
        }
    }
    Bimodule::new(b.clone(), a.clone(), d, lact, ract)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorAssociativity {
    pub dim_left_nested: usize,
    pub dim_right_nested: usize,
    pub well_defined: bool,
    pub rank: usize,
}

impl TensorAssociativity {
    pub fn is_iso(&self) -> bool {
        self.well_defined
            && self.rank == self.dim_left_nested
            && self.rank == self.dim_right_nested
    }
}

/// Certifies `[[m⊗n]⊗p] ↦ [m⊗[n⊗p]]` as a bijection
/// `(M ⊗_B N) ⊗_C P → M ⊗_B (N ⊗_C P)`.
pub fn tensor_associativity_check(
    m: &Bimodule,
    n: &Bimodule,
    p: &Bimodule,
) -> Result<TensorAssociativity, BimoduleError> {
    let mn = tensor_over(m, n)?;
    let np = tensor_over(n, p)?;
    let left = tensor_over(&mn.bimodule, p)?;
    let right = tensor_over(m, &np.bimodule)?;
    let (dn, dp, dnp) = (n.dim(), p.dim(), np.quotient.dim());
    // F(m_i ⊗ n_j ⊗ p_k) = Π_R(m_i ⊗ Π_NP(n_j ⊗ p_k))
    let f = |i: usize, j: usize, k: usize| {
        let inner = np.quotient.project(&SparseVec::unit(j * dp + k));
        right.quotient.project(&inner.map_indices(|y| i * dnp + y))
    };
    let f_ambient = |v: &SparseVec, k: usize| {
        let mut acc = Accumulator::new();
        for (ij, x) in v.iter() {
            acc.add_scaled(x, &f(ij / dn, ij % dn, k));
        }
        acc.finish()
    };
    // F must vanish on (inner relations) ⊗ p for the lift to be irrelevant
    let mut well_defined = mn
        .quotient
        .relations()
        .pivot_rows()
        .all(|(_, row)| (0..dp).all(|k| f_ambient(row, k).is_zero()));
    let g = |c: usize| {
        let (x, k) = (c / dp, c % dp);
        let lifted = mn.quotient.lift(&SparseVec::unit(x));
        f_ambient(&lifted, k)
    };
    let map = match descend(&left.quotient, right.quotient.dim(), g) {
        Ok(map) => map,
        Err(_) => {
            well_defined = false;
            LinearMap::from_columns(right.quotient.dim(), Vec::new())
        }
    };
    Ok(TensorAssociativity {
        dim_left_nested: left.quotient.dim(),
        dim_right_nested: right.quotient.dim(),
        well_defined,
        rank: map.rank(),
    })
}

/// Morita invertibility of `M(P)` for a biprincipal `P`.
#[derive(Clone, Debug)]
pub struct MoritaCertificate {
    pub biprincipal: bool,
    /// `M(P) ⊗_{A(H)} M(P†) ≅ A(G)`.
    pub left_composite: Option<MoritaSide>,
    /// `M(P†) ⊗_{A(G)} M(P) ≅ A(H)`.
    pub right_composite: Option<MoritaSide>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaSide {
    pub tensor_dim: usize,
    pub algebra_dim: usize,
    pub tau_iso: bool,
    pub unitor_found: bool,
    /// The composite `M ⊗ M† → A` is a bimodule isomorphism onto the
    /// regular bimodule.
    pub composite_iso: bool,
}

impl MoritaCertificate {
    pub fn holds(&self) -> bool {
        self.biprincipal
            && [&self.left_composite, &self.right_composite]
                .iter()
                .all(|s| s.as_ref().is_some_and(|s| s.composite_iso))
    }
}

fn morita_side(
    p: &Bibundle,
    q: &Bibundle,
    hg: &HaarSystem,
    hh: &HaarSystem,
) -> Result<MoritaSide, BimoduleError> {
    let tau = tau_hat(p, q, hg, hh, hg)?;
    let id = identity_bibundle(p.left());
    let unitor = find_biequivariant_iso(&tau.composite.bibundle, &id)?;
    let algebra = ConvAlgebra::new(p.left().clone(), hg.clone())?.to_finite_algebra();
    let regular = Bimodule::regular(&algebra);
    let mut side = MoritaSide {
        tensor_dim: tau.tensor.quotient.dim(),
        algebra_dim: algebra.dim(),
        tau_iso: tau.is_iso(),
        unitor_found: unitor.is_some(),
        composite_iso: false,
    };
    if let Some(phi) = unitor {
        // M(P∘P†) → M(id) is the inverse of the pullback along φ
        let mut cols = vec![SparseVec::new(); phi.len()];
        for (x, &y) in phi.iter().enumerate() {
            cols[x] = SparseVec::unit(y);
        }
        let forward = LinearMap::from_columns(id.n_points(), cols);
        let total = forward.compose(&tau.map);
        side.composite_iso = side.tau_iso
            && total.is_bijective()
            && bimodule_map_witness(&total, &tau.tensor.bimodule, &regular).is_none();
    }
    Ok(side)
}

pub fn morita_check(
    p: &Bibundle,
    haar_left: &HaarSystem,
    haar_right: &HaarSystem,
) -> Result<MoritaCertificate, BimoduleError> {
    check_haar(p, haar_left, haar_right)?;
    let biprincipal = is_biprincipal(p).holds();
    if !biprincipal {
        return Ok(MoritaCertificate {
            biprincipal,
            left_composite: None,
            right_composite: None,
        });
    }
    let po = opposite_bibundle(p)?;
    Ok(MoritaCertificate {
        biprincipal,
        left_composite: Some(morita_side(p, &po, haar_left, haar_right)?),
        right_composite: Some(morita_side(&po, p, haar_right, haar_left)?),
    })
}
