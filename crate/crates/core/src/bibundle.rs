//! Finite bibundles `G ← P → H` with commuting partial actions.

use std::collections::VecDeque;

use thiserror::Error;

use crate::groupoid::{
    cech_groupoid, pair_groupoid, product_groupoid, terminal_groupoid, unit_groupoid,
    ConstructError, FiniteGroupoid, GaugeGroupoid, GroupoidHom, HomError,
};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionSide {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BibundleError {
    #[error("table length mismatch for {0}")]
    LengthMismatch(&'static str),
    #[error("{what} index {index} out of range")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("{side:?} action of arrow {arrow} on point {point} given outside its domain")]
    OutsideDomain {
        side: ActionSide,
        arrow: usize,
        point: usize,
    },
    #[error("{side:?} action of arrow {arrow} on point {point} is missing")]
    MissingAction {
        side: ActionSide,
        arrow: usize,
        point: usize,
    },
    #[error("{side:?} action of arrow {arrow} on point {point} given twice")]
    ConflictingAction {
        side: ActionSide,
        arrow: usize,
        point: usize,
    },
    #[error("{side:?} action of arrow {arrow} on point {point} breaks an anchor")]
    AnchorViolation {
        side: ActionSide,
        arrow: usize,
        point: usize,
    },
    #[error("{side:?} unit does not fix point {point}")]
    UnitLaw { side: ActionSide, point: usize },
    #[error("{side:?} action not associative at arrows ({first}, {second}), point {point}")]
    Associativity {
        side: ActionSide,
        first: usize,
        second: usize,
        point: usize,
    },
    #[error("({g}·{p})·{h} != {g}·({p}·{h})")]
    CommutationFailure { g: usize, p: usize, h: usize },
    #[error("bibundles are not composable: middle groupoids differ")]
    NotComposable,
    #[error("bibundle is not right principal")]
    NotPrincipal,
    #[error("bibundle is not biprincipal")]
    NotBiprincipal,
    #[error("bibundles have different left or right groupoids")]
    TypeMismatch,
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Unvalidated bibundle tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBibundle {
    pub points: usize,
    pub l: Vec<usize>,
    pub r: Vec<usize>,
    /// `(g, p, g·p)`.
    pub lact: Vec<(usize, usize, usize)>,
    /// `(p, h, p·h)`.
    pub ract: Vec<(usize, usize, usize)>,
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    left: FiniteGroupoid,
    right: FiniteGroupoid,
    l: Vec<usize>,
    r: Vec<usize>,
    /// `g·p` at `g·|P| + p`.
    lact: Vec<Option<usize>>,
    /// `p·h` at `p·|H₁| + h`.
    ract: Vec<Option<usize>>,
    labels: Vec<String>,
}

pub fn validate_bibundle(
    left: &FiniteGroupoid,
    right: &FiniteGroupoid,
    raw: &RawBibundle,
) -> Result<Bibundle, BibundleError> {
    use ActionSide::*;
    use BibundleError::*;
    let n = raw.points;
    let (ng, nh) = (left.n_arrows(), right.n_arrows());
    if raw.l.len() != n {
        return Err(LengthMismatch("l"));
    }
    if raw.r.len() != n {
        return Err(LengthMismatch("r"));
    }
    if let Some(labels) = &raw.labels {
        if labels.len() != n {
            return Err(LengthMismatch("labels"));
        }
    }
    let oob = |what, index| IndexOutOfRange { what, index };
    if let Some(&x) = raw.l.iter().find(|&&x| x >= left.n_objects()) {
        return Err(oob("left object", x));
    }
    if let Some(&x) = raw.r.iter().find(|&&x| x >= right.n_objects()) {
        return Err(oob("right object", x));
    }
    let mut lact = vec![None; ng * n];
    for &(g, p, q) in &raw.lact {
        if g >= ng {
            return Err(oob("left arrow", g));
        }
        if p >= n || q >= n {
            return Err(oob("point", p.max(q)));
        }
        let (arrow, point) = (g, p);
        if left.src(g) != raw.l[p] {
            return Err(OutsideDomain { side: Left, arrow, point });
        }
        if raw.l[q] != left.tgt(g) || raw.r[q] != raw.r[p] {
            return Err(AnchorViolation { side: Left, arrow, point });
        }
        match lact[g * n + p] {
            Some(prev) if prev != q => return Err(ConflictingAction { side: Left, arrow, point }),
            _ => lact[g * n + p] = Some(q),
        }
    }
    let mut ract = vec![None; n * nh];
    for &(p, h, q) in &raw.ract {
        if h >= nh {
            return Err(oob("right arrow", h));
        }
        if p >= n || q >= n {
            return Err(oob("point", p.max(q)));
        }
        let (arrow, point) = (h, p);
        if right.tgt(h) != raw.r[p] {
            return Err(OutsideDomain { side: Right, arrow, point });
        }
        if raw.r[q] != right.src(h) || raw.l[q] != raw.l[p] {
            return Err(AnchorViolation { side: Right, arrow, point });
        }
        match ract[p * nh + h] {
            Some(prev) if prev != q => {
                return Err(ConflictingAction { side: Right, arrow, point })
            }
            _ => ract[p * nh + h] = Some(q),
        }
    }
    for p in 0..n {
        for &g in left.s_fiber(raw.l[p]) {
            if lact[g * n + p].is_none() {
                return Err(MissingAction { side: Left, arrow: g, point: p });
            }
        }
        for &h in right.t_fiber(raw.r[p]) {
            if ract[p * nh + h].is_none() {
                return Err(MissingAction { side: Right, arrow: h, point: p });
            }
        }
    }
    let la = |g: usize, p: usize| lact[g * n + p].expect("in domain");
    let ra = |p: usize, h: usize| ract[p * nh + h].expect("in domain");
    for p in 0..n {
        if la(left.unit(raw.l[p]), p) != p {
            return Err(UnitLaw { side: Left, point: p });
        }
        if ra(p, right.unit(raw.r[p])) != p {
            return Err(UnitLaw { side: Right, point: p });
        }
        for &g2 in left.s_fiber(raw.l[p]) {
            for &g1 in left.s_fiber(left.tgt(g2)) {
                let g12 = left.compose(g1, g2).expect("composable");
                if la(g12, p) != la(g1, la(g2, p)) {
                    return Err(Associativity {
                        side: Left,
                        first: g1,
                        second: g2,
                        point: p,
                    });
                }
            }
        }
        for &h1 in right.t_fiber(raw.r[p]) {
            for &h2 in right.t_fiber(right.src(h1)) {
                let h12 = right.compose(h1, h2).expect("composable");
                if ra(p, h12) != ra(ra(p, h1), h2) {
                    return Err(Associativity {
                        side: Right,
                        first: h1,
                        second: h2,
                        point: p,
                    });
                }
            }
        }
        for &g in left.s_fiber(raw.l[p]) {
            for &h in right.t_fiber(raw.r[p]) {
                if ra(la(g, p), h) != la(g, ra(p, h)) {
                    return Err(CommutationFailure { g, p, h });
                }
            }
        }
    }
    Ok(Bibundle {
        left: left.clone(),
        right: right.clone(),
        l: raw.l.clone(),
        r: raw.r.clone(),
        lact,
        ract,
        labels: raw
            .labels
            .clone()
            .unwrap_or_else(|| (0..n).map(|p| p.to_string()).collect()),
    })
}

impl Bibundle {
    pub fn left(&self) -> &FiniteGroupoid {
        &self.left
    }

    pub fn right(&self) -> &FiniteGroupoid {
        &self.right
    }

    pub fn n_points(&self) -> usize {
        self.l.len()
    }

    pub fn l(&self, p: usize) -> usize {
        self.l[p]
    }

    pub fn r(&self, p: usize) -> usize {
        self.r[p]
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `g·p`, defined iff `s(g) = l(p)`.
    pub fn left_act(&self, g: usize, p: usize) -> Option<usize> {
        self.lact[g * self.n_points() + p]
    }

    /// `p·h`, defined iff `r(p) = t(h)`.
    pub fn right_act(&self, p: usize, h: usize) -> Option<usize> {
        self.ract[p * self.right.n_arrows() + h]
    }

    pub fn to_raw(&self) -> RawBibundle {
        let n = self.n_points();
        let mut lact = Vec::new();
        for g in 0..self.left.n_arrows() {
            for p in 0..n {
                if let Some(q) = self.left_act(g, p) {
                    lact.push((g, p, q));
                }
            }
        }
        let mut ract = Vec::new();
        for p in 0..n {
            for h in 0..self.right.n_arrows() {
                if let Some(q) = self.right_act(p, h) {
                    ract.push((p, h, q));
                }
            }
        }
        RawBibundle {
            points: n,
            l: self.l.clone(),
            r: self.r.clone(),
            lact,
            ract,
            labels: Some(self.labels.clone()),
        }
    }

    /// Renames point `p` to `perm[p]`.
    pub fn permute_points(&self, perm: &[usize]) -> Bibundle {
        let raw = self.to_raw();
        let n = raw.points;
        let mut l = vec![0; n];
        let mut r = vec![0; n];
        let mut labels = vec![String::new(); n];
        for p in 0..n {
            l[perm[p]] = raw.l[p];
            r[perm[p]] = raw.r[p];
            labels[perm[p]] = self.labels[p].clone();
        }
        let permuted = RawBibundle {
            points: n,
            l,
            r,
            lact: raw
                .lact
                .iter()
                .map(|&(g, p, q)| (g, perm[p], perm[q]))
                .collect(),
            ract: raw
                .ract
                .iter()
                .map(|&(p, h, q)| (perm[p], h, perm[q]))
                .collect(),
            labels: Some(labels),
        };
        validate_bibundle(&self.left, &self.right, &permuted).expect("renaming preserves axioms")
    }

    /// Same points seen as an `H`-`G` bibundle: `l' = r`, `r' = l`,
    /// `h ·' p = p·h⁻¹`, `p ·' g = g⁻¹·p`. No principality is required.
    pub fn swap_sides(&self) -> Bibundle {
        let n = self.n_points();
        let (g, h) = (&self.left, &self.right);
        let mut lact = vec![None; h.n_arrows() * n];
        let mut ract = vec![None; n * g.n_arrows()];
        for p in 0..n {
            for k in 0..h.n_arrows() {
                lact[k * n + p] = self.right_act(p, h.inv(k));
            }
            for a in 0..g.n_arrows() {
                ract[p * g.n_arrows() + a] = self.left_act(g.inv(a), p);
            }
        }
        Bibundle {
            left: h.clone(),
            right: g.clone(),
            l: self.r.clone(),
            r: self.l.clone(),
            lact,
            ract,
            labels: self.labels.clone(),
        }
    }

    /// Orbit partition of the points under both actions together.
    pub fn biorbits(&self) -> (Vec<usize>, usize) {
        let n = self.n_points();
        let mut uf = UnionFind::new(n);
        for p in 0..n {
            for &g in self.left.s_fiber(self.l[p]) {
                uf.union(p, self.left_act(g, p).expect("in domain"));
            }
            for &h in self.right.t_fiber(self.r[p]) {
                uf.union(p, self.right_act(p, h).expect("in domain"));
            }
        }
        uf.classes()
    }
}

pub fn identity_bibundle(g: &FiniteGroupoid) -> Bibundle {
    let n = g.n_arrows();
    let mut lact = Vec::new();
    let mut ract = Vec::new();
    for (a, b) in g.composable_pairs() {
        let ab = g.compose(a, b).expect("composable");
        lact.push((a, b, ab));
        ract.push((a, b, ab));
    }
    let raw = RawBibundle {
        points: n,
        l: (0..n).map(|a| g.tgt(a)).collect(),
        r: (0..n).map(|a| g.src(a)).collect(),
        lact,
        ract,
        labels: Some(g.labels().to_vec()),
    };
    validate_bibundle(g, g, &raw).expect("identity bibundle")
}

/// `P_φ = G₀ ×_{H₀} H₁` with points `(x,h)`, `φ₀(x) = t(h)`, ordered by `x`
/// then `h`; `l(x,h) = x`, `r(x,h) = s(h)`, `g·(x,h) = (t(g), φ₁(g)h)` and
/// `(x,h)·h' = (x, hh')`.
pub fn hom_bibundle(
    phi: &GroupoidHom,
    from: &FiniteGroupoid,
    to: &FiniteGroupoid,
) -> Result<Bibundle, BibundleError> {
    phi.validate(from, to)?;
    let mut points = Vec::new();
    let mut index = std::collections::HashMap::new();
    for x in 0..from.n_objects() {
        for &h in to.t_fiber(phi.obj_map[x]) {
            index.insert((x, h), points.len());
            points.push((x, h));
        }
    }
    let mut lact = Vec::new();
    let mut ract = Vec::new();
    for (p, &(x, h)) in points.iter().enumerate() {
        for &g in from.s_fiber(x) {
            let gh = to.compose(phi.arrow_map[g], h).expect("composable");
            lact.push((g, p, index[&(from.tgt(g), gh)]));
        }
        for &k in to.t_fiber(to.src(h)) {
            ract.push((p, k, index[&(x, to.compose(h, k).expect("composable"))]));
        }
    }
    let raw = RawBibundle {
        points: points.len(),
        l: points.iter().map(|&(x, _)| x).collect(),
        r: points.iter().map(|&(_, h)| to.src(h)).collect(),
        lact,
        ract,
        labels: Some(
            points
                .iter()
                .map(|&(x, h)| format!("({x},{})", to.label(h)))
                .collect(),
        ),
    };
    validate_bibundle(from, to, &raw)
}

/// Bibundle of `G → 1`: the points are the objects of `G`.
pub fn terminal_bibundle(g: &FiniteGroupoid) -> Bibundle {
    let t = terminal_groupoid();
    let phi = GroupoidHom {
        obj_map: vec![0; g.n_objects()],
        arrow_map: vec![0; g.n_arrows()],
    };
    hom_bibundle(&phi, g, &t).expect("terminal homomorphism")
}

/// Bibundle of `Δ: G → G × G`; points are pairs of arrows with equal target.
pub fn diagonal_bibundle(g: &FiniteGroupoid) -> Bibundle {
    let gg = product_groupoid(g, g);
    let (n0, n1) = (g.n_objects(), g.n_arrows());
    let phi = GroupoidHom {
        obj_map: (0..n0).map(|x| x * n0 + x).collect(),
        arrow_map: (0..n1).map(|a| a * n1 + a).collect(),
    };
    hom_bibundle(&phi, g, &gg).expect("diagonal homomorphism")
}

/// Bibundle of the anchor `G → Pair(G₀)`, `g ↦ (t(g), s(g))`.
pub fn anchor_bibundle(g: &FiniteGroupoid) -> Bibundle {
    let n = g.n_objects();
    let pair = pair_groupoid(n).expect("nonempty");
    let phi = GroupoidHom {
        obj_map: (0..n).collect(),
        arrow_map: (0..g.n_arrows()).map(|a| g.tgt(a) * n + g.src(a)).collect(),
    };
    hom_bibundle(&phi, g, &pair).expect("anchor homomorphism")
}

/// Bibundle of the point `1 → G` at `x`; the points are `t⁻¹(x)`.
pub fn point_bibundle(g: &FiniteGroupoid, x: usize) -> Bibundle {
    let phi = GroupoidHom {
        obj_map: vec![x],
        arrow_map: vec![g.unit(x)],
    };
    hom_bibundle(&phi, &terminal_groupoid(), g).expect("point homomorphism")
}

/// `C(𝒰) ← P → X` for the projection of a Čech groupoid onto the unit
/// groupoid of the covered space; biprincipal.
pub fn cech_bibundle(n_points: usize, cover: &[Vec<usize>]) -> Result<Bibundle, BibundleError> {
    let g = cech_groupoid(n_points, cover)?;
    let x = unit_groupoid(n_points).map_err(ConstructError::from)?;
    let mut objs = Vec::new();
    for u in cover {
        let mut u = u.clone();
        u.sort_unstable();
        u.dedup();
        objs.extend(u);
    }
    let phi = GroupoidHom {
        arrow_map: (0..g.n_arrows()).map(|a| x.unit(objs[g.src(a)])).collect(),
        obj_map: objs,
    };
    hom_bibundle(&phi, &g, &x)
}

/// `X ← P → *` for a gauge groupoid `(P×P)/K ⇉ X` and its structure group.
pub fn gauge_bibundle(gg: &GaugeGroupoid) -> Bibundle {
    let n = gg.orbit_of_point.len();
    let k = &gg.group;
    let g = &gg.groupoid;
    let mut lact = Vec::new();
    for pair in 0..n * n {
        let a = gg.class_of_pair[pair];
        let (p1, p2) = (pair / n, pair % n);
        // [p1,p2] acts on p = p2·k, only needs one representative per class
        if (0..pair).any(|q| gg.class_of_pair[q] == a) {
            continue;
        }
        for (kk, &p) in gg.right_action[p2].iter().enumerate() {
            lact.push((a, p, gg.right_action[p1][kk]));
        }
    }
    let mut ract = Vec::new();
    for p in 0..n {
        for h in 0..k.n_arrows() {
            ract.push((p, h, gg.right_action[p][h]));
        }
    }
    let raw = RawBibundle {
        points: n,
        l: gg.orbit_of_point.clone(),
        r: vec![0; n],
        lact,
        ract,
        labels: None,
    };
    validate_bibundle(g, k, &raw).expect("gauge bibundle")
}

/// Mirrors the three conditions of right principality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalityCertificate {
    pub l_surjective: bool,
    /// An object of `G` outside the image of `l`.
    pub l_missing: Option<usize>,
    /// The characteristic map `(p,h) ↦ (p, p·h)` is injective.
    pub free: bool,
    /// `(p, h, h')` with `h ≠ h'` and `p·h = p·h'`.
    pub free_witness: Option<(usize, usize, usize)>,
    /// The characteristic map hits every pair in a common `l`-fibre.
    pub transitive: bool,
    /// `(p, p')` with `l(p) = l(p')` and no `h` taking `p` to `p'`.
    pub transitive_witness: Option<(usize, usize)>,
}

impl PrincipalityCertificate {
    pub fn holds(&self) -> bool {
        self.l_surjective && self.free && self.transitive
    }
}

pub fn is_right_principal(p: &Bibundle) -> PrincipalityCertificate {
    let n = p.n_points();
    let g = p.left();
    let h = p.right();
    let mut hit = vec![false; g.n_objects()];
    for &x in &p.l {
        hit[x] = true;
    }
    let l_missing = hit.iter().position(|&b| !b);
    let mut free_witness = None;
    let mut transitive_witness = None;
    for a in 0..n {
        let mut seen: Vec<Option<usize>> = vec![None; n];
        for &k in h.t_fiber(p.r(a)) {
            let b = p.right_act(a, k).expect("in domain");
            if let Some(k0) = seen[b] {
                if free_witness.is_none() {
                    free_witness = Some((a, k0, k));
                }
            } else {
                seen[b] = Some(k);
            }
        }
        if transitive_witness.is_none() {
            if let Some(b) = (0..n).find(|&b| p.l(b) == p.l(a) && seen[b].is_none()) {
                transitive_witness = Some((a, b));
            }
        }
    }
    PrincipalityCertificate {
        l_surjective: l_missing.is_none(),
        l_missing,
        free: free_witness.is_none(),
        free_witness,
        transitive: transitive_witness.is_none(),
        transitive_witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiprincipalCertificate {
    pub right: PrincipalityCertificate,
    /// Right principality of the side-swapped bibundle.
    pub left: PrincipalityCertificate,
}

impl BiprincipalCertificate {
    pub fn holds(&self) -> bool {
        self.right.holds() && self.left.holds()
    }
}

pub fn is_biprincipal(p: &Bibundle) -> BiprincipalCertificate {
    BiprincipalCertificate {
        right: is_right_principal(p),
        left: is_right_principal(&p.swap_sides()),
    }
}

pub fn opposite_bibundle(p: &Bibundle) -> Result<Bibundle, BibundleError> {
    if !is_biprincipal(p).holds() {
        return Err(BibundleError::NotBiprincipal);
    }
    Ok(p.swap_sides())
}

/// `P ∘_H Q` with the bookkeeping that relates it to pairs `(p,q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub bibundle: Bibundle,
    /// Pairs with `r(p) = l(q)`, lexicographically ordered.
    pub pairs: Vec<(usize, usize)>,
    /// Composite point of each pair.
    pub class_of_pair: Vec<usize>,
    /// Minimal pair of each composite point.
    pub representative: Vec<usize>,
}

impl Composite {
    /// Composite point `[p,q]`, if `(p,q)` is a composable pair.
    pub fn class_of(&self, p: usize, q: usize) -> Option<usize> {
        self.pairs
            .binary_search(&(p, q))
            .ok()
            .map(|i| self.class_of_pair[i])
    }
}

/// Composition of bibundles. The left factor must be right principal.
pub fn compose_bibundles(p: &Bibundle, q: &Bibundle) -> Result<Composite, BibundleError> {
    if !is_right_principal(p).holds() {
        return Err(BibundleError::NotPrincipal);
    }
    compose_raw(p, q)
}

/// Composition without the principality requirement; the warning is set when
/// the left factor is not right principal.
pub fn compose_bibundles_permissive(
    p: &Bibundle,
    q: &Bibundle,
) -> Result<(Composite, Option<String>), BibundleError> {
    let warning = (!is_right_principal(p).holds())
        .then(|| "left factor is not right principal; quotient computed anyway".to_string());
    Ok((compose_raw(p, q)?, warning))
}

fn compose_raw(p: &Bibundle, q: &Bibundle) -> Result<Composite, BibundleError> {
    if p.right() != q.left() {
        return Err(BibundleError::NotComposable);
    }
    let h = p.right();
    let mut pairs = Vec::new();
    for a in 0..p.n_points() {
        for b in 0..q.n_points() {
            if p.r(a) == q.l(b) {
                pairs.push((a, b));
            }
        }
    }
    let index = |a: usize, b: usize| pairs.binary_search(&(a, b)).expect("composable pair");
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &k in h.t_fiber(p.r(a)) {
            let a2 = p.right_act(a, k).expect("in domain");
            let b2 = q.left_act(h.inv(k), b).expect("in domain");
            uf.union(i, index(a2, b2));
        }
    }
    let (class_of_pair, n) = uf.classes();
    let mut representative = vec![usize::MAX; n];
    for (i, &c) in class_of_pair.iter().enumerate() {
        if representative[c] == usize::MAX {
            representative[c] = i;
        }
    }
    let mut raw = RawBibundle {
        points: n,
        l: vec![0; n],
        r: vec![0; n],
        lact: Vec::new(),
        ract: Vec::new(),
        labels: Some(
            representative
                .iter()
                .map(|&i| format!("[{},{}]", p.label(pairs[i].0), q.label(pairs[i].1)))
                .collect(),
        ),
    };
    // every member of a class contributes, so ill-defined actions surface
    // as conflicts during validation
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let c = class_of_pair[i];
        raw.l[c] = p.l(a);
        raw.r[c] = q.r(b);
        for &g in p.left().s_fiber(p.l(a)) {
            let a2 = p.left_act(g, a).expect("in domain");
            raw.lact.push((g, c, class_of_pair[index(a2, b)]));
        }
        for &k in q.right().t_fiber(q.r(b)) {
            let b2 = q.right_act(b, k).expect("in domain");
            raw.ract.push((c, k, class_of_pair[index(a, b2)]));
        }
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let c = class_of_pair[i];
        if raw.l[c] != p.l(a) || raw.r[c] != q.r(b) {
            return Err(BibundleError::AnchorViolation {
                side: ActionSide::Left,
                arrow: 0,
                point: c,
            });
        }
    }
    let bibundle = validate_bibundle(p.left(), q.right(), &raw)?;
    Ok(Composite {
        bibundle,
        pairs,
        class_of_pair,
        representative,
    })
}

/// Checks that `map` (point `p` of `a` to point `map[p]` of `b`) is a
/// bijection commuting with anchors and both actions; returns the first
/// failing point.
pub fn check_biequivariant(a: &Bibundle, b: &Bibundle, map: &[usize]) -> Result<(), usize> {
    let n = a.n_points();
    if b.n_points() != n || map.len() != n || a.left() != b.left() || a.right() != b.right() {
        return Err(0);
    }
    let mut used = vec![false; n];
    for (p, &q) in map.iter().enumerate() {
        if q >= n || used[q] {
            return Err(p);
        }
        used[q] = true;
        if a.l(p) != b.l(q) || a.r(p) != b.r(q) {
            return Err(p);
        }
        for &g in a.left().s_fiber(a.l(p)) {
            if a.left_act(g, p).map(|x| map[x]) != b.left_act(g, q) {
                return Err(p);
            }
        }
        for &h in a.right().t_fiber(a.r(p)) {
            if a.right_act(p, h).map(|x| map[x]) != b.right_act(q, h) {
                return Err(p);
            }
        }
    }
    Ok(())
}

/// Exhaustive search for a biequivariant bijection `P → Q`. Biequivariant
/// maps are determined on each bi-orbit by the image of one point, so the
/// search branches once per bi-orbit over signature-compatible candidates.
pub fn find_biequivariant_iso(
    a: &Bibundle,
    b: &Bibundle,
) -> Result<Option<Vec<usize>>, BibundleError> {
    if a.left() != b.left() || a.right() != b.right() {
        return Err(BibundleError::TypeMismatch);
    }
    let n = a.n_points();
    if b.n_points() != n {
        return Ok(None);
    }
    let sig_a = signatures(a);
    let sig_b = signatures(b);
    let (orbit_a, n_orbits) = a.biorbits();
    let mut reps = vec![usize::MAX; n_orbits];
    for p in (0..n).rev() {
        reps[orbit_a[p]] = p;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(a, b, &sig_a, &sig_b, &reps, 0, &mut map, &mut used) {
        debug_assert!(check_biequivariant(a, b, &map).is_ok());
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

type Signature = (usize, usize, usize, usize, usize);

/// `(l, r, bi-orbit size, left-stabiliser size, right-stabiliser size)`.
fn signatures(p: &Bibundle) -> Vec<Signature> {
    let (orbit, n) = p.biorbits();
    let mut size = vec![0; n];
    for &o in &orbit {
        size[o] += 1;
    }
    (0..p.n_points())
        .map(|x| {
            let ls = p
                .left()
                .s_fiber(p.l(x))
                .iter()
                .filter(|&&g| p.left_act(g, x) == Some(x))
                .count();
            let rs = p
                .right()
                .t_fiber(p.r(x))
                .iter()
                .filter(|&&h| p.right_act(x, h) == Some(x))
                .count();
            (p.l(x), p.r(x), size[orbit[x]], ls, rs)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Bibundle,
    b: &Bibundle,
    sig_a: &[Signature],
    sig_b: &[Signature],
    reps: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == reps.len() {
        return true;
    }
    let p = reps[depth];
    for q in 0..b.n_points() {
        if used[q] || sig_a[p] != sig_b[q] {
            continue;
        }
        let mut assigned = Vec::new();
        if propagate(a, b, p, q, map, used, &mut assigned)
            && search(a, b, sig_a, sig_b, reps, depth + 1, map, used)
        {
            return true;
        }
        for x in assigned {
            used[map[x]] = false;
            map[x] = usize::MAX;
        }
    }
    false
}

/// Extends `p ↦ q` over the bi-orbit of `p`; records new assignments so the
/// caller can undo them.
fn propagate(
    a: &Bibundle,
    b: &Bibundle,
    p: usize,
    q: usize,
    map: &mut [usize],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    let mut queue = VecDeque::new();
    let mut assign = |x: usize, y: usize, map: &mut [usize], queue: &mut VecDeque<usize>| {
        if map[x] != usize::MAX {
            return map[x] == y;
        }
        if used[y] || a.l(x) != b.l(y) || a.r(x) != b.r(y) {
            return false;
        }
        map[x] = y;
        used[y] = true;
        assigned.push(x);
        queue.push_back(x);
        true
    };
    if !assign(p, q, map, &mut queue) {
        return false;
    }
    while let Some(x) = queue.pop_front() {
        let y = map[x];
        for &g in a.left().s_fiber(a.l(x)) {
            let (x2, y2) = (a.left_act(g, x), b.left_act(g, y));
            match (x2, y2) {
                (Some(x2), Some(y2)) => {
                    if !assign(x2, y2, map, &mut queue) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        for &h in a.right().t_fiber(a.r(x)) {
            match (a.right_act(x, h), b.right_act(y, h)) {
                (Some(x2), Some(y2)) => {
                    if !assign(x2, y2, map, &mut queue) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{
        cech_groupoid, cyclic_group, gauge_groupoid, group_groupoid,
        symmetric3_table, unit_groupoid,
    };

    #[test]
    fn identity_bibundles() {
        assert_eq!(identity_bibundle(&terminal_groupoid()).n_points(), 1);
        assert_eq!(identity_bibundle(&cyclic_group(2).unwrap()).n_points(), 2);
        let p3 = identity_bibundle(&pair_groupoid(3).unwrap());
        assert_eq!(p3.n_points(), 9);
        assert!(is_biprincipal(&p3).holds());
    }

    #[test]
    fn commutation_failure_is_reported() {
        let z2 = cyclic_group(2).unwrap();
        let z3 = cyclic_group(3).unwrap();
        // left ℤ₂ swaps {0,1} and fixes 2; right ℤ₃ cycles 0→1→2
        // and the two actions do not commute
        let raw = RawBibundle {
            points: 3,
            l: vec![0; 3],
            r: vec![0; 3],
            lact: vec![(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 0, 1), (1, 1, 0), (1, 2, 2)],
            ract: (0..3)
                .flat_map(|p| (0..3).map(move |k| (p, k, (p + k) % 3)))
                .collect(),
            labels: None,
        };
        assert!(matches!(
            validate_bibundle(&z2, &z3, &raw),
            Err(BibundleError::CommutationFailure { .. })
        ));
    }

    #[test]
    fn hom_bibundles() {
        let p2 = pair_groupoid(2).unwrap();
        let id = hom_bibundle(&GroupoidHom::identity(&p2), &p2, &p2).unwrap();
        assert!(find_biequivariant_iso(&id, &identity_bibundle(&p2))
            .unwrap()
            .is_some());
        let t = terminal_bibundle(&p2);
        assert_eq!(t.n_points(), 2);
        assert!(is_biprincipal(&t).holds());
        let x = point_bibundle(&p2, 1);
        assert_eq!(x.n_points(), 2);
        assert!(x.labels().iter().all(|l| l.starts_with("(0,(1,")));
    }

    #[test]
    fn special_hom_bibundles() {
        let t = terminal_groupoid();
        assert_eq!(diagonal_bibundle(&t).n_points(), 1);
        assert_eq!(terminal_bibundle(&t).n_points(), 1);
        assert_eq!(anchor_bibundle(&t).n_points(), 1);
        assert_eq!(diagonal_bibundle(&cyclic_group(2).unwrap()).n_points(), 4);
        // the anchor of pair(2) is an isomorphism, so its bibundle is the
        // identity bibundle of pair(2) up to renaming
        let p2 = pair_groupoid(2).unwrap();
        let anc = anchor_bibundle(&p2);
        assert_eq!(anc.n_points(), 4);
        assert!(find_biequivariant_iso(&anc, &identity_bibundle(&p2))
            .unwrap()
            .is_some());
    }

    #[test]
    fn principality_witnesses() {
        let p3 = pair_groupoid(3).unwrap();
        let c = is_right_principal(&terminal_bibundle(&p3));
        assert!(c.holds());
        // * ← K → * with the right action of the trivial group
        let s3 = group_groupoid(&symmetric3_table()).unwrap();
        let raw = RawBibundle {
            points: 6,
            l: vec![0; 6],
            r: vec![0; 6],
            lact: (0..6)
                .flat_map(|g| (0..6).map(move |p| (g, p, symmetric3_table()[g][p])))
                .collect(),
            ract: (0..6).map(|p| (p, 0, p)).collect(),
            labels: None,
        };
        let k = validate_bibundle(&s3, &terminal_groupoid(), &raw).unwrap();
        let c = is_right_principal(&k);
        assert!(c.free && c.l_surjective && !c.transitive);
        assert_eq!(c.transitive_witness, Some((0, 1)));
    }

    #[test]
    fn non_essentially_surjective_inclusion() {
        let u2 = unit_groupoid(2).unwrap();
        let t = terminal_groupoid();
        // 1 → ℂ² hitting object 0 only
        let phi = GroupoidHom {
            obj_map: vec![0],
            arrow_map: vec![0],
        };
        let p = hom_bibundle(&phi, &t, &u2).unwrap();
        let c = is_biprincipal(&p);
        assert!(c.right.holds());
        assert!(!c.left.holds());
        assert_eq!(opposite_bibundle(&p), Err(BibundleError::NotBiprincipal));
    }

    #[test]
    fn pair_groupoid_morita_composition() {
        let p2 = pair_groupoid(2).unwrap();
        let x = terminal_bibundle(&p2);
        let xo = opposite_bibundle(&x).unwrap();
        let c = compose_bibundles(&x, &xo).unwrap();
        assert_eq!(c.bibundle.n_points(), 4);
        assert!(find_biequivariant_iso(&c.bibundle, &identity_bibundle(&p2))
            .unwrap()
            .is_some());
        let d = compose_bibundles(&xo, &x).unwrap();
        assert_eq!(d.bibundle.n_points(), 1);
    }

    #[test]
    fn cech_composition() {
        let g = cech_groupoid(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        // projection C(𝒰) → X as a homomorphism to the unit groupoid on X
        let x = unit_groupoid(3).unwrap();
        let objs: Vec<usize> = vec![0, 1, 1, 2];
        let phi = GroupoidHom {
            obj_map: objs.clone(),
            arrow_map: (0..g.n_arrows())
                .map(|a| objs[g.src(a)])
                .collect(),
        };
        let p = hom_bibundle(&phi, &g, &x).unwrap();
        let po = opposite_bibundle(&p).unwrap();
        let c = compose_bibundles(&p, &po).unwrap();
        assert_eq!(c.bibundle.n_points(), 6);
        assert!(find_biequivariant_iso(&c.bibundle, &identity_bibundle(&g))
            .unwrap()
            .is_some());
        assert!(is_right_principal(&c.bibundle).holds());
    }

    #[test]
    fn unitor_and_opposites() {
        let z2 = cyclic_group(2).unwrap();
        let act = vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]];
        let gg = gauge_groupoid(&z2, 4, &act, None).unwrap();
        let p = gauge_bibundle(&gg);
        assert!(is_biprincipal(&p).holds());
        let c = compose_bibundles(&p, &identity_bibundle(&z2)).unwrap();
        assert!(find_biequivariant_iso(&c.bibundle, &p).unwrap().is_some());
        let po = opposite_bibundle(&p).unwrap();
        assert!(is_biprincipal(&po).holds());
        let id = identity_bibundle(&z2);
        let ido = opposite_bibundle(&id).unwrap();
        assert!(find_biequivariant_iso(&ido, &id).unwrap().is_some());
    }

    #[test]
    fn non_isomorphic_right_sets() {
        // right ℤ₂-sets over a point: free orbit vs two fixed points
        let z2 = cyclic_group(2).unwrap();
        let t = terminal_groupoid();
        let mk = |ract: Vec<(usize, usize, usize)>| {
            let raw = RawBibundle {
                points: 2,
                l: vec![0; 2],
                r: vec![0; 2],
                lact: vec![(0, 0, 0), (0, 1, 1)],
                ract,
                labels: None,
            };
            validate_bibundle(&t, &z2, &raw).unwrap()
        };
        let free = mk(vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]);
        let fixed = mk(vec![(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)]);
        assert_eq!(find_biequivariant_iso(&free, &fixed).unwrap(), None);
        assert_eq!(
            find_biequivariant_iso(&free, &free).unwrap(),
            Some(vec![0, 1])
        );
        let perm = free.permute_points(&[1, 0]);
        assert!(find_biequivariant_iso(&free, &perm).unwrap().is_some());
    }

    #[test]
    fn permissive_composition_warns() {
        let z2 = cyclic_group(2).unwrap();
        let t = terminal_groupoid();
        // one point with ℤ₂ acting trivially on the right: not free
        let raw = RawBibundle {
            points: 1,
            l: vec![0],
            r: vec![0],
            lact: vec![(0, 0, 0)],
            ract: vec![(0, 0, 0), (0, 1, 0)],
            labels: None,
        };
        let p = validate_bibundle(&t, &z2, &raw).unwrap();
        let q = terminal_bibundle(&z2);
        assert_eq!(compose_bibundles(&p, &q), Err(BibundleError::NotPrincipal));
        let (c, w) = compose_bibundles_permissive(&p, &q).unwrap();
        assert!(w.is_some());
        assert_eq!(c.bibundle.n_points(), 1);
    }
}
