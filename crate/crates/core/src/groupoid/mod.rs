//! Finite groupoids `G₁ ⇉ G₀` with dense integer indices.
//!
//! Composition follows the convention that `gh` means "first `h`, then `g`"
//! and is defined exactly when `s(g) = t(h)`.

mod constructors;
mod haar;

pub use constructors::*;
pub use haar::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("groupoid has no objects")]
    Empty,
    #[error("{what} index {index} out of range")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("table length mismatch for {0}")]
    LengthMismatch(&'static str),
    #[error("composite of {0} and {1} given but s({0}) != t({1})")]
    SourceTargetMismatch(usize, usize),
    #[error("composite of {0} and {1} has wrong source or target")]
    CompositeEndpoints(usize, usize),
    #[error("conflicting composites for ({0}, {1})")]
    ConflictingComposite(usize, usize),
    #[error("composable pair ({0}, {1}) has no composite")]
    MissingComposite(usize, usize),
    #[error("({0}·{1})·{2} != {0}·({1}·{2})")]
    NonAssociative(usize, usize, usize),
    #[error("unit of object {0} violates the unit laws")]
    BadUnit(usize),
    #[error("inverse of arrow {0} violates the inverse laws")]
    BadInverse(usize),
}

/// Unvalidated groupoid tables, as read from input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGroupoid {
    pub objects: usize,
    /// `(src, tgt)` per arrow.
    pub arrows: Vec<(usize, usize)>,
    /// `[g, h, gh]` for every composable pair.
    pub compose: Vec<[usize; 3]>,
    pub inv: Vec<usize>,
    pub unit: Vec<usize>,
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroupoid {
    n_objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    inv: Vec<usize>,
    unit: Vec<usize>,
    compose: Vec<Option<usize>>,
    labels: Vec<String>,
    s_fibers: Vec<Vec<usize>>,
    t_fibers: Vec<Vec<usize>>,
}

pub fn validate_groupoid(raw: &RawGroupoid) -> Result<FiniteGroupoid, GroupoidError> {
    use GroupoidError::*;
    let n0 = raw.objects;
    let n1 = raw.arrows.len();
    if n0 == 0 {
        return Err(Empty);
    }
    if raw.inv.len() != n1 {
        return Err(LengthMismatch("inv"));
    }
    if raw.unit.len() != n0 {
        return Err(LengthMismatch("unit"));
    }
    if let Some(l) = &raw.labels {
        if l.len() != n1 {
            return Err(LengthMismatch("labels"));
        }
    }
    for &(s, t) in &raw.arrows {
        for x in [s, t] {
            if x >= n0 {
                return Err(IndexOutOfRange {
                    what: "object",
                    index: x,
                });
            }
        }
    }
    let check_arrow = |g: usize| {
        if g >= n1 {
            Err(IndexOutOfRange {
                what: "arrow",
                index: g,
            })
        } else {
            Ok(())
        }
    };
    for &g in raw.inv.iter().chain(raw.unit.iter()) {
        check_arrow(g)?;
    }
    let src: Vec<usize> = raw.arrows.iter().map(|a| a.0).collect();
    let tgt: Vec<usize> = raw.arrows.iter().map(|a| a.1).collect();

    let mut compose = vec![None; n1 * n1];
    for &[g, h, k] in &raw.compose {
        check_arrow(g)?;
        check_arrow(h)?;
        check_arrow(k)?;
        if src[g] != tgt[h] {
            return Err(SourceTargetMismatch(g, h));
        }
        if src[k] != src[h] || tgt[k] != tgt[g] {
            return Err(CompositeEndpoints(g, h));
        }
        match compose[g * n1 + h] {
            Some(prev) if prev != k => return Err(ConflictingComposite(g, h)),
            _ => compose[g * n1 + h] = Some(k),
        }
    }
    for g in 0..n1 {
        for h in 0..n1 {
            if src[g] == tgt[h] && compose[g * n1 + h].is_none() {
                return Err(MissingComposite(g, h));
            }
        }
    }
    let comp = |g: usize, h: usize| compose[g * n1 + h].expect("composable");

    for x in 0..n0 {
        let e = raw.unit[x];
        if src[e] != x || tgt[e] != x {
            return Err(BadUnit(x));
        }
    }
    for g in 0..n1 {
        if comp(raw.unit[tgt[g]], g) != g || comp(g, raw.unit[src[g]]) != g {
            return Err(BadUnit(tgt[g]));
        }
    }
    for g in 0..n1 {
        let gi = raw.inv[g];
        if src[gi] != tgt[g]
            || tgt[gi] != src[g]
            || raw.inv[gi] != g
            || comp(g, gi) != raw.unit[tgt[g]]
            || comp(gi, g) != raw.unit[src[g]]
        {
            return Err(BadInverse(g));
        }
    }

    let mut s_fibers = vec![Vec::new(); n0];
    let mut t_fibers = vec![Vec::new(); n0];
    for g in 0..n1 {
        s_fibers[src[g]].push(g);
        t_fibers[tgt[g]].push(g);
    }
    // (gh)k = g(hk) over all composable triples
    for h in 0..n1 {
        for &g in &s_fibers[tgt[h]] {
            let gh = comp(g, h);
            for &k in &t_fibers[src[h]] {
                if comp(gh, k) != comp(g, comp(h, k)) {
                    return Err(NonAssociative(g, h, k));
                }
            }
        }
    }

    let labels = raw
        .labels
        .clone()
        .unwrap_or_else(|| (0..n1).map(|g| g.to_string()).collect());
    Ok(FiniteGroupoid {
        n_objects: n0,
        src,
        tgt,
        inv: raw.inv.clone(),
        unit: raw.unit.clone(),
        compose,
        labels,
        s_fibers,
        t_fibers,
    })
}

impl FiniteGroupoid {
    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.tgt[g]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.src[g]] == g
    }

    /// `gh`, defined iff `s(g) = t(h)`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.n_arrows() + h]
    }

    /// Arrows with source `x`.
    pub fn s_fiber(&self, x: usize) -> &[usize] {
        &self.s_fibers[x]
    }

    /// Arrows with target `x`.
    pub fn t_fiber(&self, x: usize) -> &[usize] {
        &self.t_fibers[x]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_arrows())
            .flat_map(move |h| self.s_fibers[self.tgt[h]].iter().map(move |&g| (g, h)))
    }

    /// The raw tables of this groupoid in canonical order.
    pub fn to_raw(&self) -> RawGroupoid {
        let n1 = self.n_arrows();
        let mut compose = Vec::new();
        for g in 0..n1 {
            for h in 0..n1 {
                if let Some(k) = self.compose(g, h) {
                    compose.push([g, h, k]);
                }
            }
        }
        RawGroupoid {
            objects: self.n_objects,
            arrows: (0..n1).map(|g| (self.src[g], self.tgt[g])).collect(),
            compose,
            inv: self.inv.clone(),
            unit: self.unit.clone(),
            labels: Some(self.labels.clone()),
        }
    }

    /// Renumbers objects and arrows: object `x` becomes `obj_perm[x]`,
    /// arrow `g` becomes `arrow_perm[g]`.
    pub fn relabel(&self, obj_perm: &[usize], arrow_perm: &[usize]) -> FiniteGroupoid {
        let n1 = self.n_arrows();
        let mut arrows = vec![(0, 0); n1];
        let mut labels = vec![String::new(); n1];
        let mut inv = vec![0; n1];
        for g in 0..n1 {
            let ng = arrow_perm[g];
            arrows[ng] = (obj_perm[self.src[g]], obj_perm[self.tgt[g]]);
            labels[ng] = self.labels[g].clone();
            inv[ng] = arrow_perm[self.inv[g]];
        }
        let mut unit = vec![0; self.n_objects];
        for x in 0..self.n_objects {
            unit[obj_perm[x]] = arrow_perm[self.unit[x]];
        }
        let compose = self
            .composable_pairs()
            .map(|(g, h)| {
                [
                    arrow_perm[g],
                    arrow_perm[h],
                    arrow_perm[self.compose(g, h).expect("composable")],
                ]
            })
            .collect();
        let raw = RawGroupoid {
            objects: self.n_objects,
            arrows,
            compose,
            inv,
            unit,
            labels: Some(labels),
        };
        validate_groupoid(&raw).expect("relabelling preserves the axioms")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("map sizes do not match the groupoids")]
    LengthMismatch,
    #[error("index out of range in homomorphism tables")]
    IndexOutOfRange,
    #[error("arrow {0}: image does not match the image of its endpoints")]
    Endpoints(usize),
    #[error("object {0}: unit is not sent to a unit")]
    Unit(usize),
    #[error("composable pair ({0}, {1}) is not preserved")]
    Composition(usize, usize),
    #[error("arrow {0}: inverse is not preserved")]
    Inverse(usize),
}

/// A homomorphism `φ = (φ₀, φ₁): G → H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidHom {
    pub obj_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidHom {
    pub fn validate(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<(), HomError> {
        if self.obj_map.len() != from.n_objects() || self.arrow_map.len() != from.n_arrows() {
            return Err(HomError::LengthMismatch);
        }
        if self.obj_map.iter().any(|&y| y >= to.n_objects())
            || self.arrow_map.iter().any(|&h| h >= to.n_arrows())
        {
            return Err(HomError::IndexOutOfRange);
        }
        let (f0, f1) = (&self.obj_map, &self.arrow_map);
        for g in 0..from.n_arrows() {
            if to.src(f1[g]) != f0[from.src(g)] || to.tgt(f1[g]) != f0[from.tgt(g)] {
                return Err(HomError::Endpoints(g));
            }
            if f1[from.inv(g)] != to.inv(f1[g]) {
                return Err(HomError::Inverse(g));
            }
        }
        for x in 0..from.n_objects() {
            if f1[from.unit(x)] != to.unit(f0[x]) {
                return Err(HomError::Unit(x));
            }
        }
        for (g, h) in from.composable_pairs() {
            let gh = from.compose(g, h).expect("composable");
            if to.compose(f1[g], f1[h]) != Some(f1[gh]) {
                return Err(HomError::Composition(g, h));
            }
        }
        Ok(())
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidHom {
            obj_map: (0..g.n_objects()).collect(),
            arrow_map: (0..g.n_arrows()).collect(),
        }
    }
}

/// Orbit partition of the objects and the isotropy group at each object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub orbit_of: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    pub isotropy: Vec<Vec<usize>>,
}

pub fn orbits_and_isotropy(g: &FiniteGroupoid) -> OrbitData {
    let mut uf = crate::union_find::UnionFind::new(g.n_objects());
    for a in 0..g.n_arrows() {
        uf.union(g.src(a), g.tgt(a));
    }
    let (orbit_of, n) = uf.classes();
    let mut orbits = vec![Vec::new(); n];
    for (x, &o) in orbit_of.iter().enumerate() {
        orbits[o].push(x);
    }
    let isotropy = (0..g.n_objects())
        .map(|x| {
            g.s_fiber(x)
                .iter()
                .copied()
                .filter(|&a| g.tgt(a) == x)
                .collect()
        })
        .collect();
    OrbitData {
        orbit_of,
        orbits,
        isotropy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_axioms(g: &FiniteGroupoid) {
        let n = g.n_arrows();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(g.compose(a, b).is_some(), g.src(a) == g.tgt(b));
                for c in 0..n {
                    if let (Some(ab), Some(bc)) = (g.compose(a, b), g.compose(b, c)) {
                        assert_eq!(g.compose(ab, c), g.compose(a, bc));
                    }
                }
            }
            assert_eq!(g.inv(g.inv(a)), a);
            assert_eq!(g.src(g.inv(a)), g.tgt(a));
        }
    }

    #[test]
    fn terminal_is_valid() {
        let raw = RawGroupoid {
            objects: 1,
            arrows: vec![(0, 0)],
            compose: vec![[0, 0, 0]],
            inv: vec![0],
            unit: vec![0],
            labels: None,
        };
        let g = validate_groupoid(&raw).unwrap();
        assert_eq!(g.n_arrows(), 1);
        brute_force_axioms(&g);
    }

    fn pair2_raw() -> RawGroupoid {
        // arrows (x,y) at index 2x+y with t = x, s = y
        let arrows = vec![(0, 0), (1, 0), (0, 1), (1, 1)];
        let mut compose = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    compose.push([2 * x + y, 2 * y + z, 2 * x + z]);
                }
            }
        }
        RawGroupoid {
            objects: 2,
            arrows,
            compose,
            inv: vec![0, 2, 1, 3],
            unit: vec![0, 3],
            labels: None,
        }
    }

    #[test]
    fn pair_groupoid_tables_validate() {
        let g = validate_groupoid(&pair2_raw()).unwrap();
        assert_eq!(g.n_arrows(), 4);
        assert_eq!(g.composable_pairs().count(), 8);
        brute_force_axioms(&g);
    }

    #[test]
    fn non_composable_composite_is_rejected() {
        let mut raw = pair2_raw();
        // (0,1)·(0,1): s((0,1)) = 1 but t((0,1)) = 0
        raw.compose.push([1, 1, 1]);
        assert_eq!(
            validate_groupoid(&raw),
            Err(GroupoidError::SourceTargetMismatch(1, 1))
        );
    }

    #[test]
    fn broken_tables_are_rejected() {
        let mut raw = pair2_raw();
        raw.inv = vec![0, 1, 2, 3];
        assert_eq!(validate_groupoid(&raw), Err(GroupoidError::BadInverse(1)));

        let mut raw = pair2_raw();
        raw.compose.retain(|c| c != &[1, 2, 0]);
        assert_eq!(
            validate_groupoid(&raw),
            Err(GroupoidError::MissingComposite(1, 2))
        );

        let raw = RawGroupoid {
            objects: 0,
            arrows: vec![],
            compose: vec![],
            inv: vec![],
            unit: vec![],
            labels: None,
        };
        assert_eq!(validate_groupoid(&raw), Err(GroupoidError::Empty));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a loop of order 5 in which every element is its own inverse;
        // units and inverses are fine, associativity is not
        let table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let mut compose = Vec::new();
        for g in 0..5 {
            for h in 0..5 {
                compose.push([g, h, table[g][h]]);
            }
        }
        let raw = RawGroupoid {
            objects: 1,
            arrows: vec![(0, 0); 5],
            compose,
            inv: vec![0, 1, 2, 3, 4],
            unit: vec![0],
            labels: None,
        };
        assert!(matches!(
            validate_groupoid(&raw),
            Err(GroupoidError::NonAssociative(..))
        ));
    }
}
