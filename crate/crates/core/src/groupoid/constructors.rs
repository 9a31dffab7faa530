//! Example groupoids. Every constructor fixes a deterministic arrow order,
//! documented per function, and runs the result through
//! [`validate_groupoid`].

use thiserror::Error;

use super::{validate_groupoid, FiniteGroupoid, GroupoidError, GroupoidHom, RawGroupoid};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("not a cover: point {0} is not covered")]
    NotACover(usize),
    #[error("empty cover")]
    EmptyCover,
    #[error("action is not free: point {point} fixed by non-identity {element}")]
    NotFree { point: usize, element: usize },
    #[error("not principal: {0}")]
    NotPrincipal(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// Assembles tables from closures and validates them.
fn build(
    objects: usize,
    arrows: Vec<(usize, usize, String)>,
    compose: impl Fn(usize, usize) -> usize,
    inv: impl Fn(usize) -> usize,
    unit: impl Fn(usize) -> usize,
) -> Result<FiniteGroupoid, GroupoidError> {
    let n1 = arrows.len();
    let mut table = Vec::new();
    for g in 0..n1 {
        for h in 0..n1 {
            if arrows[g].0 == arrows[h].1 {
                table.push([g, h, compose(g, h)]);
            }
        }
    }
    let raw = RawGroupoid {
        objects,
        arrows: arrows.iter().map(|a| (a.0, a.1)).collect(),
        compose: table,
        inv: (0..n1).map(inv).collect(),
        unit: (0..objects).map(unit).collect(),
        labels: Some(arrows.into_iter().map(|a| a.2).collect()),
    };
    validate_groupoid(&raw)
}

/// One object, one arrow.
pub fn terminal_groupoid() -> FiniteGroupoid {
    pair_groupoid(1).expect("terminal groupoid")
}

/// `n` objects and only their units; arrow `x` is `1_x`.
pub fn unit_groupoid(n: usize) -> Result<FiniteGroupoid, GroupoidError> {
    build(
        n,
        (0..n).map(|x| (x, x, format!("1_{x}"))).collect(),
        |g, _| g,
        |g| g,
        |x| x,
    )
}

/// Arrows `(x,y)` at index `x·n + y`, with `t = x`, `s = y` and
/// `(x,y)(y,z) = (x,z)`. Labels are `"(x,y)"` with 0-based points.
pub fn pair_groupoid(n: usize) -> Result<FiniteGroupoid, GroupoidError> {
    let arrows = (0..n * n)
        .map(|a| (a % n, a / n, format!("({},{})", a / n, a % n)))
        .collect();
    build(
        n,
        arrows,
        |g, h| (g / n) * n + h % n,
        |g| (g % n) * n + g / n,
        |x| x * n + x,
    )
}

/// Checks a Cayley table and returns the identity element.
fn check_group_table(table: &[Vec<usize>]) -> Result<usize, ConstructError> {
    let n = table.len();
    let bad = |s: &str| Err(ConstructError::NotAGroup(s.to_string()));
    if n == 0 {
        return bad("empty table");
    }
    if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return bad("table is not square over its index set");
    }
    let e = match (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g)) {
        Some(e) => e,
        None => return bad("no identity element"),
    };
    for g in 0..n {
        if !(0..n).any(|h| table[g][h] == e && table[h][g] == e) {
            return Err(ConstructError::NotAGroup(format!("element {g} has no inverse")));
        }
        for h in 0..n {
            for k in 0..n {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    return Err(ConstructError::NotAGroup(format!(
                        "({g}{h}){k} != {g}({h}{k})"
                    )));
                }
            }
        }
    }
    Ok(e)
}

/// A group as a one-object groupoid; arrow `g` is table row `g`.
pub fn group_groupoid(table: &[Vec<usize>]) -> Result<FiniteGroupoid, ConstructError> {
    let e = check_group_table(table)?;
    let n = table.len();
    let inv: Vec<usize> = (0..n)
        .map(|g| (0..n).find(|&h| table[g][h] == e).expect("inverse"))
        .collect();
    Ok(build(
        1,
        (0..n).map(|g| (0, 0, format!("g{g}"))).collect(),
        |g, h| table[g][h],
        |g| inv[g],
        |_| e,
    )?)
}

pub fn cyclic_group_table(m: usize) -> Vec<Vec<usize>> {
    (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect()
}

/// `ℤ_m` with element `k` at index `k`.
pub fn cyclic_group(m: usize) -> Result<FiniteGroupoid, ConstructError> {
    group_groupoid(&cyclic_group_table(m))
}

/// Cayley table of `S₃`; permutations of `{0,1,2}` in lexicographic order,
/// product `(στ)(i) = σ(τ(i))`.
pub fn symmetric3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
    perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| idx([s[t[0]], s[t[1]], s[t[2]]]))
                .collect()
        })
        .collect()
}

fn require_group(group: &FiniteGroupoid) -> Result<(), ConstructError> {
    if group.n_objects() != 1 {
        return Err(ConstructError::NotAGroup(
            "expected a one-object groupoid".into(),
        ));
    }
    Ok(())
}

/// Action groupoid `G ⋉ X` for a left action `act[g][x] = g·x`.
/// Arrow `(g,x)` sits at index `g·|X| + x` with `s = x`, `t = g·x`.
pub fn action_groupoid(
    group: &FiniteGroupoid,
    n_points: usize,
    act: &[Vec<usize>],
) -> Result<FiniteGroupoid, ConstructError> {
    require_group(group)?;
    let ng = group.n_arrows();
    if act.len() != ng || act.iter().any(|r| r.len() != n_points || r.iter().any(|&y| y >= n_points))
    {
        return Err(ConstructError::NotAnAction("table shape".into()));
    }
    let e = group.unit(0);
    for x in 0..n_points {
        if act[e][x] != x {
            return Err(ConstructError::NotAnAction(format!("identity moves {x}")));
        }
        for g in 0..ng {
            for h in 0..ng {
                let gh = group.compose(g, h).expect("group");
                if act[gh][x] != act[g][act[h][x]] {
                    return Err(ConstructError::NotAnAction(format!(
                        "({g}{h})·{x} != {g}·({h}·{x})"
                    )));
                }
            }
        }
    }
    let n = n_points;
    let arrows = (0..ng * n)
        .map(|a| {
            let (g, x) = (a / n, a % n);
            (x, act[g][x], format!("({},{})", group.label(g), x))
        })
        .collect();
    Ok(build(
        n,
        arrows,
        |a, b| {
            let (g, _) = (a / n, a % n);
            let (h, x) = (b / n, b % n);
            group.compose(g, h).expect("group") * n + x
        },
        |a| {
            let (g, x) = (a / n, a % n);
            group.inv(g) * n + act[g][x]
        },
        |x| e * n + x,
    )?)
}

/// Čech groupoid of a cover `{U_i}` of `{0..n_points}`.
///
/// Objects are pairs `(i,x)` with `x ∈ U_i`, ordered by `i` then `x`; arrows
/// are triples `(i,j,x)` with `x ∈ U_i ∩ U_j`, ordered by `i`, `j`, `x`, with
/// `t = (i,x)`, `s = (j,x)` and `(i,j,x)(j,k,x) = (i,k,x)`.
pub fn cech_groupoid(n_points: usize, cover: &[Vec<usize>]) -> Result<FiniteGroupoid, ConstructError> {
    if cover.is_empty() {
        return Err(ConstructError::EmptyCover);
    }
    let sets: Vec<Vec<usize>> = cover
        .iter()
        .map(|u| {
            let mut u = u.clone();
            u.sort_unstable();
            u.dedup();
            u
        })
        .collect();
    if let Some(&x) = sets.iter().flatten().find(|&&x| x >= n_points) {
        return Err(ConstructError::InvalidArgument(format!(
            "point {x} outside the base"
        )));
    }
    if let Some(x) = (0..n_points).find(|x| !sets.iter().any(|u| u.contains(x))) {
        return Err(ConstructError::NotACover(x));
    }
    let mut obj_index = std::collections::HashMap::new();
    for (i, u) in sets.iter().enumerate() {
        for &x in u {
            let k = obj_index.len();
            obj_index.insert((i, x), k);
        }
    }
    let mut triples = Vec::new();
    for (i, ui) in sets.iter().enumerate() {
        for (j, uj) in sets.iter().enumerate() {
            for &x in ui.iter().filter(|x| uj.contains(x)) {
                triples.push((i, j, x));
            }
        }
    }
    let arrow_index: std::collections::HashMap<(usize, usize, usize), usize> =
        triples.iter().enumerate().map(|(a, t)| (*t, a)).collect();
    let arrows = triples
        .iter()
        .map(|&(i, j, x)| (obj_index[&(j, x)], obj_index[&(i, x)], format!("({i},{j},{x})")))
        .collect();
    let objs: Vec<(usize, usize)> = {
        let mut v: Vec<_> = obj_index.iter().map(|(k, v)| (*v, *k)).collect();
        v.sort_unstable();
        v.into_iter().map(|(_, k)| k).collect()
    };
    Ok(build(
        objs.len(),
        arrows,
        |a, b| {
            let (i, _, x) = triples[a];
            let (_, k, _) = triples[b];
            arrow_index[&(i, k, x)]
        },
        |a| {
            let (i, j, x) = triples[a];
            arrow_index[&(j, i, x)]
        },
        |o| {
            let (i, x) = objs[o];
            arrow_index[&(i, i, x)]
        },
    )?)
}

/// `G × H`: object `(x,y)` at `x·|H₀| + y`, arrow `(g,h)` at `g·|H₁| + h`.
pub fn product_groupoid(g: &FiniteGroupoid, h: &FiniteGroupoid) -> FiniteGroupoid {
    let (m0, m1) = (h.n_objects(), h.n_arrows());
    let arrows = (0..g.n_arrows() * m1)
        .map(|a| {
            let (x, y) = (a / m1, a % m1);
            (
                g.src(x) * m0 + h.src(y),
                g.tgt(x) * m0 + h.tgt(y),
                format!("({},{})", g.label(x), h.label(y)),
            )
        })
        .collect();
    build(
        g.n_objects() * m0,
        arrows,
        |a, b| {
            g.compose(a / m1, b / m1).expect("composable") * m1
                + h.compose(a % m1, b % m1).expect("composable")
        },
        |a| g.inv(a / m1) * m1 + h.inv(a % m1),
        |o| g.unit(o / m0) * m1 + h.unit(o % m0),
    )
    .expect("product of groupoids")
}

/// Pullback `φ₀*K` of `K` along a map `φ₀: X → K₀`: arrows are triples
/// `(x, k, y)` with `k: φ₀(y) → φ₀(x)`, ordered by `x`, then `y`, then `k`.
/// Returns the groupoid and its projection onto `K`.
pub fn pullback_groupoid(
    k: &FiniteGroupoid,
    phi0: &[usize],
) -> Result<(FiniteGroupoid, GroupoidHom), ConstructError> {
    if phi0.iter().any(|&o| o >= k.n_objects()) {
        return Err(ConstructError::InvalidArgument("object map out of range".into()));
    }
    let n = phi0.len();
    let mut triples = Vec::new();
    let mut index = std::collections::HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for &a in k.t_fiber(phi0[x]) {
                if k.src(a) == phi0[y] {
                    index.insert((x, a, y), triples.len());
                    triples.push((x, a, y));
                }
            }
        }
    }
    let arrows = triples
        .iter()
        .map(|&(x, a, y)| (y, x, format!("({x},{},{y})", k.label(a))))
        .collect();
    let g = build(
        n,
        arrows,
        |p, q| {
            let (x, a, _) = triples[p];
            let (_, b, z) = triples[q];
            index[&(x, k.compose(a, b).expect("composable"), z)]
        },
        |p| {
            let (x, a, y) = triples[p];
            index[&(y, k.inv(a), x)]
        },
        |x| index[&(x, k.unit(phi0[x]), x)],
    )?;
    let projection = GroupoidHom {
        obj_map: phi0.to_vec(),
        arrow_map: triples.iter().map(|t| t.1).collect(),
    };
    Ok((g, projection))
}

/// `G ⊔ H` with the objects and arrows of `G` first.
pub fn disjoint_union(g: &FiniteGroupoid, h: &FiniteGroupoid) -> FiniteGroupoid {
    let (o0, o1) = (g.n_objects(), g.n_arrows());
    let mut arrows: Vec<(usize, usize, String)> = (0..o1)
        .map(|a| (g.src(a), g.tgt(a), format!("0:{}", g.label(a))))
        .collect();
    arrows.extend(
        (0..h.n_arrows()).map(|a| (h.src(a) + o0, h.tgt(a) + o0, format!("1:{}", h.label(a)))),
    );
    build(
        o0 + h.n_objects(),
        arrows,
        |a, b| {
            if a < o1 {
                g.compose(a, b).expect("composable")
            } else {
                h.compose(a - o1, b - o1).expect("composable") + o1
            }
        },
        |a| if a < o1 { g.inv(a) } else { h.inv(a - o1) + o1 },
        |x| if x < o0 { g.unit(x) } else { h.unit(x - o0) + o1 },
    )
    .expect("disjoint union of groupoids")
}

/// Same arrows with source and target swapped; `g ∘ᵒᵖ h = h ∘ g`.
pub fn opposite_groupoid(g: &FiniteGroupoid) -> FiniteGroupoid {
    build(
        g.n_objects(),
        (0..g.n_arrows())
            .map(|a| (g.tgt(a), g.src(a), g.label(a).to_string()))
            .collect(),
        |a, b| g.compose(b, a).expect("composable"),
        |a| g.inv(a),
        |x| g.unit(x),
    )
    .expect("opposite groupoid")
}

/// Full subgroupoid on the objects `s` (sorted, deduplicated); arrows keep
/// their relative order.
pub fn full_subgroupoid(g: &FiniteGroupoid, s: &[usize]) -> Result<FiniteGroupoid, ConstructError> {
    let mut objs = s.to_vec();
    objs.sort_unstable();
    objs.dedup();
    if objs.is_empty() {
        return Err(GroupoidError::Empty.into());
    }
    if let Some(&x) = objs.iter().find(|&&x| x >= g.n_objects()) {
        return Err(ConstructError::InvalidArgument(format!("object {x} out of range")));
    }
    let mut new_obj = vec![usize::MAX; g.n_objects()];
    for (i, &x) in objs.iter().enumerate() {
        new_obj[x] = i;
    }
    let kept: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| new_obj[g.src(a)] != usize::MAX && new_obj[g.tgt(a)] != usize::MAX)
        .collect();
    let mut new_arrow = vec![usize::MAX; g.n_arrows()];
    for (i, &a) in kept.iter().enumerate() {
        new_arrow[a] = i;
    }
    Ok(build(
        objs.len(),
        kept.iter()
            .map(|&a| (new_obj[g.src(a)], new_obj[g.tgt(a)], g.label(a).to_string()))
            .collect(),
        |a, b| new_arrow[g.compose(kept[a], kept[b]).expect("composable")],
        |a| new_arrow[g.inv(kept[a])],
        |x| new_arrow[g.unit(objs[x])],
    )?)
}

/// The gauge groupoid `(P × P)/K ⇉ P/K` of a free right action of a finite
/// group `K` on a finite set `P`, together with the data needed to build its
/// Morita bibundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeGroupoid {
    pub groupoid: FiniteGroupoid,
    pub group: FiniteGroupoid,
    /// `right_action[p][k] = p·k`.
    pub right_action: Vec<Vec<usize>>,
    /// Object (orbit) of each point.
    pub orbit_of_point: Vec<usize>,
    /// Arrow `[p,p']` of each pair, indexed `p·|P| + p'`.
    pub class_of_pair: Vec<usize>,
}

/// Builds `(P×P)/K`. Objects are `K`-orbits numbered by smallest member;
/// arrows are diagonal orbits numbered by smallest pair index `p·|P| + p'`,
/// with `t[p,p'] = [p]` and `s[p,p'] = [p']`.
///
/// When `projection` is given it must be constant exactly on the orbits
/// (otherwise `NotPrincipal`).
pub fn gauge_groupoid(
    group: &FiniteGroupoid,
    n_points: usize,
    right_action: &[Vec<usize>],
    projection: Option<&[usize]>,
) -> Result<GaugeGroupoid, ConstructError> {
    require_group(group)?;
    let nk = group.n_arrows();
    let n = n_points;
    if n == 0 {
        return Err(GroupoidError::Empty.into());
    }
    if right_action.len() != n
        || right_action
            .iter()
            .any(|r| r.len() != nk || r.iter().any(|&q| q >= n))
    {
        return Err(ConstructError::NotAnAction("table shape".into()));
    }
    let e = group.unit(0);
    for p in 0..n {
        if right_action[p][e] != p {
            return Err(ConstructError::NotAnAction(format!("identity moves {p}")));
        }
        for a in 0..nk {
            for b in 0..nk {
                let ab = group.compose(a, b).expect("group");
                if right_action[p][ab] != right_action[right_action[p][a]][b] {
                    return Err(ConstructError::NotAnAction(format!(
                        "{p}·({a}{b}) != ({p}·{a})·{b}"
                    )));
                }
            }
        }
        if let Some(k) = (0..nk).find(|&k| k != e && right_action[p][k] == p) {
            return Err(ConstructError::NotFree {
                point: p,
                element: k,
            });
        }
    }
    let mut uf = UnionFind::new(n);
    for p in 0..n {
        for k in 0..nk {
            uf.union(p, right_action[p][k]);
        }
    }
    let (orbit_of_point, n_orbits) = uf.classes();
    if let Some(proj) = projection {
        if proj.len() != n {
            return Err(ConstructError::NotPrincipal("projection length".into()));
        }
        for p in 0..n {
            for q in 0..n {
                if (proj[p] == proj[q]) != (orbit_of_point[p] == orbit_of_point[q]) {
                    return Err(ConstructError::NotPrincipal(format!(
                        "points {p} and {q}: fibres of the projection are not orbits"
                    )));
                }
            }
        }
    }

    let mut pairs = UnionFind::new(n * n);
    for p in 0..n {
        for q in 0..n {
            for k in 0..nk {
                pairs.union(p * n + q, right_action[p][k] * n + right_action[q][k]);
            }
        }
    }
    let (class_of_pair, n_classes) = pairs.classes();
    let mut rep = vec![usize::MAX; n_classes];
    for (pair, &c) in class_of_pair.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = pair;
        }
    }
    let arrows = rep
        .iter()
        .map(|&pq| {
            let (p, q) = (pq / n, pq % n);
            (orbit_of_point[q], orbit_of_point[p], format!("[{p},{q}]"))
        })
        .collect();
    let unit_of_orbit: Vec<usize> = (0..n_orbits)
        .map(|o| {
            let p = (0..n).find(|&p| orbit_of_point[p] == o).expect("orbit");
            class_of_pair[p * n + p]
        })
        .collect();
    let groupoid = build(
        n_orbits,
        arrows,
        |a, b| {
            let (p1, p2) = (rep[a] / n, rep[a] % n);
            let (q1, q2) = (rep[b] / n, rep[b] % n);
            // move [q1,q2] to start at p2: q1·k = p2
            let k = (0..nk)
                .find(|&k| right_action[q1][k] == p2)
                .expect("orbits match");
            class_of_pair[p1 * n + right_action[q2][k]]
        },
        |a| {
            let (p, q) = (rep[a] / n, rep[a] % n);
            class_of_pair[q * n + p]
        },
        |o| unit_of_orbit[o],
    )?;
    Ok(GaugeGroupoid {
        groupoid,
        group: group.clone(),
        right_action: right_action.to_vec(),
        orbit_of_point,
        class_of_pair,
    })
}
