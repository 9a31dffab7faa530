//! JSON documents for groupoids, Haar systems, bibundles, algebra elements,
//! disks and sequences.
//!
//! Every document carries `"format": 1`. Groupoids and bibundles may be given
//! either as explicit tables or through a `constructor` object; saving always
//! writes the explicit tables, which is the canonical form.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bibundle::{
    anchor_bibundle, cech_bibundle, compose_bibundles, diagonal_bibundle, gauge_bibundle,
    hom_bibundle, identity_bibundle, opposite_bibundle, point_bibundle, terminal_bibundle,
    validate_bibundle, Bibundle, RawBibundle,
};
use crate::bornology::PolytopalDisk;
use crate::groupoid::{
    action_groupoid, cech_groupoid, counting_haar, cyclic_group, disjoint_union, gauge_groupoid,
    group_groupoid, opposite_groupoid, pair_groupoid, product_groupoid, pullback_groupoid,
    symmetric3_table, terminal_groupoid, unit_groupoid, validate_groupoid, validate_haar,
    FiniteGroupoid, GroupoidHom, HaarSystem, RawGroupoid,
};
use crate::scalar::{format_rational, parse_rational, Gq, GqRepr, Rational};

pub const FORMAT: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format {found} at {path}, expected {FORMAT}")]
    Format { path: String, found: u32 },
    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn invalid(what: &'static str, e: impl std::fmt::Display) -> IoError {
    IoError::Invalid {
        what,
        message: e.to_string(),
    }
}

/// Deserialises with the JSON path of the first offending value.
pub fn parse_doc<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}

fn check_format(found: u32, path: &str) -> Result<(), IoError> {
    if found != FORMAT {
        return Err(IoError::Format {
            path: path.to_string(),
            found,
        });
    }
    Ok(())
}

fn rational_at(s: &str, path: String) -> Result<Rational, IoError> {
    parse_rational(s).map_err(|_| schema(path, format!("not a rational: {s:?}")))
}

fn rationals_at(xs: &[String], path: &str) -> Result<Vec<Rational>, IoError> {
    xs.iter()
        .enumerate()
        .map(|(i, s)| rational_at(s, format!("{path}[{i}]")))
        .collect()
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn require<T>(v: Option<T>, path: &str, field: &str) -> Result<T, IoError> {
    v.ok_or_else(|| schema(path, format!("missing field `{field}`")))
}

// ---------------------------------------------------------------- groupoids

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<GroupoidSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<ArrowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compose: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<usize>>,
}

impl GroupoidDoc {
    pub fn from_constructor(spec: GroupoidSpec) -> Self {
        GroupoidDoc {
            format: FORMAT,
            constructor: Some(spec),
            objects: None,
            arrows: None,
            compose: None,
            inv: None,
            unit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupoidSpec {
    Terminal,
    Unit { n: usize },
    Pair { n: usize },
    Cyclic { m: usize },
    Symmetric3,
    Group { table: Vec<Vec<usize>> },
    Action { group: Box<GroupoidDoc>, points: usize, act: Vec<Vec<usize>> },
    Cech { points: usize, cover: Vec<Vec<usize>> },
    Product { left: Box<GroupoidDoc>, right: Box<GroupoidDoc> },
    DisjointUnion { left: Box<GroupoidDoc>, right: Box<GroupoidDoc> },
    Opposite { of: Box<GroupoidDoc> },
    Pullback { base: Box<GroupoidDoc>, map: Vec<usize> },
    Gauge {
        group: Box<GroupoidDoc>,
        points: usize,
        right_action: Vec<Vec<usize>>,
        #[serde(default)]
        projection: Option<Vec<usize>>,
    },
}

fn build_spec(spec: &GroupoidSpec, path: &str) -> Result<FiniteGroupoid, IoError> {
    let bad = |e: &dyn std::fmt::Display| invalid("groupoid", format!("{path}.constructor: {e}"));
    let sub = |d: &GroupoidDoc, name: &str| groupoid_from_doc_at(d, &format!("{path}.constructor.{name}"));
    Ok(match spec {
        GroupoidSpec::Terminal => terminal_groupoid(),
        GroupoidSpec::Unit { n } => unit_groupoid(*n).map_err(|e| bad(&e))?,
        GroupoidSpec::Pair { n } => pair_groupoid(*n).map_err(|e| bad(&e))?,
        GroupoidSpec::Cyclic { m } => cyclic_group(*m).map_err(|e| bad(&e))?,
        GroupoidSpec::Symmetric3 => group_groupoid(&symmetric3_table()).map_err(|e| bad(&e))?,
        GroupoidSpec::Group { table } => group_groupoid(table).map_err(|e| bad(&e))?,
        GroupoidSpec::Action { group, points, act } => {
            action_groupoid(&sub(group, "group")?, *points, act).map_err(|e| bad(&e))?
        }
        GroupoidSpec::Cech { points, cover } => cech_groupoid(*points, cover).map_err(|e| bad(&e))?,
        GroupoidSpec::Product { left, right } => {
            product_groupoid(&sub(left, "left")?, &sub(right, "right")?)
        }
        GroupoidSpec::DisjointUnion { left, right } => {
            disjoint_union(&sub(left, "left")?, &sub(right, "right")?)
        }
        GroupoidSpec::Opposite { of } => opposite_groupoid(&sub(of, "of")?),
        GroupoidSpec::Pullback { base, map } => {
            pullback_groupoid(&sub(base, "base")?, map).map_err(|e| bad(&e))?.0
        }
        GroupoidSpec::Gauge {
            group,
            points,
            right_action,
            projection,
        } => {
            gauge_groupoid(&sub(group, "group")?, *points, right_action, projection.as_deref())
                .map_err(|e| bad(&e))?
                .groupoid
        }
    })
}

fn groupoid_from_doc_at(doc: &GroupoidDoc, path: &str) -> Result<FiniteGroupoid, IoError> {
    check_format(doc.format, path)?;
    if let Some(spec) = &doc.constructor {
        return build_spec(spec, path);
    }
    let arrows = require(doc.arrows.as_ref(), path, "arrows")?;
    let raw = RawGroupoid {
        objects: require(doc.objects, path, "objects")?,
        arrows: arrows.iter().map(|a| (a.src, a.tgt)).collect(),
        compose: require(doc.compose.clone(), path, "compose")?,
        inv: require(doc.inv.clone(), path, "inv")?,
        unit: require(doc.unit.clone(), path, "unit")?,
        labels: Some(arrows.iter().map(|a| a.id.clone()).collect()),
    };
    validate_groupoid(&raw).map_err(|e| invalid("groupoid", format!("{path}: {e}")))
}

pub fn groupoid_from_doc(doc: &GroupoidDoc) -> Result<FiniteGroupoid, IoError> {
    groupoid_from_doc_at(doc, "$")
}

pub fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let raw = g.to_raw();
    let labels = g.labels();
    GroupoidDoc {
        format: FORMAT,
        constructor: None,
        objects: Some(raw.objects),
        arrows: Some(
            raw.arrows
                .iter()
                .enumerate()
                .map(|(i, &(src, tgt))| ArrowDoc {
                    id: labels[i].clone(),
                    src,
                    tgt,
                })
                .collect(),
        ),
        compose: Some(raw.compose),
        inv: Some(raw.inv),
        unit: Some(raw.unit),
    }
}

pub fn load_groupoid(text: &str) -> Result<FiniteGroupoid, IoError> {
    groupoid_from_doc(&parse_doc(text)?)
}

pub fn save_groupoid(g: &FiniteGroupoid) -> String {
    to_json(&groupoid_to_doc(g))
}

// ---------------------------------------------------------------- Haar systems

/// Either arrow weights, per-object weights `u` (so `w(h) = u(t(h))`), or
/// neither for the counting system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarDoc {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_weights: Option<Vec<String>>,
}

pub fn haar_from_doc(doc: &HaarDoc, g: &FiniteGroupoid) -> Result<HaarSystem, IoError> {
    check_format(doc.format, "$")?;
    match (&doc.weights, &doc.object_weights) {
        (Some(_), Some(_)) => Err(schema("$", "give either `weights` or `object_weights`")),
        (Some(w), None) => {
            validate_haar(g, rationals_at(w, "$.weights")?).map_err(|e| invalid("haar system", e))
        }
        (None, Some(u)) => HaarSystem::from_object_weights(g, &rationals_at(u, "$.object_weights")?)
            .map_err(|e| invalid("haar system", e)),
        (None, None) => Ok(counting_haar(g)),
    }
}

pub fn haar_to_doc(h: &HaarSystem) -> HaarDoc {
    HaarDoc {
        format: FORMAT,
        weights: Some(strings(h.weights())),
        object_weights: None,
    }
}

pub fn load_haar(text: &str, g: &FiniteGroupoid) -> Result<HaarSystem, IoError> {
    haar_from_doc(&parse_doc(text)?, g)
}

pub fn save_haar(h: &HaarSystem) -> String {
    to_json(&haar_to_doc(h))
}

// ---------------------------------------------------------------- bibundles

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BibundleDoc {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<BibundleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<GroupoidDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<GroupoidDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<usize>>,
    /// `[g, p, g·p]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lact: Option<Vec<[usize; 3]>>,
    /// `[p, h, p·h]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ract: Option<Vec<[usize; 3]>>,
}

impl BibundleDoc {
    pub fn from_constructor(spec: BibundleSpec) -> Self {
        BibundleDoc {
            format: FORMAT,
            constructor: Some(spec),
            left: None,
            right: None,
            points: None,
            labels: None,
            l: None,
            r: None,
            lact: None,
            ract: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BibundleSpec {
    Identity { groupoid: GroupoidDoc },
    Hom {
        from: GroupoidDoc,
        to: GroupoidDoc,
        obj_map: Vec<usize>,
        arrow_map: Vec<usize>,
    },
    Terminal { groupoid: GroupoidDoc },
    Diagonal { groupoid: GroupoidDoc },
    Anchor { groupoid: GroupoidDoc },
    Point { groupoid: GroupoidDoc, object: usize },
    Gauge {
        group: GroupoidDoc,
        points: usize,
        right_action: Vec<Vec<usize>>,
        #[serde(default)]
        projection: Option<Vec<usize>>,
    },
    Cech { points: usize, cover: Vec<Vec<usize>> },
    Opposite { of: Box<BibundleDoc> },
    Compose { first: Box<BibundleDoc>, second: Box<BibundleDoc> },
}

fn build_bibundle_spec(spec: &BibundleSpec, path: &str) -> Result<Bibundle, IoError> {
    let bad = |e: &dyn std::fmt::Display| invalid("bibundle", format!("{path}.constructor: {e}"));
    let g = |d: &GroupoidDoc, name: &str| groupoid_from_doc_at(d, &format!("{path}.constructor.{name}"));
    let b = |d: &BibundleDoc, name: &str| bibundle_from_doc_at(d, &format!("{path}.constructor.{name}"));
    Ok(match spec {
        BibundleSpec::Identity { groupoid } => identity_bibundle(&g(groupoid, "groupoid")?),
        BibundleSpec::Hom {
            from,
            to,
            obj_map,
            arrow_map,
        } => {
            let phi = GroupoidHom {
                obj_map: obj_map.clone(),
                arrow_map: arrow_map.clone(),
            };
            hom_bibundle(&phi, &g(from, "from")?, &g(to, "to")?).map_err(|e| bad(&e))?
        }
        BibundleSpec::Terminal { groupoid } => terminal_bibundle(&g(groupoid, "groupoid")?),
        BibundleSpec::Diagonal { groupoid } => diagonal_bibundle(&g(groupoid, "groupoid")?),
        BibundleSpec::Anchor { groupoid } => anchor_bibundle(&g(groupoid, "groupoid")?),
        BibundleSpec::Point { groupoid, object } => {
            let gg = g(groupoid, "groupoid")?;
            if *object >= gg.n_objects() {
                return Err(bad(&format!("object {object} out of range")));
            }
            point_bibundle(&gg, *object)
        }
        BibundleSpec::Gauge {
            group,
            points,
            right_action,
            projection,
        } => {
            let gg = gauge_groupoid(&g(group, "group")?, *points, right_action, projection.as_deref())
                .map_err(|e| bad(&e))?;
            gauge_bibundle(&gg)
        }
        BibundleSpec::Cech { points, cover } => cech_bibundle(*points, cover).map_err(|e| bad(&e))?,
        BibundleSpec::Opposite { of } => opposite_bibundle(&b(of, "of")?).map_err(|e| bad(&e))?,
        BibundleSpec::Compose { first, second } => {
            compose_bibundles(&b(first, "first")?, &b(second, "second")?)
                .map_err(|e| bad(&e))?
                .bibundle
        }
    })
}

fn bibundle_from_doc_at(doc: &BibundleDoc, path: &str) -> Result<Bibundle, IoError> {
    check_format(doc.format, path)?;
    if let Some(spec) = &doc.constructor {
        return build_bibundle_spec(spec, path);
    }
    let left = groupoid_from_doc_at(require(doc.left.as_ref(), path, "left")?, &format!("{path}.left"))?;
    let right =
        groupoid_from_doc_at(require(doc.right.as_ref(), path, "right")?, &format!("{path}.right"))?;
    let triples = |v: &Vec<[usize; 3]>| v.iter().map(|t| (t[0], t[1], t[2])).collect();
    let raw = RawBibundle {
        points: require(doc.points, path, "points")?,
        l: require(doc.l.clone(), path, "l")?,
        r: require(doc.r.clone(), path, "r")?,
        lact: triples(require(doc.lact.as_ref(), path, "lact")?),
        ract: triples(require(doc.ract.as_ref(), path, "ract")?),
        labels: doc.labels.clone(),
    };
    validate_bibundle(&left, &right, &raw).map_err(|e| invalid("bibundle", format!("{path}: {e}")))
}

pub fn bibundle_from_doc(doc: &BibundleDoc) -> Result<Bibundle, IoError> {
    bibundle_from_doc_at(doc, "$")
}

pub fn bibundle_to_doc(p: &Bibundle) -> BibundleDoc {
    let raw = p.to_raw();
    let triples = |v: &[(usize, usize, usize)]| v.iter().map(|&(a, b, c)| [a, b, c]).collect();
    BibundleDoc {
        format: FORMAT,
        constructor: None,
        left: Some(groupoid_to_doc(p.left())),
        right: Some(groupoid_to_doc(p.right())),
        points: Some(raw.points),
        labels: Some(p.labels().to_vec()),
        l: Some(raw.l.clone()),
        r: Some(raw.r.clone()),
        lact: Some(triples(&raw.lact)),
        ract: Some(triples(&raw.ract)),
    }
}

pub fn load_bibundle(text: &str) -> Result<Bibundle, IoError> {
    bibundle_from_doc(&parse_doc(text)?)
}

pub fn save_bibundle(p: &Bibundle) -> String {
    to_json(&bibundle_to_doc(p))
}

// ---------------------------------------------------------------- elements

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub format: u32,
    pub coeffs: Vec<GqRepr>,
}

pub fn element_from_doc(doc: &ElementDoc) -> Result<Vec<Gq>, IoError> {
    check_format(doc.format, "$")?;
    doc.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| Gq::try_from(c).map_err(|e| schema(format!("$.coeffs[{i}]"), e.0)))
        .collect()
}

pub fn element_to_doc(coeffs: &[Gq]) -> ElementDoc {
    ElementDoc {
        format: FORMAT,
        coeffs: coeffs.iter().map(GqRepr::from).collect(),
    }
}

pub fn load_element(text: &str) -> Result<Vec<Gq>, IoError> {
    element_from_doc(&parse_doc(text)?)
}

pub fn save_element(coeffs: &[Gq]) -> String {
    to_json(&element_to_doc(coeffs))
}

/// A scalar given either as a rational string or as `{"re", "im"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Real(String),
    Complex(GqRepr),
}

fn scalar_at(x: &ScalarDoc, path: String) -> Result<Gq, IoError> {
    match x {
        ScalarDoc::Real(s) => Ok(Gq::real(rational_at(s, path)?)),
        ScalarDoc::Complex(r) => Gq::try_from(r).map_err(|e| schema(path, e.0)),
    }
}

/// A dense matrix given row by row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub format: u32,
    pub rows: Vec<Vec<ScalarDoc>>,
}

pub fn load_matrix(text: &str) -> Result<Vec<Vec<Gq>>, IoError> {
    let doc: MatrixDoc = parse_doc(text)?;
    check_format(doc.format, "$")?;
    let width = doc.rows.first().map_or(0, |r| r.len());
    doc.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != width {
                return Err(schema(format!("rows[{i}]"), format!("expected {width} entries")));
            }
            r.iter()
                .enumerate()
                .map(|(j, x)| scalar_at(x, format!("rows[{i}][{j}]")))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------- disks and sequences

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskDoc {
    pub format: u32,
    pub dim: usize,
    pub generators: Vec<Vec<String>>,
}

pub fn disk_from_doc(doc: &DiskDoc) -> Result<PolytopalDisk, IoError> {
    check_format(doc.format, "$")?;
    let gens = doc
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| rationals_at(g, &format!("$.generators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    PolytopalDisk::new(doc.dim, gens).map_err(|e| invalid("disk", e))
}

pub fn disk_to_doc(d: &PolytopalDisk) -> DiskDoc {
    DiskDoc {
        format: FORMAT,
        dim: d.dim(),
        generators: d.generators().iter().map(|g| strings(g)).collect(),
    }
}

pub fn load_disk(text: &str) -> Result<PolytopalDisk, IoError> {
    disk_from_doc(&parse_doc(text)?)
}

pub fn save_disk(d: &PolytopalDisk) -> String {
    to_json(&disk_to_doc(d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub format: u32,
    pub terms: Vec<Vec<String>>,
    pub limit: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    pub terms: Vec<Vec<Rational>>,
    pub limit: Vec<Rational>,
}

pub fn sequence_from_doc(doc: &SequenceDoc) -> Result<Sequence, IoError> {
    check_format(doc.format, "$")?;
    Ok(Sequence {
        terms: doc
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| rationals_at(t, &format!("$.terms[{i}]")))
            .collect::<Result<_, _>>()?,
        limit: rationals_at(&doc.limit, "$.limit")?,
    })
}

pub fn sequence_to_doc(s: &Sequence) -> SequenceDoc {
    SequenceDoc {
        format: FORMAT,
        terms: s.terms.iter().map(|t| strings(t)).collect(),
        limit: strings(&s.limit),
    }
}

pub fn load_sequence(text: &str) -> Result<Sequence, IoError> {
    sequence_from_doc(&parse_doc(text)?)
}

pub fn save_sequence(s: &Sequence) -> String {
    to_json(&sequence_to_doc(s))
}

/// Parses a comma-separated list of rationals such as `"1/2,1/2"`.
pub fn parse_point(s: &str) -> Result<Vec<Rational>, IoError> {
    s.split(',')
        .enumerate()
        .map(|(i, x)| rational_at(x, format!("point[{i}]")))
        .collect()
}
