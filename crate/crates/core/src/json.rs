//! Wire formats. Parsing accepts integers bare or as strings and
//! rationals as `"p/q"` strings; floating point is rejected outright.
//! Emission is canonical: struct fields in declaration order, maps
//! sorted by key, so equal data serializes to identical bytes.

use crate::amenable::{ActionWindow, FCoverWindow, FSet, SubgroupFamilyWindow, SubgroupWindow};
use crate::boost::BoostedDecomposition;
use crate::decomp::{
    ClassedCover, Cover, DecompositionCertificate, NamedSet, Piece, SpacePieces, Witness,
};
use crate::error::Error;
use crate::group::{
    cyclic_window, dihedral_window, free_window, heisenberg_window, z_window, zd_window, ElemIx,
    GroupWindow,
};
use crate::metric::{FiniteMetricSpace, MetricFamily, PointIx, PointSet};
use crate::nerve::{NervePoint, UniformComplex, VertIx};
use crate::q::Q;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

fn bad_json(e: serde_json::Error) -> Error {
    // serde_json's Display already carries "at line L column C"
    Error::format(e.to_string())
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

// ---------------------------------------------------------------------------
// spaces and families

#[derive(Serialize, Deserialize)]
struct SpaceWire {
    id: String,
    points: Vec<String>,
    dist: Vec<Vec<Q>>,
}

fn build_space(w: SpaceWire) -> Result<Arc<FiniteMetricSpace>, Error> {
    Ok(Arc::new(FiniteMetricSpace::new_dense(
        w.id, w.points, w.dist,
    )?))
}

fn space_wire(space: &FiniteMetricSpace) -> SpaceWire {
    SpaceWire {
        id: space.id().to_string(),
        points: space.labels().to_vec(),
        dist: space.matrix_rows(),
    }
}

pub fn parse_space(text: &str) -> Result<Arc<FiniteMetricSpace>, Error> {
    build_space(serde_json::from_str(text).map_err(bad_json)?)
}

pub fn space_to_json(space: &FiniteMetricSpace) -> String {
    pretty(&space_wire(space))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FamilyEntryWire {
    Space(SpaceWire),
    Subspace {
        parent: String,
        members: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
}

/// A family is a list of spaces; an entry may carve a subspace out of
/// an earlier space by labels, with the induced metric.
pub fn parse_family(text: &str) -> Result<MetricFamily, Error> {
    let entries: Vec<FamilyEntryWire> = serde_json::from_str(text).map_err(bad_json)?;
    family_from_entries(entries)
}

fn family_from_entries(entries: Vec<FamilyEntryWire>) -> Result<MetricFamily, Error> {
    let mut spaces: Vec<Arc<FiniteMetricSpace>> = Vec::with_capacity(entries.len());
    for (k, entry) in entries.into_iter().enumerate() {
        match entry {
            FamilyEntryWire::Space(w) => spaces.push(build_space(w)?),
            FamilyEntryWire::Subspace {
                parent,
                members,
                id,
            } => {
                let parent = spaces
                    .iter()
                    .find(|s| s.id() == parent)
                    .ok_or_else(|| {
                        Error::format(format!("subspace of unknown space {parent:?}"))
                    })?
                    .clone();
                let id = id.unwrap_or_else(|| format!("{}[{k}]", parent.id()));
                let ixs: Vec<PointIx> = members
                    .iter()
                    .map(|l| {
                        parent.point_index(l).ok_or_else(|| {
                            Error::format(format!(
                                "subspace member {l:?} not in space {:?}",
                                parent.id()
                            ))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let dist = ixs
                    .iter()
                    .map(|&i| ixs.iter().map(|&j| parent.dist(i, j)).collect())
                    .collect();
                spaces.push(Arc::new(FiniteMetricSpace::new_dense(id, members, dist)?));
            }
        }
    }
    MetricFamily::new(spaces)
}

pub fn family_to_json(family: &MetricFamily) -> String {
    let entries: Vec<FamilyEntryWire> = family
        .spaces()
        .iter()
        .map(|s| FamilyEntryWire::Space(space_wire(s)))
        .collect();
    pretty(&entries)
}

// ---------------------------------------------------------------------------
// group windows

#[derive(Serialize, Deserialize)]
struct WindowWire {
    elements: Vec<String>,
    identity: String,
    mult: Vec<Vec<Option<String>>>,
    inv: Vec<String>,
    gens: Vec<GenWire>,
}

#[derive(Serialize, Deserialize)]
struct GenWire {
    s: String,
    w: Q,
}

#[derive(Deserialize)]
struct BuiltinWire {
    builtin: String,
    #[serde(default)]
    radius: Option<i64>,
    #[serde(default)]
    weights: Option<Vec<Q>>,
    #[serde(default)]
    steps: Option<Vec<i64>>,
}

fn ones(n: usize) -> Vec<Q> {
    vec![Q::from_int(1); n]
}

fn build_builtin(w: BuiltinWire) -> Result<GroupWindow, Error> {
    let name = w.builtin.as_str();
    let radius = || {
        w.radius
            .ok_or_else(|| Error::format(format!("builtin {name:?} needs a radius")))
    };
    let weight = |k: usize| -> Result<Vec<Q>, Error> {
        let ws = w.weights.clone().unwrap_or_else(|| ones(k));
        if ws.len() != k {
            return Err(Error::format(format!(
                "builtin {name:?} takes {k} weights, got {}",
                ws.len()
            )));
        }
        Ok(ws)
    };
    let tail = |prefix: &str| -> Result<i64, Error> {
        name[prefix.len()..].parse().map_err(|_| {
            Error::format(format!("cannot read a number out of builtin name {name:?}"))
        })
    };
    if name == "Z" {
        let steps = w.steps.clone().unwrap_or_else(|| vec![1]);
        return z_window(radius()?, &steps, &weight(steps.len())?);
    }
    if let Some(rest) = name.strip_prefix("Z^") {
        let d: usize = rest.parse().map_err(|_| {
            Error::format(format!("cannot read a dimension out of builtin name {name:?}"))
        })?;
        return zd_window(d, radius()?, &weight(d)?);
    }
    if name.starts_with("Z/") {
        let n = tail("Z/")?;
        return cyclic_window(n, weight(1)?.remove(0));
    }
    if name.starts_with("D_") {
        let n = tail("D_")?;
        let mut ws = weight(2)?;
        let w_s = ws.remove(1);
        return dihedral_window(n, ws.remove(0), w_s);
    }
    if name.starts_with("F_") {
        let k = tail("F_")? as usize;
        let r = radius()?;
        if r < 0 {
            return Err(Error::format("negative radius"));
        }
        return free_window(k, r as usize, &weight(k)?);
    }
    if name == "Heis" {
        let mut ws = weight(2)?;
        let w_y = ws.remove(1);
        return heisenberg_window(radius()?, ws.remove(0), w_y);
    }
    Err(Error::format(format!("unknown builtin window {name:?}")))
}

fn build_window(w: WindowWire) -> Result<GroupWindow, Error> {
    let index: HashMap<&str, ElemIx> = w
        .elements
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as ElemIx))
        .collect();
    let look = |l: &str| -> Result<ElemIx, Error> {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::format(format!("unknown element {l:?}")))
    };
    let n = w.elements.len();
    if w.mult.len() != n || w.mult.iter().any(|row| row.len() != n) {
        return Err(Error::format(format!(
            "multiplication table must be {n} x {n}"
        )));
    }
    let mut mult = Vec::with_capacity(n * n);
    for row in &w.mult {
        for entry in row {
            mult.push(match entry {
                Some(l) => Some(look(l)?),
                None => None,
            });
        }
    }
    let inv = w
        .inv
        .iter()
        .map(|l| look(l))
        .collect::<Result<Vec<_>, _>>()?;
    let gens = w
        .gens
        .iter()
        .map(|g| Ok((look(&g.s)?, g.w.clone())))
        .collect::<Result<Vec<_>, Error>>()?;
    GroupWindow::new("window", w.elements, &w.identity, mult, inv, gens)
}

pub fn parse_window_value(value: &serde_json::Value) -> Result<Arc<GroupWindow>, Error> {
    let window = if value.get("builtin").is_some() {
        build_builtin(serde_json::from_value(value.clone()).map_err(bad_json)?)?
    } else {
        build_window(serde_json::from_value(value.clone()).map_err(bad_json)?)?
    };
    Ok(Arc::new(window))
}

pub fn parse_window(text: &str) -> Result<Arc<GroupWindow>, Error> {
    parse_window_value(&serde_json::from_str(text).map_err(bad_json)?)
}

fn window_wire(w: &GroupWindow) -> WindowWire {
    let n = w.len() as ElemIx;
    WindowWire {
        elements: w.labels().to_vec(),
        identity: w.label(w.identity()).to_string(),
        mult: (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| w.mul(g, h).map(|k| w.label(k).to_string()))
                    .collect()
            })
            .collect(),
        inv: (0..n).map(|g| w.label(w.inv(g)).to_string()).collect(),
        gens: w
            .gens()
            .iter()
            .map(|(s, wt)| GenWire {
                s: w.label(*s).to_string(),
                w: wt.clone(),
            })
            .collect(),
    }
}

pub fn window_to_json(w: &GroupWindow) -> String {
    pretty(&window_wire(w))
}

// ---------------------------------------------------------------------------
// decomposition certificates

#[derive(Serialize, Deserialize)]
struct NamedSetWire {
    name: String,
    members: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ClassedCoverWire {
    classes: Vec<Vec<NamedSetWire>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum WitnessWire {
    Bounded {
        #[serde(rename = "D")]
        d: Q,
    },
    Cover {
        m: u32,
        scale: Q,
        bound: Q,
        covers: Vec<Vec<ClassedCoverWire>>,
    },
}

#[derive(Serialize, Deserialize)]
struct PieceWire {
    space: String,
    color: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    members: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CertWire {
    family: Vec<FamilyEntryWire>,
    r: Q,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<u32>,
    pieces: Vec<PieceWire>,
    witness: WitnessWire,
}

fn point_set(space: &FiniteMetricSpace, members: &[String]) -> Result<PointSet, Error> {
    let ixs: Vec<PointIx> = members
        .iter()
        .map(|l| {
            space.point_index(l).ok_or_else(|| {
                Error::format(format!("point {l:?} not in space {:?}", space.id()))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(PointSet::new(ixs))
}

fn named_set(space: &FiniteMetricSpace, w: &NamedSetWire) -> Result<NamedSet, Error> {
    Ok(NamedSet::new(w.name.clone(), point_set(space, &w.members)?))
}

/// Parse a certificate; the optional depth rider distinguishes boosted
/// certificates from plain ones.
pub fn parse_certificate(
    text: &str,
) -> Result<(DecompositionCertificate, Option<u32>), Error> {
    let wire: CertWire = serde_json::from_str(text).map_err(bad_json)?;
    let family = family_from_entries(wire.family)?;

    let mut pieces: Vec<SpacePieces> = family
        .spaces()
        .iter()
        .map(|s| SpacePieces {
            space: Arc::clone(s),
            pieces: Vec::new(),
        })
        .collect();
    let by_id: HashMap<&str, usize> = family
        .spaces()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id(), i))
        .collect();
    for (k, pw) in wire.pieces.iter().enumerate() {
        let &s = by_id.get(pw.space.as_str()).ok_or_else(|| {
            Error::format(format!("piece references unknown space {:?}", pw.space))
        })?;
        let space = &family.spaces()[s];
        pieces[s].pieces.push(Piece {
            name: pw.name.clone().unwrap_or_else(|| format!("p{k}")),
            color: pw.color,
            points: point_set(space, &pw.members)?,
        });
    }

    let witness = match wire.witness {
        WitnessWire::Bounded { d } => Witness::Bounded { bound: d },
        WitnessWire::Cover {
            m,
            scale,
            bound,
            covers,
        } => {
            if covers.len() != family.len() {
                return Err(Error::format(format!(
                    "cover witness lists {} spaces, family has {}",
                    covers.len(),
                    family.len()
                )));
            }
            let covers = covers
                .into_iter()
                .enumerate()
                .map(|(s, per_piece)| {
                    let space = &family.spaces()[s];
                    per_piece
                        .into_iter()
                        .map(|cw| {
                            let classes = cw
                                .classes
                                .into_iter()
                                .map(|sets| {
                                    sets.iter().map(|nw| named_set(space, nw)).collect()
                                })
                                .collect::<Result<Vec<_>, Error>>()?;
                            Ok(ClassedCover { classes })
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Witness::Cover {
                m,
                scale,
                bound,
                covers,
            }
        }
    };

    Ok((
        DecompositionCertificate {
            family,
            r: wire.r,
            n: wire.n,
            pieces,
            witness,
        },
        wire.depth,
    ))
}

fn named_set_wire(space: &FiniteMetricSpace, s: &NamedSet) -> NamedSetWire {
    NamedSetWire {
        name: s.name.clone(),
        members: s.points.iter().map(|p| space.label(p).to_string()).collect(),
    }
}

fn certificate_wire(cert: &DecompositionCertificate, depth: Option<u32>) -> CertWire {
    let pieces = cert
        .pieces
        .iter()
        .flat_map(|sp| {
            sp.pieces.iter().map(|p| PieceWire {
                space: sp.space.id().to_string(),
                color: p.color,
                name: Some(p.name.clone()),
                members: p
                    .points
                    .iter()
                    .map(|i| sp.space.label(i).to_string())
                    .collect(),
            })
        })
        .collect();
    let witness = match &cert.witness {
        Witness::Bounded { bound } => WitnessWire::Bounded { d: bound.clone() },
        Witness::Cover {
            m,
            scale,
            bound,
            covers,
        } => WitnessWire::Cover {
            m: *m,
            scale: scale.clone(),
            bound: bound.clone(),
            covers: covers
                .iter()
                .enumerate()
                .map(|(s, per_piece)| {
                    let space = &cert.family.spaces()[s];
                    per_piece
                        .iter()
                        .map(|cc| ClassedCoverWire {
                            classes: cc
                                .classes
                                .iter()
                                .map(|sets| {
                                    sets.iter().map(|ns| named_set_wire(space, ns)).collect()
                                })
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
        },
    };
    CertWire {
        family: cert
            .family
            .spaces()
            .iter()
            .map(|s| FamilyEntryWire::Space(space_wire(s)))
            .collect(),
        r: cert.r.clone(),
        n: cert.n,
        depth,
        pieces,
        witness,
    }
}

pub fn certificate_to_json(cert: &DecompositionCertificate) -> String {
    pretty(&certificate_wire(cert, None))
}

pub fn boosted_to_json(b: &BoostedDecomposition) -> String {
    pretty(&certificate_wire(&b.cert, Some(b.depth)))
}

// ---------------------------------------------------------------------------
// covers

#[derive(Serialize, Deserialize)]
struct CoverWire {
    sets: Vec<NamedSetWire>,
}

/// A cover references points of an externally supplied space.
pub fn parse_cover(text: &str, space: &Arc<FiniteMetricSpace>) -> Result<Cover, Error> {
    let wire: CoverWire = serde_json::from_str(text).map_err(bad_json)?;
    let sets = wire
        .sets
        .iter()
        .map(|nw| named_set(space, nw))
        .collect::<Result<Vec<_>, _>>()?;
    Cover::new(Arc::clone(space), sets)
}

pub fn cover_to_json(cover: &Cover) -> String {
    pretty(&CoverWire {
        sets: cover
            .sets()
            .iter()
            .map(|s| named_set_wire(cover.space(), s))
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// complexes and nerve points

#[derive(Serialize, Deserialize)]
struct ComplexWire {
    vertices: Vec<String>,
    simplices: Vec<Vec<String>>,
}

pub fn parse_complex(text: &str) -> Result<UniformComplex, Error> {
    let wire: ComplexWire = serde_json::from_str(text).map_err(bad_json)?;
    UniformComplex::from_labeled_maximal(wire.vertices, &wire.simplices)
}

pub fn complex_to_json(complex: &UniformComplex) -> String {
    pretty(&ComplexWire {
        vertices: complex.labels().to_vec(),
        simplices: complex
            .maximal_simplices()
            .iter()
            .map(|s| s.iter().map(|&v| complex.label(v).to_string()).collect())
            .collect(),
    })
}

#[derive(Serialize, Deserialize)]
struct NervePointWire {
    coords: BTreeMap<String, Q>,
}

pub fn parse_nerve_point(text: &str, complex: &UniformComplex) -> Result<NervePoint, Error> {
    nerve_point_from_wire(&serde_json::from_str(text).map_err(bad_json)?, complex)
}

fn nerve_point_from_wire(
    wire: &NervePointWire,
    complex: &UniformComplex,
) -> Result<NervePoint, Error> {
    let mut coords = BTreeMap::new();
    for (label, c) in &wire.coords {
        let v = complex.vertex_index(label).ok_or_else(|| {
            Error::format(format!("coordinate at unknown vertex {label:?}"))
        })?;
        coords.insert(v, c.clone());
    }
    let p = NervePoint::new(coords)?;
    p.validate_in(complex)?;
    Ok(p)
}

fn nerve_point_wire(p: &NervePoint, complex: &UniformComplex) -> NervePointWire {
    NervePointWire {
        coords: p
            .iter()
            .map(|(&v, c)| (complex.label(v).to_string(), c.clone()))
            .collect(),
    }
}

pub fn nerve_point_to_json(p: &NervePoint, complex: &UniformComplex) -> String {
    pretty(&nerve_point_wire(p, complex))
}

// ---------------------------------------------------------------------------
// actions

/// Split a `"left,right"` key where either side may itself contain
/// commas: exactly one split position may hit both vocabularies.
fn split_pair(
    key: &str,
    left: &dyn Fn(&str) -> bool,
    right: &dyn Fn(&str) -> bool,
) -> Result<(String, String), Error> {
    let mut found: Option<(String, String)> = None;
    for (i, _) in key.match_indices(',') {
        let (l, r) = (&key[..i], &key[i + 1..]);
        if left(l) && right(r) {
            if found.is_some() {
                return Err(Error::format(format!("ambiguous pair key {key:?}")));
            }
            found = Some((l.to_string(), r.to_string()));
        }
    }
    found.ok_or_else(|| Error::format(format!("cannot resolve pair key {key:?}")))
}

#[derive(Serialize, Deserialize)]
struct ActionWire {
    window: serde_json::Value,
    #[serde(rename = "X")]
    x: Vec<String>,
    action: BTreeMap<String, String>,
    #[serde(
        rename = "metric_GX",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    metric_gx: Option<Vec<Vec<Q>>>,
}

pub fn parse_action(text: &str) -> Result<ActionWindow, Error> {
    let wire: ActionWire = serde_json::from_str(text).map_err(bad_json)?;
    let window = parse_window_value(&wire.window)?;
    let x_index: HashMap<&str, PointIx> = wire
        .x
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as PointIx))
        .collect();
    let nx = wire.x.len();
    let mut table: Vec<Option<PointIx>> = vec![None; window.len() * nx];
    for (key, out) in &wire.action {
        let (g, x) = split_pair(
            key,
            &|l| window.element_index(l).is_some(),
            &|r| x_index.contains_key(r),
        )?;
        let g = window.element_index(&g).unwrap() as usize;
        let x = x_index[x.as_str()] as usize;
        let y = *x_index.get(out.as_str()).ok_or_else(|| {
            Error::format(format!("action value {out:?} is not a point"))
        })?;
        table[g * nx + x] = Some(y);
    }
    let metric = match wire.metric_gx {
        Some(matrix) => {
            let mut labels = Vec::with_capacity(window.len() * nx);
            for g in window.labels() {
                for x in &wire.x {
                    labels.push(format!("{g},{x}"));
                }
            }
            Some(Arc::new(FiniteMetricSpace::new_dense(
                "GX", labels, matrix,
            )?))
        }
        None => None,
    };
    ActionWindow::new(window, wire.x, table, metric)
}

pub fn action_to_json(aw: &ActionWindow) -> String {
    let w = aw.window();
    let mut action = BTreeMap::new();
    for g in 0..w.len() as ElemIx {
        for x in 0..aw.x_len() as PointIx {
            if let Some(y) = aw.act(g, x) {
                action.insert(
                    format!("{},{}", w.label(g), aw.x_label(x)),
                    aw.x_label(y).to_string(),
                );
            }
        }
    }
    let metric_gx = aw.metric().map(|m| m.matrix_rows());
    pretty(&ActionWire {
        window: serde_json::to_value(window_wire(w)).expect("serialization cannot fail"),
        x: aw.x_labels().to_vec(),
        action,
        metric_gx,
    })
}

// ---------------------------------------------------------------------------
// subgroup families and their covers

#[derive(Serialize, Deserialize)]
struct SubgroupWire {
    name: String,
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FamilyMembersWire {
    members: Vec<SubgroupWire>,
}

#[derive(Serialize, Deserialize)]
struct FSetWire {
    name: String,
    members: Vec<String>,
    assigned: String,
}

#[derive(Serialize, Deserialize)]
struct FCoverWire {
    family: FamilyMembersWire,
    sets: Vec<FSetWire>,
}

/// Cover of a window-times-set product, with each set assigned to a
/// named family member. Set members are `"g,x"` pair labels.
pub fn parse_fcover(text: &str, aw: &ActionWindow) -> Result<FCoverWindow, Error> {
    let wire: FCoverWire = serde_json::from_str(text).map_err(bad_json)?;
    let w = aw.window();
    let members = wire
        .family
        .members
        .iter()
        .map(|sw| {
            let elements = sw
                .elements
                .iter()
                .map(|l| {
                    w.element_index(l).ok_or_else(|| {
                        Error::format(format!(
                            "family member {:?} lists unknown element {l:?}",
                            sw.name
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SubgroupWindow::new(sw.name.clone(), elements))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let family = SubgroupFamilyWindow { members };
    let member_ix: HashMap<&str, usize> = family
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.as_str(), i))
        .collect();
    let sets = wire
        .sets
        .iter()
        .map(|fw| {
            let assigned = *member_ix.get(fw.assigned.as_str()).ok_or_else(|| {
                Error::format(format!(
                    "set {:?} assigned to unknown member {:?}",
                    fw.name, fw.assigned
                ))
            })?;
            let points = fw
                .members
                .iter()
                .map(|key| {
                    let (g, x) = split_pair(
                        key,
                        &|l| w.element_index(l).is_some(),
                        &|r| aw.x_index(r).is_some(),
                    )?;
                    Ok(aw.pair_index(
                        w.element_index(&g).unwrap(),
                        aw.x_index(&x).unwrap(),
                    ))
                })
                .collect::<Result<Vec<PointIx>, Error>>()?;
            Ok(FSet {
                name: fw.name.clone(),
                points: PointSet::new(points),
                assigned,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(FCoverWindow { family, sets })
}

pub fn fcover_to_json(cover: &FCoverWindow, aw: &ActionWindow) -> String {
    pretty(&FCoverWire {
        family: FamilyMembersWire {
            members: cover
                .family
                .members
                .iter()
                .map(|m| SubgroupWire {
                    name: m.name.clone(),
                    elements: m
                        .elements
                        .iter()
                        .map(|&g| aw.window().label(g).to_string())
                        .collect(),
                })
                .collect(),
        },
        sets: cover
            .sets
            .iter()
            .map(|s| FSetWire {
                name: s.name.clone(),
                members: s.points.iter().map(|p| aw.pair_label(p)).collect(),
                assigned: cover.family.members[s.assigned].name.clone(),
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// equivariant map bundles

#[derive(Serialize, Deserialize)]
struct MapWire {
    action: ActionWire,
    complex: ComplexWire,
    vertex_action: BTreeMap<String, String>,
    f: BTreeMap<String, NervePointWire>,
    epsilon: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<Q>,
}

/// Bundle for the equivariance checks: domain action, target complex
/// with its vertex action, the map, the budget, and an optional norm
/// radius (largest certified radius when absent).
pub fn parse_map(text: &str) -> Result<crate::nerve::EquivariantMapWindow, Error> {
    let wire: MapWire = serde_json::from_str(text).map_err(bad_json)?;
    let domain = {
        let text = serde_json::to_string(&wire.action).expect("serialization cannot fail");
        parse_action(&text)?
    };
    let complex = UniformComplex::from_labeled_maximal(
        wire.complex.vertices.clone(),
        &wire.complex.simplices,
    )?;
    let w = domain.window();
    let nv = complex.vertex_count();
    let mut table: Vec<Option<VertIx>> = vec![None; w.len() * nv];
    for (key, out) in &wire.vertex_action {
        let (g, v) = split_pair(
            key,
            &|l| w.element_index(l).is_some(),
            &|r| complex.vertex_index(r).is_some(),
        )?;
        let g = w.element_index(&g).unwrap() as usize;
        let v = complex.vertex_index(&v).unwrap() as usize;
        let t = complex.vertex_index(out).ok_or_else(|| {
            Error::format(format!("vertex action value {out:?} is not a vertex"))
        })?;
        table[g * nv + v] = Some(t);
    }
    let target = crate::nerve::SimplicialAction::new(complex, Arc::clone(w), table)?;
    let norms = match wire.radius {
        Some(r) => crate::group::word_norms(w, r)?,
        None => crate::group::word_norms_auto(w),
    };
    let mut f = Vec::with_capacity(domain.x_len());
    for x in 0..domain.x_len() as PointIx {
        let label = domain.x_label(x);
        let pw = wire.f.get(label).ok_or_else(|| {
            Error::format(format!("map value for point {label:?} missing"))
        })?;
        f.push(nerve_point_from_wire(pw, target.complex())?);
    }
    crate::nerve::EquivariantMapWindow::new(domain, target, f, wire.epsilon, norms)
}

pub fn map_to_json(m: &crate::nerve::EquivariantMapWindow) -> String {
    let aw = &m.domain;
    let w = aw.window();
    let complex = m.target.complex();
    let action_text = action_to_json(aw);
    let action: ActionWire =
        serde_json::from_str(&action_text).expect("own emission parses");
    let mut vertex_action = BTreeMap::new();
    for g in 0..w.len() as ElemIx {
        for v in 0..complex.vertex_count() as VertIx {
            if let Some(t) = m.target.act_vertex(g, v) {
                vertex_action.insert(
                    format!("{},{}", w.label(g), complex.label(v)),
                    complex.label(t).to_string(),
                );
            }
        }
    }
    let f = (0..aw.x_len() as PointIx)
        .map(|x| {
            (
                aw.x_label(x).to_string(),
                nerve_point_wire(&m.f[x as usize], complex),
            )
        })
        .collect();
    pretty(&MapWire {
        action,
        complex: ComplexWire {
            vertices: complex.labels().to_vec(),
            simplices: complex
                .maximal_simplices()
                .iter()
                .map(|s| s.iter().map(|&v| complex.label(v).to_string()).collect())
                .collect(),
        },
        vertex_action,
        f,
        epsilon: m.epsilon.clone(),
        radius: Some(m.norms.radius().clone()),
    })
}
