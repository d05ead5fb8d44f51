//! Finite simplicial complexes with the ℓ¹ metric on barycentric
//! coordinates, nerves of covers, the partition-of-unity map psi, and
//! the equivariance machinery built on top: simplicial group actions,
//! maps equivariant up to an error budget, orbit maps, and open-star
//! pullbacks with coset certificates.

use crate::amenable::ActionWindow;
use crate::decomp::Cover;
use crate::error::Error;
use crate::group::{ElemIx, GroupWindow, WordMetricTable};
use crate::metric::{FiniteMetricSpace, PointIx, PointSet};
use crate::q::{Extended, Q};
use crate::report::{Report, Verdict};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

pub type VertIx = u32;

const MAX_FINDINGS: usize = 50;
// faces are enumerated by bitmask, so cap the simplex size
const MAX_SIMPLEX_VERTICES: usize = 16;

/// Finite abstract simplicial complex: labeled vertices plus a
/// downward-closed set of nonempty simplices containing every
/// singleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformComplex {
    labels: Vec<String>,
    index: HashMap<String, VertIx>,
    /// sorted vertex lists, closed under taking faces
    simplices: BTreeSet<Vec<VertIx>>,
    dim: usize,
}

impl UniformComplex {
    /// Build from the maximal simplices; all faces and all singletons
    /// are added.
    pub fn from_maximal(labels: Vec<String>, maximal: &[Vec<VertIx>]) -> Result<Self, Error> {
        if labels.is_empty() {
            return Err(Error::format("complex needs at least one vertex"));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i as VertIx).is_some() {
                return Err(Error::format(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut simplices = BTreeSet::new();
        for v in 0..labels.len() as VertIx {
            simplices.insert(vec![v]);
        }
        for sigma in maximal {
            let mut s: Vec<VertIx> = sigma.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::format("empty simplex"));
            }
            if s.len() > MAX_SIMPLEX_VERTICES {
                return Err(Error::format(format!(
                    "simplex with {} vertices exceeds the supported size",
                    s.len()
                )));
            }
            if let Some(&v) = s.iter().find(|&&v| v as usize >= labels.len()) {
                return Err(Error::format(format!("simplex references vertex {v}")));
            }
            for mask in 1u32..(1 << s.len()) {
                let face: Vec<VertIx> = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                simplices.insert(face);
            }
        }
        let dim = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        Ok(UniformComplex {
            labels,
            index,
            simplices,
            dim,
        })
    }

    pub fn from_labeled_maximal(
        labels: Vec<String>,
        maximal: &[Vec<String>],
    ) -> Result<Self, Error> {
        let index: HashMap<&str, VertIx> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as VertIx))
            .collect();
        let mut out = Vec::with_capacity(maximal.len());
        for sigma in maximal {
            let mut s = Vec::with_capacity(sigma.len());
            for l in sigma {
                match index.get(l.as_str()) {
                    Some(&v) => s.push(v),
                    None => {
                        return Err(Error::format(format!(
                            "simplex references unknown vertex {l:?}"
                        )))
                    }
                }
            }
            out.push(s);
        }
        UniformComplex::from_maximal(labels, &out)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertIx) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_index(&self, label: &str) -> Option<VertIx> {
        self.index.get(label).copied()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    /// `sigma` must be sorted and deduplicated.
    pub fn is_simplex(&self, sigma: &[VertIx]) -> bool {
        self.simplices.contains(sigma)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &[VertIx]> {
        self.simplices.iter().map(|s| s.as_slice())
    }

    /// Simplices with no proper coface; enough to reconstruct the
    /// complex.
    pub fn maximal_simplices(&self) -> Vec<Vec<VertIx>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect()
    }
}

/// A point of the geometric realization: sparse barycentric
/// coordinates, strictly positive, summing to one. Which complex the
/// support must be a simplex of is checked where the point is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NervePoint {
    coords: BTreeMap<VertIx, Q>,
}

impl NervePoint {
    pub fn new(coords: BTreeMap<VertIx, Q>) -> Result<Self, Error> {
        let mut kept = BTreeMap::new();
        let mut total = Q::from_int(0);
        for (v, c) in coords {
            if c.is_negative() {
                return Err(Error::format(format!(
                    "negative barycentric coordinate at vertex {v}"
                )));
            }
            if c.is_zero() {
                continue;
            }
            total = &total + &c;
            kept.insert(v, c);
        }
        if total != Q::from_int(1) {
            return Err(Error::format(format!(
                "barycentric coordinates sum to {total}, not 1"
            )));
        }
        Ok(NervePoint { coords: kept })
    }

    pub fn vertex(v: VertIx) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(v, Q::from_int(1));
        NervePoint { coords }
    }

    /// Uniform coordinates over the given vertices.
    pub fn barycenter(vertices: &[VertIx]) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::format("barycenter of nothing"));
        }
        let share = Q::new(1, vertices.len() as i64);
        let mut coords = BTreeMap::new();
        for &v in vertices {
            if coords.insert(v, share.clone()).is_some() {
                return Err(Error::format("repeated vertex in barycenter"));
            }
        }
        Ok(NervePoint { coords })
    }

    pub fn coord(&self, v: VertIx) -> Option<&Q> {
        self.coords.get(&v)
    }

    pub fn support(&self) -> Vec<VertIx> {
        self.coords.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertIx, &Q)> {
        self.coords.iter()
    }

    /// The support must be a simplex of `complex`.
    pub fn validate_in(&self, complex: &UniformComplex) -> Result<(), Error> {
        let supp = self.support();
        if let Some(&v) = supp
            .iter()
            .find(|&&v| v as usize >= complex.vertex_count())
        {
            return Err(Error::format(format!(
                "coordinate at vertex {v} outside the complex"
            )));
        }
        if !complex.is_simplex(&supp) {
            let names: Vec<&str> = supp.iter().map(|&v| complex.label(v)).collect();
            return Err(Error::format(format!(
                "support {{{}}} is not a simplex",
                names.join(", ")
            )));
        }
        Ok(())
    }
}

/// Σ_v |p_v − q_v|, exact.
pub fn l1_distance(p: &NervePoint, q: &NervePoint) -> Q {
    let mut total = Q::from_int(0);
    let mut pi = p.coords.iter().peekable();
    let mut qi = q.coords.iter().peekable();
    loop {
        match (pi.peek(), qi.peek()) {
            (Some(&(pv, pc)), Some(&(qv, qc))) => {
                if pv < qv {
                    total = &total + pc;
                    pi.next();
                } else if qv < pv {
                    total = &total + qc;
                    qi.next();
                } else {
                    let diff = if pc >= qc { pc - qc } else { qc - pc };
                    total = &total + &diff;
                    pi.next();
                    qi.next();
                }
            }
            (Some(&(_, pc)), None) => {
                total = &total + pc;
                pi.next();
            }
            (None, Some(&(_, qc))) => {
                total = &total + qc;
                qi.next();
            }
            (None, None) => return total,
        }
    }
}

/// Nerve of a cover: one vertex per set (in cover order, named by the
/// set), a simplex per nonempty intersection. The dimension comes out
/// as multiplicity minus one.
pub fn nerve_of_cover(cover: &Cover) -> Result<UniformComplex, Error> {
    let labels: Vec<String> = cover.sets().iter().map(|s| s.name.clone()).collect();
    if let Some(empty) = cover.sets().iter().find(|s| s.points.is_empty()) {
        // an empty set would be a vertex that is not a simplex
        return Err(Error::input(format!(
            "cover set {:?} is empty; drop it before taking the nerve",
            empty.name
        )));
    }
    let mut maximal: BTreeSet<Vec<VertIx>> = BTreeSet::new();
    for p in 0..cover.space().len() as PointIx {
        let member: Vec<VertIx> = cover
            .sets_containing(p)
            .into_iter()
            .map(|i| i as VertIx)
            .collect();
        if !member.is_empty() {
            maximal.insert(member);
        }
    }
    let maximal: Vec<Vec<VertIx>> = maximal.into_iter().collect();
    UniformComplex::from_maximal(labels, &maximal)
}

// ---------------------------------------------------------------------------
// the partition-of-unity map

struct PsiCtx {
    complements: Vec<PointSet>,
    /// sets equal to the whole space; their co-distance is infinite
    full_sets: Vec<VertIx>,
}

impl PsiCtx {
    fn new(cover: &Cover) -> Self {
        let n = cover.space().len();
        let all: PointSet = (0..n as PointIx).collect();
        let mut complements = Vec::with_capacity(cover.sets().len());
        let mut full_sets = Vec::new();
        for (i, s) in cover.sets().iter().enumerate() {
            let c = all.difference(&s.points);
            if c.is_empty() {
                full_sets.push(i as VertIx);
            }
            complements.push(c);
        }
        PsiCtx {
            complements,
            full_sets,
        }
    }

    fn psi_at(&self, cover: &Cover, y: PointIx) -> Result<NervePoint, Error> {
        // a whole-space set has infinite co-distance and soaks up all
        // the mass; several split it evenly
        if !self.full_sets.is_empty() {
            return NervePoint::barycenter(&self.full_sets);
        }
        let mut codist: Vec<(VertIx, Q)> = Vec::new();
        let mut total = Q::from_int(0);
        for (i, c) in self.complements.iter().enumerate() {
            match cover.space().dist_to_set(y, c) {
                Extended::Finite(d) => {
                    if d.is_positive() {
                        total = &total + &d;
                        codist.push((i as VertIx, d));
                    }
                }
                Extended::Infinite => unreachable!("full sets were peeled off"),
            }
        }
        if total.is_zero() {
            return Err(Error::ZeroDenominator {
                point: cover.space().label(y).to_string(),
            });
        }
        let coords: BTreeMap<VertIx, Q> = codist
            .into_iter()
            .map(|(v, d)| (v, &d / &total))
            .collect();
        Ok(NervePoint { coords })
    }
}

/// Barycentric coordinates proportional to the distance from `y` to
/// each set's complement. Zero exactly on the sets not containing `y`,
/// so the support consists of sets containing `y` and is a simplex of
/// the nerve.
pub fn psi_map(cover: &Cover, y: PointIx) -> Result<NervePoint, Error> {
    PsiCtx::new(cover).psi_at(cover, y)
}

/// `psi_map` at every point of the carrier space.
pub fn psi_table(cover: &Cover) -> Result<Vec<NervePoint>, Error> {
    let ctx = PsiCtx::new(cover);
    (0..cover.space().len() as PointIx)
        .into_par_iter()
        .map(|y| ctx.psi_at(cover, y))
        .collect()
}

/// Exhaustive Lipschitz check for psi on a cover of a group-times-set
/// enumeration: for every pair of window elements over the same base
/// point, the ℓ¹ displacement is at most `2(N+1)(2N+3)/R` times their
/// distance, and each single coordinate moves at most `(2N+3)/R`
/// times it. The distances come from the carrier space's own metric,
/// whose restriction to same-base-point pairs is the group metric once
/// `validate_product_metric` has passed.
///
/// Preconditions re-verified here: multiplicity at most `N+1`, and
/// every point has a set containing its open `R`-ball.
pub fn verify_psi_lipschitz(
    aw: &ActionWindow,
    cover: &Cover,
    n_cap: u32,
    r: &Q,
) -> Result<Report, Error> {
    if !r.is_positive() {
        return Err(Error::input("fatness radius must be positive"));
    }
    if cover.space().labels() != aw.pair_labels().as_slice() {
        return Err(Error::input(
            "cover does not enumerate the window-times-set product",
        ));
    }
    let ctx = PsiCtx::new(cover);
    for p in 0..cover.space().len() as PointIx {
        let mult = cover.sets_containing(p).len() as u32;
        if mult > n_cap + 1 {
            return Err(Error::PreconditionFailed {
                detail: format!(
                    "point {} lies in {mult} sets; dimension cap {n_cap} allows {}",
                    cover.space().label(p),
                    n_cap + 1
                ),
            });
        }
        let fat = ctx.complements.iter().any(|c| {
            match cover.space().dist_to_set(p, c) {
                Extended::Infinite => true,
                Extended::Finite(d) => &d >= r,
            }
        });
        if !fat {
            return Err(Error::PreconditionFailed {
                detail: format!(
                    "no set contains the open {r}-ball around {}",
                    cover.space().label(p)
                ),
            });
        }
    }

    let psi: Vec<NervePoint> = (0..cover.space().len() as PointIx)
        .into_par_iter()
        .map(|y| ctx.psi_at(cover, y))
        .collect::<Result<_, _>>()?;

    let pair_factor = &Q::from_int(2 * (n_cap as i64 + 1) * (2 * n_cap as i64 + 3)) / r;
    let coord_factor = &Q::from_int(2 * n_cap as i64 + 3) / r;
    let mut report = Report::new();
    let mut sharpest: Option<Q> = None;
    let nw = aw.window().len() as ElemIx;
    for x in 0..aw.x_len() as PointIx {
        for g in 0..nw {
            for h in (g + 1)..nw {
                let p = aw.pair_index(g, x);
                let q = aw.pair_index(h, x);
                let dist = cover.space().dist(p, q);
                let lhs = l1_distance(&psi[p as usize], &psi[q as usize]);
                if dist.is_zero() {
                    if !lhs.is_zero() {
                        report.violation(
                            "lipschitz",
                            format!(
                                "{} and {} coincide but psi differs",
                                cover.space().label(p),
                                cover.space().label(q)
                            ),
                        );
                    }
                    continue;
                }
                if lhs > &pair_factor * &dist {
                    if report.violations.len() < MAX_FINDINGS {
                        report.violation(
                            "lipschitz",
                            format!(
                                "d1(psi({}), psi({})) = {lhs} exceeds {pair_factor} * {dist}",
                                cover.space().label(p),
                                cover.space().label(q)
                            ),
                        );
                    }
                } else {
                    let ratio = &lhs / &dist;
                    if sharpest.as_ref().map_or(true, |s| &ratio > s) {
                        sharpest = Some(ratio);
                    }
                }
                // coordinatewise bound over the union of supports
                let budget = &coord_factor * &dist;
                let verts: BTreeSet<VertIx> = psi[p as usize]
                    .support()
                    .into_iter()
                    .chain(psi[q as usize].support())
                    .collect();
                for v in verts {
                    let zero = Q::from_int(0);
                    let a = psi[p as usize].coord(v).unwrap_or(&zero);
                    let b = psi[q as usize].coord(v).unwrap_or(&zero);
                    let diff = if a >= b { a - b } else { b - a };
                    if diff > budget && report.violations.len() < MAX_FINDINGS {
                        report.violation(
                            "lipschitz-coordinate",
                            format!(
                                "coordinate {} moves by {diff} between {} and {}, over {budget}",
                                cover.sets()[v as usize].name,
                                cover.space().label(p),
                                cover.space().label(q)
                            ),
                        );
                    }
                }
            }
        }
    }
    if let Some(s) = sharpest {
        report.caveat(format!(
            "sharpest observed ratio {s} against allowed {pair_factor}"
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// simplicial group actions

/// A group window acting on a complex through a partial vertex table.
#[derive(Debug, Clone)]
pub struct SimplicialAction {
    complex: UniformComplex,
    window: Arc<GroupWindow>,
    /// `vertex_action[g * nv + v]`
    vertex_action: Vec<Option<VertIx>>,
}

impl SimplicialAction {
    pub fn new(
        complex: UniformComplex,
        window: Arc<GroupWindow>,
        vertex_action: Vec<Option<VertIx>>,
    ) -> Result<Self, Error> {
        let nv = complex.vertex_count();
        if vertex_action.len() != window.len() * nv {
            return Err(Error::format(format!(
                "vertex action has {} entries for a {} x {nv} grid",
                vertex_action.len(),
                window.len()
            )));
        }
        if let Some(bad) = vertex_action.iter().flatten().find(|&&v| v as usize >= nv) {
            return Err(Error::format(format!(
                "vertex action value {bad} outside the complex"
            )));
        }
        for v in 0..nv {
            match vertex_action[window.identity() as usize * nv + v] {
                Some(w) if w as usize == v => {}
                _ => {
                    return Err(Error::format(format!(
                        "identity must fix vertex {:?}",
                        complex.label(v as VertIx)
                    )))
                }
            }
        }
        Ok(SimplicialAction {
            complex,
            window,
            vertex_action,
        })
    }

    /// Identity action of the window on the complex.
    pub fn trivial(complex: UniformComplex, window: Arc<GroupWindow>) -> Self {
        let nv = complex.vertex_count();
        let vertex_action = (0..window.len() * nv)
            .map(|k| Some((k % nv) as VertIx))
            .collect();
        SimplicialAction {
            complex,
            window,
            vertex_action,
        }
    }

    pub fn complex(&self) -> &UniformComplex {
        &self.complex
    }

    pub fn window(&self) -> &Arc<GroupWindow> {
        &self.window
    }

    pub fn act_vertex(&self, g: ElemIx, v: VertIx) -> Option<VertIx> {
        self.vertex_action[g as usize * self.complex.vertex_count() + v as usize]
    }

    /// Affine extension to barycentric coordinates: mass at `v` lands
    /// on `g·v`. Undefined support vertices make the result
    /// uncertifiable.
    pub fn act_point(&self, g: ElemIx, p: &NervePoint) -> Result<NervePoint, Error> {
        let mut coords: BTreeMap<VertIx, Q> = BTreeMap::new();
        for (&v, c) in p.iter() {
            let Some(w) = self.act_vertex(g, v) else {
                return Err(Error::Uncertified {
                    detail: format!(
                        "action of {} on vertex {:?} unknown",
                        self.window.label(g),
                        self.complex.label(v)
                    ),
                });
            };
            let entry = coords.entry(w).or_insert_with(|| Q::from_int(0));
            *entry = &*entry + c;
        }
        let out = NervePoint { coords };
        if !self.complex.is_simplex(&out.support()) {
            return Err(Error::input(format!(
                "{} maps a support onto a vertex set that is not a simplex",
                self.window.label(g)
            )));
        }
        Ok(out)
    }
}

/// Structural checks for a simplicial action: images of simplices are
/// simplices, each element acts injectively where known, the action is
/// compatible with the window's multiplication, and a sample of
/// realization points confirms the ℓ¹ distance is preserved.
pub fn validate_simplicial_action(sa: &SimplicialAction) -> Report {
    let mut report = Report::new();
    let w = &sa.window;
    let nv = sa.complex.vertex_count();
    let mut unchecked: u64 = 0;

    for g in 0..w.len() as ElemIx {
        let mut seen: HashMap<VertIx, VertIx> = HashMap::new();
        for v in 0..nv as VertIx {
            let Some(img) = sa.act_vertex(g, v) else {
                unchecked += 1;
                continue;
            };
            if let Some(&prev) = seen.get(&img) {
                report.violation(
                    "injective",
                    format!(
                        "{} sends both {:?} and {:?} to {:?}",
                        w.label(g),
                        sa.complex.label(prev),
                        sa.complex.label(v),
                        sa.complex.label(img)
                    ),
                );
            } else {
                seen.insert(img, v);
            }
        }
    }

    for g in 0..w.len() as ElemIx {
        for sigma in sa.complex.simplices() {
            let image: Option<BTreeSet<VertIx>> =
                sigma.iter().map(|&v| sa.act_vertex(g, v)).collect();
            match image {
                Some(img) => {
                    let img: Vec<VertIx> = img.into_iter().collect();
                    if !sa.complex.is_simplex(&img) && report.violations.len() < MAX_FINDINGS {
                        let names: Vec<&str> =
                            sigma.iter().map(|&v| sa.complex.label(v)).collect();
                        report.violation(
                            "simplicial",
                            format!(
                                "{} maps simplex {{{}}} outside the complex",
                                w.label(g),
                                names.join(", ")
                            ),
                        );
                    }
                }
                None => unchecked += 1,
            }
        }
    }

    for g in 0..w.len() as ElemIx {
        for h in 0..w.len() as ElemIx {
            let Some(k) = w.mul(g, h) else {
                unchecked += nv as u64;
                continue;
            };
            for v in 0..nv as VertIx {
                let via = sa.act_vertex(h, v).and_then(|u| sa.act_vertex(g, u));
                let direct = sa.act_vertex(k, v);
                match (direct, via) {
                    (Some(a), Some(b)) if a != b => {
                        if report.violations.len() < MAX_FINDINGS {
                            report.violation(
                                "compatibility",
                                format!(
                                    "({}*{})·{:?} disagrees with {}·({}·{:?})",
                                    w.label(g),
                                    w.label(h),
                                    sa.complex.label(v),
                                    w.label(g),
                                    w.label(h),
                                    sa.complex.label(v)
                                ),
                            );
                        }
                    }
                    (Some(_), Some(_)) => {}
                    _ => unchecked += 1,
                }
            }
        }
    }

    // sample isometry: vertices and barycenters of a few simplices
    let samples: Vec<NervePoint> = sa
        .complex
        .simplices()
        .take(8)
        .filter_map(|s| NervePoint::barycenter(s).ok())
        .collect();
    for g in 0..w.len() as ElemIx {
        for i in 0..samples.len() {
            for j in (i + 1)..samples.len() {
                let (Ok(a), Ok(b)) = (
                    sa.act_point(g, &samples[i]),
                    sa.act_point(g, &samples[j]),
                ) else {
                    unchecked += 1;
                    continue;
                };
                let before = l1_distance(&samples[i], &samples[j]);
                let after = l1_distance(&a, &b);
                if before != after && report.violations.len() < MAX_FINDINGS {
                    report.violation(
                        "isometry",
                        format!(
                            "{} changes an ℓ¹ distance from {before} to {after}",
                            w.label(g)
                        ),
                    );
                }
            }
        }
    }

    if unchecked > 0 {
        report.caveat(format!(
            "{unchecked} action values or compositions unknown inside the window"
        ));
    }
    report
}

// ---------------------------------------------------------------------------
// equivariance up to an error budget

/// A map from a finite group-space to a complex carrying a simplicial
/// action, together with the error budget and the word norms that
/// price it.
#[derive(Debug, Clone)]
pub struct EquivariantMapWindow {
    pub domain: ActionWindow,
    pub target: SimplicialAction,
    /// image of each domain point, indexed like the domain's labels
    pub f: Vec<NervePoint>,
    pub epsilon: Q,
    pub norms: WordMetricTable,
}

impl EquivariantMapWindow {
    pub fn new(
        domain: ActionWindow,
        target: SimplicialAction,
        f: Vec<NervePoint>,
        epsilon: Q,
        norms: WordMetricTable,
    ) -> Result<Self, Error> {
        if epsilon.is_negative() {
            return Err(Error::input("error budget must be nonnegative"));
        }
        if f.len() != domain.x_len() {
            return Err(Error::input(format!(
                "map table has {} entries for {} points",
                f.len(),
                domain.x_len()
            )));
        }
        if domain.window().labels() != target.window().labels()
            || domain.window().labels() != norms.window().labels()
        {
            return Err(Error::input(
                "domain action, target action, and norm table must share one window",
            ));
        }
        for (x, p) in f.iter().enumerate() {
            p.validate_in(target.complex()).map_err(|e| {
                Error::input(format!(
                    "image of {:?}: {e}",
                    domain.x_label(x as PointIx)
                ))
            })?;
        }
        Ok(EquivariantMapWindow {
            domain,
            target,
            f,
            epsilon,
            norms,
        })
    }
}

/// Verdicts of the two equivariance tests: all window elements priced
/// by their word norm, and generators alone priced by their weights.
#[derive(Debug, Clone)]
pub struct EquivarianceOutcome {
    pub global: Verdict,
    pub generator: Verdict,
    pub report: Report,
}

/// Compare `f(g·x)` with `g·f(x)` in ℓ¹ against the budget
/// `epsilon * ‖g‖` for every pair the window certifies, and against
/// `epsilon * weight(s)` for generators. Pairs with an unknown norm,
/// action value, or vertex image are skipped and downgrade a clean
/// verdict to `Uncertified`.
pub fn check_equivariance_up_to(m: &EquivariantMapWindow) -> EquivarianceOutcome {
    let mut report = Report::new();
    let w = m.domain.window();

    let run = |pairs: &[(ElemIx, Q)], check: &str, report: &mut Report| -> Verdict {
        let mut skipped: u64 = 0;
        let mut verdict = Verdict::Pass;
        for (g, price) in pairs {
            for x in 0..m.domain.x_len() as PointIx {
                let Some(gx) = m.domain.act(*g, x) else {
                    skipped += 1;
                    continue;
                };
                let Ok(moved) = m.target.act_point(*g, &m.f[x as usize]) else {
                    skipped += 1;
                    continue;
                };
                let lhs = l1_distance(&m.f[gx as usize], &moved);
                let budget = &m.epsilon * price;
                if lhs > budget {
                    let detail = format!(
                        "d1(f({}·{}), {}·f({})) = {lhs} over budget {budget}",
                        w.label(*g),
                        m.domain.x_label(x),
                        w.label(*g),
                        m.domain.x_label(x)
                    );
                    if report.violations.len() < MAX_FINDINGS {
                        report.violation(check, detail.clone());
                    }
                    if !verdict.is_fail() {
                        verdict = Verdict::fail(check, detail);
                    }
                }
            }
        }
        if skipped > 0 {
            report.caveat(format!("{check}: {skipped} pairs not certifiable"));
            verdict = verdict.and(Verdict::uncertified(format!(
                "{skipped} pairs not certifiable in the window"
            )));
        }
        verdict
    };

    let global_pairs: Vec<(ElemIx, Q)> = (0..w.len() as ElemIx)
        .filter_map(|g| m.norms.norm(g).map(|n| (g, n.clone())))
        .collect();
    let priced = global_pairs.len();
    let mut global = run(&global_pairs, "equivariance", &mut report);
    if priced < w.len() {
        let missing = w.len() - priced;
        report.caveat(format!("equivariance: {missing} elements have uncertified norms"));
        global = global.and(Verdict::uncertified(format!(
            "{missing} elements have uncertified norms"
        )));
    }

    let gen_pairs: Vec<(ElemIx, Q)> = w.gens().to_vec();
    let generator = run(&gen_pairs, "generator", &mut report);

    EquivarianceOutcome {
        global,
        generator,
        report,
    }
}

// ---------------------------------------------------------------------------
// orbit maps and star pullbacks

/// The orbit map of a base point: `g ↦ g·f(g⁻¹·x)`, total on the
/// window, with its internal Lipschitz audit.
#[derive(Debug, Clone)]
pub struct PhiMap {
    pub x: PointIx,
    /// indexed by window element
    pub table: Vec<NervePoint>,
    pub report: Report,
}

/// Build the orbit map at `x` and audit it: every pair with a
/// certified word distance must satisfy
/// `d1(phi(g), phi(h)) <= epsilon * d_W(g, h)`. Any required action
/// value missing from the window aborts with `Uncertified`.
pub fn phi_map(m: &EquivariantMapWindow, x: PointIx) -> Result<PhiMap, Error> {
    let w = m.domain.window();
    let mut table = Vec::with_capacity(w.len());
    for g in 0..w.len() as ElemIx {
        let gi = w.inv(g);
        let Some(y) = m.domain.act(gi, x) else {
            return Err(Error::Uncertified {
                detail: format!(
                    "{}⁻¹ · {} leaves the window",
                    w.label(g),
                    m.domain.x_label(x)
                ),
            });
        };
        table.push(m.target.act_point(g, &m.f[y as usize])?);
    }

    let mut report = Report::new();
    let mut unpriced: u64 = 0;
    for g in 0..w.len() as ElemIx {
        for h in (g + 1)..w.len() as ElemIx {
            match m.norms.word_distance(g, h) {
                Ok(d) => {
                    let lhs = l1_distance(&table[g as usize], &table[h as usize]);
                    let budget = &m.epsilon * &d;
                    if lhs > budget && report.violations.len() < MAX_FINDINGS {
                        report.violation(
                            "orbit-lipschitz",
                            format!(
                                "d1(phi({}), phi({})) = {lhs} over budget {budget}",
                                w.label(g),
                                w.label(h)
                            ),
                        );
                    }
                }
                Err(_) => unpriced += 1,
            }
        }
    }
    if unpriced > 0 {
        report.caveat(format!("{unpriced} pairs have uncertified word distance"));
    }
    Ok(PhiMap { x, table, report })
}

/// Elements whose orbit-map value touches the open star of `v`.
pub fn star_pullback(phi: &PhiMap, v: VertIx) -> Vec<ElemIx> {
    phi.table
        .iter()
        .enumerate()
        .filter(|(_, p)| p.coord(v).is_some())
        .map(|(g, _)| g as ElemIx)
        .collect()
}

/// Certify that the star pullback at `v` sits inside a union of
/// stabilizer cosets, one per vertex in the image of `f`: for each
/// image vertex `w` with a transporter to `v`, take its word-norm-least
/// transporter as coset representative (ties broken by label) and the
/// stabilizer of `w` as the subgroup. Window gaps surface as
/// `Uncertified`, never as a pass.
pub fn check_star_containment(m: &EquivariantMapWindow, phi: &PhiMap, v: VertIx) -> Verdict {
    let w = m.domain.window();
    let image_vertices: BTreeSet<VertIx> =
        m.f.iter().flat_map(|p| p.support()).collect();

    struct Coset {
        rep: ElemIx,
        stab: Vec<ElemIx>,
        gaps: bool,
    }
    let mut cosets: Vec<Coset> = Vec::new();
    let mut any_gaps = false;
    for &iv in &image_vertices {
        let mut transporter: Vec<ElemIx> = Vec::new();
        let mut stab: Vec<ElemIx> = Vec::new();
        let mut gaps = false;
        for h in 0..w.len() as ElemIx {
            match m.target.act_vertex(h, iv) {
                Some(t) => {
                    if t == v {
                        transporter.push(h);
                    }
                    if t == iv {
                        stab.push(h);
                    }
                }
                None => gaps = true,
            }
        }
        any_gaps |= gaps;
        let rep = transporter.into_iter().min_by_key(|&h| {
            let norm = m.norms.norm(h);
            (norm.is_none(), norm.cloned(), w.label(h).to_string())
        });
        if let Some(rep) = rep {
            cosets.push(Coset { rep, stab, gaps });
        }
    }

    let mut verdict = Verdict::Pass;
    for g in star_pullback(phi, v) {
        let mut certified = false;
        let mut unknown = any_gaps;
        for c in &cosets {
            match w.mul(w.inv(c.rep), g) {
                Some(d) if c.stab.contains(&d) => {
                    certified = true;
                    break;
                }
                Some(_) => {}
                None => unknown = true,
            }
            unknown |= c.gaps;
        }
        if certified {
            continue;
        }
        if unknown {
            verdict = verdict.and(Verdict::uncertified(format!(
                "membership of {} not decidable inside the window",
                w.label(g)
            )));
        } else {
            return Verdict::fail(
                "star-containment",
                format!(
                    "{} pulls back the star of {:?} but lies in no stabilizer coset",
                    w.label(g),
                    m.target.complex().label(v)
                ),
            );
        }
    }
    verdict
}

// ---------------------------------------------------------------------------
// product metrics

/// Check the two properties a metric on the window-times-set
/// enumeration must have before psi arguments go through: invariance
/// under the diagonal action where the window can compute it, and
/// agreement with the word metric along each fiber.
pub fn validate_product_metric(
    aw: &ActionWindow,
    product: &FiniteMetricSpace,
    norms: &WordMetricTable,
) -> Report {
    let mut report = Report::new();
    if product.labels() != aw.pair_labels().as_slice() {
        report.violation(
            "enumeration",
            "metric labels do not enumerate the window-times-set product in order",
        );
        return report;
    }
    let mut unchecked: u64 = 0;

    let nw = aw.window().len() as ElemIx;
    for x in 0..aw.x_len() as PointIx {
        for g in 0..nw {
            for h in (g + 1)..nw {
                match norms.word_distance(g, h) {
                    Ok(expect) => {
                        let got = product.dist(aw.pair_index(g, x), aw.pair_index(h, x));
                        if got != expect && report.violations.len() < MAX_FINDINGS {
                            report.violation(
                                "restriction",
                                format!(
                                    "d({}, {}) = {got} but the word metric gives {expect}",
                                    product.label(aw.pair_index(g, x)),
                                    product.label(aw.pair_index(h, x))
                                ),
                            );
                        }
                    }
                    Err(_) => unchecked += 1,
                }
            }
        }
    }

    let np = aw.pair_count() as PointIx;
    for k in 0..nw {
        for p in 0..np {
            for q in (p + 1)..np {
                match (aw.diagonal_act(k, p), aw.diagonal_act(k, q)) {
                    (Some(kp), Some(kq)) => {
                        let before = product.dist(p, q);
                        let after = product.dist(kp, kq);
                        if before != after && report.violations.len() < MAX_FINDINGS {
                            report.violation(
                                "invariance",
                                format!(
                                    "{} moves d({}, {}) from {before} to {after}",
                                    aw.window().label(k),
                                    product.label(p),
                                    product.label(q)
                                ),
                            );
                        }
                    }
                    _ => unchecked += 1,
                }
            }
        }
    }
    if unchecked > 0 {
        report.caveat(format!(
            "{unchecked} distances or pairs not checkable inside the window"
        ));
    }
    report
}

/// Exact equivariance of psi: `psi(k·y) = k·psi(y)` whenever the
/// diagonal action is defined and the nerve action can move the value.
pub fn check_psi_equivariance(
    aw: &ActionWindow,
    cover: &Cover,
    nerve_action: &SimplicialAction,
) -> Result<Report, Error> {
    if cover.space().labels() != aw.pair_labels().as_slice() {
        return Err(Error::input(
            "cover does not enumerate the window-times-set product",
        ));
    }
    if nerve_action.complex().vertex_count() != cover.sets().len() {
        return Err(Error::input(
            "nerve action lives on a different vertex set than the cover",
        ));
    }
    let psi = psi_table(cover)?;
    let mut report = Report::new();
    let mut unchecked: u64 = 0;
    for k in 0..aw.window().len() as ElemIx {
        for p in 0..aw.pair_count() as PointIx {
            let Some(kp) = aw.diagonal_act(k, p) else {
                unchecked += 1;
                continue;
            };
            let moved = match nerve_action.act_point(k, &psi[p as usize]) {
                Ok(m) => m,
                Err(_) => {
                    unchecked += 1;
                    continue;
                }
            };
            if moved != psi[kp as usize] && report.violations.len() < MAX_FINDINGS {
                report.violation(
                    "psi-equivariance",
                    format!(
                        "psi({}) ≠ {}·psi({})",
                        cover.space().label(kp),
                        aw.window().label(k),
                        cover.space().label(p)
                    ),
                );
            }
        }
    }
    if unchecked > 0 {
        report.caveat(format!(
            "{unchecked} pairs not checkable inside the window"
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::NamedSet;
    use crate::group::{cyclic_window, word_norms_auto, z_window};
    use crate::testutil::path_space;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn triangle() -> UniformComplex {
        UniformComplex::from_maximal(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn closure_of_a_triangle() {
        let t = triangle();
        assert_eq!(t.simplex_count(), 7);
        assert_eq!(t.dim(), 2);
        assert!(t.is_simplex(&[0, 2]));
        assert!(t.is_simplex(&[1]));
        assert_eq!(t.maximal_simplices(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn l1_basics() {
        let t = triangle();
        let a = NervePoint::vertex(0);
        let b = NervePoint::vertex(1);
        let mid = NervePoint::barycenter(&[0, 1]).unwrap();
        a.validate_in(&t).unwrap();
        mid.validate_in(&t).unwrap();
        assert_eq!(l1_distance(&a, &a), q("0"));
        assert_eq!(l1_distance(&a, &b), q("2"));
        assert_eq!(l1_distance(&a, &mid), q("1"));
    }

    #[test]
    fn nerve_point_validation() {
        let mut coords = BTreeMap::new();
        coords.insert(0, q("1/3"));
        coords.insert(1, q("2/3"));
        let p = NervePoint::new(coords).unwrap();
        assert_eq!(p.support(), vec![0, 1]);

        let mut bad = BTreeMap::new();
        bad.insert(0, q("1/2"));
        assert!(NervePoint::new(bad).is_err());

        let mut neg = BTreeMap::new();
        neg.insert(0, q("3/2"));
        neg.insert(1, q("-1/2"));
        assert!(NervePoint::new(neg).is_err());

        // support must be a simplex of the ambient complex
        let hollow = UniformComplex::from_maximal(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let center = NervePoint::barycenter(&[0, 1, 2]).unwrap();
        assert!(center.validate_in(&hollow).is_err());
        assert!(center.validate_in(&triangle()).is_ok());
    }

    fn p10_cover() -> Cover {
        let space = path_space("P10", 10);
        let a: PointSet = (0..6).collect();
        let b: PointSet = (4..10).collect();
        Cover::new(
            Arc::clone(&space),
            vec![NamedSet::new("A", a), NamedSet::new("B", b)],
        )
        .unwrap()
    }

    #[test]
    fn nerve_shapes() {
        let space = path_space("P10", 10);
        let single = Cover::new(
            Arc::clone(&space),
            vec![NamedSet::new("all", (0..10).collect())],
        )
        .unwrap();
        let n = nerve_of_cover(&single).unwrap();
        assert_eq!(n.vertex_count(), 1);
        assert_eq!(n.dim(), 0);

        let n = nerve_of_cover(&p10_cover()).unwrap();
        assert_eq!(n.vertex_count(), 2);
        assert_eq!(n.dim(), 1);
        assert!(n.is_simplex(&[0, 1]));

        // pairwise meeting, empty triple intersection: hollow triangle
        let a: PointSet = (0..5).chain(std::iter::once(9)).collect();
        let b: PointSet = (3..8).collect();
        let c: PointSet = (6..10).collect();
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                NamedSet::new("A", a),
                NamedSet::new("B", b),
                NamedSet::new("C", c),
            ],
        )
        .unwrap();
        let n = nerve_of_cover(&cover).unwrap();
        assert_eq!(n.dim(), 1);
        assert!(n.is_simplex(&[0, 1]));
        assert!(n.is_simplex(&[1, 2]));
        assert!(n.is_simplex(&[0, 2]));
        assert!(!n.is_simplex(&[0, 1, 2]));

        // dimension tracks multiplicity
        let stats = crate::decomp::cover_stats(&cover, &[]);
        assert_eq!(n.dim() as u32, stats.multiplicity - 1);
    }

    #[test]
    fn nerve_rejects_empty_sets() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                NamedSet::new("all", (0..10).collect()),
                NamedSet::new("none", PointSet::empty()),
            ],
        )
        .unwrap();
        assert!(nerve_of_cover(&cover).is_err());
    }

    #[test]
    fn psi_on_the_two_interval_cover() {
        let cover = p10_cover();
        // frozen: co-distances at 4 are 2 (to {6..9}) and 1 (to {0..3})
        let p = psi_map(&cover, 4).unwrap();
        assert_eq!(p.coord(0), Some(&q("2/3")));
        assert_eq!(p.coord(1), Some(&q("1/3")));

        // a point deep inside exactly one set maps to that vertex
        let p = psi_map(&cover, 0).unwrap();
        assert_eq!(p, NervePoint::vertex(0));

        // support is a simplex of the nerve made of sets containing y
        let nerve = nerve_of_cover(&cover).unwrap();
        for y in 0..10 {
            let p = psi_map(&cover, y).unwrap();
            p.validate_in(&nerve).unwrap();
            for v in p.support() {
                assert!(cover.sets()[v as usize].points.contains(y));
            }
        }
    }

    #[test]
    fn psi_with_whole_space_sets() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                NamedSet::new("all", (0..10).collect()),
                NamedSet::new("half", (0..5).collect()),
            ],
        )
        .unwrap();
        for y in 0..10 {
            assert_eq!(psi_map(&cover, y).unwrap(), NervePoint::vertex(0));
        }
    }

    #[test]
    fn psi_zero_denominator_on_a_non_cover() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![NamedSet::new("partial", (0..9).collect())],
        )
        .unwrap();
        match psi_map(&cover, 9) {
            Err(Error::ZeroDenominator { point }) => assert_eq!(point, "9"),
            other => panic!("expected zero denominator, got {other:?}"),
        }
    }

    /// Z window [-5,5] acting trivially on one point, with the word
    /// metric as the product metric and a two-interval cover.
    fn z_line_fixture() -> (ActionWindow, Cover, Arc<FiniteMetricSpace>) {
        let w = Arc::new(z_window(5, &[1], &[q("1")]).unwrap());
        let aw = ActionWindow::trivial(Arc::clone(&w), vec!["pt".into()]).unwrap();
        let labels = aw.pair_labels();
        let matrix: Vec<Vec<Q>> = (-5..=5)
            .map(|i: i64| (-5..=5).map(|j: i64| Q::from_int((i - j).abs())).collect())
            .collect();
        let product =
            Arc::new(FiniteMetricSpace::new_dense("ZxPt", labels, matrix).unwrap());
        // value i sits at index i + 5
        let u: PointSet = (0..=6).collect();
        let v: PointSet = (4..=10).collect();
        let cover = Cover::new(
            Arc::clone(&product),
            vec![NamedSet::new("U", u), NamedSet::new("V", v)],
        )
        .unwrap();
        (aw, cover, product)
    }

    #[test]
    fn psi_lipschitz_on_the_z_line() {
        let (aw, cover, _) = z_line_fixture();
        let report = verify_psi_lipschitz(&aw, &cover, 1, &q("2")).unwrap();
        assert!(report.passed(), "{report}");
        // frozen: the sharpest pair moves 1/2 per unit distance
        assert!(
            report.caveats.iter().any(|c| c.contains("ratio 1/2")),
            "{report}"
        );
    }

    #[test]
    fn psi_lipschitz_preconditions() {
        let (aw, cover, _) = z_line_fixture();
        // radius 3 exceeds the fatness of the midpoint
        match verify_psi_lipschitz(&aw, &cover, 1, &q("3")) {
            Err(Error::PreconditionFailed { detail }) => {
                assert!(detail.contains("0,pt"), "{detail}");
            }
            other => panic!("expected fatness failure, got {other:?}"),
        }
        // multiplicity 2 breaks the N = 0 cap
        match verify_psi_lipschitz(&aw, &cover, 0, &q("2")) {
            Err(Error::PreconditionFailed { detail }) => {
                assert!(detail.contains("2 sets"), "{detail}");
            }
            other => panic!("expected multiplicity failure, got {other:?}"),
        }
    }

    /// Hexagon with Z/6 rotating it; vertex labels match the group's.
    fn hexagon_action() -> SimplicialAction {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let labels: Vec<String> = (0..6).map(|v| format!("h{v}")).collect();
        let maximal: Vec<Vec<VertIx>> = (0..6).map(|v| vec![v, (v + 1) % 6]).collect();
        let complex = UniformComplex::from_maximal(labels, &maximal).unwrap();
        let table: Vec<Option<VertIx>> = (0..6u32)
            .flat_map(|g| (0..6u32).map(move |v| Some((g + v) % 6)))
            .collect();
        SimplicialAction::new(complex, w, table).unwrap()
    }

    #[test]
    fn hexagon_rotation_validates() {
        let sa = hexagon_action();
        let report = validate_simplicial_action(&sa);
        assert!(report.passed(), "{report}");
        assert!(report.caveats.is_empty());
    }

    #[test]
    fn action_moves_points_isometrically() {
        let sa = hexagon_action();
        let mid = NervePoint::barycenter(&[0, 1]).unwrap();
        let g = 2;
        let moved = sa.act_point(g, &mid).unwrap();
        assert_eq!(moved, NervePoint::barycenter(&[2, 3]).unwrap());
        let v = sa.act_point(g, &NervePoint::vertex(0)).unwrap();
        assert_eq!(l1_distance(&v, &moved), l1_distance(&NervePoint::vertex(0), &mid));
    }

    #[test]
    fn broken_rotation_is_caught() {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let labels: Vec<String> = (0..6).map(|v| format!("h{v}")).collect();
        let maximal: Vec<Vec<VertIx>> = (0..6).map(|v| vec![v, (v + 1) % 6]).collect();
        let complex = UniformComplex::from_maximal(labels, &maximal).unwrap();
        let mut table: Vec<Option<VertIx>> = (0..6u32)
            .flat_map(|g| (0..6u32).map(move |v| Some((g + v) % 6)))
            .collect();
        // rotation by 1 now tears the edge {h0, h1}
        table[6] = Some(3);
        let sa = SimplicialAction::new(complex, w, table).unwrap();
        let report = validate_simplicial_action(&sa);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "simplicial" || v.check == "injective"));
    }

    /// Z/6 translating itself, mapped onto the rotating hexagon by
    /// matching labels. Exactly equivariant.
    fn regular_hexagon_map(epsilon: Q) -> EquivariantMapWindow {
        let sa = hexagon_action();
        let domain = ActionWindow::left_translation(Arc::clone(sa.window())).unwrap();
        let f: Vec<NervePoint> = (0..6).map(NervePoint::vertex).collect();
        let norms = word_norms_auto(sa.window());
        EquivariantMapWindow::new(domain, sa, f, epsilon, norms).unwrap()
    }

    #[test]
    fn exact_equivariance_passes_at_zero() {
        let m = regular_hexagon_map(q("0"));
        let out = check_equivariance_up_to(&m);
        assert!(out.global.is_pass(), "{}", out.report);
        assert!(out.generator.is_pass());
        assert!(out.report.caveats.is_empty());
    }

    #[test]
    fn tampered_map_fails_both_checks() {
        let mut m = regular_hexagon_map(q("0"));
        m.f[3] = NervePoint::vertex(4);
        let out = check_equivariance_up_to(&m);
        assert!(out.global.is_fail());
        assert!(out.generator.is_fail());
    }

    #[test]
    fn small_window_leaves_global_uncertified() {
        // one-vertex target: any map is exactly equivariant, but with
        // norms certified only up to 3, the far elements are unpriced
        let w = Arc::new(z_window(5, &[1], &[q("1")]).unwrap());
        let complex =
            UniformComplex::from_maximal(vec!["v".into()], &[vec![0]]).unwrap();
        let target = SimplicialAction::trivial(complex, Arc::clone(&w));
        let domain = ActionWindow::trivial(Arc::clone(&w), vec!["pt".into()]).unwrap();
        let norms = crate::group::word_norms(&w, q("3")).unwrap();
        let m = EquivariantMapWindow::new(
            domain,
            target,
            vec![NervePoint::vertex(0)],
            q("0"),
            norms,
        )
        .unwrap();
        let out = check_equivariance_up_to(&m);
        assert!(out.global.is_uncertified(), "{:?}", out.global);
        assert!(out.generator.is_pass());
    }

    #[test]
    fn orbit_map_of_an_exact_map_is_constant() {
        let m = regular_hexagon_map(q("0"));
        let phi = phi_map(&m, 2).unwrap();
        assert!(phi.report.passed(), "{}", phi.report);
        for g in 0..6 {
            assert_eq!(phi.table[g], NervePoint::vertex(2));
        }
        assert_eq!(star_pullback(&phi, 2), (0..6).collect::<Vec<_>>());
        assert!(star_pullback(&phi, 0).is_empty());
    }

    #[test]
    fn tampered_orbit_map_reports_a_pair() {
        let mut m = regular_hexagon_map(q("0"));
        m.f[3] = NervePoint::vertex(4);
        let phi = phi_map(&m, 0).unwrap();
        assert!(!phi.report.passed());
        assert_eq!(phi.report.violations[0].check, "orbit-lipschitz");
    }

    /// Z/6 spinning a triangle: stabilizers have order two, so star
    /// pullbacks are genuine two-element cosets.
    fn triangle_spin_map() -> EquivariantMapWindow {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let labels: Vec<String> = (0..3).map(|v| format!("t{v}")).collect();
        let complex = UniformComplex::from_maximal(labels, &[vec![0, 1, 2]]).unwrap();
        let table: Vec<Option<VertIx>> = (0..6u32)
            .flat_map(|g| (0..3u32).map(move |v| Some((g + v) % 3)))
            .collect();
        let target = SimplicialAction::new(complex, Arc::clone(&w), table).unwrap();
        assert!(validate_simplicial_action(&target).passed());
        let domain = ActionWindow::trivial(Arc::clone(&w), vec!["pt".into()]).unwrap();
        let norms = word_norms_auto(&w);
        // moving the single point by g costs d1 <= 2 <= 2 * ||g||
        EquivariantMapWindow::new(
            domain,
            target,
            vec![NervePoint::vertex(0)],
            q("2"),
            norms,
        )
        .unwrap()
    }

    #[test]
    fn star_pullback_is_a_stabilizer_coset() {
        let m = triangle_spin_map();
        let out = check_equivariance_up_to(&m);
        assert!(out.global.is_pass(), "{}", out.report);
        let phi = phi_map(&m, 0).unwrap();
        assert!(phi.report.passed(), "{}", phi.report);
        // phi(g) = vertex g mod 3, so the pullback of t1 is {1, 4}
        assert_eq!(star_pullback(&phi, 1), vec![1, 4]);
        for v in 0..3 {
            assert!(check_star_containment(&m, &phi, v).is_pass());
        }
    }

    #[test]
    fn foreign_orbit_value_breaks_containment() {
        let m = triangle_spin_map();
        let mut phi = phi_map(&m, 0).unwrap();
        // graft mass at t2 onto the value of the identity; 2 is not in
        // the transporter coset rep(t0) * stab(t0) = {2, 5}? it is:
        // {h : h = 2 mod 3} = {2, 5}. Use t1's coset instead: put the
        // identity's mass on t1; e = 0 is not in {1, 4}.
        phi.table[0] = NervePoint::vertex(1);
        let v = check_star_containment(&m, &phi, 1);
        let Verdict::Fail { witness } = v else {
            panic!("expected containment failure, got {v:?}");
        };
        assert_eq!(witness.check, "star-containment");
        assert!(witness.detail.contains('0'));
    }

    /// Z/6 times a trivial two-point set, sections as the cover, sum
    /// metric: the smallest honest invariant product fixture.
    fn two_section_fixture() -> (ActionWindow, Cover, Arc<FiniteMetricSpace>) {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let aw = ActionWindow::trivial(Arc::clone(&w), vec!["p".into(), "q".into()]).unwrap();
        let norms = word_norms_auto(&w);
        let labels = aw.pair_labels();
        let n = aw.pair_count() as PointIx;
        let mut matrix = vec![vec![Q::from_int(0); n as usize]; n as usize];
        for a in 0..n {
            for b in 0..n {
                let (g, x) = aw.pair_of(a);
                let (h, y) = aw.pair_of(b);
                let mut d = norms.word_distance(g, h).unwrap();
                if x != y {
                    d = &d + &Q::from_int(10);
                }
                matrix[a as usize][b as usize] = d;
            }
        }
        let product =
            Arc::new(FiniteMetricSpace::new_dense("Z6x2", labels, matrix).unwrap());
        let sect = |x: PointIx| -> PointSet {
            (0..6u32).map(|g| aw.pair_index(g, x)).collect()
        };
        let cover = Cover::new(
            Arc::clone(&product),
            vec![
                NamedSet::new("Gp", sect(0)),
                NamedSet::new("Gq", sect(1)),
            ],
        )
        .unwrap();
        (aw, cover, product)
    }

    #[test]
    fn product_metric_validation() {
        let (aw, _, product) = two_section_fixture();
        let norms = word_norms_auto(aw.window());
        let report = validate_product_metric(&aw, &product, &norms);
        assert!(report.passed(), "{report}");
        assert!(report.caveats.is_empty());

        // z window: truncated products leave caveats but no violations
        let (zaw, _, zproduct) = z_line_fixture();
        let znorms = word_norms_auto(zaw.window());
        let report = validate_product_metric(&zaw, &zproduct, &znorms);
        assert!(report.passed(), "{report}");
        assert!(!report.caveats.is_empty());

        // perturb one fiber distance
        let labels = aw.pair_labels();
        let mut matrix: Vec<Vec<Q>> = (0..product.len() as PointIx)
            .map(|a| {
                (0..product.len() as PointIx)
                    .map(|b| product.dist(a, b))
                    .collect()
            })
            .collect();
        matrix[0][2] = q("5");
        matrix[2][0] = q("5");
        let bad = FiniteMetricSpace::new_dense("bad", labels, matrix).unwrap();
        let report = validate_product_metric(&aw, &bad, &norms);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "restriction" || v.check == "invariance"),
            "{report}");
    }

    #[test]
    fn psi_is_exactly_equivariant_on_the_two_section_fixture() {
        let (aw, cover, _) = two_section_fixture();
        // sections are translation invariant, so the nerve action is
        // the identity on its two disconnected vertices
        let nerve = nerve_of_cover(&cover).unwrap();
        assert_eq!(nerve.dim(), 0);
        let action = SimplicialAction::trivial(nerve, Arc::clone(aw.window()));
        let report = check_psi_equivariance(&aw, &cover, &action).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.caveats.is_empty());
    }
}
