//! Finite metric spaces with exact rational distances.
//!
//! A space is a list of labeled points plus a distance source: either a
//! dense matrix (the JSON wire form) or integer lattice coordinates
//! with the taxicab metric, which large built-in windows use so that a
//! 60x60 grid does not need a fourteen-million-entry matrix. Subspaces,
//! set distances, diameters, disjointness, and coarse-embedding checks
//! all run on exact rationals; nothing here rounds.

use crate::error::Error;
use crate::q::{Extended, Q};
use crate::report::Report;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub type PointIx = u32;

/// Max findings kept per report before truncation. Exhaustive scans on
/// broken inputs can otherwise produce cubically many witnesses.
const MAX_FINDINGS: usize = 200;

// ---------------------------------------------------------------------------
// point sets

/// Sorted, deduplicated set of point indices into one space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PointSet(Vec<PointIx>);

impl PointSet {
    pub fn new(mut ixs: Vec<PointIx>) -> Self {
        ixs.sort_unstable();
        ixs.dedup();
        PointSet(ixs)
    }

    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        PointSet((0..n as PointIx).collect())
    }

    pub fn singleton(i: PointIx) -> Self {
        PointSet(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: PointIx) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = PointIx> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[PointIx] {
        &self.0
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PointSet(out)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        PointSet(out)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = Vec::new();
        let mut j = 0;
        for &x in &self.0 {
            while j < other.0.len() && other.0[j] < x {
                j += 1;
            }
            if j >= other.0.len() || other.0[j] != x {
                out.push(x);
            }
        }
        PointSet(out)
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.intersection(other).len() == self.len()
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl FromIterator<PointIx> for PointSet {
    fn from_iter<T: IntoIterator<Item = PointIx>>(iter: T) -> Self {
        PointSet::new(iter.into_iter().collect())
    }
}

// ---------------------------------------------------------------------------
// spaces

#[derive(Debug, Clone)]
enum DistanceSource {
    /// Row-major `n*n` matrix.
    Dense(Vec<Q>),
    /// Integer coordinates per point; distance is the coordinate-wise
    /// absolute difference summed (taxicab). Always a valid metric.
    Lattice(Vec<Vec<i64>>),
}

/// Finite metric space: labeled points plus exact pairwise distances.
///
/// Construction only checks structure (shape, label uniqueness).
/// Whether the matrix actually satisfies the metric axioms is the job
/// of [`validate_metric`], which reports violations instead of erroring
/// so that deliberately broken inputs can be examined.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    id: String,
    points: Vec<String>,
    index: HashMap<String, PointIx>,
    dist: DistanceSource,
}

impl FiniteMetricSpace {
    pub fn new_dense(
        id: impl Into<String>,
        points: Vec<String>,
        matrix: Vec<Vec<Q>>,
    ) -> Result<Self, Error> {
        let id = id.into();
        let n = points.len();
        if n == 0 {
            return Err(Error::format(format!("space {id:?} has no points")));
        }
        if matrix.len() != n {
            return Err(Error::format(format!(
                "space {id:?}: {} points but {} matrix rows",
                n,
                matrix.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::format(format!(
                    "space {id:?}: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let index = build_index(&id, &points)?;
        let flat = matrix.into_iter().flatten().collect();
        Ok(FiniteMetricSpace {
            id,
            points,
            index,
            dist: DistanceSource::Dense(flat),
        })
    }

    /// Lattice-backed space: point `i` sits at `coords[i]`, distance is
    /// taxicab. All coordinate vectors must share one dimension.
    pub fn new_lattice(
        id: impl Into<String>,
        points: Vec<String>,
        coords: Vec<Vec<i64>>,
    ) -> Result<Self, Error> {
        let id = id.into();
        if points.is_empty() {
            return Err(Error::format(format!("space {id:?} has no points")));
        }
        if coords.len() != points.len() {
            return Err(Error::format(format!(
                "space {id:?}: {} points but {} coordinate rows",
                points.len(),
                coords.len()
            )));
        }
        let dim = coords[0].len();
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::format(format!(
                "space {id:?}: mixed coordinate dimensions"
            )));
        }
        let index = build_index(&id, &points)?;
        Ok(FiniteMetricSpace {
            id,
            points,
            index,
            dist: DistanceSource::Lattice(coords),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: PointIx) -> &str {
        &self.points[i as usize]
    }

    pub fn point_index(&self, label: &str) -> Option<PointIx> {
        self.index.get(label).copied()
    }

    pub fn dist(&self, i: PointIx, j: PointIx) -> Q {
        match &self.dist {
            DistanceSource::Dense(m) => m[i as usize * self.points.len() + j as usize].clone(),
            DistanceSource::Lattice(c) => {
                let (a, b) = (&c[i as usize], &c[j as usize]);
                let sum: i64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
                Q::from_int(sum)
            }
        }
    }

    /// Whether distances come from lattice coordinates (valid by
    /// construction) rather than a stored matrix.
    pub fn is_lattice(&self) -> bool {
        matches!(self.dist, DistanceSource::Lattice(_))
    }

    /// Dense matrix rows, materializing lattice distances if needed.
    pub fn matrix_rows(&self) -> Vec<Vec<Q>> {
        let n = self.len() as PointIx;
        (0..n)
            .map(|i| (0..n).map(|j| self.dist(i, j)).collect())
            .collect()
    }

    /// The whole space as a subspace of itself.
    pub fn as_subspace(self: &Arc<Self>) -> Subspace {
        Subspace {
            parent: Arc::clone(self),
            members: PointSet::full(self.len()),
        }
    }

    /// Subspace from labels. Errors on unknown labels.
    pub fn subspace_by_labels<S: AsRef<str>>(
        self: &Arc<Self>,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Subspace, Error> {
        let mut ixs = Vec::new();
        for l in labels {
            let l = l.as_ref();
            let ix = self
                .point_index(l)
                .ok_or_else(|| Error::format(format!("space {:?} has no point {l:?}", self.id)))?;
            ixs.push(ix);
        }
        Ok(Subspace {
            parent: Arc::clone(self),
            members: PointSet::new(ixs),
        })
    }

    pub fn subspace(self: &Arc<Self>, members: PointSet) -> Subspace {
        debug_assert!(members.iter().all(|i| (i as usize) < self.len()));
        Subspace {
            parent: Arc::clone(self),
            members,
        }
    }

    /// Open ball `{ y : d(x, y) < r }`.
    pub fn open_ball(&self, x: PointIx, r: &Q) -> PointSet {
        (0..self.len() as PointIx)
            .filter(|&y| &self.dist(x, y) < r)
            .collect()
    }

    /// Open neighborhood `{ y : d(y, set) < r }` of a point set.
    pub fn open_neighborhood(&self, set: &PointSet, r: &Q) -> PointSet {
        (0..self.len() as PointIx)
            .filter(|&y| set.iter().any(|x| &self.dist(x, y) < r))
            .collect()
    }

    /// Distance from a point to a set; `Infinite` for the empty set.
    pub fn dist_to_set(&self, x: PointIx, set: &PointSet) -> Extended {
        set.iter()
            .map(|y| Extended::Finite(self.dist(x, y)))
            .min()
            .unwrap_or(Extended::Infinite)
    }

    /// Smallest positive distance realized in the space, if any.
    pub fn min_positive_distance(&self) -> Option<Q> {
        let n = self.len() as PointIx;
        let mut best: Option<Q> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.dist(i, j);
                if d.is_positive() && best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }
}

fn build_index(id: &str, points: &[String]) -> Result<HashMap<String, PointIx>, Error> {
    let mut index = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if index.insert(p.clone(), i as PointIx).is_some() {
            return Err(Error::format(format!(
                "space {id:?}: duplicate point label {p:?}"
            )));
        }
    }
    Ok(index)
}

// ---------------------------------------------------------------------------
// subspaces and families

/// A subset of the points of one space, carrying its parent.
#[derive(Debug, Clone)]
pub struct Subspace {
    parent: Arc<FiniteMetricSpace>,
    members: PointSet,
}

impl Subspace {
    pub fn parent(&self) -> &Arc<FiniteMetricSpace> {
        &self.parent
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members
            .iter()
            .map(|i| self.parent.label(i))
            .collect()
    }

    fn same_parent(&self, other: &Subspace) -> Result<(), Error> {
        if Arc::ptr_eq(&self.parent, &other.parent) || self.parent.id == other.parent.id {
            Ok(())
        } else {
            Err(Error::MismatchedParent {
                left: self.parent.id.clone(),
                right: other.parent.id.clone(),
            })
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.parent.id())?;
        for (k, i) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.parent.label(i))?;
        }
        write!(f, "}}")
    }
}

/// Finite list of spaces treated together; ids unique.
#[derive(Debug, Clone, Default)]
pub struct MetricFamily {
    spaces: Vec<Arc<FiniteMetricSpace>>,
}

impl MetricFamily {
    pub fn new(spaces: Vec<Arc<FiniteMetricSpace>>) -> Result<Self, Error> {
        let mut seen = std::collections::HashSet::new();
        for s in &spaces {
            if !seen.insert(s.id().to_string()) {
                return Err(Error::format(format!("duplicate space id {:?}", s.id())));
            }
        }
        Ok(MetricFamily { spaces })
    }

    pub fn spaces(&self) -> &[Arc<FiniteMetricSpace>] {
        &self.spaces
    }

    pub fn by_id(&self, id: &str) -> Option<&Arc<FiniteMetricSpace>> {
        self.spaces.iter().find(|s| s.id() == id)
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }
}

/// A map of one space into another, given point by point.
#[derive(Debug, Clone)]
pub struct SpaceMap {
    pub domain: Arc<FiniteMetricSpace>,
    pub codomain: Arc<FiniteMetricSpace>,
    /// `table[i]` = image of domain point `i`.
    pub table: Vec<PointIx>,
}

impl SpaceMap {
    pub fn new(
        domain: Arc<FiniteMetricSpace>,
        codomain: Arc<FiniteMetricSpace>,
        table: Vec<PointIx>,
    ) -> Result<Self, Error> {
        if table.len() != domain.len() {
            return Err(Error::format(format!(
                "map {}->{}: table covers {} of {} domain points",
                domain.id(),
                codomain.id(),
                table.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&i| i as usize >= codomain.len()) {
            return Err(Error::format(format!(
                "map {}->{}: image index {bad} out of range",
                domain.id(),
                codomain.id()
            )));
        }
        Ok(SpaceMap {
            domain,
            codomain,
            table,
        })
    }
}

/// A family of maps, one per domain space.
#[derive(Debug, Clone, Default)]
pub struct FamilyMap {
    pub maps: Vec<SpaceMap>,
}

// ---------------------------------------------------------------------------
// control functions

/// Non-decreasing piecewise-linear function on `[0, inf)` given by
/// breakpoints. The first breakpoint must sit at `t = 0`; past the last
/// breakpoint the final segment's slope continues (a single breakpoint
/// extends as a constant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlFunction {
    points: Vec<(Q, Q)>,
}

impl ControlFunction {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self, Error> {
        let f = ControlFunction { points };
        let report = f.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::format(format!("control function: {v}")));
        }
        Ok(f)
    }

    /// Identity function `t`.
    pub fn identity() -> Self {
        ControlFunction {
            points: vec![(Q::ZERO, Q::ZERO), (Q::ONE, Q::ONE)],
        }
    }

    /// Affine `a*t + b` (requires `a >= 0`, `b >= 0`).
    pub fn affine(a: Q, b: Q) -> Result<Self, Error> {
        ControlFunction::new(vec![(Q::ZERO, b.clone()), (Q::ONE, a + b)])
    }

    pub fn breakpoints(&self) -> &[(Q, Q)] {
        &self.points
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        if self.points.is_empty() {
            report.violation("breakpoints", "no breakpoints");
            return report;
        }
        if !self.points[0].0.is_zero() {
            report.violation(
                "breakpoints",
                format!("first breakpoint at t={}, expected t=0", self.points[0].0),
            );
        }
        for w in self.points.windows(2) {
            if w[1].0 <= w[0].0 {
                report.violation(
                    "breakpoints",
                    format!("breakpoint times not increasing at t={}", w[1].0),
                );
            }
            if w[1].1 < w[0].1 {
                report.violation(
                    "monotone",
                    format!("value decreases between t={} and t={}", w[0].0, w[1].0),
                );
            }
        }
        for (t, v) in &self.points {
            if v.is_negative() {
                report.violation("nonnegative", format!("negative value {v} at t={t}"));
            }
        }
        report
    }

    pub fn eval(&self, t: &Q) -> Q {
        assert!(
            !t.is_negative(),
            "control function evaluated at negative input"
        );
        let pts = &self.points;
        if pts.len() == 1 {
            return pts[0].1.clone();
        }
        // segment whose left end is the last breakpoint <= t; beyond the
        // last breakpoint the final segment extends
        let mut seg = pts.len() - 2;
        for k in 0..pts.len() - 1 {
            if t <= &pts[k + 1].0 {
                seg = k;
                break;
            }
        }
        let (t0, v0) = &pts[seg];
        let (t1, v1) = &pts[seg + 1];
        let slope = &(v1 - v0) / &(t1 - t0);
        v0 + &(&slope * &(t - t0))
    }
}

/// Lower and upper control functions with `lower <= upper` pointwise.
#[derive(Debug, Clone)]
pub struct ControlPair {
    pub lower: ControlFunction,
    pub upper: ControlFunction,
}

impl ControlPair {
    pub fn new(lower: ControlFunction, upper: ControlFunction) -> Result<Self, Error> {
        let pair = ControlPair { lower, upper };
        // piecewise-linear comparison: checking at the union of
        // breakpoint times covers every vertex of both graphs; between
        // vertices both are linear so violations surface at a vertex or
        // persist to the next one. The unbounded tails are compared by
        // slope at a point past the last breakpoint.
        let mut ts: Vec<Q> = pair
            .lower
            .points
            .iter()
            .chain(pair.upper.points.iter())
            .map(|(t, _)| t.clone())
            .collect();
        let last = ts.iter().max().cloned().unwrap_or(Q::ZERO);
        ts.push(&last + &Q::ONE);
        ts.push(&last + &Q::from_int(1000));
        ts.sort();
        ts.dedup();
        for t in &ts {
            if pair.lower.eval(t) > pair.upper.eval(t) {
                return Err(Error::format(format!(
                    "control pair: lower exceeds upper at t={t}"
                )));
            }
        }
        Ok(pair)
    }
}

// ---------------------------------------------------------------------------
// operations

/// Check the metric axioms exhaustively and report every violation
/// (up to a cap): zero diagonal, symmetry, positivity off the diagonal,
/// and the triangle inequality over all ordered triples.
pub fn validate_metric(space: &FiniteMetricSpace) -> Report {
    let mut report = Report::new();
    if space.is_lattice() {
        report.caveat(format!(
            "space {:?} is lattice-backed; taxicab distances satisfy the axioms by construction",
            space.id()
        ));
        return report;
    }
    let n = space.len() as PointIx;
    let mut count = 0usize;
    let mut push = |report: &mut Report, check: &str, detail: String| {
        if count < MAX_FINDINGS {
            report.violation(check, detail);
        }
        count += 1;
    };
    for i in 0..n {
        let d = space.dist(i, i);
        if !d.is_zero() {
            push(
                &mut report,
                "zero-diagonal",
                format!("d({p},{p}) = {d}, expected 0", p = space.label(i)),
            );
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = space.dist(i, j);
            let dji = space.dist(j, i);
            if dij != dji {
                push(
                    &mut report,
                    "symmetry",
                    format!(
                        "d({},{}) = {dij} but d({},{}) = {dji}",
                        space.label(i),
                        space.label(j),
                        space.label(j),
                        space.label(i)
                    ),
                );
            }
            if !dij.is_positive() {
                push(
                    &mut report,
                    "positivity",
                    format!(
                        "d({},{}) = {dij}, expected > 0 for distinct points",
                        space.label(i),
                        space.label(j)
                    ),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = space.dist(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let dik = space.dist(i, k);
                let djk = space.dist(j, k);
                if dik > &dij + &djk {
                    push(
                        &mut report,
                        "triangle",
                        format!(
                            "d({i_},{k_}) = {dik} > {dij} + {djk} = d({i_},{j_}) + d({j_},{k_})",
                            i_ = space.label(i),
                            j_ = space.label(j),
                            k_ = space.label(k)
                        ),
                    );
                }
            }
        }
    }
    if count > MAX_FINDINGS {
        report.caveat(format!(
            "{} further violations truncated",
            count - MAX_FINDINGS
        ));
    }
    report
}

/// Distance between two nonempty subspaces of one space: the minimum
/// over pairs.
pub fn set_distance(a: &Subspace, b: &Subspace) -> Result<Q, Error> {
    a.same_parent(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("set distance of an empty subspace"));
    }
    let space = a.parent();
    let mut best: Option<Q> = None;
    for x in a.members().iter() {
        for y in b.members().iter() {
            let d = space.dist(x, y);
            if best.as_ref().is_none_or(|m| &d < m) {
                best = Some(d);
            }
        }
    }
    Ok(best.unwrap())
}

/// First pair of pieces at distance `<= r`, if any, with the realized
/// distance. Pairs are scanned in index order, so the witness is
/// deterministic.
pub fn r_disjoint_witness(pieces: &[Subspace], r: &Q) -> Result<Option<(usize, usize, Q)>, Error> {
    for i in 0..pieces.len() {
        for j in (i + 1)..pieces.len() {
            if pieces[i].is_empty() || pieces[j].is_empty() {
                continue;
            }
            let d = set_distance(&pieces[i], &pieces[j])?;
            if &d <= r {
                return Ok(Some((i, j, d)));
            }
        }
    }
    Ok(None)
}

/// Strict disjointness at scale `r`: every pair of pieces sits at
/// distance strictly greater than `r`.
pub fn is_r_disjoint(pieces: &[Subspace], r: &Q) -> Result<bool, Error> {
    Ok(r_disjoint_witness(pieces, r)?.is_none())
}

/// Diameter of a subspace; `0` for empty and singleton sets.
pub fn diameter(sub: &Subspace) -> Q {
    let space = sub.parent();
    let pts = sub.members().as_slice();
    let mut best = Q::ZERO;
    for (a, &x) in pts.iter().enumerate() {
        for &y in &pts[a + 1..] {
            let d = space.dist(x, y);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Mesh of a collection of subspaces: the largest diameter. The
/// infinity flag is part of the return type for callers that feed in
/// quantities that can be unbounded; on finite data the value is always
/// finite.
pub fn mesh(sets: &[Subspace]) -> Extended {
    sets.iter()
        .map(|s| Extended::Finite(diameter(s)))
        .max()
        .unwrap_or(Extended::Finite(Q::ZERO))
}

/// Check a family of maps against a control pair: for every pair of
/// domain points, the image distance must sit between `lower(d)` and
/// `upper(d)` of the source distance. Exact comparisons; violations are
/// reported with the witnessing pair.
pub fn check_coarse_embedding(maps: &FamilyMap, controls: &ControlPair) -> Report {
    let mut report = Report::new();
    let mut count = 0usize;
    for map in &maps.maps {
        let n = map.domain.len() as PointIx;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = map.domain.dist(i, j);
                let dy = map.codomain.dist(map.table[i as usize], map.table[j as usize]);
                let lo = controls.lower.eval(&d);
                let hi = controls.upper.eval(&d);
                if dy < lo || dy > hi {
                    if count < MAX_FINDINGS {
                        report.violation(
                            "coarse-embedding",
                            format!(
                                "map {}->{}: pair ({},{}) at distance {d} maps to distance {dy}, \
                                 outside [{lo}, {hi}]",
                                map.domain.id(),
                                map.codomain.id(),
                                map.domain.label(i),
                                map.domain.label(j)
                            ),
                        );
                    }
                    count += 1;
                }
            }
        }
    }
    if count > MAX_FINDINGS {
        report.caveat(format!(
            "{} further violations truncated",
            count - MAX_FINDINGS
        ));
    }
    report
}

// ---------------------------------------------------------------------------
