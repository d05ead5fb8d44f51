//! Covers and colored decomposition certificates.
//!
//! A certificate asserts that a family of spaces splits, at a scale
//! `r`, into `n+1` colors of pieces with each color's pieces strictly
//! more than `r` apart, together with a witness that the pieces are
//! tame: either a uniform diameter bound or an inner classed cover per
//! piece. Verification is exhaustive and exact; every failure names a
//! witness.

use crate::error::Error;
use crate::metric::{
    diameter, r_disjoint_witness, FiniteMetricSpace, MetricFamily, PointSet, Subspace,
};
use crate::q::{Extended, Q};
use crate::report::Report;
use std::collections::BTreeMap;
use std::sync::Arc;

const MAX_FINDINGS: usize = 100;

// ---------------------------------------------------------------------------
// covers

/// A named subset of one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    pub points: PointSet,
}

impl NamedSet {
    pub fn new(name: impl Into<String>, points: PointSet) -> Self {
        NamedSet {
            name: name.into(),
            points,
        }
    }
}

/// Named subsets of one space, intended to cover it. Construction is
/// structural; whether the union really is the whole space is checked
/// by [`validate_cover`] (and surfaces in the stats as a Lebesgue
/// number of zero).
#[derive(Debug, Clone)]
pub struct Cover {
    space: Arc<FiniteMetricSpace>,
    sets: Vec<NamedSet>,
}

impl Cover {
    pub fn new(space: Arc<FiniteMetricSpace>, sets: Vec<NamedSet>) -> Result<Self, Error> {
        let mut seen = std::collections::HashSet::new();
        for s in &sets {
            if !seen.insert(s.name.clone()) {
                return Err(Error::format(format!(
                    "cover of {:?}: duplicate set name {:?}",
                    space.id(),
                    s.name
                )));
            }
            if s.points.iter().any(|i| i as usize >= space.len()) {
                return Err(Error::format(format!(
                    "cover of {:?}: set {:?} references points outside the space",
                    space.id(),
                    s.name
                )));
            }
        }
        Ok(Cover { space, sets })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn sets(&self) -> &[NamedSet] {
        &self.sets
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.sets
            .iter()
            .map(|s| self.space.subspace(s.points.clone()))
            .collect()
    }

    /// Sets containing the point, in listed order.
    pub fn sets_containing(&self, x: u32) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.points.contains(x))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Union-equals-space check with missed points named.
pub fn validate_cover(cover: &Cover) -> Report {
    let mut report = Report::new();
    let mut union = PointSet::empty();
    for s in cover.sets() {
        union = union.union(&s.points);
    }
    let missed: Vec<&str> = (0..cover.space().len() as u32)
        .filter(|&i| !union.contains(i))
        .map(|i| cover.space().label(i))
        .collect();
    if !missed.is_empty() {
        let shown: Vec<&str> = missed.iter().take(20).copied().collect();
        report.violation(
            "coverage",
            format!(
                "{} point(s) not covered, first: {}",
                missed.len(),
                shown.join(", ")
            ),
        );
    }
    report
}

/// Exact cover statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStats {
    /// Largest number of sets any single point lies in.
    pub multiplicity: u32,
    /// Largest lambda such that every open lambda-ball fits inside some
    /// set; infinite when one set is the whole space.
    pub lebesgue: Extended,
    /// Largest set diameter.
    pub mesh: Q,
    /// `d ->` largest number of sets meeting some open `d`-ball, for
    /// the requested values of `d`.
    pub d_multiplicity: BTreeMap<Q, u32>,
}

/// Largest number of sets whose distance to some single point is less
/// than `d`.
pub fn d_multiplicity(cover: &Cover, d: &Q) -> u32 {
    let space = cover.space();
    let mut best = 0u32;
    for x in 0..space.len() as u32 {
        let mut count = 0u32;
        for s in cover.sets() {
            let hit = match space.dist_to_set(x, &s.points) {
                Extended::Finite(dist) => &dist < d,
                Extended::Infinite => false,
            };
            if hit {
                count += 1;
            }
        }
        best = best.max(count);
    }
    best
}

/// Compute multiplicity, Lebesgue number, and mesh exactly; fill
/// `d_multiplicity` for each requested `d`.
pub fn cover_stats(cover: &Cover, requested_ds: &[Q]) -> CoverStats {
    let space = cover.space();
    let n = space.len() as u32;
    let mut multiplicity = 0u32;
    let mut lebesgue = Extended::Infinite;
    for x in 0..n {
        let mut count = 0u32;
        let mut reach = Extended::Finite(Q::ZERO);
        for s in cover.sets() {
            if s.points.contains(x) {
                count += 1;
            }
            // distance from x to the set's complement bounds the balls
            // around x that fit inside the set
            let complement = PointSet::full(space.len()).difference(&s.points);
            let to_complement = if complement.is_empty() {
                Extended::Infinite
            } else if s.points.contains(x) {
                space.dist_to_set(x, &complement)
            } else {
                Extended::Finite(Q::ZERO)
            };
            if to_complement > reach {
                reach = to_complement;
            }
        }
        multiplicity = multiplicity.max(count);
        if reach < lebesgue {
            lebesgue = reach;
        }
    }
    let mesh = cover
        .subspaces()
        .iter()
        .map(diameter)
        .max()
        .unwrap_or(Q::ZERO);
    let mut dm = BTreeMap::new();
    for d in requested_ds {
        dm.insert(d.clone(), d_multiplicity(cover, d));
    }
    CoverStats {
        multiplicity,
        lebesgue,
        mesh,
        d_multiplicity: dm,
    }
}

/// Condition on a family of covers: `d`-multiplicity at most `n+1` for
/// every cover, and every set of every cover of diameter at most
/// `bound`.
pub fn check_condition_a(covers: &[Cover], d: &Q, n: u32, bound: &Q) -> Report {
    let mut report = Report::new();
    for cover in covers {
        let dm = d_multiplicity(cover, d);
        if dm > n + 1 {
            report.violation(
                "d-multiplicity",
                format!(
                    "cover of {:?}: {d}-multiplicity {dm} exceeds n+1 = {}",
                    cover.space().id(),
                    n + 1
                ),
            );
        }
        for (set, sub) in cover.sets().iter().zip(cover.subspaces()) {
            let diam = diameter(&sub);
            if &diam > bound {
                report.violation(
                    "mesh",
                    format!(
                        "cover of {:?}: set {:?} has diameter {diam} > {bound}",
                        cover.space().id(),
                        set.name
                    ),
                );
            }
        }
    }
    report
}

/// Condition on a family of covers: multiplicity at most `n+1`,
/// Lebesgue number at least `lambda`, mesh at most `bound`.
pub fn check_condition_b(covers: &[Cover], lambda: &Q, n: u32, bound: &Q) -> Report {
    let mut report = Report::new();
    for cover in covers {
        let stats = cover_stats(cover, &[]);
        if stats.multiplicity > n + 1 {
            report.violation(
                "multiplicity",
                format!(
                    "cover of {:?}: multiplicity {} exceeds n+1 = {}",
                    cover.space().id(),
                    stats.multiplicity,
                    n + 1
                ),
            );
        }
        if stats.lebesgue < Extended::Finite(lambda.clone()) {
            report.violation(
                "lebesgue",
                format!(
                    "cover of {:?}: Lebesgue number {} below {lambda}",
                    cover.space().id(),
                    stats.lebesgue
                ),
            );
        }
        if &stats.mesh > bound {
            report.violation(
                "mesh",
                format!(
                    "cover of {:?}: mesh {} exceeds {bound}",
                    cover.space().id(),
                    stats.mesh
                ),
            );
        }
    }
    report
}

// ---------------------------------------------------------------------------
// certificates

/// One colored piece of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub name: String,
    pub color: u32,
    pub points: PointSet,
}

/// Pieces of one space of the family.
#[derive(Debug, Clone)]
pub struct SpacePieces {
    pub space: Arc<FiniteMetricSpace>,
    pub pieces: Vec<Piece>,
}

/// Cover of a piece split into classes; `classes[l]` lists the sets of
/// class `l`.
#[derive(Debug, Clone, Default)]
pub struct ClassedCover {
    pub classes: Vec<Vec<NamedSet>>,
}

impl ClassedCover {
    /// Classes whose sets contain the point.
    pub fn classes_containing(&self, x: u32) -> Vec<u32> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, sets)| sets.iter().any(|s| s.points.contains(x)))
            .map(|(l, _)| l as u32)
            .collect()
    }

    pub fn union(&self) -> PointSet {
        let mut u = PointSet::empty();
        for sets in &self.classes {
            for s in sets {
                u = u.union(&s.points);
            }
        }
        u
    }
}

/// Witness that the pieces of a certificate are tame.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Every piece has diameter at most `bound`.
    Bounded { bound: Q },
    /// Every piece carries an inner classed cover, combiner-ready for
    /// a decomposition with colors `0..=n`: exactly `n+1` classes (one
    /// per color), each class `scale`-disjoint and `bound`-bounded,
    /// every point of the piece covered by sets from at least
    /// `n - m + 1` distinct classes. `covers[s][p]` belongs to piece
    /// `p` of space `s`. Combining additionally needs the
    /// decomposition's coverage depth to reach `m + 1`.
    Cover {
        m: u32,
        scale: Q,
        bound: Q,
        covers: Vec<Vec<ClassedCover>>,
    },
}

/// Assertion that a family decomposes at scale `r` into colors
/// `0 ..= n` with strictly `r`-separated same-color pieces, plus a
/// tameness witness.
#[derive(Debug, Clone)]
pub struct DecompositionCertificate {
    pub family: MetricFamily,
    pub r: Q,
    pub n: u32,
    /// Aligned with `family.spaces()`.
    pub pieces: Vec<SpacePieces>,
    pub witness: Witness,
}

impl DecompositionCertificate {
    pub fn space_pieces(&self, space_idx: usize) -> &SpacePieces {
        &self.pieces[space_idx]
    }
}

fn check_space_alignment(cert: &DecompositionCertificate, report: &mut Report) -> bool {
    if cert.pieces.len() != cert.family.len() {
        report.violation(
            "structure",
            format!(
                "{} piece lists for {} family spaces",
                cert.pieces.len(),
                cert.family.len()
            ),
        );
        return false;
    }
    let mut ok = true;
    for (k, sp) in cert.pieces.iter().enumerate() {
        if sp.space.id() != cert.family.spaces()[k].id() {
            report.violation(
                "structure",
                format!(
                    "piece list {k} is for space {:?}, family lists {:?}",
                    sp.space.id(),
                    cert.family.spaces()[k].id()
                ),
            );
            ok = false;
        }
    }
    ok
}

/// Exhaustively verify a certificate: positive scale, colors in range,
/// nonempty pieces, coverage per space, strict `r`-disjointness within
/// every color, and the witness.
pub fn verify_certificate(cert: &DecompositionCertificate) -> Report {
    verify_with_depth(cert, 1)
}

/// Same checks with the coverage requirement strengthened: every point
/// must lie in pieces of at least `depth` distinct colors.
pub(crate) fn verify_with_depth(cert: &DecompositionCertificate, depth: u32) -> Report {
    let mut report = Report::new();
    if !cert.r.is_positive() {
        report.violation("scale", format!("scale r = {} must be positive", cert.r));
    }
    if !check_space_alignment(cert, &mut report) {
        return report;
    }
    for sp in &cert.pieces {
        let space = &sp.space;
        for piece in &sp.pieces {
            if piece.color > cert.n {
                report.violation(
                    "color-range",
                    format!(
                        "space {:?}: piece {:?} has color {} > n = {}",
                        space.id(),
                        piece.name,
                        piece.color,
                        cert.n
                    ),
                );
            }
            if piece.points.is_empty() {
                report.violation(
                    "empty-piece",
                    format!("space {:?}: piece {:?} is empty", space.id(), piece.name),
                );
            }
        }
        let mut shallow = 0usize;
        for x in 0..space.len() as u32 {
            let mut colors: Vec<u32> = sp
                .pieces
                .iter()
                .filter(|p| p.points.contains(x))
                .map(|p| p.color)
                .collect();
            colors.sort_unstable();
            colors.dedup();
            if (colors.len() as u32) < depth && shallow < MAX_FINDINGS {
                report.violation(
                    "coverage",
                    format!(
                        "space {:?}: point {} lies in pieces of {} color(s), need {depth}",
                        space.id(),
                        space.label(x),
                        colors.len()
                    ),
                );
                shallow += 1;
            }
        }
        for color in 0..=cert.n {
            let colored: Vec<&Piece> =
                sp.pieces.iter().filter(|p| p.color == color).collect();
            let subs: Vec<Subspace> = colored
                .iter()
                .map(|p| space.subspace(p.points.clone()))
                .collect();
            match r_disjoint_witness(&subs, &cert.r) {
                Ok(None) => {}
                Ok(Some((i, j, d))) => report.violation(
                    "r-disjoint",
                    format!(
                        "space {:?}: color {color} pieces {:?} and {:?} at distance {d} <= r = {}",
                        space.id(),
                        colored[i].name,
                        colored[j].name,
                        cert.r
                    ),
                ),
                Err(e) => report.violation("r-disjoint", e.to_string()),
            }
        }
    }
    match &cert.witness {
        Witness::Bounded { bound } => {
            for sp in &cert.pieces {
                for piece in &sp.pieces {
                    let diam = diameter(&sp.space.subspace(piece.points.clone()));
                    if &diam > bound {
                        report.violation(
                            "piece-bound",
                            format!(
                                "space {:?}: piece {:?} has diameter {diam} > D = {bound}",
                                sp.space.id(),
                                piece.name
                            ),
                        );
                    }
                }
            }
        }
        Witness::Cover {
            m,
            scale,
            bound,
            covers,
        } =>

            verify_cover_witness(cert, *m, scale, bound, covers, &mut report),
    }
    report
}

/// The inner-cover witness conditions, exactly the combiner's input
/// contract for colors `0..=n`: class count `n+1`, classes
/// `scale`-disjoint and `bound`-bounded, sets inside their piece,
/// every point of a piece in sets of at least `n-m+1` distinct
/// classes.
fn verify_cover_witness(
    cert: &DecompositionCertificate,
    m: u32,
    scale: &Q,
    bound: &Q,
    covers: &[Vec<ClassedCover>],
    report: &mut Report,
) {
    if m > cert.n {
        report.violation(
            "inner-classes",
            format!("witness parameter m = {m} exceeds the color budget n = {}", cert.n),
        );
        return;
    }
    let want_classes = (cert.n + 1) as usize;
    let want_depth = cert.n - m + 1;
    if covers.len() != cert.pieces.len() {
        report.violation(
            "structure",
            format!(
                "witness has {} cover lists for {} spaces",
                covers.len(),
                cert.pieces.len()
            ),
        );
        return;
    }
    let mut findings = 0usize;
    for (sp, sp_covers) in cert.pieces.iter().zip(covers) {
        let space = &sp.space;
        if sp_covers.len() != sp.pieces.len() {
            report.violation(
                "structure",
                format!(
                    "space {:?}: {} inner covers for {} pieces",
                    space.id(),
                    sp_covers.len(),
                    sp.pieces.len()
                ),
            );
            continue;
        }
        for (piece, cover) in sp.pieces.iter().zip(sp_covers) {
            if cover.classes.len() != want_classes {
                report.violation(
                    "inner-classes",
                    format!(
                        "space {:?} piece {:?}: {} classes, expected n+1 = {want_classes}",
                        space.id(),
                        piece.name,
                        cover.classes.len()
                    ),
                );
                continue;
            }
            for (l, sets) in cover.classes.iter().enumerate() {
                for s in sets {
                    if !s.points.is_subset_of(&piece.points) {
                        report.violation(
                            "inner-containment",
                            format!(
                                "space {:?} piece {:?}: class {l} set {:?} leaves the piece",
                                space.id(),
                                piece.name,
                                s.name
                            ),
                        );
                    }
                    let diam = diameter(&space.subspace(s.points.clone()));
                    if &diam > bound {
                        report.violation(
                            "inner-bound",
                            format!(
                                "space {:?} piece {:?}: class {l} set {:?} has diameter {diam} > {bound}",
                                space.id(),
                                piece.name,
                                s.name
                            ),
                        );
                    }
                }
                let subs: Vec<Subspace> = sets
                    .iter()
                    .map(|s| space.subspace(s.points.clone()))
                    .collect();
                match r_disjoint_witness(&subs, scale) {
                    Ok(None) => {}
                    Ok(Some((i, j, d))) => report.violation(
                        "inner-disjoint",
                        format!(
                            "space {:?} piece {:?}: class {l} sets {:?}, {:?} at distance {d} <= {scale}",
                            space.id(),
                            piece.name,
                            sets[i].name,
                            sets[j].name
                        ),
                    ),
                    Err(e) => report.violation("inner-disjoint", e.to_string()),
                }
            }
            for x in piece.points.iter() {
                let depth = cover.classes_containing(x).len() as u32;
                if depth < want_depth && findings < MAX_FINDINGS {
                    report.violation(
                        "inner-depth",
                        format!(
                            "space {:?} piece {:?}: point {} covered by {depth} class(es), need {want_depth}",
                            space.id(),
                            piece.name,
                            space.label(x),
                        ),
                    );
                    findings += 1;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// conversion to the Lebesgue condition

/// Result of fattening a bounded certificate into covers with a
/// Lebesgue guarantee.
#[derive(Debug, Clone)]
pub struct CondBConversion {
    pub covers: Vec<Cover>,
    pub lambda: Q,
    pub n: u32,
    pub bound: Q,
}

/// Fatten every piece by an open `r/2`-neighborhood inside its space.
/// The result is re-verified against the Lebesgue condition with
/// parameters `(r/2, n, D + r)`; a valid input certificate cannot fail
/// this, so a failure is reported as an internal error.
pub fn certificate_to_cond_b(cert: &DecompositionCertificate) -> Result<CondBConversion, Error> {
    let pre = verify_certificate(cert);
    if !pre.passed() {
        return Err(Error::CertificateInvalid {
            detail: pre.violations[0].to_string(),
        });
    }
    let bound_in = match &cert.witness {
        Witness::Bounded { bound } => bound.clone(),
        // no declared diameter bound: the realized mesh of the pieces
        Witness::Cover { .. } => cert
            .pieces
            .iter()
            .flat_map(|sp| {
                sp.pieces
                    .iter()
                    .map(|p| diameter(&sp.space.subspace(p.points.clone())))
            })
            .max()
            .unwrap_or(Q::ZERO),
    };
    let lambda = cert.r.half();
    let bound_out = &bound_in + &cert.r;
    let mut covers = Vec::new();
    for sp in &cert.pieces {
        let sets = sp
            .pieces
            .iter()
            .map(|p| {
                NamedSet::new(
                    format!("{}+", p.name),
                    sp.space.open_neighborhood(&p.points, &lambda),
                )
            })
            .collect();
        covers.push(Cover::new(Arc::clone(&sp.space), sets)?);
    }
    let check = check_condition_b(&covers, &lambda, cert.n, &bound_out);
    if !check.passed() {
        return Err(Error::Internal {
            detail: format!(
                "fattened certificate failed its own Lebesgue condition: {}",
                check.violations[0]
            ),
        });
    }
    Ok(CondBConversion {
        covers,
        lambda,
        n: cert.n,
        bound: bound_out,
    })
}

// ---------------------------------------------------------------------------
// search

/// Outcome of a decomposition search. `NotFound` is a definite answer:
/// the search space was exhausted.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Box<DecompositionCertificate>),
    NotFound,
}

/// Search for a decomposition of one space at scale `r` into colors
/// `0..=n` with pieces of diameter at most `bound`.
///
/// Points are assigned colors one at a time in index order (or a
/// seed-shuffled order when `seed != 0`), lowest color first, with
/// backtracking; same-color points within distance `r` of each other
/// are merged into one piece, so disjointness holds by construction and
/// only the diameter bound prunes. Run to exhaustion this is a complete
/// search; spaces of at most twelve points always run to exhaustion
/// regardless of the budget, so `NotFound` is a proof there. Larger
/// spaces error with `Timeout` when the node budget runs out.
pub fn search_decomposition(
    space: &Arc<FiniteMetricSpace>,
    r: &Q,
    n: u32,
    bound: &Q,
    node_budget: u64,
    seed: u64,
) -> Result<SearchOutcome, Error> {
    if !r.is_positive() {
        return Err(Error::input("search scale must be positive"));
    }
    let npts = space.len();
    let order: Vec<u32> = if seed == 0 {
        (0..npts as u32).collect()
    } else {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<u32> = (0..npts as u32).collect();
        v.shuffle(&mut rng);
        v
    };
    let exhaustive = npts <= 12;
    let mut nodes: u64 = 0;
    let mut colors: Vec<Option<u32>> = vec![None; npts];

    struct Ctx<'a> {
        space: &'a FiniteMetricSpace,
        order: &'a [u32],
        r: &'a Q,
        n: u32,
        bound: &'a Q,
        budget: Option<u64>,
    }

    // pieces are single-linkage components at distance <= r within a
    // color; adding a point merges every component it touches, and the
    // merged diameter must stay within the bound
    fn feasible(ctx: &Ctx, colors: &[Option<u32>], upto: usize, p: u32, c: u32) -> bool {
        let assigned: Vec<u32> = ctx.order[..upto]
            .iter()
            .copied()
            .filter(|&x| colors[x as usize] == Some(c))
            .collect();
        if assigned.is_empty() {
            return true;
        }
        // the component of p after insertion
        let mut component = vec![p];
        let mut grew = true;
        let mut in_comp = vec![false; ctx.space.len()];
        in_comp[p as usize] = true;
        while grew {
            grew = false;
            for &x in &assigned {
                if in_comp[x as usize] {
                    continue;
                }
                let touches = component
                    .iter()
                    .any(|&y| &ctx.space.dist(x, y) <= ctx.r);
                if touches {
                    in_comp[x as usize] = true;
                    component.push(x);
                    grew = true;
                }
            }
        }
        for i in 0..component.len() {
            for j in (i + 1)..component.len() {
                if &ctx.space.dist(component[i], component[j]) > ctx.bound {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(
        ctx: &Ctx,
        colors: &mut [Option<u32>],
        upto: usize,
        nodes: &mut u64,
    ) -> Result<bool, Error> {
        if upto == ctx.order.len() {
            return Ok(true);
        }
        let p = ctx.order[upto];
        for c in 0..=ctx.n {
            *nodes += 1;
            if let Some(b) = ctx.budget {
                if *nodes > b {
                    return Err(Error::Timeout { budget: b });
                }
            }
            if feasible(ctx, colors, upto, p, c) {
                colors[p as usize] = Some(c);
                if dfs(ctx, colors, upto + 1, nodes)? {
                    return Ok(true);
                }
                colors[p as usize] = None;
            }
        }
        Ok(false)
    }

    let ctx = Ctx {
        space,
        order: &order,
        r,
        n,
        bound,
        budget: if exhaustive { None } else { Some(node_budget) },
    };
    let found = dfs(&ctx, &mut colors, 0, &mut nodes)?;
    if !found {
        return Ok(SearchOutcome::NotFound);
    }

    // materialize pieces: per color, single-linkage components
    let mut pieces = Vec::new();
    for c in 0..=n {
        let members: Vec<u32> = (0..npts as u32)
            .filter(|&x| colors[x as usize] == Some(c))
            .collect();
        let mut unassigned: Vec<u32> = members;
        while let Some(seed_pt) = unassigned.first().copied() {
            let mut comp = vec![seed_pt];
            unassigned.retain(|&x| x != seed_pt);
            let mut grew = true;
            while grew {
                grew = false;
                unassigned.retain(|&x| {
                    if comp.iter().any(|&y| &space.dist(x, y) <= r) {
                        comp.push(x);
                        grew = true;
                        false
                    } else {
                        true
                    }
                });
            }
            pieces.push(Piece {
                name: format!("c{}.{}", c, pieces.iter().filter(|p: &&Piece| p.color == c).count()),
                color: c,
                points: PointSet::new(comp),
            });
        }
    }
    let cert = DecompositionCertificate {
        family: MetricFamily::new(vec![Arc::clone(space)])?,
        r: r.clone(),
        n,
        pieces: vec![SpacePieces {
            space: Arc::clone(space),
            pieces,
        }],
        witness: Witness::Bounded {
            bound: bound.clone(),
        },
    };
    debug_assert!(verify_certificate(&cert).passed());
    Ok(SearchOutcome::Found(Box::new(cert)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{named_interval as interval_set, path_space};

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    /// The interval-blocks certificate on a 31-point line: scale 3,
    /// two colors, diameter bound 5.
    pub(crate) fn zline_certificate(r: Q) -> DecompositionCertificate {
        let space = path_space("zline", 31);
        let mk = |name: &str, color: u32, lo: i64, hi: i64| Piece {
            name: name.into(),
            color,
            points: interval_set(&space, name, lo, hi).points,
        };
        DecompositionCertificate {
            family: MetricFamily::new(vec![Arc::clone(&space)]).unwrap(),
            r,
            n: 1,
            pieces: vec![SpacePieces {
                space: Arc::clone(&space),
                pieces: vec![
                    mk("a0", 0, 0, 4),
                    mk("a1", 0, 10, 14),
                    mk("a2", 0, 20, 24),
                    mk("b0", 1, 5, 9),
                    mk("b1", 1, 15, 19),
                    mk("b2", 1, 25, 30),
                ],
            }],
            witness: Witness::Bounded { bound: q("5") },
        }
    }

    #[test]
    fn zline_certificate_valid_at_3() {
        let report = verify_certificate(&zline_certificate(q("3")));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn zline_certificate_invalid_at_7_names_color_pair() {
        let report = verify_certificate(&zline_certificate(q("7")));
        assert!(!report.passed());
        let v = report
            .violations
            .iter()
            .find(|v| v.check == "r-disjoint")
            .unwrap();
        assert!(v.detail.contains("a0") && v.detail.contains("a1"), "{v}");
        assert!(v.detail.contains("distance 6"), "{v}");
    }

    #[test]
    fn certificate_monotone_in_r() {
        // valid at r implies valid at every smaller positive scale
        for smaller in ["3", "2", "1", "1/2"] {
            let report = verify_certificate(&zline_certificate(q(smaller)));
            assert!(report.passed(), "scale {smaller}: {report}");
        }
    }

    #[test]
    fn broken_coverage_and_colors_reported() {
        let mut cert = zline_certificate(q("3"));
        cert.pieces[0].pieces.remove(3); // drop b0: points 5..9 uncovered
        let report = verify_certificate(&cert);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "coverage" && v.detail.contains("5")));

        let mut cert = zline_certificate(q("3"));
        cert.pieces[0].pieces[0].color = 5;
        let report = verify_certificate(&cert);
        assert!(report.violations.iter().any(|v| v.check == "color-range"));

        let mut cert = zline_certificate(q("3"));
        cert.witness = Witness::Bounded { bound: q("4") };
        let report = verify_certificate(&cert);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "piece-bound" && v.detail.contains("b2")));
    }

    #[test]
    fn p10_two_block_cover_stats() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                interval_set(&space, "L", 0, 5),
                interval_set(&space, "R", 4, 9),
            ],
        )
        .unwrap();
        let stats = cover_stats(&cover, &[q("1"), q("2"), q("3")]);
        assert_eq!(stats.multiplicity, 2);
        assert_eq!(stats.mesh, q("5"));
        assert_eq!(stats.lebesgue, Extended::Finite(q("2")));
        // open 1-balls are single points: d-multiplicity = multiplicity
        assert_eq!(stats.d_multiplicity[&q("1")], 2);
        assert_eq!(stats.d_multiplicity[&q("2")], 2);
        // radius-3 balls around 3..6 meet both sets
        assert_eq!(stats.d_multiplicity[&q("3")], 2);
        assert!(validate_cover(&cover).passed());
    }

    #[test]
    fn multiplicity_is_small_d_multiplicity() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                interval_set(&space, "L", 0, 5),
                interval_set(&space, "R", 4, 9),
            ],
        )
        .unwrap();
        let half_min = space.min_positive_distance().unwrap().half();
        let stats = cover_stats(&cover, &[half_min.clone()]);
        assert_eq!(stats.multiplicity, stats.d_multiplicity[&half_min]);
    }

    #[test]
    fn lebesgue_infinite_when_one_set_is_everything() {
        let space = path_space("P6", 6);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![interval_set(&space, "all", 0, 5)],
        )
        .unwrap();
        let stats = cover_stats(&cover, &[]);
        assert_eq!(stats.lebesgue, Extended::Infinite);
    }

    #[test]
    fn lebesgue_zero_when_a_point_is_uncovered() {
        let space = path_space("P6", 6);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![interval_set(&space, "partial", 0, 4)],
        )
        .unwrap();
        let stats = cover_stats(&cover, &[]);
        assert_eq!(stats.lebesgue, Extended::Finite(Q::ZERO));
        assert!(!validate_cover(&cover).passed());
    }

    #[test]
    fn conditions_on_the_two_block_cover() {
        let space = path_space("P10", 10);
        let cover = Cover::new(
            Arc::clone(&space),
            vec![
                interval_set(&space, "L", 0, 5),
                interval_set(&space, "R", 4, 9),
            ],
        )
        .unwrap();
        let covers = [cover];
        assert!(check_condition_a(&covers, &q("1"), 1, &q("5")).passed());
        assert!(!check_condition_a(&covers, &q("1"), 0, &q("5")).passed()); // n+1 = 1 < 2
        assert!(check_condition_b(&covers, &q("2"), 1, &q("5")).passed());
        assert!(!check_condition_b(&covers, &q("5/2"), 1, &q("5")).passed()); // lebesgue is 2
        assert!(!check_condition_b(&covers, &q("2"), 1, &q("4")).passed()); // mesh is 5
    }

    #[test]
    fn cond_b_conversion_of_zline() {
        let cert = zline_certificate(q("3"));
        let out = certificate_to_cond_b(&cert).unwrap();
        assert_eq!(out.lambda, q("3/2"));
        assert_eq!(out.bound, q("8"));
        assert_eq!(out.n, 1);
        let check = check_condition_b(&out.covers, &out.lambda, out.n, &out.bound);
        assert!(check.passed(), "{check}");
        // fattening by open 3/2 adds exactly the adjacent integer points
        let first = &out.covers[0].sets()[0];
        let labels: Vec<&str> = first
            .points
            .iter()
            .map(|i| out.covers[0].space().label(i))
            .collect();
        assert_eq!(labels, vec!["0", "1", "2", "3", "4", "5"]);
    }

    #[test]
    fn cond_b_conversion_rejects_invalid_input() {
        let cert = zline_certificate(q("7"));
        assert!(matches!(
            certificate_to_cond_b(&cert),
            Err(Error::CertificateInvalid { .. })
        ));
    }

    #[test]
    fn search_finds_two_block_split() {
        let space = path_space("P10", 10);
        let out = search_decomposition(&space, &q("2"), 1, &q("4"), 10_000, 0).unwrap();
        let SearchOutcome::Found(cert) = out else {
            panic!("expected a decomposition");
        };
        assert!(verify_certificate(&cert).passed());
        // deterministic first solution: color 0 greedily takes 0..4,
        // 5 and 6 are forced to color 1, then 7 is far enough from the
        // first block to reopen color 0
        let sp = &cert.pieces[0];
        assert_eq!(sp.pieces.len(), 3);
        assert_eq!(sp.pieces[0].points, PointSet::new((0..5).collect()));
        assert_eq!(sp.pieces[0].color, 0);
        assert_eq!(sp.pieces[1].points, PointSet::new(vec![7, 8, 9]));
        assert_eq!(sp.pieces[1].color, 0);
        assert_eq!(sp.pieces[2].points, PointSet::new(vec![5, 6]));
        assert_eq!(sp.pieces[2].color, 1);
        assert_eq!(sp.pieces[1].name, "c0.1");
    }

    #[test]
    fn search_not_found_is_exhaustive_on_small_spaces() {
        // twelve points, scale 20 chains everything, bound 2 too tight
        let space = path_space("P12", 12);
        let out = search_decomposition(&space, &q("20"), 0, &q("2"), 10, 0).unwrap();
        assert!(matches!(out, SearchOutcome::NotFound));
    }

    #[test]
    fn search_times_out_on_large_hopeless_input() {
        // scale 40 chains every same-color pair, so one color holds 20+
        // points spanning far beyond 3: no solution exists, and every
        // branch survives at least four points, so exhausting the tree
        // costs well over ten nodes
        let space = path_space("P40", 40);
        let result = search_decomposition(&space, &q("40"), 1, &q("3"), 10, 0);
        assert!(matches!(result, Err(Error::Timeout { budget: 10 })));
    }

    #[test]
    fn search_seeded_order_still_verifies() {
        let space = path_space("P14", 14);
        for seed in [1u64, 7, 99] {
            match search_decomposition(&space, &q("2"), 1, &q("6"), 500_000, seed).unwrap() {
                SearchOutcome::Found(cert) => {
                    assert!(verify_certificate(&cert).passed(), "seed {seed}")
                }
                SearchOutcome::NotFound => panic!("seed {seed}: decomposition exists"),
            }
        }
    }
}
