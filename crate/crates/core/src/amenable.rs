//! Group actions on finite spaces, invariant covers, and the
//! amenability-style checks built on them.
//!
//! Everything is checked inside a finite window: a quantifier the
//! window truncates comes back `Uncertified`, never `Pass`. The final
//! piece, [`run_amenable_pipeline`], re-verifies every conclusion it
//! claims instead of trusting its own construction.

use crate::decomp::{Cover, NamedSet};
use crate::error::Error;
use crate::group::{word_norms_auto, ElemIx, GroupWindow};
use crate::metric::{FiniteMetricSpace, PointIx, PointSet};
use crate::nerve::{
    check_equivariance_up_to, check_psi_equivariance, nerve_of_cover, psi_table,
    validate_product_metric, validate_simplicial_action, verify_psi_lipschitz,
    EquivarianceOutcome, EquivariantMapWindow, SimplicialAction, VertIx,
};
use crate::q::Q;
use crate::report::{Report, Verdict};
use std::collections::HashMap;
use std::sync::Arc;

const MAX_FINDINGS: usize = 50;

/// A group window acting on a finite point set, with the action known
/// on part of the window-times-set grid. `None` entries mean unknown,
/// not "outside". An attached metric, when present, lives on the
/// product enumeration, since that is what every downstream check
/// consumes.
#[derive(Debug, Clone)]
pub struct ActionWindow {
    window: Arc<GroupWindow>,
    x_labels: Vec<String>,
    x_index: HashMap<String, PointIx>,
    /// row-major: `action[g * |X| + x]`
    action: Vec<Option<PointIx>>,
    metric: Option<Arc<FiniteMetricSpace>>,
}

impl ActionWindow {
    pub fn new(
        window: Arc<GroupWindow>,
        x_labels: Vec<String>,
        action: Vec<Option<PointIx>>,
        metric: Option<Arc<FiniteMetricSpace>>,
    ) -> Result<Self, Error> {
        if x_labels.is_empty() {
            return Err(Error::format("action window needs a nonempty point set"));
        }
        let mut x_index = HashMap::new();
        for (i, l) in x_labels.iter().enumerate() {
            if l.contains(',') {
                return Err(Error::format(format!(
                    "point label {l:?} contains a comma, which is reserved for pair keys"
                )));
            }
            if x_index.insert(l.clone(), i as PointIx).is_some() {
                return Err(Error::format(format!("duplicate point label {l:?}")));
            }
        }
        if action.len() != window.len() * x_labels.len() {
            return Err(Error::format(format!(
                "action table has {} entries for a {} x {} grid",
                action.len(),
                window.len(),
                x_labels.len()
            )));
        }
        if let Some(bad) = action
            .iter()
            .flatten()
            .find(|&&y| y as usize >= x_labels.len())
        {
            return Err(Error::format(format!(
                "action value {bad} outside the point set"
            )));
        }
        for (x, label) in x_labels.iter().enumerate() {
            match action[window.identity() as usize * x_labels.len() + x] {
                Some(y) if y as usize == x => {}
                Some(y) => {
                    return Err(Error::format(format!(
                        "identity moves {label:?} to {:?}",
                        x_labels[y as usize]
                    )))
                }
                None => {
                    return Err(Error::format(format!(
                        "identity action on {label:?} missing"
                    )))
                }
            }
        }
        if let Some(m) = &metric {
            let mut pairs = Vec::with_capacity(window.len() * x_labels.len());
            for g in window.labels() {
                for x in &x_labels {
                    pairs.push(format!("{g},{x}"));
                }
            }
            if m.labels() != pairs.as_slice() {
                return Err(Error::format(
                    "metric labels do not enumerate the window-times-set product in order",
                ));
            }
        }
        Ok(ActionWindow {
            window,
            x_labels,
            x_index,
            action,
            metric,
        })
    }

    /// Attach (or replace) the product metric. Same label check as the
    /// constructor.
    pub fn with_metric(self, metric: Arc<FiniteMetricSpace>) -> Result<Self, Error> {
        ActionWindow::new(self.window, self.x_labels, self.action, Some(metric))
    }

    /// Action with every group element acting as the identity.
    pub fn trivial(window: Arc<GroupWindow>, x_labels: Vec<String>) -> Result<Self, Error> {
        let n = x_labels.len();
        let action = (0..window.len() * n).map(|k| Some((k % n) as PointIx)).collect();
        ActionWindow::new(window, x_labels, action, None)
    }

    /// The window acting on its own elements by left multiplication;
    /// unknown products stay unknown.
    pub fn left_translation(window: Arc<GroupWindow>) -> Result<Self, Error> {
        let n = window.len();
        let labels = window.labels().to_vec();
        let mut action = Vec::with_capacity(n * n);
        for g in 0..n as ElemIx {
            for x in 0..n as ElemIx {
                action.push(window.mul(g, x));
            }
        }
        ActionWindow::new(window, labels, action, None)
    }

    pub fn window(&self) -> &Arc<GroupWindow> {
        &self.window
    }

    pub fn x_len(&self) -> usize {
        self.x_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn x_label(&self, x: PointIx) -> &str {
        &self.x_labels[x as usize]
    }

    pub fn x_index(&self, label: &str) -> Option<PointIx> {
        self.x_index.get(label).copied()
    }

    pub fn metric(&self) -> Option<&Arc<FiniteMetricSpace>> {
        self.metric.as_ref()
    }

    pub fn act(&self, g: ElemIx, x: PointIx) -> Option<PointIx> {
        self.action[g as usize * self.x_labels.len() + x as usize]
    }

    /// Index of the pair `(g, x)` in the product enumeration, group
    /// element major.
    pub fn pair_index(&self, g: ElemIx, x: PointIx) -> PointIx {
        g * self.x_labels.len() as PointIx + x
    }

    pub fn pair_of(&self, p: PointIx) -> (ElemIx, PointIx) {
        let n = self.x_labels.len() as PointIx;
        (p / n, p % n)
    }

    pub fn pair_count(&self) -> usize {
        self.window.len() * self.x_labels.len()
    }

    /// Labels of the product enumeration, `"g,x"`.
    pub fn pair_labels(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.pair_count());
        for g in self.window.labels() {
            for x in &self.x_labels {
                out.push(format!("{g},{x}"));
            }
        }
        out
    }

    pub fn pair_label(&self, p: PointIx) -> String {
        let (g, x) = self.pair_of(p);
        format!("{},{}", self.window.label(g), self.x_label(x))
    }

    /// Diagonal action on a product index: `g · (h, x) = (gh, gx)`.
    /// `None` when either half is unknown.
    pub fn diagonal_act(&self, g: ElemIx, p: PointIx) -> Option<PointIx> {
        let (h, x) = self.pair_of(p);
        let gh = self.window.mul(g, h)?;
        let gx = self.act(g, x)?;
        Some(self.pair_index(gh, gx))
    }
}

/// Structural coherence of an action window: identity is already
/// enforced; this checks compatibility `(gh)·x = g·(h·x)` wherever all
/// three table entries exist, and counts the triples the window leaves
/// unchecked.
pub fn validate_action(aw: &ActionWindow) -> Report {
    let mut report = Report::new();
    let w = aw.window();
    let mut unchecked: u64 = 0;
    let mut shown = 0usize;
    for g in 0..w.len() as ElemIx {
        for h in 0..w.len() as ElemIx {
            let Some(k) = w.mul(g, h) else {
                unchecked += aw.x_len() as u64;
                continue;
            };
            for x in 0..aw.x_len() as PointIx {
                let via_h = aw.act(h, x).and_then(|y| aw.act(g, y));
                let direct = aw.act(k, x);
                match (direct, via_h) {
                    (Some(a), Some(b)) if a != b => {
                        if shown < MAX_FINDINGS {
                            report.violation(
                                "compatibility",
                                format!(
                                    "({}*{})·{} = {:?} but {}·({}·{}) = {:?}",
                                    w.label(g),
                                    w.label(h),
                                    aw.x_label(x),
                                    aw.x_label(a),
                                    w.label(g),
                                    w.label(h),
                                    aw.x_label(x),
                                    aw.x_label(b)
                                ),
                            );
                            shown += 1;
                        }
                    }
                    (Some(_), Some(_)) => {}
                    _ => unchecked += 1,
                }
            }
        }
    }
    if unchecked > 0 {
        report.caveat(format!(
            "{unchecked} action triples not checkable inside the window"
        ));
    }
    report
}

// ---------------------------------------------------------------------------
// subgroup families

/// A subgroup given by its intersection with the window.
#[derive(Debug, Clone)]
pub struct SubgroupWindow {
    pub name: String,
    /// Sorted element indices; always contains the identity.
    pub elements: Vec<ElemIx>,
}

impl SubgroupWindow {
    pub fn new(name: impl Into<String>, mut elements: Vec<ElemIx>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        SubgroupWindow {
            name: name.into(),
            elements,
        }
    }

    pub fn contains(&self, g: ElemIx) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

/// A family of subgroups, each windowed.
#[derive(Debug, Clone)]
pub struct SubgroupFamilyWindow {
    pub members: Vec<SubgroupWindow>,
}

/// Check each member is a subgroup as far as the window can see
/// (identity, inverses, products), and that the family is closed under
/// in-window conjugation. Closure under passing to arbitrary
/// subgroups is not finitely checkable and is recorded as a caveat.
pub fn validate_family(fam: &SubgroupFamilyWindow, window: &GroupWindow) -> Report {
    let mut report = Report::new();
    let mut unchecked: u64 = 0;
    for member in &fam.members {
        if !member.contains(window.identity()) {
            report.violation(
                "subgroup",
                format!("member {:?} misses the identity", member.name),
            );
        }
        for &g in &member.elements {
            if g as usize >= window.len() {
                report.violation(
                    "subgroup",
                    format!("member {:?} references element {g} outside the window", member.name),
                );
                continue;
            }
            if !member.contains(window.inv(g)) {
                report.violation(
                    "subgroup",
                    format!(
                        "member {:?} contains {} but not its inverse {}",
                        member.name,
                        window.label(g),
                        window.label(window.inv(g))
                    ),
                );
            }
            for &h in &member.elements {
                match window.mul(g, h) {
                    Some(k) if !member.contains(k) => report.violation(
                        "subgroup",
                        format!(
                            "member {:?}: {} * {} = {} falls outside the member",
                            member.name,
                            window.label(g),
                            window.label(h),
                            window.label(k)
                        ),
                    ),
                    Some(_) => {}
                    None => unchecked += 1,
                }
            }
        }
    }
    // conjugation closure, as far as products stay in the window
    for member in &fam.members {
        for c in 0..window.len() as ElemIx {
            let mut conjugate: Vec<ElemIx> = Vec::new();
            let mut complete = true;
            for &g in &member.elements {
                match window.mul(c, g).and_then(|cg| window.mul(cg, window.inv(c))) {
                    Some(k) => conjugate.push(k),
                    None => complete = false,
                }
            }
            if !complete {
                unchecked += 1;
                continue;
            }
            conjugate.sort_unstable();
            conjugate.dedup();
            let covered = fam
                .members
                .iter()
                .any(|m| conjugate.iter().all(|g| m.contains(*g)));
            if !covered {
                report.violation(
                    "conjugation",
                    format!(
                        "conjugate of member {:?} by {} is in no family member",
                        member.name,
                        window.label(c)
                    ),
                );
            }
        }
    }
    if unchecked > 0 {
        report.caveat(format!(
            "{unchecked} products or conjugations leave the window"
        ));
    }
    report.caveat("closure under passing to arbitrary subgroups is not finitely checkable");
    report
}

// ---------------------------------------------------------------------------
// invariant covers of the product

/// A named subset of the product enumeration of `window x X` with its
/// assigned family member.
#[derive(Debug, Clone)]
pub struct FSet {
    pub name: String,
    pub points: PointSet,
    /// Index into the family's member list.
    pub assigned: usize,
}

/// Cover of the product by putative F-subsets.
#[derive(Debug, Clone)]
pub struct FCoverWindow {
    pub family: SubgroupFamilyWindow,
    pub sets: Vec<FSet>,
}

impl FCoverWindow {
    pub fn set_by_points(&self, pts: &PointSet) -> Option<usize> {
        self.sets.iter().position(|s| &s.points == pts)
    }
}

/// Decide whether `u` is an F-subset for the subgroup `f`: `g·U = U`
/// for every window element of `f`, and `g·U ∩ U = ∅` for every window
/// element outside it. Pairs the diagonal action cannot resolve make
/// the verdict `Uncertified` (unless a definite failure is found
/// first; failure dominates).
pub fn is_f_subset(u: &PointSet, f: &SubgroupWindow, aw: &ActionWindow) -> Verdict {
    let mut unresolved: u64 = 0;
    for g in 0..aw.window().len() as ElemIx {
        let mut image = Vec::with_capacity(u.len());
        let mut complete = true;
        for p in u.iter() {
            match aw.diagonal_act(g, p) {
                Some(q) => image.push(q),
                None => complete = false,
            }
        }
        if f.contains(g) {
            // g·U must equal U; spotting one escapee needs no complete
            // image
            for &q in &image {
                if !u.contains(q) {
                    return Verdict::fail(
                        "f-subset",
                        format!(
                            "{} is in the subgroup but moves a point of the set outside it",
                            aw.window().label(g)
                        ),
                    );
                }
            }
            if !complete {
                unresolved += 1;
            } else if PointSet::new(image).len() != u.len() {
                return Verdict::fail(
                    "f-subset",
                    format!("{} collapses the set", aw.window().label(g)),
                );
            }
        } else {
            for &q in &image {
                if u.contains(q) {
                    return Verdict::fail(
                        "f-subset",
                        format!(
                            "{} is outside the subgroup but g·U meets U at {}",
                            aw.window().label(g),
                            aw.pair_label(q)
                        ),
                    );
                }
            }
            if !complete {
                unresolved += 1;
            }
        }
    }
    if unresolved > 0 {
        Verdict::uncertified(format!(
            "{unresolved} group elements could not be fully checked inside the window"
        ))
    } else {
        Verdict::Pass
    }
}

/// The full finite-window amenability check: cover dimension at most
/// `n_cap`, every set an F-subset for its assigned member, the cover
/// G-invariant under the diagonal action, and every `S x {x}` inside a
/// single set. Failure dominates; any window-truncated quantifier
/// downgrades Pass to Uncertified.
pub fn check_n_f_amenable(
    aw: &ActionWindow,
    s: &[ElemIx],
    cover: &FCoverWindow,
    n_cap: u32,
) -> Verdict {
    let mut verdict = Verdict::Pass;

    // dimension = multiplicity - 1 over the product enumeration
    for p in 0..aw.pair_count() as PointIx {
        let mult = cover.sets.iter().filter(|s| s.points.contains(p)).count() as u32;
        if mult > n_cap + 1 {
            return Verdict::fail(
                "dimension",
                format!(
                    "point {} lies in {mult} sets; dimension cap {n_cap} allows {}",
                    aw.pair_label(p),
                    n_cap + 1
                ),
            );
        }
    }

    for set in &cover.sets {
        let Some(f) = cover.family.members.get(set.assigned) else {
            return Verdict::fail(
                "assignment",
                format!("set {:?} assigned to a missing family member", set.name),
            );
        };
        verdict = verdict.and(match is_f_subset(&set.points, f, aw) {
            Verdict::Fail { witness } => Verdict::Fail {
                witness: crate::report::Finding::new(
                    witness.check,
                    format!("set {:?}: {}", set.name, witness.detail),
                ),
            },
            other => other,
        });
        if verdict.is_fail() {
            return verdict;
        }
    }

    // G-invariance: the image of each set under each element is again
    // a listed set
    let mut unresolved: u64 = 0;
    for g in 0..aw.window().len() as ElemIx {
        for set in &cover.sets {
            let image: Option<Vec<PointIx>> =
                set.points.iter().map(|p| aw.diagonal_act(g, p)).collect();
            match image {
                Some(pts) => {
                    let image_set = PointSet::new(pts);
                    if cover.set_by_points(&image_set).is_none() {
                        return Verdict::fail(
                            "invariance",
                            format!(
                                "{}·{:?} is not a cover set",
                                aw.window().label(g),
                                set.name
                            ),
                        );
                    }
                }
                None => unresolved += 1,
            }
        }
    }
    if unresolved > 0 {
        verdict = verdict.and(Verdict::uncertified(format!(
            "{unresolved} set translates could not be computed inside the window"
        )));
    }

    for x in 0..aw.x_len() as PointIx {
        let captured = cover.sets.iter().any(|set| {
            s.iter()
                .all(|&g| set.points.contains(aw.pair_index(g, x)))
        });
        if !captured {
            return Verdict::fail(
                "capture",
                format!(
                    "no cover set contains all of S x {{{}}}",
                    aw.x_label(x)
                ),
            );
        }
    }

    verdict
}

// ---------------------------------------------------------------------------
// the pipeline from an invariant fat cover to a verified map

/// Everything the pipeline produces: the nerve with its induced
/// action, the map `f(x) = psi(e, x)` priced at the given budget, the
/// equivariance verdicts, and a report re-verifying each claimed
/// conclusion rather than trusting the construction.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub action: SimplicialAction,
    pub map: EquivariantMapWindow,
    pub equivariance: EquivarianceOutcome,
    pub report: Report,
}

/// From an invariant cover of the window-times-set product to an
/// equivariant map into its nerve.
///
/// The fatness radius is derived from the budget:
/// `R = (2N+2)(2N+3) / epsilon`, which makes the Lipschitz factor of
/// psi exactly `epsilon`. The metric is validated first; psi's
/// preconditions are re-verified, not assumed; the nerve dimension,
/// the induced action, exact psi equivariance, vertex stabilizers
/// against the assigned family members, and the equivariance of `f`
/// are all checked into the report.
pub fn run_amenable_pipeline(
    aw: &ActionWindow,
    cover: &FCoverWindow,
    product: &Arc<FiniteMetricSpace>,
    epsilon: &Q,
    n_cap: u32,
) -> Result<PipelineResult, Error> {
    if !epsilon.is_positive() {
        return Err(Error::input("the error budget must be positive"));
    }
    for (i, a) in cover.sets.iter().enumerate() {
        if let Some(b) = cover.sets[..i].iter().find(|b| b.points == a.points) {
            return Err(Error::input(format!(
                "cover sets {:?} and {:?} have identical points",
                b.name, a.name
            )));
        }
    }
    let w = aw.window();
    let norms = word_norms_auto(w);

    let metric_report = validate_product_metric(aw, product, &norms);
    if let Some(v) = metric_report.violations.first() {
        return Err(Error::PreconditionFailed {
            detail: format!("product metric: {v}"),
        });
    }
    let mut report = Report::new();
    report.absorb("metric", metric_report);

    let radius = &Q::from_int(2 * (n_cap as i64 + 1) * (2 * n_cap as i64 + 3)) / epsilon;
    let dcover = Cover::new(
        Arc::clone(product),
        cover
            .sets
            .iter()
            .map(|s| NamedSet::new(s.name.clone(), s.points.clone()))
            .collect(),
    )?;
    report.absorb("psi", verify_psi_lipschitz(aw, &dcover, n_cap, &radius)?);

    let nerve = nerve_of_cover(&dcover)?;
    if nerve.dim() > n_cap as usize {
        report.violation(
            "dimension",
            format!("nerve has dimension {}, cap is {n_cap}", nerve.dim()),
        );
    }

    // induced action on nerve vertices: a set goes to the listed set
    // its points land on; windows too small to move a whole set leave
    // the entry unknown
    let nv = cover.sets.len();
    let mut unresolved: u64 = 0;
    let mut table: Vec<Option<VertIx>> = Vec::with_capacity(w.len() * nv);
    for g in 0..w.len() as ElemIx {
        for set in &cover.sets {
            let image: Option<Vec<PointIx>> =
                set.points.iter().map(|p| aw.diagonal_act(g, p)).collect();
            table.push(match image {
                Some(pts) => {
                    let moved = PointSet::new(pts);
                    match cover.set_by_points(&moved) {
                        Some(vi) => Some(vi as VertIx),
                        None => {
                            report.violation(
                                "invariance",
                                format!(
                                    "{}·{:?} is not a cover set",
                                    w.label(g),
                                    set.name
                                ),
                            );
                            None
                        }
                    }
                }
                None => {
                    unresolved += 1;
                    None
                }
            });
        }
    }
    if unresolved > 0 {
        report.caveat(format!(
            "{unresolved} set translates not computable inside the window"
        ));
    }
    let action = SimplicialAction::new(nerve, Arc::clone(w), table)?;
    report.absorb("nerve-action", validate_simplicial_action(&action));
    report.absorb("psi", check_psi_equivariance(aw, &dcover, &action)?);

    // vertex stabilizers against the assigned family members, both
    // directions
    let mut stab_unknown: u64 = 0;
    for (ui, set) in cover.sets.iter().enumerate() {
        let Some(member) = cover.family.members.get(set.assigned) else {
            report.violation(
                "stabilizer",
                format!("set {:?} assigned to a missing family member", set.name),
            );
            continue;
        };
        for g in 0..w.len() as ElemIx {
            match action.act_vertex(g, ui as VertIx) {
                Some(v) if v as usize == ui => {
                    if !member.contains(g) {
                        report.violation(
                            "stabilizer",
                            format!(
                                "{} fixes {:?} but is outside member {:?}",
                                w.label(g),
                                set.name,
                                member.name
                            ),
                        );
                    }
                }
                Some(_) => {
                    if member.contains(g) {
                        report.violation(
                            "stabilizer",
                            format!(
                                "{} is in member {:?} but moves {:?}",
                                w.label(g),
                                member.name,
                                set.name
                            ),
                        );
                    }
                }
                None => stab_unknown += 1,
            }
        }
    }
    if stab_unknown > 0 {
        report.caveat(format!(
            "{stab_unknown} stabilizer memberships not decidable inside the window"
        ));
    }

    let psi = psi_table(&dcover)?;
    let e = w.identity();
    let f: Vec<crate::nerve::NervePoint> = (0..aw.x_len() as PointIx)
        .map(|x| psi[aw.pair_index(e, x) as usize].clone())
        .collect();
    let map = EquivariantMapWindow::new(
        aw.clone(),
        action.clone(),
        f,
        epsilon.clone(),
        norms,
    )?;
    let equivariance = check_equivariance_up_to(&map);
    report.absorb("equivariance", equivariance.report.clone());

    Ok(PipelineResult {
        action,
        map,
        equivariance,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_window, z_window};

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn z6_regular() -> ActionWindow {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        ActionWindow::left_translation(w).unwrap()
    }

    #[test]
    fn left_translation_action_is_coherent() {
        let aw = z6_regular();
        let report = validate_action(&aw);
        assert!(report.passed(), "{report}");
        // full group: no caveats either
        assert!(report.caveats.is_empty());
    }

    #[test]
    fn truncated_window_action_reports_unchecked_triples() {
        let w = Arc::new(z_window(5, &[1], &[q("1")]).unwrap());
        let aw = ActionWindow::left_translation(w).unwrap();
        let report = validate_action(&aw);
        assert!(report.passed());
        assert!(!report.caveats.is_empty());
    }

    #[test]
    fn tampered_action_fails_compatibility() {
        let aw = z6_regular();
        let w = Arc::clone(aw.window());
        let mut table: Vec<Option<PointIx>> = (0..w.len() as ElemIx)
            .flat_map(|g| (0..w.len() as ElemIx).map(move |x| (g, x)))
            .map(|(g, x)| w.mul(g, x))
            .collect();
        // identity row stays honest; break a non-identity entry
        let g = w.element_index("1").unwrap();
        let x = w.element_index("2").unwrap();
        let k = table[g as usize * w.len() + x as usize].unwrap();
        table[g as usize * w.len() + x as usize] = Some((k + 1) % w.len() as PointIx);
        let aw = ActionWindow::new(w, aw.x_labels().to_vec(), table, None).unwrap();
        let report = validate_action(&aw);
        assert!(!report.passed());
        assert_eq!(report.violations[0].check, "compatibility");
    }

    #[test]
    fn whole_product_is_an_f_subset_for_the_whole_group() {
        let aw = z6_regular();
        let everything: PointSet = (0..aw.pair_count() as PointIx).collect();
        let g_full = SubgroupWindow::new("G", (0..6).collect());
        assert!(is_f_subset(&everything, &g_full, &aw).is_pass());
    }

    #[test]
    fn singleton_section_is_an_f_subset_for_the_trivial_subgroup() {
        let aw = z6_regular();
        let e = aw.window().identity();
        let u = PointSet::singleton(aw.pair_index(e, 3));
        let trivial = SubgroupWindow::new("1", vec![e]);
        assert!(is_f_subset(&u, &trivial, &aw).is_pass());
    }

    #[test]
    fn invariant_set_with_small_subgroup_fails_with_witness() {
        // the whole product is invariant under everything, so assigning
        // the trivial subgroup must fail and name a mover
        let aw = z6_regular();
        let everything: PointSet = (0..aw.pair_count() as PointIx).collect();
        let e = aw.window().identity();
        let trivial = SubgroupWindow::new("1", vec![e]);
        let v = is_f_subset(&everything, &trivial, &aw);
        let Verdict::Fail { witness } = v else {
            panic!("expected failure, got {v:?}");
        };
        assert_eq!(witness.check, "f-subset");
        assert!(witness.detail.contains("meets U"), "{witness}");
    }

    #[test]
    fn truncated_window_gives_uncertified_not_pass() {
        // Z window [-5,5]: translating the full section by 1 pushes
        // element 5 out of the window, so equality cannot be certified
        let w = Arc::new(z_window(5, &[1], &[q("1")]).unwrap());
        let aw = ActionWindow::left_translation(w).unwrap();
        let everything: PointSet = (0..aw.pair_count() as PointIx).collect();
        let all = SubgroupWindow::new("Z", (0..aw.window().len() as ElemIx).collect());
        let v = is_f_subset(&everything, &all, &aw);
        assert!(v.is_uncertified(), "{v:?}");
    }

    #[test]
    fn family_validation_catches_broken_subgroups() {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let e = w.identity();
        let two = w.element_index("2").unwrap();
        let four = w.element_index("4").unwrap();
        let good = SubgroupFamilyWindow {
            members: vec![
                SubgroupWindow::new("1", vec![e]),
                SubgroupWindow::new("even", vec![e, two, four]),
            ],
        };
        let report = validate_family(&good, &w);
        assert!(report.passed(), "{report}");

        let no_identity = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("bad", vec![two, four])],
        };
        assert!(!validate_family(&no_identity, &w).passed());

        let not_closed = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("bad", vec![e, two])],
        };
        let report = validate_family(&not_closed, &w);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "subgroup" && v.detail.contains("2 * 2 = 4")));
    }

    #[test]
    fn amenability_check_passes_single_set_cover() {
        let aw = z6_regular();
        let everything: PointSet = (0..aw.pair_count() as PointIx).collect();
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("G", (0..6).collect())],
        };
        let cover = FCoverWindow {
            family,
            sets: vec![FSet {
                name: "all".into(),
                points: everything,
                assigned: 0,
            }],
        };
        let s: Vec<ElemIx> = (0..6).collect();
        assert!(check_n_f_amenable(&aw, &s, &cover, 0).is_pass());
    }

    #[test]
    fn amenability_check_fails_on_missing_capture() {
        // two half covers, trivial action on two points: S x {x} fits,
        // but drop one set and its x loses capture
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let aw = ActionWindow::trivial(w, vec!["p".into(), "q".into()]).unwrap();
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("G", (0..6).collect())],
        };
        let section = |x: PointIx, aw: &ActionWindow| -> PointSet {
            (0..aw.window().len() as ElemIx)
                .map(|g| aw.pair_index(g, x))
                .collect()
        };
        let full = FCoverWindow {
            family: family.clone(),
            sets: vec![
                FSet {
                    name: "Gp".into(),
                    points: section(0, &aw),
                    assigned: 0,
                },
                FSet {
                    name: "Gq".into(),
                    points: section(1, &aw),
                    assigned: 0,
                },
            ],
        };
        let s: Vec<ElemIx> = (0..6).collect();
        assert!(check_n_f_amenable(&aw, &s, &full, 0).is_pass());

        let half = FCoverWindow {
            family,
            sets: vec![FSet {
                name: "Gp".into(),
                points: section(0, &aw),
                assigned: 0,
            }],
        };
        let v = check_n_f_amenable(&aw, &s, &half, 0);
        let Verdict::Fail { witness } = v else {
            panic!("expected capture failure, got {v:?}");
        };
        assert_eq!(witness.check, "capture");
        assert!(witness.detail.contains("{q}"), "{witness}");
    }

    #[test]
    fn amenability_check_fails_on_dimension_overflow() {
        let aw = z6_regular();
        let everything: PointSet = (0..aw.pair_count() as PointIx).collect();
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("G", (0..6).collect())],
        };
        let cover = FCoverWindow {
            family,
            sets: vec![
                FSet {
                    name: "a".into(),
                    points: everything.clone(),
                    assigned: 0,
                },
                FSet {
                    name: "b".into(),
                    points: everything,
                    assigned: 0,
                },
            ],
        };
        let s = vec![aw.window().identity()];
        let v = check_n_f_amenable(&aw, &s, &cover, 0);
        assert!(matches!(&v, Verdict::Fail { witness } if witness.check == "dimension"), "{v:?}");
    }

    /// Z window acting trivially on two fibers, full sections as the
    /// cover, `|g-h| + cross·[x≠y]` as the metric.
    fn two_fiber_fixture(cross: i64) -> (ActionWindow, FCoverWindow, Arc<FiniteMetricSpace>) {
        let w = Arc::new(z_window(20, &[1], &[q("1")]).unwrap());
        let aw =
            ActionWindow::trivial(Arc::clone(&w), vec!["+".into(), "-".into()]).unwrap();
        let n = aw.pair_count();
        let mut matrix = vec![vec![Q::from_int(0); n]; n];
        for a in 0..n as PointIx {
            for b in 0..n as PointIx {
                let (g, x) = aw.pair_of(a);
                let (h, y) = aw.pair_of(b);
                let gv: i64 = w.label(g).parse().unwrap();
                let hv: i64 = w.label(h).parse().unwrap();
                let mut d = Q::from_int((gv - hv).abs());
                if x != y {
                    d = &d + &Q::from_int(cross);
                }
                matrix[a as usize][b as usize] = d;
            }
        }
        let product = Arc::new(
            FiniteMetricSpace::new_dense("Zx2", aw.pair_labels(), matrix).unwrap(),
        );
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new(
                "Z",
                (0..w.len() as ElemIx).collect(),
            )],
        };
        let sect = |x: PointIx| -> PointSet {
            (0..aw.window().len() as ElemIx)
                .map(|g| aw.pair_index(g, x))
                .collect()
        };
        let cover = FCoverWindow {
            family,
            sets: vec![
                FSet {
                    name: "G+".into(),
                    points: sect(0),
                    assigned: 0,
                },
                FSet {
                    name: "G-".into(),
                    points: sect(1),
                    assigned: 0,
                },
            ],
        };
        (aw, cover, product)
    }

    /// Z/6 translating itself; cover sets collect the pairs whose
    /// difference g⁻¹x falls in one of two overlapping arcs, so both
    /// are globally invariant and meet in two difference classes.
    fn z6_difference_fixture() -> (ActionWindow, FCoverWindow, Arc<FiniteMetricSpace>) {
        let w = Arc::new(cyclic_window(6, q("1")).unwrap());
        let aw = ActionWindow::left_translation(Arc::clone(&w)).unwrap();
        let norms = word_norms_auto(&w);
        let n = aw.pair_count();
        let diff = |p: PointIx| -> u32 {
            let (g, x) = aw.pair_of(p);
            w.mul(w.inv(g), x).unwrap()
        };
        let mut matrix = vec![vec![Q::from_int(0); n]; n];
        for a in 0..n as PointIx {
            for b in 0..n as PointIx {
                let (g, _) = aw.pair_of(a);
                let (h, _) = aw.pair_of(b);
                let dw = norms.word_distance(g, h).unwrap();
                matrix[a as usize][b as usize] = if diff(a) == diff(b) {
                    dw
                } else {
                    dw.max(Q::from_int(1))
                };
            }
        }
        let product = Arc::new(
            FiniteMetricSpace::new_dense("Z6xZ6", aw.pair_labels(), matrix).unwrap(),
        );
        let arc_set = |members: [u32; 4]| -> PointSet {
            (0..n as PointIx)
                .filter(|&p| members.contains(&diff(p)))
                .collect()
        };
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("G", (0..6).collect())],
        };
        let cover = FCoverWindow {
            family,
            sets: vec![
                FSet {
                    name: "U".into(),
                    points: arc_set([0, 1, 2, 3]),
                    assigned: 0,
                },
                FSet {
                    name: "V".into(),
                    points: arc_set([3, 4, 5, 0]),
                    assigned: 0,
                },
            ],
        };
        (aw, cover, product)
    }

    #[test]
    fn pipeline_certifies_the_difference_cover() {
        let (aw, cover, product) = z6_difference_fixture();
        let out = run_amenable_pipeline(&aw, &cover, &product, &q("20"), 1).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        assert!(out.equivariance.global.is_pass(), "{:?}", out.equivariance.global);
        assert!(out.equivariance.generator.is_pass());
        assert_eq!(out.action.complex().dim(), 1);
        // f(x) = psi(e, x): vertex U on differences 1..2, vertex V on
        // 4..5, the edge midpoint on the shared differences 0 and 3
        let half = q("1/2");
        assert_eq!(out.map.f[1], crate::nerve::NervePoint::vertex(0));
        assert_eq!(out.map.f[4], crate::nerve::NervePoint::vertex(1));
        assert_eq!(out.map.f[0].coord(0), Some(&half));
        assert_eq!(out.map.f[0].coord(1), Some(&half));
        assert_eq!(out.map.f[3].coord(0), Some(&half));

        // the same cover data passes the membership check for S = {e}
        let s = vec![aw.window().identity()];
        assert!(check_n_f_amenable(&aw, &s, &cover, 1).is_pass());
        // but a full-window S outruns the arcs
        let all: Vec<ElemIx> = (0..6).collect();
        let v = check_n_f_amenable(&aw, &all, &cover, 1);
        assert!(matches!(&v, Verdict::Fail { witness } if witness.check == "capture"), "{v:?}");
    }

    #[test]
    fn pipeline_on_truncated_fibers_stays_honest() {
        let (aw, cover, product) = two_fiber_fixture(10);
        let out = run_amenable_pipeline(&aw, &cover, &product, &q("1"), 0).unwrap();
        // nothing failed, but set translates and norms leave the
        // window, so the global verdict cannot be a pass
        assert!(out.report.passed(), "{}", out.report);
        assert!(!out.report.caveats.is_empty());
        assert!(out.equivariance.global.is_uncertified());
        assert_eq!(out.action.complex().dim(), 0);
        assert_eq!(out.map.f[0], crate::nerve::NervePoint::vertex(0));
        assert_eq!(out.map.f[1], crate::nerve::NervePoint::vertex(1));
    }

    #[test]
    fn pipeline_preconditions() {
        // cross-fiber gap 3 is thinner than the derived radius 6
        let (aw, cover, product) = two_fiber_fixture(3);
        match run_amenable_pipeline(&aw, &cover, &product, &q("1"), 0) {
            Err(Error::PreconditionFailed { detail }) => {
                assert!(detail.contains("ball"), "{detail}");
            }
            other => panic!("expected fatness failure, got {other:?}"),
        }

        // a metric whose fibers disagree with the word metric
        let (aw, cover, _) = two_fiber_fixture(10);
        let n = aw.pair_count();
        let mut matrix = vec![vec![Q::from_int(0); n]; n];
        for a in 0..n as PointIx {
            for b in 0..n as PointIx {
                let (g, x) = aw.pair_of(a);
                let (h, y) = aw.pair_of(b);
                let gv: i64 = aw.window().label(g).parse().unwrap();
                let hv: i64 = aw.window().label(h).parse().unwrap();
                let mut d = Q::from_int(2 * (gv - hv).abs());
                if x != y {
                    d = &d + &Q::from_int(10);
                }
                matrix[a as usize][b as usize] = d;
            }
        }
        let stretched = Arc::new(
            FiniteMetricSpace::new_dense("Zx2", aw.pair_labels(), matrix).unwrap(),
        );
        match run_amenable_pipeline(&aw, &cover, &stretched, &q("1"), 0) {
            Err(Error::PreconditionFailed { detail }) => {
                assert!(detail.contains("word metric"), "{detail}");
            }
            other => panic!("expected metric failure, got {other:?}"),
        }

        let (aw, cover, product) = two_fiber_fixture(10);
        assert!(matches!(
            run_amenable_pipeline(&aw, &cover, &product, &q("0"), 0),
            Err(Error::InputInvalid { .. })
        ));
    }

    #[test]
    fn pipeline_flags_stabilizers_outside_the_member() {
        let (aw, mut cover, product) = z6_difference_fixture();
        cover
            .family
            .members
            .push(SubgroupWindow::new("1", vec![aw.window().identity()]));
        cover.sets[0].assigned = 1;
        let out = run_amenable_pipeline(&aw, &cover, &product, &q("20"), 1).unwrap();
        assert!(!out.report.passed());
        assert!(out
            .report
            .violations
            .iter()
            .any(|v| v.check == "stabilizer"), "{}", out.report);
    }

    #[test]
    fn amenability_check_fails_on_broken_invariance() {
        // a single proper section of the regular action is not
        // invariant: translating it gives an unlisted set, caught
        // before capture runs because invariance is checked per set
        let aw = z6_regular();
        let family = SubgroupFamilyWindow {
            members: vec![SubgroupWindow::new("1", vec![aw.window().identity()])],
        };
        let single: PointSet =
            PointSet::singleton(aw.pair_index(aw.window().identity(), 0));
        let cover = FCoverWindow {
            family,
            sets: vec![FSet {
                name: "pt".into(),
                points: single,
                assigned: 0,
            }],
        };
        let s = vec![aw.window().identity()];
        let v = check_n_f_amenable(&aw, &s, &cover, 0);
        let Verdict::Fail { witness } = v else {
            panic!("expected invariance failure, got {v:?}");
        };
        assert_eq!(witness.check, "invariance");
    }
}
