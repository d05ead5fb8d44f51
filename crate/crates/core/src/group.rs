//! Group windows and weighted word metrics.
//!
//! A window is a finite chunk of a group: elements, a total inverse
//! table, and a partial multiplication table that is defined exactly
//! where the product stays inside the window. Word norms are computed
//! by shortest generator paths inside the window; a norm is marked
//! certified only when no path of the relevant weight can leave the
//! window, so values never silently depend on what the window cut off.

use crate::error::Error;
use crate::metric::{FiniteMetricSpace, PointSet};
use crate::q::Q;
use crate::report::Report;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

pub type ElemIx = u32;

#[derive(Debug, Clone)]
pub struct GroupWindow {
    id: String,
    elements: Vec<String>,
    index: HashMap<String, ElemIx>,
    identity: ElemIx,
    /// Row-major `n*n`; `None` where the product leaves the window.
    mult: Vec<Option<ElemIx>>,
    inv: Vec<ElemIx>,
    /// Generators with weights; symmetric (`s` and `s^-1` both listed,
    /// equal weights). Sorted by element index.
    gens: Vec<(ElemIx, Q)>,
}

impl GroupWindow {
    pub fn new(
        id: impl Into<String>,
        elements: Vec<String>,
        identity: &str,
        mult: Vec<Option<ElemIx>>,
        inv: Vec<ElemIx>,
        mut gens: Vec<(ElemIx, Q)>,
    ) -> Result<Self, Error> {
        let id = id.into();
        let n = elements.len();
        if n == 0 {
            return Err(Error::format(format!("window {id:?} has no elements")));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i as ElemIx).is_some() {
                return Err(Error::format(format!(
                    "window {id:?}: duplicate element label {e:?}"
                )));
            }
        }
        let identity = *index
            .get(identity)
            .ok_or_else(|| Error::format(format!("window {id:?}: identity {identity:?} not listed")))?;
        if mult.len() != n * n {
            return Err(Error::format(format!(
                "window {id:?}: multiplication table has {} entries, expected {}",
                mult.len(),
                n * n
            )));
        }
        if let Some(&Some(bad)) = mult.iter().find(|e| matches!(e, Some(x) if *x as usize >= n)) {
            return Err(Error::format(format!(
                "window {id:?}: product index {bad} out of range"
            )));
        }
        if inv.len() != n || inv.iter().any(|&i| i as usize >= n) {
            return Err(Error::format(format!(
                "window {id:?}: inverse table must list every element"
            )));
        }
        if gens.is_empty() {
            return Err(Error::format(format!("window {id:?}: no generators")));
        }
        for (g, w) in &gens {
            if *g as usize >= n {
                return Err(Error::format(format!(
                    "window {id:?}: generator index {g} out of range"
                )));
            }
            if !w.is_positive() {
                return Err(Error::format(format!(
                    "window {id:?}: generator {:?} has non-positive weight {w}",
                    elements[*g as usize]
                )));
            }
        }
        gens.sort_by_key(|(g, _)| *g);
        gens.dedup_by(|a, b| a.0 == b.0);
        Ok(GroupWindow {
            id,
            elements,
            index,
            identity,
            mult,
            inv,
            gens,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: ElemIx) -> &str {
        &self.elements[i as usize]
    }

    pub fn element_index(&self, label: &str) -> Option<ElemIx> {
        self.index.get(label).copied()
    }

    pub fn identity(&self) -> ElemIx {
        self.identity
    }

    /// Product if it stays in the window.
    pub fn mul(&self, a: ElemIx, b: ElemIx) -> Option<ElemIx> {
        self.mult[a as usize * self.elements.len() + b as usize]
    }

    pub fn inv(&self, a: ElemIx) -> ElemIx {
        self.inv[a as usize]
    }

    pub fn gens(&self) -> &[(ElemIx, Q)] {
        &self.gens
    }

    pub fn gen_weight(&self, g: ElemIx) -> Option<&Q> {
        self.gens
            .binary_search_by_key(&g, |(e, _)| *e)
            .ok()
            .map(|k| &self.gens[k].1)
    }
}

/// Check the group laws as far as the window can see: identity row and
/// column, inverse involution and products, generator symmetry, and
/// associativity coherence on every triple whose intermediate products
/// are defined.
pub fn validate_group_window(w: &GroupWindow) -> Report {
    let mut report = Report::new();
    let n = w.len() as ElemIx;
    let e = w.identity;
    for g in 0..n {
        match w.mul(e, g) {
            Some(x) if x == g => {}
            Some(x) => report.violation(
                "identity",
                format!("e*{} = {}, expected {0}", w.label(g), w.label(x)),
            ),
            None => report.violation(
                "identity",
                format!("e*{} undefined although the result is in the window", w.label(g)),
            ),
        }
        match w.mul(g, e) {
            Some(x) if x == g => {}
            Some(x) => report.violation(
                "identity",
                format!("{}*e = {}, expected {0}", w.label(g), w.label(x)),
            ),
            None => report.violation(
                "identity",
                format!("{}*e undefined although the result is in the window", w.label(g)),
            ),
        }
        let gi = w.inv(g);
        if w.inv(gi) != g {
            report.violation(
                "inverse",
                format!(
                    "inv(inv({})) = {}, expected {0}",
                    w.label(g),
                    w.label(w.inv(gi))
                ),
            );
        }
        match w.mul(g, gi) {
            Some(x) if x == e => {}
            Some(x) => report.violation(
                "inverse",
                format!("{}*inv = {}, expected identity", w.label(g), w.label(x)),
            ),
            None => report.violation(
                "inverse",
                format!(
                    "{}*{} undefined although the result (identity) is in the window",
                    w.label(g),
                    w.label(gi)
                ),
            ),
        }
    }
    for (g, weight) in w.gens() {
        if *g == e {
            report.violation("generators", "identity listed as a generator");
        }
        let gi = w.inv(*g);
        match w.gen_weight(gi) {
            None => report.violation(
                "generators",
                format!(
                    "generator {} has no inverse generator {}",
                    w.label(*g),
                    w.label(gi)
                ),
            ),
            Some(wi) if wi != weight => report.violation(
                "generators",
                format!(
                    "generator {} has weight {weight} but inverse has {wi}",
                    w.label(*g)
                ),
            ),
            _ => {}
        }
    }
    // associativity coherence: when gh and hk are both in the window,
    // (gh)k and g(hk) must be the same element or both out of window
    let mut assoc_bad = 0usize;
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = w.mul(g, h) else { continue };
            for k in 0..n {
                let Some(hk) = w.mul(h, k) else { continue };
                let left = w.mul(gh, k);
                let right = w.mul(g, hk);
                if left != right {
                    if assoc_bad < 50 {
                        let show = |x: Option<ElemIx>| match x {
                            Some(i) => w.label(i).to_string(),
                            None => "<outside>".to_string(),
                        };
                        report.violation(
                            "associativity",
                            format!(
                                "({g_}*{h_})*{k_} = {} but {g_}*({h_}*{k_}) = {}",
                                show(left),
                                show(right),
                                g_ = w.label(g),
                                h_ = w.label(h),
                                k_ = w.label(k)
                            ),
                        );
                    }
                    assoc_bad += 1;
                }
            }
        }
    }
    if assoc_bad > 50 {
        report.caveat(format!("{} further associativity violations truncated", assoc_bad - 50));
    }
    report
}

/// Word norms on a window, certified up to a radius.
///
/// `norms[g] = Some(t)` means the weighted word norm of `g` is exactly
/// `t` and `t <= radius`. `None` means the norm is certified to exceed
/// the radius (no generator word of weight `<= radius` reaches `g`).
#[derive(Debug, Clone)]
pub struct WordMetricTable {
    window: Arc<GroupWindow>,
    radius: Q,
    norms: Vec<Option<Q>>,
}

impl WordMetricTable {
    pub fn window(&self) -> &Arc<GroupWindow> {
        &self.window
    }

    pub fn radius(&self) -> &Q {
        &self.radius
    }

    pub fn norm(&self, g: ElemIx) -> Option<&Q> {
        self.norms[g as usize].as_ref()
    }

    /// `d(g, h) = |g^-1 h|`, certified or an error.
    pub fn word_distance(&self, g: ElemIx, h: ElemIx) -> Result<Q, Error> {
        let w = &self.window;
        let p = w.mul(w.inv(g), h).ok_or_else(|| Error::Uncertified {
            detail: format!(
                "product inv({})*{} leaves the window",
                w.label(g),
                w.label(h)
            ),
        })?;
        self.norms[p as usize].clone().ok_or_else(|| Error::Uncertified {
            detail: format!(
                "norm of inv({})*{} = {} exceeds the certified radius {}",
                w.label(g),
                w.label(h),
                w.label(p),
                self.radius
            ),
        })
    }
}

fn dijkstra(window: &GroupWindow) -> Vec<Option<Q>> {
    let n = window.len();
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(Q, ElemIx)>> = BinaryHeap::new();
    dist[window.identity() as usize] = Some(Q::ZERO);
    heap.push(Reverse((Q::ZERO, window.identity())));
    while let Some(Reverse((d, g))) = heap.pop() {
        if done[g as usize] {
            continue;
        }
        done[g as usize] = true;
        for (s, w) in window.gens() {
            if let Some(next) = window.mul(g, *s) {
                let nd = &d + w;
                if dist[next as usize].as_ref().is_none_or(|old| &nd < old) {
                    dist[next as usize] = Some(nd.clone());
                    heap.push(Reverse((nd, next)));
                }
            }
        }
    }
    dist
}

/// Largest radius the window certifies: the smallest in-window shortest
/// path distance at which some generator step leaves the window.
/// `None` if no step ever leaves (the window is closed under the
/// generators).
fn certification_cutoff(window: &GroupWindow, dist: &[Option<Q>]) -> Option<Q> {
    let mut cutoff: Option<Q> = None;
    for g in 0..window.len() as ElemIx {
        let Some(d) = &dist[g as usize] else { continue };
        let escapes = window.gens().iter().any(|(s, _)| window.mul(g, *s).is_none());
        if escapes && cutoff.as_ref().is_none_or(|c| d < c) {
            cutoff = Some(d.clone());
        }
    }
    cutoff
}

/// Compute certified word norms up to `radius`.
///
/// Errors with `WindowTooSmall` if the window is not a full metric ball
/// of the claimed radius: some element within the radius has a
/// generator step leaving the window, so a shorter outside path cannot
/// be ruled out.
pub fn word_norms(window: &Arc<GroupWindow>, radius: Q) -> Result<WordMetricTable, Error> {
    if radius.is_negative() {
        return Err(Error::input("negative radius"));
    }
    let dist = dijkstra(window);
    if let Some(cutoff) = certification_cutoff(window, &dist) {
        if cutoff < radius {
            // witness: element at the cutoff with an escaping generator
            for g in 0..window.len() as ElemIx {
                let Some(d) = &dist[g as usize] else { continue };
                if *d != cutoff {
                    continue;
                }
                if let Some((s, _)) = window
                    .gens()
                    .iter()
                    .find(|(s, _)| window.mul(g, *s).is_none())
                {
                    return Err(Error::WindowTooSmall {
                        window: window.id().to_string(),
                        radius,
                        element: window.label(g).to_string(),
                        norm: d.clone(),
                        generator: window.label(*s).to_string(),
                    });
                }
            }
        }
    }
    let norms = dist
        .into_iter()
        .map(|d| d.filter(|d| d <= &radius))
        .collect();
    Ok(WordMetricTable {
        window: Arc::clone(window),
        radius,
        norms,
    })
}

/// Compute word norms at the largest radius this window certifies.
pub fn word_norms_auto(window: &Arc<GroupWindow>) -> WordMetricTable {
    let dist = dijkstra(window);
    let radius = match certification_cutoff(window, &dist) {
        Some(c) => c,
        // closed under generators: every computed distance is exact
        None => dist
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or(Q::ZERO),
    };
    let norms = dist
        .into_iter()
        .map(|d| d.filter(|d| d <= &radius))
        .collect();
    WordMetricTable {
        window: Arc::clone(window),
        radius,
        norms,
    }
}

/// Exhaustively check `d(ag, ah) = d(g, h)` over all window triples
/// where both products and both distances are certified. Skipped
/// triples are counted in a caveat, never treated as passing.
pub fn check_left_invariance(table: &WordMetricTable) -> Report {
    let mut report = Report::new();
    let w = table.window();
    let n = w.len() as ElemIx;
    let mut skipped = 0u64;
    let mut violations = 0usize;
    for a in 0..n {
        for g in 0..n {
            let Some(ag) = w.mul(a, g) else {
                skipped += n as u64;
                continue;
            };
            for h in 0..n {
                let Some(ah) = w.mul(a, h) else {
                    skipped += 1;
                    continue;
                };
                let (d1, d2) = match (table.word_distance(g, h), table.word_distance(ag, ah)) {
                    (Ok(d1), Ok(d2)) => (d1, d2),
                    _ => {
                        skipped += 1;
                        continue;
                    }
                };
                if d1 != d2 {
                    if violations < 50 {
                        report.violation(
                            "left-invariance",
                            format!(
                                "d({}, {}) = {d1} but translating by {} gives d({}, {}) = {d2}",
                                w.label(g),
                                w.label(h),
                                w.label(a),
                                w.label(ag),
                                w.label(ah)
                            ),
                        );
                    }
                    violations += 1;
                }
            }
        }
    }
    if violations > 50 {
        report.caveat(format!("{} further violations truncated", violations - 50));
    }
    if skipped > 0 {
        report.caveat(format!(
            "{skipped} triples skipped where products or distances leave the certified window"
        ));
    }
    report
}

/// Export the strict ball `{ g : |g| < R }` as a metric space with
/// `d(g, h) = |g^-1 h|`.
///
/// Requires `R` within the table's certified radius and every pairwise
/// product and norm certified; otherwise `Uncertified`. An empty ball
/// (for example `R = 0`) is an error.
pub fn group_ball(table: &WordMetricTable, radius: &Q) -> Result<FiniteMetricSpace, Error> {
    let w = table.window();
    if radius > table.radius() {
        return Err(Error::Uncertified {
            detail: format!(
                "ball radius {radius} exceeds the certified radius {}",
                table.radius()
            ),
        });
    }
    let members: Vec<ElemIx> = (0..w.len() as ElemIx)
        .filter(|&g| table.norm(g).is_some_and(|t| t < radius))
        .collect();
    if members.is_empty() {
        return Err(Error::EmptyBall {
            radius: radius.clone(),
        });
    }
    let labels: Vec<String> = members.iter().map(|&g| w.label(g).to_string()).collect();
    let mut matrix = Vec::with_capacity(members.len());
    for &g in &members {
        let mut row = Vec::with_capacity(members.len());
        for &h in &members {
            row.push(table.word_distance(g, h)?);
        }
        matrix.push(row);
    }
    FiniteMetricSpace::new_dense(format!("{}.ball({})", w.id(), radius), labels, matrix)
}

/// Members of the strict ball as indices into the window.
pub fn ball_members(table: &WordMetricTable, radius: &Q) -> PointSet {
    (0..table.window().len() as ElemIx)
        .filter(|&g| table.norm(g).is_some_and(|t| t < radius))
        .collect()
}

// ---------------------------------------------------------------------------
// built-in windows

fn dense_mult<F>(labels: &[String], index: &HashMap<String, ElemIx>, op: F) -> Vec<Option<ElemIx>>
where
    F: Fn(&str, &str) -> Option<String>,
{
    let n = labels.len();
    let mut mult = vec![None; n * n];
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if let Some(p) = op(a, b) {
                mult[i * n + j] = index.get(&p).copied();
            }
        }
    }
    mult
}

fn window_from_op<FOp, FInv>(
    id: String,
    labels: Vec<String>,
    identity: &str,
    op: FOp,
    inv_op: FInv,
    gens: Vec<(String, Q)>,
) -> Result<GroupWindow, Error>
where
    FOp: Fn(&str, &str) -> Option<String>,
    FInv: Fn(&str) -> String,
{
    let mut index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        index.insert(l.clone(), i as ElemIx);
    }
    let mult = dense_mult(&labels, &index, op);
    let inv = labels
        .iter()
        .map(|l| {
            index.get(&inv_op(l)).copied().ok_or_else(|| {
                Error::format(format!("window {id:?}: inverse of {l:?} not in window"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gens = gens
        .into_iter()
        .map(|(l, w)| {
            index
                .get(&l)
                .copied()
                .map(|i| (i, w))
                .ok_or_else(|| Error::format(format!("window {id:?}: generator {l:?} not in window")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupWindow::new(id, labels, identity, mult, inv, gens)
}

/// Integers in `[-half, half]` with generator steps `steps[i] > 0`
/// (both signs) weighted by `weights[i]`.
pub fn z_window(half: i64, steps: &[i64], weights: &[Q]) -> Result<GroupWindow, Error> {
    if half < 0 || steps.is_empty() || steps.len() != weights.len() {
        return Err(Error::input("z_window: need half >= 0 and one weight per step"));
    }
    if steps.iter().any(|&s| s <= 0 || s > half) {
        return Err(Error::input("z_window: steps must be positive and fit the window"));
    }
    let labels: Vec<String> = (-half..=half).map(|v| v.to_string()).collect();
    let in_win = move |v: i64| v >= -half && v <= half;
    let mut gens = Vec::new();
    for (s, w) in steps.iter().zip(weights) {
        gens.push((s.to_string(), w.clone()));
        gens.push(((-s).to_string(), w.clone()));
    }
    window_from_op(
        format!("Z[{}]", half),
        labels,
        "0",
        move |a, b| {
            let v = a.parse::<i64>().unwrap() + b.parse::<i64>().unwrap();
            in_win(v).then(|| v.to_string())
        },
        |a| (-a.parse::<i64>().unwrap()).to_string(),
        gens,
    )
}

fn join_coords(c: &[i64]) -> String {
    c.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn split_coords(s: &str) -> Vec<i64> {
    s.split(';').map(|p| p.parse::<i64>().unwrap()).collect()
}

/// `Z^d` box window `[-half, half]^d` with unit-vector generators.
pub fn zd_window(dim: usize, half: i64, weights: &[Q]) -> Result<GroupWindow, Error> {
    if dim < 2 || half < 1 || weights.len() != dim {
        return Err(Error::input(
            "zd_window: need dim >= 2, half >= 1, one weight per axis",
        ));
    }
    let mut labels = Vec::new();
    let mut cur = vec![-half; dim];
    loop {
        labels.push(join_coords(&cur));
        let mut k = dim;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if cur[k] < half {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = -half;
                }
                break;
            }
            if k == 0 {
                cur.clear();
                break;
            }
        }
        if cur.is_empty() {
            break;
        }
    }
    let mut gens = Vec::new();
    for (axis, w) in weights.iter().enumerate() {
        let mut plus = vec![0i64; dim];
        plus[axis] = 1;
        let mut minus = vec![0i64; dim];
        minus[axis] = -1;
        gens.push((join_coords(&plus), w.clone()));
        gens.push((join_coords(&minus), w.clone()));
    }
    let identity = join_coords(&vec![0; dim]);
    window_from_op(
        format!("Z^{dim}[{half}]"),
        labels,
        &identity,
        move |a, b| {
            let v: Vec<i64> = split_coords(a)
                .iter()
                .zip(split_coords(b))
                .map(|(x, y)| x + y)
                .collect();
            v.iter().all(|c| c.abs() <= half).then(|| join_coords(&v))
        },
        |a| join_coords(&split_coords(a).iter().map(|v| -v).collect::<Vec<_>>()),
        gens,
    )
}

/// Cyclic group of order `n`, full window, generators `+-1`.
pub fn cyclic_window(n: i64, weight: Q) -> Result<GroupWindow, Error> {
    if n < 2 {
        return Err(Error::input("cyclic_window: need order >= 2"));
    }
    let labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let gens = vec![
        ("1".to_string(), weight.clone()),
        (((n - 1) % n).to_string(), weight),
    ];
    window_from_op(
        format!("Z/{n}"),
        labels,
        "0",
        move |a, b| {
            Some(((a.parse::<i64>().unwrap() + b.parse::<i64>().unwrap()) % n).to_string())
        },
        move |a| (((-a.parse::<i64>().unwrap()) % n + n) % n).to_string(),
        gens,
    )
}

/// Dihedral group of order `2n`: rotations `r0..r{n-1}` and
/// reflections `s0..s{n-1}` where `sk = s * r^k`. Generators are
/// `r^{+-1}` (weight `w_r`) and `s` (weight `w_s`).
pub fn dihedral_window(n: i64, w_r: Q, w_s: Q) -> Result<GroupWindow, Error> {
    if n < 2 {
        return Err(Error::input("dihedral_window: need n >= 2"));
    }
    let mut labels = Vec::new();
    for k in 0..n {
        labels.push(format!("r{k}"));
    }
    for k in 0..n {
        labels.push(format!("s{k}"));
    }
    let parse = |l: &str| -> (i64, i64) {
        let (eps, k) = l.split_at(1);
        (if eps == "s" { 1 } else { 0 }, k.parse().unwrap())
    };
    let show = move |eps: i64, k: i64| {
        let k = ((k % n) + n) % n;
        if eps % 2 == 1 {
            format!("s{k}")
        } else {
            format!("r{k}")
        }
    };
    let gens = vec![
        ("r1".to_string(), w_r.clone()),
        (show(0, n - 1), w_r),
        ("s0".to_string(), w_s),
    ];
    window_from_op(
        format!("D_{n}"),
        labels,
        "r0",
        move |a, b| {
            // (eps, k)(delta, m) = (eps + delta, (-1)^delta * k + m)
            let (eps, k) = parse(a);
            let (delta, m) = parse(b);
            let sign = if delta % 2 == 1 { -1 } else { 1 };
            Some(show(eps + delta, sign * k + m))
        },
        move |a| {
            let (eps, k) = parse(a);
            let sign = if eps % 2 == 1 { 1 } else { -1 };
            show(eps, sign * k)
        },
        gens,
    )
}

/// Free group on `k` letters, window = reduced words of length at most
/// `radius`. Letters are `a, b, c, ...`; inverses are uppercase; the
/// identity is the word `"1"`.
pub fn free_window(k: usize, radius: usize, weights: &[Q]) -> Result<GroupWindow, Error> {
    if k == 0 || k > 13 || weights.len() != k {
        return Err(Error::input("free_window: need 1 <= k <= 13, one weight per letter"));
    }
    let letters: Vec<char> = (0..k).map(|i| (b'a' + i as u8) as char).collect();
    let mut alphabet = Vec::new();
    for &c in &letters {
        alphabet.push(c);
        alphabet.push(c.to_ascii_uppercase());
    }
    // breadth-first by length, alphabet order within a length
    let mut labels = vec!["1".to_string()];
    let mut frontier = vec![String::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for word in &frontier {
            for &c in &alphabet {
                if word
                    .chars()
                    .last()
                    .is_some_and(|last| inverse_letter(last) == c)
                {
                    continue; // would cancel
                }
                let mut w = word.clone();
                w.push(c);
                next.push(w);
            }
        }
        labels.extend(next.iter().cloned());
        frontier = next;
    }
    let reduce_concat = |a: &str, b: &str| -> String {
        let mut out: Vec<char> = if a == "1" { Vec::new() } else { a.chars().collect() };
        let b = if b == "1" { "" } else { b };
        for c in b.chars() {
            if out.last().is_some_and(|&last| inverse_letter(last) == c) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        if out.is_empty() {
            "1".to_string()
        } else {
            out.into_iter().collect()
        }
    };
    let word_len = |wd: &str| if wd == "1" { 0 } else { wd.chars().count() };
    let mut gens = Vec::new();
    for (c, w) in letters.iter().zip(weights) {
        gens.push((c.to_string(), w.clone()));
        gens.push((c.to_ascii_uppercase().to_string(), w.clone()));
    }
    window_from_op(
        format!("F_{k}[{radius}]"),
        labels,
        "1",
        move |a, b| {
            let p = reduce_concat(a, b);
            (word_len(&p) <= radius).then_some(p)
        },
        |a| {
            if a == "1" {
                return "1".to_string();
            }
            a.chars().rev().map(inverse_letter).collect()
        },
        gens,
    )
}

fn inverse_letter(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Discrete Heisenberg group window: triples `a;b;c` under
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')`, generated by
/// `x = 1;0;0` and `y = 0;1;0` and inverses. Elements are the box
/// `[-half, half]^3` restricted to `|a*b - c| <= half` so that the
/// inverse `(-a, -b, a*b-c)` stays inside; the inverse table must be
/// total.
pub fn heisenberg_window(half: i64, w_x: Q, w_y: Q) -> Result<GroupWindow, Error> {
    if half < 1 {
        return Err(Error::input("heisenberg_window: need half >= 1"));
    }
    let in_win = move |a: i64, b: i64, c: i64| {
        a.abs() <= half && b.abs() <= half && c.abs() <= half && (a * b - c).abs() <= half
    };
    let mut labels = Vec::new();
    for a in -half..=half {
        for b in -half..=half {
            for c in -half..=half {
                if in_win(a, b, c) {
                    labels.push(format!("{a};{b};{c}"));
                }
            }
        }
    }
    let gens = vec![
        ("1;0;0".to_string(), w_x.clone()),
        ("-1;0;0".to_string(), w_x),
        ("0;1;0".to_string(), w_y.clone()),
        ("0;-1;0".to_string(), w_y),
    ];
    window_from_op(
        format!("H3[{half}]"),
        labels,
        "0;0;0",
        move |p, q| {
            let (a, b, c) = unpack3(p);
            let (a2, b2, c2) = unpack3(q);
            let (ra, rb, rc) = (a + a2, b + b2, c + c2 + a * b2);
            in_win(ra, rb, rc).then(|| format!("{ra};{rb};{rc}"))
        },
        |p| {
            let (a, b, c) = unpack3(p);
            format!("{};{};{}", -a, -b, a * b - c)
        },
        gens,
    )
}

fn unpack3(s: &str) -> (i64, i64, i64) {
    let v = split_coords(s);
    (v[0], v[1], v[2])
}
