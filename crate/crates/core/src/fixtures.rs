//! Canonical fixtures and seeded generators shared by the unit tests,
//! the acceptance gate, the benchmarks, and the shipped JSON files.
//! Everything here is deterministic; the `random_*` functions derive
//! all randomness from the given seed.

use crate::amenable::{ActionWindow, FCoverWindow, FSet, SubgroupFamilyWindow, SubgroupWindow};
use crate::boost::{kolmogorov_step, BoostedDecomposition};
use crate::decomp::{
    ClassedCover, Cover, DecompositionCertificate, NamedSet, Piece, SpacePieces, Witness,
};
use crate::group::{
    cyclic_window, dihedral_window, free_window, word_norms_auto, z_window, zd_window, ElemIx,
    GroupWindow,
};
use crate::metric::{FiniteMetricSpace, MetricFamily, PointIx, PointSet};
use crate::nerve::{EquivariantMapWindow, NervePoint, SimplicialAction, UniformComplex};
use crate::q::Q;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

fn q(s: &str) -> Q {
    s.parse().expect("literal rational")
}

/// Integer line `0..n` with the absolute-difference metric.
pub fn line_space(id: &str, n: i64) -> Arc<FiniteMetricSpace> {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let coords = (0..n).map(|i| vec![i]).collect();
    Arc::new(FiniteMetricSpace::new_lattice(id, labels, coords).expect("line space"))
}

fn iv(lo: PointIx, hi: PointIx) -> PointSet {
    (lo..=hi).collect()
}

fn piece(name: &str, color: u32, points: PointSet) -> Piece {
    Piece {
        name: name.into(),
        color,
        points,
    }
}

fn single_space_cert(
    space: &Arc<FiniteMetricSpace>,
    r: Q,
    n: u32,
    pieces: Vec<Piece>,
    witness: Witness,
) -> DecompositionCertificate {
    DecompositionCertificate {
        family: MetricFamily::new(vec![Arc::clone(space)]).expect("one-space family"),
        r,
        n,
        pieces: vec![SpacePieces {
            space: Arc::clone(space),
            pieces,
        }],
        witness,
    }
}

// ---------------------------------------------------------------------------
// line decompositions

pub fn zline_space() -> Arc<FiniteMetricSpace> {
    line_space("zline31", 31)
}

/// Two-color interval decomposition of the 31-point line at scale 9,
/// same-color blocks 11 apart, diameters at most 10.
pub fn zline_cert() -> DecompositionCertificate {
    single_space_cert(
        &zline_space(),
        q("9"),
        1,
        vec![
            piece("a0", 0, iv(0, 7)),
            piece("a1", 0, iv(18, 27)),
            piece("b0", 1, iv(8, 17)),
            piece("b1", 1, iv(28, 30)),
        ],
        Witness::Bounded { bound: q("10") },
    )
}

/// The same pieces with the scale raised to 11: both colors now have a
/// pair at distance exactly 11, which strict disjointness rejects.
pub fn zline_bad_cert() -> DecompositionCertificate {
    let mut cert = zline_cert();
    cert.r = q("11");
    cert
}

pub fn zline_boost_input() -> BoostedDecomposition {
    BoostedDecomposition::from_certificate(zline_cert()).expect("zline certificate verifies")
}

/// The stepped line decomposition re-witnessed with stride-5 interval
/// blocks in three classes, ready for combining.
pub fn zline_combine_input() -> BoostedDecomposition {
    let mut out = kolmogorov_step(&zline_boost_input()).expect("clean step");
    let covers: Vec<ClassedCover> = out.cert.pieces[0]
        .pieces
        .iter()
        .map(|p| {
            let mut classes: Vec<Vec<NamedSet>> = vec![Vec::new(); 3];
            for k in -1i64..=6 {
                let lo = (5 * k).max(0) as PointIx;
                let hi = (5 * k + 10).min(30) as PointIx;
                let cut = iv(lo, hi).intersection(&p.points);
                if cut.is_empty() {
                    continue;
                }
                classes[k.rem_euclid(3) as usize].push(NamedSet::new(format!("B{k}"), cut));
            }
            ClassedCover { classes }
        })
        .collect();
    out.cert.witness = Witness::Cover {
        m: 1,
        scale: q("4"),
        bound: q("10"),
        covers: vec![covers],
    };
    out
}

// ---------------------------------------------------------------------------
// the 61 x 61 grid

/// Taxicab grid `[0,60]^2`, 3721 points labeled `"x,y"`.
pub fn grid61_space() -> Arc<FiniteMetricSpace> {
    let mut labels = Vec::with_capacity(61 * 61);
    let mut coords = Vec::with_capacity(61 * 61);
    for x in 0..=60i64 {
        for y in 0..=60i64 {
            labels.push(format!("{x},{y}"));
            coords.push(vec![x, y]);
        }
    }
    Arc::new(FiniteMetricSpace::new_lattice("grid61", labels, coords).expect("grid space"))
}

fn grid_columns(lo: i64, hi: i64) -> PointSet {
    let lo = lo.max(0);
    let hi = hi.min(60);
    let mut pts = Vec::new();
    for x in lo..=hi {
        for y in 0..=60 {
            pts.push((x * 61 + y) as PointIx);
        }
    }
    PointSet::new(pts)
}

/// Vertical strips of width 7, alternating two colors: a scale-6
/// decomposition (same-color strips sit 8 apart in taxicab), diameter
/// bound 66.
pub fn grid61_strips() -> BoostedDecomposition {
    let space = grid61_space();
    let pieces = (0..9)
        .map(|k| piece(&format!("s{k}"), (k % 2) as u32, grid_columns(7 * k, 7 * k + 6)))
        .collect();
    let cert = single_space_cert(
        &space,
        q("6"),
        1,
        pieces,
        Witness::Bounded { bound: q("66") },
    );
    BoostedDecomposition::from_certificate(cert).expect("strip certificate verifies")
}

/// One boost step on the strips (scale 2, three colors, depth 2), with
/// the diameter witness replaced by a three-class witness cover built
/// from one global block pattern: block `k` spans columns
/// `[5k, 5k+10]`, class `k mod 3`. Same-class blocks are 5 apart, each
/// point lies in blocks of all three classes, and every block cut to a
/// piece has diameter at most 70.
pub fn grid61_combiner_input() -> BoostedDecomposition {
    let mut b = crate::boost::boost_to_depth(&grid61_strips(), 2).expect("strip boost");
    assert!(b.notes.warnings.is_empty(), "strip boost has no boundary pairs");
    let covers: Vec<ClassedCover> = b.cert.pieces[0]
        .pieces
        .iter()
        .map(|p| {
            let mut classes: Vec<Vec<NamedSet>> = vec![Vec::new(); 3];
            for k in -2i64..=12 {
                let cut = grid_columns(5 * k, 5 * k + 10).intersection(&p.points);
                if !cut.is_empty() {
                    classes[k.rem_euclid(3) as usize].push(NamedSet::new(format!("B{k}"), cut));
                }
            }
            ClassedCover { classes }
        })
        .collect();
    b.cert.witness = Witness::Cover {
        m: 1,
        scale: q("4"),
        bound: q("70"),
        covers: vec![covers],
    };
    b
}

// ---------------------------------------------------------------------------
// certificate suite

/// All shipped valid certificates, by name. Every entry passes
/// verification; the suite feeds the conversion and JSON round-trip
/// checks.
pub fn certificate_suite() -> Vec<(&'static str, DecompositionCertificate)> {
    let line_a = line_space("pairA", 21);
    let line_b = line_space("pairB", 15);
    let pair = DecompositionCertificate {
        family: MetricFamily::new(vec![Arc::clone(&line_a), Arc::clone(&line_b)])
            .expect("pair family"),
        r: q("4"),
        n: 1,
        pieces: vec![
            SpacePieces {
                space: line_a,
                pieces: vec![
                    piece("a", 0, iv(0, 4)),
                    piece("b", 1, iv(5, 12)),
                    piece("c", 0, iv(13, 20)),
                ],
            },
            SpacePieces {
                space: line_b,
                pieces: vec![piece("d", 0, iv(0, 6)), piece("e", 1, iv(7, 14))],
            },
        ],
        witness: Witness::Bounded { bound: q("8") },
    };
    vec![
        ("zline", zline_cert()),
        (
            "zline-stepped",
            kolmogorov_step(&zline_boost_input()).expect("zline boost").cert,
        ),
        ("pair-family", pair),
        ("grid-strips", grid61_strips().cert),
    ]
}

// ---------------------------------------------------------------------------
// window-times-set products

/// An action of a group window on a labeled set, with the invariant
/// product metric, an invariant fat cover assigned to a subgroup
/// family, and the verified parameters the pipeline consumes.
pub struct GxFixture {
    pub name: &'static str,
    pub aw: ActionWindow,
    pub cover: FCoverWindow,
    pub product: Arc<FiniteMetricSpace>,
    /// Multiplicity cap: the cover has multiplicity at most this
    /// plus one.
    pub n_cap: u32,
    /// Every point of every cover set is at least this far from the
    /// set's complement.
    pub fat_radius: Q,
    /// Whole group inside the window: verdicts certify outright
    /// instead of hedging on truncation.
    pub closed: bool,
}

impl GxFixture {
    /// The budget at which the derived map passes: the pipeline's
    /// radius formula inverted at this fixture's fatness radius.
    pub fn epsilon(&self) -> Q {
        let n = self.n_cap as i64;
        &Q::from_int(2 * (n + 1) * (2 * n + 3)) / &self.fat_radius
    }
}

fn whole_window_family(w: &Arc<GroupWindow>, name: &str) -> SubgroupFamilyWindow {
    SubgroupFamilyWindow {
        members: vec![SubgroupWindow::new(
            name,
            (0..w.len() as ElemIx).collect(),
        )],
    }
}

/// Z/6 translating itself, metrized by word distance bumped to at
/// least 1 across different difference classes `g⁻¹x`, which makes the
/// metric diagonally invariant with word-metric fibers.
fn z6_product() -> (ActionWindow, Arc<FiniteMetricSpace>) {
    let w = Arc::new(cyclic_window(6, q("1")).expect("Z/6"));
    let aw = ActionWindow::left_translation(Arc::clone(&w)).expect("left translation");
    let norms = word_norms_auto(&w);
    let n = aw.pair_count();
    let diff = |p: PointIx| -> ElemIx {
        let (g, x) = aw.pair_of(p);
        w.mul(w.inv(g), x).expect("closed window")
    };
    let mut matrix = vec![vec![Q::ZERO; n]; n];
    for a in 0..n as PointIx {
        for b in 0..n as PointIx {
            let (g, _) = aw.pair_of(a);
            let (h, _) = aw.pair_of(b);
            let dw = norms.word_distance(g, h).expect("closed window");
            matrix[a as usize][b as usize] = if diff(a) == diff(b) {
                dw
            } else {
                dw.max(Q::from_int(1))
            };
        }
    }
    let product = Arc::new(
        FiniteMetricSpace::new_dense("Z6xZ6", aw.pair_labels(), matrix).expect("product metric"),
    );
    let aw = aw.with_metric(Arc::clone(&product)).expect("metric labels");
    (aw, product)
}

fn diff_class_set(aw: &ActionWindow, diffs: &[ElemIx]) -> PointSet {
    let w = aw.window();
    (0..aw.pair_count() as PointIx)
        .filter(|&p| {
            let (g, x) = aw.pair_of(p);
            diffs.contains(&w.mul(w.inv(g), x).expect("closed window"))
        })
        .collect()
}

/// Two overlapping invariant arcs of difference classes; fat at
/// radius 1, multiplicity 2.
pub fn z6_difference_fixture() -> GxFixture {
    let (aw, product) = z6_product();
    let family = whole_window_family(aw.window(), "G");
    let cover = FCoverWindow {
        family,
        sets: vec![
            FSet {
                name: "U".into(),
                points: diff_class_set(&aw, &[0, 1, 2, 3]),
                assigned: 0,
            },
            FSet {
                name: "V".into(),
                points: diff_class_set(&aw, &[3, 4, 5, 0]),
                assigned: 0,
            },
        ],
    };
    GxFixture {
        name: "z6-difference",
        aw,
        cover,
        product,
        n_cap: 1,
        fat_radius: q("1"),
        closed: true,
    }
}

/// The whole product as a single cover set: multiplicity 1, fat at
/// every radius; the nerve is a point.
pub fn z6_whole_fixture() -> GxFixture {
    let (aw, product) = z6_product();
    let family = whole_window_family(aw.window(), "G");
    let all: PointSet = (0..aw.pair_count() as PointIx).collect();
    let cover = FCoverWindow {
        family,
        sets: vec![FSet {
            name: "GX".into(),
            points: all,
            assigned: 0,
        }],
    };
    GxFixture {
        name: "z6-whole",
        aw,
        cover,
        product,
        n_cap: 0,
        fat_radius: q("6"),
        closed: true,
    }
}

/// A Z window acting trivially on two fibers, the fibers 10 apart; the
/// cover by the two sections is invariant, disjoint, and fat at
/// radius 10. The window is truncated, so certifications hedge.
pub fn two_fiber_fixture() -> GxFixture {
    let w = Arc::new(z_window(20, &[1], &[q("1")]).expect("Z window"));
    let aw = ActionWindow::trivial(Arc::clone(&w), vec!["+".into(), "-".into()])
        .expect("trivial action");
    let n = aw.pair_count();
    let mut matrix = vec![vec![Q::ZERO; n]; n];
    for a in 0..n as PointIx {
        for b in 0..n as PointIx {
            let (g, x) = aw.pair_of(a);
            let (h, y) = aw.pair_of(b);
            let gv: i64 = w.label(g).parse().expect("integer label");
            let hv: i64 = w.label(h).parse().expect("integer label");
            let mut d = Q::from_int((gv - hv).abs());
            if x != y {
                d = &d + &Q::from_int(10);
            }
            matrix[a as usize][b as usize] = d;
        }
    }
    let product = Arc::new(
        FiniteMetricSpace::new_dense("Zx2", aw.pair_labels(), matrix).expect("product metric"),
    );
    let aw = aw.with_metric(Arc::clone(&product)).expect("metric labels");
    let family = whole_window_family(&w, "Z");
    let sect = |x: PointIx| -> PointSet {
        (0..w.len() as ElemIx).map(|g| aw.pair_index(g, x)).collect()
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
    GxFixture {
        name: "two-fiber",
        aw,
        cover,
        product,
        n_cap: 0,
        fat_radius: q("10"),
        closed: false,
    }
}

pub fn gx_fixtures() -> Vec<GxFixture> {
    vec![z6_difference_fixture(), z6_whole_fixture(), two_fiber_fixture()]
}

// ---------------------------------------------------------------------------
// word metric windows

pub struct WordFixture {
    pub name: &'static str,
    pub window: Arc<GroupWindow>,
    /// Certifiable norm radius for this window.
    pub radius: Q,
}

pub fn word_fixtures() -> Vec<WordFixture> {
    let mk = |name, window: GroupWindow, radius| WordFixture {
        name,
        window: Arc::new(window),
        radius: Q::from_int(radius),
    };
    vec![
        mk("Z-steps-1", z_window(10, &[1], &[q("1")]).expect("Z"), 6),
        mk(
            "Z-steps-2-3",
            z_window(12, &[2, 3], &[q("1"), q("1")]).expect("Z"),
            4,
        ),
        mk("Z2", zd_window(2, 4, &[q("1"), q("1")]).expect("Z^2"), 3),
        mk("F2", free_window(2, 3, &[q("1"), q("1")]).expect("F_2"), 2),
        mk("Z6", cyclic_window(6, q("1")).expect("Z/6"), 3),
        mk("D6", dihedral_window(6, q("1"), q("1")).expect("D_6"), 6),
    ]
}

// ---------------------------------------------------------------------------
// equivariant maps

/// Z/6 rotating the hexagon complex `h0..h5` (cycle of six edges).
pub fn hexagon_action() -> SimplicialAction {
    let w = Arc::new(cyclic_window(6, q("1")).expect("Z/6"));
    let labels: Vec<String> = (0..6).map(|v| format!("h{v}")).collect();
    let maximal: Vec<Vec<u32>> = (0..6u32).map(|v| vec![v, (v + 1) % 6]).collect();
    let complex = UniformComplex::from_maximal(labels, &maximal).expect("hexagon");
    let table: Vec<Option<u32>> = (0..6u32)
        .flat_map(|g| (0..6u32).map(move |v| Some((g + v) % 6)))
        .collect();
    SimplicialAction::new(complex, w, table).expect("rotation")
}

/// The exact match: Z/6 translating itself mapped onto the rotating
/// hexagon by `x -> h_x`. Equivariant on the nose.
pub fn hexagon_map() -> EquivariantMapWindow {
    let target = hexagon_action();
    let w = Arc::clone(target.window());
    let domain = ActionWindow::left_translation(Arc::clone(&w)).expect("left translation");
    let f = (0..6u32).map(NervePoint::vertex).collect();
    let norms = word_norms_auto(&w);
    EquivariantMapWindow::new(domain, target, f, Q::ZERO, norms).expect("hexagon map")
}

/// A Z window fixing two boundary points, mapped onto a single segment
/// with trivial vertex action. Equivariance is exact; orbit maps are
/// constant; stabilizers are the whole window.
pub fn boundary_map() -> EquivariantMapWindow {
    let w = Arc::new(z_window(10, &[1], &[q("1")]).expect("Z window"));
    let domain = ActionWindow::trivial(Arc::clone(&w), vec!["minus".into(), "plus".into()])
        .expect("trivial action");
    let complex = UniformComplex::from_labeled_maximal(
        vec!["bL".into(), "bR".into()],
        &[vec!["bL".into(), "bR".into()]],
    )
    .expect("segment");
    let target = SimplicialAction::trivial(complex, Arc::clone(&w));
    let f = vec![NervePoint::vertex(0), NervePoint::vertex(1)];
    let norms = word_norms_auto(&w);
    EquivariantMapWindow::new(domain, target, f, Q::ZERO, norms).expect("boundary map")
}

/// Z/6 spinning a triangle through `g·t_v = t_{(g+v) mod 3}`, with the
/// map perturbed at one point: `f(0)` sits a quarter of the way along
/// an edge. The worst certified ratio is `(1/2)/1`, so the map passes
/// exactly at budget 1/2.
pub fn spun_triangle_map() -> EquivariantMapWindow {
    let w = Arc::new(cyclic_window(6, q("1")).expect("Z/6"));
    let domain = ActionWindow::left_translation(Arc::clone(&w)).expect("left translation");
    let labels: Vec<String> = (0..3).map(|v| format!("t{v}")).collect();
    let complex = UniformComplex::from_maximal(labels, &[vec![0, 1, 2]]).expect("triangle");
    let table: Vec<Option<u32>> = (0..6u32)
        .flat_map(|g| (0..3u32).map(move |v| Some((g + v) % 3)))
        .collect();
    let target = SimplicialAction::new(complex, Arc::clone(&w), table).expect("spin");
    let mut f: Vec<NervePoint> = (0..6u32).map(|x| NervePoint::vertex(x % 3)).collect();
    f[0] = NervePoint::new(BTreeMap::from([(0, q("3/4")), (1, q("1/4"))]))
        .expect("edge point");
    let norms = word_norms_auto(&w);
    EquivariantMapWindow::new(domain, target, f, q("1/2"), norms).expect("triangle map")
}

pub fn map_fixtures() -> Vec<(&'static str, EquivariantMapWindow)> {
    vec![
        ("hexagon", hexagon_map()),
        ("boundary", boundary_map()),
        ("triangle", spun_triangle_map()),
    ]
}

// ---------------------------------------------------------------------------
// subgroup-cover clause fixtures

pub enum ClauseInput {
    /// Feed to the single-set subset check.
    Subset {
        aw: ActionWindow,
        member: SubgroupWindow,
        set: PointSet,
    },
    /// Feed to the full cover check.
    Cover {
        aw: ActionWindow,
        ball: Vec<ElemIx>,
        cover: FCoverWindow,
        n_cap: u32,
    },
}

pub struct ClauseFixture {
    /// Which clause the case isolates; matches the checker's finding
    /// name on the faulted variant.
    pub clause: &'static str,
    pub faulted: bool,
    pub input: ClauseInput,
}

fn z6_regular() -> ActionWindow {
    let w = Arc::new(cyclic_window(6, q("1")).expect("Z/6"));
    ActionWindow::left_translation(w).expect("left translation")
}

fn z6_point_action() -> ActionWindow {
    let w = Arc::new(cyclic_window(6, q("1")).expect("Z/6"));
    ActionWindow::trivial(w, vec!["pt".into()]).expect("trivial action")
}

/// Cosets of `{0,3}` as sections over a fixed point: each is an
/// F-subset for the subgroup, and translation permutes them.
fn coset_cover(aw: &ActionWindow, keep: &[ElemIx]) -> FCoverWindow {
    let family = SubgroupFamilyWindow {
        members: vec![SubgroupWindow::new("H", vec![0, 3])],
    };
    let sets = keep
        .iter()
        .map(|&i| FSet {
            name: format!("U{i}"),
            points: PointSet::new(vec![aw.pair_index(i, 0), aw.pair_index(i + 3, 0)]),
            assigned: 0,
        })
        .collect();
    FCoverWindow { family, sets }
}

/// One passing and one single-fault case per clause of the subset and
/// cover checks, plus (separately) the truncated-window cases.
pub fn f_clause_fixtures() -> Vec<ClauseFixture> {
    let mut out = Vec::new();

    // a set fixed by every subgroup element
    let diag = |aw: &ActionWindow| -> PointSet {
        (0..6u32).map(|g| aw.pair_index(g, g)).collect()
    };
    let aw = z6_regular();
    let full = SubgroupWindow::new("G", (0..6).collect());
    out.push(ClauseFixture {
        clause: "f-subset",
        faulted: false,
        input: ClauseInput::Subset {
            set: diag(&aw),
            member: full,
            aw,
        },
    });
    let aw = z6_regular();
    let full = SubgroupWindow::new("G", (0..6).collect());
    let broken = PointSet::new(diag(&aw).iter().skip(1).collect());
    out.push(ClauseFixture {
        clause: "f-subset",
        faulted: true,
        input: ClauseInput::Subset {
            set: broken,
            member: full,
            aw,
        },
    });

    // a set the non-members must move clean off itself
    let aw = z6_regular();
    let trivial = SubgroupWindow::new("1", vec![0]);
    let singleton = PointSet::singleton(aw.pair_index(0, 3));
    out.push(ClauseFixture {
        clause: "f-subset",
        faulted: false,
        input: ClauseInput::Subset {
            set: singleton,
            member: trivial,
            aw,
        },
    });
    let aw = z6_regular();
    let trivial = SubgroupWindow::new("1", vec![0]);
    let overlapping = PointSet::new(vec![aw.pair_index(0, 0), aw.pair_index(1, 1)]);
    out.push(ClauseFixture {
        clause: "f-subset",
        faulted: true,
        input: ClauseInput::Subset {
            set: overlapping,
            member: trivial,
            aw,
        },
    });

    // invariance: dropping one coset leaves an unlisted translate
    let aw = z6_point_action();
    let cover = coset_cover(&aw, &[0, 1, 2]);
    out.push(ClauseFixture {
        clause: "invariance",
        faulted: false,
        input: ClauseInput::Cover {
            ball: vec![0],
            cover,
            n_cap: 0,
            aw,
        },
    });
    let aw = z6_point_action();
    let cover = coset_cover(&aw, &[0, 1]);
    out.push(ClauseFixture {
        clause: "invariance",
        faulted: true,
        input: ClauseInput::Cover {
            ball: vec![0],
            cover,
            n_cap: 0,
            aw,
        },
    });

    // dimension: the two-arc cover fits the cap 1 but not the cap 0
    let fx = z6_difference_fixture();
    out.push(ClauseFixture {
        clause: "dimension",
        faulted: false,
        input: ClauseInput::Cover {
            ball: vec![0],
            cover: fx.cover,
            n_cap: 1,
            aw: fx.aw,
        },
    });
    let fx = z6_difference_fixture();
    out.push(ClauseFixture {
        clause: "dimension",
        faulted: true,
        input: ClauseInput::Cover {
            ball: vec![0],
            cover: fx.cover,
            n_cap: 0,
            aw: fx.aw,
        },
    });

    // capture: the whole product swallows any ball; two-point cosets
    // cannot hold a five-element ball section
    let fx = z6_whole_fixture();
    let ball2 = vec![0, 1, 2, 4, 5];
    out.push(ClauseFixture {
        clause: "capture",
        faulted: false,
        input: ClauseInput::Cover {
            ball: ball2.clone(),
            cover: fx.cover,
            n_cap: 0,
            aw: fx.aw,
        },
    });
    let aw = z6_point_action();
    let cover = coset_cover(&aw, &[0, 1, 2]);
    out.push(ClauseFixture {
        clause: "capture",
        faulted: true,
        input: ClauseInput::Cover {
            ball: ball2,
            cover,
            n_cap: 0,
            aw,
        },
    });

    out
}

/// Truncated-window cases: products escape the window, so neither
/// check may certify anything. One per check shape.
pub fn truncated_f_fixtures() -> Vec<ClauseFixture> {
    let truncated = || {
        let w = Arc::new(z_window(5, &[1], &[q("1")]).expect("Z window"));
        ActionWindow::trivial(w, vec!["pt".into()]).expect("trivial action")
    };
    let aw = truncated();
    let member = SubgroupWindow::new("W", (0..aw.window().len() as ElemIx).collect());
    let all: PointSet = (0..aw.pair_count() as PointIx).collect();
    let subset = ClauseFixture {
        clause: "truncated",
        faulted: false,
        input: ClauseInput::Subset {
            set: all.clone(),
            member,
            aw,
        },
    };
    let aw = truncated();
    let family = whole_window_family(aw.window(), "W");
    let cover = FCoverWindow {
        family,
        sets: vec![FSet {
            name: "all".into(),
            points: all,
            assigned: 0,
        }],
    };
    let cover_case = ClauseFixture {
        clause: "truncated",
        faulted: false,
        input: ClauseInput::Cover {
            ball: vec![aw.window().identity()],
            cover,
            n_cap: 0,
            aw,
        },
    };
    vec![subset, cover_case]
}

// ---------------------------------------------------------------------------
// seeded generators

/// Random line-shaped space with a valid two-color decomposition:
/// consecutive coordinate runs colored alternately, every run wide
/// enough that same-color runs clear the scale strictly. Odd seeds are
/// boosted once, so the caller sees a mix of depth-1 and depth-2
/// inputs; either way the claimed depth is verified and the scale is
/// divisible by 3.
pub fn random_boosted_line(seed: u64) -> BoostedDecomposition {
    for attempt in 0u64..64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37)));
        let deep = seed % 2 == 1;
        let r = q(["1", "3/2", "2", "3"][rng.gen_range(0..4)]);
        let scale_in = &Q::from_int(if deep { 9 } else { 3 }) * &r;
        let n_points = rng.gen_range(40..=150usize);
        let mut coords = Vec::with_capacity(n_points);
        let mut at = 0i64;
        for _ in 0..n_points {
            coords.push(at);
            at += rng.gen_range(1..=3);
        }
        let labels: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let lattice: Vec<Vec<i64>> = coords.iter().map(|&c| vec![c]).collect();
        let space = Arc::new(
            FiniteMetricSpace::new_lattice(format!("rline{seed}"), labels, lattice)
                .expect("line space"),
        );

        // alternately colored runs; same-color runs are separated by
        // one interior run, and every interior run is closed only once
        // its coordinate extent strictly clears the scale, so the only
        // possibly-short run is the tail, which separates nothing
        let mut pieces: Vec<Piece> = Vec::new();
        let mut start = 0usize;
        for i in 0..n_points {
            if Q::from_int(coords[i] - coords[start]) > scale_in {
                pieces.push(piece(
                    &format!("r{}", pieces.len()),
                    (pieces.len() % 2) as u32,
                    iv(start as PointIx, i as PointIx),
                ));
                start = i + 1;
            }
        }
        if start < n_points {
            pieces.push(piece(
                &format!("r{}", pieces.len()),
                (pieces.len() % 2) as u32,
                iv(start as PointIx, n_points as PointIx - 1),
            ));
        }
        if pieces.len() < 3 {
            continue;
        }
        let bound = pieces
            .iter()
            .map(|p| crate::metric::diameter(&space.subspace(p.points.clone())))
            .max()
            .expect("nonempty");
        let cert = single_space_cert(&space, scale_in, 1, pieces, Witness::Bounded { bound });
        let Ok(b) = BoostedDecomposition::from_certificate(cert) else {
            continue;
        };
        // whatever is returned must step cleanly: exact-boundary pairs
        // in the new color would fail the strict verifier downstream
        let Ok(step1) = kolmogorov_step(&b) else {
            continue;
        };
        if !step1.notes.warnings.is_empty() {
            continue;
        }
        if !deep {
            return b;
        }
        match kolmogorov_step(&step1) {
            Ok(step2) if step2.notes.warnings.is_empty() => return step1,
            _ => continue,
        }
    }
    panic!("no valid decomposition found for seed {seed}")
}

/// Random cover of a random planar point cloud (at most 100 points):
/// a handful of open balls plus, when needed, one set sweeping up the
/// leftovers so the cover is total.
pub fn random_cover(seed: u64) -> Cover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0FE);
    let n_points = rng.gen_range(20..=100usize);
    let mut seen = std::collections::HashSet::new();
    let mut coords = Vec::new();
    while coords.len() < n_points {
        let p = (rng.gen_range(0..=40i64), rng.gen_range(0..=40i64));
        if seen.insert(p) {
            coords.push(vec![p.0, p.1]);
        }
    }
    let labels: Vec<String> = coords.iter().map(|c| format!("{},{}", c[0], c[1])).collect();
    let space = Arc::new(
        FiniteMetricSpace::new_lattice(format!("cloud{seed}"), labels, coords)
            .expect("cloud space"),
    );
    let n_sets = rng.gen_range(5..=12usize);
    let mut sets = Vec::new();
    let mut union = PointSet::empty();
    for k in 0..n_sets {
        let center = rng.gen_range(0..n_points) as PointIx;
        let radius = Q::from_int(rng.gen_range(2..=8i64));
        let ball = space.open_ball(center, &radius);
        union = union.union(&ball);
        sets.push(NamedSet::new(format!("ball{k}"), ball));
    }
    let rest = PointSet::full(n_points).difference(&union);
    if !rest.is_empty() {
        sets.push(NamedSet::new("rest", rest));
    }
    Cover::new(space, sets).expect("ball cover")
}

/// Uniformly random point of the complex: a random simplex with
/// random positive coordinates of denominator at most 8.
pub fn random_nerve_point(rng: &mut ChaCha8Rng, complex: &UniformComplex) -> NervePoint {
    let simplices: Vec<Vec<u32>> = complex.simplices().map(|s| s.to_vec()).collect();
    let sigma = &simplices[rng.gen_range(0..simplices.len())];
    let weights: Vec<i64> = sigma.iter().map(|_| rng.gen_range(1..=4i64)).collect();
    let total: i64 = weights.iter().sum();
    let coords = sigma
        .iter()
        .zip(&weights)
        .map(|(&v, &wt)| (v, &Q::from_int(wt) / &Q::from_int(total)))
        .collect();
    NervePoint::new(coords).expect("convex combination")
}

// ---------------------------------------------------------------------------
// shipped files

/// Contents of the JSON fixture files the command line ships with,
/// by file name. A test re-verifies each against the files on disk.
pub fn shipped_files() -> Vec<(&'static str, String)> {
    use crate::json;
    let fx = z6_difference_fixture();
    let cover = Cover::new(
        Arc::clone(&fx.product),
        fx.cover
            .sets
            .iter()
            .map(|s| NamedSet::new(s.name.clone(), s.points.clone()))
            .collect(),
    )
    .expect("difference cover");
    vec![
        ("zline.json", json::certificate_to_json(&zline_cert())),
        ("zline_bad_r.json", json::certificate_to_json(&zline_bad_cert())),
        ("zline_boost.json", json::certificate_to_json(&zline_boost_input().cert)),
        ("zline_combine.json", json::boosted_to_json(&zline_combine_input())),
        ("gx.json", json::space_to_json(&fx.product)),
        ("cov.json", json::cover_to_json(&cover)),
        ("window_z6.json", json::window_to_json(fx.aw.window())),
        ("action_z6.json", json::action_to_json(&fx.aw)),
        ("fcover_z6.json", json::fcover_to_json(&fx.cover, &fx.aw)),
        ("map_hexagon.json", json::map_to_json(&hexagon_map())),
    ]
}
