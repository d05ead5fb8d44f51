//! Depth boosting for colored decompositions.
//!
//! A decomposition has coverage depth `d` when every point lies in
//! pieces of at least `d` distinct colors. One boost step trades scale
//! for depth: from a decomposition at scale `3r` it builds one at
//! scale `r` with one extra color and depth one higher, fattening the
//! old pieces by an open `r`-neighborhood and carving the new color
//! out of the points that stay `r`-far from all but `d` colors. Deep
//! decompositions whose pieces carry classed covers then combine into
//! a single cover of controlled multiplicity.

use crate::decomp::{
    check_condition_a, verify_with_depth, Cover, DecompositionCertificate, NamedSet, Piece,
    SpacePieces, Witness,
};
use crate::error::Error;
use crate::metric::{set_distance, PointSet};
use crate::q::Q;
use crate::report::Report;
use std::collections::BTreeMap;

const MAX_FINDINGS: usize = 100;

/// A decomposition together with its verified coverage depth and the
/// warnings its construction accumulated.
#[derive(Debug, Clone)]
pub struct BoostedDecomposition {
    pub cert: DecompositionCertificate,
    /// Every point lies in pieces of at least this many distinct
    /// colors.
    pub depth: u32,
    /// Construction warnings, notably new-color piece pairs at
    /// distance exactly the output scale.
    pub notes: Report,
}

impl BoostedDecomposition {
    /// Wrap an ordinary certificate as a depth-1 decomposition.
    /// Verifies it first.
    pub fn from_certificate(cert: DecompositionCertificate) -> Result<Self, Error> {
        let report = verify_with_depth(&cert, 1);
        if !report.passed() {
            return Err(Error::CertificateInvalid {
                detail: report.violations[0].to_string(),
            });
        }
        Ok(BoostedDecomposition {
            cert,
            depth: 1,
            notes: Report::new(),
        })
    }
}

/// Re-verify a boosted decomposition from scratch: all certificate
/// checks with coverage strengthened to the claimed depth.
pub fn verify_boosted(b: &BoostedDecomposition) -> Report {
    let mut report = verify_with_depth(&b.cert, b.depth);
    if b.depth == 0 {
        report.violation("depth", "claimed depth 0 is vacuous");
    }
    report
}

/// One boost step. The input must verify at its claimed depth, carry a
/// diameter bound `D`, and have scale divisible into thirds (any
/// rational is); the output is at a third of the scale, with one extra
/// color, depth one higher, and bound `D + 2r` where `r` is the output
/// scale.
///
/// New-color pieces are provably more than `r` apart except that pairs
/// arising from different color sets can sit at distance exactly `r`;
/// those pairs are reported as warnings in the result's notes, and make
/// the output unusable as input to a further strict step.
pub fn kolmogorov_step(input: &BoostedDecomposition) -> Result<BoostedDecomposition, Error> {
    let pre = verify_boosted(input);
    if !pre.passed() {
        return Err(Error::InputInvalid {
            detail: format!("boost input fails verification: {}", pre.violations[0]),
        });
    }
    let Witness::Bounded { bound: d_in } = &input.cert.witness else {
        return Err(Error::input(
            "boost needs a diameter-bounded decomposition, not a cover witness",
        ));
    };
    let cert = &input.cert;
    let r_out = &cert.r / &Q::from_int(3);
    let bound_out = d_in + &(&r_out + &r_out);
    let n_out = cert.n + 1;
    let new_color = cert.n + 1;
    let mut notes = input.notes.clone();
    let mut out_spaces = Vec::new();

    for sp in &cert.pieces {
        let space = &sp.space;
        let npts = space.len();
        // within-color ordinals, in listed order
        let mut ordinal_of: Vec<u32> = Vec::with_capacity(sp.pieces.len());
        let mut seen_per_color = vec![0u32; (cert.n + 1) as usize];
        for piece in &sp.pieces {
            ordinal_of.push(seen_per_color[piece.color as usize]);
            seen_per_color[piece.color as usize] += 1;
        }

        let fattened: Vec<Piece> = sp
            .pieces
            .iter()
            .map(|p| Piece {
                name: format!("{}+", p.name),
                color: p.color,
                points: space.open_neighborhood(&p.points, &r_out),
            })
            .collect();

        // per point: the piece ordinal it lies in per color, and the
        // colors whose fattening reaches it
        let mut in_color: Vec<Vec<Option<u32>>> =
            vec![vec![None; (cert.n + 1) as usize]; npts];
        let mut near_color: Vec<Vec<bool>> = vec![vec![false; (cert.n + 1) as usize]; npts];
        for (k, piece) in sp.pieces.iter().enumerate() {
            for x in piece.points.iter() {
                in_color[x as usize][piece.color as usize] = Some(ordinal_of[k]);
            }
            for x in fattened[k].points.iter() {
                near_color[x as usize][piece.color as usize] = true;
            }
        }

        // a point joins the new color exactly when the colors near it
        // are the colors it lies in and there are only `depth` of them
        let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), Vec<u32>> = BTreeMap::new();
        for x in 0..npts as u32 {
            let near: Vec<u32> = (0..=cert.n)
                .filter(|&c| near_color[x as usize][c as usize])
                .collect();
            if near.len() as u32 != input.depth {
                continue;
            }
            let members: Option<Vec<u32>> = near
                .iter()
                .map(|&c| in_color[x as usize][c as usize])
                .collect();
            if let Some(j) = members {
                groups.entry((near, j)).or_default().push(x);
            }
        }
        let new_pieces: Vec<Piece> = groups
            .into_iter()
            .map(|((i, j), pts)| Piece {
                name: format!(
                    "({};{})",
                    i.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                    j.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                ),
                color: new_color,
                points: PointSet::new(pts),
            })
            .collect();

        // construction guarantees, checked exactly; the one legitimate
        // near-miss is a new-color pair at distance exactly r
        for (a, pa) in fattened.iter().enumerate() {
            for pb in fattened.iter().skip(a + 1) {
                if pa.color != pb.color {
                    continue;
                }
                let d = set_distance(
                    &space.subspace(pa.points.clone()),
                    &space.subspace(pb.points.clone()),
                )?;
                if d <= r_out {
                    return Err(Error::Internal {
                        detail: format!(
                            "fattened pieces {:?} and {:?} at distance {d}, expected > {r_out}",
                            pa.name, pb.name
                        ),
                    });
                }
            }
        }
        for (a, pa) in new_pieces.iter().enumerate() {
            for pb in new_pieces.iter().skip(a + 1) {
                let d = set_distance(
                    &space.subspace(pa.points.clone()),
                    &space.subspace(pb.points.clone()),
                )?;
                if d < r_out {
                    return Err(Error::Internal {
                        detail: format!(
                            "new pieces {:?} and {:?} at distance {d} < {r_out}",
                            pa.name, pb.name
                        ),
                    });
                }
                if d == r_out {
                    notes.warning(
                        "boundary",
                        format!(
                            "space {:?}: new-color pieces {:?} and {:?} at distance exactly {r_out}",
                            space.id(),
                            pa.name,
                            pb.name
                        ),
                    );
                }
            }
        }

        let mut pieces = fattened;
        pieces.extend(new_pieces);
        for piece in &pieces {
            let diam = crate::metric::diameter(&space.subspace(piece.points.clone()));
            if diam > bound_out {
                return Err(Error::Internal {
                    detail: format!(
                        "piece {:?} has diameter {diam} > {bound_out}",
                        piece.name
                    ),
                });
            }
        }
        for x in 0..npts as u32 {
            let mut colors: Vec<u32> = pieces
                .iter()
                .filter(|p| p.points.contains(x))
                .map(|p| p.color)
                .collect();
            colors.sort_unstable();
            colors.dedup();
            if (colors.len() as u32) < input.depth + 1 {
                return Err(Error::Internal {
                    detail: format!(
                        "point {} covered by {} color(s), expected {}",
                        space.label(x),
                        colors.len(),
                        input.depth + 1
                    ),
                });
            }
        }
        out_spaces.push(SpacePieces {
            space: std::sync::Arc::clone(space),
            pieces,
        });
    }

    Ok(BoostedDecomposition {
        cert: DecompositionCertificate {
            family: cert.family.clone(),
            r: r_out,
            n: n_out,
            pieces: out_spaces,
            witness: Witness::Bounded { bound: bound_out },
        },
        depth: input.depth + 1,
        notes,
    })
}

/// Iterate [`kolmogorov_step`] until the decomposition reaches the
/// target depth. `target` equal to the current depth is the identity;
/// below it is an error. Starting from scale `3^k r` and depth `d`,
/// the result of `k` steps sits at scale `r` and depth `d + k`.
pub fn boost_to_depth(
    input: &BoostedDecomposition,
    target: u32,
) -> Result<BoostedDecomposition, Error> {
    if target < input.depth {
        return Err(Error::ScheduleUnderflow {
            requested: target,
            current: input.depth,
        });
    }
    let mut current = input.clone();
    while current.depth < target {
        current = kolmogorov_step(&current)?;
    }
    Ok(current)
}

/// Output of [`combine_cover`]: one cover per space, the scale at
/// which its multiplicity is controlled, the color count bounding that
/// multiplicity, and the set diameter bound.
#[derive(Debug, Clone)]
pub struct CombineResult {
    pub covers: Vec<Cover>,
    /// Open balls of this radius meet at most `colors` sets.
    pub check_scale: Q,
    /// One more than the largest class index: the multiplicity bound.
    pub colors: u32,
    pub bound: Q,
    pub report: Report,
}

/// Combine a deep decomposition whose pieces carry classed covers into
/// one cover per space: class-`c` sets are taken from color-`c` pieces
/// only. Same-class sets stay far apart (same piece: the witness
/// scale; different pieces: the decomposition scale), so the result's
/// multiplicity at half the smaller scale is at most the class count.
///
/// Coverage of the result is NOT implied by the per-piece conditions
/// alone: it needs the class assignments of overlapping pieces to
/// agree, which the witness format cannot express. It is therefore
/// checked exhaustively here, point by point, and failures land in the
/// report as violations.
pub fn combine_cover(b: &BoostedDecomposition) -> Result<CombineResult, Error> {
    let pre = verify_boosted(b);
    if !pre.passed() {
        return Err(Error::InputInvalid {
            detail: format!("combine input fails verification: {}", pre.violations[0]),
        });
    }
    let cert = &b.cert;
    let Witness::Cover {
        m,
        scale,
        bound,
        covers: piece_covers,
    } = &cert.witness
    else {
        return Err(Error::input(
            "combining needs per-piece classed covers, not a plain diameter bound",
        ));
    };
    if b.depth < m + 1 {
        return Err(Error::InputInvalid {
            detail: format!(
                "coverage depth {} below m+1 = {}; boost the decomposition first",
                b.depth,
                m + 1
            ),
        });
    }
    let mut report = Report::new();
    let mut covers = Vec::new();
    for (sp, sp_covers) in cert.pieces.iter().zip(piece_covers) {
        let space = &sp.space;
        let mut sets = Vec::new();
        for (piece, cover) in sp.pieces.iter().zip(sp_covers) {
            for s in &cover.classes[piece.color as usize] {
                sets.push(NamedSet::new(
                    format!("{}/{}", piece.name, s.name),
                    s.points.clone(),
                ));
            }
        }
        let cover = Cover::new(std::sync::Arc::clone(space), sets)
            .map_err(|e| Error::input(format!("combined cover is malformed: {e}")))?;
        let mut union = PointSet::empty();
        for s in cover.sets() {
            union = union.union(&s.points);
        }
        let mut missing = 0usize;
        for x in 0..space.len() as u32 {
            if !union.contains(x) && missing < MAX_FINDINGS {
                report.violation(
                    "coverage",
                    format!(
                        "space {:?}: point {} is in no combined set",
                        space.id(),
                        space.label(x)
                    ),
                );
                missing += 1;
            }
        }
        covers.push(cover);
    }
    let smaller = if scale < &cert.r { scale.clone() } else { cert.r.clone() };
    let check_scale = smaller.half();
    let cond_a = check_condition_a(&covers, &check_scale, cert.n, bound);
    report.absorb("condition-A", cond_a);
    Ok(CombineResult {
        covers,
        check_scale,
        colors: cert.n + 1,
        bound: bound.clone(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{verify_certificate, ClassedCover, SearchOutcome};
    use crate::metric::{FiniteMetricSpace, MetricFamily};
    use crate::testutil::{interval, path_space};
    use std::sync::Arc;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    /// Scale-9 two-color interval decomposition of a 31-point line.
    fn line31_scale9() -> BoostedDecomposition {
        let space = path_space("line31", 31);
        let mk = |name: &str, color: u32, lo: i64, hi: i64| Piece {
            name: name.into(),
            color,
            points: interval(&space, lo, hi),
        };
        let cert = DecompositionCertificate {
            family: MetricFamily::new(vec![Arc::clone(&space)]).unwrap(),
            r: q("9"),
            n: 1,
            pieces: vec![SpacePieces {
                space: Arc::clone(&space),
                pieces: vec![
                    mk("a0", 0, 0, 7),
                    mk("a1", 0, 18, 27),
                    mk("b0", 1, 8, 17),
                    mk("b1", 1, 28, 30),
                ],
            }],
            witness: Witness::Bounded { bound: q("10") },
        };
        BoostedDecomposition::from_certificate(cert).unwrap()
    }

    fn labels_of(space: &Arc<FiniteMetricSpace>, pts: &PointSet) -> Vec<i64> {
        pts.iter().map(|i| space.label(i).parse().unwrap()).collect()
    }

    fn ivec(lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).collect()
    }

    #[test]
    fn step_on_line31_matches_hand_computation() {
        let input = line31_scale9();
        let out = kolmogorov_step(&input).unwrap();
        assert_eq!(out.depth, 2);
        assert_eq!(out.cert.r, q("3"));
        assert_eq!(out.cert.n, 2);
        assert!(matches!(&out.cert.witness, Witness::Bounded { bound } if bound == &q("16")));
        assert!(out.notes.passed() && out.notes.warnings.is_empty());
        let space = &out.cert.pieces[0].space;
        let pieces = &out.cert.pieces[0].pieces;
        let got: Vec<(&str, u32, Vec<i64>)> = pieces
            .iter()
            .map(|p| (p.name.as_str(), p.color, labels_of(space, &p.points)))
            .collect();
        assert_eq!(
            got,
            vec![
                ("a0+", 0, ivec(0, 9)),
                ("a1+", 0, ivec(16, 29)),
                ("b0+", 1, ivec(6, 19)),
                ("b1+", 1, ivec(26, 30)),
                ("(0;0)", 2, ivec(0, 5)),
                ("(0;1)", 2, ivec(20, 25)),
                ("(1;0)", 2, ivec(10, 15)),
                ("(1;1)", 2, ivec(30, 30)),
            ]
        );
        assert!(verify_boosted(&out).passed());
    }

    #[test]
    fn step_warns_on_exact_boundary_distance() {
        // at scale 1 on an integer line the open 1-fattening adds
        // nothing, so the two new pieces inherit the original gap of
        // exactly 1
        let space = path_space("line11", 11);
        let cert = DecompositionCertificate {
            family: MetricFamily::new(vec![Arc::clone(&space)]).unwrap(),
            r: q("3"),
            n: 1,
            pieces: vec![SpacePieces {
                space: Arc::clone(&space),
                pieces: vec![
                    Piece {
                        name: "a".into(),
                        color: 0,
                        points: interval(&space, 0, 5),
                    },
                    Piece {
                        name: "b".into(),
                        color: 1,
                        points: interval(&space, 6, 10),
                    },
                ],
            }],
            witness: Witness::Bounded { bound: q("5") },
        };
        let input = BoostedDecomposition::from_certificate(cert).unwrap();
        let out = kolmogorov_step(&input).unwrap();
        assert_eq!(out.notes.warnings.len(), 1);
        let w = &out.notes.warnings[0];
        assert_eq!(w.check, "boundary");
        assert!(w.detail.contains("(0;0)") && w.detail.contains("(1;0)"), "{w}");
        assert!(w.detail.contains("exactly 1"), "{w}");
        // the warning is honest: a strict re-verify flags exactly that
        // pair, so this output cannot feed a further step
        let strict = verify_boosted(&out);
        assert_eq!(strict.violations.len(), 1);
        assert_eq!(strict.violations[0].check, "r-disjoint");
        assert!(strict.violations[0].detail.contains("(0;0)"));
        assert!(matches!(
            kolmogorov_step(&out),
            Err(Error::InputInvalid { .. })
        ));
    }

    #[test]
    fn chained_boost_reaches_depth_three() {
        // 91 points at scale 27: two steps land at scale 3, depth 3
        let space = path_space("line91", 91);
        let mk = |name: &str, color: u32, lo: i64, hi: i64| Piece {
            name: name.into(),
            color,
            points: interval(&space, lo, hi),
        };
        let cert = DecompositionCertificate {
            family: MetricFamily::new(vec![Arc::clone(&space)]).unwrap(),
            r: q("27"),
            n: 1,
            pieces: vec![SpacePieces {
                space: Arc::clone(&space),
                pieces: vec![
                    mk("a0", 0, 0, 26),
                    mk("a1", 0, 55, 82),
                    mk("b0", 1, 27, 54),
                    mk("b1", 1, 83, 90),
                ],
            }],
            witness: Witness::Bounded { bound: q("28") },
        };
        let start = BoostedDecomposition::from_certificate(cert).unwrap();
        let deep = boost_to_depth(&start, 3).unwrap();
        assert_eq!(deep.depth, 3);
        assert_eq!(deep.cert.r, q("3"));
        assert_eq!(deep.cert.n, 3);
        assert!(verify_boosted(&deep).passed());
        // identity at the current depth
        let same = boost_to_depth(&start, 1).unwrap();
        assert_eq!(same.depth, 1);
        assert_eq!(same.cert.r, q("27"));
        // and going down is refused
        assert!(matches!(
            boost_to_depth(&deep, 2),
            Err(Error::ScheduleUnderflow {
                requested: 2,
                current: 3
            })
        ));
    }

    #[test]
    fn step_rejects_bad_input() {
        let mut input = line31_scale9();
        input.cert.pieces[0].pieces[1].color = 1; // a1 now collides with b0 at distance 1
        let err = kolmogorov_step(&input).unwrap_err();
        assert!(matches!(err, Error::InputInvalid { .. }), "{err}");

        let mut input = line31_scale9();
        input.cert.witness = Witness::Cover {
            m: 0,
            scale: q("1"),
            bound: q("1"),
            covers: vec![vec![]],
        };
        let err = kolmogorov_step(&input).unwrap_err();
        assert!(matches!(err, Error::InputInvalid { .. }), "{err}");
    }

    /// Global block pattern on the 31-point line: block `k` is
    /// `[5k, 5k+10]` clipped, class `k mod 3`. Per piece, class `c`
    /// keeps the nonempty intersections of class-`c` blocks.
    fn block_cover_for(
        space: &Arc<FiniteMetricSpace>,
        piece: &PointSet,
        relabel: &dyn Fn(u32) -> u32,
    ) -> ClassedCover {
        let mut classes: Vec<Vec<NamedSet>> = vec![Vec::new(); 3];
        for k in -1i64..=6 {
            let block = interval(space, 5 * k, 5 * k + 10);
            let cut = block.intersection(piece);
            if cut.is_empty() {
                continue;
            }
            let class = relabel((k.rem_euclid(3)) as u32);
            classes[class as usize].push(NamedSet::new(format!("B{k}"), cut));
        }
        ClassedCover { classes }
    }

    fn boosted_with_covers(relabels: Vec<Box<dyn Fn(u32) -> u32>>) -> BoostedDecomposition {
        let mut out = kolmogorov_step(&line31_scale9()).unwrap();
        let space = Arc::clone(&out.cert.pieces[0].space);
        let covers: Vec<ClassedCover> = out.cert.pieces[0]
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let id: Box<dyn Fn(u32) -> u32> = Box::new(|c| c);
                let f = relabels.get(k).unwrap_or(&id);
                block_cover_for(&space, &p.points, f.as_ref())
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

    #[test]
    fn combine_aligned_covers_passes_everywhere() {
        let b = boosted_with_covers(Vec::new());
        assert!(verify_boosted(&b).passed(), "{}", verify_boosted(&b));
        let result = combine_cover(&b).unwrap();
        assert!(result.report.passed(), "{}", result.report);
        assert_eq!(result.check_scale, q("3/2"));
        assert_eq!(result.colors, 3);
        assert_eq!(result.bound, q("10"));
        let cover = &result.covers[0];
        // class sets drawn from same-color pieces only
        let names: Vec<&str> = cover.sets().iter().map(|s| s.name.as_str()).collect();
        assert!(names.contains(&"a0+/B0"));
        assert!(names.contains(&"b0+/B1"));
        assert!(names.contains(&"(1;0)/B2"));
        assert!(!names.iter().any(|n| n.starts_with("a0+/B1")));
    }

    #[test]
    fn combine_detects_misaligned_covers() {
        // pieces a0+ (index 0) and b0+ (index 2) get relabeled covers:
        // each still satisfies every per-piece condition, but the
        // assignments disagree and points 6..9 end up uncovered
        let shift: Box<dyn Fn(u32) -> u32> = Box::new(|c| (c + 1) % 3);
        let swap12: Box<dyn Fn(u32) -> u32> = Box::new(|c| match c {
            1 => 2,
            2 => 1,
            other => other,
        });
        let id: Box<dyn Fn(u32) -> u32> = Box::new(|c| c);
        let b = boosted_with_covers(vec![shift, id, swap12]);
        // the per-piece witness data is still internally valid
        assert!(verify_boosted(&b).passed(), "{}", verify_boosted(&b));
        let result = combine_cover(&b).unwrap();
        assert!(!result.report.passed());
        let uncovered: Vec<&crate::report::Finding> = result
            .report
            .violations
            .iter()
            .filter(|v| v.check == "coverage")
            .collect();
        assert_eq!(uncovered.len(), 4);
        for (finding, point) in uncovered.iter().zip(["6", "7", "8", "9"]) {
            assert!(finding.detail.contains(&format!("point {point} ")), "{finding}");
        }
    }

    #[test]
    fn combine_refuses_shallow_or_unwitnessed_input() {
        // depth 1 with m = 1 is below m+1
        let space = path_space("line31b", 31);
        let piece = Piece {
            name: "all".into(),
            color: 0,
            points: interval(&space, 0, 30),
        };
        let cover = block_cover_for(&space, &piece.points, &|c| c);
        let cert = DecompositionCertificate {
            family: MetricFamily::new(vec![Arc::clone(&space)]).unwrap(),
            r: q("3"),
            n: 2,
            pieces: vec![SpacePieces {
                space: Arc::clone(&space),
                pieces: vec![piece],
            }],
            witness: Witness::Cover {
                m: 1,
                scale: q("4"),
                bound: q("10"),
                covers: vec![vec![cover]],
            },
        };
        let b = BoostedDecomposition::from_certificate(cert).unwrap();
        let err = combine_cover(&b).unwrap_err();
        assert!(
            matches!(&err, Error::InputInvalid { detail } if detail.contains("depth 1 below m+1 = 2")),
            "{err}"
        );

        let plain = line31_scale9();
        assert!(matches!(
            combine_cover(&plain),
            Err(Error::InputInvalid { .. })
        ));
    }

    #[test]
    fn searched_decomposition_boosts_cleanly() {
        // end to end: search at scale 9 on a longer line, boost once
        let space = path_space("line61", 61);
        let out = crate::decomp::search_decomposition(&space, &q("9"), 1, &q("20"), 2_000_000, 0)
            .unwrap();
        let SearchOutcome::Found(cert) = out else {
            panic!("decomposition exists");
        };
        assert!(verify_certificate(&cert).passed());
        let b = BoostedDecomposition::from_certificate(*cert).unwrap();
        let deep = kolmogorov_step(&b).unwrap();
        assert_eq!(deep.depth, 2);
        assert_eq!(deep.cert.r, q("3"));
        assert!(verify_boosted(&deep).passed());
    }
}
