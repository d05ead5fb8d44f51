//! Command-line front end. Exit codes separate the three verdicts:
//! 0 pass, 1 fail (refuted, report on stdout), 2 unusable input,
//! 3 uncertified (the window or budget could not settle the question).

use clap::{Parser, Subcommand};
use coarsekit::boost::{boost_to_depth, combine_cover, verify_boosted, BoostedDecomposition};
use coarsekit::decomp::{verify_certificate, SearchOutcome};
use coarsekit::error::Error;
use coarsekit::group::{ball_members, check_left_invariance, word_norms, word_norms_auto};
use coarsekit::json;
use coarsekit::nerve::{check_equivariance_up_to, nerve_of_cover, psi_map, psi_table};
use coarsekit::q::Q;
use coarsekit::report::{Report, Verdict};
use serde_json::json as jval;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coarsekit", version, about = "Exact coarse-geometry checks on finite windows")]
struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for internal parallelism (deterministic output
    /// regardless).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one input file for well-formedness and report.
    Validate {
        /// Finite metric space file.
        #[arg(long, conflicts_with_all = ["window", "action", "map", "family"])]
        space: Option<PathBuf>,
        /// Group window file.
        #[arg(long)]
        window: Option<PathBuf>,
        /// Action file (window, point set, table, optional metric).
        #[arg(long)]
        action: Option<PathBuf>,
        /// Equivariant map bundle.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Metric family file.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Cover file; requires --space.
        #[arg(long, requires = "space")]
        cover: Option<PathBuf>,
    },
    /// Search for a colored decomposition of a space.
    Decompose {
        space: PathBuf,
        /// Separation scale, as `p/q`.
        #[arg(long)]
        scale: String,
        /// Highest color index.
        #[arg(long)]
        colors: u32,
        /// Piece diameter bound, as `p/q`.
        #[arg(long)]
        bound: String,
        /// Shuffle the assignment order (0 keeps index order).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Search node budget.
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
    /// Re-verify a certificate exhaustively.
    VerifyCert { cert: PathBuf },
    /// Trade scale for coverage depth, one third per extra level.
    Boost {
        cert: PathBuf,
        /// Target depth; default one step up.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Combine a deep decomposition with per-piece classed covers into
    /// one cover per space.
    Combine { cert: PathBuf },
    /// Nerve complex of a cover.
    Nerve {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Barycentric partition-of-unity coordinates of cover points.
    Psi {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        /// One point label; all points when absent.
        #[arg(long)]
        point: Option<String>,
    },
    /// Check a map bundle for equivariance within its budget.
    Equivariance { map: PathBuf },
    /// Weighted word norms of a window, with the invariance check.
    Wordmetric {
        #[arg(long)]
        window: PathBuf,
        /// Certification radius, as `p/q`; largest certifiable when
        /// absent.
        #[arg(long)]
        radius: Option<String>,
    },
    /// Finite-window amenability check of an assigned cover.
    AmenableCheck {
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        fcover: PathBuf,
        /// Dimension cap for the cover.
        #[arg(long)]
        colors: u32,
        /// Word-norm radius of the ball the sets must capture.
        #[arg(long, default_value = "1")]
        ball: String,
    },
    /// Full run from an assigned fat cover to a verified map.
    AmenablePipeline {
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        fcover: PathBuf,
        /// Equivariance budget, as `p/q`.
        #[arg(long)]
        epsilon: String,
        /// Dimension cap.
        #[arg(long)]
        colors: u32,
    },
}

/// What a finished command hands back: a worst verdict, the full
/// report, and an optional artifact to put on stdout.
struct Outcome {
    verdict: Verdict,
    report: Report,
    /// (key under --json, emitted JSON text)
    artifact: Option<(&'static str, String)>,
}

impl Outcome {
    fn from_report(report: Report) -> Self {
        Outcome {
            verdict: report_verdict(&report),
            report,
            artifact: None,
        }
    }
}

fn report_verdict(report: &Report) -> Verdict {
    if let Some(v) = report.violations.first() {
        Verdict::fail(v.check.clone(), v.detail.clone())
    } else if let Some(c) = report.caveats.first() {
        Verdict::uncertified(c.clone())
    } else {
        Verdict::Pass
    }
}

fn exit_of(v: &Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail { .. } => 1,
        Verdict::Uncertified { .. } => 3,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::format(format!("cannot read {}: {e}", path.display())))
}

fn parse_q(text: &str, what: &str) -> Result<Q, Error> {
    text.parse()
        .map_err(|e| Error::format(format!("{what}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global();
    }
    match run(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                let mut body = jval!({
                    "verdict": outcome.verdict,
                    "report": outcome.report,
                });
                if let Some((key, text)) = &outcome.artifact {
                    let value: serde_json::Value =
                        serde_json::from_str(text).expect("own emission parses");
                    body[*key] = value;
                }
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            } else if let Some((_, text)) = &outcome.artifact {
                // keep stdout a clean artifact so it can be piped on
                println!("{text}");
                eprint!("{}", render(&outcome));
            } else {
                print!("{}", render(&outcome));
            }
            ExitCode::from(exit_of(&outcome.verdict))
        }
        Err(e) => {
            let code: u8 = match &e {
                Error::Uncertified { .. } | Error::WindowTooSmall { .. } | Error::Timeout { .. } => 3,
                _ => 2,
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&jval!({"error": e.to_string()}))
                        .expect("serializable")
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn render(outcome: &Outcome) -> String {
    let mut out = String::new();
    for v in &outcome.report.violations {
        out.push_str(&format!("violation[{}]: {}\n", v.check, v.detail));
    }
    for w in &outcome.report.warnings {
        out.push_str(&format!("warning[{}]: {}\n", w.check, w.detail));
    }
    for c in &outcome.report.caveats {
        out.push_str(&format!("caveat: {c}\n"));
    }
    match &outcome.verdict {
        Verdict::Pass => out.push_str("pass\n"),
        Verdict::Fail { witness } => {
            out.push_str(&format!("fail[{}]: {}\n", witness.check, witness.detail))
        }
        Verdict::Uncertified { reason } => out.push_str(&format!("uncertified: {reason}\n")),
    }
    out
}

fn run(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate {
            space,
            window,
            action,
            map,
            family,
            cover,
        } => validate(space, window, action, map, family, cover),
        Command::Decompose {
            space,
            scale,
            colors,
            bound,
            seed,
            budget,
        } => {
            let space = json::parse_space(&read(space)?)?;
            let r = parse_q(scale, "--scale")?;
            let bound = parse_q(bound, "--bound")?;
            match coarsekit::decomp::search_decomposition(&space, &r, *colors, &bound, *budget, *seed)? {
                SearchOutcome::Found(cert) => {
                    let check = verify_certificate(&cert);
                    let mut outcome = Outcome::from_report(check);
                    outcome.artifact = Some(("certificate", json::certificate_to_json(&cert)));
                    Ok(outcome)
                }
                SearchOutcome::NotFound => {
                    let mut report = Report::new();
                    report.violation(
                        "search",
                        "the search space is exhausted: no such decomposition",
                    );
                    Ok(Outcome::from_report(report))
                }
            }
        }
        Command::VerifyCert { cert } => {
            let (cert, depth) = json::parse_certificate(&read(cert)?)?;
            let report = match depth {
                Some(depth) => verify_boosted(&BoostedDecomposition {
                    cert,
                    depth,
                    notes: Report::new(),
                }),
                None => verify_certificate(&cert),
            };
            Ok(Outcome::from_report(report))
        }
        Command::Boost { cert, depth } => {
            let (cert, rider) = json::parse_certificate(&read(cert)?)?;
            let input = BoostedDecomposition {
                cert,
                depth: rider.unwrap_or(1),
                notes: Report::new(),
            };
            let target = depth.unwrap_or(input.depth + 1);
            let out = boost_to_depth(&input, target)?;
            let mut outcome = Outcome::from_report(out.notes.clone());
            outcome.artifact = Some(("certificate", json::boosted_to_json(&out)));
            Ok(outcome)
        }
        Command::Combine { cert } => {
            let (cert, rider) = json::parse_certificate(&read(cert)?)?;
            let input = BoostedDecomposition {
                cert,
                depth: rider.unwrap_or(1),
                notes: Report::new(),
            };
            let result = combine_cover(&input)?;
            let covers: Vec<String> = result.covers.iter().map(json::cover_to_json).collect();
            let artifact = format!(
                "{{\"check_scale\": {},\n\"colors\": {},\n\"bound\": {},\n\"covers\": [{}]}}",
                serde_json::to_string(&result.check_scale).expect("serializable"),
                result.colors,
                serde_json::to_string(&result.bound).expect("serializable"),
                covers.join(",\n")
            );
            let mut outcome = Outcome::from_report(result.report);
            outcome.artifact = Some(("combined", artifact));
            Ok(outcome)
        }
        Command::Nerve { space, cover } => {
            let space = json::parse_space(&read(space)?)?;
            let cover = json::parse_cover(&read(cover)?, &space)?;
            let nerve = nerve_of_cover(&cover)?;
            let mut outcome = Outcome::from_report(Report::new());
            outcome.artifact = Some(("complex", json::complex_to_json(&nerve)));
            Ok(outcome)
        }
        Command::Psi {
            space,
            cover,
            point,
        } => {
            let space = json::parse_space(&read(space)?)?;
            let cover = json::parse_cover(&read(cover)?, &space)?;
            let nerve = nerve_of_cover(&cover)?;
            let artifact = match point {
                Some(label) => {
                    let ix = space.point_index(label).ok_or_else(|| {
                        Error::format(format!("point {label:?} not in the space"))
                    })?;
                    json::nerve_point_to_json(&psi_map(&cover, ix)?, &nerve)
                }
                None => {
                    let all = psi_table(&cover)?;
                    let rows: Vec<String> = all
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            format!(
                                "{{\"point\": {}, \"value\": {}}}",
                                serde_json::to_string(space.label(i as u32))
                                    .expect("serializable"),
                                json::nerve_point_to_json(p, &nerve)
                            )
                        })
                        .collect();
                    format!("[{}]", rows.join(",\n"))
                }
            };
            let mut outcome = Outcome::from_report(Report::new());
            outcome.artifact = Some(("psi", artifact));
            Ok(outcome)
        }
        Command::Equivariance { map } => {
            let m = json::parse_map(&read(map)?)?;
            let out = check_equivariance_up_to(&m);
            let verdict = out.global.and(out.generator);
            Ok(Outcome {
                verdict,
                report: out.report,
                artifact: None,
            })
        }
        Command::Wordmetric { window, radius } => {
            let w = json::parse_window(&read(window)?)?;
            let table = match radius {
                Some(r) => word_norms(&w, parse_q(r, "--radius")?)?,
                None => word_norms_auto(&w),
            };
            let report = check_left_invariance(&table);
            let rows: Vec<String> = (0..w.len() as u32)
                .map(|g| {
                    let norm = match table.norm(g) {
                        Some(n) => serde_json::to_string(n).expect("serializable"),
                        None => "null".into(),
                    };
                    format!(
                        "{{\"element\": {}, \"norm\": {norm}}}",
                        serde_json::to_string(w.label(g)).expect("serializable")
                    )
                })
                .collect();
            let mut outcome = Outcome::from_report(report);
            outcome.artifact = Some((
                "norms",
                format!(
                    "{{\"radius\": {},\n\"norms\": [{}]}}",
                    serde_json::to_string(table.radius()).expect("serializable"),
                    rows.join(",\n")
                ),
            ));
            Ok(outcome)
        }
        Command::AmenableCheck {
            action,
            fcover,
            colors,
            ball,
        } => {
            let aw = json::parse_action(&read(action)?)?;
            let cover = json::parse_fcover(&read(fcover)?, &aw)?;
            let radius = parse_q(ball, "--ball")?;
            let norms = word_norms_auto(aw.window());
            let s = ball_members(&norms, &radius);
            let s: Vec<u32> = s.iter().collect();
            let verdict = coarsekit::amenable::check_n_f_amenable(&aw, &s, &cover, *colors);
            Ok(Outcome {
                verdict,
                report: Report::new(),
                artifact: None,
            })
        }
        Command::AmenablePipeline {
            action,
            fcover,
            epsilon,
            colors,
        } => {
            let aw = json::parse_action(&read(action)?)?;
            let cover = json::parse_fcover(&read(fcover)?, &aw)?;
            let epsilon = parse_q(epsilon, "--epsilon")?;
            let product = aw
                .metric()
                .cloned()
                .ok_or_else(|| Error::input("the action file carries no product metric"))?;
            let result =
                coarsekit::amenable::run_amenable_pipeline(&aw, &cover, &product, &epsilon, *colors)?;
            // the margin caveat is informational; truncation shows up
            // in the equivariance verdict itself
            let verdict = if let Some(v) = result.report.violations.first() {
                Verdict::fail(v.check.clone(), v.detail.clone())
            } else {
                result
                    .equivariance
                    .global
                    .clone()
                    .and(result.equivariance.generator.clone())
            };
            let mut outcome = Outcome {
                verdict,
                report: result.report,
                artifact: None,
            };
            outcome.artifact = Some(("map", json::map_to_json(&result.map)));
            Ok(outcome)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn validate(
    space: &Option<PathBuf>,
    window: &Option<PathBuf>,
    action: &Option<PathBuf>,
    map: &Option<PathBuf>,
    family: &Option<PathBuf>,
    cover: &Option<PathBuf>,
) -> Result<Outcome, Error> {
    if let Some(path) = window {
        let w = json::parse_window(&read(path)?)?;
        return Ok(Outcome::from_report(
            coarsekit::group::validate_group_window(&w),
        ));
    }
    if let Some(path) = action {
        let aw = json::parse_action(&read(path)?)?;
        return Ok(Outcome::from_report(coarsekit::amenable::validate_action(
            &aw,
        )));
    }
    if let Some(path) = map {
        let m = json::parse_map(&read(path)?)?;
        let mut report = coarsekit::nerve::validate_simplicial_action(&m.target);
        report.absorb("domain", coarsekit::amenable::validate_action(&m.domain));
        return Ok(Outcome::from_report(report));
    }
    if let Some(path) = family {
        json::parse_family(&read(path)?)?;
        return Ok(Outcome::from_report(Report::new()));
    }
    if let Some(space_path) = space {
        let s = json::parse_space(&read(space_path)?)?;
        if let Some(cover_path) = cover {
            let c = json::parse_cover(&read(cover_path)?, &s)?;
            return Ok(Outcome::from_report(coarsekit::decomp::validate_cover(&c)));
        }
        return Ok(Outcome::from_report(Report::new()));
    }
    Err(Error::input(
        "nothing to validate: pass --space, --window, --action, --map, or --family",
    ))
}
