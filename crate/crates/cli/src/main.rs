//! Command-line front end: construct state sets, verify genuine
//! nonlocality, run PPT certification, and render the witness grids.
//!
//! Exit codes: 0 ok, 1 verdict-not-certified, 2 search failure,
//! 3 invalid parameters.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ghz_nonlocal::constructions::{
    dplus1_set, mdn_set, prop1_set, thm1_set, DEFAULT_SEARCH_BUDGET,
};
use ghz_nonlocal::group::{Bipartition, GroupElement, Subgroup};
use ghz_nonlocal::sdp::{solve_ppt, DiscriminationInstance, SdpParams, SdpVerdict};
use ghz_nonlocal::states::StateSet;
use ghz_nonlocal::tables::{ghz_table, RepOverride, TableExample};
use ghz_nonlocal::verifier::{
    genuine_nonlocality_report, reduce_to_bipartite, Verdict, WitnessKind,
};
use ghz_nonlocal::{Error, NumericPolicy};

/// Numeric-policy scale can also come from this environment variable;
/// explicit flags always win.
const TOL_ENV: &str = "GHZ_NONLOCAL_TOL_SCALE";

#[derive(Debug, Parser)]
#[command(
    name = "ghznl",
    version,
    about = "construct and certify genuinely nonlocal GHZ sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonOpts {
    /// Output file (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Scale factor applied to every numeric tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a state-set JSON file
    Construct {
        /// Construction family: prop1 | thm1 | mdn | dplus1
        kind: String,

        #[arg(long)]
        d: Option<usize>,

        #[arg(long)]
        n: usize,

        /// Subgroup-size parameter for thm1 (1 <= t <= n-1).
        #[arg(long)]
        t: Option<usize>,

        /// Subgroup basis for thm1 as comma-separated bit strings.
        #[arg(long)]
        subgroup: Option<String>,

        /// Number of stopper states for dplus1.
        #[arg(long, default_value_t = 1)]
        stoppers: usize,

        /// Node budget for the stopper search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Verify genuine nonlocality of a state-set file
    Verify {
        /// State-set JSON file.
        input: PathBuf,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Run the PPT discrimination SDP on one bipartition of a set
    CertifyPpt {
        /// State-set JSON file.
        input: PathBuf,

        /// Bipartition mask as a bit string, e.g. 0011.
        #[arg(long)]
        bipartition: String,

        /// Allow the large desk instances (raises the dimension cap and
        /// stops as soon as the validated bound certifies).
        #[arg(long)]
        long: bool,

        /// Iteration cap override.
        #[arg(long)]
        budget: Option<usize>,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Render a witness-assignment grid (n4 | n5 | n6)
    Table {
        example: String,

        /// JSON file with printed-label overrides {"rows": [...], "cols": [...]}.
        #[arg(long)]
        reps: Option<PathBuf>,

        /// Emit the grid as JSON instead of text.
        #[arg(long)]
        json: bool,

        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NoArrangementFound { .. } => 2,
        _ => 3,
    }
}

fn tolerance_scale(flag: Option<f64>) -> f64 {
    flag.or_else(|| {
        std::env::var(TOL_ENV)
            .ok()
            .and_then(|v| v.parse::<f64>().ok())
    })
    .unwrap_or(1.0)
}

fn emit(common: &CommonOpts, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(e.to_string())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_subgroup(n: usize, spec: &str) -> Result<Subgroup, Error> {
    let basis = spec
        .split(',')
        .map(|s| GroupElement::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Subgroup::new(n as u32, basis)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Construct {
            kind,
            d,
            n,
            t,
            subgroup,
            stoppers,
            budget,
            common,
        } => {
            let set = match kind.as_str() {
                "prop1" => {
                    let d = d.ok_or_else(|| Error::InvalidIndex("prop1 needs --d".into()))?;
                    prop1_set(d, n)?
                }
                "thm1" => {
                    let t = t.ok_or_else(|| Error::InvalidIndex("thm1 needs --t".into()))?;
                    let sg = subgroup.map(|s| parse_subgroup(n, &s)).transpose()?;
                    thm1_set(n, t, sg)?
                }
                "mdn" => {
                    let d = d.ok_or_else(|| Error::InvalidIndex("mdn needs --d".into()))?;
                    mdn_set(d, n)?
                }
                "dplus1" => {
                    let d = d.ok_or_else(|| Error::InvalidIndex("dplus1 needs --d".into()))?;
                    dplus1_set(d, n, stoppers, budget)?
                }
                other => {
                    return Err(Error::InvalidIndex(format!(
                        "unknown construction {other:?}; expected prop1, thm1, mdn or dplus1"
                    )))
                }
            };
            emit(&common, &set.to_json())?;
            eprintln!(
                "constructed {} states (n = {}, d = {})",
                set.len(),
                set.n(),
                set.d()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { input, common } => {
            let text = std::fs::read_to_string(&input).map_err(|e| Error::Io(e.to_string()))?;
            let set = StateSet::from_json(&text)?;
            let report = genuine_nonlocality_report(&set)?;
            for w in &report.bipartitions {
                let b = Bipartition::from_mask(
                    set.n() as u32,
                    u64::from_str_radix(&w.mask, 2).map_err(|e| Error::Io(e.to_string()))?,
                )?;
                let kind = match w.kind {
                    WitnessKind::MesCount => "MES_COUNT",
                    WitnessKind::Lemma3 => "LEMMA3",
                    WitnessKind::None => "NONE",
                };
                let bound = w
                    .ppt_bound
                    .map(|x| format!("{x:.6}"))
                    .unwrap_or_else(|| "-".into());
                eprintln!(
                    "{:12} {:10} states {:?} embedded d={} ppt_bound={}",
                    b.display(),
                    kind,
                    w.states,
                    w.embedded_d,
                    bound
                );
            }
            emit(&common, &report.to_json())?;
            match report.verdict {
                Verdict::Certified => {
                    eprintln!(
                        "verdict: CERTIFIED ({} bipartitions)",
                        report.bipartitions.len()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Unknown => {
                    eprintln!(
                        "verdict: UNKNOWN ({} bipartitions uncovered)",
                        report.uncovered().len()
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }

        Command::CertifyPpt {
            input,
            bipartition,
            long,
            budget,
            common,
        } => {
            let text = std::fs::read_to_string(&input).map_err(|e| Error::Io(e.to_string()))?;
            let set = StateSet::from_json(&text)?;
            let mask = u64::from_str_radix(&bipartition, 2).map_err(|_| {
                Error::InvalidIndex(format!("bipartition mask {bipartition:?} is not binary"))
            })?;
            let b = Bipartition::from_mask(set.n() as u32, mask)?;
            let inst = reduce_to_bipartite(&set, &b)?;
            let scale = tolerance_scale(common.tol);
            let policy = NumericPolicy::scaled(scale);
            let mut params = SdpParams {
                residual_tol: policy.sdp_residual,
                ..SdpParams::default()
            };
            if long {
                params.early_certify = true;
            } else {
                params.side_cap = 231;
            }
            if let Some(iters) = budget {
                params.max_iterations = iters;
            }
            let di = DiscriminationInstance::from_bipartite(&inst)?;
            let cert = solve_ppt(&di, &params)?;
            emit(&common, &cert.to_json())?;
            eprintln!(
                "{} on {}x{}: primal {:.6}, validated dual bound {:.6} ({} iterations)",
                b.display(),
                inst.shape.dim_a,
                inst.shape.dim_b,
                cert.primal,
                cert.dual_bound,
                cert.iterations
            );
            match cert.verdict {
                SdpVerdict::PptIndistinguishable => Ok(ExitCode::SUCCESS),
                SdpVerdict::Inconclusive => Ok(ExitCode::from(1)),
            }
        }

        Command::Table {
            example,
            reps,
            json,
            common,
        } => {
            let example = TableExample::parse(&example)?;
            let over = reps
                .map(|path| -> Result<RepOverride, Error> {
                    let text =
                        std::fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
                    serde_json::from_str(&text).map_err(Error::from)
                })
                .transpose()?;
            let grid = ghz_table(example, over.as_ref())?;
            let rendered = if json { grid.to_json() } else { grid.render_text() };
            emit(&common, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
