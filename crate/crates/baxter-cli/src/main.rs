//! Batch front-end for the workbench: parse JSON descriptions, dispatch
//! verifications, and emit machine-readable reports.
//!
//! Conventions shared by every subcommand:
//!
//! * All inputs and outputs are JSON; scalar values are expression strings
//!   in the grammar of the scalar module.
//! * Reports carry the resolved seed even in expand mode, so identical
//!   invocations produce byte-identical output.
//! * Exit status: 0 when every check passed, 1 when a check failed, 2 on
//!   malformed input or usage errors.
//! * Sampling commands default to full expansion for dimension <= 3 and to
//!   20 seeded sample points above that; `--mode`, `--samples`, and
//!   `--seed` override. `BAXTER_SEED` supplies the seed when no flag does.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use baxter::algebra::{
    generate_rtt_relations, gl_multiparam_presentation, gl_presentation, t_gen, tilde_gen,
    verify_coaction_invariance, verify_primed_qybe, verify_realization_gl, verify_rtt_match,
    verify_x_relations, Gen, PlaneKind, QuadraticPresentation,
};
use baxter::csmodel::{check_symmetric_group, AnyonRep};
use baxter::report::{CheckReport, Status};
use baxter::rmatrix::{ParticleConservingR, RSpecFile, SpectralKind, TwistData, TwistFile};
use baxter::scalar::{parse_expr, CheckMode, SampleConfig};
use baxter::twistcore::{check_constraint_invariance, check_constraints, verify_s_equality};
use baxter::yangian::{
    build_eval_rep, check_coloured_qybe, check_combined_relation, check_extended_relations,
    check_qybe_eval, generate_mode_relations, EvalRep, ModeKind,
};

#[derive(Parser)]
#[command(
    name = "baxter",
    version,
    about = "Exact-arithmetic checks for particle-conserving vertex models and their twists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Yang-Baxter identity for a matrix description.
    VerifyYbe {
        /// Matrix description (builder kind or explicit tables).
        #[arg(long)]
        r: PathBuf,
        /// Twist data, needed only by the coloured builder kind.
        #[arg(long)]
        tw: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Check the coefficient constraint system equivalent to the
    /// Yang-Baxter identity; with twist data, also check that twisting
    /// preserves the constraints.
    VerifyConstraints {
        #[arg(long)]
        r: PathBuf,
        #[arg(long)]
        tw: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Apply a twist to a matrix and write the deformed tables. The output
    /// is a valid input to every verify command.
    Twist {
        #[arg(long)]
        r: PathBuf,
        #[arg(long)]
        tw: PathBuf,
        /// Destination file; the tables also print to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the scalar-factor equality behind twist covariance of
    /// monodromy products, over all index quadruples.
    VerifySEquality {
        /// Index range.
        #[arg(long)]
        n: usize,
        /// Twist data; symbolic roots when absent.
        #[arg(long)]
        tw: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Generate the exchange relations of a matrix; optionally prove
    /// bidirectional equivalence with a quadratic presentation.
    GenRtt {
        #[arg(long)]
        r: PathBuf,
        /// Presentation file, or a built-in family name: `gl` (diagonal
        /// deformation) or `gl-multiparam` (fully deformed weights).
        #[arg(long)]
        check_against: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the generator substitution that carries the deformed diagonal
    /// relations to the undeformed ones.
    VerifyRealizationGl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the constant-matrix identity satisfied by the primed matrix
    /// with its diagonal stripped.
    VerifyPrimedQybe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check quantum-plane relations: coaction invariance and the exchange
    /// relations of plane coordinates.
    VerifyCoaction {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PlaneArg::Both)]
        plane: PlaneArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand the spectral exchange identity into mode-indexed relation
    /// families and list them.
    GenModeRelations {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// Truncation depth of the mode series.
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prove that the combined relation at a level pair lies in the
    /// scalar-linear span of the generated families, with certificates.
    CheckSpan {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lev_n: usize,
        #[arg(long)]
        lev_m: usize,
        /// Truncation depth; defaults to the smallest window that admits
        /// the combined relation.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the spectral exchange identity in the one-parameter
    /// evaluation representation.
    VerifyEvalQybe {
        #[arg(long)]
        n: usize,
        /// Weight of the representation, as an expression.
        #[arg(long, default_value = "h")]
        h: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Check the colour-dressed series: dressing crossings, the
    /// two-component exchange identity, and both dressing paths.
    VerifyColouredQybe {
        #[arg(long)]
        n: usize,
        /// Twist data; symbolic roots and colour weights when absent.
        #[arg(long)]
        tw: Option<PathBuf>,
        #[arg(long, default_value = "h")]
        h: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Check the phase representation of transpositions on multi-particle
    /// states: involution, disjoint commutativity, braid behaviour.
    CheckPermutation {
        /// Number of colours.
        #[arg(long = "N")]
        n: usize,
        /// Number of positions.
        #[arg(long = "M")]
        m: usize,
        /// Deformation table entries as `[a, b, "expression"]` triples;
        /// the trivial table when absent.
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModeArgs {
    /// Verification mode; default: expand for dimension <= 3, else sample.
    #[arg(long, value_enum)]
    mode: Option<ModeChoice>,
    /// Number of sample points in sample mode.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Seed for the sample-point stream; falls back to BAXTER_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here in addition to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Expand,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaneArg {
    Symmetric,
    Exterior,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Standard,
    Coloured,
}

impl KindArg {
    fn to_kind(self) -> ModeKind {
        match self {
            KindArg::Standard => ModeKind::Standard,
            KindArg::Coloured => ModeKind::Coloured,
        }
    }
}

/// Report envelope: one JSON object per run, fields in fixed order.
#[derive(Serialize)]
struct CliReport {
    command: String,
    inputs: BTreeMap<String, Value>,
    seed: u64,
    mode: String,
    checks: Vec<baxter::report::CheckItem>,
    status: Status,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::VerifyYbe { r, tw, mode } => verify_ybe(&r, tw.as_deref(), &mode),
        Command::VerifyConstraints { r, tw, mode } => verify_constraints(&r, tw.as_deref(), &mode),
        Command::Twist { r, tw, out } => twist(&r, &tw, out.as_deref()),
        Command::VerifySEquality { n, tw, mode } => s_equality(n, tw.as_deref(), &mode),
        Command::GenRtt { r, check_against, out } => gen_rtt(&r, check_against.as_deref(), out.as_deref()),
        Command::VerifyRealizationGl { n, out } => {
            let report = verify_realization_gl(n)?;
            let inputs = [("n".to_string(), json!(n))].into();
            finish("verify-realization-gl", inputs, resolve_seed(None)?, report, out.as_deref())
        }
        Command::VerifyPrimedQybe { n, out } => {
            let report = verify_primed_qybe(n)?;
            let inputs = [("n".to_string(), json!(n))].into();
            finish("verify-primed-qybe", inputs, resolve_seed(None)?, report, out.as_deref())
        }
        Command::VerifyCoaction { n, plane, out } => coaction(n, plane, out.as_deref()),
        Command::GenModeRelations { kind, n, n_max, out } => {
            gen_modes(kind, n, n_max, out.as_deref())
        }
        Command::CheckSpan { kind, n, lev_n, lev_m, n_max, out } => {
            let n_max = n_max.unwrap_or(lev_n + lev_m + 1);
            let report = check_combined_relation(kind.to_kind(), n, lev_n, lev_m, n_max)?;
            let inputs = [
                ("kind".to_string(), json!(kind.to_kind().label())),
                ("n".to_string(), json!(n)),
                ("lev-n".to_string(), json!(lev_n)),
                ("lev-m".to_string(), json!(lev_m)),
                ("n-max".to_string(), json!(n_max)),
            ]
            .into();
            finish("check-span", inputs, resolve_seed(None)?, report, out.as_deref())
        }
        Command::VerifyEvalQybe { n, h, mode } => eval_qybe(n, &h, &mode),
        Command::VerifyColouredQybe { n, tw, h, mode } => {
            coloured_qybe(n, tw.as_deref(), &h, &mode)
        }
        Command::CheckPermutation { n, m, phi, out } => permutation(n, m, phi.as_deref(), out.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads a matrix description plus optional twist data. Builder
/// descriptions use the `N`/`kind` form; files written by `twist` carry
/// explicit tables under `n`/`spectral`. Twist data is realized at the
/// matrix dimension.
fn load_r(
    r_path: &Path,
    tw_path: Option<&Path>,
) -> anyhow::Result<(ParticleConservingR, Option<TwistData>)> {
    let value = read_json(r_path)?;
    let obj = value
        .as_object()
        .with_context(|| format!("{} must hold a JSON object", r_path.display()))?;
    if obj.contains_key("N") {
        let spec: RSpecFile = serde_json::from_value(value)
            .with_context(|| format!("parsing matrix description {}", r_path.display()))?;
        let tw = tw_path.map(|p| load_tw(p, spec.n)).transpose()?;
        let r = spec
            .build(tw.as_ref())
            .with_context(|| format!("building matrix from {}", r_path.display()))?;
        Ok((r, tw))
    } else {
        let r: ParticleConservingR = serde_json::from_value(value)
            .with_context(|| format!("parsing matrix tables {}", r_path.display()))?;
        let tw = tw_path.map(|p| load_tw(p, r.n())).transpose()?;
        Ok((r, tw))
    }
}

fn load_tw(path: &Path, n: usize) -> anyhow::Result<TwistData> {
    let file: TwistFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("parsing twist data {}", path.display()))?;
    file.build(n)
        .with_context(|| format!("realizing twist data {} at n = {n}", path.display()))
}

// ---------------------------------------------------------------------------
// Mode and seed resolution
// ---------------------------------------------------------------------------

fn resolve_seed(explicit: Option<u64>) -> anyhow::Result<u64> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var("BAXTER_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("BAXTER_SEED must be an unsigned integer, got `{text}`")),
        Err(_) => Ok(0),
    }
}

fn resolve_mode(n: usize, args: &ModeArgs) -> anyhow::Result<(CheckMode, u64)> {
    let seed = resolve_seed(args.seed)?;
    let sample = || CheckMode::Sample(SampleConfig::new(args.samples, seed));
    let mode = match args.mode {
        Some(ModeChoice::Expand) => CheckMode::Expand,
        Some(ModeChoice::Sample) => sample(),
        None if n <= 3 => CheckMode::Expand,
        None => sample(),
    };
    Ok((mode, seed))
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    if let Some(path) = out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{text}");
    Ok(())
}

fn finish(
    command: &str,
    inputs: BTreeMap<String, Value>,
    seed: u64,
    report: CheckReport,
    out: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let status = report.status;
    let cli_report = CliReport {
        command: command.to_string(),
        inputs,
        seed: report.seed.unwrap_or(seed),
        mode: report.mode,
        checks: report.checks,
        status,
    };
    emit(&cli_report, out)?;
    Ok(match status {
        Status::Pass => ExitCode::SUCCESS,
        _ => ExitCode::from(1),
    })
}

/// Envelope for the generate commands, which list data instead of checks.
#[derive(Serialize)]
struct ListEnvelope {
    command: String,
    inputs: BTreeMap<String, Value>,
    relations: Vec<Value>,
}

fn path_value(path: &Path) -> Value {
    Value::String(path.display().to_string())
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn verify_ybe(r_path: &Path, tw_path: Option<&Path>, args: &ModeArgs) -> anyhow::Result<ExitCode> {
    let (r, _) = load_r(r_path, tw_path)?;
    let (mode, seed) = resolve_mode(r.n(), args)?;
    let report = r.check_ybe(&mode)?;
    let mut inputs: BTreeMap<String, Value> = [
        ("r".to_string(), path_value(r_path)),
        ("N".to_string(), json!(r.n())),
    ]
    .into();
    if let Some(p) = tw_path {
        inputs.insert("tw".to_string(), path_value(p));
    }
    finish("verify-ybe", inputs, seed, report, args.out.as_deref())
}

fn verify_constraints(
    r_path: &Path,
    tw_path: Option<&Path>,
    args: &ModeArgs,
) -> anyhow::Result<ExitCode> {
    let (r, tw) = load_r(r_path, tw_path)?;
    // Twisted tables carry two colour slots; the constraint system reads
    // single-colour tables, so collapse before checking.
    let collapsed = r.spectral_kind() == SpectralKind::Bicomponent;
    let base = if collapsed { r.colour_collapse()? } else { r };
    let (mode, seed) = resolve_mode(base.n(), args)?;
    let mut reports = vec![check_constraints(&base, &mode)?];
    if let Some(tw) = &tw {
        reports.push(check_constraint_invariance(&base, tw, &mode)?);
    }
    let report = CheckReport::combine("verify-constraints", reports);
    let mut inputs: BTreeMap<String, Value> = [
        ("r".to_string(), path_value(r_path)),
        ("N".to_string(), json!(base.n())),
    ]
    .into();
    if collapsed {
        inputs.insert("collapsed".to_string(), json!(true));
    }
    if let Some(p) = tw_path {
        inputs.insert("tw".to_string(), path_value(p));
    }
    finish("verify-constraints", inputs, seed, report, args.out.as_deref())
}

fn twist(r_path: &Path, tw_path: &Path, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let (r, tw) = load_r(r_path, Some(tw_path))?;
    let tw = tw.expect("twist path was supplied");
    let twisted = if r.spectral_kind() == SpectralKind::Bicomponent {
        bail!("matrix is already twisted; twisting twice is not defined");
    } else {
        r.twist(&tw)?
    };
    emit(&serde_json::to_value(&twisted)?, out)?;
    Ok(ExitCode::SUCCESS)
}

fn s_equality(n: usize, tw_path: Option<&Path>, args: &ModeArgs) -> anyhow::Result<ExitCode> {
    let tw = tw_path.map(|p| load_tw(p, n)).transpose()?;
    let (mode, seed) = resolve_mode(n, args)?;
    let report = verify_s_equality(n, tw.as_ref(), &mode)?;
    let mut inputs: BTreeMap<String, Value> = [("n".to_string(), json!(n))].into();
    if let Some(p) = tw_path {
        inputs.insert("tw".to_string(), path_value(p));
    }
    finish("verify-s-equality", inputs, seed, report, args.out.as_deref())
}

fn gen_rtt(
    r_path: &Path,
    check_against: Option<&str>,
    out: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let (r, _) = load_r(r_path, None)?;
    match check_against {
        None => {
            let spectralless = r.spectral_kind() == SpectralKind::None;
            let relations = generate_rtt_relations(&r, spectralless)?;
            let listed = relations
                .iter()
                .map(|(label, element)| {
                    json!({ "label": label, "element": element.to_string() })
                })
                .collect();
            let envelope = ListEnvelope {
                command: "gen-rtt".to_string(),
                inputs: [
                    ("r".to_string(), path_value(r_path)),
                    ("N".to_string(), json!(r.n())),
                ]
                .into(),
                relations: listed,
            };
            emit(&envelope, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Some(target) => {
            let presentation = load_presentation(target, r.n())?;
            // The deformed families write their matrix entries as Tt_i_j;
            // pick the alphabet the presentation actually uses.
            let tilde = presentation.gens().iter().any(|g| g.name().starts_with("Tt_"));
            let gen_of: &dyn Fn(usize, usize) -> Gen =
                if tilde { &tilde_gen } else { &t_gen };
            let report = verify_rtt_match(&r, &presentation, gen_of)?;
            let inputs = [
                ("r".to_string(), path_value(r_path)),
                ("N".to_string(), json!(r.n())),
                ("check-against".to_string(), json!(target)),
            ]
            .into();
            finish("gen-rtt", inputs, resolve_seed(None)?, report, out)
        }
    }
}

fn load_presentation(target: &str, n: usize) -> anyhow::Result<QuadraticPresentation> {
    let path = Path::new(target);
    if path.exists() {
        let p: QuadraticPresentation = serde_json::from_value(read_json(path)?)
            .with_context(|| format!("parsing presentation {}", path.display()))?;
        return Ok(p);
    }
    match target {
        "gl" => Ok(gl_presentation(n)?),
        "gl-multiparam" => Ok(gl_multiparam_presentation(n)?),
        other => bail!(
            "`{other}` is neither an existing file nor a built-in family (gl, gl-multiparam)"
        ),
    }
}

fn coaction(n: usize, plane: PlaneArg, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let kinds: &[PlaneKind] = match plane {
        PlaneArg::Symmetric => &[PlaneKind::Symmetric],
        PlaneArg::Exterior => &[PlaneKind::Exterior],
        PlaneArg::Both => &[PlaneKind::Symmetric, PlaneKind::Exterior],
    };
    let mut reports = Vec::new();
    for kind in kinds {
        reports.push(verify_coaction_invariance(n, *kind)?);
        reports.push(verify_x_relations(n, *kind)?);
    }
    let report = CheckReport::combine("verify-coaction", reports);
    let plane_label = match plane {
        PlaneArg::Symmetric => "symmetric",
        PlaneArg::Exterior => "exterior",
        PlaneArg::Both => "both",
    };
    let inputs = [
        ("n".to_string(), json!(n)),
        ("plane".to_string(), json!(plane_label)),
    ]
    .into();
    finish("verify-coaction", inputs, resolve_seed(None)?, report, out)
}

fn gen_modes(kind: KindArg, n: usize, n_max: usize, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let relations = generate_mode_relations(kind.to_kind(), n, n_max)?;
    let listed = relations
        .iter()
        .map(|rel| {
            json!({
                "family": rel.family,
                "indices": rel.indices,
                "grid": rel.grid,
                "levels": rel.levels,
                "element": rel.element.to_string(),
            })
        })
        .collect();
    let envelope = ListEnvelope {
        command: "gen-mode-relations".to_string(),
        inputs: [
            ("kind".to_string(), json!(kind.to_kind().label())),
            ("n".to_string(), json!(n)),
            ("n-max".to_string(), json!(n_max)),
        ]
        .into(),
        relations: listed,
    };
    emit(&envelope, out)?;
    Ok(ExitCode::SUCCESS)
}

fn eval_rep_for(n: usize, h: &str) -> anyhow::Result<EvalRep> {
    let weight = parse_expr(h).with_context(|| format!("parsing weight `{h}`"))?;
    Ok(build_eval_rep(n, weight)?)
}

fn eval_qybe(n: usize, h: &str, args: &ModeArgs) -> anyhow::Result<ExitCode> {
    let rep = eval_rep_for(n, h)?;
    let (mode, seed) = resolve_mode(n, args)?;
    let report = check_qybe_eval(&rep, &mode)?;
    let inputs = [
        ("n".to_string(), json!(n)),
        ("h".to_string(), json!(h)),
    ]
    .into();
    finish("verify-eval-qybe", inputs, seed, report, args.out.as_deref())
}

fn coloured_qybe(
    n: usize,
    tw_path: Option<&Path>,
    h: &str,
    args: &ModeArgs,
) -> anyhow::Result<ExitCode> {
    let tw = match tw_path {
        Some(p) => load_tw(p, n)?,
        None => TwistData::symbolic(n),
    };
    let rep = eval_rep_for(n, h)?;
    let (mode, seed) = resolve_mode(n, args)?;
    let reports = vec![
        check_extended_relations(&rep, &tw)?,
        check_coloured_qybe(&rep, &tw, &mode)?,
    ];
    let report = CheckReport::combine("verify-coloured-qybe", reports);
    let mut inputs: BTreeMap<String, Value> = [
        ("n".to_string(), json!(n)),
        ("h".to_string(), json!(h)),
    ]
    .into();
    if let Some(p) = tw_path {
        inputs.insert("tw".to_string(), path_value(p));
    }
    finish("verify-coloured-qybe", inputs, seed, report, args.out.as_deref())
}

fn permutation(
    n: usize,
    m: usize,
    phi_path: Option<&Path>,
    out: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let rep = match phi_path {
        None => AnyonRep::ones(n, m)?,
        Some(path) => {
            let triples: Vec<(usize, usize, String)> = serde_json::from_value(read_json(path)?)
                .with_context(|| format!("parsing deformation table {}", path.display()))?;
            let mut entries = BTreeMap::new();
            for (a, b, text) in &triples {
                let expr = parse_expr(text)
                    .with_context(|| format!("parsing table entry ({a}, {b})"))?;
                if entries.insert((*a, *b), expr).is_some() {
                    bail!("duplicate table entry ({a}, {b}) in {}", path.display());
                }
            }
            AnyonRep::new(n, m, entries)?
        }
    };
    let report = check_symmetric_group(&rep)?;
    let mut inputs: BTreeMap<String, Value> = [
        ("N".to_string(), json!(n)),
        ("M".to_string(), json!(m)),
    ]
    .into();
    if let Some(p) = phi_path {
        inputs.insert("phi".to_string(), path_value(p));
    }
    finish("check-permutation", inputs, resolve_seed(None)?, report, out)
}
