//! `seqlab` — generate, analyze, and verify period-p sequence families.
//!
//! Exit codes: 0 when every requested check passes, 1 when a verified bound
//! violation exists, 2 on usage or validation errors. All randomness flows
//! from the explicit `--seed` flag, and identical invocations produce
//! byte-identical output.

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use seqlab_core::analysis::{
    ambiguity_surface, compare_families, default_check_modes, verify_family_with, CheckMode,
    CompareOptions, PairMode, VerifySpec,
};
use seqlab_core::families::{
    alltop_cubic_sequence, chu_sequence, family_iter, family_member_by_index, family_size,
    heisenberg_sequence, omega_sequence_xyz, split_oscillator_sequence, FamilyDescriptor,
    FamilyKind,
};
use seqlab_core::field::PrimeField;
use seqlab_core::seq::{fourier, phase_shift, Sequence};
use seqlab_core::weil::{
    homomorphism_suite, intertwining_suite, verify_cosets, verify_theorem2, verify_torus_basis,
};

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    FamilyKind::from_str(s)
}

#[derive(Parser)]
#[command(
    name = "seqlab",
    version,
    about = "Period-p sequence families over prime fields: generation, ambiguity analysis, and bound verification"
)]
struct Cli {
    /// Worker threads for verification sweeps (default: SEQLAB_THREADS or all cores).
    #[arg(long, global = true, env = "SEQLAB_THREADS")]
    threads: Option<usize>,
    /// Print timing diagnostics to stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family (or one member) as JSON lines.
    Generate(GenerateArgs),
    /// Verify ambiguity/spectrum bounds for a family, or the split-system equivalence.
    Verify(VerifyArgs),
    /// Export the p x p ambiguity surface of a sequence pair as CSV.
    Ambiguity(AmbiguityArgs),
    /// Fourier spectrum of one member (CSV) or spectrum maxima of a family (JSON).
    Spectrum(SpectrumArgs),
    /// Side-by-side measured maxima for the comparison families.
    Compare(CompareArgs),
    /// Structural checks on the representation pipeline.
    WeilCheck(WeilCheckArgs),
}

#[derive(Args, Clone, Copy, Default)]
struct Selector {
    /// Flat enumeration index into the family.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long)]
    y: Option<u64>,
    #[arg(long)]
    z: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    /// Phase-shift index (extended family members).
    #[arg(long)]
    w: Option<u64>,
}

impl Selector {
    fn is_empty(&self) -> bool {
        self.n.is_none()
            && self.x.is_none()
            && self.y.is_none()
            && self.z.is_none()
            && self.b.is_none()
            && self.w.is_none()
    }

    fn resolve(&self, f: &PrimeField, kind: FamilyKind) -> Result<Sequence> {
        if let Some(n) = self.n {
            return Ok(family_member_by_index(f, kind, n)?);
        }
        let need = |v: Option<u64>, name: &str| {
            v.ok_or_else(|| anyhow!("family '{kind}' needs --n or --{name}"))
        };
        Ok(match kind {
            FamilyKind::Omega => omega_sequence_xyz(
                f,
                need(self.x, "x")?,
                need(self.y, "y")?,
                need(self.z, "z")?,
            )?,
            FamilyKind::SplitOscillator => split_oscillator_sequence(
                f,
                need(self.x, "x")?,
                need(self.y, "y")?,
                need(self.b, "b")?,
            )?,
            FamilyKind::ExtendedSplit => {
                let base = split_oscillator_sequence(
                    f,
                    need(self.x, "x")?,
                    need(self.y, "y")?,
                    need(self.b, "b")?,
                )?;
                phase_shift(&base, need(self.w, "w")?)?
            }
            FamilyKind::Chu => chu_sequence(f, need(self.y, "y")?)?,
            FamilyKind::AlltopCubic => alltop_cubic_sequence(f, need(self.y, "y")?)?,
            FamilyKind::Heisenberg => {
                heisenberg_sequence(f, need(self.y, "y")?, need(self.z, "z")?)?
            }
        })
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    p: u64,
    /// Override the multiplicative generator (default: smallest primitive root).
    #[arg(long)]
    generator: Option<u64>,
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    #[command(flatten)]
    selector: Selector,
    /// Output format (json lines).
    #[arg(long, default_value = "jsonl")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    generator: Option<u64>,
    #[arg(long, value_parser = parse_family, required_unless_present = "theorem2", conflicts_with = "theorem2")]
    family: Option<FamilyKind>,
    /// Check that the operator-built split system equals its closed form.
    #[arg(long)]
    theorem2: bool,
    /// Comma list of checks: auto, cross, ambiguity (= auto+cross), ft, classes, all.
    #[arg(long, default_value = "ambiguity,ft")]
    checks: String,
    /// Bound for the auto-ambiguity check; a number or e.g. "2sqrtp", "2sqrtp/p-1".
    #[arg(long)]
    auto_bound: Option<String>,
    /// Bound for the cross-ambiguity check.
    #[arg(long)]
    cross_bound: Option<String>,
    /// Bound for the spectrum check.
    #[arg(long)]
    ft_bound: Option<String>,
    /// Cross-pair coverage: exhaustive or sampled (default: exhaustive for
    /// small families, sampled above 50000 pairs).
    #[arg(long, value_enum)]
    pairs: Option<PairChoice>,
    /// Sampled pair count.
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    /// Seed for sampled coverage (required when sampling).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum PairChoice {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct AmbiguityArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    generator: Option<u64>,
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    #[command(flatten)]
    selector: Selector,
    /// Second member's family (defaults to the first member itself).
    #[arg(long, value_parser = parse_family)]
    family2: Option<FamilyKind>,
    /// Second member's modulus; must equal --p.
    #[arg(long)]
    p2: Option<u64>,
    #[arg(long)]
    n2: Option<u64>,
    #[arg(long)]
    x2: Option<u64>,
    #[arg(long)]
    y2: Option<u64>,
    #[arg(long)]
    z2: Option<u64>,
    #[arg(long)]
    b2: Option<u64>,
    #[arg(long)]
    w2: Option<u64>,
    /// Use the defining-sum path instead of the transform path.
    #[arg(long)]
    naive: bool,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    generator: Option<u64>,
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    #[command(flatten)]
    selector: Selector,
    /// Spectrum bound to check family-wide (number or symbolic form).
    #[arg(long)]
    ft_bound: Option<String>,
    /// csv for a single member's spectrum, json for the family report.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    generator: Option<u64>,
    /// Enumerate cross pairs exhaustively up to this many; sample beyond it.
    #[arg(long, default_value_t = 50_000)]
    pair_limit: u64,
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    /// Seed for sampled coverage (required only when a family trips the limit).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeilCheckArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    generator: Option<u64>,
    #[arg(long, value_enum)]
    check: WeilCheckKind,
    /// Random (g, h) or (g1, g2) draws for the sampled checks.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Probe sequences per draw.
    #[arg(long, default_value_t = 2)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum WeilCheckKind {
    Theorem2,
    Intertwining,
    Homomorphism,
    Torus,
    Cosets,
}

/// Accepts a plain number or a symbolic form: `[coef]sqrtp[/p-1|/p+1|/p]`,
/// e.g. "2sqrtp", "4sqrtp/p-1", "sqrtp", "2".
fn parse_bound(text: &str, p: u64) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (head, denom) = match t.split_once('/') {
        Some((h, d)) => (h, Some(d.trim().trim_matches(|c| c == '(' || c == ')'))),
        None => (t.as_str(), None),
    };
    let coef_str = head
        .strip_suffix("sqrtp")
        .ok_or_else(|| anyhow!("unrecognized bound '{text}'"))?;
    let coef: f64 = if coef_str.is_empty() {
        1.0
    } else {
        coef_str
            .parse()
            .with_context(|| format!("bad coefficient in bound '{text}'"))?
    };
    let mut value = coef * (p as f64).sqrt();
    if let Some(d) = denom {
        value /= match d {
            "p-1" => (p - 1) as f64,
            "p+1" => (p + 1) as f64,
            "p" => p as f64,
            other => bail!("unrecognized bound denominator '{other}'"),
        };
    }
    Ok(value)
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    let mut w = writer(out)?;
    w.write_all(content.as_bytes())?;
    if !content.ends_with('\n') {
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn require_format(given: &str, allowed: &[&str]) -> Result<()> {
    if !allowed.contains(&given) {
        bail!(
            "unsupported format '{given}' (expected one of: {})",
            allowed.join(", ")
        );
    }
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    require_format(&args.format, &["jsonl", "json"])?;
    let f = PrimeField::new(args.p, args.generator)?;
    let mut w = writer(&args.out)?;
    if args.selector.is_empty() {
        let desc = FamilyDescriptor::new(&f, args.family)?;
        serde_json::to_writer(&mut w, &desc)?;
        w.write_all(b"\n")?;
        for s in family_iter(&f, args.family)? {
            serde_json::to_writer(&mut w, &s.to_json())?;
            w.write_all(b"\n")?;
        }
    } else {
        let s = args.selector.resolve(&f, args.family)?;
        serde_json::to_writer(&mut w, &s.to_json())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs, verbose: u8) -> Result<ExitCode> {
    require_format(&args.format, &["json"])?;
    let f = PrimeField::new(args.p, args.generator)?;
    if args.theorem2 {
        let report = verify_theorem2(&f)?;
        emit(&args.out, &pretty(&report)?)?;
        return Ok(exit_for(report.pass));
    }
    let kind = args.family.expect("clap enforces family unless --theorem2");

    let tokens: HashSet<&str> = args.checks.split(',').map(str::trim).collect();
    let has = |t: &str| tokens.contains(t) || tokens.contains("all");
    let run_auto = has("auto") || has("ambiguity") || args.auto_bound.is_some();
    let run_cross = has("cross") || has("ambiguity") || args.cross_bound.is_some();
    let run_ft = has("ft") || args.ft_bound.is_some();
    let run_classes = has("classes");

    let (default_auto, default_cross, default_ft) = default_check_modes(kind, args.p);
    let mode_for =
        |run: bool, explicit: &Option<String>, default: CheckMode| -> Result<CheckMode> {
            if !run {
                return Ok(CheckMode::Skip);
            }
            Ok(match explicit {
                Some(text) => CheckMode::Bound(parse_bound(text, args.p)?),
                None => default,
            })
        };

    let members = family_size(kind, args.p);
    let all_pairs = members.saturating_mul(members.saturating_sub(1)) / 2;
    let sampled = match args.pairs {
        Some(PairChoice::Exhaustive) => false,
        Some(PairChoice::Sampled) => true,
        None => all_pairs > 50_000,
    };
    let pair_mode = if sampled {
        PairMode::Sampled {
            seed: args.seed.ok_or_else(|| {
                anyhow!(
                    "--seed is required when cross pairs are sampled (family has ~{all_pairs} pairs)"
                )
            })?,
            count: args.samples,
        }
    } else {
        PairMode::Exhaustive
    };

    let spec = VerifySpec {
        auto: mode_for(run_auto, &args.auto_bound, default_auto)?,
        cross: mode_for(run_cross, &args.cross_bound, default_cross)?,
        ft: mode_for(run_ft, &args.ft_bound, default_ft)?,
        count_time_shift_classes: run_classes,
        pair_mode,
    };
    let report = verify_family_with(&f, kind, &spec)?;
    if verbose > 0 {
        eprintln!("verify: {} ms", report.wall_time_ms);
    }
    emit(&args.out, &pretty(&report)?)?;
    Ok(exit_for(report.pass))
}

fn cmd_ambiguity(args: &AmbiguityArgs) -> Result<ExitCode> {
    require_format(&args.format, &["csv"])?;
    if let Some(p2) = args.p2 {
        if p2 != args.p {
            bail!("selector periods differ: --p {} vs --p2 {p2}", args.p);
        }
    }
    let f = PrimeField::new(args.p, args.generator)?;
    let phi = args.selector.resolve(&f, args.family)?;
    let psi = match args.family2 {
        None => phi.clone(),
        Some(kind2) => Selector {
            n: args.n2,
            x: args.x2,
            y: args.y2,
            z: args.z2,
            b: args.b2,
            w: args.w2,
        }
        .resolve(&f, kind2)?,
    };
    let surface = ambiguity_surface(&phi, &psi, !args.naive)?;
    emit(&args.out, &surface.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<ExitCode> {
    let f = PrimeField::new(args.p, args.generator)?;
    if !args.selector.is_empty() {
        let format = args.format.as_deref().unwrap_or("csv");
        require_format(format, &["csv"])?;
        let s = args.selector.resolve(&f, args.family)?;
        let spectrum = fourier(&s);
        let mut out = String::from("i,re,im,abs\n");
        for (i, v) in spectrum.values().iter().enumerate() {
            out.push_str(&format!(
                "{i},{:.16e},{:.16e},{:.16e}\n",
                v.re,
                v.im,
                v.norm()
            ));
        }
        emit(&args.out, &out)?;
        return Ok(ExitCode::SUCCESS);
    }
    let format = args.format.as_deref().unwrap_or("json");
    require_format(format, &["json"])?;
    let ft = match &args.ft_bound {
        Some(text) => CheckMode::Bound(parse_bound(text, args.p)?),
        None => CheckMode::Measure,
    };
    let report = verify_family_with(
        &f,
        args.family,
        &VerifySpec {
            auto: CheckMode::Skip,
            cross: CheckMode::Skip,
            ft,
            count_time_shift_classes: false,
            pair_mode: PairMode::Exhaustive,
        },
    )?;
    emit(&args.out, &pretty(&report)?)?;
    Ok(exit_for(report.pass))
}

fn cmd_compare(args: &CompareArgs, verbose: u8) -> Result<ExitCode> {
    require_format(&args.format, &["json", "csv"])?;
    let f = PrimeField::new(args.p, args.generator)?;
    let start = Instant::now();
    let table = compare_families(
        &f,
        &CompareOptions {
            pair_limit: args.pair_limit,
            sample_count: args.samples,
            seed: args.seed,
        },
    )?;
    if verbose > 0 {
        eprintln!("compare: {} ms", start.elapsed().as_millis());
    }
    let rendered = match args.format.as_str() {
        "csv" => table.to_csv(),
        _ => pretty(&table)?,
    };
    emit(&args.out, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_weil_check(args: &WeilCheckArgs) -> Result<ExitCode> {
    require_format(&args.format, &["json"])?;
    let f = PrimeField::new(args.p, args.generator)?;
    let need_seed = || {
        args.seed
            .ok_or_else(|| anyhow!("--seed is required for this check"))
    };
    let report = match args.check {
        WeilCheckKind::Theorem2 => verify_theorem2(&f)?,
        WeilCheckKind::Intertwining => {
            intertwining_suite(&f, args.trials, args.samples, need_seed()?)?
        }
        WeilCheckKind::Homomorphism => {
            homomorphism_suite(&f, args.trials, args.samples, need_seed()?)?
        }
        WeilCheckKind::Torus => verify_torus_basis(&f)?,
        WeilCheckKind::Cosets => verify_cosets(&f)?,
    };
    emit(&args.out, &pretty(&report)?)?;
    Ok(exit_for(report.pass))
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args, cli.verbose),
        Command::Ambiguity(args) => cmd_ambiguity(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Compare(args) => cmd_compare(args, cli.verbose),
        Command::WeilCheck(args) => cmd_weil_check(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
            {
                eprintln!("error: could not configure {threads} worker threads: {e}");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let broken_pipe = e
                .downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
                || e.downcast_ref::<serde_json::Error>()
                    .is_some_and(|je| je.io_error_kind() == Some(io::ErrorKind::BrokenPipe));
            if broken_pipe {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
