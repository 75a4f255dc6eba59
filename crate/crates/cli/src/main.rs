//! Command-line orchestration: run the full analysis pipeline or
//! individual stages on a substitution spec file, emitting a JSON report
//! or CSV series.

mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::{
    sigma_row, AnalysisReport, AperiodicityReport, DecompositionReport, HeightReport,
    HullReport, PrimitivityReport, RayReport, StageError, WeightedReport,
};
use subspectra::classifier::{
    assemble_maximal_type, classify_ray, ray_coefficients, weighted_diffraction_verdict,
    DEFAULT_KMAX,
};
use subspectra::hull::compute_hull;
use subspectra::numerics::{
    empirical_autocorrelation, growth_test, periodogram, wiener_average, DEFAULT_GRID_CAP,
    DEFAULT_GRID_FACTOR,
};
use subspectra::sequences::{partial_sums, Generator};
use subspectra::{BiSubstitution, SigmaComputer, Substitution};

const EXIT_PARSE: u8 = 2;
const EXIT_NOT_PRIMITIVE: u8 = 3;
const EXIT_NOT_APERIODIC: u8 = 4;
const EXIT_UNSUPPORTED_HULL: u8 = 5;

/// Env var overriding the periodogram grid memory cap (number of points).
const GRID_CAP_VAR: &str = "SUBSPECTRA_GRID_CAP";

#[derive(Parser)]
#[command(name = "subspectra", version, about = "Exact diffraction-spectrum analysis of constant-length substitutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a spec file and emit a JSON report.
    Analyze {
        spec: PathBuf,
        /// Classification horizon for the ray coefficients.
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact correlation vector Σ̂(k).
    Sigma {
        spec: PathBuf,
        k: u64,
        /// Also check the level-p block identity at this k.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the spectral hull: semi-positivity forms, vertices, rays.
    Hull {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the extreme-ray measures and the weighted diffraction.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the first n terms of a ±1 generator.
    Sequence {
        /// One of: rsl, rs, rsl-recoded, rs-recoded.
        generator: String,
        n: usize,
        /// "plain" (signs on one line) or "csv" (n,value).
        #[arg(long, default_value = "plain")]
        format: String,
        /// Seed letter for the recoded generators (must be
        /// self-starting); defaults to the first self-starting letter.
        #[arg(long)]
        seed_letter: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of inclusive partial sums Σ(N) and Σ(N)/√N over an N range.
    Partials {
        generator: String,
        /// Range "lo..hi" (inclusive); each side accepts the a^b form.
        range: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV periodogram of the first n terms on an oversampled grid.
    Periodogram {
        generator: String,
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_FACTOR)]
        grid_factor: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV growth trace: grid-sup of |S_N(θ)|/√N across an N list.
    Growth {
        generator: String,
        /// Comma-separated N values; each accepts the a^b form.
        #[arg(long, default_value = "4^4,4^5,4^6,4^7,4^8,4^9")]
        n_list: String,
        #[arg(long, default_value_t = DEFAULT_GRID_FACTOR)]
        grid_factor: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV empirical autocorrelation c_N(k) and Wiener averages.
    Autocorrelation {
        generator: String,
        n: usize,
        #[arg(long, default_value_t = 64)]
        kmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Analyze { spec, kmax, out } => cmd_analyze(&spec, kmax, out.as_deref()),
        Command::Sigma { spec, k, p, out } => cmd_sigma(&spec, k, p, out.as_deref()),
        Command::Hull { spec, out } => cmd_hull(&spec, out.as_deref()),
        Command::Classify { spec, kmax, out } => cmd_classify(&spec, kmax, out.as_deref()),
        Command::Sequence {
            generator,
            n,
            format,
            seed_letter,
            out,
        } => cmd_sequence(&generator, n, &format, seed_letter.as_deref(), out.as_deref()),
        Command::Partials {
            generator,
            range,
            out,
        } => cmd_partials(&generator, &range, out.as_deref()),
        Command::Periodogram {
            generator,
            n,
            grid_factor,
            out,
        } => cmd_periodogram(&generator, n, grid_factor, out.as_deref()),
        Command::Growth {
            generator,
            n_list,
            grid_factor,
            out,
        } => cmd_growth(&generator, &n_list, grid_factor, out.as_deref()),
        Command::Autocorrelation {
            generator,
            n,
            kmax,
            out,
        } => cmd_autocorrelation(&generator, n, kmax, out.as_deref()),
    }
}

fn load_spec(path: &std::path::Path) -> Result<Substitution, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Substitution::parse(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&std::path::Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::new(1, format!("{}: {e}", p.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut h = stdout.lock();
            h.write_all(content.as_bytes())
                .and_then(|_| h.flush())
                .map_err(|e| CliError::new(1, e.to_string()))
        }
    }
}

fn emit_json<T: serde::Serialize>(out: Option<&std::path::Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(1, e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn stage_timing(name: &str, start: Instant) {
    eprintln!("stage {name}: {:.3}s", start.elapsed().as_secs_f64());
}

fn cmd_analyze(spec: &std::path::Path, kmax: u64, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let s = load_spec(spec)?;
    let mut report = AnalysisReport::new(&spec.display().to_string(), &s);

    // Each stage appends to the report; on failure the partial report is
    // still emitted before the nonzero exit.
    macro_rules! fail {
        ($code:expr, $stage:expr, $msg:expr) => {{
            report.error = Some(StageError {
                stage: $stage,
                message: $msg,
            });
            emit_json(out, &report)?;
            return Err(CliError::new($code, format!("{}: {}", $stage, report.error.as_ref().unwrap().message)));
        }};
    }

    let t = Instant::now();
    match s.primitivity_witness() {
        Some(p) => {
            report.primitivity = Some(PrimitivityReport {
                primitive: true,
                witness_power: Some(p),
            });
        }
        None => {
            report.primitivity = Some(PrimitivityReport {
                primitive: false,
                witness_power: None,
            });
            fail!(EXIT_NOT_PRIMITIVE, "primitivity", "substitution matrix is not primitive".to_string());
        }
    }
    stage_timing("primitivity", t);

    let t = Instant::now();
    match s.aperiodicity_witness() {
        Ok(w) if w.aperiodic => report.aperiodicity = Some(AperiodicityReport::from(&s, &w)),
        Ok(w) => {
            report.aperiodicity = Some(AperiodicityReport::from(&s, &w));
            fail!(EXIT_NOT_APERIODIC, "aperiodicity", "no letter has two distinct neighbourhoods".to_string());
        }
        Err(e) => fail!(EXIT_NOT_APERIODIC, "aperiodicity", e.to_string()),
    }
    stage_timing("aperiodicity", t);

    let t = Instant::now();
    match s.letter_frequencies() {
        Ok(u) => report.frequencies = Some(report::rats_to_strings(&u)),
        Err(e) => fail!(1, "frequencies", e.to_string()),
    }
    match s.height() {
        Ok(h) => report.height = Some(HeightReport::from(&h)),
        Err(e) => fail!(1, "height", e.to_string()),
    }
    stage_timing("frequencies+height", t);

    let t = Instant::now();
    let bi = BiSubstitution::build(&s);
    let decomposition = match bi.ergodic_decomposition() {
        Ok(d) => {
            report.decomposition = Some(DecompositionReport::from(&s, &d));
            d
        }
        Err(e) => fail!(1, "decomposition", e.to_string()),
    };
    stage_timing("decomposition", t);

    let t = Instant::now();
    let mut sigma = match SigmaComputer::new(&s) {
        Ok(c) => c,
        Err(e) => fail!(1, "correlation", e.to_string()),
    };
    let mut rows = Vec::new();
    for k in 0..=64u64 {
        match sigma.sigma(k) {
            Ok(v) => rows.push(sigma_row(&s, k, &v)),
            Err(e) => fail!(1, "correlation", e.to_string()),
        }
    }
    report.sigma = Some(rows);
    stage_timing("correlation", t);

    let t = Instant::now();
    let hull = match compute_hull(&s, &decomposition) {
        Ok(h) => {
            report.hull = Some(HullReport::from(&h));
            h
        }
        Err(e) => fail!(EXIT_UNSUPPORTED_HULL, "hull", e.to_string()),
    };
    stage_timing("hull", t);

    let t = Instant::now();
    let mut profiles = Vec::new();
    for ray in &hull.extreme.rays {
        let coeffs = match ray_coefficients(&mut sigma, ray, kmax) {
            Ok(c) => c,
            Err(e) => fail!(1, "classification", e.to_string()),
        };
        profiles.push(classify_ray(ray, coeffs, kmax));
    }
    let weighted = if s.weights().is_some() {
        match weighted_diffraction_verdict(&mut sigma, &profiles, kmax) {
            Ok(w) => Some(w),
            Err(e) => fail!(1, "weighted-verdict", e.to_string()),
        }
    } else {
        None
    };
    let spectral = assemble_maximal_type(&s, profiles, report.height.as_ref().unwrap().height, weighted);
    report.rays = Some(spectral.profiles.iter().map(RayReport::from).collect());
    report.pure_point_is_delta_zero = Some(spectral.pure_point_is_delta_zero);
    report.weighted = spectral.weighted.as_ref().map(WeightedReport::from);
    stage_timing("classification", t);

    emit_json(out, &report)
}

fn cmd_sigma(
    spec: &std::path::Path,
    k: u64,
    p: Option<usize>,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let s = load_spec(spec)?;
    let mut sigma = SigmaComputer::new(&s).map_err(|e| CliError::new(1, e.to_string()))?;
    let v = sigma.sigma(k).map_err(|e| CliError::new(1, e.to_string()))?;
    let mut text = format!("k = {k}\n");
    let row = sigma_row(&s, k, &v);
    for e in &row.entries {
        text.push_str(&format!("{} {}\n", e.pair, e.value));
    }
    if let Some(p) = p {
        let ok = sigma
            .verify_theorem_consistency(k, p)
            .map_err(|e| CliError::new(1, e.to_string()))?;
        text.push_str(&format!("consistency(p={p}) {ok}\n"));
        if !ok {
            emit(out, &text)?;
            return Err(CliError::new(1, "block identity failed"));
        }
    }
    emit(out, &text)
}

fn cmd_hull(spec: &std::path::Path, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let s = load_spec(spec)?;
    let d = BiSubstitution::build(&s)
        .ergodic_decomposition()
        .map_err(|e| CliError::new(1, e.to_string()))?;
    let hull = compute_hull(&s, &d)
        .map_err(|e| CliError::new(EXIT_UNSUPPORTED_HULL, e.to_string()))?;
    emit_json(out, &HullReport::from(&hull))
}

fn cmd_classify(
    spec: &std::path::Path,
    kmax: u64,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let s = load_spec(spec)?;
    let d = BiSubstitution::build(&s)
        .ergodic_decomposition()
        .map_err(|e| CliError::new(1, e.to_string()))?;
    let hull = compute_hull(&s, &d)
        .map_err(|e| CliError::new(EXIT_UNSUPPORTED_HULL, e.to_string()))?;
    let mut sigma = SigmaComputer::new(&s).map_err(|e| CliError::new(1, e.to_string()))?;
    let mut profiles = Vec::new();
    for ray in &hull.extreme.rays {
        let coeffs = ray_coefficients(&mut sigma, ray, kmax)
            .map_err(|e| CliError::new(1, e.to_string()))?;
        profiles.push(classify_ray(ray, coeffs, kmax));
    }
    let weighted = if s.weights().is_some() {
        Some(
            weighted_diffraction_verdict(&mut sigma, &profiles, kmax)
                .map_err(|e| CliError::new(1, e.to_string()))?,
        )
    } else {
        None
    };
    let height = s.height().map_err(|e| CliError::new(1, e.to_string()))?;
    let spectral = assemble_maximal_type(&s, profiles, height.height, weighted);

    #[derive(serde::Serialize)]
    struct ClassifyOut {
        q: usize,
        height: u64,
        pure_point_is_delta_zero: bool,
        rays: Vec<RayReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        weighted: Option<WeightedReport>,
    }
    emit_json(
        out,
        &ClassifyOut {
            q: spectral.q,
            height: spectral.height,
            pure_point_is_delta_zero: spectral.pure_point_is_delta_zero,
            rays: spectral.profiles.iter().map(RayReport::from).collect(),
            weighted: spectral.weighted.as_ref().map(WeightedReport::from),
        },
    )
}

fn parse_generator(name: &str) -> Result<Generator, CliError> {
    Generator::parse(name).ok_or_else(|| {
        CliError::new(
            EXIT_PARSE,
            format!("unknown generator {name:?}; expected rsl, rs, rsl-recoded or rs-recoded"),
        )
    })
}

/// Parse "12345" or "4^9".
fn parse_count(text: &str) -> Result<u64, CliError> {
    let bad = || CliError::new(EXIT_PARSE, format!("invalid count {text:?}"));
    if let Some((base, exp)) = text.split_once('^') {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_pow(e).ok_or_else(bad)
    } else {
        text.parse().map_err(|_| bad())
    }
}

fn cmd_sequence(
    generator: &str,
    n: usize,
    format: &str,
    seed_letter: Option<&str>,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let gen = parse_generator(generator)?;
    let values = match (seed_letter, gen) {
        (None, _) => gen.values(n),
        (Some(label), Generator::RslRecoded | Generator::RsRecoded) => {
            let s = if gen == Generator::RslRecoded {
                subspectra::fixtures::rsl_substitution()
            } else {
                subspectra::fixtures::rs_substitution()
            };
            let seed = s
                .letter_index(label)
                .ok_or_else(|| CliError::new(EXIT_PARSE, format!("unknown letter {label:?}")))?;
            let prefix = s
                .fixed_point_prefix(seed, n)
                .map_err(|e| CliError::new(1, e.to_string()))?;
            subspectra::sequences::recode(&prefix)
        }
        (Some(_), _) => {
            return Err(CliError::new(
                EXIT_PARSE,
                "--seed-letter only applies to the recoded generators",
            ))
        }
    };
    let text = match format {
        "plain" => {
            let mut line = values
                .iter()
                .map(|&v| if v > 0 { "+1" } else { "-1" })
                .collect::<Vec<_>>()
                .join(" ");
            line.push('\n');
            line
        }
        "csv" => {
            let mut t = String::from("n,value\n");
            for (i, &v) in values.iter().enumerate() {
                t.push_str(&format!("{i},{v}\n"));
            }
            t
        }
        other => return Err(CliError::new(EXIT_PARSE, format!("unknown format {other:?}"))),
    };
    emit(out, &text)
}

fn cmd_partials(
    generator: &str,
    range: &str,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let gen = parse_generator(generator)?;
    let (lo_text, hi_text) = range
        .split_once("..")
        .ok_or_else(|| CliError::new(EXIT_PARSE, format!("invalid range {range:?}; expected lo..hi")))?;
    let lo = parse_count(lo_text)?;
    let hi = parse_count(hi_text)?;
    if lo > hi {
        return Err(CliError::new(EXIT_PARSE, format!("empty range {range:?}")));
    }
    let ns: Vec<u64> = (lo..=hi).collect();
    let points = partial_sums(gen, &ns);
    let mut text = String::from("n,sum,ratio,log4_n\n");
    for p in &points {
        text.push_str(&format!(
            "{},{},{},{}\n",
            p.n,
            p.sum,
            report::round_sig(p.ratio),
            report::round_sig(p.log4_n)
        ));
    }
    emit(out, &text)
}

fn grid_cap() -> usize {
    std::env::var(GRID_CAP_VAR)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_GRID_CAP)
}

fn cmd_periodogram(
    generator: &str,
    n: usize,
    grid_factor: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let gen = parse_generator(generator)?;
    if n == 0 || grid_factor == 0 {
        return Err(CliError::new(EXIT_PARSE, "n and --grid-factor must be positive"));
    }
    let values = gen.values(n);
    let p = periodogram(&values, n * grid_factor, grid_cap())
        .map_err(|e| CliError::new(1, e.to_string()))?;
    let mut text = String::from("theta,value\n");
    for (j, v) in p.values.iter().enumerate() {
        text.push_str(&format!(
            "{},{}\n",
            report::round_sig(j as f64 / p.grid as f64),
            report::round_sig(*v)
        ));
    }
    emit(out, &text)
}

fn cmd_growth(
    generator: &str,
    n_list: &str,
    grid_factor: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let gen = parse_generator(generator)?;
    let ns: Vec<u64> = n_list
        .split(',')
        .map(|t| parse_count(t.trim()))
        .collect::<Result<_, _>>()?;
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::new(EXIT_PARSE, "--n-list must be strictly increasing"));
    }
    let max_n = *ns.last().unwrap() as usize;
    let values = gen.values(max_n);
    let trace = growth_test(&values, &ns, grid_factor);
    let mut text = String::from("n,sup,ratio\n");
    for p in &trace {
        text.push_str(&format!(
            "{},{},{}\n",
            p.n,
            report::round_sig(p.sup),
            report::round_sig(p.ratio)
        ));
    }
    emit(out, &text)
}

fn cmd_autocorrelation(
    generator: &str,
    n: usize,
    kmax: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let gen = parse_generator(generator)?;
    if n == 0 {
        return Err(CliError::new(EXIT_PARSE, "n must be positive"));
    }
    let values = gen.values(n + kmax);
    let coeffs = empirical_autocorrelation(&values, n, kmax);
    let mut text = String::from("k,value\n");
    for (k, c) in coeffs.iter().enumerate() {
        text.push_str(&format!("{k},{}\n", report::round_sig(*c)));
    }
    let k_list: Vec<usize> = (1..=kmax).filter(|k| k.is_power_of_two()).collect();
    if !k_list.is_empty() {
        text.push_str("K,wiener\n");
        for (big_k, w) in k_list.iter().zip(wiener_average(&coeffs, &k_list)) {
            text.push_str(&format!("{big_k},{}\n", report::round_sig(w)));
        }
    }
    emit(out, &text)
}
