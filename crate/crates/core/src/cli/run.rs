//! Subcommand drivers. Each one builds a [`Report`] plus optional extra
//! artifacts, then writes them to `--out` or stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::emit::{m2_text, matrices_text};
use super::input::{
    load_contraction, load_harmonic, parse_contraction_choice, parse_harmonic_choice, parse_matrix, read_input,
    EmitFormat, InputError, InputSpec,
};
use super::random::{check_resolution, run_matrix_suite, run_quadruple_suite};
use super::report::{
    betti_report, class_report, complex_report, contraction_report, grading_report, quadruple_report,
    stratification_report, CheckReport, Report,
};
use super::svg::{circle_k1, svg_k2};
use super::{Cli, Command, Common};
use crate::grading::{build_bm_complexes, find_positive_grading};
use crate::hhl::{build_hhl_complex, verify_complex, HhlComplex};
use crate::hpl::{minimal_resolution_from, MinimalResolution, MinresOptions, Provenance};
use crate::paths::{PathOracle, Step, WeightSource};
use crate::pinv::{mp_inverse, mp_inverse_hedge, DEFAULT_HEDGE_BOUND};
use crate::ratlin::fmt_rational;
use crate::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Pipeline(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(e) => e.exit_code(),
            CliError::Pipeline(e) => e.exit_code(),
            CliError::Usage(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<crate::StratError> for CliError {
    fn from(e: crate::StratError) -> Self {
        CliError::Pipeline(e.into())
    }
}

/// Named text artifacts of one run.
#[derive(Debug, Default)]
struct Artifacts {
    files: Vec<(String, String)>,
}

impl Artifacts {
    fn push(&mut self, name: &str, text: String) {
        self.files.push((name.to_string(), text));
    }

    fn write(&self, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(e.to_string());
        match out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(io)?;
                for (name, text) in &self.files {
                    std::fs::write(dir.join(name), text).map_err(io)?;
                    writeln!(stdout, "wrote {}", dir.join(name).display()).map_err(io)?;
                }
            }
            None => {
                for (_, text) in &self.files {
                    stdout.write_all(text.as_bytes()).map_err(io)?;
                }
            }
        }
        Ok(())
    }
}

/// How far a subcommand runs the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Stratify,
    Hhl,
    Betti,
    Minres,
    Verify,
}

/// Parses arguments, runs, and returns the exit code. Errors go to
/// `stderr` as one line.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Stratify(c) => pipeline(&c, Stage::Stratify, "stratify", stdout),
        Command::Hhl(c) => pipeline(&c, Stage::Hhl, "hhl", stdout),
        Command::Betti(c) => pipeline(&c, Stage::Betti, "betti", stdout),
        Command::Minres(c) => pipeline(&c, Stage::Minres, "minres", stdout),
        Command::Verify { common, seed, count } => {
            if common.input.is_some() {
                pipeline(&common, Stage::Verify, "verify", stdout)
            } else {
                random_suite(seed, count, stdout)
            }
        }
        Command::Svg(c) => figure(&c, stdout),
        Command::Paths { common, from, to } => paths(&common, from.zip(to), stdout),
        Command::Mp { input, hedge } => pseudoinverse(&input, hedge, stdout),
    }
}

fn load(common: &Common) -> Result<InputSpec, CliError> {
    let path = common.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".to_string()))?;
    let mut spec = read_input(path)?;
    let here = Path::new("");
    if let Some(c) = &common.contraction {
        spec.options.contraction = parse_contraction_choice(c, here);
    }
    if let Some(h) = &common.harmonic_basis {
        spec.options.harmonic_basis = parse_harmonic_choice(h, here);
    }
    if let Some(e) = &common.emit {
        spec.options.emit = e.clone();
    }
    Ok(spec)
}

pub fn options(spec: &InputSpec, hhl: &HhlComplex) -> Result<MinresOptions, CliError> {
    Ok(MinresOptions {
        contraction: load_contraction(&spec.options.contraction, hhl)?,
        harmonic: load_harmonic(&spec.options.harmonic_basis, hhl)?,
    })
}

fn check_line(name: &'static str, r: Result<(), Error>) -> (CheckReport, Option<Error>) {
    match r {
        Ok(()) => (CheckReport { name, result: "ok".to_string() }, None),
        Err(e) => (CheckReport { name, result: e.to_string() }, Some(e)),
    }
}

/// The individual checks behind `verify`, in order; the first failure is
/// returned alongside the full list.
fn verify_checks(m: &MinimalResolution) -> (Vec<CheckReport>, Option<Error>) {
    use crate::hpl::{verify_lemma_identities, verify_sdr_perturbed};
    let checks: Vec<(&'static str, Result<(), Error>)> = vec![
        ("d^2 = 0", verify_complex(&m.hhl.complex).map_err(Error::from)),
        ("SDR axioms", m.sdr.check_axioms().map_err(Error::from)),
        ("perturbation identities", verify_lemma_identities(&m.delta, &m.sdr, &m.perturbed).map_err(Error::from)),
        ("perturbed SDR", verify_sdr_perturbed(&m.hhl.complex.differentials, &m.sdr, &m.perturbed).map_err(Error::from)),
        ("all invariants", check_resolution(m)),
    ];
    let mut first = None;
    let mut out = Vec::new();
    for (name, r) in checks {
        let (line, err) = check_line(name, r);
        out.push(line);
        if first.is_none() {
            first = err;
        }
    }
    (out, first)
}

/// Everything a pipeline run produced, including partial results when a
/// later stage failed.
pub struct Analysis {
    pub report: Report,
    pub hhl: HhlComplex,
    pub resolution: Option<MinimalResolution>,
    pub failure: Option<CliError>,
}

/// Runs the pipeline on `spec` up to `stage`. Failures after the HHL
/// complex is built are recorded in the report rather than returned.
pub fn analyze(spec: &InputSpec, stage: Stage, command: &str) -> Result<Analysis, CliError> {
    let q = &spec.quadruple;
    let hhl = build_hhl_complex(q)?;
    let mut report = Report::new(command);
    report.quadruple = Some(quadruple_report(q));
    report.stratification = Some(stratification_report(&hhl));
    report.classes = Some(class_report(&hhl));
    let mut failure: Option<CliError> = None;
    let mut resolution = None;
    if stage >= Stage::Hhl {
        report.hhl = Some(complex_report(&hhl.complex));
        if let Err(e) = verify_complex(&hhl.complex) {
            failure = Some(Error::from(e).into());
        }
    }
    if stage >= Stage::Betti && failure.is_none() {
        match find_positive_grading(&hhl).and_then(|g| build_bm_complexes(&hhl, &g).map(|b| (g, b))) {
            Ok((g, bms)) => {
                report.grading = Some(grading_report(&g));
                report.betti = Some(betti_report(&crate::grading::betti_table(&bms)));
            }
            Err(e) => failure = Some(Error::from(e).into()),
        }
    }
    if stage >= Stage::Minres && failure.is_none() {
        let result = options(spec, &hhl).and_then(|o| Ok(minimal_resolution_from(hhl.clone(), &o)?));
        match result {
            Ok(m) => {
                report.contraction = Some(contraction_report(&m));
                report.minimal_resolution = Some(complex_report(&m.complex));
                if stage >= Stage::Verify {
                    let (checks, err) = verify_checks(&m);
                    report.checks = Some(checks);
                    failure = err.map(CliError::from);
                } else if let Err(e) = m.verify() {
                    failure = Some(e.into());
                }
                resolution = Some(m);
            }
            Err(e) => failure = Some(e),
        }
    }
    if let Some(e) = &failure {
        report.error = Some(e.to_string());
    }
    Ok(Analysis { report, hhl, resolution, failure })
}

fn pipeline(common: &Common, stage: Stage, command: &str, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = load(common)?;
    let Analysis { report, hhl, resolution, failure } = analyze(&spec, stage, command)?;
    let mut artifacts = Artifacts::default();
    for format in &spec.options.emit {
        match format {
            EmitFormat::Report => artifacts.push("report.json", report.to_json()),
            EmitFormat::Matrices => {
                let mut text = String::new();
                if stage >= Stage::Hhl {
                    text.push_str(&matrices_text("hhl", &hhl.complex));
                }
                if let Some(m) = &resolution {
                    text.push_str(&matrices_text("min", &m.complex));
                }
                artifacts.push("matrices.txt", text);
            }
            EmitFormat::M2 => {
                let mut complexes = vec![("hhl", &hhl.complex)];
                if let Some(m) = &resolution {
                    complexes.push(("min", &m.complex));
                }
                artifacts.push("complexes.m2", m2_text(&complexes));
            }
            EmitFormat::Svg => {
                if let Some((name, text)) = figure_artifact(&hhl) {
                    artifacts.push(name, text);
                }
            }
        }
    }
    artifacts.write(common.out.as_deref(), stdout)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(0),
    }
}

fn figure_artifact(hhl: &HhlComplex) -> Option<(&'static str, String)> {
    match hhl.quadruple().k {
        1 => circle_k1(&hhl.strat).map(|t| ("stratification.txt", t)),
        2 => svg_k2(&hhl.strat).map(|t| ("stratification.svg", t)),
        _ => None,
    }
}

fn figure(common: &Common, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = load(common)?;
    let hhl = build_hhl_complex(&spec.quadruple)?;
    let (name, text) = figure_artifact(&hhl)
        .ok_or_else(|| CliError::Usage(format!("no figure for k = {}", spec.quadruple.k)))?;
    let mut artifacts = Artifacts::default();
    artifacts.push(name, text);
    artifacts.write(common.out.as_deref(), stdout)?;
    Ok(0)
}

fn describe_path(hhl: &HhlComplex, steps: &[Step], names: &[String]) -> String {
    let cell = |c: usize| hhl.strat.cell(c).name.clone();
    let mut out = String::new();
    for (idx, s) in steps.iter().enumerate() {
        match s {
            Step::TypeI { sigma, tau, weight } => {
                if idx == 0 {
                    out.push_str(&cell(*sigma));
                }
                out.push_str(&format!(" --[{}]--> {}", weight.to_text(names), cell(*tau)));
            }
            Step::TypeII { sigma, weight, .. } => {
                out.push_str(&format!(" ~~[{}]~~> {}", fmt_rational(weight), cell(*sigma)));
            }
        }
    }
    out
}

fn paths(common: &Common, pair: Option<(String, String)>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = load(common)?;
    let hhl = build_hhl_complex(&spec.quadruple)?;
    let opts = options(&spec, &hhl)?;
    let m = minimal_resolution_from(hhl, &opts)?;
    let source = match m.sdr.provenance {
        Provenance::MoorePenrose => WeightSource::Hedge,
        Provenance::UserSupplied => WeightSource::Homotopy(&m.sdr),
    };
    let oracle = PathOracle::new(&m.hhl, &m.grading, &m.bms, source);
    let names = &m.hhl.complex.variables;
    let strat = &m.hhl.strat;
    let mut text = String::new();
    let pairs: Vec<(usize, usize)> = match pair {
        Some((from, to)) => {
            let find = |n: &str| strat.find(n).ok_or_else(|| CliError::Usage(format!("no cell named `{n}`")));
            let (s, t) = (find(&from)?, find(&to)?);
            if strat.cell(s).dim != strat.cell(t).dim + 1 {
                return Err(CliError::Usage(format!("{from} must have dimension one more than {to}")));
            }
            vec![(s, t)]
        }
        None => {
            let mut v = Vec::new();
            for s in &strat.cells {
                for t in &strat.cells {
                    if s.dim == t.dim + 1 && !oracle.sigma_via_paths(s.id, t.id).is_zero() {
                        v.push((s.id, t.id));
                    }
                }
            }
            v
        }
    };
    for (s, t) in pairs {
        let found = oracle.enumerate_paths(s, t);
        let plural = if found.len() == 1 { "" } else { "s" };
        text.push_str(&format!("{} -> {}: {} path{plural}\n", strat.cell(s).name, strat.cell(t).name, found.len()));
        for p in &found {
            text.push_str(&format!(
                "  {}  (signed weight {})\n",
                describe_path(&m.hhl, &p.steps, names),
                p.signed_weight(names.len()).to_text(names)
            ));
        }
        text.push_str(&format!("  sum: {}\n", oracle.sigma_via_paths(s, t).to_text(names)));
    }
    oracle.crosscheck_sigma(&m.perturbed.sigma).map_err(Error::from)?;
    let mut artifacts = Artifacts::default();
    artifacts.push("paths.txt", text);
    artifacts.write(common.out.as_deref(), stdout)?;
    Ok(0)
}

fn pseudoinverse(input: &PathBuf, hedge: bool, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| InputError::Io { path: input.display().to_string(), message: e.to_string() })?;
    let a = parse_matrix(&text)?;
    let p = if hedge { mp_inverse_hedge(&a, DEFAULT_HEDGE_BOUND).map_err(Error::from)? } else { mp_inverse(&a) };
    let rows: Vec<Vec<String>> = p.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
    let mut out = serde_json::to_string(&rows).expect("matrix serializes");
    out.push('\n');
    stdout.write_all(out.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(0)
}

fn random_suite(seed: u64, count: usize, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let q = run_quadruple_suite(seed, count, 6, 3);
    writeln!(stdout, "quadruples: {} passed, {} without positive grading, {} failed", q.passed, q.skipped, q.failures.len())
        .map_err(io)?;
    for (psi, e) in &q.failures {
        writeln!(stdout, "  psi = {psi:?}: {e}").map_err(io)?;
    }
    let m = run_matrix_suite(seed, count, 6, 3);
    writeln!(stdout, "matrices: {} passed, {} failed", count - m.len(), m.len()).map_err(io)?;
    for (a, e) in &m {
        writeln!(stdout, "  {:?}: {e}", a.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
            .map_err(io)?;
    }
    Ok(if q.failures.is_empty() && m.is_empty() && q.passed >= count { 0 } else { 5 })
}
