//! Command-line front end for the `eef` library.
//!
//! Every subcommand prints one JSON document (or an aligned table with
//! `--pretty`). Exit status: 0 on success, 1 on a mathematical failure,
//! 2 on a usage or input error. Face and basis indices are 1-based on the
//! command line; face 0 is the whole state space.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use eef::border::{
    exposed_sets_from_basis, face_indicator_expansions, limit_path, membership_with_faces, ExposedSet, GibbsPath,
    VerdictKind,
};
use eef::exactmath::rank;
use eef::family::{Density, ThetaParam};
use eef::hilbert::{brute_force_basis, hilbert_basis, redundant_elements, HilbertBasisSet};
use eef::io::{format_model, format_rational, parse_density, parse_model, DensityValues};
use eef::model::{confounding_space, ensure_constant_row, kernel_basis, ModelMatrix};
use eef::models::{four_cycle, markov_chain};

#[derive(Debug, Parser)]
#[command(
    name = "eef",
    version,
    about = "Extended exponential families on finite state spaces"
)]
pub struct Cli {
    /// Print aligned tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice kernel, rank and confounding space of a model.
    Kernel { model: PathBuf },
    /// Hilbert basis of the monoid orthogonal to the kernel.
    Hilbert {
        model: PathBuf,
        /// Cross-check against box enumeration up to this entry bound.
        #[arg(long)]
        oracle: Option<u32>,
    },
    /// Exposed sets of the basis elements and the expansions of `1 - b_j`.
    Faces { model: PathBuf },
    /// Decide whether a density lies in the closure of the family.
    Check {
        model: PathBuf,
        density: PathBuf,
        /// Exit with status 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Follow a Gibbs path towards a face and report its limit.
    Limit {
        model: PathBuf,
        /// Base parameter, one value per model row (default all zero).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<f64>>,
        /// Basis index of the face, 0 for the whole state space.
        #[arg(long)]
        face: usize,
        /// Convergence and clipping tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print a built-in model file.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Number of transitions (markov only).
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Interior,
    Border,
    Outside,
    /// Interior or border.
    Closure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    FourCycle,
    Markov,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: eef::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Math(eef::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}

impl From<eef::Error> for CliError {
    fn from(e: eef::Error) -> Self {
        use eef::Error::*;
        match e {
            Parse { .. }
            | DimensionMismatch { .. }
            | InvalidStateSpace(_)
            | InvalidModel(_)
            | InvalidParameter(_)
            | InvalidDensity(_)
            | NotNormalized { .. }
            | InvalidBound
            | InvalidSchedule(_)
            | StateOutOfRange(_)
            | EmptySubset
            | NotExact => CliError::Usage(e.to_string()),
            _ => CliError::Math(e),
        }
    }
}

/// Rendered output and whether the command met its own success condition.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub success: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, success: true }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Kernel { model } => cmd_kernel(&read_model(model)?, cli.pretty).map(Report::ok),
        Command::Hilbert { model, oracle } => cmd_hilbert(&read_model(model)?, *oracle, cli.pretty),
        Command::Faces { model } => cmd_faces(&read_model(model)?, cli.pretty).map(Report::ok),
        Command::Check { model, density, expect } => {
            let m = read_model(model)?;
            let q = read_density(density, &m)?;
            cmd_check(&m, &q, *expect, cli.pretty)
        }
        Command::Limit {
            model,
            theta,
            face,
            tol,
        } => cmd_limit(&read_model(model)?, theta.as_deref(), *face, *tol, cli.pretty).map(Report::ok),
        Command::Example { name, steps } => cmd_example(*name, *steps).map(Report::ok),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_model(path: &Path) -> Result<ModelMatrix, CliError> {
    parse_model(&read_text(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a density file for `model`; exact when every entry is rational.
pub fn read_density(path: &Path, model: &ModelMatrix) -> Result<Density, CliError> {
    let input = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let states = model.states().clone();
    match parse_density(&read_text(path)?).map_err(input)? {
        DensityValues::Exact(v) => Density::exact(states, v),
        DensityValues::Float(v) => Density::float(states, v),
    }
    .map_err(input)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn integers(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Right-aligned columns; the first column is left-aligned.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain(std::iter::once(header[c].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                let pad = widths[c] - cell.chars().count();
                if c == 0 {
                    format!("{cell}{}", " ".repeat(pad))
                } else {
                    format!("{}{cell}", " ".repeat(pad))
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|j| format!("{prefix}{j}")).collect()
}

fn labels_of(model: &ModelMatrix, states: &[usize]) -> Vec<String> {
    states.iter().map(|&x| model.states().labels()[x].clone()).collect()
}

#[derive(Serialize)]
struct KernelReport {
    n: usize,
    rank: usize,
    kernel: Vec<Vec<String>>,
    confounding: Vec<Vec<String>>,
}

pub fn cmd_kernel(model: &ModelMatrix, pretty: bool) -> Result<String, CliError> {
    let kernel = kernel_basis(model);
    let columns = kernel.columns();
    let confounding = confounding_space(model);
    let report = KernelReport {
        n: model.num_states(),
        rank: rank(&model.weighted_with_constant()),
        kernel: columns.iter().map(|c| integers(c)).collect(),
        confounding: confounding.iter().map(|c| rationals(&c.0)).collect(),
    };
    if !pretty {
        return Ok(to_json(&report));
    }
    let mut out = format!("n {}  rank {}\n\n", report.n, report.rank);
    let mut header = vec!["state".to_string()];
    header.extend(numbered("w", columns.len()));
    let rows: Vec<Vec<String>> = (0..model.num_states())
        .map(|x| {
            let mut r = vec![model.states().labels()[x].clone()];
            r.extend(report.kernel.iter().map(|c| c[x].clone()));
            r
        })
        .collect();
    out.push_str(&table(&header, &rows));
    out.push_str("\nconfounding\n");
    let mut header = vec![String::new()];
    header.extend(model.row_names().iter().cloned());
    let rows: Vec<Vec<String>> = report
        .confounding
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = vec![format!("c{}", i + 1)];
            r.extend(c.iter().cloned());
            r
        })
        .collect();
    out.push_str(&table(&header, &rows));
    Ok(out)
}

#[derive(Serialize)]
struct OracleReport {
    bound: u32,
    size: usize,
    agrees: bool,
}

#[derive(Serialize)]
struct HilbertReport {
    n: usize,
    size: usize,
    vectors: Vec<Vec<i64>>,
    redundant: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn basis_of(model: &ModelMatrix) -> Result<HilbertBasisSet, CliError> {
    Ok(hilbert_basis(&kernel_basis(model))?)
}

pub fn cmd_hilbert(model: &ModelMatrix, oracle: Option<u32>, pretty: bool) -> Result<Report, CliError> {
    let basis = basis_of(model)?;
    let oracle = match oracle {
        Some(bound) => {
            let enumerated = brute_force_basis(basis.kernel(), bound)?;
            Some(OracleReport {
                bound,
                size: enumerated.len(),
                agrees: enumerated.vectors() == basis.vectors(),
            })
        }
        None => None,
    };
    let success = oracle.as_ref().is_none_or(|o| o.agrees);
    let report = HilbertReport {
        n: basis.num_states(),
        size: basis.len(),
        vectors: basis.vectors().to_vec(),
        redundant: redundant_elements(&basis).into_iter().map(|j| j + 1).collect(),
        oracle,
    };
    if !pretty {
        return Ok(Report {
            text: to_json(&report),
            success,
        });
    }
    let mut header = vec!["state".to_string()];
    header.extend(numbered("b", basis.len()));
    let rows: Vec<Vec<String>> = (0..model.num_states())
        .map(|x| {
            let mut r = vec![model.states().labels()[x].clone()];
            r.extend(basis.vectors().iter().map(|b| b[x].to_string()));
            r
        })
        .collect();
    let mut out = table(&header, &rows);
    let redundant: Vec<String> = report.redundant.iter().map(|j| format!("b{j}")).collect();
    let _ = writeln!(
        out,
        "\nredundant: {}",
        if redundant.is_empty() {
            "none".into()
        } else {
            redundant.join(" ")
        }
    );
    if let Some(o) = &report.oracle {
        let _ = writeln!(
            out,
            "oracle (bound {}): {} vectors, {}",
            o.bound,
            o.size,
            if o.agrees { "agrees" } else { "DISAGREES" }
        );
    }
    Ok(Report { text: out, success })
}

#[derive(Serialize)]
struct FaceReport {
    index: usize,
    states: Vec<String>,
    certificate: Vec<String>,
}

#[derive(Serialize)]
struct ExpansionReport {
    index: usize,
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct FacesReport {
    rows: Vec<String>,
    faces: Vec<FaceReport>,
    expansions: Vec<ExpansionReport>,
}

pub fn cmd_faces(model: &ModelMatrix, pretty: bool) -> Result<String, CliError> {
    let basis = basis_of(model)?;
    let faces = exposed_sets_from_basis(&basis, model)?;
    let expansions = face_indicator_expansions(&basis, model)?;
    let report = FacesReport {
        rows: ensure_constant_row(model).row_names().to_vec(),
        faces: faces
            .iter()
            .map(|f| FaceReport {
                index: f.generators[0] + 1,
                states: labels_of(model, &f.states),
                certificate: integers(&f.certificate),
            })
            .collect(),
        expansions: expansions
            .iter()
            .enumerate()
            .map(|(j, e)| ExpansionReport {
                index: j + 1,
                coefficients: rationals(&e.0),
            })
            .collect(),
    };
    if !pretty {
        return Ok(to_json(&report));
    }
    let mut header = vec!["row".to_string()];
    header.extend(numbered("F", expansions.len()));
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .enumerate()
        .map(|(r, name)| {
            let mut row = vec![name.clone()];
            row.extend(report.expansions.iter().map(|e| e.coefficients[r].clone()));
            row
        })
        .collect();
    let mut out = table(&header, &rows);
    out.push('\n');
    for f in &report.faces {
        let _ = writeln!(out, "S{}: {}", f.index, f.states.join(" "));
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerdictFace {
    generators: Vec<usize>,
    states: Vec<String>,
    certificate: Vec<String>,
}

#[derive(Serialize)]
struct CheckReport {
    verdict: &'static str,
    exact: bool,
    face: Option<VerdictFace>,
    theta: Option<Vec<f64>>,
}

fn expectation_met(expect: Expectation, kind: VerdictKind) -> bool {
    match expect {
        Expectation::Interior => kind == VerdictKind::Interior,
        Expectation::Border => kind == VerdictKind::Border,
        Expectation::Outside => kind == VerdictKind::Outside,
        Expectation::Closure => kind != VerdictKind::Outside,
    }
}

pub fn cmd_check(
    model: &ModelMatrix,
    q: &Density,
    expect: Option<Expectation>,
    pretty: bool,
) -> Result<Report, CliError> {
    let basis = basis_of(model)?;
    let faces = exposed_sets_from_basis(&basis, model)?;
    let verdict = membership_with_faces(q, model, &faces)?;
    let face = verdict.face.as_ref().map(|f: &ExposedSet| VerdictFace {
        generators: f.generators.iter().map(|j| j + 1).collect(),
        states: labels_of(model, &f.states),
        certificate: integers(&f.certificate),
    });
    let report = CheckReport {
        verdict: verdict.kind.as_str(),
        exact: q.is_exact(),
        face,
        theta: verdict.theta.map(|t| t.0),
    };
    let success = expect.is_none_or(|e| expectation_met(e, verdict.kind));
    if !pretty {
        return Ok(Report {
            text: to_json(&report),
            success,
        });
    }
    let mut out = format!("verdict: {}\n", report.verdict);
    if let Some(f) = &report.face {
        let gens: Vec<String> = f.generators.iter().map(|j| format!("S{j}")).collect();
        let _ = writeln!(out, "face: {}", f.states.join(" "));
        let _ = writeln!(
            out,
            "generators: {}",
            if gens.is_empty() { "none".into() } else { gens.join(" ") }
        );
        let _ = writeln!(out, "certificate: {}", f.certificate.join(" "));
    }
    if let Some(theta) = &report.theta {
        let rows: Vec<Vec<String>> = model
            .row_names()
            .iter()
            .zip(theta)
            .map(|(n, t)| vec![n.clone(), format!("{t:.12}")])
            .collect();
        out.push('\n');
        out.push_str(&table(&["row".into(), "theta".into()], &rows));
    }
    Ok(Report { text: out, success })
}

#[derive(Serialize)]
struct LimitReport {
    face: usize,
    states: Vec<String>,
    density: Vec<f64>,
    beta: f64,
    gap: f64,
}

pub fn cmd_limit(
    model: &ModelMatrix,
    theta: Option<&[f64]>,
    face: usize,
    tol: f64,
    pretty: bool,
) -> Result<String, CliError> {
    let theta = ThetaParam(theta.map_or_else(|| vec![0.0; model.num_rows()], <[f64]>::to_vec));
    let basis = basis_of(model)?;
    let target = if face == 0 {
        ExposedSet::improper(model)
    } else {
        if face > basis.len() {
            return Err(CliError::Usage(format!(
                "face {face} out of range: the basis has {} elements",
                basis.len()
            )));
        }
        exposed_sets_from_basis(&basis, model)?
            .into_iter()
            .find(|f| f.generators == [face - 1])
            .ok_or_else(|| CliError::Usage(format!("basis element {face} has an empty zero set")))?
    };
    let path = GibbsPath::with_default_schedule(theta, target.certificate.clone())?;
    let outcome = limit_path(model, &path, tol)?;
    let report = LimitReport {
        face,
        states: labels_of(model, &target.states),
        density: outcome.density.to_f64(),
        beta: outcome.beta,
        gap: outcome.gap,
    };
    if !pretty {
        return Ok(to_json(&report));
    }
    let rows: Vec<Vec<String>> = model
        .states()
        .labels()
        .iter()
        .zip(&report.density)
        .map(|(l, p)| vec![l.clone(), format!("{p:.12}")])
        .collect();
    let mut out = table(&["state".into(), "p".into()], &rows);
    let _ = writeln!(
        out,
        "\nface {}  beta {}  gap {:e}",
        report.face, report.beta, report.gap
    );
    Ok(out)
}

pub fn cmd_example(name: ExampleName, steps: Option<usize>) -> Result<String, CliError> {
    let model = match (name, steps) {
        (ExampleName::FourCycle, None) => four_cycle(),
        (ExampleName::FourCycle, Some(_)) => {
            return Err(CliError::Usage("--steps only applies to the markov example".into()))
        }
        (ExampleName::Markov, None) => return Err(CliError::Usage("the markov example needs --steps".into())),
        (ExampleName::Markov, Some(n)) => markov_chain(n)?,
    };
    Ok(format_model(&model))
}
