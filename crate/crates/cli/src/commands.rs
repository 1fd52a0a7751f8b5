use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use cvqfl_core::encoder::{
    encode, encoding_gate_report, entanglement_entropy, read_encoded, EncodingConfig,
};
use cvqfl_core::gates::{clements_decompose, clements_reconstruct};
use cvqfl_core::io::{read_complex_csv, read_matrix_csv, write_experiment, write_matrix_csv};
use cvqfl_core::numerics::random::{seeded_matrix, seeded_unitary};
use cvqfl_core::numerics::{dft_matrix, fft2_oracle, is_power_of_two, ComplexField, RealMatrix};
use cvqfl_core::qft::{
    apply_qft2d, build_qft2d, qft_gate_report, read_spectrum, redundant_block_deviation,
    split_spectrum,
};
use cvqfl_core::spectral::{run_filter_pipeline, run_heat_pipeline, FilterExperiment, HeatParams};
use cvqfl_core::Error;
use serde::de::DeserializeOwned;

use crate::{Cli, Command, GlobalOpts};

const DEFAULT_SIZE: usize = 8;
const ENCODE_TOL: f64 = 1e-9;
const QFT_TOL: f64 = 1e-9;
const FILTER_TOL: f64 = 1e-12;
const HEAT_TOL: f64 = 1e-12;
const COMPILE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    /// A check on the computed result failed.
    Invariant(String),
    /// The input could not be used.
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invariant(msg) => write!(f, "check failed: {msg}"),
            Failure::Input(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unphysical { .. } | Error::SvdNonConvergence { .. } => {
                Failure::Invariant(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if let Some(tol) = g.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Failure::Input(format!(
                "--tol must be non-negative, got {tol}"
            )));
        }
    }
    match &cli.command {
        Command::Encode { matrix } => cmd_encode(g, matrix.as_deref()),
        Command::Qft { matrix } => cmd_qft(g, matrix.as_deref()),
        Command::Filter { pgm } => cmd_filter(g, *pgm),
        Command::Heat { steps, pgm } => cmd_heat(g, *steps, *pgm),
        Command::Compile { unitary, dft } => cmd_compile(g, unitary.as_deref(), *dft),
        Command::Report => cmd_report(g),
    }
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn encoding_config(g: &GlobalOpts) -> Result<EncodingConfig, Failure> {
    let mut config: EncodingConfig = load_config(g.config.as_deref())?;
    if g.lambda.is_some() {
        config.lambda = g.lambda;
    }
    Ok(config)
}

/// The matrix at `path`, or a seeded random `size × size` matrix.
fn input_matrix(g: &GlobalOpts, path: Option<&Path>) -> Result<RealMatrix, Failure> {
    match path {
        Some(p) => read_matrix_csv(p).map_err(|e| with_path(p, e)),
        None => {
            let n = g.size.unwrap_or(DEFAULT_SIZE);
            if n == 0 {
                return Err(Failure::Input("--size must be positive".into()));
            }
            Ok(seeded_matrix(n, n, g.seed.unwrap_or(0)))
        }
    }
}

fn with_path(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        other => other,
    }
}

fn out_dir(g: &GlobalOpts, name: &str) -> Result<PathBuf, Failure> {
    let dir = g.out.join(name);
    fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn check(label: &str, value: f64, tol: f64) -> Outcome {
    if value <= tol {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "{label} {value:e} exceeds {tol:e}"
        )))
    }
}

fn cmd_encode(g: &GlobalOpts, path: Option<&Path>) -> Outcome {
    let d = input_matrix(g, path)?;
    let enc = encode(&d, encoding_config(g)?)?;
    enc.state.ensure_physical()?;
    let error = read_encoded(&enc)?.max_abs_diff(&d);
    let entropy_sum: f64 = enc.squeezing.iter().map(|&r| entanglement_entropy(r)).sum();
    let gates = encoding_gate_report(d.rows(), d.cols())?;

    println!("matrix: {}x{}", d.rows(), d.cols());
    println!("lambda: {}", enc.lambda);
    println!("squeezing: {:?}", enc.squeezing);
    println!("round-trip error: {error:e}");
    println!("entanglement entropy (sum E(r_k)): {entropy_sum}");
    println!("register entropy: {}", enc.register_entropy()?);
    println!("tms gates: {}", gates.tms);
    println!("bs/ps pairs: {}", gates.bs_ps_pairs);
    println!("depth: {}", gates.depth);
    check("round-trip error", error, g.tol.unwrap_or(ENCODE_TOL))
}

fn cmd_qft(g: &GlobalOpts, path: Option<&Path>) -> Outcome {
    let d = input_matrix(g, path)?;
    let mut enc = encode(&d, encoding_config(g)?)?;
    let program = build_qft2d(enc.layout)?;
    apply_qft2d(&mut enc)?;
    enc.state.ensure_physical()?;
    let readout = read_spectrum(&enc)?;
    let oracle = fft2_oracle(&ComplexField::from_real(&d));
    let error = readout.spectrum.max_abs_diff(&oracle);
    let redundant = redundant_block_deviation(&enc)?;
    let gates = qft_gate_report(d.rows(), d.cols())?;

    let dir = out_dir(g, "qft")?;
    let (re, im) = split_spectrum(&readout.spectrum);
    write_matrix_csv(&dir.join("spectrum_re.csv"), &re)?;
    write_matrix_csv(&dir.join("spectrum_im.csv"), &im)?;
    write_text(&dir.join("program.txt"), &program.to_text())?;

    println!("matrix: {}x{}", d.rows(), d.cols());
    println!("lambda: {}", enc.lambda);
    println!("max error vs oracle: {error:e}");
    println!("redundant block deviation: {redundant:e}");
    println!("row gates: {}", gates.row_gates);
    println!("column gates: {}", gates.col_gates);
    println!("gate count: {}", gates.gate_count);
    println!("depth: {}", gates.depth);
    println!("wrote {}", dir.display());
    let tol = g.tol.unwrap_or(QFT_TOL);
    check("spectrum error", error, tol)?;
    check("redundant block deviation", redundant, tol)
}

fn cmd_filter(g: &GlobalOpts, pgm: bool) -> Outcome {
    let mut exp: FilterExperiment = load_config(g.config.as_deref())?;
    if let Some(seed) = g.seed {
        exp.signal.seed = seed;
    }
    if let Some(size) = g.size {
        exp.signal.size = size;
    }
    if g.lambda.is_some() {
        exp.encoding.lambda = g.lambda;
    }
    let report = run_filter_pipeline(&exp)?;
    let table = report.to_report();
    let dir = out_dir(g, "filter")?;
    write_experiment(&dir, &table, pgm)?;

    for row in &table.rows {
        println!("{}: classical={} cv_qfl={}", row[0], row[1], row[2]);
    }
    println!("wrote {}", dir.display());
    if !table.all_physical() {
        return Err(Failure::Invariant(
            "unphysical stage, see physicality.csv".into(),
        ));
    }
    check(
        "error vs same-mask reference",
        report.max_error_vs_reference,
        g.tol.unwrap_or(FILTER_TOL),
    )
}

fn cmd_heat(g: &GlobalOpts, steps: Option<usize>, pgm: bool) -> Outcome {
    let mut params: HeatParams = load_config(g.config.as_deref())?;
    if let Some(steps) = steps {
        params.steps = steps;
    }
    if let Some(size) = g.size {
        params.size = size;
    }
    if g.lambda.is_some() {
        params.encoding.lambda = g.lambda;
    }
    let report = run_heat_pipeline(&params)?;
    let table = report.to_report();
    let dir = out_dir(g, "heat")?;
    write_experiment(&dir, &table, pgm)?;

    println!(
        "grid: {0}x{0}, alpha {1}, dt {2}",
        params.size, params.alpha, params.dt
    );
    println!("lambda: {}", report.lambda);
    println!("encoding error: {:e}", report.encoding_error);
    println!("time,max_abs_error");
    for (t, e) in report.times.iter().zip(&report.errors) {
        println!("{t},{e:e}");
    }
    println!("wrote {}", dir.display());
    if !table.all_physical() {
        return Err(Failure::Invariant(
            "unphysical stage, see physicality.csv".into(),
        ));
    }
    check("heat error", report.max_error(), g.tol.unwrap_or(HEAT_TOL))
}

fn cmd_compile(g: &GlobalOpts, path: Option<&Path>, dft: Option<usize>) -> Outcome {
    let u = match (path, dft) {
        (Some(p), _) => read_complex_csv(p).map_err(|e| with_path(p, e))?,
        (None, Some(n)) => dft_matrix(n)?,
        (None, None) => {
            let n = g.size.unwrap_or(DEFAULT_SIZE);
            if n == 0 {
                return Err(Failure::Input("--size must be positive".into()));
            }
            seeded_unitary(n, g.seed.unwrap_or(0))
        }
    };
    let mesh = clements_decompose(&u)?;
    let error = clements_reconstruct(&mesh).max_abs_diff(&u);
    let dir = out_dir(g, "compile")?;
    write_text(&dir.join("mesh.txt"), &mesh.to_text())?;

    println!("size: {}", mesh.size());
    println!("pairs: {}", mesh.pair_count());
    println!("depth: {}", mesh.depth());
    println!("reconstruction error: {error:e}");
    println!("wrote {}", dir.join("mesh.txt").display());
    check("reconstruction error", error, g.tol.unwrap_or(COMPILE_TOL))
}

/// Gate counts for square registers of every power of two up to `--size`.
fn cmd_report(g: &GlobalOpts) -> Outcome {
    let max = g.size.unwrap_or(64);
    if !is_power_of_two(max) {
        return Err(Failure::Input(format!(
            "--size must be a power of two, got {max}"
        )));
    }
    let mut csv = String::from(
        "size,qft_gates_per_register,qft_gate_count,qft_depth,encoding_tms,encoding_bs_ps_pairs,encoding_depth\n",
    );
    let mut n = 1;
    while n <= max {
        let q = qft_gate_report(n, n)?;
        let e = encoding_gate_report(n, n)?;
        csv.push_str(&format!(
            "{n},{},{},{},{},{},{}\n",
            q.row_gates, q.gate_count, q.depth, e.tms, e.bs_ps_pairs, e.depth
        ));
        n *= 2;
    }
    let dir = out_dir(g, "report")?;
    write_text(&dir.join("report.csv"), &csv)?;
    print!("{csv}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        let unphysical = Failure::from(Error::Unphysical {
            min_eigenvalue: -1.0,
        });
        assert_eq!(unphysical.exit_code(), 1);
        assert_eq!(Failure::from(Error::InvalidSize("0".into())).exit_code(), 2);
        assert_eq!(check("x", 1e-3, 1e-6).unwrap_err().exit_code(), 1);
        assert!(check("x", 0.0, 0.0).is_ok());
    }
}
