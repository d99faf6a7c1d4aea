//! Command-line front end: exposes the quantization, star-product,
//! Wigner, reconstruction, and figure pipelines as subcommands emitting
//! machine-readable CSV or JSON tables with provenance metadata.

use crate::core::{
    AngleGrid, CylinderFunction, CylinderOperator, DensityOperator, Error, MomentumBand, Result,
    C64,
};
use crate::kernels::{check_admissibility, check_kernel_conditions, Kernel};
use crate::numberphase::{
    number_distribution, phase_distribution,
};
use crate::quantizer::quantize;
use crate::star::{star_product, star_product_trace};
use crate::states::{build_state, figure_data, StateSpec};
use crate::wigner::{
    marginals, reconstruct_matrix_literal, reconstruction_comparison, wigner_function, WignerGrid,
};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

const DEFAULT_TOL: f64 = 1e-10;

fn tol_from_env() -> Result<f64> {
    match std::env::var("CYLWIG_TOL") {
        Ok(v) => v
            .parse::<f64>()
            .map_err(|e| Error::InvalidParameter(format!("CYLWIG_TOL: {e}"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Trace,
    Operator,
}

#[derive(Parser, Debug)]
#[command(name = "cylwig", version, about = "Wigner functions and star products on the cylinder phase space and the number-phase lattice")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Number-phase Wigner function of an analytic state
    Wigner {
        /// State spec, e.g. fock:N=3 or coherent:abs=1.0,arg=0.0
        #[arg(long)]
        state: String,
        /// Number of φ grid points
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value = "symmetric")]
        kernel: String,
        /// Fock truncation order
        #[arg(long, default_value_t = 60)]
        nf: usize,
        /// Tail-mass allowance for truncated analytic families
        #[arg(long)]
        tail_allowance: Option<f64>,
    },
    /// Phase and number marginal distributions of an analytic state
    Marginals {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 60)]
        nf: usize,
        #[arg(long)]
        tail_allowance: Option<f64>,
    },
    /// Cylinder Wigner function from a density-matrix file
    CylWigner {
        /// Density-matrix JSON file {"n_min", "dim", "re", "im"}
        #[arg(long)]
        rho: String,
        /// Optional target band half-width: embeds into n ∈ [−N, N]
        #[arg(long)]
        band: Option<u32>,
        #[arg(long, default_value = "symmetric")]
        kernel: String,
        /// Number of Θ grid points (default: 4·dim + 1)
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Reconstruct a density matrix from a symmetric-kernel Wigner file
    Reconstruct {
        /// Wigner samples JSON file {"M", "n_min", "dim", "re", "im"}
        #[arg(long)]
        wigner: String,
        /// Also report the uncorrected literal inversion
        #[arg(long, default_value_t = false)]
        literal: bool,
    },
    /// Quantize a symbol file into an operator matrix
    Quantize {
        /// Symbol JSON file {"M", "n_min", "dim", "re", "im"}
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value = "weyl")]
        kernel: String,
    },
    /// Star product of two symbol files
    Star {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_enum, default_value_t = Backend::Operator)]
        backend: Backend,
        #[arg(long, default_value = "weyl")]
        kernel: String,
    },
    /// Kernel condition / nonvanishing / admissibility report
    KernelReport {
        #[arg(long)]
        kernel: String,
    },
    /// Data tables behind the standard figures
    Figures {
        /// One of: max, coh, squeezed, cat
        #[arg(long)]
        which: String,
    },
}

/// A generic output table with provenance metadata.
#[derive(Debug, Serialize)]
struct OutputTable {
    meta: BTreeMap<String, serde_json::Value>,
    columns: Vec<String>,
    rows: Vec<Vec<serde_json::Value>>,
}

impl OutputTable {
    fn new(columns: &[&str]) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert(
            "tool_version".to_string(),
            serde_json::Value::String(env!("CARGO_PKG_VERSION").to_string()),
        );
        Self {
            meta,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn meta_str(&mut self, key: &str, value: impl Into<String>) {
        self.meta
            .insert(key.to_string(), serde_json::Value::String(value.into()));
    }

    fn meta_num(&mut self, key: &str, value: f64) {
        self.meta.insert(
            key.to_string(),
            serde_json::Number::from_f64(value)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        );
    }

    fn meta_int(&mut self, key: &str, value: i64) {
        self.meta.insert(
            key.to_string(),
            serde_json::Value::Number(serde_json::Number::from(value)),
        );
    }

    fn push(&mut self, row: Vec<serde_json::Value>) {
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => {
                for (k, v) in &self.meta {
                    writeln!(out, "# {k}={}", render_csv_cell(v))?;
                }
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(render_csv_cell).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                Ok(())
            }
        }
    }
}

fn render_csv_cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Angle values carry 17 significant digits for round-trip fidelity.
fn angle_value(x: f64) -> serde_json::Value {
    serde_json::Value::String(format!("{x:.16e}"))
}

fn num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn int(x: i64) -> serde_json::Value {
    serde_json::Value::Number(serde_json::Number::from(x))
}

/// On-disk density-matrix format.
#[derive(Debug, Serialize, Deserialize)]
struct DensityFile {
    n_min: i64,
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// On-disk symbol / Wigner-sample format (Θ-major: `re[j][ni]`).
#[derive(Debug, Serialize, Deserialize)]
struct SymbolFile {
    #[serde(rename = "M")]
    m: usize,
    n_min: i64,
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    #[serde(default = "default_hbar")]
    hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

fn check_matrix_shape(re: &[Vec<f64>], im: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    let ok = re.len() == rows
        && im.len() == rows
        && re.iter().all(|r| r.len() == cols)
        && im.iter().all(|r| r.len() == cols);
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            expect_rows: rows,
            expect_cols: cols,
            rows: re.len(),
            cols: re.first().map(|r| r.len()).unwrap_or(0),
        })
    }
}

fn load_density(path: &str, tol: f64) -> Result<DensityOperator> {
    let text = std::fs::read_to_string(path)?;
    let file: DensityFile = serde_json::from_str(&text)?;
    check_matrix_shape(&file.re, &file.im, file.dim, file.dim)?;
    let band = MomentumBand::new(file.n_min, file.n_min + file.dim as i64 - 1)?;
    let m = DMatrix::from_fn(file.dim, file.dim, |j, k| {
        C64::new(file.re[j][k], file.im[j][k])
    });
    DensityOperator::new(CylinderOperator::new(band, m)?, tol)
}

fn load_symbol(path: &str) -> Result<CylinderFunction> {
    let text = std::fs::read_to_string(path)?;
    let file: SymbolFile = serde_json::from_str(&text)?;
    check_matrix_shape(&file.re, &file.im, file.m, file.dim)?;
    let grid = AngleGrid::new(file.m)?;
    let band = MomentumBand::new(file.n_min, file.n_min + file.dim as i64 - 1)?;
    let values = DMatrix::from_fn(file.m, file.dim, |j, ni| {
        C64::new(file.re[j][ni], file.im[j][ni])
    });
    CylinderFunction::new(grid, band, values, file.hbar)
}

fn kernel_by_name(name: &str) -> Result<Kernel> {
    Kernel::by_name(name)
}

fn build_density_from_spec(
    state: &str,
    nf: usize,
    allowance: Option<f64>,
    tol: f64,
) -> Result<(StateSpec, crate::numberphase::FockDensity)> {
    let spec: StateSpec = state.parse()?;
    let built = build_state(&spec, nf, allowance)?;
    let rho = built.density(10.0 * tol)?;
    Ok((spec, rho))
}

fn cmd_wigner(
    state: &str,
    grid_m: usize,
    kernel_name: &str,
    nf: usize,
    allowance: Option<f64>,
    tol: f64,
) -> Result<OutputTable> {
    let (spec, rho) = build_density_from_spec(state, nf, allowance, tol)?;
    let grid = AngleGrid::new(grid_m)?;
    let kernel = kernel_by_name(kernel_name)?;
    let w = crate::numberphase::number_phase_wigner_with_kernel(&kernel, &rho, &grid)?;
    let mut table = OutputTable::new(&["phi", "n", "W"]);
    table.meta_str("state", spec.to_string());
    table.meta_str("kernel", kernel.name());
    table.meta_int("grid", grid_m as i64);
    table.meta_int("nf", nf as i64);
    table.meta_num("hbar", 1.0);
    table.meta_num("tol", tol);
    for j in 0..grid.len() {
        let phi = grid.point(j);
        for n in 0..=w.n_f() {
            table.push(vec![angle_value(phi), int(n as i64), num(w.value(j, n))]);
        }
    }
    Ok(table)
}

fn cmd_marginals(
    state: &str,
    grid_m: usize,
    nf: usize,
    allowance: Option<f64>,
    tol: f64,
) -> Result<OutputTable> {
    let (spec, rho) = build_density_from_spec(state, nf, allowance, tol)?;
    let grid = AngleGrid::new(grid_m)?;
    let p = phase_distribution(&rho, &grid);
    let nd = number_distribution(&rho);
    let mut table = OutputTable::new(&["kind", "x", "value"]);
    table.meta_str("state", spec.to_string());
    table.meta_int("grid", grid_m as i64);
    table.meta_int("nf", nf as i64);
    table.meta_num("tol", tol);
    for (j, v) in p.iter().enumerate() {
        table.push(vec![
            serde_json::Value::String("phase".into()),
            angle_value(grid.point(j)),
            num(*v),
        ]);
    }
    for (n, v) in nd.iter().enumerate() {
        table.push(vec![
            serde_json::Value::String("number".into()),
            int(n as i64),
            num(*v),
        ]);
    }
    Ok(table)
}

fn cmd_cyl_wigner(
    rho_path: &str,
    band_halfwidth: Option<u32>,
    kernel_name: &str,
    grid_m: Option<usize>,
    tol: f64,
) -> Result<OutputTable> {
    let rho = load_density(rho_path, tol)?;
    let rho = match band_halfwidth {
        None => rho,
        Some(nw) => {
            let target = MomentumBand::symmetric(nw);
            if !target.contains(rho.band().n_min()) || !target.contains(rho.band().n_max()) {
                return Err(Error::BandMismatch(
                    target.n_min(),
                    target.n_max(),
                    rho.band().n_min(),
                    rho.band().n_max(),
                ));
            }
            let mut m = DMatrix::zeros(target.dim(), target.dim());
            for j in rho.band().iter() {
                for k in rho.band().iter() {
                    m[(target.index(j)?, target.index(k)?)] =
                        rho.operator().element(j, k)?;
                }
            }
            DensityOperator::new(CylinderOperator::new(target, m)?, tol)?
        }
    };
    let band = *rho.band();
    let grid = match grid_m {
        Some(m) => AngleGrid::new(m)?,
        None => AngleGrid::for_band(&band)?,
    };
    let kernel = kernel_by_name(kernel_name)?;
    let w = wigner_function(&kernel, &rho, &grid, 1.0)?;
    let marg = marginals(&w).ok();
    let mut table = OutputTable::new(&["theta", "n", "W"]);
    table.meta_str("kernel", kernel.name());
    table.meta_int("grid", grid.len() as i64);
    table.meta_int("n_min", band.n_min());
    table.meta_int("n_max", band.n_max());
    table.meta_num("hbar", 1.0);
    table.meta_num("tol", tol);
    table.meta_num("max_imag", w.max_imag());
    if let Some(marg) = marg {
        let total: f64 = marg.momentum.iter().sum();
        table.meta_num("momentum_marginal_total", total);
    }
    for j in 0..grid.len() {
        let theta = grid.point(j);
        for n in band.iter() {
            table.push(vec![angle_value(theta), int(n), num(w.value(j, n)?)]);
        }
    }
    Ok(table)
}

fn cmd_reconstruct(wigner_path: &str, literal: bool, tol: f64) -> Result<OutputTable> {
    let text = std::fs::read_to_string(wigner_path)?;
    let file: SymbolFile = serde_json::from_str(&text)?;
    check_matrix_shape(&file.re, &file.im, file.m, file.dim)?;
    let grid = AngleGrid::new(file.m)?;
    let band = MomentumBand::new(file.n_min, file.n_min + file.dim as i64 - 1)?;
    let values = DMatrix::from_fn(file.m, file.dim, |j, ni| file.re[j][ni]);
    let w = WignerGrid::from_samples(grid.clone(), band, values, file.hbar, &Kernel::symmetric())?;
    let rho = crate::wigner::reconstruct_density(&w, tol)?;
    // round-trip error
    let w2 = wigner_function(&Kernel::symmetric(), &rho, &grid, file.hbar)?;
    let roundtrip = (w.values() - w2.values())
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let mut table = OutputTable::new(&["j", "k", "re", "im"]);
    table.meta_str("kernel", "symmetric");
    table.meta_int("n_min", band.n_min());
    table.meta_int("dim", band.dim() as i64);
    table.meta_num("tol", tol);
    table.meta_num("roundtrip_error", roundtrip);
    if literal {
        let cmp = reconstruction_comparison(&w)?;
        table.meta_num("literal_max_difference", cmp.max_difference);
        let _ = reconstruct_matrix_literal(&w)?;
    }
    for j in band.iter() {
        for k in band.iter() {
            let z = rho.operator().element(j, k)?;
            table.push(vec![int(j), int(k), num(z.re), num(z.im)]);
        }
    }
    Ok(table)
}

fn cmd_quantize(symbol_path: &str, kernel_name: &str, tol: f64) -> Result<OutputTable> {
    let f = load_symbol(symbol_path)?;
    let kernel = kernel_by_name(kernel_name)?;
    let op = quantize(&kernel, &f)?;
    let band = op.band();
    let mut table = OutputTable::new(&["j", "k", "re", "im"]);
    table.meta_str("kernel", kernel.name());
    table.meta_int("n_min", band.n_min());
    table.meta_int("dim", band.dim() as i64);
    table.meta_num("hbar", f.hbar());
    table.meta_num("tol", tol);
    for j in band.iter() {
        for k in band.iter() {
            let z = op.element(j, k)?;
            table.push(vec![int(j), int(k), num(z.re), num(z.im)]);
        }
    }
    Ok(table)
}

fn cmd_star(
    f_path: &str,
    g_path: &str,
    backend: Backend,
    kernel_name: &str,
    tol: f64,
) -> Result<OutputTable> {
    let f = load_symbol(f_path)?;
    let g = load_symbol(g_path)?;
    let kernel = kernel_by_name(kernel_name)?;
    let h = match backend {
        Backend::Operator => star_product(&kernel, &f, &g)?,
        Backend::Trace => {
            if kernel.name() != "weyl" {
                return Err(Error::InvalidParameter(
                    "the trace backend supports only the weyl kernel".into(),
                ));
            }
            star_product_trace(&f, &g)?
        }
    };
    let band = *h.band();
    let mut table = OutputTable::new(&["theta", "n", "re", "im"]);
    table.meta_str("kernel", kernel.name());
    table.meta_str(
        "backend",
        match backend {
            Backend::Operator => "operator",
            Backend::Trace => "trace",
        },
    );
    table.meta_int("grid", h.grid().len() as i64);
    table.meta_int("n_min", band.n_min());
    table.meta_int("dim", band.dim() as i64);
    table.meta_num("hbar", h.hbar());
    table.meta_num("tol", tol);
    for j in 0..h.grid().len() {
        let theta = h.grid().point(j);
        for (ni, n) in band.iter().enumerate() {
            let z = h.values()[(j, ni)];
            table.push(vec![angle_value(theta), int(n), num(z.re), num(z.im)]);
        }
    }
    Ok(table)
}

fn cmd_kernel_report(kernel_name: &str, tol: f64) -> Result<OutputTable> {
    let kernel = kernel_by_name(kernel_name)?;
    let report = check_kernel_conditions(&kernel, 8, 64, tol)?;
    let adm = check_admissibility(&kernel, 8, 4, tol)?;
    let mut table = OutputTable::new(&["check", "ok", "worst"]);
    table.meta_str("kernel", kernel.name());
    table.meta_num("tol", tol);
    let mut push = |name: &str, ok: bool, worst: f64| {
        table.push(vec![
            serde_json::Value::String(name.into()),
            serde_json::Value::Bool(ok),
            num(worst),
        ]);
    };
    push("cond_theta", report.cond_theta.ok, report.cond_theta.worst);
    push("cond_l", report.cond_l.ok, report.cond_l.worst);
    push("cond_sym", report.cond_sym.ok, report.cond_sym.worst);
    push(
        "nonvanishing",
        report.nonvanishing.ok,
        report.nonvanishing.worst,
    );
    push("admissible", adm.ok, adm.worst);
    Ok(table)
}

fn cmd_figures(which: &str) -> Result<OutputTable> {
    let data = figure_data(which)?;
    let cols: Vec<&str> = data.columns.iter().map(|s| s.as_str()).collect();
    let mut table = OutputTable::new(&cols);
    table.meta_str("figure", which);
    for row in data.rows {
        let cells = data
            .columns
            .iter()
            .zip(row.iter())
            .map(|(c, v)| {
                if c == "phi" {
                    angle_value(*v)
                } else if c == "n" {
                    int(*v as i64)
                } else {
                    num(*v)
                }
            })
            .collect();
        table.push(cells);
    }
    Ok(table)
}

fn dispatch(cli: &Cli, tol: f64) -> Result<OutputTable> {
    match &cli.cmd {
        Cmd::Wigner {
            state,
            grid,
            kernel,
            nf,
            tail_allowance,
        } => cmd_wigner(state, *grid, kernel, *nf, *tail_allowance, tol),
        Cmd::Marginals {
            state,
            grid,
            nf,
            tail_allowance,
        } => cmd_marginals(state, *grid, *nf, *tail_allowance, tol),
        Cmd::CylWigner {
            rho,
            band,
            kernel,
            grid,
        } => cmd_cyl_wigner(rho, *band, kernel, *grid, tol),
        Cmd::Reconstruct { wigner, literal } => cmd_reconstruct(wigner, *literal, tol),
        Cmd::Quantize { symbol, kernel } => cmd_quantize(symbol, kernel, tol),
        Cmd::Star {
            f,
            g,
            backend,
            kernel,
        } => cmd_star(f, g, *backend, kernel, tol),
        Cmd::KernelReport { kernel } => cmd_kernel_report(kernel, tol),
        Cmd::Figures { which } => cmd_figures(which),
    }
}

/// Run the CLI against `argv`, writing tables to `out`. Returns the
/// process exit code: 0 on success, 2 on any validation failure.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output with exit code 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let tol = match tol_from_env() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match dispatch(&cli, tol) {
        Ok(table) => {
            if let Err(e) = table.write(cli.format, out) {
                eprintln!("error: {e}");
                return 2;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with_output(argv, &mut lock)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with_output(args.iter().copied(), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn wigner_fock_rows() {
        let (code, out) = run_capture(&["cylwig", "wigner", "--state", "fock:N=3", "--grid", "64", "--nf", "6"]);
        assert_eq!(code, 0);
        let mut saw = 0;
        for line in out.lines() {
            if line.starts_with('#') || line.starts_with("phi") {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let n: i64 = cells[1].parse().unwrap();
            let w: f64 = cells[2].parse().unwrap();
            if n == 3 {
                assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-12);
                saw += 1;
            } else {
                assert!(w.abs() < 1e-13);
            }
        }
        assert_eq!(saw, 64);
    }

    #[test]
    fn wigner_json_and_determinism() {
        let args = [
            "cylwig", "--format", "json", "wigner", "--state", "coherent:abs=1.0,arg=0.0",
            "--grid", "32", "--nf", "24",
        ];
        let (code, out1) = run_capture(&args);
        let (_, out2) = run_capture(&args);
        assert_eq!(code, 0);
        assert_eq!(out1, out2, "identical invocations must be byte-identical");
        let v: serde_json::Value = serde_json::from_str(&out1).unwrap();
        assert_eq!(v["meta"]["kernel"], "symmetric");
        assert!(v["rows"].as_array().unwrap().len() == 32 * 25);
    }

    #[test]
    fn marginals_thermal() {
        let (code, out) = run_capture(&[
            "cylwig", "marginals", "--state", "thermal:bho=0.6931471805599453", "--nf", "40",
        ]);
        assert_eq!(code, 0);
        for line in out.lines() {
            if !line.starts_with("number,") {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let n: i32 = cells[1].parse().unwrap();
            let v: f64 = cells[2].parse().unwrap();
            if n <= 12 {
                assert!((v - 0.5f64.powi(n + 1)).abs() < 1e-9, "n={n} v={v}");
            }
        }
    }

    #[test]
    fn kernel_reports() {
        let (code, out) = run_capture(&["cylwig", "--format", "json", "kernel-report", "--kernel", "weyl"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v["rows"].as_array().unwrap();
        let adm = rows.iter().find(|r| r[0] == "admissible").unwrap();
        assert_eq!(adm[1], false);
        let (code, out) = run_capture(&["cylwig", "--format", "json", "kernel-report", "--kernel", "symmetric"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v["rows"].as_array().unwrap();
        let adm = rows.iter().find(|r| r[0] == "admissible").unwrap();
        assert_eq!(adm[1], true);
        let nv = rows.iter().find(|r| r[0] == "nonvanishing").unwrap();
        assert_eq!(nv[1], false);
    }

    #[test]
    fn file_pipelines() {
        let dir = std::env::temp_dir().join("cylwig-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        // density file: (|0⟩+|1⟩+|2⟩)/√3 on band 0..=4
        let dim = 5usize;
        let mut re = vec![vec![0.0; dim]; dim];
        for j in 0..3 {
            for k in 0..3 {
                re[j][k] = 1.0 / 3.0;
            }
        }
        let rho_path = dir.join("rho.json");
        std::fs::write(
            &rho_path,
            serde_json::to_string(&DensityFile {
                n_min: 0,
                dim,
                re,
                im: vec![vec![0.0; dim]; dim],
            })
            .unwrap(),
        )
        .unwrap();
        let (code, out) = run_capture(&[
            "cylwig", "--format", "json", "cyl-wigner", "--rho",
            rho_path.to_str().unwrap(), "--kernel", "symmetric",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        // write the Wigner data back out as a symbol file and reconstruct
        let m = v["meta"]["grid"].as_i64().unwrap() as usize;
        let mut wre = vec![vec![0.0; dim]; m];
        for (idx, row) in v["rows"].as_array().unwrap().iter().enumerate() {
            let j = idx / dim;
            let ni = idx % dim;
            wre[j][ni] = row[2].as_f64().unwrap();
        }
        let wig_path = dir.join("wigner.json");
        std::fs::write(
            &wig_path,
            serde_json::to_string(&SymbolFile {
                m,
                n_min: 0,
                dim,
                re: wre,
                im: vec![vec![0.0; dim]; m],
                hbar: 1.0,
            })
            .unwrap(),
        )
        .unwrap();
        let (code, out) = run_capture(&[
            "cylwig", "--format", "json", "reconstruct", "--wigner",
            wig_path.to_str().unwrap(), "--literal",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["meta"]["roundtrip_error"].as_f64().unwrap() < 1e-10);
        assert!(v["meta"]["literal_max_difference"].as_f64().unwrap() > 0.3);
        let row01 = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r[0] == 0 && r[1] == 1)
            .unwrap();
        assert!((row01[2].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        // quantize + star on simple symbol files: f = e^{iΘ}, g = 1
        let m = 33usize;
        let band_dim = 7usize;
        let grid = AngleGrid::new(m).unwrap();
        // f is windowed to the band interior so the symbol round-trip
        // (and hence f ⋆ 1 = f) is exact there
        let window = [0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0];
        let mk = |f: &dyn Fn(f64) -> C64, windowed: bool| SymbolFile {
            m,
            n_min: -3,
            dim: band_dim,
            re: (0..m)
                .map(|j| {
                    (0..band_dim)
                        .map(|ni| f(grid.point(j)).re * if windowed { window[ni] } else { 1.0 })
                        .collect()
                })
                .collect(),
            im: (0..m)
                .map(|j| {
                    (0..band_dim)
                        .map(|ni| f(grid.point(j)).im * if windowed { window[ni] } else { 1.0 })
                        .collect()
                })
                .collect(),
            hbar: 1.0,
        };
        let f_path = dir.join("f.json");
        let g_path = dir.join("g.json");
        std::fs::write(
            &f_path,
            serde_json::to_string(&mk(&|t| C64::new(0.0, t).exp(), true)).unwrap(),
        )
        .unwrap();
        std::fs::write(
            &g_path,
            serde_json::to_string(&mk(&|_| C64::new(1.0, 0.0), false)).unwrap(),
        )
        .unwrap();
        let (code, out) = run_capture(&[
            "cylwig", "--format", "json", "quantize", "--symbol",
            f_path.to_str().unwrap(), "--kernel", "symmetric",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        // Q(e^{iΘ}) is the lower shift: entries at (j, k) with j = k + 1
        let r = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r[0] == 1 && r[1] == 0)
            .unwrap();
        assert!((r[2].as_f64().unwrap() - 1.0).abs() < 1e-12);
        for backend in ["operator", "trace"] {
            let (code, out) = run_capture(&[
                "cylwig", "--format", "json", "star", "--f", f_path.to_str().unwrap(),
                "--g", g_path.to_str().unwrap(), "--backend", backend,
            ]);
            assert_eq!(code, 0, "{out}");
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            // f ⋆ 1 = f on interior rows
            let rows = v["rows"].as_array().unwrap();
            for row in rows {
                let n = row[1].as_i64().unwrap();
                if n == 0 {
                    let theta: f64 = row[0].as_str().unwrap().parse().unwrap();
                    assert!((row[2].as_f64().unwrap() - theta.cos()).abs() < 1e-8);
                    assert!((row[3].as_f64().unwrap() - theta.sin()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn figures_and_errors() {
        let (code, _) = run_capture(&["cylwig", "figures", "--which", "cat"]);
        assert_eq!(code, 0);
        // validation failures exit 2 with a diagnostic
        let (code, _) = run_capture(&["cylwig", "wigner", "--state", "thermal:bho=-1"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["cylwig", "figures", "--which", "nope"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["cylwig", "reconstruct", "--wigner", "/nonexistent.json"]);
        assert_eq!(code, 2);
        // tail-mass gate propagates
        let (code, _) = run_capture(&[
            "cylwig", "wigner", "--state", "coherent:abs=5.0,arg=0.0", "--nf", "10",
        ]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&[
            "cylwig", "wigner", "--state", "coherent:abs=5.0,arg=0.0", "--nf", "10",
            "--tail-allowance", "1.0",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn tol_env_override() {
        // invalid CYLWIG_TOL is a validation failure
        std::env::set_var("CYLWIG_TOL", "not-a-number");
        let (code, _) = run_capture(&["cylwig", "kernel-report", "--kernel", "weyl"]);
        std::env::remove_var("CYLWIG_TOL");
        assert_eq!(code, 2);
    }
}
