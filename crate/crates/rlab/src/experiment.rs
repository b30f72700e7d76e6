//! Reproducible experiment runner: plain-text configs, seeded sweeps,
//! schema-checked CSV tables, and per-run output directories named by the
//! config hash. Identical configs produce byte-identical outputs; an
//! existing run directory is left untouched unless forced.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::bilinear::k_estimate_and_fit;
use crate::bump::BumpProfile;
use crate::cgo::{
    expectation_sweep, haar_rotation, neumann_solve, potential_from_conductivity,
    ConductivityField, PotentialForm,
};
use crate::error::ExperimentError;
use crate::grid::{Field, FourierGrid};
use crate::induction::induction_probe;
use crate::plot::{emit_plot, PlotKind, PlotSpec};
use crate::surface::{SurfaceDensity, SurfaceGraph};
use crate::tubes::{incidence_stats, kakeya_bound_check, occupied_mu2_classes, random_config};
use crate::wavepacket::{packet_decay_audit, wp_decompose, wp_reconstruct};
use crate::xb::PhaseVector;

/// Which experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Cgo,
    Expectation,
    Bilinear,
    Wavepacket,
    Kakeya,
    Induction,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cgo" => ExperimentKind::Cgo,
            "expectation" => ExperimentKind::Expectation,
            "bilinear" => ExperimentKind::Bilinear,
            "wavepacket" => ExperimentKind::Wavepacket,
            "kakeya" => ExperimentKind::Kakeya,
            "induction" => ExperimentKind::Induction,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Cgo => "cgo",
            ExperimentKind::Expectation => "expectation",
            ExperimentKind::Bilinear => "bilinear",
            ExperimentKind::Wavepacket => "wavepacket",
            ExperimentKind::Kakeya => "kakeya",
            ExperimentKind::Induction => "induction",
        }
    }
}

/// A fully parsed experiment configuration. The raw text is retained: it is
/// hashed for the run directory name and echoed next to the outputs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub jobs: usize,
    pub force: bool,
    pub out_root: PathBuf,
    values: BTreeMap<String, String>,
    raw: String,
}

const KNOWN_KEYS: &[&str] = &[
    "experiment",
    "dimension",
    "grid_n",
    "seed",
    "samples",
    "candidates",
    "m_list",
    "tau_list",
    "mu_list",
    "nu_list",
    "r_list",
    "p_prime",
    "nu",
    "delta",
    "big_r",
    "tubes1",
    "tubes2",
    "configs",
    "max_iter",
    "tol",
    "amplitude",
    "bump_radius",
    "out_dir",
];

impl ExperimentConfig {
    /// Parse `key = value` lines; `#` starts a comment. Unknown keys and
    /// malformed lines are reported with their line number.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let stripped = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) =
                stripped
                    .split_once('=')
                    .ok_or_else(|| ExperimentError::ConfigParse {
                        line: line_no,
                        msg: format!("expected `key = value`, got `{stripped}`"),
                    })?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ExperimentError::ConfigParse {
                    line: line_no,
                    msg: format!("unknown key `{key}`"),
                });
            }
            values.insert(key.to_string(), value.to_string());
        }
        let experiment = values
            .get("experiment")
            .ok_or(ExperimentError::ConfigParse {
                line: 0,
                msg: "missing key `experiment`".into(),
            })
            .and_then(|s| {
                ExperimentKind::parse(s).ok_or_else(|| ExperimentError::ConfigParse {
                    line: 0,
                    msg: format!("unknown experiment `{s}`"),
                })
            })?;
        let seed = match values.get("seed") {
            Some(s) => s.parse().map_err(|_| ExperimentError::ConfigParse {
                line: 0,
                msg: format!("seed `{s}` is not an integer"),
            })?,
            None => 0,
        };
        let out_root = values
            .get("out_dir")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("runs"));
        Ok(ExperimentConfig {
            experiment,
            seed,
            jobs: 1,
            force: false,
            out_root,
            values,
            raw: text.to_string(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_out_root(mut self, root: PathBuf) -> Self {
        self.out_root = root;
        self
    }

    fn get_f64(&self, key: &str, default: f64) -> Result<f64, ExperimentError> {
        match self.values.get(key) {
            Some(s) => s.parse().map_err(|_| ExperimentError::ConfigParse {
                line: 0,
                msg: format!("key `{key}`: `{s}` is not a number"),
            }),
            None => Ok(default),
        }
    }

    fn get_usize(&self, key: &str, default: usize) -> Result<usize, ExperimentError> {
        match self.values.get(key) {
            Some(s) => s.parse().map_err(|_| ExperimentError::ConfigParse {
                line: 0,
                msg: format!("key `{key}`: `{s}` is not an integer"),
            }),
            None => Ok(default),
        }
    }

    fn get_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, ExperimentError> {
        match self.values.get(key) {
            Some(s) => s
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<f64>()
                        .map_err(|_| ExperimentError::ConfigParse {
                            line: 0,
                            msg: format!("key `{key}`: `{part}` is not a number"),
                        })
                })
                .collect(),
            None => Ok(default.to_vec()),
        }
    }

    /// Stable hash of the config text and the effective seed.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.raw.bytes().chain(self.seed.to_le_bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h
    }

    pub fn run_dir(&self) -> PathBuf {
        self.out_root
            .join(format!("{}-{:016x}", self.experiment.name(), self.hash()))
    }
}

/// A schema-checked table of string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "schema violation");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Numeric view of a named column.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .map(|r| r[idx].parse::<f64>().ok())
            .collect()
    }
}

/// Artifacts of one run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub table: ResultTable,
    pub reused: bool,
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

/// Execute a config: builds the table, writes `results.csv`, a figure, and
/// the config echo into the hash-named run directory. Returns the existing
/// artifacts untouched when the directory already exists and `force` is
/// not set.
pub fn run(config: &ExperimentConfig) -> Result<RunArtifacts, ExperimentError> {
    let dir = config.run_dir();
    if dir.exists() && !config.force {
        let table = read_back(&dir)?;
        return Ok(RunArtifacts {
            dir,
            table,
            reused: true,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ExperimentError::module("thread pool", e))?;
    let (table, figure, extras) = pool.install(|| dispatch(config))?;
    std::fs::create_dir_all(&dir)
        .map_err(|e| ExperimentError::Unwritable(format!("{}: {e}", dir.display())))?;
    let mut csv = std::fs::File::create(dir.join("results.csv"))?;
    csv.write_all(table.to_csv().as_bytes())?;
    if let Some(svg) = &figure {
        let mut f = std::fs::File::create(dir.join("figure.svg"))?;
        f.write_all(svg.as_bytes())?;
    }
    for (name, bytes) in &extras {
        let mut f = std::fs::File::create(dir.join(name))?;
        f.write_all(bytes)?;
    }
    // config echo with a version stamp
    let mut echo = String::new();
    let _ = writeln!(echo, "# rlab {} run", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(echo, "# effective seed = {}", config.seed);
    echo.push_str(&config.raw);
    std::fs::write(dir.join("config.txt"), echo)?;
    Ok(RunArtifacts {
        dir,
        table,
        reused: false,
    })
}

fn read_back(dir: &Path) -> Result<ResultTable, ExperimentError> {
    let text = std::fs::read_to_string(dir.join("results.csv"))?;
    let mut lines = text.lines();
    let columns: Vec<String> = lines
        .next()
        .unwrap_or("")
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect();
    Ok(ResultTable { columns, rows })
}

type RunOutput = (ResultTable, Option<String>, Vec<(String, Vec<u8>)>);

fn dispatch(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    match config.experiment {
        ExperimentKind::Expectation => run_expectation(config),
        ExperimentKind::Cgo => run_cgo(config),
        ExperimentKind::Bilinear => run_bilinear(config),
        ExperimentKind::Wavepacket => run_wavepacket(config),
        ExperimentKind::Kakeya => run_kakeya(config),
        ExperimentKind::Induction => run_induction(config),
    }
}

fn smooth_ball_field(grid: &FourierGrid, radius: f64) -> Field {
    let profile = BumpProfile::smooth(radius);
    Field::from_fn_physical(grid, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(profile.eval(r), 0.0)
    })
}

fn run_expectation(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let d = config.get_usize("dimension", 3)?;
    let n = config.get_usize("grid_n", 16)?;
    let m_list = config.get_list("m_list", &[8.0, 16.0, 32.0, 64.0])?;
    let samples = config.get_usize("samples", 20)?;
    let grid = FourierGrid::new(d, n, std::f64::consts::PI)
        .map_err(|e| ExperimentError::module("grid", e))?;
    let f = smooth_ball_field(&grid, 0.9);
    let (rows, _samples) = expectation_sweep(&f, 0, &m_list, samples, config.seed)
        .map_err(|e| ExperimentError::module("expectation sweep", e))?;
    let mut table = ResultTable::new(&[
        "M",
        "samples",
        "mean_qnorm",
        "se_qnorm",
        "mean_mqnorm",
        "se_mqnorm",
    ]);
    for r in &rows {
        table.push(vec![
            fmt(r.m),
            r.samples.to_string(),
            fmt(r.mean_qnorm),
            fmt(r.se_qnorm),
            fmt(r.mean_mqnorm),
            fmt(r.se_mqnorm),
        ]);
    }
    let svg = emit_plot(
        &table,
        PlotKind::Trend,
        &PlotSpec {
            x_col: "M".into(),
            y_col: "mean_mqnorm".into(),
            err_col: Some("se_mqnorm".into()),
            title: "averaged multiplication norm vs modulus window".into(),
        },
    )?;
    Ok((table, Some(svg), Vec::new()))
}

fn run_cgo(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let d = config.get_usize("dimension", 3)?;
    let n = config.get_usize("grid_n", 64)?;
    let tau_list = config.get_list("tau_list", &[8.0, 16.0, 32.0])?;
    let samples = config.get_usize("samples", 20)?;
    let amplitude = config.get_f64("amplitude", 0.1)?;
    let bump_radius = config.get_f64("bump_radius", 1.4)?;
    let max_iter = config.get_usize("max_iter", 60)?;
    let tol = config.get_f64("tol", 1e-6)?;
    let grid = FourierGrid::new(d, n, std::f64::consts::PI)
        .map_err(|e| ExperimentError::module("grid", e))?;
    let cond = ConductivityField::one_plus_bump(&grid, amplitude, bump_radius)
        .map_err(|e| ExperimentError::module("conductivity", e))?;
    let q = potential_from_conductivity(&cond, PotentialForm::Laplacian)
        .map_err(|e| ExperimentError::module("potential", e))?;
    let mut table = ResultTable::new(&[
        "tau",
        "sample",
        "iterations",
        "residual",
        "contraction",
        "psi_norm",
    ]);
    for (li, &tau) in tau_list.iter().enumerate() {
        for s in 0..samples {
            let cell_seed = crate::cgo::mix_seed(config.seed, li, s);
            let rot = haar_rotation(cell_seed, d);
            let pv = PhaseVector::new(rot, d, tau)
                .map_err(|e| ExperimentError::module("phase vector", e))?;
            let (_psi, report) = neumann_solve(&q, &pv, max_iter, tol)
                .map_err(|e| ExperimentError::module("corrector solve", e))?;
            table.push(vec![
                fmt(tau),
                s.to_string(),
                report.iterations.to_string(),
                fmt(report.residual),
                fmt(report.contraction_estimate),
                fmt(report.psi_norm),
            ]);
        }
    }
    let svg = emit_plot(
        &table,
        PlotKind::Trend,
        &PlotSpec {
            x_col: "tau".into(),
            y_col: "psi_norm".into(),
            err_col: None,
            title: "corrector norm vs modulus".into(),
        },
    )?;
    Ok((table, Some(svg), Vec::new()))
}

fn run_bilinear(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let n = config.get_usize("dimension", 2)?;
    let (grid_n_default, spacing_exp) = if n == 2 { (1024, -8) } else { (128, -6) };
    let grid_n = config.get_usize("grid_n", grid_n_default)?;
    let spacing = 2.0f64.powi(spacing_exp);
    let grid = FourierGrid::new(n, grid_n, std::f64::consts::PI / spacing)
        .map_err(|e| ExperimentError::module("grid", e))?;
    let surface = SurfaceGraph::paraboloid(n, 0.9);
    let p_default = n as f64 / (n as f64 - 1.0);
    let p_prime = config.get_f64("p_prime", p_default)?;
    let default_mu: Vec<f64> = if n == 2 {
        (3..=6).map(|k| 2.0f64.powi(-k)).collect()
    } else {
        (1..=5).map(|k| 2.0f64.powi(-k)).collect()
    };
    let default_nu: Vec<f64> = if n == 2 {
        (3..=6).map(|k| 2.0f64.powi(-k)).collect()
    } else {
        (1..=4).map(|k| 2.0f64.powi(-k)).collect()
    };
    let mu_list = config.get_list("mu_list", &default_mu)?;
    let nu_list = config.get_list("nu_list", &default_nu)?;
    let candidates = config.get_usize("candidates", 3)?;
    let fit = k_estimate_and_fit(
        &grid,
        &surface,
        p_prime,
        &mu_list,
        &nu_list,
        candidates,
        config.seed,
    )
    .map_err(|e| ExperimentError::module("bilinear sweep", e))?;
    // the upper envelope must hold for every cell
    let p = p_prime / (p_prime - 1.0);
    let delta = 0.05;
    let c_upper = crate::constants::bilinear_upper_constant(n);
    for cell in &fit.cells {
        let bound = c_upper
            * cell.eff_mu.powf(n as f64 / (2.0 * p) - delta)
            * cell.eff_nu.powf(1.0 / p - delta);
        if cell.ratio > bound {
            return Err(ExperimentError::AssertionFailed(format!(
                "bilinear upper envelope violated at mu={}, nu={}: {} > {bound}",
                cell.mu, cell.nu, cell.ratio
            )));
        }
    }
    // the named sweep columns, extended by the realized dimensions so the
    // figure's annotated fit is recomputable from the CSV alone
    let mut table = ResultTable::new(&[
        "n",
        "surface",
        "p_prime",
        "mu",
        "nu",
        "construction",
        "ratio",
        "eff_mu",
        "eff_nu",
    ]);
    for cell in &fit.cells {
        table.push(vec![
            n.to_string(),
            "paraboloid".into(),
            fmt(p_prime),
            fmt(cell.mu),
            fmt(cell.nu),
            cell.construction.clone(),
            fmt(cell.ratio),
            fmt(cell.eff_mu),
            fmt(cell.eff_nu),
        ]);
    }
    let svg = crate::plot::bilinear_figure(&fit)?;
    Ok((table, Some(svg), Vec::new()))
}

fn run_wavepacket(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let n = config.get_usize("dimension", 2)?;
    let big_r = config.get_f64("big_r", 64.0)?;
    let surface = SurfaceGraph::paraboloid(n, 0.9);
    let m = config.get_usize("grid_n", 256)?;
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let f = SurfaceDensity::from_fn(vec![0.0; n - 1], 0.5, m, |_| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let coeffs =
        wp_decompose(&f, big_r).map_err(|e| ExperimentError::module("decomposition", e))?;
    let parseval_rel = {
        let mass = coeffs.mass();
        let l2 = f.l2();
        (mass - l2 * l2).abs() / (l2 * l2)
    };
    let mut rng_p = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed ^ 0xfeed);
    let points: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            (0..n)
                .map(|a| {
                    let scale = if a + 1 == n {
                        big_r
                    } else {
                        big_r.sqrt() * 4.0
                    };
                    (rng_p.random::<f64>() - 0.5) * scale
                })
                .collect()
        })
        .collect();
    let direct = crate::surface::extension_eval(&f, &surface, &points)
        .map_err(|e| ExperimentError::module("extension", e))?;
    let recon = wp_reconstruct(&coeffs, &f, &surface, &points)
        .map_err(|e| ExperimentError::module("reconstruction", e))?;
    let scale = direct.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let recon_rel = direct
        .iter()
        .zip(&recon)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max)
        / scale;
    let entry = coeffs
        .entries
        .iter()
        .filter(|e| {
            coeffs.partition.centers[e.cap]
                .iter()
                .map(|c| c.abs())
                .fold(0.0, f64::max)
                <= 0.2
        })
        .max_by(|a, b| a.coeff.norm().partial_cmp(&b.coeff.norm()).unwrap())
        .cloned();
    let (on_axis, decay_m) = match &entry {
        Some(e) => packet_decay_audit(&coeffs, e, &f, &surface, big_r)
            .map_err(|err| ExperimentError::module("decay audit", err))?,
        None => (0.0, 0.0),
    };
    let mut table = ResultTable::new(&["quantity", "value"]);
    table.push(vec![
        "coefficients".into(),
        coeffs.entries.len().to_string(),
    ]);
    table.push(vec!["parseval_rel_error".into(), fmt(parseval_rel)]);
    table.push(vec!["reconstruction_rel_error".into(), fmt(recon_rel)]);
    table.push(vec!["decay_order".into(), fmt(decay_m)]);
    table.push(vec!["on_axis_amplitude".into(), fmt(on_axis)]);
    // coefficient values in the flat binary field format, with a sidecar
    // index of (cap, omega) rows
    let mut index = String::from("row,cap");
    let m_dim = n - 1;
    for a in 0..m_dim {
        index.push_str(&format!(",omega_{a}"));
    }
    index.push('\n');
    let padded = coeffs.entries.len().next_power_of_two().max(8);
    let bin_grid = crate::grid::FourierGrid::new(1, padded, 1.0)
        .map_err(|e| ExperimentError::module("packet store", e))?;
    let mut values = vec![Complex64::ZERO; padded];
    for (row, e) in coeffs.entries.iter().enumerate() {
        values[row] = e.coeff;
        index.push_str(&row.to_string());
        index.push(',');
        index.push_str(&e.cap.to_string());
        for w in &e.omega {
            index.push(',');
            index.push_str(&fmt(*w));
        }
        index.push('\n');
    }
    let field = Field::from_values(&bin_grid, values, crate::grid::Representation::Physical)
        .map_err(|e| ExperimentError::module("packet store", e))?;
    let mut bin = Vec::new();
    crate::grid::write_field(&field, &mut bin)
        .map_err(|e| ExperimentError::module("packet store", e))?;
    let extras = vec![
        ("packets.bin".to_string(), bin),
        ("packets_index.csv".to_string(), index.into_bytes()),
    ];
    Ok((table, None, extras))
}

fn run_kakeya(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let n = config.get_usize("dimension", 2)?;
    let big_r = config.get_f64("big_r", 64.0)?;
    let delta = config.get_f64("delta", 0.1)?;
    let tubes1 = config.get_usize("tubes1", 12)?;
    let tubes2 = config.get_usize("tubes2", 18)?;
    let configs = config.get_usize("configs", 20)?;
    let mut table = ResultTable::new(&["R", "delta", "mu2", "lambda1", "T1", "T2", "lhs", "rhs"]);
    use rayon::prelude::*;
    let rows: Result<Vec<Vec<Vec<String>>>, ExperimentError> = (0..configs)
        .into_par_iter()
        .map(|i| {
            let cfg = random_config(
                config.seed.wrapping_add(i as u64),
                n,
                big_r,
                delta,
                tubes1,
                tubes2,
            );
            let mut local = Vec::new();
            let mut c1 = vec![0.0f64; n - 1];
            let mut c2 = vec![0.0f64; n - 1];
            c1[0] = 0.5;
            c2[0] = -0.5;
            for mu2 in occupied_mu2_classes(&cfg) {
                let stats = incidence_stats(&cfg, mu2);
                let lmax = stats.lambda_total.iter().cloned().max().unwrap_or(0);
                if lmax == 0 {
                    continue;
                }
                let lambda1 = 2.0f64.powi((lmax as f64).log2().floor() as i32);
                let check = match kakeya_bound_check(&cfg, mu2, lambda1, 25, &c1, &c2, 0.25) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                if check.lhs > check.rhs {
                    return Err(ExperimentError::AssertionFailed(format!(
                        "incidence bound violated at config {i}, mu2 {mu2}: {} > {}",
                        check.lhs, check.rhs
                    )));
                }
                local.push(vec![
                    fmt(big_r),
                    fmt(delta),
                    fmt(mu2),
                    fmt(lambda1),
                    tubes1.to_string(),
                    tubes2.to_string(),
                    fmt(check.lhs),
                    fmt(check.rhs),
                ]);
            }
            Ok(local)
        })
        .collect();
    for group in rows? {
        for row in group {
            table.push(row);
        }
    }
    Ok((table, None, Vec::new()))
}

fn run_induction(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let n = config.get_usize("dimension", 2)?;
    let nu = config.get_f64("nu", 1.0 / 16.0)?;
    let r_list = config.get_list("r_list", &[16.0, 32.0, 64.0, 128.0])?;
    let p_prime = config.get_f64("p_prime", n as f64 / (n as f64 - 1.0))?;
    let candidates = config.get_usize("candidates", 4)?;
    let surface = SurfaceGraph::paraboloid(n, 0.9);
    let probe = induction_probe(&surface, nu, &r_list, p_prime, candidates, config.seed)
        .map_err(|e| ExperimentError::module("scale probe", e))?;
    let mut table = ResultTable::new(&["nu", "R", "p_prime", "k_estimate"]);
    for row in &probe.rows {
        table.push(vec![
            fmt(nu),
            fmt(row.big_r),
            fmt(p_prime),
            fmt(row.k_estimate),
        ]);
    }
    let svg = emit_plot(
        &table,
        PlotKind::LogLog,
        &PlotSpec {
            x_col: "R".into(),
            y_col: "k_estimate".into(),
            err_col: None,
            title: "localized bilinear constant vs radius".into(),
        },
    )?;
    Ok((table, Some(svg), Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_root(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("rlab-test-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        dir
    }

    const EXPECTATION_CFG: &str = "\
experiment = expectation
dimension = 3
grid_n = 16
m_list = 8, 16
samples = 20
seed = 7
";

    #[test]
    fn config_parse_and_row_count() {
        let root = temp_root("rows");
        let config = ExperimentConfig::parse(EXPECTATION_CFG)
            .unwrap()
            .with_out_root(root.clone());
        let artifacts = run(&config).unwrap();
        assert_eq!(artifacts.table.rows.len(), 2, "one row per M level");
        assert!(artifacts.dir.join("results.csv").exists());
        assert!(artifacts.dir.join("config.txt").exists());
        assert!(artifacts.dir.join("figure.svg").exists());
        let _ = std::fs::remove_dir_all(&root);
    }

    #[test]
    fn malformed_config_names_key_and_line() {
        let bad = "experiment = expectation\nsampels = 20\n";
        match ExperimentConfig::parse(bad) {
            Err(ExperimentError::ConfigParse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(
                    msg.contains("sampels"),
                    "message should name the key: {msg}"
                );
            }
            other => panic!("expected ConfigParse, got {other:?}"),
        }
        let bad2 = "experiment expectation\n";
        assert!(matches!(
            ExperimentConfig::parse(bad2),
            Err(ExperimentError::ConfigParse { line: 1, .. })
        ));
    }

    #[test]
    fn reruns_are_byte_identical_and_noop_without_force() {
        let root = temp_root("determinism");
        let config = ExperimentConfig::parse(EXPECTATION_CFG)
            .unwrap()
            .with_out_root(root.clone());
        let first = run(&config).unwrap();
        assert!(!first.reused);
        let bytes1 = std::fs::read(first.dir.join("results.csv")).unwrap();
        // rerun without force: no-op reuse
        let second = run(&config).unwrap();
        assert!(second.reused);
        // forced rerun: byte-identical artifacts
        let third = run(&config.clone().with_force(true)).unwrap();
        assert!(!third.reused);
        let bytes3 = std::fs::read(third.dir.join("results.csv")).unwrap();
        assert_eq!(bytes1, bytes3, "identical config must give identical bytes");
        let _ = std::fs::remove_dir_all(&root);
    }

    #[test]
    fn kakeya_experiment_runs_clean() {
        let root = temp_root("kakeya");
        let cfg = "\
experiment = kakeya
dimension = 2
big_r = 64
delta = 0.1
tubes1 = 8
tubes2 = 12
configs = 5
seed = 3
";
        let config = ExperimentConfig::parse(cfg)
            .unwrap()
            .with_out_root(root.clone())
            .with_jobs(2);
        let artifacts = run(&config).unwrap();
        assert!(!artifacts.table.rows.is_empty());
        let lhs = artifacts.table.column_f64("lhs").unwrap();
        let rhs = artifacts.table.column_f64("rhs").unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!(l <= r);
        }
        // the jobs count must not change the result
        let serial = run(&config.clone().with_jobs(1).with_force(true)).unwrap();
        assert_eq!(serial.table, artifacts.table);
        let _ = std::fs::remove_dir_all(&root);
    }
}
