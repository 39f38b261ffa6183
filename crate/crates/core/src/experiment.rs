//! End-to-end experiment: simulate each process, sparsify at every level,
//! reconstruct with GP regression and score with MAPE-AR.
//!
//! Output tree (`<out>/`):
//!
//! ```text
//! manifest.json                       seeds, version, resolved config, file list
//! summary.csv                         process,sparsity,mape_ar,n_points,n_skipped
//! summary_table.csv                   rows = process, columns = sparsity
//! <process>/truth.csv                 t,y
//! <process>/<sparsity>/observations.csv   t,y
//! <process>/<sparsity>/reconstruction.csv t,mean,var,draw1,draw2
//! <process>/<sparsity>/report.json    EvalReport
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::evaluate::{mape_ar, EvalReport};
use crate::gpr::{GpPosterior, Reconstruction};
use crate::io::{observations_csv, reconstruction_csv, time_series_csv};
use crate::rng::task_seed;
use crate::simulate::{sample_gp_prior, sparsify, Observations, TimeSeries};

/// One (process, sparsity) result.
#[derive(Debug, Clone)]
pub struct Cell {
    pub process: String,
    pub sparsity: f64,
    pub observations: Observations<f64>,
    pub reconstruction: Reconstruction<f64>,
    pub report: EvalReport<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    /// Truth series per process, in config order.
    pub truths: Vec<(String, TimeSeries<f64>)>,
    /// Cells ordered by process, then sparsity.
    pub cells: Vec<Cell>,
}

impl ExperimentOutput {
    pub fn cell(&self, process: &str, sparsity: f64) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.process == process && c.sparsity == sparsity)
    }
}

/// Computes every cell without touching the filesystem.
pub fn run_cells(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let truths: Vec<(String, TimeSeries<f64>)> = config
        .processes
        .par_iter()
        .enumerate()
        .map(|(pi, proc_)| {
            let seed = task_seed(config.seeds.simulation, pi as u64);
            let mut draws = sample_gp_prior(&proc_.params, &config.grid, config.noise_sd, seed, 1)?;
            Ok((proc_.name.clone(), draws.remove(0)))
        })
        .collect::<Result<_>>()?;

    let tasks: Vec<(usize, usize)> = (0..config.processes.len())
        .flat_map(|pi| (0..config.sparsity.len()).map(move |si| (pi, si)))
        .collect();
    let times = config.grid.times();

    let cells = tasks
        .par_iter()
        .enumerate()
        .map(|(ci, &(pi, si))| {
            let proc_ = &config.processes[pi];
            let truth = &truths[pi].1;
            let fraction = config.sparsity[si];
            let obs = sparsify(
                truth,
                fraction,
                config.min_gap,
                task_seed(config.seeds.sparsify, ci as u64),
            )?;
            let gp = GpPosterior::fit(&obs, &proc_.params, config.gp_noise2)?;
            let reconstruction = gp.reconstruct(
                &times,
                config.draws,
                task_seed(config.seeds.sampling, ci as u64),
            )?;
            let mean_series = TimeSeries::new(config.grid, reconstruction.mean.clone())?;
            let report = mape_ar(&mean_series, &obs, &config.secondary, &config.eval)?;
            Ok(Cell {
                process: proc_.name.clone(),
                sparsity: fraction,
                observations: obs,
                reconstruction,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentOutput {
        config: config.clone(),
        truths,
        cells,
    })
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    rng: &'static str,
    master_seed: u64,
    seeds: crate::rng::StageSeeds,
    config: &'a ExperimentConfig,
    files: Vec<String>,
}

fn sparsity_label(f: f64) -> String {
    format!("{f}")
}

/// Serializes every output file into memory, keyed by relative path.
pub fn render_outputs(output: &ExperimentOutput) -> Result<BTreeMap<PathBuf, String>> {
    let mut files = BTreeMap::new();
    for (name, truth) in &output.truths {
        files.insert(Path::new(name).join("truth.csv"), time_series_csv(truth));
    }
    let mut summary = String::from("process,sparsity,mape_ar,n_points,n_skipped\n");
    for cell in &output.cells {
        let dir = Path::new(&cell.process).join(sparsity_label(cell.sparsity));
        files.insert(
            dir.join("observations.csv"),
            observations_csv(&cell.observations),
        );
        files.insert(
            dir.join("reconstruction.csv"),
            reconstruction_csv(&cell.reconstruction),
        );
        let mut report =
            serde_json::to_string_pretty(&cell.report).map_err(std::io::Error::other)?;
        report.push('\n');
        files.insert(dir.join("report.json"), report);
        summary.push_str(&format!(
            "{},{},{},{},{}\n",
            cell.process,
            sparsity_label(cell.sparsity),
            cell.report.mape_ar,
            cell.report.n_points(),
            cell.report.skipped.len()
        ));
    }
    files.insert(PathBuf::from("summary.csv"), summary);

    let mut table = String::from("process");
    for f in &output.config.sparsity {
        table.push_str(&format!(",{}", sparsity_label(*f)));
    }
    table.push('\n');
    for p in &output.config.processes {
        table.push_str(&p.name);
        for &f in &output.config.sparsity {
            let cell = output.cell(&p.name, f).expect("every cell computed");
            table.push_str(&format!(",{}", cell.report.mape_ar));
        }
        table.push('\n');
    }
    files.insert(PathBuf::from("summary_table.csv"), table);

    let mut listed: Vec<String> = files
        .keys()
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    listed.push("manifest.json".into());
    listed.sort();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        rng: "ChaCha8 (seed_from_u64), StandardNormal ziggurat",
        master_seed: output.config.master_seed,
        seeds: output.config.seeds,
        config: &output.config,
        files: listed,
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    text.push('\n');
    files.insert(PathBuf::from("manifest.json"), text);
    Ok(files)
}

/// Writes `files` under `out_dir`. On failure everything created by this
/// call is removed again.
pub fn write_outputs(files: &BTreeMap<PathBuf, String>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut created_dirs: Vec<PathBuf> = Vec::new();
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        for (rel, contents) in files {
            let path = out_dir.join(rel);
            if let Some(parent) = path.parent() {
                create_dirs(parent, &mut created_dirs)?;
            }
            fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(written),
        Err(e) => {
            for f in &written {
                let _ = fs::remove_file(f);
            }
            for d in created_dirs.iter().rev() {
                let _ = fs::remove_dir(d);
            }
            Err(e)
        }
    }
}

// create_dir_all that remembers which directories it made
fn create_dirs(dir: &Path, created: &mut Vec<PathBuf>) -> Result<()> {
    if dir.as_os_str().is_empty() || dir.is_dir() {
        return Ok(());
    }
    if let Some(parent) = dir.parent() {
        create_dirs(parent, created)?;
    }
    match fs::create_dir(dir) {
        Ok(()) => {
            created.push(dir.to_path_buf());
            Ok(())
        }
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists && dir.is_dir() => Ok(()),
        Err(e) => Err(Error::Io(e)),
    }
}

/// Runs the experiment and writes its output tree.
///
/// All cells are computed before anything is written, so a module error
/// leaves no files behind.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentOutput> {
    let output = run_cells(config)?;
    let files = render_outputs(&output)?;
    write_outputs(&files, out_dir)?;
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn small_run_shapes() {
        let config =
            parse_config("n = 120\nsparsity = [0.1]\ndraws = 1\nprocess = \"ou\"").unwrap();
        let out = run_cells(&config).unwrap();
        assert_eq!(out.cells.len(), 1);
        let cell = &out.cells[0];
        assert_eq!(cell.observations.len(), 12);
        assert_eq!(cell.reconstruction.draws.len(), 1);
        assert_eq!(cell.reconstruction.mean.len(), 120);
        let files = render_outputs(&out).unwrap();
        let names: Vec<String> = files
            .keys()
            .map(|p| p.to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            names,
            vec![
                "manifest.json",
                "ou/0.1/observations.csv",
                "ou/0.1/reconstruction.csv",
                "ou/0.1/report.json",
                "ou/truth.csv",
                "summary.csv",
                "summary_table.csv",
            ]
        );
        assert!(files[Path::new("ou/0.1/reconstruction.csv")].starts_with("t,mean,var,draw1\n"));
    }
}
