//! The six pipeline commands. Each one renders its outputs in memory, then
//! `run` writes them atomically into the output directory.
//!
//! Work items (instances, times) are evaluated on a rayon pool of `jobs`
//! threads and collected in input order, so results do not depend on the
//! thread count.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use adspec_core::entangle::{entropy_half, ppt_avg};
use adspec_core::gaps::{
    ensemble_stats, find_min_gap, flow_column, flow_isolines, scaling_table, FlowMap,
};
use adspec_core::hamiltonian::build_ht;
use adspec_core::sat::{generate_single_solution_instance, read_dimacs, write_dimacs};
use adspec_core::spectral::{cumulative, histogram, ks_distance, unfold};
use adspec_core::{
    eig_full, eigvals_full, EnsembleGapStats, Error, GapRecord, ReferenceLaw, SatInstance,
    SpacingSample, SpectralWindow, StateVector,
};
use rayon::prelude::*;

use crate::config::{Command, RunConfig, WindowSpec};
use crate::error::PipelineError;
use crate::output::{write_atomic, OutputFile, Table};

type Result<T> = std::result::Result<T, PipelineError>;

/// Normalized-gap threshold reported in the ensemble statistics.
pub const SMALL_GAP_THRESHOLD: f64 = 0.25;

/// Validates `config`, runs its command and writes the outputs. Returns the
/// written paths in a fixed order.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let files = execute(config)?;
    files.iter().map(|f| write_atomic(&config.out, f)).collect()
}

/// Runs the command without touching the output directory.
pub fn execute(config: &RunConfig) -> Result<Vec<OutputFile>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| PipelineError::Config {
            key: "jobs".into(),
            msg: e.to_string(),
        })?;
    pool.install(|| match config.command {
        Command::Generate => generate(config),
        Command::Spectrum => spectrum(config),
        Command::Stats => stats(config),
        Command::Entangle => entangle(config),
        Command::Gaps => gaps(config),
        Command::Flow => flow(config),
    })
}

fn seeds(config: &RunConfig) -> impl Iterator<Item = u64> + '_ {
    (0..config.count as u64).map(move |i| config.seed.wrapping_add(i))
}

/// The instance named by `instance`, or one generated from `(n, alpha, seed)`.
pub fn load_instance(config: &RunConfig) -> Result<SatInstance> {
    match &config.instance {
        Some(path) => {
            let bad = |msg: String| PipelineError::Config {
                key: "instance".into(),
                msg,
            };
            let file = File::open(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            let inst = read_dimacs(BufReader::new(file))
                .map_err(|e| bad(format!("{}: {e}", path.display())))?;
            if inst.n() > adspec_core::MAX_DENSE_QUBITS {
                return Err(bad(format!(
                    "instance has n = {}, above the dense limit",
                    inst.n()
                )));
            }
            Ok(inst)
        }
        None => Ok(generate_single_solution_instance(
            config.n[0],
            config.alpha[0],
            config.seed,
            config.max_tries,
        )?),
    }
}

fn generate(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let (n, alpha) = (config.n[0], config.alpha[0]);
    let seeds: Vec<u64> = seeds(config).collect();
    let results: Vec<(u64, std::result::Result<SatInstance, Error>)> = seeds
        .par_iter()
        .map(|&s| {
            (
                s,
                generate_single_solution_instance(n, alpha, s, config.max_tries),
            )
        })
        .collect();
    let mut files = Vec::new();
    let mut manifest = Table::new(
        "manifest.csv",
        &["seed", "n", "alpha", "m", "tries", "status", "file"],
    );
    for (seed, res) in results {
        match res {
            Ok(inst) => {
                let name = format!("inst_{seed}.cnf");
                let mut buf = Vec::new();
                write_dimacs(&inst, &mut buf)?;
                files.push(OutputFile {
                    name: name.clone(),
                    content: String::from_utf8(buf).expect("ascii"),
                });
                manifest.row(&[&seed, &n, &alpha, &inst.m(), &inst.tries(), &"ok", &name]);
            }
            Err(Error::GenerationFailed { tries }) => {
                manifest.row(&[&seed, &n, &alpha, &"", &tries, &"failed", &""]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    files.push(manifest.render(config));
    Ok(files)
}

fn spectrum(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let inst = load_instance(config)?;
    let times = config.t_grid.values();
    let spectra: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| Ok(eigvals_full(&build_ht(&inst, t)?)?))
        .collect::<Result<_>>()?;
    let mut table = Table::new("spectrum.csv", &["t", "index", "E"]);
    instance_notes(&mut table, &inst);
    for (t, spec) in times.iter().zip(&spectra) {
        for (i, e) in spec.iter().enumerate() {
            table.row(&[t, &i, e]);
        }
    }
    Ok(vec![table.render(config)])
}

fn instance_notes(table: &mut Table, inst: &SatInstance) {
    table.note("instance_seed", inst.seed());
    table.note("instance_m", inst.m());
    table.note("solution", inst.solution());
}

fn stats(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let inst = load_instance(config)?;
    let spec = eigvals_full(&build_ht(&inst, config.t)?)?;
    let windows: Vec<(&str, SpectralWindow)> = match config.window {
        WindowSpec::Core => vec![(
            "core",
            SpectralWindow::central(&spec, config.core_fraction)?,
        )],
        WindowSpec::Low => vec![("low", SpectralWindow::low_energy(&spec)?)],
        WindowSpec::Both => vec![
            (
                "core",
                SpectralWindow::central(&spec, config.core_fraction)?,
            ),
            ("low", SpectralWindow::low_energy(&spec)?),
        ],
    };
    let mut files = Vec::new();
    let mut ks = Table::new("ks.csv", &["window", "law", "distance"]);
    instance_notes(&mut ks, &inst);
    for (label, w) in &windows {
        let sample = unfold(w)?;
        let fit = sample.fit();
        ks.note(
            &format!("{label}_levels"),
            format!("{}..{}", w.first_index(), w.first_index() + w.len()),
        );
        ks.note(
            &format!("{label}_energy"),
            format!("{}..{}", w.lo(), w.hi()),
        );
        ks.note(&format!("{label}_mean_spacing"), sample.mean());
        ks.note(&format!("{label}_clamped"), sample.clamped());
        ks.note(
            &format!("{label}_fit"),
            format!("{},{},{},{}", fit[0], fit[1], fit[2], fit[3]),
        );
        for law in ReferenceLaw::ALL {
            ks.row(&[label, &law.name(), &ks_distance(&sample, law)]);
        }
        files.extend(spacing_tables(config, label, &sample)?);
    }
    files.push(ks.render(config));
    Ok(files)
}

/// Histogram and empirical CDF of one spacing sample.
fn spacing_tables(
    config: &RunConfig,
    label: &str,
    sample: &SpacingSample,
) -> Result<Vec<OutputFile>> {
    let h = histogram(sample, config.bin_width, config.s_max)?;
    let mut hist = Table::new(format!("hist_{label}.csv"), &["s", "density"]);
    hist.note("samples", sample.len())
        .note("overflow_fraction", h.overflow);
    for (c, d) in h.centers.iter().zip(&h.densities) {
        hist.row(&[c, d]);
    }
    let mut cdf = Table::new(format!("cdf_{label}.csv"), &["s", "cdf"]);
    for (s, f) in cumulative(sample) {
        cdf.row(&[&s, &f]);
    }
    Ok(vec![hist.render(config), cdf.render(config)])
}

fn entangle(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let inst = load_instance(config)?;
    let times = config.t_grid.values();
    let maps: Vec<(Vec<f64>, Vec<f64>)> = times
        .par_iter()
        .map(|&t| {
            let es = eig_full(&build_ht(&inst, t)?)?;
            let mut ppt = Vec::with_capacity(es.count());
            let mut ent = Vec::with_capacity(es.count());
            for v in es.vectors() {
                let psi = StateVector::new(v.to_vec())?;
                ppt.push(ppt_avg(&psi)?);
                ent.push(entropy_half(&psi)?);
            }
            Ok((ppt, ent))
        })
        .collect::<Result<_>>()?;
    let mut ppt = Table::new("ppt.csv", &["t", "i", "value"]);
    let mut ent = Table::new("entropy.csv", &["t", "i", "value"]);
    instance_notes(&mut ppt, &inst);
    instance_notes(&mut ent, &inst);
    for (t, (p, e)) in times.iter().zip(&maps) {
        for (i, (pv, ev)) in p.iter().zip(e).enumerate() {
            ppt.row(&[t, &i, pv]);
            ent.row(&[t, &i, ev]);
        }
    }
    Ok(vec![ppt.render(config), ent.render(config)])
}

/// Result of one gap-ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub enum GapOutcome {
    Found(GapRecord),
    /// No single-solution instance within `max_tries`.
    NoInstance {
        n: usize,
        alpha: f64,
        seed: u64,
        tries: u64,
    },
    /// The grid minimum sat at an end of the scan, so no bracket exists.
    Boundary {
        n: usize,
        alpha: f64,
        seed: u64,
        t: f64,
        delta: f64,
    },
}

/// Minimal gaps for every `(n, alpha, seed)` combination, in that order.
pub fn gap_ensemble(config: &RunConfig) -> Result<Vec<GapOutcome>> {
    let items: Vec<(usize, f64, u64)> = config
        .n
        .iter()
        .flat_map(|&n| {
            config
                .alpha
                .iter()
                .flat_map(move |&a| seeds(config).map(move |s| (n, a, s)))
        })
        .collect();
    items
        .par_iter()
        .map(|&(n, alpha, seed)| {
            let inst = match generate_single_solution_instance(n, alpha, seed, config.max_tries) {
                Ok(i) => i,
                Err(Error::GenerationFailed { tries }) => {
                    return Ok(GapOutcome::NoInstance {
                        n,
                        alpha,
                        seed,
                        tries,
                    })
                }
                Err(e) => return Err(e.into()),
            };
            match find_min_gap(&inst, config.grid_step, config.tol) {
                Ok(r) => Ok(GapOutcome::Found(r)),
                Err(Error::BoundaryMinimum { t, delta }) => Ok(GapOutcome::Boundary {
                    n,
                    alpha,
                    seed,
                    t,
                    delta,
                }),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

/// Per-`(n, alpha)` statistics over the successful members, in first-seen order.
pub fn group_stats(outcomes: &[GapOutcome]) -> Result<Vec<EnsembleGapStats>> {
    let mut groups: Vec<Vec<GapRecord>> = Vec::new();
    for o in outcomes {
        if let GapOutcome::Found(r) = o {
            match groups
                .iter_mut()
                .find(|g| g[0].n == r.n && g[0].alpha == r.alpha)
            {
                Some(g) => g.push(r.clone()),
                None => groups.push(vec![r.clone()]),
            }
        }
    }
    groups
        .iter()
        .filter(|g| g.len() >= 2)
        .map(|g| Ok(ensemble_stats(g)?))
        .collect()
}

fn gaps(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let outcomes = gap_ensemble(config)?;
    let mut records = Table::new(
        "gaps.csv",
        &["seed", "n", "alpha", "t_min", "delta", "tries"],
    );
    let mut scans = Table::new(
        "gap_scans.csv",
        &[
            "seed",
            "n",
            "alpha",
            "evaluations",
            "grid_step",
            "tol",
            "local_minima",
        ],
    );
    let mut failures = Table::new(
        "gap_failures.csv",
        &["seed", "n", "alpha", "reason", "t", "delta", "tries"],
    );
    for o in &outcomes {
        match o {
            GapOutcome::Found(r) => {
                records.row(&[&r.seed, &r.n, &r.alpha, &r.t_min, &r.delta, &r.tries]);
                let minima: Vec<String> = r
                    .local_minima
                    .iter()
                    .map(|(t, d)| format!("{t}:{d}"))
                    .collect();
                scans.row(&[
                    &r.seed,
                    &r.n,
                    &r.alpha,
                    &r.evaluations,
                    &r.grid_step,
                    &r.tol,
                    &minima.join(";"),
                ]);
            }
            GapOutcome::NoInstance {
                n,
                alpha,
                seed,
                tries,
            } => {
                failures.row(&[
                    seed,
                    n,
                    alpha,
                    &"no_single_solution_instance",
                    &"",
                    &"",
                    tries,
                ]);
            }
            GapOutcome::Boundary {
                n,
                alpha,
                seed,
                t,
                delta,
            } => {
                failures.row(&[seed, n, alpha, &"boundary_minimum", t, delta, &""]);
            }
        }
    }
    let stats = group_stats(&outcomes)?;
    let mut summary = Table::new(
        "gap_stats.csv",
        &[
            "n",
            "alpha",
            "count",
            "median",
            "mean",
            "min",
            "max",
            "frac_below",
        ],
    );
    summary.note("frac_below_threshold", SMALL_GAP_THRESHOLD);
    let mut files = vec![
        records.render(config),
        scans.render(config),
        failures.render(config),
    ];
    for s in &stats {
        summary.row(&[
            &s.n,
            &s.alpha,
            &s.count,
            &s.median,
            &s.mean,
            &s.min,
            &s.max,
            &s.fraction_below(SMALL_GAP_THRESHOLD),
        ]);
        let sample = SpacingSample::from_spacings(s.normalized.clone())?;
        files.extend(
            spacing_tables(config, &format!("gaps_n{}_a{}", s.n, s.alpha), &sample)?
                .into_iter()
                .take(1),
        );
    }
    files.push(summary.render(config));
    for &alpha in &config.alpha {
        let same: Vec<EnsembleGapStats> =
            stats.iter().filter(|s| s.alpha == alpha).cloned().collect();
        let mut distinct: Vec<usize> = same.iter().map(|s| s.n).collect();
        distinct.dedup();
        if distinct.len() < 3 {
            continue;
        }
        let table = scaling_table(&same)?;
        let mut t = Table::new(
            format!("scaling_a{alpha}.csv"),
            &[
                "n",
                "median_over_n",
                "mean_over_n",
                "min_over_n",
                "max_over_n",
                "reference",
            ],
        );
        t.note("fitted_rate", table.fitted_rate)
            .note("reference_rate", table.reference_rate);
        for r in &table.rows {
            t.row(&[
                &r.n,
                &r.median_over_n,
                &r.mean_over_n,
                &r.min_over_n,
                &r.max_over_n,
                &r.reference,
            ]);
        }
        files.push(t.render(config));
    }
    Ok(files)
}

fn flow(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let inst = load_instance(config)?;
    let times = config.t_grid.values();
    let columns: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| Ok(flow_column(&inst, t)?))
        .collect::<Result<_>>()?;
    let map = FlowMap {
        dim: inst.dim(),
        times: times.clone(),
        columns,
    };
    let mut table = Table::new("flow.csv", &["t", "i", "p"]);
    instance_notes(&mut table, &inst);
    for (t, col) in times.iter().zip(&map.columns) {
        for (i, p) in col.iter().enumerate() {
            table.row(&[t, &i, p]);
        }
    }
    let mut files = vec![table.render(config)];
    for iso in flow_isolines(&map, &config.levels)? {
        let mut t = Table::new(format!("isoline_{:e}.csv", iso.level), &["t", "i"]);
        t.note("level", iso.level);
        for (time, i) in &iso.points {
            t.row(&[time, i]);
        }
        files.push(t.render(config));
    }
    Ok(files)
}
