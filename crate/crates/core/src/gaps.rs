//! Ground-state gap scans, gap ensembles and the solution-probability flow.

use crate::eigen::{eig_full, eigvals_lowest};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{build_h1, DiagonalFinal, SymmetricOperator};
use crate::sat::SatInstance;
use crate::spectral::linear_slope;

pub const DEFAULT_GRID_STEP: f64 = 0.02;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_ISOLINE_LEVELS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Lowest two levels of `H(t)` and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub t: f64,
    pub e0: f64,
    pub e1: f64,
    pub delta: f64,
}

/// Evaluates `E_1(t) - E_0(t)` for one instance, reusing its `H(1)` diagonal.
#[derive(Debug, Clone)]
pub struct GapScanner {
    h1: DiagonalFinal,
}

impl GapScanner {
    pub fn new(instance: &SatInstance) -> Self {
        Self {
            h1: build_h1(instance),
        }
    }

    pub fn gap_at(&self, t: f64) -> Result<GapPoint> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("gap scan needs 0 < t < 1, got {t}")));
        }
        let op = SymmetricOperator::interpolate(&self.h1, t)?;
        let v = eigvals_lowest(&op, 2)?;
        let (e0, e1) = (v[0], v[1]);
        Ok(GapPoint {
            t,
            e0,
            e1,
            delta: e1 - e0,
        })
    }
}

pub fn gap_at(instance: &SatInstance, t: f64) -> Result<GapPoint> {
    GapScanner::new(instance).gap_at(t)
}

/// Location and size of an instance's minimal ground-state gap.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRecord {
    pub seed: u64,
    pub n: usize,
    pub alpha: f64,
    pub tries: u64,
    pub t_min: f64,
    pub delta: f64,
    pub grid_step: f64,
    pub tol: f64,
    /// Number of gap evaluations (grid plus refinement).
    pub evaluations: usize,
    /// Every grid point that is no larger than its neighbours, `(t, delta)`.
    pub local_minima: Vec<(f64, f64)>,
}

/// Uniform grid `grid_step, 2 grid_step, ..., 1 - grid_step`.
pub fn scan_grid(grid_step: f64) -> Vec<f64> {
    let count = ((1.0 - 2.0 * grid_step) / grid_step + 1e-9).floor() as usize + 1;
    (1..=count).map(|j| j as f64 * grid_step).collect()
}

/// Grid scan followed by golden-section refinement around the best grid point.
pub fn find_min_gap(instance: &SatInstance, grid_step: f64, tol: f64) -> Result<GapRecord> {
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(invalid(format!("grid_step {grid_step} outside (0, 0.05]")));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(invalid(format!("tol {tol} outside (0, 1e-4]")));
    }
    let scanner = GapScanner::new(instance);
    let grid = scan_grid(grid_step);
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| scanner.gap_at(t).map(|p| p.delta))
        .collect::<Result<_>>()?;
    let mut evaluations = values.len();

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let local_minima = (0..values.len())
        .filter(|&i| {
            (i == 0 || values[i] <= values[i - 1])
                && (i + 1 == values.len() || values[i] <= values[i + 1])
        })
        .map(|i| (grid[i], values[i]))
        .collect();
    if best == 0 || best + 1 == grid.len() {
        return Err(Error::BoundaryMinimum {
            t: grid[best],
            delta: values[best],
        });
    }

    // Golden-section search on [t_best - step, t_best + step].
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = scanner.gap_at(c)?.delta;
    let mut fd = scanner.gap_at(d)?.delta;
    evaluations += 2;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = scanner.gap_at(c)?.delta;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = scanner.gap_at(d)?.delta;
        }
        evaluations += 1;
    }
    let (mut t_min, mut delta) = if fc < fd { (c, fc) } else { (d, fd) };
    if values[best] < delta {
        t_min = grid[best];
        delta = values[best];
    }

    Ok(GapRecord {
        seed: instance.seed(),
        n: instance.n(),
        alpha: instance.alpha(),
        tries: instance.tries(),
        t_min,
        delta,
        grid_step,
        tol,
        evaluations,
        local_minima,
    })
}

/// Order statistics of an ensemble of minimal gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleGapStats {
    pub n: usize,
    pub alpha: f64,
    pub count: usize,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `delta / mean`, in record order.
    pub normalized: Vec<f64>,
}

impl EnsembleGapStats {
    /// Fraction of normalized gaps strictly below `s`.
    pub fn fraction_below(&self, s: f64) -> f64 {
        self.normalized.iter().filter(|&&x| x < s).count() as f64 / self.count as f64
    }
}

pub fn ensemble_stats(records: &[GapRecord]) -> Result<EnsembleGapStats> {
    let gaps: Vec<f64> = records.iter().map(|r| r.delta).collect();
    let first = records.first().ok_or_else(|| invalid("no gap records"))?;
    if let Some(r) = records
        .iter()
        .find(|r| r.n != first.n || (r.alpha - first.alpha).abs() > 1e-12)
    {
        return Err(invalid(format!(
            "mixed ensemble: (n={}, alpha={}) and (n={}, alpha={})",
            first.n, first.alpha, r.n, r.alpha
        )));
    }
    let mut stats = stats_from_gaps(&gaps)?;
    stats.n = first.n;
    stats.alpha = first.alpha;
    Ok(stats)
}

/// Statistics of raw gap values; `n` and `alpha` are left at zero.
pub fn stats_from_gaps(gaps: &[f64]) -> Result<EnsembleGapStats> {
    if gaps.len() < 2 {
        return Err(invalid(format!("need at least 2 gaps, got {}", gaps.len())));
    }
    let mut sorted = gaps.to_vec();
    sorted.sort_by(f64::total_cmp);
    let count = sorted.len();
    let median = if count % 2 == 1 {
        sorted[count / 2]
    } else {
        0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
    };
    let mean = gaps.iter().sum::<f64>() / count as f64;
    Ok(EnsembleGapStats {
        n: 0,
        alpha: 0.0,
        count,
        median,
        mean,
        min: sorted[0],
        max: sorted[count - 1],
        normalized: gaps.iter().map(|g| g / mean).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub median_over_n: f64,
    pub mean_over_n: f64,
    pub min_over_n: f64,
    pub max_over_n: f64,
    /// `1 / (2 sqrt(2^n))`.
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Decay rate `r` of a fit `median/n ~ exp(-r n)`.
    pub fitted_rate: f64,
    /// `ln 2 / 2`, the rate of the `1/(2 sqrt N)` line.
    pub reference_rate: f64,
}

pub fn scaling_table(stats: &[EnsembleGapStats]) -> Result<ScalingTable> {
    let mut rows: Vec<ScalingRow> = stats
        .iter()
        .map(|s| {
            let n = s.n as f64;
            ScalingRow {
                n: s.n,
                median_over_n: s.median / n,
                mean_over_n: s.mean / n,
                min_over_n: s.min / n,
                max_over_n: s.max / n,
                reference: 0.5 / 2f64.powf(n / 2.0),
            }
        })
        .collect();
    rows.sort_by_key(|r| r.n);
    let mut distinct: Vec<usize> = rows.iter().map(|r| r.n).collect();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(invalid(format!(
            "scaling fit needs at least 3 distinct n, got {}",
            distinct.len()
        )));
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.median_over_n.ln()))
        .collect();
    let slope = linear_slope(&pts).ok_or_else(|| Error::Fit("degenerate scaling data".into()))?;
    Ok(ScalingTable {
        rows,
        fitted_rate: -slope,
        reference_rate: std::f64::consts::LN_2 / 2.0,
    })
}

/// `p(i, t) = sum_{j >= i} |<sol|psi_j(t)>|^2` on a grid of times.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMap {
    pub dim: usize,
    pub times: Vec<f64>,
    /// One column per time, each of length `dim + 1` (the last entry is `p(N, t) = 0`).
    pub columns: Vec<Vec<f64>>,
}

impl FlowMap {
    pub fn p(&self, i: usize, time_index: usize) -> f64 {
        self.columns[time_index][i]
    }
}

/// Suffix sums of squared solution-index components for one time.
pub fn flow_column(instance: &SatInstance, t: f64) -> Result<Vec<f64>> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!(
            "flow times must lie in (0, 1], got {t}"
        )));
    }
    let op = crate::hamiltonian::build_ht(instance, t)?;
    let es = eig_full(&op)?;
    let sol = instance.solution().index();
    let dim = es.dim();
    let mut col = vec![0.0; dim + 1];
    for i in (0..dim).rev() {
        let c = es.vector(i)[sol];
        col[i] = col[i + 1] + c * c;
    }
    Ok(col)
}

pub fn probability_flow(instance: &SatInstance, t_grid: &[f64]) -> Result<FlowMap> {
    let columns = t_grid
        .iter()
        .map(|&t| flow_column(instance, t))
        .collect::<Result<_>>()?;
    Ok(FlowMap {
        dim: instance.dim(),
        times: t_grid.to_vec(),
        columns,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Isoline {
    pub level: f64,
    /// `(t, i)` per time column: the smallest `i` with `p(i, t) <= level`.
    pub points: Vec<(f64, usize)>,
}

pub fn flow_isolines(flow: &FlowMap, levels: &[f64]) -> Result<Vec<Isoline>> {
    if let Some(l) = levels.iter().find(|l| !(**l >= 0.0)) {
        return Err(invalid(format!("isoline level {l} must be non-negative")));
    }
    Ok(levels
        .iter()
        .map(|&level| Isoline {
            level,
            points: flow
                .times
                .iter()
                .zip(&flow.columns)
                .map(|(&t, col)| (t, col.iter().position(|&p| p <= level).unwrap_or(flow.dim)))
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::generate_single_solution_instance;

    fn inst(n: usize, alpha: f64, seed: u64) -> SatInstance {
        generate_single_solution_instance(n, alpha, seed, 100_000).unwrap()
    }

    fn record(delta: f64) -> GapRecord {
        GapRecord {
            seed: 0,
            n: 8,
            alpha: 3.0,
            tries: 1,
            t_min: 0.5,
            delta,
            grid_step: 0.02,
            tol: 1e-6,
            evaluations: 0,
            local_minima: vec![],
        }
    }

    #[test]
    fn grid_covers_open_interval() {
        let g = scan_grid(0.02);
        assert_eq!(g.len(), 49);
        assert!((g[0] - 0.02).abs() < 1e-15 && (g[48] - 0.98).abs() < 1e-12);
        assert_eq!(scan_grid(0.05).len(), 19);
    }

    #[test]
    fn gap_limits() {
        let i = inst(8, 3.0, 2);
        let near0 = gap_at(&i, 1e-6).unwrap();
        assert!((near0.delta - 1.0).abs() < 1e-4, "{near0:?}");
        let near1 = gap_at(&i, 1.0 - 1e-7).unwrap();
        let expect = 4.0 / i.alpha() * i.min_nonsolution_violations() as f64;
        assert!((near1.delta - expect).abs() < 1e-4, "{near1:?} vs {expect}");
        assert!(gap_at(&i, 0.0).is_err() && gap_at(&i, 1.0).is_err());
    }

    #[test]
    fn min_gap_is_below_grid_and_stable() {
        let i = inst(8, 3.0, 5);
        let rec = find_min_gap(&i, 0.02, 1e-6).unwrap();
        assert!(rec.delta > 0.0 && rec.t_min > 0.0 && rec.t_min < 1.0);
        for &t in &scan_grid(0.02) {
            assert!(rec.delta <= gap_at(&i, t).unwrap().delta + 1e-12);
        }
        let fine = find_min_gap(&i, 0.01, 1e-6).unwrap();
        assert!(
            (fine.delta - rec.delta).abs() < 1e-6,
            "{} vs {}",
            fine.delta,
            rec.delta
        );
        assert_eq!(find_min_gap(&i, 0.02, 1e-6).unwrap(), rec);
        assert!(!rec.local_minima.is_empty());
    }

    #[test]
    fn min_gap_rejects_bad_parameters() {
        let i = inst(6, 3.0, 1);
        assert!(find_min_gap(&i, 0.1, 1e-6).is_err());
        assert!(find_min_gap(&i, 0.02, 1e-3).is_err());
    }

    #[test]
    fn ensemble_examples() {
        let s = ensemble_stats(&[record(1.0), record(3.0)]).unwrap();
        assert_eq!((s.mean, s.median, s.min, s.max), (2.0, 2.0, 1.0, 3.0));
        assert_eq!(s.normalized, vec![0.5, 1.5]);
        let flat = ensemble_stats(&vec![record(0.2); 5]).unwrap();
        assert!(flat.normalized.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        let mut other = record(1.0);
        other.n = 10;
        assert!(ensemble_stats(&[record(1.0), other]).is_err());
        assert!(ensemble_stats(&[record(1.0)]).is_err());
        let odd = ensemble_stats(&[record(5.0), record(1.0), record(2.0)]).unwrap();
        assert_eq!(odd.median, 2.0);
        let norm_mean = odd.normalized.iter().sum::<f64>() / 3.0;
        assert!((norm_mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_fit_recovers_reference_rate() {
        let stats: Vec<EnsembleGapStats> = (6..=14)
            .map(|n| {
                let med = n as f64 * 0.5 / 2f64.powf(n as f64 / 2.0);
                EnsembleGapStats {
                    n,
                    alpha: 3.0,
                    count: 3,
                    median: med,
                    mean: med,
                    min: med,
                    max: med,
                    normalized: vec![1.0; 3],
                }
            })
            .collect();
        let table = scaling_table(&stats).unwrap();
        assert!((table.fitted_rate - table.reference_rate).abs() < 1e-9);
        for r in &table.rows {
            assert!((r.median_over_n - r.reference).abs() < 1e-15);
        }
        assert!(scaling_table(&stats[..2]).is_err());
    }

    #[test]
    fn flow_basic_properties() {
        let i = inst(6, 3.0, 4);
        let flow = probability_flow(&i, &[0.001, 0.3, 0.6, 1.0]).unwrap();
        for col in &flow.columns {
            assert!((col[0] - 1.0).abs() < 1e-9);
            assert_eq!(col[flow.dim], 0.0);
            assert!(col.windows(2).all(|w| w[0] >= w[1]));
        }
        let last = &flow.columns[3];
        assert!(last[1..].iter().all(|&p| p == 0.0));
        // Near t = 0 the solution spreads evenly over the H(0) levels, so at
        // each level boundary p(i) = 1 - i/N.
        let first = &flow.columns[0];
        let dim = flow.dim as f64;
        let mut boundary = 0usize;
        for k in 0..=6usize {
            assert!(
                (first[boundary] - (1.0 - boundary as f64 / dim)).abs() < 1e-2,
                "level {k}"
            );
            boundary += (0..k).fold(1, |acc, j| acc * (6 - j) / (j + 1));
        }
        assert!(probability_flow(&i, &[0.0]).is_err());
    }

    #[test]
    fn isoline_edge_levels() {
        let i = inst(6, 3.0, 4);
        let flow = probability_flow(&i, &[0.2, 0.5, 1.0]).unwrap();
        let iso = flow_isolines(&flow, &[1.5, 0.0]).unwrap();
        assert!(iso[0].points.iter().all(|&(_, k)| k == 0));
        assert_eq!(iso[1].points[0].1, flow.dim);
        assert_eq!(iso[1].points[2].1, 1);
        assert!(flow_isolines(&flow, &[-1.0]).is_err());
    }
}
