//! Unfolding and nearest-neighbour spacing statistics.
//!
//! A window of sorted levels is unfolded by a least-squares cubic fit to its
//! staircase `(E_i, i + 1/2)`; the fitted polynomial maps levels to unit mean
//! density and the differences of mapped levels are the spacings compared
//! against Poisson, the GOE Wigner surmise and semi-Poisson.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Minimum number of levels in a window used for statistics.
pub const MIN_WINDOW_LEVELS: usize = 50;

/// Fraction of the spectrum taken as the central RMT core.
pub const CORE_FRACTION: f64 = 0.6;

/// Index of the first level in the low-energy window (the 8th lowest).
pub const LOW_ENERGY_START: usize = 7;

/// Fraction of all levels covered by the low-energy window.
pub const LOW_ENERGY_FRACTION: f64 = 1724.0 / 16384.0;

pub const DEFAULT_BIN_WIDTH: f64 = 0.1;
pub const DEFAULT_S_MAX: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow {
    energies: Vec<f64>,
    lo: f64,
    hi: f64,
    /// Index of the first selected level in the parent spectrum.
    first_index: usize,
}

impl SpectralWindow {
    /// Levels strictly inside `(lo, hi)`, taken from an ascending spectrum.
    pub fn by_energy(spectrum: &[f64], lo: f64, hi: f64) -> Result<Self> {
        check_sorted(spectrum)?;
        if !(lo < hi) {
            return Err(invalid(format!("window bounds {lo} >= {hi}")));
        }
        let first_index = spectrum.partition_point(|&e| e <= lo);
        let energies: Vec<f64> = spectrum[first_index..]
            .iter()
            .copied()
            .take_while(|&e| e < hi)
            .collect();
        Ok(Self {
            energies,
            lo,
            hi,
            first_index,
        })
    }

    /// Levels `spectrum[start..end]`, with bounds halfway to the neighbours.
    pub fn by_index(spectrum: &[f64], start: usize, end: usize) -> Result<Self> {
        check_sorted(spectrum)?;
        if start >= end || end > spectrum.len() {
            return Err(invalid(format!(
                "index window [{start}, {end}) invalid for {} levels",
                spectrum.len()
            )));
        }
        let energies = spectrum[start..end].to_vec();
        let width = (energies[energies.len() - 1] - energies[0]).abs().max(1.0);
        let lo = if start > 0 {
            0.5 * (spectrum[start - 1] + spectrum[start])
        } else {
            spectrum[0] - 1e-9 * width
        };
        let hi = if end < spectrum.len() {
            0.5 * (spectrum[end - 1] + spectrum[end])
        } else {
            spectrum[end - 1] + 1e-9 * width
        };
        // Degenerate neighbours would put a level on the boundary.
        let lo = if lo < energies[0] {
            lo
        } else {
            energies[0] - 1e-12 * width
        };
        let hi = if hi > energies[energies.len() - 1] {
            hi
        } else {
            energies[energies.len() - 1] + 1e-12 * width
        };
        Ok(Self {
            energies,
            lo,
            hi,
            first_index: start,
        })
    }

    /// Central [`CORE_FRACTION`] of the levels.
    pub fn rmt_core(spectrum: &[f64]) -> Result<Self> {
        Self::central(spectrum, CORE_FRACTION)
    }

    pub fn central(spectrum: &[f64], fraction: f64) -> Result<Self> {
        if !(0.0 < fraction && fraction <= 1.0) {
            return Err(invalid(format!("fraction {fraction} outside (0, 1]")));
        }
        let n = spectrum.len();
        let skip = ((1.0 - fraction) * n as f64 / 2.0).round() as usize;
        Self::by_index(spectrum, skip, n - skip)
    }

    /// From the 8th lowest level, covering [`LOW_ENERGY_FRACTION`] of the spectrum.
    pub fn low_energy(spectrum: &[f64]) -> Result<Self> {
        let count = (LOW_ENERGY_FRACTION * spectrum.len() as f64).round() as usize;
        let end = (LOW_ENERGY_START + count).min(spectrum.len());
        Self::by_index(spectrum, LOW_ENERGY_START, end)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

fn check_sorted(values: &[f64]) -> Result<()> {
    if values.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("spectrum is not sorted ascending"));
    }
    Ok(())
}

/// Unfolded nearest-neighbour spacings.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSample {
    spacings: Vec<f64>,
    mean: f64,
    /// Cubic coefficients `c0..c3` in the scaled variable `x = (E - center) / half_width`.
    fit: [f64; 4],
    center: f64,
    half_width: f64,
    clamped: usize,
}

impl SpacingSample {
    /// A sample from raw spacings, with no unfolding metadata.
    pub fn from_spacings(spacings: Vec<f64>) -> Result<Self> {
        if spacings.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(invalid("spacings must be finite and non-negative"));
        }
        let mean = if spacings.is_empty() {
            0.0
        } else {
            spacings.iter().sum::<f64>() / spacings.len() as f64
        };
        Ok(Self {
            spacings,
            mean,
            fit: [0.0; 4],
            center: 0.0,
            half_width: 1.0,
            clamped: 0,
        })
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn fit(&self) -> [f64; 4] {
        self.fit
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of negative unfolded spacings that were clamped to 0.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// Fitted staircase value at energy `e`.
    pub fn staircase(&self, e: f64) -> f64 {
        let x = (e - self.center) / self.half_width;
        self.fit[0] + x * (self.fit[1] + x * (self.fit[2] + x * self.fit[3]))
    }

    fn sorted(&self) -> Vec<f64> {
        let mut s = self.spacings.clone();
        s.sort_by(f64::total_cmp);
        s
    }
}

/// Cubic unfolding of a window.
pub fn unfold(window: &SpectralWindow) -> Result<SpacingSample> {
    let e = window.energies();
    if e.len() < MIN_WINDOW_LEVELS {
        return Err(Error::Unfolding(format!(
            "window has {} levels, need at least {MIN_WINDOW_LEVELS}",
            e.len()
        )));
    }
    let (emin, emax) = (e[0], e[e.len() - 1]);
    let center = 0.5 * (emin + emax);
    let half_width = 0.5 * (emax - emin);
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::Unfolding(
            "window energies are (nearly) constant".into(),
        ));
    }
    // Normal equations in the scaled variable, which stays within [-1, 1].
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [0.0f64; 4];
    for (i, &ei) in e.iter().enumerate() {
        let x = (ei - center) / half_width;
        let pow = [1.0, x, x * x, x * x * x];
        let y = i as f64 + 0.5;
        for r in 0..4 {
            atb[r] += pow[r] * y;
            for c in 0..4 {
                ata[r][c] += pow[r] * pow[c];
            }
        }
    }
    let fit = solve4(ata, atb).ok_or_else(|| Error::Unfolding("singular cubic fit".into()))?;
    let mut sample = SpacingSample {
        spacings: Vec::new(),
        mean: 0.0,
        fit,
        center,
        half_width,
        clamped: 0,
    };
    let unfolded: Vec<f64> = e.iter().map(|&ei| sample.staircase(ei)).collect();
    let mut clamped = 0;
    let spacings: Vec<f64> = unfolded
        .windows(2)
        .map(|w| {
            let s = w[1] - w[0];
            if s < 0.0 {
                clamped += 1;
                0.0
            } else {
                s
            }
        })
        .collect();
    sample.mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    sample.spacings = spacings;
    sample.clamped = clamped;
    Ok(sample)
}

/// Gaussian elimination with partial pivoting on a 4x4 system.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Reference nearest-neighbour spacing laws, all with unit mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceLaw {
    Poisson,
    WignerGoe,
    SemiPoisson,
}

impl ReferenceLaw {
    pub const ALL: [ReferenceLaw; 3] = [Self::Poisson, Self::WignerGoe, Self::SemiPoisson];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Poisson => "poisson",
            Self::WignerGoe => "wigner_goe",
            Self::SemiPoisson => "semi_poisson",
        }
    }

    /// Density without a domain check; `s` is assumed non-negative.
    pub fn density(&self, s: f64) -> f64 {
        match self {
            Self::Poisson => (-s).exp(),
            Self::WignerGoe => PI / 2.0 * s * (-PI * s * s / 4.0).exp(),
            Self::SemiPoisson => 4.0 * s * (-2.0 * s).exp(),
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Poisson => -(-s).exp_m1(),
            Self::WignerGoe => -(-PI * s * s / 4.0).exp_m1(),
            Self::SemiPoisson => 1.0 - (1.0 + 2.0 * s) * (-2.0 * s).exp(),
        }
    }
}

impl std::str::FromStr for ReferenceLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| invalid(format!("unknown reference law {s:?}")))
    }
}

pub fn reference_pdf(law: ReferenceLaw, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "spacing s = {s} must be non-negative"
        )));
    }
    Ok(law.density(s))
}

/// Density histogram of spacings on `[0, s_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub densities: Vec<f64>,
    /// Fraction of the sample at or beyond `s_max`.
    pub overflow: f64,
}

impl Histogram {
    /// Probability mass inside the binned range.
    pub fn integral(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.bin_width
    }
}

pub fn histogram(sample: &SpacingSample, bin_width: f64, s_max: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) || !(s_max > 0.0) {
        return Err(invalid(format!(
            "bin width {bin_width} and s_max {s_max} must be positive"
        )));
    }
    let bins = (s_max / bin_width).ceil() as usize;
    let mut counts = vec![0usize; bins];
    let mut over = 0usize;
    for &s in sample.spacings() {
        let b = (s / bin_width).floor() as usize;
        if s >= s_max || b >= bins {
            over += 1;
        } else {
            counts[b] += 1;
        }
    }
    let total = sample.len().max(1) as f64;
    Ok(Histogram {
        bin_width,
        centers: (0..bins).map(|b| (b as f64 + 0.5) * bin_width).collect(),
        densities: counts
            .iter()
            .map(|&c| c as f64 / (total * bin_width))
            .collect(),
        overflow: over as f64 / total,
    })
}

/// Empirical CDF at each distinct sample value, right-continuous.
pub fn cumulative(sample: &SpacingSample) -> Vec<(f64, f64)> {
    let sorted = sample.sorted();
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (i, &s) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 = frac,
            _ => out.push((s, frac)),
        }
    }
    out
}

/// Fraction of spacings `<= s`.
pub fn empirical_cdf_at(sample: &SpacingSample, s: f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    sample.spacings().iter().filter(|&&x| x <= s).count() as f64 / sample.len() as f64
}

/// Kolmogorov-Smirnov sup distance between the empirical CDF and `law`.
pub fn ks_distance(sample: &SpacingSample, law: ReferenceLaw) -> f64 {
    let sorted = sample.sorted();
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = law.cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    })
}

/// Log-log least-squares slope of the empirical CDF over spacings below `s_cut`.
pub fn small_s_exponent(sample: &SpacingSample, s_cut: f64) -> Result<f64> {
    const MIN_POINTS: usize = 30;
    let pts: Vec<(f64, f64)> = cumulative(sample)
        .into_iter()
        .filter(|&(s, _)| s > 0.0 && s < s_cut)
        .map(|(s, f)| (s.ln(), f.ln()))
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "{} positive spacings below s_cut = {s_cut}, need {MIN_POINTS}",
            pts.len()
        )));
    }
    linear_slope(&pts).ok_or_else(|| Error::Fit("degenerate log-log data".into()))
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn linear_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn reference_laws_normalized_with_unit_mean() {
        for law in ReferenceLaw::ALL {
            let norm = simpson(|s| law.density(s), 0.0, 60.0, 200_000);
            let mean = simpson(|s| s * law.density(s), 0.0, 60.0, 200_000);
            assert!((norm - 1.0).abs() < 1e-6, "{law:?} norm {norm}");
            assert!((mean - 1.0).abs() < 1e-6, "{law:?} mean {mean}");
        }
    }

    #[test]
    fn closed_form_cdfs_match_quadrature() {
        for law in ReferenceLaw::ALL {
            let worst = (1..=60)
                .map(|i| i as f64 * 0.1)
                .map(|s| (law.cdf(s) - simpson(|x| law.density(x), 0.0, s, 2000)).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9, "{law:?} {worst}");
        }
    }

    #[test]
    fn pdf_values() {
        assert_eq!(reference_pdf(ReferenceLaw::WignerGoe, 0.0).unwrap(), 0.0);
        assert_eq!(reference_pdf(ReferenceLaw::Poisson, 0.0).unwrap(), 1.0);
        let sp = reference_pdf(ReferenceLaw::SemiPoisson, 0.5).unwrap();
        assert!((sp - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(matches!(
            reference_pdf(ReferenceLaw::Poisson, -0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unfold_linear_spectrum_gives_unit_spacings() {
        let e: Vec<f64> = (0..200).map(|i| i as f64 * 0.37).collect();
        let w = SpectralWindow::by_index(&e, 0, e.len()).unwrap();
        let s = unfold(&w).unwrap();
        assert!(s.spacings().iter().all(|x| (x - 1.0).abs() < 1e-10));
        assert_eq!(s.clamped(), 0);
    }

    #[test]
    fn unfold_is_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut e: Vec<f64> = (0..500).map(|_| rng.gen::<f64>() * 10.0).collect();
        e.sort_by(f64::total_cmp);
        let a = unfold(&SpectralWindow::by_index(&e, 0, e.len()).unwrap()).unwrap();
        let t: Vec<f64> = e.iter().map(|x| 3.7 * x - 12.5).collect();
        let b = unfold(&SpectralWindow::by_index(&t, 0, t.len()).unwrap()).unwrap();
        for (x, y) in a.spacings().iter().zip(b.spacings()) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!((a.mean() - 1.0).abs() < 0.03, "{}", a.mean());
    }

    #[test]
    fn unfold_errors() {
        let e: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(matches!(
            unfold(&SpectralWindow::by_index(&e, 0, 10).unwrap()),
            Err(Error::Unfolding(_))
        ));
        let flat = vec![1.0; 80];
        assert!(matches!(
            unfold(&SpectralWindow::by_index(&flat, 0, 80).unwrap()),
            Err(Error::Unfolding(_))
        ));
    }

    #[test]
    fn windows() {
        let e: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let core = SpectralWindow::rmt_core(&e).unwrap();
        assert_eq!(core.len(), 600);
        assert_eq!(core.first_index(), 200);
        assert!(core
            .energies()
            .iter()
            .all(|&x| x > core.lo() && x < core.hi()));
        let low = SpectralWindow::low_energy(&e).unwrap();
        assert_eq!(low.first_index(), 7);
        assert_eq!(low.len(), 105);
        let by_e = SpectralWindow::by_energy(&e, 10.5, 20.0).unwrap();
        assert_eq!(
            by_e.energies(),
            &(11..20).map(|i| i as f64).collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn histogram_normalization() {
        let sample = SpacingSample::from_spacings(vec![0.05, 0.3, 0.31, 1.2, 2.0]).unwrap();
        let h = histogram(&sample, 0.1, 4.0).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-9);
        assert_eq!(h.overflow, 0.0);
        let tail = SpacingSample::from_spacings(vec![0.5, 5.0]).unwrap();
        let h = histogram(&tail, 0.1, 4.0).unwrap();
        assert!((h.integral() - 0.5).abs() < 1e-12);
        assert!((h.overflow - 0.5).abs() < 1e-12);
        let ones = SpacingSample::from_spacings(vec![1.0; 20]).unwrap();
        let h = histogram(&ones, 0.1, 4.0).unwrap();
        assert_eq!(h.densities.iter().filter(|&&d| d > 0.0).count(), 1);
        assert!(histogram(&ones, 0.0, 4.0).is_err());
    }

    #[test]
    fn histogram_of_exponential_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sample = SpacingSample::from_spacings(draws).unwrap();
        let w = 0.1;
        let h = histogram(&sample, w, 4.0).unwrap();
        for (c, d) in h.centers.iter().zip(&h.densities) {
            let p = (-(c - w / 2.0)).exp() - (-(c + w / 2.0)).exp();
            let sigma = (p * (1.0 - p) / n as f64).sqrt() / w;
            assert!(
                (d - p / w).abs() <= 3.5 * sigma + 1e-12,
                "bin {c}: {d} vs {}",
                p / w
            );
        }
    }

    #[test]
    fn cumulative_examples() {
        let s = SpacingSample::from_spacings(vec![2.0, 1.0, 3.0]).unwrap();
        let c = cumulative(&s);
        assert_eq!(c, vec![(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0), (3.0, 1.0)]);
        let dup = SpacingSample::from_spacings(vec![1.0, 1.0, 2.0, 0.5]).unwrap();
        assert_eq!(cumulative(&dup).last().unwrap().1, 1.0);
        assert_eq!(cumulative(&dup)[1], (1.0, 0.75));
    }

    #[test]
    fn ks_distance_calibration() {
        // Inverse-CDF draws from each law; D stays below 0.02 at n = 1e4.
        let inv = |law: ReferenceLaw, u: f64| {
            if law == ReferenceLaw::Poisson {
                -(1.0 - u).ln()
            } else {
                (-4.0 / PI * (1.0 - u).ln()).sqrt()
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for law in [ReferenceLaw::Poisson, ReferenceLaw::WignerGoe] {
            let draws: Vec<f64> = (0..10_000).map(|_| inv(law, rng.gen())).collect();
            let d = ks_distance(&SpacingSample::from_spacings(draws).unwrap(), law);
            assert!(d < 0.02, "{law:?} {d}");
        }
        // A sum of two rate-2 exponentials is semi-Poisson distributed.
        let draws: Vec<f64> = (0..10_000)
            .map(|_| -0.5 * (1.0 - rng.gen::<f64>()).ln() - 0.5 * (1.0 - rng.gen::<f64>()).ln())
            .collect();
        let d = ks_distance(
            &SpacingSample::from_spacings(draws).unwrap(),
            ReferenceLaw::SemiPoisson,
        );
        assert!(d < 0.02, "semi-poisson {d}");
    }

    #[test]
    fn ks_distance_of_rigid_sample() {
        let s = SpacingSample::from_spacings(vec![1.0; 100]).unwrap();
        let d = ks_distance(&s, ReferenceLaw::Poisson);
        assert!((d - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn small_s_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s_cut = 0.1;
        let quad: Vec<f64> = (0..400).map(|_| s_cut * rng.gen::<f64>().sqrt()).collect();
        let e = small_s_exponent(&SpacingSample::from_spacings(quad).unwrap(), s_cut).unwrap();
        assert!((e - 2.0).abs() < 0.15, "{e}");
        let lin: Vec<f64> = (0..400).map(|_| s_cut * rng.gen::<f64>()).collect();
        let e = small_s_exponent(&SpacingSample::from_spacings(lin).unwrap(), s_cut).unwrap();
        assert!((e - 1.0).abs() < 0.1, "{e}");
        let few = SpacingSample::from_spacings(vec![0.01; 10]).unwrap();
        assert!(matches!(small_s_exponent(&few, s_cut), Err(Error::Fit(_))));
    }
}
