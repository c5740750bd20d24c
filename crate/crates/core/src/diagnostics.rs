//! Statistical machinery for judging uniformity: chi-square frequency tests,
//! cell-transition (serial correlation) statistics, nested-simplex volume
//! fractions, simplex vertex partitions, and corner-escape statistics.

pub mod escape;
pub mod reference;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pearson chi-square summary for one partition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
}

impl ChiSquareResult {
    pub fn passes(&self, band: (f64, f64)) -> bool {
        self.statistic >= band.0 && self.statistic <= band.1
    }
}

/// `sum (o_i - e_i)^2 / e_i` with `dof = bins - 1`.
pub fn chi_square_statistic(observed: &[f64], expected: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::InvalidPartition(
            "observed and expected counts must have equal, nonzero length".into(),
        ));
    }
    if expected.iter().any(|&e| e <= 0.0) {
        return Err(Error::InvalidPartition("zero expected cell".into()));
    }
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o - e) * (o - e) / e)
        .sum();
    Ok(ChiSquareResult {
        statistic,
        dof: observed.len() - 1,
        observed: observed.to_vec(),
        expected: expected.to_vec(),
    })
}

/// Reference acceptance band for 9 degrees of freedom at 10% two-tailed
/// significance.
pub const CHI_SQUARE_BAND_9DOF: (f64, f64) = (3.3, 16.9);

/// Two-tailed 10% acceptance band `[q(0.05), q(0.95)]` for the chi-square
/// distribution with `dof` degrees of freedom.
pub fn chi_square_band(dof: usize) -> (f64, f64) {
    (
        chi_square_quantile(dof, 0.05),
        chi_square_quantile(dof, 0.95),
    )
}

pub fn chi_square_cdf(dof: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(dof as f64 / 2.0, x / 2.0)
}

pub fn chi_square_quantile(dof: usize, p: f64) -> f64 {
    assert!((0.0..1.0).contains(&p));
    let mut hi = dof as f64 + 10.0 * (2.0 * dof as f64).sqrt() + 10.0;
    while chi_square_cdf(dof, hi) < p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi_square_cdf(dof, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * (1.0 + hi) {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn ln_gamma(z: f64) -> f64 {
    // Lanczos, g = 7
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Regularized lower incomplete gamma `P(a, x)` by series / continued
/// fraction.
fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let log_prefix = -x + a * x.ln() - ln_gamma(a);
    if x < a + 1.0 {
        // series expansion
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..500 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + log_prefix).exp()
    } else {
        // modified Lentz continued fraction for Q(a, x)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (h.ln() + log_prefix).exp()
    }
}

/// Partition of a body into cells of equal volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionSpec {
    /// `2^n` subcubes of the unit cube, halving every axis.
    CubeHalving { n: usize },
    /// `bins` equal-volume slabs of the unit cube along one axis.
    AxisSlabs { axis: usize, bins: usize },
    /// Nested-simplex shells `S_{a_i} \ S_{a_{i+1}}` of equal volume.
    NestedSimplex { n: usize, levels: usize },
    /// Nearest-vertex cells `Q_i` of the standard simplex.
    SimplexVertexCells { n: usize },
}

impl PartitionSpec {
    pub fn cells(&self) -> usize {
        match self {
            PartitionSpec::CubeHalving { n } => 1usize << n,
            PartitionSpec::AxisSlabs { bins, .. } => *bins,
            PartitionSpec::NestedSimplex { levels, .. } => *levels,
            PartitionSpec::SimplexVertexCells { n } => n + 1,
        }
    }

    /// Cell counts over a sample set.
    pub fn counts(&self, samples: &[Vec<f64>]) -> Result<Vec<u64>> {
        match self {
            PartitionSpec::CubeHalving { n } => {
                let mut counts = vec![0u64; 1usize << n.min(&63).to_owned()];
                for p in samples {
                    counts[cube_halving_cell(p)? as usize] += 1;
                }
                Ok(counts)
            }
            PartitionSpec::AxisSlabs { axis, bins } => slab_histogram(samples, *axis, *bins),
            PartitionSpec::NestedSimplex { n, levels } => {
                let alphas = nested_simplex_partition(*n, *levels);
                nested_shell_counts(samples, &alphas)
            }
            PartitionSpec::SimplexVertexCells { n } => simplex_vertex_cells(samples, *n),
        }
    }
}

/// Counts per equal-volume slab `floor(x_axis * bins)` of the unit cube.
pub fn slab_histogram(samples: &[Vec<f64>], axis: usize, bins: usize) -> Result<Vec<u64>> {
    if bins == 0 {
        return Err(Error::InvalidPartition("zero slabs".into()));
    }
    let mut counts = vec![0u64; bins];
    for p in samples {
        let x = *p.get(axis).ok_or(Error::DimensionMismatch {
            expected: axis + 1,
            got: p.len(),
        })?;
        if !(0.0..1.0).contains(&x) {
            return Err(Error::OutOfBody);
        }
        counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
    }
    Ok(counts)
}

/// Index of the halving subcube containing `p`: bit `i` set when
/// `p_i >= 1/2`.
pub fn cube_halving_cell(p: &[f64]) -> Result<u64> {
    if p.len() > 63 {
        return Err(Error::InvalidPartition(
            "cube halving limited to n <= 63".into(),
        ));
    }
    let mut cell = 0u64;
    for (i, &x) in p.iter().enumerate() {
        if x >= 0.5 {
            cell |= 1 << i;
        }
    }
    Ok(cell)
}

/// Cell-transition statistic over consecutive samples against the halving
/// partition. `leave` is the empirical probability that consecutive points
/// fall in different cells; for independent uniforms it is `1 - 2^-n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SerialCorrelation {
    pub leave: f64,
    pub stay: f64,
    pub pairs: u64,
    pub reference_leave: f64,
}

pub fn serial_correlation(samples: &[Vec<f64>], n: usize) -> Result<SerialCorrelation> {
    if samples.len() < 2 {
        return Err(Error::InvalidPartition(
            "serial correlation needs at least two samples".into(),
        ));
    }
    let mut moved = 0u64;
    let mut prev = cube_halving_cell(&samples[0])?;
    for p in &samples[1..] {
        let cell = cube_halving_cell(p)?;
        if cell != prev {
            moved += 1;
        }
        prev = cell;
    }
    let pairs = (samples.len() - 1) as u64;
    let leave = moved as f64 / pairs as f64;
    Ok(SerialCorrelation {
        leave,
        stay: 1.0 - leave,
        pairs,
        reference_leave: 1.0 - 0.5f64.powi(n as i32),
    })
}

/// Volume fraction of the nested simplex `S_alpha`:
/// `f(alpha) = (1 - (n+1) alpha)^n`.
pub fn simplex_volume_fraction(n: usize, alpha: f64) -> f64 {
    (1.0 - (n as f64 + 1.0) * alpha).powi(n as i32)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaFraction {
    pub alpha: f64,
    pub empirical: f64,
    pub theoretical: f64,
}

/// Empirical fraction of samples inside `S_alpha` (minimum coordinate at
/// least `alpha`), paired with the theoretical `f(alpha)`.
pub fn nested_simplex_fraction(samples: &[Vec<f64>], alphas: &[f64]) -> Result<Vec<AlphaFraction>> {
    let Some(first) = samples.first() else {
        return Err(Error::InvalidPartition("no samples".into()));
    };
    let n = first.len() - 1;
    let hi = 1.0 / (n as f64 + 1.0);
    if alphas.iter().any(|&a| !(0.0..=hi + 1e-15).contains(&a)) {
        return Err(Error::InvalidPartition(format!(
            "alpha must lie in [0, 1/(n+1)] = [0, {hi}]"
        )));
    }
    let mins: Vec<f64> = samples
        .iter()
        .map(|p| p.iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let inside = mins.iter().filter(|&&m| m >= alpha).count();
            AlphaFraction {
                alpha,
                empirical: inside as f64 / samples.len() as f64,
                theoretical: simplex_volume_fraction(n, alpha),
            }
        })
        .collect())
}

/// Alpha levels `a_0 = 0 < ... < a_k = 1/(n+1)` with
/// `f(a_i) = 1 - i/k`: equal-volume shells.
pub fn nested_simplex_partition(n: usize, k: usize) -> Vec<f64> {
    let np1 = n as f64 + 1.0;
    (0..=k)
        .map(|i| (1.0 - (1.0 - i as f64 / k as f64).powf(1.0 / n as f64)) / np1)
        .collect()
}

/// Shell counts against the levels from [`nested_simplex_partition`]:
/// shell `i` holds samples with minimum coordinate in `[a_i, a_{i+1})`.
pub fn nested_shell_counts(samples: &[Vec<f64>], alphas: &[f64]) -> Result<Vec<u64>> {
    if alphas.len() < 2 {
        return Err(Error::InvalidPartition("need at least two levels".into()));
    }
    let k = alphas.len() - 1;
    let mut counts = vec![0u64; k];
    for p in samples {
        let m = p.iter().cloned().fold(f64::INFINITY, f64::min);
        if m < 0.0 {
            return Err(Error::OutOfBody);
        }
        // largest i with alpha_i <= m
        let mut shell = 0;
        for (i, &a) in alphas.iter().enumerate().skip(1) {
            if m >= a {
                shell = i;
            } else {
                break;
            }
        }
        counts[shell.min(k - 1)] += 1;
    }
    Ok(counts)
}

/// Nearest-vertex cell counts: each sample goes to its largest coordinate
/// (ties to the lowest index).
pub fn simplex_vertex_cells(samples: &[Vec<f64>], n: usize) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; n + 1];
    for p in samples {
        if p.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: p.len(),
            });
        }
        let mut best = 0usize;
        for (i, &x) in p.iter().enumerate().skip(1) {
            if x > p[best] {
                best = i;
            }
        }
        counts[best] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_zero_on_self() {
        let c = vec![3.0, 14.0, 159.0];
        let r = chi_square_statistic(&c, &c).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 2);
    }

    #[test]
    fn chi_square_reference_rows() {
        // 10 slabs, expected 1000 each
        let obs = [
            927.0, 1087.0, 1096.0, 985.0, 987.0, 992.0, 963.0, 979.0, 1000.0, 984.0,
        ];
        let r = chi_square_statistic(&obs, &[1000.0; 10]).unwrap();
        assert!((r.statistic - 24.64).abs() < 0.01, "{}", r.statistic);

        // shell counts with expected 189.1 each; the Pearson value follows
        // from the definition (hand-computed sum of squared deviations)
        let obs = [
            152.0, 175.0, 163.0, 177.0, 189.0, 192.0, 206.0, 182.0, 214.0, 241.0,
        ];
        let hand: f64 = obs.iter().map(|o| (o - 189.1) * (o - 189.1)).sum::<f64>() / 189.1;
        let r = chi_square_statistic(&obs, &[189.1; 10]).unwrap();
        assert!((r.statistic - hand).abs() < 1e-9);
        assert!((r.statistic - 32.0513).abs() < 1e-3, "{}", r.statistic);
    }

    #[test]
    fn chi_square_rejects_bad_input() {
        assert!(chi_square_statistic(&[1.0], &[1.0, 2.0]).is_err());
        assert!(chi_square_statistic(&[1.0, 2.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn band_matches_reference_pair() {
        let (lo, hi) = chi_square_band(9);
        assert!((lo - CHI_SQUARE_BAND_9DOF.0).abs() < 0.05, "lo {lo}");
        assert!((hi - CHI_SQUARE_BAND_9DOF.1).abs() < 0.05, "hi {hi}");
        // sanity on the cdf itself
        assert!((chi_square_cdf(9, lo) - 0.05).abs() < 1e-6);
        assert!((chi_square_cdf(9, hi) - 0.95).abs() < 1e-6);
    }

    #[test]
    fn slab_histogram_examples() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![0.05 + 0.1 * i as f64]).collect();
        assert_eq!(slab_histogram(&pts, 0, 10).unwrap(), vec![1; 10]);

        let all_first: Vec<Vec<f64>> = (0..7).map(|_| vec![0.01]).collect();
        let mut want = vec![0u64; 10];
        want[0] = 7;
        assert_eq!(slab_histogram(&all_first, 0, 10).unwrap(), want);

        assert!(matches!(
            slab_histogram(&[vec![1.5]], 0, 10),
            Err(Error::OutOfBody)
        ));
    }

    #[test]
    fn serial_correlation_edges() {
        let constant = vec![vec![0.25, 0.25]; 10];
        assert_eq!(serial_correlation(&constant, 2).unwrap().leave, 0.0);

        let alternating: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![if i % 2 == 0 { 0.25 } else { 0.75 }, 0.25])
            .collect();
        assert_eq!(serial_correlation(&alternating, 2).unwrap().leave, 1.0);
    }

    #[test]
    fn serial_correlation_independent_reference() {
        let mut stream = crate::rng::RandomStream::new(13);
        let samples: Vec<Vec<f64>> = (0..100_000)
            .map(|_| reference::uniform_cube(&mut stream, 10))
            .collect();
        let sc = serial_correlation(&samples, 10).unwrap();
        assert!(
            (sc.leave - sc.reference_leave).abs() < 0.002,
            "leave {} vs {}",
            sc.leave,
            sc.reference_leave
        );
    }

    #[test]
    fn nested_partition_levels() {
        for (n, k) in [(1usize, 2usize), (7, 10), (10, 10)] {
            let a = nested_simplex_partition(n, k);
            assert_eq!(a.len(), k + 1);
            assert_eq!(a[0], 0.0);
            for (i, &ai) in a.iter().enumerate() {
                let f = simplex_volume_fraction(n, ai);
                assert!((f - (1.0 - i as f64 / k as f64)).abs() < 1e-12);
            }
        }
        let a = nested_simplex_partition(1, 2);
        assert!((a[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fraction_endpoints() {
        assert_eq!(simplex_volume_fraction(5, 0.0), 1.0);
        assert!(simplex_volume_fraction(5, 1.0 / 6.0).abs() < 1e-12);
        assert!((simplex_volume_fraction(1, 0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vertex_cells_examples() {
        // barycenter ties break to index 0
        let bary = vec![vec![1.0 / 3.0; 3]];
        assert_eq!(simplex_vertex_cells(&bary, 2).unwrap(), vec![1, 0, 0]);
        let near0 = vec![vec![0.9, 0.05, 0.05]];
        assert_eq!(simplex_vertex_cells(&near0, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn vertex_cells_uniform_balance() {
        let n = 10;
        let trials = 100_000usize;
        let mut stream = crate::rng::RandomStream::new(41);
        let samples: Vec<Vec<f64>> = (0..trials)
            .map(|_| reference::uniform_simplex(&mut stream, n))
            .collect();
        let counts = simplex_vertex_cells(&samples, n).unwrap();
        let p = 1.0 / (n as f64 + 1.0);
        let expect = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!(
                (c as f64 - expect).abs() <= 4.0 * sigma,
                "count {c} vs {expect}"
            );
        }
    }

    #[test]
    fn empirical_fraction_tracks_theory() {
        for n in [2usize, 10, 50] {
            let total = 100_000usize;
            let mut stream = crate::rng::RandomStream::new(n as u64);
            let samples: Vec<Vec<f64>> = (0..total)
                .map(|_| reference::uniform_simplex(&mut stream, n))
                .collect();
            let hi = 1.0 / (n as f64 + 1.0);
            let alphas: Vec<f64> = (0..=50).map(|i| hi * i as f64 / 50.0).collect();
            let curve = nested_simplex_fraction(&samples, &alphas).unwrap();
            let sup = curve
                .iter()
                .map(|p| (p.empirical - p.theoretical).abs())
                .fold(0.0f64, f64::max);
            assert!(sup <= 3.0 / (total as f64).sqrt(), "n = {n}: sup {sup}");
        }
    }
}
