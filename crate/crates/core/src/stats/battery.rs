use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use super::report::{DigitStream, TestKind, TestReport, Verdict};
use super::StatsError;

const MAX_BLOCK: usize = 8;

fn require(test: TestKind, needed: usize, got: usize) -> Result<(), StatsError> {
    if got < needed {
        return Err(StatsError::TooShort { test, needed, got });
    }
    Ok(())
}

fn check_block(k: usize) -> Result<(), StatsError> {
    if k == 0 || k > MAX_BLOCK {
        return Err(StatsError::InvalidParameter(format!(
            "block length must be in 1..={MAX_BLOCK}, got {k}"
        )));
    }
    Ok(())
}

fn normal_two_sided(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

fn chi2_sf(stat: f64, df: f64) -> f64 {
    ChiSquared::new(df).expect("positive degrees of freedom").sf(stat)
}

/// Counts of each `k`-bit value over non-overlapping blocks.
fn block_counts(bits: &[bool], k: usize, counts: &mut [u64]) {
    for block in bits.chunks_exact(k) {
        let v = block.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        counts[v] += 1;
    }
}

/// Ones-count against Binomial(n, 1/2) via the normal approximation.
pub fn monobit_test(s: &DigitStream, alpha: f64) -> Result<TestReport, StatsError> {
    let n = s.len();
    require(TestKind::Monobit, 100, n)?;
    let sum: i64 = s.bits().iter().map(|&b| if b { 1 } else { -1 }).sum();
    let z = sum as f64 / (n as f64).sqrt();
    Ok(TestReport::from_p(
        TestKind::Monobit,
        None,
        z,
        "normal(0,1)".into(),
        normal_two_sided(z),
        alpha,
        vec![n],
    ))
}

/// Chi-squared test of non-overlapping `k`-block counts against the uniform
/// distribution on `2^k` values.
pub fn block_frequency_test(s: &DigitStream, k: usize, alpha: f64) -> Result<TestReport, StatsError> {
    check_block(k)?;
    let n = s.len();
    require(TestKind::BlockFrequency, 20 << k, n)?;
    let cells = 1usize << k;
    let mut counts = vec![0u64; cells];
    block_counts(s.bits(), k, &mut counts);
    let blocks = (n / k) as f64;
    let expected = blocks / cells as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let df = (cells - 1) as f64;
    Ok(TestReport::from_p(
        TestKind::BlockFrequency,
        Some(k),
        stat,
        format!("chi2(df={df})"),
        chi2_sf(stat, df),
        alpha,
        vec![n],
    ))
}

/// Sample autocorrelation at `lag`, `r = c(lag) / c(0)` with each
/// autocovariance averaged over its own number of terms. Under independence
/// `r * sqrt(n - lag)` is approximately standard normal.
pub fn serial_correlation(s: &DigitStream, lag: usize, alpha: f64) -> Result<TestReport, StatsError> {
    if lag == 0 {
        return Err(StatsError::InvalidParameter("lag must be positive".into()));
    }
    let n = s.len();
    require(TestKind::SerialCorrelation, 10 * lag + 1, n)?;
    let x: Vec<f64> = s.bits().iter().map(|&b| b as u8 as f64).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    let c0 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    let pairs = n - lag;
    let cl = (0..pairs)
        .map(|i| (x[i] - mean) * (x[i + lag] - mean))
        .sum::<f64>()
        / pairs as f64;
    let r = cl / c0;
    let z = r * (pairs as f64).sqrt();
    let mut report = TestReport::from_p(
        TestKind::SerialCorrelation,
        Some(lag),
        r,
        "normal(0,1/(n-lag))".into(),
        normal_two_sided(z),
        alpha,
        vec![n],
    );
    report.note.push_str("; statistic is the correlation coefficient");
    Ok(report)
}

/// Deviation bound `sqrt(log2 n / n)` on overlapping block frequencies.
pub fn borel_bound(n: usize) -> f64 {
    let n = n as f64;
    (n.log2() / n).sqrt()
}

/// For each `k <= max_k`, the largest absolute deviation of overlapping
/// `k`-block frequencies from `2^-k`. The stream passes when every deviation
/// is below [`borel_bound`]. The statistic is the largest deviation divided
/// by the bound; the p-value is a Bonferroni-corrected normal approximation
/// across all block values, reported for information.
pub fn borel_normality(s: &DigitStream, max_k: usize, alpha: f64) -> Result<TestReport, StatsError> {
    check_block(max_k)?;
    let n = s.len();
    require(TestKind::BorelNormality, 20 << max_k, n)?;
    let bound = borel_bound(n);
    let bits = s.bits();
    let mut worst_ratio = 0.0f64;
    let mut p_min = 1.0f64;
    let mut deviations = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let cells = 1usize << k;
        let mask = cells - 1;
        let mut counts = vec![0u64; cells];
        let mut v = 0usize;
        for (i, &b) in bits.iter().enumerate() {
            v = ((v << 1) | b as usize) & mask;
            if i + 1 >= k {
                counts[v] += 1;
            }
        }
        let windows = (n - k + 1) as f64;
        let p0 = 1.0 / cells as f64;
        let sd = (p0 * (1.0 - p0) / windows).sqrt();
        let dev = counts
            .iter()
            .map(|&c| (c as f64 / windows - p0).abs())
            .fold(0.0, f64::max);
        deviations.push(dev);
        worst_ratio = worst_ratio.max(dev / bound);
        p_min = p_min.min(normal_two_sided(dev / sd) * cells as f64);
    }

    let mut report = TestReport::from_p(
        TestKind::BorelNormality,
        Some(max_k),
        worst_ratio,
        format!("deviation bound sqrt(log2 n / n) = {bound}"),
        p_min,
        alpha,
        vec![n],
    );
    report.verdict = if deviations.iter().all(|&d| d < bound) {
        Verdict::Pass
    } else {
        Verdict::Reject
    };
    let devs: Vec<String> = deviations.iter().map(|d| format!("{d:.6}")).collect();
    report.note = format!(
        "verdict from the deviation bound, not alpha; max deviation per k = [{}]; {}",
        devs.join(", "),
        report.note
    );
    Ok(report)
}

/// Chi-squared homogeneity test on the pooled non-overlapping `k`-block
/// counts of two ensembles. Block values absent from both are dropped.
/// Swapping `a` and `b` gives the identical statistic.
pub fn two_sample_equivalence(
    a: &[DigitStream],
    b: &[DigitStream],
    k: usize,
    alpha: f64,
) -> Result<TestReport, StatsError> {
    check_block(k)?;
    if a.is_empty() {
        return Err(StatsError::EmptyEnsemble('a'));
    }
    if b.is_empty() {
        return Err(StatsError::EmptyEnsemble('b'));
    }
    let len = a[0].len();
    if let Some(s) = a.iter().chain(b).find(|s| s.len() != len) {
        return Err(StatsError::UnequalLengths(len, s.len()));
    }
    require(TestKind::TwoSampleEquivalence, k, len)?;
    let cells = 1usize << k;
    let pool = |ens: &[DigitStream]| {
        let mut c = vec![0u64; cells];
        for s in ens {
            block_counts(s.bits(), k, &mut c);
        }
        c
    };
    let (ca, cb) = (pool(a), pool(b));
    let na: u64 = ca.iter().sum();
    let nb: u64 = cb.iter().sum();
    let total = (na + nb) as f64;
    let mut stat = 0.0;
    let mut columns = 0usize;
    for (&x, &y) in ca.iter().zip(&cb) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        columns += 1;
        let ea = na as f64 * col / total;
        let eb = nb as f64 * col / total;
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    if columns < 2 {
        return Err(StatsError::DegenerateTable);
    }
    let df = (columns - 1) as f64;
    Ok(TestReport::from_p(
        TestKind::TwoSampleEquivalence,
        Some(k),
        stat,
        format!("chi2(df={df})"),
        chi2_sf(stat, df),
        alpha,
        vec![a.len() * len, b.len() * len],
    ))
}

/// One-sample Kolmogorov-Smirnov test of values against Uniform(0, 1).
pub fn ks_uniform(values: &[f64], alpha: f64) -> Result<TestReport, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let u = u.clamp(0.0, 1.0);
            ((i + 1) as f64 / n - u).max(u - i as f64 / n)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    Ok(TestReport::from_p(
        TestKind::KsUniform,
        None,
        d,
        "kolmogorov".into(),
        kolmogorov_sf(lambda),
        alpha,
        vec![values.len()],
    ))
}

/// `P(K > lambda)` for the Kolmogorov distribution.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let term = (-2.0 * j * j * lambda * lambda).exp();
        sum += if j as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// The standard per-stream battery: monobit, block frequency for
/// `k = 1..=4`, lag-1 serial correlation and normality up to `k = 4`, each
/// skipped when the stream is too short for it.
pub fn battery(s: &DigitStream, alpha: f64) -> Result<Vec<TestReport>, StatsError> {
    let mut out = Vec::new();
    let n = s.len();
    if n >= 100 {
        out.push(monobit_test(s, alpha)?);
    }
    for k in 1..=4 {
        if n >= 20 << k {
            out.push(block_frequency_test(s, k, alpha)?);
        }
    }
    if n > 10 {
        out.push(serial_correlation(s, 1, alpha)?);
    }
    if n >= 20 << 4 {
        out.push(borel_normality(s, 4, alpha)?);
    }
    Ok(out)
}
