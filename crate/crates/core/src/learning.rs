//! Learning bounded low-degree functions from uniform random queries.
//!
//! Two learners share the empirical-coefficient step:
//! the low-degree algorithm keeps every empirical coefficient of degree at most `d`,
//! and the thresholded learner keeps only those above `b(1 + sqrt(d+1))`.

use rand::Rng as _;
use rand_distr::{Binomial, Distribution, Hypergeometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::boolean_cube::{count_low_degree_masks, CubeFunction, Junta, Subset, WalshSpectrum};
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Largest `n` accepted by the sample-size formulas.
pub const MAX_SAMPLE_SIZE_N: usize = 1_000_000;

/// Uniform query points with their observed values.
///
/// Points are packed row by row, `words` 64-bit words each; bit `j` set means `x_j = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryBatch {
    n: usize,
    words: usize,
    points: Vec<u64>,
    values: Vec<f64>,
    seed: u64,
}

impl QueryBatch {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn point(&self, j: usize) -> &[u64] {
        &self.points[j * self.words..(j + 1) * self.words]
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column-major bit slices: `columns[i]` has bit `j` set iff point `j` has `x_i = -1`.
    fn columns(&self) -> Vec<Vec<u64>> {
        let len_words = self.len().div_ceil(64);
        let mut cols = vec![vec![0u64; len_words]; self.n];
        for j in 0..self.len() {
            for (w, &word) in self.point(j).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    cols[w * 64 + b][j / 64] |= 1u64 << (j % 64);
                    bits &= bits - 1;
                }
            }
        }
        cols
    }
}

/// Draws `count` uniform points of `{-1,1}^n` and records `f` at each.
pub fn sample_queries(
    f: impl Fn(&[u64]) -> f64,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<QueryBatch> {
    if count == 0 {
        return invalid("sample count must be positive");
    }
    if n == 0 {
        return invalid("cube dimension must be positive");
    }
    let words = n.div_ceil(64);
    let tail = if n.is_multiple_of(64) { u64::MAX } else { (1u64 << (n % 64)) - 1 };
    let mut r = rng::seeded(seed);
    let mut points = Vec::with_capacity(count * words);
    let mut values = Vec::with_capacity(count);
    let mut buf = vec![0u64; words];
    for _ in 0..count {
        for (w, slot) in buf.iter_mut().enumerate() {
            let bits: u64 = r.gen();
            *slot = if w + 1 == words { bits & tail } else { bits };
        }
        let v = f(&buf);
        if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
            return invalid(format!("query value {v} is not bounded by 1"));
        }
        points.extend_from_slice(&buf);
        values.push(v);
    }
    Ok(QueryBatch {
        n,
        words,
        points,
        values,
        seed,
    })
}

/// Every point of `{-1,1}^n` exactly once, in mask order, with its table value.
pub fn exhaustive_queries(f: &CubeFunction) -> Result<QueryBatch> {
    if f.table().iter().any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-12) {
        return invalid("query values must be bounded by 1");
    }
    Ok(QueryBatch {
        n: f.n(),
        words: 1,
        points: (0..f.table().len() as u64).collect(),
        values: f.table().to_vec(),
        seed: 0,
    })
}

/// Parameters shared by both learners.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LearnerConfig {
    pub d: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub bh_constant: f64,
}

impl LearnerConfig {
    pub fn new(d: usize, epsilon: f64, delta: f64, bh_constant: f64) -> Result<Self> {
        if d == 0 {
            return invalid("degree must be at least 1");
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return invalid(format!("delta must lie in (0, 1), got {delta}"));
        }
        if !(bh_constant.is_finite() && bh_constant >= 1.0) {
            return invalid(format!("BH constant must be finite and >= 1, got {bh_constant}"));
        }
        Ok(LearnerConfig {
            d,
            epsilon,
            delta,
            bh_constant,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return invalid("cube dimension must be positive");
    }
    if n > MAX_SAMPLE_SIZE_N {
        return Err(Error::ResourceLimit(format!(
            "sample-size formulas are guarded for n <= {MAX_SAMPLE_SIZE_N}, got {n}"
        )));
    }
    Ok(())
}

fn to_count(x: f64) -> Result<u64> {
    if !x.is_finite() || x > (1u64 << 53) as f64 {
        return Err(Error::ResourceLimit(format!("sample size {x:e} overflows")));
    }
    Ok(x.ceil().max(1.0) as u64)
}

/// Low-degree algorithm sample size `ceil((2/b^2) ln((2/delta) Sigma))` with
/// `Sigma = sum_{k<=d} C(n,k)` and `b^2 = epsilon / Sigma`.
pub fn lmn_sample_size(n: usize, cfg: &LearnerConfig) -> Result<u64> {
    check_n(n)?;
    let sigma = count_low_degree_masks(n, cfg.d);
    let b2 = cfg.epsilon / sigma;
    to_count(2.0 / b2 * (2.0 * sigma / cfg.delta).ln())
}

/// Thresholded learner sample size `ceil(e^8 d^2 epsilon^{-(d+1)} BH^{2d} ln(n/delta))`.
pub fn ei_sample_size(n: usize, cfg: &LearnerConfig) -> Result<u64> {
    check_n(n)?;
    let d = cfg.d as f64;
    let x = 8f64.exp() * d * d * cfg.epsilon.powf(-(d + 1.0))
        * cfg.bh_constant.powf(2.0 * d)
        * (n as f64 / cfg.delta).ln();
    to_count(x)
}

/// Accuracy scale `b` with `b^2 = e^{-5} d^{-1} epsilon^{d+1} BH^{-2d}`.
pub fn ei_accuracy(cfg: &LearnerConfig) -> f64 {
    let d = cfg.d as f64;
    ((-5f64).exp() / d * cfg.epsilon.powf(d + 1.0) * cfg.bh_constant.powf(-2.0 * d)).sqrt()
}

/// Threshold `b(1 + sqrt(d+1))` applied to empirical coefficients.
pub fn ei_threshold(d: usize, b: f64) -> f64 {
    b * (1.0 + ((d + 1) as f64).sqrt())
}

/// Hoeffding envelope `2 exp(-N b^2 / 2)` for one empirical coefficient.
pub fn chernoff_envelope(count: u64, b: f64) -> f64 {
    2.0 * (-(count as f64) * b * b / 2.0).exp()
}

/// `alpha_S = (1/N) sum_j f(x_j) chi_S(x_j)` for every `|S| <= d`.
pub fn empirical_spectrum(batch: &QueryBatch, d: usize) -> Result<WalshSpectrum> {
    if batch.is_empty() {
        return invalid("empty query batch");
    }
    let n = batch.n;
    let len = batch.len();
    let len_words = len.div_ceil(64);
    let cols = batch.columns();
    let boolean = batch.values.iter().all(|&v| v == 1.0 || v == -1.0);
    let total: f64 = batch.values.iter().sum();
    let inv = 1.0 / len as f64;

    // Base parity: the value signs for Boolean data, nothing otherwise.
    let mut base = vec![0u64; len_words];
    if boolean {
        for (j, &v) in batch.values.iter().enumerate() {
            if v < 0.0 {
                base[j / 64] |= 1u64 << (j % 64);
            }
        }
    }

    let coefficient = |parity: &[u64]| -> f64 {
        if boolean {
            let ones: u64 = parity.iter().map(|w| w.count_ones() as u64).sum();
            (len as f64 - 2.0 * ones as f64) * inv
        } else {
            let mut odd = 0.0;
            for (w, &word) in parity.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    odd += batch.values[w * 64 + bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
            }
            (total - 2.0 * odd) * inv
        }
    };

    let mut pairs = vec![(Subset::empty(), coefficient(&base))];
    if d > 0 {
        let rest: Vec<Vec<(Subset, f64)>> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let mut stack = vec![base.clone(); d + 1];
                let mut current = vec![first as u32];
                xor_into(&mut stack, 1, &cols[first]);
                out.push((Subset::from_indices(current.iter().copied()), coefficient(&stack[1])));
                extend(&cols, d, first + 1, &mut stack, &mut current, &coefficient, &mut out);
                out
            })
            .collect();
        pairs.extend(rest.into_iter().flatten());
    }
    WalshSpectrum::from_pairs(n, pairs)
}

fn xor_into(stack: &mut [Vec<u64>], depth: usize, col: &[u64]) {
    let (lo, hi) = stack.split_at_mut(depth);
    for ((dst, a), b) in hi[0].iter_mut().zip(&lo[depth - 1]).zip(col) {
        *dst = a ^ b;
    }
}

fn extend(
    cols: &[Vec<u64>],
    d: usize,
    start: usize,
    stack: &mut [Vec<u64>],
    current: &mut Vec<u32>,
    coefficient: &impl Fn(&[u64]) -> f64,
    out: &mut Vec<(Subset, f64)>,
) {
    let depth = current.len();
    if depth >= d {
        return;
    }
    for i in start..cols.len() {
        xor_into(stack, depth + 1, &cols[i]);
        current.push(i as u32);
        out.push((
            Subset::from_indices(current.iter().copied()),
            coefficient(&stack[depth + 1]),
        ));
        extend(cols, d, i + 1, stack, current, coefficient, out);
        current.pop();
    }
}

/// Low-degree algorithm: all empirical coefficients of degree at most `d`.
pub fn lmn_learn(batch: &QueryBatch, d: usize) -> Result<WalshSpectrum> {
    empirical_spectrum(batch, d)
}

/// Keeps the empirical coefficients with `|alpha_S| >= b(1 + sqrt(d+1))`.
pub fn threshold_spectrum(alpha: &WalshSpectrum, d: usize, b: f64) -> WalshSpectrum {
    let a = ei_threshold(d, b);
    alpha.filter(|_, c| c.abs() >= a)
}

/// Thresholded learner on a query batch.
pub fn ei_learn(batch: &QueryBatch, d: usize, b: f64) -> Result<WalshSpectrum> {
    if !(b.is_finite() && b > 0.0) {
        return invalid(format!("accuracy b must be positive, got {b}"));
    }
    Ok(threshold_spectrum(&empirical_spectrum(batch, d)?, d, b))
}

/// `||h - f||_2^2`, computed exactly from the two spectra.
pub fn l2_error(h: &WalshSpectrum, f: &WalshSpectrum) -> Result<f64> {
    if h.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: h.n(),
        });
    }
    Ok(h.l2_distance_sq(f))
}

/// Coefficients above a threshold together with the number of variables they touch.
#[derive(Clone, Debug, PartialEq)]
pub struct JuntaApproximation {
    pub spectrum: WalshSpectrum,
    pub k: usize,
}

/// Keeps `|f^(S)| > a` and reports `k = |union of kept S|`.
pub fn junta_approximate(s: &WalshSpectrum, a: f64) -> Result<JuntaApproximation> {
    if !(a.is_finite() && a > 0.0) {
        return invalid(format!("threshold must be positive, got {a}"));
    }
    let spectrum = s.filter(|_, c| c.abs() > a);
    let k = spectrum.relevant_variables().len();
    Ok(JuntaApproximation { spectrum, k })
}

/// Bound `d BH^{2d} / epsilon^{2d}` on the number of relevant variables.
pub fn junta_size_bound(d: usize, bh: f64, eps: f64) -> f64 {
    let d2 = 2.0 * d as f64;
    d as f64 * bh.powf(d2) / eps.powf(d2)
}

/// Both sides of `(d+1)^{-d/(d+1)} + (2 + sqrt(d+1))^{2/(d+1)} <= (e^4 (d+1))^{1/(d+1)}`.
pub fn exercise_inequality(d: usize) -> (f64, f64) {
    let d1 = (d + 1) as f64;
    let lhs = d1.powf(-(d as f64) / d1) + (2.0 + d1.sqrt()).powf(2.0 / d1);
    let rhs = (4f64.exp() * d1).powf(1.0 / d1);
    (lhs, rhs)
}

/// Empirical coefficients of a junta under `count` uniform queries, drawn
/// from sufficient statistics rather than materialized points.
///
/// The query values only depend on the junta pattern, so the sample splits
/// into pattern classes with multinomial sizes. Each other coordinate is an
/// independent fair sign, so its per-class sums are binomial. This makes every
/// coefficient with at most one coordinate outside the junta exact in joint
/// law. For two outside coordinates the per-class agreement count is drawn
/// from its exact hypergeometric conditional law given those sums, one pair
/// at a time; correlations between different pairs are not reproduced.
/// Supports `d <= 2`.
pub fn junta_empirical_spectrum(
    junta: &Junta,
    count: u64,
    d: usize,
    seed: u64,
) -> Result<WalshSpectrum> {
    if count == 0 {
        return invalid("sample count must be positive");
    }
    if d > 2 {
        return Err(Error::Unsupported(format!(
            "sufficient-statistic sampling handles d <= 2, got {d}"
        )));
    }
    let n = junta.n();
    let vars = junta.vars();
    let classes = junta.table().len();
    let in_junta: Vec<bool> = {
        let mut v = vec![false; n];
        vars.iter().for_each(|&j| v[j as usize] = true);
        v
    };
    let outside: Vec<usize> = (0..n).filter(|&i| !in_junta[i]).collect();
    let inv = 1.0 / count as f64;

    // Class sizes: sequential binomial split of a uniform multinomial.
    let mut r = rng::stream(seed, 0);
    let mut sizes = vec![0u64; classes];
    let mut remaining = count;
    for (p, slot) in sizes.iter_mut().enumerate() {
        let left = (classes - p) as f64;
        *slot = if p + 1 == classes {
            remaining
        } else {
            draw_binomial(&mut r, remaining, 1.0 / left)?
        };
        remaining -= *slot;
    }

    // Per-class counts of x_i = -1 for every outside coordinate.
    let minus: Vec<Vec<u64>> = outside
        .iter()
        .map(|&i| {
            let mut r = rng::stream(seed, 1 + i as u64);
            sizes
                .iter()
                .map(|&s| draw_binomial(&mut r, s, 0.5))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;

    let table = junta.table();
    let local_subsets: Vec<usize> = (0..classes)
        .filter(|m| (m.count_ones() as usize) <= d)
        .collect();
    let chi_local = |t: usize, p: usize| -> f64 {
        if (t & p).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    };
    let global = |t: usize| -> Vec<u32> {
        (0..vars.len()).filter(|i| t >> i & 1 == 1).map(|i| vars[i]).collect()
    };

    let mut pairs: Vec<(Subset, f64)> = Vec::new();
    for &t in &local_subsets {
        let sum: f64 = (0..classes)
            .map(|p| table[p] * chi_local(t, p) * sizes[p] as f64)
            .sum();
        pairs.push((Subset::from_indices(global(t)), sum * inv));
    }
    if d >= 1 {
        for (oi, &i) in outside.iter().enumerate() {
            for &t in local_subsets.iter().filter(|t| (t.count_ones() as usize) < d) {
                let sum: f64 = (0..classes)
                    .map(|p| {
                        let col = sizes[p] as f64 - 2.0 * minus[oi][p] as f64;
                        table[p] * chi_local(t, p) * col
                    })
                    .sum();
                let mut idx = global(t);
                idx.push(i as u32);
                pairs.push((Subset::from_indices(idx), sum * inv));
            }
        }
    }
    if d == 2 {
        let rows: Vec<Vec<(Subset, f64)>> = (0..outside.len())
            .into_par_iter()
            .map(|oi| -> Result<Vec<(Subset, f64)>> {
                let mut r = rng::stream(seed, 1 + (n + outside[oi]) as u64);
                let mut row = Vec::with_capacity(outside.len() - oi - 1);
                for ok in oi + 1..outside.len() {
                    let mut sum = 0.0;
                    for p in 0..classes {
                        let size = sizes[p];
                        if size == 0 {
                            continue;
                        }
                        let (bi, bk) = (minus[oi][p], minus[ok][p]);
                        let both = draw_hypergeometric(&mut r, size, bi, bk)?;
                        let agree_sum =
                            size as f64 - 2.0 * (bi + bk) as f64 + 4.0 * both as f64;
                        sum += table[p] * agree_sum;
                    }
                    row.push((
                        Subset::from_indices([outside[oi] as u32, outside[ok] as u32]),
                        sum * inv,
                    ));
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        pairs.extend(rows.into_iter().flatten());
    }
    WalshSpectrum::from_pairs(n, pairs)
}

fn draw_binomial(r: &mut rng::Rng, trials: u64, p: f64) -> Result<u64> {
    if trials == 0 {
        return Ok(0);
    }
    let dist = Binomial::new(trials, p)
        .map_err(|e| Error::InvalidArgument(format!("binomial({trials}, {p}): {e}")))?;
    Ok(dist.sample(r))
}

fn draw_hypergeometric(r: &mut rng::Rng, population: u64, marked: u64, draws: u64) -> Result<u64> {
    if marked == 0 || draws == 0 {
        return Ok(0);
    }
    if marked == population {
        return Ok(draws);
    }
    if draws == population {
        return Ok(marked);
    }
    let dist = Hypergeometric::new(population, marked, draws).map_err(|e| {
        Error::InvalidArgument(format!("hypergeometric({population}, {marked}, {draws}): {e}"))
    })?;
    Ok(dist.sample(r))
}

/// Which learner a trial runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lmn,
    Ei,
}

/// How the empirical coefficients of a trial are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    /// Materialize every query point and compute coefficients by bit slicing.
    Batch,
    /// Draw the coefficients from junta sufficient statistics.
    Stats,
}

/// Result of learning one random Boolean junta.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub algo: Algorithm,
    pub sampler: Sampler,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub samples: u64,
    pub kept: usize,
    pub l2err: f64,
    pub success: bool,
}

/// Learns a fresh random Boolean `d`-junta on `{-1,1}^n` with `samples` queries.
pub fn run_trial(
    algo: Algorithm,
    sampler: Sampler,
    n: usize,
    cfg: &LearnerConfig,
    samples: u64,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut r = rng::stream(seed, 2 * trial);
    let junta = Junta::random_boolean(n, cfg.d, &mut r)?;
    let data_seed: u64 = r.gen();
    let alpha = match sampler {
        Sampler::Batch => {
            let count = usize::try_from(samples)
                .map_err(|_| Error::ResourceLimit(format!("{samples} samples")))?;
            let batch = sample_queries(|x| junta.eval_packed(x), n, count, data_seed)?;
            empirical_spectrum(&batch, cfg.d)?
        }
        Sampler::Stats => junta_empirical_spectrum(&junta, samples, cfg.d, data_seed)?,
    };
    let h = match algo {
        Algorithm::Lmn => alpha,
        Algorithm::Ei => threshold_spectrum(&alpha, cfg.d, ei_accuracy(cfg)),
    };
    let l2err = l2_error(&h, &junta.spectrum())?;
    Ok(TrialOutcome {
        trial,
        algo,
        sampler,
        n,
        d: cfg.d,
        samples,
        kept: h.len(),
        l2err,
        success: l2err <= cfg.epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_cube::random_low_degree_boolean;

    #[test]
    fn lmn_sample_size_small_example() {
        let cfg = LearnerConfig::new(1, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(lmn_sample_size(2, &cfg).unwrap(), 30);
    }

    #[test]
    fn lmn_sample_size_is_monotone_in_n() {
        let cfg = LearnerConfig::new(2, 0.1, 0.1, 2f64.sqrt()).unwrap();
        let sizes: Vec<u64> = (1..200).map(|n| lmn_sample_size(n, &cfg).unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sample_size_guards() {
        let cfg = LearnerConfig::new(2, 0.1, 0.1, 2f64.sqrt()).unwrap();
        assert!(matches!(
            lmn_sample_size(2_000_000, &cfg),
            Err(Error::ResourceLimit(_))
        ));
        assert!(LearnerConfig::new(0, 0.1, 0.1, 1.0).is_err());
        assert!(LearnerConfig::new(1, 0.0, 0.1, 1.0).is_err());
        assert!(LearnerConfig::new(1, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn ei_sample_size_closed_form() {
        let cfg = LearnerConfig::new(1, 1.0, 0.5, 1.0).unwrap();
        // e^8 ln 2 = 2066.24...
        assert_eq!(ei_sample_size(1, &cfg).unwrap(), 2067);
        let cfg = LearnerConfig::new(2, 0.5, 0.25, 2f64.sqrt()).unwrap();
        // e^8 * 4 * 8 * 4 * ln 40 = 1407538.5...
        let expected = 8f64.exp() * 4.0 * 8.0 * 4.0 * 40f64.ln();
        assert_eq!(ei_sample_size(10, &cfg).unwrap(), expected.ceil() as u64);
    }

    #[test]
    fn empirical_spectrum_exact_on_full_cube() {
        let f = random_low_degree_boolean(4, 2, 3).unwrap();
        // Every point once: empirical coefficients equal the true ones.
        let batch = QueryBatch {
            n: 4,
            words: 1,
            points: (0..16).collect(),
            values: f.table().to_vec(),
            seed: 0,
        };
        let alpha = empirical_spectrum(&batch, 4).unwrap();
        let exact = crate::boolean_cube::walsh_transform(&f).unwrap();
        assert!(alpha.l2_distance_sq(&exact) < 1e-28);
    }

    #[test]
    fn real_valued_path_matches_direct_sum() {
        let batch = sample_queries(
            |x| if x[0] & 1 == 1 { 0.25 } else { -0.75 } * if x[0] & 4 == 4 { 1.0 } else { 0.5 },
            5,
            300,
            11,
        )
        .unwrap();
        let alpha = empirical_spectrum(&batch, 2).unwrap();
        for s in crate::boolean_cube::low_degree_subsets(5, 2) {
            let direct: f64 = (0..batch.len())
                .map(|j| batch.value(j) * s.chi_packed(batch.point(j)))
                .sum::<f64>()
                / batch.len() as f64;
            assert!((alpha.coeff(&s) - direct).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn exercise_inequality_small_degrees() {
        for d in 1..=50 {
            let (lhs, rhs) = exercise_inequality(d);
            assert!(lhs <= rhs, "d={d}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn junta_approximation_counts_variables() {
        let s = WalshSpectrum::from_pairs(
            6,
            [
                (Subset::from_indices([0, 2]), 0.5),
                (Subset::from_indices([2, 5]), -0.4),
                (Subset::from_indices([1]), 0.01),
            ],
        )
        .unwrap();
        let j = junta_approximate(&s, 0.1).unwrap();
        assert_eq!(j.k, 3);
        assert_eq!(j.spectrum.len(), 2);
    }
}
