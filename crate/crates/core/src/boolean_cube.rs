//! Functions on the Boolean cube {-1,1}^n and their Walsh spectra.
//!
//! A point of the cube is encoded as a bit mask: bit `j` set means `x_j = -1`.
//! With that convention `chi_S(x) = (-1)^{popcount(S & x)}` and the normalized
//! coefficient is `f^(S) = E_x[f(x) chi_S(x)]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};
use crate::limits::{DROP_TOL, MAX_DENSE_N};
use crate::rng;

/// A subset `S` of `[n]`, stored as sorted variable indices.
///
/// Ordering agrees with the integer order of the corresponding bit masks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subset(SmallVec<[u32; 4]>);

impl Subset {
    pub fn empty() -> Self {
        Subset(SmallVec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        let mut v: SmallVec<[u32; 4]> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut v = SmallVec::new();
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros();
            v.push(j);
            m &= m - 1;
        }
        Subset(v)
    }

    /// Bit mask form, available when every index is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &j| (j < 64).then(|| m | (1u64 << j)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// `chi_S` at a packed point (bit `j` of word `j / 64`).
    pub fn chi_packed(&self, point: &[u64]) -> f64 {
        let parity = self
            .0
            .iter()
            .fold(0u64, |acc, &j| acc ^ (point[(j / 64) as usize] >> (j % 64)) & 1);
        if parity == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// A real-valued function on `{-1,1}^n`, stored as a truth table indexed by mask.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeFunction {
    n: usize,
    table: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: usize, table: Vec<f64>) -> Result<Self> {
        if n > MAX_DENSE_N {
            return Err(Error::ResourceLimit(format!(
                "dense cube functions need n <= {MAX_DENSE_N}, got {n}"
            )));
        }
        if table.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1usize << n,
                got: table.len(),
            });
        }
        if table.iter().any(|v| !v.is_finite()) {
            return invalid("truth table contains a non-finite value");
        }
        Ok(CubeFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> f64) -> Result<Self> {
        if n > MAX_DENSE_N {
            return Err(Error::ResourceLimit(format!(
                "dense cube functions need n <= {MAX_DENSE_N}, got {n}"
            )));
        }
        let table = (0..1u64 << n).map(f).collect();
        Self::new(n, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn eval(&self, mask: u64) -> f64 {
        self.table[mask as usize]
    }

    pub fn is_boolean(&self) -> bool {
        self.table.iter().all(|&v| v == 1.0 || v == -1.0)
    }
}

/// Sparse Walsh spectrum `S -> f^(S)` of a function on `{-1,1}^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRepr", into = "SpectrumRepr")]
pub struct WalshSpectrum {
    n: usize,
    coeffs: BTreeMap<Subset, f64>,
}

impl WalshSpectrum {
    pub fn zero(n: usize) -> Self {
        WalshSpectrum {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a spectrum, summing repeated subsets and dropping negligible entries.
    pub fn from_pairs<I: IntoIterator<Item = (Subset, f64)>>(n: usize, pairs: I) -> Result<Self> {
        let mut s = WalshSpectrum::zero(n);
        for (subset, c) in pairs {
            s.add(subset, c)?;
        }
        s.prune();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, s: &Subset) -> f64 {
        self.coeffs.get(s).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, f64)> + '_ {
        self.coeffs.iter().map(|(s, &c)| (s, c))
    }

    /// Adds `c` to the coefficient of `s`.
    pub fn add(&mut self, s: Subset, c: f64) -> Result<()> {
        if !c.is_finite() {
            return invalid(format!("non-finite coefficient at {s}"));
        }
        if let Some(j) = s.max_index() {
            if j as usize >= self.n {
                return invalid(format!("subset {s} is not contained in [{}]", self.n));
            }
        }
        *self.coeffs.entry(s).or_insert(0.0) += c;
        Ok(())
    }

    /// Removes coefficients below the drop tolerance.
    pub fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.abs() >= DROP_TOL);
    }

    /// Largest `|S|` carrying a nonzero coefficient (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Subset::len).max().unwrap_or(0)
    }

    /// Union of all subsets in the support.
    pub fn relevant_variables(&self) -> BTreeSet<u32> {
        self.coeffs
            .keys()
            .flat_map(|s| s.indices().iter().copied())
            .collect()
    }

    /// Keeps the entries whose coefficient satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Subset, f64) -> bool) -> WalshSpectrum {
        WalshSpectrum {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(s, &c)| keep(s, c))
                .map(|(s, &c)| (s.clone(), c))
                .collect(),
        }
    }

    /// Evaluates `sum_S f^(S) chi_S(x)` at a packed point.
    pub fn eval_packed(&self, point: &[u64]) -> f64 {
        self.coeffs.iter().map(|(s, c)| c * s.chi_packed(point)).sum()
    }

    /// Squared l2 distance between two spectra (Parseval form of `E|f-g|^2`).
    pub fn l2_distance_sq(&self, other: &WalshSpectrum) -> f64 {
        let mut total = 0.0;
        for (s, c) in &self.coeffs {
            let d = c - other.coeff(s);
            total += d * d;
        }
        for (s, c) in &other.coeffs {
            if !self.coeffs.contains_key(s) {
                total += c * c;
            }
        }
        total
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MaskRepr {
    Bits(u64),
    Indices(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    n: usize,
    coeffs: Vec<(MaskRepr, f64)>,
}

impl From<WalshSpectrum> for SpectrumRepr {
    fn from(s: WalshSpectrum) -> Self {
        let wide = s.n > 64;
        SpectrumRepr {
            n: s.n,
            coeffs: s
                .coeffs
                .into_iter()
                .map(|(subset, c)| {
                    let key = match subset.to_mask() {
                        Some(m) if !wide => MaskRepr::Bits(m),
                        _ => MaskRepr::Indices(subset.indices().to_vec()),
                    };
                    (key, c)
                })
                .collect(),
        }
    }
}

impl TryFrom<SpectrumRepr> for WalshSpectrum {
    type Error = Error;

    fn try_from(r: SpectrumRepr) -> Result<Self> {
        let pairs = r.coeffs.into_iter().map(|(k, c)| {
            let s = match k {
                MaskRepr::Bits(m) => Subset::from_mask(m),
                MaskRepr::Indices(v) => Subset::from_indices(v),
            };
            (s, c)
        });
        WalshSpectrum::from_pairs(r.n, pairs)
    }
}

/// In-place unnormalized Walsh-Hadamard butterfly.
pub fn hadamard_in_place(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Dense normalized coefficients, indexed by subset mask.
pub fn walsh_dense(f: &CubeFunction) -> Vec<f64> {
    let mut v = f.table.clone();
    hadamard_in_place(&mut v);
    let scale = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|c| *c *= scale);
    v
}

/// Sparse spectrum from a dense coefficient vector.
pub fn spectrum_from_dense(n: usize, dense: &[f64]) -> WalshSpectrum {
    WalshSpectrum {
        n,
        coeffs: dense
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() >= DROP_TOL)
            .map(|(m, &c)| (Subset::from_mask(m as u64), c))
            .collect(),
    }
}

/// Walsh transform via the fast butterfly, `O(n 2^n)`.
pub fn walsh_transform(f: &CubeFunction) -> Result<WalshSpectrum> {
    Ok(spectrum_from_dense(f.n, &walsh_dense(f)))
}

/// Direct `O(4^n)` evaluation of every coefficient. Reference implementation.
pub fn walsh_naive(f: &CubeFunction) -> Result<Vec<f64>> {
    if f.n > 12 {
        return Err(Error::ResourceLimit(format!(
            "naive transform limited to n <= 12, got {}",
            f.n
        )));
    }
    let size = 1u64 << f.n;
    Ok((0..size)
        .map(|s| {
            (0..size)
                .map(|x| {
                    let sign = if (s & x).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    f.table[x as usize] * sign
                })
                .sum::<f64>()
                / size as f64
        })
        .collect())
}

/// Truth table of `sum_S f^(S) chi_S`.
pub fn inverse_walsh(s: &WalshSpectrum) -> Result<CubeFunction> {
    if s.n > MAX_DENSE_N {
        return Err(Error::ResourceLimit(format!(
            "inverse transform needs n <= {MAX_DENSE_N}, got {}",
            s.n
        )));
    }
    let mut v = vec![0.0; 1usize << s.n];
    for (subset, c) in s.iter() {
        // n <= 20 guarantees the mask exists
        let m = subset.to_mask().expect("subset fits in a mask");
        v[m as usize] = c;
    }
    hadamard_in_place(&mut v);
    CubeFunction::new(s.n, v)
}

pub fn sup_norm(f: &CubeFunction) -> f64 {
    f.table.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `(E|f|^p)^{1/p}` under the uniform measure; `p = inf` gives the sup norm.
pub fn lp_norm(f: &CubeFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(sup_norm(f));
    }
    let mean = f.table.iter().map(|v| v.abs().powf(p)).sum::<f64>() / f.table.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// `(sum_S |f^(S)|^p)^{1/p}`; `p = inf` gives the largest coefficient.
pub fn coeff_lp_norm(s: &WalshSpectrum, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(s.iter().fold(0.0, |m, (_, c)| m.max(c.abs())));
    }
    Ok(s.iter().map(|(_, c)| c.abs().powf(p)).sum::<f64>().powf(1.0 / p))
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return invalid(format!("exponent must lie in (0, inf], got {p}"));
    }
    Ok(())
}

pub fn degree(s: &WalshSpectrum) -> usize {
    s.degree()
}

/// `P_t f = sum_S e^{-t|S|} f^(S) chi_S`.
pub fn heat_semigroup(s: &WalshSpectrum, t: f64) -> Result<WalshSpectrum> {
    if t.is_nan() || t < 0.0 {
        return invalid(format!("heat time must be nonnegative, got {t}"));
    }
    let pairs = s
        .iter()
        .map(|(subset, c)| (subset.clone(), c * (-t * subset.len() as f64).exp()));
    WalshSpectrum::from_pairs(s.n, pairs)
}

/// Outcome of the moment comparison `||f||_2 <= (p-1)^{-d/2} ||f||_p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentComparison {
    pub p: f64,
    pub degree: usize,
    pub l2: f64,
    pub lp: f64,
    pub constant: f64,
    pub pass: bool,
}

/// Checks the hypercontractive moment comparison for a degree-`d` function, `p` in `(1, 2]`.
pub fn moment_comparison(f: &CubeFunction, d: usize, p: f64) -> Result<MomentComparison> {
    if !(p > 1.0 && p <= 2.0) {
        return invalid(format!("moment comparison needs p in (1, 2], got {p}"));
    }
    let deg = walsh_transform(f)?.degree();
    if deg > d {
        return invalid(format!("function has degree {deg} > {d}"));
    }
    let l2 = lp_norm(f, 2.0)?;
    let lp = lp_norm(f, p)?;
    let constant = (p - 1.0).powf(-(d as f64) / 2.0);
    Ok(MomentComparison {
        p,
        degree: d,
        l2,
        lp,
        constant,
        pass: l2 <= constant * lp * (1.0 + 1e-12) + 1e-12,
    })
}

/// `sum_{k <= d} C(n, k)` as a float.
pub fn count_low_degree_masks(n: usize, d: usize) -> f64 {
    (0..=d.min(n)).map(|k| binomial(n, k)).sum()
}

/// `C(n, k)` as a float, via the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All subsets of `[n]` with at most `d` elements, in increasing size.
pub fn low_degree_subsets(n: usize, d: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    for k in 0..=d.min(n) {
        combinations(n as u32, k, 0, &mut current, &mut out);
    }
    out
}

fn combinations(n: u32, k: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<Subset>) {
    if current.len() == k {
        out.push(Subset::from_indices(current.iter().copied()));
        return;
    }
    for j in start..n {
        current.push(j);
        combinations(n, k, j + 1, current, out);
        current.pop();
    }
}

/// A `{-1,1}`- or real-valued function depending on a few coordinates of `[n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Junta {
    n: usize,
    vars: Vec<u32>,
    table: Vec<f64>,
}

impl Junta {
    /// `table[p]` is the value when bit `i` of `p` encodes the sign of `vars[i]`.
    pub fn new(n: usize, vars: Vec<u32>, table: Vec<f64>) -> Result<Self> {
        if vars.len() > MAX_DENSE_N {
            return Err(Error::ResourceLimit(format!(
                "junta on {} variables is too wide",
                vars.len()
            )));
        }
        if table.len() != 1usize << vars.len() {
            return Err(Error::DimensionMismatch {
                expected: 1usize << vars.len(),
                got: table.len(),
            });
        }
        let distinct: BTreeSet<u32> = vars.iter().copied().collect();
        if distinct.len() != vars.len() || vars.iter().any(|&v| v as usize >= n) {
            return invalid("junta variables must be distinct indices below n");
        }
        Ok(Junta { n, vars, table })
    }

    /// Uniformly random Boolean function of `d` uniformly chosen coordinates.
    pub fn random_boolean(n: usize, d: usize, rng: &mut rng::Rng) -> Result<Self> {
        if d > n {
            return invalid(format!("junta size {d} exceeds n = {n}"));
        }
        let mut vars: Vec<u32> = sample(rng, n, d).into_iter().map(|v| v as u32).collect();
        vars.sort_unstable();
        let table = (0..1usize << d)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        Junta::new(n, vars, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Index into the local table for a packed point.
    pub fn pattern_packed(&self, point: &[u64]) -> usize {
        self.vars.iter().enumerate().fold(0, |p, (i, &j)| {
            p | ((((point[(j / 64) as usize] >> (j % 64)) & 1) as usize) << i)
        })
    }

    pub fn eval_packed(&self, point: &[u64]) -> f64 {
        self.table[self.pattern_packed(point)]
    }

    /// Exact spectrum, with local masks mapped back to global coordinates.
    pub fn spectrum(&self) -> WalshSpectrum {
        let mut v = self.table.clone();
        hadamard_in_place(&mut v);
        let scale = 1.0 / v.len() as f64;
        let pairs = v.iter().enumerate().map(|(local, c)| {
            let subset = Subset::from_indices(
                (0..self.vars.len())
                    .filter(|i| local >> i & 1 == 1)
                    .map(|i| self.vars[i]),
            );
            (subset, c * scale)
        });
        WalshSpectrum::from_pairs(self.n, pairs).expect("junta variables lie in [n]")
    }

    pub fn to_cube_function(&self) -> Result<CubeFunction> {
        CubeFunction::from_fn(self.n, |m| self.eval_packed(&[m]))
    }
}

/// Random Boolean function of degree at most `d` on `{-1,1}^n` (a random `d`-junta).
pub fn random_low_degree_boolean(n: usize, d: usize, seed: u64) -> Result<CubeFunction> {
    if n > MAX_DENSE_N {
        return Err(Error::ResourceLimit(format!(
            "dense generator needs n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    let mut r = rng::seeded(seed);
    Junta::random_boolean(n, d, &mut r)?.to_cube_function()
}

/// Random real function of degree at most `d` with Gaussian coefficients on a
/// random subset of the low-degree masks.
pub fn random_low_degree_real(n: usize, d: usize, seed: u64) -> Result<WalshSpectrum> {
    if d > n {
        return invalid(format!("degree {d} exceeds n = {n}"));
    }
    let mut r = rng::seeded(seed);
    let density: f64 = r.gen_range(0.1..=1.0);
    let mut pairs = Vec::new();
    for s in low_degree_subsets(n, d) {
        if r.gen::<f64>() < density {
            let c: f64 = r.sample(StandardNormal);
            pairs.push((s, c));
        }
    }
    WalshSpectrum::from_pairs(n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_order_matches_mask_order() {
        let mut masks: Vec<u64> = (0..64).collect();
        masks.sort_by_key(|&m| Subset::from_mask(m));
        assert_eq!(masks, (0..64).collect::<Vec<_>>());
    }

    #[test]
    fn parity_function_has_single_coefficient() {
        let f = CubeFunction::from_fn(2, |m| if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .unwrap();
        let s = walsh_transform(&f).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&Subset::from_mask(0b11)), 1.0);
    }

    #[test]
    fn two_bit_and_has_four_half_coefficients() {
        // AND in the +-1 encoding: -1 only when both inputs are -1.
        let f = CubeFunction::from_fn(2, |m| if m == 0b11 { -1.0 } else { 1.0 }).unwrap();
        let s = walsh_transform(&f).unwrap();
        assert_eq!(s.coeff(&Subset::from_mask(0)), 0.5);
        assert_eq!(s.coeff(&Subset::from_mask(1)), 0.5);
        assert_eq!(s.coeff(&Subset::from_mask(2)), 0.5);
        assert_eq!(s.coeff(&Subset::from_mask(3)), -0.5);
    }

    #[test]
    fn constant_function_transform() {
        let f = CubeFunction::new(0, vec![3.0]).unwrap();
        let s = walsh_transform(&f).unwrap();
        assert_eq!(s.coeff(&Subset::empty()), 3.0);
        assert_eq!(s.degree(), 0);
    }

    #[test]
    fn oversized_cube_is_rejected() {
        assert!(matches!(
            CubeFunction::from_fn(21, |_| 0.0),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn heat_semigroup_examples() {
        let s = WalshSpectrum::from_pairs(3, [(Subset::from_mask(0b101), 1.0)]).unwrap();
        let h = heat_semigroup(&s, 0.0).unwrap();
        assert_eq!(h, s);
        let h = heat_semigroup(&s, 1.0).unwrap();
        assert!((h.coeff(&Subset::from_mask(0b101)) - (-2.0f64).exp()).abs() < 1e-15);
        assert!(heat_semigroup(&s, -1.0).is_err());
    }

    #[test]
    fn moment_comparison_x1x2_at_p_1_5() {
        let f = CubeFunction::from_fn(2, |m| if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .unwrap();
        let r = moment_comparison(&f, 2, 1.5).unwrap();
        assert_eq!(r.l2, 1.0);
        assert!((r.constant - 2.0).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn coefficient_norm_rejects_bad_exponent() {
        let s = WalshSpectrum::zero(1);
        assert!(coeff_lp_norm(&s, 0.0).is_err());
        assert!(coeff_lp_norm(&s, f64::NAN).is_err());
        assert_eq!(coeff_lp_norm(&s, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn json_round_trip_uses_ascending_masks() {
        let s = WalshSpectrum::from_pairs(
            3,
            [(Subset::from_mask(4), 0.25), (Subset::from_mask(1), -0.5)],
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":3,"coeffs":[[1,-0.5],[4,0.25]]}"#);
        let back: WalshSpectrum = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn wide_spectrum_serializes_index_lists() {
        let s = WalshSpectrum::from_pairs(100, [(Subset::from_indices([3, 90]), 1.0)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":100,"coeffs":[[[3,90],1.0]]}"#);
        let back: WalshSpectrum = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn low_degree_subset_count() {
        assert_eq!(low_degree_subsets(5, 2).len(), 16);
        assert_eq!(count_low_degree_masks(5, 2), 16.0);
        assert_eq!(count_low_degree_masks(512, 2), 131_329.0);
    }

    #[test]
    fn junta_spectrum_matches_dense_transform() {
        let mut r = rng::seeded(7);
        let j = Junta::random_boolean(9, 3, &mut r).unwrap();
        let dense = walsh_transform(&j.to_cube_function().unwrap()).unwrap();
        assert!(dense.l2_distance_sq(&j.spectrum()) < 1e-28);
    }
}
