//! Bohnenblust-Hille machinery: mixed norms, Blei's inequality, the Littlewood
//! 4/3 inequality, polarization of homogeneous polynomials and the inductive
//! constant chain.

use std::f64::consts::{E, PI, SQRT_2};

use rand::Rng as _;
use serde::Serialize;

use crate::boolean_cube::{coeff_lp_norm, inverse_walsh, sup_norm, WalshSpectrum};
use crate::error::{invalid, Error, Result};
use crate::limits::check_grid;
use crate::linalg::{CMatrix, C64, ZERO};
use crate::rng;

/// Largest number of entries in a dense tensor or multilinear form.
pub const MAX_TENSOR_ENTRIES: usize = 1_000_000;

fn tensor_len(d: usize, n: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..d {
        len = len
            .checked_mul(n)
            .filter(|&l| l <= MAX_TENSOR_ENTRIES)
            .ok_or_else(|| {
                Error::ResourceLimit(format!(
                    "{n}^{d} entries exceeds the cap of {MAX_TENSOR_ENTRIES}"
                ))
            })?;
    }
    Ok(len)
}

/// Dense order-`d` tensor `a_{i_1...i_d}` over `[n]^d`, `i_1` most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensor {
    d: usize,
    n: usize,
    entries: Vec<C64>,
}

impl MixedTensor {
    pub fn new(d: usize, n: usize, entries: Vec<C64>) -> Result<Self> {
        if d == 0 || n == 0 {
            return invalid("tensor order and size must be positive");
        }
        let len = tensor_len(d, n)?;
        if entries.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: entries.len(),
            });
        }
        Ok(MixedTensor { d, n, entries })
    }

    pub fn from_fn(d: usize, n: usize, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let len = tensor_len(d, n)?;
        let mut idx = vec![0usize; d];
        let entries = (0..len)
            .map(|flat| {
                unflatten(flat, n, &mut idx);
                f(&idx)
            })
            .collect();
        Self::new(d, n, entries)
    }

    /// Tensor with independent uniform entries in `[-1, 1]`, a random fraction of them zero.
    pub fn random_real(d: usize, n: usize, seed: u64) -> Result<Self> {
        let mut r = rng::seeded(seed);
        let density: f64 = r.gen_range(0.2..=1.0);
        Self::from_fn(d, n, |_| {
            if r.gen::<f64>() < density {
                C64::new(r.gen_range(-1.0..=1.0), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.entries[idx.iter().fold(0, |f, &i| f * self.n + i)]
    }

    /// Average of `a` over all permutations of each index tuple.
    pub fn symmetrize(&self) -> MixedTensor {
        let perms = permutations(self.d);
        let scale = 1.0 / perms.len() as f64;
        let mut permuted = vec![0usize; self.d];
        MixedTensor::from_fn(self.d, self.n, |idx| {
            perms
                .iter()
                .map(|p| {
                    p.iter().enumerate().for_each(|(t, &s)| permuted[t] = idx[s]);
                    self.get(&permuted)
                })
                .sum::<C64>()
                * scale
        })
        .expect("same shape as self")
    }

    /// `P(x) = sum_i a_i x_{i_1} ... x_{i_d}`.
    pub fn eval_diagonal(&self, x: &[C64]) -> Result<C64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut idx = vec![0usize; self.d];
        Ok(self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(flat, a)| {
                unflatten(flat, self.n, &mut idx);
                idx.iter().fold(*a, |acc, &i| acc * x[i])
            })
            .sum())
    }
}

fn unflatten(mut flat: usize, n: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Nested mixed norm: the last index is summed first with exponent `p[d-1]`,
/// then the result is summed over the previous index with `p[d-2]`, and so on.
pub fn mixed_lp_norm(t: &MixedTensor, p: &[f64]) -> Result<f64> {
    if p.len() != t.d {
        return Err(Error::DimensionMismatch {
            expected: t.d,
            got: p.len(),
        });
    }
    if let Some(bad) = p.iter().find(|&&q| q.is_nan() || q < 1.0) {
        return invalid(format!("mixed-norm exponents must be >= 1, got {bad}"));
    }
    let mut level: Vec<f64> = t.entries.iter().map(|a| a.norm()).collect();
    for &q in p.iter().rev() {
        level = level
            .chunks(t.n)
            .map(|chunk| {
                if q.is_infinite() {
                    chunk.iter().fold(0.0, |m: f64, v| m.max(*v))
                } else {
                    chunk.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
                }
            })
            .collect();
    }
    Ok(level[0])
}

/// Both sides of Blei's inequality for a `d`-tensor and `1 <= k < d`.
///
/// `lhs = ||a||_{2d/(d+1)}`; `rhs` is the geometric mean over `|S| = k` of the
/// mixed norms with `l^{2k/(k+1)}` over `i_S` outside and `l^2` over `i_{S^c}` inside.
pub fn blei_sides(t: &MixedTensor, k: usize) -> Result<(f64, f64)> {
    let d = t.d;
    if k == 0 || k >= d {
        return invalid(format!("Blei split needs 1 <= k < d = {d}, got {k}"));
    }
    let pd = 2.0 * d as f64 / (d as f64 + 1.0);
    let lhs = t
        .entries
        .iter()
        .map(|a| a.norm().powf(pd))
        .sum::<f64>()
        .powf(1.0 / pd);
    let pk = 2.0 * k as f64 / (k as f64 + 1.0);
    let subsets: Vec<u32> = (0u32..1 << d).filter(|m| m.count_ones() as usize == k).collect();
    let mut idx = vec![0usize; d];
    let mut log_rhs = 0.0;
    for &s in &subsets {
        let outer_len = t.n.pow(k as u32);
        let mut inner = vec![0.0f64; outer_len];
        for (flat, a) in t.entries.iter().enumerate() {
            unflatten(flat, t.n, &mut idx);
            let key = (0..d)
                .filter(|j| s >> j & 1 == 1)
                .fold(0, |acc, j| acc * t.n + idx[j]);
            inner[key] += a.norm_sqr();
        }
        let norm = inner
            .iter()
            .map(|v| v.sqrt().powf(pk))
            .sum::<f64>()
            .powf(1.0 / pk);
        if norm == 0.0 {
            return Ok((lhs, 0.0));
        }
        log_rhs += norm.ln();
    }
    Ok((lhs, (log_rhs / subsets.len() as f64).exp()))
}

/// `a_{rs} = e^{2 pi i r s / n}`.
pub fn fourier_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, s| {
        C64::from_polar(1.0, 2.0 * PI * (r * s % n) as f64 / n as f64)
    })
}

/// Littlewood 4/3 sides: `lhs = (sum |a_ij|^{4/3})^{3/4}` and the bilinear
/// sup over `Omega_M^n x Omega_M^n`, a lower estimate of the torus sup.
pub fn littlewood_sides(a: &CMatrix, m: usize) -> Result<(f64, f64)> {
    if !a.is_square() {
        return invalid("Littlewood check needs a square matrix");
    }
    if m == 0 {
        return invalid("grid size must be positive");
    }
    let n = a.rows();
    check_grid(m, 2 * n, "Littlewood bilinear grid")?;
    let lhs = a
        .data()
        .iter()
        .map(|c| c.norm().powf(4.0 / 3.0))
        .sum::<f64>()
        .powf(0.75);
    let roots: Vec<C64> = (0..m)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
        .collect();
    let mut best = 0.0f64;
    let mut zi = vec![0usize; n];
    loop {
        // b_j = sum_i a_ij z_i, then sup over w of |sum_j b_j w_j|
        let b: Vec<C64> = (0..n)
            .map(|j| (0..n).map(|i| a[(i, j)] * roots[zi[i]]).sum())
            .collect();
        best = best.max(linear_form_grid_sup(&b, &roots));
        if !advance(&mut zi, m) {
            break;
        }
    }
    Ok((lhs, best))
}

fn linear_form_grid_sup(b: &[C64], roots: &[C64]) -> f64 {
    let m = roots.len();
    let n = b.len();
    // fix w_0 = 1 by rotation invariance of the modulus
    let mut wi = vec![0usize; n];
    let mut value: C64 = b.iter().sum();
    let mut best = value.norm();
    if n <= 1 {
        return best;
    }
    loop {
        let mut j = 1;
        loop {
            if j == n {
                return best;
            }
            let old = wi[j];
            wi[j] = (old + 1) % m;
            value += b[j] * (roots[wi[j]] - roots[old]);
            if wi[j] != 0 {
                break;
            }
            j += 1;
        }
        best = best.max(value.norm());
    }
}

fn advance(digits: &mut [usize], m: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < m {
            return true;
        }
        *d = 0;
    }
    false
}

/// Symmetric `d`-linear form `L_P` with `L_P(x, ..., x) = P(x)` for a
/// `d`-homogeneous polynomial `P` on `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    d: usize,
    n: usize,
    coeffs: Vec<f64>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl MultilinearForm {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense coefficients `c_{j_1...j_d}`, `j_1` most significant.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `L(v_1, ..., v_d)`.
    pub fn eval(&self, vectors: &[&[f64]]) -> Result<f64> {
        if vectors.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(idx, c)| {
                idx.iter()
                    .zip(vectors)
                    .fold(*c, |acc, (&j, v)| acc * v[j as usize])
            })
            .sum())
    }

    /// `L(x, ..., x, y, ..., y)` with `k` copies of `x`.
    pub fn eval_split(&self, x: &[f64], y: &[f64], k: usize) -> Result<f64> {
        if k > self.d {
            return invalid(format!("split {k} exceeds degree {}", self.d));
        }
        let args: Vec<&[f64]> = (0..self.d).map(|t| if t < k { x } else { y }).collect();
        self.eval(&args)
    }
}

/// Polarization of a `d`-homogeneous multilinear polynomial given by its
/// Walsh coefficients: `c_{j_1...j_d} = a_S / d!` for every ordering of `S`.
pub fn polarize(s: &WalshSpectrum) -> Result<MultilinearForm> {
    let d = s.degree();
    if s.iter().any(|(subset, _)| subset.len() != d) {
        return invalid("polarization needs a homogeneous polynomial");
    }
    if d == 0 {
        return invalid("polarization needs degree at least 1");
    }
    let n = s.n();
    let len = tensor_len(d, n)?;
    let perms = permutations(d);
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let mut coeffs = vec![0.0; len];
    let mut terms = Vec::with_capacity(s.len() * perms.len());
    for (subset, a) in s.iter() {
        let idx = subset.indices();
        for p in &perms {
            let ordered: Vec<u32> = p.iter().map(|&t| idx[t]).collect();
            let flat = ordered.iter().fold(0usize, |f, &j| f * n + j as usize);
            coeffs[flat] = a / fact;
            terms.push((ordered, a / fact));
        }
    }
    Ok(MultilinearForm {
        d,
        n,
        coeffs,
        terms,
    })
}

/// `x^x` with `0^0 = 1`.
fn pow_self(x: usize) -> f64 {
    if x == 0 {
        1.0
    } else {
        (x as f64).powi(x as i32)
    }
}

fn factorial(x: usize) -> f64 {
    (1..=x).map(|i| i as f64).product()
}

/// Polarization constant `(1+sqrt2)^d d^d / (k^k (d-k)^{d-k}) * k!(d-k)!/d!`.
pub fn polarization_constant(d: usize, k: usize) -> f64 {
    (1.0 + SQRT_2).powi(d as i32) * pow_self(d) / (pow_self(k) * pow_self(d - k))
        * factorial(k)
        * factorial(d - k)
        / factorial(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarizationReport {
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub cube_norm: f64,
    pub constant: f64,
    pub max_value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Samples `|L(x^k, y^{d-k})|` over `x, y` in `[-1,1]^n` (half of the draws at
/// vertices) and compares with `polarization_constant(d, k) * ||P||_{[-1,1]^n}`.
pub fn polarization_bound_check(
    l: &MultilinearForm,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<PolarizationReport> {
    if k > l.d {
        return invalid(format!("split {k} exceeds degree {}", l.d));
    }
    // the sup of a multilinear polynomial over [-1,1]^n is attained at a vertex
    let mut spectrum = WalshSpectrum::zero(l.n);
    for (idx, c) in &l.terms {
        spectrum.add(crate::boolean_cube::Subset::from_indices(idx.iter().copied()), *c)?;
    }
    spectrum.prune();
    let cube_norm = sup_norm(&inverse_walsh(&spectrum)?);
    let constant = polarization_constant(l.d, k);
    let bound = constant * cube_norm;
    let mut r = rng::seeded(seed);
    let draw = |r: &mut rng::Rng, vertex: bool| -> Vec<f64> {
        (0..l.n)
            .map(|_| {
                if vertex {
                    if r.gen::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    r.gen_range(-1.0..=1.0)
                }
            })
            .collect()
    };
    let mut max_value = 0.0f64;
    for t in 0..trials {
        let x = draw(&mut r, t % 2 == 0);
        let y = draw(&mut r, t % 2 == 0);
        max_value = max_value.max(l.eval_split(&x, &y, k)?.abs());
    }
    Ok(PolarizationReport {
        d: l.d,
        k,
        trials,
        cube_norm,
        constant,
        max_value,
        bound,
        pass: max_value <= bound * (1.0 + 1e-12) + 1e-12,
    })
}

/// `C(d,k) = ((k+1)/(k-1))^{(d-k)/2} (1+sqrt2)^d d^d / (k^k (d-k)^{d-k})` for `1 < k < d`.
pub fn inductive_constant(d: usize, k: usize) -> Result<f64> {
    if !(1 < k && k < d) {
        return invalid(format!("inductive step needs 1 < k < d, got d={d}, k={k}"));
    }
    let ratio = (k as f64 + 1.0) / (k as f64 - 1.0);
    Ok(ratio.powf((d - k) as f64 / 2.0) * (1.0 + SQRT_2).powi(d as i32) * pow_self(d)
        / (pow_self(k) * pow_self(d - k)))
}

/// The `k = 1` branch of the inductive step, with moment constant `e` for `p = 1`.
pub fn inductive_constant_linear(d: usize) -> Result<f64> {
    if d < 2 {
        return invalid(format!("linear branch needs d >= 2, got {d}"));
    }
    Ok(E.powi(d as i32 - 1) * (1.0 + SQRT_2).powi(d as i32) * pow_self(d) / pow_self(d - 1))
}

/// Base case for the constant recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BhBase {
    /// `B(1) = 1`, `B(2) = sqrt 2`: optimal Boolean values, then the `1 < k < d` recursion.
    BooleanOptimal,
    /// Homogeneous chain from `B(1) = 1` using the `k = 1` branch as well, lifted
    /// to non-homogeneous degree-`<= d` functions by `(1+sqrt2)^d sum_k B_hom(k)`.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BhUpperBound {
    pub d: usize,
    pub value: f64,
    pub base: BhBase,
    /// `homogeneous[k]` is the bound used for degree-`k` homogeneous parts.
    pub homogeneous: Vec<f64>,
    pub provenance: String,
}

/// Upper bound on the Boolean BH constant of degree `d`.
pub fn bh_constant_upper(d: usize, base: BhBase) -> Result<BhUpperBound> {
    if d == 0 {
        return invalid("degree must be at least 1");
    }
    match base {
        BhBase::BooleanOptimal => {
            let mut b = vec![1.0, 1.0, SQRT_2];
            for dd in 3..=d {
                let best = (2..dd)
                    .map(|k| inductive_constant(dd, k).map(|c| c * b[k]))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                b.push(best);
            }
            b.truncate(d + 1);
            Ok(BhUpperBound {
                d,
                value: b[d],
                base,
                homogeneous: b,
                provenance: "inductive-step from optimal Boolean base".into(),
            })
        }
        BhBase::General => {
            let mut h = vec![1.0, 1.0];
            for dd in 2..=d {
                let mut best = inductive_constant_linear(dd)? * h[1];
                for (k, hk) in h.iter().enumerate().take(dd).skip(2) {
                    best = best.min(inductive_constant(dd, k)? * hk);
                }
                h.push(best);
            }
            let value = if d == 1 {
                1.0
            } else {
                (1.0 + SQRT_2).powi(d as i32) * h.iter().take(d + 1).sum::<f64>()
            };
            h.truncate(d + 1);
            Ok(BhUpperBound {
                d,
                value,
                base,
                homogeneous: h,
                provenance: "inductive-step with linear branch, Markov lift of homogeneous parts"
                    .into(),
            })
        }
    }
}

/// `||f^||_{2d/(d+1)} / ||f||_inf` with `d = max(degree, 1)`.
pub fn bh_ratio(s: &WalshSpectrum) -> Result<f64> {
    let d = s.degree().max(1) as f64;
    let f = inverse_walsh(s)?;
    let sup = sup_norm(&f);
    if sup == 0.0 {
        return invalid("BH ratio is undefined for the zero function");
    }
    Ok(coeff_lp_norm(s, 2.0 * d / (d + 1.0))? / sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_cube::Subset;

    #[test]
    fn mixed_norm_hand_example() {
        // a = [[1, 2], [3, 4]] with p = (1, 2): sqrt(5) + 5
        let t = MixedTensor::new(
            2,
            2,
            [1.0, 2.0, 3.0, 4.0].iter().map(|&v| C64::new(v, 0.0)).collect(),
        )
        .unwrap();
        let v = mixed_lp_norm(&t, &[1.0, 2.0]).unwrap();
        assert!((v - (5f64.sqrt() + 5.0)).abs() < 1e-14);
        assert!(mixed_lp_norm(&t, &[1.0]).is_err());
    }

    #[test]
    fn blei_identity_matrix() {
        let t = MixedTensor::from_fn(2, 2, |i| if i[0] == i[1] { C64::new(1.0, 0.0) } else { ZERO })
            .unwrap();
        let (lhs, rhs) = blei_sides(&t, 1).unwrap();
        assert!((lhs - 2f64.powf(0.75)).abs() < 1e-14);
        assert!((rhs - 2.0).abs() < 1e-14);
        assert!(blei_sides(&t, 2).is_err());
    }

    #[test]
    fn littlewood_identity() {
        let (lhs, rhs) = littlewood_sides(&CMatrix::identity(2), 24).unwrap();
        assert!((lhs - 2f64.powf(0.75)).abs() < 1e-14);
        assert!((rhs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn littlewood_grid_cap() {
        assert!(matches!(
            littlewood_sides(&CMatrix::identity(4), 24),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn polarize_x1x2() {
        let s = WalshSpectrum::from_pairs(2, [(Subset::from_indices([0, 1]), 1.0)]).unwrap();
        let l = polarize(&s).unwrap();
        assert_eq!(l.coeffs(), &[0.0, 0.5, 0.5, 0.0]);
        let v = l.eval(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(v, 0.5);
        let mixed = WalshSpectrum::from_pairs(
            2,
            [(Subset::from_indices([0, 1]), 1.0), (Subset::from_indices([0]), 1.0)],
        )
        .unwrap();
        assert!(polarize(&mixed).is_err());
    }

    #[test]
    fn inductive_constant_d3_k2() {
        let expected = 3f64.sqrt() * (1.0 + SQRT_2).powi(3) * 27.0 / 4.0;
        assert!((inductive_constant(3, 2).unwrap() - expected).abs() < 1e-12 * expected);
        assert!(inductive_constant(3, 1).is_err());
        assert!(inductive_constant(3, 3).is_err());
    }

    #[test]
    fn boolean_base_values() {
        let b = bh_constant_upper(2, BhBase::BooleanOptimal).unwrap();
        assert_eq!(b.value, SQRT_2);
        let b3 = bh_constant_upper(3, BhBase::BooleanOptimal).unwrap();
        assert!((b3.value - inductive_constant(3, 2).unwrap() * SQRT_2).abs() < 1e-9);
        assert_eq!(bh_constant_upper(1, BhBase::General).unwrap().value, 1.0);
    }

    #[test]
    fn bh_ratio_of_two_bit_and_is_sqrt2() {
        let s = WalshSpectrum::from_pairs(
            2,
            [
                (Subset::from_mask(0), 0.5),
                (Subset::from_mask(1), 0.5),
                (Subset::from_mask(2), 0.5),
                (Subset::from_mask(3), -0.5),
            ],
        )
        .unwrap();
        assert!((bh_ratio(&s).unwrap() - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn polarization_constant_is_one_for_full_split() {
        // k = d: d^d/(d^d 0^0) * d! 0!/d! = 1 times the Markov factor
        assert!((polarization_constant(3, 3) - (1.0 + SQRT_2).powi(3)).abs() < 1e-12);
    }
}
