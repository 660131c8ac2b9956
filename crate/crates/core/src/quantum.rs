//! Pauli and Heisenberg-Weyl expansions of observables, and their reduction to
//! classical polynomials on `{-1,1}^{3n}` and `Omega_K^{(K+1)n}`.
//!
//! Tensor factor 0 is the leftmost one, i.e. the most significant digit of a
//! row index. Pauli words are base-4 integers with site `j` in bits `2j..2j+1`.

use std::collections::BTreeMap;

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bh_core::{bh_constant_upper, BhBase};
use crate::boolean_cube::{coeff_lp_norm, inverse_walsh, sup_norm, Subset, WalshSpectrum};
use crate::cyclic::{is_prime, root, CyclicPolynomial};
use crate::error::{invalid, Error, Result};
use crate::limits::{check_product, DROP_TOL};
use crate::linalg::{eigen_normal, inner, operator_norm, CMatrix, C64, ONE, ZERO};
use crate::rng;

const I: C64 = C64::new(0.0, 1.0);

fn i_pow(k: u32) -> C64 {
    [ONE, I, -ONE, -I][(k % 4) as usize]
}

/// `sigma_0..sigma_3 = I, X, Y, Z`.
pub fn pauli_matrix(s: u8) -> CMatrix {
    let z = ZERO;
    let rows = match s {
        0 => [[ONE, z], [z, ONE]],
        1 => [[z, ONE], [ONE, z]],
        2 => [[z, -I], [I, z]],
        _ => [[ONE, z], [z, -ONE]],
    };
    CMatrix::from_fn(2, 2, |r, c| rows[r][c])
}

/// `(x, z)` bits with `sigma_s = i^{x z} X^x Z^z`.
fn pauli_xz(s: u8) -> (bool, bool) {
    match s {
        0 => (false, false),
        1 => (true, false),
        2 => (true, true),
        _ => (false, true),
    }
}

pub fn pauli_digit(word: u64, j: usize) -> u8 {
    (word >> (2 * j) & 3) as u8
}

/// Number of non-identity sites.
pub fn pauli_weight(word: u64) -> usize {
    let low = 0x5555_5555_5555_5555u64;
    ((word | word >> 1) & low).count_ones() as usize
}

/// Sparse Pauli expansion `A = sum_s A_s sigma_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliObservable {
    n: usize,
    coeffs: BTreeMap<u64, C64>,
}

impl PauliObservable {
    pub fn new(n: usize) -> Result<Self> {
        if n > 32 {
            return invalid(format!("Pauli words hold at most 32 sites, got {n}"));
        }
        Ok(PauliObservable {
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_terms<I2: IntoIterator<Item = (u64, C64)>>(n: usize, terms: I2) -> Result<Self> {
        let mut p = Self::new(n)?;
        for (w, c) in terms {
            if n < 32 && w >> (2 * n) != 0 {
                return invalid(format!("word {w:#x} has sites beyond n = {n}"));
            }
            *p.coeffs.entry(w).or_insert(ZERO) += c;
        }
        p.coeffs.retain(|_, c| c.norm() >= DROP_TOL);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, word: u64) -> C64 {
        self.coeffs.get(&word).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.coeffs.iter().map(|(&w, &c)| (w, c))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|&w| pauli_weight(w)).max().unwrap_or(0)
    }

    /// `(sum_s |A_s|^p)^{1/p}`.
    pub fn coeff_lp_norm(&self, p: f64) -> f64 {
        self.coeffs.values().map(|c| c.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn require_dim(a: &CMatrix, dim: usize) -> Result<()> {
    if !a.is_square() || a.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: a.rows(),
        });
    }
    Ok(())
}

/// Reverses the low `n` bits: site masks to row-index masks.
fn site_to_index(mask: u64, n: usize) -> usize {
    (0..n).fold(0usize, |acc, j| acc | ((mask >> j & 1) as usize) << (n - 1 - j))
}

/// `A_s = 2^{-n} tr[sigma_s A]`, using one Walsh-Hadamard transform per shift pattern.
pub fn pauli_expand(a: &CMatrix, n: usize) -> Result<PauliObservable> {
    if n > 10 {
        return Err(Error::ResourceLimit(format!("Pauli expansion limited to n <= 10, got {n}")));
    }
    let dim = 1usize << n;
    require_dim(a, dim)?;
    let mut terms = Vec::new();
    let mut buf = vec![ZERO; dim];
    for xs in 0..dim as u64 {
        let xi = site_to_index(xs, n);
        for (c, slot) in buf.iter_mut().enumerate() {
            *slot = a[(c, c ^ xi)];
        }
        hadamard_complex(&mut buf);
        for zs in 0..dim as u64 {
            // tr[X^x Z^z A] = sum_c (-1)^{z.c} A[c][c^x]
            let t = buf[site_to_index(zs, n)] * i_pow((xs & zs).count_ones());
            let word = (0..n).fold(0u64, |w, j| {
                let s = match (xs >> j & 1, zs >> j & 1) {
                    (0, 0) => 0,
                    (1, 0) => 1,
                    (1, 1) => 2,
                    _ => 3,
                };
                w | s << (2 * j)
            });
            terms.push((word, t / dim as f64));
        }
    }
    PauliObservable::from_terms(n, terms)
}

fn hadamard_complex(v: &mut [C64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `sum_s A_s sigma_s` as a dense `2^n x 2^n` matrix.
pub fn pauli_synthesize(obs: &PauliObservable) -> Result<CMatrix> {
    if obs.n > 10 {
        return Err(Error::ResourceLimit(format!("dense synthesis limited to n <= 10, got {}", obs.n)));
    }
    let n = obs.n;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for (w, a) in obs.iter() {
        let (mut xs, mut zs) = (0u64, 0u64);
        for j in 0..n {
            let (x, z) = pauli_xz(pauli_digit(w, j));
            xs |= (x as u64) << j;
            zs |= (z as u64) << j;
        }
        let (xi, zi) = (site_to_index(xs, n), site_to_index(zs, n));
        let phase = a * i_pow((xs & zs).count_ones());
        for c in 0..dim {
            let sign = if (zi & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(c ^ xi, c)] += phase * sign;
        }
    }
    Ok(m)
}

/// Random Hermitian observable with Gaussian real coefficients on a random
/// subset of the Pauli words of weight at most `d`.
pub fn random_pauli_observable(n: usize, d: usize, seed: u64) -> Result<PauliObservable> {
    if n > 10 {
        return Err(Error::ResourceLimit(format!("random observables limited to n <= 10, got {n}")));
    }
    let mut r = rng::seeded(seed);
    let density: f64 = r.gen_range(0.2..=1.0);
    let mut terms = Vec::new();
    for w in 0..1u64 << (2 * n) {
        if pauli_weight(w) <= d && r.gen::<f64>() < density {
            let c: f64 = r.sample(StandardNormal);
            terms.push((w, C64::new(c, 0.0)));
        }
    }
    if terms.is_empty() {
        terms.push((0, ONE));
    }
    PauliObservable::from_terms(n, terms)
}

/// Dense random Hermitian matrix `(G + G^dagger)/2` with complex Gaussian `G`.
pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let mut r = rng::seeded(seed);
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    });
    g.add(&g.adjoint())
        .expect("square")
        .scale(C64::new(0.5, 0.0))
}

/// Dense `sigma_s` for one word.
pub fn pauli_word_matrix(word: u64, n: usize) -> Result<CMatrix> {
    pauli_synthesize(&PauliObservable::from_terms(n, [(word, ONE)])?)
}

/// Largest entry of `sigma_j sigma_k + sigma_k sigma_j - 2 delta_jk I` over `1 <= j, k <= 3`.
pub fn pauli_anticommutation_check() -> Result<f64> {
    let id = CMatrix::identity(2);
    let mut worst = 0.0f64;
    for j in 1..=3u8 {
        for k in 1..=3u8 {
            let (a, b) = (pauli_matrix(j), pauli_matrix(k));
            let anti = a.mul(&b)?.add(&b.mul(&a)?)?;
            let expected = if j == k { id.scale(C64::new(2.0, 0.0)) } else { CMatrix::zeros(2, 2) };
            worst = worst.max(anti.max_abs_diff(&expected));
        }
    }
    Ok(worst)
}

/// Per-site mixtures of rank-one eigenprojectors.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityAssignment {
    pub sites: Vec<Vec<(f64, CMatrix)>>,
}

impl DensityAssignment {
    pub fn site_matrix(&self, j: usize) -> CMatrix {
        let dim = self.sites[j][0].1.rows();
        self.sites[j].iter().fold(CMatrix::zeros(dim, dim), |acc, (w, p)| {
            acc.add(&p.scale(C64::new(*w, 0.0))).expect("equal site dimensions")
        })
    }

    /// Largest deviation of `tr rho_j` from 1 and most negative eigenvalue over all sites.
    pub fn validity(&self) -> Result<(f64, f64)> {
        let mut trace_err = 0.0f64;
        let mut min_eig = f64::INFINITY;
        for j in 0..self.sites.len() {
            let rho = self.site_matrix(j);
            trace_err = trace_err.max((rho.trace() - ONE).norm());
            for (e, _) in eigen_normal(&rho)? {
                min_eig = min_eig.min(e.re);
            }
        }
        Ok((trace_err, min_eig))
    }

    /// Dense tensor product of the site matrices, site 0 leftmost.
    pub fn dense(&self) -> Result<CMatrix> {
        let dims: Vec<usize> = self.sites.iter().map(|s| s[0].1.rows()).collect();
        let total = check_product(&dims, "dense density matrix")?;
        if total > 4096 {
            return Err(Error::ResourceLimit(format!("dense density of dimension {total}")));
        }
        Ok((0..self.sites.len()).fold(CMatrix::identity(1), |acc, j| acc.kron(&self.site_matrix(j))))
    }
}

fn projector(v: &[C64]) -> CMatrix {
    CMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
}

/// Unit eigenvector of `sigma_kappa` with eigenvalue `sign`.
fn pauli_eigenvector(kappa: u8, sign: f64) -> Result<Vec<C64>> {
    eigen_normal(&pauli_matrix(kappa))?
        .into_iter()
        .find(|(e, _)| (e.re - sign).abs() < 1e-9)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Hypothesis(format!("sigma_{kappa} has no eigenvalue {sign}")))
}

/// Boolean variable index of `epsilon^{(kappa)}_j`, `kappa = 1..3`.
pub fn qubit_variable(kappa: u8, j: usize, n: usize) -> usize {
    (kappa as usize - 1) * n + j
}

fn bit_sign(mask: u64, v: usize) -> f64 {
    if mask >> v & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `rho_j(eps) = (1/3) sum_kappa |e^kappa_{eps^(kappa)_j}><e^kappa_{eps^(kappa)_j}|`.
pub fn qubit_density(n: usize, eps: u64) -> Result<DensityAssignment> {
    let mut vecs = BTreeMap::new();
    for kappa in 1..=3u8 {
        for sign in [1i8, -1] {
            vecs.insert((kappa, sign), projector(&pauli_eigenvector(kappa, sign as f64)?));
        }
    }
    let sites = (0..n)
        .map(|j| {
            (1..=3u8)
                .map(|kappa| {
                    let sign = bit_sign(eps, qubit_variable(kappa, j, n)) as i8;
                    (1.0 / 3.0, vecs[&(kappa, sign)].clone())
                })
                .collect()
        })
        .collect();
    Ok(DensityAssignment { sites })
}

/// `f_A` on `{-1,1}^{3n}` together with its exact spectrum.
#[derive(Clone, Debug)]
pub struct QubitReduction {
    pub observable: PauliObservable,
    pub spectrum: WalshSpectrum,
}

/// Coefficient law: word `s` becomes `3^{-|s|} A_s prod_{j in supp s} eps^{(s_j)}_j`.
pub fn reduce_qubit(obs: &PauliObservable) -> Result<QubitReduction> {
    let n = obs.n;
    let scale = obs.iter().fold(0.0f64, |m, (_, c)| m.max(c.norm()));
    let mut pairs = Vec::new();
    for (w, c) in obs.iter() {
        if c.im.abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::Hypothesis(format!("non-real Pauli coefficient {c}: A is not Hermitian")));
        }
        let vars = (0..n)
            .filter(|&j| pauli_digit(w, j) != 0)
            .map(|j| qubit_variable(pauli_digit(w, j), j, n) as u32);
        pairs.push((Subset::from_indices(vars), c.re / 3f64.powi(pauli_weight(w) as i32)));
    }
    Ok(QubitReduction {
        observable: obs.clone(),
        spectrum: WalshSpectrum::from_pairs(3 * n, pairs)?,
    })
}

impl QubitReduction {
    /// `tr[A rho(eps)]` as a sum over words of products of per-site `2 x 2` traces.
    pub fn evaluate(&self, eps: u64) -> Result<f64> {
        let n = self.observable.n;
        if 3 * n > 64 {
            return Err(Error::ResourceLimit("packed evaluation needs 3n <= 64".into()));
        }
        let rho = qubit_density(n, eps)?;
        let sites: Vec<CMatrix> = (0..n).map(|j| rho.site_matrix(j)).collect();
        let paulis: Vec<CMatrix> = (0..4).map(pauli_matrix).collect();
        let mut traces = vec![[ZERO; 4]; n];
        for (j, site) in sites.iter().enumerate() {
            for (s, p) in paulis.iter().enumerate() {
                traces[j][s] = p.mul(site)?.trace();
            }
        }
        let total: C64 = self
            .observable
            .iter()
            .map(|(w, c)| (0..n).fold(c, |acc, j| acc * traces[j][pauli_digit(w, j) as usize]))
            .sum();
        Ok(total.re)
    }

    /// Evaluates the spectrum at a packed point.
    pub fn polynomial_value(&self, eps: u64) -> f64 {
        self.spectrum.eval_packed(&[eps])
    }
}

/// `tr[A rho(eps)]` with the full density matrix; cross-validation only.
pub fn qubit_trace_dense(a: &CMatrix, n: usize, eps: u64) -> Result<f64> {
    if n > 6 {
        return Err(Error::ResourceLimit(format!("dense trace limited to n <= 6, got {n}")));
    }
    let rho = qubit_density(n, eps)?.dense()?;
    Ok(a.mul(&rho)?.trace().re)
}

/// Quantities of the qubit BH chain for one observable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QubitBhReport {
    pub degree: usize,
    pub p: f64,
    pub coeff_norm: f64,
    pub reduced_coeff_norm: f64,
    pub reduced_sup: f64,
    pub operator_norm: f64,
    pub bh_constant: f64,
    pub rhs: f64,
    /// `||f_A^||_p >= 3^{-d} ||A^||_p`.
    pub reduction_lower_ok: bool,
    /// `||f_A^||_p <= C ||f_A||_inf`.
    pub classical_bh_ok: bool,
    /// `||f_A||_inf <= ||A||`.
    pub duality_ok: bool,
    pub pass: bool,
}

/// `||A^||_{2d/(d+1)} <= 3^d C ||A||`, with the intermediate links checked by
/// exhaustive enumeration of `f_A` over `{-1,1}^{3n}` (requires `3n <= 18`).
pub fn qubit_bh_check(a: &CMatrix, n: usize, bh_constant: f64) -> Result<QubitBhReport> {
    if 3 * n > 18 {
        return Err(Error::ResourceLimit(format!("qubit BH check enumerates 2^(3n) points, n = {n}")));
    }
    let obs = pauli_expand(a, n)?;
    let red = reduce_qubit(&obs)?;
    let degree = obs.degree().max(1);
    let p = 2.0 * degree as f64 / (degree as f64 + 1.0);
    let coeff_norm = obs.coeff_lp_norm(p);
    let reduced_coeff_norm = coeff_lp_norm(&red.spectrum, p)?;
    let reduced_sup = sup_norm(&inverse_walsh(&red.spectrum)?);
    let op = operator_norm(a)?;
    let d3 = 3f64.powi(degree as i32);
    let rhs = d3 * bh_constant * op;
    let tol = |x: f64| 1e-9 * x.max(1.0);
    let reduction_lower_ok = reduced_coeff_norm + tol(coeff_norm) >= coeff_norm / d3;
    let classical_bh_ok = reduced_coeff_norm <= bh_constant * reduced_sup + tol(reduced_sup);
    let duality_ok = reduced_sup <= op + 1e-9;
    let pass = coeff_norm <= rhs + tol(rhs) && reduction_lower_ok && classical_bh_ok && duality_ok;
    Ok(QubitBhReport {
        degree,
        p,
        coeff_norm,
        reduced_coeff_norm,
        reduced_sup,
        operator_norm: op,
        bh_constant,
        rhs,
        reduction_lower_ok,
        classical_bh_ok,
        duality_ok,
        pass,
    })
}

/// The default BH constant for the qubit chain.
pub fn default_qubit_bh_constant(d: usize) -> Result<f64> {
    Ok(bh_constant_upper(d.max(1), BhBase::General)?.value)
}

/// Shift `X|j> = |j+1>` and clock `Z|j> = omega^j |j>`.
pub fn clock_shift(k: usize) -> Result<(CMatrix, CMatrix)> {
    if k < 2 {
        return invalid(format!("clock and shift need K >= 2, got {k}"));
    }
    let x = CMatrix::from_fn(k, k, |r, c| if r == (c + 1) % k { ONE } else { ZERO });
    let z = CMatrix::from_fn(k, k, |r, c| if r == c { root(k, r) } else { ZERO });
    Ok((x, z))
}

/// `X^l Z^m` on one site.
pub fn hw_single(k: usize, l: usize, m: usize) -> Result<CMatrix> {
    if k < 2 {
        return invalid(format!("K >= 2 required, got {k}"));
    }
    Ok(CMatrix::from_fn(k, k, |r, c| {
        if r == (c + l) % k {
            root(k, m * c)
        } else {
            ZERO
        }
    }))
}

/// `X^{l_1} Z^{m_1} (x) ... (x) X^{l_n} Z^{m_n}`.
pub fn hw_word(k: usize, ls: &[u8], ms: &[u8]) -> Result<CMatrix> {
    if ls.len() != ms.len() {
        return Err(Error::DimensionMismatch {
            expected: ls.len(),
            got: ms.len(),
        });
    }
    let dim = check_product(&vec![k; ls.len()], "Heisenberg-Weyl word")?;
    if dim > 1024 {
        return Err(Error::ResourceLimit(format!("K^n = {dim} exceeds 1024")));
    }
    ls.iter().zip(ms).try_fold(CMatrix::identity(1), |acc, (&l, &m)| {
        Ok(acc.kron(&hw_single(k, l as usize % k, m as usize % k)?))
    })
}

/// Largest error in `(X^l Z^m)^k = omega^{k(k-1)lm/2} X^{kl} Z^{km}` and in
/// `AB = omega^{l_2 m_1 - l_1 m_2} BA` over all `l, m, k` (and pairs) in `Z_K`.
pub fn hw_commutation_check(k: usize) -> Result<(f64, f64)> {
    if !is_prime(k) || k > 7 {
        return Err(Error::Unsupported(format!("commutation check needs prime K <= 7, got {k}")));
    }
    let mut power_err = 0.0f64;
    for l in 0..k {
        for m in 0..k {
            let w = hw_single(k, l, m)?;
            let mut acc = CMatrix::identity(k);
            for e in 0..k {
                let phase = root(k, (e * e.saturating_sub(1) / 2 % k) * l * m);
                let expected = hw_single(k, e * l % k, e * m % k)?.scale(phase);
                power_err = power_err.max(acc.max_abs_diff(&expected));
                acc = acc.mul(&w)?;
            }
        }
    }
    let mut exchange_err = 0.0f64;
    let words: Vec<(usize, usize, CMatrix)> = (0..k * k)
        .map(|i| Ok((i / k, i % k, hw_single(k, i / k, i % k)?)))
        .collect::<Result<_>>()?;
    for (l1, m1, a) in &words {
        for (l2, m2, b) in &words {
            let phase = root(k, (l2 * m1 + k * k - l1 * m2) % k);
            let lhs = a.mul(b)?;
            let rhs = b.mul(a)?.scale(phase);
            exchange_err = exchange_err.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok((power_err, exchange_err))
}

/// Eigenpairs of `X^l Z^m` sorted by eigenvalue angle in `[0, 2 pi)`.
pub fn hw_eigensystem(k: usize, l: usize, m: usize) -> Result<Vec<(C64, Vec<C64>)>> {
    if k < 2 {
        return invalid(format!("K >= 2 required, got {k}"));
    }
    let (l, m) = (l % k, m % k);
    if gcd3(l, m, k) != 1 {
        return invalid(format!("({l},{m}) is not coprime to K = {k}"));
    }
    let mut pairs = eigen_normal(&hw_single(k, l, m)?)?;
    let angle = |z: &C64| {
        let a = z.arg();
        if a < -1e-9 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a.max(0.0)
        }
    };
    pairs.sort_by(|(x, _), (y, _)| angle(x).total_cmp(&angle(y)));
    for (i, (_, u)) in pairs.iter().enumerate() {
        for (j, (_, v)) in pairs.iter().enumerate() {
            let expected = if i == j { ONE } else { ZERO };
            if (inner(u, v) - expected).norm() > 1e-10 {
                return Err(Error::Hypothesis(format!("eigenvectors {i}, {j} are not orthonormal")));
            }
        }
    }
    if is_prime(k) && k % 2 == 1 && (l == 0 || l == 1) {
        let mut unmatched: Vec<C64> = (0..k).map(|j| root(k, j)).collect();
        for (e, _) in &pairs {
            let pos = unmatched
                .iter()
                .position(|w| (w - e).norm() <= 1e-8)
                .ok_or_else(|| Error::Hypothesis(format!("eigenvalue {e} is not a K-th root of unity")))?;
            unmatched.swap_remove(pos);
        }
    }
    Ok(pairs)
}

fn gcd3(a: usize, b: usize, c: usize) -> usize {
    fn g(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    g(g(a, b), c)
}

/// `Sigma_K = [(1,0), (1,1), ..., (1,K-1), (0,1)]`.
pub fn sigma_k(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|m| (1, m)).chain(std::iter::once((0, 1))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaCoverReport {
    pub k: usize,
    pub generators: usize,
    pub covered: usize,
    pub disjoint_off_origin: bool,
    pub pass: bool,
}

/// The cyclic subgroups generated by `Sigma_K` cover `Z_K x Z_K` and meet only at the origin.
pub fn sigma_cover_check(k: usize) -> Result<SigmaCoverReport> {
    if !is_prime(k) {
        return Err(Error::Unsupported(format!("Sigma_K cover needs prime K, got {k}")));
    }
    let mut hits = vec![0usize; k * k];
    let gens = sigma_k(k);
    for &(l, m) in &gens {
        let subgroup: std::collections::BTreeSet<(usize, usize)> =
            (0..k).map(|e| (e * l % k, e * m % k)).collect();
        for (a, b) in subgroup {
            hits[a * k + b] += 1;
        }
    }
    let covered = hits.iter().filter(|&&h| h > 0).count();
    let disjoint_off_origin = hits[1..].iter().all(|&h| h == 1);
    Ok(SigmaCoverReport {
        k,
        generators: gens.len(),
        covered,
        disjoint_off_origin,
        pass: covered == k * k && disjoint_off_origin && gens.len() == k + 1,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub lambda: (f64, f64),
    pub order: usize,
    pub max_diagonal: f64,
    pub pass: bool,
}

/// For `B` unitary of finite order and `AB = lambda BA` with `lambda != 1`,
/// every eigenvector `eta` of `B` has `<eta, A eta> = 0`.
pub fn orthogonality_lemma_check(a: &CMatrix, b: &CMatrix) -> Result<OrthogonalityReport> {
    let dim = b.rows();
    require_dim(a, dim)?;
    require_dim(b, dim)?;
    let id = CMatrix::identity(dim);
    if b.adjoint().mul(b)?.max_abs_diff(&id) > 1e-10 {
        return Err(Error::Hypothesis("B is not unitary".into()));
    }
    let order = (1..=64)
        .try_fold(b.clone(), |acc, e| {
            if acc.max_abs_diff(&id) <= 1e-10 {
                Err(e)
            } else {
                Ok(acc.mul(b).expect("square"))
            }
        })
        .err()
        .ok_or_else(|| Error::Hypothesis("B has no finite order up to 64".into()))?;
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let denom = ba.frobenius_norm().powi(2);
    if denom <= 1e-24 {
        return Err(Error::Hypothesis("BA vanishes; lambda is undetermined".into()));
    }
    let lambda = ba.frobenius_inner(&ab) / denom;
    if ab.sub(&ba.scale(lambda))?.frobenius_norm() > 1e-10 * ab.frobenius_norm().max(1.0) {
        return Err(Error::Hypothesis("A and B do not commute up to a scalar".into()));
    }
    if (lambda - ONE).norm() <= 1e-10 {
        return Err(Error::Hypothesis("AB = BA; the lemma needs lambda != 1".into()));
    }
    let max_diagonal = eigen_normal(b)?
        .iter()
        .map(|(_, eta)| inner(eta, &a.mul_vec(eta)).norm())
        .fold(0.0, f64::max);
    Ok(OrthogonalityReport {
        lambda: (lambda.re, lambda.im),
        order,
        max_diagonal,
        pass: max_diagonal <= 1e-10,
    })
}

pub type HwWord = (Vec<u8>, Vec<u8>);

/// Sparse Heisenberg-Weyl expansion `A = sum A(l, m) X^l Z^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HwRepr", into = "HwRepr")]
pub struct HWObservable {
    k: usize,
    n: usize,
    coeffs: BTreeMap<HwWord, C64>,
}

#[derive(Serialize, Deserialize)]
struct HwRepr {
    #[serde(rename = "K")]
    k: usize,
    n: usize,
    coeffs: Vec<(Vec<u8>, Vec<u8>, f64, f64)>,
}

impl TryFrom<HwRepr> for HWObservable {
    type Error = Error;
    fn try_from(r: HwRepr) -> Result<Self> {
        HWObservable::from_terms(
            r.k,
            r.n,
            r.coeffs.into_iter().map(|(l, m, re, im)| ((l, m), C64::new(re, im))),
        )
    }
}

impl From<HWObservable> for HwRepr {
    fn from(h: HWObservable) -> Self {
        HwRepr {
            k: h.k,
            n: h.n,
            coeffs: h
                .coeffs
                .into_iter()
                .map(|((l, m), c)| (l, m, c.re, c.im))
                .collect(),
        }
    }
}

impl HWObservable {
    pub fn from_terms<I2: IntoIterator<Item = (HwWord, C64)>>(k: usize, n: usize, terms: I2) -> Result<Self> {
        if !is_prime(k) {
            return Err(Error::Unsupported(format!("Heisenberg-Weyl observables need prime K, got {k}")));
        }
        let mut coeffs: BTreeMap<HwWord, C64> = BTreeMap::new();
        for ((l, m), c) in terms {
            if l.len() != n || m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: l.len().min(m.len()),
                });
            }
            if l.iter().chain(&m).any(|&e| e as usize >= k) {
                return invalid(format!("word entries must lie in 0..{k}"));
            }
            *coeffs.entry((l, m)).or_insert(ZERO) += c;
        }
        coeffs.retain(|_, c| c.norm() >= DROP_TOL);
        Ok(HWObservable { k, n, coeffs })
    }

    pub fn k(&self) -> usize {
        self.k
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

    pub fn iter(&self) -> impl Iterator<Item = (&HwWord, C64)> + '_ {
        self.coeffs.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, l: &[u8], m: &[u8]) -> C64 {
        self.coeffs.get(&(l.to_vec(), m.to_vec())).copied().unwrap_or(ZERO)
    }

    /// `max sum_j (l_j + m_j)`.
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|(l, m)| l.iter().chain(m).map(|&e| e as usize).sum::<usize>())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff_lp_norm(&self, p: f64) -> f64 {
        self.coeffs.values().map(|c| c.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `A(l, m) = K^{-n} tr[(X^l Z^m)^dagger A]`.
pub fn hw_expand(a: &CMatrix, k: usize, n: usize) -> Result<HWObservable> {
    if !is_prime(k) {
        return Err(Error::Unsupported(format!("Heisenberg-Weyl expansion needs prime K, got {k}")));
    }
    let dim = check_product(&vec![k; n], "Heisenberg-Weyl expansion")? as usize;
    if dim > 1024 {
        return Err(Error::ResourceLimit(format!("K^n = {dim} exceeds 1024")));
    }
    require_dim(a, dim)?;
    check_product(&vec![k; 3 * n], "Heisenberg-Weyl expansion work")?;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; n];
        for j in (0..n).rev() {
            d[j] = x % k;
            x /= k;
        }
        d
    };
    let index = |d: &[usize]| d.iter().fold(0usize, |acc, &x| acc * k + x);
    let cols: Vec<Vec<usize>> = (0..dim).map(digits).collect();
    let mut terms = Vec::new();
    for lw in 0..dim {
        let l = digits(lw);
        // row index of X^l applied to each column
        let shifted: Vec<usize> = cols
            .iter()
            .map(|c| index(&c.iter().zip(&l).map(|(&ci, &li)| (ci + li) % k).collect::<Vec<_>>()))
            .collect();
        for mw in 0..dim {
            let m = digits(mw);
            let t: C64 = (0..dim)
                .map(|c| {
                    let e = cols[c].iter().zip(&m).map(|(&ci, &mi)| ci * mi).sum::<usize>();
                    root(k, e).conj() * a[(shifted[c], c)]
                })
                .sum();
            let word = (l.iter().map(|&x| x as u8).collect(), m.iter().map(|&x| x as u8).collect());
            terms.push((word, t / dim as f64));
        }
    }
    HWObservable::from_terms(k, n, terms)
}

/// `sum A(l, m) X^l Z^m` as a dense matrix.
pub fn hw_synthesize(obs: &HWObservable) -> Result<CMatrix> {
    let dim = check_product(&vec![obs.k; obs.n], "Heisenberg-Weyl synthesis")? as usize;
    if dim > 1024 {
        return Err(Error::ResourceLimit(format!("K^n = {dim} exceeds 1024")));
    }
    let mut out = CMatrix::zeros(dim, dim);
    for ((l, m), c) in obs.iter() {
        out.axpy(c, &hw_word(obs.k, l, m)?)?;
    }
    Ok(out)
}

/// Where the nonzero pair `(a, b)` lands in the reduction: generator index in
/// `Sigma_K`, power `k` with `(a, b) = k (l, m)`, and phase exponent `-k(k-1)lm/2 mod K`.
pub fn sigma_decompose(k: usize, a: usize, b: usize) -> Result<(usize, usize, usize)> {
    let (a, b) = (a % k, b % k);
    if a == 0 && b == 0 {
        return invalid("the zero pair has no generator");
    }
    if a == 0 {
        return Ok((k, b, 0));
    }
    let inv = (1..k).find(|x| x * a % k == 1).ok_or_else(|| Error::Unsupported(format!("{a} not invertible mod {k}")))?;
    let m = b * inv % k;
    let e = a * (a - 1) / 2 % k * m % k;
    Ok((m, a, (k - e) % k))
}

/// Variable index of `omega^{(sigma)}_j` among the `(K+1) n` variables.
pub fn qudit_variable(sigma: usize, j: usize, n: usize) -> usize {
    sigma * n + j
}

/// Eigenvectors of every generator in `Sigma_K`, indexed `[sigma][exponent of the eigenvalue]`.
fn sigma_eigenvectors(k: usize) -> Result<Vec<Vec<Vec<C64>>>> {
    sigma_k(k)
        .into_iter()
        .map(|(l, m)| {
            let pairs = hw_eigensystem(k, l, m)?;
            (0..k)
                .map(|e| {
                    let w = root(k, e);
                    pairs
                        .iter()
                        .find(|(v, _)| (v - w).norm() <= 1e-8)
                        .map(|(_, vec)| vec.clone())
                        .ok_or_else(|| Error::Hypothesis(format!("missing eigenvalue omega^{e}")))
                })
                .collect()
        })
        .collect()
}

/// `rho_j = (K+1)^{-1} sum_{(l,m) in Sigma_K} |e^{l,m}_{z}><e^{l,m}_{z}|` with
/// `z = omega^{exps[sigma n + j]}`.
pub fn qudit_density(k: usize, n: usize, exps: &[usize]) -> Result<DensityAssignment> {
    if exps.len() != (k + 1) * n {
        return Err(Error::DimensionMismatch {
            expected: (k + 1) * n,
            got: exps.len(),
        });
    }
    let vecs = sigma_eigenvectors(k)?;
    let w = 1.0 / (k + 1) as f64;
    let sites = (0..n)
        .map(|j| {
            (0..=k)
                .map(|s| (w, projector(&vecs[s][exps[qudit_variable(s, j, n)] % k])))
                .collect()
        })
        .collect();
    Ok(DensityAssignment { sites })
}

/// `f_A` on `Omega_K^{(K+1)n}` together with its exact cyclic polynomial.
#[derive(Clone, Debug)]
pub struct QuditReduction {
    pub observable: HWObservable,
    pub poly: CyclicPolynomial,
}

/// Word `(l, m)` becomes `(K+1)^{-kappa} omega^{-sum k_j(k_j-1) l_j m_j / 2} A(l, m) prod_j z_{sigma_j, j}^{k_j}`.
pub fn reduce_qudit(obs: &HWObservable) -> Result<QuditReduction> {
    let (k, n) = (obs.k, obs.n);
    let vars = (k + 1) * n;
    let mut terms = Vec::new();
    for ((l, m), c) in obs.iter() {
        let mut alpha = vec![0u8; vars];
        let mut coeff = c;
        for j in 0..n {
            let (a, b) = (l[j] as usize, m[j] as usize);
            if a == 0 && b == 0 {
                continue;
            }
            let (sigma, power, phase) = sigma_decompose(k, a, b)?;
            alpha[qudit_variable(sigma, j, n)] = power as u8;
            coeff *= root(k, phase) / (k + 1) as f64;
        }
        terms.push((alpha, coeff));
    }
    Ok(QuditReduction {
        observable: obs.clone(),
        poly: CyclicPolynomial::from_terms(k, vars, terms)?,
    })
}

impl QuditReduction {
    /// `tr[A rho(omega)]` from per-site `K x K` traces; `exps[v]` is the exponent of variable `v`.
    pub fn evaluate(&self, exps: &[usize]) -> Result<C64> {
        let (k, n) = (self.observable.k, self.observable.n);
        let rho = qudit_density(k, n, exps)?;
        let sites: Vec<CMatrix> = (0..n).map(|j| rho.site_matrix(j)).collect();
        let mut cache: BTreeMap<(usize, u8, u8), C64> = BTreeMap::new();
        let mut total = ZERO;
        for ((l, m), c) in self.observable.iter() {
            let mut v = c;
            for j in 0..n {
                let key = (j, l[j], m[j]);
                let t = match cache.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = hw_single(k, l[j] as usize, m[j] as usize)?.mul(&sites[j])?.trace();
                        cache.insert(key, t);
                        t
                    }
                };
                v *= t;
            }
            total += v;
        }
        Ok(total)
    }

    pub fn polynomial_value(&self, exps: &[usize]) -> Result<C64> {
        let k = self.observable.k;
        let z: Vec<C64> = exps.iter().map(|&e| root(k, e)).collect();
        self.poly.eval(&z)
    }
}

/// `tr[A rho(omega)]` with the full density matrix; cross-validation only.
pub fn qudit_trace_dense(a: &CMatrix, k: usize, n: usize, exps: &[usize]) -> Result<C64> {
    if n > 3 {
        return Err(Error::ResourceLimit(format!("dense qudit trace limited to n <= 3, got {n}")));
    }
    let rho = qudit_density(k, n, exps)?.dense()?;
    Ok(a.mul(&rho)?.trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_pow(a: &CMatrix, e: usize) -> Result<CMatrix> {
        (0..e).try_fold(CMatrix::identity(a.rows()), |acc, _| acc.mul(a))
    }

    #[test]
    fn single_pauli_expands_to_one_word() {
        // sigma_1 (x) sigma_0: site 0 carries digit 1
        let a = pauli_matrix(1).kron(&pauli_matrix(0));
        let obs = pauli_expand(&a, 2).unwrap();
        assert_eq!(obs.iter().collect::<Vec<_>>(), vec![(1, ONE)]);
        let id = pauli_expand(&CMatrix::identity(4), 2).unwrap();
        assert_eq!(id.iter().collect::<Vec<_>>(), vec![(0, ONE)]);
    }

    #[test]
    fn pauli_word_matches_kronecker() {
        // word (2, 3): sigma_2 at site 0, sigma_3 at site 1
        let w = pauli_word_matrix(2 | 3 << 2, 2).unwrap();
        let k = pauli_matrix(2).kron(&pauli_matrix(3));
        assert!(w.max_abs_diff(&k) < 1e-15);
    }

    #[test]
    fn anticommutation() {
        assert!(pauli_anticommutation_check().unwrap() <= 1e-15);
    }

    #[test]
    fn clock_shift_basics() {
        let (x, z) = clock_shift(2).unwrap();
        assert!(x.max_abs_diff(&pauli_matrix(1)) < 1e-15);
        assert!(z.max_abs_diff(&pauli_matrix(3)) < 1e-15);
        let (x, z) = clock_shift(3).unwrap();
        assert!(mat_pow(&x, 3).unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        assert!(mat_pow(&z, 3).unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        let zx = z.mul(&x).unwrap();
        let xz = x.mul(&z).unwrap().scale(root(3, 1));
        assert!(zx.max_abs_diff(&xz) < 1e-12);
    }

    #[test]
    fn commutation_identities() {
        for k in [3, 5, 7] {
            let (p, e) = hw_commutation_check(k).unwrap();
            assert!(p <= 1e-12 && e <= 1e-12, "K={k}: {p} {e}");
        }
    }

    #[test]
    fn sigma_cover_counts() {
        for k in [3, 5, 7] {
            assert!(sigma_cover_check(k).unwrap().pass);
        }
        assert!(matches!(sigma_cover_check(4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sigma_decompose_reconstructs_pairs() {
        for k in [3, 5, 7] {
            let gens = sigma_k(k);
            for a in 0..k {
                for b in 0..k {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let (s, p, _) = sigma_decompose(k, a, b).unwrap();
                    let (l, m) = gens[s];
                    assert_eq!((p * l % k, p * m % k), (a, b));
                }
            }
        }
    }

    #[test]
    fn qubit_reduction_single_site() {
        let obs = PauliObservable::from_terms(1, [(3, ONE)]).unwrap();
        let red = reduce_qubit(&obs).unwrap();
        // variable of eps^(3)_0 is index 2
        for eps in 0..8u64 {
            let expected = bit_sign(eps, 2) / 3.0;
            assert!((red.evaluate(eps).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn orthogonality_examples() {
        let r = orthogonality_lemma_check(&pauli_matrix(1), &pauli_matrix(3)).unwrap();
        assert!(r.pass);
        assert!((r.lambda.0 + 1.0).abs() < 1e-12);
        let (x, z) = clock_shift(3).unwrap();
        assert!(orthogonality_lemma_check(&x, &z).unwrap().pass);
        assert!(matches!(
            orthogonality_lemma_check(&pauli_matrix(3), &pauli_matrix(3)),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn qudit_x_reduces_to_quarter_variable() {
        let obs = HWObservable::from_terms(3, 1, [((vec![1], vec![0]), ONE)]).unwrap();
        let red = reduce_qudit(&obs).unwrap();
        assert_eq!(red.poly.len(), 1);
        let (alpha, c) = red.poly.terms().next().unwrap();
        assert_eq!(alpha, &vec![1, 0, 0, 0]);
        assert!((c - C64::new(0.25, 0.0)).norm() < 1e-15);
        let exps = [2, 0, 1, 1];
        let v = red.evaluate(&exps).unwrap();
        assert!((v - root(3, 2) / 4.0).norm() < 1e-12);
    }

    #[test]
    fn hw_json_shape() {
        let obs = HWObservable::from_terms(3, 1, [((vec![1], vec![2]), C64::new(0.5, -1.0))]).unwrap();
        let s = serde_json::to_string(&obs).unwrap();
        assert_eq!(s, r#"{"K":3,"n":1,"coeffs":[[[1],[2],0.5,-1.0]]}"#);
        let back: HWObservable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, obs);
    }
}
