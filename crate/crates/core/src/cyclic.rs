//! Polynomials on products of cyclic groups `Omega_K^n`, `Omega_K` the `K`-th roots of unity.
//!
//! A polynomial is a sparse map from exponent vectors `alpha in {0..K-1}^n` to
//! complex coefficients. Sup norms over finite grids are computed by exhaustive
//! enumeration with incremental phase updates.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::limits::{check_product, DROP_TOL};
use crate::report::CheckRecord;
use crate::linalg::{inf_norm, inverse, solve, CMatrix, C64, ONE, ZERO};
use crate::rng;

/// `2 + 2 sqrt 2`, the per-variable cost of one pseudo-projection.
pub const PSEUDO_PROJECTION_BASE: f64 = 2.0 + 2.0 * SQRT_2;

/// Relative tolerance under which two tau factors are considered equal.
pub const TAU_TOL: f64 = 1e-9;

pub fn is_prime(k: usize) -> bool {
    k >= 2 && (2..).take_while(|p| p * p <= k).all(|p| !k.is_multiple_of(p))
}

fn require_prime(k: usize) -> Result<()> {
    if !is_prime(k) {
        return Err(Error::Unsupported(format!("K = {k} is not prime")));
    }
    Ok(())
}

/// `omega_m^j = e^{2 pi i j / m}`.
pub fn root(m: usize, j: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (j % m) as f64 / m as f64)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub type Exponents = Vec<u8>;

/// Sparse polynomial `sum_alpha a_alpha z^alpha` with `alpha_j < K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicPolynomial {
    k: usize,
    n: usize,
    #[serde(serialize_with = "serialize_terms")]
    coeffs: BTreeMap<Exponents, C64>,
}

fn serialize_terms<S: serde::Serializer>(
    coeffs: &BTreeMap<Exponents, C64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(coeffs.len()))?;
    for (alpha, c) in coeffs {
        seq.serialize_element(&(alpha, c.re, c.im))?;
    }
    seq.end()
}

impl CyclicPolynomial {
    pub fn zero(k: usize, n: usize) -> Result<Self> {
        require_prime(k)?;
        Ok(CyclicPolynomial {
            k,
            n,
            coeffs: BTreeMap::new(),
        })
    }

    /// Sums repeated exponents and drops coefficients below the drop tolerance.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, C64)>>(
        k: usize,
        n: usize,
        terms: I,
    ) -> Result<Self> {
        let mut p = Self::zero(k, n)?;
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        p.prune();
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: Exponents, c: C64) -> Result<()> {
        if alpha.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        if let Some(&bad) = alpha.iter().find(|&&a| a as usize >= self.k) {
            return invalid(format!("exponent {bad} is not below K = {}", self.k));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return invalid("non-finite coefficient");
        }
        *self.coeffs.entry(alpha).or_insert(ZERO) += c;
        Ok(())
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() >= DROP_TOL);
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

    pub fn coeff(&self, alpha: &[u8]) -> C64 {
        self.coeffs.get(alpha).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, C64)> + '_ {
        self.coeffs.iter().map(|(a, &c)| (a, c))
    }

    /// Total degree `max sum_j alpha_j`.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|a| total_degree(a)).max().unwrap_or(0)
    }

    /// Largest support size `max |{j : alpha_j != 0}|`.
    pub fn max_support(&self) -> usize {
        self.coeffs.keys().map(|a| support_size(a)).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .iter()
                    .zip(z)
                    .fold(*c, |acc, (&a, &zj)| acc * zj.powu(a as u32))
            })
            .sum())
    }

    /// `f(r z)`: each coefficient scaled by `r^{|alpha|}`.
    pub fn dilate(&self, r: f64) -> CyclicPolynomial {
        CyclicPolynomial {
            k: self.k,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c * r.powi(total_degree(a) as i32)))
                .collect(),
        }
    }

    fn with_coeffs(&self, coeffs: BTreeMap<Exponents, C64>) -> CyclicPolynomial {
        let mut p = CyclicPolynomial {
            k: self.k,
            n: self.n,
            coeffs,
        };
        p.prune();
        p
    }

    /// Largest coefficient difference against another polynomial.
    pub fn max_coeff_diff(&self, other: &CyclicPolynomial) -> f64 {
        let mut m = 0.0f64;
        for (a, c) in &self.coeffs {
            m = m.max((c - other.coeff(a)).norm());
        }
        for (a, c) in &other.coeffs {
            if !self.coeffs.contains_key(a) {
                m = m.max(c.norm());
            }
        }
        m
    }

    /// Random polynomial of total degree at most `d` with complex Gaussian
    /// coefficients on a random subset of the admissible monomials.
    pub fn random(k: usize, n: usize, d: usize, seed: u64) -> Result<Self> {
        require_prime(k)?;
        let mut r = rng::seeded(seed);
        let density: f64 = r.gen_range(0.15..=1.0);
        let mut terms = Vec::new();
        let mut alpha = vec![0u8; n];
        enumerate_exponents(k, d, 0, &mut alpha, &mut |a| {
            if r.gen::<f64>() < density {
                let re: f64 = r.sample(StandardNormal);
                let im: f64 = r.sample(StandardNormal);
                terms.push((a.to_vec(), C64::new(re, im)));
            }
        });
        if terms.is_empty() {
            terms.push((vec![0u8; n], ONE));
        }
        Self::from_terms(k, n, terms)
    }
}

fn enumerate_exponents(k: usize, budget: usize, j: usize, alpha: &mut [u8], f: &mut impl FnMut(&[u8])) {
    if j == alpha.len() {
        f(alpha);
        return;
    }
    for a in 0..k.min(budget + 1) {
        alpha[j] = a as u8;
        enumerate_exponents(k, budget - a, j + 1, alpha, f);
    }
    alpha[j] = 0;
}

pub fn total_degree(alpha: &[u8]) -> usize {
    alpha.iter().map(|&a| a as usize).sum()
}

pub fn support_size(alpha: &[u8]) -> usize {
    alpha.iter().filter(|&&a| a != 0).count()
}

/// `max |sum_t c_t prod_j omega_{M_j}^{e_tj x_j}|` over the product grid `x_j in Z_{M_j}`.
fn grid_sup(orders: &[usize], terms: &[(Vec<usize>, C64)]) -> Result<f64> {
    check_product(orders, "grid enumeration")?;
    if terms.is_empty() {
        return Ok(0.0);
    }
    let l = orders.iter().fold(1, |acc, &m| lcm(acc, m));
    let roots: Vec<C64> = (0..l).map(|j| root(l, j)).collect();
    let nv = orders.len();
    let coeffs: Vec<C64> = terms.iter().map(|(_, c)| *c).collect();
    if nv == 0 {
        return Ok(coeffs.iter().sum::<C64>().norm());
    }
    let inc: Vec<Vec<usize>> = (0..nv)
        .map(|j| {
            terms
                .iter()
                .map(|(e, _)| (e[j] % orders[j]) * (l / orders[j]) % l)
                .collect()
        })
        .collect();
    let wrap: Vec<Vec<usize>> = (0..nv)
        .map(|j| {
            inc[j]
                .iter()
                .map(|&s| (l - (orders[j] - 1) * s % l) % l)
                .collect()
        })
        .collect();
    let value = |phase: &[usize]| -> f64 {
        coeffs
            .iter()
            .zip(phase)
            .map(|(c, &p)| c * roots[p])
            .sum::<C64>()
            .norm()
    };
    let top = nv - 1;
    let best = (0..orders[top])
        .into_par_iter()
        .map(|dtop| {
            let mut phase: Vec<usize> = inc[top].iter().map(|&s| s * dtop % l).collect();
            let mut digits = vec![0usize; top];
            let mut best = value(&phase);
            loop {
                let mut j = 0;
                loop {
                    if j == top {
                        return best;
                    }
                    digits[j] += 1;
                    if digits[j] < orders[j] {
                        for (p, &s) in phase.iter_mut().zip(&inc[j]) {
                            *p = (*p + s) % l;
                        }
                        break;
                    }
                    digits[j] = 0;
                    for (p, &s) in phase.iter_mut().zip(&wrap[j]) {
                        *p = (*p + s) % l;
                    }
                    j += 1;
                }
                best = best.max(value(&phase));
            }
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

fn grid_terms(f: &CyclicPolynomial) -> Vec<(Vec<usize>, C64)> {
    f.terms()
        .map(|(a, c)| (a.iter().map(|&x| x as usize).collect(), c))
        .collect()
}

/// `||f||_{Omega_K^n}` by exhaustive enumeration.
pub fn sup_norm_cyclic(f: &CyclicPolynomial) -> Result<f64> {
    grid_sup(&vec![f.k; f.n], &grid_terms(f))
}

/// Sup over the grid `Omega_M^n`; a lower estimate of the torus sup norm.
pub fn sup_norm_torus_grid(f: &CyclicPolynomial, m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("grid size must be positive");
    }
    grid_sup(&vec![m; f.n], &grid_terms(f))
}

/// `tau_alpha^(xi) = prod_{alpha_j != 0} (1 - xi^{alpha_j})` with `xi = omega_K^s`.
pub fn tau(alpha: &[u8], s: usize, k: usize) -> C64 {
    alpha
        .iter()
        .filter(|&&a| a != 0)
        .map(|&a| ONE - root(k, s * a as usize))
        .product()
}

/// Image of the pseudo-projection: the maximal-support monomials of `f`,
/// scaled by `tau^(xi)` and tagged by `x^{supp alpha}` with `x in Omega_2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoProjection {
    pub ell: usize,
    pub xi: usize,
    poly: CyclicPolynomial,
}

impl PseudoProjection {
    /// Restriction to `x = (1, ..., 1)`, a polynomial on `Omega_K^n`.
    pub fn restrict_to_ones(&self) -> &CyclicPolynomial {
        &self.poly
    }

    /// Sup over `Omega_K^n x Omega_2^n`.
    pub fn sup_norm(&self) -> Result<f64> {
        let (k, n) = (self.poly.k, self.poly.n);
        let mut orders = vec![k; n];
        orders.extend(std::iter::repeat_n(2, n));
        let terms: Vec<(Vec<usize>, C64)> = self
            .poly
            .terms()
            .map(|(a, c)| {
                let mut e: Vec<usize> = a.iter().map(|&x| x as usize).collect();
                e.extend(a.iter().map(|&x| usize::from(x != 0)));
                (e, c)
            })
            .collect();
        grid_sup(&orders, &terms)
    }
}

/// Pseudo-projection with `xi = omega_K^s`, `1 <= s <= K-1`.
pub fn pseudo_projection(f: &CyclicPolynomial, s: usize) -> Result<PseudoProjection> {
    if s == 0 || s >= f.k {
        return invalid(format!("xi = omega^{s} must differ from 1 (1 <= s < {})", f.k));
    }
    let ell = f.max_support();
    let coeffs = f
        .coeffs
        .iter()
        .filter(|(a, _)| support_size(a) == ell)
        .map(|(a, c)| (a.clone(), c * tau(a, s, f.k)))
        .collect();
    Ok(PseudoProjection {
        ell,
        xi: s,
        poly: f.with_coeffs(coeffs),
    })
}

/// Applies the pseudo-projection for every `xi = omega, ..., omega^{K-1}` in turn.
pub fn iterated_pseudo_projection(f: &CyclicPolynomial) -> Result<CyclicPolynomial> {
    (1..f.k).try_fold(f.clone(), |g, s| {
        Ok(pseudo_projection(&g, s)?.restrict_to_ones().clone())
    })
}

/// `d_K = prod_{k=1}^{K-1} (1 - omega^k)`, which equals `K` for prime `K`.
pub fn dk_constant(k: usize) -> Result<C64> {
    require_prime(k)?;
    let value: C64 = (1..k).map(|j| ONE - root(k, j)).product();
    for s in 2..k {
        let other: C64 = (1..k).map(|j| ONE - root(k, s * j)).product();
        if (other - value).norm() > 1e-12 * value.norm() {
            return Err(Error::Hypothesis(format!("d_K depends on xi = omega^{s}")));
        }
    }
    Ok(value)
}

/// Parts of `f` grouped by support size, ascending, empty parts omitted.
pub fn support_split(f: &CyclicPolynomial) -> Vec<(usize, CyclicPolynomial)> {
    let mut parts: BTreeMap<usize, BTreeMap<Exponents, C64>> = BTreeMap::new();
    for (a, c) in f.terms() {
        parts.entry(support_size(a)).or_default().insert(a.clone(), c);
    }
    parts
        .into_iter()
        .map(|(s, coeffs)| (s, f.with_coeffs(coeffs)))
        .collect()
}

/// Monomials sharing a support size and a `tau^(omega)` value.
#[derive(Clone, Debug, PartialEq)]
pub struct InseparableGroup {
    pub support_size: usize,
    pub tau: C64,
    pub poly: CyclicPolynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InseparablePartition {
    pub groups: Vec<InseparableGroup>,
    /// Pairs of distinct groups whose tau values are suspiciously close.
    pub warnings: Vec<String>,
}

/// Groups the monomials of `f` by support size and numerically equal `tau^(omega)`.
pub fn inseparable_partition(f: &CyclicPolynomial) -> InseparablePartition {
    let mut groups: Vec<(usize, C64, BTreeMap<Exponents, C64>)> = Vec::new();
    for (a, c) in f.terms() {
        let s = support_size(a);
        let t = tau(a, 1, f.k);
        let slot = groups
            .iter_mut()
            .find(|(gs, gt, _)| *gs == s && (gt - t).norm() <= TAU_TOL * gt.norm().max(1.0));
        match slot {
            Some((_, _, m)) => {
                m.insert(a.clone(), c);
            }
            None => groups.push((s, t, BTreeMap::from([(a.clone(), c)]))),
        }
    }
    groups.sort_by(|x, y| {
        x.0.cmp(&y.0)
            .then(x.1.re.total_cmp(&y.1.re))
            .then(x.1.im.total_cmp(&y.1.im))
    });
    let mut warnings = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let (s1, t1, _) = &groups[i];
            let (s2, t2, _) = &groups[j];
            let gap = (t1 - t2).norm();
            if s1 == s2 && gap <= 1e3 * TAU_TOL * t1.norm().max(1.0) {
                warnings.push(format!(
                    "support {s1}: tau values {t1} and {t2} differ by only {gap:e}"
                ));
            }
        }
    }
    InseparablePartition {
        groups: groups
            .into_iter()
            .map(|(support_size, tau, coeffs)| InseparableGroup {
                support_size,
                tau,
                poly: f.with_coeffs(coeffs),
            })
            .collect(),
        warnings,
    }
}

/// Inseparable groups of the top support level recovered from
/// `D^1 f, ..., D^J f` through the inverse Vandermonde matrix `eta`.
#[derive(Clone, Debug)]
pub struct VandermondeExtraction {
    pub ell: usize,
    pub taus: Vec<C64>,
    pub groups: Vec<CyclicPolynomial>,
    /// `eta = V^{-1}` with `V[k][j] = tau_j^{k+1}`.
    pub eta: CMatrix,
}

impl VandermondeExtraction {
    /// `||eta_j||_1`, the weights used to rebuild group `j`.
    pub fn eta_row_l1(&self, j: usize) -> f64 {
        (0..self.eta.cols()).map(|k| self.eta[(j, k)].norm()).sum()
    }
}

/// `V[k][j] = c_j^{k+1}` for `k, j < J`.
pub fn vandermonde(taus: &[C64]) -> CMatrix {
    CMatrix::from_fn(taus.len(), taus.len(), |k, j| taus[j].powu(k as u32 + 1))
}

/// Splits the top-support part of `f` into its inseparable groups using only
/// iterated pseudo-projections and a Vandermonde solve.
pub fn vandermonde_extract(f: &CyclicPolynomial) -> Result<VandermondeExtraction> {
    let ell = f.max_support();
    let top = pseudo_projection(f, 1)?;
    // tau values are read off the pseudo-projection image, not from the partition
    let mut taus: Vec<C64> = Vec::new();
    for (a, _) in top.restrict_to_ones().terms() {
        let t = tau(a, 1, f.k);
        if !taus.iter().any(|u| (u - t).norm() <= TAU_TOL * u.norm().max(1.0)) {
            taus.push(t);
        }
    }
    taus.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let jn = taus.len();
    let mut powers = Vec::with_capacity(jn);
    let mut current = f.clone();
    for _ in 0..jn {
        current = pseudo_projection(&current, 1)?.restrict_to_ones().clone();
        powers.push(current.clone());
    }
    let eta = inverse(&vandermonde(&taus), 1e-9)?;
    let groups = (0..jn)
        .map(|j| {
            let mut coeffs: BTreeMap<Exponents, C64> = BTreeMap::new();
            for (k, p) in powers.iter().enumerate() {
                for (a, c) in p.terms() {
                    *coeffs.entry(a.clone()).or_insert(ZERO) += eta[(j, k)] * c;
                }
            }
            // drop cancellation residue relative to the input scale
            let scale = f.terms().fold(0.0f64, |m, (_, c)| m.max(c.norm()));
            coeffs.retain(|_, c| c.norm() > 1e-10 * scale.max(1.0));
            f.with_coeffs(coeffs)
        })
        .collect();
    Ok(VandermondeExtraction {
        ell,
        taus,
        groups,
        eta,
    })
}

/// `||D_xi f|| <= (2+2sqrt2)^ell ||f||` for every `xi != 1`, by enumeration.
pub fn pseudo_projection_bound_check(f: &CyclicPolynomial) -> Result<Vec<CheckRecord>> {
    let norm = sup_norm_cyclic(f)?;
    (1..f.k)
        .map(|s| {
            let p = pseudo_projection(f, s)?;
            Ok(CheckRecord::le(
                &format!("pseudo-projection xi=omega^{s}"),
                p.sup_norm()?,
                PSEUDO_PROJECTION_BASE.powi(p.ell as i32),
                norm,
                "pseudo-projection-bound",
            ))
        })
        .collect()
}

/// `||g_j|| <= ||eta_j||_1 (2+2sqrt2)^{J d} ||f||` for each top-level group.
pub fn property_a_check(f: &CyclicPolynomial) -> Result<Vec<CheckRecord>> {
    let ex = vandermonde_extract(f)?;
    let norm = sup_norm_cyclic(f)?;
    let d = f.degree();
    let jn = ex.taus.len();
    ex.groups
        .iter()
        .enumerate()
        .map(|(j, g)| {
            Ok(CheckRecord::le(
                &format!("inseparable group {j} of support {}", ex.ell),
                sup_norm_cyclic(g)?,
                ex.eta_row_l1(j) * PSEUDO_PROJECTION_BASE.powf((jn * d) as f64),
                norm,
                "top-support-group-bound",
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub c_k: f64,
    pub degree: usize,
    pub max_support: usize,
    pub norm: f64,
    pub parts: Vec<CheckRecord>,
    /// Largest `||f_j|| / ||f||`; values above 1 show parts can outgrow the whole.
    pub max_part_ratio: f64,
    pub pass: bool,
}

/// `||f_j|| <= C_K^d (1 + C_K^d)^{ell - j} ||f||` with `C_K = (2+2sqrt2)^{K-1} / |d_K|`.
pub fn splitting_bound_check(f: &CyclicPolynomial) -> Result<SplittingReport> {
    let c_k = PSEUDO_PROJECTION_BASE.powi(f.k as i32 - 1) / dk_constant(f.k)?.norm();
    let d = f.degree();
    let ell = f.max_support();
    let norm = sup_norm_cyclic(f)?;
    let cd = c_k.powi(d as i32);
    let mut parts = Vec::new();
    let mut max_part_ratio = 0.0f64;
    for (j, part) in support_split(f) {
        let pn = sup_norm_cyclic(&part)?;
        if norm > 0.0 {
            max_part_ratio = max_part_ratio.max(pn / norm);
        }
        parts.push(CheckRecord::le(
            &format!("support part {j}"),
            pn,
            cd * (1.0 + cd).powi((ell - j) as i32),
            norm,
            "support-splitting-bound",
        ));
    }
    let pass = parts.iter().all(|r| r.pass);
    Ok(SplittingReport {
        c_k,
        degree: d,
        max_support: ell,
        norm,
        parts,
        max_part_ratio,
        pass,
    })
}

/// The `2K x 2K` real matrix with rows `cos(k m theta)` for `m = 0..K` and
/// `sin(k m theta)` for `m = 1..K-1`, columns `k = 0..2K-1`, `theta = pi / K`.
pub fn dk_matrix(k: usize) -> Result<CMatrix> {
    if k < 2 {
        return invalid(format!("K must be at least 2, got {k}"));
    }
    let theta = PI / k as f64;
    Ok(CMatrix::from_real(2 * k, 2 * k, |row, col| {
        let c = col as f64;
        if row <= k {
            (c * row as f64 * theta).cos()
        } else {
            (c * (row - k) as f64 * theta).sin()
        }
    }))
}

/// `v_z = (1, Re z, ..., Re z^K, Im z, ..., Im z^{K-1})`.
pub fn moment_vector(k: usize, z: C64) -> Vec<C64> {
    let mut v = Vec::with_capacity(2 * k);
    v.push(ONE);
    for m in 1..=k {
        v.push(C64::new(z.powu(m as u32).re, 0.0));
    }
    for m in 1..k {
        v.push(C64::new(z.powu(m as u32).im, 0.0));
    }
    v
}

/// `epsilon_* = 1 / (2K ||D_K^{-1}||_{inf->inf})`.
pub fn epsilon_star(k: usize) -> Result<f64> {
    let inv = inverse(&dk_matrix(k)?, 1e-11)?;
    Ok(1.0 / (2.0 * k as f64 * inf_norm(&inv)))
}

/// `||D_K^{-1}||_{inf->inf}`.
pub fn dk_inverse_norm(k: usize) -> Result<f64> {
    Ok(inf_norm(&inverse(&dk_matrix(k)?, 1e-11)?))
}

/// Compares `epsilon_*` with the claimed upper end `1/(2K)^2` of its range.
pub fn epsilon_star_interval_check(k: usize) -> Result<CheckRecord> {
    let eps = epsilon_star(k)?;
    let cap = 1.0 / (2.0 * k as f64).powi(2);
    let mut rec = CheckRecord::le("epsilon_* upper end", eps, 1.0, cap, "epsilon-star-interval");
    rec.pass = rec.pass && eps > 0.0;
    Ok(rec)
}

/// `(K + d)^d`, an upper bound on the number of inseparable groups per support size.
pub fn group_count_bound(k: usize, d: usize) -> f64 {
    ((k + d) as f64).powi(d as i32)
}

/// Probability weights on `Omega_{2K}` reproducing the moments of `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureSolution {
    pub weights: Vec<f64>,
    pub residual: f64,
}

impl MeasureSolution {
    /// `sum_j p_j (e^{i pi j / K})^m` for `m = 0..=K`.
    pub fn moment(&self, m: usize) -> C64 {
        let k = self.weights.len() / 2;
        self.weights
            .iter()
            .enumerate()
            .map(|(j, &p)| p * root(2 * k, j * m))
            .sum()
    }
}

/// Solves `D_K p = v_z` for `|z| <= epsilon_*`; the solution is a probability vector.
pub fn measure_for_point(k: usize, z: C64) -> Result<MeasureSolution> {
    let eps = epsilon_star(k)?;
    if z.norm() > eps * (1.0 + 1e-12) {
        return Err(Error::OutOfRadius {
            modulus: z.norm(),
            radius: eps,
        });
    }
    let d = dk_matrix(k)?;
    let v = moment_vector(k, z);
    let p = solve(&d, &v, 1e-11)?;
    let dp = d.mul_vec(&p);
    let residual = dp.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    let weights: Vec<f64> = p.iter().map(|c| c.re).collect();
    if let Some(w) = weights.iter().find(|&&w| w < -1e-12) {
        return Err(Error::Hypothesis(format!("negative weight {w} inside the radius")));
    }
    Ok(MeasureSolution {
        weights: weights.into_iter().map(|w| w.max(0.0)).collect(),
        residual,
    })
}

/// Largest error of `(e^{i pi / K})^k = i (1 - omega^k) / |1 - omega^k|` over `k = 1..K-1`.
pub fn half_root_identity_check(k: usize) -> Result<f64> {
    require_prime(k)?;
    let half = root(2 * k, 1);
    Ok((1..k)
        .map(|j| {
            let w = ONE - root(k, j);
            (half.powu(j as u32) - C64::new(0.0, 1.0) * w / w.norm()).norm()
        })
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyBReport {
    pub spread: f64,
    pub at_sqrt_omega: f64,
    pub at_ones: f64,
    pub sup_norm: f64,
    pub pass: bool,
}

/// For an inseparable group `g`: all monomials agree at `sqrt(omega) (1, ..., 1)`,
/// hence `|g(sqrt omega)| = |g(1)| <= ||g||`.
pub fn property_b_check(g: &CyclicPolynomial) -> Result<PropertyBReport> {
    let half = vec![root(2 * g.k, 1); g.n];
    let values: Vec<C64> = g
        .terms()
        .map(|(a, _)| half[0].powu(total_degree(a) as u32))
        .collect();
    let spread = values
        .iter()
        .flat_map(|u| values.iter().map(move |v| (u - v).norm()))
        .fold(0.0, f64::max);
    let partition = inseparable_partition(g);
    if partition.groups.len() > 1 || spread > 1e-8 {
        return Err(Error::Hypothesis(format!(
            "not a single inseparable group ({} groups)",
            partition.groups.len()
        )));
    }
    let at_sqrt_omega = g.eval(&half)?.norm();
    let at_ones = g.eval(&vec![ONE; g.n])?.norm();
    let sup_norm = sup_norm_cyclic(g)?;
    let pass = spread <= 1e-10
        && (at_sqrt_omega - at_ones).abs() <= 1e-10 * at_ones.max(1.0)
        && at_ones <= sup_norm * (1.0 + 1e-12) + 1e-12;
    Ok(PropertyBReport {
        spread,
        at_sqrt_omega,
        at_ones,
        sup_norm,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusReport {
    pub m: usize,
    pub degree: usize,
    pub torus_grid: f64,
    pub torus_grid_refined: f64,
    pub refinement_ok: bool,
    pub omega_2k: f64,
    pub dilated_grid: f64,
    pub epsilon_star: f64,
    pub constant: f64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// `||f||_T <= (d+1) eps_*^{-d} ||f||_{Omega_2K}` with the torus sup taken on
/// `Omega_M^n` and `Omega_{2M}^n`, which must agree within 5%.
pub fn torus_vs_2k_check(f: &CyclicPolynomial, m: usize) -> Result<TorusReport> {
    if m == 0 || !m.is_multiple_of(2 * f.k) {
        return invalid(format!("grid size {m} must be a positive multiple of 2K = {}", 2 * f.k));
    }
    let d = f.degree();
    let eps = epsilon_star(f.k)?;
    let torus_grid = sup_norm_torus_grid(f, m)?;
    let torus_grid_refined = sup_norm_torus_grid(f, 2 * m)?;
    let refinement_ok = (torus_grid_refined - torus_grid).abs() <= 0.05 * torus_grid_refined;
    let torus = torus_grid.max(torus_grid_refined);
    let omega_2k = sup_norm_torus_grid(f, 2 * f.k)?;
    let dilated_grid = sup_norm_torus_grid(&f.dilate(eps), m)?;
    let constant = (d as f64 + 1.0) * eps.powi(-(d as i32));
    let checks = vec![
        CheckRecord::le(
            "torus vs dilated torus",
            torus,
            constant,
            dilated_grid,
            "homogeneous-part-dilation",
        ),
        CheckRecord::le(
            "dilated torus vs Omega_2K",
            dilated_grid,
            1.0,
            omega_2k,
            "moment-matching-measure",
        ),
        CheckRecord::le("torus vs Omega_2K", torus, constant, omega_2k, "torus-to-2k-grid"),
    ];
    let pass = refinement_ok && checks.iter().all(|c| c.pass);
    Ok(TorusReport {
        m,
        degree: d,
        torus_grid,
        torus_grid_refined,
        refinement_ok,
        omega_2k,
        dilated_grid,
        epsilon_star: eps,
        constant,
        checks,
        pass,
    })
}

/// Constants of the two-step Remez chain for degree `d` on `Omega_K^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemezConstant {
    pub d: usize,
    pub k: usize,
    /// `(d+1) eps_*^{-d}`: torus against `Omega_{2K}`.
    pub step1: f64,
    /// `Omega_{2K}` against `Omega_K`, via the single-point estimate at `sqrt(omega)`.
    pub step2: f64,
    pub total: f64,
    /// Per support size: number of tau classes, worst group bound and worst level bound.
    pub levels: Vec<RemezLevel>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemezLevel {
    pub support: usize,
    pub classes: usize,
    pub group_bound: f64,
    pub level_bound: f64,
}

/// Distinct `tau^(omega)` values of support-`ell` monomials of degree at most `d`.
fn tau_classes(k: usize, ell: usize, d: usize) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    // multisets of nonzero exponents: counts[a-1] monomials entries equal to a
    fn rec(k: usize, a: usize, left: usize, budget: usize, t: C64, out: &mut Vec<C64>) {
        if left == 0 {
            if !out.iter().any(|u| (u - t).norm() <= TAU_TOL * u.norm().max(1.0)) {
                out.push(t);
            }
            return;
        }
        if a >= k {
            return;
        }
        let factor = ONE - root(k, a);
        let mut tt = t;
        for c in 0..=left {
            if c * a > budget {
                break;
            }
            rec(k, a + 1, left - c, budget - c * a, tt, out);
            tt *= factor;
        }
    }
    rec(k, 1, ell, d, ONE, &mut out);
    out
}

/// Worst-case constants over every set of tau classes that can occur at each support size.
pub fn remez_constant(d: usize, k: usize) -> Result<RemezConstant> {
    require_prime(k)?;
    let eps = epsilon_star(k)?;
    let step1 = (d as f64 + 1.0) * eps.powi(-(d as i32));
    let mut levels = vec![RemezLevel {
        support: 0,
        classes: 1,
        group_bound: 1.0,
        level_bound: 1.0,
    }];
    for ell in 1..=d {
        let classes = tau_classes(k, ell, d);
        let jn = classes.len();
        if jn > 16 {
            return Err(Error::ResourceLimit(format!(
                "{jn} tau classes at support {ell}; subset enumeration is capped at 16"
            )));
        }
        let mut group_bound = 0.0f64;
        let mut level_bound = 0.0f64;
        for mask in 1u32..(1 << jn) {
            let taus: Vec<C64> = (0..jn).filter(|j| mask >> j & 1 == 1).map(|j| classes[j]).collect();
            let eta = inverse(&vandermonde(&taus), 1e-8)?;
            let growth = PSEUDO_PROJECTION_BASE.powf((taus.len() * d) as f64);
            for j in 0..taus.len() {
                let row: f64 = (0..taus.len()).map(|c| eta[(j, c)].norm()).sum();
                group_bound = group_bound.max(row * growth);
            }
            let col_sum: f64 = (0..taus.len())
                .map(|c| (0..taus.len()).map(|j| eta[(j, c)]).sum::<C64>().norm())
                .sum();
            level_bound = level_bound.max(col_sum * growth);
        }
        levels.push(RemezLevel {
            support: ell,
            classes: jn,
            group_bound,
            level_bound,
        });
    }
    let mut step2 = 0.0;
    for ell in 0..=d {
        let peel: f64 = levels[ell + 1..]
            .iter()
            .map(|l| 1.0 + l.level_bound)
            .product();
        step2 += levels[ell].classes as f64 * levels[ell].group_bound * peel;
    }
    Ok(RemezConstant {
        d,
        k,
        step1,
        step2,
        total: step1 * step2,
        levels,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemezChainReport {
    pub constant: RemezConstant,
    pub omega_k: f64,
    pub sqrt_omega_value: f64,
    pub group_sum: f64,
    pub torus: TorusReport,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Runs every link of the Remez chain on one polynomial and compares the torus
/// grid sup with `C(d, K) ||f||_{Omega_K^n}`.
pub fn remez_chain_check(f: &CyclicPolynomial, m: usize) -> Result<RemezChainReport> {
    let d = f.degree().max(1);
    let constant = remez_constant(d, f.k)?;
    let omega_k = sup_norm_cyclic(f)?;
    let torus = torus_vs_2k_check(f, m)?;
    let half = vec![root(2 * f.k, 1); f.n];
    let sqrt_omega_value = f.eval(&half)?.norm();
    let mut group_sum = 0.0;
    for (_, part) in support_split(f) {
        for g in inseparable_partition(&part).groups {
            group_sum += sup_norm_cyclic(&g.poly)?;
        }
    }
    let torus_sup = torus.torus_grid.max(torus.torus_grid_refined);
    let checks = vec![
        CheckRecord::le(
            "|f(sqrt omega)| vs sum of group norms",
            sqrt_omega_value,
            1.0,
            group_sum,
            "single-point-group-sum",
        ),
        CheckRecord::le(
            "|f(sqrt omega)| vs Omega_K",
            sqrt_omega_value,
            constant.step2,
            omega_k,
            "single-point-estimate",
        ),
        CheckRecord::le(
            "Omega_2K vs Omega_K",
            torus.omega_2k,
            constant.step2,
            omega_k,
            "rotation-reduction",
        ),
        CheckRecord::le("torus vs Omega_K", torus_sup, constant.total, omega_k, "remez-chain"),
    ];
    let pass = torus.pass && checks.iter().all(|c| c.pass);
    Ok(RemezChainReport {
        constant,
        omega_k,
        sqrt_omega_value,
        group_sum,
        torus,
        checks,
        pass,
    })
}

/// Degree-2 polynomial on `Omega_3` whose value at `(1 + omega)/2` exceeds its sup on `Omega_3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct K3Counterexample {
    pub poly: CyclicPolynomial,
    pub z0: (f64, f64),
    pub value_modulus: f64,
    pub omega_norm: f64,
}

/// Builds `p` from the Lagrange basis at the cube roots of unity with
/// `p(omega^k)` the conjugate phase of `L_k(z0)`, so `|p(z0)| = sum_k |L_k(z0)|`.
pub fn k3_counterexample() -> Result<K3Counterexample> {
    let k = 3;
    let z0 = (ONE + root(k, 1)) / 2.0;
    let mut coeffs = [ZERO; 3];
    for node in 0..k {
        // L_node(z) = (1/K) sum_m omega^{-node m} z^m
        let basis: Vec<C64> = (0..k).map(|m| root(k, (k - node) * m % k) / k as f64).collect();
        let at_z0: C64 = basis.iter().enumerate().map(|(m, c)| c * z0.powu(m as u32)).sum();
        let phase = at_z0.conj() / at_z0.norm();
        for (m, c) in basis.iter().enumerate() {
            coeffs[m] += phase * c;
        }
    }
    let poly = CyclicPolynomial::from_terms(k, 1, (0..k).map(|m| (vec![m as u8], coeffs[m])))?;
    let value_modulus = poly.eval(&[z0])?.norm();
    let omega_norm = sup_norm_cyclic(&poly)?;
    Ok(K3Counterexample {
        poly,
        z0: (z0.re, z0.im),
        value_modulus,
        omega_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn composite_order_is_unsupported() {
        assert!(matches!(CyclicPolynomial::zero(4, 1), Err(Error::Unsupported(_))));
        assert!(matches!(dk_constant(6), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sup_norm_of_simple_polynomials() {
        let f = CyclicPolynomial::from_terms(3, 2, [(vec![0, 0], ONE), (vec![1, 0], ONE)]).unwrap();
        // |1 + z| on cube roots: max is 2 at z = 1
        assert!((sup_norm_cyclic(&f).unwrap() - 2.0).abs() < 1e-14);
        let g = CyclicPolynomial::from_terms(3, 1, [(vec![1], ONE)]).unwrap();
        assert!((sup_norm_torus_grid(&g, 24).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dk_equals_k_for_primes() {
        for k in [2, 3, 5, 7, 11] {
            let v = dk_constant(k).unwrap();
            assert!((v - c(k as f64, 0.0)).norm() < 1e-10, "K={k}: {v}");
        }
    }

    #[test]
    fn support_split_example() {
        let f = CyclicPolynomial::from_terms(
            3,
            2,
            [(vec![0, 0], ONE), (vec![1, 0], ONE), (vec![1, 1], ONE)],
        )
        .unwrap();
        let parts = support_split(&f);
        assert_eq!(parts.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn k3_inseparable_example() {
        // z1 z2^2 and z1^2 z2 share tau = |1 - omega|^2 = 3
        let f = CyclicPolynomial::from_terms(3, 2, [(vec![1, 2], ONE), (vec![2, 1], c(0.0, 1.0))])
            .unwrap();
        let p = inseparable_partition(&f);
        assert_eq!(p.groups.len(), 1);
        assert!((p.groups[0].tau - c(3.0, 0.0)).norm() < 1e-12);
        let g = CyclicPolynomial::from_terms(3, 2, [(vec![1, 1], ONE), (vec![2, 1], ONE)]).unwrap();
        assert_eq!(inseparable_partition(&g).groups.len(), 2);
    }

    #[test]
    fn dk_matrix_maps_uniform_weights_to_first_unit_vector() {
        for k in [3, 5, 7] {
            let d = dk_matrix(k).unwrap();
            let p = vec![c(1.0 / (2 * k) as f64, 0.0); 2 * k];
            let v = d.mul_vec(&p);
            assert!((v[0] - ONE).norm() < 1e-14);
            assert!(v[1..].iter().all(|x| x.norm() < 1e-14));
        }
    }

    #[test]
    fn measure_at_origin_is_uniform() {
        let m = measure_for_point(3, ZERO).unwrap();
        assert!(m.weights.iter().all(|&w| (w - 1.0 / 6.0).abs() < 1e-14));
        let eps = epsilon_star(3).unwrap();
        assert!(matches!(
            measure_for_point(3, c(2.0 * eps, 0.0)),
            Err(Error::OutOfRadius { .. })
        ));
    }

    #[test]
    fn half_root_identity_holds() {
        for k in [3, 5, 7] {
            assert!(half_root_identity_check(k).unwrap() < 1e-14);
        }
    }

    #[test]
    fn k3_counterexample_value() {
        let ce = k3_counterexample().unwrap();
        let expected = (1.0 + 2.0 * 3f64.sqrt()) / 4.0;
        assert!((ce.value_modulus - expected).abs() < 1e-12);
        assert!((ce.omega_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iterated_projection_scales_by_dk_power() {
        let f = CyclicPolynomial::from_terms(
            3,
            3,
            [(vec![1, 2, 0], c(0.3, -1.0)), (vec![2, 2, 0], c(1.5, 0.2)), (vec![1, 0, 0], ONE)],
        )
        .unwrap();
        let it = iterated_pseudo_projection(&f).unwrap();
        for (a, v) in it.terms() {
            assert!((v - f.coeff(a) * 9.0).norm() < 1e-12);
        }
        assert_eq!(it.len(), 2);
    }

    #[test]
    fn tau_classes_k3() {
        assert_eq!(tau_classes(3, 1, 1).len(), 1);
        assert_eq!(tau_classes(3, 1, 2).len(), 2);
        assert_eq!(tau_classes(3, 2, 2).len(), 1);
        assert_eq!(tau_classes(3, 2, 4).len(), 3);
    }
}
