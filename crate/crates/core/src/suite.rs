//! Named verification checks at desk-scale sizes, as run by `bhlab verify`.

use std::f64::consts::SQRT_2;

use rand::Rng as _;

use crate::bh_core::{
    bh_constant_upper, bh_ratio, blei_sides, fourier_matrix, littlewood_sides, polarization_bound_check,
    polarize, BhBase, MixedTensor,
};
use crate::boolean_cube::{
    inverse_walsh, moment_comparison, random_low_degree_boolean, random_low_degree_real, walsh_transform,
    WalshSpectrum,
};
use crate::cyclic::{
    dk_constant, epsilon_star, epsilon_star_interval_check, half_root_identity_check, inseparable_partition,
    iterated_pseudo_projection, k3_counterexample, measure_for_point, property_a_check, property_b_check,
    pseudo_projection_bound_check, remez_chain_check, splitting_bound_check, support_split,
    torus_vs_2k_check, vandermonde_extract, CyclicPolynomial,
};
use crate::error::{Error, Result};
use crate::learning::{ei_sample_size, exercise_inequality, lmn_sample_size, LearnerConfig};
use crate::linalg::{CMatrix, C64};
use crate::quantum::{
    clock_shift, default_qubit_bh_constant, hw_commutation_check, hw_expand, hw_synthesize,
    orthogonality_lemma_check, pauli_anticommutation_check, pauli_expand, pauli_matrix, pauli_synthesize,
    qubit_bh_check, qubit_density, qubit_trace_dense, qudit_density, qudit_trace_dense, random_hermitian,
    random_pauli_observable, reduce_qubit, reduce_qudit, sigma_cover_check,
};
use crate::report::CheckRecord;
use crate::rng;

/// Inputs shared by every check.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: Option<u64>,
    /// Group orders for the `K`-parametrized checks.
    pub ks: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: None,
            ks: vec![3, 5, 7],
        }
    }
}

type CheckFn = fn(&SuiteConfig, u64) -> Result<Vec<CheckRecord>>;

/// A named check; randomized checks need a seed.
pub struct Check {
    pub name: &'static str,
    pub randomized: bool,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
        let seed = match (self.randomized, cfg.seed) {
            (true, None) => {
                return Err(Error::InvalidArgument(format!("check {} needs --seed", self.name)))
            }
            (_, s) => s.unwrap_or(0),
        };
        (self.run)(cfg, seed)
    }
}

pub const CHECKS: &[Check] = &[
    Check { name: "boolean.walsh-roundtrip", randomized: true, run: walsh_roundtrip },
    Check { name: "boolean.moment-comparison", randomized: true, run: moment },
    Check { name: "boolean.bh-ratio", randomized: true, run: boolean_bh },
    Check { name: "bh.blei", randomized: true, run: blei },
    Check { name: "bh.littlewood", randomized: false, run: littlewood },
    Check { name: "bh.polarization", randomized: true, run: polarization },
    Check { name: "bh.exercise-inequality", randomized: false, run: exercise },
    Check { name: "learning.lmn-sample-size", randomized: false, run: lmn_size },
    Check { name: "learning.ei-log-scaling", randomized: false, run: ei_scaling },
    Check { name: "cyclic.k3", randomized: false, run: k3 },
    Check { name: "cyclic.dk-constant", randomized: false, run: dk },
    Check { name: "cyclic.half-root", randomized: false, run: half_root },
    Check { name: "cyclic.measure", randomized: true, run: measure },
    Check { name: "cyclic.epsilon-star-interval", randomized: false, run: eps_interval },
    Check { name: "cyclic.pseudo-projection", randomized: true, run: pseudo_projection },
    Check { name: "cyclic.splitting", randomized: true, run: splitting },
    Check { name: "cyclic.property-a", randomized: true, run: property_a },
    Check { name: "cyclic.property-b", randomized: true, run: property_b },
    Check { name: "cyclic.torus", randomized: true, run: torus },
    Check { name: "cyclic.remez-chain", randomized: true, run: remez },
    Check { name: "quantum.anticommutation", randomized: false, run: anticommutation },
    Check { name: "quantum.hw-commutation", randomized: false, run: hw_commutation },
    Check { name: "quantum.sigma-cover", randomized: false, run: sigma_cover },
    Check { name: "quantum.orthogonality", randomized: false, run: orthogonality },
    Check { name: "quantum.density", randomized: true, run: density },
    Check { name: "quantum.qubit-reduction", randomized: true, run: qubit_reduction },
    Check { name: "quantum.qudit-reduction", randomized: true, run: qudit_reduction },
    Check { name: "quantum.qubit-bh", randomized: true, run: qubit_bh },
];

pub fn find(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Worst record of a family, with the violation count in its detail.
fn summarize(check: &str, records: Vec<CheckRecord>) -> CheckRecord {
    let total = records.len();
    let failed = records.iter().filter(|r| !r.pass).count();
    let score = |r: &CheckRecord| {
        if r.rhs > 0.0 {
            r.lhs / r.rhs
        } else {
            r.lhs - r.rhs
        }
    };
    let mut worst = records
        .into_iter()
        .filter(|r| r.lhs.is_finite())
        .max_by(|a, b| (!a.pass, score(a)).partial_cmp(&(!b.pass, score(b))).expect("finite"))
        .unwrap_or_else(|| CheckRecord::flag(check, false, "empty", "no instances"));
    worst.check = check.to_string();
    worst.pass = failed == 0 && total > 0;
    worst.detail = format!("{failed} violations over {total} instances (worst shown)");
    worst
}

fn seeds(seed: u64, salt: u64, count: u64) -> impl Iterator<Item = u64> {
    (0..count).map(move |i| rng::instance_seed(seed, salt, i))
}

fn walsh_roundtrip(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut round = Vec::new();
    let mut parseval = Vec::new();
    for (i, s) in seeds(seed, 1, 20).enumerate() {
        let n = 4 + i % 7;
        let spec = random_low_degree_real(n, 1 + i % 3, s)?;
        let f = inverse_walsh(&spec)?;
        let back = walsh_transform(&f)?;
        round.push(CheckRecord::small("roundtrip", back.l2_distance_sq(&spec), 1e-20, "walsh-inversion"));
        let energy: f64 = spec.iter().map(|(_, c)| c * c).sum();
        let mean_sq = f.table().iter().map(|v| v * v).sum::<f64>() / f.table().len() as f64;
        parseval.push(CheckRecord::close("parseval", mean_sq, energy, 1e-10 * energy.max(1.0), "parseval"));
    }
    Ok(vec![
        summarize("boolean.walsh-roundtrip", round),
        summarize("boolean.parseval", parseval),
    ])
}

fn moment(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 2, 50).enumerate() {
        let d = 1 + i % 3;
        let n = d + 2 + i % 6;
        let f = inverse_walsh(&random_low_degree_real(n, d, s)?)?;
        for p in [4.0 / 3.0, 1.5] {
            let m = moment_comparison(&f, d, p)?;
            out.push(CheckRecord::le("moment", m.l2, m.constant, m.lp, "moment-comparison"));
        }
    }
    Ok(vec![summarize("boolean.moment-comparison", out)])
}

fn boolean_bh(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 3, 200).enumerate() {
        let d = 1 + i % 3;
        let n = d + i % (11 - d);
        let spec = walsh_transform(&random_low_degree_boolean(n, d, s)?)?;
        let deg = spec.degree().max(1) as f64;
        let bound = 2f64.powf((deg - 1.0) / deg);
        out.push(CheckRecord::le("ratio", bh_ratio(&spec)?, bound, 1.0, "boolean-bh-optimal"));
    }
    Ok(vec![summarize("boolean.bh-ratio", out)])
}

fn blei(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (d, k) in [(2, 1), (3, 1), (3, 2)] {
        let mut fam = Vec::new();
        for (i, s) in seeds(seed, 4 + d as u64 * 10 + k as u64, 50).enumerate() {
            let t = MixedTensor::random_real(d, 2 + i % 4, s)?;
            let (lhs, rhs) = blei_sides(&t, k)?;
            fam.push(CheckRecord::le("blei", lhs, 1.0, rhs, "blei"));
        }
        out.push(summarize(&format!("bh.blei d={d} k={k}"), fam));
    }
    Ok(out)
}

fn littlewood(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (name, a) in [
        ("identity n=2", CMatrix::identity(2)),
        ("fourier n=2", fourier_matrix(2)),
        ("fourier n=3", fourier_matrix(3)),
    ] {
        let (lhs, rhs) = littlewood_sides(&a, 12)?;
        out.push(
            CheckRecord::le(&format!("bh.littlewood {name}"), lhs, SQRT_2, rhs, "littlewood-four-thirds")
                .with_detail("rhs is a grid lower bound of the polydisc sup"),
        );
    }
    Ok(out)
}

fn polarization(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 5, 30).enumerate() {
        let d = 2 + i % 2;
        let n = d + 1 + i % 4;
        let full = random_low_degree_real(n, d, s)?;
        let top = full.filter(|sub, _| sub.len() == d);
        if top.is_empty() {
            continue;
        }
        let l = polarize(&top)?;
        for k in 1..=d {
            let r = polarization_bound_check(&l, k, 200, s ^ k as u64)?;
            out.push(CheckRecord::le("polarization", r.max_value, r.constant, r.cube_norm, "polarization-markov"));
        }
    }
    Ok(vec![summarize("bh.polarization", out)])
}

fn exercise(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let out = (1..=100)
        .map(|d| {
            let (lhs, rhs) = exercise_inequality(d);
            CheckRecord::le("exercise", lhs, 1.0, rhs, "exercise-inequality")
        })
        .collect();
    Ok(vec![summarize("bh.exercise-inequality", out)])
}

fn lmn_size(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let cfg = LearnerConfig::new(1, 0.5, 0.5, 1.0)?;
    let n = lmn_sample_size(2, &cfg)? as f64;
    Ok(vec![CheckRecord::close("learning.lmn-sample-size", n, 30.0, 0.0, "lmn-sample-size")])
}

/// `N_EI(n^2) / N_EI(n)` against the window `[1.8, 2.2]` expected from `O(log n)` growth.
pub fn ei_scaling_records() -> Result<Vec<CheckRecord>> {
    let cfg = LearnerConfig::new(2, 0.1, 0.1, SQRT_2)?;
    [64usize, 256]
        .iter()
        .map(|&n| {
            let ratio = ei_sample_size(n * n, &cfg)? as f64 / ei_sample_size(n, &cfg)? as f64;
            let mut r = CheckRecord::le(
                &format!("learning.ei-log-scaling n={n}"),
                ratio,
                2.2,
                1.0,
                "ei-sample-size-log-growth",
            );
            r.pass = r.pass && ratio >= 1.8;
            Ok(r.with_detail("window [1.8, 2.2]"))
        })
        .collect()
}

fn ei_scaling(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    ei_scaling_records()
}

fn k3(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let ce = k3_counterexample()?;
    Ok(vec![
        CheckRecord::close(
            "cyclic.k3 value",
            ce.value_modulus,
            (1.0 + 2.0 * 3f64.sqrt()) / 4.0,
            1e-9,
            "k3-counterexample",
        ),
        CheckRecord::close("cyclic.k3 omega-norm", ce.omega_norm, 1.0, 1e-12, "k3-counterexample"),
    ])
}

fn dk(cfg: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    cfg.ks
        .iter()
        .map(|&k| {
            let v = dk_constant(k)?;
            Ok(CheckRecord::small(&format!("cyclic.dk-constant K={k}"), (v - k as f64).norm(), 1e-10, "dk-equals-k"))
        })
        .collect()
}

fn half_root(cfg: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    cfg.ks
        .iter()
        .map(|&k| {
            Ok(CheckRecord::small(
                &format!("cyclic.half-root K={k}"),
                half_root_identity_check(k)?,
                1e-12,
                "half-root-identity",
            ))
        })
        .collect()
}

/// Weights, normalization and moment identities at `count` random points of the disc of radius `epsilon_*`.
pub fn measure_records(k: usize, count: u64, seed: u64) -> Result<Vec<CheckRecord>> {
    let eps = epsilon_star(k)?;
    let mut r = rng::seeded(seed);
    let (mut neg, mut sum_err, mut mom_err, mut resid) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..count {
        let rad = eps * r.gen::<f64>().sqrt();
        let z = C64::from_polar(rad, r.gen_range(0.0..std::f64::consts::TAU));
        let m = measure_for_point(k, z)?;
        neg = neg.max(-m.weights.iter().copied().fold(f64::INFINITY, f64::min));
        sum_err = sum_err.max((m.weights.iter().sum::<f64>() - 1.0).abs());
        resid = resid.max(m.residual);
        for e in 1..k {
            mom_err = mom_err.max((m.moment(e) - z.powu(e as u32)).norm());
        }
        mom_err = mom_err.max((m.moment(k).re - z.powu(k as u32).re).abs());
    }
    Ok(vec![
        CheckRecord::le(&format!("cyclic.measure K={k} negativity"), neg, 0.0, 1.0, "moment-measure-weights"),
        CheckRecord::small(&format!("cyclic.measure K={k} total mass"), sum_err, 1e-12, "moment-measure-weights"),
        CheckRecord::small(&format!("cyclic.measure K={k} moments"), mom_err, 1e-10, "moment-measure-identities"),
        CheckRecord::small(&format!("cyclic.measure K={k} residual"), resid, 1e-11, "moment-measure-identities"),
    ])
}

fn measure(cfg: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &k in &cfg.ks {
        out.extend(measure_records(k, 20, rng::instance_seed(seed, 6, k as u64))?);
    }
    Ok(out)
}

fn eps_interval(cfg: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    cfg.ks
        .iter()
        .map(|&k| {
            let mut r = epsilon_star_interval_check(k)?;
            r.check = format!("cyclic.epsilon-star-interval K={k}");
            Ok(r)
        })
        .collect()
}

fn pseudo_projection(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut bound = Vec::new();
    let mut scaling = Vec::new();
    for (i, s) in seeds(seed, 7, 20).enumerate() {
        let f = CyclicPolynomial::random(3, 2 + i % 3, 1 + i % 3, s)?;
        bound.extend(pseudo_projection_bound_check(&f)?);
        scaling.push(CheckRecord::small("scaling", iterated_scaling_error(&f)?, 1e-10, "iterated-projection-dk"));
    }
    Ok(vec![
        summarize("cyclic.pseudo-projection", bound),
        summarize("cyclic.iterated-projection", scaling),
    ])
}

/// Largest deviation of the iterated pseudo-projection from `d_K^ell` times the top part.
pub fn iterated_scaling_error(f: &CyclicPolynomial) -> Result<f64> {
    let it = iterated_pseudo_projection(f)?;
    let ell = f.max_support();
    let scale = dk_constant(f.k())?.powu(ell as u32);
    let top = support_split(f).pop().map(|(_, p)| p);
    let expected = match top {
        Some(t) => CyclicPolynomial::from_terms(f.k(), f.n(), t.terms().map(|(a, c)| (a.clone(), c * scale)))?,
        None => CyclicPolynomial::zero(f.k(), f.n())?,
    };
    let norm = f.terms().fold(1.0f64, |m, (_, c)| m.max(c.norm()));
    Ok(it.max_coeff_diff(&expected) / (norm * scale.norm()))
}

fn splitting(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 8, 10).enumerate() {
        let f = CyclicPolynomial::random(3, 2 + i % 3, 1 + i % 3, s)?;
        out.extend(splitting_bound_check(&f)?.parts);
    }
    Ok(vec![summarize("cyclic.splitting", out)])
}

fn property_a(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut bound = Vec::new();
    let mut extract = Vec::new();
    for (i, s) in seeds(seed, 9, 10).enumerate() {
        let (k, n, d) = if i % 2 == 0 { (3, 3, 4) } else { (5, 2, 4) };
        let f = CyclicPolynomial::random(k, n, d, s)?;
        bound.extend(property_a_check(&f)?);
        extract.push(CheckRecord::small("extract", extraction_error(&f)?, 1e-8, "vandermonde-extraction"));
    }
    Ok(vec![
        summarize("cyclic.property-a", bound),
        summarize("cyclic.vandermonde-extract", extract),
    ])
}

/// Largest coefficient gap between the Vandermonde extraction and the direct partition of the top part.
pub fn extraction_error(f: &CyclicPolynomial) -> Result<f64> {
    let ex = vandermonde_extract(f)?;
    let top = match support_split(f).pop() {
        Some((_, t)) => t,
        None => return Ok(0.0),
    };
    let part = inseparable_partition(&top);
    if part.groups.len() != ex.groups.len() {
        return Ok(f64::INFINITY);
    }
    let mut worst = 0.0f64;
    for g in &part.groups {
        let gap = ex
            .groups
            .iter()
            .map(|h| h.max_coeff_diff(&g.poly))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(gap);
    }
    Ok(worst)
}

fn property_b(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 10, 10).enumerate() {
        let f = CyclicPolynomial::random(3, 3, 2 + i % 3, s)?;
        for (_, part) in support_split(&f) {
            for g in inseparable_partition(&part).groups {
                let r = property_b_check(&g.poly)?;
                out.push(CheckRecord::le("property-b", r.at_sqrt_omega, 1.0, r.sup_norm, "single-point-group"));
                out.push(CheckRecord::small("spread", r.spread, 1e-10, "single-point-group"));
            }
        }
    }
    Ok(vec![summarize("cyclic.property-b", out)])
}

fn torus(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut refine = Vec::new();
    for (i, s) in seeds(seed, 11, 6).enumerate() {
        let f = CyclicPolynomial::random(3, 2 + i % 2, 1 + i % 2, s)?;
        let r = torus_vs_2k_check(&f, 24)?;
        refine.push(CheckRecord::le(
            "refinement",
            (r.torus_grid_refined - r.torus_grid).abs(),
            0.05,
            r.torus_grid_refined,
            "grid-refinement",
        ));
        out.extend(r.checks);
    }
    Ok(vec![summarize("cyclic.torus", out), summarize("cyclic.torus-grid-refinement", refine)])
}

fn remez(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 12, 6).enumerate() {
        let f = CyclicPolynomial::random(3, 2 + i % 2, 1 + i % 2, s)?;
        out.extend(remez_chain_check(&f, 24)?.checks);
    }
    Ok(vec![summarize("cyclic.remez-chain", out)])
}

fn anticommutation(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    Ok(vec![CheckRecord::small(
        "quantum.anticommutation",
        pauli_anticommutation_check()?,
        1e-15,
        "pauli-anticommutation",
    )])
}

fn hw_commutation(cfg: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &k in &cfg.ks {
        let (p, e) = hw_commutation_check(k)?;
        out.push(CheckRecord::small(&format!("quantum.hw-power K={k}"), p, 1e-12, "hw-power-identity"));
        out.push(CheckRecord::small(&format!("quantum.hw-exchange K={k}"), e, 1e-12, "hw-exchange-identity"));
    }
    Ok(out)
}

fn sigma_cover(cfg: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    cfg.ks
        .iter()
        .map(|&k| {
            let r = sigma_cover_check(k)?;
            Ok(CheckRecord::flag(
                &format!("quantum.sigma-cover K={k}"),
                r.pass,
                "sigma-cover",
                format!("{} subgroups cover {} of {} elements", r.generators, r.covered, k * k),
            ))
        })
        .collect()
}

fn orthogonality(_: &SuiteConfig, _: u64) -> Result<Vec<CheckRecord>> {
    let (x, z) = clock_shift(3)?;
    let mut out = Vec::new();
    for (name, a, b) in [
        ("sigma1 vs sigma3", pauli_matrix(1), pauli_matrix(3)),
        ("sigma2 vs sigma1", pauli_matrix(2), pauli_matrix(1)),
        ("X vs Z, K=3", x.clone(), z.clone()),
        ("Z vs X, K=3", z, x),
    ] {
        let r = orthogonality_lemma_check(&a, &b)?;
        out.push(CheckRecord::small(&format!("quantum.orthogonality {name}"), r.max_diagonal, 1e-10, "eigenvector-orthogonality"));
    }
    Ok(out)
}

fn density(cfg: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut trace = Vec::new();
    let mut positive = Vec::new();
    let mut r = rng::seeded(rng::instance_seed(seed, 13, 0));
    for _ in 0..10 {
        let d = qubit_density(2, r.gen::<u64>() & 63)?;
        let (t, m) = d.validity()?;
        trace.push(CheckRecord::small("trace", t, 1e-12, "density-trace"));
        positive.push(CheckRecord::le("min eigenvalue", -m, 1.0, 1e-12, "density-positivity"));
    }
    for &k in cfg.ks.iter().filter(|&&k| k <= 5) {
        let exps: Vec<usize> = (0..(k + 1) * 2).map(|_| r.gen_range(0..k)).collect();
        let (t, m) = qudit_density(k, 2, &exps)?.validity()?;
        trace.push(CheckRecord::small("trace", t, 1e-12, "density-trace"));
        positive.push(CheckRecord::le("min eigenvalue", -m, 1.0, 1e-12, "density-positivity"));
    }
    Ok(vec![summarize("quantum.density-trace", trace), summarize("quantum.density-positivity", positive)])
}

/// Largest `|tr[A rho] - f_A|` over `points` random `eps`, with both the per-site and the dense trace.
pub fn qubit_reduction_error(n: usize, d: usize, points: usize, seed: u64) -> Result<(f64, usize, usize)> {
    let obs = random_pauli_observable(n, d, seed)?;
    let a = pauli_synthesize(&obs)?;
    let red = reduce_qubit(&pauli_expand(&a, n)?)?;
    let mut r = rng::seeded(seed ^ 0xa5a5);
    let mut err = 0.0f64;
    for _ in 0..points {
        let eps = r.gen::<u64>() & ((1u64 << (3 * n)) - 1);
        let poly = red.polynomial_value(eps);
        err = err
            .max((qubit_trace_dense(&a, n, eps)? - poly).abs())
            .max((red.evaluate(eps)? - poly).abs());
    }
    Ok((err, obs.degree(), red.spectrum.degree()))
}

fn qubit_reduction(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut err = Vec::new();
    let mut deg = Vec::new();
    let mut roundtrip = Vec::new();
    for (i, s) in seeds(seed, 14, 10).enumerate() {
        let n = 1 + i % 3;
        let (e, da, df) = qubit_reduction_error(n, 1 + i % 2, 20, s)?;
        err.push(CheckRecord::small("reduction", e, 1e-10, "qubit-reduction-law"));
        deg.push(CheckRecord::close("degree", df as f64, da as f64, 0.0, "qubit-reduction-degree"));
        let a = random_hermitian(1 << n, s);
        let obs = pauli_expand(&a, n)?;
        let imag = obs.iter().fold(0.0f64, |m, (_, c)| m.max(c.im.abs()));
        roundtrip.push(CheckRecord::small("roundtrip", pauli_synthesize(&obs)?.max_abs_diff(&a).max(imag), 1e-12, "pauli-expansion"));
    }
    Ok(vec![
        summarize("quantum.qubit-reduction", err),
        summarize("quantum.qubit-reduction-degree", deg),
        summarize("quantum.pauli-roundtrip", roundtrip),
    ])
}

/// Largest `|tr[A rho] - f_A|` for a random Hermitian `A` on `(C^K)^{(x) n}`,
/// plus the coefficient-norm comparison `||f_A^||_p >= (K+1)^{-d} ||A^||_p`.
pub fn qudit_reduction_error(k: usize, n: usize, points: usize, seed: u64) -> Result<(f64, CheckRecord)> {
    let a = random_hermitian(k.pow(n as u32), seed);
    let obs = hw_expand(&a, k, n)?;
    let red = reduce_qudit(&obs)?;
    let mut r = rng::seeded(seed ^ 0x5a5a);
    let mut err = 0.0f64;
    for _ in 0..points {
        let exps: Vec<usize> = (0..(k + 1) * n).map(|_| r.gen_range(0..k)).collect();
        let poly = red.polynomial_value(&exps)?;
        err = err
            .max((qudit_trace_dense(&a, k, n, &exps)? - poly).norm())
            .max((red.evaluate(&exps)? - poly).norm());
    }
    let d = obs.degree().max(1);
    let p = 2.0 * d as f64 / (d as f64 + 1.0);
    let reduced: f64 = red.poly.terms().map(|(_, c)| c.norm().powf(p)).sum::<f64>().powf(1.0 / p);
    let lower = CheckRecord::le(
        "coefficient norm",
        obs.coeff_lp_norm(p) / ((k + 1) as f64).powi(d as i32),
        1.0,
        reduced,
        "qudit-reduction-norm",
    );
    Ok((err, lower))
}

fn qudit_reduction(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut err = Vec::new();
    let mut norms = Vec::new();
    let mut roundtrip = Vec::new();
    for (i, s) in seeds(seed, 15, 6).enumerate() {
        let n = 1 + i % 2;
        let (e, lower) = qudit_reduction_error(3, n, 20, s)?;
        err.push(CheckRecord::small("reduction", e, 1e-9, "qudit-reduction-law"));
        norms.push(lower);
        let a = random_hermitian(3usize.pow(n as u32), s ^ 1);
        roundtrip.push(CheckRecord::small(
            "roundtrip",
            hw_synthesize(&hw_expand(&a, 3, n)?)?.max_abs_diff(&a),
            1e-10,
            "hw-expansion",
        ));
    }
    Ok(vec![
        summarize("quantum.qudit-reduction", err),
        summarize("quantum.qudit-reduction-norm", norms),
        summarize("quantum.hw-roundtrip", roundtrip),
    ])
}

fn qubit_bh(_: &SuiteConfig, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, s) in seeds(seed, 16, 6).enumerate() {
        let n = 1 + i % 3;
        let a = pauli_synthesize(&random_pauli_observable(n, 1 + i % 2, s)?)?;
        let d = pauli_expand(&a, n)?.degree();
        let r = qubit_bh_check(&a, n, default_qubit_bh_constant(d)?)?;
        let c3 = 3f64.powi(r.degree as i32) * r.bh_constant;
        out.push(CheckRecord::le("qubit bh", r.coeff_norm, c3, r.operator_norm, "qubit-bh-chain"));
        out.push(CheckRecord::le("duality", r.reduced_sup, 1.0, r.operator_norm + 1e-9, "density-duality"));
        out.push(CheckRecord::le("classical bh", r.reduced_coeff_norm, r.bh_constant, r.reduced_sup, "boolean-bh-upper"));
    }
    Ok(vec![summarize("quantum.qubit-bh", out)])
}

/// BH ratio of a random Boolean function of degree at most `d` and its degree-aware bound.
pub fn boolean_bh_instance(n: usize, d: usize, seed: u64) -> Result<(f64, f64, WalshSpectrum)> {
    let spec = walsh_transform(&random_low_degree_boolean(n, d, seed)?)?;
    let deg = spec.degree().max(1) as f64;
    Ok((bh_ratio(&spec)?, 2f64.powf((deg - 1.0) / deg), spec))
}

/// Upper bounds on the BH constant for `d = 1..=dmax`, both bases.
pub fn bh_constant_table(dmax: usize) -> Result<Vec<(usize, f64, f64)>> {
    (1..=dmax)
        .map(|d| {
            Ok((
                d,
                bh_constant_upper(d, BhBase::BooleanOptimal)?.value,
                bh_constant_upper(d, BhBase::General)?.value,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn randomized_check_requires_seed() {
        let cfg = SuiteConfig::default();
        assert!(find("cyclic.measure").unwrap().run(&cfg).is_err());
        assert!(find("cyclic.k3").unwrap().run(&cfg).unwrap().iter().all(|r| r.pass));
    }
}
