//! Ensemble statistics and cross-validation: Monte Carlo degree
//! distributions against the closed forms, the embedding equivalence
//! test, distribution distances, and power-law exponent recovery.

use crate::graph_process::{empirical_distribution, simulate, GraphChain};
use crate::limit_dist::Pmf;
use crate::model::ModelParams;
use crate::rng::{trajectory_rng, GRAPH_STREAM, YULE_STREAM};
use crate::yule_process::YuleChain;
use crate::{graph_process, yule_process, Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

mod chi2;

pub use chi2::chi_square_quantile;

/// An ensemble of independent trajectories of one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub params: ModelParams,
    /// Discrete horizon t of every run.
    pub steps: u64,
    pub num_runs: u64,
    /// Run k is seeded with base_seed + k.
    pub base_seed: u64,
}

/// Mean of the per-run normalized degree histograms: an estimate of
/// P(d(V_t) = j), indexed by degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedDistribution {
    pub masses: Vec<f64>,
    pub num_runs: u64,
}

/// Distances and test statistics between two degree distributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub total_variation: f64,
    pub chi_square: f64,
    pub chi_square_dof: usize,
    pub max_abs_diff: f64,
    /// Whether the comparison passed its threshold: the TV budget for
    /// mass-to-mass comparisons, the 0.999 chi-square quantile for the
    /// two-sample embedding test.
    pub verdict: bool,
}

/// Run the ensemble and average the per-run empirical distributions
/// π_t^j. Runs execute in parallel; the reduction is a fixed-order fold
/// over the run index, so the result does not depend on the schedule.
pub fn ensemble_degree_distribution(spec: &EnsembleSpec) -> AveragedDistribution {
    let per_run: Vec<Vec<f64>> = (0..spec.num_runs)
        .into_par_iter()
        .map(|k| {
            let state = simulate(&spec.params, spec.steps, spec.base_seed.wrapping_add(k));
            empirical_distribution(&state).masses()
        })
        .collect();
    let width = per_run.iter().map(Vec::len).max().unwrap_or(1);
    let mut masses = vec![0.0; width];
    for run in &per_run {
        for (j, &m) in run.iter().enumerate() {
            masses[j] += m;
        }
    }
    for m in &mut masses {
        *m /= spec.num_runs as f64;
    }
    AveragedDistribution { masses, num_runs: spec.num_runs }
}

/// Mass vector of a truncated analytic pmf (tail mass excluded; the
/// comparison treats whatever is missing as tail).
pub fn pmf_masses(pmf: &Pmf) -> &[f64] {
    &pmf.values
}

const MASS_TOLERANCE: f64 = 1e-9;

/// Compare two (near-)normalized mass vectors.
///
/// Supports are aligned by padding with zeros; mass missing from either
/// side (a truncated tail) is pooled into one extra cell, so inputs must
/// sum to at most 1 + 1e-9. The TV distance is half the L1 distance over
/// the padded support including the pooled tail cell. The chi-square
/// column treats `q` as the expected distribution at sample size `n`,
/// pooling trailing cells until each holds expected count ≥ 5; `verdict`
/// is the TV test against `tv_threshold`.
pub fn compare_distributions(
    p: &[f64],
    q: &[f64],
    n: u64,
    tv_threshold: f64,
) -> Result<ComparisonReport> {
    for (name, v) in [("first", p), ("second", q)] {
        if v.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Normalization(format!("{name} input has negative mass")));
        }
        let total: f64 = v.iter().sum();
        if total > 1.0 + MASS_TOLERANCE {
            return Err(Error::Normalization(format!(
                "{name} input sums to {total} > 1"
            )));
        }
    }
    let width = p.len().max(q.len());
    let at = |v: &[f64], j: usize| v.get(j).copied().unwrap_or(0.0);
    let tail = |v: &[f64]| (1.0 - v.iter().sum::<f64>()).max(0.0);

    let mut l1 = 0.0;
    let mut max_abs = 0.0f64;
    for j in 0..width {
        let d = (at(p, j) - at(q, j)).abs();
        l1 += d;
        max_abs = max_abs.max(d);
    }
    let tail_gap = (tail(p) - tail(q)).abs();
    let total_variation = 0.5 * (l1 + tail_gap);

    // Pearson statistic with cells pooled (from the high-degree end)
    // until the expected count under q reaches 5.
    let min_expected = 5.0;
    let nf = n as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc_p = tail(p);
    let mut acc_q = tail(q);
    for j in (0..width).rev() {
        acc_p += at(p, j);
        acc_q += at(q, j);
        if nf * acc_q >= min_expected {
            cells.push((acc_p, acc_q));
            acc_p = 0.0;
            acc_q = 0.0;
        }
    }
    if acc_q > 0.0 || acc_p > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += acc_p;
                last.1 += acc_q;
            }
            None => cells.push((acc_p, acc_q)),
        }
    }
    let chi_square = cells
        .iter()
        .map(|&(op, eq)| {
            if eq == 0.0 {
                if op == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                nf * (op - eq) * (op - eq) / eq
            }
        })
        .sum();
    Ok(ComparisonReport {
        total_variation,
        chi_square,
        chi_square_dof: cells.len().saturating_sub(1),
        max_abs_diff: max_abs,
        verdict: total_variation <= tv_threshold,
    })
}

/// Significance level of the embedding test.
const EMBEDDING_QUANTILE: f64 = 0.999;
/// Minimum combined count per pooled cell (expected ≥ 5 on each side for
/// equal sample sizes).
const POOL_MIN_COUNT: u64 = 10;

/// Draw `samples` values of d(V_t) from the graph chain and `samples`
/// values of s(Ẑ_{τ̂_t}) from the Yule chain at census t, on disjoint
/// generator streams, and compare them with a pooled-cell two-sample
/// chi-square at the 0.999 level.
pub fn embedding_equivalence_test(
    params: &ModelParams,
    t: u64,
    samples: u64,
    seed: u64,
) -> Result<ComparisonReport> {
    embedding_equivalence_test_with(params, params, t, samples, seed)
}

/// The embedding test with separately chosen parameters per side — the
/// negative control: mismatched rates must fail the test.
pub fn embedding_equivalence_test_with(
    graph_params: &ModelParams,
    yule_params: &ModelParams,
    t: u64,
    samples: u64,
    seed: u64,
) -> Result<ComparisonReport> {
    if t < 1 {
        return Err(Error::Domain(format!("embedding test requires t >= 1, got {t}")));
    }
    if samples < 1_000 {
        return Err(Error::Domain(format!(
            "embedding test requires at least 1000 samples per side, got {samples}"
        )));
    }
    let graph_params = *graph_params;
    let yule_params = *yule_params;
    let graph_draws: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = trajectory_rng(seed.wrapping_add(k), GRAPH_STREAM);
            let mut chain = GraphChain::new(graph_params);
            for _ in 0..t {
                chain.step(&mut rng);
            }
            graph_process::sample_uniform_vertex_degree(chain.state(), &mut rng)
        })
        .collect();
    let yule_draws: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = trajectory_rng(seed.wrapping_add(k), YULE_STREAM);
            let mut chain = YuleChain::new(yule_params);
            for _ in 0..t {
                chain.gillespie_step(&mut rng);
            }
            yule_process::sample_uniform_household_size(chain.state(), &mut rng)
        })
        .collect();
    two_sample_report(&graph_draws, &yule_draws)
}

/// Pooled-cell two-sample chi-square between two equal-size draws.
fn two_sample_report(a: &[u64], b: &[u64]) -> Result<ComparisonReport> {
    assert_eq!(a.len(), b.len(), "two-sample test requires equal sample sizes");
    let n = a.len() as f64;
    let mut counts: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for &x in a {
        counts.entry(x).or_insert((0, 0)).0 += 1;
    }
    for &x in b {
        counts.entry(x).or_insert((0, 0)).1 += 1;
    }

    // Pool adjacent degree cells from the tail end until each pooled
    // cell carries at least POOL_MIN_COUNT combined observations.
    let mut pooled: Vec<(u64, u64)> = Vec::new();
    let mut acc = (0u64, 0u64);
    for (_, &(ca, cb)) in counts.iter().rev() {
        acc.0 += ca;
        acc.1 += cb;
        if acc.0 + acc.1 >= POOL_MIN_COUNT {
            pooled.push(acc);
            acc = (0, 0);
        }
    }
    if acc.0 + acc.1 > 0 {
        if let Some(last) = pooled.last_mut() {
            last.0 += acc.0;
            last.1 += acc.1;
        } else {
            pooled.push(acc);
        }
    }
    if pooled.len() < 2 {
        return Err(Error::InsufficientSamples { cells: pooled.len() });
    }

    // Equal sample sizes: the two-sample statistic reduces to
    // Σ (a_i - b_i)² / (a_i + b_i).
    let chi_square: f64 = pooled
        .iter()
        .map(|&(ca, cb)| {
            let d = ca as f64 - cb as f64;
            d * d / (ca + cb) as f64
        })
        .sum();
    let dof = pooled.len() - 1;
    let threshold = chi_square_quantile(EMBEDDING_QUANTILE, dof as f64);

    let mut l1 = 0.0;
    let mut max_abs = 0.0f64;
    for &(ca, cb) in counts.values() {
        let d = (ca as f64 - cb as f64).abs() / n;
        l1 += d;
        max_abs = max_abs.max(d);
    }
    Ok(ComparisonReport {
        total_variation: 0.5 * l1,
        chi_square,
        chi_square_dof: dof,
        max_abs_diff: max_abs,
        verdict: chi_square <= threshold,
    })
}

/// Ordinary least squares of ln p_j against ln j on a degree window.
/// Returns the slope and the RMS residual of the fit.
pub fn fit_power_law_exponent(masses: &[f64], j_min: u64, j_max: u64) -> Result<(f64, f64)> {
    if j_min < 1 || j_min >= j_max {
        return Err(Error::Domain(format!(
            "power-law window needs 1 <= j_min < j_max, got [{j_min}, {j_max}]"
        )));
    }
    if (j_max as usize) >= masses.len() {
        return Err(Error::Domain(format!(
            "window end {j_max} exceeds the distribution support {}",
            masses.len() - 1
        )));
    }
    let mut xs = Vec::with_capacity((j_max - j_min + 1) as usize);
    let mut ys = Vec::with_capacity(xs.capacity());
    for j in j_min..=j_max {
        let m = masses[j as usize];
        if !(m > 0.0) {
            return Err(Error::Domain(format!("zero mass at j = {j} inside the fit window")));
        }
        xs.push((j as f64).ln());
        ys.push(m.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok((slope, (rss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit_dist::limit_pmf;

    fn p(l1: f64, l2: f64, m2: f64) -> ModelParams {
        ModelParams::new(l1, l2, m2).unwrap()
    }

    #[test]
    fn zero_step_ensemble_is_point_mass_at_one() {
        let spec = EnsembleSpec { params: p(1.0, 1.0, 0.0), steps: 0, num_runs: 8, base_seed: 3 };
        let avg = ensemble_degree_distribution(&spec);
        assert_eq!(avg.masses.len(), 2);
        assert_eq!(avg.masses[0], 0.0);
        assert_eq!(avg.masses[1], 1.0);
    }

    #[test]
    fn averaged_masses_sum_to_one() {
        let spec =
            EnsembleSpec { params: p(1.0, 2.0, 1.0), steps: 500, num_runs: 40, base_seed: 11 };
        let avg = ensemble_degree_distribution(&spec);
        let total: f64 = avg.masses.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn ensemble_is_schedule_independent() {
        // Same spec, two evaluations (rayon picks whatever schedule it
        // likes): identical bytes.
        let spec =
            EnsembleSpec { params: p(1.0, 2.0, 1.0), steps: 300, num_runs: 32, base_seed: 5 };
        let a = ensemble_degree_distribution(&spec);
        let b = ensemble_degree_distribution(&spec);
        assert_eq!(a, b);
    }

    #[test]
    fn comparison_identity_and_disjoint() {
        let p1 = vec![0.25, 0.5, 0.25];
        let r = compare_distributions(&p1, &p1, 10_000, 0.05).unwrap();
        assert_eq!(r.total_variation, 0.0);
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.max_abs_diff, 0.0);
        assert!(r.verdict);

        let a = vec![1.0];
        let b = vec![0.0, 1.0];
        let r = compare_distributions(&a, &b, 10_000, 0.05).unwrap();
        assert_eq!(r.total_variation, 1.0);
        assert!(!r.verdict);
    }

    #[test]
    fn comparison_is_symmetric_in_tv() {
        let a = vec![0.5, 0.3, 0.1]; // 0.1 tail
        let b = vec![0.2, 0.2, 0.2, 0.4];
        let ab = compare_distributions(&a, &b, 1_000, 0.5).unwrap();
        let ba = compare_distributions(&b, &a, 1_000, 0.5).unwrap();
        assert_eq!(ab.total_variation, ba.total_variation);
        assert_eq!(ab.max_abs_diff, ba.max_abs_diff);
        // tail mass counts: TV = 0.5(0.3+0.1+0.1+0.4 - ... ) computed vs
        // hand value: |0.5-0.2|+|0.3-0.2|+|0.1-0.2|+|0-0.4| = 0.9, tails
        // |0.1-0| = 0.1, so TV = 0.5.
        assert!((ab.total_variation - 0.5).abs() < 1e-15);
    }

    #[test]
    fn comparison_rejects_unnormalized() {
        let too_much = vec![0.9, 0.3];
        assert!(matches!(
            compare_distributions(&too_much, &[1.0], 100, 0.1),
            Err(Error::Normalization(_))
        ));
        let negative = vec![-0.1, 1.1];
        assert!(compare_distributions(&negative, &[1.0], 100, 0.1).is_err());
    }

    #[test]
    fn embedding_test_validates_preconditions() {
        let params = p(1.0, 2.0, 1.0);
        assert!(embedding_equivalence_test(&params, 0, 2_000, 1).is_err());
        assert!(embedding_equivalence_test(&params, 10, 999, 1).is_err());
    }

    #[test]
    fn embedding_test_small_smoke_passes() {
        // Small but real run; the acceptance suite runs the full-size one.
        let params = p(1.0, 2.0, 1.0);
        let r = embedding_equivalence_test(&params, 60, 4_000, 20_260_101).unwrap();
        assert!(r.verdict, "chi2 {} dof {}", r.chi_square, r.chi_square_dof);
    }

    #[test]
    fn embedding_negative_control_fails() {
        let a = p(1.0, 2.0, 1.0);
        let b = p(1.0, 2.5, 1.0);
        let r = embedding_equivalence_test_with(&a, &b, 60, 4_000, 20_260_102).unwrap();
        assert!(!r.verdict, "chi2 {} dof {}", r.chi_square, r.chi_square_dof);
    }

    #[test]
    fn uniform_degree_draws_match_averaged_distribution() {
        // Both estimate P(d(V_t) = j): pooled uniform-vertex draws vs the
        // ensemble average, compared through the pooled one-sample
        // chi-square at 0.999.
        let params = p(1.0, 1.0, 1.0);
        let t = 200u64;
        let avg = ensemble_degree_distribution(&EnsembleSpec {
            params,
            steps: t,
            num_runs: 600,
            base_seed: 40_000,
        });
        let n_draws = 10_000u64;
        let draws: Vec<u64> = (0..n_draws)
            .into_par_iter()
            .map(|k| {
                let mut rng = trajectory_rng(90_000 + k, GRAPH_STREAM);
                let mut chain = GraphChain::new(params);
                for _ in 0..t {
                    chain.step(&mut rng);
                }
                graph_process::sample_uniform_vertex_degree(chain.state(), &mut rng)
            })
            .collect();
        let width = (draws.iter().max().copied().unwrap_or(0) + 1) as usize;
        let mut observed = vec![0.0; width.max(avg.masses.len())];
        for &d in &draws {
            observed[d as usize] += 1.0 / n_draws as f64;
        }
        let r = compare_distributions(&observed, &avg.masses, n_draws, 1.0).unwrap();
        let threshold = chi_square_quantile(0.999, r.chi_square_dof as f64);
        assert!(
            r.chi_square <= threshold,
            "chi2 {} > {} at dof {}",
            r.chi_square,
            threshold,
            r.chi_square_dof
        );
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        // p_j ∝ j^{-2} on a window is exactly log-linear.
        let mut masses = vec![0.0; 201];
        let norm: f64 = (1..=200).map(|j| (j as f64).powi(-2)).sum();
        for j in 1..=200usize {
            masses[j] = (j as f64).powi(-2) / norm;
        }
        let (slope, resid) = fit_power_law_exponent(&masses, 10, 200).unwrap();
        assert!((slope + 2.0).abs() < 1e-6, "slope {slope}");
        assert!(resid < 1e-10, "residual {resid}");
    }

    #[test]
    fn fit_detects_geometric_departure() {
        // Subcritical pmf is not a power law: the residual grows as the
        // window right edge moves out.
        let pmf = limit_pmf(&p(1.0, 1.0, 2.0), 400).unwrap();
        let (_, r_short) = fit_power_law_exponent(&pmf.values, 10, 60).unwrap();
        let (_, r_long) = fit_power_law_exponent(&pmf.values, 10, 400).unwrap();
        assert!(
            r_long > 4.0 * r_short,
            "short {r_short} long {r_long}"
        );
    }

    #[test]
    fn fit_window_validation() {
        let masses = vec![0.0, 0.5, 0.5];
        assert!(fit_power_law_exponent(&masses, 0, 2).is_err());
        assert!(fit_power_law_exponent(&masses, 1, 5).is_err());
        assert!(fit_power_law_exponent(&[0.5, 0.0, 0.5], 1, 2).is_err());
    }
}
