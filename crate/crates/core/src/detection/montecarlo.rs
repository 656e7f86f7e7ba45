use serde::{Deserialize, Serialize};

use super::ensemble::NullEnsemble;
use crate::error::{invalid, Error, Result};
use crate::point_process::{SummaryCurve, SummaryKind};

/// Parameters of the Monte Carlo tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub kind: SummaryKind,
    /// Lower end of the norm range (envelope and MAD tests).
    pub r_min: f64,
    /// Upper end of the norm range (envelope test).
    pub r_mc: f64,
    /// Norm exponent; `f64::INFINITY` for the sup norm.
    pub p_norm: f64,
    pub alpha: f64,
    /// Reject when `t0` reaches the `k`-th largest null statistic.
    pub k_rank: usize,
    /// Radius interval of the rank test.
    pub interval: (f64, f64),
}

impl TestConfig {
    /// `k = alpha (m + 1)`, which must be an integer in `1..=m`.
    pub fn new(kind: SummaryKind, m: usize, alpha: f64) -> Result<Self> {
        let k = alpha * (m + 1) as f64;
        if !(alpha > 0.0 && alpha < 1.0) || (k - k.round()).abs() > 1e-9 || k.round() < 1.0 {
            return Err(invalid(format!(
                "alpha (m + 1) must be a positive integer, got {alpha} x {}",
                m + 1
            )));
        }
        Ok(Self {
            kind,
            r_min: 0.0,
            r_mc: 2.0,
            p_norm: 2.0,
            alpha,
            k_rank: k.round() as usize,
            interval: (0.65, 1.05),
        })
    }
}

/// Decision and p-values of one test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    /// Conservative decision for the rank test.
    pub reject: bool,
    pub liberal_reject: bool,
    /// Observed statistic of the envelope and MAD tests.
    pub t0: Option<f64>,
    /// Observed rank of the rank test.
    pub rank0: Option<usize>,
    pub p_minus: f64,
    pub p_plus: f64,
}

fn check_compatible(observed: &SummaryCurve, ensemble: &NullEnsemble) -> Result<()> {
    let model = ensemble.model();
    if observed.kind() != model.kind {
        return Err(Error::KindMismatch {
            expected: model.kind.name(),
            actual: observed.kind().name(),
        });
    }
    if observed.radii() != &model.radii {
        return Err(invalid("observed curve and ensemble use different radius grids"));
    }
    Ok(())
}

/// Radii inside `[lo, hi]` where every curve is defined.
fn support(observed: &SummaryCurve, ensemble: &NullEnsemble, lo: f64, hi: f64) -> Result<Vec<usize>> {
    let idx: Vec<usize> = observed
        .radii()
        .indices_within(lo, hi)
        .filter(|&i| observed.is_defined(i) && ensemble.curves().iter().all(|c| c.is_defined(i)))
        .collect();
    if idx.is_empty() {
        return Err(Error::NoDefinedRadius { lo, hi });
    }
    Ok(idx)
}

fn deviation_norm(curve: &SummaryCurve, mean: &[f64], idx: &[usize], dr: &[f64], p: f64) -> f64 {
    let v = curve.values();
    if p.is_infinite() {
        idx.iter()
            .zip(mean)
            .map(|(&i, &s)| (v[i] - s).abs())
            .fold(0.0, f64::max)
    } else {
        idx.iter()
            .zip(mean)
            .map(|(&i, &s)| (v[i] - s).abs().powf(p) * dr[i])
            .sum::<f64>()
            .powf(p.recip())
    }
}

fn deviation_test(
    observed: &SummaryCurve,
    ensemble: &NullEnsemble,
    r_min: f64,
    r_mc: f64,
    p: f64,
    k: usize,
) -> Result<TestOutcome> {
    check_compatible(observed, ensemble)?;
    let m = ensemble.m();
    if k == 0 || k > m {
        return Err(invalid(format!("k must be in 1..={m}, got {k}")));
    }
    if !(p > 0.0) {
        return Err(invalid(format!("norm exponent must be positive, got {p}")));
    }
    let r_max = *observed.radii().radii().last().expect("non-empty grid");
    if r_mc > r_max {
        return Err(invalid(format!("r_mc = {r_mc} exceeds the largest radius {r_max}")));
    }
    let idx = support(observed, ensemble, r_min, r_mc)?;
    let dr = observed.radii().spacing();
    let curves: Vec<&SummaryCurve> = std::iter::once(observed).chain(ensemble.curves()).collect();
    let mean: Vec<f64> = idx
        .iter()
        .map(|&i| curves.iter().map(|c| c.values()[i]).sum::<f64>() / curves.len() as f64)
        .collect();
    let t: Vec<f64> = curves
        .iter()
        .map(|c| deviation_norm(c, &mean, &idx, &dr, p))
        .collect();
    let t0 = t[0];
    let mut null: Vec<f64> = t[1..].to_vec();
    null.sort_by(|a, b| b.total_cmp(a));
    let reject = t0 >= null[k - 1];
    let above = null.iter().filter(|&&x| x > t0).count();
    let at_least = null.iter().filter(|&&x| x >= t0).count();
    let denom = (m + 1) as f64;
    Ok(TestOutcome {
        reject,
        liberal_reject: reject,
        t0: Some(t0),
        rank0: None,
        p_minus: (1 + above) as f64 / denom,
        p_plus: (1 + at_least) as f64 / denom,
    })
}

/// Monte Carlo envelope test on `[r_min, r_mc]` with the `p`-norm.
///
/// `t_j` is the discrete norm `(sum |S_j - S_bar|^p dr)^(1/p)` of the
/// deviation from the mean of all `m + 1` curves, including the observed
/// one. Radii where any curve is undefined are skipped.
pub fn envelope_test(observed: &SummaryCurve, ensemble: &NullEnsemble, cfg: &TestConfig) -> Result<TestOutcome> {
    deviation_test(observed, ensemble, cfg.r_min, cfg.r_mc, cfg.p_norm, cfg.k_rank)
}

/// Global maximum absolute deviation test: sup norm up to the largest radius.
pub fn mad_test(observed: &SummaryCurve, ensemble: &NullEnsemble, cfg: &TestConfig) -> Result<TestOutcome> {
    let r_max = *observed.radii().radii().last().expect("non-empty grid");
    deviation_test(observed, ensemble, cfg.r_min, r_max, f64::INFINITY, cfg.k_rank)
}

/// Pointwise extreme rank of each curve: `min(#{<= v}, #{>= v})` over all curves.
fn pointwise_ranks(column: &[f64]) -> Vec<usize> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len();
    column
        .iter()
        .map(|&v| {
            let le = sorted.partition_point(|&x| x <= v);
            let ge = total - sorted.partition_point(|&x| x < v);
            le.min(ge)
        })
        .collect()
}

/// Global ranks `rho_j` of the observed curve (index 0) and the ensemble.
///
/// `rho_j` is the largest `k` such that the curve stays between the `k`-th
/// lower and upper envelopes of all `m + 1` curves at every radius of `idx`.
pub fn global_ranks(curves: &[&SummaryCurve], idx: &[usize]) -> Vec<usize> {
    let mut rho = vec![usize::MAX; curves.len()];
    let mut column = vec![0.0; curves.len()];
    for &i in idx {
        for (slot, c) in column.iter_mut().zip(curves) {
            *slot = c.values()[i];
        }
        for (r, pr) in rho.iter_mut().zip(pointwise_ranks(&column)) {
            *r = (*r).min(pr);
        }
    }
    rho
}

/// Global rank envelope test on `cfg.interval`.
///
/// `p_minus = #{j >= 1 : rho_j < rho_0} / (m + 1)` and
/// `p_plus = #{j >= 0 : rho_j <= rho_0} / (m + 1)`, the observation counting
/// itself in the conservative value. `reject` is `p_plus < alpha`.
pub fn rank_envelope_test(observed: &SummaryCurve, ensemble: &NullEnsemble, cfg: &TestConfig) -> Result<TestOutcome> {
    check_compatible(observed, ensemble)?;
    let (lo, hi) = cfg.interval;
    let idx = support(observed, ensemble, lo, hi)?;
    let curves: Vec<&SummaryCurve> = std::iter::once(observed).chain(ensemble.curves()).collect();
    let rho = global_ranks(&curves, &idx);
    let rho0 = rho[0];
    let denom = curves.len() as f64;
    let below = rho[1..].iter().filter(|&&r| r < rho0).count();
    let at_most = rho.iter().filter(|&&r| r <= rho0).count();
    let p_minus = below as f64 / denom;
    let p_plus = at_most as f64 / denom;
    Ok(TestOutcome {
        reject: p_plus < cfg.alpha,
        liberal_reject: p_minus < cfg.alpha,
        t0: None,
        rank0: Some(rho0),
        p_minus,
        p_plus,
    })
}

/// Pointwise minimum of the ensemble curves over `idx`.
pub fn lower_envelope(ensemble: &NullEnsemble, idx: &[usize]) -> Vec<f64> {
    idx.iter()
        .map(|&i| {
            ensemble
                .curves()
                .iter()
                .map(|c| c.values()[i])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub(crate) fn defined_support(
    observed: &SummaryCurve,
    ensemble: &NullEnsemble,
    lo: f64,
    hi: f64,
) -> Result<Vec<usize>> {
    support(observed, ensemble, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::NullModel;
    use crate::point_process::RadiusGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> RadiusGrid {
        RadiusGrid::linspace(0.0, 1.0, n).unwrap()
    }

    fn ensemble_of(values: &[Vec<f64>]) -> NullEnsemble {
        let radii = grid(values[0].len());
        let model = NullModel::new(64, radii.clone(), SummaryKind::F);
        let curves = values
            .iter()
            .map(|v| SummaryCurve::new(radii.clone(), v.clone(), SummaryKind::F).unwrap())
            .collect();
        NullEnsemble::from_curves(curves, 0, model).unwrap()
    }

    fn curve(v: Vec<f64>) -> SummaryCurve {
        SummaryCurve::new(grid(v.len()), v, SummaryKind::F).unwrap()
    }

    fn random_curves(rng: &mut ChaCha8Rng, count: usize, len: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|_| {
                let mut acc = 0.0;
                (0..len)
                    .map(|_| {
                        acc += rng.gen_range(0.0..0.1);
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    fn cfg(m: usize) -> TestConfig {
        let mut c = TestConfig::new(SummaryKind::F, m, 1.0 / (m + 1) as f64).unwrap();
        c.r_mc = 1.0;
        c.interval = (0.0, 1.0);
        c
    }

    #[test]
    fn config_requires_integer_k() {
        assert_eq!(TestConfig::new(SummaryKind::F, 199, 0.05).unwrap().k_rank, 10);
        assert!(TestConfig::new(SummaryKind::F, 100, 0.05).is_err());
        assert!(TestConfig::new(SummaryKind::F, 199, 0.0).is_err());
    }

    #[test]
    fn duplicated_member_statistic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let values = random_curves(&mut rng, 4, 10);
            let e = ensemble_of(&values);
            let j = trial % 4;
            let obs = curve(values[j].clone());
            let out = envelope_test(&obs, &e, &cfg(4)).unwrap();
            // brute force over the 5 statistics
            let all: Vec<&Vec<f64>> = std::iter::once(&values[j]).chain(values.iter()).collect();
            let mean: Vec<f64> = (0..10).map(|i| all.iter().map(|v| v[i]).sum::<f64>() / 5.0).collect();
            let dr = 1.0 / 9.0;
            let t: Vec<f64> = all
                .iter()
                .map(|v| (0..10).map(|i| (v[i] - mean[i]).powi(2) * dr).sum::<f64>().sqrt())
                .collect();
            assert!((out.t0.unwrap() - t[j + 1]).abs() < 1e-12);
            let max = t[1..].iter().copied().fold(f64::MIN, f64::max);
            assert_eq!(out.reject, t[0] >= max);
        }
    }

    #[test]
    fn mean_curve_never_rejects() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let values = random_curves(&mut rng, 9, 12);
        let mean: Vec<f64> = (0..12)
            .map(|i| values.iter().map(|v| v[i]).sum::<f64>() / 9.0)
            .collect();
        let e = ensemble_of(&values);
        let obs = curve(mean);
        for k in 1..=9 {
            let mut c = cfg(9);
            c.k_rank = k;
            let out = envelope_test(&obs, &e, &c).unwrap();
            assert!(out.t0.unwrap() < 1e-12);
            assert!(!out.reject);
            assert!(!mad_test(&obs, &e, &c).unwrap().reject);
        }
    }

    #[test]
    fn sup_dominance_rejects_mad() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let values = random_curves(&mut rng, 9, 12);
        let e = ensemble_of(&values);
        let mut obs = values[0].clone();
        obs[6] += 50.0;
        let out = mad_test(&curve(obs), &e, &cfg(9)).unwrap();
        assert!(out.reject);
    }

    #[test]
    fn mad_equals_sup_envelope() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let values = random_curves(&mut rng, 19, 15);
            let e = ensemble_of(&values);
            let obs = curve(random_curves(&mut rng, 1, 15).remove(0));
            let mut c = TestConfig::new(SummaryKind::F, 19, 0.1).unwrap();
            let mad = mad_test(&obs, &e, &c).unwrap();
            c.p_norm = f64::INFINITY;
            c.r_mc = 1.0;
            let env = envelope_test(&obs, &e, &c).unwrap();
            assert_eq!(mad, env);
        }
    }

    /// Ranks by explicit envelope search over every `k` and radius.
    fn brute_ranks(all: &[Vec<f64>]) -> Vec<usize> {
        let n = all.len();
        let len = all[0].len();
        all.iter()
            .map(|c| {
                let mut best = 0;
                for k in 1..=n {
                    let inside = (0..len).all(|i| {
                        let mut col: Vec<f64> = all.iter().map(|v| v[i]).collect();
                        col.sort_by(f64::total_cmp);
                        let low = col[k - 1];
                        let upp = col[n - k];
                        low <= c[i] && c[i] <= upp
                    });
                    if inside {
                        best = k;
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn ranks_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let values = random_curves(&mut rng, 5, 10);
            let refs: Vec<SummaryCurve> = values.iter().map(|v| curve(v.clone())).collect();
            let ptrs: Vec<&SummaryCurve> = refs.iter().collect();
            let idx: Vec<usize> = (0..10).collect();
            assert_eq!(global_ranks(&ptrs, &idx), brute_ranks(&values));
        }
    }

    #[test]
    fn ranks_with_ties_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let values: Vec<Vec<f64>> = (0..6)
                .map(|_| (0..8).map(|_| rng.gen_range(0..4) as f64).collect())
                .collect();
            let refs: Vec<SummaryCurve> = values.iter().map(|v| curve(v.clone())).collect();
            let ptrs: Vec<&SummaryCurve> = refs.iter().collect();
            let idx: Vec<usize> = (0..8).collect();
            assert_eq!(global_ranks(&ptrs, &idx), brute_ranks(&values));
        }
    }

    #[test]
    fn extreme_observation_has_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let values = random_curves(&mut rng, 4, 10);
        let e = ensemble_of(&values);
        let mut obs = values[0].clone();
        obs[3] = -1.0;
        let out = rank_envelope_test(&curve(obs), &e, &cfg(4)).unwrap();
        assert_eq!(out.rank0, Some(1));
    }

    #[test]
    fn median_of_symmetric_ensemble_has_p_plus_one() {
        let base: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let values: Vec<Vec<f64>> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|s| base.iter().map(|b| b + s * 0.01).collect())
            .collect();
        let e = ensemble_of(&values);
        let out = rank_envelope_test(&curve(base), &e, &cfg(4)).unwrap();
        assert_eq!(out.rank0, Some(3));
        assert_eq!(out.p_plus, 1.0);
        assert!(!out.reject);
    }

    #[test]
    fn duplicate_observation_cannot_lower_its_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..50 {
            let mut values = random_curves(&mut rng, 6, 8);
            let before = brute_ranks(&values)[0];
            values.push(values[0].clone());
            assert!(brute_ranks(&values)[0] >= before);
        }
    }

    #[test]
    fn p_value_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let values = random_curves(&mut rng, 19, 10);
            let e = ensemble_of(&values);
            let obs = curve(random_curves(&mut rng, 1, 10).remove(0));
            let c = TestConfig {
                interval: (0.0, 1.0),
                ..TestConfig::new(SummaryKind::F, 19, 0.1).unwrap()
            };
            let out = rank_envelope_test(&obs, &e, &c).unwrap();
            assert!(out.p_minus <= out.p_plus);
            assert!(!out.reject || out.liberal_reject);
        }
    }

    #[test]
    fn undefined_radii_are_skipped_or_fatal() {
        let values = vec![vec![0.1, 0.2, f64::NAN], vec![0.15, 0.25, f64::NAN]];
        let e = ensemble_of(&values);
        let obs = curve(vec![0.1, 0.3, f64::NAN]);
        let c = TestConfig {
            k_rank: 1,
            r_mc: 1.0,
            interval: (0.0, 1.0),
            ..TestConfig::new(SummaryKind::F, 1, 0.5).unwrap()
        };
        assert!(envelope_test(&obs, &e, &c).unwrap().t0.unwrap().is_finite());
        let only_nan = TestConfig {
            r_min: 0.9,
            interval: (0.9, 1.0),
            ..c
        };
        assert!(matches!(envelope_test(&obs, &e, &only_nan), Err(Error::NoDefinedRadius { .. })));
        assert!(matches!(
            rank_envelope_test(&obs, &e, &only_nan),
            Err(Error::NoDefinedRadius { .. })
        ));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let values = vec![vec![0.1, 0.2], vec![0.15, 0.25]];
        let e = ensemble_of(&values);
        let obs = SummaryCurve::new(grid(2), vec![0.1, 0.2], SummaryKind::FTilde).unwrap();
        assert!(matches!(
            envelope_test(&obs, &e, &cfg(2)),
            Err(Error::KindMismatch { .. })
        ));
    }
}
