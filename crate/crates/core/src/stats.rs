//! Per-step statistics across simulated cases.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scenario::CaseMeasures;
use crate::sum::csum;

/// Sample Pearson correlation. `UndefinedCorrelation` when fewer than two
/// points or either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation);
    }
    let mx = csum(xs.iter().copied()) / n as f64;
    let my = csum(ys.iter().copied()) / n as f64;
    let sxy = csum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    let sxx = csum(xs.iter().map(|x| (x - mx) * (x - mx)));
    let syy = csum(ys.iter().map(|y| (y - my) * (y - my)));
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(csum(xs.iter().copied()) / xs.len() as f64)
    }
}

/// Median taking the lower-middle element for even counts.
pub fn lower_median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v[(v.len() - 1) / 2])
}

/// Per-step means and medians. KL statistics skip infinite-flagged cases
/// and are `None` when every case at that step is flagged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Aggregates {
    pub mean_kl: Vec<Option<f64>>,
    pub median_kl: Vec<Option<f64>>,
    pub mean_entropy: Vec<f64>,
    pub median_entropy: Vec<f64>,
    pub mean_abs_map_error: Vec<f64>,
    pub mean_span30: Vec<f64>,
    /// Cases excluded from the KL statistics at each step.
    pub infinite_at_step: Vec<usize>,
}

impl Aggregates {
    pub fn steps(&self) -> usize {
        self.mean_entropy.len()
    }
}

/// Per-step correlations across cases; `None` where undefined.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Correlations {
    pub kl_map_error: Vec<Option<f64>>,
    pub entropy_map_error: Vec<Option<f64>>,
    pub kl_span: Vec<Option<f64>>,
    pub entropy_span: Vec<Option<f64>>,
}

/// Aggregates over cases at each measurement step, plus the number of cases
/// with at least one infinite-flagged step.
pub fn aggregate(per_case: &[CaseMeasures]) -> Result<(Aggregates, Correlations, usize)> {
    let first = per_case.first().ok_or(Error::EmptyInput)?;
    let steps = first.steps();
    for c in per_case {
        if c.steps() != steps {
            return Err(Error::LengthMismatch {
                left: steps,
                right: c.steps(),
            });
        }
    }
    let mut agg = Aggregates::default();
    let mut cor = Correlations::default();
    let corr = |a: &[f64], b: &[f64]| pearson(a, b).ok();

    for k in 0..steps {
        let mut kl = Vec::with_capacity(per_case.len());
        let mut err_finite = Vec::with_capacity(per_case.len());
        let mut span_finite = Vec::with_capacity(per_case.len());
        let mut ent = Vec::with_capacity(per_case.len());
        let mut err = Vec::with_capacity(per_case.len());
        let mut span = Vec::with_capacity(per_case.len());
        for c in per_case {
            let e = c.map_error[k] as f64;
            let s = c.span30[k] as f64;
            if !c.infinite[k] {
                kl.push(c.kl_learning[k]);
                err_finite.push(e);
                span_finite.push(s);
            }
            ent.push(c.entropy_learning[k]);
            err.push(e);
            span.push(s);
        }
        agg.mean_kl.push(mean(&kl));
        agg.median_kl.push(lower_median(&kl));
        agg.mean_entropy.push(mean(&ent).unwrap_or(f64::NAN));
        agg.median_entropy
            .push(lower_median(&ent).unwrap_or(f64::NAN));
        agg.mean_abs_map_error.push(mean(&err).unwrap_or(f64::NAN));
        agg.mean_span30.push(mean(&span).unwrap_or(f64::NAN));
        agg.infinite_at_step.push(per_case.len() - kl.len());

        cor.kl_map_error.push(corr(&kl, &err_finite));
        cor.entropy_map_error.push(corr(&ent, &err));
        cor.kl_span.push(corr(&kl, &span_finite));
        cor.entropy_span.push(corr(&ent, &span));
    }
    let infinite_cases = per_case
        .iter()
        .filter(|c| c.infinite.iter().any(|&f| f))
        .count();
    Ok((agg, cor, infinite_cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&xs, &xs).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-15);
        // dx = (-1.5,-.5,.5,1.5), dy = (-.5,-1.5,1.5,.5): Σdxdy = 3, Σdx² = Σdy² = 5
        let ys = [2.0, 1.0, 4.0, 3.0];
        assert!((pearson(&xs, &ys).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert_eq!(pearson(&[1.0], &[1.0]), Err(Error::UndefinedCorrelation));
        assert_eq!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::UndefinedCorrelation)
        );
        assert_eq!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn lower_median_picks_lower_middle() {
        assert_eq!(lower_median(&[4.0, 1.0, 3.0, 2.0]), Some(2.0));
        assert_eq!(lower_median(&[5.0, 1.0, 3.0]), Some(3.0));
        assert_eq!(lower_median(&[]), None);
    }

    fn case(id: usize, kl: &[f64], ent: &[f64], err: &[u64], span: &[i64]) -> CaseMeasures {
        CaseMeasures {
            case_id: id,
            theta_star: 40,
            observations: vec![0; kl.len()],
            kl_learning: kl.to_vec(),
            entropy_learning: ent.to_vec(),
            map_error: err.to_vec(),
            span30: span.to_vec(),
            infinite: kl.iter().map(|v| !v.is_finite()).collect(),
        }
    }

    #[test]
    fn single_case_aggregates_equal_case() {
        let c = case(0, &[0.5, 1.5], &[1.0, 2.0], &[3, 1], &[4, 2]);
        let (a, cor, inf) = aggregate(&[c]).unwrap();
        assert_eq!(a.mean_kl, vec![Some(0.5), Some(1.5)]);
        assert_eq!(a.median_kl, vec![Some(0.5), Some(1.5)]);
        assert_eq!(a.mean_entropy, vec![1.0, 2.0]);
        assert_eq!(a.mean_abs_map_error, vec![3.0, 1.0]);
        assert_eq!(a.mean_span30, vec![4.0, 2.0]);
        assert_eq!(cor.kl_map_error, vec![None, None]);
        assert_eq!(inf, 0);
    }

    #[test]
    fn constant_cases() {
        let c = case(0, &[2.0], &[3.0], &[1], &[1]);
        let (a, _, _) = aggregate(&[c.clone(), c]).unwrap();
        assert_eq!(a.mean_kl[0], Some(2.0));
        assert_eq!(a.median_kl[0], Some(2.0));
        assert_eq!(a.mean_entropy[0], 3.0);
        assert_eq!(a.median_entropy[0], 3.0);
    }

    #[test]
    fn three_case_fixture() {
        let cases = [
            case(0, &[1.0, 4.0], &[0.5, 1.0], &[2, 0], &[6, 2]),
            case(1, &[-2.0, 1.0], &[0.7, 1.6], &[5, 3], &[8, 3]),
            case(2, &[0.0, f64::NEG_INFINITY], &[0.3, 1.3], &[3, 9], &[7, 5]),
        ];
        let (a, cor, inf) = aggregate(&cases).unwrap();
        assert_eq!(a.mean_kl[0], Some(-1.0 / 3.0));
        assert_eq!(a.median_kl[0], Some(0.0));
        // step 2 excludes the infinite case: mean of (4, 1), lower median 1
        assert_eq!(a.mean_kl[1], Some(2.5));
        assert_eq!(a.median_kl[1], Some(1.0));
        assert_eq!(a.infinite_at_step, vec![0, 1]);
        assert!((a.mean_entropy[0] - 0.5).abs() < 1e-15);
        assert_eq!(a.median_entropy[1], 1.3);
        assert_eq!(a.mean_abs_map_error, vec![10.0 / 3.0, 4.0]);
        assert_eq!(a.mean_span30, vec![7.0, 10.0 / 3.0]);
        assert_eq!(inf, 1);
        // two finite points at step 2 give a perfect (negative) correlation
        assert!((cor.kl_map_error[1].unwrap() + 1.0).abs() < 1e-15);
        assert!(cor.entropy_map_error[0].is_some());
    }

    #[test]
    fn aggregate_errors() {
        assert_eq!(aggregate(&[]).unwrap_err(), Error::EmptyInput);
        let a = case(0, &[1.0], &[1.0], &[1], &[1]);
        let b = case(1, &[1.0, 2.0], &[1.0, 2.0], &[1, 1], &[1, 1]);
        assert!(matches!(
            aggregate(&[a, b]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
