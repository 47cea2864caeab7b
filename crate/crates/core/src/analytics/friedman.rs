use alloc::vec;
use alloc::vec::Vec;

use super::dist::chi_squared_sf;
use super::AnalyticsError;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FriedmanResult {
    pub chi2: f64,
    pub dof: usize,
    pub p: f64,
    pub subjects: usize,
}

/// Ranks from 1, ties sharing their mean rank. Also returns Σ(t³ − t)
/// over tie groups.
pub fn mid_ranks(row: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && row[order[j]] == row[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Friedman rank test over `rows` (subjects) × columns (conditions).
///
/// Ties within a row get mid-ranks and the statistic is divided by the usual
/// tie correction. A matrix whose rows are all constant carries no ranking
/// information and yields χ² = 0, p = 1.
pub fn friedman<R: AsRef<[f64]>>(rows: &[R]) -> Result<FriedmanResult, AnalyticsError> {
    let n = rows.len();
    if n < 2 {
        return Err(AnalyticsError::TooFewSubjects(n));
    }
    let k = rows[0].as_ref().len();
    if k < 2 {
        return Err(AnalyticsError::TooFewConditions(k));
    }
    let mut rank_sums = vec![0.0; k];
    let mut ties = 0.0;
    for row in rows {
        let row = row.as_ref();
        if row.len() != k {
            return Err(AnalyticsError::RaggedMatrix);
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(AnalyticsError::NonFinite);
        }
        let (ranks, t) = mid_ranks(row);
        for (s, r) in rank_sums.iter_mut().zip(ranks) {
            *s += r;
        }
        ties += t;
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = rank_sums.iter().map(|r| r * r).sum();
    let raw = 12.0 / (nf * kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0);
    let correction = 1.0 - ties / (nf * kf * (kf * kf - 1.0));
    let chi2 = if correction <= 1e-12 { 0.0 } else { (raw / correction).max(0.0) };
    let dof = k - 1;
    Ok(FriedmanResult { chi2, dof, p: chi_squared_sf(chi2, dof as f64), subjects: n })
}
