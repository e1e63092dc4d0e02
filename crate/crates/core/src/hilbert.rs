//! Truncated multigraded Hilbert series.

use std::collections::BTreeMap;

use crate::bichar::IntVec;
use crate::cyclo::Order;
use crate::error::Result;
use crate::quotient::{degrees_up_to, QuotientView};
use crate::roots::RootSystemReport;

/// A power series in t_1..t_theta, kept up to total degree `max_total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub theta: usize,
    pub max_total: i64,
    pub coeffs: BTreeMap<IntVec, i128>,
}

impl Series {
    pub fn one(theta: usize, max_total: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(IntVec::zero(theta), 1);
        Self {
            theta,
            max_total,
            coeffs,
        }
    }

    pub fn coefficient(&self, d: &IntVec) -> i128 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let d = a + b;
                if d.total() <= self.max_total {
                    *out.entry(d).or_insert(0) += x * y;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Series {
            theta: self.theta,
            max_total: self.max_total,
            coeffs: out,
        }
    }

    /// 1 + t^beta + ... + t^((n-1) beta), or 1/(1 - t^beta) when `n` is `None`.
    pub fn root_factor(theta: usize, max_total: i64, beta: &IntVec, n: Option<u64>) -> Series {
        let mut coeffs = BTreeMap::new();
        let mut k = 0u64;
        loop {
            let d = beta.scale(k as i64);
            if d.total() > max_total || n.map(|n| k >= n).unwrap_or(false) {
                break;
            }
            coeffs.insert(d, 1);
            k += 1;
            if beta.total() == 0 {
                break;
            }
        }
        Series {
            theta,
            max_total,
            coeffs,
        }
    }

    /// Multidegrees where the two series differ, with both coefficients.
    pub fn diff(&self, other: &Series) -> Vec<(IntVec, i128, i128)> {
        degrees_up_to(self.theta, self.max_total.min(other.max_total))
            .into_iter()
            .filter_map(|d| {
                let (a, b) = (self.coefficient(&d), other.coefficient(&d));
                (a != b).then_some((d, a, b))
            })
            .collect()
    }
}

fn height_bound(h: Order) -> Option<u64> {
    h.finite()
}

/// Product over positive roots of (t^beta)_{N_beta}.
pub fn nichols_series(report: &RootSystemReport, max_total: i64) -> Series {
    let theta = report.theta();
    report
        .positive_roots
        .iter()
        .zip(&report.heights)
        .fold(Series::one(theta, max_total), |acc, (b, h)| {
            acc.mul(&Series::root_factor(theta, max_total, b, height_bound(*h)))
        })
}

/// Truncated factors at non-Cartan roots, geometric factors at Cartan roots.
pub fn pre_nichols_series(report: &RootSystemReport, max_total: i64) -> Series {
    let theta = report.theta();
    report
        .positive_roots
        .iter()
        .zip(&report.heights)
        .zip(&report.is_cartan)
        .fold(Series::one(theta, max_total), |acc, ((b, h), &cartan)| {
            let n = if cartan { None } else { height_bound(*h) };
            acc.mul(&Series::root_factor(theta, max_total, b, n))
        })
}

/// Dimensions of a quotient in every multidegree up to `max_total`.
pub fn quotient_series(q: &QuotientView, max_total: i64) -> Result<Series> {
    let theta = q.algebra().theta();
    let mut coeffs = BTreeMap::new();
    for d in degrees_up_to(theta, max_total) {
        let n = q.quotient_dim(&d)? as i128;
        if n != 0 {
            coeffs.insert(d, n);
        }
    }
    Ok(Series {
        theta,
        max_total,
        coeffs,
    })
}
