//! Two-sided Welch's t-test with Welch-Satterthwaite degrees of freedom.

use serde::{Deserialize, Serialize};

use crate::distributions::student_t_cdf;
use crate::error::{Error, Result};
use crate::model::{Group, GroupedSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t_statistic: f64,
    pub df: f64,
    pub p_value: f64,
}

fn mean_and_unbiased_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, ss / (n - 1.0))
}

pub fn welch_t_test(sample: &GroupedSample) -> Result<WelchResult> {
    let g1 = sample.group_values(Group::One);
    let g2 = sample.group_values(Group::Two);
    if g1.len() < 2 || g2.len() < 2 {
        return Err(Error::InsufficientSize(format!(
            "Welch's test needs at least two observations per group, got {} and {}",
            g1.len(),
            g2.len()
        )));
    }
    let (m1, v1) = mean_and_unbiased_var(&g1);
    let (m2, v2) = mean_and_unbiased_var(&g2);
    if v1 == 0.0 && v2 == 0.0 {
        return Err(Error::DegenerateData("both groups have zero variance".into()));
    }
    let (n1, n2) = (g1.len() as f64, g2.len() as f64);
    let (a, b) = (v1 / n1, v2 / n2);
    let t = (m1 - m2) / (a + b).sqrt();
    let df = (a + b).powi(2) / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
    let p = (2.0 * student_t_cdf(-t.abs(), df)?).min(1.0);
    Ok(WelchResult {
        t_statistic: t,
        df,
        p_value: p,
    })
}
