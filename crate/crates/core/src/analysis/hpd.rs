use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpdInterval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

impl HpdInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Number of draws `ceil(level * m)` a level-`level` window must hold.
/// Products that miss an integer only by rounding (e.g. `0.95 * 100`) are
/// not bumped up.
pub fn window_len(level: f64, m: usize) -> usize {
    let x = level * m as f64;
    ((x * (1.0 - 1e-12)).ceil() as usize).clamp(1, m)
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLevel(level))
    }
}

/// Shortest interval spanning `ceil(level * m)` consecutive sorted draws.
/// Ties go to the window with the smallest lower bound.
pub fn hpd_from_sorted(sorted: &[f64], level: f64) -> Result<HpdInterval> {
    check_level(level)?;
    let m = sorted.len();
    if m == 0 {
        return Err(Error::InsufficientSize("HPD interval needs at least one draw".into()));
    }
    let w = window_len(level, m);
    let mut best = 0;
    let mut best_width = f64::INFINITY;
    for j in 0..=(m - w) {
        let width = sorted[j + w - 1] - sorted[j];
        if width < best_width {
            best_width = width;
            best = j;
        }
    }
    Ok(HpdInterval {
        level,
        lower: sorted[best],
        upper: sorted[best + w - 1],
    })
}
