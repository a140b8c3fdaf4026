//! Regions of practical equivalence: labeled partitions of the effect-size
//! line and finite unions of intervals used as decision regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RopeCell {
    pub label: String,
    pub lower: f64,
    pub upper: f64,
}

/// Ordered half-open cells `[lower, upper)` covering the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RopePartition {
    cells: Vec<RopeCell>,
}

impl RopePartition {
    pub fn new(cells: Vec<RopeCell>) -> Result<Self> {
        let (first, last) = match (cells.first(), cells.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InvalidPartition("no cells".into())),
        };
        if first.lower != f64::NEG_INFINITY || last.upper != f64::INFINITY {
            return Err(Error::InvalidPartition(
                "cells must start at -inf and end at +inf".into(),
            ));
        }
        for c in &cells {
            if !(c.lower < c.upper) {
                return Err(Error::InvalidPartition(format!(
                    "cell `{}` is empty: [{}, {})",
                    c.label, c.lower, c.upper
                )));
            }
        }
        for pair in cells.windows(2) {
            if pair[0].upper != pair[1].lower {
                return Err(Error::InvalidPartition(format!(
                    "cells `{}` and `{}` are not adjacent",
                    pair[0].label, pair[1].label
                )));
            }
        }
        Ok(Self { cells })
    }

    /// Builds a partition from interior boundaries `b_1 < ... < b_{m-1}` and
    /// `m` labels.
    pub fn from_boundaries(boundaries: &[f64], labels: &[&str]) -> Result<Self> {
        if labels.len() != boundaries.len() + 1 {
            return Err(Error::InvalidPartition(format!(
                "{} boundaries need {} labels, got {}",
                boundaries.len(),
                boundaries.len() + 1,
                labels.len()
            )));
        }
        let edges: Vec<f64> = std::iter::once(f64::NEG_INFINITY)
            .chain(boundaries.iter().copied())
            .chain(std::iter::once(f64::INFINITY))
            .collect();
        let cells = edges
            .windows(2)
            .zip(labels)
            .map(|(w, l)| RopeCell {
                label: (*l).to_string(),
                lower: w[0],
                upper: w[1],
            })
            .collect();
        Self::new(cells)
    }

    pub fn cells(&self) -> &[RopeCell] {
        &self.cells
    }

    /// Index of the cell containing `x`.
    pub fn locate(&self, x: f64) -> usize {
        // upper bounds are strictly increasing, the last is +inf
        self.cells.partition_point(|c| c.upper <= x).min(self.cells.len() - 1)
    }

    pub fn label_of(&self, x: f64) -> &str {
        &self.cells[self.locate(x)].label
    }

    /// Interior boundaries, in increasing order.
    pub fn boundaries(&self) -> Vec<f64> {
        self.cells[1..].iter().map(|c| c.lower).collect()
    }
}

/// Cohen's conventional effect-size categories.
pub fn cohen_partition() -> RopePartition {
    RopePartition::from_boundaries(
        &[-0.8, -0.5, -0.2, 0.2, 0.5, 0.8],
        &[
            "large-negative",
            "medium-negative",
            "small-negative",
            "none",
            "small",
            "medium",
            "large",
        ],
    )
    .expect("static partition is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidInterval(format!("[{lower}, {upper}]")));
        }
        Ok(Self {
            lower,
            upper,
            lower_closed: lower_closed && lower.is_finite(),
            upper_closed: upper_closed && upper.is_finite(),
        })
    }

    pub fn open(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, false, false)
    }

    pub fn closed(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, true, true)
    }

    /// `[lower, upper)`
    pub fn half_open(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, true, false)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_closed { x >= self.lower } else { x > self.lower };
        let below = if self.upper_closed { x <= self.upper } else { x < self.upper };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lower > self.upper
            || (self.lower == self.upper && !(self.lower_closed && self.upper_closed))
    }

    /// Whether the closed interval `[a, b]` meets this one.
    fn meets_closed(&self, a: f64, b: f64) -> bool {
        let left = if self.upper_closed { a <= self.upper } else { a < self.upper };
        let right = if self.lower_closed { b >= self.lower } else { b > self.lower };
        left && right
    }
}

/// A finite union of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Self {
        Self { intervals }
    }

    pub fn single(interval: Interval) -> Self {
        Self::new(vec![interval])
    }

    /// The conventional null region `(-0.2, 0.2)`.
    pub fn null_rope() -> Self {
        Self::single(Interval::open(-0.2, 0.2).expect("valid"))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// Connected components of the union, sorted by lower bound.
    fn merged(&self) -> Vec<Interval> {
        let mut parts: Vec<Interval> = self.intervals.iter().copied().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| {
            a.lower
                .total_cmp(&b.lower)
                .then_with(|| b.lower_closed.cmp(&a.lower_closed))
        });
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = out.last_mut() {
                let joins = p.lower < last.upper
                    || (p.lower == last.upper && (last.upper_closed || p.lower_closed));
                if joins {
                    if p.upper > last.upper {
                        last.upper = p.upper;
                        last.upper_closed = p.upper_closed;
                    } else if p.upper == last.upper {
                        last.upper_closed |= p.upper_closed;
                    }
                    continue;
                }
            }
            out.push(p);
        }
        out
    }

    /// Whether `[a, b]` lies inside the union.
    pub fn contains_closed(&self, a: f64, b: f64) -> bool {
        self.merged().iter().any(|i| i.contains(a) && i.contains(b))
    }

    /// Whether `[a, b]` meets the union.
    pub fn meets_closed(&self, a: f64, b: f64) -> bool {
        self.intervals.iter().any(|i| !i.is_empty() && i.meets_closed(a, b))
    }

    /// Mirror image `{-x : x in self}`.
    pub fn negated(&self) -> Self {
        Self::new(
            self.intervals
                .iter()
                .map(|i| Interval {
                    lower: -i.upper,
                    upper: -i.lower,
                    lower_closed: i.upper_closed,
                    upper_closed: i.lower_closed,
                })
                .collect(),
        )
    }
}
