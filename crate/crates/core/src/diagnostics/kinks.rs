use crate::grids::ScalarField;
use serde::{Deserialize, Serialize};

/// Half-width of the hysteresis band around the census level.
pub const HYSTERESIS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinkCensus {
    pub count: usize,
    pub positions: Vec<f64>,
}

/// Transversal crossings of u − level along the first axis of a 1D field.
pub fn kink_census(u: &ScalarField, level: f64) -> KinkCensus {
    let x = u.domain.axes[0].coords();
    let v = &u.values;
    let mut side: Option<bool> = None;
    let mut last_change: Option<usize> = None;
    let mut positions = Vec::new();
    for i in 0..v.len() {
        if i > 0 && (v[i - 1] - level).signum() != (v[i] - level).signum() {
            last_change = Some(i - 1);
        }
        let now = if v[i] > level + HYSTERESIS {
            Some(true)
        } else if v[i] < level - HYSTERESIS {
            Some(false)
        } else {
            None
        };
        if let Some(s) = now {
            if side.is_some_and(|p| p != s) {
                let j = last_change.unwrap_or(i - 1);
                let (a, b) = (v[j] - level, v[j + 1] - level);
                let t = if b != a { a / (a - b) } else { 0.5 };
                positions.push(x[j] + t * (x[j + 1] - x[j]));
            }
            side = Some(s);
        }
    }
    KinkCensus {
        count: positions.len(),
        positions,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annihilation {
    pub t: f64,
    /// positions of the vanished kinks at the previous census
    pub removed: Vec<f64>,
}

/// Sequence of censuses; decrements of the count are annihilation events.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KinkTracker {
    pub times: Vec<f64>,
    pub counts: Vec<usize>,
    pub events: Vec<Annihilation>,
    last: Option<KinkCensus>,
}

impl KinkTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, census: KinkCensus) {
        if let Some(prev) = &self.last {
            if census.count < prev.count {
                let mut removed: Vec<(f64, f64)> = prev
                    .positions
                    .iter()
                    .map(|p| {
                        (
                            census
                                .positions
                                .iter()
                                .map(|q| (q - p).abs())
                                .fold(f64::INFINITY, f64::min),
                            *p,
                        )
                    })
                    .collect();
                removed.sort_by(|a, b| b.0.total_cmp(&a.0));
                let lost = prev.count - census.count;
                let mut gone: Vec<f64> = removed.iter().take(lost).map(|r| r.1).collect();
                gone.sort_by(f64::total_cmp);
                for pair in gone.chunks(2) {
                    self.events.push(Annihilation {
                        t,
                        removed: pair.to_vec(),
                    });
                }
            }
        }
        self.times.push(t);
        self.counts.push(census.count);
        self.last = Some(census);
    }

    /// Number of annihilation events with time ≤ t.
    pub fn cumulative(&self, t: f64) -> usize {
        self.events.iter().filter(|e| e.t <= t).count()
    }

    /// Smallest C with N(T) ≤ C√T for all recorded T in (0, fit_horizon].
    pub fn fit_sqrt_constant(&self, fit_horizon: f64) -> f64 {
        self.times
            .iter()
            .filter(|t| **t > 0.0 && **t <= fit_horizon)
            .map(|&t| self.cumulative(t) as f64 / t.sqrt())
            .fold(0.0, f64::max)
    }

    /// Recorded times in [from, to] where N(T) > C√T.
    pub fn sqrt_violations(&self, c: f64, from: f64, to: f64) -> Vec<f64> {
        self.times
            .iter()
            .copied()
            .filter(|t| *t >= from && *t <= to && self.cumulative(*t) as f64 > c * t.sqrt())
            .collect()
    }
}
