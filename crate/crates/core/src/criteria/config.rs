use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Exact;

/// Finite truncation of the limits and suprema in the criteria.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonConfig {
    /// Largest orbit step `n`.
    pub n_max: u64,
    /// Index window radius for `j`.
    pub w: i64,
    /// Ascending thresholds `M`.
    pub m_grid: Vec<Exact>,
    pub k_max: u32,
    pub l_max: u32,
}

impl Default for HorizonConfig {
    fn default() -> Self {
        HorizonConfig { n_max: 10_000, w: 1_000, m_grid: pow2_grid(20), k_max: 3, l_max: 8 }
    }
}

/// `{1, 2, 4, ..., 2^top}`.
pub fn pow2_grid(top: u32) -> Vec<Exact> {
    (0..=top as i64).map(Exact::pow2).collect()
}

impl HorizonConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(format!("horizon config: {m}")));
        if self.n_max < 1 {
            return bad("n_max must be >= 1");
        }
        if self.w < 1 {
            return bad("window radius must be >= 1");
        }
        if self.m_grid.is_empty() {
            return bad("threshold grid is empty");
        }
        if self.m_grid.windows(2).any(|p| p[0] >= p[1]) {
            return bad("threshold grid must be strictly increasing");
        }
        if !self.m_grid[0].is_positive() {
            return bad("thresholds must be positive");
        }
        if self.k_max < 1 || self.l_max < self.k_max {
            return bad("need l_max >= k_max >= 1");
        }
        Ok(())
    }

    /// Same config with `ℓ_max = k_max + 5`.
    pub fn with_k_max(mut self, k_max: u32) -> Self {
        self.k_max = k_max;
        self.l_max = k_max + 5;
        self
    }

    pub fn with_grid_top(mut self, top: u32) -> Self {
        self.m_grid = pow2_grid(top);
        self
    }

    /// `log2 M` for each threshold.
    pub fn grid_log2(&self) -> Vec<f64> {
        self.m_grid.iter().map(|m| m.to_log().log2()).collect()
    }
}
