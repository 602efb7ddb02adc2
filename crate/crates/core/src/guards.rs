//! Size guards for the exhaustive sweeps.

use crate::error::{Error, Result};
use crate::field::{Prime, DEFAULT_MAX_P};

/// Environment variable that overrides every p-ceiling below. At your own risk.
pub const MAX_P_ENV: &str = "ORBIFOLD_MAX_P";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Largest prime accepted anywhere.
    pub max_p: u32,
    /// Largest p for sweeps over all of F_pG (p^p elements).
    pub kernel_max_p: u32,
    /// Largest p for sweeps over all pairs (a, b) (p^(2p) pairs).
    pub pair_max_p: u32,
    /// Largest homological degree for chain-map verification.
    pub chain_max_degree: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_p: DEFAULT_MAX_P,
            kernel_max_p: 7,
            pair_max_p: 5,
            chain_max_degree: 6,
        }
    }
}

impl Guards {
    /// Defaults, with every p-ceiling replaced by `ORBIFOLD_MAX_P` when set.
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        if let Some(v) = std::env::var(MAX_P_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
        {
            g.max_p = v;
            g.kernel_max_p = v;
            g.pair_max_p = v;
        }
        g
    }

    pub fn prime(&self, p: u32) -> Result<Prime> {
        Prime::with_ceiling(p, self.max_p)
    }

    pub fn kernel(&self, p: Prime, what: &'static str) -> Result<()> {
        limit(p, self.kernel_max_p, what)
    }

    pub fn pairs(&self, p: Prime, what: &'static str) -> Result<()> {
        limit(p, self.pair_max_p, what)
    }

    pub fn chain_degree(&self, n: usize) -> Result<()> {
        if n > self.chain_max_degree {
            return Err(Error::DegreeBound {
                got: n,
                min: 0,
                max: self.chain_max_degree,
            });
        }
        Ok(())
    }
}

fn limit(p: Prime, limit: u32, what: &'static str) -> Result<()> {
    if p.get() > limit {
        return Err(Error::TooLarge {
            what,
            p: p.get(),
            limit,
        });
    }
    Ok(())
}
