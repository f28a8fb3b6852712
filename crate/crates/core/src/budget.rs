//! Memory budget shared by every enumeration that can blow up.

use crate::error::{Error, Result};

/// Environment variable holding the budget in MiB.
pub const MEM_ENV: &str = "HORODYN_MEM_MIB";
const DEFAULT_MIB: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemBudget {
    mib: u64,
}

impl MemBudget {
    pub fn new(mib: u64) -> Self {
        MemBudget { mib }
    }

    /// Reads `HORODYN_MEM_MIB`, falling back to 4 GiB.
    pub fn from_env() -> Self {
        let mib = std::env::var(MEM_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MIB);
        MemBudget { mib }
    }

    pub fn mib(&self) -> u64 {
        self.mib
    }

    pub fn bytes(&self) -> u128 {
        self.mib as u128 * 1024 * 1024
    }

    pub fn check(&self, bytes: u128, stage: impl FnOnce() -> String) -> Result<()> {
        if bytes > self.bytes() {
            Err(Error::Resource {
                budget_mib: self.mib,
                stage: stage(),
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemBudget {
    fn default() -> Self {
        MemBudget::from_env()
    }
}
