use crate::error::{Error, Result};

pub const DEFAULT_EXP_CAP: u64 = 1 << 20;
pub const DEFAULT_ITER_CAP: usize = 64;

/// Resource caps shared by every iterative computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest modulus q^m a root extraction may use.
    pub exp_cap: u64,
    /// Largest number of steps any stabilization loop may take.
    pub iter_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { exp_cap: DEFAULT_EXP_CAP, iter_cap: DEFAULT_ITER_CAP }
    }
}

impl Limits {
    /// Defaults overridden by `FCART_EXP_CAP` / `FCART_ITER_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var("FCART_EXP_CAP") {
            limits.exp_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("FCART_EXP_CAP=`{v}` is not an integer")))?;
        }
        if let Ok(v) = std::env::var("FCART_ITER_CAP") {
            limits.iter_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("FCART_ITER_CAP=`{v}` is not an integer")))?;
        }
        Ok(limits)
    }

    /// `base^exp` if it stays within the exponent cap.
    pub fn checked_power(&self, base: u64, exp: u32) -> Result<u64> {
        let v = (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
        if v > self.exp_cap as u128 {
            return Err(Error::ExponentCapExceeded { requested: v, cap: self.exp_cap });
        }
        Ok(v as u64)
    }
}
