use std::collections::HashSet;
use std::sync::Arc;

use super::field::{is_prime, PrimeField};
use crate::error::{Error, Result};

/// The polynomial ring F_p[x_1, ..., x_n] of one affine chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingConfig {
    field: PrimeField,
    var_names: Vec<String>,
}

/// Shared handle to a ring; polynomials and ideals hold one of these.
pub type Ring = Arc<RingConfig>;

impl RingConfig {
    /// Validates `p` (prime, below 2^31) and the variable names.
    pub fn new<S: AsRef<str>>(p: u64, var_names: &[S]) -> Result<Ring> {
        if p >= 1 << 31 {
            return Err(Error::InvalidRing(format!("modulus {p} must be below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if var_names.is_empty() {
            return Err(Error::InvalidRing("at least one variable is required".into()));
        }
        let mut seen = HashSet::new();
        let mut names = Vec::with_capacity(var_names.len());
        for name in var_names {
            let name = name.as_ref();
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidRing(format!("invalid variable name `{name}`")));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
            names.push(name.to_string());
        }
        Ok(Arc::new(RingConfig { field: PrimeField::new_unchecked(p as u32), var_names: names }))
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Returns `e` with `q = p^e`, or `InvalidQ`.
    pub fn power_exponent(&self, q: u64) -> Result<u32> {
        let p = self.p() as u64;
        let mut e = 0;
        let mut v = q;
        if v < p {
            return Err(Error::InvalidQ { q, p: self.p() });
        }
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if v == 1 {
            Ok(e)
        } else {
            Err(Error::InvalidQ { q, p: self.p() })
        }
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
