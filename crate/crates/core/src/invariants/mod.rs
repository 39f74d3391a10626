//! ν-invariants, the ν-tree, certified Bernstein–Sato roots, test ideals and
//! F-jumping exponents.

mod nu;
mod tau;

pub use nu::{
    bound_assumption_probe, bsr_roots, certified_values, dside_bsr_check, nu_scan, nu_set, nu_tree, BsrCertificate,
    CertificateStatus, DsideReport, NuBranch, NuLevelSet, NuTree, ProbeReport,
};
pub use tau::{
    bsr_fjn_crosscheck, fjn_exponents, psi_minus, psi_plus, test_ideal, zero_root_test, CrosscheckReport,
    FjnExponent, FjnReport, Side, TestIdealRecord,
};

use num_rational::Ratio;
use serde::Serializer;

use crate::error::{Error, Result};

/// Exact nonnegative rationals such as exponents t = n/q^m.
pub type Rational = Ratio<i128>;

/// Parses "a" or "a/b".
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("`{text}` is not a rational literal"));
    let (n, d) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: i128 = n.parse().map_err(|_| bad())?;
    let d: i128 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(Error::ZeroDivisorInput("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

pub(crate) fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The base-q digits of n, least significant first, padded to `len`.
pub(crate) fn padded_digits(n: u64, q: u64, len: usize) -> Vec<u64> {
    let mut d = crate::padic::base_digits(n as u128, q);
    d.resize(len, 0);
    d
}
