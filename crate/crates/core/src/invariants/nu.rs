use rayon::prelude::*;
use serde::Serialize;

use super::padded_digits;
use crate::algebra::{Ideal, Polynomial};
use crate::cartier::{cartier_power_image, extract_generators, CartierStructure};
use crate::error::{Error, Result};
use crate::padic::{detect_periodic, digits, from_periodic_digits, DigitBlock, PadicRational};

/// ν(q^m) ∩ [0, q^m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuLevelSet {
    pub level: u32,
    pub modulus: u64,
    pub members: Vec<u64>,
}

impl NuLevelSet {
    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

fn check_inputs(s: &CartierStructure, n: &Ideal, f: &Polynomial) -> Result<()> {
    if **n.ring() != **s.ring() || **f.ring() != **s.ring() {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroDivisorInput("f = 0".into()));
    }
    if n.is_zero() {
        return Err(Error::ZeroDivisorInput("the module N is zero".into()));
    }
    Ok(())
}

/// The generator lists f^k N for k = 0..count, each multiplied by `twist`.
fn power_layers(n: &Ideal, f: &Polynomial, twist: &Polynomial, count: usize) -> Vec<Vec<Polynomial>> {
    let mut layers = Vec::with_capacity(count);
    let mut current: Vec<Polynomial> = n.compact_generators().iter().map(|g| g.mul(twist)).collect();
    for k in 0..count {
        if k + 1 < count {
            let next = current.iter().map(|g| g.mul(f)).collect();
            layers.push(std::mem::replace(&mut current, next));
        } else {
            layers.push(std::mem::take(&mut current));
        }
    }
    layers
}

/// Indices n < bound with images[n] != images[n + 1].
fn jumps(images: &[Ideal], bound: usize) -> Result<Vec<u64>> {
    let flags: Vec<bool> = (0..bound)
        .into_par_iter()
        .map(|k| images[k].equals(&images[k + 1]).map(|eq| !eq))
        .collect::<Result<_>>()?;
    Ok(flags.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k as u64).collect())
}

/// Members n < bound of the jump set of n ↦ C^m(f^n N), scanning past q^m if asked.
pub fn nu_scan(s: &CartierStructure, n: &Ideal, f: &Polynomial, m: u32, bound: u64) -> Result<Vec<u64>> {
    check_inputs(s, n, f)?;
    if m == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let qm = s.q_power(m)?;
    s.limits().checked_power(bound.max(1), 1)?;
    let layers = power_layers(n, f, &s.accumulated_twist(m)?, bound as usize + 1);
    let images: Vec<Ideal> = layers
        .par_iter()
        .map(|gens| extract_generators(n.ring(), n.order(), gens, &Polynomial::one(n.ring()), qm))
        .collect::<Result<_>>()?;
    jumps(&images, bound as usize)
}

/// ν(q^m; N) ∩ [0, q^m).
pub fn nu_set(s: &CartierStructure, n: &Ideal, f: &Polynomial, m: u32) -> Result<NuLevelSet> {
    let modulus = s.q_power(m)?;
    let members = nu_scan(s, n, f, m, modulus)?;
    Ok(NuLevelSet { level: m, modulus, members })
}

/// A maximal root-to-leaf path of the ν-tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuBranch {
    /// Base-q digits of the leaf, least significant first; one digit per level.
    pub digits: Vec<u64>,
    pub leaf: u64,
    pub leaf_level: u32,
    /// The branch stops before the deepest computed level.
    pub dead: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuTree {
    pub q: u64,
    pub max_level: u32,
    pub levels: Vec<NuLevelSet>,
    pub branches: Vec<NuBranch>,
}

impl NuTree {
    pub fn level(&self, m: u32) -> Option<&NuLevelSet> {
        self.levels.get(m.checked_sub(1)? as usize)
    }

    /// Members at level m + 1 that truncate to n.
    pub fn children(&self, m: u32, n: u64) -> Vec<u64> {
        let Some(next) = self.level(m + 1) else { return Vec::new() };
        let modulus = next.modulus / self.q;
        next.members.iter().copied().filter(|&c| c % modulus == n).collect()
    }
}

/// All levels 1..=max_level linked by truncation.
pub fn nu_tree(s: &CartierStructure, n: &Ideal, f: &Polynomial, max_level: u32) -> Result<NuTree> {
    if max_level == 0 {
        return Err(Error::InvalidArgument("max_level must be at least 1".into()));
    }
    let q = s.q();
    let levels = (1..=max_level).map(|m| nu_set(s, n, f, m)).collect::<Result<Vec<_>>>()?;
    for pair in levels.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        if let Some(bad) = upper.members.iter().find(|&&c| !lower.contains(c % lower.modulus)) {
            return Err(Error::InternalMismatch(format!(
                "level {} member {bad} truncates outside level {}",
                upper.level, lower.level
            )));
        }
    }
    let mut tree = NuTree { q, max_level, levels, branches: Vec::new() };
    let mut branches = Vec::new();
    for set in &tree.levels {
        for &leaf in &set.members {
            if set.level == max_level || tree.children(set.level, leaf).is_empty() {
                branches.push(NuBranch {
                    digits: padded_digits(leaf, q, set.level as usize),
                    leaf,
                    leaf_level: set.level,
                    dead: set.level < max_level,
                });
            }
        }
    }
    branches.sort_by(|a, b| a.digits.cmp(&b.digits));
    tree.branches = branches;
    Ok(tree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateStatus {
    CertifiedRational { value: PadicRational, block: DigitBlock, verified_levels: Vec<u32> },
    UncertifiedPrefix,
}

/// One ν-tree branch read as a p-adic Bernstein–Sato root candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BsrCertificate {
    pub digit_prefix: Vec<u64>,
    pub dead: bool,
    pub max_level: u32,
    #[serde(flatten)]
    pub status: CertificateStatus,
}

impl BsrCertificate {
    pub fn value(&self) -> Option<PadicRational> {
        match &self.status {
            CertificateStatus::CertifiedRational { value, .. } => Some(*value),
            CertificateStatus::UncertifiedPrefix => None,
        }
    }
}

fn certify(tree: &NuTree, branch: &NuBranch, p: u32) -> CertificateStatus {
    let Some(block) = detect_periodic(&branch.digits) else {
        return CertificateStatus::UncertifiedPrefix;
    };
    // Beyond two full periods, the repeated run must be as long again as the
    // preperiod; a short tail after a long prefix is usually a dying branch.
    let (s, k) = (block.preperiod.len(), block.period.len());
    if branch.digits.len() < 2 * (s + k) {
        return CertificateStatus::UncertifiedPrefix;
    }
    let Ok(value) = from_periodic_digits(&block, tree.q, p) else {
        return CertificateStatus::UncertifiedPrefix;
    };
    let all_levels = tree.levels.iter().all(|set| {
        digits(&value, set.level, tree.q).is_ok_and(|d| set.contains(d as u64))
    });
    if all_levels {
        CertificateStatus::CertifiedRational {
            value,
            block,
            verified_levels: tree.levels.iter().map(|s| s.level).collect(),
        }
    } else {
        CertificateStatus::UncertifiedPrefix
    }
}

/// One certificate per ν-tree branch, in lexicographic digit order.
pub fn bsr_roots(s: &CartierStructure, n: &Ideal, f: &Polynomial, max_level: u32) -> Result<Vec<BsrCertificate>> {
    let tree = nu_tree(s, n, f, max_level)?;
    Ok(certificates(&tree, s.ring().p()))
}

pub(crate) fn certificates(tree: &NuTree, p: u32) -> Vec<BsrCertificate> {
    tree.branches
        .iter()
        .map(|b| BsrCertificate {
            digit_prefix: b.digits.clone(),
            dead: b.dead,
            max_level: tree.max_level,
            status: certify(tree, b, p),
        })
        .collect()
}

/// Distinct certified values, in certificate order.
pub fn certified_values(certs: &[BsrCertificate]) -> Vec<PadicRational> {
    let mut out: Vec<PadicRational> = Vec::new();
    for v in certs.iter().filter_map(|c| c.value()) {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DsideReport {
    pub level: u32,
    pub agree: bool,
    pub nu_members: Vec<u64>,
    pub dside_members: Vec<u64>,
}

/// Compares ν(q^m) with the jumps of the bracket powers C^m(f^n N)^[q^m],
/// computed by iterating the single-step operator.
pub fn dside_bsr_check(s: &CartierStructure, n: &Ideal, f: &Polynomial, m: u32) -> Result<DsideReport> {
    let nu = nu_set(s, n, f, m)?;
    let qm = nu.modulus;
    let layers = power_layers(n, f, &Polynomial::one(n.ring()), qm as usize + 1);
    let images: Vec<Ideal> = layers
        .into_par_iter()
        .map(|gens| {
            let j = Ideal::with_order(n.ring(), gens, n.order())?;
            cartier_power_image(s, &j, m)?.frobenius_power(qm)
        })
        .collect::<Result<_>>()?;
    let dside_members = jumps(&images, qm as usize)?;
    Ok(DsideReport { level: m, agree: dside_members == nu.members, nu_members: nu.members, dside_members })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub counts: Vec<usize>,
    pub max: usize,
    /// The maximum was already reached before the deepest level.
    pub level_stable: bool,
}

/// #(ν(q^m) ∩ [0, q^m)) for m = 1..=max_level.
pub fn bound_assumption_probe(s: &CartierStructure, n: &Ideal, f: &Polynomial, max_level: u32) -> Result<ProbeReport> {
    let tree = nu_tree(s, n, f, max_level)?;
    Ok(probe_from_tree(&tree))
}

pub(crate) fn probe_from_tree(tree: &NuTree) -> ProbeReport {
    let counts: Vec<usize> = tree.levels.iter().map(|l| l.members.len()).collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let earlier = counts[..counts.len().saturating_sub(1)].iter().copied().max();
    let level_stable = earlier.is_none_or(|e| e == max);
    ProbeReport { counts, max, level_stable }
}
