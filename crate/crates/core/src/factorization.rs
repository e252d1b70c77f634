//! (Near-)1-factorizations of the complete graph on group indices.
//!
//! A 1-factorization of `K_m` (even `m`) splits all unordered pairs of
//! `0..m` into `m-1` perfect matchings; the near variant (odd `m`) uses
//! `m` matchings of `(m-1)/2` pairs, factor `i` missing exactly group
//! `i`. Pairs are *ordered* because the extension constructions care
//! which group of a pair plays the root side: by default the smaller
//! index comes first, and callers may demand that a given group comes
//! first within its pair in a given factor.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorizationError {
    #[error("a 1-factorization of K_{0} needs an even group count")]
    OddGroupCount(usize),
    #[error("a near 1-factorization of K_{0} needs an odd group count of at least 3")]
    EvenGroupCount(usize),
    #[error("factor {factor} has two orientation constraints")]
    ConflictingConstraints { factor: usize },
    #[error("orientation constraint out of range: factor {factor}, group {group}, m = {m}")]
    ConstraintOutOfRange { factor: usize, group: usize, m: usize },
    #[error("group {group} does not occur in factor {factor}")]
    GroupMissingFromFactor { factor: usize, group: usize },
}

/// Factors of ordered pairs over group indices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFactorization {
    pub factors: Vec<Vec<(usize, usize)>>,
    /// In the near case, `missing[i]` is the group absent from factor `i`
    /// (always equal to `i` for the rotational construction used here).
    pub missing: Option<Vec<usize>>,
}

impl PairFactorization {
    pub fn group_count(&self) -> usize {
        match &self.missing {
            Some(_) => self.factors.len(),
            None => self.factors.len() + 1,
        }
    }
}

/// A constraint `(factor, group)`: `group` must be the first element of
/// its ordered pair within `factor`. At most one constraint per factor.
pub type OrientationConstraint = (usize, usize);

/// Circle-method 1-factorization of `K_m` for even `m >= 2`.
///
/// Group `m-1` is the fixed pivot; in round `r` it pairs with `r`, and
/// the remaining groups pair up symmetrically around `r` modulo `m-1`.
pub fn one_factorization(
    m: usize,
    constraints: &[OrientationConstraint],
) -> Result<PairFactorization, FactorizationError> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(FactorizationError::OddGroupCount(m));
    }
    let rounds = m - 1;
    let mut factors = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let mut factor = vec![ordered(m - 1, r)];
        for k in 1..m / 2 {
            factor.push(ordered((r + k) % rounds, (r + rounds - k) % rounds));
        }
        factors.push(factor);
    }
    let mut fac = PairFactorization { factors, missing: None };
    apply_constraints(&mut fac, m, constraints)?;
    Ok(fac)
}

/// Rotational near 1-factorization of `K_m` for odd `m >= 3`:
/// factor `i` holds the pairs `{i+k, i-k}` (mod `m`) and misses group `i`.
pub fn near_one_factorization(
    m: usize,
    constraints: &[OrientationConstraint],
) -> Result<PairFactorization, FactorizationError> {
    if m < 3 || m % 2 != 1 {
        return Err(FactorizationError::EvenGroupCount(m));
    }
    let mut factors = Vec::with_capacity(m);
    for i in 0..m {
        let factor = (1..=(m - 1) / 2)
            .map(|k| ordered((i + k) % m, (i + m - k) % m))
            .collect();
        factors.push(factor);
    }
    let mut fac = PairFactorization { factors, missing: Some((0..m).collect()) };
    apply_constraints(&mut fac, m, constraints)?;
    Ok(fac)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

fn apply_constraints(
    fac: &mut PairFactorization,
    m: usize,
    constraints: &[OrientationConstraint],
) -> Result<(), FactorizationError> {
    let mut constrained = vec![false; fac.factors.len()];
    for &(factor, group) in constraints {
        if factor >= fac.factors.len() || group >= m {
            return Err(FactorizationError::ConstraintOutOfRange { factor, group, m });
        }
        if std::mem::replace(&mut constrained[factor], true) {
            return Err(FactorizationError::ConflictingConstraints { factor });
        }
        let pair = fac.factors[factor]
            .iter_mut()
            .find(|(a, b)| *a == group || *b == group)
            .ok_or(FactorizationError::GroupMissingFromFactor { factor, group })?;
        if pair.1 == group {
            *pair = (pair.1, pair.0);
        }
    }
    Ok(())
}
