use std::collections::BTreeMap;

use crate::poly::{Monomial, PolyError};

use super::{GroebnerBasis, GroebnerError};

/// Standard monomials of a quotient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientBasis {
    /// The staircase is finite: every variable has a pure power among the
    /// leading monomials. Monomials are listed in increasing order.
    Finite(Vec<Monomial>),
    /// Standard monomials of weighted degree at most `bound`.
    TruncatedAt { bound: u64, counts: BTreeMap<u64, usize>, monomials: Vec<Monomial> },
}

impl QuotientBasis {
    pub fn monomials(&self) -> &[Monomial] {
        match self {
            QuotientBasis::Finite(m) => m,
            QuotientBasis::TruncatedAt { monomials, .. } => monomials,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, QuotientBasis::Finite(_))
    }
}

/// GF(2)-dimension of a quotient ring, or per-degree counts below a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Truncated { bound: u64, counts: BTreeMap<u64, usize> },
}

impl Rank {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Rank::Finite(n) => Some(*n),
            Rank::Truncated { .. } => None,
        }
    }
}

/// Exponent caps when every variable has a pure-power leading monomial.
fn staircase_caps(gb: &GroebnerBasis) -> Option<Vec<u32>> {
    let n = gb.context().nvars();
    let mut caps: Vec<Option<u32>> = vec![None; n];
    for lm in gb.leading_monomials() {
        if lm.is_one() {
            return Some(vec![0; n]);
        }
        if let Some((i, e)) = lm.pure_power() {
            caps[i] = Some(caps[i].map_or(e, |c| c.min(e)));
        }
    }
    caps.into_iter().collect()
}

pub fn quotient_basis(gb: &GroebnerBasis, bound: Option<u64>) -> Result<QuotientBasis, GroebnerError> {
    let ctx = gb.context();
    let lms = gb.leading_monomials();
    let n = ctx.nvars();

    if gb.truncated_at().is_none() {
        if let Some(caps) = staircase_caps(gb) {
            let mut out = Vec::new();
            if !caps.contains(&0) {
                let mut exps = vec![0u32; n];
                walk(&lms, &Limit::Caps(&caps), &mut exps, 0, 0, &mut out);
            }
            out.sort_by(|a, b| ctx.cmp_monomials(a, b));
            return Ok(QuotientBasis::Finite(out));
        }
    }

    let bound = bound.ok_or(GroebnerError::BoundRequired)?;
    if let Some(t) = gb.truncated_at() {
        if bound > t {
            return Err(GroebnerError::BoundBeyondTruncation { bound, truncated_at: t });
        }
    }
    if let Some(v) = ctx.vars().iter().find(|v| v.degree == 0) {
        return Err(PolyError::InvalidContext(format!(
            "variable `{}` has degree 0; truncated enumeration needs positive degrees",
            v.name
        ))
        .into());
    }
    let mut out = Vec::new();
    if !lms.iter().any(|m| m.is_one()) {
        let degs: Vec<u64> = ctx.vars().iter().map(|v| u64::from(v.degree)).collect();
        let mut exps = vec![0u32; n];
        walk(&lms, &Limit::Degree { weights: &degs, bound }, &mut exps, 0, 0, &mut out);
    }
    out.sort_by(|a, b| ctx.cmp_monomials(a, b));
    let mut counts = BTreeMap::new();
    for m in &out {
        *counts.entry(ctx.degree_of(m)).or_insert(0) += 1;
    }
    Ok(QuotientBasis::TruncatedAt { bound, counts, monomials: out })
}

/// Limits on the standard-monomial walk: per-variable exponent caps for a
/// finite staircase, or a weighted degree bound.
enum Limit<'a> {
    Caps(&'a [u32]),
    Degree { weights: &'a [u64], bound: u64 },
}

/// Depth-first enumeration of standard monomials. Raising an exponent only
/// makes a monomial more divisible, so each inner loop stops at the first
/// divisible exponent.
fn walk(lms: &[Monomial], limit: &Limit<'_>, exps: &mut Vec<u32>, var: usize, used: u64, out: &mut Vec<Monomial>) {
    if var == exps.len() {
        out.push(Monomial::from(exps.clone()));
        return;
    }
    let mut e = 0u32;
    loop {
        let spent = match limit {
            Limit::Caps(caps) => {
                if e >= caps[var] {
                    break;
                }
                0
            }
            Limit::Degree { weights, bound } => {
                let spent = used + weights[var] * u64::from(e);
                if spent > *bound {
                    break;
                }
                spent
            }
        };
        exps[var] = e;
        let m = Monomial::from(exps.clone());
        if lms.iter().any(|lm| lm.divides(&m)) {
            break;
        }
        walk(lms, limit, exps, var + 1, spent, out);
        e += 1;
    }
    exps[var] = 0;
}

pub fn rank(gb: &GroebnerBasis, bound: Option<u64>) -> Result<Rank, GroebnerError> {
    Ok(match quotient_basis(gb, bound)? {
        QuotientBasis::Finite(m) => Rank::Finite(m.len()),
        QuotientBasis::TruncatedAt { bound, counts, .. } => Rank::Truncated { bound, counts },
    })
}
