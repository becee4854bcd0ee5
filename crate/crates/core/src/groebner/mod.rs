//! Buchberger completion over GF(2), normal forms, standard-monomial
//! enumeration and elimination-based kernel computations.

mod kernel;
mod quotient;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::poly::{Monomial, Poly, PolyError, RingContext};

pub use kernel::{kernel_of_map, KernelPresentation, SubringEliminator};
pub use quotient::{quotient_basis, rank, QuotientBasis, Rank};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("ideal has no generators")]
    EmptyIdeal,
    #[error("generators or operands live in different ring contexts")]
    ContextMismatch,
    #[error("ideal generators must be nonzero")]
    ZeroGenerator,
    #[error("budget exceeded: more than {limit} {resource}")]
    BudgetExceeded { resource: &'static str, limit: usize },
    #[error("the staircase is infinite; a degree bound is required")]
    BoundRequired,
    #[error("degree bound {bound} exceeds the truncation degree {truncated_at} of the basis")]
    BoundBeyondTruncation { bound: u64, truncated_at: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Resource limits for [`buchberger`].
///
/// `degree_bound` switches on truncated completion: pairs whose lcm has weighted
/// degree above the bound are dropped and the resulting basis is only valid
/// below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_terms: usize,
    pub degree_bound: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 200_000, max_terms: 2_000_000, degree_bound: None }
    }
}

impl Budget {
    pub fn truncated(bound: u64) -> Self {
        Budget { degree_bound: Some(bound), ..Budget::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ctx: Arc<RingContext>,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ctx: &Arc<RingContext>, gens: Vec<Poly>) -> Result<Self, GroebnerError> {
        for g in &gens {
            if g.context() != ctx {
                return Err(GroebnerError::ContextMismatch);
            }
            if g.is_zero() {
                return Err(GroebnerError::ZeroGenerator);
            }
        }
        Ok(Ideal { ctx: ctx.clone(), gens })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// The same generators under another monomial order on the same variables.
    pub fn reorder(&self, ctx: &Arc<RingContext>) -> Result<Ideal, GroebnerError> {
        let gens = self.gens.iter().map(|g| g.reorder(ctx)).collect::<Result<Vec<_>, _>>()?;
        Ideal::new(ctx, gens)
    }
}

/// A reduced Gröbner basis, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Arc<RingContext>,
    basis: Vec<Poly>,
    truncated_at: Option<u64>,
}

impl GroebnerBasis {
    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn elements(&self) -> &[Poly] {
        &self.basis
    }

    /// `Some(N)` when the basis came from a completion truncated at degree `N`.
    pub fn truncated_at(&self) -> Option<u64> {
        self.truncated_at
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().filter_map(|g| g.leading().cloned()).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly, GroebnerError> {
        if p.context() != &self.ctx {
            return Err(GroebnerError::ContextMismatch);
        }
        Ok(reduce(&self.ctx, p, &self.basis)?)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Checks the defining property directly: every S-polynomial of a pair of
    /// basis elements reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> Result<bool, GroebnerError> {
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let s = s_polynomial(&self.basis[i], &self.basis[j])?;
                if let Some(n) = self.truncated_at {
                    let lcm = self.basis[i].leading().unwrap().lcm(self.basis[j].leading().unwrap());
                    if self.ctx.degree_of(&lcm) > n {
                        continue;
                    }
                }
                if !reduce(&self.ctx, &s, &self.basis)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Full reduction of `p`, always rewriting the largest reducible term first.
/// The first basis element whose leading monomial divides that term is used.
pub(crate) fn reduce(ctx: &RingContext, p: &Poly, basis: &[Poly]) -> Result<Poly, PolyError> {
    let mut work: BTreeMap<Vec<u64>, Monomial> = p.terms().iter().map(|t| (ctx.sort_key(t), t.clone())).collect();
    let mut out: Vec<Monomial> = Vec::new();
    while let Some((_, t)) = work.pop_last() {
        let divisor = basis.iter().find(|g| g.leading().is_some_and(|lm| lm.divides(&t)));
        match divisor {
            Some(g) => {
                let q = g.leading().unwrap().quotient_of(&t);
                for term in &g.terms()[1..] {
                    let m = term.checked_mul(&q)?;
                    match work.entry(ctx.sort_key(&m)) {
                        Entry::Occupied(e) => {
                            e.remove();
                        }
                        Entry::Vacant(e) => {
                            e.insert(m);
                        }
                    }
                }
            }
            None => out.push(t),
        }
    }
    Ok(Poly::from_terms(p.context(), out))
}

fn s_polynomial(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    let (lf, lg) = (f.leading().unwrap(), g.leading().unwrap());
    let lcm = lf.lcm(lg);
    let a = f.mul_monomial(&lf.quotient_of(&lcm))?;
    let b = g.mul_monomial(&lg.quotient_of(&lcm))?;
    a.checked_add(&b)
}

/// Reduced Gröbner basis of `ideal` under its context order.
///
/// Pairs are processed smallest lcm first; the product and chain criteria
/// discard pairs that are known to reduce to zero.
pub fn buchberger(ideal: &Ideal, budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    if ideal.gens.is_empty() {
        return Err(GroebnerError::EmptyIdeal);
    }
    let ctx = ideal.ctx.clone();
    let mut basis: Vec<Poly> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: BTreeSet<(Vec<u64>, usize, usize)> = BTreeSet::new();
    let mut truncated = false;

    let push = |h: Poly,
                basis: &mut Vec<Poly>,
                pending: &mut HashSet<(usize, usize)>,
                queue: &mut BTreeSet<(Vec<u64>, usize, usize)>| {
        let k = basis.len();
        let lh = h.leading().unwrap();
        for (i, g) in basis.iter().enumerate() {
            pending.insert((i, k));
            queue.insert((ctx.sort_key(&g.leading().unwrap().lcm(lh)), i, k));
        }
        basis.push(h);
    };

    for g in &ideal.gens {
        let h = reduce(&ctx, g, &basis)?;
        if !h.is_zero() {
            push(h, &mut basis, &mut pending, &mut queue);
        }
    }

    let mut processed = 0usize;
    while let Some((_, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        let (li, lj) = (basis[i].leading().unwrap(), basis[j].leading().unwrap());
        if li.coprime(lj) {
            continue;
        }
        let lcm = li.lcm(lj);
        if let Some(n) = budget.degree_bound {
            if ctx.degree_of(&lcm) > n {
                truncated = true;
                continue;
            }
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading().unwrap().divides(&lcm)
                && !pending.contains(&ordered(i, k))
                && !pending.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > budget.max_pairs {
            return Err(GroebnerError::BudgetExceeded { resource: "S-pairs", limit: budget.max_pairs });
        }
        let s = s_polynomial(&basis[i], &basis[j])?;
        let h = reduce(&ctx, &s, &basis)?;
        if h.len() > budget.max_terms {
            return Err(GroebnerError::BudgetExceeded { resource: "terms", limit: budget.max_terms });
        }
        if !h.is_zero() {
            push(h, &mut basis, &mut pending, &mut queue);
        }
    }

    let basis = interreduce(&ctx, basis)?;
    Ok(GroebnerBasis { ctx, basis, truncated_at: if truncated { budget.degree_bound } else { None } })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimalizes and tail-reduces a Gröbner basis.
fn interreduce(ctx: &Arc<RingContext>, mut basis: Vec<Poly>) -> Result<Vec<Poly>, PolyError> {
    basis.sort_by(|a, b| ctx.cmp_monomials(a.leading().unwrap(), b.leading().unwrap()));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lm = g.leading().unwrap();
        if !minimal.iter().any(|h| h.leading().unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let g = &minimal[i];
        let lead = Poly::from_monomial(ctx, g.leading().unwrap().clone());
        let tail = g.checked_add(&lead)?;
        reduced.push(lead.checked_add(&reduce(ctx, &tail, &others)?)?);
    }
    Ok(reduced)
}
