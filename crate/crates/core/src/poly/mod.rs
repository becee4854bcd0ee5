//! Sparse multivariate polynomials over GF(2) in graded variables.
//!
//! Every coefficient is 1, so a polynomial is a set of monomials and addition
//! is symmetric difference. Terms are kept sorted in decreasing order under
//! the context's monomial order, which makes equality structural.

mod context;
mod monomial;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use thiserror::Error;

pub use context::{MonomialOrder, RingContext, VarSpec};
pub use monomial::Monomial;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live in different ring contexts")]
    ContextMismatch,
    #[error("monomial exponent overflow")]
    ExponentOverflow,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("not divisible by `{var}`: offending terms {witness}")]
    NotDivisible { var: String, witness: Poly },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid ring context: {0}")]
    InvalidContext(String),
}

/// Outcome of [`Poly::homogeneity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous,
    /// Two terms whose degrees differ modulo the period.
    Mixed { first: Monomial, second: Monomial },
}

impl Homogeneity {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, Homogeneity::Homogeneous)
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Arc<RingContext>,
    terms: Vec<Monomial>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

fn same_ctx(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Poly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Poly::from_monomial(ctx, Monomial::one(ctx.nvars()))
    }

    pub fn var(ctx: &Arc<RingContext>, name: &str) -> Result<Self, PolyError> {
        let i = ctx.var_index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Poly::from_monomial(ctx, Monomial::var(ctx.nvars(), i, 1)))
    }

    /// `name^exp` as a single-term polynomial.
    pub fn var_pow(ctx: &Arc<RingContext>, name: &str, exp: u32) -> Result<Self, PolyError> {
        let i = ctx.var_index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Poly::from_monomial(ctx, Monomial::var(ctx.nvars(), i, exp)))
    }

    pub fn from_monomial(ctx: &Arc<RingContext>, m: Monomial) -> Self {
        assert_eq!(m.len(), ctx.nvars(), "monomial arity does not match context");
        Poly { ctx: ctx.clone(), terms: vec![m] }
    }

    /// Sums the given monomials over GF(2): repeated monomials cancel in pairs.
    pub fn from_terms(ctx: &Arc<RingContext>, terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        for t in &terms {
            assert_eq!(t.len(), ctx.nvars(), "monomial arity does not match context");
        }
        canonicalize(ctx, &mut terms);
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    /// Largest weighted degree of any term.
    pub fn max_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| self.ctx.degree_of(t)).max()
    }

    /// Whether `name` occurs in some term.
    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.iter().any(|t| t.exponent(index) > 0)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Poly { ctx: self.ctx.clone(), terms: merge_xor(&self.ctx, &self.terms, &other.terms) })
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        let (small, large) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        match small.terms.len() {
            0 => return Ok(Poly::zero(&self.ctx)),
            1 => return large.mul_monomial(&small.terms[0]),
            _ => {}
        }
        let mut prods = Vec::with_capacity(small.len() * large.len());
        for a in &small.terms {
            for b in &large.terms {
                prods.push(a.checked_mul(b)?);
            }
        }
        canonicalize(&self.ctx, &mut prods);
        Ok(Poly { ctx: self.ctx.clone(), terms: prods })
    }

    /// Multiplication by a monomial; order is preserved so no re-sort is needed.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Poly, PolyError> {
        let terms = self.terms.iter().map(|t| t.checked_mul(m)).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly { ctx: self.ctx.clone(), terms })
    }

    /// `p^2`, computed by doubling exponents: cross terms vanish in characteristic 2.
    pub fn frobenius_square(&self) -> Result<Poly, PolyError> {
        let terms = self.terms.iter().map(|t| t.checked_scale(2)).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly { ctx: self.ctx.clone(), terms })
    }

    pub fn pow(&self, mut e: u32) -> Result<Poly, PolyError> {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.frobenius_square()?;
            }
        }
        Ok(acc)
    }

    /// Ring-homomorphic image under `name ↦ images[name]`, landing in `target`.
    ///
    /// Only variables occurring in `self` need an image.
    pub fn substitute(
        &self,
        target: &Arc<RingContext>,
        images: &BTreeMap<String, Poly>,
    ) -> Result<Poly, PolyError> {
        let slots = self
            .ctx
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| match images.get(&v.name) {
                Some(p) => Ok(Some(p)),
                None if self.uses_var(i) => Err(PolyError::MissingImage(v.name.clone())),
                None => Ok(None),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute_slots(target, &slots)
    }

    /// Positional form of [`Poly::substitute`]: `images[i]` is the image of variable `i`.
    pub fn substitute_all(&self, target: &Arc<RingContext>, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.ctx.nvars() {
            return Err(PolyError::InvalidContext(format!(
                "expected {} images, got {}",
                self.ctx.nvars(),
                images.len()
            )));
        }
        let slots: Vec<Option<&Poly>> = images.iter().map(Some).collect();
        self.substitute_slots(target, &slots)
    }

    fn substitute_slots(&self, target: &Arc<RingContext>, slots: &[Option<&Poly>]) -> Result<Poly, PolyError> {
        for p in slots.iter().flatten() {
            if !same_ctx(p.context(), target) {
                return Err(PolyError::ContextMismatch);
            }
        }
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc: Vec<Monomial> = Vec::new();
        for t in &self.terms {
            let mut prod = Poly::one(target);
            for (i, &e) in t.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = slots[i].ok_or_else(|| PolyError::MissingImage(self.ctx.vars()[i].name.clone()))?;
                let pw = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = img.pow(e)?;
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                prod = prod.checked_mul(&pw)?;
                if prod.is_zero() {
                    break;
                }
            }
            acc.extend(prod.terms);
        }
        Ok(Poly::from_terms(target, acc))
    }

    /// Exact division by the variable `name`.
    pub fn divide_exact(&self, name: &str) -> Result<Poly, PolyError> {
        let i = self.ctx.var_index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let bad: Vec<Monomial> = self.terms.iter().filter(|t| t.exponent(i) == 0).cloned().collect();
        if !bad.is_empty() {
            return Err(PolyError::NotDivisible {
                var: name.to_string(),
                witness: Poly::from_terms(&self.ctx, bad),
            });
        }
        let divisor = Monomial::var(self.ctx.nvars(), i, 1);
        let terms = self.terms.iter().map(|t| divisor.quotient_of(t)).collect();
        Ok(Poly { ctx: self.ctx.clone(), terms })
    }

    /// Checks that all terms share one weighted degree modulo `d`.
    pub fn homogeneity_check(&self, d: u64) -> Homogeneity {
        assert!(d >= 1, "period must be positive");
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Homogeneity::Homogeneous };
        let r = self.ctx.degree_of(first) % d;
        for t in it {
            if self.ctx.degree_of(t) % d != r {
                return Homogeneity::Mixed { first: first.clone(), second: t.clone() };
            }
        }
        Homogeneity::Homogeneous
    }

    /// Drops every term of weighted degree above `bound`.
    pub fn truncate_above(&self, bound: u64) -> Poly {
        let terms = self.terms.iter().filter(|t| self.ctx.degree_of(t) <= bound).cloned().collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Re-expresses the polynomial in another context with the same variables
    /// (possibly a different order).
    pub fn reorder(&self, ctx: &Arc<RingContext>) -> Result<Poly, PolyError> {
        if ctx.vars() != self.ctx.vars() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Poly::from_terms(ctx, self.terms.iter().cloned()))
    }

    /// Parses `c^2*x + c_2 + 1` style input; `0` is the zero polynomial.
    pub fn parse(ctx: &Arc<RingContext>, src: &str) -> Result<Poly, PolyError> {
        let src = src.trim();
        if src == "0" {
            return Ok(Poly::zero(ctx));
        }
        let mut terms = Vec::new();
        for term in src.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(PolyError::Parse(format!("empty term in `{src}`")));
            }
            let mut exps = vec![0u32; ctx.nvars()];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor == "1" {
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: u32 = e
                            .trim()
                            .parse()
                            .map_err(|_| PolyError::Parse(format!("bad exponent in `{factor}`")))?;
                        (n.trim(), e)
                    }
                    None => (factor, 1),
                };
                let i = ctx.var_index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                exps[i] = exps[i].checked_add(exp).ok_or(PolyError::ExponentOverflow)?;
            }
            terms.push(Monomial::from(exps));
        }
        Ok(Poly::from_terms(ctx, terms))
    }

    pub fn monomial_to_string(ctx: &RingContext, m: &Monomial) -> String {
        let parts: Vec<String> = ctx
            .vars()
            .iter()
            .zip(m.exponents())
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { v.name.clone() } else { format!("{}^{}", v.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", Poly::monomial_to_string(&self.ctx, t))?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("poly addition")
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("poly multiplication")
    }
}

/// Sorts decreasingly and cancels equal monomials in pairs.
fn canonicalize(ctx: &RingContext, terms: &mut Vec<Monomial>) {
    terms.sort_unstable_by(|a, b| ctx.cmp_monomials(b, a));
    let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
    for t in terms.drain(..) {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    *terms = out;
}

pub(crate) fn merge_xor(ctx: &RingContext, a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ctx.cmp_monomials(&a[i], &b[j]) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
