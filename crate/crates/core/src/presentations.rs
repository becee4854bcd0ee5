//! Generator/relation data for the mod-2 Morava K-theory rings.
//!
//! The coefficient generator `v_s` is normalized to 1; relations are stored
//! with both sides moved to one side. Generator degrees: `c`, `x`, `u` in
//! degree 2, `c_2` and `v` in degree 4, `w` in degree 6.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::groebner::{buchberger, rank, Budget, GroebnerBasis, GroebnerError, Ideal, Rank};
use crate::poly::{Homogeneity, MonomialOrder, Poly, PolyError, RingContext, VarSpec};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("exponent overflow while building relations")]
    Overflow,
    #[error("presentation has no ideal: {0}")]
    NoIdeal(String),
    #[error("malformed presentation dump: {0}")]
    Dump(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Cyclic(u32),
    Q8,
    Quaternion(u32),
    BinaryTetrahedral,
    BinaryOctahedral,
    O2,
    N,
    SO3,
}

impl Family {
    pub fn slug(&self) -> &'static str {
        match self {
            Family::Cyclic(_) => "cyclic",
            Family::Q8 => "q8",
            Family::Quaternion(_) => "quaternion",
            Family::BinaryTetrahedral => "binary_tetrahedral",
            Family::BinaryOctahedral => "binary_octahedral",
            Family::O2 => "o2",
            Family::N => "n",
            Family::SO3 => "so3",
        }
    }

    /// `("k", k)` or `("m", m)` for the parameterized families.
    pub fn parameter(&self) -> Option<(&'static str, u32)> {
        match self {
            Family::Cyclic(k) => Some(("k", *k)),
            Family::Quaternion(m) => Some(("m", *m)),
            _ => None,
        }
    }

    fn from_parts(slug: &str, param: Option<u32>) -> Option<Family> {
        Some(match (slug, param) {
            ("cyclic", Some(k)) => Family::Cyclic(k),
            ("q8", None) => Family::Q8,
            ("quaternion", Some(m)) => Family::Quaternion(m),
            ("binary_tetrahedral", None) => Family::BinaryTetrahedral,
            ("binary_octahedral", None) => Family::BinaryOctahedral,
            ("o2", None) => Family::O2,
            ("n", None) => Family::N,
            ("so3", None) => Family::SO3,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some((name, v)) => write!(f, "{}({}={})", self.slug(), name, v),
            None => write!(f, "{}", self.slug()),
        }
    }
}

/// `f_s`, `g_s` from the `BSO(3)` recursion.
///
/// When a division by `v` fails at step `t`, `f` and `g` hold the last exact
/// pair (`reached = t - 1`) and `failure` carries the offending terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGPair {
    pub s: u32,
    pub f: Poly,
    pub g: Poly,
    pub exact: bool,
    pub reached: u32,
    pub failure: Option<RecursionFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionFailure {
    pub step: u32,
    pub dividend: Poly,
    pub witness: Poly,
}

#[derive(Clone, Debug)]
pub struct PresentationSpec {
    pub family: Family,
    pub s: u32,
    pub context: Arc<RingContext>,
    pub ideal: Option<Ideal>,
    pub expected_rank: Option<u64>,
    pub fg: Option<FGPair>,
    gb: OnceLock<Result<GroebnerBasis, GroebnerError>>,
}

impl PartialEq for PresentationSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.s == other.s && self.context == other.context && self.ideal == other.ideal
    }
}

impl PresentationSpec {
    pub fn relations(&self) -> &[Poly] {
        self.ideal.as_ref().map_or(&[], |i| i.generators())
    }

    pub fn ideal(&self) -> Result<&Ideal, PresentationError> {
        self.ideal
            .as_ref()
            .ok_or_else(|| PresentationError::NoIdeal(format!("{} at s={} is inexact", self.family, self.s)))
    }

    /// Reduced Gröbner basis under the default budget, computed once.
    pub fn groebner(&self) -> Result<&GroebnerBasis, PresentationError> {
        let ideal = self.ideal()?;
        self.gb
            .get_or_init(|| buchberger(ideal, &Budget::default()))
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    pub fn rank(&self, bound: Option<u64>) -> Result<Rank, PresentationError> {
        Ok(rank(self.groebner()?, bound)?)
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly, PresentationError> {
        Ok(self.groebner()?.normal_form(p)?)
    }

    pub fn var(&self, name: &str) -> Result<Poly, PresentationError> {
        Ok(Poly::var(&self.context, name)?)
    }

    /// First relation that is not homogeneous modulo the period, if any.
    pub fn inhomogeneous_relation(&self) -> Option<(usize, Homogeneity)> {
        let d = self.context.period();
        self.relations().iter().enumerate().find_map(|(i, r)| {
            let h = r.homogeneity_check(d);
            (!h.is_homogeneous()).then_some((i, h))
        })
    }
}

fn pow2(e: u64) -> Result<u64, PresentationError> {
    1u64.checked_shl(e as u32).filter(|_| e < 63).ok_or(PresentationError::Overflow)
}

fn exp32(e: u64) -> Result<u32, PresentationError> {
    u32::try_from(e).map_err(|_| PresentationError::Overflow)
}

/// `(2^{ms} - 1) / (2^s - 1)`, computed as the geometric sum `Σ_{i<m} 2^{is}`.
pub fn kappa(m: u32, s: u32) -> Result<u64, PresentationError> {
    if m == 0 || s == 0 {
        return Err(PresentationError::InvalidParameter(format!("kappa needs m, s >= 1 (got m={m}, s={s})")));
    }
    let mut sum = 0u64;
    for i in 0..u64::from(m) {
        sum = sum.checked_add(pow2(i * u64::from(s))?).ok_or(PresentationError::Overflow)?;
    }
    Ok(sum)
}

/// Iterates the 2-series `u ↦ v·u^{2^s}` `k` times starting from `u`,
/// returning the accumulated `(v-exponent, u-exponent)`.
pub fn two_power_series(k: u32, s: u32) -> Result<(u64, u64), PresentationError> {
    if k == 0 || s == 0 {
        return Err(PresentationError::InvalidParameter(format!("2-series needs k, s >= 1 (got k={k}, s={s})")));
    }
    let step = pow2(u64::from(s))?;
    let (mut v, mut u) = (0u64, 1u64);
    for _ in 0..k {
        v = v.checked_mul(step).and_then(|x| x.checked_add(1)).ok_or(PresentationError::Overflow)?;
        u = u.checked_mul(step).ok_or(PresentationError::Overflow)?;
    }
    Ok((v, u))
}

/// `Σ_{i=lo}^{hi} base^{2^s - 2^i} · c_2^{2^{i-1}}` in `ctx`; an empty range gives 0.
pub fn transfer_sum(
    ctx: &Arc<RingContext>,
    base: &str,
    s: u32,
    lo: u32,
    hi: u32,
) -> Result<Poly, PresentationError> {
    if lo < 1 || hi > s {
        return Err(PresentationError::InvalidParameter(format!(
            "transfer sum range {lo}..={hi} outside 1..={s}"
        )));
    }
    let mut acc = Poly::zero(ctx);
    let top = pow2(u64::from(s))?;
    for i in lo..=hi {
        let a = Poly::var_pow(ctx, base, exp32(top - pow2(u64::from(i))?)?)?;
        let b = Poly::var_pow(ctx, "c_2", exp32(pow2(u64::from(i) - 1)?)?)?;
        acc = acc.checked_add(&a.checked_mul(&b)?)?;
    }
    Ok(acc)
}

/// The literal `f_s, g_s` recursion with exact division by `v`.
pub fn fg_recursion(s: u32) -> Result<FGPair, PresentationError> {
    if s < 2 {
        return Err(PresentationError::InvalidParameter(format!("recursion starts at s = 2 (got {s})")));
    }
    let ctx = vw_context(s)?;
    let v = Poly::var(&ctx, "v")?;
    let w = Poly::var(&ctx, "w")?;
    let mut f = v.checked_mul(&w)?;
    let mut g = w.checked_mul(&w)?;
    for t in 3..=s {
        let product = f.checked_mul(&g)?;
        let quotient = match product.divide_exact("v") {
            Ok(q) => q,
            Err(PolyError::NotDivisible { witness, .. }) => {
                return Ok(FGPair {
                    s,
                    f,
                    g,
                    exact: false,
                    reached: t - 1,
                    failure: Some(RecursionFailure { step: t, dividend: product, witness }),
                });
            }
            Err(e) => return Err(e.into()),
        };
        let tail = w.checked_mul(&v.pow(exp32(pow2(u64::from(t) - 1)? - 1)?)?)?;
        let mixed = quotient.checked_add(&tail)?;
        if t % 2 == 0 {
            f = f.frobenius_square()?;
            g = mixed;
        } else {
            f = mixed;
            g = g.frobenius_square()?;
        }
    }
    Ok(FGPair { s, f, g, exact: true, reached: s, failure: None })
}

fn vw_context(s: u32) -> Result<Arc<RingContext>, PresentationError> {
    Ok(RingContext::new(s, vec![VarSpec::new("v", 4), VarSpec::new("w", 6)], MonomialOrder::DegLex)?)
}

fn context(s: u32, names: &[(&str, u32)]) -> Result<Arc<RingContext>, PresentationError> {
    let vars = names.iter().map(|(n, d)| VarSpec::new(*n, *d)).collect();
    Ok(RingContext::new(s, vars, MonomialOrder::DegLex)?)
}

/// Builds the presentation of `family` at height `s`.
pub fn build(family: Family, s: u32) -> Result<PresentationSpec, PresentationError> {
    if s == 0 || s > 16 {
        return Err(PresentationError::InvalidParameter(format!("height s = {s} out of range 1..=16")));
    }
    match family {
        Family::Quaternion(m) if m < 2 => {
            return Err(PresentationError::InvalidParameter(format!("quaternion family needs m > 1 (got {m})")))
        }
        Family::Cyclic(0) => return Err(PresentationError::InvalidParameter("cyclic family needs k >= 1".into())),
        _ => {}
    }
    let s64 = u64::from(s);
    let top = exp32(pow2(s64)?)?;
    let half = exp32(pow2(s64 - 1)?)?;
    let tetra_exp = exp32((pow2(s64)? + 1) * pow2(s64 - 1)?)?;

    let mut expected_rank = None;
    let mut fg = None;
    let (ctx, relations): (Arc<RingContext>, Option<Vec<Poly>>) = match family {
        Family::Cyclic(k) => {
            let ctx = context(s, &[("u", 2)])?;
            let (_, u_exp) = two_power_series(k, s)?;
            expected_rank = Some(u_exp);
            let rel = Poly::var_pow(&ctx, "u", exp32(u_exp)?)?;
            (ctx, Some(vec![rel]))
        }
        Family::Q8 | Family::Quaternion(_) => {
            let ctx = context(s, &[("c", 2), ("x", 2), ("c_2", 4)])?;
            let c = Poly::var(&ctx, "c")?;
            let x = Poly::var(&ctx, "x")?;
            let c2 = Poly::var(&ctx, "c_2")?;
            let csq = c.frobenius_square()?;
            let xsq = x.frobenius_square()?;
            let cx = c.checked_mul(&x)?;
            let c2_half = c2.pow(half)?;
            let sum_c = transfer_sum(&ctx, "c", s, 1, s - 1)?;

            let r1 = c.pow(top)?;
            let r2 = x.pow(top)?;
            let r3 = sum_poly(&[c.checked_mul(&c2_half)?, c.checked_mul(&sum_c)?, csq.clone()])?;
            let (r4, r5) = match family {
                Family::Q8 => {
                    let sum_x = transfer_sum(&ctx, "x", s, 1, s - 1)?;
                    let r4 = sum_poly(&[c2.pow(top)?, csq, cx, xsq.clone()])?;
                    let r5 = sum_poly(&[x.checked_mul(&c2_half)?, x.checked_mul(&sum_x)?, xsq])?;
                    (r4, r5)
                }
                Family::Quaternion(m) => {
                    let ms = u64::from(m) * s64;
                    let big = pow2(ms)?;
                    let r4 = sum_poly(&[c2.pow(exp32(big)?)?, cx.clone(), xsq])?;
                    let mut parts = vec![x.checked_mul(&c2_half)?, x.checked_mul(&sum_c)?, cx];
                    let lead = (big + 1) * pow2(s64 - 1)?;
                    for i in 1..=ms {
                        let e = lead - (pow2(s64)? - 1) * pow2(i - 1)?;
                        parts.push(c2.pow(exp32(e)?)?);
                    }
                    (r4, sum_poly(&parts)?)
                }
                _ => unreachable!(),
            };
            (ctx, Some(vec![r1, r2, r3, r4, r5]))
        }
        Family::BinaryTetrahedral => {
            let ctx = context(s, &[("c_2", 4)])?;
            expected_rank = Some(u64::from(tetra_exp));
            let rel = Poly::var_pow(&ctx, "c_2", tetra_exp)?;
            (ctx, Some(vec![rel]))
        }
        Family::BinaryOctahedral | Family::O2 | Family::N => {
            let ctx = context(s, &[("c", 2), ("c_2", 4)])?;
            let c = Poly::var(&ctx, "c")?;
            let c_sum = c.checked_mul(&transfer_sum(&ctx, "c", s, 1, s)?)?;
            let mut rels = vec![c.pow(top)?];
            match family {
                Family::O2 => rels.push(c_sum),
                _ => rels.push(c.frobenius_square()?.checked_add(&c_sum)?),
            }
            if family == Family::BinaryOctahedral {
                rels.push(Poly::var_pow(&ctx, "c_2", tetra_exp)?);
            }
            (ctx, Some(rels))
        }
        Family::SO3 => {
            if s < 2 {
                return Err(PresentationError::InvalidParameter("the SO(3) recursion starts at s = 2".into()));
            }
            let pair = fg_recursion(s)?;
            let ctx = pair.f.context().clone();
            let rels = pair.exact.then(|| vec![pair.f.clone(), pair.g.clone()]);
            fg = Some(pair);
            (ctx, rels)
        }
    };
    let ideal = match relations {
        Some(r) => Some(Ideal::new(&ctx, r.into_iter().filter(|p| !p.is_zero()).collect())?),
        None => None,
    };
    Ok(PresentationSpec { family, s, context: ctx, ideal, expected_rank, fg, gb: OnceLock::new() })
}

fn sum_poly(parts: &[Poly]) -> Result<Poly, PolyError> {
    let mut acc = Poly::zero(parts[0].context());
    for p in parts {
        acc = acc.checked_add(p)?;
    }
    Ok(acc)
}

/// Plain-text form of a presentation.
///
/// ```text
/// family quaternion
/// m 2
/// s 1
/// order deglex
/// var c 2
/// var x 2
/// var c_2 4
/// rel c^2
/// ...
/// end
/// ```
///
/// Relations appear in construction order, each with its terms in decreasing
/// monomial order. An inexact `so3` presentation carries an `inexact` line
/// (failing step and witness) and no `rel` lines.
pub fn write_dump(p: &PresentationSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("family {}\n", p.family.slug()));
    if let Some((name, v)) = p.family.parameter() {
        out.push_str(&format!("{name} {v}\n"));
    }
    out.push_str(&format!("s {}\n", p.s));
    out.push_str(&format!("order {}\n", p.context.order()));
    for v in p.context.vars() {
        out.push_str(&format!("var {} {}\n", v.name, v.degree));
    }
    if let Some(failure) = p.fg.as_ref().and_then(|fg| fg.failure.as_ref()) {
        out.push_str(&format!("inexact {} {}\n", failure.step, failure.witness));
    }
    for r in p.relations() {
        out.push_str(&format!("rel {r}\n"));
    }
    out.push_str("end\n");
    out
}

/// A parsed presentation dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationDump {
    pub family: Family,
    pub s: u32,
    pub context: Arc<RingContext>,
    pub relations: Vec<Poly>,
    pub inexact: Option<(u32, Poly)>,
}

impl FromStr for PresentationDump {
    type Err = PresentationError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| PresentationError::Dump(msg);
        let mut slug = None;
        let mut param = None;
        let mut s = None;
        let mut order = MonomialOrder::DegLex;
        let mut vars = Vec::new();
        let mut rels = Vec::new();
        let mut inexact = None;
        let mut ended = false;
        for line in src.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if ended {
                return Err(bad(format!("content after `end`: {line}")));
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let num = |r: &str| r.trim().parse::<u32>().map_err(|_| bad(format!("bad number in `{line}`")));
            match key {
                "family" => slug = Some(rest.trim().to_string()),
                "k" | "m" => param = Some(num(rest)?),
                "s" => s = Some(num(rest)?),
                "order" => order = rest.trim().parse()?,
                "var" => {
                    let (name, deg) = rest.trim().split_once(' ').ok_or_else(|| bad(format!("bad var line `{line}`")))?;
                    vars.push(VarSpec::new(name, num(deg)?));
                }
                "rel" => rels.push(rest.trim().to_string()),
                "inexact" => {
                    let (step, w) =
                        rest.trim().split_once(' ').ok_or_else(|| bad(format!("bad inexact line `{line}`")))?;
                    inexact = Some((num(step)?, w.to_string()));
                }
                "end" => ended = true,
                _ => return Err(bad(format!("unknown line `{line}`"))),
            }
        }
        if !ended {
            return Err(bad("missing `end`".into()));
        }
        let slug = slug.ok_or_else(|| bad("missing family".into()))?;
        let family =
            Family::from_parts(&slug, param).ok_or_else(|| bad(format!("unknown family `{slug}` / parameter")))?;
        let s = s.ok_or_else(|| bad("missing s".into()))?;
        let context = RingContext::new(s, vars, order)?;
        let relations = rels.iter().map(|r| Poly::parse(&context, r)).collect::<Result<Vec<_>, _>>()?;
        let inexact = match inexact {
            Some((step, w)) => Some((step, Poly::parse(&context, &w)?)),
            None => None,
        };
        Ok(PresentationDump { family, s, context, relations, inexact })
    }
}
