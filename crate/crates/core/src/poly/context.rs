use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError};

/// A graded generator: a name and its cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    pub degree: u32,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        VarSpec { name: name.into(), degree }
    }
}

/// Monomial orders supported by the engine.
///
/// `DegLex` compares weighted total degree first and breaks ties
/// lexicographically, with the first variable of the context most
/// significant. `Elimination` splits the variables into a leading block of
/// `eliminated` variables and the rest, and compares the leading block first
/// (each block by `DegLex`), so any monomial touching the leading block is
/// larger than every monomial free of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    Elimination { eliminated: usize },
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::DegLex => write!(f, "deglex"),
            MonomialOrder::Elimination { eliminated } => write!(f, "elim:{eliminated}"),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "deglex" => Ok(MonomialOrder::DegLex),
            other => other
                .strip_prefix("elim:")
                .and_then(|n| n.parse().ok())
                .map(|eliminated| MonomialOrder::Elimination { eliminated })
                .ok_or_else(|| PolyError::Parse(format!("unknown monomial order `{other}`"))),
        }
    }
}

/// Variables, height and monomial order shared by a family of polynomials.
///
/// The height `s` fixes the period `2(2^s - 1)`: the degree of the
/// coefficient-ring generator that is normalized to 1, so relations are only
/// homogeneous modulo the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    s: u32,
    vars: Vec<VarSpec>,
    order: MonomialOrder,
}

impl RingContext {
    pub fn new(s: u32, vars: Vec<VarSpec>, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        if s == 0 || s > 30 {
            return Err(PolyError::InvalidContext(format!("height s = {s} out of range 1..=30")));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() || vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::InvalidContext(format!(
                    "variable name `{}` is empty or repeated",
                    v.name
                )));
            }
        }
        if let MonomialOrder::Elimination { eliminated } = order {
            if eliminated > vars.len() {
                return Err(PolyError::InvalidContext(format!(
                    "eliminated block of {eliminated} exceeds {} variables",
                    vars.len()
                )));
            }
        }
        Ok(Arc::new(RingContext { s, vars, order }))
    }

    /// Same variables and height under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        RingContext::new(self.s, self.vars.clone(), order)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// `2(2^s - 1)`.
    pub fn period(&self) -> u64 {
        2 * ((1u64 << self.s) - 1)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn degree_of(&self, m: &Monomial) -> u64 {
        weighted(&self.vars, m.exponents())
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self.order {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegLex => deglex(&self.vars, a, b),
            MonomialOrder::Elimination { eliminated } => {
                let k = eliminated;
                deglex(&self.vars[..k], &a[..k], &b[..k])
                    .then_with(|| deglex(&self.vars[k..], &a[k..], &b[k..]))
            }
        }
    }
}

impl RingContext {
    /// A key whose lexicographic order agrees with `cmp_monomials`.
    pub fn sort_key(&self, m: &Monomial) -> Vec<u64> {
        let e = m.exponents();
        let mut key = Vec::with_capacity(e.len() + 2);
        let mut block = |vars: &[VarSpec], exps: &[u32]| {
            key.push(weighted(vars, exps));
            key.extend(exps.iter().map(|&x| u64::from(x)));
        };
        match self.order {
            MonomialOrder::Lex => key.extend(e.iter().map(|&x| u64::from(x))),
            MonomialOrder::DegLex => block(&self.vars, e),
            MonomialOrder::Elimination { eliminated: k } => {
                block(&self.vars[..k], &e[..k]);
                block(&self.vars[k..], &e[k..]);
            }
        }
        key
    }
}

fn weighted(vars: &[VarSpec], exps: &[u32]) -> u64 {
    vars.iter().zip(exps).map(|(v, &e)| u64::from(v.degree) * u64::from(e)).sum()
}

fn deglex(vars: &[VarSpec], a: &[u32], b: &[u32]) -> Ordering {
    weighted(vars, a).cmp(&weighted(vars, b)).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(order: MonomialOrder) -> Arc<RingContext> {
        RingContext::new(
            2,
            vec![VarSpec::new("c", 2), VarSpec::new("x", 2), VarSpec::new("c_2", 4)],
            order,
        )
        .unwrap()
    }

    #[test]
    fn period_is_two_less_than_twice_a_power() {
        assert_eq!(ctx(MonomialOrder::DegLex).period(), 6);
        let one = RingContext::new(1, vec![VarSpec::new("u", 2)], MonomialOrder::Lex).unwrap();
        assert_eq!(one.period(), 2);
    }

    #[test]
    fn rejects_duplicate_names_and_bad_blocks() {
        let dup = RingContext::new(
            1,
            vec![VarSpec::new("c", 2), VarSpec::new("c", 2)],
            MonomialOrder::DegLex,
        );
        assert!(dup.is_err());
        let blk = RingContext::new(1, vec![VarSpec::new("c", 2)], MonomialOrder::Elimination { eliminated: 2 });
        assert!(blk.is_err());
        assert!(RingContext::new(0, vec![], MonomialOrder::Lex).is_err());
    }

    #[test]
    fn deglex_uses_weighted_degree() {
        let c = ctx(MonomialOrder::DegLex);
        let cx = Monomial::from(vec![1, 1, 0]);
        let c2sq = Monomial::from(vec![0, 0, 2]);
        assert_eq!(c.cmp_monomials(&c2sq, &cx), Ordering::Greater);
        let l = ctx(MonomialOrder::Lex);
        assert_eq!(l.cmp_monomials(&c2sq, &cx), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let c = ctx(MonomialOrder::Elimination { eliminated: 1 });
        let small_c = Monomial::from(vec![1, 0, 0]);
        let big_rest = Monomial::from(vec![0, 9, 9]);
        assert_eq!(c.cmp_monomials(&small_c, &big_rest), Ordering::Greater);
    }

    #[test]
    fn order_tags_round_trip() {
        for o in [MonomialOrder::Lex, MonomialOrder::DegLex, MonomialOrder::Elimination { eliminated: 3 }] {
            assert_eq!(o.to_string().parse::<MonomialOrder>().unwrap(), o);
        }
    }
}
