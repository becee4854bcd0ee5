use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

use crate::groebner::{buchberger, kernel_of_map, rank, Budget, GroebnerBasis, GroebnerError};
use crate::group_oracle::{
    build_group, commuting_tuple_classes, hurwitz_generators, subgroup_index, sylow2_conjugates, GroupKind,
    OracleError,
};
use crate::invariants::{
    check_order, check_well_defined, elementary_symmetric_check, express_in_subring, invariant_space, sigma_q8,
    InvariantError, OrderCheck, WellDefined,
};
use crate::poly::{Poly, VarSpec};
use crate::presentations::{build, Family, PresentationError, PresentationSpec};

use super::{Inputs, RunConfig, Status, Suite, Witness};

/// Largest quotient the verifier will enumerate monomial by monomial.
const MAX_ENUMERATED_RANK: u128 = 1 << 20;

#[derive(Debug, Error)]
pub(super) enum ClaimError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("quotient of {0} has infinite rank")]
    InfiniteRank(String),
    #[error("quotient of {0} may exceed {MAX_ENUMERATED_RANK} standard monomials")]
    TooLarge(String),
}

impl From<crate::poly::PolyError> for ClaimError {
    fn from(e: crate::poly::PolyError) -> Self {
        ClaimError::Groebner(e.into())
    }
}

pub(super) struct Outcome {
    pub status: Status,
    pub witness: Option<Witness>,
    pub discrepancy: bool,
}

impl Outcome {
    fn verified() -> Self {
        Outcome { status: Status::Verified, witness: None, discrepancy: false }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Outcome { status: Status::Skipped(reason.into()), witness: None, discrepancy: false }
    }

    /// `VERIFIED` when equal, `REFUTED` otherwise; both sides are the witness.
    fn compare(found: u64, expected: u64) -> Self {
        let status = if found == expected { Status::Verified } else { Status::Refuted };
        Outcome { status, witness: Some(Witness::Integers(vec![found, expected])), discrepancy: false }
    }

    /// `RECORDED`; a discrepancy unless all values agree.
    fn record(values: Vec<u64>) -> Self {
        let discrepancy = values.windows(2).any(|w| w[0] != w[1]);
        Outcome { status: Status::Recorded, witness: Some(Witness::Integers(values)), discrepancy }
    }

    fn refuted(p: &Poly) -> Self {
        Outcome { status: Status::Refuted, witness: Some(Witness::Poly(p.to_string())), discrepancy: false }
    }

    fn vanishes(residue: &Poly) -> Self {
        if residue.is_zero() {
            Outcome::verified()
        } else {
            Outcome::refuted(residue)
        }
    }
}

type Eval = Box<dyn FnOnce() -> Result<Outcome, ClaimError> + Send>;

pub(super) struct Claim {
    pub id: String,
    pub inputs: Inputs,
    pub eval: Eval,
}

fn claim(
    id: String,
    inputs: &[(&str, Value)],
    eval: impl FnOnce() -> Result<Outcome, ClaimError> + Send + 'static,
) -> Claim {
    let inputs = inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    Claim { id, inputs, eval: Box::new(eval) }
}

fn family_inputs(family: Family, s: u32) -> Vec<(&'static str, Value)> {
    let mut v = vec![("family", Value::from(family.slug())), ("s", Value::from(s))];
    if let Some((name, p)) = family.parameter() {
        v.push((name, Value::from(p)));
    }
    v
}

fn family_tag(family: Family) -> String {
    match family.parameter() {
        Some((name, p)) => format!("{}.{name}={p}", family.slug()),
        None => family.slug().to_string(),
    }
}

fn group_of(family: Family) -> Option<GroupKind> {
    Some(match family {
        Family::Q8 => GroupKind::Q(1),
        Family::Quaternion(m) => GroupKind::Q(m),
        Family::BinaryTetrahedral => GroupKind::TwoT,
        Family::BinaryOctahedral => GroupKind::TwoO,
        Family::Cyclic(k) => GroupKind::Cyclic(k),
        _ => return None,
    })
}

/// Product of the pure-power caps, or `None` when some variable is uncapped.
fn staircase_bound(gb: &GroebnerBasis) -> Option<u128> {
    let lms = gb.leading_monomials();
    let mut total: u128 = 1;
    for v in 0..gb.context().nvars() {
        let cap = lms
            .iter()
            .filter_map(|m| m.pure_power().filter(|&(i, _)| i == v).map(|(_, e)| e))
            .min()?;
        total = total.saturating_mul(u128::from(cap));
    }
    Some(total)
}

fn finite_rank(gb: &GroebnerBasis, what: &str) -> Result<u64, ClaimError> {
    match staircase_bound(gb) {
        None => Err(ClaimError::InfiniteRank(what.to_string())),
        Some(b) if b > MAX_ENUMERATED_RANK => Err(ClaimError::TooLarge(what.to_string())),
        Some(_) => rank(gb, None)?
            .finite()
            .map(|n| n as u64)
            .ok_or_else(|| ClaimError::InfiniteRank(what.to_string())),
    }
}

fn presentation_rank(p: &PresentationSpec) -> Result<u64, ClaimError> {
    finite_rank(p.groebner()?, &format!("{} at s = {}", p.family, p.s))
}

fn oracle(kind: GroupKind, s: u32, budget: usize) -> Result<u64, ClaimError> {
    Ok(commuting_tuple_classes(&build_group(kind)?, s, 2, budget)?)
}

fn rank_vs_oracle(family: Family, s: u32, budget: usize) -> Result<(u64, u64), ClaimError> {
    let p = build(family, s)?;
    let kind = group_of(family).expect("family with a group model");
    Ok((presentation_rank(&p)?, oracle(kind, s, budget)?))
}

pub(super) fn collect(cfg: &RunConfig) -> Vec<Claim> {
    let mut out = Vec::new();
    for suite in &cfg.suites {
        match suite {
            Suite::RankVsOracle => rank_claims(cfg, &mut out),
            Suite::Invariant => invariant_claims(cfg, &mut out),
            Suite::Subring => subring_claims(cfg, &mut out),
            Suite::Homogeneity => homogeneity_claims(cfg, &mut out),
            Suite::FgRecursion => recursion_claims(cfg, &mut out),
            Suite::Icosahedral => icosahedral_claims(cfg, &mut out),
        }
    }
    out
}

fn rank_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    let budget = cfg.oracle_budget;
    for s in 1..=cfg.rank_s_max {
        out.push(claim(format!("thm2.i.rank.s={s}"), &family_inputs(Family::Q8, s), move || {
            let (p, o) = rank_vs_oracle(Family::Q8, s, budget)?;
            Ok(Outcome::compare(p, o))
        }));

        let tetra = Family::BinaryTetrahedral;
        out.push(claim(format!("thm2.iii.rank.s={s}"), &family_inputs(tetra, s), move || {
            let (p, o) = rank_vs_oracle(tetra, s, budget)?;
            Ok(Outcome::compare(p, o))
        }));
        out.push(claim(format!("thm2.iii.closed_form.s={s}"), &family_inputs(tetra, s), move || {
            let p = build(tetra, s)?;
            let expected = ((1u64 << s) + 1) << (s - 1);
            Ok(Outcome::compare(presentation_rank(&p)?, expected))
        }));

        for k in 1..=cfg.k_max {
            let cyc = Family::Cyclic(k);
            out.push(claim(format!("thm2.v.rank.k={k}.s={s}"), &family_inputs(cyc, s), move || {
                let (p, o) = rank_vs_oracle(cyc, s, budget)?;
                Ok(Outcome::compare(p, o))
            }));
            out.push(claim(format!("thm2.v.closed_form.k={k}.s={s}"), &family_inputs(cyc, s), move || {
                let p = build(cyc, s)?;
                let expected = 1u64.checked_shl(k * s).filter(|_| k * s < 64).ok_or(PresentationError::Overflow)?;
                Ok(Outcome::compare(presentation_rank(&p)?, expected))
            }));
        }
    }
    for s in 1..=cfg.s_max {
        for m in 2..=cfg.m_max {
            let q = Family::Quaternion(m);
            out.push(claim(format!("thm2.ii.rank.m={m}.s={s}"), &family_inputs(q, s), move || {
                let (p, o) = rank_vs_oracle(q, s, budget)?;
                Ok(Outcome::compare(p, o))
            }));
        }
        let oct = Family::BinaryOctahedral;
        out.push(claim(format!("thm2.iv.rank.s={s}"), &family_inputs(oct, s), move || {
            let (p, o) = rank_vs_oracle(oct, s, budget)?;
            Ok(Outcome::record(vec![p, o]))
        }));
    }
}

fn invariant_space_checked(s: u32) -> Result<(Arc<PresentationSpec>, Vec<Poly>), ClaimError> {
    let sigma = sigma_q8(s)?;
    let p = sigma.target.clone();
    presentation_rank(&p)?;
    let space = invariant_space(&p, &sigma)?;
    Ok((p, space.elements().cloned().collect()))
}

fn invariant_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    for s in 1..=cfg.s_max {
        let inputs = family_inputs(Family::Q8, s);
        out.push(claim(format!("prop1.well_defined.s={s}"), &inputs, move || {
            Ok(match check_well_defined(&sigma_q8(s)?)? {
                WellDefined::Yes => Outcome::verified(),
                WellDefined::DegreeMismatch { image, .. } => Outcome::refuted(&image),
                WellDefined::RelationFails { residue, .. } => Outcome::refuted(&residue),
            })
        }));
        out.push(claim(format!("prop1.order3.s={s}"), &inputs, move || {
            Ok(match check_order(&sigma_q8(s)?, 3)? {
                OrderCheck::Exact => Outcome::verified(),
                OrderCheck::NotIdentity { image, .. } => Outcome::refuted(&image),
                OrderCheck::SmallerPeriod(j) => Outcome {
                    status: Status::Refuted,
                    witness: Some(Witness::Integers(vec![u64::from(j), 3])),
                    discrepancy: false,
                },
            })
        }));
        out.push(claim(format!("prop1.invariant_rank.s={s}"), &inputs, move || {
            let (_, inv) = invariant_space_checked(s)?;
            let tetra = build(Family::BinaryTetrahedral, s)?;
            Ok(Outcome::compare(inv.len() as u64, presentation_rank(&tetra)?))
        }));
        out.push(claim(format!("prop1.c2_generated.s={s}"), &inputs, move || {
            let (p, inv) = invariant_space_checked(s)?;
            let gens = [(VarSpec::new("t", 4), p.var("c_2")?)];
            let expressed = express_in_subring(&p, &gens, &inv)?;
            Ok(match inv.iter().zip(&expressed).find(|(_, e)| e.is_none()) {
                Some((outside, _)) => Outcome::refuted(outside),
                None => Outcome::verified(),
            })
        }));
        out.push(claim(format!("prop1.esym.e1.s={s}"), &inputs, move || {
            let r = elementary_symmetric_check(s)?;
            Ok(Outcome {
                status: Status::Recorded,
                witness: Some(Witness::Poly(r.e1.to_string())),
                discrepancy: !r.e1.is_zero(),
            })
        }));
        out.push(claim(format!("prop1.esym.e2.s={s}"), &inputs, move || {
            Ok(Outcome::vanishes(&elementary_symmetric_check(s)?.e2))
        }));
        out.push(claim(format!("prop1.esym.e3.s={s}"), &inputs, move || {
            Ok(Outcome::vanishes(&elementary_symmetric_check(s)?.e3))
        }));
    }
}

/// Rank of `GF(2)[c, c_2]` modulo the kernel of its map into the `Q_16` ring.
pub(super) fn octahedral_subring_rank(s: u32) -> Result<u64, ClaimError> {
    let q16 = build(Family::Quaternion(2), s)?;
    let vars = [VarSpec::new("c", 2), VarSpec::new("c_2", 4)];
    let images = [q16.var("c")?, q16.var("c_2")?];
    let ker = kernel_of_map(&vars, &images, q16.ideal()?, &Budget::default())?;
    let gb = buchberger(&ker.ideal()?, &Budget::default())?;
    finite_rank(&gb, &format!("the (c, c_2) subring at s = {s}"))
}

/// Images of `v`, `w` in the `O(2)` ring.
pub(super) fn so3_images(o2: &PresentationSpec) -> Result<[Poly; 2], ClaimError> {
    let c = o2.var("c")?;
    let c2 = o2.var("c_2")?;
    let half = 1u32 << (o2.s - 1);
    let v = c.frobenius_square()?.checked_add(&c.checked_mul(&c2.pow(half)?)?)?.checked_add(&c2)?;
    Ok([v, c.checked_mul(&c2)?])
}

fn subring_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    let budget = cfg.oracle_budget;
    let bound = cfg.degree_bound;
    out.push(claim("prop2.sylow2_conjugates".into(), &[("group", Value::from("2O"))], || {
        Ok(Outcome::compare(sylow2_conjugates(&build_group(GroupKind::TwoO)?)?, 3))
    }));
    for s in 1..=cfg.s_max {
        let inputs = family_inputs(Family::BinaryOctahedral, s);
        out.push(claim(format!("prop2.subring.s={s}"), &inputs, move || {
            let sub = octahedral_subring_rank(s)?;
            let pres = presentation_rank(&build(Family::BinaryOctahedral, s)?)?;
            Ok(Outcome::record(vec![sub, pres, oracle(GroupKind::TwoO, s, budget)?]))
        }));
        out.push(claim(format!("prop2.subring_oracle.s={s}"), &inputs, move || {
            Ok(Outcome::compare(octahedral_subring_rank(s)?, oracle(GroupKind::TwoO, s, budget)?))
        }));
    }
    for s in 2..=cfg.s_max {
        let mut inputs = family_inputs(Family::SO3, s);
        inputs.push(("degreeBound", Value::from(bound)));
        out.push(claim(format!("cor3.so3.vanish.s={s}"), &inputs, move || {
            let so3 = build(Family::SO3, s)?;
            if so3.ideal.is_none() {
                return Ok(Outcome::skipped("recursion is not exact at this height"));
            }
            let o2 = build(Family::O2, s)?;
            let images = so3_images(&o2)?;
            for rel in so3.relations() {
                let residue = o2.normal_form(&rel.substitute_all(&o2.context, &images)?)?;
                if !residue.is_zero() {
                    return Ok(Outcome::refuted(&residue));
                }
            }
            Ok(Outcome::verified())
        }));
        out.push(claim(format!("cor3.so3.kernel.s={s}"), &inputs, move || {
            let so3 = build(Family::SO3, s)?;
            if so3.ideal.is_none() {
                return Ok(Outcome::skipped("recursion is not exact at this height"));
            }
            let o2 = build(Family::O2, s)?;
            let images = so3_images(&o2)?;
            let budget = Budget { degree_bound: Some(bound), ..Budget::default() };
            let ker = kernel_of_map(so3.context.vars(), &images, o2.ideal()?, &budget)?;
            for g in &ker.kernel_gens {
                let g = g.reorder(&so3.context)?;
                if !so3.normal_form(&g)?.is_zero() {
                    return Ok(Outcome {
                        status: Status::Recorded,
                        witness: Some(Witness::Poly(g.to_string())),
                        discrepancy: true,
                    });
                }
            }
            Ok(Outcome::verified())
        }));
    }
}

fn homogeneity_families(cfg: &RunConfig, s: u32) -> Vec<Family> {
    let mut fams = vec![Family::Q8, Family::BinaryTetrahedral, Family::BinaryOctahedral, Family::O2, Family::N];
    fams.extend((2..=cfg.m_max).map(Family::Quaternion));
    fams.extend((1..=cfg.k_max).map(Family::Cyclic));
    if s >= 2 {
        fams.push(Family::SO3);
    }
    fams
}

fn homogeneity_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    for s in 1..=cfg.rank_s_max {
        for family in homogeneity_families(cfg, s) {
            out.push(claim(format!("homog.{}.s={s}", family_tag(family)), &family_inputs(family, s), move || {
                let p = build(family, s)?;
                if p.ideal.is_none() {
                    return Ok(Outcome::skipped("recursion is not exact at this height"));
                }
                Ok(match p.inhomogeneous_relation() {
                    Some((i, _)) => Outcome::refuted(&p.relations()[i]),
                    None => Outcome::verified(),
                })
            }));
        }
    }
}

fn recursion_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    for s in 2..=cfg.s_max {
        out.push(claim(format!("cor3.recursion.s={s}"), &[("s", Value::from(s))], move || {
            let pair = crate::presentations::fg_recursion(s)?;
            Ok(match pair.failure {
                None => Outcome::verified(),
                Some(f) => Outcome {
                    status: Status::Recorded,
                    witness: Some(Witness::Poly(f.witness.to_string())),
                    discrepancy: true,
                },
            })
        }));
    }
}

fn icosahedral_claims(cfg: &RunConfig, out: &mut Vec<Claim>) {
    let budget = cfg.oracle_budget;
    let group = [("group", Value::from("2I"))];
    out.push(claim("ico.order".into(), &group, || Ok(Outcome::compare(build_group(GroupKind::TwoI)?.order() as u64, 120))));
    out.push(claim("ico.index".into(), &group, || {
        let g = build_group(GroupKind::TwoI)?;
        let gens: Vec<usize> = hurwitz_generators(5)
            .iter()
            .map(|e| g.index_of(e).ok_or(OracleError::InvalidParameter("Hurwitz unit outside 2I".into())))
            .collect::<Result<_, _>>()?;
        Ok(Outcome::compare(subgroup_index(&g, &gens)?, 5))
    }));
    out.push(claim("ico.octahedral_quotient".into(), &group, || {
        let big = build_group(GroupKind::TwoI)?.order() as u64;
        let small = build_group(GroupKind::TwoO)?.order() as u64;
        Ok(Outcome {
            status: Status::Recorded,
            witness: Some(Witness::Integers(vec![big, small])),
            discrepancy: !big.is_multiple_of(small),
        })
    }));
    for s in 1..=cfg.s_max {
        out.push(claim(format!("ico.rank.s={s}"), &[("s", Value::from(s))], move || {
            Ok(Outcome::compare(oracle(GroupKind::TwoT, s, budget)?, oracle(GroupKind::TwoI, s, budget)?))
        }));
    }
}
