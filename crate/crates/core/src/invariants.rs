//! Ring maps between presented rings and the fixed subring of the order-3
//! automorphism of the `Q_8` ring that yields the binary tetrahedral ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::groebner::{quotient_basis, Budget, GroebnerError, QuotientBasis, SubringEliminator};
use crate::poly::{Monomial, Poly, PolyError, VarSpec};
use crate::presentations::{build, Family, PresentationError, PresentationSpec};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("map needs {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("image of `{0}` is not in the target context")]
    ForeignImage(String),
    #[error("source and target must coincide for an endomorphism")]
    NotEndomorphism,
    #[error("presentation has infinite rank")]
    InfiniteRank,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A ring map given by generator images; `images[i]` is the image of the
/// `i`-th source generator, written in the target context.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: Arc<PresentationSpec>,
    pub target: Arc<PresentationSpec>,
    pub images: Vec<Poly>,
}

impl RingMap {
    pub fn new(
        source: Arc<PresentationSpec>,
        target: Arc<PresentationSpec>,
        images: Vec<Poly>,
    ) -> Result<Self, InvariantError> {
        let expected = source.context.nvars();
        if images.len() != expected {
            return Err(InvariantError::ImageCount { expected, found: images.len() });
        }
        for (v, img) in source.context.vars().iter().zip(&images) {
            if img.context() != &target.context {
                return Err(InvariantError::ForeignImage(v.name.clone()));
            }
        }
        Ok(RingMap { source, target, images })
    }

    pub fn identity(p: Arc<PresentationSpec>) -> Self {
        let images = p.context.vars().iter().map(|v| Poly::var(&p.context, &v.name).expect("own variable")).collect();
        RingMap { source: p.clone(), target: p, images }
    }

    /// Image of a source polynomial, unreduced.
    pub fn apply(&self, p: &Poly) -> Result<Poly, InvariantError> {
        Ok(p.substitute_all(&self.target.context, &self.images)?)
    }

    /// Image of a source polynomial, reduced modulo the target ideal.
    pub fn apply_reduced(&self, p: &Poly) -> Result<Poly, InvariantError> {
        Ok(self.target.normal_form(&self.apply(p)?)?)
    }

    fn is_endomorphism(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) || *self.source == *self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellDefined {
    Yes,
    /// The image is not congruent to the generator's degree modulo the target period.
    DegreeMismatch { generator: String, image: Poly },
    /// A source relation does not map into the target ideal.
    RelationFails { relation: Poly, residue: Poly },
}

impl WellDefined {
    pub fn holds(&self) -> bool {
        matches!(self, WellDefined::Yes)
    }
}

/// Checks that the images respect the grading and send every source relation to zero.
pub fn check_well_defined(map: &RingMap) -> Result<WellDefined, InvariantError> {
    let d = map.target.context.period();
    for (v, img) in map.source.context.vars().iter().zip(&map.images) {
        let ok = img.terms().iter().all(|t| map.target.context.degree_of(t) % d == u64::from(v.degree) % d);
        if !ok {
            return Ok(WellDefined::DegreeMismatch { generator: v.name.clone(), image: img.clone() });
        }
    }
    for r in map.source.relations() {
        let residue = map.apply_reduced(r)?;
        if !residue.is_zero() {
            return Ok(WellDefined::RelationFails { relation: r.clone(), residue });
        }
    }
    Ok(WellDefined::Yes)
}

/// The order-3 automorphism of the `Q_8` ring at height `s`:
/// `c ↦ x`, `x ↦ c + x + c^{2^{s-1}} x^{2^{s-1}}`, `c_2 ↦ c_2`.
pub fn sigma_q8(s: u32) -> Result<RingMap, InvariantError> {
    let p = Arc::new(build(Family::Q8, s)?);
    let ctx = &p.context;
    let half = 1u32 << (s - 1);
    let c = Poly::var(ctx, "c")?;
    let x = Poly::var(ctx, "x")?;
    let c2 = Poly::var(ctx, "c_2")?;
    let cross = c.pow(half)?.checked_mul(&x.pow(half)?)?;
    let x_image = c.checked_add(&x)?.checked_add(&cross)?;
    RingMap::new(p.clone(), p, vec![x, x_image, c2])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderCheck {
    Exact,
    /// The `n`-th iterate moves this generator.
    NotIdentity { generator: String, image: Poly },
    /// A smaller positive iterate is already the identity.
    SmallerPeriod(u32),
}

impl OrderCheck {
    pub fn holds(&self) -> bool {
        matches!(self, OrderCheck::Exact)
    }
}

/// Whether the endomorphism has exact order `n` on the quotient ring.
pub fn check_order(map: &RingMap, n: u32) -> Result<OrderCheck, InvariantError> {
    if !map.is_endomorphism() {
        return Err(InvariantError::NotEndomorphism);
    }
    let p = &map.target;
    let gens: Vec<Poly> = map.images.iter().map(|_| ()).zip(p.context.vars()).map(|(_, v)| p.var(&v.name)).collect::<Result<_, _>>()?;
    let gens: Vec<Poly> = gens.iter().map(|g| p.normal_form(g)).collect::<Result<_, _>>()?;
    let mut current: Vec<Poly> = map.images.iter().map(|g| p.normal_form(g)).collect::<Result<_, _>>()?;
    for j in 1..=n {
        let moved = current.iter().zip(&gens).position(|(a, b)| a != b);
        match moved {
            None if j < n => return Ok(OrderCheck::SmallerPeriod(j)),
            None => return Ok(OrderCheck::Exact),
            Some(i) if j == n => {
                return Ok(OrderCheck::NotIdentity {
                    generator: p.context.vars()[i].name.clone(),
                    image: current[i].clone(),
                })
            }
            Some(_) => {}
        }
        current = current.iter().map(|g| map.apply_reduced(g)).collect::<Result<_, _>>()?;
    }
    Ok(OrderCheck::Exact)
}

/// Fixed vectors of a finite-rank quotient under an endomorphism.
///
/// The endomorphism only preserves degrees modulo the period, so the fixed
/// space is computed per residue class of the degree modulo
/// `2(2^s - 1)`; each class maps to normal-form representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpace {
    pub by_residue: BTreeMap<u64, Vec<Poly>>,
}

impl InvariantSpace {
    pub fn rank(&self) -> usize {
        self.by_residue.values().map(Vec::len).sum()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Poly> {
        self.by_residue.values().flatten()
    }
}

pub fn invariant_space(p: &PresentationSpec, map: &RingMap) -> Result<InvariantSpace, InvariantError> {
    if !map.is_endomorphism() || *map.target != *p {
        return Err(InvariantError::NotEndomorphism);
    }
    let staircase = match quotient_basis(p.groebner()?, None) {
        Ok(QuotientBasis::Finite(m)) => m,
        Ok(QuotientBasis::TruncatedAt { .. }) | Err(GroebnerError::BoundRequired) => {
            return Err(InvariantError::InfiniteRank)
        }
        Err(e) => return Err(e.into()),
    };
    let ctx = &p.context;
    let d = ctx.period();
    let position: BTreeMap<&Monomial, usize> = staircase.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let width = staircase.len();

    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, m) in staircase.iter().enumerate() {
        classes.entry(ctx.degree_of(m) % d).or_default().push(i);
    }

    let mut by_residue = BTreeMap::new();
    for (residue, members) in classes {
        let columns = members
            .iter()
            .map(|&i| {
                let m = Poly::from_monomial(ctx, staircase[i].clone());
                let moved = map.apply_reduced(&m)?.checked_add(&m)?;
                let mut bits = BitRow::zeros(width);
                for t in moved.terms() {
                    bits.flip(position[t]);
                }
                Ok(bits)
            })
            .collect::<Result<Vec<_>, InvariantError>>()?;
        let kernel = nullspace(&columns);
        let fixed: Vec<Poly> = kernel
            .iter()
            .map(|combo| Poly::from_terms(ctx, combo.ones().map(|j| staircase[members[j]].clone())))
            .collect();
        if !fixed.is_empty() {
            by_residue.insert(residue, fixed);
        }
    }
    Ok(InvariantSpace { by_residue })
}

/// For each element, its expression as a polynomial in the given subring
/// generators modulo the ideal, or `None` if it lies outside that subring.
pub fn express_in_subring(
    p: &PresentationSpec,
    generators: &[(VarSpec, Poly)],
    elements: &[Poly],
) -> Result<Vec<Option<Poly>>, InvariantError> {
    let (vars, images): (Vec<VarSpec>, Vec<Poly>) = generators.iter().cloned().unzip();
    let elim = SubringEliminator::new(&vars, &images, p.ideal()?, &Budget::default())?;
    Ok(elements.iter().map(|e| elim.express(e)).collect::<Result<_, _>>()?)
}

/// Normal forms of `e₁ + c_2^{2^{s-1}}`, `e₂ + c_2^{2^s}` and `e₃`, where `eᵢ`
/// are the elementary symmetric functions of `c`, `x`,
/// `c + x + c^{2^{s-1}} x^{2^{s-1}}` in the `Q_8` ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricResidues {
    pub e1: Poly,
    pub e2: Poly,
    pub e3: Poly,
}

pub fn elementary_symmetric_check(s: u32) -> Result<SymmetricResidues, InvariantError> {
    let sigma = sigma_q8(s)?;
    let p = &sigma.target;
    let a = p.var("c")?;
    let b = p.var("x")?;
    let t = sigma.images[1].clone();
    let c2 = p.var("c_2")?;
    let half = 1u32 << (s - 1);

    let e1 = a.checked_add(&b)?.checked_add(&t)?;
    let e2 = a.checked_mul(&b)?.checked_add(&a.checked_mul(&t)?)?.checked_add(&b.checked_mul(&t)?)?;
    let e3 = a.checked_mul(&b)?.checked_mul(&t)?;
    Ok(SymmetricResidues {
        e1: p.normal_form(&e1.checked_add(&c2.pow(half)?)?)?,
        e2: p.normal_form(&e2.checked_add(&c2.pow(2 * half)?)?)?,
        e3: p.normal_form(&e3)?,
    })
}

/// A GF(2) vector packed into machine words.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Basis of `{λ : Σ λ_j columns[j] = 0}` in reduced row echelon form.
fn nullspace(columns: &[BitRow]) -> Vec<BitRow> {
    let k = columns.len();
    let mut pivots: Vec<(usize, BitRow, BitRow)> = Vec::new();
    let mut kernel: Vec<BitRow> = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = BitRow::zeros(k);
        combo.flip(j);
        for (bit, pv, pc) in &pivots {
            if v.get(*bit) {
                v.xor(pv);
                combo.xor(pc);
            }
        }
        match v.lowest() {
            Some(bit) => {
                for (_, pv, pc) in pivots.iter_mut() {
                    if pv.get(bit) {
                        pv.xor(&v);
                        pc.xor(&combo);
                    }
                }
                pivots.push((bit, v, combo));
            }
            None => kernel.push(combo),
        }
    }
    // Row-reduce the kernel basis so the output does not depend on elimination history.
    let mut rows = kernel;
    let mut reduced: Vec<BitRow> = Vec::new();
    for col in (0..k).rev() {
        let Some(idx) = rows.iter().position(|r| r.get(col)) else { continue };
        let pivot = rows.swap_remove(idx);
        for r in rows.iter_mut().chain(reduced.iter_mut()) {
            if r.get(col) {
                r.xor(&pivot);
            }
        }
        reduced.push(pivot);
    }
    debug_assert!(rows.iter().all(BitRow::is_zero));
    reduced.reverse();
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: &PresentationSpec, s: &str) -> Poly {
        Poly::parse(&p.context, s).unwrap()
    }

    #[test]
    fn sigma_images() {
        let one = sigma_q8(1).unwrap();
        assert_eq!(one.images[0], poly(&one.target, "x"));
        assert_eq!(one.images[1], poly(&one.target, "c + x + c*x"));
        assert_eq!(one.images[2], poly(&one.target, "c_2"));
        let two = sigma_q8(2).unwrap();
        assert_eq!(two.images[1], poly(&two.target, "c + x + c^2*x^2"));
        let three = sigma_q8(3).unwrap();
        assert!(three.images[1].terms().contains(&poly(&three.target, "c^4*x^4").terms()[0]));
    }

    #[test]
    fn well_definedness() {
        let sigma = sigma_q8(1).unwrap();
        assert!(check_well_defined(&sigma).unwrap().holds());
        assert!(check_well_defined(&RingMap::identity(sigma.target.clone())).unwrap().holds());

        let p = sigma.target.clone();
        let p2 = sigma_q8(2).unwrap().target;
        let bad = RingMap::new(p2.clone(), p2.clone(), vec![poly(&p2, "c_2"), poly(&p2, "x"), poly(&p2, "c_2")]).unwrap();
        assert!(matches!(check_well_defined(&bad).unwrap(), WellDefined::DegreeMismatch { ref generator, .. } if generator == "c"));

        let constant = RingMap::new(p.clone(), p.clone(), vec![poly(&p, "1"), poly(&p, "x"), poly(&p, "c_2")]).unwrap();
        assert!(matches!(check_well_defined(&constant).unwrap(), WellDefined::RelationFails { .. }));
    }

    #[test]
    fn orders() {
        assert!(check_order(&sigma_q8(1).unwrap(), 3).unwrap().holds());
        let id = RingMap::identity(Arc::new(build(Family::Q8, 1).unwrap()));
        assert!(check_order(&id, 1).unwrap().holds());
        assert_eq!(check_order(&id, 3).unwrap(), OrderCheck::SmallerPeriod(1));
        match check_order(&sigma_q8(2).unwrap(), 2).unwrap() {
            OrderCheck::NotIdentity { generator, .. } => assert_eq!(generator, "c"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn q8_invariants_at_height_one() {
        let sigma = sigma_q8(1).unwrap();
        let p = sigma.target.clone();
        let inv = invariant_space(&p, &sigma).unwrap();
        assert_eq!(inv.rank(), 3);
        let expected: Vec<Poly> =
            ["1", "c_2", "c_2^2"].iter().map(|s| p.normal_form(&poly(&p, s)).unwrap()).collect();
        let mut got: Vec<Poly> = inv.elements().cloned().collect();
        got.sort_by_key(|g| g.to_string());
        let mut want = expected.clone();
        want.sort_by_key(|g| g.to_string());
        assert_eq!(got, want);

        let all = invariant_space(&p, &RingMap::identity(p.clone())).unwrap();
        assert_eq!(all.rank(), 5);
    }

    #[test]
    fn symmetric_residues_at_height_one() {
        let r = elementary_symmetric_check(1).unwrap();
        assert!(r.e2.is_zero());
        assert!(r.e3.is_zero());
        let p = build(Family::Q8, 1).unwrap();
        assert_eq!(r.e1, p.normal_form(&poly(&p, "c_2 + c_2^2")).unwrap());
        assert!(!r.e1.is_zero());
    }

    #[test]
    fn c2_expressions() {
        let p = build(Family::Q8, 1).unwrap();
        let gens = [(VarSpec::new("t", 4), poly(&p, "c_2"))];
        let out = express_in_subring(&p, &gens, &[poly(&p, "c*x"), poly(&p, "c")]).unwrap();
        assert_eq!(out[0].as_ref().map(|q| q.to_string()), Some("t^2".to_string()));
        assert!(out[1].is_none());
    }

    #[test]
    fn nullspace_small() {
        let mut a = BitRow::zeros(3);
        a.flip(0);
        let b = a.clone();
        let mut c = BitRow::zeros(3);
        c.flip(1);
        let k = nullspace(&[a, b, c]);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones().collect::<Vec<_>>(), vec![0, 1]);
    }
}
