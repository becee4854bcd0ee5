use std::sync::Arc;

use crate::poly::{Monomial, MonomialOrder, Poly, RingContext, VarSpec};

use super::{buchberger, Budget, GroebnerBasis, GroebnerError, Ideal};

/// Kernel of `GF(2)[new_vars] → target / I`, as a Gröbner basis in `context`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPresentation {
    pub new_vars: Vec<VarSpec>,
    pub context: Arc<RingContext>,
    pub kernel_gens: Vec<Poly>,
    /// Set when the elimination was degree-truncated: the generators are only
    /// complete below this degree.
    pub verified_below: Option<u64>,
}

impl KernelPresentation {
    pub fn ideal(&self) -> Result<Ideal, GroebnerError> {
        Ideal::new(&self.context, self.kernel_gens.clone())
    }
}

/// Elimination setup for a subring `GF(2)[images] ⊆ target / I`.
///
/// The working ring has the target variables followed by one fresh variable
/// per image, under a block order that eliminates the target variables. Its
/// Gröbner basis answers both kernel and subring-membership questions.
#[derive(Clone, Debug)]
pub struct SubringEliminator {
    target: Arc<RingContext>,
    source: Arc<RingContext>,
    source_vars: Vec<VarSpec>,
    work: Arc<RingContext>,
    gb: GroebnerBasis,
}

impl SubringEliminator {
    pub fn new(
        source_vars: &[VarSpec],
        images: &[Poly],
        ideal: &Ideal,
        budget: &Budget,
    ) -> Result<Self, GroebnerError> {
        if source_vars.len() != images.len() {
            return Err(crate::poly::PolyError::InvalidContext(format!(
                "{} source variables but {} images",
                source_vars.len(),
                images.len()
            ))
            .into());
        }
        let target = ideal.context().clone();
        if images.iter().any(|p| p.context() != &target) {
            return Err(GroebnerError::ContextMismatch);
        }
        let source = RingContext::new(target.s(), source_vars.to_vec(), MonomialOrder::DegLex)?;

        let mut vars = target.vars().to_vec();
        for v in source_vars {
            let mut name = format!("{}'", v.name);
            while vars.iter().any(|w| w.name == name) {
                name.push('\'');
            }
            vars.push(VarSpec::new(name, v.degree));
        }
        let work = RingContext::new(target.s(), vars, MonomialOrder::Elimination { eliminated: target.nvars() })?;

        let mut gens: Vec<Poly> = ideal.generators().iter().map(|g| lift(&work, g, 0)).collect();
        for (j, img) in images.iter().enumerate() {
            let y = Poly::from_monomial(&work, Monomial::var(work.nvars(), target.nvars() + j, 1));
            let g = y.checked_add(&lift(&work, img, 0))?;
            if !g.is_zero() {
                gens.push(g);
            }
        }
        let gb = buchberger(&Ideal::new(&work, gens)?, budget)?;
        Ok(SubringEliminator { target, source, source_vars: source_vars.to_vec(), work, gb })
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn source_context(&self) -> &Arc<RingContext> {
        &self.source
    }

    pub fn kernel(&self) -> KernelPresentation {
        let n = self.target.nvars();
        let kernel_gens = self
            .gb
            .elements()
            .iter()
            .filter(|g| (0..n).all(|i| !g.uses_var(i)))
            .map(|g| self.project(g))
            .collect();
        KernelPresentation {
            new_vars: self.source_vars.clone(),
            context: self.source.clone(),
            kernel_gens,
            verified_below: self.gb.truncated_at(),
        }
    }

    /// Writes `p` (a target polynomial) as a polynomial in the images, modulo
    /// the ideal, or returns `None` when it lies outside the subring.
    pub fn express(&self, p: &Poly) -> Result<Option<Poly>, GroebnerError> {
        if p.context() != &self.target {
            return Err(GroebnerError::ContextMismatch);
        }
        let nf = self.gb.normal_form(&lift(&self.work, p, 0))?;
        let n = self.target.nvars();
        if (0..n).any(|i| nf.uses_var(i)) {
            return Ok(None);
        }
        Ok(Some(self.project(&nf)))
    }

    fn project(&self, g: &Poly) -> Poly {
        let n = self.target.nvars();
        Poly::from_terms(&self.source, g.terms().iter().map(|t| Monomial::from(t.exponents()[n..].to_vec())))
    }
}

/// Embeds `p` into `work`, placing its variables starting at `offset`.
fn lift(work: &Arc<RingContext>, p: &Poly, offset: usize) -> Poly {
    let n = work.nvars();
    Poly::from_terms(
        work,
        p.terms().iter().map(|t| {
            let mut e = vec![0u32; n];
            e[offset..offset + t.len()].copy_from_slice(t.exponents());
            Monomial::from(e)
        }),
    )
}

/// Kernel of the map sending `source_vars[j]` to `images[j]` in the quotient by `ideal`.
pub fn kernel_of_map(
    source_vars: &[VarSpec],
    images: &[Poly],
    ideal: &Ideal,
    budget: &Budget,
) -> Result<KernelPresentation, GroebnerError> {
    Ok(SubringEliminator::new(source_vars, images, ideal, budget)?.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_image_has_full_kernel() {
        let k = RingContext::new(1, vec![VarSpec::new("c", 2)], MonomialOrder::DegLex).unwrap();
        let ideal = Ideal::new(&k, vec![Poly::parse(&k, "c^2").unwrap()]).unwrap();
        let ker = kernel_of_map(&[VarSpec::new("y", 2)], &[Poly::zero(&k)], &ideal, &Budget::default()).unwrap();
        let shown: Vec<String> = ker.kernel_gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["y"]);
    }

    #[test]
    fn membership_in_generated_subring() {
        let k = RingContext::new(1, vec![VarSpec::new("c", 2), VarSpec::new("c_2", 4)], MonomialOrder::DegLex)
            .unwrap();
        let ideal = Ideal::new(&k, vec![Poly::parse(&k, "c^2").unwrap(), Poly::parse(&k, "c_2^3").unwrap()]).unwrap();
        let elim =
            SubringEliminator::new(&[VarSpec::new("t", 4)], &[Poly::parse(&k, "c_2").unwrap()], &ideal, &Budget::default())
                .unwrap();
        let inside = elim.express(&Poly::parse(&k, "c_2^2 + 1").unwrap()).unwrap().unwrap();
        assert_eq!(inside.to_string(), "t^2 + 1");
        assert!(elim.express(&Poly::parse(&k, "c").unwrap()).unwrap().is_none());
        let ker: Vec<String> = elim.kernel().kernel_gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(ker, ["t^3"]);
    }
}
