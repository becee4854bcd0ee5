use morava_core::invariants::{
    check_order, check_well_defined, elementary_symmetric_check, express_in_subring, invariant_space, sigma_q8,
};
use morava_core::poly::{Poly, VarSpec};
use morava_core::presentations::{build, Family};

#[test]
fn sigma_is_a_well_defined_automorphism_of_order_three() {
    for s in 1..=3 {
        let sigma = sigma_q8(s).unwrap();
        assert!(check_well_defined(&sigma).unwrap().holds(), "s = {s}");
        assert!(check_order(&sigma, 3).unwrap().holds(), "s = {s}");
    }
}

#[test]
fn invariants_are_fixed_and_closed_under_products() {
    for s in 1..=2 {
        let sigma = sigma_q8(s).unwrap();
        let p = sigma.target.clone();
        let inv: Vec<Poly> = invariant_space(&p, &sigma).unwrap().elements().cloned().collect();
        for f in &inv {
            let moved = sigma.apply(f).unwrap().checked_add(f).unwrap();
            assert!(p.normal_form(&moved).unwrap().is_zero(), "{f} is not fixed");
        }
        for a in &inv {
            for b in &inv {
                let prod = p.normal_form(&a.checked_mul(b).unwrap()).unwrap();
                let moved = sigma.apply(&prod).unwrap().checked_add(&prod).unwrap();
                assert!(p.normal_form(&moved).unwrap().is_zero(), "({a})({b}) is not fixed");
            }
        }
    }
}

#[test]
fn invariant_rank_matches_the_tetrahedral_ring() {
    for s in 1..=2 {
        let sigma = sigma_q8(s).unwrap();
        let inv = invariant_space(&sigma.target, &sigma).unwrap();
        let tetra = build(Family::BinaryTetrahedral, s).unwrap();
        assert_eq!(inv.rank(), tetra.rank(None).unwrap().finite().unwrap());
    }
}

#[test]
fn invariants_are_polynomials_in_c2() {
    for s in 1..=2 {
        let sigma = sigma_q8(s).unwrap();
        let p = sigma.target.clone();
        let inv: Vec<Poly> = invariant_space(&p, &sigma).unwrap().elements().cloned().collect();
        let gens = [(VarSpec::new("t", 4), p.var("c_2").unwrap())];
        let expressed = express_in_subring(&p, &gens, &inv).unwrap();
        for (f, e) in inv.iter().zip(&expressed) {
            let e = e.as_ref().unwrap_or_else(|| panic!("{f} is outside the c_2 subring"));
            let back = e.substitute_all(&p.context, &[p.var("c_2").unwrap()]).unwrap();
            assert_eq!(p.normal_form(&back).unwrap(), p.normal_form(f).unwrap());
        }
    }
}

#[test]
fn symmetric_function_residues() {
    for s in 1..=2 {
        let r = elementary_symmetric_check(s).unwrap();
        assert!(r.e2.is_zero(), "s = {s}");
        assert!(r.e3.is_zero(), "s = {s}");
    }
    let p = build(Family::Q8, 1).unwrap();
    let expected = p.normal_form(&Poly::parse(&p.context, "c_2 + c_2^2").unwrap()).unwrap();
    assert_eq!(elementary_symmetric_check(1).unwrap().e1, expected);
}
