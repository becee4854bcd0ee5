use morava_core::presentations::{build, kappa, two_power_series, Family, PresentationDump};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn families(m_max: u32, k_max: u32) -> Vec<Family> {
    let mut f = vec![
        Family::Q8,
        Family::BinaryTetrahedral,
        Family::BinaryOctahedral,
        Family::O2,
        Family::N,
        Family::SO3,
    ];
    f.extend((2..=m_max).map(Family::Quaternion));
    f.extend((1..=k_max).map(Family::Cyclic));
    f
}

#[test]
fn every_relation_is_periodically_homogeneous() {
    for s in 1..=4 {
        for family in families(3, 3) {
            if family == Family::SO3 && s == 1 {
                continue;
            }
            let p = build(family, s).unwrap();
            assert_eq!(p.inhomogeneous_relation(), None, "{family} at s = {s}");
        }
    }
}

#[test]
fn cyclic_rank_is_a_power_of_two() {
    for k in 1..=3 {
        for s in 1..=3 {
            let p = build(Family::Cyclic(k), s).unwrap();
            let (_, u) = two_power_series(k, s).unwrap();
            let r = p.rank(None).unwrap().finite().unwrap() as u64;
            assert_eq!(r, u);
            assert_eq!(r, 1 << (k * s));
        }
    }
}

#[test]
fn tetrahedral_rank_closed_form() {
    for s in 1..=3u32 {
        let r = build(Family::BinaryTetrahedral, s).unwrap().rank(None).unwrap().finite().unwrap();
        assert_eq!(r, ((1usize << s) + 1) << (s - 1));
    }
}

#[test]
fn n_is_octahedral_without_truncation() {
    for s in 1..=10 {
        let n = build(Family::N, s).unwrap();
        let o = build(Family::BinaryOctahedral, s).unwrap();
        let truncation = o.var("c_2").unwrap().pow(((1 << s) + 1) << (s - 1)).unwrap();
        let without: Vec<_> = o.relations().iter().filter(|r| **r != truncation).cloned().collect();
        assert_eq!(without.len(), o.relations().len() - 1);
        assert_eq!(n.relations(), without.as_slice());
    }
}

#[test]
fn dumps_round_trip_for_every_family() {
    for s in 1..=3 {
        for family in families(3, 3) {
            let Ok(p) = build(family, s) else { continue };
            let text = morava_core::presentations::write_dump(&p);
            let back: PresentationDump = text.parse().unwrap();
            assert_eq!(back.family, family);
            assert_eq!(back.s, s);
            assert_eq!(back.relations, p.relations());
        }
    }
}

#[test]
fn ranks_match_hand_counts() {
    let cases = [
        (Family::Q8, 1, 5),
        (Family::Quaternion(2), 1, 7),
        (Family::BinaryOctahedral, 1, 4),
        (Family::Cyclic(2), 1, 4),
    ];
    for (f, s, r) in cases {
        assert_eq!(build(f, s).unwrap().rank(None).unwrap().finite(), Some(r), "{f}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { rng_seed: RngSeed::Fixed(0x6d6f7261), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kappa_is_a_geometric_sum(m in 1u32..=6, s in 1u32..=6) {
        let k = kappa(m, s).unwrap();
        prop_assert_eq!(k * ((1u64 << s) - 1), (1u64 << (m * s)) - 1);
    }
}
