use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use morava_core::groebner::{buchberger, Budget, Ideal};
use morava_core::group_oracle::{
    build_group, commuting_tuple_classes, conjugacy_classes, hurwitz_generators, subgroup_index, GroupKind,
};
use morava_core::invariants::{
    check_order, check_well_defined, elementary_symmetric_check, express_in_subring, invariant_space, sigma_q8,
};
use morava_core::poly::{Monomial, MonomialOrder, Poly, RingContext, VarSpec};
use morava_core::presentations::{build, fg_recursion, Family, PresentationSpec};
use morava_core::verifier::{run_suite, ClaimReport, RunConfig, Status, Suite, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_BUDGET: usize = 50_000;
const RANDOM_CHECKS: usize = 1000;
const SEED: u64 = 0x6b5f_7468_656f_7279;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rank(family: Family, s: u32) -> Result<u64, String> {
    let p = build(family, s).map_err(err)?;
    let r = p.rank(None).map_err(err)?;
    r.finite().map(|n| n as u64).ok_or_else(|| format!("{family} at s = {s} has no finite rank"))
}

fn oracle(kind: GroupKind, s: u32) -> Result<u64, String> {
    let g = build_group(kind).map_err(err)?;
    commuting_tuple_classes(&g, s, 2, ORACLE_BUDGET).map_err(err)
}

fn report<'a>(reports: &'a [ClaimReport], id: &str) -> Result<&'a ClaimReport, String> {
    reports.iter().find(|r| r.claim_id == id).ok_or_else(|| format!("missing claim {id}"))
}

fn q8_at_height_one() -> Check {
    let (r, o) = (rank(Family::Q8, 1)?, oracle(GroupKind::Q(1), 1)?);
    ensure(r == 5 && o == 5, format!("rank {r}, oracle {o}, expected 5"))?;
    Ok(format!("rank {r} = oracle {o}"))
}

fn q16_at_height_one() -> Check {
    let r = rank(Family::Quaternion(2), 1)?;
    let classes = conjugacy_classes(&build_group(GroupKind::Q(2)).map_err(err)?).len() as u64;
    ensure(r == 7 && classes == 7, format!("rank {r}, classes {classes}, expected 7"))?;
    Ok(format!("rank {r} = class count {classes}"))
}

fn tetrahedral_ranks() -> Check {
    let mut seen = Vec::new();
    for s in 1..=3u32 {
        let r = rank(Family::BinaryTetrahedral, s)?;
        let closed = ((1u64 << s) + 1) << (s - 1);
        ensure(r == closed, format!("s = {s}: rank {r}, closed form {closed}"))?;
        if s <= 2 {
            let o = oracle(GroupKind::TwoT, s)?;
            ensure(r == o, format!("s = {s}: rank {r}, oracle {o}"))?;
        }
        seen.push(r.to_string());
    }
    Ok(format!("ranks {} match closed form and oracle", seen.join(", ")))
}

fn cyclic_ranks() -> Check {
    for k in 1..=3u32 {
        for s in 1..=3u32 {
            let r = rank(Family::Cyclic(k), s)?;
            ensure(r == 1 << (k * s), format!("k = {k}, s = {s}: rank {r}"))?;
        }
        let o = oracle(GroupKind::Cyclic(k), 1)?;
        ensure(o == 1 << k, format!("k = {k}: oracle {o}"))?;
    }
    Ok("rank 2^(ks) for k, s <= 3; oracle agrees at s = 1".into())
}

fn q8_at_height_two() -> Check {
    let (r, o) = (rank(Family::Q8, 2)?, oracle(GroupKind::Q(1), 2)?);
    ensure(r == o, format!("rank {r}, oracle {o}"))?;
    Ok(format!("rank {r} = oracle {o}"))
}

fn sigma_invariants() -> Check {
    for s in 1..=3 {
        let sigma = sigma_q8(s).map_err(err)?;
        ensure(check_well_defined(&sigma).map_err(err)?.holds(), format!("s = {s}: not well defined"))?;
        ensure(check_order(&sigma, 3).map_err(err)?.holds(), format!("s = {s}: order is not 3"))?;
    }
    let mut ranks = Vec::new();
    for s in 1..=2 {
        let sigma = sigma_q8(s).map_err(err)?;
        let p = sigma.target.clone();
        let inv: Vec<Poly> = invariant_space(&p, &sigma).map_err(err)?.elements().cloned().collect();
        let tetra = rank(Family::BinaryTetrahedral, s)?;
        ensure(inv.len() as u64 == tetra, format!("s = {s}: {} invariants vs rank {tetra}", inv.len()))?;
        let gens = [(VarSpec::new("t", 4), p.var("c_2").map_err(err)?)];
        let expressed = express_in_subring(&p, &gens, &inv).map_err(err)?;
        if let Some((f, _)) = inv.iter().zip(&expressed).find(|(_, e)| e.is_none()) {
            return Err(format!("s = {s}: invariant {f} is not a polynomial in c_2"));
        }
        ranks.push(inv.len().to_string());
    }
    Ok(format!("order 3 for s <= 3; invariant ranks {}; all in GF(2)[c_2]", ranks.join(", ")))
}

fn symmetric_functions() -> Check {
    for s in 1..=2 {
        let r = elementary_symmetric_check(s).map_err(err)?;
        ensure(r.e2.is_zero() && r.e3.is_zero(), format!("s = {s}: e2 -> {}, e3 -> {}", r.e2, r.e3))?;
    }
    let p = build(Family::Q8, 1).map_err(err)?;
    let expected = p.normal_form(&Poly::parse(&p.context, "c_2 + c_2^2").map_err(err)?).map_err(err)?;
    let e1 = elementary_symmetric_check(1).map_err(err)?.e1;
    ensure(e1 == expected && !e1.is_zero(), format!("s = 1: e1 residue {e1}"))?;
    let reports = run_suite(&RunConfig::with_suites([Suite::Invariant])).map_err(err)?;
    for s in 1..=2 {
        let r = report(&reports, &format!("prop1.esym.e1.s={s}"))?;
        ensure(r.status == Status::Recorded && r.witness.is_some(), format!("e1 at s = {s} is {}", r.status))?;
    }
    Ok(format!("e2, e3 vanish; e1 residue at s = 1 is {e1} (recorded)"))
}

fn octahedral_subring() -> Check {
    let cfg = RunConfig { s_max: 1, ..RunConfig::with_suites([Suite::Subring]) };
    let reports = run_suite(&cfg).map_err(err)?;
    let triple = report(&reports, "prop2.subring.s=1")?;
    let o = oracle(GroupKind::TwoO, 1)?;
    let Some(Witness::Integers(w)) = &triple.witness else { return Err("triple has no integer witness".into()) };
    ensure(triple.status == Status::Recorded, format!("status {}", triple.status))?;
    ensure(w.len() == 3 && w[0] == o && w[1] == 4 && w[2] == o, format!("witness {w:?}, oracle {o}"))?;
    Ok(format!("subring rank {} = oracle {o}; presentation rank {} recorded", w[0], w[1]))
}

fn so3_images(o2: &PresentationSpec) -> Result<[Poly; 2], String> {
    let h = 1u32 << (o2.s - 1);
    let v = Poly::parse(&o2.context, &format!("c^2 + c*c_2^{h} + c_2")).map_err(err)?;
    let w = Poly::parse(&o2.context, "c*c_2").map_err(err)?;
    Ok([v, w])
}

fn so3_relations() -> Check {
    for s in 2..=3 {
        let so3 = build(Family::SO3, s).map_err(err)?;
        let o2 = build(Family::O2, s).map_err(err)?;
        let images = so3_images(&o2)?;
        let gb = buchberger(o2.ideal().map_err(err)?, &Budget::truncated(40)).map_err(err)?;
        for rel in so3.relations() {
            let img = rel.substitute_all(&o2.context, &images).map_err(err)?;
            let nf = gb.normal_form(&img).map_err(err)?;
            ensure(nf.is_zero(), format!("s = {s}: {rel} maps to {nf}"))?;
        }
    }
    let pair = fg_recursion(4).map_err(err)?;
    let failure = pair.failure.ok_or("recursion at s = 4 is exact")?;
    let cfg = RunConfig { s_max: 4, ..RunConfig::with_suites([Suite::FgRecursion]) };
    let reports = run_suite(&cfg).map_err(err)?;
    let r = report(&reports, "cor3.recursion.s=4")?;
    ensure(
        r.status == Status::Recorded && r.witness == Some(Witness::Poly(failure.witness.to_string())),
        format!("recursion claim {} with {:?}", r.status, r.witness),
    )?;
    Ok(format!("f_s, g_s vanish for s = 2, 3; s = 4 inexact at step {} (witness {})", failure.step, failure.witness))
}

fn homogeneity() -> Check {
    let mut count = 0;
    for s in 1..=3 {
        let mut fams = vec![Family::Q8, Family::BinaryTetrahedral, Family::BinaryOctahedral, Family::O2, Family::N];
        fams.extend((2..=3).map(Family::Quaternion));
        fams.extend((1..=3).map(Family::Cyclic));
        if s >= 2 {
            fams.push(Family::SO3);
        }
        for f in fams {
            let p = build(f, s).map_err(err)?;
            let d = p.context.period();
            for r in p.relations() {
                ensure(r.homogeneity_check(d).is_homogeneous(), format!("{f} at s = {s}: {r}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} relations homogeneous modulo the period"))
}

fn icosahedral() -> Check {
    let g = build_group(GroupKind::TwoI).map_err(err)?;
    ensure(g.order() == 120, format!("|2I| = {}", g.order()))?;
    let gens: Vec<usize> = hurwitz_generators(5)
        .iter()
        .map(|e| g.index_of(e).ok_or("Hurwitz unit outside 2I"))
        .collect::<Result<_, _>>()?;
    let idx = subgroup_index(&g, &gens).map_err(err)?;
    ensure(idx == 5, format!("index {idx}"))?;
    let (t, i) = (oracle(GroupKind::TwoT, 1)?, oracle(GroupKind::TwoI, 1)?);
    ensure(t == 3 && i == 3, format!("oracle 2T {t}, 2I {i}"))?;
    Ok(format!("|2I| = 120, [2I : 2T] = {idx}, oracle 2T = 2I = {t}"))
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &Arc<RingContext>, max_exp: u32, max_terms: usize) -> Poly {
    let n = rng.gen_range(0..=max_terms);
    Poly::from_terms(
        ctx,
        (0..n).map(|_| Monomial::from((0..ctx.nvars()).map(|_| rng.gen_range(0..=max_exp)).collect::<Vec<u32>>())),
    )
}

fn engine_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool: Vec<PresentationSpec> = [
        (Family::Q8, 1),
        (Family::Q8, 2),
        (Family::Quaternion(2), 1),
        (Family::BinaryOctahedral, 2),
        (Family::O2, 2),
        (Family::SO3, 3),
    ]
    .into_iter()
    .map(|(f, s)| build(f, s).map_err(err))
    .collect::<Result<_, _>>()?;
    for p in &pool {
        p.groebner().map_err(err)?;
    }

    for i in 0..RANDOM_CHECKS {
        let p = &pool[rng.gen_range(0..pool.len())];
        let (f, g) = (random_poly(&mut rng, &p.context, 8, 8), random_poly(&mut rng, &p.context, 8, 8));
        let nf = |x: &Poly| p.normal_form(x).map_err(err);
        ensure(nf(&nf(&f)?)? == nf(&f)?, format!("normal form not idempotent on case {i}: {f}"))?;
        ensure(nf(&f.checked_add(&g).map_err(err)?)? == nf(&f)?.checked_add(&nf(&g)?).map_err(err)?, format!("normal form not linear on case {i}"))?;
    }

    let src = RingContext::new(
        2,
        vec![VarSpec::new("c", 2), VarSpec::new("x", 2), VarSpec::new("c_2", 4)],
        MonomialOrder::DegLex,
    )
    .map_err(err)?;
    for i in 0..RANDOM_CHECKS {
        let (f, g) = (random_poly(&mut rng, &src, 6, 8), random_poly(&mut rng, &src, 6, 8));
        let sum = f.checked_add(&g).map_err(err)?;
        ensure(f.frobenius_square().map_err(err)? == f.checked_mul(&f).map_err(err)?, format!("Frobenius fails on case {i}: {f}"))?;
        ensure(
            sum.frobenius_square().map_err(err)?
                == f.frobenius_square().map_err(err)?.checked_add(&g.frobenius_square().map_err(err)?).map_err(err)?,
            format!("Frobenius is not additive on case {i}"),
        )?;
    }

    let tgt = RingContext::new(2, vec![VarSpec::new("a", 2), VarSpec::new("b", 4)], MonomialOrder::DegLex).map_err(err)?;
    for i in 0..RANDOM_CHECKS {
        let (f, g) = (random_poly(&mut rng, &src, 4, 6), random_poly(&mut rng, &src, 4, 6));
        let images: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, &tgt, 3, 3)).collect();
        let sub = |x: &Poly| x.substitute_all(&tgt, &images).map_err(err);
        let prod = f.checked_mul(&g).map_err(err)?;
        ensure(sub(&prod)? == sub(&f)?.checked_mul(&sub(&g)?).map_err(err)?, format!("substitution not multiplicative on case {i}"))?;
        let sum = f.checked_add(&g).map_err(err)?;
        ensure(sub(&sum)? == sub(&f)?.checked_add(&sub(&g)?).map_err(err)?, format!("substitution not additive on case {i}"))?;
    }

    let small = RingContext::new(
        1,
        vec![VarSpec::new("c", 2), VarSpec::new("x", 2), VarSpec::new("c_2", 4)],
        MonomialOrder::DegLex,
    )
    .map_err(err)?;
    for i in 0..RANDOM_CHECKS {
        let n = rng.gen_range(1..=3);
        let gens: Vec<Poly> =
            (0..n).map(|_| random_poly(&mut rng, &small, 3, 3)).filter(|p| !p.is_zero()).collect();
        if gens.is_empty() {
            continue;
        }
        let gb = buchberger(&Ideal::new(&small, gens.clone()).map_err(err)?, &Budget::default()).map_err(err)?;
        ensure(gb.s_pairs_reduce_to_zero().map_err(err)?, format!("S-pairs do not reduce on case {i}"))?;
        for g in &gens {
            ensure(gb.contains(g).map_err(err)?, format!("generator {g} escapes its basis on case {i}"))?;
        }
    }
    Ok(format!("{RANDOM_CHECKS} cases each: normal form, Frobenius, substitution, S-pairs"))
}

fn deterministic_reports() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_morava-verify"))
            .args(["--suite", "all"])
            .output()
            .map_err(err)
    };
    let (a, b) = (run()?, run()?);
    ensure(!a.stdout.is_empty(), "empty report")?;
    ensure(a.stdout == b.stdout, "reports differ between runs")?;
    Ok(format!("{} bytes, identical across two runs", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Q8 rank equals oracle at s = 1", Duration::from_secs(1), q8_at_height_one),
        ("Q16 rank equals class count at s = 1", Duration::from_secs(1), q16_at_height_one),
        ("binary tetrahedral ranks", Duration::from_secs(60), tetrahedral_ranks),
        ("cyclic ranks", Duration::from_secs(1), cyclic_ranks),
        ("Q8 rank equals oracle at s = 2", Duration::from_secs(60), q8_at_height_two),
        ("order-3 automorphism and its invariants", Duration::from_secs(300), sigma_invariants),
        ("elementary symmetric residues", Duration::from_secs(60), symmetric_functions),
        ("binary octahedral subring", Duration::from_secs(60), octahedral_subring),
        ("SO(3) relations and recursion", Duration::from_secs(300), so3_relations),
        ("periodic homogeneity", Duration::from_secs(1), homogeneity),
        ("binary icosahedral checks", Duration::from_secs(60), icosahedral),
        ("engine property suite", Duration::from_secs(300), engine_properties),
        ("deterministic reports", Duration::from_secs(300), deterministic_reports),
    ];
    let mut failures = 0;
    for (n, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; exceeded {limit:?}")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name}: {detail} ({:.3}s, limit {}s)",
            n + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
