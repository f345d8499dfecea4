//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hnstrata::family::{
    base_change_check, check_semicontinuity, level_set, recursive_stratify, stratify, FamilyError,
    FiniteSpace, SheafFamily,
};
use hnstrata::fixtures::{
    random_family, random_hn_type, random_lattice, random_splitting, splitting_with_total,
};
use hnstrata::hntype::{hnt_leq, validate_hn_type, HnType};
use hnstrata::lattice::{
    hn_closed_form, hn_filtration, hn_type, lattice_from_splitting, oracle, validate_lattice,
    SplittingType,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion<'a> = (
    &'static str,
    Option<Duration>,
    Box<dyn Fn() -> Outcome + 'a>,
);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn shift_closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for _ in 0..1000 {
        let t = random_hn_type(&mut rng, 2, 6);
        match t.quotient_shift() {
            Ok(s) if validate_hn_type(s.polys().to_vec()).is_ok() => {}
            _ => bad += 1,
        }
    }
    outcome(bad == 0, format!("1000 types, {bad} shifts invalid"))
}

fn closed_form_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for _ in 0..500 {
        let s = random_splitting(&mut rng, 8, -5, 5);
        let lattice = hn_filtration(&lattice_from_splitting(&s));
        let closed = hn_closed_form(&s);
        let agree = lattice.as_ref().is_ok_and(|f| {
            f == &closed && f.graded == closed.graded && f.hn_type().ok() == closed.hn_type().ok()
        });
        if !agree {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("500 splitting types, {bad} mismatches"))
}

fn unique_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut bad, mut largest) = (0, 0);
    for _ in 0..200 {
        let l = random_lattice(&mut rng, 64);
        largest = largest.max(l.len());
        if validate_lattice(&l).is_err() {
            bad += 1;
            continue;
        }
        let chains = oracle::admissible_chains(&l);
        let agree = hn_filtration(&l).is_ok_and(|f| {
            chains.len() == 1
                && chains[0]
                    .iter()
                    .map(|&x| l.name(x))
                    .eq(f.steps.iter().map(String::as_str))
        });
        if !agree {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("200 lattices (largest {largest} nodes), {bad} failures"),
    )
}

fn split_type(s: &SplittingType) -> HnType {
    hn_type(&lattice_from_splitting(s)).expect("split bundles have HN types")
}

fn order_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut bad, mut comparable) = (0, 0);
    for _ in 0..300 {
        let rank = rng.gen_range(2..=5);
        let total = rng.gen_range(-4..=4);
        let t: Vec<HnType> = (0..3)
            .map(|_| split_type(&splitting_with_total(&mut rng, rank, total)))
            .collect();
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        if !hnt_leq(a, a) {
            bad += 1;
        }
        if hnt_leq(a, b) && hnt_leq(b, a) && a != b {
            bad += 1;
        }
        if hnt_leq(a, b) && hnt_leq(b, c) && !hnt_leq(a, c) {
            bad += 1;
        }
        if a != b && (hnt_leq(a, b) || hnt_leq(b, a)) {
            comparable += 1;
        }
    }
    outcome(
        bad == 0,
        format!("300 triples ({comparable} strictly comparable pairs), {bad} counterexamples"),
    )
}

fn two_point(generic: &[i64], special: &[i64]) -> SheafFamily {
    let fiber = |d: &[i64]| lattice_from_splitting(&SplittingType::new(d.to_vec()).unwrap());
    SheafFamily::new(
        FiniteSpace::new(vec!["g".into(), "s".into()], &[(0, 1)]),
        vec![fiber(generic), fiber(special)],
    )
    .unwrap()
}

fn jump_family() -> Outcome {
    let jump = check_semicontinuity(&two_point(&[0, 0], &[1, -1]));
    let reversed = check_semicontinuity(&two_point(&[1, -1], &[0, 0]));
    let jump_ok = matches!(jump, Ok(Ok(())));
    let witness_ok = matches!(&reversed, Ok(Err(v)) if v.generic == "g" && v.special == "s");
    outcome(
        jump_ok && witness_ok,
        format!("jump passes: {jump_ok}, reversed witness (g, s): {witness_ok}"),
    )
}

fn families() -> Vec<SheafFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..100).map(|_| random_family(&mut rng, 5, 15)).collect()
}

fn recursion_matches(families: &[SheafFamily]) -> Outcome {
    let (mut checked, mut bad, mut mismatches) = (0, 0, 0);
    for f in families {
        let Ok(strat) = stratify(f) else {
            bad += 1;
            continue;
        };
        for s in &strat.strata {
            checked += 1;
            match recursive_stratify(f, &s.ty) {
                Ok(r) if r == s.points && level_set(f, &s.ty).is_ok_and(|d| d == r) => {}
                Err(FamilyError::InductionMismatch { .. }) => mismatches += 1,
                _ => bad += 1,
            }
        }
    }
    outcome(
        bad == 0 && mismatches == 0,
        format!("100 families, {checked} attained types, {mismatches} induction mismatches, {bad} other failures"),
    )
}

fn base_change(families: &[SheafFamily]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut bad) = (0, 0);
    for f in families {
        let Ok(strat) = stratify(f) else {
            bad += 1;
            continue;
        };
        for _ in 0..3 {
            let subset: BTreeSet<usize> =
                f.space().points().filter(|_| rng.gen_bool(0.5)).collect();
            for ty in strat.types() {
                checked += 1;
                if !base_change_check(f, &subset, ty).is_ok_and(|b| b.holds()) {
                    bad += 1;
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("300 subspaces, {checked} (subspace, type) checks, {bad} failures"),
    )
}

/// Source of the modules holding every order comparison and interpolation path.
const EXACT_PATHS: [(&str, &str); 4] = [
    ("numpoly.rs", include_str!("../src/numpoly.rs")),
    ("hntype.rs", include_str!("../src/hntype.rs")),
    ("lattice.rs", include_str!("../src/lattice.rs")),
    ("family.rs", include_str!("../src/family.rs")),
];

fn exactness() -> Outcome {
    let floats: Vec<&str> = EXACT_PATHS
        .iter()
        .filter(|(_, src)| {
            ["f32", "f64", "as_f", "to_f"]
                .iter()
                .any(|t| src.contains(t))
        })
        .map(|(name, _)| *name)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..500 {
        let t = random_hn_type(&mut rng, 1, 6);
        let poly = t.polygon();
        for v in poly.vertices() {
            if poly.interpolate_at(&v.a).as_ref() != Ok(&v.f) {
                bad += 1;
            }
        }
    }
    outcome(
        floats.is_empty() && bad == 0,
        format!(
            "float tokens in {floats:?}, {bad} inexact vertex interpolations over 500 polygons"
        ),
    )
}

fn main() {
    let families = families();
    let criteria: Vec<Criterion> = vec![
        (
            "shift closure",
            Some(Duration::from_secs(5)),
            Box::new(shift_closure),
        ),
        (
            "closed-form oracle equivalence",
            Some(Duration::from_secs(30)),
            Box::new(closed_form_equivalence),
        ),
        (
            "unique admissible chain",
            Some(Duration::from_secs(60)),
            Box::new(unique_chain),
        ),
        ("partial order axioms", None, Box::new(order_axioms)),
        ("semicontinuity fixture", None, Box::new(jump_family)),
        (
            "recursive stratification",
            None,
            Box::new(|| recursion_matches(&families)),
        ),
        ("base change", None, Box::new(|| base_change(&families))),
        ("exactness", None, Box::new(exactness)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        let budget = limit
            .map(|l| format!(" / {}s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "{} criterion {}: {name}: {} [{:.2?}{budget}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed,
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
