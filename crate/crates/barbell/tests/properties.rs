//! Property suites for the algebraic layers: free-group word laws, ring laws
//! on the polynomial algebras, reduction invariants and rank-nullity.

use barbell::exactla::{SparseMatrix, SparseVec};
use barbell::freeword::{parse_reduced, parse_word, Gen, ReducedWord};
use barbell::groupalg::{
    invert_both_m1, rat, MonomialM1, MonomialM2, PolyM1, PolyM2, Rational, SlotWord,
};
use barbell::hexagon::hexagon_m1;
use proptest::prelude::*;

fn gen_strategy() -> impl Strategy<Value = Gen> {
    prop_oneof![Just(Gen::B), Just(Gen::R), Just(Gen::T), Just(Gen::U)]
}

fn word_strategy() -> impl Strategy<Value = ReducedWord> {
    proptest::collection::vec((gen_strategy(), -4i64..=4), 0..10)
        .prop_map(ReducedWord::from_syllables)
}

fn slot_strategy() -> impl Strategy<Value = SlotWord> {
    proptest::collection::vec((prop_oneof![Just(Gen::T), Just(Gen::U)], -3i64..=3), 0..6)
        .prop_map(|syls| SlotWord::new(ReducedWord::from_syllables(syls)).unwrap())
}

/// True when reducing the junction of `a . b` ever brings two syllables of
/// generator `g` face to face (a merge or cancellation that changes crossing
/// counts). Full cancellations of other generators cascade inward.
fn junction_touches(a: &ReducedWord, b: &ReducedWord, g: Gen) -> bool {
    let left = a.syllables();
    let right = b.syllables();
    let mut i = left.len();
    let mut j = 0;
    while i > 0 && j < right.len() {
        let (ga, ea) = left[i - 1];
        let (gb, eb) = right[j];
        if ga != gb {
            return false;
        }
        if ga == g {
            return true;
        }
        if ea + eb == 0 {
            i -= 1;
            j += 1;
        } else {
            return false;
        }
    }
    false
}

fn poly_m1_strategy() -> impl Strategy<Value = PolyM1> {
    proptest::collection::vec(((-6i64..=6, -6i64..=6), -5i64..=5), 0..8).prop_map(|terms| {
        let mut p = PolyM1::zero();
        for ((a, b), c) in terms {
            p.add_term(MonomialM1::new(a, b), rat(c));
        }
        p
    })
}

fn poly_m2_strategy() -> impl Strategy<Value = PolyM2> {
    proptest::collection::vec((slot_strategy(), slot_strategy(), -5i64..=5), 0..6).prop_map(
        |terms| {
            let mut p = PolyM2::zero();
            for (nu, mu, c) in terms {
                p.add_term(MonomialM2::new(nu, mu), rat(c));
            }
            p
        },
    )
}

proptest! {
    #[test]
    fn print_parse_is_identity(w in word_strategy()) {
        let printed = w.to_string();
        prop_assert_eq!(parse_reduced(&printed).unwrap(), w);
    }

    #[test]
    fn barbell_parse_is_idempotent(w in word_strategy()) {
        // parsing the printed form of a normalized word returns it unchanged
        let b = parse_word(&w.to_string(), 2).unwrap();
        let again = parse_word(&b.to_string(), 2).unwrap();
        prop_assert_eq!(&again, &b);
    }

    #[test]
    fn invert_is_involutive_antihomomorphism(a in word_strategy(), b in word_strategy()) {
        prop_assert_eq!(a.invert().invert(), a.clone());
        prop_assert_eq!(a.concat(&b).invert(), b.invert().concat(&a.invert()));
    }

    #[test]
    fn words_stay_reduced(a in word_strategy(), b in word_strategy()) {
        let c = a.concat(&b);
        for pair in c.syllables().windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
        prop_assert!(c.syllables().iter().all(|(_, e)| *e != 0));
    }

    #[test]
    fn crossing_count_additive_without_boundary_merge(a in word_strategy(), b in word_strategy()) {
        // m=1 restriction: drop u syllables
        let strip = |w: &ReducedWord| ReducedWord::from_syllables(
            w.syllables().iter().copied().filter(|(g, _)| *g != Gen::U));
        let a = strip(&a);
        let b = strip(&b);
        if !junction_touches(&a, &b, Gen::T) {
            let count = |w: &ReducedWord| -> u64 {
                w.syllables().iter().filter(|(g, _)| *g == Gen::T).map(|(_, e)| e.unsigned_abs()).sum()
            };
            prop_assert_eq!(count(&a.concat(&b)), count(&a) + count(&b));
        }
    }

    #[test]
    fn m2_crossing_count_additive_without_u_merge(a in word_strategy(), b in word_strategy()) {
        // u-excursions cross the neck disk twice each; counts add unless a
        // u-block merges across the boundary
        let strip = |w: &ReducedWord| ReducedWord::from_syllables(
            w.syllables().iter().copied().filter(|(g, _)| !g.is_cuff()));
        let a = strip(&a);
        let b = strip(&b);
        if !junction_touches(&a, &b, Gen::U) {
            let count = |w: &ReducedWord| 2 * w.count_syllables_of(Gen::U) as u64;
            prop_assert_eq!(count(&a.concat(&b)), count(&a) + count(&b));
        }
    }

    #[test]
    fn ring_laws_m1(p in poly_m1_strategy(), q in poly_m1_strategy(), r in poly_m1_strategy()) {
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&PolyM1::one()), p.clone());
        prop_assert!(p.add(&p.neg()).is_zero());
    }

    #[test]
    fn ring_laws_m2(p in poly_m2_strategy(), q in poly_m2_strategy(), r in poly_m2_strategy()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&PolyM2::one()), p.clone());
    }

    #[test]
    fn m2_monomial_mul_stays_reduced(a in slot_strategy(), b in slot_strategy()) {
        let prod = a.mul(&b);
        for pair in prod.word().syllables().windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
        prop_assert!(prod.word().syllables().iter().all(|(_, e)| *e != 0));
    }

    #[test]
    fn invert_both_maps_relations_into_relations(alpha in -20i64..=20, beta in -20i64..=20) {
        prop_assert_eq!(invert_both_m1(&hexagon_m1(alpha, beta)), hexagon_m1(-alpha, -beta));
    }

    #[test]
    fn json_roundtrip_m1(p in poly_m1_strategy()) {
        let js = barbell::groupalg::poly_to_json(&p);
        let back: PolyM1 = barbell::groupalg::poly_from_json(&js).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn json_roundtrip_m2(p in poly_m2_strategy()) {
        let js = barbell::groupalg::poly_to_json(&p);
        let back: PolyM2 = barbell::groupalg::poly_from_json(&js).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rank_nullity(entries in proptest::collection::vec(
        proptest::collection::vec((0usize..6, -4i64..=4), 0..6), 1..8)) {
        let rows: Vec<SparseVec> = entries
            .iter()
            .map(|row| SparseVec::from_entries(row.iter().map(|&(ix, c)| (ix, rat(c)))))
            .collect();
        let m = SparseMatrix::from_rows(rows);
        prop_assert_eq!(m.rank() + m.nullspace().len(), m.num_rows());
    }

    #[test]
    fn membership_reevaluates_exactly(coeffs in proptest::collection::vec(-5i64..=5, 3)) {
        let gens = vec![
            SparseVec::from_entries([(0, rat(1)), (1, rat(2))]),
            SparseVec::from_entries([(1, rat(-1)), (2, rat(1))]),
            SparseVec::from_entries([(0, rat(3)), (2, rat(5))]),
        ];
        let mut target = SparseVec::new();
        for (c, g) in coeffs.iter().zip(&gens) {
            target.axpy(&rat(*c), g);
        }
        let sol = barbell::exactla::solve_membership(&target, &gens).unwrap();
        let mut acc = SparseVec::new();
        for (c, g) in sol.iter().zip(&gens) {
            acc.axpy(c, g);
        }
        acc.axpy(&-Rational::from_integer(1.into()), &target);
        prop_assert!(acc.is_zero());
    }
}
