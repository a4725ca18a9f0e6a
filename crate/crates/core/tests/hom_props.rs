mod common;

use std::collections::BTreeSet;

use arknit_core::hom::{
    baer_sum, end_algebra, ext_space, hom_space, hom_space_via, is_finite_extension, HomRoute, Ses,
};
use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
use arknit_core::rep::{Morphism, Rep};
use arknit_core::structure::classify_membership;
use arknit_core::{Budget, Rat};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rrep_object(q: &std::sync::Arc<Quiver>, g: &mut ChaCha8Rng) -> Rep<Rat> {
    match g.gen_range(0..4) {
        0 => fp_object(q, g),
        1 => fc_object(q, g),
        2 => {
            let (s, t) = (fp_object(q, g), fc_object(q, g));
            let c = finite_cocycle(&s, &t, g);
            Rep::glue(&s, &t, c).unwrap()
        }
        _ => short_thin(q, g),
    }
}

fn strip(q: &Quiver, r: i64) -> Vec<Vertex> {
    match q.vertices() {
        Some(all) => all,
        None => (0..=1u8).flat_map(|l| (-r..=r).map(move |i| Vertex::on_lane(l, i))).filter(|&v| q.contains(v)).collect(),
    }
}

/// `(arrows x → y with x ∈ supp N, y ∈ supp L and M(α) ≠ 0, arrows with
/// M(α) ≠ 0 but L(α) = N(α) = 0)` on an index strip.
fn criteria(s: &Ses<Rat>, r: i64) -> (usize, usize) {
    let q = s.middle.quiver();
    let vs: BTreeSet<Vertex> = strip(q, r).into_iter().collect();
    let mut out = (0, 0);
    for &x in &vs {
        for a in q.out_arrows(x).into_iter().filter(|a| vs.contains(&a.dst)) {
            if s.middle.arrow_map(a).unwrap().is_zero() {
                continue;
            }
            out.0 += (s.quot.dim(a.src).unwrap() > 0 && s.sub.dim(a.dst).unwrap() > 0) as usize;
            out.1 += (s.sub.arrow_map(a).unwrap().is_zero() && s.quot.arrow_map(a).unwrap().is_zero()) as usize;
        }
    }
    out
}

fn seeded_sequence(g: &mut ChaCha8Rng) -> Ses<Rat> {
    let split = |m: &Rep<Rat>, sub: VertexSet, quot: VertexSet| {
        let (l, n) = (m.restrict(sub), m.restrict(quot));
        Ses::from_maps(Morphism::restrict_in(&l).unwrap(), Morphism::restrict_out(&n).unwrap()).unwrap()
    };
    match g.gen_range(0..3) {
        0 => {
            let q = Quiver::preset(INFINITE[g.gen_range(0..4)]);
            let (s, t) = (fp_object(&q, g), fc_object(&q, g));
            let c = finite_cocycle(&s, &t, g);
            Ses::glue(&s, &t, c).unwrap()
        }
        1 => {
            let q = Quiver::preset(Preset::Ladder);
            let lo = g.gen_range(0..3);
            let hi = g.gen_bool(0.5).then(|| lo + g.gen_range(0..4));
            let lane = |l: u8| VertexSet::Range { lane: Some(l), lo: None, hi: None };
            let m = Rep::thin(&q, lane(1).union(&VertexSet::Range { lane: Some(0), lo: Some(lo), hi }));
            split(&m, lane(1), lane(0))
        }
        _ => {
            let q = Quiver::preset(Preset::Zigzag);
            let lo = g.gen_range(0..4);
            let hi = g.gen_bool(0.5).then(|| lo + g.gen_range(1..6));
            let m = Rep::thin(&q, VertexSet::range(Some(lo), hi));
            let even = VertexSet::oracle(|v| v.index % 2 == 0, "even");
            split(&m, even.clone(), even.complement())
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn hom_routes_agree(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let q = Quiver::preset(INFINITE[g.gen_range(0..4)]);
        let m = rrep_object(&q, &mut g);
        let n = rrep_object(&q, &mut g);
        let auto = hom_space(&m, &n, &b()).unwrap();
        let window = hom_space_via(&m, &n, HomRoute::Window, &b()).unwrap();
        prop_assert_eq!(auto.dim(), window.dim(), "{} -> {}", m.describe(), n.describe());
        prop_assert!(auto.verify(1).unwrap());
        if classify_membership(&m, &b()).unwrap().verdict == arknit_core::structure::Verdict::Fp {
            let p = hom_space_via(&m, &n, HomRoute::Presentation, &b()).unwrap();
            prop_assert_eq!(p.dim(), window.dim());
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn arrow_criterion_matches_the_definition(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let s = seeded_sequence(&mut g);
        let (l10, d10) = criteria(&s, 10);
        let (l20, d20) = criteria(&s, 20);
        prop_assert_eq!(l10 == l20, d10 == d20);
        let r = is_finite_extension(&s, &Budget::new(10, 10, 20)).unwrap();
        prop_assert_eq!(r.finite, l10 == l20);
        if r.finite {
            prop_assert!(r.definitional);
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn finite_classes_form_a_subgroup(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let q = Quiver::preset([Preset::Line, Preset::RayIn, Preset::Ladder][g.gen_range(0..3)]);
        let quot = short_thin(&q, &mut g);
        let sub = Rep::direct_sum(&q, vec![short_thin(&q, &mut g), short_thin(&q, &mut g)]).unwrap();
        let e = ext_space(&quot, &sub, &b()).unwrap();
        prop_assume!(e.dim() > 0);
        let c1: Vec<Rat> = (0..e.dim()).map(|_| rat(g.gen_range(-2..=2))).collect();
        let c2: Vec<Rat> = (0..e.dim()).map(|_| rat(g.gen_range(-2..=2))).collect();
        let (s1, s2) = (e.ses(&c1).unwrap(), e.ses(&c2).unwrap());
        let sum = baer_sum(&s1, &s2).unwrap();
        prop_assert!(is_finite_extension(&sum, &b()).unwrap().finite);
        let neg = s1.negate().unwrap();
        prop_assert!(is_finite_extension(&neg, &b()).unwrap().finite);
        prop_assert!(baer_sum(&s1, &neg).unwrap().is_split(&b()).unwrap());
        let want: Vec<Rat> = c1.iter().zip(&c2).map(|(x, y)| x + y).collect();
        prop_assert_eq!(e.coords(sum.cocycle.as_ref().unwrap()).unwrap(), want);
    }
}

#[test]
fn bounded_presets_have_only_finite_extensions() {
    let mut classes = 0;
    for p in [Preset::Line, Preset::RayIn, Preset::RayOut, Preset::Zigzag] {
        let q = Quiver::preset(p);
        assert!(q.ray_info().path_bound.is_some());
        let mut g = ChaCha8Rng::seed_from_u64(p as u64);
        for _ in 0..6 {
            let quot = fc_object(&q, &mut g);
            let sub = fp_object(&q, &mut g);
            let e = ext_space(&quot, &sub, &b()).unwrap();
            for i in 0..e.dim() {
                let coeffs: Vec<Rat> = (0..e.dim()).map(|j| rat((i == j) as i64)).collect();
                assert!(is_finite_extension(&e.ses(&coeffs).unwrap(), &b()).unwrap().finite);
                classes += 1;
            }
        }
    }
    assert!(classes > 0);
    let ladder = Quiver::preset(Preset::Ladder);
    assert_eq!(ladder.ray_info().path_bound, None);
    let quot = Rep::<Rat>::injective(&ladder, Vertex::on_lane(0, 0)).unwrap();
    let sub = Rep::<Rat>::projective(&ladder, Vertex::on_lane(1, 0)).unwrap();
    let m = Rep::<Rat>::thin(&ladder, VertexSet::All);
    let lane = |l: u8| VertexSet::Range { lane: Some(l), lo: None, hi: None };
    let (l, n) = (m.restrict(lane(1)), m.restrict(lane(0)));
    let s = Ses::from_maps(Morphism::restrict_in(&l).unwrap(), Morphism::restrict_out(&n).unwrap()).unwrap();
    assert!(arknit_core::hom::iso_test(&s.sub, &sub, &b()).unwrap().is_iso());
    assert!(arknit_core::hom::iso_test(&s.quot, &quot, &b()).unwrap().is_iso());
    assert!(!is_finite_extension(&s, &Budget::new(10, 10, 20)).unwrap().finite);
}

#[test]
fn a4_endomorphism_algebras() {
    let (q, v) = linear(4);
    let mut g = ChaCha8Rng::seed_from_u64(44);
    let mut all = Vec::new();
    for i in 1..=4 {
        for j in i..=4 {
            all.push(interval(&q, &v, i, j));
        }
    }
    for m in &all {
        for x in [m.clone(), scrambled(m, &mut g)] {
            let e = end_algebra(&x, &b()).unwrap();
            assert!(e.is_local && e.is_associative());
        }
    }
    for _ in 0..10 {
        let parts: Vec<Rep<Rat>> = (0..3).map(|_| all[g.gen_range(0..all.len())].clone()).collect();
        let m = scrambled(&Rep::direct_sum(&q, parts).unwrap(), &mut g);
        let e = end_algebra(&m, &b()).unwrap();
        assert!(e.is_associative());
        assert!(!e.is_local);
        for r in &e.radical {
            assert!(e.is_nilpotent(r));
            for k in 0..e.dim() {
                let basis: Vec<Rat> = (0..e.dim()).map(|j| rat((j == k) as i64)).collect();
                assert!(e.in_radical(&e.mul(r, &basis)) && e.in_radical(&e.mul(&basis, r)));
            }
        }
    }
    assert_eq!(all.len(), 10);
}
