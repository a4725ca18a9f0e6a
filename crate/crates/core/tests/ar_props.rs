mod common;

use std::sync::Arc;

use arknit_core::ar::{almost_split_sequence, classify_component, knit, tau, tau_inv, ArComponent, KnitOptions, Shape};
use arknit_core::hom::iso_test;
use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
use arknit_core::rep::Rep;
use arknit_core::{Error, Rat};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `A_n` with arrow `k` between `k` and `k + 1` pointing right when bit `k`
/// of `bits` is set.
fn oriented_a(n: usize, bits: u8) -> Arc<Quiver> {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (0..n - 1)
        .map(|k| {
            let (s, t) = if bits >> k & 1 == 1 { (k, k + 1) } else { (k + 1, k) };
            (labels[s].clone(), labels[t].clone(), format!("a{k}"))
        })
        .collect();
    build(&labels, &arrows)
}

/// `D_4` with centre `c` and the arm `k` pointing inward when bit `k` is set.
fn oriented_d4(bits: u8) -> Arc<Quiver> {
    let labels: Vec<String> = ["c", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (1..4)
        .map(|k| {
            let (s, t) = if bits >> (k - 1) & 1 == 1 { (k, 0) } else { (0, k) };
            (labels[s].clone(), labels[t].clone(), format!("a{k}"))
        })
        .collect();
    build(&labels, &arrows)
}

fn build(labels: &[String], arrows: &[(String, String, String)]) -> Arc<Quiver> {
    let l: Vec<&str> = labels.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str, &str)> = arrows.iter().map(|(s, t, x)| (s.as_str(), t.as_str(), x.as_str())).collect();
    Quiver::finite(&l, &a).unwrap()
}

fn dims(m: &Rep<Rat>, vs: &[Vertex]) -> Vec<i64> {
    m.dims_on(vs).unwrap().into_iter().map(|d| d as i64).collect()
}

fn audit(c: &ArComponent<Rat>) -> usize {
    assert!(c.taxonomy_holds());
    assert!(c.valuations_symmetric());
    for a in &c.arrows {
        let (s, t) = (&c.vertices[a.src].class, &c.vertices[a.dst].class);
        assert!(s.fc || t.fp);
    }
    let dinf = c.vertices.iter().filter(|v| v.class.doubly_infinite()).count();
    if dinf > 0 || classify_component(c).shape == Shape::Wing {
        assert_eq!(dinf, 1);
    }
    dinf
}

/// Every sequence of a Dynkin component: exact on dimensions, with the sub
/// term the Coxeter translate of the quotient; τ and τ⁻ invert each other.
fn check_dynkin(q: &Arc<Quiver>, count: usize) -> Result<(), TestCaseError> {
    let vs = q.vertices().unwrap();
    let cox = Coxeter::new(q, &vs);
    let seed = Rep::<Rat>::simple(q, vs[0]).unwrap();
    let c = knit(&seed, &KnitOptions { depth: 12, ..Default::default() }).unwrap();
    prop_assert_eq!(c.len(), count, "{}", q.describe());
    prop_assert_eq!(classify_component(&c).shape, Shape::Finite);
    prop_assert!(c.vertices.iter().all(|v| !v.open && v.class.fd()));
    audit(&c);
    let mut sequences = 0;
    for v in &c.vertices {
        let x = &v.rep;
        match almost_split_sequence(x, &b()) {
            Ok(s) => {
                let (l, m, n) = (dims(&s.sub, &vs), dims(&s.middle, &vs), dims(&s.quot, &vs));
                prop_assert_eq!(m, l.iter().zip(&n).map(|(a, b)| a + b).collect::<Vec<_>>());
                prop_assert_eq!(l, cox.phi(&n));
                let t = tau(x, &b()).unwrap();
                prop_assert!(iso_test(&t, &s.sub, &b()).unwrap().is_iso());
                prop_assert!(iso_test(&tau_inv(&t, &b()).unwrap(), x, &b()).unwrap().is_iso());
                sequences += 1;
            }
            Err(Error::TauUndefined(_)) => prop_assert!(v.class.projective),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
    prop_assert_eq!(sequences, count - vs.len());
    Ok(())
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn dynkin_sequences_follow_the_coxeter_map(n in 2..=5usize, bits in any::<u8>()) {
        check_dynkin(&oriented_a(n, bits), n * (n + 1) / 2)?;
    }

    #[test]
    fn d4_sequences_follow_the_coxeter_map(bits in 0..8u8) {
        check_dynkin(&oriented_d4(bits), 12)?;
    }
}

proptest! {
    #![proptest_config(config(30))]

    #[test]
    fn knitted_components_respect_the_taxonomy(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let p = [Preset::Line, Preset::RayIn, Preset::RayOut, Preset::Zigzag][g.gen_range(0..4)];
        let q = Quiver::preset(p);
        let x = match g.gen_range(0..4) {
            0 => Rep::simple(&q, near(&q, &mut g)).unwrap(),
            1 => Rep::projective(&q, near(&q, &mut g)).unwrap(),
            2 => Rep::injective(&q, near(&q, &mut g)).unwrap(),
            _ => short_thin(&q, &mut g),
        };
        let c = knit(&x, &KnitOptions { depth: 3, ..Default::default() }).unwrap();
        prop_assert!(c.find(&x).unwrap().is_some());
        audit(&c);
        for (&i, &j) in &c.tau {
            let back = tau_inv(&c.vertices[j].rep, &b()).unwrap();
            prop_assert!(iso_test(&back, &c.vertices[i].rep, &b()).unwrap().is_iso());
        }
    }
}

#[test]
fn tau_round_trips_on_zigzag_intervals() {
    let q = Quiver::preset(Preset::Zigzag);
    let mut g = ChaCha8Rng::seed_from_u64(7);
    let mut trips = 0;
    for _ in 0..12 {
        let lo = g.gen_range(-4..4);
        let x = Rep::<Rat>::thin(&q, VertexSet::range(Some(lo), Some(lo + g.gen_range(0..4))));
        if let Ok(t) = tau(&x, &b()) {
            assert!(iso_test(&tau_inv(&t, &b()).unwrap(), &x, &b()).unwrap().is_iso());
            trips += 1;
        }
        if let Ok(t) = tau_inv(&x, &b()) {
            assert!(iso_test(&tau(&t, &b()).unwrap(), &x, &b()).unwrap().is_iso());
            trips += 1;
        }
    }
    assert!(trips > 0);
}
