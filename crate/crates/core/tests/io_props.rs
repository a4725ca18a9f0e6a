mod common;

use arknit_core::io::{emit_quiver, emit_rep, parse_json, parse_quiver, parse_rep};
use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
use arknit_core::rep::Rep;
use arknit_core::{Fp, Rat};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn strip(q: &Quiver) -> Vec<Vertex> {
    match q.vertices() {
        Some(all) => all,
        None => (0..=1u8).flat_map(|l| (-8..=8).map(move |i| Vertex::on_lane(l, i))).filter(|&v| q.contains(v)).collect(),
    }
}

fn seeded_spec(g: &mut ChaCha8Rng) -> Rep<Rat> {
    match g.gen_range(0..6) {
        0 => seeded_glue(g),
        1 => {
            let (q, v) = linear(4);
            let i = g.gen_range(1..=4);
            scrambled(&Rep::direct_sum(&q, vec![interval(&q, &v, i, 4), interval(&q, &v, 1, i)]).unwrap(), g)
        }
        2 => {
            let q = Quiver::preset(INFINITE[g.gen_range(0..4)]);
            fc_object(&q, g).dual()
        }
        3 => {
            let q = Quiver::preset(Preset::Zigzag);
            let lo = g.gen_range(-3..3);
            Rep::thin(&q, VertexSet::range(Some(lo), g.gen_bool(0.5).then(|| lo + 3))).restrict(VertexSet::range(Some(lo + 1), None))
        }
        4 => Rep::zero(&Quiver::kronecker()),
        _ => {
            let q = Quiver::preset(INFINITE[g.gen_range(0..4)]);
            fp_object(&q, g)
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn specs_round_trip(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let m = seeded_spec(&mut g);
        let q = m.quiver().clone();
        let qs = emit_quiver(&q);
        let q2 = parse_quiver(&parse_json(&qs.to_string()).unwrap()).unwrap();
        prop_assert_eq!(emit_quiver(&q2), qs);
        let first = emit_rep(&m, &b()).unwrap();
        let back = parse_rep::<Rat>(&q2, &parse_json(&first.to_string()).unwrap()).unwrap();
        let second = emit_rep(&back, &b()).unwrap();
        prop_assert_eq!(&second, &first);
        for v in strip(&q) {
            prop_assert_eq!(back.dim(v).unwrap(), m.dim(v).unwrap());
            for a in q.out_arrows(v) {
                prop_assert_eq!(back.arrow_map(a).unwrap(), m.arrow_map(a).unwrap());
            }
        }
    }
}

#[test]
fn finite_field_specs_reduce_their_entries() {
    let q = parse_quiver(&json!({"preset": "linear_a", "params": {"n": 2}})).unwrap();
    let spec = json!({"explicit": {"dims": {"1": 1, "2": 1}, "maps": {"1->2": [[7]]}}});
    let m = parse_rep::<Fp<5>>(&q, &spec).unwrap();
    let again = emit_rep(&m, &b()).unwrap();
    assert_eq!(again["explicit"]["maps"]["1->2"], json!([[2]]));
    assert_eq!(emit_rep(&parse_rep::<Fp<5>>(&q, &again).unwrap(), &b()).unwrap(), again);
}

#[test]
fn errors_carry_json_pointers() {
    let q = parse_quiver(&json!({"preset": "linear_a", "params": {"n": 3}})).unwrap();
    let cases: Vec<(Value, &str)> = vec![
        (json!({"sum": [{"proj": "1"}, {"inj": "7"}]}), "/sum/1/inj"),
        (json!({"glue": {"sub": {"proj": "1"}, "quot": {"simple": "x"}}}), "/glue/quot/simple"),
        (json!({"explicit": {"dims": {"1": 1, "2": 1}, "maps": {"1->2": [[1, 2]]}}}), "/explicit/maps/1->2"),
        (json!({"thin": {"range": "oops"}}), "/thin"),
        (json!({"proj": "1", "inj": "2"}), "/"),
        (json!({"restrict": {"rep": {"proj": "1"}, "to": 5}}), "/restrict/to"),
    ];
    for (spec, pointer) in cases {
        let e = parse_rep::<Rat>(&q, &spec).unwrap_err().to_string();
        assert!(e.contains(pointer), "{spec} gave {e}");
    }
    let e = parse_quiver(&json!({"preset": "line", "params": {"n": 2}})).unwrap_err().to_string();
    assert!(e.contains('/'), "{e}");
    let e = parse_json("{\n  \"proj\": \n}").unwrap_err().to_string();
    assert!(e.starts_with("malformed input: line 3") || e.contains("line 3"), "{e}");
}

#[test]
fn emission_is_deterministic() {
    let mut outs = Vec::new();
    for _ in 0..3 {
        let mut g = ChaCha8Rng::seed_from_u64(99);
        let specs: Vec<String> = (0..20).map(|_| emit_rep(&seeded_spec(&mut g), &b()).unwrap().to_string()).collect();
        outs.push(specs);
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
}
