use arknit_core::hom::{
    baer_sum, decompose, end_algebra, ext_space, hom_space, hom_space_via, is_finite_extension, is_radical, iso_test,
    HomRoute, IsoWitness, Ses,
};
use arknit_core::linalg::Mat;
use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
use arknit_core::rep::{Cocycle, Morphism, Rep};
use arknit_core::{Budget, Rat};

fn b() -> Budget {
    Budget::default()
}

fn a3() -> (std::sync::Arc<Quiver>, [Vertex; 3]) {
    let q = Quiver::linear_a(3);
    let v = ["1", "2", "3"].map(|l| q.vertex(l).unwrap());
    (q, v)
}

fn line_glue() -> Rep<Rat> {
    let q = Quiver::preset(Preset::Line);
    let p0 = Rep::projective(&q, Vertex::new(0)).unwrap();
    let i1 = Rep::injective(&q, Vertex::new(1)).unwrap();
    let c = Cocycle::new().with(q.arrow("1->0").unwrap(), Mat::identity(1));
    Rep::glue(&p0, &i1, c).unwrap()
}

#[test]
fn a3_hom_dimensions() {
    let (q, [v1, v2, v3]) = a3();
    let p2 = Rep::<Rat>::projective(&q, v2).unwrap();
    let i1 = Rep::<Rat>::injective(&q, v1).unwrap();
    let i3 = Rep::<Rat>::injective(&q, v3).unwrap();
    assert_eq!(hom_space(&p2, &i3, &b()).unwrap().dim(), 1);
    assert_eq!(hom_space(&p2, &i1, &b()).unwrap().dim(), 0);
    let p1 = Rep::<Rat>::projective(&q, v1).unwrap();
    let h = hom_space(&p2, &p1, &b()).unwrap();
    assert_eq!(h.dim(), 1);
    assert!(h.verify(1).unwrap());
}

#[test]
fn kronecker_hom_between_projectives() {
    let q = Quiver::kronecker();
    let p1 = Rep::<Rat>::projective(&q, q.vertex("1").unwrap()).unwrap();
    let p2 = Rep::<Rat>::projective(&q, q.vertex("2").unwrap()).unwrap();
    assert_eq!(hom_space(&p2, &p1, &b()).unwrap().dim(), 2);
    assert_eq!(hom_space(&p1, &p2, &b()).unwrap().dim(), 0);
}

#[test]
fn line_glue_hom_into_injective() {
    let m = line_glue();
    let q = m.quiver().clone();
    let i1 = Rep::<Rat>::injective(&q, Vertex::new(1)).unwrap();
    let h = hom_space(&m, &i1, &b()).unwrap();
    assert_eq!(h.dim(), 1);
    assert_eq!(h.route, HomRoute::Copresentation);
    let w = hom_space_via(&m, &i1, HomRoute::Window, &b()).unwrap();
    assert_eq!(w.dim(), 1);
    let e = end_algebra(&m, &b()).unwrap();
    assert_eq!(e.dim(), 1);
    assert!(e.is_local);
}

#[test]
fn projective_hom_on_infinite_support() {
    let q = Quiver::preset(Preset::Line);
    let p0 = Rep::<Rat>::projective(&q, Vertex::new(0)).unwrap();
    let pm3 = Rep::<Rat>::projective(&q, Vertex::new(-3)).unwrap();
    let h = hom_space(&pm3, &p0, &b()).unwrap();
    assert_eq!(h.route, HomRoute::Presentation);
    assert_eq!(h.dim(), 1);
    assert_eq!(hom_space(&p0, &pm3, &b()).unwrap().dim(), 0);
    let w = hom_space_via(&pm3, &p0, HomRoute::Window, &b()).unwrap();
    assert_eq!(w.dim(), 1);
}

#[test]
fn endomorphisms_of_sums() {
    let (q, [_, v2, _]) = a3();
    let s = Rep::<Rat>::simple(&q, v2).unwrap();
    let e = end_algebra(&s, &b()).unwrap();
    assert_eq!((e.dim(), e.is_local), (1, true));
    let ss = Rep::direct_sum(&q, vec![s.clone(), s.clone()]).unwrap();
    let e2 = end_algebra(&ss, &b()).unwrap();
    assert_eq!(e2.dim(), 4);
    assert!(!e2.is_local);
    assert!(e2.is_associative());
    assert!(e2.radical.is_empty());
    let d = decompose(&ss, &b()).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].multiplicity, 2);
}

#[test]
fn decompose_glued_square() {
    let (q, [v1, v2, _]) = a3();
    let s = Rep::<Rat>::simple(&q, v2).unwrap();
    let ss = Rep::glue(&s, &s, Cocycle::new()).unwrap();
    let d = decompose(&ss, &b()).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].multiplicity, 2);
    let p1 = Rep::<Rat>::projective(&q, v1).unwrap();
    let m = Rep::direct_sum(&q, vec![p1, s]).unwrap();
    let e = end_algebra(&m, &b()).unwrap();
    assert_eq!(e.dim(), 2);
    let d = decompose(&m, &b()).unwrap();
    assert_eq!(d.len(), 2);
    assert!(d.iter().all(|s| s.multiplicity == 1));
}

#[test]
fn decompose_explicit_sum_by_idempotents() {
    let (q, [v1, v2, v3]) = a3();
    let p2 = Rep::<Rat>::projective(&q, v2).unwrap();
    let i2 = Rep::<Rat>::injective(&q, v2).unwrap();
    let s3 = Rep::<Rat>::simple(&q, v3).unwrap();
    let sum = Rep::direct_sum(&q, vec![p2.clone(), i2.clone(), s3.clone()]).unwrap();
    let arrows = q
        .arrows()
        .unwrap()
        .into_iter()
        .map(|a| (a, sum.arrow_map(a).unwrap()))
        .collect();
    let flat = Rep::explicit(&q, [v1, v2, v3].iter().map(|&v| (v, sum.dim(v).unwrap())).collect(), arrows).unwrap();
    let d = decompose(&flat, &b()).unwrap();
    assert_eq!(d.len(), 3);
    for (s, want) in d.iter().zip([&s3, &p2, &i2]) {
        assert!(iso_test(&s.rep, want, &b()).unwrap().is_iso(), "{:?}", s.rep);
    }
}

#[test]
fn iso_tests() {
    let (q, [v1, _, _]) = a3();
    let p1 = Rep::<Rat>::projective(&q, v1).unwrap();
    let i1 = Rep::<Rat>::injective(&q, v1).unwrap();
    assert!(matches!(iso_test(&p1, &i1, &b()).unwrap(), IsoWitness::DimensionMismatch { .. }));
    assert!(iso_test(&p1, &p1, &b()).unwrap().is_iso());
    let line = Quiver::preset(Preset::Line);
    let allk = Rep::<Rat>::thin(&line, VertexSet::All);
    let r = allk.restrict(VertexSet::range(None, Some(0)));
    let p0 = Rep::<Rat>::projective(&line, Vertex::new(0)).unwrap();
    match iso_test(&r, &p0, &b()).unwrap() {
        IsoWitness::Isomorphic { forward, backward } => {
            let id = forward.then(&backward).unwrap();
            for n in -12..=2 {
                let v = Vertex::new(n);
                assert_eq!(id.at(v).unwrap(), Mat::identity(r.dim(v).unwrap()));
            }
        }
        other => panic!("expected an isomorphism, got {other:?}"),
    }
}

#[test]
fn ext_dimensions() {
    let (q, [v1, v2, _]) = a3();
    let s1 = Rep::<Rat>::simple(&q, v1).unwrap();
    let s2 = Rep::<Rat>::simple(&q, v2).unwrap();
    assert_eq!(ext_space(&s1, &s2, &b()).unwrap().dim(), 1);
    assert_eq!(ext_space(&s2, &s1, &b()).unwrap().dim(), 0);
    let p1 = Rep::<Rat>::projective(&q, v1).unwrap();
    assert_eq!(ext_space(&p1, &s2, &b()).unwrap().dim(), 0);
    let k = Quiver::kronecker();
    let t1 = Rep::<Rat>::simple(&k, k.vertex("1").unwrap()).unwrap();
    let t2 = Rep::<Rat>::simple(&k, k.vertex("2").unwrap()).unwrap();
    let e = ext_space(&t1, &t2, &b()).unwrap();
    assert_eq!(e.dim(), 2);
    for i in 0..2 {
        let mut c = vec![Rat::from_integer(0.into()); 2];
        c[i] = Rat::from_integer(1.into());
        let s = e.ses(&c).unwrap();
        assert!(!s.is_split(&b()).unwrap());
        assert_eq!(s.middle.dim(k.vertex("1").unwrap()).unwrap(), 1);
    }
}

#[test]
fn baer_sum_group_laws() {
    let (q, [v1, v2, _]) = a3();
    let s1 = Rep::<Rat>::simple(&q, v1).unwrap();
    let s2 = Rep::<Rat>::simple(&q, v2).unwrap();
    let e = ext_space(&s1, &s2, &b()).unwrap();
    let s = e.ses(&[Rat::from_integer(1.into())]).unwrap();
    let split = Ses::glue(&s2, &s1, Cocycle::new()).unwrap();
    assert!(split.is_split(&b()).unwrap());
    let t = baer_sum(&s, &split).unwrap();
    assert_eq!(e.coords(t.cocycle.as_ref().unwrap()).unwrap(), e.coords(s.cocycle.as_ref().unwrap()).unwrap());
    let z = baer_sum(&s, &s.negate().unwrap()).unwrap();
    assert!(z.is_split(&b()).unwrap());
}

#[test]
fn radical_morphisms() {
    let (q, [_, v2, v3]) = a3();
    let p2 = Rep::<Rat>::projective(&q, v2).unwrap();
    let p3 = Rep::<Rat>::projective(&q, v3).unwrap();
    let inc = hom_space(&p3, &p2, &b()).unwrap().basis[0].clone();
    assert!(is_radical(&inc, &b()).unwrap());
    assert!(!is_radical(&Morphism::identity(&p2), &b()).unwrap());
}

#[test]
fn ladder_all_ones_is_not_finite() {
    let q = Quiver::preset(Preset::Ladder);
    let m = Rep::<Rat>::thin(&q, VertexSet::All);
    let sub = m.restrict(VertexSet::Range { lane: Some(1), lo: None, hi: None });
    let quot = m.restrict(VertexSet::Range { lane: Some(0), lo: None, hi: None });
    let s = Ses::from_maps(Morphism::restrict_in(&sub).unwrap(), Morphism::restrict_out(&quot).unwrap()).unwrap();
    let r = is_finite_extension(&s, &Budget::new(10, 10, 20)).unwrap();
    assert!(!r.finite);
    assert!(r.growth[1].1 > r.growth[0].1);
    let line = line_glue();
    let g = Ses::from_glued(&line).unwrap();
    let r = is_finite_extension(&g, &b()).unwrap();
    assert!(r.finite);
    assert_eq!(r.witness.len(), 1);
}
