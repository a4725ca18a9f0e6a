use arknit_core::linalg::Mat;
use arknit_core::{Field, Rat, F5};
use proptest::prelude::*;

fn matrix<F: Field>(rows: usize, cols: usize, entries: &[(i64, i64)]) -> Mat<F> {
    Mat::from_fn(rows, cols, |i, j| {
        let (n, d) = entries[(i * cols + j) % entries.len()];
        F::from_i64(n) / F::from_i64(d)
    })
}

fn entries(zero_bias: bool) -> impl Strategy<Value = Vec<(i64, i64)>> {
    let den = if zero_bias { 1..2i64 } else { 1..4i64 };
    prop::collection::vec((prop_oneof![3 => Just(0i64), 7 => -4..=4i64], den), 64)
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    (1..=8usize, 1..=8usize)
}

fn check_rectangular<F: Field>(a: &Mat<F>, x: &[F]) {
    let k = a.kernel();
    assert_eq!(a.rank() + k.cols(), a.cols());
    assert!(a.rank() <= a.rows().min(a.cols()));
    assert!(a.mul(&k).is_zero());
    let b = a.apply(x);
    let y = a.solve(&b).expect("consistent system");
    assert_eq!(a.apply(&y), b);
    let coker = a.left_kernel();
    assert_eq!(coker.rows(), a.rows() - a.rank());
    assert!(coker.mul(a).is_zero());
    assert_eq!(a.image().cols(), a.rank());
}

fn check_square<F: Field>(a: &Mat<F>) {
    let n = a.rows();
    let p = a.min_poly();
    assert!(p.eval_mat(a).is_zero());
    let d = p.degree().unwrap();
    assert!(d >= 1 && d <= n);
    let powers: Vec<Vec<F>> = (0..d as u32).map(|e| a.pow(e).vectorize()).collect();
    assert_eq!(Mat::from_columns(n * n, &powers).rank(), d, "a lower-degree polynomial annihilates");
    let (ker, im) = a.fitting();
    assert_eq!(ker.cols() + im.cols(), n);
    let both = Mat::hstack(&[&ker, &im], n);
    assert!(both.is_invertible());
    assert!(ker.solve_mat(&a.mul(&ker)).is_some());
    assert!(im.solve_mat(&a.mul(&im)).is_some());
    if let Some(inv) = a.inverse() {
        assert_eq!(a.mul(&inv), Mat::identity(n));
        assert_eq!(ker.cols(), 0);
    } else {
        assert!(a.rank() < n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rationals((r, c) in shapes(), e in entries(false), x in prop::collection::vec(-3..=3i64, 8)) {
        let a: Mat<Rat> = matrix(r, c, &e);
        let x: Vec<Rat> = x[..c].iter().map(|&v| Rat::from_i64(v)).collect();
        check_rectangular(&a, &x);
        let s: Mat<Rat> = matrix(r, r, &e);
        check_square(&s);
    }

    #[test]
    fn five_element_field((r, c) in shapes(), e in entries(true), x in prop::collection::vec(0..5i64, 8)) {
        let a: Mat<F5> = matrix(r, c, &e);
        let x: Vec<F5> = x[..c].iter().map(|&v| F5::from_i64(v)).collect();
        check_rectangular(&a, &x);
        let s: Mat<F5> = matrix(c, c, &e);
        check_square(&s);
    }
}
