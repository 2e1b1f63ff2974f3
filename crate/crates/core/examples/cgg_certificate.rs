//! Deciding congruence preservation by the lcm certificate, compared with a
//! brute-force window check, and the P_n expansion over the tower A_n.

use congrue::cgg::{
    certify_newton, decompose, fn_poly, tower_interval, tower_point, window_oracle,
};
use congrue::newton::{half_square_example, NewtonPoly};
use num_bigint::BigInt;

fn main() {
    let tower: Vec<i64> = (0..7).map(tower_point).collect();
    println!("tower points b_0..b_6: {tower:?}");
    println!("A_5 = {:?}", tower_interval(5));

    let candidates = [
        (
            "C(x, 2)",
            NewtonPoly::new(vec![0.into(), 0.into(), 1.into()]),
        ),
        (
            "2·C(x, 2)",
            NewtonPoly::new(vec![0.into(), 0.into(), 2.into()]),
        ),
        (
            "x²(x-1)²/2",
            NewtonPoly::from_monomial(&half_square_example()).unwrap(),
        ),
        ("f_4", fn_poly(4)),
    ];
    for (name, p) in &candidates {
        println!(
            "{name:>12}: certificate {:5}, window [-30, 30] {:5}",
            certify_newton(p),
            window_oracle(|x| p.eval(x), -30, 30)
        );
    }

    let h = NewtonPoly::from_monomial(&half_square_example()).unwrap();
    let s = decompose(|x| h.eval_i64(x), 6);
    println!("x²(x-1)²/2 on A_6 in the P_n basis: {:?}", s.coeffs());
    println!("  certified: {}", s.certified());
    let agree = (-20..=20).all(|x| s.eval(&BigInt::from(x)) == h.eval_i64(x));
    println!("  series equals the polynomial on [-20, 20]: {agree}");
}
