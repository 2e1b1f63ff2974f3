//! Integer-valued polynomials in the binomial basis.

use congrue::newton::{binom, half_square_example, lcm_upto, MonomialPoly, NewtonPoly};
use num_bigint::BigInt;

fn main() {
    println!("C(5, 2) = {}", binom(&BigInt::from(5), 2));
    println!("C(-1, 3) = {}", binom(&BigInt::from(-1), 3));

    let values: Vec<BigInt> = [1, 2, 4].into_iter().map(BigInt::from).collect();
    let p = NewtonPoly::from_values(&values);
    println!("interpolating 1, 2, 4: coefficients {:?}", p.coeffs());
    println!("  value at 10: {}", p.eval_i64(10));

    let q = half_square_example();
    let h = NewtonPoly::from_monomial(&q).expect("x²(x-1)²/2 is integer-valued");
    println!("x²(x-1)²/2 in the binomial basis: {:?}", h.coeffs());
    let monomial: Vec<String> = h
        .to_monomial()
        .coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect();
    println!("  back to monomials: [{}]", monomial.join(", "));

    let half_x = MonomialPoly::from_integers([0, 1]).divide(2);
    match NewtonPoly::from_monomial(&half_x) {
        Ok(_) => println!("x/2 is integer-valued?!"),
        Err(e) => println!("x/2: {e}"),
    }

    let lcms: Vec<String> = (0..=10).map(|n| lcm_upto(n).to_string()).collect();
    println!("lcm(0..=10): {}", lcms.join(", "));
}
