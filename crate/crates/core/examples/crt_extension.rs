//! Chinese remaindering over the integers and extension of finite partial
//! maps to congruence-preserving polynomials.

use congrue::crt::{
    extend_to_polynomial, kaarli_extend, solve, Congruence, CrtError, CrtSystem, PartialMap,
};

fn main() {
    let system: CrtSystem = [(2, 3), (3, 5), (2, 7)]
        .into_iter()
        .map(|(a, r)| Congruence::from_i64(a, r))
        .collect();
    println!("x ≡ 2 (3), 3 (5), 2 (7): {}", solve(&system).unwrap());

    let clash: CrtSystem = [(0, 4), (1, 6)]
        .into_iter()
        .map(|(a, r)| Congruence::from_i64(a, r))
        .collect();
    match solve(&clash) {
        Err(CrtError::Unsolvable(i, j)) => {
            println!("x ≡ 0 (4), 1 (6): constraints {i} and {j} clash")
        }
        other => println!("unexpected: {other:?}"),
    }

    let pm = PartialMap::from([(0, 1), (3, 10)]);
    println!(
        "one more value for {{0 ↦ 1, 3 ↦ 10}} at 1: {}",
        kaarli_extend(&pm, 1).unwrap()
    );

    let s = extend_to_polynomial(&pm).unwrap();
    println!(
        "extension in the P_n basis: {:?} (certified: {})",
        s.coeffs(),
        s.certified()
    );
    let table: Vec<String> = (-4..=4).map(|x| format!("{x}↦{}", s.eval_i64(x))).collect();
    println!("  values: {}", table.join(" "));

    let broken = PartialMap::from([(0, 0), (2, 1)]);
    println!(
        "{{0 ↦ 0, 2 ↦ 1}}: {}",
        extend_to_polynomial(&broken).unwrap_err()
    );
}
