//! Ultrametric spaces over finite lattices: residuals, the two canonical
//! metrics, balls, hyperconvexity and contractions.

use congrue::ultra::{
    dv_space, dvee_space, is_residuated, lattices_of_size, residual, FiniteSemilattice,
};

fn main() {
    let b = FiniteSemilattice::boolean(2);
    println!("residuals in the Boolean algebra on {{p, q}} (elements are bit masks):");
    for x in 0..4 {
        let row: Vec<usize> = (0..4).map(|y| residual(&b, x, y).unwrap()).collect();
        println!("  {x} ∖ y = {row:?}");
    }

    let d12 = FiniteSemilattice::divisors(12);
    let s = dv_space(&d12).unwrap();
    println!("d_V on the divisors of 12 (1, 2, 3, 4, 6, 12):");
    for row in s.table() {
        println!("  {row:?}");
    }
    println!("  axioms: {:?}", s.verify_axioms());
    println!("  ball around 2 of radius 3: {:?}", s.ball_points(1, 2));
    println!(
        "  {} distinct balls, hyperconvex {}",
        s.distinct_balls().len(),
        s.is_hyperconvex()
    );
    println!("  {} contractions", s.contractions().unwrap().len());
    println!("  Eq_d: {:?}", s.eq_d());

    let m3 = FiniteSemilattice::m3();
    let big = dvee_space(&m3);
    println!(
        "M3 residuated: {}; its d_∨ space is hyperconvex: {}",
        is_residuated(&m3),
        big.is_hyperconvex()
    );
    if let Some(family) = big.helly_counterexample() {
        println!("  pairwise meeting balls with empty intersection: {family:?}");
    }

    for m in 1..=7 {
        let all = lattices_of_size(m);
        let res = all.iter().filter(|v| is_residuated(v)).count();
        println!("lattices of size {m}: {}, residuated {res}", all.len());
    }
}
