//! Sublattices of the partition lattice: distributivity, commuting
//! relations and the Chinese remainder condition.

use congrue::eqvlat::{
    all_commute, congruences_of_zm, crc_counterexample, is_arithmetical, is_distributive, klein_m3,
    lattice_closure, Partition, SubLattice,
};

fn report(name: &str, l: &SubLattice) {
    println!(
        "{name}: {} members, distributive {}, commuting {}, arithmetical {}",
        l.len(),
        is_distributive(l),
        all_commute(l),
        is_arithmetical(l)
    );
    match crc_counterexample(l) {
        None => println!("  Chinese remainder condition holds"),
        Some(cx) => {
            for (p, a) in cx {
                println!("  x ≡ {a} modulo {p:?}");
            }
            println!("  is pairwise solvable but has no common solution");
        }
    }
}

fn main() {
    let z12 = congruences_of_zm(12).unwrap();
    report("Cong(Z_12)", &z12);

    let k = lattice_closure(4, &klein_m3(), true).unwrap();
    report("Klein four-group M3", &k);

    let p = Partition::from_blocks(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
    let q = Partition::from_blocks(4, &[vec![0], vec![1, 2], vec![3]]).unwrap();
    println!("{p:?} ∨ {q:?} = {:?}", p.join(&q));
    println!("{p:?} and {q:?} commute: {}", p.commutes(&q));
    let l = lattice_closure(4, &[p, q], true).unwrap();
    report("closure of two overlapping pairs", &l);
}
