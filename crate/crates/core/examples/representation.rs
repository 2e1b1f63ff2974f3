//! Finite distributive lattices as lattices of contraction-stable
//! equivalences of their own metric spaces, and systems of equivalences as
//! spaces over a power set.

use congrue::eqvlat::Partition;
use congrue::ultra::{
    lattices_of_size, representation, representation_check, space_system, system_space, EqSystem,
    FiniteSemilattice,
};

fn main() {
    for (name, v) in [
        ("3-chain", FiniteSemilattice::chain(3)),
        ("Boolean algebra on 2 atoms", FiniteSemilattice::boolean(2)),
        ("divisors of 12", FiniteSemilattice::divisors(12)),
    ] {
        let rep = representation(&v).unwrap();
        println!("{name}: representable {}", rep.holds());
        for (x, &i) in rep.isomorphism.as_ref().unwrap().iter().enumerate() {
            println!("  {x} ↦ {:?}", rep.congruences.elements()[i]);
        }
    }

    let mut total = 0;
    for m in 1..=7 {
        for v in lattices_of_size(m)
            .into_iter()
            .filter(|v| v.is_distributive())
        {
            assert!(representation_check(&v).unwrap());
            total += 1;
        }
    }
    println!("all {total} distributive lattices with at most 7 elements are represented");
    println!(
        "M3: {}",
        representation_check(&FiniteSemilattice::m3()).unwrap_err()
    );

    let system = EqSystem::new(
        4,
        vec![
            Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap(),
            Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap(),
        ],
    )
    .unwrap();
    let s = system_space(&system).unwrap();
    println!(
        "space of two relations over the power set of {{0, 1}}: {:?}",
        s.table()
    );
    println!(
        "  separated {}, round trip {}",
        s.is_separated(),
        space_system(&s).unwrap() == system
    );
}
