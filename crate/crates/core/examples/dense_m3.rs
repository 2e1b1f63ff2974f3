//! The Pol/Cong correspondence for unary maps and the search for dense
//! copies of M3 in small partition lattices.

use congrue::eqvlat::{
    cong, find_m3_dense, is_dense, klein_m3, klein_translations, lattice_closure, pol1, SubLattice,
    UnaryAlgebra,
};

fn main() {
    let full3 = SubLattice::full(3).unwrap();
    println!("maps preserving all of Eqv(3): {:?}", pol1(&full3).unwrap());

    let klein = lattice_closure(4, &klein_m3(), true).unwrap();
    let translations = UnaryAlgebra::new(4, klein_translations()).unwrap();
    println!(
        "Cong of Z_2 × Z_2 under translations: {} relations",
        cong(&translations).unwrap().len()
    );
    println!("Klein M3 is dense: {}", is_dense(&klein).unwrap());

    for n in 2..=6 {
        match find_m3_dense(n) {
            Ok(l) => {
                let maps = pol1(&l).unwrap();
                println!(
                    "n = {n}: dense M3 {:?}; {} preserving maps",
                    l.elements(),
                    maps.len()
                );
            }
            Err(e) => println!("n = {n}: {e}"),
        }
    }
}
