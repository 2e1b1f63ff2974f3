use congrue::eqvlat::{is_distributive, Partition};
use congrue::ultra::{
    dv_space, dvee_space, lattices_of_size, residual, residual_table, space_system, system_space,
    EqSystem, FiniteSemilattice, UltraSpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spaces(v: &FiniteSemilattice, n: usize) -> Vec<UltraSpace> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let m = v.size();
    (0..m.pow(pairs.len() as u32))
        .filter_map(|code| {
            let mut d = vec![vec![0; n]; n];
            let mut c = code;
            for &(x, y) in &pairs {
                d[x][y] = c % m;
                d[y][x] = c % m;
                c /= m;
            }
            let s = UltraSpace::new(v.clone(), d).unwrap();
            s.verify_axioms().is_valid().then_some(s)
        })
        .collect()
}

fn distributive_upto(m: usize) -> Vec<FiniteSemilattice> {
    (1..=m)
        .flat_map(lattices_of_size)
        .filter(|v| v.is_distributive())
        .collect()
}

#[test]
fn residuation_triangle() {
    for v in distributive_upto(7) {
        let res = residual_table(&v).unwrap();
        for x in 0..v.size() {
            for y in 0..v.size() {
                for z in 0..v.size() {
                    assert!(v.leq(res[x][y], v.join(res[x][z], res[z][y])));
                }
                if v.leq(x, y) {
                    assert_eq!(residual(&v, x, y), Ok(0));
                }
            }
        }
    }
}

#[test]
fn metrics_measure_from_zero() {
    for v in distributive_upto(6) {
        let (dv, dvee) = (dv_space(&v).unwrap(), dvee_space(&v));
        for x in 0..v.size() {
            assert_eq!(dv.distance(0, x), x);
            assert_eq!(dvee.distance(0, x), x);
        }
        assert!(dv.is_separated() && dvee.is_separated());
    }
}

#[test]
fn distributive_metric_spaces_are_hyperconvex() {
    for v in distributive_upto(7) {
        assert!(
            dv_space(&v).unwrap().is_hyperconvex(),
            "{:?}",
            v.order_table()
        );
    }
}

/// Hyperconvex exactly when convex with a distributive sublattice of
/// relations `≡_r`; in that case every contraction-stable partition is a
/// join of such relations.
#[test]
fn hyperconvexity_through_eq_d() {
    for v in (1..=5).flat_map(lattices_of_size) {
        for n in 1..=4 {
            for s in spaces(&v, n) {
                let shadow =
                    s.is_convex() && s.eq_d_sublattice().is_some_and(|l| is_distributive(&l));
                assert_eq!(s.is_hyperconvex(), shadow, "{:?}", s.table());
                if s.is_hyperconvex() {
                    let eq = s.eq_d();
                    for c in s.cong_d().unwrap().elements() {
                        let j = eq
                            .iter()
                            .filter(|p| p.refines(c))
                            .fold(Partition::discrete(n), |acc, p| acc.join(p));
                        assert_eq!(&j, c);
                    }
                }
            }
        }
    }
}

#[test]
fn systems_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let relations: Vec<Partition> = (0..3)
            .map(|_| {
                let labels: Vec<usize> = (0..4).map(|_| rng.gen_range(0..4)).collect();
                Partition::from_labels(&labels)
            })
            .collect();
        let meet = relations.iter().fold(Partition::full(4), |a, p| a.meet(p));
        let m = EqSystem::new(4, relations).unwrap();
        let s = system_space(&m).unwrap();
        assert!(s.verify_axioms().is_valid());
        assert_eq!(s.is_separated(), meet.is_discrete());
        let back = space_system(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(system_space(&back).unwrap().table(), s.table());
    }
}

#[test]
fn embeddings_are_isometric() {
    for v in distributive_upto(5) {
        for n in 1..=3 {
            for s in spaces(&v, n) {
                let coords = s.isometric_embed().unwrap();
                assert_eq!(coords.len(), n);
            }
        }
    }
    // three points over the four-element Boolean algebra
    let b = FiniteSemilattice::boolean(2);
    let s = UltraSpace::new(b, vec![vec![0, 1, 3], vec![1, 0, 3], vec![3, 3, 0]]).unwrap();
    assert!(s.verify_axioms().is_valid());
    assert!(s.isometric_embed().is_ok());
}

#[test]
fn lattice_enumeration_is_up_to_isomorphism() {
    for m in 1..=6 {
        let ls = lattices_of_size(m);
        for (i, a) in ls.iter().enumerate() {
            assert_eq!(a.size(), m);
            for b in &ls[i + 1..] {
                assert!(a.isomorphism(b).is_none());
            }
        }
    }
}
