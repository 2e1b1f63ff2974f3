//! Ultrametric spaces whose distances take values in a finite
//! join-semilattice with least element.
//!
//! A finite join-semilattice with `0` is a lattice, so every value set here
//! carries order, join and meet tables. Spaces are distance tables over such
//! a value set; balls are bit masks, so a space has at most 64 points.
//!
//! On finite lattices "completely meet-distributive" is plain
//! distributivity, which is the form used throughout.

use std::collections::HashSet;

use thiserror::Error;

use crate::eqvlat::{
    cong_of_maps, is_arithmetical, preserving_maps, EqvError, Partition, Relation, SelfMap,
    SubLattice, MAX_ENUM_CARRIER,
};

/// Largest index set for [`system_space`].
pub const MAX_INDEX_SET: usize = 5;
/// Largest value lattice accepted by [`representation_check`].
pub const MAX_REPRESENTATION: usize = 7;
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UltraError {
    #[error("invalid semilattice: {0}")]
    InvalidSemilattice(String),
    #[error("invalid distance table: {0}")]
    InvalidSpace(String),
    #[error("no residual for ({0}, {1})")]
    NotResiduated(usize, usize),
    #[error("value lattice is not distributive")]
    NotDistributive,
    #[error("value lattice is not a power set")]
    NotPowerset,
    #[error("index set of size {size} exceeds {limit}")]
    IndexTooLarge { size: usize, limit: usize },
    #[error("embedding is not isometric at ({0}, {1})")]
    NotIsometric(usize, usize),
    #[error("least congruence routes disagree at ({0}, {1})")]
    Inconsistent(usize, usize),
    #[error(transparent)]
    Eqv(#[from] EqvError),
}

fn guard(size: usize, limit: usize) -> Result<(), UltraError> {
    if size > limit {
        Err(EqvError::CarrierTooLarge { size, limit }.into())
    } else {
        Ok(())
    }
}

/// Finite join-semilattice with least element `0`, stored as dense tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemilattice {
    order: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl FiniteSemilattice {
    /// Builds the tables from `order[x][y] = (x ≤ y)`. Element 0 must be the
    /// least element and every pair must have a least upper bound.
    pub fn from_order(order: Vec<Vec<bool>>) -> Result<Self, UltraError> {
        let m = order.len();
        let bad = |msg: String| Err(UltraError::InvalidSemilattice(msg));
        if m == 0 {
            return bad("empty carrier".into());
        }
        if order.iter().any(|row| row.len() != m) {
            return bad("order table is not square".into());
        }
        for x in 0..m {
            if !order[x][x] {
                return bad(format!("order is not reflexive at {x}"));
            }
            if !order[0][x] {
                return bad(format!("0 is not below {x}"));
            }
            for y in 0..m {
                if x != y && order[x][y] && order[y][x] {
                    return bad(format!("order is not antisymmetric at ({x}, {y})"));
                }
                for z in 0..m {
                    if order[x][y] && order[y][z] && !order[x][z] {
                        return bad(format!("order is not transitive at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        let lub = |x: usize, y: usize, up: bool| -> Option<usize> {
            let bounds: Vec<usize> = (0..m)
                .filter(|&z| {
                    if up {
                        order[x][z] && order[y][z]
                    } else {
                        order[z][x] && order[z][y]
                    }
                })
                .collect();
            bounds.iter().copied().find(|&b| {
                bounds
                    .iter()
                    .all(|&c| if up { order[b][c] } else { order[c][b] })
            })
        };
        let mut join = vec![vec![0; m]; m];
        let mut meet = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                join[x][y] = match lub(x, y, true) {
                    Some(j) => j,
                    None => return bad(format!("no join for ({x}, {y})")),
                };
                meet[x][y] = match lub(x, y, false) {
                    Some(j) => j,
                    None => return bad(format!("no meet for ({x}, {y})")),
                };
            }
        }
        Ok(FiniteSemilattice { order, join, meet })
    }

    /// Like [`from_order`](Self::from_order), additionally checking supplied
    /// operation tables against the order.
    pub fn from_tables(
        order: Vec<Vec<bool>>,
        join: Option<Vec<Vec<usize>>>,
        meet: Option<Vec<Vec<usize>>>,
    ) -> Result<Self, UltraError> {
        let v = FiniteSemilattice::from_order(order)?;
        if join.is_some_and(|j| j != v.join) {
            return Err(UltraError::InvalidSemilattice(
                "join table is not the least upper bound".into(),
            ));
        }
        if meet.is_some_and(|m| m != v.meet) {
            return Err(UltraError::InvalidSemilattice(
                "meet table is not the greatest lower bound".into(),
            ));
        }
        Ok(v)
    }

    fn from_leq(m: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let order = (0..m)
            .map(|x| (0..m).map(|y| leq(x, y)).collect())
            .collect();
        FiniteSemilattice::from_order(order).expect("built-in lattice is valid")
    }

    /// `0 < 1 < … < m-1`.
    pub fn chain(m: usize) -> Self {
        FiniteSemilattice::from_leq(m, |x, y| x <= y)
    }

    /// Subsets of a `k`-element set; element `s` is the bit mask `s`.
    pub fn boolean(k: usize) -> Self {
        FiniteSemilattice::from_leq(1 << k, |x, y| x & y == x)
    }

    /// Divisors of `m` ordered by divisibility, listed in increasing order
    /// (so `1` is element 0).
    pub fn divisors(m: usize) -> Self {
        let divs: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
        FiniteSemilattice::from_leq(divs.len(), |x, y| divs[y] % divs[x] == 0)
    }

    /// `0 < a, b, c < 1` with `a, b, c` pairwise incomparable.
    pub fn m3() -> Self {
        FiniteSemilattice::from_leq(5, |x, y| x == y || x == 0 || y == 4)
    }

    /// `0 < a < b < 1`, `0 < c < 1`.
    pub fn n5() -> Self {
        FiniteSemilattice::from_leq(5, |x, y| x == y || x == 0 || y == 4 || (x == 1 && y == 2))
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn order_table(&self) -> &[Vec<bool>] {
        &self.order
    }

    pub fn join_table(&self) -> &[Vec<usize>] {
        &self.join
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        (0..self.size()).fold(0, |acc, x| self.join(acc, x))
    }

    pub fn is_distributive(&self) -> bool {
        let m = self.size();
        (0..m).all(|x| {
            (0..m).all(|y| {
                (0..m).all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    /// An order isomorphism onto `other`, if any.
    pub fn isomorphism(&self, other: &FiniteSemilattice) -> Option<Vec<usize>> {
        order_isomorphism(
            self.size(),
            |x, y| self.leq(x, y),
            other.size(),
            |x, y| other.leq(x, y),
        )
    }
}

/// Backtracking search for a bijection `f` with `a(x, y) ⇔ b(f x, f y)`.
pub fn order_isomorphism(
    n: usize,
    a: impl Fn(usize, usize) -> bool,
    m: usize,
    b: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if n != m {
        return None;
    }
    let down = |leq: &dyn Fn(usize, usize) -> bool, x: usize| (0..n).filter(|&y| leq(y, x)).count();
    let up = |leq: &dyn Fn(usize, usize) -> bool, x: usize| (0..n).filter(|&y| leq(x, y)).count();
    let sig_a: Vec<(usize, usize)> = (0..n).map(|x| (down(&a, x), up(&a, x))).collect();
    let sig_b: Vec<(usize, usize)> = (0..n).map(|x| (down(&b, x), up(&b, x))).collect();
    // only elements with equal up- and down-set sizes can correspond
    let fits: Vec<Vec<bool>> = sig_a
        .iter()
        .map(|sa| sig_b.iter().map(|sb| sa == sb).collect())
        .collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        x: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        fits: &[Vec<bool>],
        a: &dyn Fn(usize, usize) -> bool,
        b: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let n = map.len();
        if x == n {
            return true;
        }
        for y in 0..n {
            if used[y] || !fits[x][y] {
                continue;
            }
            let consistent = (0..x).all(|w| a(w, x) == b(map[w], y) && a(x, w) == b(y, map[w]));
            if consistent {
                map[x] = y;
                used[y] = true;
                if rec(x + 1, map, used, fits, a, b) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    if rec(0, &mut map, &mut used, &fits, &a, &b) {
        Some(map)
    } else {
        None
    }
}

/// All lattices with `m` elements up to isomorphism, each labelled with
/// `0` as least element and `m - 1` as greatest.
pub fn lattices_of_size(m: usize) -> Vec<FiniteSemilattice> {
    if m == 0 {
        return Vec::new();
    }
    if m <= 2 {
        return vec![FiniteSemilattice::chain(m)];
    }
    // Every finite poset has a linear extension, so it suffices to take
    // x < y only for x < y as integers.
    let mids: Vec<(usize, usize)> = (1..m - 1)
        .flat_map(|x| (x + 1..m - 1).map(move |y| (x, y)))
        .collect();
    let perms = permutations(m - 2);
    let mut seen: HashSet<Vec<Vec<bool>>> = HashSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1 << mids.len()) {
        let mut order = vec![vec![false; m]; m];
        for x in 0..m {
            order[x][x] = true;
            order[0][x] = true;
            order[x][m - 1] = true;
        }
        for (i, &(x, y)) in mids.iter().enumerate() {
            if bits >> i & 1 == 1 {
                order[x][y] = true;
            }
        }
        let Ok(v) = FiniteSemilattice::from_order(order) else {
            continue;
        };
        let canon = perms
            .iter()
            .map(|p| {
                let relabel = |x: usize| {
                    if x == 0 || x == m - 1 {
                        x
                    } else {
                        p[x - 1] + 1
                    }
                };
                let mut t = vec![vec![false; m]; m];
                for x in 0..m {
                    for y in 0..m {
                        t[relabel(x)][relabel(y)] = v.leq(x, y);
                    }
                }
                t
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(canon) {
            out.push(v);
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// `x ∖ y`: the least `z` with `x ≤ y ∨ z`.
pub fn residual(v: &FiniteSemilattice, x: usize, y: usize) -> Result<usize, UltraError> {
    let candidates: Vec<usize> = (0..v.size()).filter(|&z| v.leq(x, v.join(y, z))).collect();
    candidates
        .iter()
        .copied()
        .find(|&z| candidates.iter().all(|&w| v.leq(z, w)))
        .ok_or(UltraError::NotResiduated(x, y))
}

pub fn is_residuated(v: &FiniteSemilattice) -> bool {
    residual_table(v).is_ok()
}

pub fn residual_table(v: &FiniteSemilattice) -> Result<Vec<Vec<usize>>, UltraError> {
    (0..v.size())
        .map(|x| (0..v.size()).map(|y| residual(v, x, y)).collect())
        .collect()
}

/// `d_V(x, y) = (x ∖ y) ∨ (y ∖ x)` on the elements of `V`.
pub fn dv_space(v: &FiniteSemilattice) -> Result<UltraSpace, UltraError> {
    let res = residual_table(v)?;
    let m = v.size();
    let d = (0..m)
        .map(|x| (0..m).map(|y| v.join(res[x][y], res[y][x])).collect())
        .collect();
    UltraSpace::new(v.clone(), d)
}

/// `d_∨(x, y) = x ∨ y` for `x ≠ y`, and `0` on the diagonal.
pub fn dvee_space(v: &FiniteSemilattice) -> UltraSpace {
    let m = v.size();
    let d = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| if x == y { 0 } else { v.join(x, y) })
                .collect()
        })
        .collect();
    UltraSpace::new(v.clone(), d).expect("table is square with valid entries")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomViolation {
    /// `d(x, x) ≠ 0`
    Reflexivity(usize),
    /// `d(x, y) ≠ d(y, x)`
    Symmetry(usize, usize),
    /// `d(x, y) ≰ d(x, z) ∨ d(z, y)`
    Triangle(usize, usize, usize),
}

/// Outcome of [`UltraSpace::verify_axioms`]. Separation is reported, not
/// required: pre-ultrametric spaces are valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub separated: bool,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Points `0..n` with a distance table into a value lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UltraSpace {
    values: FiniteSemilattice,
    d: Vec<Vec<usize>>,
}

impl UltraSpace {
    /// Checks only the table shape; see [`verify_axioms`](Self::verify_axioms).
    pub fn new(values: FiniteSemilattice, d: Vec<Vec<usize>>) -> Result<Self, UltraError> {
        let n = d.len();
        if n == 0 {
            return Err(UltraError::InvalidSpace("no points".into()));
        }
        if n > MAX_POINTS {
            return Err(UltraError::InvalidSpace(format!(
                "{n} points exceed the limit {MAX_POINTS}"
            )));
        }
        if d.iter().any(|row| row.len() != n) {
            return Err(UltraError::InvalidSpace(
                "distance table is not square".into(),
            ));
        }
        if let Some(&bad) = d.iter().flatten().find(|&&v| v >= values.size()) {
            return Err(UltraError::InvalidSpace(format!(
                "distance {bad} is not an element of the value lattice"
            )));
        }
        Ok(UltraSpace { values, d })
    }

    pub fn points(&self) -> usize {
        self.d.len()
    }

    pub fn values(&self) -> &FiniteSemilattice {
        &self.values
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.d[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.d
    }

    pub fn is_separated(&self) -> bool {
        (0..self.points()).all(|x| (0..self.points()).all(|y| x == y || self.d[x][y] != 0))
    }

    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.points();
        let v = &self.values;
        let mut violations = Vec::new();
        for x in 0..n {
            if self.d[x][x] != 0 {
                violations.push(AxiomViolation::Reflexivity(x));
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if self.d[x][y] != self.d[y][x] {
                    violations.push(AxiomViolation::Symmetry(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !v.leq(self.d[x][y], v.join(self.d[x][z], self.d[z][y])) {
                        violations.push(AxiomViolation::Triangle(x, y, z));
                    }
                }
            }
        }
        AxiomReport {
            violations,
            separated: self.is_separated(),
        }
    }

    /// `B(a, r)` as a bit mask.
    pub fn ball(&self, a: usize, r: usize) -> u64 {
        (0..self.points())
            .filter(|&x| self.values.leq(self.d[a][x], r))
            .fold(0, |m, x| m | 1 << x)
    }

    pub fn ball_points(&self, a: usize, r: usize) -> Vec<usize> {
        mask_points(self.ball(a, r))
    }

    /// Distinct closed balls, sorted.
    pub fn distinct_balls(&self) -> Vec<u64> {
        let mut balls: Vec<u64> = (0..self.points())
            .flat_map(|a| (0..self.values.size()).map(move |r| (a, r)))
            .map(|(a, r)| self.ball(a, r))
            .collect();
        balls.sort_unstable();
        balls.dedup();
        balls
    }

    /// `d(a, a') ≤ r ∨ r'` forces `B(a, r) ∩ B(a', r') ≠ ∅`.
    pub fn is_convex(&self) -> bool {
        let (n, m) = (self.points(), self.values.size());
        let balls: Vec<Vec<u64>> = (0..n)
            .map(|a| (0..m).map(|r| self.ball(a, r)).collect())
            .collect();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..m).all(|r| {
                    (0..m).all(|s| {
                        !self.values.leq(self.d[a][b], self.values.join(r, s))
                            || balls[a][r] & balls[b][s] != 0
                    })
                })
            })
        })
    }

    /// A pairwise intersecting family of balls with empty intersection.
    pub fn helly_counterexample(&self) -> Option<Vec<u64>> {
        let balls = self.distinct_balls();
        let k = balls.len();
        let compat: Vec<Bits> = (0..k)
            .map(|i| Bits::from_iter(k, (0..k).filter(|&j| balls[i] & balls[j] != 0)))
            .collect();
        let mut memo: HashSet<(u64, Bits)> = HashSet::new();
        let mut chosen = Vec::new();
        let all = Bits::from_iter(k, 0..k);
        let full = if self.points() == 64 {
            u64::MAX
        } else {
            (1u64 << self.points()) - 1
        };
        if helly_search(&balls, &compat, all, full, &mut chosen, &mut memo) {
            Some(chosen.into_iter().map(|i| balls[i]).collect())
        } else {
            None
        }
    }

    /// Convex, and every pairwise intersecting family of balls meets.
    pub fn is_hyperconvex(&self) -> bool {
        self.is_convex() && self.helly_counterexample().is_none()
    }

    /// Every non-expansive self-map, in lexicographic order.
    pub fn contractions(&self) -> Result<Vec<SelfMap>, UltraError> {
        let n = self.points();
        guard(n, MAX_ENUM_CARRIER)?;
        let mut out = Vec::new();
        let mut images = vec![0usize; n];
        self.contraction_rec(0, &mut images, &mut out);
        Ok(out)
    }

    fn contraction_rec(&self, x: usize, images: &mut Vec<usize>, out: &mut Vec<SelfMap>) {
        let n = self.points();
        if x == n {
            out.push(SelfMap::new(images.clone()).expect("images lie in the carrier"));
            return;
        }
        for y in 0..n {
            let ok = (0..x).all(|w| {
                self.values.leq(self.d[images[w]][y], self.d[w][x])
                    && self.values.leq(self.d[y][images[w]], self.d[x][w])
            }) && self.values.leq(self.d[y][y], self.d[x][x]);
            if ok {
                images[x] = y;
                self.contraction_rec(x + 1, images, out);
            }
        }
    }

    pub fn is_contraction(&self, f: &SelfMap) -> bool {
        let n = self.points();
        (0..n).all(|x| {
            (0..n).all(|y| {
                self.values
                    .leq(self.d[f.apply(x)][f.apply(y)], self.d[x][y])
            })
        })
    }

    /// `≡_r = {(x, y) : d(x, y) ≤ r}`, assuming the axioms hold.
    pub fn equiv(&self, r: usize) -> Partition {
        let n = self.points();
        let mut p = Partition::discrete(n);
        for x in 0..n {
            for y in x + 1..n {
                if self.values.leq(self.d[x][y], r) {
                    p = p.join(&pair(n, x, y));
                }
            }
        }
        p
    }

    /// `{≡_r : r ∈ V}`, sorted and deduplicated. Not necessarily a
    /// sublattice of `Eqv(E)`.
    pub fn eq_d(&self) -> Vec<Partition> {
        let mut out: Vec<Partition> = (0..self.values.size()).map(|r| self.equiv(r)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `Eq_d` as a sublattice of `Eqv(E)`, if it is closed under meet and join.
    pub fn eq_d_sublattice(&self) -> Option<SubLattice> {
        SubLattice::from_closed(self.points(), self.eq_d()).ok()
    }

    /// `≡_r ∘ ≡_s = ≡_{r∨s}` for every pair of radii.
    pub fn compositions_match(&self) -> bool {
        let m = self.values.size();
        let eq: Vec<Partition> = (0..m).map(|r| self.equiv(r)).collect();
        (0..m).all(|r| {
            (0..m).all(|s| eq[r].compose(&eq[s]) == eq[self.values.join(r, s)].to_relation())
        })
    }

    /// Partitions preserved by every contraction.
    pub fn cong_d(&self) -> Result<SubLattice, UltraError> {
        let maps = self.contractions()?;
        Ok(cong_of_maps(self.points(), &maps)?)
    }

    /// Least member of `Cong_d` containing `(x, y)`, computed both as an
    /// intersection over `Cong_d` and as the closure of `{(x, y)}` under
    /// contractions; the two must agree.
    pub fn delta_least_cong(&self, x: usize, y: usize) -> Result<Partition, UltraError> {
        let n = self.points();
        let maps = self.contractions()?;
        let congs = cong_of_maps(n, &maps)?;
        let by_meet = congs
            .elements()
            .iter()
            .filter(|p| p.related(x, y))
            .fold(Partition::full(n), |acc, p| acc.meet(p));

        let mut closure = pair(n, x, y);
        loop {
            let mut next = closure.clone();
            for f in &maps {
                for block in closure.blocks() {
                    for w in block.windows(2) {
                        let (a, b) = (f.apply(w[0]), f.apply(w[1]));
                        if !next.related(a, b) {
                            next = next.join(&pair(n, a, b));
                        }
                    }
                }
            }
            if next == closure {
                break;
            }
            closure = next;
        }
        if closure != by_meet {
            return Err(UltraError::Inconsistent(x, y));
        }
        Ok(closure)
    }

    /// Coordinates `x ↦ (d(x, e))_e` in `V^E`, after checking that the
    /// componentwise-join distance `∨_e d_V(d(x,e), d(y,e))` reproduces `d`.
    pub fn isometric_embed(&self) -> Result<Vec<Vec<usize>>, UltraError> {
        let v = &self.values;
        let res = residual_table(v)?;
        let d_v = |a: usize, b: usize| v.join(res[a][b], res[b][a]);
        let n = self.points();
        let coords = self.d.clone();
        for x in 0..n {
            for y in 0..n {
                let sup = (0..n).fold(0, |acc, e| v.join(acc, d_v(coords[x][e], coords[y][e])));
                if sup != self.d[x][y] {
                    return Err(UltraError::NotIsometric(x, y));
                }
            }
        }
        Ok(coords)
    }
}

/// Δ plus the pair `{x, y}`.
fn pair(n: usize, x: usize, y: usize) -> Partition {
    let mut labels: Vec<usize> = (0..n).collect();
    labels[y] = labels[x];
    Partition::from_labels(&labels)
}

pub fn mask_points(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_iter(k: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut words = vec![0u64; k.div_ceil(64)];
        for i in items {
            words[i / 64] |= 1 << (i % 64);
        }
        Bits(words)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn above(&self, i: usize) -> Bits {
        let mut out = self.clone();
        for (w, word) in out.0.iter_mut().enumerate() {
            let lo = w * 64;
            if i + 1 >= lo + 64 {
                *word = 0;
            } else if i + 1 > lo {
                *word &= u64::MAX << (i + 1 - lo);
            }
        }
        out
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

fn helly_search(
    balls: &[u64],
    compat: &[Bits],
    cand: Bits,
    inter: u64,
    chosen: &mut Vec<usize>,
    memo: &mut HashSet<(u64, Bits)>,
) -> bool {
    for j in cand.iter().collect::<Vec<_>>() {
        chosen.push(j);
        let meet = inter & balls[j];
        if meet == 0 {
            return true;
        }
        let next = cand.and(&compat[j]).above(j);
        if memo.insert((meet, next.clone()))
            && helly_search(balls, compat, next, meet, chosen, memo)
        {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A family of equivalence relations on the same points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqSystem {
    n: usize,
    relations: Vec<Partition>,
}

impl EqSystem {
    pub fn new(n: usize, relations: Vec<Partition>) -> Result<Self, UltraError> {
        if let Some(p) = relations.iter().find(|p| p.carrier() != n) {
            return Err(EqvError::CarrierMismatch {
                expected: n,
                found: p.carrier(),
            }
            .into());
        }
        Ok(EqSystem { n, relations })
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Partition] {
        &self.relations
    }
}

/// `d(x, y) = {i : (x, y) ∉ ρ_i}` over the power set of the index set.
pub fn system_space(m: &EqSystem) -> Result<UltraSpace, UltraError> {
    let k = m.relations.len();
    if k > MAX_INDEX_SET {
        return Err(UltraError::IndexTooLarge {
            size: k,
            limit: MAX_INDEX_SET,
        });
    }
    let n = m.n;
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    m.relations
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| !p.related(x, y))
                        .fold(0, |acc, (i, _)| acc | 1 << i)
                })
                .collect()
        })
        .collect();
    UltraSpace::new(FiniteSemilattice::boolean(k), d)
}

/// `ρ_i = {(x, y) : i ∉ d(x, y)}` for a space over a power set.
pub fn space_system(s: &UltraSpace) -> Result<EqSystem, UltraError> {
    let size = s.values.size();
    let k = size.trailing_zeros() as usize;
    if !size.is_power_of_two() || s.values != FiniteSemilattice::boolean(k) {
        return Err(UltraError::NotPowerset);
    }
    let n = s.points();
    let relations = (0..k)
        .map(|i| {
            let mut rel = Relation::empty(n);
            for x in 0..n {
                for y in 0..n {
                    if s.d[x][y] >> i & 1 == 0 {
                        rel.set(x, y);
                    }
                }
            }
            rel.to_partition().ok_or_else(|| {
                UltraError::InvalidSpace(format!("relation {i} is not an equivalence"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    EqSystem::new(n, relations)
}

/// Result of comparing `V` with the congruences of `(V, d_V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub congruences: SubLattice,
    /// `V → Cong_d`, when an order isomorphism exists.
    pub isomorphism: Option<Vec<usize>>,
    pub arithmetical: bool,
}

impl Representation {
    pub fn holds(&self) -> bool {
        self.isomorphism.is_some() && self.arithmetical
    }
}

pub fn representation(v: &FiniteSemilattice) -> Result<Representation, UltraError> {
    guard(v.size(), MAX_REPRESENTATION)?;
    if !v.is_distributive() {
        return Err(UltraError::NotDistributive);
    }
    let space = dv_space(v)?;
    let congruences = space.cong_d()?;
    let elems = congruences.elements();
    let isomorphism = order_isomorphism(
        v.size(),
        |x, y| v.leq(x, y),
        elems.len(),
        |x, y| elems[x].refines(&elems[y]),
    );
    let arithmetical = is_arithmetical(&congruences);
    Ok(Representation {
        congruences,
        isomorphism,
        arithmetical,
    })
}

/// `V ≅ Cong_d(V, d_V)` and that lattice is arithmetical.
pub fn representation_check(v: &FiniteSemilattice) -> Result<bool, UltraError> {
    Ok(representation(v)?.holds())
}

/// Self-maps preserving every `≡_r`.
pub fn eq_d_preserving_maps(s: &UltraSpace) -> Result<Vec<SelfMap>, UltraError> {
    Ok(preserving_maps(s.points(), &s.eq_d())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteSemilattice {
        FiniteSemilattice::chain(3)
    }

    #[test]
    fn builtin_lattices() {
        assert_eq!(FiniteSemilattice::boolean(2).size(), 4);
        assert_eq!(FiniteSemilattice::divisors(12).size(), 6);
        assert!(FiniteSemilattice::divisors(12).is_distributive());
        assert!(!FiniteSemilattice::m3().is_distributive());
        assert!(!FiniteSemilattice::n5().is_distributive());
        assert_eq!(FiniteSemilattice::boolean(3).top(), 7);
        let d12 = FiniteSemilattice::divisors(12);
        // elements 1, 2, 3, 4, 6, 12: join is lcm, meet is gcd
        assert_eq!(d12.join(2, 3), 5);
        assert_eq!(d12.meet(3, 4), 1);
    }

    #[test]
    fn rejects_bad_orders() {
        let not_bottom = vec![vec![true, false], vec![false, true]];
        assert!(FiniteSemilattice::from_order(not_bottom).is_err());
        // two maximal elements: no join
        let v = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        assert!(FiniteSemilattice::from_order(v).is_err());
        let c = chain3();
        assert!(FiniteSemilattice::from_tables(
            c.order_table().to_vec(),
            Some(vec![vec![0; 3]; 3]),
            None
        )
        .is_err());
    }

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=7).map(|m| lattices_of_size(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
        let distributive: Vec<usize> = (1..=7)
            .map(|m| {
                lattices_of_size(m)
                    .iter()
                    .filter(|v| v.is_distributive())
                    .count()
            })
            .collect();
        assert_eq!(distributive, vec![1, 1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn residual_chain() {
        let c = chain3();
        assert_eq!(residual(&c, 1, 2), Ok(0));
        assert_eq!(residual(&c, 1, 0), Ok(1));
        for x in 0..3 {
            for y in x..3 {
                assert_eq!(residual(&c, x, y), Ok(0));
            }
        }
    }

    #[test]
    fn residual_boolean_is_difference() {
        let b = FiniteSemilattice::boolean(2);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(residual(&b, x, y), Ok(x & !y));
            }
        }
    }

    #[test]
    fn residuation_examples() {
        assert!(!is_residuated(&FiniteSemilattice::m3()));
        for m in 1..6 {
            assert!(is_residuated(&FiniteSemilattice::chain(m)));
        }
        assert!(is_residuated(&FiniteSemilattice::divisors(12)));
        assert!(dv_space(&FiniteSemilattice::m3()).is_err());
    }

    #[test]
    fn metrics_on_small_lattices() {
        let b = FiniteSemilattice::boolean(2);
        let s = dv_space(&b).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(s.distance(x, y), x ^ y);
            }
        }
        let c2 = FiniteSemilattice::chain(2);
        assert_eq!(dv_space(&c2).unwrap().table(), dvee_space(&c2).table());

        let c = chain3();
        let (dv, dvee) = (dv_space(&c).unwrap(), dvee_space(&c));
        assert_eq!(dv.distance(1, 2), 2);
        assert_eq!(dvee.distance(1, 2), 2);
        for x in 0..3 {
            assert_eq!(dv.distance(0, x), x);
            assert_eq!(dvee.distance(0, x), x);
            for y in 0..3 {
                assert!(c.leq(dv.distance(x, y), dvee.distance(x, y)));
            }
        }
    }

    #[test]
    fn verify_axioms_examples() {
        let b = FiniteSemilattice::boolean(2);
        assert!(dv_space(&b).unwrap().verify_axioms().is_valid());
        let bad = UltraSpace::new(chain3(), vec![vec![0, 1], vec![2, 0]]).unwrap();
        let report = bad.verify_axioms();
        assert!(report.violations.contains(&AxiomViolation::Symmetry(0, 1)));
        let single = UltraSpace::new(chain3(), vec![vec![0]]).unwrap();
        let report = single.verify_axioms();
        assert!(report.is_valid() && report.separated);
        let refl = UltraSpace::new(chain3(), vec![vec![1]]).unwrap();
        assert_eq!(
            refl.verify_axioms().violations,
            vec![AxiomViolation::Reflexivity(0)]
        );
        assert!(UltraSpace::new(chain3(), vec![vec![0, 3], vec![3, 0]]).is_err());
    }

    #[test]
    fn ball_examples() {
        let b = FiniteSemilattice::boolean(2);
        let s = dv_space(&b).unwrap();
        for a in 0..4 {
            assert_eq!(s.ball_points(a, 0), vec![a]);
            assert_eq!(s.ball_points(a, 3), vec![0, 1, 2, 3]);
        }
        assert_eq!(s.ball_points(0, 1), vec![0, 1]);
    }

    #[test]
    fn convexity_examples() {
        for v in [
            chain3(),
            FiniteSemilattice::boolean(2),
            FiniteSemilattice::divisors(12),
        ] {
            assert!(dv_space(&v).unwrap().is_hyperconvex());
        }
        let single = UltraSpace::new(chain3(), vec![vec![0]]).unwrap();
        assert!(single.is_hyperconvex());
        let two = UltraSpace::new(chain3(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(two.is_convex());
        assert!(two.is_hyperconvex());
        // d(x, y) = {p, q} but balls of radius {p} and {q} are singletons.
        let b = FiniteSemilattice::boolean(2);
        let split = UltraSpace::new(b, vec![vec![0, 3], vec![3, 0]]).unwrap();
        assert!(!split.is_convex());
        assert!(!split.is_hyperconvex());
    }

    #[test]
    fn dvee_over_boolean_fails_helly() {
        // Over 2^3 the largest metric is far from hyperconvex.
        let s = dvee_space(&FiniteSemilattice::boolean(3));
        assert!(s.verify_axioms().is_valid());
        assert!(!s.is_hyperconvex());
    }

    #[test]
    fn contraction_examples() {
        let s = dv_space(&chain3()).unwrap();
        let maps = s.contractions().unwrap();
        assert!(maps.contains(&SelfMap::identity(3)));
        for c in 0..3 {
            assert!(maps.contains(&SelfMap::constant(3, c)));
        }
        for f in &maps {
            assert!(s.is_contraction(f));
            for g in &maps {
                assert!(maps.contains(&f.after(g)));
            }
        }
        let two = UltraSpace::new(chain3(), vec![vec![0, 2], vec![2, 0]]).unwrap();
        assert_eq!(two.contractions().unwrap().len(), 4);
    }

    #[test]
    fn eq_and_cong_examples() {
        let s = dv_space(&FiniteSemilattice::boolean(2)).unwrap();
        let eq = s.eq_d();
        assert!(eq.contains(&Partition::discrete(4)));
        assert!(eq.contains(&Partition::full(4)));
        assert_eq!(s.equiv(0), Partition::discrete(4));
        assert_eq!(s.equiv(3), Partition::full(4));
        let cong = s.cong_d().unwrap();
        assert!(eq.iter().all(|p| cong.contains(p)));
    }

    #[test]
    fn delta_examples() {
        let s = dv_space(&FiniteSemilattice::divisors(12)).unwrap();
        assert_eq!(s.delta_least_cong(2, 2).unwrap(), Partition::discrete(6));
        for x in 0..6 {
            for y in 0..6 {
                let delta = s.delta_least_cong(x, y).unwrap();
                assert!(delta.refines(&s.equiv(s.distance(x, y))));
            }
        }
        // Two points at the top distance: every map contracts.
        let two = UltraSpace::new(chain3(), vec![vec![0, 2], vec![2, 0]]).unwrap();
        assert_eq!(two.delta_least_cong(0, 1).unwrap(), Partition::full(2));
    }

    #[test]
    fn system_space_examples() {
        let full = EqSystem::new(3, vec![Partition::full(3)]).unwrap();
        let s = system_space(&full).unwrap();
        assert!(s.table().iter().flatten().all(|&d| d == 0));
        assert!(!s.is_separated());
        assert!(s.verify_axioms().is_valid());

        let disc = EqSystem::new(3, vec![Partition::discrete(3)]).unwrap();
        let s = system_space(&disc).unwrap();
        assert!(s.is_separated());
        assert_eq!(s.distance(0, 1), 1);
        assert_eq!(space_system(&s).unwrap(), disc);

        let big = EqSystem::new(2, vec![Partition::full(2); 6]).unwrap();
        assert!(matches!(
            system_space(&big),
            Err(UltraError::IndexTooLarge { .. })
        ));
        assert_eq!(
            space_system(&dv_space(&chain3()).unwrap()),
            Err(UltraError::NotPowerset)
        );
    }

    #[test]
    fn embedding_examples() {
        let single = UltraSpace::new(chain3(), vec![vec![0]]).unwrap();
        assert_eq!(single.isometric_embed().unwrap(), vec![vec![0]]);
        let s = dv_space(&FiniteSemilattice::divisors(12)).unwrap();
        assert_eq!(s.isometric_embed().unwrap(), s.table().to_vec());
        let m3 = dvee_space(&FiniteSemilattice::m3());
        assert!(matches!(
            m3.isometric_embed(),
            Err(UltraError::NotResiduated(..))
        ));
    }

    #[test]
    fn representation_examples() {
        assert!(representation_check(&chain3()).unwrap());
        assert!(representation_check(&FiniteSemilattice::boolean(2)).unwrap());
        assert!(representation_check(&FiniteSemilattice::divisors(12)).unwrap());
        assert_eq!(
            representation_check(&FiniteSemilattice::m3()),
            Err(UltraError::NotDistributive)
        );
        assert!(matches!(
            representation_check(&FiniteSemilattice::chain(8)),
            Err(UltraError::Eqv(EqvError::CarrierTooLarge { .. }))
        ));
    }
}
