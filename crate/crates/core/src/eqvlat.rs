//! Finite lattices of equivalence relations.
//!
//! Partitions of `{0, …, n-1}` are stored as canonical block-label arrays
//! (labels assigned in order of first occurrence), so equality, hashing
//! and ordering are plain array operations. Everything here is exhaustive
//! computation on small carriers; the enumeration guards are hard errors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Largest carrier for which self-maps (`n^n`) or partitions (Bell numbers)
/// are enumerated.
pub const MAX_ENUM_CARRIER: usize = 7;
/// Largest `m` accepted by [`congruences_of_zm`].
pub const MAX_ZM: usize = 60;
/// Largest carrier searched by [`find_m3_dense`].
pub const MAX_M3_SEARCH: usize = 6;
/// Bit-mask based routines need the carrier to fit a `u64`.
pub const MAX_MASK_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqvError {
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("carrier of size {size} exceeds the enumeration limit {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("value {value} out of range {lo}..={hi}")]
    OutOfRange { value: usize, lo: usize, hi: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("family is not closed under meet and join")]
    NotClosed,
    #[error("no dense M3 sublattice of Eqv({0})")]
    NotFound(usize),
}

fn guard(size: usize, limit: usize) -> Result<(), EqvError> {
    if size > limit {
        Err(EqvError::CarrierTooLarge { size, limit })
    } else {
        Ok(())
    }
}

/// An equivalence relation on `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks())
    }
}

impl Partition {
    /// Canonicalizes an arbitrary labelling.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut seen: HashMap<T, usize> = HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    /// Builds a partition from its blocks; every element of `0..n` must
    /// appear exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, EqvError> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(EqvError::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(EqvError::InvalidPartition(format!(
                        "element {x} outside carrier of size {n}"
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(EqvError::InvalidPartition(format!(
                        "element {x} appears twice"
                    )));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(EqvError::InvalidPartition(format!(
                "element {x} is missing"
            )));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Δ: all singletons.
    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    /// ∇: a single block.
    pub fn full(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    /// Residue classes modulo `d` on `{0, …, n-1}`.
    pub fn modulo(n: usize, d: usize) -> Self {
        let labels: Vec<usize> = (0..n).map(|x| x % d.max(1)).collect();
        Partition::from_labels(&labels)
    }

    /// Every partition of an `n`-element set in lexicographic order of the
    /// canonical label arrays.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == labels.len() {
                out.push(Partition {
                    labels: labels.clone(),
                });
                return;
            }
            let limit = if i == 0 { 0 } else { max + 1 };
            for l in 0..=limit {
                labels[i] = l;
                rec(i + 1, max.max(l), labels, out);
            }
        }
        if n == 0 {
            out.push(Partition { labels });
        } else {
            rec(0, 0, &mut labels, &mut out);
        }
        out
    }

    pub fn carrier(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    /// Blocks as bit masks; requires `n ≤ 64`.
    pub fn block_masks(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l] |= 1 << x;
        }
        out
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.carrier()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            let o = other.labels[x];
            if image[l] == usize::MAX {
                image[l] = o;
            } else if image[l] != o {
                return false;
            }
        }
        true
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| (a, b))
            .collect();
        Partition::from_labels(&pairs)
    }

    /// Transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.carrier();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for x in 0..n {
                let l = p.labels[x];
                if first[l] == usize::MAX {
                    first[l] = x;
                } else {
                    let (a, b) = (find(&mut parent, first[l]), find(&mut parent, x));
                    parent[a] = b;
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Partition::from_labels(&roots)
    }

    /// `{(x, y) : x self z and z other y for some z}`.
    pub fn compose(&self, other: &Partition) -> Relation {
        let n = self.carrier();
        let mut rel = Relation::empty(n);
        for x in 0..n {
            for z in 0..n {
                if self.related(x, z) {
                    for y in 0..n {
                        if other.related(z, y) {
                            rel.set(x, y);
                        }
                    }
                }
            }
        }
        rel
    }

    pub fn commutes(&self, other: &Partition) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn to_relation(&self) -> Relation {
        let n = self.carrier();
        let mut rel = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.related(x, y) {
                    rel.set(x, y);
                }
            }
        }
        rel
    }
}

/// A binary relation on `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, x: usize, y: usize) {
        self.bits[x * self.n + y] = true;
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.n + y]
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| self.contains(x, x))
            && (0..n).all(|x| (0..n).all(|y| self.contains(x, y) == self.contains(y, x)))
            && (0..n).all(|x| {
                (0..n).all(|y| {
                    !self.contains(x, y)
                        || (0..n).all(|z| !self.contains(y, z) || self.contains(x, z))
                })
            })
    }

    /// `Some` exactly when the relation is an equivalence.
    pub fn to_partition(&self) -> Option<Partition> {
        if !self.is_equivalence() {
            return None;
        }
        let labels: Vec<usize> = (0..self.n)
            .map(|x| (0..self.n).find(|&y| self.contains(x, y)).unwrap_or(x))
            .collect();
        Some(Partition::from_labels(&labels))
    }
}

/// A total self-map of `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelfMap(Vec<usize>);

impl SelfMap {
    pub fn new(images: Vec<usize>) -> Result<Self, EqvError> {
        let n = images.len();
        if let Some(&bad) = images.iter().find(|&&y| y >= n) {
            return Err(EqvError::InvalidMap(format!(
                "image {bad} outside carrier of size {n}"
            )));
        }
        Ok(SelfMap(images))
    }

    pub fn identity(n: usize) -> Self {
        SelfMap((0..n).collect())
    }

    pub fn constant(n: usize, c: usize) -> Self {
        SelfMap(vec![c; n])
    }

    /// `x ↦ x + k mod n`.
    pub fn translation(n: usize, k: usize) -> Self {
        SelfMap((0..n).map(|x| (x + k) % n).collect())
    }

    pub fn carrier(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `x ↦ self(other(x))`.
    pub fn after(&self, other: &SelfMap) -> SelfMap {
        SelfMap(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn preserves(&self, p: &Partition) -> bool {
        let mut image = vec![usize::MAX; p.num_blocks()];
        for (x, &y) in self.0.iter().enumerate() {
            let l = p.block_of(x);
            let t = p.block_of(y);
            if image[l] == usize::MAX {
                image[l] = t;
            } else if image[l] != t {
                return false;
            }
        }
        true
    }
}

/// A carrier with a set of unary operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryAlgebra {
    n: usize,
    ops: Vec<SelfMap>,
}

impl UnaryAlgebra {
    pub fn new(n: usize, ops: Vec<SelfMap>) -> Result<Self, EqvError> {
        for op in &ops {
            if op.carrier() != n {
                return Err(EqvError::CarrierMismatch {
                    expected: n,
                    found: op.carrier(),
                });
            }
        }
        Ok(UnaryAlgebra { n, ops })
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[SelfMap] {
        &self.ops
    }
}

/// A set of partitions closed under meet and join, kept sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubLattice {
    n: usize,
    elements: Vec<Partition>,
}

impl SubLattice {
    /// Accepts `elements` only when they already form a sublattice.
    pub fn from_closed(n: usize, elements: Vec<Partition>) -> Result<Self, EqvError> {
        let elements = normalize(n, elements)?;
        let set: BTreeSet<&Partition> = elements.iter().collect();
        for p in &elements {
            for q in &elements {
                if !set.contains(&p.meet(q)) || !set.contains(&p.join(q)) {
                    return Err(EqvError::NotClosed);
                }
            }
        }
        Ok(SubLattice { n, elements })
    }

    /// All of `Eqv(n)`.
    pub fn full(n: usize) -> Result<Self, EqvError> {
        guard(n, MAX_ENUM_CARRIER)?;
        Ok(SubLattice {
            n,
            elements: Partition::all(n),
        })
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &SubLattice) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Contains both Δ and ∇.
    pub fn is_bounded(&self) -> bool {
        self.contains(&Partition::discrete(self.n)) && self.contains(&Partition::full(self.n))
    }
}

fn normalize(n: usize, mut elements: Vec<Partition>) -> Result<Vec<Partition>, EqvError> {
    if let Some(p) = elements.iter().find(|p| p.carrier() != n) {
        return Err(EqvError::CarrierMismatch {
            expected: n,
            found: p.carrier(),
        });
    }
    elements.sort();
    elements.dedup();
    Ok(elements)
}

/// Least meet/join-closed superset of `gens`, optionally with Δ and ∇.
pub fn lattice_closure(
    n: usize,
    gens: &[Partition],
    with_bounds: bool,
) -> Result<SubLattice, EqvError> {
    let mut seeds = gens.to_vec();
    if with_bounds {
        seeds.push(Partition::discrete(n));
        seeds.push(Partition::full(n));
    }
    let seeds = normalize(n, seeds)?;
    let mut set: BTreeSet<Partition> = seeds.iter().cloned().collect();
    let mut all: Vec<Partition> = seeds;
    let mut frontier = 0;
    while frontier < all.len() {
        let p = all[frontier].clone();
        frontier += 1;
        let mut fresh = Vec::new();
        for q in &all {
            for r in [p.meet(q), p.join(q)] {
                if set.insert(r.clone()) {
                    fresh.push(r);
                }
            }
        }
        all.extend(fresh);
    }
    Ok(SubLattice {
        n,
        elements: set.into_iter().collect(),
    })
}

/// Index-based meet/join tables for a sublattice.
struct Tables {
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl Tables {
    fn new(l: &SubLattice) -> Self {
        let index: HashMap<&Partition, usize> =
            l.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = |op: fn(&Partition, &Partition) -> Partition| -> Vec<Vec<usize>> {
            l.elements
                .iter()
                .map(|p| l.elements.iter().map(|q| index[&op(p, q)]).collect())
                .collect()
        };
        Tables {
            meet: table(Partition::meet),
            join: table(Partition::join),
        }
    }
}

/// `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` for all triples.
pub fn is_distributive(l: &SubLattice) -> bool {
    let t = Tables::new(l);
    let k = l.len();
    (0..k).all(|x| {
        (0..k)
            .all(|y| (0..k).all(|z| t.meet[x][t.join[y][z]] == t.join[t.meet[x][y]][t.meet[x][z]]))
    })
}

pub fn all_commute(l: &SubLattice) -> bool {
    let e = &l.elements;
    (0..e.len()).all(|i| (i + 1..e.len()).all(|j| e[i].commutes(&e[j])))
}

/// Distributive with pairwise commuting members.
pub fn is_arithmetical(l: &SubLattice) -> bool {
    is_distributive(l) && all_commute(l)
}

/// A pairwise compatible constraint system without a solution, as
/// `(member, representative)` pairs.
pub fn crc_counterexample(l: &SubLattice) -> Option<Vec<(Partition, usize)>> {
    let n = l.n;
    assert!(n <= MAX_MASK_CARRIER, "carrier too large for crc check");
    if n == 0 {
        return None;
    }
    let members: Vec<&Partition> = l.elements.iter().filter(|p| !p.is_full()).collect();
    // constraints[c] = (member index, block mask)
    let mut constraints: Vec<(usize, u64)> = Vec::new();
    let mut by_member: Vec<Vec<usize>> = Vec::new();
    for (i, p) in members.iter().enumerate() {
        let mut ids = Vec::new();
        for mask in p.block_masks() {
            ids.push(constraints.len());
            constraints.push((i, mask));
        }
        by_member.push(ids);
    }
    let rep = |mask: u64| mask.trailing_zeros() as usize;
    let c = constraints.len();
    let mut compat = vec![vec![false; c]; c];
    for a in 0..c {
        for b in 0..c {
            let (ia, ma) = constraints[a];
            let (ib, mb) = constraints[b];
            compat[a][b] = members[ia].join(members[ib]).related(rep(ma), rep(mb));
        }
    }

    struct Search<'a> {
        constraints: &'a [(usize, u64)],
        by_member: &'a [Vec<usize>],
        compat: &'a [Vec<bool>],
        limit: usize,
        truncated: bool,
    }

    impl Search<'_> {
        fn run(&mut self, next: usize, chosen: &mut Vec<usize>, inter: u64) -> Option<Vec<usize>> {
            if chosen.len() == self.limit {
                self.truncated = true;
                return None;
            }
            for m in next..self.by_member.len() {
                for &c in &self.by_member[m] {
                    if !chosen.iter().all(|&o| self.compat[o][c]) {
                        continue;
                    }
                    let meet = inter & self.constraints[c].1;
                    chosen.push(c);
                    if meet == 0 {
                        return Some(chosen.clone());
                    }
                    if let Some(found) = self.run(m + 1, chosen, meet) {
                        return Some(found);
                    }
                    chosen.pop();
                }
            }
            None
        }
    }

    // Iterative deepening: small witnesses are found without exploring the
    // whole tree, and the last round proves absence.
    let full_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for limit in 1..=members.len().max(1) {
        let mut search = Search {
            constraints: &constraints,
            by_member: &by_member,
            compat: &compat,
            limit,
            truncated: false,
        };
        if let Some(found) = search.run(0, &mut Vec::new(), full_mask) {
            return Some(
                found
                    .into_iter()
                    .map(|c| {
                        let (m, mask) = constraints[c];
                        (members[m].clone(), rep(mask))
                    })
                    .collect(),
            );
        }
        if !search.truncated {
            return None;
        }
    }
    None
}

/// Chinese remainder condition: every pairwise compatible system
/// `x ≡ a_i (θ_i)` has a solution. Each member of `L ∖ {∇}` is used at most
/// once, which loses nothing: two constraints on the same θ are compatible
/// only when they name the same block.
pub fn crc_holds(l: &SubLattice) -> bool {
    crc_counterexample(l).is_none()
}

/// Every self-map preserving each member of `l`, in lexicographic order.
pub fn pol1(l: &SubLattice) -> Result<Vec<SelfMap>, EqvError> {
    preserving_maps(l.n, l.elements())
}

pub(crate) fn preserving_maps(n: usize, rels: &[Partition]) -> Result<Vec<SelfMap>, EqvError> {
    guard(n, MAX_ENUM_CARRIER)?;
    // Skip relations every map preserves.
    let rels: Vec<&Partition> = rels
        .iter()
        .filter(|p| !p.is_discrete() && !p.is_full())
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; n];
    fn rec(
        x: usize,
        n: usize,
        rels: &[&Partition],
        images: &mut Vec<usize>,
        out: &mut Vec<SelfMap>,
    ) {
        if x == n {
            out.push(SelfMap(images.clone()));
            return;
        }
        for y in 0..n {
            images[x] = y;
            let ok = rels
                .iter()
                .all(|p| (0..x).all(|w| !p.related(w, x) || p.related(images[w], y)));
            if ok {
                rec(x + 1, n, rels, images, out);
            }
        }
    }
    rec(0, n, &rels, &mut images, &mut out);
    Ok(out)
}

/// Congruences of a unary algebra: partitions preserved by every operation.
pub fn cong(alg: &UnaryAlgebra) -> Result<SubLattice, EqvError> {
    cong_of_maps(alg.n, &alg.ops)
}

pub(crate) fn cong_of_maps(n: usize, ops: &[SelfMap]) -> Result<SubLattice, EqvError> {
    guard(n, MAX_ENUM_CARRIER)?;
    let elements = Partition::all(n)
        .into_iter()
        .filter(|p| ops.iter().all(|f| f.preserves(p)))
        .collect();
    Ok(SubLattice { n, elements })
}

/// `Cong(A, Pol¹(L)) = Eqv(A)`.
pub fn is_dense(l: &SubLattice) -> Result<bool, EqvError> {
    let maps = pol1(l)?;
    let c = cong_of_maps(l.n, &maps)?;
    Ok(c.len() == Partition::all(l.n).len())
}

/// The three middle elements of an M₃ sublattice `{Δ, p, q, r, ∇}`.
pub fn is_m3_triple(p: &Partition, q: &Partition, r: &Partition) -> bool {
    let n = p.carrier();
    let (bot, top) = (Partition::discrete(n), Partition::full(n));
    let mids = [p, q, r];
    mids.iter().all(|x| **x != bot && **x != top)
        && (0..3).all(|i| {
            (i + 1..3).all(|j| mids[i].meet(mids[j]) == bot && mids[i].join(mids[j]) == top)
        })
}

/// First dense M₃ sublattice of `Eqv(n)`, scanning triples of partitions in
/// lexicographic order of their canonical encodings.
pub fn find_m3_dense(n: usize) -> Result<SubLattice, EqvError> {
    guard(n, MAX_M3_SEARCH)?;
    let mids: Vec<Partition> = Partition::all(n)
        .into_iter()
        .filter(|p| !p.is_discrete() && !p.is_full())
        .collect();
    for i in 0..mids.len() {
        for j in i + 1..mids.len() {
            for k in j + 1..mids.len() {
                let (p, q, r) = (&mids[i], &mids[j], &mids[k]);
                if !is_m3_triple(p, q, r) {
                    continue;
                }
                let l = lattice_closure(n, &[p.clone(), q.clone(), r.clone()], true)?;
                if is_dense(&l)? {
                    return Ok(l);
                }
            }
        }
    }
    Err(EqvError::NotFound(n))
}

/// Congruences of `(ℤ_m, +)`: one partition of `{0, …, m-1}` per divisor.
pub fn congruences_of_zm(m: usize) -> Result<SubLattice, EqvError> {
    if !(1..=MAX_ZM).contains(&m) {
        return Err(EqvError::OutOfRange {
            value: m,
            lo: 1,
            hi: MAX_ZM,
        });
    }
    let elements = (1..=m)
        .filter(|d| m % d == 0)
        .map(|d| Partition::modulo(m, d))
        .collect();
    Ok(SubLattice {
        n: m,
        elements: normalize(m, elements)?,
    })
}

/// The ℤ/2 × ℤ/2 congruences on `{0,1,2,3}` (encoding `(a, b) ↦ 2a + b`):
/// the three subgroup cosets partitions.
pub fn klein_m3() -> [Partition; 3] {
    [
        Partition::from_labels(&[0, 0, 1, 1]),
        Partition::from_labels(&[0, 1, 0, 1]),
        Partition::from_labels(&[0, 1, 1, 0]),
    ]
}

/// Group translations of ℤ/2 × ℤ/2 in the same encoding.
pub fn klein_translations() -> Vec<SelfMap> {
    (0..4)
        .map(|k| SelfMap((0..4).map(|x| x ^ k).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels)
    }

    fn m3() -> SubLattice {
        lattice_closure(4, &klein_m3(), true).unwrap()
    }

    #[test]
    fn canonical_labels() {
        assert_eq!(part(&[5, 5, 2, 7]).labels(), &[0, 0, 1, 2]);
        assert_eq!(
            Partition::from_blocks(4, &[vec![2, 3], vec![0, 1]]).unwrap(),
            part(&[0, 0, 1, 1])
        );
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<usize> = (0..=7).map(|n| Partition::all(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203, 877]);
        let all = Partition::all(4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bounds() {
        let p = part(&[0, 1, 0, 2]);
        assert_eq!(Partition::discrete(4).meet(&p), Partition::discrete(4));
        assert_eq!(Partition::full(4).join(&p), Partition::full(4));
        assert!(Partition::discrete(4).refines(&p));
        assert!(p.refines(&Partition::full(4)));
    }

    #[test]
    fn compose_examples() {
        let p = part(&[0, 0, 1, 1]);
        let q = part(&[0, 1, 0, 1]);
        assert_eq!(p.compose(&q), Partition::full(4).to_relation());
        assert!(p.commutes(&q));
        assert_eq!(p.compose(&p), p.to_relation());
        assert!(p.commutes(&p));
    }

    #[test]
    fn non_commuting_pair() {
        let p = part(&[0, 0, 1]);
        let q = part(&[0, 1, 1]);
        assert!(!p.commutes(&q));
        assert!(p.compose(&q).to_partition().is_none());
        assert_eq!(p.join(&q), Partition::full(3));
    }

    #[test]
    fn commuting_compose_is_join() {
        for n in 1..=4 {
            let all = Partition::all(n);
            for p in &all {
                for q in &all {
                    if p.commutes(q) {
                        assert_eq!(p.compose(q), p.join(q).to_relation());
                    }
                }
            }
        }
    }

    #[test]
    fn meet_join_agree_with_relations() {
        let all = Partition::all(4);
        for p in &all {
            for q in &all {
                let m = p.meet(q);
                for x in 0..4 {
                    for y in 0..4 {
                        assert_eq!(m.related(x, y), p.related(x, y) && q.related(x, y));
                    }
                }
                let j = p.join(q);
                assert!(p.refines(&j) && q.refines(&j));
                // least upper bound
                for r in &all {
                    if p.refines(r) && q.refines(r) {
                        assert!(j.refines(r));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let l = lattice_closure(4, &[], true).unwrap();
        assert_eq!(l.elements(), &[Partition::full(4), Partition::discrete(4)]);
        assert_eq!(m3().len(), 5);
        let chain = vec![
            part(&[0, 1, 2, 3]),
            part(&[0, 0, 1, 2]),
            part(&[0, 0, 0, 1]),
        ];
        let l = lattice_closure(4, &chain, false).unwrap();
        assert_eq!(l.len(), 3);
        assert!(SubLattice::from_closed(4, chain).is_ok());
        assert_eq!(
            SubLattice::from_closed(3, vec![part(&[0, 0, 1]), part(&[0, 1, 1])]),
            Err(EqvError::NotClosed)
        );
    }

    #[test]
    fn distributivity_examples() {
        let chain = lattice_closure(4, &[part(&[0, 0, 1, 2])], true).unwrap();
        assert!(is_distributive(&chain));
        assert!(!is_distributive(&m3()));
        assert!(is_distributive(&congruences_of_zm(12).unwrap()));
    }

    #[test]
    fn arithmetical_examples() {
        assert!(is_arithmetical(&congruences_of_zm(12).unwrap()));
        assert!(!is_arithmetical(&m3()));
        assert!(all_commute(&m3()));
        assert!(is_arithmetical(&lattice_closure(5, &[], true).unwrap()));
    }

    #[test]
    fn crc_examples() {
        assert!(crc_holds(&lattice_closure(3, &[], true).unwrap()));
        assert!(crc_holds(&congruences_of_zm(6).unwrap()));
        assert!(crc_holds(&congruences_of_zm(12).unwrap()));
        let witness = crc_counterexample(&m3()).expect("M3 fails the condition");
        assert_eq!(witness.len(), 3);
        // The witness is pairwise compatible with empty intersection.
        for (i, (p, a)) in witness.iter().enumerate() {
            for (q, b) in &witness[i + 1..] {
                assert!(p.join(q).related(*a, *b));
            }
        }
        assert!(!(0..4).any(|x| witness.iter().all(|(p, a)| p.related(x, *a))));
    }

    #[test]
    fn crc_detects_non_permuting_pair() {
        let l = lattice_closure(3, &[part(&[0, 0, 1]), part(&[0, 1, 1])], true).unwrap();
        assert_eq!(crc_counterexample(&l).map(|w| w.len()), Some(2));
    }

    #[test]
    fn pol1_examples() {
        let bounds = lattice_closure(3, &[], true).unwrap();
        assert_eq!(pol1(&bounds).unwrap().len(), 27);
        let all = pol1(&SubLattice::full(3).unwrap()).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|f| f.is_identity() || f.is_constant()));
        let maps = pol1(&m3()).unwrap();
        for t in klein_translations() {
            assert!(maps.contains(&t));
        }
        assert!(matches!(
            pol1(&lattice_closure(8, &[], true).unwrap()),
            Err(EqvError::CarrierTooLarge { size: 8, limit: 7 })
        ));
    }

    #[test]
    fn pol1_matches_naive_enumeration() {
        let l = lattice_closure(4, &[part(&[0, 0, 1, 2]), part(&[0, 1, 1, 0])], true).unwrap();
        let fast = pol1(&l).unwrap();
        let mut naive = Vec::new();
        for code in 0..4usize.pow(4) {
            let images: Vec<usize> = (0..4).map(|i| code / 4usize.pow(i) % 4).collect();
            let f = SelfMap::new(images).unwrap();
            if l.elements().iter().all(|p| f.preserves(p)) {
                naive.push(f);
            }
        }
        naive.sort();
        assert_eq!(fast, naive);
    }

    #[test]
    fn cong_examples() {
        let id = UnaryAlgebra::new(4, vec![SelfMap::identity(4)]).unwrap();
        assert_eq!(cong(&id).unwrap(), SubLattice::full(4).unwrap());
        let everything = pol1(&lattice_closure(3, &[], true).unwrap()).unwrap();
        let c = cong(&UnaryAlgebra::new(3, everything).unwrap()).unwrap();
        assert_eq!(c.elements(), &[Partition::full(3), Partition::discrete(3)]);
        // x ↦ x+1 on ℤ_6 (carrier guard keeps n ≤ 7)
        let shift = UnaryAlgebra::new(6, vec![SelfMap::translation(6, 1)]).unwrap();
        assert_eq!(cong(&shift).unwrap(), congruences_of_zm(6).unwrap());
        assert!(UnaryAlgebra::new(3, vec![SelfMap::identity(4)]).is_err());
    }

    #[test]
    fn zm_shift_congruences_match_divisors() {
        // Same check for ℤ_12 done by hand: a partition is preserved by the
        // shift iff it is the residue partition of a divisor.
        let m = 12;
        let shift = SelfMap::translation(m, 1);
        let z12 = congruences_of_zm(m).unwrap();
        assert_eq!(z12.len(), 6);
        for p in z12.elements() {
            assert!(shift.preserves(p));
        }
        // a non-residue partition is not preserved
        let mut labels: Vec<usize> = (0..m).collect();
        labels[1] = 0;
        assert!(!shift.preserves(&part(&labels)));
    }

    #[test]
    fn density_examples() {
        assert!(!is_dense(&lattice_closure(3, &[], true).unwrap()).unwrap());
        assert!(is_dense(&SubLattice::full(3).unwrap()).unwrap());
        assert!(is_dense(&SubLattice::full(4).unwrap()).unwrap());
        assert!(!is_dense(&m3()).unwrap());
    }

    #[test]
    fn m3_search() {
        assert_eq!(find_m3_dense(2), Err(EqvError::NotFound(2)));
        // Eqv(3) is itself an M3 and dense; no dense M3 exists on 4 points.
        assert_eq!(find_m3_dense(3).unwrap(), SubLattice::full(3).unwrap());
        assert_eq!(find_m3_dense(4), Err(EqvError::NotFound(4)));
        let l = find_m3_dense(5).unwrap();
        assert_eq!(l.len(), 5);
        let maps = pol1(&l).unwrap();
        assert_eq!(maps.len(), 6);
        assert!(maps.iter().all(|f| f.is_identity() || f.is_constant()));
        assert!(matches!(
            find_m3_dense(7),
            Err(EqvError::CarrierTooLarge { .. })
        ));
    }

    #[test]
    fn zm_examples() {
        assert_eq!(congruences_of_zm(12).unwrap().len(), 6);
        let one = congruences_of_zm(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.elements()[0], Partition::discrete(1));
        assert_eq!(one.elements()[0], Partition::full(1));
        assert_eq!(congruences_of_zm(7).unwrap().len(), 2);
        assert!(congruences_of_zm(0).is_err());
        assert!(congruences_of_zm(61).is_err());
    }

    #[test]
    fn zm_join_is_gcd_and_meet_is_lcm() {
        use num_integer::Integer;
        for m in 1..=30usize {
            for a in (1..=m).filter(|d| m % d == 0) {
                for b in (1..=m).filter(|d| m % d == 0) {
                    let (p, q) = (Partition::modulo(m, a), Partition::modulo(m, b));
                    assert_eq!(p.join(&q), Partition::modulo(m, a.gcd(&b)));
                    assert_eq!(p.meet(&q), Partition::modulo(m, a.lcm(&b)));
                }
            }
        }
    }
}
