//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..order`; index 0 is always the identity. A
//! [`Group`] is immutable after construction and cheap to share.

mod chain;
mod perm;
mod series;
mod set;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};

pub use chain::SetCommChain;
pub use perm::{GroupSpec, Permutation};
pub use series::Quotient;
pub use set::ElementSet;

/// Index of a group element.
pub type Elem = usize;

/// The identity is index 0 in every group built by this crate.
pub const ID: Elem = 0;

/// Default cap on the number of elements `close_generators` will enumerate.
pub const DEFAULT_ORDER_CAP: usize = 5000;

pub struct Group {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    gens: Vec<Elem>,
    labels: Option<Vec<Permutation>>,
    classes: OnceLock<Classes>,
}

struct Classes {
    list: Vec<ElementSet>,
    of: Vec<usize>,
}

impl Clone for Group {
    fn clone(&self) -> Self {
        Group {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            gens: self.gens.clone(),
            labels: self.labels.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("gens", &self.gens)
            .finish_non_exhaustive()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for Group {}

/// A subgroup of some ambient group, stored as a membership bitset.
///
/// `gens` is a generating set found while closing; equality ignores it.
#[derive(Clone)]
pub struct Subgroup {
    members: ElementSet,
    gens: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {})", self.order())
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.count()
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn iter(&self) -> set::Iter<'_> {
        self.members.iter()
    }

    pub fn intersection(&self, g: &Group, other: &Subgroup) -> Subgroup {
        g.subgroup_generated(&self.members.intersection(&other.members))
    }
}

impl Group {
    /// Enumerates the group generated by `gens` breadth-first, multiplying
    /// on the right by each generator in turn.
    pub fn close_generators(gens: &[Permutation]) -> Result<Group> {
        Self::close_generators_capped(gens, DEFAULT_ORDER_CAP)
    }

    pub fn close_generators_capped(gens: &[Permutation], cap: usize) -> Result<Group> {
        let Some(first) = gens.first() else {
            return input("no generators given");
        };
        let degree = first.degree();
        if gens.iter().any(|g| g.degree() != degree) {
            return input("generators have different degrees");
        }
        let cap = cap.min(u16::MAX as usize);
        let mut elems = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, Elem> = HashMap::new();
        index.insert(elems[0].clone(), ID);
        // parent[y] = (x, j) with y = x * gens[j]
        let mut parent: Vec<(Elem, usize)> = vec![(ID, usize::MAX)];
        let mut right: Vec<Vec<u16>> = Vec::new();
        let mut head = 0;
        while head < elems.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (j, s) in gens.iter().enumerate() {
                let y = elems[head].then(s);
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if elems.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        let i = elems.len();
                        index.insert(y.clone(), i);
                        elems.push(y);
                        parent.push((head, j));
                        i
                    }
                };
                row.push(idx as u16);
            }
            right.push(row);
            head += 1;
        }
        let n = elems.len();
        // Fill rows via x * y = (x * parent(y)) * gen, relying on BFS order.
        let mut mul = vec![0u16; n * n];
        for x in 0..n {
            mul[x * n] = x as u16;
            for y in 1..n {
                let (p, j) = parent[y];
                let xp = mul[x * n + p] as usize;
                mul[x * n + y] = right[xp][j];
            }
        }
        let inv = (0..n)
            .map(|x| (0..n).find(|&y| mul[x * n + y] == 0).unwrap() as u16)
            .collect();
        let mut gen_idx: Vec<Elem> = gens.iter().map(|g| index[g]).filter(|&g| g != ID).collect();
        gen_idx.dedup();
        Ok(Group {
            order: n,
            mul,
            inv,
            gens: gen_idx,
            labels: Some(elems),
            classes: OnceLock::new(),
        })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Group> {
        Self::close_generators(&spec.generators)
    }

    /// Builds a group from a row-major table. Checks identity at 0, that
    /// every row and column is a permutation, and computes inverses; full
    /// associativity is left to [`Group::verify_axioms`].
    pub fn from_table(order: usize, mul: Vec<u16>) -> Result<Group> {
        if order == 0 || order > u16::MAX as usize || mul.len() != order * order {
            return input(format!("table size does not match order {order}"));
        }
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return input("element 0 is not the identity");
            }
        }
        let mut seen = vec![0u32; order];
        for x in 0..order {
            for y in 0..order {
                let z = mul[x * order + y] as usize;
                if z >= order {
                    return input(format!("table entry {z} out of range"));
                }
                if seen[z] == x as u32 + 1 {
                    return input(format!("row {x} is not a permutation"));
                }
                seen[z] = x as u32 + 1;
            }
        }
        let mut inv = vec![u16::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if mul[x * order + y] == 0 {
                    inv[x] = y as u16;
                }
            }
        }
        if inv.iter().enumerate().any(|(x, &y)| mul[y as usize * order + x] != 0) {
            return input("left and right inverses differ");
        }
        let mut g = Group {
            order,
            mul,
            inv,
            gens: Vec::new(),
            labels: None,
            classes: OnceLock::new(),
        };
        g.gens = g.subgroup_generated(&ElementSet::full(order)).gens;
        Ok(g)
    }

    /// Cyclic group of order `n` as the rotation `(0 1 … n-1)`.
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return input("cyclic group of order 0");
        }
        let images = (0..n).map(|p| (p + 1) % n).collect();
        Self::close_generators(&[Permutation::from_images(images)?])
    }

    /// Canonical serialization: order, then the row-major table, all as
    /// little-endian u16.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 2 * self.mul.len());
        out.extend_from_slice(&(self.order as u16).to_le_bytes());
        for &z in &self.mul {
            out.extend_from_slice(&z.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Group> {
        if bytes.len() < 2 || bytes.len() % 2 != 0 {
            return input("truncated group table");
        }
        let words: Vec<u16> = bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect();
        let order = words[0] as usize;
        Self::from_table(order, words[1..].to_vec())
    }

    /// Exhaustive associativity for order ≤ 512, `samples` random triples
    /// above that.
    pub fn verify_axioms(&self, samples: usize) -> Result<()> {
        let n = self.order;
        let check = |x: Elem, y: Elem, z: Elem| {
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(Error::Internal(format!("not associative at ({x},{y},{z})")));
            }
            Ok(())
        };
        if n <= 512 {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            check(x, y, z)?;
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..samples {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        for x in 0..n {
            if self.mul(x, self.inv(x)) != ID || self.mul(ID, x) != x || self.mul(x, ID) != x {
                return Err(Error::Internal(format!("identity/inverse law fails at {x}")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x] as usize
    }

    /// `x^y = y⁻¹xy`
    #[inline]
    pub fn conj(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(y), x), y)
    }

    /// `[x,y] = x⁻¹y⁻¹xy`
    #[inline]
    pub fn comm(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// Left-normed `[x₁,…,x_k]`; a single entry is returned as is and an
    /// empty list gives the identity.
    pub fn comm_iter(&self, xs: &[Elem]) -> Elem {
        match xs.split_first() {
            None => ID,
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.comm(acc, x)),
        }
    }

    pub fn pow(&self, x: Elem, k: i64) -> Elem {
        let (mut base, mut e) = if k < 0 { (self.inv(x), k.unsigned_abs()) } else { (x, k as u64) };
        let mut acc = ID;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != ID {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(ID, |acc, x| self.mul(acc, x))
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn label(&self, x: Elem) -> Option<&Permutation> {
        self.labels.as_ref().map(|l| &l[x])
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: self.all(),
            gens: self.gens.clone(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            members: ElementSet::singleton(self.order, ID),
            gens: Vec::new(),
        }
    }

    fn class_data(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let mut of = vec![usize::MAX; self.order];
            let mut list = Vec::new();
            for g in 0..self.order {
                if of[g] != usize::MAX {
                    continue;
                }
                let c = self.orbit_under_conjugation(g);
                for x in &c {
                    of[x] = list.len();
                }
                list.push(c);
            }
            Classes { list, of }
        })
    }

    fn orbit_under_conjugation(&self, g: Elem) -> ElementSet {
        let mut set = ElementSet::singleton(self.order, g);
        let mut queue = vec![g];
        while let Some(x) = queue.pop() {
            for &s in &self.gens {
                let y = self.conj(x, s);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// `g^G = {x⁻¹gx : x ∈ G}`
    pub fn conjugacy_class(&self, g: Elem) -> &ElementSet {
        let c = self.class_data();
        &c.list[c.of[g]]
    }

    /// Conjugacy classes ordered by least member.
    pub fn classes(&self) -> &[ElementSet] {
        &self.class_data().list
    }

    pub fn class_index(&self, g: Elem) -> usize {
        self.class_data().of[g]
    }

    pub fn is_conjugation_closed(&self, x: &ElementSet) -> bool {
        x.iter().all(|a| self.gens.iter().all(|&s| x.contains(self.conj(a, s))))
    }

    /// `[X,Y]_Set = {[x,y] : x ∈ X, y ∈ Y}`
    pub fn set_commutator(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order);
        for a in x {
            for b in y {
                out.insert(self.comm(a, b));
            }
        }
        out
    }

    /// `XY = {xy : x ∈ X, y ∈ Y}`
    pub fn set_product(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        if x.is_full() || y.is_full() {
            if !x.is_empty() && !y.is_empty() {
                return self.all();
            }
        }
        let mut out = ElementSet::empty(self.order);
        for a in x {
            for b in y {
                out.insert(self.mul(a, b));
            }
        }
        out
    }

    pub fn set_inverse(&self, x: &ElementSet) -> ElementSet {
        ElementSet::from_elems(self.order, x.iter().map(|a| self.inv(a)))
    }

    /// `⟨X⟩`, extending a generating set one missing element at a time so
    /// that the number of closure passes stays logarithmic.
    pub fn subgroup_generated(&self, x: &ElementSet) -> Subgroup {
        self.subgroup_from(self.trivial(), x.iter())
    }

    pub fn subgroup_of(&self, xs: &[Elem]) -> Subgroup {
        self.subgroup_from(self.trivial(), xs.iter().copied())
    }

    fn subgroup_from(&self, start: Subgroup, xs: impl IntoIterator<Item = Elem>) -> Subgroup {
        let Subgroup { mut members, mut gens } = start;
        for x in xs {
            if members.contains(x) {
                continue;
            }
            gens.push(x);
            // Closing under right multiplication by all generators.
            let mut queue: Vec<Elem> = members.to_vec();
            let mut head = 0;
            while head < queue.len() {
                let e = queue[head];
                head += 1;
                for &s in &gens {
                    let y = self.mul(e, s);
                    if members.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
        Subgroup { members, gens }
    }

    /// Smallest normal subgroup containing `X`.
    pub fn normal_closure(&self, x: &ElementSet) -> Subgroup {
        let mut s = self.trivial();
        for a in x {
            if !s.contains(a) {
                s = self.subgroup_from(s, self.conjugacy_class(a).iter());
            }
        }
        s
    }

    /// `⟨g^G⟩`
    pub fn normal_closure_of(&self, g: Elem) -> Subgroup {
        self.normal_closure(&ElementSet::singleton(self.order, g))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&s| h.contains(self.conj(a, s))))
    }

    /// Checks closure under products and inverses; turns a set into a
    /// subgroup if it is one.
    pub fn as_subgroup(&self, x: &ElementSet) -> Option<Subgroup> {
        let s = self.subgroup_generated(x);
        (s.members == *x).then_some(s)
    }

    /// `[A,B]` for arbitrary subgroups: the closure of the generator
    /// commutators under conjugation by `⟨A,B⟩`.
    pub fn commutator(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = Vec::new();
        for &x in &a.gens {
            for &y in &b.gens {
                seeds.push(self.comm(x, y));
            }
        }
        let conjugators: Vec<Elem> = a.gens.iter().chain(&b.gens).copied().collect();
        self.closure_under(&seeds, &conjugators)
    }

    /// `⟨xs⟩` closed under conjugation by `conjugators`.
    fn closure_under(&self, xs: &[Elem], conjugators: &[Elem]) -> Subgroup {
        let mut s = self.subgroup_of(xs);
        loop {
            let missing: Vec<Elem> = s
                .gens
                .iter()
                .flat_map(|&g| conjugators.iter().map(move |&c| (g, c)))
                .map(|(g, c)| self.conj(g, c))
                .filter(|&y| !s.contains(y))
                .collect();
            if missing.is_empty() {
                return s;
            }
            s = self.subgroup_from(s, missing);
        }
    }

    /// Centralizer `C_G(X)`.
    pub fn centralizer(&self, x: &ElementSet) -> Subgroup {
        let members = ElementSet::from_elems(
            self.order,
            (0..self.order).filter(|&g| x.iter().all(|a| self.mul(a, g) == self.mul(g, a))),
        );
        self.subgroup_generated(&members)
    }

    pub fn center(&self) -> Subgroup {
        let gens = ElementSet::from_elems(self.order, self.gens.iter().copied());
        self.centralizer(&gens)
    }

    /// `⟨{g^k : g ∈ G}⟩`
    pub fn power_subgroup(&self, k: u64) -> Subgroup {
        let powers =
            ElementSet::from_elems(self.order, (0..self.order).map(|g| self.pow(g, k as i64)));
        self.subgroup_generated(&powers)
    }

    /// A subgroup viewed as a group in its own right. Returns the group and
    /// the embedding from its indices back into `self`; the subgroup's least
    /// members come first, so index 0 is still the identity.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (Group, Vec<Elem>) {
        let embed = h.members.to_vec();
        let mut back = vec![u16::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            back[x] = i as u16;
        }
        let n = embed.len();
        let mut mul = vec![0u16; n * n];
        for (i, &x) in embed.iter().enumerate() {
            for (j, &y) in embed.iter().enumerate() {
                mul[i * n + j] = back[self.mul(x, y)];
            }
        }
        let inv = embed.iter().map(|&x| back[self.inv(x)]).collect();
        let gens = h.gens.iter().map(|&x| back[x] as usize).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| embed.iter().map(|&x| l[x].clone()).collect());
        (
            Group {
                order: n,
                mul,
                inv,
                gens,
                labels,
                classes: OnceLock::new(),
            },
            embed,
        )
    }

    /// Transports a subgroup of a subgroup-group back along `embed`.
    pub fn embed_subgroup(&self, embed: &[Elem], s: &Subgroup) -> Subgroup {
        Subgroup {
            members: ElementSet::from_elems(self.order, s.members.iter().map(|x| embed[x])),
            gens: s.gens.iter().map(|&x| embed[x]).collect(),
        }
    }

    pub fn subgroup_from_elems(&self, xs: impl IntoIterator<Item = Elem>) -> Subgroup {
        let set = ElementSet::from_elems(self.order, xs);
        self.subgroup_generated(&set)
    }

    /// Shortest `t₁⋯t_j = target` with every `t_i ∈ factors`, found by
    /// breadth-first search from the identity; `None` past `max_len`.
    pub fn product_decomposition(&self, factors: &ElementSet, max_len: usize, target: Elem) -> Option<Vec<Elem>> {
        let ts = factors.to_vec();
        let mut parent: Vec<Option<(Elem, Elem)>> = vec![None; self.order];
        let mut seen = ElementSet::singleton(self.order, ID);
        let mut frontier = vec![ID];
        for _ in 0..max_len {
            if seen.contains(target) {
                break;
            }
            let mut next = Vec::new();
            for &x in &frontier {
                for &t in &ts {
                    let y = self.mul(x, t);
                    if seen.insert(y) {
                        parent[y] = Some((x, t));
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        if !seen.contains(target) {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = target;
        while let Some((x, t)) = parent[cur] {
            out.push(t);
            cur = x;
        }
        out.reverse();
        Some(out)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    pub(crate) fn s4() -> Group {
        Group::close_generators(&[perm("(0 1)", 4), perm("(0 1 2 3)", 4)]).unwrap()
    }

    /// Closure by repeatedly multiplying everything found so far.
    fn naive_closure(gens: &[Permutation]) -> usize {
        let mut all: std::collections::BTreeSet<Permutation> = gens.iter().cloned().collect();
        loop {
            let cur: Vec<_> = all.iter().cloned().collect();
            let before = all.len();
            for a in &cur {
                for b in &cur {
                    all.insert(a.then(b));
                }
            }
            if all.len() == before {
                return all.len();
            }
        }
    }

    #[test]
    fn product_decompositions() {
        let g = s4();
        let t: ElementSet = g.conjugacy_class(g.gens()[0]).clone();
        for x in g.elements() {
            let w = g.product_decomposition(&t, 24, x);
            let w = w.unwrap_or_else(|| panic!("{x} not reached"));
            assert_eq!(g.product(w.iter().copied()), x);
        }
        assert_eq!(g.product_decomposition(&t, 0, ID), Some(vec![]));
        let a4 = g.commutator(&g.whole(), &g.whole());
        let odd = g.elements().find(|&x| !a4.contains(x)).unwrap();
        assert!(g.product_decomposition(a4.members(), 24, odd).is_none());
    }

    #[test]
    fn closure_orders() {
        let c3 = Group::close_generators(&[perm("(0 1 2)", 3)]).unwrap();
        assert_eq!(c3.order(), 3);
        assert!(c3.is_abelian());
        let gens = [perm("(0 1)", 4), perm("(0 1 2 3)", 4)];
        let g = Group::close_generators(&gens).unwrap();
        assert_eq!(g.order(), naive_closure(&gens));
        assert_eq!(g.order(), 24);
        g.verify_axioms(0).unwrap();
        assert_eq!(Group::cyclic(7).unwrap().order(), 7);
    }

    #[test]
    fn table_agrees_with_permutations() {
        let g = s4();
        for x in g.elements() {
            for y in g.elements() {
                let p = g.label(x).unwrap().then(g.label(y).unwrap());
                assert_eq!(&p, g.label(g.mul(x, y)).unwrap());
            }
        }
        assert!(g.label(ID).unwrap().is_identity());
    }

    #[test]
    fn cap_is_enforced() {
        let gens = [perm("(0 1)", 6), perm("(0 1 2 3 4 5)", 6)];
        assert!(matches!(
            Group::close_generators_capped(&gens, 100),
            Err(Error::GroupTooLarge { cap: 100 })
        ));
        assert!(Group::close_generators(&[perm("(0 1)", 3), perm("(0 1)", 4)]).is_err());
    }

    #[test]
    fn bytes_round_trip() {
        let g = s4();
        let h = Group::from_bytes(&g.to_bytes()).unwrap();
        assert_eq!(g, h);
        assert_eq!(h.order(), 24);
        assert_eq!(h.inv(5), g.inv(5));
        assert!(Group::from_bytes(&[3, 0, 0, 0]).is_err());
    }

    #[test]
    fn classes_of_s4() {
        let g = s4();
        let t = (0..24).find(|&x| g.label(x).unwrap().to_string() == "(0 1)").unwrap();
        let class = g.conjugacy_class(t);
        // direct enumeration
        let direct = ElementSet::from_elems(24, (0..24).map(|y| g.conj(t, y)));
        assert_eq!(class, &direct);
        assert_eq!(class.count(), 6);
        assert_eq!(g.conjugacy_class(ID).to_vec(), vec![ID]);
        assert_eq!(g.classes().len(), 5);
        let c3 = Group::cyclic(5).unwrap();
        assert!(c3.elements().all(|x| c3.conjugacy_class(x).count() == 1));
    }

    #[test]
    fn generated_subgroups() {
        let g = s4();
        let find = |s: &str| (0..24).find(|&x| g.label(x).unwrap().to_string() == s).unwrap();
        let transp = g.conjugacy_class(find("(0 1)")).clone();
        assert_eq!(g.subgroup_generated(&transp).order(), 24);
        let v4 = g.subgroup_of(&[find("(0 1)(2 3)"), find("(0 2)(1 3)")]);
        assert_eq!(v4.order(), 4);
        assert!(g.is_normal(&v4));
        assert!(g.subgroup_generated(&ElementSet::empty(24)).is_trivial());
        let all = g.all();
        let a4 = g.subgroup_generated(&g.set_commutator(&all, &all));
        assert_eq!(a4.order(), 12);
        assert_eq!(g.center().order(), 1);
        assert_eq!(g.power_subgroup(1).order(), 24);
        assert_eq!(g.power_subgroup(24).order(), 1);
        assert_eq!(g.power_subgroup(2).order(), 12);
        let p4 = g.power_subgroup(4);
        assert!(g.is_normal(&p4));
        // every element of odd order lies in ⟨g^4⟩
        assert!(g.elements().filter(|&x| g.element_order(x) % 2 == 1).all(|x| p4.contains(x)));
    }

    #[test]
    fn subgroup_as_group_keeps_identity() {
        let g = s4();
        let a4 = g.power_subgroup(2);
        let (h, embed) = g.subgroup_as_group(&a4);
        assert_eq!(h.order(), 12);
        assert_eq!(embed[0], ID);
        h.verify_axioms(0).unwrap();
        for x in h.elements() {
            for y in h.elements() {
                assert_eq!(embed[h.mul(x, y)], g.mul(embed[x], embed[y]));
            }
        }
    }
}
