//! Brute-force oracles shared by the integration tests. They use only the
//! multiplication table, never the library's subgroup algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use grpeq::catalog::lookup;
use grpeq::reduction::GraphInstance;
use grpeq::Group;

pub type Set = BTreeSet<usize>;

pub fn load(name: &str) -> Group {
    lookup(name).unwrap_or_else(|| panic!("no catalog entry {name}")).load().unwrap()
}

pub fn all(g: &Group) -> Set {
    (0..g.order()).collect()
}

pub fn set_of(s: &grpeq::Subgroup) -> Set {
    s.iter().collect()
}

/// Closure under multiplication, starting from the identity.
pub fn closure(g: &Group, gens: &Set) -> Set {
    let mut out: Set = [0].into();
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if out.insert(y) {
                frontier.push(y);
            }
        }
    }
    out
}

pub fn comm(g: &Group, x: usize, y: usize) -> usize {
    g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))
}

pub fn commutator(g: &Group, a: &Set, b: &Set) -> Set {
    let gens = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| comm(g, x, y)).collect();
    closure(g, &gens)
}

pub fn class(g: &Group, x: usize) -> Set {
    (0..g.order()).map(|y| g.mul(g.mul(g.inv(y), x), y)).collect()
}

pub fn normal_closure(g: &Group, x: usize) -> Set {
    closure(g, &class(g, x))
}

/// Terms of `A, [A,A], [A,A,A], …` until stable.
pub fn lower_central(g: &Group, a: &Set) -> Vec<Set> {
    let mut out = vec![a.clone()];
    loop {
        let next = commutator(g, out.last().unwrap(), a);
        if &next == out.last().unwrap() {
            return out;
        }
        out.push(next);
    }
}

pub fn is_nilpotent(g: &Group, a: &Set) -> bool {
    lower_central(g, a).last().unwrap().len() == 1
}

/// `A ⊇ γ_∞A ⊇ γ_∞γ_∞A ⊇ … ⊇ 1`; panics if it stalls.
pub fn lower_fitting(g: &Group, a: &Set) -> Vec<Set> {
    let mut out = vec![a.clone()];
    while out.last().unwrap().len() > 1 {
        let next = lower_central(g, out.last().unwrap()).pop().unwrap();
        assert!(&next != out.last().unwrap(), "not solvable");
        out.push(next);
    }
    out
}

pub fn fitting_length(g: &Group, a: &Set) -> usize {
    lower_fitting(g, a).len() - 1
}

/// Stable value of `K ← [K, ⟨x^G⟩]`.
pub fn eta(g: &Group, k: &Set, x: usize) -> Set {
    let n = normal_closure(g, x);
    let mut cur = k.clone();
    loop {
        let next = commutator(g, &cur, &n);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Proper `c`-colorings by plain enumeration.
pub fn colorable(n: usize, edges: &[(usize, usize)], c: usize) -> bool {
    let mut col = vec![0usize; n];
    loop {
        if edges.iter().all(|&(u, v)| col[u] != col[v]) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            col[i] += 1;
            if col[i] < c {
                break;
            }
            col[i] = 0;
            i += 1;
        }
    }
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> GraphInstance {
    GraphInstance::new(n, edges.iter().copied(), 3).unwrap()
}
