//! Iterated set commutators with one recorded decomposition per element.

use super::{Elem, ElementSet, Group};

/// `S₀ = X`, `S_j = [S_{j−1}, Y_j]_Set`, remembering for each element of
/// `S_j` the first pair `(s, y)` that produced it (ascending order).
#[derive(Clone, Debug)]
pub struct SetCommChain {
    sets: Vec<ElementSet>,
    back: Vec<Vec<Option<(Elem, Elem)>>>,
}

impl SetCommChain {
    pub fn new(g: &Group, first: &ElementSet, rights: &[&ElementSet]) -> Self {
        let n = g.order();
        let mut sets = vec![first.clone()];
        let mut back = vec![Vec::new()];
        for y in rights {
            let ys = y.to_vec();
            let prev = sets.last().unwrap();
            let mut next = ElementSet::empty(n);
            let mut ptr = vec![None; n];
            for x in prev.iter() {
                for &b in &ys {
                    let z = g.comm(x, b);
                    if next.insert(z) {
                        ptr[z] = Some((x, b));
                    }
                }
            }
            sets.push(next);
            back.push(ptr);
        }
        SetCommChain { sets, back }
    }

    /// `[S₀, Y₁, …, Y_k]_Set`.
    pub fn last(&self) -> &ElementSet {
        self.sets.last().unwrap()
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    /// `[x₀, y₁, …, y_k] = x` with `x₀ ∈ S₀`, `y_j ∈ Y_j`.
    pub fn decompose(&self, x: Elem) -> Option<Vec<Elem>> {
        if !self.last().contains(x) {
            return None;
        }
        let mut out = Vec::with_capacity(self.sets.len());
        let mut cur = x;
        for step in (1..self.sets.len()).rev() {
            let (p, y) = self.back[step][cur]?;
            out.push(y);
            cur = p;
        }
        out.push(cur);
        out.reverse();
        Some(out)
    }
}
