//! AND programs from a subnormal chain `1 = H₀ ◁ H₁ ◁ … ◁ H_m = G` in which
//! each `H_i` is a lower central term of `H_{i+1}`.

use super::{commutator_program, GProgram, Instr};
use crate::error::{input, Error, Result};
use crate::expr::builders::comm_word_len;
use crate::group::{Elem, Group, SetCommChain, Subgroup, ID};

/// A validated chain. `ks[i]` describes `H_i` as a term of the lower
/// central series of `H_{i+1}`: `None` for the nilpotent residual,
/// `Some(k)` for the term spanned by `(k+1)`-fold commutators.
#[derive(Clone, Debug)]
pub struct ChainSpec {
    series: Vec<Subgroup>,
    ks: Vec<Option<usize>>,
    min_arity: usize,
}

/// Checks `series` (ascending, `H₀ = 1`, `H_m = G`) against `ks`, which
/// lists `k₁, …, k_{m−1}`; `k₀` is always the nilpotent residual.
pub fn derive_chain(g: &Group, series: Vec<Subgroup>, ks: Vec<Option<usize>>) -> Result<ChainSpec> {
    let m = series.len().checked_sub(1).filter(|&m| m >= 1);
    let Some(m) = m else {
        return input("chain needs at least H0 and H1");
    };
    if !series[0].is_trivial() || series[m].order() != g.order() {
        return input("chain must run from the trivial group to G");
    }
    if ks.len() != m - 1 {
        return input(format!("chain of length {m} needs {} entries in ks", m - 1));
    }
    let ks: Vec<Option<usize>> = std::iter::once(None).chain(ks).collect();
    let mut min_arity = 2;
    for i in 0..m {
        let above = &series[i + 1];
        let lcs = g.lower_central_series_of(above);
        let ok = match ks[i] {
            None => {
                if i > 0 {
                    min_arity = min_arity.max(lcs.len());
                }
                lcs.last() == Some(&series[i])
            }
            Some(0) => false,
            Some(k) => {
                min_arity = min_arity.max(k + 1);
                g.gamma(above, k + 1) == series[i]
            }
        };
        if !ok {
            return input(format!("H{i} is not the declared lower central term of H{}", i + 1));
        }
    }
    Ok(ChainSpec { series, ks, min_arity })
}

impl ChainSpec {
    /// The lower Fitting series read upwards, with every step a nilpotent
    /// residual.
    pub fn lower_fitting(g: &Group) -> Result<ChainSpec> {
        let mut series = g.lower_fitting_series()?;
        series.reverse();
        let m = series.len() - 1;
        if m == 0 {
            return input("trivial group has no chain");
        }
        derive_chain(g, series, vec![None; m - 1])
    }

    pub fn len(&self) -> usize {
        self.series.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn series(&self) -> &[Subgroup] {
        &self.series
    }

    pub fn ks(&self) -> &[Option<usize>] {
        &self.ks
    }

    fn inner(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.ks[1..].iter().copied()
    }

    /// Number of inner levels that use the nilpotent residual.
    pub fn c(&self) -> usize {
        self.inner().filter(Option::is_none).count()
    }

    /// `∏ (k_i + 1)` over the finite inner levels.
    pub fn cap_c(&self) -> u128 {
        self.inner().flatten().map(|k| k as u128 + 1).product()
    }

    /// `c / C^{1/c}`, the constant in the `2^{O(D·n^{1/c})}` length bound.
    pub fn d(&self) -> f64 {
        let c = self.c();
        if c == 0 {
            return 0.0;
        }
        c as f64 / (self.cap_c() as f64).powf(1.0 / c as f64)
    }

    /// Smallest arity that keeps every residual level generated by its
    /// set commutators.
    pub fn min_arity(&self) -> usize {
        self.min_arity
    }

    /// Arity of the residual levels for `n` inputs.
    pub fn arity(&self, n: usize) -> Result<usize> {
        let (c, cap) = (self.c() as u32, self.cap_c());
        if c == 0 {
            if n as u128 > cap {
                return input(format!("chain has only {cap} leaves, {n} inputs requested"));
            }
            return Ok(self.min_arity);
        }
        let mut k = 1usize;
        while cap.saturating_mul((k as u128).saturating_pow(c)) < n as u128 {
            k += 1;
        }
        Ok(k.max(self.min_arity))
    }

    /// Commutator entries at level `i ∈ [1, m−1]` for arity `k`.
    pub fn entries(&self, i: usize, k: usize) -> usize {
        self.ks[i].map_or(k, |f| f + 1)
    }

    pub fn leaf_count(&self, k: usize) -> u128 {
        (1..self.len()).map(|i| self.entries(i, k) as u128).product()
    }

    /// Exact instruction count of the program for `n` inputs.
    pub fn program_len(&self, n: usize) -> Result<u128> {
        if n <= 1 {
            return Ok(1);
        }
        let k = self.arity(n)?;
        Ok((1..self.len()).fold(1u128, |acc, i| acc.saturating_mul(comm_word_len(self.entries(i, k)))))
    }

    /// `2^{Σ(k_ℓ+2)}·(2^{K+1})^c` in log2 form.
    pub fn length_bound_log2(&self, n: usize) -> Result<f64> {
        let k = self.arity(n)?;
        let fin: usize = self.inner().flatten().map(|f| f + 2).sum();
        Ok(fin as f64 + (self.c() * (k + 1)) as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessNode {
    pub value: Elem,
    pub level: usize,
    pub children: Vec<usize>,
    /// Input read by a leaf; `None` for inner nodes and frozen leaves.
    pub bit: Option<usize>,
}

/// Decomposition of the target: each inner node is the left-normed
/// commutator of its children. Node 0 is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessTree {
    pub nodes: Vec<WitnessNode>,
}

impl WitnessTree {
    pub fn root(&self) -> Elem {
        self.nodes[0].value
    }

    pub fn leaves(&self) -> impl Iterator<Item = &WitnessNode> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    /// Every inner value matches the commutator of its children.
    pub fn check(&self, g: &Group) -> bool {
        self.nodes.iter().all(|n| {
            n.children.is_empty() || {
                let xs: Vec<Elem> = n.children.iter().map(|&c| self.nodes[c].value).collect();
                g.comm_iter(&xs) == n.value
            }
        })
    }
}

/// Builds a program over `n` inputs evaluating to a fixed `g ≠ 1` on the
/// all-ones input and to 1 elsewhere. Fails with `BudgetExceeded` when the
/// instruction count would exceed `budget`.
pub fn build_and_program(
    g: &Group,
    spec: &ChainSpec,
    n: usize,
    budget: u128,
) -> Result<(GProgram, Elem, WitnessTree)> {
    if n == 0 {
        return input("AND program needs at least one input");
    }
    let needed = spec.program_len(n)?;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let k = if n == 1 { spec.min_arity() } else { spec.arity(n)? };
    let m = spec.len();
    // levels[i] decomposes A_i into entries of A_{i+1}, for i in 1..m
    let mut levels: Vec<Option<SetCommChain>> = (0..=m).map(|_| None).collect();
    let mut above = g.all();
    for i in (1..m).rev() {
        let rights = vec![&above; spec.entries(i, k) - 1];
        let d = SetCommChain::new(g, &above, &rights);
        if g.subgroup_generated(d.last()) != spec.series()[i] {
            return Err(Error::Internal(format!("A{i} does not generate H{i}")));
        }
        above = d.last().clone();
        levels[i] = Some(d);
    }
    let target = above.iter().find(|&x| x != ID).ok_or(Error::NoWitness)?;

    if n == 1 {
        let tree = WitnessTree {
            nodes: vec![WitnessNode { value: target, level: 1, children: vec![], bit: Some(0) }],
        };
        let p = GProgram::new(vec![Instr { bit: 0, a: ID, b: target }], 1)?;
        return Ok((p, target, tree));
    }

    let mut tree = WitnessTree::default();
    let mut next_bit = 0;
    let program = expand(g, &levels, m, 1, target, n, &mut next_bit, &mut tree);
    debug_assert_eq!(next_bit, n);
    Ok((program, target, tree))
}

#[allow(clippy::too_many_arguments)]
fn expand(
    g: &Group,
    levels: &[Option<SetCommChain>],
    m: usize,
    level: usize,
    value: Elem,
    n: usize,
    next_bit: &mut usize,
    tree: &mut WitnessTree,
) -> GProgram {
    let id = tree.nodes.len();
    tree.nodes.push(WitnessNode { value, level, children: vec![], bit: None });
    if level == m {
        let (bit, a) = if *next_bit < n {
            *next_bit += 1;
            (*next_bit - 1, ID)
        } else {
            (0, value)
        };
        if a == ID {
            tree.nodes[id].bit = Some(bit);
        }
        return GProgram { instrs: vec![Instr { bit, a, b: value }], inputs: n };
    }
    let parts = levels[level].as_ref().unwrap().decompose(value).expect("value lies in its level set");
    let mut progs = Vec::with_capacity(parts.len());
    for x in parts {
        let child = tree.nodes.len();
        tree.nodes[id].children.push(child);
        progs.push(expand(g, levels, m, level + 1, x, n, next_bit, tree));
    }
    commutator_program(g, &progs)
}
