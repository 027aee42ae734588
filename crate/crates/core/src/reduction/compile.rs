//! Compiles a coloring instance into an expression `δ` and a target `h̃`.
//!
//! Variable layout: `X_i` is variable `i`. After the `n` vertex variables
//! come blocks indexed by `(r, μ, k)` in that order; each block holds the
//! `T` variables of one inducer copy `α` followed by the conjugators
//! `Z_{s,ν}` at offset `T + s·M + ν`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use super::cert::KHCertificate;
use super::graph::GraphInstance;
use crate::error::{input, Error, Result};
use crate::expr::builders::commutator_fixed_inducer;
use crate::expr::{Term, Token, VarId};
use crate::group::{Elem, ElementSet, Group, ID};

/// A gadget is `X_i X_j⁻¹` for an edge, or a constant outside `H` when the
/// graph has no edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gadget {
    Edge(usize, usize),
    Const(Elem),
}

impl Gadget {
    pub fn term(self) -> Term {
        match self {
            Gadget::Edge(i, j) => Term::word(vec![Token::Var(VarId(i as u32)), Token::InvVar(VarId(j as u32))]),
            Gadget::Const(c) => Term::constant(c),
        }
    }

    pub fn value(self, g: &Group, xs: &[Elem]) -> Elem {
        match self {
            Gadget::Edge(i, j) => g.mul(xs[i], g.inv(xs[j])),
            Gadget::Const(c) => c,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledInstance {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub colors: usize,
    /// Batch count and batch size.
    pub r: usize,
    pub m: usize,
    pub k_order: usize,
    /// Variables per inducer copy.
    pub alpha_vars: usize,
    /// `batches[r][s]` is the gadget `β_{r,s}`.
    pub batches: Vec<Vec<Gadget>>,
    /// Color `c` is the coset of `xi[c]`, cosets ordered by least element.
    pub xi: Vec<Elem>,
    pub h_tilde: Elem,
    pub delta: Term,
    pub var_count: u32,
    pub len: u128,
}

/// Size summary for reports.
#[derive(Clone, Debug, Serialize)]
pub struct CompiledSummary {
    pub vertices: usize,
    pub edges: usize,
    pub colors: usize,
    pub r: usize,
    pub m: usize,
    pub k_order: usize,
    pub h_tilde: Elem,
    pub vars: u32,
    pub len: String,
    pub log2_len: f64,
}

/// Least-element representatives of the cosets of a normal `H`.
pub fn coset_reps(g: &Group, h: &crate::group::Subgroup) -> Vec<Elem> {
    let mut seen = ElementSet::empty(g.order());
    let mut reps = Vec::new();
    for x in g.elements() {
        if !seen.contains(x) {
            reps.push(x);
            for y in h.iter() {
                seen.insert(g.mul(x, y));
            }
        }
    }
    reps
}

fn ceil_sqrt(m: usize) -> usize {
    let mut r = (m as f64).sqrt() as usize;
    while r * r < m {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= m {
        r -= 1;
    }
    r
}

/// `[K, …, K]_Set` with `count` entries, stopping early once stable.
pub fn iterated_k(g: &Group, k: &ElementSet, count: usize) -> ElementSet {
    let mut s = k.clone();
    for _ in 1..count {
        let next = g.set_commutator(&s, k);
        if next == s {
            break;
        }
        s = next;
    }
    s
}

impl CompiledInstance {
    pub fn stride(&self) -> usize {
        self.alpha_vars + self.r * self.m
    }

    pub fn block_base(&self, r: usize, mu: usize, k: usize) -> usize {
        self.vertices + ((r * self.m + mu) * self.k_order + k) * self.stride()
    }

    pub fn z_var(&self, r: usize, mu: usize, k: usize, s: usize, nu: usize) -> usize {
        self.block_base(r, mu, k) + self.alpha_vars + s * self.m + nu
    }

    /// `δ·h̃⁻¹`: satisfiable iff the graph is colorable.
    pub fn sat_term(&self, g: &Group) -> Term {
        Term::product(vec![self.delta.clone(), Term::constant(g.inv(self.h_tilde))])
    }

    /// `δ`: an identity iff the graph is not colorable.
    pub fn id_term(&self) -> Term {
        self.delta.clone()
    }

    pub fn summary(&self) -> CompiledSummary {
        CompiledSummary {
            vertices: self.vertices,
            edges: self.edges.len(),
            colors: self.colors,
            r: self.r,
            m: self.m,
            k_order: self.k_order,
            h_tilde: self.h_tilde,
            vars: self.var_count,
            len: self.len.to_string(),
            log2_len: (self.len as f64).log2(),
        }
    }

    /// Key-value sidecar describing the variable roles.
    pub fn sidecar(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vertices={}", self.vertices);
        let _ = writeln!(s, "edges={}", self.edges.len());
        let _ = writeln!(s, "colors={}", self.colors);
        let _ = writeln!(s, "R={}", self.r);
        let _ = writeln!(s, "M={}", self.m);
        let _ = writeln!(s, "K_order={}", self.k_order);
        let _ = writeln!(s, "h_tilde={}", self.h_tilde);
        let _ = writeln!(s, "vars={}", self.var_count);
        let _ = writeln!(s, "length={}", self.len);
        let _ = writeln!(s, "alpha_vars={}", self.alpha_vars);
        let _ = writeln!(s, "block_stride={}", self.stride());
        let _ = writeln!(s, "role.X=0..{}", self.vertices);
        let _ = writeln!(
            s,
            "role.block=base {} + ((r*M + mu)*K_order + k)*block_stride; alpha at +0, Z(s,nu) at +alpha_vars + s*M + nu",
            self.vertices
        );
        let reps: Vec<String> = self.xi.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "xi={}", reps.join(" "));
        for (r, batch) in self.batches.iter().enumerate() {
            let gs: Vec<String> = batch
                .iter()
                .map(|gd| match gd {
                    Gadget::Edge(i, j) => format!("x{i}/x{j}"),
                    Gadget::Const(c) => format!("g{c}"),
                })
                .collect();
            let _ = writeln!(s, "batch.{r}={}", gs.join(" "));
        }
        s
    }
}

/// Builds `δ` from the certificate and the graph. Requires an ambient group
/// of Fitting length 3 and as many colors as cosets of `H`.
pub fn compile_coloring(cert: &KHCertificate, graph: &GraphInstance) -> Result<CompiledInstance> {
    let g = cert.group();
    let rep = cert.report();
    if rep.fitting_length != 3 || rep.fitl_k != 2 {
        return input(format!(
            "compiler needs Fitting lengths 3 and 2 for G and K, got {} and {}",
            rep.fitting_length, rep.fitl_k
        ));
    }
    if graph.colors() != rep.index {
        return input(format!("graph asks for {} colors but |G/H| = {}", graph.colors(), rep.index));
    }
    let (n, m_edges) = (graph.vertices(), graph.edges().len());
    let m = cert.m();
    let k = cert.k();
    let k_order = k.order();

    let gadgets: Vec<Gadget> = if m_edges == 0 {
        let outside = g.elements().find(|&x| !cert.h().contains(x)).unwrap();
        vec![Gadget::Const(outside)]
    } else {
        graph.edges().iter().map(|&(i, j)| Gadget::Edge(i, j)).collect()
    };
    let r = ceil_sqrt(gadgets.len());
    let slots: Vec<Gadget> = (0..r * r).map(|i| gadgets[i.min(gadgets.len() - 1)]).collect();
    let batches: Vec<Vec<Gadget>> = slots.chunks(r).map(<[Gadget]>::to_vec).collect();

    let alpha = Arc::new(commutator_fixed_inducer(g, k)?);
    let alpha_vars = alpha.var_bound() as usize;
    let mut inst = CompiledInstance {
        vertices: n,
        edges: graph.edges().to_vec(),
        colors: graph.colors(),
        r,
        m,
        k_order,
        alpha_vars,
        batches,
        xi: coset_reps(g, cert.h()),
        h_tilde: ID,
        delta: Term::product(vec![]),
        var_count: 0,
        len: 0,
    };
    let var_count = inst.block_base(r, 0, 0);
    if var_count > u32::MAX as usize {
        return Err(Error::BudgetExceeded { needed: var_count as u128, budget: u32::MAX as u128 });
    }
    let betas: Vec<Vec<Term>> = inst.batches.iter().map(|b| b.iter().map(|gd| gd.term()).collect()).collect();
    let mut gammas = Vec::with_capacity(r * m);
    for (ri, batch) in betas.iter().enumerate() {
        for mu in 0..m {
            let factors = (0..k_order)
                .map(|kk| {
                    let mut entries = Vec::with_capacity(1 + r * m);
                    entries.push(Term::shifted(&alpha, inst.block_base(ri, mu, kk) as u32));
                    for (s, beta) in batch.iter().enumerate() {
                        for nu in 0..m {
                            let z = inst.z_var(ri, mu, kk, s, nu) as u32;
                            entries.push(Term::conjugate(beta.clone(), Term::var(z)));
                        }
                    }
                    Term::commutator(entries)
                })
                .collect();
            gammas.push(Term::product(factors));
        }
    }
    inst.delta = Term::commutator(gammas);
    inst.var_count = var_count as u32;
    inst.len = inst.delta.len();

    let top = iterated_k(g, k.members(), m * r);
    inst.h_tilde = top
        .iter()
        .find(|&x| x != ID)
        .ok_or_else(|| Error::Internal("iterated set commutator of K is trivial".into()))?;
    Ok(inst)
}
