//! Exact decision for compiled instances.
//!
//! Whether a gadget value lies in `H` depends only on the cosets of its
//! endpoints, so it is enough to range over one representative per coset
//! for each vertex. For every such tuple the image of each batch `γ_r` over
//! its auxiliary variables is computed as a set and checked against the
//! two cases it must fall into; a colorable graph then comes with an
//! explicit assignment that is evaluated on `δ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::cert::KHCertificate;
use super::compile::CompiledInstance;
use super::graph::GraphInstance;
use crate::error::{input, Error, Result};
use crate::expr::builders::commutator_fixed_witness;
use crate::expr::{assignment_count, Assignment, VarId};
use crate::group::{Elem, ElementSet, Group, SetCommChain, ID};

/// Largest `|δ|` for which the witness is checked by folding the flat token
/// stream; above it the tree is evaluated node by node.
pub const DEFAULT_STREAM_LIMIT: u128 = 500_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Streaming,
    Tree,
}

#[derive(Clone, Debug)]
pub struct SatWitness {
    /// Color of each vertex, read off the cosets of the `X_i`.
    pub coloring: Vec<usize>,
    pub assignment: Assignment,
    /// `δ` under `assignment`; always `h̃`.
    pub value: Elem,
    pub mode: EvalMode,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub sat: bool,
    pub id: bool,
    pub tuples: u128,
    pub witness: Option<SatWitness>,
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Cap on the number of coset tuples.
    pub budget: u128,
    pub stream_limit: u128,
    pub want_witness: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            budget: crate::expr::DEFAULT_BUDGET,
            stream_limit: DEFAULT_STREAM_LIMIT,
            want_witness: true,
        }
    }
}

/// `[K, M·g₁^G, …, M·g_R^G]_Set` for the gadget values of one batch.
struct BatchImage {
    chain: SetCommChain,
    /// `T^{|K|}`: the image of `γ_r`.
    image: ElementSet,
}

struct Ctx<'a> {
    g: &'a Group,
    cert: &'a KHCertificate,
    inst: &'a CompiledInstance,
    cache: Mutex<HashMap<Vec<usize>, Arc<BatchImage>>>,
}

/// `{t₁⋯t_j : j ≤ k, t_i ∈ T}`.
fn power_set(g: &Group, t: &ElementSet, k: usize) -> ElementSet {
    let ts = t.to_vec();
    let mut seen = ElementSet::singleton(g.order(), ID);
    let mut frontier = vec![ID];
    for _ in 0..k {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in &ts {
                let z = g.mul(x, y);
                if seen.insert(z) {
                    next.push(z);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

impl Ctx<'_> {
    fn batch(&self, values: &[Elem]) -> Arc<BatchImage> {
        let key: Vec<usize> = values.iter().map(|&x| self.g.class_index(x)).collect();
        if let Some(b) = self.cache.lock().unwrap().get(&key) {
            return b.clone();
        }
        let rights: Vec<&ElementSet> = values
            .iter()
            .flat_map(|&x| std::iter::repeat(self.g.conjugacy_class(x)).take(self.inst.m))
            .collect();
        let chain = SetCommChain::new(self.g, self.cert.k().members(), &rights);
        let image = power_set(self.g, chain.last(), self.inst.k_order);
        let b = Arc::new(BatchImage { chain, image });
        self.cache.lock().unwrap().insert(key, b.clone());
        b
    }

    /// Checks one coset tuple. Returns whether all gadgets avoid `H`.
    fn check_tuple(&self, xs: &[Elem]) -> Result<bool> {
        let (g, inst, h) = (self.g, self.inst, self.cert.h());
        let mut images = Vec::with_capacity(inst.r);
        let mut outside_all = true;
        for batch in &inst.batches {
            let values: Vec<Elem> = batch.iter().map(|gd| gd.value(g, xs)).collect();
            let outside = values.iter().all(|&v| !h.contains(v));
            outside_all &= outside;
            let b = self.batch(&values);
            let ok = if outside {
                b.image == *self.cert.k().members()
            } else {
                b.image.is_subset(self.cert.fit_k().members())
            };
            if !ok {
                return Err(Error::Internal("batch image contradicts the certificate".into()));
            }
            images.push(b);
        }
        let mut delta = images[0].image.clone();
        for (i, b) in images.iter().enumerate() {
            for mu in 0..inst.m {
                if i == 0 && mu == 0 {
                    continue;
                }
                delta = g.set_commutator(&delta, &b.image);
            }
        }
        let ok = if outside_all {
            delta.contains(inst.h_tilde)
        } else {
            delta.count() == 1 && delta.contains(ID)
        };
        if !ok {
            return Err(Error::Internal("image of delta contradicts the certificate".into()));
        }
        Ok(outside_all)
    }
}

fn tuple(index: u64, n: usize, reps: &[Elem]) -> (Vec<usize>, Vec<Elem>) {
    let c = reps.len() as u64;
    let mut colors = vec![0; n];
    let mut k = index;
    for i in (0..n).rev() {
        colors[i] = (k % c) as usize;
        k /= c;
    }
    let xs = colors.iter().map(|&col| reps[col]).collect();
    (colors, xs)
}

/// Decides the SAT and ID instances of `inst` exactly and, when the graph
/// is colorable, returns an assignment with `δ = h̃`.
pub fn decide_compiled(
    cert: &KHCertificate,
    graph: &GraphInstance,
    inst: &CompiledInstance,
    opts: DecideOptions,
) -> Result<Decision> {
    let g = cert.group();
    if inst.k_order != cert.k().order()
        || inst.m != cert.m()
        || inst.vertices != graph.vertices()
        || inst.edges != graph.edges()
        || inst.colors != cert.report().index
    {
        return input("compiled instance does not match the certificate and graph");
    }
    let alpha_image = crate::expr::builders::commutator_fixed_inducer(g, cert.k())?.image(g, &Assignment::empty(0))?;
    if alpha_image != *cert.k().members() {
        return Err(Error::Internal("inducer image differs from K".into()));
    }
    let tuples = assignment_count(inst.colors, inst.vertices);
    if tuples > opts.budget {
        return Err(Error::BudgetExceeded { needed: tuples, budget: opts.budget });
    }
    let ctx = Ctx { g, cert, inst, cache: Mutex::new(HashMap::new()) };
    let verdicts = (0..tuples as u64)
        .into_par_iter()
        .map(|i| ctx.check_tuple(&tuple(i, inst.vertices, &inst.xi).1))
        .collect::<Result<Vec<bool>>>()?;
    let first = verdicts.iter().position(|&v| v);
    let sat = first.is_some();
    let witness = match first {
        Some(i) if opts.want_witness => {
            let (colors, xs) = tuple(i as u64, inst.vertices, &inst.xi);
            Some(build_witness(&ctx, colors, &xs, opts.stream_limit)?)
        }
        _ => None,
    };
    Ok(Decision { sat, id: !sat, tuples, witness })
}

fn build_witness(ctx: &Ctx, coloring: Vec<usize>, xs: &[Elem], stream_limit: u128) -> Result<SatWitness> {
    let (g, inst, k) = (ctx.g, ctx.inst, ctx.cert.k());
    let missing = || Error::Internal("witness reconstruction failed".into());
    let mut sigma = Assignment::total(std::iter::repeat(ID).take(inst.var_count as usize));
    for (i, &x) in xs.iter().enumerate() {
        sigma.set(VarId(i as u32), x);
    }
    // h̃ = [c_{1,1}, …, c_{R,M}] with every c in K
    let rights = vec![k.members(); inst.r * inst.m - 1];
    let top = SetCommChain::new(g, k.members(), &rights);
    let cs = top.decompose(inst.h_tilde).ok_or_else(missing)?;
    for (ri, batch) in inst.batches.iter().enumerate() {
        let values: Vec<Elem> = batch.iter().map(|gd| gd.value(g, xs)).collect();
        let b = ctx.batch(&values);
        let conjugators: Vec<HashMap<Elem, Elem>> = values
            .iter()
            .map(|&v| {
                let mut map = HashMap::new();
                for z in g.elements() {
                    map.entry(g.conj(v, z)).or_insert(z);
                }
                map
            })
            .collect();
        for mu in 0..inst.m {
            let c = cs[ri * inst.m + mu];
            let mut ts = g.product_decomposition(b.chain.last(), inst.k_order, c).ok_or_else(missing)?;
            ts.resize(inst.k_order, ID);
            for (kk, t) in ts.into_iter().enumerate() {
                let parts = b.chain.decompose(t).ok_or_else(missing)?;
                let base = inst.block_base(ri, mu, kk);
                let alpha = commutator_fixed_witness(g, k, parts[0]).ok_or_else(missing)?;
                for (v, x) in alpha.iter() {
                    sigma.set(VarId(base as u32 + v.0), x);
                }
                for (j, &y) in parts[1..].iter().enumerate() {
                    let (s, nu) = (j / inst.m, j % inst.m);
                    let z = conjugators[s][&y];
                    sigma.set(VarId(inst.z_var(ri, mu, kk, s, nu) as u32), z);
                }
            }
        }
    }
    let (value, mode) = if inst.len <= stream_limit {
        (inst.delta.evaluate_streaming(g, &sigma)?, EvalMode::Streaming)
    } else {
        (inst.delta.evaluate(g, &sigma)?, EvalMode::Tree)
    };
    if value != inst.h_tilde {
        return Err(Error::Internal(format!("witness evaluates to {value}, not h~ = {}", inst.h_tilde)));
    }
    Ok(SatWitness { coloring, assignment: sigma, value, mode })
}
