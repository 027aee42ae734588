//! The invariant suite behind `verify-all`.
//!
//! Every check compares a construction against an independent computation
//! in the group core or a brute-force solver and records the first
//! mismatch it sees.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, scan_criteria};
use crate::config::Config;
use crate::error::Result;
use crate::expr::builders::{
    commutator_fixed_inducer, fitting_definer, gamma_inducer, lower_fitting_inducer, power_inducer,
    upper_fitting_definer,
};
use crate::expr::{image_exact, Assignment, Term, VarId};
use crate::gprogram::{build_and_program, ChainSpec};
use crate::group::{ElementSet, Group, Subgroup, ID};
use crate::reduction::{compile_coloring, decide_compiled, find_kh, DecideOptions, GraphInstance, KHCertificate};
use crate::solver::{check_function, color_bruteforce, SolveBudget};

/// Largest group on which inducers and definers are checked exhaustively.
pub const SMALL_ORDER: usize = 72;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

fn run(name: &str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) -> Check {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name: name.into(), passed, detail, millis: t.elapsed().as_millis() }
}

type Outcome = Result<std::result::Result<String, String>>;

fn small_groups() -> Result<Vec<(String, Group)>> {
    let mut out = Vec::new();
    for e in catalog::entries().iter().filter(|e| e.order <= SMALL_ORDER) {
        out.push((e.name.to_string(), e.load()?));
    }
    out.push(("c6".into(), Group::cyclic(6)?));
    Ok(out)
}

/// Normal subgroups worth testing: terms of the standard series.
pub fn series_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    let mut out = g.derived_series();
    out.extend(g.lower_central_series());
    out.extend(g.upper_fitting_series()?);
    out.extend(g.lower_fitting_series()?);
    out.push(g.center());
    out.sort_by_key(|s| (s.order(), s.members().to_vec()));
    out.dedup();
    Ok(out)
}

/// Image of `t` with every variable from `keep` on fixed to the identity,
/// checked by brute force against the tree image.
fn truncation_agrees(g: &Group, t: &Term, keep: u32) -> Result<bool> {
    let bound = t.var_bound();
    let mut sigma = Assignment::empty(bound as usize);
    for v in keep.min(bound)..bound {
        sigma.set(VarId(v), ID);
    }
    let tree = t.image(g, &sigma)?;
    let flat = t.to_expression(g, 1_000_000)?;
    Ok(tree == image_exact(g, &flat, &sigma, 50_000_000)?)
}

fn truncation_vars(g: &Group, t: &Term) -> u32 {
    let mut v = 0;
    while v < 3 && (g.order() as u128).pow(v + 1) * t.len() <= 20_000_000 {
        v += 1;
    }
    v
}

pub fn check_inducers(g: &Group) -> Outcome {
    let mut cases: Vec<(String, Term, ElementSet)> = Vec::new();
    for k in 1..=6u32 {
        cases.push((format!("power {k}"), power_inducer(g, k), g.power_subgroup(k as u64).members().clone()));
    }
    let lcs = g.lower_central_series();
    for k in 1..=lcs.len() + 1 {
        let want = lcs[(k - 1).min(lcs.len() - 1)].members().clone();
        cases.push((format!("gamma {k}"), gamma_inducer(g, k)?, want));
    }
    for (i, l) in g.lower_fitting_series()?.iter().enumerate() {
        cases.push((format!("lower Fitting {i}"), lower_fitting_inducer(g, i)?, l.members().clone()));
    }
    for k in series_subgroups(g)? {
        if g.commutator(&k, &g.whole()) == k {
            cases.push((format!("commutator-fixed |K|={}", k.order()), commutator_fixed_inducer(g, &k)?, k.members().clone()));
        }
    }
    let free = Assignment::default();
    for (name, t, want) in &cases {
        if t.image(g, &free)? != *want {
            return Ok(Err(format!("{name}: image differs")));
        }
        let keep = truncation_vars(g, t);
        if keep > 0 && !truncation_agrees(g, t, keep)? {
            return Ok(Err(format!("{name}: truncated image differs from brute force")));
        }
    }
    Ok(Ok(format!("{} inducers", cases.len())))
}

/// Exhaustive over auxiliaries when small, sampled otherwise.
fn vanishes(g: &Group, t: &Term, x: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let bound = t.var_bound() as usize;
    let mut sigma = Assignment::empty(bound);
    sigma.set(VarId(0), x);
    let aux = bound.saturating_sub(1);
    if (g.order() as u128).saturating_pow(aux as u32) <= samples as u128 {
        let flat = t.to_expression(g, 1_000_000)?;
        let img = image_exact(g, &flat, &sigma, samples as u128)?;
        return Ok(img.count() == 1 && img.contains(ID));
    }
    for _ in 0..samples {
        for v in 1..bound {
            sigma.set(VarId(v as u32), rng.gen_range(0..g.order()));
        }
        if t.evaluate(g, &sigma)? != ID {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_definers(g: &Group, samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let upper = g.upper_fitting_series()?;
    let fit = g.fitting_subgroup();
    let t = fitting_definer(g);
    let one = upper_fitting_definer(g, 1)?;
    for x in g.elements() {
        let inside = vanishes(g, &t, x, samples, &mut rng)?;
        // a sampled miss is settled by an explicit witness
        let inside = inside && one.witness(g, x).is_none();
        if inside != fit.contains(x) {
            return Ok(Err(format!("Fitting definer wrong at element {x}")));
        }
    }
    for i in 1..upper.len() {
        let d = upper_fitting_definer(g, i)?;
        if d.defined_set(g) != *upper[i].members() {
            return Ok(Err(format!("U{i} definer: defined set differs")));
        }
        for x in g.elements() {
            let w = d.witness(g, x);
            if w.is_none() != upper[i].contains(x) {
                return Ok(Err(format!("U{i} definer: witness disagrees at {x}")));
            }
            if let Some(mut sigma) = w {
                for v in 0..d.term().var_bound() {
                    if sigma.get(VarId(v)).is_none() {
                        sigma.set(VarId(v), ID);
                    }
                }
                if d.term().evaluate(g, &sigma)? == ID {
                    return Ok(Err(format!("U{i} definer: witness vanishes at {x}")));
                }
            } else if !vanishes(g, d.term(), x, samples.min(2_000), &mut rng)? {
                return Ok(Err(format!("U{i} definer: sampled non-vanishing inside at {x}")));
            }
        }
    }
    Ok(Ok(format!("Fit and {} upper terms", upper.len() - 1)))
}

/// `𝒰_i(N) = 𝒰_i(G) ∩ N` for normal `N` from the standard series.
pub fn check_fitting_intersections(g: &Group) -> Outcome {
    let upper = g.upper_fitting_series()?;
    let lower = g.lower_fitting_series()?;
    if upper.len() != lower.len() {
        return Ok(Err("upper and lower Fitting series differ in length".into()));
    }
    for n in series_subgroups(g)? {
        let (sub, embed) = g.subgroup_as_group(&n);
        let sub_upper = sub.upper_fitting_series()?;
        for (i, u) in upper.iter().enumerate() {
            let mine = g.embed_subgroup(&embed, &sub_upper[i.min(sub_upper.len() - 1)]);
            if mine != u.intersection(g, &n) {
                return Ok(Err(format!("U{i} of a normal subgroup of order {}", n.order())));
            }
        }
    }
    Ok(Ok(format!("FitL {}", upper.len() - 1)))
}

pub fn check_certificate(g: &Group) -> Outcome {
    let cert = find_kh(g)?;
    let r = cert.report();
    if !(r.prop_i && r.prop_ii && r.upper_in_h) {
        return Ok(Err(format!("properties fail: {r:?}")));
    }
    let (_, back) = KHCertificate::from_text(&cert.to_text("g"))?;
    if back.report() != r {
        return Ok(Err("text round trip changed the report".into()));
    }
    Ok(Ok(format!("|K|={} |H|={} M={}", r.k_order, r.h_order, r.m)))
}

pub fn check_and_program(g: &Group, max_n: usize) -> Outcome {
    let spec = ChainSpec::lower_fitting(g)?;
    for n in 1..=max_n {
        let (p, target, tree) = build_and_program(g, &spec, n, u128::MAX)?;
        if !tree.check(g) {
            return Ok(Err(format!("n={n}: witness tree inconsistent")));
        }
        let table: Vec<bool> = (0..1usize << n).map(|k| k == (1 << n) - 1).collect();
        let accept = ElementSet::singleton(g.order(), target);
        if !check_function(g, &p, &table, &accept)? {
            return Ok(Err(format!("n={n}: program does not compute AND")));
        }
    }
    Ok(Ok(format!("n = 1..{max_n}")))
}

pub fn check_reduction(cert: &KHCertificate, graphs: &[GraphInstance], opts: &DecideOptions) -> Outcome {
    for graph in graphs {
        let graph = graph.with_colors(cert.report().index)?;
        let inst = compile_coloring(cert, &graph)?;
        let d = decide_compiled(cert, &graph, &inst, *opts)?;
        let oracle = color_bruteforce(&graph, SolveBudget(opts.budget))?.is_some();
        if d.sat != oracle || d.id == d.sat {
            return Ok(Err(format!("{graph:?}: sat={} id={} oracle={oracle}", d.sat, d.id)));
        }
    }
    Ok(Ok(format!("{} graphs", graphs.len())))
}

pub fn verify_all(cfg: &Config) -> Vec<Check> {
    let mut checks = Vec::new();
    let groups = match small_groups() {
        Ok(gs) => gs,
        Err(e) => {
            checks.push(Check { name: "catalog".into(), passed: false, detail: e.to_string(), millis: 0 });
            return checks;
        }
    };
    checks.push(run("catalog", || {
        let rows = catalog::scan_catalog();
        Ok(match rows.iter().find(|r| !r.matches()) {
            Some(r) => Err(format!("{}: verdict differs from the catalog", r.name)),
            None => Ok(format!("{} entries", rows.len())),
        })
    }));
    for (name, g) in &groups {
        checks.push(run(&format!("fitting {name}"), || check_fitting_intersections(g)));
        checks.push(run(&format!("inducers {name}"), || check_inducers(g)));
        checks.push(run(&format!("definers {name}"), || check_definers(g, cfg.samples)));
    }
    for e in catalog::entries().iter().filter(|e| e.fitting_length >= 2) {
        checks.push(run(&format!("certificate {}", e.name), || check_certificate(&e.load()?)));
    }
    checks.push(run("and-program s4", || check_and_program(&catalog::lookup("s4").unwrap().load()?, 10)));
    checks.push(run("reduction g168", || {
        let g = catalog::lookup("g168").unwrap().load()?;
        let cert = find_kh(&g)?;
        let graphs = vec![
            GraphInstance::new(2, vec![(0, 1)], 3)?,
            GraphInstance::complete(3, 3)?,
            GraphInstance::complete(4, 3)?,
            GraphInstance::cycle(5, 3)?,
        ];
        let opts = DecideOptions { budget: cfg.budget, stream_limit: cfg.stream_limit, want_witness: false };
        check_reduction(&cert, &graphs, &opts)
    }));
    checks.push(run("scan", || {
        let g = catalog::lookup("s4").unwrap().load()?;
        Ok(match scan_criteria(&g)?.verdict.applicable() {
            false => Ok("s4 rejected".into()),
            true => Err("s4 accepted".into()),
        })
    }));
    checks
}
