//! Brute-force oracles. Deliberately naive: everything else is checked
//! against these.
//!
//! Assignments are enumerated in mixed-radix order over variable ids, the
//! lowest id varying slowest. The space is split across threads on the
//! value of the first variable and the least hit wins, so results do not
//! depend on scheduling.

use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::expr::{assignment_count, Assignment, Expression, VarId, DEFAULT_BUDGET};
use crate::gprogram::{bits_of, GProgram};
use crate::group::{Elem, ElementSet, Group, ID};
use crate::reduction::GraphInstance;

/// Cap on the number of assignments an oracle may enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveBudget(pub u128);

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget(DEFAULT_BUDGET)
    }
}

impl SolveBudget {
    fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 {
            return Err(Error::BudgetExceeded { needed, budget: self.0 });
        }
        Ok(())
    }
}

/// Least assignment (in enumeration order) whose value satisfies `hit`.
fn first_hit(g: &Group, e: &Expression, budget: SolveBudget, hit: impl Fn(Elem) -> bool + Sync) -> Result<Option<Assignment>> {
    e.check_group(g)?;
    let vars = e.var_count() as usize;
    budget.check(assignment_count(g.order(), vars))?;
    if vars == 0 {
        let sigma = Assignment::empty(0);
        return Ok(hit(e.evaluate(g, &sigma)?).then_some(sigma));
    }
    let rest: Vec<VarId> = (1..vars as u32).map(VarId).collect();
    let found = (0..g.order()).into_par_iter().find_map_first(|x0| {
        let mut sigma = Assignment::empty(vars);
        sigma.set(VarId(0), x0);
        let mut out = None;
        crate::expr::for_each_extension(g.order(), &sigma, &rest, |tau| {
            // every variable is assigned, so evaluation cannot fail
            if hit(e.evaluate(g, tau).unwrap_or(ID)) {
                out = Some(tau.clone());
                return false;
            }
            true
        });
        out
    });
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOutcome {
    pub satisfiable: bool,
    pub witness: Option<Assignment>,
}

/// Is there `σ` with `σ(e) = 1`?
pub fn eqnsat_bruteforce(g: &Group, e: &Expression, budget: SolveBudget) -> Result<SatOutcome> {
    let witness = first_hit(g, e, budget, |x| x == ID)?;
    Ok(SatOutcome {
        satisfiable: witness.is_some(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdOutcome {
    pub identity: bool,
    pub counterexample: Option<Assignment>,
}

/// Is `σ(e) = 1` for every `σ`?
pub fn eqnid_bruteforce(g: &Group, e: &Expression, budget: SolveBudget) -> Result<IdOutcome> {
    let counterexample = first_hit(g, e, budget, |x| x != ID)?;
    Ok(IdOutcome {
        identity: counterexample.is_none(),
        counterexample,
    })
}

/// First proper coloring in mixed-radix order (vertex 0 slowest).
pub fn color_bruteforce(graph: &GraphInstance, budget: SolveBudget) -> Result<Option<Vec<usize>>> {
    let (n, c) = (graph.vertices(), graph.colors());
    budget.check(assignment_count(c, n))?;
    let mut col = vec![0usize; n];
    loop {
        if graph.is_proper(&col) {
            return Ok(Some(col));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            col[i] += 1;
            if col[i] < c {
                break;
            }
            col[i] = 0;
        }
    }
}

/// Largest input count accepted by [`check_function`].
pub const CHECK_FUNCTION_MAX_INPUTS: usize = 20;

/// Does `σ(P) ∈ S ⟺ f(σ) = 1` hold on every input? `table[k]` is the
/// value on input [`bits_of`]`(k, n)`.
pub fn check_function(g: &Group, p: &GProgram, table: &[bool], accept: &ElementSet) -> Result<bool> {
    let n = p.inputs();
    if n > CHECK_FUNCTION_MAX_INPUTS {
        return input(format!("check_function takes at most {CHECK_FUNCTION_MAX_INPUTS} inputs, got {n}"));
    }
    if table.len() != 1 << n {
        return input(format!("truth table has {} rows, expected {}", table.len(), 1u64 << n));
    }
    p.check_group(g)?;
    Ok((0..1u64 << n)
        .into_par_iter()
        .all(|k| accept.contains(p.eval_unchecked(g, &bits_of(k, n))) == table[k as usize]))
}
