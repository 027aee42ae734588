use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input: bad permutations, unassigned
    /// variables, unmet preconditions on subgroups, parse failures.
    #[error("input error: {0}")]
    Input(String),

    #[error("group too large: closure exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("group is not solvable")]
    NotSolvable,

    #[error("budget exceeded: {needed} work units requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("expression is not read-once: variable x{0} occurs more than once")]
    NotReadOnce(u32),

    #[error("subgroup is not commutator-fixed: K differs from [K, G]")]
    NotCommutatorFixed,

    #[error("no nontrivial witness: the chain is degenerate")]
    NoWitness,

    #[error("group is nilpotent: no (K, H) certificate exists")]
    Nilpotent,

    #[error("theorem inapplicable: {0}")]
    Inapplicable(String),

    /// A verified construction failed its own check. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
