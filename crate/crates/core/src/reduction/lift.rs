//! Syntactic lifts of instances from a subgroup or a quotient to `G`.
//!
//! Each lift checks its inducer or definer against the subgroup before
//! using it.

use std::sync::Arc;

use crate::error::{input, Result};
use crate::expr::builders::{defined_set, FLATTEN_BUDGET};
use crate::expr::{Assignment, Expression, Term, Token, VarId};
use crate::group::{Elem, Group, Quotient, Subgroup};

fn check_inducer(g: &Group, h: &Subgroup, inducer: &Term) -> Result<()> {
    if inducer.image(g, &Assignment::empty(0))? != *h.members() {
        return input("inducer image differs from the subgroup");
    }
    Ok(())
}

/// Maps constants of an expression through `f`, keeping variables.
fn map_consts(e: &Expression, f: impl Fn(Elem) -> Elem) -> Vec<Token> {
    e.tokens()
        .iter()
        .map(|&t| match t {
            Token::Const(c) => Token::Const(f(c)),
            t => t,
        })
        .collect()
}

/// Instance over `H` (as its own group, embedded by `embed`) to one over
/// `G`: every variable becomes a fresh copy of an expression inducing `H`.
pub fn lift_eqnsat_via_inducer(
    g: &Group,
    h: &Subgroup,
    embed: &[Elem],
    e: &Expression,
    inducer: &Term,
) -> Result<Expression> {
    check_inducer(g, h, inducer)?;
    if embed.len() != h.order() || embed.iter().any(|&x| !h.contains(x)) {
        return input("embedding does not land in the subgroup");
    }
    if e.tokens().iter().any(|t| matches!(t, Token::Const(c) if *c >= embed.len())) {
        return input("constant outside the subgroup");
    }
    let ind = Arc::new(inducer.clone());
    let width = inducer.var_bound();
    let parts = e
        .tokens()
        .iter()
        .map(|&t| match t {
            Token::Const(c) => Term::constant(embed[c]),
            Token::Var(v) => Term::shifted(&ind, v.0 * width),
            Token::InvVar(v) => Term::inverse(Term::shifted(&ind, v.0 * width)),
        })
        .collect();
    let mut out = Term::product(parts).to_expression(g, FLATTEN_BUDGET)?;
    if out.var_count() < e.var_count() * width {
        out = Expression::new(out.tokens().to_vec(), e.var_count() * width)?;
    }
    Ok(out)
}

/// Instance over `G/N` to one over `G` for an inducible normal `N`:
/// constants are lifted by the section and a fresh inducer copy absorbs
/// the error in `N`.
pub fn lift_eqnsat_quotient(
    g: &Group,
    n: &Subgroup,
    q: &Quotient,
    e: &Expression,
    inducer: &Term,
) -> Result<Expression> {
    if !g.is_normal(n) {
        return input("quotient lift needs a normal subgroup");
    }
    check_inducer(g, n, inducer)?;
    e.check_group(&q.group)?;
    let lifted = Term::word(map_consts(e, |c| q.section[c]));
    let tail = Term::shifted(&Arc::new(inducer.clone()), e.var_count());
    Term::product(vec![lifted, tail]).to_expression(g, FLATTEN_BUDGET)
}

/// Identity instance over `G/N` to one over `G`: the lifted expression is
/// plugged into the `X` slot (variable 0) of a definer for `N`, whose
/// other variables are renamed past those of the instance.
pub fn lift_eqnid_via_definer(
    g: &Group,
    n: &Subgroup,
    q: &Quotient,
    e: &Expression,
    definer: &Term,
) -> Result<Expression> {
    if defined_set(g, definer)? != *n.members() {
        return input("definer does not define the subgroup");
    }
    e.check_group(&q.group)?;
    let lifted = Expression::new(map_consts(e, |c| q.section[c]), e.var_count())?;
    let inverse = lifted.inverse(g);
    let shift = e.var_count();
    let flat = definer.to_expression(g, FLATTEN_BUDGET)?;
    let rename = |v: VarId| VarId(shift + v.0 - 1);
    let mut tokens = Vec::new();
    for &t in flat.tokens() {
        match t {
            Token::Var(VarId(0)) => tokens.extend_from_slice(lifted.tokens()),
            Token::InvVar(VarId(0)) => tokens.extend_from_slice(inverse.tokens()),
            Token::Var(v) => tokens.push(Token::Var(rename(v))),
            Token::InvVar(v) => tokens.push(Token::InvVar(rename(v))),
            c => tokens.push(c),
        }
    }
    let aux = flat.var_count().saturating_sub(1);
    Expression::new(tokens, shift + aux)
}

/// `[X, X^Y]`, flattened: vanishes for all `Y` exactly when `x` commutes
/// with its conjugates.
pub fn abelian_closure_definer() -> Term {
    let (x, xi, y, yi) = (
        Token::Var(VarId(0)),
        Token::InvVar(VarId(0)),
        Token::Var(VarId(1)),
        Token::InvVar(VarId(1)),
    );
    Term::word(vec![xi, yi, xi, y, x, yi, x, y])
}
