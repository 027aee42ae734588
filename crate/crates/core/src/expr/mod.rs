//! Expressions over a finite group: flat token words, their evaluation and
//! image sets, plus a structured [`Term`] form for words too long to store.

pub mod builders;
pub mod io;
mod term;

use std::fmt;

use crate::error::{input, Error, Result};
use crate::group::{ElementSet, Elem, Group, ID};

pub use term::{Term, Tokens};

/// Default cap on brute-force enumeration work, in assignments.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Const(Elem),
    Var(VarId),
    InvVar(VarId),
}

impl Token {
    pub fn var(self) -> Option<VarId> {
        match self {
            Token::Const(_) => None,
            Token::Var(v) | Token::InvVar(v) => Some(v),
        }
    }

    pub fn inverse(self, g: &Group) -> Token {
        match self {
            Token::Const(c) => Token::Const(g.inv(c)),
            Token::Var(v) => Token::InvVar(v),
            Token::InvVar(v) => Token::Var(v),
        }
    }

    pub(crate) fn shifted(self, by: u32) -> Token {
        match self {
            Token::Const(c) => Token::Const(c),
            Token::Var(v) => Token::Var(VarId(v.0 + by)),
            Token::InvVar(v) => Token::InvVar(VarId(v.0 + by)),
        }
    }

    /// Value under `σ`, or `None` if the variable is unassigned.
    #[inline]
    pub fn value(self, g: &Group, sigma: &Assignment) -> Option<Elem> {
        match self {
            Token::Const(c) => Some(c),
            Token::Var(v) => sigma.get(v),
            Token::InvVar(v) => sigma.get(v).map(|x| g.inv(x)),
        }
    }
}

/// Partial map from variables to group elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<Elem>>,
}

impl Assignment {
    pub fn empty(var_count: usize) -> Self {
        Assignment {
            values: vec![None; var_count],
        }
    }

    pub fn total(values: impl IntoIterator<Item = Elem>) -> Self {
        Assignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    #[inline]
    pub fn get(&self, v: VarId) -> Option<Elem> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn set(&mut self, v: VarId, x: Elem) {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        self.values[v.index()] = Some(x);
    }

    pub fn clear(&mut self, v: VarId) {
        if let Some(slot) = self.values.get_mut(v.index()) {
            *slot = None;
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Assigned variables with their values, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, Elem)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, x)| x.map(|x| (VarId(i as u32), x)))
    }
}

/// Image of an expression together with whether it is known to be exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageSet {
    pub set: ElementSet,
    pub exact: bool,
}

/// How [`Expression::substitute`] treats the variables of the substituted
/// expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sharing {
    /// Every occurrence gets a fresh copy with its own variables.
    Disjoint,
    /// All substituted expressions live in one common variable space.
    Shared,
}

/// A word over constants, variables and inverse variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expression {
    tokens: Vec<Token>,
    var_count: u32,
}

impl Expression {
    pub fn new(tokens: Vec<Token>, var_count: u32) -> Result<Self> {
        if let Some(v) = tokens.iter().filter_map(|t| t.var()).find(|v| v.0 >= var_count) {
            return input(format!("variable {v} outside var count {var_count}"));
        }
        Ok(Expression { tokens, var_count })
    }

    /// Takes the variable count from the largest id used.
    pub fn from_tokens(tokens: Vec<Token>) -> Self {
        let var_count = tokens.iter().filter_map(|t| t.var()).map(|v| v.0 + 1).max().unwrap_or(0);
        Expression { tokens, var_count }
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_tokens(vec![Token::Const(c)])
    }

    pub fn var(v: u32) -> Self {
        Self::from_tokens(vec![Token::Var(VarId(v))])
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    /// Checks every constant is an element of `g`.
    pub fn check_group(&self, g: &Group) -> Result<()> {
        for t in &self.tokens {
            if let Token::Const(c) = t {
                if *c >= g.order() {
                    return input(format!("constant g{c} outside group of order {}", g.order()));
                }
            }
        }
        Ok(())
    }

    /// Concatenation in a shared variable space.
    pub fn concat(&self, other: &Expression) -> Expression {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Expression {
            tokens,
            var_count: self.var_count.max(other.var_count),
        }
    }

    /// Reversed word with every letter inverted.
    pub fn inverse(&self, g: &Group) -> Expression {
        Expression {
            tokens: self.tokens.iter().rev().map(|t| t.inverse(g)).collect(),
            var_count: self.var_count,
        }
    }

    pub fn shifted(&self, by: u32) -> Expression {
        Expression {
            tokens: self.tokens.iter().map(|t| t.shifted(by)).collect(),
            var_count: self.var_count + by,
        }
    }

    /// Left-to-right product of the token values.
    pub fn evaluate(&self, g: &Group, sigma: &Assignment) -> Result<Elem> {
        let mut acc = ID;
        for &t in &self.tokens {
            let x = t
                .value(g, sigma)
                .ok_or_else(|| Error::Input(format!("unassigned variable {}", t.var().unwrap())))?;
            acc = g.mul(acc, x);
        }
        Ok(acc)
    }

    /// Occurrence count per variable id.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.var_count as usize];
        for v in self.tokens.iter().filter_map(|t| t.var()) {
            occ[v.index()] += 1;
        }
        occ
    }

    /// Variables that occur in the word and are unassigned in `σ`, ascending.
    pub fn free_vars(&self, sigma: &Assignment) -> Vec<VarId> {
        let occ = self.occurrences();
        (0..self.var_count)
            .map(VarId)
            .filter(|&v| occ[v.index()] > 0 && sigma.get(v).is_none())
            .collect()
    }

    /// `α(β₁,…,β_n)`: replaces each occurrence of variable `i` by `βs[i]`,
    /// inverted for inverse occurrences.
    pub fn substitute(&self, g: &Group, betas: &[Expression], mode: Sharing) -> Result<Expression> {
        if betas.len() != self.var_count as usize {
            return input(format!(
                "substitution arity mismatch: {} expressions for {} variables",
                betas.len(),
                self.var_count
            ));
        }
        let mut tokens = Vec::new();
        let mut next_var = 0u32;
        for &t in &self.tokens {
            let (beta, inverted) = match t {
                Token::Const(c) => {
                    tokens.push(Token::Const(c));
                    continue;
                }
                Token::Var(v) => (&betas[v.index()], false),
                Token::InvVar(v) => (&betas[v.index()], true),
            };
            let piece = if inverted { beta.inverse(g) } else { beta.clone() };
            match mode {
                Sharing::Shared => tokens.extend_from_slice(&piece.tokens),
                Sharing::Disjoint => {
                    tokens.extend(piece.tokens.iter().map(|t| t.shifted(next_var)));
                    next_var += beta.var_count;
                }
            }
        }
        let var_count = match mode {
            Sharing::Shared => betas.iter().map(|b| b.var_count).max().unwrap_or(0),
            Sharing::Disjoint => next_var,
        };
        Ok(Expression { tokens, var_count })
    }
}

impl From<Token> for Expression {
    fn from(t: Token) -> Self {
        Expression::from_tokens(vec![t])
    }
}

/// `[a,b] = a⁻¹b⁻¹ab`, variables shared.
pub fn commutator_expr(g: &Group, a: &Expression, b: &Expression) -> Expression {
    a.inverse(g).concat(&b.inverse(g)).concat(a).concat(b)
}

/// `a^b = b⁻¹ab`, variables shared.
pub fn conjugate_expr(g: &Group, a: &Expression, b: &Expression) -> Expression {
    b.inverse(g).concat(a).concat(b)
}

/// Left-normed `[a₁,…,a_k]`; empty gives the empty word.
pub fn iterated_commutator_expr(g: &Group, list: &[Expression]) -> Expression {
    match list.split_first() {
        None => Expression::default(),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, b| commutator_expr(g, &acc, b)),
    }
}

/// `|G|^k` as a saturating u128.
pub fn assignment_count(order: usize, vars: usize) -> u128 {
    (0..vars).fold(1u128, |acc, _| acc.saturating_mul(order as u128))
}

/// Calls `f` on every total extension of `σ` over `free`, in mixed-radix
/// order with the lowest variable id varying slowest.
pub(crate) fn for_each_extension(
    order: usize,
    sigma: &Assignment,
    free: &[VarId],
    mut f: impl FnMut(&Assignment) -> bool,
) {
    let mut tau = sigma.clone();
    for &v in free {
        tau.set(v, ID);
    }
    let mut digits = vec![0usize; free.len()];
    loop {
        if !f(&tau) {
            return;
        }
        let mut i = free.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < order {
                tau.set(free[i], digits[i]);
                break;
            }
            digits[i] = 0;
            tau.set(free[i], 0);
        }
    }
}

/// `{σ'(e) : σ' extends σ}` by exhaustive enumeration.
pub fn image_exact(g: &Group, e: &Expression, sigma: &Assignment, budget: u128) -> Result<ElementSet> {
    let free = e.free_vars(sigma);
    let needed = assignment_count(g.order(), free.len());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = ElementSet::empty(g.order());
    let mut err = None;
    for_each_extension(g.order(), sigma, &free, |tau| match e.evaluate(g, tau) {
        Ok(x) => {
            out.insert(x);
            !out.is_full()
        }
        Err(e) => {
            err = Some(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Exact image of an expression in which every free variable occurs once,
/// folding token images as setwise products.
pub fn image_read_once(g: &Group, e: &Expression, sigma: &Assignment) -> Result<ImageSet> {
    let occ = e.occurrences();
    for t in e.tokens() {
        if let Some(v) = t.var() {
            if sigma.get(v).is_none() && occ[v.index()] > 1 {
                return Err(Error::NotReadOnce(v.0));
            }
        }
    }
    Ok(ImageSet {
        set: fold_read_once(g, e.tokens(), sigma, 0),
        exact: true,
    })
}

/// Setwise product of token images, variables offset by `off`. A free
/// variable contributes all of `G`, and `G` times anything is `G`, so the
/// fold is either a singleton or the whole group.
pub(crate) fn fold_read_once(g: &Group, tokens: &[Token], sigma: &Assignment, off: u32) -> ElementSet {
    let mut acc = ID;
    for &t in tokens {
        match t.shifted(off).value(g, sigma) {
            Some(x) => acc = g.mul(acc, x),
            None => return g.all(),
        }
    }
    ElementSet::singleton(g.order(), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s4() -> Group {
        Group::from_spec(&include_str!("../../catalog/s4.grp").parse().unwrap()).unwrap()
    }

    fn find(g: &Group, s: &str) -> Elem {
        let p = Permutation::parse_cycles(s, 4).unwrap();
        g.elements().find(|&x| g.label(x) == Some(&p)).unwrap()
    }

    fn x(v: u32) -> Token {
        Token::Var(VarId(v))
    }

    fn xi(v: u32) -> Token {
        Token::InvVar(VarId(v))
    }

    #[test]
    fn evaluation_basics() {
        let g = s4();
        assert_eq!(Expression::default().evaluate(&g, &Assignment::empty(0)).unwrap(), ID);
        let t = find(&g, "(0 1)");
        let c = find(&g, "(0 1 2)");
        let e = Expression::from_tokens(vec![x(0), Token::Const(c), xi(0)]);
        let got = e.evaluate(&g, &Assignment::total([t])).unwrap();
        // oracle: compose the permutations directly
        let lt = g.label(t).unwrap();
        let want = lt.then(g.label(c).unwrap()).then(&lt.inverse());
        assert_eq!(g.label(got), Some(&want));
        assert!(e.evaluate(&g, &Assignment::empty(1)).is_err());
        let c6 = Group::cyclic(6).unwrap();
        let comm = commutator_expr(&c6, &Expression::var(0), &Expression::var(1));
        for a in c6.elements() {
            for b in c6.elements() {
                assert_eq!(comm.evaluate(&c6, &Assignment::total([a, b])).unwrap(), ID);
            }
        }
    }

    #[test]
    fn commutator_lengths_and_values() {
        let g = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Expression::from_tokens(vec![x(0), Token::Const(5), x(1)]);
        let b = Expression::from_tokens(vec![xi(2), Token::Const(9)]);
        let ab = commutator_expr(&g, &a, &b);
        assert_eq!(ab.len(), 2 * a.len() + 2 * b.len());
        assert!(commutator_expr(&g, &a, &a).tokens().len() == 4 * a.len());
        let xyz = iterated_commutator_expr(&g, &[Expression::var(0), Expression::var(1), Expression::var(2)]);
        for _ in 0..200 {
            let vals: Vec<Elem> = (0..3).map(|_| rng.gen_range(0..24)).collect();
            let sigma = Assignment::total(vals.clone());
            assert_eq!(commutator_expr(&g, &a, &a).evaluate(&g, &sigma).unwrap(), ID);
            assert_eq!(xyz.evaluate(&g, &sigma).unwrap(), g.comm_iter(&vals));
            let va = a.evaluate(&g, &sigma).unwrap();
            let vb = b.evaluate(&g, &sigma).unwrap();
            assert_eq!(ab.evaluate(&g, &sigma).unwrap(), g.comm(va, vb));
            assert_eq!(conjugate_expr(&g, &a, &b).evaluate(&g, &sigma).unwrap(), g.conj(va, vb));
        }
    }

    #[test]
    fn substitution_respects_evaluation() {
        let g = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alpha = Expression::from_tokens(vec![x(0), Token::Const(3), xi(1), x(0)]);
        let b0 = Expression::from_tokens(vec![x(0), x(1)]);
        let b1 = Expression::from_tokens(vec![Token::Const(7), xi(0)]);
        let shared = alpha.substitute(&g, &[b0.clone(), b1.clone()], Sharing::Shared).unwrap();
        let disjoint = alpha.substitute(&g, &[b0.clone(), b1.clone()], Sharing::Disjoint).unwrap();
        assert_eq!(shared.var_count(), 2);
        assert_eq!(disjoint.var_count(), 2 + 1 + 2);
        for _ in 0..200 {
            let vals: Vec<Elem> = (0..2).map(|_| rng.gen_range(0..24)).collect();
            let sigma = Assignment::total(vals);
            let outer = Assignment::total([b0.evaluate(&g, &sigma).unwrap(), b1.evaluate(&g, &sigma).unwrap()]);
            assert_eq!(shared.evaluate(&g, &sigma).unwrap(), alpha.evaluate(&g, &outer).unwrap());
        }
        let consts = commutator_expr(&g, &Expression::var(0), &Expression::var(1))
            .substitute(&g, &[Expression::constant(3), Expression::constant(9)], Sharing::Disjoint)
            .unwrap();
        assert_eq!(consts.evaluate(&g, &Assignment::default()).unwrap(), g.comm(3, 9));
        let renamed = alpha.substitute(&g, &[Expression::var(0), Expression::var(1)], Sharing::Shared).unwrap();
        assert_eq!(renamed, alpha);
        assert!(alpha.substitute(&g, &[b0], Sharing::Shared).is_err());
    }

    #[test]
    fn exact_images() {
        let g = s4();
        assert_eq!(image_exact(&g, &Expression::constant(4), &Assignment::default(), 10).unwrap().to_vec(), vec![4]);
        assert!(image_exact(&g, &Expression::var(0), &Assignment::default(), 100).unwrap().is_full());
        let sq = Expression::from_tokens(vec![x(0), x(0)]);
        let squares = ElementSet::from_elems(24, g.elements().map(|a| g.mul(a, a)));
        assert_eq!(image_exact(&g, &sq, &Assignment::default(), 100).unwrap(), squares);
        let two = Expression::from_tokens(vec![x(0), x(1)]);
        assert!(matches!(
            image_exact(&g, &two, &Assignment::default(), 100),
            Err(Error::BudgetExceeded { needed: 576, .. })
        ));
    }

    #[test]
    fn read_once_images() {
        let g = s4();
        let e = Expression::from_tokens(vec![x(0), Token::Const(3)]);
        let img = image_read_once(&g, &e, &Assignment::default()).unwrap();
        assert!(img.exact && img.set.is_full());
        let sigma = Assignment::total([5]);
        assert_eq!(image_read_once(&g, &e, &sigma).unwrap().set.to_vec(), vec![g.mul(5, 3)]);
        let twice = Expression::from_tokens(vec![x(0), xi(0)]);
        assert!(matches!(image_read_once(&g, &twice, &Assignment::default()), Err(Error::NotReadOnce(0))));
        assert!(image_read_once(&g, &twice, &sigma).is_ok());
    }

    #[test]
    fn read_once_matches_brute_force() {
        // exhaustive over small shapes, random constants
        let g = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let nvars = rng.gen_range(0..=3u32);
            let mut tokens: Vec<Token> = (0..nvars)
                .map(|v| if rng.gen_bool(0.5) { x(v) } else { xi(v) })
                .collect();
            for _ in 0..rng.gen_range(0..4) {
                let at = rng.gen_range(0..=tokens.len());
                tokens.insert(at, Token::Const(rng.gen_range(0..24)));
            }
            let e = Expression::from_tokens(tokens);
            let mut sigma = Assignment::empty(e.var_count() as usize);
            if nvars > 0 && rng.gen_bool(0.3) {
                sigma.set(VarId(0), rng.gen_range(0..24));
            }
            let fast = image_read_once(&g, &e, &sigma).unwrap();
            assert_eq!(fast.set, image_exact(&g, &e, &sigma, 1 << 20).unwrap());
        }
    }
}
