use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use super::{assignment_count, fold_read_once, for_each_extension, Assignment, Expression, Token, VarId};
use crate::error::{Error, Result};
use crate::group::{ElementSet, Elem, Group, ID};

/// Brute-force cap for words whose free variables repeat.
const WORD_BRUTE_FORCE: u128 = 1 << 20;

/// Subterms up to this many tokens are flattened once during streaming.
const FLAT_CACHE: u128 = 1 << 15;

/// An expression kept as a tree so that repeated pieces are shared.
///
/// Flattening a term gives an ordinary [`Expression`]; the flat length can
/// be astronomically larger than the tree, so evaluation, length and set
/// images all work on the tree directly. `Shifted(t, k)` is `t` with every
/// variable id increased by `k`, the cheap way to take a disjoint copy.
#[derive(Clone, Debug)]
pub enum Term {
    Word(Arc<[Token]>),
    Product(Arc<[Term]>),
    Inverse(Arc<Term>),
    /// Left-normed `[t₁,…,t_k]`.
    Commutator(Arc<[Term]>),
    /// `Conjugate(a, b) = b⁻¹ab`
    Conjugate(Arc<Term>, Arc<Term>),
    Power(Arc<Term>, u32),
    Shifted(Arc<Term>, u32),
}

impl From<Expression> for Term {
    fn from(e: Expression) -> Self {
        Term::Word(e.tokens.into())
    }
}

impl Term {
    pub fn word(tokens: Vec<Token>) -> Term {
        Term::Word(tokens.into())
    }

    pub fn constant(c: Elem) -> Term {
        Term::word(vec![Token::Const(c)])
    }

    pub fn var(v: u32) -> Term {
        Term::word(vec![Token::Var(VarId(v))])
    }

    pub fn inv_var(v: u32) -> Term {
        Term::word(vec![Token::InvVar(VarId(v))])
    }

    pub fn product(parts: Vec<Term>) -> Term {
        Term::Product(parts.into())
    }

    pub fn commutator(parts: Vec<Term>) -> Term {
        Term::Commutator(parts.into())
    }

    pub fn conjugate(a: Term, b: Term) -> Term {
        Term::Conjugate(Arc::new(a), Arc::new(b))
    }

    pub fn power(a: Term, k: u32) -> Term {
        Term::Power(Arc::new(a), k)
    }

    pub fn inverse(a: Term) -> Term {
        Term::Inverse(Arc::new(a))
    }

    /// Copy of `t` with variables moved up by `by`, sharing structure.
    pub fn shifted(t: &Arc<Term>, by: u32) -> Term {
        if by == 0 {
            return (**t).clone();
        }
        Term::Shifted(t.clone(), by)
    }

    /// Flat token length, saturating at `u128::MAX`.
    pub fn len(&self) -> u128 {
        match self {
            Term::Word(ts) => ts.len() as u128,
            Term::Product(ps) => ps.iter().fold(0u128, |a, p| a.saturating_add(p.len())),
            Term::Inverse(a) | Term::Shifted(a, _) => a.len(),
            Term::Commutator(ps) => comm_fold(ps.iter().map(Term::len)),
            Term::Conjugate(a, b) => a.len().saturating_add(b.len().saturating_mul(2)),
            Term::Power(a, k) => a.len().saturating_mul(*k as u128),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One more than the largest variable id used, or 0.
    pub fn var_bound(&self) -> u32 {
        match self {
            Term::Word(ts) => ts.iter().filter_map(|t| t.var()).map(|v| v.0 + 1).max().unwrap_or(0),
            Term::Product(ps) | Term::Commutator(ps) => ps.iter().map(Term::var_bound).max().unwrap_or(0),
            Term::Inverse(a) | Term::Power(a, _) => a.var_bound(),
            Term::Conjugate(a, b) => a.var_bound().max(b.var_bound()),
            Term::Shifted(a, k) => match a.var_bound() {
                0 => 0,
                b => b + k,
            },
        }
    }

    /// Occurrences (plain or inverted) of variables satisfying `pred` in the
    /// flat word, saturating.
    pub fn occurrences(&self, pred: &dyn Fn(VarId) -> bool) -> u128 {
        self.occ_rec(pred, 0)
    }

    fn occ_rec(&self, pred: &dyn Fn(VarId) -> bool, off: u32) -> u128 {
        match self {
            Term::Word(ts) => ts
                .iter()
                .filter_map(|t| t.shifted(off).var())
                .filter(|&v| pred(v))
                .count() as u128,
            Term::Product(ps) => ps.iter().fold(0u128, |a, p| a.saturating_add(p.occ_rec(pred, off))),
            Term::Inverse(a) => a.occ_rec(pred, off),
            Term::Shifted(a, k) => a.occ_rec(pred, off + k),
            Term::Commutator(ps) => comm_fold(ps.iter().map(|p| p.occ_rec(pred, off))),
            Term::Conjugate(a, b) => a.occ_rec(pred, off).saturating_add(b.occ_rec(pred, off).saturating_mul(2)),
            Term::Power(a, k) => a.occ_rec(pred, off).saturating_mul(*k as u128),
        }
    }

    /// Value under a total assignment of the variables that occur.
    pub fn evaluate(&self, g: &Group, sigma: &Assignment) -> Result<Elem> {
        self.eval_rec(g, sigma, 0)
    }

    fn eval_rec(&self, g: &Group, sigma: &Assignment, off: u32) -> Result<Elem> {
        Ok(match self {
            Term::Word(ts) => {
                let mut acc = ID;
                for &t in ts.iter() {
                    let t = t.shifted(off);
                    let x = t.value(g, sigma).ok_or_else(|| {
                        Error::Input(format!("unassigned variable {}", t.var().unwrap()))
                    })?;
                    acc = g.mul(acc, x);
                }
                acc
            }
            Term::Product(ps) => {
                let mut acc = ID;
                for p in ps.iter() {
                    acc = g.mul(acc, p.eval_rec(g, sigma, off)?);
                }
                acc
            }
            Term::Inverse(a) => g.inv(a.eval_rec(g, sigma, off)?),
            Term::Commutator(ps) => {
                let vals = ps.iter().map(|p| p.eval_rec(g, sigma, off)).collect::<Result<Vec<_>>>()?;
                g.comm_iter(&vals)
            }
            Term::Conjugate(a, b) => g.conj(a.eval_rec(g, sigma, off)?, b.eval_rec(g, sigma, off)?),
            Term::Power(a, k) => g.pow(a.eval_rec(g, sigma, off)?, *k as i64),
            Term::Shifted(a, k) => a.eval_rec(g, sigma, off + k)?,
        })
    }

    /// Streams the flat token word without materializing it.
    pub fn tokens<'a>(&'a self, g: &'a Group) -> Tokens<'a> {
        Tokens {
            g,
            stack: vec![Item::Node(self, false, 0)],
        }
    }

    /// Evaluates by folding the flat token stream one token at a time.
    pub fn evaluate_streaming(&self, g: &Group, sigma: &Assignment) -> Result<Elem> {
        self.tokens(g).product(sigma)
    }

    /// Materializes the flat expression if it has at most `budget` tokens.
    pub fn to_expression(&self, g: &Group, budget: u128) -> Result<Expression> {
        let needed = self.len();
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(Expression {
            tokens: self.tokens(g).collect(),
            var_count: self.var_bound(),
        })
    }

    /// Writes the flat tokens separated by spaces, 32 per line.
    pub fn write_tokens(&self, g: &Group, out: &mut dyn Write) -> std::io::Result<()> {
        for (i, t) in self.tokens(g).enumerate() {
            let sep = if i % 32 == 31 { "\n" } else { " " };
            write!(out, "{}{sep}", super::io::token_str(t))?;
        }
        writeln!(out)
    }

    /// Exact image `{σ'(t) : σ' extends σ}` computed on the tree: siblings
    /// whose free variables are disjoint combine setwise, inversion and
    /// powers act elementwise, and a word whose free variables repeat is
    /// brute-forced if small. Fails with `NotReadOnce` when sibling subterms
    /// share a free variable.
    pub fn image(&self, g: &Group, sigma: &Assignment) -> Result<ElementSet> {
        self.image_rec(g, sigma, 0).map(|(s, _)| s)
    }

    fn image_rec(&self, g: &Group, sigma: &Assignment, off: u32) -> Result<(ElementSet, Span)> {
        match self {
            Term::Word(ts) => {
                let mut span = Span::EMPTY;
                let mut free = Vec::new();
                for t in ts.iter() {
                    if let Some(v) = t.shifted(off).var() {
                        if sigma.get(v).is_none() {
                            span = span.with(v.0);
                            free.push(v);
                        }
                    }
                }
                free.sort_unstable();
                let before = free.len();
                free.dedup();
                if free.len() == before {
                    return Ok((fold_read_once(g, ts, sigma, off), span));
                }
                let needed = assignment_count(g.order(), free.len());
                if needed > WORD_BRUTE_FORCE {
                    return Err(Error::NotReadOnce(free[0].0));
                }
                let shifted: Vec<Token> = ts.iter().map(|t| t.shifted(off)).collect();
                let e = Expression::from_tokens(shifted);
                let mut out = ElementSet::empty(g.order());
                for_each_extension(g.order(), sigma, &free, |tau| {
                    out.insert(e.evaluate(g, tau).unwrap());
                    !out.is_full()
                });
                Ok((out, span))
            }
            Term::Product(ps) => {
                let mut acc = ElementSet::singleton(g.order(), ID);
                let mut spans = Vec::with_capacity(ps.len());
                for p in ps.iter() {
                    let (s, span) = p.image_rec(g, sigma, off)?;
                    spans.push(span);
                    acc = g.set_product(&acc, &s);
                }
                Ok((acc, Span::disjoint_union(spans)?))
            }
            Term::Inverse(a) => {
                let (s, span) = a.image_rec(g, sigma, off)?;
                Ok((g.set_inverse(&s), span))
            }
            Term::Commutator(ps) => {
                let mut spans = Vec::with_capacity(ps.len());
                let mut acc: Option<ElementSet> = None;
                for p in ps.iter() {
                    let (s, span) = p.image_rec(g, sigma, off)?;
                    spans.push(span);
                    acc = Some(match acc {
                        None => s,
                        Some(a) => g.set_commutator(&a, &s),
                    });
                }
                let acc = acc.unwrap_or_else(|| ElementSet::singleton(g.order(), ID));
                Ok((acc, Span::disjoint_union(spans)?))
            }
            Term::Conjugate(a, b) => {
                let (sa, span_a) = a.image_rec(g, sigma, off)?;
                let (sb, span_b) = b.image_rec(g, sigma, off)?;
                let mut out = ElementSet::empty(g.order());
                for y in &sb {
                    for x in &sa {
                        out.insert(g.conj(x, y));
                    }
                }
                Ok((out, Span::disjoint_union(vec![span_a, span_b])?))
            }
            Term::Power(a, k) => {
                let (s, span) = a.image_rec(g, sigma, off)?;
                let out = ElementSet::from_elems(g.order(), s.iter().map(|x| g.pow(x, *k as i64)));
                Ok((out, span))
            }
            Term::Shifted(a, k) => a.image_rec(g, sigma, off + k),
        }
    }
}

/// Length of a left-normed commutator from its entries' lengths:
/// `L₁ = a₁`, `L_j = 2L_{j-1} + 2a_j`.
pub(crate) fn comm_fold(lens: impl Iterator<Item = u128>) -> u128 {
    let mut acc: Option<u128> = None;
    for l in lens {
        acc = Some(match acc {
            None => l,
            Some(a) => a.saturating_mul(2).saturating_add(l.saturating_mul(2)),
        });
    }
    acc.unwrap_or(0)
}

/// Inclusive range of free variable ids; used as a conservative
/// disjointness test between siblings.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: u32,
    hi: u32,
}

impl Span {
    const EMPTY: Span = Span { lo: u32::MAX, hi: 0 };

    fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    fn with(self, v: u32) -> Span {
        Span {
            lo: self.lo.min(v),
            hi: self.hi.max(v),
        }
    }

    fn disjoint_union(mut spans: Vec<Span>) -> Result<Span> {
        spans.retain(|s| !s.is_empty());
        spans.sort_by_key(|s| s.lo);
        for w in spans.windows(2) {
            if w[1].lo <= w[0].hi {
                return Err(Error::NotReadOnce(w[1].lo));
            }
        }
        Ok(match (spans.first(), spans.last()) {
            (Some(a), Some(b)) => Span { lo: a.lo, hi: b.hi },
            _ => Span::EMPTY,
        })
    }
}

enum Item<'a> {
    Node(&'a Term, bool, u32),
    /// The left-normed commutator of the first `j` entries.
    Comm(&'a [Term], usize, bool, u32),
    Words(&'a [Token], usize, bool, u32),
}

/// Iterator over the flat tokens of a [`Term`]; see [`Term::tokens`].
pub struct Tokens<'a> {
    g: &'a Group,
    stack: Vec<Item<'a>>,
}

impl<'a> Tokens<'a> {
    /// Replaces a structural item by its children on the stack.
    fn expand(&mut self, item: Item<'a>) {
        match item {
            Item::Words(..) => self.stack.push(item),
            Item::Node(t, inv, off) => match t {
                Term::Word(ts) => self.stack.push(Item::Words(ts, 0, inv, off)),
                Term::Product(ps) => {
                    if inv {
                        self.stack.extend(ps.iter().map(|p| Item::Node(p, true, off)));
                    } else {
                        self.stack.extend(ps.iter().rev().map(|p| Item::Node(p, false, off)));
                    }
                }
                Term::Inverse(a) => self.stack.push(Item::Node(a, !inv, off)),
                Term::Commutator(ps) => self.stack.push(Item::Comm(ps, ps.len(), inv, off)),
                Term::Conjugate(a, b) => {
                    // b⁻¹ a b, inverse b⁻¹ a⁻¹ b
                    self.stack.push(Item::Node(b, false, off));
                    self.stack.push(Item::Node(a, inv, off));
                    self.stack.push(Item::Node(b, true, off));
                }
                Term::Power(a, k) => {
                    for _ in 0..*k {
                        self.stack.push(Item::Node(a, inv, off));
                    }
                }
                Term::Shifted(a, k) => self.stack.push(Item::Node(a, inv, off + k)),
            },
            Item::Comm(ps, j, inv, off) => match j {
                0 => {}
                1 => self.stack.push(Item::Node(&ps[0], inv, off)),
                _ => {
                    let a = &ps[j - 1];
                    if inv {
                        // [C,a]⁻¹ = a⁻¹ C⁻¹ a C
                        self.stack.push(Item::Comm(ps, j - 1, false, off));
                        self.stack.push(Item::Node(a, false, off));
                        self.stack.push(Item::Comm(ps, j - 1, true, off));
                        self.stack.push(Item::Node(a, true, off));
                    } else {
                        // [C,a] = C⁻¹ a⁻¹ C a
                        self.stack.push(Item::Node(a, false, off));
                        self.stack.push(Item::Comm(ps, j - 1, false, off));
                        self.stack.push(Item::Node(a, true, off));
                        self.stack.push(Item::Comm(ps, j - 1, true, off));
                    }
                }
            },
        }
    }

    /// Left-to-right product of the remaining tokens. Same order as the
    /// iterator, but word leaves are folded in one pass.
    fn product(mut self, sigma: &Assignment) -> Result<Elem> {
        let g = self.g;
        let mut acc = ID;
        // flat words of small shared subterms, keyed by node and orientation
        let mut flat: HashMap<(usize, bool), Option<Arc<[Token]>>> = HashMap::new();
        let fold = |acc: &mut Elem, ts: &[Token], off: u32| -> Result<()> {
            for &t in ts {
                let t = t.shifted(off);
                let x = t
                    .value(g, sigma)
                    .ok_or_else(|| Error::Input(format!("unassigned variable {}", t.var().unwrap())))?;
                *acc = g.mul(*acc, x);
            }
            Ok(())
        };
        while let Some(item) = self.stack.pop() {
            match item {
                Item::Words(ts, pos, false, off) => fold(&mut acc, &ts[pos..], off)?,
                Item::Words(ts, pos, true, off) => {
                    let rev: Vec<Token> = ts[..ts.len() - pos].iter().rev().map(|t| t.inverse(g)).collect();
                    fold(&mut acc, &rev, off)?;
                }
                Item::Node(t @ (Term::Product(_) | Term::Commutator(_) | Term::Power(..)), inv, off) => {
                    let words = flat.entry((t as *const Term as usize, inv)).or_insert_with(|| {
                        (t.len() <= FLAT_CACHE).then(|| {
                            let mut sub = t.tokens(g);
                            sub.stack[0] = Item::Node(t, inv, 0);
                            sub.collect()
                        })
                    });
                    match words {
                        Some(ws) => fold(&mut acc, ws, off)?,
                        None => self.expand(item),
                    }
                }
                _ => self.expand(item),
            }
        }
        Ok(acc)
    }
}

impl Iterator for Tokens<'_> {
    type Item = Token;

    fn next(&mut self) -> Option<Token> {
        while let Some(item) = self.stack.pop() {
            let Item::Words(ts, pos, inv, off) = item else {
                self.expand(item);
                continue;
            };
            if pos == ts.len() {
                continue;
            }
            self.stack.push(Item::Words(ts, pos + 1, inv, off));
            let t = if inv { ts[ts.len() - 1 - pos].inverse(self.g) } else { ts[pos] };
            return Some(t.shifted(off));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::super::{commutator_expr, conjugate_expr, iterated_commutator_expr, image_exact};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s4() -> Group {
        Group::from_spec(&include_str!("../../catalog/s4.grp").parse().unwrap()).unwrap()
    }

    /// Builds a random term and the flat expression it should equal.
    fn random_term(g: &Group, rng: &mut ChaCha8Rng, depth: u32, next_var: &mut u32) -> (Term, Expression) {
        let leaf = depth == 0 || rng.gen_bool(0.3);
        if leaf {
            let n = rng.gen_range(1..3);
            let mut toks = Vec::new();
            for _ in 0..n {
                toks.push(match rng.gen_range(0..3) {
                    0 => Token::Const(rng.gen_range(0..g.order())),
                    1 => {
                        *next_var += 1;
                        Token::Var(VarId(*next_var - 1))
                    }
                    _ => {
                        *next_var += 1;
                        Token::InvVar(VarId(*next_var - 1))
                    }
                });
            }
            return (Term::word(toks.clone()), Expression::from_tokens(toks));
        }
        match rng.gen_range(0..6) {
            0 | 1 => {
                let k = rng.gen_range(1..4);
                let parts: Vec<_> = (0..k).map(|_| random_term(g, rng, depth - 1, next_var)).collect();
                let flat = parts.iter().fold(Expression::default(), |a, (_, e)| a.concat(e));
                let terms = parts.into_iter().map(|(t, _)| t).collect();
                if rng.gen_bool(0.5) {
                    (Term::product(terms), flat)
                } else {
                    let (terms, exprs): (Vec<_>, Vec<_>) = (0..k)
                        .map(|_| random_term(g, rng, depth - 1, next_var))
                        .unzip();
                    (Term::commutator(terms), iterated_commutator_expr(g, &exprs))
                }
            }
            2 => {
                let (t, e) = random_term(g, rng, depth - 1, next_var);
                (Term::inverse(t), e.inverse(g))
            }
            3 => {
                let (a, ea) = random_term(g, rng, depth - 1, next_var);
                let (b, eb) = random_term(g, rng, depth - 1, next_var);
                (Term::conjugate(a, b), conjugate_expr(g, &ea, &eb))
            }
            4 => {
                let (a, ea) = random_term(g, rng, depth - 1, next_var);
                let k = rng.gen_range(1..4);
                let flat = (0..k).fold(Expression::default(), |acc, _| acc.concat(&ea));
                (Term::power(a, k), flat)
            }
            _ => {
                let (a, ea) = random_term(g, rng, depth - 1, next_var);
                let by = *next_var;
                *next_var += ea.var_count();
                (Term::shifted(&Arc::new(a), by), ea.shifted(by))
            }
        }
    }

    #[test]
    fn flattening_length_and_evaluation_agree() {
        let g = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let mut nv = 0;
            let (t, e) = random_term(&g, &mut rng, 4, &mut nv);
            let flat: Vec<Token> = t.tokens(&g).collect();
            assert_eq!(flat, e.tokens());
            assert_eq!(t.len(), e.len() as u128);
            let bound = t.var_bound().max(e.var_count());
            let sigma = Assignment::total((0..bound).map(|_| rng.gen_range(0..24)));
            let want = e.evaluate(&g, &sigma).unwrap();
            assert_eq!(t.evaluate(&g, &sigma).unwrap(), want);
            assert_eq!(t.evaluate_streaming(&g, &sigma).unwrap(), want);
            let occ = e.occurrences();
            for v in 0..e.var_count() {
                assert_eq!(t.occurrences(&|w| w.0 == v), occ[v as usize] as u128);
            }
        }
    }

    #[test]
    fn set_images_match_brute_force() {
        let g = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 150 {
            let mut nv = 0;
            let (t, e) = random_term(&g, &mut rng, 3, &mut nv);
            let mut sigma = Assignment::empty(nv as usize);
            // leave at most three variables free
            for v in 0..nv.saturating_sub(3) {
                sigma.set(VarId(v), rng.gen_range(0..24));
            }
            match t.image(&g, &sigma) {
                Ok(img) => {
                    assert_eq!(img, image_exact(&g, &e, &sigma, 1 << 20).unwrap());
                    checked += 1;
                }
                Err(Error::NotReadOnce(_)) => {}
                Err(other) => panic!("{other}"),
            }
        }
    }

    #[test]
    fn shared_free_variables_are_refused() {
        let g = s4();
        let x = Term::var(0);
        let t = Term::commutator(vec![x.clone(), x]);
        assert!(matches!(t.image(&g, &Assignment::default()), Err(Error::NotReadOnce(0))));
        let mut sigma = Assignment::default();
        sigma.set(VarId(0), 5);
        assert_eq!(t.image(&g, &sigma).unwrap().to_vec(), vec![ID]);
    }

    #[test]
    fn deep_commutator_length_saturates() {
        let parts: Vec<Term> = (0..200).map(Term::var).collect();
        let t = Term::commutator(parts);
        assert_eq!(t.len(), u128::MAX);
        let small = Term::commutator((0..5).map(Term::var).collect());
        assert_eq!(small.len(), 3 * 16 - 2);
        let g = s4();
        assert!(matches!(t.to_expression(&g, 1000), Err(Error::BudgetExceeded { .. })));
        let e = commutator_expr(&g, &Expression::var(0), &Expression::var(1));
        assert_eq!(Term::from(e.clone()).to_expression(&g, 100).unwrap(), e);
    }
}
