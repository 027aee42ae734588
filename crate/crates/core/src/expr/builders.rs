//! Expressions whose image (inducers) or vanishing set (definers) is a
//! prescribed subgroup.
//!
//! Every `*_inducer` returns a [`Term`] together with nothing else; the
//! `build_*` wrappers flatten it. Variables of separate factors are always
//! disjoint, so images can be computed exactly with [`Term::image`].

use std::collections::HashMap;
use std::sync::Arc;

use super::{Assignment, Expression, Term, Token, VarId};
use crate::error::{input, Error, Result};
use crate::group::{ElementSet, Elem, Group, Subgroup, ID};

/// Flattening budget used by the `build_*` wrappers.
pub const FLATTEN_BUDGET: u128 = 50_000_000;

/// Length of a left-normed commutator of `k` single letters:
/// `3·2^(k-1) - 2`.
pub fn comm_word_len(k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    3u128.saturating_mul(1u128.checked_shl(k as u32 - 1).unwrap_or(u128::MAX)).saturating_sub(2)
}

/// `∏_{i<|G|} X_i^k`. Image: `⟨g^k : g ∈ G⟩`. Length `|G|·k`.
pub fn power_inducer(g: &Group, k: u32) -> Term {
    Term::product((0..g.order() as u32).map(|i| Term::power(Term::var(i), k)).collect())
}

pub fn build_power_inducer(g: &Group, k: u32) -> Result<Expression> {
    power_inducer(g, k).to_expression(g, FLATTEN_BUDGET)
}

/// `∏_{i<|G|} [X_{i,1},…,X_{i,k}]`. Image: `γ_k G`.
/// Length `|G|·(3·2^(k-1) - 2)`.
pub fn gamma_inducer(g: &Group, k: usize) -> Result<Term> {
    if k == 0 {
        return input("gamma inducer needs k >= 1");
    }
    let k32 = k as u32;
    Ok(Term::product(
        (0..g.order() as u32)
            .map(|i| Term::commutator((0..k32).map(|j| Term::var(i * k32 + j)).collect()))
            .collect(),
    ))
}

pub fn build_gamma_inducer(g: &Group, k: usize) -> Result<Expression> {
    gamma_inducer(g, k)?.to_expression(g, FLATTEN_BUDGET)
}

/// Inducer for `ℒ_i G`, obtained by plugging a fresh copy of the inducer for
/// `ℒ_{i-1}G` into every variable of a `γ_s`-shaped product, where `s` is the
/// first index at which the lower central series of `ℒ_{i-1}G` is stable.
pub fn lower_fitting_inducer(g: &Group, i: usize) -> Result<Term> {
    let series = g.lower_fitting_series()?;
    if i >= series.len() {
        return input(format!("lower Fitting series has no term {i}"));
    }
    let mut inner = Arc::new(Term::var(0));
    for prev in &series[..i] {
        let s = lower_fitting_arity(g, prev);
        let width = inner.var_bound();
        let mut next = 0u32;
        let mut factors = Vec::with_capacity(g.order());
        for _ in 0..g.order() {
            let mut entries = Vec::with_capacity(s);
            for _ in 0..s {
                entries.push(Term::shifted(&inner, next));
                next += width;
            }
            factors.push(Term::commutator(entries));
        }
        inner = Arc::new(Term::product(factors));
    }
    Ok(Arc::unwrap_or_clone(inner))
}

/// Number of commutator entries used at one plugging step of
/// [`lower_fitting_inducer`].
pub fn lower_fitting_arity(g: &Group, prev: &Subgroup) -> usize {
    g.lower_central_series_of(prev).len().max(2)
}

pub fn lower_fitting_inducer_len(g: &Group, i: usize) -> Result<u128> {
    let series = g.lower_fitting_series()?;
    let mut len = 1u128;
    for prev in &series[..i.min(series.len())] {
        len = len
            .saturating_mul(g.order() as u128)
            .saturating_mul(comm_word_len(lower_fitting_arity(g, prev)));
    }
    Ok(len)
}

pub fn build_lower_fitting_inducer(g: &Group, i: usize) -> Result<Expression> {
    lower_fitting_inducer(g, i)?.to_expression(g, FLATTEN_BUDGET)
}

/// `∏_{i<|K|} ∏_{c∈K} c⁻¹ X_{i,c}⁻¹ c X_{i,c}` for a normal `K` with
/// `K = [K, G]`. Each factor is `[c, X]`, so the image lies in `[K,G] = K`;
/// every factor can be made trivial, and each element of `K` is a product
/// of at most `|K|` commutators `[c, x]`, one per block. Length `4|K|²`.
pub fn commutator_fixed_inducer(g: &Group, k: &Subgroup) -> Result<Term> {
    if !g.is_normal(k) {
        return input("commutator-fixed inducer needs a normal subgroup");
    }
    if g.commutator(k, &g.whole()) != *k {
        return Err(Error::NotCommutatorFixed);
    }
    let members = k.members().to_vec();
    let n = members.len() as u32;
    let block = Arc::new(Term::product(
        members
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let v = VarId(j as u32);
                Term::word(vec![Token::Const(g.inv(c)), Token::InvVar(v), Token::Const(c), Token::Var(v)])
            })
            .collect(),
    ));
    Ok(Term::product((0..n).map(|i| Term::shifted(&block, i * n)).collect()))
}

pub fn build_commutator_fixed_inducer(g: &Group, k: &Subgroup) -> Result<Expression> {
    commutator_fixed_inducer(g, k)?.to_expression(g, FLATTEN_BUDGET)
}

/// Assignment making [`commutator_fixed_inducer`] evaluate to `x ∈ K`:
/// `x` is split into at most `|K|` commutators `[c, y]`, one per block.
pub fn commutator_fixed_witness(g: &Group, k: &Subgroup, x: Elem) -> Option<Assignment> {
    let members = k.members().to_vec();
    let n = members.len();
    let mut how: HashMap<Elem, (usize, Elem)> = HashMap::new();
    for (j, &c) in members.iter().enumerate() {
        for y in g.elements() {
            how.entry(g.comm(c, y)).or_insert((j, y));
        }
    }
    let factors = ElementSet::from_elems(g.order(), how.keys().copied());
    let word = g.product_decomposition(&factors, n, x)?;
    let mut sigma = Assignment::total(std::iter::repeat(ID).take(n * n));
    for (block, t) in word.into_iter().enumerate() {
        let (j, y) = how[&t];
        sigma.set(VarId((block * n + j) as u32), y);
    }
    Some(sigma)
}

/// Number of conjugate entries in the Fitting definer of `g`: one more
/// than the stabilization constant, since `[N, M N]` needs `M+1` entries.
pub fn fitting_definer_entries(g: &Group) -> usize {
    g.stabilization_constant() + 1
}

/// `[X^{Y_1},…,X^{Y_e}]` with `X` = variable 0 and `Y_j` = variable `j`.
pub fn fitting_definer_with(entries: usize) -> Term {
    let x = Arc::new(Term::var(0));
    Term::commutator(
        (1..=entries as u32)
            .map(|j| Term::Conjugate(x.clone(), Arc::new(Term::var(j))))
            .collect(),
    )
}

/// Defines `Fit(G)`: `x ∈ Fit(G)` iff the expression vanishes for all `Y`.
pub fn fitting_definer(g: &Group) -> Term {
    fitting_definer_with(fitting_definer_entries(g))
}

pub fn build_fitting_definer(g: &Group) -> Result<Expression> {
    fitting_definer(g).to_expression(g, FLATTEN_BUDGET)
}

/// `[X, β]` with `β` moved past variable 0. Defines `C_G(H)` when `β`
/// induces `H`.
pub fn centralizer_definer(h_inducer: &Term) -> Term {
    Term::commutator(vec![Term::var(0), Term::shifted(&Arc::new(h_inducer.clone()), 1)])
}

pub fn build_centralizer_definer(g: &Group, h_inducer: &Term) -> Result<Expression> {
    centralizer_definer(h_inducer).to_expression(g, FLATTEN_BUDGET)
}

/// `{x : t(x, Y) = 1 for all Y}` where `x` is variable 0 and every other
/// variable is universally quantified; uses the exact tree image.
pub fn defined_set(g: &Group, t: &Term) -> Result<ElementSet> {
    let mut out = ElementSet::empty(g.order());
    let mut sigma = Assignment::empty(1);
    for x in g.elements() {
        sigma.set(VarId(0), x);
        let img = t.image(g, &sigma)?;
        if img.count() == 1 && img.contains(ID) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Universal definer for `𝒰_i G`, built by nesting Fitting definers of the
/// quotients `G/𝒰_j G`:
/// `D_i(X) = β_0(β_1(…β_{i-1}(X)…))` where `β_j` has the shape of the
/// Fitting definer of `G/𝒰_j G` and fresh `Y` variables.
#[derive(Clone, Debug)]
pub struct LayeredDefiner {
    /// Entry counts, outermost layer (`G/𝒰_0 = G`) first.
    pub layers: Vec<usize>,
    term: Term,
}

/// `𝒰_i G` definer; for `i ≥ FitL(G)` it defines all of `G`.
pub fn upper_fitting_definer(g: &Group, i: usize) -> Result<LayeredDefiner> {
    if i == 0 {
        return input("upper Fitting definer needs i >= 1");
    }
    let upper = g.upper_fitting_series()?;
    let mut layers = Vec::with_capacity(i);
    for j in 0..i {
        let u = &upper[j.min(upper.len() - 1)];
        let q = g.quotient(u)?;
        layers.push(fitting_definer_entries(&q.group));
    }
    Ok(LayeredDefiner::new(layers))
}

impl LayeredDefiner {
    pub fn new(layers: Vec<usize>) -> Self {
        let mut t = Arc::new(Term::var(0));
        let mut next = 1u32;
        for &e in layers.iter().rev() {
            let entries = (0..e as u32)
                .map(|l| Term::Conjugate(t.clone(), Arc::new(Term::var(next + l))))
                .collect();
            next += e as u32;
            t = Arc::new(Term::commutator(entries));
        }
        LayeredDefiner {
            layers,
            term: Arc::unwrap_or_clone(t),
        }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn len(&self) -> u128 {
        self.layers.iter().rev().fold(1u128, |t, &e| {
            t.saturating_add(2).saturating_mul(comm_word_len(e))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Exact defined set. The inner layer's value is shared by all outer
    /// occurrences, so the image is propagated one layer at a time as a
    /// union over the inner layer's possible values.
    pub fn defined_set(&self, g: &Group) -> ElementSet {
        let mut cache = LayerCache::default();
        ElementSet::from_elems(
            g.order(),
            g.elements().filter(|&x| {
                let reach = self.reachable(g, x, &mut cache);
                reach.count() == 1 && reach.contains(ID)
            }),
        )
    }

    fn reachable(&self, g: &Group, x: Elem, cache: &mut LayerCache) -> ElementSet {
        let mut s = ElementSet::singleton(g.order(), x);
        for &e in self.layers.iter().rev() {
            let mut next = ElementSet::empty(g.order());
            for v in &s {
                next.union_with(&cache.image(g, v, e).0);
            }
            s = next;
        }
        s
    }

    /// An assignment with `X = x` under which the definer does not vanish,
    /// or `None` if `x` is in the defined set.
    pub fn witness(&self, g: &Group, x: Elem) -> Option<Assignment> {
        let mut cache = LayerCache::default();
        // forward: per layer, value reached -> (inner value)
        let mut levels: Vec<HashMap<Elem, Elem>> = Vec::new();
        let mut s = vec![x];
        for &e in self.layers.iter().rev() {
            let mut back = HashMap::new();
            for &v in &s {
                for y in cache.image(g, v, e).0.iter() {
                    back.entry(y).or_insert(v);
                }
            }
            s = back.keys().copied().collect();
            s.sort_unstable();
            levels.push(back);
        }
        let mut target = *s.iter().find(|&&v| v != ID)?;
        // backward: recover the Y values layer by layer, outermost first
        let mut sigma = Assignment::empty(1);
        sigma.set(VarId(0), x);
        let mut next_var: Vec<u32> = Vec::new();
        let mut acc = 1u32;
        for &e in self.layers.iter().rev() {
            next_var.push(acc);
            acc += e as u32;
        }
        for (depth, &e) in self.layers.iter().enumerate() {
            let level = self.layers.len() - 1 - depth;
            let inner = levels[level][&target];
            let ys = cache.witness(g, inner, e, target);
            for (l, &y) in ys.iter().enumerate() {
                sigma.set(VarId(next_var[level] + l as u32), y);
            }
            target = inner;
        }
        Some(sigma)
    }
}

/// Memoized images of `[s^{Y_1},…,s^{Y_e}]` over all `Y`, with one witness
/// tuple per reachable value.
#[derive(Default)]
struct LayerCache {
    map: HashMap<(Elem, usize), (ElementSet, HashMap<Elem, Vec<Elem>>)>,
}

impl LayerCache {
    fn image(&mut self, g: &Group, s: Elem, e: usize) -> &(ElementSet, HashMap<Elem, Vec<Elem>>) {
        self.map.entry((s, e)).or_insert_with(|| {
            // conjugate of s -> least conjugator producing it
            let mut class: Vec<(Elem, Elem)> = Vec::new();
            let mut seen = ElementSet::empty(g.order());
            for y in g.elements() {
                let c = g.conj(s, y);
                if seen.insert(c) {
                    class.push((c, y));
                }
            }
            // value -> conjugators realizing it
            let mut reach: HashMap<Elem, Vec<Elem>> =
                class.iter().map(|&(c, y)| (c, vec![y])).collect();
            for _ in 1..e {
                let mut next: HashMap<Elem, Vec<Elem>> = HashMap::new();
                let mut keys: Vec<Elem> = reach.keys().copied().collect();
                keys.sort_unstable();
                for a in keys {
                    for &(c, y) in &class {
                        let v = g.comm(a, c);
                        next.entry(v).or_insert_with(|| {
                            let mut w = reach[&a].clone();
                            w.push(y);
                            w
                        });
                    }
                }
                reach = next;
            }
            let set = ElementSet::from_elems(g.order(), reach.keys().copied());
            (set, reach)
        })
    }

    fn witness(&mut self, g: &Group, s: Elem, e: usize, value: Elem) -> Vec<Elem> {
        self.image(g, s, e).1[&value].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{image_exact, DEFAULT_BUDGET};
    use super::*;

    fn grp(text: &str) -> Group {
        Group::from_spec(&text.parse().unwrap()).unwrap()
    }

    fn s3() -> Group {
        grp(include_str!("../../catalog/s3.grp"))
    }

    fn s4() -> Group {
        grp(include_str!("../../catalog/s4.grp"))
    }

    fn free() -> Assignment {
        Assignment::default()
    }

    #[test]
    fn power_inducers() {
        let g = s3();
        let t = power_inducer(&g, 1);
        assert!(t.image(&g, &free()).unwrap().is_full());
        let t3 = power_inducer(&g, 3);
        assert_eq!(t3.len(), 6 * 3);
        assert_eq!(&t3.image(&g, &free()).unwrap(), g.power_subgroup(3).members());
        assert_eq!(g.power_subgroup(3).order(), 6);
        assert_eq!(power_inducer(&g, 2).image(&g, &free()).unwrap().count(), 3);
        let h = s4();
        let e = build_power_inducer(&h, 2).unwrap();
        assert_eq!(e.len(), 48);
        assert_eq!(&power_inducer(&h, 2).image(&h, &free()).unwrap(), h.power_subgroup(2).members());
        // truncation to one factor: brute force agrees with the tree image
        let one = Term::power(Term::var(0), 2);
        let flat = one.to_expression(&h, 10).unwrap();
        assert_eq!(one.image(&h, &free()).unwrap(), image_exact(&h, &flat, &free(), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn gamma_inducers() {
        let c6 = Group::cyclic(6).unwrap();
        assert_eq!(gamma_inducer(&c6, 2).unwrap().image(&c6, &free()).unwrap().to_vec(), vec![ID]);
        let g = s4();
        let t = gamma_inducer(&g, 2).unwrap();
        assert_eq!(t.len(), 24 * 4);
        assert_eq!(t.image(&g, &free()).unwrap().count(), 12);
        let lcs = g.lower_central_series();
        let t = gamma_inducer(&g, lcs.len() + 1).unwrap();
        assert_eq!(&t.image(&g, &free()).unwrap(), lcs.last().unwrap().members());
        assert_eq!(t.len(), 24 * comm_word_len(lcs.len() + 1));
    }

    #[test]
    fn lower_fitting_inducers() {
        let g = s4();
        let lower = g.lower_fitting_series().unwrap();
        for i in 0..lower.len() {
            let t = lower_fitting_inducer(&g, i).unwrap();
            assert_eq!(&t.image(&g, &free()).unwrap(), lower[i].members(), "i = {i}");
            assert_eq!(t.len(), lower_fitting_inducer_len(&g, i).unwrap());
        }
        assert!(lower_fitting_inducer(&g, 4).is_err());
    }

    #[test]
    fn commutator_fixed_inducers() {
        let g = s4();
        assert!(commutator_fixed_inducer(&g, &g.trivial()).unwrap().image(&g, &free()).unwrap().count() == 1);
        for k in [g.power_subgroup(2), g.fitting_subgroup()] {
            let t = commutator_fixed_inducer(&g, &k).unwrap();
            assert_eq!(t.len(), 4 * (k.order() as u128).pow(2));
            assert_eq!(&t.image(&g, &free()).unwrap(), k.members());
        }
        assert!(matches!(commutator_fixed_inducer(&g, &g.whole()), Err(Error::NotCommutatorFixed)));
        let a4 = g.commutator(&g.whole(), &g.whole());
        let t = commutator_fixed_inducer(&g, &a4).unwrap();
        for x in a4.iter() {
            let sigma = commutator_fixed_witness(&g, &a4, x).unwrap();
            assert_eq!(t.evaluate(&g, &sigma).unwrap(), x);
        }
        let odd = g.elements().find(|&x| !a4.contains(x)).unwrap();
        assert!(commutator_fixed_witness(&g, &a4, odd).is_none());
    }

    #[test]
    fn fitting_definers() {
        let g = s4();
        let t = fitting_definer(&g);
        let e = fitting_definer_entries(&g);
        assert_eq!(t.len(), 3 * comm_word_len(e));
        assert_eq!(&defined_set(&g, &t).unwrap(), g.fitting_subgroup().members());
        let h = s3();
        assert_eq!(defined_set(&h, &fitting_definer(&h)).unwrap().count(), 3);
        let d4 = grp(include_str!("../../catalog/d4.grp"));
        assert!(defined_set(&d4, &fitting_definer(&d4)).unwrap().is_full());
        // M entries alone is one short for abelian groups
        let c5 = Group::cyclic(5).unwrap();
        assert_eq!(defined_set(&c5, &fitting_definer_with(1)).unwrap().count(), 1);
        assert!(defined_set(&c5, &fitting_definer(&c5)).unwrap().is_full());
    }

    #[test]
    fn upper_fitting_definers() {
        let g = s4();
        let upper = g.upper_fitting_series().unwrap();
        for i in 1..=4 {
            let d = upper_fitting_definer(&g, i).unwrap();
            let want = upper[i.min(3)].members();
            assert_eq!(&d.defined_set(&g), want, "i = {i}");
            assert_eq!(d.term().len(), d.len());
            for x in g.elements() {
                match d.witness(&g, x) {
                    None => assert!(want.contains(x)),
                    Some(sigma) => {
                        assert!(!want.contains(x));
                        assert_ne!(d.term().evaluate(&g, &fill(&sigma, d.term())).unwrap(), ID);
                    }
                }
            }
        }
        // one layer is the plain Fitting definer
        let one = upper_fitting_definer(&g, 1).unwrap();
        assert_eq!(&defined_set(&g, one.term()).unwrap(), upper[1].members());
    }

    fn fill(sigma: &Assignment, t: &Term) -> Assignment {
        let mut full = sigma.clone();
        for v in 0..t.var_bound() {
            if full.get(VarId(v)).is_none() {
                full.set(VarId(v), ID);
            }
        }
        full
    }

    #[test]
    fn centralizer_definers() {
        let g = s4();
        let t = centralizer_definer(&Term::var(0));
        assert_eq!(defined_set(&g, &t).unwrap().to_vec(), vec![ID]);
        let trivial = centralizer_definer(&Term::constant(ID));
        assert!(defined_set(&g, &trivial).unwrap().is_full());
        let d4 = grp(include_str!("../../catalog/d4.grp"));
        let z = defined_set(&d4, &centralizer_definer(&Term::var(0))).unwrap();
        assert_eq!(&z, d4.center().members());
        assert_eq!(z.count(), 2);
        let e = build_centralizer_definer(&d4, &Term::var(0)).unwrap();
        assert_eq!(e.len(), 4);
    }
}
