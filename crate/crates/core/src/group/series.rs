//! Commutator calculus, quotients and the nilpotent/Fitting series.

use std::sync::OnceLock;

use super::{ElementSet, Elem, Group, Subgroup, ID};
use crate::error::{input, Error, Result};

/// `G/N` together with the projection and the least-index section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// element of G → coset index
    pub proj: Vec<Elem>,
    /// coset index → least element of the coset
    pub section: Vec<Elem>,
}

impl Quotient {
    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, g: &Group, s: &Subgroup) -> Subgroup {
        let members = ElementSet::from_elems(
            g.order(),
            (0..g.order()).filter(|&x| s.contains(self.proj[x])),
        );
        g.subgroup_generated(&members)
    }

    pub fn project_set(&self, x: &ElementSet) -> ElementSet {
        ElementSet::from_elems(self.group.order(), x.iter().map(|a| self.proj[a]))
    }
}

/// Default work budget for [`Group::stabilization_constant`], counted in
/// pair-steps times group order.
pub const STABILIZATION_BUDGET: u64 = 200_000_000;

impl Group {
    /// `G/N`, cosets numbered by their least element.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return input("quotient by a non-normal subgroup");
        }
        let members = n.members().to_vec();
        let mut proj = vec![usize::MAX; self.order()];
        let mut section = Vec::new();
        for g in self.elements() {
            if proj[g] != usize::MAX {
                continue;
            }
            for &h in &members {
                proj[self.mul(g, h)] = section.len();
            }
            section.push(g);
        }
        let q = section.len();
        let mut mul = vec![0u16; q * q];
        for (c, &x) in section.iter().enumerate() {
            for (d, &y) in section.iter().enumerate() {
                mul[c * q + d] = proj[self.mul(x, y)] as u16;
            }
        }
        let inv = section.iter().map(|&x| proj[self.inv(x)] as u16).collect();
        let mut gens: Vec<Elem> = self.gens.iter().map(|&s| proj[s]).filter(|&c| c != ID).collect();
        gens.sort_unstable();
        gens.dedup();
        let group = Group {
            order: q,
            mul,
            inv,
            gens,
            labels: None,
            classes: OnceLock::new(),
        };
        Ok(Quotient {
            group,
            proj,
            section,
        })
    }

    /// `[X, Y₁, …, Y_k]` for a normal `X` and conjugation-closed `Yᵢ`,
    /// computed as `⟨[X,Y]_Set⟩` and re-closed after every step.
    pub fn iterated_commutator_subgroup(&self, x: &Subgroup, ys: &[ElementSet]) -> Result<Subgroup> {
        if !self.is_normal(x) {
            return input("iterated commutator needs a normal first argument");
        }
        if let Some(i) = ys.iter().position(|y| !self.is_conjugation_closed(y)) {
            return input(format!("argument {} is not closed under conjugation", i + 1));
        }
        let mut cur = x.clone();
        for y in ys {
            cur = self.subgroup_generated(&self.set_commutator(cur.members(), y));
        }
        Ok(cur)
    }

    /// `γ_k(H)` with `γ₁(H) = H`.
    pub fn gamma(&self, h: &Subgroup, k: usize) -> Subgroup {
        let mut cur = h.clone();
        for _ in 1..k {
            let next = self.commutator(&cur, h);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    /// `[G = γ₁G, γ₂G, …]`, stopping at the first repeated term, which is
    /// therefore the last entry and equals `γ_∞G`.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        self.lower_central_series_of(&self.whole())
    }

    pub fn lower_central_series_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut out = vec![h.clone()];
        loop {
            let next = self.commutator(out.last().unwrap(), h);
            if &next == out.last().unwrap() {
                return out;
            }
            out.push(next);
        }
    }

    /// `γ_∞(H)`
    pub fn nilpotent_residual(&self, h: &Subgroup) -> Subgroup {
        self.lower_central_series_of(h).pop().unwrap()
    }

    pub fn is_nilpotent(&self, h: &Subgroup) -> bool {
        self.nilpotent_residual(h).is_trivial()
    }

    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut out = vec![self.whole()];
        loop {
            let last = out.last().unwrap();
            let next = self.commutator(last, last);
            if &next == last {
                return out;
            }
            out.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_trivial()
    }

    /// `Fit(G) = ⟨g : ⟨g^G⟩ nilpotent⟩`
    pub fn fitting_subgroup(&self) -> Subgroup {
        let mut members = ElementSet::empty(self.order());
        for class in self.classes() {
            let rep = class.min().unwrap();
            if self.is_nilpotent(&self.normal_closure_of(rep)) {
                members.union_with(class);
            }
        }
        self.subgroup_generated(&members)
    }

    /// `1 = 𝒰₀ ≤ 𝒰₁ ≤ … ≤ 𝒰_d = G` with `𝒰_{i+1}/𝒰_i = Fit(G/𝒰_i)`.
    pub fn upper_fitting_series(&self) -> Result<Vec<Subgroup>> {
        let mut out = vec![self.trivial()];
        while out.last().unwrap().order() < self.order() {
            let q = self.quotient(out.last().unwrap())?;
            let fit = q.group.fitting_subgroup();
            if fit.is_trivial() {
                return Err(Error::NotSolvable);
            }
            out.push(q.preimage(self, &fit));
        }
        Ok(out)
    }

    /// `G = ℒ₀ ≥ ℒ₁ ≥ … ≥ ℒ_d = 1` with `ℒ_{i+1} = γ_∞(ℒ_i)`.
    pub fn lower_fitting_series(&self) -> Result<Vec<Subgroup>> {
        let mut out = vec![self.whole()];
        while !out.last().unwrap().is_trivial() {
            let next = self.nilpotent_residual(out.last().unwrap());
            if &next == out.last().unwrap() {
                return Err(Error::NotSolvable);
            }
            out.push(next);
        }
        Ok(out)
    }

    pub fn fitting_length(&self) -> Result<usize> {
        Ok(self.upper_fitting_series()?.len() - 1)
    }

    /// Fitting length of `H` as a group in its own right.
    pub fn fitting_length_of(&self, h: &Subgroup) -> Result<usize> {
        let (sub, _) = self.subgroup_as_group(h);
        sub.fitting_length()
    }

    /// Fitting length of a normal subgroup read off the upper Fitting
    /// series of `G`, using `𝒰_i(H) = 𝒰_i(G) ∩ H`.
    pub fn fitting_length_in(upper: &[Subgroup], h: &Subgroup) -> usize {
        upper.iter().position(|u| h.is_subgroup_of(u)).unwrap()
    }

    /// `η_g(H)`: the stable value of `H ← [H, g^G]`.
    pub fn eta(&self, h: &Subgroup, g: Elem) -> Result<Subgroup> {
        if !self.is_normal(h) {
            return input("eta needs a normal subgroup");
        }
        Ok(self.eta_unchecked(h, &self.normal_closure_of(g)))
    }

    pub(crate) fn eta_unchecked(&self, h: &Subgroup, n: &Subgroup) -> Subgroup {
        let mut cur = h.clone();
        loop {
            let next = self.commutator(&cur, n);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Number of steps `X ← [X, Y]` takes to reach its fixpoint.
    pub fn stabilization_steps(&self, x: &Subgroup, y: &Subgroup) -> usize {
        let mut cur = x.clone();
        let mut steps = 0;
        loop {
            let next = self.commutator(&cur, y);
            if next == cur {
                return steps;
            }
            cur = next;
            steps += 1;
        }
    }

    /// Least `M ≥ 1` with `[X, M Y] = [X, M+1 Y]` over all `X, Y` that are
    /// `G` or normal closures of single elements. Falls back to `|G|` when
    /// the check would exceed the default budget.
    pub fn stabilization_constant(&self) -> usize {
        self.stabilization_constant_within(STABILIZATION_BUDGET)
    }

    pub fn stabilization_constant_within(&self, budget: u64) -> usize {
        let mut closures: Vec<Subgroup> = vec![self.whole()];
        for class in self.classes().iter().skip(1) {
            let n = self.normal_closure_of(class.min().unwrap());
            if !closures.contains(&n) {
                closures.push(n);
            }
        }
        let pairs = (closures.len() * closures.len()) as u64;
        if pairs.saturating_mul(self.order() as u64 * 8) > budget {
            return self.order();
        }
        let mut m = 1;
        for x in &closures {
            for y in &closures {
                m = m.max(self.stabilization_steps(x, y));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Permutation, ID};
    use super::*;

    fn grp(text: &str) -> Group {
        Group::from_spec(&text.parse().unwrap()).unwrap()
    }

    fn s4() -> Group {
        grp(include_str!("../../catalog/s4.grp"))
    }

    fn catalog_small() -> Vec<Group> {
        [
            include_str!("../../catalog/s3.grp"),
            include_str!("../../catalog/s4.grp"),
            include_str!("../../catalog/a4.grp"),
            include_str!("../../catalog/d4.grp"),
            include_str!("../../catalog/q8.grp"),
            include_str!("../../catalog/sl23.grp"),
            include_str!("../../catalog/s3xs3.grp"),
            include_str!("../../catalog/gl23.grp"),
            include_str!("../../catalog/g72.grp"),
        ]
        .into_iter()
        .map(grp)
        .collect()
    }

    /// `⟨{[a,b] : a ∈ A, b ∈ B}⟩` straight from the definition.
    fn naive_commutator(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
        g.subgroup_generated(&g.set_commutator(a.members(), b.members()))
    }

    /// All normal subgroups, as joins of normal closures of classes.
    fn normal_subgroups(g: &Group) -> Vec<Subgroup> {
        let atoms: Vec<Subgroup> =
            g.classes().iter().map(|c| g.normal_closure_of(c.min().unwrap())).collect();
        let mut found = vec![g.trivial()];
        let mut i = 0;
        while i < found.len() {
            for a in &atoms {
                let j = g.subgroup_generated(&found[i].members().union(a.members()));
                if !found.contains(&j) {
                    found.push(j);
                }
            }
            i += 1;
        }
        found
    }

    fn find(g: &Group, s: &str) -> Elem {
        let p = Permutation::parse_cycles(s, g.label(0).unwrap().degree()).unwrap();
        g.elements().find(|&x| g.label(x) == Some(&p)).unwrap()
    }

    #[test]
    fn s4_series() {
        let g = s4();
        let lcs = g.lower_central_series();
        assert_eq!(lcs.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![24, 12]);
        let upper = g.upper_fitting_series().unwrap();
        assert_eq!(upper.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 4, 12, 24]);
        let lower = g.lower_fitting_series().unwrap();
        assert_eq!(lower.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![24, 12, 4, 1]);
        assert_eq!(g.fitting_length().unwrap(), 3);
        assert_eq!(g.fitting_subgroup().order(), 4);
        assert_eq!(g.nilpotent_residual(&g.whole()).order(), 12);
    }

    #[test]
    fn iterated_commutators_match_series() {
        let g = s4();
        let all = g.all();
        let one = ElementSet::singleton(24, ID);
        assert!(g.iterated_commutator_subgroup(&g.whole(), &[one]).unwrap().is_trivial());
        let a4 = g.iterated_commutator_subgroup(&g.whole(), &[all.clone()]).unwrap();
        assert_eq!(a4.order(), 12);
        let g3 = g.iterated_commutator_subgroup(&g.whole(), &[all.clone(), all.clone()]).unwrap();
        assert_eq!(g3, g.gamma(&g.whole(), 3));
        assert_eq!(g3, g.nilpotent_residual(&g.whole()));
        let not_closed = ElementSet::from_elems(24, [ID, find(&g, "(0 1)")]);
        assert!(g.iterated_commutator_subgroup(&g.whole(), &[not_closed]).is_err());
    }

    #[test]
    fn abelian_and_nilpotent() {
        let c6 = Group::cyclic(6).unwrap();
        assert_eq!(c6.lower_central_series().len(), 2);
        assert_eq!(c6.fitting_length().unwrap(), 1);
        assert_eq!(c6.stabilization_constant(), 1);
        let d4 = grp(include_str!("../../catalog/d4.grp"));
        assert!(d4.lower_central_series().last().unwrap().is_trivial());
        assert_eq!(d4.fitting_subgroup().order(), 8);
        let triv = Group::cyclic(1).unwrap();
        assert_eq!(triv.fitting_length().unwrap(), 0);
    }

    #[test]
    fn fitting_length_two_example() {
        let g = grp(include_str!("../../catalog/g72.grp"));
        assert_eq!(g.order(), 72);
        assert_eq!(g.fitting_length().unwrap(), 2);
        let derived = g.commutator(&g.whole(), &g.whole());
        assert_eq!(g.fitting_length_of(&derived).unwrap(), 2);
    }

    #[test]
    fn quotients() {
        let g = s4();
        let v4 = g.fitting_subgroup();
        let q = g.quotient(&v4).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());
        q.group.verify_axioms(0).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(q.proj[g.mul(x, y)], q.group.mul(q.proj[x], q.proj[y]));
            }
        }
        assert_eq!(q.section[0], ID);
        assert_eq!(g.quotient(&g.whole()).unwrap().group.order(), 1);
        assert_eq!(g.quotient(&g.power_subgroup(2)).unwrap().group.order(), 2);
        let h = g.subgroup_of(&[find(&g, "(0 1)")]);
        assert!(g.quotient(&h).is_err());
    }

    #[test]
    fn fast_commutator_matches_definition() {
        for g in catalog_small() {
            let normals = normal_subgroups(&g);
            for a in &normals {
                for b in &normals {
                    assert_eq!(g.commutator(a, b), naive_commutator(&g, a, b));
                }
            }
        }
    }

    #[test]
    fn set_commutator_identity() {
        // ⟨[X,Y]_Set⟩ = [⟨X⟩,⟨Y⟩] for conjugation-closed X, Y
        for g in catalog_small() {
            let classes = g.classes().to_vec();
            for x in &classes {
                for y in &classes {
                    let lhs = g.subgroup_generated(&g.set_commutator(x, y));
                    let rhs = naive_commutator(&g, &g.subgroup_generated(x), &g.subgroup_generated(y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn fitting_subgroup_oracle() {
        for g in catalog_small() {
            let normals = normal_subgroups(&g);
            let mut union = ElementSet::empty(g.order());
            for n in normals.iter().filter(|n| g.is_nilpotent(n)) {
                union.union_with(n.members());
            }
            let fit = g.fitting_subgroup();
            assert_eq!(fit.members(), &union);
            assert!(g.is_nilpotent(&fit) && g.is_normal(&fit));
        }
    }

    #[test]
    fn fitting_series_properties() {
        for g in catalog_small() {
            let upper = g.upper_fitting_series().unwrap();
            let lower = g.lower_fitting_series().unwrap();
            assert_eq!(upper.len(), lower.len());
            for n in normal_subgroups(&g) {
                let (sub, embed) = g.subgroup_as_group(&n);
                let sub_upper = sub.upper_fitting_series().unwrap();
                for (i, u) in upper.iter().enumerate() {
                    let expect = u.intersection(&g, &n);
                    let got = sub_upper.get(i).unwrap_or_else(|| sub_upper.last().unwrap());
                    assert_eq!(g.embed_subgroup(&embed, got), expect);
                }
                assert_eq!(Group::fitting_length_in(&upper, &n), sub_upper.len() - 1);
            }
        }
    }

    #[test]
    fn s3_fitting() {
        let g = grp(include_str!("../../catalog/s3.grp"));
        assert_eq!(g.fitting_subgroup().order(), 3);
        assert_eq!(g.fitting_length().unwrap(), 2);
    }

    #[test]
    fn non_solvable_is_rejected() {
        let a5 = Group::close_generators(&[
            Permutation::parse_cycles("(0 1 2)", 5).unwrap(),
            Permutation::parse_cycles("(0 1 2 3 4)", 5).unwrap(),
        ])
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_solvable());
        assert!(matches!(a5.upper_fitting_series(), Err(Error::NotSolvable)));
        assert!(matches!(a5.lower_fitting_series(), Err(Error::NotSolvable)));
    }

    #[test]
    fn eta_laws() {
        for g in catalog_small() {
            let upper = g.upper_fitting_series().unwrap();
            for h in normal_subgroups(&g) {
                assert!(g.eta(&h, ID).unwrap().is_trivial());
                let reps: Vec<Elem> = g.classes().iter().map(|c| c.min().unwrap()).collect();
                for &x in &reps {
                    let e = g.eta(&h, x).unwrap();
                    assert!(e.is_subgroup_of(&h) && g.is_normal(&e));
                    assert_eq!(g.eta(&e, x).unwrap(), e);
                    for y in g.elements().step_by(5) {
                        let exy = g.eta(&h, g.mul(x, y)).unwrap();
                        let ey = g.eta(&h, y).unwrap();
                        let prod = g.set_product(e.members(), ey.members());
                        assert!(exy.members().is_subset(&prod));
                        let f = |s: &Subgroup| Group::fitting_length_in(&upper, s);
                        assert!(f(&exy) <= f(&e).max(f(&ey)));
                    }
                }
            }
        }
    }

    #[test]
    fn stabilization_constant_oracle() {
        for g in catalog_small() {
            let m = g.stabilization_constant();
            assert!(m >= 1 && m <= g.order());
            // every pair of single-element normal closures stabilizes by m
            for x in g.elements() {
                let nx = g.normal_closure_of(x);
                for y in g.elements() {
                    let ny = g.normal_closure_of(y);
                    let mut cur = nx.clone();
                    for _ in 0..m {
                        cur = naive_commutator(&g, &cur, &ny);
                    }
                    assert_eq!(naive_commutator(&g, &cur, &ny), cur);
                }
            }
        }
        assert_eq!(s4().stabilization_constant_within(1), 24);
    }
}
