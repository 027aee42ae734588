//! Search and verification of `(K, H)` certificates.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, ElementSet, Group, Subgroup};

/// Normal subgroups `K ⊴ H ◁ G` such that `η_g(K) = K` off `H` and the
/// Fitting length drops under `η_h` for `h ∈ H`.
#[derive(Clone, Debug)]
pub struct KHCertificate {
    group: Group,
    k: Subgroup,
    h: Subgroup,
    fit_k: Subgroup,
    m: usize,
    report: CertReport,
}

/// Everything checked about a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertReport {
    pub order: usize,
    /// Fitting length of the ambient group.
    pub fitting_length: usize,
    pub k_order: usize,
    pub h_order: usize,
    pub fitl_k: usize,
    pub upper_in_h: bool,
    /// `|G/H|`, the number of colors.
    pub index: usize,
    pub prop_i: bool,
    pub prop_ii: bool,
    /// Least `M` the compiler may use.
    pub m_min: usize,
    pub m: usize,
}

/// Per-class memo of `⟨g^G⟩`.
struct Closures<'a> {
    g: &'a Group,
    memo: HashMap<usize, Subgroup>,
}

impl<'a> Closures<'a> {
    fn new(g: &'a Group) -> Self {
        Closures { g, memo: HashMap::new() }
    }

    fn of(&mut self, x: Elem) -> &Subgroup {
        let c = self.g.class_index(x);
        let g = self.g;
        self.memo.entry(c).or_insert_with(|| g.normal_closure_of(x))
    }
}

/// `Fit(K)` as a subgroup of `G`.
fn fitting_of(g: &Group, k: &Subgroup) -> Subgroup {
    let (sub, embed) = g.subgroup_as_group(k);
    g.embed_subgroup(&embed, &sub.fitting_subgroup())
}

/// Least `M` such that `[K, M g^G]` reaches `η_g(K)` for every `g`, and
/// `M`-fold commutators in `Fit(K)` vanish. Never below the group's own
/// stabilization constant.
fn minimal_m(g: &Group, k: &Subgroup, fit_k: &Subgroup, closures: &mut Closures) -> usize {
    let mut m = g.stabilization_constant().max(1);
    for class in g.classes() {
        let n = closures.of(class.min().unwrap()).clone();
        m = m.max(g.stabilization_steps(k, &n));
    }
    m.max(g.lower_central_series_of(fit_k).len())
}

/// Follows the constructive proof: start from `η_{g₁}(G)` with `g₁` outside
/// `𝒰_{d−1}G`, descend while some `η_g` shrinks `K` without lowering its
/// Fitting length, then collect `H`. Choices take the least element index.
pub fn find_kh(g: &Group) -> Result<KHCertificate> {
    let upper = g.upper_fitting_series()?;
    let d = upper.len() - 1;
    if d <= 1 {
        return Err(Error::Nilpotent);
    }
    let fitl = |s: &Subgroup| Group::fitting_length_in(&upper, s);
    let mut closures = Closures::new(g);
    let g1 = g.elements().find(|&x| !upper[d - 1].contains(x)).unwrap();
    let mut k = g.eta_unchecked(&g.whole(), closures.of(g1));
    loop {
        let fk = fitl(&k);
        let mut memo: HashMap<usize, Option<Subgroup>> = HashMap::new();
        let mut next = None;
        for x in g.elements() {
            let c = g.class_index(x);
            if !memo.contains_key(&c) {
                let e = g.eta_unchecked(&k, closures.of(x));
                memo.insert(c, (e != k && fitl(&e) == fk).then_some(e));
            }
            if let Some(e) = &memo[&c] {
                next = Some(e.clone());
                break;
            }
        }
        match next {
            Some(e) => k = e,
            None => break,
        }
    }
    let fk = fitl(&k);
    let mut h_set = ElementSet::empty(g.order());
    let mut by_class: HashMap<usize, bool> = HashMap::new();
    for x in g.elements() {
        let c = g.class_index(x);
        let drops = *by_class.entry(c).or_insert_with(|| fitl(&g.eta_unchecked(&k, closures.of(x))) < fk);
        if drops {
            h_set.insert(x);
        }
    }
    let h = g
        .as_subgroup(&h_set)
        .ok_or_else(|| Error::Internal("elements with a Fitting-length drop do not form a subgroup".into()))?;
    let fit_k = fitting_of(g, &k);
    let m = minimal_m(g, &k, &fit_k, &mut closures);
    KHCertificate::new(g.clone(), k, h, m).map_err(|e| match e {
        Error::Input(msg) => Error::Internal(format!("certificate search produced an invalid certificate: {msg}")),
        e => e,
    })
}

impl KHCertificate {
    /// Verifies every property exhaustively, element by element.
    pub fn new(group: Group, k: Subgroup, h: Subgroup, m: usize) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Input(format!("certificate rejected: {msg}")));
        let g = &group;
        if !g.is_normal(&k) || !g.is_normal(&h) {
            return bad("K and H must be normal");
        }
        if !k.is_subgroup_of(&h) || h.order() == g.order() {
            return bad("need K ≤ H < G");
        }
        let upper = g.upper_fitting_series()?;
        let d = upper.len() - 1;
        if d <= 1 {
            return Err(Error::Nilpotent);
        }
        let fitl = |s: &Subgroup| Group::fitting_length_in(&upper, s);
        let fitl_k = fitl(&k);
        if fitl_k != d - 1 {
            return bad("FitL(K) must be FitL(G) - 1");
        }
        let upper_in_h = upper[d - 1].is_subgroup_of(&h);
        let (mut prop_i, mut prop_ii) = (true, true);
        for x in g.elements() {
            let e = g.eta(&k, x)?;
            if h.contains(x) {
                prop_ii &= fitl(&e) < fitl_k;
            } else {
                prop_i &= e == k;
            }
        }
        if !(upper_in_h && prop_i && prop_ii) {
            return bad("properties (I)/(II) or the upper Fitting containment fail");
        }
        let fit_k = fitting_of(g, &k);
        let m_min = minimal_m(g, &k, &fit_k, &mut Closures::new(g));
        if m < m_min {
            return bad(&format!("M = {m} is below the required {m_min}"));
        }
        let report = CertReport {
            order: g.order(),
            fitting_length: d,
            k_order: k.order(),
            h_order: h.order(),
            fitl_k,
            upper_in_h,
            index: g.order() / h.order(),
            prop_i,
            prop_ii,
            m_min,
            m,
        };
        Ok(KHCertificate { group, k, h, fit_k, m, report })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn k(&self) -> &Subgroup {
        &self.k
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    /// `𝒰₁K = Fit(K)`.
    pub fn fit_k(&self) -> &Subgroup {
        &self.fit_k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn report(&self) -> &CertReport {
        &self.report
    }

    /// Same certificate with a larger `M`, e.g. `|G|`.
    pub fn with_m(&self, m: usize) -> Result<Self> {
        if m < self.report.m_min {
            return Err(Error::Input(format!("M = {m} is below the required {}", self.report.m_min)));
        }
        let mut c = self.clone();
        c.m = m;
        c.report.m = m;
        Ok(c)
    }

    /// Key-value text; the group is stored as its multiplication table.
    pub fn to_text(&self, name: &str) -> String {
        let g = &self.group;
        let join = |xs: &mut dyn Iterator<Item = Elem>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = String::from("# (K,H) certificate\n");
        let _ = writeln!(s, "group={name}");
        let _ = writeln!(s, "order={}", g.order());
        let _ = writeln!(s, "m={}", self.m);
        let _ = writeln!(s, "k={}", join(&mut self.k.iter()));
        let _ = writeln!(s, "h={}", join(&mut self.h.iter()));
        let mut table = g.elements().flat_map(|x| g.elements().map(move |y| (x, y)));
        let _ = writeln!(s, "table={}", join(&mut std::iter::from_fn(|| table.next().map(|(x, y)| g.mul(x, y)))));
        s
    }

    /// Parses and re-verifies a certificate. Returns the stored name too.
    pub fn from_text(text: &str) -> Result<(String, Self)> {
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("expected key=value, got {line:?}")))?;
            kv.insert(key.trim(), value.trim());
        }
        let get = |key: &str| kv.get(key).copied().ok_or_else(|| Error::Input(format!("certificate lacks `{key}`")));
        let nums = |key: &str| -> Result<Vec<usize>> {
            get(key)?
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Input(format!("bad number {t:?} in `{key}`"))))
                .collect()
        };
        let order: usize = get("order")?.parse().map_err(|_| Error::Input("bad order".into()))?;
        let m: usize = get("m")?.parse().map_err(|_| Error::Input("bad m".into()))?;
        let table = nums("table")?.into_iter().map(|x| x as u16).collect();
        let group = Group::from_table(order, table)?;
        let as_sub = |key: &str| -> Result<Subgroup> {
            let xs = nums(key)?;
            if xs.iter().any(|&x| x >= order) {
                return Err(Error::Input(format!("`{key}` lists an element outside the group")));
            }
            group
                .as_subgroup(&ElementSet::from_elems(order, xs))
                .ok_or_else(|| Error::Input(format!("`{key}` is not a subgroup")))
        };
        let (k, h) = (as_sub("k")?, as_sub("h")?);
        let name = kv.get("group").copied().unwrap_or("").to_string();
        Ok((name, KHCertificate::new(group, k, h, m)?))
    }
}
