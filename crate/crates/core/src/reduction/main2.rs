//! Preprocessing that turns a group of Fitting length at least 3 into one
//! carrying a certificate with at least 3 colors.

use serde::Serialize;

use super::cert::{find_kh, KHCertificate};
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// Pass to the subgroup generated by all `exponent`-th powers.
    PowerSubgroup { exponent: u64, order: usize },
    /// Pass to the quotient by the named series term.
    Quotient { by: String, order: usize },
}

/// The groups visited on the way to a certified group.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub steps: Vec<Step>,
    pub cert: KHCertificate,
}

/// Outcome for an applicable group: one pipeline for each decision problem.
#[derive(Clone, Debug)]
pub struct Main2 {
    pub fitting_length: usize,
    /// `|G/𝒰_{d−1}G|`, whose odd part decides the route.
    pub top_index: usize,
    pub sat: Pipeline,
    pub id: Pipeline,
}

fn two_part(n: usize) -> u64 {
    1u64 << n.trailing_zeros()
}

fn sub_group(g: &Group, s: &Subgroup) -> Group {
    g.subgroup_as_group(s).0
}

/// The Fitting length 3 case: pass to the `2^ν`-th power subgroup, whose
/// top Fitting quotient is odd, and certify it.
fn fitl3_case(g: &Group, mut steps: Vec<Step>) -> Result<Pipeline> {
    let upper = g.upper_fitting_series()?;
    if upper.len() != 4 {
        return Err(Error::Internal(format!("expected Fitting length 3, got {}", upper.len() - 1)));
    }
    let q = g.order() / upper[2].order();
    if q.is_power_of_two() {
        return Err(Error::Inapplicable(format!(
            "Fitting length 3 with |G/U2 G| = {q} a power of two (the open 2-group case)"
        )));
    }
    let e = two_part(q);
    let gt = if e > 1 {
        let s = g.power_subgroup(e);
        steps.push(Step::PowerSubgroup { exponent: e, order: s.order() });
        sub_group(g, &s)
    } else {
        g.clone()
    };
    let up = gt.upper_fitting_series()?;
    if up.len() != 4 || (gt.order() / up[2].order()) % 2 == 0 {
        return Err(Error::Internal("power subgroup lost Fitting length 3 or has an even top quotient".into()));
    }
    let cert = find_kh(&gt)?;
    if cert.report().index < 3 {
        return Err(Error::Internal(format!("certificate has only {} colors", cert.report().index)));
    }
    Ok(Pipeline { steps, cert })
}

pub fn preprocess_theorem_main2(g: &Group) -> Result<Main2> {
    let upper = g.upper_fitting_series()?;
    let d = upper.len() - 1;
    if d < 3 {
        return Err(Error::Inapplicable(format!("Fitting length {d} is below 3")));
    }
    let top_index = g.order() / upper[d - 1].order();
    if d == 3 {
        let p = fitl3_case(g, Vec::new())?;
        return Ok(Main2 { fitting_length: d, top_index, sat: p.clone(), id: p });
    }
    let mut steps = Vec::new();
    let base = if top_index.is_power_of_two() {
        let e = top_index as u64;
        let s = g.power_subgroup(e);
        steps.push(Step::PowerSubgroup { exponent: e, order: s.order() });
        sub_group(g, &s)
    } else {
        g.clone()
    };
    let bu = base.upper_fitting_series()?;
    let bd = bu.len() - 1;
    let lower = base.lower_fitting_series()?;
    let l3 = lower.get(3).cloned().unwrap_or_else(|| base.trivial());
    let track = |n: &Subgroup, label: String| -> Result<Pipeline> {
        let q = base.quotient(n)?;
        let mut s = steps.clone();
        if !n.is_trivial() {
            s.push(Step::Quotient { by: label, order: q.group.order() });
        }
        fitl3_case(&q.group, s).map_err(|e| match e {
            Error::Inapplicable(msg) => Error::Internal(format!("reduced group is unexpectedly inapplicable: {msg}")),
            e => e,
        })
    };
    let sat = track(&l3, "L3".into())?;
    let id = track(&bu[bd - 3], format!("U{}", bd - 3))?;
    Ok(Main2 { fitting_length: d, top_index, sat, id })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(name: &str) -> Group {
        let text = std::fs::read_to_string(format!("{}/catalog/{name}.grp", env!("CARGO_MANIFEST_DIR"))).unwrap();
        Group::from_spec(&text.parse().unwrap()).unwrap()
    }

    #[test]
    fn applicable_groups() {
        for (name, d) in [("g168", 3), ("g216", 3), ("g432", 4)] {
            let out = preprocess_theorem_main2(&load(name)).unwrap();
            assert_eq!(out.fitting_length, d);
            for p in [&out.sat, &out.id] {
                let r = p.cert.report();
                assert!(r.index >= 3 && r.index % 2 == 1, "{name}: {r:?}");
                assert_eq!((r.fitting_length, r.fitl_k), (3, 2));
            }
        }
    }

    #[test]
    fn inapplicable_groups() {
        for name in ["s4", "gl23"] {
            match preprocess_theorem_main2(&load(name)) {
                Err(Error::Inapplicable(msg)) => assert!(msg.contains("2-group"), "{msg}"),
                other => panic!("{name}: {other:?}"),
            }
        }
        for name in ["a4", "d4", "g72"] {
            assert!(matches!(preprocess_theorem_main2(&load(name)), Err(Error::Inapplicable(_))));
        }
        assert!(matches!(preprocess_theorem_main2(&Group::cyclic(7).unwrap()), Err(Error::Inapplicable(_))));
    }
}
