//! G-programs: products of instructions `⟨B_i, a, b⟩` that contribute `a`
//! when input bit `i` is 0 and `b` when it is 1.

mod chain;

use std::io::{BufRead, Write};

use crate::error::{input, Error, Result};
use crate::group::{Elem, Group, ID};

pub use chain::{build_and_program, derive_chain, ChainSpec, WitnessTree};

/// Largest input count accepted by [`progsat_bruteforce`] by default.
pub const DEFAULT_PROGSAT_INPUTS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instr {
    pub bit: usize,
    pub a: Elem,
    pub b: Elem,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GProgram {
    instrs: Vec<Instr>,
    inputs: usize,
}

impl GProgram {
    pub fn new(instrs: Vec<Instr>, inputs: usize) -> Result<Self> {
        if let Some(i) = instrs.iter().find(|i| i.bit >= inputs) {
            return input(format!("instruction reads bit {} of {inputs}", i.bit));
        }
        Ok(GProgram { instrs, inputs })
    }

    pub fn empty(inputs: usize) -> Self {
        GProgram {
            instrs: Vec::new(),
            inputs,
        }
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// `σ(P) = c₁c₂⋯c_ℓ` with `c_j = a_j` or `b_j` by the bit read.
    pub fn eval(&self, g: &Group, bits: &[bool]) -> Result<Elem> {
        if bits.len() != self.inputs {
            return input(format!("{} bits given for {} inputs", bits.len(), self.inputs));
        }
        Ok(self.eval_unchecked(g, bits))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, g: &Group, bits: &[bool]) -> Elem {
        self.instrs
            .iter()
            .fold(ID, |acc, i| g.mul(acc, if bits[i.bit] { i.b } else { i.a }))
    }

    /// Reversed program with inverted constants; `σ(P⁻¹) = σ(P)⁻¹`.
    pub fn invert(&self, g: &Group) -> GProgram {
        GProgram {
            instrs: self
                .instrs
                .iter()
                .rev()
                .map(|i| Instr {
                    bit: i.bit,
                    a: g.inv(i.a),
                    b: g.inv(i.b),
                })
                .collect(),
            inputs: self.inputs,
        }
    }

    pub fn concat(&self, other: &GProgram) -> GProgram {
        let mut instrs = self.instrs.clone();
        instrs.extend_from_slice(&other.instrs);
        GProgram {
            instrs,
            inputs: self.inputs.max(other.inputs),
        }
    }

    /// Appends a constant `c` as an instruction on bit 0.
    pub fn then_const(&self, c: Elem) -> Result<GProgram> {
        if self.inputs == 0 {
            return input("constant instruction needs at least one input bit");
        }
        let mut p = self.clone();
        p.instrs.push(Instr { bit: 0, a: c, b: c });
        Ok(p)
    }
}

/// Left-normed `[P₁,…,P_k]` over a shared input space.
pub fn commutator_program(g: &Group, ps: &[GProgram]) -> GProgram {
    let Some((first, rest)) = ps.split_first() else {
        return GProgram::default();
    };
    rest.iter().fold(first.clone(), |acc, p| {
        acc.invert(g).concat(&p.invert(g)).concat(&acc).concat(p)
    })
}

/// Bit vector number `k` in the enumeration order: bit 0 varies slowest.
pub fn bits_of(k: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect()
}

/// Searches all `2^n` inputs for one with `σ(P) = 1`.
pub fn progsat_bruteforce(g: &Group, p: &GProgram, max_inputs: usize) -> Result<Option<Vec<bool>>> {
    let n = p.inputs();
    if n > max_inputs || n >= 64 {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << n.min(127),
            budget: 1u128 << max_inputs.min(127),
        });
    }
    for k in 0..1u64 << n {
        let bits = bits_of(k, n);
        if p.eval_unchecked(g, &bits) == ID {
            return Ok(Some(bits));
        }
    }
    Ok(None)
}

pub fn write_program(out: &mut dyn Write, group: &str, p: &GProgram) -> std::io::Result<()> {
    writeln!(out, "group {group} inputs {}", p.inputs())?;
    for i in p.instrs() {
        writeln!(out, "b{} {} {}", i.bit, i.a, i.b)?;
    }
    Ok(())
}

/// Parses the program format; returns the group name and the program.
pub fn read_program(reader: impl BufRead) -> Result<(String, GProgram)> {
    let mut name = None;
    let mut inputs = 0;
    let mut instrs = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if name.is_none() {
            match parts.as_slice() {
                ["group", g, "inputs", n] => {
                    name = Some(g.to_string());
                    inputs = n.parse().map_err(|_| Error::Input(format!("bad input count {n:?}")))?;
                    continue;
                }
                _ => return input(format!("expected `group <name> inputs <n>`, got {line:?}")),
            }
        }
        let bad = || Error::Input(format!("bad instruction {line:?}"));
        let [bit, a, b] = parts.as_slice() else {
            return Err(bad());
        };
        let bit = bit.strip_prefix('b').and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let a = a.parse().map_err(|_| bad())?;
        let b = b.parse().map_err(|_| bad())?;
        instrs.push(Instr { bit, a, b });
    }
    let name = name.ok_or_else(|| Error::Input("empty program file".into()))?;
    Ok((name, GProgram::new(instrs, inputs)?))
}

impl GProgram {
    pub fn check_group(&self, g: &Group) -> Result<()> {
        match self.instrs.iter().find(|i| i.a >= g.order() || i.b >= g.order()) {
            Some(i) => input(format!("instruction constant outside group: {i:?}")),
            None => Ok(()),
        }
    }
}
