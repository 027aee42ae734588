//! Coloring-to-equation reduction and the lifting lemmas.

mod cert;
mod compile;
mod decide;
mod graph;
mod lift;
mod main2;

pub use cert::{find_kh, CertReport, KHCertificate};
pub use compile::{coset_reps, compile_coloring, iterated_k, CompiledInstance, CompiledSummary, Gadget};
pub use decide::{decide_compiled, DecideOptions, Decision, EvalMode, SatWitness, DEFAULT_STREAM_LIMIT};
pub use graph::GraphInstance;
pub use lift::{abelian_closure_definer, lift_eqnid_via_definer, lift_eqnsat_quotient, lift_eqnsat_via_inducer};
pub use main2::{preprocess_theorem_main2, Main2, Pipeline, Step};
