//! Certificates for the classification and non-existence results:
//! replayable infeasibility proofs and checked solution families.

pub mod family;
pub mod proof;
pub mod prover;
pub mod qsqrt;

pub use family::{find_witness, find_witness_for, rational_obstruction, verify_family, EquationCheck, FamilyError, FamilyReport, ResidualMethod, SolutionFamily, Witness, WitnessSearch};
pub use proof::{replay_proof, replay_steps, BranchProof, InfeasibilityProof, ProofStep, ReplayError, ReplayStats, PROOF_FORMAT};
pub use prover::{prove_infeasible, prove_theorem, BudgetError, ProverBudget};
pub use qsqrt::QSqrt;
