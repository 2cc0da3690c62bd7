use serde::{Deserialize, Serialize};

/// Resource limits shared by the emptiness engine and the symbolic pipeline.
///
/// Every field has a default; a limits file may set any subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Word length explored by the breadth-first witness search.
    pub search_depth: usize,
    /// Configurations kept by the breadth-first witness search.
    pub search_configurations: usize,
    /// Transitions allowed in the automaton handed to support enumeration.
    pub max_transitions: usize,
    /// Nodes of the support enumeration tree.
    pub max_support_nodes: usize,
    /// Branch-and-bound nodes per integer program.
    pub max_branch_nodes: usize,
    /// Largest ansatz bound N′ tried by the Hadamard construction.
    pub max_ansatz: usize,
    /// Largest number of unknowns in one ansatz.
    pub max_ansatz_columns: usize,
    /// Largest number of linear equations in one ansatz.
    pub max_ansatz_rows: usize,
    /// Largest term-count product `|a|·|b|` formed while building an ansatz.
    pub max_ansatz_products: usize,
    /// Largest kernel support solved exactly over Q[x] in the ansatz.
    pub max_exact_support: usize,
    /// Bit size below which bounds are reported as exact integers.
    pub exact_bound_bits: u64,
    /// Coefficients checked when self-verifying an ODE or recurrence.
    pub verify_terms: usize,
    /// Seed for the random evaluation points of modular rank computations.
    /// Results do not depend on it; only the work done can.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_depth: 10,
            search_configurations: 500_000,
            max_transitions: 64,
            max_support_nodes: 200_000,
            max_branch_nodes: 20_000,
            max_ansatz: 24,
            max_ansatz_columns: 400,
            max_ansatz_rows: 4_000,
            max_ansatz_products: 400_000,
            max_exact_support: 40,
            exact_bound_bits: 1 << 20,
            verify_terms: 40,
            seed: 0x1ac5_41f7,
        }
    }
}
