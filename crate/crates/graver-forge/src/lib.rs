//! Exact toolkit for depth parameters of rational matrices and their column
//! matroids, together with row-operation preconditioners that produce
//! equivalent matrices with certified small primal/dual/incidence tree-depth.
//!
//! All arithmetic is exact: rationals with arbitrary-precision integers over
//! the rationals, machine-word residues over prime fields.

pub mod matrix;
pub mod graph;
pub mod field;
pub mod matroid;
pub mod depth;
pub mod graver;
pub mod precondition;
pub mod forge;
pub mod report;
pub mod validate;
pub mod cli;

pub use matrix::{IntVector, RatMatrix};
pub use graph::{Graph, RootedForest};
pub use matroid::{FieldSpec, FieldVector, LinearMatroid};
pub use depth::{
    cdd_depth, contraction_depth, csdd_depth, cstar_depth, deletion_depth, principal_cstar_tree,
    resolve_generators, verify_cstar_tree, verify_deletion_tree, verify_tree, DecompositionTree,
    DepthReport, Exactness, SubspaceConfig,
};
pub use graver::{conformal_leq, graver_basis, matrix_circuits, CircuitSet, GraverError, GraverSet};
pub use precondition::{
    alg_td_d, alg_td_p, dual_sparsify_circuit, dual_sparsify_from_tree, incidence_sparsify,
    kappa0_of, primal_sparsify, Kappa0, PreconditionError, PreconditionOutcome,
};
pub use forge::{
    balanced_independent_set, bipartite_completion, gn_family, hardness_instance,
    matroid_from_graph, positive_rank_components, quotient_graph, ForgeError, GnInstance,
    HardnessInstance, HardnessVariant, LabeledGraphMatroid,
};
pub use report::{analyze_matrix, render_text, AnalysisConfig, AnalysisReport};
pub use validate::{run_suite, SuiteConfig, SuiteOutcome, SUITES};

