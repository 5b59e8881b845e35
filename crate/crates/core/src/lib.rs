//! Leading Z-eigenpairs of symmetric tensors by a nonconvex ADMM on the
//! rank-1 matricization, with a global-optimality certificate.

pub mod admm;
pub mod error;
pub mod gen;
pub mod rank1;
pub mod spectra;
pub mod tensor;

pub use admm::{
    certify, eig_residual, solve, solve_simplified, write_trace_csv, Certificate, Certification,
    SolveStatus, SolverConfig, SolverReport, StopRule, TraceRow,
};
pub use error::{SolveError, SpectralError, TensorError};
pub use rank1::{extract, extract_from_factor, Factor, Rank1};
pub use spectra::{
    EigenPair, LinearOperator, Matrix, SingularTriple, SpectralGap, SpectralOptions,
};
pub use tensor::{DenseTensor, MatricizedView, OrbitTable, PermIndex, TnsrLayout};
