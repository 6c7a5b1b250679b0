//! Exact rational arithmetic, dense matrices, echelonized subspaces,
//! rational eigenvalue extraction and the skew form tr(f[X, Y]).

pub mod eigen;
pub mod matrix;
pub mod rational;
pub mod rref;
pub mod skew;
pub mod subspace;

pub use eigen::{eigenframe, rational_eigenvalues, Eigen, EigenFrame};
pub use matrix::QMatrix;
pub use rational::{dth_root, fmt_q, is_dth_power, parse_q, power_class, q, qf, Rational};
pub use rref::{rref_solve, Rref, Solution};
pub use skew::{skew_tools, SkewForm, SkewOutput, SkewTask};
pub use subspace::{subspace_algebra, Subspace, SubspaceOp, SubspaceResult};
