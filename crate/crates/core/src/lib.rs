//! Combinatorial tools for hyperbolically embedded subgroups of surface
//! groups: words, presentations, Cayley balls, coned-off graphs, evidence
//! scans, quasimorphisms and bounded cochains, and a symbolic evaluator for
//! the Gambaudo-Ghys transfer over a measured region model.

pub mod cases;
pub mod cayley;
pub mod coned;
pub mod config;
pub mod error;
pub mod fpgroup;
pub mod freesub;
pub mod ggh;
pub mod hypcheck;
pub mod quasi;
pub mod retract;
pub mod words;

pub use error::{Error, Result};
pub use fpgroup::{Budget, EqualityVerdict, Presentation};
pub use words::{Letter, Word};
