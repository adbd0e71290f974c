//! Acyclic directed mixed graphs (ADMGs): districts, m-separation, heads and
//! tails, the recursive head partition, factorization of ancestral margins,
//! and the Möbius parametrization of binary distributions obeying the global
//! Markov property.
//!
//! Vertices are ids `0..n` (at most 64) and vertex sets are bitmasks, see
//! [`VertexSet`]. Graphs are immutable once built.
//!
//! ```
//! use admg::{fixtures, VertexSet};
//!
//! let g = fixtures::chains();
//! let f = g.factorize(g.vertices()).unwrap();
//! assert_eq!(f.render(&g), "p(x1) p(x2) p(x3,x4|x1,x2)");
//! assert_eq!(admg::param_dimension(&g).unwrap(), 10);
//! ```

pub mod binary;
pub mod cli;
pub mod district;
pub mod error;
pub mod factorization;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod head;
pub mod msep;
pub mod oracle;
pub mod partition;
pub mod table;
pub mod vertex_set;

pub use binary::{
    joint_from_params, moebius_expansion, param_dimension, params_from_joint, params_from_joint_lenient,
    validate_params, BinaryParametrization, MoebiusEngine, MoebiusFactor, MoebiusTerm, ParamBlock, ValidityReport,
};
pub use district::DistrictPartition;
pub use error::{DegenerateEntry, Error, Result};
pub use factorization::{
    check_factorization, check_ordered_local_markov, find_factorization_violation, Factorization,
    FactorizationViolation, Term, DEFAULT_TOL,
};
pub use format::{parse_admg, parse_json, to_admg_string, to_json_string, GraphJson};
pub use graph::{Admg, Edge, PairState, ENUMERATION_BOUND};
pub use head::HeadTail;
pub use msep::{is_collider, is_m_connecting, ColliderStatus, Path};
pub use partition::{consistent_order, Block, Decomposition};
pub use table::{JointTable, Marginals};
pub use vertex_set::{VertexSet, MAX_VERTICES};
