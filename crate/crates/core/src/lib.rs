//! Construction of rooted phylogenetic networks that represent a given set
//! of clusters in the softwired sense, minimizing either the level or the
//! reticulation number.

pub mod assembly;
pub mod clusters;
pub mod error;
pub mod generators;
pub mod network;
pub mod oracle;
pub mod random;
pub mod solver;
pub mod taxa;

pub use clusters::{compatible, ClusterSet, Expansion, IncompatibilityGraph, StPartition};
pub use error::{AssemblyError, ClusterError, GeneratorError, NetworkError, OracleError, RandomError, SolverError};
pub use network::{tree_from_hierarchy, Format, Network, NetworkBuilder};
pub use taxa::{Taxon, TaxonSet, TaxonUniverse};
