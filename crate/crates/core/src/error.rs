use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error("taxon universe is empty")]
    EmptyUniverse,
    #[error("empty taxon label")]
    EmptyLabel,
    #[error("duplicate taxon label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),
    #[error("cluster is empty")]
    EmptyCluster,
    #[error("cluster {0} contains every taxon; clusters must be proper subsets")]
    FullCluster(String),
    #[error("taxon `{0}` is not contained in any cluster")]
    UncoveredTaxon(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("clusters {0} and {1} are incompatible")]
    Incompatible(String, String),
    #[error("input spans {0} incompatibility components, expected one")]
    MultipleComponents(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("network has no nodes")]
    Empty,
    #[error("edge refers to missing node {0}")]
    MissingNode(usize),
    #[error("network contains a directed cycle")]
    Cycle,
    #[error("expected exactly one root, found {0}")]
    RootCount(usize),
    #[error("node {0} has indegree 1 and outdegree 1")]
    DegreeTwoNode(usize),
    #[error("leaf {0} has no label")]
    UnlabeledLeaf(usize),
    #[error("internal node {0} carries a taxon label")]
    LabeledInternal(usize),
    #[error("taxon `{0}` labels more than one leaf")]
    DuplicateLabel(String),
    #[error("taxon `{0}` is missing from the network")]
    MissingTaxon(String),
    #[error("taxon `{0}` is not part of the universe")]
    UnknownTaxon(String),
    #[error("parallel edges between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("parameter {requested} exceeds the configured limit {limit}")]
    LimitExceeded { requested: usize, limit: usize },
    #[error("parameter must be at least 1")]
    ZeroParameter,
    #[error("generator cache: {0}")]
    Cache(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("branch budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("side {0} already holds its single taxon")]
    ShortSideOccupied(usize),
    #[error("taxon {0} is already placed")]
    AlreadyPlaced(usize),
    #[error("side {0} is empty or finished")]
    SideClosed(usize),
    #[error("parameter must be at least 1")]
    ZeroParameter,
    #[error("cluster set is not separating")]
    NotSeparating,
    #[error("cluster set is not ST-collapsed")]
    NotStCollapsed,
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} taxa exceed the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("merged network misses {0} input clusters")]
    MergeFailed(usize),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RandomError {
    #[error("need at least one taxon")]
    NoTaxa,
    #[error("{0} taxa exceed the supported maximum of {1}")]
    TooManyTaxa(usize, usize),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}
