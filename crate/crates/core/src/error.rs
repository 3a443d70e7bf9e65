//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// File could not be opened or read.
    #[error("unreadable file {path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A record in a mesh or dataset file did not parse.
    #[error("malformed record in {path} (line/offset {location}): {detail}")]
    MalformedRecord {
        path: String,
        location: String,
        detail: String,
    },

    /// A face referenced a vertex index outside the vertex table.
    #[error("vertex index {index} out of range ({count} vertices) in {path}")]
    IndexOutOfRange {
        path: String,
        index: usize,
        count: usize,
    },

    /// Mesh has no triangles where at least one is required.
    #[error("mesh has no triangles")]
    EmptyMesh,

    /// Argument outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Rejection sampling could not find a valid pose within the budget.
    #[error("pose rejection budget exceeded after {attempts} attempts (degenerate free space?)")]
    RejectionBudget { attempts: usize },

    /// Floorplan specification invalid.
    #[error("invalid floorplan: {0}")]
    InvalidFloorplan(String),

    /// Generic I/O failure with context.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Serialization/deserialization failure.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    /// Tensor/layer shape mismatch.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A gradient or loss became non-finite.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// Checkpoint file invalid or incompatible.
    #[error("invalid checkpoint {path}: {detail}")]
    InvalidCheckpoint { path: String, detail: String },

    /// Mesh does not match the one recorded in a checkpoint.
    #[error("mesh aabb does not match checkpoint aabb: {0}")]
    MeshMismatch(String),

    /// Input cloud empty where points are required.
    #[error("empty point cloud")]
    EmptyCloud,

    /// Descriptor dimensions disagree.
    #[error("descriptor dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Config validation failures (all collected).
    #[error("invalid config: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable code for CLI error reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Unreadable { .. } => "unreadable",
            Error::MalformedRecord { .. } => "malformed_record",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::EmptyMesh => "empty_mesh",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::RejectionBudget { .. } => "rejection_budget",
            Error::InvalidFloorplan(_) => "invalid_floorplan",
            Error::Io { .. } => "io",
            Error::Serde(_) => "serde",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidCheckpoint { .. } => "invalid_checkpoint",
            Error::MeshMismatch(_) => "mesh_mismatch",
            Error::EmptyCloud => "empty_cloud",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}
