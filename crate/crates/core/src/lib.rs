//! Prefix-authenticated logs over Merkle DAGs.

pub mod bench;
pub mod cli;
pub mod hash;
pub mod hashcore;
pub mod oracle;
pub mod pas;
pub mod schemes;
pub mod vertex;
