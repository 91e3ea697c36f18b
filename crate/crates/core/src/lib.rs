pub mod corpus;
pub mod error;
pub mod features;
pub mod graph;
pub mod predict;
pub mod pump;
pub mod seed;
pub mod signature;
pub mod textclf;
