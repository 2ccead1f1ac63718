//! Library surface of the command-line front end, exposed so integration
//! tests can drive ingestion, model files and the stand-in generator
//! directly.

pub mod commands;
pub mod ingest;
pub mod model_file;
pub mod standin;
