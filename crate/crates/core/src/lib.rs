pub mod error;
pub mod examples;
pub mod exactlinalg;
pub mod gray;
pub mod twocat;
pub mod deformations;
pub mod pfcomplex;
pub mod defcomplex;
pub mod schema;
pub mod cli;
