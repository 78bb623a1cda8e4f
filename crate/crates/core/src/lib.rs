pub mod distributions;
pub mod error;
pub mod io;
pub mod linalg;
pub mod meb;
pub mod uncertainty;
pub mod random;
pub mod witness;
pub mod sweep;
pub mod commands;
