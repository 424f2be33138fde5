pub mod error;
pub mod kernel;
pub mod ode;
pub mod hillde;
pub mod zones;
pub mod floquet;
pub mod rtbp;
pub mod cli;
