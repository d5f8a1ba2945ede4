//! Instance generators: the buggy-encoder family, the C17 circuit, gate netlists
//! and small random systems.

mod c17;
mod encoder;
pub mod netlist;
mod random;

use thiserror::Error;

pub use c17::{gen_c17, C17_NETLIST, C17_OBSERVATIONS};
pub use encoder::{gen_buggy_encoder, EncoderParams};
pub use netlist::{encode_netlist, GateKind, Netlist, NetlistError};
pub use random::{gen_random_instance, RandomParams, MAX_RANDOM_COMPONENTS, MAX_RANDOM_OBSERVATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchgenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("no acceptable random instance after {attempts} attempts")]
    GaveUp { attempts: usize },
}
