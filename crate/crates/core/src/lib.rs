pub mod arith;
pub mod diagram;
pub mod error;
pub mod qform;
pub mod brauer;
pub mod titsindex;
pub mod motive;
pub mod equiv;
pub mod wire;
