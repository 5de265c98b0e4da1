pub mod cat;
pub mod jch;
pub mod qaoa;
pub mod qft;
pub mod shor;
pub mod transfer;
pub mod vqe;
