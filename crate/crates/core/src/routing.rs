//! Constructive disjoint-path routing on 2-step graphs and their designs.

pub mod one_to_many;
pub mod one_to_one;
pub mod search;
pub mod td_paths;

pub use one_to_many::one_to_many;
pub use one_to_one::{h0_disjoint_paths, one_to_one, OneToOne};
pub use td_paths::{block_pair_paths, block_to_targets, fan_in};
