//! Partitions, symmetric group characters and shifted symmetric functions.

pub mod characters;
mod partition;
pub mod shifted;

pub use characters::{central_character, character_value, class_size, Padding};
pub use partition::{balanced_partitions_of, partitions_of, partitions_up_to, Partition};
pub use shifted::{bracket_weight, is_balanced, p_k, pbar_k, WeightVariant};
