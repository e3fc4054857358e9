//! Explicit embeddings into sequence spaces, producing sparse vectors with
//! symbolic coordinates, plus the compression-exponent composition algebra.

mod combine;
mod compose;
mod cube;
mod cycle;
mod gaussian;
mod lift;
mod line;
mod plane;
mod tree;

pub use combine::{combine_wreath_embedding, identity_line_embedding, SiteEmbedding};
pub use compose::{
    compression_composition, compression_composition_rat, iterated_line_alpha, parse_rational,
    validate_params, Rat,
};
pub use cube::{cube_to_zwrz, zwrz};
pub use cycle::{lamplighter_coords, CycleEmbedding};
pub use gaussian::{gaussian_abs_moment, gaussian_lift_check, GaussianLiftReport};
pub use lift::{lift_bernoulli, BernoulliLiftReport};
pub use line::embed_line_l1;
pub use plane::embed_z2;
pub use tree::{reduce_concat, tree_distance, tree_embedding, tree_translate};
