//! Exact rational geometry: scalars, points, segments, rays and the
//! predicates built on them. No floating point enters any decision.

mod predicates;
mod primitives;
mod rational;

pub use predicates::{
    bit_length, line_intersect, line_point, orientation, point_on_segment, ray_intersect, ray_segment_intersect,
    segment_contains, segment_intersect, Intersection,
};
pub use primitives::{parse_points, ExactPoint, Ray, Segment};
pub use rational::Rational;
