//! Seeded random corpora and the shipped example bodies.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spaceform_core::convexbody::{random_body, ConvexBody, RandomBodyParams};
use spaceform_core::spaceform::Curvature;

use crate::io::parse_body;
use crate::LabError;

/// Seed of item `index` in the named stream under `master`.
///
/// Each name selects its own ChaCha stream, so adding a stream or changing
/// how many items another stream draws leaves existing seeds untouched.
pub fn child_seed(master: u64, name: &str, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(fnv1a(name));
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// `count` random convex bodies for one geometry.
pub fn random_corpus(delta: Curvature, count: usize, master: u64) -> Result<Vec<ConvexBody>, LabError> {
    let name = format!("corpus/{}", delta.delta());
    (0..count as u64)
        .map(|i| random_body(delta, child_seed(master, &name, i), RandomBodyParams::default()).map_err(LabError::Core))
        .collect()
}

const SHIPPED: &[(&str, &str)] = &[
    ("square", include_str!("../corpus/square.json")),
    ("rectangle_2x1", include_str!("../corpus/rectangle_2x1.json")),
    ("right_triangle", include_str!("../corpus/right_triangle.json")),
    ("hexagon", include_str!("../corpus/hexagon.json")),
    ("hyperbolic_quad", include_str!("../corpus/hyperbolic_quad.json")),
    ("hyperbolic_pentagon", include_str!("../corpus/hyperbolic_pentagon.json")),
    ("spherical_triangle", include_str!("../corpus/spherical_triangle.json")),
    ("spherical_quad", include_str!("../corpus/spherical_quad.json")),
];

/// The example bodies bundled with the crate, by name.
pub fn shipped_corpus() -> Result<Vec<(String, ConvexBody)>, LabError> {
    SHIPPED.iter().map(|(name, text)| Ok((name.to_string(), parse_body(text, &format!("{name}.json"))?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent() {
        let a: Vec<u64> = (0..4).map(|i| child_seed(7, "a", i)).collect();
        let b: Vec<u64> = (0..4).map(|i| child_seed(7, "b", i)).collect();
        assert_ne!(a, b);
        assert_eq!(a[2], child_seed(7, "a", 2));
        assert_ne!(child_seed(7, "a", 0), child_seed(8, "a", 0));
        let mut seen = a.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn shipped_bodies_parse() {
        let c = shipped_corpus().unwrap();
        assert_eq!(c.len(), SHIPPED.len());
        for d in [-1, 0, 1] {
            assert!(c.iter().any(|(_, b)| b.delta.delta() == d));
        }
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(Curvature::HYPERBOLIC, 3, 1).unwrap();
        let b = random_corpus(Curvature::HYPERBOLIC, 3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }
}
