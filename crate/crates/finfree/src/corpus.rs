//! Seeded generators for the random polynomial corpora the identity suites
//! and scenarios quantify over.

use crate::poly::MonicPoly;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;

/// Deterministic integer-rooted polynomial source.
pub struct PolyGen {
    rng: ChaCha8Rng,
}

impl PolyGen {
    pub fn new(seed: u64) -> Self {
        PolyGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn integer_rooted(
        &mut self,
        degrees: RangeInclusive<usize>,
        roots: RangeInclusive<i64>,
    ) -> MonicPoly {
        let d = self.rng.gen_range(degrees);
        self.integer_rooted_of_degree(d, roots)
    }

    pub fn integer_rooted_of_degree(
        &mut self,
        d: usize,
        roots: RangeInclusive<i64>,
    ) -> MonicPoly {
        let rs: Vec<i64> = (0..d).map(|_| self.rng.gen_range(roots.clone())).collect();
        MonicPoly::from_integer_roots(&rs)
    }

    pub fn roots(&mut self, d: usize, range: RangeInclusive<i64>) -> Vec<i64> {
        (0..d).map(|_| self.rng.gen_range(range.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let mut a = PolyGen::new(42);
        let mut b = PolyGen::new(42);
        for _ in 0..5 {
            assert_eq!(a.integer_rooted(2..=9, -5..=5), b.integer_rooted(2..=9, -5..=5));
        }
    }
}
