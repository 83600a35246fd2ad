//! Small deterministic generator (splitmix64) so seeded runs are
//! reproducible across platforms without pulling in an RNG crate.

use toricode_core::{Point, UnimodularMap};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Random unimodular map: a product of shears, swaps and sign flips with
    /// a bounded translation. Entries stay small for `steps` around 2..6.
    pub fn unimodular(&mut self, steps: usize, max_shear: i64, max_shift: i64) -> UnimodularMap {
        let mut m = UnimodularMap::identity();
        for _ in 0..steps {
            let next = match self.below(4) {
                0 => UnimodularMap::linear(1, self.range_i64(-max_shear, max_shear), 0, 1),
                1 => UnimodularMap::linear(1, 0, self.range_i64(-max_shear, max_shear), 1),
                2 => UnimodularMap::linear(0, 1, 1, 0),
                _ => UnimodularMap::linear(-1, 0, 0, 1),
            }
            .expect("elementary maps are unimodular");
            m = next.compose(&m);
        }
        let t = Point::new(
            self.range_i64(-max_shift, max_shift),
            self.range_i64(-max_shift, max_shift),
        );
        UnimodularMap::translation(t).compose(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn maps_are_unimodular() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..200 {
            let m = rng.unimodular(4, 5, 10);
            assert!(m.det() == 1 || m.det() == -1);
        }
    }
}
