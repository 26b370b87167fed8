//! Small deterministic random number generator.
//!
//! Everything seeded in this crate goes through [`SplitMix64`] so that output
//! bytes depend only on the seed, never on platform, process, or thread
//! schedule. The generator is the splitmix64 sequence: the state advances by a
//! fixed odd constant and each output is a finalizer over the new state.

/// 64-bit finalizer used both as the splitmix64 output function and as the
/// documented `mix(seed, stream)` for deriving independent substreams.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x;
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    z
}

/// Derive the seed for substream `stream` of a generator family.
///
/// Used per tree in forest training and per author in corpus synthesis:
/// `mix(seed, i)` keeps substreams independent while the whole family stays a
/// pure function of the root seed.
#[inline]
pub fn mix(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ stream)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform f64 in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection, so
    /// the result is exactly uniform. Panics if n is 0.
    pub fn gen_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "gen_below(0)");
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (n as u128);
            let low = m as u64;
            if low < n {
                let threshold = n.wrapping_neg() % n;
                if low < threshold {
                    continue;
                }
            }
            return (m >> 64) as u64;
        }
    }

    #[inline]
    pub fn gen_index(&mut self, n: usize) -> usize {
        self.gen_below(n as u64) as usize
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.gen_index(i + 1);
            items.swap(i, j);
        }
    }

    /// Bernoulli draw with probability p (clamped to [0, 1]).
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Normal deviate via Box-Muller; one uniform pair per call.
    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        let u1 = (self.next_f64()).max(1e-12);
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        mean + std * radius * (std::f64::consts::TAU * u2).cos()
    }
}
