use serde::{Deserialize, Serialize};

/// Deterministic pseudo-random stream.
///
/// The generator is SplitMix64 (Steele, Lea & Flood, OOPSLA 2014): a
/// counter-based mix of a 64-bit state advanced by the golden-ratio
/// increment. Identical seeds produce identical streams on every platform.
/// Parallel work derives independent child states by XOR-ing a stream index
/// into the parent seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngState {
    seed: u64,
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self { seed, state: seed }
    }

    /// Seed this state was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child state for an independent stream: seed XOR stream index.
    pub fn derive(&self, stream: u64) -> Self {
        Self::new(self.seed ^ stream)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform index in `[0, n)` by widening multiplication.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_index needs n > 0");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal draw (Box-Muller, cosine branch).
    pub fn next_normal(&mut self) -> f64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740993.0); // (0, 1]
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// `k` distinct indices from `[0, n)` by partial Fisher-Yates.
    pub fn choose_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot choose {k} distinct from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.next_index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
