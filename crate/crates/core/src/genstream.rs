//! Deterministic stream of "generic" nonzero integers.
//!
//! Generic-position constructions (perturbations, submersion rows, base-point
//! choices) need scalars that avoid a finite set of bad loci. Drawing them
//! from a seeded splitmix64 stream keeps every run reproducible: the same
//! seed yields the same draws, and the draw log records what was used.

use crate::scalar::{Field, Scalar};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct GenericScalarStream {
    state: u64,
    seed: u64,
    log: Vec<i64>,
}

impl GenericScalarStream {
    pub fn new(seed: u64) -> Self {
        GenericScalarStream { state: seed, seed, log: Vec::new() }
    }

    /// Stream for task number `index` derived from a session seed.
    pub fn for_task(session_seed: u64, index: u64) -> Self {
        GenericScalarStream::new(session_seed.wrapping_add(index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// One nonzero draw in `1..=65536`.
    pub fn draw_int(&mut self) -> i64 {
        let v = (self.next_u64() % 65536) as i64 + 1;
        self.log.push(v);
        v
    }

    pub fn draw(&mut self, field: Field) -> Scalar {
        Scalar::from_i64(field, self.draw_int())
    }

    /// A row of `n` draws.
    pub fn draw_row(&mut self, field: Field, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| self.draw(field)).collect()
    }

    /// Everything drawn so far, in order.
    pub fn log(&self) -> &[i64] {
        &self.log
    }
}
