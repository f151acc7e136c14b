//! Seeded rational point sampling for probabilistic zero tests.
//!
//! Points are drawn from a `ChaCha8` stream keyed by the configured seed, so
//! a check with the same inputs and seed visits the same points in the same
//! order on every run.

use std::collections::BTreeSet;

use num::rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Assignment, ScalarExpr, Symbol};
use crate::error::{Error, Result};

/// Configuration for sample-mode checks.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    /// Number of evaluation points per check.
    pub points: usize,
    /// Seed for the deterministic point stream.
    pub seed: u64,
    /// Numerators and denominators are drawn from `[-bound, bound]` and
    /// `[1, bound]` respectively.
    pub bound: i64,
    /// Replacement attempts per point before giving up on a check whose
    /// denominators keep vanishing.
    pub max_retries: usize,
}

impl SampleConfig {
    /// A configuration with the given point count and seed and default
    /// bound and retry budget.
    pub fn new(points: usize, seed: u64) -> SampleConfig {
        SampleConfig { points, seed, ..SampleConfig::default() }
    }
}

impl Default for SampleConfig {
    fn default() -> SampleConfig {
        SampleConfig { points: 20, seed: 0, bound: 1000, max_retries: 200 }
    }
}

/// A deterministic stream of rational points.
pub struct PointSampler {
    rng: ChaCha8Rng,
    cfg: SampleConfig,
}

impl PointSampler {
    /// Starts the stream for `cfg.seed`.
    pub fn new(cfg: SampleConfig) -> PointSampler {
        PointSampler { rng: ChaCha8Rng::seed_from_u64(cfg.seed), cfg }
    }

    /// The configuration the sampler was built with.
    pub fn config(&self) -> &SampleConfig {
        &self.cfg
    }

    /// Draws one point assigning a nonzero rational to every symbol.
    /// Nonzero values keep measure-zero denominators (root symbols are
    /// always inverted somewhere) from forcing retries.
    pub fn draw(&mut self, symbols: &BTreeSet<Symbol>) -> Assignment {
        let mut point = Assignment::new();
        for &s in symbols {
            let mut numer: i64 = 0;
            while numer == 0 {
                numer = self.rng.gen_range(-self.cfg.bound..=self.cfg.bound);
            }
            let denom: i64 = self.rng.gen_range(1..=self.cfg.bound);
            point.insert(s, BigRational::new(numer.into(), denom.into()));
        }
        point
    }

    /// Draws points until `accept` passes, within the retry budget. The
    /// predicate typically rejects points where some denominator in a table
    /// of expressions vanishes.
    pub fn draw_where(
        &mut self,
        symbols: &BTreeSet<Symbol>,
        accept: impl Fn(&Assignment) -> bool,
    ) -> Result<Assignment> {
        for _ in 0..self.cfg.max_retries.max(1) {
            let point = self.draw(symbols);
            if accept(&point) {
                return Ok(point);
            }
        }
        Err(Error::SamplingExhausted(self.cfg.max_retries.max(1)))
    }

    /// Evaluates `expr` at a fresh point, replacing points whose denominator
    /// vanishes, within the retry budget.
    pub fn eval_with_retry(
        &mut self,
        symbols: &BTreeSet<Symbol>,
        expr: &ScalarExpr,
    ) -> Result<(Assignment, BigRational)> {
        for _ in 0..self.cfg.max_retries.max(1) {
            let point = self.draw(symbols);
            match expr.eval(&point) {
                Ok(v) => return Ok((point, v)),
                Err(Error::DenominatorVanishes) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SamplingExhausted(self.cfg.max_retries.max(1)))
    }
}
