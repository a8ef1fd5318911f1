//! Independent per-qubit flip noise.
//!
//! Each trial draws from its own ChaCha8 stream selected by `(seed, stream)`,
//! so a Monte Carlo run gives the same counts in any order and on any number
//! of threads.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Error basis convention. `Abstract`: Z errors read out by X measurements.
/// `Lab`: X errors read out by Z correlations (the Hadamard-rotated frame).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Abstract,
    Lab,
}

impl Frame {
    pub fn error_pauli(self) -> char {
        match self {
            Frame::Abstract => 'Z',
            Frame::Lab => 'X',
        }
    }

    pub fn correlation_pauli(self) -> char {
        match self {
            Frame::Abstract => 'X',
            Frame::Lab => 'Z',
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Abstract => "abstract",
            Frame::Lab => "lab",
        })
    }
}

impl std::str::FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abstract" => Ok(Frame::Abstract),
            "lab" => Ok(Frame::Lab),
            other => Err(Error::InvalidConfig(format!("unknown frame {other}"))),
        }
    }
}

/// Set of flipped qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErrorPattern {
    flipped: BTreeSet<usize>,
}

impl ErrorPattern {
    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            flipped: qubits.into_iter().collect(),
        }
    }

    /// Pattern from the set bits of `mask` mapped through `support`.
    pub fn from_mask(mask: u64, support: &[usize]) -> Self {
        Self::new(
            support
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &q)| q),
        )
    }

    pub fn flipped(&self) -> &BTreeSet<usize> {
        &self.flipped
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.flipped.iter().copied()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.flipped.contains(&q)
    }

    pub fn len(&self) -> usize {
        self.flipped.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flipped.is_empty()
    }

    pub fn toggle(&mut self, q: usize) {
        if !self.flipped.insert(q) {
            self.flipped.remove(&q);
        }
    }

    pub fn symmetric_difference(&self, other: &ErrorPattern) -> ErrorPattern {
        Self {
            flipped: self
                .flipped
                .symmetric_difference(&other.flipped)
                .copied()
                .collect(),
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.flipped.iter().find(|&&q| q >= n) {
            Some(&q) => Err(Error::InvalidQubit(q)),
            None => Ok(()),
        }
    }
}

/// Per-qubit flip probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    probs: Vec<f64>,
    frame: Frame,
}

impl NoiseModel {
    pub fn new(probs: Vec<f64>, frame: Frame) -> Result<Self> {
        for &p in &probs {
            check_probability(p)?;
        }
        Ok(Self { probs, frame })
    }

    pub fn uniform(n: usize, p: f64, frame: Frame) -> Result<Self> {
        Self::new(vec![p; n], frame)
    }

    /// Probability `p` on the listed qubits, zero elsewhere.
    pub fn on_support(n: usize, support: &[usize], p: f64, frame: Frame) -> Result<Self> {
        let mut probs = vec![0.0; n];
        for &q in support {
            *probs.get_mut(q).ok_or(Error::InvalidQubit(q))? = p;
        }
        Self::new(probs, frame)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    /// Includes each qubit independently with its probability.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ErrorPattern {
        let mut pattern = ErrorPattern::default();
        for (q, &p) in self.probs.iter().enumerate() {
            // one draw per qubit, even when p is 0 or 1, keeps streams aligned
            let u: f64 = rng.random();
            if u < p {
                pattern.flipped.insert(q);
            }
        }
        pattern
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Stream for one trial: ChaCha8 keyed by `seed`, stream id `(point << 32) | trial`.
pub fn trial_rng(seed: u64, point: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

/// Flip probability of a half-wave plate at angle `theta`: `sin²(2θ)`.
pub fn waveplate_prob(theta: f64) -> f64 {
    (2.0 * theta).sin().powi(2)
}

/// Flip probability of a spatial qubit mixed at a beam splitter of
/// reflectivity `r`. Convention: `p = R`.
pub fn beamsplitter_prob(r: f64) -> Result<f64> {
    check_probability(r)?;
    Ok(r)
}
