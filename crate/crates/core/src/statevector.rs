//! Dense pure states on at most 20 qubits.
//!
//! Qubit `q` is bit `q` of the amplitude index, counting from the least
//! significant bit. Reductions over amplitudes are pairwise with a fixed
//! split, so results do not depend on thread count.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphstate::{InteractionGraph, PauliOp};
use crate::noise::{ErrorPattern, Frame};

pub const MAX_QUBITS: usize = 20;

const LEAF: usize = 1 << 10;
/// Below this many amplitudes gates run on the calling thread.
const PARALLEL_MIN: usize = 1 << 14;
const DUMP_MAGIC: &[u8; 4] = b"TCSV";
const DUMP_VERSION: u32 = 1;

fn pairwise<F>(lo: usize, hi: usize, f: &F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    if hi - lo <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        let (a, b) = rayon::join(|| pairwise(lo, mid, f), || pairwise(mid, hi, f));
        a + b
    }
}

/// One tensor factor of a product observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingleQubitFactor {
    I,
    X,
    Y,
    Z,
    /// `cos(α) X + sin(α) Y`.
    Equatorial(f64),
    /// `|b⟩⟨b|` in the computational basis.
    Projector(bool),
}

impl SingleQubitFactor {
    /// Matrix `[[m00, m01], [m10, m11]]`.
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            Self::I => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
            Self::X => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
            Self::Y => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
            Self::Z => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
            Self::Equatorial(a) => [
                [c(0., 0.), Complex64::from_polar(1.0, -a)],
                [Complex64::from_polar(1.0, a), c(0., 0.)],
            ],
            Self::Projector(false) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 0.)]],
            Self::Projector(true) => [[c(0., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        }
    }

    /// Half the trace, i.e. the expectation on a maximally mixed qubit.
    fn mixed_expectation(self) -> f64 {
        match self {
            Self::I => 1.0,
            Self::Projector(_) => 0.5,
            _ => 0.0,
        }
    }
}

/// `coefficient · ⊗_q factors[q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub coefficient: f64,
    pub factors: Vec<SingleQubitFactor>,
}

impl Observable {
    pub fn new(coefficient: f64, factors: Vec<SingleQubitFactor>) -> Self {
        Self {
            coefficient,
            factors,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(1.0, vec![SingleQubitFactor::I; n])
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn with(mut self, q: usize, factor: SingleQubitFactor) -> Self {
        self.factors[q] = factor;
        self
    }

    pub fn from_pauli(op: &PauliOp) -> Self {
        let factors = (0..op.n())
            .map(|q| match op.factor(q) {
                'X' => SingleQubitFactor::X,
                'Y' => SingleQubitFactor::Y,
                'Z' => SingleQubitFactor::Z,
                _ => SingleQubitFactor::I,
            })
            .collect();
        Self::new(op.sign() as f64, factors)
    }

    /// Expectation on the maximally mixed state, `tr(O) / 2^n`.
    pub fn mixed_expectation(&self) -> f64 {
        self.coefficient
            * self
                .factors
                .iter()
                .map(|f| f.mixed_expectation())
                .product::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(Self {
            n,
            amps: vec![a; 1 << n],
        })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        if amps.len() != 1 << n {
            return Err(Error::StateFormat(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    /// Gaussian-distributed amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut s = Self::zero(n)?;
        for a in &mut s.amps {
            *a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        s.normalize();
        Ok(s)
    }

    /// Product of independently random single-qubit states.
    pub fn random_product<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut s = Self::zero(n)?;
        for q in 0..n {
            let theta: f64 = rng.random::<f64>() * std::f64::consts::PI;
            let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let (c, d) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let e = Complex64::from_polar(1.0, phi);
            // map |0⟩ to cos|0⟩ + e^{iφ} sin|1⟩
            s.apply_matrix(
                q,
                [
                    [Complex64::new(c, 0.0), -e.conj() * d],
                    [e * d, Complex64::new(c, 0.0)],
                ],
            );
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        pairwise(0, self.amps.len(), &|i| {
            Complex64::new(self.amps[i].norm_sqr(), 0.0)
        })
        .re
        .sqrt()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::InvalidQubit(q))
        }
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n == self.n {
            Ok(())
        } else {
            Err(Error::QubitCountMismatch {
                expected: self.n,
                found: n,
            })
        }
    }

    fn apply_matrix(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(bit);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        };
        if self.amps.len() >= PARALLEL_MIN {
            self.amps.par_chunks_mut(bit << 1).for_each(kernel);
        } else {
            self.amps.chunks_mut(bit << 1).for_each(kernel);
        }
    }

    pub fn apply_factor(&mut self, q: usize, factor: SingleQubitFactor) -> Result<()> {
        self.check_qubit(q)?;
        if factor != SingleQubitFactor::I {
            self.apply_matrix(q, factor.matrix());
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.apply_matrix(q, [[s, s], [s, -s]]);
        Ok(())
    }

    pub fn x(&mut self, q: usize) -> Result<()> {
        self.apply_factor(q, SingleQubitFactor::X)
    }

    pub fn z(&mut self, q: usize) -> Result<()> {
        self.apply_factor(q, SingleQubitFactor::Z)
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::InvalidQubit(b));
        }
        let mask = (1usize << a) | (1usize << b);
        let kernel = |(i, amp): (usize, &mut Complex64)| {
            if i & mask == mask {
                *amp = -*amp;
            }
        };
        if self.amps.len() >= PARALLEL_MIN {
            self.amps.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.amps.iter_mut().enumerate().for_each(kernel);
        }
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidQubit(target));
        }
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// `|+⟩^⊗n` followed by a controlled-phase on every graph edge.
    pub fn prepare_graph_state(graph: &InteractionGraph) -> Result<Self> {
        let mut s = Self::plus(graph.len())?;
        for &(a, b) in graph.edges() {
            s.cz(a, b)?;
        }
        Ok(s)
    }

    /// The eight-photon state of the experiment. Qubits 0..=5 are photons
    /// `1, 3, 4, 1', 3', 4'`; 6 and 7 are `2, 2'`; `|H⟩ = |0⟩`.
    ///
    /// A four-photon GHZ state on `1, 2, 3, 4`, a Hadamard on `2`, then each
    /// of `1..4` copied onto its primed partner.
    pub fn prepare_lab_state() -> Self {
        let mut s = Self::zero(8).expect("8 qubits");
        s.lab_circuit().expect("fixed circuit on 8 qubits");
        s
    }

    fn lab_circuit(&mut self) -> Result<()> {
        self.h(0)?;
        for t in [6, 1, 2] {
            self.cnot(0, t)?;
        }
        self.h(6)?;
        for (c, t) in [(0, 3), (1, 4), (2, 5), (6, 7)] {
            self.cnot(c, t)?;
        }
        Ok(())
    }

    /// Applies a Pauli operator, including its sign.
    pub fn apply_op(&mut self, op: &PauliOp) -> Result<()> {
        self.check_n(op.n())?;
        for q in 0..self.n {
            match op.factor(q) {
                'X' => self.x(q)?,
                'Y' => self.apply_factor(q, SingleQubitFactor::Y)?,
                'Z' => self.z(q)?,
                _ => {}
            }
        }
        if op.sign() < 0 {
            for a in &mut self.amps {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Applies the frame's error Pauli (`Z` abstract, `X` lab) to each
    /// flipped qubit.
    pub fn apply_flips(&mut self, pattern: &ErrorPattern, frame: Frame) -> Result<()> {
        pattern.check(self.n)?;
        for q in pattern.iter() {
            match frame {
                Frame::Abstract => self.z(q)?,
                Frame::Lab => self.x(q)?,
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_n(other.n)?;
        Ok(pairwise(0, self.amps.len(), &|i| {
            self.amps[i].conj() * other.amps[i]
        }))
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `⟨P⟩` without copying the state.
    pub fn expectation_pauli(&self, op: &PauliOp) -> Result<f64> {
        self.check_n(op.n())?;
        let x = op.x_bits().low_word() as usize;
        let z = op.z_bits().low_word() as usize;
        // Y = i X Z, so P|i⟩ = i^{#Y} (-1)^{|i & z|} |i ^ x⟩
        let phase = match op.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        } * op.sign() as f64;
        let total = pairwise(0, self.amps.len(), &|i| {
            let term = self.amps[i ^ x].conj() * self.amps[i];
            if (i & z).count_ones() % 2 == 1 {
                -term
            } else {
                term
            }
        });
        Ok((phase * total).re)
    }

    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        self.check_n(obs.n())?;
        let mut image = self.clone();
        for (q, &f) in obs.factors.iter().enumerate() {
            image.apply_factor(q, f)?;
        }
        Ok(obs.coefficient * self.inner(&image)?.re)
    }

    /// Text dump: two comment lines, then `index re im` per amplitude with
    /// shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# state n={}\n# qubit 0 is the least significant bit of the index\n",
            self.n
        );
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(out, "{i} {:e} {:e}", a.re, a.im).expect("string write");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::StateFormat(msg.to_string());
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("# state n="))
            .ok_or_else(|| bad("missing header"))?
            .trim()
            .parse()
            .map_err(|_| bad("bad qubit count"))?;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let mut seen = 0;
        for line in lines.filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            let mut field = || parts.next().ok_or_else(|| bad(line));
            let i: usize = field()?.parse().map_err(|_| bad(line))?;
            let re: f64 = field()?.parse().map_err(|_| bad(line))?;
            let im: f64 = field()?.parse().map_err(|_| bad(line))?;
            *amps.get_mut(i).ok_or_else(|| bad(line))? = Complex64::new(re, im);
            seen += 1;
        }
        if seen != amps.len() {
            return Err(bad("amplitude count"));
        }
        Self::from_amplitudes(n, amps)
    }

    /// Binary dump: `TCSV`, format version and qubit count as little-endian
    /// u32, then little-endian f64 `(re, im)` pairs in index order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 16 * self.amps.len());
        out.extend_from_slice(DUMP_MAGIC);
        out.extend_from_slice(&DUMP_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        for a in &self.amps {
            out.extend_from_slice(&a.re.to_le_bytes());
            out.extend_from_slice(&a.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::StateFormat(msg.to_string());
        if bytes.len() < 12 || &bytes[..4] != DUMP_MAGIC {
            return Err(bad("not a state dump"));
        }
        let word = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().expect("4 bytes"));
        if word(4) != DUMP_VERSION {
            return Err(bad("unsupported version"));
        }
        let n = word(8) as usize;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let body = &bytes[12..];
        if body.len() != 16 << n {
            return Err(bad("truncated amplitudes"));
        }
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
        let amps = body
            .chunks_exact(16)
            .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
            .collect();
        Self::from_amplitudes(n, amps)
    }
}

/// A mixed state as weighted pure states plus a maximally mixed share.
#[derive(Clone, Debug, Default)]
pub struct Ensemble {
    pub components: Vec<(f64, StateVector)>,
    pub mixed_weight: f64,
}

impl Ensemble {
    pub fn pure(state: StateVector) -> Self {
        Self {
            components: vec![(1.0, state)],
            mixed_weight: 0.0,
        }
    }

    /// `v |ψ⟩⟨ψ| + (1 - v) 1/2^n`.
    pub fn depolarized(state: StateVector, visibility: f64) -> Self {
        Self {
            components: vec![(visibility, state)],
            mixed_weight: 1.0 - visibility,
        }
    }

    /// Every flip pattern on `state`, weighted by independent per-qubit
    /// flip probabilities. Patterns of zero weight are dropped.
    pub fn flip_average(state: &StateVector, probs: &[f64], frame: Frame) -> Result<Self> {
        state.check_n(probs.len())?;
        let n = probs.len();
        let components = (0..1u64 << n)
            .into_par_iter()
            .filter_map(|mask| {
                let weight: f64 = probs
                    .iter()
                    .enumerate()
                    .map(|(q, &p)| if mask >> q & 1 == 1 { p } else { 1.0 - p })
                    .product();
                (weight > 0.0).then_some((mask, weight))
            })
            .map(|(mask, weight)| {
                let qubits: Vec<usize> = (0..n).collect();
                let mut s = state.clone();
                s.apply_flips(&ErrorPattern::from_mask(mask, &qubits), frame)?;
                Ok((weight, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            components,
            mixed_weight: 0.0,
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|(w, _)| w).sum::<f64>() + self.mixed_weight
    }

    /// Weighted average of a per-state quantity that is linear in the
    /// density matrix; `mixed` is its value on the maximally mixed state.
    pub fn average<F>(&self, f: F, mixed: f64) -> Result<f64>
    where
        F: Fn(&StateVector) -> Result<f64>,
    {
        let mut total = self.mixed_weight * mixed;
        for (w, s) in &self.components {
            total += w * f(s)?;
        }
        Ok(total)
    }

    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        self.average(|s| s.expectation(obs), obs.mixed_expectation())
    }
}
