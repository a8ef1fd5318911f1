//! Error-rate sweeps, exhaustive error-pattern profiles, and the closed-form
//! logical error rates they are compared against.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::complex::{
    build_cubic, build_elementary_cell, build_l8, build_periodic_cubic, CellComplex, CellId, Chain,
    DefectSpec, LatticeKind,
};
use crate::decoder::{Decoder, DecoderKind};
use crate::error::{Error, Result};
use crate::noise::{trial_rng, ErrorPattern, Frame, NoiseModel};

/// Largest support [`brute_force_profile`] will enumerate.
pub const PROFILE_QUBIT_LIMIT: usize = 20;

/// Error rate of a two-qubit correlation without correction:
/// `1 - (1-p)² - p²`.
pub fn analytic_uncorrected(p: f64) -> f64 {
    1.0 - (1.0 - p).powi(2) - p.powi(2)
}

/// Probability that an odd number of `m` independent flips occur.
pub fn odd_flip_probability(p: f64, m: usize) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * p).powi(m as i32))
}

/// Residual error of the L8 correlation after lookup decoding.
pub fn analytic_corrected_l8(p: f64) -> f64 {
    let q = 1.0 - p;
    1.0 - (q.powi(6) + p.powi(6))
        - (6.0 * p * q.powi(5) + 6.0 * q * p.powi(5))
        - (9.0 * p.powi(2) * q.powi(4) + 9.0 * p.powi(4) * q.powi(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeSpec {
    Elementary,
    L8,
    Cubic {
        dims: [usize; 3],
        #[serde(default)]
        periodic: bool,
        #[serde(default)]
        defects: Vec<DefectSpec>,
    },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<CellComplex> {
        match self {
            LatticeSpec::Elementary => Ok(build_elementary_cell()),
            LatticeSpec::L8 => Ok(build_l8()),
            LatticeSpec::Cubic {
                dims,
                periodic: false,
                defects,
            } => build_cubic(dims[0], dims[1], dims[2], defects),
            LatticeSpec::Cubic {
                dims,
                periodic: true,
                defects,
            } => {
                if !defects.is_empty() {
                    return Err(Error::InvalidSpec(
                        "defects are only supported on open lattices".into(),
                    ));
                }
                build_periodic_cubic(dims[0], dims[1], dims[2])
            }
        }
    }
}

/// Protected surfaces a lattice gets when none are named: `f1 + f1'` on L8,
/// the cube surface on the elementary cell, the three wrapping planes on a
/// periodic lattice, and the enclosing surface of each carved defect on an
/// open lattice.
pub fn default_protected(complex: &CellComplex) -> Vec<Chain> {
    match complex.kind() {
        LatticeKind::L8 => vec![complex
            .chain_from_labels(&["f1", "f1'"])
            .expect("L8 labels")],
        LatticeKind::Elementary => vec![Chain::new(2, complex.ids_of_dim(2).iter().copied())],
        LatticeKind::Cubic { periodic: true, .. } => complex.wrapping_planes(),
        LatticeKind::Cubic { .. } => complex.defect_enclosing_surfaces(),
        LatticeKind::Custom => Vec::new(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", untagged)]
pub enum ProtectedSpec {
    #[default]
    Default,
    Faces {
        faces: Vec<CellId>,
    },
    Labels {
        labels: Vec<String>,
    },
}

impl ProtectedSpec {
    pub fn resolve(&self, complex: &CellComplex) -> Result<Vec<Chain>> {
        match self {
            ProtectedSpec::Default => Ok(default_protected(complex)),
            ProtectedSpec::Faces { faces } => {
                let chain = Chain::new(2, faces.iter().copied());
                complex.validate(&chain)?;
                Ok(vec![chain])
            }
            ProtectedSpec::Labels { labels } => {
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                Ok(vec![complex.chain_from_labels(&refs)?])
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSupport {
    #[default]
    All,
    Faces,
}

/// Noise section of a sweep: the swept `p` (or a fixed scalar), per-qubit
/// overrides keyed by qubit name, and the reporting frame.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_qubit: BTreeMap<String, f64>,
    #[serde(default)]
    pub frame: Frame,
    #[serde(default)]
    pub support: NoiseSupport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    #[default]
    Normal,
    /// Exact 95% Clopper-Pearson interval.
    ClopperPearson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub protected: ProtectedSpec,
    pub decoder: DecoderKind,
    pub p_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub interval: IntervalKind,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.trials > u32::MAX as u64 {
            return Err(Error::InvalidConfig(format!(
                "at most {} trials per point",
                u32::MAX
            )));
        }
        if self.p_grid.is_empty() && self.noise.p.is_none() {
            return Err(Error::InvalidConfig("empty p grid".into()));
        }
        for &p in self.p_grid.iter().chain(self.noise.p.iter()) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        for &p in self.noise.per_qubit.values() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(())
    }

    /// Grid actually swept: `p_grid`, or the scalar noise `p` alone.
    pub fn points(&self) -> Vec<f64> {
        if self.p_grid.is_empty() {
            self.noise.p.into_iter().collect()
        } else {
            self.p_grid.clone()
        }
    }

    pub fn decoder(&self) -> Result<Decoder> {
        let complex = self.lattice.build()?;
        let protected = self.protected.resolve(&complex)?;
        Decoder::new(complex, self.decoder, protected)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub analytic_uncorrected: Option<f64>,
    pub analytic_corrected: Option<f64>,
    pub interval: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub frame: Frame,
    pub rows: Vec<SweepRow>,
}

/// Formats with nine significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 8 - magnitude;
    if (0..=17).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let exact = self.rows.iter().any(|r| r.interval.is_some());
        let mut out = String::from(
            "p,trials,failures,estimate,stderr,analytic_uncorrected,analytic_corrected",
        );
        if exact {
            out.push_str(",ci_low,ci_high");
        }
        out.push('\n');
        let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}",
                format_sig9(r.p),
                r.trials,
                r.failures,
                format_sig9(r.estimate),
                format_sig9(r.stderr),
                opt(r.analytic_uncorrected),
                opt(r.analytic_corrected),
            ));
            if exact {
                let (lo, hi) = r.interval.unwrap_or((f64::NAN, f64::NAN));
                out.push_str(&format!(",{},{}", format_sig9(lo), format_sig9(hi)));
            }
            out.push('\n');
        }
        out
    }
}

/// 95% Clopper-Pearson interval for `k` failures in `n` trials.
pub fn clopper_pearson(k: u64, n: u64) -> (f64, f64) {
    let alpha = 0.05;
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0)
            .expect("positive shape")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf)
            .expect("positive shape")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

fn noise_model(cfg: &SweepConfig, decoder: &Decoder, p: f64) -> Result<NoiseModel> {
    let graph = decoder.graph();
    let support: Vec<usize> = match cfg.noise.support {
        NoiseSupport::All => (0..graph.len()).collect(),
        NoiseSupport::Faces => graph.face_qubits().collect(),
    };
    let mut probs = vec![0.0; graph.len()];
    for q in support {
        probs[q] = p;
    }
    for (name, &pq) in &cfg.noise.per_qubit {
        probs[graph.resolve(name)?] = pq;
    }
    NoiseModel::new(probs, cfg.noise.frame)
}

fn analytic_columns(cfg: &SweepConfig, decoder: &Decoder, p: f64) -> (Option<f64>, Option<f64>) {
    if !cfg.noise.per_qubit.is_empty() {
        return (None, None);
    }
    let uncorrected = 1.0
        - decoder
            .protected_qubits()
            .iter()
            .map(|qs| 1.0 - odd_flip_probability(p, qs.len()))
            .product::<f64>();
    let corrected = match (decoder.kind(), decoder.complex().kind()) {
        (DecoderKind::LookupL8, LatticeKind::L8) if decoder.protected_qubits() == [vec![0, 3]] => {
            Some(analytic_corrected_l8(p))
        }
        (DecoderKind::None, _) => Some(uncorrected),
        _ => None,
    };
    (Some(uncorrected), corrected)
}

/// Runs `trials` noisy trials per grid point. Trial `i` of point `k` uses
/// stream `(k << 32) | i`, and failures are summed as integers, so the
/// result does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let decoder = cfg.decoder()?;
    if decoder.protected().is_empty() {
        return Err(Error::InvalidConfig(format!(
            "lattice {} has no protected surface; name one",
            decoder.complex().kind().name()
        )));
    }
    let mut rows = Vec::new();
    for (k, p) in cfg.points().into_iter().enumerate() {
        let model = noise_model(cfg, &decoder, p)?;
        let failures = (0..cfg.trials as u32)
            .into_par_iter()
            .map(|i| -> Result<u64> {
                let error = model.sample(&mut trial_rng(cfg.seed, k as u32, i));
                Ok(u64::from(!decoder.trial(&error)?))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        let estimate = failures as f64 / cfg.trials as f64;
        let stderr = (estimate * (1.0 - estimate) / cfg.trials as f64).sqrt();
        let (analytic_uncorrected, analytic_corrected) = analytic_columns(cfg, &decoder, p);
        rows.push(SweepRow {
            p,
            trials: cfg.trials,
            failures,
            estimate,
            stderr,
            analytic_uncorrected,
            analytic_corrected,
            interval: (cfg.interval == IntervalKind::ClopperPearson)
                .then(|| clopper_pearson(failures, cfg.trials)),
        });
    }
    Ok(SweepResult {
        frame: cfg.noise.frame,
        rows,
    })
}

/// Success and total counts of every error pattern on a support, by weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub support: Vec<usize>,
    pub successes: Vec<u64>,
    pub totals: Vec<u64>,
}

impl Profile {
    pub fn successes_by_weight(&self) -> BTreeMap<usize, u64> {
        self.successes.iter().copied().enumerate().collect()
    }

    /// Failure probability when each support qubit flips with probability `p`.
    pub fn failure_probability(&self, p: f64) -> f64 {
        let n = self.support.len() as i32;
        (0..=self.support.len())
            .map(|w| {
                let failures = (self.totals[w] - self.successes[w]) as f64;
                failures * p.powi(w as i32) * (1.0 - p).powi(n - w as i32)
            })
            .sum()
    }

    /// `Σ_w totals(w) p^w (1-p)^{n-w}`, which is one for every `p`.
    pub fn total_probability(&self, p: f64) -> f64 {
        let n = self.support.len() as i32;
        (0..=self.support.len())
            .map(|w| self.totals[w] as f64 * p.powi(w as i32) * (1.0 - p).powi(n - w as i32))
            .sum()
    }
}

/// Runs every error subset of `support` through the decoder.
pub fn brute_force_profile(decoder: &Decoder, support: &[usize]) -> Result<Profile> {
    if support.len() > PROFILE_QUBIT_LIMIT {
        return Err(Error::TooManyQubits(support.len(), PROFILE_QUBIT_LIMIT));
    }
    for &q in support {
        if q >= decoder.graph().len() {
            return Err(Error::InvalidQubit(q));
        }
    }
    let n = support.len();
    let tallies = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| -> Result<(usize, bool)> {
            let error = ErrorPattern::from_mask(mask, support);
            Ok((mask.count_ones() as usize, decoder.trial(&error)?))
        })
        .try_fold(
            || (vec![0u64; n + 1], vec![0u64; n + 1]),
            |(mut s, mut t), item| {
                let (w, ok) = item?;
                t[w] += 1;
                s[w] += ok as u64;
                Ok::<_, Error>((s, t))
            },
        )
        .try_reduce(
            || (vec![0u64; n + 1], vec![0u64; n + 1]),
            |(mut s1, mut t1), (s2, t2)| {
                for w in 0..=n {
                    s1[w] += s2[w];
                    t1[w] += t2[w];
                }
                Ok((s1, t1))
            },
        )?;
    Ok(Profile {
        support: support.to_vec(),
        successes: tallies.0,
        totals: tallies.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncorrected_values() {
        assert_eq!(analytic_uncorrected(0.0), 0.0);
        assert!((analytic_uncorrected(0.5) - 0.5).abs() < 1e-15);
        assert!((analytic_uncorrected(0.1) - 0.18).abs() < 1e-15);
        for p in [0.0, 0.1, 0.37, 0.9] {
            assert!((odd_flip_probability(p, 2) - analytic_uncorrected(p)).abs() < 1e-15);
        }
    }

    #[test]
    fn corrected_values() {
        assert_eq!(analytic_corrected_l8(0.0), 0.0);
        assert!((analytic_corrected_l8(0.5) - 0.5).abs() < 1e-15);
        assert!((analytic_corrected_l8(0.1) - 0.054432).abs() < 1e-12);
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.054432), "0.0544320000");
        assert_eq!(format_sig9(0.18), "0.180000000");
        assert_eq!(format_sig9(1.0), "1.00000000");
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(100000.0), "100000.000");
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig {
            lattice: LatticeSpec::L8,
            protected: ProtectedSpec::Default,
            decoder: DecoderKind::LookupL8,
            p_grid: vec![0.1],
            trials: 0,
            seed: 1,
            noise: NoiseSpec::default(),
            interval: IntervalKind::Normal,
        };
        assert!(cfg.validate().is_err());
        cfg.trials = 10;
        cfg.p_grid = vec![1.2];
        assert_eq!(cfg.validate().unwrap_err(), Error::InvalidProbability(1.2));
        cfg.p_grid = vec![0.2];
        assert!(cfg.validate().is_ok());
        cfg.decoder = DecoderKind::Mwpm;
        assert!(matches!(
            run_sweep(&cfg).unwrap_err(),
            Error::DecoderMismatch { .. }
        ));
    }

    #[test]
    fn config_json_shape() {
        let text = r#"{
            "lattice": {"kind": "cubic", "dims": [3, 3, 3], "periodic": true},
            "decoder": "mwpm",
            "p_grid": [0.01],
            "trials": 100,
            "seed": 42,
            "noise": {"frame": "lab", "per_qubit": {"c5": 0.2}}
        }"#;
        let cfg: SweepConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.noise.frame, Frame::Lab);
        assert_eq!(cfg.protected, ProtectedSpec::Default);
        let labels: SweepConfig = serde_json::from_str(
            r#"{"lattice":{"kind":"l8"},"protected":{"labels":["f1","f1'"]},
                "decoder":"lookup_l8","p_grid":[0.1],"trials":5,"seed":0}"#,
        )
        .unwrap();
        assert_eq!(
            labels.protected,
            ProtectedSpec::Labels {
                labels: vec!["f1".into(), "f1'".into()]
            }
        );
    }

    #[test]
    fn clopper_pearson_brackets_estimate() {
        let (lo, hi) = clopper_pearson(50, 1000);
        assert!(lo < 0.05 && 0.05 < hi);
        assert_eq!(clopper_pearson(0, 10).0, 0.0);
        assert_eq!(clopper_pearson(10, 10).1, 1.0);
    }

    #[test]
    fn profile_rejects_large_support() {
        let cfg = LatticeSpec::Cubic {
            dims: [2, 2, 2],
            periodic: false,
            defects: vec![],
        };
        let d = Decoder::new(cfg.build().unwrap(), DecoderKind::None, vec![]).unwrap();
        let support: Vec<usize> = (0..21).collect();
        assert_eq!(
            brute_force_profile(&d, &support).unwrap_err(),
            Error::TooManyQubits(21, 20)
        );
    }

    #[test]
    fn empty_support_profile() {
        let d = Decoder::new(
            build_l8(),
            DecoderKind::LookupL8,
            default_protected(&build_l8()),
        )
        .unwrap();
        let profile = brute_force_profile(&d, &[]).unwrap();
        assert_eq!(profile.successes_by_weight(), BTreeMap::from([(0, 1)]));
    }
}
