use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use topocluster::montecarlo::{
    analytic_corrected_l8, analytic_uncorrected, brute_force_profile, default_protected,
    format_sig9, run_sweep, IntervalKind, NoiseSpec, NoiseSupport, ProtectedSpec,
};
use topocluster::statevector::Ensemble;
use topocluster::witness::{self, WitnessTerms};
use topocluster::{
    build_cubic, build_elementary_cell, build_l8, build_periodic_cubic, Chain, Decoder,
    DecoderKind, DefectSpec, ErrorPattern, Frame, InteractionGraph, LatticeSpec, StabilizerGroup,
    StateVector, SweepConfig,
};

use crate::manifest::{strip_output, RunManifest};
use crate::{Cli, CmdResult, Command, Failure, LatticeArgs, SweepArgs, WitnessArgs};

const DEFAULT_SEED: u64 = 42;

/// Rows of the single-error syndrome table: error, then `C13, C34, C1'3', C3'4'`.
const TABLE1: [(&str, [i8; 4]); 6] = [
    ("1", [-1, 1, 1, 1]),
    ("3", [-1, -1, 1, 1]),
    ("4", [1, -1, 1, 1]),
    ("1'", [1, 1, -1, 1]),
    ("3'", [1, 1, -1, -1]),
    ("4'", [1, 1, 1, -1]),
];
const TABLE1_VOLUMES: [&str; 4] = ["w", "v", "y", "z"];
const L8_PROFILE: [u64; 7] = [1, 6, 9, 0, 9, 6, 1];

/// A command with every default filled in. This is what a manifest stores
/// and what replay executes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Job {
    Build {
        lattice: LatticeSpec,
    },
    Table1,
    Syndrome {
        lattice: LatticeSpec,
        errors: Vec<String>,
    },
    Decode {
        lattice: LatticeSpec,
        decoder: DecoderKind,
        errors: Vec<String>,
    },
    Sweep {
        config: SweepConfig,
        plot_data: bool,
    },
    Profile {
        lattice: LatticeSpec,
        decoder: DecoderKind,
        support: Option<Vec<String>>,
    },
    Witness {
        probabilities: Vec<f64>,
    },
    Verify {
        cases: usize,
    },
}

impl Job {
    fn name(&self) -> &'static str {
        match self {
            Job::Build { .. } => "build",
            Job::Table1 => "table1",
            Job::Syndrome { .. } => "syndrome",
            Job::Decode { .. } => "decode",
            Job::Sweep { .. } => "sweep",
            Job::Profile { .. } => "profile",
            Job::Witness { .. } => "witness",
            Job::Verify { .. } => "verify",
        }
    }
}

struct Ctx {
    seed: u64,
    frame: Frame,
}

/// Writes named outputs into the output directory, or to stdout.
struct Sink {
    dir: Option<PathBuf>,
    written: Vec<PathBuf>,
}

impl Sink {
    fn emit(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        match &self.dir {
            Some(dir) => {
                let path = dir.join(name);
                fs::write(&path, contents)
                    .with_context(|| format!("writing {}", path.display()))?;
                self.written.push(PathBuf::from(name));
            }
            None => print!("{contents}"),
        }
        Ok(())
    }

    fn emit_json(&mut self, name: &str, value: &Value) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(name, &text)
    }
}

pub fn dispatch(cli: &Cli, args: &[String]) -> CmdResult {
    let (job, ctx, args) = match &cli.command {
        Command::Replay { manifest } => {
            let m = RunManifest::read(manifest)?;
            let job: Job = serde_json::from_value(m.config.clone())
                .context("manifest does not describe a known job")?;
            let frame = m.frame.parse()?;
            (
                job,
                Ctx {
                    seed: m.seed,
                    frame,
                },
                m.args,
            )
        }
        command => {
            let ctx = Ctx {
                seed: cli.seed.unwrap_or(DEFAULT_SEED),
                frame: cli.frame.unwrap_or_default(),
            };
            (resolve(command, cli)?, ctx, strip_output(args))
        }
    };
    if let Some(dir) = &cli.output {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut sink = Sink {
        dir: cli.output.clone(),
        written: Vec::new(),
    };
    let outcome = execute(&job, &ctx, &mut sink);
    if let Some(dir) = &cli.output {
        let manifest = RunManifest {
            tool: "topocluster".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: job.name().into(),
            args,
            seed: ctx.seed,
            frame: ctx.frame.to_string(),
            config: serde_json::to_value(&job)?,
            outputs: sink.written.clone(),
        };
        manifest.write(dir)?;
    }
    outcome
}

fn resolve(command: &Command, cli: &Cli) -> CmdResult<Job> {
    Ok(match command {
        Command::Build(l) => Job::Build {
            lattice: lattice_spec(l)?,
        },
        Command::Table1 => Job::Table1,
        Command::Syndrome { lattice, errors } => Job::Syndrome {
            lattice: lattice_spec(lattice)?,
            errors: split_list(errors),
        },
        Command::Decode {
            lattice,
            decoder,
            errors,
        } => {
            let lattice = lattice_spec(lattice)?;
            Job::Decode {
                decoder: decoder.unwrap_or_else(|| default_decoder(&lattice)),
                lattice,
                errors: split_list(errors),
            }
        }
        Command::Sweep(s) => Job::Sweep {
            config: sweep_config(s, cli)?,
            plot_data: s.plot_data,
        },
        Command::Profile {
            lattice,
            decoder,
            support,
        } => {
            let lattice = lattice_spec(lattice)?;
            Job::Profile {
                decoder: decoder.unwrap_or_else(|| default_decoder(&lattice)),
                lattice,
                support: support.as_deref().map(split_list),
            }
        }
        Command::Witness(w) => Job::Witness {
            probabilities: witness_probabilities(w)?,
        },
        Command::Verify { cases } => Job::Verify { cases: *cases },
        Command::Replay { .. } => unreachable!("replay is resolved from its manifest"),
    })
}

fn execute(job: &Job, ctx: &Ctx, sink: &mut Sink) -> CmdResult {
    match job {
        Job::Build { lattice } => build(lattice, sink),
        Job::Table1 => table1(ctx, sink),
        Job::Syndrome { lattice, errors } => syndrome(lattice, errors, ctx, sink),
        Job::Decode {
            lattice,
            decoder,
            errors,
        } => decode(lattice, *decoder, errors, ctx, sink),
        Job::Sweep { config, plot_data } => sweep(config, *plot_data, sink),
        Job::Profile {
            lattice,
            decoder,
            support,
        } => profile(lattice, *decoder, support.as_deref(), ctx, sink),
        Job::Witness { probabilities } => witness_report(probabilities, ctx, sink),
        Job::Verify { cases } => verify(*cases, ctx, sink),
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

fn parse_numbers<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    split_list(s)
        .iter()
        .map(|t| t.parse().map_err(|_| anyhow!("bad {what} `{t}`")))
        .collect()
}

fn parse_defect(s: &str) -> anyhow::Result<DefectSpec> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("defect `{s}` needs a kind prefix"))?;
    let v: Vec<usize> = parse_numbers(rest, "defect coordinate")?;
    Ok(match (kind, v.as_slice()) {
        ("face", &[x, y, z]) => DefectSpec::Face { coords: [x, y, z] },
        ("edge", &[x, y, z]) => DefectSpec::Edge { coords: [x, y, z] },
        ("line", &[x, y, z_from, z_to]) => DefectSpec::Line { x, y, z_from, z_to },
        _ => bail!("cannot read defect `{s}`"),
    })
}

fn lattice_spec(args: &LatticeArgs) -> anyhow::Result<LatticeSpec> {
    let cubic_only = !args.defects.is_empty() || args.periodic;
    let spec = match args.lattice.as_str() {
        "elementary" => LatticeSpec::Elementary,
        "l8" => LatticeSpec::L8,
        "cubic" => {
            let dims: Vec<usize> = parse_numbers(&args.dims, "dimension")?;
            let dims: [usize; 3] = dims
                .try_into()
                .map_err(|_| anyhow!("--dims needs three values"))?;
            LatticeSpec::Cubic {
                dims,
                periodic: args.periodic,
                defects: args
                    .defects
                    .iter()
                    .map(|d| parse_defect(d))
                    .collect::<anyhow::Result<_>>()?,
            }
        }
        other => bail!("unknown lattice `{other}`"),
    };
    if cubic_only && !matches!(spec, LatticeSpec::Cubic { .. }) {
        bail!("--periodic and --defect apply only to cubic lattices");
    }
    Ok(spec)
}

fn default_decoder(lattice: &LatticeSpec) -> DecoderKind {
    match lattice {
        LatticeSpec::L8 => DecoderKind::LookupL8,
        _ => DecoderKind::Mwpm,
    }
}

fn sweep_config(s: &SweepArgs, cli: &Cli) -> anyhow::Result<SweepConfig> {
    let mut cfg = match &s.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => {
            let lattice = lattice_spec(&s.lattice)?;
            let mut per_qubit = std::collections::BTreeMap::new();
            for item in &s.qubit_p {
                let (name, p) = item
                    .split_once('=')
                    .ok_or_else(|| anyhow!("--qubit-p expects name=p, got `{item}`"))?;
                per_qubit.insert(
                    name.to_string(),
                    p.parse().map_err(|_| anyhow!("bad p `{p}`"))?,
                );
            }
            SweepConfig {
                decoder: s.decoder.unwrap_or_else(|| default_decoder(&lattice)),
                lattice,
                protected: ProtectedSpec::Default,
                p_grid: parse_numbers(&s.p, "error rate")?,
                trials: s.trials,
                seed: DEFAULT_SEED,
                noise: NoiseSpec {
                    p: None,
                    per_qubit,
                    frame: Frame::Abstract,
                    support: if s.faces_only {
                        NoiseSupport::Faces
                    } else {
                        NoiseSupport::All
                    },
                },
                interval: if s.exact_ci {
                    IntervalKind::ClopperPearson
                } else {
                    IntervalKind::Normal
                },
            }
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(frame) = cli.frame {
        cfg.noise.frame = frame;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn witness_probabilities(w: &WitnessArgs) -> anyhow::Result<Vec<f64>> {
    let graph = InteractionGraph::from_complex(&build_l8());
    let mut probs = vec![w.p; graph.len()];
    for item in &w.qubit_p {
        let (name, p) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("--qubit-p expects name=p, got `{item}`"))?;
        probs[graph.resolve(name)?] = p.parse().map_err(|_| anyhow!("bad p `{p}`"))?;
    }
    for &p in &probs {
        if !(0.0..=1.0).contains(&p) {
            bail!("probability {p} outside [0, 1]");
        }
    }
    Ok(probs)
}

fn build(lattice: &LatticeSpec, sink: &mut Sink) -> CmdResult {
    let c = lattice.build()?;
    eprintln!(
        "{}: {} sites, {} edges, {} faces, {} volumes, {} removed",
        c.kind().name(),
        c.count(0),
        c.count(1),
        c.count(2),
        c.count(3),
        c.removed().len()
    );
    sink.emit("complex.json", &c.to_json())?;
    Ok(())
}

fn l8_lookup() -> Decoder {
    let c = build_l8();
    let protected = default_protected(&c);
    Decoder::new(c, DecoderKind::LookupL8, protected).expect("L8 lookup decoder")
}

fn table1_rows() -> Vec<(&'static str, [i8; 4])> {
    let d = l8_lookup();
    let volumes = TABLE1_VOLUMES.map(|l| d.complex().id_of_label(l).expect("L8 volume"));
    TABLE1
        .iter()
        .map(|(name, _)| {
            let q = d.graph().resolve(name).expect("L8 face qubit");
            let s = d.syndrome(&ErrorPattern::new([q])).expect("valid qubit");
            (
                *name,
                volumes.map(|v| s.get(v).expect("volume in syndrome")),
            )
        })
        .collect()
}

fn table1(ctx: &Ctx, sink: &mut Sink) -> CmdResult {
    let rows = table1_rows();
    let error = ctx.frame.error_pauli();
    let corr = ctx.frame.correlation_pauli();
    let mut text = format!(
        "frame: {} ({error} errors, {corr} correlations)\n{:<6}{:>6}{:>6}{:>7}{:>7}\n",
        ctx.frame, "error", "C13", "C34", "C1'3'", "C3'4'"
    );
    for (name, row) in &rows {
        let cell = |v: i8| {
            if v < 0 {
                "-1".to_string()
            } else {
                "+1".to_string()
            }
        };
        text.push_str(&format!(
            "{:<6}{:>6}{:>6}{:>7}{:>7}\n",
            format!("{error}{name}"),
            cell(row[0]),
            cell(row[1]),
            cell(row[2]),
            cell(row[3])
        ));
    }
    sink.emit("table1.txt", &text)?;
    let mismatches: Vec<&str> = rows
        .iter()
        .zip(TABLE1.iter())
        .filter(|((_, got), (_, want))| got != want)
        .map(|((name, _), _)| *name)
        .collect();
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "syndrome rows differ from the table for errors {mismatches:?}"
        )))
    }
}

fn decoder_for(lattice: &LatticeSpec, kind: DecoderKind) -> anyhow::Result<Decoder> {
    let c = lattice.build()?;
    let protected = default_protected(&c);
    Ok(Decoder::new(c, kind, protected)?)
}

fn resolve_qubits(graph: &InteractionGraph, names: &[String]) -> anyhow::Result<Vec<usize>> {
    names
        .iter()
        .map(|n| graph.resolve(n).map_err(Into::into))
        .collect()
}

fn labelled_syndrome(d: &Decoder, e: &ErrorPattern) -> anyhow::Result<Value> {
    let s = d.syndrome(e)?;
    let mut map = Map::new();
    for (&v, &bit) in s.values() {
        let key = d
            .complex()
            .label_of(v)
            .map(String::from)
            .unwrap_or_else(|| v.to_string());
        map.insert(key, json!(bit));
    }
    Ok(Value::Object(map))
}

fn syndrome(lattice: &LatticeSpec, errors: &[String], ctx: &Ctx, sink: &mut Sink) -> CmdResult {
    let kind = if *lattice == LatticeSpec::L8 {
        DecoderKind::LookupL8
    } else {
        DecoderKind::None
    };
    let d = decoder_for(lattice, kind)?;
    let e = ErrorPattern::new(resolve_qubits(d.graph(), errors)?);
    let mut out = json!({
        "frame": ctx.frame.to_string(),
        "error_pauli": ctx.frame.error_pauli().to_string(),
        "errors": e.iter().collect::<Vec<_>>(),
        "syndrome": labelled_syndrome(&d, &e)?,
        "flagged": d.syndrome(&e)?.flagged().collect::<Vec<_>>(),
    });
    if kind == DecoderKind::LookupL8 {
        out["dual"] = json!(d.dual_bit(&e));
    }
    sink.emit_json("syndrome.json", &out)?;
    Ok(())
}

fn decode(
    lattice: &LatticeSpec,
    kind: DecoderKind,
    errors: &[String],
    ctx: &Ctx,
    sink: &mut Sink,
) -> CmdResult {
    let d = decoder_for(lattice, kind)?;
    let e = ErrorPattern::new(resolve_qubits(d.graph(), errors)?);
    let report = d.report(&e)?;
    if !d
        .syndrome(&ErrorPattern::new(report.residual.iter().copied()))?
        .is_trivial()
    {
        return Err(Failure::Invariant(
            "correction left a nontrivial syndrome".into(),
        ));
    }
    let mut out = serde_json::to_value(&report)?;
    out["frame"] = json!(ctx.frame.to_string());
    out["decoder"] = json!(kind.name());
    sink.emit_json("decode.json", &out)?;
    Ok(())
}

fn plot_curves() -> String {
    let mut out = String::from("p\tanalytic_uncorrected\tanalytic_corrected\n");
    for k in 0..=200 {
        let p = k as f64 / 200.0;
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            format_sig9(p),
            format_sig9(analytic_uncorrected(p)),
            format_sig9(analytic_corrected_l8(p))
        ));
    }
    out
}

fn sweep(cfg: &SweepConfig, plot_data: bool, sink: &mut Sink) -> CmdResult {
    let result = run_sweep(cfg)?;
    eprintln!(
        "sweep: {} points x {} trials, frame {}, seed {}",
        result.rows.len(),
        cfg.trials,
        result.frame,
        cfg.seed
    );
    sink.emit("sweep.csv", &result.to_csv())?;
    if plot_data {
        sink.emit("curves.tsv", &plot_curves())?;
    }
    Ok(())
}

fn profile(
    lattice: &LatticeSpec,
    kind: DecoderKind,
    support: Option<&[String]>,
    ctx: &Ctx,
    sink: &mut Sink,
) -> CmdResult {
    let d = decoder_for(lattice, kind)?;
    if d.protected().is_empty() {
        return Err(anyhow!(
            "lattice {} has no protected surface",
            d.complex().kind().name()
        )
        .into());
    }
    let qubits = match support {
        Some(names) => resolve_qubits(d.graph(), names)?,
        None => d.graph().face_qubits().collect(),
    };
    let p = brute_force_profile(&d, &qubits)?;
    let out = json!({
        "frame": ctx.frame.to_string(),
        "decoder": kind.name(),
        "support": qubits.iter().map(|&q| d.graph().short_label(q)).collect::<Vec<_>>(),
        "successes": p.successes,
        "totals": p.totals,
    });
    sink.emit_json("profile.json", &out)?;
    Ok(())
}

fn terms_json(t: &WitnessTerms) -> Value {
    json!({ "m": t.m, "m_conjugated": t.m_conjugated, "n": t.n })
}

fn witness_report(probs: &[f64], ctx: &Ctx, sink: &mut Sink) -> CmdResult {
    let psi = witness::ideal_psi();
    // a Z flip on the cluster state is an X flip on the rotated lab state
    let ensemble = if probs.iter().all(|&p| p == 0.0) {
        Ensemble::pure(psi)
    } else {
        Ensemble::flip_average(&psi, probs, Frame::Lab)?
    };
    let direct = witness::ensemble_witness(&ensemble)?;
    let terms = witness::ensemble_witness_terms(&ensemble)?;
    let graph = InteractionGraph::from_complex(&build_l8());
    let noise: Map<String, Value> = probs
        .iter()
        .enumerate()
        .map(|(q, &p)| (graph.short_label(q), json!(p)))
        .collect();
    let out = json!({
        "frame": ctx.frame.to_string(),
        "error_pauli": ctx.frame.error_pauli().to_string(),
        "noise": noise,
        "witness_value": direct,
        "witness_via_decomposition": terms.value,
        "fidelity_bound": witness::fidelity_bound(direct),
        "terms": terms_json(&terms),
    });
    sink.emit_json("witness.json", &out)?;
    if (direct - terms.value).abs() > topocluster::TOLERANCE {
        return Err(Failure::Invariant(format!(
            "witness paths disagree: {direct} vs {}",
            terms.value
        )));
    }
    Ok(())
}

fn verify(cases: usize, ctx: &Ctx, sink: &mut Sink) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut lines = Vec::new();
    let mut failed = 0;
    let mut record = |name: &str, ok: bool, detail: String| {
        failed += usize::from(!ok);
        lines.push(format!(
            "{} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        ));
    };

    let complexes = [
        build_elementary_cell(),
        build_l8(),
        build_cubic(3, 3, 3, &[])?,
        build_cubic(
            4,
            4,
            4,
            &[DefectSpec::Line {
                x: 1,
                y: 1,
                z_from: 1,
                z_to: 2,
            }],
        )?,
        build_periodic_cubic(3, 3, 3)?,
    ];
    let squared = complexes
        .iter()
        .filter(|c| c.check_boundary_squared().is_ok())
        .count();
    record(
        "boundary_squared",
        squared == complexes.len(),
        format!("{squared}/{} complexes", complexes.len()),
    );

    let mut chains_ok = 0;
    for k in 0..cases {
        let c = &complexes[k % complexes.len()];
        let dim = 2 + (k % 2) as u8;
        let chain = Chain::new(
            dim,
            c.ids_of_dim(dim)
                .iter()
                .copied()
                .filter(|_| rng.random_bool(0.3)),
        );
        let b = c.boundary(&chain)?;
        chains_ok += usize::from(c.boundary(&b)?.is_empty());
    }
    record(
        "random_chain_cycles",
        chains_ok == cases,
        format!("{chains_ok}/{cases}"),
    );

    let rows = table1_rows();
    let matched = rows
        .iter()
        .zip(TABLE1.iter())
        .filter(|((_, a), (_, b))| a == b)
        .count();
    record("table1", matched == 6, format!("{matched}/6 rows"));

    let d = l8_lookup();
    let faces: Vec<usize> = d.graph().face_qubits().collect();
    let profile = brute_force_profile(&d, &faces)?;
    record(
        "l8_profile",
        profile.successes == L8_PROFILE,
        format!("{:?}", profile.successes),
    );

    let graph = InteractionGraph::from_complex(&build_l8());
    let group = StabilizerGroup::from_graph(&graph);
    let state = StateVector::prepare_graph_state(&graph)?;
    let mut members = 0;
    for mask in 0..256usize {
        let subset =
            topocluster::bits::BitVec::from_indices(8, (0..8).filter(|q| mask >> q & 1 == 1));
        let e = group.element(&subset);
        let v = state.expectation_pauli(&e)?;
        members += usize::from((v - 1.0).abs() < topocluster::TOLERANCE);
    }
    record(
        "stabilizer_statevector",
        members == 256,
        format!("{members}/256"),
    );

    let mut rotated = state.clone();
    for q in 0..8 {
        rotated.h(q)?;
    }
    let f = rotated.fidelity(&StateVector::prepare_lab_state())?;
    record(
        "lab_state_fidelity",
        (f - 1.0).abs() < topocluster::TOLERANCE,
        format!("{f:.12}"),
    );

    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let s = StateVector::random(8, &mut rng)?;
        let a = witness::witness_value(&s)?;
        let b = witness::witness_via_decomposition(&s)?;
        worst = worst.max((a - b).abs());
    }
    record(
        "witness_identity",
        worst < topocluster::TOLERANCE,
        format!("max deviation {worst:.1e} over {cases} states"),
    );

    let mut cleared = 0;
    let mut decoded = 0;
    for c in [&complexes[2], &complexes[3], &complexes[4]] {
        let d = Decoder::new(c.clone(), DecoderKind::Mwpm, vec![])?;
        let n = d.graph().len();
        for _ in 0..cases.div_ceil(3) {
            let p = rng.random_range(0.005..0.1);
            let e = ErrorPattern::new((0..n).filter(|_| rng.random_bool(p)));
            let corr = d.correct(&e)?;
            let residual = e.symmetric_difference(&corr.flipped);
            decoded += 1;
            cleared += usize::from(d.syndrome(&residual)?.is_trivial());
        }
    }
    record(
        "mwpm_clears_syndrome",
        cleared == decoded,
        format!("{cleared}/{decoded}"),
    );

    let mut text = lines.join("\n");
    text.push('\n');
    sink.emit("verify.txt", &text)?;
    if sink.dir.is_some() {
        eprint!("{text}");
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("{failed} checks failed")))
    }
}
