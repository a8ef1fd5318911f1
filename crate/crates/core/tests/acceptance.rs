//! Acceptance suite. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line each, and exits non-zero if any failed.
//!
//! Criteria run one after another in a single process so that the timing
//! of each is not disturbed by the others.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocluster::bits::BitVec;
use topocluster::graphstate::surface_operator;
use topocluster::montecarlo::{
    analytic_corrected_l8, analytic_uncorrected, brute_force_profile, default_protected, run_sweep,
    IntervalKind, LatticeSpec, NoiseSpec, ProtectedSpec, SweepConfig,
};
use topocluster::witness::{
    depolarized_witness, fidelity_bound, ideal_psi, witness_value, witness_via_decomposition,
};
use topocluster::{
    build_cubic, build_elementary_cell, build_l8, build_periodic_cubic, CellComplex, Chain,
    Decoder, DecoderKind, DefectSpec, ErrorPattern, InteractionGraph, PauliOp, StabilizerGroup,
    StateVector,
};

/// Absolute tolerance on expectations, witness values and bounds.
const TOL: f64 = 1e-9;
/// Standard errors allowed between a sweep estimate and its closed form.
const SWEEP_SIGMAS: f64 = 3.0;
/// Half-width of the corrected spot value at `p = 0.1`.
const SPOT_HALF_WIDTH: f64 = 0.0022;
/// One-sided margin, in combined standard errors, for the size comparison.
const SIZE_SIGMAS: f64 = 3.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(cond: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: cond,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table1_syndromes", Duration::from_secs(1), table1_syndromes),
        (
            "l8_weight_profile",
            Duration::from_secs(1),
            l8_weight_profile,
        ),
        ("l8_sweep_vs_closed_form", Duration::from_secs(10), l8_sweep),
        (
            "stabilizer_statevector",
            Duration::from_secs(60),
            stabilizer_statevector,
        ),
        ("closed_surfaces", Duration::from_secs(10), closed_surfaces),
        ("witness_suite", Duration::from_secs(30), witness_suite),
        (
            "homology_properties",
            Duration::from_secs(60),
            homology_properties,
        ),
        (
            "periodic_size_scaling",
            Duration::from_secs(120),
            periodic_size_scaling,
        ),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {name}: {} [{:.2}s of {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" },
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn l8_decoder(kind: DecoderKind) -> Decoder {
    let c = build_l8();
    let protected = default_protected(&c);
    Decoder::new(c, kind, protected).unwrap()
}

fn table1_syndromes() -> Outcome {
    // columns C13, C34, C1'3', C3'4' are the volumes w, v, y, z
    let table: [(&str, [i8; 4]); 6] = [
        ("1", [-1, 1, 1, 1]),
        ("3", [-1, -1, 1, 1]),
        ("4", [1, -1, 1, 1]),
        ("1'", [1, 1, -1, 1]),
        ("3'", [1, 1, -1, -1]),
        ("4'", [1, 1, 1, -1]),
    ];
    let d = l8_decoder(DecoderKind::LookupL8);
    let c = d.complex();
    let volumes = ["w", "v", "y", "z"].map(|l| c.id_of_label(l).unwrap());
    let mut matched = 0;
    for (name, row) in table {
        let e = ErrorPattern::new([d.graph().resolve(name).unwrap()]);
        let s = d.syndrome(&e).unwrap();
        for (v, want) in volumes.iter().zip(row) {
            matched += usize::from(s.get(*v) == Some(want));
        }
    }
    check(matched == 24, format!("{matched}/24 syndrome bits match"))
}

fn l8_weight_profile() -> Outcome {
    let d = l8_decoder(DecoderKind::LookupL8);
    let faces: Vec<usize> = d.graph().face_qubits().collect();
    let profile = brute_force_profile(&d, &faces).unwrap();
    let want = [1u64, 6, 9, 0, 9, 6, 1];
    // residual error written out term by term from the success counts
    let closed = |p: f64| {
        let q = 1.0 - p;
        1.0 - (q.powi(6) + p.powi(6))
            - (6.0 * p * q.powi(5) + 6.0 * q * p.powi(5))
            - (9.0 * p.powi(2) * q.powi(4) + 9.0 * p.powi(4) * q.powi(2))
    };
    let curve_ok = (1..10)
        .map(|k| k as f64 / 10.0)
        .all(|p| (profile.failure_probability(p) - closed(p)).abs() < TOL);
    check(
        profile.successes == want && curve_ok,
        format!(
            "successes by weight {:?}, failure polynomial matches: {curve_ok}",
            profile.successes
        ),
    )
}

fn l8_sweep() -> Outcome {
    let trials = 100_000u64;
    let cfg = SweepConfig {
        lattice: LatticeSpec::L8,
        protected: ProtectedSpec::Default,
        decoder: DecoderKind::LookupL8,
        p_grid: (1..10).map(|k| k as f64 / 10.0).collect(),
        trials,
        seed: 20_090_401,
        noise: NoiseSpec::default(),
        interval: IntervalKind::Normal,
    };
    let result = run_sweep(&cfg).unwrap();
    let mut worst: f64 = 0.0;
    for row in &result.rows {
        let want = analytic_corrected_l8(row.p);
        let se = (want * (1.0 - want) / trials as f64).sqrt();
        worst = worst.max((row.estimate - want).abs() / se);
    }
    let spot = &result.rows[0];
    let spot_ok = (spot.estimate - 0.054432).abs() <= SPOT_HALF_WIDTH
        && (analytic_uncorrected(0.1) - 0.18).abs() < TOL
        && spot
            .analytic_uncorrected
            .is_some_and(|u| (u - 0.18).abs() < TOL);
    check(
        worst <= SWEEP_SIGMAS && spot_ok,
        format!(
            "max deviation {worst:.2} se over 9 points; p=0.1 corrected {:.6} vs uncorrected {:.2}",
            spot.estimate,
            spot.analytic_uncorrected.unwrap_or(f64::NAN)
        ),
    )
}

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliOp {
    let x = BitVec::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
    let z = BitVec::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
    let sign = if rng.random_bool(0.5) { -1 } else { 1 };
    PauliOp::from_parts(x, z, sign).unwrap()
}

/// Counts group elements whose statevector expectation is `+1` and random
/// non-members whose expectation is `0`.
fn members_and_strangers(
    complex: &CellComplex,
    members: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> (usize, usize, usize) {
    let graph = InteractionGraph::from_complex(complex);
    let group = StabilizerGroup::from_graph(&graph);
    let state = StateVector::prepare_graph_state(&graph).unwrap();
    let n = graph.len();
    let subsets: Vec<BitVec> = match members {
        None => (0..1u64 << n)
            .map(|m| BitVec::from_indices(n, (0..n).filter(|&q| m >> q & 1 == 1)))
            .collect(),
        Some(k) => (0..k)
            .map(|_| BitVec::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5))))
            .collect(),
    };
    let good_members = subsets
        .iter()
        .filter(|s| {
            let e = group.element(s);
            (state.expectation_pauli(&e).unwrap() - 1.0).abs() < TOL
        })
        .count();
    let mut good_strangers = 0;
    let mut strangers = 0;
    while strangers < 100 {
        let op = random_pauli(n, rng);
        if group.correlation(&op).unwrap() != 0 {
            continue;
        }
        strangers += 1;
        good_strangers += usize::from(state.expectation_pauli(&op).unwrap().abs() < TOL);
    }
    (subsets.len(), good_members, good_strangers)
}

fn stabilizer_statevector() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (n8, m8, s8) = members_and_strangers(&build_l8(), None, &mut rng);
    let (n18, m18, s18) = members_and_strangers(&build_elementary_cell(), Some(10_000), &mut rng);
    check(
        n8 == 256 && m8 == 256 && s8 == 100 && n18 == 10_000 && m18 == 10_000 && s18 == 100,
        format!(
            "8 qubits: {m8}/{n8} members at +1, {s8}/100 non-members at 0; \
             18 qubits: {m18}/{n18} members at +1, {s18}/100 non-members at 0"
        ),
    )
}

fn both_engines(complex: &CellComplex, surface: &Chain) -> (i8, f64) {
    let graph = InteractionGraph::from_complex(complex);
    let op = surface_operator(complex, &graph, surface).unwrap();
    let stab = StabilizerGroup::from_graph(&graph)
        .correlation(&op)
        .unwrap();
    let dense = StateVector::prepare_graph_state(&graph)
        .unwrap()
        .expectation_pauli(&op)
        .unwrap();
    (stab, dense)
}

fn closed_surfaces() -> Outcome {
    let cell = build_elementary_cell();
    let cube = Chain::new(2, cell.ids_of_dim(2).iter().copied());
    let (s, d) = both_engines(&cell, &cube);
    let cube_ok = s == 1 && (d - 1.0).abs() < TOL;

    let l8 = build_l8();
    let volumes = l8.ids_of_dim(3).to_vec();
    let mut good = 0;
    for mask in 1u32..16 {
        let chosen = Chain::new(3, (0..4).filter(|k| mask >> k & 1 == 1).map(|k| volumes[k]));
        let surface = l8.boundary(&chosen).unwrap();
        let (s, d) = both_engines(&l8, &surface);
        good += usize::from(s == 1 && (d - 1.0).abs() < TOL);
    }
    check(
        cube_ok && good == 15,
        format!("cube X1..X6 = +1: {cube_ok}; L8 volume-boundary sums at +1: {good}/15"),
    )
}

fn witness_suite() -> Outcome {
    let ideal = witness_value(&ideal_psi()).unwrap();
    let ideal_ok = (ideal + 0.5).abs() < TOL
        && (witness_via_decomposition(&ideal_psi()).unwrap() + 0.5).abs() < TOL;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let s = if k % 2 == 0 {
            StateVector::random(8, &mut rng).unwrap()
        } else {
            StateVector::random_product(8, &mut rng).unwrap()
        };
        worst =
            worst.max((witness_value(&s).unwrap() - witness_via_decomposition(&s).unwrap()).abs());
    }
    let bound_ok = (fidelity_bound(-0.23) - 0.73).abs() < TOL;

    // v ψ + (1 - v) 1/256 has witness 1/2 - v, so the sign flips at v = 1/2
    let mut sign_ok = true;
    for k in 0..=100 {
        let v = k as f64 / 100.0;
        let w = depolarized_witness(v).unwrap();
        sign_ok &= (w - (0.5 - v)).abs() < TOL;
        sign_ok &= match k.cmp(&50) {
            std::cmp::Ordering::Less => w > 0.0,
            std::cmp::Ordering::Equal => w.abs() < TOL,
            std::cmp::Ordering::Greater => w < 0.0,
        };
    }
    check(
        ideal_ok && worst < TOL && bound_ok && sign_ok,
        format!(
            "ideal W = {ideal:.12}; decomposition max deviation {worst:.1e} over 100 states; \
             F(-0.23) = {:.2}; sign change at v = 1/2: {sign_ok}",
            fidelity_bound(-0.23)
        ),
    )
}

fn random_chain(c: &CellComplex, dim: u8, rng: &mut ChaCha8Rng) -> Chain {
    let density = rng.random_range(0.02..0.5);
    Chain::new(
        dim,
        c.ids_of_dim(dim)
            .iter()
            .copied()
            .filter(|_| rng.random_bool(density)),
    )
}

fn homology_properties() -> Outcome {
    let complexes = vec![
        build_elementary_cell(),
        build_l8(),
        build_cubic(3, 3, 3, &[]).unwrap(),
        build_cubic(
            4,
            4,
            3,
            &[DefectSpec::Line {
                x: 1,
                y: 1,
                z_from: 0,
                z_to: 3,
            }],
        )
        .unwrap(),
        build_periodic_cubic(3, 3, 3).unwrap(),
        build_periodic_cubic(4, 3, 2).unwrap(),
    ];
    let squared_ok = complexes.iter().all(|c| c.check_boundary_squared().is_ok());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut chains_ok = 0;
    for k in 0..1000 {
        let c = &complexes[k % complexes.len()];
        let dim = if k % 2 == 0 { 2 } else { 3 };
        let chain = random_chain(c, dim, &mut rng);
        let b = c.boundary(&chain).unwrap();
        chains_ok += usize::from(c.boundary(&b).unwrap().is_empty());
    }

    // decode random errors and check the residual syndrome is trivial
    let mut decoded = 0;
    let mut cleared = 0;
    for c in &complexes {
        if !c.kind().is_cubic() {
            continue;
        }
        let d = Decoder::new(c.clone(), DecoderKind::Mwpm, vec![]).unwrap();
        let n = d.graph().len();
        for _ in 0..300 {
            let p = rng.random_range(0.005..0.15);
            let e = ErrorPattern::new((0..n).filter(|_| rng.random_bool(p)));
            let corr = d.correct(&e).unwrap();
            let residual = e.symmetric_difference(&corr.flipped);
            decoded += 1;
            cleared += usize::from(d.syndrome(&residual).unwrap().is_trivial());
        }
    }

    let (exact, scanned) = single_error_scan();
    check(
        squared_ok && chains_ok == 1000 && cleared == decoded && exact == scanned,
        format!(
            "boundary squared zero on {} complexes: {squared_ok}; random chains {chains_ok}/1000; \
             syndromes cleared {cleared}/{decoded}; single errors exact {exact}/{scanned}",
            complexes.len()
        ),
    )
}

/// Every single face error on the periodic 3x3x3 lattice must decode to an
/// empty residual. On the open 3x3x3 lattice, interior faces must too; a
/// face on the outer boundary may be exchanged for another outer face of
/// the same cube, which is equivalent up to the open boundary.
fn single_error_scan() -> (usize, usize) {
    let mut exact = 0;
    let mut scanned = 0;
    for c in [
        build_periodic_cubic(3, 3, 3).unwrap(),
        build_cubic(3, 3, 3, &[]).unwrap(),
    ] {
        let d = Decoder::new(c, DecoderKind::Mwpm, vec![]).unwrap();
        let g = d.graph();
        let c = d.complex();
        for q in g.face_qubits() {
            let face = g.qubits()[q].cell.unwrap();
            let e = ErrorPattern::new([q]);
            let residual = e.symmetric_difference(&d.correct(&e).unwrap().flipped);
            let cofaces = c.cofaces(face);
            let ok = if cofaces.len() == 2 {
                residual.is_empty()
            } else {
                let volume = cofaces[0];
                d.syndrome(&residual).unwrap().is_trivial()
                    && residual.len() <= 2
                    && residual.iter().all(|r| {
                        let f = g.qubits()[r].cell.unwrap();
                        c.cofaces(f) == [volume]
                    })
            };
            scanned += 1;
            exact += usize::from(ok);
        }
    }
    (exact, scanned)
}

fn periodic_size_scaling() -> Outcome {
    let trials = 100_000u64;
    let mut rates = BTreeMap::new();
    for l in [3usize, 5] {
        let cfg = SweepConfig {
            lattice: LatticeSpec::Cubic {
                dims: [l, l, l],
                periodic: true,
                defects: vec![],
            },
            protected: ProtectedSpec::Default,
            decoder: DecoderKind::Mwpm,
            p_grid: vec![0.01],
            trials,
            seed: 7_000 + l as u64,
            noise: NoiseSpec::default(),
            interval: IntervalKind::Normal,
        };
        let row = run_sweep(&cfg).unwrap().rows.remove(0);
        rates.insert(l, (row.estimate, row.stderr, row.failures));
    }
    let (r3, se3, f3) = rates[&3];
    let (r5, se5, f5) = rates[&5];
    let margin = SIZE_SIGMAS * (se3 * se3 + se5 * se5).sqrt();
    check(
        r3 - r5 > margin,
        format!(
            "p=0.01 logical failure L=3 {r3:.5} ({f3}/{trials}) vs L=5 {r5:.5} ({f5}/{trials}); \
             gap {:.5} vs 3-sigma margin {margin:.5}",
            r3 - r5
        ),
    )
}
