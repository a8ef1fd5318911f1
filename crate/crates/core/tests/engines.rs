use topocluster::decoder::{decode_mwpm, extract_syndrome};
use topocluster::graphstate::surface_operator;
use topocluster::montecarlo::{
    default_protected, run_sweep, IntervalKind, LatticeSpec, NoiseSpec, ProtectedSpec, SweepConfig,
};
use topocluster::{
    build_cubic, build_l8, CellComplex, Decoder, DecoderKind, DefectSpec, ErrorPattern, Frame,
    InteractionGraph, PauliOp, StabilizerGroup, StateVector,
};

const TOL: f64 = topocluster::TOLERANCE;

#[test]
fn frame_duality_on_all_face_patterns() {
    let c = build_l8();
    let graph = InteractionGraph::from_complex(&c);
    let cluster = StateVector::prepare_graph_state(&graph).unwrap();
    let lab = StateVector::prepare_lab_state();
    let x11 = PauliOp::x_on(8, [0, 3]);
    let z11 = PauliOp::z_on(8, [0, 3]);
    let faces: Vec<usize> = graph.face_qubits().collect();
    for mask in 0..64u64 {
        let e = ErrorPattern::from_mask(mask, &faces);
        let mut a = cluster.clone();
        a.apply_flips(&e, Frame::Abstract).unwrap();
        let mut b = lab.clone();
        b.apply_flips(&e, Frame::Lab).unwrap();
        let want = if e.contains(0) ^ e.contains(3) {
            -1.0
        } else {
            1.0
        };
        assert!((a.expectation_pauli(&x11).unwrap() - want).abs() < TOL);
        assert!((b.expectation_pauli(&z11).unwrap() - want).abs() < TOL);
    }
}

#[test]
fn lab_correlations_follow_rotated_stabilizers() {
    // the lab state is H^⊗8 |G8⟩, so Z-type lab correlations are the X-type
    // cluster correlations
    let graph = InteractionGraph::from_complex(&build_l8());
    let group = StabilizerGroup::from_graph(&graph);
    let lab = StateVector::prepare_lab_state();
    for mask in 0..256u64 {
        let qubits: Vec<usize> = (0..8).filter(|q| mask >> q & 1 == 1).collect();
        let want = group
            .correlation(&PauliOp::x_on(8, qubits.iter().copied()))
            .unwrap();
        let got = lab.expectation_pauli(&PauliOp::z_on(8, qubits)).unwrap();
        assert!((got - want as f64).abs() < TOL, "mask {mask:#x}");
    }
    let m0 = PauliOp::x_on(8, 0..8);
    let want = group.correlation(&PauliOp::z_on(8, 0..8)).unwrap();
    assert!((lab.expectation_pauli(&m0).unwrap() - want as f64).abs() < TOL);
}

#[test]
fn defect_surface_correlation_is_protected() {
    let c = build_cubic(
        4,
        4,
        3,
        &[DefectSpec::Line {
            x: 1,
            y: 1,
            z_from: 1,
            z_to: 2,
        }],
    )
    .unwrap();
    let surfaces = default_protected(&c);
    assert_eq!(surfaces.len(), 1);
    let graph = InteractionGraph::from_complex(&c);
    let group = StabilizerGroup::from_graph(&graph);
    let op = surface_operator(&c, &graph, &surfaces[0]).unwrap();
    assert_eq!(group.correlation(&op).unwrap(), 1);

    let through = build_cubic(
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
    .unwrap();
    assert!(default_protected(&through).is_empty());
}

fn mwpm_on(c: CellComplex) -> Decoder {
    let protected = default_protected(&c);
    Decoder::new(c, DecoderKind::Mwpm, protected).unwrap()
}

#[test]
fn free_function_decoder_matches_bundle() {
    let d = mwpm_on(build_cubic(3, 3, 3, &[]).unwrap());
    let e = ErrorPattern::new([1, 7, 20, 33]);
    let s = extract_syndrome(d.complex(), d.graph(), &e).unwrap();
    assert_eq!(s, d.syndrome(&e).unwrap());
    let a = decode_mwpm(d.complex(), d.graph(), &s).unwrap();
    let b = d.correct(&e).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let cfg = SweepConfig {
        lattice: LatticeSpec::Cubic {
            dims: [3, 3, 3],
            periodic: true,
            defects: vec![],
        },
        protected: ProtectedSpec::Default,
        decoder: DecoderKind::Mwpm,
        p_grid: vec![0.02, 0.05],
        trials: 2_000,
        seed: 99,
        noise: NoiseSpec::default(),
        interval: IntervalKind::ClopperPearson,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_sweep(&cfg).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert_eq!(one.to_csv(), four.to_csv());
    for row in &one.rows {
        let (lo, hi) = row.interval.unwrap();
        assert!(lo <= row.estimate && row.estimate <= hi);
    }
}

#[test]
fn uncorrected_l8_sweep_tracks_closed_form() {
    let cfg = SweepConfig {
        lattice: LatticeSpec::L8,
        protected: ProtectedSpec::Default,
        decoder: DecoderKind::None,
        p_grid: vec![0.1, 0.3],
        trials: 20_000,
        seed: 5,
        noise: NoiseSpec::default(),
        interval: IntervalKind::Normal,
    };
    for row in run_sweep(&cfg).unwrap().rows {
        let want = row.analytic_uncorrected.unwrap();
        assert!((row.estimate - want).abs() < 4.0 * row.stderr.max(1e-3));
    }
}
