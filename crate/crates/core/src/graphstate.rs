//! Cluster states of cell complexes in the stabilizer formalism.
//!
//! A complex defines an interaction graph with one qubit per face and edge,
//! joined when the edge lies on the boundary of the face. The cluster state
//! is the joint +1 eigenstate of the generators `K_a = X_a ∏_{b ~ a} Z_b`.
//! Pauli operators are kept in binary symplectic form with an exact sign, so
//! correlations are decided by GF(2) elimination without any numerics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::{BitVec, RowSpace};
use crate::complex::{CellComplex, CellId, Chain};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitKind {
    Face,
    Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Qubit {
    pub id: usize,
    pub kind: QubitKind,
    pub cell: Option<CellId>,
    pub label: String,
}

/// Graph whose vertices are qubits. Face qubits come first in cell-id
/// order, followed by edge qubits.
#[derive(Clone, Debug)]
pub struct InteractionGraph {
    qubits: Vec<Qubit>,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    by_cell: HashMap<CellId, usize>,
}

impl InteractionGraph {
    /// Plain graph on `n` qubits, all reported as face qubits without a cell.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let qubits = (0..n)
            .map(|id| Qubit {
                id,
                kind: QubitKind::Face,
                cell: None,
                label: format!("q{id}"),
            })
            .collect();
        Self::assemble(qubits, edges)
    }

    fn assemble(
        qubits: Vec<Qubit>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = qubits.len();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n {
                return Err(Error::InvalidQubit(a));
            }
            if b >= n {
                return Err(Error::InvalidQubit(b));
            }
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &set {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let by_cell = qubits
            .iter()
            .filter_map(|q| q.cell.map(|c| (c, q.id)))
            .collect();
        Ok(Self {
            qubits,
            edges: set,
            neighbors,
            by_cell,
        })
    }

    /// One qubit per face and edge that has not been removed; a face qubit
    /// and an edge qubit interact iff the edge bounds the face.
    pub fn from_complex(complex: &CellComplex) -> Self {
        let mut qubits = Vec::new();
        for (kind, dim) in [(QubitKind::Face, 2), (QubitKind::Edge, 1)] {
            for &cell in complex.ids_of_dim(dim) {
                if complex.is_removed(cell) {
                    continue;
                }
                let label = complex
                    .label_of(cell)
                    .map(str::to_string)
                    .unwrap_or_else(|| format!("c{cell}"));
                qubits.push(Qubit {
                    id: qubits.len(),
                    kind,
                    cell: Some(cell),
                    label,
                });
            }
        }
        let index: HashMap<CellId, usize> = qubits
            .iter()
            .map(|q| (q.cell.expect("complex qubit"), q.id))
            .collect();
        let mut edges = Vec::new();
        for q in qubits.iter().filter(|q| q.kind == QubitKind::Face) {
            let face = complex.cell(q.cell.unwrap()).expect("face exists");
            for b in &face.boundary {
                if let Some(&e) = index.get(b) {
                    edges.push((q.id, e));
                }
            }
        }
        Self::assemble(qubits, edges).expect("indices come from the qubit list")
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.neighbors[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.neighbors[q].len()
    }

    pub fn qubit_of_cell(&self, cell: CellId) -> Option<usize> {
        self.by_cell.get(&cell).copied()
    }

    pub fn face_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.qubits
            .iter()
            .filter(|q| q.kind == QubitKind::Face)
            .map(|q| q.id)
    }

    pub fn edge_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.qubits
            .iter()
            .filter(|q| q.kind == QubitKind::Edge)
            .map(|q| q.id)
    }

    /// Short display name: the cell label without its `f`/`e` prefix when
    /// that is unambiguous (so L8 qubits read `1, 3, 4, 1', 3', 4', 2, 2'`).
    pub fn short_label(&self, q: usize) -> String {
        let label = &self.qubits[q].label;
        let stripped = label
            .strip_prefix('f')
            .or_else(|| label.strip_prefix('e'))
            .unwrap_or(label);
        let clashes = self
            .qubits
            .iter()
            .filter(|o| {
                o.label
                    .strip_prefix('f')
                    .or_else(|| o.label.strip_prefix('e'))
                    .unwrap_or(&o.label)
                    == stripped
            })
            .count();
        if clashes == 1 {
            stripped.to_string()
        } else {
            label.clone()
        }
    }

    /// Resolves a qubit by short label, full cell label, or numeric index.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        if let Some(q) = (0..self.len()).find(|&q| self.short_label(q) == name) {
            return Ok(q);
        }
        if let Some(q) = self.qubits.iter().find(|q| q.label == name) {
            return Ok(q.id);
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.len() => Ok(i),
            _ => Err(Error::InvalidSpec(format!("unknown qubit {name}"))),
        }
    }
}

/// A Hermitian Pauli operator `±σ_0 ⊗ … ⊗ σ_{n-1}`. Bit `(x, z)` per qubit
/// selects `I, X, Z, Y` for `(0,0), (1,0), (0,1), (1,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVec,
    z: BitVec,
    negative: bool,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, sign: i8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::QubitCountMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self {
            x,
            z,
            negative: sign < 0,
        })
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVec::from_indices(n, qubits),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::from_indices(n, qubits),
            negative: false,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            negative: !self.negative,
            ..self.clone()
        }
    }

    pub fn weight(&self) -> usize {
        (0..self.n())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .count()
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    pub fn factor(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)).is_multiple_of(2)
    }

    /// Product `self · other`; fails when the phase would be `±i`, which
    /// happens exactly when the two operators anticommute.
    pub fn product(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n() != other.n() {
            return Err(Error::QubitCountMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let mut phase: i32 = 0;
        for q in 0..self.n() {
            phase += pauli_phase(self.x.get(q), self.z.get(q), other.x.get(q), other.z.get(q));
        }
        let phase = phase.rem_euclid(4);
        if phase % 2 == 1 {
            return Err(Error::ImaginaryPhase);
        }
        let mut x = self.x.clone();
        x.xor_with(&other.x);
        let mut z = self.z.clone();
        z.xor_with(&other.z);
        Ok(PauliOp {
            x,
            z,
            negative: self.negative ^ other.negative ^ (phase == 2),
        })
    }

    /// Symplectic row `(x | z)` of length `2n`.
    pub fn symplectic(&self) -> BitVec {
        let n = self.n();
        BitVec::from_indices(
            2 * n,
            self.x.iter_ones().chain(self.z.iter_ones().map(|q| q + n)),
        )
    }
}

// exponent of i in σ(x1,z1)·σ(x2,z2) = i^g σ(x1^x2, z1^z2)
fn pauli_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2i, z2i) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2i - x2i,
        (true, false) => z2i * (2 * x2i - 1),
        (false, true) => x2i * (1 - 2 * z2i),
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        for q in 0..self.n() {
            write!(f, "{}", self.factor(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = if let Some(rest) = s.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix('\u{2212}') {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (false, rest)
        } else {
            (false, s)
        };
        let n = body.chars().count();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                other => return Err(Error::PauliParse(format!("unexpected {other:?} in {s:?}"))),
            }
        }
        Ok(PauliOp { x, z, negative })
    }
}

/// The stabilizer group of a graph state, one generator per qubit.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    generators: Vec<PauliOp>,
    span: RowSpace,
}

impl StabilizerGroup {
    /// `K_a = X_a ⊗ Z_{N(a)}` for every qubit `a`.
    pub fn from_graph(graph: &InteractionGraph) -> Self {
        let n = graph.len();
        let generators = (0..n)
            .map(|a| PauliOp {
                x: BitVec::from_indices(n, [a]),
                z: BitVec::from_indices(n, graph.neighbors(a).iter().copied()),
                negative: false,
            })
            .collect();
        Self::from_generators(generators).expect("graph-state generators commute")
    }

    /// Group generated by pairwise commuting, independent operators.
    pub fn from_generators(generators: Vec<PauliOp>) -> Result<Self> {
        let n = generators.first().map_or(0, PauliOp::n);
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::QubitCountMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            for h in &generators[..i] {
                if !g.commutes_with(h) {
                    return Err(Error::ImaginaryPhase);
                }
            }
        }
        let rows: Vec<BitVec> = generators.iter().map(PauliOp::symplectic).collect();
        let span = RowSpace::new(2 * n, &rows);
        Ok(Self { generators, span })
    }

    pub fn n(&self) -> usize {
        self.generators.first().map_or(0, PauliOp::n)
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn pairwise_commute(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, g)| self.generators[..i].iter().all(|h| g.commutes_with(h)))
    }

    /// Product of the generators selected by `subset`.
    pub fn element(&self, subset: &BitVec) -> PauliOp {
        let mut acc = PauliOp::identity(self.n());
        for k in subset.iter_ones() {
            acc = acc
                .product(&self.generators[k])
                .expect("stabilizer elements commute");
        }
        acc
    }

    /// Expectation of `op` on the stabilized state: `±1` when `±op` is in the
    /// group, `0` otherwise.
    pub fn correlation(&self, op: &PauliOp) -> Result<i8> {
        if op.n() != self.n() {
            return Err(Error::QubitCountMismatch {
                expected: self.n(),
                found: op.n(),
            });
        }
        let Some(combo) = self.span.solve(&op.symplectic()) else {
            return Ok(0);
        };
        let element = self.element(&combo);
        debug_assert_eq!((&element.x, &element.z), (&op.x, &op.z));
        Ok(element.sign() * op.sign())
    }
}

/// `X` on every face qubit of a face chain.
pub fn surface_operator(
    complex: &CellComplex,
    graph: &InteractionGraph,
    surface: &Chain,
) -> Result<PauliOp> {
    complex.validate(surface)?;
    if surface.dim() != 2 {
        return Err(Error::DimensionMismatch(surface.dim(), 2));
    }
    let mut qubits = Vec::with_capacity(surface.len());
    for f in surface.iter() {
        qubits.push(graph.qubit_of_cell(f).ok_or(Error::RemovedQubit(f))?);
    }
    Ok(PauliOp::x_on(graph.len(), qubits))
}
