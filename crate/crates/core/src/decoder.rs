//! Syndrome extraction and decoding.
//!
//! Every retained volume `V` yields one syndrome bit, the parity of the
//! X outcomes on the faces of `∂V`. A Z error on a face qubit flips the bit
//! of each volume it bounds, so flagged volumes mark the endpoints of error
//! chains. Corrections are sign flips on classical outcomes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, CellId, Chain, LatticeKind};
use crate::error::{Error, Result};
use crate::graphstate::InteractionGraph;
use crate::noise::ErrorPattern;

/// Above this many flagged volumes the matching falls back to greedy
/// pairing plus local improvement.
pub const EXACT_MATCHING_LIMIT: usize = 20;

/// Per-volume syndrome values, `+1` or `-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Syndrome {
    values: BTreeMap<CellId, i8>,
}

impl Syndrome {
    pub fn new(values: BTreeMap<CellId, i8>) -> Result<Self> {
        if let Some((v, s)) = values.iter().find(|(_, s)| **s != 1 && **s != -1) {
            return Err(Error::MalformedSyndrome(format!(
                "volume {v} has value {s}"
            )));
        }
        Ok(Self { values })
    }

    pub fn get(&self, volume: CellId) -> Option<i8> {
        self.values.get(&volume).copied()
    }

    pub fn values(&self) -> &BTreeMap<CellId, i8> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Volumes reporting `-1`, in id order.
    pub fn flagged(&self) -> impl Iterator<Item = CellId> + '_ {
        self.values
            .iter()
            .filter(|(_, &s)| s == -1)
            .map(|(&v, _)| v)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&s| s == 1)
    }
}

/// Classical sign flips to apply to measurement outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub flipped: ErrorPattern,
    /// The dual syndrome fired: an edge-qubit error was seen but not located.
    pub detected_uncorrectable: bool,
    /// Matching fell back to the greedy heuristic.
    pub approximate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeReport {
    pub syndrome: Syndrome,
    pub correction: Vec<usize>,
    pub residual: Vec<usize>,
    /// All protected surfaces kept their sign.
    pub success: bool,
    pub surface_success: Vec<bool>,
    pub detected_uncorrectable: bool,
    pub approximate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    LookupL8,
    Mwpm,
    /// Applies no correction.
    None,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::LookupL8 => "lookup_l8",
            DecoderKind::Mwpm => "mwpm",
            DecoderKind::None => "none",
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lookup_l8" | "lookup" => Ok(DecoderKind::LookupL8),
            "mwpm" => Ok(DecoderKind::Mwpm),
            "none" => Ok(DecoderKind::None),
            other => Err(Error::InvalidConfig(format!("unknown decoder {other}"))),
        }
    }
}

/// Which face qubits bound each retained volume.
#[derive(Clone, Debug)]
pub struct SyndromeMap {
    volumes: Vec<CellId>,
    // volume indices bounded by each qubit (empty for edge qubits)
    qubit_volumes: Vec<Vec<usize>>,
}

impl SyndromeMap {
    pub fn new(complex: &CellComplex, graph: &InteractionGraph) -> Self {
        let volumes: Vec<CellId> = complex.retained_ids(3).collect();
        let mut qubit_volumes = vec![Vec::new(); graph.len()];
        for (k, &v) in volumes.iter().enumerate() {
            for &f in &complex.cell(v).expect("volume exists").boundary {
                let q = graph
                    .qubit_of_cell(f)
                    .expect("retained volumes only touch present face qubits");
                qubit_volumes[q].push(k);
            }
        }
        Self {
            volumes,
            qubit_volumes,
        }
    }

    pub fn volumes(&self) -> &[CellId] {
        &self.volumes
    }

    /// Indices (into [`Self::volumes`]) of volumes with odd error overlap.
    pub fn flagged(&self, error: &ErrorPattern) -> Vec<usize> {
        let mut parity = vec![false; self.volumes.len()];
        for q in error.iter() {
            for &k in &self.qubit_volumes[q] {
                parity[k] ^= true;
            }
        }
        parity
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn syndrome(&self, error: &ErrorPattern) -> Syndrome {
        let mut values: BTreeMap<CellId, i8> = self.volumes.iter().map(|&v| (v, 1)).collect();
        for k in self.flagged(error) {
            values.insert(self.volumes[k], -1);
        }
        Syndrome { values }
    }
}

/// Per-volume syndrome of an error pattern: `(-1)^{|e ∩ ∂V|}`.
pub fn extract_syndrome(
    complex: &CellComplex,
    graph: &InteractionGraph,
    error: &ErrorPattern,
) -> Result<Syndrome> {
    error.check(graph.len())?;
    Ok(SyndromeMap::new(complex, graph).syndrome(error))
}

/// Volume ids of `v, w, y, z` and qubit ids of `1, 3, 4, 1', 3', 4'` in the
/// complex built by [`crate::build_l8`].
const L8_VOLUMES: [CellId; 4] = [10, 11, 12, 13];
const L8_FACE_QUBITS: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// Table lookup on the four L8 syndromes `(C13, C34, C1'3', C3'4')`, which
/// are the volumes `(w, v, y, z)`. `dual` is the `X2 X2'` parity.
pub fn decode_lookup_l8(syndrome: &Syndrome, dual: i8) -> Result<Correction> {
    if syndrome.len() != 4 || L8_VOLUMES.iter().any(|v| syndrome.get(*v).is_none()) {
        return Err(Error::MalformedSyndrome(
            "expected the four L8 volumes v, w, y, z".into(),
        ));
    }
    if dual != 1 && dual != -1 {
        return Err(Error::MalformedSyndrome(format!("dual bit {dual}")));
    }
    let [v, w, y, z] = L8_VOLUMES.map(|id| syndrome.get(id).unwrap());
    let side = |a: i8, b: i8, qubits: [usize; 3]| match (a, b) {
        (-1, 1) => Some(qubits[0]),
        (-1, -1) => Some(qubits[1]),
        (1, -1) => Some(qubits[2]),
        _ => None,
    };
    let [q1, q3, q4, p1, p3, p4] = L8_FACE_QUBITS;
    let flipped = side(w, v, [q1, q3, q4])
        .into_iter()
        .chain(side(y, z, [p1, p3, p4]));
    Ok(Correction {
        flipped: ErrorPattern::new(flipped),
        detected_uncorrectable: dual == -1,
        approximate: false,
    })
}

/// Volume adjacency graph for matching. Volumes share a graph edge per common
/// face; a face with a single retained volume links it to one terminal node
/// standing for the lattice boundary and any carved-out region.
#[derive(Clone, Debug)]
pub struct MatchingGraph {
    nodes: usize,
    terminal: Option<usize>,
    // distances[s * (nodes + 1) + t], u32::MAX when unreachable
    distances: Vec<u32>,
    // (previous node, qubit) on a shortest path from s
    parents: Vec<(u32, u32)>,
}

const UNREACHABLE: u32 = u32::MAX;

impl MatchingGraph {
    pub fn new(map: &SyndromeMap) -> Self {
        let nodes = map.volumes.len();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes + 1];
        let mut has_terminal = false;
        for (q, vols) in map.qubit_volumes.iter().enumerate() {
            match vols.as_slice() {
                [a, b] => {
                    adjacency[*a].push((*b, q));
                    adjacency[*b].push((*a, q));
                }
                [a] => {
                    has_terminal = true;
                    adjacency[*a].push((nodes, q));
                    adjacency[nodes].push((*a, q));
                }
                _ => {}
            }
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(n, q)| (q, n));
        }
        let width = nodes + 1;
        let mut distances = vec![UNREACHABLE; nodes * width];
        let mut parents = vec![(u32::MAX, u32::MAX); nodes * width];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..nodes {
            let row = s * width;
            distances[row + s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if u == nodes {
                    continue;
                }
                let du = distances[row + u];
                for &(w, q) in &adjacency[u] {
                    if distances[row + w] == UNREACHABLE {
                        distances[row + w] = du + 1;
                        parents[row + w] = (u as u32, q as u32);
                        queue.push_back(w);
                    }
                }
            }
        }
        Self {
            nodes,
            terminal: has_terminal.then_some(nodes),
            distances,
            parents,
        }
    }

    pub fn has_terminal(&self) -> bool {
        self.terminal.is_some()
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<u32> {
        let d = self.distances[a * (self.nodes + 1) + b];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn distance_to_terminal(&self, a: usize) -> Option<u32> {
        self.terminal.and_then(|t| self.distance(a, t))
    }

    fn path_qubits(&self, source: usize, target: usize, out: &mut ErrorPattern) {
        let row = source * (self.nodes + 1);
        let mut node = target;
        while node != source {
            let (prev, q) = self.parents[row + node];
            out.toggle(q as usize);
            node = prev as usize;
        }
    }

    /// Pairs flagged volumes (indices into the syndrome map) with each other
    /// or with the terminal at minimum total path length.
    pub fn decode(&self, flagged: &[usize]) -> Result<Correction> {
        let mut flipped = ErrorPattern::default();
        if flagged.is_empty() {
            return Ok(Correction::default());
        }
        if self.terminal.is_none() && flagged.len() % 2 == 1 {
            return Err(Error::OddDefectParity(flagged.len()));
        }
        let costs = PairCosts::new(self, flagged);
        let (pairs, approximate) = if flagged.len() <= EXACT_MATCHING_LIMIT {
            (costs.exact(&(0..flagged.len()).collect::<Vec<_>>())?, false)
        } else {
            (costs.greedy_improved()?, true)
        };
        for (a, b) in pairs {
            match b {
                Some(b) => self.path_qubits(flagged[a], flagged[b], &mut flipped),
                None => self.path_qubits(
                    flagged[a],
                    self.terminal.expect("terminal match needs a terminal"),
                    &mut flipped,
                ),
            }
        }
        Ok(Correction {
            flipped,
            detected_uncorrectable: false,
            approximate,
        })
    }
}

const INF: u64 = u64::MAX / 4;

struct PairCosts {
    n: usize,
    pair: Vec<u64>,
    terminal: Vec<u64>,
}

type Matching = Vec<(usize, Option<usize>)>;

impl PairCosts {
    fn new(graph: &MatchingGraph, flagged: &[usize]) -> Self {
        let n = flagged.len();
        let mut pair = vec![INF; n * n];
        for i in 0..n {
            for j in 0..n {
                if let Some(d) = graph.distance(flagged[i], flagged[j]) {
                    pair[i * n + j] = d as u64;
                }
            }
        }
        let terminal = flagged
            .iter()
            .map(|&a| graph.distance_to_terminal(a).map_or(INF, u64::from))
            .collect();
        Self { n, pair, terminal }
    }

    fn cost(&self, m: &(usize, Option<usize>)) -> u64 {
        match m.1 {
            Some(b) => self.pair[m.0 * self.n + b],
            None => self.terminal[m.0],
        }
    }

    /// Exact minimum over all matchings of `items` by dynamic programming on
    /// subsets. Candidates for the lowest unmatched item are tried in order
    /// partner ascending, terminal last; the first minimum wins.
    fn exact(&self, items: &[usize]) -> Result<Matching> {
        let k = items.len();
        let full = (1usize << k) - 1;
        let mut best = vec![INF; full + 1];
        let mut choice = vec![u8::MAX; full + 1];
        best[0] = 0;
        for mask in 1..=full {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut bits = rest;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let sub = best[rest & !(1 << j)];
                let c = self.pair[items[i] * self.n + items[j]];
                if sub < INF && c < INF && sub + c < best[mask] {
                    best[mask] = sub + c;
                    choice[mask] = j as u8;
                }
            }
            let c = self.terminal[items[i]];
            if best[rest] < INF && c < INF && best[rest] + c < best[mask] {
                best[mask] = best[rest] + c;
                choice[mask] = i as u8;
            }
        }
        if best[full] >= INF {
            return Err(Error::MalformedSyndrome(
                "flagged volumes cannot be matched".into(),
            ));
        }
        let mut out = Vec::with_capacity(k);
        let mut mask = full;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            let j = choice[mask] as usize;
            if j == i {
                out.push((items[i], None));
                mask &= !(1 << i);
            } else {
                out.push((items[i], Some(items[j])));
                mask &= !(1 << i) & !(1 << j);
            }
        }
        Ok(out)
    }

    /// Greedy closest-first matching, then re-matching every two matched
    /// groups exactly until no pair of groups improves.
    fn greedy_improved(&self) -> Result<Matching> {
        let n = self.n;
        let mut candidates: Vec<(u64, usize, usize)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                candidates.push((self.pair[i * n + j], i, j));
            }
            // terminal encoded as partner n
            candidates.push((self.terminal[i], i, n));
        }
        candidates.sort_unstable();
        let mut used = vec![false; n];
        let mut matching: Matching = Vec::new();
        for (c, i, j) in candidates {
            if c >= INF || used[i] || (j < n && used[j]) {
                continue;
            }
            used[i] = true;
            if j < n {
                used[j] = true;
                matching.push((i, Some(j)));
            } else {
                matching.push((i, None));
            }
        }
        if used.iter().any(|u| !u) {
            return Err(Error::MalformedSyndrome(
                "flagged volumes cannot be matched".into(),
            ));
        }
        let mut improved = true;
        while improved {
            improved = false;
            'outer: for a in 0..matching.len() {
                for b in a + 1..matching.len() {
                    let before = self.cost(&matching[a]) + self.cost(&matching[b]);
                    let mut items: Vec<usize> = [matching[a], matching[b]]
                        .iter()
                        .flat_map(|&(x, y)| std::iter::once(x).chain(y))
                        .collect();
                    items.sort_unstable();
                    let Ok(local) = self.exact(&items) else {
                        continue;
                    };
                    let after: u64 = local.iter().map(|m| self.cost(m)).sum();
                    if after < before {
                        matching.remove(b);
                        matching.remove(a);
                        matching.extend(local);
                        improved = true;
                        break 'outer;
                    }
                }
            }
        }
        Ok(matching)
    }
}

/// Minimum-weight matching decode of a full syndrome on a lattice complex.
pub fn decode_mwpm(
    complex: &CellComplex,
    graph: &InteractionGraph,
    syndrome: &Syndrome,
) -> Result<Correction> {
    let map = SyndromeMap::new(complex, graph);
    if syndrome.len() != map.volumes.len() {
        return Err(Error::MalformedSyndrome(format!(
            "{} syndrome bits for {} volumes",
            syndrome.len(),
            map.volumes.len()
        )));
    }
    let mut flagged = Vec::new();
    for (k, v) in map.volumes.iter().enumerate() {
        match syndrome.get(*v) {
            Some(-1) => flagged.push(k),
            Some(_) => {}
            None => return Err(Error::MalformedSyndrome(format!("missing volume {v}"))),
        }
    }
    MatchingGraph::new(&map).decode(&flagged)
}

/// True iff the residual overlaps the protected surface evenly.
pub fn logical_success(
    complex: &CellComplex,
    graph: &InteractionGraph,
    protected: &Chain,
    residual: &ErrorPattern,
) -> Result<bool> {
    if protected.dim() != 2 {
        return Err(Error::DimensionMismatch(protected.dim(), 2));
    }
    if !complex.is_cycle(protected)? {
        return Err(Error::NotACycle);
    }
    let mut overlap = 0;
    for f in protected.iter() {
        let q = graph.qubit_of_cell(f).ok_or(Error::RemovedQubit(f))?;
        overlap += residual.contains(q) as usize;
    }
    Ok(overlap % 2 == 0)
}

/// Complex, graph, decoder and protected surfaces bundled for repeated use.
#[derive(Clone, Debug)]
pub struct Decoder {
    kind: DecoderKind,
    complex: CellComplex,
    graph: InteractionGraph,
    map: SyndromeMap,
    matching: Option<MatchingGraph>,
    protected: Vec<Chain>,
    protected_qubits: Vec<Vec<usize>>,
}

impl Decoder {
    pub fn new(complex: CellComplex, kind: DecoderKind, protected: Vec<Chain>) -> Result<Self> {
        match (kind, complex.kind()) {
            (DecoderKind::LookupL8, LatticeKind::L8) | (DecoderKind::None, _) => {}
            (DecoderKind::Mwpm, k) if k.is_cubic() => {}
            (k, lattice) => {
                return Err(Error::DecoderMismatch {
                    decoder: k.name().into(),
                    lattice: lattice.name(),
                })
            }
        }
        let graph = InteractionGraph::from_complex(&complex);
        let mut protected_qubits = Vec::with_capacity(protected.len());
        for surface in &protected {
            if surface.dim() != 2 {
                return Err(Error::DimensionMismatch(surface.dim(), 2));
            }
            if !complex.is_cycle(surface)? {
                return Err(Error::NotACycle);
            }
            protected_qubits.push(
                surface
                    .iter()
                    .map(|f| graph.qubit_of_cell(f).ok_or(Error::RemovedQubit(f)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let map = SyndromeMap::new(&complex, &graph);
        let matching = (kind == DecoderKind::Mwpm).then(|| MatchingGraph::new(&map));
        Ok(Self {
            kind,
            complex,
            graph,
            map,
            matching,
            protected,
            protected_qubits,
        })
    }

    pub fn kind(&self) -> DecoderKind {
        self.kind
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    pub fn syndrome_map(&self) -> &SyndromeMap {
        &self.map
    }

    pub fn matching_graph(&self) -> Option<&MatchingGraph> {
        self.matching.as_ref()
    }

    pub fn protected(&self) -> &[Chain] {
        &self.protected
    }

    pub fn protected_qubits(&self) -> &[Vec<usize>] {
        &self.protected_qubits
    }

    pub fn syndrome(&self, error: &ErrorPattern) -> Result<Syndrome> {
        error.check(self.graph.len())?;
        Ok(self.map.syndrome(error))
    }

    /// Parity of the error on edge qubits, which is what `X2 X2'` reports on
    /// L8. Lattices without a dual check report `+1`.
    pub fn dual_bit(&self, error: &ErrorPattern) -> i8 {
        if self.kind != DecoderKind::LookupL8 {
            return 1;
        }
        let odd = self
            .graph
            .edge_qubits()
            .filter(|&q| error.contains(q))
            .count()
            % 2
            == 1;
        if odd {
            -1
        } else {
            1
        }
    }

    pub fn correct(&self, error: &ErrorPattern) -> Result<Correction> {
        error.check(self.graph.len())?;
        match self.kind {
            DecoderKind::None => Ok(Correction::default()),
            DecoderKind::LookupL8 => {
                decode_lookup_l8(&self.map.syndrome(error), self.dual_bit(error))
            }
            DecoderKind::Mwpm => self
                .matching
                .as_ref()
                .expect("mwpm decoder has a matching graph")
                .decode(&self.map.flagged(error)),
        }
    }

    /// Decodes and reports whether every protected surface kept its sign.
    pub fn trial(&self, error: &ErrorPattern) -> Result<bool> {
        let correction = self.correct(error)?;
        let residual = error.symmetric_difference(&correction.flipped);
        Ok(self
            .protected_qubits
            .iter()
            .all(|qs| qs.iter().filter(|&&q| residual.contains(q)).count() % 2 == 0))
    }

    pub fn report(&self, error: &ErrorPattern) -> Result<DecodeReport> {
        let syndrome = self.syndrome(error)?;
        let correction = self.correct(error)?;
        let residual = error.symmetric_difference(&correction.flipped);
        let surface_success = self
            .protected_qubits
            .iter()
            .map(|qs| qs.iter().filter(|&&q| residual.contains(q)).count() % 2 == 0)
            .collect::<Vec<_>>();
        Ok(DecodeReport {
            syndrome,
            correction: correction.flipped.iter().collect(),
            residual: residual.iter().collect(),
            success: surface_success.iter().all(|&s| s),
            surface_success,
            detected_uncorrectable: correction.detected_uncorrectable,
            approximate: correction.approximate,
        })
    }
}
