//! Z2 cell complexes of dimension at most three.
//!
//! A complex is a list of cells (sites, edges, faces, volumes) with a mod-2
//! boundary map. Cell ids are dense and ordered by `(dim, z, y, x)` for
//! lattice complexes, so serialized complexes and test fixtures are stable.
//!
//! Defects are recorded as removed face or edge qubits. The uncarved complex
//! stays intact; homology queries run on the *retained* subcomplex, where a
//! cell survives only if it is not removed and its whole boundary survives.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bits::{BitVec, RowSpace};
use crate::error::{Error, Result};

pub type CellId = usize;

/// Boundary convention written into every serialized lattice header.
pub const OPEN_BOUNDARY_CONVENTION: &str =
    "open: boundary faces and edges retained, exterior is not a cell";
pub const PERIODIC_BOUNDARY_CONVENTION: &str = "periodic: 3-torus, no boundary";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub dim: u8,
    pub boundary: Vec<CellId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Which construction produced a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeKind {
    Elementary,
    L8,
    Cubic { dims: [usize; 3], periodic: bool },
    Custom,
}

impl LatticeKind {
    pub fn name(&self) -> String {
        match self {
            LatticeKind::Elementary => "elementary".into(),
            LatticeKind::L8 => "l8".into(),
            LatticeKind::Cubic { dims, periodic } => format!(
                "cubic {}x{}x{}{}",
                dims[0],
                dims[1],
                dims[2],
                if *periodic { " periodic" } else { "" }
            ),
            LatticeKind::Custom => "custom".into(),
        }
    }

    pub fn is_cubic(&self) -> bool {
        matches!(self, LatticeKind::Cubic { .. } | LatticeKind::Elementary)
    }
}

/// A qubit removal on a cubic lattice. Coordinates are doubled: a cell at
/// `(cx, cy, cz)` has odd entries along the axes it extends in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DefectSpec {
    Face {
        coords: [usize; 3],
    },
    Edge {
        coords: [usize; 3],
    },
    /// Removes the horizontal face qubits inside the column of volumes at
    /// `(x, y)` for face heights `z_from..=z_to`, carving a hole along t.
    Line {
        x: usize,
        y: usize,
        z_from: usize,
        z_to: usize,
    },
}

/// A mod-2 formal sum of same-dimension cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    dim: u8,
    support: BTreeSet<CellId>,
}

impl Chain {
    pub fn new(dim: u8, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut support = BTreeSet::new();
        for c in cells {
            if !support.insert(c) {
                support.remove(&c);
            }
        }
        Self { dim, support }
    }

    pub fn empty(dim: u8) -> Self {
        Self {
            dim,
            support: BTreeSet::new(),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn support(&self) -> &BTreeSet<CellId> {
        &self.support
    }

    pub fn iter(&self) -> impl Iterator<Item = CellId> + '_ {
        self.support.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.support.contains(&id)
    }

    pub fn toggle(&mut self, id: CellId) {
        if !self.support.insert(id) {
            self.support.remove(&id);
        }
    }

    /// Mod-2 sum.
    pub fn sum(&self, other: &Chain) -> Result<Chain> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Chain {
            dim: self.dim,
            support: self
                .support
                .symmetric_difference(&other.support)
                .copied()
                .collect(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    kind: LatticeKind,
    cells: Vec<Cell>,
    by_dim: [Vec<CellId>; 4],
    // position of each cell within its dimension class
    rank_in_dim: Vec<usize>,
    cofaces: Vec<Vec<CellId>>,
    removed: BTreeSet<CellId>,
    retained: Vec<bool>,
    labels: HashMap<String, CellId>,
    coords: Option<Vec<[usize; 3]>>,
}

impl CellComplex {
    /// Validates and indexes a cell list. Ids must equal list positions.
    pub fn from_cells(
        kind: LatticeKind,
        cells: Vec<Cell>,
        removed: impl IntoIterator<Item = CellId>,
    ) -> Result<Self> {
        let mut by_dim: [Vec<CellId>; 4] = Default::default();
        let mut rank_in_dim = Vec::with_capacity(cells.len());
        let mut labels = HashMap::new();
        for (pos, cell) in cells.iter().enumerate() {
            if cell.id != pos {
                return Err(Error::InvalidComplex(format!(
                    "cell at position {pos} has id {}",
                    cell.id
                )));
            }
            if cell.dim > 3 {
                return Err(Error::InvalidComplex(format!(
                    "cell {} has dimension {}",
                    cell.id, cell.dim
                )));
            }
            if (cell.dim == 0) != cell.boundary.is_empty() {
                return Err(Error::InvalidComplex(format!(
                    "cell {} of dimension {} has {} boundary cells",
                    cell.id,
                    cell.dim,
                    cell.boundary.len()
                )));
            }
            rank_in_dim.push(by_dim[cell.dim as usize].len());
            by_dim[cell.dim as usize].push(cell.id);
            if let Some(l) = &cell.label {
                if labels.insert(l.clone(), cell.id).is_some() {
                    return Err(Error::InvalidComplex(format!("duplicate label {l}")));
                }
            }
        }
        let mut cofaces = vec![Vec::new(); cells.len()];
        for cell in &cells {
            let mut seen = BTreeSet::new();
            for &b in &cell.boundary {
                let Some(bc) = cells.get(b) else {
                    return Err(Error::InvalidComplex(format!(
                        "cell {} references missing cell {b}",
                        cell.id
                    )));
                };
                if bc.dim + 1 != cell.dim {
                    return Err(Error::InvalidComplex(format!(
                        "cell {} (dim {}) has boundary cell {b} of dim {}",
                        cell.id, cell.dim, bc.dim
                    )));
                }
                if !seen.insert(b) {
                    return Err(Error::InvalidComplex(format!(
                        "cell {} lists boundary cell {b} twice",
                        cell.id
                    )));
                }
                cofaces[b].push(cell.id);
            }
        }
        let removed: BTreeSet<CellId> = removed.into_iter().collect();
        for &r in &removed {
            match cells.get(r) {
                Some(c) if c.dim == 1 || c.dim == 2 => {}
                Some(c) => {
                    return Err(Error::InvalidComplex(format!(
                    "removed cell {r} has dimension {}, only face and edge qubits can be removed",
                    c.dim
                )))
                }
                None => return Err(Error::UnknownCell(r)),
            }
        }
        // cells are sorted by dimension in every construction here, but the
        // retained flags must not depend on that
        let mut retained = vec![true; cells.len()];
        for ids in &by_dim[1..=3] {
            for &id in ids {
                retained[id] =
                    !removed.contains(&id) && cells[id].boundary.iter().all(|&b| retained[b]);
            }
        }
        let complex = Self {
            kind,
            cells,
            by_dim,
            rank_in_dim,
            cofaces,
            removed,
            retained,
            labels,
            coords: None,
        };
        complex.check_boundary_squared()?;
        Ok(complex)
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell> {
        self.cells.get(id).ok_or(Error::UnknownCell(id))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn ids_of_dim(&self, dim: u8) -> &[CellId] {
        &self.by_dim[dim as usize]
    }

    pub fn count(&self, dim: u8) -> usize {
        self.by_dim[dim as usize].len()
    }

    /// Cells of dimension `dim + 1` whose boundary contains `id`.
    pub fn cofaces(&self, id: CellId) -> &[CellId] {
        &self.cofaces[id]
    }

    pub fn removed(&self) -> &BTreeSet<CellId> {
        &self.removed
    }

    pub fn is_removed(&self, id: CellId) -> bool {
        self.removed.contains(&id)
    }

    pub fn is_retained(&self, id: CellId) -> bool {
        self.retained[id]
    }

    pub fn retained_ids(&self, dim: u8) -> impl Iterator<Item = CellId> + '_ {
        self.by_dim[dim as usize]
            .iter()
            .copied()
            .filter(|&id| self.retained[id])
    }

    pub fn id_of_label(&self, label: &str) -> Option<CellId> {
        self.labels.get(label).copied()
    }

    pub fn label_of(&self, id: CellId) -> Option<&str> {
        self.cells.get(id).and_then(|c| c.label.as_deref())
    }

    /// Builds a chain from cell labels, checking they share a dimension.
    pub fn chain_from_labels(&self, labels: &[&str]) -> Result<Chain> {
        let mut ids = Vec::with_capacity(labels.len());
        for l in labels {
            ids.push(
                self.id_of_label(l)
                    .ok_or_else(|| Error::InvalidSpec(format!("unknown cell label {l}")))?,
            );
        }
        let dim = match ids.first() {
            Some(&id) => self.cells[id].dim,
            None => return Err(Error::InvalidSpec("empty label list".into())),
        };
        let chain = Chain::new(dim, ids);
        self.validate(&chain)?;
        Ok(chain)
    }

    /// Doubled lattice coordinates of a cell, for cubic complexes.
    pub fn coords_of(&self, id: CellId) -> Option<[usize; 3]> {
        self.coords.as_ref().and_then(|c| c.get(id).copied())
    }

    pub fn cell_at(&self, coords: [usize; 3]) -> Option<CellId> {
        let LatticeKind::Cubic { dims, periodic } = &self.kind else {
            if self.kind == LatticeKind::Elementary {
                return cubic_position([1, 1, 1], false, coords).map(|p| self.lookup_position(p));
            }
            return None;
        };
        cubic_position(*dims, *periodic, coords).map(|p| self.lookup_position(p))
    }

    fn lookup_position(&self, coords: [usize; 3]) -> CellId {
        // ids within a dimension follow (z, y, x) order
        let dim = coords.iter().filter(|c| *c % 2 == 1).count();
        let table = self.coords.as_ref().expect("cubic coordinates");
        let rank = self.by_dim[dim]
            .binary_search_by(|&id| {
                let c = table[id];
                (c[2], c[1], c[0]).cmp(&(coords[2], coords[1], coords[0]))
            })
            .expect("coordinate present in lattice");
        self.by_dim[dim][rank]
    }

    pub fn validate(&self, chain: &Chain) -> Result<()> {
        for id in chain.iter() {
            let cell = self.cells.get(id).ok_or(Error::UnknownCell(id))?;
            if cell.dim != chain.dim {
                return Err(Error::WrongDimension {
                    id,
                    expected: chain.dim,
                    found: cell.dim,
                });
            }
        }
        Ok(())
    }

    /// Mod-2 boundary of a chain.
    pub fn boundary(&self, chain: &Chain) -> Result<Chain> {
        self.validate(chain)?;
        if chain.dim == 0 {
            return Err(Error::NoBoundary(0));
        }
        let mut out = Chain::empty(chain.dim - 1);
        for id in chain.iter() {
            for &b in &self.cells[id].boundary {
                out.toggle(b);
            }
        }
        Ok(out)
    }

    pub fn is_cycle(&self, chain: &Chain) -> Result<bool> {
        Ok(self.boundary(chain)?.is_empty())
    }

    /// True iff `a ⊕ b` is the boundary of a chain of retained
    /// `(dim + 1)`-cells.
    pub fn homologous(&self, a: &Chain, b: &Chain) -> Result<bool> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch(a.dim, b.dim));
        }
        if !self.is_cycle(a)? || !self.is_cycle(b)? {
            return Err(Error::NotACycle);
        }
        let diff = a.sum(b)?;
        if diff.is_empty() {
            return Ok(true);
        }
        if a.dim >= 3 {
            return Ok(false);
        }
        Ok(self
            .boundary_space(a.dim + 1)
            .contains(&self.to_bits(&diff)))
    }

    /// Row space spanned by the boundaries of retained `dim`-cells, as
    /// vectors over the `(dim - 1)`-cells.
    pub fn boundary_space(&self, dim: u8) -> RowSpace {
        assert!((1..=3).contains(&dim));
        let width = self.count(dim - 1);
        let rows: Vec<BitVec> = self
            .retained_ids(dim)
            .map(|id| {
                BitVec::from_indices(
                    width,
                    self.cells[id].boundary.iter().map(|&b| self.rank_in_dim[b]),
                )
            })
            .collect();
        RowSpace::new(width, &rows)
    }

    fn to_bits(&self, chain: &Chain) -> BitVec {
        BitVec::from_indices(
            self.count(chain.dim),
            chain.iter().map(|id| self.rank_in_dim[id]),
        )
    }

    /// Checks ∂∘∂ = 0 on every cell of dimension at least two.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for cell in self.cells.iter().filter(|c| c.dim >= 2) {
            let mut acc = BTreeSet::new();
            for &b in &cell.boundary {
                for &bb in &self.cells[b].boundary {
                    if !acc.insert(bb) {
                        acc.remove(&bb);
                    }
                }
            }
            if !acc.is_empty() {
                return Err(Error::InvalidComplex(format!(
                    "boundary of the boundary of cell {} is not empty",
                    cell.id
                )));
            }
        }
        Ok(())
    }

    /// Closed surfaces enclosing each connected region of carved-out volumes.
    ///
    /// Volumes drop out of the retained subcomplex when one of their faces is
    /// removed. Volumes touching each other through a face form one region,
    /// and its boundary is the enclosing surface. A region that reaches the
    /// outer boundary through a removed face encloses nothing and is skipped.
    pub fn defect_enclosing_surfaces(&self) -> Vec<Chain> {
        let carved: Vec<CellId> = self
            .ids_of_dim(3)
            .iter()
            .copied()
            .filter(|&v| !self.retained[v])
            .collect();
        let mut seen = BTreeSet::new();
        let mut surfaces = Vec::new();
        for &start in &carved {
            if !seen.insert(start) {
                continue;
            }
            let mut region = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &f in &self.cells[v].boundary {
                    for &w in &self.cofaces[f] {
                        if !self.retained[w] && seen.insert(w) {
                            region.push(w);
                            stack.push(w);
                        }
                    }
                }
            }
            let surface = self
                .boundary(&Chain::new(3, region))
                .expect("volumes have boundaries");
            if surface.iter().all(|f| self.retained[f]) {
                surfaces.push(surface);
            }
        }
        surfaces
    }

    /// For periodic cubic lattices: the three coordinate planes through the
    /// origin (`z = 0`, `y = 0`, `x = 0`), each a homologically nontrivial
    /// closed surface.
    pub fn wrapping_planes(&self) -> Vec<Chain> {
        let LatticeKind::Cubic { periodic: true, .. } = self.kind else {
            return Vec::new();
        };
        let coords = self.coords.as_ref().expect("cubic coordinates");
        (0..3)
            .rev()
            .map(|normal| {
                Chain::new(
                    2,
                    self.ids_of_dim(2).iter().copied().filter(|&f| {
                        let c = coords[f];
                        c[normal] == 0 && (0..3).all(|a| a == normal || c[a] % 2 == 1)
                    }),
                )
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = ComplexFile {
            header: self.header(),
            cells: self.cells.clone(),
            removed: self.removed.iter().copied().collect(),
        };
        serde_json::to_string_pretty(&file).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidComplex(e.to_string()))?;
        let mut complex = Self::from_cells(file.header.lattice, file.cells, file.removed)?;
        if let LatticeKind::Cubic { dims, periodic } = complex.kind {
            complex.attach_cubic_coords(dims, periodic)?;
        } else if complex.kind == LatticeKind::Elementary {
            complex.attach_cubic_coords([1, 1, 1], false)?;
        }
        Ok(complex)
    }

    fn header(&self) -> Header {
        let boundary = match &self.kind {
            LatticeKind::Cubic { periodic: true, .. } => PERIODIC_BOUNDARY_CONVENTION,
            LatticeKind::Cubic { .. } | LatticeKind::Elementary => OPEN_BOUNDARY_CONVENTION,
            _ => "as listed",
        };
        Header {
            lattice: self.kind.clone(),
            boundary_convention: boundary.to_string(),
            counts: [self.count(0), self.count(1), self.count(2), self.count(3)],
        }
    }

    fn attach_cubic_coords(&mut self, dims: [usize; 3], periodic: bool) -> Result<()> {
        let cells = cubic_cell_coords(dims, periodic);
        if cells.len() != self.cells.len() {
            return Err(Error::InvalidComplex(
                "cell count does not match the lattice header".into(),
            ));
        }
        self.coords = Some(cells);
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    lattice: LatticeKind,
    boundary_convention: String,
    counts: [usize; 4],
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    header: Header,
    cells: Vec<Cell>,
    removed: Vec<CellId>,
}

fn extents(dims: [usize; 3], periodic: bool) -> [usize; 3] {
    dims.map(|l| if periodic { 2 * l } else { 2 * l + 1 })
}

fn cubic_position(dims: [usize; 3], periodic: bool, coords: [usize; 3]) -> Option<[usize; 3]> {
    let ext = extents(dims, periodic);
    (0..3).all(|a| coords[a] < ext[a]).then_some(coords)
}

/// Doubled coordinates of every cell of a cubic lattice, in id order.
fn cubic_cell_coords(dims: [usize; 3], periodic: bool) -> Vec<[usize; 3]> {
    let ext = extents(dims, periodic);
    let mut all = Vec::with_capacity(ext.iter().product());
    for z in 0..ext[2] {
        for y in 0..ext[1] {
            for x in 0..ext[0] {
                all.push([x, y, z]);
            }
        }
    }
    // stable sort keeps (z, y, x) order inside each dimension
    all.sort_by_key(|c| c.iter().filter(|v| *v % 2 == 1).count());
    all
}

fn cubic_cells(dims: [usize; 3], periodic: bool) -> (Vec<Cell>, Vec<[usize; 3]>) {
    let ext = extents(dims, periodic);
    let coords = cubic_cell_coords(dims, periodic);
    let mut index = HashMap::with_capacity(coords.len());
    for (id, c) in coords.iter().enumerate() {
        index.insert(*c, id);
    }
    let cells = coords
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let mut boundary = Vec::new();
            for a in 0..3 {
                if c[a] % 2 == 1 {
                    let (lo, hi) = if periodic {
                        ((c[a] + ext[a] - 1) % ext[a], (c[a] + 1) % ext[a])
                    } else {
                        (c[a] - 1, c[a] + 1)
                    };
                    for v in [lo, hi] {
                        let mut n = *c;
                        n[a] = v;
                        boundary.push(index[&n]);
                    }
                }
            }
            boundary.sort_unstable();
            Cell {
                id,
                dim: c.iter().filter(|v| *v % 2 == 1).count() as u8,
                boundary,
                label: None,
            }
        })
        .collect();
    (cells, coords)
}

/// The single cube: 1 volume, 6 faces, 12 edges, 8 sites. Faces are labelled
/// `f1..f6`, edges `e1..e12`, sites `s1..s8` and the volume `V`, each in id
/// order.
pub fn build_elementary_cell() -> CellComplex {
    let (mut cells, coords) = cubic_cells([1, 1, 1], false);
    let mut counters = [0usize; 4];
    for cell in &mut cells {
        let d = cell.dim as usize;
        counters[d] += 1;
        cell.label = Some(match d {
            0 => format!("s{}", counters[d]),
            1 => format!("e{}", counters[d]),
            2 => format!("f{}", counters[d]),
            _ => "V".to_string(),
        });
    }
    let mut complex = CellComplex::from_cells(LatticeKind::Elementary, cells, [])
        .expect("elementary cell is valid");
    complex.coords = Some(coords);
    complex
}

/// The eight-qubit complex: volumes `v, w, y, z`, faces
/// `f1, f3, f4, f1', f3', f4'`, edges `e2, e2'` and sites `s, t`.
/// Every face is bounded by `e2 + e2'`; the central volume is not a cell.
pub fn build_l8() -> CellComplex {
    let names = [
        "s", "t", "e2", "e2'", "f1", "f3", "f4", "f1'", "f3'", "f4'", "v", "w", "y", "z",
    ];
    let id = |n: &str| names.iter().position(|m| *m == n).unwrap();
    let boundary_of = |n: &str| -> Vec<CellId> {
        let parts: &[&str] = match n {
            "s" | "t" => &[],
            "e2" | "e2'" => &["s", "t"],
            "v" => &["f3", "f4"],
            "w" => &["f1", "f3"],
            "y" => &["f1'", "f3'"],
            "z" => &["f3'", "f4'"],
            _ => &["e2", "e2'"],
        };
        let mut b: Vec<CellId> = parts.iter().map(|p| id(p)).collect();
        b.sort_unstable();
        b
    };
    let cells = names
        .iter()
        .enumerate()
        .map(|(i, n)| Cell {
            id: i,
            dim: match i {
                0..=1 => 0,
                2..=3 => 1,
                4..=9 => 2,
                _ => 3,
            },
            boundary: boundary_of(n),
            label: Some(n.to_string()),
        })
        .collect();
    CellComplex::from_cells(LatticeKind::L8, cells, []).expect("L8 is valid")
}

/// An `lx × ly × t` block of cubes with open boundaries, boundary faces and
/// edges retained, and the listed qubits removed.
pub fn build_cubic(lx: usize, ly: usize, t: usize, defects: &[DefectSpec]) -> Result<CellComplex> {
    if lx == 0 || ly == 0 || t == 0 {
        return Err(Error::InvalidSpec(format!(
            "lattice dimensions must be positive, got {lx}x{ly}x{t}"
        )));
    }
    let dims = [lx, ly, t];
    let (cells, coords) = cubic_cells(dims, false);
    let ext = extents(dims, false);
    let mut index = HashMap::with_capacity(coords.len());
    for (id, c) in coords.iter().enumerate() {
        index.insert(*c, id);
    }
    let mut removed = Vec::new();
    for d in defects {
        match d {
            DefectSpec::Face { coords: c } | DefectSpec::Edge { coords: c } => {
                let want = if matches!(d, DefectSpec::Face { .. }) {
                    2
                } else {
                    1
                };
                let odd = c.iter().filter(|v| *v % 2 == 1).count();
                if (0..3).any(|a| c[a] >= ext[a]) || odd != want {
                    return Err(Error::InvalidSpec(format!(
                        "{c:?} is not a {} of the {lx}x{ly}x{t} lattice",
                        if want == 2 { "face" } else { "edge" }
                    )));
                }
                removed.push(index[c]);
            }
            DefectSpec::Line { x, y, z_from, z_to } => {
                if *x >= lx || *y >= ly || z_from > z_to || *z_to > t {
                    return Err(Error::InvalidSpec(format!(
                        "line defect ({x}, {y}, {z_from}..={z_to}) outside the {lx}x{ly}x{t} lattice"
                    )));
                }
                for z in *z_from..=*z_to {
                    removed.push(index[&[2 * x + 1, 2 * y + 1, 2 * z]]);
                }
            }
        }
    }
    let mut complex = CellComplex::from_cells(
        LatticeKind::Cubic {
            dims,
            periodic: false,
        },
        cells,
        removed,
    )?;
    complex.coords = Some(coords);
    Ok(complex)
}

/// An `lx × ly × t` cubic lattice on the 3-torus. Each side must be at least
/// two so that opposite faces of a cube are distinct cells.
pub fn build_periodic_cubic(lx: usize, ly: usize, t: usize) -> Result<CellComplex> {
    if lx < 2 || ly < 2 || t < 2 {
        return Err(Error::InvalidSpec(format!(
            "periodic lattice sides must be at least 2, got {lx}x{ly}x{t}"
        )));
    }
    let dims = [lx, ly, t];
    let (cells, coords) = cubic_cells(dims, true);
    let mut complex = CellComplex::from_cells(
        LatticeKind::Cubic {
            dims,
            periodic: true,
        },
        cells,
        [],
    )?;
    complex.coords = Some(coords);
    Ok(complex)
}
