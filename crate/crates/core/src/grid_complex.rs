//! Cells, chains and the boundary operator of the two-dimensional grid complex.
//!
//! Cells are addressed by 1-based index pairs `(k, s)`. A [`GridShape`] is either
//! a periodic `n x m` torus, where indices are reduced into `1..=n`, `1..=m` as soon
//! as a [`CellId`] is built, or a plane window whose interior runs over `1..=n`,
//! `1..=m` and whose forms additionally carry a ghost ring at indices `0` and
//! `n + 1` (resp. `m + 1`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::calculus::Form;
use crate::error::{DecError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Torus,
    PlaneWindow,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Torus => f.write_str("torus"),
            Topology::PlaneWindow => f.write_str("plane_window"),
        }
    }
}

/// `τ`: the index successor. Wraps `extent -> 1` on the torus.
pub fn shift_tau(index: i64, extent: usize, topology: Topology) -> i64 {
    match topology {
        Topology::Torus => wrap(index + 1, extent),
        Topology::PlaneWindow => index + 1,
    }
}

/// `σ`: the index predecessor. Wraps `1 -> extent` on the torus.
pub fn shift_sigma(index: i64, extent: usize, topology: Topology) -> i64 {
    match topology {
        Topology::Torus => wrap(index - 1, extent),
        Topology::PlaneWindow => index - 1,
    }
}

fn wrap(index: i64, extent: usize) -> i64 {
    (index - 1).rem_euclid(extent as i64) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    n: usize,
    m: usize,
    topology: Topology,
}

impl GridShape {
    pub fn new(n: usize, m: usize, topology: Topology) -> Result<Self> {
        if n == 0 {
            return Err(DecError::EmptyExtent("n"));
        }
        if m == 0 {
            return Err(DecError::EmptyExtent("m"));
        }
        Ok(GridShape { n, m, topology })
    }

    pub fn torus(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, Topology::Torus)
    }

    pub fn window(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, Topology::PlaneWindow)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn is_torus(&self) -> bool {
        self.topology == Topology::Torus
    }

    pub fn require_torus(&self) -> Result<()> {
        if self.is_torus() {
            Ok(())
        } else {
            Err(DecError::RequiresTorus)
        }
    }

    pub fn tau_k(&self, k: i64) -> i64 {
        shift_tau(k, self.n, self.topology)
    }

    pub fn tau_s(&self, s: i64) -> i64 {
        shift_tau(s, self.m, self.topology)
    }

    pub fn sigma_k(&self, k: i64) -> i64 {
        shift_sigma(k, self.n, self.topology)
    }

    pub fn sigma_s(&self, s: i64) -> i64 {
        shift_sigma(s, self.m, self.topology)
    }

    /// Number of stored entries per direction for one component array.
    pub fn extents(&self) -> (usize, usize) {
        match self.topology {
            Topology::Torus => (self.n, self.m),
            Topology::PlaneWindow => (self.n + 2, self.m + 2),
        }
    }

    /// Number of cells of the given dimension in the rectangle `1..=n x 1..=m`.
    pub fn cell_count(&self, dim: usize) -> usize {
        let nm = self.n * self.m;
        match dim {
            1 => 2 * nm,
            _ => nm,
        }
    }

    /// Flat storage offset of `(k, s)` in a component array, `None` outside the
    /// addressable range. Torus indices are reduced first.
    pub fn offset(&self, k: i64, s: i64) -> Option<usize> {
        let (ek, es) = self.extents();
        let (ko, so) = match self.topology {
            Topology::Torus => (wrap(k, self.n) - 1, wrap(s, self.m) - 1),
            Topology::PlaneWindow => (k, s),
        };
        if ko < 0 || so < 0 || ko as usize >= ek || so as usize >= es {
            return None;
        }
        Some(so as usize * ek + ko as usize)
    }

    /// Index pair stored at a flat offset.
    pub fn index_at(&self, offset: usize) -> (i64, i64) {
        let (ek, _) = self.extents();
        let (ko, so) = ((offset % ek) as i64, (offset / ek) as i64);
        match self.topology {
            Topology::Torus => (ko + 1, so + 1),
            Topology::PlaneWindow => (ko, so),
        }
    }

    /// Interior indices `1..=n x 1..=m`, `s` outer and `k` inner.
    pub fn interior(&self) -> impl Iterator<Item = (i64, i64)> {
        let (n, m) = (self.n as i64, self.m as i64);
        (1..=m).flat_map(move |s| (1..=n).map(move |k| (k, s)))
    }

    /// Every addressable index pair (interior plus ghost ring on a window).
    pub fn addressable(&self) -> impl Iterator<Item = (i64, i64)> {
        let shape = *self;
        let (ek, es) = self.extents();
        (0..ek * es).map(move |o| shape.index_at(o))
    }

    pub fn cell(&self, kind: CellKind, k: i64, s: i64) -> CellId {
        CellId::new(self, kind, k, s)
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {}", self.n, self.m, self.topology)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Vertex,
    Edge1,
    Edge2,
    Face,
}

impl CellKind {
    pub fn dim(self) -> usize {
        match self {
            CellKind::Vertex => 0,
            CellKind::Edge1 | CellKind::Edge2 => 1,
            CellKind::Face => 2,
        }
    }

    /// Edge direction (1 for `e₁`, 2 for `e₂`), `None` for vertices and faces.
    pub fn direction(self) -> Option<u8> {
        match self {
            CellKind::Edge1 => Some(1),
            CellKind::Edge2 => Some(2),
            _ => None,
        }
    }

    /// Index of the component array holding this cell's coefficient.
    pub fn component(self) -> usize {
        match self {
            CellKind::Edge2 => 1,
            _ => 0,
        }
    }

    pub fn from_component(dim: usize, component: usize) -> CellKind {
        match (dim, component) {
            (0, _) => CellKind::Vertex,
            (1, 0) => CellKind::Edge1,
            (1, _) => CellKind::Edge2,
            _ => CellKind::Face,
        }
    }

    fn label(self) -> &'static str {
        match self {
            CellKind::Vertex => "x",
            CellKind::Edge1 => "e1",
            CellKind::Edge2 => "e2",
            CellKind::Face => "V",
        }
    }
}

/// A basis cell. On a torus the indices are canonical representatives in
/// `1..=n x 1..=m`, so identified cells compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    kind: CellKind,
    s: i64,
    k: i64,
}

impl CellId {
    pub fn new(shape: &GridShape, kind: CellKind, k: i64, s: i64) -> CellId {
        let (k, s) = match shape.topology {
            Topology::Torus => (wrap(k, shape.n), wrap(s, shape.m)),
            Topology::PlaneWindow => (k, s),
        };
        CellId { kind, s, k }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn direction(&self) -> Option<u8> {
        self.kind.direction()
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// Parses labels of the form `x(1,2)`, `e1(2,1)`, `e2(1,1)`, `V(2,2)`.
    pub fn parse_label(shape: &GridShape, label: &str) -> Option<CellId> {
        let open = label.find('(')?;
        let kind = match &label[..open] {
            "x" => CellKind::Vertex,
            "e1" => CellKind::Edge1,
            "e2" => CellKind::Edge2,
            "V" => CellKind::Face,
            _ => return None,
        };
        let inner = label[open + 1..].strip_suffix(')')?;
        let (k, s) = inner.split_once(',')?;
        Some(CellId::new(shape, kind, k.trim().parse().ok()?, s.trim().parse().ok()?))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.label(), self.k, self.s)
    }
}

/// Formal integer combination of cells of a single dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    dim: usize,
    terms: BTreeMap<CellId, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Chain {
        Chain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn cell(cell: CellId) -> Chain {
        let mut c = Chain::zero(cell.dim());
        c.terms.insert(cell, 1);
        c
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (CellId, i64)>) -> Result<Chain> {
        let mut c = Chain::zero(dim);
        for (cell, coeff) in terms {
            c.add_term(cell, coeff)?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, cell: CellId, coeff: i64) -> Result<()> {
        if cell.dim() != self.dim {
            return Err(DecError::DegreeMismatch {
                expected: self.dim,
                found: cell.dim(),
            });
        }
        self.push(cell, coeff);
        Ok(())
    }

    fn push(&mut self, cell: CellId, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(cell).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&cell);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cell: &CellId) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CellId, i64)> {
        self.terms.iter().map(|(c, &v)| (c, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        assert_eq!(self.dim, rhs.dim, "adding chains of different dimension");
        let mut out = self.clone();
        for (cell, coeff) in rhs.terms() {
            out.push(*cell, coeff);
        }
        out
    }
}

impl Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self * -1
    }
}

impl Mul<i64> for &Chain {
    type Output = Chain;
    fn mul(self, rhs: i64) -> Chain {
        let mut out = Chain::zero(self.dim);
        for (cell, coeff) in self.terms() {
            out.push(*cell, coeff * rhs);
        }
        out
    }
}

/// The face chain `Σ V_{k,s}` over the rectangle `1..=n x 1..=m`.
pub fn rectangle(shape: &GridShape) -> Chain {
    let mut c = Chain::zero(2);
    for (k, s) in shape.interior() {
        c.push(shape.cell(CellKind::Face, k, s), 1);
    }
    c
}

/// Boundary of a chain. Boundaries of 0-chains are the zero chain.
pub fn boundary(chain: &Chain, shape: &GridShape) -> Chain {
    if chain.dim == 0 {
        return Chain::zero(0);
    }
    let mut out = Chain::zero(chain.dim - 1);
    for (cell, coeff) in chain.terms() {
        let (k, s) = (cell.k, cell.s);
        let (tk, ts) = (shape.tau_k(k), shape.tau_s(s));
        let parts: &[(CellKind, i64, i64, i64)] = match cell.kind {
            CellKind::Vertex => &[],
            CellKind::Edge1 => &[(CellKind::Vertex, tk, s, 1), (CellKind::Vertex, k, s, -1)],
            CellKind::Edge2 => &[(CellKind::Vertex, k, ts, 1), (CellKind::Vertex, k, s, -1)],
            CellKind::Face => &[
                (CellKind::Edge1, k, s, 1),
                (CellKind::Edge2, tk, s, 1),
                (CellKind::Edge1, k, ts, -1),
                (CellKind::Edge2, k, s, -1),
            ],
        };
        for &(kind, kk, ss, sign) in parts {
            out.push(shape.cell(kind, kk, ss), sign * coeff);
        }
    }
    out
}

/// Kronecker pairing `⟨c, ω⟩` extended bilinearly.
pub fn pairing(chain: &Chain, form: &Form) -> Result<f64> {
    if chain.dim != form.degree() {
        return Err(DecError::DegreeMismatch {
            expected: chain.dim,
            found: form.degree(),
        });
    }
    let mut total = 0.0;
    for (cell, coeff) in chain.terms() {
        let value = form.component(cell).ok_or(DecError::CellOutOfRange(*cell))?;
        total += coeff as f64 * value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_wrap_on_torus_only() {
        assert_eq!(shift_tau(1, 2, Topology::Torus), 2);
        assert_eq!(shift_tau(2, 2, Topology::Torus), 1);
        assert_eq!(shift_tau(2, 2, Topology::PlaneWindow), 3);
        assert_eq!(shift_sigma(2, 2, Topology::Torus), 1);
        assert_eq!(shift_sigma(1, 2, Topology::Torus), 2);
        assert_eq!(shift_sigma(1, 3, Topology::PlaneWindow), 0);
        // degenerate extent: τ is the identity
        assert_eq!(shift_tau(1, 1, Topology::Torus), 1);
        assert_eq!(shift_sigma(1, 1, Topology::Torus), 1);
    }

    #[test]
    fn zero_extent_rejected() {
        assert_eq!(GridShape::torus(0, 2), Err(DecError::EmptyExtent("n")));
        assert_eq!(GridShape::window(3, 0), Err(DecError::EmptyExtent("m")));
    }

    #[test]
    fn torus_cells_are_identified() {
        let t = GridShape::torus(2, 2).unwrap();
        assert_eq!(t.cell(CellKind::Vertex, 3, 1), t.cell(CellKind::Vertex, 1, 1));
        assert_eq!(t.cell(CellKind::Vertex, 1, 3), t.cell(CellKind::Vertex, 3, 3));
        assert_eq!(t.cell(CellKind::Edge1, 2, 3), t.cell(CellKind::Edge1, 2, 1));
        assert_eq!(t.cell(CellKind::Edge2, 3, 2), t.cell(CellKind::Edge2, 1, 2));
        let w = GridShape::window(2, 2).unwrap();
        assert_ne!(w.cell(CellKind::Vertex, 3, 1), w.cell(CellKind::Vertex, 1, 1));
    }

    #[test]
    fn face_boundary() {
        let t = GridShape::torus(3, 3).unwrap();
        let b = boundary(&Chain::cell(t.cell(CellKind::Face, 2, 2)), &t);
        let expected = Chain::from_terms(
            1,
            [
                (t.cell(CellKind::Edge1, 2, 2), 1),
                (t.cell(CellKind::Edge2, 3, 2), 1),
                (t.cell(CellKind::Edge1, 2, 3), -1),
                (t.cell(CellKind::Edge2, 2, 2), -1),
            ],
        )
        .unwrap();
        assert_eq!(b, expected);
        assert!(boundary(&b, &t).is_zero());
    }

    #[test]
    fn rectangle_boundary_on_window() {
        let (n, m) = (3i64, 2i64);
        let w = GridShape::window(n as usize, m as usize).unwrap();
        let mut expected = Chain::zero(1);
        for k in 1..=n {
            expected.add_term(w.cell(CellKind::Edge1, k, 1), 1).unwrap();
            expected.add_term(w.cell(CellKind::Edge1, k, m + 1), -1).unwrap();
        }
        for s in 1..=m {
            expected.add_term(w.cell(CellKind::Edge2, n + 1, s), 1).unwrap();
            expected.add_term(w.cell(CellKind::Edge2, 1, s), -1).unwrap();
        }
        assert_eq!(boundary(&rectangle(&w), &w), expected);
    }

    #[test]
    fn rectangle_boundary_on_torus_vanishes() {
        for n in 1..=4 {
            for m in 1..=4 {
                let t = GridShape::torus(n, m).unwrap();
                assert!(boundary(&rectangle(&t), &t).is_zero(), "{n}x{m}");
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero_exhaustively() {
        for topology in [Topology::Torus, Topology::PlaneWindow] {
            for n in 1..=6 {
                for m in 1..=6 {
                    let shape = GridShape::new(n, m, topology).unwrap();
                    for (k, s) in shape.interior() {
                        let face = Chain::cell(shape.cell(CellKind::Face, k, s));
                        let bb = boundary(&boundary(&face, &shape), &shape);
                        assert!(bb.is_zero(), "{shape} face ({k},{s})");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let t = GridShape::torus(2, 2).unwrap();
        let c = Chain::cell(t.cell(CellKind::Vertex, 1, 1));
        assert!((&c - &c).is_zero());
        let mut d = Chain::zero(0);
        d.add_term(t.cell(CellKind::Vertex, 1, 1), 0).unwrap();
        assert!(d.is_empty());
        assert!(d.add_term(t.cell(CellKind::Face, 1, 1), 1).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let t = GridShape::torus(2, 2).unwrap();
        for kind in [CellKind::Vertex, CellKind::Edge1, CellKind::Edge2, CellKind::Face] {
            let c = t.cell(kind, 2, 1);
            assert_eq!(CellId::parse_label(&t, &c.to_string()), Some(c));
        }
        assert_eq!(t.cell(CellKind::Edge1, 2, 1).to_string(), "e1(2,1)");
        assert_eq!(CellId::parse_label(&t, "q(1,1)"), None);
    }
}
