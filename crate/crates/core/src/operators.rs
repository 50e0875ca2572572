//! Integer matrices of `d`, `δ`, the Laplacian and the Hodge–Dirac operator on
//! the torus.
//!
//! Every matrix is assembled column by column, by applying the operator from
//! [`crate::calculus`] to basis indicators, so a matrix and its operator agree by
//! construction. Laplacians are then formed as products of the first-order
//! matrices.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::calculus::{self, Form, InhomogeneousForm};
use crate::error::{DecError, Result};
use crate::grid_complex::{CellId, CellKind, GridShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    /// Degree-major; within a degree `s` outer, `k` inner; 1-forms list every
    /// `e₁` cell before every `e₂` cell.
    Canonical,
    /// Fixed row-vector orders for the 2x2 torus under which the printed
    /// reference matrices `A`, `B`, `D`, `D₁` are stated.
    Reference2x2,
}

impl OrderingKind {
    pub fn name(self) -> &'static str {
        match self {
            OrderingKind::Canonical => "canonical",
            OrderingKind::Reference2x2 => "paper2x2",
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderingKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "canonical" => Ok(OrderingKind::Canonical),
            "paper2x2" => Ok(OrderingKind::Reference2x2),
            other => Err(format!("unknown ordering '{other}' (expected canonical or paper2x2)")),
        }
    }
}

// (kind, k, s) triples of the 2x2 reference orders.
const REFERENCE_VERTICES: [(CellKind, i64, i64); 4] = [
    (CellKind::Vertex, 1, 1),
    (CellKind::Vertex, 2, 1),
    (CellKind::Vertex, 1, 2),
    (CellKind::Vertex, 2, 2),
];
const REFERENCE_EDGES: [(CellKind, i64, i64); 8] = [
    (CellKind::Edge1, 1, 1),
    (CellKind::Edge1, 2, 1),
    (CellKind::Edge2, 1, 2),
    (CellKind::Edge2, 1, 1),
    (CellKind::Edge1, 1, 2),
    (CellKind::Edge1, 2, 2),
    (CellKind::Edge2, 2, 2),
    (CellKind::Edge2, 2, 1),
];
const REFERENCE_FACES: [(CellKind, i64, i64); 4] = [
    (CellKind::Face, 1, 2),
    (CellKind::Face, 2, 2),
    (CellKind::Face, 1, 1),
    (CellKind::Face, 2, 1),
];

/// An ordered list of basis cells. `degree` is `None` for the graded basis
/// (degrees 0, 1 and 2 concatenated) used by the Dirac operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisOrdering {
    shape: GridShape,
    kind: OrderingKind,
    degree: Option<usize>,
    labels: Vec<CellId>,
}

impl BasisOrdering {
    pub fn new(shape: GridShape, degree: usize, kind: OrderingKind) -> Result<BasisOrdering> {
        shape.require_torus()?;
        if degree > 2 {
            return Err(DecError::DegreeOutOfRange(degree));
        }
        let labels = match kind {
            OrderingKind::Canonical => {
                let kinds: &[CellKind] = match degree {
                    0 => &[CellKind::Vertex],
                    1 => &[CellKind::Edge1, CellKind::Edge2],
                    _ => &[CellKind::Face],
                };
                kinds
                    .iter()
                    .flat_map(|&kind| shape.interior().map(move |(k, s)| shape.cell(kind, k, s)))
                    .collect()
            }
            OrderingKind::Reference2x2 => {
                if (shape.n(), shape.m()) != (2, 2) {
                    return Err(DecError::OrderingShapeMismatch {
                        n: shape.n(),
                        m: shape.m(),
                    });
                }
                let table: &[(CellKind, i64, i64)] = match degree {
                    0 => &REFERENCE_VERTICES,
                    1 => &REFERENCE_EDGES,
                    _ => &REFERENCE_FACES,
                };
                table.iter().map(|&(kind, k, s)| shape.cell(kind, k, s)).collect()
            }
        };
        Ok(BasisOrdering {
            shape,
            kind,
            degree: Some(degree),
            labels,
        })
    }

    pub fn canonical(shape: GridShape, degree: usize) -> Result<BasisOrdering> {
        Self::new(shape, degree, OrderingKind::Canonical)
    }

    pub fn graded(shape: GridShape, kind: OrderingKind) -> Result<BasisOrdering> {
        let mut labels = Vec::with_capacity(4 * shape.n() * shape.m());
        for r in 0..=2 {
            labels.extend(Self::new(shape, r, kind)?.labels);
        }
        Ok(BasisOrdering {
            shape,
            kind,
            degree: None,
            labels,
        })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn labels(&self) -> &[CellId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }

    fn check_form(&self, form: &Form) -> Result<()> {
        if form.shape() != self.shape {
            return Err(DecError::ShapeMismatch);
        }
        match self.degree {
            Some(r) if r != form.degree() => Err(DecError::DegreeMismatch {
                expected: r,
                found: form.degree(),
            }),
            _ => Ok(()),
        }
    }

    /// Coefficients of a homogeneous form in this basis.
    pub fn vectorize(&self, form: &Form) -> Result<Vec<f64>> {
        self.check_form(form)?;
        if self.degree.is_none() {
            return Err(DecError::DimensionMismatch {
                expected: self.len(),
                found: self.shape.cell_count(form.degree()),
            });
        }
        Ok(self
            .labels
            .iter()
            .map(|c| form.component(c).expect("label addressable on torus"))
            .collect())
    }

    pub fn devectorize(&self, values: &[f64]) -> Result<Form> {
        self.check_len(values.len())?;
        let Some(degree) = self.degree else {
            return Err(DecError::DimensionMismatch {
                expected: self.len(),
                found: values.len(),
            });
        };
        let mut form = Form::zeros(self.shape, degree);
        for (cell, &v) in self.labels.iter().zip(values) {
            form.set(cell.kind().component(), cell.k(), cell.s(), v);
        }
        Ok(form)
    }

    pub fn vectorize_graded(&self, form: &InhomogeneousForm) -> Result<Vec<f64>> {
        if form.shape() != self.shape {
            return Err(DecError::ShapeMismatch);
        }
        Ok(self
            .labels
            .iter()
            .map(|c| form.part(c.dim()).component(c).expect("label addressable on torus"))
            .collect())
    }

    pub fn devectorize_graded(&self, values: &[f64]) -> Result<InhomogeneousForm> {
        self.check_len(values.len())?;
        let mut parts = [0, 1, 2].map(|r| Form::zeros(self.shape, r));
        for (cell, &v) in self.labels.iter().zip(values) {
            parts[cell.dim()].set(cell.kind().component(), cell.k(), cell.s(), v);
        }
        let [a, b, c] = parts;
        InhomogeneousForm::new(a, b, c)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.labels.len() {
            return Err(DecError::DimensionMismatch {
                expected: self.labels.len(),
                found: len,
            });
        }
        Ok(())
    }
}

/// The operators that can be assembled, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    D0,
    D1,
    Delta1,
    Delta2,
    Lap0,
    Lap1,
    Lap2,
    Dirac,
}

impl Op {
    pub const ALL: [Op; 8] = [
        Op::D0,
        Op::D1,
        Op::Delta1,
        Op::Delta2,
        Op::Lap0,
        Op::Lap1,
        Op::Lap2,
        Op::Dirac,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::D0 => "d0",
            Op::D1 => "d1",
            Op::Delta1 => "delta1",
            Op::Delta2 => "delta2",
            Op::Lap0 => "lap0",
            Op::Lap1 => "lap1",
            Op::Lap2 => "lap2",
            Op::Dirac => "dirac",
        }
    }

    pub fn assemble(self, shape: GridShape, kind: OrderingKind) -> Result<OperatorMatrix> {
        match self {
            Op::D0 => assemble_d(shape, 0, kind),
            Op::D1 => assemble_d(shape, 1, kind),
            Op::Delta1 => assemble_delta(shape, 1, kind),
            Op::Delta2 => assemble_delta(shape, 2, kind),
            Op::Lap0 => assemble_laplacian(shape, 0, kind),
            Op::Lap1 => assemble_laplacian(shape, 1, kind),
            Op::Lap2 => assemble_laplacian(shape, 2, kind),
            Op::Dirac => assemble_dirac(shape, kind),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operator '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    rows: BasisOrdering,
    cols: BasisOrdering,
    entries: DMatrix<i64>,
}

const FIRST_ORDER_ENTRIES: &[i64] = &[-1, 0, 1];
const LAPLACIAN_ENTRIES: &[i64] = &[-2, -1, 0, 1, 2, 4];

impl OperatorMatrix {
    fn new(rows: BasisOrdering, cols: BasisOrdering, entries: DMatrix<i64>, allowed: &[i64]) -> Self {
        assert_eq!(entries.shape(), (rows.len(), cols.len()));
        assert!(
            entries.iter().all(|v| allowed.contains(v)),
            "assembled entry outside {allowed:?}"
        );
        OperatorMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> &BasisOrdering {
        &self.rows
    }

    pub fn cols(&self) -> &BasisOrdering {
        &self.cols
    }

    pub fn entries(&self) -> &DMatrix<i64> {
        &self.entries
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        self.entries.map(|v| v as f64)
    }

    pub fn transpose(&self) -> OperatorMatrix {
        OperatorMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: self.entries.transpose(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }

    /// Entry rows as nested vectors, row-major.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.entries.nrows())
            .map(|i| self.entries.row(i).iter().copied().collect())
            .collect()
    }
}

/// Matrix–vector product, summing each row left to right.
pub fn apply(matrix: &OperatorMatrix, vec: &[f64]) -> Result<Vec<f64>> {
    let e = &matrix.entries;
    if vec.len() != e.ncols() {
        return Err(DecError::DimensionMismatch {
            expected: e.ncols(),
            found: vec.len(),
        });
    }
    Ok((0..e.nrows())
        .map(|i| {
            vec.iter()
                .enumerate()
                .fold(0.0, |acc, (j, x)| acc + e[(i, j)] as f64 * x)
        })
        .collect())
}

fn assemble_columns(rows: &BasisOrdering, cols: &BasisOrdering, op: impl Fn(&Form) -> Form) -> DMatrix<i64> {
    let shape = cols.shape();
    let mut entries = DMatrix::zeros(rows.len(), cols.len());
    for (j, cell) in cols.labels().iter().enumerate() {
        let image = op(&Form::indicator(shape, *cell).expect("torus cell"));
        for (i, v) in rows.vectorize(&image).expect("image degree").into_iter().enumerate() {
            debug_assert_eq!(v, v.round());
            entries[(i, j)] = v as i64;
        }
    }
    entries
}

pub fn assemble_d(shape: GridShape, degree: usize, kind: OrderingKind) -> Result<OperatorMatrix> {
    if degree > 1 {
        return Err(DecError::DegreeOutOfRange(degree));
    }
    let cols = BasisOrdering::new(shape, degree, kind)?;
    let rows = BasisOrdering::new(shape, degree + 1, kind)?;
    let entries = assemble_columns(&rows, &cols, calculus::d);
    Ok(OperatorMatrix::new(rows, cols, entries, FIRST_ORDER_ENTRIES))
}

pub fn assemble_delta(shape: GridShape, degree: usize, kind: OrderingKind) -> Result<OperatorMatrix> {
    if !(1..=2).contains(&degree) {
        return Err(DecError::DegreeOutOfRange(degree));
    }
    let cols = BasisOrdering::new(shape, degree, kind)?;
    let rows = BasisOrdering::new(shape, degree - 1, kind)?;
    let entries = assemble_columns(&rows, &cols, calculus::delta);
    Ok(OperatorMatrix::new(rows, cols, entries, FIRST_ORDER_ENTRIES))
}

pub fn assemble_laplacian(shape: GridShape, degree: usize, kind: OrderingKind) -> Result<OperatorMatrix> {
    let basis = BasisOrdering::new(shape, degree, kind)?;
    let entries = match degree {
        0 => &assemble_delta(shape, 1, kind)?.entries * &assemble_d(shape, 0, kind)?.entries,
        1 => {
            let (d0, d1) = (assemble_d(shape, 0, kind)?, assemble_d(shape, 1, kind)?);
            let (t1, t2) = (assemble_delta(shape, 1, kind)?, assemble_delta(shape, 2, kind)?);
            &d0.entries * &t1.entries + &t2.entries * &d1.entries
        }
        _ => &assemble_d(shape, 1, kind)?.entries * &assemble_delta(shape, 2, kind)?.entries,
    };
    debug_assert_eq!(entries, assemble_columns(&basis, &basis, calculus::laplacian));
    Ok(OperatorMatrix::new(basis.clone(), basis, entries, LAPLACIAN_ENTRIES))
}

/// Block matrix `[[0, δ₁, 0], [d₀, 0, δ₂], [0, d₁, 0]]` over the graded basis.
pub fn assemble_dirac(shape: GridShape, kind: OrderingKind) -> Result<OperatorMatrix> {
    let basis = BasisOrdering::graded(shape, kind)?;
    let nm = shape.n() * shape.m();
    let offsets = [0, nm, 3 * nm];
    let mut entries = DMatrix::zeros(4 * nm, 4 * nm);
    let blocks = [
        (assemble_delta(shape, 1, kind)?, 0, 1),
        (assemble_d(shape, 0, kind)?, 1, 0),
        (assemble_delta(shape, 2, kind)?, 1, 2),
        (assemble_d(shape, 1, kind)?, 2, 1),
    ];
    for (block, row, col) in &blocks {
        let e = &block.entries;
        entries
            .view_mut((offsets[*row], offsets[*col]), e.shape())
            .copy_from(e);
    }
    Ok(OperatorMatrix::new(basis.clone(), basis, entries, FIRST_ORDER_ENTRIES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(n: usize, m: usize) -> GridShape {
        GridShape::torus(n, m).unwrap()
    }

    #[test]
    fn reference_ordering_needs_2x2_torus() {
        assert_eq!(
            assemble_d(torus(3, 2), 0, OrderingKind::Reference2x2),
            Err(DecError::OrderingShapeMismatch { n: 3, m: 2 })
        );
        assert_eq!(
            assemble_d(GridShape::window(2, 2).unwrap(), 0, OrderingKind::Canonical),
            Err(DecError::RequiresTorus)
        );
    }

    #[test]
    fn orderings_enumerate_every_cell_once() {
        for kind in [OrderingKind::Canonical, OrderingKind::Reference2x2] {
            for r in 0..=2 {
                let b = BasisOrdering::new(torus(2, 2), r, kind).unwrap();
                let mut sorted = b.labels().to_vec();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), torus(2, 2).cell_count(r));
                assert!(sorted.iter().all(|c| c.dim() == r));
            }
        }
    }

    #[test]
    fn d_composes_to_zero() {
        for n in 1..=6 {
            for m in 1..=6 {
                let t = torus(n, m);
                let d0 = assemble_d(t, 0, OrderingKind::Canonical).unwrap();
                let d1 = assemble_d(t, 1, OrderingKind::Canonical).unwrap();
                assert!((d1.entries() * d0.entries()).iter().all(|&v| v == 0));
                let t1 = assemble_delta(t, 1, OrderingKind::Canonical).unwrap();
                let t2 = assemble_delta(t, 2, OrderingKind::Canonical).unwrap();
                assert!((t1.entries() * t2.entries()).iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn apply_checks_length() {
        let a = assemble_d(torus(2, 2), 0, OrderingKind::Reference2x2).unwrap();
        assert_eq!(apply(&a, &[1.0, 1.0, 1.0, 1.0]).unwrap(), vec![0.0; 8]);
        assert_eq!(
            apply(&a, &[1.0; 3]),
            Err(DecError::DimensionMismatch { expected: 4, found: 3 })
        );
        let lap = assemble_laplacian(torus(2, 2), 0, OrderingKind::Reference2x2).unwrap();
        assert_eq!(apply(&lap, &[1.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn dirac_dimension() {
        let m = assemble_dirac(torus(2, 2), OrderingKind::Reference2x2).unwrap();
        assert_eq!(m.entries().shape(), (16, 16));
        assert!(m.is_symmetric());
    }

    #[test]
    fn names_parse() {
        for op in Op::ALL {
            assert_eq!(op.name().parse::<Op>().unwrap(), op);
        }
        assert!("lap3".parse::<Op>().is_err());
        assert_eq!("paper2x2".parse::<OrderingKind>().unwrap(), OrderingKind::Reference2x2);
    }
}
