//! Operator matrices checked against independent constructions: `d` as the
//! transpose of the chain boundary, `δ` as the transpose of `d`, and the
//! five-point stencil for the scalar Laplacian.

use dec_core::grid_complex::{boundary, Chain};
use dec_core::operators::{assemble_d, assemble_delta, assemble_dirac, assemble_laplacian, BasisOrdering, OrderingKind};
use dec_core::{CellId, GridShape};
use nalgebra::DMatrix;

const SHAPES: [(usize, usize); 9] = [(1, 1), (1, 3), (2, 2), (2, 3), (3, 1), (3, 3), (4, 2), (4, 5), (5, 4)];

/// `d_r` entry `(row, col)` is the coefficient of cell `col` in `∂ row`.
fn d_from_boundary(shape: GridShape, degree: usize, kind: OrderingKind) -> DMatrix<i64> {
    let cols = BasisOrdering::new(shape, degree, kind).unwrap();
    let rows = BasisOrdering::new(shape, degree + 1, kind).unwrap();
    let mut out = DMatrix::zeros(rows.len(), cols.len());
    for (i, cell) in rows.labels().iter().enumerate() {
        let edge = boundary(&Chain::cell(*cell), &shape);
        for (j, target) in cols.labels().iter().enumerate() {
            out[(i, j)] = edge.coefficient(target);
        }
    }
    out
}

fn index_of(labels: &[CellId], shape: GridShape, text: &str) -> usize {
    let id = CellId::parse_label(&shape, text).unwrap();
    labels.iter().position(|c| *c == id).unwrap()
}

#[test]
fn d_is_transpose_of_boundary() {
    for (n, m) in SHAPES {
        let t = GridShape::torus(n, m).unwrap();
        for r in 0..=1 {
            let d = assemble_d(t, r, OrderingKind::Canonical).unwrap();
            assert_eq!(d.entries(), &d_from_boundary(t, r, OrderingKind::Canonical), "{n}x{m} r={r}");
        }
    }
    let t = GridShape::torus(2, 2).unwrap();
    for r in 0..=1 {
        let d = assemble_d(t, r, OrderingKind::Reference2x2).unwrap();
        assert_eq!(d.entries(), &d_from_boundary(t, r, OrderingKind::Reference2x2));
    }
}

#[test]
fn delta_is_transpose_of_d() {
    for (n, m) in SHAPES {
        let t = GridShape::torus(n, m).unwrap();
        for r in 1..=2 {
            let delta = assemble_delta(t, r, OrderingKind::Canonical).unwrap();
            let d = assemble_d(t, r - 1, OrderingKind::Canonical).unwrap();
            assert_eq!(delta.entries(), &d.entries().transpose(), "{n}x{m} r={r}");
        }
    }
}

#[test]
fn scalar_laplacian_is_five_point_stencil() {
    for (n, m) in [(3, 3), (4, 5), (5, 3), (6, 4)] {
        let t = GridShape::torus(n, m).unwrap();
        let lap = assemble_laplacian(t, 0, OrderingKind::Canonical).unwrap();
        let labels = lap.rows().labels().to_vec();
        let mut expected = DMatrix::<i64>::zeros(n * m, n * m);
        for s in 1..=m as i64 {
            for k in 1..=n as i64 {
                let here = index_of(&labels, t, &format!("x({k},{s})"));
                expected[(here, here)] = 4;
                for (dk, ds) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let kk = (k - 1 + dk).rem_euclid(n as i64) + 1;
                    let ss = (s - 1 + ds).rem_euclid(m as i64) + 1;
                    expected[(here, index_of(&labels, t, &format!("x({kk},{ss})")))] -= 1;
                }
            }
        }
        assert_eq!(lap.entries(), &expected, "{n}x{m}");
        let lap2 = assemble_laplacian(t, 2, OrderingKind::Canonical).unwrap();
        assert_eq!(lap2.entries(), &expected, "{n}x{m} faces");
    }
}

#[test]
fn laplacians_are_products_of_transposes() {
    for (n, m) in SHAPES {
        let t = GridShape::torus(n, m).unwrap();
        let a = d_from_boundary(t, 0, OrderingKind::Canonical);
        let b = d_from_boundary(t, 1, OrderingKind::Canonical);
        let expect = [
            a.transpose() * &a,
            &a * a.transpose() + b.transpose() * &b,
            &b * b.transpose(),
        ];
        for (r, e) in expect.iter().enumerate() {
            let lap = assemble_laplacian(t, r, OrderingKind::Canonical).unwrap();
            assert_eq!(lap.entries(), e, "{n}x{m} r={r}");
            assert!(lap.is_symmetric());
        }
    }
}

#[test]
fn dirac_squares_to_block_laplacian() {
    for (n, m) in [(1, 1), (2, 2), (3, 2), (4, 3)] {
        let t = GridShape::torus(n, m).unwrap();
        let dirac = assemble_dirac(t, OrderingKind::Canonical).unwrap();
        let sq = dirac.entries() * dirac.entries();
        let mut offset = 0;
        for r in 0..=2 {
            let lap = assemble_laplacian(t, r, OrderingKind::Canonical).unwrap();
            let len = lap.rows().len();
            assert_eq!(sq.view((offset, offset), (len, len)), lap.entries().view((0, 0), (len, len)));
            offset += len;
        }
        let zero_off_diagonal = (0..offset).all(|i| {
            (0..offset).all(|j| {
                let block = |x: usize| if x < n * m { 0 } else if x < 3 * n * m { 1 } else { 2 };
                block(i) == block(j) || sq[(i, j)] == 0
            })
        });
        assert!(zero_off_diagonal);
    }
}
