//! Cohomology of the combinatorial torus over the rationals.
//!
//! Everything here is exact: ranks come from fraction-free elimination of the
//! integer coboundary matrices, kernels and preimages from rational row
//! reduction. Forms are read in the canonical basis, converting each `f64`
//! component to the rational it represents exactly.

use num_traits::{ToPrimitive, Zero};

use crate::calculus::Form;
use crate::error::{DecError, Result};
use crate::exact::{self, clear_denominators, rational_from_f64, rational_to_f64, Rational, RationalMatrix};
use crate::grid_complex::GridShape;
use crate::operators::{assemble_d, BasisOrdering, OrderingKind};

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyResult {
    pub betti: [usize; 3],
    /// Integer-valued closed forms whose classes form a basis of each group.
    pub generators: [Vec<Form>; 3],
    /// Rank of `d` on each degree (zero on 2-forms).
    pub ranks: [usize; 3],
}

/// Outcome of an exactness test. `preimage` is a `φ` with `dφ = w`, absent for
/// 0-forms (the zero 0-form is the only exact one).
#[derive(Debug, Clone, PartialEq)]
pub struct Exactness {
    pub exact: bool,
    pub preimage: Option<Form>,
}

fn d_ranks(shape: GridShape) -> Result<[usize; 3]> {
    shape.require_torus()?;
    let r0 = exact::rank(assemble_d(shape, 0, OrderingKind::Canonical)?.entries());
    let r1 = exact::rank(assemble_d(shape, 1, OrderingKind::Canonical)?.entries());
    Ok([r0, r1, 0])
}

pub fn betti_numbers(shape: GridShape) -> Result<[usize; 3]> {
    let [r0, r1, _] = d_ranks(shape)?;
    let nm = shape.n() * shape.m();
    Ok([nm - r0, 2 * nm - r1 - r0, nm - r1])
}

pub fn cohomology(shape: GridShape) -> Result<CohomologyResult> {
    let ranks = d_ranks(shape)?;
    Ok(CohomologyResult {
        betti: betti_numbers(shape)?,
        generators: [generators(shape, 0)?, generators(shape, 1)?, generators(shape, 2)?],
        ranks,
    })
}

fn to_rational(form: &Form) -> Result<Vec<Rational>> {
    let ordering = BasisOrdering::canonical(form.shape(), form.degree())?;
    let values = ordering.vectorize(form)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DecError::SolverFailure("non-finite form component".into()));
    }
    Ok(values.into_iter().map(rational_from_f64).collect())
}

fn from_rational(shape: GridShape, degree: usize, values: &[Rational]) -> Result<Form> {
    let floats: Vec<f64> = values.iter().map(rational_to_f64).collect();
    BasisOrdering::canonical(shape, degree)?.devectorize(&floats)
}

fn d_matrix(shape: GridShape, degree: usize) -> Result<RationalMatrix> {
    Ok(RationalMatrix::from_integer(
        assemble_d(shape, degree, OrderingKind::Canonical)?.entries(),
    ))
}

fn columns(matrix: &RationalMatrix, which: &[usize]) -> Vec<Vec<Rational>> {
    which
        .iter()
        .map(|&j| (0..matrix.rows()).map(|i| matrix.get(i, j).clone()).collect())
        .collect()
}

/// Closed integer forms spanning `ker d_r / im d_{r-1}`. A basis of the exact
/// forms is extended by kernel vectors taken in the order the row reduction
/// produces them, keeping each one that raises the rank.
pub fn generators(shape: GridShape, degree: usize) -> Result<Vec<Form>> {
    shape.require_torus()?;
    if degree > 2 {
        return Err(DecError::DegreeOutOfRange(degree));
    }
    let dim = shape.cell_count(degree);
    let mut spanned = if degree == 0 {
        Vec::new()
    } else {
        let prev = d_matrix(shape, degree - 1)?;
        let (_, pivots) = prev.rref();
        columns(&prev, &pivots)
    };
    let kernel = if degree == 2 {
        (0..dim)
            .map(|i| {
                let mut v = vec![Rational::zero(); dim];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        d_matrix(shape, degree)?.null_space()
    };
    let mut rank = RationalMatrix::from_columns(dim, &spanned).rank();
    let mut out = Vec::new();
    for candidate in kernel {
        spanned.push(candidate.clone());
        let next = RationalMatrix::from_columns(dim, &spanned).rank();
        if next == rank {
            spanned.pop();
            continue;
        }
        rank = next;
        let ints = clear_denominators(&candidate);
        let values: Vec<f64> = ints
            .iter()
            .map(|x| x.to_i64().expect("small generator coefficient") as f64)
            .collect();
        out.push(BasisOrdering::canonical(shape, degree)?.devectorize(&values)?);
    }
    Ok(out)
}

pub fn is_closed(w: &Form) -> Result<bool> {
    w.shape().require_torus()?;
    if w.degree() == 2 {
        return Ok(true);
    }
    let dw = d_matrix(w.shape(), w.degree())?.mul_vec(&to_rational(w)?);
    Ok(exact::is_zero_vector(&dw))
}

/// Whether a closed form lies in the image of `d`, with a preimage when it does.
pub fn is_exact(w: &Form) -> Result<Exactness> {
    if !is_closed(w)? {
        return Err(DecError::NotClosed);
    }
    let shape = w.shape();
    let target = to_rational(w)?;
    if w.degree() == 0 {
        return Ok(Exactness {
            exact: exact::is_zero_vector(&target),
            preimage: None,
        });
    }
    match d_matrix(shape, w.degree() - 1)?.solve(&target) {
        Some(x) => Ok(Exactness {
            exact: true,
            preimage: Some(from_rational(shape, w.degree() - 1, &x)?),
        }),
        None => Ok(Exactness {
            exact: false,
            preimage: None,
        }),
    }
}

/// Whether two closed forms differ by an exact form.
pub fn cohomologous(a: &Form, b: &Form) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(DecError::ShapeMismatch);
    }
    if a.degree() != b.degree() {
        return Err(DecError::DegreeMismatch {
            expected: a.degree(),
            found: b.degree(),
        });
    }
    if !is_closed(a)? || !is_closed(b)? {
        return Err(DecError::NotClosed);
    }
    Ok(is_exact(&(a - b))?.exact)
}
