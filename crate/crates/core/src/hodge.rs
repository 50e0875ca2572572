//! Harmonic forms, Hodge decomposition and the Hodge–Dirac source problem on
//! the torus.
//!
//! Spectral data is computed once per `(n, m, degree)` and shared: a dense
//! symmetric eigendecomposition of the Laplacian (or Dirac) matrix in the
//! canonical basis gives the pseudo-inverse used as Green's operator, with
//! eigenvalues at or below `1e-9 * λ_max` treated as kernel. Harmonic bases
//! come from the exact rational kernel of the integer Laplacian and are then
//! orthonormalized in floating point.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::calculus::{self, Form, InhomogeneousForm};
use crate::error::{DecError, Result};
use crate::exact::{rational_to_f64, RationalMatrix};
use crate::grid_complex::GridShape;
use crate::operators::{assemble_dirac, assemble_laplacian, BasisOrdering, OrderingKind};

/// Relative eigenvalue cutoff separating the kernel from the rest of the spectrum.
pub const KERNEL_THRESHOLD: f64 = 1e-9;
/// Relative size of the harmonic component tolerated in a Dirac right-hand side.
pub const HARMONIC_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub multiplicity_zero: usize,
    /// `None` when the operator is identically zero.
    pub lambda_min_positive: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDecomposition {
    pub exact: Form,
    pub coexact: Form,
    pub harmonic: Form,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracSolution {
    pub omega: InhomogeneousForm,
    /// `‖(d + δ)Ω − F‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub lhs: f64,
    pub rhs: f64,
    pub c: f64,
}

impl EnergyEstimate {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

struct SpectralData {
    ordering: BasisOrdering,
    spectrum: Spectrum,
    pseudo_inverse: DMatrix<f64>,
    /// Orthonormal kernel basis, canonical coordinates.
    kernel: Vec<DVector<f64>>,
}

type Key = (usize, usize, usize);

struct Cache {
    slots: Mutex<BTreeMap<Key, Arc<OnceLock<Arc<SpectralData>>>>>,
}

impl Cache {
    const fn new() -> Self {
        Cache {
            slots: Mutex::new(BTreeMap::new()),
        }
    }

    fn get_or_init(&self, key: Key, init: impl FnOnce() -> SpectralData) -> Arc<SpectralData> {
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock poisoned");
            slots.entry(key).or_default().clone()
        };
        slot.get_or_init(|| Arc::new(init())).clone()
    }
}

static LAPLACIANS: Cache = Cache::new();
static DIRAC: Cache = Cache::new();

fn eigen_data(matrix: DMatrix<f64>) -> (Spectrum, DMatrix<f64>) {
    let dim = matrix.nrows();
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lambda_max = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cutoff = KERNEL_THRESHOLD * lambda_max;
    let mut pseudo_inverse = DMatrix::zeros(dim, dim);
    let mut multiplicity_zero = 0;
    let mut lambda_min_positive: Option<f64> = None;
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        if lambda.abs() <= cutoff {
            multiplicity_zero += 1;
            continue;
        }
        if lambda > 0.0 {
            lambda_min_positive = Some(lambda_min_positive.map_or(lambda, |l| l.min(lambda)));
        }
        let v = eig.eigenvectors.column(i);
        pseudo_inverse += (v * v.transpose()) / lambda;
    }
    let spectrum = Spectrum {
        eigenvalues,
        multiplicity_zero,
        lambda_min_positive,
    };
    (spectrum, pseudo_inverse)
}

/// Modified Gram–Schmidt, in input order.
fn orthonormalize(vectors: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        assert!(norm > 1e-12, "dependent kernel vectors");
        basis.push(v / norm);
    }
    basis
}

fn exact_kernel(entries: &DMatrix<i64>) -> Vec<DVector<f64>> {
    let kernel = RationalMatrix::from_integer(entries).null_space();
    orthonormalize(
        kernel
            .iter()
            .map(|v| DVector::from_iterator(v.len(), v.iter().map(rational_to_f64)))
            .collect(),
    )
}

fn laplacian_data(shape: GridShape, degree: usize) -> Result<Arc<SpectralData>> {
    shape.require_torus()?;
    if degree > 2 {
        return Err(DecError::DegreeOutOfRange(degree));
    }
    Ok(LAPLACIANS.get_or_init((shape.n(), shape.m(), degree), || {
        let lap = assemble_laplacian(shape, degree, OrderingKind::Canonical).expect("torus laplacian");
        let (spectrum, pseudo_inverse) = eigen_data(lap.to_f64());
        SpectralData {
            ordering: lap.rows().clone(),
            spectrum,
            pseudo_inverse,
            kernel: exact_kernel(lap.entries()),
        }
    }))
}

fn dirac_data(shape: GridShape) -> Result<Arc<SpectralData>> {
    shape.require_torus()?;
    Ok(DIRAC.get_or_init((shape.n(), shape.m(), 3), || {
        let dirac = assemble_dirac(shape, OrderingKind::Canonical).expect("torus dirac");
        let (spectrum, pseudo_inverse) = eigen_data(dirac.to_f64());
        SpectralData {
            ordering: dirac.rows().clone(),
            spectrum,
            pseudo_inverse,
            kernel: exact_kernel(dirac.entries()),
        }
    }))
}

/// Orthonormal basis of the kernel of the degree-`r` Laplacian.
pub fn harmonic_basis(shape: GridShape, degree: usize) -> Result<Vec<Form>> {
    let data = laplacian_data(shape, degree)?;
    data.kernel
        .iter()
        .map(|h| data.ordering.devectorize(h.as_slice()))
        .collect()
}

/// Orthogonal projection onto the harmonic forms of the same degree.
pub fn harmonic_part(w: &Form) -> Result<Form> {
    let data = laplacian_data(w.shape(), w.degree())?;
    let x = DVector::from_vec(data.ordering.vectorize(w)?);
    let mut proj = DVector::zeros(x.len());
    for h in &data.kernel {
        proj += h * h.dot(&x);
    }
    data.ordering.devectorize(proj.as_slice())
}

/// Removes the harmonic component of every part, leaving an element of
/// `R_d ⊕ R_δ`.
pub fn remove_harmonic(w: &InhomogeneousForm) -> Result<InhomogeneousForm> {
    let harmonic = harmonic_projection(w)?;
    Ok(w - &harmonic)
}

/// Part-by-part harmonic projection of an inhomogeneous form.
pub fn harmonic_projection(w: &InhomogeneousForm) -> Result<InhomogeneousForm> {
    let [a, b, c] = w.parts();
    InhomogeneousForm::new(harmonic_part(a)?, harmonic_part(b)?, harmonic_part(c)?)
}

pub fn spectrum(shape: GridShape, degree: usize) -> Result<Spectrum> {
    Ok(laplacian_data(shape, degree)?.spectrum.clone())
}

/// Orthonormal basis of the kernel of the Hodge–Dirac matrix.
pub fn dirac_kernel(shape: GridShape) -> Result<Vec<InhomogeneousForm>> {
    let data = dirac_data(shape)?;
    data.kernel
        .iter()
        .map(|h| data.ordering.devectorize_graded(h.as_slice()))
        .collect()
}

/// Spectrum of the Hodge–Dirac matrix on the graded basis.
pub fn dirac_spectrum(shape: GridShape) -> Result<Spectrum> {
    Ok(dirac_data(shape)?.spectrum.clone())
}

/// Splits a form into exact, coexact and harmonic parts.
pub fn decompose(w: &Form) -> Result<HodgeDecomposition> {
    let shape = w.shape();
    let data = laplacian_data(shape, w.degree())?;
    let harmonic = harmonic_part(w)?;
    let rest = DVector::from_vec(data.ordering.vectorize(&(w - &harmonic))?);
    let green = data.ordering.devectorize((&data.pseudo_inverse * rest).as_slice())?;
    let degree = w.degree();
    let exact = if degree >= 1 {
        calculus::d(&calculus::delta(&green))
    } else {
        Form::zeros(shape, degree)
    };
    let coexact = if degree <= 1 {
        calculus::delta(&calculus::d(&green))
    } else {
        Form::zeros(shape, degree)
    };
    let residual_norm = (&(&(w - &exact) - &coexact) - &harmonic).norm();
    if !residual_norm.is_finite() {
        return Err(DecError::SolverFailure("non-finite residual".into()));
    }
    Ok(HodgeDecomposition {
        exact,
        coexact,
        harmonic,
        residual_norm,
    })
}

/// Solves `(d + δ)Ω = F` for the unique `Ω ∈ R_d ⊕ R_δ`.
pub fn solve_dirac(rhs: &InhomogeneousForm) -> Result<DiracSolution> {
    let shape = rhs.shape();
    let data = dirac_data(shape)?;
    let rhs_norm = rhs.norm();
    if rhs_norm == 0.0 {
        return Ok(DiracSolution {
            omega: InhomogeneousForm::zeros(shape),
            residual: 0.0,
        });
    }
    let harmonic_norm = harmonic_projection(rhs)?.norm();
    if harmonic_norm > HARMONIC_TOLERANCE * rhs_norm {
        return Err(DecError::NotInRange { harmonic_norm });
    }
    let x = DVector::from_vec(data.ordering.vectorize_graded(rhs)?);
    let omega = data
        .ordering
        .devectorize_graded((&data.pseudo_inverse * x).as_slice())?;
    let residual = (&calculus::dirac(&omega) - rhs).norm();
    if !residual.is_finite() || residual > 1e-6 * rhs_norm {
        return Err(DecError::SolverFailure(format!("residual {residual:e}")));
    }
    Ok(DiracSolution { omega, residual })
}

/// Both sides of `‖Ω‖² ≤ c(‖dΩ‖² + ‖δΩ‖²) + ‖Ω_Δ‖²` with `c = 1/λ`, `λ` the
/// smallest positive eigenvalue over the three Laplacians.
pub fn energy_estimate_check(omega: &InhomogeneousForm) -> Result<EnergyEstimate> {
    let shape = omega.shape();
    let mut lambda: Option<f64> = None;
    for r in 0..=2 {
        if let Some(l) = spectrum(shape, r)?.lambda_min_positive {
            lambda = Some(lambda.map_or(l, |x| x.min(l)));
        }
    }
    let c = lambda.map_or(0.0, |l| 1.0 / l);
    let [w0, w1, w2] = omega.parts();
    let d_sq = calculus::d(w0).norm_sq() + calculus::d(w1).norm_sq();
    let delta_sq = calculus::delta(w1).norm_sq() + calculus::delta(w2).norm_sq();
    let harmonic_sq = harmonic_projection(omega)?.norm_sq();
    Ok(EnergyEstimate {
        lhs: omega.norm_sq(),
        rhs: c * (d_sq + delta_sq) + harmonic_sq,
        c,
    })
}
