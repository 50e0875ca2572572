//! Discrete forms and the operators acting on them.
//!
//! A [`Form`] of degree `r` stores one real array per component: `φ` for
//! 0-forms, `u` (along `e₁`) and `v` (along `e₂`) for 1-forms and `ψ` for
//! 2-forms. Arrays cover the whole torus, or the window including its ghost
//! ring. Operators that shift indices (`d`, `δ`) only write interior entries on
//! a window.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{DecError, Result};
use crate::grid_complex::{boundary, pairing, CellId, CellKind, Chain, GridShape};

#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    shape: GridShape,
    degree: usize,
    components: Vec<Vec<f64>>,
    annihilated: bool,
}

fn component_count(degree: usize) -> usize {
    if degree == 1 {
        2
    } else {
        1
    }
}

impl Form {
    pub fn zeros(shape: GridShape, degree: usize) -> Form {
        assert!(degree <= 2, "degree {degree} out of range");
        let (ek, es) = shape.extents();
        Form {
            shape,
            degree,
            components: vec![vec![0.0; ek * es]; component_count(degree)],
            annihilated: false,
        }
    }

    pub fn try_zeros(shape: GridShape, degree: usize) -> Result<Form> {
        if degree > 2 {
            return Err(DecError::DegreeOutOfRange(degree));
        }
        Ok(Form::zeros(shape, degree))
    }

    /// The zero element of the trivial space beyond degree 2 (or below 0).
    /// Stored as an all-zero form of the given degree and flagged.
    pub fn annihilated(shape: GridShape, degree: usize) -> Form {
        Form {
            annihilated: true,
            ..Form::zeros(shape, degree)
        }
    }

    /// Builds a form by evaluating `f(component, k, s)` on every addressable index.
    pub fn from_fn(
        shape: GridShape,
        degree: usize,
        mut f: impl FnMut(usize, i64, i64) -> f64,
    ) -> Form {
        let mut form = Form::zeros(shape, degree);
        for (c, arr) in form.components.iter_mut().enumerate() {
            for (o, slot) in arr.iter_mut().enumerate() {
                let (k, s) = shape.index_at(o);
                *slot = f(c, k, s);
            }
        }
        form
    }

    pub fn indicator(shape: GridShape, cell: CellId) -> Result<Form> {
        let mut form = Form::zeros(shape, cell.dim());
        let offset = shape
            .offset(cell.k(), cell.s())
            .ok_or(DecError::CellOutOfRange(cell))?;
        form.components[cell.kind().component()][offset] = 1.0;
        Ok(form)
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_annihilated(&self) -> bool {
        self.annihilated
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.components[c]
    }

    pub fn try_get(&self, c: usize, k: i64, s: i64) -> Option<f64> {
        self.shape.offset(k, s).map(|o| self.components[c][o])
    }

    /// Component value at `(k, s)`; panics if the index is not addressable.
    pub fn get(&self, c: usize, k: i64, s: i64) -> f64 {
        self.try_get(c, k, s)
            .unwrap_or_else(|| panic!("index ({k},{s}) not addressable on {}", self.shape))
    }

    fn get_or_zero(&self, c: usize, k: i64, s: i64) -> f64 {
        self.try_get(c, k, s).unwrap_or(0.0)
    }

    pub fn set(&mut self, c: usize, k: i64, s: i64, value: f64) {
        let o = self
            .shape
            .offset(k, s)
            .unwrap_or_else(|| panic!("index ({k},{s}) not addressable on {}", self.shape));
        self.components[c][o] = value;
    }

    /// Coefficient on a basis cell, `None` if the cell has another dimension or
    /// lies outside the stored range.
    pub fn component(&self, cell: &CellId) -> Option<f64> {
        if cell.dim() != self.degree {
            return None;
        }
        self.try_get(cell.kind().component(), cell.k(), cell.s())
    }

    /// Interior inner product `Σ_{k,s} a_{k,s} b_{k,s}` over the rectangle.
    pub fn dot(&self, other: &Form) -> f64 {
        if self.degree != other.degree {
            return 0.0;
        }
        let mut total = 0.0;
        for c in 0..self.components.len() {
            for (k, s) in self.shape.interior() {
                total += self.get(c, k, s) * other.get(c, k, s);
            }
        }
        total
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute entry over all stored components.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Form {
        self * factor
    }

    fn check_compatible(&self, other: &Form) {
        assert_eq!(self.shape, other.shape, "forms live on different grids");
        assert_eq!(self.degree, other.degree, "forms have different degrees");
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        self.check_compatible(rhs);
        for (a, b) in self.components.iter_mut().zip(&rhs.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.annihilated &= rhs.annihilated;
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self * -1.0
    }
}

impl Mul<f64> for &Form {
    type Output = Form;
    fn mul(self, rhs: f64) -> Form {
        let mut out = self.clone();
        out.components.iter_mut().flatten().for_each(|v| *v *= rhs);
        out
    }
}

/// A triple `(ω⁰, ω¹, ω²)` of forms on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InhomogeneousForm {
    parts: [Form; 3],
}

impl InhomogeneousForm {
    pub fn new(zero: Form, one: Form, two: Form) -> Result<InhomogeneousForm> {
        for (expected, part) in [&zero, &one, &two].into_iter().enumerate() {
            if part.degree() != expected {
                return Err(DecError::DegreeMismatch {
                    expected,
                    found: part.degree(),
                });
            }
        }
        if one.shape() != zero.shape() || two.shape() != zero.shape() {
            return Err(DecError::ShapeMismatch);
        }
        Ok(InhomogeneousForm {
            parts: [zero, one, two],
        })
    }

    pub fn zeros(shape: GridShape) -> InhomogeneousForm {
        InhomogeneousForm {
            parts: [0, 1, 2].map(|r| Form::zeros(shape, r)),
        }
    }

    pub fn shape(&self) -> GridShape {
        self.parts[0].shape()
    }

    pub fn part(&self, degree: usize) -> &Form {
        &self.parts[degree]
    }

    pub fn parts(&self) -> &[Form; 3] {
        &self.parts
    }

    pub fn into_parts(self) -> [Form; 3] {
        self.parts
    }

    /// Graded inner product: the sum of the per-degree inner products.
    pub fn dot(&self, other: &InhomogeneousForm) -> f64 {
        self.parts.iter().zip(&other.parts).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.parts.iter().map(Form::max_abs).fold(0.0, f64::max)
    }
}

impl Add for &InhomogeneousForm {
    type Output = InhomogeneousForm;
    fn add(self, rhs: &InhomogeneousForm) -> InhomogeneousForm {
        InhomogeneousForm {
            parts: [0, 1, 2].map(|r| &self.parts[r] + &rhs.parts[r]),
        }
    }
}

impl Sub for &InhomogeneousForm {
    type Output = InhomogeneousForm;
    fn sub(self, rhs: &InhomogeneousForm) -> InhomogeneousForm {
        InhomogeneousForm {
            parts: [0, 1, 2].map(|r| &self.parts[r] - &rhs.parts[r]),
        }
    }
}

/// Coboundary `d`. A 2-form maps to the annihilated zero.
pub fn d(w: &Form) -> Form {
    let shape = w.shape;
    if w.annihilated {
        return w.clone();
    }
    match w.degree {
        0 => {
            let mut out = Form::zeros(shape, 1);
            for (k, s) in shape.interior() {
                let here = w.get(0, k, s);
                out.set(0, k, s, w.get(0, shape.tau_k(k), s) - here);
                out.set(1, k, s, w.get(0, k, shape.tau_s(s)) - here);
            }
            out
        }
        1 => {
            let mut out = Form::zeros(shape, 2);
            for (k, s) in shape.interior() {
                let dv = w.get(1, shape.tau_k(k), s) - w.get(1, k, s);
                let du = w.get(0, k, shape.tau_s(s)) - w.get(0, k, s);
                out.set(0, k, s, dv - du);
            }
            out
        }
        _ => Form::annihilated(shape, 2),
    }
}

/// Codifferential `δ` by its closed-form stencils. A 0-form maps to the
/// annihilated zero.
pub fn delta(w: &Form) -> Form {
    let shape = w.shape;
    if w.annihilated {
        return w.clone();
    }
    match w.degree {
        0 => Form::annihilated(shape, 0),
        1 => {
            let mut out = Form::zeros(shape, 0);
            for (k, s) in shape.interior() {
                let du = w.get(0, k, s) - w.get(0, shape.sigma_k(k), s);
                let dv = w.get(1, k, s) - w.get(1, k, shape.sigma_s(s));
                out.set(0, k, s, -du - dv);
            }
            out
        }
        _ => {
            let mut out = Form::zeros(shape, 1);
            for (k, s) in shape.interior() {
                let here = w.get(0, k, s);
                out.set(0, k, s, here - w.get(0, k, shape.sigma_s(s)));
                out.set(1, k, s, w.get(0, shape.sigma_k(k), s) - here);
            }
            out
        }
    }
}

/// Codifferential through its definition `(-1)^(r+1) ∗⁻¹ d ∗` on an
/// `(r+1)`-form.
pub fn delta_via_star(w: &Form) -> Result<Form> {
    if w.annihilated || w.degree == 0 {
        return Ok(Form::annihilated(w.shape, 0));
    }
    let inner = star_inv(&d(&star(w)?))?;
    Ok(if w.degree % 2 == 1 { -&inner } else { inner })
}

/// Laplacian `dδ + δd`, assembled per degree so the trivial spaces drop out.
pub fn laplacian(w: &Form) -> Form {
    match w.degree {
        0 => delta(&d(w)),
        1 => &d(&delta(w)) + &delta(&d(w)),
        _ => d(&delta(w)),
    }
}

/// Hodge–Dirac operator `d + δ` on an inhomogeneous form.
pub fn dirac(w: &InhomogeneousForm) -> InhomogeneousForm {
    let [zero, one, two] = w.parts();
    InhomogeneousForm {
        parts: [delta(one), &d(zero) + &delta(two), d(one)],
    }
}

/// Cup product, computed rule by rule from the basis multiplication table.
/// Products whose degrees sum past 2 are the annihilated zero.
pub fn cup(a: &Form, b: &Form) -> Result<Form> {
    if a.shape != b.shape {
        return Err(DecError::ShapeMismatch);
    }
    let shape = a.shape;
    if a.annihilated || b.annihilated || a.degree + b.degree > 2 {
        return Ok(Form::annihilated(shape, 2));
    }
    let mut out = Form::zeros(shape, a.degree + b.degree);
    for (k, s) in shape.addressable() {
        let (tk, ts) = (shape.tau_k(k), shape.tau_s(s));
        match (a.degree, b.degree) {
            // x∪x = x, x∪e₁ = e₁, x∪e₂ = e₂, x∪V = V, all at the same (k, s)
            (0, _) => {
                let coeff = a.get(0, k, s);
                for c in 0..out.component_count() {
                    out.set(c, k, s, coeff * b.get(c, k, s));
                }
            }
            // e₁^{k,s}∪x^{τk,s} = e₁^{k,s}, e₂^{k,s}∪x^{k,τs} = e₂^{k,s}
            (1, 0) => {
                out.set(0, k, s, a.get(0, k, s) * b.get_or_zero(0, tk, s));
                out.set(1, k, s, a.get(1, k, s) * b.get_or_zero(0, k, ts));
            }
            // V^{k,s}∪x^{τk,τs} = V^{k,s}
            (2, 0) => out.set(0, k, s, a.get(0, k, s) * b.get_or_zero(0, tk, ts)),
            // e₁^{k,s}∪e₂^{τk,s} = V^{k,s}, e₂^{k,s}∪e₁^{k,τs} = -V^{k,s}
            (1, 1) => {
                let value = a.get(0, k, s) * b.get_or_zero(1, tk, s)
                    - a.get(1, k, s) * b.get_or_zero(0, k, ts);
                out.set(0, k, s, value);
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// Image of the basis cell `(kind, k, s)` under `∗` (or `∗⁻¹`): target cell
/// kind, target indices and sign. Indices are not yet reduced or range-checked.
fn star_rule(shape: &GridShape, kind: CellKind, k: i64, s: i64, inverse: bool) -> (CellKind, i64, i64, f64) {
    if !inverse {
        match kind {
            CellKind::Vertex => (CellKind::Face, k, s, 1.0),
            CellKind::Edge1 => (CellKind::Edge2, shape.tau_k(k), s, 1.0),
            CellKind::Edge2 => (CellKind::Edge1, k, shape.tau_s(s), -1.0),
            CellKind::Face => (CellKind::Vertex, shape.tau_k(k), shape.tau_s(s), 1.0),
        }
    } else {
        match kind {
            CellKind::Vertex => (CellKind::Face, shape.sigma_k(k), shape.sigma_s(s), 1.0),
            CellKind::Edge1 => (CellKind::Edge2, k, shape.sigma_s(s), -1.0),
            CellKind::Edge2 => (CellKind::Edge1, shape.sigma_k(k), s, 1.0),
            CellKind::Face => (CellKind::Vertex, k, s, 1.0),
        }
    }
}

fn star_map(w: &Form, inverse: bool, strict: bool) -> Result<Form> {
    let shape = w.shape;
    let mut out = Form::zeros(shape, 2 - w.degree);
    for (c, arr) in w.components.iter().enumerate() {
        let kind = CellKind::from_component(w.degree, c);
        for (o, &value) in arr.iter().enumerate() {
            let (k, s) = shape.index_at(o);
            let (target, tk, ts, sign) = star_rule(&shape, kind, k, s, inverse);
            match shape.offset(tk, ts) {
                Some(to) => out.components[target.component()][to] += sign * value,
                None if strict && value != 0.0 => {
                    return Err(DecError::StarUndefinedOnWindowBoundary(shape.cell(kind, k, s)))
                }
                None => {}
            }
        }
    }
    Ok(out)
}

/// Hodge star `∗`: `x ↦ V`, `e₁^{k,s} ↦ e₂^{τk,s}`, `e₂^{k,s} ↦ -e₁^{k,τs}`,
/// `V^{k,s} ↦ x^{τk,τs}`. On a window, a nonzero component whose image leaves
/// the ghost ring is an error.
pub fn star(w: &Form) -> Result<Form> {
    star_map(w, false, true)
}

pub fn star_inv(w: &Form) -> Result<Form> {
    star_map(w, true, true)
}

/// `∗` that drops images falling outside the stored range. Only used where the
/// result is read at cells the dropped entries cannot reach.
fn star_truncated(w: &Form) -> Form {
    star_map(w, false, false).expect("non-strict star cannot fail")
}

/// Inner product straight from its definition `⟨window, a ∪ ∗b⟩`. Forms of
/// different degrees are orthogonal.
pub fn inner_product_on(a: &Form, b: &Form, window: &Chain) -> Result<f64> {
    if a.shape != b.shape {
        return Err(DecError::ShapeMismatch);
    }
    if window.dim() != 2 {
        return Err(DecError::DegreeMismatch {
            expected: 2,
            found: window.dim(),
        });
    }
    if a.degree != b.degree {
        return Ok(0.0);
    }
    pairing(window, &cup(a, &star_truncated(b))?)
}

/// Inner product over the rectangle `1..=n x 1..=m`, summed componentwise.
pub fn inner_product(a: &Form, b: &Form) -> Result<f64> {
    if a.shape != b.shape {
        return Err(DecError::ShapeMismatch);
    }
    Ok(a.dot(b))
}

/// Boundary term `⟨∂window, φ ∪ ∗ω⟩` of the discrete Stokes identity for an
/// `r`-form `φ` and an `(r+1)`-form `ω`.
pub fn boundary_term(phi: &Form, omega: &Form, window: &Chain) -> Result<f64> {
    if phi.shape != omega.shape {
        return Err(DecError::ShapeMismatch);
    }
    if omega.degree != phi.degree + 1 {
        return Err(DecError::DegreeMismatch {
            expected: phi.degree + 1,
            found: omega.degree,
        });
    }
    let edge = boundary(window, &phi.shape);
    if edge.is_zero() {
        return Ok(0.0);
    }
    pairing(&edge, &cup(phi, &star_truncated(omega))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_complex::rectangle;

    fn torus(n: usize, m: usize) -> GridShape {
        GridShape::torus(n, m).unwrap()
    }

    fn ind(shape: GridShape, kind: CellKind, k: i64, s: i64) -> Form {
        Form::indicator(shape, shape.cell(kind, k, s)).unwrap()
    }

    #[test]
    fn d_of_vertex_indicator_is_first_column_of_a() {
        let t = torus(2, 2);
        let dphi = d(&ind(t, CellKind::Vertex, 1, 1));
        assert_eq!(dphi.get(0, 1, 1), -1.0);
        assert_eq!(dphi.get(0, 2, 1), 1.0);
        assert_eq!(dphi.get(0, 1, 2), 0.0);
        assert_eq!(dphi.get(1, 1, 1), -1.0);
        assert_eq!(dphi.get(1, 1, 2), 1.0);
        assert_eq!(dphi.get(1, 2, 1), 0.0);
    }

    #[test]
    fn d_of_constant_vanishes() {
        let t = torus(3, 4);
        assert!(d(&Form::from_fn(t, 0, |_, _, _| 2.5)).is_zero());
    }

    #[test]
    fn d_of_single_u_component() {
        let t = torus(2, 2);
        let dw = d(&ind(t, CellKind::Edge1, 1, 1));
        assert_eq!(dw.get(0, 1, 1), 1.0);
        assert_eq!(dw.get(0, 1, 2), -1.0);
        assert_eq!(dw.get(0, 2, 1), 0.0);
        assert_eq!(dw.get(0, 2, 2), 0.0);
    }

    #[test]
    fn d_of_two_form_is_annihilated() {
        let t = torus(2, 2);
        let out = d(&ind(t, CellKind::Face, 1, 1));
        assert!(out.is_annihilated() && out.is_zero());
        assert!(delta(&ind(t, CellKind::Vertex, 1, 1)).is_annihilated());
    }

    #[test]
    fn cup_table_samples() {
        let t = torus(2, 2);
        let x11 = ind(t, CellKind::Vertex, 1, 1);
        let e1 = ind(t, CellKind::Edge1, 1, 1);
        assert_eq!(cup(&x11, &e1).unwrap(), e1);
        let v = cup(&e1, &ind(t, CellKind::Edge2, 2, 1)).unwrap();
        assert_eq!(v, ind(t, CellKind::Face, 1, 1));
        let z = cup(&e1, &e1).unwrap();
        assert_eq!(z.degree(), 2);
        assert!(z.is_zero());
        // e₂^{k,s} ∪ e₁^{k,τs} = -V^{k,s}
        let neg = cup(&ind(t, CellKind::Edge2, 1, 1), &ind(t, CellKind::Edge1, 1, 2)).unwrap();
        assert_eq!(neg, -&ind(t, CellKind::Face, 1, 1));
        // V^{k,s} ∪ x^{τk,τs} = V^{k,s}
        let vx = cup(&ind(t, CellKind::Face, 1, 1), &ind(t, CellKind::Vertex, 2, 2)).unwrap();
        assert_eq!(vx, ind(t, CellKind::Face, 1, 1));
        assert!(cup(&e1, &ind(t, CellKind::Face, 1, 1)).unwrap().is_annihilated());
        assert_eq!(cup(&x11, &Form::zeros(torus(3, 3), 0)), Err(DecError::ShapeMismatch));
    }

    #[test]
    fn star_samples() {
        let t = torus(2, 2);
        assert_eq!(star(&ind(t, CellKind::Vertex, 1, 1)).unwrap(), ind(t, CellKind::Face, 1, 1));
        let e = ind(t, CellKind::Edge1, 1, 2);
        let twice = star(&star(&e).unwrap()).unwrap();
        assert_eq!(twice, -&ind(t, CellKind::Edge1, 2, 1));
        assert_eq!(star_inv(&ind(t, CellKind::Face, 1, 1)).unwrap(), ind(t, CellKind::Vertex, 1, 1));
        let inv = star_inv(&ind(t, CellKind::Edge1, 1, 1)).unwrap();
        assert_eq!(inv, -&ind(t, CellKind::Edge2, 1, 2));
        assert_eq!(star(&inv).unwrap(), ind(t, CellKind::Edge1, 1, 1));
    }

    #[test]
    fn star_on_window_refuses_to_drop_components() {
        let w = GridShape::window(3, 3).unwrap();
        // e₁ at k = n+1 maps to e₂ at k = n+2, outside the ghost ring
        let err = star(&ind(w, CellKind::Edge1, 4, 2)).unwrap_err();
        assert!(matches!(err, DecError::StarUndefinedOnWindowBoundary(_)));
        let err = star_inv(&ind(w, CellKind::Vertex, 0, 1)).unwrap_err();
        assert!(matches!(err, DecError::StarUndefinedOnWindowBoundary(_)));
        assert!(star(&ind(w, CellKind::Edge1, 2, 2)).is_ok());
    }

    #[test]
    fn delta_of_face_indicator() {
        let t = torus(2, 2);
        let dpsi = delta(&ind(t, CellKind::Face, 1, 1));
        let expected = &(&ind(t, CellKind::Edge1, 1, 1) - &ind(t, CellKind::Edge1, 1, 2))
            + &(&ind(t, CellKind::Edge2, 2, 1) - &ind(t, CellKind::Edge2, 1, 1));
        assert_eq!(dpsi, expected);
    }

    #[test]
    fn delta_paths_agree_on_indicators() {
        for (n, m) in [(1, 1), (2, 2), (3, 2), (4, 3)] {
            let t = torus(n, m);
            for kind in [CellKind::Edge1, CellKind::Edge2, CellKind::Face] {
                for (k, s) in t.interior() {
                    let w = ind(t, kind, k, s);
                    assert_eq!(delta(&w), delta_via_star(&w).unwrap(), "{kind:?} ({k},{s}) on {t}");
                }
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let t = torus(2, 2);
        let phi = ind(t, CellKind::Vertex, 1, 1);
        assert_eq!(inner_product(&phi, &phi).unwrap(), 1.0);
        assert_eq!(inner_product_on(&phi, &phi, &rectangle(&t)).unwrap(), 1.0);
        let e = ind(t, CellKind::Edge1, 1, 1);
        assert_eq!(inner_product(&phi, &e).unwrap(), 0.0);
        assert_eq!(inner_product_on(&phi, &e, &rectangle(&t)).unwrap(), 0.0);

        let t23 = torus(2, 3);
        let w = Form::from_fn(t23, 1, |c, _, _| if c == 0 { 1.0 } else { 2.0 });
        assert_eq!(inner_product(&w, &w).unwrap(), 30.0);
        assert_eq!(inner_product_on(&w, &w, &rectangle(&t23)).unwrap(), 30.0);
    }

    #[test]
    fn boundary_term_vanishes_for_zero_phi() {
        let w = GridShape::window(3, 3).unwrap();
        let omega = Form::from_fn(w, 1, |c, k, s| (c as f64 + 1.0) * (k * 3 + s) as f64);
        let bt = boundary_term(&Form::zeros(w, 0), &omega, &rectangle(&w)).unwrap();
        assert_eq!(bt, 0.0);
        assert!(boundary_term(&Form::zeros(w, 0), &Form::zeros(w, 2), &rectangle(&w)).is_err());
    }

    #[test]
    fn boundary_term_matches_expanded_sums() {
        let (n, m) = (3i64, 2i64);
        let w = GridShape::window(n as usize, m as usize).unwrap();
        let phi0 = Form::from_fn(w, 0, |_, k, s| (k * 7 - s * 3 + 1) as f64);
        let om1 = Form::from_fn(w, 1, |c, k, s| (k * s + 2 * c as i64 - k) as f64);
        let mut expected = 0.0;
        for k in 1..=n {
            expected += phi0.get(0, k, m + 1) * om1.get(1, k, m) - phi0.get(0, k, 1) * om1.get(1, k, 0);
        }
        for s in 1..=m {
            expected += phi0.get(0, n + 1, s) * om1.get(0, n, s) - phi0.get(0, 1, s) * om1.get(0, 0, s);
        }
        assert_eq!(boundary_term(&phi0, &om1, &rectangle(&w)).unwrap(), expected);

        let phi1 = Form::from_fn(w, 1, |c, k, s| (3 * k - s + 5 * c as i64) as f64);
        let om2 = Form::from_fn(w, 2, |_, k, s| (k - 2 * s + k * s) as f64);
        let mut expected = 0.0;
        for k in 1..=n {
            expected += phi1.get(0, k, 1) * om2.get(0, k, 0) - phi1.get(0, k, m + 1) * om2.get(0, k, m);
        }
        for s in 1..=m {
            expected += phi1.get(1, n + 1, s) * om2.get(0, n, s) - phi1.get(1, 1, s) * om2.get(0, 0, s);
        }
        assert_eq!(boundary_term(&phi1, &om2, &rectangle(&w)).unwrap(), expected);
    }

    #[test]
    fn inhomogeneous_parts_are_checked() {
        let t = torus(2, 2);
        let bad = InhomogeneousForm::new(Form::zeros(t, 1), Form::zeros(t, 1), Form::zeros(t, 2));
        assert!(bad.is_err());
        let mixed = InhomogeneousForm::new(Form::zeros(t, 0), Form::zeros(torus(3, 2), 1), Form::zeros(t, 2));
        assert_eq!(mixed, Err(DecError::ShapeMismatch));
    }
}
