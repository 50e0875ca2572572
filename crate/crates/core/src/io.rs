//! JSON and CSV documents for forms and operator matrices, and the embedded
//! 2x2 reference fixtures.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{Form, InhomogeneousForm};
use crate::error::DecError;
use crate::grid_complex::{GridShape, Topology};
use crate::operators::{BasisOrdering, Op, OperatorMatrix, OrderingKind};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dec(#[from] DecError),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

/// Row labels, column labels and entries of a labelled integer matrix.
pub type LabelledEntries = (Vec<String>, Vec<String>, Vec<Vec<i64>>);

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeDocument {
    pub n: usize,
    pub m: usize,
    pub topology: Topology,
}

impl ShapeDocument {
    pub fn to_shape(self) -> IoResult<GridShape> {
        Ok(GridShape::new(self.n, self.m, self.topology)?)
    }
}

impl From<GridShape> for ShapeDocument {
    fn from(shape: GridShape) -> Self {
        ShapeDocument {
            n: shape.n(),
            m: shape.m(),
            topology: shape.topology(),
        }
    }
}

fn component_names(degree: usize) -> &'static [&'static str] {
    match degree {
        0 => &["phi"],
        1 => &["u", "v"],
        _ => &["psi"],
    }
}

/// A form as JSON. Each component is a list of rows, one row per `s` (outer)
/// holding the values for every `k`; windows include the ghost ring, so rows
/// start at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDocument {
    pub shape: ShapeDocument,
    pub degree: usize,
    pub components: BTreeMap<String, Vec<Vec<f64>>>,
}

impl FormDocument {
    pub fn from_form(form: &Form) -> FormDocument {
        let shape = form.shape();
        let (ek, _) = shape.extents();
        let components = component_names(form.degree())
            .iter()
            .zip(form.components())
            .map(|(name, arr)| (name.to_string(), arr.chunks(ek).map(<[f64]>::to_vec).collect()))
            .collect();
        FormDocument {
            shape: shape.into(),
            degree: form.degree(),
            components,
        }
    }

    pub fn to_form(&self) -> IoResult<Form> {
        let shape = self.shape.to_shape()?;
        let mut form = Form::try_zeros(shape, self.degree)?;
        let names = component_names(self.degree);
        if self.components.len() != names.len() || !names.iter().all(|n| self.components.contains_key(*n)) {
            return Err(invalid(format!(
                "degree {} expects components {:?}, found {:?}",
                self.degree,
                names,
                self.components.keys().collect::<Vec<_>>()
            )));
        }
        let (ek, es) = shape.extents();
        for (c, name) in names.iter().enumerate() {
            let rows = &self.components[*name];
            if rows.len() != es || rows.iter().any(|r| r.len() != ek) {
                return Err(invalid(format!("component '{name}' must be {es} rows of {ek} values")));
            }
            if rows.iter().flatten().any(|v| !v.is_finite()) {
                return Err(invalid(format!("component '{name}' has a non-finite value")));
            }
            form.component_mut(c).copy_from_slice(&rows.concat());
        }
        Ok(form)
    }

    pub fn parse(text: &str) -> IoResult<FormDocument> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InhomogeneousDocument {
    pub shape: ShapeDocument,
    /// Degree 0, 1 and 2 parts, in that order.
    pub parts: Vec<FormDocument>,
}

impl InhomogeneousDocument {
    pub fn from_form(form: &InhomogeneousForm) -> Self {
        InhomogeneousDocument {
            shape: form.shape().into(),
            parts: form.parts().iter().map(FormDocument::from_form).collect(),
        }
    }

    pub fn to_form(&self) -> IoResult<InhomogeneousForm> {
        if self.parts.len() != 3 {
            return Err(invalid(format!("expected 3 parts, found {}", self.parts.len())));
        }
        let mut forms = Vec::with_capacity(3);
        for (r, part) in self.parts.iter().enumerate() {
            if part.shape != self.shape {
                return Err(invalid(format!("part {r} has a different shape")));
            }
            forms.push(part.to_form()?);
        }
        let two = forms.pop().unwrap();
        let one = forms.pop().unwrap();
        let zero = forms.pop().unwrap();
        Ok(InhomogeneousForm::new(zero, one, two)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixShape {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub op: String,
    pub shape: MatrixShape,
    pub ordering: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl MatrixDocument {
    pub fn new(op: Op, matrix: &OperatorMatrix) -> MatrixDocument {
        let shape = matrix.rows().shape();
        MatrixDocument {
            op: op.name().to_string(),
            shape: MatrixShape {
                n: shape.n(),
                m: shape.m(),
            },
            ordering: matrix.rows().kind().name().to_string(),
            row_labels: matrix.rows().label_strings(),
            col_labels: matrix.cols().label_strings(),
            entries: matrix.to_rows(),
        }
    }

    pub fn validate(&self) -> IoResult<()> {
        if self.entries.len() != self.row_labels.len() {
            return Err(invalid("row label count does not match entries"));
        }
        if self.entries.iter().any(|r| r.len() != self.col_labels.len()) {
            return Err(invalid("column label count does not match entries"));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> IoResult<MatrixDocument> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    /// CSV layout: a header row with an empty corner cell followed by the
    /// column labels, then one row per output cell led by its label.
    pub fn to_csv(&self) -> IoResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.col_labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(i64::to_string));
            w.write_record(&record)?;
        }
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }

    /// Labels and entries recovered from [`MatrixDocument::to_csv`] output.
    pub fn parse_csv(text: &str) -> IoResult<LabelledEntries> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut records = r.records();
        let header = records.next().ok_or_else(|| invalid("empty CSV"))??;
        let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for record in records {
            let record = record?;
            rows.push(record.get(0).unwrap_or_default().to_string());
            let values = record
                .iter()
                .skip(1)
                .map(|v| v.parse::<i64>().map_err(|e| invalid(format!("entry '{v}': {e}"))))
                .collect::<IoResult<Vec<_>>>()?;
            entries.push(values);
        }
        Ok((rows, cols, entries))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct FixtureOrderings {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub faces: Vec<String>,
}

/// The hand-transcribed 2x2 torus matrices.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReferenceFixtures {
    pub orderings: FixtureOrderings,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<i64>>,
    #[serde(rename = "D1")]
    pub d1: Vec<Vec<i64>>,
}

const EMBEDDED_FIXTURES: &str = include_str!("../fixtures/torus_2x2.json");
pub const FIXTURE_FILE: &str = "torus_2x2.json";
pub const FIXTURE_DIR_ENV: &str = "DEC_FIXTURE_DIR";

fn to_matrix(rows: &[Vec<i64>]) -> IoResult<DMatrix<i64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(invalid("ragged fixture matrix"));
    }
    Ok(DMatrix::from_row_iterator(nrows, ncols, rows.iter().flatten().copied()))
}

impl ReferenceFixtures {
    /// Loads `torus_2x2.json` from `DEC_FIXTURE_DIR` when set, else the copy
    /// compiled into the crate.
    pub fn load() -> IoResult<ReferenceFixtures> {
        match std::env::var_os(FIXTURE_DIR_ENV) {
            Some(dir) => {
                let path = PathBuf::from(dir).join(FIXTURE_FILE);
                Self::parse(&std::fs::read_to_string(path)?)
            }
            None => Self::parse(EMBEDDED_FIXTURES),
        }
    }

    pub fn embedded() -> ReferenceFixtures {
        Self::parse(EMBEDDED_FIXTURES).expect("embedded fixtures are valid")
    }

    pub fn parse(text: &str) -> IoResult<ReferenceFixtures> {
        let fx: ReferenceFixtures = serde_json::from_str(text)?;
        let dims = [(&fx.a, 8, 4), (&fx.b, 4, 8), (&fx.d, 4, 4), (&fx.d1, 8, 8)];
        for (m, r, c) in dims {
            if m.len() != r || m.iter().any(|row| row.len() != c) {
                return Err(invalid(format!("fixture matrix must be {r}x{c}")));
            }
        }
        Ok(fx)
    }

    pub fn matrix_a(&self) -> DMatrix<i64> {
        to_matrix(&self.a).expect("validated")
    }

    pub fn matrix_b(&self) -> DMatrix<i64> {
        to_matrix(&self.b).expect("validated")
    }

    pub fn matrix_d(&self) -> DMatrix<i64> {
        to_matrix(&self.d).expect("validated")
    }

    pub fn matrix_d1(&self) -> DMatrix<i64> {
        to_matrix(&self.d1).expect("validated")
    }

    /// `[[0, Aᵀ, 0], [A, 0, Bᵀ], [0, B, 0]]`.
    pub fn dirac_block(&self) -> DMatrix<i64> {
        let (a, b) = (self.matrix_a(), self.matrix_b());
        let mut out = DMatrix::zeros(16, 16);
        out.view_mut((0, 4), (4, 8)).copy_from(&a.transpose());
        out.view_mut((4, 0), (8, 4)).copy_from(&a);
        out.view_mut((4, 12), (8, 4)).copy_from(&b.transpose());
        out.view_mut((12, 4), (4, 8)).copy_from(&b);
        out
    }

    /// Fixture matrix expected for `op` under the 2x2 reference ordering.
    pub fn expected(&self, op: Op) -> DMatrix<i64> {
        match op {
            Op::D0 => self.matrix_a(),
            Op::D1 => self.matrix_b(),
            Op::Delta1 => self.matrix_a().transpose(),
            Op::Delta2 => self.matrix_b().transpose(),
            Op::Lap0 | Op::Lap2 => self.matrix_d(),
            Op::Lap1 => self.matrix_d1(),
            Op::Dirac => self.dirac_block(),
        }
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        match degree {
            0 => &self.orderings.vertices,
            1 => &self.orderings.edges,
            _ => &self.orderings.faces,
        }
    }

    /// Compares an assembled matrix with the fixture, labels included.
    pub fn matches(&self, op: Op, matrix: &OperatorMatrix) -> bool {
        let labels_match = |basis: &BasisOrdering| -> bool {
            let expected: Vec<&String> = match basis.degree() {
                Some(r) => self.labels(r).iter().collect(),
                None => (0..=2).flat_map(|r| self.labels(r)).collect(),
            };
            let actual = basis.label_strings();
            basis.kind() == OrderingKind::Reference2x2
                && actual.len() == expected.len()
                && actual.iter().zip(expected).all(|(a, b)| a == b)
        };
        labels_match(matrix.rows()) && labels_match(matrix.cols()) && matrix.entries() == &self.expected(op)
    }
}
