//! Randomized identity checks over seeded forms, used by `dec check`.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, so a
//! suite produces the same report whether it runs alone or inside `all`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::calculus::{self, cup, d, delta, delta_via_star, dirac, laplacian, star, star_inv, Form, InhomogeneousForm};
use crate::error::{DecError, Result};
use crate::grid_complex::{rectangle, GridShape};
use crate::hodge;
use crate::io::FormDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Stokes,
    Leibniz,
    Adjoint,
    Star,
    Hodge,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Stokes, Suite::Leibniz, Suite::Adjoint, Suite::Star, Suite::Hodge];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Stokes => "stokes",
            Suite::Leibniz => "leibniz",
            Suite::Adjoint => "adjoint",
            Suite::Star => "star",
            Suite::Hodge => "hodge",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: String,
    pub trials: usize,
    pub max_error: f64,
    /// Zero for identities that must hold exactly.
    pub tolerance: f64,
    pub passed: bool,
    /// JSON of the inputs of the first failing trial.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: Suite,
    pub config: CheckConfig,
    pub results: Vec<PropertyResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn render(&self) -> String {
        let c = self.config;
        let mut out = format!(
            "suite={} shape={}x{} seed={} trials={}\n",
            self.suite.name(),
            c.n,
            c.m,
            c.seed,
            c.trials
        );
        let width = self.results.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
        for r in &self.results {
            let _ = writeln!(
                out,
                "{} {:<8} {:<width$} max_err={:.3e} tol={}",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite.name(),
                r.name,
                r.max_error,
                if r.tolerance == 0.0 { "exact".to_string() } else { format!("{:e}", r.tolerance) },
            );
            if let Some(ce) = &r.counterexample {
                let _ = writeln!(out, "  counterexample: {ce}");
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} passed, {} failed", self.results.len() - failed, failed);
        out
    }
}

struct Tracker {
    suite: Suite,
    name: String,
    tolerance: f64,
    trials: usize,
    max_error: f64,
    counterexample: Option<String>,
}

impl Tracker {
    fn new(suite: Suite, name: &str, tolerance: f64) -> Tracker {
        Tracker {
            suite,
            name: name.to_string(),
            tolerance,
            trials: 0,
            max_error: 0.0,
            counterexample: None,
        }
    }

    fn record(&mut self, error: f64, inputs: &[&Form]) {
        self.trials += 1;
        let ok = error <= self.tolerance;
        if error.is_nan() || error > self.max_error {
            self.max_error = error;
        }
        if !ok && self.counterexample.is_none() {
            let docs: Vec<FormDocument> = inputs.iter().map(|f| FormDocument::from_form(f)).collect();
            self.counterexample = Some(serde_json::to_string(&docs).expect("forms serialize"));
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            suite: self.suite,
            passed: self.counterexample.is_none(),
            name: self.name,
            trials: self.trials,
            max_error: self.max_error,
            tolerance: self.tolerance,
            counterexample: self.counterexample,
        }
    }
}

/// Form with independent integer entries in `-3..=3`, ghost ring included.
pub fn random_integer_form(rng: &mut impl Rng, shape: GridShape, degree: usize) -> Form {
    Form::from_fn(shape, degree, |_, _, _| rng.random_range(-3i32..=3) as f64)
}

/// Form with independent standard normal entries, ghost ring included.
pub fn random_normal_form(rng: &mut impl Rng, shape: GridShape, degree: usize) -> Form {
    Form::from_fn(shape, degree, |_, _, _| rng.sample(StandardNormal))
}

/// Window form whose ghost values repeat the interior periodically.
fn periodic_window_form(rng: &mut impl Rng, shape: GridShape, degree: usize) -> Form {
    let (n, m) = (shape.n() as i64, shape.m() as i64);
    let torus = GridShape::torus(shape.n(), shape.m()).expect("nonempty");
    let base = random_normal_form(rng, torus, degree);
    Form::from_fn(shape, degree, |c, k, s| {
        base.get(c, (k - 1).rem_euclid(n) + 1, (s - 1).rem_euclid(m) + 1)
    })
}

fn suite_rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.stream());
    rng
}

pub const STOKES_TOLERANCE: f64 = 1e-12;
pub const FLOAT_TOLERANCE: f64 = 1e-10;

fn stokes(config: CheckConfig) -> Result<Vec<PropertyResult>> {
    let w = GridShape::window(config.n, config.m)?;
    let rect = rectangle(&w);
    let mut rng = suite_rng(config.seed, Suite::Stokes);
    let mut props = vec![
        Tracker::new(Suite::Stokes, "r=0 (dφ,ω)-(φ,δω)=boundary", STOKES_TOLERANCE),
        Tracker::new(Suite::Stokes, "r=1 (dφ,ω)-(φ,δω)=boundary", STOKES_TOLERANCE),
        Tracker::new(Suite::Stokes, "periodic ghosts: boundary=0", STOKES_TOLERANCE),
    ];
    for _ in 0..config.trials {
        for r in 0..2 {
            let phi = random_normal_form(&mut rng, w, r);
            let omega = random_normal_form(&mut rng, w, r + 1);
            let lhs = d(&phi).dot(&omega) - phi.dot(&delta(&omega));
            let bt = calculus::boundary_term(&phi, &omega, &rect)?;
            props[r].record((lhs - bt).abs(), &[&phi, &omega]);

            let phi = periodic_window_form(&mut rng, w, r);
            let omega = periodic_window_form(&mut rng, w, r + 1);
            let bt = calculus::boundary_term(&phi, &omega, &rect)?;
            props[2].record(bt.abs(), &[&phi, &omega]);
        }
    }
    Ok(props.into_iter().map(Tracker::finish).collect())
}

fn leibniz(config: CheckConfig) -> Result<Vec<PropertyResult>> {
    let t = GridShape::torus(config.n, config.m)?;
    let mut rng = suite_rng(config.seed, Suite::Leibniz);
    let pairs: Vec<(usize, usize)> = (0..=2).flat_map(|p| (0..=2 - p).map(move |q| (p, q))).collect();
    let mut props: Vec<Tracker> = pairs
        .iter()
        .map(|(p, q)| Tracker::new(Suite::Leibniz, &format!("d(a∪b) p={p} q={q}"), 0.0))
        .collect();
    let mut dd = Tracker::new(Suite::Leibniz, "d∘d=0", 0.0);
    let mut dede = Tracker::new(Suite::Leibniz, "δ∘δ=0", 0.0);
    for _ in 0..config.trials {
        for (i, &(p, q)) in pairs.iter().enumerate() {
            let a = random_integer_form(&mut rng, t, p);
            let b = random_integer_form(&mut rng, t, q);
            let lhs = d(&cup(&a, &b)?);
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = &cup(&d(&a), &b)? + &(&cup(&a, &d(&b))? * sign);
            props[i].record((&lhs - &rhs).max_abs(), &[&a, &b]);
        }
        for r in 0..=1 {
            let w = random_integer_form(&mut rng, t, r);
            dd.record(d(&d(&w)).max_abs(), &[&w]);
            let w = random_integer_form(&mut rng, t, r + 1);
            dede.record(delta(&delta(&w)).max_abs(), &[&w]);
        }
    }
    props.push(dd);
    props.push(dede);
    Ok(props.into_iter().map(Tracker::finish).collect())
}

fn adjoint(config: CheckConfig) -> Result<Vec<PropertyResult>> {
    let t = GridShape::torus(config.n, config.m)?;
    let rect = rectangle(&t);
    let mut rng = suite_rng(config.seed, Suite::Adjoint);
    let mut adj = [
        Tracker::new(Suite::Adjoint, "r=0 (dφ,ω)=(φ,δω)", FLOAT_TOLERANCE),
        Tracker::new(Suite::Adjoint, "r=1 (dφ,ω)=(φ,δω)", FLOAT_TOLERANCE),
    ];
    let mut inner = Tracker::new(Suite::Adjoint, "⟨R,a∪∗b⟩ = Σ a·b", FLOAT_TOLERANCE);
    let mut pyth = Tracker::new(Suite::Adjoint, "‖dα+δβ‖² = ‖dα‖²+‖δβ‖²", FLOAT_TOLERANCE);
    let mut paths = Tracker::new(Suite::Adjoint, "δ stencil = ±∗⁻¹d∗", 0.0);
    for _ in 0..config.trials {
        for (r, tracker) in adj.iter_mut().enumerate() {
            let phi = random_normal_form(&mut rng, t, r);
            let omega = random_normal_form(&mut rng, t, r + 1);
            tracker.record((d(&phi).dot(&omega) - phi.dot(&delta(&omega))).abs(), &[&phi, &omega]);
        }
        for r in 0..=2 {
            let a = random_normal_form(&mut rng, t, r);
            let b = random_normal_form(&mut rng, t, r);
            let err = calculus::inner_product_on(&a, &b, &rect)? - calculus::inner_product(&a, &b)?;
            inner.record(err.abs(), &[&a, &b]);
        }
        let alpha = random_normal_form(&mut rng, t, 0);
        let beta = random_normal_form(&mut rng, t, 2);
        let (da, db) = (d(&alpha), delta(&beta));
        let err = (&da + &db).norm_sq() - da.norm_sq() - db.norm_sq();
        pyth.record(err.abs(), &[&alpha, &beta]);
        for r in 1..=2 {
            let w = random_integer_form(&mut rng, t, r);
            paths.record((&delta(&w) - &delta_via_star(&w)?).max_abs(), &[&w]);
        }
    }
    let mut out: Vec<PropertyResult> = adj.into_iter().map(Tracker::finish).collect();
    out.extend([inner, pyth, paths].map(Tracker::finish));
    Ok(out)
}

/// `(Sw)_{k,s} = w_{σk,σs}`.
fn diagonal_shift(w: &Form) -> Form {
    let shape = w.shape();
    Form::from_fn(shape, w.degree(), |c, k, s| w.get(c, shape.sigma_k(k), shape.sigma_s(s)))
}

fn star_suite(config: CheckConfig) -> Result<Vec<PropertyResult>> {
    let t = GridShape::torus(config.n, config.m)?;
    let mut rng = suite_rng(config.seed, Suite::Star);
    let mut twice = Tracker::new(Suite::Star, "∗∗ = (-1)^r shift", 0.0);
    let mut left = Tracker::new(Suite::Star, "∗⁻¹∗ = id", 0.0);
    let mut right = Tracker::new(Suite::Star, "∗∗⁻¹ = id", 0.0);
    for _ in 0..config.trials {
        for r in 0..=2 {
            let w = random_integer_form(&mut rng, t, r);
            let sign = if r == 1 { -1.0 } else { 1.0 };
            twice.record((&star(&star(&w)?)? - &(&diagonal_shift(&w) * sign)).max_abs(), &[&w]);
            left.record((&star_inv(&star(&w)?)? - &w).max_abs(), &[&w]);
            right.record((&star(&star_inv(&w)?)? - &w).max_abs(), &[&w]);
        }
    }
    Ok([twice, left, right].map(Tracker::finish).into())
}

fn random_inhomogeneous(rng: &mut impl Rng, shape: GridShape) -> InhomogeneousForm {
    let parts = [0, 1, 2].map(|r| random_normal_form(rng, shape, r));
    let [a, b, c] = parts;
    InhomogeneousForm::new(a, b, c).expect("same shape")
}

fn hodge_suite(config: CheckConfig) -> Result<Vec<PropertyResult>> {
    let t = GridShape::torus(config.n, config.m)?;
    let mut rng = suite_rng(config.seed, Suite::Hodge);
    let mut positive = Tracker::new(Suite::Hodge, "(Δω,ω) ≥ λ₁‖ω-ω_Δ‖²", FLOAT_TOLERANCE);
    let mut harmonic_zero = Tracker::new(Suite::Hodge, "(Δh,h) = 0 on harmonic h", FLOAT_TOLERANCE);
    let mut self_adj = Tracker::new(Suite::Hodge, "(Δa,b) = (a,Δb)", FLOAT_TOLERANCE);
    let mut dirac_adj = Tracker::new(Suite::Hodge, "(DA,B) = (A,DB)", FLOAT_TOLERANCE);
    let mut residual = Tracker::new(Suite::Hodge, "decomposition residual", FLOAT_TOLERANCE);
    let mut orthogonal = Tracker::new(Suite::Hodge, "parts pairwise orthogonal", FLOAT_TOLERANCE);
    let mut annihilated = Tracker::new(Suite::Hodge, "Δ(harmonic part) = 0", FLOAT_TOLERANCE);
    let lambdas: Vec<f64> = (0..=2)
        .map(|r| Ok(hodge::spectrum(t, r)?.lambda_min_positive.unwrap_or(0.0)))
        .collect::<Result<_>>()?;
    for _ in 0..config.trials {
        for (r, &lambda) in lambdas.iter().enumerate() {
            let w = random_normal_form(&mut rng, t, r);
            let h = hodge::harmonic_part(&w)?;
            let energy = laplacian(&w).dot(&w);
            let floor = lambda * (&w - &h).norm_sq();
            positive.record((floor - energy).max(0.0), &[&w]);
            harmonic_zero.record(laplacian(&h).dot(&h).abs(), &[&w]);

            let b = random_normal_form(&mut rng, t, r);
            self_adj.record((laplacian(&w).dot(&b) - w.dot(&laplacian(&b))).abs(), &[&w, &b]);

            let parts = hodge::decompose(&w)?;
            residual.record(parts.residual_norm, &[&w]);
            let pairs = [
                parts.exact.dot(&parts.coexact),
                parts.exact.dot(&parts.harmonic),
                parts.coexact.dot(&parts.harmonic),
            ];
            orthogonal.record(pairs.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())), &[&w]);
            annihilated.record(laplacian(&parts.harmonic).max_abs(), &[&w]);
        }
        let a = random_inhomogeneous(&mut rng, t);
        let b = random_inhomogeneous(&mut rng, t);
        let err = dirac(&a).dot(&b) - a.dot(&dirac(&b));
        dirac_adj.record(err.abs(), &[a.part(0), a.part(1), a.part(2), b.part(0), b.part(1), b.part(2)]);
    }
    Ok([positive, harmonic_zero, self_adj, dirac_adj, residual, orthogonal, annihilated]
        .map(Tracker::finish)
        .into())
}

/// Runs one suite, or every suite in a fixed order for [`Suite::All`].
pub fn run(suite: Suite, config: CheckConfig) -> Result<CheckReport> {
    if config.n == 0 {
        return Err(DecError::EmptyExtent("n"));
    }
    if config.m == 0 {
        return Err(DecError::EmptyExtent("m"));
    }
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut results = Vec::new();
    for s in suites {
        results.extend(match s {
            Suite::Stokes => stokes(config)?,
            Suite::Leibniz => leibniz(config)?,
            Suite::Adjoint => adjoint(config)?,
            Suite::Star => star_suite(config)?,
            Suite::Hodge => hodge_suite(config)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(CheckReport { suite, config, results })
}
