//! The three matrix models `SO(n+2)/SO(n)`, `SO(n,2)/SO(n)` and
//! `SO(n+1,1)/SO(n)`, each with its one-parameter family of invariant contact
//! metric structures, and the end-to-end verification pipeline.
//!
//! Matrices are `(n+2) × (n+2)`; indices 0 and 1 carry the 2×2 block holding
//! `ξ`, indices `2..` carry `so(n)`. An element of `m` is
//! `sξ + (v w)` with `v` in column 0 and `w` in column 1 below the block.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::{
    compute_h, d_homothetic, d_homothetic_structure, eta_parallel_residual, fit_kappa_mu,
    h_residuals, kmu_curvature_eval, reeb_difference_residual, verify_contact_metric,
    ContactStructureAtO, KappaMu,
};
use crate::error::{Error, Result};
use crate::homspace::{
    curvature_symmetries, decomposition_residuals, levi_civita_connection, levi_civita_curvature,
    MetricAtO, ReductiveDecomposition,
};
use crate::liecore::{expm, form_residual, wedge, OrderedBasis, RealMatrix, Signature};
use crate::triple::{
    axiom_residual, base_curvature_formula, base_lts, classify_base, jordan_extension,
    jordan_shape, invariance_residuals, sphere_lts, standard_structure_operator,
    standard_structure_solve, tau_and_fixed_subsystem, BaseGeometry, BaseSpace, StructureKind,
    StructureOperator,
};

/// Values of `α` this close to 1 give the K-contact member of families 1–2.
pub const SASAKIAN_ALPHA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `so(n+2)`
    Sphere,
    /// `so(n,2)`
    Hyperbolic,
    /// `so(n+1,1)`
    Para,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Sphere, Family::Hyperbolic, Family::Para];

    pub fn cli_name(&self) -> &'static str {
        match self {
            Self::Sphere => "so_n_plus_2",
            Self::Hyperbolic => "so_n_2",
            Self::Para => "so_n_plus_1_1",
        }
    }

    pub fn signature(&self, n: usize) -> Signature {
        match self {
            Self::Sphere => Signature::new(n + 2, 0),
            Self::Hyperbolic => Signature::new(n, 2),
            Self::Para => Signature::new(n + 1, 1),
        }
    }

    /// The base space this family fibres over.
    pub fn base_space(&self) -> BaseSpace {
        match self {
            Self::Sphere => BaseSpace::ComplexificationOfSphere,
            Self::Hyperbolic => BaseSpace::ComplexificationOfHyperbolic,
            Self::Para => BaseSpace::ParaComplexificationOfSphere,
        }
    }

    pub fn model_label(&self, n: usize) -> String {
        self.base_space().model_label(n)
    }

    /// Range of the Boeckx invariant over `α`.
    pub fn invariant_in_range(&self, invariant: f64) -> bool {
        match self {
            Self::Sphere => invariant > 1.0,
            Self::Hyperbolic => invariant < -1.0,
            Self::Para => invariant > -1.0 && invariant < 1.0,
        }
    }

    // signs of the top-right rows 0 and 1 of (v w)
    fn top_signs(&self) -> (f64, f64) {
        match self {
            Self::Sphere => (-1.0, -1.0),
            Self::Hyperbolic => (1.0, 1.0),
            Self::Para => (1.0, -1.0),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.cli_name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown family {s:?} (expected so_n_plus_2, so_n_2 or so_n_plus_1_1)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub alpha: f64,
}

impl ModelSpec {
    pub fn new(family: Family, n: usize, alpha: f64) -> Result<Self> {
        let spec = Self { family, n, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter(format!("n must be at least 1, got {}", self.n)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// K-contact member (`α = 1` in families 1–2).
    pub fn is_sasakian(&self) -> bool {
        self.family != Family::Para && (self.alpha - 1.0).abs() <= SASAKIAN_ALPHA_TOL
    }

    pub fn matrix_dim(&self) -> usize {
        self.n + 2
    }
}

/// A built model: decomposition, contact structure at `o`, and the
/// (para-)Hermitian pair `(J, G)` on `b`.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub spec: ModelSpec,
    pub decomposition: ReductiveDecomposition,
    pub contact: ContactStructureAtO,
    pub base_structure: StructureOperator,
    pub base_metric: DMatrix<f64>,
}

impl ModelBundle {
    /// Matrix of `sξ + (v w)`.
    pub fn m_matrix(&self, s: f64, v: &[f64], w: &[f64]) -> RealMatrix {
        let spec = &self.spec;
        let mut x = xi_matrix(spec.family, spec.matrix_dim()) * s;
        x += vw_matrix(spec.family, spec.n, v, w);
        x
    }
}

fn xi_matrix(family: Family, dim: usize) -> RealMatrix {
    let mut x = RealMatrix::zeros(dim, dim);
    x[(1, 0)] = 1.0;
    x[(0, 1)] = match family {
        Family::Para => 1.0,
        _ => -1.0,
    };
    x
}

fn vw_matrix(family: Family, n: usize, v: &[f64], w: &[f64]) -> RealMatrix {
    let (s0, s1) = family.top_signs();
    let mut x = RealMatrix::zeros(n + 2, n + 2);
    for k in 0..n {
        x[(2 + k, 0)] = v[k];
        x[(2 + k, 1)] = w[k];
        x[(0, 2 + k)] = s0 * v[k];
        x[(1, 2 + k)] = s1 * w[k];
    }
    x
}

fn unit_slice(n: usize, k: usize) -> Vec<f64> {
    (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}

/// Operator on `b = p ⊕ q` given by `(v, w) ↦ (A v + B w, C v + D w)` with
/// scalar blocks.
fn block_operator(n: usize, a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(k, k)] = a;
        m[(k, n + k)] = b;
        m[(n + k, k)] = c;
        m[(n + k, n + k)] = d;
    }
    m
}

pub fn build_model(spec: ModelSpec) -> Result<ModelBundle> {
    spec.validate()?;
    let (n, alpha, family) = (spec.n, spec.alpha, spec.family);
    let dim = spec.matrix_dim();

    let mut h_els = Vec::new();
    let mut h_labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            h_els.push(wedge(dim, 2 + i, 2 + j));
            h_labels.push(format!("h{}{}", i + 1, j + 1));
        }
    }
    let h = OrderedBasis::new(h_els, h_labels)?;
    let zero = vec![0.0; n];
    let p = OrderedBasis::new(
        (0..n).map(|k| vw_matrix(family, n, &unit_slice(n, k), &zero)).collect(),
        (0..n).map(|k| format!("p{}", k + 1)).collect(),
    )?;
    let q = OrderedBasis::new(
        (0..n).map(|k| vw_matrix(family, n, &zero, &unit_slice(n, k))).collect(),
        (0..n).map(|k| format!("q{}", k + 1)).collect(),
    )?;
    let decomposition = ReductiveDecomposition::new(&h, xi_matrix(family, dim), &p, &q)?;

    // J on b in (v, w) blocks: J₁(v,w) = (−w, v), J₂(v,w) = (w, −v), I(v,w) = (w, v)
    let base_j = match family {
        Family::Sphere => block_operator(n, 0.0, -1.0, 1.0, 0.0),
        Family::Hyperbolic => block_operator(n, 0.0, 1.0, -1.0, 0.0),
        Family::Para => block_operator(n, 0.0, 1.0, 1.0, 0.0),
    };
    // φ = αJ on p and ±(1/α)J on q
    let q_scale = match family {
        Family::Para => -1.0 / alpha,
        _ => 1.0 / alpha,
    };
    let scale = block_operator(n, alpha, 0.0, 0.0, q_scale);
    let phi_b = &base_j * scale;
    let dm = 2 * n + 1;
    let mut phi = DMatrix::zeros(dm, dm);
    phi.view_mut((1, 1), (2 * n, 2 * n)).copy_from(&phi_b);

    let mut gram = DMatrix::zeros(dm, dm);
    gram[(0, 0)] = 1.0;
    for k in 0..n {
        gram[(1 + k, 1 + k)] = alpha / 2.0;
        gram[(1 + n + k, 1 + n + k)] = 1.0 / (2.0 * alpha);
    }
    let e0 = DVector::from_fn(dm, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let contact = ContactStructureAtO {
        phi,
        xi: e0.clone(),
        eta: e0,
        g: MetricAtO::new(gram)?,
    };

    let (kind, g_sign) = match family {
        Family::Para => (StructureKind::ParaComplex, -1.0),
        _ => (StructureKind::Complex, 1.0),
    };
    let base_structure = StructureOperator::new(base_j, kind, 1e-12)?;
    let base_metric = block_operator(n, 1.0, 0.0, 0.0, g_sign);
    Ok(ModelBundle {
        spec,
        decomposition,
        contact,
        base_structure,
        base_metric,
    })
}

/// Boeckx invariant of the model in closed form. Families 1–2 use
/// `±(1+α²)/|1−α²|`, so `α` and `1/α` agree.
pub fn closed_form_invariant(spec: &ModelSpec) -> Result<f64> {
    spec.validate()?;
    let a2 = spec.alpha * spec.alpha;
    match spec.family {
        Family::Para => Ok((a2 - 1.0) / (a2 + 1.0)),
        _ if spec.is_sasakian() => Err(Error::Sasakian),
        Family::Sphere => Ok((1.0 + a2) / (1.0 - a2).abs()),
        Family::Hyperbolic => Ok(-(1.0 + a2) / (1.0 - a2).abs()),
    }
}

/// Inverse of [`closed_form_invariant`]; `α ∈ (0,1)` for families 1–2.
pub fn alpha_for_invariant(family: Family, invariant: f64) -> Result<f64> {
    if !invariant.is_finite() || !family.invariant_in_range(invariant) {
        return Err(Error::InvalidParameter(format!(
            "invariant {invariant} is outside the range of family {family}"
        )));
    }
    let a2 = match family {
        Family::Sphere => (invariant - 1.0) / (invariant + 1.0),
        Family::Hyperbolic => (-invariant - 1.0) / (1.0 - invariant),
        Family::Para => (1.0 + invariant) / (1.0 - invariant),
    };
    Ok(a2.sqrt())
}

/// Family realizing a given invariant.
pub fn family_for_invariant(invariant: f64) -> Result<Family> {
    Ok(match classify_base(invariant)? {
        BaseSpace::ComplexificationOfSphere => Family::Sphere,
        BaseSpace::ParaComplexificationOfSphere => Family::Para,
        BaseSpace::ComplexificationOfHyperbolic => Family::Hyperbolic,
    })
}

/// Max deviation of `φ`, `g`, `η`, `ξ` (and leakage of `m` into `h`) under
/// `Ad(a)` for an arbitrary matrix `a` of the right size.
pub fn conjugation_residual(bundle: &ModelBundle, a: &RealMatrix) -> Result<f64> {
    let d = &bundle.decomposition;
    let dim = bundle.spec.matrix_dim();
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: a.nrows(),
        });
    }
    let a_inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::InvalidParameter("conjugating matrix is singular".into()))?;
    let dm = d.dim_m();
    let mut ad = DMatrix::zeros(dm, dm);
    let mut leak = 0.0_f64;
    for (j, m) in d.m_elements().iter().enumerate() {
        let conj = a * m * &a_inv;
        let (hc, mc) = d.split(&conj)?;
        leak = leak.max(hc.amax());
        ad.set_column(j, &mc);
    }
    let s = &bundle.contact;
    let phi = (&ad * &s.phi - &s.phi * &ad).amax();
    let g = (ad.transpose() * s.g.gram() * &ad - s.g.gram()).amax();
    let eta = (ad.transpose() * &s.eta - &s.eta).amax();
    let xi = (&ad * &s.xi - &s.xi).amax();
    Ok([leak, phi, g, eta, xi].into_iter().fold(0.0, f64::max))
}

/// Random `SO(n)` element `exp(W)` embedded as `diag(I₂, a)`.
pub fn random_rotation(n: usize, rng: &mut impl Rng) -> RealMatrix {
    let raw = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let skew = (&raw - raw.transpose()) * 0.5;
    let rot = expm(&skew);
    let mut a = RealMatrix::identity(n + 2, n + 2);
    a.view_mut((2, 2), (n, n)).copy_from(&rot);
    a
}

pub fn ad_invariance_residual(bundle: &ModelBundle, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a = random_rotation(bundle.spec.n, &mut rng);
        worst = worst.max(conjugation_residual(bundle, &a)?);
    }
    Ok(worst)
}

/// Thresholds for [`verify_model`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities (structure, contact, connection, base space).
    pub identity: f64,
    /// `(κ,μ)` fit and closed-form curvature.
    pub fit: f64,
    /// Fitted vs closed-form invariant.
    pub invariant: f64,
    /// Invariant under `D_a`-deformation of `(κ, μ)`.
    pub deformation: f64,
    /// Lower bound for the invariance residual away from the standard `a`.
    pub uniqueness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            fit: 1e-8,
            invariant: 1e-8,
            deformation: 1e-10,
            uniqueness: 1e-3,
        }
    }
}

impl Tolerances {
    pub fn with_identity(identity: f64) -> Self {
        Self {
            identity,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// passes when `value ≤ threshold`
    AtMost,
    /// passes when `value > threshold`
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.threshold,
            Bound::Above => self.value > self.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardStructureInfo {
    pub kind: StructureKind,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub spec: ModelSpec,
    pub sasakian: bool,
    pub checks: Vec<Check>,
    pub kappa: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub boeckx: Option<f64>,
    pub boeckx_closed_form: Option<f64>,
    pub base: Option<BaseSpace>,
    pub standard_structure: Option<StandardStructureInfo>,
    /// Stages that could not run.
    pub errors: Vec<String>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect()
    }
}

/// Parameters used for the `D_a` probes.
pub const DEFORMATION_PARAMETERS: [f64; 3] = [0.5, 2.0, 7.0];

/// Seed for the `Ad(SO(n))` samples.
pub const DEFAULT_SEED: u64 = 20_240_601;

struct Recorder {
    checks: Vec<Check>,
    errors: Vec<String>,
}

impl Recorder {
    fn at_most(&mut self, name: &'static str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name,
            value,
            threshold,
            bound: Bound::AtMost,
        });
    }

    fn above(&mut self, name: &'static str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name,
            value,
            threshold,
            bound: Bound::Above,
        });
    }

    fn fail(&mut self, stage: &str, e: Error) {
        self.errors.push(format!("{stage}: {e}"));
    }
}

/// Runs every stage on one model and collects named residuals.
pub fn verify_model(spec: ModelSpec, tol: &Tolerances, seed: u64) -> Result<Report> {
    spec.validate()?;
    let mut rec = Recorder {
        checks: Vec::new(),
        errors: Vec::new(),
    };
    let mut report = Report {
        spec,
        sasakian: spec.is_sasakian(),
        checks: Vec::new(),
        kappa: None,
        mu: None,
        lambda: None,
        boeckx: None,
        boeckx_closed_form: closed_form_invariant(&spec).ok(),
        base: None,
        standard_structure: None,
        errors: Vec::new(),
    };
    let bundle = match build_model(spec) {
        Ok(b) => b,
        Err(e) => {
            rec.fail("build", e);
            report.errors = rec.errors;
            return Ok(report);
        }
    };
    run_stages(&bundle, tol, seed, &mut rec, &mut report);
    report.checks = rec.checks;
    report.errors = rec.errors;
    Ok(report)
}

fn run_stages(bundle: &ModelBundle, tol: &Tolerances, seed: u64, rec: &mut Recorder, report: &mut Report) {
    let t = tol.identity;
    let d = &bundle.decomposition;
    let s = &bundle.contact;

    let dr = decomposition_residuals(d);
    rec.at_most("reductive", dr.reductive, t);
    rec.at_most("symmetric_hbar_closed", dr.hbar_closed, t);
    rec.at_most("symmetric_hbar_b", dr.hbar_b, t);
    rec.at_most("symmetric_b_b", dr.b_b, t);
    rec.at_most("so_membership", so_membership(bundle), t);

    let j = &bundle.base_structure;
    rec.at_most("base_structure_square", j.square_residual(), t);
    let g_sign = match j.kind {
        StructureKind::Complex => 1.0,
        _ => -1.0,
    };
    let herm = (j.matrix.transpose() * &bundle.base_metric * &j.matrix - &bundle.base_metric * g_sign).amax();
    rec.at_most("base_structure_metric", herm, t);

    let cr = verify_contact_metric(s, d);
    rec.at_most("contact_phi_squared", cr.phi_squared, t);
    rec.at_most("contact_compatibility", cr.compatibility, t);
    rec.at_most("contact_d_eta", cr.d_eta, t);
    rec.at_most("contact_eta_xi", cr.eta_xi, t);

    match ad_invariance_residual(bundle, 10, seed) {
        Ok(v) => rec.at_most("ad_invariance", v, t),
        Err(e) => rec.fail("ad_invariance", e),
    }

    let h = match compute_h(s, d) {
        Ok(h) => h,
        Err(e) => return rec.fail("h", e),
    };
    let hr = h_residuals(&h, s);
    rec.at_most("h_xi", hr.h_xi, t);
    rec.at_most("h_symmetric", hr.g_symmetric, t);
    rec.at_most("h_anticommutes_phi", hr.anticommutes_phi, t);
    rec.at_most("h_trace", hr.trace, t);

    let conn = match levi_civita_connection(d, &s.g) {
        Ok(c) => c,
        Err(e) => return rec.fail("levi_civita", e),
    };
    rec.at_most("levi_civita_metric", conn.metric_residual(&s.g), t);
    rec.at_most("levi_civita_torsion", conn.torsion_residual(d), t);
    let r = levi_civita_curvature(&conn, d);
    let sym = curvature_symmetries(&r, &s.g);
    rec.at_most("curvature_antisym_xy", sym.antisym_xy, t);
    rec.at_most("curvature_antisym_zw", sym.antisym_zw, t);
    rec.at_most("curvature_bianchi", sym.bianchi, t);

    let km = fit_kappa_mu(&r, s, &h);
    report.kappa = Some(km.kappa);
    report.mu = Some(km.mu);
    report.lambda = Some(km.lambda);
    report.boeckx = km.boeckx;
    rec.at_most("kappa_mu_condition", km.fit_residual, tol.fit);

    if h.is_sasakian() || report.sasakian {
        // K-contact: h = 0 and R(X,Y)ξ = η(Y)X − η(X)Y, nothing else applies
        rec.at_most("sasakian_h", h.matrix.amax(), t);
        if !report.sasakian {
            rec.fail("h", Error::Sasakian);
        }
        return;
    }

    rec.at_most("kappa_at_most_one", (km.kappa - 1.0).max(0.0), 1e-10);
    rec.at_most("kappa_lambda", (km.kappa - (1.0 - km.lambda * km.lambda)).abs(), t);
    match kmu_curvature_eval(&km, s, &h.matrix) {
        Ok(closed) => rec.at_most("curvature_closed_form", closed.max_abs_diff(&r), tol.fit),
        Err(e) => rec.fail("curvature_closed_form", e),
    }
    rec.at_most("reeb_difference", reeb_difference_residual(&conn, s, &h.matrix, d), t);
    rec.at_most("eta_parallel_h", eta_parallel_residual(&conn, s, &h.matrix, d), t);

    let invariant = match km.boeckx {
        Some(i) => i,
        None => return rec.fail("boeckx", Error::Sasakian),
    };
    match report.boeckx_closed_form {
        Some(c) => rec.at_most("boeckx_closed_form", (invariant - c).abs(), tol.invariant),
        None => rec.fail("boeckx_closed_form", Error::Sasakian),
    }

    let mut worst = 0.0_f64;
    for a in DEFORMATION_PARAMETERS {
        match d_homothetic(&km, a).map(|k| k.boeckx) {
            Ok(Some(ia)) => worst = worst.max((ia - invariant).abs()),
            Ok(None) => rec.fail("d_homothetic", Error::Sasakian),
            Err(e) => rec.fail("d_homothetic", e),
        }
    }
    rec.at_most("d_homothetic_invariant", worst, tol.deformation);
    match deformed_refit(bundle, &km, 2.0) {
        Ok(v) => rec.at_most("d_homothetic_refit", v, tol.fit),
        Err(e) => rec.fail("d_homothetic_refit", e),
    }

    let base = match BaseGeometry::new(s, &h, d) {
        Ok(b) => b,
        Err(e) => return rec.fail("base", e),
    };
    let lts = match base_lts(d) {
        Ok(l) => l,
        Err(e) => return rec.fail("base_lts", e),
    };
    rec.at_most("base_lts_axioms", axiom_residual(&lts), t);
    match base_curvature_formula(&km, &base) {
        Ok(f) => rec.at_most("base_curvature_formula", f.max_abs_diff(&lts.curvature()), t),
        Err(e) => rec.fail("base_curvature_formula", e),
    }

    let std = match standard_structure_solve(&km, &base) {
        Ok(x) => x,
        Err(e) => return rec.fail("standard_structure", e),
    };
    report.standard_structure = Some(StandardStructureInfo {
        kind: std.kind,
        a: std.a,
    });
    let inv = invariance_residuals(&lts, &std.operator.matrix);
    rec.at_most("standard_invariant", inv.invariant, t);
    rec.at_most("standard_twisted", inv.twisted, t);
    for (name, factor) in [("standard_unique_0_9a", 0.9), ("standard_unique_1_1a", 1.1)] {
        let off = standard_structure_operator(std.kind, factor * std.a, &base);
        rec.above(name, invariance_residuals(&lts, &off).invariant, tol.uniqueness);
    }

    match tau_and_fixed_subsystem(&lts, &base, Some(&std.operator.matrix)) {
        Ok(tr) => {
            rec.at_most("tau_involution", tr.tau_square, t);
            rec.at_most("tau_automorphism", tr.automorphism, t);
            rec.at_most("tau_anticommutes", tr.anti_commutation.unwrap_or(f64::INFINITY), t);
            rec.at_most("tau_fixed_is_plus", tr.fixed_is_plus, t);
            let k = base.plus.ncols();
            let id = DMatrix::identity(k, k);
            let expect = sphere_lts(&id).product.scaled(2.0 * km.lambda * (invariant + 1.0));
            rec.at_most("fixed_subsystem_sphere", tr.fixed.product.max_abs_diff(&expect), t);
            match jordan_extension(&lts, &std.operator, &base) {
                Ok(jt) => {
                    rec.at_most("jordan_axioms", axiom_residual(&jt), t);
                    let rt = crate::triple::jordan_curvature(&jt);
                    rec.at_most("jordan_extension_condition", rt.max_abs_diff(&tr.fixed.curvature()), t);
                    let c = jordan_scalar(std.kind, &km);
                    let shape = jordan_shape(&id).scaled(c);
                    rec.at_most("jordan_closed_form", jt.product.max_abs_diff(&shape), t);
                }
                Err(e) => rec.fail("jordan_extension", e),
            }
        }
        Err(e) => rec.fail("tau", e),
    }

    match classify_base(invariant) {
        Ok(b) => {
            report.base = Some(b);
            let mismatch = if b == bundle.spec.family.base_space() { 0.0 } else { 1.0 };
            rec.at_most("base_matches_family", mismatch, 0.0);
        }
        Err(e) => rec.fail("classify_base", e),
    }
}

/// `(μ−2−2λ)/2` for complex, `−(2−μ+2λ)/2` for para-complex.
pub fn jordan_scalar(kind: StructureKind, km: &KappaMu) -> f64 {
    match kind {
        StructureKind::Complex => (km.mu - 2.0 - 2.0 * km.lambda) / 2.0,
        _ => -(2.0 - km.mu + 2.0 * km.lambda) / 2.0,
    }
}

fn so_membership(bundle: &ModelBundle) -> f64 {
    let sig = bundle.spec.family.signature(bundle.spec.n);
    let form = sig.quadratic_form();
    bundle
        .decomposition
        .full_basis()
        .elements()
        .iter()
        .map(|x| form_residual(x, &form))
        .fold(0.0, f64::max)
}

/// Refits `(κ, μ)` on the `D_a`-deformed structure and compares with the
/// deformation formula.
pub fn deformed_refit(bundle: &ModelBundle, km: &KappaMu, a: f64) -> Result<f64> {
    let d = &bundle.decomposition;
    let s = d_homothetic_structure(&bundle.contact, a)?;
    let h = compute_h(&s, d)?;
    let conn = levi_civita_connection(d, &s.g)?;
    let r = levi_civita_curvature(&conn, d);
    let fit = fit_kappa_mu(&r, &s, &h);
    let expect = d_homothetic(km, a)?;
    Ok((fit.kappa - expect.kappa)
        .abs()
        .max((fit.mu - expect.mu).abs())
        .max(fit.fit_residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, n: usize, a: f64) -> ModelSpec {
        ModelSpec::new(f, n, a).unwrap()
    }

    #[test]
    fn dimensions() {
        for f in Family::ALL {
            for n in 1..=4 {
                let b = build_model(spec(f, n, 0.5)).unwrap();
                assert_eq!(b.decomposition.dim_m(), 2 * n + 1);
                assert_eq!(b.decomposition.dim_h(), n * (n - 1) / 2);
            }
        }
        let b = build_model(spec(Family::Sphere, 2, 0.5)).unwrap();
        assert_eq!(b.decomposition.dim_h() + b.decomposition.dim_m(), 6);
    }

    #[test]
    fn xi_block() {
        let b = build_model(spec(Family::Sphere, 2, 0.5)).unwrap();
        let xi = b.decomposition.xi_matrix();
        assert_eq!(xi[(0, 1)], -1.0);
        assert_eq!(xi[(1, 0)], 1.0);
        assert_eq!(b.m_matrix(1.0, &[0.0, 0.0], &[0.0, 0.0]), *xi);
    }

    #[test]
    fn structural_residuals_vanish() {
        for f in Family::ALL {
            let b = build_model(spec(f, 2, 0.5)).unwrap();
            assert!(decomposition_residuals(&b.decomposition).max() < 1e-12);
            assert!(verify_contact_metric(&b.contact, &b.decomposition).max() < 1e-12, "{f}");
            assert!(so_membership(&b) < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(ModelSpec::new(Family::Sphere, 0, 0.5).is_err());
        assert!(ModelSpec::new(Family::Sphere, 1, 0.0).is_err());
        assert!(ModelSpec::new(Family::Sphere, 1, f64::NAN).is_err());
        assert!(spec(Family::Sphere, 2, 1.0).is_sasakian());
        assert!(!spec(Family::Para, 2, 1.0).is_sasakian());
    }

    #[test]
    fn closed_forms() {
        let i = |f, a| closed_form_invariant(&spec(f, 1, a)).unwrap();
        assert!((i(Family::Sphere, 0.5) - 5.0 / 3.0).abs() < 1e-15);
        assert!((i(Family::Hyperbolic, 0.5) + 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(i(Family::Para, 1.0), 0.0);
        assert!((i(Family::Para, 2.0) - 0.6).abs() < 1e-15);
        assert!((i(Family::Sphere, 2.0) - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(closed_form_invariant(&spec(Family::Sphere, 1, 1.0)), Err(Error::Sasakian));
    }

    #[test]
    fn alpha_inversion() {
        let a = alpha_for_invariant(Family::Sphere, 2.0).unwrap();
        assert!((a - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((alpha_for_invariant(Family::Hyperbolic, -5.0 / 3.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(alpha_for_invariant(Family::Para, 0.0).unwrap(), 1.0);
        assert!(alpha_for_invariant(Family::Sphere, 0.5).is_err());
        assert!(alpha_for_invariant(Family::Para, 1.0).is_err());
    }

    #[test]
    fn ad_invariance() {
        for f in Family::ALL {
            let b = build_model(spec(f, 3, 0.5)).unwrap();
            assert!(ad_invariance_residual(&b, 10, 7).unwrap() < 1e-9);
        }
        let b = build_model(spec(Family::Sphere, 1, 0.5)).unwrap();
        assert!(ad_invariance_residual(&b, 3, 7).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_mixing_xi_block_is_detected() {
        let b = build_model(spec(Family::Sphere, 2, 0.5)).unwrap();
        let th: f64 = 0.4;
        let mut a = RealMatrix::identity(4, 4);
        a[(0, 0)] = th.cos();
        a[(2, 2)] = th.cos();
        a[(0, 2)] = -th.sin();
        a[(2, 0)] = th.sin();
        assert!(conjugation_residual(&b, &a).unwrap() > 1e-2);
    }

    #[test]
    fn para_n1_alpha1() {
        let r = verify_model(spec(Family::Para, 1, 1.0), &Tolerances::default(), 1).unwrap();
        assert!(r.pass(), "{:?} {:?}", r.failures(), r.errors);
        assert!((r.lambda.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.kappa.unwrap().abs() < 1e-12);
        assert!(r.boeckx.unwrap().abs() < 1e-12);
    }

    #[test]
    fn sphere_pipeline() {
        let r = verify_model(spec(Family::Sphere, 2, 0.5), &Tolerances::default(), 1).unwrap();
        assert!(r.pass(), "{:?} {:?}", r.failures(), r.errors);
        assert!((r.boeckx.unwrap() - 5.0 / 3.0).abs() < 1e-9);
        assert_eq!(r.base, Some(BaseSpace::ComplexificationOfSphere));
        let st = r.standard_structure.unwrap();
        assert_eq!(st.kind, StructureKind::Complex);
        assert!((st.a - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sasakian_pipeline() {
        let r = verify_model(spec(Family::Sphere, 2, 1.0), &Tolerances::default(), 1).unwrap();
        assert!(r.sasakian);
        assert!(r.pass(), "{:?} {:?}", r.failures(), r.errors);
        assert!(r.boeckx.is_none());
        assert!(r.standard_structure.is_none());
    }
}
