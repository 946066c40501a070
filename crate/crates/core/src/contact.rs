//! Contact metric structures at the base point and the `(κ,μ)` machinery.
//!
//! Tensors are expressed in `m`-coordinates of a [`ReductiveDecomposition`]:
//! `φ` is a matrix, `ξ` a vector, `η` a covector and `g` a Gram matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::homspace::{unit, ConnectionAtO, MetricAtO, ReductiveDecomposition};
use crate::trilinear::TrilinearMap;

/// Below this value of `λ` the structure is treated as K-contact/Sasakian.
pub const SASAKIAN_CUTOFF: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct ContactStructureAtO {
    pub phi: DMatrix<f64>,
    pub xi: DVector<f64>,
    pub eta: DVector<f64>,
    pub g: MetricAtO,
}

impl ContactStructureAtO {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn eta_of(&self, x: &DVector<f64>) -> f64 {
        self.eta.dot(x)
    }

    /// Basis of the contact distribution `ker η` obtained by projecting the
    /// given `m`-basis vectors along `ξ`.
    pub fn horizontal(&self, indices: impl Iterator<Item = usize>) -> Vec<DVector<f64>> {
        let n = self.dim();
        indices
            .map(|i| {
                let e = unit(n, i);
                let s = self.eta_of(&e);
                e - &self.xi * s
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContactResiduals {
    /// `φ² = −id + η ⊗ ξ`
    pub phi_squared: f64,
    /// `g(φX, φY) = g(X,Y) − η(X)η(Y)`
    pub compatibility: f64,
    /// `dη(X,Y) = g(X, φY)` with `2dη(X,Y) = −η([X,Y]_m)`
    pub d_eta: f64,
    /// `η(ξ) = 1`
    pub eta_xi: f64,
}

impl ContactResiduals {
    pub fn max(&self) -> f64 {
        self.phi_squared
            .max(self.compatibility)
            .max(self.d_eta)
            .max(self.eta_xi)
    }
}

pub fn verify_contact_metric(s: &ContactStructureAtO, d: &ReductiveDecomposition) -> ContactResiduals {
    let n = s.dim();
    let gram = s.g.gram();
    let id = DMatrix::<f64>::identity(n, n);
    let xi_eta = &s.xi * s.eta.transpose();
    let phi_squared = (&s.phi * &s.phi - (-&id + &xi_eta)).amax();
    let eta_eta = &s.eta * s.eta.transpose();
    let compatibility = (s.phi.transpose() * gram * &s.phi - (gram - eta_eta)).amax();
    let g_phi = gram * &s.phi;
    let mut d_eta = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let (_, bm) = d.bracket_m(&unit(n, i), &unit(n, j));
            let deta = -0.5 * s.eta.dot(&bm);
            d_eta = d_eta.max((deta - g_phi[(i, j)]).abs());
        }
    }
    ContactResiduals {
        phi_squared,
        compatibility,
        d_eta,
        eta_xi: (s.eta.dot(&s.xi) - 1.0).abs(),
    }
}

/// `h = ½ L_ξ φ` with its eigen-splitting of the contact distribution.
#[derive(Debug, Clone)]
pub struct HOperator {
    pub matrix: DMatrix<f64>,
    /// Largest eigenvalue magnitude; zero for the Sasakian marker.
    pub lambda: f64,
    /// g-orthonormal eigenvectors for `+λ` (columns).
    pub plus: DMatrix<f64>,
    /// g-orthonormal eigenvectors for `−λ` (columns).
    pub minus: DMatrix<f64>,
}

impl HOperator {
    pub fn is_sasakian(&self) -> bool {
        self.lambda <= SASAKIAN_CUTOFF
    }

    /// `τ = h/λ`.
    pub fn tau(&self) -> Result<DMatrix<f64>> {
        if self.is_sasakian() {
            return Err(Error::Sasakian);
        }
        Ok(&self.matrix / self.lambda)
    }

    /// Projector onto `b₊` along `ℝξ ⊕ b₋`: `(h² + λh) / 2λ²`.
    pub fn plus_projector(&self) -> Result<DMatrix<f64>> {
        if self.is_sasakian() {
            return Err(Error::Sasakian);
        }
        let l = self.lambda;
        Ok((&self.matrix * &self.matrix + &self.matrix * l) / (2.0 * l * l))
    }

    pub fn minus_projector(&self) -> Result<DMatrix<f64>> {
        if self.is_sasakian() {
            return Err(Error::Sasakian);
        }
        let l = self.lambda;
        Ok((&self.matrix * &self.matrix - &self.matrix * l) / (2.0 * l * l))
    }
}

/// `2h Y = [ξ, φY]_m − φ[ξ, Y]_m`, valid for invariant `φ` (parallel for the
/// canonical connection).
pub fn compute_h(s: &ContactStructureAtO, d: &ReductiveDecomposition) -> Result<HOperator> {
    let ad_xi = d.ad_m(&s.xi);
    let matrix = (&ad_xi * &s.phi - &s.phi * &ad_xi) * 0.5;
    split_h(matrix, s)
}

fn split_h(matrix: DMatrix<f64>, s: &ContactStructureAtO) -> Result<HOperator> {
    let n = s.dim();
    let chol = s.g.gram().clone().cholesky().ok_or(Error::SingularMetric)?;
    let l = chol.l();
    let l_inv_t = l
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMetric)?
        .transpose();
    // Lᵀ h L⁻ᵀ is symmetric when h is g-symmetric
    let sym = l.transpose() * &matrix * &l_inv_t;
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let lambda = eig.eigenvalues.amax();
    if lambda <= SASAKIAN_CUTOFF {
        return Ok(HOperator {
            matrix,
            lambda: 0.0,
            plus: DMatrix::zeros(n, 0),
            minus: DMatrix::zeros(n, 0),
        });
    }
    let tol = 1e-6 * lambda.max(1.0);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut zero = 0;
    for (k, ev) in eig.eigenvalues.iter().enumerate() {
        let x = &l_inv_t * eig.eigenvectors.column(k);
        if (ev - lambda).abs() < tol {
            plus.push(x);
        } else if (ev + lambda).abs() < tol {
            minus.push(x);
        } else if ev.abs() < tol {
            zero += 1;
        } else {
            return Err(Error::NotKappaMuCandidate(format!(
                "eigenvalue {ev:.6} of h is neither 0 nor ±{lambda:.6}"
            )));
        }
    }
    if plus.len() != minus.len() || zero != 1 {
        return Err(Error::NotKappaMuCandidate(format!(
            "eigenvalue multiplicities (+λ: {}, −λ: {}, 0: {zero}) are not (n, n, 1)",
            plus.len(),
            minus.len()
        )));
    }
    Ok(HOperator {
        matrix,
        lambda,
        plus: DMatrix::from_columns(&plus),
        minus: DMatrix::from_columns(&minus),
    })
}

/// Algebraic checks on `h`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HResiduals {
    pub h_xi: f64,
    pub g_symmetric: f64,
    pub anticommutes_phi: f64,
    pub trace: f64,
}

pub fn h_residuals(h: &HOperator, s: &ContactStructureAtO) -> HResiduals {
    HResiduals {
        h_xi: (&h.matrix * &s.xi).amax(),
        g_symmetric: s.g.symmetry_defect(&h.matrix),
        anticommutes_phi: (&h.matrix * &s.phi + &s.phi * &h.matrix).amax(),
        trace: h.matrix.trace().abs(),
    }
}

/// Fitted `(κ, μ)` data. `boeckx` is `None` for the Sasakian marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMu {
    pub kappa: f64,
    pub mu: f64,
    pub lambda: f64,
    pub boeckx: Option<f64>,
    pub fit_residual: f64,
}

impl KappaMu {
    /// Exact parameters with the derived `λ` and Boeckx invariant.
    pub fn from_parameters(kappa: f64, mu: f64) -> Self {
        let lambda = (1.0 - kappa).max(0.0).sqrt();
        Self {
            kappa,
            mu,
            lambda,
            boeckx: boeckx_invariant(kappa, mu).ok(),
            fit_residual: 0.0,
        }
    }

    pub fn is_sasakian(&self) -> bool {
        self.boeckx.is_none()
    }
}

/// `I = (1 − μ/2) / √(1 − κ)`.
pub fn boeckx_invariant(kappa: f64, mu: f64) -> Result<f64> {
    if kappa >= 1.0 - SASAKIAN_CUTOFF * SASAKIAN_CUTOFF {
        return Err(Error::Sasakian);
    }
    Ok((1.0 - mu / 2.0) / (1.0 - kappa).sqrt())
}

/// Max over basis pairs of the g-norm of
/// `R(X,Y)ξ − κ(η(Y)X − η(X)Y) − μ(η(Y)hX − η(X)hY)`.
pub fn kappa_mu_condition_residual(
    r: &TrilinearMap,
    s: &ContactStructureAtO,
    h: &DMatrix<f64>,
    kappa: f64,
    mu: f64,
) -> f64 {
    let n = s.dim();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let x = unit(n, i);
            let y = unit(n, j);
            let (ex, ey) = (s.eta_of(&x), s.eta_of(&y));
            let expect = (&x * ey - &y * ex) * kappa + (h * &x * ey - h * &y * ex) * mu;
            let got = r.apply(&x, &y, &s.xi);
            worst = worst.max(s.g.norm(&(got - expect)));
        }
    }
    worst
}

/// Solves `R(X,ξ)ξ = κX + μhX` on one unit eigenvector each from `b₊` and
/// `b₋`, then measures the full `(κ,μ)` condition on all basis pairs.
pub fn fit_kappa_mu(r: &TrilinearMap, s: &ContactStructureAtO, h: &HOperator) -> KappaMu {
    if h.is_sasakian() {
        return KappaMu {
            kappa: 1.0,
            mu: 0.0,
            lambda: 0.0,
            boeckx: None,
            fit_residual: kappa_mu_condition_residual(r, s, &h.matrix, 1.0, 0.0),
        };
    }
    let xp = h.plus.column(0).into_owned();
    let xm = h.minus.column(0).into_owned();
    let a_plus = s.g.inner(&r.apply(&xp, &s.xi, &s.xi), &xp);
    let a_minus = s.g.inner(&r.apply(&xm, &s.xi, &s.xi), &xm);
    let kappa = 0.5 * (a_plus + a_minus);
    let mu = (a_plus - a_minus) / (2.0 * h.lambda);
    KappaMu {
        kappa,
        mu,
        lambda: h.lambda,
        boeckx: boeckx_invariant(kappa, mu).ok(),
        fit_residual: kappa_mu_condition_residual(r, s, &h.matrix, kappa, mu),
    }
}

/// `(κ̄, μ̄) = ((κ + a² − 1)/a², (μ + 2a − 2)/a)`.
pub fn d_homothetic(km: &KappaMu, a: f64) -> Result<KappaMu> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "D_a-deformation needs a > 0, got {a}"
        )));
    }
    let kappa = (km.kappa + a * a - 1.0) / (a * a);
    let mu = (km.mu + 2.0 * a - 2.0) / a;
    Ok(KappaMu {
        fit_residual: km.fit_residual,
        ..KappaMu::from_parameters(kappa, mu)
    })
}

/// `η̄ = aη`, `ξ̄ = ξ/a`, `ḡ = ag + a(a−1)η ⊗ η`, `φ` unchanged.
pub fn d_homothetic_structure(s: &ContactStructureAtO, a: f64) -> Result<ContactStructureAtO> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "D_a-deformation needs a > 0, got {a}"
        )));
    }
    let gram = s.g.gram() * a + &s.eta * s.eta.transpose() * (a * (a - 1.0));
    Ok(ContactStructureAtO {
        phi: s.phi.clone(),
        xi: &s.xi / a,
        eta: &s.eta * a,
        g: MetricAtO::new(gram)?,
    })
}

/// Closed-form curvature of a non-Sasakian `(κ,μ)`-space, with the last
/// slot raised through `g`.
pub fn kmu_curvature_eval(
    km: &KappaMu,
    s: &ContactStructureAtO,
    h: &DMatrix<f64>,
) -> Result<TrilinearMap> {
    let (k, mu) = (km.kappa, km.mu);
    if k >= 1.0 {
        return Err(Error::Sasakian);
    }
    let n = s.dim();
    let gram = s.g.gram();
    let phi = &s.phi;
    let phih = phi * h;
    let c1 = 1.0 - mu / 2.0;
    let c_hh = c1 / (1.0 - k);
    let c_pp = (k - mu / 2.0) / (1.0 - k);
    let c_eta = k - 1.0 + mu / 2.0;

    // g(AEᵢ, Eⱼ) tables
    let gg = gram.clone();
    let gh = (gram * h).transpose();
    let gp = (gram * phi).transpose();
    let gph = (gram * &phih).transpose();
    let eta = &s.eta;

    let cov = |x: usize, y: usize, z: usize, w: usize| -> f64 {
        let g = |a: usize, b: usize| gg[(a, b)];
        // gh[(a,b)] = g(hEₐ, E_b)
        let ghf = |a: usize, b: usize| gh[(a, b)];
        let gpf = |a: usize, b: usize| gp[(a, b)];
        let gphf = |a: usize, b: usize| gph[(a, b)];
        let mut t = c1 * (g(y, z) * g(x, w) - g(x, z) * g(y, w));
        t += g(y, z) * ghf(x, w) - g(x, z) * ghf(y, w) - g(y, w) * ghf(x, z) + g(x, w) * ghf(y, z);
        t += c_hh * (ghf(y, z) * ghf(x, w) - ghf(x, z) * ghf(y, w));
        t -= mu / 2.0 * (gpf(y, z) * gpf(x, w) - gpf(x, z) * gpf(y, w));
        t += c_pp * (gphf(y, z) * gphf(x, w) - gphf(y, w) * gphf(x, z));
        t += mu * gpf(x, y) * gpf(z, w);
        t += eta[x] * eta[w] * (c_eta * g(y, z) + (mu - 1.0) * ghf(y, z));
        t -= eta[x] * eta[z] * (c_eta * g(y, w) + (mu - 1.0) * ghf(y, w));
        t += eta[y] * eta[z] * (c_eta * g(x, w) + (mu - 1.0) * ghf(x, w));
        t -= eta[y] * eta[w] * (c_eta * g(x, z) + (mu - 1.0) * ghf(x, z));
        t
    };
    let ginv = s.g.inverse();
    Ok(TrilinearMap::from_fn(n, |i, j, k| {
        let lowered = DVector::from_fn(n, |w, _| cov(i, j, k, w));
        ginv * lowered
    }))
}

/// `max |g((∇_X h)Y, Z)|` over horizontal basis triples, with
/// `(∇_X h)Y = Λ(X)hY − hΛ(X)Y`.
pub fn eta_parallel_residual(
    conn: &ConnectionAtO,
    s: &ContactStructureAtO,
    h: &DMatrix<f64>,
    d: &ReductiveDecomposition,
) -> f64 {
    let hor = s.horizontal(d.b_indices());
    let mut worst = 0.0_f64;
    for x in &hor {
        let lx = conn.operator(x);
        let nabla_h = &lx * h - h * &lx;
        for y in &hor {
            let v = &nabla_h * y;
            for z in &hor {
                worst = worst.max(s.g.inner(&v, z).abs());
            }
        }
    }
    worst
}

/// `max |A(X,ξ) − (φX + φhX)|` over horizontal basis vectors, where
/// `A = ∇̃ − ∇`.
pub fn reeb_difference_residual(
    conn: &ConnectionAtO,
    s: &ContactStructureAtO,
    h: &DMatrix<f64>,
    d: &ReductiveDecomposition,
) -> f64 {
    s.horizontal(d.b_indices())
        .iter()
        .map(|x| {
            let a = conn.difference_tensor(x, &s.xi);
            (a - &s.phi * x - &s.phi * h * x).amax()
        })
        .fold(0.0, f64::max)
}

/// Boeckx invariant of the unit tangent sphere bundle over a space form of
/// curvature `c`: `(1 + c)/|1 − c|`.
pub fn boeckx_t1m(c: f64) -> Result<f64> {
    if c == 1.0 {
        return Err(Error::InvalidParameter(
            "tangent sphere bundle invariant is undefined at c = 1".into(),
        ));
    }
    Ok((1.0 + c) / (1.0 - c).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boeckx_values() {
        assert_eq!(boeckx_invariant(0.0, 2.0).unwrap(), 0.0);
        assert!((boeckx_invariant(0.4375, -0.5).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!((boeckx_invariant(-0.5625, 0.5).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(boeckx_invariant(1.0, 0.3), Err(Error::Sasakian));
    }

    #[test]
    fn d_homothetic_parameters() {
        let km = KappaMu::from_parameters(0.4375, -0.5);
        let same = d_homothetic(&km, 1.0).unwrap();
        assert_eq!((same.kappa, same.mu), (km.kappa, km.mu));

        let d = d_homothetic(&km, 2.0).unwrap();
        assert!((d.kappa - 0.859375).abs() < 1e-15);
        assert!((d.mu - 0.75).abs() < 1e-15);
        assert!((d.boeckx.unwrap() - 5.0 / 3.0).abs() < 1e-14);

        for a in [0.5, 2.0, 7.0, 0.1] {
            let flat = d_homothetic(&KappaMu::from_parameters(0.0, 0.0), a).unwrap();
            assert!((flat.kappa - (a * a - 1.0) / (a * a)).abs() < 1e-15);
            assert!((flat.mu - (2.0 * a - 2.0) / a).abs() < 1e-15);
        }
        assert!(d_homothetic(&km, 0.0).is_err());
        assert!(d_homothetic(&km, -1.0).is_err());
    }

    #[test]
    fn t1m_values() {
        assert_eq!(boeckx_t1m(0.0).unwrap(), 1.0);
        assert_eq!(boeckx_t1m(3.0).unwrap(), 2.0);
        assert_eq!(boeckx_t1m(-1.0).unwrap(), 0.0);
        assert!(boeckx_t1m(1.0).is_err());
    }
}
