//! Lie triple systems, Jordan triple systems and invariant (para-)complex
//! structures on the base space of the canonical fibration.
//!
//! Everything on the base lives in `b`-coordinates: the `m`-coordinates of a
//! [`ReductiveDecomposition`] with the `ξ` slot removed. The Lie triple
//! bracket of the base is `[X,Y,Z] = −R̄(X,Y)Z = [[X,Y]_h̄, Z]`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::{ContactStructureAtO, HOperator, KappaMu};
use crate::error::{Error, Result};
use crate::homspace::{canonical_curvature, unit, CanonicalVariant, ReductiveDecomposition};
use crate::trilinear::TrilinearMap;

/// Default seed for sampled axiom scans.
pub const AXIOM_SEED: u64 = 0x6b6d_7574;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    /// Lie triple system, product read as `[x,y,z]`.
    Lts,
    /// Jordan triple system, product read as `T(x,y)z`.
    Jts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripleSystem {
    pub kind: TripleKind,
    pub product: TrilinearMap,
}

impl TripleSystem {
    pub fn lts(product: TrilinearMap) -> Self {
        Self {
            kind: TripleKind::Lts,
            product,
        }
    }

    pub fn jts(product: TrilinearMap) -> Self {
        Self {
            kind: TripleKind::Jts,
            product,
        }
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        self.product.apply(x, y, z)
    }

    /// `R(x,y)z = −[x,y,z]`; only meaningful for an LTS.
    pub fn curvature(&self) -> TrilinearMap {
        self.product.scaled(-1.0)
    }
}

/// How the five-variable identities are scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomScan {
    /// All basis tuples.
    Exhaustive,
    /// Random vectors with entries in `[−1, 1]`, fixed seed.
    Sampled { count: usize, seed: u64 },
}

impl AxiomScan {
    /// Exhaustive up to dimension 8, sampled beyond.
    pub fn default_for(dim: usize) -> Self {
        if dim <= 8 {
            Self::Exhaustive
        } else {
            Self::Sampled {
                count: 300,
                seed: AXIOM_SEED,
            }
        }
    }
}

/// Per-axiom residuals.
///
/// For an LTS: `[x,x,z] = 0`, the cyclic identity, and the derivation law.
/// For a JTS: (JT1) `T(x,y)z = T(z,y)x`, (JT2)
/// `T(u,v)T(x,y,z) = T(T(u,v)x,y,z) − T(x,T(v,u)y,z) + T(x,y,T(u,v)z)`, and 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxiomResiduals {
    pub first: f64,
    pub second: f64,
    pub third: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        self.first.max(self.second).max(self.third)
    }
}

pub fn axiom_residual(ts: &TripleSystem) -> f64 {
    axiom_residuals(ts, AxiomScan::default_for(ts.dim())).max()
}

pub fn axiom_residuals(ts: &TripleSystem, scan: AxiomScan) -> AxiomResiduals {
    let d = ts.dim();
    let t = &ts.product;
    let mut out = AxiomResiduals::default();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                match ts.kind {
                    TripleKind::Lts => {
                        let skew = t.value(i, j, k) + t.value(j, i, k);
                        out.first = out.first.max(skew.amax());
                        let cyc = t.value(i, j, k) + t.value(j, k, i) + t.value(k, i, j);
                        out.second = out.second.max(cyc.amax());
                    }
                    TripleKind::Jts => {
                        let jt1 = t.value(i, j, k) - t.value(k, j, i);
                        out.first = out.first.max(jt1.amax());
                    }
                }
            }
        }
    }
    let five = match scan {
        AxiomScan::Exhaustive => five_variable_exhaustive(ts),
        AxiomScan::Sampled { count, seed } => five_variable_sampled(ts, count, seed),
    };
    match ts.kind {
        TripleKind::Lts => out.third = five,
        TripleKind::Jts => out.second = five,
    }
    out
}

// Operator z ↦ P(u, v, z) for basis u, v.
fn left_operators(t: &TrilinearMap) -> Vec<DMatrix<f64>> {
    let d = t.dim();
    let mut ops = Vec::with_capacity(d * d);
    for u in 0..d {
        for v in 0..d {
            ops.push(DMatrix::from_fn(d, d, |r, k| t.get(u, v, k, r)));
        }
    }
    ops
}

// Defect of D acting as a derivation: D P(x,y,z) − P(Dx,y,z) ∓ P(x,D'y,z) − P(x,y,Dz)
fn derivation_defect(
    t: &TrilinearMap,
    outer: &DMatrix<f64>,
    middle: &DMatrix<f64>,
    middle_sign: f64,
) -> f64 {
    let d = t.dim();
    let mut worst = 0.0_f64;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut r = outer * t.value(x, y, z);
                for a in 0..d {
                    let (cx, cy, cz) = (outer[(a, x)], middle[(a, y)], outer[(a, z)]);
                    if cx != 0.0 {
                        r -= t.value(a, y, z) * cx;
                    }
                    if cy != 0.0 {
                        r -= t.value(x, a, z) * (cy * middle_sign);
                    }
                    if cz != 0.0 {
                        r -= t.value(x, y, a) * cz;
                    }
                }
                worst = worst.max(r.amax());
            }
        }
    }
    worst
}

fn five_variable_exhaustive(ts: &TripleSystem) -> f64 {
    let d = ts.dim();
    let ops = left_operators(&ts.product);
    let mut worst = 0.0_f64;
    for u in 0..d {
        for v in 0..d {
            let outer = &ops[u * d + v];
            worst = match ts.kind {
                TripleKind::Lts => worst.max(derivation_defect(&ts.product, outer, outer, 1.0)),
                TripleKind::Jts => {
                    worst.max(derivation_defect(&ts.product, outer, &ops[v * d + u], -1.0))
                }
            };
        }
    }
    worst
}

fn five_variable_sampled(ts: &TripleSystem, count: usize, seed: u64) -> f64 {
    let d = ts.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
    let t = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>| ts.apply(a, b, c);
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let (u, v, x, y, z) = (draw(), draw(), draw(), draw(), draw());
        let lhs = t(&u, &v, &t(&x, &y, &z));
        let rhs = match ts.kind {
            TripleKind::Lts => {
                t(&t(&u, &v, &x), &y, &z) + t(&x, &t(&u, &v, &y), &z) + t(&x, &y, &t(&u, &v, &z))
            }
            TripleKind::Jts => {
                t(&t(&u, &v, &x), &y, &z) - t(&x, &t(&v, &u, &y), &z) + t(&x, &y, &t(&u, &v, &z))
            }
        };
        worst = worst.max((lhs - rhs).amax());
    }
    worst
}

/// `[x,y,z] := T(x,y)z − T(y,x)z`.
pub fn lts_from_jts(ts: &TripleSystem) -> TripleSystem {
    let t = &ts.product;
    TripleSystem::lts(TrilinearMap::from_fn(t.dim(), |i, j, k| {
        t.value(i, j, k) - t.value(j, i, k)
    }))
}

/// `R_T(x,y)z := −T(x,y)z + T(y,x)z`. `T` is a Jordan extension of `R`
/// exactly when `R = R_T`.
pub fn jordan_curvature(ts: &TripleSystem) -> TrilinearMap {
    lts_from_jts(ts).curvature()
}

/// `R(x,y)z = ⟨y,z⟩x − ⟨x,z⟩y` for the inner product with Gram matrix `gram`.
pub fn sphere_curvature(gram: &DMatrix<f64>) -> TrilinearMap {
    TrilinearMap::from_rule(gram.nrows(), |x, y, z| {
        let ip = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * gram * b)[(0, 0)];
        x * ip(y, z) - y * ip(x, z)
    })
}

/// The sphere Lie triple system, `[x,y,z] = −R(x,y)z`.
pub fn sphere_lts(gram: &DMatrix<f64>) -> TripleSystem {
    TripleSystem::lts(sphere_curvature(gram).scaled(-1.0))
}

/// `T(x,y)z = ⟨x,z⟩y − ⟨x,y⟩z − ⟨y,z⟩x`.
pub fn sphere_jts(gram: &DMatrix<f64>) -> TripleSystem {
    TripleSystem::jts(TrilinearMap::from_rule(gram.nrows(), |x, y, z| {
        let ip = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * gram * b)[(0, 0)];
        y * ip(x, z) - z * ip(x, y) - x * ip(y, z)
    }))
}

/// The hyperbolic pair: `(−R, −T)`.
pub fn hyperbolic_lts(gram: &DMatrix<f64>) -> TripleSystem {
    TripleSystem::lts(sphere_lts(gram).product.scaled(-1.0))
}

pub fn hyperbolic_jts(gram: &DMatrix<f64>) -> TripleSystem {
    TripleSystem::jts(sphere_jts(gram).product.scaled(-1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// `J² = −id`
    Complex,
    /// `I² = id`, `±1`-eigenspaces of equal dimension
    ParaComplex,
    /// `τ² = id`, `±1`-eigenspaces of equal dimension
    Involution,
}

impl StructureKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Complex => "complex",
            Self::ParaComplex => "para-complex",
            Self::Involution => "involution",
        }
    }

    fn square_sign(&self) -> f64 {
        match self {
            Self::Complex => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureOperator {
    pub matrix: DMatrix<f64>,
    pub kind: StructureKind,
}

impl StructureOperator {
    /// Checks the square identity and, for the involutive kinds, that the
    /// `±1`-eigenspaces have equal dimension.
    pub fn new(matrix: DMatrix<f64>, kind: StructureKind, tol: f64) -> Result<Self> {
        let op = Self { matrix, kind };
        let res = op.square_residual();
        if res > tol {
            return Err(Error::InvalidParameter(format!(
                "{} structure square residual {res:.3e}",
                kind.name()
            )));
        }
        if kind != StructureKind::Complex {
            // trace counts (+1 dim) − (−1 dim)
            let tr = op.matrix.trace();
            if tr.abs() > tol * op.matrix.nrows() as f64 {
                return Err(Error::InvalidParameter(format!(
                    "{} structure has unequal eigenspaces (trace {tr:.3e})",
                    kind.name()
                )));
            }
        }
        Ok(op)
    }

    pub fn square_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        let id = DMatrix::<f64>::identity(n, n) * self.kind.square_sign();
        (&self.matrix * &self.matrix - id).amax()
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        match self.kind {
            StructureKind::Complex => -&self.matrix,
            _ => self.matrix.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InvarianceResiduals {
    /// `[X,Y,SZ] = S[X,Y,Z]`
    pub invariant: f64,
    /// `[SX,Y,Z] = [X,SY,Z]`
    pub straight: f64,
    /// `[SX,Y,Z] = −[X,SY,Z]`
    pub twisted: f64,
}

pub fn invariance_residuals(lts: &TripleSystem, s: &DMatrix<f64>) -> InvarianceResiduals {
    let t = &lts.product;
    let first = t.precompose_slot(0, s);
    let second = t.precompose_slot(1, s);
    InvarianceResiduals {
        invariant: t.precompose_slot(2, s).max_abs_diff(&t.postcompose(s)),
        straight: first.max_abs_diff(&second),
        twisted: first.max_abs_diff(&second.scaled(-1.0)),
    }
}

/// Base-space data in `b`-coordinates.
#[derive(Debug, Clone)]
pub struct BaseGeometry {
    pub g: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub lambda: f64,
    /// g-orthonormal basis of `b₊` (columns)
    pub plus: DMatrix<f64>,
    /// g-orthonormal basis of `b₋` (columns)
    pub minus: DMatrix<f64>,
}

impl BaseGeometry {
    pub fn new(
        s: &ContactStructureAtO,
        h: &HOperator,
        d: &ReductiveDecomposition,
    ) -> Result<Self> {
        if h.is_sasakian() {
            return Err(Error::Sasakian);
        }
        let idx: Vec<usize> = d.b_indices().collect();
        let sub = |m: &DMatrix<f64>| DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        let cols = |m: &DMatrix<f64>| DMatrix::from_fn(idx.len(), m.ncols(), |r, c| m[(idx[r], c)]);
        Ok(Self {
            g: sub(s.g.gram()),
            phi: sub(&s.phi),
            h: sub(&h.matrix),
            lambda: h.lambda,
            plus: cols(&h.plus),
            minus: cols(&h.minus),
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * y)[(0, 0)]
    }

    /// `τ = h/λ`.
    pub fn tau(&self) -> DMatrix<f64> {
        &self.h / self.lambda
    }

    fn projectors(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let id = DMatrix::<f64>::identity(n, n);
        let t = self.tau();
        ((&id + &t) * 0.5, (&id - &t) * 0.5)
    }
}

/// The Lie triple system of the base, `[X,Y,Z] = [[X,Y]_h̄, Z]`, read off the
/// symmetric decomposition `g = h̄ ⊕ b`.
pub fn base_lts(d: &ReductiveDecomposition) -> Result<TripleSystem> {
    let idx: Vec<usize> = d.b_indices().collect();
    let dm = d.dim_m();
    let nb = idx.len();
    let mut err = None;
    let map = TrilinearMap::from_fn(nb, |i, j, k| {
        match canonical_curvature(
            d,
            CanonicalVariant::SymmetricBase,
            &unit(dm, idx[i]),
            &unit(dm, idx[j]),
            &unit(dm, idx[k]),
        ) {
            Ok(v) => {
                if v[d.xi_index()].abs() > 1e-9 {
                    err = Some(Error::NotInSpan {
                        residual: v[d.xi_index()].abs(),
                    });
                }
                DVector::from_fn(nb, |r, _| -v[idx[r]])
            }
            Err(e) => {
                err = Some(e);
                DVector::zeros(nb)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(TripleSystem::lts(map)),
    }
}

/// Closed-form curvature `R̄_o(X,Y)Z` of the base as a map on `b`.
pub fn base_curvature_formula(km: &KappaMu, base: &BaseGeometry) -> Result<TrilinearMap> {
    let (kappa, mu) = (km.kappa, km.mu);
    if kappa >= 1.0 {
        return Err(Error::Sasakian);
    }
    let c1 = 1.0 - mu / 2.0;
    let c2 = c1 / (1.0 - kappa);
    let n = base.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let ph = &base.phi * &base.h;
    // ops[o] applied to basis vectors, and g(ops[o] Eᵢ, Eⱼ) tables
    let ops = [&id, &base.h, &base.phi, &ph];
    let low: Vec<DMatrix<f64>> = ops.iter().map(|m| (&base.g * *m).transpose()).collect();
    let col = |o: usize, i: usize| ops[o].column(i);
    let ip = |o: usize, i: usize, k: usize| low[o][(i, k)];
    let (e, hh, p, q) = (0, 1, 2, 3);
    Ok(TrilinearMap::from_fn(n, |x, y, z| {
        let pxy = ip(p, x, y);
        col(e, x) * (c1 * ip(e, y, z) + ip(hh, y, z)) - col(e, y) * (c1 * ip(e, x, z) + ip(hh, x, z))
            + col(hh, x) * (c2 * ip(hh, y, z) + ip(e, y, z))
            - col(hh, y) * (c2 * ip(hh, x, z) + ip(e, x, z))
            + col(p, x) * (c1 * ip(p, y, z) + ip(q, y, z))
            - col(p, y) * (c1 * ip(p, x, z) + ip(q, x, z))
            + col(q, x) * (c2 * ip(q, y, z) + ip(p, y, z))
            - col(q, y) * (c2 * ip(q, x, z) + ip(p, x, z))
            + col(p, z) * ((mu - 2.0) * pxy)
            - col(q, z) * (2.0 * pxy)
    }))
}

/// Standard structure `aφ` on `b₊` and `±(1/a)φ` on `b₋` (`+` complex,
/// `−` para-complex).
pub fn standard_structure_operator(kind: StructureKind, a: f64, base: &BaseGeometry) -> DMatrix<f64> {
    let (pp, pm) = base.projectors();
    let sign = match kind {
        StructureKind::Complex => 1.0,
        _ => -1.0,
    };
    &base.phi * (pp * a + pm * (sign / a))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardStructure {
    pub kind: StructureKind,
    pub a: f64,
    pub operator: StructureOperator,
}

/// Tolerance for `|I| = 1`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `a = √((I+1)/(I−1))` (complex) for `|I| > 1`, `a = √(−(I+1)/(I−1))`
/// (para-complex) for `|I| < 1`.
pub fn standard_constant(invariant: f64) -> Result<(StructureKind, f64)> {
    if !invariant.is_finite() {
        return Err(Error::InvalidParameter(format!("invariant {invariant}")));
    }
    if (invariant.abs() - 1.0).abs() <= BOUNDARY_TOL {
        return Err(Error::BoundaryInvariant);
    }
    let ratio = (invariant + 1.0) / (invariant - 1.0);
    if invariant.abs() > 1.0 {
        Ok((StructureKind::Complex, ratio.sqrt()))
    } else {
        Ok((StructureKind::ParaComplex, (-ratio).sqrt()))
    }
}

pub fn standard_structure_solve(km: &KappaMu, base: &BaseGeometry) -> Result<StandardStructure> {
    let invariant = km.boeckx.ok_or(Error::Sasakian)?;
    let (kind, a) = standard_constant(invariant)?;
    let operator = StructureOperator::new(standard_structure_operator(kind, a, base), kind, 1e-8)?;
    Ok(StandardStructure { kind, a, operator })
}

#[derive(Debug, Clone)]
pub struct TauReport {
    pub tau_square: f64,
    pub automorphism: f64,
    /// `τJ + Jτ`, when a structure was supplied.
    pub anti_commutation: Option<f64>,
    /// `b^τ` agrees with `b₊`: `max |τX − X|` over the `b₊` basis.
    pub fixed_is_plus: f64,
    /// The fixed subsystem on `b₊`, in the g-orthonormal `b₊` basis.
    pub fixed: TripleSystem,
}

pub fn tau_and_fixed_subsystem(
    lts: &TripleSystem,
    base: &BaseGeometry,
    structure: Option<&DMatrix<f64>>,
) -> Result<TauReport> {
    let tau = base.tau();
    let n = base.dim();
    let tau_square = (&tau * &tau - DMatrix::<f64>::identity(n, n)).amax();
    let moved = lts
        .product
        .precompose_slot(0, &tau)
        .precompose_slot(1, &tau)
        .precompose_slot(2, &tau);
    let automorphism = moved.max_abs_diff(&lts.product.postcompose(&tau));
    let anti_commutation = structure.map(|j| (&tau * j + j * &tau).amax());
    let fixed_is_plus = (&tau * &base.plus - &base.plus).amax();
    let fixed = TripleSystem::lts(lts.product.restrict(&base.plus, 1e-8)?);
    Ok(TauReport {
        tau_square,
        automorphism,
        anti_commutation,
        fixed_is_plus,
        fixed,
    })
}

/// Structure tensor `T(X,Y)Z = −½(R̄(X,Y)Z − S R̄(X, S⁻¹Y)Z)` restricted to
/// `b₊`, in the g-orthonormal `b₊` basis.
pub fn jordan_extension(
    lts: &TripleSystem,
    s: &StructureOperator,
    base: &BaseGeometry,
) -> Result<TripleSystem> {
    let r = lts.curvature();
    let sinv = s.inverse();
    let n = base.dim();
    let full = TrilinearMap::from_rule(n, |x, y, z| {
        (r.apply(x, y, z) - &s.matrix * r.apply(x, &(&sinv * y), z)) * -0.5
    });
    Ok(TripleSystem::jts(full.restrict(&base.plus, 1e-8)?))
}

/// `g(Y,Z)X − g(X,Z)Y + g(X,Y)Z`, the shape of the Jordan extension on `b₊`.
pub fn jordan_shape(gram: &DMatrix<f64>) -> TrilinearMap {
    sphere_jts(gram).product.scaled(-1.0)
}

/// Symmetric base spaces of the canonical fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSpace {
    ComplexificationOfSphere,
    ParaComplexificationOfSphere,
    ComplexificationOfHyperbolic,
}

fn so_label(p: i64, q: i64) -> String {
    if q == 0 {
        format!("SO({p})")
    } else {
        format!("SO({p},{q})")
    }
}

impl BaseSpace {
    pub fn type_tag(&self) -> &'static str {
        match self {
            Self::ComplexificationOfSphere => "complexification of S^n",
            Self::ParaComplexificationOfSphere => "para-complexification of S^n",
            Self::ComplexificationOfHyperbolic => "complexification of H^n",
        }
    }

    pub fn invariant_range(&self) -> &'static str {
        match self {
            Self::ComplexificationOfSphere => "I > 1",
            Self::ParaComplexificationOfSphere => "-1 < I < 1",
            Self::ComplexificationOfHyperbolic => "I < -1",
        }
    }

    pub fn symbolic_label(&self) -> &'static str {
        match self {
            Self::ComplexificationOfSphere => "SO(n+2)/(SO(n)×SO(2))",
            Self::ParaComplexificationOfSphere => "SO(n+1,1)/(SO(n)×SO(1,1))",
            Self::ComplexificationOfHyperbolic => "SO(n,2)/(SO(n)×SO(2))",
        }
    }

    pub fn symbolic_model_label(&self) -> &'static str {
        match self {
            Self::ComplexificationOfSphere => "SO(n+2)/SO(n)",
            Self::ParaComplexificationOfSphere => "SO(n+1,1)/SO(n)",
            Self::ComplexificationOfHyperbolic => "SO(n,2)/SO(n)",
        }
    }

    fn group(&self, n: usize) -> String {
        let n = n as i64;
        match self {
            Self::ComplexificationOfSphere => so_label(n + 2, 0),
            Self::ParaComplexificationOfSphere => so_label(n + 1, 1),
            Self::ComplexificationOfHyperbolic => so_label(n, 2),
        }
    }

    pub fn label(&self, n: usize) -> String {
        let stab = match self {
            Self::ParaComplexificationOfSphere => "SO(1,1)",
            _ => "SO(2)",
        };
        format!("{}/({}×{stab})", self.group(n), so_label(n as i64, 0))
    }

    pub fn model_label(&self, n: usize) -> String {
        format!("{}/{}", self.group(n), so_label(n as i64, 0))
    }
}

/// `I > 1`, `−1 < I < 1`, `I < −1` to the three base spaces.
pub fn classify_base(invariant: f64) -> Result<BaseSpace> {
    if !invariant.is_finite() {
        return Err(Error::InvalidParameter(format!("invariant {invariant}")));
    }
    if (invariant.abs() - 1.0).abs() <= BOUNDARY_TOL {
        return Err(Error::BoundaryInvariant);
    }
    Ok(if invariant > 1.0 {
        BaseSpace::ComplexificationOfSphere
    } else if invariant > -1.0 {
        BaseSpace::ParaComplexificationOfSphere
    } else {
        BaseSpace::ComplexificationOfHyperbolic
    })
}
