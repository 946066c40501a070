//! Reductive homogeneous spaces `G/H` at the base point.
//!
//! A [`ReductiveDecomposition`] splits `g = h ⊕ m` with `m = ℝξ ⊕ p ⊕ q`.
//! All invariant tensors are handled through their values on `m`; connections
//! are given by connection functions `Λ: m → End(m)` and curvature is evaluated
//! from brackets only.
//!
//! Conventions: the canonical connection has `Λ = 0`, torsion `−[X,Y]_m` and
//! curvature `−[[X,Y]_h, ·]`. Curvature is `R(X,Y) = [∇_X, ∇_Y] − ∇_[X,Y]`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::liecore::{bracket, OrderedBasis, RealMatrix, VectorInBasis, DEFAULT_TOL};
use crate::trilinear::TrilinearMap;

/// `g = h ⊕ ℝξ ⊕ p ⊕ q` with cached bracket tables on `m`.
#[derive(Debug, Clone)]
pub struct ReductiveDecomposition {
    full: OrderedBasis,
    h_len: usize,
    p_len: usize,
    q_len: usize,
    // [Mᵢ, Mⱼ] split into h- and m-coordinates, indexed i * dim_m + j
    mm_h: Vec<VectorInBasis>,
    mm_m: Vec<VectorInBasis>,
    // ad(Hₖ) projected to m
    ad_h: Vec<DMatrix<f64>>,
    span_residual: f64,
}

impl ReductiveDecomposition {
    pub fn new(
        h: &OrderedBasis,
        xi: RealMatrix,
        p: &OrderedBasis,
        q: &OrderedBasis,
    ) -> Result<Self> {
        let xi_basis = OrderedBasis::new(vec![xi], vec!["xi".into()])?;
        let full = OrderedBasis::concat(&[h, &xi_basis, p, q])?;
        let h_len = h.len();
        let dm = 1 + p.len() + q.len();
        let els = full.elements();

        let mut span_residual = 0.0_f64;
        let mut split = |x: &RealMatrix| -> Result<(VectorInBasis, VectorInBasis)> {
            let (v, res) = full.project(x)?;
            span_residual = span_residual.max(res);
            Ok((v.rows(0, h_len).into_owned(), v.rows(h_len, dm).into_owned()))
        };

        let mut mm_h = Vec::with_capacity(dm * dm);
        let mut mm_m = Vec::with_capacity(dm * dm);
        for i in 0..dm {
            for j in 0..dm {
                let b = bracket(&els[h_len + i], &els[h_len + j])?;
                let (bh, bm) = split(&b)?;
                mm_h.push(bh);
                mm_m.push(bm);
            }
        }
        let mut ad_h = Vec::with_capacity(h_len);
        for k in 0..h_len {
            let mut ad = DMatrix::zeros(dm, dm);
            for j in 0..dm {
                let b = bracket(&els[k], &els[h_len + j])?;
                let (_, bm) = split(&b)?;
                ad.set_column(j, &bm);
            }
            ad_h.push(ad);
        }
        if span_residual > DEFAULT_TOL {
            return Err(Error::NotSubalgebra {
                residual: span_residual,
            });
        }
        Ok(Self {
            full,
            h_len,
            p_len: p.len(),
            q_len: q.len(),
            mm_h,
            mm_m,
            ad_h,
            span_residual,
        })
    }

    /// The full ordered basis `h, ξ, p, q`.
    pub fn full_basis(&self) -> &OrderedBasis {
        &self.full
    }

    pub fn dim_h(&self) -> usize {
        self.h_len
    }

    pub fn dim_m(&self) -> usize {
        1 + self.p_len + self.q_len
    }

    pub fn dim_b(&self) -> usize {
        self.p_len + self.q_len
    }

    /// Index of `ξ` in `m`-coordinates (always 0).
    pub fn xi_index(&self) -> usize {
        0
    }

    pub fn p_indices(&self) -> std::ops::Range<usize> {
        1..1 + self.p_len
    }

    pub fn q_indices(&self) -> std::ops::Range<usize> {
        1 + self.p_len..self.dim_m()
    }

    pub fn b_indices(&self) -> std::ops::Range<usize> {
        1..self.dim_m()
    }

    /// `ξ` as an `m`-vector.
    pub fn xi_vector(&self) -> VectorInBasis {
        unit(self.dim_m(), 0)
    }

    pub fn xi_matrix(&self) -> &RealMatrix {
        &self.full.elements()[self.h_len]
    }

    pub fn h_elements(&self) -> &[RealMatrix] {
        &self.full.elements()[..self.h_len]
    }

    pub fn m_elements(&self) -> &[RealMatrix] {
        &self.full.elements()[self.h_len..]
    }

    /// Largest reconstruction residual seen while caching brackets.
    pub fn span_residual(&self) -> f64 {
        self.span_residual
    }

    pub fn m_to_matrix(&self, x: &VectorInBasis) -> RealMatrix {
        let mut out = RealMatrix::zeros(self.full.matrix_dim(), self.full.matrix_dim());
        for (c, e) in x.iter().zip(self.m_elements()) {
            if *c != 0.0 {
                out += e * *c;
            }
        }
        out
    }

    /// Splits a Lie algebra element into `(h, m)` coordinates.
    pub fn split(&self, x: &RealMatrix) -> Result<(VectorInBasis, VectorInBasis)> {
        let (v, res) = self.full.project(x)?;
        if res > DEFAULT_TOL * x.amax().max(1.0) {
            return Err(Error::NotInSpan { residual: res });
        }
        let dm = self.dim_m();
        Ok((
            v.rows(0, self.h_len).into_owned(),
            v.rows(self.h_len, dm).into_owned(),
        ))
    }

    /// `[x, y]` for `m`-vectors, returned as `(h-part, m-part)`.
    pub fn bracket_m(&self, x: &VectorInBasis, y: &VectorInBasis) -> (VectorInBasis, VectorInBasis) {
        let dm = self.dim_m();
        let mut bh = VectorInBasis::zeros(self.h_len);
        let mut bm = VectorInBasis::zeros(dm);
        for i in 0..dm {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..dm {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                bh.axpy(w, &self.mm_h[i * dm + j], 1.0);
                bm.axpy(w, &self.mm_m[i * dm + j], 1.0);
            }
        }
        (bh, bm)
    }

    /// `ad(a)` restricted to `m` and projected back to `m`, for `a ∈ h`.
    pub fn ad_h(&self, a: &VectorInBasis) -> DMatrix<f64> {
        let dm = self.dim_m();
        let mut out = DMatrix::zeros(dm, dm);
        for (c, ad) in a.iter().zip(&self.ad_h) {
            if *c != 0.0 {
                out += ad * *c;
            }
        }
        out
    }

    /// `Y ↦ [x, Y]_m` for `x ∈ m`.
    pub fn ad_m(&self, x: &VectorInBasis) -> DMatrix<f64> {
        let dm = self.dim_m();
        let mut out = DMatrix::zeros(dm, dm);
        for j in 0..dm {
            let (_, bm) = self.bracket_m(x, &unit(dm, j));
            out.set_column(j, &bm);
        }
        out
    }
}

pub(crate) fn unit(n: usize, i: usize) -> VectorInBasis {
    let mut v = VectorInBasis::zeros(n);
    v[i] = 1.0;
    v
}

/// Max residuals of the inclusions defining reductive and symmetric
/// decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DecompositionResiduals {
    /// `[h, m] ⊆ m`
    pub reductive: f64,
    /// `[h̄, h̄] ⊆ h̄`
    pub hbar_closed: f64,
    /// `[h̄, b] ⊆ b`
    pub hbar_b: f64,
    /// `[b, b] ⊆ h̄`
    pub b_b: f64,
    /// `[X, Y]_m ∈ ℝξ` for `X, Y ∈ b`, read from the cached `m`-tables
    pub b_b_m_in_xi: f64,
}

impl DecompositionResiduals {
    pub fn max(&self) -> f64 {
        [
            self.reductive,
            self.hbar_closed,
            self.hbar_b,
            self.b_b,
            self.b_b_m_in_xi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn decomposition_residuals(d: &ReductiveDecomposition) -> DecompositionResiduals {
    #[derive(Clone, Copy, PartialEq)]
    enum Part {
        H,
        Xi,
        B,
    }
    let h_len = d.dim_h();
    let total = d.full.len();
    let part = |i: usize| {
        if i < h_len {
            Part::H
        } else if i == h_len {
            Part::Xi
        } else {
            Part::B
        }
    };
    let els = d.full.elements();
    let coords: Vec<Vec<VectorInBasis>> = (0..total)
        .map(|i| {
            (0..total)
                .map(|j| {
                    let b = &els[i] * &els[j] - &els[j] * &els[i];
                    d.full.project(&b).map(|(v, _)| v).unwrap_or_else(|_| {
                        VectorInBasis::from_element(total, f64::INFINITY)
                    })
                })
                .collect()
        })
        .collect();
    let outside = |v: &VectorInBasis, allowed: &dyn Fn(Part) -> bool| {
        (0..total)
            .filter(|&k| !allowed(part(k)))
            .fold(0.0_f64, |m, k| m.max(v[k].abs()))
    };
    let mut r = DecompositionResiduals::default();
    for i in 0..total {
        for j in 0..total {
            let v = &coords[i][j];
            let (pi, pj) = (part(i), part(j));
            let in_hbar = |p: Part| p != Part::B;
            if pi == Part::H && pj != Part::H {
                r.reductive = r.reductive.max(outside(v, &|p| p != Part::H));
            }
            if in_hbar(pi) && in_hbar(pj) {
                r.hbar_closed = r.hbar_closed.max(outside(v, &in_hbar));
            }
            if in_hbar(pi) && pj == Part::B {
                r.hbar_b = r.hbar_b.max(outside(v, &|p| p == Part::B));
            }
            if pi == Part::B && pj == Part::B {
                r.b_b = r.b_b.max(outside(v, &in_hbar));
            }
        }
    }
    let dm = d.dim_m();
    for i in d.b_indices() {
        for j in d.b_indices() {
            let bm = &d.mm_m[i * dm + j];
            for k in d.b_indices() {
                r.b_b_m_in_xi = r.b_b_m_in_xi.max(bm[k].abs());
            }
        }
    }
    r
}

/// Torsion of the canonical connection at the base point: `−[X,Y]_m`.
pub fn canonical_torsion(
    d: &ReductiveDecomposition,
    x: &VectorInBasis,
    y: &VectorInBasis,
) -> VectorInBasis {
    -d.bracket_m(x, y).1
}

/// Which canonical connection the curvature refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalVariant {
    /// `g = h ⊕ m`: `R̃(X,Y)Z = −[[X,Y]_h, Z]`.
    Reductive,
    /// `g = h̄ ⊕ b` with `h̄ = h ⊕ ℝξ`: `R̄(X,Y)Z = −[[X,Y]_h̄, Z]`, inputs in `b`.
    SymmetricBase,
}

pub fn canonical_curvature(
    d: &ReductiveDecomposition,
    variant: CanonicalVariant,
    x: &VectorInBasis,
    y: &VectorInBasis,
    z: &VectorInBasis,
) -> Result<VectorInBasis> {
    let (bh, bm) = d.bracket_m(x, y);
    let mut out = -(d.ad_h(&bh) * z);
    if variant == CanonicalVariant::SymmetricBase {
        let xi = d.xi_index();
        for (name, v) in [("X", x), ("Y", y), ("Z", z)] {
            if v[xi].abs() > DEFAULT_TOL {
                return Err(Error::InvalidParameter(format!(
                    "{name} has a ξ-component; the base curvature acts on b"
                )));
            }
        }
        let xi_part = bm[xi];
        if xi_part != 0.0 {
            out -= d.ad_m(&d.xi_vector()) * z * xi_part;
        }
    }
    Ok(out)
}

/// The canonical curvature as a map on `m`. For the symmetric-base variant,
/// entries with a `ξ` slot are zero.
pub fn canonical_curvature_map(d: &ReductiveDecomposition, variant: CanonicalVariant) -> TrilinearMap {
    let dm = d.dim_m();
    let xi = d.xi_index();
    TrilinearMap::from_fn(dm, |i, j, k| {
        if variant == CanonicalVariant::SymmetricBase && (i == xi || j == xi || k == xi) {
            return VectorInBasis::zeros(dm);
        }
        canonical_curvature(d, variant, &unit(dm, i), &unit(dm, j), &unit(dm, k))
            .expect("basis vectors of b have no ξ-component")
    })
}

/// An invariant inner product on `m`, given by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAtO {
    gram: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl MetricAtO {
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.nrows(),
                actual: gram.ncols(),
            });
        }
        if (&gram - gram.transpose()).amax() > DEFAULT_TOL * gram.amax().max(1.0) {
            return Err(Error::SingularMetric);
        }
        let inverse = gram
            .clone()
            .cholesky()
            .ok_or(Error::SingularMetric)?
            .inverse();
        Ok(Self { gram, inverse })
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn inner(&self, x: &VectorInBasis, y: &VectorInBasis) -> f64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    pub fn norm(&self, x: &VectorInBasis) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.gram.clone().symmetric_eigen().eigenvalues.min()
    }

    /// `max |g(AX, Y) − g(X, AY)|` over basis pairs.
    pub fn symmetry_defect(&self, a: &DMatrix<f64>) -> f64 {
        let ga = &self.gram * a;
        (&ga - ga.transpose()).amax()
    }

    /// `max |g(AX, Y) + g(X, AY)|` over basis pairs.
    pub fn skew_defect(&self, a: &DMatrix<f64>) -> f64 {
        let ga = &self.gram * a;
        (&ga + ga.transpose()).amax()
    }
}

/// Connection function `Λ: m → End(m)` of an invariant connection, with the
/// symmetric part `U` used to build the Levi-Civita one.
#[derive(Debug, Clone)]
pub struct ConnectionAtO {
    lambda: Vec<DMatrix<f64>>,
    u: Vec<VectorInBasis>,
}

impl ConnectionAtO {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// `Λ(Eᵢ)`.
    pub fn lambda(&self, i: usize) -> &DMatrix<f64> {
        &self.lambda[i]
    }

    /// `U(Eᵢ, Eⱼ)`.
    pub fn u(&self, i: usize, j: usize) -> &VectorInBasis {
        &self.u[i * self.dim() + j]
    }

    /// `Λ(x)`.
    pub fn operator(&self, x: &VectorInBasis) -> DMatrix<f64> {
        let dm = self.dim();
        let mut out = DMatrix::zeros(dm, dm);
        for (c, l) in x.iter().zip(&self.lambda) {
            if *c != 0.0 {
                out += l * *c;
            }
        }
        out
    }

    pub fn apply(&self, x: &VectorInBasis, y: &VectorInBasis) -> VectorInBasis {
        self.operator(x) * y
    }

    /// Difference tensor `A = ∇̃ − ∇` between the canonical connection and
    /// this one. With `Λ̃ = 0` this is `A(X,Y) = −Λ(X)Y`.
    pub fn difference_tensor(&self, x: &VectorInBasis, y: &VectorInBasis) -> VectorInBasis {
        -self.apply(x, y)
    }

    /// `max |g(Λ(X)Y, Z) + g(Y, Λ(X)Z)|`.
    pub fn metric_residual(&self, g: &MetricAtO) -> f64 {
        self.lambda.iter().fold(0.0, |m, l| m.max(g.skew_defect(l)))
    }

    /// `max |Λ(X)Y − Λ(Y)X − [X,Y]_m|`.
    pub fn torsion_residual(&self, d: &ReductiveDecomposition) -> f64 {
        let dm = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dm {
            for j in 0..dm {
                let t = self.lambda[i].column(j) - self.lambda[j].column(i) - &d.mm_m[i * dm + j];
                worst = worst.max(t.amax());
            }
        }
        worst
    }
}

/// Levi-Civita connection of an invariant metric:
/// `Λ(X)Y = ½[X,Y]_m + U(X,Y)` with
/// `2g(U(X,Y), Z) = g([Z,X]_m, Y) + g(X, [Z,Y]_m)`.
pub fn levi_civita_connection(d: &ReductiveDecomposition, g: &MetricAtO) -> Result<ConnectionAtO> {
    let dm = d.dim_m();
    if g.dim() != dm {
        return Err(Error::DimensionMismatch {
            expected: dm,
            actual: g.dim(),
        });
    }
    let gram = g.gram();
    let mut u = Vec::with_capacity(dm * dm);
    for i in 0..dm {
        for j in 0..dm {
            let rhs = VectorInBasis::from_fn(dm, |k, _| {
                let zx = &d.mm_m[k * dm + i];
                let zy = &d.mm_m[k * dm + j];
                (zx.transpose() * gram.column(j))[(0, 0)] + (gram.row(i) * zy)[(0, 0)]
            });
            u.push(g.inverse() * rhs * 0.5);
        }
    }
    let lambda = (0..dm)
        .map(|i| {
            DMatrix::from_fn(dm, dm, |r, j| {
                0.5 * d.mm_m[i * dm + j][r] + u[i * dm + j][r]
            })
        })
        .collect();
    Ok(ConnectionAtO { lambda, u })
}

/// `R(X,Y)Z = Λ(X)Λ(Y)Z − Λ(Y)Λ(X)Z − Λ([X,Y]_m)Z − [[X,Y]_h, Z]`.
pub fn levi_civita_curvature(conn: &ConnectionAtO, d: &ReductiveDecomposition) -> TrilinearMap {
    let dm = d.dim_m();
    let mut ops = Vec::with_capacity(dm * dm);
    for i in 0..dm {
        for j in 0..dm {
            let li = conn.lambda(i);
            let lj = conn.lambda(j);
            let op = li * lj
                - lj * li
                - conn.operator(&d.mm_m[i * dm + j])
                - d.ad_h(&d.mm_h[i * dm + j]);
            ops.push(op);
        }
    }
    TrilinearMap::from_fn(dm, |i, j, k| ops[i * dm + j].column(k).into_owned())
}

/// Max residuals of the Riemannian curvature symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurvatureSymmetries {
    /// `R(X,Y) + R(Y,X)`
    pub antisym_xy: f64,
    /// `g(R(X,Y)Z,W) + g(R(X,Y)W,Z)`
    pub antisym_zw: f64,
    /// cyclic sum over `(X,Y,Z)`
    pub bianchi: f64,
}

pub fn curvature_symmetries(r: &TrilinearMap, g: &MetricAtO) -> CurvatureSymmetries {
    let d = r.dim();
    let low = r.lowered(g.gram());
    let at = |i: usize, j: usize, k: usize, l: usize| low[((i * d + j) * d + k) * d + l];
    let mut out = CurvatureSymmetries::default();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out.antisym_xy = out.antisym_xy.max((r.get(i, j, k, l) + r.get(j, i, k, l)).abs());
                    out.antisym_zw = out.antisym_zw.max((at(i, j, k, l) + at(i, j, l, k)).abs());
                    out.bianchi = out
                        .bianchi
                        .max((r.get(i, j, k, l) + r.get(j, k, i, l) + r.get(k, i, j, l)).abs());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::wedge;
    use nalgebra::DVector;

    fn basis(els: Vec<RealMatrix>, tag: &str) -> OrderedBasis {
        let labels = (0..els.len()).map(|i| format!("{tag}{i}")).collect();
        OrderedBasis::new(els, labels).unwrap()
    }

    fn diag(entries: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&DVector::from_row_slice(entries))
    }

    fn abelian() -> ReductiveDecomposition {
        ReductiveDecomposition::new(
            &basis(vec![diag(&[1., 0., 0., 0.])], "h"),
            diag(&[0., 1., 0., 0.]),
            &basis(vec![diag(&[0., 0., 1., 0.])], "p"),
            &basis(vec![diag(&[0., 0., 0., 1.])], "q"),
        )
        .unwrap()
    }

    // so(3) with h = 0: ξ = E₁, p = {E₂}, q = {E₃}
    fn so3_trivial_isotropy() -> ReductiveDecomposition {
        ReductiveDecomposition::new(
            &basis(vec![], "h"),
            wedge(3, 1, 2),
            &basis(vec![wedge(3, 2, 0)], "p"),
            &basis(vec![wedge(3, 0, 1)], "q"),
        )
        .unwrap()
    }

    #[test]
    fn abelian_residuals_vanish() {
        let d = abelian();
        assert_eq!(decomposition_residuals(&d).max(), 0.0);
        let g = MetricAtO::new(DMatrix::identity(3, 3)).unwrap();
        let conn = levi_civita_connection(&d, &g).unwrap();
        assert_eq!(levi_civita_curvature(&conn, &d).max_abs(), 0.0);
    }

    #[test]
    fn torsion_and_curvature_vanish_on_the_diagonal() {
        let d = so3_trivial_isotropy();
        let x = DVector::from_vec(vec![0.3, -1.0, 2.0]);
        assert!(canonical_torsion(&d, &x, &x).amax() < 1e-15);
        let z = DVector::from_vec(vec![1.0, 0.5, 0.25]);
        let r = canonical_curvature(&d, CanonicalVariant::Reductive, &x, &x, &z).unwrap();
        assert!(r.amax() < 1e-15);
    }

    #[test]
    fn bi_invariant_metric_has_no_symmetric_part() {
        let d = so3_trivial_isotropy();
        let g = MetricAtO::new(DMatrix::identity(3, 3)).unwrap();
        let conn = levi_civita_connection(&d, &g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(conn.u(i, j).amax() < 1e-15);
            }
        }
        assert!(conn.metric_residual(&g) < 1e-15);
        assert!(conn.torsion_residual(&d) < 1e-15);
        // constant curvature 1/4 of the round SO(3)
        let r = levi_civita_curvature(&conn, &d);
        let e = |i| unit(3, i);
        let sec = g.inner(&r.apply(&e(0), &e(1), &e(1)), &e(0));
        assert!((sec - 0.25).abs() < 1e-14);
        let sym = curvature_symmetries(&r, &g);
        assert!(sym.antisym_xy < 1e-15 && sym.antisym_zw < 1e-15 && sym.bianchi < 1e-15);
    }

    #[test]
    fn symmetric_base_rejects_xi_inputs() {
        let d = so3_trivial_isotropy();
        let xi = d.xi_vector();
        let b = unit(3, 1);
        assert!(canonical_curvature(&d, CanonicalVariant::SymmetricBase, &xi, &b, &b).is_err());
    }

    #[test]
    fn metric_must_be_positive_definite() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(MetricAtO::new(g), Err(Error::SingularMetric));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert_eq!(MetricAtO::new(asym), Err(Error::SingularMetric));
    }
}
