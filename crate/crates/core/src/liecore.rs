//! Dense matrix Lie algebras: brackets, generalized orthogonal algebras
//! `so(p,q)`, ordered bases with coordinate extraction, and structure
//! constants.
//!
//! Every element is a square `f64` matrix. Coordinates relative to an
//! [`OrderedBasis`] are obtained by least squares in flattened matrix space
//! and are always residual-checked.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A square real matrix, viewed as an element of a matrix Lie algebra.
pub type RealMatrix = DMatrix<f64>;

/// Coefficients of a vector relative to an ordered basis.
pub type VectorInBasis = DVector<f64>;

/// Default tolerance for identities that hold exactly in exact arithmetic.
/// Entries are O(1) for the model sizes handled here.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Matrix commutator `AB − BA`.
pub fn bracket(a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: a.ncols(),
        });
    }
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    Ok(a * b - b * a)
}

/// `e_a ∧ e_b`: the matrix sending `e_a ↦ e_b` and `e_b ↦ −e_a`.
pub fn wedge(dim: usize, a: usize, b: usize) -> RealMatrix {
    let mut x = RealMatrix::zeros(dim, dim);
    x[(b, a)] = 1.0;
    x[(a, b)] = -1.0;
    x
}

/// Signature of a quadratic form with `negative` entries `−1` placed first,
/// followed by `positive` entries `+1`.
///
/// `so(n+2)` is `Signature::new(n + 2, 0)`, `so(n,2)` is `Signature::new(n, 2)`
/// and `so(n+1,1)` is `Signature::new(n + 1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Self { positive, negative }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative
    }

    /// Sign of the `i`-th diagonal entry of the form.
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn quadratic_form(&self) -> RealMatrix {
        RealMatrix::from_diagonal(&DVector::from_fn(self.dim(), |i, _| self.sign(i)))
    }
}

/// `max |XᵀS + SX|`: how far `x` is from the algebra preserving the form `s`.
pub fn form_residual(x: &RealMatrix, s: &RealMatrix) -> f64 {
    (x.transpose() * s + s * x).amax()
}

/// Basis of `{X : XᵀS + SX = 0}` for the form of `sig`.
///
/// One element per index pair `i < j` in lexicographic order. Where the form
/// has equal signs at `i` and `j` the element is `e_i ∧ e_j`; where the signs
/// differ it is the symmetric matrix `E_ij + E_ji`.
pub fn so_basis(sig: Signature) -> Result<OrderedBasis> {
    let dim = sig.dim();
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "so(p,q) needs p + q >= 2, got {dim}"
        )));
    }
    let mut elements = Vec::with_capacity(dim * (dim - 1) / 2);
    let mut labels = Vec::with_capacity(elements.capacity());
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut x = RealMatrix::zeros(dim, dim);
            x[(j, i)] = 1.0;
            x[(i, j)] = -sig.sign(i) * sig.sign(j);
            elements.push(x);
            labels.push(format!("e{i}^e{j}"));
        }
    }
    OrderedBasis::new(elements, labels)
}

/// An ordered, linearly independent list of square matrices of equal size.
#[derive(Debug, Clone)]
pub struct OrderedBasis {
    elements: Vec<RealMatrix>,
    labels: Vec<String>,
    dim: usize,
    condition: f64,
    // (FᵀF)⁻¹Fᵀ for the flattened element matrix F
    solver: DMatrix<f64>,
}

impl OrderedBasis {
    pub fn new(elements: Vec<RealMatrix>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != elements.len() {
            return Err(Error::DimensionMismatch {
                expected: elements.len(),
                actual: labels.len(),
            });
        }
        let dim = elements.first().map_or(0, |e| e.nrows());
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: e.nrows().max(e.ncols()),
                });
            }
        }
        let k = elements.len();
        let flat = DMatrix::from_fn(dim * dim, k, |r, c| elements[c].as_slice()[r]);
        let gram = flat.transpose() * &flat;
        let (condition, solver) = if k == 0 {
            (1.0, DMatrix::zeros(0, dim * dim))
        } else {
            let eig = gram.clone().symmetric_eigen();
            let lo = eig.eigenvalues.min();
            let hi = eig.eigenvalues.max();
            let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
            if !(lo > 1e-12 * hi.max(1.0)) {
                return Err(Error::DependentBasis { condition });
            }
            let inv = gram
                .cholesky()
                .ok_or(Error::DependentBasis { condition })?
                .inverse();
            (condition, inv * flat.transpose())
        };
        Ok(Self {
            elements,
            labels,
            dim,
            condition,
            solver,
        })
    }

    /// Concatenation of several bases, in order.
    pub fn concat(parts: &[&OrderedBasis]) -> Result<Self> {
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for p in parts {
            elements.extend(p.elements.iter().cloned());
            labels.extend(p.labels.iter().cloned());
        }
        Self::new(elements, labels)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Size of the matrices.
    pub fn matrix_dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[RealMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Condition number of the Gram matrix of the flattened elements.
    pub fn gram_condition(&self) -> f64 {
        self.condition
    }

    /// `Σᵢ vᵢ Eᵢ`.
    pub fn combine(&self, coeffs: &VectorInBasis) -> RealMatrix {
        let mut out = RealMatrix::zeros(self.dim, self.dim);
        for (c, e) in coeffs.iter().zip(&self.elements) {
            if *c != 0.0 {
                out += e * *c;
            }
        }
        out
    }

    /// Least-squares coefficients of `x` without a span check, together
    /// with the max-entry reconstruction residual.
    pub fn project(&self, x: &RealMatrix) -> Result<(VectorInBasis, f64)> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.nrows(),
            });
        }
        let flat = DVector::from_column_slice(x.as_slice());
        let v = &self.solver * &flat;
        let residual = (self.combine(&v) - x).amax();
        Ok((v, residual))
    }
}

/// Coordinates of `x` relative to `basis`, checked against [`DEFAULT_TOL`].
pub fn coordinates(x: &RealMatrix, basis: &OrderedBasis) -> Result<VectorInBasis> {
    coordinates_with_tol(x, basis, DEFAULT_TOL)
}

pub fn coordinates_with_tol(
    x: &RealMatrix,
    basis: &OrderedBasis,
    tol: f64,
) -> Result<VectorInBasis> {
    let (v, residual) = basis.project(x)?;
    if residual > tol * x.amax().max(1.0) {
        return Err(Error::NotInSpan { residual });
    }
    Ok(v)
}

/// `[Eᵢ, Eⱼ] = Σₖ c[i][j][k] Eₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; n * n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// Sets `c[i][j][k]` only; callers that corrupt a table on purpose use
    /// this to break antisymmetry.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.c[(i * self.n + j) * self.n + k] = value;
    }
}

/// Structure constants of a bracket-closed basis.
pub fn structure_constants(basis: &OrderedBasis) -> Result<StructureConstants> {
    structure_constants_with_tol(basis, DEFAULT_TOL)
}

pub fn structure_constants_with_tol(
    basis: &OrderedBasis,
    tol: f64,
) -> Result<StructureConstants> {
    let n = basis.len();
    let mut sc = StructureConstants::zeros(n);
    let els = basis.elements();
    for i in 0..n {
        for j in (i + 1)..n {
            let b = bracket(&els[i], &els[j])?;
            let (v, residual) = basis.project(&b)?;
            if residual > tol * b.amax().max(1.0) {
                return Err(Error::NotSubalgebra { residual });
            }
            for k in 0..n {
                sc.set(i, j, k, v[k]);
                sc.set(j, i, k, -v[k]);
            }
        }
    }
    Ok(sc)
}

/// Max over `(i,j,k,l)` of the cyclic Jacobi sum in structure-constant form.
pub fn jacobi_residual(c: &StructureConstants) -> f64 {
    let n = c.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += c.get(i, j, m) * c.get(m, k, l)
                            + c.get(j, k, m) * c.get(m, i, l)
                            + c.get(k, i, m) * c.get(m, j, l);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(x: &RealMatrix) -> RealMatrix {
    let n = x.nrows();
    let norm = x.abs().row_sum().max();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = x * scale;
    let mut term = RealMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=18 {
        term = &term * &a / k as f64;
        sum += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so3_cross_basis() -> OrderedBasis {
        // E₁ = e₂∧e₃, E₂ = e₃∧e₁, E₃ = e₁∧e₂ (zero-based indices)
        OrderedBasis::new(
            vec![wedge(3, 1, 2), wedge(3, 2, 0), wedge(3, 0, 1)],
            vec!["E1".into(), "E2".into(), "E3".into()],
        )
        .unwrap()
    }

    #[test]
    fn bracket_of_self_vanishes() {
        let x = RealMatrix::from_row_slice(3, 3, &[1., 2., 3., 4., 5., 6., 7., 8., 10.]);
        assert_eq!(bracket(&x, &x).unwrap().amax(), 0.0);
    }

    #[test]
    fn bracket_rejects_mismatched_sizes() {
        let a = RealMatrix::zeros(3, 3);
        let b = RealMatrix::zeros(4, 4);
        assert!(matches!(
            bracket(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn so3_cross_product_relations() {
        let b = so3_cross_basis();
        let e = b.elements();
        assert_eq!(bracket(&e[0], &e[1]).unwrap(), e[2]);
        assert_eq!(bracket(&e[1], &e[2]).unwrap(), e[0]);
        assert_eq!(bracket(&e[2], &e[0]).unwrap(), e[1]);
    }

    #[test]
    fn so3_structure_constants() {
        let c = structure_constants(&so3_cross_basis()).unwrap();
        assert!((c.get(0, 1, 2) - 1.0).abs() < 1e-15);
        assert!((c.get(1, 0, 2) + 1.0).abs() < 1e-15);
        for i in 0..3 {
            for k in 0..3 {
                assert!(c.get(i, i, k).abs() < 1e-15);
            }
        }
        assert!(jacobi_residual(&c) < 1e-14);
    }

    #[test]
    fn so_basis_sizes_and_forms() {
        let b = so_basis(Signature::new(4, 0)).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.matrix_dim(), 4);

        let sig = Signature::new(2, 2);
        let s = sig.quadratic_form();
        assert_eq!(s, RealMatrix::from_diagonal(&DVector::from_vec(vec![-1., -1., 1., 1.])));
        let b = so_basis(sig).unwrap();
        assert_eq!(b.len(), 6);
        for x in b.elements() {
            assert_eq!(form_residual(x, &s), 0.0);
            assert!(x.iter().all(|v| [-1.0, 0.0, 1.0].contains(v)));
        }
    }

    #[test]
    fn so_basis_rejects_tiny_signature() {
        assert!(so_basis(Signature::new(1, 0)).is_err());
    }

    #[test]
    fn so31_symmetric_entries_match_brute_force() {
        // Brute force: elementary matrices E_ij ± E_ji in the algebra.
        let sig = Signature::new(3, 1);
        let s = sig.quadratic_form();
        let b = so_basis(sig).unwrap();
        for (idx, x) in b.elements().iter().enumerate() {
            let (i, j) = nth_pair(4, idx);
            let mut sym = RealMatrix::zeros(4, 4);
            sym[(i, j)] = 1.0;
            sym[(j, i)] = 1.0;
            let mut skew = RealMatrix::zeros(4, 4);
            skew[(i, j)] = -1.0;
            skew[(j, i)] = 1.0;
            let sym_ok = form_residual(&sym, &s) == 0.0;
            let skew_ok = form_residual(&skew, &s) == 0.0;
            assert!(sym_ok != skew_ok);
            assert_eq!(x, if sym_ok { &sym } else { &skew });
            assert_eq!(sym_ok, sig.sign(i) != sig.sign(j));
        }
    }

    fn nth_pair(dim: usize, mut idx: usize) -> (usize, usize) {
        for i in 0..dim {
            for j in (i + 1)..dim {
                if idx == 0 {
                    return (i, j);
                }
                idx -= 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn jacobi_holds_on_so_n_2() {
        for n in 1..=5 {
            let c = structure_constants(&so_basis(Signature::new(n, 2)).unwrap()).unwrap();
            assert!(jacobi_residual(&c) < 1e-12, "n = {n}");
        }
        let c = structure_constants(&so_basis(Signature::new(2, 2)).unwrap()).unwrap();
        assert!(jacobi_residual(&c) < 1e-12);
    }

    #[test]
    fn jacobi_detects_one_sided_corruption() {
        let mut c = structure_constants(&so3_cross_basis()).unwrap();
        c.set(0, 1, 2, -1.0);
        assert!(jacobi_residual(&c) > 0.5);
    }

    #[test]
    fn coordinates_of_basis_element_and_zero() {
        let b = so_basis(Signature::new(3, 1)).unwrap();
        let v = coordinates(&b.elements()[1], &b).unwrap();
        let mut unit = VectorInBasis::zeros(b.len());
        unit[1] = 1.0;
        assert!((v - unit).amax() < 1e-14);
        let z = coordinates(&RealMatrix::zeros(4, 4), &b).unwrap();
        assert_eq!(z.amax(), 0.0);
    }

    #[test]
    fn coordinates_rejects_outside_span() {
        let b = so_basis(Signature::new(3, 0)).unwrap();
        let id = RealMatrix::identity(3, 3);
        assert!(matches!(coordinates(&id, &b), Err(Error::NotInSpan { .. })));
    }

    #[test]
    fn non_closed_basis_is_not_a_subalgebra() {
        let b = OrderedBasis::new(
            vec![wedge(3, 0, 1), wedge(3, 1, 2)],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(matches!(
            structure_constants(&b),
            Err(Error::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let x = wedge(3, 0, 1);
        let r = OrderedBasis::new(vec![x.clone(), x * 2.0], vec!["a".into(), "b".into()]);
        assert!(matches!(r, Err(Error::DependentBasis { .. })));
    }

    #[test]
    fn expm_of_planar_rotation() {
        let t = 0.7_f64;
        let r = expm(&(wedge(2, 0, 1) * t));
        let expect = RealMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((r - expect).amax() < 1e-14);
    }

    #[test]
    fn expm_of_large_skew_is_orthogonal() {
        let mut w = RealMatrix::zeros(4, 4);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 3), (2, 3)].into_iter().enumerate() {
            w += wedge(4, i, j) * (3.0 + k as f64);
        }
        let r = expm(&w);
        assert!((r.transpose() * &r - RealMatrix::identity(4, 4)).amax() < 1e-12);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
    }
}
