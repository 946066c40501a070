//! Coefficient tables for trilinear maps `V × V × V → V`.
//!
//! Curvature tensors, Lie triple brackets and Jordan triple products all live
//! here: `T(Eᵢ, Eⱼ)Eₖ = Σₗ coeff[i][j][k][l] Eₗ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrilinearMap {
    dim: usize,
    coeff: Vec<f64>,
}

impl TrilinearMap {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            coeff: vec![0.0; dim.pow(4)],
        }
    }

    /// Builds the map from its values on basis triples.
    pub fn from_fn<F>(dim: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize, usize) -> DVector<f64>,
    {
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let v = f(i, j, k);
                    debug_assert_eq!(v.len(), dim);
                    let base = t.offset(i, j, k);
                    t.coeff[base..base + dim].copy_from_slice(v.as_slice());
                }
            }
        }
        t
    }

    /// Builds the map from a rule on arbitrary vectors, evaluated on the
    /// standard basis.
    pub fn from_rule<F>(dim: usize, mut f: F) -> Self
    where
        F: FnMut(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> DVector<f64>,
    {
        let e: Vec<DVector<f64>> = (0..dim)
            .map(|i| DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        Self::from_fn(dim, |i, j, k| f(&e[i], &e[j], &e[k]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.coeff[self.offset(i, j, k) + l]
    }

    /// `T(Eᵢ, Eⱼ)Eₖ`.
    pub fn value(&self, i: usize, j: usize, k: usize) -> DVector<f64> {
        let base = self.offset(i, j, k);
        DVector::from_column_slice(&self.coeff[base..base + self.dim])
    }

    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..d {
                    let w = xy * z[k];
                    if w == 0.0 {
                        continue;
                    }
                    let base = self.offset(i, j, k);
                    for l in 0..d {
                        out[l] += w * self.coeff[base + l];
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            coeff: self.coeff.iter().map(|v| v * c).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            coeff: self.coeff.iter().zip(&other.coeff).map(|(a, b)| a + b).collect(),
        }
    }

    /// `T(.., M·, ..)` with `M` acting in argument `slot` (0, 1 or 2).
    pub fn precompose_slot(&self, slot: usize, m: &DMatrix<f64>) -> Self {
        assert!(slot < 3);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let dst = out.offset(i, j, k);
                    let own = [i, j, k][slot];
                    for a in 0..d {
                        let c = m[(a, own)];
                        if c == 0.0 {
                            continue;
                        }
                        let mut idx = [i, j, k];
                        idx[slot] = a;
                        let src = self.offset(idx[0], idx[1], idx[2]);
                        for l in 0..d {
                            out.coeff[dst + l] += c * self.coeff[src + l];
                        }
                    }
                }
            }
        }
        out
    }

    /// `(x,y,z) ↦ M T(x,y,z)`.
    pub fn postcompose(&self, m: &DMatrix<f64>) -> Self {
        Self::from_fn(self.dim, |i, j, k| m * self.value(i, j, k))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeff.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Componentwise max difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.coeff
            .iter()
            .zip(&other.coeff)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `g(T(Eᵢ,Eⱼ)Eₖ, Eₗ)` as a flat table in the same index order.
    pub fn lowered(&self, gram: &DMatrix<f64>) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d.pow(4)];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.value(i, j, k);
                    let gv = gram * v;
                    let base = self.offset(i, j, k);
                    out[base..base + d].copy_from_slice(gv.as_slice());
                }
            }
        }
        out
    }

    /// Restriction to the subspace spanned by the columns of `basis`,
    /// expressed in those columns. Fails if the subspace is not invariant.
    pub fn restrict(&self, basis: &DMatrix<f64>, tol: f64) -> Result<Self> {
        if basis.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: basis.nrows(),
            });
        }
        let r = basis.ncols();
        let gram = basis.transpose() * basis;
        let solver = gram
            .cholesky()
            .ok_or(Error::DependentBasis {
                condition: f64::INFINITY,
            })?
            .inverse()
            * basis.transpose();
        let cols: Vec<DVector<f64>> = (0..r).map(|a| basis.column(a).into_owned()).collect();
        let mut worst = 0.0_f64;
        let out = Self::from_fn(r, |a, b, c| {
            let v = self.apply(&cols[a], &cols[b], &cols[c]);
            let y = &solver * &v;
            worst = worst.max((basis * &y - &v).amax());
            y
        });
        if worst > tol {
            return Err(Error::NotInSpan { residual: worst });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_agrees_with_basis_values() {
        let t = TrilinearMap::from_fn(2, |i, j, k| {
            DVector::from_vec(vec![(i + 2 * j) as f64, (k as f64) - 1.0])
        });
        let x = DVector::from_vec(vec![1.0, 2.0]);
        let y = DVector::from_vec(vec![-1.0, 0.5]);
        let z = DVector::from_vec(vec![3.0, 1.0]);
        let mut expect = DVector::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    expect += t.value(i, j, k) * (x[i] * y[j] * z[k]);
                }
            }
        }
        assert!((t.apply(&x, &y, &z) - expect).amax() < 1e-14);
    }

    #[test]
    fn restrict_to_invariant_line() {
        // T(x,y)z = <x,y> z keeps every line invariant in the last slot
        let t = TrilinearMap::from_rule(3, |x, y, z| z * x.dot(y));
        let b = DMatrix::from_column_slice(3, 1, &[1.0, 1.0, 0.0]);
        let r = t.restrict(&b, 1e-12).unwrap();
        assert_eq!(r.dim(), 1);
        assert!((r.get(0, 0, 0, 0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn restrict_detects_non_invariant_subspace() {
        let t = TrilinearMap::from_rule(2, |x, _y, _z| DVector::from_vec(vec![0.0, x[0]]));
        let b = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        assert!(t.restrict(&b, 1e-12).is_err());
    }
}
