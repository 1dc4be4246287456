//! Dense square matrices over [`ExactScalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;
use crate::linalg::{rank, LinearForm};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ExactScalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(AlgebraError::NotSquare);
            }
            entries.extend(r);
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from Gaussian-integer pairs `(re, im)`.
    pub fn from_gaussian(rows: &[&[(i64, i64)]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| ExactScalar::gaussian(a, b)).collect())
            .collect();
        Self::from_rows(rows).expect("gaussian literal must be square")
    }

    pub fn from_flat(dim: usize, entries: Vec<ExactScalar>) -> Result<Self, AlgebraError> {
        if entries.len() != dim * dim {
            return Err(AlgebraError::RowWidth {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Pauli matrix σ₁, σ₂ or σ₃ (`k` in 1..=3).
    pub fn pauli(k: usize) -> Self {
        match k {
            1 => Self::from_gaussian(&[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]]),
            2 => Self::from_gaussian(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]]),
            3 => Self::from_gaussian(&[&[(1, 0), (0, 0)], &[(0, 0), (-1, 0)]]),
            _ => panic!("pauli index {k} out of range"),
        }
    }

    pub fn diag(values: &[ExactScalar]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    /// `[[a, b], [c, d]]` assembled from four equal-size blocks.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, AlgebraError> {
        let n = a.dim;
        for m in [b, c, d] {
            if m.dim != n {
                return Err(AlgebraError::DimensionMismatch {
                    left: n,
                    right: m.dim,
                });
            }
        }
        let mut out = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a.get(i, j).clone());
                out.set(i, j + n, b.get(i, j).clone());
                out.set(i + n, j, c.get(i, j).clone());
                out.set(i + n, j + n, d.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn block_diag(a: &Self, d: &Self) -> Result<Self, AlgebraError> {
        let z = Self::zeros(a.dim);
        Self::block(a, &z, &z, d)
    }

    pub fn block_antidiag(b: &Self, c: &Self) -> Result<Self, AlgebraError> {
        let z = Self::zeros(b.dim);
        Self::block(&z, b, c, &z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<ExactScalar>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn matmul(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.dim != o.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: o.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * n + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with `self` as the major (outer) index.
    pub fn kron(&self, o: &Self) -> Self {
        let (n, m) = (self.dim, o.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * m + k, j * m + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(ExactScalar::conj).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.zip(o, |a, b| a + b)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.zip(o, |a, b| a - b)
    }

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar,
    ) -> Result<Self, AlgebraError> {
        if self.dim != o.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: o.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// `ab + ba`
    pub fn anticommutator(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.matmul(o)?.try_add(&o.matmul(self)?)
    }

    /// `ab - ba`
    pub fn commutator(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.matmul(o)?.try_sub(&o.matmul(self)?)
    }

    pub fn trace(&self) -> ExactScalar {
        let mut t = ExactScalar::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_multiple_of_identity().is_some_and(|c| c.is_one())
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        *self == -&self.adjoint()
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn scalar_multiple_of_identity(&self) -> Option<ExactScalar> {
        let n = self.dim;
        if n == 0 {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if i == j {
                    if e != c {
                        return None;
                    }
                } else if !e.is_zero() {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, &ExactScalar)> {
        self.entries.iter().enumerate().find(|(_, e)| !e.is_zero())
    }

    /// Rescales so the first nonzero entry (row-major) is 1.
    pub fn normalized(&self) -> Self {
        match self.first_nonzero() {
            Some((_, lead)) => self.scale(&lead.inv().expect("nonzero lead")),
            None => self.clone(),
        }
    }

    /// Returns `λ` with `self == λ·other`, if one exists and both are nonzero.
    pub fn proportionality(&self, other: &Self) -> Option<ExactScalar> {
        if self.dim != other.dim {
            return None;
        }
        let (idx, b) = other.first_nonzero()?;
        let lambda = &self.entries[idx] / b;
        if lambda.is_zero() {
            return None;
        }
        (*self == other.scale(&lambda)).then_some(lambda)
    }

    pub fn projectively_equal(&self, other: &Self) -> bool {
        self.proportionality(other).is_some()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_real)
    }

    /// Exact determinant by elimination over the complex rationals.
    pub fn determinant(&self) -> ExactScalar {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return ExactScalar::zero();
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] * &inv;
                for j in col..n {
                    let t = &f * &a[col * n + j];
                    a[r * n + j] -= &t;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<LinearForm> = self
            .entries
            .chunks(self.dim)
            .map(LinearForm::from_dense)
            .collect();
        rank(&rows, self.dim)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// Matrix as a flat vector, row-major; the unknown ordering used by the solvers.
    pub fn vectorize(&self) -> &[ExactScalar] {
        &self.entries
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, o: &ExactMatrix) -> ExactMatrix {
        self.matmul(o).expect("matrix dimension mismatch")
    }
}

impl Mul<ExactMatrix> for ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, o: ExactMatrix) -> ExactMatrix {
        &self * &o
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, o: &ExactMatrix) -> ExactMatrix {
        self.try_add(o).expect("matrix dimension mismatch")
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, o: &ExactMatrix) -> ExactMatrix {
        self.try_sub(o).expect("matrix dimension mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.dim.max(1)).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<ExactScalar>>::deserialize(d)?;
        ExactMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}
