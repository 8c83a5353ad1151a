//! Positive-definite integral lattices, the lattice vertex superalgebra `V_L`
//! inside the Heisenberg modules, its `g`-twisted modules for `g = e^{-2 pi i alpha(0)}`,
//! and the generalized vertex operators of Dong and Lepowsky.
//!
//! A lattice of rank `k` is embedded in `Q(i)^l` with the standard dot product.
//! The embedding comes from an `L D L^T` factorization of the gram matrix; a pivot
//! that is not a square in `Q(i)` takes two coordinates, using `d = x^2 + y^2`.

mod dlm;
mod twisted;

pub use dlm::{eta, Dlm, DlmVariant};
pub use twisted::{Mode, TwistData};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::fock::Label;
use crate::intertwiner::{CocycleSystem, Matrix};
use crate::scalars::{GaussRat, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralLattice {
    gram: Vec<Vec<i64>>,
    /// Rows are the basis vectors in `Q(i)^dim`.
    basis: Matrix,
    /// Right inverse of `basis`: `basis . coords = 1`.
    coords: Matrix,
}

fn rational_sqrt(d: &BigRational) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(d.numer())?, root(d.denom())?))
}

/// A square root of `d` in `Q(i)`, if one exists.
fn gauss_sqrt(d: &BigRational) -> Option<GaussRat> {
    if d.is_negative() {
        rational_sqrt(&-d).map(|r| GaussRat::new(BigRational::from_integer(0.into()), r))
    } else {
        rational_sqrt(d).map(GaussRat::real)
    }
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = GaussRat::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

impl IntegralLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let k = gram.len();
        if let Some(row) = gram.iter().find(|r| r.len() != k) {
            return Err(Error::RankMismatch { expected: k, got: row.len() });
        }
        for i in 0..k {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NonSymmetricGram);
                }
            }
        }
        let g = |i: usize, j: usize| BigRational::from_integer(gram[i][j].into());
        // gram = lower . diag(pivots) . lower^T
        let zero = BigRational::from_integer(0.into());
        let mut lower = vec![vec![zero.clone(); k]; k];
        let mut pivots = vec![zero.clone(); k];
        for j in 0..k {
            lower[j][j] = BigRational::from_integer(1.into());
            let mut d = g(j, j);
            for m in 0..j {
                d -= &lower[j][m] * &lower[j][m] * &pivots[m];
            }
            if !d.is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for i in j + 1..k {
                let mut v = g(i, j);
                for m in 0..j {
                    v -= &lower[i][m] * &lower[j][m] * &pivots[m];
                }
                lower[i][j] = v / &d;
            }
            pivots[j] = d;
        }
        // diag(pivots) = r . r^T, with r of shape k x dim
        let mut blocks: Vec<Vec<GaussRat>> = Vec::new();
        for d in &pivots {
            blocks.push(match gauss_sqrt(d) {
                Some(s) => vec![s],
                None => {
                    let dg = GaussRat::real(d.clone());
                    let x = &(&dg + &GaussRat::one()) * &GaussRat::from_ratio(1, 2);
                    let y = &(&dg - &GaussRat::one()) * &GaussRat::complex((0, 1), (-1, 2));
                    vec![x, y]
                }
            });
        }
        let dim: usize = blocks.iter().map(Vec::len).sum();
        let mut r = vec![vec![GaussRat::zero(); dim]; k];
        let mut col = 0;
        for (j, block) in blocks.iter().enumerate() {
            for (c, v) in block.iter().enumerate() {
                r[j][col + c] = v.clone();
            }
            col += block.len();
        }
        let lower_g: Matrix = lower.iter().map(|row| row.iter().cloned().map(GaussRat::real).collect()).collect();
        let basis = mat_mul(&lower_g, &r);
        // right inverse: r^T . diag(pivots)^{-1} . lower^{-1}
        let mut lower_inv = vec![vec![GaussRat::zero(); k]; k];
        for c in 0..k {
            for i in 0..k {
                let mut v = if i == c { GaussRat::one() } else { GaussRat::zero() };
                for m in 0..i {
                    if !lower_g[i][m].is_zero() {
                        v = &v - &(&lower_g[i][m] * &lower_inv[m][c]);
                    }
                }
                lower_inv[i][c] = v;
            }
        }
        let mut rt = transpose(&r);
        for row in &mut rt {
            for (j, v) in row.iter_mut().enumerate() {
                *v = v.checked_div(&GaussRat::real(pivots[j].clone()))?;
            }
        }
        let coords = mat_mul(&rt, &lower_inv);
        Ok(IntegralLattice { gram, basis, coords })
    }

    /// The rank `k` of the lattice.
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// The rank of the ambient Heisenberg algebra.
    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `n . gram . m`.
    pub fn pairing(&self, n: &[i64], m: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, a) in n.iter().enumerate() {
            for (j, b) in m.iter().enumerate() {
                acc += a * self.gram[i][j] * b;
            }
        }
        acc
    }

    /// The label of the lattice vector with integer coordinates `n`.
    pub fn vector(&self, n: &[i64]) -> Label {
        let mut out = vec![GaussRat::zero(); self.dim()];
        for (i, c) in n.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for (slot, b) in out.iter_mut().zip(&self.basis[i]) {
                *slot += &b.scale_int(*c);
            }
        }
        Label::new(out)
    }

    /// Integer coordinates of `mu`, or `NotInLattice`.
    pub fn coordinates(&self, mu: &Label) -> Result<Vec<i64>> {
        mu.check_rank(self.dim())?;
        let mut n = Vec::with_capacity(self.rank());
        for j in 0..self.rank() {
            let mut acc = GaussRat::zero();
            for (i, m) in mu.components().iter().enumerate() {
                if !m.is_zero() {
                    acc += &(m * &self.coords[i][j]);
                }
            }
            n.push(acc.as_integer().ok_or_else(|| Error::NotInLattice(mu.to_string()))?);
        }
        if self.vector(&n) != *mu {
            return Err(Error::NotInLattice(mu.to_string()));
        }
        Ok(n)
    }

    pub fn contains(&self, mu: &Label) -> bool {
        self.coordinates(mu).is_ok()
    }

    /// `mu . mu mod 2`.
    pub fn parity(&self, mu: &Label) -> Result<u8> {
        let n = self.coordinates(mu)?;
        Ok(self.pairing(&n, &n).rem_euclid(2) as u8)
    }

    /// `(-1)^{mu1^2 mu2^2}`.
    pub fn parity_sign(&self, mu1: &Label, mu2: &Label) -> Result<Scalar> {
        let odd = self.parity(mu1)? * self.parity(mu2)? == 1;
        Ok(Scalar::int(if odd { -1 } else { 1 }))
    }

    /// `(-1)^{mu1.mu2 + mu1^2 mu2^2}`.
    pub fn commutator(&self, mu1: &Label, mu2: &Label) -> Result<Scalar> {
        let (n, m) = (self.coordinates(mu1)?, self.coordinates(mu2)?);
        let e = self.pairing(&n, &m) + self.pairing(&n, &n) * self.pairing(&m, &m);
        Ok(Scalar::int(if e.rem_euclid(2) == 1 { -1 } else { 1 }))
    }
}

/// The standard cocycle: `eps(e_i, e_j) = 1` for `i <= j` and
/// `(-1)^{e_i.e_j + e_i^2 e_j^2}` for `i > j`, extended bilinearly to all labels.
pub fn lattice_cocycle(lattice: &IntegralLattice) -> CocycleSystem {
    let k = lattice.rank();
    let g = lattice.gram();
    let mut f = vec![vec![GaussRat::zero(); k]; k];
    for i in 0..k {
        for j in 0..i {
            f[i][j] = GaussRat::int((g[i][j] + g[i][i] * g[j][j]).rem_euclid(2));
        }
    }
    let pulled = mat_mul(&mat_mul(&lattice.coords, &f), &transpose(&lattice.coords));
    CocycleSystem::from_phase(pulled).expect("square by construction")
}

#[cfg(test)]
mod tests;
