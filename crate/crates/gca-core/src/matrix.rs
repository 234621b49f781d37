//! Dense exact matrices over the Gaussian rationals or over polynomials.
//!
//! Rank is computed by fraction-free (Bareiss) elimination so it works over
//! the polynomial ring; kernels, solving and reduced echelon forms use plain
//! field elimination over the scalars. Membership of a vector in a column
//! span over polynomial entries is a fraction-field statement and is always
//! confirmed pointwise at deterministic sample points.


use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::poly::Polynomial;
use crate::scalar::{GaussianRational, Rational};
use crate::stream::SamplePoints;
use crate::{invalid, Error, Result};

/// Commutative ring with exact equality, as needed for elimination.
pub trait Ring: Clone + PartialEq + core::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// Ring with exact division, used by Bareiss elimination.
pub trait ExactDiv: Ring {
    fn exact_div(&self, d: &Self) -> Option<Self>;
}

pub trait FieldElem: Ring {
    fn inv(&self) -> Option<Self>;
    fn div(&self, d: &Self) -> Option<Self> {
        d.inv().map(|i| self.mul(&i))
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl ExactDiv for GaussianRational {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        GaussianRational::div(self, d).ok()
    }
}

impl FieldElem for GaussianRational {
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self).ok()
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

impl ExactDiv for Polynomial {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        Polynomial::exact_div(self, d)
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: core::fmt::Debug> core::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?}  ", self.data[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.at(r, c).clone());
            }
        }
        m
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.at(r, c).clone());
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut m = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(other.at(k, c)));
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn add_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale_mat(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<T: ExactDiv> Matrix<T> {
    /// Fraction-free Gaussian (Bareiss) elimination. Returns the echelon
    /// matrix, the pivot columns and the rank. The result is independent of
    /// pivot-row choice in the sense that rank and pivot columns are
    /// canonical (first usable column, first nonzero row).
    pub fn bareiss(&self) -> (Matrix<T>, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = T::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Find a pivot row.
            let mut pr = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let b = m.at(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a.neg());
                }
            }
            let pivot = m.at(r, c).clone();
            for i in (r + 1)..m.rows {
                for j in 0..m.cols {
                    if j == c {
                        continue;
                    }
                    let num = m.at(i, j).mul(&pivot).sub(&m.at(i, c).mul(m.at(r, j)));
                    let q = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact");
                    m.set(i, j, q);
                }
                m.set(i, c, T::zero());
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().2
    }

    /// Determinant by Bareiss; requires a square matrix.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return T::one();
        }
        let (ech, pivots, rank) = self.bareiss();
        if rank < self.rows {
            return T::zero();
        }
        // After full-rank Bareiss the last pivot is the determinant (row
        // swaps above negate the swapped row, keeping the sign intact).
        ech.at(self.rows - 1, *pivots.last().unwrap()).clone()
    }

    /// True iff `v` lies in the column span over the fraction field.
    pub fn colspan_contains(&self, v: &[T]) -> bool {
        let vm = Matrix::from_cols(&[v.to_vec()]);
        let aug = self.hstack(&vm);
        self.rank() == aug.rank()
    }

    /// True iff the two column spans coincide over the fraction field.
    pub fn same_colspan(&self, other: &Self) -> bool {
        let ra = self.rank();
        let rb = other.rank();
        ra == rb && self.hstack(other).rank() == ra
    }
}

impl<T: FieldElem> Matrix<T> {
    /// Reduced row echelon form with its pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pr = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let b = m.at(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = m.at(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m.set(r, j, m.at(r, j).mul(&inv));
            }
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in 0..m.cols {
                    let v = m.at(i, j).sub(&f.mul(m.at(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (rref, pivots) = self.rref();
        let mut out = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut vec_out = vec![T::zero(); self.cols];
            vec_out[free] = T::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                vec_out[pc] = rref.at(ri, free).neg();
            }
            out.push(vec_out);
        }
        out
    }

    /// A particular solution of `A x = b` (free variables set to zero).
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, b.len());
        let bm = Matrix::from_cols(&[b.to_vec()]);
        let aug = self.hstack(&bm);
        let (rref, pivots) = aug.rref();
        // Inconsistent iff a pivot lands in the augmented column.
        if pivots.iter().any(|&p| p == self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.at(ri, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&Matrix::identity(self.rows));
        let (rref, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().take(self.rows).enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let mut out = Matrix::zero(self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.rows {
                out.set(r, c, rref.at(r, self.rows + c).clone());
            }
        }
        Some(out)
    }

    /// Canonical basis of the column span: rows of the RREF of the transpose.
    pub fn colspace_basis(&self) -> Vec<Vec<T>> {
        let (rt, _) = self.transpose().rref();
        let mut out = Vec::new();
        for i in 0..rt.rows() {
            let row = rt.row(i);
            if row.iter().any(|x| !x.is_zero()) {
                out.push(row);
            }
        }
        out
    }
}

impl Matrix<Polynomial> {
    pub fn eval(&self, point: &[GaussianRational]) -> Result<Matrix<GaussianRational>> {
        let mut out = Matrix::zero(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).eval(point)?);
            }
        }
        Ok(out)
    }

    /// Right-kernel basis over the fraction field, with polynomial entries
    /// (denominators cleared via Cramer determinants on the pivot block).
    pub fn kernel_poly(&self) -> Vec<Vec<Polynomial>> {
        let (ech, pivots, rank) = self.bareiss();
        let mut out = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        // Pivot block B: rows 0..rank of the echelon form at pivot columns.
        let bmat = {
            let mut m = Matrix::zero(rank, rank);
            for r in 0..rank {
                for (j, &pc) in pivots.iter().enumerate() {
                    m.set(r, j, ech.at(r, pc).clone());
                }
            }
            m
        };
        let dets = bmat.det();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Polynomial::zero(); self.cols];
            v[free] = dets.clone();
            // Cramer: B y = -x_f * c where c is the free column.
            for j in 0..rank {
                let mut bj = bmat.clone();
                for r in 0..rank {
                    bj.set(r, j, ech.at(r, free).neg());
                }
                v[pivots[j]] = bj.det();
            }
            out.push(v);
        }
        out
    }
}

impl Matrix<GaussianRational> {
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    /// Solves `A x = b` where `A` is scalar and `b` has polynomial entries.
    /// Free variables are set to zero; `None` if inconsistent.
    pub fn solve_poly_rhs(&self, b: &[Polynomial]) -> Option<Vec<Polynomial>> {
        assert_eq!(self.rows, b.len());
        let mut m = self.clone();
        let mut rhs: Vec<Polynomial> = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pr = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let bv = m.at(pr, j).clone();
                    m.set(r, j, bv);
                    m.set(pr, j, a);
                }
                rhs.swap(r, pr);
            }
            let inv = m.at(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m.set(r, j, &inv * m.at(r, j));
            }
            rhs[r] = rhs[r].scale(&inv);
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in 0..m.cols {
                    let v = m.at(i, j) - &(&f * m.at(r, j));
                    m.set(i, j, v);
                }
                rhs[i] = &rhs[i] - &rhs[r].scale(&f);
            }
            pivots.push((r, c));
            r += 1;
        }
        // Consistency: zero rows must carry zero right-hand sides.
        for i in r..m.rows {
            if !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![Polynomial::zero(); self.cols];
        for (ri, c) in pivots {
            x[c] = rhs[ri].clone();
        }
        Some(x)
    }

    pub fn to_poly(&self) -> Matrix<Polynomial> {
        self.map(|x| Polynomial::constant(x.clone()))
    }

    /// Signature `(positive, negative, zero)` of a symmetric matrix with
    /// real rational entries, computed by exact congruence diagonalization.
    pub fn signature(&self) -> Result<(usize, usize, usize)> {
        use num_traits::{Signed, Zero};
        let n = self.rows;
        if n != self.cols {
            return Err(invalid("signature of a non-square matrix"));
        }
        for r in 0..n {
            for c in 0..n {
                if !self.at(r, c).is_real() || self.at(r, c) != self.at(c, r) {
                    return Err(invalid("signature needs a real symmetric matrix"));
                }
            }
        }
        let mut m: Vec<Rational> = self.data.iter().map(|x| x.re().clone()).collect();
        let get = |m: &Vec<Rational>, r: usize, c: usize| m[r * n + c].clone();
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let diag = active.iter().copied().find(|&i| !get(&m, i, i).is_zero());
            let pivot = match diag {
                Some(i) => i,
                None => {
                    // All active diagonal entries are zero: symmetrize with
                    // the basis change e_i += e_j to create one.
                    let mut found = None;
                    'outer: for &i in &active {
                        for &j in &active {
                            if i != j && !get(&m, i, j).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = found else {
                        zero += active.len();
                        break;
                    };
                    for k in 0..n {
                        let v = get(&m, i, k) + get(&m, j, k);
                        m[i * n + k] = v;
                    }
                    for k in 0..n {
                        let v = get(&m, k, i) + get(&m, k, j);
                        m[k * n + i] = v;
                    }
                    continue;
                }
            };
            let d = get(&m, pivot, pivot);
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let others: Vec<usize> = active.iter().copied().filter(|&i| i != pivot).collect();
            for &i in &others {
                let f = get(&m, i, pivot) / d.clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = get(&m, i, k) - f.clone() * get(&m, pivot, k);
                    m[i * n + k] = v;
                }
                for k in 0..n {
                    let v = get(&m, k, i) - f.clone() * get(&m, k, pivot);
                    m[k * n + i] = v;
                }
            }
            active = others;
        }
        Ok((pos, neg, zero))
    }
}

/// Outcome of a polynomial-entry membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Member,
    NotMember,
}

/// Membership of `v` in the column span of `m` over the fraction field,
/// confirmed pointwise at every sample point. A sample point where the
/// generic rank drops and the pointwise statement fails is reported as
/// `RankDropAtPoint`.
pub fn colspan_membership_poly(
    m: &Matrix<Polynomial>,
    v: &[Polynomial],
    samples: &SamplePoints,
) -> Result<Membership> {
    let generic_rank = m.rank();
    let aug = m.hstack(&Matrix::from_cols(&[v.to_vec()]));
    let generic_member = aug.rank() == generic_rank;
    for point in &samples.points {
        let mp = m.eval(point)?;
        let vp: Vec<GaussianRational> = v
            .iter()
            .map(|p| p.eval(point))
            .collect::<Result<Vec<_>>>()?;
        let point_rank = mp.rank();
        let point_member = mp.colspan_contains(&vp);
        if point_member != generic_member {
            if point_rank < generic_rank {
                return Err(Error::RankDropAtPoint {
                    point: point.clone(),
                    context: String::from("membership check disagrees with fraction-field result"),
                });
            }
            // Pointwise disagreement without rank drop is impossible for a
            // genuine member; treat as non-membership evidence.
            return Ok(Membership::NotMember);
        }
    }
    Ok(if generic_member {
        Membership::Member
    } else {
        Membership::NotMember
    })
}

/// Rank + kernel helpers on scalar matrices for subspace work.
pub mod subspace {
    use super::*;

    /// Intersection of two column spans (exact basis).
    pub fn intersect(
        a: &Matrix<GaussianRational>,
        b: &Matrix<GaussianRational>,
    ) -> Vec<Vec<GaussianRational>> {
        if a.cols() == 0 || b.cols() == 0 {
            return Vec::new();
        }
        assert_eq!(a.rows(), b.rows());
        let neg_b = b.map(|x| -x);
        let stacked = a.hstack(&neg_b);
        let ker = stacked.kernel();
        let mut vecs: Vec<Vec<GaussianRational>> = Vec::new();
        for k in ker {
            let coeffs = &k[..a.cols()];
            let v = a.mul_vec(coeffs);
            vecs.push(v);
        }
        basis_of(a.rows(), vecs)
    }

    /// Canonical (RREF) basis of the span of the given vectors.
    pub fn basis_of(dim: usize, vecs: Vec<Vec<GaussianRational>>) -> Vec<Vec<GaussianRational>> {
        if vecs.is_empty() {
            return Vec::new();
        }
        let m = Matrix::from_rows(vecs);
        assert_eq!(m.cols(), dim);
        let (r, _) = m.rref();
        let mut out = Vec::new();
        for i in 0..r.rows() {
            let row = r.row(i);
            if row.iter().any(|x| !x.is_zero()) {
                out.push(row);
            }
        }
        out
    }

    /// The real points of a conjugation-stable complex span, as a real basis.
    /// Input: columns spanning `S` with `conj(S) = S`. Output: a rational
    /// basis of the fixed real subspace, with `dim_R = dim_C S`.
    pub fn real_points(span_cols: &Matrix<GaussianRational>) -> Vec<Vec<GaussianRational>> {
        let dim = span_cols.rows();
        let mut cand: Vec<Vec<GaussianRational>> = Vec::new();
        for j in 0..span_cols.cols() {
            let v = span_cols.col(j);
            let re: Vec<GaussianRational> = v
                .iter()
                .map(|z| GaussianRational::real(z.re().clone()))
                .collect();
            let im: Vec<GaussianRational> = v
                .iter()
                .map(|z| GaussianRational::real(z.im().clone()))
                .collect();
            cand.push(re);
            cand.push(im);
        }
        basis_of(dim, cand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;
    use crate::stream::DetStream;

    fn gmat(rows: usize, cols: usize, vals: &[i64]) -> Matrix<GaussianRational> {
        Matrix::new(
            rows,
            cols,
            vals.iter().map(|&v| gr(v, 1)).collect(),
        )
    }

    /// Naive rank oracle by minor expansion: the rank is the largest k with a
    /// nonzero k x k minor.
    fn rank_by_minors<T: ExactDiv>(m: &Matrix<T>) -> usize {
        fn det_naive<T: Ring>(m: &Matrix<T>, rows: &[usize], cols: &[usize]) -> T {
            if rows.is_empty() {
                return T::one();
            }
            let mut acc = T::zero();
            for (i, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &cc)| cc)
                    .collect();
                let minor = det_naive(m, sub_rows, &sub_cols);
                let term = m.at(rows[0], c).mul(&minor);
                acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for rest in combos(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut v = vec![first];
                        v.extend(rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        let maxk = m.rows().min(m.cols());
        for k in (1..=maxk).rev() {
            for rows in combos(m.rows(), k) {
                for cols in combos(m.cols(), k) {
                    if !det_naive(m, &rows, &cols).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Matrix::<GaussianRational>::identity(4).rank(), 4);
    }

    #[test]
    fn rank_proportional_poly_columns() {
        // [[t1, t1^2], [1, t1]] has rank 1: second column = t1 * first.
        let t = Polynomial::var(0);
        let m = Matrix::from_rows(vec![
            vec![t.clone(), &t * &t],
            vec![Polynomial::one(), t.clone()],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_example() {
        // kernel([[1,0,1],[0,1,1]]) = span{(1,1,-1)} up to scale.
        // Oracle: brute-force over a small rational grid.
        let m = gmat(2, 3, &[1, 0, 1, 0, 1, 1]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        // Proportional to (1,1,-1):
        let probe = [gr(1, 1), gr(1, 1), gr(-1, 1)];
        let km = Matrix::from_cols(&[k.clone()]);
        assert!(km.colspan_contains(&probe.to_vec()));
        // Brute-force oracle: every grid vector annihilated by m lies in span{k}.
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for c in -2..=2i64 {
                    let v = vec![gr(a, 1), gr(b, 1), gr(c, 1)];
                    let mv = m.mul_vec(&v);
                    if mv.iter().all(|x| x.is_zero()) {
                        assert!(km.colspan_contains(&v) || v.iter().all(|x| x.is_zero()));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_nullity_random() {
        let mut s = DetStream::new(7);
        for _ in 0..40 {
            let m = Matrix::new(5, 5, (0..25).map(|_| s.gaussian(4, 2)).collect());
            assert_eq!(m.rank() + m.kernel().len(), 5);
        }
    }

    #[test]
    fn bareiss_agrees_with_minor_expansion() {
        // Entries from {0, ±1, ±i, t1}: exhaustive 2x2, seeded 3x3 and 4x4.
        let univ: Vec<Polynomial> = vec![
            Polynomial::zero(),
            Polynomial::one(),
            -Polynomial::one(),
            Polynomial::constant(GaussianRational::i()),
            Polynomial::constant(-GaussianRational::i()),
            Polynomial::var(0),
        ];
        for a in 0..6usize {
            for b in 0..6usize {
                for c in 0..6usize {
                    for d in 0..6usize {
                        let m = Matrix::from_rows(vec![
                            vec![univ[a].clone(), univ[b].clone()],
                            vec![univ[c].clone(), univ[d].clone()],
                        ]);
                        assert_eq!(m.rank(), rank_by_minors(&m));
                    }
                }
            }
        }
        let mut s = DetStream::new(11);
        for _ in 0..60 {
            let m3 = Matrix::new(3, 3, (0..9).map(|_| univ[s.index(6)].clone()).collect());
            assert_eq!(m3.rank(), rank_by_minors(&m3));
            let m4 = Matrix::new(4, 4, (0..16).map(|_| univ[s.index(6)].clone()).collect());
            assert_eq!(m4.rank(), rank_by_minors(&m4));
        }
    }

    #[test]
    fn poly_kernel_annihilates() {
        let t = Polynomial::var(0);
        let m = Matrix::from_rows(vec![
            vec![t.clone(), &t * &t, Polynomial::one()],
            vec![Polynomial::one(), t.clone(), Polynomial::zero()],
        ]);
        let ker = m.kernel_poly();
        assert_eq!(ker.len(), 1);
        for k in &ker {
            let prod = m.mul_vec(k);
            assert!(prod.iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn membership_with_sampling() {
        let t = Polynomial::var(0);
        let m = Matrix::from_cols(&[vec![Polynomial::one(), t.clone()]]);
        let v_in = vec![t.clone(), &t * &t];
        let v_out = vec![Polynomial::one(), Polynomial::one()];
        let samples = SamplePoints::default_for(1);
        assert_eq!(
            colspan_membership_poly(&m, &v_in, &samples).unwrap(),
            Membership::Member
        );
        assert_eq!(
            colspan_membership_poly(&m, &v_out, &samples).unwrap(),
            Membership::NotMember
        );
    }

    #[test]
    fn signature_diag() {
        let m = gmat(3, 3, &[1, 0, 0, 0, -2, 0, 0, 0, 0]);
        assert_eq!(m.signature().unwrap(), (1, 1, 1));
        // Hyperbolic plane: all-zero diagonal.
        let h = gmat(2, 2, &[0, 1, 1, 0]);
        assert_eq!(h.signature().unwrap(), (1, 1, 0));
    }

    #[test]
    fn solve_and_inverse() {
        let m = gmat(2, 2, &[1, 2, 3, 4]);
        let b = vec![gr(5, 1), gr(11, 1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Matrix::identity(2));
    }
}
