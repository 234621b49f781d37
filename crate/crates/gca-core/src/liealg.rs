//! Quadratic Lie algebras over the rationals: structure constants, invariant
//! metrics, validation certificates, the built-in compact-type examples
//! `su(n)` and their neutral doubles.
//!
//! Elements of the complexification are plain coefficient vectors over the
//! real basis; the conjugation `tau` conjugates coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;
use crate::{invalid, Result};

/// Element of the complexified algebra: coefficients over the real basis.
pub type AlgVec = Vec<GaussianRational>;
/// Section of the trivial algebra bundle: polynomial coefficients.
pub type AlgSection = Vec<Polynomial>;

#[derive(Clone, PartialEq, Debug)]
pub struct QuadraticLieAlgebra {
    name: String,
    dim: usize,
    basis_names: Vec<String>,
    /// `c[i][j]` holds the coordinates of `[e_i, e_j]`.
    c: Vec<Vec<AlgVec>>,
    metric: Matrix<GaussianRational>,
}

/// Verdicts of `validate`; a report, not an exception.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticCertificate {
    pub antisymmetric: bool,
    pub jacobi: bool,
    pub ad_invariant: bool,
    pub nondegenerate: bool,
    /// `(positive, negative)` inertia of the metric when nondegenerate.
    pub signature: Option<(usize, usize)>,
    pub perfect: bool,
    pub essential: bool,
}

impl QuadraticCertificate {
    pub fn all_structural(&self) -> bool {
        self.antisymmetric && self.jacobi && self.ad_invariant && self.nondegenerate
    }
}

impl QuadraticLieAlgebra {
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        c: Vec<Vec<AlgVec>>,
        metric: Matrix<GaussianRational>,
    ) -> Result<Self> {
        let dim = c.len();
        if basis_names.len() != dim || metric.rows() != dim || metric.cols() != dim {
            return Err(invalid("algebra data shape mismatch"));
        }
        for row in &c {
            if row.len() != dim || row.iter().any(|v| v.len() != dim) {
                return Err(invalid("structure constant shape mismatch"));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if c[i][j].iter().any(|x| !x.is_real()) {
                    return Err(invalid("structure constants of the real form must be real"));
                }
                if !metric.at(i, j).is_real() || metric.at(i, j) != metric.at(j, i) {
                    return Err(invalid("metric must be real symmetric"));
                }
            }
        }
        Ok(QuadraticLieAlgebra {
            name: name.into(),
            dim,
            basis_names,
            c,
            metric,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn metric(&self) -> &Matrix<GaussianRational> {
        &self.metric
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &AlgVec {
        &self.c[i][j]
    }

    pub fn zero_vec(&self) -> AlgVec {
        vec![GaussianRational::zero(); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> AlgVec {
        let mut v = self.zero_vec();
        v[i] = GaussianRational::one();
        v
    }

    pub fn bracket(&self, x: &[GaussianRational], y: &[GaussianRational]) -> AlgVec {
        let mut out = self.zero_vec();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out[k] = &out[k] + &(&f * &self.c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    pub fn bracket_poly(&self, x: &[Polynomial], y: &[Polynomial]) -> AlgSection {
        let mut out = vec![Polynomial::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out[k] = &out[k] + &f.scale(&self.c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    pub fn pairing(&self, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !y[j].is_zero() && !self.metric.at(i, j).is_zero() {
                    acc = &acc + &(&(&x[i] * &y[j]) * self.metric.at(i, j));
                }
            }
        }
        acc
    }

    pub fn pairing_poly(&self, x: &[Polynomial], y: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !y[j].is_zero() && !self.metric.at(i, j).is_zero() {
                    acc = &acc + &(&x[i] * &y[j]).scale(self.metric.at(i, j));
                }
            }
        }
        acc
    }

    /// Conjugation with respect to the real form.
    pub fn tau(&self, x: &[GaussianRational]) -> AlgVec {
        x.iter().map(|c| c.conj()).collect()
    }

    pub fn tau_poly(&self, x: &[Polynomial]) -> AlgSection {
        x.iter().map(|p| p.conj()).collect()
    }

    /// Matrix of `ad_x` on the real basis.
    pub fn ad(&self, x: &[GaussianRational]) -> Matrix<GaussianRational> {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &self.basis_vec(j));
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Killing form from the structure constants: `K(x, y) = tr(ad_x ad_y)`.
    pub fn killing(&self) -> Matrix<GaussianRational> {
        let ads: Vec<Matrix<GaussianRational>> =
            (0..self.dim).map(|i| self.ad(&self.basis_vec(i))).collect();
        let mut k = Matrix::zero(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let prod = ads[i].matmul(&ads[j]);
                let mut tr = GaussianRational::zero();
                for d in 0..self.dim {
                    tr = &tr + prod.at(d, d);
                }
                k.set(i, j, tr.clone());
                k.set(j, i, tr);
            }
        }
        k
    }

    /// Dimension of the space of skew-symmetric derivations.
    pub fn der_sk_dim(&self) -> usize {
        let n = self.dim;
        let unknowns = n * n; // D[a][b], column b = image of e_b
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        // Skewness: <D e_i, e_j> + <e_i, D e_j> = 0 for i <= j.
        for i in 0..n {
            for j in i..n {
                let mut row = vec![GaussianRational::zero(); unknowns];
                for a in 0..n {
                    row[a * n + i] = &row[a * n + i] + self.metric.at(a, j);
                    row[a * n + j] = &row[a * n + j] + self.metric.at(i, a);
                }
                rows.push(row);
            }
        }
        // Derivation: D[e_i,e_j] = [D e_i, e_j] + [e_i, D e_j] for i < j.
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let mut row = vec![GaussianRational::zero(); unknowns];
                    for m in 0..n {
                        if !self.c[i][j][m].is_zero() {
                            row[k * n + m] = &row[k * n + m] + &self.c[i][j][m];
                        }
                    }
                    for a in 0..n {
                        if !self.c[a][j][k].is_zero() {
                            row[a * n + i] = &row[a * n + i] - &self.c[a][j][k];
                        }
                        if !self.c[i][a][k].is_zero() {
                            row[a * n + j] = &row[a * n + j] - &self.c[i][a][k];
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let m = Matrix::from_rows(rows);
        unknowns - m.rank()
    }

    /// Dimension of the center.
    pub fn center_dim(&self) -> usize {
        let n = self.dim;
        let mut cols: Vec<AlgVec> = Vec::new();
        for i in 0..n {
            let ad = self.ad(&self.basis_vec(i));
            let mut flat = Vec::with_capacity(n * n);
            for r in 0..n {
                for c in 0..n {
                    flat.push(ad.at(r, c).clone());
                }
            }
            cols.push(flat);
        }
        let m = Matrix::from_cols(&cols);
        n - m.rank()
    }

    pub fn validate(&self) -> QuadraticCertificate {
        let n = self.dim;
        let mut antisymmetric = true;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        antisymmetric = false;
                    }
                }
            }
        }
        let mut jacobi = true;
        'jac: for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let ei = self.basis_vec(i);
                    let ej = self.basis_vec(j);
                    let ek = self.basis_vec(k);
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    for m in 0..n {
                        if !(&(&a[m] + &b[m]) + &c[m]).is_zero() {
                            jacobi = false;
                            break 'jac;
                        }
                    }
                }
            }
        }
        let mut ad_invariant = true;
        'inv: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ei = self.basis_vec(i);
                    let ej = self.basis_vec(j);
                    let ek = self.basis_vec(k);
                    let lhs = self.pairing(&self.bracket(&ei, &ej), &ek);
                    let rhs = self.pairing(&ej, &self.bracket(&ei, &ek));
                    if !(&lhs + &rhs).is_zero() {
                        ad_invariant = false;
                        break 'inv;
                    }
                }
            }
        }
        let nondegenerate = self.metric.rank() == n;
        let signature = if nondegenerate {
            self.metric.signature().ok().map(|(p, q, _)| (p, q))
        } else {
            None
        };
        // perfect: the brackets span the algebra.
        let mut cols = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                cols.push(self.c[i][j].clone());
            }
        }
        let perfect = if cols.is_empty() {
            n == 0
        } else {
            Matrix::from_cols(&cols).rank() == n
        };
        let essential = self.center_dim() == 0 && self.der_sk_dim() == n;
        QuadraticCertificate {
            antisymmetric,
            jacobi,
            ad_invariant,
            nondegenerate,
            signature,
            perfect,
            essential,
        }
    }

    /// Replaces the metric (e.g. to bundle a multiple of the Killing form).
    pub fn with_metric(mut self, metric: Matrix<GaussianRational>) -> Result<Self> {
        if metric.rows() != self.dim || metric.cols() != self.dim {
            return Err(invalid("metric shape mismatch"));
        }
        self.metric = metric;
        Ok(self)
    }
}

/// `su(n)`: basis `A_jk = E_jk - E_kj`, `B_jk = i(E_jk + E_kj)` for `j < k`,
/// then `D_m = i(E_mm - E_(m+1)(m+1))`. The bundled metric is the Killing
/// form `2n tr(xy)`.
pub fn build_su(n: usize) -> Result<QuadraticLieAlgebra> {
    if n < 2 {
        return Err(invalid("su(n) needs n >= 2"));
    }
    let dim = n * n - 1;
    let mut basis: Vec<Matrix<GaussianRational>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let mut a = Matrix::zero(n, n);
            a.set(j, k, GaussianRational::one());
            a.set(k, j, -GaussianRational::one());
            basis.push(a);
            names.push(format!("A{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut b = Matrix::zero(n, n);
            b.set(j, k, GaussianRational::i());
            b.set(k, j, GaussianRational::i());
            basis.push(b);
            names.push(format!("B{}{}", j + 1, k + 1));
        }
    }
    for m in 0..(n - 1) {
        let mut d = Matrix::zero(n, n);
        d.set(m, m, GaussianRational::i());
        d.set(m + 1, m + 1, -GaussianRational::i());
        basis.push(d);
        names.push(format!("D{}", m + 1));
    }
    debug_assert_eq!(basis.len(), dim);

    // Decompose an anti-Hermitian traceless matrix over the basis.
    let decompose = |m: &Matrix<GaussianRational>| -> AlgVec {
        let mut coeffs = vec![GaussianRational::zero(); dim];
        let mut idx = 0;
        for j in 0..n {
            for k in (j + 1)..n {
                coeffs[idx] = GaussianRational::real(m.at(j, k).re().clone());
                idx += 1;
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                coeffs[idx] = GaussianRational::real(m.at(j, k).im().clone());
                idx += 1;
            }
        }
        // Diagonal: M[m][m] = i (c_m - c_(m-1)).
        let mut prev = GaussianRational::zero();
        for mm in 0..(n - 1) {
            let cm = &prev + &GaussianRational::real(m.at(mm, mm).im().clone());
            coeffs[idx] = cm.clone();
            prev = cm;
            idx += 1;
        }
        coeffs
    };

    let mut c = vec![vec![vec![GaussianRational::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let comm = basis[i]
                .matmul(&basis[j])
                .sub_mat(&basis[j].matmul(&basis[i]));
            c[i][j] = decompose(&comm);
        }
    }
    // Killing form of su(n): K(x, y) = 2n tr(xy).
    let mut metric = Matrix::zero(dim, dim);
    let two_n = GaussianRational::from_int(2 * n as i64);
    for i in 0..dim {
        for j in i..dim {
            let prod = basis[i].matmul(&basis[j]);
            let mut tr = GaussianRational::zero();
            for d in 0..n {
                tr = &tr + prod.at(d, d);
            }
            let v = &tr * &two_n;
            metric.set(i, j, v.clone());
            metric.set(j, i, v);
        }
    }
    QuadraticLieAlgebra::new(format!("su{n}"), names, c, metric)
}

/// `g + g` with the neutral metric `(K, -K)`, `K` the Killing form of `g`.
pub fn neutral_double(g: &QuadraticLieAlgebra) -> Result<QuadraticLieAlgebra> {
    let k = g.killing();
    if k.rank() != g.dim() {
        return Err(invalid("neutral double needs a nondegenerate Killing form"));
    }
    let n = g.dim();
    let dim = 2 * n;
    let mut c = vec![vec![vec![GaussianRational::zero(); dim]; dim]; dim];
    for half in 0..2 {
        let off = half * n;
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    c[off + i][off + j][off + m] = g.structure_constant(i, j)[m].clone();
                }
            }
        }
    }
    let mut metric = Matrix::zero(dim, dim);
    for i in 0..n {
        for j in 0..n {
            metric.set(i, j, k.at(i, j).clone());
            metric.set(n + i, n + j, -k.at(i, j).clone());
        }
    }
    let names = g
        .basis_names()
        .iter()
        .map(|s| format!("{s}.1"))
        .chain(g.basis_names().iter().map(|s| format!("{s}.2")))
        .collect();
    QuadraticLieAlgebra::new(format!("{}x{}", g.name(), g.name()), names, c, metric)
}

/// Built-in algebras usable from instance files and the command line.
pub fn builtin(name: &str) -> Result<QuadraticLieAlgebra> {
    match name {
        "su2" => build_su(2),
        "su3" => build_su(3),
        "su4" => build_su(4),
        "su2x2" => neutral_double(&build_su(2)?),
        "su3x3" => neutral_double(&build_su(3)?),
        other => Err(invalid(format!("unknown builtin algebra '{other}'"))),
    }
}

/// The standard Cartan basis of a builtin: the diagonal generators, doubled
/// componentwise for the neutral doubles.
pub fn builtin_cartan(name: &str) -> Result<Vec<AlgVec>> {
    let su_cartan = |n: usize| -> Result<Vec<AlgVec>> {
        let g = build_su(n)?;
        let dim = g.dim();
        let offset = dim - (n - 1);
        Ok((0..(n - 1)).map(|m| g.basis_vec(offset + m)).collect())
    };
    match name {
        "su2" => su_cartan(2),
        "su3" => su_cartan(3),
        "su4" => su_cartan(4),
        "su2x2" | "su3x3" => {
            let n = if name == "su2x2" { 2 } else { 3 };
            let single = su_cartan(n)?;
            let g = builtin(name)?;
            let dim = g.dim();
            let half = dim / 2;
            let mut out = Vec::new();
            for v in &single {
                let mut w = vec![GaussianRational::zero(); dim];
                w[..half].clone_from_slice(v);
                out.push(w);
            }
            for v in &single {
                let mut w = vec![GaussianRational::zero(); dim];
                w[half..].clone_from_slice(v);
                out.push(w);
            }
            Ok(out)
        }
        other => Err(invalid(format!("no builtin cartan for '{other}'"))),
    }
}

pub fn vec_add(a: &[GaussianRational], b: &[GaussianRational]) -> AlgVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[GaussianRational], b: &[GaussianRational]) -> AlgVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[GaussianRational], c: &GaussianRational) -> AlgVec {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_is_zero(a: &[GaussianRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn vec_is_real(a: &[GaussianRational]) -> bool {
    a.iter().all(|x| x.is_real())
}

pub fn poly_vec_add(a: &[Polynomial], b: &[Polynomial]) -> AlgSection {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn poly_vec_sub(a: &[Polynomial], b: &[Polynomial]) -> AlgSection {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn poly_vec_scale(a: &[Polynomial], c: &Polynomial) -> AlgSection {
    a.iter().map(|x| x * c).collect()
}

pub fn poly_vec_is_zero(a: &[Polynomial]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn const_to_poly_vec(a: &[GaussianRational]) -> AlgSection {
    a.iter().map(|c| Polynomial::constant(c.clone())).collect()
}
