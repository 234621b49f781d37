//! Polynomial exterior calculus on a coordinate box containing the origin:
//! scalar- and algebra-valued forms, vector fields, exterior derivative,
//! wedge pairings, interior products, Lie derivatives, affine pullbacks and
//! the homotopy (Poincare) antiderivative.
//!
//! A `Form` of value dimension 1 is scalar-valued; value dimension `d > 1`
//! means coefficients are sections of the trivial algebra bundle of fiber
//! dimension `d`. Operations that need the bracket or metric take the
//! algebra explicitly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::liealg::{AlgSection, QuadraticLieAlgebra};
use crate::matrix::Matrix;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{GaussianRational, Rational};
use crate::{invalid, Error, Result};
use num_traits::One;

/// Strictly increasing tuple of coordinate indices (0-based).
pub type IndexTuple = Vec<u8>;

#[derive(Clone, PartialEq, Debug)]
pub struct VectorField {
    pub components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        VectorField { components }
    }

    pub fn zero(n: usize) -> Self {
        VectorField {
            components: vec![Polynomial::zero(); n],
        }
    }

    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.components[k] = Polynomial::one();
        v
    }

    /// Constant complex vector as a vector field.
    pub fn constant(coeffs: &[GaussianRational]) -> Self {
        VectorField {
            components: coeffs
                .iter()
                .map(|c| Polynomial::constant(c.clone()))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(|p| p.is_constant())
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        VectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        VectorField {
            components: self.components.iter().map(|p| -p).collect(),
        }
    }

    /// Directional derivative of a function.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, comp) in self.components.iter().enumerate() {
            if !comp.is_zero() {
                out = &out + &(comp * &f.derivative(k));
            }
        }
        out
    }

    pub fn apply_section(&self, s: &[Polynomial]) -> AlgSection {
        s.iter().map(|p| self.apply(p)).collect()
    }

    /// Lie bracket of vector fields.
    pub fn bracket(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut out = VectorField::zero(n);
        for k in 0..n {
            out.components[k] = &self.apply(&other.components[k]) - &other.apply(&self.components[k]);
        }
        out
    }

    pub fn conj(&self) -> Self {
        VectorField {
            components: self.components.iter().map(|p| p.conj()).collect(),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Form {
    n: usize,
    degree: usize,
    vdim: usize,
    coeffs: BTreeMap<IndexTuple, Vec<Polynomial>>,
}

impl core::fmt::Debug for Form {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Form(n={}, deg={}, vdim={}) {{", self.n, self.degree, self.vdim)?;
        for (idx, val) in &self.coeffs {
            write!(f, " dt{:?}: {:?};", idx, val)?;
        }
        write!(f, " }}")
    }
}

fn merge_sign(a: &[u8], b: &[u8]) -> Option<(IndexTuple, i32)> {
    // Merge two strictly increasing tuples; None if they intersect.
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a.
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

impl Form {
    pub fn zero(n: usize, degree: usize, vdim: usize) -> Self {
        Form {
            n,
            degree,
            vdim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar_zero(n: usize, degree: usize) -> Self {
        Self::zero(n, degree, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&IndexTuple, &Vec<Polynomial>)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, idx: &[u8]) -> Vec<Polynomial> {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| vec![Polynomial::zero(); self.vdim])
    }

    pub fn set_coeff(&mut self, idx: IndexTuple, value: Vec<Polynomial>) {
        assert_eq!(value.len(), self.vdim, "value dimension mismatch");
        assert_eq!(idx.len(), self.degree, "index arity mismatch");
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        debug_assert!(idx.iter().all(|&k| (k as usize) < self.n));
        if value.iter().all(|p| p.is_zero()) {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, value);
        }
    }

    pub fn add_to_coeff(&mut self, idx: IndexTuple, value: &[Polynomial]) {
        let mut cur = self.coeff(&idx);
        for (c, v) in cur.iter_mut().zip(value) {
            *c = &*c + v;
        }
        self.set_coeff(idx, cur);
    }

    /// Scalar 0-form from a polynomial.
    pub fn function(n: usize, f: Polynomial) -> Self {
        let mut out = Self::scalar_zero(n, 0);
        out.set_coeff(Vec::new(), vec![f]);
        out
    }

    /// Scalar 1-form `f dt_k`.
    pub fn monomial_1form(n: usize, k: usize, f: Polynomial) -> Self {
        let mut out = Self::scalar_zero(n, 1);
        out.set_coeff(vec![k as u8], vec![f]);
        out
    }

    /// Algebra-valued 0-form from a section.
    pub fn section(n: usize, s: AlgSection) -> Self {
        let vdim = s.len();
        let mut out = Self::zero(n, 0, vdim);
        out.set_coeff(Vec::new(), s);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.n, self.degree, self.vdim),
            (other.n, other.degree, other.vdim),
            "form shape mismatch"
        );
        let mut out = self.clone();
        for (idx, val) in &other.coeffs {
            out.add_to_coeff(idx.clone(), val);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree, self.vdim);
        for (idx, val) in &self.coeffs {
            out.set_coeff(idx.clone(), val.iter().map(|p| -p).collect());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.n, self.degree, self.vdim);
        for (idx, val) in &self.coeffs {
            out.set_coeff(idx.clone(), val.iter().map(|p| p.scale(c)).collect());
        }
        out
    }

    pub fn scale_poly(&self, f: &Polynomial) -> Self {
        let mut out = Self::zero(self.n, self.degree, self.vdim);
        for (idx, val) in &self.coeffs {
            out.set_coeff(idx.clone(), val.iter().map(|p| p * f).collect());
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree, self.vdim);
        for (idx, val) in &self.coeffs {
            out.set_coeff(idx.clone(), val.iter().map(|p| p.conj()).collect());
        }
        out
    }

    /// Exterior derivative (componentwise on the value space).
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree + 1, self.vdim);
        for (idx, val) in &self.coeffs {
            for k in 0..self.n {
                let dval: Vec<Polynomial> = val.iter().map(|p| p.derivative(k)).collect();
                if dval.iter().all(|p| p.is_zero()) {
                    continue;
                }
                if let Some((merged, sign)) = merge_sign(&[k as u8], idx) {
                    let signed: Vec<Polynomial> = if sign > 0 {
                        dval
                    } else {
                        dval.iter().map(|p| -p).collect()
                    };
                    out.add_to_coeff(merged, &signed);
                }
            }
        }
        out
    }

    /// Wedge with values combined by `combine` into `out_vdim` components.
    pub fn wedge_with(
        &self,
        other: &Self,
        out_vdim: usize,
        combine: impl Fn(&[Polynomial], &[Polynomial]) -> Vec<Polynomial>,
    ) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Form::zero(self.n, self.degree + other.degree, out_vdim);
        for (ia, va) in &self.coeffs {
            for (ib, vb) in &other.coeffs {
                if let Some((merged, sign)) = merge_sign(ia, ib) {
                    let mut val = combine(va, vb);
                    if sign < 0 {
                        val = val.iter().map(|p| -p).collect();
                    }
                    out.add_to_coeff(merged, &val);
                }
            }
        }
        out
    }

    /// Scalar wedge product.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.vdim, 1);
        assert_eq!(other.vdim, 1);
        self.wedge_with(other, 1, |a, b| vec![&a[0] * &b[0]])
    }

    /// `<self ∧ other>` for algebra-valued forms, contracting values with
    /// the metric of `g`.
    pub fn wedge_pairing(&self, other: &Self, g: &QuadraticLieAlgebra) -> Self {
        assert_eq!(self.vdim, g.dim());
        assert_eq!(other.vdim, g.dim());
        self.wedge_with(other, 1, |a, b| vec![g.pairing_poly(a, b)])
    }

    /// `[self ∧ other]` for algebra-valued forms, combining values with the
    /// bracket of `g`.
    pub fn wedge_bracket(&self, other: &Self, g: &QuadraticLieAlgebra) -> Self {
        assert_eq!(self.vdim, g.dim());
        assert_eq!(other.vdim, g.dim());
        self.wedge_with(other, g.dim(), |a, b| g.bracket_poly(a, b))
    }

    /// Interior product with a (possibly complex, possibly non-constant)
    /// vector field.
    pub fn i_vf(&self, x: &VectorField) -> Self {
        assert_eq!(x.dim(), self.n);
        assert!(self.degree >= 1, "interior product needs degree >= 1");
        let mut out = Form::zero(self.n, self.degree - 1, self.vdim);
        for (idx, val) in &self.coeffs {
            for (pos, &k) in idx.iter().enumerate() {
                let xk = &x.components[k as usize];
                if xk.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let mut contrib: Vec<Polynomial> = val.iter().map(|p| p * xk).collect();
                if pos % 2 == 1 {
                    contrib = contrib.iter().map(|p| -p).collect();
                }
                out.add_to_coeff(rest, &contrib);
            }
        }
        out
    }

    /// Evaluation on `degree` vector fields.
    pub fn eval_on(&self, fields: &[&VectorField]) -> Vec<Polynomial> {
        assert_eq!(fields.len(), self.degree);
        let mut cur = self.clone();
        // Contract right-to-left so that eval(X1..Xk) = i_Xk ... wait:
        // omega(X1, ..., Xk) = (i_Xk ... i_X1 omega), contract X1 first.
        for x in fields {
            cur = cur.i_vf(x);
        }
        cur.coeff(&[])
    }

    /// Lie derivative via the Cartan formula `L_X = d i_X + i_X d`.
    pub fn lie_derivative(&self, x: &VectorField) -> Self {
        if self.degree == 0 {
            return self.d().i_vf(x);
        }
        self.i_vf(x).d().add(&self.d().i_vf(x))
    }

    /// Lie derivative by direct transport on coordinate frames:
    /// `(L_X w)(e_I) = X(w(e_I)) - sum_m w(..., [X, e_im], ...)`.
    pub fn lie_derivative_direct(&self, x: &VectorField) -> Self {
        let mut out = Form::zero(self.n, self.degree, self.vdim);
        let coords: Vec<VectorField> = (0..self.n).map(|k| VectorField::coordinate(self.n, k)).collect();
        let tuples = increasing_tuples(self.n, self.degree);
        for idx in tuples {
            let args: Vec<&VectorField> = idx.iter().map(|&k| &coords[k as usize]).collect();
            let base = self.eval_on(&args);
            let mut val: Vec<Polynomial> = base.iter().map(|p| x.apply(p)).collect();
            for (pos, &k) in idx.iter().enumerate() {
                let bracket = x.bracket(&coords[k as usize]);
                let mut args2: Vec<&VectorField> = args.clone();
                args2[pos] = &bracket;
                let term = self.eval_on(&args2);
                for (v, t) in val.iter_mut().zip(&term) {
                    *v = &*v - t;
                }
            }
            out.set_coeff(idx, val);
        }
        out
    }

    /// Pullback along the affine map `t -> mat * t + shift` (source
    /// coordinates are the new ones).
    pub fn pullback_affine(
        &self,
        mat: &Matrix<GaussianRational>,
        shift: &[GaussianRational],
    ) -> Result<Self> {
        let n_old = self.n;
        let n_new = mat.cols();
        if mat.rows() != n_old || shift.len() != n_old {
            return Err(invalid("pullback shape mismatch"));
        }
        // Substitution polynomials: old coordinate i = sum_j mat[i][j] t_j + shift[i].
        let subs: Vec<Polynomial> = (0..n_old)
            .map(|i| {
                let mut p = Polynomial::constant(shift[i].clone());
                for j in 0..n_new {
                    if !mat.at(i, j).is_zero() {
                        p = &p + &Polynomial::var(j).scale(mat.at(i, j));
                    }
                }
                p
            })
            .collect();
        let mut out = Form::zero(n_new, self.degree, self.vdim);
        let new_tuples = increasing_tuples(n_new, self.degree);
        for (idx, val) in &self.coeffs {
            let composed: Vec<Polynomial> = val
                .iter()
                .map(|p| p.substitute(&subs))
                .collect::<Result<Vec<_>>>()?;
            for new_idx in &new_tuples {
                // Minor of mat: rows idx (old), cols new_idx (new).
                let k = idx.len();
                let mut minor = Matrix::zero(k, k);
                for (r, &oi) in idx.iter().enumerate() {
                    for (c, &nj) in new_idx.iter().enumerate() {
                        minor.set(r, c, mat.at(oi as usize, nj as usize).clone());
                    }
                }
                let det = minor.det();
                if det.is_zero() {
                    continue;
                }
                let contrib: Vec<Polynomial> = composed.iter().map(|p| p.scale(&det)).collect();
                out.add_to_coeff(new_idx.clone(), &contrib);
            }
        }
        Ok(out)
    }

    /// Homotopy antiderivative on a star-shaped box around the origin:
    /// `d(result) = self` for closed forms of degree >= 1. Fails with the
    /// offending component if `self` is not closed.
    pub fn poincare_antiderivative(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(invalid("antiderivative needs degree >= 1"));
        }
        let dd = self.d();
        if !dd.is_zero() {
            let (idx, _) = dd.coeffs.iter().next().unwrap();
            return Err(Error::NotClosed(format!("component dt{idx:?}")));
        }
        let k = self.degree;
        let mut out = Form::zero(self.n, k - 1, self.vdim);
        for (idx, val) in &self.coeffs {
            for (vslot, poly) in val.iter().enumerate() {
                for (mono, coeff) in poly.terms() {
                    let m = mono.degree();
                    let weight = GaussianRational::real(
                        Rational::one()
                            / Rational::from_integer(num_bigint::BigInt::from((m + k) as u64)),
                    );
                    for (pos, &j) in idx.iter().enumerate() {
                        // (-1)^pos * coeff/(m+k) * t^mono * t_j  d t_{I \ j}
                        let mut rest = idx.clone();
                        rest.remove(pos);
                        let mut c = coeff * &weight;
                        if pos % 2 == 1 {
                            c = -c;
                        }
                        let tj = Monomial::var(j as usize);
                        let new_mono = mono.mul(&tj);
                        let mut term_poly = Polynomial::zero();
                        term_poly.add_term(new_mono, c);
                        let mut contrib = vec![Polynomial::zero(); self.vdim];
                        contrib[vslot] = term_poly;
                        out.add_to_coeff(rest, &contrib);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// All strictly increasing index tuples of the given arity.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<IndexTuple> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut IndexTuple, out: &mut Vec<IndexTuple>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j as u8);
            rec(n, k, j + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// `d^A w = dw + [A ∧ w]` for the connection `d + ad_A`.
pub fn covariant_d(g: &QuadraticLieAlgebra, a: &Form, w: &Form) -> Form {
    assert_eq!(a.degree(), 1);
    assert_eq!(a.vdim(), g.dim());
    assert_eq!(w.vdim(), g.dim());
    w.d().add(&a.wedge_bracket(w, g))
}

/// Curvature 2-form `F = dA + (1/2)[A ∧ A]`; the curvature operator is
/// `R(X,Y) r = [F(X,Y), r]`.
pub fn curvature(g: &QuadraticLieAlgebra, a: &Form) -> Form {
    assert_eq!(a.degree(), 1);
    let half = GaussianRational::from_ratio(1, 2);
    a.d().add(&a.wedge_bracket(a, g).scale(&half))
}

/// `∇_X s = X(s) + [A(X), s]` on sections of the trivial algebra bundle.
pub fn covariant_derivative_section(
    g: &QuadraticLieAlgebra,
    a: &Form,
    x: &VectorField,
    s: &[Polynomial],
) -> AlgSection {
    let ax = a.i_vf(x).coeff(&[]);
    let mut out = x.apply_section(s);
    let br = g.bracket_poly(&ax, s);
    for (o, b) in out.iter_mut().zip(&br) {
        *o = &*o + b;
    }
    out
}
