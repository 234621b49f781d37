//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Variables are the base coordinates `t1, t2, ...`; a monomial stores its
//! exponent vector with trailing zeros trimmed, and terms are kept in graded
//! lexicographic order so serialization is deterministic.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{GaussianRational, Rational};
use crate::{invalid, Result};

/// Exponent vector, trailing zeros trimmed. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(mut exps: Vec<u16>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(k: usize) -> Self {
        let mut v = vec![0u16; k + 1];
        v[k] = 1;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, k: usize) -> u16 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0u16; n];
        for (k, item) in v.iter_mut().enumerate() {
            *item = self.exp(k) + other.exp(k);
        }
        Monomial::new(v)
    }

    /// Componentwise division; `None` if any exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut v = vec![0u16; self.0.len().max(other.0.len())];
        for (k, item) in v.iter_mut().enumerate() {
            let (a, b) = (self.exp(k), other.exp(k));
            if a < b {
                return None;
            }
            *item = a - b;
        }
        Some(Monomial::new(v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                let n = self.0.len().max(other.0.len());
                for k in 0..n {
                    match self.exp(k).cmp(&other.exp(k)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    /// The coordinate function `t(k+1)` (0-based index).
    pub fn var(k: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(k), GaussianRational::one());
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest variable index used, plus one.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.nvars()).max().unwrap_or(0)
    }

    /// Leading term in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.conj()))
                .collect(),
        }
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(k);
            if e == 0 {
                continue;
            }
            let mut exps: Vec<u16> = (0..m.nvars().max(k + 1)).map(|j| m.exp(j)).collect();
            exps[k] -= 1;
            out.add_term(
                Monomial::new(exps),
                c * &GaussianRational::from_int(e as i64),
            );
        }
        out
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if self.nvars() > point.len() {
            return Err(invalid("evaluation point has too few coordinates"));
        }
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (k, p) in point.iter().enumerate() {
                let e = m.exp(k);
                if e > 0 {
                    term = &term * &p.pow(e as u32);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitutes `subs[k]` for variable `k`.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if self.nvars() > subs.len() {
            return Err(invalid("substitution list has too few entries"));
        }
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for (k, sub) in subs.iter().enumerate() {
                let e = m.exp(k);
                for _ in 0..e {
                    term = &term * sub;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Exact division: `Some(q)` with `self = q * d`, `None` otherwise.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let (dm, dc) = d.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc.div(&dc).ok()?;
            let mut t = Polynomial::zero();
            t.add_term(qm, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Renders with variables named `t1, t2, ...`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push('(');
            out.push_str(&c.to_string());
            out.push(')');
            for k in 0..m.nvars() {
                let e = m.exp(k);
                if e == 1 {
                    out.push_str(&alloc::format!("*t{}", k + 1));
                } else if e > 1 {
                    out.push_str(&alloc::format!("*t{}^{}", k + 1, e));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<'a, 'b> Add<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'b Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, 'b> Sub<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'b Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, 'b> Mul<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'b Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<'a> Neg for &'a Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

macro_rules! poly_owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $trait::$method(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                $trait::$method(&self, rhs)
            }
        }
        impl<'a> $trait<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $trait::$method(self, &rhs)
            }
        }
    };
}

poly_owned_ops!(Add, add);
poly_owned_ops!(Sub, sub);
poly_owned_ops!(Mul, mul);

/// `c` as a degree-0 polynomial.
pub fn pconst(c: GaussianRational) -> Polynomial {
    Polynomial::constant(c)
}

pub fn prat(n: i64, d: i64) -> Polynomial {
    Polynomial::constant(GaussianRational::from_ratio(n, d))
}

/// `∫_0^1 s^m ds = 1/(m+1)` lives implicitly in the homotopy operator; this
/// helper exposes the exact rational weight used there.
pub fn homotopy_weight(total_degree: usize, form_degree: usize) -> Rational {
    crate::scalar::rat(1, (total_degree + form_degree) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;

    #[test]
    fn power_rule() {
        // d/dt1 (t1^2 t2) = 2 t1 t2
        let p = &(&Polynomial::var(0) * &Polynomial::var(0)) * &Polynomial::var(1);
        let d = p.derivative(0);
        let expected = (&Polynomial::var(0) * &Polynomial::var(1)).scale(&gr(2, 1));
        assert_eq!(d, expected);
    }

    #[test]
    fn eval_complex_point() {
        // (t1 + i t2)(1, 2) = 1 + 2i
        let p = &Polynomial::var(0) + &Polynomial::var(1).scale(&GaussianRational::i());
        let v = p.eval(&[gr(1, 1), gr(2, 1)]).unwrap();
        assert_eq!(v, GaussianRational::from_parts(1, 2));
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&Polynomial::var(0) + &Polynomial::one()) * &(&Polynomial::var(0) - &Polynomial::one());
        let expected = &(&Polynomial::var(0) * &Polynomial::var(0)) - &Polynomial::one();
        assert_eq!(p, expected);
    }

    #[test]
    fn exact_division() {
        let a = &Polynomial::var(0) + &Polynomial::var(1);
        let b = &Polynomial::var(0) - &Polynomial::var(1);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!(Polynomial::var(0).exact_div(&a).is_none());
    }

    #[test]
    fn derivative_then_integral_structure() {
        // Leibniz rule, exact.
        let p = &Polynomial::var(0) * &(&Polynomial::var(1) + &Polynomial::one());
        let q = &Polynomial::var(0) + &Polynomial::var(2);
        let lhs = (&p * &q).derivative(0);
        let rhs = &(&p.derivative(0) * &q) + &(&p * &q.derivative(0));
        assert_eq!(lhs, rhs);
    }
}
