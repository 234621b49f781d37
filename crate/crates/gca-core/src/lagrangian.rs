//! Parabolic subalgebras, admissible systems and Lagrangian subalgebras of
//! the complexified neutral double `(g + g, (K, -K))`, with weak-regularity
//! predicates and the explicit spanning sets used by the regularity
//! argument.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dirac::{adapted_basis, AdaptedBasis};
use crate::liealg::{vec_is_zero, AlgVec, QuadraticLieAlgebra};
use crate::matrix::{subspace, Matrix};
use crate::roots::RootSystem;
use crate::scalar::GaussianRational;
use crate::{invalid, Result};

/// Parabolic subalgebra of `g^C` determined by a positive system and a
/// subset `S` of its simple roots.
#[derive(Clone, Debug)]
pub struct ParabolicData {
    pub rs: RootSystem,
    pub rplus: Vec<usize>,
    /// Simple roots of `rplus` (computed).
    pub simple: Vec<usize>,
    /// The chosen subset `S` as indices into `rs.roots`.
    pub s: Vec<usize>,
    /// `[S]`: all roots in the rational span of `S`.
    pub span_s: Vec<usize>,
    /// `R+ \ [S]`, the nilradical roots.
    pub nil: Vec<usize>,
    /// Basis of the center `xi = {x in h : alpha(x) = 0 for alpha in S}`.
    pub xi: Vec<AlgVec>,
}

fn simple_of(rs: &RootSystem, rplus: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &p in rplus {
        let mut is_simple = true;
        for &a in rplus {
            for &b in rplus {
                if rs.sum.get(&(a, b)) == Some(&p) {
                    is_simple = false;
                }
            }
        }
        if is_simple {
            out.push(p);
        }
    }
    out
}

pub fn build_parabolic(rs: &RootSystem, rplus: &[usize], s: &[usize]) -> Result<ParabolicData> {
    if !crate::roots::check_positive_system(rplus, rs) {
        return Err(invalid("rplus is not a positive root system"));
    }
    let simple = simple_of(rs, rplus);
    for idx in s {
        if !simple.contains(idx) {
            return Err(invalid("S must consist of simple roots of rplus"));
        }
    }
    // [S]: roots inside the span of S.
    let span_s: Vec<usize> = if s.is_empty() {
        Vec::new()
    } else {
        let cols: Vec<Vec<GaussianRational>> = s.iter().map(|&i| rs.roots[i].clone()).collect();
        let smat = Matrix::from_cols(&cols);
        (0..rs.num_roots())
            .filter(|&r| smat.colspan_contains(&rs.roots[r]))
            .collect()
    };
    let nil: Vec<usize> = rplus
        .iter()
        .copied()
        .filter(|r| !span_s.contains(r))
        .collect();
    // Center: kernel of the S root functionals on the Cartan.
    let rank = rs.rank();
    let xi = if s.is_empty() {
        (0..rank)
            .map(|i| rs.cartan[i].clone())
            .collect::<Vec<_>>()
    } else {
        let rows: Vec<Vec<GaussianRational>> = s.iter().map(|&i| rs.roots[i].clone()).collect();
        let m = Matrix::from_rows(rows);
        let ker = m.kernel();
        let cartan_mat = rs.cartan_span();
        ker.iter().map(|c| cartan_mat.mul_vec(c)).collect()
    };
    Ok(ParabolicData {
        rs: rs.clone(),
        rplus: rplus.to_vec(),
        simple,
        s: s.to_vec(),
        span_s,
        nil,
        xi,
    })
}

impl ParabolicData {
    /// `dim p = dim h + |R+| + |[S] ∩ R-|`.
    pub fn dim(&self) -> usize {
        let neg_in_s = self
            .span_s
            .iter()
            .filter(|&&r| !self.rplus.contains(&r))
            .count();
        self.rs.rank() + self.rplus.len() + neg_in_s
    }

    /// Basis of `h ∩ [m, m] = span{H_alpha : alpha in S}`.
    pub fn levi_cartan(&self) -> Vec<AlgVec> {
        self.s
            .iter()
            .map(|&i| self.rs.dual_vectors[i].clone())
            .collect()
    }

    /// Splits `x in p` into nilradical, semisimple-Levi and center parts.
    pub fn levi_center_split(&self, x: &[GaussianRational]) -> Result<(AlgVec, AlgVec, AlgVec)> {
        let g = &self.rs.algebra;
        let dim = g.dim();
        if x.len() != dim {
            return Err(invalid("element dimension mismatch"));
        }
        // Coordinates over [cartan | root vectors].
        let mut cols: Vec<AlgVec> = self.rs.cartan.clone();
        cols.extend(self.rs.root_vectors.iter().cloned());
        let b = Matrix::from_cols(&cols);
        let coords = b.solve(x).ok_or_else(|| invalid("decomposition failed"))?;
        let rank = self.rs.rank();
        // Membership in p: no coordinates on R- \ [S].
        for (ri, c) in coords.iter().skip(rank).enumerate() {
            if !c.is_zero() && !self.rplus.contains(&ri) && !self.span_s.contains(&ri) {
                return Err(invalid("element is not in the parabolic"));
            }
        }
        let mut x_nil = vec![GaussianRational::zero(); dim];
        let mut x_mm = vec![GaussianRational::zero(); dim];
        let mut x_xi = vec![GaussianRational::zero(); dim];
        for (ri, c) in coords.iter().skip(rank).enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = if self.nil.contains(&ri) {
                &mut x_nil
            } else {
                &mut x_mm
            };
            for (slot, e) in target.iter_mut().zip(&self.rs.root_vectors[ri]) {
                *slot = &*slot + &(c * e);
            }
        }
        // Cartan part: split over span{H_alpha : alpha in S} + xi.
        let mut h_part = vec![GaussianRational::zero(); dim];
        for (m, c) in coords.iter().take(rank).enumerate() {
            for (slot, e) in h_part.iter_mut().zip(&self.rs.cartan[m]) {
                *slot = &*slot + &(c * e);
            }
        }
        let levi_h = self.levi_cartan();
        if levi_h.is_empty() {
            for (slot, v) in x_xi.iter_mut().zip(&h_part) {
                *slot = v.clone();
            }
        } else if self.xi.is_empty() {
            for (slot, v) in x_mm.iter_mut().zip(&h_part) {
                *slot = &*slot + v;
            }
        } else {
            let mut hcols = levi_h.clone();
            hcols.extend(self.xi.iter().cloned());
            let hb = Matrix::from_cols(&hcols);
            let hc = hb
                .solve(&h_part)
                .ok_or_else(|| invalid("Cartan split failed"))?;
            for (ci, c) in hc.iter().enumerate() {
                let target = if ci < levi_h.len() {
                    &mut x_mm
                } else {
                    &mut x_xi
                };
                let basis_vec = if ci < levi_h.len() {
                    &hcols[ci]
                } else {
                    &hcols[ci]
                };
                for (slot, e) in target.iter_mut().zip(basis_vec) {
                    *slot = &*slot + &(c * e);
                }
            }
        }
        Ok((x_nil, x_mm, x_xi))
    }
}

/// Levi isomorphism data plus the Lagrangian center piece.
#[derive(Clone, Debug)]
pub struct AdmissibleSystem {
    pub double: QuadraticLieAlgebra,
    pub p: ParabolicData,
    pub p_prime: ParabolicData,
    /// Root map `d: [S] -> [T]` as index pairs.
    pub d_map: BTreeMap<usize, usize>,
    /// Phases per `[S]` root.
    pub mu: BTreeMap<usize, GaussianRational>,
    /// Basis of `V` inside `xi + xi'`, as ambient double vectors.
    pub v_basis: Vec<AlgVec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemCertificate {
    pub d_consistent: bool,
    pub unit_modulus: bool,
    pub conjugation: bool,
    pub cocycle: bool,
    pub mu_lie_compatible: bool,
    pub v_in_centers: bool,
    pub v_lagrangian: bool,
    pub witness: Option<String>,
}

impl SystemCertificate {
    pub fn admissible(&self) -> bool {
        self.d_consistent
            && self.unit_modulus
            && self.cocycle
            && self.mu_lie_compatible
            && self.v_in_centers
            && self.v_lagrangian
    }
}

/// Embeds a single-factor vector into the first/second slot of the double.
pub fn embed(dim: usize, half: usize, v: &[GaussianRational], second: bool) -> AlgVec {
    let mut out = vec![GaussianRational::zero(); dim];
    let off = if second { half } else { 0 };
    out[off..off + v.len()].clone_from_slice(v);
    out
}

impl AdmissibleSystem {
    pub fn new(
        double: QuadraticLieAlgebra,
        p: ParabolicData,
        p_prime: ParabolicData,
        d_pairs: &[(usize, usize)],
        mu: BTreeMap<usize, GaussianRational>,
        v_basis: Vec<AlgVec>,
    ) -> Result<Self> {
        if double.dim() != 2 * p.rs.algebra.dim() {
            return Err(invalid("double dimension mismatch"));
        }
        if p.s.len() != p_prime.s.len() {
            return Err(invalid("S and T must have the same cardinality"));
        }
        // Extend d from the S simples to all of [S] by linearity.
        let mut d_map = BTreeMap::new();
        let rs = &p.rs;
        for &(a, b) in d_pairs {
            if !p.s.contains(&a) || !p_prime.s.contains(&b) {
                return Err(invalid("d must map S simples to T simples"));
            }
            d_map.insert(a, b);
        }
        if d_map.len() != p.s.len() {
            return Err(invalid("d must be defined on all of S"));
        }
        // Linear extension: write alpha over the S simples, map coordinates.
        if !p.span_s.is_empty() {
            let s_cols: Vec<Vec<GaussianRational>> =
                p.s.iter().map(|&i| rs.roots[i].clone()).collect();
            let smat = Matrix::from_cols(&s_cols);
            for &alpha in &p.span_s {
                if d_map.contains_key(&alpha) {
                    continue;
                }
                let coords = smat
                    .solve(&rs.roots[alpha])
                    .ok_or_else(|| invalid("root outside span of S"))?;
                // Image weight = sum coords * weight(d(simple)).
                let mut img = vec![GaussianRational::zero(); rs.rank()];
                for (ci, c) in coords.iter().enumerate() {
                    let target = d_map[&p.s[ci]];
                    for (slot, w) in img.iter_mut().zip(&rs.roots[target]) {
                        *slot = &*slot + &(c * w);
                    }
                }
                let found = rs
                    .roots
                    .iter()
                    .position(|w| *w == img)
                    .ok_or_else(|| invalid("d image is not a root"))?;
                d_map.insert(alpha, found);
            }
        }
        Ok(AdmissibleSystem {
            double,
            p,
            p_prime,
            d_map,
            mu,
            v_basis,
        })
    }

    pub fn validate(&self) -> SystemCertificate {
        let rs = &self.p.rs;
        let mut cert = SystemCertificate {
            d_consistent: true,
            unit_modulus: true,
            conjugation: true,
            cocycle: true,
            mu_lie_compatible: true,
            v_in_centers: true,
            v_lagrangian: true,
            witness: None,
        };
        // d maps [S] bijectively onto [T] and commutes with negation.
        let mut seen = Vec::new();
        for &a in &self.p.span_s {
            match self.d_map.get(&a) {
                Some(&b) => {
                    if !self.p_prime.span_s.contains(&b) || seen.contains(&b) {
                        cert.d_consistent = false;
                    }
                    seen.push(b);
                    if self.d_map.get(&rs.neg[a]) != Some(&rs.neg[b]) {
                        cert.d_consistent = false;
                    }
                }
                None => cert.d_consistent = false,
            }
        }
        if seen.len() != self.p_prime.span_s.len() {
            cert.d_consistent = cert.d_consistent && self.p.span_s.is_empty();
        }
        for &a in &self.p.span_s {
            let Some(m) = self.mu.get(&a) else {
                cert.unit_modulus = false;
                cert.witness.get_or_insert(format!("missing phase for root {a}"));
                continue;
            };
            if !m.is_unit_modulus() {
                cert.unit_modulus = false;
                cert.witness.get_or_insert(format!("|mu| != 1 at root {a}"));
            }
            if let Some(mneg) = self.mu.get(&rs.neg[a]) {
                if *mneg != m.conj() {
                    cert.conjugation = false;
                }
            }
        }
        // Cocycle and Lie compatibility.
        if cert.d_consistent && cert.unit_modulus {
            for &a in &self.p.span_s {
                for &b in &self.p.span_s {
                    if b == rs.neg[a] {
                        // [E_a, E_-a] = <E_a, E_-a> H_a: need
                        // mu_a mu_-a <E_da, E_-da> = <E_a, E_-a>.
                        let lhs = &(&self.mu[&a] * &self.mu[&b])
                            * &rs.opposite_pairing(self.d_map[&a]);
                        if lhs != rs.opposite_pairing(a) {
                            cert.mu_lie_compatible = false;
                            cert.witness
                                .get_or_insert(format!("mu pair condition fails at root {a}"));
                        }
                        continue;
                    }
                    if let Some(&c) = rs.sum.get(&(a, b)) {
                        if !self.p.span_s.contains(&c) {
                            continue;
                        }
                        let n_ab = rs.nconst.get(&(a, b)).cloned().unwrap_or_default_zero();
                        let n_dd = rs
                            .nconst
                            .get(&(self.d_map[&a], self.d_map[&b]))
                            .cloned()
                            .unwrap_or_default_zero();
                        // mu_{a+b} N_{ab} = N_{d(a) d(b)} mu_a mu_b.
                        let lhs = &self.mu[&c] * &n_ab;
                        let rhs = &(&self.mu[&a] * &self.mu[&b]) * &n_dd;
                        if lhs != rhs {
                            cert.cocycle = false;
                            cert.witness
                                .get_or_insert(format!("cocycle fails at roots ({a}, {b})"));
                        }
                    }
                }
            }
        }
        // V inside xi + xi', Lagrangian for the double pairing.
        let dim = self.double.dim();
        let half = dim / 2;
        let mut center_cols: Vec<AlgVec> = Vec::new();
        for x in &self.p.xi {
            center_cols.push(embed(dim, half, x, false));
        }
        for x in &self.p_prime.xi {
            center_cols.push(embed(dim, half, x, true));
        }
        let expected_dim = (self.p.xi.len() + self.p_prime.xi.len()) / 2;
        if self.v_basis.len() != expected_dim {
            cert.v_lagrangian = false;
        }
        if !center_cols.is_empty() {
            let cm = Matrix::from_cols(&center_cols);
            for v in &self.v_basis {
                if !cm.colspan_contains(v) {
                    cert.v_in_centers = false;
                }
            }
        } else if !self.v_basis.is_empty() {
            cert.v_in_centers = false;
        }
        for a in &self.v_basis {
            for b in &self.v_basis {
                if !self.double.pairing(a, b).is_zero() {
                    cert.v_lagrangian = false;
                }
            }
        }
        if !self.v_basis.is_empty()
            && Matrix::from_cols(&self.v_basis).rank() != self.v_basis.len()
        {
            cert.v_lagrangian = false;
        }
        cert
    }
}

trait OrZero {
    fn unwrap_or_default_zero(self) -> GaussianRational;
}

impl OrZero for Option<GaussianRational> {
    fn unwrap_or_default_zero(self) -> GaussianRational {
        self.unwrap_or_else(GaussianRational::zero)
    }
}

/// Weak-regularity: compact Cartans (by construction here), `mu` maps the
/// Levi Cartan onto its image, and `mu` commutes with the conjugation,
/// i.e. `mu_{-alpha} = conj(mu_alpha)`.
pub fn is_weak_regular(sys: &AdmissibleSystem) -> bool {
    let cert = sys.validate();
    cert.d_consistent && cert.unit_modulus && cert.conjugation
}

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianCertificate {
    pub system: SystemCertificate,
    pub dimension: bool,
    pub isotropic: bool,
    pub subalgebra: bool,
    pub witness: Option<String>,
}

impl LagrangianCertificate {
    pub fn all(&self) -> bool {
        self.system.admissible() && self.dimension && self.isotropic && self.subalgebra
    }
}

/// Spanning set of `l(p, p', mu, V)` inside the double.
pub fn lagrangian_basis(sys: &AdmissibleSystem) -> Vec<AlgVec> {
    let rs = &sys.p.rs;
    let dim = sys.double.dim();
    let half = dim / 2;
    let mut out = sys.v_basis.clone();
    for &a in &sys.p.s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.dual_vectors[a], false);
        let w = embed(dim, half, &rs.dual_vectors[b], true);
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s + t;
        }
        out.push(v);
    }
    for &a in &sys.p.nil {
        out.push(embed(dim, half, &rs.root_vectors[a], false));
    }
    for &b in &sys.p_prime.nil {
        out.push(embed(dim, half, &rs.root_vectors[b], true));
    }
    for &a in &sys.p.span_s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.root_vectors[a], false);
        let w = embed(dim, half, &rs.root_vectors[b], true);
        let m = &sys.mu[&a];
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s + &(m * t);
        }
        out.push(v);
    }
    out
}

/// Builds the Lagrangian subalgebra and verifies dimension, isotropy and
/// bracket closure exactly.
pub fn build_lagrangian(sys: &AdmissibleSystem) -> (Vec<AlgVec>, LagrangianCertificate) {
    let system = sys.validate();
    let basis = lagrangian_basis(sys);
    let dim = sys.double.dim();
    let mut cert = LagrangianCertificate {
        system,
        dimension: true,
        isotropic: true,
        subalgebra: true,
        witness: None,
    };
    let expected = dim / 2;
    let bmat = if basis.is_empty() {
        Matrix::zero(dim, 0)
    } else {
        Matrix::from_cols(&basis)
    };
    if basis.len() != expected || bmat.rank() != expected {
        cert.dimension = false;
        cert.witness
            .get_or_insert(format!("dimension {} != {}", bmat.rank(), expected));
    }
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if !sys.double.pairing(a, b).is_zero() {
                cert.isotropic = false;
                cert.witness
                    .get_or_insert(format!("pairing of basis vectors ({i}, {j}) nonzero"));
            }
        }
    }
    'outer: for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let br = sys.double.bracket(a, b);
            if vec_is_zero(&br) {
                continue;
            }
            if !bmat.colspan_contains(&br) {
                cert.subalgebra = false;
                cert.witness
                    .get_or_insert(format!("bracket of ({i}, {j}) escapes the span"));
                break 'outer;
            }
        }
    }
    (basis, cert)
}

/// Output of `weak_regular_span`: the Lagrangian `D`, the isotropic
/// complement `C` and the explicit spanning set of `D ∩ conj(D)`.
#[derive(Clone, Debug)]
pub struct WeakRegularSpan {
    pub d: Vec<AlgVec>,
    pub c: Vec<AlgVec>,
    pub d_cap_conj: Vec<AlgVec>,
    /// Adapted basis of `(xi + xi', V)` used for the complement.
    pub v_adapted: AdaptedBasis,
}

/// The spanning sets of the weak-regular setting; requires the primed
/// positive system to be the negative of the unprimed one.
pub fn weak_regular_span(sys: &AdmissibleSystem) -> Result<WeakRegularSpan> {
    let rs = &sys.p.rs;
    if !is_weak_regular(sys) {
        return Err(invalid("system is not weak-regular"));
    }
    let neg_of_rplus: Vec<usize> = sys.p.rplus.iter().map(|&r| rs.neg[r]).collect();
    let mut sorted_a = neg_of_rplus.clone();
    sorted_a.sort();
    let mut sorted_b = sys.p_prime.rplus.clone();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Err(invalid(
            "the primed positive system must be the negative of the unprimed one",
        ));
    }
    let dim = sys.double.dim();
    let half = dim / 2;
    let d = lagrangian_basis(sys);

    // Adapted basis of (xi + xi') with respect to V, for the complement V'.
    let mut center_cols: Vec<AlgVec> = Vec::new();
    for x in &sys.p.xi {
        center_cols.push(embed(dim, half, x, false));
    }
    for x in &sys.p_prime.xi {
        center_cols.push(embed(dim, half, x, true));
    }
    let v_adapted = if center_cols.is_empty() {
        AdaptedBasis {
            v: Vec::new(),
            v_tilde: Vec::new(),
            w: Vec::new(),
            signs: Vec::new(),
        }
    } else {
        let cmat = Matrix::from_cols(&center_cols);
        let cdim = center_cols.len();
        let mut gram = Matrix::zero(cdim, cdim);
        for i in 0..cdim {
            for j in 0..cdim {
                gram.set(i, j, sys.double.pairing(&center_cols[i], &center_cols[j]));
            }
        }
        // V in center coordinates.
        let v_coords: Vec<Vec<GaussianRational>> = sys
            .v_basis
            .iter()
            .map(|v| cmat.solve(v).ok_or_else(|| invalid("V outside centers")))
            .collect::<Result<Vec<_>>>()?;
        let ab = adapted_basis(&gram, &v_coords)?;
        // Back to ambient coordinates.
        let lift = |vs: &Vec<Vec<GaussianRational>>| -> Vec<AlgVec> {
            vs.iter().map(|c| cmat.mul_vec(c)).collect()
        };
        AdaptedBasis {
            v: lift(&ab.v),
            v_tilde: lift(&ab.v_tilde),
            w: lift(&ab.w),
            signs: ab.signs.clone(),
        }
    };

    // C = V' + {(H_a, -H_da)} + {(E_a, 0): a in R- \ [S]}
    //       + {(0, E_b): b in R+ \ [T]} + {(E_a, -mu_a E_da): a in [S]}.
    let mut c = v_adapted.complement();
    for &a in &sys.p.s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.dual_vectors[a], false);
        let w = embed(dim, half, &rs.dual_vectors[b], true);
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s - t;
        }
        c.push(v);
    }
    for &a in &sys.p.nil {
        c.push(embed(dim, half, &rs.root_vectors[rs.neg[a]], false));
    }
    for &b in &sys.p_prime.nil {
        c.push(embed(dim, half, &rs.root_vectors[rs.neg[b]], true));
    }
    for &a in &sys.p.span_s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.root_vectors[a], false);
        let w = embed(dim, half, &rs.root_vectors[b], true);
        let m = &sys.mu[&a];
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s - &(m * t);
        }
        c.push(v);
    }

    // D ∩ conj(D) = V ∩ conj(V) + {(H_a, H_da): a in S}
    //             + {(E_a, mu_a E_da): a in [S]}.
    let mut d_cap_conj: Vec<AlgVec> = Vec::new();
    if !sys.v_basis.is_empty() {
        let vm = Matrix::from_cols(&sys.v_basis);
        for x in subspace::intersect(&vm, &vm.conj()) {
            d_cap_conj.push(x);
        }
    }
    for &a in &sys.p.s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.dual_vectors[a], false);
        let w = embed(dim, half, &rs.dual_vectors[b], true);
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s + t;
        }
        d_cap_conj.push(v);
    }
    for &a in &sys.p.span_s {
        let b = sys.d_map[&a];
        let mut v = embed(dim, half, &rs.root_vectors[a], false);
        let w = embed(dim, half, &rs.root_vectors[b], true);
        let m = &sys.mu[&a];
        for (s, t) in v.iter_mut().zip(&w) {
            *s = &*s + &(m * t);
        }
        d_cap_conj.push(v);
    }

    Ok(WeakRegularSpan {
        d,
        c,
        d_cap_conj,
        v_adapted,
    })
}

/// Standard catalogue of Lagrangian `V` subspaces of `xi + xi'` when both
/// centers coincide as subspaces of the Cartan: sign-flip graphs
/// `span{(x_i, ±x_i)}` over a fixed basis.
pub fn v_catalogue(
    double: &QuadraticLieAlgebra,
    xi: &[AlgVec],
    xi_prime: &[AlgVec],
) -> Vec<Vec<AlgVec>> {
    let dim = double.dim();
    let half = dim / 2;
    if xi.len() != xi_prime.len() {
        return Vec::new();
    }
    let m = xi.len();
    let mut out = Vec::new();
    for mask in 0..(1u32 << m) {
        let mut basis = Vec::new();
        for (i, x) in xi.iter().enumerate() {
            let sign = if mask & (1 << i) != 0 { -1i64 } else { 1 };
            let mut v = embed(dim, half, x, false);
            let w = embed(dim, half, &xi_prime[i], true);
            let s = GaussianRational::from_int(sign);
            for (a, b) in v.iter_mut().zip(&w) {
                *a = &*a + &(&s * b);
            }
            basis.push(v);
        }
        // Keep only genuinely Lagrangian members (isotropy can fail when
        // xi and xi' bases are not pairing-aligned).
        let mut ok = true;
        for a in &basis {
            for b in &basis {
                if !double.pairing(a, b).is_zero() {
                    ok = false;
                }
            }
        }
        if ok {
            out.push(basis);
        }
    }
    out
}
