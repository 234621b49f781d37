//! Bundle-level generalized almost complex structures over a coordinate box
//! in their `(W, sigma, D, eps)` presentation: the five integrability
//! conditions, a direct Dorfman-closure oracle, pointwise index-zero scans,
//! regularity with respect to a Cartan frame, lifts along isomorphisms and
//! pullbacks, and the normal-form builders.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::courant::{
    apply_isomorphism, dorfman, pullback_data, pullback_section, push_data, AffineMap,
    CourantData, IsoData, Section,
};
use crate::dirac::{
    build_l, check_index_zero, DiracQuadruple, IndexZeroReport,
};
use crate::extcalc::{covariant_derivative_section, Form, VectorField};
use crate::liealg::{poly_vec_is_zero, AlgSection, AlgVec};
use crate::matrix::{colspan_membership_poly, Matrix, Membership};
use crate::poly::Polynomial;
use crate::roots::RootSystem;
use crate::scalar::GaussianRational;
use crate::stream::SamplePoints;
use crate::{invalid, Error, Result};

/// A generalized almost complex structure in quadruple form over a box:
/// constant complex frame `W`, polynomial `sigma` and `eps` on that frame,
/// and a polynomial frame of the Lagrangian-to-be `D`.
#[derive(Clone, Debug)]
pub struct GCSField {
    pub courant: CourantData,
    pub w_frame: Vec<AlgVec>,
    pub sigma: Vec<AlgSection>,
    pub d_frame: Vec<AlgSection>,
    pub eps: Matrix<Polynomial>,
}

impl GCSField {
    pub fn new(
        courant: CourantData,
        w_frame: Vec<AlgVec>,
        sigma: Vec<AlgSection>,
        d_frame: Vec<AlgSection>,
        eps: Matrix<Polynomial>,
    ) -> Result<Self> {
        let f = GCSField {
            courant,
            w_frame,
            sigma,
            d_frame,
            eps,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.courant.n
    }

    pub fn k(&self) -> usize {
        self.w_frame.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.courant.n;
        let d = self.courant.algebra.dim();
        let k = self.w_frame.len();
        for v in &self.w_frame {
            if v.len() != n {
                return Err(invalid("W frame vector dimension mismatch"));
            }
        }
        if !self.w_frame.is_empty() && Matrix::from_cols(&self.w_frame).rank() != k {
            return Err(invalid("W frame is not independent"));
        }
        if self.sigma.len() != k || self.eps.rows() != k || self.eps.cols() != k {
            return Err(invalid("sigma/eps arity mismatch"));
        }
        for s in &self.sigma {
            if s.len() != d {
                return Err(invalid("sigma value dimension mismatch"));
            }
        }
        if d > 0 && self.d_frame.len() * 2 != d {
            return Err(invalid("D frame must have half the fiber dimension"));
        }
        for s in &self.d_frame {
            if s.len() != d {
                return Err(invalid("D frame dimension mismatch"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let sum = self.eps.at(i, j) + self.eps.at(j, i);
                if !sum.is_zero() {
                    return Err(invalid("eps is not antisymmetric"));
                }
            }
        }
        // D isotropic as a polynomial identity.
        for a in &self.d_frame {
            for b in &self.d_frame {
                if !self.courant.algebra.pairing_poly(a, b).is_zero() {
                    return Err(invalid("D frame is not isotropic"));
                }
            }
        }
        // Constant rank of D across the default sample grid.
        if !self.d_frame.is_empty() {
            let samples = SamplePoints::default_for(n);
            let dm = Matrix::from_cols(&self.d_frame.to_vec());
            let generic = dm.rank();
            if generic != self.d_frame.len() {
                return Err(invalid("D frame is generically dependent"));
            }
            for pt in &samples.points {
                if dm.eval(pt)?.rank() != generic {
                    return Err(Error::RankDropAtPoint {
                        point: pt.clone(),
                        context: String::from("D frame rank drops"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn d_matrix(&self) -> Matrix<Polynomial> {
        Matrix::from_cols(&self.d_frame.to_vec())
    }

    /// Evaluates the field at a point; fails if the D frame degenerates.
    pub fn eval_at(&self, point: &[GaussianRational]) -> Result<DiracQuadruple> {
        let d = self.courant.algebra.dim();
        let sigma: Vec<AlgVec> = self
            .sigma
            .iter()
            .map(|s| s.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let d_basis: Vec<AlgVec> = self
            .d_frame
            .iter()
            .map(|s| s.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if d > 0 {
            let rank = Matrix::from_cols(&d_basis).rank();
            if rank != self.d_frame.len() {
                return Err(Error::RankDropAtPoint {
                    point: point.to_vec(),
                    context: String::from("D frame rank drops at evaluation point"),
                });
            }
        }
        let k = self.k();
        let mut eps = Matrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                eps.set(i, j, self.eps.at(i, j).eval(point)?);
            }
        }
        DiracQuadruple::new(
            self.courant.algebra.clone(),
            self.courant.n,
            self.w_frame.clone(),
            sigma,
            d_basis,
            eps,
        )
    }

    pub fn conj(&self) -> Self {
        GCSField {
            courant: self.courant.clone(),
            w_frame: self.w_frame.iter().map(|v| v.iter().map(|x| x.conj()).collect()).collect(),
            sigma: self
                .sigma
                .iter()
                .map(|s| s.iter().map(|p| p.conj()).collect())
                .collect(),
            d_frame: self
                .d_frame
                .iter()
                .map(|s| s.iter().map(|p| p.conj()).collect())
                .collect(),
            eps: self.eps.map(|p| p.conj()),
        }
    }
}

/// Verdicts of the five integrability conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    pub cond_e: bool,
    /// Human-readable first witness per failed condition.
    pub witnesses: Vec<(char, String)>,
}

impl IntegrabilityReport {
    pub fn all(&self) -> bool {
        self.cond_a && self.cond_b && self.cond_c && self.cond_d && self.cond_e
    }
}

fn membership_in(
    frame: &Matrix<Polynomial>,
    v: &[Polynomial],
    samples: &SamplePoints,
) -> Result<bool> {
    if poly_vec_is_zero(v) {
        return Ok(true);
    }
    Ok(matches!(
        colspan_membership_poly(frame, v, samples)?,
        Membership::Member
    ))
}

/// `nabla_X sigma(Y)`-style covariant derivative for a constant frame vector.
fn nabla_on(f: &GCSField, x: &AlgVec, s: &[Polynomial]) -> AlgSection {
    let xf = VectorField::constant(x);
    covariant_derivative_section(&f.courant.algebra, &f.courant.a, &xf, s)
}

/// `(d^nabla sigma)(X_i, X_j)` on the constant frame (frame brackets vanish).
fn d_nabla_sigma(f: &GCSField, i: usize, j: usize) -> AlgSection {
    let a = nabla_on(f, &f.w_frame[i], &f.sigma[j]);
    let b = nabla_on(f, &f.w_frame[j], &f.sigma[i]);
    crate::liealg::poly_vec_sub(&a, &b)
}

pub fn check_integrability(f: &GCSField) -> Result<IntegrabilityReport> {
    let g = &f.courant.algebra;
    let n = f.courant.n;
    let k = f.k();
    let samples = SamplePoints::default_for(n);
    let mut report = IntegrabilityReport {
        cond_a: true,
        cond_b: true,
        cond_c: true,
        cond_d: true,
        cond_e: true,
        witnesses: Vec::new(),
    };

    // A: W involutive. Constant frames have vanishing brackets; checked
    // honestly against the polynomial span of the frame.
    let wmat_poly: Matrix<Polynomial> = if f.w_frame.is_empty() {
        Matrix::zero(n, 0)
    } else {
        Matrix::from_cols(&f.w_frame).to_poly()
    };
    for i in 0..k {
        for j in (i + 1)..k {
            let br = VectorField::constant(&f.w_frame[i])
                .bracket(&VectorField::constant(&f.w_frame[j]));
            if !membership_in(&wmat_poly, &br.components, &samples)? {
                report.cond_a = false;
                report
                    .witnesses
                    .push(('A', format!("frame pair ({i}, {j})")));
            }
        }
    }

    let dmat = f.d_matrix();

    // B: D closed under the fiber bracket.
    'b: for a in 0..f.d_frame.len() {
        for b in (a + 1)..f.d_frame.len() {
            let br = g.bracket_poly(&f.d_frame[a], &f.d_frame[b]);
            if !membership_in(&dmat, &br, &samples)? {
                report.cond_b = false;
                report.witnesses.push(('B', format!("D pair ({a}, {b})")));
                break 'b;
            }
        }
    }

    // C: the partial connection nabla + ad_sigma preserves D.
    'c: for i in 0..k {
        for a in 0..f.d_frame.len() {
            let mut v = nabla_on(f, &f.w_frame[i], &f.d_frame[a]);
            let br = g.bracket_poly(&f.sigma[i], &f.d_frame[a]);
            for (slot, term) in v.iter_mut().zip(&br) {
                *slot = &*slot + term;
            }
            if !membership_in(&dmat, &v, &samples)? {
                report.cond_c = false;
                report
                    .witnesses
                    .push(('C', format!("frame {i}, D vector {a}")));
                break 'c;
            }
        }
    }

    // D: R + d^nabla sigma + [sigma, sigma] takes values in D on W ∧ W.
    'd: for i in 0..k {
        for j in (i + 1)..k {
            let xi = VectorField::constant(&f.w_frame[i]);
            let xj = VectorField::constant(&f.w_frame[j]);
            let mut v = f.courant.r2.eval_on(&[&xi, &xj]);
            let dn = d_nabla_sigma(f, i, j);
            let br = g.bracket_poly(&f.sigma[i], &f.sigma[j]);
            for m in 0..g.dim() {
                v[m] = &(&v[m] + &dn[m]) + &br[m];
            }
            if !membership_in(&dmat, &v, &samples)? {
                report.cond_d = false;
                report
                    .witnesses
                    .push(('D', format!("frame pair ({i}, {j})")));
                break 'd;
            }
        }
    }

    // E: 2 d eps + H + <d^nabla sigma ∧ sigma> + 2 <R ∧ sigma>
    //    + 2 <[sigma, sigma], sigma> = 0 on W ∧ W ∧ W.
    let two = GaussianRational::from_int(2);
    'e: for i in 0..k {
        for j in (i + 1)..k {
            for m in (j + 1)..k {
                let xi = VectorField::constant(&f.w_frame[i]);
                let xj = VectorField::constant(&f.w_frame[j]);
                let xm = VectorField::constant(&f.w_frame[m]);
                // d eps on the frame.
                let deps = &(&xi.apply(f.eps.at(j, m)) - &xj.apply(f.eps.at(i, m)))
                    + &xm.apply(f.eps.at(i, j));
                let h = f.courant.h3.eval_on(&[&xi, &xj, &xm])[0].clone();
                // <d^nabla sigma ∧ sigma> with the (2,1)-shuffle signs.
                let om_ij = d_nabla_sigma(f, i, j);
                let om_im = d_nabla_sigma(f, i, m);
                let om_jm = d_nabla_sigma(f, j, m);
                let t1 = &(&g.pairing_poly(&om_ij, &f.sigma[m])
                    - &g.pairing_poly(&om_im, &f.sigma[j]))
                    + &g.pairing_poly(&om_jm, &f.sigma[i]);
                // <R ∧ sigma>.
                let r_ij = f.courant.r2.eval_on(&[&xi, &xj]);
                let r_im = f.courant.r2.eval_on(&[&xi, &xm]);
                let r_jm = f.courant.r2.eval_on(&[&xj, &xm]);
                let t2 = &(&g.pairing_poly(&r_ij, &f.sigma[m])
                    - &g.pairing_poly(&r_im, &f.sigma[j]))
                    + &g.pairing_poly(&r_jm, &f.sigma[i]);
                // <[sigma, sigma], sigma>.
                let t3 = g.pairing_poly(
                    &g.bracket_poly(&f.sigma[i], &f.sigma[j]),
                    &f.sigma[m],
                );
                let total = &(&(&(&deps.scale(&two) + &h) + &t1) + &t2.scale(&two))
                    + &t3.scale(&two);
                if !total.is_zero() {
                    report.cond_e = false;
                    report.witnesses.push((
                        'E',
                        format!("frame triple ({i}, {j}, {m}): {:?}", total),
                    ));
                    break 'e;
                }
            }
        }
    }
    Ok(report)
}

/// The induced frame of `L`: graph sections over `W`, kernel sections over
/// `D`, and the constant annihilator covectors of `W`.
pub fn l_frame(f: &GCSField) -> Result<Vec<Section>> {
    let g = &f.courant.algebra;
    let n = f.courant.n;
    let d = g.dim();
    let k = f.k();
    let complement: Vec<AlgVec> = {
        let mut cols = f.w_frame.clone();
        let mut rank = if cols.is_empty() {
            0
        } else {
            Matrix::from_cols(&cols).rank()
        };
        let mut extra = Vec::new();
        for m in 0..n {
            if rank == n {
                break;
            }
            let mut e = vec![GaussianRational::zero(); n];
            e[m] = GaussianRational::one();
            cols.push(e.clone());
            let new_rank = Matrix::from_cols(&cols).rank();
            if new_rank > rank {
                rank = new_rank;
                extra.push(e);
            } else {
                cols.pop();
            }
        }
        extra
    };
    let mut basis_cols = f.w_frame.clone();
    basis_cols.extend(complement.iter().cloned());
    let bt = Matrix::from_cols(&basis_cols).transpose();
    let covector = |values_on_w: Vec<Polynomial>| -> Result<Form> {
        let mut rhs = values_on_w;
        rhs.resize(n, Polynomial::zero());
        let comps = bt
            .solve_poly_rhs(&rhs)
            .ok_or_else(|| invalid("W frame covector solve failed"))?;
        let mut xi = Form::scalar_zero(n, 1);
        for (m, p) in comps.into_iter().enumerate() {
            if !p.is_zero() {
                xi.add_to_coeff(vec![m as u8], &[p]);
            }
        }
        Ok(xi)
    };
    let two = GaussianRational::from_int(2);
    let mut out = Vec::new();
    for i in 0..k {
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let pair = g.pairing_poly(&f.sigma[j], &f.sigma[i]);
            values.push(&f.eps.at(i, j).scale(&two) - &pair);
        }
        let xi = covector(values)?;
        out.push(Section {
            x: VectorField::constant(&f.w_frame[i]),
            xi,
            r: f.sigma[i].clone(),
        });
    }
    for r in &f.d_frame {
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            values.push(g.pairing_poly(&f.sigma[j], r).scale(&(-two.clone())));
        }
        let xi = covector(values)?;
        out.push(Section {
            x: VectorField::zero(n),
            xi,
            r: r.clone(),
        });
    }
    let ann: Vec<Vec<GaussianRational>> = if f.w_frame.is_empty() {
        (0..n)
            .map(|m| {
                let mut e = vec![GaussianRational::zero(); n];
                e[m] = GaussianRational::one();
                e
            })
            .collect()
    } else {
        Matrix::from_cols(&f.w_frame).transpose().kernel()
    };
    for zeta in ann {
        let mut xi = Form::scalar_zero(n, 1);
        for (m, c) in zeta.iter().enumerate() {
            if !c.is_zero() {
                xi.add_to_coeff(vec![m as u8], &[Polynomial::constant(c.clone())]);
            }
        }
        out.push(Section {
            x: VectorField::zero(n),
            xi,
            r: vec![Polynomial::zero(); d],
        });
    }
    Ok(out)
}

fn section_as_vector(n: usize, d: usize, s: &Section) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(2 * n + d);
    out.extend(s.x.components.iter().cloned());
    for m in 0..n {
        out.push(s.xi.coeff(&[m as u8])[0].clone());
    }
    out.extend(s.r.iter().cloned());
    out
}

/// Direct closure oracle: the Dorfman bracket of every pair of `L`-frame
/// sections stays in the polynomial span of the frame.
pub fn closure_oracle(f: &GCSField) -> Result<bool> {
    let frame = l_frame(f)?;
    let n = f.courant.n;
    let d = f.courant.algebra.dim();
    let cols: Vec<Vec<Polynomial>> = frame.iter().map(|s| section_as_vector(n, d, s)).collect();
    let fmat = Matrix::from_cols(&cols);
    let samples = SamplePoints::default_for(n);
    for u in &frame {
        for v in &frame {
            let b = dorfman(&f.courant, u, v);
            let bv = section_as_vector(n, d, &b);
            if !membership_in(&fmat, &bv, &samples)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dimension profile at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub dim_w: usize,
    pub dim_delta: usize,
    pub rank_d: usize,
    pub dim_d_cap_conj: usize,
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub point: Vec<GaussianRational>,
    pub report: Option<IndexZeroReport>,
    pub profile: Option<Profile>,
    pub rank_drop: bool,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub points: Vec<PointReport>,
    pub profile_constant: bool,
    pub all_index_zero: bool,
    pub flagged: Vec<usize>,
}

/// Rational grid `{-1 + 2j/(per_axis-1)}^n` (just the origin for 1).
pub fn grid_points(n: usize, per_axis: usize) -> Result<Vec<Vec<GaussianRational>>> {
    if per_axis == 0 {
        return Err(invalid("grid needs at least one point per axis"));
    }
    let axis: Vec<GaussianRational> = if per_axis == 1 {
        vec![GaussianRational::zero()]
    } else {
        (0..per_axis)
            .map(|j| {
                GaussianRational::from_ratio(2 * j as i64 - (per_axis as i64 - 1), per_axis as i64 - 1)
            })
            .collect()
    };
    let total = axis.len().pow(n as u32);
    if total > 100_000 {
        return Err(invalid("grid too large"));
    }
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| axis[i].clone()).collect());
        let mut carry = 0;
        loop {
            if carry == n {
                return Ok(out);
            }
            idx[carry] += 1;
            if idx[carry] < axis.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
    }
}

pub fn pointwise_index_zero(f: &GCSField, points: &[Vec<GaussianRational>]) -> Result<ScanResult> {
    let mut out = Vec::new();
    let mut flagged = Vec::new();
    for (pi, pt) in points.iter().enumerate() {
        match f.eval_at(pt) {
            Ok(q) => {
                let rep = check_index_zero(&q)?;
                let dmat = Matrix::from_cols(&q.d_basis);
                let dconj = crate::matrix::subspace::intersect(&dmat, &dmat.conj()).len();
                let profile = Profile {
                    dim_w: q.w.len(),
                    dim_delta: rep.delta.len(),
                    rank_d: q.d_basis.len(),
                    dim_d_cap_conj: dconj,
                };
                out.push(PointReport {
                    point: pt.clone(),
                    report: Some(rep),
                    profile: Some(profile),
                    rank_drop: false,
                });
            }
            Err(Error::RankDropAtPoint { .. }) => {
                flagged.push(pi);
                out.push(PointReport {
                    point: pt.clone(),
                    report: None,
                    profile: None,
                    rank_drop: true,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let first_profile = out.iter().find_map(|p| p.profile.clone());
    let mut profile_constant = true;
    for (pi, p) in out.iter().enumerate() {
        if p.profile != first_profile {
            profile_constant = false;
            if !flagged.contains(&pi) {
                flagged.push(pi);
            }
        }
    }
    let all_index_zero = out
        .iter()
        .all(|p| p.report.as_ref().map(|r| r.verdict).unwrap_or(false));
    Ok(ScanResult {
        points: out,
        profile_constant,
        all_index_zero,
        flagged,
    })
}

/// `[h, D] ⊂ D` for every vector of a commuting real Cartan frame.
pub fn is_regular_wrt_cartan(f: &GCSField, cartan: &[AlgVec]) -> Result<bool> {
    let g = &f.courant.algebra;
    for h in cartan {
        if h.len() != g.dim() || !crate::liealg::vec_is_real(h) {
            return Err(invalid("Cartan frame must consist of real fiber vectors"));
        }
    }
    for a in cartan {
        for b in cartan {
            if !crate::liealg::vec_is_zero(&g.bracket(a, b)) {
                return Err(invalid("Cartan frame does not commute"));
            }
        }
    }
    let dmat = f.d_matrix();
    let samples = SamplePoints::default_for(f.courant.n);
    for h in cartan {
        let hs = crate::liealg::const_to_poly_vec(h);
        for r in &f.d_frame {
            let br = g.bracket_poly(&hs, r);
            if !membership_in(&dmat, &br, &samples)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical lift `T_I` of an isomorphism: `(W, K sigma + Phi, K D,
/// eps + (beta|_W + <Phi ∧ K sigma>)/2)`, then an optional extra affine
/// shift `gamma: W -> K D`.
pub fn lift_iso(
    iso: &IsoData,
    f: &GCSField,
    gamma: Option<&[AlgSection]>,
) -> Result<GCSField> {
    let g = &f.courant.algebra;
    let target = push_data(iso, &f.courant)?;
    let k = f.k();
    let half = GaussianRational::from_ratio(1, 2);
    let mut sigma = Vec::with_capacity(k);
    let mut phis = Vec::with_capacity(k);
    let mut ksig = Vec::with_capacity(k);
    for i in 0..k {
        let xi = VectorField::constant(&f.w_frame[i]);
        let phi_x = iso.phi.i_vf(&xi).coeff(&[]);
        let ks = iso.k.mul_vec(&f.sigma[i]);
        sigma.push(crate::liealg::poly_vec_add(&ks, &phi_x));
        phis.push(phi_x);
        ksig.push(ks);
    }
    let d_frame: Vec<AlgSection> = f.d_frame.iter().map(|r| iso.k.mul_vec(r)).collect();
    let mut eps = Matrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            let xi = VectorField::constant(&f.w_frame[i]);
            let xj = VectorField::constant(&f.w_frame[j]);
            let beta_ij = iso.beta.eval_on(&[&xi, &xj])[0].clone();
            let wedge = &g.pairing_poly(&phis[i], &ksig[j]) - &g.pairing_poly(&phis[j], &ksig[i]);
            let v = f.eps.at(i, j) + &(&beta_ij + &wedge).scale(&half);
            eps.set(i, j, v);
        }
    }
    let lifted = GCSField::new(target, f.w_frame.clone(), sigma, d_frame, eps)?;
    match gamma {
        Some(gm) => field_affine_action(&lifted, gm),
        None => Ok(lifted),
    }
}

/// Fiberwise affine action `T_gamma` on the field data.
pub fn field_affine_action(f: &GCSField, gamma: &[AlgSection]) -> Result<GCSField> {
    let g = &f.courant.algebra;
    let k = f.k();
    if gamma.len() != k {
        return Err(invalid("gamma arity mismatch"));
    }
    let dmat = f.d_matrix();
    let samples = SamplePoints::default_for(f.courant.n);
    for gv in gamma {
        if !membership_in(&dmat, gv, &samples)? {
            return Err(invalid("gamma image escapes D"));
        }
    }
    let half = GaussianRational::from_ratio(1, 2);
    let mut sigma = Vec::with_capacity(k);
    for i in 0..k {
        sigma.push(crate::liealg::poly_vec_add(&f.sigma[i], &gamma[i]));
    }
    let mut eps = f.eps.clone();
    for i in 0..k {
        for j in 0..k {
            let wedge = &g.pairing_poly(&gamma[i], &f.sigma[j])
                - &g.pairing_poly(&gamma[j], &f.sigma[i]);
            let v = eps.at(i, j) - &wedge.scale(&half);
            eps.set(i, j, v);
        }
    }
    GCSField::new(
        f.courant.clone(),
        f.w_frame.clone(),
        sigma,
        f.d_frame.clone(),
        eps,
    )
}

/// Canonical lift of an affine pullback.
pub fn lift_pullback(fmap: &AffineMap, f: &GCSField, gamma: Option<&[AlgSection]>) -> Result<GCSField> {
    let target = pullback_data(fmap, &f.courant)?;
    let minv = fmap
        .mat
        .inverse()
        .ok_or_else(|| invalid("singular linear part"))?;
    let subs = fmap.substitutions();
    let w_frame: Vec<AlgVec> = f.w_frame.iter().map(|v| minv.mul_vec(v)).collect();
    let sigma: Vec<AlgSection> = f
        .sigma
        .iter()
        .map(|s| s.iter().map(|p| p.substitute(&subs)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let d_frame: Vec<AlgSection> = f
        .d_frame
        .iter()
        .map(|s| s.iter().map(|p| p.substitute(&subs)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let k = f.k();
    let mut eps = Matrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            eps.set(i, j, f.eps.at(i, j).substitute(&subs)?);
        }
    }
    let lifted = GCSField::new(target, w_frame, sigma, d_frame, eps)?;
    match gamma {
        Some(gm) => field_affine_action(&lifted, gm),
        None => Ok(lifted),
    }
}

/// The matrix of the isomorphism on `V + V* + g` at a point.
pub fn iso_matrix_at(
    iso: &IsoData,
    g: &crate::liealg::QuadraticLieAlgebra,
    n: usize,
    point: &[GaussianRational],
) -> Result<Matrix<GaussianRational>> {
    let d = g.dim();
    let total = 2 * n + d;
    let mut m = Matrix::zero(total, total);
    // Columns over tangent directions.
    for t in 0..n {
        let e = VectorField::coordinate(n, t);
        let u = Section {
            x: e,
            xi: Form::scalar_zero(n, 1),
            r: vec![Polynomial::zero(); d],
        };
        let img = apply_isomorphism(iso, g, &u);
        let col = section_vector_at(n, d, &img, point)?;
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, t, v);
        }
    }
    for t in 0..n {
        let mut xi = Form::scalar_zero(n, 1);
        xi.add_to_coeff(vec![t as u8], &[Polynomial::one()]);
        let u = Section {
            x: VectorField::zero(n),
            xi,
            r: vec![Polynomial::zero(); d],
        };
        let img = apply_isomorphism(iso, g, &u);
        let col = section_vector_at(n, d, &img, point)?;
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, n + t, v);
        }
    }
    for t in 0..d {
        let mut r = vec![Polynomial::zero(); d];
        r[t] = Polynomial::one();
        let u = Section {
            x: VectorField::zero(n),
            xi: Form::scalar_zero(n, 1),
            r,
        };
        let img = apply_isomorphism(iso, g, &u);
        let col = section_vector_at(n, d, &img, point)?;
        for (rr, v) in col.into_iter().enumerate() {
            m.set(rr, 2 * n + t, v);
        }
    }
    Ok(m)
}

fn section_vector_at(
    n: usize,
    d: usize,
    s: &Section,
    point: &[GaussianRational],
) -> Result<Vec<GaussianRational>> {
    let mut out = Vec::with_capacity(2 * n + d);
    for p in &s.x.components {
        out.push(p.eval(point)?);
    }
    for m in 0..n {
        out.push(s.xi.coeff(&[m as u8])[0].eval(point)?);
    }
    for p in &s.r {
        out.push(p.eval(point)?);
    }
    Ok(out)
}

/// `L(T_I f)_x = I_x (L(f)_x)` at one point, as exact span equality.
pub fn lift_l_equality_at(
    iso: &IsoData,
    f: &GCSField,
    lifted: &GCSField,
    point: &[GaussianRational],
) -> Result<bool> {
    let g = &f.courant.algebra;
    let n = f.courant.n;
    let q1 = f.eval_at(point)?;
    let q2 = lifted.eval_at(point)?;
    let l1 = build_l(&q1)?;
    let l2 = build_l(&q2)?;
    let im = iso_matrix_at(iso, g, n, point)?;
    let moved = im.matmul(&l1);
    Ok(moved.same_colspan(&l2))
}

/// Adapted splitting of the Cartan part used by the normal-form builder.
#[derive(Clone, Debug)]
pub struct CartanSplit {
    pub v: Vec<AlgVec>,
    pub v_tilde: Vec<AlgVec>,
    pub w: Vec<AlgVec>,
    pub signs: Vec<i8>,
}

/// Standard adapted split for neutral doubles: `p` real hyperbolic pairs
/// `(h_i, h_i), (a_i, -a_i)` and the remaining pairs combined into `w`
/// vectors (two hyperbolic pairs per `w` pair). Fails with the obstruction
/// when `rank_single - p` is odd.
pub fn standard_adapted_cartan(rs: &RootSystem, p: usize, q: usize) -> Result<CartanSplit> {
    let rank = rs.rank();
    if rank % 2 != 0 {
        return Err(Error::NoAdaptedSplit(
            "Cartan of a double must have even rank".into(),
        ));
    }
    let half = rank / 2;
    if p + q != half {
        return Err(Error::NoAdaptedSplit(format!(
            "p + q must equal {half} for this Cartan"
        )));
    }
    if (half - p) % 2 != 0 {
        return Err(Error::NoAdaptedSplit(
            "no adapted split: every isotropic line in the residual Cartan is real \
             (odd number of hyperbolic pairs left for w vectors)"
                .into(),
        ));
    }
    // Gram of the first-factor Cartan block.
    let g = &rs.algebra;
    let mut gram = Matrix::zero(half, half);
    for i in 0..half {
        for j in 0..half {
            gram.set(i, j, g.pairing(&rs.cartan[i], &rs.cartan[j]));
        }
    }
    let ginv = gram
        .inverse()
        .ok_or_else(|| invalid("degenerate Cartan block"))?;
    // Check the double structure: pairing of (i, half+j) must vanish and the
    // second block must be the negative of the first.
    for i in 0..half {
        for j in 0..half {
            let cross = g.pairing(&rs.cartan[i], &rs.cartan[half + j]);
            if !cross.is_zero() {
                return Err(Error::NoAdaptedSplit(
                    "Cartan basis is not split into orthogonal factor blocks".into(),
                ));
            }
            let second = g.pairing(&rs.cartan[half + i], &rs.cartan[half + j]);
            if second != -gram.at(i, j).clone() {
                return Err(Error::NoAdaptedSplit(
                    "second Cartan block is not the negative of the first".into(),
                ));
            }
        }
    }
    let dim = g.dim();
    let pair_v = |i: usize| -> AlgVec {
        let mut v = vec![GaussianRational::zero(); dim];
        for (slot, (a, b)) in v
            .iter_mut()
            .zip(rs.cartan[i].iter().zip(&rs.cartan[half + i]))
        {
            *slot = a + b;
        }
        v
    };
    let pair_vt = |i: usize| -> AlgVec {
        // (a_i, -a_i) with a_i = (1/2) sum_m Ginv[i][m] h_m.
        let mut v = vec![GaussianRational::zero(); dim];
        let halfc = GaussianRational::from_ratio(1, 2);
        for m in 0..half {
            let c = &halfc * ginv.at(i, m);
            for (slot, (a, b)) in v
                .iter_mut()
                .zip(rs.cartan[m].iter().zip(&rs.cartan[half + m]))
            {
                *slot = &*slot + &(&c * a) - (&c * b);
            }
        }
        v
    };
    let v: Vec<AlgVec> = (0..p).map(pair_v).collect();
    let v_tilde: Vec<AlgVec> = (0..p).map(pair_vt).collect();
    let mut w = Vec::new();
    let mut signs = Vec::new();
    let halfc = GaussianRational::from_ratio(1, 2);
    let phase = GaussianRational::from_parts(1, 1).scale(&GaussianRational::from_ratio(1, 2).re().clone());
    let _ = phase;
    let c_phase = GaussianRational::new(
        crate::scalar::rat(1, 2),
        crate::scalar::rat(1, 2),
    );
    let mut rest = p;
    while rest < half {
        let (j1, j2) = (rest, rest + 1);
        let vv1 = pair_v(j1);
        let vt1 = pair_vt(j1);
        let vv2 = pair_v(j2);
        let vt2 = pair_vt(j2);
        let pos1 = crate::liealg::vec_add(&vv1, &crate::liealg::vec_scale(&vt1, &halfc));
        let pos2 = crate::liealg::vec_add(&vv2, &crate::liealg::vec_scale(&vt2, &halfc));
        let neg1 = crate::liealg::vec_sub(&vv1, &crate::liealg::vec_scale(&vt1, &halfc));
        let neg2 = crate::liealg::vec_sub(&vv2, &crate::liealg::vec_scale(&vt2, &halfc));
        let i = GaussianRational::i();
        let wp = crate::liealg::vec_scale(
            &crate::liealg::vec_add(&pos1, &crate::liealg::vec_scale(&pos2, &i)),
            &c_phase,
        );
        let wn = crate::liealg::vec_scale(
            &crate::liealg::vec_add(&neg1, &crate::liealg::vec_scale(&neg2, &i)),
            &c_phase,
        );
        w.push(wp);
        signs.push(1);
        w.push(wn);
        signs.push(-1);
        rest += 2;
    }
    let split = CartanSplit { v, v_tilde, w, signs };
    verify_cartan_split(rs, &split)?;
    Ok(split)
}

/// Exact Gram relations of a Cartan split, inside the Cartan span.
pub fn verify_cartan_split(rs: &RootSystem, s: &CartanSplit) -> Result<()> {
    let g = &rs.algebra;
    let cartan_mat = rs.cartan_span();
    let all: Vec<&AlgVec> = s
        .v
        .iter()
        .chain(s.w.iter())
        .chain(s.v_tilde.iter())
        .collect();
    for x in &all {
        // Real/complex combination of the Cartan basis.
        if cartan_mat.solve(x).is_none() {
            return Err(invalid("split vector outside the Cartan span"));
        }
    }
    for x in s.v.iter().chain(s.v_tilde.iter()) {
        if !crate::liealg::vec_is_real(x) {
            return Err(invalid("v and vtilde must be real"));
        }
    }
    let p = s.v.len();
    let q = s.w.len();
    let mut full: Vec<AlgVec> = s.v.clone();
    full.extend(s.w.iter().cloned());
    full.extend(s.v_tilde.iter().cloned());
    full.extend(s.w.iter().map(|x| g.tau(x)));
    if Matrix::from_cols(&full).rank() != 2 * (p + q) {
        return Err(invalid("split vectors are dependent"));
    }
    for (i, x) in full.iter().enumerate() {
        for (j, y) in full.iter().enumerate() {
            let got = g.pairing(x, y);
            let expect = expected_split_gram(p, q, &s.signs, i, j);
            if got != expect {
                return Err(invalid(format!("Cartan split Gram mismatch at ({i},{j})")));
            }
        }
    }
    Ok(())
}

fn expected_split_gram(p: usize, q: usize, signs: &[i8], i: usize, j: usize) -> GaussianRational {
    let block = |k: usize| -> (usize, usize) {
        if k < p {
            (0, k)
        } else if k < p + q {
            (1, k - p)
        } else if k < 2 * p + q {
            (2, k - p - q)
        } else {
            (3, k - 2 * p - q)
        }
    };
    let (bi, oi) = block(i);
    let (bj, oj) = block(j);
    match (bi, bj) {
        (0, 2) | (2, 0) if oi == oj => GaussianRational::one(),
        (1, 3) | (3, 1) if oi == oj => GaussianRational::from_int(signs[oi] as i64),
        _ => GaussianRational::zero(),
    }
}

/// Coordinates: `x^1..x^(n-2k)` then `(Re z^j, Im z^j)` pairs.
pub fn normal_form_w_frame(n: usize, k: usize) -> Vec<AlgVec> {
    let real = n - 2 * k;
    let mut out = Vec::new();
    for i in 0..real {
        let mut e = vec![GaussianRational::zero(); n];
        e[i] = GaussianRational::one();
        out.push(e);
    }
    let half = GaussianRational::from_ratio(1, 2);
    let half_i = GaussianRational::new(crate::scalar::rat(0, 1), crate::scalar::rat(1, 2));
    for j in 0..k {
        // d/d conj(z^j) = (d/dRe + i d/dIm)/2.
        let mut e = vec![GaussianRational::zero(); n];
        e[real + 2 * j] = half.clone();
        e[real + 2 * j + 1] = half_i.clone();
        out.push(e);
    }
    out
}

/// Normal-form instance: `W` the coordinate/antiholomorphic frame, `sigma =
/// i sum dx^j ⊗ vtilde_j`, `D = span{v, w} + roots(rplus)`, `eps = i
/// (omega_st + gamma)|_W` over the untwisted algebroid.
#[allow(clippy::too_many_arguments)]
pub fn build_normal_form(
    rs: &RootSystem,
    rplus: &[usize],
    n: usize,
    kc: usize,
    p: usize,
    q: usize,
    split: Option<CartanSplit>,
    gamma: Option<Form>,
) -> Result<GCSField> {
    let g = rs.algebra.clone();
    if n < 2 * kc {
        return Err(invalid("need n >= 2k"));
    }
    let real = n - 2 * kc;
    if p > real {
        return Err(invalid("p exceeds the number of real coordinates"));
    }
    if (n - p) % 2 != 0 {
        return Err(invalid("n - p must be even"));
    }
    if !crate::roots::check_positive_system(rplus, rs) {
        return Err(invalid("rplus is not a positive root system"));
    }
    let split = match split {
        Some(s) => {
            verify_cartan_split(rs, &s)?;
            if s.v.len() != p || s.w.len() != q {
                return Err(invalid("split does not match requested (p, q)"));
            }
            s
        }
        None => standard_adapted_cartan(rs, p, q)?,
    };
    let w_frame = normal_form_w_frame(n, kc);
    let k_total = w_frame.len();
    // sigma = i sum_j (dx^j)|_W ⊗ vtilde_j.
    let mut sigma: Vec<AlgSection> = Vec::with_capacity(k_total);
    for (fi, frame_vec) in w_frame.iter().enumerate() {
        let mut val = vec![Polynomial::zero(); g.dim()];
        if fi < real {
            // dx^j(frame_vec) = delta up to the constant frame layout.
            for j in 0..p {
                let c = &GaussianRational::i() * &frame_vec[j];
                if !c.is_zero() {
                    for (slot, tv) in val.iter_mut().zip(&split.v_tilde[j]) {
                        *slot = &*slot + &Polynomial::constant(&c * tv);
                    }
                }
            }
        }
        sigma.push(val);
    }
    // D frame: v, w, then the positive root vectors.
    let mut d_frame: Vec<AlgSection> = Vec::new();
    for v in split.v.iter().chain(split.w.iter()) {
        d_frame.push(crate::liealg::const_to_poly_vec(v));
    }
    for &ri in rplus {
        d_frame.push(crate::liealg::const_to_poly_vec(&rs.root_vectors[ri]));
    }
    // eps = i (omega_st + gamma)|_W.
    let mut omega = Form::scalar_zero(n, 2);
    let slice = real - p; // even
    for m in 0..(slice / 2) {
        let a = (p + 2 * m) as u8;
        let b = (p + 2 * m + 1) as u8;
        omega.add_to_coeff(vec![a, b], &[Polynomial::one()]);
    }
    if let Some(gm) = &gamma {
        if gm.n() != n || gm.degree() != 2 || gm.vdim() != 1 {
            return Err(invalid("gamma must be a scalar 2-form on the box"));
        }
        if !gm.d().is_zero() {
            return Err(invalid("gamma must be closed"));
        }
        for (idx, val) in gm.coeffs() {
            if !idx.iter().any(|&i| (i as usize) < p) {
                return Err(invalid("gamma must lie in the ideal (dx^1..dx^p)"));
            }
            if val.iter().any(|pp| pp.terms().any(|(_, c)| !c.is_real())) {
                return Err(invalid("gamma must be real"));
            }
        }
        omega = omega.add(gm);
    }
    let mut eps = Matrix::zero(k_total, k_total);
    for i in 0..k_total {
        for j in 0..k_total {
            let xi = VectorField::constant(&w_frame[i]);
            let xj = VectorField::constant(&w_frame[j]);
            let val = omega.eval_on(&[&xi, &xj])[0].scale(&GaussianRational::i());
            eps.set(i, j, val);
        }
    }
    GCSField::new(
        CourantData::untwisted(g, n),
        w_frame,
        sigma,
        d_frame,
        eps,
    )
}

/// The point-base degenerate case: `W = T^(0,1)`, `sigma = 0`, `eps = 0`,
/// `D` from an isotropic Cartan part with `D ∩ conj(D) = 0`.
pub fn build_wang_case(
    rs: &RootSystem,
    rplus: &[usize],
    cartan_part: &[AlgVec],
    kc: usize,
) -> Result<GCSField> {
    let g = rs.algebra.clone();
    let n = 2 * kc;
    if !crate::roots::check_positive_system(rplus, rs) {
        return Err(invalid("rplus is not a positive root system"));
    }
    let rank = rs.rank();
    if cartan_part.len() * 2 != rank {
        return Err(Error::NoAdaptedSplit(
            "Cartan part must be half-dimensional".into(),
        ));
    }
    let cartan_mat = rs.cartan_span();
    for x in cartan_part {
        if cartan_mat.solve(x).is_none() {
            return Err(invalid("Cartan part outside the Cartan span"));
        }
    }
    for a in cartan_part {
        for b in cartan_part {
            if !g.pairing(a, b).is_zero() {
                return Err(Error::NoAdaptedSplit("Cartan part is not isotropic".into()));
            }
        }
    }
    let cmat = Matrix::from_cols(&cartan_part.to_vec());
    if cmat.rank() != cartan_part.len() {
        return Err(invalid("Cartan part is dependent"));
    }
    if !crate::matrix::subspace::intersect(&cmat, &cmat.conj()).is_empty() {
        return Err(Error::NoAdaptedSplit(
            "Cartan part meets its conjugate".into(),
        ));
    }
    let w_frame = normal_form_w_frame(n, kc);
    let k_total = w_frame.len();
    let sigma = vec![vec![Polynomial::zero(); g.dim()]; k_total];
    let mut d_frame: Vec<AlgSection> = cartan_part
        .iter()
        .map(|v| crate::liealg::const_to_poly_vec(v))
        .collect();
    for &ri in rplus {
        d_frame.push(crate::liealg::const_to_poly_vec(&rs.root_vectors[ri]));
    }
    GCSField::new(
        CourantData::untwisted(g, n),
        w_frame,
        sigma,
        d_frame,
        Matrix::zero(k_total, k_total),
    )
}

/// A `(0, q)` Wang-type Cartan part built from the standard hyperbolic
/// pairs; exists exactly when the residual pair count is even.
pub fn standard_wang_cartan(rs: &RootSystem) -> Result<Vec<AlgVec>> {
    let split = standard_adapted_cartan(rs, 0, rs.rank() / 2)?;
    Ok(split.w)
}

/// Pullback lift consistency: `L(T_f f)_x = (f^! of L(f))_(f^{-1} x)` is
/// checked through the section route at a sample point.
pub fn pullback_l_equality_at(
    fmap: &AffineMap,
    f: &GCSField,
    lifted: &GCSField,
    point_new: &[GaussianRational],
) -> Result<bool> {
    // Images of the L-frame sections under the pullback span the lifted L.
    let frame = l_frame(f)?;
    let n = f.courant.n;
    let d = f.courant.algebra.dim();
    let mut cols = Vec::new();
    for s in &frame {
        let pulled = pullback_section(fmap, s)?;
        cols.push(section_vector_at(n, d, &pulled, point_new)?);
    }
    let moved = Matrix::from_cols(&cols);
    let q2 = lifted.eval_at(point_new)?;
    let l2 = build_l(&q2)?;
    Ok(moved.same_colspan(&l2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{builtin, builtin_cartan};
    use crate::roots::root_space_decomposition;
    use crate::scalar::gr;
    use crate::stream::DetStream;

    fn su2x2_roots() -> RootSystem {
        let g = builtin("su2x2").unwrap();
        let cartan = builtin_cartan("su2x2").unwrap();
        root_space_decomposition(&g, &cartan).unwrap()
    }

    #[test]
    fn normal_form_n3_passes_everything() {
        let rs = su2x2_roots();
        let f = build_normal_form(&rs, &rs.positive.clone(), 3, 1, 1, 0, None, None).unwrap();
        // Pinned vectors: v1 = (e3, e3), vtilde1 = (-e3/16, e3/16).
        let split = standard_adapted_cartan(&rs, 1, 0).unwrap();
        let mut v1 = vec![GaussianRational::zero(); 6];
        v1[2] = gr(1, 1);
        v1[5] = gr(1, 1);
        assert_eq!(split.v[0], v1);
        let mut vt = vec![GaussianRational::zero(); 6];
        vt[2] = gr(-1, 16);
        vt[5] = gr(1, 16);
        assert_eq!(split.v_tilde[0], vt);
        let report = check_integrability(&f).unwrap();
        assert!(report.all(), "{:?}", report.witnesses);
        assert!(closure_oracle(&f).unwrap());
        let grid = grid_points(3, 3).unwrap();
        let scan = pointwise_index_zero(&f, &grid).unwrap();
        assert!(scan.all_index_zero);
        assert!(scan.profile_constant);
        // Every report has p = 1 and the oracle agrees.
        for pr in &scan.points {
            let rep = pr.report.as_ref().unwrap();
            assert_eq!(rep.p, 1);
            assert_eq!(rep.real_index, 0);
            assert!(rep.delta0.is_empty());
        }
        let cartan = builtin_cartan("su2x2").unwrap();
        assert!(is_regular_wrt_cartan(&f, &cartan).unwrap());
    }

    #[test]
    fn normal_form_rejects_impossible_split() {
        let rs = su2x2_roots();
        let err = standard_adapted_cartan(&rs, 0, 1).unwrap_err();
        assert!(matches!(err, Error::NoAdaptedSplit(_)));
    }

    #[test]
    fn tampered_eps_fails_cond_e() {
        // n = 5 instance: frame = (dx1, dx2, dx3, dzbar), so triples exist.
        let rs = su2x2_roots();
        let mut f = build_normal_form(&rs, &rs.positive.clone(), 5, 1, 1, 0, None, None).unwrap();
        let clean = check_integrability(&f).unwrap();
        assert!(clean.all(), "{:?}", clean.witnesses);
        // eps += i t1 dt2 ∧ dt3 on the frame: not closed on W ∧ W ∧ W.
        let i = GaussianRational::i();
        let pert = Polynomial::var(0).scale(&i);
        let v12 = f.eps.at(1, 2) + &pert;
        f.eps.set(1, 2, v12);
        let v21 = f.eps.at(2, 1) - &pert;
        f.eps.set(2, 1, v21);
        let report = check_integrability(&f).unwrap();
        assert!(!report.cond_e);
        assert!(report.witnesses.iter().any(|(c, _)| *c == 'E'));
        assert!(!closure_oracle(&f).unwrap());
    }

    #[test]
    fn normal_form_n5_omega_nondegenerate_on_delta0() {
        let rs = su2x2_roots();
        let f = build_normal_form(&rs, &rs.positive.clone(), 5, 1, 1, 0, None, None).unwrap();
        let origin = vec![GaussianRational::zero(); 5];
        let q = f.eval_at(&origin).unwrap();
        let rep = crate::dirac::check_index_zero(&q).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.real_index, 0);
        // Delta_0 = span{d2, d3}, omega = dx2 ∧ dx3 there: dimension 2 and
        // a nonzero determinant.
        assert_eq!(rep.delta0.len(), 2);
    }

    #[test]
    fn integrability_matches_closure_on_gamma_orbit() {
        // The affine orbit keeps L and must keep every verdict, while making
        // the individual condition-E terms nontrivial.
        let rs = su2x2_roots();
        let f = build_normal_form(&rs, &rs.positive.clone(), 3, 1, 1, 0, None, None).unwrap();
        let mut s = DetStream::new(303);
        let k = f.k();
        let gamma: Vec<AlgSection> = (0..k)
            .map(|_| {
                let mut acc = vec![Polynomial::zero(); 6];
                for dv in &f.d_frame {
                    let mut c = Polynomial::zero();
                    c.add_term(crate::poly::Monomial::var(s.index(3)), s.gaussian(2, 1));
                    for (a, b) in acc.iter_mut().zip(dv) {
                        *a = &*a + &(&c * b);
                    }
                }
                acc
            })
            .collect();
        let f2 = field_affine_action(&f, &gamma).unwrap();
        let report = check_integrability(&f2).unwrap();
        assert!(report.all(), "{:?}", report.witnesses);
        assert!(closure_oracle(&f2).unwrap());
        // L agrees pointwise with the original.
        for pt in grid_points(3, 2).unwrap() {
            let l1 = build_l(&f.eval_at(&pt).unwrap()).unwrap();
            let l2 = build_l(&f2.eval_at(&pt).unwrap()).unwrap();
            assert!(l1.same_colspan(&l2));
        }
    }

    #[test]
    fn wang_case_su3x3() {
        let g = builtin("su3x3").unwrap();
        let cartan = builtin_cartan("su3x3").unwrap();
        let rs = root_space_decomposition(&g, &cartan).unwrap();
        let cartan_part = standard_wang_cartan(&rs).unwrap();
        let f = build_wang_case(&rs, &rs.positive.clone(), &cartan_part, 1).unwrap();
        let report = check_integrability(&f).unwrap();
        assert!(report.all(), "{:?}", report.witnesses);
        let grid = grid_points(2, 3).unwrap();
        let scan = pointwise_index_zero(&f, &grid).unwrap();
        assert!(scan.all_index_zero);
    }

    #[test]
    fn wang_case_su2x2_fails() {
        let rs = su2x2_roots();
        let err = standard_wang_cartan(&rs).unwrap_err();
        assert!(matches!(err, Error::NoAdaptedSplit(_)));
    }

    #[test]
    fn rank_drop_scan_flags_points() {
        let rs = su2x2_roots();
        let mut f = build_normal_form(&rs, &rs.positive.clone(), 3, 1, 1, 0, None, None).unwrap();
        // Degenerate the first D vector at t1 = 0: multiply by t1.
        f.d_frame[0] = f.d_frame[0]
            .iter()
            .map(|p| p * &Polynomial::var(0))
            .collect();
        let grid = grid_points(3, 3).unwrap();
        // Validation would reject it; scan the raw struct directly.
        let scan = pointwise_index_zero(&f, &grid).unwrap();
        assert!(!scan.flagged.is_empty());
        assert!(scan.points.iter().any(|p| p.rank_drop));
    }
}
