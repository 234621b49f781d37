//! Root space decompositions of compact-type quadratic Lie algebras with a
//! caller-supplied Cartan basis, Weyl-normalized root vectors and the
//! bookkeeping the geometric modules need (dual vectors, dual basis,
//! structure constants of the root part, positivity).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::liealg::{vec_is_zero, vec_scale, AlgVec, QuadraticLieAlgebra};
use crate::matrix::{subspace, Matrix};
use crate::scalar::{
    canonical_unit_scaling, gaussian_of_norm, squarefree_split, GaussianRational, Rational,
};
use crate::{invalid, Error, Result};

/// A root is stored by its values on the Cartan basis (purely imaginary
/// Gaussian rationals for compact type).
pub type RootWeight = Vec<GaussianRational>;

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub algebra: QuadraticLieAlgebra,
    /// Real Cartan basis vectors, pairwise commuting.
    pub cartan: Vec<AlgVec>,
    /// Weight vectors of the nonzero roots.
    pub roots: Vec<RootWeight>,
    /// Weyl-scaled root vectors, one per root.
    pub root_vectors: Vec<AlgVec>,
    /// `H_alpha`: metric duals of the roots inside the complexified Cartan.
    pub dual_vectors: Vec<AlgVec>,
    /// `<E_alpha, tau(E_alpha)> = eps_alpha` in `{-1, +1}` up to the stored
    /// norm-free residue: the exact pairing is `eps * residue`.
    pub eps: Vec<i8>,
    /// Positive squarefree residue left when `1/|<u, tau u>|` is not a
    /// Gaussian norm; `1` whenever full Weyl normalization was possible.
    pub pairing_residue: Vec<Rational>,
    /// Index of `-alpha` for each root.
    pub neg: Vec<usize>,
    /// `sum[(a, b)] = c` whenever `root_a + root_b = root_c`.
    pub sum: BTreeMap<(usize, usize), usize>,
    /// `N_{ab}` with `[E_a, E_b] = N_{ab} E_{a+b}` where defined.
    pub nconst: BTreeMap<(usize, usize), GaussianRational>,
    /// Canonical positive system (indices into `roots`).
    pub positive: Vec<usize>,
    /// Simple roots of the canonical positive system.
    pub simple: Vec<usize>,
    /// Dual basis of the simple roots inside the complexified Cartan.
    pub dual_basis: Vec<AlgVec>,
    /// Integer coordinates of every root over the simple roots.
    pub simple_coords: Vec<Vec<i64>>,
}

/// Characteristic polynomial of a square matrix by Faddeev-LeVerrier,
/// coefficients from highest degree (monic) down to the constant term.
fn char_poly(m: &Matrix<GaussianRational>) -> Vec<GaussianRational> {
    let n = m.rows();
    let mut coeffs = vec![GaussianRational::zero(); n + 1];
    coeffs[0] = GaussianRational::one();
    let mut mk = Matrix::<GaussianRational>::zero(n, n);
    for k in 1..=n {
        // M_k = A * M_{k-1} + c_{k-1} I
        let mut am = m.matmul(&mk);
        for d in 0..n {
            am.set(d, d, am.at(d, d) + &coeffs[k - 1]);
        }
        mk = am;
        let prod = m.matmul(&mk);
        let mut tr = GaussianRational::zero();
        for d in 0..n {
            tr = &tr + prod.at(d, d);
        }
        let inv_k = GaussianRational::from_int(k as i64).inv().unwrap();
        coeffs[k] = -(&tr * &inv_k);
    }
    coeffs
}

fn divisors_up_to(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    while &(&p * &p) <= &n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            primes.push((p.clone(), e));
        }
        p += 1u32;
        if p > BigInt::from(1_000_000u64) {
            break;
        }
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
                if next.len() > cap {
                    return None;
                }
            }
        }
        divs = next;
    }
    Some(divs)
}

/// All purely imaginary eigenvalues `i*q` (q rational) of `m`, assuming the
/// spectrum is contained in `i*Q`. Returns the list of distinct eigenvalues.
fn imaginary_rational_eigenvalues(m: &Matrix<GaussianRational>) -> Result<Vec<GaussianRational>> {
    let n = m.rows();
    let cp = char_poly(m); // monic, highest first
    // Substitute x = i y: p(iy) = sum c_k (iy)^(n-k). Collect the real and
    // imaginary integer polynomials in y (after clearing denominators).
    let mut re = vec![Rational::zero(); n + 1]; // coefficient of y^d
    let mut im = vec![Rational::zero(); n + 1];
    for (k, c) in cp.iter().enumerate() {
        let d = n - k;
        let ipow = GaussianRational::i().pow(d as u32);
        let z = c * &ipow;
        re[d] = re[d].clone() + z.re();
        im[d] = im[d].clone() + z.im();
    }
    let clear = |v: &[Rational]| -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for q in v {
            lcm = num_integer::lcm(lcm, q.denom().clone());
        }
        v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
    };
    let rei = clear(&re);
    let imi = clear(&im);
    let pick = if rei.iter().any(|x| !x.is_zero()) {
        rei.clone()
    } else {
        imi.clone()
    };
    // Strip zero roots.
    let low = pick.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let high = pick.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let mut candidates: Vec<Rational> = vec![Rational::zero()];
    if high > low {
        let a0 = &pick[low];
        let alead = &pick[high];
        let nums = divisors_up_to(a0, 20_000)
            .ok_or_else(|| Error::UnsupportedCartan("constant term too hard to factor".into()))?;
        let dens = divisors_up_to(alead, 20_000)
            .ok_or_else(|| Error::UnsupportedCartan("leading term too hard to factor".into()))?;
        for nu in &nums {
            for de in &dens {
                for sign in [1i32, -1] {
                    let q = Rational::new(nu * BigInt::from(sign), de.clone());
                    candidates.push(q);
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let eval_int = |poly: &[BigInt], q: &Rational| -> bool {
        // poly(q) == 0 exactly
        let mut acc = Rational::zero();
        let mut qp = Rational::one();
        for c in poly {
            acc += Rational::from_integer(c.clone()) * qp.clone();
            qp *= q.clone();
        }
        acc.is_zero()
    };
    let mut out = Vec::new();
    for q in candidates {
        if eval_int(&rei, &q) && eval_int(&imi, &q) {
            out.push(GaussianRational::new(Rational::zero(), q));
        }
    }
    Ok(out)
}

/// Simultaneous eigenspace decomposition for the commuting family
/// `ad(h_1), ..., ad(h_l)` on the complexified algebra.
fn simultaneous_eigenspaces(
    g: &QuadraticLieAlgebra,
    cartan: &[AlgVec],
) -> Result<Vec<(RootWeight, Matrix<GaussianRational>)>> {
    let dim = g.dim();
    // Each item: (weight so far, basis columns of the subspace).
    let mut spaces: Vec<(RootWeight, Matrix<GaussianRational>)> =
        vec![(Vec::new(), Matrix::identity(dim))];
    for h in cartan {
        let ad = g.ad(h);
        let mut next = Vec::new();
        for (weight, basis) in spaces {
            let k = basis.cols();
            // Restrict ad to the subspace: solve basis * M = ad * basis.
            let image = ad.matmul(&basis);
            let mut restricted = Matrix::zero(k, k);
            for j in 0..k {
                let col = image.col(j);
                let x = basis.solve(&col).ok_or_else(|| {
                    Error::NotSemisimpleCartan(
                        "subspace not invariant under the commuting family".into(),
                    )
                })?;
                for i in 0..k {
                    restricted.set(i, j, x[i].clone());
                }
            }
            let eigs = imaginary_rational_eigenvalues(&restricted)?;
            let mut found = 0usize;
            for lambda in eigs {
                // Kernel of (restricted - lambda).
                let mut shifted = restricted.clone();
                for d in 0..k {
                    shifted.set(d, d, shifted.at(d, d) - &lambda);
                }
                let ker = shifted.kernel();
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                // Lift kernel vectors back to ambient coordinates.
                let cols: Vec<AlgVec> = ker.iter().map(|v| basis.mul_vec(v)).collect();
                let mut w = weight.clone();
                w.push(lambda.clone());
                next.push((w, Matrix::from_cols(&cols)));
            }
            if found != k {
                return Err(Error::UnsupportedCartan(
                    "ad-eigenvalues do not all lie in i*Q".into(),
                ));
            }
        }
        spaces = next;
    }
    Ok(spaces)
}

pub fn root_space_decomposition(
    g: &QuadraticLieAlgebra,
    cartan: &[AlgVec],
) -> Result<RootSystem> {
    let dim = g.dim();
    if cartan.is_empty() {
        return Err(invalid("empty Cartan basis"));
    }
    for v in cartan {
        if v.len() != dim {
            return Err(invalid("Cartan vector dimension mismatch"));
        }
        if !crate::liealg::vec_is_real(v) {
            return Err(invalid("Cartan basis must consist of real vectors"));
        }
    }
    for a in cartan {
        for b in cartan {
            if !vec_is_zero(&g.bracket(a, b)) {
                return Err(invalid("Cartan basis does not commute"));
            }
        }
    }
    let spaces = simultaneous_eigenspaces(g, cartan)?;
    let rank = cartan.len();
    let mut zero_dim = 0usize;
    let mut raw: Vec<(RootWeight, AlgVec)> = Vec::new();
    for (w, basis) in &spaces {
        let is_zero_weight = w.iter().all(|x| x.is_zero());
        if is_zero_weight {
            zero_dim += basis.cols();
            continue;
        }
        if basis.cols() != 1 {
            return Err(Error::NotSemisimpleCartan(format!(
                "root space of dimension {} for a nonzero root",
                basis.cols()
            )));
        }
        raw.push((w.clone(), basis.col(0)));
    }
    if zero_dim != rank {
        return Err(Error::NotSemisimpleCartan(format!(
            "zero-weight space has dimension {zero_dim}, expected the rank {rank}"
        )));
    }
    if raw.len() + rank != dim {
        return Err(Error::NotSemisimpleCartan(
            "root spaces do not fill the algebra".to_string(),
        ));
    }

    // Generic positivity functional: evaluate weights at (1, N, N^2, ...)
    // for the smallest N that separates all of them from zero.
    let functional = |w: &RootWeight, nbase: i64| -> Rational {
        let mut val = Rational::zero();
        let mut scale = Rational::one();
        for comp in w {
            val += comp.im() * &scale;
            scale *= Rational::from_integer(BigInt::from(nbase));
        }
        val
    };
    let mut nbase = 0i64;
    'search: for cand in 1..200i64 {
        for (w, _) in &raw {
            if functional(w, cand).is_zero() {
                continue 'search;
            }
        }
        nbase = cand;
        break;
    }
    if nbase == 0 {
        return Err(Error::NotSemisimpleCartan(
            "failed to find a generic positivity functional".into(),
        ));
    }

    // Pair up alpha with -alpha and apply the Weyl scaling; the canonical
    // representative of each pair is the positive root.
    let weight_key = |w: &RootWeight| -> Vec<(BigInt, BigInt)> {
        w.iter()
            .map(|z| (z.im().numer().clone(), z.im().denom().clone()))
            .collect()
    };
    let mut order: Vec<usize> = (0..raw.len())
        .filter(|&i| functional(&raw[i].0, nbase).is_positive())
        .collect();
    order.sort_by_key(|&i| weight_key(&raw[i].0));
    let mut roots: Vec<RootWeight> = Vec::new();
    let mut root_vectors: Vec<AlgVec> = Vec::new();
    let mut eps: Vec<i8> = Vec::new();
    let mut pairing_residue: Vec<Rational> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    let mut used = vec![false; raw.len()];
    for &i in &order {
        if used[i] {
            continue;
        }
        let (w, u) = &raw[i];
        let wneg: RootWeight = w.iter().map(|x| -x.clone()).collect();
        let j = raw
            .iter()
            .position(|(w2, _)| *w2 == wneg)
            .ok_or_else(|| Error::NotSemisimpleCartan("roots do not come in +- pairs".into()))?;
        used[i] = true;
        used[j] = true;
        // Pairing <u, tau(u)> is real and nonzero for a nondegenerate metric.
        let h = g.pairing(u, &g.tau(u));
        if !h.is_real() || h.is_zero() {
            return Err(Error::UnsupportedCartan(
                "degenerate Hermitian pairing on a root space".into(),
            ));
        }
        let habs = h.re().abs();
        let sign: i8 = if h.re().is_positive() { 1 } else { -1 };
        // Scale to |<E, tau E>| = 1 when possible. Real scalings are
        // preferred (they keep the structure constants of the su(n) bases
        // real); a complex scaling is used only when it reaches pairing 1
        // and no real one does.
        let (m_sqfree, s) = squarefree_split(&habs).ok_or_else(|| {
            Error::UnsupportedCartan("pairing magnitude too hard to factor".into())
        })?;
        let c = if m_sqfree.is_one() {
            GaussianRational::real(Rational::one() / &s)
        } else if let Some(z) = gaussian_of_norm(&(Rational::one() / &habs)) {
            z
        } else {
            GaussianRational::real(Rational::one() / &s)
        };
        let mut e_plus = vec_scale(u, &c);
        let unit = canonical_unit_scaling(&e_plus);
        e_plus = vec_scale(&e_plus, &unit);
        let e_minus: AlgVec = g.tau(&e_plus).iter().map(|x| -x.clone()).collect();
        let pair_plus = g.pairing(&e_plus, &g.tau(&e_plus));
        debug_assert!(pair_plus.is_real());
        let residue = pair_plus.re().abs();
        let base = roots.len();
        roots.push(w.clone());
        roots.push(wneg);
        root_vectors.push(e_plus);
        root_vectors.push(e_minus);
        // eps of -alpha equals eps of alpha for tau-compatible scalings:
        // <E_-a, tau E_-a> = <tau E_a, E_a> = conj <E_a, tau E_a>, real.
        eps.push(sign);
        eps.push(sign);
        pairing_residue.push(residue.clone());
        pairing_residue.push(residue);
        neg.push(base + 1);
        neg.push(base);
    }

    // Dual vectors H_alpha inside the complexified Cartan: solve
    // <H, h_m> = alpha(h_m) over the Cartan span.
    let cartan_mat = Matrix::from_cols(cartan);
    let gram = {
        let mut m = Matrix::zero(rank, rank);
        for a in 0..rank {
            for b in 0..rank {
                m.set(a, b, g.pairing(&cartan[a], &cartan[b]));
            }
        }
        m
    };
    let gram_inv = gram
        .inverse()
        .ok_or_else(|| invalid("metric degenerate on the Cartan"))?;
    let dual_vectors: Vec<AlgVec> = roots
        .iter()
        .map(|w| {
            let coeffs = gram_inv.mul_vec(w);
            cartan_mat.mul_vec(&coeffs)
        })
        .collect();

    // The canonical positive system: the pair representatives, which sit at
    // the even indices by construction.
    let positive: Vec<usize> = (0..roots.len()).step_by(2).collect();

    // Sum table.
    let mut sum = BTreeMap::new();
    for a in 0..roots.len() {
        for b in 0..roots.len() {
            let s: RootWeight = roots[a]
                .iter()
                .zip(&roots[b])
                .map(|(x, y)| x + y)
                .collect();
            if s.iter().all(|x| x.is_zero()) {
                continue;
            }
            if let Some(cidx) = roots.iter().position(|w| *w == s) {
                sum.insert((a, b), cidx);
            }
        }
    }

    // Simple roots: positive roots that are not sums of two positive roots.
    let mut simple = Vec::new();
    for &p in &positive {
        let mut is_simple = true;
        for &a in &positive {
            for &b in &positive {
                if sum.get(&(a, b)) == Some(&p) {
                    is_simple = false;
                }
            }
        }
        if is_simple {
            simple.push(p);
        }
    }

    // Integer coordinates of every root over the simple roots.
    let simple_mat = {
        let cols: Vec<Vec<GaussianRational>> = simple.iter().map(|&s| roots[s].clone()).collect();
        Matrix::from_cols(&cols)
    };
    let mut simple_coords = Vec::new();
    for w in &roots {
        let x = simple_mat
            .solve(w)
            .ok_or_else(|| Error::NotSemisimpleCartan("root outside simple-root span".into()))?;
        let mut coords = Vec::new();
        for c in x {
            if !c.is_real() || !c.re().denom().is_one() {
                return Err(Error::NotSemisimpleCartan(
                    "non-integer simple-root coordinates".into(),
                ));
            }
            let n: BigInt = c.re().numer().clone();
            let as_i64 = i64::try_from(n).map_err(|_| {
                Error::NotSemisimpleCartan("simple-root coordinate overflow".into())
            })?;
            coords.push(as_i64);
        }
        simple_coords.push(coords);
    }

    // Dual basis of the simple roots: alpha_j(Htilde_i) = delta_ij, with
    // Htilde in the complexified Cartan span.
    let mut dual_basis = Vec::new();
    {
        // Matrix rows: values of simple roots on the Cartan basis.
        let rows: Vec<Vec<GaussianRational>> =
            simple.iter().map(|&s| roots[s].clone()).collect();
        let m = Matrix::from_rows(rows);
        for i in 0..simple.len() {
            let mut rhs = vec![GaussianRational::zero(); simple.len()];
            rhs[i] = GaussianRational::one();
            let x = m
                .solve(&rhs)
                .ok_or_else(|| Error::NotSemisimpleCartan("simple roots not independent".into()))?;
            dual_basis.push(cartan_mat.mul_vec(&x));
        }
    }

    // Structure constants of the root part.
    let mut nconst = BTreeMap::new();
    for (&(a, b), &cidx) in &sum {
        let br = g.bracket(&root_vectors[a], &root_vectors[b]);
        // br = N * E_c; read off N from any nonzero coordinate.
        let ec = &root_vectors[cidx];
        let mut n = GaussianRational::zero();
        for (k, comp) in ec.iter().enumerate() {
            if !comp.is_zero() {
                n = br[k].div(comp).unwrap();
                break;
            }
        }
        // Confirm proportionality exactly.
        for k in 0..dim {
            if br[k] != &n * &ec[k] {
                return Err(Error::NotSemisimpleCartan(
                    "bracket of root vectors not proportional to the sum root vector".into(),
                ));
            }
        }
        nconst.insert((a, b), n);
    }

    Ok(RootSystem {
        algebra: g.clone(),
        cartan: cartan.to_vec(),
        roots,
        root_vectors,
        dual_vectors,
        eps,
        pairing_residue,
        neg,
        sum,
        nconst,
        positive,
        simple,
        dual_basis,
        simple_coords,
    })
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        self.positive.contains(&idx)
    }

    /// `<E_alpha, E_{-alpha}>`, equal to `-eps_alpha * residue_alpha`.
    pub fn opposite_pairing(&self, idx: usize) -> GaussianRational {
        self.algebra
            .pairing(&self.root_vectors[idx], &self.root_vectors[self.neg[idx]])
    }

    /// True when every root pair carries the full Weyl normalization
    /// `<E_alpha, E_{-alpha}> = 1`... i.e. residue 1 with eps = -1, or the
    /// per-factor variant with eps = +1.
    pub fn fully_normalized(&self) -> bool {
        self.pairing_residue.iter().all(|r| r.is_one())
    }

    /// The value `alpha(h)` for a Cartan element given by coordinates over
    /// the stored Cartan basis is not needed; this evaluates `alpha(x)` for
    /// an arbitrary element of the complexified Cartan span.
    pub fn root_value(&self, idx: usize, x: &[GaussianRational]) -> Result<GaussianRational> {
        let cartan_mat = Matrix::from_cols(&self.cartan);
        let coeffs = cartan_mat
            .solve(x)
            .ok_or_else(|| invalid("element outside the Cartan span"))?;
        let mut acc = GaussianRational::zero();
        for (c, w) in coeffs.iter().zip(&self.roots[idx]) {
            acc = &acc + &(c * w);
        }
        Ok(acc)
    }

    /// Span matrix of the root spaces for a subset of root indices.
    pub fn root_space_span(&self, subset: &[usize]) -> Matrix<GaussianRational> {
        let cols: Vec<AlgVec> = subset.iter().map(|&i| self.root_vectors[i].clone()).collect();
        if cols.is_empty() {
            Matrix::zero(self.algebra.dim(), 0)
        } else {
            Matrix::from_cols(&cols)
        }
    }

    /// Complexified Cartan span as a matrix.
    pub fn cartan_span(&self) -> Matrix<GaussianRational> {
        Matrix::from_cols(&self.cartan)
    }
}

/// True iff `r0` (indices into `rs.roots`) is a positive root system:
/// `R0 ∩ (-R0) = ∅`, `R0 ∪ (-R0) = R`, and `R0` is closed under addition.
pub fn check_positive_system(r0: &[usize], rs: &RootSystem) -> bool {
    let set: Vec<bool> = {
        let mut v = vec![false; rs.num_roots()];
        for &i in r0 {
            if i >= rs.num_roots() {
                return false;
            }
            v[i] = true;
        }
        v
    };
    for &i in r0 {
        if set[rs.neg[i]] {
            return false;
        }
    }
    for i in 0..rs.num_roots() {
        if !set[i] && !set[rs.neg[i]] {
            return false;
        }
    }
    for &a in r0 {
        for &b in r0 {
            if let Some(&c) = rs.sum.get(&(a, b)) {
                if !set[c] {
                    return false;
                }
            }
        }
    }
    true
}

/// The subspace decomposition invariant: intersect complexified spans.
pub fn intersect_spans(
    a: &Matrix<GaussianRational>,
    b: &Matrix<GaussianRational>,
) -> Vec<AlgVec> {
    subspace::intersect(a, b)
}
