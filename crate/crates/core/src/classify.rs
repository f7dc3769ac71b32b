//! Recognizers for the structured classes of mixed polynomials: radial and
//! polar weight types, conjugate and pseudo-conjugate weighted homogeneity,
//! good polar factorizations, simplicial data, admissibility, absolute cones.

use num::complex::Complex64;
use num::{BigRational, Signed, Zero};

use crate::error::{precondition, Result};
use crate::linalg;
use crate::mixedpoly::{GaussianRational, MixedMonomial, MixedPolynomial, Positivity, WeightVector};
use crate::newton;
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialType {
    pub q: WeightVector,
    pub d_r: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarType {
    pub p: WeightVector,
    pub d_p: i64,
}

/// The unique primitive ray `w` with `rows[i]·w` constant, if the solution
/// space is one-dimensional. Returns the ray and the common value.
fn unique_ray(rows: &[Vec<i64>], n: usize) -> Option<(Vec<i64>, i64)> {
    let first = rows.first()?;
    let diffs: Vec<Vec<i64>> =
        rows.iter().map(|r| r.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    let ker = linalg::nullspace(&diffs, n);
    if ker.len() != 1 {
        return None;
    }
    let mut w = ker.into_iter().next().unwrap();
    let mut d = linalg::dot(&w, first);
    if d < 0 {
        w.iter_mut().for_each(|x| *x = -*x);
        d = -d;
    }
    Some((w, d))
}

pub fn radial_type(f: &MixedPolynomial) -> Option<RadialType> {
    let rows: Vec<Vec<i64>> = f.terms().iter().map(MixedMonomial::point).collect();
    let (q, d) = unique_ray(&rows, f.nvars())?;
    let q = WeightVector::new(q);
    (d > 0 && q.positivity() != Positivity::Mixed).then_some(RadialType { q, d_r: d })
}

pub fn polar_type(f: &MixedPolynomial) -> Option<PolarType> {
    let rows: Vec<Vec<i64>> = f.terms().iter().map(MixedMonomial::polar).collect();
    let (p, d) = unique_ray(&rows, f.nvars())?;
    (d != 0).then(|| PolarType { p: WeightVector::new(p), d_p: d })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateWeighted {
    /// Conjugated variables (0-based).
    pub j: Vec<usize>,
    pub weights: WeightVector,
    pub degree: i64,
}

/// Subsets of `0..n` ordered by size, then lexicographically.
fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> =
        (0u32..(1 << n)).map(|m| (0..n).filter(|j| m & (1 << j) != 0).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    all
}

/// Smallest `J` making `f ∘ ι_J` holomorphic and weighted homogeneous.
/// Exponential in `n`: every subset is tried.
pub fn conjugate_wh(f: &MixedPolynomial) -> Option<ConjugateWeighted> {
    if f.is_zero() {
        return None;
    }
    for j in ordered_subsets(f.nvars()) {
        let g = f.conjugate_vars(&j);
        if !g.is_holomorphic() {
            continue;
        }
        if let Some(rt) = radial_type(&g) {
            return Some(ConjugateWeighted { j, weights: rt.q, degree: rt.d_r });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoConjugate {
    /// Componentwise-minimal monomial `M` (coefficient one).
    pub monomial: MixedMonomial,
    pub conj: ConjugateWeighted,
    /// `f / M`.
    pub h: MixedPolynomial,
    /// `pdeg_{ι_J P}(f)`, nonzero on success.
    pub pdeg: i64,
}

pub fn pseudo_conjugate_wh(f: &MixedPolynomial) -> Option<PseudoConjugate> {
    let first = f.terms().first()?;
    let n = f.nvars();
    let mut nu = first.nu.clone();
    let mut mu = first.mu.clone();
    for t in f.terms() {
        for j in 0..n {
            nu[j] = nu[j].min(t.nu[j]);
            mu[j] = mu[j].min(t.mu[j]);
        }
    }
    let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let h = f.shift(&neg(&nu), &neg(&mu));
    let conj = conjugate_wh(&h)?;
    let p_conj = conj.weights.conjugate(&conj.j);
    let pdeg = f.polar_degree(&p_conj)?;
    (pdeg != 0).then(|| PseudoConjugate {
        monomial: MixedMonomial { coeff: GaussianRational::one(), nu, mu },
        conj,
        h,
        pdeg,
    })
}

/// `c z^m z̄^n ∏ (z₂^a z̄₂^{a′} − λ_j z₁^b z̄₁^{b′})^{mult_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodPolarFactorization {
    pub lead_coeff: GaussianRational,
    /// `(m, n)`: exponents of `z` and `z̄` in the monomial prefactor.
    pub pre_monomial: (Vec<i64>, Vec<i64>),
    pub k: usize,
    pub a: i64,
    pub a_pr: i64,
    pub b: i64,
    pub b_pr: i64,
    pub roots: Vec<(Complex64, usize)>,
}

impl GoodPolarFactorization {
    /// All roots simple, i.e. the face function is non-degenerate.
    pub fn is_nondegenerate(&self) -> bool {
        self.roots.iter().all(|r| r.1 == 1)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        let (m, n) = &self.pre_monomial;
        let pw = |x: Complex64, e: i64| x.powi(e as i32);
        let mut v = self.lead_coeff.to_complex();
        for j in 0..2 {
            v *= pw(z[j], m[j]) * pw(z[j].conj(), n[j]);
        }
        let x = pw(z[1], self.a) * pw(z[1].conj(), self.a_pr);
        let y = pw(z[0], self.b) * pw(z[0].conj(), self.b_pr);
        for &(l, mult) in &self.roots {
            v *= (x - l * y).powi(mult as i32);
        }
        v
    }
}

/// Factor a face function whose mixed face is one-dimensional. Laurent steps
/// (negative `b′` etc.) are accepted; the step is always primitive.
pub fn good_polar_factorization(f: &MixedPolynomial) -> Option<GoodPolarFactorization> {
    if f.nvars() != 2 || f.terms().len() < 2 {
        return None;
    }
    // Exponent vectors in the order (ν1, ν2, μ1, μ2).
    let v: Vec<[i64; 4]> =
        f.terms().iter().map(|t| [t.nu[0], t.nu[1], t.mu[0], t.mu[1]]).collect();
    let diff = |x: &[i64; 4], y: &[i64; 4]| -> Vec<i64> { (0..4).map(|i| x[i] - y[i]).collect() };
    let mut step = linalg::primitive(&diff(&v[1], &v[0]));
    // Step is (−b, a, −b′, a′); orient so the z₂ degree a + a′ grows.
    let (mut a, mut a_pr) = (step[1], step[3]);
    if a + a_pr == 0 {
        return None;
    }
    if a + a_pr < 0 {
        step.iter_mut().for_each(|x| *x = -*x);
        a = -a;
        a_pr = -a_pr;
    }
    let (b, b_pr) = (-step[0], -step[2]);
    if a == a_pr || b == b_pr {
        return None;
    }
    let pivot = (0..4).find(|&i| step[i] != 0).unwrap();
    let mut pos = Vec::with_capacity(v.len());
    for x in &v {
        let d = diff(x, &v[0]);
        let s = d[pivot] / step[pivot];
        if (0..4).any(|i| d[i] != s * step[i]) {
            return None;
        }
        pos.push(s);
    }
    let s_min = *pos.iter().min().unwrap();
    let s_max = *pos.iter().max().unwrap();
    let k = (s_max - s_min) as usize;
    let mut coeffs = vec![GaussianRational::zero(); k + 1];
    for (t, &s) in f.terms().iter().zip(&pos) {
        coeffs[(s - s_min) as usize] = t.coeff.clone();
    }
    let base = v[pos.iter().position(|&s| s == s_min).unwrap()];
    let kk = k as i64;
    let pre_monomial = (vec![base[0] - kk * b, base[1]], vec![base[2] - kk * b_pr, base[3]]);
    let lead_coeff = coeffs[k].clone();
    let roots = UPoly::new(coeffs).roots();
    Some(GoodPolarFactorization { lead_coeff, pre_monomial, k, a, a_pr, b, b_pr, roots })
}

/// `μ₁ ≠ ν₁` and `μ₂ ≠ ν₂`.
pub fn is_polar_admissible(m: &MixedMonomial) -> bool {
    m.nu.len() == 2 && m.nu[0] != m.mu[0] && m.nu[1] != m.mu[1]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialData {
    /// Rows `ν_j + μ_j`.
    pub m_matrix: Vec<Vec<i64>>,
    /// Rows `ν_j − μ_j`.
    pub n_matrix: Vec<Vec<i64>>,
    pub det_n_abs: i64,
    /// `g(z) = Σ c_j z^{ν_j − μ_j}`, a holomorphic Laurent polynomial.
    pub laurent_g: MixedPolynomial,
}

pub fn simplicial_check(f: &MixedPolynomial) -> Option<SimplicialData> {
    let n = f.nvars();
    if f.terms().len() != n || n == 0 {
        return None;
    }
    let m_matrix: Vec<Vec<i64>> = f.terms().iter().map(MixedMonomial::point).collect();
    let n_matrix: Vec<Vec<i64>> = f.terms().iter().map(MixedMonomial::polar).collect();
    let det_m = linalg::det(&m_matrix);
    let det_n = linalg::det(&n_matrix);
    if det_m == 0 || det_n == 0 {
        return None;
    }
    let laurent_g = MixedPolynomial::from_terms(
        n,
        f.terms().iter().map(|t| (t.coeff.clone(), t.polar(), vec![0; n])),
    );
    Some(SimplicialData { m_matrix, n_matrix, det_n_abs: det_n.abs(), laurent_g })
}

/// For a curve with simple end vertices: each end monomial is free of the
/// other variable or is polar admissible. This is the exact criterion for
/// super strong non-degeneracy of polar weighted curves.
pub fn end_monomials_admissible(f: &MixedPolynomial) -> Result<bool> {
    let b = newton::boundary2d(f)?;
    let ends = [(&b.vertices[0], 1usize), (b.vertices.last().unwrap(), 0usize)];
    for (v, other) in ends {
        if !v.is_simple() {
            return precondition(format!("end vertex {:?} is not simple", v.point));
        }
        let t = &f.terms()[v.term_indices[0]];
        let pure = t.nu[other] == 0 && t.mu[other] == 0;
        if !pure && !is_polar_admissible(t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteConeData {
    pub coeffs: Vec<GaussianRational>,
    pub exps: Vec<i64>,
    /// Whether `0 ∈ {Σ α_j c_j : α_j > 0}`.
    pub zero_in_open_cone: bool,
}

/// `f = Σ c_j |z_j|^{2 a_j}` with one term per variable.
pub fn absolute_cone(f: &MixedPolynomial) -> Option<AbsoluteConeData> {
    let n = f.nvars();
    if f.terms().len() != n {
        return None;
    }
    let mut coeffs = vec![GaussianRational::zero(); n];
    let mut exps = vec![0; n];
    for t in f.terms() {
        if t.nu != t.mu {
            return None;
        }
        let vars: Vec<usize> = (0..n).filter(|&j| t.nu[j] != 0).collect();
        if vars.len() != 1 || t.nu[vars[0]] < 0 || exps[vars[0]] != 0 {
            return None;
        }
        coeffs[vars[0]] = t.coeff.clone();
        exps[vars[0]] = t.nu[vars[0]];
    }
    let zero_in_open_cone = zero_in_open_cone(&coeffs);
    Some(AbsoluteConeData { coeffs, exps, zero_in_open_cone })
}

/// Exact test for `Σ α_j c_j = 0` with all `α_j > 0`: by Stiemke's lemma this
/// fails iff some functional is `≥ 0` on every `c_j` and positive on one. In
/// the plane such a functional can be taken along or orthogonal to some `c_j`.
fn zero_in_open_cone(c: &[GaussianRational]) -> bool {
    let dot = |l: &(BigRational, BigRational), x: &GaussianRational| &l.0 * &x.re + &l.1 * &x.im;
    let mut cands = Vec::new();
    for x in c {
        for (u, v) in [(x.re.clone(), x.im.clone()), (-x.im.clone(), x.re.clone())] {
            cands.push((u.clone(), v.clone()));
            cands.push((-u, -v));
        }
    }
    !cands.iter().any(|l| {
        let vals: Vec<BigRational> = c.iter().map(|x| dot(l, x)).collect();
        vals.iter().all(|v| !v.is_negative()) && vals.iter().any(|v| !v.is_zero())
    })
}
