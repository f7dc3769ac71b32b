//! Link component numbers, Euler characteristics, monodromy zeta functions
//! and Milnor numbers of mixed plane curves.
//!
//! Per-face link numbers `r*` come from an exact route when one applies and
//! from [`lkn_numeric`] otherwise. Everything downstream of the face records
//! is exact integer arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{self, GoodPolarFactorization, SimplicialData};
use crate::error::{precondition, Error, Result};
use crate::eval::Jet;
use crate::linalg::gcd;
use crate::mixedpoly::{MixedPolynomial, WeightVector};
use crate::newton;

/// `∏ (1 − t^d)^e`, kept canonical: sorted by `d`, merged, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZetaFunction {
    factors: BTreeMap<u64, i64>,
}

impl ZetaFunction {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factor(d: u64, e: i64) -> Result<Self> {
        Self::from_factors([(d, e)])
    }

    pub fn from_factors(it: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut z = Self::one();
        for (d, e) in it {
            if d == 0 {
                return precondition("zeta factor (1 - t^0) vanishes identically");
            }
            *z.factors.entry(d).or_insert(0) += e;
        }
        z.factors.retain(|_, e| *e != 0);
        Ok(z)
    }

    pub fn factors(&self) -> Vec<(u64, i64)> {
        self.factors.iter().map(|(&d, &e)| (d, e)).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_factors(self.factors().into_iter().chain(o.factors())).expect("degrees are positive")
    }

    /// Degree of `ζ(t)(1 − t)`.
    pub fn char_poly_degree(&self) -> i64 {
        1 + self.factors.iter().map(|(&d, &e)| d as i64 * e).sum::<i64>()
    }

    /// Coefficients (increasing degree) of `ζ(t)(1 − t)`, which must be a
    /// polynomial.
    pub fn char_poly(&self) -> Result<Vec<i64>> {
        let overflow = || Error::Precondition("characteristic polynomial coefficients overflow".into());
        let mut p: Vec<i64> = vec![1, -1];
        for (&d, &e) in &self.factors {
            for _ in 0..e.max(0) {
                let mut q = vec![0i64; p.len() + d as usize];
                for (i, &c) in p.iter().enumerate() {
                    q[i] = q[i].checked_add(c).ok_or_else(overflow)?;
                    q[i + d as usize] = q[i + d as usize].checked_sub(c).ok_or_else(overflow)?;
                }
                p = q;
            }
        }
        for (&d, &e) in &self.factors {
            let d = d as usize;
            for _ in 0..(-e).max(0) {
                // p = q (1 − t^d)  ⇔  q_i = p_i + q_{i−d}.
                if p.len() <= d {
                    return precondition(format!("zeta function {self} times (1-t) is not a polynomial"));
                }
                let mut q = vec![0i64; p.len() - d];
                for i in 0..q.len() {
                    let back = if i >= d { q[i - d] } else { 0 };
                    q[i] = p[i].checked_add(back).ok_or_else(overflow)?;
                }
                let ok = (q.len()..p.len()).all(|i| p[i] == -q[i - d]);
                if !ok {
                    return precondition(format!("zeta function {self} times (1-t) is not a polynomial"));
                }
                p = q;
            }
        }
        while p.len() > 1 && p.last() == Some(&0) {
            p.pop();
        }
        Ok(p)
    }
}

/// Factors with positive exponent first, each group in increasing `d`:
/// `(1-t^6)(1-t^2)^-1(1-t^3)^-1`.
impl fmt::Display for ZetaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let pos = self.factors.iter().filter(|(_, &e)| e > 0);
        let neg = self.factors.iter().filter(|(_, &e)| e < 0);
        for (&d, &e) in pos.chain(neg) {
            if d == 1 {
                write!(f, "(1-t)")?;
            } else {
                write!(f, "(1-t^{d})")?;
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Coefficients in increasing degree, rendered like `1 - t + t^2`.
pub fn format_poly(c: &[i64]) -> String {
    let mut out = String::new();
    for (i, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mag = a.unsigned_abs();
        if out.is_empty() {
            if a < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if a < 0 { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        if i == 0 || mag != 1 {
            out.push_str(&mag.to_string());
            if i > 0 {
                out.push('*');
            }
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Link components of an irreducible binomial `z₂^a z̄₂^{a′} − λ z₁^b z̄₁^{b′}`
/// off the axes: `gcd(b − b′, a − a′)`.
pub fn lkn_star_binomial(a: i64, a_pr: i64, b: i64, b_pr: i64) -> Result<i64> {
    let (c1, c2) = (b - b_pr, a - a_pr);
    if c1 == 0 || c2 == 0 {
        return precondition("binomial is not polar weighted (a = a' or b = b')");
    }
    Ok(gcd(c1, c2))
}

/// `k · gcd(a − a′, b − b′)` for a factorization with simple roots.
pub fn lkn_star_good(fac: &GoodPolarFactorization) -> Result<i64> {
    if !fac.is_nondegenerate() {
        return precondition("repeated root in the factorization: the face is degenerate");
    }
    Ok(fac.k as i64 * lkn_star_binomial(fac.a, fac.a_pr, fac.b, fac.b_pr)?)
}

/// Number of circles `{(x, y) ∈ T² : x^a y^b = 1}`.
pub fn circle_components(a: i64, b: i64) -> Result<i64> {
    if a == 0 && b == 0 {
        return precondition("(a, b) = (0, 0)");
    }
    Ok(gcd(a, b))
}

/// `(1 − t^{d_p})^{(−1)^n |det N| / d_p}` for a simplicial polar weighted
/// polynomial.
pub fn zeta_simplicial(sd: &SimplicialData, n: usize, d_p: i64) -> Result<ZetaFunction> {
    if d_p <= 0 {
        return precondition("polar degree must be positive");
    }
    if sd.det_n_abs % d_p != 0 {
        return precondition(format!("|det N| = {} is not divisible by d_p = {d_p}", sd.det_n_abs));
    }
    let e = sd.det_n_abs / d_p;
    ZetaFunction::factor(d_p as u64, if n % 2 == 0 { e } else { -e })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `k · gcd` from an exact good polar factorization.
    GcdFormula,
    /// Lattice length of a pseudo-conjugate face.
    FactorCount,
    /// `|det N| / d_p` for a simplicial face.
    DetFormula,
    /// Slice continuation.
    Tracker,
    /// Sum over the faces of the Newton boundary.
    FaceFormula,
    /// Closed forms for a globally good polar weighted polynomial.
    ClosedForm,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::GcdFormula => "gcd_formula",
            Route::FactorCount => "factor_count",
            Route::DetFormula => "det_formula",
            Route::Tracker => "tracker",
            Route::FaceFormula => "face_formula",
            Route::ClosedForm => "closed_form",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarFiberData {
    pub chi_f_star: i64,
    pub chi_f: i64,
    pub zeta: ZetaFunction,
}

/// Euler characteristics and zeta function of a polar weighted curve from its
/// link number off the axes. End monomials off an axis drop out.
pub fn chi_zeta_polar(f: &MixedPolynomial, r_star: i64) -> Result<PolarFiberData> {
    let Some(pt) = classify::polar_type(f) else {
        return precondition("not polar weighted");
    };
    let (a1, a2) = newton::polar_sections(f)?;
    let b = newton::boundary2d(f)?;
    for v in [&b.vertices[0], b.vertices.last().unwrap()] {
        if !v.is_simple() {
            return precondition(format!("end vertex {} is not simple", point_str(&v.point)));
        }
    }
    let chi_f_star = -r_star * pt.d_p;
    let (chi_f, zeta) = assemble(&[(pt.d_p, r_star)], a1, a2)?;
    debug_assert_eq!(chi_f, chi_f_star + a1.map_or(0, i64::abs) + a2.map_or(0, i64::abs));
    Ok(PolarFiberData { chi_f_star, chi_f, zeta })
}

/// `χ(F)` and `ζ` from per-face `(m_i, r*_i)` and the polar sections.
fn assemble(faces: &[(i64, i64)], a1: Option<i64>, a2: Option<i64>) -> Result<(i64, ZetaFunction)> {
    let mut chi = 0;
    let mut factors: Vec<(u64, i64)> = Vec::new();
    for &(m, r) in faces {
        chi -= r * m;
        factors.push((m as u64, r));
    }
    for a in [a1, a2].into_iter().flatten() {
        if a == 0 {
            return precondition("polar section is zero");
        }
        chi += a.abs();
        factors.push((a.unsigned_abs(), -1));
    }
    Ok((chi, ZetaFunction::from_factors(factors)?))
}

fn point_str(p: &[i64]) -> String {
    format!("({},{})", p[0], p[1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkConfig {
    pub steps: usize,
    pub seed: u64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self { steps: 2048, seed: 0 }
    }
}

/// One compact edge of `Γ(f)` with its link and Euler data.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceRecord {
    pub index: usize,
    pub weight: WeightVector,
    pub d_value: i64,
    pub endpoints: [Vec<i64>; 2],
    pub face_function: MixedPolynomial,
    /// Polar weight, normalized to positive polar degree. `None` when
    /// the face function is not polar weighted.
    pub polar_weight: Option<WeightVector>,
    /// Polar degree `m`.
    pub m: Option<i64>,
    pub r_star: i64,
    pub r_route: Route,
    /// `r*` from the determinant route when the face is simplicial.
    pub r_star_det: Option<i64>,
    /// `χ(F*) = −r* m`, when `m > 0`.
    pub chi_star: Option<i64>,
}

impl FaceRecord {
    /// `(a,b)-(c,d)` with endpoints in increasing order.
    pub fn name(&self) -> String {
        format!("{}-{}", point_str(&self.endpoints[0]), point_str(&self.endpoints[1]))
    }
}

/// Exact `r*` of a face function when it is good or pseudo-conjugate.
pub fn lkn_star_exact(f_face: &MixedPolynomial) -> Result<Option<(i64, Route)>> {
    if let Some(fac) = classify::good_polar_factorization(f_face) {
        return Ok(Some((lkn_star_good(&fac)?, Route::GcdFormula)));
    }
    if let Some(pc) = classify::pseudo_conjugate_wh(f_face) {
        let pts = pc.h.support_points();
        let (lo, hi) = (pts.iter().min().unwrap(), pts.iter().max().unwrap());
        return Ok(Some((gcd(hi[0] - lo[0], hi[1] - lo[1]), Route::FactorCount)));
    }
    Ok(None)
}

fn det_route(f_face: &MixedPolynomial, m: i64) -> Option<i64> {
    let sd = classify::simplicial_check(f_face)?;
    (m > 0 && sd.det_n_abs % m == 0).then_some(sd.det_n_abs / m)
}

/// Records for every compact edge. Polar data is filled in where it exists;
/// `r*` is computed for every face.
pub fn face_records(f: &MixedPolynomial, cfg: &LinkConfig) -> Result<Vec<FaceRecord>> {
    let b = newton::boundary2d(f)?;
    let mut out = Vec::new();
    for (index, e) in b.edges.iter().enumerate() {
        let ff = newton::terms_on(f, e);
        let ends = e.vertices();
        let endpoints = [ends[0].point.clone(), ends[1].point.clone()];
        let pt = classify::polar_type(&ff);
        let m = pt.as_ref().map(|t| t.d_p);
        let (r_star, r_route) = match lkn_star_exact(&ff)? {
            Some(x) => x,
            None => {
                let tr = lkn_numeric(&ff, cfg.steps, cfg.seed)?;
                (tr.cycles as i64, Route::Tracker)
            }
        };
        out.push(FaceRecord {
            index,
            weight: e.weight.clone(),
            d_value: e.d_value,
            endpoints,
            r_star_det: m.and_then(|m| det_route(&ff, m)),
            polar_weight: pt.map(|t| t.p),
            m,
            r_star,
            r_route,
            chi_star: m.filter(|&m| m > 0).map(|m| -r_star * m),
            face_function: ff,
        });
    }
    Ok(out)
}

fn check_vertices(f: &MixedPolynomial) -> Result<newton::NewtonBoundary2D> {
    let b = newton::boundary2d(f)?;
    if let Some(v) = b.first_multiple_vertex() {
        return precondition(format!(
            "vertex {} is a multiple vertex ({} terms)",
            point_str(&v.point),
            v.term_indices.len()
        ));
    }
    Ok(b)
}

/// Inner vertices of `Γ(f)` must carry polar admissible monomials.
fn check_inner_vertices(f: &MixedPolynomial, b: &newton::NewtonBoundary2D) -> Result<()> {
    for v in &b.vertices[1..b.vertices.len() - 1] {
        let t = &f.terms()[v.term_indices[0]];
        if !classify::is_polar_admissible(t) {
            return precondition(format!("inner vertex {} is not polar admissible", point_str(&v.point)));
        }
    }
    Ok(())
}

/// Polar degrees of the edges of `Γ(f)`, which must all be positive, paired
/// with the `r*` of the matching record.
fn polar_face_data(f: &MixedPolynomial, faces: &[FaceRecord]) -> Result<Vec<(i64, i64)>> {
    let b = newton::boundary2d(f)?;
    let mut out = Vec::new();
    for e in &b.edges {
        let ends = e.vertices();
        let name = format!("{}-{}", point_str(&ends[0].point), point_str(&ends[1].point));
        match classify::polar_type(&newton::terms_on(f, e)) {
            None => return precondition(format!("face {name} is not polar weighted")),
            Some(t) => out.push((name, t.d_p)),
        }
    }
    check_inner_vertices(f, &b)?;
    if faces.len() != out.len() {
        return precondition(format!("{} face records for {} edges", faces.len(), out.len()));
    }
    out.into_iter()
        .zip(faces)
        .map(|((name, m), r)| {
            if r.name() != name {
                return precondition(format!("face record {} does not match edge {name}", r.name()));
            }
            Ok((m, r.r_star))
        })
        .collect()
}

/// `χ(F)` and `ζ(t)` by summing face contributions; a missing axis vertex
/// removes its polar section from both.
pub fn zeta_from_faces(f: &MixedPolynomial, faces: &[FaceRecord]) -> Result<(i64, ZetaFunction)> {
    let data = polar_face_data(f, faces)?;
    let (a1, a2) = newton::polar_sections(f)?;
    assemble(&data, a1, a2)
}

/// `Σ r_j m_j − |a₁| − |a₂| + 1`.
pub fn milnor_from_faces(f: &MixedPolynomial, faces: &[FaceRecord]) -> Result<i64> {
    let data = polar_face_data(f, faces)?;
    let (a1, a2) = newton::polar_sections(f)?;
    let s: i64 = data.iter().map(|(m, r)| r * m).sum();
    Ok(s - a1.map_or(0, i64::abs) - a2.map_or(0, i64::abs) + 1)
}

/// Coordinate axes contained in `f⁻¹(0)`.
fn axis_components(f: &MixedPolynomial) -> usize {
    (0..2).filter(|&j| f.restrict(&[j]).is_zero()).count()
}

/// `lkn(C, O)` as the sum of `r*` over the edges plus contained axes. All
/// vertices must be simple.
pub fn lkn_total(f: &MixedPolynomial, cfg: &LinkConfig) -> Result<(i64, Vec<FaceRecord>)> {
    check_vertices(f)?;
    let faces = face_records(f, cfg)?;
    let s = faces.iter().map(|r| r.r_star).sum::<i64>() + axis_components(f) as i64;
    Ok((s, faces))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForms {
    pub polar_weight: WeightVector,
    pub d_p: i64,
    pub lkn: i64,
    pub mu: i64,
    pub zeta: ZetaFunction,
}

/// Closed forms for `f = c ∏_{j≤k} (z₂^a |z₂|^{2a′} − λ_j z₁^b |z₁|^{2b′})`
/// with distinct `λ_j`. Here `a, b` are the polar exponents.
pub fn good_polar_closed_forms(f: &MixedPolynomial) -> Result<ClosedForms> {
    let Some(fac) = classify::good_polar_factorization(f) else {
        return precondition("not a good polar weighted polynomial");
    };
    if fac.pre_monomial.0.iter().chain(&fac.pre_monomial.1).any(|&e| e != 0) {
        return precondition("factorization has a monomial prefactor");
    }
    if !fac.is_nondegenerate() {
        return precondition("repeated root in the factorization");
    }
    let (a, b) = (fac.a - fac.a_pr, fac.b - fac.b_pr);
    if a == 0 || b == 0 {
        return precondition("a zero polar exponent");
    }
    let k = fac.k as i64;
    let r = gcd(a, b);
    let p = WeightVector::new(vec![b.signum() * a.abs() / r, a.signum() * b.abs() / r]);
    let d_p = a.abs() * b.abs() * k / r;
    let mu = (k * a.abs() - 1) * (k * b.abs() - 1);
    let zeta = ZetaFunction::from_factors([
        (d_p as u64, r * k),
        ((k * a.abs()) as u64, -1),
        ((k * b.abs()) as u64, -1),
    ])?;
    Ok(ClosedForms { polar_weight: p, d_p, lkn: r * k, mu, zeta })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Routes {
    pub lkn: Route,
    pub chi_f: Route,
    pub mu: Route,
    pub zeta: Route,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveInvariants {
    pub per_face: Vec<FaceRecord>,
    pub a1_abs: Option<i64>,
    pub a2_abs: Option<i64>,
    pub lkn: i64,
    pub chi_f: i64,
    pub mu: i64,
    pub zeta: ZetaFunction,
    pub char_poly: Vec<i64>,
    pub routes: Routes,
    pub closed_forms: Option<ClosedForms>,
    pub warnings: Vec<String>,
}

/// Link number, Euler characteristic, Milnor number and zeta function of a
/// mixed curve with simple vertices and polar weighted faces. The three
/// routes to `μ` are checked against each other.
pub fn curve_invariants(f: &MixedPolynomial, cfg: &LinkConfig) -> Result<CurveInvariants> {
    if f.nvars() != 2 {
        return precondition("curve invariants need n = 2");
    }
    check_vertices(f)?;
    let per_face = face_records(f, cfg)?;
    let (chi_f, zeta) = zeta_from_faces(f, &per_face)?;
    let mu = milnor_from_faces(f, &per_face)?;
    let char_poly = zeta.char_poly()?;
    if mu != 1 - chi_f || mu != char_poly.len() as i64 - 1 {
        return Err(Error::Precondition(format!(
            "inconsistent invariants: mu = {mu}, 1 - chi = {}, deg P1 = {}",
            1 - chi_f,
            char_poly.len() as i64 - 1
        )));
    }
    let mut warnings = Vec::new();
    for r in &per_face {
        if let Some(d) = r.r_star_det {
            if d != r.r_star {
                warnings.push(format!("face {}: determinant route gives r* = {d}, {} gives {}", r.index, r.r_route.name(), r.r_star));
            }
        }
    }
    let lkn = per_face.iter().map(|r| r.r_star).sum::<i64>() + axis_components(f) as i64;
    let lkn_route = match per_face.iter().any(|r| r.r_route == Route::Tracker) {
        true => Route::Tracker,
        false => Route::FaceFormula,
    };
    let closed_forms = good_polar_closed_forms(f).ok();
    if let Some(c) = &closed_forms {
        if c.mu != mu || c.zeta != zeta || c.lkn != lkn {
            warnings.push(format!(
                "closed forms disagree: mu {} vs {mu}, zeta {} vs {zeta}, lkn {} vs {lkn}",
                c.mu, c.zeta, c.lkn
            ));
        }
    }
    let (a1, a2) = newton::polar_sections(f)?;
    Ok(CurveInvariants {
        per_face,
        a1_abs: a1.map(i64::abs),
        a2_abs: a2.map(i64::abs),
        lkn,
        chi_f,
        mu,
        zeta,
        char_poly,
        routes: Routes { lkn: lkn_route, chi_f: Route::FaceFormula, mu: Route::FaceFormula, zeta: Route::FaceFormula },
        closed_forms,
        warnings,
    })
}

// Slice continuation.

#[derive(Clone, Debug, PartialEq)]
pub struct TrackerResult {
    /// Off-axis roots `z₁` of `f(z₁, 1) = 0`, in seeding order.
    pub solutions_at_zero: Vec<Complex64>,
    /// `permutation[i]`: index of the root reached from root `i` after one
    /// loop of `z₂` around the unit circle.
    pub permutation: Vec<usize>,
    /// Cycles of `permutation`: link components off the axes.
    pub cycles: usize,
    /// Coordinate axes contained in the curve.
    pub axis_components: usize,
    pub steps_used: usize,
    /// Refinements that were needed before the run succeeded.
    pub failures: Vec<String>,
}

impl TrackerResult {
    pub fn lkn(&self) -> usize {
        self.cycles + self.axis_components
    }
}

struct Slice {
    jet: Jet,
    /// `log |z₁|` range for grid seeding.
    rho: (f64, f64),
}

/// Value and Wirtinger derivatives in `z₁` along the slice, plus `d/da`.
struct SliceValue {
    v: Complex64,
    scale: f64,
    a: Complex64,
    b: Complex64,
    da: Complex64,
}

/// Solve `A δ + B δ̄ = r`.
fn solve_real_linear(a: Complex64, b: Complex64, r: Complex64) -> Option<Complex64> {
    let det = a.norm_sqr() - b.norm_sqr();
    let size = a.norm_sqr() + b.norm_sqr();
    if det.abs() <= 1e-13 * size || size == 0.0 {
        return None;
    }
    Some((r * a.conj() - b * r.conj()) / det)
}

impl Slice {
    fn new(f: &MixedPolynomial) -> Self {
        // Balance radii |c_k| r^{e_k} = |c_l| r^{e_l} bracket the root moduli.
        let groups: Vec<(i64, f64)> =
            f.terms().iter().map(|t| (t.nu[0] + t.mu[0], t.coeff.to_complex().norm().ln())).collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &(e1, c1)) in groups.iter().enumerate() {
            for &(e2, c2) in &groups[i + 1..] {
                if e1 != e2 {
                    let r = (c1 - c2) / (e2 - e1) as f64;
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
            }
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 0.0);
        }
        Self { jet: Jet::new(f), rho: (lo - 3.0, hi + 3.0) }
    }

    fn at(&self, z1: Complex64, a: f64) -> SliceValue {
        let w = Complex64::from_polar(1.0, a);
        let v = self.jet.eval(&[z1, w]);
        let i = Complex64::new(0.0, 1.0);
        SliceValue { v: v.f, scale: v.scale, a: v.dz[0], b: v.dzb[0], da: i * w * v.dz[1] - i * w.conj() * v.dzb[1] }
    }

    fn newton(&self, mut z: Complex64, a: f64, iters: usize) -> Option<Complex64> {
        for _ in 0..iters {
            let s = self.at(z, a);
            let d = solve_real_linear(s.a, s.b, -s.v)?;
            z += d;
            if !z.re.is_finite() || !z.im.is_finite() {
                return None;
            }
            if d.norm() <= 1e-14 * (1.0 + z.norm()) {
                let s = self.at(z, a);
                return (s.v.norm() <= 1e-10 * s.scale.max(f64::MIN_POSITIVE)).then_some(z);
            }
        }
        let s = self.at(z, a);
        (s.v.norm() <= 1e-10 * s.scale.max(f64::MIN_POSITIVE)).then_some(z)
    }

    /// Off-axis roots at angle `a` from a log-polar grid of Newton starts.
    fn seed(&self, a: f64, radii: usize, angles: usize, phase: f64) -> Vec<Complex64> {
        let mut roots: Vec<Complex64> = Vec::new();
        for i in 0..radii {
            let rho = self.rho.0 + (self.rho.1 - self.rho.0) * (i as f64 + 0.5) / radii as f64;
            for k in 0..angles {
                let phi = phase + std::f64::consts::TAU * k as f64 / angles as f64;
                let Some(z) = self.newton(Complex64::from_polar(rho.exp(), phi), a, 60) else { continue };
                if z.norm() < 1e-8 {
                    continue;
                }
                if roots.iter().all(|r| (r - z).norm() > 1e-7 * (1.0 + z.norm())) {
                    roots.push(z);
                }
            }
        }
        roots
    }

    /// Real Jacobian of `(Re f, Im f)` in `(x, y, a)`, with the value.
    fn jacobian(&self, z: Complex64, a: f64) -> (SliceValue, [[f64; 3]; 2]) {
        let s = self.at(z, a);
        let fx = s.a + s.b;
        let fy = Complex64::new(0.0, 1.0) * (s.a - s.b);
        let j = [[fx.re, fy.re, s.da.re], [fx.im, fy.im, s.da.im]];
        (s, j)
    }

    /// Unit tangent `∇Re f × ∇Im f`, which orients every component.
    fn tangent(&self, z: Complex64, a: f64) -> Option<[f64; 3]> {
        let (_, [r, q]) = self.jacobian(z, a);
        let t = [r[1] * q[2] - r[2] * q[1], r[2] * q[0] - r[0] * q[2], r[0] * q[1] - r[1] * q[0]];
        let n = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
        (n > 0.0 && n.is_finite()).then(|| [t[0] / n, t[1] / n, t[2] / n])
    }

    /// Minimum-norm Newton back onto the curve.
    fn correct(&self, mut z: Complex64, mut a: f64, iters: usize) -> Option<(Complex64, f64)> {
        for _ in 0..iters {
            let (s, [r, q]) = self.jacobian(z, a);
            let g = [[dot3(&r, &r), dot3(&r, &q)], [dot3(&r, &q), dot3(&q, &q)]];
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            if det.abs() <= 1e-26 * (g[0][0] * g[1][1]).max(f64::MIN_POSITIVE) {
                return None;
            }
            let l0 = (g[1][1] * s.v.re - g[0][1] * s.v.im) / det;
            let l1 = (g[0][0] * s.v.im - g[1][0] * s.v.re) / det;
            let d: Vec<f64> = (0..3).map(|k| -(r[k] * l0 + q[k] * l1)).collect();
            z += Complex64::new(d[0], d[1]);
            a += d[2];
            if !(z.re.is_finite() && z.im.is_finite() && a.is_finite()) {
                return None;
            }
            if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() <= 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        let s = self.at(z, a);
        (s.v.norm() <= 1e-10 * s.scale.max(f64::MIN_POSITIVE)).then_some((z, a))
    }

    /// Solve on the plane `a = plane` starting from `z`.
    fn on_plane(&self, z: Complex64, plane: f64) -> Option<Complex64> {
        self.newton(z, plane, 30)
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn count_cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

fn matches(z: Complex64, w: Complex64) -> bool {
    (z - w).norm() <= 1e-6 * (1.0 + z.norm())
}

/// Follow the oriented curve from `start` at `a = 0` to its first return to a
/// plane `a ∈ 2πZ`. Crossings of the planes `a ∈ π + 2πZ` are appended to
/// `mid`.
fn first_return(
    sl: &Slice,
    start: Complex64,
    hmax: f64,
    max_steps: usize,
    mid: &mut Vec<Complex64>,
) -> std::result::Result<Complex64, String> {
    use std::f64::consts::PI;
    let (mut z, mut a) = (start, 0.0);
    let mut t = sl.tangent(z, a).ok_or("singular point on the slice curve")?;
    let mut h = hmax / 4.0;
    for _ in 0..max_steps {
        let pz = z + Complex64::new(h * t[0], h * t[1]);
        let pa = a + h * t[2];
        let next = sl.correct(pz, pa, 6).and_then(|(cz, ca)| {
            let moved = ((cz - pz).norm_sqr() + (ca - pa).powi(2)).sqrt();
            let tn = sl.tangent(cz, ca)?;
            (moved <= 0.25 * h && dot3(&t, &tn) > 0.9).then_some((cz, ca, tn))
        });
        let Some((cz, ca, tn)) = next else {
            h /= 2.0;
            if h < 1e-12 * hmax {
                return Err(format!("step size underflow at a = {a:.6}"));
            }
            continue;
        };
        // Planes strictly crossed by the chord, in order of travel.
        let (lo, hi) = if ca > a { (a, ca) } else { (ca, a) };
        let mut planes: Vec<(f64, bool)> = Vec::new();
        let mut k = (lo / PI).floor() as i64 + 1;
        while (k as f64) * PI <= hi {
            let pl = k as f64 * PI;
            if pl != a {
                planes.push((pl, k % 2 == 0));
            }
            k += 1;
        }
        if ca < a {
            planes.reverse();
        }
        for (pl, is_zero) in planes {
            let s = (pl - a) / (ca - a);
            let guess = z + (cz - z) * s;
            let w = sl.on_plane(guess, pl).ok_or_else(|| format!("lost the crossing of a = {pl:.6}"))?;
            if is_zero {
                return Ok(w);
            }
            mid.push(w);
        }
        z = cz;
        a = ca;
        t = tn;
        h = (h * 1.5).min(hmax);
    }
    Err("no return to the plane a = 0 within the step budget".into())
}

fn track_once(sl: &Slice, steps: usize, seed: u64, grid: usize) -> std::result::Result<TrackerResult, String> {
    use std::f64::consts::{PI, TAU};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase = rng.gen_range(0.0..TAU / grid as f64);
    let start = sl.seed(0.0, grid, grid, phase);
    for i in 0..start.len() {
        for j in i + 1..start.len() {
            if matches(start[i], start[j]) {
                return Err(format!("seed roots {i} and {j} within 1e-6"));
            }
        }
    }
    let scale = start.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let hmax = TAU * scale / steps as f64;
    let mut mid = Vec::new();
    let mut perm = Vec::with_capacity(start.len());
    for (i, &z0) in start.iter().enumerate() {
        let end = first_return(sl, z0, hmax, 64 * steps, &mut mid).map_err(|e| format!("path {i}: {e}"))?;
        let hits: Vec<usize> = (0..start.len()).filter(|&j| matches(start[j], end)).collect();
        match hits.as_slice() {
            [j] => perm.push(*j),
            [] => return Err(format!("path {i} returns to a root that was not seeded")),
            _ => return Err(format!("path {i} returns ambiguously")),
        }
    }
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != perm.len() {
        return Err("first-return map is not a bijection".into());
    }
    let check = sl.seed(PI, grid, grid, phase);
    let covered = check.iter().all(|w| mid.iter().any(|m| matches(*w, *m)));
    if check.len() != mid.len() || !covered {
        return Err(format!(
            "root count changed: {} crossings of a = pi traced, {} roots found there",
            mid.len(),
            check.len()
        ));
    }
    Ok(TrackerResult {
        cycles: count_cycles(&perm),
        solutions_at_zero: start,
        permutation: perm,
        axis_components: 0,
        steps_used: steps,
        failures: Vec::new(),
    })
}

/// Link components of a radially weighted homogeneous curve by arclength
/// continuation of the slice curve `{(z₁, a) : f(z₁, e^{ia}) = 0}`, which may
/// fold back in `a`. The permutation is the first-return map on the roots at
/// `a = 0`. Components in
/// `{z₂ = 0}` are invisible to the slice; axes contained in the curve are
/// counted exactly and reported separately.
pub fn lkn_numeric(f: &MixedPolynomial, steps: usize, seed: u64) -> Result<TrackerResult> {
    if f.nvars() != 2 {
        return precondition("the tracker needs n = 2");
    }
    if steps < 8 {
        return precondition("steps must be at least 8");
    }
    let single_point = newton::support(f).len() == 1;
    if f.is_zero() || (!single_point && classify::radial_type(f).is_none()) {
        return precondition("the tracker needs a radially weighted homogeneous polynomial");
    }
    let axes = axis_components(f);
    if single_point {
        return Ok(TrackerResult {
            solutions_at_zero: vec![],
            permutation: vec![],
            cycles: 0,
            axis_components: axes,
            steps_used: steps,
            failures: vec![],
        });
    }
    let sl = Slice::new(f);
    let mut failures = Vec::new();
    let mut steps_now = steps;
    let mut grid = 48;
    for _ in 0..3 {
        match track_once(&sl, steps_now, seed, grid) {
            Ok(mut r) => {
                r.axis_components = axes;
                r.failures = failures;
                return Ok(r);
            }
            Err(e) => {
                failures.push(format!("steps {steps_now}: {e}"));
                steps_now *= 4;
                grid *= 2;
            }
        }
    }
    Err(Error::NonConvergence(failures.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse_with(s, Some(2)).unwrap()
    }

    fn zf(f: &[(u64, i64)]) -> ZetaFunction {
        ZetaFunction::from_factors(f.iter().copied()).unwrap()
    }

    #[test]
    fn zeta_display_and_poly() {
        let cusp = zf(&[(6, 1), (2, -1), (3, -1)]);
        assert_eq!(cusp.to_string(), "(1-t^6)(1-t^2)^-1(1-t^3)^-1");
        assert_eq!(cusp.char_poly().unwrap(), vec![1, -1, 1]);
        assert_eq!(format_poly(&cusp.char_poly().unwrap()), "1 - t + t^2");
        assert_eq!(ZetaFunction::one().to_string(), "1");
        assert_eq!(ZetaFunction::one().char_poly().unwrap(), vec![1, -1]);
        let l = zf(&[(1, 1)]);
        assert_eq!(l.to_string(), "(1-t)");
        assert_eq!(l.char_poly().unwrap(), vec![1, -2, 1]);
        assert_eq!(zf(&[(1, 3), (1, -2)]), l);
        assert_eq!(zf(&[(2, 2), (2, -2)]), ZetaFunction::one());
        assert!(zf(&[(2, -1)]).char_poly().is_err());
        assert!(ZetaFunction::factor(0, 1).is_err());
    }

    #[test]
    fn binomial_link_numbers() {
        assert_eq!(lkn_star_binomial(2, 0, 0, 2).unwrap(), 2);
        assert_eq!(lkn_star_binomial(2, 1, 2, 1).unwrap(), 1);
        assert_eq!(lkn_star_binomial(3, 0, 5, 0).unwrap(), 1);
        assert!(lkn_star_binomial(1, 1, 2, 0).is_err());
    }

    #[test]
    fn good_faces() {
        let mid = classify::good_polar_factorization(&p("zb1*z2*(z1^2 - zb2^2)")).unwrap();
        assert_eq!(lkn_star_good(&mid).unwrap(), 2);
        let lines = classify::good_polar_factorization(&p("(z2 - z1)*(z2 - 2z1)*(z2 + 3z1)")).unwrap();
        assert_eq!(lkn_star_good(&lines).unwrap(), 3);
        let sq = classify::good_polar_factorization(&p("(z2 - z1)^2")).unwrap();
        assert!(lkn_star_good(&sq).is_err());
    }

    #[test]
    fn circles() {
        assert_eq!(circle_components(2, 3).unwrap(), 1);
        assert_eq!(circle_components(4, 6).unwrap(), 2);
        assert_eq!(circle_components(0, 5).unwrap(), 5);
        assert!(circle_components(0, 0).is_err());
    }

    #[test]
    fn simplicial_zeta() {
        let sd = classify::simplicial_check(&p("z2^2*zb2 - z1^2*zb1")).unwrap();
        assert_eq!(zeta_simplicial(&sd, 2, 1).unwrap(), zf(&[(1, 1)]));
        let cusp = classify::simplicial_check(&p("z2^2 - z1^3")).unwrap();
        assert_eq!(zeta_simplicial(&cusp, 2, 6).unwrap(), zf(&[(6, 1)]));
        assert_eq!(zeta_simplicial(&cusp, 3, 6).unwrap(), zf(&[(6, -1)]));
        assert!(zeta_simplicial(&cusp, 2, 4).is_err());
    }

    #[test]
    fn polar_fiber_data() {
        let f3 = p("-2z1^2*zb1 + z2^2*zb2 + 3z1^2*zb2");
        let d = chi_zeta_polar(&f3, 3).unwrap();
        assert_eq!((d.chi_f_star, d.chi_f), (-3, -1));
        assert_eq!(d.zeta, zf(&[(1, 1)]));
        let f0 = p("-2z1^2*zb1 + z2^2*zb2");
        let d = chi_zeta_polar(&f0, 1).unwrap();
        assert_eq!((d.chi_f_star, d.chi_f), (-1, 1));
        let b = chi_zeta_polar(&p("z1^3 + z2^3"), 3).unwrap();
        assert_eq!((b.chi_f_star, b.chi_f), (-9, -3));
    }

    #[test]
    fn pipeline_on_cusp_and_brieskorn() {
        let cfg = LinkConfig::default();
        let c = curve_invariants(&p("z2^2 - z1^3"), &cfg).unwrap();
        assert_eq!((c.mu, c.chi_f, c.lkn), (2, -1, 1));
        assert_eq!(c.zeta.to_string(), "(1-t^6)(1-t^2)^-1(1-t^3)^-1");
        assert_eq!(c.char_poly, vec![1, -1, 1]);
        assert_eq!(c.per_face[0].r_route, Route::GcdFormula);
        assert_eq!(c.closed_forms.as_ref().unwrap().mu, 2);
        assert!(c.warnings.is_empty(), "{:?}", c.warnings);
        assert_eq!(curve_invariants(&p("z1^3 + z2^5"), &cfg).unwrap().mu, 8);
    }

    #[test]
    fn pipeline_with_tracker_face() {
        let c = curve_invariants(&p("-2z1^2*zb1 + z2^2*zb2 + 3z1^2*zb2"), &LinkConfig::default()).unwrap();
        assert_eq!(c.per_face.len(), 1);
        assert_eq!(c.per_face[0].r_route, Route::Tracker);
        assert_eq!((c.lkn, c.chi_f, c.mu), (3, -1, 2));
        assert_eq!(c.zeta.to_string(), "(1-t)");
        assert_eq!(c.per_face[0].chi_star, Some(-3));
    }

    #[test]
    fn refusals() {
        let cfg = LinkConfig::default();
        let f = p("z1^3 + 2z1^2*zb1 + z2^2");
        let e = zeta_from_faces(&f, &[]).unwrap_err();
        assert!(e.to_string().contains("face (0,2)-(3,0) is not polar weighted"), "{e}");
        assert!(curve_invariants(&f, &cfg).is_err());
        assert_eq!(face_records(&f, &cfg).unwrap()[0].m, None);
        let e = curve_invariants(&p("z1^3 + z1^2*zb1 + z2^2"), &cfg).unwrap_err();
        assert!(e.to_string().contains("vertex (3,0)"), "{e}");
    }

    #[test]
    fn closed_forms() {
        let c = good_polar_closed_forms(&p("z2^2 - z1^3")).unwrap();
        assert_eq!((c.d_p, c.lkn, c.mu), (6, 1, 2));
        assert_eq!(c.zeta, zf(&[(6, 1), (2, -1), (3, -1)]));
        // z2^2 - z1^2 |z1|^2 has polar exponents (2, 2).
        let c = good_polar_closed_forms(&p("z2^2 - z1^3*zb1")).unwrap();
        assert_eq!((c.d_p, c.lkn, c.mu), (2, 2, 1));
        assert_eq!(c.zeta, ZetaFunction::one());
        let c = good_polar_closed_forms(&p("(z2 - z1)*(z2 + z1)")).unwrap();
        assert_eq!(c.mu, 1);
        assert_eq!(c.zeta.char_poly_degree(), 1);
    }

    #[test]
    fn example_link_totals() {
        let cfg = LinkConfig::default();
        let (l, faces) = lkn_total(&p("z1^5 + zb1*z2*(z1^2 - zb2^2) + zb2^5"), &cfg).unwrap();
        assert_eq!(faces.iter().map(|r| r.r_star).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert_eq!(l, 4);
        assert_eq!(faces[1].m, None);
        assert_eq!(faces[1].chi_star, None);
        let f = p("z1^5 + zb1*z2*(z1^2 - zb2^2) + zb2^5");
        let e = curve_invariants(&f, &cfg).unwrap_err();
        assert!(e.to_string().contains("face (1,3)-(3,1) is not polar weighted"), "{e}");
    }

    #[test]
    fn tracker_examples() {
        for (s, want) in [
            ("-2z1^2*zb1 + z2^2*zb2", 1),
            ("-2z1^2*zb1 + z2^2*zb2 + 3z1^2*zb2", 3),
            ("z1^3 + 1/2*z1*zb1^2 - z2^3", 3),
            ("z1^3 + 2z1*zb1^2 - z2^3", 1),
        ] {
            let r = lkn_numeric(&p(s), 2048, 0).unwrap();
            assert_eq!(r.cycles, want, "{s}");
            assert_eq!(r.lkn(), want);
            assert_eq!(r.permutation.len(), r.solutions_at_zero.len());
        }
    }

    #[test]
    fn tracker_sees_axes() {
        let r = lkn_numeric(&p("zb1*z2*(z1^2 - zb2^2)"), 512, 0).unwrap();
        assert_eq!(r.cycles, 2);
        assert_eq!(r.axis_components, 2);
        assert!(lkn_numeric(&p("z1^2 + z2^3 + z1"), 512, 0).is_err());
    }
}
