//! Numeric probes for the non-degeneracy hierarchy (plain, strong, the
//! non-empty-fiber condition, super strong) and exact checks for special
//! shapes.
//!
//! A `DegenerateWitness` is a certificate: a torus point where the polished
//! critical residual is below `1e-10`. Every "clean" outcome is evidence
//! gathered from `starts` seeded random restarts, never a proof.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Result};
use crate::eval::{aligned_residual, Compiled, Jet, JetValue};
use crate::mixedpoly::{GaussianRational, MixedPolynomial, WeightVector};
use crate::newton;
use crate::upoly::UPoly;

/// Residual bound a certified critical point must meet.
pub const CERT_RESIDUAL: f64 = 1e-10;
/// Smallest admissible coordinate modulus of a certified point.
pub const MIN_COORD: f64 = 1e-6;
/// Normalized `|f|` above which a zero-set search counts as evidence of emptiness.
pub const EMPTY_EVIDENCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub starts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Gate on the normalized objective for polished candidates.
    pub cert_threshold: f64,
    /// Below this (normalized) value an uncertified minimum is reported as
    /// `Borderline`.
    pub report_threshold: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { starts: 64, iters: 500, seed: 0, cert_threshold: 1e-8, report_threshold: 1e-4 }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.iters == 0 {
            return precondition("starts and iters must be at least 1");
        }
        if !(self.cert_threshold < self.report_threshold) {
            return precondition("cert_threshold must be below report_threshold");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPointCertificate {
    pub point: Vec<Complex64>,
    pub alpha: Complex64,
    pub residual: f64,
    pub f_value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeStats {
    pub starts: usize,
    /// Smallest normalized objective value reached inside the torus
    /// (square-rooted).
    pub best: f64,
    /// Starts whose minimum drifted to a coordinate hyperplane.
    pub boundary: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    DegenerateWitness(CriticalPointCertificate),
    NoCriticalPointFound(ProbeStats),
    ZeroSetEmptyEvidence(ProbeStats),
    ZeroSetNonEmpty { point: Vec<Complex64>, f_value: Complex64 },
    Borderline(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::DegenerateWitness(_) => "DegenerateWitness",
            Verdict::NoCriticalPointFound(_) => "NoCriticalPointFound",
            Verdict::ZeroSetEmptyEvidence(_) => "ZeroSetEmptyEvidence",
            Verdict::ZeroSetNonEmpty { .. } => "ZeroSetNonEmpty",
            Verdict::Borderline(_) => "Borderline",
        }
    }

    /// Ordering used to aggregate per-face verdicts: larger is worse.
    fn severity(&self) -> u8 {
        match self {
            Verdict::NoCriticalPointFound(_) | Verdict::ZeroSetNonEmpty { .. } => 0,
            Verdict::Borderline(_) => 1,
            Verdict::DegenerateWitness(_) | Verdict::ZeroSetEmptyEvidence(_) => 2,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.severity() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeVerdict {
    pub kind: Verdict,
    pub config: ProbeConfig,
    /// Whether sampled values of a positive-dimensional face function hit all
    /// four open quadrants. `None` when not sampled.
    pub surjective: Option<bool>,
}

/// `‖conj(df) − α d̄f‖` at `z` with the best unit `α`; zero exactly at
/// critical points of `f` viewed as a map `C^{*n} → C`.
pub fn critical_residual(f: &MixedPolynomial, z: &[Complex64]) -> Result<(f64, Complex64)> {
    if z.len() != f.nvars() {
        return precondition("point dimension differs from the number of variables");
    }
    if z.iter().any(|c| c.norm() == 0.0) {
        return precondition("point has a zero coordinate");
    }
    let jet = Jet::new(f);
    let all: Vec<usize> = (0..f.nvars()).collect();
    let (r, a, _) = aligned_residual(&jet.eval(z), &all);
    Ok((r, a))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    /// Critical points; `on_zero` adds `|f|` to the objective.
    Critical { on_zero: bool },
    Zero,
}

struct Search<'a> {
    jet: &'a Jet,
    active: Vec<usize>,
    base: Vec<Complex64>,
    target: Target,
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

impl Search<'_> {
    fn point(&self, x: &[f64]) -> Vec<Complex64> {
        let mut z = self.base.clone();
        for (k, &j) in self.active.iter().enumerate() {
            z[j] = Complex64::new(x[2 * k], x[2 * k + 1]);
        }
        z
    }

    fn objective_at(&self, v: &JetValue) -> f64 {
        let rel_f = if v.scale > 0.0 { (v.f.norm() / v.scale).powi(2) } else { 0.0 };
        match self.target {
            Target::Zero => rel_f,
            Target::Critical { on_zero } => {
                let (r, _, s) = aligned_residual(v, &self.active);
                let crit = if s > 0.0 { r * r / s } else { 0.0 };
                if on_zero {
                    crit + rel_f
                } else {
                    crit
                }
            }
        }
    }

    fn objective(&self, x: &[f64]) -> f64 {
        self.objective_at(&self.jet.eval(&self.point(x)))
    }

    fn descend(&self, mut x: Vec<f64>, iters: usize) -> (Vec<f64>, f64) {
        let h = 1e-7;
        let mut g = self.objective(&x);
        let mut eta = 0.1;
        let mut grad = vec![0.0; x.len()];
        for _ in 0..iters {
            if g < 1e-26 {
                break;
            }
            for i in 0..x.len() {
                let old = x[i];
                x[i] = old + h;
                let up = self.objective(&x);
                x[i] = old - h;
                let dn = self.objective(&x);
                x[i] = old;
                grad[i] = (up - dn) / (2.0 * h);
            }
            let mut improved = false;
            for _ in 0..40 {
                let mut y: Vec<f64> = x.iter().zip(&grad).map(|(a, b)| a - eta * b).collect();
                normalize(&mut y);
                let gy = self.objective(&y);
                if gy < g {
                    x = y;
                    g = gy;
                    eta = (eta * 2.0).min(1.0);
                    improved = true;
                    break;
                }
                eta *= 0.5;
            }
            if !improved {
                break;
            }
        }
        (x, g)
    }

    /// Absolute residual vector for the Levenberg–Marquardt polish. For
    /// critical targets the last unknown is the phase of `α`.
    fn residuals(&self, u: &[f64]) -> Vec<f64> {
        let m = 2 * self.active.len();
        let v = self.jet.eval(&self.point(&u[..m]));
        let mut r = Vec::new();
        if let Target::Critical { on_zero } = self.target {
            let alpha = Complex64::from_polar(1.0, u[m]);
            for &j in &self.active {
                let e = v.dz[j].conj() - alpha * v.dzb[j];
                r.push(e.re);
                r.push(e.im);
            }
            if on_zero {
                r.push(v.f.re);
                r.push(v.f.im);
            }
        } else {
            r.push(v.f.re);
            r.push(v.f.im);
        }
        r.push(u[..m].iter().map(|x| x * x).sum::<f64>() - 1.0);
        r
    }

    fn polish(&self, x: &[f64]) -> Vec<f64> {
        let mut u = x.to_vec();
        if matches!(self.target, Target::Critical { .. }) {
            let v = self.jet.eval(&self.point(x));
            let (_, alpha, _) = aligned_residual(&v, &self.active);
            u.push(alpha.arg());
        }
        let mut r = self.residuals(&u);
        let mut cost: f64 = r.iter().map(|x| x * x).sum();
        let mut lambda = 1e-3;
        let h = 1e-8;
        for _ in 0..60 {
            if cost < 1e-30 {
                break;
            }
            let mut jac = DMatrix::zeros(r.len(), u.len());
            for c in 0..u.len() {
                let old = u[c];
                u[c] = old + h;
                let up = self.residuals(&u);
                u[c] = old - h;
                let dn = self.residuals(&u);
                u[c] = old;
                for k in 0..r.len() {
                    jac[(k, c)] = (up[k] - dn[k]) / (2.0 * h);
                }
            }
            let rv = DVector::from_vec(r.clone());
            let jtj = jac.transpose() * &jac;
            let jtr = jac.transpose() * rv;
            let mut stepped = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for d in 0..u.len() {
                    a[(d, d)] += lambda * (1.0 + jtj[(d, d)]);
                }
                let Some(delta) = a.lu().solve(&(-&jtr)) else {
                    lambda *= 10.0;
                    continue;
                };
                let cand: Vec<f64> = u.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
                let rc = self.residuals(&cand);
                let cc: f64 = rc.iter().map(|x| x * x).sum();
                if cc < cost {
                    u = cand;
                    r = rc;
                    cost = cc;
                    lambda = (lambda / 3.0).max(1e-15);
                    stepped = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !stepped {
                break;
            }
        }
        let m = 2 * self.active.len();
        let mut x = u[..m].to_vec();
        normalize(&mut x);
        x
    }
}

struct Outcome {
    witness: Option<(Vec<Complex64>, JetValue)>,
    best: f64,
    boundary: usize,
}

/// Candidates closer than this to a coordinate hyperplane are outside the
/// torus for reporting purposes.
const BOUNDARY: f64 = 1e-3;

/// Multi-start search. `base_for` supplies the values of the non-active
/// variables for each start; `accept` decides whether a polished point is a
/// witness. Starts are consumed in index order and the first witness wins.
/// Minima that drift to a coordinate hyperplane are counted, not reported.
fn multistart(
    jet: &Jet,
    active: &[usize],
    target: Target,
    cfg: &ProbeConfig,
    mut base_for: impl FnMut(&mut ChaCha8Rng) -> Vec<Complex64>,
    accept: impl Fn(&Search, &JetValue) -> bool,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = f64::INFINITY;
    let mut boundary = 0;
    for _ in 0..cfg.starts {
        let base = base_for(&mut rng);
        let x0 = random_unit(&mut rng, 2 * active.len());
        let s = Search { jet, active: active.to_vec(), base, target };
        let (mut x, g) = s.descend(x0, cfg.iters);
        let mut cur = g.sqrt();
        if cur < cfg.report_threshold {
            let xp = s.polish(&x);
            let z = s.point(&xp);
            let v = jet.eval(&z);
            let gp = s.objective_at(&v).sqrt();
            if gp < cfg.cert_threshold && coords_ok(&z, active) && accept(&s, &v) {
                return Outcome { witness: Some((z, v)), best: best.min(gp), boundary };
            }
            if gp < cur {
                cur = gp;
                x = xp;
            }
        }
        if coords_ok_with(&s.point(&x), active, BOUNDARY) {
            best = best.min(cur);
        } else {
            boundary += 1;
        }
    }
    Outcome { witness: None, best, boundary }
}

fn coords_ok_with(z: &[Complex64], active: &[usize], eps: f64) -> bool {
    active.iter().all(|&j| z[j].norm() > eps)
}

fn coords_ok(z: &[Complex64], active: &[usize]) -> bool {
    coords_ok_with(z, active, MIN_COORD)
}

fn certificate(z: Vec<Complex64>, v: &JetValue, active: &[usize]) -> CriticalPointCertificate {
    let (residual, alpha, _) = aligned_residual(v, active);
    CriticalPointCertificate { point: z, alpha, residual, f_value: v.f }
}

/// Values of a face function at 10³ random torus points hit all four open
/// quadrants.
fn looks_surjective(f: &Compiled, n: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut hit = [false; 4];
    for _ in 0..1000 {
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let v = f.eval(&z);
        let q = match (v.re > 0.0, v.im > 0.0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        if v.re != 0.0 && v.im != 0.0 {
            hit[q] = true;
        }
    }
    hit.iter().all(|&h| h)
}

/// Probe a radially weighted homogeneous function for critical points,
/// optionally restricted to its zero fiber.
fn probe_critical(fp: &MixedPolynomial, dim: usize, on_zero: bool, cfg: &ProbeConfig) -> Result<ProbeVerdict> {
    cfg.validate()?;
    let active = fp.used_vars();
    let surjective = (dim >= 1).then(|| looks_surjective(&Compiled::new(fp), fp.nvars(), cfg.seed));
    let kind = if active.is_empty() {
        Verdict::NoCriticalPointFound(ProbeStats { starts: 0, best: f64::INFINITY, boundary: 0 })
    } else if on_zero && fp.terms().len() == 1 {
        // A monomial has no zeros on the torus.
        Verdict::NoCriticalPointFound(ProbeStats { starts: 0, best: 1.0, boundary: 0 })
    } else {
        let jet = Jet::new(fp);
        let base = vec![Complex64::new(1.0, 0.0); fp.nvars()];
        let out = multistart(
            &jet,
            &active,
            Target::Critical { on_zero },
            cfg,
            |_| base.clone(),
            |s, v| {
                let (r, _, _) = aligned_residual(v, &s.active);
                r < CERT_RESIDUAL && (!on_zero || v.f.norm() < CERT_RESIDUAL)
            },
        );
        match out.witness {
            Some((z, v)) => Verdict::DegenerateWitness(certificate(z, &v, &active)),
            _ if out.best < cfg.report_threshold => Verdict::Borderline(format!(
                "normalized residual reached {:.3e} without a certified critical point",
                out.best
            )),
            _ => Verdict::NoCriticalPointFound(ProbeStats { starts: cfg.starts, best: out.best, boundary: out.boundary }),
        }
    };
    Ok(ProbeVerdict { kind, config: cfg.clone(), surjective })
}

/// Plain non-degeneracy of `f` for `P`: no critical point of `f_P` on its
/// zero fiber in the torus.
pub fn probe_face_nondegenerate(f: &MixedPolynomial, p: &WeightVector, cfg: &ProbeConfig) -> Result<ProbeVerdict> {
    let fc = newton::face(f, p)?;
    probe_critical(&newton::terms_on(f, &fc), fc.dim, true, cfg)
}

/// Strong non-degeneracy of `f` for `P`: no critical point of `f_P` at all.
pub fn probe_face_strong(f: &MixedPolynomial, p: &WeightVector, cfg: &ProbeConfig) -> Result<ProbeVerdict> {
    let fc = newton::face(f, p)?;
    probe_critical(&newton::terms_on(f, &fc), fc.dim, false, cfg)
}

/// Search for a zero of a radially weighted homogeneous function on the
/// torus. The objective is `|f| / Σ|terms|`, which is scale free.
pub fn probe_zero_set(fp: &MixedPolynomial, cfg: &ProbeConfig) -> Result<ProbeVerdict> {
    cfg.validate()?;
    let active = fp.used_vars();
    if active.is_empty() || fp.terms().len() == 1 {
        let stats = ProbeStats { starts: 0, best: 1.0, boundary: 0 };
        return Ok(ProbeVerdict { kind: Verdict::ZeroSetEmptyEvidence(stats), config: cfg.clone(), surjective: None });
    }
    let jet = Jet::new(fp);
    let base = vec![Complex64::new(1.0, 0.0); fp.nvars()];
    let out = multistart(&jet, &active, Target::Zero, cfg, |_| base.clone(), |_, v| v.f.norm() < CERT_RESIDUAL);
    let kind = match out.witness {
        Some((z, v)) => Verdict::ZeroSetNonEmpty { point: z, f_value: v.f },
        _ if out.best > EMPTY_EVIDENCE => {
            Verdict::ZeroSetEmptyEvidence(ProbeStats { starts: cfg.starts, best: out.best, boundary: out.boundary })
        }
        _ => Verdict::Borderline(format!("normalized |f| reached {:.3e} without a certified zero", out.best)),
    };
    Ok(ProbeVerdict { kind, config: cfg.clone(), surjective: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    NonDegenerate,
    Strong,
    /// Non-degenerate plus non-empty zero fibers on faces of positive dimension.
    True,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceVerdict {
    /// Variables of the restriction the face belongs to (0-based).
    pub vars: Vec<usize>,
    /// Weight on `vars`, zero elsewhere.
    pub weight: WeightVector,
    pub dim: usize,
    pub face_function: MixedPolynomial,
    pub verdict: ProbeVerdict,
    /// Zero-fiber verdict, for `Mode::True` on faces of positive dimension.
    pub zero_set: Option<ProbeVerdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub mode: Mode,
    pub faces: Vec<FaceVerdict>,
}

impl CheckReport {
    pub fn worst(&self) -> Option<&Verdict> {
        self.faces
            .iter()
            .flat_map(|f| std::iter::once(&f.verdict.kind).chain(f.zero_set.as_ref().map(|z| &z.kind)))
            .max_by_key(|v| v.severity())
    }

    pub fn is_clean(&self) -> bool {
        self.worst().is_none_or(Verdict::is_clean)
    }
}

/// Unit-coefficient copy of the support of `f`, so face enumeration only
/// depends on exponents.
fn support_poly(f: &MixedPolynomial) -> MixedPolynomial {
    MixedPolynomial::from_terms(
        f.nvars(),
        f.terms().iter().map(|t| (GaussianRational::one(), t.nu.clone(), t.mu.clone())),
    )
}

fn grid_bound(m: usize) -> i64 {
    match m {
        0..=2 => 12,
        3 => 8,
        4 => 5,
        _ => 3,
    }
}

/// Strictly positive weights (in `m = g.nvars()` variables) that between them
/// realize every face of `Γ(g)`: exact for `m ≤ 2`, a bounded grid above.
fn candidate_weights(g: &MixedPolynomial) -> Vec<Vec<i64>> {
    let m = g.nvars();
    match m {
        0 => vec![],
        1 => vec![vec![1]],
        2 => match newton::boundary2d(&support_poly(g)) {
            Ok(b) => {
                let mut out: Vec<Vec<i64>> = b.edges.iter().map(|e| e.weight.entries.clone()).collect();
                out.extend((0..b.vertices.len()).map(|i| b.vertex_weight(i).entries));
                out
            }
            Err(_) => vec![],
        },
        _ => {
            let k = grid_bound(m);
            let total = (k as usize).pow(m as u32);
            (0..total)
                .map(|mut idx| {
                    (0..m)
                        .map(|_| {
                            let v = (idx % k as usize) as i64 + 1;
                            idx /= k as usize;
                            v
                        })
                        .collect::<Vec<i64>>()
                })
                .filter(|w| crate::linalg::gcd_all(w) == 1)
                .collect()
        }
    }
}

struct FaceItem {
    vars: Vec<usize>,
    weight: WeightVector,
    dim: usize,
    func: MixedPolynomial,
}

/// Distinct faces of all restrictions `f^I`, `I ∈ NV(f)`.
fn enumerate_faces(f: &MixedPolynomial) -> Vec<FaceItem> {
    let n = f.nvars();
    let mut out: Vec<FaceItem> = Vec::new();
    for set in newton::nv_sets(f).into_iter().rev() {
        if set.is_empty() {
            continue;
        }
        let g = f.restrict(&set).compress(&set);
        for w in candidate_weights(&g) {
            let Ok(fc) = newton::face(&g, &WeightVector::new(w.clone())) else { continue };
            let local = newton::terms_on(&g, &fc);
            // Embed back into n variables.
            let func = MixedPolynomial::from_terms(
                n,
                local.terms().iter().map(|t| {
                    let mut nu = vec![0; n];
                    let mut mu = vec![0; n];
                    for (k, &j) in set.iter().enumerate() {
                        nu[j] = t.nu[k];
                        mu[j] = t.mu[k];
                    }
                    (t.coeff.clone(), nu, mu)
                }),
            );
            if out.iter().any(|o| o.func == func) {
                continue;
            }
            let mut full = vec![0; n];
            for (k, &j) in set.iter().enumerate() {
                full[j] = w[k];
            }
            out.push(FaceItem { vars: set.clone(), weight: WeightVector::new(full), dim: fc.dim, func });
        }
    }
    out
}

pub fn check_all(f: &MixedPolynomial, mode: Mode, cfg: &ProbeConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut faces = Vec::new();
    for item in enumerate_faces(f) {
        let verdict = probe_critical(&item.func, item.dim, mode != Mode::Strong, cfg)?;
        let zero_set = if mode == Mode::True && item.dim >= 1 {
            Some(probe_zero_set(&item.func, cfg)?)
        } else {
            None
        };
        faces.push(FaceVerdict {
            vars: item.vars,
            weight: item.weight,
            dim: item.dim,
            face_function: item.func,
            verdict,
            zero_set,
        });
    }
    Ok(CheckReport { mode, faces })
}

/// Zero-fiber verdicts on every face of positive dimension.
pub fn probe_true(f: &MixedPolynomial, cfg: &ProbeConfig) -> Result<Vec<FaceVerdict>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for item in enumerate_faces(f).into_iter().filter(|i| i.dim >= 1) {
        let verdict = probe_zero_set(&item.func, cfg)?;
        out.push(FaceVerdict {
            vars: item.vars,
            weight: item.weight,
            dim: item.dim,
            face_function: item.func,
            verdict: verdict.clone(),
            zero_set: Some(verdict),
        });
    }
    Ok(out)
}

/// Outcome of the exact zero-set test for `Σ c_j z^j z̄^{N−j}` in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisCheck {
    /// The zero set in `C*` is empty.
    pub empty: bool,
    /// Roots `α` of `Σ c_j w^j` with multiplicity.
    pub roots: Vec<(Complex64, usize)>,
    /// Roots with `|α| = 1` (within `1e-9`).
    pub circle_roots: Vec<Complex64>,
    /// Some `|α|` lies within `1e-6` of one without being on the circle.
    pub borderline: bool,
}

/// `f = c ∏ (z − α_j z̄)` vanishes on `C*` iff some `|α_j| = 1`.
pub fn axis_vertex_check(f: &MixedPolynomial) -> Result<AxisCheck> {
    let used = f.used_vars();
    if used.len() != 1 {
        return precondition("expected a function of a single variable");
    }
    let j = used[0];
    let deg = f.terms()[0].nu[j] + f.terms()[0].mu[j];
    if f.terms().iter().any(|t| t.nu[j] + t.mu[j] != deg || t.nu[j] < 0 || t.mu[j] < 0) {
        return precondition("terms are not homogeneous of one degree in (z, z̄)");
    }
    let mut c = vec![GaussianRational::zero(); deg as usize + 1];
    for t in f.terms() {
        c[t.nu[j] as usize] = t.coeff.clone();
    }
    let roots = UPoly::new(c).roots();
    let mut circle_roots = Vec::new();
    let mut borderline = false;
    for &(a, _) in &roots {
        let gap = (a.norm() - 1.0).abs();
        if gap < 1e-9 {
            circle_roots.push(a);
        } else if gap < 1e-6 {
            borderline = true;
        }
    }
    Ok(AxisCheck { empty: circle_roots.is_empty(), roots, circle_roots, borderline })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SsndReport {
    /// Faces for weights with some zero entry and `d(P, f) > 0`.
    pub partial: Vec<FaceVerdict>,
    pub strong: CheckReport,
}

impl SsndReport {
    pub fn holds(&self) -> bool {
        self.strong.is_clean() && self.partial.iter().all(|f| f.verdict.kind.is_clean())
    }
}

/// Super strong non-degeneracy: for every nonnegative weight with zero set
/// `I(P)` either `d(P, f) = 0` or `f_P` has no critical point with nonzero
/// value as a function of the `J(P)` variables, for random fixed `w_{I(P)}`.
pub fn ssnd_check(f: &MixedPolynomial, cfg: &ProbeConfig) -> Result<SsndReport> {
    cfg.validate()?;
    let n = f.nvars();
    let mut partial: Vec<FaceVerdict> = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let zero: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let rest: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
        // Faces of f viewed as a polynomial in z_J.
        let proj = MixedPolynomial::from_terms(
            rest.len(),
            f.terms().iter().map(|t| {
                (
                    GaussianRational::one(),
                    rest.iter().map(|&j| t.nu[j]).collect(),
                    rest.iter().map(|&j| t.mu[j]).collect(),
                )
            }),
        );
        for wj in candidate_weights(&proj) {
            let mut full = vec![0; n];
            for (k, &j) in rest.iter().enumerate() {
                full[j] = wj[k];
            }
            let p = WeightVector::new(full);
            let Some(d) = newton::min_degree(f, &p) else { continue };
            if d == 0 {
                continue;
            }
            let fp = MixedPolynomial::from_terms(
                n,
                f.terms()
                    .iter()
                    .filter(|t| t.rdeg(&p) == d)
                    .map(|t| (t.coeff.clone(), t.nu.clone(), t.mu.clone())),
            );
            if partial.iter().any(|o| o.face_function == fp && o.vars == rest) {
                continue;
            }
            let verdict = probe_partial(&fp, &rest, &zero, cfg);
            partial.push(FaceVerdict {
                vars: rest.clone(),
                weight: p,
                dim: 0,
                face_function: fp,
                verdict,
                zero_set: None,
            });
        }
    }
    let strong = check_all(f, Mode::Strong, cfg)?;
    Ok(SsndReport { partial, strong })
}

fn probe_partial(fp: &MixedPolynomial, rest: &[usize], zero: &[usize], cfg: &ProbeConfig) -> ProbeVerdict {
    let used = fp.used_vars();
    let active: Vec<usize> = rest.iter().copied().filter(|j| used.contains(j)).collect();
    let jet = Jet::new(fp);
    let n = fp.nvars();
    let zero = zero.to_vec();
    let out = multistart(
        &jet,
        &active,
        Target::Critical { on_zero: false },
        cfg,
        |rng| {
            let mut base = vec![Complex64::new(1.0, 0.0); n];
            for &j in &zero {
                base[j] = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            }
            base
        },
        |s, v| {
            let (r, _, _) = aligned_residual(v, &s.active);
            r < CERT_RESIDUAL && v.scale > 0.0 && v.f.norm() / v.scale > MIN_COORD
        },
    );
    let kind = match out.witness {
        Some((z, v)) => Verdict::DegenerateWitness(certificate(z, &v, &active)),
        _ if out.best < cfg.report_threshold => Verdict::Borderline(format!(
            "normalized residual reached {:.3e} without a certified critical point",
            out.best
        )),
        _ => Verdict::NoCriticalPointFound(ProbeStats { starts: cfg.starts, best: out.best, boundary: out.boundary }),
    };
    ProbeVerdict { kind, config: cfg.clone(), surjective: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse_with(s, Some(2)).unwrap()
    }

    fn w11() -> WeightVector {
        WeightVector::new(vec![1, 1])
    }

    #[test]
    fn residual_on_real_valued_function() {
        let f = p("z1*zb1 - z2*zb2");
        let z = [Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, -1.2)];
        let (r, a) = critical_residual(&f, &z).unwrap();
        assert!(r < 1e-15);
        assert!((a - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(critical_residual(&f, &[Complex64::new(0.0, 0.0), z[1]]).is_err());
    }

    #[test]
    fn residual_of_holomorphic_function_is_gradient_norm() {
        let f = p("z1^2 + z2^3");
        let z = [Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.7)];
        let (r, _) = critical_residual(&f, &z).unwrap();
        let g = ((2.0 * z[0]).norm_sqr() + (3.0 * z[1] * z[1]).norm_sqr()).sqrt();
        assert!((r - g).abs() < 1e-14);
    }

    #[test]
    fn critical_family_with_nonzero_value() {
        let f = MixedPolynomial::parse("(1/4)z1^2 - (1/4)zb1^2 + z1*zb1 - (1+i)*(z1+z2)*(zb1+zb2)").unwrap();
        let z = [Complex64::new(1.0, 1.0), Complex64::new(-1.0, -1.0)];
        let (r, _) = critical_residual(&f, &z).unwrap();
        assert!(r < 1e-14);
        assert!((f.evaluate(&z) - Complex64::new(2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn square_of_binomial_is_degenerate() {
        let cfg = ProbeConfig::default();
        let f = p("z1^2 + 2z1*zb2 + zb2^2");
        let v = probe_face_nondegenerate(&f, &w11(), &cfg).unwrap();
        let Verdict::DegenerateWitness(c) = &v.kind else { panic!("{:?}", v.kind) };
        assert!(c.residual < CERT_RESIDUAL);
        assert!(c.point.iter().all(|z| z.norm() > MIN_COORD));
        // Independent re-verification.
        let (r, _) = critical_residual(&f, &c.point).unwrap();
        assert!(r < CERT_RESIDUAL && f.evaluate(&c.point).norm() < CERT_RESIDUAL);
    }

    #[test]
    fn distinct_roots_are_clean() {
        let cfg = ProbeConfig::default();
        for s in ["z1^2 + zb2^2", "z1^2 + z1*zb2 + zb2^2", "z1^2 + 3i*z1*zb2 + zb2^2"] {
            let v = probe_face_nondegenerate(&p(s), &w11(), &cfg).unwrap();
            assert!(matches!(v.kind, Verdict::NoCriticalPointFound(_)), "{s}: {:?}", v.kind);
        }
    }

    #[test]
    fn polar_weighted_is_strongly_clean() {
        let v = probe_face_strong(&p("z1^2*zb1 - z2^2*zb2"), &w11(), &ProbeConfig::default()).unwrap();
        assert!(matches!(v.kind, Verdict::NoCriticalPointFound(_)), "{:?}", v.kind);
    }

    #[test]
    fn zero_set_probes() {
        let cfg = ProbeConfig::default();
        let v = probe_zero_set(&p("z1*z2 + z1*zb2 + zb1*z2"), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::ZeroSetNonEmpty { .. }), "{:?}", v.kind);
        let v = probe_zero_set(&p("3z1*z2 + z1*zb2 + zb1*z2"), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::ZeroSetEmptyEvidence(_)), "{:?}", v.kind);
        let faces = probe_true(&p("z1*zb1 + z2*zb2"), &cfg).unwrap();
        assert_eq!(faces.len(), 1);
        assert!(matches!(faces[0].verdict.kind, Verdict::ZeroSetEmptyEvidence(_)));
    }

    #[test]
    fn axis_checks() {
        let a = axis_vertex_check(&p("z1^2 + zb1^2")).unwrap();
        assert!(!a.empty);
        assert_eq!(a.circle_roots.len(), 2);
        assert!(axis_vertex_check(&p("z1*zb1")).unwrap().empty);
        let b = axis_vertex_check(&p("z1^2 + 3z1*zb1 + zb1^2")).unwrap();
        assert!(b.empty && !b.borderline);
        let r: Vec<f64> = b.roots.iter().map(|x| x.0.re).collect();
        let s5 = 5f64.sqrt();
        assert!(r.iter().any(|x| (x - (-3.0 - s5) / 2.0).abs() < 1e-12));
        assert!(r.iter().any(|x| (x - (-3.0 + s5) / 2.0).abs() < 1e-12));
        assert!(axis_vertex_check(&p("z1^2 + z2")).is_err());
        assert!(axis_vertex_check(&p("z1^2 + z1")).is_err());
    }

    fn square_family(a: &str) -> MixedPolynomial {
        p(&format!("z1^2 + ({a})*z1*zb2 + zb2^2"))
    }

    const CRITICAL_FAMILY: &str = "(1/4)z1^2 - (1/4)zb1^2 + z1*zb1 - (1+1i)*(z1+z2)*(zb1+zb2)";

    #[test]
    fn binomial_family_flips_at_two() {
        let cfg = ProbeConfig::default();
        let v = probe_face_nondegenerate(&square_family("-2"), &w11(), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::DegenerateWitness(_)), "{:?}", v.kind);
        let v = probe_face_nondegenerate(&square_family("5/2"), &w11(), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::NoCriticalPointFound(_)), "{:?}", v.kind);
    }

    #[test]
    fn critical_family_strong_but_not_plain() {
        let cfg = ProbeConfig::default();
        let f = p(CRITICAL_FAMILY);
        let v = probe_face_strong(&f, &w11(), &cfg).unwrap();
        let Verdict::DegenerateWitness(c) = &v.kind else { panic!("{:?}", v.kind) };
        assert!(c.f_value.norm() > 1e-3);
        assert!((c.alpha.norm() - 1.0).abs() < 1e-10);
        let v = probe_face_nondegenerate(&f, &w11(), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::NoCriticalPointFound(_)), "{:?}", v.kind);
        // Re f < 0 forces Im f < 0 here, so one open quadrant is never hit.
        assert_eq!(v.surjective, Some(false));
    }

    #[test]
    fn verdicts_are_deterministic() {
        let cfg = ProbeConfig { seed: 7, ..ProbeConfig::default() };
        let f = p(CRITICAL_FAMILY);
        assert_eq!(probe_face_strong(&f, &w11(), &cfg).unwrap(), probe_face_strong(&f, &w11(), &cfg).unwrap());
    }

    #[test]
    fn multiple_vertex_function() {
        let cfg = ProbeConfig::default();
        let v = probe_face_nondegenerate(&p("z1*z2 + z1*zb2 + zb1*z2"), &w11(), &cfg).unwrap();
        assert!(matches!(v.kind, Verdict::NoCriticalPointFound(_)), "{:?}", v.kind);
    }

    #[test]
    fn check_all_corpus() {
        let cfg = ProbeConfig::default();
        let r = check_all(&p("z1^3*zb1^2 + z1^2*z2^2 + z2^3*zb2"), Mode::NonDegenerate, &cfg).unwrap();
        assert!(r.faces.iter().all(|f| matches!(f.verdict.kind, Verdict::NoCriticalPointFound(_))), "{r:?}");
        assert!(r.faces.iter().any(|f| f.weight.entries == vec![2, 3]));
        assert!(r.faces.iter().any(|f| f.weight.entries == vec![1, 1]));

        let r = check_all(&p("z1*zb1 - z2*zb2"), Mode::NonDegenerate, &cfg).unwrap();
        let bad: Vec<_> = r.faces.iter().filter(|f| !f.verdict.kind.is_clean()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].weight.entries, vec![1, 1]);

        let r = check_all(&p("z1^3 + z1*zb1^2 - z2^3"), Mode::NonDegenerate, &cfg).unwrap();
        assert!(matches!(r.worst(), Some(Verdict::DegenerateWitness(_))));
        let r = check_all(&p("z1^3 + 1/2*z1*zb1^2 - z2^3"), Mode::NonDegenerate, &cfg).unwrap();
        assert!(r.is_clean(), "{:?}", r.worst());

        let r = check_all(&p("z1*zb1 + z2*zb2"), Mode::True, &cfg).unwrap();
        assert!(matches!(r.worst(), Some(Verdict::ZeroSetEmptyEvidence(_))));
    }

    #[test]
    fn three_variable_check() {
        let cfg = ProbeConfig { starts: 16, ..ProbeConfig::default() };
        let f = MixedPolynomial::parse("z1*zb1 + z2*zb2 - z3*zb3").unwrap();
        let r = check_all(&f, Mode::NonDegenerate, &cfg).unwrap();
        assert!(r.faces.iter().any(|x| x.weight.entries == vec![1, 1, 1] && !x.verdict.kind.is_clean()));
    }

    #[test]
    fn super_strong() {
        let cfg = ProbeConfig { starts: 16, ..ProbeConfig::default() };
        assert!(ssnd_check(&p("z1^3 + z2^2"), &cfg).unwrap().holds());
        assert!(ssnd_check(&p("z1^3*zb2 + z2^2*zb1"), &cfg).unwrap().holds());
        let r = ssnd_check(&p("z1*zb1*z2^3 + z1^4*zb2"), &cfg).unwrap();
        assert!(!r.holds());
        assert!(r.partial.iter().any(|f| f.weight.entries == vec![1, 0]
            && matches!(f.verdict.kind, Verdict::DegenerateWitness(_))));
    }

    #[test]
    fn config_validation() {
        let cfg = ProbeConfig { starts: 0, ..ProbeConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = ProbeConfig { cert_threshold: 1.0, ..ProbeConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
