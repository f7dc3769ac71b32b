//! Serializable report types. Every report carries `"schema": 1`; optional
//! fields that belong to one verdict kind are omitted for the others.

use mixsing::classify::{self, GoodPolarFactorization};
use mixsing::invariants::{ClosedForms, CurveInvariants, FaceRecord, Route, TrackerResult, ZetaFunction};
use mixsing::newton::{Face, NewtonBoundary2D};
use mixsing::nondegen::{CheckReport, FaceVerdict, ProbeVerdict, Verdict};
use mixsing::toric::RegularFan2D;
use mixsing::{invariants, MixedPolynomial, WeightVector};
use num::complex::Complex64;
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

fn points(z: &[Complex64]) -> Vec<Complex> {
    z.iter().copied().map(Complex::from).collect()
}

fn w(p: &WeightVector) -> Vec<i64> {
    p.entries.clone()
}

/// `(a,b)-(c,d)`.
fn edge_name(e: &Face) -> String {
    let v = e.vertices();
    let s = |p: &[i64]| format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
    format!("{}-{}", s(&v[0].point), s(&v[1].point))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Input {
    /// Canonical form of the parsed polynomial.
    pub canonical: String,
    pub nvars: usize,
}

impl Input {
    pub fn of(f: &MixedPolynomial) -> Self {
        Self { canonical: f.to_string(), nvars: f.nvars() }
    }
}

/// A number together with the route that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Valued<T> {
    pub value: T,
    pub route: &'static str,
}

impl<T> Valued<T> {
    fn new(value: T, route: Route) -> Self {
        Self { value, route: route.name() }
    }
}

// Newton boundary.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexOut {
    pub point: Vec<i64>,
    pub terms: usize,
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeOut {
    pub name: String,
    pub weight: Vec<i64>,
    pub d_value: i64,
    pub endpoints: [Vec<i64>; 2],
    pub face_function: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonOut {
    pub vertices: Vec<VertexOut>,
    pub edges: Vec<EdgeOut>,
    pub convenient: bool,
    pub simple_vertices: bool,
    /// Signed `ν − μ` of the axis monomials; absent when the boundary misses
    /// that axis or the axis vertex is not simple.
    pub polar_sections: [Option<i64>; 2],
}

impl NewtonOut {
    pub fn new(f: &MixedPolynomial, b: &NewtonBoundary2D) -> Self {
        let (a1, a2) = mixsing::newton::polar_sections(f).unwrap_or((None, None));
        Self {
            vertices: b
                .vertices
                .iter()
                .map(|v| VertexOut { point: v.point.clone(), terms: v.term_indices.len(), simple: v.is_simple() })
                .collect(),
            edges: b
                .edges
                .iter()
                .map(|e| {
                    let v = e.vertices();
                    EdgeOut {
                        name: edge_name(e),
                        weight: w(&e.weight),
                        d_value: e.d_value,
                        endpoints: [v[0].point.clone(), v[1].point.clone()],
                        face_function: mixsing::newton::face_function(f, &e.weight)
                            .map(|g| g.to_string())
                            .unwrap_or_default(),
                    }
                })
                .collect(),
            convenient: b.is_convenient(),
            simple_vertices: b.simple_vertices(),
            polar_sections: [a1, a2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceOut {
    pub weight: Vec<i64>,
    pub d_value: i64,
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    pub face_function: String,
}

impl FaceOut {
    pub fn new(f: &MixedPolynomial, fc: &Face) -> Self {
        Self {
            weight: w(&fc.weight),
            d_value: fc.d_value,
            dim: fc.dim,
            points: fc.points.iter().map(|p| p.point.clone()).collect(),
            face_function: mixsing::newton::face_function(f, &fc.weight).map(|g| g.to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<NewtonOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<FaceOut>,
}

// Classification.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightDegree {
    pub weight: Vec<i64>,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugateOut {
    /// Conjugated variables, 1-based.
    pub conjugated: Vec<usize>,
    pub weight: Vec<i64>,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoConjugateOut {
    pub monomial: String,
    pub conjugate: ConjugateOut,
    pub polar_degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootOut {
    pub root: Complex,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodPolarOut {
    pub lead_coeff: String,
    pub monomial: String,
    pub k: usize,
    pub a: i64,
    pub a_pr: i64,
    pub b: i64,
    pub b_pr: i64,
    pub roots: Vec<RootOut>,
    pub nondegenerate: bool,
}

impl GoodPolarOut {
    fn new(n: usize, g: &GoodPolarFactorization) -> Self {
        let one = mixsing::GaussianRational::one();
        Self {
            lead_coeff: g.lead_coeff.to_string(),
            monomial: MixedPolynomial::monomial(n, one, g.pre_monomial.0.clone(), g.pre_monomial.1.clone()).to_string(),
            k: g.k,
            a: g.a,
            a_pr: g.a_pr,
            b: g.b,
            b_pr: g.b_pr,
            roots: g.roots.iter().map(|&(r, m)| RootOut { root: r.into(), multiplicity: m }).collect(),
            nondegenerate: g.is_nondegenerate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassOut {
    pub radial: Option<WeightDegree>,
    pub polar: Option<WeightDegree>,
    pub conjugate: Option<ConjugateOut>,
    pub pseudo_conjugate: Option<PseudoConjugateOut>,
    pub good_polar: Option<GoodPolarOut>,
    /// `|det N|` when the function is simplicial.
    pub simplicial_det_n: Option<i64>,
}

impl ClassOut {
    pub fn new(f: &MixedPolynomial) -> Self {
        let conj = |c: classify::ConjugateWeighted| ConjugateOut {
            conjugated: c.j.iter().map(|j| j + 1).collect(),
            weight: w(&c.weights),
            degree: c.degree,
        };
        Self {
            radial: classify::radial_type(f).map(|t| WeightDegree { weight: w(&t.q), degree: t.d_r }),
            polar: classify::polar_type(f).map(|t| WeightDegree { weight: w(&t.p), degree: t.d_p }),
            conjugate: classify::conjugate_wh(f).map(conj),
            pseudo_conjugate: classify::pseudo_conjugate_wh(f).map(|pc| PseudoConjugateOut {
                monomial: MixedPolynomial::monomial(f.nvars(), pc.monomial.coeff.clone(), pc.monomial.nu.clone(), pc.monomial.mu.clone())
                    .to_string(),
                conjugate: conj(pc.conj),
                polar_degree: pc.pdeg,
            }),
            good_polar: classify::good_polar_factorization(f).map(|g| GoodPolarOut::new(f.nvars(), &g)),
            simplicial_det_n: classify::simplicial_check(f).map(|s| s.det_n_abs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceClassOut {
    pub face: String,
    pub face_function: String,
    #[serde(flatten)]
    pub class: ClassOut,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationOut {
    /// Classification of `f` itself.
    pub global: ClassOut,
    /// Each end monomial is free of the other variable or polar admissible.
    pub end_monomials_admissible: Option<bool>,
    pub faces: Vec<FaceClassOut>,
}

impl ClassificationOut {
    pub fn new(f: &MixedPolynomial, b: &NewtonBoundary2D) -> Self {
        Self {
            global: ClassOut::new(f),
            end_monomials_admissible: classify::end_monomials_admissible(f).ok(),
            faces: b
                .edges
                .iter()
                .map(|e| {
                    let ff = mixsing::newton::face_function(f, &e.weight).expect("edge weights are positive");
                    FaceClassOut { face: edge_name(e), face_function: ff.to_string(), class: ClassOut::new(&ff) }
                })
                .collect(),
        }
    }
}

// Non-degeneracy.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictOut {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Complex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_value: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    /// Smallest normalized objective reached inside the torus.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_minima: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl From<&Verdict> for VerdictOut {
    fn from(v: &Verdict) -> Self {
        let mut out = Self {
            kind: v.name(),
            point: None,
            alpha: None,
            residual: None,
            f_value: None,
            starts: None,
            best: None,
            boundary_minima: None,
            message: None,
        };
        match v {
            Verdict::DegenerateWitness(c) => {
                out.point = Some(points(&c.point));
                out.alpha = Some(c.alpha.into());
                out.residual = Some(c.residual);
                out.f_value = Some(c.f_value.into());
            }
            Verdict::NoCriticalPointFound(s) | Verdict::ZeroSetEmptyEvidence(s) => {
                out.starts = Some(s.starts);
                out.best = Some(s.best);
                out.boundary_minima = Some(s.boundary);
            }
            Verdict::ZeroSetNonEmpty { point, f_value } => {
                out.point = Some(points(point));
                out.f_value = Some((*f_value).into());
            }
            Verdict::Borderline(m) => out.message = Some(m.clone()),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceVerdictOut {
    /// Variables of the restriction the face lives in, 1-based.
    pub vars: Vec<usize>,
    pub weight: Vec<i64>,
    pub dim: usize,
    pub face_function: String,
    pub verdict: VerdictOut,
    pub surjective: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_set: Option<VerdictOut>,
}

impl From<&FaceVerdict> for FaceVerdictOut {
    fn from(f: &FaceVerdict) -> Self {
        Self {
            vars: f.vars.iter().map(|j| j + 1).collect(),
            weight: w(&f.weight),
            dim: f.dim,
            face_function: f.face_function.to_string(),
            verdict: (&f.verdict.kind).into(),
            surjective: f.verdict.surjective,
            zero_set: f.zero_set.as_ref().map(|z| (&z.kind).into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondegOut {
    pub mode: &'static str,
    pub clean: bool,
    pub worst: Option<&'static str>,
    pub faces: Vec<FaceVerdictOut>,
}

impl NondegOut {
    pub fn new(mode: &'static str, r: &CheckReport) -> Self {
        Self {
            mode,
            clean: r.is_clean(),
            worst: r.worst().map(Verdict::name),
            faces: r.faces.iter().map(FaceVerdictOut::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSettings {
    pub seed: u64,
    pub starts: usize,
    pub iters: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    pub settings: ProbeSettings,
    pub mode: &'static str,
    /// Worst verdict over the probed faces.
    pub verdict: Option<VerdictOut>,
    pub clean: bool,
    pub faces: Vec<FaceVerdictOut>,
    /// Faces for weights with zero entries, in super strong mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_faces: Option<Vec<FaceVerdictOut>>,
}

pub fn single_face(f: &MixedPolynomial, p: &WeightVector, fc: &Face, v: &ProbeVerdict) -> FaceVerdictOut {
    FaceVerdictOut {
        vars: (1..=f.nvars()).collect(),
        weight: w(p),
        dim: fc.dim,
        face_function: mixsing::newton::face_function(f, p).map(|g| g.to_string()).unwrap_or_default(),
        verdict: (&v.kind).into(),
        surjective: v.surjective,
        zero_set: None,
    }
}

// Fan.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanOut {
    pub dual_rays: Vec<Vec<i64>>,
    pub vertices: Vec<[i64; 2]>,
    /// `d(P_j; f)`, absent at `E1` and `E2`.
    pub multiplicities: Vec<Option<i64>>,
    /// `γ_j` for the interior vertices.
    pub transitions: Vec<i64>,
    pub regular: bool,
}

impl FanOut {
    pub fn new(rays: &[WeightVector], fan: &RegularFan2D, mult: Vec<Option<i64>>, gammas: Vec<i64>) -> Self {
        Self {
            dual_rays: rays.iter().map(w).collect(),
            vertices: fan.vertices.clone(),
            multiplicities: mult,
            transitions: gammas,
            regular: fan.is_regular(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    pub fan: FanOut,
}

// Invariants.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceRecordOut {
    pub index: usize,
    pub name: String,
    pub weight: Vec<i64>,
    pub d_value: i64,
    pub endpoints: [Vec<i64>; 2],
    pub face_function: String,
    pub polar_weight: Option<Vec<i64>>,
    pub polar_degree: Option<i64>,
    pub r_star: Valued<i64>,
    pub r_star_det: Option<i64>,
    pub chi_star: Option<i64>,
}

impl From<&FaceRecord> for FaceRecordOut {
    fn from(r: &FaceRecord) -> Self {
        Self {
            index: r.index,
            name: r.name(),
            weight: w(&r.weight),
            d_value: r.d_value,
            endpoints: r.endpoints.clone(),
            face_function: r.face_function.to_string(),
            polar_weight: r.polar_weight.as_ref().map(w),
            polar_degree: r.m,
            r_star: Valued::new(r.r_star, r.r_route),
            r_star_det: r.r_star_det,
            chi_star: r.chi_star,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaOut {
    /// `(1-t^d)^e` factors, positive exponents first.
    pub text: String,
    /// `[d, e]` pairs in increasing `d`.
    pub factors: Vec<(u64, i64)>,
    pub route: &'static str,
}

impl ZetaOut {
    pub fn new(z: &ZetaFunction, route: Route) -> Self {
        Self { text: z.to_string(), factors: z.factors(), route: route.name() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharPolyOut {
    /// Coefficients of `ζ(t)(1 − t)` in increasing degree.
    pub coeffs: Vec<i64>,
    pub text: String,
    pub route: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormsOut {
    pub polar_weight: Vec<i64>,
    pub polar_degree: i64,
    pub lkn: i64,
    pub mu: i64,
    pub zeta: String,
}

impl From<&ClosedForms> for ClosedFormsOut {
    fn from(c: &ClosedForms) -> Self {
        Self { polar_weight: w(&c.polar_weight), polar_degree: c.d_p, lkn: c.lkn, mu: c.mu, zeta: c.zeta.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantsOut {
    pub faces: Vec<FaceRecordOut>,
    pub a1_abs: Option<i64>,
    pub a2_abs: Option<i64>,
    pub lkn: Valued<i64>,
    /// `χ(F*) = Σ −r*_j m_j`.
    pub chi_f_star: Valued<i64>,
    pub chi_f: Valued<i64>,
    pub mu: Valued<i64>,
    pub zeta: ZetaOut,
    pub char_poly: CharPolyOut,
    pub closed_forms: Option<ClosedFormsOut>,
    pub warnings: Vec<String>,
}

impl From<&CurveInvariants> for InvariantsOut {
    fn from(c: &CurveInvariants) -> Self {
        Self {
            faces: c.per_face.iter().map(FaceRecordOut::from).collect(),
            a1_abs: c.a1_abs,
            a2_abs: c.a2_abs,
            lkn: Valued::new(c.lkn, c.routes.lkn),
            chi_f_star: Valued::new(c.per_face.iter().filter_map(|r| r.chi_star).sum(), Route::FaceFormula),
            chi_f: Valued::new(c.chi_f, c.routes.chi_f),
            mu: Valued::new(c.mu, c.routes.mu),
            zeta: ZetaOut::new(&c.zeta, c.routes.zeta),
            char_poly: CharPolyOut {
                coeffs: c.char_poly.clone(),
                text: invariants::format_poly(&c.char_poly),
                route: c.routes.zeta.name(),
            },
            closed_forms: c.closed_forms.as_ref().map(ClosedFormsOut::from),
            warnings: c.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    pub seed: u64,
    pub newton: NewtonOut,
    pub classification: ClassificationOut,
    pub nondegeneracy: NondegOut,
    pub fan: FanOut,
    pub invariants: InvariantsOut,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackerOut {
    pub cycles: usize,
    pub axis_components: usize,
    pub permutation: Vec<usize>,
    pub solutions_at_zero: Vec<Complex>,
    pub steps_used: usize,
    pub failures: Vec<String>,
}

impl From<&TrackerResult> for TrackerOut {
    fn from(t: &TrackerResult) -> Self {
        Self {
            cycles: t.cycles,
            axis_components: t.axis_components,
            permutation: t.permutation.clone(),
            solutions_at_zero: points(&t.solutions_at_zero),
            steps_used: t.steps_used,
            failures: t.failures.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LknReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    pub seed: u64,
    pub steps: usize,
    pub lkn: Valued<i64>,
    /// Present when the whole curve was tracked at once.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tracker: Option<TrackerOut>,
    /// Present when the count was summed over the faces of the boundary.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceRecordOut>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaReport {
    pub schema: u32,
    pub command: &'static str,
    pub input: Input,
    pub seed: u64,
    pub zeta: ZetaOut,
    pub char_poly: CharPolyOut,
    pub mu: Valued<i64>,
    pub chi_f: Valued<i64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorOut {
    pub stage: &'static str,
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub command: String,
    pub error: ErrorOut,
}
