//! Regular fans subdividing the dual Newton diagram in the plane, their toric
//! charts, and polar-coordinate strict transforms along exceptional divisors.

use num::complex::Complex64;

use crate::error::{precondition, Result};
use crate::linalg;
use crate::mixedpoly::{GaussianRational, MixedPolynomial, UnimodularMatrix, WeightVector};
use crate::newton::{self, DualDiagram2D};

/// `P_0 = E1, P_1, …, P_ℓ, P_{ℓ+1} = E2` with `det(P_j, P_{j+1}) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularFan2D {
    pub vertices: Vec<[i64; 2]>,
}

fn det2(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

impl RegularFan2D {
    /// Number `ℓ` of interior vertices.
    pub fn interior_len(&self) -> usize {
        self.vertices.len() - 2
    }

    pub fn is_regular(&self) -> bool {
        self.vertices.windows(2).all(|w| det2(w[0], w[1]) == 1)
    }

    pub fn weight(&self, j: usize) -> WeightVector {
        WeightVector::new(self.vertices[j].to_vec())
    }
}

/// Hirzebruch–Jung chain strictly inside the cone `(a, b)`.
fn hj_chain(a: [i64; 2], b: [i64; 2], out: &mut Vec<[i64; 2]>) {
    let d = det2(a, b);
    if d == 1 {
        return;
    }
    // The unique c = (b + k a)/d with 0 < k < d is integral and det(a, c) = 1.
    let k = (1..d)
        .find(|k| (b[0] + k * a[0]) % d == 0 && (b[1] + k * a[1]) % d == 0)
        .expect("primitive cone generators");
    let c = [(b[0] + k * a[0]) / d, (b[1] + k * a[1]) / d];
    out.push(c);
    hj_chain(c, b, out);
}

pub fn regular_subdivide(d: &DualDiagram2D) -> RegularFan2D {
    let mut rays: Vec<[i64; 2]> = vec![[1, 0]];
    rays.extend(d.rays.iter().map(|r| [r.entries[0], r.entries[1]]));
    rays.push([0, 1]);
    let mut vertices = vec![rays[0]];
    for w in rays.windows(2) {
        hj_chain(w[0], w[1], &mut vertices);
        vertices.push(w[1]);
    }
    RegularFan2D { vertices }
}

/// Chart of the cone `(P_j, P_{j+1})`, `0 ≤ j ≤ ℓ`.
pub fn chart_matrix(fan: &RegularFan2D, j: usize) -> Result<UnimodularMatrix> {
    if j + 1 >= fan.vertices.len() {
        return precondition(format!("chart index {j} out of range 0..={}", fan.interior_len()));
    }
    UnimodularMatrix::from_columns(vec![fan.vertices[j].to_vec(), fan.vertices[j + 1].to_vec()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartTransition {
    pub j: usize,
    pub gamma: i64,
}

/// `γ_j` with `(P_j, P_{j+1})⁻¹ (P_{j−1}, P_j) = [[γ_j, 1], [−1, 0]]`.
pub fn transition_gamma(fan: &RegularFan2D, j: usize) -> Result<ChartTransition> {
    if j == 0 || j > fan.interior_len() {
        return precondition(format!("transition index {j} out of range 1..={}", fan.interior_len()));
    }
    let a = chart_matrix(fan, j)?;
    let b = chart_matrix(fan, j - 1)?;
    let m = a.inverse().mul(&b);
    let rows = m.rows();
    if rows[0][1] != 1 || rows[1] != [-1, 0] {
        return precondition(format!("fan is not regular at vertex {j}"));
    }
    Ok(ChartTransition { j, gamma: rows[0][0] })
}

/// Multiplicity of the pulled-back function along `Ẽ(P)`, i.e. `d(P; f)`.
pub fn multiplicity(f: &MixedPolynomial, p: &WeightVector) -> Result<i64> {
    Ok(newton::face(f, p)?.d_value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarTerm {
    pub coeff: GaussianRational,
    pub r_exp: i64,
    pub theta_coef: i64,
    pub u2_nu: i64,
    pub u2_mu: i64,
}

/// `f ∘ π_σ = r₁^d · Σ c r₁^{r_exp} e^{i θ_coef θ₁} u₂^{u2_nu} ū₂^{u2_mu}` in the
/// chart `(P_j, P_{j+1})` with `u₁ = r₁ e^{iθ₁}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarChartExpression {
    pub chart: usize,
    pub divisor_multiplicity: i64,
    pub terms: Vec<PolarTerm>,
}

impl PolarChartExpression {
    /// Value of the strict transform (the factor `r₁^d` removed).
    pub fn evaluate(&self, r1: f64, theta1: f64, u2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff.to_complex()
                    * r1.powi(t.r_exp as i32)
                    * Complex64::from_polar(1.0, t.theta_coef as f64 * theta1)
                    * u2.powi(t.u2_nu as i32)
                    * u2.conj().powi(t.u2_mu as i32)
            })
            .sum()
    }

    /// Value of the full pull-back `r₁^d` times the strict transform.
    pub fn evaluate_total(&self, r1: f64, theta1: f64, u2: Complex64) -> Complex64 {
        r1.powi(self.divisor_multiplicity as i32) * self.evaluate(r1, theta1, u2)
    }
}

pub fn strict_transform_polar(
    f: &MixedPolynomial,
    fan: &RegularFan2D,
    j: usize,
) -> Result<PolarChartExpression> {
    if f.nvars() != 2 {
        return precondition("toric charts are only available for n = 2");
    }
    if j == 0 || j > fan.interior_len() {
        return precondition(format!("chart index {j} out of range 1..={}", fan.interior_len()));
    }
    let pj = fan.vertices[j];
    let pk = fan.vertices[j + 1];
    let d = multiplicity(f, &fan.weight(j))?;
    let terms = f
        .terms()
        .iter()
        .map(|t| PolarTerm {
            coeff: t.coeff.clone(),
            r_exp: linalg::dot(&pj, &t.point()) - d,
            theta_coef: linalg::dot(&pj, &t.polar()),
            u2_nu: linalg::dot(&pk, &t.nu),
            u2_mu: linalg::dot(&pk, &t.mu),
        })
        .collect();
    Ok(PolarChartExpression { chart: j, divisor_multiplicity: d, terms })
}

/// The terms with `r_exp = 0`: the chart equation of `Ṽ ∩ Ẽ(P_j)`.
pub fn exceptional_intersection(
    f: &MixedPolynomial,
    fan: &RegularFan2D,
    j: usize,
) -> Result<PolarChartExpression> {
    let mut e = strict_transform_polar(f, fan, j)?;
    e.terms.retain(|t| t.r_exp == 0);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan_of(rays: &[[i64; 2]]) -> RegularFan2D {
        regular_subdivide(&DualDiagram2D {
            rays: rays.iter().map(|r| WeightVector::new(r.to_vec())).collect(),
        })
    }

    fn p(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse_with(s, Some(2)).unwrap()
    }

    #[test]
    fn explicit_fans() {
        assert_eq!(fan_of(&[[2, 3]]).vertices, vec![[1, 0], [1, 1], [2, 3], [1, 2], [0, 1]]);
        assert_eq!(fan_of(&[[1, 1]]).vertices, vec![[1, 0], [1, 1], [0, 1]]);
        assert_eq!(fan_of(&[[1, 2]]).vertices, vec![[1, 0], [1, 1], [1, 2], [0, 1]]);
        assert_eq!(fan_of(&[]).vertices, vec![[1, 0], [0, 1]]);
    }

    #[test]
    fn chart_matrices() {
        let fan = fan_of(&[[2, 3]]);
        assert_eq!(chart_matrix(&fan, 2).unwrap().rows(), &[vec![2, 1], vec![3, 2]]);
        assert_eq!(chart_matrix(&fan, 0).unwrap().rows(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(chart_matrix(&fan_of(&[]), 0).unwrap(), UnimodularMatrix::identity(2));
        assert!(chart_matrix(&fan, 4).is_err());
    }

    #[test]
    fn transition_integers() {
        let fan = fan_of(&[[2, 3]]);
        assert_eq!(transition_gamma(&fan, 1).unwrap().gamma, 3);
        assert_eq!(transition_gamma(&fan_of(&[[1, 1]]), 1).unwrap().gamma, 1);
        assert!(transition_gamma(&fan, 0).is_err());
        assert!(transition_gamma(&fan, 4).is_err());
    }

    #[test]
    fn multiplicities() {
        let cusp = p("z2^2 - z1^3");
        let w = |a, b| WeightVector::new(vec![a, b]);
        assert_eq!(multiplicity(&cusp, &w(2, 3)).unwrap(), 6);
        assert_eq!(multiplicity(&cusp, &w(1, 1)).unwrap(), 2);
        assert_eq!(multiplicity(&cusp, &w(1, 2)).unwrap(), 3);
        assert_eq!(multiplicity(&p("z2^2 - z1^2*zb1"), &w(2, 3)).unwrap(), 6);
        assert!(multiplicity(&MixedPolynomial::zero(2), &w(1, 1)).is_err());
    }

    #[test]
    fn blow_up_chart_exceptional_circle() {
        let f = p("zb1^2 - z2^2");
        let fan = fan_of(&[[1, 1]]);
        let e = exceptional_intersection(&f, &fan, 1).unwrap();
        assert_eq!(e.terms.len(), 2);
        // Solutions are u2 = ±e^{-2iθ}: on the unit circle.
        for k in 0..12 {
            let th = 0.5 * k as f64;
            for s in [1.0, -1.0] {
                let u2 = Complex64::from_polar(s, -2.0 * th);
                assert!(e.evaluate(0.0, th, u2).norm() < 1e-12);
                assert!(e.evaluate(0.0, th, u2 * 1.1).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn cusp_chart_exceptional_curve() {
        let f = p("z2^2 - z1^2*zb1");
        let fan = fan_of(&[[2, 3]]);
        let e = exceptional_intersection(&f, &fan, 2).unwrap();
        assert_eq!(e.divisor_multiplicity, 6);
        // r2 e^{3iθ2} = e^{-4iθ1} has r2 = 1 and three arguments θ2.
        for k in 0..10 {
            let th1 = 0.37 * k as f64;
            for m in 0..3 {
                let th2 = (-4.0 * th1 + 2.0 * std::f64::consts::PI * m as f64) / 3.0;
                assert!(e.evaluate(0.0, th1, Complex64::from_polar(1.0, th2)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vertex_chart_is_a_single_monomial() {
        let e = exceptional_intersection(&p("z2^2 - z1^3"), &fan_of(&[[2, 3]]), 1).unwrap();
        assert_eq!(e.terms.len(), 1);
    }

    #[test]
    fn strict_transform_reproduces_pullback() {
        let f = p("z1^3*zb1^2 + (2-i)*z1^2*z2^2 + z2^3*zb2 + z1*zb2^4");
        let d = newton::dual_diagram(&f).unwrap();
        let fan = regular_subdivide(&d);
        for j in 1..=fan.interior_len() {
            let st = strict_transform_polar(&f, &fan, j).unwrap();
            assert_eq!(st.terms.len(), f.terms().len());
            assert_eq!(st.terms.iter().map(|t| t.r_exp).min(), Some(0));
            let g = f.pullback(&chart_matrix(&fan, j).unwrap());
            for k in 0..10 {
                let (r1, th, u2) = (0.3 + 0.07 * k as f64, 0.9 * k as f64, Complex64::new(0.8, -0.3 + 0.1 * k as f64));
                let a = st.evaluate_total(r1, th, u2);
                let b = g.evaluate(&[Complex64::from_polar(r1, th), u2]);
                assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-300), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn neighbouring_charts_agree() {
        let f = p("z2^2 - z1^3 + z1^2*zb2");
        let fan = fan_of(&[[2, 3]]);
        for j in 1..fan.interior_len() {
            let a = strict_transform_polar(&f, &fan, j).unwrap();
            let b = strict_transform_polar(&f, &fan, j + 1).unwrap();
            let gamma = transition_gamma(&fan, j + 1).unwrap().gamma;
            for k in 0..10 {
                let (r, th) = (0.4 + 0.05 * k as f64, 0.7 * k as f64);
                let v = Complex64::new(0.6 + 0.02 * k as f64, 0.5);
                let u = Complex64::from_polar(r, th);
                // Chart j+1 coordinates: u' = u^γ v, v' = u^{-1}.
                let u_next = u.powi(gamma as i32) * v;
                let v_next = u.inv();
                let lhs = a.evaluate_total(r, th, v);
                let rhs = b.evaluate_total(u_next.norm(), u_next.arg(), v_next);
                assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm(), "{lhs} vs {rhs}");
                assert!((v_next.norm() - 1.0 / r).abs() < 1e-12);
            }
        }
    }
}
