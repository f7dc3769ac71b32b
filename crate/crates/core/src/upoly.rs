//! Univariate polynomials over `Q(i)`: exact square-free decomposition and
//! numeric roots with exact multiplicities.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::mixedpoly::GaussianRational;

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<GaussianRational>);

impl UPoly {
    pub fn new(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(GaussianRational::is_zero) {
            c.pop();
        }
        Self(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `0` for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &GaussianRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c.scale_int(k as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        Self::new(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = GaussianRational::zero();
        Self::new(
            (0..n).map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z)).collect(),
        )
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.0.len();
        if r.len() < dl {
            return (Self::new(vec![]), self.clone());
        }
        let inv = d.lead().recip();
        let mut q = vec![GaussianRational::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dl - 1] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm: `self = c · ∏ f_i^i` with square-free, pairwise
    /// coprime monic `f_i`. Returns the non-constant `(f_i, i)`.
    pub fn square_free(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let d = self.derivative();
        let c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut y = d.divrem(&c).0;
        let mut z = y.sub(&w.derivative());
        let mut i = 1;
        while w.degree() > 0 {
            let g = w.gcd(&z);
            if g.degree() > 0 {
                out.push((g.clone(), i));
            }
            w = w.divrem(&g).0;
            y = z.divrem(&g).0;
            z = y.sub(&w.derivative());
            i += 1;
        }
        out
    }

    #[cfg(test)]
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    }

    /// Roots of a square-free polynomial: exact for degree one, otherwise
    /// companion-matrix eigenvalues refined by Newton steps.
    fn simple_roots(&self) -> Vec<Complex64> {
        let m = self.monic();
        let deg = m.degree();
        if deg == 0 {
            return vec![];
        }
        if deg == 1 {
            return vec![(-&m.0[0]).to_complex()];
        }
        let c: Vec<Complex64> = m.0.iter().map(GaussianRational::to_complex).collect();
        // QR can stall on symmetric root sets; a shift of the variable breaks
        // the symmetry.
        let shifts = [Complex64::new(0.0, 0.0), Complex64::new(0.31, 0.17), Complex64::new(-0.23, 0.41)];
        let eig = shifts
            .iter()
            .find_map(|&s| Some(companion_eigenvalues(&taylor_shift(&c, s))?.into_iter().map(|y| y + s).collect()))
            .unwrap_or_else(|| durand_kerner(&c));
        eig.iter()
            .map(|&r0| {
                let mut r = r0;
                for _ in 0..8 {
                    let (p, dp) = Self::eval_with_derivative(&c, r);
                    if dp.norm() == 0.0 {
                        break;
                    }
                    let step = p / dp;
                    r -= step;
                    if step.norm() <= 1e-16 * r.norm().max(1.0) {
                        break;
                    }
                }
                r
            })
            .collect()
    }

    /// All complex roots with multiplicities, in a deterministic order.
    pub fn roots(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = self
            .square_free()
            .into_iter()
            .flat_map(|(f, m)| f.simple_roots().into_iter().map(move |r| (r, m)))
            .collect();
        out.sort_by(|a, b| {
            a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)).then(a.1.cmp(&b.1))
        });
        out
    }
}

/// Coefficients (increasing degree, monic) of `p(y + s)`.
fn taylor_shift(c: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let hi = a[j + 1];
            a[j] += s * hi;
        }
    }
    a
}

fn companion_eigenvalues(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = c.len() - 1;
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i];
    }
    let schur = Schur::try_new(comp, f64::EPSILON, 1000 * deg)?;
    schur.eigenvalues().map(|e| e.iter().copied().collect())
}

/// Simultaneous Weierstrass iteration for a monic polynomial.
fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let radius = 1.0 + c[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(0.4 * radius, 0.9);
    let mut r: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let p = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * r[i] + a);
            let den = (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (r[i] - r[j]));
            let step = p / den;
            r[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| GaussianRational::from_ints(x, 0)).collect())
    }

    #[test]
    fn square_free_of_repeated_factor() {
        // (w - 1)^2 (w + 2) = w^3 - 3w + 2
        let p = q(&[2, -3, 0, 1]);
        let sf = p.square_free();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (q(&[2, 1]), 1));
        assert_eq!(sf[1], (q(&[-1, 1]), 2));
        let r = p.roots();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - Complex64::new(-2.0, 0.0)).norm() < 1e-14 && r[0].1 == 1);
        assert!((r[1].0 - Complex64::new(1.0, 0.0)).norm() < 1e-14 && r[1].1 == 2);
    }

    #[test]
    fn roots_of_unity() {
        let p = q(&[-1, 0, 0, 0, 0, 1]);
        let r = p.roots();
        assert_eq!(r.len(), 5);
        for (z, m) in r {
            assert_eq!(m, 1);
            assert!((z.norm() - 1.0).abs() < 1e-13);
            assert!(p.eval(z).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_coefficients() {
        // (w - i)^3
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        let lin = UPoly::new(vec![-&i, one]);
        let mut p = UPoly::new(vec![GaussianRational::one()]);
        for _ in 0..3 {
            let mut c = vec![GaussianRational::zero(); p.0.len() + 1];
            for (a, x) in p.0.iter().enumerate() {
                for (b, y) in lin.0.iter().enumerate() {
                    c[a + b] = &c[a + b] + &(x * y);
                }
            }
            p = UPoly::new(c);
        }
        let r = p.roots();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 3);
        assert!((r[0].0 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_roots_converge() {
        // w^4 + w^2 + 1 stalls unshifted QR.
        let r = q(&[1, 0, 1, 0, 1]).roots();
        assert_eq!(r.len(), 4);
        for (z, m) in r {
            assert_eq!(m, 1);
            assert!((z.powu(6) - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{z}");
            assert!((z * z - Complex64::new(1.0, 0.0)).norm() > 0.1);
        }
    }

    #[test]
    fn shift_and_fallback_agree() {
        let c: Vec<Complex64> = [2.0, -3.0, 0.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let s = Complex64::new(0.31, 0.17);
        let shifted = taylor_shift(&c, s);
        let y = Complex64::new(1.0, 0.0) - s;
        let val = shifted.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * y + a);
        assert!(val.norm() < 1e-14);
        let c: Vec<Complex64> = [6.0, -5.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r: Vec<f64> = durand_kerner(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 2.0).abs() < 1e-12 && (r[1] - 3.0).abs() < 1e-12, "{r:?}");
    }
}
