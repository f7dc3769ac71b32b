//! Fast floating-point evaluation of a mixed polynomial and its Wirtinger
//! derivatives, using per-call power tables.

use num::complex::Complex64;

use crate::mixedpoly::MixedPolynomial;

#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    n: usize,
    coeffs: Vec<Complex64>,
    nu: Vec<Vec<i32>>,
    mu: Vec<Vec<i32>>,
}

impl Compiled {
    pub fn new(f: &MixedPolynomial) -> Self {
        let cast = |v: &[i64]| v.iter().map(|&e| e as i32).collect::<Vec<i32>>();
        Self {
            n: f.nvars(),
            coeffs: f.terms().iter().map(|t| t.coeff.to_complex()).collect(),
            nu: f.terms().iter().map(|t| cast(&t.nu)).collect(),
            mu: f.terms().iter().map(|t| cast(&t.mu)).collect(),
        }
    }

    /// `(f(z), Σ |term(z)|)`.
    pub fn eval_with_scale(&self, z: &[Complex64]) -> (Complex64, f64) {
        let (v, s, _) = self.eval_scales(z, false);
        (v, s)
    }

    /// Also returns, per variable, `Σ |term(z)| (ν_j + μ_j) / |z_j|`: the size
    /// of the first derivatives before any cancellation.
    fn eval_scales(&self, z: &[Complex64], with_dscale: bool) -> (Complex64, f64, Vec<f64>) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        let mut ds = vec![0.0; if with_dscale { self.n } else { 0 }];
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut t = *c;
            for j in 0..self.n {
                let (a, b) = (self.nu[k][j], self.mu[k][j]);
                if a != 0 {
                    t *= z[j].powi(a);
                }
                if b != 0 {
                    t *= z[j].conj().powi(b);
                }
            }
            let tn = t.norm();
            if with_dscale {
                for (j, d) in ds.iter_mut().enumerate() {
                    let e = self.nu[k][j] + self.mu[k][j];
                    if e != 0 {
                        *d += tn * f64::from(e.abs()) / z[j].norm();
                    }
                }
            }
            s += tn;
            v += t;
        }
        (v, s, ds)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.eval_with_scale(z).0
    }
}

/// `f` together with `∂f/∂z_j` and `∂f/∂z̄_j` for every variable.
#[derive(Clone, Debug)]
pub(crate) struct Jet {
    pub f: Compiled,
    pub dz: Vec<Compiled>,
    pub dzb: Vec<Compiled>,
}

pub(crate) struct JetValue {
    pub f: Complex64,
    pub scale: f64,
    /// Term-wise derivative magnitudes, see [`Compiled::eval_scales`].
    pub dscale: Vec<f64>,
    pub dz: Vec<Complex64>,
    pub dzb: Vec<Complex64>,
}

impl Jet {
    pub fn new(f: &MixedPolynomial) -> Self {
        let n = f.nvars();
        Self {
            f: Compiled::new(f),
            dz: (0..n).map(|j| Compiled::new(&f.wirtinger(j, false))).collect(),
            dzb: (0..n).map(|j| Compiled::new(&f.wirtinger(j, true))).collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> JetValue {
        let (f, scale, dscale) = self.f.eval_scales(z, true);
        JetValue {
            f,
            scale,
            dscale,
            dz: self.dz.iter().map(|d| d.eval(z)).collect(),
            dzb: self.dzb.iter().map(|d| d.eval(z)).collect(),
        }
    }
}

/// Optimal unit `α`, `‖conj(df) − α d̄f‖` over the variables in `active`,
/// and the squared term-wise derivative scale used to normalize it.
pub(crate) fn aligned_residual(v: &JetValue, active: &[usize]) -> (f64, Complex64, f64) {
    let mut h = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &j in active {
        let a = v.dz[j].conj();
        let b = v.dzb[j];
        h += a * b.conj();
        scale += v.dscale[j] * v.dscale[j];
    }
    let alpha = if h.norm() > 0.0 { h / h.norm() } else { Complex64::new(1.0, 0.0) };
    let r2: f64 = active.iter().map(|&j| (v.dz[j].conj() - alpha * v.dzb[j]).norm_sqr()).sum();
    (r2.sqrt(), alpha, scale)
}
