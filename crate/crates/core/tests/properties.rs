use mixsing::newton;
use mixsing::nondegen::critical_residual;
use mixsing::{classify, GaussianRational, MixedMonomial, MixedPolynomial, UnimodularMatrix, WeightVector};
use num::complex::Complex64;
use proptest::prelude::*;

fn exps(n: usize, max: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=max, n)
}

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -4i64..=4)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| GaussianRational::from_ints(a, b))
}

fn monomial(n: usize, max: i64) -> impl Strategy<Value = MixedMonomial> {
    (coeff(), exps(n, max), exps(n, max)).prop_map(|(coeff, nu, mu)| MixedMonomial { coeff, nu, mu })
}

fn poly(n: usize, max: i64, terms: usize) -> impl Strategy<Value = MixedPolynomial> {
    prop::collection::vec(monomial(n, max), 1..=terms).prop_map(move |ts| {
        MixedPolynomial::from_terms(n, ts.into_iter().map(|t| (t.coeff, t.nu, t.mu)))
    })
}

fn weight(n: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(-5i64..=5, n).prop_map(WeightVector::new)
}

fn positive_weight(n: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(1i64..=6, n).prop_map(WeightVector::new)
}

/// Products of elementary shears and swaps, so always unimodular.
fn unimodular2() -> impl Strategy<Value = UnimodularMatrix> {
    prop::collection::vec((0usize..3, -2i64..=2), 0..4).prop_map(|ops| {
        let mut m = UnimodularMatrix::identity(2);
        for (kind, c) in ops {
            let e = match kind {
                0 => vec![vec![1, c], vec![0, 1]],
                1 => vec![vec![1, 0], vec![c, 1]],
                _ => vec![vec![0, 1], vec![1, 0]],
            };
            m = m.mul(&UnimodularMatrix::from_rows(e).unwrap());
        }
        m
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.4f64..1.8, 0.0f64..std::f64::consts::TAU), n)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

fn mono_poly(n: usize, m: &MixedMonomial) -> MixedPolynomial {
    MixedPolynomial::monomial(n, m.coeff.clone(), m.nu.clone(), m.mu.clone())
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degrees_are_additive(a in monomial(3, 4), b in monomial(3, 4), p in weight(3)) {
        let prod = &mono_poly(3, &a) * &mono_poly(3, &b);
        let t = &prod.terms()[0];
        prop_assert_eq!(t.rdeg(&p), a.rdeg(&p) + b.rdeg(&p));
        prop_assert_eq!(t.pdeg(&p), a.pdeg(&p) + b.pdeg(&p));
    }

    #[test]
    fn conjugation_is_an_involution_flipping_polar_signs(
        f in poly(3, 3, 4),
        set in prop::sample::subsequence(vec![0usize, 1, 2], 0..=3),
        p in weight(3),
    ) {
        let g = f.conjugate_vars(&set);
        prop_assert_eq!(&g.conjugate_vars(&set), &f);
        prop_assert_eq!(p.conjugate(&set).conjugate(&set), p.clone());
        let pq = p.conjugate(&set);
        let mut a: Vec<(i64, i64)> = f.terms().iter().map(|t| (t.rdeg(&p), t.pdeg(&pq))).collect();
        let mut b: Vec<(i64, i64)> = g.terms().iter().map(|t| (t.rdeg(&p), t.pdeg(&p))).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pullback_is_covariant(f in poly(2, 3, 3), s in unimodular2(), p in weight(2), u in point(2)) {
        let g = f.pullback(&s);
        let sp = s.apply(&p);
        let mut a: Vec<(i64, i64)> = g.terms().iter().map(|t| (t.rdeg(&p), t.pdeg(&p))).collect();
        let mut b: Vec<(i64, i64)> = f.terms().iter().map(|t| (t.rdeg(&sp), t.pdeg(&sp))).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        // π_σ(u)_j = ∏_k u_k^{σ_jk}
        let z: Vec<Complex64> =
            (0..2).map(|j| (0..2).fold(Complex64::new(1.0, 0.0), |acc, k| acc * u[k].powi(s.rows()[j][k] as i32))).collect();
        let scale: f64 = f.terms().iter().map(|t| t.evaluate(&z).norm()).sum();
        prop_assert!(close(g.evaluate(&u), f.evaluate(&z), scale));
    }

    #[test]
    fn pullbacks_compose(f in poly(2, 3, 3), a in unimodular2(), b in unimodular2()) {
        prop_assert_eq!(f.pullback(&a).pullback(&b), f.pullback(&a.mul(&b)));
        prop_assert_eq!(f.pullback(&a).pullback(&a.inverse()), f);
    }

    #[test]
    fn face_functions_are_idempotent(f in poly(3, 4, 5), p in positive_weight(3)) {
        let fp = newton::face_function(&f, &p).unwrap();
        prop_assert_eq!(newton::face_function(&fp, &p).unwrap(), fp.clone());
        let d = newton::min_degree(&f, &p).unwrap();
        prop_assert_eq!(fp.radial_degree(&p), Some(d));
    }

    #[test]
    fn critical_residual_covanishes_under_monomial_multiplication(
        f in poly(2, 3, 3),
        m in monomial(2, 2),
        z in point(2),
    ) {
        // g = f − f(z) vanishes at z, so d(mg) = m·dg there and the residual
        // scales by |m(z)|.
        let c = f.evaluate(&z);
        let g = &f - &MixedPolynomial::constant(2, approx(c));
        let gz = g.evaluate(&z).norm();
        let mg = &mono_poly(2, &m) * &g;
        let (r, _) = critical_residual(&g, &z).unwrap();
        let (rm, _) = critical_residual(&mg, &z).unwrap();
        let mz = m.evaluate(&z).norm();
        // The leftover |g(z)| perturbs d(mg) by at most |g(z)|·|dm|.
        let dm: f64 = (0..2).map(|j| {
            let e = (m.nu[j] + m.mu[j]) as f64;
            e * mz / z[j].norm()
        }).sum();
        prop_assert!((rm - mz * r).abs() <= 1e-8 * (1.0 + mz * r) + 2.0 * gz * dm);
    }

    #[test]
    fn polar_type_follows_unimodular_maps(
        f in poly(2, 3, 2),
        s in unimodular2(),
    ) {
        let g = f.pullback(&s);
        match (classify::polar_type(&f), classify::polar_type(&g)) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                prop_assert_eq!(a.d_p.abs(), b.d_p.abs());
                // rdeg/pdeg transform by σ: σ · p_g is ±p_f.
                let back = s.apply(&b.p);
                let neg = WeightVector::new(a.p.entries.iter().map(|x| -x).collect());
                prop_assert!(back == a.p || back == neg, "{} vs {}", back, a.p);
            }
            (a, b) => prop_assert!(false, "polar type lost: {:?} vs {:?}", a, b),
        }
    }
}

/// Nearest Gaussian rational with denominator 2^40.
fn approx(c: Complex64) -> GaussianRational {
    let den = 1i64 << 40;
    GaussianRational::from_fracs((c.re * den as f64).round() as i64, den, (c.im * den as f64).round() as i64, den)
}
