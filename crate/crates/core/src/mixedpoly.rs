//! Mixed polynomials `f(z, z̄) = Σ c z^ν z̄^μ` with exact Gaussian-rational
//! coefficients, their degrees under weight vectors, and the parser/printer.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{precondition, Error, Result};
use crate::linalg;

/// An element of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `num/den + i*inum/iden`.
    pub fn from_fracs(num: i64, den: i64, inum: i64, iden: i64) -> Self {
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::new(inum.into(), iden.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        Self::new(&self.re / &n, -&self.im / &n)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        Self::new(&self.re * &k, &self.im * &k)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = MixedPolynomial::constant(0, self.clone());
        write!(f, "{p}")
    }
}

/// One term `coeff * z^nu * zbar^mu`. Exponents may be negative only for
/// Laurent intermediates produced by face factorizations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedMonomial {
    pub coeff: GaussianRational,
    pub nu: Vec<i64>,
    pub mu: Vec<i64>,
}

impl MixedMonomial {
    /// The support point `nu + mu`.
    pub fn point(&self) -> Vec<i64> {
        self.nu.iter().zip(&self.mu).map(|(a, b)| a + b).collect()
    }

    /// The polar exponent `nu - mu`.
    pub fn polar(&self) -> Vec<i64> {
        self.nu.iter().zip(&self.mu).map(|(a, b)| a - b).collect()
    }

    pub fn rdeg(&self, p: &WeightVector) -> i64 {
        linalg::dot(&p.entries, &self.point())
    }

    pub fn pdeg(&self, p: &WeightVector) -> i64 {
        linalg::dot(&p.entries, &self.polar())
    }

    pub fn is_laurent(&self) -> bool {
        self.nu.iter().chain(&self.mu).any(|&e| e < 0)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        let mut v = self.coeff.to_complex();
        for (j, zj) in z.iter().enumerate() {
            if self.nu[j] != 0 {
                v *= zj.powi(self.nu[j] as i32);
            }
            if self.mu[j] != 0 {
                v *= zj.conj().powi(self.mu[j] as i32);
            }
        }
        v
    }
}

/// A canonical finite sum of mixed monomials in `n` variables: like terms
/// merged, zero coefficients dropped, terms sorted by `(nu, mu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedPolynomial {
    n: usize,
    terms: Vec<MixedMonomial>,
}

type Key = (Vec<i64>, Vec<i64>);

impl MixedPolynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self::from_terms(n, [(c, vec![0; n], vec![0; n])])
    }

    pub fn monomial(n: usize, c: GaussianRational, nu: Vec<i64>, mu: Vec<i64>) -> Self {
        Self::from_terms(n, [(c, nu, mu)])
    }

    /// `z_j` (0-based index).
    pub fn var(n: usize, j: usize) -> Self {
        let mut nu = vec![0; n];
        nu[j] = 1;
        Self::monomial(n, GaussianRational::one(), nu, vec![0; n])
    }

    /// `z̄_j` (0-based index).
    pub fn conj_var(n: usize, j: usize) -> Self {
        let mut mu = vec![0; n];
        mu[j] = 1;
        Self::monomial(n, GaussianRational::one(), vec![0; n], mu)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (GaussianRational, Vec<i64>, Vec<i64>)>,
    {
        let mut map: BTreeMap<Key, GaussianRational> = BTreeMap::new();
        for (c, nu, mu) in terms {
            assert!(nu.len() == n && mu.len() == n, "exponent length must equal n");
            let e = map.entry((nu, mu)).or_insert_with(GaussianRational::zero);
            *e = &*e + &c;
        }
        Self::from_map(n, map)
    }

    fn from_map(n: usize, map: BTreeMap<Key, GaussianRational>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((nu, mu), coeff)| MixedMonomial { coeff, nu, mu })
            .collect();
        Self { n, terms }
    }

    fn to_map(&self) -> BTreeMap<Key, GaussianRational> {
        self.terms
            .iter()
            .map(|t| ((t.nu.clone(), t.mu.clone()), t.coeff.clone()))
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[MixedMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.iter().any(MixedMonomial::is_laurent)
    }

    /// No `z̄` appears.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.iter().all(|t| t.mu.iter().all(|&e| e == 0))
    }

    /// Distinct support points `nu + mu`, sorted.
    pub fn support_points(&self) -> Vec<Vec<i64>> {
        let mut pts: Vec<Vec<i64>> = self.terms.iter().map(MixedMonomial::point).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|t| (&t.coeff * c, t.nu.clone(), t.mu.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, GaussianRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiply by `z^nu z̄^mu` (negative shifts allowed).
    pub fn shift(&self, nu: &[i64], mu: &[i64]) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().map(|t| {
                (
                    t.coeff.clone(),
                    t.nu.iter().zip(nu).map(|(a, b)| a + b).collect(),
                    t.mu.iter().zip(mu).map(|(a, b)| a + b).collect(),
                )
            }),
        )
    }

    /// The common radial degree if every term has the same `rdeg_P`.
    pub fn radial_degree(&self, p: &WeightVector) -> Option<i64> {
        let mut it = self.terms.iter().map(|t| t.rdeg(p));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// The common polar degree if every term has the same `pdeg_P`.
    pub fn polar_degree(&self, p: &WeightVector) -> Option<i64> {
        let mut it = self.terms.iter().map(|t| t.pdeg(p));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Substitute `z_j <-> z̄_j` for each `j` in `set` (0-based).
    pub fn conjugate_vars(&self, set: &[usize]) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().map(|t| {
                let (mut nu, mut mu) = (t.nu.clone(), t.mu.clone());
                for &j in set {
                    std::mem::swap(&mut nu[j], &mut mu[j]);
                }
                (t.coeff.clone(), nu, mu)
            }),
        )
    }

    /// `∂f/∂z_j` when `bar` is false, `∂f/∂z̄_j` otherwise.
    pub fn wirtinger(&self, j: usize, bar: bool) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().filter_map(|t| {
                let (mut nu, mut mu) = (t.nu.clone(), t.mu.clone());
                let e = if bar { &mut mu[j] } else { &mut nu[j] };
                if *e == 0 {
                    return None;
                }
                let c = t.coeff.scale_int(*e);
                *e -= 1;
                Some((c, nu, mu))
            }),
        )
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n);
        self.terms.iter().map(|t| t.evaluate(z)).sum()
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn evaluate_exact(&self, z: &[GaussianRational]) -> GaussianRational {
        assert_eq!(z.len(), self.n);
        let mut acc = GaussianRational::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (j, zj) in z.iter().enumerate() {
                v = &v * &zj.pow(t.nu[j]);
                v = &v * &zj.conj().pow(t.mu[j]);
            }
            acc = &acc + &v;
        }
        acc
    }

    /// `f ∘ π_σ`: exponent rows transform as `nu -> nu·σ`, `mu -> mu·σ`.
    pub fn pullback(&self, sigma: &UnimodularMatrix) -> Self {
        assert_eq!(sigma.dim(), self.n);
        let apply = |e: &[i64]| -> Vec<i64> {
            (0..self.n).map(|k| (0..self.n).map(|j| e[j] * sigma.rows[j][k]).sum()).collect()
        };
        Self::from_terms(
            self.n,
            self.terms.iter().map(|t| (t.coeff.clone(), apply(&t.nu), apply(&t.mu))),
        )
    }

    /// `f^I`: drop every term that involves a variable outside `set`.
    pub fn restrict(&self, set: &[usize]) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|t| {
                    (0..self.n).all(|j| set.contains(&j) || (t.nu[j] == 0 && t.mu[j] == 0))
                })
                .cloned()
                .collect(),
        }
    }

    /// Re-index onto the variables in `set` (in the given order), dropping the
    /// others. Callers ensure the dropped variables do not occur.
    pub fn compress(&self, set: &[usize]) -> Self {
        Self::from_terms(
            set.len(),
            self.terms.iter().map(|t| {
                (
                    t.coeff.clone(),
                    set.iter().map(|&j| t.nu[j]).collect(),
                    set.iter().map(|&j| t.mu[j]).collect(),
                )
            }),
        )
    }

    /// Variables that occur in some term.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| self.terms.iter().any(|t| t.nu[j] != 0 || t.mu[j] != 0))
            .collect()
    }

    /// Parse with the number of variables inferred from the largest index.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, None)
    }

    /// Parse; when `n` is given every variable index must be at most `n`.
    pub fn parse_with(text: &str, n: Option<usize>) -> Result<Self> {
        let src: Vec<(usize, u8)> =
            text.bytes().enumerate().filter(|(_, b)| !b.is_ascii_whitespace()).collect();
        let mut p = Parser { src: &src, i: 0, end: text.len() };
        let raw = p.poly()?;
        if p.i < src.len() {
            return Err(p.err("unexpected character"));
        }
        let max_idx = raw.keys().flat_map(|(nu, mu)| nu.keys().chain(mu.keys())).max().copied();
        let n = match (n, max_idx) {
            (Some(n), Some(m)) if m > n => {
                return precondition(format!("variable index {m} exceeds n = {n}"))
            }
            (Some(n), _) => n,
            (None, m) => m.unwrap_or(0),
        };
        let dense = |e: &BTreeMap<usize, i64>| -> Vec<i64> {
            (1..=n).map(|j| e.get(&j).copied().unwrap_or(0)).collect()
        };
        Ok(Self::from_terms(n, raw.into_iter().map(|((nu, mu), c)| (c, dense(&nu), dense(&mu)))))
    }
}

impl FromStr for MixedPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Add for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn add(self, o: &MixedPolynomial) -> MixedPolynomial {
        assert_eq!(self.n, o.n);
        let mut map = self.to_map();
        for t in &o.terms {
            let e = map.entry((t.nu.clone(), t.mu.clone())).or_insert_with(GaussianRational::zero);
            *e = &*e + &t.coeff;
        }
        MixedPolynomial::from_map(self.n, map)
    }
}

impl Neg for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn neg(self) -> MixedPolynomial {
        MixedPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| MixedMonomial { coeff: -&t.coeff, ..t.clone() })
                .collect(),
        }
    }
}

impl Sub for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn sub(self, o: &MixedPolynomial) -> MixedPolynomial {
        self + &(-o)
    }
}

impl Mul for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn mul(self, o: &MixedPolynomial) -> MixedPolynomial {
        assert_eq!(self.n, o.n);
        let mut map: BTreeMap<Key, GaussianRational> = BTreeMap::new();
        for a in &self.terms {
            for b in &o.terms {
                let nu = a.nu.iter().zip(&b.nu).map(|(x, y)| x + y).collect();
                let mu = a.mu.iter().zip(&b.mu).map(|(x, y)| x + y).collect();
                let e = map.entry((nu, mu)).or_insert_with(GaussianRational::zero);
                *e = &*e + &(&a.coeff * &b.coeff);
            }
        }
        MixedPolynomial::from_map(self.n, map)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    r.to_string()
}

/// Coefficient text for a coefficient already normalized to a positive
/// leading part; empty when it is `1` and variables follow.
fn fmt_coeff(c: &GaussianRational, has_vars: bool) -> String {
    if c.im.is_zero() {
        if c.re.is_one() && has_vars {
            return String::new();
        }
        return fmt_rat(&c.re);
    }
    let im_abs = c.im.abs();
    let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{}i", fmt_rat(&im_abs)) };
    if c.re.is_zero() {
        if im_abs.is_integer() {
            return im_txt;
        }
        return format!("({im_txt})");
    }
    let sign = if c.im.is_negative() { '-' } else { '+' };
    format!("({}{sign}{im_txt})", fmt_rat(&c.re))
}

fn fmt_vars(t: &MixedMonomial) -> Vec<String> {
    let mut out = Vec::new();
    for j in 0..t.nu.len() {
        for (name, e) in [("z", t.nu[j]), ("zb", t.mu[j])] {
            match e {
                0 => {}
                1 => out.push(format!("{name}{}", j + 1)),
                e => out.push(format!("{name}{}^{e}", j + 1)),
            }
        }
    }
    out
}

impl fmt::Display for MixedPolynomial {
    /// Canonical text accepted by the parser (Laurent terms print with
    /// negative exponents, which the parser rejects).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let negative = if t.coeff.re.is_zero() {
                t.coeff.im.is_negative()
            } else {
                t.coeff.re.is_negative()
            };
            let c = if negative { -&t.coeff } else { t.coeff.clone() };
            let vars = fmt_vars(t);
            let mut parts = Vec::new();
            let ct = fmt_coeff(&c, !vars.is_empty());
            if !ct.is_empty() {
                parts.push(ct);
            }
            parts.extend(vars);
            let body = parts.join("*");
            match (k, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

type RawExp = BTreeMap<usize, i64>;
type RawPoly = BTreeMap<(RawExp, RawExp), GaussianRational>;

struct Parser<'a> {
    src: &'a [(usize, u8)],
    i: usize,
    end: usize,
}

fn raw_add(a: &mut RawPoly, b: RawPoly, negate: bool) {
    for (k, c) in b {
        let e = a.entry(k).or_insert_with(GaussianRational::zero);
        *e = if negate { &*e - &c } else { &*e + &c };
    }
    a.retain(|_, c| !c.is_zero());
}

fn raw_mul(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let merge = |x: &RawExp, y: &RawExp| {
        let mut m = x.clone();
        for (k, v) in y {
            *m.entry(*k).or_insert(0) += v;
        }
        m
    };
    let mut out = RawPoly::new();
    for ((an, am), ac) in a {
        for ((bn, bm), bc) in b {
            let e = out.entry((merge(an, bn), merge(am, bm))).or_insert_with(GaussianRational::zero);
            *e = &*e + &(ac * bc);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn raw_const(c: GaussianRational) -> RawPoly {
    let mut p = RawPoly::new();
    if !c.is_zero() {
        p.insert((RawExp::new(), RawExp::new()), c);
    }
    p
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.i).map(|&(_, b)| b)
    }

    fn pos(&self) -> usize {
        self.src.get(self.i).map_or(self.end, |&(p, _)| p)
    }

    fn err(&self, msg: &str) -> Error {
        let found = self.peek().map_or("end of input".to_string(), |b| format!("'{}'", b as char));
        Error::Parse { pos: self.pos(), msg: format!("{msg} (found {found})") }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<RawPoly> {
        let mut acc = RawPoly::new();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            raw_add(&mut acc, t, negate);
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(b'(' | b'i' | b'z' | b'0'..=b'9'))
    }

    fn term(&mut self) -> Result<RawPoly> {
        if !self.starts_factor() {
            return Err(self.err("expected a term"));
        }
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                if !self.starts_factor() {
                    return Err(self.err("expected a factor after '*'"));
                }
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.factor()?;
            acc = raw_mul(&acc, &f);
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.i;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected an unsigned integer"));
        }
        let digits: String = self.src[start..self.i].iter().map(|&(_, b)| b as char).collect();
        Ok(digits.parse().expect("digits"))
    }

    fn small_uint(&mut self, what: &str) -> Result<i64> {
        let pos = self.pos();
        self.uint()?
            .to_i64()
            .filter(|&v| v <= u32::MAX as i64)
            .ok_or(Error::Parse { pos, msg: format!("{what} too large") })
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat(b'^') {
            if self.peek() == Some(b'-') {
                return Err(self.err("negative exponent"));
            }
            self.small_uint("exponent")
        } else {
            Ok(1)
        }
    }

    fn rat(&mut self) -> Result<BigRational> {
        let a = self.uint()?;
        if self.eat(b'/') {
            let pos = self.pos();
            let b = self.uint()?;
            if b.is_zero() {
                return Err(Error::Parse { pos, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(a, b))
        } else if self.eat(b'.') {
            let start = self.i;
            let frac = self.uint()?;
            let scale = BigInt::from(10).pow((self.i - start) as u32);
            Ok(BigRational::new(a * &scale + frac, scale))
        } else {
            Ok(BigRational::from_integer(a))
        }
    }

    fn factor(&mut self) -> Result<RawPoly> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                if self.peek() == Some(b'^') {
                    let e = self.exponent()?;
                    let mut acc = raw_const(GaussianRational::one());
                    for _ in 0..e {
                        acc = raw_mul(&acc, &inner);
                    }
                    return Ok(acc);
                }
                Ok(inner)
            }
            Some(b'i') => {
                self.i += 1;
                Ok(raw_const(GaussianRational::i()))
            }
            Some(b'0'..=b'9') => {
                let r = self.rat()?;
                if self.eat(b'i') {
                    Ok(raw_const(GaussianRational::new(BigRational::zero(), r)))
                } else {
                    Ok(raw_const(GaussianRational::real(r)))
                }
            }
            Some(b'z') => {
                self.i += 1;
                let bar = self.eat(b'b');
                let pos = self.pos();
                let idx = self.small_uint("variable index")?;
                if idx == 0 {
                    return Err(Error::Parse { pos, msg: "variable indices start at 1".into() });
                }
                let e = self.exponent()?;
                let mut exp = RawExp::new();
                if e != 0 {
                    exp.insert(idx as usize, e);
                }
                let key = if bar { (RawExp::new(), exp) } else { (exp, RawExp::new()) };
                let mut p = RawPoly::new();
                p.insert(key, GaussianRational::one());
                Ok(p)
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

/// Integer weight vector `P = (p_1, …, p_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub entries: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Strict,
    NonNegative,
    Mixed,
}

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self { entries }
    }

    pub fn positivity(&self) -> Positivity {
        if self.entries.iter().all(|&p| p > 0) {
            Positivity::Strict
        } else if self.entries.iter().all(|&p| p >= 0) {
            Positivity::NonNegative
        } else {
            Positivity::Mixed
        }
    }

    pub fn is_primitive(&self) -> bool {
        linalg::gcd_all(&self.entries) == 1
    }

    pub fn primitive(&self) -> Self {
        Self::new(linalg::primitive(&self.entries))
    }

    /// `ι_J P`: negate the entries indexed by `set`.
    pub fn conjugate(&self, set: &[usize]) -> Self {
        let mut e = self.entries.clone();
        for &j in set {
            e[j] = -e[j];
        }
        Self::new(e)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Square integer matrix of determinant `±1`, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    rows: Vec<Vec<i64>>,
}

impl UnimodularMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return precondition("matrix is not square");
        }
        let d = linalg::det(&rows);
        if d.abs() != 1 {
            return precondition(format!("determinant {d} is not ±1"));
        }
        Ok(Self { rows })
    }

    pub fn from_columns(cols: Vec<Vec<i64>>) -> Result<Self> {
        let n = cols.len();
        Self::from_rows((0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    pub fn det(&self) -> i64 {
        linalg::det(&self.rows)
    }

    pub fn inverse(&self) -> Self {
        Self { rows: linalg::integer_inverse(&self.rows).expect("unimodular") }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { rows: linalg::mat_mul(&self.rows, &o.rows) }
    }

    /// `σ P` for a column weight vector.
    pub fn apply(&self, p: &WeightVector) -> WeightVector {
        WeightVector::new(self.rows.iter().map(|r| linalg::dot(r, &p.entries)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse(s).unwrap()
    }

    fn p2(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse_with(s, Some(2)).unwrap()
    }

    #[test]
    fn parses_and_prints_canonically() {
        let f = p("2z1*zb2 - 3zb1^2 + (1/2)z2");
        assert_eq!(f.nvars(), 2);
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.to_string(), "-3*zb1^2 + 1/2*z2 + 2*z1*zb2");
        assert_eq!(p(&f.to_string()), f);
    }

    #[test]
    fn complex_coefficients_round_trip() {
        for s in ["(1+1i)*z1 - (2-3/4i)*zb2", "3i*z1 - (3/2i)*z2^2", "i*z1*zb1", "-(1/3-i)*z1"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} -> {f}");
        }
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(p("0.5z1"), p("(1/2)*z1"));
        assert_eq!(p("1.25"), p("5/4"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(MixedPolynomial::parse("z1^-2"), Err(Error::Parse { .. })));
        assert!(matches!(MixedPolynomial::parse("z1 +"), Err(Error::Parse { .. })));
        assert!(matches!(MixedPolynomial::parse("z0"), Err(Error::Parse { .. })));
        assert!(matches!(MixedPolynomial::parse("1/0"), Err(Error::Parse { .. })));
        assert!(MixedPolynomial::parse_with("z3", Some(2)).is_err());
    }

    #[test]
    fn zero_polynomial() {
        let z = p("z1 - z1");
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
        assert!(p("0").is_zero());
    }

    #[test]
    fn exact_evaluation() {
        let f = p("2z1*z2 + z1*zb2 + zb1*z2");
        let v = f.evaluate_exact(&[GaussianRational::from_ints(1, 0), GaussianRational::from_ints(-1, 0)]);
        assert_eq!(v, GaussianRational::from_ints(-4, 0));
    }

    #[test]
    fn degrees() {
        let f = p("z1^3*zb1^2");
        let t = &f.terms()[0];
        let w = WeightVector::new(vec![2, 3]);
        assert_eq!(t.rdeg(&w), 10);
        assert_eq!(t.pdeg(&w), 2);
    }

    #[test]
    fn wirtinger_derivatives() {
        let f = p("z1^2*zb1 + 3*zb2");
        assert_eq!(f.wirtinger(0, false), p2("2z1*zb1"));
        assert_eq!(f.wirtinger(0, true), p2("z1^2"));
        assert_eq!(f.wirtinger(1, true), p2("3"));
    }

    #[test]
    fn cusp_pullback() {
        let f = p("z2^2 - z1^3");
        let sigma = UnimodularMatrix::from_rows(vec![vec![2, 1], vec![3, 2]]).unwrap();
        let g = f.pullback(&sigma);
        assert_eq!(g, p("z1^6*z2^4 - z1^6*z2^3"));
    }

    #[test]
    fn restriction_and_conjugation() {
        let f = p("z1^2 + z1*zb2 + zb2^2");
        assert_eq!(f.restrict(&[0]), p2("z1^2"));
        assert_eq!(f.conjugate_vars(&[1]), p("z1^2 + z1*z2 + z2^2"));
        assert_eq!(p("z2^3").restrict(&[1]).compress(&[1]), p("z1^3"));
    }

    #[test]
    fn unimodular_checks() {
        assert!(UnimodularMatrix::from_rows(vec![vec![2, 0], vec![0, 1]]).is_err());
        let a = UnimodularMatrix::from_columns(vec![vec![2, 3], vec![1, 2]]).unwrap();
        assert_eq!(a.rows(), &[vec![2, 1], vec![3, 2]]);
        assert_eq!(a.mul(&a.inverse()), UnimodularMatrix::identity(2));
    }
}
