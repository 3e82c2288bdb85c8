//! The exact coefficient field used throughout the crate.
//!
//! A [`Scalar`] is a rational function in a deformation variable `q` with
//! Gaussian-rational coefficients, i.e. an element of ℚ(i)(q).  The square
//! `mu = q^2` plays the role of the deformation parameter of the quantum
//! 2-sphere; every quantity this crate produces is a Laurent polynomial or
//! rational function in `mu`, but carrying the half-power `q` around lets the
//! spinor representation take square roots of `mu` without leaving the field.
//!
//! Scalars are kept eagerly canonical: numerator and denominator are coprime,
//! the denominator is monic, and the zero scalar has denominator 1.  Equality
//! is therefore structural and exact.
//!
//! Three evaluation paths are provided:
//!
//! * [`Scalar::eval_q_exact`] — exact value in ℚ(i) at a rational `q`;
//! * [`Scalar::eval_float`] — the same, converted to a complex float;
//! * [`Scalar::eval_at_mu`] — float value at a *rational `mu`*.  When `mu` is
//!   a perfect square this is exact evaluation at `q = sqrt(mu)`; otherwise
//!   the scalar is split into even and odd parts in `q` and evaluated exactly
//!   in the quadratic extension ℚ(i)(√mu), so the only floating-point step is
//!   the final `sqrt`.
//!
//! ```
//! use braidspin::Scalar;
//! use num::BigRational;
//!
//! // (mu^2 - mu^-2) / (mu - mu^-1) simplifies exactly to mu + mu^-1 ...
//! let num = Scalar::mu_pow(2) - Scalar::mu_pow(-2);
//! let den = Scalar::mu_pow(1) - Scalar::mu_pow(-1);
//! let ratio = num / den;
//! assert_eq!(ratio, Scalar::mu_pow(1) + Scalar::mu_pow(-1));
//! assert_eq!(ratio.mu_string(), "mu^-1+mu");
//!
//! // ... and evaluates to 2.5 at mu = 1/2.
//! let half = BigRational::new(1.into(), 2.into());
//! let v = ratio.eval_at_mu(&half).unwrap();
//! assert!((v.re - 2.5).abs() < 1e-12 && v.im.abs() < 1e-12);
//! ```

use crate::Error;
use num::complex::Complex64;
use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A Gaussian rational: an element of ℚ(i).
pub type GaussRat = Complex<BigRational>;

/// Builds the Gaussian rational `a + b i` from integer parts.
pub fn gauss(a: i64, b: i64) -> GaussRat {
    Complex::new(big_rat(a, 1), big_rat(b, 1))
}

/// Builds the rational `n/d` (panics if `d == 0`).
pub fn big_rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn gr_one() -> GaussRat {
    GaussRat::one()
}

/// Converts a big rational to the nearest `f64`.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Converts a Gaussian rational to a complex float.
pub fn gauss_to_c64(g: &GaussRat) -> Complex64 {
    Complex64::new(rat_to_f64(&g.re), rat_to_f64(&g.im))
}

/// Exact square root of a positive rational, if it is a perfect square.
fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Dense polynomial over ℚ(i), coefficients ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    c: Vec<GaussRat>,
}

impl Poly {
    fn new(mut c: Vec<GaussRat>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    fn constant(v: GaussRat) -> Poly {
        Poly::new(vec![v])
    }

    fn one() -> Poly {
        Poly::constant(gr_one())
    }

    fn monomial(k: usize, v: GaussRat) -> Poly {
        let mut c = vec![GaussRat::zero(); k + 1];
        c[k] = v;
        Poly::new(c)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn leading(&self) -> Option<GaussRat> {
        self.c.last().cloned()
    }

    fn num_terms(&self) -> usize {
        self.c.iter().filter(|x| !x.is_zero()).count()
    }

    /// `Some(k)` when the polynomial is a single monomial `c * x^k`.
    fn monomial_degree(&self) -> Option<usize> {
        if self.num_terms() == 1 {
            self.degree()
        } else {
            None
        }
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.c.get(k).cloned().unwrap_or_else(GaussRat::zero);
            let b = o.c.get(k).cloned().unwrap_or_else(GaussRat::zero);
            c.push(a + b);
        }
        Poly::new(c)
    }

    fn neg(&self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }

    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![GaussRat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }

    fn scale(&self, s: &GaussRat) -> Poly {
        Poly::new(self.c.iter().map(|x| x.clone() * s.clone()).collect())
    }

    /// Long division: returns `(quotient, remainder)` with
    /// `self = quotient * d + remainder` and `deg rem < deg d`.
    fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let dl = d.leading().unwrap();
        let n = self.c.len();
        if n == 0 || n - 1 < dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.c.clone();
        let mut quot = vec![GaussRat::zero(); n - dd];
        for k in (dd..n).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            let f = c / dl.clone();
            for (j, dc) in d.c.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = rem[idx].clone() - f.clone() * dc.clone();
            }
            quot[k - dd] = f;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    fn make_monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&(gr_one() / l)),
        }
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Horner evaluation at a rational point.
    fn eval_rat(&self, x: &BigRational) -> GaussRat {
        let xg = GaussRat::new(x.clone(), BigRational::zero());
        let mut acc = GaussRat::zero();
        for c in self.c.iter().rev() {
            acc = acc * xg.clone() + c.clone();
        }
        acc
    }

    /// Complex-conjugates every coefficient (fixes the variable).
    fn conj_coeffs(&self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Splits `p(q) = e(q^2) + q * o(q^2)` into the pair `(e, o)`.
    fn even_odd_split(&self) -> (Poly, Poly) {
        let mut e = Vec::new();
        let mut o = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if k % 2 == 0 {
                e.push(c.clone());
            } else {
                o.push(c.clone());
            }
        }
        (Poly::new(e), Poly::new(o))
    }
}

/// An element of ℚ(i)(q): a canonical fraction of polynomials in `q`.
///
/// The deformation parameter of the quantum sphere is `mu = q^2`; use
/// [`Scalar::mu_pow`] to build Laurent monomials in `mu` and
/// [`Scalar::mu_string`] to render a scalar in terms of `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    fn from_parts(num: Poly, den: Poly) -> Scalar {
        assert!(!den.is_zero(), "scalar denominator must be nonzero");
        if num.is_zero() {
            return Scalar {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.divmod(&g);
        let (den, _) = den.divmod(&g);
        let lc = den.leading().expect("nonzero denominator after reduction");
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = gr_one() / lc;
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// The zero scalar.
    pub fn zero() -> Scalar {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    /// The unit scalar.
    pub fn one() -> Scalar {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    /// The integer `k` as a scalar.
    pub fn from_int(k: i64) -> Scalar {
        Scalar::from_gauss(gauss(k, 0))
    }

    /// The rational `n/d` as a scalar (panics if `d == 0`).
    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_gauss(Complex::new(big_rat(n, d), BigRational::zero()))
    }

    /// A rational constant as a scalar.
    pub fn from_rat(r: BigRational) -> Scalar {
        Scalar::from_gauss(Complex::new(r, BigRational::zero()))
    }

    /// A Gaussian-rational constant as a scalar.
    pub fn from_gauss(g: GaussRat) -> Scalar {
        Scalar {
            num: Poly::constant(g),
            den: Poly::one(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Scalar {
        Scalar::from_gauss(gauss(0, 1))
    }

    /// The deformation variable `q` itself.
    pub fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    /// The Laurent monomial `q^k` (negative `k` allowed).
    pub fn q_pow(k: i64) -> Scalar {
        if k >= 0 {
            Scalar {
                num: Poly::monomial(k as usize, gr_one()),
                den: Poly::one(),
            }
        } else {
            Scalar {
                num: Poly::one(),
                den: Poly::monomial((-k) as usize, gr_one()),
            }
        }
    }

    /// The Laurent monomial `mu^k = q^{2k}` (negative `k` allowed).
    pub fn mu_pow(k: i64) -> Scalar {
        Scalar::q_pow(2 * k)
    }

    /// The deformed non-negative integer
    /// `q_int(n) = 1 + mu^2 + mu^4 + ... + mu^{2(n-1)}`,
    /// with `q_int(0) = 0`.  At `q = 1` this degenerates to the ordinary
    /// integer `n`.
    pub fn q_int(n: u64) -> Scalar {
        if n == 0 {
            return Scalar::zero();
        }
        let mut c = vec![GaussRat::zero(); (4 * (n - 1) + 1) as usize];
        for j in 0..n {
            c[(4 * j) as usize] = gr_one();
        }
        Scalar {
            num: Poly::new(c),
            den: Poly::one(),
        }
    }

    /// True for the zero scalar.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for the unit scalar.
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value of this scalar, when it does not involve `q`.
    pub fn as_gauss_constant(&self) -> Option<GaussRat> {
        if self.den.is_one() && self.num.degree().map_or(true, |d| d == 0) {
            Some(
                self.num
                    .c
                    .first()
                    .cloned()
                    .unwrap_or_else(GaussRat::zero),
            )
        } else {
            None
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn try_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar::from_parts(self.den.clone(), self.num.clone()))
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        self.try_inv().expect("inverse of the zero scalar")
    }

    /// Integer power (negative exponents invert; `0^0 = 1`).
    pub fn pow(&self, k: i64) -> Scalar {
        if k < 0 {
            return self.inv().pow(-k);
        }
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The conjugation of ℚ(i)(q) fixing `q` and sending `i` to `-i`.
    ///
    /// This is the coefficient-field part of every `*`-structure in the
    /// crate; it is an involutive field automorphism.
    pub fn conj(&self) -> Scalar {
        Scalar {
            num: self.num.conj_coeffs(),
            den: self.den.conj_coeffs(),
        }
    }

    /// Exact value in ℚ(i) at the rational point `q = q0`.
    ///
    /// Because the fraction is reduced, a vanishing denominator is a genuine
    /// pole and reported as an error.
    pub fn eval_q_exact(&self, q0: &BigRational) -> Result<GaussRat, Error> {
        let d = self.den.eval_rat(q0);
        if d.is_zero() {
            return Err(Error::Pole {
                at: format!("q = {q0}"),
            });
        }
        Ok(self.num.eval_rat(q0) / d)
    }

    /// Float value at the rational point `q = q0`.
    pub fn eval_float(&self, q0: &BigRational) -> Result<Complex64, Error> {
        self.eval_q_exact(q0).map(|v| gauss_to_c64(&v))
    }

    /// Exact value at a rational `mu = q^2 > 0`, expressed as the pair
    /// `(p, r)` with value `p + r * sqrt(mu)` and `p, r` in ℚ(i).
    ///
    /// When `mu` is a perfect square the pair is `(value, 0)`.  Otherwise
    /// `sqrt(mu)` is irrational, `q^2 - mu` is irreducible over ℚ(i), and
    /// the fraction is evaluated exactly in the quadratic extension: the
    /// denominator `a + b sqrt(mu)` vanishes only when `a = b = 0`, which by
    /// coprimality of numerator and denominator is a genuine pole.
    pub fn eval_at_mu_exact(&self, mu0: &BigRational) -> Result<(GaussRat, GaussRat), Error> {
        if !mu0.is_positive() {
            return Err(Error::Domain {
                detail: format!("mu = {mu0} is not positive"),
            });
        }
        if let Some(q0) = rat_sqrt(mu0) {
            return self.eval_q_exact(&q0).map(|v| (v, GaussRat::zero()));
        }
        let (ne, no) = self.num.even_odd_split();
        let (de, dodd) = self.den.even_odd_split();
        let a1 = ne.eval_rat(mu0);
        let b1 = no.eval_rat(mu0);
        let a2 = de.eval_rat(mu0);
        let b2 = dodd.eval_rat(mu0);
        if a2.is_zero() && b2.is_zero() {
            return Err(Error::Pole {
                at: format!("mu = {mu0}"),
            });
        }
        // (a1 + b1 s) / (a2 + b2 s) with s = sqrt(mu): multiply by the
        // conjugate a2 - b2 s.  The norm a2^2 - mu b2^2 cannot vanish, since
        // mu is not a square in ℚ (hence not in ℚ(i), as a positive rational
        // that is a square in ℚ(i) is already a square in ℚ).
        let mu_g = GaussRat::new(mu0.clone(), BigRational::zero());
        let norm = a2.clone() * a2.clone() - mu_g.clone() * b2.clone() * b2.clone();
        debug_assert!(!norm.is_zero());
        let p = (a1.clone() * a2.clone() - mu_g * b1.clone() * b2.clone()) / norm.clone();
        let r = (b1 * a2 - a1 * b2) / norm;
        Ok((p, r))
    }

    /// Float value at a rational `mu = q^2 > 0` (the positive root of `mu`
    /// is taken for `q`).  The only floating-point step is the final
    /// `sqrt(mu)` when `mu` is not a perfect square.
    pub fn eval_at_mu(&self, mu0: &BigRational) -> Result<Complex64, Error> {
        let (p, r) = self.eval_at_mu_exact(mu0)?;
        let s = rat_to_f64(mu0).sqrt();
        Ok(gauss_to_c64(&p) + gauss_to_c64(&r) * s)
    }

    /// Exact substitution `mu := mu0`: the value at a rational `mu`,
    /// returned as a constant scalar, so that whole operators can be
    /// specialised at a deformation value without leaving exact arithmetic.
    /// Fails on a pole, and on values that genuinely involve `sqrt(mu0)`
    /// (an odd power of `q` surviving at a non-square `mu0`), since those
    /// lie outside ℚ(i).
    pub fn specialize_mu(&self, mu0: &BigRational) -> Result<Scalar, Error> {
        let (p, r) = self.eval_at_mu_exact(mu0)?;
        if !r.is_zero() {
            return Err(Error::Domain {
                detail: format!("value at mu = {mu0} involves sqrt(mu), which is not rational"),
            });
        }
        Ok(Scalar::from_gauss(p))
    }

    /// Renders the scalar in terms of `mu = q^2`, when possible.
    ///
    /// A scalar that is even in `q` is rewritten as a reduced fraction of
    /// polynomials in `mu`; a monomial denominator is folded into Laurent
    /// terms (e.g. `mu^-1+mu`), and a genuine denominator is parenthesized
    /// (e.g. `1/(1+mu^2)`).  Scalars with an odd part fall back to the `q`
    /// rendering of [`fmt::Display`].
    pub fn mu_string(&self) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        let (ne, no) = self.num.even_odd_split();
        let (de, dodd) = self.den.even_odd_split();
        if no.mul(&de) != ne.mul(&dodd) {
            return self.to_string();
        }
        let mu = Poly::monomial(1, gr_one());
        let n2 = ne.mul(&de).sub(&mu.mul(&no.mul(&dodd)));
        let d2 = de.mul(&de).sub(&mu.mul(&dodd.mul(&dodd)));
        let g = Poly::gcd(&n2, &d2);
        let (mut n2, _) = n2.divmod(&g);
        let (mut d2, _) = d2.divmod(&g);
        let lc = d2.leading().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = gr_one() / lc;
            n2 = n2.scale(&inv);
            d2 = d2.scale(&inv);
        }
        if let Some(v) = d2.monomial_degree() {
            return render_poly(&n2, "mu", -(v as i64));
        }
        let ns = render_poly(&n2, "mu", 0);
        let ds = render_poly(&d2, "mu", 0);
        let ns = if n2.num_terms() > 1 {
            format!("({ns})")
        } else {
            ns
        };
        format!("{ns}/({ds})")
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(k: i64) -> Self {
        Scalar::from_int(k)
    }
}

/// Renders one term `c * var^k` using the shared coefficient conventions:
/// unit coefficients are omitted, pure-imaginary ones use `i`, and a
/// genuinely complex coefficient is self-parenthesized.
fn format_gauss_monomial(c: &GaussRat, var: &str, k: i64) -> String {
    debug_assert!(!c.is_zero());
    let power = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    let coeff = if c.im.is_zero() {
        if power.is_empty() {
            c.re.to_string()
        } else if c.re.is_one() {
            String::new()
        } else if (-&c.re).is_one() {
            "-".to_string()
        } else {
            c.re.to_string()
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i".to_string()
        } else if (-&c.im).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", c.im)
        }
    } else {
        let im = if c.im.is_one() {
            "+i".to_string()
        } else if (-&c.im).is_one() {
            "-i".to_string()
        } else if c.im.is_negative() {
            format!("{}*i", c.im)
        } else {
            format!("+{}*i", c.im)
        };
        format!("({}{im})", c.re)
    };
    match (coeff.is_empty(), power.is_empty()) {
        (true, false) => power,
        (false, true) => coeff,
        (false, false) => {
            if coeff == "-" {
                format!("-{power}")
            } else {
                format!("{coeff}*{power}")
            }
        }
        (true, true) => unreachable!("unit coefficient with empty power"),
    }
}

/// Renders a polynomial as `+`-joined terms with ascending exponents,
/// shifting every exponent by `shift` (for Laurent output).
fn render_poly(p: &Poly, var: &str, shift: i64) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = format_gauss_monomial(c, var, k as i64 + shift);
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

/// True when `s` is not safe to embed in a product unparenthesized: it
/// contains a fraction slash or a top-level `+`/`-` (a `-` directly after
/// `^` is an exponent sign, and a leading `-` is a plain sign).
pub fn composite_term(s: &str) -> bool {
    let b = s.as_bytes();
    for i in 0..b.len() {
        match b[i] {
            b'/' => return true,
            b'+' => return true,
            b'-' if i > 0 && b[i - 1] != b'^' => return true,
            _ => {}
        }
    }
    false
}

/// Renders `c * var^k` for a [`Scalar`] coefficient, using the `mu` form of
/// the coefficient and parenthesizing it when it is a sum or a fraction.
pub fn format_scalar_monomial(c: &Scalar, var: &str, k: i64) -> String {
    debug_assert!(!c.is_zero());
    let power = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    if power.is_empty() {
        return c.mu_string();
    }
    if c.is_one() {
        return power;
    }
    if (-c).is_one() {
        return format!("-{power}");
    }
    let cs = c.mu_string();
    if composite_term(&cs) {
        format!("({cs})*{power}")
    } else {
        format!("{cs}*{power}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            return write!(f, "{}", render_poly(&self.num, "q", 0));
        }
        let n = render_poly(&self.num, "q", 0);
        let d = render_poly(&self.den, "q", 0);
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = if self.den.num_terms() > 1 {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n}/{d}")
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        serializer.collect_str(self)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::from_parts(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::from_parts(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self -= &o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, o: Scalar) {
        *self *= &o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half() -> BigRational {
        big_rat(1, 2)
    }

    #[test]
    fn canonicalization_cancels_common_factors() {
        // (1 - q^4) / (1 - q^2) = 1 + q^2
        let num = Scalar::one() - Scalar::q_pow(4);
        let den = Scalar::one() - Scalar::q_pow(2);
        let r = num / den;
        assert_eq!(r, Scalar::one() + Scalar::q_pow(2));
        assert_eq!(r.to_string(), "1+q^2");
    }

    #[test]
    fn q_int_small_values() {
        assert!(Scalar::q_int(0).is_zero());
        assert!(Scalar::q_int(1).is_one());
        assert_eq!(
            Scalar::q_int(2),
            Scalar::one() + Scalar::mu_pow(2),
            "q_int(2) = 1 + mu^2"
        );
        assert_eq!(Scalar::q_int(2).mu_string(), "1+mu^2");
    }

    #[test]
    fn q_int_degenerates_to_integers_at_q_one() {
        let one = BigRational::one();
        for n in 0..=50u64 {
            let v = Scalar::q_int(n).eval_q_exact(&one).unwrap();
            assert_eq!(v, gauss(n as i64, 0));
        }
    }

    #[test]
    fn balanced_ratio_evaluates_at_half() {
        // (mu^2 - mu^-2) / (mu - mu^-1) = mu + mu^-1 -> 2.5 at mu = 1/2
        let num = Scalar::mu_pow(2) - Scalar::mu_pow(-2);
        let den = Scalar::mu_pow(1) - Scalar::mu_pow(-1);
        let r = &num / &den;
        assert_eq!(r, Scalar::mu_pow(1) + Scalar::mu_pow(-1));
        let v = r.eval_at_mu(&half()).unwrap();
        assert!((v.re - 2.5).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn eval_at_mu_uses_exact_square_root_when_possible() {
        // mu = 9/16 is a perfect square, so q = 3/4 exactly.
        let mu0 = big_rat(9, 16);
        let v = Scalar::q().eval_at_mu(&mu0).unwrap();
        assert_eq!(v.re, 0.75);
        assert_eq!(v.im, 0.0);
        let (p, r) = Scalar::q().eval_at_mu_exact(&mu0).unwrap();
        assert_eq!(p, GaussRat::new(big_rat(3, 4), big_rat(0, 1)));
        assert!(r.is_zero());
    }

    #[test]
    fn eval_at_mu_nonsquare_is_exact_up_to_one_sqrt() {
        // q itself at mu = 1/2 is sqrt(1/2): the exact pair is (0, 1).
        let (p, r) = Scalar::q().eval_at_mu_exact(&half()).unwrap();
        assert!(p.is_zero());
        assert!(r.is_one());
        // (1 + q)/(1 - q) at mu = 1/2: multiply through by the conjugate.
        let s = (Scalar::one() + Scalar::q()) / (Scalar::one() - Scalar::q());
        let v = s.eval_at_mu(&half()).unwrap();
        let q0 = 0.5f64.sqrt();
        let expect = (1.0 + q0) / (1.0 - q0);
        assert!((v.re - expect).abs() < 1e-12 * expect.abs());
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn poles_are_detected_on_both_paths() {
        // 1/(mu - 1/4): pole at the perfect square mu = 1/4.
        let s = (Scalar::mu_pow(1) - Scalar::from_ratio(1, 4)).inv();
        assert!(matches!(
            s.eval_at_mu(&big_rat(1, 4)),
            Err(Error::Pole { .. })
        ));
        // 1/(mu - 1/2): pole at the non-square mu = 1/2.
        let s = (Scalar::mu_pow(1) - Scalar::from_ratio(1, 2)).inv();
        assert!(matches!(s.eval_at_mu(&half()), Err(Error::Pole { .. })));
        // ... but fine slightly away from it.
        assert!(s.eval_at_mu(&big_rat(1, 3)).is_ok());
        // Non-positive mu is a domain error.
        assert!(matches!(
            s.eval_at_mu(&big_rat(-1, 2)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism_fixing_q() {
        let a = Scalar::i() * Scalar::q() + Scalar::one();
        assert_eq!(a.conj(), Scalar::one() - Scalar::i() * Scalar::q());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Scalar::q().conj(), Scalar::q());
    }

    #[test]
    fn display_q_form() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!((Scalar::i() * Scalar::q_pow(3)).to_string(), "i*q^3");
        assert_eq!(
            (Scalar::from_int(-2) * Scalar::i() * Scalar::q_pow(4)).to_string(),
            "-2*i*q^4"
        );
        let s = Scalar::one() / (Scalar::one() - Scalar::q_pow(2));
        assert_eq!(s.to_string(), "-1/(-1+q^2)"); // monic denominator
        let s = (Scalar::one() + Scalar::q()) / Scalar::q_pow(2);
        assert_eq!(s.to_string(), "(1+q)/q^2");
    }

    #[test]
    fn mu_form_rendering() {
        assert_eq!(
            (Scalar::from_int(-2) * Scalar::i() * Scalar::mu_pow(2)).mu_string(),
            "-2*i*mu^2"
        );
        assert_eq!((Scalar::mu_pow(-1) + Scalar::mu_pow(1)).mu_string(), "mu^-1+mu");
        assert_eq!(
            (-(Scalar::mu_pow(-1) + Scalar::mu_pow(1))).mu_string(),
            "-mu^-1-mu"
        );
        let s = Scalar::one() / (Scalar::one() + Scalar::mu_pow(2));
        assert_eq!(s.mu_string(), "1/(1+mu^2)");
        let s = (Scalar::one() + Scalar::mu_pow(1)) / (Scalar::one() + Scalar::mu_pow(2));
        assert_eq!(s.mu_string(), "(1+mu)/(1+mu^2)");
        // An odd scalar falls back to the q form.
        assert_eq!(Scalar::q().mu_string(), "q");
        assert_eq!((Scalar::i() * Scalar::from_ratio(-1, 2)).mu_string(), "-1/2*i");
    }

    #[test]
    fn scalar_monomial_formatting() {
        let m2i = Scalar::from_int(-2) * Scalar::i() * Scalar::mu_pow(2);
        assert_eq!(format_scalar_monomial(&m2i, "G", 1), "-2*i*mu^2*G");
        let sum = Scalar::one() + Scalar::mu_pow(2);
        assert_eq!(format_scalar_monomial(&sum, "G", 1), "(1+mu^2)*G");
        assert_eq!(format_scalar_monomial(&Scalar::one(), "G", 2), "G^2");
        assert_eq!(format_scalar_monomial(&(-Scalar::one()), "G", 1), "-G");
        let frac = Scalar::one() / (Scalar::one() + Scalar::mu_pow(2));
        assert_eq!(format_scalar_monomial(&frac, "G", 1), "(1/(1+mu^2))*G");
    }

    #[test]
    fn serialization_uses_the_display_string() {
        let s = Scalar::one() + Scalar::q_pow(2);
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"1+q^2\"");
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| big_rat(n, d))
    }

    fn arb_gauss() -> impl Strategy<Value = GaussRat> {
        (arb_rat(), arb_rat()).prop_map(|(a, b)| Complex::new(a, b))
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (
            prop::collection::vec(arb_gauss(), 0..4),
            prop::collection::vec(arb_gauss(), 1..4),
        )
            .prop_filter_map("nonzero denominator", |(n, d)| {
                let den = Poly::new(d);
                if den.is_zero() {
                    None
                } else {
                    Some(Scalar::from_parts(Poly::new(n), den))
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn add_sub_roundtrip(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn mul_div_roundtrip(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(&(&a * &b) / &b, a);
        }

        #[test]
        fn conjugation_distributes_over_products(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn evaluation_is_multiplicative(a in arb_scalar(), b in arb_scalar()) {
            let mu0 = big_rat(1, 2);
            let (Ok(va), Ok(vb), Ok(vab)) = (
                a.eval_at_mu(&mu0),
                b.eval_at_mu(&mu0),
                (&a * &b).eval_at_mu(&mu0),
            ) else {
                return Ok(()); // a pole somewhere: nothing to compare
            };
            let expect = va * vb;
            prop_assert!((vab - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
        }

        #[test]
        fn square_and_nonsquare_paths_agree_with_float_horner(a in arb_scalar()) {
            // Independent float oracle: Horner-evaluate num and den at
            // q = sqrt(mu) in f64 and divide.
            for mu0 in [big_rat(9, 16), big_rat(1, 2)] {
                let Ok(v) = a.eval_at_mu(&mu0) else { continue };
                let q0 = rat_to_f64(&mu0).sqrt();
                let horner = |p: &Poly| {
                    p.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
                        acc * q0 + gauss_to_c64(c)
                    })
                };
                let expect = horner(&a.num) / horner(&a.den);
                prop_assert!((v - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
            }
        }
    }
}
