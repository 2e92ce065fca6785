//! Exact coefficient arithmetic.
//!
//! A [`Scalar`] is a finite sum of terms `(a + b*sqrt2) * sqrtpi^k` where `a`
//! and `b` are Gaussian rationals and `k` ranges over the integers. In other
//! words, scalars live in the Laurent-polynomial ring over the field
//! `Q(i, sqrt2)` in one formal invertible symbol `sqrtpi`. The symbol `pi` is
//! `sqrtpi^2` and is never evaluated numerically, so classical normalisation
//! constants such as `2^n (pi/2)^{M/2}` or `pi^M` stay exact for every
//! integer `M`.
//!
//! An element is invertible iff it is concentrated in a single `sqrtpi`
//! power; every nonzero `a + b*sqrt2` over `Q(i)` is invertible since
//! `sqrt2` is not a Gaussian rational. Division by a multi-term scalar is
//! attempted by exact Laurent division and fails if the quotient does not
//! exist in the ring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("scalar is not invertible in the Laurent ring: {0}")]
    NotInvertible(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("square root of {0} is not representable over Q(sqrt2)")]
    SqrtNotRepresentable(String),
    #[error("scalar parse error: {0}")]
    Parse(String),
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::zero() }
    }
    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    pub fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    pub fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
    /// Inverse of a nonzero Gaussian rational.
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        GaussRat { re: &self.re / &norm, im: -(&self.im / &norm) }
    }
}

/// Coefficient at a fixed power of `sqrtpi`: `a + b*sqrt2`.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Coef {
    a: GaussRat,
    b: GaussRat,
}

impl Coef {
    fn zero() -> Self {
        Coef { a: GaussRat::zero(), b: GaussRat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Coef { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
    fn neg(&self) -> Self {
        Coef { a: self.a.neg(), b: self.b.neg() }
    }
    fn mul(&self, o: &Self) -> Self {
        // (a1 + b1 s)(a2 + b2 s) with s^2 = 2
        let two = GaussRat::from_rat(rat_int(2));
        Coef {
            a: self.a.mul(&o.a).add(&two.mul(&self.b.mul(&o.b))),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
        }
    }
    fn conj(&self) -> Self {
        Coef { a: self.a.conj(), b: self.b.conj() }
    }
    /// `(a + b sqrt2)^{-1} = (a - b sqrt2) / (a^2 - 2 b^2)`; the denominator is a
    /// nonzero Gaussian rational whenever the element is nonzero.
    fn inv(&self) -> Self {
        let two = GaussRat::from_rat(rat_int(2));
        let den = self.a.mul(&self.a).sub(&two.mul(&self.b.mul(&self.b)));
        let den_inv = den.inv();
        Coef { a: self.a.mul(&den_inv), b: self.b.neg().mul(&den_inv) }
    }
}

/// An exact scalar: map from `sqrtpi` powers to `a + b*sqrt2` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    terms: BTreeMap<i64, Coef>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }
    pub fn one() -> Self {
        Scalar::from_rat(Rat::one())
    }
    pub fn from_int(v: i64) -> Self {
        Scalar::from_rat(rat_int(v))
    }
    pub fn from_rat(v: Rat) -> Self {
        let mut t = BTreeMap::new();
        if !v.is_zero() {
            t.insert(0, Coef { a: GaussRat::from_rat(v), b: GaussRat::zero() });
        }
        Scalar { terms: t }
    }
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rat(rat(num, den))
    }
    /// The imaginary unit.
    pub fn i() -> Self {
        let mut t = BTreeMap::new();
        t.insert(0, Coef { a: GaussRat { re: Rat::zero(), im: Rat::one() }, b: GaussRat::zero() });
        Scalar { terms: t }
    }
    pub fn sqrt2() -> Self {
        let mut t = BTreeMap::new();
        t.insert(0, Coef { a: GaussRat::zero(), b: GaussRat::from_rat(Rat::one()) });
        Scalar { terms: t }
    }
    /// `sqrtpi^k` for any integer `k` (negative powers allowed).
    pub fn sqrt_pi_pow(k: i64) -> Self {
        let mut t = BTreeMap::new();
        t.insert(k, Coef { a: GaussRat::from_rat(Rat::one()), b: GaussRat::zero() });
        Scalar { terms: t }
    }
    /// `pi^k` for integer `k`.
    pub fn pi_pow(k: i64) -> Self {
        Scalar::sqrt_pi_pow(2 * k)
    }
    /// `2^{k/2}` for any integer `k`.
    pub fn two_pow_half(k: i64) -> Self {
        let whole = k.div_euclid(2);
        let rem = k.rem_euclid(2);
        let mut base = Scalar::from_rat(rat_pow2(whole));
        if rem == 1 {
            base = base.mul(&Scalar::sqrt2());
        }
        base
    }

    fn canon(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }
    /// Returns the value as a plain rational if it is one.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if *k == 0 && c.b.is_zero() && c.a.im.is_zero() {
            Some(c.a.re.clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, c) in &o.terms {
            let e = t.entry(*k).or_insert_with(Coef::zero);
            *e = e.add(c);
        }
        Scalar { terms: t }.canon()
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut t: BTreeMap<i64, Coef> = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let e = t.entry(k1 + k2).or_insert_with(Coef::zero);
                *e = e.add(&c1.mul(c2));
            }
        }
        Scalar { terms: t }.canon()
    }
    pub fn mul_rat(&self, r: &Rat) -> Self {
        self.mul(&Scalar::from_rat(r.clone()))
    }
    pub fn mul_int(&self, v: i64) -> Self {
        self.mul(&Scalar::from_int(v))
    }
    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }
    /// Inverse, defined when the scalar sits at a single `sqrtpi` power.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.terms.len() != 1 {
            return Err(ScalarError::NotInvertible(self.to_string()));
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let mut t = BTreeMap::new();
        t.insert(-k, c.inv());
        Ok(Scalar { terms: t })
    }
    /// Exact division in the Laurent ring. Succeeds for invertible divisors
    /// and whenever the quotient exists exactly.
    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Ok(oi) = o.inv() {
            return Ok(self.mul(&oi));
        }
        // Leading-term elimination from the lowest sqrtpi power upward.
        let (lead_k, lead_c) = o.terms.iter().next().unwrap();
        let lead = Scalar { terms: [(*lead_k, lead_c.clone())].into_iter().collect() };
        let lead_inv = lead.inv().expect("single term is invertible");
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        let span = |s: &Scalar| -> i64 {
            if s.is_zero() {
                0
            } else {
                s.terms.keys().last().unwrap() - s.terms.keys().next().unwrap()
            }
        };
        let max_steps = span(self) + span(o) + 2;
        for _ in 0..=max_steps {
            if rem.is_zero() {
                return Ok(quot);
            }
            let (rk, rc) = rem.terms.iter().next().unwrap();
            let piece = Scalar { terms: [(*rk, rc.clone())].into_iter().collect() }.mul(&lead_inv);
            quot = quot.add(&piece);
            rem = rem.sub(&piece.mul(o));
        }
        Err(ScalarError::NotDivisible(format!("{} / {}", self, o)))
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact square root of a positive rational, when it lies in `Q(sqrt2)`:
    /// `c = r^2` gives `r`, `c = 2 r^2` gives `r*sqrt2`.
    pub fn sqrt_rat(c: &Rat) -> Result<Self, ScalarError> {
        if c.is_zero() {
            return Ok(Scalar::zero());
        }
        if c.is_negative() {
            return Err(ScalarError::SqrtNotRepresentable(c.to_string()));
        }
        // sqrt(p/q) = sqrt(p q)/q
        let p = c.numer().clone();
        let q = c.denom().clone();
        let n = &p * &q;
        let s = n.sqrt();
        if &s * &s == n {
            return Ok(Scalar::from_rat(Rat::new(s, q)));
        }
        if (&n % BigInt::from(2)).is_zero() {
            let h: BigInt = &n / BigInt::from(2);
            let s = h.sqrt();
            if &s * &s == h {
                return Ok(Scalar::from_rat(Rat::new(s, q)).mul(&Scalar::sqrt2()));
            }
        }
        Err(ScalarError::SqrtNotRepresentable(c.to_string()))
    }

    /// Floating-point evaluation. Diagnostic printing only; never used in
    /// any assertion.
    pub fn approx(&self) -> f64 {
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let base = std::f64::consts::PI.sqrt().powi(*k as i32);
            let a = c.a.re.to_f64().unwrap_or(f64::NAN);
            let b = c.b.re.to_f64().unwrap_or(f64::NAN);
            acc += base * (a + b * std::f64::consts::SQRT_2);
        }
        acc
    }

    /// Renders in the report grammar, e.g. `((1/2) + (0)i) * sqrt2 * pi^(-1/2)`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            for (coef, tag) in [(&c.a, false), (&c.b, true)] {
                if coef.is_zero() {
                    continue;
                }
                let mut s = format!("(({}) + ({})i)", coef.re, coef.im);
                if tag {
                    s.push_str(" * sqrt2");
                }
                if *k != 0 {
                    s.push_str(&format!(" * pi^({}/2)", k));
                }
                parts.push(s);
            }
        }
        parts.join(" + ")
    }

    /// Parses the grammar emitted by [`Scalar::render`].
    pub fn parse(input: &str) -> Result<Self, ScalarError> {
        let input = input.trim();
        if input == "0" {
            return Ok(Scalar::zero());
        }
        let mut acc = Scalar::zero();
        for raw in split_top_level_plus(input) {
            acc = acc.add(&parse_term(raw.trim())?);
        }
        Ok(acc)
    }
}

fn rat_pow2(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(BigInt::from(2).pow(k as u32))
    } else {
        Rat::new(BigInt::one(), BigInt::from(2).pow((-k) as u32))
    }
}

/// Splits on `+` that are not inside parentheses.
fn split_top_level_plus(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                parts.push(&s[start..idx]);
                start = idx + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_term(t: &str) -> Result<Scalar, ScalarError> {
    let factors: Vec<&str> = t.split('*').map(|f| f.trim()).collect();
    if factors.is_empty() {
        return Err(ScalarError::Parse(format!("empty term in {t:?}")));
    }
    let head = factors[0];
    let inner = head
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ScalarError::Parse(format!("expected parenthesised coefficient in {head:?}")))?;
    // inner looks like `(p/q) + (r/s)i`
    let plus = find_top_level_plus(inner)
        .ok_or_else(|| ScalarError::Parse(format!("expected `re + im i` in {inner:?}")))?;
    let re_src = inner[..plus].trim();
    let im_src = inner[plus + 1..].trim();
    let re = parse_paren_rat(re_src)?;
    let im_body = im_src
        .strip_suffix('i')
        .ok_or_else(|| ScalarError::Parse(format!("expected trailing `i` in {im_src:?}")))?;
    let im = parse_paren_rat(im_body.trim())?;
    let mut value = Scalar {
        terms: [(0, Coef { a: GaussRat { re, im }, b: GaussRat::zero() })].into_iter().collect(),
    }
    .canon();
    for f in &factors[1..] {
        if *f == "sqrt2" {
            value = value.mul(&Scalar::sqrt2());
        } else if let Some(rest) = f.strip_prefix("pi^(") {
            let body = rest
                .strip_suffix(')')
                .ok_or_else(|| ScalarError::Parse(format!("malformed power in {f:?}")))?;
            let (num, den) = body
                .split_once('/')
                .ok_or_else(|| ScalarError::Parse(format!("malformed power in {f:?}")))?;
            if den.trim() != "2" {
                return Err(ScalarError::Parse(format!("powers must be halves: {f:?}")));
            }
            let k: i64 = num
                .trim()
                .parse()
                .map_err(|_| ScalarError::Parse(format!("bad exponent in {f:?}")))?;
            value = value.mul(&Scalar::sqrt_pi_pow(k));
        } else {
            return Err(ScalarError::Parse(format!("unknown factor {f:?}")));
        }
    }
    Ok(value)
}

fn find_top_level_plus(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => return Some(idx),
            _ => {}
        }
    }
    None
}

fn parse_paren_rat(s: &str) -> Result<Rat, ScalarError> {
    let body = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(s)
        .trim();
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| ScalarError::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| ScalarError::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(ScalarError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `k!` as a scalar.
pub fn factorial(k: u64) -> Scalar {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    Scalar::from_rat(Rat::from_integer(acc))
}

/// `(2k-1)!! = (2k)!/(2^k k!)`, the odd double factorial, as a rational.
pub fn double_factorial_odd(k: u64) -> Rat {
    let mut acc = BigInt::one();
    let mut j: i64 = 2 * k as i64 - 1;
    while j >= 1 {
        acc *= BigInt::from(j);
        j -= 2;
    }
    Rat::from_integer(acc)
}

/// Binomial coefficient with the convention `C(n, -1) = [n == -1]` used by
/// degenerate dimension formulas.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k == -1 {
        return if n == -1 { BigInt::one() } else { BigInt::zero() };
    }
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Pochhammer symbol `(a)_k = a (a+1) ... (a+k-1)` over the rationals.
pub fn pochhammer(a: &Rat, k: u64) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k {
        acc *= a + Rat::from_integer(BigInt::from(j));
    }
    acc
}
