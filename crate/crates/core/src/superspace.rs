//! Supercommutative polynomial algebras with several variable banks.
//!
//! A [`Space`] holds a fixed list of variables grouped into named banks. Even
//! variables commute, odd variables anticommute and square to zero, and
//! variables from different banks commute up to the Koszul sign of their
//! parities. A bank may be `twisted`, in which case two of its variables pick
//! up the *opposite* of the Koszul sign when swapped (the Grassmann-algebra
//! convention where even-parity generators anticommute).
//!
//! Monomials are stored as exponent vectors in a fixed canonical variable
//! order, so a polynomial has a unique normal form and equality is
//! structural.

use crate::metric::BetaForm;
use crate::scalar::{Rat, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("polynomials live on different spaces")]
    SpaceMismatch,
    #[error("unknown bank {0}")]
    UnknownBank(String),
    #[error("derivatives are not defined on twisted bank {0}")]
    TwistedDerivative(String),
}

#[derive(Clone, Debug)]
pub struct VarInfo {
    pub name: String,
    pub parity: u8,
    /// Whether the square of this variable vanishes.
    pub nilsq: bool,
    pub bank: usize,
}

#[derive(Clone, Debug)]
pub struct Bank {
    pub name: String,
    pub start: usize,
    pub len: usize,
    pub twisted: bool,
}

#[derive(Debug)]
pub struct SpaceData {
    pub m: usize,
    pub n: usize,
    pub vars: Vec<VarInfo>,
    pub banks: Vec<Bank>,
    id: u64,
}

pub type Space = Arc<SpaceData>;

impl PartialEq for SpaceData {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for SpaceData {}

static NEXT_SPACE_ID: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

impl SpaceData {
    pub fn beta(&self) -> BetaForm {
        BetaForm::new(self.m, self.n)
    }
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }
    pub fn parity(&self, v: usize) -> u8 {
        self.vars[v].parity
    }
    pub fn bank_by_name(&self, name: &str) -> Result<&Bank, SpaceError> {
        self.banks
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| SpaceError::UnknownBank(name.to_string()))
    }
    pub fn bank_var(&self, bank: &Bank, local: usize) -> usize {
        debug_assert!(local < bank.len);
        bank.start + local
    }
    /// Sign picked up when swapping adjacent occurrences of `u` and `v`.
    pub fn swap_sign(&self, u: usize, v: usize) -> i8 {
        let koszul = if self.vars[u].parity & self.vars[v].parity == 1 { -1 } else { 1 };
        let bu = self.vars[u].bank;
        if bu == self.vars[v].bank && self.banks[bu].twisted {
            -koszul
        } else {
            koszul
        }
    }
    pub fn same(a: &Space, b: &Space) -> bool {
        a.id == b.id
    }
}

/// Builds a space of ordinary (untwisted) vector banks over `K^{m|2n}`.
/// Every bank has `m` even then `2n` odd variables.
pub fn vector_space(m: usize, n: usize, bank_names: &[&str]) -> Space {
    let mut vars = Vec::new();
    let mut banks = Vec::new();
    for (bi, name) in bank_names.iter().enumerate() {
        let start = vars.len();
        for i in 0..(m + 2 * n) {
            let parity = u8::from(i >= m);
            vars.push(VarInfo {
                name: format!("{}{}", name, i + 1),
                parity,
                nilsq: parity == 1,
                bank: bi,
            });
        }
        banks.push(Bank { name: name.to_string(), start, len: m + 2 * n, twisted: false });
    }
    Arc::new(SpaceData {
        m,
        n,
        vars,
        banks,
        id: NEXT_SPACE_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
    })
}

/// Builds a space from explicit per-bank variable lists.
pub fn custom_space(
    m: usize,
    n: usize,
    banks_spec: &[(&str, Vec<(String, u8, bool)>, bool)],
) -> Space {
    let mut vars = Vec::new();
    let mut banks = Vec::new();
    for (bi, (name, vs, twisted)) in banks_spec.iter().enumerate() {
        let start = vars.len();
        for (vname, parity, nilsq) in vs {
            vars.push(VarInfo { name: vname.clone(), parity: *parity, nilsq: *nilsq, bank: bi });
        }
        banks.push(Bank { name: name.to_string(), start, len: vs.len(), twisted: *twisted });
    }
    Arc::new(SpaceData {
        m,
        n,
        vars,
        banks,
        id: NEXT_SPACE_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
    })
}

/// Exponent vector over all variables of a space, in canonical order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }
    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Monomial(e)
    }
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
    pub fn degree_in(&self, bank: &Bank) -> u64 {
        self.0[bank.start..bank.start + bank.len].iter().map(|&e| e as u64).sum()
    }
    pub fn parity(&self, space: &SpaceData) -> u8 {
        let mut p = 0u8;
        for (v, &e) in self.0.iter().enumerate() {
            p ^= (e & 1) * space.parity(v);
        }
        p & 1
    }
    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// Multiplies canonical monomials, returning the Koszul sign, or `None` if a
/// nilpotent variable would repeat.
pub fn mul_monomials(space: &SpaceData, a: &Monomial, b: &Monomial) -> Option<(Monomial, i8)> {
    let mut out = a.0.clone();
    let mut sign = 1i8;
    for (v, &eb) in b.0.iter().enumerate() {
        if eb == 0 {
            continue;
        }
        if space.vars[v].nilsq && a.0[v] + eb > 1 {
            return None;
        }
        out[v] += eb;
        // each of the `eb` copies of v crosses every copy of u > v in a
        for (u, &ea) in a.0.iter().enumerate().skip(v + 1) {
            if ea == 0 {
                continue;
            }
            if space.swap_sign(u, v) == -1 && (ea * eb) & 1 == 1 {
                sign = -sign;
            }
        }
    }
    Some((Monomial(out), sign))
}

/// Sparse supercommutative polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPoly {
    pub space: Space,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl SuperPoly {
    pub fn zero(space: &Space) -> Self {
        SuperPoly { space: space.clone(), terms: BTreeMap::new() }
    }
    pub fn one(space: &Space) -> Self {
        SuperPoly::constant(space, Scalar::one())
    }
    pub fn constant(space: &Space, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(space.var_count()), c);
        }
        SuperPoly { space: space.clone(), terms }
    }
    pub fn var(space: &Space, v: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(space.var_count(), v), Scalar::one());
        SuperPoly { space: space.clone(), terms }
    }
    pub fn from_terms(space: &Space, it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = SuperPoly::zero(space);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
    /// `Some(parity)` if all terms share a parity (zero counts as even).
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.space));
        match it.next() {
            None => Some(0),
            Some(p) => {
                if it.all(|q| q == p) {
                    Some(p)
                } else {
                    None
                }
            }
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(SpaceData::same(&self.space, &o.space), "space mismatch");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        SuperPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return SuperPoly::zero(&self.space);
        }
        SuperPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }
    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&Scalar::from_rat(r.clone()))
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert!(SpaceData::same(&self.space, &o.space), "space mismatch");
        let mut out = SuperPoly::zero(&self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if let Some((m, sign)) = mul_monomials(&self.space, ma, mb) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = SuperPoly::one(&self.space);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
    /// Conjugates the coefficients; variables are untouched.
    pub fn conj(&self) -> Self {
        SuperPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Left superderivative with respect to variable `v` (untwisted banks).
    pub fn derive(&self, v: usize) -> Self {
        let bank = self.space.vars[v].bank;
        assert!(
            !self.space.banks[bank].twisted,
            "derivatives are not defined on twisted banks"
        );
        let mut out = SuperPoly::zero(&self.space);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            // pass the derivative over every variable before v
            let mut sign = 1i8;
            if self.space.parity(v) == 1 {
                for (u, &eu) in m.0.iter().enumerate().take(v) {
                    if eu & 1 == 1 && self.space.parity(u) == 1 {
                        sign = -sign;
                    }
                }
            }
            let mut reduced = m.clone();
            reduced.0[v] -= 1;
            let mut coeff = c.mul_int(e as i64);
            if sign < 0 {
                coeff = coeff.neg();
            }
            out.add_term(reduced, coeff);
        }
        out
    }

    /// Lowered derivative on a vector bank: `sum_j beta_{ij} d/d(bank_j)`.
    pub fn derive_lowered(&self, bank: &Bank, i: usize) -> Self {
        let beta = self.space.beta();
        let mut out = SuperPoly::zero(&self.space);
        for j in 0..bank.len {
            let c = beta.beta(i, j);
            if c != 0 {
                out = out.add(&self.derive(bank.start + j).scale(&Scalar::from_int(c)));
            }
        }
        out
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::unit(self.space.var_count()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Keeps the terms of total degree `k`.
    pub fn homogeneous_part(&self, k: u64) -> Self {
        SuperPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Moves variables of `from` into the matching slots of `to` (same bank
    /// length). Signs are those of re-sorting the result; each monomial must
    /// not mix the two banks in a way that collides.
    pub fn rename_bank(&self, from: &Bank, to: &Bank) -> Self {
        assert_eq!(from.len, to.len);
        let n = self.space.var_count();
        let mut out = SuperPoly::zero(&self.space);
        for (m, c) in &self.terms {
            // Split the monomial into the `from` letters and the rest, then
            // rebuild by multiplying (rest) * (renamed letters in order).
            let mut rest = m.clone();
            let mut word = Vec::new();
            for local in 0..from.len {
                let v = from.start + local;
                for _ in 0..m.0[v] {
                    word.push(to.start + local);
                }
                rest.0[v] = 0;
            }
            // The from-variables are moved preserving their relative order;
            // crossing signs against `rest` are handled by mul_monomials.
            let mut piece = Monomial::unit(n);
            let mut sign = 1i8;
            let mut ok = true;
            for v in word {
                let single = Monomial::var(n, v);
                match mul_monomials(&self.space, &piece, &single) {
                    Some((p, s)) => {
                        piece = p;
                        sign *= s;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Some((m2, s2)) = mul_monomials(&self.space, &rest, &piece) {
                let mut coeff = c.clone();
                if sign * s2 < 0 {
                    coeff = coeff.neg();
                }
                out.add_term(m2, coeff);
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            let compact = c.as_rat().map(|r| r.to_string());
            match compact {
                Some(r) if r == "1" && !m.is_unit() => {}
                Some(r) if r == "-1" && !m.is_unit() => factors.push("-1".to_string()),
                Some(r) => factors.push(r),
                None => factors.push(format!("[{}]", c.render())),
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(self.space.vars[v].name.clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.space.vars[v].name, e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Parses the rendered polynomial grammar, e.g. `3*x1^2*x2 + 1/2*x3 - x1`,
/// against the variable names of one bank.
pub fn parse_poly(space: &Space, bank: &Bank, input: &str) -> Result<SuperPoly, SpaceError> {
    let mut out = SuperPoly::zero(space);
    let cleaned = input.trim();
    if cleaned.is_empty() || cleaned == "0" {
        return Ok(out);
    }
    // split into signed terms
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut current = String::new();
    let mut sign = 1i64;
    let mut first = true;
    for ch in cleaned.chars() {
        match ch {
            '+' | '-' if !current.trim().is_empty() || !first => {
                if !current.trim().is_empty() {
                    terms.push((sign, current.trim().to_string()));
                }
                sign = if ch == '-' { -1 } else { 1 };
                current = String::new();
            }
            '-' => {
                sign = -sign;
            }
            _ => current.push(ch),
        }
        first = false;
    }
    if !current.trim().is_empty() {
        terms.push((sign, current.trim().to_string()));
    }
    for (sgn, term) in terms {
        let mut coeff = Scalar::from_int(sgn);
        let mut mono = SuperPoly::one(space);
        for factor in term.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                continue;
            }
            if f.chars().next().unwrap().is_ascii_digit() {
                let (num, den) = match f.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (f, "1"),
                };
                let nv: i64 = num
                    .parse()
                    .map_err(|_| SpaceError::UnknownBank(format!("bad coefficient {f:?}")))?;
                let dv: i64 = den
                    .parse()
                    .map_err(|_| SpaceError::UnknownBank(format!("bad coefficient {f:?}")))?;
                coeff = coeff.mul(&Scalar::from_ratio(nv, dv));
            } else {
                let (name, exp) = match f.split_once('^') {
                    Some((a, b)) => (
                        a.trim(),
                        b.trim().parse::<u32>().map_err(|_| {
                            SpaceError::UnknownBank(format!("bad exponent in {f:?}"))
                        })?,
                    ),
                    None => (f, 1),
                };
                let v = (0..bank.len)
                    .map(|local| bank.start + local)
                    .find(|&v| space.vars[v].name == name)
                    .ok_or_else(|| SpaceError::UnknownBank(format!("unknown variable {name:?}")))?;
                mono = mono.mul(&SuperPoly::var(space, v).pow(exp));
            }
        }
        out = out.add(&mono.scale(&coeff));
    }
    Ok(out)
}

/// All monomials of total degree `k` supported on one bank.
pub fn monomials_of_degree(space: &Space, bank: &Bank, k: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let nvars = space.var_count();
    let mut current = Monomial::unit(nvars);
    fn rec(
        space: &Space,
        bank: &Bank,
        pos: usize,
        remaining: u64,
        current: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if pos == bank.len {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let v = bank.start + pos;
        let max = if space.vars[v].nilsq { 1.min(remaining) } else { remaining };
        for e in 0..=max {
            current.0[v] = e as u8;
            rec(space, bank, pos + 1, remaining - e, current, out);
        }
        current.0[v] = 0;
    }
    rec(space, bank, 0, k, &mut current, &mut out);
    out.sort();
    out
}

/// Expresses `p` as a coefficient vector over an indexed monomial basis.
pub fn coeff_vector(p: &SuperPoly, index: &BTreeMap<Monomial, usize>) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); index.len()];
    for (m, c) in &p.terms {
        let i = *index.get(m).unwrap_or_else(|| panic!("monomial {m:?} outside basis"));
        v[i] = c.clone();
    }
    v
}

pub fn basis_index(monomials: &[Monomial]) -> BTreeMap<Monomial, usize> {
    monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}
