//! Gaussian-weighted functions `p(x) exp(-c R^2)` and exact integration.
//!
//! The class is closed under multiplication by polynomials, under every
//! differential operator (the weight is preserved and the polynomial factor
//! is updated by the exact Leibniz rule), and under the transforms built on
//! top of it.
//!
//! The Berezin integral over the odd variables is normalised against the
//! metric-paired top word `prod_a (x_{m+n+a} x_{m+a})`, which is the
//! orientation under which the classical closed forms
//! `omega = 2^n (pi/2)^{M/2}` and `gamma = pi^M` come out exactly.

use crate::diffop::{r_squared, trace_product, DiffOperator};
use crate::scalar::{double_factorial_odd, Rat, Scalar, ScalarError};
use crate::superspace::{Bank, Monomial, Space, SuperPoly};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum IntegralError {
    #[error("divergent integral: zero weight with unbounded even part")]
    Divergent,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `p * exp(-weight * R^2_bank)` with an exact rational weight `>= 0`.
#[derive(Clone)]
pub struct GaussianFunction {
    pub poly: SuperPoly,
    pub bank: Bank,
    pub weight: Rat,
}

impl PartialEq for GaussianFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.poly.is_zero() && other.poly.is_zero() {
            return true;
        }
        self.poly == other.poly
            && self.weight == other.weight
            && self.bank.start == other.bank.start
    }
}
impl Eq for GaussianFunction {}

impl std::fmt::Debug for GaussianFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) * exp(-{} R^2[{}])", self.poly.render(), self.weight, self.bank.name)
    }
}

impl GaussianFunction {
    pub fn new(poly: SuperPoly, bank: &Bank, weight: Rat) -> Self {
        assert!(!weight.is_negative(), "gaussian weight must be >= 0");
        GaussianFunction { poly, bank: bank.clone(), weight }
    }
    pub fn space(&self) -> &Space {
        &self.poly.space
    }
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.weight, o.weight, "cannot add gaussians with different weights");
        GaussianFunction::new(self.poly.add(&o.poly), &self.bank, self.weight.clone())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        GaussianFunction::new(self.poly.neg(), &self.bank, self.weight.clone())
    }
    pub fn scale(&self, c: &Scalar) -> Self {
        GaussianFunction::new(self.poly.scale(c), &self.bank, self.weight.clone())
    }
    pub fn mul_poly(&self, p: &SuperPoly) -> Self {
        GaussianFunction::new(p.mul(&self.poly), &self.bank, self.weight.clone())
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.bank.start, o.bank.start);
        GaussianFunction::new(self.poly.mul(&o.poly), &self.bank, &self.weight + &o.weight)
    }

    /// One raw derivative, with the weight factor handled by Leibniz.
    pub fn derive(&self, v: usize) -> Self {
        let space = self.space().clone();
        let mut out = self.poly.derive(v);
        if !self.weight.is_zero() {
            // d_v exp(-c R^2) = -c (d_v R^2) exp(-c R^2)
            let dr2 = r_squared(&space, &self.bank).derive(v).scale_rat(&-self.weight.clone());
            let pv = space.parity(v);
            for par in [0u8, 1u8] {
                let part = SuperPoly {
                    space: space.clone(),
                    terms: self
                        .poly
                        .terms
                        .iter()
                        .filter(|(m, _)| m.parity(&space) == par)
                        .map(|(m, c)| (m.clone(), c.clone()))
                        .collect(),
                };
                if part.is_zero() {
                    continue;
                }
                let mut piece = part.mul(&dr2);
                if pv & par == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece);
            }
        }
        GaussianFunction::new(out, &self.bank, self.weight.clone())
    }

    /// Applies a normal-ordered operator.
    pub fn apply_op(&self, op: &DiffOperator) -> Self {
        let mut out = GaussianFunction::new(
            SuperPoly::zero(self.space()),
            &self.bank,
            self.weight.clone(),
        );
        for (word, mult) in &op.terms {
            let mut g = self.clone();
            for (v, &e) in word.0.iter().enumerate().rev() {
                for _ in 0..e {
                    g = g.derive(v);
                }
            }
            out = out.add(&g.mul_poly(mult));
        }
        out
    }

    /// The polynomial `poly * exp(-c * R^2_odd)` with the nilpotent part of
    /// the weight expanded exactly.
    pub fn expand_odd_weight(&self) -> SuperPoly {
        let space = self.space();
        let q_odd = odd_part(&r_squared(space, &self.bank), space);
        self.poly.mul(&exp_nilpotent(&q_odd.scale_rat(&-self.weight.clone())))
    }
}

/// Terms of `p` containing at least one odd variable.
fn odd_part(p: &SuperPoly, space: &Space) -> SuperPoly {
    SuperPoly {
        space: space.clone(),
        terms: p
            .terms
            .iter()
            .filter(|(m, _)| {
                m.0.iter().enumerate().any(|(v, &e)| e > 0 && space.parity(v) == 1)
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    }
}

/// `exp(q)` for a nilpotent polynomial, as an exact finite Taylor sum.
pub fn exp_nilpotent(q: &SuperPoly) -> SuperPoly {
    let mut acc = SuperPoly::one(&q.space);
    let mut power = SuperPoly::one(&q.space);
    let mut k: u64 = 1;
    let mut kfact = Rat::one();
    loop {
        power = power.mul(q);
        if power.is_zero() {
            break;
        }
        kfact *= Rat::from_integer(k.into());
        acc = acc.add(&power.scale_rat(&(Rat::one() / &kfact)));
        k += 1;
        assert!(k < 10_000, "exp argument is not nilpotent");
    }
    acc
}

/// Orientation sign between the canonical increasing odd top word and the
/// metric-paired top word `prod_a (x_{m+n+a} x_{m+a})`.
fn orientation_sign(n: usize) -> i64 {
    if (n * (n + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Berezin integral over the odd variables of `bank`: extracts the
/// coefficient of the metric-oriented top odd monomial, times `pi^{-n}`.
/// Even variables (of any bank) pass through.
pub fn berezin_real(p: &SuperPoly, bank: &Bank) -> SuperPoly {
    let space = p.space.clone();
    let (m, n) = (space.m, space.n);
    let tau = orientation_sign(n);
    // canonical top monomial on this bank's odd variables
    let mut top = Monomial::unit(space.var_count());
    for i in m..m + 2 * n {
        top.0[bank.start + i] = 1;
    }
    let mut out = SuperPoly::zero(&space);
    for (mono, c) in &p.terms {
        let mut rest = mono.clone();
        let mut complete = true;
        for i in m..m + 2 * n {
            if mono.0[bank.start + i] != 1 {
                complete = false;
                break;
            }
            rest.0[bank.start + i] = 0;
        }
        if !complete {
            continue;
        }
        if let Some((recombined, sign)) = crate::superspace::mul_monomials(&space, &rest, &top) {
            debug_assert_eq!(&recombined, mono);
            let mut coeff = c.mul_int(sign as i64 * tau);
            coeff = coeff.mul(&Scalar::sqrt_pi_pow(-2 * (n as i64)));
            out.add_term(rest, coeff);
        }
    }
    out
}

/// Complexified Berezin integral: applies the word
/// `d_zbar(m+2n) d_z(m+2n) ... d_zbar(m+1) d_z(m+1)` (rightmost first) and
/// multiplies by `pi^{-2n}`.
pub fn berezin_complex(p: &SuperPoly, z_bank: &Bank, zbar_bank: &Bank) -> SuperPoly {
    let space = p.space.clone();
    let (m, n) = (space.m, space.n);
    let mut out = p.clone();
    for i in m..m + 2 * n {
        out = out.derive(z_bank.start + i);
        out = out.derive(zbar_bank.start + i);
    }
    out.scale(&Scalar::sqrt_pi_pow(-4 * (n as i64)))
}

/// Exact even Gaussian moment `int x^k exp(-c x^2) dx` over the reals.
pub fn even_moment(k: u64, c: &Rat) -> Result<Scalar, IntegralError> {
    if k % 2 == 1 {
        return Ok(Scalar::zero());
    }
    let a = k / 2;
    // sqrt(pi) * c^{-a - 1/2} * (2a-1)!!/2^a
    let sqrt_c_inv = Scalar::sqrt_rat(&(Rat::one() / c))?;
    let mut c_pow = Rat::one();
    for _ in 0..a {
        c_pow /= c;
    }
    let coeff = double_factorial_odd(a) * c_pow / Rat::from_integer((1u64 << a).into());
    Ok(Scalar::sqrt_pi_pow(1).mul(&sqrt_c_inv).mul(&Scalar::from_rat(coeff)))
}

/// Integral of `g` over the real superspace `R^{m|2n}`.
pub fn integrate_real(g: &GaussianFunction) -> Result<Scalar, IntegralError> {
    let space = g.space().clone();
    let m = space.m;
    if g.weight.is_zero() && m > 0 && !g.poly.is_zero() {
        return Err(IntegralError::Divergent);
    }
    let expanded = g.expand_odd_weight();
    let even_poly = berezin_real(&expanded, &g.bank);
    let mut total = Scalar::zero();
    for (mono, c) in &even_poly.terms {
        let mut term = c.clone();
        for i in 0..m {
            let e = mono.0[g.bank.start + i] as u64;
            term = term.mul(&even_moment(e, &g.weight)?);
        }
        // variables outside the bank must not appear
        for (v, &e) in mono.0.iter().enumerate() {
            let inside = v >= g.bank.start && v < g.bank.start + g.bank.len;
            assert!(inside || e == 0, "stray variable in real integral");
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// Integral of `p(z, zbar) exp(-|z|^2)` over the complex superspace.
pub fn integrate_complex(
    p: &SuperPoly,
    z_bank: &Bank,
    zbar_bank: &Bank,
) -> Result<Scalar, IntegralError> {
    let space = p.space.clone();
    let m = space.m;
    let norm2 = trace_product(&space, z_bank, zbar_bank);
    let odd_weight = odd_part(&norm2, &space);
    let integrand = p.mul(&exp_nilpotent(&odd_weight.neg()));
    let reduced = berezin_complex(&integrand, z_bank, zbar_bank);
    let mut total = Scalar::zero();
    for (mono, c) in &reduced.terms {
        let mut term = c.clone();
        for i in 0..m {
            let a = mono.0[z_bank.start + i] as u64;
            let b = mono.0[zbar_bank.start + i] as u64;
            if a != b {
                term = Scalar::zero();
                break;
            }
            term = term.mul(&Scalar::pi_pow(1)).mul(&crate::scalar::factorial(a));
        }
        for (v, &e) in mono.0.iter().enumerate() {
            let in_z = v >= z_bank.start && v < z_bank.start + z_bank.len;
            let in_zb = v >= zbar_bank.start && v < zbar_bank.start + zbar_bank.len;
            assert!(in_z || in_zb || e == 0, "stray variable in complex integral");
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// `omega = int exp(-2 R^2)`, computed by the integration engine.
pub fn omega(space: &Space, bank: &Bank) -> Result<Scalar, IntegralError> {
    integrate_real(&GaussianFunction::new(
        SuperPoly::one(space),
        bank,
        Rat::from_integer(2.into()),
    ))
}

/// Closed form `2^n (pi/2)^{M/2}`.
pub fn omega_closed(m: usize, n: usize) -> Scalar {
    let big_m = m as i64 - 2 * n as i64;
    Scalar::two_pow_half(2 * n as i64 - big_m).mul(&Scalar::sqrt_pi_pow(big_m))
}

/// `gamma = int exp(-|z|^2)`, computed by the integration engine.
pub fn gamma(space: &Space, z_bank: &Bank, zbar_bank: &Bank) -> Result<Scalar, IntegralError> {
    integrate_complex(&SuperPoly::one(space), z_bank, zbar_bank)
}

/// Closed form `pi^M`.
pub fn gamma_closed(m: usize, n: usize) -> Scalar {
    Scalar::pi_pow(m as i64 - 2 * n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use crate::superspace::{vector_space, SuperPoly};

    fn rat2() -> Rat {
        rat_int(2)
    }

    #[test]
    fn berezin_picks_top_coefficient() {
        // (0,1): the metric orientation makes the paired word x2 x1 positive.
        let sp = vector_space(0, 1, &["x"]);
        let bank = sp.banks[0].clone();
        let x1 = SuperPoly::var(&sp, 0);
        let x2 = SuperPoly::var(&sp, 1);
        let b = berezin_real(&x2.mul(&x1), &bank);
        assert_eq!(b, SuperPoly::constant(&sp, Scalar::sqrt_pi_pow(-2)));
        let b2 = berezin_real(&x1.mul(&x2), &bank);
        assert_eq!(b2, SuperPoly::constant(&sp, Scalar::sqrt_pi_pow(-2).neg()));
        // no top monomial -> zero
        assert!(berezin_real(&SuperPoly::one(&sp), &bank).is_zero());
    }

    #[test]
    fn berezin_of_odd_gaussian() {
        // int_B exp(-2 R^2_odd) = 4^n pi^{-n}
        for (m, n) in [(0usize, 1usize), (0, 2), (1, 1), (2, 1), (1, 2)] {
            let sp = vector_space(m, n, &["x"]);
            let bank = sp.banks[0].clone();
            let g = GaussianFunction::new(SuperPoly::one(&sp), &bank, rat2());
            let expanded = g.expand_odd_weight();
            let b = berezin_real(&expanded, &bank);
            let expected = Scalar::from_int(4i64.pow(n as u32))
                .mul(&Scalar::sqrt_pi_pow(-2 * (n as i64)));
            assert_eq!(b, SuperPoly::constant(&sp, expected), "failed at ({m},{n})");
        }
    }

    #[test]
    fn omega_matches_closed_form_on_grid() {
        for m in 0..=3usize {
            for n in 0..=3usize {
                if (m, n) == (0, 1) {
                    continue;
                }
                let sp = vector_space(m, n, &["x"]);
                let bank = sp.banks[0].clone();
                assert_eq!(
                    omega(&sp, &bank).unwrap(),
                    omega_closed(m, n),
                    "omega mismatch at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn omega_value_at_2_1() {
        assert_eq!(omega_closed(2, 1), Scalar::from_int(2));
        let sp = vector_space(2, 1, &["x"]);
        assert_eq!(omega(&sp, &sp.banks[0].clone()).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn odd_even_moment_vanishes() {
        let sp = vector_space(2, 1, &["x"]);
        let bank = sp.banks[0].clone();
        let x1 = SuperPoly::var(&sp, 0);
        let g = GaussianFunction::new(x1, &bank, rat2());
        assert!(integrate_real(&g).unwrap().is_zero());
    }

    #[test]
    fn gamma_matches_closed_form_on_grid() {
        for m in 0..=3usize {
            for n in 0..=3usize {
                if (m, n) == (0, 1) {
                    continue;
                }
                let sp = vector_space(m, n, &["z", "zb"]);
                let (zb, zbb) = (sp.banks[0].clone(), sp.banks[1].clone());
                assert_eq!(
                    gamma(&sp, &zb, &zbb).unwrap(),
                    gamma_closed(m, n),
                    "gamma mismatch at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn first_complex_moment() {
        // int z1 zbar1 e^{-|z|^2} / gamma = 1 for m >= 1
        for (m, n) in [(1usize, 0usize), (2, 1)] {
            let sp = vector_space(m, n, &["z", "zb"]);
            let (zb, zbb) = (sp.banks[0].clone(), sp.banks[1].clone());
            let z1 = SuperPoly::var(&sp, zb.start);
            let zb1 = SuperPoly::var(&sp, zbb.start);
            let val = integrate_complex(&z1.mul(&zb1), &zb, &zbb).unwrap();
            let g = gamma(&sp, &zb, &zbb).unwrap();
            assert_eq!(val.div(&g).unwrap(), Scalar::one());
            // phase integral vanishes
            assert!(integrate_complex(&z1, &zb, &zbb).unwrap().is_zero());
        }
    }

    #[test]
    fn integration_by_parts_soundness() {
        // int d_v(g) = 0 for weight > 0
        let mut rng = crate::rng::SplitMix64::new(31);
        for (m, n) in [(1usize, 1usize), (2, 1)] {
            let sp = vector_space(m, n, &["x"]);
            let bank = sp.banks[0].clone();
            for _ in 0..20 {
                let deg = rng.below(4);
                let monos = crate::superspace::monomials_of_degree(&sp, &bank, deg);
                let mut p = SuperPoly::zero(&sp);
                for mo in &monos {
                    p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-3, 3)));
                }
                let g = GaussianFunction::new(p, &bank, rat_int(1));
                for v in 0..bank.len {
                    let dg = g.derive(bank.start + v);
                    assert!(integrate_real(&dg).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn divergent_integrals_are_errors() {
        let sp = vector_space(1, 0, &["x"]);
        let bank = sp.banks[0].clone();
        let g = GaussianFunction::new(SuperPoly::one(&sp), &bank, Rat::zero());
        assert_eq!(integrate_real(&g), Err(IntegralError::Divergent));
    }

    #[test]
    fn gaussian_class_closed_under_operators() {
        // Delta(exp(-R^2)) stays in the class and matches the Leibniz result
        let sp = vector_space(1, 1, &["x"]);
        let bank = sp.banks[0].clone();
        let g = GaussianFunction::new(SuperPoly::one(&sp), &bank, Rat::one());
        let lap = crate::diffop::laplacian(&sp, &bank);
        let lg = g.apply_op(&lap);
        assert_eq!(lg.weight, Rat::one());
        // Delta e^{-R^2} = (-2M + 4R^2) e^{-R^2}, with M = m - 2n
        let big_m = sp.beta().superdim();
        let r2 = r_squared(&sp, &bank);
        let expected = SuperPoly::constant(&sp, Scalar::from_int(-2 * big_m))
            .add(&r2.scale(&Scalar::from_int(4)));
        assert_eq!(lg.poly, expected);
    }
}
