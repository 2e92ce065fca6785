//! Hermite superfunctions, the Segal-Bargmann transform (two independent
//! pipelines), its inverse, and the super Fourier transform.
//!
//! The transform domain is the Gaussian class with weight exactly one, the
//! span of the Schrödinger generators; other weights are reached through the
//! Fourier transform, which maps weight `c` to `1/(4c)`.

use crate::diffop::{r_squared, trace_product, DiffOperator};
use crate::gaussian::{even_moment, exp_nilpotent, omega_closed, GaussianFunction, IntegralError};
use crate::scalar::{binomial, factorial, Rat, Scalar};
use crate::superspace::{Bank, Monomial, Space, SuperPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("transform input must have weight {expected}, found {found}")]
    WrongWeight { expected: String, found: String },
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

/// Multi-index for Hermite superfunctions: entries beyond position `m` are
/// at most one.
pub fn validate_alpha(space: &Space, alpha: &[u8]) -> bool {
    alpha.len() == space.m + 2 * space.n
        && alpha.iter().enumerate().all(|(i, &e)| i < space.m || e <= 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteVariant {
    /// `h_alpha = (-1)^{|alpha|} exp(R^2/2) d^alpha exp(-R^2)`
    Small,
    /// `H_alpha = exp(R^2/2) h_alpha`
    Big,
    /// `h~_alpha = (-1)^{|alpha|} 2^{-|alpha|} exp(R^2) d^alpha exp(-2R^2)`
    SmallTilde,
    /// `H~_alpha = exp(R^2) h~_alpha`
    BigTilde,
}

pub enum HermiteResult {
    Gaussian(GaussianFunction),
    Poly(SuperPoly),
}

/// The lowered-derivative word `d^alpha = d_1^{a_1} ... d_d^{a_d}`.
fn alpha_word(space: &Space, bank: &Bank, alpha: &[u8]) -> DiffOperator {
    let mut op = DiffOperator::identity(space);
    for (i, &e) in alpha.iter().enumerate() {
        for _ in 0..e {
            op = op.compose(&DiffOperator::lowered(space, bank, i));
        }
    }
    op
}

/// Hermite superfunctions and superpolynomials.
pub fn hermite(space: &Space, bank: &Bank, alpha: &[u8], variant: HermiteVariant) -> HermiteResult {
    assert!(validate_alpha(space, alpha), "invalid Hermite multi-index");
    let total: u32 = alpha.iter().map(|&e| e as u32).sum();
    let sign = if total % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
    let word = alpha_word(space, bank, alpha);
    match variant {
        HermiteVariant::Small | HermiteVariant::Big => {
            let g = GaussianFunction::new(SuperPoly::one(space), bank, Rat::one());
            let image = g.apply_op(&word);
            let poly = image.poly.scale(&sign);
            match variant {
                HermiteVariant::Big => HermiteResult::Poly(poly),
                _ => HermiteResult::Gaussian(GaussianFunction::new(
                    poly,
                    bank,
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                )),
            }
        }
        HermiteVariant::SmallTilde | HermiteVariant::BigTilde => {
            let g = GaussianFunction::new(
                SuperPoly::one(space),
                bank,
                BigRational::from_integer(BigInt::from(2)),
            );
            let image = g.apply_op(&word);
            let scale = sign.mul(&Scalar::two_pow_half(-2 * total as i64));
            let poly = image.poly.scale(&scale);
            match variant {
                HermiteVariant::BigTilde => HermiteResult::Poly(poly),
                _ => HermiteResult::Gaussian(GaussianFunction::new(poly, bank, Rat::one())),
            }
        }
    }
}

pub fn hermite_poly(space: &Space, bank: &Bank, alpha: &[u8], variant: HermiteVariant) -> SuperPoly {
    match hermite(space, bank, alpha, variant) {
        HermiteResult::Poly(p) => p,
        HermiteResult::Gaussian(g) => g.poly,
    }
}

#[allow(dead_code)]
fn even_terms(p: &SuperPoly) -> SuperPoly {
    p.sub(&odd_terms(p))
}

fn odd_terms(p: &SuperPoly) -> SuperPoly {
    let space = p.space.clone();
    SuperPoly {
        space: space.clone(),
        terms: p
            .terms
            .iter()
            .filter(|(mo, _)| {
                mo.0.iter().enumerate().any(|(v, &e)| e > 0 && space.parity(v) == 1)
            })
            .map(|(mo, c)| (mo.clone(), c.clone()))
            .collect(),
    }
}

/// `int x^k exp(2 z x - 2 x^2) dx` without the `exp(z^2/2)` factor:
/// `sum_j C(k,j) (z/2)^{k-j} I_j` with `I_j` the plain even moments at
/// weight two.
fn shifted_moment_poly(space: &Space, z_var: usize, k: u64) -> SuperPoly {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut acc = SuperPoly::zero(space);
    for j in 0..=k {
        let moment = even_moment(j, &two).expect("weight-two moments exist");
        if moment.is_zero() {
            continue;
        }
        let comb = Scalar::from_rat(BigRational::new(
            binomial(k as i64, j as i64),
            BigInt::from(2).pow((k - j) as u32),
        ));
        let mono = SuperPoly::from_terms(
            space,
            [(power_monomial(space, z_var, k - j), Scalar::one())],
        );
        acc = acc.add(&mono.scale(&comb.mul(&moment)));
    }
    acc
}

fn power_monomial(space: &Space, var: usize, e: u64) -> Monomial {
    let mut mo = Monomial::unit(space.var_count());
    mo.0[var] = e as u8;
    mo
}

/// The Segal-Bargmann transform by exact Gaussian moments:
/// `SB(f)(z) = (1/omega) exp(-R_z^2/2) int exp(2 z•x) exp(-R_x^2) f(x) dx`.
pub fn segal_bargmann_moments(
    space: &Space,
    x: &Bank,
    z: &Bank,
    f: &GaussianFunction,
) -> Result<SuperPoly, TransformError> {
    if f.weight != Rat::one() {
        return Err(TransformError::WrongWeight {
            expected: "1".into(),
            found: f.weight.to_string(),
        });
    }
    let m = space.m;
    let tp = trace_product(space, z, x);
    let odd_source = exp_nilpotent(&odd_terms(&tp).scale(&Scalar::from_int(2)));
    let odd_gauss = exp_nilpotent(
        &odd_terms(&r_squared(space, x)).scale(&Scalar::from_int(-2)),
    );
    let integrand = f.poly.mul(&odd_source).mul(&odd_gauss);
    let reduced = crate::gaussian::berezin_real(&integrand, x);
    let mut acc = SuperPoly::zero(space);
    for (mono, c) in &reduced.terms {
        let mut term = SuperPoly::constant(space, c.clone());
        let mut rest = mono.clone();
        for i in 0..m {
            let k = mono.0[x.start + i] as u64;
            rest.0[x.start + i] = 0;
            term = term.mul(&shifted_moment_poly(space, z.start + i, k));
        }
        // nothing else may remain on the x bank
        for local in 0..x.len {
            assert_eq!(rest.0[x.start + local], 0, "unintegrated x variable");
        }
        term = term.mul(&SuperPoly::from_terms(space, [(rest, Scalar::one())]));
        acc = acc.add(&term);
    }
    // the even Gaussian prefactors exp(±R_{z,even}^2/2) cancel exactly; the
    // odd prefactor is expanded
    let odd_pref = exp_nilpotent(
        &odd_terms(&r_squared(space, z)).scale(&Scalar::from_ratio(-1, 2)),
    );
    let omega = omega_closed(space.m, space.n);
    Ok(acc.mul(&odd_pref).scale(&Scalar::one().div(&omega).expect("omega invertible")))
}

/// The Segal-Bargmann transform through the Hermite basis: expand
/// `f = sum c_alpha h~_alpha` triangularly and map `h~_alpha -> z^alpha`.
pub fn segal_bargmann_hermite(
    space: &Space,
    x: &Bank,
    z: &Bank,
    f: &GaussianFunction,
) -> Result<SuperPoly, TransformError> {
    if f.weight != Rat::one() {
        return Err(TransformError::WrongWeight {
            expected: "1".into(),
            found: f.weight.to_string(),
        });
    }
    let mut remaining = f.poly.clone();
    let mut result = SuperPoly::zero(space);
    while !remaining.is_zero() {
        // take a term of maximal degree
        let (mono, coeff) = remaining
            .terms
            .iter()
            .max_by_key(|(mo, _)| mo.degree())
            .map(|(mo, c)| (mo.clone(), c.clone()))
            .expect("nonempty");
        let alpha: Vec<u8> = (0..x.len).map(|i| mono.0[x.start + i]).collect();
        let h = hermite_poly(space, x, &alpha, HermiteVariant::BigTilde);
        let lead = h.terms.get(&mono).expect("triangular leading term").clone();
        let factor = coeff.div(&lead).expect("leading coefficient invertible");
        remaining = remaining.sub(&h.scale(&factor));
        let mut z_mono = Monomial::unit(space.var_count());
        for (i, &e) in alpha.iter().enumerate() {
            z_mono.0[z.start + i] = e;
        }
        result.add_term(z_mono, factor);
    }
    Ok(result)
}

/// The inverse Segal-Bargmann transform by complex Gaussian moments:
/// `SB^{-1}(p)(x) = (1/gamma) exp(-R_x^2)
///   int exp(-|z|^2) exp(-R_zbar^2/2) exp(2 zbar•x) p(z) dz`.
pub fn inverse_segal_bargmann(
    space: &Space,
    x: &Bank,
    z: &Bank,
    zbar: &Bank,
    p: &SuperPoly,
) -> GaussianFunction {
    let m = space.m;
    let norm_sq = trace_product(space, z, zbar);
    let o1 = exp_nilpotent(&odd_terms(&norm_sq).neg());
    let o2 = exp_nilpotent(&odd_terms(&r_squared(space, zbar)).scale(&Scalar::from_ratio(-1, 2)));
    let tp_zbar_x = trace_product(space, zbar, x);
    let o3 = exp_nilpotent(&odd_terms(&tp_zbar_x).scale(&Scalar::from_int(2)));
    let integrand = p.mul(&o1).mul(&o2).mul(&o3);
    let reduced = crate::gaussian::berezin_complex(&integrand, z, zbar);
    let mut acc = SuperPoly::zero(space);
    for (mono, c) in &reduced.terms {
        let mut term = SuperPoly::constant(space, c.clone());
        let mut rest = mono.clone();
        for i in 0..m {
            let a = mono.0[z.start + i] as u64;
            assert_eq!(mono.0[zbar.start + i], 0, "unexpected conjugate power");
            rest.0[z.start + i] = 0;
            // int z^a (series in zbar) e^{-|z|^2} dz = pi a! * c_a(x_i)
            term = term
                .mul(&zbar_series_coefficient(space, x.start + i, a))
                .scale(&Scalar::pi_pow(1).mul(&factorial(a)));
        }
        for local in 0..z.len {
            assert_eq!(rest.0[z.start + local], 0, "unintegrated z variable");
        }
        term = term.mul(&SuperPoly::from_terms(space, [(rest, Scalar::one())]));
        acc = acc.add(&term);
    }
    let gamma = crate::gaussian::gamma_closed(space.m, space.n);
    GaussianFunction::new(
        acc.scale(&Scalar::one().div(&gamma).expect("gamma invertible")),
        x,
        Rat::one(),
    )
}

/// Coefficient of `zbar^t` in `exp(-zbar^2/2 + 2 zbar x)`:
/// `c_t(x) = sum_{2u+v=t} (-1/2)^u 2^v x^v / (u! v!)`.
fn zbar_series_coefficient(space: &Space, x_var: usize, t: u64) -> SuperPoly {
    let mut acc = SuperPoly::zero(space);
    let mut u = 0u64;
    while 2 * u <= t {
        let v = t - 2 * u;
        let sign = if u % 2 == 0 { BigInt::one() } else { BigInt::from(-1) };
        let num = sign * BigInt::from(2).pow(v as u32);
        let den = BigInt::from(2).pow(u as u32)
            * factorial_int(u)
            * factorial_int(v);
        let coeff = Scalar::from_rat(BigRational::new(num, den));
        acc = acc.add(
            &SuperPoly::from_terms(space, [(power_monomial(space, x_var, v), coeff)]),
        );
        u += 1;
    }
    acc
}

fn factorial_int(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    acc
}

/// The super Fourier transform with normalisation `(2^m pi^M)^{-1/2}`,
/// mapping weight `c` to weight `1/(4c)`.
///
/// The kernel orientation is pinned by the operator-exchange identities
/// `F^{±}(d_i f) = ± i x_i F^{±}(f)` and `F^{±}(l_i f) = ± i d_i F^{±}(f)`:
/// they hold exactly for the kernel `exp(∓ i (x•l))`, which is the
/// convention used here.
pub fn fourier(
    space: &Space,
    x: &Bank,
    dummy: &Bank,
    f: &GaussianFunction,
    plus: bool,
) -> Result<GaussianFunction, TransformError> {
    let c = f.weight.clone();
    if c.is_zero() || c.is_negative() {
        return Err(TransformError::WrongWeight {
            expected: "positive".into(),
            found: c.to_string(),
        });
    }
    let m = space.m;
    let big_m = space.beta().superdim();
    let s_i = if plus { Scalar::i().neg() } else { Scalar::i() };
    let fp = f.poly.rename_bank(x, dummy);
    let tp = trace_product(space, x, dummy);
    let o1 = exp_nilpotent(&odd_terms(&tp).scale(&s_i));
    let o2 = exp_nilpotent(&odd_terms(&r_squared(space, dummy)).scale_rat(&-c.clone()));
    let integrand = fp.mul(&o1).mul(&o2);
    let reduced = crate::gaussian::berezin_real(&integrand, dummy);
    // shift parameter s' = ± i x / (2c)
    let half_inv_c = Rat::new(BigInt::one(), BigInt::from(2)) / &c;
    let mut acc = SuperPoly::zero(space);
    for (mono, coeff) in &reduced.terms {
        let mut term = SuperPoly::constant(space, coeff.clone());
        let mut rest = mono.clone();
        for i in 0..m {
            let k = mono.0[dummy.start + i] as u64;
            rest.0[dummy.start + i] = 0;
            // sum_j C(k,j) (s')^{k-j} I_j(c) in the variable x_i
            let mut per_var = SuperPoly::zero(space);
            for j in 0..=k {
                let moment = even_moment(j, &c)?;
                if moment.is_zero() {
                    continue;
                }
                let comb = Scalar::from_rat(BigRational::from_integer(binomial(
                    k as i64, j as i64,
                )));
                let shift = s_i.mul_rat(&half_inv_c).pow((k - j) as u32);
                let mono_x = SuperPoly::from_terms(
                    space,
                    [(power_monomial(space, x.start + i, k - j), Scalar::one())],
                );
                per_var = per_var.add(&mono_x.scale(&comb.mul(&shift).mul(&moment)));
            }
            term = term.mul(&per_var);
        }
        for local in 0..dummy.len {
            assert_eq!(rest.0[dummy.start + local], 0, "unintegrated dummy variable");
        }
        term = term.mul(&SuperPoly::from_terms(space, [(rest, Scalar::one())]));
        acc = acc.add(&term);
    }
    let new_weight = Rat::new(BigInt::one(), BigInt::from(4)) / &c;
    // re-express the odd polynomial part inside the new Gaussian weight
    let odd_fix = exp_nilpotent(
        &odd_terms(&r_squared(space, x)).scale_rat(&new_weight.clone()),
    );
    let normalisation = Scalar::two_pow_half(-(m as i64)).mul(&Scalar::sqrt_pi_pow(-big_m));
    Ok(GaussianFunction::new(
        acc.mul(&odd_fix).scale(&normalisation),
        x,
        new_weight,
    ))
}
