//! The pairings connecting the Schrödinger and Fock pictures: Fischer,
//! Bessel-Fischer, Fock (integral) and L^2, the Schrödinger product obtained
//! through the folding map, reproducing kernels, and the fundamental
//! symmetry with its finite-degree positivity.

use crate::bessel::{
    bessel_operator, fold_psi, BesselConstruction, IdealSlice, MatrixVarSpace,
};
use crate::diffop::{trace_product, DiffOperator};
use crate::gaussian::{gamma_closed, integrate_complex, integrate_real, GaussianFunction};
use crate::linalg;
use crate::scalar::{factorial, pochhammer, Rat, Scalar};
use crate::superspace::{monomials_of_degree, Bank, Space, SuperPoly};
use num_bigint::BigInt;
use num_traits::One;

/// Identifier of a pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductId {
    Fischer,
    BesselFischer(Rat),
    Fock,
    L2,
    Schrodinger,
}

/// Fischer product `<p,q> = p(d) conj(q)|_0` on a vector bank.
///
/// The substituted derivative word is applied directly (rightmost letter
/// first), which is equivalent to composing the normal-ordered operators
/// and much cheaper.
pub fn pair_fischer(p: &SuperPoly, q: &SuperPoly, bank: &Bank) -> Scalar {
    let qbar = q.conj();
    let mut acc = Scalar::zero();
    for (mono, c) in &p.terms {
        let mut letters = Vec::new();
        for (v, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            assert!(
                v >= bank.start && v < bank.start + bank.len,
                "fischer pairing expects polynomials on one bank"
            );
            for _ in 0..e {
                letters.push(v - bank.start);
            }
        }
        let mut image = qbar.clone();
        for &local in letters.iter().rev() {
            if image.is_zero() {
                break;
            }
            image = image.derive_lowered(bank, local);
        }
        acc = acc.add(&c.mul(&image.constant_term()));
    }
    acc
}

/// Bessel-Fischer product `<p,q> = p(B_lambda) conj(q)|_{z=0}` on the matrix
/// variables. Extra banks (for example the kernel `w` variables) pass
/// through untouched: the result is the coefficient polynomial at `z = 0`.
pub fn pair_bessel_fischer_poly(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    p: &SuperPoly,
    q: &SuperPoly,
) -> SuperPoly {
    let space = &mvs.space;
    let qbar = q.conj();
    // cache the Bessel operators per basis pair
    let ops: Vec<DiffOperator> = mvs
        .jordan
        .basis
        .pairs
        .iter()
        .map(|&(i, j)| bessel_operator(mvs, lambda, i, j, BesselConstruction::Explicit))
        .collect();
    let mut acc = SuperPoly::zero(space);
    for (mono, c) in &p.terms {
        let mut letters = Vec::new();
        for (v, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            assert!(
                v >= mvs.z.start && v < mvs.z.start + mvs.z.len,
                "bessel-fischer pairing expects the first argument on the z bank"
            );
            for _ in 0..e {
                letters.push(v - mvs.z.start);
            }
        }
        // apply the substituted word directly, rightmost letter first
        let mut image = qbar.clone();
        for &local in letters.iter().rev() {
            if image.is_zero() {
                break;
            }
            image = ops[local].apply(&image);
        }
        // evaluate at z = 0: keep terms with no z variables
        for (mo, co) in &image.terms {
            let has_z = (0..mvs.z.len).any(|k| mo.0[mvs.z.start + k] > 0);
            if !has_z {
                acc.add_term(mo.clone(), co.mul(c));
            }
        }
    }
    acc
}

/// Scalar-valued Bessel-Fischer product.
pub fn pair_bessel_fischer(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    p: &SuperPoly,
    q: &SuperPoly,
) -> Scalar {
    pair_bessel_fischer_poly(mvs, lambda, p, q).constant_term()
}

/// Fock product `(1/gamma) int exp(-|z|^2) p(z) conj(q(z)) dz`.
pub fn pair_fock(
    p: &SuperPoly,
    q: &SuperPoly,
    z_bank: &Bank,
    zbar_bank: &Bank,
) -> Scalar {
    let space = &p.space;
    let qbar = q.conj().rename_bank(z_bank, zbar_bank);
    let integrand = p.mul(&qbar);
    let total = integrate_complex(&integrand, z_bank, zbar_bank).expect("fock integral");
    let gamma = gamma_closed(space.m, space.n);
    total.div(&gamma).expect("gamma invertible")
}

/// Renormalised L^2 product `(1/omega) int f conj(g)`.
pub fn pair_l2(f: &GaussianFunction, g: &GaussianFunction) -> Scalar {
    let space = f.space();
    let gbar = GaussianFunction::new(g.poly.conj(), &g.bank, g.weight.clone());
    let prod = f.mul(&gbar);
    let total = integrate_real(&prod).expect("l2 integral");
    let omega = crate::gaussian::omega_closed(space.m, space.n);
    total.div(&omega).expect("omega invertible")
}

/// Schrödinger product on the minimal model: fold both arguments with the
/// generator weight `exp(-2e) -> exp(-R^2)` and take the L^2 product.
pub fn pair_schrodinger(
    mvs: &MatrixVarSpace,
    p: &SuperPoly,
    q: &SuperPoly,
    target: &Space,
    target_bank: &Bank,
) -> Scalar {
    let fp = GaussianFunction::new(
        fold_psi(mvs, p, target, target_bank),
        target_bank,
        Rat::one(),
    );
    let fq = GaussianFunction::new(
        fold_psi(mvs, q, target, target_bank),
        target_bank,
        Rat::one(),
    );
    pair_l2(&fp, &fq)
}

/// The degree-`k` kernel slice `I_{lambda,k}(z,w) = c_k (z|w)^k` with
/// `c_{-1/2,k} = (-1)^k / (k! (1/2-k)_k)` and `c_{1,k} = 2^k / (k! (-1-k)_k)`.
pub fn kernel_slice(mvs: &MatrixVarSpace, lambda: &Rat, k: u64) -> SuperPoly {
    let zw = mvs.pairing_z_w();
    let power = zw.pow(k as u32);
    let half = Rat::new(BigInt::from(1), BigInt::from(2));
    let coeff = if *lambda == -half.clone() {
        let poch = pochhammer(&(half - Rat::from_integer(BigInt::from(k as i64))), k);
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        Scalar::from_rat(sign / poch)
            .div(&factorial(k))
            .expect("factorial invertible")
    } else if *lambda == Rat::one() {
        let poch = pochhammer(&Rat::from_integer(BigInt::from(-1 - k as i64)), k);
        Scalar::from_rat(Rat::from_integer(BigInt::from(2).pow(k as u32)) / poch)
            .div(&factorial(k))
            .expect("factorial invertible")
    } else {
        panic!("kernel slices are defined for lambda in {{1, -1/2}}");
    };
    power.scale(&coeff)
}

/// Truncated Fock reproducing kernel `sum_{j<=d} (z•w)^j / j!` on a pair of
/// vector banks.
pub fn fock_kernel_truncated(
    space: &Space,
    z_bank: &Bank,
    w_bank: &Bank,
    degree: u64,
) -> SuperPoly {
    let zw = trace_product(space, z_bank, w_bank);
    let mut acc = SuperPoly::zero(space);
    for j in 0..=degree {
        let term = zw
            .pow(j as u32)
            .scale(&Scalar::one().div(&factorial(j)).expect("factorial invertible"));
        acc = acc.add(&term);
    }
    acc
}

/// Reproduction of a homogeneous `p` of degree `k` against the kernel slice,
/// computed modulo the ideal slice: returns `(lhs, rhs)` both reduced.
pub fn kernel_reproduce(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    slice: &IdealSlice,
    p: &SuperPoly,
    k: u64,
) -> (SuperPoly, SuperPoly) {
    let kernel = kernel_slice(mvs, lambda, k);
    let paired = pair_bessel_fischer_poly(mvs, lambda, p, &kernel);
    // the result lives in the w bank; move it back to z for reduction
    let back = paired.rename_bank(&mvs.w, &mvs.z);
    let expected = p.clone();
    (slice.reduce(&back), slice.reduce(&expected))
}

/// The fundamental symmetry `S_F`: raises every index and reverses the
/// word, `S_F(z_{i_1} ... z_{i_k}) = z^{i_k} ... z^{i_1}`.
pub fn fundamental_symmetry(p: &SuperPoly, bank: &Bank) -> SuperPoly {
    let space = &p.space;
    let beta = space.beta();
    let raised = |i: usize| -> SuperPoly {
        let mut out = SuperPoly::zero(space);
        for j in 0..bank.len {
            let c = beta.beta_inv(j, i);
            if c != 0 {
                out = out.add(&SuperPoly::var(space, bank.start + j).scale(&Scalar::from_int(c)));
            }
        }
        out
    };
    let mut out = SuperPoly::zero(space);
    for (mono, c) in &p.terms {
        let mut letters = Vec::new();
        for (v, &e) in mono.0.iter().enumerate() {
            assert!(v >= bank.start && v < bank.start + bank.len || e == 0);
            for _ in 0..e {
                letters.push(v - bank.start);
            }
        }
        let mut image = SuperPoly::constant(space, c.clone());
        for &i in letters.iter().rev() {
            image = image.mul(&raised(i));
        }
        out = out.add(&image);
    }
    out
}

/// Gram matrix of `(p,q) -> <p, S_F q>_F` on the monomial basis of `P_k`,
/// as exact rationals.
pub fn sf_gram_matrix(space: &Space, bank: &Bank, k: u64) -> Vec<Vec<Rat>> {
    let monos = monomials_of_degree(space, bank, k);
    let polys: Vec<SuperPoly> = monos
        .iter()
        .map(|mo| SuperPoly::from_terms(space, [(mo.clone(), Scalar::one())]))
        .collect();
    let mut gram = vec![vec![Rat::one(); polys.len()]; polys.len()];
    for (a, pa) in polys.iter().enumerate() {
        for (b, pb) in polys.iter().enumerate() {
            let v = pair_fischer(pa, &fundamental_symmetry(pb, bank), bank);
            gram[a][b] = v.as_rat().expect("S_F Gram entries are rational");
        }
    }
    gram
}

/// Gram matrix of the Bessel-Fischer product on representatives of
/// `P_k mod I_lambda`.
pub fn bessel_fischer_gram(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    slice: &IdealSlice,
) -> Vec<Vec<Scalar>> {
    let monos = slice.complement_monomials();
    let polys: Vec<SuperPoly> = monos
        .iter()
        .map(|mo| SuperPoly::from_terms(&mvs.space, [(mo.clone(), Scalar::one())]))
        .collect();
    let mut gram = vec![vec![Scalar::zero(); polys.len()]; polys.len()];
    for (a, pa) in polys.iter().enumerate() {
        for (b, pb) in polys.iter().enumerate() {
            gram[a][b] = pair_bessel_fischer(mvs, lambda, pa, pb);
        }
    }
    gram
}

/// Checks `<rep(X) f, g> = -(-1)^{|X||f|} <f, rep(X) g>` for the L^2 product
/// and Gaussian-class arguments.
pub fn l2_skew_supersymmetric(
    op: &DiffOperator,
    op_parity: u8,
    f: &GaussianFunction,
    g: &GaussianFunction,
) -> bool {
    let Some(pf) = f.poly.parity() else {
        return false;
    };
    let lhs = pair_l2(&f.apply_op(op), g);
    let rhs = pair_l2(f, &g.apply_op(op));
    let sign = if op_parity & pf == 1 { Scalar::one() } else { Scalar::from_int(-1) };
    lhs == rhs.mul(&sign)
}

/// Same skew-supersymmetry statement for the Fock product on polynomials.
pub fn fock_skew_supersymmetric(
    op: &DiffOperator,
    op_parity: u8,
    p: &SuperPoly,
    q: &SuperPoly,
    z_bank: &Bank,
    zbar_bank: &Bank,
) -> bool {
    let Some(pp) = p.parity() else {
        return false;
    };
    let lhs = pair_fock(&op.apply(p), q, z_bank, zbar_bank);
    let rhs = pair_fock(p, &op.apply(q), z_bank, zbar_bank);
    let sign = if op_parity & pp == 1 { Scalar::one() } else { Scalar::from_int(-1) };
    lhs == rhs.mul(&sign)
}

/// `linalg::rank` of a scalar Gram matrix.
pub fn gram_rank(gram: &[Vec<Scalar>]) -> usize {
    linalg::rank(&gram.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coords_unit;
    use crate::bessel::compute_v_lambda;
    use crate::linalg::positive_definite_rat;
    use crate::reps::Reps;
    use crate::rng::SplitMix64;
    use crate::scalar::{rat, rat_int};
    use crate::superspace::basis_index;

    #[test]
    fn fischer_of_square_monomials() {
        // <z1^2, z1^2>_F = 2 and the Fock route agrees
        let reps = Reps::new(2, 1).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let zbb = space.banks[3].clone();
        let z1sq = SuperPoly::var(space, zb.start).pow(2);
        assert_eq!(pair_fischer(&z1sq, &z1sq, &zb), Scalar::from_int(2));
        assert_eq!(pair_fock(&z1sq, &z1sq, &zb, &zbb), Scalar::from_int(2));
    }

    #[test]
    fn fischer_equals_fock_low_degrees() {
        for (m, n) in [(1usize, 1usize), (2, 0), (0, 2)] {
            let reps = Reps::new(m, n).unwrap();
            let space = &reps.std;
            let zb = space.banks[1].clone();
            let zbb = space.banks[3].clone();
            for k in 0..=4u64 {
                let monos = monomials_of_degree(space, &zb, k);
                for a in &monos {
                    for b in &monos {
                        let pa = SuperPoly::from_terms(space, [(a.clone(), Scalar::one())]);
                        let pb = SuperPoly::from_terms(space, [(b.clone(), Scalar::one())]);
                        assert_eq!(
                            pair_fischer(&pa, &pb, &zb),
                            pair_fock(&pa, &pb, &zb, &zbb),
                            "({m},{n}) {a:?} {b:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fischer_fock_vanish_across_degrees() {
        let reps = Reps::new(1, 1).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let zbb = space.banks[3].clone();
        let p = SuperPoly::var(space, zb.start);
        let q = SuperPoly::var(space, zb.start).pow(2);
        assert!(pair_fischer(&p, &q, &zb).is_zero());
        assert!(pair_fock(&p, &q, &zb, &zbb).is_zero());
    }

    #[test]
    fn adjoint_identities() {
        // <d_i p, q> = (-1)^{|i||p|} <p, z_i q> and its twin, for both
        // products, on random homogeneous arguments
        let mut rng = SplitMix64::new(4242);
        let reps = Reps::new(1, 1).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let zbb = space.banks[3].clone();
        for _ in 0..40 {
            let deg = rng.below(3);
            let par = rng.below(2) as u8;
            let pick = |rng: &mut SplitMix64, d: u64, want: u8| {
                let monos = monomials_of_degree(space, &zb, d);
                let mut p = SuperPoly::zero(space);
                for mo in &monos {
                    if mo.parity(space) == want {
                        p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-3, 3)));
                    }
                }
                p
            };
            let p = pick(&mut rng, deg, par);
            let par_q = rng.below(2) as u8;
            let q = pick(&mut rng, deg + 1, par_q);
            if p.is_zero() {
                continue;
            }
            for i in 0..zb.len {
                let di = DiffOperator::lowered(space, &zb, i);
                let zi = SuperPoly::var(space, zb.start + i);
                let pv = space.parity(zb.start + i);
                let sign = if pv & par == 1 { Scalar::from_int(-1) } else { Scalar::one() };
                // <d_i p, q>_F = (-1)^{|i||p|} <p, z_i q>_F
                let lhs = pair_fischer(&di.apply(&p), &q, &zb);
                let rhs = pair_fischer(&p, &zi.mul(&q), &zb).mul(&sign);
                assert_eq!(lhs, rhs);
                // <z_i p, q>_F = (-1)^{|i||p|} <p, d_i q>_F
                let lhs = pair_fischer(&zi.mul(&p), &q, &zb);
                let rhs = pair_fischer(&p, &di.apply(&q), &zb).mul(&sign);
                assert_eq!(lhs, rhs);
                // same for the Fock product
                let lhs = pair_fock(&di.apply(&p), &q, &zb, &zbb);
                let rhs = pair_fock(&p, &zi.mul(&q), &zb, &zbb).mul(&sign);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn superhermitian_products() {
        let mut rng = SplitMix64::new(31337);
        let reps = Reps::new(1, 1).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let zbb = space.banks[3].clone();
        for _ in 0..30 {
            let pick = |rng: &mut SplitMix64| {
                let d = rng.below(3);
                let want = rng.below(2) as u8;
                let monos = monomials_of_degree(space, &zb, d);
                let mut p = SuperPoly::zero(space);
                for mo in &monos {
                    if mo.parity(space) == want {
                        let re = rng.int_in(-2, 2);
                        let im = rng.int_in(-2, 2);
                        p.add_term(
                            mo.clone(),
                            Scalar::from_int(re).add(&Scalar::i().mul_int(im)),
                        );
                    }
                }
                p
            };
            let p = pick(&mut rng);
            let q = pick(&mut rng);
            let (Some(pp), Some(pq)) = (p.parity(), q.parity()) else {
                continue;
            };
            let sign = if pp & pq == 1 { Scalar::from_int(-1) } else { Scalar::one() };
            for (l, r) in [
                (pair_fischer(&p, &q, &zb), pair_fischer(&q, &p, &zb)),
                (pair_fock(&p, &q, &zb, &zbb), pair_fock(&q, &p, &zb, &zbb)),
            ] {
                assert_eq!(l, r.conj().mul(&sign));
            }
        }
    }

    #[test]
    fn bessel_fischer_equals_fischer_after_folding() {
        // <p,q>_B = <psi p, psi q>_F for lambda = -1/2
        let mut rng = SplitMix64::new(5150);
        for (m, n) in [(1usize, 1usize), (2, 0)] {
            let reps = Reps::new(m, n).unwrap();
            let mvs = &reps.mvs;
            let lambda = rat(-1, 2);
            let space = &reps.std;
            let zb = space.banks[1].clone();
            for _ in 0..20 {
                let d = rng.below(3);
                let monos = monomials_of_degree(&mvs.space, &mvs.z, d);
                let pick = |rng: &mut SplitMix64| {
                    let mut p = SuperPoly::zero(&mvs.space);
                    for mo in &monos {
                        p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-2, 2)));
                    }
                    p
                };
                let p = pick(&mut rng);
                let q = pick(&mut rng);
                let lhs = pair_bessel_fischer(mvs, &lambda, &p, &q);
                let rhs = pair_fischer(
                    &fold_psi(mvs, &p, space, &zb),
                    &fold_psi(mvs, &q, space, &zb),
                    &zb,
                );
                assert_eq!(lhs, rhs, "({m},{n})");
            }
        }
    }

    #[test]
    fn bessel_fischer_order_independence() {
        // substituting the supercommuting Bessel operators in any order
        // gives the same pairing
        let reps = Reps::new(1, 1).unwrap();
        let mvs = &reps.mvs;
        let lambda = rat(-1, 2);
        let monos = monomials_of_degree(&mvs.space, &mvs.z, 2);
        for mo in &monos {
            let p = SuperPoly::from_terms(&mvs.space, [(mo.clone(), Scalar::one())]);
            for q_mono in &monos {
                let q = SuperPoly::from_terms(&mvs.space, [(q_mono.clone(), Scalar::one())]);
                let forward = pair_bessel_fischer(mvs, &lambda, &p, &q);
                // reversed substitution order
                let mut letters = Vec::new();
                for (v, &e) in mo.0.iter().enumerate() {
                    for _ in 0..e {
                        letters.push(v - mvs.z.start);
                    }
                }
                let mut op = DiffOperator::identity(&mvs.space);
                for &k in letters.iter().rev() {
                    let (i, j) = mvs.jordan.basis.pairs[k];
                    op = op.compose(&bessel_operator(
                        mvs,
                        &lambda,
                        i,
                        j,
                        BesselConstruction::Explicit,
                    ));
                }
                let mut reversed = op.apply(&q.conj()).constant_term();
                // reversing the word of a parity-homogeneous monomial only
                // reorders supercommuting operators; signs from odd swaps
                let odd_letters = letters
                    .iter()
                    .filter(|&&k| mvs.jordan.parity(k) == 1)
                    .count();
                if (odd_letters * (odd_letters.saturating_sub(1)) / 2) % 2 == 1 {
                    reversed = reversed.neg();
                }
                assert_eq!(forward, reversed);
            }
        }
    }

    #[test]
    fn l2_normalisation() {
        for (m, n) in [(1usize, 1usize), (2, 1)] {
            let reps = Reps::new(m, n).unwrap();
            let g = GaussianFunction::new(SuperPoly::one(&reps.std), &reps.x, Rat::one());
            assert_eq!(pair_l2(&g, &g), Scalar::one(), "({m},{n})");
        }
    }

    #[test]
    fn l2_skew_supersymmetry_pi_tilde() {
        let reps = Reps::new(1, 1).unwrap();
        let dim = reps.tkk.lie.dim();
        let g0 = GaussianFunction::new(SuperPoly::one(&reps.std), &reps.x, Rat::one());
        let mut args = vec![g0.clone()];
        for d in 1..=3u64 {
            for mo in monomials_of_degree(&reps.std, &reps.x, d) {
                args.push(g0.mul_poly(&SuperPoly::from_terms(
                    &reps.std,
                    [(mo, Scalar::one())],
                )));
            }
        }
        for k in 0..dim {
            let op = reps.pi_tilde(&coords_unit(dim, k));
            let parity = reps.tkk.lie.parity(k);
            for f in &args {
                for g in &args {
                    if f.poly.parity().is_none() {
                        continue;
                    }
                    assert!(
                        l2_skew_supersymmetric(&op, parity, f, g),
                        "skew failed for basis {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn fock_skew_supersymmetry_rho_tilde() {
        let reps = Reps::new(2, 0).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let zbb = space.banks[3].clone();
        let dim = reps.tkk.lie.dim();
        let mut args = vec![SuperPoly::one(space)];
        for d in 1..=4u64 {
            for mo in monomials_of_degree(space, &zb, d) {
                args.push(SuperPoly::from_terms(space, [(mo, Scalar::one())]));
            }
        }
        for k in 0..dim {
            // rho~ expressed on the z bank: rebuild with the z bank playing
            // the role of the function variables
            let op = rho_tilde_on_bank(&reps, k, &zb);
            let parity = reps.tkk.lie.parity(k);
            for p in &args {
                for q in &args {
                    assert!(
                        fock_skew_supersymmetric(&op, parity, p, q, &zb, &zbb),
                        "fock skew failed for basis {k}"
                    );
                }
            }
        }
    }

    /// `rho~` with operators acting on an arbitrary vector bank.
    fn rho_tilde_on_bank(reps: &Reps, basis_k: usize, bank: &Bank) -> DiffOperator {
        let x = crate::linalg::mat_vec(
            &reps.cayley,
            &coords_unit(reps.tkk.lie.dim(), basis_k),
        );
        let op_on_x = reps.pi_tilde(&x);
        // move multipliers and derivative words from the x bank to `bank`
        let space = &reps.std;
        let mut out = DiffOperator::zero(space);
        for (word, mult) in &op_on_x.terms {
            let mut new_word = crate::superspace::Monomial::unit(space.var_count());
            for (v, &e) in word.0.iter().enumerate() {
                if e > 0 {
                    new_word.0[bank.start + (v - reps.x.start)] = e;
                }
            }
            let new_mult = mult.rename_bank(&reps.x, bank);
            out = out.add(&DiffOperator {
                space: space.clone(),
                terms: [(new_word, new_mult)].into_iter().collect(),
            });
        }
        out
    }

    #[test]
    fn kernel_slice_reproduction() {
        for (m, n) in [(1usize, 0usize), (1, 1)] {
            let reps = Reps::new(m, n).unwrap();
            let mvs = &reps.mvs;
            for lambda in [rat(-1, 2), rat(1, 1)] {
                let v = compute_v_lambda(mvs, &lambda);
                for k in 0..=3u64 {
                    let slice = IdealSlice::new(mvs, &v, k);
                    for mo in monomials_of_degree(&mvs.space, &mvs.z, k) {
                        let p = SuperPoly::from_terms(&mvs.space, [(mo, Scalar::one())]);
                        let (lhs, rhs) = kernel_reproduce(mvs, &lambda, &slice, &p, k);
                        assert_eq!(lhs, rhs, "({m},{n}) lambda={lambda} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn fock_kernel_reproduction() {
        let reps = Reps::new(2, 1).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let wb = space.banks[2].clone();
        let kernel = fock_kernel_truncated(space, &zb, &wb, 3);
        for d in 0..=3u64 {
            for mo in monomials_of_degree(space, &zb, d) {
                let p = SuperPoly::from_terms(space, [(mo, Scalar::one())]);
                // <p(z), exp(z•w)>_F = p(w)
                let paired = fischer_pair_in_bank(&p, &kernel, &zb);
                let expected = p.rename_bank(&zb, &wb);
                assert_eq!(paired, expected);
            }
        }
    }

    /// Fischer pairing that keeps spectator banks (for kernels).
    fn fischer_pair_in_bank(p: &SuperPoly, q: &SuperPoly, bank: &Bank) -> SuperPoly {
        let space = &p.space;
        let qbar = q.conj();
        let mut acc = SuperPoly::zero(space);
        for (mono, c) in &p.terms {
            let mut op = DiffOperator::identity(space);
            for (v, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    op = op.compose(&DiffOperator::lowered(space, bank, v - bank.start));
                }
            }
            let image = op.apply(&qbar);
            for (mo, co) in &image.terms {
                let has_bank = (0..bank.len).any(|k| mo.0[bank.start + k] > 0);
                if !has_bank {
                    acc.add_term(mo.clone(), co.mul(c));
                }
            }
        }
        acc
    }

    #[test]
    fn folded_kernel_is_cosh_slice() {
        // psi(I_{-1/2,k}) equals the degree-2k slice (z•w)^{2k}/(2k)!
        for (m, n) in [(1usize, 1usize), (2, 0)] {
            let reps = Reps::new(m, n).unwrap();
            let mvs = &reps.mvs;
            let space = &reps.std;
            let (zb, wb) = (space.banks[1].clone(), space.banks[2].clone());
            for k in 0..=3u64 {
                let slice = kernel_slice(mvs, &rat(-1, 2), k);
                // fold z -> z and w -> w banks
                let mut image = SuperPoly::zero(space);
                for (mono, c) in &slice.terms {
                    let mut term = SuperPoly::constant(space, c.clone());
                    for (v, &e) in mono.0.iter().enumerate() {
                        for _ in 0..e {
                            let (bank_t, local) = if v >= mvs.w.start {
                                (&wb, v - mvs.w.start)
                            } else {
                                (&zb, v - mvs.z.start)
                            };
                            let (i, j) = mvs.jordan.basis.pairs[local];
                            let f = SuperPoly::var(space, bank_t.start + i)
                                .mul(&SuperPoly::var(space, bank_t.start + j));
                            term = term.mul(&f);
                        }
                    }
                    image = image.add(&term);
                }
                let zw = trace_product(space, &zb, &wb);
                let expected = zw
                    .pow(2 * k as u32)
                    .scale(&Scalar::one().div(&factorial(2 * k)).unwrap());
                assert_eq!(image, expected, "({m},{n}) k={k}");
            }
        }
    }

    #[test]
    fn fundamental_symmetry_properties() {
        for (m, n) in [(1usize, 1usize), (0, 2), (2, 1)] {
            let reps = Reps::new(m, n).unwrap();
            let space = &reps.std;
            let zb = space.banks[1].clone();
            // S_F(z_1) = z^1 = z_1 for even first index
            if m >= 1 {
                let z1 = SuperPoly::var(space, zb.start);
                assert_eq!(fundamental_symmetry(&z1, &zb), z1);
            }
            for k in 0..=3u64 {
                for mo in monomials_of_degree(space, &zb, k) {
                    let p = SuperPoly::from_terms(space, [(mo, Scalar::one())]);
                    // S_F^4 = id
                    let mut q = p.clone();
                    for _ in 0..4 {
                        q = fundamental_symmetry(&q, &zb);
                    }
                    assert_eq!(q, p, "S_F^4 at ({m},{n})");
                }
            }
            // <S_F p, S_F q>_F = <p, q>_F
            let mut rng = SplitMix64::new(99);
            for _ in 0..20 {
                let d = rng.below(3);
                let monos = monomials_of_degree(space, &zb, d);
                let pick = |rng: &mut SplitMix64| {
                    let mut p = SuperPoly::zero(space);
                    for mo in &monos {
                        p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-2, 2)));
                    }
                    p
                };
                let p = pick(&mut rng);
                let q = pick(&mut rng);
                assert_eq!(
                    pair_fischer(
                        &fundamental_symmetry(&p, &zb),
                        &fundamental_symmetry(&q, &zb),
                        &zb
                    ),
                    pair_fischer(&p, &q, &zb)
                );
            }
        }
    }

    #[test]
    fn sf_squared_sign_on_odd_pair() {
        // (0,1)-type odd pair inside (0,2): S_F^2 = +-1 on a two-letter word
        let reps = Reps::new(0, 2).unwrap();
        let space = &reps.std;
        let zb = space.banks[1].clone();
        let z1z2 = SuperPoly::var(space, zb.start).mul(&SuperPoly::var(space, zb.start + 1));
        let s2 = fundamental_symmetry(&fundamental_symmetry(&z1z2, &zb), &zb);
        assert!(s2 == z1z2 || s2 == z1z2.neg());
        let mut s4 = s2.clone();
        s4 = fundamental_symmetry(&fundamental_symmetry(&s4, &zb), &zb);
        assert_eq!(s4, z1z2);
    }

    #[test]
    fn sf_gram_positive_definite() {
        for (m, n) in [(1usize, 1usize), (2, 0), (0, 2)] {
            let space = crate::superspace::vector_space(m, n, &["z"]);
            let bank = space.banks[0].clone();
            for k in 0..=3u64 {
                let gram = sf_gram_matrix(&space, &bank, k);
                if gram.is_empty() {
                    continue;
                }
                assert!(positive_definite_rat(&gram), "Gram not PD at ({m},{n}) k={k}");
            }
        }
    }

    #[test]
    fn bessel_fischer_gram_nonsingular() {
        for (m, n) in [(1usize, 1usize), (2, 0)] {
            let reps = Reps::new(m, n).unwrap();
            let mvs = &reps.mvs;
            for lambda in [rat(-1, 2), rat(1, 1)] {
                let v = compute_v_lambda(mvs, &lambda);
                for k in 0..=3u64 {
                    let slice = IdealSlice::new(mvs, &v, k);
                    let gram = bessel_fischer_gram(mvs, &lambda, &slice);
                    if gram.is_empty() {
                        continue;
                    }
                    assert_eq!(
                        gram_rank(&gram),
                        gram.len(),
                        "Gram singular at ({m},{n}) lambda={lambda} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn schrodinger_product_via_folding() {
        // <1, 1>_O = <exp(-R^2), exp(-R^2)>_W = 1
        let reps = Reps::new(1, 1).unwrap();
        let mvs = &reps.mvs;
        let one = SuperPoly::one(&mvs.space);
        let v = pair_schrodinger(mvs, &one, &one, &reps.std, &reps.x);
        assert_eq!(v, Scalar::one());
        let _ = rat_int(1);
    }

    #[test]
    fn l2_proof_intermediate_identity() {
        // <x_i d_j f, g> + (-1)^{(|i|+|j|)|f|} <f, x_i d_j g>
        //   = -beta_ij <f, g>
        let reps = Reps::new(1, 1).unwrap();
        let space = &reps.std;
        let bank = &reps.x;
        let beta = space.beta();
        let g0 = GaussianFunction::new(SuperPoly::one(space), bank, Rat::one());
        let mut args = vec![g0.clone()];
        for d in 1..=2u64 {
            for mo in monomials_of_degree(space, bank, d) {
                args.push(
                    g0.mul_poly(&SuperPoly::from_terms(space, [(mo, Scalar::one())])),
                );
            }
        }
        for i in 0..bank.len {
            for j in 0..bank.len {
                let op = DiffOperator::from_multiplier(SuperPoly::var(space, bank.start + i))
                    .compose(&DiffOperator::lowered(space, bank, j));
                let op_par = beta.parity(i) ^ beta.parity(j);
                for f in &args {
                    let Some(pf) = f.poly.parity() else {
                        continue;
                    };
                    for g in &args {
                        let lhs = pair_l2(&f.apply_op(&op), g);
                        let mid = pair_l2(f, &g.apply_op(&op));
                        let sign =
                            if op_par & pf == 1 { Scalar::one() } else { Scalar::from_int(-1) };
                        let rhs = mid
                            .mul(&sign)
                            .add(&pair_l2(f, g).mul_int(-beta.beta(i, j)));
                        assert_eq!(lhs, rhs, "intermediate identity at ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn tf_composition_consistency() {
        // <p, psi^{-1} S_F psi q>_B = <psi p, S_F psi q>_F on even classes
        let reps = Reps::new(1, 1).unwrap();
        let mvs = &reps.mvs;
        let lambda = rat(-1, 2);
        let space = &reps.std;
        let zb = space.banks[1].clone();
        for mo in monomials_of_degree(&mvs.space, &mvs.z, 2) {
            let p = SuperPoly::from_terms(&mvs.space, [(mo.clone(), Scalar::one())]);
            for mo2 in monomials_of_degree(&mvs.space, &mvs.z, 2) {
                let q = SuperPoly::from_terms(&mvs.space, [(mo2, Scalar::one())]);
                let folded_q = fold_psi(mvs, &q, space, &zb);
                let sf_q = fundamental_symmetry(&folded_q, &zb);
                let tf_q = crate::bessel::unfold_psi(mvs, &sf_q, space, &zb);
                let lhs = pair_bessel_fischer(mvs, &lambda, &p, &tf_q);
                let rhs =
                    pair_fischer(&fold_psi(mvs, &p, space, &zb), &sf_q, &zb);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn gram_entries_are_rational_for_monomial_basis() {
        let space = crate::superspace::vector_space(1, 2, &["z"]);
        let bank = space.banks[0].clone();
        let gram = sf_gram_matrix(&space, &bank, 1);
        let idx = basis_index(&monomials_of_degree(&space, &bank, 1));
        assert_eq!(gram.len(), idx.len());
        assert!(positive_definite_rat(&gram));
    }
}
