//! Matrix-variable polynomial space over `J^-`, the Bessel operators (built
//! two independent ways), the classification of Bessel-annihilated
//! quadratics `V_lambda`, the ideals `I_lambda`, and the folding maps.

use crate::algebra::{add_coords, coords_zero, Coords, JordanAlg};
use crate::diffop::DiffOperator;
use crate::linalg;
use crate::scalar::{Rat, Scalar};
use crate::superspace::{
    basis_index, coeff_vector, custom_space, monomials_of_degree, Bank, Monomial, Space,
    SuperPoly,
};
use std::collections::BTreeMap;

/// Polynomials on `J^-` in the matrix variables `z_ij`, plus a second copy
/// `w_ij` for kernel computations.
pub struct MatrixVarSpace {
    pub jordan: JordanAlg,
    pub space: Space,
    pub z: Bank,
    pub w: Bank,
}

impl MatrixVarSpace {
    pub fn new(jordan: JordanAlg) -> Self {
        let mk = |prefix: &str| {
            jordan
                .basis
                .pairs
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| {
                    let parity = jordan.parity(k);
                    (format!("{prefix}{}{}", i + 1, j + 1), parity, parity == 1)
                })
                .collect::<Vec<_>>()
        };
        let space = custom_space(
            jordan.m,
            jordan.n,
            &[("z", mk("z"), false), ("w", mk("w"), false)],
        );
        let z = space.banks[0].clone();
        let w = space.banks[1].clone();
        let mvs = MatrixVarSpace { jordan, space, z, w };
        mvs.assert_derivative_identity();
        mvs
    }

    pub fn dim(&self) -> usize {
        self.jordan.dim()
    }

    /// The variable `ell_ij` of the chosen bank, resolved against the
    /// symmetry; `None` when it vanishes.
    pub fn var(&self, bank: &Bank, i: usize, j: usize) -> Option<(usize, i64)> {
        self.jordan.resolve(i, j).map(|(k, s)| (bank.start + k, s))
    }

    pub fn var_poly(&self, bank: &Bank, i: usize, j: usize) -> SuperPoly {
        match self.var(bank, i, j) {
            None => SuperPoly::zero(&self.space),
            Some((v, s)) => SuperPoly::var(&self.space, v).scale(&Scalar::from_int(s)),
        }
    }

    /// The raw derivative `d^{ij} = d/d(ell_ij)` resolved the same way.
    pub fn deriv_op(&self, bank: &Bank, i: usize, j: usize) -> DiffOperator {
        match self.var(bank, i, j) {
            None => DiffOperator::zero(&self.space),
            Some((v, s)) => DiffOperator::deriv(&self.space, v).scale(&Scalar::from_int(s)),
        }
    }

    /// Raised variable `ell^{ij} = sum_{kl} ell_kl beta^{ki} beta^{lj}`.
    pub fn raised_var(&self, bank: &Bank, i: usize, j: usize) -> SuperPoly {
        let beta = self.jordan.beta;
        let d = beta.dim();
        let mut out = SuperPoly::zero(&self.space);
        for k in 0..d {
            let a = beta.beta_inv(k, i);
            if a == 0 {
                continue;
            }
            for l in 0..d {
                let b = beta.beta_inv(l, j);
                if b == 0 {
                    continue;
                }
                out = out.add(&self.var_poly(bank, k, l).scale(&Scalar::from_int(a * b)));
            }
        }
        out
    }

    /// Lowered derivative `d_ij = sum_{kl} beta_ik beta_jl d^{kl}`.
    pub fn lowered_deriv(&self, bank: &Bank, i: usize, j: usize) -> DiffOperator {
        let beta = self.jordan.beta;
        let d = beta.dim();
        let mut out = DiffOperator::zero(&self.space);
        for k in 0..d {
            let a = beta.beta(i, k);
            if a == 0 {
                continue;
            }
            for l in 0..d {
                let b = beta.beta(j, l);
                if b == 0 {
                    continue;
                }
                out = out.add(&self.deriv_op(bank, k, l).scale(&Scalar::from_int(a * b)));
            }
        }
        out
    }

    /// `d_ij ell^{kl} = delta_ik delta_jl + (-1)^{|i||j|} delta_il delta_jk
    ///  - delta_ij delta_kl delta_ik`, asserted for all index quadruples.
    /// On a fully diagonal odd quadruple both sides vanish (the first two
    /// deltas already cancel and the correction term does not apply).
    fn assert_derivative_identity(&self) {
        let beta = self.jordan.beta;
        let d = beta.dim();
        for i in 0..d {
            for j in 0..d {
                let op = self.lowered_deriv(&self.z, i, j);
                for k in 0..d {
                    for l in 0..d {
                        let target = self.raised_var(&self.z, k, l);
                        let got = op.apply(&target);
                        let mut expected = 0i64;
                        if i == k && j == l {
                            expected += 1;
                        }
                        if i == l && j == k {
                            expected +=
                                if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
                        }
                        if i == j && k == l && i == k && beta.parity(i) == 0 {
                            expected -= 1;
                        }
                        assert_eq!(
                            got,
                            SuperPoly::constant(&self.space, Scalar::from_int(expected)),
                            "derivative identity failed at {i}{j}{k}{l}"
                        );
                    }
                }
            }
        }
    }

    /// `(z|w) = (1/4) sum_{ij} z^{ji} w_ij`.
    pub fn pairing_z_w(&self) -> SuperPoly {
        let d = self.jordan.beta.dim();
        let mut out = SuperPoly::zero(&self.space);
        for i in 0..d {
            for j in 0..d {
                let zr = self.raised_var(&self.z, j, i);
                let wv = self.var_poly(&self.w, i, j);
                out = out.add(&zr.mul(&wv));
            }
        }
        out.scale(&Scalar::from_ratio(1, 4))
    }

    /// The polynomial `2e` (twice the Jordan unit, read in the `z` bank).
    pub fn two_e(&self) -> SuperPoly {
        self.coords_to_poly(&self.jordan.unit(), &self.z).scale(&Scalar::from_int(2))
    }

    /// Interprets `J` coordinates as a degree-one polynomial in a bank.
    pub fn coords_to_poly(&self, x: &Coords, bank: &Bank) -> SuperPoly {
        let mut out = SuperPoly::zero(&self.space);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Monomial::var(self.space.var_count(), bank.start + k), c.clone());
            }
        }
        out
    }
}

/// Which of the two constructions of the Bessel operator to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselConstruction {
    Definitional,
    Explicit,
}

/// The Bessel operator `B_lambda(ell_ij)` acting on the `z` bank.
pub fn bessel_operator(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    i: usize,
    j: usize,
    construction: BesselConstruction,
) -> DiffOperator {
    match construction {
        BesselConstruction::Definitional => bessel_definitional(mvs, lambda, i, j),
        BesselConstruction::Explicit => bessel_explicit(mvs, lambda, i, j),
    }
}

/// Definitional construction: `B(x) = sum_p lambda_{z_p}(x) d_{z_p}
/// + sum_{p,q} P~_{z_p, z_q}(x) d_{z_q} d_{z_p}` with
/// `lambda_u(x) = -2 lambda(L_{xu})` and
/// `P~_{u,v}(x) = (-1)^{|x|(|u|+|v|)} (L_u L_v + (-1)^{|u||v|} L_v L_u - L_{uv})(x)`.
fn bessel_definitional(mvs: &MatrixVarSpace, lambda: &Rat, i: usize, j: usize) -> DiffOperator {
    let jord = &mvs.jordan;
    let dim = jord.dim();
    let Some((x_idx, x_sign)) = jord.resolve(i, j) else {
        return DiffOperator::zero(&mvs.space);
    };
    let x = {
        let mut v = coords_zero(dim);
        v[x_idx] = Scalar::from_int(x_sign);
        v
    };
    let x_par = jord.parity(x_idx);
    // character value of L_y: lambda(L_{ell_ab}) = beta_ab * lambda
    let char_of = |y: &Coords| -> Scalar {
        let mut acc = Scalar::zero();
        for (k, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = jord.basis.pairs[k];
            let bv = jord.beta.beta(a, b);
            if bv != 0 {
                acc = acc.add(&c.mul_rat(lambda).mul_int(bv));
            }
        }
        acc
    };
    let mut out = DiffOperator::zero(&mvs.space);
    for p in 0..dim {
        let zp = crate::algebra::coords_unit(dim, p);
        let xz = jord.product(&x, &zp);
        let c = char_of(&xz).mul_int(-2);
        if !c.is_zero() {
            out = out.add(&DiffOperator::deriv(&mvs.space, mvs.z.start + p).scale(&c));
        }
        for q in 0..dim {
            let zq = crate::algebra::coords_unit(dim, q);
            let lplq = jord.product(&zp, &jord.product(&zq, &x));
            let lqlp = jord.product(&zq, &jord.product(&zp, &x));
            let lpq = jord.product(&jord.product(&zp, &zq), &x);
            let sign_pq = if jord.parity(p) & jord.parity(q) == 1 { -1 } else { 1 };
            let mut val = lplq.clone();
            add_coords(&mut val, &lqlp, &Scalar::from_int(sign_pq));
            add_coords(&mut val, &lpq, &Scalar::from_int(-1));
            let front = if x_par & (jord.parity(p) ^ jord.parity(q)) == 1 { -1 } else { 1 };
            let mult = mvs.coords_to_poly(&val, &mvs.z).scale(&Scalar::from_int(front));
            if mult.is_zero() {
                continue;
            }
            let term = DiffOperator::from_multiplier(mult)
                .compose(&DiffOperator::deriv(&mvs.space, mvs.z.start + q))
                .compose(&DiffOperator::deriv(&mvs.space, mvs.z.start + p));
            out = out.add(&term);
        }
    }
    out
}

/// Explicit construction:
/// `B(ell_ij) = -2 lambda sum_{kl} (1+delta_kl) beta_jk beta_il d_{ell_kl}
///  + sum_{klrs} (-1)^{|k||i|} (1+delta_kl+delta_rs+delta_kl delta_rs)
///    beta_is beta_jl ell_kr d_{ell_sr} d_{ell_lk}`.
fn bessel_explicit(mvs: &MatrixVarSpace, lambda: &Rat, i: usize, j: usize) -> DiffOperator {
    let beta = mvs.jordan.beta;
    let d = beta.dim();
    let mut out = DiffOperator::zero(&mvs.space);
    for k in 0..d {
        for l in 0..d {
            let c = beta.beta(j, k) * beta.beta(i, l);
            if c == 0 {
                continue;
            }
            let factor = 1 + i64::from(k == l);
            let coeff =
                Scalar::from_rat(-(Rat::from_integer(2.into()) * lambda)).mul_int(factor * c);
            out = out.add(&mvs.deriv_op(&mvs.z, k, l).scale(&coeff));
        }
    }
    for k in 0..d {
        for l in 0..d {
            let bjl = beta.beta(j, l);
            if bjl == 0 {
                continue;
            }
            for r in 0..d {
                for s in 0..d {
                    let bis = beta.beta(i, s);
                    if bis == 0 {
                        continue;
                    }
                    let sign = if beta.parity(k) & beta.parity(i) == 1 { -1 } else { 1 };
                    let factor = (1 + i64::from(k == l)) * (1 + i64::from(r == s));
                    let coeff = Scalar::from_int(sign * factor * bis * bjl);
                    let mult = mvs.var_poly(&mvs.z, k, r);
                    if mult.is_zero() {
                        continue;
                    }
                    let term = DiffOperator::from_multiplier(mult.scale(&coeff))
                        .compose(&mvs.deriv_op(&mvs.z, s, r))
                        .compose(&mvs.deriv_op(&mvs.z, l, k));
                    out = out.add(&term);
                }
            }
        }
    }
    out
}

/// All Bessel operators for the canonical `J^+` basis pairs.
pub fn bessel_family(
    mvs: &MatrixVarSpace,
    lambda: &Rat,
    construction: BesselConstruction,
) -> Vec<DiffOperator> {
    mvs.jordan
        .basis
        .pairs
        .iter()
        .map(|&(i, j)| bessel_operator(mvs, lambda, i, j, construction))
        .collect()
}

/// Basis of `V_lambda` (quadratics on the `z` bank annihilated by every
/// Bessel operator), split into even and odd parts.
pub struct VLambdaBasis {
    pub lambda: Rat,
    pub even: Vec<SuperPoly>,
    pub odd: Vec<SuperPoly>,
}

impl VLambdaBasis {
    pub fn dim_even(&self) -> usize {
        self.even.len()
    }
    pub fn dim_odd(&self) -> usize {
        self.odd.len()
    }
    pub fn sdim(&self) -> i64 {
        self.even.len() as i64 - self.odd.len() as i64
    }
    pub fn all(&self) -> impl Iterator<Item = &SuperPoly> {
        self.even.iter().chain(self.odd.iter())
    }
}

/// Solves the linear condition for a quadratic to be annihilated by all
/// Bessel operators: `2 (-1)^{|i||j|} lambda a_{ijkl} =
/// (-1)^{|i||k|} a_{jkil} + (-1)^{|k||l|+|i||l|} a_{jlik}` over the
/// symmetry-constrained coefficient tensor.
pub fn compute_v_lambda(mvs: &MatrixVarSpace, lambda: &Rat) -> VLambdaBasis {
    let beta = mvs.jordan.beta;
    let d = beta.dim();
    let par = |k: usize| beta.parity(k) as i32;

    type Tup = (usize, usize, usize, usize);
    let orbit = |t: Tup| -> Vec<(Tup, i64)> {
        let (i, j, k, l) = t;
        let s_ij = if par(i) & par(j) == 1 { -1 } else { 1 };
        let s_kl = if par(k) & par(l) == 1 { -1 } else { 1 };
        let s_sw =
            if (par(i) + par(j)) % 2 == 1 && (par(k) + par(l)) % 2 == 1 { -1 } else { 1 };
        vec![
            ((i, j, k, l), 1i64),
            ((j, i, k, l), s_ij),
            ((i, j, l, k), s_kl),
            ((j, i, l, k), s_ij * s_kl),
            ((k, l, i, j), s_sw),
            ((l, k, i, j), s_sw * s_kl),
            ((k, l, j, i), s_sw * s_ij),
            ((l, k, j, i), s_sw * s_ij * s_kl),
        ]
    };
    let mut canon: BTreeMap<Tup, Option<(Tup, i64)>> = BTreeMap::new();
    let mut unknown_index: BTreeMap<Tup, usize> = BTreeMap::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let t = (i, j, k, l);
                    if canon.contains_key(&t) {
                        continue;
                    }
                    let orb = orbit(t);
                    let rep = orb.iter().map(|&(u, _)| u).min().unwrap();
                    // a contradictory sign anywhere in the orbit forces zero
                    let mut forced_zero = false;
                    let mut seen: BTreeMap<Tup, i64> = BTreeMap::new();
                    for (u, s) in &orb {
                        match seen.entry(*u) {
                            std::collections::btree_map::Entry::Vacant(v) => {
                                v.insert(*s);
                            }
                            std::collections::btree_map::Entry::Occupied(o) => {
                                if *o.get() != *s {
                                    forced_zero = true;
                                }
                            }
                        }
                    }
                    // pick the orientation sign of each orbit member against
                    // the representative
                    let mut repsign: BTreeMap<Tup, i64> = BTreeMap::new();
                    for (u, s) in &orb {
                        repsign.entry(*u).or_insert(*s);
                    }
                    let rep_self = repsign[&rep];
                    for (u, _) in orb {
                        let s_rel = repsign[&u] * rep_self;
                        let entry = if forced_zero { None } else { Some((rep, s_rel)) };
                        canon.entry(u).or_insert(entry);
                    }
                    if !forced_zero {
                        let next = unknown_index.len();
                        unknown_index.entry(rep).or_insert(next);
                    }
                }
            }
        }
    }
    let ncols = unknown_index.len();
    let lookup =
        |t: Tup| -> Option<(usize, i64)> { canon[&t].map(|(rep, s)| (unknown_index[&rep], s)) };
    let tuple_parity =
        |t: Tup| -> u8 { ((par(t.0) + par(t.1) + par(t.2) + par(t.3)) % 2) as u8 };

    let mut even = Vec::new();
    let mut odd = Vec::new();
    for parity in [0u8, 1u8] {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        if tuple_parity((i, j, k, l)) != parity {
                            continue;
                        }
                        let mut row = vec![Scalar::zero(); ncols];
                        let mut touched = false;
                        if let Some((c, s)) = lookup((i, j, k, l)) {
                            let sg = if par(i) & par(j) == 1 { -1 } else { 1 };
                            row[c] = row[c].add(
                                &Scalar::from_rat(lambda * Rat::from_integer(2.into()))
                                    .mul_int(sg * s),
                            );
                            touched = true;
                        }
                        if let Some((c, s)) = lookup((j, k, i, l)) {
                            let sg = if par(i) & par(k) == 1 { -1 } else { 1 };
                            row[c] = row[c].add(&Scalar::from_int(-sg * s));
                            touched = true;
                        }
                        if let Some((c, s)) = lookup((j, l, i, k)) {
                            let sg = if (par(k) & par(l)) ^ (par(i) & par(l)) == 1 {
                                -1
                            } else {
                                1
                            };
                            row[c] = row[c].add(&Scalar::from_int(-sg * s));
                            touched = true;
                        }
                        if touched {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        for (t, &c) in &unknown_index {
            if tuple_parity(*t) != parity {
                let mut row = vec![Scalar::zero(); ncols];
                row[c] = Scalar::one();
                rows.push(row);
            }
        }
        let ns = linalg::nullspace(&rows, ncols);
        for alpha in ns {
            let mut q = SuperPoly::zero(&mvs.space);
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            if let Some((c, s)) = lookup((i, j, k, l)) {
                                if alpha[c].is_zero() {
                                    continue;
                                }
                                let prod = mvs
                                    .var_poly(&mvs.z, i, j)
                                    .mul(&mvs.var_poly(&mvs.z, k, l));
                                q = q.add(&prod.scale(&alpha[c].mul_int(s)));
                            }
                        }
                    }
                }
            }
            if q.is_zero() {
                continue;
            }
            if parity == 0 {
                even.push(q);
            } else {
                odd.push(q);
            }
        }
    }
    // Reduce each parity class to an independent basis.
    let monos = monomials_of_degree(&mvs.space, &mvs.z, 2);
    let idx = basis_index(&monos);
    let basis_of = |polys: &[SuperPoly]| -> Vec<SuperPoly> {
        let mut kept: Vec<SuperPoly> = Vec::new();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for p in polys {
            let v = coeff_vector(p, &idx);
            let mut with = cols.clone();
            with.push(v.clone());
            let mut mt = linalg::zeros(idx.len(), with.len());
            for (cj, col) in with.iter().enumerate() {
                for (ri, val) in col.iter().enumerate() {
                    mt[ri][cj] = val.clone();
                }
            }
            if linalg::rank(&mt) > cols.len() {
                cols.push(v);
                kept.push(p.clone());
            }
        }
        kept
    };
    VLambdaBasis { lambda: lambda.clone(), even: basis_of(&even), odd: basis_of(&odd) }
}

/// Independent route: the kernel of all Bessel operators on quadratics.
pub fn v_lambda_by_kernel(mvs: &MatrixVarSpace, lambda: &Rat) -> VLambdaBasis {
    let ops = bessel_family(mvs, lambda, BesselConstruction::Explicit);
    let monos1 = monomials_of_degree(&mvs.space, &mvs.z, 1);
    let idx1 = basis_index(&monos1);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for parity in [0u8, 1u8] {
        let monos2: Vec<Monomial> = monomials_of_degree(&mvs.space, &mvs.z, 2)
            .into_iter()
            .filter(|mo| mo.parity(&mvs.space) == parity)
            .collect();
        if monos2.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for op in &ops {
            let cols: Vec<Vec<Scalar>> = monos2
                .iter()
                .map(|mo| {
                    let p = SuperPoly::from_terms(&mvs.space, [(mo.clone(), Scalar::one())]);
                    coeff_vector(&op.apply(&p), &idx1)
                })
                .collect();
            for r in 0..idx1.len() {
                let row: Vec<Scalar> = cols.iter().map(|c| c[r].clone()).collect();
                if !row.iter().all(Scalar::is_zero) {
                    rows.push(row);
                }
            }
        }
        let ns = if rows.is_empty() {
            (0..monos2.len())
                .map(|k| {
                    let mut v = vec![Scalar::zero(); monos2.len()];
                    v[k] = Scalar::one();
                    v
                })
                .collect()
        } else {
            linalg::nullspace(&rows, monos2.len())
        };
        for v in ns {
            let mut q = SuperPoly::zero(&mvs.space);
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    q.add_term(monos2[k].clone(), c.clone());
                }
            }
            if parity == 0 {
                even.push(q);
            } else {
                odd.push(q);
            }
        }
    }
    VLambdaBasis { lambda: lambda.clone(), even, odd }
}

/// Closed-form dimensions `(even, odd)` of `V_1`.
pub fn v1_dims_closed(m: i64, n: i64) -> (i64, i64) {
    let even = (m.pow(4) + 24 * m * m * n * n + 16 * n.pow(4) + 6 * m.pow(3)
        - 12 * m * m * n
        + 24 * m * n * n
        - 48 * n.pow(3)
        + 11 * m * m
        - 12 * m * n
        + 44 * n * n
        + 6 * m
        - 12 * n)
        / 24;
    let odd = m * n * (m * m + 4 * n * n + 3 * m - 6 * n + 4) / 3;
    (even, odd)
}

/// Closed-form dimensions `(even, odd)` of `V_{-1/2}`.
pub fn v_half_dims_closed(m: i64, n: i64) -> (i64, i64) {
    let even =
        (m.pow(4) + 24 * m * m * n * n + 16 * n.pow(4) - m * m - 12 * m * n - 4 * n * n) / 12;
    let odd = 2 * m * n * (m * m + 4 * n * n - 2) / 3;
    (even, odd)
}

/// `sdim V_1 = M(M+1)(M+2)(M+3)/24` with `M = m-2n`.
pub fn v1_sdim_closed(big_m: i64) -> i64 {
    big_m * (big_m + 1) * (big_m + 2) * (big_m + 3) / 24
}

/// `sdim V_{-1/2} = (M-1) M^2 (M+1) / 12`.
pub fn v_half_sdim_closed(big_m: i64) -> i64 {
    (big_m - 1) * big_m * big_m * (big_m + 1) / 12
}

/// The displayed spanning generator of `V_1`:
/// `l_ij l_kl + (-1)^{|k||j|} l_ik l_jl + (-1)^{(|j|+|k|)|l|} l_il l_jk`.
pub fn v1_spanning_generator(
    mvs: &MatrixVarSpace,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> SuperPoly {
    let par = |a: usize| mvs.jordan.beta.parity(a) as u32;
    let t1 = mvs.var_poly(&mvs.z, i, j).mul(&mvs.var_poly(&mvs.z, k, l));
    let s2 = if par(k) & par(j) == 1 { -1 } else { 1 };
    let t2 = mvs.var_poly(&mvs.z, i, k).mul(&mvs.var_poly(&mvs.z, j, l));
    let s3 = if (par(j) + par(k)) * par(l) % 2 == 1 { -1 } else { 1 };
    let t3 = mvs.var_poly(&mvs.z, i, l).mul(&mvs.var_poly(&mvs.z, j, k));
    t1.add(&t2.scale(&Scalar::from_int(s2))).add(&t3.scale(&Scalar::from_int(s3)))
}

/// The displayed spanning generator of `V_{-1/2}`:
/// `l_ij l_kl - (-1)^{|k||j|} l_ik l_jl`.
pub fn v_half_spanning_generator(
    mvs: &MatrixVarSpace,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> SuperPoly {
    let par = |a: usize| mvs.jordan.beta.parity(a) as u32;
    let t1 = mvs.var_poly(&mvs.z, i, j).mul(&mvs.var_poly(&mvs.z, k, l));
    let s2 = if par(k) & par(j) == 1 { -1 } else { 1 };
    let t2 = mvs.var_poly(&mvs.z, i, k).mul(&mvs.var_poly(&mvs.z, j, l));
    t1.sub(&t2.scale(&Scalar::from_int(s2)))
}

/// Span comparison of two sets of polynomials over a monomial basis.
pub fn same_span(space: &Space, bank: &Bank, deg: u64, a: &[SuperPoly], b: &[SuperPoly]) -> bool {
    let monos = monomials_of_degree(space, bank, deg);
    let idx = basis_index(&monos);
    let cols_a: Vec<Vec<Scalar>> = a.iter().map(|p| coeff_vector(p, &idx)).collect();
    let cols_b: Vec<Vec<Scalar>> = b.iter().map(|p| coeff_vector(p, &idx)).collect();
    let rank_of = |cols: &[Vec<Scalar>]| -> usize {
        if cols.is_empty() {
            return 0;
        }
        let mut mt = linalg::zeros(idx.len(), cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                mt[i][j] = v.clone();
            }
        }
        linalg::rank(&mt)
    };
    let ra = rank_of(&cols_a);
    let rb = rank_of(&cols_b);
    let mut both = cols_a;
    both.extend(cols_b);
    ra == rb && rank_of(&both) == ra
}

/// The folding map `psi`: `ell_ij -> ell_i ell_j` into the even-degree part
/// of the vector-variable algebra.
pub fn fold_psi(
    mvs: &MatrixVarSpace,
    p: &SuperPoly,
    target: &Space,
    target_bank: &Bank,
) -> SuperPoly {
    let mut out = SuperPoly::zero(target);
    for (mono, c) in &p.terms {
        let mut image = SuperPoly::constant(target, c.clone());
        for (v, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            assert!(
                v >= mvs.z.start && v < mvs.z.start + mvs.z.len,
                "fold expects polynomials on the z bank"
            );
            let (i, j) = mvs.jordan.basis.pairs[v - mvs.z.start];
            let factor = SuperPoly::var(target, target_bank.start + i)
                .mul(&SuperPoly::var(target, target_bank.start + j));
            for _ in 0..e {
                image = image.mul(&factor);
            }
        }
        out = out.add(&image);
    }
    out
}

/// A section of `psi` on even-degree polynomials: consecutive letters are
/// paired, folded back, and the coefficient fixed so `fold(unfold(p)) = p`.
pub fn unfold_psi(
    mvs: &MatrixVarSpace,
    p: &SuperPoly,
    source: &Space,
    source_bank: &Bank,
) -> SuperPoly {
    let mut out = SuperPoly::zero(&mvs.space);
    for (mono, c) in &p.terms {
        let mut letters = Vec::new();
        for local in 0..source_bank.len {
            for _ in 0..mono.0[source_bank.start + local] {
                letters.push(local);
            }
        }
        assert!(letters.len() % 2 == 0, "unfold needs even degree");
        let mut candidate = SuperPoly::one(&mvs.space);
        for pair in letters.chunks(2) {
            candidate = candidate.mul(&mvs.var_poly(&mvs.z, pair[0], pair[1]));
        }
        let back = fold_psi(mvs, &candidate, source, source_bank);
        assert_eq!(back.terms.len(), 1, "unfold candidate must fold to a monomial");
        let (bm, bc) = back.terms.iter().next().unwrap();
        assert_eq!(bm, mono);
        let adjust = c.div(bc).expect("fold coefficient invertible");
        out = out.add(&candidate.scale(&adjust));
    }
    out
}

/// The Grassmann substitution for `lambda = 1`: `ell_ij -> theta_i theta_j`
/// into the Grassmann superalgebra with `2n` even anticommuting and `m` odd
/// commuting generators.
pub struct GrassmannFold {
    pub space: Space,
    pub bank: Bank,
    /// maps the `J`-side index `i` to the theta variable slot
    pub index_map: Vec<usize>,
}

impl GrassmannFold {
    pub fn new(m: usize, n: usize) -> Self {
        let mut vars = Vec::new();
        for a in 0..2 * n {
            vars.push((format!("theta{}", a + 1), 0u8, true));
        }
        for a in 0..m {
            vars.push((format!("theta{}", 2 * n + a + 1), 1u8, false));
        }
        let space = custom_space(m, n, &[("theta", vars, true)]);
        let bank = space.banks[0].clone();
        // J-odd index m+a -> slot a; J-even index i -> slot 2n+i
        let mut index_map = vec![0usize; m + 2 * n];
        for (i, slot) in index_map.iter_mut().enumerate() {
            *slot = if i < m { 2 * n + i } else { i - m };
        }
        GrassmannFold { space, bank, index_map }
    }

    pub fn fold(&self, mvs: &MatrixVarSpace, p: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero(&self.space);
        for (mono, c) in &p.terms {
            let mut image = SuperPoly::constant(&self.space, c.clone());
            for (v, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (i, j) = mvs.jordan.basis.pairs[v - mvs.z.start];
                let factor = SuperPoly::var(&self.space, self.bank.start + self.index_map[i])
                    .mul(&SuperPoly::var(&self.space, self.bank.start + self.index_map[j]));
                for _ in 0..e {
                    image = image.mul(&factor);
                }
            }
            out = out.add(&image);
        }
        out
    }
}

/// A graded slice of the ideal `I_lambda = P * V_lambda`, with a canonical
/// reduction map for computing modulo the ideal.
pub struct IdealSlice {
    pub degree: u64,
    pub monos: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    reduced: Vec<(usize, Vec<Scalar>)>,
    pub ideal_dim: usize,
}

impl IdealSlice {
    pub fn new(mvs: &MatrixVarSpace, v_basis: &VLambdaBasis, degree: u64) -> Self {
        let monos = monomials_of_degree(&mvs.space, &mvs.z, degree);
        let index = basis_index(&monos);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        if degree >= 2 {
            for lower in monomials_of_degree(&mvs.space, &mvs.z, degree - 2) {
                let lp = SuperPoly::from_terms(&mvs.space, [(lower.clone(), Scalar::one())]);
                for v in v_basis.all() {
                    let prod = lp.mul(v);
                    if !prod.is_zero() {
                        rows.push(coeff_vector(&prod, &index));
                    }
                }
            }
        }
        let pivots = linalg::rref(&mut rows);
        let reduced: Vec<(usize, Vec<Scalar>)> =
            pivots.iter().enumerate().map(|(r, &p)| (p, rows[r].clone())).collect();
        let ideal_dim = reduced.len();
        IdealSlice { degree, monos, index, reduced, ideal_dim }
    }

    /// The canonical representative of `p` modulo the ideal slice.
    pub fn reduce(&self, p: &SuperPoly) -> SuperPoly {
        let mut v = coeff_vector(p, &self.index);
        for (pivot, basis_row) in &self.reduced {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (k, b) in basis_row.iter().enumerate() {
                v[k] = v[k].sub(&c.mul(b));
            }
        }
        let mut out = SuperPoly::zero(&p.space);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(self.monos[k].clone(), c.clone());
            }
        }
        out
    }

    /// Membership test for the ideal slice.
    pub fn contains(&self, p: &SuperPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Monomials spanning a complement of the ideal slice.
    pub fn complement_monomials(&self) -> Vec<Monomial> {
        let pivot_rows: std::collections::BTreeSet<usize> =
            self.reduced.iter().map(|(p, _)| *p).collect();
        self.monos
            .iter()
            .enumerate()
            .filter(|(k, _)| !pivot_rows.contains(k))
            .map(|(_, m)| m.clone())
            .collect()
    }
}
