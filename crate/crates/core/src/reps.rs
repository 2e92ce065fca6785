//! Polynomial realisations of `g = spo(2m|4n, Omega)` and of the Heisenberg
//! superalgebra, together with the decomposition and growth checks built on
//! them.
//!
//! All realisations are exposed as normal-ordered differential operators, so
//! bracket-homomorphism statements are checked as operator identities.

use crate::algebra::{cayley_g_matrix, coords_unit, Coords, HeisenbergAlg, Tkk, TkkElement};
use crate::bessel::{bessel_operator, BesselConstruction, MatrixVarSpace};
use crate::diffop::{euler, l_operator, laplacian, r_squared, DiffOperator};
use crate::gaussian::GaussianFunction;
use crate::linalg::{self, Matrix};
use crate::metric::{tilde, underline};
use crate::scalar::{binomial, Rat, Scalar};
use crate::superspace::{
    basis_index, coeff_vector, monomials_of_degree, vector_space, Bank, Monomial, Space,
    SuperPoly,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Identifier of a polynomial realisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepId {
    PiLambda(Rat),
    RhoLambda(Rat),
    PiTilde,
    RhoTilde,
    PiHat,
    MuStar(Rat),
    UStar(Rat),
}

/// Whether an `Omega` index is the tilde or the underline image of a
/// `K^{m|2n}` index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tilde,
    Under,
}

/// All realisation machinery for one `(m,n)`.
pub struct Reps {
    pub tkk: Tkk,
    pub mvs: MatrixVarSpace,
    /// standard space with banks `x`, `z`, `w`, `zb`, `wb`
    pub std: Space,
    pub x: Bank,
    pub cayley: Matrix,
    pub cayley_inv: Matrix,
}

impl Reps {
    pub fn new(m: usize, n: usize) -> Result<Self, crate::algebra::AlgebraError> {
        let tkk = Tkk::new(m, n)?;
        let mvs = MatrixVarSpace::new(tkk.jordan.clone());
        let std = vector_space(m, n, &["x", "z", "w", "zb", "wb"]);
        let x = std.banks[0].clone();
        let cayley = cayley_g_matrix(&tkk);
        let cayley_inv = linalg::invert(&cayley).expect("Cayley transform invertible");
        Ok(Reps { tkk, mvs, std, x, cayley, cayley_inv })
    }

    pub fn m(&self) -> usize {
        self.tkk.jordan.m
    }
    pub fn n(&self) -> usize {
        self.tkk.jordan.n
    }
    pub fn big_m(&self) -> i64 {
        self.tkk.jordan.beta.superdim()
    }

    /// Classifies an `Omega` index as `tilde(i)` or `underline(i)`.
    pub fn side_of(&self, a: usize) -> (usize, Side) {
        let (m, n) = (self.m(), self.n());
        if a < m {
            (a, Side::Tilde)
        } else if a < 2 * m {
            (a - m, Side::Under)
        } else if a < 2 * m + 2 * n {
            (a - m, Side::Tilde)
        } else {
            (a - m - 2 * n, Side::Under)
        }
    }

    fn x_var(&self, i: usize) -> SuperPoly {
        SuperPoly::var(&self.std, self.x.start + i)
    }
    fn x_lowered(&self, i: usize) -> DiffOperator {
        DiffOperator::lowered(&self.std, &self.x, i)
    }

    /// The metaplectic Schrödinger realisation on `P(K^{m|2n})`:
    /// `U_{ul i, ul j} -> 2i x_i x_j`,
    /// `U_{ti i, ul j} -> -beta_ij/2 - (-1)^{|i||j|} x_j d_i`,
    /// `U_{ti i, ti j} -> -(i/2) d_i d_j`.
    pub fn pi_tilde(&self, x: &Coords) -> DiffOperator {
        let beta = self.tkk.jordan.beta;
        let mut out = DiffOperator::zero(&self.std);
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.tkk.lie.basis.pairs[k];
            let (i, sa) = self.side_of(a);
            let (j, sb) = self.side_of(b);
            let op = match (sa, sb) {
                (Side::Under, Side::Under) => DiffOperator::from_multiplier(
                    self.x_var(i).mul(&self.x_var(j)).scale(&Scalar::i().mul_int(2)),
                ),
                (Side::Tilde, Side::Tilde) => {
                    let half_i = Scalar::i().mul(&Scalar::from_ratio(1, 2));
                    self.x_lowered(i).compose(&self.x_lowered(j)).scale(&half_i.neg())
                }
                (Side::Tilde, Side::Under) => self.mixed_pi_tilde(i, j),
                (Side::Under, Side::Tilde) => {
                    // U_ab = (-1)^{|a||b|} U_ba
                    let sign = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
                    self.mixed_pi_tilde(j, i).scale(&Scalar::from_int(sign))
                }
            };
            out = out.add(&op.scale(c));
        }
        out
    }

    fn mixed_pi_tilde(&self, i: usize, j: usize) -> DiffOperator {
        let beta = self.tkk.jordan.beta;
        let sign = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
        let half_beta = Scalar::from_ratio(beta.beta(i, j), 2);
        let xj_di = DiffOperator::from_multiplier(self.x_var(j)).compose(&self.x_lowered(i));
        DiffOperator::identity(&self.std)
            .scale(&half_beta.neg())
            .add(&xj_di.scale(&Scalar::from_int(-sign)))
    }

    /// The Fock realisation `rho~ = pi~ o c` on `P(K^{m|2n})`.
    pub fn rho_tilde(&self, x: &Coords) -> DiffOperator {
        self.pi_tilde(&linalg::mat_vec(&self.cayley, x))
    }

    /// The Fourier-side realisation:
    /// `U_{ul i, ul j} -> -2i d_i d_j`,
    /// `U_{ti i, ul j} -> beta_ij/2 + x_i d_j`,
    /// `U_{ti i, ti j} -> (i/2) x_i x_j`.
    pub fn pi_hat(&self, x: &Coords) -> DiffOperator {
        let beta = self.tkk.jordan.beta;
        let mut out = DiffOperator::zero(&self.std);
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.tkk.lie.basis.pairs[k];
            let (i, sa) = self.side_of(a);
            let (j, sb) = self.side_of(b);
            let op = match (sa, sb) {
                (Side::Under, Side::Under) => self
                    .x_lowered(i)
                    .compose(&self.x_lowered(j))
                    .scale(&Scalar::i().mul_int(-2)),
                (Side::Tilde, Side::Tilde) => DiffOperator::from_multiplier(
                    self.x_var(i)
                        .mul(&self.x_var(j))
                        .scale(&Scalar::i().mul(&Scalar::from_ratio(1, 2))),
                ),
                (Side::Tilde, Side::Under) => self.mixed_pi_hat(i, j),
                (Side::Under, Side::Tilde) => {
                    let sign = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
                    self.mixed_pi_hat(j, i).scale(&Scalar::from_int(sign))
                }
            };
            out = out.add(&op.scale(c));
        }
        out
    }

    fn mixed_pi_hat(&self, i: usize, j: usize) -> DiffOperator {
        let beta = self.tkk.jordan.beta;
        let half_beta = Scalar::from_ratio(beta.beta(i, j), 2);
        let xi_dj = DiffOperator::from_multiplier(self.x_var(i)).compose(&self.x_lowered(j));
        DiffOperator::identity(&self.std).scale(&half_beta).add(&xi_dj)
    }

    /// The quadratic-Heisenberg realisation `mu_*` with parameter `hbar`.
    pub fn mu_star(&self, hbar: &Rat, x: &Coords) -> DiffOperator {
        let beta = self.tkk.jordan.beta;
        let mut out = DiffOperator::zero(&self.std);
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.tkk.lie.basis.pairs[k];
            let (i, sa) = self.side_of(a);
            let (j, sb) = self.side_of(b);
            let op = match (sa, sb) {
                (Side::Under, Side::Under) => {
                    // -(i/hbar) d_i d_j
                    let coeff = Scalar::i().mul_rat(&(Rat::one() / hbar)).neg();
                    self.x_lowered(i).compose(&self.x_lowered(j)).scale(&coeff)
                }
                (Side::Tilde, Side::Tilde) => DiffOperator::from_multiplier(
                    self.x_var(i).mul(&self.x_var(j)).scale(&Scalar::i().mul_rat(hbar)),
                ),
                (Side::Tilde, Side::Under) => self.mixed_pi_hat(i, j),
                (Side::Under, Side::Tilde) => {
                    let sign = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
                    self.mixed_pi_hat(j, i).scale(&Scalar::from_int(sign))
                }
            };
            out = out.add(&op.scale(c));
        }
        out
    }

    /// The Schrödinger representation of the Heisenberg superalgebra:
    /// `e_{ul i} -> d_i`, `e_{ti i} -> i hbar x_i`, `Z -> i hbar`.
    pub fn u_star(&self, hbar: &Rat, h: &Coords) -> DiffOperator {
        let omega_dim = self.tkk.lie.omega.dim();
        let mut out = DiffOperator::zero(&self.std);
        for (a, c) in h.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let op = if a == omega_dim {
                DiffOperator::identity(&self.std).scale(&Scalar::i().mul_rat(hbar))
            } else {
                let (i, side) = self.side_of(a);
                match side {
                    Side::Under => self.x_lowered(i),
                    Side::Tilde => DiffOperator::from_multiplier(
                        self.x_var(i).scale(&Scalar::i().mul_rat(hbar)),
                    ),
                }
            };
            out = out.add(&op.scale(c));
        }
        out
    }

    /// The minimal realisation `pi_lambda` on the matrix-variable space,
    /// for an element given in `g` coordinates.
    pub fn pi_lambda(&self, lambda: &Rat, x: &Coords) -> DiffOperator {
        let t = self.tkk.phi_inv_apply(x);
        self.pi_lambda_tkk(lambda, &t)
    }

    /// `pi_lambda` of a TKK element.
    pub fn pi_lambda_tkk(&self, lambda: &Rat, t: &TkkElement) -> DiffOperator {
        let jord = &self.tkk.jordan;
        let dim = jord.dim();
        let space = &self.mvs.space;
        let mut out = DiffOperator::zero(space);
        // minus part: multiplication by -2i u
        if !crate::algebra::coords_is_zero(&t.minus) {
            let poly = self.mvs.coords_to_poly(&t.minus, &self.mvs.z);
            out = out.add(&DiffOperator::from_multiplier(
                poly.scale(&Scalar::i().mul_int(-2)),
            ));
        }
        // L part: lambda(L_a) - sum_k (a . z_k) d_{z_k}
        if !crate::algebra::coords_is_zero(&t.l_part) {
            let mut lam_val = Scalar::zero();
            for (k, c) in t.l_part.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, b) = jord.basis.pairs[k];
                let bv = jord.beta.beta(a, b);
                if bv != 0 {
                    lam_val = lam_val.add(&c.mul_rat(lambda).mul_int(bv));
                }
            }
            out = out.add(&DiffOperator::identity(space).scale(&lam_val));
            for k in 0..dim {
                let action = jord.product(&t.l_part, &coords_unit(dim, k));
                let poly = self.mvs.coords_to_poly(&action, &self.mvs.z);
                if poly.is_zero() {
                    continue;
                }
                let term = DiffOperator::from_multiplier(poly.neg())
                    .compose(&DiffOperator::deriv(space, self.mvs.z.start + k));
                out = out.add(&term);
            }
        }
        // Inn part: + sum_k I(z_k) d_{z_k}
        if !crate::algebra::coords_is_zero(&t.inn) {
            let mut inn_only = TkkElement::zero(&self.tkk);
            inn_only.inn = t.inn.clone();
            let mat = self.tkk.istr_matrix(&inn_only);
            for k in 0..dim {
                let action: Coords = (0..dim).map(|r| mat[r][k].clone()).collect();
                let poly = self.mvs.coords_to_poly(&action, &self.mvs.z);
                if poly.is_zero() {
                    continue;
                }
                let term = DiffOperator::from_multiplier(poly)
                    .compose(&DiffOperator::deriv(space, self.mvs.z.start + k));
                out = out.add(&term);
            }
        }
        // plus part: -(i/2) B_lambda(x)
        for (k, c) in t.plus.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = jord.basis.pairs[k];
            let bess = bessel_operator(&self.mvs, lambda, a, b, BesselConstruction::Explicit);
            out = out.add(&bess.scale(&c.mul(&Scalar::i()).mul(&Scalar::from_ratio(-1, 2))));
        }
        out
    }

    /// `rho_lambda = pi_lambda o c`.
    pub fn rho_lambda(&self, lambda: &Rat, x: &Coords) -> DiffOperator {
        self.pi_lambda(lambda, &linalg::mat_vec(&self.cayley, x))
    }

    /// Dispatch by identifier, for `g`-coordinate input.
    pub fn operator(&self, rep: &RepId, x: &Coords) -> DiffOperator {
        match rep {
            RepId::PiLambda(l) => self.pi_lambda(l, x),
            RepId::RhoLambda(l) => self.rho_lambda(l, x),
            RepId::PiTilde => self.pi_tilde(x),
            RepId::RhoTilde => self.rho_tilde(x),
            RepId::PiHat => self.pi_hat(x),
            RepId::MuStar(h) => self.mu_star(h, x),
            RepId::UStar(_) => panic!("U_* takes Heisenberg coordinates"),
        }
    }

    /// Checks `rep([X,Y]) = [rep(X), rep(Y)]` on all basis pairs of `g`.
    pub fn homomorphism_on_basis(&self, rep: &RepId) -> bool {
        let dim = self.tkk.lie.dim();
        let ops: Vec<DiffOperator> =
            (0..dim).map(|k| self.operator(rep, &coords_unit(dim, k))).collect();
        for a in 0..dim {
            for b in 0..dim {
                let br = self.tkk.lie.bracket(&coords_unit(dim, a), &coords_unit(dim, b));
                let lhs = self.operator(rep, &br);
                let rhs = ops[a].bracket(&ops[b]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the homomorphism property on random homogeneous pairs.
    pub fn homomorphism_random(
        &self,
        rep: &RepId,
        rng: &mut crate::rng::SplitMix64,
        samples: usize,
    ) -> bool {
        for _ in 0..samples {
            let pa = rng.below(2) as u8;
            let pb = rng.below(2) as u8;
            let x = self.tkk.lie.random_homogeneous(rng, pa);
            let y = self.tkk.lie.random_homogeneous(rng, pb);
            let lhs = self.operator(rep, &self.tkk.lie.bracket(&x, &y));
            let rhs = self.operator(rep, &x).bracket(&self.operator(rep, &y));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Checks the Heisenberg representation property of `U_*` exhaustively,
    /// including the central condition `U_*(Z) = i hbar`.
    pub fn u_star_heisenberg_axioms(&self, hbar: &Rat) -> bool {
        let h = HeisenbergAlg { omega: self.tkk.lie.omega };
        let dim = h.dim();
        let ops: Vec<DiffOperator> =
            (0..dim).map(|k| self.u_star(hbar, &coords_unit(dim, k))).collect();
        let central = DiffOperator::identity(&self.std).scale(&Scalar::i().mul_rat(hbar));
        if ops[dim - 1] != central {
            return false;
        }
        for a in 0..dim {
            for b in 0..dim {
                let br = h.bracket(&coords_unit(dim, a), &coords_unit(dim, b));
                let lhs = self.u_star(hbar, &br);
                let rhs = ops[a].bracket(&ops[b]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Moves an operator built on the `x` bank to act on another vector
    /// bank of the same space.
    pub fn move_operator_to_bank(&self, op: &DiffOperator, bank: &Bank) -> DiffOperator {
        let space = &self.std;
        let mut out = DiffOperator::zero(space);
        for (word, mult) in &op.terms {
            let mut new_word = Monomial::unit(space.var_count());
            for (v, &e) in word.0.iter().enumerate() {
                if e > 0 {
                    new_word.0[bank.start + (v - self.x.start)] = e;
                }
            }
            let new_mult = mult.rename_bank(&self.x, bank);
            out = out.add(&DiffOperator {
                space: space.clone(),
                terms: [(new_word, new_mult)].into_iter().collect(),
            });
        }
        out
    }

    /// `pi~` obtained by conjugating `pi_lambda` (lambda = -1/2) with the
    /// folding map, on a single even monomial.
    pub fn pi_tilde_by_conjugation(&self, x: &Coords, p_even: &SuperPoly) -> SuperPoly {
        let lambda = Rat::new(BigInt::from(-1), BigInt::from(2));
        let lifted = crate::bessel::unfold_psi(&self.mvs, p_even, &self.std, &self.x);
        let image = self.pi_lambda(&lambda, x).apply(&lifted);
        crate::bessel::fold_psi(&self.mvs, &image, &self.std, &self.x)
    }
}

/// Bases of spherical harmonics `H_k = ker Delta ∩ P_k` on a bank.
pub fn harmonic_basis(space: &Space, bank: &Bank, k: u64) -> Vec<SuperPoly> {
    kernel_basis(space, bank, k, &laplacian(space, bank))
}

/// Generalised harmonics `ker(Delta R^2 Delta) ∩ P_k`.
pub fn generalised_harmonic_basis(space: &Space, bank: &Bank, k: u64) -> Vec<SuperPoly> {
    let lap = laplacian(space, bank);
    let r2 = DiffOperator::from_multiplier(r_squared(space, bank));
    let op = lap.compose(&r2).compose(&lap);
    kernel_basis(space, bank, k, &op)
}

fn kernel_basis(space: &Space, bank: &Bank, k: u64, op: &DiffOperator) -> Vec<SuperPoly> {
    let monos = monomials_of_degree(space, bank, k);
    if monos.is_empty() {
        return Vec::new();
    }
    // image degrees can vary; collect all monomials appearing in images
    let mut rows_index: std::collections::BTreeMap<Monomial, usize> =
        std::collections::BTreeMap::new();
    let images: Vec<SuperPoly> = monos
        .iter()
        .map(|mo| {
            let p = SuperPoly::from_terms(space, [(mo.clone(), Scalar::one())]);
            let im = op.apply(&p);
            for key in im.terms.keys() {
                let next = rows_index.len();
                rows_index.entry(key.clone()).or_insert(next);
            }
            im
        })
        .collect();
    let nrows = rows_index.len().max(1);
    let mut mat = linalg::zeros(nrows, monos.len());
    for (col, im) in images.iter().enumerate() {
        for (key, c) in &im.terms {
            mat[rows_index[key]][col] = c.clone();
        }
    }
    linalg::nullspace(&mat, monos.len())
        .into_iter()
        .map(|v| {
            let mut p = SuperPoly::zero(space);
            for (idx, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    p.add_term(monos[idx].clone(), c.clone());
                }
            }
            p
        })
        .collect()
}

/// Index sets of the degenerate Fischer decomposition.
pub fn degenerate_index_sets(big_m: i64, k: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>) {
    let in_i_m = |l: i64| -> bool {
        if big_m > 0 || big_m % 2 != 0 {
            return false;
        }
        // 2 - M/2 <= l <= 2 - M
        l >= 2 - big_m / 2 && l <= 2 - big_m
    };
    let n_k: Vec<u64> = (0..=(k / 2)).map(|j| k - 2 * j).collect();
    let j_tilde: Vec<u64> = n_k.iter().copied().filter(|&l| in_i_m(l as i64)).collect();
    let j_zero: Vec<u64> = j_tilde
        .iter()
        .map(|&l| (2 - big_m - l as i64) as u64)
        .collect();
    let j_plain: Vec<u64> = n_k
        .iter()
        .copied()
        .filter(|l| !j_tilde.contains(l) && !j_zero.contains(l))
        .collect();
    (n_k, j_tilde, j_zero, j_plain)
}

/// A Fischer-decomposition certificate for the degree-`k` slice.
pub struct FischerCertificate {
    pub k: u64,
    pub degenerate: bool,
    pub dim_pk: usize,
    /// `(l, generalised?, dim)` for each summand `R^{k-l} H_l`
    pub summands: Vec<(u64, bool, usize)>,
    pub direct_sum_ok: bool,
}

/// Decomposes `P_k` into `R^{k-l}` times (generalised) harmonics and
/// certifies directness by an exact rank computation.
pub fn fischer_decompose(space: &Space, bank: &Bank, k: u64) -> FischerCertificate {
    let big_m = space.beta().superdim();
    let degenerate = big_m <= 0 && big_m % 2 == 0;
    let monos = monomials_of_degree(space, bank, k);
    let idx = basis_index(&monos);
    let r2 = r_squared(space, bank);
    let mut summands = Vec::new();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    let mut push_block = |l: u64, generalised: bool, cols: &mut Vec<Vec<Scalar>>| {
        let basis = if generalised {
            generalised_harmonic_basis(space, bank, l)
        } else {
            harmonic_basis(space, bank, l)
        };
        let power = (k - l) / 2;
        for h in &basis {
            let mut p = h.clone();
            for _ in 0..power {
                p = p.mul(&r2);
            }
            cols.push(coeff_vector(&p, &idx));
        }
        summands.push((l, generalised, basis.len()));
    };
    if !degenerate {
        let mut l = k as i64;
        while l >= 0 {
            push_block(l as u64, false, &mut cols);
            l -= 2;
        }
    } else {
        let (_, j_tilde, _, j_plain) = degenerate_index_sets(big_m, k);
        for &l in &j_tilde {
            push_block(l, true, &mut cols);
        }
        for &l in &j_plain {
            push_block(l, false, &mut cols);
        }
    }
    let total: usize = summands.iter().map(|&(_, _, d)| d).sum();
    let rank = if cols.is_empty() {
        0
    } else {
        let mut mat = linalg::zeros(idx.len(), cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                mat[i][j] = v.clone();
            }
        }
        linalg::rank(&mat)
    };
    FischerCertificate {
        k,
        degenerate,
        dim_pk: monos.len(),
        summands,
        direct_sum_ok: total == monos.len() && rank == monos.len(),
    }
}

/// Ladder data for the lowest-weight sl(2) structure on `R^{2k} phi_l`.
pub struct LadderReport {
    pub l: u64,
    pub harmonic_dim: usize,
    pub all_hold: bool,
    /// `(k, coefficient of the lowering map)` pairs, flagging exact zeros
    pub lowering_coeffs: Vec<(u64, Rat)>,
    pub lowest_weight_doubled: i64,
}

/// Verifies the raising/lowering/grading formulas on `R^{2k} phi_l`:
/// `rho+ = i R^2`, `rho- = i Delta` with
/// `Delta(R^{2k} phi_l) = 2k (M + 2k - 2 + 2l) R^{2k-2} phi_l`,
/// `rho~(h) = -(M/2 + E)` acting by `-(M/2 + 2k + l)`, and
/// `rho~(f+) = -(i/4) Delta` acting by `-i k (M/2 + k - 1 + l)`.
pub fn ladder_check(reps: &Reps, l: u64, k_max: u64) -> LadderReport {
    let space = &reps.std;
    let bank = &reps.x;
    let big_m = reps.big_m();
    let lap = laplacian(space, bank);
    let r2 = r_squared(space, bank);
    let e_minus_g = reps.tkk.phi_apply(&reps.tkk.unit_minus());
    let e_plus_g = reps.tkk.phi_apply(&reps.tkk.unit_plus());
    let two_l_e_g = reps.tkk.phi_apply(&reps.tkk.two_l_unit());
    let neg = |v: &Coords| -> Coords { v.iter().map(|c| c.neg()).collect() };
    // rho+ = pi~(-e^-) = i R^2 and rho- = pi~(-4 e^+) = i Delta
    let rho_plus = reps.pi_tilde(&neg(&e_minus_g));
    let rho_minus =
        reps.pi_tilde(&e_plus_g.iter().map(|c| c.mul_int(-4)).collect::<Coords>());
    let mut all_hold = rho_plus
        == DiffOperator::from_multiplier(r2.clone()).scale(&Scalar::i())
        && rho_minus == lap.scale(&Scalar::i());
    // f-, h, f+ through the inverse Cayley transform
    let f_minus = linalg::mat_vec(&reps.cayley_inv, &e_minus_g);
    let f_plus = linalg::mat_vec(&reps.cayley_inv, &e_plus_g);
    let h_elt = linalg::mat_vec(&reps.cayley_inv, &two_l_e_g);
    let rho_f_minus = reps.rho_tilde(&f_minus);
    let rho_f_plus = reps.rho_tilde(&f_plus);
    let rho_h = reps.rho_tilde(&h_elt);
    all_hold &= rho_f_minus
        == DiffOperator::from_multiplier(r2.clone()).scale(&Scalar::i().neg());
    all_hold &= rho_f_plus == lap.scale(&Scalar::i().mul(&Scalar::from_ratio(-1, 4)));
    let expected_h = euler(space, bank)
        .add(&DiffOperator::identity(space).scale(&Scalar::from_ratio(big_m, 2)))
        .scale(&Scalar::from_int(-1));
    all_hold &= rho_h == expected_h;

    let harmonics = harmonic_basis(space, bank, l);
    let mut lowering_coeffs = Vec::new();
    for k in 0..=k_max {
        let coeff = Rat::from_integer(BigInt::from(2 * k as i64))
            * Rat::from_integer(BigInt::from(big_m + 2 * k as i64 - 2 + 2 * l as i64));
        lowering_coeffs.push((k, coeff.clone()));
        for phi in &harmonics {
            let mut p = phi.clone();
            for _ in 0..k {
                p = p.mul(&r2);
            }
            // raising
            let raised = rho_plus.apply(&p);
            let expected = p.mul(&r2).scale(&Scalar::i());
            all_hold &= raised == expected;
            // lowering: Delta(R^{2k} phi) = 2k(M+2k-2+2l) R^{2k-2} phi
            let lowered = lap.apply(&p);
            let expected = if k == 0 {
                SuperPoly::zero(space)
            } else {
                let mut q = phi.clone();
                for _ in 0..(k - 1) {
                    q = q.mul(&r2);
                }
                q.scale_rat(&coeff)
            };
            all_hold &= lowered == expected;
            // grading: rho~(h)(phi R^{2k}) = -(M/2 + 2k + l) phi R^{2k}
            let graded = rho_h.apply(&p);
            let ev = Rat::new(BigInt::from(big_m), BigInt::from(2))
                + Rat::from_integer(BigInt::from(2 * k as i64 + l as i64));
            all_hold &= graded == p.scale_rat(&-ev);
            // rho~(f+): -(i/4) Delta acts by -i k (M/2 + k - 1 + l)
            let fp = rho_f_plus.apply(&p);
            let expected = if k == 0 {
                SuperPoly::zero(space)
            } else {
                let mut q = phi.clone();
                for _ in 0..(k - 1) {
                    q = q.mul(&r2);
                }
                let c = Rat::from_integer(BigInt::from(k as i64))
                    * (Rat::new(BigInt::from(big_m), BigInt::from(2))
                        + Rat::from_integer(BigInt::from(k as i64 - 1 + l as i64)));
                q.scale(&Scalar::i().neg().mul_rat(&c))
            };
            all_hold &= fp == expected;
        }
    }
    LadderReport {
        l,
        harmonic_dim: harmonics.len(),
        all_hold,
        lowering_coeffs,
        lowest_weight_doubled: big_m + 2 * l as i64,
    }
}

/// `dim P_{2j}(C^{m|2n})` by the binomial formula.
pub fn dim_p2j_formula(m: usize, n: usize, j: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let top = (2 * j).min(2 * n as u64);
    for i in 0..=top {
        acc += binomial(2 * n as i64, i as i64)
            * binomial(2 * j as i64 - i as i64 + m as i64 - 1, m as i64 - 1);
    }
    acc
}

/// `dim P_k` by direct monomial enumeration.
pub fn dim_pk_enumeration(space: &Space, bank: &Bank, k: u64) -> usize {
    monomials_of_degree(space, bank, k).len()
}

pub struct GkReport {
    /// partial sums `dim U_k(g) 1 = sum_{j<=k} dim P_{2j}`
    pub partial_sums: Vec<BigInt>,
    pub methods_agree: bool,
    pub leading_exponent: Option<usize>,
}

/// Growth of `U_k(g) . 1`: the two counting methods and the exact
/// finite-difference leading exponent of the tail.
pub fn gk_growth(m: usize, n: usize, k_max: u64) -> GkReport {
    assert!(k_max >= 2 * n as u64 + 2, "k_max too small for the tail");
    let space = vector_space(m, n, &["x"]);
    let bank = space.banks[0].clone();
    let mut methods_agree = true;
    let mut partial = Vec::new();
    let mut acc = BigInt::zero();
    for j in 0..=k_max {
        let by_formula = dim_p2j_formula(m, n, j);
        let by_enum = BigInt::from(dim_pk_enumeration(&space, &bank, 2 * j));
        if by_formula != by_enum {
            methods_agree = false;
        }
        acc += by_formula;
        partial.push(acc.clone());
    }
    // finite differences on the polynomial tail j >= n
    let tail: Vec<BigInt> = partial[(n as usize)..].to_vec();
    let mut leading_exponent = None;
    let mut current = tail;
    for d in 0..=(m + 2) {
        if current.len() < 2 {
            break;
        }
        let constant = current.windows(2).all(|w| w[0] == w[1]);
        if constant && !current[0].is_zero() {
            leading_exponent = Some(d);
            break;
        }
        if current.iter().all(Zero::is_zero) {
            break;
        }
        current = current.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    GkReport { partial_sums: partial, methods_agree, leading_exponent }
}

pub struct KmcsReport {
    pub delta_formula_ok: bool,
    pub three_term_ok: bool,
    pub l_operator_ok: bool,
    pub even_closure_dim: usize,
    pub odd_closure_dim: Option<usize>,
    pub closure_contained: bool,
}

/// Explicit-action checks for the maximal compact subalgebra and the
/// saturation closure of the two Schrödinger generators.
pub fn kmcs_finiteness_check(reps: &Reps) -> KmcsReport {
    let (m, n) = (reps.m(), reps.n());
    let space = &reps.std;
    let bank = &reps.x;
    let lie = &reps.tkk.lie;
    let gauss = GaussianFunction::new(SuperPoly::one(space), bank, Rat::one());

    // pi~(2 U_{ul i, ul j} + 2 U^{ul i, ul j}) exp(-R^2) = 2 i delta_ij exp(-R^2)
    let mut delta_formula_ok = true;
    let mut three_term_ok = true;
    for i in 0..m {
        for j in 0..m {
            let (ui, uj) = (underline(m, n, i), underline(m, n, j));
            let mut x = lie.u_coords(ui, uj, 2);
            crate::algebra::add_coords(
                &mut x,
                &lie.u_raised_coords(ui, uj),
                &Scalar::from_int(2),
            );
            let op = reps.pi_tilde(&x);
            let image = gauss.apply_op(&op);
            let expected =
                gauss.scale(&Scalar::i().mul_int(2 * i64::from(i == j)));
            delta_formula_ok &= image == expected;
            for k in 0..m {
                let seed = gauss.mul_poly(&SuperPoly::var(space, bank.start + k));
                let image = seed.apply_op(&op);
                let mut poly = SuperPoly::zero(space);
                if i == j {
                    poly = poly.add(&SuperPoly::var(space, bank.start + k));
                }
                if i == k {
                    poly = poly.add(&SuperPoly::var(space, bank.start + j));
                }
                if j == k {
                    poly = poly.add(&SuperPoly::var(space, bank.start + i));
                }
                let expected = gauss.mul_poly(&poly).scale(&Scalar::i().mul_int(2));
                three_term_ok &= image == expected;
            }
        }
    }

    // pi~(U_{ti i, ul j} + U^{ti i, ul j}) = L_ij for |i| = |j| = 0
    let mut l_operator_ok = true;
    for i in 0..m {
        for j in 0..m {
            let (ti, uj) = (tilde(m, i), underline(m, n, j));
            let mut x = lie.u_coords(ti, uj, 1);
            crate::algebra::add_coords(
                &mut x,
                &lie.u_raised_coords(ti, uj),
                &Scalar::one(),
            );
            let op = reps.pi_tilde(&x);
            l_operator_ok &= op == l_operator(space, bank, i, j);
            // L_ij kills exp(-R^2)
            l_operator_ok &= gauss.apply_op(&op).is_zero();
        }
    }

    // saturation closure inside Lambda(K^{2n}) * {1, P_1(K^m)} * exp(-R^2)
    let d = lie.omega.dim();
    let mut kmcs_ops = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if lie.omega.parity(a) != lie.omega.parity(b) {
                continue;
            }
            let mut x = lie.u_coords(a, b, 1);
            crate::algebra::add_coords(&mut x, &lie.u_raised_coords(a, b), &Scalar::one());
            if !crate::algebra::coords_is_zero(&x) {
                kmcs_ops.push(reps.pi_tilde(&x));
            }
        }
    }
    // allowed monomials: odd part arbitrary, even part of degree <= 1
    let mut allowed = Vec::new();
    for total in 0..=(2 * n as u64 + 1) {
        for mo in monomials_of_degree(space, bank, total) {
            let even_deg: u64 =
                (0..m).map(|i| mo.0[bank.start + i] as u64).sum();
            if even_deg <= 1 {
                allowed.push(mo);
            }
        }
    }
    let allowed_idx = basis_index(&allowed);
    let saturate = |seed: SuperPoly| -> Option<usize> {
        let mut basis_vecs: Vec<Vec<Scalar>> = Vec::new();
        let mut frontier = vec![seed];
        let mut contained = true;
        while let Some(p) = frontier.pop() {
            if p.is_zero() {
                continue;
            }
            if p.terms.keys().any(|mo| !allowed_idx.contains_key(mo)) {
                contained = false;
                break;
            }
            let v = coeff_vector(&p, &allowed_idx);
            let mut with = basis_vecs.clone();
            with.push(v.clone());
            let mut mat = linalg::zeros(allowed_idx.len(), with.len());
            for (j, col) in with.iter().enumerate() {
                for (i2, val) in col.iter().enumerate() {
                    mat[i2][j] = val.clone();
                }
            }
            if linalg::rank(&mat) > basis_vecs.len() {
                basis_vecs.push(v);
                let g = GaussianFunction::new(p, bank, Rat::one());
                for op in &kmcs_ops {
                    let image = g.apply_op(op);
                    assert_eq!(image.weight, Rat::one());
                    frontier.push(image.poly);
                }
            }
        }
        if contained {
            Some(basis_vecs.len())
        } else {
            None
        }
    };
    let even_closure = saturate(SuperPoly::one(space));
    let odd_closure = saturate(SuperPoly::var(space, bank.start));
    let closure_contained = even_closure.is_some() && odd_closure.is_some();
    KmcsReport {
        delta_formula_ok,
        three_term_ok,
        l_operator_ok,
        even_closure_dim: even_closure.unwrap_or(usize::MAX),
        odd_closure_dim: odd_closure,
        closure_contained,
    }
}
