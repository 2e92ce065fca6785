//! Structure-constant realisations of the Jordan superalgebra
//! `JOSP(m|2n, beta)`, the Lie superalgebra `spo(2m|4n, Omega)`, the general
//! linear and Heisenberg superalgebras, the TKK isomorphism `phi`, and the
//! Cayley transform.
//!
//! Structure constants are derived from explicit supermatrix realisations
//! (the `E_ij` basis), so the printed bracket and product formulas can be
//! checked against an independent matrix oracle.

use crate::linalg::{self, Matrix};
use crate::metric::{tilde, underline, BetaForm, OmegaForm};
use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("the pair (m,n) = (0,1) is excluded")]
    ExcludedRank,
    #[error("algebra tag mismatch")]
    TagMismatch,
}

/// A supermatrix on a space whose first `dim_even` coordinates are even.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperMatrix {
    pub dim_even: usize,
    pub dim: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl SuperMatrix {
    pub fn zero(dim_even: usize, dim: usize) -> Self {
        SuperMatrix { dim_even, dim, entries: linalg::zeros(dim, dim) }
    }
    pub fn unit(dim_even: usize, dim: usize, i: usize, j: usize) -> Self {
        let mut m = SuperMatrix::zero(dim_even, dim);
        m.entries[i][j] = Scalar::one();
        m
    }
    pub fn index_parity(&self, i: usize) -> u8 {
        u8::from(i >= self.dim_even)
    }
    /// Parity of the matrix as a homogeneous element, if it is one.
    pub fn parity(&self) -> Option<u8> {
        let mut parity = None;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.entries[i][j].is_zero() {
                    continue;
                }
                let p = self.index_parity(i) ^ self.index_parity(j);
                match parity {
                    None => parity = Some(p),
                    Some(q) if q == p => {}
                    _ => return None,
                }
            }
        }
        Some(parity.unwrap_or(0))
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i][j] = out.entries[i][j].add(&o.entries[i][j]);
            }
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }
    pub fn scale(&self, c: &Scalar) -> Self {
        SuperMatrix {
            dim_even: self.dim_even,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.mul(c)).collect())
                .collect(),
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        SuperMatrix {
            dim_even: self.dim_even,
            dim: self.dim,
            entries: linalg::mat_mul(&self.entries, &o.entries),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(Scalar::is_zero))
    }
    /// `[x,y] = xy - (-1)^{|x||y|} yx` for homogeneous matrices.
    pub fn supercommutator(&self, o: &Self) -> Self {
        let px = self.parity().expect("homogeneous matrix required");
        let py = o.parity().expect("homogeneous matrix required");
        let xy = self.mul(o);
        let yx = o.mul(self);
        if px & py == 1 {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }
    /// Jordan product `x . y = (xy + (-1)^{|x||y|} yx)/2`.
    pub fn jordan(&self, o: &Self) -> Self {
        let px = self.parity().expect("homogeneous matrix required");
        let py = o.parity().expect("homogeneous matrix required");
        let xy = self.mul(o);
        let yx = o.mul(self);
        let sum = if px & py == 1 { xy.sub(&yx) } else { xy.add(&yx) };
        sum.scale(&Scalar::from_ratio(1, 2))
    }
}

/// Canonical basis of symmetric index pairs: `(i,j)` with `i <= j`, skipping
/// odd diagonals. Used for both the `ell_ij` and `U_ij` bases.
#[derive(Clone, Debug)]
pub struct PairBasis {
    pub pairs: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
    parities: Vec<u8>,
}

impl PairBasis {
    fn new(dim: usize, parity: impl Fn(usize) -> u8) -> Self {
        let mut pairs = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                if i == j && parity(i) == 1 {
                    continue;
                }
                pairs.push((i, j));
            }
        }
        let index = pairs.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        let parities = pairs.iter().map(|&(i, j)| parity(i) ^ parity(j)).collect();
        PairBasis { pairs, index, parities }
    }
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn parity(&self, k: usize) -> u8 {
        self.parities[k]
    }
    /// Resolves an arbitrary `(i,j)` against the symmetry
    /// `X_ij = (-1)^{|i||j|} X_ji`; `None` for vanishing odd diagonals.
    pub fn resolve(
        &self,
        i: usize,
        j: usize,
        parity: impl Fn(usize) -> u8,
    ) -> Option<(usize, i64)> {
        if i <= j {
            self.index.get(&(i, j)).map(|&k| (k, 1))
        } else {
            self.index
                .get(&(j, i))
                .map(|&k| (k, if parity(i) & parity(j) == 1 { -1 } else { 1 }))
        }
    }
}

pub type Coords = Vec<Scalar>;

pub fn add_coords(a: &mut Coords, b: &Coords, c: &Scalar) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.add(&y.mul(c));
    }
}

pub fn coords_zero(dim: usize) -> Coords {
    vec![Scalar::zero(); dim]
}

pub fn coords_unit(dim: usize, k: usize) -> Coords {
    let mut v = coords_zero(dim);
    v[k] = Scalar::one();
    v
}

pub fn coords_is_zero(v: &Coords) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn coords_sub(a: &Coords, b: &Coords) -> Coords {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// The Jordan superalgebra `JOSP(m|2n, beta)` in the `ell_ij` basis.
#[derive(Clone)]
pub struct JordanAlg {
    pub m: usize,
    pub n: usize,
    pub beta: BetaForm,
    pub basis: PairBasis,
    prod: Vec<Vec<Coords>>,
    l_mats: Vec<Matrix>,
}

impl JordanAlg {
    pub fn new(m: usize, n: usize) -> Result<Self, AlgebraError> {
        if (m, n) == (0, 1) {
            return Err(AlgebraError::ExcludedRank);
        }
        let beta = BetaForm::new(m, n);
        let basis = PairBasis::new(beta.dim(), |i| beta.parity(i));
        let dim = basis.len();
        // structure constants via the matrix realisation in End(K^{m|2n})
        let mats: Vec<SuperMatrix> =
            basis.pairs.iter().map(|&(i, j)| ell_matrix(&beta, i, j)).collect();
        let d = beta.dim();
        let cols: Vec<Vec<Scalar>> = mats.iter().map(|mt| flatten(&mt.entries, d)).collect();
        let mut prod = vec![vec![coords_zero(dim); dim]; dim];
        for p in 0..dim {
            for q in 0..dim {
                let product = mats[p].jordan(&mats[q]);
                prod[p][q] = linalg::in_span(&cols, &flatten(&product.entries, d))
                    .expect("Jordan product stays in JOSP");
            }
        }
        let mut alg = JordanAlg { m, n, beta, basis, prod, l_mats: Vec::new() };
        alg.l_mats = (0..dim).map(|p| alg.l_matrix_of_basis(p)).collect();
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn parity(&self, k: usize) -> u8 {
        self.basis.parity(k)
    }
    pub fn resolve(&self, i: usize, j: usize) -> Option<(usize, i64)> {
        self.basis.resolve(i, j, |k| self.beta.parity(k))
    }
    pub fn product_table(&self, p: usize, q: usize) -> &Coords {
        &self.prod[p][q]
    }
    pub fn l_basis_matrix(&self, p: usize) -> &Matrix {
        &self.l_mats[p]
    }

    pub fn product(&self, x: &Coords, y: &Coords) -> Coords {
        let mut out = coords_zero(self.dim());
        for (p, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (q, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                add_coords(&mut out, &self.prod[p][q], &cx.mul(cy));
            }
        }
        out
    }

    /// The unit `e = (1/2) sum_{ij} ell_ij beta^{ij}`.
    pub fn unit(&self) -> Coords {
        let d = self.beta.dim();
        let mut out = coords_zero(self.dim());
        for i in 0..d {
            for j in 0..d {
                let c = self.beta.beta_inv(i, j);
                if c == 0 {
                    continue;
                }
                if let Some((k, s)) = self.resolve(i, j) {
                    out[k] = out[k].add(&Scalar::from_ratio(c * s, 2));
                }
            }
        }
        out
    }

    /// The trace element `tr(ell) = sum_{ij} 2^{-|i||j|} ell_ij beta^{ij}`.
    pub fn trace_element(&self) -> Coords {
        let d = self.beta.dim();
        let mut out = coords_zero(self.dim());
        for i in 0..d {
            for j in 0..d {
                let c = self.beta.beta_inv(i, j);
                if c == 0 {
                    continue;
                }
                let denom = if self.beta.parity(i) & self.beta.parity(j) == 1 { 2 } else { 1 };
                if let Some((k, s)) = self.resolve(i, j) {
                    out[k] = out[k].add(&Scalar::from_ratio(c * s, denom));
                }
            }
        }
        out
    }

    fn l_matrix_of_basis(&self, p: usize) -> Matrix {
        let dim = self.dim();
        let mut mt = linalg::zeros(dim, dim);
        for q in 0..dim {
            let col = &self.prod[p][q];
            for r in 0..dim {
                mt[r][q] = col[r].clone();
            }
        }
        mt
    }

    /// Left-multiplication operator `L_x` as a matrix on `J`.
    pub fn l_matrix(&self, x: &Coords) -> Matrix {
        let dim = self.dim();
        let mut mt = linalg::zeros(dim, dim);
        for (p, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..dim {
                for q in 0..dim {
                    if !self.l_mats[p][r][q].is_zero() {
                        mt[r][q] = mt[r][q].add(&self.l_mats[p][r][q].mul(c));
                    }
                }
            }
        }
        mt
    }

    pub fn random_homogeneous(&self, rng: &mut SplitMix64, parity: u8) -> Coords {
        let mut v = coords_zero(self.dim());
        for k in 0..self.dim() {
            if self.parity(k) == parity {
                v[k] = Scalar::from_int(rng.int_in(-3, 3));
            }
        }
        v
    }

    pub fn coords_parity(&self, x: &Coords) -> Option<u8> {
        let mut parity = None;
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match parity {
                None => parity = Some(self.parity(k)),
                Some(p) if p == self.parity(k) => {}
                _ => return None,
            }
        }
        Some(parity.unwrap_or(0))
    }

    /// Checks the Jordan identity on a homogeneous triple via `L`-matrices:
    /// `(-1)^{|x||z|}[L_x, L_{yz}] + cyclic = 0`.
    pub fn jordan_identity_holds(&self, x: &Coords, y: &Coords, z: &Coords) -> bool {
        let (Some(px), Some(py), Some(pz)) =
            (self.coords_parity(x), self.coords_parity(y), self.coords_parity(z))
        else {
            return false;
        };
        let dim = self.dim();
        let term = |a: &Coords, pa: u8, b: &Coords, c: &Coords, pb: u8, pc: u8| -> Matrix {
            let la = self.l_matrix(a);
            let lbc = self.l_matrix(&self.product(b, c));
            let ab = linalg::mat_mul(&la, &lbc);
            let ba = linalg::mat_mul(&lbc, &la);
            let anti = pa & (pb ^ pc) == 1;
            let flip = pa & pc == 1;
            let mut out = linalg::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    let v = if anti { ab[i][j].add(&ba[i][j]) } else { ab[i][j].sub(&ba[i][j]) };
                    out[i][j] = if flip { v.neg() } else { v };
                }
            }
            out
        };
        let t1 = term(x, px, y, z, py, pz);
        let t2 = term(y, py, z, x, pz, px);
        let t3 = term(z, pz, x, y, px, py);
        for i in 0..dim {
            for j in 0..dim {
                if !t1[i][j].add(&t2[i][j]).add(&t3[i][j]).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// `ell_ij` as a supermatrix: `sum_k beta_jk E_ik + (-1)^{|i||j|} beta_ik E_jk`.
pub fn ell_matrix(beta: &BetaForm, i: usize, j: usize) -> SuperMatrix {
    let d = beta.dim();
    let mut mt = SuperMatrix::zero(beta.m, d);
    for k in 0..d {
        let c1 = beta.beta(j, k);
        if c1 != 0 {
            mt.entries[i][k] = mt.entries[i][k].add(&Scalar::from_int(c1));
        }
        let c2 = beta.beta(i, k);
        if c2 != 0 {
            let sign = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
            mt.entries[j][k] = mt.entries[j][k].add(&Scalar::from_int(sign * c2));
        }
    }
    mt
}

/// `U_ij` as a supermatrix over `Omega`.
pub fn u_matrix(omega: &OmegaForm, i: usize, j: usize) -> SuperMatrix {
    let d = omega.dim();
    let mut mt = SuperMatrix::zero(2 * omega.m, d);
    for k in 0..d {
        let c1 = omega.omega(j, k);
        if c1 != 0 {
            mt.entries[i][k] = mt.entries[i][k].add(&Scalar::from_int(c1));
        }
        let c2 = omega.omega(i, k);
        if c2 != 0 {
            let sign = if omega.parity(i) & omega.parity(j) == 1 { -1 } else { 1 };
            mt.entries[j][k] = mt.entries[j][k].add(&Scalar::from_int(sign * c2));
        }
    }
    mt
}

pub fn flatten(entries: &[Vec<Scalar>], d: usize) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(d * d);
    for row in entries {
        v.extend(row.iter().cloned());
    }
    v
}

/// The Lie superalgebra `spo(2m|4n, Omega)` in the `U_ij` basis.
pub struct LieG {
    pub m: usize,
    pub n: usize,
    pub omega: OmegaForm,
    pub basis: PairBasis,
    table: Vec<Vec<Coords>>,
    expand_cols: Vec<Vec<Scalar>>,
}

impl LieG {
    pub fn new(m: usize, n: usize) -> Result<Self, AlgebraError> {
        if (m, n) == (0, 1) {
            return Err(AlgebraError::ExcludedRank);
        }
        let omega = OmegaForm::new(m, n);
        let basis = PairBasis::new(omega.dim(), |i| omega.parity(i));
        let dim = basis.len();
        let d = omega.dim();
        let mats: Vec<SuperMatrix> =
            basis.pairs.iter().map(|&(i, j)| u_matrix(&omega, i, j)).collect();
        let expand_cols: Vec<Vec<Scalar>> = mats.iter().map(|mt| flatten(&mt.entries, d)).collect();
        let mut table = vec![vec![coords_zero(dim); dim]; dim];
        for p in 0..dim {
            for q in 0..dim {
                let br = mats[p].supercommutator(&mats[q]);
                let target = flatten(&br.entries, d);
                table[p][q] =
                    linalg::in_span(&expand_cols, &target).expect("bracket leaves spo span");
            }
        }
        Ok(LieG { m, n, omega, basis, table, expand_cols })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn parity(&self, k: usize) -> u8 {
        self.basis.parity(k)
    }
    pub fn resolve(&self, i: usize, j: usize) -> Option<(usize, i64)> {
        self.basis.resolve(i, j, |k| self.omega.parity(k))
    }
    /// Coordinates of `c * U_{ij}` for an arbitrary index order.
    pub fn u_coords(&self, i: usize, j: usize, c: i64) -> Coords {
        let mut v = coords_zero(self.dim());
        if let Some((k, s)) = self.resolve(i, j) {
            v[k] = Scalar::from_int(c * s);
        }
        v
    }

    pub fn bracket(&self, x: &Coords, y: &Coords) -> Coords {
        let mut out = coords_zero(self.dim());
        for (p, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (q, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                add_coords(&mut out, &self.table[p][q], &cx.mul(cy));
            }
        }
        out
    }

    /// Expresses an arbitrary supermatrix in `spo` in `U`-coordinates.
    pub fn coords_of_matrix(&self, mat: &SuperMatrix) -> Option<Coords> {
        linalg::in_span(&self.expand_cols, &flatten(&mat.entries, self.omega.dim()))
    }

    /// The displayed structure-constant formula for `[U_ij, U_kl]`.
    pub fn bracket_formula(&self, i: usize, j: usize, k: usize, l: usize) -> Coords {
        let om = &self.omega;
        let sgn = |a: usize, b: usize| -> i64 {
            if om.parity(a) & om.parity(b) == 1 {
                -1
            } else {
                1
            }
        };
        let mut out = coords_zero(self.dim());
        let mut add = |a: usize, b: usize, c: i64| {
            if c != 0 {
                if let Some((k2, s)) = self.resolve(a, b) {
                    out[k2] = out[k2].add(&Scalar::from_int(c * s));
                }
            }
        };
        add(i, l, om.omega(j, k));
        add(j, l, sgn(i, j) * om.omega(i, k));
        add(i, k, sgn(k, l) * om.omega(j, l));
        add(j, k, sgn(i, j) * sgn(k, l) * om.omega(i, l));
        out
    }

    /// Raised element `U^{ij} := sum_{kl} U_kl Omega^{ki} Omega^{lj}`.
    pub fn u_raised_coords(&self, i: usize, j: usize) -> Coords {
        let d = self.omega.dim();
        let mut out = coords_zero(self.dim());
        for k in 0..d {
            let a = self.omega.omega_inv(k, i);
            if a == 0 {
                continue;
            }
            for l in 0..d {
                let b = self.omega.omega_inv(l, j);
                if b == 0 {
                    continue;
                }
                if let Some((idx, s)) = self.resolve(k, l) {
                    out[idx] = out[idx].add(&Scalar::from_int(a * b * s));
                }
            }
        }
        out
    }

    pub fn random_homogeneous(&self, rng: &mut SplitMix64, parity: u8) -> Coords {
        let mut v = coords_zero(self.dim());
        for k in 0..self.dim() {
            if self.parity(k) == parity {
                v[k] = Scalar::from_int(rng.int_in(-3, 3));
            }
        }
        v
    }

    pub fn coords_parity(&self, x: &Coords) -> Option<u8> {
        let mut parity = None;
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match parity {
                None => parity = Some(self.parity(k)),
                Some(p) if p == self.parity(k) => {}
                _ => return None,
            }
        }
        Some(parity.unwrap_or(0))
    }

    /// Super Jacobi identity `[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]`.
    pub fn jacobi_holds(&self, a: &Coords, b: &Coords, c: &Coords) -> bool {
        let (Some(pa), Some(pb)) = (self.coords_parity(a), self.coords_parity(b)) else {
            return false;
        };
        let lhs = self.bracket(a, &self.bracket(b, c));
        let mut rhs = self.bracket(&self.bracket(a, b), c);
        let second = self.bracket(b, &self.bracket(a, c));
        let sign = if pa & pb == 1 { Scalar::from_int(-1) } else { Scalar::one() };
        add_coords(&mut rhs, &second, &sign);
        coords_is_zero(&coords_sub(&lhs, &rhs))
    }

    /// Skew-supersymmetry `[x,y] + (-1)^{|x||y|}[y,x] = 0`.
    pub fn skew_holds(&self, x: &Coords, y: &Coords) -> bool {
        let (Some(px), Some(py)) = (self.coords_parity(x), self.coords_parity(y)) else {
            return false;
        };
        let xy = self.bracket(x, y);
        let yx = self.bracket(y, x);
        let sign = if px & py == 1 { Scalar::one() } else { Scalar::from_int(-1) };
        let mut sum = xy;
        add_coords(&mut sum, &yx, &sign.neg());
        coords_is_zero(&sum)
    }
}

/// The quadratic algebra `L_2` on the same pair basis as `g`, with bracket
/// `[V_ij, V_kl] = 2 (Omega-formula)`.
pub struct QuadraticL2<'a> {
    pub lie: &'a LieG,
}

impl QuadraticL2<'_> {
    pub fn bracket(&self, x: &Coords, y: &Coords) -> Coords {
        let dim = self.lie.dim();
        let mut out = coords_zero(dim);
        for (p, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let (i, j) = self.lie.basis.pairs[p];
            for (q, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                let (k, l) = self.lie.basis.pairs[q];
                let f = self.lie.bracket_formula(i, j, k, l);
                add_coords(&mut out, &f, &cx.mul(cy).mul_int(2));
            }
        }
        out
    }
}

/// The Heisenberg Lie superalgebra `h(2m|4n, Omega)`; coordinates are
/// `(e_1, ..., e_{2m+4n}, Z)`.
pub struct HeisenbergAlg {
    pub omega: OmegaForm,
}

impl HeisenbergAlg {
    pub fn new(m: usize, n: usize) -> Result<Self, AlgebraError> {
        if (m, n) == (0, 1) {
            return Err(AlgebraError::ExcludedRank);
        }
        Ok(HeisenbergAlg { omega: OmegaForm::new(m, n) })
    }
    pub fn dim(&self) -> usize {
        self.omega.dim() + 1
    }
    pub fn parity(&self, k: usize) -> u8 {
        if k == self.omega.dim() {
            0
        } else {
            self.omega.parity(k)
        }
    }
    pub fn bracket(&self, x: &Coords, y: &Coords) -> Coords {
        let d = self.omega.dim();
        let mut z = Scalar::zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                let c = self.omega.omega(i, j);
                if c != 0 {
                    z = z.add(&x[i].mul(&y[j]).mul_int(c));
                }
            }
        }
        let mut out = coords_zero(d + 1);
        out[d] = z;
        out
    }
}

/// The TKK algebra of `JOSP(m|2n)` with the explicit isomorphism `phi` onto
/// `spo(2m|4n, Omega)`. The TKK coordinate layout is `J^-` pairs, then the
/// `L` part, then the chosen inner-derivation basis, then `J^+` pairs.
pub struct Tkk {
    pub jordan: JordanAlg,
    pub lie: LieG,
    /// Index pairs `(p,q)` of the chosen independent `[L_p, L_q]` set.
    pub inn_basis: Vec<(usize, usize)>,
    inn_mats: Vec<Matrix>,
    /// Columns for decomposing an istr matrix into (L coords | Inn coords).
    split_cols: Vec<Vec<Scalar>>,
    /// `phi` as a matrix: TKK coords -> `g` coords.
    pub phi: Matrix,
    pub phi_inv: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TkkElement {
    /// coords over the `J^-` basis
    pub minus: Coords,
    /// `L`-part coordinates (a `J` element)
    pub l_part: Coords,
    /// inner-derivation coordinates over the chosen basis
    pub inn: Coords,
    /// coords over the `J^+` basis
    pub plus: Coords,
}

impl TkkElement {
    pub fn zero(tkk: &Tkk) -> Self {
        TkkElement {
            minus: coords_zero(tkk.jordan.dim()),
            l_part: coords_zero(tkk.jordan.dim()),
            inn: coords_zero(tkk.inn_basis.len()),
            plus: coords_zero(tkk.jordan.dim()),
        }
    }
    pub fn is_zero(&self) -> bool {
        coords_is_zero(&self.minus)
            && coords_is_zero(&self.l_part)
            && coords_is_zero(&self.inn)
            && coords_is_zero(&self.plus)
    }
    pub fn sub(&self, o: &Self) -> Self {
        TkkElement {
            minus: coords_sub(&self.minus, &o.minus),
            l_part: coords_sub(&self.l_part, &o.l_part),
            inn: coords_sub(&self.inn, &o.inn),
            plus: coords_sub(&self.plus, &o.plus),
        }
    }
    pub fn to_vec(&self) -> Coords {
        let mut v = self.minus.clone();
        v.extend(self.l_part.iter().cloned());
        v.extend(self.inn.iter().cloned());
        v.extend(self.plus.iter().cloned());
        v
    }
    pub fn from_vec(tkk: &Tkk, v: &[Scalar]) -> Self {
        let dj = tkk.jordan.dim();
        let di = tkk.inn_basis.len();
        TkkElement {
            minus: v[0..dj].to_vec(),
            l_part: v[dj..2 * dj].to_vec(),
            inn: v[2 * dj..2 * dj + di].to_vec(),
            plus: v[2 * dj + di..2 * dj + di + dj].to_vec(),
        }
    }
}

impl Tkk {
    pub fn new(m: usize, n: usize) -> Result<Self, AlgebraError> {
        let jordan = JordanAlg::new(m, n)?;
        let lie = LieG::new(m, n)?;
        let dj = jordan.dim();

        // choose an independent basis of Inn(J) greedily from [L_p, L_q]
        let l_cols: Vec<Vec<Scalar>> =
            (0..dj).map(|p| flatten(&jordan.l_mats[p], dj)).collect();
        let mut inn_basis: Vec<(usize, usize)> = Vec::new();
        let mut inn_mats: Vec<Matrix> = Vec::new();
        let mut flat_cols: Vec<Vec<Scalar>> = Vec::new();
        let mut current = l_cols.clone();
        let mut current_rank = linalg::rank(&transpose_cols(&current, dj * dj));
        for p in 0..dj {
            for q in 0..dj {
                let cand = comm_matrix(&jordan, p, q);
                let flat = flatten(&cand, dj);
                let mut with = current.clone();
                with.push(flat.clone());
                let r = linalg::rank(&transpose_cols(&with, dj * dj));
                if r > current_rank {
                    current_rank = r;
                    current = with;
                    inn_basis.push((p, q));
                    inn_mats.push(cand);
                    flat_cols.push(flat);
                }
            }
        }
        let split_cols: Vec<Vec<Scalar>> =
            l_cols.iter().cloned().chain(flat_cols.iter().cloned()).collect();

        // assemble phi on the TKK basis
        let dim_g = lie.dim();
        let tkk_dim = 3 * dj + inn_basis.len();
        let mut phi = linalg::zeros(dim_g, tkk_dim);
        let beta = jordan.beta;
        let (bm, bn) = (jordan.m, jordan.n);
        let put = |phi: &mut Matrix, col: usize, coords: &Coords| {
            for (r, c) in coords.iter().enumerate() {
                phi[r][col] = c.clone();
            }
        };
        for (k, &(i, j)) in jordan.basis.pairs.iter().enumerate() {
            // phi(ell_ij^-) = -U_{ul(i), ul(j)}
            let coords = lie.u_coords(underline(bm, bn, i), underline(bm, bn, j), -1);
            put(&mut phi, k, &coords);
            // phi(L_{ell_ij}) = (U_{ti(i), ul(j)} + (-1)^{|i||j|} U_{ti(j), ul(i)}) / 2
            let s = if beta.parity(i) & beta.parity(j) == 1 { -1 } else { 1 };
            let mut lcol = lie.u_coords(tilde(bm, i), underline(bm, bn, j), 1);
            let second = lie.u_coords(tilde(bm, j), underline(bm, bn, i), s);
            add_coords(&mut lcol, &second, &Scalar::one());
            let lcol: Coords = lcol.iter().map(|c| c.mul(&Scalar::from_ratio(1, 2))).collect();
            put(&mut phi, dj + k, &lcol);
            // phi(ell_ij^+) = U_{ti(i), ti(j)}
            let coords = lie.u_coords(tilde(bm, i), tilde(bm, j), 1);
            put(&mut phi, 2 * dj + inn_basis.len() + k, &coords);
        }
        for (k, &(p, q)) in inn_basis.iter().enumerate() {
            let (i, j) = jordan.basis.pairs[p];
            let (r, s) = jordan.basis.pairs[q];
            let coords = phi_of_inner(&lie, &beta, bm, bn, i, j, r, s);
            // phi(4 [L_p, L_q]) = coords, so phi([L_p, L_q]) = coords / 4
            let coords: Coords =
                coords.iter().map(|c| c.mul(&Scalar::from_ratio(1, 4))).collect();
            put(&mut phi, 2 * dj + k, &coords);
        }
        let phi_inv = linalg::invert(&phi).expect("phi is a bijection");
        Ok(Tkk { jordan, lie, inn_basis, inn_mats, split_cols, phi, phi_inv })
    }

    pub fn tkk_dim(&self) -> usize {
        3 * self.jordan.dim() + self.inn_basis.len()
    }

    /// Splits an istr operator matrix into `(L-part coords, Inn coords)`.
    pub fn split_istr(&self, mat: &Matrix) -> Option<(Coords, Coords)> {
        let dj = self.jordan.dim();
        let target = flatten(mat, dj);
        let sol = linalg::in_span(&self.split_cols, &target)?;
        Some((sol[0..dj].to_vec(), sol[dj..].to_vec()))
    }

    /// The istr operator matrix of a TKK element's middle part.
    pub fn istr_matrix(&self, x: &TkkElement) -> Matrix {
        let dj = self.jordan.dim();
        let mut mt = self.jordan.l_matrix(&x.l_part);
        for (k, c) in x.inn.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..dj {
                for j in 0..dj {
                    if !self.inn_mats[k][i][j].is_zero() {
                        mt[i][j] = mt[i][j].add(&self.inn_mats[k][i][j].mul(c));
                    }
                }
            }
        }
        mt
    }

    pub fn element_parity(&self, x: &TkkElement) -> Option<u8> {
        let mut parity = None;
        let mut merge = |p: u8| -> bool {
            match parity {
                None => {
                    parity = Some(p);
                    true
                }
                Some(q) => q == p,
            }
        };
        for (k, c) in x.minus.iter().enumerate() {
            if !c.is_zero() && !merge(self.jordan.parity(k)) {
                return None;
            }
        }
        for (k, c) in x.l_part.iter().enumerate() {
            if !c.is_zero() && !merge(self.jordan.parity(k)) {
                return None;
            }
        }
        for (k, c) in x.inn.iter().enumerate() {
            if !c.is_zero() {
                let (p, q) = self.inn_basis[k];
                if !merge(self.jordan.parity(p) ^ self.jordan.parity(q)) {
                    return None;
                }
            }
        }
        for (k, c) in x.plus.iter().enumerate() {
            if !c.is_zero() && !merge(self.jordan.parity(k)) {
                return None;
            }
        }
        Some(parity.unwrap_or(0))
    }

    /// The TKK bracket of homogeneous elements.
    pub fn bracket(&self, x: &TkkElement, y: &TkkElement) -> TkkElement {
        let px = self.element_parity(x).expect("homogeneous element required");
        let py = self.element_parity(y).expect("homogeneous element required");
        let sign = if px & py == 1 { Scalar::from_int(-1) } else { Scalar::one() };
        let j = &self.jordan;
        let dj = j.dim();
        let tx = self.istr_matrix(x);
        let ty = self.istr_matrix(y);

        // minus: T_x(u_y) - 2 a_x . u_y - (-1)^{px py} (T_y(u_x) - 2 a_y . u_x)
        let mut minus = linalg::mat_vec(&tx, &y.minus);
        add_coords(&mut minus, &j.product(&x.l_part, &y.minus), &Scalar::from_int(-2));
        let mut m2 = linalg::mat_vec(&ty, &x.minus);
        add_coords(&mut m2, &j.product(&y.l_part, &x.minus), &Scalar::from_int(-2));
        add_coords(&mut minus, &m2, &sign.neg());

        // plus: T_x(p_y) - (-1)^{px py} T_y(p_x)
        let mut plus = linalg::mat_vec(&tx, &y.plus);
        let p2 = linalg::mat_vec(&ty, &x.plus);
        add_coords(&mut plus, &p2, &sign.neg());

        // istr: [T_x, T_y] + (2 L_{p_x u_y} + 2 [L_{p_x}, L_{u_y}])
        //       - (-1)^{px py} (2 L_{p_y u_x} + 2 [L_{p_y}, L_{u_x}])
        let mut istr = linalg::zeros(dj, dj);
        let txty = linalg::mat_mul(&tx, &ty);
        let tytx = linalg::mat_mul(&ty, &tx);
        for a in 0..dj {
            for b in 0..dj {
                istr[a][b] = istr[a][b].add(&txty[a][b].sub(&sign.mul(&tytx[a][b])));
            }
        }
        let mut l_extra = coords_zero(dj);
        for (p, u, s) in [(&x.plus, &y.minus, Scalar::one()), (&y.plus, &x.minus, sign.neg())] {
            if coords_is_zero(p) || coords_is_zero(u) {
                continue;
            }
            let lp = j.l_matrix(p);
            let lu = j.l_matrix(u);
            let pp = j.coords_parity(p).expect("homogeneous");
            let pu = j.coords_parity(u).expect("homogeneous");
            let ab = linalg::mat_mul(&lp, &lu);
            let ba = linalg::mat_mul(&lu, &lp);
            for a in 0..dj {
                for b in 0..dj {
                    let comm = if pp & pu == 1 {
                        ab[a][b].add(&ba[a][b])
                    } else {
                        ab[a][b].sub(&ba[a][b])
                    };
                    istr[a][b] = istr[a][b].add(&comm.mul_int(2).mul(&s));
                }
            }
            add_coords(&mut l_extra, &j.product(p, u), &s.mul_int(2));
        }

        let (mut l_part, inn) = self.split_istr(&istr).expect("istr bracket stays in istr");
        for (k, c) in l_extra.iter().enumerate() {
            l_part[k] = l_part[k].add(c);
        }
        TkkElement { minus, l_part, inn, plus }
    }

    pub fn phi_apply(&self, x: &TkkElement) -> Coords {
        linalg::mat_vec(&self.phi, &x.to_vec())
    }

    pub fn phi_inv_apply(&self, x: &Coords) -> TkkElement {
        TkkElement::from_vec(self, &linalg::mat_vec(&self.phi_inv, x))
    }

    pub fn unit_minus(&self) -> TkkElement {
        let mut x = TkkElement::zero(self);
        x.minus = self.jordan.unit();
        x
    }
    pub fn unit_plus(&self) -> TkkElement {
        let mut x = TkkElement::zero(self);
        x.plus = self.jordan.unit();
        x
    }
    pub fn two_l_unit(&self) -> TkkElement {
        let mut x = TkkElement::zero(self);
        x.l_part = self.jordan.unit().iter().map(|c| c.mul_int(2)).collect();
        x
    }

    /// The sl(2) triple of `g` from the short-subalgebra display.
    pub fn sl2_triple_g(&self) -> (Coords, Coords, Coords) {
        let (m, n) = (self.jordan.m, self.jordan.n);
        let dim = self.lie.dim();
        let mut e_minus = coords_zero(dim);
        let mut h = coords_zero(dim);
        let mut e_plus = coords_zero(dim);
        let half = Scalar::from_ratio(1, 2);
        for i in 0..m {
            let (ti, ui) = (tilde(m, i), underline(m, n, i));
            add_coords(&mut e_minus, &self.lie.u_coords(ui, ui, 1), &half.neg());
            add_coords(&mut h, &self.lie.u_coords(ti, ui, 1), &Scalar::one());
            add_coords(&mut e_plus, &self.lie.u_coords(ti, ti, 1), &half);
        }
        for i in m..m + n {
            let (ti, ui) = (tilde(m, i), underline(m, n, i));
            let (tin, uin) = (tilde(m, i + n), underline(m, n, i + n));
            add_coords(&mut e_minus, &self.lie.u_coords(ui, uin, 1), &Scalar::one().neg());
            add_coords(&mut h, &self.lie.u_coords(ti, uin, 1), &Scalar::one());
            add_coords(&mut h, &self.lie.u_coords(tin, ui, 1), &Scalar::one().neg());
            add_coords(&mut e_plus, &self.lie.u_coords(ti, tin, 1), &Scalar::one());
        }
        (e_minus, h, e_plus)
    }

    pub fn random_homogeneous(&self, rng: &mut SplitMix64, parity: u8) -> TkkElement {
        let mut x = TkkElement::zero(self);
        x.minus = self.jordan.random_homogeneous(rng, parity);
        x.plus = self.jordan.random_homogeneous(rng, parity);
        x.l_part = self.jordan.random_homogeneous(rng, parity);
        for (k, &(p, q)) in self.inn_basis.iter().enumerate() {
            if self.jordan.parity(p) ^ self.jordan.parity(q) == parity {
                x.inn[k] = Scalar::from_int(rng.int_in(-3, 3));
            }
        }
        x
    }
}

fn transpose_cols(cols: &[Vec<Scalar>], rows: usize) -> Matrix {
    let mut m = linalg::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for i in 0..rows {
            m[i][j] = col[i].clone();
        }
    }
    m
}

/// `[L_p, L_q]` as a matrix on `J`.
fn comm_matrix(j: &JordanAlg, p: usize, q: usize) -> Matrix {
    let lp = &j.l_mats[p];
    let lq = &j.l_mats[q];
    let pq = linalg::mat_mul(lp, lq);
    let qp = linalg::mat_mul(lq, lp);
    let anti = j.parity(p) & j.parity(q) == 1;
    let dj = j.dim();
    let mut out = linalg::zeros(dj, dj);
    for a in 0..dj {
        for b in 0..dj {
            out[a][b] = if anti { pq[a][b].add(&qp[a][b]) } else { pq[a][b].sub(&qp[a][b]) };
        }
    }
    out
}

/// `phi(4 [L_{ell_ij}, L_{ell_rs}])` from the displayed four-term formula.
fn phi_of_inner(
    lie: &LieG,
    beta: &BetaForm,
    m: usize,
    n: usize,
    i: usize,
    j: usize,
    r: usize,
    s: usize,
) -> Coords {
    let sgn = |a: usize, b: usize| -> i64 {
        if beta.parity(a) & beta.parity(b) == 1 {
            -1
        } else {
            1
        }
    };
    let mut out = coords_zero(lie.dim());
    // U_{ti(a), ul(b)} - (-1)^{|a||b|} U_{ti(b), ul(a)}, scaled
    let anti = |a: usize, b: usize, c: i64, out: &mut Coords| {
        if c == 0 {
            return;
        }
        let first = lie.u_coords(tilde(m, a), underline(m, n, b), c);
        add_coords(out, &first, &Scalar::one());
        let second = lie.u_coords(tilde(m, b), underline(m, n, a), -sgn(a, b) * c);
        add_coords(out, &second, &Scalar::one());
    };
    anti(i, s, beta.beta(j, r), &mut out);
    anti(j, r, sgn(i, j) * sgn(r, s) * beta.beta(i, s), &mut out);
    anti(i, r, sgn(r, s) * beta.beta(j, s), &mut out);
    anti(j, s, sgn(i, j) * beta.beta(i, r), &mut out);
    out
}

/// The Cayley transform on complexified TKK coordinates, by the piecewise
/// formulas, as a matrix over the TKK basis.
pub fn cayley_tkk_matrix(tkk: &Tkk) -> Matrix {
    let dj = tkk.jordan.dim();
    let di = tkk.inn_basis.len();
    let dim = tkk.tkk_dim();
    let mut c = linalg::zeros(dim, dim);
    let i_s = Scalar::i();
    let quarter = Scalar::from_ratio(1, 4);
    for p in 0..dj {
        // c(a, 0, 0) = (a/4, i L_a, a)
        c[p][p] = quarter.clone();
        c[dj + p][p] = i_s.clone();
        c[2 * dj + di + p][p] = Scalar::one();
        // c(0, L_a, 0) = (i a/4, 0, -i a)
        c[p][dj + p] = i_s.mul(&quarter);
        c[2 * dj + di + p][dj + p] = i_s.neg();
        // c(0, 0, a) = (a/4, -i L_a, a)
        c[p][2 * dj + di + p] = quarter.clone();
        c[dj + p][2 * dj + di + p] = i_s.neg();
        c[2 * dj + di + p][2 * dj + di + p] = Scalar::one();
    }
    for k in 0..di {
        // c(0, I, 0) = (0, I, 0)
        c[2 * dj + k][2 * dj + k] = Scalar::one();
    }
    c
}

/// `exp(ad(x))` on `g` coordinates; `ad(x)` must be nilpotent.
pub fn exp_ad(lie: &LieG, x: &Coords) -> Matrix {
    let dim = lie.dim();
    let mut ad = linalg::zeros(dim, dim);
    for k in 0..dim {
        let col = lie.bracket(x, &coords_unit(dim, k));
        for r in 0..dim {
            ad[r][k] = col[r].clone();
        }
    }
    let mut out = linalg::identity(dim);
    let mut power = linalg::identity(dim);
    let mut kfact = Scalar::one();
    for k in 1..=dim {
        power = linalg::mat_mul(&ad, &power);
        if power.iter().all(|row| row.iter().all(Scalar::is_zero)) {
            break;
        }
        kfact = kfact.mul_int(k as i64);
        let inv = kfact.inv().expect("factorial invertible");
        for i in 0..dim {
            for j in 0..dim {
                out[i][j] = out[i][j].add(&power[i][j].mul(&inv));
            }
        }
    }
    out
}

/// The Cayley transform on `g` coordinates:
/// `exp((i/2) ad(e^-)) exp(i ad(e^+))`.
pub fn cayley_g_matrix(tkk: &Tkk) -> Matrix {
    let e_minus = tkk.phi_apply(&tkk.unit_minus());
    let e_plus = tkk.phi_apply(&tkk.unit_plus());
    let half_i = Scalar::i().mul(&Scalar::from_ratio(1, 2));
    let a: Coords = e_minus.iter().map(|c| c.mul(&half_i)).collect();
    let b: Coords = e_plus.iter().map(|c| c.mul(&Scalar::i())).collect();
    linalg::mat_mul(&exp_ad(&tkk.lie, &a), &exp_ad(&tkk.lie, &b))
}

/// Basis of `k_c` in `g` coordinates.
pub fn kc_basis(tkk: &Tkk) -> Vec<Coords> {
    let (m, n) = (tkk.jordan.m, tkk.jordan.n);
    let beta = tkk.jordan.beta;
    let lie = &tkk.lie;
    let d = beta.dim();
    let mut out = Vec::new();
    let sgn = |i: usize, j: usize| -> i64 {
        if beta.parity(i) & beta.parity(j) == 1 {
            -1
        } else {
            1
        }
    };
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = lie.u_coords(tilde(m, i), underline(m, n, j), 1);
            let w = lie.u_coords(tilde(m, j), underline(m, n, i), -sgn(i, j));
            add_coords(&mut v, &w, &Scalar::one());
            out.push(v);
        }
    }
    for i in 0..d {
        if beta.parity(i) == 1 {
            out.push(lie.u_coords(tilde(m, i), underline(m, n, i), 2));
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = lie.u_coords(underline(m, n, i), underline(m, n, j), 1);
            let w = lie.u_coords(tilde(m, i), tilde(m, j), 1);
            add_coords(&mut v, &w, &Scalar::one());
            out.push(v);
        }
    }
    for i in 0..d {
        if beta.parity(i) == 0 {
            let mut v = lie.u_coords(underline(m, n, i), underline(m, n, i), 1);
            let w = lie.u_coords(tilde(m, i), tilde(m, i), 1);
            add_coords(&mut v, &w, &Scalar::one());
            out.push(v);
        }
    }
    out
}

/// Basis of the unitary superalgebra `u(m|2n, beta')` as supermatrices,
/// listed in the order matching [`kc_basis`].
pub fn unitary_basis(m: usize, n: usize) -> Vec<SuperMatrix> {
    let beta = BetaForm::new(m, n);
    let d = beta.dim();
    let mut out = Vec::new();
    let sgn = |i: usize, j: usize| -> i64 {
        if beta.parity(i) & beta.parity(j) == 1 {
            -1
        } else {
            1
        }
    };
    let entry = |i: usize, j: usize, sign2: i64, imag: bool| -> SuperMatrix {
        let mut mt = SuperMatrix::zero(m, d);
        for k in 0..d {
            let c1 = beta.beta(j, k);
            if c1 != 0 {
                mt.entries[i][k] = mt.entries[i][k].add(&Scalar::from_int(c1));
            }
            let c2 = beta.beta(i, k);
            if c2 != 0 {
                mt.entries[j][k] =
                    mt.entries[j][k].add(&Scalar::from_int(sign2 * sgn(i, j) * c2));
            }
        }
        if imag {
            mt.scale(&Scalar::i())
        } else {
            mt
        }
    };
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(entry(i, j, -1, false));
        }
    }
    for i in 0..d {
        if beta.parity(i) == 1 {
            let mut mt = SuperMatrix::zero(m, d);
            for k in 0..d {
                let c = beta.beta(i, k);
                if c != 0 {
                    mt.entries[i][k] = Scalar::from_int(2 * c);
                }
            }
            out.push(mt);
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(entry(i, j, 1, true));
        }
    }
    for i in 0..d {
        if beta.parity(i) == 0 {
            let mut mt = SuperMatrix::zero(m, d);
            for k in 0..d {
                let c = beta.beta(i, k);
                if c != 0 {
                    mt.entries[i][k] = Scalar::i().mul_int(2 * c);
                }
            }
            out.push(mt);
        }
    }
    out
}

/// The `gl(m|2n) -> g_0` dictionary: the matrix unit `E_ij` maps to
/// `sum_b beta^{jb} U_{ti(i), ul(b)}`, the unique degree-zero element whose
/// restriction to the tilde-span of the defining representation is `E_ij`.
/// For even `j` this is `U_{ti(i), ul(j)}`; for odd `j` it is the
/// beta-partner with the sign of `beta^{jb}`.
pub fn gl_embed(lie: &LieG, i: usize, j: usize) -> Coords {
    let (m, n) = (lie.m, lie.n);
    let beta = BetaForm::new(m, n);
    let mut out = coords_zero(lie.dim());
    for b in 0..beta.dim() {
        let c = beta.beta_inv(j, b);
        if c != 0 {
            add_coords(
                &mut out,
                &lie.u_coords(tilde(m, i), underline(m, n, b), c),
                &Scalar::one(),
            );
        }
    }
    out
}
