//! Normal-ordered polynomial differential operators.
//!
//! A [`DiffOperator`] is a finite sum of terms `multiplier * derivative word`
//! with all multipliers to the left of all derivatives. The derivative word
//! is a monomial in the raw partials `d/dv`; the partials supercommute with
//! the same signs as the variables, so the normal form is unique and
//! structural equality decides operator equality on all polynomials.

use crate::scalar::Scalar;
use crate::superspace::{mul_monomials, Bank, Monomial, Space, SpaceData, SuperPoly};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    pub space: Space,
    /// derivative word -> multiplier
    pub terms: BTreeMap<Monomial, SuperPoly>,
}

impl DiffOperator {
    pub fn zero(space: &Space) -> Self {
        DiffOperator { space: space.clone(), terms: BTreeMap::new() }
    }
    pub fn identity(space: &Space) -> Self {
        DiffOperator::from_multiplier(SuperPoly::one(space))
    }
    /// Multiplication operator by `p`.
    pub fn from_multiplier(p: SuperPoly) -> Self {
        let space = p.space.clone();
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Monomial::unit(space.var_count()), p);
        }
        DiffOperator { space, terms }
    }
    /// The raw partial derivative with respect to variable `v`.
    pub fn deriv(space: &Space, v: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(space.var_count(), v), SuperPoly::one(space));
        DiffOperator { space: space.clone(), terms }
    }
    /// Lowered derivative on a vector bank: `d_i := sum_j beta_{ij} d/d(bank_j)`.
    pub fn lowered(space: &Space, bank: &Bank, i: usize) -> Self {
        let beta = space.beta();
        let mut out = DiffOperator::zero(space);
        for j in 0..bank.len {
            let c = beta.beta(i, j);
            if c != 0 {
                out = out.add(&DiffOperator::deriv(space, bank.start + j).scale(&Scalar::from_int(c)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_part(&mut self, word: Monomial, mult: SuperPoly) {
        if mult.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(mult);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&mult);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(SpaceData::same(&self.space, &o.space));
        let mut out = self.clone();
        for (w, p) in &o.terms {
            out.add_part(w.clone(), p.clone());
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        DiffOperator {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.neg())).collect(),
        }
    }
    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return DiffOperator::zero(&self.space);
        }
        DiffOperator {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.scale(c))).collect(),
        }
    }

    /// `Some(parity)` if every term (multiplier parity + word parity) agrees.
    pub fn parity(&self) -> Option<u8> {
        let mut result: Option<u8> = None;
        for (w, p) in &self.terms {
            let wp = w.parity(&self.space);
            let pp = p.parity()?;
            let total = wp ^ pp;
            match result {
                None => result = Some(total),
                Some(r) if r == total => {}
                _ => return None,
            }
        }
        Some(result.unwrap_or(0))
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, q: &SuperPoly) -> SuperPoly {
        assert!(SpaceData::same(&self.space, &q.space));
        let mut out = SuperPoly::zero(&self.space);
        for (word, mult) in &self.terms {
            let mut v = q.clone();
            for (var, &e) in word.0.iter().enumerate().rev() {
                for _ in 0..e {
                    v = v.derive(var);
                }
            }
            out = out.add(&mult.mul(&v));
        }
        out
    }

    /// Operator composition, normal-ordering the result.
    pub fn compose(&self, o: &Self) -> Self {
        assert!(SpaceData::same(&self.space, &o.space));
        let space = &self.space;
        let mut out = DiffOperator::zero(space);
        for (w1, p1) in &self.terms {
            // expand the word into letters, canonical order; rightmost acts first
            let mut letters = Vec::new();
            for (v, &e) in w1.0.iter().enumerate() {
                for _ in 0..e {
                    letters.push(v);
                }
            }
            for (w2, p2) in &o.terms {
                // push w1 through p2: state is a list of (multiplier, word-to-the-right)
                let mut state: Vec<(SuperPoly, Monomial)> =
                    vec![(p2.clone(), Monomial::unit(space.var_count()))];
                for &v in letters.iter().rev() {
                    let dv = Monomial::var(space.var_count(), v);
                    let mut next: Vec<(SuperPoly, Monomial)> = Vec::new();
                    for (q, w) in &state {
                        // d_v (M_q ∘ w) = M_{d_v q} ∘ w + (-1)^{|v||q|} M_q ∘ (d_v · w)
                        let dq = q.derive(v);
                        if !dq.is_zero() {
                            next.push((dq, w.clone()));
                        }
                        // split q by parity for the Koszul sign
                        for par in [0u8, 1u8] {
                            let qp = SuperPoly {
                                space: space.clone(),
                                terms: q
                                    .terms
                                    .iter()
                                    .filter(|(m, _)| m.parity(space) == par)
                                    .map(|(m, c)| (m.clone(), c.clone()))
                                    .collect(),
                            };
                            if qp.is_zero() {
                                continue;
                            }
                            if let Some((w2new, sign)) = mul_monomials(space, &dv, w) {
                                let mut piece = qp;
                                if sign < 0 {
                                    piece = piece.neg();
                                }
                                if space.parity(v) & par == 1 {
                                    piece = piece.neg();
                                }
                                next.push((piece, w2new));
                            }
                        }
                    }
                    // merge duplicates
                    let mut merged: BTreeMap<Monomial, SuperPoly> = BTreeMap::new();
                    for (q, w) in next {
                        match merged.entry(w) {
                            std::collections::btree_map::Entry::Vacant(vac) => {
                                vac.insert(q);
                            }
                            std::collections::btree_map::Entry::Occupied(mut occ) => {
                                let s = occ.get().add(&q);
                                if s.is_zero() {
                                    occ.remove();
                                } else {
                                    *occ.get_mut() = s;
                                }
                            }
                        }
                    }
                    state = merged.into_iter().map(|(w, q)| (q, w)).collect();
                }
                // assemble p1 * (state multiplier) * (state word · w2)
                for (q, w) in state {
                    // append w2 to the right of w. Both are derivative words;
                    // their product sign uses the same commutation data.
                    if let Some((word, sign)) = mul_monomials(space, &w, w2) {
                        let mut mult = p1.mul(&q);
                        if sign < 0 {
                            mult = mult.neg();
                        }
                        out.add_part(word, mult);
                    }
                }
            }
        }
        out
    }

    /// Supercommutator `[a, b] = a b - (-1)^{|a||b|} b a`.
    ///
    /// Both operators must have homogeneous parity.
    pub fn bracket(&self, o: &Self) -> Self {
        let pa = self.parity().expect("bracket of non-homogeneous operator");
        let pb = o.parity().expect("bracket of non-homogeneous operator");
        let ab = self.compose(o);
        let ba = o.compose(self);
        if pa & pb == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (w, p) in &self.terms {
            let mut s = String::new();
            let needs_parens = p.terms.len() > 1;
            if needs_parens {
                s.push('(');
            }
            s.push_str(&p.render());
            if needs_parens {
                s.push(')');
            }
            for (v, &e) in w.0.iter().enumerate() {
                if e == 1 {
                    s.push_str(&format!("*d{}", self.space.vars[v].name));
                } else if e > 1 {
                    s.push_str(&format!("*d{}^{}", self.space.vars[v].name, e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `R^2 = sum beta^{ij} x_i x_j` on one bank.
pub fn r_squared(space: &Space, bank: &Bank) -> SuperPoly {
    let beta = space.beta();
    let mut out = SuperPoly::zero(space);
    for i in 0..bank.len {
        for j in 0..bank.len {
            let c = beta.beta_inv(i, j);
            if c != 0 {
                let xi = SuperPoly::var(space, bank.start + i);
                let xj = SuperPoly::var(space, bank.start + j);
                out = out.add(&xi.mul(&xj).scale(&Scalar::from_int(c)));
            }
        }
    }
    out
}

/// The Laplacian `sum beta^{ij} d_i d_j` with lowered derivatives.
pub fn laplacian(space: &Space, bank: &Bank) -> DiffOperator {
    let beta = space.beta();
    let mut out = DiffOperator::zero(space);
    for i in 0..bank.len {
        let di = DiffOperator::lowered(space, bank, i);
        for j in 0..bank.len {
            let c = beta.beta_inv(i, j);
            if c != 0 {
                let dj = DiffOperator::lowered(space, bank, j);
                out = out.add(&di.compose(&dj).scale(&Scalar::from_int(c)));
            }
        }
    }
    out
}

/// Euler operator `sum_v x_v d/dx_v` over a bank.
pub fn euler(space: &Space, bank: &Bank) -> DiffOperator {
    let mut out = DiffOperator::zero(space);
    for local in 0..bank.len {
        let v = bank.start + local;
        let xv = DiffOperator::from_multiplier(SuperPoly::var(space, v));
        out = out.add(&xv.compose(&DiffOperator::deriv(space, v)));
    }
    out
}

/// `L_ij = x_i d_j - (-1)^{|i||j|} x_j d_i` with lowered derivatives.
pub fn l_operator(space: &Space, bank: &Bank, i: usize, j: usize) -> DiffOperator {
    let beta = space.beta();
    let xi = DiffOperator::from_multiplier(SuperPoly::var(space, bank.start + i));
    let xj = DiffOperator::from_multiplier(SuperPoly::var(space, bank.start + j));
    let di = DiffOperator::lowered(space, bank, i);
    let dj = DiffOperator::lowered(space, bank, j);
    let first = xi.compose(&dj);
    let second = xj.compose(&di);
    if beta.parity(i) & beta.parity(j) == 1 {
        first.add(&second)
    } else {
        first.sub(&second)
    }
}

/// Cross-bank trace product `z • w := sum_i z^i w_i`.
pub fn trace_product(space: &Space, bank_z: &Bank, bank_w: &Bank) -> SuperPoly {
    let beta = space.beta();
    let d = bank_z.len;
    let mut out = SuperPoly::zero(space);
    for i in 0..d {
        // z^i = sum_j z_j beta^{ji}
        for j in 0..d {
            let c = beta.beta_inv(j, i);
            if c != 0 {
                let zj = SuperPoly::var(space, bank_z.start + j);
                let wi = SuperPoly::var(space, bank_w.start + i);
                out = out.add(&zj.mul(&wi).scale(&Scalar::from_int(c)));
            }
        }
    }
    out
}
