//! The even supersymmetric form `beta` on `K^{m|2n}`, the odd skew form
//! `Omega` on `K^{2m|4n}`, and the index embeddings between them.
//!
//! All indices are 0-based. An index `i` of `K^{m|2n}` is even iff `i < m`;
//! its two images inside `K^{2m|4n}` are written `tilde(i)` and
//! `underline(i)`.

/// The bilinear form `beta`: identity on the even block, `[[0,-I_n],[I_n,0]]`
/// on the odd block.
#[derive(Clone, Copy, Debug)]
pub struct BetaForm {
    pub m: usize,
    pub n: usize,
}

impl BetaForm {
    pub fn new(m: usize, n: usize) -> Self {
        BetaForm { m, n }
    }
    pub fn dim(&self) -> usize {
        self.m + 2 * self.n
    }
    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.m)
    }
    /// Matrix entry `beta_{ij}` (values in `{-1,0,1}`).
    pub fn beta(&self, i: usize, j: usize) -> i64 {
        let (m, n) = (self.m, self.n);
        if i < m || j < m {
            return i64::from(i == j && i < m);
        }
        let (a, b) = (i - m, j - m);
        if a < n && b == a + n {
            -1
        } else if a >= n && b + n == a {
            1
        } else {
            0
        }
    }
    /// Inverse matrix entry `beta^{ij}`.
    pub fn beta_inv(&self, i: usize, j: usize) -> i64 {
        let (m, n) = (self.m, self.n);
        if i < m || j < m {
            return i64::from(i == j && i < m);
        }
        let (a, b) = (i - m, j - m);
        if a < n && b == a + n {
            1
        } else if a >= n && b + n == a {
            -1
        } else {
            0
        }
    }
    /// `M = m - 2n`, the superdimension of `K^{m|2n}`.
    pub fn superdim(&self) -> i64 {
        self.m as i64 - 2 * self.n as i64
    }
}

/// The skew-supersymmetric form `Omega` on `K^{2m|4n}`.
#[derive(Clone, Copy, Debug)]
pub struct OmegaForm {
    pub m: usize,
    pub n: usize,
}

impl OmegaForm {
    pub fn new(m: usize, n: usize) -> Self {
        OmegaForm { m, n }
    }
    pub fn dim(&self) -> usize {
        2 * self.m + 4 * self.n
    }
    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= 2 * self.m)
    }
    /// Matrix entry `Omega_{ij}`.
    pub fn omega(&self, i: usize, j: usize) -> i64 {
        let (m, n) = (self.m, self.n);
        if i < 2 * m || j < 2 * m {
            if i < m && j == i + m {
                return -1;
            }
            if i >= m && i < 2 * m && j + m == i {
                return 1;
            }
            return 0;
        }
        let (a, b) = (i - 2 * m, j - 2 * m);
        let (ga, ta) = (a / n.max(1), a % n.max(1));
        let (gb, tb) = (b / n.max(1), b % n.max(1));
        if n == 0 || ta != tb {
            return 0;
        }
        match (ga, gb) {
            (0, 3) | (3, 0) => 1,
            (1, 2) | (2, 1) => -1,
            _ => 0,
        }
    }
    /// Inverse matrix entry `Omega^{ij}`.
    pub fn omega_inv(&self, i: usize, j: usize) -> i64 {
        let m = self.m;
        if i < 2 * m || j < 2 * m {
            if i < m && j == i + m {
                return 1;
            }
            if i >= m && i < 2 * m && j + m == i {
                return -1;
            }
            return 0;
        }
        // The odd block squares to the identity, so it is its own inverse.
        self.omega(i, j)
    }
}

/// `tilde(i)`: the `g_+`-side image of a `K^{m|2n}` index.
pub fn tilde(m: usize, i: usize) -> usize {
    if i < m {
        i
    } else {
        i + m
    }
}

/// `underline(i)`: the `g_-`-side image of a `K^{m|2n}` index.
pub fn underline(m: usize, n: usize, i: usize) -> usize {
    if i < m {
        i + m
    } else {
        i + m + 2 * n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_inverse_beta(m: usize, n: usize) {
        let b = BetaForm::new(m, n);
        let d = b.dim();
        for i in 0..d {
            for k in 0..d {
                let sum: i64 = (0..d).map(|j| b.beta(i, j) * b.beta_inv(j, k)).sum();
                assert_eq!(sum, i64::from(i == k), "beta inverse failed at ({m},{n}) {i},{k}");
            }
        }
    }

    fn check_inverse_omega(m: usize, n: usize) {
        let o = OmegaForm::new(m, n);
        let d = o.dim();
        for i in 0..d {
            for k in 0..d {
                let sum: i64 = (0..d).map(|j| o.omega(i, j) * o.omega_inv(j, k)).sum();
                assert_eq!(sum, i64::from(i == k), "omega inverse failed at ({m},{n}) {i},{k}");
            }
        }
    }

    #[test]
    fn beta_is_supersymmetric_even_and_invertible() {
        for (m, n) in [(1, 1), (2, 0), (0, 2), (2, 1), (3, 0), (1, 2)] {
            let b = BetaForm::new(m, n);
            let d = b.dim();
            for i in 0..d {
                for j in 0..d {
                    // even form: zero between different parities
                    if b.parity(i) != b.parity(j) {
                        assert_eq!(b.beta(i, j), 0);
                    }
                    // supersymmetric
                    let sign = if b.parity(i) & b.parity(j) == 1 { -1 } else { 1 };
                    assert_eq!(b.beta(i, j), sign * b.beta(j, i));
                }
            }
            check_inverse_beta(m, n);
        }
    }

    #[test]
    fn omega_is_skew_supersymmetric_and_invertible() {
        for (m, n) in [(1, 1), (2, 0), (0, 2), (2, 1)] {
            let o = OmegaForm::new(m, n);
            let d = o.dim();
            for i in 0..d {
                for j in 0..d {
                    if o.parity(i) != o.parity(j) {
                        assert_eq!(o.omega(i, j), 0);
                    }
                    let sign = if o.parity(i) & o.parity(j) == 1 { -1 } else { 1 };
                    assert_eq!(o.omega(i, j), -sign * o.omega(j, i));
                }
            }
            check_inverse_omega(m, n);
        }
    }

    #[test]
    fn index_maps_are_injective_and_parity_preserving() {
        let (m, n) = (2, 1);
        let o = OmegaForm::new(m, n);
        let b = BetaForm::new(m, n);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..b.dim() {
            let t = tilde(m, i);
            let u = underline(m, n, i);
            assert!(seen.insert(t));
            assert!(seen.insert(u));
            assert_eq!(o.parity(t), b.parity(i));
            assert_eq!(o.parity(u), b.parity(i));
        }
        assert_eq!(seen.len(), o.dim());
    }
}
