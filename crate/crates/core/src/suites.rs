//! Batch verification suites over a grid of `(m,n)` values, producing
//! deterministic reports for the command-line runner.

use crate::algebra::{coords_unit, kc_basis, unitary_basis, QuadraticL2};
use crate::bessel::{
    bessel_operator, compute_v_lambda, fold_psi, same_span, v1_dims_closed, v1_sdim_closed,
    v1_spanning_generator, v_half_dims_closed, v_half_sdim_closed, v_half_spanning_generator,
    v_lambda_by_kernel, BesselConstruction, IdealSlice,
};
use crate::diffop::{laplacian, DiffOperator};
use crate::gaussian::{gamma, gamma_closed, omega, omega_closed, GaussianFunction};
use crate::linalg;
use crate::products::{
    bessel_fischer_gram, fundamental_symmetry, gram_rank, kernel_reproduce,
    pair_bessel_fischer, pair_fischer, pair_fock, pair_l2, sf_gram_matrix,
};
use crate::report::{Report, ReproBlock};
use crate::reps::{
    fischer_decompose, gk_growth, kmcs_finiteness_check, ladder_check, RepId, Reps,
};
use crate::rng::SplitMix64;
use crate::scalar::{rat, Rat, Scalar};
use crate::superspace::{monomials_of_degree, SuperPoly};
use crate::transforms::{
    fourier, hermite, inverse_segal_bargmann, segal_bargmann_hermite, segal_bargmann_moments,
    HermiteResult, HermiteVariant,
};
use num_traits::One;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_DEGREE_CAP: u64 = 8;
pub const MAX_GRID: usize = 8;
pub const DEFAULT_SEED: u64 = 0x1357_9bdf_2468_ace0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteKind {
    Algebra,
    Bessel,
    Reps,
    Products,
    Transforms,
    Dims,
    Gk,
}

impl SuiteKind {
    pub fn all() -> Vec<SuiteKind> {
        use SuiteKind::*;
        vec![Algebra, Bessel, Reps, Products, Transforms, Dims, Gk]
    }
    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Algebra => "algebra",
            SuiteKind::Bessel => "bessel",
            SuiteKind::Reps => "reps",
            SuiteKind::Products => "products",
            SuiteKind::Transforms => "transforms",
            SuiteKind::Dims => "dims",
            SuiteKind::Gk => "gk",
        }
    }
    pub fn parse(name: &str) -> Option<SuiteKind> {
        SuiteKind::all().into_iter().find(|k| k.name() == name)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub grid: Vec<(usize, usize)>,
    pub suites: Vec<SuiteKind>,
    pub degree_cap: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            grid: vec![(1, 1), (2, 0), (0, 2), (2, 1)],
            suites: SuiteKind::all(),
            degree_cap: 4,
            samples: 50,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("the grid point (0,1) is excluded")]
    ExcludedGridPoint,
    #[error("degree cap {0} exceeds the hard limit {MAX_DEGREE_CAP}")]
    DegreeCapTooLarge(u64),
    #[error("grid has {0} entries, more than the hard limit {MAX_GRID}")]
    GridTooLarge(usize),
    #[error("empty grid")]
    EmptyGrid,
    #[error("unknown suite {0}")]
    UnknownSuite(String),
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid.is_empty() {
            return Err(ConfigError::EmptyGrid);
        }
        if self.grid.len() > MAX_GRID {
            return Err(ConfigError::GridTooLarge(self.grid.len()));
        }
        if self.grid.contains(&(0, 1)) {
            return Err(ConfigError::ExcludedGridPoint);
        }
        if self.degree_cap > MAX_DEGREE_CAP {
            return Err(ConfigError::DegreeCapTooLarge(self.degree_cap));
        }
        Ok(())
    }
}

/// Runs the configured suites over the grid; deterministic for a fixed
/// configuration.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut report = Report::new(ReproBlock {
        seed: config.seed,
        grid: config.grid.clone(),
        degree_cap: config.degree_cap,
        samples: config.samples,
        suites: config.suites.iter().map(|s| s.name().to_string()).collect(),
        version: VERSION.to_string(),
    });
    for &(m, n) in &config.grid {
        let reps = Reps::new(m, n).expect("validated grid");
        for suite in &config.suites {
            let mut rng = SplitMix64::new(
                config
                    .seed
                    .wrapping_add((m as u64) << 32)
                    .wrapping_add((n as u64) << 16)
                    .wrapping_add(*suite as u64),
            );
            match suite {
                SuiteKind::Algebra => suite_algebra(config, &reps, &mut rng, &mut report),
                SuiteKind::Bessel => suite_bessel(config, &reps, &mut report),
                SuiteKind::Reps => suite_reps(config, &reps, &mut rng, &mut report),
                SuiteKind::Products => suite_products(config, &reps, &mut rng, &mut report),
                SuiteKind::Transforms => suite_transforms(config, &reps, &mut rng, &mut report),
                SuiteKind::Dims => suite_dims(config, &reps, &mut report),
                SuiteKind::Gk => suite_gk(&reps, &mut report),
            }
        }
    }
    Ok(report)
}

fn tag(m: usize, n: usize, what: &str) -> String {
    format!("{what}@({m},{n})")
}

fn suite_algebra(cfg: &SuiteConfig, reps: &Reps, rng: &mut SplitMix64, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let g = &reps.tkk.lie;
    let j = &reps.tkk.jordan;
    // super Jacobi: exhaustive for small dimensions, random otherwise
    let exhaustive = g.dim() <= 20;
    let mut ok = true;
    if exhaustive {
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                for c in 0..g.dim() {
                    ok &= g.jacobi_holds(
                        &coords_unit(g.dim(), a),
                        &coords_unit(g.dim(), b),
                        &coords_unit(g.dim(), c),
                    );
                }
            }
        }
    } else {
        for _ in 0..cfg.samples.max(300) {
            let (pa, pb, pc) = (rng.below(2) as u8, rng.below(2) as u8, rng.below(2) as u8);
            let a = g.random_homogeneous(rng, pa);
            let b = g.random_homogeneous(rng, pb);
            let c = g.random_homogeneous(rng, pc);
            ok &= g.jacobi_holds(&a, &b, &c);
        }
    }
    report.push(
        "algebra",
        &tag(m, n, "super_jacobi"),
        "[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]] on spo(2m|4n)",
        ok,
        None,
    );
    // Jordan identity
    let mut ok = true;
    if j.dim() <= 10 {
        for a in 0..j.dim() {
            for b in 0..j.dim() {
                for c in 0..j.dim() {
                    ok &= j.jordan_identity_holds(
                        &coords_unit(j.dim(), a),
                        &coords_unit(j.dim(), b),
                        &coords_unit(j.dim(), c),
                    );
                }
            }
        }
    } else {
        for _ in 0..cfg.samples.max(300) {
            let (pa, pb, pc) = (rng.below(2) as u8, rng.below(2) as u8, rng.below(2) as u8);
            ok &= j.jordan_identity_holds(
                &j.random_homogeneous(rng, pa),
                &j.random_homogeneous(rng, pb),
                &j.random_homogeneous(rng, pc),
            );
        }
    }
    report.push(
        "algebra",
        &tag(m, n, "jordan_identity"),
        "(-1)^{|x||z|}[L_x, L_{yz}] + cyclic = 0 on JOSP(m|2n)",
        ok,
        None,
    );
    // skew-supersymmetry
    let mut ok = true;
    for _ in 0..cfg.samples {
        let (pa, pb) = (rng.below(2) as u8, rng.below(2) as u8);
        ok &= g.skew_holds(&g.random_homogeneous(rng, pa), &g.random_homogeneous(rng, pb));
    }
    report.push(
        "algebra",
        &tag(m, n, "skew"),
        "[x,y] = -(-1)^{|x||y|}[y,x]",
        ok,
        None,
    );
    // TKK homomorphism on random pairs
    let mut ok = true;
    for _ in 0..cfg.samples.min(40) {
        let (pa, pb) = (rng.below(2) as u8, rng.below(2) as u8);
        let x = reps.tkk.random_homogeneous(rng, pa);
        let y = reps.tkk.random_homogeneous(rng, pb);
        let lhs = reps.tkk.phi_apply(&reps.tkk.bracket(&x, &y));
        let rhs = g.bracket(&reps.tkk.phi_apply(&x), &reps.tkk.phi_apply(&y));
        ok &= crate::algebra::coords_is_zero(&crate::algebra::coords_sub(&lhs, &rhs));
    }
    report.push(
        "algebra",
        &tag(m, n, "tkk_phi"),
        "phi([x,y]) = [phi(x), phi(y)] for the TKK isomorphism",
        ok,
        None,
    );
    // grading under ad of the middle sl(2) element
    let (_, h, _) = reps.tkk.sl2_triple_g();
    let in_minus = |i: usize| (m..2 * m).contains(&i) || i >= 2 * m + 2 * n;
    let in_plus = |i: usize| i < m || (2 * m..2 * m + 2 * n).contains(&i);
    let mut ok = true;
    for k in 0..g.dim() {
        let (a, b) = g.basis.pairs[k];
        let x = coords_unit(g.dim(), k);
        let br = g.bracket(&h, &x);
        let ev: i64 = if in_minus(a) && in_minus(b) {
            -2
        } else if in_plus(a) && in_plus(b) {
            2
        } else {
            0
        };
        let want: Vec<Scalar> = x.iter().map(|c| c.mul_int(ev)).collect();
        ok &= crate::algebra::coords_is_zero(&crate::algebra::coords_sub(&br, &want));
    }
    report.push(
        "algebra",
        &tag(m, n, "grading"),
        "ad(h) eigenvalues -2/0/+2 split g into the 3-grading",
        ok,
        None,
    );
    // k_c = u(m|2n, beta') structure-constant match (small cases only)
    if g.dim() <= 20 {
        let kc = kc_basis(&reps.tkk);
        let un = unitary_basis(m, n);
        let d = reps.tkk.jordan.beta.dim();
        let un_cols: Vec<Vec<Scalar>> = un
            .iter()
            .map(|u| crate::algebra::flatten(&u.entries, d))
            .collect();
        let mut ok = kc.len() == un.len();
        if ok {
            'outer: for a in 0..kc.len() {
                for b in 0..kc.len() {
                    let lhs = g.bracket(&kc[a], &kc[b]);
                    let Some(kc_coords) = linalg::in_span(&kc, &lhs) else {
                        ok = false;
                        break 'outer;
                    };
                    let rhs = un[a].supercommutator(&un[b]);
                    let Some(un_coords) =
                        linalg::in_span(&un_cols, &crate::algebra::flatten(&rhs.entries, d))
                    else {
                        ok = false;
                        break 'outer;
                    };
                    if !crate::algebra::coords_is_zero(&crate::algebra::coords_sub(
                        &kc_coords, &un_coords,
                    )) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        report.push(
            "algebra",
            &tag(m, n, "kc_unitary_isom"),
            "k_c and u(m|2n, beta') have matching structure constants",
            ok,
            None,
        );
    } else {
        report.skip("algebra", &tag(m, n, "kc_unitary_isom"), "skipped: dimension too large");
    }
    // Heisenberg axioms and the quadratic algebra isomorphism
    let h_alg = crate::algebra::HeisenbergAlg { omega: g.omega };
    let d = h_alg.omega.dim();
    let mut ok = true;
    for i in 0..d {
        let zc = coords_unit(d + 1, d);
        ok &= crate::algebra::coords_is_zero(&h_alg.bracket(&zc, &coords_unit(d + 1, i)));
        for jj in 0..d {
            let br = h_alg.bracket(&coords_unit(d + 1, i), &coords_unit(d + 1, jj));
            ok &= br[d] == Scalar::from_int(h_alg.omega.omega(i, jj));
        }
    }
    report.push(
        "algebra",
        &tag(m, n, "heisenberg"),
        "[e_i, e_j] = Omega_ij Z with Z central",
        ok,
        None,
    );
    let l2 = QuadraticL2 { lie: g };
    let mut ok = true;
    for _ in 0..cfg.samples.min(40) {
        let (pa, pb) = (rng.below(2) as u8, rng.below(2) as u8);
        let x = g.random_homogeneous(rng, pa);
        let y = g.random_homogeneous(rng, pb);
        let lhs: Vec<Scalar> = l2.bracket(&x, &y).iter().map(|c| c.mul_int(2)).collect();
        let two_x: Vec<Scalar> = x.iter().map(|c| c.mul_int(2)).collect();
        let two_y: Vec<Scalar> = y.iter().map(|c| c.mul_int(2)).collect();
        let rhs = g.bracket(&two_x, &two_y);
        ok &= crate::algebra::coords_is_zero(&crate::algebra::coords_sub(&lhs, &rhs));
    }
    report.push(
        "algebra",
        &tag(m, n, "quadratic_algebra"),
        "V_ij -> 2 U_ij intertwines the quadratic-algebra bracket",
        ok,
        None,
    );
}

fn suite_bessel(_cfg: &SuiteConfig, reps: &Reps, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let mvs = &reps.mvs;
    let d = mvs.jordan.beta.dim();
    // the two constructions agree
    let mut ok = true;
    for lambda in [rat(-1, 2), Rat::one(), rat(2, 1)] {
        for i in 0..d {
            for jj in 0..d {
                let a = bessel_operator(mvs, &lambda, i, jj, BesselConstruction::Definitional);
                let b = bessel_operator(mvs, &lambda, i, jj, BesselConstruction::Explicit);
                ok &= a == b;
            }
        }
    }
    report.push(
        "bessel",
        &tag(m, n, "two_constructions"),
        "definitional and explicit Bessel operators agree as normal forms",
        ok,
        None,
    );
    // pairwise supercommutation
    let mut ok = true;
    for lambda in [Rat::one(), rat(-1, 2), rat(2, 1)] {
        let fam = crate::bessel::bessel_family(mvs, &lambda, BesselConstruction::Explicit);
        for (a, oa) in fam.iter().enumerate() {
            for ob in fam.iter().skip(a) {
                ok &= oa.bracket(ob).is_zero();
            }
        }
    }
    report.push(
        "bessel",
        &tag(m, n, "supercommute"),
        "[B(u), B(v)] = 0 for fixed lambda",
        ok,
        None,
    );
    // V_lambda: solver vs kernel route vs closed forms vs spanning sets
    let (mi, ni) = (m as i64, n as i64);
    let big_m = mi - 2 * ni;
    for (lambda, label, dims, sdim) in [
        (Rat::one(), "v1", Some(v1_dims_closed(mi, ni)), Some(v1_sdim_closed(big_m))),
        (
            rat(-1, 2),
            "v_half",
            Some(v_half_dims_closed(mi, ni)),
            Some(v_half_sdim_closed(big_m)),
        ),
        (rat(2, 1), "v_generic", None, None),
    ] {
        let v = compute_v_lambda(mvs, &lambda);
        let k = v_lambda_by_kernel(mvs, &lambda);
        let mut ok = v.dim_even() == k.dim_even() && v.dim_odd() == k.dim_odd();
        let av: Vec<SuperPoly> = v.all().cloned().collect();
        let ak: Vec<SuperPoly> = k.all().cloned().collect();
        ok &= same_span(&mvs.space, &mvs.z, 2, &av, &ak);
        if let Some((de, do_)) = dims {
            ok &= v.dim_even() as i64 == de && v.dim_odd() as i64 == do_;
        } else {
            ok &= v.dim_even() + v.dim_odd() == 0;
        }
        if let Some(s) = sdim {
            ok &= v.sdim() == s;
        }
        report.push(
            "bessel",
            &tag(m, n, label),
            "V_lambda from the coefficient solver matches the Bessel kernel and closed forms",
            ok,
            None,
        );
    }
    // spanning sets
    let mut gens1 = Vec::new();
    let mut gens_half = Vec::new();
    for i in 0..d {
        for jj in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let g1 = v1_spanning_generator(mvs, i, jj, k, l);
                    if !g1.is_zero() {
                        gens1.push(g1);
                    }
                    let gh = v_half_spanning_generator(mvs, i, jj, k, l);
                    if !gh.is_zero() {
                        gens_half.push(gh);
                    }
                }
            }
        }
    }
    let v1 = compute_v_lambda(mvs, &Rat::one());
    let vh = compute_v_lambda(mvs, &rat(-1, 2));
    let a1: Vec<SuperPoly> = v1.all().cloned().collect();
    let ah: Vec<SuperPoly> = vh.all().cloned().collect();
    let ok = same_span(&mvs.space, &mvs.z, 2, &gens1, &a1)
        && same_span(&mvs.space, &mvs.z, 2, &gens_half, &ah);
    report.push(
        "bessel",
        &tag(m, n, "spanning_sets"),
        "the displayed quadratic spanning sets equal the solved V_lambda",
        ok,
        None,
    );
    // folding
    let space = &reps.std;
    let bank = &reps.x;
    let r2 = crate::diffop::r_squared(space, bank);
    let mut ok = fold_psi(mvs, &mvs.two_e(), space, bank) == r2;
    for q in vh.all() {
        ok &= fold_psi(mvs, q, space, bank).is_zero();
    }
    report.push(
        "bessel",
        &tag(m, n, "folding"),
        "psi(2e) = R^2 and psi annihilates V_{-1/2}",
        ok,
        None,
    );
}

fn suite_reps(cfg: &SuiteConfig, reps: &Reps, rng: &mut SplitMix64, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let exhaustive = reps.tkk.lie.dim() <= 20;
    let reps_to_check: Vec<(RepId, &str)> = vec![
        (RepId::PiTilde, "pi_tilde"),
        (RepId::RhoTilde, "rho_tilde"),
        (RepId::PiHat, "pi_hat"),
        (RepId::MuStar(rat(1, 2)), "mu_star"),
        (RepId::PiLambda(rat(-1, 2)), "pi_lambda"),
        (RepId::RhoLambda(rat(-1, 2)), "rho_lambda"),
    ];
    for (rep, name) in &reps_to_check {
        let heavy = matches!(rep, RepId::PiLambda(_) | RepId::RhoLambda(_));
        let ok = if exhaustive && !heavy {
            reps.homomorphism_on_basis(rep)
        } else {
            reps.homomorphism_random(rep, rng, cfg.samples.min(15))
        };
        report.push(
            "reps",
            &tag(m, n, name),
            "rep([X,Y]) = [rep(X), rep(Y)] as normal-form operators",
            ok,
            None,
        );
    }
    let ok = reps.u_star_heisenberg_axioms(&rat(1, 2));
    report.push(
        "reps",
        &tag(m, n, "u_star"),
        "U_* is a Heisenberg representation with U_*(Z) = i hbar",
        ok,
        None,
    );
    // mu_* = pi^ at hbar = 1/2
    let dim = reps.tkk.lie.dim();
    let mut ok = true;
    for k in 0..dim {
        let x = coords_unit(dim, k);
        ok &= reps.mu_star(&rat(1, 2), &x) == reps.pi_hat(&x);
    }
    report.push(
        "reps",
        &tag(m, n, "mu_star_is_pi_hat"),
        "mu_* = pi^ at hbar = 1/2",
        ok,
        None,
    );
    // closed forms equal psi-conjugation on even monomials
    let mut ok = true;
    for deg in [0u64, 2, cfg.degree_cap.min(4)] {
        for mono in monomials_of_degree(&reps.std, &reps.x, deg) {
            let p = SuperPoly::from_terms(&reps.std, [(mono, Scalar::one())]);
            for k in 0..dim {
                let x = coords_unit(dim, k);
                ok &= reps.pi_tilde(&x).apply(&p) == reps.pi_tilde_by_conjugation(&x, &p);
            }
        }
    }
    report.push(
        "reps",
        &tag(m, n, "conjugation"),
        "pi~ closed forms equal psi-conjugated pi_lambda on even polynomials",
        ok,
        None,
    );
    // sl(2) relations
    let space = &reps.std;
    let bank = &reps.x;
    let big_m = reps.big_m();
    let lap = laplacian(space, bank);
    let r2op = DiffOperator::from_multiplier(crate::diffop::r_squared(space, bank));
    let e = crate::diffop::euler(space, bank);
    let ok = lap.bracket(&r2op)
        == e.scale(&Scalar::from_int(4))
            .add(&DiffOperator::identity(space).scale(&Scalar::from_int(2 * big_m)))
        && lap.bracket(&e) == lap.scale(&Scalar::from_int(2))
        && r2op.bracket(&e) == r2op.scale(&Scalar::from_int(-2));
    report.push(
        "reps",
        &tag(m, n, "sl2"),
        "[Delta, R^2] = 4E + 2M, [Delta, E] = 2 Delta, [R^2, E] = -2 R^2",
        ok,
        None,
    );
    // ladder formulas
    let mut ok = true;
    for l in 0..=2u64 {
        ok &= ladder_check(reps, l, 3).all_hold;
    }
    report.push(
        "reps",
        &tag(m, n, "ladder"),
        "raising, lowering, grading coefficients on R^{2k} phi_l",
        ok,
        None,
    );
    // k_mcs finiteness
    let km = kmcs_finiteness_check(reps);
    let bound = (1usize << (2 * n)) * (1 + m);
    let ok = km.delta_formula_ok
        && km.three_term_ok
        && km.l_operator_ok
        && km.closure_contained
        && km.even_closure_dim <= bound
        && km.odd_closure_dim.map_or(true, |d| d <= bound);
    report.push(
        "reps",
        &tag(m, n, "kmcs_finite"),
        "the compact subalgebra action closes on a finite-dimensional space",
        ok,
        None,
    );
}

fn suite_products(cfg: &SuiteConfig, reps: &Reps, rng: &mut SplitMix64, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let space = &reps.std;
    let zb = space.banks[1].clone();
    let zbb = space.banks[3].clone();
    // fischer = fock on monomial pairs
    let cap = cfg.degree_cap.min(4);
    let mut ok = true;
    for k in 0..=cap {
        let monos = monomials_of_degree(space, &zb, k);
        for a in &monos {
            for b in &monos {
                let pa = SuperPoly::from_terms(space, [(a.clone(), Scalar::one())]);
                let pb = SuperPoly::from_terms(space, [(b.clone(), Scalar::one())]);
                ok &= pair_fischer(&pa, &pb, &zb) == pair_fock(&pa, &pb, &zb, &zbb);
            }
        }
    }
    report.push(
        "products",
        &tag(m, n, "fischer_is_fock"),
        "the Fischer and Fock products agree on monomial pairs",
        ok,
        None,
    );
    // normalisation constants
    let xsp = space;
    let xb = &reps.x;
    let ok = omega(xsp, xb).map(|v| v == omega_closed(m, n)).unwrap_or(false)
        && gamma(xsp, &zb, &zbb).map(|v| v == gamma_closed(m, n)).unwrap_or(false);
    report.push(
        "products",
        &tag(m, n, "normalisations"),
        "omega = 2^n (pi/2)^{M/2} and gamma = pi^M from the integration engine",
        ok,
        None,
    );
    // Eq-type identity: bessel_fischer = fischer after folding
    let mvs = &reps.mvs;
    let lambda = rat(-1, 2);
    let mut ok = true;
    for _ in 0..cfg.samples.min(20) {
        let dd = rng.below(3);
        let monos = monomials_of_degree(&mvs.space, &mvs.z, dd);
        let mut p = SuperPoly::zero(&mvs.space);
        let mut q = SuperPoly::zero(&mvs.space);
        for mo in &monos {
            p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-2, 2)));
            q.add_term(mo.clone(), Scalar::from_int(rng.int_in(-2, 2)));
        }
        let lhs = pair_bessel_fischer(mvs, &lambda, &p, &q);
        let rhs = pair_fischer(
            &fold_psi(mvs, &p, space, &zb),
            &fold_psi(mvs, &q, space, &zb),
            &zb,
        );
        ok &= lhs == rhs;
    }
    report.push(
        "products",
        &tag(m, n, "bessel_fischer_folds"),
        "<p,q>_B = <psi p, psi q>_F at lambda = -1/2",
        ok,
        None,
    );
    // skew-supersymmetry of pi~ for L^2 and rho~ for Fock
    let dim = reps.tkk.lie.dim();
    let g0 = GaussianFunction::new(SuperPoly::one(space), xb, Rat::one());
    let mut args = vec![g0.clone()];
    for dd in 1..=2u64 {
        for mo in monomials_of_degree(space, xb, dd) {
            args.push(g0.mul_poly(&SuperPoly::from_terms(space, [(mo, Scalar::one())])));
        }
    }
    let mut ok = true;
    for k in 0..dim.min(12) {
        let op = reps.pi_tilde(&coords_unit(dim, k));
        let parity = reps.tkk.lie.parity(k);
        for f in &args {
            for g in &args {
                if f.poly.parity().is_none() {
                    continue;
                }
                ok &= crate::products::l2_skew_supersymmetric(&op, parity, f, g);
            }
        }
    }
    report.push(
        "products",
        &tag(m, n, "l2_skew"),
        "<pi~(X) f, g>_W = -(-1)^{|X||f|} <f, pi~(X) g>_W",
        ok,
        None,
    );
    let mut ok = true;
    let mut zargs = vec![SuperPoly::one(space)];
    for dd in 1..=2u64 {
        for mo in monomials_of_degree(space, &zb, dd) {
            zargs.push(SuperPoly::from_terms(space, [(mo, Scalar::one())]));
        }
    }
    for k in 0..dim.min(12) {
        let op = reps.move_operator_to_bank(
            &reps.rho_tilde(&coords_unit(dim, k)),
            &zb,
        );
        let parity = reps.tkk.lie.parity(k);
        for p in &zargs {
            for q in &zargs {
                ok &= crate::products::fock_skew_supersymmetric(&op, parity, p, q, &zb, &zbb);
            }
        }
    }
    report.push(
        "products",
        &tag(m, n, "fock_skew"),
        "<rho~(X) p, q>_F = -(-1)^{|X||p|} <p, rho~(X) q>_F",
        ok,
        None,
    );
    // Gram matrices: S_F positivity and Bessel-Fischer nonsingularity
    let mut ok = true;
    for k in 0..=cap.min(4) {
        let gram = sf_gram_matrix(space, &zb, k);
        if !gram.is_empty() {
            ok &= linalg::positive_definite_rat(&gram);
        }
    }
    report.push(
        "products",
        &tag(m, n, "sf_positive"),
        "the Gram matrix of <., S_F .>_F is positive definite per degree",
        ok,
        None,
    );
    // S_F^4 = 1 and product invariance
    let mut ok = true;
    for k in 0..=cap.min(3) {
        for mo in monomials_of_degree(space, &zb, k) {
            let p = SuperPoly::from_terms(space, [(mo, Scalar::one())]);
            let mut q = p.clone();
            for _ in 0..4 {
                q = fundamental_symmetry(&q, &zb);
            }
            ok &= q == p;
        }
    }
    report.push("products", &tag(m, n, "sf_order_four"), "S_F^4 = id", ok, None);
    let mut ok = true;
    for lambda in [rat(-1, 2), Rat::one()] {
        let v = compute_v_lambda(mvs, &lambda);
        for k in 0..=cap.min(3) {
            let slice = IdealSlice::new(mvs, &v, k);
            let gram = bessel_fischer_gram(mvs, &lambda, &slice);
            if !gram.is_empty() {
                ok &= gram_rank(&gram) == gram.len();
            }
        }
    }
    report.push(
        "products",
        &tag(m, n, "bf_gram_rank"),
        "the Bessel-Fischer Gram matrix is nonsingular on P_k mod I_lambda",
        ok,
        None,
    );
    // kernel slices reproduce
    let mut ok = true;
    for lambda in [rat(-1, 2), Rat::one()] {
        let v = compute_v_lambda(mvs, &lambda);
        for k in 0..=cap.min(3) {
            let slice = IdealSlice::new(mvs, &v, k);
            for mo in monomials_of_degree(&mvs.space, &mvs.z, k) {
                let p = SuperPoly::from_terms(&mvs.space, [(mo, Scalar::one())]);
                let (lhs, rhs) = kernel_reproduce(mvs, &lambda, &slice, &p, k);
                ok &= lhs == rhs;
            }
        }
    }
    report.push(
        "products",
        &tag(m, n, "kernel_slices"),
        "<p(z), I_{lambda,k}(z,w)>_B = p(w) modulo I_lambda",
        ok,
        None,
    );
}

fn suite_transforms(cfg: &SuiteConfig, reps: &Reps, rng: &mut SplitMix64, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let space = &reps.std;
    let xb = reps.x.clone();
    let zb = space.banks[1].clone();
    let wb = space.banks[2].clone();
    let zbb = space.banks[3].clone();
    // SB of the Gaussian generator
    let g = GaussianFunction::new(SuperPoly::one(space), &xb, Rat::one());
    let ok = segal_bargmann_moments(space, &xb, &zb, &g)
        .map(|p| p == SuperPoly::one(space))
        .unwrap_or(false);
    report.push("transforms", &tag(m, n, "sb_gaussian"), "SB(exp(-R^2)) = 1", ok, None);
    // pipelines agree on random inputs
    let mut ok = true;
    for _ in 0..cfg.samples.min(10) {
        let dd = rng.below(cfg.degree_cap.min(3) + 1);
        let monos = monomials_of_degree(space, &xb, dd);
        let mut p = SuperPoly::zero(space);
        for mo in &monos {
            p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-3, 3)));
        }
        let f = GaussianFunction::new(p, &xb, Rat::one());
        let a = segal_bargmann_moments(space, &xb, &zb, &f);
        let b = segal_bargmann_hermite(space, &xb, &zb, &f);
        ok &= matches!((a, b), (Ok(x), Ok(y)) if x == y);
    }
    report.push(
        "transforms",
        &tag(m, n, "sb_pipelines"),
        "moment and Hermite pipelines of SB agree",
        ok,
        None,
    );
    // Hermite images and the inverse transform
    let mut ok = true;
    let d = m + 2 * n;
    let mut alphas: Vec<Vec<u8>> = vec![vec![0; d]];
    for i in 0..d {
        let mut a = vec![0u8; d];
        a[i] = 1;
        alphas.push(a.clone());
        if i < m {
            a[i] = 2;
            alphas.push(a);
        }
    }
    for alpha in &alphas {
        let h = match hermite(space, &xb, alpha, HermiteVariant::SmallTilde) {
            HermiteResult::Gaussian(gg) => gg,
            _ => unreachable!(),
        };
        let sb = segal_bargmann_moments(space, &xb, &zb, &h).expect("weight one");
        let mut z_mono = crate::superspace::Monomial::unit(space.var_count());
        for (i, &e) in alpha.iter().enumerate() {
            z_mono.0[zb.start + i] = e;
        }
        let expected = SuperPoly::from_terms(space, [(z_mono, Scalar::one())]);
        ok &= sb == expected;
        let back = inverse_segal_bargmann(space, &xb, &zb, &zbb, &expected);
        ok &= back == h;
    }
    report.push(
        "transforms",
        &tag(m, n, "hermite_monomials"),
        "SB(h~_alpha) = z^alpha and SB^{-1}(z^alpha) = h~_alpha",
        ok,
        None,
    );
    // intertwining and superunitarity on a small family
    let dim = reps.tkk.lie.dim();
    let family: Vec<GaussianFunction> = alphas
        .iter()
        .map(|alpha| match hermite(space, &xb, alpha, HermiteVariant::SmallTilde) {
            HermiteResult::Gaussian(gg) => gg,
            _ => unreachable!(),
        })
        .collect();
    let mut ok = true;
    for k in 0..dim.min(12) {
        let x = coords_unit(dim, k);
        let pi_op = reps.pi_tilde(&x);
        let rho_op = reps.move_operator_to_bank(&reps.rho_tilde(&x), &zb);
        for f in &family {
            let lhs = segal_bargmann_moments(space, &xb, &zb, &f.apply_op(&pi_op)).unwrap();
            let rhs = rho_op.apply(&segal_bargmann_moments(space, &xb, &zb, f).unwrap());
            ok &= lhs == rhs;
        }
    }
    report.push(
        "transforms",
        &tag(m, n, "sb_intertwines"),
        "SB pi~(X) = rho~(X) SB",
        ok,
        None,
    );
    let mut ok = true;
    for f in &family {
        for g2 in &family {
            let sb_f = segal_bargmann_moments(space, &xb, &zb, f).unwrap();
            let sb_g = segal_bargmann_moments(space, &xb, &zb, g2).unwrap();
            ok &= pair_fock(&sb_f, &sb_g, &zb, &zbb) == pair_l2(f, g2);
        }
    }
    report.push(
        "transforms",
        &tag(m, n, "sb_superunitary"),
        "<SB f, SB g>_F = <f, g>_W",
        ok,
        None,
    );
    // Fourier involution, exchange identities and conjugated realisation
    let mut ok = true;
    for _ in 0..cfg.samples.min(6) {
        let dd = rng.below(3);
        let monos = monomials_of_degree(space, &xb, dd);
        let mut p = SuperPoly::zero(space);
        for mo in &monos {
            p.add_term(mo.clone(), Scalar::from_int(rng.int_in(-2, 2)));
        }
        let f = GaussianFunction::new(p, &xb, Rat::one());
        for plus in [true, false] {
            let once = fourier(space, &xb, &wb, &f, plus).unwrap();
            ok &= fourier(space, &xb, &wb, &once, !plus).unwrap() == f;
        }
        for i in 0..d.min(3) {
            let di = DiffOperator::lowered(space, &xb, i);
            let xi = SuperPoly::var(space, xb.start + i);
            for plus in [true, false] {
                let s = if plus { Scalar::i() } else { Scalar::i().neg() };
                ok &= fourier(space, &xb, &wb, &f.apply_op(&di), plus).unwrap()
                    == fourier(space, &xb, &wb, &f, plus).unwrap().mul_poly(&xi).scale(&s);
                ok &= fourier(space, &xb, &wb, &f.mul_poly(&xi), plus).unwrap()
                    == fourier(space, &xb, &wb, &f, plus).unwrap().apply_op(&di).scale(&s);
            }
        }
    }
    report.push(
        "transforms",
        &tag(m, n, "fourier"),
        "F^± F^∓ = id and the operator-exchange identities",
        ok,
        None,
    );
    let mut ok = true;
    let mut family2 = vec![GaussianFunction::new(SuperPoly::one(space), &xb, Rat::one())];
    for mo in monomials_of_degree(space, &xb, 1) {
        family2.push(GaussianFunction::new(
            SuperPoly::from_terms(space, [(mo, Scalar::one())]),
            &xb,
            Rat::one(),
        ));
    }
    for k in 0..dim.min(10) {
        let x = coords_unit(dim, k);
        let hat = reps.pi_hat(&x);
        let tilde_op = reps.pi_tilde(&x);
        for f in &family2 {
            let direct = f.apply_op(&hat);
            let through = fourier(
                space,
                &xb,
                &wb,
                &fourier(space, &xb, &wb, f, true).unwrap().apply_op(&tilde_op),
                false,
            )
            .unwrap();
            ok &= direct == through;
        }
    }
    report.push(
        "transforms",
        &tag(m, n, "pi_hat_conjugation"),
        "pi^ closed forms equal F^- pi~ F^+ on the Gaussian class",
        ok,
        None,
    );
}

fn suite_dims(cfg: &SuiteConfig, reps: &Reps, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let space = &reps.std;
    let bank = &reps.x;
    let mut ok = true;
    let mut summary = Vec::new();
    for k in 0..=cfg.degree_cap.min(4) {
        let cert = fischer_decompose(space, bank, k);
        ok &= cert.direct_sum_ok;
        summary.push(format!(
            "k={}: dim P_k = {}, {} summands{}",
            k,
            cert.dim_pk,
            cert.summands.len(),
            if cert.degenerate { " (generalised)" } else { "" }
        ));
    }
    report.push(
        "dims",
        &tag(m, n, "fischer_certificates"),
        "P_k decomposes directly into R^{k-l} (generalised) harmonics",
        ok,
        Some(summary.join("; ")),
    );
}

fn suite_gk(reps: &Reps, report: &mut Report) {
    let (m, n) = (reps.m(), reps.n());
    let k_max = (2 * n as u64 + 2).max(8);
    let gk = gk_growth(m, n, k_max);
    report.push(
        "gk",
        &tag(m, n, "growth"),
        "the two dimension counts agree and the growth exponent equals m",
        gk.methods_agree && gk.leading_exponent == Some(m),
        None,
    );
}

/// Parses a realisation tag name used by `verify --rep`.
pub fn rep_by_name(name: &str) -> Option<RepId> {
    match name {
        "pi_lambda" => Some(RepId::PiLambda(rat(-1, 2))),
        "pi_lambda_1" => Some(RepId::PiLambda(Rat::one())),
        "rho_lambda" => Some(RepId::RhoLambda(rat(-1, 2))),
        "pi_tilde" => Some(RepId::PiTilde),
        "rho_tilde" => Some(RepId::RhoTilde),
        "pi_hat" => Some(RepId::PiHat),
        "mu_star" => Some(RepId::MuStar(rat(1, 2))),
        "u_star" => Some(RepId::UStar(rat(1, 2))),
        _ => None,
    }
}

/// Homomorphism check for a single named realisation, as used by
/// `verify --rep`.
pub fn run_rep_check(
    config: &SuiteConfig,
    name: &str,
) -> Result<Report, ConfigError> {
    config.validate()?;
    let rep = rep_by_name(name).ok_or_else(|| ConfigError::UnknownSuite(name.to_string()))?;
    let mut report = Report::new(ReproBlock {
        seed: config.seed,
        grid: config.grid.clone(),
        degree_cap: config.degree_cap,
        samples: config.samples,
        suites: vec![format!("rep:{name}")],
        version: VERSION.to_string(),
    });
    for &(m, n) in &config.grid {
        let reps = Reps::new(m, n).expect("validated grid");
        let mut rng = SplitMix64::new(config.seed ^ ((m as u64) << 8) ^ (n as u64));
        let ok = match &rep {
            RepId::UStar(h) => reps.u_star_heisenberg_axioms(h),
            other => {
                let heavy = matches!(other, RepId::PiLambda(_) | RepId::RhoLambda(_));
                if reps.tkk.lie.dim() <= 20 && !heavy {
                    reps.homomorphism_on_basis(other)
                } else {
                    reps.homomorphism_random(other, &mut rng, config.samples.min(15))
                }
            }
        };
        report.push(
            "reps",
            &tag(m, n, name),
            "rep([X,Y]) = [rep(X), rep(Y)] as normal-form operators",
            ok,
            None,
        );
    }
    Ok(report)
}

/// The `vdim` table: one row per `(m, n, lambda)`.
pub fn vdim_table(grid: &[(usize, usize)]) -> Vec<(usize, usize, String, usize, usize, i64, i64)> {
    let mut rows = Vec::new();
    for &(m, n) in grid {
        let jordan = crate::algebra::JordanAlg::new(m, n).expect("valid grid");
        let mvs = crate::bessel::MatrixVarSpace::new(jordan);
        let big_m = m as i64 - 2 * n as i64;
        for (lambda, label) in [(Rat::one(), "1"), (rat(-1, 2), "-1/2"), (rat(2, 1), "2")] {
            let v = compute_v_lambda(&mvs, &lambda);
            let closed = match label {
                "1" => v1_sdim_closed(big_m),
                "-1/2" => v_half_sdim_closed(big_m),
                _ => 0,
            };
            rows.push((m, n, label.to_string(), v.dim_even(), v.dim_odd(), v.sdim(), closed));
        }
    }
    rows
}
