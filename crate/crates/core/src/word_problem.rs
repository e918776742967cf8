//! Deciding `f = g`.
//!
//! Two systems represent the same element if there are scalar matrices
//! `T, U` with `u_f U = 0`, `T A_g - A_f U = A_f u_fᵀ u_g` and `T v_g = v_f`.
//! Finding them is a linear problem. For minimal systems of equal
//! dimension the condition is also necessary; for arbitrary systems only
//! a found solution is conclusive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::als::{Als, Assignment, Linearization, Pencil};
use crate::error::{Error, Result};
use crate::expr::{compile, CompileOptions, Expr};
use crate::linalg::{int, KMatrix};

/// The linear system for `(T, U)`.
///
/// Unknowns are the entries of `T` (row-major) followed by those of `U`.
/// For each pencil coefficient `ℓ = 0..=d` there is an `n_f x (n_g + 1)`
/// block of equations: `(T (A_g)_ℓ - (A_f)_ℓ U)_{ij} = ((A_f)_ℓ)_{i1} [j = 1]`
/// for `j ≤ n_g` and `(T (v_g)_ℓ)_i = ((v_f)_ℓ)_i` in the last column, where
/// `v` only has a constant part. The condition `u_f U = 0` pins the first
/// row of `U` to zero and is not counted as equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuSystem {
    pub n_f: usize,
    pub n_g: usize,
    pub matrix: KMatrix,
    pub rhs: KMatrix,
    /// Unknowns fixed to zero.
    pub pinned: Vec<usize>,
}

impl TuSystem {
    pub fn equations(&self) -> usize {
        self.matrix.rows()
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    fn t_index(&self, i: usize, j: usize) -> usize {
        i * self.n_g + j
    }

    fn u_index(&self, i: usize, j: usize) -> usize {
        self.n_f * self.n_g + i * self.n_g + j
    }

    /// One solution `(T, U)`, or `None` if the system is inconsistent.
    pub fn solve(&self) -> Result<Option<(KMatrix, KMatrix)>> {
        let free: Vec<usize> = (0..self.unknowns()).filter(|c| !self.pinned.contains(c)).collect();
        let reduced = self.matrix.select_cols(&free);
        let Some(sol) = reduced.solve_affine(&self.rhs)? else {
            return Ok(None);
        };
        let mut t = KMatrix::zeros(self.n_f, self.n_g);
        let mut u = KMatrix::zeros(self.n_f, self.n_g);
        let half = self.n_f * self.n_g;
        for (k, &c) in free.iter().enumerate() {
            let x = sol.particular[(k, 0)].clone();
            if c < half {
                t[(c / self.n_g, c % self.n_g)] = x;
            } else {
                let c = c - half;
                u[(c / self.n_g, c % self.n_g)] = x;
            }
        }
        Ok(Some((t, u)))
    }
}

/// Sets up the `(T, U)` system for the orientation `(f, g)`.
pub fn build_tu_system(f: &Als, g: &Als) -> Result<TuSystem> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: f.alphabet().letters().to_vec(),
            right: g.alphabet().letters().to_vec(),
        });
    }
    if f.is_empty() || g.is_empty() {
        return Err(Error::EmptySystem);
    }
    let (nf, ng) = (f.dim(), g.dim());
    let layers = f.alphabet().len() + 1;
    let block = nf * (ng + 1);
    let mut sys = TuSystem {
        n_f: nf,
        n_g: ng,
        matrix: KMatrix::zeros(layers * block, 2 * nf * ng),
        rhs: KMatrix::zeros(layers * block, 1),
        pinned: (0..ng).map(|j| nf * ng + j).collect(),
    };
    for l in 0..layers {
        let af = f.pencil().coeff(l);
        let ag = g.pencil().coeff(l);
        for i in 0..nf {
            for j in 0..ng {
                let row = l * block + i * (ng + 1) + j;
                for k in 0..ng {
                    let c = sys.t_index(i, k);
                    sys.matrix[(row, c)] = ag[(k, j)].clone();
                }
                for k in 0..nf {
                    let c = sys.u_index(k, j);
                    sys.matrix[(row, c)] = -af[(i, k)].clone();
                }
                if j == 0 {
                    sys.rhs[(row, 0)] = af[(i, 0)].clone();
                }
            }
            if l == 0 {
                let row = i * (ng + 1) + ng;
                for k in 0..ng {
                    let c = sys.t_index(i, k);
                    sys.matrix[(row, c)] = g.v()[(k, 0)].clone();
                }
                sys.rhs[(row, 0)] = f.v()[(i, 0)].clone();
            }
        }
    }
    Ok(sys)
}

/// Checks the three defining equations for `(T, U)` exactly.
pub fn verify_certificate(f: &Als, g: &Als, t: &KMatrix, u: &KMatrix) -> bool {
    let (nf, ng) = (f.dim(), g.dim());
    if (t.rows(), t.cols(), u.rows(), u.cols()) != (nf, ng, nf, ng) || f.alphabet() != g.alphabet() {
        return false;
    }
    if nf == 0 || ng == 0 {
        return f.v().is_zero() && g.v().is_zero();
    }
    if !u.submatrix(0, 0, 1, ng).is_zero() || &(t * g.v()) != f.v() {
        return false;
    }
    let e = &f.u().transpose() * &g.u();
    (0..=f.alphabet().len()).all(|l| {
        let af = f.pencil().coeff(l);
        &(t * g.pencil().coeff(l)) - &(af * u) == af * &e
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Equal,
    NotEqual,
    Inconclusive,
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Solvability of the `(T, U)` system for minimal systems.
    Theorem,
    /// A `(T, U)` solution for systems not known to be minimal.
    PositiveTest,
    /// Differing evaluations at a matrix point.
    Witness,
    /// Minimal dimensions differ.
    Rank,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Theorem => "theorem",
            Method::PositiveTest => "positive_test",
            Method::Witness => "witness",
            Method::Rank => "rank",
        }
    }
}

/// Evidence backing a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `(T, U)` for the orientation `(f, g)`, or `(g, f)` when `swapped`.
    Transformation {
        t: KMatrix,
        u: KMatrix,
        swapped: bool,
    },
    RankMismatch {
        left: usize,
        right: usize,
    },
    /// The `(T, U)` system of two minimal systems has no solution.
    NoTransformation,
    Witness {
        point: Assignment,
        left: KMatrix,
        right: KMatrix,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub method: Option<Method>,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn inconclusive() -> Self {
        Verdict { kind: VerdictKind::Inconclusive, method: None, certificate: None }
    }

    fn equal(method: Method, certificate: Certificate) -> Self {
        Verdict { kind: VerdictKind::Equal, method: Some(method), certificate: Some(certificate) }
    }

    fn not_equal(method: Method, certificate: Certificate) -> Self {
        Verdict { kind: VerdictKind::NotEqual, method: Some(method), certificate: Some(certificate) }
    }

    pub fn is_equal(&self) -> bool {
        self.kind == VerdictKind::Equal
    }

    pub fn is_not_equal(&self) -> bool {
        self.kind == VerdictKind::NotEqual
    }
}

fn empty_transformation(f: &Als, g: &Als, swapped: bool) -> Certificate {
    Certificate::Transformation { t: KMatrix::zeros(f.dim(), g.dim()), u: KMatrix::zeros(f.dim(), g.dim()), swapped }
}

/// Tries the orientation `(f, g)`, then `(g, f)`. A solution proves
/// equality; failure of both proves nothing.
pub fn positive_test(f: &Als, g: &Als) -> Result<Verdict> {
    let (f, g) = Als::align(f, g)?;
    // an empty system is zero; the other side is then zero if its v vanishes
    if f.is_empty() || g.is_empty() {
        if f.v().is_zero() && g.v().is_zero() {
            let swapped = f.is_empty() && !g.is_empty();
            let cert = if swapped { empty_transformation(&g, &f, true) } else { empty_transformation(&f, &g, false) };
            return Ok(Verdict::equal(Method::PositiveTest, cert));
        }
        return Ok(Verdict::inconclusive());
    }
    for (a, b, swapped) in [(&f, &g, false), (&g, &f, true)] {
        if let Some((t, u)) = build_tu_system(a, b)?.solve()? {
            return Ok(Verdict::equal(Method::PositiveTest, Certificate::Transformation { t, u, swapped }));
        }
    }
    Ok(Verdict::inconclusive())
}

/// Decides equality of two systems certified minimal.
pub fn decide_equal(f: &Als, g: &Als) -> Result<Verdict> {
    if !f.is_certified_minimal() || !g.is_certified_minimal() {
        return Err(Error::NotCertified(
            "deciding equality needs two systems certified minimal; use the equality pipeline for others".into(),
        ));
    }
    let (f, g) = Als::align(f, g)?;
    if f.dim() != g.dim() {
        return Ok(Verdict::not_equal(Method::Rank, Certificate::RankMismatch { left: f.dim(), right: g.dim() }));
    }
    if f.is_empty() {
        return Ok(Verdict::equal(Method::Theorem, empty_transformation(&f, &g, false)));
    }
    match build_tu_system(&f, &g)?.solve()? {
        Some((t, u)) => Ok(Verdict::equal(Method::Theorem, Certificate::Transformation { t, u, swapped: false })),
        None => Ok(Verdict::not_equal(Method::Theorem, Certificate::NoTransformation)),
    }
}

/// The linearization `[[0, u_f, u_g], [v_f, A_f, 0], [v_g, 0, -A_g]]` of size
/// `n_f + n_g + 1`. Its Schur complement is `g - f`, so it is full iff `f ≠ g`.
pub fn difference_linearization(f: &Als, g: &Als) -> Result<Linearization> {
    let (f, g) = Als::align(f, g)?;
    let (nf, ng) = (f.dim(), g.dim());
    let m = nf + ng + 1;
    let coeffs = (0..=f.alphabet().len())
        .map(|l| {
            let mut out = KMatrix::zeros(m, m);
            out.set_block(1, 1, f.pencil().coeff(l));
            out.set_block(1 + nf, 1 + nf, &-g.pencil().coeff(l));
            if l == 0 {
                if nf > 0 {
                    out[(0, 1)] = int(1);
                    out.set_block(1, 0, f.v());
                }
                if ng > 0 {
                    out[(0, 1 + nf)] = int(1);
                    out.set_block(1 + nf, 0, g.v());
                }
            }
            out
        })
        .collect();
    Linearization::new(Pencil::new(f.alphabet(), coeffs)?)
}

/// Certifies `h` minimal from a certified-minimal `g` with `g = h^{-1}` and
/// `dim h = dim g - 1`: since `rank(h^{-1}) ≤ rank(h) + 1`, no smaller
/// system for `h` can exist. Returns `None` if equality is not confirmed.
pub fn certify_by_inverse(h: &Als, g: &Als) -> Result<Option<Als>> {
    if !g.is_certified_minimal() || h.is_empty() || h.dim() + 1 != g.dim() {
        return Ok(None);
    }
    if positive_test(&h.std_inverse()?, g)?.is_equal() {
        return Ok(Some(h.clone().with_cert(crate::als::CertFlags::MINIMAL)));
    }
    Ok(None)
}

/// Settings for [`equality_pipeline`].
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub seed: u64,
    pub trials: usize,
    /// Resamples allowed per trial when a pencil is singular at the point.
    pub retries: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { seed: 0, trials: 20, retries: 20 }
    }
}

/// Random integer matrix with entries in `-3..=3`.
pub fn random_matrix(rng: &mut impl Rng, size: usize) -> KMatrix {
    let data = (0..size * size).map(|_| int(rng.gen_range(-3..=3))).collect();
    KMatrix::from_vec(size, size, data).expect("size matches")
}

/// Looks for a matrix point where both systems are defined and differ.
///
/// Trial `k` uses matrices of size 2 (even `k`) or 3 (odd `k`), drawn from
/// a generator seeded with `seed` on stream `k`.
pub fn find_witness(f: &Als, g: &Als, opts: &PipelineOptions) -> Result<Option<Certificate>> {
    let (f, g) = Als::align(f, g)?;
    for trial in 0..opts.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(trial as u64);
        let size = if trial % 2 == 0 { 2 } else { 3 };
        for _ in 0..opts.retries.max(1) {
            let point: Assignment =
                f.alphabet().letters().iter().map(|l| (l.clone(), random_matrix(&mut rng, size))).collect();
            let (Some(a), Some(b)) = (f.eval_at_matrices(&point)?, g.eval_at_matrices(&point)?) else {
                continue;
            };
            if a != b {
                return Ok(Some(Certificate::Witness { point, left: a, right: b }));
            }
            break;
        }
    }
    Ok(None)
}

/// Full equality check of two expressions.
///
/// Compiles both sides with minimization. If both come out certified
/// minimal the answer is decided exactly. Otherwise a `(T, U)` solution is
/// searched, also on the plain (unminimized) constructions, and finally
/// random matrix points are tried for a witness of inequality.
pub fn equality_pipeline(e1: &Expr, e2: &Expr, opts: &PipelineOptions) -> Result<Verdict> {
    let ab = e1.alphabet()?.union(&e2.alphabet()?);
    let certify = CompileOptions { minimize: true, alphabet: Some(ab.clone()) };
    let f = compile(e1, &certify)?;
    let g = compile(e2, &certify)?;
    if f.is_certified_minimal() && g.is_certified_minimal() {
        return decide_equal(&f, &g);
    }
    let v = positive_test(&f, &g)?;
    if v.is_equal() {
        return Ok(v);
    }
    let plain = CompileOptions { minimize: false, alphabet: Some(ab) };
    let (fp, gp) = (compile(e1, &plain)?, compile(e2, &plain)?);
    let v = positive_test(&fp, &gp)?;
    if v.is_equal() {
        return Ok(v);
    }
    witness_verdict(&f, &g, opts)
}

/// Equality check of two given systems: exact when both are certified
/// minimal, otherwise a `(T, U)` search followed by a witness search.
pub fn compare_systems(f: &Als, g: &Als, opts: &PipelineOptions) -> Result<Verdict> {
    if f.is_certified_minimal() && g.is_certified_minimal() {
        return decide_equal(f, g);
    }
    let v = positive_test(f, g)?;
    if v.is_equal() {
        return Ok(v);
    }
    witness_verdict(f, g, opts)
}

fn witness_verdict(f: &Als, g: &Als, opts: &PipelineOptions) -> Result<Verdict> {
    match find_witness(f, g, opts)? {
        Some(w) => Ok(Verdict::not_equal(Method::Witness, w)),
        None => Ok(Verdict::inconclusive()),
    }
}
