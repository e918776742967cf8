//! Minimal inverses of certified-minimal systems.
//!
//! Whether `1` lies in the left family `L` (span of the solution `s`) or the
//! right family `R` (span of `t = u A^{-1}`) decides the dimension of a
//! minimal system for `f^{-1}`:
//!
//! | `1 ∈ L` | `1 ∈ R` | form  | dimension |
//! |---------|---------|-------|-----------|
//! | yes     | yes     | `T11` | `n - 1`   |
//! | no      | yes     | `T10` | `n`       |
//! | yes     | no      | `T01` | `n`       |
//! | no      | no      | `T00` | `n + 1`   |
//!
//! The detectors bring a system to the matching canonical form by
//! admissible transformations: `v = λ e_n`, first column `e_1` (for `R`)
//! and last row `e_n` (for `L`), both without letters.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};

use crate::als::{Als, CertFlags, Membership, Pencil};
use crate::error::{Error, Result};
use crate::linalg::{KMatrix, Scalar};

/// The canonical form used to build an inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InverseType {
    /// `1 ∈ L` and `1 ∈ R`.
    T11,
    /// `1 ∉ L`, `1 ∈ R`.
    T10,
    /// `1 ∈ L`, `1 ∉ R`.
    T01,
    /// Neither; the standard inverse is minimal.
    T00,
    /// Dimension one with a scalar pencil: the element is a nonzero scalar.
    Scalar,
}

impl fmt::Display for InverseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InverseType::T11 => "T11",
            InverseType::T10 => "T10",
            InverseType::T01 => "T01",
            InverseType::T00 => "T00",
            InverseType::Scalar => "scalar",
        };
        f.write_str(s)
    }
}

/// A certified-minimal system for `f^{-1}` and the form it came from.
#[derive(Debug, Clone)]
pub struct MinimalInverse {
    pub als: Als,
    pub method: InverseType,
}

fn require_certified(f: &Als, op: &str) -> Result<()> {
    if !f.is_certified_minimal() {
        return Err(Error::NotCertified(format!(
            "{op} needs a system certified minimal; minimize it first or use the standard inverse"
        )));
    }
    Ok(())
}

fn set_flags(f: Als, left: Option<Membership>, right: Option<Membership>) -> Als {
    let c = f.cert();
    let cert = if c.is_minimal() {
        CertFlags::minimal_with(left.unwrap_or(c.one_in_left()), right.unwrap_or(c.one_in_right()))
    } else {
        c
    };
    f.with_cert(cert)
}

/// Row operations bringing `v` to `λ e_n` with `λ ≠ 0`.
pub fn normalize_v(f: &Als) -> Result<Als> {
    let n = f.dim();
    let v = f.v();
    let p = (0..n).find(|&i| !v[(i, 0)].is_zero()).ok_or(Error::InverseOfZero)?;
    let mut swap = KMatrix::identity(n);
    swap.swap_rows(p, n - 1);
    let sv = &swap * v;
    let lam = sv[(n - 1, 0)].clone();
    let mut elim = KMatrix::identity(n);
    for r in 0..n - 1 {
        if !sv[(r, 0)].is_zero() {
            elim[(r, n - 1)] = -(&sv[(r, 0)] / &lam);
        }
    }
    Ok(f.transform_unchecked(&(&elim * &swap), &KMatrix::identity(n)))
}

fn lambda(f: &Als) -> Scalar {
    f.v()[(f.dim() - 1, 0)].clone()
}

fn v_is_last_unit(f: &Als) -> bool {
    let n = f.dim();
    (0..n - 1).all(|i| f.v()[(i, 0)].is_zero()) && !f.v()[(n - 1, 0)].is_zero()
}

fn first_col_is_e1(a: &Pencil) -> bool {
    let n = a.dim();
    (0..n).all(|i| a.entry_is_scalar(i, 0)) && a.coeff(0).col(0) == KMatrix::unit_col(n, 0).col(0)
}

fn last_row_is_en(a: &Pencil) -> bool {
    let n = a.dim();
    (0..n).all(|j| a.entry_is_scalar(n - 1, j)) && a.coeff(0).row(n - 1) == KMatrix::unit_row(n, n - 1).row(0)
}

/// Candidate solutions: the particular one, then it shifted by each kernel vector.
fn candidates(m: &KMatrix, rhs: &KMatrix) -> Result<Vec<KMatrix>> {
    let Some(sol) = m.solve_affine(rhs)? else {
        return Ok(vec![]);
    };
    let mut out = vec![sol.particular.clone()];
    out.extend(sol.nullspace.iter().map(|k| &sol.particular + k));
    Ok(out)
}

/// Makes column 1 equal to `e_1` (no letters) while keeping `v = λ e_n`.
///
/// Adds `Σ μ_j col_j` (`j ∈ combine`) to column 1 so its letter parts vanish,
/// then reduces the scalar column with a pivot in `pivots` by row operations.
fn normalize_first_column(g: &Als, combine: &[usize], pivots: Range<usize>) -> Result<Option<Als>> {
    let n = g.dim();
    let a = g.pencil();
    let d = a.alphabet().len();
    let mut m = KMatrix::zeros(d * n, combine.len());
    let mut rhs = KMatrix::zeros(d * n, 1);
    for l in 1..=d {
        let c = a.coeff(l);
        for i in 0..n {
            let r = (l - 1) * n + i;
            for (k, &j) in combine.iter().enumerate() {
                m[(r, k)] = c[(i, j)].clone();
            }
            rhs[(r, 0)] = -c[(i, 0)].clone();
        }
    }
    for mu in candidates(&m, &rhs)? {
        let mut q = KMatrix::identity(n);
        for (k, &j) in combine.iter().enumerate() {
            q[(j, 0)] = mu[(k, 0)].clone();
        }
        let h = g.transform_unchecked(&KMatrix::identity(n), &q);
        let col = h.pencil().coeff(0).col(0);
        let Some(p) = pivots.clone().find(|&i| !col[i].is_zero()) else {
            continue;
        };
        let mut swap = KMatrix::identity(n);
        swap.swap_rows(p, 0);
        let c = &swap * &KMatrix::col_vector(col);
        let piv = c[(0, 0)].clone();
        let mut elim = KMatrix::identity(n);
        elim[(0, 0)] = piv.recip();
        for r in 1..n {
            if !c[(r, 0)].is_zero() {
                elim[(r, 0)] = -(&c[(r, 0)] / &piv);
            }
        }
        return Ok(Some(h.transform_unchecked(&(&elim * &swap), &KMatrix::identity(n))));
    }
    Ok(None)
}

/// Makes the last row equal to `e_n` (no letters) while keeping `v = λ e_n`.
///
/// Adds `Σ π_i row_i` (`i ∈ combine`) to the last row so its letter parts
/// vanish, then reduces the scalar row by column operations using a pivot
/// in `pivots`. Column 1 is never used as a pivot.
fn normalize_last_row(g: &Als, combine: &[usize], pivots: Range<usize>) -> Result<Option<Als>> {
    let n = g.dim();
    let a = g.pencil();
    let d = a.alphabet().len();
    let last = n - 1;
    let mut m = KMatrix::zeros(d * n, combine.len());
    let mut rhs = KMatrix::zeros(d * n, 1);
    for l in 1..=d {
        let c = a.coeff(l);
        for j in 0..n {
            let r = (l - 1) * n + j;
            for (k, &i) in combine.iter().enumerate() {
                m[(r, k)] = c[(i, j)].clone();
            }
            rhs[(r, 0)] = -c[(last, j)].clone();
        }
    }
    for pi in candidates(&m, &rhs)? {
        let mut p = KMatrix::identity(n);
        for (k, &i) in combine.iter().enumerate() {
            p[(last, i)] = pi[(k, 0)].clone();
        }
        let h = g.transform_unchecked(&p, &KMatrix::identity(n));
        let row = h.pencil().coeff(0).row(last).to_vec();
        let Some(k) = pivots.clone().find(|&j| !row[j].is_zero()) else {
            continue;
        };
        let mut swap = KMatrix::identity(n);
        swap.swap_cols(k, last);
        let r = &KMatrix::row_vector(row) * &swap;
        let piv = r[(0, last)].clone();
        let mut elim = KMatrix::identity(n);
        elim[(last, last)] = piv.recip();
        for j in 0..last {
            if !r[(0, j)].is_zero() {
                elim[(last, j)] = -(&r[(0, j)] / &piv);
            }
        }
        return Ok(Some(h.transform_unchecked(&KMatrix::identity(n), &(&swap * &elim))));
    }
    Ok(None)
}

/// Dimension-one systems: `1 ∈ L` and `1 ∈ R` both hold iff the element is a
/// scalar. Returns the normal form `([1], [1], [λ])` in that case.
fn scalar_form(f: &Als) -> Option<Als> {
    let a = f.pencil();
    if !a.is_constant() {
        return None;
    }
    let a0 = a.coeff(0)[(0, 0)].clone();
    let lam = &f.v()[(0, 0)] / &a0;
    Some(Als::scalar(a.alphabet(), &lam))
}

/// Detects `1 ∈ R(f)` and, if so, returns an equivalent system whose first
/// column is `e_1` and whose `v` is `λ e_n`. Flags `one_in_R` accordingly.
pub fn detect_and_normalize_right(f: &Als) -> Result<Option<Als>> {
    require_certified(f, "detecting 1 in the right family")?;
    match f.dim() {
        0 => Err(Error::InverseOfZero),
        1 => Ok(scalar_form(f)),
        n => {
            let g = normalize_v(f)?;
            let combine: Vec<usize> = (1..n).collect();
            Ok(normalize_first_column(&g, &combine, 0..n - 1)?.map(|h| set_flags(h, None, Some(Membership::Yes))))
        }
    }
}

/// Detects `1 ∈ L(f)` and, if so, returns an equivalent system whose last
/// row is `e_n` and whose `v` is `λ e_n`. Flags `one_in_L` accordingly.
pub fn detect_and_normalize_left(f: &Als) -> Result<Option<Als>> {
    require_certified(f, "detecting 1 in the left family")?;
    match f.dim() {
        0 => Err(Error::InverseOfZero),
        1 => Ok(scalar_form(f)),
        n => {
            let g = normalize_v(f)?;
            let combine: Vec<usize> = (0..n - 1).collect();
            Ok(normalize_last_row(&g, &combine, 1..n)?.map(|h| set_flags(h, Some(Membership::Yes), None)))
        }
    }
}

/// Both forms at once, for systems with `1 ∈ L` and `1 ∈ R`.
fn normalize_both(f: &Als) -> Result<Option<Als>> {
    let n = f.dim();
    let inner: Vec<usize> = (1..n - 1).collect();
    if let Some(r) = detect_and_normalize_right(f)? {
        // column 1 is e_1: leave row 1 and column 1 alone
        if let Some(h) = normalize_last_row(&r, &inner, 1..n)? {
            return Ok(Some(h));
        }
    }
    if let Some(l) = detect_and_normalize_left(f)? {
        // last row is e_n: leave the last row and column alone
        if let Some(h) = normalize_first_column(&l, &inner, 0..n - 1)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Determines `1 ∈ L` and `1 ∈ R` for a certified-minimal system and
/// records the answers in its flags. The system itself is unchanged.
pub fn detect_families(f: &Als) -> Result<Als> {
    if f.is_empty() {
        return Ok(f.clone());
    }
    let left = detect_and_normalize_left(f)?.is_some();
    let right = detect_and_normalize_right(f)?.is_some();
    Ok(set_flags(f.clone(), Some(Membership::from_bool(left)), Some(Membership::from_bool(right))))
}

struct Blocks {
    n: usize,
    lam: Scalar,
}

impl Blocks {
    fn check(f: &Als, first_col: bool, last_row: bool, what: &str) -> Result<Blocks> {
        require_certified(f, what)?;
        let n = f.dim();
        if n < 2 {
            return Err(Error::FormMismatch(format!("{what} needs dimension at least 2")));
        }
        let a = f.pencil();
        if !v_is_last_unit(f) || (first_col && !first_col_is_e1(a)) || (last_row && !last_row_is_en(a)) {
            return Err(Error::FormMismatch(format!("system is not in the form required by {what}")));
        }
        Ok(Blocks { n, lam: lambda(f) })
    }
}

/// `-Σ M Σ` for the square block `rows x cols` at `(r0, c0)`, reversing both axes.
fn neg_reversed(m: &KMatrix, r0: usize, c0: usize, rows: usize, cols: usize) -> KMatrix {
    let b = m.submatrix(r0, c0, rows, cols);
    -&(&(&KMatrix::reversal(rows) * &b) * &KMatrix::reversal(cols))
}

/// Inverse of a system in form `T11`:
/// `[[1, b', b], [0, B, b''], [0, 0, 1]]`, `v = λ e_n` gives the dimension
/// `n - 1` system `[[-λ Σ b'', -Σ B Σ], [-λ b, -b' Σ]]`, `v = e_{n-1}`.
pub fn inverse_t11(f: &Als) -> Result<Als> {
    let Blocks { n, lam } = Blocks::check(f, true, true, "the (1,1) inverse")?;
    let k = n - 2;
    let a = f.pencil().map(|m| {
        let mut out = KMatrix::zeros(n - 1, n - 1);
        out.set_block(0, 0, &neg_reversed(m, 1, n - 1, k, 1).scale(&lam));
        out.set_block(0, 1, &neg_reversed(m, 1, 1, k, k));
        out[(k, 0)] = -(&lam * &m[(0, n - 1)]);
        out.set_block(k, 1, &neg_reversed(m, 0, 1, 1, k));
        out
    });
    let g = Als::new(a, KMatrix::unit_col(n - 1, n - 2))?;
    Ok(g.with_cert(CertFlags::minimal_with(Membership::No, Membership::No)))
}

/// Inverse of a system in form `T10` with `1 ∉ L`:
/// `[[1, b', b], [0, B, b''], [0, c', c]]`, `v = λ e_n` gives
/// `[[1, -c/λ, -c'Σ/λ], [0, -Σ b'', -Σ B Σ], [0, -b, -b' Σ]]`, `v = e_n`.
pub fn inverse_t10(f: &Als) -> Result<Als> {
    let Blocks { n, lam } = Blocks::check(f, true, false, "the (1,0) inverse")?;
    if f.cert().one_in_left() == Membership::Yes {
        return Err(Error::FormMismatch("the (1,0) inverse needs 1 outside the left family".into()));
    }
    let k = n - 2;
    let inv_lam = lam.recip();
    let mut a = f.pencil().map(|m| {
        let mut out = KMatrix::zeros(n, n);
        out[(0, 1)] = -(&m[(n - 1, n - 1)] * &inv_lam);
        out.set_block(0, 2, &neg_reversed(m, n - 1, 1, 1, k).scale(&inv_lam));
        out.set_block(1, 1, &neg_reversed(m, 1, n - 1, k, 1));
        out.set_block(1, 2, &neg_reversed(m, 1, 1, k, k));
        out[(n - 1, 1)] = -m[(0, n - 1)].clone();
        out.set_block(n - 1, 2, &neg_reversed(m, 0, 1, 1, k));
        out
    });
    a.coeff_mut(0)[(0, 0)] = Scalar::one();
    let g = Als::new(a, KMatrix::unit_col(n, n - 1))?;
    Ok(g.with_cert(CertFlags::minimal_with(Membership::No, Membership::Yes)))
}

/// Inverse of a system in form `T01` with `1 ∉ R`:
/// `[[a, b', b], [a', B, b''], [0, 0, 1]]`, `v = λ e_n` gives
/// `[[-λ Σ b'', -Σ B Σ, -Σ a'], [-λ b, -b' Σ, -a], [0, 0, 1]]`, `v = e_n`.
pub fn inverse_t01(f: &Als) -> Result<Als> {
    let Blocks { n, lam } = Blocks::check(f, false, true, "the (0,1) inverse")?;
    if f.cert().one_in_right() == Membership::Yes {
        return Err(Error::FormMismatch("the (0,1) inverse needs 1 outside the right family".into()));
    }
    let k = n - 2;
    let mut a = f.pencil().map(|m| {
        let mut out = KMatrix::zeros(n, n);
        out.set_block(0, 0, &neg_reversed(m, 1, n - 1, k, 1).scale(&lam));
        out.set_block(0, 1, &neg_reversed(m, 1, 1, k, k));
        out.set_block(0, n - 1, &neg_reversed(m, 1, 0, k, 1));
        out[(k, 0)] = -(&lam * &m[(0, n - 1)]);
        out.set_block(k, 1, &neg_reversed(m, 0, 1, 1, k));
        out[(k, n - 1)] = -m[(0, 0)].clone();
        out
    });
    a.coeff_mut(0)[(n - 1, n - 1)] = Scalar::one();
    let g = Als::new(a, KMatrix::unit_col(n, n - 1))?;
    Ok(g.with_cert(CertFlags::minimal_with(Membership::Yes, Membership::No)))
}

/// A certified-minimal system for `f^{-1}`, choosing the form from the
/// membership of `1` in the left and right families of `f`.
pub fn minimal_inverse(f: &Als) -> Result<MinimalInverse> {
    if f.is_empty() {
        return Err(Error::InverseOfZero);
    }
    require_certified(f, "the minimal inverse")?;
    let ab = f.alphabet();
    if f.dim() == 1 {
        if let Some(s) = scalar_form(f) {
            let als = Als::scalar(ab, &lambda(&s).recip());
            return Ok(MinimalInverse { als, method: InverseType::Scalar });
        }
        let als = f.std_inverse()?.with_cert(CertFlags::minimal_with(Membership::Yes, Membership::Yes));
        return Ok(MinimalInverse { als, method: InverseType::T00 });
    }
    let right = detect_and_normalize_right(f)?;
    let left = detect_and_normalize_left(f)?;
    let (als, method) = match (left, right) {
        (Some(_), Some(_)) => {
            let g = normalize_both(f)?
                .ok_or_else(|| Error::FormMismatch("1 lies in both families but no joint form was found".into()))?;
            (inverse_t11(&g)?, InverseType::T11)
        }
        (None, Some(r)) => (inverse_t10(&set_flags(r, Some(Membership::No), None))?, InverseType::T10),
        (Some(l), None) => (inverse_t01(&set_flags(l, None, Some(Membership::No)))?, InverseType::T01),
        (None, None) => {
            // a standard inverse always has 1 in both families
            let g = f.std_inverse()?.with_cert(CertFlags::minimal_with(Membership::Yes, Membership::Yes));
            (g, InverseType::T00)
        }
    };
    Ok(MinimalInverse { als, method })
}
