//! Regular elements: those whose system has an invertible constant part.
//!
//! A regular element is a recognizable series `Σ (f, w) w` with
//! `(f, w) = α μ(w) β`. This module converts systems to proper form
//! `s = v + Qs`, reads off coefficients, builds Hankel slices and the
//! controllability/observability families, and minimizes.

use num_traits::{One, Zero};

use crate::als::{Alphabet, Als, CertFlags, Pencil, Word};
use crate::error::{Error, Result};
use crate::linalg::{KMatrix, Scalar, SpanBasis};

/// A proper linear system `s = v + Qs` with `u = e_1`; `Q` has no constant part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pls {
    q: Pencil,
    v: KMatrix,
}

impl Pls {
    /// Builds a proper system; the constant part of `q` must vanish.
    pub fn new(q: Pencil, v: KMatrix) -> Result<Self> {
        if !q.coeff(0).is_zero() {
            return Err(Error::InvalidArgument("a proper linear system has no constant part".into()));
        }
        if v.rows() != q.dim() || v.cols() != 1 {
            return Err(Error::DimensionMismatch("v does not match Q".into()));
        }
        Ok(Pls { q, v })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.q.alphabet()
    }

    pub fn q(&self) -> &Pencil {
        &self.q
    }

    pub fn v(&self) -> &KMatrix {
        &self.v
    }

    /// `μ(x)` for the letter with 0-based index `letter`.
    pub fn transition(&self, letter: usize) -> &KMatrix {
        self.q.coeff(letter + 1)
    }

    /// `e_1 μ(w)` as a row.
    pub fn row_for(&self, word: &[usize]) -> Vec<Scalar> {
        let mut r: Vec<Scalar> = (0..self.dim()).map(|i| if i == 0 { Scalar::one() } else { Scalar::zero() }).collect();
        for &l in word {
            r = row_times(&r, self.transition(l));
        }
        r
    }

    /// `μ(w) v` as a column.
    pub fn col_for(&self, word: &[usize]) -> Vec<Scalar> {
        let mut c = self.v.col(0);
        for &l in word.iter().rev() {
            c = mat_times(self.transition(l), &c);
        }
        c
    }

    /// The coefficient `(f, w) = e_1 μ(w) v`.
    pub fn coeff(&self, word: &[usize]) -> Result<Scalar> {
        if let Some(&bad) = word.iter().find(|&&l| l >= self.alphabet().len()) {
            return Err(Error::UnknownLetter(format!("#{bad}")));
        }
        if self.dim() == 0 {
            return Ok(Scalar::zero());
        }
        Ok(dot(&self.row_for(word), &self.v.col(0)))
    }

    /// The admissible system `(e_1, I - Q, v)`.
    pub fn to_als(&self) -> Als {
        let n = self.dim();
        let a = self.q.map(|c| -c);
        let mut a = a;
        *a.coeff_mut(0) = KMatrix::identity(n);
        Als::new(a, self.v.clone()).expect("dimensions agree by construction")
    }
}

pub(crate) fn row_times(r: &[Scalar], m: &KMatrix) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); m.cols()];
    for (i, ri) in r.iter().enumerate() {
        if ri.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let e = &m[(i, j)];
            if !e.is_zero() {
                *o += ri * e;
            }
        }
    }
    out
}

pub(crate) fn mat_times(m: &KMatrix, c: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows()).map(|i| dot(m.row(i), c)).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// True iff the constant coefficient matrix is invertible. The empty system is regular.
pub fn is_regular(f: &Als) -> bool {
    f.is_empty() || f.pencil().coeff(0).rank() == f.dim()
}

/// Multiplies the system by `A_0^{-1}` from the left: `Q = -A_0^{-1} A_ℓ`, `v' = A_0^{-1} v`.
pub fn to_pls(f: &Als) -> Result<Pls> {
    let a = f.pencil();
    let n = f.dim();
    let inv = if n == 0 { KMatrix::identity(0) } else { a.coeff(0).invert()?.ok_or(Error::NotRegular)? };
    let mut q = a.map(|c| -&(&inv * c));
    *q.coeff_mut(0) = KMatrix::zeros(n, n);
    Pls::new(q, &inv * f.v())
}

/// Coefficient of a word in a regular element.
pub fn coeff(f: &Als, word: &[usize]) -> Result<Scalar> {
    to_pls(f)?.coeff(word)
}

/// Breadth-first closure of `start` under the maps `step(·, letter)`.
/// Returns the words whose vectors were independent of all earlier ones,
/// with those vectors. Extensions of dependent words are never explored.
fn closure(
    start: Vec<Scalar>,
    letters: usize,
    mut step: impl FnMut(&[Scalar], usize) -> Vec<Scalar>,
) -> (Vec<Word>, Vec<Vec<Scalar>>) {
    let mut basis = SpanBasis::new(start.len());
    let mut words = Vec::new();
    let mut vecs = Vec::new();
    if !basis.insert(&start) {
        return (words, vecs);
    }
    words.push(vec![]);
    vecs.push(start);
    let mut next = 0;
    while next < vecs.len() && !basis.is_full() {
        for l in 0..letters {
            let w = step(&vecs[next], l);
            if basis.insert(&w) {
                let mut word = words[next].clone();
                word.push(l);
                words.push(word);
                vecs.push(w);
            }
        }
        next += 1;
    }
    (words, vecs)
}

/// Controllability and observability families of a proper system,
/// truncated to a spanning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Families {
    /// Columns `μ(w) v`, one per entry of `ctrl_words`.
    pub ctrl: KMatrix,
    pub ctrl_words: Vec<Word>,
    /// Rows `e_1 μ(w)`, one per entry of `obs_words`.
    pub obs: KMatrix,
    pub obs_words: Vec<Word>,
}

/// Generates both families breadth-first, keeping only words that raise the
/// rank. Every kept word has length at most `n - 1`.
pub fn truncated_families(p: &Pls) -> Families {
    let n = p.dim();
    let d = p.alphabet().len();
    if n == 0 {
        return Families {
            ctrl: KMatrix::zeros(0, 0),
            ctrl_words: vec![],
            obs: KMatrix::zeros(0, 0),
            obs_words: vec![],
        };
    }
    let (ctrl_words, cols) = closure(p.v.col(0), d, |c, l| mat_times(p.transition(l), c));
    let (obs_words, rows) = closure(p.row_for(&[]), d, |r, l| row_times(r, p.transition(l)));
    let ctrl = KMatrix::from_rows(cols).map(|m| m.transpose()).unwrap_or_else(|_| KMatrix::zeros(n, 0));
    let obs = KMatrix::from_rows(rows).unwrap_or_else(|_| KMatrix::zeros(0, n));
    Families { ctrl, ctrl_words, obs, obs_words }
}

fn stack_rows(rows: &[Vec<Scalar>], width: usize) -> KMatrix {
    if rows.is_empty() {
        return KMatrix::zeros(0, width);
    }
    KMatrix::from_rows(rows.to_vec()).expect("rows have equal length")
}

/// Minimal system for a regular element, certified minimal.
///
/// Restricts to the observable quotient (span of the rows `e_1 μ(w)`), then
/// to the reachable subspace of that (span of the columns `μ'(w) β'`), and
/// finally changes basis so that the reduced `α` becomes `e_1`. The
/// resulting dimension is the Hankel rank.
pub fn minimize_regular(f: &Als) -> Result<Als> {
    let p = to_pls(f)?;
    let ab = f.alphabet().clone();
    let n = p.dim();
    let d = ab.len();
    if n == 0 {
        return Ok(Als::zero(&ab));
    }

    // observable pass: W μ(x) = M_x W
    let (_, w_rows) = closure(p.row_for(&[]), d, |r, l| row_times(r, p.transition(l)));
    let w = stack_rows(&w_rows, n);
    let piv = w.rref().pivots;
    let wp_inv = w.select_cols(&piv).invert()?.expect("basis rows restricted to pivot columns are invertible");
    let m: Vec<KMatrix> = (0..d).map(|l| &(&w * p.transition(l)).select_cols(&piv) * &wp_inv).collect();
    let beta = &w * p.v();
    if beta.is_zero() {
        return Ok(Als::zero(&ab));
    }
    // α is the first closure vector, so its coordinates are e_1
    let r = w.rows();

    // reachable pass: M_x V = V N_x
    let (_, v_cols) = closure(beta.col(0), d, |c, l| mat_times(&m[l], c));
    let v = stack_rows(&v_cols, r).transpose();
    let piv = v.transpose().rref().pivots;
    let vp_inv = v.select_rows(&piv).invert()?.expect("basis columns restricted to pivot rows are invertible");
    let nmat: Vec<KMatrix> = m.iter().map(|mx| &vp_inv * &(mx * &v).select_rows(&piv)).collect();
    let k = v.cols();
    let alpha = KMatrix::unit_row(r, 0).try_mul(&v)?;
    // β is the first closure vector, so its coordinates are e_1
    let beta = KMatrix::unit_col(k, 0);

    // normalize α to e_1: μ ↦ R μ R^{-1}, β ↦ R β with first row of R equal to α
    let rmat = KMatrix::completion_with_first_row(&alpha)?;
    let rinv = rmat.invert()?.expect("completion is invertible");
    let mut q = Pencil::zero(&ab, k);
    for (l, nx) in nmat.iter().enumerate() {
        *q.coeff_mut(l + 1) = &(&rmat * nx) * &rinv;
    }
    let out = Pls::new(q, &rmat * &beta)?.to_als();
    Ok(out.with_cert(CertFlags::MINIMAL))
}

/// True iff the regular element is zero: every observable row annihilates `v`.
pub fn is_zero_regular(f: &Als) -> Result<bool> {
    let p = to_pls(f)?;
    if p.dim() == 0 {
        return Ok(true);
    }
    let (_, rows) = closure(p.row_for(&[]), p.alphabet().len(), |r, l| row_times(r, p.transition(l)));
    let v = p.v.col(0);
    Ok(rows.iter().all(|r| dot(r, &v).is_zero()))
}

/// True iff the regular element is a polynomial, i.e. the transition
/// matrices of a minimal representation generate a nilpotent algebra.
pub fn is_polynomial(f: &Als) -> Result<bool> {
    let min = minimize_regular(f)?;
    let p = to_pls(&min)?;
    let n = p.dim();
    if n == 0 {
        return Ok(true);
    }
    // S_0 = K^n, S_{k+1} = Σ_x μ(x) S_k; nilpotent iff S_n = 0
    let mut span = KMatrix::identity(n);
    for _ in 0..n {
        let mut basis = SpanBasis::new(n);
        let mut cols = Vec::new();
        for l in 0..p.alphabet().len() {
            let img = p.transition(l) * &span;
            for j in 0..img.cols() {
                let c = img.col(j);
                if basis.insert(&c) {
                    cols.push(c);
                }
            }
        }
        if cols.is_empty() {
            return Ok(true);
        }
        span = stack_rows(&cols, n).transpose();
    }
    Ok(false)
}

/// A finite section of the Hankel matrix: rows and columns indexed by words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelSlice {
    pub row_words: Vec<Word>,
    pub col_words: Vec<Word>,
    /// `entries[i][j] = (f, row_words[i] · col_words[j])`.
    pub entries: KMatrix,
}

/// The Hankel section over all words of length at most `max_len` on both axes.
pub fn hankel_slice(f: &Als, max_len: usize) -> Result<HankelSlice> {
    let p = to_pls(f)?;
    let words = f.alphabet().words_up_to(max_len);
    let rows: Vec<Vec<Scalar>> = words.iter().map(|w| p.row_for(w)).collect();
    let cols: Vec<Vec<Scalar>> = words.iter().map(|w| p.col_for(w)).collect();
    let mut entries = KMatrix::zeros(words.len(), words.len());
    if p.dim() > 0 {
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                entries[(i, j)] = dot(r, c);
            }
        }
    }
    Ok(HankelSlice { row_words: words.clone(), col_words: words, entries })
}

/// Rank of the Hankel section over words of length at most `max_len`.
/// For `max_len ≥ dim(f) - 1` this is the rank of the element.
///
/// Rows of the section factor as `e_1 μ(w)` times a fixed matrix, so the
/// rank is attained on words whose row vectors are independent, and
/// likewise for columns. Only that square part is reduced.
pub fn hankel_rank(f: &Als, max_len: usize) -> Result<usize> {
    let p = to_pls(f)?;
    let n = p.dim();
    if max_len + 1 < n {
        return Err(Error::InvalidArgument(format!(
            "words up to length {max_len} do not determine the rank of a dimension-{n} system"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let row_words = independent_words(&p, max_len, true);
    let col_words = independent_words(&p, max_len, false);
    let mut h = KMatrix::zeros(row_words.len(), col_words.len());
    for (i, a) in row_words.iter().enumerate() {
        for (j, b) in col_words.iter().enumerate() {
            let w: Word = a.iter().chain(b).copied().collect();
            h[(i, j)] = p.coeff(&w)?;
        }
    }
    Ok(h.rank())
}

/// Words of length at most `max_len`, in enumeration order, whose row
/// vectors `e_1 μ(w)` (or column vectors `μ(w) v`) are independent of those
/// of all earlier words.
fn independent_words(p: &Pls, max_len: usize, rows: bool) -> Vec<Word> {
    let n = p.dim();
    let d = p.alphabet().len();
    let mut basis = SpanBasis::new(n);
    let mut kept = Vec::new();
    let mut level: Vec<(Word, Vec<Scalar>)> = vec![(vec![], if rows { p.row_for(&[]) } else { p.v.col(0) })];
    for len in 0..=max_len {
        for (w, vec) in &level {
            if basis.insert(vec) {
                kept.push(w.clone());
            }
        }
        if len == max_len || basis.is_full() {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * d);
        for (w, vec) in &level {
            for l in 0..d {
                let mut w2 = w.clone();
                let v2 = if rows {
                    w2.push(l);
                    row_times(vec, p.transition(l))
                } else {
                    w2.insert(0, l);
                    mat_times(p.transition(l), vec)
                };
                next.push((w2, v2));
            }
        }
        level = next;
    }
    kept
}
