//! Linear pencils, admissible linear systems and linearizations.
//!
//! An admissible linear system `(u, A, v)` of dimension `n` consists of a
//! pencil `A = A_0 ⊗ 1 + Σ A_ℓ ⊗ x_ℓ` with `n x n` rational coefficients,
//! a right-hand side `v ∈ K^n` and the fixed row `u = e_1`. It represents
//! the first component of the solution of `A s = v` in the free field.
//! The empty system of dimension zero represents `0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{format_scalar, KMatrix, Scalar};

/// A word over an alphabet, as 0-based letter indices.
pub type Word = Vec<usize>;

/// Letter name to square matrix, used to evaluate elements at matrix points.
pub type Assignment = BTreeMap<String, KMatrix>;

/// An ordered, nonempty list of distinct letter names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        for (i, l) in letters.iter().enumerate() {
            if !is_identifier(l) {
                return Err(Error::InvalidAlphabet(format!("`{l}` is not a valid letter name")));
            }
            if letters[..i].contains(l) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Shorthand for alphabets of single-character letters, e.g. `"xyz"`.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars().map(String::from))
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    /// This alphabet followed by the letters of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut letters = self.letters.clone();
        for l in &other.letters {
            if !letters.contains(l) {
                letters.push(l.clone());
            }
        }
        Alphabet { letters }
    }

    /// Parses a word. Letters may be separated by `*`, `,` or whitespace;
    /// unseparated runs are split into single-character letters.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut word = Vec::new();
        for token in text.split(|c: char| c == '*' || c == ',' || c.is_whitespace()) {
            if token.is_empty() || token == "1" {
                continue;
            }
            if let Some(i) = self.index_of(token) {
                word.push(i);
                continue;
            }
            for ch in token.chars() {
                let s = ch.to_string();
                word.push(self.index_of(&s).ok_or(Error::UnknownLetter(s))?);
            }
        }
        Ok(word)
    }

    /// Renders a word; single-character alphabets concatenate, others join with `*`.
    /// The empty word renders as `1`.
    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let sep = if self.letters.iter().all(|l| l.chars().count() == 1) { "" } else { "*" };
        word.iter().map(|&i| self.letters[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// All words of length at most `max_len`, by length then lexicographically.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let d = self.len();
        let mut out: Vec<Word> = vec![vec![]];
        let mut level: Vec<Word> = vec![vec![]];
        for _ in 0..max_len {
            let next: Vec<Word> = level
                .iter()
                .flat_map(|w| {
                    (0..d).map(move |l| {
                        let mut w2 = w.clone();
                        w2.push(l);
                        w2
                    })
                })
                .collect();
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "inv"
}

/// A linear matrix `A_0 ⊗ 1 + Σ_ℓ A_ℓ ⊗ x_ℓ`.
///
/// `coeff(0)` is the constant part and `coeff(ℓ)` the coefficient of the
/// `ℓ`-th letter (1-based) of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    alphabet: Alphabet,
    dim: usize,
    coeffs: Vec<KMatrix>,
}

impl Pencil {
    pub fn zero(alphabet: &Alphabet, dim: usize) -> Self {
        Pencil { alphabet: alphabet.clone(), dim, coeffs: vec![KMatrix::zeros(dim, dim); alphabet.len() + 1] }
    }

    /// Builds a pencil from its `d + 1` coefficient matrices.
    pub fn new(alphabet: &Alphabet, coeffs: Vec<KMatrix>) -> Result<Self> {
        if coeffs.len() != alphabet.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficient matrices for an alphabet of {} letters",
                coeffs.len(),
                alphabet.len()
            )));
        }
        let dim = coeffs[0].rows();
        if coeffs.iter().any(|c| c.rows() != dim || c.cols() != dim) {
            return Err(Error::DimensionMismatch("pencil coefficients must be square of equal size".into()));
        }
        Ok(Pencil { alphabet: alphabet.clone(), dim, coeffs })
    }

    /// Pencil given by a constant matrix and `(letter, coefficient)` pairs.
    pub fn from_parts(alphabet: &Alphabet, constant: KMatrix, letters: &[(&str, KMatrix)]) -> Result<Self> {
        let mut p = Pencil::zero(alphabet, constant.rows());
        if !constant.is_square() {
            return Err(Error::DimensionMismatch("constant part must be square".into()));
        }
        p.coeffs[0] = constant;
        for (name, m) in letters {
            let i = alphabet.index_of(name).ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
            if m.rows() != p.dim || m.cols() != p.dim {
                return Err(Error::DimensionMismatch(format!("coefficient of `{name}`")));
            }
            p.coeffs[i + 1] = m.clone();
        }
        Ok(p)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient matrix `ℓ` (0 = constant part).
    pub fn coeff(&self, l: usize) -> &KMatrix {
        &self.coeffs[l]
    }

    pub fn coeff_mut(&mut self, l: usize) -> &mut KMatrix {
        &mut self.coeffs[l]
    }

    pub fn coeffs(&self) -> &[KMatrix] {
        &self.coeffs
    }

    /// Coefficient matrix of the letter with the given name.
    pub fn letter_coeff(&self, name: &str) -> Option<&KMatrix> {
        self.alphabet.index_of(name).map(|i| &self.coeffs[i + 1])
    }

    /// True when every letter coefficient vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(KMatrix::is_zero)
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        self.coeffs.iter().all(|c| c[(i, j)].is_zero())
    }

    /// True when entry `(i, j)` has no letter part.
    pub fn entry_is_scalar(&self, i: usize, j: usize) -> bool {
        self.coeffs[1..].iter().all(|c| c[(i, j)].is_zero())
    }

    /// Applies `f` to every coefficient matrix.
    pub fn map(&self, mut f: impl FnMut(&KMatrix) -> KMatrix) -> Pencil {
        let coeffs: Vec<KMatrix> = self.coeffs.iter().map(&mut f).collect();
        let dim = coeffs[0].rows();
        Pencil { alphabet: self.alphabet.clone(), dim, coeffs }
    }

    /// `P · A · Q` coefficientwise.
    pub fn transformed(&self, p: &KMatrix, q: &KMatrix) -> Pencil {
        self.map(|c| &(p * c) * q)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Vec<KMatrix> {
        self.coeffs.iter().map(|c| c.submatrix(r0, c0, rows, cols)).collect()
    }

    /// Re-expresses the pencil over a larger alphabet containing this one.
    pub fn over_alphabet(&self, target: &Alphabet) -> Result<Pencil> {
        let mut p = Pencil::zero(target, self.dim);
        p.coeffs[0] = self.coeffs[0].clone();
        for (i, l) in self.alphabet.letters.iter().enumerate() {
            let j = target.index_of(l).ok_or_else(|| Error::UnknownLetter(l.clone()))?;
            p.coeffs[j + 1] = self.coeffs[i + 1].clone();
        }
        // letters missing from `target` must not carry coefficients
        Ok(p)
    }

    /// Substitutes `m x m` matrices for the letters, giving an `nm x nm` matrix
    /// whose `(i, j)` block is `Σ_ℓ (A_ℓ)_{ij} X_ℓ` with `X_0 = I`.
    pub fn evaluate(&self, point: &Assignment, m: usize) -> Result<KMatrix> {
        let mut mats: Vec<Option<&KMatrix>> = Vec::with_capacity(self.alphabet.len());
        for (i, l) in self.alphabet.letters.iter().enumerate() {
            match point.get(l) {
                Some(x) if x.rows() != m || x.cols() != m => {
                    return Err(Error::DimensionMismatch(format!("matrix for `{l}` is not {m}x{m}")))
                }
                Some(x) => mats.push(Some(x)),
                None if self.coeffs[i + 1].is_zero() => mats.push(None),
                None => return Err(Error::MissingAssignment(l.clone())),
            }
        }
        let n = self.dim;
        let mut out = KMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let c0 = &self.coeffs[0][(i, j)];
                if !c0.is_zero() {
                    for k in 0..m {
                        out[(i * m + k, j * m + k)] += c0;
                    }
                }
                for (l, x) in mats.iter().enumerate() {
                    let c = &self.coeffs[l + 1][(i, j)];
                    let Some(x) = x else { continue };
                    if c.is_zero() {
                        continue;
                    }
                    for a in 0..m {
                        for b in 0..m {
                            let e = &x[(a, b)];
                            if !e.is_zero() {
                                out[(i * m + a, j * m + b)] += c * e;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Human-readable linear form for entry `(i, j)`, `.` for zero.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        let mut terms: Vec<(bool, String)> = Vec::new();
        let c0 = &self.coeffs[0][(i, j)];
        if !c0.is_zero() {
            terms.push((c0.is_negative(), format_scalar(&c0.abs())));
        }
        for (l, name) in self.alphabet.letters.iter().enumerate() {
            let c = &self.coeffs[l + 1][(i, j)];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let t = if mag.is_one() { name.clone() } else { format!("{}*{name}", format_scalar(&mag)) };
            terms.push((c.is_negative(), t));
        }
        if terms.is_empty() {
            return ".".into();
        }
        let mut s = String::new();
        for (k, (neg, t)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(t);
        }
        s
    }
}

impl fmt::Display for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry_string(i, j)).collect()).collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Whether a system is known to be minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Minimality {
    Yes,
    Unknown,
}

/// Whether `1` lies in the span of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl Membership {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Membership::Yes
        } else {
            Membership::No
        }
    }
}

/// Certification carried by a system. Membership of `1` in the left or
/// right family is only recorded for systems certified minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CertFlags {
    minimal: Minimality,
    one_in_left: Membership,
    one_in_right: Membership,
}

impl CertFlags {
    pub const UNKNOWN: CertFlags =
        CertFlags { minimal: Minimality::Unknown, one_in_left: Membership::Unknown, one_in_right: Membership::Unknown };

    /// Certified minimal, family memberships not yet determined.
    pub const MINIMAL: CertFlags =
        CertFlags { minimal: Minimality::Yes, one_in_left: Membership::Unknown, one_in_right: Membership::Unknown };

    pub fn minimal_with(one_in_left: Membership, one_in_right: Membership) -> Self {
        CertFlags { minimal: Minimality::Yes, one_in_left, one_in_right }
    }

    /// Validating constructor for flags read from outside.
    pub fn from_parts(minimal: Minimality, one_in_left: Membership, one_in_right: Membership) -> Result<Self> {
        if minimal == Minimality::Unknown && (one_in_left != Membership::Unknown || one_in_right != Membership::Unknown)
        {
            return Err(Error::Schema("family membership flags require a minimal system".into()));
        }
        Ok(CertFlags { minimal, one_in_left, one_in_right })
    }

    pub fn minimality(&self) -> Minimality {
        self.minimal
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal == Minimality::Yes
    }

    pub fn one_in_left(&self) -> Membership {
        self.one_in_left
    }

    pub fn one_in_right(&self) -> Membership {
        self.one_in_right
    }
}

/// An admissible linear system `(e_1, A, v)`.
///
/// `PartialEq` compares representations structurally (alphabet, pencil and
/// `v`); certification flags are ignored. Use the word-problem routines to
/// compare the represented elements.
#[derive(Debug, Clone)]
pub struct Als {
    a: Pencil,
    v: KMatrix,
    cert: CertFlags,
}

impl PartialEq for Als {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.v == other.v
    }
}

impl Als {
    /// Builds a system, checking that `v` matches the pencil dimension.
    pub fn new(a: Pencil, v: KMatrix) -> Result<Self> {
        if v.rows() != a.dim() || v.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "v is {}x{} for a pencil of dimension {}",
                v.rows(),
                v.cols(),
                a.dim()
            )));
        }
        Ok(Als { a, v, cert: CertFlags::UNKNOWN })
    }

    /// The empty system, representing zero.
    pub fn zero(alphabet: &Alphabet) -> Self {
        Als { a: Pencil::zero(alphabet, 0), v: KMatrix::zeros(0, 1), cert: CertFlags::MINIMAL }
    }

    /// Minimal system for a scalar: empty for zero, `([1], [1], [λ])` otherwise.
    pub fn scalar(alphabet: &Alphabet, lambda: &Scalar) -> Self {
        if lambda.is_zero() {
            return Als::zero(alphabet);
        }
        let mut a = Pencil::zero(alphabet, 1);
        a.coeffs[0] = KMatrix::identity(1);
        Als {
            a,
            v: KMatrix::col_vector(vec![lambda.clone()]),
            cert: CertFlags::minimal_with(Membership::Yes, Membership::Yes),
        }
    }

    /// Minimal system of dimension `k + 1` for the monomial `x_{i_1} ⋯ x_{i_k}`:
    /// unit diagonal, `-x_{i_j}` on the superdiagonal and `v = e_{k+1}`.
    pub fn monomial(alphabet: &Alphabet, word: &[usize]) -> Result<Self> {
        let n = word.len() + 1;
        let mut a = Pencil::zero(alphabet, n);
        a.coeffs[0] = KMatrix::identity(n);
        for (j, &l) in word.iter().enumerate() {
            if l >= alphabet.len() {
                return Err(Error::UnknownLetter(format!("#{l}")));
            }
            a.coeffs[l + 1][(j, j + 1)] = -Scalar::one();
        }
        Ok(Als { a, v: KMatrix::unit_col(n, n - 1), cert: CertFlags::minimal_with(Membership::Yes, Membership::Yes) })
    }

    /// Monomial from letter names, e.g. `["x", "y"]`.
    pub fn monomial_of(alphabet: &Alphabet, letters: &[&str]) -> Result<Self> {
        let word: Result<Word> =
            letters.iter().map(|l| alphabet.index_of(l).ok_or_else(|| Error::UnknownLetter(l.to_string()))).collect();
        Als::monomial(alphabet, &word?)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.a.alphabet()
    }

    pub fn pencil(&self) -> &Pencil {
        &self.a
    }

    /// The row `u = e_1`.
    pub fn u(&self) -> KMatrix {
        if self.is_empty() {
            KMatrix::zeros(1, 0)
        } else {
            KMatrix::unit_row(self.dim(), 0)
        }
    }

    pub fn v(&self) -> &KMatrix {
        &self.v
    }

    pub fn cert(&self) -> CertFlags {
        self.cert
    }

    pub fn is_certified_minimal(&self) -> bool {
        self.cert.is_minimal()
    }

    /// Replaces the certification flags. Callers vouch for their truth.
    pub fn with_cert(mut self, cert: CertFlags) -> Self {
        self.cert = cert;
        self
    }

    fn require_alphabet(&self, other: &Als) -> Result<()> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet().letters().to_vec(),
                right: other.alphabet().letters().to_vec(),
            });
        }
        Ok(())
    }

    /// The same system over a larger alphabet containing the current one.
    pub fn over_alphabet(&self, target: &Alphabet) -> Result<Als> {
        if target == self.alphabet() {
            return Ok(self.clone());
        }
        Ok(Als { a: self.a.over_alphabet(target)?, v: self.v.clone(), cert: self.cert })
    }

    /// Brings two systems onto the union of their alphabets.
    pub fn align(f: &Als, g: &Als) -> Result<(Als, Als)> {
        let ab = f.alphabet().union(g.alphabet());
        Ok((f.over_alphabet(&ab)?, g.over_alphabet(&ab)?))
    }

    /// `μ f = (u, A, μ v)`; scaling by zero gives the empty system.
    pub fn scale(&self, mu: &Scalar) -> Als {
        if mu.is_zero() {
            return Als::zero(self.alphabet());
        }
        Als { a: self.a.clone(), v: self.v.scale(mu), cert: self.cert }
    }

    /// `f + g` via the block system `[[A_f, -A_f u_fᵀ u_g], [0, A_g]]`, `v = [v_f; v_g]`.
    pub fn add(&self, g: &Als) -> Result<Als> {
        self.require_alphabet(g)?;
        if self.is_empty() {
            return Ok(g.clone());
        }
        if g.is_empty() {
            return Ok(self.clone());
        }
        let (nf, ng) = (self.dim(), g.dim());
        let a = Pencil {
            alphabet: self.alphabet().clone(),
            dim: nf + ng,
            coeffs: self
                .a
                .coeffs
                .iter()
                .zip(&g.a.coeffs)
                .map(|(af, ag)| {
                    let mut m = KMatrix::zeros(nf + ng, nf + ng);
                    m.set_block(0, 0, af);
                    m.set_block(nf, nf, ag);
                    // -A_f u_fᵀ u_g: minus the first column of A_f, placed in column n_f
                    for i in 0..nf {
                        m[(i, nf)] = -af[(i, 0)].clone();
                    }
                    m
                })
                .collect(),
        };
        let v = self.v.vstack(&g.v)?;
        Ok(Als { a, v, cert: CertFlags::UNKNOWN })
    }

    /// `f · g` via `[[A_f, -v_f u_g], [0, A_g]]`, `v = [0; v_g]`.
    pub fn mul(&self, g: &Als) -> Result<Als> {
        self.require_alphabet(g)?;
        if self.is_empty() || g.is_empty() {
            return Ok(Als::zero(self.alphabet()));
        }
        let (nf, ng) = (self.dim(), g.dim());
        let coeffs = self
            .a
            .coeffs
            .iter()
            .zip(&g.a.coeffs)
            .enumerate()
            .map(|(l, (af, ag))| {
                let mut m = KMatrix::zeros(nf + ng, nf + ng);
                m.set_block(0, 0, af);
                m.set_block(nf, nf, ag);
                if l == 0 {
                    for i in 0..nf {
                        m[(i, nf)] = -self.v[(i, 0)].clone();
                    }
                }
                m
            })
            .collect();
        let a = Pencil { alphabet: self.alphabet().clone(), dim: nf + ng, coeffs };
        let v = KMatrix::zeros(nf, 1).vstack(&g.v)?;
        Ok(Als { a, v, cert: CertFlags::UNKNOWN })
    }

    /// Standard inverse of dimension `n + 1`:
    /// `[[Σv, -ΣAΣ], [0, uΣ]]` with `v' = e_{n+1}`, `Σ` the order reversal.
    pub fn std_inverse(&self) -> Result<Als> {
        if self.is_empty() {
            return Err(Error::InverseOfZero);
        }
        let n = self.dim();
        let rev = KMatrix::reversal(n);
        let coeffs = self
            .a
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let mut m = KMatrix::zeros(n + 1, n + 1);
                m.set_block(0, 1, &-&(&(&rev * c) * &rev));
                if l == 0 {
                    m.set_block(0, 0, &(&rev * &self.v));
                    // uΣ = e_n
                    m[(n, n)] = Scalar::one();
                }
                m
            })
            .collect();
        let a = Pencil { alphabet: self.alphabet().clone(), dim: n + 1, coeffs };
        Ok(Als { a, v: KMatrix::unit_col(n + 1, n), cert: CertFlags::UNKNOWN })
    }

    /// Applies `(P, Q)`: `(uQ, PAQ, Pv)`. `Q` must have first row `e_1`,
    /// otherwise the first solution component would change.
    pub fn transform(&self, p: &KMatrix, q: &KMatrix) -> Result<Als> {
        let n = self.dim();
        for (name, m) in [("P", p), ("Q", q)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("{name} must be {n}x{n}")));
            }
            if m.invert()?.is_none() {
                return Err(Error::NotAdmissible(format!("{name} is singular")));
            }
        }
        if n > 0 && q.submatrix(0, 0, 1, n) != KMatrix::unit_row(n, 0) {
            return Err(Error::NotAdmissible("first row of Q must be e_1".into()));
        }
        Ok(Als { a: self.a.transformed(p, q), v: p * &self.v, cert: self.cert })
    }

    /// `(uQ, PAQ, Pv)` for transformations already known to be admissible.
    pub(crate) fn transform_unchecked(&self, p: &KMatrix, q: &KMatrix) -> Als {
        Als { a: self.a.transformed(p, q), v: p * &self.v, cert: self.cert }
    }

    /// Pure linearization `[[0, u], [-v, A]]` of size `n + 1`.
    pub fn to_linearization(&self) -> Result<Linearization> {
        if self.is_empty() {
            return Err(Error::EmptySystem);
        }
        let n = self.dim();
        let coeffs = self
            .a
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let mut m = KMatrix::zeros(n + 1, n + 1);
                m.set_block(1, 1, c);
                if l == 0 {
                    m[(0, 1)] = Scalar::one();
                    m.set_block(1, 0, &-&self.v);
                }
                m
            })
            .collect();
        Linearization::new(Pencil { alphabet: self.alphabet().clone(), dim: n + 1, coeffs })
    }

    /// Evaluates the element at a matrix point: returns the top `m x m` block
    /// of `A(X)^{-1} (v ⊗ I_m)`, or `None` when `A(X)` is singular.
    pub fn eval_at_matrices(&self, point: &Assignment) -> Result<Option<KMatrix>> {
        let m = point_size(point)?;
        if self.is_empty() {
            return Ok(Some(KMatrix::zeros(m, m)));
        }
        let big = self.a.evaluate(point, m)?;
        let n = self.dim();
        let mut rhs = KMatrix::zeros(n * m, m);
        for i in 0..n {
            let vi = &self.v[(i, 0)];
            if vi.is_zero() {
                continue;
            }
            for k in 0..m {
                rhs[(i * m + k, k)] = vi.clone();
            }
        }
        Ok(big.solve(&rhs)?.map(|s| s.submatrix(0, 0, m, m)))
    }
}

/// Common size of the matrices in a point; errors if they disagree.
pub fn point_size(point: &Assignment) -> Result<usize> {
    let mut size = None;
    for (l, x) in point {
        if !x.is_square() {
            return Err(Error::DimensionMismatch(format!("matrix for `{l}` is not square")));
        }
        match size {
            None => size = Some(x.rows()),
            Some(s) if s != x.rows() => {
                return Err(Error::DimensionMismatch("assigned matrices differ in size".into()))
            }
            _ => {}
        }
    }
    size.ok_or_else(|| Error::InvalidArgument("empty matrix assignment".into()))
}

impl fmt::Display for Als {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet().letters().join(", "))?;
        writeln!(f, "dim: {}", self.dim())?;
        if self.is_empty() {
            return writeln!(f, "(empty system: the zero element)");
        }
        writeln!(f, "A:")?;
        write!(f, "{}", self.a)?;
        let v: Vec<String> = self.v.col(0).iter().map(format_scalar).collect();
        writeln!(f, "v: [{}]ᵀ", v.join(", "))?;
        writeln!(
            f,
            "cert: minimal={:?} one_in_L={:?} one_in_R={:?}",
            self.cert.minimal, self.cert.one_in_left, self.cert.one_in_right
        )
    }
}

/// A linearization `L = [[c, u], [v, A]]` of size `m` representing the
/// Schur complement `c - u A^{-1} v`. Stored as a single size-`m` pencil;
/// the blocks are its first row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pencil: Pencil,
}

impl Linearization {
    pub fn new(pencil: Pencil) -> Result<Self> {
        if pencil.dim() == 0 {
            return Err(Error::EmptySystem);
        }
        Ok(Linearization { pencil })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn size(&self) -> usize {
        self.pencil.dim()
    }

    pub fn dim(&self) -> usize {
        self.size() - 1
    }

    /// `c = 0`.
    pub fn is_pure(&self) -> bool {
        self.pencil.entry_is_zero(0, 0)
    }

    /// Builds an admissible linear system for the same element.
    ///
    /// Borders `L` to `Ã = [[L, bᵀ], [b, 0]]` with `b = [-1, 0, …, 0]`, so the
    /// element equals `-ũ Ã^{-1} ũᵀ` for `ũ = e_{m+1}`. The result is the
    /// representation `(ũ, -Ã, ũᵀ)` with its last column rotated to the front,
    /// which turns `ũ` into `e_1`. Dimension `m + 1`.
    pub fn to_als(&self) -> Result<Als> {
        let m = self.size();
        let coeffs: Vec<KMatrix> = self
            .pencil
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let mut t = KMatrix::zeros(m + 1, m + 1);
                t.set_block(0, 0, c);
                if l == 0 {
                    t[(0, m)] = -Scalar::one();
                    t[(m, 0)] = -Scalar::one();
                }
                let neg = -&t;
                let order: Vec<usize> = std::iter::once(m).chain(0..m).collect();
                neg.select_cols(&order)
            })
            .collect();
        let a = Pencil { alphabet: self.pencil.alphabet.clone(), dim: m + 1, coeffs };
        Als::new(a, KMatrix::unit_col(m + 1, m))
    }

    /// Evaluates the Schur complement `c(X) - u(X) A(X)^{-1} v(X)`;
    /// `None` when `A(X)` is singular.
    pub fn eval_at_matrices(&self, point: &Assignment) -> Result<Option<KMatrix>> {
        let k = point_size(point)?;
        let big = self.pencil.evaluate(point, k)?;
        let rest = (self.size() - 1) * k;
        let c = big.submatrix(0, 0, k, k);
        if rest == 0 {
            return Ok(Some(c));
        }
        let u = big.submatrix(0, k, k, rest);
        let v = big.submatrix(k, 0, rest, k);
        let a = big.submatrix(k, k, rest, rest);
        Ok(a.solve(&v)?.map(|y| &c - &(&u * &y)))
    }
}
