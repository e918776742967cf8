//! Reference implementations used as test oracles. Nothing here goes
//! through the library's own linear algebra or system machinery: matrices
//! are plain row vectors, polynomials are expanded term by term.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use freefield::{Als, Assignment, Certificate, Expr, KMatrix, Scalar, Verdict, VerdictKind};
use num_traits::Zero;
use rand::Rng;

pub type Dense = Vec<Vec<Scalar>>;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn dense(m: &KMatrix) -> Dense {
    m.to_rows()
}

pub fn kmatrix(d: &Dense) -> KMatrix {
    KMatrix::from_rows(d.clone()).expect("rectangular")
}

pub fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> Dense {
    vec![vec![q(0); c]; r]
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| (0..inner).fold(q(0), |acc, k| acc + &row[k] * &b[k][j])).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Dense, c: &Scalar) -> Dense {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Row-reduces a copy and returns the rank.
pub fn rank(a: &Dense) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Nonzero rows of an echelon form of the given vectors.
fn row_basis(vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let mut m = vectors;
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Gauss-Jordan inverse, `None` if singular.
pub fn inverse(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let mut m: Dense = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..2 * n {
                    let delta = &factor * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Noncommutative polynomial: word (as letter names) to coefficient.
pub type Poly = BTreeMap<Vec<String>, Scalar>;

fn poly_add(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        let e = out.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c * q(sign);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands an inverse-free expression; `None` if it contains an inverse.
pub fn expand(e: &Expr) -> Option<Poly> {
    Some(match e {
        Expr::Letter(n) => Poly::from([(vec![n.clone()], q(1))]),
        Expr::Const(c) if c.is_zero() => Poly::new(),
        Expr::Const(c) => Poly::from([(vec![], c.clone())]),
        Expr::Add(a, b) => poly_add(&expand(a)?, &expand(b)?, 1),
        Expr::Sub(a, b) => poly_add(&expand(a)?, &expand(b)?, -1),
        Expr::Neg(a) => poly_add(&Poly::new(), &expand(a)?, -1),
        Expr::Mul(a, b) => {
            let (a, b) = (expand(a)?, expand(b)?);
            let mut out = Poly::new();
            for (wa, ca) in &a {
                for (wb, cb) in &b {
                    let w: Vec<String> = wa.iter().chain(wb).cloned().collect();
                    *out.entry(w).or_insert_with(Scalar::zero) += ca * cb;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
        Expr::Inv(_) => return None,
    })
}

pub fn poly_coeff(p: &Poly, word: &[String]) -> Scalar {
    p.get(word).cloned().unwrap_or_else(Scalar::zero)
}

pub type Point = BTreeMap<String, Dense>;

/// Direct evaluation of an expression; `None` if an inverse is singular.
pub fn eval_expr(e: &Expr, point: &Point, m: usize) -> Option<Dense> {
    Some(match e {
        Expr::Letter(n) => point[n].clone(),
        Expr::Const(c) => scale(&identity(m), c),
        Expr::Add(a, b) => add(&eval_expr(a, point, m)?, &eval_expr(b, point, m)?),
        Expr::Sub(a, b) => add(&eval_expr(a, point, m)?, &scale(&eval_expr(b, point, m)?, &q(-1))),
        Expr::Neg(a) => scale(&eval_expr(a, point, m)?, &q(-1)),
        Expr::Mul(a, b) => mul(&eval_expr(a, point, m)?, &eval_expr(b, point, m)?),
        Expr::Inv(a) => inverse(&eval_expr(a, point, m)?)?,
    })
}

/// Evaluates a system `(e_1, A, v)` by solving `(Σ A_l ⊗ X_l) s = v ⊗ I` with
/// the reference inverse.
pub fn eval_als(f: &Als, point: &Point, m: usize) -> Option<Dense> {
    let n = f.dim();
    if n == 0 {
        return Some(zeros(m, m));
    }
    let letters = f.alphabet().letters();
    let mut big = zeros(n * m, n * m);
    for (l, coeff) in f.pencil().coeffs().iter().enumerate() {
        let block = if l == 0 { identity(m) } else { point[&letters[l - 1]].clone() };
        let coeff = dense(coeff);
        for i in 0..n {
            for j in 0..n {
                if coeff[i][j].is_zero() {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        big[i * m + a][j * m + b] += &coeff[i][j] * &block[a][b];
                    }
                }
            }
        }
    }
    let inv = inverse(&big)?;
    let v = dense(f.v());
    // first block row of A^{-1} times v ⊗ I
    let mut out = zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            for j in 0..n {
                out[a][b] += &inv[a][j * m + b] * &v[j][0];
            }
        }
    }
    Some(out)
}

pub fn assignment(point: &Point) -> Assignment {
    point.iter().map(|(k, v)| (k.clone(), kmatrix(v))).collect()
}

pub fn random_point(rng: &mut impl Rng, letters: &[&str], m: usize) -> Point {
    letters
        .iter()
        .map(|l| (l.to_string(), (0..m).map(|_| (0..m).map(|_| q(rng.gen_range(-3..=3))).collect()).collect()))
        .collect()
}

fn random_const(rng: &mut impl Rng) -> Scalar {
    let n = rng.gen_range(-3..=3);
    let d = rng.gen_range(1..=2);
    Scalar::new(n.into(), i64::from(d).into())
}

/// Random expression of depth at most `depth`; inverses only when `inverses`.
pub fn random_expr(rng: &mut impl Rng, letters: &[&str], depth: usize, inverses: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.8) {
            Expr::letter(letters[rng.gen_range(0..letters.len())])
        } else {
            Expr::constant(random_const(rng))
        };
    }
    let sub = |rng: &mut _| random_expr(rng, letters, depth - 1, inverses);
    let ops = if inverses { 5 } else { 4 };
    match rng.gen_range(0..ops) {
        0 => Expr::add(sub(rng), sub(rng)),
        1 => Expr::sub(sub(rng), sub(rng)),
        2 => Expr::mul(sub(rng), sub(rng)),
        3 => Expr::neg(sub(rng)),
        _ => Expr::inv(sub(rng)),
    }
}

/// An expression equal to `e` written differently: operands of sums
/// swapped, products distributed over sums, cancelling terms added.
pub fn rewrite(rng: &mut impl Rng, e: &Expr) -> Expr {
    match e {
        Expr::Add(a, b) if rng.gen_bool(0.5) => Expr::add(rewrite(rng, b), rewrite(rng, a)),
        Expr::Add(a, b) => Expr::add(rewrite(rng, a), rewrite(rng, b)),
        Expr::Sub(a, b) => Expr::add(rewrite(rng, a), Expr::neg(rewrite(rng, b))),
        Expr::Mul(a, b) => match &**b {
            Expr::Add(c, d) => {
                Expr::add(Expr::mul(rewrite(rng, a), rewrite(rng, c)), Expr::mul(rewrite(rng, a), rewrite(rng, d)))
            }
            _ => Expr::mul(rewrite(rng, a), rewrite(rng, b)),
        },
        Expr::Neg(a) => Expr::mul(Expr::constant(q(-1)), rewrite(rng, a)),
        Expr::Inv(a) => Expr::inv(rewrite(rng, a)),
        Expr::Letter(_) if rng.gen_bool(0.3) => Expr::sub(Expr::add(e.clone(), Expr::letter("y")), Expr::letter("y")),
        other => other.clone(),
    }
}

/// Proper-system data of a regular system: `f = Σ_w e_1 Q_w v' w` with
/// `Q_l = -A_0^{-1} A_l` and `v' = A_0^{-1} v`.
pub struct Series {
    pub transitions: Vec<Dense>,
    pub v: Dense,
}

pub fn series(f: &Als) -> Option<Series> {
    let a0inv = inverse(&dense(f.pencil().coeff(0)))?;
    let transitions = f.pencil().coeffs()[1..].iter().map(|a| scale(&mul(&a0inv, &dense(a)), &q(-1))).collect();
    Some(Series { transitions, v: mul(&a0inv, &dense(f.v())) })
}

impl Series {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Coefficient of a word given by letter indices.
    pub fn coeff(&self, word: &[usize]) -> Scalar {
        let mut col = self.v.clone();
        for &l in word.iter().rev() {
            col = mul(&self.transitions[l], &col);
        }
        col.first().map_or_else(Scalar::zero, |r| r[0].clone())
    }

    /// Dimensions of the smallest subspaces containing `v` (columns) and
    /// `e_1` (rows) that are invariant under every transition: the ranks
    /// of the controllability and observability matrices.
    pub fn family_ranks(&self) -> (usize, usize) {
        let n = self.dim();
        let col = self.v.iter().map(|r| r[0].clone()).collect();
        let row = (0..n).map(|j| q(i64::from(j == 0))).collect();
        let right = |x: &Vec<Scalar>, t: &Dense| -> Vec<Scalar> {
            t.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
        };
        let left = |x: &Vec<Scalar>, t: &Dense| -> Vec<Scalar> {
            (0..n).map(|j| x.iter().zip(t).map(|(a, r)| a * &r[j]).sum()).collect()
        };
        (self.invariant_span(col, right), self.invariant_span(row, left))
    }

    fn invariant_span(&self, start: Vec<Scalar>, apply: impl Fn(&Vec<Scalar>, &Dense) -> Vec<Scalar>) -> usize {
        let mut basis = row_basis(vec![start]);
        loop {
            let mut grown = basis.clone();
            for b in &basis {
                grown.extend(self.transitions.iter().map(|t| apply(b, t)));
            }
            let next = row_basis(grown);
            if next.len() == basis.len() {
                return basis.len();
            }
            basis = next;
        }
    }
}

/// All words over `d` letters of length at most `max_len`.
pub fn words(d: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut level = vec![vec![]];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..d).map(move |l| {
                    let mut w2 = w.clone();
                    w2.push(l);
                    w2
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// Rank of the Hankel block over words up to `max_len` on both axes,
/// from a coefficient function.
pub fn hankel_rank(d: usize, max_len: usize, coeff: impl Fn(&[usize]) -> Scalar) -> usize {
    let ws = words(d, max_len);
    let h: Dense = ws
        .iter()
        .map(|a| ws.iter().map(|b| coeff(&a.iter().chain(b).copied().collect::<Vec<_>>())).collect())
        .collect();
    rank(&h)
}

pub mod systems;

/// Checks a `(T, U)` certificate directly: `u_f U = 0`, `T v_g = v_f` and
/// `T A_g - A_f U = A_f e_1ᵀ e_1` in every coefficient.
pub fn certificate_holds(f: &Als, g: &Als, t: &KMatrix, u: &KMatrix) -> bool {
    let (nf, ng) = (f.dim(), g.dim());
    let (t, u) = (dense(t), dense(u));
    if u.first().is_some_and(|row| row.iter().any(|x| *x != q(0))) {
        return false;
    }
    if mul(&t, &dense(g.v())) != dense(f.v()) {
        return false;
    }
    let mut corner = zeros(nf, ng);
    if nf > 0 && ng > 0 {
        corner[0][0] = q(1);
    }
    f.pencil().coeffs().iter().zip(g.pencil().coeffs()).all(|(af, ag)| {
        let (af, ag) = (dense(af), dense(ag));
        let lhs = add(&mul(&t, &ag), &scale(&mul(&af, &u), &q(-1)));
        lhs == mul(&af, &corner)
    })
}

/// Panics unless the verdict's certificate checks out against the reference.
pub fn assert_sound(v: &Verdict, f: &Als, g: &Als) {
    match &v.certificate {
        Some(Certificate::Transformation { t, u, swapped }) => {
            assert_eq!(v.kind, VerdictKind::Equal);
            let (a, b) = if *swapped { (g, f) } else { (f, g) };
            let (a, b) = Als::align(a, b).unwrap();
            assert!(certificate_holds(&a, &b, t, u));
        }
        Some(Certificate::Witness { point, left, right }) => {
            assert_eq!(v.kind, VerdictKind::NotEqual);
            assert_ne!(left, right);
            let m = left.rows();
            let p = point.iter().map(|(k, x)| (k.clone(), dense(x))).collect();
            assert_eq!(eval_als(f, &p, m), Some(dense(left)));
            assert_eq!(eval_als(g, &p, m), Some(dense(right)));
        }
        _ => {}
    }
}
