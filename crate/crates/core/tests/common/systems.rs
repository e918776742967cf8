//! Small reference systems written out entry by entry.

use freefield::{Alphabet, Als, CertFlags, KMatrix, Pencil};

use super::q;

/// Builds a pencil from rows of entry strings: `""`/`"."` zero, an
/// integer, or `±letter`.
pub fn pencil(ab: &Alphabet, rows: &[&[&str]]) -> Pencil {
    let n = rows.len();
    let mut coeffs = vec![KMatrix::zeros(n, n); ab.len() + 1];
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "square");
        for (j, cell) in row.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() || cell == "." {
                continue;
            }
            if let Ok(k) = cell.parse::<i64>() {
                coeffs[0][(i, j)] = q(k);
                continue;
            }
            let (sign, name) = match cell.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, cell),
            };
            let l = ab.index_of(name).unwrap_or_else(|| panic!("letter {name}"));
            coeffs[l + 1][(i, j)] = q(sign);
        }
    }
    Pencil::new(ab, coeffs).unwrap()
}

pub fn system(ab: &Alphabet, rows: &[&[&str]], v: &[i64]) -> Als {
    let v = KMatrix::col_vector(v.iter().map(|&k| q(k)).collect());
    Als::new(pencil(ab, rows), v).unwrap()
}

pub fn xy() -> Alphabet {
    Alphabet::from_chars("xy").unwrap()
}

pub fn xyz() -> Alphabet {
    Alphabet::from_chars("xyz").unwrap()
}

/// Minimal system of the anticommutator `xy + yx`.
pub fn anticommutator() -> Als {
    system(
        &xy(),
        &[&["1", "-x", "-y", "."], &[".", "1", ".", "-y"], &[".", ".", "1", "-x"], &[".", ".", ".", "1"]],
        &[0, 0, 0, 1],
    )
    .with_cert(CertFlags::MINIMAL)
}

/// The 5×5 linearization of the anticommutator obtained from its minimal
/// system by a column permutation and a sign change.
pub fn anticommutator_bordered() -> Pencil {
    pencil(
        &xy(),
        &[
            &[".", ".", ".", ".", "1"],
            &[".", ".", "y", "x", "-1"],
            &[".", "y", ".", "-1", "."],
            &[".", "x", "-1", ".", "."],
            &["1", "-1", ".", ".", "."],
        ],
    )
}

/// Minimal 3×3 linearization of the anticommutator.
pub fn anticommutator_linearization() -> Pencil {
    pencil(&xy(), &[&[".", "y", "x"], &["y", ".", "-1"], &["x", "-1", "."]])
}

/// Minimal system of `(xyz)^{-1}`.
pub fn xyz_inverse() -> Als {
    system(&xyz(), &[&["z", "-1", "."], &[".", "y", "-1"], &[".", ".", "x"]], &[0, 0, 1]).with_cert(CertFlags::MINIMAL)
}

/// Minimal system of `x y z^{-1}`.
pub fn xy_zinv() -> Als {
    system(&xyz(), &[&["1", "-x", "."], &[".", "1", "-y"], &[".", ".", "z"]], &[0, 0, 1]).with_cert(CertFlags::MINIMAL)
}

/// Minimal system of `z y^{-1} x^{-1}`, the inverse of [`xy_zinv`].
pub fn z_yinv_xinv() -> Als {
    system(&xyz(), &[&["1", "-z", "."], &[".", "y", "-1"], &[".", ".", "x"]], &[0, 0, 1]).with_cert(CertFlags::MINIMAL)
}

/// A 9-dimensional system for `x - x y y^{-1} = 0` built by the rational
/// operations, for which no `(T, U)` against zero exists.
pub fn pathological_zero() -> Als {
    let d = ".";
    system(
        &xy(),
        &[
            &["1", "-x", "-1", d, d, d, d, d, d],
            &["0", "1", d, d, d, d, d, d, d],
            &[d, d, "1", "-x", d, d, d, d, d],
            &[d, d, "0", "1", "-1", d, d, d, d],
            &[d, d, d, d, "0", "1", "-y", d, d],
            &[d, d, d, d, "-1", "0", "1", d, d],
            &[d, d, d, d, "0", "1", "0", "-1", d],
            &[d, d, d, d, d, d, d, "1", "-y"],
            &[d, d, d, d, d, d, d, "0", "1"],
        ],
        &[0, 1, 0, 0, 0, 0, 0, 0, -1],
    )
}
