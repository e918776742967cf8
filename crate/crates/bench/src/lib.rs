//! Benchmark fixtures.

use freefield::{compile, parse, Alphabet, Als, CompileOptions};

/// Compiles an expression over `letters`, minimizing where possible.
pub fn minimal(text: &str, letters: &str) -> Als {
    let ab = Alphabet::from_chars(letters).expect("alphabet");
    compile(&parse(text).expect("expression"), &CompileOptions { minimize: true, alphabet: Some(ab) })
        .expect("compiles")
}

/// Compiles an expression over `letters` with the plain rational operations.
pub fn plain(text: &str, letters: &str) -> Als {
    let ab = Alphabet::from_chars(letters).expect("alphabet");
    compile(&parse(text).expect("expression"), &CompileOptions { minimize: false, alphabet: Some(ab) })
        .expect("compiles")
}

/// The monomial system of a word spelled with single-character letters.
pub fn monomial(word: &str, letters: &str) -> Als {
    let ab = Alphabet::from_chars(letters).expect("alphabet");
    Als::monomial(&ab, &ab.parse_word(word).expect("word")).expect("monomial")
}

/// Polynomials of increasing size over `{x, y}`.
pub const POLYNOMIALS: [&str; 3] =
    ["x*y + y*x", "x*y*x - 2*y*x*y + x*x*y + 3", "(x + y)*(x - y)*(x*y + 1) + y*y*x*(x + 2)"];
