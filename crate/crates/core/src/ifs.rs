//! The defining iterated function system: generator matrices, branch words
//! and their exact integer products.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mat3::Mat3;
use crate::simplex::{jacobian, SimplexPoint};

/// The three unimodular generators. Each is obtained from the previous one
/// by conjugating with the cyclic coordinate permutation.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorSet {
    mats: [Mat3; 3],
}

static STANDARD: GeneratorSet = GeneratorSet {
    mats: [
        Mat3([[1, 1, 1], [0, 1, 0], [0, 0, 1]]),
        Mat3([[1, 0, 0], [1, 1, 1], [0, 0, 1]]),
        Mat3([[1, 0, 0], [0, 1, 0], [1, 1, 1]]),
    ],
};

impl GeneratorSet {
    pub fn standard() -> &'static GeneratorSet {
        &STANDARD
    }

    /// Generator for a symbol in `1..=3`.
    pub fn generator(&self, symbol: u8) -> &Mat3 {
        assert!((1..=3).contains(&symbol), "symbol out of range");
        &self.mats[(symbol - 1) as usize]
    }

    pub fn matrices(&self) -> &[Mat3; 3] {
        &self.mats
    }
}

/// A branch word: a non-constant sequence over `{1, 2, 3}` of length at
/// least 2, indexing one branch of the length-n subdivision.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::WordTooShort(symbols.len()));
        }
        if let Some(&bad) = symbols.iter().find(|s| !(1..=3).contains(*s)) {
            return Err(Error::BadSymbol(bad));
        }
        if symbols.iter().all(|&s| s == symbols[0]) {
            let digits: String = symbols.iter().map(|s| s.to_string()).collect();
            return Err(Error::ConstantWord(digits));
        }
        Ok(Word { symbols })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lexicographic index within `{1,2,3}^n` (constant words included in
    /// the numbering, so indices run over `0..3^n`).
    pub fn index(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * 3 + (s - 1) as u64)
    }

    /// Inverse of [`Word::index`]; fails on the three constant indices.
    pub fn from_index(n: u32, mut index: u64) -> Result<Self> {
        let mut symbols = vec![1u8; n as usize];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % 3) as u8 + 1;
            index /= 3;
        }
        Word::new(symbols)
    }

    /// Relabel symbols by the cyclic permutation 1 -> 2 -> 3 -> 1.
    pub fn relabel_cyclic(&self) -> Word {
        Word {
            symbols: self.symbols.iter().map(|&s| s % 3 + 1).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or(Error::BadSymbol(0))
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(symbols)
    }
}

/// Exact integer product realizing a branch map. For a word
/// `(i_1, ..., i_n)` this is `M_{i_n} * ... * M_{i_1}` (first symbol applied
/// first), a nonnegative unimodular matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductMatrix {
    matrix: Mat3,
}

impl ProductMatrix {
    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }
}

/// Multiply out the branch product of a word.
pub fn word_product(word: &Word) -> Result<ProductMatrix> {
    let gens = GeneratorSet::standard();
    let mut p = Mat3::IDENTITY;
    for &s in word.symbols() {
        p = gens.generator(s).mul(&p)?;
    }
    Ok(ProductMatrix { matrix: p })
}

/// Number of branch words of length `n`: `3^n - 3`.
pub fn word_count(n: u32) -> u64 {
    3u64.pow(n) - 3
}

/// All branch words of length `n` in lexicographic order.
pub fn enumerate_words(n: u32) -> Result<impl Iterator<Item = Word>> {
    if n < 2 {
        return Err(Error::WordTooShort(n as usize));
    }
    let total = 3u64.pow(n);
    let constant2 = (total - 1) / 2;
    let constant3 = total - 1;
    Ok((0..total)
        .filter(move |&i| i != 0 && i != constant2 && i != constant3)
        .map(move |i| Word::from_index(n, i).expect("non-constant index")))
}

/// Sampled evidence that a two-letter branch with distinct symbols is a
/// contraction: the largest singular value of its derivative must be below 1
/// at every sampled point. The test `alpha_1 < 1` is evaluated exactly as
/// `q < 2` and `q < 1 + det^2`.
pub fn contraction_check(word: &Word, points: &[SimplexPoint]) -> Result<bool> {
    if word.len() != 2 || word.symbols()[0] == word.symbols()[1] {
        return Err(Error::InvalidConfig(
            "contraction_check expects a two-letter word with distinct symbols".into(),
        ));
    }
    let p = word_product(word)?;
    for y in points {
        let j = jacobian(p.matrix(), y)?;
        if !j.operator_norm_lt_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
