//! Balanced binary codes with Hamming separation and the measure families built from them.

mod counting;
mod family;

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use counting::{
    balanced_count, ball_cardinality, bernstein_check, central_binomial_check, code_size_closed_form,
    covering_size_bound, BernsteinCheck, BERNSTEIN_LIMIT,
};
pub use family::{apart_family, verify_separation, ApartFamily, SeparationReport};

/// Largest word length enumerated in exhaustive mode.
pub const EXHAUSTIVE_BITS: usize = 24;

/// A 0/1 word packed into 64-bit blocks; coordinate `i` is bit `i % 64` of block `i / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    blocks: Vec<u64>,
}

impl Word {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => w.set(i),
                _ => return Err(Error::InvalidInput(format!("bit {i} is {b}"))),
            }
        }
        Ok(w)
    }

    fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    #[inline]
    fn distance_unchecked(&self, other: &Word) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn hamming(&self, other: &Word) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        Ok(self.distance_unchecked(other))
    }

    /// Hex digits, most significant nibble first, `ceil(len / 4)` of them.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (0..4)
                .filter(|&k| 4 * d + k < self.len && self.get(4 * d + k))
                .fold(0u32, |acc, k| acc | 1 << k);
            write!(s, "{nibble:x}").expect("write to string");
        }
        s
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let hex = hex.trim();
        if hex.len() != len.div_ceil(4) {
            return Err(Error::InvalidInput(format!("{} hex digits for {len} bits", hex.len())));
        }
        let mut w = Self::zeros(len);
        for (pos, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidInput(format!("bad hex digit {c:?}")))?;
            for k in 0..4 {
                if nibble >> k & 1 == 1 {
                    let i = 4 * pos + k;
                    if i >= len {
                        return Err(Error::InvalidInput(format!("bit {i} set beyond length {len}")));
                    }
                    w.set(i);
                }
            }
        }
        Ok(w)
    }
}

/// Number of coordinates where two 0/1 vectors differ.
pub fn hamming(f: &[u8], g: &[u8]) -> Result<usize> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.len(), g.len()));
    }
    Ok(f.iter().zip(g).filter(|(a, b)| a != b).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CodeMode {
    /// Greedy scan of every balanced word; the result is maximal.
    Exhaustive,
    /// Random balanced words accepted when far from every word so far. Stops after
    /// `max_rejections` consecutive rejections.
    Randomized { max_rejections: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedCode {
    pub n_bits: usize,
    /// Distance the code was built for.
    pub min_dist: usize,
    pub words: Vec<Word>,
    /// No balanced word can be added without breaking `min_dist`.
    pub maximal: bool,
}

impl BalancedCode {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Smallest pairwise Hamming distance, `None` for fewer than two words.
    pub fn minimum_distance(&self) -> Option<usize> {
        (0..self.words.len())
            .into_par_iter()
            .filter_map(|i| {
                self.words[i + 1..]
                    .iter()
                    .map(|w| self.words[i].distance_unchecked(w))
                    .min()
            })
            .min()
    }

    pub fn is_separated(&self) -> bool {
        self.minimum_distance().is_none_or(|d| d >= self.min_dist)
    }

    pub fn is_balanced(&self) -> bool {
        self.words.iter().all(|w| w.len() == self.n_bits && 2 * w.weight() == self.n_bits)
    }

    /// Header line `N <n_bits> <min_dist>` then one hex row per word.
    pub fn write_hex<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "N {} {}", self.n_bits, self.min_dist)?;
        for w in &self.words {
            writeln!(out, "{}", w.to_hex())?;
        }
        Ok(())
    }

    pub fn read_hex<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty code file".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad header {header:?}")));
        let (n_bits, min_dist) = match fields.as_slice() {
            ["N", n, d] => (parse(n)?, parse(d)?),
            _ => return Err(Error::InvalidInput(format!("bad header {header:?}"))),
        };
        let mut words = Vec::new();
        for line in lines {
            let line = line?;
            if !line.trim().is_empty() {
                words.push(Word::from_hex(&line, n_bits)?);
            }
        }
        let code = Self {
            n_bits,
            min_dist,
            words,
            maximal: false,
        };
        if !code.is_balanced() {
            return Err(Error::InvalidInput("code file holds an unbalanced word".into()));
        }
        Ok(code)
    }
}

fn far_from_all(words: &[Word], w: &Word, min_dist: usize) -> bool {
    // recent words are the likeliest conflicts in a lexicographic scan
    words.iter().rev().all(|c| c.distance_unchecked(w) >= min_dist)
}

/// Balanced code of length `n_bits` with pairwise distance at least `min_dist`.
///
/// Exhaustive mode scans balanced words in increasing integer order (coordinate `i`
/// is bit `i`), so it is deterministic and maximal unless `target` stops it early.
pub fn separated_code(
    n_bits: usize,
    min_dist: usize,
    target: Option<usize>,
    mode: CodeMode,
    seed: u64,
) -> Result<BalancedCode> {
    if n_bits == 0 || n_bits % 2 == 1 {
        return Err(Error::InvalidRange(format!("word length must be even and positive, got {n_bits}")));
    }
    let half = n_bits / 2;
    let mut words: Vec<Word> = Vec::new();
    let reached = |words: &[Word]| target.is_some_and(|t| words.len() >= t);
    let maximal = match mode {
        CodeMode::Exhaustive => {
            if n_bits > EXHAUSTIVE_BITS {
                return Err(Error::TooLarge {
                    what: "exhaustive word length",
                    got: n_bits,
                    limit: EXHAUSTIVE_BITS,
                });
            }
            let mut x: u64 = (1 << half) - 1;
            let end = 1u64 << n_bits;
            let mut stopped = false;
            while x < end {
                let w = Word {
                    len: n_bits,
                    blocks: vec![x],
                };
                if far_from_all(&words, &w, min_dist) {
                    words.push(w);
                    if reached(&words) {
                        stopped = true;
                        break;
                    }
                }
                // next integer with the same popcount
                let low = x & x.wrapping_neg();
                let ripple = x + low;
                x = ripple | (((x ^ ripple) >> 2) / low);
            }
            !stopped
        }
        CodeMode::Randomized { max_rejections } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rejections = 0;
            while !reached(&words) && rejections <= max_rejections {
                let mut w = Word::zeros(n_bits);
                for i in sample(&mut rng, n_bits, half) {
                    w.set(i);
                }
                if far_from_all(&words, &w, min_dist) {
                    words.push(w);
                    rejections = 0;
                } else {
                    rejections += 1;
                }
            }
            if let Some(t) = target {
                if words.len() < t {
                    return Err(Error::TargetUnreachable {
                        target: t,
                        found: words.len(),
                    });
                }
            }
            false
        }
    };
    Ok(BalancedCode {
        n_bits,
        min_dist,
        words,
        maximal,
    })
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&[1, 1, 0, 0], &[1, 1, 0, 0]).unwrap(), 0);
        assert_eq!(hamming(&[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap(), 4);
        assert_eq!(hamming(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap(), 2);
        assert!(matches!(hamming(&[1], &[1, 0]), Err(Error::LengthMismatch(1, 2))));
        let a = Word::from_bits(&[1, 1, 0, 0]).unwrap();
        let b = Word::from_bits(&[1, 0, 1, 0]).unwrap();
        assert_eq!(a.hamming(&b).unwrap(), 2);
    }

    #[test]
    fn hex_round_trip() {
        let bits: Vec<u8> = (0..70).map(|i| ((i * 7 + 3) % 5 < 2) as u8).collect();
        let w = Word::from_bits(&bits).unwrap();
        assert_eq!(Word::from_hex(&w.to_hex(), 70).unwrap(), w);
        assert_eq!(Word::from_bits(&[1, 0, 0, 0, 1]).unwrap().to_hex(), "11");
    }

    #[test]
    fn exhaustive_length_eight() {
        let code = separated_code(8, 2, None, CodeMode::Exhaustive, 0).unwrap();
        assert!(code.maximal && code.is_balanced() && code.is_separated());
        // distance 2 is automatic between distinct balanced words
        assert_eq!(code.len(), 70);
        assert!(BigUint::from(code.len()) >= covering_size_bound(8, 2));
    }

    #[test]
    fn exhaustive_length_sixteen() {
        let code = separated_code(16, 4, None, CodeMode::Exhaustive, 0).unwrap();
        assert!(code.is_separated() && code.is_balanced());
        assert!(code.len() >= 16);
        assert!(code.len() as f64 >= code_size_closed_form(16));
    }

    #[test]
    fn randomized_reaches_target() {
        let code = separated_code(64, 16, Some(50), CodeMode::Randomized { max_rejections: 1000 }, 7).unwrap();
        assert_eq!(code.len(), 50);
        assert!(code.is_separated() && code.is_balanced());
        assert!(matches!(
            separated_code(8, 8, Some(3), CodeMode::Randomized { max_rejections: 200 }, 7),
            Err(Error::TargetUnreachable { target: 3, found: 2 })
        ));
    }

    #[test]
    fn file_round_trip() {
        let code = separated_code(12, 4, None, CodeMode::Exhaustive, 0).unwrap();
        let mut buf = Vec::new();
        code.write_hex(&mut buf).unwrap();
        let back = BalancedCode::read_hex(buf.as_slice()).unwrap();
        assert_eq!(back.words, code.words);
        assert_eq!((back.n_bits, back.min_dist), (12, 4));
    }
}
