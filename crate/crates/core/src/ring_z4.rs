//! Scalar and vector arithmetic over Z4 and Z2.
//!
//! Every quaternary symbol `α` has a dyadic expansion `α = a + 2b` with
//! binary `a` (low bit) and `b` (high bit). Bit order is LSB-first
//! everywhere: bit `i` of an index carries weight `2^i`.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// Reduce an integer into `{0, 1, 2, 3}`.
#[inline]
pub fn z4(x: i64) -> u8 {
    x.rem_euclid(4) as u8
}

/// Additive inverse in Z4.
#[inline]
pub fn z4_neg(x: u8) -> u8 {
    (4 - (x & 3)) & 3
}

/// A word over Z4. Every symbol is in `{0, 1, 2, 3}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Z4Word(Vec<u8>);

impl Z4Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s > 3) {
            return Err(Error::InvalidSymbol(s as u32));
        }
        Ok(Z4Word(symbols))
    }

    /// Build a word by reducing every integer modulo 4.
    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        Z4Word(it.into_iter().map(z4).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Z4Word(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    /// Componentwise sum modulo 4.
    pub fn add(&self, other: &Z4Word) -> Result<Z4Word> {
        check_len(self.len(), other.len())?;
        Ok(Z4Word(
            self.0.iter().zip(&other.0).map(|(a, b)| (a + b) & 3).collect(),
        ))
    }

    /// Number of positions where the two words differ.
    pub fn symbol_distance(&self, other: &Z4Word) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Inner product modulo 4.
    pub fn dot(&self, other: &Z4Word) -> u8 {
        let s: u32 = self.0.iter().zip(&other.0).map(|(&a, &b)| a as u32 * b as u32).sum();
        (s & 3) as u8
    }
}

impl Index<usize> for Z4Word {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl fmt::Debug for Z4Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z4Word({self})")
    }
}

impl fmt::Display for Z4Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A word over Z2. Every bit is `0` or `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord(Vec<u8>);

impl BitWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b as u32));
        }
        Ok(BitWord(bits))
    }

    pub fn zeros(len: usize) -> Self {
        BitWord(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    /// Componentwise XOR.
    pub fn xor(&self, other: &BitWord) -> Result<BitWord> {
        check_len(self.len(), other.len())?;
        Ok(BitWord(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    /// Integer whose bit `i` is `self[i]`. Only meaningful for words of at most 64 bits.
    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i))
    }
}

impl Index<usize> for BitWord {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord(")?;
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Split `w` into its low and high bit planes, `w = a + 2b`.
pub fn dyadic_split(w: &Z4Word) -> (BitWord, BitWord) {
    let a = w.0.iter().map(|&s| s & 1).collect();
    let b = w.0.iter().map(|&s| (s >> 1) & 1).collect();
    (BitWord(a), BitWord(b))
}

/// Inverse of [`dyadic_split`].
pub fn dyadic_merge(a: &BitWord, b: &BitWord) -> Result<Z4Word> {
    check_len(a.len(), b.len())?;
    Ok(Z4Word(a.0.iter().zip(&b.0).map(|(&lo, &hi)| lo + 2 * hi).collect()))
}

/// LSB-first binary expansion of `n` on `m` bits.
pub fn index_bits(n: usize, m: usize) -> Result<BitWord> {
    if m >= usize::BITS as usize || n >= (1usize << m) {
        return Err(Error::IndexOutOfRange { index: n, bits: m });
    }
    Ok(BitWord((0..m).map(|i| ((n >> i) & 1) as u8).collect()))
}

/// Parity of the bitwise AND of two indices, i.e. `<bits(a), bits(b)> mod 2`.
#[inline]
pub fn inner_parity(a: usize, b: usize) -> u8 {
    ((a & b).count_ones() & 1) as u8
}

/// Binary vector-matrix product `v ⊗ G` over Z2. `g` is row-major with `v.len()` rows.
pub fn bin_vec_mat(v: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let n = g.first().map_or(0, Vec::len);
    let mut out = vec![0u8; n];
    for (&vi, row) in v.iter().zip(g) {
        if vi & 1 == 1 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o ^= x & 1;
            }
        }
    }
    out
}

/// Quaternary vector-matrix product `v · G` modulo 4.
pub fn z4_vec_mat(v: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let n = g.first().map_or(0, Vec::len);
    let mut out = vec![0u8; n];
    for (&vi, row) in v.iter().zip(g) {
        if vi != 0 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = (*o + vi * x) & 3;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn split_all_of_z4() {
        let w = Z4Word::new(vec![0, 1, 2, 3]).unwrap();
        let (a, b) = dyadic_split(&w);
        assert_eq!(a.as_slice(), &[0, 1, 0, 1]);
        assert_eq!(b.as_slice(), &[0, 0, 1, 1]);

        let (a, b) = dyadic_split(&Z4Word::zeros(5));
        assert_eq!(a, BitWord::zeros(5));
        assert_eq!(b, BitWord::zeros(5));

        let (a, b) = dyadic_split(&Z4Word::new(vec![3, 3]).unwrap());
        assert_eq!(a.as_slice(), &[1, 1]);
        assert_eq!(b.as_slice(), &[1, 1]);
    }

    #[test]
    fn merge_examples() {
        let w = dyadic_merge(&BitWord::new(vec![1]).unwrap(), &BitWord::new(vec![1]).unwrap());
        assert_eq!(w.unwrap().as_slice(), &[3]);
        let w = dyadic_merge(&BitWord::zeros(2), &BitWord::new(vec![1, 0]).unwrap());
        assert_eq!(w.unwrap().as_slice(), &[2, 0]);
        assert!(matches!(
            dyadic_merge(&BitWord::zeros(2), &BitWord::zeros(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn index_bits_examples() {
        assert_eq!(index_bits(5, 3).unwrap().as_slice(), &[1, 0, 1]);
        assert_eq!(index_bits(0, 4).unwrap(), BitWord::zeros(4));
        assert_eq!(index_bits(15, 4).unwrap().as_slice(), &[1, 1, 1, 1]);
        assert!(index_bits(8, 3).is_err());
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(Z4Word::new(vec![0, 4]).is_err());
        assert!(BitWord::new(vec![2]).is_err());
    }

    proptest! {
        #[test]
        fn split_merge_roundtrip(v in prop::collection::vec(0u8..4, 1..64)) {
            let w = Z4Word::new(v).unwrap();
            let (a, b) = dyadic_split(&w);
            prop_assert_eq!(dyadic_merge(&a, &b).unwrap(), w.clone());
            // 2a = 2w (mod 4)
            for (i, s) in w.iter().enumerate() {
                prop_assert_eq!((2 * a[i]) & 3, (2 * s) & 3);
            }
        }

        #[test]
        fn index_bits_bijective(m in 1usize..12, seed in any::<usize>()) {
            let n = seed % (1 << m);
            prop_assert_eq!(index_bits(n, m).unwrap().to_index(), n);
        }

        #[test]
        fn doubling_commutes_with_binary_sum(
            k in 1usize..6,
            n in 1usize..12,
            seed in prop::collection::vec(0u8..2, 6 * 12 + 6 + 12),
        ) {
            // 2 (v ⊗ G ⊕ w) = 2 (v · G + w) componentwise over Z4
            let v = &seed[..k];
            let g: Vec<Vec<u8>> = (0..k).map(|r| seed[6 + r * 12..6 + r * 12 + n].to_vec()).collect();
            let w = &seed[6 + 72..6 + 72 + n];
            let bin = bin_vec_mat(v, &g);
            let quat = z4_vec_mat(v, &g);
            for j in 0..n {
                prop_assert_eq!((2 * (bin[j] ^ w[j])) & 3, (2 * (quat[j] + w[j])) & 3);
            }
        }
    }
}
