//! Kerdock and Preparata codes over Z4: generator and parity-check
//! matrices, their binary splits, coset rows, and encoding.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois_ring::GaloisRing;
use crate::ring_z4::{bin_vec_mat, index_bits, inner_parity, z4_vec_mat, BitWord, Z4Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kerdock,
    Preparata,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Kerdock => f.write_str("kerdock"),
            Family::Preparata => f.write_str("preparata"),
        }
    }
}

/// Named code presets: `nr8` (the self-dual length-8 code, built as a
/// Kerdock code), `k8`/`p8`, `k32`/`p32`, `k128`/`p128`, `k512`/`p512`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeId {
    pub family: Family,
    pub m: usize,
    pub self_dual_alias: bool,
}

impl CodeId {
    pub const fn new(family: Family, m: usize) -> Self {
        CodeId {
            family,
            m,
            self_dual_alias: false,
        }
    }

    pub const NR8: CodeId = CodeId {
        family: Family::Kerdock,
        m: 3,
        self_dual_alias: true,
    };

    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn build(&self) -> Result<CodeSpec> {
        let ring = GaloisRing::preset(self.m)?;
        match self.family {
            Family::Kerdock => build_kerdock(&ring),
            Family::Preparata => build_preparata(&ring),
        }
    }

    /// Stable small integer used to key random streams.
    pub fn key(&self) -> u64 {
        (self.m as u64) << 2 | (self.family == Family::Preparata) as u64 | (self.self_dual_alias as u64) << 1
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.self_dual_alias {
            return write!(f, "nr{}", self.len());
        }
        let p = match self.family {
            Family::Kerdock => 'k',
            Family::Preparata => 'p',
        };
        write!(f, "{p}{}", self.len())
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "nr8" || lower == "nr" {
            return Ok(CodeId::NR8);
        }
        let (family, rest) = match lower.split_at(lower.len().min(1)) {
            ("k", rest) => (Family::Kerdock, rest),
            ("p", rest) => (Family::Preparata, rest),
            _ => return Err(Error::UnknownPreset(s.to_string())),
        };
        let m = match rest {
            "8" => 3,
            "32" => 5,
            "128" => 7,
            "512" => 9,
            _ => return Err(Error::UnknownPreset(s.to_string())),
        };
        Ok(CodeId::new(family, m))
    }
}

/// A free Z4-linear code with everything the decoders need.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    family: Family,
    m: usize,
    h_poly: Vec<u8>,
    generator: Vec<Vec<u8>>,
    parity_check: Vec<Vec<u8>>,
    g0: Vec<Vec<u8>>,
    g1: Vec<Vec<u8>>,
    /// Generator of the Kerdock member of the dual pair (`G` for Kerdock, `H` for Preparata).
    kerdock_generator: Vec<Vec<u8>>,
    /// Positions where the generator holds an identity block. Empty for Kerdock
    /// codes, which are not stored in systematic form.
    info_positions: Vec<usize>,
    /// `column_order[n]` is the index into `(0, 1, ξ, ..., ξ^{N-2})` placed at column `n`.
    column_order: Vec<usize>,
}

impl CodeSpec {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Code length in Z4 symbols.
    pub fn n(&self) -> usize {
        1 << self.m
    }

    /// Number of Z4 information symbols.
    pub fn k(&self) -> usize {
        self.generator.len()
    }

    /// Information bits carried per QPSK channel use.
    pub fn rate_bits_per_use(&self) -> f64 {
        2.0 * self.k() as f64 / self.n() as f64
    }

    pub fn defining_polynomial(&self) -> &[u8] {
        &self.h_poly
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    pub fn parity_check(&self) -> &[Vec<u8>] {
        &self.parity_check
    }

    /// Low bit plane of the generator; generates the associated binary code.
    pub fn g0(&self) -> &[Vec<u8>] {
        &self.g0
    }

    pub fn g1(&self) -> &[Vec<u8>] {
        &self.g1
    }

    pub fn kerdock_generator(&self) -> &[Vec<u8>] {
        &self.kerdock_generator
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn column_order(&self) -> &[usize] {
        &self.column_order
    }

    /// `c = u · G mod 4`.
    pub fn encode(&self, u: &Z4Word) -> Result<Z4Word> {
        self.check_info_len(u.len())?;
        Ok(Z4Word::new(z4_vec_mat(u.as_slice(), &self.generator)).expect("reduced mod 4"))
    }

    /// `c = u0 · G + 2 (u1 ⊗ G0)`, the dyadic route to the same codeword.
    pub fn encode_dyadic(&self, u: &Z4Word) -> Result<Z4Word> {
        self.check_info_len(u.len())?;
        let u0: Vec<u8> = u.iter().map(|s| s & 1).collect();
        let u1: Vec<u8> = u.iter().map(|s| s >> 1).collect();
        let low = z4_vec_mat(&u0, &self.generator);
        let high = bin_vec_mat(&u1, &self.g0);
        Ok(Z4Word::from_ints(
            low.iter().zip(&high).map(|(&l, &h)| l as i64 + 2 * h as i64),
        ))
    }

    /// Binary encoding with the associated binary code, `u ⊗ G0`.
    pub fn encode_binary(&self, u: &BitWord) -> Result<BitWord> {
        self.check_info_len(u.len())?;
        Ok(BitWord::new(bin_vec_mat(u.as_slice(), &self.g0)).expect("binary"))
    }

    /// `c · Hᵀ mod 4`; zero exactly for codewords.
    pub fn syndrome(&self, c: &Z4Word) -> Result<Z4Word> {
        if c.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: c.len(),
            });
        }
        Ok(Z4Word::new(
            self.parity_check
                .iter()
                .map(|row| {
                    let s: u32 = row.iter().zip(c.iter()).map(|(&h, x)| h as u32 * x as u32).sum();
                    (s & 3) as u8
                })
                .collect(),
        )
        .expect("reduced mod 4"))
    }

    pub fn is_codeword(&self, c: &Z4Word) -> bool {
        self.syndrome(c).map(|s| s.is_zero()).unwrap_or(false)
    }

    /// Coset rows of the Kerdock member of the pair.
    ///
    /// Errors for Preparata specs; use [`CodeSpec::dual_coset_rows`] there.
    pub fn coset_rows(&self) -> Result<CosetRows> {
        if self.family != Family::Kerdock {
            return Err(Error::WrongFamily {
                expected: Family::Kerdock,
                got: self.family,
            });
        }
        Ok(CosetRows::from_kerdock_generator(&self.kerdock_generator, self.m))
    }

    /// Coset rows of the dual Kerdock code, as needed by Preparata MAP decoding.
    pub fn dual_coset_rows(&self) -> Result<CosetRows> {
        if self.family != Family::Preparata {
            return Err(Error::WrongFamily {
                expected: Family::Preparata,
                got: self.family,
            });
        }
        Ok(CosetRows::from_kerdock_generator(&self.kerdock_generator, self.m))
    }

    /// Every codeword, in information-word order. Only for small codes.
    pub fn codewords(&self, limit: usize) -> Result<Vec<Z4Word>> {
        let count = 4usize.saturating_pow(self.k() as u32);
        if count > limit {
            return Err(Error::CodebookTooLarge(count));
        }
        Ok((0..count)
            .map(|idx| {
                let u = Z4Word::from_ints((0..self.k()).map(|i| ((idx >> (2 * i)) & 3) as i64));
                self.encode(&u).expect("length matches")
            })
            .collect())
    }

    fn check_info_len(&self, len: usize) -> Result<()> {
        if len != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: len,
            });
        }
        Ok(())
    }
}

/// Rows of the matrices `A1` and `A2`.
///
/// Row `l` of `A1` is `(0, bits(l)) · G_K`; row `l` of `A2` is
/// `2 ((0, bits(l)) ⊗ G_K0)`, i.e. `2 <bits(l), bits(n)> mod 4`. Every
/// Kerdock codeword is `α·1 + A1[n] + A2[l]` for a unique `(α, n, l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetRows {
    pub a1: Vec<Vec<u8>>,
    pub a2: Vec<Vec<u8>>,
}

impl CosetRows {
    fn from_kerdock_generator(g: &[Vec<u8>], m: usize) -> Self {
        let n = 1usize << m;
        let mut a1 = Vec::with_capacity(n);
        let mut a2 = Vec::with_capacity(n);
        for l in 0..n {
            let mut row = vec![0u8; n];
            for i in 0..m {
                if (l >> i) & 1 == 1 {
                    for (r, &x) in row.iter_mut().zip(&g[i + 1]) {
                        *r = (*r + x) & 3;
                    }
                }
            }
            a1.push(row);
            a2.push((0..n).map(|j| 2 * inner_parity(l, j)).collect());
        }
        CosetRows { a1, a2 }
    }
}

/// Build the Kerdock code `K[2^m, m+1]` from a Galois ring.
pub fn build_kerdock(ring: &GaloisRing) -> Result<CodeSpec> {
    let (gk, order) = kerdock_generator(ring);
    let (dual, _) = systematic_dual(&gk)?;
    let (g0, g1) = split_matrix(&gk);
    let m = ring.m();
    Ok(CodeSpec {
        family: Family::Kerdock,
        m,
        h_poly: ring.h().to_vec(),
        generator: gk.clone(),
        parity_check: dual,
        g0,
        g1,
        kerdock_generator: gk,
        info_positions: Vec::new(),
        column_order: order,
    })
}

/// Build the Preparata code `P[2^m, 2^m - m - 1]` as the dual of the Kerdock code.
pub fn build_preparata(ring: &GaloisRing) -> Result<CodeSpec> {
    let (gk, order) = kerdock_generator(ring);
    let (gp, info) = systematic_dual(&gk)?;
    let (g0, g1) = split_matrix(&gp);
    Ok(CodeSpec {
        family: Family::Preparata,
        m: ring.m(),
        h_poly: ring.h().to_vec(),
        generator: gp,
        parity_check: gk.clone(),
        g0,
        g1,
        kerdock_generator: gk,
        info_positions: info,
        column_order: order,
    })
}

/// `[1 1 1 ... 1; 0 1 ξ ... ξ^{N-2}]` with columns sorted by the integer
/// value of their binary image, so that `G mod 2` is the Sylvester-ordered
/// first-order Reed-Muller generator.
fn kerdock_generator(ring: &GaloisRing) -> (Vec<Vec<u8>>, Vec<usize>) {
    let m = ring.m();
    let n = ring.len();
    let mut columns: Vec<Vec<u8>> = Vec::with_capacity(n);
    columns.push(vec![0; m]);
    columns.extend(ring.xi_pow().iter().cloned());

    let mut g = vec![vec![0u8; n]; m + 1];
    let mut order = vec![usize::MAX; n];
    for (k, col) in columns.iter().enumerate() {
        let pos = col
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &c)| acc | (((c & 1) as usize) << i));
        debug_assert_eq!(order[pos], usize::MAX);
        order[pos] = k;
        g[0][pos] = 1;
        for i in 0..m {
            g[i + 1][pos] = col[i];
        }
    }
    (g, order)
}

fn split_matrix(g: &[Vec<u8>]) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
    let g0 = g.iter().map(|r| r.iter().map(|x| x & 1).collect()).collect();
    let g1 = g.iter().map(|r| r.iter().map(|x| (x >> 1) & 1).collect()).collect();
    (g0, g1)
}

/// Systematic generator of the null module of `h` over Z4.
///
/// Pivot columns of `h` are chosen greedily left to right (a pivot must be a
/// unit). The returned generator carries an identity block on the remaining
/// columns, which are returned as the information positions.
fn systematic_dual(h: &[Vec<u8>]) -> Result<(Vec<Vec<u8>>, Vec<usize>)> {
    let rows = h.len();
    let n = h.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<u8>> = h.to_vec();
    let mut pivots = Vec::with_capacity(rows);
    let mut rank = 0;
    for col in 0..n {
        if rank == rows {
            break;
        }
        let Some(r) = (rank..rows).find(|&r| a[r][col] & 1 == 1) else {
            continue;
        };
        a.swap(rank, r);
        // units of Z4 are self-inverse
        let inv = a[rank][col];
        for x in a[rank].iter_mut() {
            *x = (*x * inv) & 3;
        }
        for r2 in 0..rows {
            if r2 != rank && a[r2][col] != 0 {
                let f = a[r2][col];
                for j in 0..n {
                    a[r2][j] = (a[r2][j] + 4 * 3 - f * a[rank][j]) & 3;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank != rows {
        return Err(Error::SystematicFormNotFound);
    }

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let dual = free
        .iter()
        .map(|&f| {
            let mut row = vec![0u8; n];
            row[f] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                row[p] = (4 - a[r][f]) & 3;
            }
            row
        })
        .collect();
    Ok((dual, free))
}

/// `(0, bits(l))`, the binary selector used for coset row `l`.
pub fn coset_selector(l: usize, m: usize) -> BitWord {
    let bits = index_bits(l, m).expect("l < 2^m");
    let mut v = vec![0u8];
    v.extend(bits.iter());
    BitWord::new(v).expect("binary")
}
