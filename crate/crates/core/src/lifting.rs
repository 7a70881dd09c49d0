//! Two-stage bitwise decoding over the binary images of a Z4 code.
//!
//! Stage one decodes the low bit plane with the associated binary code,
//! cancels the carry it leaves in the high plane, then decodes the high plane
//! with the same binary code. Soft stages give the bitwise APP lifting
//! decoder; hard and Chase stages give the two reference decoders.

use num_complex::Complex64;

use crate::algebra::fwht_real;
use crate::channel::{bit_llrs, ChannelParams};
use crate::code::{CodeSpec, Family};
use crate::error::{Error, Result};
use crate::ring_z4::{bin_vec_mat, dyadic_merge, z4_vec_mat, BitWord, Z4Word};

/// Soft outputs are clamped to this magnitude.
pub const LLR_MAX: f64 = 700.0;

/// Output of a binary soft-in soft-out decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySisoResult {
    /// A-posteriori LLRs, positive for bit 0.
    pub soft: Vec<f64>,
    pub hard_codeword: BitWord,
    pub hard_info: BitWord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingOutput {
    /// Stage-one soft output for the low bit plane.
    pub d0: Vec<f64>,
    /// Stage-two soft output; `b ⊙ d1` estimates the high bit plane.
    pub d1: Vec<f64>,
    /// Carry-corrected high-plane offset `p̂`.
    pub p_hat: BitWord,
    pub info: Z4Word,
    /// `info · G`; always a codeword.
    pub hard_word: Z4Word,
    /// Per-bit decisions of both stages: signs of `d0` and `b ⊙ d1` for soft
    /// stages, the selected stage codewords for hard ones.
    pub bitwise_word: Z4Word,
}

fn check_pow2(len: usize, m: usize) -> Result<()> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    if len != 1 << m {
        return Err(Error::LengthMismatch { expected: 1 << m, got: len });
    }
    Ok(())
}

fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_MAX, LLR_MAX)
    }
}

/// Info bits `(a, mask)` of the first-order Reed-Muller word `a ⊕ <mask, n>`.
fn rm1_info(a: u8, mask: usize, m: usize) -> BitWord {
    let mut v = vec![a];
    v.extend((0..m).map(|i| ((mask >> i) & 1) as u8));
    BitWord::new(v).expect("binary")
}

fn rm1_word(a: u8, mask: usize, n: usize) -> BitWord {
    BitWord::new((0..n).map(|j| a ^ ((mask & j).count_ones() & 1) as u8).collect()).expect("binary")
}

/// Exact bitwise MAP decoding of the first-order Reed-Muller code RM(1, m)
/// in Sylvester order (generator rows `1` and `bits_i(n)`).
pub fn siso_rm1(llrs: &[f64], m: usize) -> Result<BinarySisoResult> {
    let n = llrs.len();
    check_pow2(n, m)?;
    // correlation of the word with mask `k` and affine bit `a` is ±c[k]
    let mut c: Vec<f64> = llrs.iter().map(|l| l / 2.0).collect();
    fwht_real(&mut c)?;

    let (best, _) = c.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
        if v.abs() > bv {
            (i, v.abs())
        } else {
            (bi, bv)
        }
    });
    let a = (c[best] < 0.0) as u8;
    let cmax = c[best].abs();

    // P0 - P1 at position j is the transform of 2 sinh(c), the total is Σ 2 cosh(c)
    let mut diff: Vec<f64> = c
        .iter()
        .map(|&x| (x - cmax).exp() - (-x - cmax).exp())
        .collect();
    let total: f64 = c.iter().map(|&x| (x - cmax).exp() + (-x - cmax).exp()).sum();
    fwht_real(&mut diff)?;
    let soft = diff
        .iter()
        .map(|&d| clamp_llr(((total + d) / (total - d)).ln()))
        .collect();

    Ok(BinarySisoResult {
        soft,
        hard_codeword: rm1_word(a, best, n),
        hard_info: rm1_info(a, best, m),
    })
}

/// Hard minimum-distance decoding of RM(1, m) by the largest Walsh coefficient.
pub fn hard_rm1(bits: &BitWord, m: usize) -> Result<(BitWord, BitWord)> {
    let n = bits.len();
    check_pow2(n, m)?;
    let mut c: Vec<f64> = bits.iter().map(|b| 1.0 - 2.0 * b as f64).collect();
    fwht_real(&mut c)?;
    let mut best = 0;
    for (i, v) in c.iter().enumerate() {
        if v.abs() > c[best].abs() {
            best = i;
        }
    }
    let a = (c[best] < 0.0) as u8;
    Ok((rm1_info(a, best, m), rm1_word(a, best, n)))
}

/// The extended Hamming code of length `2^m` in systematic form.
///
/// Its dual is RM(1, m); parity checks are the rows `1` and `bits_i(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtHamming {
    m: usize,
    generator: Vec<Vec<u8>>,
    info_positions: Vec<usize>,
}

impl ExtHamming {
    /// Check positions are `0` and the powers of two; everything else carries information.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m >= usize::BITS as usize - 1 {
            return Err(Error::IndexOutOfRange { index: m, bits: usize::BITS as usize });
        }
        let n = 1usize << m;
        let info_positions: Vec<usize> = (0..n).filter(|&j| j != 0 && !j.is_power_of_two()).collect();
        let generator = info_positions
            .iter()
            .map(|&f| {
                let mut row = vec![0u8; n];
                row[f] = 1;
                for i in 0..m {
                    row[1 << i] = ((f >> i) & 1) as u8;
                }
                // overall parity: weight of f plus the bits just placed is even
                row[0] = (row.iter().map(|&x| x as u32).sum::<u32>() & 1) as u8;
                row
            })
            .collect();
        Ok(ExtHamming {
            m,
            generator,
            info_positions,
        })
    }

    /// Take the binary code generated by `g0` (which must be systematic on `info_positions`).
    pub fn from_generator(m: usize, g0: &[Vec<u8>], info_positions: &[usize]) -> Self {
        ExtHamming {
            m,
            generator: g0.to_vec(),
            info_positions: info_positions.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode(&self, info: &BitWord) -> BitWord {
        BitWord::new(bin_vec_mat(info.as_slice(), &self.generator)).expect("binary")
    }

    fn extract_info(&self, word: &[u8]) -> BitWord {
        BitWord::new(self.info_positions.iter().map(|&p| word[p]).collect()).expect("binary")
    }

    /// `(parity, XOR of the indices of the ones)`.
    pub fn syndrome(word: &BitWord) -> (u8, usize) {
        word.iter()
            .enumerate()
            .fold((0, 0), |(p, s), (j, b)| if b == 1 { (p ^ 1, s ^ j) } else { (p, s) })
    }

    /// Exact bitwise MAP decoding, evaluated over the `2N` dual codewords.
    pub fn siso(&self, llrs: &[f64]) -> Result<BinarySisoResult> {
        let n = self.n();
        check_pow2(llrs.len(), self.m)?;
        let t: Vec<f64> = llrs.iter().map(|l| (l / 2.0).tanh()).collect();
        let log_t: Vec<f64> = t.iter().map(|x| x.abs().ln()).collect();

        // A = Σ_b Π_n t_n^{b_n}
        // B_j = Σ_b t_j^{1 - b_j} Π_{n≠j} t_n^{b_n}
        // Every term is a product of factors of magnitude at most one.
        let mut a_sum = 0.0;
        let mut b_sum = vec![0.0; n];
        let mut support = Vec::with_capacity(n);
        for dual in 0..2 * n {
            let (aff, mask) = ((dual >> self.m) as u8, dual & (n - 1));
            support.clear();
            let mut log_mag = 0.0;
            let mut negative = false;
            let mut zeros = 0usize;
            for j in 0..n {
                let bit = aff ^ ((mask & j).count_ones() & 1) as u8;
                if bit == 1 {
                    support.push(true);
                    if t[j] == 0.0 {
                        zeros += 1;
                    } else {
                        log_mag += log_t[j];
                        negative ^= t[j] < 0.0;
                    }
                } else {
                    support.push(false);
                }
            }
            let full = if zeros > 0 {
                0.0
            } else {
                let v = log_mag.exp();
                if negative {
                    -v
                } else {
                    v
                }
            };
            a_sum += full;
            for j in 0..n {
                let tj = t[j];
                let term = if support[j] {
                    // drop t_j from the product
                    if tj == 0.0 {
                        if zeros == 1 {
                            let v = log_mag.exp();
                            if negative {
                                -v
                            } else {
                                v
                            }
                        } else {
                            0.0
                        }
                    } else if zeros > 0 {
                        0.0
                    } else {
                        let v = (log_mag - log_t[j]).exp();
                        if negative ^ (tj < 0.0) {
                            -v
                        } else {
                            v
                        }
                    }
                } else {
                    full * tj
                };
                b_sum[j] += term;
            }
        }

        let soft: Vec<f64> = b_sum
            .iter()
            .map(|&b| {
                let r = (b / a_sum).clamp(-1.0, 1.0);
                clamp_llr(((1.0 + r) / (1.0 - r)).ln())
            })
            .collect();
        let hard_bits: Vec<u8> = soft.iter().map(|&l| (l < 0.0) as u8).collect();
        let hard_info = self.extract_info(&hard_bits);
        Ok(BinarySisoResult {
            hard_codeword: self.encode(&hard_info),
            hard_info,
            soft,
        })
    }

    /// Single-error-correcting syndrome decoding.
    ///
    /// The error position is read off the index part of the syndrome, and the
    /// overall parity only decides whether position 0 is flipped when that
    /// part is zero; double errors are not flagged. This is the behaviour of a
    /// Meggitt decoder for the cyclic Hamming code followed by re-encoding.
    pub fn hard(&self, bits: &BitWord) -> Result<(BitWord, BitWord)> {
        check_pow2(bits.len(), self.m)?;
        let mut word = bits.as_slice().to_vec();
        let (parity, pos) = Self::syndrome(bits);
        if pos != 0 || parity == 1 {
            word[pos] ^= 1;
        }
        let info = self.extract_info(&word);
        let cw = self.encode(&info);
        Ok((info, cw))
    }
}

/// Exact bitwise MAP decoding of the `[2^m, 2^m - m - 1]` extended Hamming code.
pub fn siso_exthamming(llrs: &[f64], m: usize) -> Result<BinarySisoResult> {
    check_pow2(llrs.len(), m)?;
    ExtHamming::new(m)?.siso(llrs)
}

/// The binary code seen by each lifting stage.
#[derive(Debug, Clone)]
pub enum StageCode {
    Rm1 { m: usize },
    ExtHamming(ExtHamming),
}

impl StageCode {
    pub fn for_spec(spec: &CodeSpec) -> Self {
        match spec.family() {
            Family::Kerdock => StageCode::Rm1 { m: spec.m() },
            Family::Preparata => StageCode::ExtHamming(ExtHamming::from_generator(
                spec.m(),
                spec.g0(),
                spec.info_positions(),
            )),
        }
    }

    pub fn siso(&self, llrs: &[f64]) -> Result<BinarySisoResult> {
        match self {
            StageCode::Rm1 { m } => siso_rm1(llrs, *m),
            StageCode::ExtHamming(h) => h.siso(llrs),
        }
    }

    /// `(info, codeword)` from a hard binary word.
    pub fn hard(&self, bits: &BitWord) -> Result<(BitWord, BitWord)> {
        match self {
            StageCode::Rm1 { m } => hard_rm1(bits, *m),
            StageCode::ExtHamming(h) => h.hard(bits),
        }
    }
}

/// Low and high bit-plane LLRs of a received word under Gray QPSK.
pub fn channel_llrs(y: &[Complex64], sigma: f64) -> (Vec<f64>, Vec<f64>) {
    y.iter().map(|&v| bit_llrs(v, sigma)).unzip()
}

/// The carry `(u0 · G0 mod 4 - u0 ⊗ G0) / 2` of a binary info word.
pub fn carry_residue(u0: &BitWord, g0: &[Vec<u8>]) -> BitWord {
    let quaternary = z4_vec_mat(u0.as_slice(), g0);
    let binary = bin_vec_mat(u0.as_slice(), g0);
    BitWord::new(
        quaternary
            .iter()
            .zip(&binary)
            .map(|(&q, &b)| ((q + 4 - b) & 3) >> 1)
            .collect(),
    )
    .expect("binary")
}

struct StageResult {
    soft: Vec<f64>,
    info: BitWord,
    codeword: BitWord,
    decision: BitWord,
}

fn lift<F>(y: &[Complex64], params: &ChannelParams, spec: &CodeSpec, mut stage: F) -> Result<LiftingOutput>
where
    F: FnMut(usize, &[f64], &[f64]) -> Result<StageResult>,
{
    let n = spec.n();
    if y.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: y.len() });
    }
    let (w0, w1) = channel_llrs(y, params.sigma);
    let proj0: Vec<f64> = y.iter().map(|v| v.re * std::f64::consts::SQRT_2).collect();

    let s0 = stage(0, &w0, &proj0)?;
    let r1 = carry_residue(&s0.info, spec.g0());
    let high = BitWord::new(bin_vec_mat(s0.info.as_slice(), spec.g1())).expect("binary");
    let p_hat = r1.xor(&high)?;

    let flip = |x: f64, p: u8| if p == 1 { -x } else { x };
    let w1b: Vec<f64> = w1.iter().zip(p_hat.iter()).map(|(&x, p)| flip(x, p)).collect();
    let proj1: Vec<f64> = y
        .iter()
        .zip(p_hat.iter())
        .map(|(v, p)| flip(v.im * std::f64::consts::SQRT_2, p))
        .collect();
    let s1 = stage(1, &w1b, &proj1)?;

    let c1 = p_hat.xor(&s1.codeword)?;
    let hard_word = dyadic_merge(&s0.codeword, &c1)?;
    let bitwise_word = dyadic_merge(&s0.decision, &p_hat.xor(&s1.decision)?)?;
    let info = dyadic_merge(&s0.info, &s1.info)?;
    Ok(LiftingOutput {
        d0: s0.soft,
        d1: s1.soft,
        p_hat,
        info,
        hard_word,
        bitwise_word,
    })
}

fn hard_bits(llrs: &[f64]) -> BitWord {
    BitWord::new(llrs.iter().map(|&l| (l < 0.0) as u8).collect()).expect("binary")
}

/// Bitwise APP lifting decoding of a Gray-QPSK channel word.
pub fn app_lifting_decode(y: &[Complex64], params: &ChannelParams, spec: &CodeSpec) -> Result<LiftingOutput> {
    let code = StageCode::for_spec(spec);
    lift(y, params, spec, |_, llrs, _| {
        let r = code.siso(llrs)?;
        Ok(StageResult {
            decision: hard_bits(&r.soft),
            soft: r.soft,
            info: r.hard_info,
            codeword: r.hard_codeword,
        })
    })
}

/// Two hard-decision stages.
pub fn classical_lifting_decode(y: &[Complex64], params: &ChannelParams, spec: &CodeSpec) -> Result<LiftingOutput> {
    chase_lifting_decode(y, params, spec, 0, 0)
}

/// Default test-position counts `(e1, e2)` for a code family.
pub fn chase_defaults(family: Family) -> (usize, usize) {
    match family {
        Family::Kerdock => (8, 4),
        Family::Preparata => (2, 1),
    }
}

/// Chase decoding per stage: hard-decode `2^{e}` words obtained by flipping
/// the `e` least reliable bits, keep the candidate closest to the channel.
pub fn chase_lifting_decode(
    y: &[Complex64],
    params: &ChannelParams,
    spec: &CodeSpec,
    e1: usize,
    e2: usize,
) -> Result<LiftingOutput> {
    let n = spec.n();
    for e in [e1, e2] {
        if e > n {
            return Err(Error::TooManyTestPositions { patterns: e, len: n });
        }
    }
    let code = StageCode::for_spec(spec);
    lift(y, params, spec, |stage, llrs, proj| {
        let e = if stage == 0 { e1 } else { e2 };
        let base = hard_bits(llrs);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| llrs[a].abs().total_cmp(&llrs[b].abs()).then(a.cmp(&b)));
        let weak = &order[..e];

        let mut best: Option<(f64, BitWord, BitWord)> = None;
        let mut word = base.as_slice().to_vec();
        for pattern in 0u64..1 << e {
            word.copy_from_slice(base.as_slice());
            for (k, &pos) in weak.iter().enumerate() {
                if (pattern >> k) & 1 == 1 {
                    word[pos] ^= 1;
                }
            }
            let (info, cw) = code.hard(&BitWord::new(word.clone()).expect("binary"))?;
            let dist: f64 = cw
                .iter()
                .zip(proj)
                .map(|(c, &x)| {
                    let d = x - (1.0 - 2.0 * c as f64);
                    d * d
                })
                .sum();
            if best.as_ref().is_none_or(|(bd, _, _)| dist < *bd) {
                best = Some((dist, info, cw));
            }
        }
        let (_, info, codeword) = best.expect("at least one pattern");
        Ok(StageResult {
            soft: llrs.to_vec(),
            info,
            decision: codeword.clone(),
            codeword,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{awgn, ebn0_to_sigma, Labeling};
    use crate::code::CodeId;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(name: &str) -> CodeSpec {
        name.parse::<CodeId>().unwrap().build().unwrap()
    }

    /// Bitwise posteriors `P0 - P1` over an explicit binary codebook.
    fn brute_force(llrs: &[f64], book: &[Vec<u8>]) -> (Vec<f64>, Vec<u8>) {
        let n = llrs.len();
        let metric: Vec<f64> = book
            .iter()
            .map(|c| c.iter().zip(llrs).map(|(&b, &l)| (1.0 - 2.0 * b as f64) * l / 2.0).sum())
            .collect();
        let max = metric.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut diff = vec![0.0; n];
        let mut total = 0.0;
        for (c, &mu) in book.iter().zip(&metric) {
            let p = (mu - max).exp();
            total += p;
            for j in 0..n {
                diff[j] += if c[j] == 0 { p } else { -p };
            }
        }
        let best = metric
            .iter()
            .enumerate()
            .fold(0, |bi, (i, &v)| if v > metric[bi] { i } else { bi });
        (diff.iter().map(|d| d / total).collect(), book[best].clone())
    }

    fn all_words(g: &[Vec<u8>]) -> Vec<Vec<u8>> {
        (0..1usize << g.len())
            .map(|i| {
                let u: Vec<u8> = (0..g.len()).map(|k| ((i >> k) & 1) as u8).collect();
                bin_vec_mat(&u, g)
            })
            .collect()
    }

    fn rm1_generator(m: usize) -> Vec<Vec<u8>> {
        let n = 1 << m;
        let mut g = vec![vec![1u8; n]];
        for i in 0..m {
            g.push((0..n).map(|j| ((j >> i) & 1) as u8).collect());
        }
        g
    }

    #[test]
    fn rm1_exhaustive_oracle() {
        let m = 4;
        let book = all_words(&rm1_generator(m));
        assert_eq!(book.len(), 32);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let llrs: Vec<f64> = (0..16).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let r = siso_rm1(&llrs, m).unwrap();
            let (diff, best) = brute_force(&llrs, &book);
            for (l, d) in r.soft.iter().zip(&diff) {
                assert!(((l / 2.0).tanh() - d).abs() < 1e-9);
            }
            assert_eq!(r.hard_codeword.as_slice(), best.as_slice());
            assert_eq!(bin_vec_mat(r.hard_info.as_slice(), &rm1_generator(m)), best);
        }
    }

    #[test]
    fn rm1_trivial_inputs() {
        let r = siso_rm1(&[5.0; 8], 3).unwrap();
        assert!(r.hard_codeword.iter().all(|b| b == 0));
        assert!(r.soft.iter().all(|&l| l > 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = rm1_generator(5);
        for _ in 0..20 {
            let u: Vec<u8> = (0..6).map(|_| rng.gen_range(0..2)).collect();
            let c = bin_vec_mat(&u, &g);
            let llrs: Vec<f64> = c.iter().map(|&b| 4.0 * (1.0 - 2.0 * b as f64)).collect();
            let r = siso_rm1(&llrs, 5).unwrap();
            assert_eq!(r.hard_codeword.as_slice(), c.as_slice());
            assert_eq!(r.hard_info.as_slice(), u.as_slice());
        }
        assert_eq!(siso_rm1(&[0.0; 6], 3).unwrap_err(), Error::NotPowerOfTwo(6));
    }

    #[test]
    fn exthamming_exhaustive_oracle() {
        let m = 4;
        let code = ExtHamming::new(m).unwrap();
        let book = all_words(code.generator());
        assert_eq!(book.len(), 2048);
        for c in &book {
            let (p, s) = ExtHamming::syndrome(&BitWord::new(c.clone()).unwrap());
            assert_eq!((p, s), (0, 0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let llrs: Vec<f64> = (0..16).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let r = siso_exthamming(&llrs, m).unwrap();
            let (diff, _) = brute_force(&llrs, &book);
            for (l, d) in r.soft.iter().zip(&diff) {
                assert!(((l / 2.0).tanh() - d).abs() < 1e-9);
            }
            assert_eq!(code.encode(&r.hard_info), r.hard_codeword);
        }
    }

    #[test]
    fn exthamming_trivial_inputs() {
        let r = siso_exthamming(&[0.0; 16], 4).unwrap();
        assert!(r.soft.iter().all(|&l| l == 0.0));

        let code = ExtHamming::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let u = BitWord::new((0..26).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let c = code.encode(&u);
            let llrs: Vec<f64> = c.iter().map(|b| 5.0 * (1.0 - 2.0 * b as f64)).collect();
            let r = siso_exthamming(&llrs, 5).unwrap();
            assert_eq!(r.hard_codeword, c);
            assert_eq!(r.hard_info, u);
        }
    }

    #[test]
    fn soft_decoders_reduce_to_hard_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = ExtHamming::new(5).unwrap();
        for _ in 0..50 {
            let bits = BitWord::new((0..32).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let big: Vec<f64> = bits.iter().map(|b| 30.0 * (1.0 - 2.0 * b as f64)).collect();
            let (_, hard) = hard_rm1(&bits, 5).unwrap();
            let soft = siso_rm1(&big, 5).unwrap().hard_codeword;
            let d = |w: &BitWord| w.iter().zip(bits.iter()).filter(|(a, b)| a != b).count();
            // ties between equally distant codewords may resolve differently
            assert_eq!(d(&hard), d(&soft));

            let (_, hc) = code.hard(&bits).unwrap();
            let (p, _) = ExtHamming::syndrome(&bits);
            let sc = code.siso(&big).unwrap().hard_codeword;
            // an odd-weight word has a unique codeword at distance one
            if p == 1 {
                assert_eq!(hc, sc);
            }
        }
    }

    #[test]
    fn exthamming_hard_corrects_every_single_error() {
        let code = ExtHamming::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let u = BitWord::new((0..11).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let c = code.encode(&u);
            assert_eq!(code.hard(&c).unwrap(), (u.clone(), c.clone()));
            for j in 0..16 {
                let mut e = c.as_slice().to_vec();
                e[j] ^= 1;
                assert_eq!(code.hard(&BitWord::new(e).unwrap()).unwrap(), (u.clone(), c.clone()));
            }
            // two errors always yield some codeword, never a flag
            let mut e = c.as_slice().to_vec();
            e[3] ^= 1;
            e[9] ^= 1;
            let (_, out) = code.hard(&BitWord::new(e).unwrap()).unwrap();
            assert_eq!(ExtHamming::syndrome(&out), (0, 0));
        }
    }

    #[test]
    fn bitwise_word_follows_soft_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for name in ["k32", "p32"] {
            let spec = code(name);
            for _ in 0..50 {
                let (_, y, params) = noisy(&spec, 0.0, &mut rng);
                let out = app_lifting_decode(&y, &params, &spec).unwrap();
                for j in 0..spec.n() {
                    let c0 = (out.d0[j] < 0.0) as u8;
                    let c1 = ((out.d1[j] < 0.0) as u8) ^ out.p_hat[j];
                    assert_eq!(out.bitwise_word[j], c0 + 2 * c1);
                }
                let hard = classical_lifting_decode(&y, &params, &spec).unwrap();
                assert_eq!(hard.bitwise_word, hard.hard_word);
            }
        }
    }

    #[test]
    fn spec_binary_code_matches_standard_form() {
        for name in ["p8", "p32", "p128"] {
            let spec = code(name);
            let std = ExtHamming::new(spec.m()).unwrap();
            assert_eq!(spec.info_positions(), std.info_positions());
            assert_eq!(spec.g0(), std.generator());
        }
    }

    #[test]
    fn carry_residue_identity() {
        let spec = code("nr8");
        let u0 = BitWord::new(vec![1, 1, 0, 0]).unwrap();
        let r = carry_residue(&u0, spec.g0());
        // integer column sums of the first two rows, carry = floor(sum / 2) mod 2
        let sums: Vec<u8> = (0..8).map(|j| spec.g0()[0][j] + spec.g0()[1][j]).collect();
        let expect: Vec<u8> = sums.iter().map(|s| (s / 2) & 1).collect();
        assert_eq!(r.as_slice(), expect.as_slice());

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for name in ["k32", "p32", "p128"] {
            let spec = code(name);
            for _ in 0..50 {
                let u0 = BitWord::new((0..spec.k()).map(|_| rng.gen_range(0..2)).collect()).unwrap();
                let q = z4_vec_mat(u0.as_slice(), spec.g0());
                let b = bin_vec_mat(u0.as_slice(), spec.g0());
                let r = carry_residue(&u0, spec.g0());
                for j in 0..spec.n() {
                    assert_eq!(q[j], (b[j] + 2 * r[j]) & 3);
                }
            }
        }
    }

    fn noisy(spec: &CodeSpec, ebn0: f64, rng: &mut impl Rng) -> (Z4Word, Vec<Complex64>, ChannelParams) {
        let u = Z4Word::from_ints((0..spec.k()).map(|_| rng.gen_range(0..4)));
        let c = spec.encode(&u).unwrap();
        let params = ebn0_to_sigma(ebn0, spec);
        let y = awgn(&Labeling::Gray.modulate(&c), params.sigma, rng);
        (c, y, params)
    }

    #[test]
    fn noiseless_lifting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["k32", "p32", "nr8"] {
            let spec = code(name);
            for _ in 0..100 {
                let (c, _, params) = noisy(&spec, 0.0, &mut rng);
                let y = Labeling::Gray.modulate(&c);
                assert_eq!(app_lifting_decode(&y, &params, &spec).unwrap().hard_word, c);
                assert_eq!(classical_lifting_decode(&y, &params, &spec).unwrap().hard_word, c);
                let (e1, e2) = chase_defaults(spec.family());
                assert_eq!(chase_lifting_decode(&y, &params, &spec, e1, e2).unwrap().hard_word, c);
            }
        }
    }

    #[test]
    fn lifting_outputs_are_codewords() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for name in ["k32", "p32", "p128"] {
            let spec = code(name);
            for i in 0..50 {
                let (_, y, params) = noisy(&spec, (i % 5) as f64 - 1.0, &mut rng);
                let (e1, e2) = chase_defaults(spec.family());
                for out in [
                    app_lifting_decode(&y, &params, &spec).unwrap(),
                    classical_lifting_decode(&y, &params, &spec).unwrap(),
                    chase_lifting_decode(&y, &params, &spec, e1, e2).unwrap(),
                ] {
                    assert!(spec.is_codeword(&out.hard_word));
                    assert_eq!(spec.encode(&out.info).unwrap(), out.hard_word);
                }
            }
        }
    }

    #[test]
    fn single_hard_error_per_stage_is_corrected() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["k32", "p32"] {
            let spec = code(name);
            for _ in 0..50 {
                let (c, _, params) = noisy(&spec, 0.0, &mut rng);
                let mut y = Labeling::Gray.modulate(&c);
                let (i, q) = (rng.gen_range(0..spec.n()), rng.gen_range(0..spec.n()));
                y[i].re = -y[i].re * 0.2;
                y[q].im = -y[q].im * 0.2;
                assert!(y[i].re.abs() < s);
                assert_eq!(classical_lifting_decode(&y, &params, &spec).unwrap().hard_word, c);
            }
        }
    }

    #[test]
    fn chase_without_patterns_is_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for name in ["k32", "p32"] {
            let spec = code(name);
            for _ in 0..100 {
                let (_, y, params) = noisy(&spec, 1.0, &mut rng);
                assert_eq!(
                    chase_lifting_decode(&y, &params, &spec, 0, 0).unwrap().hard_word,
                    classical_lifting_decode(&y, &params, &spec).unwrap().hard_word
                );
            }
        }
        let spec = code("nr8");
        let params = ebn0_to_sigma(0.0, &spec);
        let y = vec![Complex64::new(1.0, 1.0); 8];
        assert!(matches!(
            chase_lifting_decode(&y, &params, &spec, 9, 0),
            Err(Error::TooManyTestPositions { .. })
        ));
    }
}
