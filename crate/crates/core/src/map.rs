//! Symbol-wise MAP decoding.
//!
//! Kerdock codes are decoded by walking all `4N` cosets of the binary
//! first-order Reed-Muller image with two group-algebra Walsh-Hadamard
//! passes per coset row. Preparata codes are decoded through their Kerdock
//! dual in the Fourier domain. Both are `O(N² log N)`. The naive decoders
//! enumerate a codebook and serve as oracles.

use num_complex::Complex64;
use num_traits::Zero;

use crate::algebra::{dft4, fwht, CSPoly, Poly4, SPoly};
use crate::channel::{check_finite, LikelihoodForm, LikelihoodWord};
use crate::code::{CodeSpec, Family};
use crate::error::{Error, Result};
use crate::ring_z4::{z4_neg, Z4Word};

/// Largest codebook the naive decoders will enumerate.
pub const NAIVE_LIMIT: usize = 1 << 12;

/// Fourier coefficients smaller than this are treated as zero when dividing.
pub const R_FLOOR: f64 = 1e-300;

/// Tolerated imaginary residue in the naive dual decoder, relative to the
/// largest real coefficient at the same position.
pub const IMAG_TOLERANCE: f64 = 1e-9;

/// Per-position posteriors and the symbol-wise hard decision.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftDecision {
    /// `posteriors[j].0[α] = P[c_j = α | y]`.
    pub posteriors: Vec<SPoly>,
    /// Argmax per position, ties to the smaller symbol.
    pub hard: Z4Word,
}

impl SoftDecision {
    fn from_unnormalized(raw: Vec<SPoly>) -> Result<Self> {
        let mut bad = 0;
        let posteriors: Vec<SPoly> = raw
            .into_iter()
            .map(|p| {
                let c = p.0.map(|x| x.max(0.0));
                let s: f64 = c.iter().sum();
                if !(s > 0.0 && s.is_finite()) {
                    bad += 1;
                    return Poly4([0.25; 4]);
                }
                Poly4(c.map(|x| x / s))
            })
            .collect();
        if bad > 0 {
            return Err(Error::DegenerateInput(bad));
        }
        let hard = Z4Word::new(posteriors.iter().map(SPoly::argmax).collect()).expect("argmax < 4");
        Ok(SoftDecision { posteriors, hard })
    }

    /// Largest absolute coefficient difference to another decision.
    pub fn max_abs_diff(&self, other: &SoftDecision) -> f64 {
        self.posteriors
            .iter()
            .zip(&other.posteriors)
            .flat_map(|(a, b)| a.0.iter().zip(b.0).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Intermediate values of the Preparata decoder, kept for inspection.
#[derive(Debug, Clone, Default)]
pub struct DualMapScratch {
    /// Per-position Fourier transform of the likelihoods.
    pub r: Vec<CSPoly>,
    /// `log |r|`.
    pub rho: Vec<SPoly>,
    /// `arg r`.
    pub phi: Vec<SPoly>,
    /// `s_{j,γ} = Σ_{b ∈ K, b_j = γ} Π_i r_{i, b_i}`, up to `exp(log_scale)`.
    pub s: Vec<CSPoly>,
    pub log_scale: f64,
    pub g: Vec<CSPoly>,
    pub h: Vec<CSPoly>,
    /// `m_j = Σ_β s_{j,β} / r_{j,β}` over the non-vanishing terms. Not used as a
    /// divisor; see [`map_decode_preparata_traced`].
    pub m: Vec<Complex64>,
    /// Number of `(j, β)` quotient terms dropped because `|r_{j,β}|` was below [`R_FLOOR`].
    pub dropped_terms: usize,
}

fn check_len(w: &LikelihoodWord, n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: w.len() });
    }
    Ok(())
}

/// Running sum `Σ_n exp(scale_n) x_n` stored as `acc · exp(log_scale)`.
struct ScaledAccumulator<T> {
    acc: Vec<Poly4<T>>,
    log_scale: f64,
}

impl<T: crate::algebra::Coeff> ScaledAccumulator<T> {
    fn new(n: usize) -> Self {
        ScaledAccumulator {
            acc: vec![Poly4::zero(); n],
            log_scale: f64::NEG_INFINITY,
        }
    }

    /// Add `exp(scale) · (row_j ⊙ Z^{shift_j})` for every position `j`.
    fn add_shifted(&mut self, row: &[Poly4<T>], shift: &[u8], scale: f64) {
        if scale == f64::NEG_INFINITY {
            return;
        }
        if scale > self.log_scale {
            let f = T::from_f64((self.log_scale - scale).exp());
            for a in self.acc.iter_mut() {
                *a = a.scale(f);
            }
            self.log_scale = scale;
        }
        let f = T::from_f64((scale - self.log_scale).exp());
        for ((a, x), &sh) in self.acc.iter_mut().zip(row).zip(shift) {
            *a += x.shift(sh).scale(f);
        }
    }
}

/// Kerdock MAP decoding from log-likelihoods (standard QPSK labeling).
///
/// Any likelihood form is accepted; probabilities are converted to logs.
pub fn map_decode_kerdock(w: &LikelihoodWord, spec: &CodeSpec) -> Result<SoftDecision> {
    if spec.family() != Family::Kerdock {
        return Err(Error::WrongFamily {
            expected: Family::Kerdock,
            got: spec.family(),
        });
    }
    let n = spec.n();
    check_len(w, n)?;
    check_finite(w)?;
    let w = w.convert(LikelihoodForm::Log);
    let rows = spec.coset_rows()?;

    let mut acc = ScaledAccumulator::<f64>::new(n);
    let mut t = vec![SPoly::zero(); n];
    for a1 in &rows.a1 {
        // b_n = w ⊙ Z^{-A1_n}; its transform holds the joint log-likelihoods
        // of the 4N codewords α·1 + A1_n + A2_l at (l, α)
        for ((tj, wj), &a) in t.iter_mut().zip(&w.polys).zip(a1) {
            *tj = wj.shift(z4_neg(a));
        }
        fwht(&mut t)?;
        let max = t
            .iter()
            .flat_map(|p| p.0)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            continue;
        }
        for tl in t.iter_mut() {
            *tl = Poly4(tl.0.map(|x| (x - max).exp()));
        }
        fwht(&mut t)?;
        acc.add_shifted(&t, a1, max);
    }
    SoftDecision::from_unnormalized(acc.acc)
}

/// Preparata MAP decoding from probabilities (standard QPSK labeling).
pub fn map_decode_preparata(w: &LikelihoodWord, spec: &CodeSpec) -> Result<SoftDecision> {
    map_decode_preparata_traced(w, spec).map(|(d, _)| d)
}

/// [`map_decode_preparata`] that also returns the intermediate quantities.
pub fn map_decode_preparata_traced(w: &LikelihoodWord, spec: &CodeSpec) -> Result<(SoftDecision, DualMapScratch)> {
    if spec.family() != Family::Preparata {
        return Err(Error::WrongFamily {
            expected: Family::Preparata,
            got: spec.family(),
        });
    }
    let n = spec.n();
    check_len(w, n)?;
    check_finite(w)?;
    let w = w.convert(LikelihoodForm::Probability);
    let rows = spec.dual_coset_rows()?;

    let r: Vec<CSPoly> = w.polys.iter().map(dft4).collect();
    let rho: Vec<SPoly> = r.iter().map(|p| Poly4(p.0.map(|c| c.norm().ln()))).collect();
    let phi: Vec<SPoly> = r.iter().map(|p| Poly4(p.0.map(|c| c.arg()))).collect();

    // s_{j,γ} = Σ_{b ∈ K, b_j = γ} Π_i r_{i,b_i}, with the product carried as
    // magnitude and phase sums
    let mut acc = ScaledAccumulator::<Complex64>::new(n);
    let mut tm = vec![SPoly::zero(); n];
    let mut em = vec![SPoly::zero(); n];
    let mut v = vec![CSPoly::zero(); n];
    for a1 in &rows.a1 {
        for j in 0..n {
            let sh = z4_neg(a1[j]);
            tm[j] = rho[j].shift(sh);
            em[j] = phi[j].shift(sh);
        }
        fwht(&mut tm)?;
        fwht(&mut em)?;
        let max = tm
            .iter()
            .flat_map(|p| p.0)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            continue;
        }
        for ((vl, tl), el) in v.iter_mut().zip(&tm).zip(&em) {
            for k in 0..4 {
                vl.0[k] = Complex64::from_polar((tl.0[k] - max).exp(), el.0[k]);
            }
        }
        fwht(&mut v)?;
        acc.add_shifted(&v, a1, max);
    }
    let s = acc.acc;

    let mut dropped = 0;
    let mut g = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for j in 0..n {
        let mut q = [Complex64::zero(); 4];
        for beta in 0..4 {
            if r[j].0[beta].norm() < R_FLOOR {
                dropped += 1;
            } else {
                q[beta] = s[j].0[beta] / r[j].0[beta];
            }
        }
        let mj: Complex64 = q.iter().sum();
        // g_α = Σ_β q_β r_{β-α}
        let mut gj = CSPoly::zero();
        for alpha in 0..4 {
            for beta in 0..4 {
                gj.0[alpha] += q[beta] * r[j].0[(beta + 4 - alpha) & 3];
            }
        }
        let hj = dft4(&gj);
        // h_j is a positive multiple of the posterior. m_j is that multiple in
        // exact arithmetic but is itself a sum of tiny codeword weights at high
        // SNR, so the explicit normalization is used instead of dividing by it.
        let zj = Poly4(hj.0.map(|c| c.re / 4.0));
        g.push(gj);
        h.push(hj);
        m.push(mj);
        z.push(zj);
    }
    let decision = SoftDecision::from_unnormalized(z)?;
    let scratch = DualMapScratch {
        r,
        rho,
        phi,
        s,
        log_scale: acc.log_scale,
        g,
        h,
        m,
        dropped_terms: dropped,
    };
    Ok((decision, scratch))
}

/// Dispatch on the code family.
pub fn map_decode(w: &LikelihoodWord, spec: &CodeSpec) -> Result<SoftDecision> {
    match spec.family() {
        Family::Kerdock => map_decode_kerdock(w, spec),
        Family::Preparata => map_decode_preparata(w, spec),
    }
}

/// Posteriors by direct summation over `codebook`.
pub fn naive_map(w: &LikelihoodWord, codebook: &[Z4Word]) -> Result<SoftDecision> {
    if codebook.len() > NAIVE_LIMIT {
        return Err(Error::CodebookTooLarge(codebook.len()));
    }
    let n = w.len();
    let w = w.convert(LikelihoodForm::Log);
    let joint: Vec<f64> = codebook
        .iter()
        .map(|c| {
            if c.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: c.len() });
            }
            Ok(c.iter().zip(&w.polys).map(|(s, p)| p.0[s as usize]).sum())
        })
        .collect::<Result<_>>()?;
    let max = joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut post = vec![SPoly::zero(); n];
    for (c, &l) in codebook.iter().zip(&joint) {
        let p = (l - max).exp();
        for (pj, s) in post.iter_mut().zip(c.iter()) {
            pj.0[s as usize] += p;
        }
    }
    SoftDecision::from_unnormalized(post)
}

/// Posteriors of a code from an enumeration of its dual.
///
/// `A_j(α) = Σ_β ω^{-αβ} Σ_{b ∈ dual} Π_n r_{n, b_n - β δ_{jn}}` with
/// `r_n` the Fourier transform of the position-`n` likelihoods, evaluated
/// with complex arithmetic and checked to be real.
pub fn naive_dual_map(w: &LikelihoodWord, dual_codebook: &[Z4Word]) -> Result<SoftDecision> {
    if dual_codebook.len() > NAIVE_LIMIT {
        return Err(Error::CodebookTooLarge(dual_codebook.len()));
    }
    let n = w.len();
    let w = w.convert(LikelihoodForm::Probability);
    let r: Vec<CSPoly> = w.polys.iter().map(dft4).collect();

    // acc[j][β] = Σ_b Π_{i≠j} r_{i,b_i} · r_{j,b_j-β}
    let mut acc = vec![[Complex64::zero(); 4]; n];
    let mut prefix = vec![Complex64::zero(); n + 1];
    let mut suffix = vec![Complex64::zero(); n + 1];
    for b in dual_codebook {
        if b.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: b.len() });
        }
        let b = b.as_slice();
        prefix[0] = Complex64::new(1.0, 0.0);
        for i in 0..n {
            prefix[i + 1] = prefix[i] * r[i].0[b[i] as usize];
        }
        suffix[n] = Complex64::new(1.0, 0.0);
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] * r[i].0[b[i] as usize];
        }
        for j in 0..n {
            let others = prefix[j] * suffix[j + 1];
            for (beta, a) in acc[j].iter_mut().enumerate() {
                *a += others * r[j].0[(b[j] as usize + 4 - beta) & 3];
            }
        }
    }

    let mut raw = Vec::with_capacity(n);
    for (j, aj) in acc.iter().enumerate() {
        let big = dft4(&Poly4(*aj));
        let scale = big.0.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
        let residue = big.0.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if residue > IMAG_TOLERANCE * scale {
            return Err(Error::ImaginaryResidue {
                position: j,
                residue: residue / scale,
            });
        }
        raw.push(Poly4(big.0.map(|c| c.re)));
    }
    SoftDecision::from_unnormalized(raw)
}
