//! QPSK modulation, the AWGN channel and per-symbol likelihoods.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{Poly4, SPoly};
use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::ring_z4::Z4Word;

/// Mapping from Z4 symbols to unit-energy QPSK points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Labeling {
    /// `φ(c) = i^c`.
    Standard,
    /// Low dyadic bit on the in-phase axis, high bit on quadrature.
    Gray,
}

#[inline]
pub fn qpsk_standard(c: u8) -> Complex64 {
    match c & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
pub fn qpsk_gray(c: u8) -> Complex64 {
    let a = (c & 1) as f64;
    let b = ((c >> 1) & 1) as f64;
    Complex64::new((1.0 - 2.0 * a) * FRAC_1_SQRT_2, (1.0 - 2.0 * b) * FRAC_1_SQRT_2)
}

impl Labeling {
    #[inline]
    pub fn point(self, c: u8) -> Complex64 {
        match self {
            Labeling::Standard => qpsk_standard(c),
            Labeling::Gray => qpsk_gray(c),
        }
    }

    pub fn modulate(self, word: &Z4Word) -> Vec<Complex64> {
        word.iter().map(|c| self.point(c)).collect()
    }
}

/// How Eb/N0 is turned into a noise variance.
///
/// All variants assume unit-energy symbols and `σ² = 1 / (2 R Eb/N0)` per
/// real dimension; they differ in the number of bits `R` charged per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EbN0Convention {
    /// `R = 2K/N`: two information bits per information symbol.
    #[default]
    InfoBits,
    /// `R = K/N`: the code rate counted in Z4 symbols.
    SymbolRate,
    /// `R = 2`: every transmitted bit is charged.
    ChannelBits,
}

impl EbN0Convention {
    pub fn bits_per_use(self, spec: &CodeSpec) -> f64 {
        match self {
            EbN0Convention::InfoBits => spec.rate_bits_per_use(),
            EbN0Convention::SymbolRate => spec.k() as f64 / spec.n() as f64,
            EbN0Convention::ChannelBits => 2.0,
        }
    }
}

impl fmt::Display for EbN0Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EbN0Convention::InfoBits => "info-bits",
            EbN0Convention::SymbolRate => "symbol-rate",
            EbN0Convention::ChannelBits => "channel-bits",
        })
    }
}

impl FromStr for EbN0Convention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "info-bits" => Ok(EbN0Convention::InfoBits),
            "symbol-rate" => Ok(EbN0Convention::SymbolRate),
            "channel-bits" => Ok(EbN0Convention::ChannelBits),
            other => Err(format!("unknown Eb/N0 convention '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    /// Noise standard deviation per real dimension.
    pub sigma: f64,
    pub rate_bits_per_use: f64,
}

/// Noise level for `ebn0_db` with information bits charged (`R = 2K/N`).
pub fn ebn0_to_sigma(ebn0_db: f64, spec: &CodeSpec) -> ChannelParams {
    ebn0_to_sigma_with(ebn0_db, spec, EbN0Convention::InfoBits)
}

pub fn ebn0_to_sigma_with(ebn0_db: f64, spec: &CodeSpec, convention: EbN0Convention) -> ChannelParams {
    let rate = convention.bits_per_use(spec);
    sigma_for_rate(ebn0_db, rate)
}

pub fn sigma_for_rate(ebn0_db: f64, rate_bits_per_use: f64) -> ChannelParams {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let var = 1.0 / (2.0 * rate_bits_per_use * ebn0);
    ChannelParams {
        ebn0_db,
        sigma: var.sqrt(),
        rate_bits_per_use,
    }
}

/// `y = x + n`, independent Gaussian real and imaginary noise with std `sigma`.
pub fn awgn<R: Rng + ?Sized>(x: &[Complex64], sigma: f64, rng: &mut R) -> Vec<Complex64> {
    x.iter()
        .map(|&s| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            s + Complex64::new(sigma * re, sigma * im)
        })
        .collect()
}

/// Whether a [`LikelihoodWord`] carries probabilities or their logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LikelihoodForm {
    Probability,
    Log,
}

/// Per-position likelihood polynomials `Σ_α P[y_n | α] Z^α`, normalized so
/// the probability form sums to one at every position.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodWord {
    pub form: LikelihoodForm,
    pub polys: Vec<SPoly>,
}

impl LikelihoodWord {
    pub fn from_channel(y: &[Complex64], sigma: f64, labeling: Labeling, form: LikelihoodForm) -> Self {
        let polys = y
            .iter()
            .map(|&yn| match form {
                LikelihoodForm::Probability => likelihood_poly(yn, sigma, labeling),
                LikelihoodForm::Log => log_likelihood_poly(yn, sigma, labeling),
            })
            .collect();
        LikelihoodWord { form, polys }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// The same likelihoods in the other form.
    pub fn convert(&self, form: LikelihoodForm) -> Self {
        if form == self.form {
            return self.clone();
        }
        let polys = self
            .polys
            .iter()
            .map(|p| match form {
                LikelihoodForm::Log => Poly4(p.0.map(f64::ln)),
                LikelihoodForm::Probability => {
                    let max = p.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let e = p.0.map(|c| (c - max).exp());
                    let s: f64 = e.iter().sum();
                    Poly4(e.map(|c| c / s))
                }
            })
            .collect();
        LikelihoodWord { form, polys }
    }
}

fn scaled_log_densities(y: Complex64, sigma: f64, labeling: Labeling) -> [f64; 4] {
    let inv = 1.0 / (2.0 * sigma * sigma);
    let d = [0u8, 1, 2, 3].map(|a| -(y - labeling.point(a)).norm_sqr() * inv);
    let max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    d.map(|x| x - max)
}

/// Normalized `Σ_α P[y | α] Z^α` for a single received sample.
pub fn likelihood_poly(y: Complex64, sigma: f64, labeling: Labeling) -> SPoly {
    let e = scaled_log_densities(y, sigma, labeling).map(f64::exp);
    let s: f64 = e.iter().sum();
    Poly4(e.map(|c| c / s))
}

/// Logarithm of [`likelihood_poly`], computed without underflow.
pub fn log_likelihood_poly(y: Complex64, sigma: f64, labeling: Labeling) -> SPoly {
    let d = scaled_log_densities(y, sigma, labeling);
    let lse = d.iter().map(|x| x.exp()).sum::<f64>().ln();
    Poly4(d.map(|x| x - lse))
}

/// Bit LLRs `(w0, w1)` of the low and high dyadic bits under Gray QPSK.
pub fn bit_llrs(y: Complex64, sigma: f64) -> (f64, f64) {
    let k = std::f64::consts::SQRT_2 / (sigma * sigma);
    (k * y.re, k * y.im)
}

/// Same as [`bit_llrs`], by marginalizing the four symbol likelihoods.
pub fn bit_llrs_marginal(y: Complex64, sigma: f64) -> (f64, f64) {
    let d = scaled_log_densities(y, sigma, Labeling::Gray);
    let lse = |a: f64, b: f64| {
        let m = a.max(b);
        m + ((a - m).exp() + (b - m).exp()).ln()
    };
    // symbols with low bit 0: {0, 2}; with high bit 0: {0, 1}
    let w0 = lse(d[0], d[2]) - lse(d[1], d[3]);
    let w1 = lse(d[0], d[1]) - lse(d[2], d[3]);
    (w0, w1)
}

/// Check every likelihood coefficient is finite.
pub fn check_finite(w: &LikelihoodWord) -> Result<()> {
    for (n, p) in w.polys.iter().enumerate() {
        let ok = match w.form {
            LikelihoodForm::Probability => p.0.iter().all(|c| c.is_finite()),
            // log(0) is a legitimate -inf, NaN and +inf are not
            LikelihoodForm::Log => p.0.iter().all(|c| !c.is_nan() && *c != f64::INFINITY),
        };
        if !ok {
            return Err(Error::NonFinite(n));
        }
    }
    Ok(())
}
