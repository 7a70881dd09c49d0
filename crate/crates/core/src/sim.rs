//! Monte-Carlo estimation of frame and symbol error rates.
//!
//! Every frame draws its info word and noise from its own ChaCha stream keyed
//! by `(seed, code, Eb/N0, frame index)`. The decoder is not part of the key,
//! so different decoders at the same point see the same channel realizations.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{awgn, ebn0_to_sigma_with, ChannelParams, EbN0Convention, Labeling, LikelihoodForm, LikelihoodWord};
use crate::algebra::{Poly4, SPoly};
use crate::code::{CodeId, CodeSpec, Family};
use crate::error::{Error, Result};
use crate::lifting::{app_lifting_decode, chase_defaults, chase_lifting_decode, classical_lifting_decode};
use crate::map::{map_decode, map_decode_preparata, naive_map, NAIVE_LIMIT};
use crate::ring_z4::Z4Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderId {
    /// Fast symbol-wise MAP for the code's family.
    Map,
    /// Symbol-wise MAP by codebook enumeration.
    NaiveMap,
    /// Fast MAP through the Kerdock dual; Preparata codes and the self-dual length-8 code.
    DualMap,
    AppLifting,
    ClassicalLifting,
    Chase,
}

impl DecoderId {
    pub const ALL: [DecoderId; 6] = [
        DecoderId::Map,
        DecoderId::NaiveMap,
        DecoderId::DualMap,
        DecoderId::AppLifting,
        DecoderId::ClassicalLifting,
        DecoderId::Chase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderId::Map => "map",
            DecoderId::NaiveMap => "naive_map",
            DecoderId::DualMap => "dual_map",
            DecoderId::AppLifting => "app_lifting",
            DecoderId::ClassicalLifting => "classical_lifting",
            DecoderId::Chase => "chase",
        }
    }

    /// MAP decoders see standard QPSK, lifting decoders see Gray QPSK.
    pub fn labeling(self) -> Labeling {
        match self {
            DecoderId::Map | DecoderId::NaiveMap | DecoderId::DualMap => Labeling::Standard,
            _ => Labeling::Gray,
        }
    }
}

impl fmt::Display for DecoderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DecoderId::ALL
            .into_iter()
            .find(|d| d.name() == s.trim())
            .ok_or_else(|| Error::UnknownDecoder(s.to_string()))
    }
}

/// A decoder bound to a code, with any tables it needs prepared up front.
#[derive(Debug, Clone)]
pub struct Decoder {
    id: DecoderId,
    code: CodeId,
    spec: CodeSpec,
    codebook: Vec<Z4Word>,
    dual_spec: Option<CodeSpec>,
}

impl Decoder {
    pub fn new(code: CodeId, id: DecoderId) -> Result<Self> {
        let spec = code.build()?;
        let incompatible = || Error::IncompatibleDecoder {
            decoder: id.to_string(),
            code: code.to_string(),
        };
        let mut codebook = Vec::new();
        let mut dual_spec = None;
        match id {
            DecoderId::NaiveMap => {
                codebook = spec.codewords(NAIVE_LIMIT).map_err(|_| incompatible())?;
            }
            DecoderId::DualMap => match spec.family() {
                Family::Preparata => dual_spec = Some(spec.clone()),
                // the length-8 Kerdock code is its own dual
                Family::Kerdock if spec.m() == 3 => {
                    dual_spec = Some(CodeId::new(Family::Preparata, 3).build()?);
                }
                Family::Kerdock => return Err(incompatible()),
            },
            _ => {}
        }
        Ok(Decoder {
            id,
            code,
            spec,
            codebook,
            dual_spec,
        })
    }

    pub fn id(&self) -> DecoderId {
        self.id
    }

    pub fn code(&self) -> CodeId {
        self.code
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn labeling(&self) -> Labeling {
        self.id.labeling()
    }

    /// Symbol estimate for a received word modulated with [`Decoder::labeling`].
    ///
    /// Lifting decoders report their per-bit stage decisions, which need not
    /// form a codeword.
    pub fn decode(&self, y: &[Complex64], params: &ChannelParams) -> Result<Z4Word> {
        let spec = &self.spec;
        match self.id {
            DecoderId::Map => {
                let form = match spec.family() {
                    Family::Kerdock => LikelihoodForm::Log,
                    Family::Preparata => LikelihoodForm::Probability,
                };
                let w = LikelihoodWord::from_channel(y, params.sigma, Labeling::Standard, form);
                Ok(map_decode(&w, spec)?.hard)
            }
            DecoderId::NaiveMap => {
                let w = LikelihoodWord::from_channel(y, params.sigma, Labeling::Standard, LikelihoodForm::Log);
                Ok(naive_map(&w, &self.codebook)?.hard)
            }
            DecoderId::DualMap => {
                let w = LikelihoodWord::from_channel(y, params.sigma, Labeling::Standard, LikelihoodForm::Probability);
                let dual = self.dual_spec.as_ref().expect("prepared in new");
                Ok(map_decode_preparata(&w, dual)?.hard)
            }
            DecoderId::AppLifting => Ok(app_lifting_decode(y, params, spec)?.bitwise_word),
            DecoderId::ClassicalLifting => Ok(classical_lifting_decode(y, params, spec)?.bitwise_word),
            DecoderId::Chase => {
                let (e1, e2) = chase_defaults(spec.family());
                Ok(chase_lifting_decode(y, params, spec, e1, e2)?.bitwise_word)
            }
        }
    }

    /// Hard estimate with per-position symbol posteriors where the decoder
    /// produces them. APP lifting reports the product of its two bit
    /// marginals; the hard-decision decoders report none.
    pub fn decode_soft(&self, y: &[Complex64], params: &ChannelParams) -> Result<(Z4Word, Option<Vec<SPoly>>)> {
        let spec = &self.spec;
        let w = || LikelihoodWord::from_channel(y, params.sigma, Labeling::Standard, LikelihoodForm::Log);
        let soft = match self.id {
            DecoderId::Map => map_decode(&w(), spec)?,
            DecoderId::NaiveMap => naive_map(&w(), &self.codebook)?,
            DecoderId::DualMap => {
                let dual = self.dual_spec.as_ref().expect("prepared in new");
                map_decode_preparata(&w().convert(LikelihoodForm::Probability), dual)?
            }
            DecoderId::AppLifting => {
                let out = app_lifting_decode(y, params, spec)?;
                let p0 = |l: f64| 1.0 / (1.0 + (-l).exp());
                let post = out
                    .d0
                    .iter()
                    .zip(&out.d1)
                    .zip(out.p_hat.iter())
                    .map(|((&l0, &l1), p)| {
                        let low = p0(l0);
                        let high = p0(if p == 1 { -l1 } else { l1 });
                        Poly4([
                            low * high,
                            (1.0 - low) * high,
                            low * (1.0 - high),
                            (1.0 - low) * (1.0 - high),
                        ])
                    })
                    .collect();
                return Ok((out.bitwise_word, Some(post)));
            }
            _ => return Ok((self.decode(y, params)?, None)),
        };
        Ok((soft.hard, Some(soft.posteriors)))
    }
}

/// When to stop simulating a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Target relative precision of the error-rate estimate.
    pub delta: f64,
    /// `ceil(1 / δ²)`.
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl StopRule {
    pub const DEFAULT_DELTA: f64 = 0.05;
    pub const DEFAULT_MAX_FRAMES: u64 = 10_000_000;

    pub fn new(delta: f64, max_frames: u64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidStopRule("delta must lie in (0, 1)"));
        }
        if max_frames == 0 {
            return Err(Error::InvalidStopRule("max_frames must be positive"));
        }
        let min_frame_errors = (1.0 / (delta * delta) - 1e-9).ceil() as u64;
        Ok(StopRule {
            delta,
            min_frame_errors,
            max_frames,
        })
    }
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule::new(Self::DEFAULT_DELTA, Self::DEFAULT_MAX_FRAMES).expect("valid defaults")
    }
}

#[derive(Debug, Clone)]
pub struct SimRecord {
    pub code: CodeId,
    pub decoder: DecoderId,
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub symbol_errors: u64,
    /// Erroneous frames where the decoded word is closer to the channel
    /// output than the transmitted codeword.
    pub ml_bound_errors: u64,
    pub fer: f64,
    pub ser: f64,
    pub seed: u64,
    /// Zero where no wall clock is available (wasm32-unknown-unknown).
    pub wall_time: Duration,
    /// The frame cap ended the point before the error target was met.
    pub capped: bool,
}

/// Equality ignores `wall_time`.
impl PartialEq for SimRecord {
    fn eq(&self, o: &Self) -> bool {
        self.code == o.code
            && self.decoder == o.decoder
            && self.ebn0_db.to_bits() == o.ebn0_db.to_bits()
            && self.frames == o.frames
            && self.frame_errors == o.frame_errors
            && self.symbol_errors == o.symbol_errors
            && self.ml_bound_errors == o.ml_bound_errors
            && self.fer.to_bits() == o.fer.to_bits()
            && self.ser.to_bits() == o.ser.to_bits()
            && self.seed == o.seed
            && self.capped == o.capped
    }
}

/// Wall clock where the platform has one; browsers without WASI do not.
fn clock() -> Option<Instant> {
    if cfg!(all(target_arch = "wasm32", target_os = "unknown")) {
        None
    } else {
        Some(Instant::now())
    }
}

/// Stream for one frame: the key is `(seed, code, point, frame)`.
pub fn frame_rng(seed: u64, code: CodeId, ebn0_db: f64, frame: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&code.key().to_le_bytes());
    key[16..24].copy_from_slice(&ebn0_db.to_bits().to_le_bytes());
    key[24..].copy_from_slice(&frame.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct FrameOutcome {
    frame_error: bool,
    symbol_errors: u64,
    ml_bound: bool,
}

fn squared_distance(y: &[Complex64], word: &Z4Word, labeling: Labeling) -> f64 {
    y.iter().zip(word.iter()).map(|(v, c)| (v - labeling.point(c)).norm_sqr()).sum()
}

fn run_frame(decoder: &Decoder, params: &ChannelParams, seed: u64, frame: u64) -> Result<FrameOutcome> {
    let spec = decoder.spec();
    let mut rng = frame_rng(seed, decoder.code(), params.ebn0_db, frame);
    let u = Z4Word::from_ints((0..spec.k()).map(|_| rng.gen_range(0..4)));
    let c = spec.encode(&u)?;
    let labeling = decoder.labeling();
    let y = awgn(&labeling.modulate(&c), params.sigma, &mut rng);
    let c_hat = decoder.decode(&y, params)?;
    let symbol_errors = c.symbol_distance(&c_hat) as u64;
    let frame_error = symbol_errors > 0;
    let ml_bound = frame_error && squared_distance(&y, &c_hat, labeling) < squared_distance(&y, &c, labeling);
    Ok(FrameOutcome {
        frame_error,
        symbol_errors,
        ml_bound,
    })
}

/// Simulate one point under the default Eb/N0 convention.
pub fn run_point(code: CodeId, decoder: DecoderId, ebn0_db: f64, rule: &StopRule, seed: u64) -> Result<SimRecord> {
    let d = Decoder::new(code, decoder)?;
    run_point_with(&d, ebn0_db, rule, seed, EbN0Convention::default())
}

pub fn run_point_with(
    decoder: &Decoder,
    ebn0_db: f64,
    rule: &StopRule,
    seed: u64,
    convention: EbN0Convention,
) -> Result<SimRecord> {
    let start = clock();
    let params = ebn0_to_sigma_with(ebn0_db, decoder.spec(), convention);
    let mut frames = 0u64;
    let mut frame_errors = 0u64;
    let mut symbol_errors = 0u64;
    let mut ml_bound_errors = 0u64;
    let mut batch = 32u64;
    'outer: while frames < rule.max_frames && frame_errors < rule.min_frame_errors {
        let end = (frames + batch).min(rule.max_frames);
        let outcomes: Vec<FrameOutcome> = (frames..end)
            .into_par_iter()
            .map(|f| run_frame(decoder, &params, seed, f))
            .collect::<Result<_>>()?;
        // fold in frame order so the stopping frame does not depend on batching
        for o in outcomes {
            frames += 1;
            symbol_errors += o.symbol_errors;
            frame_errors += o.frame_error as u64;
            ml_bound_errors += o.ml_bound as u64;
            if frame_errors >= rule.min_frame_errors {
                break 'outer;
            }
        }
        batch = (batch * 2).min(4096);
    }
    let n = decoder.spec().n() as f64;
    Ok(SimRecord {
        code: decoder.code(),
        decoder: decoder.id(),
        ebn0_db,
        frames,
        frame_errors,
        symbol_errors,
        ml_bound_errors,
        fer: frame_errors as f64 / frames as f64,
        ser: symbol_errors as f64 / (frames as f64 * n),
        seed,
        wall_time: start.map(|t| t.elapsed()).unwrap_or_default(),
        capped: frame_errors < rule.min_frame_errors,
    })
}

/// Eb/N0 grid `start, start + step, ..., ≤ stop`, rounded to 1e-9 dB.
pub fn ebn0_grid(start: f64, step: f64, stop: f64) -> Result<Vec<f64>> {
    if !start.is_finite() || !stop.is_finite() || step.is_nan() || step <= 0.0 || start > stop {
        return Err(Error::EmptyGrid);
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Everything a sweep needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub codes: Vec<CodeId>,
    pub decoders: Vec<DecoderId>,
    pub ebn0_db: Vec<f64>,
    pub rule: StopRule,
    pub seed: u64,
    pub convention: EbN0Convention,
}

/// One record per `(code, decoder, point)` in that nesting order.
pub fn run_sweep(sweep: &Sweep) -> Result<Vec<SimRecord>> {
    if sweep.ebn0_db.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut decoders = Vec::new();
    for &code in &sweep.codes {
        for &id in &sweep.decoders {
            decoders.push(Decoder::new(code, id)?);
        }
    }
    let jobs: Vec<(&Decoder, f64)> = decoders
        .iter()
        .flat_map(|d| sweep.ebn0_db.iter().map(move |&e| (d, e)))
        .collect();
    jobs.into_par_iter()
        .map(|(d, e)| run_point_with(d, e, &sweep.rule, sweep.seed, sweep.convention))
        .collect()
}
