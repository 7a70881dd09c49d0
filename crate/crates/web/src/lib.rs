//! Browser bindings: code inspection, one noisy transmission decoded end to
//! end, and a short error-rate measurement.
//!
//! The logic lives in [`demo`] with plain `String` errors so it can be tested
//! natively; the exported functions only convert errors for JavaScript.

use wasm_bindgen::prelude::*;

pub mod demo {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use ringcodec::channel::{awgn, ebn0_to_sigma_with, EbN0Convention};
    use ringcodec::sim::{run_point_with, Decoder, DecoderId, StopRule};
    use ringcodec::{CodeId, Z4Word};

    /// Noise levels in the demo follow the symbol-rate Eb/N0 convention.
    pub const CONVENTION: EbN0Convention = EbN0Convention::SymbolRate;

    fn decoder(code: &str, decoder: &str) -> Result<Decoder, String> {
        let code: CodeId = code.parse().map_err(|e| format!("{e}"))?;
        let id: DecoderId = decoder.parse().map_err(|e| format!("{e}"))?;
        Decoder::new(code, id).map_err(|e| e.to_string())
    }

    pub fn digits(w: &Z4Word) -> String {
        w.iter().map(|s| char::from(b'0' + s)).collect()
    }

    pub fn code_info(code: &str) -> Result<String, String> {
        let id: CodeId = code.parse().map_err(|e| format!("{e}"))?;
        let spec = id.build().map_err(|e| e.to_string())?;
        let family = if id.self_dual_alias {
            "both(self-dual)".to_string()
        } else {
            spec.family().to_string()
        };
        Ok(format!(
            "N={} K={} family={family}\nrate={} bits/use",
            spec.n(),
            spec.k(),
            spec.rate_bits_per_use()
        ))
    }

    pub fn encode(code: &str, word: &str) -> Result<String, String> {
        let spec = code
            .parse::<CodeId>()
            .and_then(|id| id.build())
            .map_err(|e| e.to_string())?;
        let u: Vec<u8> = word
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(4).map(|d| d as u8).ok_or(format!("'{c}' is not a Z4 symbol")))
            .collect::<Result<_, _>>()?;
        if u.len() != spec.k() {
            return Err(format!("expected {} symbols, got {}", spec.k(), u.len()));
        }
        let c = spec
            .encode(&Z4Word::new(u).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        Ok(digits(&c))
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct Transmission {
        pub sent: String,
        pub decoded: String,
        pub symbol_errors: usize,
        /// Interleaved `re, im` channel samples.
        pub received: Vec<f64>,
        /// Four probabilities per position, empty for hard-decision decoders.
        pub posteriors: Vec<f64>,
    }

    pub fn transmit(code: &str, decoder_name: &str, ebn0_db: f64, seed: u32) -> Result<Transmission, String> {
        let d = decoder(code, decoder_name)?;
        let spec = d.spec();
        let params = ebn0_to_sigma_with(ebn0_db, spec, CONVENTION);
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let u = Z4Word::from_ints((0..spec.k()).map(|_| rng.gen_range(0..4)));
        let c = spec.encode(&u).map_err(|e| e.to_string())?;
        let y = awgn(&d.labeling().modulate(&c), params.sigma, &mut rng);
        let (hard, post) = d.decode_soft(&y, &params).map_err(|e| e.to_string())?;
        Ok(Transmission {
            sent: digits(&c),
            decoded: digits(&hard),
            symbol_errors: c.symbol_distance(&hard),
            received: y.iter().flat_map(|v| [v.re, v.im]).collect(),
            posteriors: post.unwrap_or_default().iter().flat_map(|p| p.0).collect(),
        })
    }

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct ErrorRate {
        pub frames: u32,
        pub frame_errors: u32,
        pub fer: f64,
        pub ser: f64,
    }

    /// Stops after 100 frame errors or `max_frames` frames.
    pub fn error_rate(code: &str, decoder_name: &str, ebn0_db: f64, max_frames: u32, seed: u32) -> Result<ErrorRate, String> {
        let d = decoder(code, decoder_name)?;
        let rule = StopRule::new(0.1, max_frames as u64).map_err(|e| e.to_string())?;
        let r = run_point_with(&d, ebn0_db, &rule, seed as u64, CONVENTION).map_err(|e| e.to_string())?;
        Ok(ErrorRate {
            frames: r.frames as u32,
            frame_errors: r.frame_errors as u32,
            fer: r.fer,
            ser: r.ser,
        })
    }
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn code_info(code: &str) -> Result<String, JsError> {
    demo::code_info(code).map_err(js)
}

#[wasm_bindgen]
pub fn encode(code: &str, word: &str) -> Result<String, JsError> {
    demo::encode(code, word).map_err(js)
}

#[wasm_bindgen]
pub struct Transmission(demo::Transmission);

#[wasm_bindgen]
impl Transmission {
    #[wasm_bindgen(getter)]
    pub fn sent(&self) -> String {
        self.0.sent.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn decoded(&self) -> String {
        self.0.decoded.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn symbol_errors(&self) -> usize {
        self.0.symbol_errors
    }

    #[wasm_bindgen(getter)]
    pub fn received(&self) -> Vec<f64> {
        self.0.received.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn posteriors(&self) -> Vec<f64> {
        self.0.posteriors.clone()
    }
}

#[wasm_bindgen]
pub fn transmit(code: &str, decoder: &str, ebn0_db: f64, seed: u32) -> Result<Transmission, JsError> {
    demo::transmit(code, decoder, ebn0_db, seed).map(Transmission).map_err(js)
}

#[wasm_bindgen]
pub struct ErrorRate(demo::ErrorRate);

#[wasm_bindgen]
impl ErrorRate {
    #[wasm_bindgen(getter)]
    pub fn frames(&self) -> u32 {
        self.0.frames
    }

    #[wasm_bindgen(getter)]
    pub fn frame_errors(&self) -> u32 {
        self.0.frame_errors
    }

    #[wasm_bindgen(getter)]
    pub fn fer(&self) -> f64 {
        self.0.fer
    }

    #[wasm_bindgen(getter)]
    pub fn ser(&self) -> f64 {
        self.0.ser
    }
}

#[wasm_bindgen]
pub fn error_rate(code: &str, decoder: &str, ebn0_db: f64, max_frames: u32, seed: u32) -> Result<ErrorRate, JsError> {
    demo::error_rate(code, decoder, ebn0_db, max_frames, seed)
        .map(ErrorRate)
        .map_err(js)
}
