use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use ringcodec::channel::{ebn0_to_sigma_with, EbN0Convention};
use ringcodec::sim::{run_sweep, Decoder, DecoderId, SimRecord};
use ringcodec::{CodeId, Error, Z4Word};

use crate::config::SweepConfig;
use crate::table::{self, sci};
use crate::CliError;

fn parse_code(s: &str) -> Result<CodeId, CliError> {
    s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn runtime(e: Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// FNV-1a over the matrix entries, rows separated by a marker byte.
fn checksum(rows: &[Vec<u8>]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for row in rows {
        for &b in row.iter().chain(std::iter::once(&0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn poly_string(coeffs: &[u8]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "Z".into(),
            (1, c) => format!("{c}Z"),
            (i, 1) => format!("Z^{i}"),
            (i, c) => format!("{c}Z^{i}"),
        })
        .collect();
    terms.join(" + ")
}

pub fn info(code: &str) -> Result<String, CliError> {
    let id = parse_code(code)?;
    let spec = id.build().map_err(runtime)?;
    let family = if id.self_dual_alias {
        "both(self-dual)".to_string()
    } else {
        spec.family().to_string()
    };
    let mut s = String::new();
    let _ = writeln!(s, "code={id}");
    let _ = writeln!(s, "N={} K={} family={family}", spec.n(), spec.k());
    let _ = writeln!(s, "m={}", spec.m());
    let _ = writeln!(s, "h(Z)={}", poly_string(spec.defining_polynomial()));
    let _ = writeln!(
        s,
        "rate={}/{} symbols per use ({} bits/use)",
        spec.k(),
        spec.n(),
        spec.rate_bits_per_use()
    );
    let _ = writeln!(s, "|code|=4^{}", spec.k());
    let _ = writeln!(s, "checksum(G)={:016x}", checksum(spec.generator()));
    let _ = writeln!(s, "checksum(H)={:016x}", checksum(spec.parity_check()));
    Ok(s)
}

fn parse_word(text: &str) -> Result<Z4Word, CliError> {
    let t = text.trim();
    let symbols: Vec<String> = if t.contains(',') {
        t.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        t.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
    };
    let parsed: Vec<u8> = symbols
        .iter()
        .map(|s| match s.as_str() {
            "0" => Ok(0),
            "1" => Ok(1),
            "2" => Ok(2),
            "3" => Ok(3),
            other => Err(CliError::Usage(format!("'{other}' is not a Z4 symbol"))),
        })
        .collect::<Result<_, _>>()?;
    if parsed.is_empty() {
        return Err(CliError::Usage("empty word".into()));
    }
    Z4Word::new(parsed).map_err(|e| CliError::Usage(e.to_string()))
}

fn word_string(w: &Z4Word) -> String {
    w.iter().map(|s| char::from(b'0' + s)).collect()
}

pub fn encode(code: &str, word: &str) -> Result<String, CliError> {
    let spec = parse_code(code)?.build().map_err(runtime)?;
    let u = parse_word(word)?;
    if u.len() != spec.k() {
        return Err(CliError::Usage(format!(
            "{code} takes {} information symbols, got {}",
            spec.k(),
            u.len()
        )));
    }
    let c = spec.encode(&u).map_err(runtime)?;
    Ok(format!("{}\n", word_string(&c)))
}

/// Interleaved `re, im` pairs separated by commas, whitespace or newlines.
pub fn parse_samples(text: &str) -> Result<Vec<Complex64>, CliError> {
    let values: Vec<f64> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("'{s}' is not a number")))
        })
        .collect::<Result<_, _>>()?;
    if !values.len().is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "odd number of values ({}); expected re,im pairs",
            values.len()
        )));
    }
    Ok(values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

pub fn decode(
    code: &str,
    decoder: &str,
    ebn0_db: f64,
    samples: &str,
    convention: EbN0Convention,
) -> Result<String, CliError> {
    let id = parse_code(code)?;
    let did: DecoderId = decoder.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let y = parse_samples(samples)?;
    let d = Decoder::new(id, did).map_err(|e| CliError::Usage(e.to_string()))?;
    if y.len() != d.spec().n() {
        return Err(CliError::Usage(format!(
            "{code} has length {}, got {} samples",
            d.spec().n(),
            y.len()
        )));
    }
    let params = ebn0_to_sigma_with(ebn0_db, d.spec(), convention);
    let (word, post) = d.decode_soft(&y, &params).map_err(runtime)?;
    let mut s = format!("word={}\n", word_string(&word));
    match post {
        Some(post) => {
            s.push_str("j,p0,p1,p2,p3\n");
            for (j, p) in post.iter().enumerate() {
                let _ = writeln!(s, "{j},{},{},{},{}", sci(p.0[0]), sci(p.0[1]), sci(p.0[2]), sci(p.0[3]));
            }
        }
        None => s.push_str("posteriors=none\n"),
    }
    Ok(s)
}

/// Overrides given on the command line take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub max_frames: Option<u64>,
    pub out: Option<std::path::PathBuf>,
    pub convention: Option<EbN0Convention>,
}

pub fn load_config(path: &Path, o: &Overrides) -> Result<SweepConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut c = SweepConfig::parse(&text)?;
    c.seed = o.seed.unwrap_or(c.seed);
    c.delta = o.delta.unwrap_or(c.delta);
    c.max_frames = o.max_frames.unwrap_or(c.max_frames);
    c.convention = o.convention.unwrap_or(c.convention);
    if o.out.is_some() {
        c.out = o.out.clone();
    }
    c.validate()?;
    for &code in &c.codes {
        for &dec in &c.decoders {
            Decoder::new(code, dec).map_err(|e| match e {
                Error::IncompatibleDecoder { .. } => CliError::Config(e.to_string()),
                e => runtime(e),
            })?;
        }
    }
    Ok(c)
}

pub fn simulate(config: &SweepConfig) -> Result<Vec<SimRecord>, CliError> {
    let sweep = config.sweep()?;
    run_sweep(&sweep).map_err(|e| match e {
        Error::IncompatibleDecoder { .. } => CliError::Config(e.to_string()),
        e => runtime(e),
    })
}

pub fn write_records(config: &SweepConfig, records: &[SimRecord]) -> Result<Option<String>, CliError> {
    let csv = table::render(records);
    match &config.out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(csv)),
    }
}
