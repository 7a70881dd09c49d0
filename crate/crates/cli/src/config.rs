//! Sweep configuration files.
//!
//! One `key = value` pair per line. Blank lines and lines starting with `#`
//! are ignored; list values are comma separated.
//!
//! ```text
//! codes           = nr8, k32        # required
//! decoders        = map, chase      # required
//! ebn0_start_db   = -1.6
//! ebn0_step_db    = 0.5
//! ebn0_stop_db    = 4.9             # required
//! delta           = 0.05
//! max_frames      = 10000000
//! seed            = 1
//! ebn0_convention = info-bits       # info-bits | symbol-rate | channel-bits
//! out             = results.csv     # optional, stdout otherwise
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use ringcodec::channel::EbN0Convention;
use ringcodec::sim::{ebn0_grid, DecoderId, StopRule, Sweep};
use ringcodec::CodeId;

use crate::CliError;

const KEYS: [&str; 10] = [
    "codes",
    "decoders",
    "ebn0_start_db",
    "ebn0_step_db",
    "ebn0_stop_db",
    "delta",
    "max_frames",
    "seed",
    "ebn0_convention",
    "out",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub codes: Vec<CodeId>,
    pub decoders: Vec<DecoderId>,
    pub ebn0_start_db: f64,
    pub ebn0_step_db: f64,
    pub ebn0_stop_db: f64,
    pub delta: f64,
    pub max_frames: u64,
    pub seed: u64,
    pub convention: EbN0Convention,
    pub out: Option<PathBuf>,
}

fn config_err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}

fn parse_value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| config_err(line, format!("{key}: {e}")))
}

fn parse_list<T: FromStr>(line: usize, key: &str, v: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(line, key, s))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(config_err(line, format!("{key} is empty")));
    }
    Ok(items)
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected key = value, got '{content}'")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(config_err(line, format!("unknown key '{key}'")));
            }
            if seen.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
                return Err(config_err(line, format!("duplicate key '{key}'")));
            }
        }
        let get = |k: &str| seen.get(k).map(|(l, v)| (*l, v.as_str()));
        let required = |k: &str| get(k).ok_or_else(|| CliError::Config(format!("missing required key '{k}'")));
        let or = |k: &str, default: f64| -> Result<f64, CliError> {
            get(k).map_or(Ok(default), |(l, v)| parse_value(l, k, v))
        };

        let (l, v) = required("codes")?;
        let codes = parse_list(l, "codes", v)?;
        let (l, v) = required("decoders")?;
        let decoders = parse_list(l, "decoders", v)?;
        let (l, v) = required("ebn0_stop_db")?;
        let ebn0_stop_db = parse_value(l, "ebn0_stop_db", v)?;

        let config = SweepConfig {
            codes,
            decoders,
            ebn0_start_db: or("ebn0_start_db", -1.6)?,
            ebn0_step_db: or("ebn0_step_db", 0.5)?,
            ebn0_stop_db,
            delta: or("delta", StopRule::DEFAULT_DELTA)?,
            max_frames: get("max_frames").map_or(Ok(StopRule::DEFAULT_MAX_FRAMES), |(l, v)| {
                parse_value(l, "max_frames", v)
            })?,
            seed: get("seed").map_or(Ok(1), |(l, v)| parse_value(l, "seed", v))?,
            convention: get("ebn0_convention").map_or(Ok(EbN0Convention::default()), |(l, v)| {
                parse_value(l, "ebn0_convention", v)
            })?,
            out: get("out").map(|(_, v)| PathBuf::from(v)),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn emit(&self) -> String {
        let join = |items: Vec<String>| items.join(", ");
        let mut s = String::new();
        let _ = writeln!(s, "codes = {}", join(self.codes.iter().map(|c| c.to_string()).collect()));
        let _ = writeln!(s, "decoders = {}", join(self.decoders.iter().map(|d| d.to_string()).collect()));
        let _ = writeln!(s, "ebn0_start_db = {}", self.ebn0_start_db);
        let _ = writeln!(s, "ebn0_step_db = {}", self.ebn0_step_db);
        let _ = writeln!(s, "ebn0_stop_db = {}", self.ebn0_stop_db);
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "max_frames = {}", self.max_frames);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "ebn0_convention = {}", self.convention);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.stop_rule()?;
        ebn0_grid(self.ebn0_start_db, self.ebn0_step_db, self.ebn0_stop_db)
            .map_err(|_| CliError::Config("Eb/N0 grid needs step > 0 and start <= stop".into()))?;
        Ok(())
    }

    pub fn stop_rule(&self) -> Result<StopRule, CliError> {
        StopRule::new(self.delta, self.max_frames).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn sweep(&self) -> Result<Sweep, CliError> {
        Ok(Sweep {
            codes: self.codes.clone(),
            decoders: self.decoders.clone(),
            ebn0_db: ebn0_grid(self.ebn0_start_db, self.ebn0_step_db, self.ebn0_stop_db)
                .map_err(|e| CliError::Config(e.to_string()))?,
            rule: self.stop_rule()?,
            seed: self.seed,
            convention: self.convention,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_comments() {
        let c = SweepConfig::parse("# nr sweep\ncodes = nr8\ndecoders = map, naive_map\n\nebn0_stop_db = 4.9 # inclusive\n")
            .unwrap();
        assert_eq!(c.codes, vec![CodeId::NR8]);
        assert_eq!(c.decoders, vec![DecoderId::Map, DecoderId::NaiveMap]);
        assert_eq!((c.ebn0_start_db, c.ebn0_step_db, c.delta), (-1.6, 0.5, 0.05));
        assert_eq!(c.max_frames, 10_000_000);
        assert_eq!(c.out, None);
        assert_eq!(c.sweep().unwrap().ebn0_db.len(), 14);
    }

    #[test]
    fn rejections() {
        let base = "codes = k32\ndecoders = map\nebn0_stop_db = 1\n";
        for bad in [
            "codes = k32\ndecoders = map\n",
            "codes = k33\ndecoders = map\nebn0_stop_db = 1\n",
            "codes = k32\ndecoders = viterbi\nebn0_stop_db = 1\n",
            "codes = \ndecoders = map\nebn0_stop_db = 1\n",
            &format!("{base}colour = red\n"),
            &format!("{base}seed = 1\nseed = 2\n"),
            &format!("{base}ebn0_step_db = 0\n"),
            &format!("{base}ebn0_start_db = 2\n"),
            &format!("{base}delta = 1.5\n"),
            &format!("{base}max_frames = 0\n"),
            &format!("{base}max_frames = -3\n"),
            &format!("{base}just words\n"),
        ] {
            assert!(matches!(SweepConfig::parse(bad), Err(CliError::Config(_))), "{bad}");
        }
    }
}
