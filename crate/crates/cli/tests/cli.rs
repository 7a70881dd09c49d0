use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringcodec::channel::{EbN0Convention, Labeling};
use ringcodec::sim::DecoderId;
use ringcodec::{CodeId, Family, Z4Word};
use ringcodec_cli::config::SweepConfig;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringcodec")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn info_reports() {
    let o = bin(&["info", "nr8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N=8 K=4 family=both(self-dual)"));

    let text = stdout(&bin(&["info", "k32"]));
    assert!(text.contains("N=32 K=6"));
    for key in ["m=5", "h(Z)=", "rate=", "|code|=4^6", "checksum(G)=", "checksum(H)="] {
        assert!(text.contains(key), "{key} missing from\n{text}");
    }
    assert!(stdout(&bin(&["info", "p128"])).contains("N=128 K=120 family=preparata"));

    let o = bin(&["info", "x99"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn encode_words() {
    let o = bin(&["encode", "k32", "000000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0".repeat(32));

    let spec = "p32".parse::<CodeId>().unwrap().build().unwrap();
    let u: Vec<i64> = (0..26).map(|i| (i * 7 + 1) % 4).collect();
    let digits: String = u.iter().map(|d| d.to_string()).collect();
    let c = spec.encode(&Z4Word::from_ints(u)).unwrap();
    let expect: String = c.iter().map(|s| s.to_string()).collect();
    assert_eq!(stdout(&bin(&["encode", "p32", &digits])).trim(), expect);

    assert_eq!(bin(&["encode", "k32", "0,1,2,3,0,1"]).status.code(), Some(0));
    assert_eq!(bin(&["encode", "k32", "00000"]).status.code(), Some(1));
    assert_eq!(bin(&["encode", "k32", "00000a"]).status.code(), Some(1));
}

fn samples_for(code: &str, labeling: Labeling, rng: &mut ChaCha8Rng) -> (String, String) {
    let spec = code.parse::<CodeId>().unwrap().build().unwrap();
    let c = spec
        .encode(&Z4Word::from_ints((0..spec.k()).map(|_| rng.gen_range(0..4))))
        .unwrap();
    let lines: Vec<String> = labeling
        .modulate(&c)
        .iter()
        .map(|x| format!("{},{}", x.re, x.im))
        .collect();
    (lines.join("\n"), c.iter().map(|s| s.to_string()).collect())
}

fn posteriors(text: &str) -> Vec<[f64; 4]> {
    text.lines()
        .skip_while(|l| !l.starts_with("j,"))
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

#[test]
fn decode_noiseless_words() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (code, decoder) in [
        ("nr8", DecoderId::Map),
        ("nr8", DecoderId::DualMap),
        ("k32", DecoderId::NaiveMap),
        ("p32", DecoderId::Map),
        ("k32", DecoderId::AppLifting),
        ("p32", DecoderId::Chase),
        ("p128", DecoderId::ClassicalLifting),
    ] {
        let (samples, word) = samples_for(code, decoder.labeling(), &mut rng);
        let path = write(dir.path(), "y.csv", &samples);
        let o = bin(&["decode", code, decoder.name(), "3.0", &path]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert_eq!(text.lines().next().unwrap(), format!("word={word}"), "{code} {decoder}");
        let post = posteriors(&text);
        if matches!(decoder, DecoderId::Chase | DecoderId::ClassicalLifting) {
            assert!(text.contains("posteriors=none"));
            continue;
        }
        assert_eq!(post.len(), word.len());
        for p in post {
            // six significant digits per entry
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-5);
        }
    }
}

#[test]
fn decode_noisy_posteriors_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (samples, _) = samples_for("k32", Labeling::Standard, &mut rng);
    let noisy: Vec<String> = samples
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            format!("{} {}", v[0] + rng.gen_range(-0.8..0.8), v[1] + rng.gen_range(-0.8..0.8))
        })
        .collect();
    let path = write(dir.path(), "y.txt", &noisy.join("\n"));
    let o = bin(&["decode", "k32", "map", "-1.5", &path, "--ebn0-convention", "symbol-rate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let post = posteriors(&stdout(&o));
    assert_eq!(post.len(), 32);
    for p in post {
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-5);
    }
}

#[test]
fn decode_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "short.csv", "1,0\n0,1\n");
    assert_eq!(bin(&["decode", "nr8", "map", "3", &short]).status.code(), Some(1));
    let odd = write(dir.path(), "odd.csv", "1,0,1\n");
    assert_eq!(bin(&["decode", "nr8", "map", "3", &odd]).status.code(), Some(1));
    let good = write(dir.path(), "good.csv", &"0.7,0.7\n".repeat(8));
    assert_eq!(bin(&["decode", "nr8", "turbo", "3", &good]).status.code(), Some(1));
    assert_eq!(bin(&["decode", "k32", "dual_map", "3", &good]).status.code(), Some(1));
}

#[test]
fn simulate_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "one.cfg",
        "codes = nr8\ndecoders = map\nebn0_start_db = 1\nebn0_stop_db = 1\ndelta = 0.2\n",
    );
    let o = bin(&["simulate", &cfg]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], ringcodec_cli::table::HEADER);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..3], &["nr8", "map", "1.00000e0"]);
    assert!(fields[3].parse::<u64>().unwrap() > 0);
    assert_eq!(fields[4], "25");
    assert_eq!(fields[9], "1");
}

#[test]
fn simulate_is_deterministic_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "two.cfg",
        "codes = nr8, k32\ndecoders = map, app_lifting\nebn0_start_db = 0\nebn0_step_db = 1\nebn0_stop_db = 1\ndelta = 0.25\nseed = 5\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = bin(&["simulate", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let first = fs::read_to_string(&a).unwrap();
    assert_eq!(first, fs::read_to_string(&b).unwrap());
    assert_eq!(first.lines().count(), 1 + 2 * 2 * 2);

    let o = bin(&["simulate", &cfg, "--seed", "9", "--max-frames", "10"]);
    let text = stdout(&o);
    for row in text.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        assert!(f[3].parse::<u64>().unwrap() <= 10);
        assert_eq!(f[9], "9");
    }
    let o = bin(&["simulate", &cfg, "--delta", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.cfg");
    assert_eq!(bin(&["simulate", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.cfg", "codes = p32\ndecoders = naive_map\nebn0_stop_db = 0\n");
    let o = bin(&["simulate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("naive_map"));
    let typo = write(dir.path(), "typo.cfg", "codes = nr8\ndecoder = map\nebn0_stop_db = 0\n");
    assert_eq!(bin(&["simulate", &typo]).status.code(), Some(2));
    assert_eq!(bin(&["simulate"]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn nr_sweep_fer_is_nonincreasing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.cfg", "codes = nr8\ndecoders = map\nebn0_stop_db = 2.4\n");
    let o = bin(&["simulate", &cfg]);
    assert!(o.status.success());
    let text = stdout(&o);
    let fer: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(7).unwrap().parse().unwrap())
        .collect();
    assert_eq!(fer.len(), 9);
    assert!(fer.windows(2).all(|w| w[1] <= w[0]), "{fer:?}");
}

fn arb_config() -> impl Strategy<Value = SweepConfig> {
    let codes = prop::sample::subsequence(
        vec![
            CodeId::NR8,
            CodeId::new(Family::Kerdock, 5),
            CodeId::new(Family::Preparata, 5),
            CodeId::new(Family::Preparata, 7),
        ],
        1..4,
    );
    let decoders = prop::sample::subsequence(DecoderId::ALL.to_vec(), 1..6);
    let conventions = prop::sample::select(vec![
        EbN0Convention::InfoBits,
        EbN0Convention::SymbolRate,
        EbN0Convention::ChannelBits,
    ]);
    (
        codes,
        decoders,
        -20.0f64..20.0,
        0.001f64..3.0,
        0.0f64..10.0,
        0.001f64..0.999,
        1u64..u64::MAX,
        any::<u64>(),
        conventions,
        prop::option::of("[a-z]{1,8}\\.csv"),
    )
        .prop_map(|(codes, decoders, start, step, span, delta, max_frames, seed, convention, out)| SweepConfig {
            codes,
            decoders,
            ebn0_start_db: start,
            ebn0_step_db: step,
            ebn0_stop_db: start + span,
            delta,
            max_frames,
            seed,
            convention,
            out: out.map(Into::into),
        })
}

proptest! {
    #[test]
    fn config_roundtrip(c in arb_config()) {
        prop_assert_eq!(SweepConfig::parse(&c.emit()).unwrap(), c);
    }
}
