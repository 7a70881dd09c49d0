//! CSV rows for simulation records.

use ringcodec::sim::SimRecord;

pub const HEADER: &str = "code,decoder,ebn0_db,frames,frame_errors,symbol_errors,ml_bound_errors,fer,ser,seed";

/// Scientific notation with six significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

pub fn row(r: &SimRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.code,
        r.decoder,
        sci(r.ebn0_db),
        r.frames,
        r.frame_errors,
        r.symbol_errors,
        r.ml_bound_errors,
        sci(r.fer),
        sci(r.ser),
        r.seed
    )
}

pub fn render(records: &[SimRecord]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&row(r));
        out.push('\n');
    }
    out
}
