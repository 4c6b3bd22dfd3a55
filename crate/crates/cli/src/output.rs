//! Deterministic artifacts: fixed-precision CSV tables and atomic file
//! placement (write to a temporary sibling, then rename into place).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::Failure;

/// Format a value with twelve significant digits in plain decimal notation.
///
/// Fixed-point output keeps columns aligned and diffs stable across runs;
/// exponents never appear.  Zero prints as a bare `0`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let decimals = (11 - x.abs().log10().floor() as i64).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn io_failure(path: &Path, err: io::Error) -> Failure {
    Failure::config(format!("cannot write {}: {err}", path.display()))
}

/// Write bytes atomically: a temporary sibling is renamed over the target,
/// so a crash never leaves a half-written artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| io_failure(path, e))?;
        }
    }
    let tmp = PathBuf::from(format!("{}.tmp", path.display()));
    fs::write(&tmp, bytes).map_err(|e| io_failure(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_failure(path, e))
}

/// Path of one named artifact under the common prefix.
pub fn artifact(prefix: &str, name: &str) -> PathBuf {
    PathBuf::from(format!("{prefix}.{name}"))
}

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    text.into_bytes()
}

/// `<prefix>.sequence.csv` with columns `t,s_t,p_t`.
pub fn sequence_csv(prefix: &str, rows: &[(usize, f64, f64)]) -> Result<(), Failure> {
    write_atomic(
        &artifact(prefix, "sequence.csv"),
        &table(
            "t,s_t,p_t",
            rows.iter().map(|(t, s, p)| format!("{t},{},{}", sig12(*s), sig12(*p))),
        ),
    )
}

/// `<prefix>.frontier.csv` with columns `p0,Pi0,W0`.
pub fn frontier_csv(prefix: &str, rows: &[(f64, f64, f64)]) -> Result<(), Failure> {
    write_atomic(
        &artifact(prefix, "frontier.csv"),
        &table(
            "p0,Pi0,W0",
            rows.iter()
                .map(|(p0, pi0, w0)| format!("{},{},{}", sig12(*p0), sig12(*pi0), sig12(*w0))),
        ),
    )
}

/// `<prefix>.sweep.csv` with columns `param,s1_star,sbar_star,Pi0`.
pub fn sweep_csv(prefix: &str, rows: &[(f64, f64, f64, f64)]) -> Result<(), Failure> {
    write_atomic(
        &artifact(prefix, "sweep.csv"),
        &table(
            "param,s1_star,sbar_star,Pi0",
            rows.iter().map(|(x, s1, sbar, pi0)| {
                format!("{},{},{},{}", sig12(*x), sig12(*s1), sig12(*sbar), sig12(*pi0))
            }),
        ),
    )
}

/// `<prefix>.verify.csv` with columns `t,constraint,slack_lo,slack_hi`.
pub fn verify_csv(prefix: &str, rows: &[(usize, &'static str, f64, f64)]) -> Result<(), Failure> {
    write_atomic(
        &artifact(prefix, "verify.csv"),
        &table(
            "t,constraint,slack_lo,slack_hi",
            rows.iter()
                .map(|(t, kind, lo, hi)| format!("{t},{kind},{},{}", sig12(*lo), sig12(*hi))),
        ),
    )
}

/// `<prefix>.plot.csv` with columns `series,t,value`: the knowledge and
/// payment staircases plus one marker row (the conserved level for
/// infinite-horizon contracts, the terminal point for retirement ones).
pub fn plot_csv(prefix: &str, rows: &[(&'static str, usize, f64)]) -> Result<(), Failure> {
    write_atomic(
        &artifact(prefix, "plot.csv"),
        &table(
            "series,t,value",
            rows.iter().map(|(series, t, x)| format!("{series},{t},{}", sig12(*x))),
        ),
    )
}

/// Read a `t,s_t,p_t` table back into knowledge and payment vectors.
///
/// Rows must carry consecutive periods starting at zero; a malformed file
/// is a configuration error, not a verification verdict.
pub fn read_sequence(path: &Path) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read contract {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "t,s_t,p_t")) => {}
        _ => {
            return Err(Failure::config(format!(
                "contract {} must start with the header \"t,s_t,p_t\"",
                path.display()
            )))
        }
    }
    let mut s = Vec::new();
    let mut p = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| {
            Failure::config(format!(
                "contract {} row {}: {what} in \"{line}\"",
                path.display(),
                i + 1
            ))
        };
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 3 {
            return Err(bad("expected 3 comma-separated values"));
        }
        let t: usize = cells[0].parse().map_err(|_| bad("unreadable period"))?;
        if t != s.len() {
            return Err(bad("periods must be consecutive from 0"));
        }
        s.push(cells[1].parse::<f64>().map_err(|_| bad("unreadable knowledge level"))?);
        p.push(cells[2].parse::<f64>().map_err(|_| bad("unreadable payment"))?);
    }
    if s.is_empty() {
        return Err(Failure::config(format!("contract {} has no rows", path.display())));
    }
    Ok((s, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits_in_fixed_point() {
        assert_eq!(sig12(0.92), "0.920000000000");
        assert_eq!(sig12(1.6), "1.60000000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-0.225), "-0.225000000000");
        assert_eq!(sig12(123.456), "123.456000000");
        assert_eq!(sig12(0.618033988749895), "0.618033988750");
        assert_eq!(sig12(1.0 - 1e-16), "1.000000000000");
    }

    #[test]
    fn atomic_write_leaves_no_temporary_behind() {
        let dir = std::env::temp_dir().join(format!("gradual-out-{}", std::process::id()));
        let path = dir.join("nested").join("x.csv");
        write_atomic(&path, b"hello\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "hello\n");
        assert!(!PathBuf::from(format!("{}.tmp", path.display())).exists());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn sequence_files_round_trip() {
        let dir = std::env::temp_dir().join(format!("gradual-seq-{}", std::process::id()));
        let prefix = dir.join("run").display().to_string();
        sequence_csv(&prefix, &[(0, 0.0, 0.0), (1, 0.4, 0.4), (2, 0.5, 0.225)]).unwrap();
        let (s, p) = read_sequence(&artifact(&prefix, "sequence.csv")).unwrap();
        assert_eq!(s, vec![0.0, 0.4, 0.5]);
        assert_eq!(p, vec![0.0, 0.4, 0.225]);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn malformed_sequence_files_are_named_precisely() {
        let dir = std::env::temp_dir().join(format!("gradual-bad-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");

        fs::write(&path, "s,p\n0,0\n").unwrap();
        let err = read_sequence(&path).unwrap_err();
        assert!(err.message.contains("header"), "{}", err.message);

        fs::write(&path, "t,s_t,p_t\n0,0.0,0.0\n2,0.5,0.1\n").unwrap();
        let err = read_sequence(&path).unwrap_err();
        assert!(err.message.contains("consecutive"), "{}", err.message);

        fs::write(&path, "t,s_t,p_t\n0,zero,0.0\n").unwrap();
        let err = read_sequence(&path).unwrap_err();
        assert!(err.message.contains("knowledge"), "{}", err.message);
        fs::remove_dir_all(&dir).unwrap();
    }
}
