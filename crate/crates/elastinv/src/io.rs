//! CSV plot data and the binary field dump.
//!
//! Every CSV starts with a `# run <id>` line naming the manifest it belongs
//! to; readers skip `#` lines.

use std::fs;
use std::io::Read;
use std::path::Path;

use elastinv_core::decomposition::FarFieldRecord;
use elastinv_core::forward::ForwardField;
use elastinv_core::{ModeCoefficients, C64};

use crate::error::CliError;

/// Writes a header and rows of numbers as CSV.
pub fn write_table(path: &Path, run_id: &str, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::io(path, e))?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(|e| CliError::io(path, e))?;
    }
    let body = w.into_inner().map_err(|e| CliError::io(path, e))?;
    let mut out = format!("# run {run_id}\n").into_bytes();
    out.extend(body);
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Header and numeric rows of a CSV written by [`write_table`].
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).map_err(|e| CliError::io(path, e))?;
    let header = r.headers().map_err(|e| CliError::io(path, e))?.iter().map(String::from).collect::<Vec<_>>();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::io(path, e))?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        rows.push(row);
    }
    Ok((header, rows))
}

fn names(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

const RECORD_COLUMNS: [&str; 5] = ["x", "re_u1", "im_u1", "re_u2", "im_u2"];

pub fn write_record(path: &Path, run_id: &str, rec: &FarFieldRecord) -> Result<(), CliError> {
    let rows: Vec<Vec<f64>> = (0..rec.xs.len())
        .map(|i| vec![rec.xs[i], rec.u1[i].re, rec.u1[i].im, rec.u2[i].re, rec.u2[i].im])
        .collect();
    write_table(path, run_id, &names(&RECORD_COLUMNS), &rows)
}

/// Reads a measurement CSV; the period is recovered from the uniform spacing.
pub fn read_record(path: &Path) -> Result<FarFieldRecord, CliError> {
    let (header, rows) = read_table(path)?;
    if header != RECORD_COLUMNS {
        return Err(CliError::Config(format!("{}: expected columns {}", path.display(), RECORD_COLUMNS.join(","))));
    }
    if rows.len() < 2 || rows.iter().any(|r| r.len() != 5) {
        return Err(CliError::Config(format!("{}: need at least two complete rows", path.display())));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let rec = FarFieldRecord {
        period: (xs[1] - xs[0]) * xs.len() as f64,
        u1: rows.iter().map(|r| C64::new(r[1], r[2])).collect(),
        u2: rows.iter().map(|r| C64::new(r[3], r[4])).collect(),
        xs,
        delta: 0.0,
        seed: 0,
    };
    rec.validate()?;
    Ok(rec)
}

pub fn write_modes(path: &Path, run_id: &str, modes: &ModeCoefficients) -> Result<(), CliError> {
    let rows: Vec<Vec<f64>> = modes.modes().map(|n| vec![n as f64, modes.get(n).re, modes.get(n).im]).collect();
    write_table(path, run_id, &names(&["n", "re", "im"]), &rows)
}

const DUMP_MAGIC: &[u8; 4] = b"EIFF";
const DUMP_VERSION: u32 = 1;

/// Binary layout, little endian: magic `EIFF`, u32 version, u64 nx, u64 ny,
/// u64 kb, f64 Λ, f64 a, f64 b, then rows k = 0..=ny, each holding
/// u₁ at the nx nodes followed by u₂, every value as (re, im) f64 pairs.
pub fn write_field_dump(path: &Path, field: &ForwardField) -> Result<(), CliError> {
    let mut out = Vec::with_capacity(56 + field.rows.len() * 32 * field.grid.nx);
    out.extend_from_slice(DUMP_MAGIC);
    out.extend_from_slice(&DUMP_VERSION.to_le_bytes());
    for v in [field.grid.nx, field.grid.ny, field.kb] {
        out.extend_from_slice(&(v as u64).to_le_bytes());
    }
    for v in [field.period, field.a, field.b] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for row in &field.rows {
        for z in row {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Header (nx, ny, kb, Λ, a, b) and rows of a dump.
pub type FieldDump = ([usize; 3], [f64; 3], Vec<Vec<C64>>);

pub fn read_field_dump(path: &Path) -> Result<FieldDump, CliError> {
    let mut bytes = Vec::new();
    fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: &str| CliError::Config(format!("{}: {msg}", path.display()));
    if bytes.len() < 56 || &bytes[..4] != DUMP_MAGIC {
        return Err(bad("not a field dump"));
    }
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    if u32::from_le_bytes(bytes[4..8].try_into().unwrap()) != DUMP_VERSION {
        return Err(bad("unsupported dump version"));
    }
    let dims = [u64_at(8) as usize, u64_at(16) as usize, u64_at(24) as usize];
    let geom = [f64_at(32), f64_at(40), f64_at(48)];
    let (nx, ny) = (dims[0], dims[1]);
    if bytes.len() != 56 + (ny + 1) * 2 * nx * 16 {
        return Err(bad("length does not match header"));
    }
    let rows = (0..=ny)
        .map(|k| (0..2 * nx).map(|i| {
            let o = 56 + (k * 2 * nx + i) * 16;
            C64::new(f64_at(o), f64_at(o + 8))
        }).collect())
        .collect();
    Ok((dims, geom, rows))
}
