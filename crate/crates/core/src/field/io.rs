//! Binary field files.
//!
//! Layout: a 16-byte header whose first 8 bytes are the magic `LFPPFLD1`
//! (zero padded to 16), then little-endian `u32 n`, `f64 spacing`,
//! `f64 origin_x`, `f64 origin_y`, `u8 periodic`, `u8 normalization_tag`,
//! followed by `n * n` little-endian IEEE-754 f64 values in row-major order.

use crate::error::{Error, Result};
use crate::field::grid::{GridField, Normalization};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"LFPPFLD1";
const HEADER_LEN: usize = 16;

pub fn write_field<W: Write>(w: &mut W, field: &GridField) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[..8].copy_from_slice(MAGIC);
    w.write_all(&header)?;
    w.write_all(&(field.n() as u32).to_le_bytes())?;
    w.write_all(&field.spacing().to_le_bytes())?;
    w.write_all(&field.origin().0.to_le_bytes())?;
    w.write_all(&field.origin().1.to_le_bytes())?;
    w.write_all(&[field.periodic() as u8])?;
    w.write_all(&[field.normalization().tag()])?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<GridField> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[..8] != MAGIC {
        return Err(Error::Format("not a field file (bad magic)".into()));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    let n = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    r.read_exact(&mut f64buf)?;
    let spacing = f64::from_le_bytes(f64buf);
    r.read_exact(&mut f64buf)?;
    let ox = f64::from_le_bytes(f64buf);
    r.read_exact(&mut f64buf)?;
    let oy = f64::from_le_bytes(f64buf);
    let mut byte = [0u8; 1];
    r.read_exact(&mut byte)?;
    let periodic = byte[0] != 0;
    r.read_exact(&mut byte)?;
    let normalization = Normalization::from_tag(byte[0])?;
    let count = n
        .checked_mul(n)
        .ok_or_else(|| Error::Format("grid size overflow".into()))?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut f64buf)?;
        values.push(f64::from_le_bytes(f64buf));
    }
    GridField::new(n, spacing, (ox, oy), periodic, normalization, values)
}

pub fn save_field(path: &Path, field: &GridField) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<GridField> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut r)
}
