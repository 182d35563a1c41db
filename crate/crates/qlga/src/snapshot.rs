//! Binary snapshot format for spinor fields.
//!
//! Layout: magic `QLGA`, u32 format version, u32 x 3 dims, u32 component
//! count, u8 precision tag (8 = f64), then little-endian (re, im) f64 pairs
//! in site order with the component index fastest. Round trips are
//! bit-exact.

use crate::error::{Error, Result};
use crate::field::{check_dims, site_count, Dims, SpinorField, COMPONENTS};
use crate::C64;
use std::io::{Read, Write};

pub const MAGIC: [u8; 4] = *b"QLGA";
pub const FORMAT_VERSION: u32 = 1;
const PRECISION_F64: u8 = 8;

/// Writes a field snapshot.
pub fn write_snapshot<W: Write>(field: &SpinorField, sink: &mut W) -> Result<()> {
    let dims = field.dims();
    sink.write_all(&MAGIC)?;
    sink.write_all(&FORMAT_VERSION.to_le_bytes())?;
    for d in dims {
        let d32 = u32::try_from(d)
            .map_err(|_| Error::Snapshot(format!("dim {d} exceeds u32 range")))?;
        sink.write_all(&d32.to_le_bytes())?;
    }
    sink.write_all(&(COMPONENTS as u32).to_le_bytes())?;
    sink.write_all(&[PRECISION_F64])?;
    for z in field.amplitudes() {
        sink.write_all(&z.re.to_le_bytes())?;
        sink.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a field snapshot written by [`write_snapshot`].
pub fn read_snapshot<R: Read>(source: &mut R) -> Result<SpinorField> {
    let mut magic = [0u8; 4];
    read_exact(source, &mut magic, "magic")?;
    if magic != MAGIC {
        return Err(Error::Snapshot(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let version = read_u32(source, "version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported format version {version} (supported: {FORMAT_VERSION})"
        )));
    }
    let dims: Dims = [
        read_u32(source, "dims[0]")? as usize,
        read_u32(source, "dims[1]")? as usize,
        read_u32(source, "dims[2]")? as usize,
    ];
    check_dims(dims).map_err(|_| Error::Snapshot(format!("invalid dims {dims:?}")))?;
    let comps = read_u32(source, "component count")?;
    if comps as usize != COMPONENTS {
        return Err(Error::Snapshot(format!(
            "component count {comps} unsupported (expected {COMPONENTS})"
        )));
    }
    let mut tag = [0u8; 1];
    read_exact(source, &mut tag, "precision tag")?;
    if tag[0] != PRECISION_F64 {
        return Err(Error::Snapshot(format!("unknown precision tag {}", tag[0])));
    }
    let n = site_count(dims)
        .checked_mul(COMPONENTS)
        .ok_or_else(|| Error::Snapshot(format!("dims {dims:?} overflow")))?;
    let mut data = Vec::with_capacity(n);
    let mut buf = [0u8; 16];
    for _ in 0..n {
        read_exact(source, &mut buf, "amplitude payload")?;
        let re = f64::from_le_bytes(buf[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..16].try_into().unwrap());
        data.push(C64::new(re, im));
    }
    // Use the raw constructor path but keep validation (finite amplitudes).
    SpinorField::from_amplitudes(dims, data)
}

fn read_exact<R: Read>(source: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    source
        .read_exact(buf)
        .map_err(|e| Error::Snapshot(format!("truncated {what}: {e}")))
}

fn read_u32<R: Read>(source: &mut R, what: &str) -> Result<u32> {
    let mut buf = [0u8; 4];
    read_exact(source, &mut buf, what)?;
    Ok(u32::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Initializer;

    fn sample_field() -> SpinorField {
        SpinorField::new(
            [2, 3, 4],
            &Initializer::GaussianPacket {
                center: [1.0, 1.5, 2.0],
                width: 0.8,
                k: [0.5, -0.25, 1.0],
                polarization: [
                    C64::new(0.5, -0.1),
                    C64::new(0.0, 0.3),
                    C64::new(-0.7, 0.2),
                    C64::new(0.1, 0.0),
                ],
            },
        )
        .unwrap()
    }

    #[test]
    fn roundtrip_bit_exact() {
        let f = sample_field();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        let g = read_snapshot(&mut buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn corrupted_magic_rejected() {
        let f = sample_field();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        buf[0] = b'X';
        let err = read_snapshot(&mut buf.as_slice()).unwrap_err();
        assert!(err.to_string().contains("magic"));
    }

    #[test]
    fn future_version_rejected() {
        let f = sample_field();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        let bumped = (FORMAT_VERSION + 1).to_le_bytes();
        buf[4..8].copy_from_slice(&bumped);
        let err = read_snapshot(&mut buf.as_slice()).unwrap_err();
        assert!(err.to_string().contains("version"));
    }

    #[test]
    fn truncated_payload_rejected() {
        let f = sample_field();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        buf.truncate(buf.len() - 7);
        let err = read_snapshot(&mut buf.as_slice()).unwrap_err();
        assert!(err.to_string().contains("truncated"));
    }
}
