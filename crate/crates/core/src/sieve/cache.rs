//! Binary cache for [`PrimeIdealTable`].
//!
//! All integers are little-endian.
//!
//! ```text
//! header (40 bytes)
//!   0   magic        b"PIDT"
//!   4   version      u32 = 1
//!   8   field tag    u64   (hash of the defining coefficients)
//!  16   max norm X   u64
//!  24   entry count  u64
//!  32   skip count   u64
//! skipped primes     skip count * u64
//! entries            entry count * 96 bytes
//!   0   p            u64
//!   8   e            u32
//!  12   f            u32
//!  16   ordinal      u32
//!  20   tag length   u32   (f + 1)
//!  24   gen_tag      9 * u64, constant term first, zero padded
//! ```

use std::fs;
use std::path::Path;

use super::PrimeIdealTable;
use crate::error::{Error, Result};
use crate::numberfield::{FieldSpec, PrimeIdeal, MAX_DEGREE};

const MAGIC: &[u8; 4] = b"PIDT";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 40;
const TAG_SLOTS: usize = MAX_DEGREE + 1;
const RECORD_LEN: usize = 24 + 8 * TAG_SLOTS;

pub fn encode(field: &FieldSpec, table: &PrimeIdealTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(
        HEADER_LEN + 8 * table.skipped_primes.len() + RECORD_LEN * table.entries.len(),
    );
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&field.tag().to_le_bytes());
    out.extend_from_slice(&table.max_norm.to_le_bytes());
    out.extend_from_slice(&(table.entries.len() as u64).to_le_bytes());
    out.extend_from_slice(&(table.skipped_primes.len() as u64).to_le_bytes());
    for p in &table.skipped_primes {
        out.extend_from_slice(&p.to_le_bytes());
    }
    for e in &table.entries {
        out.extend_from_slice(&e.p.to_le_bytes());
        out.extend_from_slice(&e.e.to_le_bytes());
        out.extend_from_slice(&e.f.to_le_bytes());
        out.extend_from_slice(&e.ordinal.to_le_bytes());
        out.extend_from_slice(&(e.gen_tag.len() as u32).to_le_bytes());
        for i in 0..TAG_SLOTS {
            out.extend_from_slice(&e.gen_tag.get(i).copied().unwrap_or(0).to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let bytes = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::Cache("truncated file".into()))?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice of length N"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }
}

/// Decodes a cache image. Returns `Ok(None)` when the image belongs to a
/// different field or norm bound.
pub fn decode(bytes: &[u8], field: &FieldSpec, max_norm: u64) -> Result<Option<PrimeIdealTable>> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if &r.take::<4>()? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let tag = r.u64()?;
    let x = r.u64()?;
    if tag != field.tag() || x != max_norm {
        return Ok(None);
    }
    let count = r.u64()? as usize;
    let skips = r.u64()? as usize;
    let expected = HEADER_LEN + 8 * skips + RECORD_LEN * count;
    if bytes.len() != expected {
        return Err(Error::Cache(format!(
            "length {} does not match header ({expected})",
            bytes.len()
        )));
    }
    let skipped_primes = (0..skips).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let p = r.u64()?;
        let e = r.u32()?;
        let f = r.u32()?;
        let ordinal = r.u32()?;
        let tag_len = r.u32()? as usize;
        if tag_len != f as usize + 1 || tag_len > TAG_SLOTS {
            return Err(Error::Cache("inconsistent generator length".into()));
        }
        let mut gen_tag = Vec::with_capacity(tag_len);
        for i in 0..TAG_SLOTS {
            let c = r.u64()?;
            if i < tag_len {
                gen_tag.push(c);
            }
        }
        let norm = crate::numberfield::checked_pow(p, f).ok_or(Error::NormOverflow)?;
        entries.push(PrimeIdeal {
            p,
            e,
            f,
            norm,
            gen_tag,
            ordinal,
        });
    }
    Ok(Some(PrimeIdealTable {
        entries,
        max_norm: x,
        skipped_primes,
    }))
}

pub fn save(path: &Path, field: &FieldSpec, table: &PrimeIdealTable) -> Result<()> {
    fs::write(path, encode(field, table)).map_err(|e| Error::Cache(e.to_string()))
}

pub fn load(path: &Path, field: &FieldSpec, max_norm: u64) -> Result<Option<PrimeIdealTable>> {
    match fs::read(path) {
        Ok(bytes) => decode(&bytes, field, max_norm),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::Cache(e.to_string())),
    }
}

/// Loads the table from `path` if it matches, otherwise builds and writes it.
pub fn load_or_build(path: &Path, field: &FieldSpec, max_norm: u64) -> Result<PrimeIdealTable> {
    if let Some(t) = load(path, field, max_norm)? {
        return Ok(t);
    }
    let t = super::prime_ideals_up_to(field, max_norm, false)?;
    save(path, field, &t)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use crate::sieve::prime_ideals_up_to;

    #[test]
    fn roundtrip_and_mismatch() {
        let k = parse_field(&[2, 0, 0, 1]).unwrap();
        let t = prime_ideals_up_to(&k, 5000, false).unwrap();
        let bytes = encode(&k, &t);
        assert_eq!(decode(&bytes, &k, 5000).unwrap(), Some(t));
        assert_eq!(decode(&bytes, &k, 4999).unwrap(), None);
        assert_eq!(decode(&bytes, &FieldSpec::gaussian(), 5000).unwrap(), None);
        assert!(decode(&bytes[..bytes.len() - 1], &k, 5000).is_err());
        assert!(decode(b"nope", &k, 5000).is_err());
    }

    #[test]
    fn load_or_build_writes_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gauss.pidt");
        let g = FieldSpec::gaussian();
        let a = load_or_build(&path, &g, 1000).unwrap();
        assert!(path.exists());
        let b = load_or_build(&path, &g, 1000).unwrap();
        assert_eq!(a, b);
    }
}
