//! Binary Gram matrix files: magic, `n` (u32 LE), normalized flag (u8),
//! spec string (u32 LE length + UTF-8), then `n * n` f64 LE row-major.

use std::fs;
use std::path::Path;

use crate::error::IoError;
use crate::kernels::{GramMatrix, KernelSpec};

pub const GRAM_MAGIC: &[u8; 8] = b"GRAMMAT1";

pub fn write_gram(path: &Path, m: &GramMatrix) -> Result<(), IoError> {
    let shown = path.display().to_string();
    let fail = |reason: String| IoError::Format {
        path: shown.clone(),
        reason,
    };
    if m.values().iter().any(|v| !v.is_finite()) {
        return Err(fail("matrix has non-finite entries".into()));
    }
    if !m.is_symmetric() {
        return Err(fail("matrix is not symmetric".into()));
    }
    let n = u32::try_from(m.len()).map_err(|_| fail("matrix too large".into()))?;
    let spec = m.spec().to_string();
    let mut out = Vec::with_capacity(17 + spec.len() + 8 * m.values().len());
    out.extend_from_slice(GRAM_MAGIC);
    out.extend_from_slice(&n.to_le_bytes());
    out.push(m.is_normalized() as u8);
    out.extend_from_slice(&(spec.len() as u32).to_le_bytes());
    out.extend_from_slice(spec.as_bytes());
    for v in m.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, out).map_err(|source| IoError::Io { path: shown, source })
}

pub fn read_gram(path: &Path) -> Result<GramMatrix, IoError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| IoError::Io {
        path: shown.clone(),
        source,
    })?;
    let fail = |reason: String| IoError::Format {
        path: shown.clone(),
        reason,
    };
    let mut at = 0usize;
    let mut take = |k: usize, what: &str| -> Result<&[u8], IoError> {
        let s = bytes
            .get(at..at + k)
            .ok_or_else(|| fail(format!("truncated while reading {what}")))?;
        at += k;
        Ok(s)
    };
    if take(8, "magic")? != GRAM_MAGIC {
        return Err(fail("bad magic".into()));
    }
    let n = u32::from_le_bytes(take(4, "size")?.try_into().unwrap()) as usize;
    let normalized = match take(1, "flag")?[0] {
        0 => false,
        1 => true,
        f => return Err(fail(format!("bad normalized flag {f}"))),
    };
    let len = u32::from_le_bytes(take(4, "spec length")?.try_into().unwrap()) as usize;
    let spec_text = std::str::from_utf8(take(len, "spec")?)
        .map_err(|_| fail("spec is not UTF-8".into()))?
        .to_string();
    let body = n
        .checked_mul(n)
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| fail("size overflows".into()))?;
    let raw = take(body, "values")?;
    let values: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if at != bytes.len() {
        return Err(fail(format!("{} trailing bytes after {n}x{n} values", bytes.len() - at)));
    }
    let spec: KernelSpec = spec_text.parse().map_err(|e| fail(format!("{e}")))?;
    GramMatrix::from_values(n, values, normalized, spec).map_err(|e| fail(e.to_string()))
}
