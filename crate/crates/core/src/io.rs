//! The FLD1 binary field format and decomposition dumps.
//!
//! FLD1 layout, all little-endian:
//!
//! ```text
//! "FLD1" | u32 n | u32 sizes[n] | f64 period | u8 domain (0 physical, 1 spectral)
//!        | prod(sizes) × (f64 re, f64 im), row-major
//! ```
//!
//! Spectral payloads use array (FFT) order along each axis: index `i`
//! holds wavenumber `i` for `i < size/2` and `i - size` otherwise.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Domain, Field};
use crate::grid::Grid;
use crate::paraproduct::{ProductDecomposition, SupportReport};

pub const MAGIC: &[u8; 4] = b"FLD1";

pub fn write_field<W: Write>(mut w: W, field: &Field, domain: Domain) -> Result<()> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(17 + 4 * grid.dim() + 16 * grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for &s in grid.sizes() {
        buf.extend_from_slice(&(s as u32).to_le_bytes());
    }
    buf.extend_from_slice(&grid.period().to_le_bytes());
    let (tag, data) = match domain {
        Domain::Physical => (0u8, field.physical()),
        Domain::Spectral => (1u8, field.spectral()),
    };
    buf.push(tag);
    for c in data {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Format("unexpected end of data".into()));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

fn u32_at(bytes: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_le_bytes(take(bytes, 4)?.try_into().unwrap()))
}

fn f64_at(bytes: &mut &[u8]) -> Result<f64> {
    Ok(f64::from_le_bytes(take(bytes, 8)?.try_into().unwrap()))
}

/// Parses an FLD1 payload, returning the field and the stored domain.
pub fn decode_field(mut bytes: &[u8]) -> Result<(Field, Domain)> {
    let b = &mut bytes;
    if take(b, 4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32_at(b)? as usize;
    if !(1..=3).contains(&n) {
        return Err(Error::Format(format!("dimension {n}")));
    }
    let sizes = (0..n)
        .map(|_| u32_at(b).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let period = f64_at(b)?;
    let grid = Grid::with_sizes(sizes, period)?;
    let domain = match take(b, 1)?[0] {
        0 => Domain::Physical,
        1 => Domain::Spectral,
        t => return Err(Error::Format(format!("domain tag {t}"))),
    };
    let mut data = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = f64_at(b)?;
        let im = f64_at(b)?;
        data.push(Complex64::new(re, im));
    }
    if !b.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", b.len())));
    }
    let field = match domain {
        Domain::Physical => Field::from_physical(&grid, data)?,
        Domain::Spectral => Field::from_spectral(&grid, data)?,
    };
    Ok((field, domain))
}

pub fn read_field<R: Read>(mut r: R) -> Result<(Field, Domain)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_field(&bytes)
}

pub fn save_field(path: impl AsRef<Path>, field: &Field, domain: Domain) -> Result<()> {
    let file = fs::File::create(path)?;
    write_field(std::io::BufWriter::new(file), field, domain)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<Field> {
    Ok(decode_field(&fs::read(path)?)?.0)
}

/// Manifest written next to a decomposition dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionManifest {
    pub m: usize,
    pub gap: usize,
    pub grid: Grid,
    pub jmax: usize,
    pub files: Vec<String>,
    pub reconstruction_error: f64,
    pub supports: SupportReport,
}

/// Writes `pi1_k{K}.fld`, optionally `pi1_k{K}_j{J}.fld`, `pi2.fld`,
/// `product.fld` and `manifest.json` into `dir`. Factor indices in file
/// names are one-based. Fields are stored in the spectral domain.
pub fn write_decomposition(
    dir: impl AsRef<Path>,
    pd: &ProductDecomposition,
    supports: &SupportReport,
    jmax: usize,
    dump_bands: bool,
) -> Result<DecompositionManifest> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut put = |name: String, f: &Field| -> Result<()> {
        let path: PathBuf = dir.join(&name);
        save_field(path, f, Domain::Spectral)?;
        files.push(name);
        Ok(())
    };
    for (k, f) in pd.pi1.iter().enumerate() {
        put(format!("pi1_k{}.fld", k + 1), f)?;
    }
    if dump_bands {
        for t in pd.pi1_bands.iter().flatten() {
            put(format!("pi1_k{}_j{}.fld", t.k + 1, t.j), &t.field)?;
        }
    }
    put("pi2.fld".into(), &pd.pi2)?;
    put("product.fld".into(), &pd.product)?;
    let scale = pd.product.l2_spectral().max(f64::MIN_POSITIVE);
    let manifest = DecompositionManifest {
        m: pd.m,
        gap: pd.gap,
        grid: pd.grid.clone(),
        jmax,
        files,
        reconstruction_error: pd.reconstruct().l2_distance(&pd.product)? / scale,
        supports: supports.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicSystem;
    use crate::paraproduct::{decompose_product, verify_supports, SUPPORT_TOL};

    #[test]
    fn header_layout_is_exact() {
        let g = Grid::periodic(2, 16).unwrap();
        let f = Field::plane_wave(&g, &[1, -2], Complex64::new(0.5, 0.25)).unwrap();
        let mut bytes = Vec::new();
        write_field(&mut bytes, &f, Domain::Spectral).unwrap();
        assert_eq!(&bytes[..4], b"FLD1");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &16u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &16u32.to_le_bytes());
        assert_eq!(&bytes[16..24], &g.period().to_le_bytes());
        assert_eq!(bytes[24], 1);
        assert_eq!(bytes.len(), 25 + 16 * 256);
        // (1, -2) sits at row 1, column 14
        let off = 25 + 16 * (16 + 14);
        assert_eq!(&bytes[off..off + 8], &0.5f64.to_le_bytes());
        let (back, dom) = decode_field(&bytes).unwrap();
        assert_eq!(dom, Domain::Spectral);
        assert_eq!(back, f);
    }

    #[test]
    fn physical_round_trip_and_corruption() {
        let g = Grid::periodic(1, 32).unwrap();
        let f = Field::from_fn(&g, |x| Complex64::new(x[0].sin(), 0.1));
        let mut bytes = Vec::new();
        write_field(&mut bytes, &f, Domain::Physical).unwrap();
        let (back, _) = decode_field(&bytes).unwrap();
        assert_eq!(back.physical(), f.physical());
        assert!(decode_field(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_field(&bad), Err(Error::Format(_))));
        let mut tag = bytes.clone();
        tag[20] = 7;
        assert!(decode_field(&tag).is_err());
        bytes.push(0);
        assert!(decode_field(&bytes).is_err());
    }

    #[test]
    fn dump_writes_every_file() {
        let g = Grid::periodic(1, 64).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = Field::plane_wave(&g, &[12], Complex64::new(1.0, 0.0)).unwrap();
        let h = Field::plane_wave(&g, &[1], Complex64::new(1.0, 0.0)).unwrap();
        let pd = decompose_product(&[f, h], &sys, 3).unwrap();
        let rep = verify_supports(&pd, &sys, SUPPORT_TOL);
        let dir = tempfile::tempdir().unwrap();
        let man = write_decomposition(dir.path(), &pd, &rep, sys.jmax(), true).unwrap();
        assert!(man.files.contains(&"pi1_k1.fld".to_string()));
        assert!(man.files.contains(&"pi1_k2_j4.fld".to_string()));
        for name in &man.files {
            assert!(dir.path().join(name).exists());
        }
        let product = load_field(dir.path().join("product.fld")).unwrap();
        assert!(product.l2_distance(&pd.product).unwrap() < 1e-15);
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(json["m"], 2);
        assert_eq!(json["gap"], 3);
    }
}
