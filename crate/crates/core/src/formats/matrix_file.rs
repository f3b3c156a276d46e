use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const HEADER_LEN: usize = 12;

/// File kind tag stored in the first four bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magic {
    /// `VSF1`: per-frame features or score columns.
    Features,
    /// `VSD1`: description vectors.
    Descriptions,
}

impl Magic {
    pub fn bytes(self) -> [u8; 4] {
        match self {
            Magic::Features => *b"VSF1",
            Magic::Descriptions => *b"VSD1",
        }
    }
}

pub fn read_matrix(path: impl AsRef<Path>, expected: Magic) -> Result<Matrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(
            path,
            format!("header needs {HEADER_LEN} bytes, file has {}", bytes.len()),
        ));
    }
    let magic = &bytes[0..4];
    if magic != expected.bytes() {
        return Err(Error::format(
            path,
            format!(
                "magic {:?} found, expected {:?}",
                String::from_utf8_lossy(magic),
                String::from_utf8_lossy(&expected.bytes())
            ),
        ));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    let cols = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    let payload = (rows as u64)
        .checked_mul(cols as u64)
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::format(path, format!("{rows}x{cols} payload size overflows")))?;
    let have = bytes.len() - HEADER_LEN;
    if have < payload {
        return Err(Error::format(
            path,
            format!("truncated payload: {rows}x{cols} needs {payload} bytes, found {have}"),
        ));
    }
    if have > payload {
        return Err(Error::format(
            path,
            format!(
                "{} trailing bytes after the {payload}-byte payload",
                have - payload
            ),
        ));
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
        .collect();
    Matrix::new(rows as usize, cols as usize, data).map_err(|e| Error::format(path, e.to_string()))
}

/// Writes `matrix` narrowed to `f32`.
pub fn write_matrix(path: impl AsRef<Path>, matrix: &Matrix, magic: Magic) -> Result<()> {
    let path = path.as_ref();
    let dim = |n: usize, what: &str| {
        u32::try_from(n)
            .map_err(|_| Error::shape(format!("{what} = {n} does not fit in a u32 header field")))
    };
    let rows = dim(matrix.rows(), "rows")?;
    let cols = dim(matrix.cols(), "cols")?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 4 * matrix.as_slice().len());
    buf.extend_from_slice(&magic.bytes());
    buf.extend_from_slice(&rows.to_le_bytes());
    buf.extend_from_slice(&cols.to_le_bytes());
    for &v in matrix.as_slice() {
        buf.extend_from_slice(&(v as f32).to_le_bytes());
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.vsf");
        write_matrix(&p, &Matrix::zeros(0, 0), Magic::Features).unwrap();
        assert_eq!(fs::read(&p).unwrap().len(), 12);

        let m = Matrix::new(2, 3, vec![1.0, -2.0, 0.5, 3.25, 1e-3, 7.0]).unwrap();
        write_matrix(&p, &m, Magic::Descriptions).unwrap();
        let bytes = fs::read(&p).unwrap();
        assert_eq!(bytes.len(), 12 + 24);
        assert_eq!(&bytes[..12], b"VSD1\x02\x00\x00\x00\x03\x00\x00\x00");
        assert_eq!(&bytes[12..16], &1.0f32.to_le_bytes());

        let back = read_matrix(&p, Magic::Descriptions).unwrap();
        assert_eq!((back.rows(), back.cols()), (2, 3));
        for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
            assert_eq!(*a, *b as f32 as f64);
        }
    }

    #[test]
    fn corruptions() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad");

        fs::write(&p, b"XXXX\x01\x00\x00\x00\x01\x00\x00\x00\x00\x00\x00\x00").unwrap();
        let err = read_matrix(&p, Magic::Features).unwrap_err().to_string();
        assert!(err.contains("XXXX") && err.contains("VSF1"), "{err}");

        let mut bytes = b"VSF1\x0a\x00\x00\x00\x04\x00\x00\x00".to_vec();
        bytes.extend(vec![0u8; 159]);
        fs::write(&p, &bytes).unwrap();
        let err = read_matrix(&p, Magic::Features).unwrap_err().to_string();
        assert!(err.contains("needs 160 bytes, found 159"), "{err}");

        fs::write(&p, b"VSF1\xff\xff\xff\xff\xff\xff\xff\xff").unwrap();
        assert!(matches!(
            read_matrix(&p, Magic::Features),
            Err(Error::Format { .. })
        ));

        fs::write(&p, b"VSF1\x00").unwrap();
        assert!(matches!(
            read_matrix(&p, Magic::Features),
            Err(Error::Format { .. })
        ));

        let mut bytes = b"VSF1\x01\x00\x00\x00\x01\x00\x00\x00".to_vec();
        bytes.extend(f32::NAN.to_le_bytes());
        fs::write(&p, &bytes).unwrap();
        assert!(matches!(
            read_matrix(&p, Magic::Features),
            Err(Error::Format { .. })
        ));

        assert!(matches!(
            read_matrix(dir.path().join("missing"), Magic::Features),
            Err(Error::Io { .. })
        ));
    }
}
