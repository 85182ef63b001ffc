//! Binary matrix dump: `b"NCQO"`, `u32` rows, `u32` cols, four zero bytes,
//! then row-major `(re, im)` little-endian `f64` pairs.

use std::io::{self, Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub const MAGIC: &[u8; 4] = b"NCQO";
pub const HEADER_LEN: usize = 16;

pub fn write_matrix<W: Write>(mut w: W, m: &DMatrix<C64>) -> io::Result<()> {
    let rows = u32::try_from(m.nrows())
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "too many rows"))?;
    let cols = u32::try_from(m.ncols())
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "too many columns"))?;
    w.write_all(MAGIC)?;
    w.write_all(&rows.to_le_bytes())?;
    w.write_all(&cols.to_le_bytes())?;
    w.write_all(&[0u8; 4])?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix<R: Read>(mut r: R) -> io::Result<DMatrix<C64>> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let rows = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let mut m = DMatrix::zeros(rows, cols);
    let mut buf = [0u8; 16];
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let m = DMatrix::from_fn(2, 3, |r, c| C64::new(r as f64, c as f64 + 0.5));
        let mut bytes = Vec::new();
        write_matrix(&mut bytes, &m).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 6 * 16);
        assert_eq!(&bytes[..4], b"NCQO");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        // entry (0, 1) comes second in row-major order
        assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 0.0);
        assert_eq!(f64::from_le_bytes(bytes[40..48].try_into().unwrap()), 1.5);
        assert_eq!(read_matrix(bytes.as_slice()).unwrap(), m);
    }

    #[test]
    fn rejects_bad_magic() {
        let bytes = [0u8; 16];
        assert!(read_matrix(&bytes[..]).is_err());
    }
}
