//! Versioned little-endian binary dumps for golden files.
//!
//! State vector (`QSV1`):
//!
//! | bytes | content                          |
//! |-------|----------------------------------|
//! | 4     | magic `b"QSV1"`                  |
//! | 4     | format version, `u32` (= 1)      |
//! | 8     | dimension `n`, `u64`             |
//! | 16 n  | amplitudes as `(re, im)` `f64`   |
//!
//! Sparse operator (`QSO1`):
//!
//! | bytes   | content                               |
//! |---------|---------------------------------------|
//! | 4       | magic `b"QSO1"`                       |
//! | 4       | format version, `u32` (= 1)           |
//! | 8       | dimension `n`, `u64`                  |
//! | 8       | nonzero count `k`, `u64`              |
//! | 8       | truncation-drop counter, `u64`        |
//! | 8 (n+1) | CSR row pointers, `u64`               |
//! | 8 k     | column indices, `u64`                 |
//! | 16 k    | values as `(re, im)` `f64`            |

use num_complex::Complex64;

use super::sparse::SparseOperator;
use super::state::StateVector;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const STATE_MAGIC: &[u8; 4] = b"QSV1";
const OPERATOR_MAGIC: &[u8; 4] = b"QSO1";

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        match end {
            Some(e) => {
                let s = &self.buf[self.pos..e];
                self.pos = e;
                Ok(s)
            }
            None => Err(Error::Decode(format!("truncated input at byte {}", self.pos))),
        }
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Decode("length overflows usize".into()))
    }

    fn complex(&mut self) -> Result<Complex64> {
        let re = f64::from_le_bytes(self.take(8)?.try_into().unwrap());
        let im = f64::from_le_bytes(self.take(8)?.try_into().unwrap());
        Ok(Complex64::new(re, im))
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(Error::Decode("bad magic".into()));
        }
        let v = self.u32()?;
        if v != FORMAT_VERSION {
            return Err(Error::Decode(format!("unsupported format version {v}")));
        }
        Ok(())
    }

    /// Rejects counts that cannot possibly fit in the remaining bytes.
    fn check_room(&self, count: usize, width: usize) -> Result<()> {
        let need = count.checked_mul(width).ok_or_else(|| Error::Decode("length overflow".into()))?;
        if need > self.buf.len() - self.pos {
            return Err(Error::Decode("declared length exceeds input".into()));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Decode(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}

fn put_complex(out: &mut Vec<u8>, c: Complex64) {
    out.extend_from_slice(&c.re.to_le_bytes());
    out.extend_from_slice(&c.im.to_le_bytes());
}

impl StateVector {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.dim());
        out.extend_from_slice(STATE_MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dim() as u64).to_le_bytes());
        for &a in self.amplitudes() {
            put_complex(&mut out, a);
        }
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader { buf, pos: 0 };
        r.header(STATE_MAGIC)?;
        let n = r.usize()?;
        r.check_room(n, 16)?;
        let amps = (0..n).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        Ok(StateVector::new(amps))
    }
}

impl SparseOperator {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(OPERATOR_MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dim() as u64).to_le_bytes());
        out.extend_from_slice(&(self.nnz() as u64).to_le_bytes());
        out.extend_from_slice(&self.truncation_drops.to_le_bytes());
        for &p in self.row_ptr() {
            out.extend_from_slice(&(p as u64).to_le_bytes());
        }
        for &c in self.col_indices() {
            out.extend_from_slice(&(c as u64).to_le_bytes());
        }
        for &v in self.values() {
            put_complex(&mut out, v);
        }
        out
    }

    /// Decodes and validates CSR structure: monotone row pointers, in-range
    /// strictly increasing columns within each row.
    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader { buf, pos: 0 };
        r.header(OPERATOR_MAGIC)?;
        let n = r.usize()?;
        let k = r.usize()?;
        let drops = r.u64()?;
        r.check_room(n.checked_add(1).ok_or_else(|| Error::Decode("dimension overflow".into()))?, 8)?;
        let row_ptr = (0..=n).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
        r.check_room(k, 24)?;
        let cols = (0..k).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
        let vals = (0..k).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
        r.finish()?;

        if row_ptr[0] != 0 || row_ptr[n] != k {
            return Err(Error::Decode("row pointers do not span the value array".into()));
        }
        for i in 0..n {
            let (a, b) = (row_ptr[i], row_ptr[i + 1]);
            if a > b || b > k {
                return Err(Error::Decode(format!("row pointer decreases or overruns at row {i}")));
            }
            let row = &cols[a..b];
            if row.iter().any(|&c| c >= n) || row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Decode(format!("invalid column indices in row {i}")));
            }
        }
        Ok(SparseOperator::from_raw_parts(n, row_ptr, cols, vals, drops))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn state_layout_is_stable() {
        let v = StateVector::new(vec![Complex64::new(1.0, -2.0)]);
        let b = v.to_bytes();
        assert_eq!(&b[..4], b"QSV1");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(b[8..16].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(b[16..24].try_into().unwrap()), 1.0);
        assert_eq!(f64::from_le_bytes(b[24..32].try_into().unwrap()), -2.0);
        assert_eq!(b.len(), 32);
    }

    #[test]
    fn corrupt_operator_rejected() {
        let m = SparseOperator::from_triplets(
            2,
            vec![(0, 1, Complex64::new(1.0, 0.0)), (1, 0, Complex64::new(1.0, 0.0))],
        );
        let good = m.to_bytes();
        assert_eq!(SparseOperator::from_bytes(&good).unwrap(), m);
        let mut bad = good.clone();
        // first column index -> out of range
        let col_at = 4 + 4 + 8 + 8 + 8 + 8 * 3;
        bad[col_at] = 7;
        assert!(SparseOperator::from_bytes(&bad).is_err());
        assert!(SparseOperator::from_bytes(&good[..good.len() - 1]).is_err());
        // interior row pointer past the value array
        let mut overrun = good.clone();
        overrun[32 + 8..32 + 16].copy_from_slice(&9u64.to_le_bytes());
        assert!(SparseOperator::from_bytes(&overrun).is_err());
        let mut huge = good.clone();
        huge[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(SparseOperator::from_bytes(&huge).is_err());
    }

    proptest! {
        #[test]
        fn state_round_trip(amps in prop::collection::vec((any::<f64>(), any::<f64>()), 0..20)) {
            let v = StateVector::new(amps.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
            let back = StateVector::from_bytes(&v.to_bytes()).unwrap();
            prop_assert_eq!(back.to_bytes(), v.to_bytes());
        }

        #[test]
        fn operator_decoder_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
            let _ = SparseOperator::from_bytes(&bytes);
            let _ = StateVector::from_bytes(&bytes);
        }
    }
}
