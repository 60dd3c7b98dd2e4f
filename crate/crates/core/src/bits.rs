//! Packed binary vectors.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A fixed-length vector over GF(2), packed LSB-first into `u64` words.
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// Reads 64 bits starting at bit `offset`; bits past the slice read as zero.
#[inline]
fn load_bits(words: &[u64], offset: usize) -> u64 {
    let w = offset / 64;
    let b = offset % 64;
    let lo = words.get(w).copied().unwrap_or(0) >> b;
    if b == 0 {
        lo
    } else {
        lo | (words.get(w + 1).copied().unwrap_or(0) << (64 - b))
    }
}

/// `dst[dst_off..dst_off + count] ^= src[src_off..src_off + count]`.
fn xor_bits(dst: &mut [u64], dst_off: usize, src: &[u64], src_off: usize, count: usize) {
    let mut done = 0;
    while done < count {
        let d = dst_off + done;
        let dw = d / 64;
        let db = d % 64;
        let take = (64 - db).min(count - done);
        let chunk = load_bits(src, src_off + done);
        let mask = if take == 64 { !0 } else { (1u64 << take) - 1 };
        dst[dw] ^= (chunk & mask) << db;
        done += take;
    }
}

impl BitVector {
    /// All-zero vector of `len` bits.
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bit vectors must be non-empty");
        BitVector {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVector::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector with ones exactly at `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut v = BitVector::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(Error::param(format!("position {p} out of range for length {len}")));
            }
            v.set(p, true);
        }
        Ok(v)
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.clear_tail();
        v
    }

    /// Decodes `ceil(len / 8)` LSB-first bytes. Padding bits must be zero.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} bytes for {len} bits, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut v = BitVector::zeros(len);
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            v.words[i] = u64::from_le_bytes(buf);
        }
        let tail = v.words[v.words.len() - 1];
        v.clear_tail();
        if tail != v.words[v.words.len() - 1] {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        Ok(v)
    }

    /// LSB-first byte encoding, zero-padded to a byte boundary.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::param(format!(
                "length mismatch: {} vs {}",
                self.len, other.len
            )));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// `self ^= other` cyclically shifted so that bit `i` lands on `(i + shift) mod len`.
    pub fn xor_rotated(&mut self, other: &BitVector, shift: usize) {
        assert_eq!(self.len, other.len);
        let n = self.len;
        let s = shift % n;
        xor_bits(&mut self.words, s, &other.words, 0, n - s);
        if s > 0 {
            xor_bits(&mut self.words, 0, &other.words, n - s, s);
        }
    }

    /// Cyclic shift: bit `i` moves to `(i + shift) mod len`.
    pub fn rotated(&self, shift: usize) -> BitVector {
        let mut out = BitVector::zeros(self.len);
        out.xor_rotated(self, shift);
        out
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        xor_bits(&mut out.words, 0, &self.words, start, len);
        out
    }

    /// Overwrites bits `start..start + src.len()` with `src`.
    pub fn write_slice(&mut self, start: usize, src: &BitVector) {
        assert!(start + src.len <= self.len);
        let current = self.slice(start, src.len);
        xor_bits(&mut self.words, start, &current.words, 0, src.len);
        xor_bits(&mut self.words, start, &src.words, 0, src.len);
    }

    /// Concatenates vectors end to end.
    pub fn concat(parts: &[BitVector]) -> BitVector {
        let total: usize = parts.iter().map(|p| p.len).sum();
        let mut out = BitVector::zeros(total);
        let mut at = 0;
        for p in parts {
            xor_bits(&mut out.words, at, &p.words, 0, p.len);
            at += p.len;
        }
        out
    }

    /// Splits into consecutive chunks of `chunk` bits; `len` must be a multiple.
    pub fn chunks(&self, chunk: usize) -> Vec<BitVector> {
        assert!(chunk > 0 && self.len.is_multiple_of(chunk));
        (0..self.len / chunk)
            .map(|i| self.slice(i * chunk, chunk))
            .collect()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << r) - 1;
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
            write!(f, "BitVector({s})")
        } else {
            write!(f, "BitVector(len={}, weight={})", self.len, self.weight())
        }
    }
}
