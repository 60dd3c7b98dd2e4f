//! Binary encodings for keys, ciphertexts and framed messages.
//!
//! All integers are little-endian; bit vectors are packed LSB-first within
//! bytes and zero-padded to a byte boundary. Every header is
//!
//! ```text
//! magic[8] | version u32 | n0 u32 | p u32 | d_v u32 | m u32 | t' u32 | flags u32
//! ```
//!
//! followed by a payload whose length is fully determined by the header:
//!
//! * public key: `k0·n0` first rows of `p` bits, or with [`FLAG_SYSTEMATIC`]
//!   only the `k0` redundancy blocks;
//! * private key: `n0·d_v` support positions as `u32`, then the `k0·k0`
//!   first rows of S and the `n0·n0` first rows of Q;
//! * ciphertext: a `u32` block count, then that many `n`-bit blocks.
//!
//! Messages are framed as a `u64` byte length followed by the bytes, zero
//! padded to a multiple of `k` bits and cut into `k`-bit blocks.

use crate::bits::BitVector;
use crate::circulant::CirculantElement;
use crate::code::{CodeSpec, PrivateCode};
use crate::crypto::{PrivateKey, PublicKey, SystematicPublicKey};
use crate::error::{Error, Result};
use crate::qc::QcMatrix;

pub const PUBLIC_MAGIC: [u8; 8] = *b"QCLDPCPK";
pub const PRIVATE_MAGIC: [u8; 8] = *b"QCLDPCSK";
pub const CIPHERTEXT_MAGIC: [u8; 8] = *b"QCLDPCCT";
pub const VERSION: u32 = 1;
/// Public key stored in systematic form / ciphertext made with one.
pub const FLAG_SYSTEMATIC: u32 = 1;
/// Byte length of the common header.
pub const HEADER_LEN: usize = 8 + 4 * 7;

/// Upper bound on `p` accepted when decoding, to reject absurd allocations.
pub const MAX_P: usize = 1 << 20;
const MAX_N0: usize = 64;

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub magic: [u8; 8],
    pub spec: CodeSpec,
    pub flags: u32,
}

impl Header {
    fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.magic);
        for v in [
            VERSION as usize,
            self.spec.n0,
            self.spec.p,
            self.spec.d_v,
            self.spec.m,
            self.spec.t_prime,
            self.flags as usize,
        ] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
    }

    fn read(r: &mut Reader<'_>, magic: [u8; 8]) -> Result<Header> {
        let got = r.take(8)?;
        if got != magic {
            return Err(fmt_err(format!(
                "bad magic, expected {:?}",
                String::from_utf8_lossy(&magic)
            )));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(fmt_err(format!("unsupported version {version}")));
        }
        let n0 = r.u32()? as usize;
        let p = r.u32()? as usize;
        let d_v = r.u32()? as usize;
        let m = r.u32()? as usize;
        let t_prime = r.u32()? as usize;
        let flags = r.u32()?;
        if flags & !FLAG_SYSTEMATIC != 0 {
            return Err(fmt_err(format!("unknown flags {flags:#x}")));
        }
        if n0 > MAX_N0 || p > MAX_P {
            return Err(fmt_err("dimensions too large"));
        }
        let spec = CodeSpec {
            n0,
            p,
            d_v,
            m,
            t_prime,
        };
        spec.validate()
            .map_err(|e| fmt_err(format!("invalid parameters in header: {e}")))?;
        Ok(Header { magic, spec, flags })
    }

    pub fn systematic(&self) -> bool {
        self.flags & FLAG_SYSTEMATIC != 0
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| fmt_err("truncated input"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn bits(&mut self, len: usize) -> Result<BitVector> {
        BitVector::from_bytes(len, self.take(len.div_ceil(8))?)
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(fmt_err(format!(
                "{} trailing bytes",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}

fn write_blocks(m: &QcMatrix, out: &mut Vec<u8>) {
    for b in m.blocks() {
        out.extend_from_slice(&b.poly().to_bytes());
    }
}

fn read_blocks(r: &mut Reader<'_>, rows: usize, cols: usize, p: usize) -> Result<QcMatrix> {
    let blocks = (0..rows * cols)
        .map(|_| r.bits(p).map(CirculantElement::from_poly))
        .collect::<Result<Vec<_>>>()?;
    QcMatrix::new(rows, cols, blocks)
}

/// A decoded public key file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PublicKeyFile {
    Full(PublicKey),
    Systematic(SystematicPublicKey),
}

impl PublicKeyFile {
    pub fn spec(&self) -> &CodeSpec {
        match self {
            PublicKeyFile::Full(k) => &k.spec,
            PublicKeyFile::Systematic(k) => &k.spec,
        }
    }
}

pub fn encode_public(key: &PublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    Header {
        magic: PUBLIC_MAGIC,
        spec: key.spec,
        flags: 0,
    }
    .write(&mut out);
    write_blocks(&key.gpub, &mut out);
    out
}

pub fn encode_systematic_public(key: &SystematicPublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    Header {
        magic: PUBLIC_MAGIC,
        spec: key.spec,
        flags: FLAG_SYSTEMATIC,
    }
    .write(&mut out);
    write_blocks(&key.redundancy, &mut out);
    out
}

pub fn decode_public(bytes: &[u8]) -> Result<PublicKeyFile> {
    let mut r = Reader::new(bytes);
    let h = Header::read(&mut r, PUBLIC_MAGIC)?;
    let spec = h.spec;
    let key = if h.systematic() {
        let redundancy = read_blocks(&mut r, spec.k0(), 1, spec.p)?;
        PublicKeyFile::Systematic(SystematicPublicKey { spec, redundancy })
    } else {
        let gpub = read_blocks(&mut r, spec.k0(), spec.n0, spec.p)?;
        PublicKeyFile::Full(PublicKey { spec, gpub })
    };
    r.finish()?;
    Ok(key)
}

pub fn encode_private(key: &PrivateKey) -> Vec<u8> {
    let mut out = Vec::new();
    Header {
        magic: PRIVATE_MAGIC,
        spec: *key.spec(),
        flags: 0,
    }
    .write(&mut out);
    for h in &key.code.h {
        for &pos in h.support() {
            out.extend_from_slice(&(pos as u32).to_le_bytes());
        }
    }
    write_blocks(&key.s, &mut out);
    write_blocks(&key.q, &mut out);
    out
}

pub fn decode_private(bytes: &[u8]) -> Result<PrivateKey> {
    let mut r = Reader::new(bytes);
    let h = Header::read(&mut r, PRIVATE_MAGIC)?;
    if h.systematic() {
        return Err(fmt_err("private keys carry no flags"));
    }
    let spec = h.spec;
    let mut supports = Vec::with_capacity(spec.n0);
    for _ in 0..spec.n0 {
        let s = (0..spec.d_v)
            .map(|_| r.u32().map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        supports.push(s);
    }
    let s = read_blocks(&mut r, spec.k0(), spec.k0(), spec.p)?;
    let q = read_blocks(&mut r, spec.n0, spec.n0, spec.p)?;
    r.finish()?;
    let code = PrivateCode::from_supports(spec, supports)
        .map_err(|e| fmt_err(format!("bad supports: {e}")))?;
    PrivateKey::from_parts(code, s, q).map_err(|e| fmt_err(format!("bad private key: {e}")))
}

/// Encrypted blocks of one framed message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiphertextFile {
    pub spec: CodeSpec,
    /// Blocks were produced under a systematic public key.
    pub systematic: bool,
    pub blocks: Vec<BitVector>,
}

pub fn encode_ciphertext(ct: &CiphertextFile) -> Result<Vec<u8>> {
    let n = ct.spec.n();
    if ct.blocks.iter().any(|b| b.len() != n) {
        return Err(Error::param(format!("ciphertext blocks must have n = {n} bits")));
    }
    let mut out = Vec::new();
    Header {
        magic: CIPHERTEXT_MAGIC,
        spec: ct.spec,
        flags: if ct.systematic { FLAG_SYSTEMATIC } else { 0 },
    }
    .write(&mut out);
    out.extend_from_slice(&(ct.blocks.len() as u32).to_le_bytes());
    for b in &ct.blocks {
        out.extend_from_slice(&b.to_bytes());
    }
    Ok(out)
}

pub fn decode_ciphertext(bytes: &[u8]) -> Result<CiphertextFile> {
    let mut r = Reader::new(bytes);
    let h = Header::read(&mut r, CIPHERTEXT_MAGIC)?;
    let n = h.spec.n();
    let count = r.u32()? as usize;
    let expected = count
        .checked_mul(n.div_ceil(8))
        .ok_or_else(|| fmt_err("block count overflows"))?;
    if bytes.len() - r.pos != expected {
        return Err(fmt_err(format!(
            "expected {expected} payload bytes for {count} blocks, found {}",
            bytes.len() - r.pos
        )));
    }
    let blocks = (0..count).map(|_| r.bits(n)).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(CiphertextFile {
        spec: h.spec,
        systematic: h.systematic(),
        blocks,
    })
}

/// Splits `message` into `k`-bit blocks behind a `u64` length prefix.
pub fn frame_message(message: &[u8], k: usize) -> Vec<BitVector> {
    let mut bytes = (message.len() as u64).to_le_bytes().to_vec();
    bytes.extend_from_slice(message);
    let total_bits = (bytes.len() * 8).div_ceil(k) * k;
    bytes.resize(total_bits.div_ceil(8), 0);
    let all = BitVector::from_bytes(total_bits, &bytes).expect("padding bits are zero");
    all.chunks(k)
}

/// Inverse of [`frame_message`]; rejects bad lengths and nonzero padding.
pub fn unframe_message(blocks: &[BitVector]) -> Result<Vec<u8>> {
    if blocks.is_empty() {
        return Err(fmt_err("no message blocks"));
    }
    let bits = BitVector::concat(blocks);
    let bytes = bits.to_bytes();
    if bytes.len() < 8 {
        return Err(fmt_err("message shorter than its length prefix"));
    }
    let len = u64::from_le_bytes(bytes[..8].try_into().expect("8 bytes"));
    let end = usize::try_from(len)
        .ok()
        .and_then(|l| l.checked_add(8))
        .filter(|&e| e <= bytes.len())
        .ok_or_else(|| fmt_err("length prefix exceeds payload"))?;
    if bytes[end..].iter().any(|&b| b != 0) {
        return Err(fmt_err("nonzero padding"));
    }
    let k = blocks[0].len();
    if (end * 8).div_ceil(k) != blocks.len() {
        return Err(fmt_err("surplus padding blocks"));
    }
    Ok(bytes[8..end].to_vec())
}
