//! Block-circulant (quasi-cyclic) matrices.

use crate::bits::BitVector;
use crate::circulant::{CirculantElement, EvaluatedVector, OpCounter, WinogradConfig};
use crate::error::{Error, Result};

/// A `rows × cols` grid of p×p circulant blocks, i.e. a
/// `(rows·p) × (cols·p)` binary matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QcMatrix {
    rows: usize,
    cols: usize,
    p: usize,
    blocks: Vec<CirculantElement>,
}

impl std::fmt::Debug for QcMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QcMatrix({}x{} blocks, p={})", self.rows, self.cols, self.p)
    }
}

impl QcMatrix {
    /// Builds from row-major blocks.
    pub fn new(rows: usize, cols: usize, blocks: Vec<CirculantElement>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("block dimensions must be positive"));
        }
        if blocks.len() != rows * cols {
            return Err(Error::param(format!(
                "expected {} blocks, got {}",
                rows * cols,
                blocks.len()
            )));
        }
        let p = blocks[0].p();
        if blocks.iter().any(|b| b.p() != p) {
            return Err(Error::param("all blocks must share the same size"));
        }
        Ok(QcMatrix {
            rows,
            cols,
            p,
            blocks,
        })
    }

    pub fn zero(rows: usize, cols: usize, p: usize) -> Self {
        QcMatrix {
            rows,
            cols,
            p,
            blocks: vec![CirculantElement::zero(p); rows * cols],
        }
    }

    pub fn identity(size: usize, p: usize) -> Self {
        let mut m = Self::zero(size, size, p);
        for i in 0..size {
            m.set(i, i, CirculantElement::one(p));
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    /// Dimensions of the expanded binary matrix.
    pub fn bit_dims(&self) -> (usize, usize) {
        (self.rows * self.p, self.cols * self.p)
    }

    #[inline]
    pub fn block(&self, i: usize, j: usize) -> &CirculantElement {
        &self.blocks[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: CirculantElement) {
        assert_eq!(e.p(), self.p);
        self.blocks[i * self.cols + j] = e;
    }

    pub fn blocks(&self) -> &[CirculantElement] {
        &self.blocks
    }

    /// Entry at bit position `(r, c)` of the expanded matrix.
    pub fn bit(&self, r: usize, c: usize) -> bool {
        let p = self.p;
        let b = self.block(r / p, c / p);
        b.poly().get((c % p + p - r % p) % p)
    }

    /// Row `r` of the expanded matrix.
    pub fn bit_row(&self, r: usize) -> BitVector {
        let p = self.p;
        let parts: Vec<BitVector> = (0..self.cols)
            .map(|j| self.block(r / p, j).row(r % p))
            .collect();
        BitVector::concat(&parts)
    }

    /// Sub-grid of blocks `[r0, r0 + rows) × [c0, c0 + cols)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> QcMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let blocks = (r0..r0 + rows)
            .flat_map(|i| (c0..c0 + cols).map(move |j| (i, j)))
            .map(|(i, j)| self.block(i, j).clone())
            .collect();
        QcMatrix {
            rows,
            cols,
            p: self.p,
            blocks,
        }
    }

    /// Grid transpose with every block transposed.
    pub fn transpose(&self) -> QcMatrix {
        let mut out = QcMatrix::zero(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.block(i, j).transpose());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let b = self.block(i, j);
                    if i == j {
                        b.is_one()
                    } else {
                        b.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    fn check_mul(&self, other: &QcMatrix) -> Result<()> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::param(format!(
                "cannot multiply {}x{} (p={}) by {}x{} (p={})",
                self.rows, self.cols, self.p, other.rows, other.cols, other.p
            )));
        }
        Ok(())
    }

    /// Block-matrix product over the ring, using shift-and-add block products.
    pub fn mul(&self, other: &QcMatrix) -> Result<QcMatrix> {
        self.check_mul(other)?;
        let mut out = QcMatrix::zero(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.block(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul_unchecked(other.block(l, j));
                    out.blocks[i * other.cols + j].add_assign(&prod);
                }
            }
        }
        Ok(out)
    }

    /// Block-matrix product through the Winograd multiplier, with operation
    /// counting.
    ///
    /// The first row of `A_il · B_lj` is `row0(A_il) · B_lj`, so every block
    /// product is a vector-circulant product. The evaluation phase of
    /// `row0(A_il)` is charged once and shared by all `j`; summing the `inner`
    /// partial products of each output block costs `(inner - 1)·p`.
    pub fn mul_counted(
        &self,
        other: &QcMatrix,
        cfg: WinogradConfig,
        counter: &mut OpCounter,
    ) -> Result<QcMatrix> {
        self.check_mul(other)?;
        let mut blocks = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row: Vec<BitVector> = (0..self.cols)
                .map(|l| self.block(i, l).poly().clone())
                .collect();
            let prod = vec_mul_evaluated(&row, other, cfg, counter)?;
            blocks.extend(prod.into_iter().map(CirculantElement::from_poly));
        }
        QcMatrix::new(self.rows, other.cols, blocks)
    }

    /// `v · M` for a row vector of `rows·p` bits (shift-and-add, uncounted).
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        self.check_vec(v)?;
        let parts = v.chunks(self.p);
        let mut out: Vec<BitVector> = vec![BitVector::zeros(self.p); self.cols];
        for (i, part) in parts.iter().enumerate() {
            let ones: Vec<usize> = part.iter_ones().collect();
            for (j, acc) in out.iter_mut().enumerate() {
                let b = self.block(i, j);
                if b.weight() <= ones.len() {
                    for s in b.poly().iter_ones() {
                        acc.xor_rotated(part, s);
                    }
                } else {
                    for &s in &ones {
                        acc.xor_rotated(b.poly(), s);
                    }
                }
            }
        }
        Ok(BitVector::concat(&out))
    }

    /// `v · M` through the Winograd multiplier with shared evaluation.
    pub fn vec_mul_winograd(
        &self,
        v: &BitVector,
        cfg: WinogradConfig,
        counter: &mut OpCounter,
    ) -> Result<BitVector> {
        self.check_vec(v)?;
        let parts = v.chunks(self.p);
        Ok(BitVector::concat(&vec_mul_evaluated(&parts, self, cfg, counter)?))
    }

    /// `v · M` treating `M` as sparse: every output bit is charged one
    /// operation per nonzero in its column, `rows·p·w` in total for
    /// row weight `w`.
    pub fn vec_mul_sparse(&self, v: &BitVector, counter: &mut OpCounter) -> Result<BitVector> {
        self.check_vec(v)?;
        let parts = v.chunks(self.p);
        let mut out: Vec<BitVector> = vec![BitVector::zeros(self.p); self.cols];
        let mut ops = 0u64;
        for (i, part) in parts.iter().enumerate() {
            for (j, acc) in out.iter_mut().enumerate() {
                let b = self.block(i, j);
                for s in b.poly().iter_ones() {
                    acc.xor_rotated(part, s);
                }
                ops += (b.weight() * self.p) as u64;
            }
        }
        counter.add(ops);
        Ok(BitVector::concat(&out))
    }

    fn check_vec(&self, v: &BitVector) -> Result<()> {
        if v.len() != self.rows * self.p {
            return Err(Error::param(format!(
                "vector length {} does not match {} matrix rows",
                v.len(),
                self.rows * self.p
            )));
        }
        Ok(())
    }

    /// Inverse over the ring by Gauss-Jordan elimination with unit pivots,
    /// searching every remaining block for a pivot.
    pub fn invert(&self) -> Result<QcMatrix> {
        if self.rows != self.cols {
            return Err(Error::param("only square block matrices can be inverted"));
        }
        let n = self.rows;
        let p = self.p;
        let mut a = self.clone();
        let mut inv = QcMatrix::identity(n, p);
        // Column `c` of the working matrix holds column `perm[c]` of the original.
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let mut pivot = None;
            'search: for r in c..n {
                for cc in c..n {
                    let b = a.block(r, cc);
                    if b.is_zero() {
                        continue;
                    }
                    if let Ok(binv) = b.invert() {
                        pivot = Some((r, cc, binv));
                        break 'search;
                    }
                }
            }
            let (r, cc, pinv) = pivot.ok_or(Error::SingularMatrix)?;
            a.swap_rows(r, c);
            inv.swap_rows(r, c);
            a.swap_cols(cc, c);
            perm.swap(cc, c);
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for i in 0..n {
                if i == c {
                    continue;
                }
                let factor = a.block(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                a.sub_scaled_row(i, c, &factor);
                inv.sub_scaled_row(i, c, &factor);
            }
        }
        // (A·P)^{-1} = inv, hence A^{-1} = P·inv.
        let mut out = QcMatrix::zero(n, n, p);
        for (c, &orig) in perm.iter().enumerate() {
            for j in 0..n {
                out.set(orig, j, inv.block(c, j).clone());
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.blocks.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.blocks.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, f: &CirculantElement) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.blocks[idx] = self.blocks[idx].mul_unchecked(f);
        }
    }

    /// `row[target] -= factor · row[src]`.
    fn sub_scaled_row(&mut self, target: usize, src: usize, factor: &CirculantElement) {
        for j in 0..self.cols {
            let prod = self.block(src, j).mul_unchecked(factor);
            self.blocks[target * self.cols + j].add_assign(&prod);
        }
    }
}

/// Multiplies the block row vector `parts` by `m`, evaluating each part once.
fn vec_mul_evaluated(
    parts: &[BitVector],
    m: &QcMatrix,
    cfg: WinogradConfig,
    counter: &mut OpCounter,
) -> Result<Vec<BitVector>> {
    let mut out: Vec<BitVector> = vec![BitVector::zeros(m.p); m.cols];
    for (i, part) in parts.iter().enumerate() {
        let ev = EvaluatedVector::new(part, cfg, counter);
        for (j, acc) in out.iter_mut().enumerate() {
            acc.xor_assign(&ev.mul(m.block(i, j), counter)?)?;
        }
    }
    counter.add(((m.rows - 1) * m.cols * m.p) as u64);
    Ok(out)
}
