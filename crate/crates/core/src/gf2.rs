//! Dense GF(2) matrices with word-packed rows.

/// Row-major bit matrix; each row occupies `ceil(cols / 64)` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    /// Gaussian elimination restricted to the first `ncols` columns.
    /// Returns the number of pivot rows, which end up on top.
    fn eliminate(&mut self, ncols: usize) -> usize {
        let mut rank = 0;
        for c in 0..ncols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(self.cols)
    }

    /// Basis of `{c : cᵀ M = 0}`, each vector packed into `ceil(rows/64)` words.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        let mut aug = BitMatrix::zeros(self.rows, self.cols + self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols + r, true);
        }
        let rank = aug.eliminate(self.cols);
        let words = self.rows.div_ceil(64);
        (rank..self.rows)
            .map(|r| {
                let mut v = vec![0u64; words];
                for k in 0..self.rows {
                    if aug.get(r, self.cols + k) {
                        v[k / 64] |= 1 << (k % 64);
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, s) in rows.iter().enumerate() {
            for (c, ch) in s.chars().enumerate() {
                m.set(r, c, ch == '1');
            }
        }
        m
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = from_rows(&["110", "011", "101"]);
        assert_eq!(m.rank(), 2);
        assert_eq!(from_rows(&["100", "010", "001"]).rank(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = from_rows(&["110", "011", "101", "000"]);
        let ker = m.left_kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let mut acc = [0u64; 1];
            for r in 0..4 {
                if (v[0] >> r) & 1 == 1 {
                    acc[0] ^= m.row(r)[0];
                }
            }
            assert_eq!(acc[0], 0);
        }
    }

    #[test]
    fn wide_matrix_crosses_words() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 129, true);
        m.set(1, 129, true);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.left_kernel().len(), 1);
    }
}
