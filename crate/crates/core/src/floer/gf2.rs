/// Dense GF(2) matrix with bit-packed rows.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![vec![0; cols.div_ceil(64)]; rows] }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Rank by Gaussian elimination.
    pub fn rank(mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..self.rows.len()).find(|&r| self.rows[r][w] & b != 0) else {
                continue;
            };
            self.rows.swap(rank, p);
            let pivot = self.rows[rank].clone();
            for r in 0..self.rows.len() {
                if r != rank && self.rows[r][w] & b != 0 {
                    for (x, y) in self.rows[r].iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
