//! Unordered vertex pairs and the packed pair-status table.

/// Status of an unordered pair in the evolving graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairStatus {
    Open,
    Closed,
    Edge,
}

impl PairStatus {
    fn code(self) -> u64 {
        match self {
            PairStatus::Open => 0,
            PairStatus::Closed => 1,
            PairStatus::Edge => 2,
        }
    }

    fn from_code(c: u64) -> Self {
        match c {
            0 => PairStatus::Open,
            1 => PairStatus::Closed,
            2 => PairStatus::Edge,
            _ => unreachable!("invalid status code {c}"),
        }
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Triangular index of the unordered pair `{x, y}`, `x != y`.
#[inline]
pub fn pair_index(x: usize, y: usize) -> u64 {
    debug_assert_ne!(x, y);
    let (lo, hi) = if x < y { (x as u64, y as u64) } else { (y as u64, x as u64) };
    hi * (hi - 1) / 2 + lo
}

/// Inverse of [`pair_index`]; returns `(lo, hi)` with `lo < hi`.
pub fn pair_from_index(k: u64) -> (usize, usize) {
    let mut hi = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    // correct floating-point drift
    while hi * (hi - 1) / 2 > k {
        hi -= 1;
    }
    while (hi + 1) * hi / 2 <= k {
        hi += 1;
    }
    let lo = k - hi * (hi - 1) / 2;
    (lo as usize, hi as usize)
}

/// Flat triangular array of 2-bit status codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusTable {
    n: usize,
    words: Vec<u64>,
}

impl StatusTable {
    /// All pairs start open.
    pub fn new(n: usize) -> Self {
        let total = pair_count(n);
        StatusTable {
            n,
            words: vec![0; total.div_ceil(32) as usize],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        pair_count(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get_index(&self, k: u64) -> PairStatus {
        let w = self.words[(k / 32) as usize];
        PairStatus::from_code(w >> (2 * (k % 32)) & 3)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> PairStatus {
        self.get_index(pair_index(x, y))
    }

    #[inline]
    pub fn set_index(&mut self, k: u64, s: PairStatus) {
        let w = &mut self.words[(k / 32) as usize];
        let shift = 2 * (k % 32);
        *w = (*w & !(3 << shift)) | (s.code() << shift);
    }

    pub fn set(&mut self, x: usize, y: usize, s: PairStatus) {
        self.set_index(pair_index(x, y), s)
    }

    /// Counts of (open, closed, edge) pairs.
    pub fn census(&self) -> (u64, u64, u64) {
        let mut c = [0u64; 3];
        for k in 0..self.len() {
            c[self.get_index(k).code() as usize] += 1;
        }
        (c[0], c[1], c[2])
    }
}

/// Symmetric bit matrix marking open pairs, one row per vertex, so that all
/// pairs at a vertex sit in one contiguous row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl OpenMatrix {
    /// Every pair open.
    pub fn full(n: usize) -> Self {
        let words = n.div_ceil(64);
        let mut bits = vec![u64::MAX; n * words];
        if !n.is_multiple_of(64) {
            let tail = (1u64 << (n % 64)) - 1;
            for r in 0..n {
                bits[r * words + words - 1] = tail;
            }
        }
        for v in 0..n {
            bits[v * words + v / 64] &= !(1 << (v % 64));
        }
        OpenMatrix { n, words, bits }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn is_open(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// Marks `{x, y}` as no longer open; returns whether it was open.
    #[inline]
    pub fn clear(&mut self, x: usize, y: usize) -> bool {
        let was = self.is_open(x, y);
        self.bits[x * self.words + y / 64] &= !(1 << (y % 64));
        self.bits[y * self.words + x / 64] &= !(1 << (x % 64));
        was
    }

    /// Open pair indices in increasing order.
    pub fn open_indices(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for y in 1..self.n {
            let row = self.row(y);
            for x in 0..y {
                if row[x / 64] >> (x % 64) & 1 == 1 {
                    out.push(pair_index(x, y));
                }
            }
        }
        out
    }
}
