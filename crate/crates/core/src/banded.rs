//! Banded LU without pivoting, for diagonally dominant systems.

#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row `i` stores columns `i − kl ..= i + ku`.
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside band");
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku {
            return 0.0;
        }
        self.data[self.slot(i, j)]
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// In-place factorization; `None` on a zero pivot.
    pub fn factor(mut self) -> Option<BandLu> {
        let n = self.n;
        let w = self.kl + self.ku + 1;
        for k in 0..n {
            let pivot = self.data[k * w + self.kl];
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            let last_row = (k + self.kl).min(n - 1);
            let span = (k + self.ku).min(n - 1) - k;
            let (head, tail) = self.data.split_at_mut((k + 1) * w);
            let urow = &head[k * w + self.kl + 1..k * w + self.kl + 1 + span];
            for i in k + 1..=last_row {
                let base = (i - k - 1) * w;
                let off = k + self.kl - i;
                let l = tail[base + off] / pivot;
                tail[base + off] = l;
                if l == 0.0 {
                    continue;
                }
                let row = &mut tail[base + off + 1..base + off + 1 + span];
                for (r, u) in row.iter_mut().zip(urow) {
                    *r -= l * u;
                }
            }
        }
        Some(BandLu(self))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }
}

pub struct BandLu(BandMatrix);

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = &self.0;
        let n = m.n;
        let w = m.kl + m.ku + 1;
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(m.kl);
            let row = &m.data[i * w + (lo + m.kl - i)..i * w + m.kl];
            let s: f64 = row.iter().zip(&x[lo..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let hi = (i + m.ku).min(n - 1);
            let row = &m.data[i * w + m.kl + 1..i * w + m.kl + 1 + (hi - i)];
            let s: f64 = row.iter().zip(&x[i + 1..=hi]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / m.data[i * w + m.kl];
        }
        x
    }
}
