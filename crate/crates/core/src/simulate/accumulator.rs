/// Per-index running count, mean and sum of squared deviations for the
/// spacings `D_2 .. D_n`, updated one trial at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingAccumulator {
    n: usize,
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl SpacingAccumulator {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two points per trial");
        SpacingAccumulator { n, count: 0, mean: vec![0.0; n - 1], m2: vec![0.0; n - 1] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Adds the spacings of one sorted draw of `n` points.
    pub fn push(&mut self, sorted: &[f64]) {
        debug_assert_eq!(sorted.len(), self.n);
        self.count += 1;
        let inv = 1.0 / self.count as f64;
        for (k, w) in sorted.windows(2).enumerate() {
            let d = w[1] - w[0];
            let delta = d - self.mean[k];
            self.mean[k] += delta * inv;
            self.m2[k] += delta * (d - self.mean[k]);
        }
    }

    /// Folds `other` into `self` with the pairwise update of Chan et al.
    pub fn merge(&mut self, other: &SpacingAccumulator) {
        assert_eq!(self.n, other.n, "merging accumulators of different n");
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * nb / total;
            self.m2[k] += other.m2[k] + delta * delta * na * nb / total;
        }
        self.count += other.count;
    }

    fn slot(&self, i: usize) -> usize {
        assert!((2..=self.n).contains(&i), "spacing index {i} outside [2, {}]", self.n);
        i - 2
    }

    /// Sample mean of `D_i`.
    pub fn mean(&self, i: usize) -> f64 {
        self.mean[self.slot(i)]
    }

    /// Unbiased sample variance of `D_i`.
    pub fn variance(&self, i: usize) -> f64 {
        self.m2[self.slot(i)] / (self.count as f64 - 1.0)
    }

    /// Standard error of the mean, `sqrt(M2 / (count (count - 1)))`.
    pub fn se(&self, i: usize) -> f64 {
        let c = self.count as f64;
        (self.m2[self.slot(i)] / (c * (c - 1.0))).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(data: &[[f64; 3]]) -> (Vec<f64>, Vec<f64>) {
        let c = data.len() as f64;
        let mut means = vec![];
        let mut vars = vec![];
        for k in 0..2 {
            let d: Vec<f64> = data.iter().map(|r| r[k + 1] - r[k]).collect();
            let m = d.iter().sum::<f64>() / c;
            means.push(m);
            vars.push(d.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (c - 1.0));
        }
        (means, vars)
    }

    #[test]
    fn matches_two_pass_statistics() {
        let data = [[0.0, 1.0, 3.0], [0.5, 0.7, 4.0], [-1.0, 2.0, 2.5], [0.0, 0.1, 0.2]];
        let mut acc = SpacingAccumulator::new(3);
        for r in &data {
            acc.push(r);
        }
        let (m, v) = naive(&data);
        for i in 2..=3 {
            assert!((acc.mean(i) - m[i - 2]).abs() < 1e-15);
            assert!((acc.variance(i) - v[i - 2]).abs() < 1e-14);
            assert!((acc.se(i) - (v[i - 2] / 4.0).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn merge_equals_single_stream() {
        let data: Vec<[f64; 3]> = (0..50).map(|k| {
            let x = k as f64;
            [x.sin(), x.sin() + 1.0 + (0.3 * x).cos().abs(), 5.0 + x.cos()]
        }).collect();
        let mut whole = SpacingAccumulator::new(3);
        data.iter().for_each(|r| whole.push(r));
        let mut a = SpacingAccumulator::new(3);
        let mut b = SpacingAccumulator::new(3);
        data[..17].iter().for_each(|r| a.push(r));
        data[17..].iter().for_each(|r| b.push(r));
        a.merge(&b);
        assert_eq!(a.count(), 50);
        for i in 2..=3 {
            assert!((a.mean(i) - whole.mean(i)).abs() < 1e-14);
            assert!((a.variance(i) - whole.variance(i)).abs() < 1e-12);
        }
        let mut empty = SpacingAccumulator::new(3);
        empty.merge(&whole);
        assert_eq!(empty, whole);
    }
}
