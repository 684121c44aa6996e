//! Weighted index sampling.
//!
//! `FenwickSampler` is the production sampler: O(log n) weighted draws over a
//! growing weight vector. `LinearCdfSampler` is the independent oracle: it
//! memoizes the running prefix sums of a plain left-to-right scan and answers
//! with the first prefix reaching the target, which is element-for-element
//! the answer a naive linear scan over the same accumulator states produces.
//!
//! Both use the convention: sampled index = smallest i (0-based) with
//! prefix-sum(i+1) >= u * S, each sampler reading its own total S.

/// Compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Debug, Clone)]
pub struct FenwickSampler {
    tree: Vec<f64>,
    len: usize,
    total: Kahan,
}

impl FenwickSampler {
    pub fn with_capacity(capacity: usize) -> Self {
        FenwickSampler { tree: vec![0.0; capacity + 1], len: 0, total: Kahan::default() }
    }

    pub fn from_weights(weights: &[f64]) -> Self {
        let mut s = Self::with_capacity(weights.len());
        for &w in weights {
            s.push(w);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Append one weight at the next index.
    pub fn push(&mut self, w: f64) {
        debug_assert!(w >= 0.0 && w.is_finite());
        self.len += 1;
        if self.len >= self.tree.len() {
            self.tree.resize(self.len + 1, 0.0);
        }
        let mut i = self.len;
        while i < self.tree.len() {
            self.tree[i] += w;
            i += i & i.wrapping_neg();
        }
        self.total.add(w);
    }

    /// Kahan-compensated total of all pushed weights.
    pub fn total(&self) -> f64 {
        self.total.value()
    }

    /// Tree-internal prefix sum of the first `count` weights.
    pub fn prefix(&self, count: usize) -> f64 {
        let mut i = count.min(self.len);
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Smallest 0-based index i with prefix(i+1) >= target, clamped to the
    /// last index when target exceeds the stored prefix mass.
    pub fn search(&self, target: f64) -> usize {
        let mut pos = 0usize;
        let mut rem = target;
        let mut bit = self.len.next_power_of_two();
        if bit > self.len {
            bit >>= 1;
        }
        while bit > 0 {
            let next = pos + bit;
            if next <= self.len && self.tree[next] < rem {
                rem -= self.tree[next];
                pos = next;
            }
            bit >>= 1;
        }
        pos.min(self.len.saturating_sub(1))
    }

    /// Draw an index with probability proportional to its weight.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.search(u * self.total())
    }
}

/// Inverse-CDF oracle over explicitly accumulated prefix sums.
#[derive(Debug, Clone)]
pub struct LinearCdfSampler {
    cumsum: Vec<f64>,
}

impl LinearCdfSampler {
    pub fn from_weights(weights: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumsum = weights
            .iter()
            .map(|&w| {
                acc += w;
                acc
            })
            .collect();
        LinearCdfSampler { cumsum }
    }

    pub fn total(&self) -> f64 {
        *self.cumsum.last().unwrap_or(&0.0)
    }

    /// First 0-based index whose running sum reaches `target` (linear-scan
    /// semantics; the binary search is over the scan's own accumulator
    /// states, so the answer is identical).
    pub fn search(&self, target: f64) -> usize {
        let i = self.cumsum.partition_point(|&c| c < target);
        i.min(self.cumsum.len().saturating_sub(1))
    }

    /// Literal element-by-element scan; used to validate `search`.
    pub fn search_by_scan(&self, target: f64) -> usize {
        for (i, &c) in self.cumsum.iter().enumerate() {
            if c >= target {
                return i;
            }
        }
        self.cumsum.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn convention_defining_case() {
        // weights (1,1,2), u = 0.5: cumulative (1,2,4), threshold 2.0, first
        // prefix >= 2 is index 1 (0-based), vertex 2 (1-based).
        let w = [1.0, 1.0, 2.0];
        let f = FenwickSampler::from_weights(&w);
        let l = LinearCdfSampler::from_weights(&w);
        let target = 0.5 * 4.0;
        assert_eq!(f.search(target), 1);
        assert_eq!(l.search(target), 1);
        assert_eq!(l.search_by_scan(target), 1);
    }

    #[test]
    fn single_weight_always_selected() {
        let f = FenwickSampler::from_weights(&[1.0]);
        let l = LinearCdfSampler::from_weights(&[1.0]);
        for u in [0.0, 0.3, 0.999_999] {
            assert_eq!(f.search(u * f.total()), 0);
            assert_eq!(l.search(u * l.total()), 0);
        }
    }

    #[test]
    fn prefix_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w: Vec<f64> = (0..257).map(|_| rng.gen::<f64>() + 0.01).collect();
        let f = FenwickSampler::from_weights(&w);
        let mut acc = 0.0;
        for (i, &wi) in w.iter().enumerate() {
            acc += wi;
            let p = f.prefix(i + 1);
            assert!((p - acc).abs() <= 1e-12 * acc.abs() + 1e-300);
        }
        assert!((f.total() - acc).abs() <= 1e-12 * acc);
    }

    #[test]
    fn clamps_target_beyond_mass() {
        let f = FenwickSampler::from_weights(&[1.0, 2.0]);
        assert_eq!(f.search(1e9), 1);
        let l = LinearCdfSampler::from_weights(&[1.0, 2.0]);
        assert_eq!(l.search(1e9), 1);
    }

    proptest! {
        #[test]
        fn binary_search_equals_literal_scan(
            weights in proptest::collection::vec(0.01f64..10.0, 1..200),
            us in proptest::collection::vec(0.0f64..1.0, 1..50),
        ) {
            let l = LinearCdfSampler::from_weights(&weights);
            for u in us {
                let t = u * l.total();
                prop_assert_eq!(l.search(t), l.search_by_scan(t));
            }
        }

        #[test]
        fn fenwick_agrees_with_linear_oracle(
            weights in proptest::collection::vec(0.01f64..10.0, 1..200),
            seed in 0u64..1000,
        ) {
            let f = FenwickSampler::from_weights(&weights);
            let l = LinearCdfSampler::from_weights(&weights);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..64 {
                let u: f64 = rng.gen();
                prop_assert_eq!(f.search(u * f.total()), l.search(u * l.total()));
            }
        }
    }

    #[test]
    fn sampling_frequencies_follow_weights() {
        let w = [1.0, 2.0, 7.0];
        let f = FenwickSampler::from_weights(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[f.sample(&mut rng)] += 1;
        }
        for i in 0..3 {
            let p = w[i] / 10.0;
            let phat = counts[i] as f64 / n as f64;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((phat - p).abs() < 4.0 * sigma, "index {i}: {phat} vs {p}");
        }
    }
}
