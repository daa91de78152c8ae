//! Parallel map helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it the same entry points run sequentially, so
//! callers never need to care which build they got.

/// Execution mode for data-parallel loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Use rayon when compiled in, otherwise same as `Sequential`.
    #[default]
    Auto,
    Sequential,
}

#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(n: usize, mode: Parallelism, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Parallelism::Auto => (0..n).into_par_iter().map(f).collect(),
        Parallelism::Sequential => (0..n).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(n: usize, _mode: Parallelism, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Pairwise (cascade) summation. Deterministic for a fixed input order and
/// accurate to O(log n) rounding, independent of how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Neumaier compensated accumulator for long running sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_easy_input() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn compensated_sum_handles_cancellation() {
        let mut acc = Accumulator::default();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn map_indexed_preserves_order() {
        let v = map_indexed(8, Parallelism::Auto, |i| i * i);
        assert_eq!(v, vec![0, 1, 4, 9, 16, 25, 36, 49]);
    }
}
