//! Monte Carlo reductions.
//!
//! Every stochastic answer in the crate is a [`SummaryStat`]. Samples are
//! accumulated in fixed-size chunks, each drawn from its own substream, and
//! the per-chunk moments are merged in chunk order. The merged result is
//! therefore independent of worker count and scheduling.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::rng::RngStream;

/// Paths per chunk for parallel estimators.
pub const MC_CHUNK: usize = 4096;

/// Streaming mean and centred second moment (Welford update, Chan merge).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let (na, nb) = (self.n as f64, other.n as f64);
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * nb / n as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n as f64,
        }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.sample_variance() / self.n as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Monte Carlo estimate: count, mean, standard error and the fingerprint of
/// the stream(s) that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub n: u64,
    pub mean: f64,
    pub std_error: f64,
    pub seed_fingerprint: u64,
    m2: f64,
}

impl SummaryStat {
    pub fn from_moments(m: Moments, seed_fingerprint: u64) -> Self {
        Self {
            n: m.n,
            mean: m.mean,
            std_error: m.std_error(),
            seed_fingerprint,
            m2: m.m2,
        }
    }

    pub fn moments(&self) -> Moments {
        Moments {
            n: self.n,
            mean: self.mean,
            m2: self.m2,
        }
    }

    /// Pool two estimates built from disjoint streams.
    pub fn merge(&self, other: &SummaryStat) -> SummaryStat {
        SummaryStat::from_moments(
            self.moments().merge(&other.moments()),
            self.seed_fingerprint ^ other.seed_fingerprint,
        )
    }

    /// Deterministic rescaling `c * X`.
    pub fn scaled(&self, c: f64) -> SummaryStat {
        SummaryStat {
            n: self.n,
            mean: c * self.mean,
            std_error: c.abs() * self.std_error,
            seed_fingerprint: self.seed_fingerprint,
            m2: c * c * self.m2,
        }
    }

    pub fn sample_variance(&self) -> f64 {
        self.moments().sample_variance()
    }

    /// `|mean - target| <= k * std_error`, with exact equality accepted when
    /// the standard error vanishes.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Reduce a sample stream chunk by chunk and merge the chunk moments in order.
pub fn mc_reduce<I>(samples: I, chunking: usize) -> Result<SummaryStat>
where
    I: IntoIterator<Item = f64>,
{
    if chunking == 0 {
        return Err(invalid("chunking must be at least 1"));
    }
    let mut total = Moments::default();
    let mut chunk = Moments::default();
    for x in samples {
        chunk.push(x);
        if chunk.n as usize == chunking {
            total = total.merge(&chunk);
            chunk = Moments::default();
        }
    }
    total = total.merge(&chunk);
    if total.n == 0 {
        return Err(invalid("mc_reduce needs at least one sample"));
    }
    Ok(SummaryStat::from_moments(total, 0))
}

/// Parallel Monte Carlo over `n_samples` draws of `sample`, in chunks of
/// [`MC_CHUNK`]. Chunk `c` draws from `rng.substream(c)`; the closure gets the
/// chunk stream and the global sample index.
pub fn estimate<F>(rng: &RngStream, n_samples: usize, sample: F) -> Result<SummaryStat>
where
    F: Fn(&mut RngStream, usize) -> Result<f64> + Sync,
{
    if n_samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let chunks: Vec<Result<Moments>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut stream = rng.substream(c as u64);
            let start = c * MC_CHUNK;
            let end = (start + MC_CHUNK).min(n_samples);
            let mut m = Moments::default();
            for i in start..end {
                m.push(sample(&mut stream, i)?);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for m in chunks {
        total = total.merge(&m?);
    }
    Ok(SummaryStat::from_moments(total, rng.fingerprint()))
}

/// Parallel map over chunked substreams, returning per-sample outputs in
/// index order. Used where raw samples (not just moments) are needed.
pub fn sample_all<T, F>(rng: &RngStream, n_samples: usize, sample: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> T + Sync,
{
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let chunks: Vec<Vec<T>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut stream = rng.substream(c as u64);
            let start = c * MC_CHUNK;
            let end = (start + MC_CHUNK).min(n_samples);
            (start..end).map(|i| sample(&mut stream, i)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn constant_data_has_zero_error() {
        let s = mc_reduce([1.0, 1.0, 1.0, 1.0], 2).unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.std_error, 0.0);
    }

    #[test]
    fn two_point_formula() {
        let s = mc_reduce([0.0, 2.0], 1).unwrap();
        assert_eq!(s.mean, 1.0);
        assert!((s.std_error - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chunk_merge_matches_single_pass() {
        // direct two-pass computation as oracle
        let xs = [1.0, 2.0, 3.0, 4.0];
        let mean = xs.iter().sum::<f64>() / 4.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 3.0;
        let se = (var / 4.0).sqrt();
        let merged = mc_reduce(xs, 2).unwrap();
        assert!((merged.mean - mean).abs() <= 1e-15 * mean);
        assert!((merged.std_error - se).abs() <= 1e-15 * se);
    }

    #[test]
    fn empty_stream_rejected() {
        assert!(mc_reduce(std::iter::empty(), 4).is_err());
        assert!(mc_reduce([1.0], 0).is_err());
    }

    #[test]
    fn single_sample_has_zero_error() {
        let s = mc_reduce([3.5], 8).unwrap();
        assert_eq!((s.n, s.mean, s.std_error), (1, 3.5, 0.0));
    }

    #[test]
    fn estimate_independent_of_thread_count() {
        let rng = RngStream::new(11, 0);
        let f = |r: &mut RngStream, _: usize| Ok((r.next_u64() >> 11) as f64 / (1u64 << 53) as f64);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate(&rng, 20_000, f).unwrap());
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| estimate(&rng, 20_000, f).unwrap());
        assert_eq!(one, four);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        assert!((fit_slope(&xs, &ys) + 2.0).abs() < 1e-14);
    }
}
