use std::sync::Arc;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use super::{ReturnSource, StreamSeed};
use crate::graph::RootedGraph;

const GUIDE_BUCKETS: usize = 1 << 12;
/// Tables are extended until the tail drops below the smallest uniform
/// variate the samplers can produce.
pub(crate) const TAIL_FLOOR: f64 = 1.0 / (1u64 << 53) as f64;
const MAX_TERMS: usize = 1 << 24;

/// Which chain's returns a law describes: the walk itself, optionally
/// observed every other tick, optionally lazified afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainView {
    pub every_other: bool,
    pub lazy: bool,
}

impl ChainView {
    pub const PLAIN: ChainView = ChainView {
        every_other: false,
        lazy: false,
    };
    pub const LAZY: ChainView = ChainView {
        every_other: false,
        lazy: true,
    };
    pub const LAZY_EVERY_OTHER: ChainView = ChainView {
        every_other: true,
        lazy: true,
    };
}

/// Uniform variate on `(0, 1]` with 53 random bits.
#[inline]
pub(crate) fn unit_open_closed(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * TAIL_FLOOR
}

/// Inverse-CDF sampling from a decreasing tail `w_0 ≥ w_1 ≥ …` whose last
/// entry lies below [`TAIL_FLOOR`]: returns the first `i` with `w_i < u`.
/// A guide table on `u` makes the search constant time on average.
#[derive(Debug, Clone)]
pub(crate) struct TailSampler {
    tail: Vec<f64>,
    guide: Vec<u32>,
}

impl TailSampler {
    pub(crate) fn new(mut tail: Vec<f64>) -> Self {
        if tail.last().is_none_or(|&w| w >= TAIL_FLOOR) {
            tail.push(0.0);
        }
        // guide[j] = first i with w_i < (j + 1) / B, a lower bound for the
        // answer whenever u lies in bucket j
        let mut guide = vec![0u32; GUIDE_BUCKETS];
        let mut i = 0;
        for j in (0..GUIDE_BUCKETS).rev() {
            let upper = (j + 1) as f64 / GUIDE_BUCKETS as f64;
            while tail[i] >= upper {
                i += 1;
            }
            guide[j] = i as u32;
        }
        TailSampler { tail, guide }
    }

    pub(crate) fn tail(&self) -> &[f64] {
        &self.tail
    }

    #[inline]
    pub(crate) fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u = unit_open_closed(rng);
        let bucket = (u * GUIDE_BUCKETS as f64) as usize;
        let mut i = self.guide[bucket.min(GUIDE_BUCKETS - 1)] as usize;
        while self.tail[i] >= u {
            i += 1;
        }
        i
    }
}

/// Inverse-CDF sampler for the first-return time of a walk.
///
/// Survival probabilities `z_k = P(T₁ > k)` come from a floating-point
/// taboo-walk recursion (mass that has not yet returned).
#[derive(Debug, Clone)]
pub struct GapSampler {
    table: TailSampler,
    view: ChainView,
}

impl GapSampler {
    pub fn new(g: &RootedGraph, lazy: bool) -> Self {
        let view = ChainView {
            every_other: false,
            lazy,
        };
        Self::for_view(g, view)
    }

    pub fn for_view(g: &RootedGraph, view: ChainView) -> Self {
        GapSampler {
            table: TailSampler::new(taboo_survival(g, view)),
            view,
        }
    }

    pub fn is_lazy(&self) -> bool {
        self.view.lazy
    }

    pub fn view(&self) -> ChainView {
        self.view
    }

    /// `z_0, z_1, …` down to the floor.
    pub fn survival(&self) -> &[f64] {
        self.table.tail()
    }

    /// `P(T₁ = k)` for `k = 0..`.
    pub fn first_return_probabilities(&self) -> Vec<f64> {
        let mut s = vec![0.0];
        s.extend(self.survival().windows(2).map(|w| w[0] - w[1]));
        s
    }

    #[inline]
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        self.table.sample(rng) as u64
    }
}

fn taboo_survival(g: &RootedGraph, view: ChainView) -> Vec<f64> {
    let n = g.n();
    let r = g.root();
    let inv_deg: Vec<f64> = g.degrees().into_iter().map(|d| 1.0 / d as f64).collect();
    let step = |from: &[f64], to: &mut Vec<f64>| {
        to.iter_mut().for_each(|x| *x = 0.0);
        for (y, &my) in from.iter().enumerate() {
            if my == 0.0 {
                continue;
            }
            let share = my * inv_deg[y];
            for &x in g.neighbors(y) {
                to[x] += share;
            }
        }
    };
    let mut mass = vec![0.0; n];
    mass[r] = 1.0;
    let mut moved = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut survival = vec![1.0];
    while survival.len() < MAX_TERMS {
        step(&mass, &mut moved);
        if view.every_other {
            step(&moved, &mut scratch);
            std::mem::swap(&mut moved, &mut scratch);
        }
        if view.lazy {
            for (m, &x) in moved.iter_mut().zip(&mass) {
                *m = 0.5 * (*m + x);
            }
        }
        moved[r] = 0.0;
        std::mem::swap(&mut mass, &mut moved);
        // summing the surviving mass keeps relative accuracy in the tail
        let z: f64 = mass.iter().sum();
        survival.push(z);
        if z < TAIL_FLOOR {
            break;
        }
    }
    // if truncated, TailSampler lumps the remaining mass into one final gap
    survival
}

/// Returns generated as a renewal process with iid gaps from a
/// [`GapSampler`]. Identical in law to the return sequence of the walk the
/// sampler was built from, since successive gaps are iid copies of `T₁`.
pub struct RenewalStream {
    sampler: Arc<GapSampler>,
    rng: ChaCha8Rng,
    clock: u64,
}

impl RenewalStream {
    pub fn new(sampler: Arc<GapSampler>, seed: StreamSeed) -> Self {
        RenewalStream {
            sampler,
            rng: seed.rng(),
            clock: 0,
        }
    }
}

impl ReturnSource for RenewalStream {
    #[inline]
    fn next_return(&mut self) -> u64 {
        self.clock += self.sampler.sample(&mut self.rng);
        self.clock
    }

    fn clock(&self) -> u64 {
        self.clock
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{first_return_series, return_gen_fun};
    use crate::graph::{build_family, Family};
    use num_traits::ToPrimitive;

    #[test]
    fn survival_matches_exact_series() {
        for (fam, size) in [(Family::Cycle, 5), (Family::Hypercube, 3), (Family::Star, 3)] {
            let g = build_family(fam, size).unwrap();
            let f = return_gen_fun(&g);
            for lazy in [false, true] {
                let f = if lazy { f.lazy().unwrap() } else { f.clone() };
                let exact = first_return_series(&f, g.n(), 60).z.unwrap();
                let sampler = GapSampler::new(&g, lazy);
                assert_eq!(sampler.is_lazy(), lazy);
                for (k, z) in exact.iter().enumerate() {
                    let zf = z.to_f64().unwrap();
                    let got = sampler.survival().get(k).copied().unwrap_or(0.0);
                    assert!((got - zf).abs() <= 1e-12 * zf.max(1e-300) + 1e-15, "{fam:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn every_other_survival_matches_exact_series() {
        for (fam, size) in [(Family::Cycle, 3), (Family::Cycle, 6), (Family::Complete, 4)] {
            let g = build_family(fam, size).unwrap();
            let f = return_gen_fun(&g).every_other().lazy().unwrap();
            let exact = first_return_series(&f, g.n(), 40).z.unwrap();
            let sampler = GapSampler::for_view(&g, ChainView::LAZY_EVERY_OTHER);
            for (k, z) in exact.iter().enumerate() {
                let zf = z.to_f64().unwrap();
                let got = sampler.survival().get(k).copied().unwrap_or(0.0);
                assert!((got - zf).abs() <= 1e-12 * zf.max(1e-300) + 1e-15, "{fam:?} k={k}");
            }
        }
    }

    #[test]
    fn edge_gaps_are_two() {
        let k2 = build_family(Family::Complete, 2).unwrap();
        let s = Arc::new(GapSampler::new(&k2, false));
        let mut stream = RenewalStream::new(s, StreamSeed::new(4));
        for i in 1..=20 {
            assert_eq!(stream.next_return(), 2 * i);
        }
    }
}
