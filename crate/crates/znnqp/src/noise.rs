//! Deterministic, seedable generators for the additive disturbance injected
//! into the neural dynamics.
//!
//! Noise is sampled once per Euler step and held for the step, so a run is
//! fully replayable from (seed, step_index).

use crate::numkit::{next_uniform_sym, Vector};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

#[derive(Clone, Debug)]
pub enum NoiseKind {
    Zero,
    /// `amp * cos(freq * t + i * phase_step)` on component `i`. The default
    /// `phase_step = 0` applies the same scalar to every component.
    Sinusoid {
        amp: f64,
        freq: f64,
    },
    /// Sinusoid with a per-component phase offset.
    SinusoidPhased {
        amp: f64,
        freq: f64,
        phase_step: f64,
    },
    /// Fresh uniform draw on [-amp, amp] per component per step; the stream
    /// is a pure function of (seed, step_index).
    BoundedWhite {
        amp: f64,
        seed: u64,
    },
    /// Element-wise sum of the members.
    Composite(Vec<NoiseKind>),
}

/// A disturbance channel of fixed output dimension.
#[derive(Clone, Debug)]
pub struct NoiseChannel {
    pub kind: NoiseKind,
    pub dim: usize,
}

impl NoiseChannel {
    pub fn zero(dim: usize) -> Self {
        NoiseChannel {
            kind: NoiseKind::Zero,
            dim,
        }
    }

    pub fn sample(&self, t: f64, step_index: u64) -> Vector {
        let mut out = Vector::zeros(self.dim);
        sample_into(&self.kind, t, step_index, &mut out);
        out
    }

    /// Exact analytic sup-norm bound of the channel.
    pub fn inf_bound(&self) -> f64 {
        kind_inf_bound(&self.kind)
    }

    /// Analytic Euclidean-norm bound: the per-component bound spread over
    /// the full dimension. This is the constant that bounds the projection
    /// of the disturbance onto any unit direction.
    pub fn l2_bound(&self) -> f64 {
        self.inf_bound() * (self.dim as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.inf_bound() == 0.0
    }
}

fn sample_into(kind: &NoiseKind, t: f64, step_index: u64, out: &mut Vector) {
    match kind {
        NoiseKind::Zero => {}
        NoiseKind::Sinusoid { amp, freq } => {
            let v = amp * (freq * t).cos();
            for i in 0..out.len() {
                out[i] += v;
            }
        }
        NoiseKind::SinusoidPhased {
            amp,
            freq,
            phase_step,
        } => {
            for i in 0..out.len() {
                out[i] += amp * (freq * t + i as f64 * phase_step).cos();
            }
        }
        NoiseKind::BoundedWhite { amp, seed } => {
            // one ChaCha stream per (seed, step): replayable zero-order hold
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(step_index);
            for i in 0..out.len() {
                out[i] += amp * next_uniform_sym(&mut rng);
            }
        }
        NoiseKind::Composite(members) => {
            for member in members {
                sample_into(member, t, step_index, out);
            }
        }
    }
}

fn kind_inf_bound(kind: &NoiseKind) -> f64 {
    match kind {
        NoiseKind::Zero => 0.0,
        NoiseKind::Sinusoid { amp, .. } => amp.abs(),
        NoiseKind::SinusoidPhased { amp, .. } => amp.abs(),
        NoiseKind::BoundedWhite { amp, .. } => amp.abs(),
        NoiseKind::Composite(members) => members.iter().map(kind_inf_bound).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_channel() {
        let ch = NoiseChannel::zero(5);
        assert_eq!(ch.sample(3.2, 17).norm_inf(), 0.0);
        assert_eq!(ch.inf_bound(), 0.0);
    }

    #[test]
    fn sinusoid_at_zero() {
        let ch = NoiseChannel {
            kind: NoiseKind::Sinusoid {
                amp: 0.2,
                freq: 1.0,
            },
            dim: 7,
        };
        let v = ch.sample(0.0, 0);
        for i in 0..7 {
            assert_eq!(v[i], 0.2);
        }
        assert_eq!(ch.inf_bound(), 0.2);
    }

    #[test]
    fn white_bounded_and_replayable() {
        let ch = NoiseChannel {
            kind: NoiseKind::BoundedWhite { amp: 0.5, seed: 9 },
            dim: 7,
        };
        let mut max = 0.0f64;
        for k in 0..20_000u64 {
            let v = ch.sample(0.0, k);
            max = max.max(v.norm_inf());
        }
        assert!(max <= 0.5);
        assert!(max > 0.49, "should nearly reach the bound, got {max}");
        assert_eq!(ch.sample(1.0, 123), ch.sample(55.0, 123));
        assert_ne!(ch.sample(0.0, 0), ch.sample(0.0, 1));
    }

    #[test]
    fn phased_sinusoid_staggers_components() {
        let ch = NoiseChannel {
            kind: NoiseKind::SinusoidPhased {
                amp: 1.0,
                freq: 2.0,
                phase_step: 0.4,
            },
            dim: 3,
        };
        let v = ch.sample(0.7, 0);
        for i in 0..3 {
            assert!((v[i] - (2.0 * 0.7 + i as f64 * 0.4).cos()).abs() < 1e-15);
        }
        assert_eq!(ch.inf_bound(), 1.0);
    }

    #[test]
    fn composite_bound_is_sum() {
        let ch = NoiseChannel {
            kind: NoiseKind::Composite(vec![
                NoiseKind::Sinusoid {
                    amp: 1.0,
                    freq: 1.0,
                },
                NoiseKind::BoundedWhite { amp: 1.0, seed: 4 },
            ]),
            dim: 3,
        };
        assert_eq!(ch.inf_bound(), 2.0);
        assert!((ch.l2_bound() - 2.0 * 3.0f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn samples_respect_inf_bound(step in 0u64..5000, t in 0.0f64..20.0, seed in 0u64..50) {
            let ch = NoiseChannel {
                kind: NoiseKind::Composite(vec![
                    NoiseKind::Sinusoid { amp: 0.3, freq: 2.0 },
                    NoiseKind::BoundedWhite { amp: 0.7, seed },
                ]),
                dim: 6,
            };
            prop_assert!(ch.sample(t, step).norm_inf() <= ch.inf_bound());
        }
    }
}
