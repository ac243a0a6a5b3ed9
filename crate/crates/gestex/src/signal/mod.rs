//! Time-domain waveforms, SNR-controlled mixing, truncation, and basic
//! signal statistics.
//!
//! A mixture is the elementwise sum of a target signal and one or more
//! interferer signals that have each been scaled to a requested
//! signal-to-noise ratio against the target. Scaled constituents are stored
//! alongside the mixture so that the sum reconstructs the mixture exactly
//! with unit coefficients.

pub mod wav;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample rate used by all corpus audio.
pub const DEFAULT_SAMPLE_RATE: u32 = 16_000;

/// Mono time-domain signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Waveform {
    /// Builds a waveform, validating that it is non-empty, finite, and has a
    /// positive sample rate.
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("waveform must contain at least one sample"));
        }
        if sample_rate == 0 {
            return Err(Error::invalid("sample rate must be positive"));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!(
                "waveform sample {i} is not finite"
            )));
        }
        Ok(Waveform {
            samples,
            sample_rate,
        })
    }

    /// Builds a 16 kHz waveform.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        Waveform::new(samples, DEFAULT_SAMPLE_RATE)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced non-empty at construction
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Mean squared amplitude over the full utterance.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64
    }

    /// Returns a copy scaled by `gain`.
    pub fn scaled(&self, gain: f64) -> Waveform {
        Waveform {
            samples: self.samples.iter().map(|x| x * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }

    /// Keeps the first `len` samples.
    pub fn truncated(&self, len: usize) -> Result<Waveform> {
        if len == 0 || len > self.samples.len() {
            return Err(Error::invalid(format!(
                "cannot truncate waveform of length {} to {len}",
                self.samples.len()
            )));
        }
        Ok(Waveform {
            samples: self.samples[..len].to_vec(),
            sample_rate: self.sample_rate,
        })
    }
}

/// A simulated mixture: target plus scaled interferers and their sum.
///
/// Constituents are stored post-scaling, so
/// `mixture = target + sum(interferers)` holds elementwise with unit
/// coefficients.
#[derive(Debug, Clone)]
pub struct MixtureExample {
    pub target: Waveform,
    pub interferers: Vec<Waveform>,
    pub snrs_db: Vec<f64>,
    pub mixture: Waveform,
    pub seed: u64,
}

impl MixtureExample {
    pub fn num_interferers(&self) -> usize {
        self.interferers.len()
    }

    /// Relative L2 error between the stored mixture and the sum of stored
    /// constituents. Zero up to rounding by construction.
    pub fn reconstruction_error(&self) -> f64 {
        let n = self.mixture.len();
        let mut err = 0.0;
        let mut norm = 0.0;
        for i in 0..n {
            let mut sum = self.target.samples()[i];
            for b in &self.interferers {
                sum += b.samples()[i];
            }
            let d = self.mixture.samples()[i] - sum;
            err += d * d;
            norm += self.mixture.samples()[i] * self.mixture.samples()[i];
        }
        if norm == 0.0 {
            err.sqrt()
        } else {
            (err / norm).sqrt()
        }
    }

    /// Energy contrast (dB) between the target and the sum of the scaled
    /// interferers; for a single interferer this equals the drawn SNR.
    pub fn target_interference_snr_db(&self) -> f64 {
        let n = self.mixture.len();
        let mut interference = vec![0.0; n];
        for b in &self.interferers {
            for (acc, x) in interference.iter_mut().zip(b.samples()) {
                *acc += x;
            }
        }
        let p_t = self.target.power();
        let p_i = interference.iter().map(|x| x * x).sum::<f64>() / n as f64;
        10.0 * (p_t / p_i).log10()
    }
}

/// Truncates every waveform to the length of the shortest one, keeping the
/// head (prefix) of each so streams stay aligned at t = 0.
pub fn truncate_to_shortest(waveforms: &[Waveform]) -> Result<Vec<Waveform>> {
    if waveforms.is_empty() {
        return Err(Error::invalid("truncate_to_shortest on an empty list"));
    }
    let rate = waveforms[0].sample_rate();
    if waveforms.iter().any(|w| w.sample_rate() != rate) {
        return Err(Error::invalid(
            "truncate_to_shortest requires a single common sample rate",
        ));
    }
    let min_len = waveforms.iter().map(Waveform::len).min().unwrap();
    waveforms.iter().map(|w| w.truncated(min_len)).collect()
}

/// Gain `g` such that mixing `g * signal` against `reference` realizes the
/// requested SNR: `10·log10(P(reference) / P(g·signal)) = snr_db`.
pub fn snr_gain(reference: &Waveform, signal: &Waveform, snr_db: f64) -> Result<f64> {
    let p_ref = reference.power();
    let p_sig = signal.power();
    if p_ref <= 0.0 {
        return Err(Error::DegenerateSignal(
            "snr_gain: reference has zero power".into(),
        ));
    }
    if p_sig <= 0.0 {
        return Err(Error::DegenerateSignal(
            "snr_gain: signal has zero power".into(),
        ));
    }
    Ok((p_ref / (p_sig * 10f64.powf(snr_db / 10.0))).sqrt())
}

/// Simulates a mixture: truncates all signals to the common (shortest)
/// length, scales each interferer to its requested SNR against the truncated
/// target, and sums.
///
/// `seed` is carried through for bookkeeping; the operation itself is fully
/// deterministic in its inputs.
pub fn simulate_mixture(
    target: &Waveform,
    interferers: &[Waveform],
    snrs_db: &[f64],
    seed: u64,
) -> Result<MixtureExample> {
    if interferers.is_empty() {
        return Err(Error::invalid("simulate_mixture needs at least one interferer"));
    }
    if interferers.len() != snrs_db.len() {
        return Err(Error::invalid(format!(
            "got {} interferers but {} SNR values",
            interferers.len(),
            snrs_db.len()
        )));
    }

    let mut all = Vec::with_capacity(1 + interferers.len());
    all.push(target.clone());
    all.extend(interferers.iter().cloned());
    let mut truncated = truncate_to_shortest(&all)?;
    let target = truncated.remove(0);

    let mut scaled = Vec::with_capacity(truncated.len());
    for (b, &snr) in truncated.iter().zip(snrs_db) {
        let g = snr_gain(&target, b, snr)?;
        scaled.push(b.scaled(g));
    }

    let mut mix = target.samples().to_vec();
    for b in &scaled {
        for (m, x) in mix.iter_mut().zip(b.samples()) {
            *m += x;
        }
    }
    let mixture = Waveform::new(mix, target.sample_rate())?;

    Ok(MixtureExample {
        target,
        interferers: scaled,
        snrs_db: snrs_db.to_vec(),
        mixture,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(samples: &[f64]) -> Waveform {
        Waveform::from_samples(samples.to_vec()).unwrap()
    }

    #[test]
    fn waveform_rejects_bad_input() {
        assert!(Waveform::from_samples(vec![]).is_err());
        assert!(Waveform::from_samples(vec![f64::NAN]).is_err());
        assert!(Waveform::new(vec![0.5], 0).is_err());
    }

    #[test]
    fn truncate_keeps_prefixes_of_min_length() {
        let ws = vec![
            wave(&(0..100).map(|i| i as f64).collect::<Vec<_>>()),
            wave(&(0..80).map(|i| -(i as f64)).collect::<Vec<_>>()),
            wave(&(0..120).map(|i| i as f64 * 0.5).collect::<Vec<_>>()),
        ];
        let out = truncate_to_shortest(&ws).unwrap();
        assert!(out.iter().all(|w| w.len() == 80));
        for (o, w) in out.iter().zip(&ws) {
            assert_eq!(o.samples(), &w.samples()[..80]);
        }
    }

    #[test]
    fn truncate_single_is_identity() {
        let w = wave(&[1.0; 50]);
        let out = truncate_to_shortest(std::slice::from_ref(&w)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], w);
    }

    #[test]
    fn truncate_equal_lengths_is_noop() {
        let ws = vec![wave(&[1.0, 2.0, 3.0]), wave(&[4.0, 5.0, 6.0])];
        let out = truncate_to_shortest(&ws).unwrap();
        assert_eq!(out, ws);
    }

    #[test]
    fn truncate_is_idempotent() {
        let ws = vec![wave(&[1.0; 9]), wave(&[2.0; 7])];
        let once = truncate_to_shortest(&ws).unwrap();
        let twice = truncate_to_shortest(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn truncate_rejects_empty_and_mixed_rates() {
        assert!(truncate_to_shortest(&[]).is_err());
        let a = Waveform::new(vec![1.0], 16_000).unwrap();
        let b = Waveform::new(vec![1.0], 8_000).unwrap();
        assert!(truncate_to_shortest(&[a, b]).is_err());
    }

    #[test]
    fn snr_gain_known_values() {
        // P(ref)=1, P(sig)=4: 0 dB needs gain 0.5; equal powers need gain 1.
        let r = wave(&[1.0, -1.0, 1.0, -1.0]);
        let s = wave(&[2.0, -2.0, 2.0, -2.0]);
        assert!((snr_gain(&r, &s, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((snr_gain(&r, &r, 0.0).unwrap() - 1.0).abs() < 1e-12);
        // 10 dB: g = sqrt(1 / (4 * 10)) = 0.15811388...
        let g = snr_gain(&r, &s, 10.0).unwrap();
        assert!((g - 0.158_113_883_008_418_97).abs() < 1e-12);
        // Oracle check: measure the realized SNR of the scaled signal.
        let scaled = s.scaled(g);
        let measured = 10.0 * (r.power() / scaled.power()).log10();
        assert!((measured - 10.0).abs() < 1e-9);
    }

    #[test]
    fn snr_gain_scale_covariant() {
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let r = wave(&(0..64).map(|_| next()).collect::<Vec<_>>());
        let s = wave(&(0..64).map(|_| next()).collect::<Vec<_>>());
        for &c in &[0.1, 2.0, 37.5] {
            let g1 = snr_gain(&r, &s, 4.2).unwrap();
            let g2 = snr_gain(&r, &s.scaled(c), 4.2).unwrap();
            assert!((g2 - g1 / c).abs() / (g1 / c) < 1e-9);
        }
    }

    #[test]
    fn snr_gain_rejects_silence() {
        let r = wave(&[1.0, -1.0]);
        let z = wave(&[0.0, 0.0]);
        assert!(matches!(
            snr_gain(&r, &z, 0.0),
            Err(Error::DegenerateSignal(_))
        ));
        assert!(matches!(
            snr_gain(&z, &r, 0.0),
            Err(Error::DegenerateSignal(_))
        ));
    }

    #[test]
    fn mixture_unit_gain_case() {
        // Equal powers at 0 dB: mixture is the plain sum.
        let t = wave(&[1.0, -1.0, 1.0, -1.0]);
        let b = wave(&[-1.0, 1.0, 1.0, -1.0]);
        let m = simulate_mixture(&t, &[b.clone()], &[0.0], 7).unwrap();
        for i in 0..4 {
            assert!((m.mixture.samples()[i] - (t.samples()[i] + b.samples()[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_self_mix_doubles() {
        let t = wave(&[0.4, -0.3, 0.2, 0.9]);
        let m = simulate_mixture(&t, &[t.clone()], &[0.0], 0).unwrap();
        for i in 0..4 {
            assert!((m.mixture.samples()[i] - 2.0 * t.samples()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_realizes_requested_snrs() {
        let mut state = 42u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let t = wave(&(0..256).map(|_| next()).collect::<Vec<_>>());
        let b1 = wave(&(0..256).map(|_| next()).collect::<Vec<_>>());
        let b2 = wave(&(0..256).map(|_| next()).collect::<Vec<_>>());
        let m = simulate_mixture(&t, &[b1, b2], &[-5.0, 3.0], 1).unwrap();
        // Oracle: measure power ratios of the stored constituents.
        for (b, &want) in m.interferers.iter().zip(&m.snrs_db) {
            let measured = 10.0 * (m.target.power() / b.power()).log10();
            assert!((measured - want).abs() < 1e-6, "{measured} vs {want}");
        }
        assert!(m.reconstruction_error() < 1e-6);
    }

    #[test]
    fn mixture_truncates_to_common_length() {
        let t = wave(&[1.0; 10]);
        let b = wave(&[0.5; 6]);
        let m = simulate_mixture(&t, &[b], &[0.0], 0).unwrap();
        assert_eq!(m.mixture.len(), 6);
        assert_eq!(m.target.len(), 6);
        assert_eq!(m.interferers[0].len(), 6);
    }

    #[test]
    fn mixture_is_deterministic() {
        let t = wave(&[0.1, 0.2, -0.4, 0.8]);
        let b = wave(&[0.9, -0.2, 0.3, 0.1]);
        let a = simulate_mixture(&t, &[b.clone()], &[2.5], 9).unwrap();
        let c = simulate_mixture(&t, &[b], &[2.5], 9).unwrap();
        assert_eq!(a.mixture.samples(), c.mixture.samples());
        assert_eq!(a.interferers[0].samples(), c.interferers[0].samples());
    }
}
