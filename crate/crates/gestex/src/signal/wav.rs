//! Mono WAV input/output.
//!
//! Readers accept 16-bit integer and 32-bit float PCM and up-convert to the
//! internal f64 representation; the writer emits 32-bit float WAV.

use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::Waveform;

/// Reads a mono WAV file.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Waveform> {
    let path = path.as_ref();
    let mut reader = hound::WavReader::open(path)
        .map_err(|e| wav_err(path, "open", e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::DataIntegrity(format!(
            "{}: expected mono audio, found {} channels",
            path.display(),
            spec.channels
        )));
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, "decode", e))?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, "decode", e))?,
        (fmt, bits) => {
            return Err(Error::DataIntegrity(format!(
                "{}: unsupported WAV format {fmt:?}/{bits}-bit (want 16-bit int or 32-bit float)",
                path.display()
            )))
        }
    };
    Waveform::new(samples, spec.sample_rate)
}

/// Writes a waveform as 32-bit float WAV.
pub fn write_wav(path: impl AsRef<Path>, waveform: &Waveform) -> Result<()> {
    let path = path.as_ref();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: waveform.sample_rate(),
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer =
        hound::WavWriter::create(path, spec).map_err(|e| wav_err(path, "create", e))?;
    for &s in waveform.samples() {
        writer
            .write_sample(s as f32)
            .map_err(|e| wav_err(path, "write", e))?;
    }
    writer.finalize().map_err(|e| wav_err(path, "finalize", e))
}

fn wav_err(path: &Path, stage: &str, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::DataIntegrity(format!("{}: WAV {stage} failed: {other}", path.display())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_roundtrip_preserves_f32_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        let w = Waveform::new(vec![0.0, 0.25, -0.5, 1.5, -1.25], 16_000).unwrap();
        write_wav(&path, &w).unwrap();
        let r = read_wav(&path).unwrap();
        assert_eq!(r.sample_rate(), 16_000);
        assert_eq!(r.len(), w.len());
        for (a, b) in r.samples().iter().zip(w.samples()) {
            assert_eq!(*a, *b as f32 as f64);
        }
    }

    #[test]
    fn reads_16bit_int() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i16.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 16_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut wr = hound::WavWriter::create(&path, spec).unwrap();
        for v in [-32768i16, -16384, 0, 16384, 32767] {
            wr.write_sample(v).unwrap();
        }
        wr.finalize().unwrap();
        let w = read_wav(&path).unwrap();
        assert_eq!(w.samples()[0], -1.0);
        assert_eq!(w.samples()[2], 0.0);
        assert!((w.samples()[4] - 32767.0 / 32768.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_stereo() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("st.wav");
        let spec = hound::WavSpec {
            channels: 2,
            sample_rate: 16_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut wr = hound::WavWriter::create(&path, spec).unwrap();
        for _ in 0..4 {
            wr.write_sample(0i16).unwrap();
        }
        wr.finalize().unwrap();
        assert!(matches!(read_wav(&path), Err(Error::DataIntegrity(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            read_wav("/nonexistent/definitely/missing.wav"),
            Err(Error::Io { .. })
        ));
    }
}
