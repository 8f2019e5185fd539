//! Minimal reader for 16-bit PCM WAV files.
//!
//! Mono data is returned as-is; stereo (or more) is downmixed by averaging
//! with a warning. Samples are scaled by 1/32768 into `[-1, 1)` and the
//! sampling period comes from the format chunk. Compressed or float
//! encodings are rejected.

use crate::error::CliError;
use jade_core::Signal;

/// Decoded audio plus any non-fatal notes (e.g. a stereo downmix).
#[derive(Debug, Clone)]
pub struct WavAudio {
    pub signal: Signal,
    pub warnings: Vec<String>,
}

fn u16_at(bytes: &[u8], at: usize) -> Result<u16, CliError> {
    bytes
        .get(at..at + 2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .ok_or_else(|| CliError::Data("truncated WAV file".into()))
}

fn u32_at(bytes: &[u8], at: usize) -> Result<u32, CliError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| CliError::Data("truncated WAV file".into()))
}

/// Decode a WAV byte stream.
pub fn decode_wav(bytes: &[u8]) -> Result<WavAudio, CliError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(CliError::Data("not a RIFF/WAVE file".into()));
    }
    let mut pos = 12usize;
    let mut format: Option<(u16, u16, u32, u16)> = None; // codec, channels, rate, bits
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4)? as usize;
        let body = bytes
            .get(pos + 8..pos + 8 + size)
            .ok_or_else(|| CliError::Data("truncated WAV chunk".into()))?;
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(CliError::Data("malformed fmt chunk".into()));
                }
                format = Some((
                    u16_at(body, 0)?,
                    u16_at(body, 2)?,
                    u32_at(body, 4)?,
                    u16_at(body, 14)?,
                ));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word-aligned.
        pos += 8 + size + (size & 1);
    }
    let (codec, channels, rate, bits) =
        format.ok_or_else(|| CliError::Data("missing fmt chunk".into()))?;
    if codec != 1 || bits != 16 {
        return Err(CliError::Data(format!(
            "unsupported encoding: codec {codec}, {bits} bits (need 16-bit PCM)"
        )));
    }
    if channels == 0 || rate == 0 {
        return Err(CliError::Data("malformed fmt chunk".into()));
    }
    let data = data.ok_or_else(|| CliError::Data("missing data chunk".into()))?;
    let frame = 2 * channels as usize;
    let frames = data.len() / frame;
    if frames == 0 {
        return Err(CliError::Data("empty data chunk".into()));
    }

    let mut warnings = Vec::new();
    if channels > 1 {
        warnings.push(format!("downmixing {channels} channels to mono by averaging"));
    }
    let mut samples = Vec::with_capacity(frames);
    for f in 0..frames {
        let mut acc = 0.0;
        for c in 0..channels as usize {
            let at = f * frame + 2 * c;
            let v = i16::from_le_bytes([data[at], data[at + 1]]);
            acc += v as f64 / 32768.0;
        }
        samples.push(acc / channels as f64);
    }
    Ok(WavAudio {
        signal: Signal::new(samples, 1.0 / rate as f64)?,
        warnings,
    })
}

/// Read and decode a WAV file from disk.
pub fn read_wav(path: &std::path::Path) -> Result<WavAudio, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    decode_wav(&bytes)
}

/// Assemble a 16-bit PCM WAV byte stream; test and fixture helper.
pub fn encode_wav(channels: &[Vec<i16>], sample_rate: u32) -> Vec<u8> {
    let n_channels = channels.len() as u16;
    let frames = channels.first().map_or(0, Vec::len);
    let data_size = (frames * 2 * n_channels as usize) as u32;
    let mut out = Vec::with_capacity(44 + data_size as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_size).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&n_channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2 * n_channels as u32).to_le_bytes());
    out.extend_from_slice(&(2 * n_channels).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_size.to_le_bytes());
    for f in 0..frames {
        for ch in channels {
            out.extend_from_slice(&ch[f].to_le_bytes());
        }
    }
    out
}
