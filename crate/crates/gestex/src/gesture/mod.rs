//! Pose sequences, spine-centering, normalization, and temporal up-sampling
//! of gesture embeddings to the speech-embedding frame rate.

pub mod posefile;

use ndarray::{Array2, Array3, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed joint order for all pose data.
pub const JOINT_NAMES: [&str; 10] = [
    "head", "neck", "nose", "spine", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist",
    "r_wrist",
];

/// Index of the spine joint in [`JOINT_NAMES`].
pub const SPINE_JOINT: usize = 3;

pub const NUM_JOINTS: usize = 10;
pub const NUM_COORDS: usize = 3;

/// Pose frame rate used by all corpus gesture data.
pub const DEFAULT_POSE_FPS: f64 = 15.0;

/// Upper-body joint coordinates over time, shape `frames x 10 x 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseSequence {
    joints: Array3<f64>,
    frame_rate: f64,
}

impl PoseSequence {
    pub fn new(joints: Array3<f64>, frame_rate: f64) -> Result<Self> {
        let shape = joints.shape();
        if shape[1] != NUM_JOINTS || shape[2] != NUM_COORDS {
            return Err(Error::invalid(format!(
                "pose sequence must be frames x {NUM_JOINTS} x {NUM_COORDS}, got {shape:?}"
            )));
        }
        if shape[0] == 0 {
            return Err(Error::invalid("pose sequence must contain at least one frame"));
        }
        if !(frame_rate > 0.0 && frame_rate.is_finite()) {
            return Err(Error::invalid("pose frame rate must be positive"));
        }
        if joints.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("pose coordinates must be finite"));
        }
        Ok(PoseSequence { joints, frame_rate })
    }

    pub fn joints(&self) -> &Array3<f64> {
        &self.joints
    }

    pub fn num_frames(&self) -> usize {
        self.joints.shape()[0]
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn duration_s(&self) -> f64 {
        self.num_frames() as f64 / self.frame_rate
    }

    /// True when the spine joint is zero (within `tol`) in every frame.
    pub fn is_spine_centered(&self, tol: f64) -> bool {
        self.joints
            .index_axis(Axis(1), SPINE_JOINT)
            .iter()
            .all(|x| x.abs() <= tol)
    }

    /// Keeps the first `frames` frames.
    pub fn truncated(&self, frames: usize) -> Result<PoseSequence> {
        if frames == 0 || frames > self.num_frames() {
            return Err(Error::invalid(format!(
                "cannot truncate pose of {} frames to {frames}",
                self.num_frames()
            )));
        }
        Ok(PoseSequence {
            joints: self.joints.slice(ndarray::s![..frames, .., ..]).to_owned(),
            frame_rate: self.frame_rate,
        })
    }

    /// Flattens each frame to a 30-dimensional feature row.
    pub fn flattened(&self) -> Array2<f64> {
        let t = self.num_frames();
        let flat: Vec<f64> = self.joints.iter().copied().collect();
        Array2::from_shape_vec((t, NUM_JOINTS * NUM_COORDS), flat).expect("shape")
    }
}

/// Frame-rate latent matrix (frames x channels) produced by a gesture
/// encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureEmbedding {
    frames: Array2<f64>,
    frame_rate: f64,
}

impl GestureEmbedding {
    pub fn new(frames: Array2<f64>, frame_rate: f64) -> Result<Self> {
        if frames.nrows() == 0 {
            return Err(Error::invalid("gesture embedding needs at least one frame"));
        }
        if frames.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("gesture embedding must be finite"));
        }
        Ok(GestureEmbedding { frames, frame_rate })
    }

    pub fn frames(&self) -> &Array2<f64> {
        &self.frames
    }

    pub fn num_frames(&self) -> usize {
        self.frames.nrows()
    }

    pub fn channels(&self) -> usize {
        self.frames.ncols()
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }
}

/// Subtracts the spine coordinate from all ten joints, per frame. The output
/// spine is exactly zero.
pub fn spine_center(pose: &PoseSequence) -> Result<PoseSequence> {
    let mut joints = pose.joints.clone();
    for mut frame in joints.axis_iter_mut(Axis(0)) {
        let spine = [
            frame[(SPINE_JOINT, 0)],
            frame[(SPINE_JOINT, 1)],
            frame[(SPINE_JOINT, 2)],
        ];
        for j in 0..NUM_JOINTS {
            for c in 0..NUM_COORDS {
                frame[(j, c)] -= spine[c];
            }
        }
    }
    PoseSequence::new(joints, pose.frame_rate)
}

/// Index map for nearest-predecessor up-sampling: output frame `j` copies
/// input frame `floor(j * t_v / target_len)`.
pub fn upsample_index_map(t_v: usize, target_len: usize) -> Vec<usize> {
    (0..target_len).map(|j| j * t_v / target_len).collect()
}

/// Up-samples a gesture embedding to `target_len` frames by
/// nearest-predecessor frame repetition. Down-sampling is not supported.
pub fn upsample_to(frames: &GestureEmbedding, target_len: usize) -> Result<GestureEmbedding> {
    let t_v = frames.num_frames();
    if target_len < t_v {
        return Err(Error::invalid(format!(
            "upsample_to cannot shrink {t_v} frames to {target_len}"
        )));
    }
    let map = upsample_index_map(t_v, target_len);
    let mut out = Array2::zeros((target_len, frames.channels()));
    for (j, &src) in map.iter().enumerate() {
        out.row_mut(j).assign(&frames.frames.row(src));
    }
    let scale = target_len as f64 / t_v as f64;
    GestureEmbedding::new(out, frames.frame_rate * scale)
}

/// Per-joint normalization statistics (10 x 3 mean and standard deviation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl PoseStats {
    pub fn new(mean: Vec<f64>, std: Vec<f64>) -> Result<Self> {
        let n = NUM_JOINTS * NUM_COORDS;
        if mean.len() != n || std.len() != n {
            return Err(Error::invalid(format!(
                "pose stats must have {n} entries per array"
            )));
        }
        if std.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::invalid("pose stats std entries must be positive"));
        }
        Ok(PoseStats { mean, std })
    }

    /// Identity statistics (mean 0, std 1).
    pub fn identity() -> Self {
        PoseStats {
            mean: vec![0.0; NUM_JOINTS * NUM_COORDS],
            std: vec![1.0; NUM_JOINTS * NUM_COORDS],
        }
    }

    /// Per-joint mean/std over a set of pose sequences. Coordinates with
    /// (near-)zero variance, such as a centered spine, get std 1 so the
    /// normalization leaves them untouched.
    pub fn compute(poses: &[&PoseSequence]) -> Result<Self> {
        if poses.is_empty() {
            return Err(Error::invalid("pose stats need at least one sequence"));
        }
        let n = NUM_JOINTS * NUM_COORDS;
        let mut sum = vec![0.0; n];
        let mut sumsq = vec![0.0; n];
        let mut count = 0usize;
        for p in poses {
            for frame in p.joints.axis_iter(Axis(0)) {
                for (k, x) in frame.iter().enumerate() {
                    sum[k] += x;
                    sumsq[k] += x * x;
                }
                count += 1;
            }
        }
        let mut mean = vec![0.0; n];
        let mut std = vec![0.0; n];
        for k in 0..n {
            mean[k] = sum[k] / count as f64;
            let var = (sumsq[k] / count as f64 - mean[k] * mean[k]).max(0.0);
            let s = var.sqrt();
            std[k] = if s > 1e-9 { s } else { 1.0 };
        }
        PoseStats::new(mean, std)
    }
}

/// Z-score normalization: `(joints - mean) / std` elementwise, per joint
/// coordinate. Invertible given the statistics.
pub fn pose_stats_normalize(pose: &PoseSequence, stats: &PoseStats) -> Result<PoseSequence> {
    if stats.std.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::invalid("pose normalization std must be positive"));
    }
    let mut joints = pose.joints.clone();
    for mut frame in joints.axis_iter_mut(Axis(0)) {
        for j in 0..NUM_JOINTS {
            for c in 0..NUM_COORDS {
                let k = j * NUM_COORDS + c;
                frame[(j, c)] = (frame[(j, c)] - stats.mean[k]) / stats.std[k];
            }
        }
    }
    PoseSequence::new(joints, pose.frame_rate)
}

/// Number of pose frames covered by `num_samples` of audio, head-aligned:
/// `floor(audio_seconds * pose_fps)`. Uses integer arithmetic when the frame
/// rate is integral so boundary cases round exactly.
pub fn aligned_frame_count(num_samples: usize, sample_rate: u32, pose_fps: f64) -> usize {
    if pose_fps.fract() == 0.0 {
        ((num_samples as u128 * pose_fps as u128) / sample_rate as u128) as usize
    } else {
        ((num_samples as f64 / sample_rate as f64) * pose_fps).floor() as usize
    }
}
