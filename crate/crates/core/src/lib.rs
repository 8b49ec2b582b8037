//! Speech endpoint detection by multi-scale wavelet convolution and
//! frame-wise entropy thresholding.
//!
//! ```no_run
//! use wcsed::{load_wav, Detector, DetectorConfig, extract_segment};
//!
//! let signal = load_wav("utterance.wav")?;
//! let detector = Detector::new(DetectorConfig::default())?;
//! let detection = detector.detect(&signal)?;
//! let speech = extract_segment(&signal, &detection.endpoints)?;
//! # Ok::<(), wcsed::Error>(())
//! ```

pub mod convolution;
pub mod detect;
pub mod entropy;
pub mod error;
pub mod eval;
pub mod signal;
pub mod synth;
pub mod wavelet;

pub use convolution::{
    convolve_direct, convolve_fft, convolve_same, first_difference, CoefficientMatrix,
};
pub use detect::{
    combine_coefficients, compute_thresholds, detect_core_region, detect_endpoints,
    extract_segment, include_edges, otsu_threshold, wave_conv, Combination, Detection, Detector,
    DetectorConfig, Direction, EndpointResult, EntropyRoute, FrameRange, ThresholdPair,
};
pub use entropy::{
    entropy_vector, frame_entropy, frame_indices, histogram_probabilities, Binning, EntropyVector,
    FrameSpec,
};
pub use error::{Error, Result};
pub use eval::{
    aggregate_report, frame_deviation, DeviationReport, GroundTruthLabel, LabelRecord,
    LabeledDetection,
};
pub use signal::{load_wav, rms, save_wav, to_mono, SignalBuffer};
pub use synth::{random_corpus, synthesize_test_signal, CorpusItemSpec, CorpusSpec};
pub use wavelet::{
    default_scale_bank, kernel_at_scale, sample_mother_wavelet, MotherWavelet, ScaleBank,
    WaveletKernel,
};
