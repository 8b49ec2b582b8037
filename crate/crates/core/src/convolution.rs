//! Linear convolution: an exact direct path, a real-FFT path for long
//! operands, "same"-mode alignment and the first-difference post-step.

use std::collections::HashMap;
use std::sync::Arc;

use realfft::num_complex::Complex;
use realfft::{RealFftPlanner, RealToComplex};

use crate::error::{Error, Result};

/// Multiply-add count above which `convolve_same` switches to the FFT path.
pub const DEFAULT_FFT_THRESHOLD: usize = 1 << 18;

fn check_operands(signal: &[f64], kernel: &[f64]) -> Result<()> {
    if signal.is_empty() || kernel.is_empty() {
        Err(Error::EmptyOperand)
    } else {
        Ok(())
    }
}

/// Full linear convolution by direct summation; output length `n + m - 1`.
pub fn convolve_direct(signal: &[f64], kernel: &[f64]) -> Result<Vec<f64>> {
    check_operands(signal, kernel)?;
    let mut out = vec![0.0; signal.len() + kernel.len() - 1];
    for (i, &x) in signal.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &k) in out[i..].iter_mut().zip(kernel) {
            *o += x * k;
        }
    }
    Ok(out)
}

/// Full linear convolution through real FFTs. Same contract as
/// [`convolve_direct`].
pub fn convolve_fft(signal: &[f64], kernel: &[f64]) -> Result<Vec<f64>> {
    check_operands(signal, kernel)?;
    let mut conv = SpectralConvolver::new(signal);
    Ok(conv.full(kernel))
}

/// Central `signal.len()` samples of the full convolution, zero padded at
/// the edges. Uses the FFT path above [`DEFAULT_FFT_THRESHOLD`].
pub fn convolve_same(signal: &[f64], kernel: &[f64]) -> Result<Vec<f64>> {
    convolve_same_with_threshold(signal, kernel, DEFAULT_FFT_THRESHOLD)
}

pub fn convolve_same_with_threshold(
    signal: &[f64],
    kernel: &[f64],
    fft_threshold: usize,
) -> Result<Vec<f64>> {
    check_same(signal, kernel)?;
    let full = if signal.len().saturating_mul(kernel.len()) > fft_threshold {
        convolve_fft(signal, kernel)?
    } else {
        convolve_direct(signal, kernel)?
    };
    Ok(central(full, signal.len(), kernel.len()))
}

fn check_same(signal: &[f64], kernel: &[f64]) -> Result<()> {
    check_operands(signal, kernel)?;
    if kernel.len() > signal.len() {
        return Err(Error::KernelLongerThanSignal {
            kernel: kernel.len(),
            signal: signal.len(),
        });
    }
    Ok(())
}

fn central(mut full: Vec<f64>, n: usize, m: usize) -> Vec<f64> {
    let start = (m - 1) / 2;
    full.truncate(start + n);
    full.drain(..start);
    full
}

/// `out[i] = seq[i + 1] - seq[i]`.
pub fn first_difference(seq: &[f64]) -> Result<Vec<f64>> {
    if seq.len() < 2 {
        return Err(Error::SequenceTooShort(seq.len()));
    }
    Ok(seq.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Smallest `2^a * 3^b >= n` with `a >= 1`.
fn fft_len(n: usize) -> usize {
    let mut best = n.next_power_of_two().max(2);
    let mut p3 = 1usize;
    while p3 < best {
        let mut v = p3 * 2;
        while v < n {
            v *= 2;
        }
        best = best.min(v);
        p3 *= 3;
    }
    best
}

/// Convolves one signal against many kernels, reusing the signal's
/// spectrum for every kernel that fits the same transform length.
pub struct SpectralConvolver<'a> {
    signal: &'a [f64],
    planner: RealFftPlanner<f64>,
    spectra: HashMap<usize, Vec<Complex<f64>>>,
}

impl<'a> SpectralConvolver<'a> {
    pub fn new(signal: &'a [f64]) -> Self {
        Self {
            signal,
            planner: RealFftPlanner::new(),
            spectra: HashMap::new(),
        }
    }

    fn forward(fft: &Arc<dyn RealToComplex<f64>>, data: &[f64], len: usize) -> Vec<Complex<f64>> {
        let mut input = vec![0.0; len];
        input[..data.len()].copy_from_slice(data);
        let mut out = fft.make_output_vec();
        fft.process(&mut input, &mut out)
            .expect("buffer sizes come from the plan");
        out
    }

    /// Full linear convolution of the held signal with `kernel`.
    pub fn full(&mut self, kernel: &[f64]) -> Vec<f64> {
        let out_len = self.signal.len() + kernel.len() - 1;
        let len = fft_len(out_len);
        let fwd = self.planner.plan_fft_forward(len);
        let inv = self.planner.plan_fft_inverse(len);
        let signal = self.signal;
        let spectrum = self
            .spectra
            .entry(len)
            .or_insert_with(|| Self::forward(&fwd, signal, len));
        let mut product = Self::forward(&fwd, kernel, len);
        for (p, s) in product.iter_mut().zip(spectrum.iter()) {
            *p *= *s;
        }
        // Real input: DC and Nyquist bins are real up to rounding.
        product[0].im = 0.0;
        if let Some(last) = product.last_mut() {
            last.im = 0.0;
        }
        let mut out = inv.make_output_vec();
        inv.process(&mut product, &mut out)
            .expect("buffer sizes come from the plan");
        let scale = 1.0 / len as f64;
        out.truncate(out_len);
        out.iter_mut().for_each(|v| *v *= scale);
        out
    }

    /// "Same"-mode convolution, choosing the direct path for small work.
    pub fn same(&mut self, kernel: &[f64], fft_threshold: usize) -> Result<Vec<f64>> {
        check_same(self.signal, kernel)?;
        let full = if self.signal.len().saturating_mul(kernel.len()) > fft_threshold {
            self.full(kernel)
        } else {
            convolve_direct(self.signal, kernel)?
        };
        Ok(central(full, self.signal.len(), kernel.len()))
    }
}

/// Per-scale wavelet coefficient differences, one row per scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    rows: Vec<Vec<f64>>,
    scale_labels: Vec<f64>,
}

impl CoefficientMatrix {
    pub fn new(rows: Vec<Vec<f64>>, scale_labels: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if rows.len() != scale_labels.len() {
            return Err(Error::InvalidScaleBank(format!(
                "{} rows but {} scale labels",
                rows.len(),
                scale_labels.len()
            )));
        }
        let len = rows[0].len();
        if len == 0 || rows.iter().any(|r| r.len() != len) {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self { rows, scale_labels })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn scale_labels(&self) -> &[f64] {
        &self.scale_labels
    }

    pub fn row_len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn n_scales(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_small_example() {
        assert_eq!(
            convolve_direct(&[1.0, 2.0, 3.0], &[1.0, 1.0]).unwrap(),
            vec![1.0, 3.0, 5.0, 3.0]
        );
    }

    #[test]
    fn fft_small_example() {
        let out = convolve_fft(&[1.0, 2.0, 3.0], &[1.0, 1.0]).unwrap();
        for (a, b) in out.iter().zip([1.0, 3.0, 5.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_is_identity() {
        let x = [0.3, -0.7, 0.1, 0.9];
        assert_eq!(convolve_direct(&x, &[1.0]).unwrap(), x.to_vec());
        for (a, b) in convolve_fft(&x, &[1.0]).unwrap().iter().zip(x) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(convolve_same(&x, &[1.0]).unwrap(), x.to_vec());
        assert_eq!(convolve_same(&x, &[0.0, 1.0, 0.0]).unwrap(), x.to_vec());
    }

    #[test]
    fn zero_signal() {
        assert!(convolve_direct(&[0.0; 8], &[0.4, -1.0, 2.0])
            .unwrap()
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn empty_operands() {
        assert!(matches!(
            convolve_direct(&[], &[1.0]),
            Err(Error::EmptyOperand)
        ));
        assert!(matches!(
            convolve_fft(&[1.0], &[]),
            Err(Error::EmptyOperand)
        ));
    }

    #[test]
    fn same_shape_and_errors() {
        let x = vec![0.5; 100];
        assert_eq!(convolve_same(&x, &[0.1; 15]).unwrap().len(), 100);
        assert!(matches!(
            convolve_same(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::KernelLongerThanSignal { .. })
        ));
    }

    #[test]
    fn same_matches_numpy_alignment() {
        // numpy.convolve([1,2,3], [1,1], "same") == [1, 3, 5]
        assert_eq!(
            convolve_same(&[1.0, 2.0, 3.0], &[1.0, 1.0]).unwrap(),
            vec![1.0, 3.0, 5.0]
        );
    }

    #[test]
    fn same_paths_agree() {
        let x: Vec<f64> = (0..3000)
            .map(|i| ((i * 37 % 101) as f64 / 50.0) - 1.0)
            .collect();
        let k: Vec<f64> = (0..201)
            .map(|i| ((i * 13 % 17) as f64 / 8.0) - 1.0)
            .collect();
        let a = convolve_same_with_threshold(&x, &k, usize::MAX).unwrap();
        let b = convolve_same_with_threshold(&x, &k, 0).unwrap();
        let max = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() <= 1e-9 * max);
        }
    }

    #[test]
    fn first_difference_examples() {
        assert_eq!(
            first_difference(&[1.0, 4.0, 9.0, 16.0]).unwrap(),
            vec![3.0, 5.0, 7.0]
        );
        assert_eq!(first_difference(&[2.5; 6]).unwrap(), vec![0.0; 5]);
        assert_eq!(first_difference(&[0.0, 1.0]).unwrap(), vec![1.0]);
        assert!(matches!(
            first_difference(&[1.0]),
            Err(Error::SequenceTooShort(1))
        ));
    }

    #[test]
    fn fft_lengths_are_smooth() {
        for n in [1, 2, 3, 5, 17, 1000, 4097, 144_001] {
            let l = fft_len(n);
            assert!(l >= n && l.is_multiple_of(2));
            let mut r = l;
            while r.is_multiple_of(2) {
                r /= 2;
            }
            while r.is_multiple_of(3) {
                r /= 3;
            }
            assert_eq!(r, 1);
        }
        assert_eq!(fft_len(1000), 1024);
        assert_eq!(fft_len(1100), 1152);
    }

    #[test]
    fn matrix_shape_checks() {
        assert!(CoefficientMatrix::new(vec![], vec![]).is_err());
        assert!(CoefficientMatrix::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 2.0]).is_err());
        let m = CoefficientMatrix::new(vec![vec![1.0, 2.0]; 3], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!((m.n_scales(), m.row_len()), (3, 2));
    }
}
