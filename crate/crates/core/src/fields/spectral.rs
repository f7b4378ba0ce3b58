//! FFT plumbing for periodic grids.
//!
//! Forward transforms are unnormalised; every inverse divides by the
//! forward length.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Signed mode number of FFT bin `i` on an `n`-point axis. The Nyquist bin
/// `n/2` is reported as `+n/2`.
pub(crate) fn mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Wavenumber used by the spectral derivative: the Nyquist bin maps to zero.
pub(crate) fn derivative_wavenumber(i: usize, n: usize) -> f64 {
    if 2 * i == n {
        0.0
    } else {
        mode(i, n) as f64
    }
}

/// Applies `op` to every line along `axis` of a row-major array with shape
/// `dims`, producing lines of length `out_len`.
fn map_lines(
    data: &[Complex64],
    dims: [usize; 3],
    axis: usize,
    out_len: usize,
    mut op: impl FnMut(&mut Vec<Complex64>, &mut Vec<Complex64>),
) -> (Vec<Complex64>, [usize; 3]) {
    let mut out_dims = dims;
    out_dims[axis] = out_len;
    let strides = |d: [usize; 3]| [d[1] * d[2], d[2], 1];
    let (s_in, s_out) = (strides(dims), strides(out_dims));
    let others: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
    let (oa, ob) = (others[0], others[1]);

    let mut out = vec![Complex64::new(0.0, 0.0); out_dims.iter().product()];
    let mut line_in = vec![Complex64::new(0.0, 0.0); dims[axis]];
    let mut line_out = vec![Complex64::new(0.0, 0.0); out_len];
    for i in 0..dims[oa] {
        for j in 0..dims[ob] {
            let base_in = i * s_in[oa] + j * s_in[ob];
            for (t, v) in line_in.iter_mut().enumerate() {
                *v = data[base_in + t * s_in[axis]];
            }
            op(&mut line_in, &mut line_out);
            let base_out = i * s_out[oa] + j * s_out[ob];
            for (t, v) in line_out.iter().enumerate() {
                out[base_out + t * s_out[axis]] = *v;
            }
        }
    }
    (out, out_dims)
}

fn to_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Spectral partial derivative along `axis` of real samples on an `n³` grid.
pub(crate) fn partial(values: &[f64], n: usize, axis: usize) -> Vec<f64> {
    let forward = plan(n, false);
    let inverse = plan(n, true);
    let mut scratch = vec![Complex64::new(0.0, 0.0); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];
    let scale = 1.0 / n as f64;
    let (out, _) = map_lines(&to_complex(values), [n, n, n], axis, n, |line, out| {
        forward.process_with_scratch(line, &mut scratch);
        for (i, c) in line.iter_mut().enumerate() {
            let k = derivative_wavenumber(i, n);
            *c = Complex64::new(-k * c.im, k * c.re) * scale;
        }
        inverse.process_with_scratch(line, &mut scratch);
        out.copy_from_slice(line);
    });
    out.into_iter().map(|c| c.re).collect()
}

/// Copies a length-`n` spectrum into a length-`m` one. Growing splits the
/// Nyquist coefficient evenly between `±n/2`; shrinking folds `±m/2` onto
/// the new Nyquist bin.
fn respectrum(src: &[Complex64], dst: &mut [Complex64]) {
    let (n, m) = (src.len(), dst.len());
    dst.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    let keep = n.min(m) / 2;
    dst[0] = src[0];
    for k in 1..keep {
        dst[k] = src[k];
        dst[m - k] = src[n - k];
    }
    if m > n {
        let half = src[n / 2] * 0.5;
        dst[n / 2] = half;
        dst[m - n / 2] = half;
    } else if m < n {
        dst[m / 2] = src[m / 2] + src[n - m / 2];
    } else {
        dst[n / 2] = src[n / 2];
    }
}

/// Trigonometric resampling of real `n³` samples onto an `m³` grid.
pub(crate) fn resample(values: &[f64], n: usize, m: usize) -> Vec<f64> {
    if n == m {
        return values.to_vec();
    }
    let forward = plan(n, false);
    let inverse = plan(m, true);
    let mut scratch_f = vec![Complex64::new(0.0, 0.0); forward.get_inplace_scratch_len()];
    let mut scratch_i = vec![Complex64::new(0.0, 0.0); inverse.get_inplace_scratch_len()];
    let scale = 1.0 / n as f64;
    let mut data = to_complex(values);
    let mut dims = [n, n, n];
    for axis in 0..3 {
        let (next, next_dims) = map_lines(&data, dims, axis, m, |line, out| {
            forward.process_with_scratch(line, &mut scratch_f);
            respectrum(line, out);
            inverse.process_with_scratch(out, &mut scratch_i);
            out.iter_mut().for_each(|c| *c *= scale);
        });
        data = next;
        dims = next_dims;
    }
    data.into_iter().map(|c| c.re).collect()
}

/// Full 3D forward transform of real samples.
pub(crate) fn forward3(values: &[f64], n: usize) -> Vec<Complex64> {
    let fft = plan(n, false);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut data = to_complex(values);
    for axis in 0..3 {
        data = map_lines(&data, [n, n, n], axis, n, |line, out| {
            fft.process_with_scratch(line, &mut scratch);
            out.copy_from_slice(line);
        })
        .0;
    }
    data
}

/// Inverse of [`forward3`], keeping the real part.
pub(crate) fn inverse3(spectrum: &[Complex64], n: usize) -> Vec<f64> {
    let fft = plan(n, true);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut data = spectrum.to_vec();
    for axis in 0..3 {
        data = map_lines(&data, [n, n, n], axis, n, |line, out| {
            fft.process_with_scratch(line, &mut scratch);
            out.copy_from_slice(line);
        })
        .0;
    }
    let scale = 1.0 / (n * n * n) as f64;
    data.into_iter().map(|c| c.re * scale).collect()
}
