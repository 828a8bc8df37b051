//! Radix-2 FFT with unitary normalization.
//!
//! Iterative Cooley–Tukey with precomputed twiddle factors and a fixed
//! butterfly order, so repeated transforms of the same data are bit-identical.
//! Both directions scale by 1/sqrt(N), making the pair exactly inverse up to
//! round-off and norm-preserving on its own.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Transform direction; the forward kernel is `exp(-2*pi*i*jk/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FftDirection {
    Forward,
    Inverse,
}

fn is_supported_size(n: usize) -> bool {
    n.is_power_of_two() && (8..=4096).contains(&n)
}

/// Unitary radix-2 FFT of `values`; the length must be a power of two in
/// `[8, 4096]`.
pub fn fft(values: &[Complex64], direction: FftDirection) -> Result<Vec<Complex64>> {
    if !is_supported_size(values.len()) {
        return Err(Error::BadLatticeSize {
            n_sites: values.len(),
        });
    }
    let mut data = values.to_vec();
    fft_in_place(&mut data, direction);
    Ok(data)
}

fn fft_in_place(data: &mut [Complex64], direction: FftDirection) {
    let n = data.len();
    let sign = match direction {
        FftDirection::Forward => -1.0,
        FftDirection::Inverse => 1.0,
    };

    // Bit-reversal permutation.
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = (i.reverse_bits() >> (usize::BITS - bits)) as usize;
        if j > i {
            data.swap(i, j);
        }
    }

    // Twiddles for the largest stage; smaller stages stride through them.
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| Complex64::from_polar(1.0, sign * TAU * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }

    let scale = 1.0 / (n as f64).sqrt();
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// Direct O(N^2) DFT with the same unitary convention; the oracle the FFT is
/// checked against, and the baseline for the benchmark report.
pub fn naive_dft(values: &[Complex64], direction: FftDirection) -> Result<Vec<Complex64>> {
    if !is_supported_size(values.len()) {
        return Err(Error::BadLatticeSize {
            n_sites: values.len(),
        });
    }
    let n = values.len();
    let sign = match direction {
        FftDirection::Forward => -1.0,
        FftDirection::Inverse => 1.0,
    };
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let angle = sign * TAU * ((j * k) % n) as f64 / n as f64;
            acc += v * Complex64::from_polar(1.0, angle);
        }
        *slot = acc * scale;
    }
    Ok(out)
}

/// One row of the FFT benchmark report.
#[derive(Debug, Clone)]
pub struct FftBenchRow {
    pub size: usize,
    pub ns_per_fft: f64,
    pub ns_per_naive: f64,
}

/// Times the FFT against the naive DFT at the given sizes.
pub fn fft_benchmark(sizes: &[usize], reps: usize) -> Result<Vec<FftBenchRow>> {
    use std::time::Instant;
    let reps = reps.max(1);
    sizes
        .iter()
        .map(|&size| {
            let mut rng = crate::numeric::RngStream::new(0xff7, size as u64);
            let values: Vec<Complex64> = (0..size)
                .map(|_| Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5))
                .collect();

            let start = Instant::now();
            let mut sink = Complex64::new(0.0, 0.0);
            for _ in 0..reps {
                sink += fft(&values, FftDirection::Forward)?[0];
            }
            let ns_per_fft = start.elapsed().as_nanos() as f64 / reps as f64;

            let start = Instant::now();
            for _ in 0..reps {
                sink += naive_dft(&values, FftDirection::Forward)?[0];
            }
            let ns_per_naive = start.elapsed().as_nanos() as f64 / reps as f64;
            std::hint::black_box(sink);

            Ok(FftBenchRow {
                size,
                ns_per_fft,
                ns_per_naive,
            })
        })
        .collect()
}
