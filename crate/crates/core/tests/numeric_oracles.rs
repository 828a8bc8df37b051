//! Independent oracles for the numeric kernel: a brute-force Riemann sum for
//! the quadrature, exact integer arithmetic for the compensated sum, and
//! distributional checks for the RNG.

use std::f64::consts::PI;

use num_complex::Complex64;
use phase_ensemble::ensemble::ks_statistic_uniform;
use phase_ensemble::numeric::{
    compensated_sum, hermitian_eigendecompose, quadrature_sinc, sinc, sinc_kappa, ComplexMatrix,
    RngStream,
};
use phase_ensemble::testkit::random_hermitian;

/// Midpoint Riemann sum of sin(t)/t with 10^7 panels: the independent,
/// deliberately dumb oracle for the adaptive quadrature.
fn riemann_sinc_integral(upper: f64) -> f64 {
    let panels = 10_000_000usize;
    let h = upper / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let t = (i as f64 + 0.5) * h;
        acc += sinc(t);
    }
    acc * h
}

#[test]
fn quadrature_agrees_with_riemann_oracle() {
    let oracle = riemann_sinc_integral(PI);
    let adaptive = quadrature_sinc(PI, 1e-12).unwrap();
    assert!(
        (adaptive - oracle).abs() <= 1e-8,
        "adaptive {adaptive} vs oracle {oracle}"
    );
    // Frozen from the oracle: Si(pi) = 1.8519370519824661..., kappa = Si(pi)/pi.
    assert!((adaptive - 1.851_937_051_982_466_2).abs() <= 1e-10);
    assert!((sinc_kappa() - 0.589_489_872_236_083_6).abs() <= 1e-10);
    let kappa_from_oracle = oracle / PI;
    assert!((sinc_kappa() - kappa_from_oracle).abs() <= 1e-8);
}

#[test]
fn quadrature_handles_partial_intervals() {
    for upper in [0.25, 1.0, 2.0, 3.0] {
        let oracle = riemann_sinc_integral(upper);
        let adaptive = quadrature_sinc(upper, 1e-12).unwrap();
        assert!(
            (adaptive - oracle).abs() <= 1e-8,
            "upper {upper}: {adaptive} vs {oracle}"
        );
    }
}

#[test]
fn eigendecomposition_round_trip_on_random_matrices() {
    let mut rng = RngStream::new(0xe16e, 0);
    for &dim in &[2usize, 3, 5, 8, 16, 33, 64] {
        let a = random_hermitian(&mut rng, dim);
        let norm = a.frobenius_norm();
        let eig = hermitian_eigendecompose(&a, 1e-10).unwrap();

        assert!(eig.vectors.unitarity_residual() <= 1e-10, "dim {dim}");
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));

        // Per-column eigen residual: |A v - lambda v| <= 10 * tol * |A|_F.
        for k in 0..dim {
            let v = eig.vectors.column(k);
            let av = a.mul_vec(&v).unwrap();
            let residual: f64 = av
                .iter()
                .zip(v.iter())
                .map(|(x, y)| (x - y * eig.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(
                residual <= 10.0 * 1e-10 * norm,
                "dim {dim} col {k}: residual {residual:.3e}"
            );
        }

        // Reconstruction: |V diag(l) V^H - A|_F <= 1e-9 |A|_F.
        let mut recon = ComplexMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += eig.vectors.get(r, k) * eig.values[k] * eig.vectors.get(c, k).conj();
                }
                recon.set(r, c, acc);
            }
        }
        let err = recon.frobenius_distance(&a);
        assert!(err <= 1e-9 * norm, "dim {dim}: reconstruction {err:.3e}");
    }
}

#[test]
fn compensated_sum_matches_exact_integer_oracle() {
    // Large cancelling integers, all exactly representable: i128 is exact.
    let mut rng = RngStream::new(77, 0);
    for round in 0..50 {
        let ints: Vec<i64> = (0..200)
            .map(|_| {
                let magnitude = (rng.next_u64() % 50) as u32;
                let v = (rng.next_u64() % 1000) as i64;
                let signed = if rng.next_u64() % 2 == 0 { v } else { -v };
                signed << magnitude.min(40)
            })
            .collect();
        let exact: i128 = ints.iter().map(|&x| x as i128).sum();
        let values: Vec<Complex64> = ints
            .iter()
            .map(|&x| Complex64::new(x as f64, 0.0))
            .collect();
        let got = compensated_sum(&values).re;
        assert_eq!(got, exact as f64, "round {round}");
    }
}

#[test]
fn rng_streams_pass_uniformity_ks() {
    for stream_id in [0u64, 1, 17, 1 << 40] {
        let mut rng = RngStream::new(0xdead_beef, stream_id);
        let draws: Vec<f64> = (0..10_000).map(|_| rng.next_unit()).collect();
        let d = ks_statistic_uniform(&draws, 0.0, 1.0);
        assert!(d <= 0.02, "stream {stream_id}: KS {d}");
    }
}

#[test]
fn rng_counter_access_is_random_access() {
    let base = RngStream::new(5, 3);
    let mut seq = RngStream::new(5, 3);
    let walked: Vec<u64> = (0..100).map(|_| seq.next_u64()).collect();
    for (i, &expected) in walked.iter().enumerate() {
        assert_eq!(base.at(i as u64), expected);
    }
}
