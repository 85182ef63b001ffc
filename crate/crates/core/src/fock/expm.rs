//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham 2005).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

const THETA_13: f64 = 5.371_920_351_148_152;
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * C64::new(0.5f64.powi(s), 0.0);

    let b = |i: usize| C64::new(PADE_13[i], 0.0);
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &ident * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &ident * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_gives_identity() {
        let z = DMatrix::<C64>::zeros(4, 4);
        assert!(max_abs(&(expm(&z) - DMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn pauli_rotation() {
        // exp(-iθσx) = cos θ I − i sin θ σx, with a large θ to exercise squaring
        for &theta in &[0.3, 2.0, 17.5] {
            let sx = DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(0.0, 0.0),
                    C64::new(1.0, 0.0),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                ],
            );
            let got = expm(&(&sx * C64::new(0.0, -theta)));
            let want = DMatrix::<C64>::identity(2, 2) * C64::new(theta.cos(), 0.0)
                + &sx * C64::new(0.0, -theta.sin());
            assert!(max_abs(&(got - want)) < 1e-12, "θ = {theta}");
        }
    }

    #[test]
    fn diagonal_matches_scalar_exponentials() {
        let d = [C64::new(0.0, 3.1), C64::new(-1.0, 0.2), C64::new(2.0, -7.0)];
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
        let e = expm(&m);
        for i in 0..3 {
            assert!((e[(i, i)] - d[i].exp()).norm() < 1e-12 * d[i].exp().norm().max(1.0));
        }
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        // exp(N) = I + N + N²/2 for N strictly upper triangular 3×3
        let n = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(3.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let want = DMatrix::<C64>::identity(3, 3) + &n + (&n * &n) * C64::new(0.5, 0.0);
        assert!(max_abs(&(expm(&n) - want)) < 1e-13);
    }
}
