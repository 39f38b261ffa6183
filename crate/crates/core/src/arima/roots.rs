//! Smallest root modulus of lag polynomials, used by the stationarity and
//! invertibility penalty.

use num_complex::Complex64;

/// Minimum modulus over the roots of `1 + c[0] z + c[1] z² + …`.
///
/// Returns `f64::INFINITY` when the polynomial is constant.
pub fn min_root_modulus(coeffs: &[f64]) -> f64 {
    let degree = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(i) => i + 1,
        None => return f64::INFINITY,
    };
    if coeffs[..degree].iter().any(|c| !c.is_finite()) {
        return 0.0;
    }
    match degree {
        1 => 1.0 / coeffs[0].abs(),
        2 => {
            // c1 z² + c0 z + 1
            let (a, b) = (coeffs[1], coeffs[0]);
            let disc = Complex64::new(b * b - 4.0 * a, 0.0).sqrt();
            let r1 = (-b + disc) / (2.0 * a);
            let r2 = (-b - disc) / (2.0 * a);
            r1.norm().min(r2.norm())
        }
        _ => durand_kerner(&coeffs[..degree])
            .into_iter()
            .map(|r| r.norm())
            .fold(f64::INFINITY, f64::min),
    }
}

// Simultaneous root iteration on the monic form of 1 + Σ c_i z^i.
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let lead = coeffs[n - 1];
    // monic coefficients, constant term first: [1/lead, c0/lead, ..., 1]
    let mut monic: Vec<f64> = Vec::with_capacity(n + 1);
    monic.push(1.0 / lead);
    monic.extend(coeffs[..n - 1].iter().map(|c| c / lead));
    monic.push(1.0);
    let eval = |z: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * radius.min(2.0))
        .collect();
    for _ in 0..1000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}
