//! Closed-form reference solutions used to validate the finite element
//! results. Nothing here touches the element code.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};

/// Navier double sine series for a simply supported `a x b` rectangle under
/// uniform `q`, evaluated at `(x, y)` with `terms` odd harmonics per direction.
pub fn navier_rectangle(a: f64, b: f64, q: f64, d: f64, x: f64, y: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..terms {
        let m = (2 * i + 1) as f64;
        let sx = (m * PI * x / a).sin();
        for j in 0..terms {
            let n = (2 * j + 1) as f64;
            let sy = (n * PI * y / b).sin();
            let k = (m / a).powi(2) + (n / b).powi(2);
            sum += sx * sy / (m * n * k * k);
        }
    }
    16.0 * q / (PI.powi(6) * d) * sum
}

/// Center deflection of a simply supported `L x L` square under uniform `q`.
pub fn navier_series_deflection(side: f64, q: f64, d: f64, terms: usize) -> f64 {
    // sin(m pi / 2) sin(n pi / 2) = (-1)^(i + j) for m = 2i + 1, n = 2j + 1
    let mut sum = 0.0;
    for i in 0..terms {
        let m = (2 * i + 1) as f64;
        for j in 0..terms {
            let n = (2 * j + 1) as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let k = m * m + n * n;
            sum += sign / (m * n * k * k);
        }
    }
    16.0 * q * side.powi(4) / (PI.powi(6) * d) * sum
}

/// Axisymmetric annular plate, outer edge `r = a` clamped, inner edge
/// `r = b` free, uniform `q`:
/// `w = c0 + c1 r² + c2 ln r + c3 r² ln r + q r⁴ / (64 D)`.
#[derive(Debug, Clone, Copy)]
pub struct AnnularPlate {
    coeffs: [f64; 4],
    q_over_d: f64,
}

impl AnnularPlate {
    pub fn clamped_outer_free_inner(a: f64, b: f64, q: f64, d: f64, mu: f64) -> Self {
        assert!(0.0 < b && b < a, "need 0 < b < a");
        let qd = q / d;
        let (ln_a, ln_b) = (a.ln(), b.ln());
        #[rustfmt::skip]
        let m = Matrix4::new(
            // w(a) = 0
            1.0, a * a, ln_a, a * a * ln_a,
            // w'(a) = 0
            0.0, 2.0 * a, 1.0 / a, 2.0 * a * ln_a + a,
            // M_r(b) = 0: w'' + mu w' / r
            0.0, 2.0 * (1.0 + mu), (mu - 1.0) / (b * b), 2.0 * ln_b + 3.0 + mu * (2.0 * ln_b + 1.0),
            // Q_r(b) = 0: d/dr (w'' + w' / r)
            0.0, 0.0, 0.0, 4.0 / b,
        );
        let rhs = Vector4::new(
            -qd * a.powi(4) / 64.0,
            -qd * a.powi(3) / 16.0,
            -qd * (3.0 + mu) * b * b / 16.0,
            -qd * b / 2.0,
        );
        let c = m.lu().solve(&rhs).expect("annular plate system is regular for b < a");
        Self {
            coeffs: [c[0], c[1], c[2], c[3]],
            q_over_d: qd,
        }
    }

    pub fn deflection(&self, r: f64) -> f64 {
        let [c0, c1, c2, c3] = self.coeffs;
        let ln = r.ln();
        c0 + c1 * r * r + c2 * ln + c3 * r * r * ln + self.q_over_d * r.powi(4) / 64.0
    }
}

/// Inner-edge coefficient `w(b) E t³ / (q a⁴)` for radius ratio `b / a`.
pub fn annular_inner_edge_coefficient(ratio: f64, mu: f64) -> f64 {
    let d = 1.0 / (12.0 * (1.0 - mu * mu));
    AnnularPlate::clamped_outer_free_inner(1.0, ratio, 1.0, d, mu).deflection(ratio)
}
