//! Cauchy principal values of `PV int_0^U f(w) / (w^2 - p^2) dw`.
//!
//! The pole is removed by subtracting `f(p) / (w^2 - p^2)`, whose principal
//! value is `ln|(U - p)/(U + p)| / (2p)` (zero for `U = inf`), and the regular
//! remainder is integrated with a breakpoint at the pole.

use super::quadrature::{Integrator, QuadratureSpec};
use super::NumericsError;

/// `PV int_0^inf f(w) / (w^2 - pole^2) dw`.
pub fn integrate_pv<F>(f: F, pole: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    let integ = Integrator::new(*spec).scale(pole.abs().max(1e-300)).max_initial_width(0.25);
    integrate_pv_with(f, pole, f64::INFINITY, &integ)
}

/// Same as [`integrate_pv`] on `[0, upper]` with a caller-configured integrator
/// (breakpoints, scale).
pub fn integrate_pv_with<F>(f: F, pole: f64, upper: f64, integ: &Integrator) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    integrate_pv_range(f, pole, 0.0, upper, integ)
}

/// `PV int_lower^upper f(w) / (w^2 - pole^2) dw` with `0 <= lower < pole < upper`.
pub fn integrate_pv_range<F>(f: F, pole: f64, lower: f64, upper: f64, integ: &Integrator) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(pole > 0.0) || !(pole > lower) || !(pole < upper) || lower < 0.0 {
        return Err(NumericsError::Domain(format!(
            "pole {pole} outside ({lower}, {upper})"
        )));
    }
    let fp = f(pole);
    let h = 1e-5 * pole;
    let slope = (f(pole + h) - f(pole - h)) / (2.0 * h) / (2.0 * pole);
    let near = 1e-7 * pole;
    let g = |w: f64| {
        let d = w - pole;
        if d.abs() < near {
            slope
        } else {
            (f(w) - fp) / (d * (w + pole))
        }
    };
    let regular = integ.clone().breakpoints([pole]).integrate(g, lower, upper)?;
    // antiderivative of 1/(w^2 - p^2) is ln|(w - p)/(w + p)| / 2p
    let prim = |w: f64| {
        if w.is_infinite() {
            0.0
        } else {
            ((w - pole) / (w + pole)).abs().ln() / (2.0 * pole)
        }
    };
    Ok(regular + fp * (prim(upper) - prim(lower)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_numerator_vanishes() {
        let v = integrate_pv(|_| 1.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn removable_pole_matches_plain() {
        let spec = QuadratureSpec::default();
        // (w^2 - 4) e^{-w} / (w^2 - 4) = e^{-w}
        let v = integrate_pv(|w| (w * w - 4.0) * (-w).exp(), 2.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn finite_upper_limit() {
        // PV int_0^3 w^2/(w^2-1) = 3 + PV int_0^3 1/(w^2-1) = 3 + ln(1/2)/2
        let integ = Integrator::new(QuadratureSpec::default());
        let v = integrate_pv_with(|w| w * w, 1.0, 3.0, &integ).unwrap();
        assert!((v - (3.0 + 0.5f64.ln() / 2.0)).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        let s = QuadratureSpec::default();
        assert!(matches!(integrate_pv(|_| 1.0, 0.0, &s), Err(NumericsError::Domain(_))));
        let integ = Integrator::new(s);
        assert!(integrate_pv_with(|_| 1.0, 2.0, 1.0, &integ).is_err());
    }
}
