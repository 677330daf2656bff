use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_lambda<R: Real>(lambda: R) -> Result<()> {
    if !(lambda > R::zero()) {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

/// Density of the nearest-BS distance: `2λπ r exp(-λπ r²)`.
pub fn pdf_service_distance_connected<R: Real>(r: R, lambda: R) -> Result<R> {
    check_lambda(lambda)?;
    if !(r >= R::zero()) {
        return Err(Error::invalid("r", format!("must be non-negative, got {r}")));
    }
    let lp = lambda * R::PI();
    Ok(R::lit(2.0) * lp * r * (-lp * r * r).exp())
}

/// Joint density of (serving, skipped) distances `(x, y)` for a user in blackout,
/// where the skipped BS is the nearest: `4(πλ)² x y exp(-πλ x²)` on `0 ≤ y ≤ x`.
pub fn joint_pdf_blackout<R: Real>(x: R, y: R, lambda: R) -> Result<R> {
    check_lambda(lambda)?;
    if !(y >= R::zero()) {
        return Err(Error::invalid("y", format!("must be non-negative, got {y}")));
    }
    if y > x {
        return Err(Error::invalid(
            "y",
            format!("support requires y <= x, got y={y}, x={x}"),
        ));
    }
    let lp = lambda * R::PI();
    Ok(R::lit(4.0) * lp * lp * x * y * (-lp * x * x).exp())
}

/// Marginal density of the serving (second-nearest) distance in blackout:
/// `2(λπ)² r³ exp(-λπ r²)`.
pub fn marginal_pdf_blackout_serving<R: Real>(r: R, lambda: R) -> Result<R> {
    check_lambda(lambda)?;
    if !(r >= R::zero()) {
        return Err(Error::invalid("r", format!("must be non-negative, got {r}")));
    }
    let lp = lambda * R::PI();
    Ok(R::lit(2.0) * lp * lp * r * r * r * (-lp * r * r).exp())
}

/// Density of the skipped-BS distance given the serving distance `r0`: `2r / r0²` on `[0, r0]`.
pub fn conditional_pdf_skipped<R: Real>(r: R, r0: R) -> Result<R> {
    if !(r0 > R::zero()) {
        return Err(Error::invalid("r0", format!("must be positive, got {r0}")));
    }
    if !(r >= R::zero()) || r > r0 {
        return Err(Error::invalid("r", format!("must lie in [0, r0={r0}], got {r}")));
    }
    Ok(R::lit(2.0) * r / (r0 * r0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSettings};
    use std::f64::consts::PI;

    #[test]
    fn connected_density_values() {
        assert_eq!(pdf_service_distance_connected(0.0, 3.0).unwrap(), 0.0);
        let v = pdf_service_distance_connected(1.0, 1.0 / PI).unwrap();
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.735_758_882_342_884_6).abs() < 1e-12);
        assert!(pdf_service_distance_connected(-0.1, 1.0).is_err());
    }

    #[test]
    fn connected_density_normalized() {
        let q = QuadratureSettings::<f64>::default();
        let total = integrate_to_infinity(|r| pdf_service_distance_connected(r, 30.0_f64).unwrap(), 0.0, &q).unwrap();
        assert!((total.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn joint_density_support_and_marginal() {
        assert_eq!(joint_pdf_blackout(0.7, 0.0, 5.0).unwrap(), 0.0);
        assert!(joint_pdf_blackout(0.5, 0.6, 5.0).is_err());
        let q = QuadratureSettings::<f64>::default();
        for &(x, lambda) in &[(0.05, 10.0), (0.2, 10.0), (0.4, 3.0), (1.3, 0.5)] {
            let marginal = integrate(|y| joint_pdf_blackout(x, y, lambda).unwrap(), 0.0, x, &q)
                .unwrap()
                .value;
            let expect = marginal_pdf_blackout_serving(x, lambda).unwrap();
            assert!((marginal - expect).abs() <= 1e-10 * expect.max(1e-300), "{x} {lambda}");
        }
    }

    #[test]
    fn joint_density_normalized() {
        let q = QuadratureSettings::<f64>::default();
        let lambda = 10.0;
        let total = integrate_to_infinity(
            |x| {
                integrate(|y| joint_pdf_blackout(x, y, lambda).unwrap(), 0.0, x, &q)
                    .unwrap()
                    .value
            },
            0.0,
            &q,
        )
        .unwrap();
        assert!((total.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn conditional_density() {
        assert_eq!(conditional_pdf_skipped(3.0, 3.0).unwrap(), 2.0 / 3.0);
        assert_eq!(conditional_pdf_skipped(1.0, 2.0).unwrap(), 0.5);
        assert!(conditional_pdf_skipped(2.5, 2.0).is_err());
        let q = QuadratureSettings::<f64>::default();
        let total = integrate(|r| conditional_pdf_skipped(r, 2.0).unwrap(), 0.0, 2.0, &q).unwrap();
        assert!((total.value - 1.0).abs() < 1e-14);
        // E[r1² | r0 = 2] = r0²/2
        let m2 = integrate(|r| r * r * conditional_pdf_skipped(r, 2.0).unwrap(), 0.0, 2.0, &q).unwrap();
        assert!((m2.value - 2.0).abs() < 1e-13);
    }
}
