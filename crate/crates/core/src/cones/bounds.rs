//! Closed-form upper bounds on the Gaussian squared-complexity of tangent
//! cones, plus the spherical-cap volume and solid-angle estimates they rest
//! on. Range preconditions are enforced strictly: evaluating a bound outside
//! the regime it is proved for is an error, not a clamp.

use crate::error::{Error, Result};

/// Tangent cone of an l1 ball at an s-sparse point on its boundary:
/// `2 s log(p/s) + (5/4) s`.
pub fn l1_tangent_bound(s: usize, p: usize) -> Result<f64> {
    if s == 0 || p == 0 || s > p {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= p, got s={s}, p={p}"
        )));
    }
    let (s, p) = (s as f64, p as f64);
    Ok(2.0 * s * (p / s).ln() + 1.25 * s)
}

/// Tangent cone of a nuclear-norm ball at a rank-r matrix on its boundary:
/// `3 r (m1 + m2 - r)`.
pub fn nuclear_tangent_bound(r: usize, m1: usize, m2: usize) -> Result<f64> {
    if r == 0 || r > m1.min(m2) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r <= min(m1, m2), got r={r}, m1={m1}, m2={m2}"
        )));
    }
    Ok(3.0 * r as f64 * (m1 + m2 - r) as f64)
}

/// Complexity of a cone whose polar has normalized spherical volume `mu`:
/// `20 log(1/(4 mu))`, valid for p >= 12 and
/// `mu in (exp(-p/20)/4, 1/(4 e^2))`.
pub fn volume_complexity_bound(mu: f64, p: usize) -> Result<f64> {
    check_volume_range(mu, p)?;
    Ok(20.0 * (1.0 / (4.0 * mu)).ln())
}

/// Complexity of the tangent cone at any vertex of a vertex-transitive
/// polytope with `v` vertices: `20 log(v/4)`, valid for
/// `4 e^2 <= v <= 4 exp(p/20)`.
pub fn vertex_transitive_bound(v: u64, p: usize) -> Result<f64> {
    let vf = v as f64;
    let lo = 4.0 * std::f64::consts::E.powi(2);
    let hi = 4.0 * (p as f64 / 20.0).exp();
    if !(vf >= lo && vf <= hi) {
        return Err(Error::BoundInapplicable(format!(
            "vertex count {v} outside [4e^2, 4 exp(p/20)] = [{lo:.4}, {hi:.4}] at p={p}"
        )));
    }
    if p < 12 {
        return Err(Error::BoundInapplicable(format!(
            "dimension p={p} below 12"
        )));
    }
    Ok(20.0 * (vf / 4.0).ln())
}

/// Lower and upper bounds on the normalized volume of a spherical cap of
/// height `h` in S^{p-1}: `(1-h^2)^{(p-1)/2} / (c h sqrt(p))` with c = 10
/// and c = 2. Valid for `2/sqrt(p) <= h <= 1`.
pub fn cap_volume_bounds(p: usize, h: f64) -> Result<(f64, f64)> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    let sqrt_p = (p as f64).sqrt();
    if !(h >= 2.0 / sqrt_p && h <= 1.0) {
        return Err(Error::BoundInapplicable(format!(
            "cap height {h} outside [2/sqrt(p), 1] = [{:.6}, 1] at p={p}",
            2.0 / sqrt_p
        )));
    }
    let core = (1.0 - h * h).powf((p as f64 - 1.0) / 2.0);
    Ok((core / (10.0 * h * sqrt_p), core / (2.0 * h * sqrt_p)))
}

/// Lower bound on the solid angle subtended by a spherical cap of normalized
/// volume `mu`: `(pi/2) (1 - sqrt(2 log(1/(4 mu)) / (p-1)))`, on the same
/// `mu` range as [`volume_complexity_bound`].
pub fn cap_solid_angle_lower_bound(mu: f64, p: usize) -> Result<f64> {
    check_volume_range(mu, p)?;
    Ok(cap_solid_angle_formula(mu, p))
}

/// The raw solid-angle expression without range checks; exposed so boundary
/// values can be inspected.
pub fn cap_solid_angle_formula(mu: f64, p: usize) -> f64 {
    let log_term = (1.0 / (4.0 * mu)).ln();
    std::f64::consts::FRAC_PI_2 * (1.0 - (2.0 * log_term / (p as f64 - 1.0)).sqrt())
}

fn check_volume_range(mu: f64, p: usize) -> Result<()> {
    if p < 12 {
        return Err(Error::BoundInapplicable(format!(
            "dimension p={p} below 12"
        )));
    }
    let lo = 0.25 * (-(p as f64) / 20.0).exp();
    let hi = 0.25 * (-2.0f64).exp();
    // The upper endpoint is admissible: the cap-height condition
    // 2/sqrt(p) <= sqrt(2 log(1/(4 mu))/(p-1)) still holds there.
    if !(mu > lo && mu <= hi) {
        return Err(Error::BoundInapplicable(format!(
            "volume {mu} outside (exp(-p/20)/4, 1/(4e^2)] = ({lo:.6e}, {hi:.6e}] at p={p}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_bound_values() {
        // 2*4*ln(25) + 5
        let b = l1_tangent_bound(4, 100).unwrap();
        assert!((b - 30.751006598945606).abs() < 1e-12, "{b}");
        // log term vanishes at s = p
        let b = l1_tangent_bound(64, 64).unwrap();
        assert!((b - 80.0).abs() < 1e-12);
        // 2*10*ln(100) + 12.5
        let b = l1_tangent_bound(10, 1000).unwrap();
        assert!((b - 104.60340371976183).abs() < 1e-10, "{b}");
        assert!(l1_tangent_bound(5, 4).is_err());
    }

    #[test]
    fn nuclear_bound_values() {
        assert_eq!(nuclear_tangent_bound(1, 10, 10).unwrap(), 57.0);
        assert_eq!(nuclear_tangent_bound(4, 4, 4).unwrap(), 48.0); // 3 m^2
        assert_eq!(nuclear_tangent_bound(2, 16, 16).unwrap(), 180.0);
        assert!(nuclear_tangent_bound(5, 4, 7).is_err());
    }

    #[test]
    fn volume_bound_values() {
        // mu = 1/(4 e^4): log(1/(4 mu)) = 4
        let b = volume_complexity_bound(0.25 * (-4.0f64).exp(), 100).unwrap();
        assert!((b - 80.0).abs() < 1e-10);
        let b = volume_complexity_bound(1.0 / 200.0, 100).unwrap();
        assert!((b - 20.0 * 50.0f64.ln()).abs() < 1e-10);
        assert!(matches!(
            volume_complexity_bound(0.2, 100),
            Err(Error::BoundInapplicable(_))
        ));
        assert!(volume_complexity_bound(1.0 / 200.0, 11).is_err());
    }

    #[test]
    fn vertex_transitive_values() {
        let b = vertex_transitive_bound(200, 100).unwrap();
        assert!((b - 78.24046010856292).abs() < 1e-10, "{b}");
        // 2^(sqrt(p)-1) vertices at p = 256
        let b = vertex_transitive_bound(32768, 256).unwrap();
        assert!((b - 20.0 * 8192.0f64.ln()).abs() < 1e-10);
        assert!(matches!(
            vertex_transitive_bound(10, 100),
            Err(Error::BoundInapplicable(_))
        ));
    }

    #[test]
    fn cap_volume_values() {
        let (lo, hi) = cap_volume_bounds(25, 0.4).unwrap();
        assert!((hi / lo - 5.0).abs() < 1e-12);
        let expect = 0.84f64.powi(12) / 20.0;
        assert!((lo - expect).abs() < 1e-12, "{lo} vs {expect}");
        assert!(cap_volume_bounds(25, 0.1).is_err());
    }

    #[test]
    fn cap_angle_values() {
        let mu = 0.25 * (-2.0f64).exp() * (1.0 - 1e-12);
        let angle = cap_solid_angle_lower_bound(mu, 201).unwrap();
        let expect = std::f64::consts::FRAC_PI_2 * (1.0 - 0.02f64.sqrt());
        assert!((angle - expect).abs() < 1e-6, "{angle} vs {expect}");
        // Boundary mu = 1/4 zeroes the log term (formula check only).
        let at_quarter = cap_solid_angle_formula(0.25, 50);
        assert!((at_quarter - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // Valid volumes are below 1/4, so the angle stays under pi/2.
        for &mu in &[0.01, 0.02, 0.03] {
            let a = cap_solid_angle_lower_bound(mu, 201).unwrap();
            assert!(a < std::f64::consts::FRAC_PI_2);
        }
        assert!(cap_solid_angle_lower_bound(0.3, 201).is_err());
    }
}
