//! Reference maps used throughout the tests, the book and the CLI.

use num_complex::Complex64;

use super::descriptor::MapDescriptor;
use super::one_dim::OneDimMap;

/// `(2z + w², w)`: hyperbolic, Denjoy-Wolff point at infinity, a curve of
/// boundary repelling fixed points `{(r², ir)}` with multiplier 2.
pub fn quadpol() -> MapDescriptor {
    MapDescriptor::quadratic(2.0, 1.0, 1.0)
}

/// `(z/2 + w²/4, w/2)`: Denjoy-Wolff point at the origin with multiplier 1/2.
pub fn quadratic_attracting() -> MapDescriptor {
    MapDescriptor::quadratic(0.5, 0.25, 0.5)
}

/// Lift of `φ(u) = 2u`, i.e. `(2z − w², w)`.
pub fn lifted_2z() -> MapDescriptor {
    MapDescriptor::Lifted {
        phi: OneDimMap::HalfPlaneLinear { c: 2.0 },
    }
}

/// `(2z, w)`.
pub fn diagonal_2_1() -> MapDescriptor {
    MapDescriptor::DiagonalLinear {
        alpha: 2.0,
        lambda: vec![Complex64::new(1.0, 0.0)],
    }
}

/// `(2z, √2 e^{iθ} w)`, which coincides with its own linear model.
pub fn diagonal_expandable(theta: f64) -> MapDescriptor {
    MapDescriptor::DiagonalLinear {
        alpha: 2.0,
        lambda: vec![Complex64::from_polar(2f64.sqrt(), theta)],
    }
}

/// `(b(Z_1), Z_2/2)` on `B^2` with `b(z) = z(z + 1/2)/(1 + z/2)`: elliptic,
/// fixes the centre, boundary repelling fixed point `(1, 0)` with multiplier
/// `b'(1) = 4/3`.
pub fn blaschke_product() -> MapDescriptor {
    MapDescriptor::BallProduct {
        components: vec![
            OneDimMap::BlaschkeDeg2 { a: 0.5 },
            OneDimMap::DiskScale {
                lambda: Complex64::new(0.5, 0.0),
            },
        ],
    }
}

/// `Z ↦ Z/2` on `B^2`.
pub fn half_scale_ball() -> MapDescriptor {
    let half = OneDimMap::DiskScale {
        lambda: Complex64::new(0.5, 0.0),
    };
    MapDescriptor::BallProduct {
        components: vec![half.clone(), half],
    }
}

/// A diagonal unitary rotation of `B^2`; an automorphism, so not elliptic in
/// the strict sense.
pub fn rotation_ball(theta1: f64, theta2: f64) -> MapDescriptor {
    MapDescriptor::BallProduct {
        components: vec![
            OneDimMap::DiskScale {
                lambda: Complex64::from_polar(1.0, theta1),
            },
            OneDimMap::DiskScale {
                lambda: Complex64::from_polar(1.0, theta2),
            },
        ],
    }
}
