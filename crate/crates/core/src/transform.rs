//! Blow-up map `F_ρ` and the push-forward of `(A, q) = (1/μ, ε)`.
//!
//! `F_ρ` is radial with profile
//!
//! ```text
//! f(r) = r / ρ                                  r ≤ ρ
//!        1/2 + r / (2ρ)                         ρ ≤ r ≤ 2ρ
//!        (3 - 4ρ) / (2(1 - ρ)) + r / (4(1 - ρ)) 2ρ ≤ r ≤ 2
//!        r                                      r ≥ 2
//! ```
//!
//! so it sends the `ρ`-disk onto the unit disk, `[ρ, 2ρ]` onto `[1, 3/2]`,
//! `[2ρ, 2]` onto `[3/2, 2]`, and is the identity outside radius 2. A
//! structure scaled by `ρ` and pushed forward by `F_ρ` has its core back at
//! radius 1. At breakpoints the outer branch is used for derivatives.

use crate::error::{Error, Result};
use crate::layered::LayeredStructure;
use crate::scalar::Real;

pub type Mat2<T> = [[T; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMap<T> {
    rho: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Inner,
    Shell,
    Outer,
    Identity,
}

impl<T: Real> RadialMap<T> {
    pub fn new(rho: T) -> Result<Self> {
        if !(rho > T::zero() && rho <= T::lit(0.5)) {
            return Err(Error::InvalidArgument(format!("rho must lie in (0, 1/2], got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    /// `(ρ, 2ρ, 2)`.
    pub fn breakpoints(&self) -> [T; 3] {
        [self.rho, self.rho + self.rho, T::lit(2.0)]
    }

    fn branch(&self, r: T) -> Branch {
        let [a, b, c] = self.breakpoints();
        if r >= c {
            Branch::Identity
        } else if r >= b {
            Branch::Outer
        } else if r >= a {
            Branch::Shell
        } else {
            Branch::Inner
        }
    }

    fn outer_intercept(&self) -> T {
        let one = T::one();
        (T::lit(3.0) - T::lit(4.0) * self.rho) / (T::lit(2.0) * (one - self.rho))
    }

    /// Radial profile `f(r)`.
    pub fn profile(&self, r: T) -> T {
        let rho = self.rho;
        match self.branch(r) {
            Branch::Inner => r / rho,
            Branch::Shell => T::lit(0.5) + r / (rho + rho),
            Branch::Outer => self.outer_intercept() + r / (T::lit(4.0) * (T::one() - rho)),
            Branch::Identity => r,
        }
    }

    /// `f'(r)`, outer branch at breakpoints.
    pub fn profile_derivative(&self, r: T) -> T {
        let rho = self.rho;
        match self.branch(r) {
            Branch::Inner => rho.recip(),
            Branch::Shell => (rho + rho).recip(),
            Branch::Outer => (T::lit(4.0) * (T::one() - rho)).recip(),
            Branch::Identity => T::one(),
        }
    }

    /// Inverse profile on `[1, ∞)`.
    pub fn profile_inverse(&self, s: T) -> Result<T> {
        let rho = self.rho;
        if !(s >= T::one()) {
            return Err(Error::OutsideImage { radius: s.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(if s >= T::lit(2.0) {
            s
        } else if s >= T::lit(1.5) {
            (s - self.outer_intercept()) * T::lit(4.0) * (T::one() - rho)
        } else {
            rho * (s + s - T::one())
        })
    }

    pub fn map_forward(&self, x: [T; 2]) -> [T; 2] {
        let r = x[0].hypot(x[1]);
        if r == T::zero() {
            return x;
        }
        let g = self.profile(r) / r;
        [x[0] * g, x[1] * g]
    }

    /// Preimage of `y`; requires `|y| ≥ 1`.
    pub fn map_inverse(&self, y: [T; 2]) -> Result<[T; 2]> {
        let s = y[0].hypot(y[1]);
        let r = self.profile_inverse(s)?;
        let g = r / s;
        Ok([y[0] * g, y[1] * g])
    }

    /// `DF(x) = f'(r) x̂x̂ᵀ + (f(r)/r)(I − x̂x̂ᵀ)`.
    pub fn jacobian(&self, x: [T; 2]) -> Result<Mat2<T>> {
        let r = x[0].hypot(x[1]);
        if r == T::zero() {
            return Err(Error::SingularPoint("Jacobian of the radial map at the origin".into()));
        }
        let (c, s) = (x[0] / r, x[1] / r);
        let radial = self.profile_derivative(r);
        let tangential = self.profile(r) / r;
        Ok(frame(c, s, radial, tangential))
    }
}

/// Symmetric matrix with eigenvalue `radial` along `(c, s)` and
/// `tangential` along `(-s, c)`.
fn frame<T: Real>(c: T, s: T, radial: T, tangential: T) -> Mat2<T> {
    let off = (radial - tangential) * c * s;
    [
        [radial * c * c + tangential * s * s, off],
        [off, radial * s * s + tangential * c * c],
    ]
}

/// Pushed-forward coefficients at one point of the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorFieldSample<T> {
    /// `|y|`.
    pub radius: T,
    pub angle: T,
    /// `F_*(1/μ)`.
    pub a_push: Mat2<T>,
    /// `F_*ε`.
    pub q_push: T,
    /// Inverse of `a_push`: the anisotropic permeability.
    pub mu_push: Mat2<T>,
    /// Eigenvalue of `a_push` along the radial direction.
    pub radial: T,
    /// Eigenvalue of `a_push` along the tangential direction.
    pub tangential: T,
}

impl<T: Real> TensorFieldSample<T> {
    pub fn is_positive_definite(&self) -> bool {
        let [[a, b], [_, d]] = self.a_push;
        a > T::zero() && a * d - b * b > T::zero() && self.q_push > T::zero()
    }

    pub fn anisotropy(&self) -> T {
        self.radial.max(self.tangential) / self.radial.min(self.tangential)
    }
}

/// `(F_ρ)_*` of the structure scaled by `ρ`, evaluated at `y`.
pub fn push_forward<T: Real>(map: &RadialMap<T>, s: &LayeredStructure<T>, y: [T; 2]) -> Result<TensorFieldSample<T>> {
    push_forward_polar(map, s, y[0].hypot(y[1]), y[1].atan2(y[0]))
}

/// [`push_forward`] at `|y| = radius`, `arg y = angle`.
pub fn push_forward_polar<T: Real>(
    map: &RadialMap<T>,
    s: &LayeredStructure<T>,
    radius: T,
    angle: T,
) -> Result<TensorFieldSample<T>> {
    let r = map.profile_inverse(radius)?;
    // on the shell branch r/ρ = 2|y| - 1 exactly, so |y| = 1 lands on the core boundary
    let unscaled = if radius < T::lit(1.5) { radius + radius - T::one() } else { r / map.rho() };
    let material = s.material_at(unscaled).ok_or(Error::InsideCore {
        radius: radius.to_f64().unwrap_or(f64::NAN),
    })?;
    let fr = map.profile(r);
    let fp = map.profile_derivative(r);
    // DF A DFᵀ / det DF with A = (1/μ) I and det DF = f' f / r
    let a = material.mu.recip();
    let radial = a * fp * r / fr;
    let tangential = a * fr / (r * fp);
    let det = fp * fr / r;
    let (c, sn) = (angle.cos(), angle.sin());
    Ok(TensorFieldSample {
        radius,
        angle,
        a_push: frame(c, sn, radial, tangential),
        q_push: material.eps / det,
        mu_push: frame(c, sn, radial.recip(), tangential.recip()),
        radial,
        tangential,
    })
}

/// Polar sampling grid over `r_min ≤ |y| ≤ r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid<T> {
    pub r_min: T,
    pub r_max: T,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl<T: Real> PolarGrid<T> {
    pub fn radii(&self) -> Vec<T> {
        if self.radial_nodes == 1 {
            return vec![self.r_min];
        }
        let span = self.r_max - self.r_min;
        let last = T::from_usize_lossy(self.radial_nodes - 1);
        (0..self.radial_nodes)
            .map(|i| self.r_min + span * T::from_usize_lossy(i) / last)
            .collect()
    }

    pub fn angles(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.angular_nodes);
        (0..self.angular_nodes)
            .map(|j| T::TAU() * T::from_usize_lossy(j) / n)
            .collect()
    }
}

/// Radius-major samples of the pushed-forward structure.
pub fn sample_grid<T: Real>(
    map: &RadialMap<T>,
    s: &LayeredStructure<T>,
    grid: &PolarGrid<T>,
) -> Result<Vec<TensorFieldSample<T>>> {
    if grid.radial_nodes == 0 || grid.angular_nodes == 0 {
        return Err(Error::InvalidArgument("grid needs at least one node per direction".into()));
    }
    if !(grid.r_min >= T::one() && grid.r_max >= grid.r_min && grid.r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid radii must satisfy 1 <= r_min <= r_max, got ({}, {})",
            grid.r_min, grid.r_max
        )));
    }
    let angles = grid.angles();
    let mut out = Vec::with_capacity(grid.radial_nodes * grid.angular_nodes);
    for r in grid.radii() {
        for &th in &angles {
            out.push(push_forward_polar(map, s, r, th)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoint_values() {
        for rho in [0.5f64, 0.1, 0.01] {
            let m = RadialMap::<f64>::new(rho).unwrap();
            assert!((m.profile(rho) - 1.0).abs() < 1e-15);
            assert!((m.profile(rho * (1.0 - 1e-15)) - 1.0).abs() < 1e-13);
            assert!((m.profile(2.0 * rho) - 1.5).abs() < 1e-15);
            assert!((m.profile(2.0 * rho * (1.0 - 1e-15)) - 1.5).abs() < 1e-13);
            assert!((m.profile(2.0 - 1e-15) - 2.0).abs() < 1e-14);
            assert_eq!(m.profile(3.0), 3.0);
        }
    }

    #[test]
    fn rho_range() {
        assert!(RadialMap::new(0.0).is_err());
        assert!(RadialMap::new(0.6).is_err());
        assert!(RadialMap::new(0.5).is_ok());
    }

    #[test]
    fn inverse_refuses_the_unit_disk() {
        let m = RadialMap::new(0.1).unwrap();
        assert!(matches!(m.map_inverse([0.5, 0.2]), Err(Error::OutsideImage { .. })));
        assert!(m.map_inverse([1.0, 0.0]).is_ok());
    }

    #[test]
    fn jacobian_at_origin() {
        let m = RadialMap::new(0.1).unwrap();
        assert!(matches!(m.jacobian([0.0, 0.0]), Err(Error::SingularPoint(_))));
    }
}
