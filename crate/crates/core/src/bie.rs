//! Boundary-integral scattering coefficients of a single penetrable disk.
//!
//! On the circle `|y| = R` the single-layer potential with kernel
//! `Γ_k = -(i/4) H_0(k|x - y|)` is diagonal in Fourier modes: for the
//! density `e^{imθ}`
//!
//! ```text
//! S^k[e^{imθ}](x) = -(iπR/2) J_m(kR) H_m(k|x|) e^{imθ_x}   |x| ≥ R
//!                 = -(iπR/2) H_m(kR) J_m(k|x|) e^{imθ_x}   |x| ≤ R
//! ```
//!
//! so the transmission system for `(φ, ψ)` reduces to one 2×2 system per
//! mode and `W_nm = 2πR J_m(k_0 R) ψ̂_m δ_nm`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::layered::Material;
use crate::scalar::{imag_unit, real, Real};
use crate::specfun::CylFunValue;

/// Equilibrated condition number above which a mode system is refused.
pub const RESONANCE_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskScatterer<T> {
    pub radius: T,
    pub inside: Material<T>,
    pub outside: Material<T>,
    pub omega: T,
}

impl<T: Real> DiskScatterer<T> {
    pub fn new(radius: T, inside: Material<T>, outside: Material<T>, omega: T) -> Result<Self> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if !(ok(radius) && ok(omega) && ok(inside.mu) && ok(inside.eps) && ok(outside.mu) && ok(outside.eps)) {
            return Err(Error::InvalidArgument(
                "disk radius, frequency and material constants must be finite and > 0".into(),
            ));
        }
        Ok(Self { radius, inside, outside, omega })
    }

    /// Wavenumber inside the disk.
    pub fn k(&self) -> T {
        self.omega * self.inside.index()
    }

    /// Background wavenumber.
    pub fn k0(&self) -> T {
        self.omega * self.outside.index()
    }
}

/// Value and radial derivative at radius `r` of the single-layer potential
/// of the density `e^{imθ}` on the circle of radius `radius` (angular
/// factor omitted). At `r = radius` the derivative is the outside limit.
pub fn single_layer_mode<T: Real>(k: T, radius: T, m: i32, r: T) -> Result<(Complex<T>, Complex<T>)> {
    let pre = imag_unit::<T>() * (-T::PI() * radius / T::lit(2.0));
    let on = CylFunValue::eval(m, k * radius)?;
    let at = CylFunValue::eval(m, k * r)?;
    if r >= radius {
        Ok((pre * on.j * at.h1(), pre * on.j * at.h1p() * k))
    } else {
        Ok((pre * on.h1() * at.j, pre * on.h1() * at.jp * k))
    }
}

/// Fourier coefficients `(φ̂_m, ψ̂_m)` of the layer densities for the
/// incident field `J_m(k_0|x|) e^{imθ}`.
pub fn mode_densities<T: Real>(d: &DiskScatterer<T>, m: i32) -> Result<(Complex<T>, Complex<T>)> {
    let (k, k0, r) = (d.k(), d.k0(), d.radius);
    let inner = CylFunValue::eval(m, k * r)?;
    let outer = CylFunValue::eval(m, k0 * r)?;
    let pre = imag_unit::<T>() * (-T::PI() * r / T::lit(2.0));
    let s1 = k / d.inside.mu;
    let s0 = k0 / d.outside.mu;
    // rows: trace, flux; columns: φ̂, ψ̂
    let a = [
        [pre * inner.h1() * inner.j, -pre * outer.j * outer.h1()],
        [pre * inner.h1() * inner.jp * s1, -pre * outer.j * outer.h1p() * s0],
    ];
    let rhs = [real(outer.j), real(outer.jp * s0)];
    let condition = equilibrated_condition(&a);
    if !(condition <= T::lit(RESONANCE_CONDITION)) {
        return Err(Error::NearResonance { mode: m, condition: condition.to_f64().unwrap_or(f64::INFINITY) });
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let phi = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det;
    let psi = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det;
    Ok((phi, psi))
}

/// 2-norm condition number after scaling each row to unit max-norm.
fn equilibrated_condition<T: Real>(a: &[[Complex<T>; 2]; 2]) -> T {
    let rows: Vec<[Complex<T>; 2]> = a
        .iter()
        .map(|row| {
            let s = row[0].norm().max(row[1].norm());
            if s > T::zero() {
                [row[0] / s, row[1] / s]
            } else {
                *row
            }
        })
        .collect();
    let fro = rows.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    let det = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]).norm();
    if det == T::zero() {
        return T::infinity();
    }
    // σ_max/σ_min from the Frobenius norm and |det| of a 2×2 matrix
    let disc = (fro * fro - T::lit(4.0) * det * det).max(T::zero()).sqrt();
    let smax = ((fro + disc) / T::lit(2.0)).sqrt();
    let smin = det / smax;
    smax / smin
}

/// `W_nm` from the defining boundary integral of `J_n(k_0|y|) e^{-inθ} ψ_m`.
pub fn scattering_coefficient_bie<T: Real>(d: &DiskScatterer<T>, n: i32, m: i32) -> Result<Complex<T>> {
    if n != m {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let (_, psi) = mode_densities(d, m)?;
    let j = CylFunValue::eval(n, d.k0() * d.radius)?.j;
    Ok(psi * (T::TAU() * d.radius * j))
}
