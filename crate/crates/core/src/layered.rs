//! Concentric layered structures and their scattering coefficients.
//!
//! In annulus `j` the mode-`n` field is `a_j J_n(k_j r) + b_j H_n(k_j r)`.
//! Continuity of `u` and of `(1/μ) ∂_r u` across `r_j` gives
//! `M_j(r_j) (a_j, b_j)ᵀ = M_{j-1}(r_j) (a_{j-1}, b_{j-1})ᵀ` with
//! `M_i(r) = [[J_n, H_n], [√(ε_i/μ_i) J_n', √(ε_i/μ_i) H_n']]` at `k_i r`.
//! The core supplies one linear condition on `(a_L, b_L)`; carrying that row
//! through `adj(M_j) M_{j-1}` for `j = L..1` yields `(p21, p22)` with
//! `p21 + p22 b_0 = 0` and `W_n = 4 i b_0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{imag_unit, Real};
use crate::specfun::CylFunValue;

/// Per-mode energy balance of a lossless scatterer: `Im W_n = -|W_n|² / 4`.
pub const OPTICAL_THEOREM_FACTOR: f64 = 0.25;

/// Hard cap for [`auto_truncation`].
pub const MAX_TRUNCATION_ORDER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material<T> {
    pub mu: T,
    pub eps: T,
}

impl<T: Real> Material<T> {
    pub fn new(mu: T, eps: T) -> Self {
        Self { mu, eps }
    }

    pub fn vacuum() -> Self {
        Self::new(T::one(), T::one())
    }

    /// Refractive index `√(με)`; the wavenumber is `ω` times this.
    pub fn index(&self) -> T {
        (self.mu * self.eps).sqrt()
    }

    /// `√(ε/μ)`, the factor multiplying the derivative row.
    pub fn admittance(&self) -> T {
        (self.eps / self.mu).sqrt()
    }

    /// Same constants in another scalar type.
    pub fn cast<U: Real>(&self) -> Material<U> {
        Material::new(cast_scalar(self.mu), cast_scalar(self.eps))
    }

    fn validate(&self, what: &str) -> Result<()> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if ok(self.mu) && ok(self.eps) {
            Ok(())
        } else {
            Err(Error::InvalidStructure(format!(
                "{what}: material constants must be finite and > 0 (mu={}, eps={})",
                self.mu, self.eps
            )))
        }
    }
}

/// Innermost region `|x| < r_{L+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Core<T> {
    /// Perfect insulator: zero normal derivative on the core boundary.
    Neumann,
    Penetrable(Material<T>),
}

/// Radii `r_1 > … > r_{L+1} > 0`, materials of the `L` annuli, core and background.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredStructure<T> {
    radii: Vec<T>,
    layers: Vec<Material<T>>,
    core: Core<T>,
    background: Material<T>,
}

impl<T: Real> LayeredStructure<T> {
    pub fn new(
        radii: Vec<T>,
        layers: Vec<Material<T>>,
        core: Core<T>,
        background: Material<T>,
    ) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidStructure("at least one radius is required".into()));
        }
        if radii.len() != layers.len() + 1 {
            return Err(Error::InvalidStructure(format!(
                "{} radii need exactly {} layers, got {}",
                radii.len(),
                radii.len() - 1,
                layers.len()
            )));
        }
        for r in &radii {
            if !(r.is_finite() && *r > T::zero()) {
                return Err(Error::InvalidStructure(format!("radius {r} must be finite and > 0")));
            }
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidStructure("radii must be strictly decreasing".into()));
        }
        for (j, m) in layers.iter().enumerate() {
            m.validate(&format!("layer {}", j + 1))?;
        }
        if let Core::Penetrable(m) = &core {
            m.validate("core")?;
        }
        background.validate("background")?;
        Ok(Self { radii, layers, core, background })
    }

    /// Neumann core in vacuum background.
    pub fn insulated(radii: Vec<T>, layers: Vec<Material<T>>) -> Result<Self> {
        Self::new(radii, layers, Core::Neumann, Material::vacuum())
    }

    pub fn bare_neumann_disk(radius: T) -> Result<Self> {
        Self::insulated(vec![radius], Vec::new())
    }

    pub fn penetrable_disk(radius: T, inside: Material<T>, background: Material<T>) -> Result<Self> {
        Self::new(vec![radius], Vec::new(), Core::Penetrable(inside), background)
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn layers(&self) -> &[Material<T>] {
        &self.layers
    }

    pub fn core(&self) -> Core<T> {
        self.core
    }

    pub fn background(&self) -> Material<T> {
        self.background
    }

    /// Number of annuli `L`.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn outer_radius(&self) -> T {
        self.radii[0]
    }

    pub fn core_radius(&self) -> T {
        self.radii[self.radii.len() - 1]
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self.core, Core::Neumann)
    }

    /// Medium `i` in the transfer numbering: 0 is the background, `1..=L` the annuli.
    pub fn medium(&self, i: usize) -> Material<T> {
        if i == 0 {
            self.background
        } else {
            self.layers[i - 1]
        }
    }

    /// Material at radius `r`; `None` inside a Neumann core.
    pub fn material_at(&self, r: T) -> Option<Material<T>> {
        if r >= self.radii[0] {
            return Some(self.background);
        }
        for (j, m) in self.layers.iter().enumerate() {
            if r >= self.radii[j + 1] {
                return Some(*m);
            }
        }
        match self.core {
            Core::Neumann => None,
            Core::Penetrable(m) => Some(m),
        }
    }

    /// Same structure in another scalar type.
    pub fn cast<U: Real>(&self) -> LayeredStructure<U> {
        LayeredStructure {
            radii: self.radii.iter().map(|r| cast_scalar(*r)).collect(),
            layers: self.layers.iter().map(Material::cast).collect(),
            core: match self.core {
                Core::Neumann => Core::Neumann,
                Core::Penetrable(m) => Core::Penetrable(m.cast()),
            },
            background: self.background.cast(),
        }
    }

    /// Same geometry with new annulus materials.
    pub fn with_layers(&self, layers: Vec<Material<T>>) -> Result<Self> {
        Self::new(self.radii.clone(), layers, self.core, self.background)
    }
}

fn cast_scalar<T: Real, U: Real>(x: T) -> U {
    U::lit(x.to_f64().unwrap_or(f64::NAN))
}

/// 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2c<T> {
    pub a11: Complex<T>,
    pub a12: Complex<T>,
    pub a21: Complex<T>,
    pub a22: Complex<T>,
}

impl<T: Real> Matrix2c<T> {
    pub fn new(a11: Complex<T>, a12: Complex<T>, a21: Complex<T>, a22: Complex<T>) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex<T> {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !d.norm().is_finite() {
            return None;
        }
        let adj = self.adjugate();
        Some(Self::new(adj.a11 / d, adj.a12 / d, adj.a21 / d, adj.a22 / d))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, row: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            row[0] * self.a11 + row[1] * self.a21,
            row[0] * self.a12 + row[1] * self.a22,
        ]
    }

    /// Matrix times column vector.
    pub fn apply(&self, col: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.a11 * col[0] + self.a12 * col[1],
            self.a21 * col[0] + self.a22 * col[1],
        ]
    }

    pub fn max_abs(&self) -> T {
        self.a11
            .norm()
            .max(self.a12.norm())
            .max(self.a21.norm())
            .max(self.a22.norm())
    }
}

/// `[[J_n(kr), H_n(kr)], [√(ε/μ) J_n'(kr), √(ε/μ) H_n'(kr)]]`.
///
/// The same matrix serves both media meeting at an interface; pass the
/// wavenumber and material of the medium on the side being described.
pub fn interface_matrix<T: Real>(n: i32, k: T, r: T, material: Material<T>) -> Result<Matrix2c<T>> {
    let v = CylFunValue::eval(n, k * r)?;
    let s = Complex::new(material.admittance(), T::zero());
    Ok(Matrix2c::new(
        Complex::new(v.j, T::zero()),
        v.h1(),
        s * Complex::new(v.jp, T::zero()),
        s * v.h1p(),
    ))
}

fn normalize<T: Real>(row: [Complex<T>; 2]) -> [Complex<T>; 2] {
    let m = row[0].norm().max(row[1].norm());
    if m > T::zero() && m.is_finite() {
        [row[0] / m, row[1] / m]
    } else {
        row
    }
}

fn check_frequency<T: Real>(omega: T) -> Result<()> {
    if omega.is_finite() && omega > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("frequency must be finite and > 0, got {omega}")))
    }
}

/// Second row `(p21, p22)` of the mode-`n` transfer product, up to a
/// common nonzero factor.
pub fn transfer_p<T: Real>(n: i32, s: &LayeredStructure<T>, omega: T) -> Result<(Complex<T>, Complex<T>)> {
    check_frequency(omega)?;
    let l = s.layer_count();
    let rc = s.core_radius();
    let inner = s.medium(l);
    let k_inner = omega * inner.index();
    let mut row = match s.core {
        Core::Neumann => {
            let v = CylFunValue::eval(n, k_inner * rc)?;
            [Complex::new(v.jp, T::zero()), v.h1p()]
        }
        Core::Penetrable(core) => {
            let m_inner = interface_matrix(n, k_inner, rc, inner)?;
            let m_core = interface_matrix(n, omega * core.index(), rc, core)?;
            let v = m_inner.adjugate().apply([m_core.a11, m_core.a21]);
            [v[1], -v[0]]
        }
    };
    row = normalize(row);
    for j in (1..=l).rev() {
        let r = s.radii[j - 1];
        let inside = s.medium(j);
        let outside = s.medium(j - 1);
        let m_in = interface_matrix(n, omega * inside.index(), r, inside)?;
        row = normalize(m_in.adjugate().left_apply(row));
        let m_out = interface_matrix(n, omega * outside.index(), r, outside)?;
        row = normalize(m_out.left_apply(row));
    }
    let tiny = T::lit(1e-300).max(T::min_positive_value());
    if !(row[1].norm() >= tiny) {
        return Err(Error::DegenerateStructure {
            order: n,
            magnitude: row[1].norm().to_f64().unwrap_or(0.0),
        });
    }
    Ok((row[0], row[1]))
}

/// `W_n = W_{nn}` at frequency `ω`; `W_{-n} = W_n`.
pub fn scattering_coefficient<T: Real>(s: &LayeredStructure<T>, omega: T, n: i32) -> Result<Complex<T>> {
    let (p21, p22) = transfer_p(n.abs(), s, omega)?;
    let b0 = -p21 / p22;
    Ok(imag_unit::<T>() * T::lit(4.0) * b0)
}

/// Diagonal scattering coefficients `W_0 ..= W_{n_max}` at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSpectrum<T> {
    pub omega: T,
    pub n_max: usize,
    w: Vec<Complex<T>>,
}

impl<T: Real> ScatteringSpectrum<T> {
    pub fn compute(s: &LayeredStructure<T>, omega: T, n_max: usize) -> Result<Self> {
        let w = (0..=n_max)
            .map(|n| scattering_coefficient(s, omega, n as i32))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { omega, n_max, w })
    }

    /// `W_n` for any `|n| <= n_max`.
    pub fn get(&self, n: i32) -> Option<Complex<T>> {
        self.w.get(n.unsigned_abs() as usize).copied()
    }

    /// `W_0 ..= W_{n_max}`.
    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.w
    }

    /// `A_∞(θ, θ') = Σ_{|n|<=n_max} e^{in(θ'-θ)} W_n`.
    pub fn far_field(&self, theta: T, theta_prime: T) -> Complex<T> {
        let phi = theta_prime - theta;
        let two = T::lit(2.0);
        self.w
            .iter()
            .enumerate()
            .skip(1)
            .fold(self.w[0], |acc, (n, w)| acc + *w * (two * (T::from_usize_lossy(n) * phi).cos()))
    }

    /// `Σ_{|n|<=n_max} |W_n|²`.
    pub fn norm_sqr_sum(&self) -> T {
        let two = T::lit(2.0);
        self.w
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (n, w)| acc + if n == 0 { w.norm_sqr() } else { two * w.norm_sqr() })
    }

    /// `Σ_{|n|<=n_max} W_n`.
    pub fn sum(&self) -> Complex<T> {
        let two = T::lit(2.0);
        self.w
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (n, w)| {
                acc + if n == 0 { *w } else { *w * two }
            })
    }

    /// `2π Σ |W_n|²`, independent of the scattered direction.
    pub fn cross_section(&self) -> T {
        T::TAU() * self.norm_sqr_sum()
    }

    /// `|Im Σ W_n + c Σ |W_n|²| / Σ |W_n|²` for a caller-chosen constant `c`.
    pub fn energy_residual(&self, c: T) -> T {
        let norm = self.norm_sqr_sum();
        if norm == T::zero() {
            return self.sum().im.abs();
        }
        (self.sum().im + c * norm).abs() / norm
    }
}

pub fn far_field<T: Real>(
    s: &LayeredStructure<T>,
    omega: T,
    theta: T,
    theta_prime: T,
    n_max: usize,
) -> Result<Complex<T>> {
    Ok(ScatteringSpectrum::compute(s, omega, n_max)?.far_field(theta, theta_prime))
}

/// Scattering cross section; the scattered direction does not enter for
/// concentric structures, so it is not a parameter.
pub fn cross_section<T: Real>(s: &LayeredStructure<T>, omega: T, n_max: usize) -> Result<T> {
    Ok(ScatteringSpectrum::compute(s, omega, n_max)?.cross_section())
}

/// Normalized violation of `Im Σ W_n = -(1/4) Σ |W_n|²` (0 when all `W_n` vanish).
pub fn optical_theorem_residual<T: Real>(s: &LayeredStructure<T>, omega: T, n_max: usize) -> Result<T> {
    Ok(ScatteringSpectrum::compute(s, omega, n_max)?.energy_residual(T::lit(OPTICAL_THEOREM_FACTOR)))
}

/// Smallest order past which the neglected `|n| > n_max` tail is below `tol`.
///
/// Never returns less than `ceil(ω r_1) + 8`.
pub fn auto_truncation<T: Real>(s: &LayeredStructure<T>, omega: T, tol: T) -> Result<usize> {
    check_frequency(omega)?;
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    let floor = (omega * s.outer_radius()).ceil().to_usize().unwrap_or(usize::MAX).saturating_add(8);
    if floor > MAX_TRUNCATION_ORDER {
        return Err(Error::NonConvergence { cap: MAX_TRUNCATION_ORDER, last: f64::NAN });
    }
    let mut prev = scattering_coefficient(s, omega, floor as i32 - 1)?.norm();
    let mut last = prev;
    for n in floor..=MAX_TRUNCATION_ORDER {
        let cur = scattering_coefficient(s, omega, n as i32)?.norm();
        last = cur;
        if cur == T::zero() {
            return Ok(n);
        }
        if prev > T::zero() && cur < prev {
            let ratio = cur / prev;
            // geometric bound on both ±n tails beyond n
            let tail = T::lit(2.0) * cur * ratio / (T::one() - ratio);
            if cur < tol && tail < tol {
                return Ok(n);
            }
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        cap: MAX_TRUNCATION_ORDER,
        last: last.to_f64().unwrap_or(f64::NAN),
    })
}

/// All radii multiplied by `ρ`, materials unchanged (`μ∘Ψ_{1/ρ}`).
pub fn scale_structure<T: Real>(s: &LayeredStructure<T>, rho: T) -> Result<LayeredStructure<T>> {
    if !(rho.is_finite() && rho > T::zero()) {
        return Err(Error::InvalidArgument(format!("scale must be finite and > 0, got {rho}")));
    }
    LayeredStructure::new(
        s.radii.iter().map(|r| *r * rho).collect(),
        s.layers.clone(),
        s.core,
        s.background,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn published_l2() -> LayeredStructure<f64> {
        LayeredStructure::insulated(
            vec![2.0, 1.5, 1.0],
            vec![Material::new(1.4905, 1.09271), Material::new(0.27594, 1.6702)],
        )
        .unwrap()
    }

    fn matched(l: usize) -> LayeredStructure<f64> {
        let radii: Vec<f64> = (0..=l).map(|j| 2.0 - j as f64 / l.max(1) as f64).collect();
        LayeredStructure::new(
            radii,
            vec![Material::vacuum(); l],
            Core::Penetrable(Material::vacuum()),
            Material::vacuum(),
        )
        .unwrap()
    }

    #[test]
    fn structure_validation() {
        let v = Material::<f64>::vacuum();
        assert!(LayeredStructure::insulated(vec![1.0, 2.0], vec![v]).is_err());
        assert!(LayeredStructure::insulated(vec![2.0, 1.0], vec![]).is_err());
        assert!(LayeredStructure::insulated(vec![2.0, -1.0], vec![v]).is_err());
        assert!(LayeredStructure::insulated(vec![2.0, 1.0], vec![Material::new(0.0, 1.0)]).is_err());
        assert!(LayeredStructure::insulated(vec![2.0, 1.0], vec![Material::new(1.0, f64::INFINITY)]).is_err());
        assert!(LayeredStructure::<f64>::insulated(vec![], vec![]).is_err());
        assert!(LayeredStructure::insulated(vec![2.0, 1.0], vec![v]).is_ok());
    }

    #[test]
    fn material_lookup() {
        let s = published_l2();
        assert_eq!(s.material_at(3.0), Some(Material::vacuum()));
        assert_eq!(s.material_at(1.7), Some(Material::new(1.4905, 1.09271)));
        assert_eq!(s.material_at(1.5), Some(Material::new(1.4905, 1.09271)));
        assert_eq!(s.material_at(1.2), Some(Material::new(0.27594, 1.6702)));
        assert_eq!(s.material_at(1.0), Some(Material::new(0.27594, 1.6702)));
        assert_eq!(s.material_at(0.5), None);
    }

    #[test]
    fn interface_matrix_determinant_is_wronskian() {
        let (n, k, r) = (3, 1.3, 0.8);
        let m = Material::new(2.0, 0.7);
        let a = interface_matrix(n, k, r, m).unwrap();
        let expected = Complex::new(0.0, m.admittance() * 2.0 / (std::f64::consts::PI * k * r));
        assert!((a.det() - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn interface_matrix_unit_substitution() {
        let a = interface_matrix(0, 1.0, 1.0, Material::vacuum()).unwrap();
        let v = CylFunValue::eval(0, 1.0).unwrap();
        assert_eq!(a.a11, Complex::new(v.j, 0.0));
        assert_eq!(a.a12, v.h1());
        assert_eq!(a.a21, Complex::new(v.jp, 0.0));
        assert_eq!(a.a22, v.h1p());
    }

    #[test]
    fn adjugate_inverse_matches() {
        let a = interface_matrix(2, 0.9, 1.7, Material::new(1.5, 2.5)).unwrap();
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        let e = Matrix2c::identity();
        assert!((id.a11 - e.a11).norm() < 1e-12);
        assert!((id.a12 - e.a12).norm() < 1e-12);
        assert!((id.a21 - e.a21).norm() < 1e-12);
        assert!((id.a22 - e.a22).norm() < 1e-12);
    }

    #[test]
    fn bare_disk_row_is_neumann_row() {
        let s = LayeredStructure::bare_neumann_disk(1.3).unwrap();
        for n in 0..6 {
            let (p21, p22) = transfer_p(n, &s, 0.7).unwrap();
            let v = CylFunValue::eval(n, 0.7 * 1.3).unwrap();
            let ratio = p21 / p22;
            let expected = Complex::new(v.jp, 0.0) / v.h1p();
            assert!((ratio - expected).norm() <= 1e-14 * expected.norm());
        }
    }

    #[test]
    fn matched_layer_is_transparent() {
        let bare = LayeredStructure::bare_neumann_disk(1.0).unwrap();
        let coated = LayeredStructure::insulated(vec![2.5, 1.0], vec![Material::vacuum()]).unwrap();
        for n in 0..6 {
            for &w in &[0.05, 0.8, 3.0] {
                let a = scattering_coefficient(&bare, w, n).unwrap();
                let b = scattering_coefficient(&coated, w, n).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm(), "n={n} w={w}");
            }
        }
    }

    #[test]
    fn published_profile_beats_bare_disk_at_low_frequency() {
        let bare = LayeredStructure::bare_neumann_disk(1.0).unwrap();
        let s = published_l2();
        for n in 0..=2 {
            let (a21, a22) = transfer_p(n, &s, 0.01).unwrap();
            let (b21, b22) = transfer_p(n, &bare, 0.01).unwrap();
            assert!((a21 / a22).norm() < (b21 / b22).norm(), "n={n}");
        }
    }

    #[test]
    fn matched_structures_do_not_scatter() {
        // a bare matched disk cancels exactly
        for n in 0..=10 {
            assert_eq!(scattering_coefficient(&matched(0), 0.7, n).unwrap(), Complex::new(0.0, 0.0));
        }
        for l in 0..4 {
            let s = matched(l);
            for n in 0..=10 {
                for &w in &[0.01, 1.0] {
                    assert!(scattering_coefficient(&s, w, n).unwrap().norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn negative_orders_by_symmetry() {
        let s = published_l2();
        for n in 1..6 {
            assert_eq!(
                scattering_coefficient(&s, 0.9, n).unwrap(),
                scattering_coefficient(&s, 0.9, -n).unwrap()
            );
        }
        let spec = ScatteringSpectrum::compute(&s, 0.9, 6).unwrap();
        assert_eq!(spec.get(-4), spec.get(4));
        assert_eq!(spec.get(7), None);
    }

    #[test]
    fn far_field_depends_on_angle_difference() {
        let spec = ScatteringSpectrum::compute(&published_l2(), 1.2, 15).unwrap();
        for &(a, b) in &[(0.3, 1.9), (2.0, -0.4), (5.0, 5.5)] {
            let x = spec.far_field(a, b);
            let y = spec.far_field(0.0, b - a);
            assert!((x - y).norm() <= 1e-13 * x.norm().max(1e-300));
        }
    }

    #[test]
    fn frequency_and_scale_validation() {
        let s = published_l2();
        assert!(transfer_p(0, &s, 0.0).is_err());
        assert!(transfer_p(0, &s, f64::NAN).is_err());
        assert!(scale_structure(&s, 0.0).is_err());
        assert_eq!(scale_structure(&s, 1.0).unwrap(), s);
        assert!(auto_truncation(&s, 1.0, 0.0).is_err());
    }

    #[test]
    fn auto_truncation_floor_and_growth() {
        let s = LayeredStructure::bare_neumann_disk(1.0).unwrap();
        assert_eq!(auto_truncation(&s, 1.0, f64::INFINITY).unwrap(), 9);
        assert!(auto_truncation(&s, 0.01, 1e-12).unwrap() <= 10);
        let n = auto_truncation(&s, 1.0, 1e-12).unwrap();
        assert!(scattering_coefficient(&s, 1.0, n as i32).unwrap().norm() < 1e-14);
        let big = auto_truncation(&s, 40.0, 1e-12).unwrap();
        assert!(big >= 48);
    }
}
