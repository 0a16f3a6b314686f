//! Low-frequency expansion of the scattering coefficients of an insulated
//! layered disk:
//! `W_n(t) = t^{2n} (W_n^0 + Σ_{l=1}^{N-n} Σ_{j=0}^{M} W_n^{l,j} t^{2l} (ln t)^j) + o(t^{2N})`
//! with `t` the frequency of the unit-scale structure and `M = (L+1)(N-n)`.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::layered::{LayeredStructure, Material};
use crate::scalar::{imag_unit, real, Real};
use crate::series::{series_bessel, BesselKind, PowerLogSeries};

/// Largest order the extraction accepts.
pub const MAX_ORDER: usize = 4;

/// Bessel windows tried beyond the first before giving up.
const MAX_DEEPENING: i32 = 40;

/// Names one table entry: `l = 0` is the leading `W_n^0` (then `j = 0`),
/// `l ≥ 1` the `t^{2l} (ln t)^j` correction `W_n^{l,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefficientLabel {
    pub n: usize,
    pub l: usize,
    pub j: usize,
}

impl CoefficientLabel {
    pub fn leading(n: usize) -> Self {
        Self { n, l: 0, j: 0 }
    }

    pub fn correction(n: usize, l: usize, j: usize) -> Self {
        Self { n, l, j }
    }

    /// Power of `t` this coefficient multiplies.
    pub fn power(&self) -> usize {
        2 * (self.n + self.l)
    }
}

impl fmt::Display for CoefficientLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l == 0 {
            write!(f, "W_{}^0", self.n)
        } else {
            write!(f, "W_{}^{{{},{}}}", self.n, self.l, self.j)
        }
    }
}

/// Coefficients of one order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRow<T> {
    pub n: usize,
    pub leading: Complex<T>,
    /// `((l, j), W_n^{l,j})` ordered by `l`, then `j`.
    pub corrections: Vec<((usize, usize), Complex<T>)>,
}

impl<T: Real> ExpansionRow<T> {
    /// `|W_n^0|² + Σ |W_n^{l,j}|²`.
    pub fn norm_sqr(&self) -> T {
        self.corrections
            .iter()
            .fold(self.leading.norm_sqr(), |acc, (_, c)| acc + c.norm_sqr())
    }
}

/// Extracted coefficients for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTable<T> {
    order: usize,
    layers: usize,
    rows: Vec<ExpansionRow<T>>,
    off_shape: T,
}

impl<T: Real> ExpansionTable<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    pub fn rows(&self) -> &[ExpansionRow<T>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> Option<&ExpansionRow<T>> {
        self.rows.get(n)
    }

    /// Log-power bound `M_{n,l} = (L+1)(N-n)`.
    pub fn log_bound(&self, n: usize) -> usize {
        (self.layers + 1) * (self.order - n)
    }

    pub fn get(&self, label: CoefficientLabel) -> Option<Complex<T>> {
        let row = self.rows.get(label.n)?;
        if label.l == 0 {
            return (label.j == 0).then_some(row.leading);
        }
        row.corrections
            .iter()
            .find(|((l, j), _)| *l == label.l && *j == label.j)
            .map(|(_, c)| *c)
    }

    /// Every entry in table order.
    pub fn entries(&self) -> impl Iterator<Item = (CoefficientLabel, Complex<T>)> + '_ {
        self.rows.iter().flat_map(|row| {
            std::iter::once((CoefficientLabel::leading(row.n), row.leading)).chain(
                row.corrections
                    .iter()
                    .map(move |((l, j), c)| (CoefficientLabel::correction(row.n, *l, *j), *c)),
            )
        })
    }

    /// Largest coefficient the series produced below `t^{2N}` that falls
    /// outside the table shape. Zero up to rounding for a correct extraction.
    pub fn off_shape_magnitude(&self) -> T {
        self.off_shape
    }

    /// Truncated expansion of `W_n` at `t > 0`.
    pub fn evaluate(&self, n: usize, t: T) -> Option<Complex<T>> {
        let row = self.rows.get(n)?;
        let lt = t.ln();
        let tail = row.corrections.iter().fold(row.leading, |acc, ((l, j), c)| {
            acc + *c * (t.powi(2 * *l as i32) * lt.powi(*j as i32))
        });
        Some(tail * t.powi(2 * n as i32))
    }
}

/// Expansion table of order `N` for an insulated structure.
pub fn extract_expansion<T: Real>(s: &LayeredStructure<T>, order: usize) -> Result<ExpansionTable<T>> {
    extract_expansion_with_margin(s, order, 0)
}

/// As [`extract_expansion`], with every series kept exact `2·margin`
/// powers further than the table needs. The coefficients do not depend on
/// the margin beyond rounding.
pub fn extract_expansion_with_margin<T: Real>(
    s: &LayeredStructure<T>,
    order: usize,
    margin: usize,
) -> Result<ExpansionTable<T>> {
    if order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "expansion order {order} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !s.is_neumann() {
        return Err(Error::InvalidStructure("expansion requires an insulated core".into()));
    }
    let layers = s.layer_count();
    let top = 2 * order as i32;
    let target = top + 2 * margin as i32;
    let mut rows = Vec::with_capacity(order + 1);
    let mut off_shape = T::zero();
    for n in 0..=order {
        let w = scattering_series(s, n as i32, target)?;
        let bound = (layers + 1) * (order - n);
        let base = 2 * n as i32;
        let leading = w.coeff(base, 0)?;
        let mut corrections = Vec::new();
        for l in 1..=(order - n) {
            for j in 0..=bound {
                corrections.push(((l, j), w.coeff(base + 2 * l as i32, j)?));
            }
        }
        for (k, j, c) in w.terms() {
            if k > top {
                break;
            }
            let in_shape = k >= base
                && (k - base) % 2 == 0
                && if k == base { j == 0 } else { j <= bound };
            if !in_shape {
                off_shape = off_shape.max(c.norm());
            }
        }
        rows.push(ExpansionRow { n, leading, corrections });
    }
    Ok(ExpansionTable { order, layers, rows, off_shape })
}

/// Power-log series of `W_n(t)` exact through at least `t^target`.
pub fn scattering_series<T: Real>(s: &LayeredStructure<T>, n: i32, target: i32) -> Result<PowerLogSeries<T>> {
    if !s.is_neumann() {
        return Err(Error::InvalidStructure("expansion requires an insulated core".into()));
    }
    let n = n.abs();
    let mut window = target + 2;
    for _ in 0..MAX_DEEPENING {
        let (p21, p22) = transfer_series(s, n, window)?;
        let w = p21.mul(&p22.inv()?)?.scale(imag_unit::<T>() * T::lit(-4.0));
        if w.kmax() >= target {
            return Ok(w);
        }
        window += 2;
    }
    Err(Error::NonConvergence {
        cap: MAX_DEEPENING as usize,
        last: f64::from(window),
    })
}

/// `(p21, p22)` as series in `t` with every Bessel factor exact through
/// `t^window`. Normalized so the layer products are true matrix inverses.
pub fn transfer_series<T: Real>(
    s: &LayeredStructure<T>,
    n: i32,
    window: i32,
) -> Result<(PowerLogSeries<T>, PowerLogSeries<T>)> {
    let layers = s.layer_count();
    let cap = log_capacity(layers, window);
    let inner = s.medium(layers);
    let a = inner.index() * s.core_radius();
    let mut row = [
        series_bessel(BesselKind::Jp, n, a, window, cap)?,
        series_bessel(BesselKind::H1p, n, a, window, cap)?,
    ];
    let half_pi = T::FRAC_PI_2();
    for j in (1..=layers).rev() {
        let r = s.radii()[j - 1];
        let inside = s.medium(j);
        let [m11, m12, m21, m22] = series_matrix(n, inside, r, window, cap)?;
        // (-iπ/2) μ_j r_j t · adj(M_j) is the inverse of M_j
        let factor = imag_unit::<T>() * (-half_pi * inside.mu * r);
        row = [
            row[0].mul(&m22)?.sub(&row[1].mul(&m21)?)?.scale(factor).shift(1),
            row[1].mul(&m11)?.sub(&row[0].mul(&m12)?)?.scale(factor).shift(1),
        ];
        let [o11, o12, o21, o22] = series_matrix(n, s.medium(j - 1), r, window, cap)?;
        row = [
            row[0].mul(&o11)?.add(&row[1].mul(&o21)?)?,
            row[0].mul(&o12)?.add(&row[1].mul(&o22)?)?,
        ];
    }
    let [p21, p22] = row;
    Ok((p21, p22))
}

/// Entries `[J, H, s J', s H']` of the interface matrix at `k r` with `k = t·index`.
fn series_matrix<T: Real>(n: i32, m: Material<T>, r: T, window: i32, cap: usize) -> Result<[PowerLogSeries<T>; 4]> {
    let a = m.index() * r;
    let adm = real(m.admittance());
    Ok([
        series_bessel(BesselKind::J, n, a, window, cap)?,
        series_bessel(BesselKind::H1, n, a, window, cap)?,
        series_bessel(BesselKind::Jp, n, a, window, cap)?.scale(adm),
        series_bessel(BesselKind::H1p, n, a, window, cap)?.scale(adm),
    ])
}

/// Log capacity large enough for the products and the `p22` inverse.
fn log_capacity(layers: usize, window: i32) -> usize {
    (2 * layers + 1) * (window.max(0) as usize + 4)
}

/// Labels of the coefficients that do not vanish identically for order `N`
/// with `L` layers.
///
/// Order 2 returns the fixed list `W_0^{1,0}, W_0^{2,0}, W_0^{2,1}, W_1^0,
/// W_1^{1,0}, W_1^{1,1}, W_2^0`. Other orders are found by extracting the
/// table for a few seeded random structures and keeping the entries that are
/// nonzero beyond rounding in any of them.
pub fn nonzero_coefficient_list(order: usize, layers: usize) -> Result<Vec<CoefficientLabel>> {
    if order == 2 {
        return Ok(vec![
            CoefficientLabel::correction(0, 1, 0),
            CoefficientLabel::correction(0, 2, 0),
            CoefficientLabel::correction(0, 2, 1),
            CoefficientLabel::leading(1),
            CoefficientLabel::correction(1, 1, 0),
            CoefficientLabel::correction(1, 1, 1),
            CoefficientLabel::leading(2),
        ]);
    }
    let samples = if layers == 0 { 1 } else { 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    let mut peak: Vec<(CoefficientLabel, f64)> = Vec::new();
    for _ in 0..samples {
        let s = random_insulated(layers, &mut rng)?;
        let table = extract_expansion(&s, order)?;
        let scale = table.entries().fold(1.0f64, |m, (_, c)| m.max(c.norm()));
        for (label, c) in table.entries() {
            let rel = c.norm() / scale;
            match peak.iter_mut().find(|(l, _)| *l == label) {
                Some(entry) => entry.1 = entry.1.max(rel),
                None => peak.push((label, rel)),
            }
        }
    }
    Ok(peak
        .into_iter()
        .filter(|(_, rel)| *rel > 1e-9)
        .map(|(label, _)| label)
        .collect())
}

/// Insulated structure with equispaced radii from 2 to 1 and log-uniform
/// materials in `[0.2, 5]`.
pub fn random_insulated<R: Rng>(layers: usize, rng: &mut R) -> Result<LayeredStructure<f64>> {
    let radii = equispaced_radii(layers);
    let span = 5f64.ln();
    let mats = (0..layers)
        .map(|_| Material::new(rng.gen_range(-span..span).exp(), rng.gen_range(-span..span).exp()))
        .collect();
    LayeredStructure::insulated(radii, mats)
}

/// `L + 1` radii evenly spaced from 2 down to the unit core.
pub fn equispaced_radii(layers: usize) -> Vec<f64> {
    if layers == 0 {
        return vec![1.0];
    }
    (0..=layers).map(|i| 2.0 - i as f64 / layers as f64).collect()
}
