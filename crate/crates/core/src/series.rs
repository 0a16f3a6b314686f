//! Truncated series `Σ c_{k,j} t^k (ln t)^j` with `ln t` kept as a formal symbol.
//!
//! Every series carries the highest power `kmax` through which its
//! coefficients are exact; arithmetic propagates that window and reads past
//! it are refused. Logarithmic powers are bounded by a capacity, and
//! producing a nonzero coefficient beyond it is an error rather than a
//! silent truncation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Relative size below which log terms at the leading power are treated as
/// rounding residue when inverting.
const LOG_RESIDUE: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLogSeries<T> {
    kmin: i32,
    kmax: i32,
    cap: usize,
    /// `coeff[k - kmin][j]`, each row `cap + 1` long.
    coeff: Vec<Vec<Complex<T>>>,
}

impl<T: Real> PowerLogSeries<T> {
    /// All-zero series storing powers `kmin..=kmax`, exact through `kmax`.
    pub fn zeros(kmin: i32, kmax: i32, cap: usize) -> Self {
        let kmin = kmin.min(kmax);
        let rows = (kmax - kmin + 1) as usize;
        Self {
            kmin,
            kmax,
            cap,
            coeff: vec![vec![zero(); cap + 1]; rows],
        }
    }

    /// `c · t^k (ln t)^j`, exact through `kmax`.
    pub fn monomial(c: Complex<T>, k: i32, j: usize, kmax: i32, cap: usize) -> Result<Self> {
        if j > cap {
            return Err(Error::TruncationCapacity { capacity: cap, needed: j });
        }
        let mut s = Self::zeros(k, kmax, cap);
        if k <= kmax {
            s.coeff[0][j] = c;
        }
        Ok(s)
    }

    pub fn constant(c: Complex<T>, kmax: i32, cap: usize) -> Self {
        Self::monomial(c, 0, 0, kmax, cap).expect("j = 0 always fits")
    }

    pub fn kmin(&self) -> i32 {
        self.kmin
    }

    /// Highest power with exact coefficients.
    pub fn kmax(&self) -> i32 {
        self.kmax
    }

    /// Log-power capacity.
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficient of `t^k (ln t)^j`.
    pub fn coeff(&self, k: i32, j: usize) -> Result<Complex<T>> {
        if k > self.kmax {
            return Err(Error::WindowExceeded { power: k, valid: self.kmax });
        }
        if k < self.kmin || j > self.cap {
            return Ok(zero());
        }
        Ok(self.coeff[(k - self.kmin) as usize][j])
    }

    /// Adds `c` to the coefficient of `t^k (ln t)^j`.
    pub fn add_term(&mut self, k: i32, j: usize, c: Complex<T>) -> Result<()> {
        if k > self.kmax {
            return Err(Error::WindowExceeded { power: k, valid: self.kmax });
        }
        if j > self.cap {
            if c == zero() {
                return Ok(());
            }
            return Err(Error::TruncationCapacity { capacity: self.cap, needed: j });
        }
        if k < self.kmin {
            let extra = (self.kmin - k) as usize;
            let mut rows = vec![vec![zero(); self.cap + 1]; extra];
            rows.append(&mut self.coeff);
            self.coeff = rows;
            self.kmin = k;
        }
        let slot = &mut self.coeff[(k - self.kmin) as usize][j];
        *slot = *slot + c;
        Ok(())
    }

    /// Lowest power with a nonzero coefficient, or `kmax + 1` for a series
    /// that vanishes throughout its window.
    pub fn leading_power(&self) -> i32 {
        self.coeff
            .iter()
            .position(|row| row.iter().any(|c| *c != zero()))
            .map(|p| self.kmin + p as i32)
            .unwrap_or(self.kmax + 1)
    }

    /// Highest log power carried by a nonzero coefficient.
    pub fn log_degree(&self) -> usize {
        self.coeff
            .iter()
            .filter_map(|row| row.iter().rposition(|c| *c != zero()))
            .max()
            .unwrap_or(0)
    }

    /// Nonzero terms `(k, j, c)` in increasing `k`, then `j`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, usize, Complex<T>)> + '_ {
        self.coeff.iter().enumerate().flat_map(move |(p, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| **c != zero())
                .map(move |(j, c)| (self.kmin + p as i32, j, *c))
        })
    }

    /// Drops coefficients above `kmax` and shrinks the window accordingly.
    pub fn truncated(&self, kmax: i32) -> Self {
        if kmax >= self.kmax {
            return self.clone();
        }
        let mut out = Self::zeros(self.kmin.min(kmax), kmax, self.cap);
        for (k, j, c) in self.terms().filter(|(k, _, _)| *k <= kmax) {
            out.coeff[(k - out.kmin) as usize][j] = c;
        }
        out
    }

    /// Same series with a different log capacity.
    pub fn with_cap(&self, cap: usize) -> Result<Self> {
        let needed = self.log_degree();
        if needed > cap {
            return Err(Error::TruncationCapacity { capacity: cap, needed });
        }
        let mut out = Self::zeros(self.kmin, self.kmax, cap);
        for (k, j, c) in self.terms() {
            out.coeff[(k - out.kmin) as usize][j] = c;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        let kmax = self.kmax.min(other.kmax);
        let cap = self.cap.max(other.cap);
        let mut out = Self::zeros(self.kmin.min(other.kmin), kmax, cap);
        for (k, j, c) in self.terms().filter(|(k, _, _)| *k <= kmax) {
            out.add_term(k, j, c)?;
        }
        for (k, j, c) in other.terms().filter(|(k, _, _)| *k <= kmax) {
            out.add_term(k, j, c * sign)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeff {
            for v in row.iter_mut() {
                *v = *v * c;
            }
        }
        out
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        let mut out = self.clone();
        out.kmin += shift;
        out.kmax += shift;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let la = self.leading_power();
        let lb = other.leading_power();
        let kmax = (self.kmax + lb).min(other.kmax + la);
        let cap = self.cap.max(other.cap);
        let kmin = (la + lb).min(kmax);
        let mut out = Self::zeros(kmin, kmax, cap);
        let rhs: Vec<_> = other.terms().collect();
        for (ka, ja, ca) in self.terms() {
            for &(kb, jb, cb) in &rhs {
                let k = ka + kb;
                if k > kmax {
                    break;
                }
                let j = ja + jb;
                if j > cap {
                    return Err(Error::TruncationCapacity { capacity: cap, needed: j });
                }
                let slot = &mut out.coeff[(k - kmin) as usize][j];
                *slot = *slot + ca * cb;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse. The leading power must carry a log-free
    /// nonzero coefficient.
    pub fn inv(&self) -> Result<Self> {
        let lead = self.leading_power();
        if lead > self.kmax {
            return Err(Error::NotInvertible("series vanishes throughout its window".into()));
        }
        let row = &self.coeff[(lead - self.kmin) as usize];
        let c0 = row[0];
        if c0 == zero() {
            return Err(Error::NotInvertible(format!(
                "leading power t^{lead} carries only logarithmic terms"
            )));
        }
        let residue = row.iter().skip(1).fold(T::zero(), |m, c| m.max(c.norm()));
        if residue > T::lit(LOG_RESIDUE) * c0.norm() {
            return Err(Error::NotInvertible(format!(
                "leading power t^{lead} is log-contaminated"
            )));
        }
        let window = self.kmax - lead;
        let inv_c0 = Complex::new(T::one(), T::zero()) / c0;
        // u = a / (c0 t^lead) - 1, powers 1..=window
        let mut u = Self::zeros(1, window, self.cap);
        for (k, j, c) in self.terms() {
            if k > lead && k <= self.kmax {
                u.coeff[(k - lead - 1) as usize][j] = c * inv_c0;
            }
        }
        let one = Self::constant(Complex::new(T::one(), T::zero()), window, self.cap);
        let mut r = one.clone();
        for _ in 0..window {
            r = one.sub(&u.mul(&r)?)?;
        }
        Ok(r.truncated(window).scale(inv_c0).shift(-lead))
    }

    /// Term-wise `d/dt`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zeros(self.kmin - 1, self.kmax - 1, self.cap);
        for (k, j, c) in self.terms() {
            let kt = T::from_i32_lossy(k);
            if k != 0 {
                let slot = &mut out.coeff[(k - 1 - out.kmin) as usize][j];
                *slot = *slot + c * kt;
            }
            if j > 0 {
                let slot = &mut out.coeff[(k - 1 - out.kmin) as usize][j - 1];
                *slot = *slot + c * T::from_usize_lossy(j);
            }
        }
        out
    }

    /// Point evaluation at `t > 0` of the stored terms.
    pub fn eval(&self, t: T) -> Complex<T> {
        let lt = t.ln();
        self.terms().fold(zero(), |acc, (k, j, c)| {
            acc + c * (t.powi(k) * lt.powi(j as i32))
        })
    }
}

#[inline]
fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Which cylinder function [`series_bessel`] expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J,
    Y,
    H1,
    /// `J_n'` evaluated at `a t` (derivative with respect to the argument).
    Jp,
    Yp,
    H1p,
}

/// Small-argument series in `t` of the cylinder function of order `n`
/// evaluated at `a t`, exact through at least `t^kmax`.
pub fn series_bessel<T: Real>(kind: BesselKind, n: i32, a: T, kmax: i32, cap: usize) -> Result<PowerLogSeries<T>> {
    if !(a.is_finite() && a > T::zero()) {
        return Err(Error::InvalidArgument(format!("series scale must be finite and > 0, got {a}")));
    }
    if cap < 1 && !matches!(kind, BesselKind::J | BesselKind::Jp) {
        return Err(Error::TruncationCapacity { capacity: cap, needed: 1 });
    }
    let order = n.unsigned_abs() as i32;
    let sign = if n < 0 && order % 2 == 1 { -T::one() } else { T::one() };
    let s = match kind {
        BesselKind::J => j_series(order, a, kmax, cap),
        BesselKind::Y => y_series(order, a, kmax, cap)?,
        BesselKind::H1 => h1_series(order, a, kmax, cap)?,
        BesselKind::Jp => j_series(order, a, kmax + 1, cap).derivative().scale(real(a.recip())),
        BesselKind::Yp => y_series(order, a, kmax + 1, cap)?.derivative().scale(real(a.recip())),
        BesselKind::H1p => h1_series(order, a, kmax + 1, cap)?.derivative().scale(real(a.recip())),
    };
    Ok(s.scale(real(sign)))
}

/// Number of `l` terms so that `order + 2 l_max >= kmax`.
fn term_count(order: i32, kmax: i32) -> i32 {
    ((kmax - order).max(0) + 1) / 2 + 1
}

fn factorial<T: Real>(m: i32) -> T {
    (1..=m).fold(T::one(), |acc, k| acc * T::from_i32_lossy(k))
}

/// `ψ(m)` for positive integer `m`.
fn digamma<T: Real>(m: i32) -> T {
    (1..m).fold(-T::euler_gamma(), |acc, k| acc + T::from_i32_lossy(k).recip())
}

/// `(J coefficient at t^(order+2l))` for `l = 0..count`.
fn j_coefficients<T: Real>(order: i32, a: T, count: i32) -> Vec<T> {
    let half = a / T::lit(2.0);
    let quarter_sq = half * half;
    let mut c = half.powi(order) / factorial::<T>(order);
    let mut out = Vec::with_capacity(count as usize);
    for l in 0..count {
        out.push(c);
        c = -c * quarter_sq / (T::from_i32_lossy(l + 1) * T::from_i32_lossy(order + l + 1));
    }
    out
}

fn j_series<T: Real>(order: i32, a: T, kmax: i32, cap: usize) -> PowerLogSeries<T> {
    let count = term_count(order, kmax);
    let valid = order + 2 * (count - 1) + 1;
    let mut s = PowerLogSeries::zeros(order, valid, cap);
    for (l, c) in j_coefficients(order, a, count).into_iter().enumerate() {
        s.coeff[2 * l][0] = real(c);
    }
    s
}

fn y_series<T: Real>(order: i32, a: T, kmax: i32, cap: usize) -> Result<PowerLogSeries<T>> {
    let count = term_count(order, kmax);
    let valid = order + 2 * (count - 1) + 1;
    let mut s = PowerLogSeries::zeros(-order, valid, cap);
    let pi = T::PI();
    let half = a / T::lit(2.0);
    // -(1/π) Σ_{l<n} (n-l-1)!/l! (at/2)^(2l-n)
    for l in 0..order {
        let c = -factorial::<T>(order - l - 1) / factorial::<T>(l) * half.powi(2 * l - order) / pi;
        s.add_term(2 * l - order, 0, real(c))?;
    }
    // (2/π) ln(at/2) J_n(at) - (1/π) Σ (ψ(l+1)+ψ(n+l+1)) (-1)^l (at/2)^(n+2l) / (l!(n+l)!)
    let two_over_pi = T::lit(2.0) / pi;
    let log_shift = half.ln();
    for (l, c) in j_coefficients(order, a, count).into_iter().enumerate() {
        let l = l as i32;
        let k = order + 2 * l;
        let psi = digamma::<T>(l + 1) + digamma::<T>(order + l + 1);
        s.add_term(k, 1, real(two_over_pi * c))?;
        s.add_term(k, 0, real(two_over_pi * log_shift * c - psi * c / pi))?;
    }
    Ok(s)
}

fn h1_series<T: Real>(order: i32, a: T, kmax: i32, cap: usize) -> Result<PowerLogSeries<T>> {
    let j = j_series(order, a, kmax, cap);
    let y = y_series(order, a, kmax, cap)?;
    j.add(&y.scale(Complex::new(T::zero(), T::one())))
}
