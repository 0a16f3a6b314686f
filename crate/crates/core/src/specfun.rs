//! Integer-order cylinder functions `J_n`, `Y_n`, `H_n^(1)` and their
//! derivatives for real non-negative argument.
//!
//! `J_n` comes from Miller's backward recurrence normalized with
//! `J_0 + 2 Σ J_2k = 1`, which is stable for every order including the
//! large-order / small-argument corner the low-frequency analysis lives in.
//! `Y_0`, `Y_1` come from Neumann's series over the same `J` sequence for
//! `t <= 25` and from Hankel's asymptotic expansion beyond; higher orders use
//! forward recurrence, which is the stable direction for `Y`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Switch between Neumann's series and Hankel's asymptotic expansion for `Y_0`, `Y_1`.
const ASYMPTOTIC_THRESHOLD: f64 = 25.0;

/// `J_n`, `Y_n` and their derivatives at one `(n, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylFunValue<T> {
    pub order: i32,
    pub argument: T,
    pub j: T,
    pub y: T,
    pub jp: T,
    pub yp: T,
}

impl<T: Real> CylFunValue<T> {
    /// Evaluates all four functions at once. Requires `t > 0`.
    pub fn eval(n: i32, t: T) -> Result<Self> {
        check_positive(t)?;
        let order = n.unsigned_abs() as usize;
        let js = bessel_j_sequence(order.max(1), t)?;
        let ys = bessel_y_sequence(order.max(1), t)?;
        let (j, y, jp, yp) = if order == 0 {
            (js[0], ys[0], -js[1], -ys[1])
        } else {
            let nt = T::from_usize_lossy(order) / t;
            (
                js[order],
                ys[order],
                js[order - 1] - nt * js[order],
                ys[order - 1] - nt * ys[order],
            )
        };
        let sign = reflection_sign::<T>(n);
        Ok(Self {
            order: n,
            argument: t,
            j: sign * j,
            y: sign * y,
            jp: sign * jp,
            yp: sign * yp,
        })
    }

    pub fn h1(&self) -> Complex<T> {
        Complex::new(self.j, self.y)
    }

    pub fn h1p(&self) -> Complex<T> {
        Complex::new(self.jp, self.yp)
    }

    /// `|J Y' - J' Y - 2/(πt)| · πt/2`, zero for exact values.
    pub fn wronskian_residual(&self) -> T {
        let two = T::lit(2.0);
        let expected = two / (T::PI() * self.argument);
        ((self.j * self.yp - self.jp * self.y - expected) / expected).abs()
    }
}

/// `J_n(t)`. `t = 0` is allowed.
pub fn bessel_j<T: Real>(n: i32, t: T) -> Result<T> {
    check_finite(t)?;
    if t < T::zero() {
        return Err(Error::Domain(format!("J_n needs t >= 0, got {t}")));
    }
    if t == T::zero() {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    let order = n.unsigned_abs() as usize;
    let js = bessel_j_sequence(order, t)?;
    Ok(reflection_sign::<T>(n) * js[order])
}

/// `Y_n(t)` for `t > 0`.
pub fn bessel_y<T: Real>(n: i32, t: T) -> Result<T> {
    check_positive(t)?;
    let order = n.unsigned_abs() as usize;
    let ys = bessel_y_sequence(order, t)?;
    Ok(reflection_sign::<T>(n) * ys[order])
}

/// `J_n'(t)`. `t = 0` is allowed.
pub fn bessel_jp<T: Real>(n: i32, t: T) -> Result<T> {
    check_finite(t)?;
    if t == T::zero() {
        return Ok(match n {
            1 => T::lit(0.5),
            -1 => T::lit(-0.5),
            _ => T::zero(),
        });
    }
    Ok(CylFunValue::eval(n, t)?.jp)
}

pub fn bessel_yp<T: Real>(n: i32, t: T) -> Result<T> {
    Ok(CylFunValue::eval(n, t)?.yp)
}

/// `H_n^(1)(t) = J_n(t) + i Y_n(t)`.
pub fn hankel1<T: Real>(n: i32, t: T) -> Result<Complex<T>> {
    Ok(CylFunValue::eval(n, t)?.h1())
}

pub fn hankel1p<T: Real>(n: i32, t: T) -> Result<Complex<T>> {
    Ok(CylFunValue::eval(n, t)?.h1p())
}

/// `J_0(t) ..= J_nmax(t)` for `t > 0`.
pub fn bessel_j_sequence<T: Real>(nmax: usize, t: T) -> Result<Vec<T>> {
    check_positive(t)?;
    let mut js = miller_sequence(nmax, t);
    js.truncate(nmax + 1);
    Ok(js)
}

/// `Y_0(t) ..= Y_nmax(t)` for `t > 0`.
pub fn bessel_y_sequence<T: Real>(nmax: usize, t: T) -> Result<Vec<T>> {
    check_positive(t)?;
    let (y0, y1) = if t.to_f64().unwrap_or(f64::INFINITY) <= ASYMPTOTIC_THRESHOLD {
        neumann_y01(t)
    } else {
        let (_, y0) = hankel_asymptotic(0, t);
        let (_, y1) = hankel_asymptotic(1, t);
        (y0, y1)
    };
    let mut ys = Vec::with_capacity(nmax + 1);
    ys.push(y0);
    if nmax >= 1 {
        ys.push(y1);
    }
    for k in 1..nmax {
        let next = T::lit(2.0) * T::from_usize_lossy(k) / t * ys[k] - ys[k - 1];
        ys.push(next);
    }
    Ok(ys)
}

fn reflection_sign<T: Real>(n: i32) -> T {
    if n < 0 && n % 2 != 0 {
        -T::one()
    } else {
        T::one()
    }
}

fn check_finite<T: Real>(t: T) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("non-finite argument {t}")))
    }
}

fn check_positive<T: Real>(t: T) -> Result<()> {
    check_finite(t)?;
    if t > T::zero() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument must be > 0, got {t}")))
    }
}

/// Order of magnitude (base 10) of `J_n(x)` from the large-order asymptote.
fn envj(n: f64, x: f64) -> f64 {
    0.5 * (6.28 * n).log10() - n * (1.36 * x / n).log10()
}

/// Starting order for backward recurrence such that `J_k`, `k <= n`, carry
/// `digits` significant digits (Zhang & Jin's MSTA2 secant search).
fn miller_start(n: usize, x: f64, digits: f64) -> usize {
    let n = n.max(1) as f64;
    let half = 0.5 * digits;
    let ejn = envj(n, x);
    let (target, mut n0) = if ejn <= half {
        (digits, (1.1 * x).floor() + 1.0)
    } else {
        (half + ejn, n)
    };
    let mut f0 = envj(n0, x) - target;
    let mut n1 = n0 + 5.0;
    let mut f1 = envj(n1, x) - target;
    let mut nn = n1;
    for _ in 0..20 {
        nn = (n1 - (n1 - n0) / (1.0 - f0 / f1)).trunc();
        let f = envj(nn, x) - target;
        if (nn - n1).abs() < 1.0 {
            break;
        }
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    (nn as usize + 10).max(n as usize + 12)
}

/// Normalized `J_0 ..= J_m` from Miller's algorithm; `m >= nmax` is the
/// start order so trailing entries are only as accurate as they are small.
fn miller_sequence<T: Real>(nmax: usize, t: T) -> Vec<T> {
    let x = t.to_f64().unwrap_or(f64::MAX);
    let digits = (-T::precision().to_f64().unwrap_or(f64::EPSILON).log10()).ceil() + 1.0;
    let m = miller_start(nmax, x, digits);
    let big = T::rescale_threshold();
    let shrink = big.recip();
    let mut f = vec![T::zero(); m + 2];
    f[m] = T::one();
    let two_over_t = T::lit(2.0) / t;
    for k in (1..=m).rev() {
        let next = two_over_t * T::from_usize_lossy(k) * f[k] - f[k + 1];
        f[k - 1] = next;
        if next.abs() > big {
            for v in &mut f[k - 1..=m] {
                *v = *v * shrink;
            }
        }
    }
    let mut norm = f[0];
    let mut k = 2;
    while k <= m {
        norm = norm + T::lit(2.0) * f[k];
        k += 2;
    }
    f.truncate(m + 1);
    for v in &mut f {
        *v = *v / norm;
    }
    f
}

/// Neumann's series for `Y_0`, `Y_1` over the Miller `J` sequence.
fn neumann_y01<T: Real>(t: T) -> (T, T) {
    let js = miller_sequence(1, t);
    let m = js.len() - 1;
    let lg = (t / T::lit(2.0)).ln() + T::euler_gamma();
    let two_over_pi = T::lit(2.0) / T::PI();

    let mut even_sum = T::zero();
    let mut odd_sum = T::zero();
    let mut k = 1usize;
    while 2 * k <= m {
        let kt = T::from_usize_lossy(k);
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        even_sum = even_sum + sign * js[2 * k] / kt;
        if 2 * k < m {
            let w = T::from_usize_lossy(2 * k + 1) / (kt * (kt + T::one()));
            odd_sum = odd_sum + sign * w * js[2 * k + 1];
        }
        k += 1;
    }
    let y0 = two_over_pi * (lg * js[0] - T::lit(2.0) * even_sum);
    let y1 = two_over_pi * ((lg - T::one()) * js[1] - js[0] / t - odd_sum);
    (y0, y1)
}

/// Hankel's large-argument expansion for order 0 or 1; returns `(J, Y)`.
fn hankel_asymptotic<T: Real>(order: u32, t: T) -> (T, T) {
    let mu = T::lit(4.0 * f64::from(order * order));
    let eight_t = T::lit(8.0) * t;
    let eps = T::precision() * T::lit(0.1);
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..200usize {
        let odd = T::from_usize_lossy(2 * k - 1);
        term = term * (mu - odd * odd) / (T::from_usize_lossy(k) * eight_t);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // k odd feeds Q with sign (-1)^((k-1)/2); k even feeds P with (-1)^(k/2).
        match k % 4 {
            1 => q = q + term,
            2 => p = p - term,
            3 => q = q - term,
            _ => p = p + term,
        }
        if term.abs() < eps {
            break;
        }
    }
    let chi = t - (T::lit(0.5) * T::lit(f64::from(order)) + T::lit(0.25)) * T::PI();
    let amp = (T::lit(2.0) / (T::PI() * t)).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ascending series `Σ (-1)^l (t/2)^(n+2l) / (l! (n+l)!)`, 30 terms.
    fn j_series(n: u32, t: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = (t / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        for l in 0..30u32 {
            sum += term;
            term *= -(t * t / 4.0) / (f64::from(l + 1) * f64::from(n + l + 1));
        }
        sum
    }

    fn digamma_int(m: u32) -> f64 {
        -EULER_GAMMA_F64 + (1..m).map(|k| 1.0 / f64::from(k)).sum::<f64>()
    }

    const EULER_GAMMA_F64: f64 = crate::scalar::EULER_GAMMA;

    /// The three-group small-argument expansion of `Y_n`.
    fn y_series(n: u32, t: f64) -> f64 {
        let half = t / 2.0;
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        let mut head = 0.0;
        for l in 0..n {
            head += fact(n - l - 1) / fact(l) * (t * t / 4.0).powi(l as i32);
        }
        head *= -half.powi(-(n as i32)) / std::f64::consts::PI;
        let log_part = 2.0 / std::f64::consts::PI * half.ln() * j_series(n, t);
        let mut tail = 0.0;
        for l in 0..40u32 {
            let term = (digamma_int(l + 1) + digamma_int(n + l + 1)) * (-t * t / 4.0).powi(l as i32)
                / (fact(l) * fact(n + l));
            tail += term;
            if term.abs() < 1e-30 {
                break;
            }
        }
        tail *= -half.powi(n as i32) / std::f64::consts::PI;
        head + log_part + tail
    }

    #[test]
    fn j_at_zero() {
        assert_eq!(bessel_j(0, 0.0f64).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0f64).unwrap(), 0.0);
        assert_eq!(bessel_j(-3, 0.0f64).unwrap(), 0.0);
    }

    #[test]
    fn j_matches_ascending_series() {
        let expected = j_series(5, 2.0);
        let got = bessel_j(5, 2.0f64).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-13, "{got} vs {expected}");
        for &(n, t) in &[(0u32, 0.3), (1, 1.7), (3, 4.0), (12, 0.5), (7, 6.5)] {
            let e = j_series(n, t);
            let g = bessel_j(n as i32, t).unwrap();
            assert!(((g - e) / e).abs() < 1e-12, "n={n} t={t}: {g} vs {e}");
        }
    }

    #[test]
    fn y_matches_double_sum_expansion() {
        let expected = y_series(2, 1.0);
        let got = bessel_y(2, 1.0f64).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-13, "{got} vs {expected}");
        for &(n, t) in &[(0u32, 0.2), (1, 0.9), (3, 2.5), (6, 1.1)] {
            let e = y_series(n, t);
            let g = bessel_y(n as i32, t).unwrap();
            assert!(((g - e) / e).abs() < 1e-12, "n={n} t={t}: {g} vs {e}");
        }
    }

    #[test]
    fn y0_small_argument_log_behaviour() {
        let t = 1e-6f64;
        let leading = 2.0 / std::f64::consts::PI * ((t / 2.0).ln() + EULER_GAMMA_F64);
        let got = bessel_y(0, t).unwrap();
        assert!((got - leading).abs() < 1e-10);
    }

    #[test]
    fn y_rejects_non_positive() {
        assert!(matches!(bessel_y(0, 0.0f64), Err(Error::Domain(_))));
        assert!(matches!(bessel_y(1, -1.0f64), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(1, f64::NAN), Err(Error::InvalidArgument(_))));
        assert!(matches!(bessel_j(1, f64::INFINITY), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn wronskian_at_reference_point() {
        let v = CylFunValue::eval(3, 0.7f64).unwrap();
        assert!(v.wronskian_residual() < 1e-12);
    }

    #[test]
    fn hankel_large_argument() {
        let t = 200.0f64;
        let h = hankel1(0, t).unwrap();
        let asym = Complex::from_polar((2.0 / (std::f64::consts::PI * t)).sqrt(), t - std::f64::consts::FRAC_PI_4);
        let rel = (h - asym).norm() / h.norm();
        // difference is O(1/t)
        assert!(rel < 1.0 / t, "rel {rel}");
        assert!(rel > 1e-6);
    }

    #[test]
    fn h1p_zero_is_minus_h1_one() {
        for &t in &[0.01, 0.5, 3.0, 40.0] {
            let a = hankel1p(0, t).unwrap();
            let b = -hankel1(1, t).unwrap();
            assert!((a - b).norm() <= 1e-15 * b.norm());
        }
    }

    #[test]
    fn jp_matches_finite_difference() {
        let h = 1e-6;
        let fd = (bessel_j(3, 1.5 + h).unwrap() - bessel_j(3, 1.5 - h).unwrap()) / (2.0 * h);
        let jp = bessel_jp(3, 1.5f64).unwrap();
        assert!((jp - fd).abs() < 1e-8);
    }

    #[test]
    fn jp_at_zero() {
        assert_eq!(bessel_jp(1, 0.0f64).unwrap(), 0.5);
        assert_eq!(bessel_jp(-1, 0.0f64).unwrap(), -0.5);
        assert_eq!(bessel_jp(2, 0.0f64).unwrap(), 0.0);
    }

    #[test]
    fn negative_order_reflection() {
        for n in 1..12 {
            let p = CylFunValue::eval(n, 2.3f64).unwrap();
            let m = CylFunValue::eval(-n, 2.3f64).unwrap();
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(m.j, s * p.j);
            assert_eq!(m.y, s * p.y);
            assert_eq!(m.jp, s * p.jp);
            assert_eq!(m.yp, s * p.yp);
        }
    }

    #[test]
    fn single_precision_is_usable() {
        let j = bessel_j(2, 1.0f32).unwrap();
        let y = bessel_y(2, 1.0f32).unwrap();
        assert!((f64::from(j) - 0.114_903_484_931_900_5).abs() < 1e-6);
        assert!((f64::from(y) + 1.650_682_606_816_254).abs() < 1e-5);
    }
}
