//! Projected gradient descent over layer materials (and optionally radii)
//! minimizing the low-frequency expansion coefficients of an insulated
//! layered disk.
//!
//! Materials are optimized in logarithmic coordinates, so the box
//! `[lo, hi]` becomes `[ln lo, ln hi]` and a relative finite-difference step
//! becomes an absolute one. Free radii are carried as log-weights of the
//! annulus thicknesses between the outer radius and the core.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{extract_expansion, ExpansionTable, MAX_ORDER};
use crate::layered::{scattering_coefficient, LayeredStructure, Material};
use crate::scalar::Real;

/// Gradient norm below which a restart counts as converged.
const GRADIENT_FLOOR: f64 = 1e-12;

/// Box for the thickness log-weights when radii are free.
const RADIUS_WEIGHT_BOUND: f64 = 3.0;

/// Orders reported by [`sweep_report`].
pub const SWEEP_ORDERS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum RadiiSpec<T> {
    /// `L + 1` radii, outermost first, ending with the core radius.
    Fixed(Vec<T>),
    /// Outer and core radii fixed, interior interfaces free.
    Optimize { outer: T, core: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignProblem<T> {
    pub order: usize,
    pub layers: usize,
    pub radii: RadiiSpec<T>,
    /// Box `(lo, hi)` for every `μ_j`, `ε_j`.
    pub bounds: (T, T),
    /// Weight of each order `n = 0..=N`; empty means all ones.
    pub weights: Vec<T>,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial line-search step.
    pub step: T,
    /// Relative finite-difference step.
    pub grad_eps: T,
    /// Objective value counted as converged.
    pub tol: T,
}

impl<T: Real> DesignProblem<T> {
    /// Defaults: radii equispaced from 2 to 1, box `[0.05, 20]`, unit
    /// weights, 20 restarts of at most 400 iterations.
    pub fn new(order: usize, layers: usize) -> Self {
        let radii = if layers == 0 {
            vec![T::one()]
        } else {
            (0..=layers)
                .map(|i| T::lit(2.0) - T::from_usize_lossy(i) / T::from_usize_lossy(layers))
                .collect()
        };
        Self {
            order,
            layers,
            radii: RadiiSpec::Fixed(radii),
            bounds: (T::lit(0.05), T::lit(20.0)),
            weights: Vec::new(),
            seed: 0,
            restarts: 20,
            max_iters: 400,
            step: T::lit(0.1),
            grad_eps: T::lit(1e-6),
            tol: T::lit(1e-14),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.order > MAX_ORDER {
            return bad(format!("order {} exceeds {MAX_ORDER}", self.order));
        }
        let (lo, hi) = self.bounds;
        if !(lo > T::zero() && hi > lo && hi.is_finite()) {
            return bad(format!("bounds must satisfy 0 < lo < hi, got ({lo}, {hi})"));
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        if !(self.step > T::zero() && self.step.is_finite()) {
            return bad(format!("step must be finite and > 0, got {}", self.step));
        }
        if !(self.grad_eps > T::zero() && self.grad_eps < T::one()) {
            return bad(format!("grad_eps must lie in (0, 1), got {}", self.grad_eps));
        }
        if !(self.tol >= T::zero()) {
            return bad(format!("tol must be >= 0, got {}", self.tol));
        }
        if !self.weights.is_empty() {
            if self.weights.len() != self.order + 1 {
                return bad(format!(
                    "{} weights given for orders 0..={}",
                    self.weights.len(),
                    self.order
                ));
            }
            if self.weights.iter().any(|w| !(*w >= T::zero() && w.is_finite())) {
                return bad("weights must be finite and >= 0".into());
            }
        }
        match &self.radii {
            RadiiSpec::Fixed(r) => {
                if r.len() != self.layers + 1 {
                    return bad(format!("{} layers need {} radii, got {}", self.layers, self.layers + 1, r.len()));
                }
                LayeredStructure::insulated(r.clone(), vec![Material::vacuum(); self.layers])?;
            }
            RadiiSpec::Optimize { outer, core } => {
                if !(*core > T::zero() && outer > core && outer.is_finite()) {
                    return bad(format!("radii need 0 < core < outer, got ({core}, {outer})"));
                }
            }
        }
        Ok(())
    }

    /// Number of free coordinates.
    pub fn dimension(&self) -> usize {
        2 * self.layers + self.radius_dimension()
    }

    fn radius_dimension(&self) -> usize {
        match self.radii {
            RadiiSpec::Optimize { .. } if self.layers > 1 => self.layers - 1,
            _ => 0,
        }
    }

    /// Structure described by the coordinate vector.
    pub fn structure(&self, x: &[T]) -> Result<LayeredStructure<T>> {
        if x.len() != self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.dimension(),
                x.len()
            )));
        }
        let mats = x[..2 * self.layers]
            .chunks(2)
            .map(|c| Material::new(c[0].exp(), c[1].exp()))
            .collect();
        let radii = match &self.radii {
            RadiiSpec::Fixed(r) => r.clone(),
            RadiiSpec::Optimize { outer, core } => {
                // annulus thickness weights, the first one pinned to e^0
                let w: Vec<T> = std::iter::once(T::one())
                    .chain(x[2 * self.layers..].iter().map(|z| z.exp()))
                    .take(self.layers.max(1))
                    .collect();
                let total = w.iter().fold(T::zero(), |a, b| a + *b);
                let mut r = vec![*outer];
                let mut acc = *outer;
                for wi in w.iter().take(self.layers.saturating_sub(1)) {
                    acc = acc - (*outer - *core) * *wi / total;
                    r.push(acc);
                }
                if self.layers > 0 {
                    r.push(*core);
                } else {
                    r = vec![*core];
                }
                r
            }
        };
        LayeredStructure::insulated(radii, mats)
    }

    fn lower(&self) -> Vec<T> {
        let mut v = vec![self.bounds.0.ln(); 2 * self.layers];
        v.extend(std::iter::repeat(-T::lit(RADIUS_WEIGHT_BOUND)).take(self.radius_dimension()));
        v
    }

    fn upper(&self) -> Vec<T> {
        let mut v = vec![self.bounds.1.ln(); 2 * self.layers];
        v.extend(std::iter::repeat(T::lit(RADIUS_WEIGHT_BOUND)).take(self.radius_dimension()));
        v
    }

    fn project(&self, x: &mut [T]) {
        for ((v, lo), hi) in x.iter_mut().zip(self.lower()).zip(self.upper()) {
            *v = v.max(lo).min(hi);
        }
    }

    fn start(&self, restart: usize) -> Vec<T> {
        let dim = self.dimension();
        if restart == 0 {
            let mut x = vec![T::zero(); dim];
            self.project(&mut x);
            return x;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        self.lower()
            .into_iter()
            .zip(self.upper())
            .map(|(lo, hi)| {
                let (a, b) = (lo.to_f64().unwrap_or(0.0), hi.to_f64().unwrap_or(0.0));
                T::lit(rng.gen_range(a..=b))
            })
            .collect()
    }

    fn eval(&self, x: &[T]) -> T {
        self.structure(x)
            .and_then(|s| weighted_objective(&s, self.order, &self.weights))
            .ok()
            .filter(|f| f.is_finite())
            .unwrap_or_else(T::infinity)
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        let h = self.grad_eps;
        (0..x.len())
            .into_par_iter()
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] = xp[i] + h;
                xm[i] = xm[i] - h;
                (self.eval(&xp) - self.eval(&xm)) / (h + h)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult<T> {
    pub structure: LayeredStructure<T>,
    pub objective: T,
    pub table: ExpansionTable<T>,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, objective)` of the winning restart, one entry per accepted step.
    pub history: Vec<(usize, T)>,
    /// Index of the winning restart.
    pub restart: usize,
    /// Final coordinates (log-materials, then radius weights).
    pub coordinates: Vec<T>,
}

/// Unweighted objective: sum over `n = 0..=N` of the squared table entries.
pub fn objective<T: Real>(s: &LayeredStructure<T>, order: usize) -> Result<T> {
    weighted_objective(s, order, &[])
}

/// Objective with one weight per order; an empty slice means unit weights.
pub fn weighted_objective<T: Real>(s: &LayeredStructure<T>, order: usize, weights: &[T]) -> Result<T> {
    let table = extract_expansion(s, order)?;
    Ok(table_objective(&table, weights))
}

fn table_objective<T: Real>(table: &ExpansionTable<T>, weights: &[T]) -> T {
    table.rows().iter().fold(T::zero(), |acc, row| {
        let w = weights.get(row.n).copied().unwrap_or_else(T::one);
        acc + w * row.norm_sqr()
    })
}

struct Run<T> {
    x: Vec<T>,
    f: T,
    iterations: usize,
    converged: bool,
    history: Vec<(usize, T)>,
}

fn descend<T: Real>(p: &DesignProblem<T>, restart: usize) -> Run<T> {
    let mut x = p.start(restart);
    let mut f = p.eval(&x);
    let mut history = vec![(0, f)];
    let mut step = p.step;
    let mut converged = f < p.tol;
    let mut iterations = 0;
    if !f.is_finite() {
        return Run { x, f, iterations, converged, history };
    }
    let min_step = T::lit(1e-16);
    while iterations < p.max_iters && !converged {
        iterations += 1;
        let g = p.gradient(&x);
        let gnorm = g.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
        if !gnorm.is_finite() {
            break;
        }
        if gnorm < T::lit(GRADIENT_FLOOR) {
            converged = true;
            break;
        }
        let mut accepted = false;
        while step > min_step {
            let mut trial: Vec<T> = x.iter().zip(&g).map(|(v, d)| *v - step * *d).collect();
            p.project(&mut trial);
            let ft = p.eval(&trial);
            if ft < f {
                x = trial;
                f = ft;
                step = step + step;
                accepted = true;
                break;
            }
            step = step / T::lit(2.0);
        }
        if !accepted {
            break;
        }
        history.push((iterations, f));
        converged = f < p.tol;
    }
    Run { x, f, iterations, converged, history }
}

/// Best-of-restarts projected gradient descent. Deterministic for a given
/// problem, independent of thread count.
pub fn design<T: Real>(p: &DesignProblem<T>) -> Result<DesignResult<T>> {
    p.validate()?;
    let runs: Vec<Run<T>> = (0..p.restarts).into_par_iter().map(|r| descend(p, r)).collect();
    let mut best: Option<(usize, &Run<T>)> = None;
    for (i, run) in runs.iter().enumerate() {
        if !run.f.is_finite() {
            continue;
        }
        if best.map_or(true, |(_, b)| run.f < b.f) {
            best = Some((i, run));
        }
    }
    let Some((restart, run)) = best else {
        let first = &runs[0];
        return Err(Error::OptimizationFailed {
            best_objective: first.f.to_f64().unwrap_or(f64::NAN),
            best_parameters: first.x.iter().map(|v| v.exp().to_f64().unwrap_or(f64::NAN)).collect(),
        });
    };
    let structure = p.structure(&run.x)?;
    let table = extract_expansion(&structure, p.order)?;
    Ok(DesignResult {
        objective: table_objective(&table, &p.weights),
        structure,
        table,
        iterations: run.iterations,
        converged: run.converged,
        history: run.history.clone(),
        restart,
        coordinates: run.x.clone(),
    })
}

/// One `|W_n(t)|` entry of a frequency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEntry<T> {
    pub n: usize,
    pub t: T,
    pub w: Complex<T>,
}

/// `W_n(t)` for `n = 0..=4` at every `t`, computed directly with the
/// background wavenumber equal to `t`.
pub fn sweep_report<T: Real>(s: &LayeredStructure<T>, t_list: &[T]) -> Result<Vec<SweepEntry<T>>> {
    let mut out = Vec::with_capacity(t_list.len() * (SWEEP_ORDERS + 1));
    for &t in t_list {
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("sweep frequency must be > 0, got {t}")));
        }
        let omega = t / s.background().index();
        for n in 0..=SWEEP_ORDERS {
            out.push(SweepEntry { n, t, w: scattering_coefficient(s, omega, n as i32)? });
        }
    }
    Ok(out)
}
