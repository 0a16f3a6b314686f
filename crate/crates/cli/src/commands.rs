use std::path::Path;

use anyhow::Result;
use cloakforge::bie::{scattering_coefficient_bie, DiskScatterer};
use cloakforge::designer::{design, sweep_report, DesignResult};
use cloakforge::expansion::{extract_expansion, nonzero_coefficient_list, ExpansionTable};
use cloakforge::layered::{
    scale_structure, scattering_coefficient, Core, LayeredStructure, ScatteringSpectrum, OPTICAL_THEOREM_FACTOR,
};
use cloakforge::scalar::Quad;
use cloakforge::transform::{sample_grid, PolarGrid, RadialMap};
use num_complex::Complex;
use num_traits::{Float, ToPrimitive};
use serde_json::{json, Value};

use crate::config::*;
use crate::output::{num, Cell, Table};
use crate::svg::{Body, Chart};

/// What a command produced: the data table, an optional structured JSON
/// form, and the charts drawn from the table.
pub struct Output {
    pub table: Table,
    pub json: Option<Value>,
    pub charts: Vec<Chart>,
    /// `false` when a verification check failed.
    pub verified: bool,
}

impl Output {
    fn new(table: Table) -> Self {
        Self { table, json: None, charts: Vec::new(), verified: true }
    }
}

fn complex_cells(w: Complex<f64>) -> [Cell; 3] {
    [w.re.into(), w.im.into(), w.norm().into()]
}

fn structure_json(s: &LayeredStructure<f64>) -> Value {
    let spec = StructureSpec::from_structure(s);
    let mat = |m: &MaterialSpec| json!({"mu": num(m.mu), "eps": num(m.eps)});
    json!({
        "radii": spec.radii.iter().map(|r| num(*r)).collect::<Vec<_>>(),
        "layers": spec.layers.iter().map(mat).collect::<Vec<_>>(),
        "core": match spec.core {
            CoreSpec::Neumann => json!({"type": "neumann"}),
            CoreSpec::Penetrable { mu, eps } => json!({"type": "penetrable", "mu": num(mu), "eps": num(eps)}),
        },
        "background": mat(&spec.background),
    })
}

pub fn coeffs(c: &CoeffsConfig, base: &Path) -> Result<Output> {
    c.validate()?;
    let s = c.resolve(base)?;
    let mut table = Table::new(vec!["omega", "n", "re", "im", "abs"]);
    let mut series = Vec::new();
    for &omega in &c.omegas {
        let spec = ScatteringSpectrum::compute(&s, omega, c.n_max)?;
        let mut pts = Vec::new();
        for (n, w) in spec.coefficients().iter().enumerate() {
            let [re, im, abs] = complex_cells(*w);
            table.push(vec![omega.into(), n.into(), re, im, abs]);
            pts.push((n as f64, w.norm()));
        }
        series.push((format!("ω = {omega}"), pts));
    }
    let mut out = Output::new(table);
    out.charts.push(Chart {
        title: "scattering coefficients".into(),
        x_label: "n".into(),
        y_label: "|W_n|".into(),
        body: Body::Lines { series },
    });
    Ok(out)
}

fn expansion_rows(table: &ExpansionTable<f64>, all: bool) -> Result<Vec<(String, usize, usize, usize, Complex<f64>)>> {
    let listed = nonzero_coefficient_list(table.order(), table.layer_count().max(1))?;
    Ok(table
        .entries()
        .filter(|(l, _)| all || listed.contains(l))
        .map(|(l, c)| (l.to_string(), l.n, l.l, l.j, c))
        .collect())
}

pub fn expand(c: &ExpandConfig, base: &Path) -> Result<Output> {
    let s = c.resolve(base)?;
    let table = extract_expansion(&s, c.order)?;
    let rows = expansion_rows(&table, c.all_entries)?;
    let mut t = Table::new(vec!["label", "n", "l", "j", "re", "im", "abs"]);
    for (label, n, l, j, w) in &rows {
        let [re, im, abs] = complex_cells(*w);
        t.push(vec![label.clone().into(), (*n).into(), (*l).into(), (*j).into(), re, im, abs]);
    }
    let mut out = Output::new(t);
    out.json = Some(json!({
        "order": c.order,
        "layers": s.layer_count(),
        "off_shape": num(table.off_shape_magnitude()),
        "coefficients": out.table.to_json(),
    }));
    out.charts.push(Chart {
        title: format!("expansion coefficients, N = {}", c.order),
        x_label: "coefficient".into(),
        y_label: "magnitude".into(),
        body: Body::Bars {
            categories: rows.iter().map(|r| r.0.clone()).collect(),
            series: vec![(format!("L = {}", s.layer_count()), rows.iter().map(|r| r.4.norm()).collect())],
        },
    });
    Ok(out)
}

pub fn sweep(c: &SweepConfig, base: &Path) -> Result<Output> {
    c.validate()?;
    let s = c.resolve(base)?;
    let rows = sweep_report(&s, &c.t)?;
    let mut t = Table::new(vec!["n", "t", "re", "im", "abs"]);
    for e in &rows {
        let [re, im, abs] = complex_cells(e.w);
        t.push(vec![e.n.into(), e.t.into(), re, im, abs]);
    }
    let mut out = Output::new(t);
    out.charts = c
        .t
        .iter()
        .map(|&tv| Chart {
            title: format!("t = {tv}"),
            x_label: "n".into(),
            y_label: "|W_n|".into(),
            body: Body::Lines {
                series: vec![(
                    format!("L = {}", s.layer_count()),
                    rows.iter().filter(|e| e.t == tv).map(|e| (e.n as f64, e.w.norm())).collect(),
                )],
            },
        })
        .collect();
    Ok(out)
}

fn design_json(r: &DesignResult<f64>) -> Result<Value> {
    Ok(json!({
        "objective": num(r.objective),
        "iterations": r.iterations,
        "converged": r.converged,
        "restart": r.restart,
        "structure": structure_json(&r.structure),
        "history": r.history.iter().map(|(i, f)| json!([i, num(*f)])).collect::<Vec<_>>(),
        "coefficients": r.table.entries().map(|(l, c)| json!({
            "label": l.to_string(), "re": num(c.re), "im": num(c.im), "abs": num(c.norm()),
        })).collect::<Vec<_>>(),
    }))
}

pub fn design_cmd(c: &DesignConfig, seed: Option<u64>) -> Result<Output> {
    let p = c.problem(seed)?;
    let r = design(&p)?;
    let mut t = Table::new(vec!["field", "index", "value"]);
    t.push(vec!["objective".into(), Cell::Empty, r.objective.into()]);
    t.push(vec!["iterations".into(), Cell::Empty, r.iterations.into()]);
    t.push(vec!["converged".into(), Cell::Empty, r.converged.into()]);
    t.push(vec!["restart".into(), Cell::Empty, r.restart.into()]);
    for (i, rad) in r.structure.radii().iter().enumerate() {
        t.push(vec!["radius".into(), i.into(), (*rad).into()]);
    }
    for (j, m) in r.structure.layers().iter().enumerate() {
        t.push(vec!["mu".into(), (j + 1).into(), m.mu.into()]);
        t.push(vec!["eps".into(), (j + 1).into(), m.eps.into()]);
    }
    for (i, f) in &r.history {
        t.push(vec!["history".into(), (*i).into(), (*f).into()]);
    }
    let mut out = Output::new(t);
    out.json = Some(design_json(&r)?);
    out.charts.push(Chart {
        title: format!("descent, N = {}, L = {}", p.order, p.layers),
        x_label: "iteration".into(),
        y_label: "objective".into(),
        body: Body::Lines { series: vec![(format!("restart {}", r.restart), r.history.iter().map(|(i, f)| (*i as f64, *f)).collect())] },
    });
    Ok(out)
}

pub fn pushforward(c: &PushforwardConfig, base: &Path) -> Result<Output> {
    c.validate()?;
    let s = c.resolve(base)?;
    let map = RadialMap::new(c.rho)?;
    let grid = PolarGrid { r_min: c.r_min, r_max: c.r_max, radial_nodes: c.radial_nodes, angular_nodes: c.angular_nodes };
    let samples = sample_grid(&map, &s, &grid)?;
    let mut t = Table::new(vec![
        "radius", "angle", "a11", "a12", "a22", "q", "mu11", "mu12", "mu22", "radial", "tangential",
    ]);
    for p in &samples {
        t.push(vec![
            p.radius.into(),
            p.angle.into(),
            p.a_push[0][0].into(),
            p.a_push[0][1].into(),
            p.a_push[1][1].into(),
            p.q_push.into(),
            p.mu_push[0][0].into(),
            p.mu_push[0][1].into(),
            p.mu_push[1][1].into(),
            p.radial.into(),
            p.tangential.into(),
        ]);
    }
    let ray: Vec<_> = samples.iter().step_by(c.angular_nodes).collect();
    let line = |f: fn(&cloakforge::transform::TensorFieldSample<f64>) -> f64| ray.iter().map(|p| (p.radius, f(p))).collect();
    let mut out = Output::new(t);
    out.charts.push(Chart {
        title: format!("pushed coefficients, ρ = {}", c.rho),
        x_label: "|y|".into(),
        y_label: "value".into(),
        body: Body::Lines {
            series: vec![
                ("radial A".into(), line(|p| p.radial)),
                ("tangential A".into(), line(|p| p.tangential)),
                ("q".into(), line(|p| p.q_push)),
            ],
        },
    });
    Ok(out)
}

fn quad(v: f64) -> Quad {
    Quad::from(v)
}

/// Largest relative gap of `W_n(scale(s, ρ), ω) = W_n(s, ρω)` in 113-bit arithmetic.
fn scaling_gap(s: &LayeredStructure<f64>, scales: &[f64], omegas: &[f64], n_max: usize) -> Result<f64> {
    let q: LayeredStructure<Quad> = s.cast();
    let mut worst = 0.0f64;
    for &rho in scales {
        let scaled = scale_structure(&q, quad(rho))?;
        for &omega in omegas {
            for n in 0..=n_max as i32 {
                let a = scattering_coefficient(&scaled, quad(omega), n)?;
                let b = scattering_coefficient(&q, quad(rho) * quad(omega), n)?;
                let gap = (a - b).norm();
                if gap > quad(0.0) {
                    worst = worst.max((gap / a.norm().max(b.norm())).to_f64().unwrap_or(f64::INFINITY));
                }
            }
        }
    }
    Ok(worst)
}

/// Smallest margin of the remainder slope over the order the table promises.
fn expansion_margin(s: &LayeredStructure<f64>, order: usize) -> Result<f64> {
    let q: LayeredStructure<Quad> = s.cast();
    let table = extract_expansion(&q, order)?;
    let mut margin = f64::INFINITY;
    for n in 0..=order {
        let rem = |t: f64| -> Result<f64> {
            let t = quad(t);
            let w = scattering_coefficient(&q, t, n as i32)?;
            let e = table.evaluate(n, t).expect("order within table");
            Ok(((w - e).norm() / t.powi(2 * n as i32)).to_f64().unwrap_or(f64::NAN))
        };
        let (a, b) = (rem(1e-3)?, rem(1e-4)?);
        if a == 0.0 || b == 0.0 {
            continue;
        }
        let slope = (a / b).log10();
        margin = margin.min(slope - (2.0 * (order - n) as f64 + 1.5));
    }
    Ok(margin)
}

pub fn verify(c: &VerifyConfig, base: &Path) -> Result<Output> {
    c.validate()?;
    let s = c.resolve(base)?;
    let mut t = Table::new(vec!["check", "value", "tolerance", "pass"]);
    let mut all = true;
    let mut check = |name: &str, value: f64, tol: f64, pass: bool| {
        all &= pass;
        t.push(vec![name.into(), value.into(), tol.into(), pass.into()]);
    };

    let mut residual = 0.0f64;
    for &omega in &c.omegas {
        let spec = ScatteringSpectrum::compute(&s, omega, c.n_max.max(40))?;
        residual = residual.max(spec.energy_residual(OPTICAL_THEOREM_FACTOR));
    }
    check("optical_theorem", residual, 1e-9, residual < 1e-9);

    let gap = scaling_gap(&s, &c.scales, &c.omegas, c.n_max)?;
    check("scaling_identity", gap, 1e-12, gap < 1e-12);

    let mut symmetric = 0.0f64;
    for &omega in &c.omegas {
        for n in 1..=c.n_max as i32 {
            let d = scattering_coefficient(&s, omega, n)? - scattering_coefficient(&s, omega, -n)?;
            symmetric = symmetric.max(d.norm());
        }
    }
    check("even_in_n", symmetric, 0.0, symmetric == 0.0);

    if let (0, Core::Penetrable(inside)) = (s.layer_count(), s.core()) {
        let mut worst = 0.0f64;
        for &omega in &c.omegas {
            let d = DiskScatterer::new(s.outer_radius(), inside, s.background(), omega)?;
            for n in -(c.n_max as i32)..=c.n_max as i32 {
                let a = scattering_coefficient_bie(&d, n, n)?;
                let b = scattering_coefficient(&s, omega, n)?;
                worst = worst.max((a - b).norm() / (1.0 + b.norm()));
            }
        }
        check("boundary_integral", worst, 1e-10, worst < 1e-10);
    }

    if s.is_neumann() {
        let margin = expansion_margin(&s, 2)?;
        check("expansion_remainder_margin", margin, 0.0, margin > 0.0);
    }

    let mut out = Output::new(t);
    out.verified = all;
    Ok(out)
}

/// Figure 1 (expansion coefficients per structure) and Figure 2 (`|W_n(t)|`).
pub struct Figures {
    pub coefficients: Output,
    pub sweep: Output,
}

pub fn figures(c: &FiguresConfig) -> Result<Figures> {
    c.validate()?;
    let built = c
        .structures
        .iter()
        .map(|l| Ok((l.label.clone(), l.structure.build("structures")?)))
        .collect::<Result<Vec<_>>>()?;
    let listed = nonzero_coefficient_list(c.order, 2)?;

    let mut t1 = Table::new(vec!["structure", "label", "re", "im", "abs"]);
    let mut bars = Vec::new();
    for (name, s) in &built {
        let table = extract_expansion(s, c.order)?;
        let mut vals = Vec::new();
        for l in &listed {
            let w = table.get(*l).unwrap_or_default();
            let [re, im, abs] = complex_cells(w);
            t1.push(vec![name.clone().into(), l.to_string().into(), re, im, abs]);
            vals.push(w.norm());
        }
        bars.push((name.clone(), vals));
    }
    let mut coefficients = Output::new(t1);
    coefficients.charts.push(Chart {
        title: format!("expansion coefficients, N = {}", c.order),
        x_label: "coefficient".into(),
        y_label: "magnitude".into(),
        body: Body::Bars { categories: listed.iter().map(ToString::to_string).collect(), series: bars },
    });

    let mut t2 = Table::new(vec!["structure", "n", "t", "re", "im", "abs"]);
    let mut by_structure = Vec::new();
    for (name, s) in &built {
        let rows = sweep_report(s, &c.t)?;
        for e in &rows {
            let [re, im, abs] = complex_cells(e.w);
            t2.push(vec![name.clone().into(), e.n.into(), e.t.into(), re, im, abs]);
        }
        by_structure.push((name.clone(), rows));
    }
    let mut sweep = Output::new(t2);
    sweep.charts = c
        .t
        .iter()
        .map(|&tv| Chart {
            title: format!("t = {tv}"),
            x_label: "n".into(),
            y_label: "|W_n|".into(),
            body: Body::Lines {
                series: by_structure
                    .iter()
                    .map(|(name, rows)| {
                        (name.clone(), rows.iter().filter(|e| e.t == tv).map(|e| (e.n as f64, e.w.norm())).collect())
                    })
                    .collect(),
            },
        })
        .collect();
    Ok(Figures { coefficients, sweep })
}
