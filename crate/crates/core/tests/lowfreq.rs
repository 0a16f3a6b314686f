use cloakforge::expansion::{
    extract_expansion, extract_expansion_with_margin, nonzero_coefficient_list, random_insulated,
    transfer_series, CoefficientLabel,
};
use cloakforge::layered::{scattering_coefficient, LayeredStructure, Material};
use cloakforge::scalar::Quad;
use cloakforge::series::PowerLogSeries;
use cloakforge::specfun::CylFunValue;
use num_complex::Complex;
use num_traits::{Float, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bare() -> LayeredStructure<f64> {
    LayeredStructure::bare_neumann_disk(1.0).unwrap()
}

fn published_one_layer() -> LayeredStructure<f64> {
    LayeredStructure::insulated(vec![2.0, 1.0], vec![Material::new(0.6, 4.0 / 3.0)]).unwrap()
}

#[test]
fn bare_disk_leading_coefficient_matches_numeric_limit() {
    let s = bare();
    let table = extract_expansion(&s, 2).unwrap();
    let ratio = |t: f64| scattering_coefficient(&s, t, 1).unwrap() / (t * t);
    let (f2, f3, f4) = (ratio(1e-2), ratio(1e-3), ratio(1e-4));
    // eliminate the t² correction between consecutive decades
    let r34 = f4 + (f4 - f3) / 99.0;
    let r23 = f3 + (f3 - f2) / 99.0;
    let limit = r34 + (r34 - r23) / 99.0;
    let w10 = table.get(CoefficientLabel::leading(1)).unwrap();
    assert!((w10 - limit).norm() < 1e-6 * w10.norm(), "{w10} vs {limit}");
    // -4i J_1'(t)/H_1'(t) ~ -π t²
    assert!((w10 - Complex::new(-std::f64::consts::PI, 0.0)).norm() < 1e-12);
}

#[test]
fn published_one_layer_design_cancels_the_t2_terms() {
    let base = extract_expansion(&bare(), 1).unwrap();
    let one = extract_expansion(&published_one_layer(), 1).unwrap();
    for label in [CoefficientLabel::correction(0, 1, 0), CoefficientLabel::leading(1)] {
        let b = base.get(label).unwrap().norm();
        let d = one.get(label).unwrap().norm();
        assert!(b > 1.0, "{label}: baseline {b}");
        assert!(d * 100.0 < b, "{label}: {d} vs baseline {b}");
    }
}

#[test]
fn table_shape() {
    let s = random_insulated(2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    for order in 0..=3usize {
        let t = extract_expansion(&s, order).unwrap();
        let expected: usize = (0..=order).map(|n| 1 + (order - n) * (3 * (order - n) + 1)).sum();
        assert_eq!(t.entries().count(), expected);
        assert!(t.entries().all(|(lab, _)| lab.l <= order - lab.n));
        assert!(t.entries().all(|(lab, _)| lab.j <= t.log_bound(lab.n)));
    }
}

#[test]
fn series_and_direct_values_agree_to_remainder_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..12 {
        let s = random_insulated(1 + i % 3, &mut rng).unwrap();
        let table = extract_expansion(&s, 2).unwrap();
        for n in 0..=2usize {
            for t in [1e-3, 1e-4] {
                let w = scattering_coefficient(&s, t, n as i32).unwrap();
                let e = table.evaluate(n, t).unwrap();
                let scale = t.powi(2 * n as i32);
                let bound = 1e3 * t.powi(2 * (3 - n as i32)) * t.ln().abs().powi(3) + 1e-13 * w.norm() / scale;
                assert!((w - e).norm() / scale < bound, "i={i} n={n} t={t}");
            }
        }
    }
}

#[test]
fn remainder_decays_faster_than_the_table_order_in_quad_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let order = 2usize;
    for i in 0..6 {
        let s: LayeredStructure<Quad> = random_insulated(1 + i % 3, &mut rng).unwrap().cast();
        let table = extract_expansion(&s, order).unwrap();
        for n in 0..=order {
            let rem = |t: f64| {
                let t = Quad::from(t);
                let w = scattering_coefficient(&s, t, n as i32).unwrap();
                ((w - table.evaluate(n, t).unwrap()).norm() / t.powi(2 * n as i32)).to_f64().unwrap()
            };
            let slope = (rem(1e-3) / rem(1e-4)).log10();
            let need = 2.0 * (order - n) as f64 + 1.5;
            assert!(slope > need, "i={i} n={n}: slope {slope} <= {need}");
        }
    }
}

#[test]
fn w0_starts_at_t_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for l in 0..4 {
        let s = random_insulated(l, &mut rng).unwrap();
        let t = extract_expansion(&s, 2).unwrap();
        let w00 = t.get(CoefficientLabel::leading(0)).unwrap();
        let scale = t.get(CoefficientLabel::correction(0, 1, 0)).unwrap().norm().max(1.0);
        assert!(w00.norm() < 1e-12 * scale, "L={l}: {w00}");
    }
}

#[test]
fn p22_leading_coefficient_for_the_symmetric_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for l in 0..4 {
        let s = random_insulated(l, &mut rng).unwrap();
        let (_, p22) = transfer_series(&s, 0, 6).unwrap();
        assert_eq!(p22.leading_power(), -1);
        let inner = s.medium(l);
        let ratio: f64 = (1..=l).map(|j| s.medium(j).mu / s.medium(j - 1).mu).product();
        let want = Complex::new(0.0, 2.0 / std::f64::consts::PI) / inner.index() * ratio;
        let got = p22.coeff(-1, 0).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm(), "L={l}: {got} vs {want}");
    }
}

#[test]
fn p22_leading_coefficient_never_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for i in 0..20 {
        let s = random_insulated(1 + i % 3, &mut rng).unwrap();
        for n in 0..=4 {
            let (_, p22) = transfer_series(&s, n, 2 * n + 4).unwrap();
            assert_eq!(p22.leading_power(), -n - 1);
            assert!(p22.coeff(-n - 1, 0).unwrap().norm() > 1e-8);
        }
    }
}

#[test]
fn log_powers_stay_inside_the_table_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..10 {
        let s = random_insulated(1 + i % 3, &mut rng).unwrap();
        for order in 1..=3 {
            let t = extract_expansion(&s, order).unwrap();
            let scale = t.entries().fold(1.0f64, |m, (_, c)| m.max(c.norm()));
            assert!(t.off_shape_magnitude() < 1e-10 * scale, "i={i} N={order}: {}", t.off_shape_magnitude());
        }
    }
}

#[test]
fn extraction_does_not_depend_on_the_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for l in 0..4 {
        let s = random_insulated(l, &mut rng).unwrap();
        let a = extract_expansion(&s, 2).unwrap();
        let b = extract_expansion_with_margin(&s, 2, 2).unwrap();
        for ((la, ca), (lb, cb)) in a.entries().zip(b.entries()) {
            assert_eq!(la, lb);
            assert!((ca - cb).norm() <= 1e-10 * (1.0 + ca.norm()), "{la}: {ca} vs {cb}");
        }
    }
}

#[test]
fn matched_layer_inverse_equals_bare_disk_inverse() {
    let matched = LayeredStructure::insulated(vec![2.0, 1.0], vec![Material::new(1.0, 1.0)]).unwrap();
    let (_, pm) = transfer_series(&matched, 1, 8).unwrap();
    let (_, pb) = transfer_series(&bare(), 1, 8).unwrap();
    let (im, ib) = (pm.inv().unwrap(), pb.inv().unwrap());
    for k in ib.leading_power()..=ib.kmax().min(im.kmax()) {
        for j in 0..=2 {
            let (a, b) = (im.coeff(k, j).unwrap(), ib.coeff(k, j).unwrap());
            assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()), "k={k} j={j}");
        }
    }
    for t in [1e-3, 1e-4] {
        let direct = Complex::new(1.0, 0.0) / CylFunValue::eval(1, t).unwrap().h1p();
        let series = ib.eval(t);
        assert!((series - direct).norm() < 1e-10 * direct.norm(), "t={t}");
    }
}

#[test]
fn nonzero_lists() {
    let names = |order, layers| {
        nonzero_coefficient_list(order, layers)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    };
    assert!(names(0, 2).is_empty());
    assert_eq!(names(1, 2), ["W_0^{1,0}", "W_1^0"]);
    assert_eq!(
        names(2, 2),
        ["W_0^{1,0}", "W_0^{2,0}", "W_0^{2,1}", "W_1^0", "W_1^{1,0}", "W_1^{1,1}", "W_2^0"]
    );
    // the fixed order-2 list is what extraction finds as well
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let s = random_insulated(2, &mut rng).unwrap();
    let t = extract_expansion(&s, 2).unwrap();
    let scale = t.entries().fold(1.0f64, |m, (_, c)| m.max(c.norm()));
    let found: Vec<_> = t
        .entries()
        .filter(|(_, c)| c.norm() > 1e-9 * scale)
        .map(|(l, _)| l)
        .collect();
    assert_eq!(found, nonzero_coefficient_list(2, 2).unwrap());
}

#[test]
fn bare_disk_has_no_vanishing_listed_coefficient() {
    let t = extract_expansion(&bare(), 2).unwrap();
    for label in nonzero_coefficient_list(2, 0).unwrap() {
        assert!(t.get(label).unwrap().norm() > 0.1, "{label}");
    }
}

#[test]
fn penetrable_core_is_rejected() {
    let s = LayeredStructure::penetrable_disk(1.0, Material::new(2.0, 3.0), Material::vacuum()).unwrap();
    assert!(extract_expansion(&s, 2).is_err());
    assert!(extract_expansion(&bare(), 5).is_err());
}

fn small_series() -> impl Strategy<Value = PowerLogSeries<f64>> {
    (-2i32..=1, proptest::collection::vec((0i32..6, 0usize..3, -2.0f64..2.0, -2.0f64..2.0), 8)).prop_map(
        |(kmin, terms)| {
            let mut s = PowerLogSeries::zeros(kmin, kmin + 12, 6);
            for (dk, j, re, im) in terms {
                s.add_term(kmin + dk, j, Complex::new(re, im)).unwrap();
            }
            s
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_evaluates_to_product_of_values(a in small_series(), b in small_series()) {
        let t = 1e-3;
        let p = a.mul(&b).unwrap();
        let direct = a.eval(t) * b.eval(t);
        let tail = t.powi(p.kmax() + 1) * t.ln().abs().powi(6) * 1e3;
        let scale = a.eval(t).norm() * b.eval(t).norm();
        prop_assert!((p.eval(t) - direct).norm() <= 1e-10 * scale + tail);
    }

    #[test]
    fn inverse_is_a_right_inverse(a in small_series(), lead in 0.5f64..3.0) {
        let mut a = a.with_cap(40).unwrap();
        let k0 = a.kmin() - 1;
        a.add_term(k0, 0, Complex::new(lead, 0.3)).unwrap();
        let p = a.mul(&a.inv().unwrap()).unwrap();
        prop_assert!((p.coeff(0, 0).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-9);
        for (k, j, c) in p.terms() {
            if (k, j) != (0, 0) {
                prop_assert!(c.norm() < 1e-7 * 10f64.powi(k), "t^{} ln^{}: {}", k, j, c);
            }
        }
    }
}
