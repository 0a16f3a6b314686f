#![allow(dead_code)]

use cloakforge::expansion::random_insulated;
use cloakforge::layered::{Core, LayeredStructure, Material};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bare() -> LayeredStructure<f64> {
    LayeredStructure::bare_neumann_disk(1.0).unwrap()
}

pub fn published_one_layer() -> LayeredStructure<f64> {
    LayeredStructure::insulated(vec![2.0, 1.0], vec![Material::new(0.6, 4.0 / 3.0)]).unwrap()
}

pub fn published_two_layer() -> LayeredStructure<f64> {
    LayeredStructure::insulated(
        vec![2.0, 1.5, 1.0],
        vec![Material::new(1.4905, 1.09271), Material::new(0.27594, 1.6702)],
    )
    .unwrap()
}

pub fn random_penetrable_disk(rng: &mut ChaCha8Rng) -> (f64, Material<f64>, f64) {
    let mut draw = |lo: f64, hi: f64| (rng.gen_range(lo.ln()..hi.ln())).exp();
    let radius = draw(0.3, 3.0);
    let inside = Material::new(draw(0.2, 5.0), draw(0.2, 5.0));
    let omega = draw(0.05, 3.0);
    (radius, inside, omega)
}

/// Lossless structures of every kind the library builds.
pub fn lossless_corpus() -> Vec<LayeredStructure<f64>> {
    let mut out = vec![bare(), published_one_layer(), published_two_layer()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for l in 0..4 {
        out.push(random_insulated(l, &mut rng).unwrap());
    }
    for _ in 0..4 {
        let (r, inside, _) = random_penetrable_disk(&mut rng);
        out.push(LayeredStructure::penetrable_disk(r, inside, Material::vacuum()).unwrap());
    }
    out.push(
        LayeredStructure::new(
            vec![1.8, 1.2, 0.7],
            vec![Material::new(2.5, 0.4), Material::new(0.3, 3.0)],
            Core::Penetrable(Material::new(4.0, 1.5)),
            Material::new(1.3, 0.8),
        )
        .unwrap(),
    );
    out
}

pub const CORPUS_FREQUENCIES: [f64; 4] = [0.01, 0.1, 1.0, 5.0];
