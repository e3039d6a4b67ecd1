//! Timing probe for the large scalar nerve computations.

use kmstab::family::e_series;
use kmstab::limits::{lim_i_constant, LimitsConfig};
use kmstab::poset::SphericalPoset;
use std::time::Instant;

fn main() {
    let e9 = e_series(9);
    let poset = SphericalPoset::enumerate(&e9).unwrap();
    println!("S(E9) size = {}", poset.len());

    let cfg = LimitsConfig {
        guardrail: 20_000_000,
        ..LimitsConfig::default()
    };

    // Sphere: drop the empty set; the nerve is the barycentric subdivision
    // of the boundary of the 8-simplex.
    let nonempty: Vec<_> = poset
        .elements()
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let sphere = SphericalPoset::from_elements(e9.clone(), nonempty);
    println!("sphere poset size = {}", sphere.len());

    let t0 = Instant::now();
    let lim = lim_i_constant(&sphere, 8, &cfg).unwrap();
    println!(
        "sphere dims = {:?} modular={} chains={:?} elapsed={:?}",
        lim.dims,
        lim.modular,
        lim.chain_counts,
        t0.elapsed()
    );

    let t1 = Instant::now();
    let cone = lim_i_constant(&poset, 8, &cfg).unwrap();
    println!(
        "cone dims = {:?} modular={} chains={:?} elapsed={:?}",
        cone.dims,
        cone.modular,
        cone.chain_counts,
        t1.elapsed()
    );
}
