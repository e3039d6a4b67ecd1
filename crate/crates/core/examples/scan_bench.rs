//! Timing probe for the extension-family stability scan.

use kmstab::family::relabel_with_pivot;
use kmstab::gcm::rank2;
use kmstab::limits::{stability_scan, LimitsConfig};
use std::time::Instant;

fn main() {
    let base = relabel_with_pivot(&rank2(2, 2), 1).unwrap();
    let cfg = LimitsConfig::default();
    let t0 = Instant::now();
    let report = stability_scan(&base, 5, 8, 8, 3, &cfg).unwrap();
    println!("elapsed = {:?}", t0.elapsed());
    for (n, page) in &report.pages {
        let row: Vec<String> = page
            .cells
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&(i, j), &v)| format!("({i},{j})={v}"))
            .collect();
        println!("n={n} poset={} cells: {}", page.poset_size, row.join(" "));
    }
    for (n, _page, agree) in &report.cofinal_pages {
        println!("cofinal n={n} agree={agree}");
    }
    println!("thresholds: {:?}", report.thresholds);
    println!("stabilized: {}", report.stabilized);
}
