//! Check every configuration's analytic gradient against central finite
//! differences at random regular points.
//!
//! ```bash
//! cargo run --release --example gradient_audit
//! ```

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotkit::loss::{full_catalog, gradcheck, sample_regular_point};
use rotkit::so3::haar_random;

fn main() {
    let points_per_id = 25;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    println!(
        "{:<6} {:<10} {:>8} {:>18}",
        "id", "rep", "points", "max rel deviation"
    );
    for spec in full_catalog() {
        let targets = haar_random(600 + spec.config_id as u64, points_per_id);
        let mut worst = 0.0_f64;
        for gt in &targets {
            let point = sample_regular_point(&spec, gt, &mut rng);
            let report = gradcheck(&spec, &point, gt, 1e-6).unwrap();
            worst = worst.max(report.max_rel_deviation);
        }
        println!(
            "{:<6} {:<10} {:>8} {:>18.3e}",
            spec.config_id,
            spec.rep.tag(),
            points_per_id,
            worst
        );
    }
}
