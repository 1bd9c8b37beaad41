//! Send one rotation through every representation and back.
//!
//! ```bash
//! cargo run --release --example representations_tour
//! ```

use rotkit::rep::{canonical_params, params_to_matrix, RepKind};
use rotkit::so3::{geodesic_angle, haar_random};

fn main() {
    let r = haar_random(2024, 1)[0];
    println!("source rotation (row-major):");
    for row in r.rows() {
        println!("  [{:9.5} {:9.5} {:9.5}]", row[0], row[1], row[2]);
    }
    println!();
    println!("{:<10} {:>6}  {:<55} {:>12}", "rep", "dims", "parameters", "round trip");

    for kind in RepKind::REGRESSION {
        let params = canonical_params(kind, &r);
        let back = params_to_matrix(kind, &params).unwrap();
        let err = geodesic_angle(&back, &r).degrees();
        let shown: Vec<String> = params.iter().map(|p| format!("{p:.4}")).collect();
        println!(
            "{:<10} {:>6}  {:<55} {:>9.2e} deg",
            kind.tag(),
            params.len(),
            shown.join(", "),
            err
        );
    }

    // The binned forms quantize to one-degree bins, so their round trip is
    // only bin-center accurate.
    for kind in [RepKind::EulerBin, RepKind::AxisAngleBin] {
        let params = canonical_params(kind, &r);
        let back = params_to_matrix(kind, &params).unwrap();
        let err = geodesic_angle(&back, &r).degrees();
        println!(
            "{:<10} {:>6}  {:<55} {:>9.2e} deg",
            kind.tag(),
            params.len(),
            "(one-hot bins)",
            err
        );
    }
}
