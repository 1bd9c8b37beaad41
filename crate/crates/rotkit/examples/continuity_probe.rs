//! Measure every representation's response to small rotation perturbations.
//!
//! Perturb Haar-random rotations by a tiny angle delta and watch how far the
//! canonical parameter vectors move. The 6D and 5D forms stay within a fixed
//! multiple of delta; Euler angles, the rotation vector, and the canonical
//! quaternion all jump at their seams, and `discontinuity_witness` constructs
//! the jump directly.
//!
//! ```bash
//! cargo run --release --example continuity_probe
//! ```

use rotkit::continuity::{discontinuity_witness, probe_discontinuity, rep_distance};
use rotkit::rep::RepKind;
use rotkit::so3::geodesic_angle;

fn main() {
    let n = 50_000;
    let seed = 7;
    println!("max and mean parameter distance per radian of perturbation, {n} pairs:");
    println!(
        "{:<10} {:>12} {:>12} {:>12}",
        "rep", "delta", "max/delta", "mean/delta"
    );
    for rep in RepKind::REGRESSION {
        for delta in [1e-2, 1e-3, 1e-4] {
            let report = probe_discontinuity(rep, delta, n, seed);
            println!(
                "{:<10} {:>12.0e} {:>12.1} {:>12.2}",
                rep.tag(),
                delta,
                report.max_rep_distance / delta,
                report.mean_rep_distance / delta
            );
        }
    }

    println!();
    println!("directed witnesses at delta = 1e-3 rad:");
    for rep in [RepKind::Euler, RepKind::AxisAngle3, RepKind::Quaternion] {
        let (a, b) = discontinuity_witness(rep, 1e-3).unwrap();
        println!(
            "  {:<10} geodesic {:.4} deg, parameter distance {:.3}",
            rep.tag(),
            geodesic_angle(&a, &b).degrees(),
            rep_distance(rep, &a, &b)
        );
    }
}
