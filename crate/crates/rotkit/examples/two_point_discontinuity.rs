//! The two-point picture of a discontinuous representation, on the circle.
//!
//! Two rotations at angles +epsilon and -epsilon are geodesically 2 epsilon
//! apart. An interval parameterization `[0, 2 pi)` assigns them the values
//! epsilon and 2 pi - epsilon, so the representation-space gap approaches a
//! full turn as the true gap vanishes.
//!
//! ```bash
//! cargo run --release --example two_point_discontinuity
//! ```

use rotkit::continuity::probe_2d;

fn main() {
    println!(
        "{:>12} {:>16} {:>16} {:>12}",
        "epsilon_deg", "true_dist_deg", "rep_dist_deg", "ratio"
    );
    let mut eps = 10.0_f64;
    while eps > 1e-4 {
        let (true_d, rep_d) = probe_2d(eps.to_radians());
        println!(
            "{:>12.4} {:>16.4} {:>16.4} {:>12.1}",
            eps,
            true_d.to_degrees(),
            rep_d.to_degrees(),
            rep_d / true_d
        );
        eps /= 10.0;
    }
    println!();
    println!("the ratio grows without bound: nearby rotations, distant parameters");
}
