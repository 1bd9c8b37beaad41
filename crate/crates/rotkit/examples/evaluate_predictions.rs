//! Score a simulated model against a dataset's test split.
//!
//! Generates a big-hole dataset, fabricates predictions whose error grows
//! with the sample's distance from the training set (the signature of a
//! model that extrapolates poorly), and produces the full evaluation stack:
//! summary report, accuracy curve CSV, and the least-squares line of error
//! against nearest-train distance.
//!
//! ```bash
//! cargo run --release --example evaluate_predictions
//! ```

use rand::RngExt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotkit::datagen::{generate_dataset, DistributionSpec, Split, SplitCounts};
use rotkit::eval::{nearest_train_fit, report};
use rotkit::rep::AxisAngle3;
use rotkit::so3::geodesic_angle;

fn main() {
    let ds = generate_dataset(&DistributionSpec::big_hole(3), SplitCounts::default()).unwrap();
    let distances = ds.nearest_train_distances().unwrap();

    // Simulated predictions: each test rotation perturbed by an angle that
    // scales with its distance from the training set, plus noise.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let errors: Vec<f64> = ds
        .split(Split::Test)
        .zip(&distances)
        .map(|(sample, dist)| {
            let magnitude = (0.4 * dist + rng.random_range(0.0..2.0)).to_radians();
            let axis: [f64; 3] = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
            let step = AxisAngle3::new([
                axis[0] / n * magnitude,
                axis[1] / n * magnitude,
                axis[2] / n * magnitude,
            ])
            .to_matrix();
            let predicted = sample.rotation.compose(&step);
            geodesic_angle(&predicted, &sample.rotation).degrees()
        })
        .collect();

    let rep = report(&errors).unwrap();
    println!("mean    {:>7.2} deg", rep.mean);
    println!("median  {:>7.2} deg", rep.median);
    println!("mAA(5)  {:>7.2}", rep.maa5);
    println!("mAA(10) {:>7.2}", rep.maa10);
    println!("mAA(20) {:>7.2}", rep.maa20);

    let fit = nearest_train_fit(&ds, &errors).unwrap();
    println!(
        "error vs nearest-train distance: slope {:.3} deg/deg, intercept {:.2} deg",
        fit.slope, fit.intercept
    );
    println!("(the simulation used slope 0.4: steeper lines mean worse extrapolation)");

    std::fs::write("accuracy_curve.csv", rep.curve.to_csv(0.1, 20.0)).unwrap();
    println!("wrote accuracy_curve.csv");
}
