//! Generate the three synthetic rotation datasets and report their
//! difficulty.
//!
//! Writes `random.jsonl`, `big-hole.jsonl`, and `many-holes.jsonl` into the
//! current directory with the standard 8000/2000/1000 split and prints each
//! dataset's zeta: the median geodesic distance from a test rotation to its
//! nearest training rotation.
//!
//! ```bash
//! cargo run --release --example generate_datasets
//! ```

use std::path::Path;

use rotkit::datagen::{generate_dataset, save_dataset, DistributionSpec, SplitCounts};

fn main() {
    let seed = 0;
    for (name, spec) in [
        ("random", DistributionSpec::random(seed)),
        ("big-hole", DistributionSpec::big_hole(seed)),
        ("many-holes", DistributionSpec::many_holes(seed)),
    ] {
        let t0 = std::time::Instant::now();
        let ds = generate_dataset(&spec, SplitCounts::default()).unwrap();
        let zeta = ds.zeta().unwrap();
        let path = format!("{name}.jsonl");
        save_dataset(&ds, Path::new(&path)).unwrap();
        println!(
            "{name:<11} {} samples, zeta = {:6.2} deg, {:>8.2?}, wrote {path}",
            ds.samples.len(),
            zeta.degrees,
            t0.elapsed()
        );
    }
}
