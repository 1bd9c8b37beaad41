//! Fit single rotations by plain gradient descent under every catalog
//! configuration, and compare convergence.
//!
//! No network, no images: the same representation/loss pairings, reduced to
//! their optimization geometry. Initial parameters are standard normal, so
//! some 5D starts land outside the chart where the decoder's norm
//! restoration saturates; the failures below are properties of the loss
//! landscape, not of the optimizer.
//!
//! ```bash
//! cargo run --release --example descent_comparison
//! ```

use rotkit::continuity::{fit_rotation, random_init, FitOptions};
use rotkit::loss::full_catalog;
use rotkit::rep::RepKind;
use rotkit::so3::haar_random;

fn main() {
    let targets = haar_random(42, 25);
    let opts = FitOptions {
        step_size: 0.05,
        max_iters: 2000,
        convergence_deg: 1.0,
    };
    println!("25 Haar targets each, random init, step {}, budget {} iters:", opts.step_size, opts.max_iters);
    println!(
        "{:<6} {:<10} {:<22} {:>10} {:>12} {:>12}",
        "id", "rep", "loss", "converged", "median iters", "median err"
    );
    for spec in full_catalog() {
        let mut finals = Vec::new();
        let mut iters = Vec::new();
        let mut converged = 0usize;
        let mut diverged = 0usize;
        for (run, target) in targets.iter().enumerate() {
            let mut init = random_init(spec.rep, 1000 + spec.config_id as u64, run as u64);
            if matches!(spec.rep, RepKind::EulerBin | RepKind::AxisAngleBin) {
                for x in init.iter_mut() {
                    *x = x.abs() + 0.05;
                }
            }
            match fit_rotation(target, &spec, &init, opts) {
                Ok(trace) => {
                    if trace.converged {
                        converged += 1;
                    }
                    iters.push(trace.iterations as f64);
                    finals.push(trace.final_error_deg());
                }
                Err(_) => diverged += 1,
            }
        }
        finals.sort_by(|a, b| a.total_cmp(b));
        iters.sort_by(|a, b| a.total_cmp(b));
        println!(
            "{:<6} {:<10} {:<22} {:>7}/25 {:>12.0} {:>9.2} deg{}",
            spec.config_id,
            spec.rep.tag(),
            spec.loss_label(),
            converged,
            iters.get(iters.len() / 2).copied().unwrap_or(f64::NAN),
            finals.get(finals.len() / 2).copied().unwrap_or(f64::NAN),
            if diverged > 0 {
                format!("  ({diverged} diverged)")
            } else {
                String::new()
            }
        );
    }
}
