//! Monte Carlo sweep of P(2-colorable) against edge density for random
//! 3-uniform hypergraphs, bracketing the predicted transition window
//! (c_{3,2} = 1.5, u_{3,2} = 2.77).
//!
//! Run with: cargo run --release --example colorability_sweep

use hyperchroma::experiment::{run_sweep, ModelKind, SweepConfig};
use hyperchroma::models::Seed;

fn main() {
    let config = SweepConfig {
        r: 3,
        k: 2,
        n: 30,
        c_grid: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0],
        trials: 400,
        model: ModelKind::Uniform,
        seed: Seed::new(2027, 0),
    };
    let result = run_sweep(&config).unwrap();
    print!("{}", result.to_csv());
    eprintln!();
    eprintln!("p_hat falls from ~1 below c_(3,2) = 1.5 toward 0 above");
    eprintln!("u_(3,2) = 2.77; at n = 30 the drop is smooth, the sharp");
    eprintln!("threshold only emerges as n grows.");
}
