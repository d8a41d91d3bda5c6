//! Run every registered analytic-inequality check and print the margin
//! table. Margins are the minimum slack observed over each check's
//! deterministic grid; anything above -1e-12 passes.
//!
//! Run with: cargo run --release --example lemma_suite

use hyperchroma::lemmas;

fn main() {
    let checks = lemmas::run_all();
    print!("{}", lemmas::to_text_table(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
    } else {
        println!("{failed} of {} checks FAILED", checks.len());
        std::process::exit(1);
    }
}
