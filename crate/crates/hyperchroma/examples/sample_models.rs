//! The three random hypergraph models side by side: multiset draws (may
//! contain defective or duplicate edges), uniform draws without
//! replacement (always simple), and Bernoulli inclusion.
//!
//! Run with: cargo run --example sample_models

use hyperchroma::models::{
    asymptotic_no_bad_probability, classify_bad_edges, isolated_vertices, sample_bernoulli,
    sample_multi, sample_uniform, Seed,
};

fn main() {
    let seed = Seed::new(7, 0);
    let (n, r, m) = (8usize, 3usize, 6usize);

    let multi = sample_multi(n, r, m, seed).unwrap();
    println!("multiset model, n={n}, r={r}, m={m}:");
    for e in multi.edges() {
        println!("  {:?}", e);
    }
    let report = classify_bad_edges(&multi);
    println!("  defective edge indices: {:?}", report.defective);
    println!("  duplicate edge indices: {:?}", report.duplicate);
    println!("  isolated vertices: {:?}", isolated_vertices(&multi));

    let uniform = sample_uniform(n, r, m, seed).unwrap();
    println!("\nuniform model (always simple):");
    for e in uniform.edges() {
        println!("  {:?}", e);
    }
    assert!(classify_bad_edges(&uniform).is_empty());

    let p = 0.1;
    let bern = sample_bernoulli(n, r, p, seed).unwrap();
    println!("\nbernoulli model, p={p}: drew {} of {} possible edges", bern.m(), 56);

    // Empirical no-bad-edge frequency vs the limiting law.
    let (n, c, trials) = (2000usize, 1.0f64, 2000u64);
    let mut clean = 0u64;
    for t in 0..trials {
        let h = sample_multi(n, r, n, Seed::new(42, t)).unwrap();
        if classify_bad_edges(&h).is_empty() {
            clean += 1;
        }
    }
    println!(
        "\nP(no bad edge) at n={n}, c={c}: empirical {:.4} vs limit {:.4}",
        clean as f64 / trials as f64,
        asymptotic_no_bad_probability(r, c)
    );
}
