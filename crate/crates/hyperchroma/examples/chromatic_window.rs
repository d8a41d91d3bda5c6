//! Two-point concentration: for a given edge density c, the chromatic
//! number of a sparse random r-uniform hypergraph is a.a.s. k or k+1,
//! where k is the smallest integer with c <= u_{r,k}; below c_{r,k} it
//! pins to exactly k.
//!
//! Run with: cargo run --example chromatic_window

use hyperchroma::threshold::{c_threshold, predict_chromatic_window, u_bound};

fn main() {
    println!(
        "{:>3} {:>8} {:>4} {:>10} {:>10} {:>10} {:>8}",
        "r", "c", "k", "u_(r,k-1)", "c_(r,k)", "u_(r,k)", "unique"
    );
    for (r, c) in [
        (2usize, 1.3f64),
        (2, 3.0),
        (2, 4.0),
        (3, 2.0),
        (3, 8.0),
        (3, 9.0),
        (4, 20.0),
        (5, 80.0),
    ] {
        let (k, unique) = predict_chromatic_window(r, c).unwrap();
        let rep = c_threshold(r, k).unwrap();
        println!(
            "{:>3} {:>8.2} {:>4} {:>10.4} {:>10.4} {:>10.4} {:>8}",
            r,
            c,
            k,
            u_bound(r, k - 1),
            rep.c_rk,
            u_bound(r, k),
            if unique { format!("chi = {k}") } else { format!("{k} or {}", k + 1) },
        );
    }
    println!();
    println!("'unique' requires c < c_(r,k) and max(r, k) >= 3; the graph");
    println!("2-coloring case r = k = 2 has no sharp threshold.");
}
