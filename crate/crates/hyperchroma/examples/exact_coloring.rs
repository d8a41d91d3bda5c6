//! Exact weak-coloring machinery on small instances: decision, balanced
//! counting, chromatic numbers, and the overlap-feasibility witness.
//!
//! Run with: cargo run --example exact_coloring

use hyperchroma::coloring::{
    chromatic_number, count_balanced_colorings, is_k_colorable, Chromatic,
};
use hyperchroma::models::Hypergraph;
use hyperchroma::threshold::feasible_overlap;

fn main() {
    let triangle = Hypergraph::new(3, 2, vec![vec![1, 2], vec![2, 3], vec![1, 3]], true).unwrap();
    println!("triangle: 2-colorable = {}, chi = {:?}", is_k_colorable(&triangle, 2), chromatic_number(&triangle));

    let fano_like = Hypergraph::new(
        7,
        3,
        vec![
            vec![1, 2, 3],
            vec![1, 4, 5],
            vec![1, 6, 7],
            vec![2, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 7],
            vec![3, 5, 6],
        ],
        true,
    )
    .unwrap();
    println!(
        "7-point design: 2-colorable = {}, chi = {:?}",
        is_k_colorable(&fano_like, 2),
        chromatic_number(&fano_like)
    );

    let h = Hypergraph::new(6, 3, vec![vec![1, 2, 3], vec![4, 5, 6], vec![1, 4, 2]], true).unwrap();
    for k in [2usize, 3] {
        println!(
            "n=6 instance: balanced {k}-colorings = {}",
            count_balanced_colorings(&h, k).unwrap().0
        );
    }

    // A loop edge kills colorability for every k.
    let loopy = Hypergraph::new(3, 2, vec![vec![2, 2]], false).unwrap();
    assert_eq!(chromatic_number(&loopy), Chromatic::Uncolorable);
    println!("loop edge on one vertex: {:?}", chromatic_number(&loopy));

    // Doubly stochastic witness hitting a prescribed overlap power sum.
    let w = feasible_overlap(2.0, 3, 2).unwrap();
    println!(
        "\noverlap witness for rho=2 (r=3, k=2): eps = {:.10}, matrix = {:?}",
        w.epsilon, w.matrix
    );
}
