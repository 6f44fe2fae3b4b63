//! Distance distribution in the 2-isogeny graph over F_2689 from the vertex
//! with j = 30, as CSV plus a terminal bar sketch.
//!
//! Run with: cargo run --release --example distance_histogram

use isograph::algebra::{Fp2Element, FpParams};
use isograph::cuts::distance_distribution;
use isograph::graph::build_graph;

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(2689)?;
    let g = build_graph(&fp, &[2])?;
    let j = Fp2Element::from_u64(30, &fp);
    let v = g.vertex_index(&j).expect("j = 30 is supersingular for p = 2689");
    let counts = distance_distribution(&g, v)?;

    println!("distance,count");
    for (d, c) in counts.iter().enumerate() {
        println!("{d},{c}");
    }
    println!();
    let max = *counts.iter().max().unwrap_or(&1);
    for (d, c) in counts.iter().enumerate() {
        let bar = "#".repeat(c * 60 / max);
        println!("{d:>2} | {bar} {c}");
    }
    println!("total = {} of {} vertices", counts.iter().sum::<usize>(), g.n_vertices());
    Ok(())
}
