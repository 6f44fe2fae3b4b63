//! Build a supersingular L-isogeny graph, inspect its shape, and round-trip
//! it through the text format.
//!
//! Run with: cargo run --release --example build_graph

use isograph::algebra::FpParams;
use isograph::graph::{build_graph, IsogenyGraph};

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(61)?;
    let g = build_graph(&fp, &[2, 3])?;

    println!("G(61, {{2,3}}) has {} vertices:", g.n_vertices());
    for (i, j) in g.vertices.iter().enumerate() {
        println!("  vertex {i}: j = {}", j.render());
    }
    println!("out-regularity d = {}", g.regularity());
    println!("adjacency symmetric: {}", g.is_symmetric());

    for (k, mat) in g.adjacency.iter().enumerate() {
        println!("A_{}:", g.ells[k]);
        for row in mat {
            let cells: Vec<String> = row.iter().map(|m| m.to_string()).collect();
            println!("  [{}]", cells.join(" "));
        }
    }

    // text round trip
    let mut buf = Vec::new();
    g.save(&mut buf)?;
    let g2 = IsogenyGraph::load(std::io::Cursor::new(&buf))?;
    assert_eq!(g.vertices, g2.vertices);
    assert_eq!(g.adjacency, g2.adjacency);
    println!("save/load round trip: ok ({} bytes)", buf.len());

    // a larger example from the same family
    let fp419 = FpParams::new(419)?;
    let g419 = build_graph(&fp419, &[2, 3])?;
    println!("G(419, {{2,3}}) has {} vertices", g419.n_vertices());
    Ok(())
}
