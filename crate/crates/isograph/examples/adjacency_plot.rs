//! Adjacency dot plots of G(419, {2,3}) under the identity, spectral,
//! neighbour, and greedy orderings, written as PGM images.
//!
//! Run with: cargo run --release --example adjacency_plot

use isograph::algebra::FpParams;
use isograph::cuts::{
    adjacency_plot, greedy_order, neighbour_order, spectral_order, sweep_min, FiedlerConvention,
    VertexOrdering,
};
use isograph::graph::build_graph;

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(419)?;
    let g = build_graph(&fp, &[2, 3])?;
    let out = std::path::Path::new("plots");
    std::fs::create_dir_all(out)?;

    let orderings = [
        ("identity", VertexOrdering::identity(g.n_vertices())),
        ("spectral", spectral_order(&g, FiedlerConvention::SecondLargest)?),
        ("neighbour", neighbour_order(&g, 0)?),
        ("greedy", greedy_order(&g, 0)?),
    ];
    for (name, order) in orderings {
        let img = adjacency_plot(&g, &order, None)?;
        let path = out.join(format!("adjacency_419_{name}.pgm"));
        img.save(&path)?;
        println!("wrote {} ({}x{})", path.display(), img.width, img.height);

        // the same plot with both sides of the sweep cut shuffled, to show
        // quadrant densities rather than within-block structure
        let (cut, _) = sweep_min(&g, &order)?;
        let img = adjacency_plot(&g, &order, Some((&cut, 0)))?;
        let path = out.join(format!("adjacency_419_{name}_shuffled.pgm"));
        img.save(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
