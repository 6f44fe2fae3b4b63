//! Compare sweep cuts from the spectral, neighbour, and greedy-neighbour
//! orderings across several (p, L) rows, with Cheeger brackets for reference.
//!
//! Run with: cargo run --release --example cut_orderings

use isograph::algebra::FpParams;
use isograph::cuts::{cheeger_bounds, fiedler_sweep, greedy_order, neighbour_order, sweep_min};
use isograph::graph::build_graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> isograph::Result<()> {
    println!(
        "{:<22} {:>9} {:>10} {:>8} {:>8} {:>8}",
        "p, L", "spectral", "neighbour", "greedy", "lb", "ub"
    );
    for (p, ells) in [
        (419u64, vec![3u64]),
        (419, vec![2, 3]),
        (419, vec![2, 3, 5, 7, 11]),
        (5569, vec![3]),
        (5569, vec![2, 3]),
    ] {
        let fp = FpParams::new(p)?;
        let g = build_graph(&fp, &ells)?;
        let (_, spectral) = fiedler_sweep(&g)?;
        // three seeded random starts, averaged
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut nb = 0.0;
        let mut gr = 0.0;
        for _ in 0..3 {
            let v0 = rng.gen_range(0..g.n_vertices());
            nb += sweep_min(&g, &neighbour_order(&g, v0)?)?.1;
            gr += sweep_min(&g, &greedy_order(&g, v0)?)?.1;
        }
        let (lo, hi) = cheeger_bounds(&g)?;
        let tag = format!("{p}, {ells:?}");
        println!(
            "{:<22} {:>9.3} {:>10.3} {:>8.3} {:>8.3} {:>8.3}",
            tag,
            spectral,
            nb / 3.0,
            gr / 3.0,
            lo,
            hi
        );
    }
    Ok(())
}
