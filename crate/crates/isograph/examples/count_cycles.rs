//! Count principal {2,3}-isogeny cycles over F_61 by three independent
//! methods, and compare with the cheap estimate and upper bound.
//!
//! Run with: cargo run --release --example count_cycles

use isograph::algebra::FpParams;
use isograph::brandt::{brandt_matrix, principal_cycle_count, DegreeVector};
use isograph::classnum::{
    hurwitz_sum_identity, ideal_cycle_count, trace_estimate, trace_upper_bound, trace_via_hurwitz,
};
use isograph::graph::build_graph;

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(61)?;
    let g = build_graph(&fp, &[2, 3])?;
    let d = DegreeVector::parse("2:1,3:1")?;

    // route 1: trace of the Brandt matrix B(6) with scalar-factor removal
    let count = principal_cycle_count(&g, &d)?;
    println!("brandt route:    {}", count.total);
    println!("  per-vertex: {:?}", count.per_vertex.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    let b6 = brandt_matrix(&g, &d)?;
    println!("  Tr B(6) = {}", b6.trace());

    // route 2: the modified Hurwitz class number trace formula
    println!("hurwitz route:   {}", trace_via_hurwitz(6, 61)?);

    // route 3: class-group counting over imaginary quadratic orders
    let ideal = ideal_cycle_count(61, &[2, 3])?;
    println!("ideal route:     {}", ideal.total);
    for c in &ideal.contributions {
        println!("  disc = {:>4}: h = {}, elements of norm 6 = {}", c.disc, c.class_number, c.norm_count);
    }

    // fast bound and estimate
    println!("upper bound:     {}", trace_upper_bound(&d));
    println!("estimate:        {}", trace_estimate(&d));
    println!("hurwitz sum m=6: {}", hurwitz_sum_identity(6));
    Ok(())
}
