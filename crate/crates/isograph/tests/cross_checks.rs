//! Cross-method consistency between the matrix route, the class-number trace
//! route, and the ideal-theoretic route, over a range of parameters.

use isograph::algebra::FpParams;
use isograph::brandt::{principal_cycle_count, BrandtEngine, DegreeVector};
use isograph::classnum::{ideal_cycle_count, trace_estimate, trace_upper_bound, trace_via_hurwitz};
use isograph::graph::build_graph;
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn upper_bound_dominates_trace_for_nonsquare_m() {
    // The bound holds whenever 4m is not a perfect square. At square m the
    // s^2 = 4m terms contribute H_p(0) = (p-1)/24 each, which is NOT bounded
    // by H(0) = -1/12, and the bound genuinely fails: Tr B(1) = |V|.
    let fp = FpParams::new(61).unwrap();
    let g = build_graph(&fp, &[2, 3]).unwrap();
    let mut engine = BrandtEngine::new(&g).unwrap();
    let is_square = |m: u128| {
        let r = (m as f64).sqrt() as u128;
        (r.saturating_sub(1)..=r + 1).any(|c| c * c == m)
    };
    for a in 0..7u32 {
        for b in 0..5u32 {
            let m = 2u128.pow(a) * 3u128.pow(b);
            if m > 100 {
                continue;
            }
            let d = DegreeVector::new(
                [(2u64, a), (3u64, b)].into_iter().filter(|&(_, e)| e > 0).collect(),
            )
            .unwrap();
            let trace = BigRational::from_integer(engine.trace(m).unwrap());
            if !is_square(m) {
                assert!(trace_upper_bound(&d) >= trace, "m = {m}");
            }
        }
    }
    // the square-m exception, pinned: Tr B(1) = 5 > 2 = bound of the empty pattern
    let empty = DegreeVector::parse("").unwrap();
    assert_eq!(engine.trace(1).unwrap(), BigInt::from(5));
    assert_eq!(trace_upper_bound(&empty), BigRational::from_integer(BigInt::from(2)));
}

#[test]
fn estimate_accuracy_report() {
    // heuristic quality of the split-half estimate; reported, not asserted
    let fp = FpParams::new(5569).unwrap();
    let g = build_graph(&fp, &[2, 3]).unwrap();
    let mut engine = BrandtEngine::new(&g).unwrap();
    let mut worst = 0.0f64;
    for a in 0..7u32 {
        for b in 0..5u32 {
            let m = 2u128.pow(a) * 3u128.pow(b);
            if m > 100 || m == 1 {
                continue;
            }
            let d = DegreeVector::new(
                [(2u64, a), (3u64, b)].into_iter().filter(|&(_, e)| e > 0).collect(),
            )
            .unwrap();
            let trace = engine.trace(m).unwrap();
            let t: f64 = trace.to_string().parse().unwrap();
            let est: f64 = {
                let e = trace_estimate(&d);
                let num: f64 = e.numer().to_string().parse().unwrap();
                let den: f64 = e.denom().to_string().parse().unwrap();
                num / den
            };
            if t > 0.0 {
                let rel = (est - t).abs() / t;
                worst = worst.max(rel);
                println!("m = {m}: trace {t}, estimate {est:.1}, relative error {rel:.2}");
            }
        }
    }
    println!("worst relative error: {worst:.2}");
}

#[test]
fn ideal_count_equals_matrix_count_for_squarefree_degrees() {
    let subsets_61: [&[u64]; 10] =
        [&[2], &[3], &[5], &[7], &[11], &[13], &[2, 3], &[2, 5], &[2, 11], &[2, 3, 5]];
    for ells in subsets_61 {
        compare(61, ells);
    }
    let subsets_5569: [&[u64]; 5] = [&[2, 3], &[13], &[2, 13], &[3, 7], &[2, 3, 5, 7]];
    for ells in subsets_5569 {
        compare(5569, ells);
    }
}

#[test]
fn trace_cross_oracle_for_large_edge_primes() {
    // products of 7, 11, 13 up to 200, against the class-number trace route
    let fp = FpParams::new(61).unwrap();
    let g = build_graph(&fp, &[7, 11, 13]).unwrap();
    let mut engine = BrandtEngine::new(&g).unwrap();
    for m in [1u64, 7, 11, 13, 49, 77, 91, 121, 143, 169] {
        let lhs = BigRational::from_integer(engine.trace(m as u128).unwrap());
        assert_eq!(lhs, trace_via_hurwitz(m, 61).unwrap(), "m = {m}");
    }
}

fn compare(p: u64, ells: &[u64]) {
    let fp = FpParams::new(p).unwrap();
    let g = build_graph(&fp, ells).unwrap();
    let d = DegreeVector::new(ells.iter().map(|&l| (l, 1)).collect()).unwrap();
    let matrix_count = principal_cycle_count(&g, &d).unwrap().total;
    let ideal = ideal_cycle_count(p, ells).unwrap();
    assert_eq!(
        ideal.total,
        BigRational::from_integer(matrix_count.clone()),
        "p = {p}, L = {ells:?}"
    );
    // and the trace-formula route agrees as well (squarefree: count = Tr B(n))
    let n: u64 = ells.iter().product();
    assert_eq!(
        trace_via_hurwitz(n, p).unwrap(),
        BigRational::from_integer(matrix_count),
        "p = {p}, n = {n}"
    );
}

#[test]
fn per_vertex_counts_match_walk_census() {
    // per-vertex principal counts for p = 61, degrees 2:1,3:1 sum correctly
    // and match the known census (two cycles at j = 9, none at j = 41)
    let fp = FpParams::new(61).unwrap();
    let g = build_graph(&fp, &[2, 3]).unwrap();
    let d = DegreeVector::parse("2:1,3:1").unwrap();
    let res = principal_cycle_count(&g, &d).unwrap();
    let j_of = |idx: usize| g.vertices[idx];
    for (idx, count) in res.per_vertex.iter().enumerate() {
        let j = j_of(idx);
        if j.in_fp() && j.a == 9 {
            assert_eq!(*count, BigInt::from(2));
        }
        if j.in_fp() && j.a == 41 {
            assert_eq!(*count, BigInt::from(0));
        }
        if j.in_fp() && j.a == 50 {
            assert_eq!(*count, BigInt::from(2));
        }
        if !j.in_fp() {
            assert_eq!(*count, BigInt::from(3));
        }
    }
}
