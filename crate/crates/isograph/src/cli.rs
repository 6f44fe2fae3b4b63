//! Command-line surface wiring the modules into reproducible experiments,
//! with cached graph persistence. The `isograph` binary is a thin shim over
//! [`run`].

use crate::algebra::{Fp2Element, FpParams};
use crate::brandt::{principal_cycle_count, DegreeVector};
use crate::classnum::{
    hurwitz_sum_identity, ideal_cycle_count, trace_estimate, trace_upper_bound, trace_via_hurwitz,
};
use crate::cuts::{
    adjacency_plot, cheeger_bounds, distance_distribution, edge_expansion, fiedler_sweep,
    greedy_order, neighbour_order, spectral_order, sweep_min, FiedlerConvention, VertexOrdering,
};
use crate::decomp::{canonical_decompose, read_walk_file, ModelRegistry};
use crate::error::{Error, Result};
use crate::graph::{build_graph, Cut, IsogenyGraph};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "isograph", version, about = "supersingular L-isogeny graphs: cycle counts, canonical decompositions, and low-expansion cuts")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Graph cache directory.
    #[arg(long, global = true, default_value = "isograph-cache")]
    cache: PathBuf,
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the stochastic subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphAction {
    Build,
    Info,
    Export,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Brandt,
    Hurwitz,
    Ideal,
    Estimate,
    Bound,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CutMethod {
    Spectral,
    Neighbour,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotOrdering {
    Identity,
    Spectral,
    Neighbour,
    Greedy,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, inspect, or export the L-isogeny graph.
    Graph {
        action: GraphAction,
        #[arg(long)]
        p: u64,
        /// Comma-separated edge primes, e.g. 2,3.
        #[arg(long)]
        ells: String,
        /// Output path for `export`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count principal isogeny cycles by the chosen method.
    Count {
        #[arg(long)]
        p: u64,
        /// Degree pattern, e.g. 2:1,3:1.
        #[arg(long, default_value = "")]
        degrees: String,
        /// Count cycles of this total length instead of a fixed pattern.
        #[arg(long, short = 'R')]
        r_len: Option<u32>,
        /// Edge primes for --r-len mode (defaults to the degree primes).
        #[arg(long, default_value = "")]
        ells: String,
        #[arg(long, value_enum, default_value_t = CountMethod::All)]
        method: CountMethod,
    },
    /// Canonically decompose the walk described by a walk file.
    Decompose { walkfile: PathBuf },
    /// Search for a low-expansion cut.
    Cut {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ells: String,
        #[arg(long, value_enum, default_value_t = CutMethod::Spectral)]
        method: CutMethod,
        /// Random starts for neighbour/greedy.
        #[arg(long, default_value_t = 3)]
        trials: u32,
        /// Write the sweep profile CSV here.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Two-sided spectral bounds on the optimal cut quality.
    Cheeger {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ells: String,
    },
    /// BFS distance distribution from a vertex.
    Distances {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ells: String,
        /// Start j-invariant, rendered as "a" or "a+b*i".
        #[arg(long)]
        j: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjacency dot plot as a PGM image.
    Plot {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ells: String,
        #[arg(long, value_enum, default_value_t = PlotOrdering::Identity)]
        ordering: PlotOrdering,
        #[arg(long)]
        out: PathBuf,
        /// Shuffle vertices within the sweep cut and within its complement.
        #[arg(long, default_value_t = false)]
        shuffle: bool,
    },
    /// Regenerate the bundled reference experiments into a report directory.
    Repro {
        #[arg(long, default_value = "repro-report")]
        out: PathBuf,
        /// Skip the largest graph (p = 10007) to finish quickly.
        #[arg(long, default_value_t = false)]
        quick: bool,
    },
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_ells(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad prime '{part}' in ells")))?,
        );
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("ells must name at least one prime".into()));
    }
    Ok(out)
}

fn cache_key(p: u64, ells: &[u64]) -> String {
    let tags: Vec<String> = ells.iter().map(|l| l.to_string()).collect();
    format!("{}_{}.isograph", p, tags.join(","))
}

/// Builds or loads the cached graph; the cache is written under a lock file
/// so concurrent processes do not interleave writes.
pub fn cached_graph(p: u64, ells: &[u64], cache_dir: &Path) -> Result<IsogenyGraph> {
    let mut ells = ells.to_vec();
    ells.sort_unstable();
    ells.dedup();
    let path = cache_dir.join(cache_key(p, &ells));
    if path.exists() {
        return IsogenyGraph::load_from_path(&path);
    }
    let fp = FpParams::new(p)?;
    let g = build_graph(&fp, &ells)?;
    std::fs::create_dir_all(cache_dir)?;
    let lock = path.with_extension("isograph.lock");
    match std::fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
        Ok(_) => {
            let res = g.save_to_path(&path);
            let _ = std::fs::remove_file(&lock);
            res?;
        }
        Err(_) => {
            // another process is writing; serve the freshly built graph
        }
    }
    Ok(g)
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Graph { action, p, ells, out } => {
            let ells = parse_ells(ells)?;
            let g = cached_graph(*p, &ells, &cli.cache)?;
            match action {
                GraphAction::Build => {
                    println!("built graph for p={} ells={:?}: {} vertices", p, g.ells, g.n_vertices());
                }
                GraphAction::Info => {
                    println!("p = {}", g.params.p);
                    println!("ells = {:?}", g.ells);
                    println!("{} vertices", g.n_vertices());
                    println!("out-regularity d = {}", g.regularity());
                    println!("symmetric adjacency: {}", g.is_symmetric());
                    let rational = g.vertices.iter().filter(|j| j.in_fp()).count();
                    println!("j-invariants in F_p: {rational}; conjugate pairs: {}", (g.n_vertices() - rational) / 2);
                }
                GraphAction::Export => {
                    let out = out.clone().ok_or_else(|| Error::InvalidInput("export needs --out".into()))?;
                    g.save_to_path(&out)?;
                    println!("wrote {}", out.display());
                }
            }
        }
        Command::Count { p, degrees, r_len, ells, method } => {
            if let Some(r) = r_len {
                let ells = parse_ells(ells)?;
                let g = cached_graph(*p, &ells, &cli.cache)?;
                let total = crate::brandt::length_r_count(&g, *r)?;
                println!("principal cycles of length {r} over L={ells:?}: {total}");
                return Ok(());
            }
            let d = DegreeVector::parse(degrees)?;
            if d.pairs().is_empty() {
                return Err(Error::InvalidInput("--degrees must be nonempty, e.g. 2:1,3:1".into()));
            }
            let rows = count_rows(*p, &d, *method, &cli.cache)?;
            match cli.format {
                Format::Text => {
                    println!("p = {p}, degrees = {}", d.render());
                    for (name, value) in rows {
                        println!("  {name:<22} {value}");
                    }
                }
                Format::Csv => {
                    println!("method,value");
                    for (name, value) in rows {
                        println!("{name},{value}");
                    }
                }
            }
        }
        Command::Decompose { walkfile } => {
            let text = std::fs::read_to_string(walkfile)?;
            let (fp, start, path) = read_walk_file(&text)?;
            let mut registry = ModelRegistry::new();
            registry.canonical(&start.j_invariant(&fp), &start);
            let walk = crate::decomp::walk_from_path(&start, &path, &mut registry, &fp)?;
            let d = canonical_decompose(&walk, &mut registry, &fp)?;
            println!("scalar = {}", d.scalar);
            let degs: Vec<String> = d.sorted_steps.iter().map(|s| s.degree.to_string()).collect();
            println!("steps = [{}]", degs.join(", "));
            for s in &d.sorted_steps {
                println!("  ({}, [{}])", s.degree, s.kernel_poly.render());
            }
            println!("principal = {}", d.scalar == 1);
        }
        Command::Cut { p, ells, method, trials, profile } => {
            let ells = parse_ells(ells)?;
            let g = cached_graph(*p, &ells, &cli.cache)?;
            let (cut, phi, order) = match method {
                CutMethod::Spectral => {
                    let order = spectral_order(&g, FiedlerConvention::SecondLargest)?;
                    let (cut, phi) = sweep_min(&g, &order)?;
                    (cut, phi, order)
                }
                CutMethod::Neighbour | CutMethod::Greedy => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let mut best: Option<(Cut, f64, VertexOrdering)> = None;
                    let mut phis = Vec::new();
                    for _ in 0..*trials {
                        let v0 = rng.gen_range(0..g.n_vertices());
                        let order = match method {
                            CutMethod::Neighbour => neighbour_order(&g, v0)?,
                            _ => greedy_order(&g, v0)?,
                        };
                        let (cut, phi) = sweep_min(&g, &order)?;
                        phis.push(phi);
                        if best.as_ref().map_or(true, |(_, b, _)| phi < *b) {
                            best = Some((cut, phi, order));
                        }
                    }
                    let mean: f64 = phis.iter().sum::<f64>() / phis.len() as f64;
                    println!("mean phi over {} starts: {:.6}", trials, mean);
                    best.ok_or_else(|| Error::InvalidInput("trials must be >= 1".into()))?
                }
            };
            println!("cut size = {} of {}", cut.size(), g.n_vertices());
            println!("phi = {:.6}", phi);
            if let Some(path) = profile {
                let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                writeln!(f, "prefix_size,phi")?;
                for (i, phi) in crate::cuts::sweep_profile(&g, &order)?.iter().enumerate() {
                    writeln!(f, "{},{:.6}", i + 1, phi)?;
                }
                println!("wrote {}", path.display());
            }
        }
        Command::Cheeger { p, ells } => {
            let ells = parse_ells(ells)?;
            let g = cached_graph(*p, &ells, &cli.cache)?;
            let (lo, hi) = cheeger_bounds(&g)?;
            println!("cheeger lower bound = {:.6}", lo);
            println!("cheeger upper bound = {:.6}", hi);
        }
        Command::Distances { p, ells, j, out } => {
            let ells = parse_ells(ells)?;
            let g = cached_graph(*p, &ells, &cli.cache)?;
            let j = Fp2Element::parse(j, &g.params)?;
            let v = g
                .vertex_index(&j)
                .ok_or_else(|| Error::InvalidInput(format!("j = {} is not a vertex", j.render())))?;
            let counts = distance_distribution(&g, v)?;
            let mut csv = String::from("distance,count\n");
            for (d, c) in counts.iter().enumerate() {
                csv.push_str(&format!("{d},{c}\n"));
            }
            match out {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::Plot { p, ells, ordering, out, shuffle } => {
            let ells = parse_ells(ells)?;
            let g = cached_graph(*p, &ells, &cli.cache)?;
            let order = match ordering {
                PlotOrdering::Identity => VertexOrdering::identity(g.n_vertices()),
                PlotOrdering::Spectral => spectral_order(&g, FiedlerConvention::SecondLargest)?,
                PlotOrdering::Neighbour => neighbour_order(&g, 0)?,
                PlotOrdering::Greedy => greedy_order(&g, 0)?,
            };
            let img = if *shuffle {
                let (cut, _) = sweep_min(&g, &order)?;
                adjacency_plot(&g, &order, Some((&cut, cli.seed)))?
            } else {
                adjacency_plot(&g, &order, None)?
            };
            img.save(out)?;
            println!("wrote {} ({}x{})", out.display(), img.width, img.height);
        }
        Command::Repro { out, quick } => {
            repro(out, *quick, &cli.cache)?;
        }
    }
    Ok(())
}

fn count_rows(
    p: u64,
    d: &DegreeVector,
    method: CountMethod,
    cache: &Path,
) -> Result<Vec<(&'static str, String)>> {
    let mut rows = Vec::new();
    let want = |m: CountMethod| method == m || method == CountMethod::All;
    if want(CountMethod::Brandt) {
        let g = cached_graph(p, &d.ells(), cache)?;
        let c = principal_cycle_count(&g, d)?;
        rows.push(("brandt-trace", c.total.to_string()));
    }
    if want(CountMethod::Hurwitz) {
        rows.push(("hurwitz-trace", principal_count_via_hurwitz(p, d)?.to_string()));
    }
    if want(CountMethod::Ideal) {
        match ideal_cycle_count(p, &d.ells()) {
            Ok(res) if d.pairs().iter().all(|&(_, e)| e == 1) => {
                rows.push(("ideal-theoretic", res.total.to_string()));
            }
            Ok(_) | Err(Error::NonSquarefreeDegree(_)) if method == CountMethod::All => {
                rows.push(("ideal-theoretic", "n/a (degree not squarefree)".into()));
            }
            Ok(res) => rows.push(("ideal-theoretic", res.total.to_string())),
            Err(e) => return Err(e),
        }
    }
    if want(CountMethod::Estimate) {
        rows.push(("trace-estimate", trace_estimate(d).to_string()));
    }
    if want(CountMethod::Bound) {
        rows.push(("trace-upper-bound", trace_upper_bound(d).to_string()));
    }
    Ok(rows)
}

/// Thm 4.1 evaluated through the Hurwitz trace formula instead of matrices.
pub fn principal_count_via_hurwitz(p: u64, d: &DegreeVector) -> Result<BigRational> {
    for &(l, e) in d.pairs() {
        if e == 0 {
            return Err(Error::InvalidExponent(l));
        }
    }
    if p % 12 != 1 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let m = d.product();
    let r = d.pairs().len();
    let mut acc = BigRational::from_integer(BigInt::from(0));
    for mask in 0u32..(1 << r) {
        let mut arg = m;
        let mut ok = true;
        for (bit, &(l, _)) in d.pairs().iter().enumerate() {
            if mask & (1 << bit) != 0 {
                let l2 = (l as u128) * (l as u128);
                if arg % l2 != 0 {
                    ok = false;
                    break;
                }
                arg /= l2;
            }
        }
        if !ok {
            continue;
        }
        let t = trace_via_hurwitz(arg as u64, p)?;
        if mask.count_ones() % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc)
}

/// Regenerates the bundled reference numbers into a report directory.
fn repro(out: &Path, quick: bool, cache: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    // cycle counts over F_61
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(out.join("counts_61.txt"))?);
        let d = DegreeVector::parse("2:1,3:1")?;
        let g = cached_graph(61, &[2, 3], cache)?;
        let brandt = principal_cycle_count(&g, &d)?;
        writeln!(f, "p=61 degrees=2:1,3:1")?;
        writeln!(f, "brandt-trace         {}", brandt.total)?;
        writeln!(f, "hurwitz-trace        {}", principal_count_via_hurwitz(61, &d)?)?;
        let ideal = ideal_cycle_count(61, &[2, 3])?;
        writeln!(f, "ideal-theoretic      {}", ideal.total)?;
        for c in &ideal.contributions {
            writeln!(f, "  disc={} h={} norm-count={}", c.disc, c.class_number, c.norm_count)?;
        }
        writeln!(f, "trace-estimate       {}", trace_estimate(&d))?;
        writeln!(f, "trace-upper-bound    {}", trace_upper_bound(&d))?;
        writeln!(f, "hurwitz-sum(m=6)     {}", hurwitz_sum_identity(6))?;
    }
    // canonical decomposition over F_2689
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(out.join("decompose_2689.txt"))?);
        let fp = FpParams::new(2689)?;
        let mk = |a: u64, b: u64| {
            crate::curves::Curve::new(Fp2Element::from_u64(a, &fp), Fp2Element::from_u64(b, &fp), &fp)
        };
        let e0 = mk(2236, 1886)?;
        let targets = [mk(732, 2243)?, mk(750, 791)?, mk(1996, 1015)?, e0];
        let degrees = [2u64, 5, 2, 13];
        let mut registry = ModelRegistry::new();
        registry.canonical(&e0.j_invariant(&fp), &e0);
        let path: Vec<crate::decomp::PathStep> = degrees
            .iter()
            .zip(targets.iter())
            .map(|(&ell, t)| crate::decomp::PathStep { ell, target_j: t.j_invariant(&fp), branch: 0 })
            .collect();
        let walk = crate::decomp::walk_from_path(&e0, &path, &mut registry, &fp)?;
        let d = canonical_decompose(&walk, &mut registry, &fp)?;
        writeln!(f, "p=2689 start=y^2=x^3+2236x+1886 path=2,5,2,13")?;
        writeln!(f, "scalar = {}", d.scalar)?;
        let degs: Vec<String> = d.sorted_steps.iter().map(|s| s.degree.to_string()).collect();
        writeln!(f, "steps = [{}]", degs.join(", "))?;
        writeln!(f, "principal = {}", d.scalar == 1)?;
    }
    // spectral example for p = 419
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(out.join("spectral_419.txt"))?);
        let g = cached_graph(419, &[2, 3], cache)?;
        let lap = crate::cuts::spectral_laplacian(&g);
        let spec = crate::cuts::eigen_symmetric(&lap)?;
        let n = g.n_vertices();
        writeln!(f, "p=419 L=2,3 vertices={n}")?;
        writeln!(f, "second-largest laplacian eigenvalue = {:.4}", spec.eigenvalues[n - 2])?;
        let (cut, phi) = fiedler_sweep(&g)?;
        writeln!(f, "sweep cut size = {} phi = {:.4}", cut.size(), phi)?;
    }
    // cut-quality table across (p, L) rows
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(out.join("cut_table.csv"))?);
        writeln!(f, "p,ells,spectral,neighbour,greedy,cheeger_lb,cheeger_ub")?;
        let mut rows: Vec<(u64, Vec<u64>)> = vec![
            (419, vec![3]),
            (419, vec![2, 3]),
            (419, vec![2, 3, 5, 7, 11]),
            (5569, vec![3]),
            (5569, vec![2, 3]),
            (5569, vec![2, 3, 5, 7, 11]),
        ];
        if !quick {
            rows.push((10007, vec![3]));
        }
        for (p, ells) in rows {
            let g = cached_graph(p, &ells, cache)?;
            let (_, sp) = fiedler_sweep(&g)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut nb = 0.0;
            let mut gr = 0.0;
            for _ in 0..3 {
                let v0 = rng.gen_range(0..g.n_vertices());
                nb += sweep_min(&g, &neighbour_order(&g, v0)?)?.1;
                gr += sweep_min(&g, &greedy_order(&g, v0)?)?.1;
            }
            let (lo, hi) = cheeger_bounds(&g)?;
            let tags: Vec<String> = ells.iter().map(|l| l.to_string()).collect();
            writeln!(
                f,
                "{},{},{:.4},{:.4},{:.4},{:.4},{:.4}",
                p,
                tags.join("|"),
                sp,
                nb / 3.0,
                gr / 3.0,
                lo,
                hi
            )?;
        }
    }
    // distance distribution for p = 2689 from j = 30
    {
        let g = cached_graph(2689, &[2], cache)?;
        let j = Fp2Element::from_u64(30, &g.params);
        let v = g
            .vertex_index(&j)
            .ok_or_else(|| Error::InvalidInput("j = 30 is not a vertex of G(2689, {2})".into()))?;
        let counts = distance_distribution(&g, v)?;
        let mut csv = String::from("distance,count\n");
        for (d, c) in counts.iter().enumerate() {
            csv.push_str(&format!("{d},{c}\n"));
        }
        std::fs::write(out.join("distances_2689.csv"), csv)?;
    }
    // adjacency plots for p = 5569, L = {2,3}
    {
        let g = cached_graph(5569, &[2, 3], cache)?;
        for (name, order) in [
            ("spectral", spectral_order(&g, FiedlerConvention::SecondLargest)?),
            ("neighbour", neighbour_order(&g, 0)?),
            ("greedy", greedy_order(&g, 0)?),
        ] {
            let img = adjacency_plot(&g, &order, None)?;
            img.save(&out.join(format!("plot_5569_{name}.pgm")))?;
        }
    }
    // singleton expansion sanity value used in the text examples
    {
        let g = cached_graph(61, &[2], cache)?;
        let v9 = g
            .vertex_index(&Fp2Element::from_u64(9, &g.params))
            .expect("j = 9 is a vertex");
        let cut = Cut::from_indices(&[v9], g.n_vertices())?;
        let h = edge_expansion(&g, &cut)?;
        std::fs::write(out.join("expansion_61.txt"), format!("h({{j=9}}) in G(61,{{2}}) = {h:.6}\n"))?;
    }
    println!("report written to {}", out.display());
    Ok(())
}
