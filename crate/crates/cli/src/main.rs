//! `sbp`: products, symmetry computations and table reproduction from the shell.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sbp_core::alter::{alter_labeling, sum_zero_walk};
use sbp_core::classify::{expected_type, symmetry_type};
use sbp_core::harness::census::{entry_to_dg, generate_atd, ingest, Census};
use sbp_core::harness::table::{compare, read_csv, run_table, write_csv, PairSpec, TableMode};
use sbp_core::io::{read_digraph, to_dg, write_digraph};
use sbp_core::products::{a2d, a2g, box_product, cdc, dart_digraph, extract_component, sbp};
use sbp_core::symmetry::{are_isomorphic, automorphism_group, build_a2g_groups, build_expected_group, find_reversal};
use sbp_core::{Action, Digraph, PermGroup};

#[derive(Parser)]
#[command(name = "sbp", version, about = "Separated box products of digraphs and their symmetries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Separated box product of two digraphs
    Sbp { a: PathBuf, b: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// Cartesian product of two digraphs
    Box { a: PathBuf, b: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// Canonical double cover
    Cdc { g: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// Dart digraph
    Dartdig { g: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// A²D of a graph
    A2d { g: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// A²G of a graph
    A2g { g: PathBuf, #[arg(short, long)] out: Option<PathBuf> },
    /// Connected component containing a seed vertex, relabelled densely
    Component {
        g: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Alter-perimeter and alter class of every vertex
    Alter {
        g: PathBuf,
        /// print a walk from U to V with zero signed sum, or "none"
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        witness: Option<Vec<usize>>,
    },
    /// Automorphism group: generators in cycle notation, one per line
    Aut {
        g: PathBuf,
        /// print only the group order
        #[arg(long)]
        order: bool,
        /// print the orbits on vertices, darts or edges instead
        #[arg(long, value_enum)]
        orbits: Option<OrbitKind>,
    },
    /// Isomorphism test; prints a witness map when one exists
    Iso { a: PathBuf, b: PathBuf },
    /// Reversal test; prints a witness map when one exists
    Reversal { g: PathBuf },
    /// Expected symmetry type and group of the product of two factors
    Expected {
        a: Option<PathBuf>,
        b: Option<PathBuf>,
        #[arg(long, conflicts_with = "a")]
        g1: Option<PathBuf>,
        #[arg(long, conflicts_with = "b")]
        g2: Option<PathBuf>,
        /// also print generators of the expected group on the component
        #[arg(long)]
        generators: bool,
    },
    /// Dart-transitive groups of A²D and A²G of a cubic bipartite graph
    A2ggroups {
        g: PathBuf,
        #[arg(long)]
        generators: bool,
    },
    /// Symmetry type of a connected tetravalent graph, as JSON
    Classify { g: PathBuf },
    /// Generate the dart-transitive 2-valent orientations of one order
    Gen {
        #[arg(long)]
        order: usize,
        /// write one `.dg` file per entry into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a census file
    Ingest {
        file: PathBuf,
        /// accept entries that fail validation
        #[arg(long)]
        force: bool,
    },
    /// Reproduce a product table
    Table {
        #[arg(long)]
        mode: String,
        /// JSON list of names (modes t2-t4) or name pairs (mode t1)
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// compare against this CSV and fail on any mismatch
        #[arg(long)]
        expect: Option<PathBuf>,
        /// render powers of two above 64 as 2^k
        #[arg(long)]
        pow2: bool,
        /// directory of census files to ingest before resolving names
        #[arg(long)]
        census: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitKind {
    Vertices,
    Darts,
    Edges,
}

fn read(p: &Path) -> Result<Digraph> {
    read_digraph(p).with_context(|| format!("reading {}", p.display()))
}

fn emit(g: &Digraph, out: Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => write_digraph(&p, g).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", to_dg(g)),
    }
    Ok(())
}

fn print_map(map: &[usize]) {
    let parts: Vec<String> = map.iter().enumerate().map(|(v, w)| format!("{v}->{w}")).collect();
    println!("{}", parts.join(" "));
}

fn print_generators(group: &PermGroup) {
    for g in group.generators() {
        println!("{g}");
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sbp { a, b, out } => emit(&sbp(&read(&a)?, &read(&b)?), out)?,
        Command::Box { a, b, out } => emit(&box_product(&read(&a)?, &read(&b)?), out)?,
        Command::Cdc { g, out } => emit(&cdc(&read(&g)?), out)?,
        Command::Dartdig { g, out } => emit(&dart_digraph(&read(&g)?), out)?,
        Command::A2d { g, out } => emit(&a2d(&read(&g)?)?, out)?,
        Command::A2g { g, out } => emit(&a2g(&read(&g)?)?, out)?,
        Command::Component { g, seed, out } => {
            let g = read(&g)?;
            if seed >= g.n() {
                bail!("seed {seed} is not a vertex of a digraph on {} vertices", g.n());
            }
            emit(&extract_component(&g, seed).digraph, out)?
        }
        Command::Alter { g, witness } => {
            let g = read(&g)?;
            let l = alter_labeling(&g)?;
            println!("perimeter {}", l.perimeter);
            for (v, c) in l.class_of.iter().enumerate() {
                println!("{v} {c}");
            }
            if let Some(w) = witness {
                let (u, v) = (w[0], w[1]);
                if u >= g.n() || v >= g.n() {
                    bail!("witness endpoints must be vertices");
                }
                match sum_zero_walk(&g, u, v) {
                    // each step is printed as `+w` (along a dart) or `-w` (against one)
                    Some(walk) => {
                        let steps: Vec<String> = walk.vertices[1..]
                            .iter()
                            .zip(&walk.signs)
                            .map(|(w, &s)| format!("{}{w}", if s > 0 { "+" } else { "-" }))
                            .collect();
                        let steps: Vec<String> = std::iter::once(u.to_string()).chain(steps).collect();
                        println!("walk {}", steps.join(" "));
                    }
                    None => println!("none"),
                }
            }
        }
        Command::Aut { g, order, orbits } => {
            let g = read(&g)?;
            let aut = automorphism_group(&g);
            if order {
                println!("{}", aut.order);
            } else if let Some(kind) = orbits {
                let action = match kind {
                    OrbitKind::Vertices => Action::Vertices,
                    OrbitKind::Darts => Action::Darts,
                    OrbitKind::Edges => Action::Edges,
                };
                for o in aut.group.action_orbits(&g, action)? {
                    let items: Vec<String> = o.iter().map(usize::to_string).collect();
                    println!("{}", items.join(" "));
                }
            } else {
                print_generators(&aut.group);
            }
        }
        Command::Iso { a, b } => match are_isomorphic(&read(&a)?, &read(&b)?) {
            Some(map) => {
                println!("isomorphic");
                print_map(&map);
            }
            None => println!("not isomorphic"),
        },
        Command::Reversal { g } => {
            let r = find_reversal(&read(&g)?);
            match r.witness {
                Some(p) if r.exists => {
                    println!("reversible");
                    print_map(p.images());
                }
                _ => println!("not reversible"),
            }
        }
        Command::Expected { a, b, g1, g2, generators } => {
            let (Some(p1), Some(p2)) = (a.or(g1), b.or(g2)) else {
                bail!("two factors are required, positionally or via --g1/--g2");
            };
            let (d1, d2) = (read(&p1)?, read(&p2)?);
            let t = expected_type(&d1, &d2)?;
            match t.clause {
                Some(c) => println!("clause {c}"),
                None => println!("clause none"),
            }
            println!("tag {:?}", t.tag);
            let e = build_expected_group(&d1, &d2, &automorphism_group(&d1).group, &automorphism_group(&d2).group)?;
            println!("order {}", e.group.order());
            if generators {
                print_generators(&e.group);
            }
        }
        Command::A2ggroups { g, generators } => {
            let l = read(&g)?;
            let r = build_a2g_groups(&l, &automorphism_group(&l).group)?;
            println!("H {}", r.h_order);
            println!("A {}", r.a.order());
            println!("B {}", r.b.order());
            if generators {
                println!("# A");
                print_generators(&r.a);
                println!("# B");
                print_generators(&r.b);
            }
        }
        Command::Classify { g } => {
            let s = symmetry_type(&read(&g)?)?;
            let j = serde_json::json!({
                "tag": s.tag.to_string(),
                "vertex_orbits": s.vertex_orbits,
                "edge_orbits": s.edge_orbits,
                "dart_orbits": s.dart_orbits,
                "vs": s.vs.to_string(),
                "dart_stab_nontrivial": s.dart_stab_nontrivial,
                "aut_order": s.aut_order.to_string(),
                "orbits_are_halves": s.orbits_are_halves,
                "klein4_local": s.klein4_local,
            });
            println!("{}", serde_json::to_string_pretty(&j)?);
        }
        Command::Gen { order, out } => {
            let entries = generate_atd(order)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            for e in &entries {
                println!("{} AP {}", e.name, e.alter_perimeter);
                if let Some(dir) = &out {
                    let file = dir.join(format!("{}.dg", e.name.replace(['[', ']', ','], "_")));
                    std::fs::write(&file, entry_to_dg(e)).with_context(|| format!("writing {}", file.display()))?;
                }
            }
        }
        Command::Ingest { file, force } => {
            let (e, v) = ingest(&file, force)?;
            println!("name {}", e.name);
            println!("vertices {}", e.digraph.n());
            println!("connected {}", v.connected);
            println!("two_valent {}", v.two_valent);
            println!("dart_transitive {}", v.dart_transitive);
            if v.connected {
                println!("AP {}", e.alter_perimeter);
            }
            if !v.ok() {
                println!("accepted with --force: {}", v.failures());
            }
        }
        Command::Table { mode, pairs, out, expect, pow2, census } => {
            let mode: TableMode = mode.parse()?;
            let text = std::fs::read_to_string(&pairs).with_context(|| format!("reading {}", pairs.display()))?;
            let specs: Vec<PairSpec> = serde_json::from_str(&text).context("pairs file must be a JSON list")?;
            let mut c = Census::new();
            for dir in &census {
                c.ingest_dir(dir).with_context(|| format!("ingesting {}", dir.display()))?;
            }
            let rows = run_table(&mut c, &specs, mode)?;
            match &out {
                Some(p) => write_csv(&rows, pow2, std::fs::File::create(p)?)?,
                None => write_csv(&rows, pow2, std::io::stdout().lock())?,
            }
            if let Some(p) = expect {
                let expected = read_csv(std::fs::File::open(&p).with_context(|| format!("reading {}", p.display()))?)?;
                let mismatches = compare(&expected, &rows);
                for m in &mismatches {
                    eprintln!("row {} differs: expected {:?}, got {:?}", m.row, m.expected, m.actual);
                }
                if !mismatches.is_empty() {
                    return Ok(ExitCode::FAILURE);
                }
                eprintln!("all {} rows match", rows.len());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
