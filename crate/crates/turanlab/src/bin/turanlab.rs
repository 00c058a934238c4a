use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use turanlab::constructions::{e_n_edge_count, iterated_blowup};
use turanlab::error::Error;
use turanlab::hypergraph::{cycle_minus_one, tight_cycle, Hypergraph3};
use turanlab::manifest::RunManifest;
use turanlab::orientation::{
    find_bottle, orient, verify_bottle, verify_orientation, OrientationOutcome,
};
use turanlab::plane::{
    lattice_patch, points_from_text, points_to_text, rainbow_check, similarity_hypergraph,
    TriangleShape,
};
use turanlab::search::{codegree_clean, exact_turan, stability_partition, ForbiddenFamily};
use turanlab::tournament::{d5, t5_family, Tournament};
use turanlab::walks::{embed_cm_in_blowup, is_fcm_free, minimal_blowup_factor};

#[derive(Parser)]
#[command(
    name = "turanlab",
    version,
    about = "Orientability certificates, tight-walk detection, and exact Turán search for 3-uniform hypergraphs"
)]
struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker pool size. Accepted for compatibility; every operation
    /// currently runs sequentially so results never depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// RNG seed. Required by randomized paths; never defaulted from time.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-oriented text.
    Text,
    /// Line-delimited key=value records.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Generate named hypergraphs.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Decide orientability: witness tournament or bottle certificate.
    Orient { file: PathBuf },
    /// Find a shortest bottle, if any.
    FindBottle { file: PathBuf },
    /// Check freeness of tight cycles minus one hyperedge up to a bound.
    CheckFree {
        /// Largest cycle size to test (sizes divisible by 3 are skipped).
        #[arg(long)]
        max_cycle: usize,
        file: PathBuf,
    },
    /// Exact Turán number by exhaustive search (n <= 8).
    Turan {
        #[arg(long)]
        n: usize,
        /// One of: k4-minus, c5-minus, fcm, none.
        #[arg(long)]
        family: String,
        /// Size bound for the fcm family.
        #[arg(long)]
        l: Option<usize>,
        /// Directory to write extremal examples into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Codegree cleaning: delete pairs of positive codegree below a threshold.
    Clean {
        #[arg(long)]
        threshold: usize,
        file: PathBuf,
    },
    /// Extract the three-part stability structure of an orientable input.
    Stability { file: PathBuf },
    /// Reference tournaments.
    Tournaments {
        #[command(subcommand)]
        what: TournamentsWhat,
    },
    /// Build the explicit tight-cycle embedding inside a blow-up.
    Embed {
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
        /// Blow-up factor; defaults to the case minimum.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Build the similar-triangle hypergraph of a planar point set.
    TriHypergraph {
        /// "equilateral" or three comma-separated integer degrees.
        #[arg(long, default_value = "equilateral")]
        shape: String,
        /// Angle tolerance in degrees.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        file: PathBuf,
    },
    /// Emit a colored triangular-lattice patch as a point set.
    Lattice {
        #[arg(long)]
        radius: i64,
        /// Check the rainbow property instead of printing points.
        #[arg(long)]
        check_rainbow: bool,
    },
    /// Verify certificates and witnesses.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
}

#[derive(Subcommand)]
enum GenWhat {
    /// The iterated blow-up of a single hyperedge.
    En {
        #[arg(long)]
        n: usize,
        /// Print only the exact edge count.
        #[arg(long)]
        count_only: bool,
    },
    /// The tight cycle.
    Cycle {
        #[arg(long)]
        l: usize,
    },
    /// The tight cycle minus one hyperedge.
    Cm {
        #[arg(long)]
        l: usize,
    },
}

#[derive(Subcommand)]
enum TournamentsWhat {
    /// The five-vertex tournament the stability analysis removes.
    D5,
    /// All labeled 5-vertex tournaments whose cyclic hypergraph hosts an
    /// injective tight 5-cycle minus one hyperedge.
    T5 {
        /// Directory to write the members into, one file per tournament.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Check a bottle certificate against a hypergraph.
    Bottle { file: PathBuf, sequence: Vec<u32> },
    /// Check that every edge of a hypergraph is cyclic in a tournament.
    Orientation {
        hypergraph: PathBuf,
        tournament: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(64);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotOrientable(cert) = &e {
                eprintln!("bottle: {}", join(cert.sequence()));
            }
            match e {
                Error::ResourceLimit(_) => ExitCode::from(3),
                Error::Internal(_) => ExitCode::from(70),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn join(xs: &[u32]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_input(path: &Path, manifest: &mut RunManifest) -> Result<String, Error> {
    let bytes =
        fs::read(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    *manifest = std::mem::take(manifest).input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn parse_family(name: &str, l: Option<usize>) -> Result<ForbiddenFamily, Error> {
    match name {
        "k4-minus" => Ok(ForbiddenFamily::K4Minus),
        "c5-minus" => Ok(ForbiddenFamily::C5Minus),
        "none" => Ok(ForbiddenFamily::Explicit(vec![])),
        "fcm" => {
            let l = l.ok_or_else(|| {
                Error::InvalidArgument("--l is required for the fcm family".into())
            })?;
            Ok(ForbiddenFamily::Fcm(l))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown family '{other}' (expected k4-minus, c5-minus, fcm, none)"
        ))),
    }
}

fn parse_shape(spec: &str) -> Result<TriangleShape, Error> {
    if spec == "equilateral" {
        return Ok(TriangleShape::equilateral());
    }
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "shape must be 'equilateral' or 'a,b,c' in degrees, got '{spec}'"
        )));
    }
    let mut angles = [0i64; 3];
    for (slot, p) in angles.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad angle '{p}'")))?;
    }
    TriangleShape::from_integers(angles[0], angles[1], angles[2])
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let records = cli.format == Format::Records;
    match &cli.command {
        Command::Gen { what } => match *what {
            GenWhat::En { n, count_only } => {
                let mut manifest = RunManifest::new("gen-en")
                    .param("n", n)
                    .param("count_only", count_only)
                    .seed(cli.seed);
                manifest = manifest.param("format", if records { "records" } else { "text" });
                eprint!("{}", manifest.render());
                if count_only {
                    let count = e_n_edge_count(n);
                    if records {
                        println!("edges={count}");
                    } else {
                        println!("{count}");
                    }
                } else {
                    print!("{}", iterated_blowup(n)?.to_text());
                }
                Ok(ExitCode::SUCCESS)
            }
            GenWhat::Cycle { l } => {
                if l < 4 {
                    return Err(Error::InvalidArgument("cycle size must be >= 4".into()));
                }
                eprint!("{}", RunManifest::new("gen-cycle").param("l", l).render());
                print!("{}", tight_cycle(l).to_text());
                Ok(ExitCode::SUCCESS)
            }
            GenWhat::Cm { l } => {
                if l < 4 {
                    return Err(Error::InvalidArgument("cycle size must be >= 4".into()));
                }
                eprint!("{}", RunManifest::new("gen-cm").param("l", l).render());
                print!("{}", cycle_minus_one(l).to_text());
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Orient { file } => {
            let mut manifest = RunManifest::new("orient").seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let h = Hypergraph3::from_text(&text)?;
            match orient(&h) {
                OrientationOutcome::Witness(t) => {
                    if records {
                        println!("outcome=orientable");
                        for u in 0..t.vertex_count() as u32 {
                            for v in u + 1..t.vertex_count() as u32 {
                                if t.beats(u, v) {
                                    println!("arc={u} {v}");
                                } else {
                                    println!("arc={v} {u}");
                                }
                            }
                        }
                    } else {
                        println!("ORIENTABLE");
                        print!("{}", t.to_text());
                    }
                }
                OrientationOutcome::Certificate(c) => {
                    if records {
                        println!("outcome=bottle");
                        println!("certificate={}", join(c.sequence()));
                    } else {
                        println!("BOTTLE");
                        println!("{}", join(c.sequence()));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FindBottle { file } => {
            let mut manifest = RunManifest::new("find-bottle").seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let h = Hypergraph3::from_text(&text)?;
            match find_bottle(&h) {
                Some(c) => {
                    if records {
                        println!("outcome=bottle");
                        println!("certificate={}", join(c.sequence()));
                    } else {
                        println!("BOTTLE");
                        println!("{}", join(c.sequence()));
                    }
                }
                None => {
                    if records {
                        println!("outcome=none");
                    } else {
                        println!("NONE");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckFree { max_cycle, file } => {
            let mut manifest = RunManifest::new("check-free")
                .param("max_cycle", max_cycle)
                .seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let h = Hypergraph3::from_text(&text)?;
            let (free, witness) = is_fcm_free(&h, *max_cycle);
            if free {
                if records {
                    println!("free=true");
                } else {
                    println!("FREE");
                }
            } else {
                let w = witness.expect("violation carries a witness");
                if records {
                    println!("free=false");
                    println!("l={}", w.vertices.len());
                    println!("witness={}", join(&w.vertices));
                } else {
                    println!("l={}: {}", w.vertices.len(), join(&w.vertices));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Turan { n, family, l, out } => {
            let fam = parse_family(family, *l)?;
            let mut manifest = RunManifest::new("turan")
                .param("n", n)
                .param("family", fam.name())
                .seed(cli.seed);
            if let Some(l) = l {
                manifest = manifest.param("l", l);
            }
            eprint!("{}", manifest.render());
            let result = exact_turan(*n, &fam)?;
            if records {
                println!("max_edges={}", result.max_edges);
                println!("extremal_classes={}", result.extremal_examples.len());
                println!("nodes_explored={}", result.nodes_explored);
            } else {
                println!("max_edges: {}", result.max_edges);
                println!("extremal classes: {}", result.extremal_examples.len());
                println!("nodes explored: {}", result.nodes_explored);
            }
            if let Some(dir) = out {
                fs::create_dir_all(dir)
                    .map_err(|e| Error::Parse(format!("cannot create {}: {e}", dir.display())))?;
                for (i, ex) in result.extremal_examples.iter().enumerate() {
                    write_file(&dir.join(format!("extremal_{i}.txt")), &ex.to_text())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Clean { threshold, file } => {
            let mut manifest = RunManifest::new("clean")
                .param("threshold", threshold)
                .seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let h = Hypergraph3::from_text(&text)?;
            print!("{}", codegree_clean(&h, *threshold).to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Stability { file } => {
            let mut manifest = RunManifest::new("stability").seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let h = Hypergraph3::from_text(&text)?;
            let (pi, report, diag) = stability_partition(&h)?;
            let sizes = pi.part_sizes();
            if records {
                println!("pivot={}", diag.pivot);
                println!("part_sizes={} {} {}", sizes[0], sizes[1], sizes[2]);
                println!("crossing={}", report.crossing.len());
                println!("missing_crossing={}", report.missing_crossing.len());
                println!("bad={}", report.bad.len());
            } else {
                println!("pivot: {}", diag.pivot);
                println!("part sizes: {} {} {}", sizes[0], sizes[1], sizes[2]);
                println!(
                    "crossing: {} missing: {} bad: {}",
                    report.crossing.len(),
                    report.missing_crossing.len(),
                    report.bad.len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tournaments { what } => match what {
            TournamentsWhat::D5 => {
                eprint!("{}", RunManifest::new("tournaments-d5").render());
                print!("{}", d5().to_text());
                Ok(ExitCode::SUCCESS)
            }
            TournamentsWhat::T5 { out } => {
                eprint!("{}", RunManifest::new("tournaments-t5").render());
                let family = t5_family();
                if records {
                    println!("size={}", family.len());
                    for t in &family {
                        println!("code={}", t.bit_code());
                    }
                } else {
                    println!("family size: {}", family.len());
                    for t in &family {
                        println!("{}", t.bit_code());
                    }
                }
                if let Some(dir) = out {
                    fs::create_dir_all(dir).map_err(|e| {
                        Error::Parse(format!("cannot create {}: {e}", dir.display()))
                    })?;
                    for t in &family {
                        write_file(
                            &dir.join(format!("t5_{:04}.txt", t.bit_code())),
                            &t.to_text(),
                        )?;
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Embed { l1, l2, t } => {
            let t_min = minimal_blowup_factor(*l1, *l2)?;
            let t = t.unwrap_or(t_min);
            let mut manifest = RunManifest::new("embed")
                .param("l1", l1)
                .param("l2", l2)
                .seed(cli.seed);
            manifest = manifest.param("t", t);
            eprint!("{}", manifest.render());
            let emb = embed_cm_in_blowup(*l1, *l2, t)?;
            if records {
                println!("t={}", emb.factor);
                println!("t_min={t_min}");
                println!("host_vertices={}", emb.host.vertex_count());
                println!("host_edges={}", emb.host.edge_count());
                println!("witness={}", join(&emb.witness.vertices));
            } else {
                println!("t: {} (minimum {t_min})", emb.factor);
                println!(
                    "host: {} vertices, {} edges",
                    emb.host.vertex_count(),
                    emb.host.edge_count()
                );
                println!("witness: {}", join(&emb.witness.vertices));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::TriHypergraph { shape, eps, file } => {
            let shape = parse_shape(shape)?;
            let mut manifest = RunManifest::new("tri-hypergraph")
                .param("shape", format!("{:?}", shape.angles()))
                .param("eps", eps)
                .seed(cli.seed);
            let text = read_input(file, &mut manifest)?;
            eprint!("{}", manifest.render());
            let points = points_from_text(&text)?;
            let h = similarity_hypergraph(&points, &shape, *eps)?;
            print!("{}", h.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Lattice {
            radius,
            check_rainbow,
        } => {
            if *radius < 0 {
                return Err(Error::InvalidArgument("radius must be non-negative".into()));
            }
            eprint!(
                "{}",
                RunManifest::new("lattice")
                    .param("radius", radius)
                    .param("check_rainbow", check_rainbow)
                    .render()
            );
            let patch = lattice_patch(*radius);
            if *check_rainbow {
                let ok = rainbow_check(&patch);
                if records {
                    println!("rainbow={ok}");
                } else {
                    println!("RAINBOW {ok}");
                }
            } else {
                let points: Vec<_> = patch.into_iter().map(|p| p.point).collect();
                print!("{}", points_to_text(&points));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { what } => match what {
            VerifyWhat::Bottle { file, sequence } => {
                let mut manifest = RunManifest::new("verify-bottle")
                    .param("sequence", join(sequence))
                    .seed(cli.seed);
                let text = read_input(file, &mut manifest)?;
                eprint!("{}", manifest.render());
                let h = Hypergraph3::from_text(&text)?;
                if verify_bottle(&h, sequence) {
                    println!("OK");
                    Ok(ExitCode::SUCCESS)
                } else {
                    println!("FAIL");
                    Ok(ExitCode::from(1))
                }
            }
            VerifyWhat::Orientation {
                hypergraph,
                tournament,
            } => {
                let mut manifest = RunManifest::new("verify-orientation").seed(cli.seed);
                let htext = read_input(hypergraph, &mut manifest)?;
                let ttext = read_input(tournament, &mut manifest)?;
                eprint!("{}", manifest.render());
                let h = Hypergraph3::from_text(&htext)?;
                let t = Tournament::from_text(&ttext)?;
                if verify_orientation(&h, &t)? {
                    println!("OK");
                    Ok(ExitCode::SUCCESS)
                } else {
                    println!("FAIL");
                    Ok(ExitCode::from(1))
                }
            }
        },
    }
}
