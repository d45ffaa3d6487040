//! Command-line driver: partition generation, doubling, invariants, quotient
//! graphs, triple-system typing, schedule verification, cataloging, and a
//! kernel-dimension sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spcodes::bitcode::{is_extended_perfect, kernel, rank, Subspace};
use spcodes::fano::extended_hamming_code;
use spcodes::io::{
    read_code, read_partition, sorted_files, write_code, write_partition, write_text,
};
use spcodes::partitions::{
    decompose_doubling, double, enumerate_unit_codes, linear_partition, mixed_cover_partitions,
    partition_core, search_partitions, ExtendedPartition, Permutation,
};
use spcodes::sqsgraph::quotient_graph;
use spcodes::ststype::{code_type_profile, homogeneity_class, render_profiles};
use spcodes::verify::verify_code;
use spcodes::{Code, Error, Result};

#[derive(Parser)]
#[command(
    name = "spcodes",
    version,
    about = "Extended 1-perfect codes of length 16: doubling constructions and quotient-graph invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate extended 1-perfect partitions of length 8 into a directory,
    /// covering every realizable translation-core dimension.
    GenPartitions {
        /// Maximum number of partition files to write.
        #[arg(long)]
        limit: usize,
        /// Output directory for `.part` files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Double two partitions through a class permutation into a length-16
    /// code.
    Double {
        /// Partition supplying the low octet classes.
        #[arg(long)]
        src: PathBuf,
        /// Partition supplying the high octet classes.
        #[arg(long)]
        dst: PathBuf,
        /// Class permutation as eight comma-separated images of 0..=7.
        #[arg(long)]
        sigma: String,
        /// Output code file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the invariants of a code: rank, kernel, octet cores, and the
    /// recovered doubling when one exists.
    Invariants {
        #[arg(long)]
        code: PathBuf,
    },
    /// Write the quotient of the minimum-distance graph modulo the kernel or
    /// the trivial subspace.
    SqsGraph {
        #[arg(long)]
        code: PathBuf,
        /// Subspace to quotient by.
        #[arg(long = "mod", value_enum)]
        modulus: Modulus,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify the derived triple systems of every kernel coset and report
    /// the homogeneity verdict.
    StsTypes {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the scheduled quotient-graph structure for the code's kernel
    /// dimension. Exits 0 exactly when every check passes.
    VerifyThm5 {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize every `.code` file in a directory into one table.
    Catalog {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Construct doublings from the partitions in a directory until each
    /// target kernel dimension is reached, verifying every hit.
    SweepKappa {
        /// Directory of `.part` files (see `gen-partitions`).
        #[arg(long)]
        dir: PathBuf,
        /// Kernel dimensions to reach, comma separated.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Modulus {
    Kernel,
    Trivial,
}

fn main() -> ExitCode {
    // Table output is meant for piping; die quietly on a closed pipe instead
    // of panicking, matching ordinary shell tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::GenPartitions { limit, out } => gen_partitions(limit, &out),
        Command::Double {
            src,
            dst,
            sigma,
            out,
        } => cmd_double(&src, &dst, &sigma, &out),
        Command::Invariants { code } => invariants(&code),
        Command::SqsGraph { code, modulus, out } => sqs_graph(&code, modulus, &out),
        Command::StsTypes { code, out } => sts_types(&code, &out),
        Command::VerifyThm5 { code, out } => verify_thm5(&code, &out),
        Command::Catalog { dir, out } => catalog(&dir, &out),
        Command::SweepKappa { dir, targets } => sweep_kappa(&dir, &targets),
    }
}

/// Generation order interleaves one partition of each translation-core
/// dimension 4, 3, 2, 1 first, so that even a small limit yields material
/// for every reachable kernel dimension.
fn gen_partitions(limit: usize, out: &Path) -> Result<ExitCode> {
    let mut buckets: BTreeMap<usize, Vec<(ExtendedPartition, String)>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    let add = |buckets: &mut BTreeMap<usize, Vec<(ExtendedPartition, String)>>,
                   seen: &mut std::collections::BTreeSet<u64>,
                   p: ExtendedPartition,
                   family: &str| {
        if seen.insert(p.fingerprint()) {
            let dim = partition_core(&p).dimension();
            buckets.entry(dim).or_default().push((p, family.to_string()));
        }
    };

    add(&mut buckets, &mut seen, linear_partition(), "unit cosets");

    let units = enumerate_unit_codes();
    let frame = extended_hamming_code();
    let overlap = |u: &Code, n: usize| {
        frame.masks().iter().filter(|&&w| u.contains(w)).count() == n
    };
    for n in [8usize, 4] {
        for unit in units.iter().filter(|u| **u != frame && overlap(u, n)) {
            for p in mixed_cover_partitions(&[&frame, unit], 8)? {
                add(&mut buckets, &mut seen, p, &format!("two-unit cover ({n}-word overlap)"));
            }
            if seen.len() >= 4 * limit.max(8) {
                break;
            }
        }
    }
    for unit in &units {
        for p in search_partitions(unit, 8)? {
            add(&mut buckets, &mut seen, p, "coset-pool cover");
        }
        if buckets.get(&1).map_or(0, Vec::len) >= 4 && seen.len() >= limit {
            break;
        }
    }

    // One of each core dimension first, then round-robin over the rest.
    let mut ordered: Vec<(ExtendedPartition, String, usize)> = Vec::new();
    let dims = [4usize, 3, 2, 1];
    let mut idx = [0usize; 5];
    for round in 0.. {
        let mut placed = false;
        for &d in &dims {
            if let Some(list) = buckets.get(&d) {
                if idx[d] < list.len() && ordered.len() < limit {
                    let (p, f) = &list[idx[d]];
                    ordered.push((p.clone(), f.clone(), d));
                    idx[d] += 1;
                    placed = true;
                }
            }
        }
        if !placed || ordered.len() >= limit {
            break;
        }
        let _ = round;
    }

    for (i, (p, family, dim)) in ordered.iter().enumerate() {
        let path = out.join(format!("partition-{i:03}.part"));
        let fp = format!("fingerprint={:016x}", p.fingerprint());
        let comments = [
            family.as_str(),
            &format!("translation core dimension {dim}"),
            fp.as_str(),
        ];
        write_partition(&path, p, &comments)?;
    }
    let tally: Vec<String> = dims
        .iter()
        .map(|&d| format!("core {d}: {}", ordered.iter().filter(|(_, _, x)| *x == d).count()))
        .collect();
    println!(
        "wrote {} partitions to {} ({})",
        ordered.len(),
        out.display(),
        tally.join(", ")
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_double(src: &Path, dst: &Path, sigma: &str, out: &Path) -> Result<ExitCode> {
    let p = read_partition(src)?;
    let q = read_partition(dst)?;
    let sigma = Permutation::parse(sigma)?;
    let code = double(&p, &q, &sigma)?;
    let comments = [
        format!("doubled from {} and {}", src.display(), dst.display()),
        format!("sigma={sigma}"),
        format!(
            "left fingerprint={:016x} right fingerprint={:016x}",
            p.fingerprint(),
            q.fingerprint()
        ),
    ];
    let refs: Vec<&str> = comments.iter().map(String::as_str).collect();
    write_code(out, &code, &refs)?;
    println!(
        "wrote {} ({} words, rank {}, kernel dimension {})",
        out.display(),
        code.size(),
        rank(&code),
        kernel(&code).dimension()
    );
    Ok(ExitCode::SUCCESS)
}

fn octet_core_dims(k: &Subspace) -> (usize, usize) {
    let els = k.elements();
    let left: Vec<u16> = els.iter().filter(|&&w| w & 0xff00 == 0).map(|&w| w & 0xff).collect();
    let right: Vec<u16> = els.iter().filter(|&&w| w & 0x00ff == 0).map(|&w| w >> 8).collect();
    (
        Subspace::span(left, 8).expect("low projection").dimension(),
        Subspace::span(right, 8).expect("high projection").dimension(),
    )
}

fn invariants(path: &Path) -> Result<ExitCode> {
    let code = read_code(path)?;
    println!("file: {}", path.display());
    println!("length: {}  words: {}", code.len(), code.size());
    println!("extended 1-perfect: {}", is_extended_perfect(&code)?);
    println!("rank: {}", rank(&code));
    let k = kernel(&code);
    println!("kernel dimension: {}", k.dimension());
    let basis: Vec<String> = k.basis().iter().map(|b| format!("{b:04x}")).collect();
    println!("kernel basis: {}", basis.join(" "));
    if code.len() == 16 {
        let (l, r) = octet_core_dims(&k);
        println!("octet core dimensions: low {l}, high {r}");
        match decompose_doubling(&code) {
            Ok((p, q, sigma)) => {
                println!(
                    "doubling: left fingerprint={:016x} right fingerprint={:016x} sigma={sigma}",
                    p.fingerprint(),
                    q.fingerprint()
                );
            }
            Err(e) => println!("doubling: none ({e})"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sqs_graph(path: &Path, modulus: Modulus, out: &Path) -> Result<ExitCode> {
    let code = read_code(path)?;
    let subspace = match modulus {
        Modulus::Kernel => kernel(&code),
        Modulus::Trivial => Subspace::span([], code.len())?,
    };
    let graph = quotient_graph(&code, &subspace)?;
    let header = format!(
        "# quotient of {} modulo {} (dimension {}, {} vertices)\n",
        path.display(),
        match modulus {
            Modulus::Kernel => "the kernel",
            Modulus::Trivial => "the trivial subspace",
        },
        subspace.dimension(),
        graph.vertex_count()
    );
    write_text(out, &format!("{header}{}", graph.render()))?;
    println!(
        "wrote {} ({} vertices, loop multiplicity at first vertex {})",
        out.display(),
        graph.vertex_count(),
        graph.multiplicity(0, 0)
    );
    Ok(ExitCode::SUCCESS)
}

fn sts_types(path: &Path, out: &Path) -> Result<ExitCode> {
    let code = read_code(path)?;
    let profiles = code_type_profile(&code)?;
    write_text(out, &render_profiles(&profiles))?;
    println!(
        "wrote {} ({} cosets, {})",
        out.display(),
        profiles.len(),
        homogeneity_class(&profiles)
    );
    Ok(ExitCode::SUCCESS)
}

fn verify_thm5(path: &Path, out: &Path) -> Result<ExitCode> {
    let code = read_code(path)?;
    let report = verify_code(&code)?;
    write_text(out, &report.render())?;
    println!(
        "{}: kappa={} vertices={} loop={} -> {}",
        path.display(),
        report.kappa,
        report.vertices,
        report.loop_multiplicity,
        if report.passed() { "PASS" } else { "FAIL" }
    );
    for check in report.checks.iter().filter(|c| !c.passed) {
        println!("  failed: {}: {}", check.name, check.detail);
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn catalog(dir: &Path, out: &Path) -> Result<ExitCode> {
    let files = sorted_files(dir, "code")?;
    let mut table = String::from("file  words  rank  kappa  vertices  loop  schedule\n");
    for f in &files {
        let code = read_code(f)?;
        let name = f
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| f.display().to_string());
        let kappa = kernel(&code).dimension();
        let detail = match verify_code(&code) {
            Ok(report) => format!(
                "{}  {}  {}",
                report.vertices,
                report.loop_multiplicity,
                if report.passed() { "pass" } else { "FAIL" }
            ),
            Err(Error::KappaOutOfRange(_)) => "-  -  out-of-range".to_string(),
            Err(e) => return Err(e),
        };
        let _ = writeln!(
            table,
            "{name}  {}  {}  {kappa}  {detail}",
            code.size(),
            rank(&code)
        );
    }
    write_text(out, &table)?;
    println!("cataloged {} code files into {}", files.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

/// Deterministic permutation candidates: the identity, one transposition,
/// one 3-cycle, one mixing permutation that pairs complementing classes, and
/// seeded pseudorandom fills.
fn sigma_candidates() -> Vec<Permutation> {
    let mut out = vec![
        Permutation::identity(),
        Permutation::new([0, 1, 2, 3, 4, 5, 7, 6]).expect("transposition"),
        Permutation::new([1, 2, 0, 3, 4, 5, 6, 7]).expect("3-cycle"),
        Permutation::new([1, 0, 7, 3, 6, 5, 2, 4]).expect("mixing permutation"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    while out.len() < 64 {
        let mut images: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
        for i in (1..8).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        let p = Permutation::new(images).expect("shuffled images");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn sweep_kappa(dir: &Path, targets: &[usize]) -> Result<ExitCode> {
    let files = sorted_files(dir, "part")?;
    if files.is_empty() {
        return Err(Error::InvalidPartition(format!(
            "no .part files in {}",
            dir.display()
        )));
    }
    let mut partitions: Vec<(String, ExtendedPartition, usize)> = Vec::new();
    for f in &files {
        let p = read_partition(f)?;
        let dim = partition_core(&p).dimension();
        let name = f
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| f.display().to_string());
        partitions.push((name, p, dim));
    }
    let right = partitions
        .iter()
        .find(|(_, _, d)| *d == 4)
        .ok_or_else(|| {
            Error::InvalidPartition(
                "the sweep needs one partition with a full translation core (dimension 4)".into(),
            )
        })?
        .clone();
    println!("right side: {} (core dimension 4)", right.0);

    let sigmas = sigma_candidates();
    let mut all_reached = true;
    let mut summary: Vec<String> = Vec::new();
    for &target in targets {
        if !(5..=9).contains(&target) {
            println!("target kappa={target}: outside 5..=9, skipped");
            summary.push(format!("kappa={target}: unsupported"));
            all_reached = false;
            continue;
        }
        // Kernel dimension 4 + (compatible core directions); the left core
        // dimension caps the reachable kappa, so sweep the matching bucket.
        let want_core = (target - 4).min(4);
        let lefts: Vec<&(String, ExtendedPartition, usize)> = partitions
            .iter()
            .filter(|(_, _, d)| *d == want_core)
            .collect();
        if lefts.is_empty() {
            println!(
                "target kappa={target}: no partition with core dimension {want_core} in {}",
                dir.display()
            );
            summary.push(format!("kappa={target}: no material"));
            all_reached = false;
            continue;
        }
        let mut hit = None;
        'search: for (name, p, _) in &lefts {
            for sigma in &sigmas {
                let code = double(p, &right.1, sigma)?;
                let kappa = kernel(&code).dimension();
                println!(
                    "attempt target={target} left={name} right={} sigma={sigma} -> kappa={kappa}{}",
                    right.0,
                    if kappa == target { " HIT" } else { "" }
                );
                if kappa == target {
                    hit = Some((name.clone(), sigma.clone(), code));
                    break 'search;
                }
            }
        }
        match hit {
            Some((name, sigma, code)) => {
                let report = verify_code(&code)?;
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                println!(
                    "target kappa={target}: reached with left={name} sigma={sigma}; vertices={} loop={} -> {verdict}",
                    report.vertices, report.loop_multiplicity
                );
                for check in report.checks.iter().filter(|c| !c.passed) {
                    println!("    failed: {}: {}", check.name, check.detail);
                }
                summary.push(format!(
                    "kappa={target}: reached, vertices={} loop={} verify={verdict}",
                    report.vertices, report.loop_multiplicity
                ));
            }
            None => {
                println!("target kappa={target}: NOT reached");
                summary.push(format!("kappa={target}: not reached"));
                all_reached = false;
            }
        }
    }
    println!("sweep summary:");
    for line in &summary {
        println!("  {line}");
    }
    Ok(if all_reached {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
