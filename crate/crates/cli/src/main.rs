use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cupmod_core::barcode::{diagram, BarDiff};
use cupmod_core::cup::order_k_cup_pers_with;
use cupmod_core::curated::{generate_example, EXAMPLE_NAMES};
use cupmod_core::geometry::{bottleneck, cech_filtration, parse_csv_rows, rips_filtration};
use cupmod_core::oracle;
use cupmod_core::partitions::{compute_partition_barcodes_with, PartitionMemo};
use cupmod_core::relative::rel_order_k_cup_pers_with;
use cupmod_core::{
    persistent_cohomology, relative_persistent_cohomology, BarRecord, Barcode, CupTower,
    DriverOptions, Filtration, InputFormat, ModuleSpec, Partition, PointCloud,
};

#[derive(Parser)]
#[command(name = "cupmod", version, about = "Persistent cup modules of simplicial filtrations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Also compute every emitted barcode with the brute-force oracle and diff.
    #[arg(long, global = true)]
    verify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Input {
    /// Filtration file: `<value> <v0> ... <vk>` per line, or a distance matrix CSV.
    input: PathBuf,

    /// Read the input as a distance matrix and build its Rips filtration.
    #[arg(long)]
    distance_matrix: bool,

    /// Maximum simplex dimension for `--distance-matrix`.
    #[arg(long, default_value_t = 2)]
    max_dim: usize,

    /// Rips threshold for `--distance-matrix`.
    #[arg(long, default_value_t = f64::INFINITY)]
    threshold: f64,
}

impl Input {
    fn load(&self) -> Result<Filtration> {
        let format = if self.distance_matrix {
            InputFormat::DistanceMatrix {
                max_dim: self.max_dim,
                threshold: self.threshold,
            }
        } else {
            InputFormat::Text
        };
        Ok(Filtration::load(&self.input, format)?)
    }
}

#[derive(Args)]
struct Cloud {
    /// Points CSV, one point per row.
    #[arg(long)]
    points: PathBuf,

    #[arg(long, default_value_t = 2)]
    max_dim: usize,

    #[arg(long, default_value_t = f64::INFINITY)]
    threshold: f64,

    /// Write the filtration here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cloud {
    fn load(&self) -> Result<PointCloud> {
        let text = fs::read_to_string(&self.points)
            .with_context(|| format!("cannot read {}", self.points.display()))?;
        Ok(PointCloud::from_points(parse_csv_rows(
            &self.points.display().to_string(),
            &text,
        )?)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ordinary persistent cohomology barcode.
    Barcode(Input),
    /// Relative persistent cohomology barcode.
    RelBarcode(Input),
    /// Barcode of the persistent k-cup module.
    CupBarcode {
        #[command(flatten)]
        input: Input,
        #[arg(long, required_unless_present = "all_k", conflicts_with = "all_k")]
        k: Option<usize>,
        /// Every k from 2 to the dimension, keyed by k.
        #[arg(long)]
        all_k: bool,
    },
    /// Barcode of the relative persistent k-cup module.
    RelCupBarcode {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Partition-module barcodes keyed by partition, e.g. "1+1+2".
    PartitionBarcodes {
        #[command(flatten)]
        input: Input,
        /// A single partition, written "1+1+2" or "1,1,2".
        #[arg(long)]
        partition: Option<Partition>,
    },
    /// Persistent cup-length of an index interval.
    CupLength {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        interval: Vec<usize>,
    },
    /// Rips filtration of a point cloud in the text format.
    Rips(Cloud),
    /// Čech filtration of a point cloud in the text format.
    Cech {
        #[command(flatten)]
        cloud: Cloud,
        /// Seed for the minimum enclosing ball computation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bottleneck distance between two barcode JSON files, in value space.
    Bottleneck { a: PathBuf, b: PathBuf },
    /// Diff a computed barcode against the oracle.
    Verify {
        #[command(flatten)]
        input: Input,
        /// ordinary, relative, kcup:K, rel-kcup:K or partition:1+1+2.
        #[arg(long)]
        spec: ModuleSpec,
    },
    /// Write a curated example input.
    GenExample {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXAMPLE_NAMES))]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Barcodes to emit, each with the module it came from.
struct Emitted {
    keyed: bool,
    entries: Vec<(String, ModuleSpec, Barcode)>,
}

impl Emitted {
    fn single(spec: ModuleSpec, bars: Barcode) -> Self {
        Emitted {
            keyed: false,
            entries: vec![(String::new(), spec, bars)],
        }
    }
}

fn records(f: &Filtration, spec: &ModuleSpec, bars: &Barcode) -> Vec<BarRecord> {
    let label = match spec {
        ModuleSpec::Partition(p) => Some(p.to_string()),
        _ => None,
    };
    bars.records(f, label.as_deref())
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x}"))
}

fn write_table(out: &mut impl Write, recs: &[BarRecord]) -> std::io::Result<()> {
    writeln!(out, "degree\tdeath_index\tbirth_index\tbirth_value\tdeath_value\tpartition")?;
    for r in recs {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.degree,
            r.death_index,
            r.birth_index,
            fmt_value(r.birth_value),
            fmt_value(r.death_value),
            r.partition.as_deref().unwrap_or("-")
        )?;
    }
    Ok(())
}

fn emit(f: &Filtration, emitted: &Emitted, format: Format) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json if emitted.keyed => {
            let map: BTreeMap<&str, Vec<BarRecord>> = emitted
                .entries
                .iter()
                .map(|(key, spec, bars)| (key.as_str(), records(f, spec, bars)))
                .collect();
            serde_json::to_writer_pretty(&mut out, &map)?;
            writeln!(out)?;
        }
        Format::Json => {
            let (_, spec, bars) = &emitted.entries[0];
            serde_json::to_writer_pretty(&mut out, &records(f, spec, bars))?;
            writeln!(out)?;
        }
        Format::Table => {
            for (key, spec, bars) in &emitted.entries {
                if emitted.keyed {
                    writeln!(out, "# {key}")?;
                }
                write_table(&mut out, &records(f, spec, bars))?;
            }
        }
    }
    Ok(())
}

fn report_diff(spec: &ModuleSpec, diff: &BarDiff) {
    eprintln!(
        "verify {spec}: {} missing, {} extra",
        diff.missing.len(),
        diff.extra.len()
    );
    for b in &diff.missing {
        eprintln!("  missing {b:?}");
    }
    for b in &diff.extra {
        eprintln!("  extra   {b:?}");
    }
}

/// Diffs every emitted barcode against the oracle; true iff all agree.
fn verify_all(f: &Filtration, emitted: &Emitted) -> Result<bool> {
    let o = oracle::Oracle::new(f)?;
    let mut clean = true;
    for (_, spec, bars) in &emitted.entries {
        let diff = BarDiff::between(&o.barcode(spec)?, &bars.bars());
        if !diff.is_empty() {
            report_diff(spec, &diff);
            clean = false;
        }
    }
    Ok(clean)
}

fn fast_barcode(f: &Filtration, spec: &ModuleSpec, opts: DriverOptions) -> Result<Barcode> {
    Ok(match spec {
        ModuleSpec::Ordinary => persistent_cohomology(f),
        ModuleSpec::Relative => relative_persistent_cohomology(f),
        ModuleSpec::KCup(k) => order_k_cup_pers_with(f, *k, opts)?,
        ModuleSpec::RelKCup(k) => rel_order_k_cup_pers_with(f, *k, opts)?,
        ModuleSpec::Partition(p) => {
            let mut memo = PartitionMemo::with_options(f, opts);
            cupmod_core::partitions::extend_cup_pers_k_parts(f, p, &mut memo)?
        }
    })
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_diagram(path: &Path) -> Result<cupmod_core::Diagram> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let recs: Vec<BarRecord> = serde_json::from_str(&text)
        .with_context(|| format!("{}: expected a JSON array of bars", path.display()))?;
    Ok(diagram(&recs))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = DriverOptions::default();
    let computed = match &cli.command {
        Command::Barcode(input) => {
            let f = input.load()?;
            let bars = persistent_cohomology(&f);
            Some((f, Emitted::single(ModuleSpec::Ordinary, bars)))
        }
        Command::RelBarcode(input) => {
            let f = input.load()?;
            let bars = relative_persistent_cohomology(&f);
            Some((f, Emitted::single(ModuleSpec::Relative, bars)))
        }
        Command::CupBarcode { input, k, all_k } => {
            let f = input.load()?;
            let emitted = if *all_k {
                let tower = CupTower::compute(&f, opts);
                Emitted {
                    keyed: true,
                    entries: tower
                        .cups()
                        .iter()
                        .map(|(k, b)| (k.to_string(), ModuleSpec::KCup(*k), b.clone()))
                        .collect(),
                }
            } else {
                let k = k.expect("clap requires --k without --all-k");
                let bars = order_k_cup_pers_with(&f, k, opts)?;
                Emitted::single(ModuleSpec::KCup(k), bars)
            };
            Some((f, emitted))
        }
        Command::RelCupBarcode { input, k } => {
            let f = input.load()?;
            let bars = rel_order_k_cup_pers_with(&f, *k, opts)?;
            Some((f, Emitted::single(ModuleSpec::RelKCup(*k), bars)))
        }
        Command::PartitionBarcodes { input, partition } => {
            let f = input.load()?;
            let table = match partition {
                Some(p) => {
                    let bars = fast_barcode(&f, &ModuleSpec::Partition(p.clone()), opts)?;
                    BTreeMap::from([(p.clone(), bars)])
                }
                None => compute_partition_barcodes_with(&f, opts),
            };
            let entries = table
                .into_iter()
                .map(|(p, b)| (p.to_string(), ModuleSpec::Partition(p), b))
                .collect();
            Some((f, Emitted { keyed: true, entries }))
        }
        Command::CupLength { input, interval } => {
            let f = input.load()?;
            let (a, b) = (interval[0], interval[1]);
            let tower = CupTower::compute(&f, opts);
            let length = tower.cup_length(a, b)?;
            if cli.verify {
                let o = oracle::Oracle::new(&f)?;
                let mut expected = 0;
                for k in (2..=f.dim()).rev() {
                    if o.image_rank(&ModuleSpec::KCup(k), a, b)? > 0 {
                        expected = k;
                        break;
                    }
                }
                if expected == 0 {
                    let ranks = o.rank_function(&ModuleSpec::Ordinary);
                    let positive = ranks.degrees().any(|d| d > 0 && ranks.get(d, a as i64, b as i64) > 0);
                    expected = usize::from(positive);
                }
                if expected != length {
                    eprintln!("verify cup-length: oracle gives {expected}, fast path gives {length}");
                    return Ok(ExitCode::from(1));
                }
            }
            match cli.format {
                Format::Json => println!("{}", json!({ "a": a, "b": b, "cup_length": length })),
                Format::Table => println!("a\tb\tcup_length\n{a}\t{b}\t{length}"),
            }
            None
        }
        Command::Rips(cloud) => {
            let f = rips_filtration(&cloud.load()?, cloud.max_dim, cloud.threshold)?;
            write_text(cloud.out.as_deref(), &f.to_text("Rips filtration, value = diameter"))?;
            None
        }
        Command::Cech { cloud, seed } => {
            let f = cech_filtration(&cloud.load()?, cloud.max_dim, cloud.threshold, *seed)?;
            write_text(
                cloud.out.as_deref(),
                &f.to_text("Cech filtration, value = minimum enclosing ball radius"),
            )?;
            None
        }
        Command::Bottleneck { a, b } => {
            let d = bottleneck(&read_diagram(a)?, &read_diagram(b)?);
            let shown = if d.is_finite() { json!(d) } else { json!(null) };
            match cli.format {
                Format::Json => println!("{}", json!({ "bottleneck": shown })),
                Format::Table => println!("{d}"),
            }
            None
        }
        Command::Verify { input, spec } => {
            let f = input.load()?;
            let fast = fast_barcode(&f, spec, opts)?;
            let diff = oracle::verify(&f, &fast.bars(), spec)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "spec": spec.to_string(),
                        "missing": diff.missing,
                        "extra": diff.extra,
                    }))?
                ),
                Format::Table => report_diff(spec, &diff),
            }
            return Ok(ExitCode::from(u8::from(!diff.is_empty())));
        }
        Command::GenExample { name, out } => {
            write_text(out.as_deref(), &generate_example(name)?.to_text())?;
            None
        }
    };

    if let Some((f, emitted)) = computed {
        emit(&f, &emitted, cli.format)?;
        if cli.verify && !verify_all(&f, &emitted)? {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("CUPMOD_THREADS") {
        let threads: usize = value
            .parse()
            .with_context(|| format!("CUPMOD_THREADS must be a positive integer, got {value:?}"))?;
        if threads == 0 {
            bail!("CUPMOD_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
