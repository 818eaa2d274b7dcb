use std::collections::HashSet;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use rcgr::analysis::{self, CentroidModel, FeatureConfig};
use rcgr::cgr::{self, Alphabet, PathTrace};
use rcgr::datagen::{self, SequenceRecord, Split, SplitRatios};
use rcgr::raster::{self, RenderMode};
use rcgr::PrecisionBound;

#[derive(Parser)]
#[command(name = "rcgr", version, about = "Reversible chaos game representation of biological sequences")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EncodingOpts {
    /// `auto` (DNA if every symbol is in ATGC, else protein), `dna`,
    /// `protein`, or a literal symbol list.
    #[arg(long, default_value = "auto")]
    alphabet: String,

    /// Denominator bound P, as a decimal integer or `2^N`.
    #[arg(long, default_value = "2^32")]
    precision: PrecisionBound,
}

#[derive(Subcommand)]
enum Command {
    /// Encode every FASTA record into `<out>/<id>.trace`.
    Encode {
        fasta: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        enc: EncodingOpts,
    },
    /// Reconstruct the sequence stored in a trace file.
    Decode {
        trace: PathBuf,
        /// Compare against the FASTA record named after the trace file.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Render a trace file to a PPM image.
    Render {
        trace: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = raster::DEFAULT_WIDTH)]
        width: usize,
        #[arg(long, default_value_t = raster::DEFAULT_HEIGHT)]
        height: usize,
        /// `path` or `points`.
        #[arg(long, default_value = "path")]
        mode: RenderMode,
        /// Also write the occupancy grid at this resolution as CSV.
        #[arg(long, requires = "grid_out")]
        grid: Option<u32>,
        #[arg(long, requires = "grid")]
        grid_out: Option<PathBuf>,
    },
    /// Generate the seven-class synthetic dataset.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        per_class: usize,
        #[arg(long, short)]
        out: PathBuf,
        /// Train, validation and test weights.
        #[arg(long, default_value = "70,10,20")]
        split: SplitRatios,
    },
    /// Per-record entropy and storage accounting.
    Stats {
        fasta: PathBuf,
        #[command(flatten)]
        enc: EncodingOpts,
    },
    /// Train a nearest-centroid classifier and evaluate it.
    Classify {
        /// Training FASTA, or the full dataset when `--manifest` is given.
        train: PathBuf,
        #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
        test: Option<PathBuf>,
        /// Take train and test records from the manifest's splits.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = analysis::DEFAULT_RESOLUTION)]
        resolution: u32,
        #[arg(long, default_value = "2^32")]
        precision: PrecisionBound,
        /// Metrics CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Confusion matrix CSV output.
        #[arg(long)]
        confusion: Option<PathBuf>,
    },
    /// Encode and decode every FASTA record and count exact round trips.
    Verify {
        fasta: PathBuf,
        #[command(flatten)]
        enc: EncodingOpts,
    },
}

#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<rcgr::Error> for Failure {
    fn from(e: rcgr::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

fn with_path<T, E: fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed write never leaves a partial file behind.
fn write_atomic<F>(path: &Path, body: F) -> CmdResult
where
    F: FnOnce(&mut BufWriter<&mut tempfile::NamedTempFile>) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = with_path(path, tempfile::NamedTempFile::new_in(dir))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        with_path(path, tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644)))?;
    }
    {
        let mut w = BufWriter::new(&mut tmp);
        with_path(path, body(&mut w))?;
        with_path(path, w.flush())?;
    }
    with_path(path, tmp.persist(path).map_err(|e| e.error))?;
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<SequenceRecord>, Failure> {
    let file = with_path(path, File::open(path))?;
    with_path(path, datagen::read_fasta(BufReader::new(file)))
}

fn read_trace_file(path: &Path) -> Result<PathTrace, Failure> {
    let file = with_path(path, File::open(path))?;
    with_path(path, cgr::read_trace(BufReader::new(file)))
}

fn choose_alphabet(spec: &str, sequence: &str) -> Result<Alphabet, Failure> {
    if spec == "auto" {
        let dna = Alphabet::dna();
        return Ok(if sequence.chars().all(|c| dna.contains(c)) { dna } else { Alphabet::protein() });
    }
    Ok(Alphabet::from_name(spec)?)
}

fn encode_record(rec: &SequenceRecord, enc: &EncodingOpts) -> Result<PathTrace, Failure> {
    let alphabet = choose_alphabet(&enc.alphabet, &rec.sequence)?;
    cgr::encode(&rec.sequence, &alphabet, &enc.precision)
        .map(|(_, trace)| trace)
        .map_err(|e| Failure(format!("record {}: {e}", rec.id)))
}

fn check_ids(records: &[SequenceRecord]) -> CmdResult {
    let mut seen = HashSet::new();
    for r in records {
        if r.id.contains(['/', '\\']) || r.id == "." || r.id == ".." {
            return fail(format!("record id {:?} cannot be used as a file name", r.id));
        }
        if !seen.insert(r.id.as_str()) {
            return fail(format!("duplicate record id {:?}", r.id));
        }
    }
    Ok(())
}

fn cmd_encode(fasta: &Path, out: &Path, enc: &EncodingOpts) -> CmdResult {
    let records = read_records(fasta)?;
    check_ids(&records)?;
    let traces: Vec<PathTrace> = records.par_iter().map(|r| encode_record(r, enc)).collect::<Result<_, _>>()?;
    with_path(out, fs::create_dir_all(out))?;
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    for (rec, trace) in records.iter().zip(&traces) {
        let path = out.join(format!("{}.trace", rec.id));
        write_atomic(&path, |w| cgr::write_trace(trace, w))?;
        let last = trace.final_point();
        writeln!(stdout, "{}\t{}\t{}\t{}", rec.id, trace.len(), last, trace.max_denominator())?;
    }
    Ok(())
}

fn cmd_decode(trace_path: &Path, verify: Option<&Path>) -> CmdResult {
    let trace = read_trace_file(trace_path)?;
    let sequence = with_path(trace_path, cgr::decode(&trace))?;
    with_path(trace_path, trace.check_geometry())?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{sequence}")?;
    let Some(fasta) = verify else {
        return Ok(());
    };
    let records = read_records(fasta)?;
    let stem = trace_path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let original = match records.iter().find(|r| r.id == stem) {
        Some(r) => r,
        None if records.len() == 1 => &records[0],
        None => return fail(format!("{}: no record with id {stem:?}", fasta.display())),
    };
    if original.sequence == sequence {
        writeln!(stdout, "MATCH")?;
        Ok(())
    } else {
        writeln!(stdout, "MISMATCH")?;
        fail(format!("decoded sequence differs from record {}", original.id))
    }
}

struct RenderArgs<'a> {
    trace: &'a Path,
    out: &'a Path,
    width: usize,
    height: usize,
    mode: RenderMode,
    grid: Option<(u32, &'a Path)>,
}

fn cmd_render(a: RenderArgs<'_>) -> CmdResult {
    let trace = read_trace_file(a.trace)?;
    with_path(a.trace, trace.validate())?;
    let image = raster::rasterize(&trace, a.width, a.height, a.mode)?;
    let grid = match a.grid {
        Some((r, path)) => Some((raster::occupancy_grid(&trace, r)?, path)),
        None => None,
    };
    write_atomic(a.out, |w| raster::write_ppm(&image, w).map(drop))?;
    if let Some((grid, path)) = grid {
        write_atomic(path, |w| w.write_all(grid.to_csv().as_bytes()))?;
    }
    Ok(())
}

fn cmd_gen(seed: u64, per_class: usize, out: &Path, split: SplitRatios) -> CmdResult {
    let ds = datagen::gen_dataset_from(seed, &datagen::builtin_class_specs(), per_class, split)?;
    with_path(out, fs::create_dir_all(out))?;
    write_atomic(&out.join("dataset.fasta"), |w| datagen::write_fasta(&ds.records, w))?;
    write_atomic(&out.join("manifest.csv"), |w| ds.manifest.write_csv(w))?;
    Ok(())
}

fn cmd_stats(fasta: &Path, enc: &EncodingOpts) -> CmdResult {
    let records = read_records(fasta)?;
    let rows: Vec<String> = records
        .par_iter()
        .map(|rec| {
            let alphabet = choose_alphabet(&enc.alphabet, &rec.sequence)?;
            if let Some(c) = rec.sequence.chars().find(|&c| !alphabet.contains(c)) {
                return fail(format!("record {}: symbol {c:?} is not in alphabet {alphabet}", rec.id));
            }
            let r = analysis::storage_report(&rec.sequence, &alphabet, &enc.precision)
                .map_err(|e| Failure(format!("record {}: {e}", rec.id)))?;
            let bound = if r.within_compression_limit() { "OK" } else { "VIOLATED" };
            Ok(format!(
                "{}\t{}\t{}\t{:.6}\t{}\t{}\t{}\t{}\t{}",
                rec.id,
                r.bits.n,
                r.bits.k,
                r.entropy,
                r.entropy_bits,
                r.bits.path_bits,
                r.bits.coordinate_bits,
                r.bits.total_bits,
                bound
            ))
        })
        .collect::<Result<_, Failure>>()?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "id\tn\tk\tentropy\tentropy_bits\tpath_bits\tcoordinate_bits\ttotal_bits\tbound")?;
    for row in rows {
        writeln!(stdout, "{row}")?;
    }
    Ok(())
}

struct ClassifyArgs<'a> {
    train: &'a Path,
    test: Option<&'a Path>,
    manifest: Option<&'a Path>,
    resolution: u32,
    precision: PrecisionBound,
    csv: Option<&'a Path>,
    confusion: Option<&'a Path>,
}

fn cmd_classify(a: ClassifyArgs<'_>) -> CmdResult {
    let all = read_records(a.train)?;
    let (train, test): (Vec<&SequenceRecord>, Vec<SequenceRecord>) = match (a.test, a.manifest) {
        (Some(test), _) => (all.iter().collect(), read_records(test)?),
        (None, Some(manifest)) => {
            let file = with_path(manifest, File::open(manifest))?;
            let m = with_path(manifest, datagen::DatasetManifest::read_csv(BufReader::new(file)))?;
            let mut train = Vec::new();
            let mut test = Vec::new();
            for rec in &all {
                match m.split_of(&rec.id) {
                    Some(Split::Train) => train.push(rec),
                    Some(Split::Test) => test.push(rec.clone()),
                    Some(Split::Validation) => {}
                    None => return fail(format!("record {} is not in {}", rec.id, manifest.display())),
                }
            }
            (train, test)
        }
        (None, None) => return fail("either --test or --manifest is required"),
    };
    if train.is_empty() {
        return fail("no training records");
    }
    if test.is_empty() {
        return fail("no test records");
    }
    let config = FeatureConfig { resolution: a.resolution, precision: a.precision, ..FeatureConfig::default() };
    let model: CentroidModel = analysis::train_centroids(&train, &config)?;
    let test_refs: Vec<&SequenceRecord> = test.iter().collect();
    let report = analysis::evaluate(&model, &test_refs)?;
    if let Some(path) = a.csv {
        write_atomic(path, |w| w.write_all(report.to_csv().as_bytes()))?;
    }
    if let Some(path) = a.confusion {
        write_atomic(path, |w| w.write_all(report.confusion_csv().as_bytes()))?;
    }
    write!(io::stdout().lock(), "{}", report.to_text())?;
    Ok(())
}

fn cmd_verify(fasta: &Path, enc: &EncodingOpts) -> CmdResult {
    let records = read_records(fasta)?;
    let outcomes: Vec<Result<(), String>> = records
        .par_iter()
        .map(|rec| {
            let trace = encode_record(rec, enc).map_err(|e| e.0)?;
            match cgr::decode(&trace) {
                Ok(s) if s == rec.sequence => Ok(()),
                Ok(_) => Err(format!("record {}: decoded sequence differs", rec.id)),
                Err(e) => Err(format!("record {}: {e}", rec.id)),
            }
        })
        .collect();
    let failed: Vec<&String> = outcomes.iter().filter_map(|o| o.as_ref().err()).collect();
    let passed = outcomes.len() - failed.len();
    println!("passed {passed} failed {}", failed.len());
    match failed.first() {
        None => Ok(()),
        Some(first) => fail(format!("{} of {} records failed; first: {first}", failed.len(), outcomes.len())),
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure(e.to_string()))?;
    }
    match &cli.command {
        Command::Encode { fasta, out, enc } => cmd_encode(fasta, out, enc),
        Command::Decode { trace, verify } => cmd_decode(trace, verify.as_deref()),
        Command::Render { trace, out, width, height, mode, grid, grid_out } => cmd_render(RenderArgs {
            trace,
            out,
            width: *width,
            height: *height,
            mode: *mode,
            grid: grid.zip(grid_out.as_deref()),
        }),
        Command::Gen { seed, per_class, out, split } => cmd_gen(*seed, *per_class, out, *split),
        Command::Stats { fasta, enc } => cmd_stats(fasta, enc),
        Command::Classify { train, test, manifest, resolution, precision, csv, confusion } => {
            cmd_classify(ClassifyArgs {
                train,
                test: test.as_deref(),
                manifest: manifest.as_deref(),
                resolution: *resolution,
                precision: precision.clone(),
                csv: csv.as_deref(),
                confusion: confusion.as_deref(),
            })
        }
        Command::Verify { fasta, enc } => cmd_verify(fasta, enc),
    }
}

/// Clap's usage errors span several lines; fold them into one diagnostic.
fn usage_error(e: &clap::Error) -> String {
    let text = e.render().to_string();
    text.lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:"))
        .filter(|l| !l.is_empty())
        .map(|l| l.strip_prefix("error: ").unwrap_or(l))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("rcgr: error: {}", usage_error(&e));
            return ExitCode::FAILURE;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.0.replace('\n', " ");
            eprintln!("rcgr: error: {msg}");
            ExitCode::FAILURE
        }
    }
}
