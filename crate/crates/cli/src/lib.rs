// Copyright 2026 The warcflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `warcflow` command line: verify, extract, recompress, stats,
//! benchmark and generate.
//!
//! [`run`] takes the arguments and output sinks explicitly and returns the
//! exit code, so the binary is a thin wrapper and tests can drive it
//! in-process.

pub mod bench;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use warcflow::corpus::{write_corpus, CorpusSpec, TypeMix};
use warcflow::writer::recompress_with;
use warcflow::{
    detect_codec, open_record_at, CodecKind, Error, IterationOptions, RecordType, RecordTypeMask,
    WarcReader, WarcRecord, WriteOptions,
};

use bench::{benchmark, Mode, Source};
use report::{emit, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_BAD_OFFSET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "warcflow",
    version,
    about = "Fast WARC verification, extraction and transcoding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check block and payload digests of every record.
    Verify(VerifyArgs),
    /// Print one record, located by offset or record ID.
    Extract(ExtractArgs),
    /// Rewrite a WARC with another codec.
    Recompress(RecompressArgs),
    /// Count records per type from header blocks alone.
    Stats(StatsArgs),
    /// Measure records per second in each parse mode.
    Benchmark(BenchmarkArgs),
    /// Write a deterministic synthetic WARC.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Stop at the first malformed record.
    #[arg(long)]
    pub strict: bool,
    /// Print nothing; report through the exit code only.
    #[arg(long)]
    pub quiet: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    pub path: PathBuf,
    /// Record offset in the file (a member offset for compressed files).
    #[arg(
        long,
        conflicts_with = "record_id",
        required_unless_present = "record_id"
    )]
    pub offset: Option<u64>,
    /// WARC-Record-ID to look for, with or without angle brackets.
    #[arg(long)]
    pub record_id: Option<String>,
    #[arg(long, conflicts_with = "payload_only")]
    pub headers_only: bool,
    #[arg(long)]
    pub payload_only: bool,
}

#[derive(Debug, Args)]
pub struct RecompressArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, value_parser = parse_codec, default_value = "lz4")]
    pub codec: CodecKind,
    #[arg(long)]
    pub level: Option<u32>,
    /// Add missing block and payload digests.
    #[arg(long)]
    pub digests: bool,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Comma-separated record types to count, e.g. `response,request`.
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = Mode::ALL)]
    pub mode: Vec<Mode>,
    /// Timed passes per row; the median is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
    /// Untimed passes before timing.
    #[arg(long, default_value_t = 1)]
    pub warmup: u32,
    /// Load each file into memory first, to time parsing alone.
    #[arg(long)]
    pub preload: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub output: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub records: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_codec, default_value = "gzip")]
    pub codec: CodecKind,
    #[arg(long)]
    pub level: Option<u32>,
    /// `crawl`, `uniform`, or `responses:F` for a response fraction F.
    #[arg(long, value_parser = parse_mix, default_value = "crawl")]
    pub mix: TypeMix,
    #[arg(long, default_value_t = 256)]
    pub min_size: u64,
    #[arg(long, default_value_t = 256 * 1024)]
    pub max_size: u64,
    /// Write block and payload digests.
    #[arg(long)]
    pub digests: bool,
    #[arg(long)]
    pub json: bool,
}

fn parse_codec(s: &str) -> Result<CodecKind, String> {
    s.parse()
}

fn parse_mix(s: &str) -> Result<TypeMix, String> {
    match s {
        "crawl" => Ok(TypeMix::CrawlTriples),
        "uniform" => Ok(TypeMix::Uniform),
        _ => match s.strip_prefix("responses:").map(str::parse::<f64>) {
            Some(Ok(f)) if (0.0..=1.0).contains(&f) => Ok(TypeMix::ResponseFraction(f)),
            _ => Err(format!(
                "unknown mix {s:?}; expected crawl, uniform or responses:F"
            )),
        },
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let res = match cli.command {
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Recompress(a) => cmd_recompress(&a, out),
        Command::Stats(a) => cmd_stats(&a, out, err),
        Command::Benchmark(a) => cmd_benchmark(&a, out),
        Command::Generate(a) => cmd_generate(&a, out),
    };
    match res {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "warcflow: {}", failure.message);
            failure.code
        }
    }
}

/// A failed command: message for stderr and exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// I/O problems exit with 2; bad data with `data_code`.
fn classify(path: &Path, e: Error, data_code: i32) -> Failure {
    let code = if e.is_data_error() {
        data_code
    } else {
        EXIT_USAGE
    };
    fail(code, format!("{}: {e}", path.display()))
}

fn io_failure(e: io::Error) -> Failure {
    fail(EXIT_USAGE, e.to_string())
}

type CmdResult = Result<i32, Failure>;

#[derive(Debug, Default, Serialize)]
pub struct VerifyRow {
    pub path: String,
    pub records: u64,
    pub digest_pass: u64,
    pub digest_fail: u64,
    pub digest_absent: u64,
    pub malformed: u64,
}

impl Row for VerifyRow {
    const COLUMNS: &'static [&'static str] = &[
        "path",
        "records",
        "digest_pass",
        "digest_fail",
        "digest_absent",
        "malformed",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.path.clone(),
            self.records.to_string(),
            self.digest_pass.to_string(),
            self.digest_fail.to_string(),
            self.digest_absent.to_string(),
            self.malformed.to_string(),
        ]
    }
}

/// Verifies one file. A record fails when any of its digests fails, and
/// counts as absent when it carries none.
pub fn verify_file(path: &Path, strict: bool) -> Result<VerifyRow, Error> {
    let opts = IterationOptions::default()
        .with_verify_digests(true)
        .with_strict(strict);
    let mut reader = WarcReader::open(File::open(path)?, opts)?;
    let mut row = VerifyRow {
        path: path.display().to_string(),
        ..Default::default()
    };
    loop {
        match reader.next_record() {
            Ok(Some(record)) => {
                row.records += 1;
                let report = record.digests.unwrap_or_default();
                if report.any_failed() {
                    row.digest_fail += 1;
                } else if report.all_absent() {
                    row.digest_absent += 1;
                } else {
                    row.digest_pass += 1;
                }
            }
            Ok(None) => break,
            Err(e) if e.is_data_error() => {
                row.malformed += 1;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    row.malformed += reader.stats().skipped_regions;
    Ok(row)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let results: Vec<_> = a
        .paths
        .par_iter()
        .map(|p| verify_file(p, a.strict))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for (path, res) in a.paths.iter().zip(results) {
        let row = res.map_err(|e| classify(path, e, EXIT_USAGE))?;
        if row.records == 0 && !a.quiet {
            let _ = writeln!(err, "warcflow: warning: {}: no records", path.display());
        }
        rows.push(row);
    }
    if !a.quiet {
        emit(out, &rows, a.json).map_err(io_failure)?;
    }
    let bad = rows.iter().any(|r| r.digest_fail > 0 || r.malformed > 0);
    Ok(if bad { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

/// Codec of a file, judged from its first bytes.
fn sniff_codec(file: &mut File) -> io::Result<CodecKind> {
    let mut magic = Vec::with_capacity(4);
    Read::by_ref(file).take(4).read_to_end(&mut magic)?;
    file.seek(SeekFrom::Start(0))?;
    Ok(detect_codec(&magic))
}

fn normalize_id(id: &[u8]) -> &[u8] {
    let id = id.trim_ascii();
    id.strip_prefix(b"<")
        .and_then(|i| i.strip_suffix(b">"))
        .unwrap_or(id)
}

fn cmd_extract(a: &ExtractArgs, out: &mut dyn Write) -> CmdResult {
    let path = &a.path;
    let mut file = File::open(path).map_err(|e| classify(path, e.into(), EXIT_USAGE))?;
    let codec = sniff_codec(&mut file).map_err(|e| classify(path, e.into(), EXIT_USAGE))?;

    if let Some(offset) = a.offset {
        let (mut reader, record) = open_record_at(file, offset, codec, IterationOptions::default())
            .map_err(|e| classify(path, e, EXIT_BAD_OFFSET))?;
        return write_record(a, &mut reader, &record, out)
            .map_err(|e| classify(path, e, EXIT_BAD_OFFSET));
    }

    let wanted = a.record_id.as_deref().unwrap_or_default();
    let mut reader = WarcReader::open(file, IterationOptions::default())
        .map_err(|e| classify(path, e, EXIT_USAGE))?;
    while let Some(record) = reader
        .next_record()
        .map_err(|e| classify(path, e, EXIT_USAGE))?
    {
        if record
            .record_id()
            .is_some_and(|id| normalize_id(id) == normalize_id(wanted.as_bytes()))
        {
            return write_record(a, &mut reader, &record, out)
                .map_err(|e| classify(path, e, EXIT_USAGE));
        }
    }
    Err(fail(
        EXIT_NOT_FOUND,
        format!("{}: no record with ID {wanted}", path.display()),
    ))
}

/// Writes the record, or the selected part, uncompressed.
fn write_record<R: Read>(
    a: &ExtractArgs,
    reader: &mut WarcReader<R>,
    record: &WarcRecord,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    if !a.payload_only {
        let mut head = record.version.version_line().to_vec();
        record.headers.write_to(&mut head);
        head.extend_from_slice(b"\r\n");
        out.write_all(&head)?;
    }
    if !a.headers_only {
        io::copy(&mut reader.payload(record)?, out)?;
    }
    if !a.payload_only && !a.headers_only {
        out.write_all(b"\r\n\r\n")?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct RecompressRow {
    pub records: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    pub overhead_ratio: f64,
    pub skipped: u64,
}

impl Row for RecompressRow {
    const COLUMNS: &'static [&'static str] = &[
        "records",
        "bytes_in",
        "bytes_out",
        "overhead_ratio",
        "skipped",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.records.to_string(),
            self.bytes_in.to_string(),
            self.bytes_out.to_string(),
            format!("{:.3}", self.overhead_ratio),
            self.skipped.to_string(),
        ]
    }
}

/// Whether `a` and `b` name the same file, `b` possibly not existing yet.
fn same_file(a: &Path, b: &Path) -> bool {
    let Ok(a) = a.canonicalize() else {
        return false;
    };
    let b = match b.canonicalize() {
        Ok(b) => b,
        Err(_) => {
            let parent = b
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(Path::new("."));
            match (parent.canonicalize(), b.file_name()) {
                (Ok(dir), Some(name)) => dir.join(name),
                _ => return false,
            }
        }
    };
    a == b
}

fn cmd_recompress(a: &RecompressArgs, out: &mut dyn Write) -> CmdResult {
    if same_file(&a.input, &a.output) {
        return Err(fail(EXIT_USAGE, "refusing to overwrite the input file"));
    }
    let target = WriteOptions {
        codec: a.codec,
        level: a.level,
        compute_digests: a.digests,
        ..WriteOptions::default()
    };
    target
        .codec
        .validate_level(target.level)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let input = File::open(&a.input).map_err(|e| classify(&a.input, e.into(), EXIT_USAGE))?;
    let output = File::create(&a.output).map_err(|e| classify(&a.output, e.into(), EXIT_USAGE))?;
    let mut sink = BufWriter::with_capacity(1 << 20, output);
    let report = recompress_with(input, &mut sink, target, a.strict)
        .map_err(|e| classify(&a.input, e, EXIT_VERIFY_FAILED))?;
    sink.flush().map_err(io_failure)?;
    let row = RecompressRow {
        records: report.records,
        bytes_in: report.bytes_in,
        bytes_out: report.bytes_out,
        overhead_ratio: report.overhead_ratio,
        skipped: report.skipped,
    };
    emit(out, &[row], a.json).map_err(io_failure)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct StatsRow {
    pub path: String,
    pub record_type: String,
    pub records: u64,
    pub content_bytes: u64,
    pub members: u64,
}

impl Row for StatsRow {
    const COLUMNS: &'static [&'static str] =
        &["path", "record_type", "records", "content_bytes", "members"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.path.clone(),
            self.record_type.clone(),
            self.records.to_string(),
            self.content_bytes.to_string(),
            self.members.to_string(),
        ]
    }
}

/// Per-type counts of one file from a header-only pass.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct FileStats {
    pub counts: [u64; 9],
    pub bytes: [u64; 9],
    pub members: u64,
    pub skipped_regions: u64,
}

impl FileStats {
    pub fn count(&self, t: RecordType) -> u64 {
        self.counts[t as usize]
    }
}

pub fn stats_file(path: &Path, filter: RecordTypeMask) -> Result<FileStats, Error> {
    let mut reader = WarcReader::open(
        File::open(path)?,
        IterationOptions::default().with_filter(filter),
    )?;
    let mut stats = FileStats::default();
    while let Some(record) = reader.next_record()? {
        stats.counts[record.record_type as usize] += 1;
        stats.bytes[record.record_type as usize] += record.content_length();
    }
    stats.members = reader.members();
    stats.skipped_regions = reader.stats().skipped_regions;
    Ok(stats)
}

fn cmd_stats(a: &StatsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let filter = match &a.filter {
        Some(list) => list
            .parse::<RecordTypeMask>()
            .map_err(|e| fail(EXIT_USAGE, format!("--filter: {e}")))?,
        None => RecordTypeMask::ALL,
    };
    let results: Vec<_> = a.paths.par_iter().map(|p| stats_file(p, filter)).collect();
    let mut rows = Vec::new();
    for (path, res) in a.paths.iter().zip(results) {
        let stats = res.map_err(|e| classify(path, e, EXIT_USAGE))?;
        if stats.skipped_regions > 0 {
            let _ = writeln!(
                err,
                "warcflow: warning: {}: skipped {} malformed regions",
                path.display(),
                stats.skipped_regions
            );
        }
        let path = path.display().to_string();
        for t in RecordType::ALL {
            if stats.count(t) > 0 {
                rows.push(StatsRow {
                    path: path.clone(),
                    record_type: t.as_str().to_owned(),
                    records: stats.count(t),
                    content_bytes: stats.bytes[t as usize],
                    members: stats.members,
                });
            }
        }
        rows.push(StatsRow {
            path,
            record_type: "total".to_owned(),
            records: stats.counts.iter().sum(),
            content_bytes: stats.bytes.iter().sum(),
            members: stats.members,
        });
    }
    emit(out, &rows, a.json).map_err(io_failure)?;
    Ok(EXIT_OK)
}

impl Row for bench::BenchmarkResult {
    const COLUMNS: &'static [&'static str] =
        &["codec", "mode", "records", "elapsed_s", "records_per_s"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.codec.to_string(),
            self.mode.to_string(),
            self.records.to_string(),
            format!("{:.6}", self.elapsed_s),
            format!("{:.1}", self.records_per_s),
        ]
    }
}

fn cmd_benchmark(a: &BenchmarkArgs, out: &mut dyn Write) -> CmdResult {
    // sequential on purpose: concurrent passes would distort the timings
    let mut rows = Vec::new();
    for path in &a.paths {
        let preloaded = match a.preload {
            true => Some(std::fs::read(path).map_err(|e| classify(path, e.into(), EXIT_USAGE))?),
            false => None,
        };
        let source = match &preloaded {
            Some(bytes) => Source::Memory(bytes),
            None => Source::File(path),
        };
        for &mode in &a.mode {
            let row = benchmark(source, mode, a.repeat as usize, a.warmup as usize)
                .map_err(|e| classify(path, e, EXIT_USAGE))?;
            rows.push(row);
        }
    }
    emit(out, &rows, a.json).map_err(io_failure)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct GenerateRow {
    pub path: String,
    #[serde(serialize_with = "report::display")]
    pub codec: CodecKind,
    pub records: u64,
    pub bytes: u64,
}

impl Row for GenerateRow {
    const COLUMNS: &'static [&'static str] = &["path", "codec", "records", "bytes"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.path.clone(),
            self.codec.to_string(),
            self.records.to_string(),
            self.bytes.to_string(),
        ]
    }
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> CmdResult {
    if a.min_size > a.max_size {
        return Err(fail(EXIT_USAGE, "--min-size exceeds --max-size"));
    }
    let opts = WriteOptions {
        codec: a.codec,
        level: a.level,
        compute_digests: a.digests,
        ..WriteOptions::default()
    };
    opts.codec
        .validate_level(opts.level)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let spec = CorpusSpec {
        seed: a.seed,
        records: a.records,
        mix: a.mix,
        min_payload: a.min_size,
        max_payload: a.max_size,
    };
    let file = File::create(&a.output).map_err(|e| classify(&a.output, e.into(), EXIT_USAGE))?;
    let mut sink = BufWriter::with_capacity(1 << 20, file);
    let geometry =
        write_corpus(spec, &mut sink, opts).map_err(|e| classify(&a.output, e, EXIT_USAGE))?;
    sink.flush().map_err(io_failure)?;
    let row = GenerateRow {
        path: a.output.display().to_string(),
        codec: a.codec,
        records: geometry.len() as u64,
        bytes: geometry.last().and_then(|g| g.end_offset()).unwrap_or(0),
    };
    emit(out, &[row], a.json).map_err(io_failure)?;
    Ok(EXIT_OK)
}
