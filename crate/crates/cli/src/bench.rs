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

//! Throughput measurement over the three parse modes.

use std::fs::File;
use std::io::{Cursor, Read};
use std::path::Path;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use serde::Serialize;
use warcflow::{CodecKind, IterationOptions, Result, WarcReader};

/// How much work each record gets during a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
pub enum Mode {
    /// Header blocks only; payloads are skipped.
    #[value(name = "none")]
    #[serde(rename = "none")]
    None,
    /// Also parse the HTTP header section of HTTP records.
    #[value(name = "http")]
    #[serde(rename = "http")]
    Http,
    /// Also verify block and payload digests.
    #[value(name = "http+checksum")]
    #[serde(rename = "http+checksum")]
    HttpChecksum,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::None, Mode::Http, Mode::HttpChecksum];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::None => "none",
            Mode::Http => "http",
            Mode::HttpChecksum => "http+checksum",
        }
    }

    pub fn options(self) -> IterationOptions {
        IterationOptions::default()
            .with_parse_http(self != Mode::None)
            .with_verify_digests(self == Mode::HttpChecksum)
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a pass reads from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    /// Opened afresh for every pass.
    File(&'a Path),
    /// Preloaded bytes, which isolates parsing cost from storage.
    Memory(&'a [u8]),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkResult {
    #[serde(serialize_with = "crate::report::display")]
    pub codec: CodecKind,
    pub mode: Mode,
    pub records: u64,
    pub elapsed_s: f64,
    pub records_per_s: f64,
}

/// Outcome of one timed pass.
#[derive(Debug, Clone, Copy)]
pub struct Pass {
    pub codec: CodecKind,
    pub records: u64,
    pub elapsed: Duration,
}

/// Iterates every record of `source` once in `mode`.
pub fn run_pass(source: Source<'_>, mode: Mode) -> Result<Pass> {
    let start = Instant::now();
    let (codec, records) = match source {
        Source::File(path) => drain(WarcReader::open(File::open(path)?, mode.options())?)?,
        Source::Memory(bytes) => drain(WarcReader::open(Cursor::new(bytes), mode.options())?)?,
    };
    Ok(Pass {
        codec,
        records,
        elapsed: start.elapsed(),
    })
}

fn drain<R: Read>(mut reader: WarcReader<R>) -> Result<(CodecKind, u64)> {
    let mut records = 0;
    while reader.next_record()?.is_some() {
        records += 1;
    }
    Ok((reader.codec(), records))
}

/// `warmup` untimed passes followed by `repeat` timed ones.
pub fn timed_passes(
    source: Source<'_>,
    mode: Mode,
    repeat: usize,
    warmup: usize,
) -> Result<Vec<Pass>> {
    for _ in 0..warmup {
        run_pass(source, mode)?;
    }
    (0..repeat).map(|_| run_pass(source, mode)).collect()
}

/// Summarizes passes by their median time.
pub fn summarize(passes: &[Pass], mode: Mode) -> BenchmarkResult {
    assert!(!passes.is_empty(), "at least one timed pass is needed");
    let elapsed = median(passes.iter().map(|p| p.elapsed.as_secs_f64()).collect());
    let records = passes[0].records;
    BenchmarkResult {
        codec: passes[0].codec,
        mode,
        records,
        elapsed_s: elapsed,
        records_per_s: records as f64 / elapsed.max(f64::MIN_POSITIVE),
    }
}

/// `warmup` untimed passes, then the median of `repeat` timed ones.
pub fn benchmark(
    source: Source<'_>,
    mode: Mode,
    repeat: usize,
    warmup: usize,
) -> Result<BenchmarkResult> {
    Ok(summarize(
        &timed_passes(source, mode, repeat, warmup)?,
        mode,
    ))
}

/// Median of `values`; the mean of the middle pair for even counts.
pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}
