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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use warcflow::{
    CodecKind, HeaderMap, IterationOptions, RecordGeometry, WarcReader, WarcVersion, WarcWriter,
    WriteOptions,
};
use warcflow_cli::bench::{run_pass, summarize, timed_passes, Mode, Source};
use warcflow_cli::{run, EXIT_BAD_OFFSET, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("warcflow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn cli_bytes(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let argv = std::iter::once("warcflow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut Vec::new());
    (code, out)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// TSV body rows split into cells, header row dropped.
fn rows(tsv: &str) -> Vec<Vec<String>> {
    tsv.lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_owned).collect())
        .collect()
}

fn record_id(i: usize) -> String {
    format!("<urn:uuid:00000000-0000-4000-8000-{i:012}>")
}

fn headers(kind: &str, i: usize) -> HeaderMap {
    let mut h = HeaderMap::new();
    h.set("WARC-Type", kind);
    h.set("WARC-Date", "2026-01-02T03:04:05Z");
    h.set("WARC-Record-ID", record_id(i));
    if kind != "warcinfo" {
        h.set("WARC-Target-URI", format!("http://example.com/page/{i}"));
    }
    let ctype = match kind {
        "request" => "application/http; msgtype=request",
        "response" => "application/http; msgtype=response",
        _ => "application/warc-fields",
    };
    h.set("Content-Type", ctype);
    h
}

fn payload(kind: &str, i: usize) -> Vec<u8> {
    match kind {
        "request" => format!("GET /page/{i} HTTP/1.1\r\nHost: example.com\r\n\r\n").into_bytes(),
        "response" => {
            let body = format!(
                "<html><body>page {i} {}</body></html>",
                "lorem ipsum ".repeat(i * 7)
            );
            format!(
                "HTTP/1.1 200 OK\r\nContent-Type: text/html\r\nContent-Length: {}\r\n\r\n{body}",
                body.len()
            )
            .into_bytes()
        }
        _ => b"software: warcflow-tests\r\nformat: WARC File Format 1.1\r\n".to_vec(),
    }
}

/// One warcinfo followed by three request/response pairs.
fn fixture_records() -> Vec<(HeaderMap, Vec<u8>)> {
    let mut kinds = vec!["warcinfo"];
    for _ in 0..3 {
        kinds.extend(["request", "response"]);
    }
    kinds
        .iter()
        .enumerate()
        .map(|(i, k)| (headers(k, i), payload(k, i)))
        .collect()
}

fn write_fixture(path: &Path, codec: CodecKind) -> Vec<RecordGeometry> {
    let opts = WriteOptions {
        compute_digests: true,
        ..WriteOptions::new(codec)
    };
    let mut w = WarcWriter::new(Vec::new(), opts).unwrap();
    let geo = fixture_records()
        .iter()
        .map(|(h, body)| w.write_record_bytes(WarcVersion::V1_1, h, body).unwrap())
        .collect();
    fs::write(path, w.into_inner().unwrap()).unwrap();
    geo
}

struct Fixture {
    _dir: TempDir,
    plain: PathBuf,
    gzip: PathBuf,
    lz4: PathBuf,
    plain_geo: Vec<RecordGeometry>,
    gzip_geo: Vec<RecordGeometry>,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let plain = dir.path().join("f.warc");
    let gzip = dir.path().join("f.warc.gz");
    let lz4 = dir.path().join("f.warc.lz4");
    let plain_geo = write_fixture(&plain, CodecKind::None);
    let gzip_geo = write_fixture(&gzip, CodecKind::Gzip);
    write_fixture(&lz4, CodecKind::Lz4);
    Fixture {
        _dir: dir,
        plain,
        gzip,
        lz4,
        plain_geo,
        gzip_geo,
    }
}

/// Record headers and payloads in file order.
fn sequence(path: &Path) -> Vec<(Vec<u8>, Vec<u8>)> {
    let bytes = fs::read(path).unwrap();
    let mut reader = WarcReader::open(&bytes[..], IterationOptions::default()).unwrap();
    let mut out = Vec::new();
    while let Some(rec) = reader.next_record().unwrap() {
        let mut head = Vec::new();
        rec.headers.write_to(&mut head);
        out.push((head, reader.read_payload(&rec, u64::MAX).unwrap()));
    }
    out
}

#[test]
fn verify_pristine_file_passes() {
    let f = fixture();
    for path in [&f.plain, &f.gzip, &f.lz4] {
        let o = cli(&["verify", p(path)]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let r = &rows(&o.stdout)[0];
        assert_eq!(r[1..], ["7", "7", "0", "0", "0"]);
    }
}

#[test]
fn verify_reports_flipped_payload_byte() {
    let f = fixture();
    let mut bytes = fs::read(&f.plain).unwrap();
    let g = &f.plain_geo[2];
    bytes[(g.file_offset + g.header_length + 3) as usize] ^= 0x20;
    fs::write(&f.plain, bytes).unwrap();
    let o = cli(&["verify", p(&f.plain)]);
    assert_eq!(o.code, EXIT_VERIFY_FAILED);
    let r = &rows(&o.stdout)[0];
    assert_eq!(r[1..], ["7", "6", "1", "0", "0"]);
}

#[test]
fn verify_empty_file_warns_and_succeeds() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.warc");
    fs::write(&empty, b"").unwrap();
    let o = cli(&["verify", p(&empty)]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(rows(&o.stdout)[0][1], "0");
    assert!(o.stderr.contains("warning"), "{}", o.stderr);
}

#[test]
fn verify_quiet_prints_nothing_and_json_parses() {
    let f = fixture();
    let o = cli(&["verify", "--quiet", p(&f.gzip)]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, ""));
    let o = cli(&["verify", "--json", p(&f.gzip), p(&f.lz4)]);
    let lines: Vec<serde_json::Value> = o
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines
        .iter()
        .all(|v| v["digest_pass"] == 7 && v["digest_fail"] == 0));
}

#[test]
fn verify_missing_file_is_usage_error() {
    let o = cli(&["verify", "/nonexistent/warcflow/x.warc"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn extract_by_offset_matches_sequential_wire_form() {
    let f = fixture();
    let plain = fs::read(&f.plain).unwrap();
    for k in 0..f.plain_geo.len() {
        let g = &f.plain_geo[k];
        let expected = &plain[g.file_offset as usize..g.end_offset().unwrap() as usize];
        for (path, offset) in [
            (&f.plain, g.file_offset),
            (&f.gzip, f.gzip_geo[k].file_offset),
        ] {
            let (code, got) = cli_bytes(&["extract", p(path), "--offset", &offset.to_string()]);
            assert_eq!(code, EXIT_OK);
            assert_eq!(got, expected, "record {k} from {}", path.display());
        }
    }
}

#[test]
fn extract_by_record_id_with_or_without_brackets() {
    let f = fixture();
    let plain = fs::read(&f.plain).unwrap();
    let g = &f.plain_geo[4];
    let expected = &plain[g.file_offset as usize..g.end_offset().unwrap() as usize];
    let id = record_id(4);
    for wanted in [id.as_str(), id.trim_matches(['<', '>'])] {
        let (code, got) = cli_bytes(&["extract", p(&f.lz4), "--record-id", wanted]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(got, expected);
    }
}

#[test]
fn extract_parts() {
    let f = fixture();
    let records = fixture_records();
    let (code, body) = cli_bytes(&[
        "extract",
        p(&f.gzip),
        "--record-id",
        &record_id(2),
        "--payload-only",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(body, records[2].1);
    let (code, head) = cli_bytes(&[
        "extract",
        p(&f.gzip),
        "--record-id",
        &record_id(2),
        "--headers-only",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(head.starts_with(b"WARC/1.1\r\nWARC-Type: response\r\n"));
    assert!(head.ends_with(b"\r\n\r\n"));
    assert_eq!(head.len() as u64, f.plain_geo[2].header_length);
}

#[test]
fn extract_mid_member_offset_fails() {
    let f = fixture();
    let inside = f.gzip_geo[3].file_offset + 5;
    let o = cli(&["extract", p(&f.gzip), "--offset", &inside.to_string()]);
    assert_eq!(o.code, EXIT_BAD_OFFSET);
    assert!(o.stderr.contains("offset"), "{}", o.stderr);
    let past = fs::metadata(&f.gzip).unwrap().len() + 100;
    assert_eq!(
        cli(&["extract", p(&f.gzip), "--offset", &past.to_string()]).code,
        EXIT_BAD_OFFSET
    );
}

#[test]
fn extract_unknown_record_id() {
    let f = fixture();
    let o = cli(&["extract", p(&f.gzip), "--record-id", "<urn:uuid:missing>"]);
    assert_eq!(o.code, EXIT_NOT_FOUND);
}

#[test]
fn extract_needs_a_locator() {
    let f = fixture();
    assert_eq!(cli(&["extract", p(&f.gzip)]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["extract", p(&f.gzip), "--offset", "0", "--record-id", "x"]).code,
        EXIT_USAGE
    );
}

#[test]
fn recompress_round_trip_preserves_records() {
    let f = fixture();
    let dir = TempDir::new().unwrap();
    let lz4 = dir.path().join("out.warc.lz4");
    let back = dir.path().join("back.warc.gz");
    let o = cli(&["recompress", p(&f.gzip), p(&lz4), "--codec", "lz4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let row = &rows(&o.stdout)[0];
    assert_eq!(row[0], "7");
    let ratio = &row[3];
    assert_eq!(
        ratio.split('.').nth(1).map(str::len),
        Some(3),
        "ratio {ratio}"
    );
    let (bytes_in, bytes_out): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
    assert!((ratio.parse::<f64>().unwrap() - bytes_out / bytes_in).abs() < 5e-4);

    assert_eq!(
        cli(&["recompress", p(&lz4), p(&back), "--codec", "gzip"]).code,
        EXIT_OK
    );
    let original = sequence(&f.gzip);
    assert_eq!(sequence(&lz4), original);
    assert_eq!(sequence(&back), original);
    assert_eq!(fs::read(&back).unwrap(), fs::read(&f.gzip).unwrap());
}

#[test]
fn recompress_refuses_to_overwrite_input() {
    let f = fixture();
    let before = fs::read(&f.gzip).unwrap();
    let o = cli(&["recompress", p(&f.gzip), p(&f.gzip)]);
    assert_eq!(o.code, EXIT_USAGE);
    assert_eq!(fs::read(&f.gzip).unwrap(), before);
}

#[test]
fn recompress_rejects_bad_level() {
    let f = fixture();
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.gz");
    assert_eq!(
        cli(&[
            "recompress",
            p(&f.lz4),
            p(&out),
            "--codec",
            "gzip",
            "--level",
            "12"
        ])
        .code,
        EXIT_USAGE
    );
}

#[test]
fn stats_counts_per_type() {
    let f = fixture();
    let o = cli(&["stats", p(&f.gzip)]);
    assert_eq!(o.code, EXIT_OK);
    let counts: Vec<(String, String)> = rows(&o.stdout)
        .into_iter()
        .map(|r| (r[1].clone(), r[2].clone()))
        .collect();
    let expected = [
        ("warcinfo", "1"),
        ("request", "3"),
        ("response", "3"),
        ("total", "7"),
    ];
    for (t, n) in expected {
        assert!(
            counts.contains(&(t.to_owned(), n.to_owned())),
            "{t}: {counts:?}"
        );
    }
    assert_eq!(counts.len(), 4);
    assert!(rows(&o.stdout).iter().all(|r| r[4] == "7"));
}

#[test]
fn stats_filter_restricts_types() {
    let f = fixture();
    let o = cli(&["stats", "--filter", "response", p(&f.lz4)]);
    assert_eq!(o.code, EXIT_OK);
    let r = rows(&o.stdout);
    assert_eq!(r.len(), 2);
    assert_eq!((r[0][1].as_str(), r[0][2].as_str()), ("response", "3"));
    let expected: usize = fixture_records()
        .iter()
        .skip(2)
        .step_by(2)
        .map(|(_, b)| b.len())
        .sum();
    assert_eq!(r[0][3], expected.to_string());
}

#[test]
fn stats_empty_filter_is_usage_error() {
    let f = fixture();
    assert_eq!(cli(&["stats", "--filter", "", p(&f.lz4)]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["stats", "--filter", "bogus", p(&f.lz4)]).code,
        EXIT_USAGE
    );
}

#[test]
fn benchmark_rows_per_mode() {
    let f = fixture();
    let o = cli(&["benchmark", "--repeat", "1", "--warmup", "0", p(&f.gzip)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r = rows(&o.stdout);
    let modes: Vec<&str> = r.iter().map(|row| row[1].as_str()).collect();
    assert_eq!(modes, ["none", "http", "http+checksum"]);
    assert!(r.iter().all(|row| row[0] == "gzip" && row[2] == "7"));
}

#[test]
fn benchmark_json_and_mode_selection() {
    let f = fixture();
    let o = cli(&[
        "benchmark",
        "--json",
        "--preload",
        "--repeat",
        "2",
        "--mode",
        "http",
        p(&f.plain),
        p(&f.lz4),
    ]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<serde_json::Value> = o
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["codec"], "none");
    assert_eq!(lines[1]["codec"], "lz4");
    assert!(lines
        .iter()
        .all(|v| v["mode"] == "http" && v["records"] == 7));
    assert!(lines
        .iter()
        .all(|v| v["records_per_s"].as_f64().unwrap() > 0.0));
}

#[test]
fn benchmark_repeat_zero_is_rejected() {
    let f = fixture();
    assert_eq!(
        cli(&["benchmark", "--repeat", "0", p(&f.gzip)]).code,
        EXIT_USAGE
    );
}

#[test]
fn benchmark_pass_count_follows_repeat() {
    let f = fixture();
    let passes = timed_passes(Source::File(&f.lz4), Mode::HttpChecksum, 1, 0).unwrap();
    assert_eq!(passes.len(), 1);
    let passes = timed_passes(Source::File(&f.lz4), Mode::None, 3, 2).unwrap();
    assert_eq!(passes.len(), 3);
    let result = summarize(&passes, Mode::None);
    assert_eq!(result.records, 7);
    assert_eq!(
        run_pass(Source::File(&f.lz4), Mode::Http).unwrap().records,
        7
    );
}

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let make = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let o = cli(&[
            "generate",
            p(&path),
            "--records",
            "40",
            "--seed",
            seed,
            "--max-size",
            "4096",
            "--digests",
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        fs::read(path).unwrap()
    };
    let a = make("a.warc.gz", "9");
    assert_eq!(a, make("b.warc.gz", "9"));
    assert_ne!(a, make("c.warc.gz", "10"));
    let path = dir.path().join("a.warc.gz");
    let o = cli(&["verify", p(&path)]);
    assert_eq!(rows(&o.stdout)[0][1..3], ["40", "40"]);
}

#[test]
fn generate_rejects_bad_arguments() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.warc");
    let out = p(&out);
    assert_eq!(
        cli(&["generate", out, "--min-size", "10", "--max-size", "5"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["generate", out, "--mix", "responses:2"]).code,
        EXIT_USAGE
    );
    assert_eq!(cli(&["generate", out, "--codec", "zstd"]).code, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let f = fixture();
    let bin = env!("CARGO_BIN_EXE_warcflow");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["verify", p(&f.lz4)]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("path\trecords\t"));
    assert_eq!(status(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(status(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(
        status(&["extract", p(&f.lz4), "--record-id", "nope"])
            .status
            .code(),
        Some(EXIT_NOT_FOUND)
    );
}
