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

mod common;

use std::io::{Cursor, Read};

use common::*;
use warcflow::corpus::{generate, CorpusSpec, GeneratedRecord, TypeMix};
use warcflow::writer::recompress_with;
use warcflow::{
    recompress, CodecKind, DigestAlgorithm, DigestStatus, Error, IterationOptions, WarcReader,
    WarcVersion, WarcWriter, WriteOptions,
};

fn corpus(records: usize, seed: u64) -> Vec<GeneratedRecord> {
    generate(CorpusSpec {
        seed,
        records,
        mix: TypeMix::CrawlTriples,
        min_payload: 0,
        max_payload: 40_000,
    })
    .collect()
}

/// Decodes concatenated gzip members with flate2's own framing, returning
/// the member count and the decompressed bytes.
fn oracle_gunzip(mut rest: &[u8]) -> (usize, Vec<u8>) {
    let (mut members, mut out) = (0, Vec::new());
    while !rest.is_empty() {
        let mut d = flate2::bufread::GzDecoder::new(rest);
        d.read_to_end(&mut out).unwrap();
        rest = d.into_inner();
        members += 1;
    }
    (members, out)
}

fn oracle_unlz4(file: &[u8]) -> (usize, Vec<u8>) {
    let mut cursor = Cursor::new(file);
    let (mut frames, mut out) = (0, Vec::new());
    while (cursor.position() as usize) < file.len() {
        lz4_flex::frame::FrameDecoder::new(&mut cursor)
            .read_to_end(&mut out)
            .unwrap();
        frames += 1;
    }
    (frames, out)
}

#[test]
fn one_member_per_record_and_same_bytes_as_uncompressed() {
    let records = corpus(25, 3);
    let (plain, _) = write_records(&records, WriteOptions::new(CodecKind::None));
    let (gz, _) = write_records(&records, WriteOptions::new(CodecKind::Gzip));
    let (lz, _) = write_records(&records, WriteOptions::new(CodecKind::Lz4));
    assert_eq!(oracle_gunzip(&gz), (records.len(), plain.clone()));
    assert_eq!(oracle_unlz4(&lz), (records.len(), plain));
}

#[test]
fn wire_form_is_exact() {
    let h = headers(&[
        ("WARC-Type", "resource"),
        ("Content-Length", "1"),
        ("X-Custom", "kept as is"),
    ]);
    let mut w = WarcWriter::new(Vec::new(), WriteOptions::default()).unwrap();
    w.write_record_bytes(WarcVersion::V1_0, &h, b"hello")
        .unwrap();
    assert_eq!(
        w.into_inner().unwrap(),
        b"WARC/1.0\r\nWARC-Type: resource\r\nContent-Length: 5\r\nX-Custom: kept as is\r\n\r\nhello\r\n\r\n"
    );
}

#[test]
fn missing_content_length_is_appended() {
    let mut w = WarcWriter::new(Vec::new(), WriteOptions::default()).unwrap();
    w.write_record_bytes(
        WarcVersion::V1_1,
        &headers(&[("WARC-Type", "resource")]),
        b"ab",
    )
    .unwrap();
    assert_eq!(
        w.into_inner().unwrap(),
        wire("1.1", &[("WARC-Type", "resource")], b"ab")
    );
}

#[test]
fn computed_digests_match_an_independent_hash() {
    let body = b"<html>body</html>".as_slice();
    let block = [
        b"HTTP/1.1 200 OK\r\nContent-Type: text/html\r\n\r\n".as_slice(),
        body,
    ]
    .concat();
    let h = headers(&[
        ("WARC-Type", "response"),
        ("Content-Type", "application/http;msgtype=response"),
    ]);
    let opts = WriteOptions {
        compute_digests: true,
        ..WriteOptions::default()
    };
    let mut w = WarcWriter::new(Vec::new(), opts).unwrap();
    w.write_record_bytes(WarcVersion::V1_1, &h, &block).unwrap();
    w.write_record_bytes(
        WarcVersion::V1_1,
        &headers(&[("WARC-Type", "resource")]),
        body,
    )
    .unwrap();
    let bytes = w.into_inner().unwrap();

    let mut r = WarcReader::with_codec(
        Cursor::new(&bytes),
        CodecKind::None,
        IterationOptions::default().with_verify_digests(true),
    );
    let rec = r.next_record().unwrap().unwrap();
    assert_eq!(
        rec.header("WARC-Block-Digest").unwrap(),
        sha1_b32(&block).as_bytes()
    );
    assert_eq!(
        rec.header("WARC-Payload-Digest").unwrap(),
        sha1_b32(body).as_bytes()
    );
    let report = rec.digests.unwrap();
    assert_eq!(
        (report.block, report.payload),
        (DigestStatus::Pass, DigestStatus::Pass)
    );

    let rec = r.next_record().unwrap().unwrap();
    assert_eq!(
        rec.header("WARC-Block-Digest").unwrap(),
        sha1_b32(body).as_bytes()
    );
    assert!(rec.header("WARC-Payload-Digest").is_none());
    let report = rec.digests.unwrap();
    assert_eq!(
        (report.block, report.payload),
        (DigestStatus::Pass, DigestStatus::Absent)
    );
}

#[test]
fn existing_digests_are_left_alone() {
    let h = headers(&[
        ("WARC-Type", "resource"),
        ("WARC-Block-Digest", "sha1:AAAA"),
    ]);
    let opts = WriteOptions {
        compute_digests: true,
        ..WriteOptions::default()
    };
    let mut w = WarcWriter::new(Vec::new(), opts).unwrap();
    w.write_record_bytes(WarcVersion::V1_1, &h, b"x").unwrap();
    let bytes = w.into_inner().unwrap();
    let rec = WarcReader::with_codec(
        Cursor::new(&bytes),
        CodecKind::None,
        IterationOptions::default(),
    )
    .next_record()
    .unwrap()
    .unwrap();
    assert_eq!(
        rec.headers
            .get_all(b"WARC-Block-Digest")
            .collect::<Vec<_>>(),
        [&b"sha1:AAAA"[..]]
    );
}

#[test]
fn selectable_digest_algorithm() {
    let opts = WriteOptions {
        compute_digests: true,
        digest_algorithm: DigestAlgorithm::Sha256,
        ..WriteOptions::new(CodecKind::Lz4)
    };
    let mut w = WarcWriter::new(Vec::new(), opts).unwrap();
    w.write_record_bytes(
        WarcVersion::V1_1,
        &headers(&[("WARC-Type", "resource")]),
        b"",
    )
    .unwrap();
    let bytes = w.into_inner().unwrap();
    let rec = WarcReader::with_codec(
        Cursor::new(&bytes),
        CodecKind::Lz4,
        IterationOptions::default().with_verify_digests(true),
    )
    .next_record()
    .unwrap()
    .unwrap();
    // sha256 of the empty string
    assert_eq!(
        rec.header("WARC-Block-Digest").unwrap(),
        b"sha256:4OYMIQUY7QOBJGX36TEJS35ZEQT24QPEMSNZGTFESWMRW6CSXBKQ"
    );
    assert_eq!(rec.digests.unwrap().block, DigestStatus::Pass);
}

#[test]
fn streaming_write_reports_short_payload() {
    let mut w = WarcWriter::new(Vec::new(), WriteOptions::new(CodecKind::Lz4)).unwrap();
    let err = w
        .write_record(
            WarcVersion::V1_1,
            &headers(&[("WARC-Type", "resource")]),
            &b"short"[..],
            100,
        )
        .unwrap_err();
    assert!(matches!(
        err,
        Error::LengthMismatch {
            declared: 100,
            actual: 5
        }
    ));
}

#[test]
fn appending_writer_reports_absolute_offsets() {
    let records = corpus(4, 9);
    let (first, _) = write_records(&records[..2], WriteOptions::new(CodecKind::Gzip));
    let mut w = WarcWriter::with_offset(
        first.clone(),
        first.len() as u64,
        WriteOptions::new(CodecKind::Gzip),
    )
    .unwrap();
    let geo: Vec<_> = records[2..]
        .iter()
        .map(|r| {
            w.write_record_bytes(r.version, &r.headers, &r.payload)
                .unwrap()
        })
        .collect();
    let bytes = w.into_inner().unwrap();
    assert_eq!(geo[0].file_offset, first.len() as u64);
    let (_, rec) = warcflow::open_record_at(
        Cursor::new(&bytes),
        geo[1].file_offset,
        CodecKind::Gzip,
        IterationOptions::default(),
    )
    .unwrap();
    assert_eq!(rec.headers, records[3].headers);
}

#[test]
fn recompress_round_trips_between_codecs() {
    let records = corpus(60, 11);
    let (gz, _) = write_records(&records, WriteOptions::new(CodecKind::Gzip));

    let mut lz = Vec::new();
    let report = recompress(&gz[..], &mut lz, WriteOptions::new(CodecKind::Lz4)).unwrap();
    assert_eq!(report.records, records.len() as u64);
    assert_eq!(
        (report.bytes_in, report.bytes_out),
        (gz.len() as u64, lz.len() as u64)
    );
    assert!((report.overhead_ratio - lz.len() as f64 / gz.len() as f64).abs() < 1e-12);
    assert_eq!(report.skipped, 0);
    assert!(read_all(&lz, CodecKind::Lz4, IterationOptions::default()) == records);

    let mut back = Vec::new();
    recompress(&lz[..], &mut back, WriteOptions::new(CodecKind::Gzip)).unwrap();
    assert!(read_all(&back, CodecKind::Gzip, IterationOptions::default()) == records);
}

#[test]
fn identity_transcode_is_byte_exact() {
    let records = corpus(30, 12);
    let (plain, _) = write_records(&records, WriteOptions::default());
    let mut out = Vec::new();
    let report = recompress(&plain[..], &mut out, WriteOptions::default()).unwrap();
    assert_eq!(out, plain);
    assert_eq!(report.overhead_ratio, 1.0);
}

#[test]
fn recompress_skips_damage_unless_strict() {
    let records = corpus(10, 13);
    let (mut gz, geo) = write_records(&records, WriteOptions::new(CodecKind::Gzip));
    let g = geo[4];
    gz[(g.file_offset + g.compressed_length.unwrap() / 2) as usize] ^= 0xFF;

    let mut out = Vec::new();
    let report = recompress(&gz[..], &mut out, WriteOptions::new(CodecKind::Lz4)).unwrap();
    assert!(report.skipped > 0);
    assert!(report.records >= 9);
    // whatever was written reads back cleanly in strict mode
    let strict = IterationOptions::default().with_strict(true);
    assert_eq!(
        read_all(&out, CodecKind::Lz4, strict).len() as u64,
        report.records
    );

    assert!(recompress_with(&gz[..], Vec::new(), WriteOptions::new(CodecKind::Lz4), true).is_err());
}

/// Text payload of `len` bytes that LZ4 compresses into several blocks.
fn prose(len: usize) -> Vec<u8> {
    let words = [
        "archive ", "record ", "crawl ", "payload ", "member ", "block ",
    ];
    words
        .iter()
        .cycle()
        .flat_map(|w| w.bytes())
        .take(len)
        .collect()
}

#[test]
fn lz4_header_block_is_its_own_block() {
    let headers = headers(&[("WARC-Type", "resource"), ("Content-Type", "text/plain")]);
    let mut w = WarcWriter::new(Vec::new(), WriteOptions::new(CodecKind::Lz4)).unwrap();
    let geo = w
        .write_record_bytes(WarcVersion::V1_1, &headers, &prose(200_000))
        .unwrap();
    let file = w.into_inner().unwrap();

    // magic, FLG, BD, 8-byte content size, header checksum
    assert_eq!(file[4] & 0x08, 0x08);
    let word = u32::from_le_bytes(file[15..19].try_into().unwrap());
    let len = (word & 0x7fff_ffff) as usize;
    let block = &file[19..19 + len];
    let head = match word & 0x8000_0000 {
        0 => lz4_flex::block::decompress(block, geo.header_length as usize).unwrap(),
        _ => block.to_vec(),
    };
    assert_eq!(head.len() as u64, geo.header_length);
    assert!(head.starts_with(b"WARC/1.1\r\nWARC-Type: resource\r\n"));
    assert!(head.ends_with(b"\r\n\r\n"));
}

#[test]
fn lz4_skipping_hops_over_content_blocks() {
    let headers = headers(&[("WARC-Type", "resource"), ("Content-Type", "text/plain")]);
    let mut w = WarcWriter::new(Vec::new(), WriteOptions::new(CodecKind::Lz4)).unwrap();
    w.write_record_bytes(WarcVersion::V1_1, &headers, &prose(200_000))
        .unwrap();
    w.write_record_bytes(WarcVersion::V1_1, &headers, b"tail")
        .unwrap();
    let mut file = w.into_inner().unwrap();

    // damage the first content block, past the header-only block
    let head_len = (u32::from_le_bytes(file[15..19].try_into().unwrap()) & 0x7fff_ffff) as usize;
    let content = 19 + head_len + 4;
    file[content + 20] ^= 0xff;
    file[content + 21] ^= 0xff;

    let mut skimmer = WarcReader::with_codec(
        &file[..],
        CodecKind::Lz4,
        IterationOptions::default().with_strict(true),
    );
    let mut seen = 0;
    while skimmer.next_record().unwrap().is_some() {
        seen += 1;
    }
    assert_eq!(
        seen, 2,
        "header-only iteration never decodes content blocks"
    );

    let mut reader = WarcReader::with_codec(
        &file[..],
        CodecKind::Lz4,
        IterationOptions::default().with_strict(true),
    );
    let rec = reader.next_record().unwrap().unwrap();
    // the damage surfaces while decoding or, at the latest, at the frame checksum
    let err = match reader.read_payload(&rec, u64::MAX) {
        Err(e) => e,
        Ok(_) => reader.next_record().unwrap_err(),
    };
    assert!(err.is_data_error() && err.offset() == Some(0), "{err}");
}
