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

//! Shared fixture helpers for the integration tests.
#![allow(dead_code)]

use std::io::Cursor;

use warcflow::corpus::GeneratedRecord;
use warcflow::{
    CodecKind, HeaderMap, IterationOptions, RecordGeometry, WarcReader, WarcVersion, WarcWriter,
    WriteOptions,
};

/// RFC 4648 base32 without padding, written out longhand so digest fixtures
/// do not depend on the encoder under test.
pub fn base32(bytes: &[u8]) -> String {
    const ALPHABET: &[u8; 32] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
    let mut out = String::new();
    let (mut acc, mut bits) = (0u32, 0u32);
    for &b in bytes {
        acc = (acc << 8) | u32::from(b);
        bits += 8;
        while bits >= 5 {
            bits -= 5;
            out.push(ALPHABET[((acc >> bits) & 31) as usize] as char);
        }
    }
    if bits > 0 {
        out.push(ALPHABET[((acc << (5 - bits)) & 31) as usize] as char);
    }
    out
}

pub fn sha1_b32(data: &[u8]) -> String {
    format!(
        "sha1:{}",
        base32(&sha1_smol::Sha1::from(data).digest().bytes())
    )
}

pub fn headers(pairs: &[(&str, &str)]) -> HeaderMap {
    pairs.iter().copied().collect()
}

/// Serializes a record by hand, independent of the writer.
pub fn wire(version: &str, pairs: &[(&str, &str)], payload: &[u8]) -> Vec<u8> {
    let mut out = format!("WARC/{version}\r\n").into_bytes();
    for (n, v) in pairs {
        out.extend_from_slice(format!("{n}: {v}\r\n").as_bytes());
    }
    out.extend_from_slice(format!("Content-Length: {}\r\n\r\n", payload.len()).as_bytes());
    out.extend_from_slice(payload);
    out.extend_from_slice(b"\r\n\r\n");
    out
}

pub fn write_records(
    records: &[GeneratedRecord],
    opts: WriteOptions,
) -> (Vec<u8>, Vec<RecordGeometry>) {
    let mut w = WarcWriter::new(Vec::new(), opts).unwrap();
    let geo = records
        .iter()
        .map(|r| {
            w.write_record_bytes(r.version, &r.headers, &r.payload)
                .unwrap()
        })
        .collect();
    (w.into_inner().unwrap(), geo)
}

/// Reads every record with its full payload.
pub fn read_all(bytes: &[u8], kind: CodecKind, opts: IterationOptions) -> Vec<GeneratedRecord> {
    let mut reader = WarcReader::with_codec(Cursor::new(bytes), kind, opts);
    let mut out = Vec::new();
    while let Some(rec) = reader.next_record().unwrap() {
        let payload = reader.read_payload(&rec, u64::MAX).unwrap();
        out.push(GeneratedRecord {
            version: rec.version,
            headers: rec.headers,
            payload,
        });
    }
    out
}

pub fn v11() -> WarcVersion {
    WarcVersion::V1_1
}
