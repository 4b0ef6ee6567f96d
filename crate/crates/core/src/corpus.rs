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

//! Deterministic synthetic WARC corpora.
//!
//! Records look like a crawl: HTTP requests and responses with HTML-like
//! bodies, metadata and the other standard types. The same seed always
//! yields the same records.

use std::fmt::Write as _;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{HeaderMap, RecordGeometry, RecordType, WarcVersion};
use crate::writer::{WarcWriter, WriteOptions};

/// Which record types a corpus contains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TypeMix {
    /// A warcinfo record, then request, response, metadata triples.
    CrawlTriples,
    /// The eight standard types drawn uniformly.
    Uniform,
    /// Responses with the given probability, other types otherwise.
    ResponseFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub records: usize,
    pub mix: TypeMix,
    /// Content sizes are drawn log-uniformly from this range (bytes).
    pub min_payload: u64,
    pub max_payload: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 0,
            records: 1000,
            mix: TypeMix::CrawlTriples,
            min_payload: 256,
            max_payload: 256 * 1024,
        }
    }
}

/// A record as generated, before serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedRecord {
    pub version: WarcVersion,
    pub headers: HeaderMap,
    pub payload: Vec<u8>,
}

impl GeneratedRecord {
    pub fn record_type(&self) -> RecordType {
        RecordType::of(&self.headers)
    }
}

/// Iterator over the records of a [`CorpusSpec`].
pub struct Corpus {
    spec: CorpusSpec,
    rng: ChaCha8Rng,
    vocab: Vec<String>,
    hosts: Vec<String>,
    index: usize,
    last_id: Option<String>,
    last_uri: String,
}

pub fn generate(spec: CorpusSpec) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vocab = (0..4096).map(|_| make_word(&mut rng)).collect();
    let hosts = (0..64)
        .map(|_| {
            let tld = ["com", "org", "net", "de", "io"][rng.gen_range(0..5)];
            format!("www.{}{}.{tld}", make_word(&mut rng), make_word(&mut rng))
        })
        .collect();
    Corpus {
        spec,
        rng,
        vocab,
        hosts,
        index: 0,
        last_id: None,
        last_uri: String::from("https://example.com/"),
    }
}

/// Generates `spec` and writes it with `opts`; returns each record's geometry.
pub fn write_corpus<W: Write>(
    spec: CorpusSpec,
    out: W,
    opts: WriteOptions,
) -> Result<Vec<RecordGeometry>> {
    let mut writer = WarcWriter::new(out, opts)?;
    let mut geometry = Vec::with_capacity(spec.records);
    for record in generate(spec) {
        geometry.push(writer.write_record_bytes(
            record.version,
            &record.headers,
            &record.payload,
        )?);
    }
    writer.flush()?;
    Ok(geometry)
}

fn make_word(rng: &mut ChaCha8Rng) -> String {
    const ONSETS: [&str; 16] = [
        "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v", "st",
    ];
    const VOWELS: [&str; 8] = ["a", "e", "i", "o", "u", "ea", "ou", "y"];
    let syllables = rng.gen_range(1..=3);
    let mut word = String::new();
    for _ in 0..syllables {
        word.push_str(ONSETS[rng.gen_range(0..ONSETS.len())]);
        word.push_str(VOWELS[rng.gen_range(0..VOWELS.len())]);
    }
    if rng.gen_bool(0.4) {
        word.push_str(["n", "r", "s", "t", "l"][rng.gen_range(0..5)]);
    }
    word
}

impl Corpus {
    fn pick_type(&mut self) -> RecordType {
        const OTHERS: [RecordType; 6] = [
            RecordType::Request,
            RecordType::Metadata,
            RecordType::Resource,
            RecordType::Revisit,
            RecordType::Conversion,
            RecordType::Warcinfo,
        ];
        match self.spec.mix {
            TypeMix::CrawlTriples => match self.index {
                0 => RecordType::Warcinfo,
                i => [
                    RecordType::Request,
                    RecordType::Response,
                    RecordType::Metadata,
                ][(i - 1) % 3],
            },
            TypeMix::Uniform => RecordType::ALL[self.rng.gen_range(0..8)],
            TypeMix::ResponseFraction(f) => {
                if self.rng.gen_bool(f.clamp(0.0, 1.0)) {
                    RecordType::Response
                } else {
                    OTHERS[self.rng.gen_range(0..OTHERS.len())]
                }
            }
        }
    }

    fn size(&mut self) -> usize {
        let lo = ((self.spec.min_payload + 1) as f64).ln();
        let hi = ((self.spec.max_payload.max(self.spec.min_payload) + 1) as f64).ln();
        let v = self.rng.gen_range(lo..=hi).exp() - 1.0;
        (v.round() as u64).clamp(self.spec.min_payload, self.spec.max_payload) as usize
    }

    /// Index of a vocabulary word, skewed towards the head like natural text.
    fn word(&mut self) -> usize {
        let u: f64 = self.rng.gen();
        ((u.powf(2.5) * self.vocab.len() as f64) as usize).min(self.vocab.len() - 1)
    }

    fn uri(&mut self) -> String {
        let host = self.hosts[self.rng.gen_range(0..self.hosts.len())].clone();
        let (a, b) = (self.word(), self.word());
        format!("https://{host}/{}/{}.html", self.vocab[a], self.vocab[b])
    }

    fn uuid(&mut self) -> String {
        let b: [u8; 16] = self.rng.gen();
        format!(
            "<urn:uuid:{:08x}-{:04x}-4{:03x}-{:04x}-{:012x}>",
            u32::from_be_bytes([b[0], b[1], b[2], b[3]]),
            u16::from_be_bytes([b[4], b[5]]),
            u16::from_be_bytes([b[6], b[7]]) & 0x0fff,
            (u16::from_be_bytes([b[8], b[9]]) & 0x3fff) | 0x8000,
            u64::from_be_bytes([0, 0, b[10], b[11], b[12], b[13], b[14], b[15]]),
        )
    }

    /// HTML-like text of exactly `len` bytes.
    fn html(&mut self, len: usize) -> Vec<u8> {
        let mut s = String::with_capacity(len + 256);
        let (a, b) = (self.word(), self.word());
        let title = format!("{} {}", self.vocab[a], self.vocab[b]);
        let _ = write!(
            s,
            "<!DOCTYPE html>\n<html><head><title>{title}</title></head>\n<body>\n"
        );
        while s.len() < len {
            match self.rng.gen_range(0..10) {
                0 => {
                    let w = self.word();
                    let _ = writeln!(s, "<h2>{}</h2>", self.vocab[w]);
                }
                1 | 2 => {
                    let uri = self.uri();
                    let w = self.word();
                    let _ = writeln!(s, "<a href=\"{uri}\">{}</a>", self.vocab[w]);
                }
                _ => {
                    s.push_str("<p>");
                    for i in 0..self.rng.gen_range(8..60) {
                        if i > 0 {
                            s.push(' ');
                        }
                        let w = self.word();
                        s.push_str(&self.vocab[w]);
                    }
                    s.push_str(".</p>\n");
                }
            }
        }
        let mut bytes = s.into_bytes();
        bytes.truncate(len);
        bytes
    }

    fn http_response(&mut self, body_len: usize) -> Vec<u8> {
        let (status, reason) = match self.rng.gen_range(0..20) {
            0 => (404, "Not Found"),
            1 => (301, "Moved Permanently"),
            _ => (200, "OK"),
        };
        let body = self.html(body_len);
        let server = self.word();
        let mut out = format!(
            "HTTP/1.1 {status} {reason}\r\nContent-Type: text/html; charset=utf-8\r\nContent-Length: {}\r\nServer: {}\r\nDate: Thu, 01 Jan 2026 00:00:00 GMT\r\n\r\n",
            body.len(),
            self.vocab[server],
        )
        .into_bytes();
        out.extend_from_slice(&body);
        out
    }

    fn http_request(&mut self, uri: &str) -> Vec<u8> {
        let rest = uri.trim_start_matches("https://");
        let (host, path) = rest.split_at(rest.find('/').unwrap_or(rest.len()));
        format!(
            "GET {path} HTTP/1.1\r\nHost: {host}\r\nUser-Agent: warcflow-gen/1.0\r\nAccept: text/html,*/*;q=0.8\r\nAccept-Encoding: identity\r\n\r\n"
        )
        .into_bytes()
    }

    fn fields(&mut self, len: usize) -> Vec<u8> {
        let mut s = format!("fetchTimeMs: {}\r\n", self.rng.gen_range(1..5000));
        while s.len() < len {
            let uri = self.uri();
            let _ = write!(s, "outlink: {uri}\r\n");
        }
        let mut bytes = s.into_bytes();
        bytes.truncate(len.max(2));
        bytes
    }
}

impl Iterator for Corpus {
    type Item = GeneratedRecord;

    fn next(&mut self) -> Option<GeneratedRecord> {
        if self.index >= self.spec.records {
            return None;
        }
        let record_type = self.pick_type();
        let id = self.uuid();
        let date = format!(
            "2026-01-{:02}T{:02}:{:02}:{:02}Z",
            1 + self.index / 86_400 % 28,
            self.index / 3600 % 24,
            self.index / 60 % 60,
            self.index % 60
        );

        let starts_pair = match self.spec.mix {
            TypeMix::CrawlTriples => record_type == RecordType::Request,
            _ => record_type != RecordType::Metadata,
        };
        if starts_pair {
            self.last_uri = self.uri();
        }
        let uri = self.last_uri.clone();

        let (content_type, payload): (&str, Vec<u8>) = match record_type {
            RecordType::Warcinfo => (
                "application/warc-fields",
                b"software: warcflow-gen/1.0\r\nformat: WARC File Format 1.1\r\nconformsTo: https://iipc.github.io/warc-specifications/\r\n".to_vec(),
            ),
            RecordType::Request => ("application/http;msgtype=request", self.http_request(&uri)),
            RecordType::Response => {
                let n = self.size();
                ("application/http;msgtype=response", self.http_response(n))
            }
            RecordType::Revisit => ("application/http;msgtype=response", self.http_response(0)),
            RecordType::Metadata => {
                let n = self.size().min(16 * 1024);
                ("application/warc-fields", self.fields(n))
            }
            RecordType::Resource | RecordType::Conversion | RecordType::Continuation | RecordType::Unknown => {
                let n = self.size();
                ("text/html", self.html(n))
            }
        };

        let mut headers = HeaderMap::with_capacity(10, 512);
        headers.append("WARC-Type", record_type.as_str());
        headers.append("WARC-Date", &date);
        headers.append("WARC-Record-ID", &id);
        if record_type != RecordType::Warcinfo {
            headers.append("WARC-Target-URI", &uri);
        }
        if matches!(record_type, RecordType::Request | RecordType::Metadata) {
            if let Some(prev) = &self.last_id {
                headers.append("WARC-Concurrent-To", prev);
            }
        }
        if record_type == RecordType::Revisit {
            headers.append(
                "WARC-Profile",
                "http://netpreserve.org/warc/1.1/revisit/identical-payload-digest",
            );
        }
        if record_type == RecordType::Continuation {
            headers.append("WARC-Segment-Number", "2");
        }
        headers.append("Content-Type", content_type);
        headers.append("Content-Length", payload.len().to_string());

        self.last_id = Some(id);
        self.index += 1;
        Some(GeneratedRecord {
            version: WarcVersion::V1_1,
            headers,
            payload,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.spec.records - self.index;
        (left, Some(left))
    }
}
