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

//! Record serialization with one compressed member per record, and
//! transcoding between codecs.

use std::io::{self, Read, Write};

use crate::codec::{CodecKind, MemberSink};
use crate::error::{Error, Result};
use crate::http::find_header_end;
use crate::model::{DigestAlgorithm, HeaderMap, RecordGeometry, WarcVersion};
use crate::parser::{is_http_content_type, IterationOptions, WarcReader};

const COPY_CHUNK: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteOptions {
    pub codec: CodecKind,
    /// Compression level; `None` picks the codec default.
    pub level: Option<u32>,
    /// Fill in `WARC-Block-Digest`, and `WARC-Payload-Digest` for HTTP
    /// records, unless the headers already carry them.
    pub compute_digests: bool,
    pub digest_algorithm: DigestAlgorithm,
}

impl Default for WriteOptions {
    fn default() -> Self {
        WriteOptions {
            codec: CodecKind::None,
            level: None,
            compute_digests: false,
            digest_algorithm: DigestAlgorithm::Sha1,
        }
    }
}

impl WriteOptions {
    pub fn new(codec: CodecKind) -> Self {
        WriteOptions {
            codec,
            ..Default::default()
        }
    }
}

/// Writes WARC records to `W`, each as its own member.
pub struct WarcWriter<W: Write> {
    sink: MemberSink<W>,
    opts: WriteOptions,
    head: Vec<u8>,
    body: Vec<u8>,
}

impl<W: Write> WarcWriter<W> {
    pub fn new(inner: W, opts: WriteOptions) -> Result<Self> {
        Self::with_offset(inner, 0, opts)
    }

    /// Writer whose first byte lands at `offset` in the output file, for
    /// appending to an existing archive.
    pub fn with_offset(inner: W, offset: u64, opts: WriteOptions) -> Result<Self> {
        opts.codec.validate_level(opts.level)?;
        Ok(WarcWriter {
            sink: MemberSink::with_offset(inner, offset),
            opts,
            head: Vec::with_capacity(1024),
            body: Vec::new(),
        })
    }

    pub fn options(&self) -> &WriteOptions {
        &self.opts
    }

    /// Offset of the next record in the output.
    pub fn offset(&self) -> u64 {
        self.sink.offset()
    }

    pub fn get_ref(&self) -> &W {
        self.sink.get_ref()
    }

    pub fn flush(&mut self) -> Result<()> {
        Ok(self.sink.get_mut().flush()?)
    }

    pub fn into_inner(mut self) -> Result<W> {
        self.flush()?;
        Ok(self.sink.into_inner())
    }

    /// Writes one record. `Content-Length` is set to `declared_len`, and
    /// `payload` must yield exactly that many bytes.
    ///
    /// Without digest computation the payload is streamed, and a length
    /// mismatch leaves a partial member behind. With it, the payload is
    /// buffered first and a mismatch writes nothing.
    pub fn write_record(
        &mut self,
        version: WarcVersion,
        headers: &HeaderMap,
        mut payload: impl Read,
        declared_len: u64,
    ) -> Result<RecordGeometry> {
        let mut headers = headers.clone();
        headers.set("Content-Length", declared_len.to_string());

        if self.opts.compute_digests {
            self.body.clear();
            let got = (&mut payload)
                .take(declared_len.saturating_add(1))
                .read_to_end(&mut self.body)?;
            if got as u64 != declared_len {
                return Err(Error::LengthMismatch {
                    declared: declared_len,
                    actual: got as u64,
                });
            }
            add_digests(&mut headers, &self.body, self.opts.digest_algorithm);
            let body = std::mem::take(&mut self.body);
            let res = self.emit(version, &headers, &mut &body[..], declared_len);
            self.body = body;
            return res;
        }
        self.emit(version, &headers, &mut payload, declared_len)
    }

    /// [`write_record`](Self::write_record) for an in-memory payload.
    pub fn write_record_bytes(
        &mut self,
        version: WarcVersion,
        headers: &HeaderMap,
        payload: &[u8],
    ) -> Result<RecordGeometry> {
        self.write_record(version, headers, payload, payload.len() as u64)
    }

    fn emit(
        &mut self,
        version: WarcVersion,
        headers: &HeaderMap,
        payload: &mut dyn Read,
        declared_len: u64,
    ) -> Result<RecordGeometry> {
        self.head.clear();
        self.head.extend_from_slice(version.version_line());
        headers.write_to(&mut self.head);
        self.head.extend_from_slice(b"\r\n");
        let header_length = self.head.len() as u64;
        let total = header_length + declared_len + 4;

        let mut member = self
            .sink
            .begin_member(self.opts.codec, self.opts.level, Some(total))?;
        member.write_all(&self.head)?;
        // a header-only first block lets LZ4 readers skip the content unread
        member.end_block()?;
        let copied = copy_exact(payload, &mut member, declared_len)?;
        if copied != declared_len {
            return Err(Error::LengthMismatch {
                declared: declared_len,
                actual: copied,
            });
        }
        member.write_all(b"\r\n\r\n")?;
        let boundary = member.finish()?;
        Ok(RecordGeometry {
            file_offset: boundary.member_offset,
            compressed_length: Some(boundary.member_compressed_length),
            content_length: declared_len,
            header_length,
        })
    }
}

/// Copies `len` bytes and reports how many the source really had, reading
/// one byte past `len` to detect overlong sources.
fn copy_exact(src: &mut dyn Read, dst: &mut impl Write, len: u64) -> Result<u64> {
    let mut buf = vec![0u8; COPY_CHUNK.min(len as usize + 1)];
    let mut copied = 0u64;
    while copied < len {
        let want = buf.len().min((len - copied) as usize);
        let n = match src.read(&mut buf[..want]) {
            Ok(0) => return Ok(copied),
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        dst.write_all(&buf[..n])?;
        copied += n as u64;
    }
    loop {
        match src.read(&mut buf[..1]) {
            Ok(0) => return Ok(copied),
            Ok(_) => return Ok(copied + 1),
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
}

/// Adds block and payload digests the headers lack. The payload digest is
/// only added for HTTP records and covers the message body.
fn add_digests(headers: &mut HeaderMap, block: &[u8], algorithm: DigestAlgorithm) {
    let is_http = headers
        .get("Content-Type")
        .is_some_and(is_http_content_type);
    let want_block = !headers.contains("WARC-Block-Digest");
    let want_payload = is_http && !headers.contains("WARC-Payload-Digest");
    if want_block {
        let digest = crate::model::Digest::compute(algorithm, block);
        headers.append("WARC-Block-Digest", digest.canonical());
    }
    if want_payload {
        let body = find_header_end(block).map_or(block, |end| &block[end..]);
        let digest = crate::model::Digest::compute(algorithm, body);
        headers.append("WARC-Payload-Digest", digest.canonical());
    }
}

/// Outcome of [`recompress`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RecompressReport {
    pub records: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    /// `bytes_out / bytes_in`.
    pub overhead_ratio: f64,
    /// Malformed regions and unreadable records skipped.
    pub skipped: u64,
}

/// Rewrites every record of `input` (any codec, detected) into `output`
/// with the `target` options. Headers and payload bytes are carried over
/// unchanged apart from `Content-Length`, which is recomputed. Malformed
/// input is skipped and counted.
pub fn recompress<R: Read, W: Write>(
    input: R,
    output: W,
    target: WriteOptions,
) -> Result<RecompressReport> {
    recompress_with(input, output, target, false)
}

/// [`recompress`] that fails on the first malformed record when `strict`.
pub fn recompress_with<R: Read, W: Write>(
    input: R,
    output: W,
    target: WriteOptions,
    strict: bool,
) -> Result<RecompressReport> {
    let opts = IterationOptions::default().with_strict(strict);
    let mut reader = WarcReader::open(
        CountingReader {
            inner: input,
            count: 0,
        },
        opts,
    )?;
    let mut writer = WarcWriter::new(output, target)?;
    let mut buf = Vec::new();
    let mut report = RecompressReport::default();
    while let Some(record) = reader.next_record()? {
        // buffer first so a record cut short never leaves a partial member
        buf.clear();
        let read = reader
            .payload(&record)
            .and_then(|mut p| Ok(p.read_to_end(&mut buf)?));
        match read {
            Ok(_) => {}
            Err(e) if !strict && e.is_data_error() => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        writer.write_record_bytes(record.version, &record.headers, &buf)?;
        report.records += 1;
    }
    report.skipped += reader.stats().skipped_regions;
    report.bytes_out = writer.offset();
    writer.flush()?;
    report.bytes_in = reader.into_inner().count;
    report.overhead_ratio = if report.bytes_in == 0 {
        0.0
    } else {
        report.bytes_out as f64 / report.bytes_in as f64
    };
    Ok(report)
}

struct CountingReader<R> {
    inner: R,
    count: u64,
}

impl<R: Read> Read for CountingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.count += n as u64;
        Ok(n)
    }
}
