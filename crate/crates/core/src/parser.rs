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

//! Streaming WARC record iteration.
//!
//! [`WarcReader`] pulls records from a [`DecompressingStream`]. Only the
//! header block of each record is copied; payloads are exposed through a
//! bounded reader and records the filter rejects are skipped with the
//! cheapest mechanism the codec allows.

use std::io::{self, BufRead, Read, Seek};

use crate::codec::{seek_member, CodecKind, DecompressingStream, MemberBoundary};
use crate::error::{Error, Result};
use crate::http::{self, parse_http_message, HttpMessage, MAX_HEADER_SECTION};
use crate::model::{
    parse_content_length, Digest, DigestAlgorithm, DigestHasher, DigestReport, DigestStatus,
    HeaderMap, RecordGeometry, RecordType, RecordTypeMask, WarcVersion,
};

/// Largest WARC header block the reader accepts.
pub const MAX_HEADER_BLOCK: usize = 1 << 20;

/// With digest verification on, payloads up to this size stay readable
/// after hashing. Larger ones are hashed in a streaming pass and dropped.
pub const HOLD_LIMIT: u64 = 16 << 20;

/// How far the uncompressed resync scan looks for the next record.
const RESYNC_WINDOW: u64 = 1 << 20;

const TRAILER: &[u8; 4] = b"\r\n\r\n";

/// Controls what the reader yields and how much work it does per record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationOptions {
    pub filter: RecordTypeMask,
    /// Parse the HTTP header section of `application/http` records.
    pub parse_http: bool,
    /// Check `WARC-Block-Digest` and `WARC-Payload-Digest` while reading.
    pub verify_digests: bool,
    pub min_content_length: Option<u64>,
    pub max_content_length: Option<u64>,
    /// Fail on malformed input instead of skipping to the next record.
    pub strict: bool,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions {
            filter: RecordTypeMask::ALL,
            parse_http: false,
            verify_digests: false,
            min_content_length: None,
            max_content_length: None,
            strict: false,
        }
    }
}

impl IterationOptions {
    pub fn with_filter(mut self, filter: RecordTypeMask) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_parse_http(mut self, on: bool) -> Self {
        self.parse_http = on;
        self
    }

    pub fn with_verify_digests(mut self, on: bool) -> Self {
        self.verify_digests = on;
        self
    }

    pub fn with_content_length_range(mut self, min: Option<u64>, max: Option<u64>) -> Self {
        self.min_content_length = min;
        self.max_content_length = max;
        self
    }

    pub fn with_strict(mut self, on: bool) -> Self {
        self.strict = on;
        self
    }

    fn accepts(&self, record_type: RecordType, content_length: u64) -> bool {
        self.filter.matches(record_type)
            && self
                .min_content_length
                .is_none_or(|min| content_length >= min)
            && self
                .max_content_length
                .is_none_or(|max| content_length <= max)
    }
}

/// A parsed WARC header block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderBlock {
    pub version: WarcVersion,
    /// The version line named a version other than 1.0 or 1.1.
    pub legacy_version: bool,
    pub headers: HeaderMap,
    /// Bytes consumed, including the terminating blank line.
    pub header_length: usize,
    /// Unparseable header lines dropped in lenient mode.
    pub skipped_lines: u32,
}

/// Parses a version line and header lines up to the first blank line.
///
/// Offsets in errors are relative to `bytes`. Lenient mode accepts bare LF
/// line endings, legacy version numbers (read as 1.0 and flagged) and drops
/// header lines without a valid `Name:` prefix.
pub fn parse_header_block(bytes: &[u8], strict: bool) -> Result<HeaderBlock> {
    let (line, mut pos, crlf) =
        http::next_line(bytes, 0).ok_or(Error::MalformedVersionLine { offset: 0 })?;
    if strict && !crlf {
        return Err(Error::MalformedVersionLine { offset: 0 });
    }
    let (version, legacy_version) = match line {
        b"WARC/1.1" => (WarcVersion::V1_1, false),
        b"WARC/1.0" => (WarcVersion::V1_0, false),
        _ if !strict && is_version_like(line) => (WarcVersion::V1_0, true),
        _ => return Err(Error::MalformedVersionLine { offset: 0 }),
    };

    let mut headers = HeaderMap::with_capacity(16, 512);
    let mut skipped_lines = 0;
    loop {
        let Some((line, next, crlf)) = http::next_line(bytes, pos) else {
            return Err(Error::malformed(0, "header block is not terminated"));
        };
        if strict && !crlf {
            return Err(Error::MalformedHeaderLine { offset: pos as u64 });
        }
        if line.is_empty() {
            pos = next;
            break;
        }
        match http::parse_field_line(line) {
            http::FieldLine::Field(name, value) => headers.push_unchecked(name, value),
            http::FieldLine::Continuation(more) if !headers.is_empty() => {
                headers.fold_into_last(more);
            }
            _ if strict => return Err(Error::MalformedHeaderLine { offset: pos as u64 }),
            _ => skipped_lines += 1,
        }
        pos = next;
    }
    Ok(HeaderBlock {
        version,
        legacy_version,
        headers,
        header_length: pos,
        skipped_lines,
    })
}

fn is_version_like(line: &[u8]) -> bool {
    line.strip_prefix(b"WARC/")
        .is_some_and(|v| !v.is_empty() && v.iter().all(|b| b.is_ascii_digit() || *b == b'.'))
}

/// Whether a `Content-Type` value denotes an HTTP message:
/// `application/http`, optionally with `msgtype=request` or `response`.
pub fn is_http_content_type(value: &[u8]) -> bool {
    let mut parts = value.split(|b| *b == b';');
    let media = parts.next().unwrap_or_default().trim_ascii();
    if !media.eq_ignore_ascii_case(b"application/http") {
        return false;
    }
    parts.all(|param| {
        let param = param.trim_ascii();
        match param.iter().position(|b| *b == b'=') {
            Some(eq) if param[..eq].trim_ascii().eq_ignore_ascii_case(b"msgtype") => {
                let v = param[eq + 1..].trim_ascii();
                let v = v
                    .strip_prefix(b"\"")
                    .and_then(|v| v.strip_suffix(b"\""))
                    .unwrap_or(v);
                v.eq_ignore_ascii_case(b"request") || v.eq_ignore_ascii_case(b"response")
            }
            _ => true,
        }
    })
}

/// A record handed out by [`WarcReader`]. Owns its headers; the payload is
/// read through the reader while this is the current record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarcRecord {
    pub version: WarcVersion,
    pub legacy_version: bool,
    pub headers: HeaderMap,
    pub record_type: RecordType,
    pub geometry: RecordGeometry,
    /// Set when HTTP parsing is on and the payload is an HTTP message.
    pub http: Option<HttpMessage>,
    /// Set when digest verification is on.
    pub digests: Option<DigestReport>,
    ticket: u64,
}

impl WarcRecord {
    pub fn header(&self, name: impl AsRef<[u8]>) -> Option<&[u8]> {
        self.headers.get(name)
    }

    pub fn record_id(&self) -> Option<&[u8]> {
        self.headers.get("WARC-Record-ID")
    }

    pub fn content_length(&self) -> u64 {
        self.geometry.content_length
    }

    /// Whether the content block is an HTTP message, judged by Content-Type.
    pub fn is_http(&self) -> bool {
        self.headers
            .get("Content-Type")
            .is_some_and(is_http_content_type)
    }
}

/// Counters describing what the reader did besides yielding records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReaderStats {
    pub records: u64,
    /// Records rejected by the type filter or the length bounds.
    pub filtered: u64,
    /// Malformed regions skipped in lenient mode, including bad trailers.
    pub skipped_regions: u64,
    /// Input bytes dropped while resynchronizing.
    pub skipped_bytes: u64,
    pub legacy_versions: u64,
    /// WARC and HTTP header lines dropped in lenient mode.
    pub skipped_header_lines: u64,
    /// `application/http` payloads that failed to parse.
    pub http_errors: u64,
    /// Payload bytes pulled out of the stream, by callers or for parsing
    /// and hashing. Skipped payloads do not count.
    pub payload_bytes: u64,
}

struct Current {
    ticket: u64,
    geometry: RecordGeometry,
    at_member_start: bool,
    /// Payload bytes not yet pulled from the stream.
    unread: u64,
    /// The caller has read past the held prefix.
    read_direct: bool,
    /// The payload was hashed without being retained.
    dropped: bool,
}

enum Step {
    Record(WarcRecord),
    Filtered,
    End,
}

/// Pull-based record iterator.
///
/// The payload of the current record can be read until the next call to
/// [`next_record`](Self::next_record); after that, reads fail with
/// [`Error::StaleRecord`]. Whatever the caller leaves unread is skipped.
pub struct WarcReader<R> {
    stream: DecompressingStream<R>,
    opts: IterationOptions,
    scratch: Vec<u8>,
    held: Vec<u8>,
    held_pos: usize,
    current: Option<Current>,
    ticket: u64,
    stats: ReaderStats,
    last_geometry: Option<RecordGeometry>,
    recover: bool,
    done: bool,
}

impl<R: Read> WarcReader<R> {
    pub fn new(stream: DecompressingStream<R>, opts: IterationOptions) -> Self {
        WarcReader {
            stream,
            opts,
            scratch: Vec::with_capacity(4096),
            held: Vec::new(),
            held_pos: 0,
            current: None,
            ticket: 0,
            stats: ReaderStats::default(),
            last_geometry: None,
            recover: true,
            done: false,
        }
    }

    /// Reader over `source` with the codec detected from its first bytes.
    pub fn open(source: R, opts: IterationOptions) -> Result<Self> {
        Ok(Self::new(DecompressingStream::open(source)?, opts))
    }

    pub fn with_codec(source: R, kind: CodecKind, opts: IterationOptions) -> Self {
        Self::new(DecompressingStream::new(source, kind), opts)
    }

    pub fn codec(&self) -> CodecKind {
        self.stream.kind()
    }

    pub fn options(&self) -> &IterationOptions {
        &self.opts
    }

    pub fn stats(&self) -> &ReaderStats {
        &self.stats
    }

    /// Compressed members started so far; zero for uncompressed input.
    pub fn members(&self) -> u64 {
        self.stream.members_started()
    }

    /// Geometry of the most recently completed record, with
    /// `compressed_length` filled in once the member end has been seen.
    pub fn last_geometry(&self) -> Option<RecordGeometry> {
        self.last_geometry
    }

    pub fn into_inner(self) -> R {
        self.stream.into_inner()
    }

    /// Returns the next record accepted by the options, or `None` at the end
    /// of input.
    pub fn next_record(&mut self) -> Result<Option<WarcRecord>> {
        loop {
            if self.done {
                return Ok(None);
            }
            match self.step() {
                Ok(Step::Record(record)) => {
                    self.stats.records += 1;
                    self.recover = true;
                    return Ok(Some(record));
                }
                Ok(Step::Filtered) => {}
                Ok(Step::End) => self.done = true,
                Err(err) => {
                    self.current = None;
                    self.held.clear();
                    self.held_pos = 0;
                    if self.opts.strict || !self.recover || !err.is_data_error() {
                        self.done = true;
                        return Err(err);
                    }
                    if let Err(err) = self.resync(err) {
                        self.done = true;
                        return Err(err);
                    }
                }
            }
        }
    }

    /// Skips the rest of the current record, including its trailer, and
    /// returns its final geometry.
    pub fn finish_record(&mut self) -> Result<Option<RecordGeometry>> {
        if self.current.is_none() {
            return Ok(None);
        }
        self.complete_current()?;
        Ok(self.last_geometry)
    }

    /// Bounded reader over the payload of `record`, which must be the
    /// current record. Yields exactly the bytes not read so far.
    pub fn payload(&mut self, record: &WarcRecord) -> Result<Payload<'_, R>> {
        match &self.current {
            Some(cur) if cur.ticket == record.ticket => {
                if cur.dropped {
                    Err(Error::PayloadConsumed)
                } else {
                    Ok(Payload { reader: self })
                }
            }
            _ => Err(Error::StaleRecord),
        }
    }

    /// Reads up to `n` more payload bytes of `record`.
    pub fn read_payload(&mut self, record: &WarcRecord, n: u64) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        self.payload(record)?.take(n).read_to_end(&mut out)?;
        Ok(out)
    }

    /// Checks the record's digest headers against its content. Must be
    /// called before any payload bytes are read. Returns the stored report
    /// when the reader already verified the record.
    pub fn verify_digests(&mut self, record: &WarcRecord) -> Result<DigestReport> {
        if let Some(report) = record.digests {
            return Ok(report);
        }
        match &self.current {
            Some(cur) if cur.ticket == record.ticket => {
                if cur.read_direct || cur.dropped || self.held_pos > 0 {
                    return Err(Error::PayloadConsumed);
                }
            }
            _ => return Err(Error::StaleRecord),
        }
        self.verify_current(&record.headers, record.is_http())
    }

    fn step(&mut self) -> Result<Step> {
        self.complete_current()?;
        if !self.opts.strict {
            self.skip_blank_lines()?;
        }
        if self.stream.fill()?.is_empty() {
            return Ok(Step::End);
        }
        let framed = self.stream.kind() != CodecKind::None;
        let (file_offset, in_member) = self.stream.position();
        self.read_header_block(file_offset)?;
        let block = parse_header_block(&self.scratch, self.opts.strict)
            .map_err(|e| relocate(e, file_offset, framed))?;
        self.stats.legacy_versions += u64::from(block.legacy_version);
        self.stats.skipped_header_lines += u64::from(block.skipped_lines);

        let content_length = match block.headers.get("Content-Length") {
            Some(v) => parse_content_length(v)
                .map_err(|_| Error::malformed(file_offset, "invalid Content-Length"))?,
            None => return Err(Error::malformed(file_offset, "missing Content-Length")),
        };
        let header_length = block.header_length as u64;
        let geometry = RecordGeometry {
            file_offset,
            compressed_length: (!framed).then_some(header_length + content_length + 4),
            content_length,
            header_length,
        };
        self.ticket += 1;
        self.current = Some(Current {
            ticket: self.ticket,
            geometry,
            at_member_start: in_member == 0,
            unread: content_length,
            read_direct: false,
            dropped: false,
        });

        let record_type = RecordType::of(&block.headers);
        if !self.opts.accepts(record_type, content_length) {
            self.stats.filtered += 1;
            return Ok(Step::Filtered);
        }

        let mut record = WarcRecord {
            version: block.version,
            legacy_version: block.legacy_version,
            headers: block.headers,
            record_type,
            geometry,
            http: None,
            digests: None,
            ticket: self.ticket,
        };
        let is_http = record.is_http();
        if self.opts.parse_http && is_http {
            record.http = self.parse_http(content_length, file_offset)?;
        }
        if self.opts.verify_digests {
            record.digests = Some(self.verify_current(&record.headers, is_http)?);
        }
        Ok(Step::Record(record))
    }

    fn skip_blank_lines(&mut self) -> Result<()> {
        loop {
            let buf = self.stream.fill()?;
            let n = buf
                .iter()
                .take_while(|b| matches!(b, b'\r' | b'\n'))
                .count();
            if n == 0 {
                return Ok(());
            }
            self.stream.consume(n);
        }
    }

    /// Copies the header block, up to and including its blank line, into
    /// the scratch buffer.
    fn read_header_block(&mut self, file_offset: u64) -> Result<()> {
        self.scratch.clear();
        let mut line_start = 0;
        loop {
            let buf = self.stream.fill()?;
            if buf.is_empty() {
                return Err(Error::malformed(file_offset, "truncated header block"));
            }
            match memchr::memchr(b'\n', buf) {
                Some(i) => {
                    self.scratch.extend_from_slice(&buf[..=i]);
                    self.stream.consume(i + 1);
                    let line = &self.scratch[line_start..];
                    if line_start == 0 {
                        if !line.starts_with(b"WARC/") {
                            return Err(Error::MalformedVersionLine {
                                offset: file_offset,
                            });
                        }
                    } else if line == b"\r\n" || line == b"\n" {
                        return Ok(());
                    }
                    line_start = self.scratch.len();
                }
                None => {
                    let n = buf.len();
                    self.scratch.extend_from_slice(buf);
                    self.stream.consume(n);
                }
            }
            if self.scratch.len() > MAX_HEADER_BLOCK {
                return Err(Error::malformed(file_offset, "header block exceeds 1 MiB"));
            }
        }
    }

    fn parse_http(&mut self, content_length: u64, file_offset: u64) -> Result<Option<HttpMessage>> {
        let cap = content_length.min(MAX_HEADER_SECTION as u64) as usize;
        let mut want = cap.min(4096);
        loop {
            self.pull_into_held(want)?;
            if self.held.len() >= cap || http::find_header_end(&self.held).is_some() {
                break;
            }
            want = (want * 2).min(cap);
        }
        match parse_http_message(&self.held, content_length, self.opts.strict) {
            Ok(msg) => {
                self.stats.skipped_header_lines += u64::from(msg.skipped_lines);
                Ok(Some(msg))
            }
            Err(e) if self.opts.strict => Err(Error::malformed(
                file_offset,
                format!("invalid HTTP message: {e}"),
            )),
            Err(_) => {
                self.stats.http_errors += 1;
                Ok(None)
            }
        }
    }

    /// Moves payload bytes from the stream into the held buffer until it has
    /// `target` bytes or the payload is exhausted.
    fn pull_into_held(&mut self, target: usize) -> Result<()> {
        let Some(cur) = self.current.as_mut() else {
            return Ok(());
        };
        while self.held.len() < target && cur.unread > 0 {
            let buf = self.stream.fill()?;
            if buf.is_empty() {
                return Err(Error::malformed(
                    cur.geometry.file_offset,
                    "truncated content block",
                ));
            }
            let n = clamp(buf.len(), cur.unread).min(target - self.held.len());
            self.held.extend_from_slice(&buf[..n]);
            self.stream.consume(n);
            cur.unread -= n as u64;
            self.stats.payload_bytes += n as u64;
        }
        Ok(())
    }

    /// Hashes the whole payload of the current record. Small payloads are
    /// kept in the held buffer so they stay readable.
    fn verify_current(&mut self, headers: &HeaderMap, is_http: bool) -> Result<DigestReport> {
        let mut verifier = DigestVerifier::new(headers, is_http);
        if verifier.is_idle() {
            return Ok(verifier.finish());
        }
        verifier.update(&self.held);
        let Some(cur) = self.current.as_mut() else {
            return Ok(verifier.finish());
        };
        if self.held.len() as u64 + cur.unread <= HOLD_LIMIT {
            let start = self.held.len();
            let total = start + cur.unread as usize;
            self.pull_into_held(total)?;
            verifier.update(&self.held[start..]);
        } else {
            while cur.unread > 0 {
                let buf = self.stream.fill()?;
                if buf.is_empty() {
                    return Err(Error::malformed(
                        cur.geometry.file_offset,
                        "truncated content block",
                    ));
                }
                let n = clamp(buf.len(), cur.unread);
                verifier.update(&buf[..n]);
                self.stream.consume(n);
                cur.unread -= n as u64;
                self.stats.payload_bytes += n as u64;
            }
            cur.dropped = true;
            self.held.clear();
        }
        Ok(verifier.finish())
    }

    /// Skips whatever is left of the current record and its trailer.
    fn complete_current(&mut self) -> Result<()> {
        let Some(cur) = self.current.take() else {
            return Ok(());
        };
        self.held.clear();
        self.held_pos = 0;
        let offset = cur.geometry.file_offset;
        let framed = self.stream.kind() != CodecKind::None;

        let mut skipped: Option<MemberBoundary> = None;
        // hop over the rest of the member when it ends with this record, but
        // once the content is all decoded, decode the trailer too so the
        // member checksum still gets checked
        if framed
            && cur.unread > 0
            && self.stream.remaining_in_member() == Some(cur.unread + TRAILER.len() as u64)
        {
            skipped = self.stream.skip_member()?;
        } else {
            if self.stream.discard(cur.unread)? < cur.unread {
                return Err(Error::malformed(offset, "truncated content block"));
            }
            self.read_trailer(offset)?;
        }

        let mut geometry = cur.geometry;
        if framed && cur.at_member_start {
            let boundary = match skipped {
                Some(b) => Some(b),
                None if self.stream.at_member_end()? => Some(self.stream.member_boundary()),
                None => None,
            };
            if let Some(b) = boundary.filter(|b| b.member_offset == offset) {
                geometry.compressed_length = Some(b.member_compressed_length);
            }
        }
        self.last_geometry = Some(geometry);
        Ok(())
    }

    /// Consumes the record trailer. Strict mode insists on exactly CRLF
    /// CRLF; lenient mode eats any run of line breaks and counts a deviation.
    fn read_trailer(&mut self, offset: u64) -> Result<()> {
        if self.opts.strict {
            let mut trailer = [0u8; 4];
            let mut got = 0;
            while got < 4 {
                let buf = self.stream.fill()?;
                if buf.is_empty() {
                    break;
                }
                let n = buf.len().min(4 - got);
                trailer[got..got + n].copy_from_slice(&buf[..n]);
                self.stream.consume(n);
                got += n;
            }
            if got < 4 || &trailer != TRAILER {
                return Err(Error::malformed(offset, "record trailer is not CRLF CRLF"));
            }
            return Ok(());
        }
        let mut seen = 0usize;
        let mut exact = true;
        loop {
            let buf = self.stream.fill()?;
            let n = buf
                .iter()
                .take_while(|b| matches!(b, b'\r' | b'\n'))
                .count();
            for (i, b) in buf[..n].iter().enumerate() {
                exact &= TRAILER.get(seen + i) == Some(b);
            }
            seen += n;
            self.stream.consume(n);
            if n == 0 || seen > TRAILER.len() {
                break;
            }
        }
        if !exact || seen != TRAILER.len() {
            self.stats.skipped_regions += 1;
        }
        Ok(())
    }

    /// Lenient-mode recovery after `err`: moves to the next plausible
    /// record start.
    fn resync(&mut self, err: Error) -> Result<()> {
        self.stats.skipped_regions += 1;
        let start = self.stream.input_offset();
        if self.stream.kind() == CodecKind::None {
            if !self.stream.peek_raw(5)?.starts_with(b"WARC/") {
                let (skipped, found) = self.stream.scan_raw(b"\nWARC/", RESYNC_WINDOW)?;
                if found {
                    self.stream.consume(1);
                } else if skipped > RESYNC_WINDOW {
                    return Err(Error::malformed(
                        start,
                        "no record start found within 1 MiB",
                    ));
                } else {
                    self.done = true;
                }
            }
        } else {
            let corrupt = matches!(err, Error::CorruptMember { .. });
            let intact = !corrupt
                && match self.stream.at_member_end() {
                    Ok(true) => true,
                    Ok(false) => match self.stream.skip_member() {
                        Ok(_) => true,
                        Err(Error::CorruptMember { .. }) => false,
                        Err(e) => return Err(e),
                    },
                    Err(Error::CorruptMember { .. }) => false,
                    Err(e) => return Err(e),
                };
            if !intact && self.stream.resync()?.is_none() {
                self.done = true;
            }
        }
        self.stats.skipped_bytes += self.stream.input_offset() - start;
        Ok(())
    }
}

impl<R: Read> std::fmt::Debug for WarcReader<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WarcReader")
            .field("codec", &self.stream.kind())
            .field("options", &self.opts)
            .field("stats", &self.stats)
            .finish_non_exhaustive()
    }
}

impl<R: Read + Seek> WarcReader<R> {
    /// Reader starting at the record at `offset`, which must be a record
    /// boundary (a member offset for compressed files). The first record is
    /// never resynchronized: malformed input there is an error.
    pub fn open_at(
        source: R,
        offset: u64,
        kind: CodecKind,
        opts: IterationOptions,
    ) -> Result<Self> {
        let mut reader = Self::new(seek_member(source, offset, kind)?, opts);
        reader.recover = false;
        Ok(reader)
    }
}

/// Reads the single record at `offset`. Setup cost is one seek, whatever
/// the file size. The reader is returned so the payload can be read.
pub fn open_record_at<R: Read + Seek>(
    source: R,
    offset: u64,
    kind: CodecKind,
    opts: IterationOptions,
) -> Result<(WarcReader<R>, WarcRecord)> {
    let opts = IterationOptions {
        filter: RecordTypeMask::ALL,
        min_content_length: None,
        max_content_length: None,
        ..opts
    };
    let mut reader = WarcReader::open_at(source, offset, kind, opts)?;
    match reader.next_record()? {
        Some(record) => Ok((reader, record)),
        None => Err(Error::malformed(offset, "no record at offset")),
    }
}

impl<R: Read> Iterator for WarcReader<R> {
    type Item = Result<WarcRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_record().transpose()
    }
}

/// Payload of the current record; see [`WarcReader::payload`].
pub struct Payload<'a, R> {
    reader: &'a mut WarcReader<R>,
}

impl<R: Read> Payload<'_, R> {
    /// Payload bytes not yet returned.
    pub fn remaining(&self) -> u64 {
        let r = &*self.reader;
        let unread = r.current.as_ref().map_or(0, |c| c.unread);
        (r.held.len() - r.held_pos) as u64 + unread
    }
}

impl<R: Read> Read for Payload<'_, R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let avail = self.fill_buf()?;
        let n = avail.len().min(buf.len());
        buf[..n].copy_from_slice(&avail[..n]);
        self.consume(n);
        Ok(n)
    }
}

impl<R: Read> BufRead for Payload<'_, R> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        let r = &mut *self.reader;
        if r.held_pos < r.held.len() {
            return Ok(&r.held[r.held_pos..]);
        }
        let Some(cur) = r.current.as_ref() else {
            return Ok(&[]);
        };
        if cur.unread == 0 {
            return Ok(&[]);
        }
        let (unread, offset) = (cur.unread, cur.geometry.file_offset);
        let buf = r.stream.fill()?;
        if buf.is_empty() {
            return Err(Error::malformed(offset, "truncated content block").into());
        }
        Ok(&buf[..clamp(buf.len(), unread)])
    }

    fn consume(&mut self, amt: usize) {
        let r = &mut *self.reader;
        if r.held_pos < r.held.len() {
            r.held_pos += amt;
            return;
        }
        if let Some(cur) = r.current.as_mut() {
            r.stream.consume(amt);
            cur.unread -= amt as u64;
            cur.read_direct |= amt > 0;
            r.stats.payload_bytes += amt as u64;
        }
    }
}

fn clamp(len: usize, limit: u64) -> usize {
    len.min(usize::try_from(limit).unwrap_or(usize::MAX))
}

/// Rebases offsets of errors raised on a header block held in memory. For
/// compressed input the member offset is the only meaningful position.
fn relocate(err: Error, base: u64, framed: bool) -> Error {
    let at = |offset: u64| if framed { base } else { base + offset };
    match err {
        Error::MalformedVersionLine { offset } => {
            Error::MalformedVersionLine { offset: at(offset) }
        }
        Error::MalformedHeaderLine { offset } => Error::MalformedHeaderLine { offset: at(offset) },
        Error::MalformedRecord { offset, reason } => Error::MalformedRecord {
            offset: at(offset),
            reason,
        },
        other => other,
    }
}

struct Check {
    expected: Option<Digest>,
    hasher: Option<DigestHasher>,
    status: DigestStatus,
}

impl Check {
    /// Unknown algorithms cannot be checked and count as absent; a digest
    /// that does not decode fails.
    fn new(value: Option<&[u8]>) -> Self {
        let (expected, status) = match value.map(Digest::parse) {
            None | Some(Err(Error::UnknownAlgorithm(_))) => (None, DigestStatus::Absent),
            Some(Err(_)) => (None, DigestStatus::Fail),
            Some(Ok(d)) => (Some(d), DigestStatus::Absent),
        };
        let hasher = expected.as_ref().map(|d| d.algorithm().hasher());
        Check {
            expected,
            hasher,
            status,
        }
    }

    fn algorithm(&self) -> Option<DigestAlgorithm> {
        self.expected.as_ref().map(Digest::algorithm)
    }

    fn finish(self) -> DigestStatus {
        match (self.expected, self.hasher) {
            (Some(expected), Some(hasher)) => status_of(hasher.finalize() == expected),
            (Some(_), None) => DigestStatus::Fail,
            (None, _) => self.status,
        }
    }
}

fn status_of(pass: bool) -> DigestStatus {
    if pass {
        DigestStatus::Pass
    } else {
        DigestStatus::Fail
    }
}

enum Scope {
    /// The payload digest covers the whole block.
    Whole,
    /// Looking for the end of the HTTP header section; the payload hasher
    /// covers everything so far in case none is found.
    Scanning {
        seen: u64,
        state: u8,
    },
    Body,
}

/// Incremental check of a record's block and payload digests.
pub(crate) struct DigestVerifier {
    block: Check,
    payload: Check,
    /// The payload digest equals the block digest (non-HTTP record, same
    /// algorithm), so it is not computed twice.
    payload_is_block: bool,
    scope: Scope,
}

impl DigestVerifier {
    pub(crate) fn new(headers: &HeaderMap, is_http: bool) -> Self {
        let block = Check::new(headers.get("WARC-Block-Digest"));
        let mut payload = Check::new(headers.get("WARC-Payload-Digest"));
        let payload_is_block =
            !is_http && payload.algorithm().is_some() && payload.algorithm() == block.algorithm();
        if payload_is_block {
            payload.hasher = None;
        }
        let scope = if is_http {
            Scope::Scanning { seen: 0, state: 0 }
        } else {
            Scope::Whole
        };
        DigestVerifier {
            block,
            payload,
            payload_is_block,
            scope,
        }
    }

    /// True when there is nothing to hash.
    pub(crate) fn is_idle(&self) -> bool {
        self.block.hasher.is_none() && self.payload.hasher.is_none() && !self.payload_is_block
    }

    pub(crate) fn update(&mut self, data: &[u8]) {
        if let Some(h) = &mut self.block.hasher {
            h.update(data);
        }
        let Some(h) = &mut self.payload.hasher else {
            return;
        };
        let Scope::Scanning { seen, state } = &mut self.scope else {
            h.update(data);
            return;
        };
        // a blank line ends the header section: "\n\n" or "\n\r\n"
        for (i, &b) in data.iter().enumerate() {
            *state = match (*state, b) {
                (_, b'\n') if *state >= 1 => {
                    *h = h.algorithm().hasher();
                    h.update(&data[i + 1..]);
                    self.scope = Scope::Body;
                    return;
                }
                (_, b'\n') => 1,
                (1, b'\r') => 2,
                _ => 0,
            };
            *seen += 1;
            if *seen > MAX_HEADER_SECTION as u64 {
                h.update(data);
                self.scope = Scope::Whole;
                return;
            }
        }
        h.update(data);
    }

    pub(crate) fn finish(self) -> DigestReport {
        let payload_alg = self.payload.algorithm();
        let payload_expected = self.payload.expected.clone();
        let payload_status = if self.payload_is_block {
            None
        } else {
            Some(self.payload.finish())
        };
        let block_hash = match (&self.block.expected, self.block.hasher) {
            (Some(_), Some(h)) => Some(h.finalize()),
            _ => None,
        };
        let block = match (&self.block.expected, &block_hash) {
            (Some(e), Some(h)) if e == h => DigestStatus::Pass,
            (Some(_), _) => DigestStatus::Fail,
            (None, _) => self.block.status,
        };
        let payload = match payload_status {
            Some(status) => status,
            None => match (payload_expected, block_hash) {
                (Some(e), Some(h)) if Some(h.algorithm()) == payload_alg && e == h => {
                    DigestStatus::Pass
                }
                _ => DigestStatus::Fail,
            },
        };
        DigestReport { block, payload }
    }
}
