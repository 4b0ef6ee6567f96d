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

//! Record-level stream compression.
//!
//! A compressed WARC file is a sequence of independently compressed members
//! (gzip members or LZ4 frames), normally one per record. Decoding a member
//! needs nothing but its start offset, which is what makes offset-based random
//! access constant time. [`DecompressingStream`] decodes such a sequence
//! while tracking where each member starts and ends in the underlying file;
//! [`MemberSink`] writes one.

mod gzip;
mod input;
mod lz4;

use std::fmt;
use std::io::{self, BufRead, Read, Seek, SeekFrom, Write};
use std::str::FromStr;

use flate2::write::GzEncoder;

use crate::error::{Error, Result};
use input::Input;

/// Compression framing of a WARC file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CodecKind {
    /// Raw pass-through.
    #[default]
    None,
    Gzip,
    Lz4,
}

impl CodecKind {
    pub const ALL: [CodecKind; 3] = [CodecKind::None, CodecKind::Gzip, CodecKind::Lz4];

    pub fn as_str(self) -> &'static str {
        match self {
            CodecKind::None => "none",
            CodecKind::Gzip => "gzip",
            CodecKind::Lz4 => "lz4",
        }
    }

    /// Checks that `level` suits this codec: gzip takes 0 to 9, the others ignore it.
    pub fn validate_level(self, level: Option<u32>) -> Result<()> {
        match (self, level) {
            (CodecKind::Gzip, Some(level)) if level > 9 => {
                Err(Error::InvalidLevel { codec: self, level })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CodecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodecKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CodecKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown codec {s:?} (expected none, gzip or lz4)"))
    }
}

/// Identifies the framing from the first bytes of a file.
pub fn detect_codec(prefix: &[u8]) -> CodecKind {
    if prefix.starts_with(&[0x1f, 0x8b]) {
        CodecKind::Gzip
    } else if prefix.starts_with(&lz4::MAGIC) {
        CodecKind::Lz4
    } else {
        CodecKind::None
    }
}

/// Location of one compressed member in the underlying file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MemberBoundary {
    pub member_offset: u64,
    /// Compressed bytes consumed so far, or the total once the member ended.
    pub member_compressed_length: u64,
    /// Decompressed bytes produced so far.
    pub uncompressed_length: u64,
}

impl MemberBoundary {
    pub fn end_offset(&self) -> u64 {
        self.member_offset + self.member_compressed_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    /// At a member boundary, nothing decoded yet.
    Start,
    InMember,
    /// The current member and its trailer are fully decoded.
    MemberDone,
    Exhausted,
    Failed,
}

enum Decoder {
    Raw,
    Gzip(gzip::GzipDecoder),
    Lz4(lz4::Lz4Decoder),
}

const GZIP_OUT_SIZE: usize = 128 * 1024;

/// Decompressed view of a member sequence.
///
/// Implements [`Read`] and [`BufRead`]; the output is the concatenation of
/// all members in file order. Output buffers are allocated once and reused
/// for every member, and a single `fill_buf` never mixes bytes of two
/// members. Errors surfacing through the `io` traits wrap a crate [`Error`]
/// that converts back losslessly.
///
/// After a [`Error::CorruptMember`] the stream refuses further reads until
/// [`resync`](Self::resync) moves it to the next plausible member.
pub struct DecompressingStream<R> {
    input: Input<R>,
    kind: CodecKind,
    decoder: Decoder,
    out: Vec<u8>,
    out_pos: usize,
    out_end: usize,
    state: State,
    boundary: MemberBoundary,
    members: u64,
    failure: Option<(u64, String)>,
}

impl<R: Read> DecompressingStream<R> {
    /// Stream over `source`, which must sit at offset 0 of its file.
    pub fn new(source: R, kind: CodecKind) -> Self {
        Self::with_offset(source, kind, 0)
    }

    /// Stream over `source`, which sits at `offset` in its file. The offset
    /// only affects reported positions.
    pub fn with_offset(source: R, kind: CodecKind, offset: u64) -> Self {
        let decoder = match kind {
            CodecKind::None => Decoder::Raw,
            CodecKind::Gzip => Decoder::Gzip(gzip::GzipDecoder::new()),
            CodecKind::Lz4 => Decoder::Lz4(lz4::Lz4Decoder::new()),
        };
        DecompressingStream {
            input: Input::new(source, offset),
            kind,
            decoder,
            out: Vec::new(),
            out_pos: 0,
            out_end: 0,
            state: State::Start,
            boundary: MemberBoundary {
                member_offset: offset,
                ..Default::default()
            },
            members: 0,
            failure: None,
        }
    }

    /// Stream with the codec detected from the first four bytes. Nothing is
    /// consumed from the logical stream by the detection.
    pub fn open(source: R) -> Result<Self> {
        Self::open_at(source, 0)
    }

    pub fn open_at(source: R, offset: u64) -> Result<Self> {
        let mut stream = Self::with_offset(source, CodecKind::None, offset);
        stream.input.fill_at_least(4)?;
        let kind = detect_codec(stream.input.available());
        stream.kind = kind;
        stream.decoder = match kind {
            CodecKind::None => Decoder::Raw,
            CodecKind::Gzip => Decoder::Gzip(gzip::GzipDecoder::new()),
            CodecKind::Lz4 => Decoder::Lz4(lz4::Lz4Decoder::new()),
        };
        Ok(stream)
    }

    pub fn kind(&self) -> CodecKind {
        self.kind
    }

    /// The member being decoded, or the one just finished. Before the first
    /// member starts this is an empty boundary at the current offset. For
    /// uncompressed streams it always reports the position of the next byte.
    pub fn member_boundary(&self) -> MemberBoundary {
        match self.decoder {
            Decoder::Raw => MemberBoundary {
                member_offset: self.input.offset(),
                ..Default::default()
            },
            _ => match self.state {
                State::Start if self.members == 0 => MemberBoundary {
                    member_offset: self.input.offset(),
                    ..Default::default()
                },
                _ => self.boundary,
            },
        }
    }

    /// Number of members started so far.
    pub fn members_started(&self) -> u64 {
        self.members
    }

    /// Offset in the underlying file of the next unconsumed compressed byte.
    pub fn input_offset(&self) -> u64 {
        self.input.offset()
    }

    pub fn is_exhausted(&self) -> bool {
        self.state == State::Exhausted
    }

    /// Where the next byte returned by a read comes from: the offset of its
    /// member and its index inside the member's decompressed output. At a
    /// member boundary (and always for uncompressed streams) this is
    /// `(file offset, 0)`.
    pub fn position(&self) -> (u64, u64) {
        let unread = (self.out_end - self.out_pos) as u64;
        match (&self.decoder, self.state) {
            (Decoder::Raw, _) => (self.input.offset(), 0),
            (_, State::InMember) => (
                self.boundary.member_offset,
                self.boundary.uncompressed_length - unread,
            ),
            (_, State::MemberDone) if unread > 0 => (
                self.boundary.member_offset,
                self.boundary.uncompressed_length - unread,
            ),
            _ => (self.input.offset(), 0),
        }
    }

    /// True when every byte of the current member has been read and its
    /// trailer verified, i.e. the next read starts a new member. Decodes
    /// ahead as needed to find out. Always true for uncompressed streams.
    pub fn at_member_end(&mut self) -> Result<bool> {
        if matches!(self.decoder, Decoder::Raw) {
            return Ok(true);
        }
        loop {
            if self.out_pos < self.out_end {
                return Ok(false);
            }
            match self.state {
                State::InMember => self.decode_step()?,
                State::Failed => return Err(self.failure_error()),
                _ => return Ok(true),
            }
        }
    }

    /// Decompressed bytes left in the current member when the framing
    /// declares the content size (LZ4 frames written by this crate do).
    pub fn remaining_in_member(&self) -> Option<u64> {
        let unread = (self.out_end - self.out_pos) as u64;
        match (&self.decoder, self.state) {
            (Decoder::Lz4(d), State::InMember) => d
                .content_size()
                .map(|size| size - self.boundary.uncompressed_length + unread),
            (Decoder::Lz4(_) | Decoder::Gzip(_), State::MemberDone) => Some(unread),
            _ => None,
        }
    }

    /// Advances to the start of the next member with the least work the
    /// framing allows: LZ4 hops over blocks by their length prefixes, gzip
    /// inflates into a scratch buffer and discards the output. Unread output
    /// of the current member is dropped. When the current member has been
    /// read completely, the member after it is skipped.
    ///
    /// Returns the skipped member's boundary, or `None` at end of stream.
    pub fn skip_member(&mut self) -> Result<Option<MemberBoundary>> {
        if matches!(self.decoder, Decoder::Raw) {
            return Err(Error::UnsupportedForCodec(CodecKind::None));
        }
        let had_unread = self.out_pos < self.out_end;
        self.out_pos = self.out_end;
        match self.state {
            State::Failed => return Err(self.failure_error()),
            State::Exhausted => return Ok(None),
            State::MemberDone if had_unread => return Ok(Some(self.boundary)),
            State::Start | State::MemberDone => {
                if !self.start_member()? {
                    return Ok(None);
                }
            }
            State::InMember => {}
        }
        self.skip_rest()?;
        Ok(Some(self.boundary))
    }

    fn skip_rest(&mut self) -> Result<()> {
        let offset = self.boundary.member_offset;
        let res = match &mut self.decoder {
            Decoder::Lz4(d) => {
                let r = d.skip_rest(&mut self.input, offset);
                if let (Ok(()), Some(size)) = (&r, d.content_size()) {
                    self.boundary.uncompressed_length = size;
                }
                r
            }
            Decoder::Gzip(d) => {
                self.out.resize(GZIP_OUT_SIZE, 0);
                loop {
                    match d.decode(&mut self.input, &mut self.out, offset) {
                        Ok((n, done)) => {
                            self.boundary.uncompressed_length += n as u64;
                            if done {
                                break Ok(());
                            }
                        }
                        Err(e) => break Err(e),
                    }
                }
            }
            Decoder::Raw => unreachable!(),
        };
        self.out_pos = 0;
        self.out_end = 0;
        match res {
            Ok(()) => {
                self.member_done();
                Ok(())
            }
            Err(e) => Err(self.fail(e)),
        }
    }

    /// Reads the rest of the current member (or the next one, at a boundary)
    /// into `buf`, returning its boundary; `None` at end of stream.
    pub fn read_member(&mut self, buf: &mut Vec<u8>) -> Result<Option<MemberBoundary>> {
        if matches!(self.decoder, Decoder::Raw) {
            return Err(Error::UnsupportedForCodec(CodecKind::None));
        }
        let had_unread = self.out_pos < self.out_end;
        match self.state {
            State::Failed => return Err(self.failure_error()),
            State::Exhausted => return Ok(None),
            State::Start => {
                if !self.start_member()? {
                    return Ok(None);
                }
            }
            State::MemberDone if !had_unread => {
                if !self.start_member()? {
                    return Ok(None);
                }
            }
            _ => {}
        }
        loop {
            buf.extend_from_slice(&self.out[self.out_pos..self.out_end]);
            self.out_pos = self.out_end;
            match self.state {
                State::MemberDone => return Ok(Some(self.boundary)),
                _ => self.decode_step()?,
            }
        }
    }

    /// Recovers from a corrupt member by scanning forward for the next
    /// member magic. Returns the number of compressed bytes skipped, or
    /// `None` when the end of input was reached first. Uncompressed streams
    /// have no member structure; the parser resynchronizes those itself.
    pub fn resync(&mut self) -> Result<Option<u64>> {
        let magic: &[u8] = match self.decoder {
            Decoder::Raw => return Err(Error::UnsupportedForCodec(CodecKind::None)),
            Decoder::Gzip(_) => &gzip::MAGIC,
            Decoder::Lz4(_) => &lz4::MAGIC,
        };
        let start = self.input.offset();
        if let Some((failed_at, _)) = self.failure.take() {
            if self.input.offset() <= failed_at {
                self.input.skip(failed_at + 1 - self.input.offset())?;
            }
        } else if self.state == State::InMember {
            // drop the member being decoded
            self.input.skip(1)?;
        }
        self.out_pos = 0;
        self.out_end = 0;
        let (_, found) = self.input.scan_to(magic)?;
        let skipped = self.input.offset() - start;
        if found {
            self.state = State::Start;
            Ok(Some(skipped))
        } else {
            self.state = State::Exhausted;
            Ok(None)
        }
    }

    /// Uncompressed streams only: skips to the next occurrence of `pattern`,
    /// giving up after `limit` bytes. Returns the bytes skipped and whether
    /// the pattern was found (it is left unconsumed).
    pub(crate) fn scan_raw(&mut self, pattern: &[u8], limit: u64) -> Result<(u64, bool)> {
        debug_assert!(matches!(self.decoder, Decoder::Raw));
        Ok(self.input.scan_within(pattern, limit)?)
    }

    /// Uncompressed streams only: buffers at least `n` bytes if the input
    /// has them and returns the buffered bytes.
    pub(crate) fn peek_raw(&mut self, n: usize) -> Result<&[u8]> {
        debug_assert!(matches!(self.decoder, Decoder::Raw));
        self.input.fill_at_least(n)?;
        Ok(self.input.available())
    }

    pub fn into_inner(self) -> R {
        self.input.into_inner()
    }

    fn failure_error(&self) -> Error {
        let (offset, reason) = self.failure.clone().unwrap_or_default();
        Error::CorruptMember { offset, reason }
    }

    fn fail(&mut self, err: Error) -> Error {
        if let Error::CorruptMember { offset, reason } = &err {
            self.state = State::Failed;
            self.failure = Some((*offset, reason.clone()));
        }
        err
    }

    fn member_done(&mut self) {
        self.state = State::MemberDone;
        self.boundary.member_compressed_length = self.input.offset() - self.boundary.member_offset;
    }

    /// Begins the next member. Returns false at a clean end of input.
    fn start_member(&mut self) -> Result<bool> {
        let res = match &mut self.decoder {
            Decoder::Raw => unreachable!(),
            Decoder::Gzip(d) => {
                if self.input.fill()?.is_empty() {
                    Ok(None)
                } else {
                    let offset = self.input.offset();
                    d.begin(&mut self.input, offset).map(|_| Some(offset))
                }
            }
            Decoder::Lz4(d) => match lz4::Lz4Decoder::skip_skippable(&mut self.input) {
                Ok(false) => Ok(None),
                Ok(true) => {
                    let offset = self.input.offset();
                    d.begin(&mut self.input, offset).map(|_| Some(offset))
                }
                Err(e) => Err(e),
            },
        };
        match res {
            Ok(None) => {
                self.state = State::Exhausted;
                Ok(false)
            }
            Ok(Some(member_offset)) => {
                self.boundary = MemberBoundary {
                    member_offset,
                    member_compressed_length: self.input.offset() - member_offset,
                    uncompressed_length: 0,
                };
                self.members += 1;
                self.state = State::InMember;
                if let Decoder::Lz4(d) = &self.decoder {
                    if self.out.len() < d.block_max() {
                        self.out.resize(d.block_max(), 0);
                    }
                }
                Ok(true)
            }
            Err(e) => Err(self.fail(e)),
        }
    }

    fn decode_step(&mut self) -> Result<()> {
        let offset = self.boundary.member_offset;
        let res = match &mut self.decoder {
            Decoder::Raw => unreachable!(),
            Decoder::Gzip(d) => {
                if self.out.len() < GZIP_OUT_SIZE {
                    self.out.resize(GZIP_OUT_SIZE, 0);
                }
                d.decode(&mut self.input, &mut self.out, offset)
            }
            Decoder::Lz4(d) => d.decode(&mut self.input, &mut self.out, offset),
        };
        match res {
            Ok((n, done)) => {
                self.out_pos = 0;
                self.out_end = n;
                self.boundary.uncompressed_length += n as u64;
                self.boundary.member_compressed_length = self.input.offset() - offset;
                if done {
                    self.member_done();
                }
                Ok(())
            }
            Err(e) => {
                self.out_pos = 0;
                self.out_end = 0;
                Err(self.fail(e))
            }
        }
    }

    fn fill_framed(&mut self) -> Result<()> {
        while self.out_pos == self.out_end {
            match self.state {
                State::Exhausted => return Ok(()),
                State::Failed => return Err(self.failure_error()),
                State::Start | State::MemberDone => {
                    if !self.start_member()? {
                        return Ok(());
                    }
                }
                State::InMember => self.decode_step()?,
            }
        }
        Ok(())
    }

    /// Like [`BufRead::fill_buf`] but with the crate error type.
    pub fn fill(&mut self) -> Result<&[u8]> {
        if matches!(self.decoder, Decoder::Raw) {
            let avail = self.input.fill()?;
            if avail.is_empty() {
                self.state = State::Exhausted;
            }
            return Ok(self.input.available());
        }
        self.fill_framed()?;
        Ok(&self.out[self.out_pos..self.out_end])
    }

    /// Discards up to `n` decompressed bytes; returns how many were dropped.
    pub fn discard(&mut self, mut n: u64) -> Result<u64> {
        let mut done = 0;
        while n > 0 {
            let avail = self.fill()?.len();
            if avail == 0 {
                break;
            }
            let step = avail.min(n.min(usize::MAX as u64) as usize);
            self.consume(step);
            n -= step as u64;
            done += step as u64;
        }
        Ok(done)
    }
}

impl<R: Read> Read for DecompressingStream<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let avail = self.fill_buf()?;
        let n = avail.len().min(buf.len());
        buf[..n].copy_from_slice(&avail[..n]);
        self.consume(n);
        Ok(n)
    }
}

impl<R: Read> BufRead for DecompressingStream<R> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        self.fill().map_err(io::Error::from)
    }

    fn consume(&mut self, amt: usize) {
        if matches!(self.decoder, Decoder::Raw) {
            self.input.consume(amt);
        } else {
            debug_assert!(amt <= self.out_end - self.out_pos);
            self.out_pos += amt;
        }
    }
}

/// Opens a stream that starts decoding at the member beginning at `offset`.
///
/// Setup seeks once and checks the member magic; nothing before `offset` is
/// read. For uncompressed files no check is possible and the stream simply
/// starts at `offset`.
pub fn seek_member<R: Read + Seek>(
    mut source: R,
    offset: u64,
    kind: CodecKind,
) -> Result<DecompressingStream<R>> {
    source.seek(SeekFrom::Start(offset))?;
    let mut stream = DecompressingStream::with_offset(source, kind, offset);
    let magic: &[u8] = match kind {
        CodecKind::None => return Ok(stream),
        CodecKind::Gzip => &gzip::MAGIC,
        CodecKind::Lz4 => &lz4::MAGIC,
    };
    stream.input.fill_at_least(magic.len())?;
    if !stream.input.available().starts_with(magic) {
        return Err(Error::corrupt(
            offset,
            format!("no {kind} member starts here"),
        ));
    }
    Ok(stream)
}

struct Counted<'a, W> {
    inner: &'a mut W,
    count: &'a mut u64,
}

impl<W: Write> Write for Counted<'_, W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        *self.count += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Writer that emits self-contained compressed members and tracks their
/// offsets in the output.
pub struct MemberSink<W> {
    inner: W,
    offset: u64,
    lz4_block: Vec<u8>,
    lz4_out: Vec<u8>,
}

impl<W: Write> MemberSink<W> {
    pub fn new(inner: W) -> Self {
        Self::with_offset(inner, 0)
    }

    /// Sink whose first byte lands at `offset` in the output file.
    pub fn with_offset(inner: W, offset: u64) -> Self {
        MemberSink {
            inner,
            offset,
            lz4_block: Vec::new(),
            lz4_out: Vec::new(),
        }
    }

    /// Offset at which the next member will start.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn get_ref(&self) -> &W {
        &self.inner
    }

    pub fn get_mut(&mut self) -> &mut W {
        &mut self.inner
    }

    pub fn into_inner(self) -> W {
        self.inner
    }

    /// Starts a member; write its content through the returned writer and
    /// call [`MemberWriter::finish`]. `level` is the gzip level (0 to 9,
    /// codec default when `None`) and is ignored by the other codecs.
    /// `content_size`, when given, is recorded in LZ4 frame headers so readers
    /// can skip the frame without decoding it; writing a different amount is
    /// an error.
    pub fn begin_member(
        &mut self,
        kind: CodecKind,
        level: Option<u32>,
        content_size: Option<u64>,
    ) -> Result<MemberWriter<'_, W>> {
        kind.validate_level(level)?;
        let start = self.offset;
        let counted = Counted {
            inner: &mut self.inner,
            count: &mut self.offset,
        };
        let encoder = match kind {
            CodecKind::None => Encoder::Raw(counted),
            CodecKind::Gzip => {
                let level =
                    level.map_or_else(flate2::Compression::default, flate2::Compression::new);
                Encoder::Gzip(GzEncoder::new(counted, level))
            }
            CodecKind::Lz4 => Encoder::Lz4(lz4::Lz4FrameWriter::new(
                counted,
                &mut self.lz4_block,
                &mut self.lz4_out,
                content_size,
            )?),
        };
        Ok(MemberWriter {
            start,
            content_size,
            written: 0,
            encoder,
        })
    }

    /// Writes `payload` as one member.
    pub fn write_member(
        &mut self,
        payload: &[u8],
        kind: CodecKind,
        level: Option<u32>,
    ) -> Result<MemberBoundary> {
        let mut member = self.begin_member(kind, level, Some(payload.len() as u64))?;
        member.write_all(payload)?;
        member.finish()
    }
}

impl<W: Write> Write for MemberSink<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.offset += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

enum Encoder<'a, W: Write> {
    Raw(Counted<'a, W>),
    Gzip(GzEncoder<Counted<'a, W>>),
    Lz4(lz4::Lz4FrameWriter<'a, Counted<'a, W>>),
}

/// One member being written; see [`MemberSink::begin_member`].
pub struct MemberWriter<'a, W: Write> {
    start: u64,
    content_size: Option<u64>,
    written: u64,
    encoder: Encoder<'a, W>,
}

impl<W: Write> MemberWriter<'_, W> {
    /// Ends the current LZ4 block so the bytes written so far decode without
    /// touching the rest of the frame. A no-op for the other codecs.
    pub fn end_block(&mut self) -> io::Result<()> {
        match &mut self.encoder {
            Encoder::Lz4(enc) => enc.end_block(),
            Encoder::Raw(_) | Encoder::Gzip(_) => Ok(()),
        }
    }

    /// Completes the member and returns where it landed.
    pub fn finish(self) -> Result<MemberBoundary> {
        if let Some(declared) = self.content_size {
            if declared != self.written {
                return Err(Error::LengthMismatch {
                    declared,
                    actual: self.written,
                });
            }
        }
        let end = match self.encoder {
            Encoder::Raw(c) => *c.count,
            Encoder::Gzip(enc) => *enc.finish()?.count,
            Encoder::Lz4(enc) => *enc.finish()?.count,
        };
        Ok(MemberBoundary {
            member_offset: self.start,
            member_compressed_length: end - self.start,
            uncompressed_length: self.written,
        })
    }
}

impl<W: Write> Write for MemberWriter<'_, W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = match &mut self.encoder {
            Encoder::Raw(c) => c.write(buf)?,
            Encoder::Gzip(enc) => enc.write(buf)?,
            Encoder::Lz4(enc) => enc.write(buf)?,
        };
        self.written += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        match &mut self.encoder {
            Encoder::Raw(c) => c.flush(),
            Encoder::Gzip(enc) => enc.flush(),
            Encoder::Lz4(enc) => enc.flush(),
        }
    }
}

/// Writes `payload` to `sink` as one member; see [`MemberSink::write_member`].
pub fn write_member<W: Write>(
    sink: &mut MemberSink<W>,
    payload: &[u8],
    kind: CodecKind,
    level: Option<u32>,
) -> Result<MemberBoundary> {
    sink.write_member(payload, kind, level)
}
