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

//! LZ4 frame format: reading with block hopping, and writing one frame per
//! member with independent blocks and a content checksum.

use std::io::{self, Read, Write};

use xxhash_rust::xxh32::{xxh32, Xxh32};

use super::input::{Input, INPUT_BUFFER_SIZE};
use crate::error::{Error, Result};

pub(crate) const MAGIC: [u8; 4] = [0x04, 0x22, 0x4d, 0x18];
const SKIPPABLE_MASK: u32 = 0xffff_fff0;
const SKIPPABLE_MAGIC: u32 = 0x184d_2a50;

const FLG_VERSION: u8 = 0x40;
const FLG_BLOCK_INDEPENDENT: u8 = 0x20;
const FLG_BLOCK_CHECKSUM: u8 = 0x10;
const FLG_CONTENT_SIZE: u8 = 0x08;
const FLG_CONTENT_CHECKSUM: u8 = 0x04;
const FLG_DICT_ID: u8 = 0x01;

const UNCOMPRESSED_BIT: u32 = 0x8000_0000;
const WINDOW: usize = 64 * 1024;

/// Block size used on the write path (BD code 4).
pub(crate) const WRITE_BLOCK_SIZE: usize = 64 * 1024;
const WRITE_BD: u8 = 4 << 4;

fn block_max_size(bd: u8) -> Option<usize> {
    match (bd >> 4) & 0x7 {
        4 => Some(64 * 1024),
        5 => Some(256 * 1024),
        6 => Some(1024 * 1024),
        7 => Some(4 * 1024 * 1024),
        _ => None,
    }
}

#[derive(Default)]
pub(crate) struct Lz4Decoder {
    flags: u8,
    block_max: usize,
    content_size: Option<u64>,
    produced: u64,
    hasher: Xxh32,
    /// Scratch for compressed blocks that are not contiguous in the input buffer.
    block_in: Vec<u8>,
    /// Trailing window of output, for frames with linked blocks.
    dict: Vec<u8>,
}

impl Lz4Decoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn block_max(&self) -> usize {
        self.block_max
    }

    pub fn content_size(&self) -> Option<u64> {
        self.content_size
    }

    /// Skips any skippable frames at the current position. Returns false at a
    /// clean end of input.
    pub fn skip_skippable<R: Read>(input: &mut Input<R>) -> Result<bool> {
        loop {
            let offset = input.offset();
            if !input.fill_at_least(4)? {
                if input.available().is_empty() {
                    return Ok(false);
                }
                // Trailing bytes too short for a magic number; let begin() report them.
                return Ok(true);
            }
            let magic = u32::from_le_bytes(input.available()[..4].try_into().unwrap());
            if magic & SKIPPABLE_MASK != SKIPPABLE_MAGIC {
                return Ok(true);
            }
            if !input.fill_at_least(8)? {
                return Err(Error::corrupt(offset, "truncated skippable frame"));
            }
            let len = u32::from_le_bytes(input.available()[4..8].try_into().unwrap());
            input.consume(8);
            if input.skip(u64::from(len))? != u64::from(len) {
                return Err(Error::corrupt(offset, "truncated skippable frame"));
            }
        }
    }

    pub fn begin<R: Read>(&mut self, input: &mut Input<R>, member_offset: u64) -> Result<()> {
        let truncated = || Error::corrupt(member_offset, "truncated LZ4 frame header");
        if !input.fill_at_least(7)? {
            return Err(truncated());
        }
        if input.available()[..4] != MAGIC {
            return Err(Error::corrupt(member_offset, "missing LZ4 frame magic"));
        }
        let flg = input.available()[4];
        let bd = input.available()[5];
        if flg & 0xc0 != FLG_VERSION || flg & 0x02 != 0 || bd & 0x8f != 0 {
            return Err(Error::corrupt(
                member_offset,
                "unsupported LZ4 frame descriptor",
            ));
        }
        let block_max = block_max_size(bd)
            .ok_or_else(|| Error::corrupt(member_offset, "invalid LZ4 block size"))?;
        let desc_len = 2
            + if flg & FLG_CONTENT_SIZE != 0 { 8 } else { 0 }
            + if flg & FLG_DICT_ID != 0 { 4 } else { 0 };
        if !input.fill_at_least(4 + desc_len + 1)? {
            return Err(truncated());
        }
        let head = input.available();
        let desc = &head[4..4 + desc_len];
        let hc = head[4 + desc_len];
        if ((xxh32(desc, 0) >> 8) & 0xff) as u8 != hc {
            return Err(Error::corrupt(
                member_offset,
                "LZ4 header checksum mismatch",
            ));
        }
        if flg & FLG_DICT_ID != 0 {
            return Err(Error::corrupt(
                member_offset,
                "LZ4 dictionaries are not supported",
            ));
        }
        self.content_size = (flg & FLG_CONTENT_SIZE != 0)
            .then(|| u64::from_le_bytes(desc[2..10].try_into().unwrap()));
        input.consume(4 + desc_len + 1);

        self.flags = flg;
        self.block_max = block_max;
        self.produced = 0;
        self.hasher = Xxh32::new(0);
        self.dict.clear();
        Ok(())
    }

    fn read_block_header<R: Read>(&self, input: &mut Input<R>, member_offset: u64) -> Result<u32> {
        let mut word = [0u8; 4];
        if !input.read_exact_into(&mut word)? {
            return Err(Error::corrupt(member_offset, "truncated LZ4 block"));
        }
        let word = u32::from_le_bytes(word);
        if (word & !UNCOMPRESSED_BIT) as usize > self.block_max {
            return Err(Error::corrupt(
                member_offset,
                "LZ4 block larger than frame maximum",
            ));
        }
        Ok(word)
    }

    /// Decodes the next block into `out` (at least `block_max` long).
    /// Returns the bytes produced and whether the frame is complete.
    pub fn decode<R: Read>(
        &mut self,
        input: &mut Input<R>,
        out: &mut [u8],
        member_offset: u64,
    ) -> Result<(usize, bool)> {
        let word = self.read_block_header(input, member_offset)?;
        if word == 0 {
            self.finish(input, member_offset)?;
            return Ok((0, true));
        }
        let len = (word & !UNCOMPRESSED_BIT) as usize;
        let block_checksum = self.flags & FLG_BLOCK_CHECKSUM != 0;

        let contiguous = len <= INPUT_BUFFER_SIZE && input.fill_at_least(len)?;
        let data: &[u8] = if contiguous {
            &input.available()[..len]
        } else {
            self.block_in.resize(len, 0);
            if !input.read_exact_into(&mut self.block_in)? {
                return Err(Error::corrupt(member_offset, "truncated LZ4 block"));
            }
            &self.block_in
        };
        let data_hash = block_checksum.then(|| xxh32(data, 0));

        let produced = if word & UNCOMPRESSED_BIT != 0 {
            out[..len].copy_from_slice(data);
            len
        } else if self.flags & FLG_BLOCK_INDEPENDENT != 0 {
            lz4_flex::block::decompress_into(data, &mut out[..self.block_max])
                .map_err(|e| Error::corrupt(member_offset, format!("LZ4 block: {e}")))?
        } else {
            lz4_flex::block::decompress_into_with_dict(data, &mut out[..self.block_max], &self.dict)
                .map_err(|e| Error::corrupt(member_offset, format!("LZ4 block: {e}")))?
        };
        if contiguous {
            input.consume(len);
        }
        if let Some(expected) = data_hash {
            let mut stored = [0u8; 4];
            if !input.read_exact_into(&mut stored)? {
                return Err(Error::corrupt(
                    member_offset,
                    "truncated LZ4 block checksum",
                ));
            }
            if u32::from_le_bytes(stored) != expected {
                return Err(Error::corrupt(member_offset, "LZ4 block checksum mismatch"));
            }
        }

        let block = &out[..produced];
        if self.flags & FLG_CONTENT_CHECKSUM != 0 {
            self.hasher.update(block);
        }
        if self.flags & FLG_BLOCK_INDEPENDENT == 0 {
            if block.len() >= WINDOW {
                self.dict.clear();
                self.dict.extend_from_slice(&block[block.len() - WINDOW..]);
            } else {
                self.dict.extend_from_slice(block);
                if self.dict.len() > WINDOW {
                    let excess = self.dict.len() - WINDOW;
                    self.dict.drain(..excess);
                }
            }
        }
        self.produced += produced as u64;
        if self.content_size.is_some_and(|size| self.produced > size) {
            return Err(Error::corrupt(
                member_offset,
                "LZ4 frame exceeds declared content size",
            ));
        }
        Ok((produced, false))
    }

    /// Hops over the remaining blocks using their length prefixes, without
    /// decompressing them. The content checksum cannot be verified.
    pub fn skip_rest<R: Read>(&mut self, input: &mut Input<R>, member_offset: u64) -> Result<()> {
        let extra = if self.flags & FLG_BLOCK_CHECKSUM != 0 {
            4
        } else {
            0
        };
        loop {
            let word = self.read_block_header(input, member_offset)?;
            if word == 0 {
                let tail = if self.flags & FLG_CONTENT_CHECKSUM != 0 {
                    4
                } else {
                    0
                };
                if input.skip(tail)? != tail {
                    return Err(Error::corrupt(
                        member_offset,
                        "truncated LZ4 content checksum",
                    ));
                }
                return Ok(());
            }
            let len = u64::from(word & !UNCOMPRESSED_BIT) + extra;
            if input.skip(len)? != len {
                return Err(Error::corrupt(member_offset, "truncated LZ4 block"));
            }
        }
    }

    fn finish<R: Read>(&mut self, input: &mut Input<R>, member_offset: u64) -> Result<()> {
        if self.flags & FLG_CONTENT_CHECKSUM != 0 {
            let mut stored = [0u8; 4];
            if !input.read_exact_into(&mut stored)? {
                return Err(Error::corrupt(
                    member_offset,
                    "truncated LZ4 content checksum",
                ));
            }
            let actual = std::mem::take(&mut self.hasher).digest();
            if u32::from_le_bytes(stored) != actual {
                return Err(Error::corrupt(
                    member_offset,
                    "LZ4 content checksum mismatch",
                ));
            }
        }
        if let Some(size) = self.content_size {
            if size != self.produced {
                return Err(Error::corrupt(
                    member_offset,
                    "LZ4 frame shorter than declared content size",
                ));
            }
        }
        Ok(())
    }
}

/// Writes a single LZ4 frame: independent 64 KiB blocks, content checksum,
/// and the content size when known up front.
pub(crate) struct Lz4FrameWriter<'a, W: Write> {
    out: W,
    block: &'a mut Vec<u8>,
    compressed: &'a mut Vec<u8>,
    hasher: Xxh32,
    content_size: Option<u64>,
    written: u64,
}

impl<'a, W: Write> Lz4FrameWriter<'a, W> {
    pub fn new(
        mut out: W,
        block: &'a mut Vec<u8>,
        compressed: &'a mut Vec<u8>,
        content_size: Option<u64>,
    ) -> io::Result<Self> {
        let mut header = Vec::with_capacity(15);
        header.extend_from_slice(&MAGIC);
        let mut flg = FLG_VERSION | FLG_BLOCK_INDEPENDENT | FLG_CONTENT_CHECKSUM;
        if content_size.is_some() {
            flg |= FLG_CONTENT_SIZE;
        }
        header.push(flg);
        header.push(WRITE_BD);
        if let Some(size) = content_size {
            header.extend_from_slice(&size.to_le_bytes());
        }
        let hc = ((xxh32(&header[4..], 0) >> 8) & 0xff) as u8;
        header.push(hc);
        out.write_all(&header)?;

        block.clear();
        block.reserve(WRITE_BLOCK_SIZE);
        compressed.resize(
            lz4_flex::block::get_maximum_output_size(WRITE_BLOCK_SIZE),
            0,
        );
        Ok(Lz4FrameWriter {
            out,
            block,
            compressed,
            hasher: Xxh32::new(0),
            content_size,
            written: 0,
        })
    }

    fn flush_block(&mut self) -> io::Result<()> {
        if self.block.is_empty() {
            return Ok(());
        }
        self.hasher.update(self.block);
        let n = lz4_flex::block::compress_into(self.block, self.compressed)
            .map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
        if n < self.block.len() {
            self.out.write_all(&(n as u32).to_le_bytes())?;
            self.out.write_all(&self.compressed[..n])?;
        } else {
            let word = self.block.len() as u32 | UNCOMPRESSED_BIT;
            self.out.write_all(&word.to_le_bytes())?;
            self.out.write_all(self.block)?;
        }
        self.block.clear();
        Ok(())
    }

    /// Closes the current block early, so what follows starts a new one.
    pub fn end_block(&mut self) -> io::Result<()> {
        self.flush_block()
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.flush_block()?;
        if let Some(size) = self.content_size {
            if size != self.written {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidInput,
                    Error::LengthMismatch {
                        declared: size,
                        actual: self.written,
                    },
                ));
            }
        }
        self.out.write_all(&0u32.to_le_bytes())?;
        self.out.write_all(&self.hasher.digest().to_le_bytes())?;
        Ok(self.out)
    }
}

impl<W: Write> Write for Lz4FrameWriter<'_, W> {
    fn write(&mut self, mut buf: &[u8]) -> io::Result<usize> {
        let total = buf.len();
        while !buf.is_empty() {
            let room = WRITE_BLOCK_SIZE - self.block.len();
            let step = room.min(buf.len());
            self.block.extend_from_slice(&buf[..step]);
            buf = &buf[step..];
            if self.block.len() == WRITE_BLOCK_SIZE {
                self.flush_block()?;
            }
        }
        self.written += total as u64;
        Ok(total)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
