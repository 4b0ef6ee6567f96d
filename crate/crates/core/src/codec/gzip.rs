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

//! Gzip member framing (RFC 1952) around a raw inflate stream.

use std::io::Read;

use flate2::{Decompress, FlushDecompress, Status};

use super::input::Input;
use crate::error::{Error, Result};

pub(crate) const MAGIC: [u8; 3] = [0x1f, 0x8b, 0x08];

const FHCRC: u8 = 0x02;
const FEXTRA: u8 = 0x04;
const FNAME: u8 = 0x08;
const FCOMMENT: u8 = 0x10;
const FRESERVED: u8 = 0xe0;

pub(crate) struct GzipDecoder {
    inflate: Decompress,
    crc: crc32fast::Hasher,
    size: u32,
}

impl GzipDecoder {
    pub fn new() -> Self {
        GzipDecoder {
            inflate: Decompress::new(false),
            crc: crc32fast::Hasher::new(),
            size: 0,
        }
    }

    /// Parses the member header at the current input position. The caller
    /// has already checked that input is available.
    pub fn begin<R: Read>(&mut self, input: &mut Input<R>, member_offset: u64) -> Result<()> {
        let truncated = || Error::corrupt(member_offset, "truncated gzip header");
        if !input.fill_at_least(10)? {
            return Err(truncated());
        }
        let head = input.available();
        if head[..3] != MAGIC {
            return Err(Error::corrupt(member_offset, "missing gzip magic"));
        }
        let flags = head[3];
        if flags & FRESERVED != 0 {
            return Err(Error::corrupt(member_offset, "reserved gzip flags set"));
        }
        input.consume(10);

        if flags & FEXTRA != 0 {
            let mut len = [0u8; 2];
            if !input.read_exact_into(&mut len)? {
                return Err(truncated());
            }
            let len = u64::from(u16::from_le_bytes(len));
            if input.skip(len)? != len {
                return Err(truncated());
            }
        }
        for flag in [FNAME, FCOMMENT] {
            if flags & flag != 0 {
                loop {
                    match input.read_u8()? {
                        Some(0) => break,
                        Some(_) => {}
                        None => return Err(truncated()),
                    }
                }
            }
        }
        if flags & FHCRC != 0 && input.skip(2)? != 2 {
            return Err(truncated());
        }

        self.inflate.reset(false);
        self.crc = crc32fast::Hasher::new();
        self.size = 0;
        Ok(())
    }

    /// Inflates into `out`. Returns the number of bytes produced and whether
    /// the member (including its trailer) is complete.
    pub fn decode<R: Read>(
        &mut self,
        input: &mut Input<R>,
        out: &mut [u8],
        member_offset: u64,
    ) -> Result<(usize, bool)> {
        loop {
            let avail = input.fill()?;
            if avail.is_empty() {
                return Err(Error::corrupt(member_offset, "truncated deflate stream"));
            }
            let (in_before, out_before) = (self.inflate.total_in(), self.inflate.total_out());
            let status = self
                .inflate
                .decompress(avail, out, FlushDecompress::None)
                .map_err(|e| Error::corrupt(member_offset, format!("inflate failed: {e}")))?;
            let consumed = (self.inflate.total_in() - in_before) as usize;
            let produced = (self.inflate.total_out() - out_before) as usize;
            input.consume(consumed);
            self.crc.update(&out[..produced]);
            self.size = self.size.wrapping_add(produced as u32);

            if status == Status::StreamEnd {
                self.finish(input, member_offset)?;
                return Ok((produced, true));
            }
            if produced > 0 {
                return Ok((produced, false));
            }
            if consumed == 0 {
                // No progress on what is buffered; insist on more input.
                let have = input.available().len();
                if have + 1 > super::input::INPUT_BUFFER_SIZE || !input.fill_at_least(have + 1)? {
                    return Err(Error::corrupt(member_offset, "truncated deflate stream"));
                }
            }
        }
    }

    fn finish<R: Read>(&mut self, input: &mut Input<R>, member_offset: u64) -> Result<()> {
        let mut trailer = [0u8; 8];
        if !input.read_exact_into(&mut trailer)? {
            return Err(Error::corrupt(member_offset, "truncated gzip trailer"));
        }
        let crc = u32::from_le_bytes(trailer[..4].try_into().unwrap());
        let size = u32::from_le_bytes(trailer[4..].try_into().unwrap());
        let actual = std::mem::take(&mut self.crc).finalize();
        if crc != actual {
            return Err(Error::corrupt(
                member_offset,
                format!("CRC mismatch: stored {crc:08x}, computed {actual:08x}"),
            ));
        }
        if size != self.size {
            return Err(Error::corrupt(member_offset, "ISIZE mismatch"));
        }
        Ok(())
    }
}
