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

use std::io::{self, Read};

pub(crate) const INPUT_BUFFER_SIZE: usize = 256 * 1024;

/// Buffered reader over the compressed source that knows the file offset of
/// every byte it hands out.
pub(crate) struct Input<R> {
    inner: R,
    buf: Box<[u8]>,
    pos: usize,
    end: usize,
    offset: u64,
    eof: bool,
}

impl<R: Read> Input<R> {
    pub fn new(inner: R, offset: u64) -> Self {
        Input {
            inner,
            buf: vec![0; INPUT_BUFFER_SIZE].into_boxed_slice(),
            pos: 0,
            end: 0,
            offset,
            eof: false,
        }
    }

    /// File offset of the next unconsumed byte.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn available(&self) -> &[u8] {
        &self.buf[self.pos..self.end]
    }

    /// Buffered bytes, reading more only when the buffer is empty. Empty at EOF.
    pub fn fill(&mut self) -> io::Result<&[u8]> {
        if self.pos == self.end && !self.eof {
            self.pos = 0;
            self.end = 0;
            let n = read_retrying(&mut self.inner, &mut self.buf)?;
            self.end = n;
            self.eof = n == 0;
        }
        Ok(&self.buf[self.pos..self.end])
    }

    /// Makes at least `n` bytes contiguous in the buffer, unless EOF comes
    /// first. Returns whether `n` bytes are available.
    pub fn fill_at_least(&mut self, n: usize) -> io::Result<bool> {
        debug_assert!(n <= self.buf.len());
        if self.end - self.pos >= n {
            return Ok(true);
        }
        if self.pos > 0 {
            self.buf.copy_within(self.pos..self.end, 0);
            self.end -= self.pos;
            self.pos = 0;
        }
        while self.end < n && !self.eof {
            let got = read_retrying(&mut self.inner, &mut self.buf[self.end..])?;
            self.end += got;
            self.eof = got == 0;
        }
        Ok(self.end >= n)
    }

    pub fn consume(&mut self, n: usize) {
        debug_assert!(n <= self.end - self.pos);
        self.pos += n;
        self.offset += n as u64;
    }

    /// Discards up to `n` bytes; returns how many were skipped (short at EOF).
    pub fn skip(&mut self, mut n: u64) -> io::Result<u64> {
        let start = self.offset;
        while n > 0 {
            let avail = self.fill()?.len();
            if avail == 0 {
                break;
            }
            let step = avail.min(n.min(usize::MAX as u64) as usize);
            self.consume(step);
            n -= step as u64;
        }
        Ok(self.offset - start)
    }

    /// Copies exactly `out.len()` bytes, or returns false at EOF (the bytes
    /// read so far are consumed either way).
    pub fn read_exact_into(&mut self, out: &mut [u8]) -> io::Result<bool> {
        let mut done = 0;
        while done < out.len() {
            let avail = self.fill()?;
            if avail.is_empty() {
                return Ok(false);
            }
            let step = avail.len().min(out.len() - done);
            out[done..done + step].copy_from_slice(&avail[..step]);
            self.consume(step);
            done += step;
        }
        Ok(true)
    }

    pub fn read_u8(&mut self) -> io::Result<Option<u8>> {
        let avail = self.fill()?;
        match avail.first().copied() {
            Some(b) => {
                self.consume(1);
                Ok(Some(b))
            }
            None => Ok(None),
        }
    }

    /// Advances to the next occurrence of `pattern`, leaving it unconsumed.
    /// Returns the number of bytes skipped and whether the pattern was found.
    pub fn scan_to(&mut self, pattern: &[u8]) -> io::Result<(u64, bool)> {
        self.scan_within(pattern, u64::MAX)
    }

    /// Like [`scan_to`](Self::scan_to) but gives up once more than `limit`
    /// bytes have been skipped without a match.
    pub fn scan_within(&mut self, pattern: &[u8], limit: u64) -> io::Result<(u64, bool)> {
        let start = self.offset;
        loop {
            if !self.fill_at_least(pattern.len())? {
                let rest = self.end - self.pos;
                self.consume(rest);
                return Ok((self.offset - start, false));
            }
            let avail = self.available();
            if let Some(i) = memchr::memmem::find(avail, pattern) {
                self.consume(i);
                return Ok((self.offset - start, true));
            }
            let keep = pattern.len() - 1;
            let drop = avail.len() - keep;
            self.consume(drop);
            if self.offset - start > limit {
                return Ok((self.offset - start, false));
            }
        }
    }

    pub fn into_inner(self) -> R {
        self.inner
    }
}

fn read_retrying<R: Read>(r: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    loop {
        match r.read(buf) {
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hands out at most 3 bytes per read to exercise refills.
    struct Trickle<'a>(&'a [u8]);

    impl Read for Trickle<'_> {
        fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
            let n = buf.len().min(3).min(self.0.len());
            buf[..n].copy_from_slice(&self.0[..n]);
            self.0 = &self.0[n..];
            Ok(n)
        }
    }

    #[test]
    fn offsets_track_consumption() {
        let mut input = Input::new(Trickle(b"0123456789"), 100);
        assert!(input.fill_at_least(5).unwrap());
        assert_eq!(&input.available()[..5], b"01234");
        input.consume(2);
        assert_eq!(input.offset(), 102);
        assert_eq!(input.skip(5).unwrap(), 5);
        assert_eq!(input.read_u8().unwrap(), Some(b'7'));
        let mut out = [0u8; 3];
        assert!(!input.read_exact_into(&mut out).unwrap());
        assert_eq!(input.offset(), 110);
    }

    #[test]
    fn scan_finds_pattern_across_refills() {
        let data = b"garbage garbage WARC/1.1 tail";
        let mut input = Input::new(Trickle(data), 0);
        let (skipped, found) = input.scan_to(b"WARC/").unwrap();
        assert!(found);
        assert_eq!(skipped, 16);
        let (_, found) = input.scan_to(b"nothere").unwrap();
        assert!(!found);
        assert!(input.fill().unwrap().is_empty());
    }
}
