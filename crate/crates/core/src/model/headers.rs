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

//! Ordered, case-insensitive multimap used for WARC and HTTP header blocks.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
struct Entry {
    name: (u32, u32),
    value: (u32, u32),
}

/// Header fields in wire order.
///
/// Names and values are raw bytes and share a single backing buffer, so a
/// parsed header block costs two allocations regardless of the field count.
/// Lookups compare names ASCII case-insensitively; the original casing is
/// kept for serialization. Duplicate names are allowed: [`get`](Self::get)
/// returns the first occurrence, [`iter`](Self::iter) returns all of them.
#[derive(Clone, Default)]
pub struct HeaderMap {
    buf: Vec<u8>,
    entries: Vec<Entry>,
}

impl HeaderMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(fields: usize, bytes: usize) -> Self {
        HeaderMap {
            buf: Vec::with_capacity(bytes),
            entries: Vec::with_capacity(fields),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.buf.clear();
        self.entries.clear();
    }

    /// Value of the first field named `name` (ASCII case-insensitive).
    pub fn get(&self, name: impl AsRef<[u8]>) -> Option<&[u8]> {
        let name = name.as_ref();
        self.iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| v)
    }

    /// Like [`get`](Self::get), but only for values that are valid UTF-8.
    pub fn get_str(&self, name: impl AsRef<[u8]>) -> Option<&str> {
        self.get(name).and_then(|v| std::str::from_utf8(v).ok())
    }

    /// All values of fields named `name`, in insertion order.
    pub fn get_all<'a>(&'a self, name: &'a [u8]) -> impl Iterator<Item = &'a [u8]> + 'a {
        self.iter()
            .filter(move |(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| v)
    }

    pub fn contains(&self, name: impl AsRef<[u8]>) -> bool {
        self.get(name).is_some()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[u8], &[u8])> + '_ {
        self.entries
            .iter()
            .map(move |e| (self.slice(e.name), self.slice(e.value)))
    }

    /// Appends a field without looking for existing ones.
    ///
    /// # Panics
    ///
    /// If the name contains CR, LF or `:`, or the value contains CR or LF.
    /// Use [`try_append`](Self::try_append) for untrusted input.
    pub fn append(&mut self, name: impl AsRef<[u8]>, value: impl AsRef<[u8]>) {
        if let Err(e) = self.try_append(name, value) {
            panic!("{e}");
        }
    }

    pub fn try_append(&mut self, name: impl AsRef<[u8]>, value: impl AsRef<[u8]>) -> Result<()> {
        let (name, value) = (name.as_ref(), value.as_ref());
        validate(name, value)?;
        self.push_unchecked(name, value);
        Ok(())
    }

    /// Replaces the first field named `name` in place and drops any later
    /// duplicates; appends when the name is not present.
    ///
    /// # Panics
    ///
    /// Same conditions as [`append`](Self::append).
    pub fn set(&mut self, name: impl AsRef<[u8]>, value: impl AsRef<[u8]>) {
        let (name, value) = (name.as_ref(), value.as_ref());
        if let Err(e) = validate(name, value) {
            panic!("{e}");
        }
        let value_range = self.push_bytes(value);
        let mut found = false;
        let buf = &self.buf;
        self.entries.retain_mut(|e| {
            let n = &buf[e.name.0 as usize..e.name.1 as usize];
            if !n.eq_ignore_ascii_case(name) {
                true
            } else if !found {
                found = true;
                e.value = value_range;
                true
            } else {
                false
            }
        });
        if !found {
            let name_range = self.push_bytes(name);
            self.entries.push(Entry {
                name: name_range,
                value: value_range,
            });
        }
    }

    /// Removes every field named `name`; returns how many were removed.
    pub fn remove(&mut self, name: impl AsRef<[u8]>) -> usize {
        let name = name.as_ref();
        let before = self.entries.len();
        let buf = &self.buf;
        self.entries
            .retain(|e| !buf[e.name.0 as usize..e.name.1 as usize].eq_ignore_ascii_case(name));
        before - self.entries.len()
    }

    /// Appends `Name: value\r\n` for every field. The terminating blank line
    /// is the caller's business.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        for (name, value) in self.iter() {
            out.extend_from_slice(name);
            out.extend_from_slice(b": ");
            out.extend_from_slice(value);
            out.extend_from_slice(b"\r\n");
        }
    }

    /// Bytes [`write_to`](Self::write_to) will emit.
    pub fn wire_len(&self) -> usize {
        self.iter().map(|(n, v)| n.len() + v.len() + 4).sum()
    }

    pub(crate) fn push_unchecked(&mut self, name: &[u8], value: &[u8]) {
        let name = self.push_bytes(name);
        let value = self.push_bytes(value);
        self.entries.push(Entry { name, value });
    }

    /// Extends the value of the last field by a space and `more`, for folded
    /// continuation lines. Returns false when there is no field to extend.
    pub(crate) fn fold_into_last(&mut self, more: &[u8]) -> bool {
        let Some(last) = self.entries.last().copied() else {
            return false;
        };
        let mut joined =
            Vec::with_capacity((last.value.1 - last.value.0) as usize + 1 + more.len());
        joined.extend_from_slice(self.slice(last.value));
        if !joined.is_empty() && !more.is_empty() {
            joined.push(b' ');
        }
        joined.extend_from_slice(more);
        let range = self.push_bytes(&joined);
        self.entries.last_mut().unwrap().value = range;
        true
    }

    fn push_bytes(&mut self, bytes: &[u8]) -> (u32, u32) {
        let start = self.buf.len();
        self.buf.extend_from_slice(bytes);
        let end = self.buf.len();
        assert!(end <= u32::MAX as usize, "header block too large");
        (start as u32, end as u32)
    }

    fn slice(&self, range: (u32, u32)) -> &[u8] {
        &self.buf[range.0 as usize..range.1 as usize]
    }
}

fn validate(name: &[u8], value: &[u8]) -> Result<()> {
    if name.is_empty() || name.iter().any(|b| matches!(b, b'\r' | b'\n' | b':')) {
        return Err(Error::MalformedHeaderLine { offset: 0 });
    }
    if value.iter().any(|b| matches!(b, b'\r' | b'\n')) {
        return Err(Error::MalformedHeaderLine { offset: 0 });
    }
    Ok(())
}

impl PartialEq for HeaderMap {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().eq(other.iter())
    }
}

impl Eq for HeaderMap {}

impl fmt::Debug for HeaderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.iter()
                    .map(|(n, v)| (String::from_utf8_lossy(n), String::from_utf8_lossy(v))),
            )
            .finish()
    }
}

impl<N: AsRef<[u8]>, V: AsRef<[u8]>> FromIterator<(N, V)> for HeaderMap {
    fn from_iter<I: IntoIterator<Item = (N, V)>>(iter: I) -> Self {
        let mut map = HeaderMap::new();
        for (n, v) in iter {
            map.append(n, v);
        }
        map
    }
}
