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

//! WARC domain types shared by the reader, writer and CLI.

mod digest;
mod headers;

use std::fmt;
use std::ops::BitOr;
use std::str::FromStr;

pub use digest::{Digest, DigestAlgorithm, DigestHasher};
pub use headers::HeaderMap;

use crate::error::Result;

/// WARC record type, from the `WARC-Type` header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordType {
    Warcinfo,
    Response,
    Resource,
    Request,
    Metadata,
    Revisit,
    Conversion,
    Continuation,
    /// Any value outside the eight standard types, or a missing header.
    Unknown,
}

impl RecordType {
    pub const ALL: [RecordType; 9] = [
        RecordType::Warcinfo,
        RecordType::Response,
        RecordType::Resource,
        RecordType::Request,
        RecordType::Metadata,
        RecordType::Revisit,
        RecordType::Conversion,
        RecordType::Continuation,
        RecordType::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecordType::Warcinfo => "warcinfo",
            RecordType::Response => "response",
            RecordType::Resource => "resource",
            RecordType::Request => "request",
            RecordType::Metadata => "metadata",
            RecordType::Revisit => "revisit",
            RecordType::Conversion => "conversion",
            RecordType::Continuation => "continuation",
            RecordType::Unknown => "unknown",
        }
    }

    /// Maps a `WARC-Type` value, trimmed and case-insensitive.
    pub fn from_value(value: &[u8]) -> Self {
        let value = value.trim_ascii();
        Self::ALL[..8]
            .iter()
            .copied()
            .find(|t| value.eq_ignore_ascii_case(t.as_str().as_bytes()))
            .unwrap_or(RecordType::Unknown)
    }

    /// Record type of a header block; missing `WARC-Type` is `Unknown`.
    pub fn of(headers: &HeaderMap) -> Self {
        headers
            .get("WARC-Type")
            .map_or(RecordType::Unknown, Self::from_value)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for RecordType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Set of record types, used to filter iteration.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecordTypeMask(u16);

impl RecordTypeMask {
    pub const NONE: RecordTypeMask = RecordTypeMask(0);
    pub const ALL: RecordTypeMask = RecordTypeMask((1 << 9) - 1);

    pub fn only(t: RecordType) -> Self {
        RecordTypeMask(t.bit())
    }

    pub fn with(self, t: RecordType) -> Self {
        RecordTypeMask(self.0 | t.bit())
    }

    pub fn without(self, t: RecordType) -> Self {
        RecordTypeMask(self.0 & !t.bit())
    }

    pub fn matches(self, t: RecordType) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn types(self) -> impl Iterator<Item = RecordType> {
        RecordType::ALL
            .into_iter()
            .filter(move |t| self.matches(*t))
    }
}

impl Default for RecordTypeMask {
    fn default() -> Self {
        Self::ALL
    }
}

impl From<RecordType> for RecordTypeMask {
    fn from(t: RecordType) -> Self {
        Self::only(t)
    }
}

impl BitOr for RecordTypeMask {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        RecordTypeMask(self.0 | rhs.0)
    }
}

impl BitOr<RecordType> for RecordTypeMask {
    type Output = Self;

    fn bitor(self, rhs: RecordType) -> Self {
        self.with(rhs)
    }
}

impl FromIterator<RecordType> for RecordTypeMask {
    fn from_iter<I: IntoIterator<Item = RecordType>>(iter: I) -> Self {
        iter.into_iter().fold(Self::NONE, Self::with)
    }
}

impl fmt::Debug for RecordTypeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.types()).finish()
    }
}

/// Parses a comma-separated list of type names such as `response,request`.
///
/// An empty list is an error so that it cannot be confused with "all types".
impl FromStr for RecordTypeMask {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut mask = RecordTypeMask::NONE;
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let t = RecordType::ALL
                .into_iter()
                .find(|t| t.as_str().eq_ignore_ascii_case(token))
                .ok_or_else(|| format!("unknown record type {token:?}"))?;
            mask = mask.with(t);
        }
        if mask.is_empty() {
            return Err("empty record type list".into());
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WarcVersion {
    V1_0,
    #[default]
    V1_1,
}

impl WarcVersion {
    pub fn version_line(self) -> &'static [u8] {
        match self {
            WarcVersion::V1_0 => b"WARC/1.0\r\n",
            WarcVersion::V1_1 => b"WARC/1.1\r\n",
        }
    }
}

impl fmt::Display for WarcVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WarcVersion::V1_0 => "1.0",
            WarcVersion::V1_1 => "1.1",
        })
    }
}

/// Where a record lives in its file.
///
/// `file_offset` is the start of the record's compressed member, or of the
/// raw record for uncompressed files. `compressed_length` is only known once
/// the record has been read to its end; records handed out by the reader carry
/// it when the extent is known up front (uncompressed input).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecordGeometry {
    pub file_offset: u64,
    pub compressed_length: Option<u64>,
    pub content_length: u64,
    pub header_length: u64,
}

impl RecordGeometry {
    /// Offset just past this record, when its on-disk extent is known.
    pub fn end_offset(&self) -> Option<u64> {
        self.compressed_length.map(|len| self.file_offset + len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DigestStatus {
    Pass,
    Fail,
    #[default]
    Absent,
}

/// Outcome of checking `WARC-Block-Digest` and `WARC-Payload-Digest`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DigestReport {
    pub block: DigestStatus,
    pub payload: DigestStatus,
}

impl DigestReport {
    pub fn any_failed(&self) -> bool {
        self.block == DigestStatus::Fail || self.payload == DigestStatus::Fail
    }

    pub fn all_absent(&self) -> bool {
        self.block == DigestStatus::Absent && self.payload == DigestStatus::Absent
    }
}

pub(crate) fn parse_content_length(value: &[u8]) -> Result<u64, ()> {
    let value = value.trim_ascii();
    if value.is_empty() || value.len() > 19 || !value.iter().all(u8::is_ascii_digit) {
        return Err(());
    }
    Ok(value
        .iter()
        .fold(0u64, |acc, b| acc * 10 + u64::from(b - b'0')))
}
