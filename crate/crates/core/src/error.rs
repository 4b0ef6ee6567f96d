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

use std::io;

use crate::codec::CodecKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the read, write and transcode paths.
///
/// Variants that describe a position in the input carry the byte offset in
/// the underlying (compressed) file, so callers can report or index it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[source] io::Error),

    #[error("corrupt member at offset {offset}: {reason}")]
    CorruptMember { offset: u64, reason: String },

    #[error("operation not supported for codec {0}")]
    UnsupportedForCodec(CodecKind),

    #[error("invalid compression level {level} for codec {codec}")]
    InvalidLevel { codec: CodecKind, level: u32 },

    #[error("unknown digest algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("malformed digest {0:?}")]
    MalformedDigest(String),

    #[error("malformed WARC version line at offset {offset}")]
    MalformedVersionLine { offset: u64 },

    #[error("malformed header line at offset {offset}")]
    MalformedHeaderLine { offset: u64 },

    #[error("malformed record at offset {offset}: {reason}")]
    MalformedRecord { offset: u64, reason: String },

    #[error("malformed HTTP start line")]
    MalformedStartLine,

    #[error("HTTP header section exceeds {limit} bytes")]
    HeaderSectionTooLarge { limit: usize },

    #[error("HTTP header section is incomplete")]
    IncompleteHttpHeader,

    #[error("record payload is no longer readable, the reader has advanced")]
    StaleRecord,

    #[error("record payload was consumed by digest verification and not retained")]
    PayloadConsumed,

    #[error("payload length mismatch: declared {declared}, got {actual}")]
    LengthMismatch { declared: u64, actual: u64 },
}

impl Error {
    /// Offset in the underlying file the error refers to, if any.
    pub fn offset(&self) -> Option<u64> {
        match self {
            Error::CorruptMember { offset, .. }
            | Error::MalformedVersionLine { offset }
            | Error::MalformedHeaderLine { offset }
            | Error::MalformedRecord { offset, .. } => Some(*offset),
            _ => None,
        }
    }

    pub(crate) fn corrupt(offset: u64, reason: impl Into<String>) -> Self {
        Error::CorruptMember {
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn malformed(offset: u64, reason: impl Into<String>) -> Self {
        Error::MalformedRecord {
            offset,
            reason: reason.into(),
        }
    }

    /// Whether this error describes bad input data rather than a failing device.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

// Errors travel through `std::io::Read` impls wrapped in an `io::Error`;
// unwrap them again so callers can match on the original variant.
impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        if err.get_ref().is_some_and(|inner| inner.is::<Error>()) {
            match err.into_inner().map(|inner| inner.downcast::<Error>()) {
                Some(Ok(inner)) => *inner,
                _ => unreachable!("checked above"),
            }
        } else {
            Error::Io(err)
        }
    }
}

impl From<Error> for io::Error {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(inner) => inner,
            other => io::Error::new(io::ErrorKind::InvalidData, other),
        }
    }
}
