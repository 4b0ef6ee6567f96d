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

//! Streaming reader, writer and transcoder for WARC web archives.
//!
//! Files are read through a [`DecompressingStream`](codec::DecompressingStream)
//! that understands per-record gzip members and LZ4 frames, and iterated with a
//! [`WarcReader`](parser::WarcReader) that parses header blocks, skips records
//! filtered out by type without touching their payloads, and optionally parses
//! HTTP headers and verifies digests. [`WarcWriter`](writer::WarcWriter) emits
//! one compressed member per record.

pub mod codec;
pub mod corpus;
pub mod error;
pub mod http;
pub mod model;
pub mod parser;
pub mod writer;

pub use codec::{
    detect_codec, seek_member, CodecKind, DecompressingStream, MemberBoundary, MemberSink,
};
pub use error::{Error, Result};
pub use http::{parse_http_message, HttpMessage};
pub use model::{
    Digest, DigestAlgorithm, DigestReport, DigestStatus, HeaderMap, RecordGeometry, RecordType,
    RecordTypeMask, WarcVersion,
};
pub use parser::{
    open_record_at, parse_header_block, IterationOptions, ReaderStats, WarcReader, WarcRecord,
};
pub use writer::{recompress, RecompressReport, WarcWriter, WriteOptions};
