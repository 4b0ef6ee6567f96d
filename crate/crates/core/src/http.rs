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

//! HTTP/1.x start line and header parsing for WARC payloads.
//!
//! Only the header section is parsed. The body stays raw: no chunked
//! decoding and no content decoding, since WARC stores the capture as sent.

use crate::error::{Error, Result};
use crate::model::HeaderMap;

/// Largest header section accepted before giving up on a payload.
pub const MAX_HEADER_SECTION: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HttpKind {
    Request,
    Response,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HttpVersion {
    V1_0,
    V1_1,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartLine {
    Request { method: Vec<u8>, target: Vec<u8> },
    Response { status: u16, reason: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpMessage {
    pub version: HttpVersion,
    pub start: StartLine,
    pub headers: HeaderMap,
    /// Index of the first body byte within the record payload.
    pub body_offset: u64,
    pub body_length: u64,
    /// Header lines dropped by the lenient parser.
    pub skipped_lines: u32,
}

impl HttpMessage {
    pub fn kind(&self) -> HttpKind {
        match self.start {
            StartLine::Request { .. } => HttpKind::Request,
            StartLine::Response { .. } => HttpKind::Response,
        }
    }

    pub fn method(&self) -> Option<&[u8]> {
        match &self.start {
            StartLine::Request { method, .. } => Some(method),
            _ => None,
        }
    }

    pub fn target(&self) -> Option<&[u8]> {
        match &self.start {
            StartLine::Request { target, .. } => Some(target),
            _ => None,
        }
    }

    pub fn status_code(&self) -> Option<u16> {
        match self.start {
            StartLine::Response { status, .. } => Some(status),
            _ => None,
        }
    }

    pub fn reason(&self) -> Option<&[u8]> {
        match &self.start {
            StartLine::Response { reason, .. } => Some(reason),
            _ => None,
        }
    }

    /// First value of header `name`, case-insensitive.
    pub fn header(&self, name: impl AsRef<[u8]>) -> Option<&[u8]> {
        self.headers.get(name)
    }
}

/// Splits the line starting at `pos`. Returns the line without its line
/// ending, the index after it, and whether it ended in CRLF.
pub(crate) fn next_line(buf: &[u8], pos: usize) -> Option<(&[u8], usize, bool)> {
    let rest = &buf[pos..];
    let nl = memchr::memchr(b'\n', rest)?;
    let (line, crlf) = match rest[..nl].strip_suffix(b"\r") {
        Some(line) => (line, true),
        None => (&rest[..nl], false),
    };
    Some((line, pos + nl + 1, crlf))
}

pub(crate) fn is_tchar(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b"!#$%&'*+-.^_`|~".contains(&b)
}

/// Finds the end of an HTTP header section: the index one past the blank
/// line, accepting CRLF or bare LF line endings.
pub fn find_header_end(buf: &[u8]) -> Option<usize> {
    let mut pos = 0;
    while let Some((line, next, _)) = next_line(buf, pos) {
        if line.is_empty() && pos > 0 {
            return Some(next);
        }
        pos = next;
    }
    None
}

/// Parses the start line and header section of an HTTP message.
///
/// `prefix` holds the first bytes of the payload, `total_length` the whole
/// payload size. When `prefix` ends before the blank line,
/// [`Error::IncompleteHttpHeader`] asks for a longer prefix, unless 64 KiB
/// have already been seen ([`Error::HeaderSectionTooLarge`]).
///
/// In lenient mode, runs of spaces in the start line, bare LF line endings,
/// folded header lines and unparseable header lines (dropped and counted)
/// are tolerated; strict mode rejects them.
pub fn parse_http_message(prefix: &[u8], total_length: u64, strict: bool) -> Result<HttpMessage> {
    let too_large = || Error::HeaderSectionTooLarge {
        limit: MAX_HEADER_SECTION,
    };
    let incomplete = || {
        if prefix.len() >= MAX_HEADER_SECTION {
            too_large()
        } else {
            Error::IncompleteHttpHeader
        }
    };

    let (first, mut pos, crlf) = next_line(prefix, 0).ok_or_else(incomplete)?;
    if strict && !crlf {
        return Err(Error::MalformedStartLine);
    }
    let (version, start) = parse_start_line(first, strict)?;

    let mut headers = HeaderMap::with_capacity(16, 512);
    let mut skipped_lines = 0;
    loop {
        let (line, next, crlf) = next_line(prefix, pos).ok_or_else(incomplete)?;
        if next > MAX_HEADER_SECTION {
            return Err(too_large());
        }
        if strict && !crlf {
            return Err(Error::MalformedHeaderLine { offset: pos as u64 });
        }
        if line.is_empty() {
            pos = next;
            break;
        }
        match parse_field_line(line) {
            FieldLine::Field(name, value) => headers.push_unchecked(name, value),
            FieldLine::Continuation(more) if !strict && !headers.is_empty() => {
                headers.fold_into_last(more);
            }
            _ if strict => return Err(Error::MalformedHeaderLine { offset: pos as u64 }),
            _ => skipped_lines += 1,
        }
        pos = next;
    }

    let body_offset = pos as u64;
    Ok(HttpMessage {
        version,
        start,
        headers,
        body_offset,
        body_length: total_length.saturating_sub(body_offset),
        skipped_lines,
    })
}

fn parse_version(token: &[u8]) -> Option<HttpVersion> {
    let rest = token.strip_prefix(b"HTTP/")?;
    Some(match rest {
        b"1.1" => HttpVersion::V1_1,
        b"1.0" => HttpVersion::V1_0,
        _ if !rest.is_empty() && rest.iter().all(|b| b.is_ascii_digit() || *b == b'.') => {
            HttpVersion::Other
        }
        _ => return None,
    })
}

/// Splits off the next space-delimited token. In lenient mode runs of
/// spaces count as one separator.
fn split_token(line: &[u8], strict: bool) -> (&[u8], Option<&[u8]>) {
    match memchr::memchr(b' ', line) {
        None => (line, None),
        Some(i) => {
            let mut rest = &line[i + 1..];
            if !strict {
                while let [b' ', tail @ ..] = rest {
                    rest = tail;
                }
            }
            (&line[..i], Some(rest))
        }
    }
}

fn parse_start_line(line: &[u8], strict: bool) -> Result<(HttpVersion, StartLine)> {
    let bad = || Error::MalformedStartLine;
    if line.starts_with(b"HTTP/") {
        let (version, rest) = split_token(line, strict);
        let version = parse_version(version).ok_or_else(bad)?;
        let rest = rest.ok_or_else(bad)?;
        let (code, reason) = split_token(rest, strict);
        if code.len() != 3 || !code.iter().all(u8::is_ascii_digit) {
            return Err(bad());
        }
        let status = code
            .iter()
            .fold(0u16, |acc, b| acc * 10 + u16::from(b - b'0'));
        if !(100..=599).contains(&status) {
            return Err(bad());
        }
        let reason = reason.unwrap_or_default();
        if reason.contains(&b'\r') {
            return Err(bad());
        }
        return Ok((
            version,
            StartLine::Response {
                status,
                reason: reason.to_vec(),
            },
        ));
    }

    let (method, rest) = split_token(line, strict);
    if method.is_empty() || !method.iter().copied().all(is_tchar) {
        return Err(bad());
    }
    let (target, rest) = split_token(rest.ok_or_else(bad)?, strict);
    let (version, trailing) = split_token(rest.ok_or_else(bad)?, strict);
    if target.is_empty() || target.iter().any(|b| b.is_ascii_control()) {
        return Err(bad());
    }
    if trailing.is_some_and(|t| strict || !t.is_empty()) {
        return Err(bad());
    }
    let version = parse_version(version).ok_or_else(bad)?;
    Ok((
        version,
        StartLine::Request {
            method: method.to_vec(),
            target: target.to_vec(),
        },
    ))
}

pub(crate) enum FieldLine<'a> {
    Field(&'a [u8], &'a [u8]),
    Continuation(&'a [u8]),
    Invalid,
}

pub(crate) fn parse_field_line(line: &[u8]) -> FieldLine<'_> {
    if matches!(line.first(), Some(b' ' | b'\t')) {
        let more = line.trim_ascii();
        if more.contains(&b'\r') {
            return FieldLine::Invalid;
        }
        return FieldLine::Continuation(more);
    }
    let Some(colon) = memchr::memchr(b':', line) else {
        return FieldLine::Invalid;
    };
    let name = &line[..colon];
    if name.is_empty() || !name.iter().copied().all(is_tchar) {
        return FieldLine::Invalid;
    }
    let value = line[colon + 1..].trim_ascii();
    if value.contains(&b'\r') {
        return FieldLine::Invalid;
    }
    FieldLine::Field(name, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn response_with_body() {
        let prefix = b"HTTP/1.1 200 OK\r\nContent-Type: text/html\r\n\r\n<html>";
        // the literal is 50 bytes; the blank line ends at byte 44
        assert_eq!(prefix.len(), 50);
        let msg = parse_http_message(prefix, 50, true).unwrap();
        assert_eq!(msg.kind(), HttpKind::Response);
        assert_eq!(msg.version, HttpVersion::V1_1);
        assert_eq!(msg.status_code(), Some(200));
        assert_eq!(msg.reason(), Some(&b"OK"[..]));
        assert_eq!(msg.headers.len(), 1);
        assert_eq!(msg.body_offset, 44);
        assert_eq!(msg.body_length, 6);
        assert_eq!(msg.header("content-type"), Some(&b"text/html"[..]));
    }

    #[test]
    fn minimal_request() {
        let prefix = b"GET /index.html HTTP/1.0\r\n\r\n";
        let msg = parse_http_message(prefix, prefix.len() as u64, true).unwrap();
        assert_eq!(msg.kind(), HttpKind::Request);
        assert_eq!(msg.method(), Some(&b"GET"[..]));
        assert_eq!(msg.target(), Some(&b"/index.html"[..]));
        assert_eq!(msg.version, HttpVersion::V1_0);
        assert!(msg.headers.is_empty());
        assert_eq!(msg.status_code(), None);
        assert_eq!(msg.body_length, 0);
    }

    #[test]
    fn not_http() {
        assert!(matches!(
            parse_http_message(b"FTP data here\r\n\r\n", 17, false),
            Err(Error::MalformedStartLine)
        ));
        assert!(matches!(
            parse_http_message(b"HTTP/1.1 99 Too Low\r\n\r\n", 23, false),
            Err(Error::MalformedStartLine)
        ));
    }

    #[test]
    fn reason_phrase_kept_verbatim() {
        let msg = parse_http_message(b"HTTP/1.1 404 Not  Found\r\n\r\n", 27, true).unwrap();
        assert_eq!(msg.reason(), Some(&b"Not  Found"[..]));
        let msg = parse_http_message(b"HTTP/1.0 204\r\n\r\n", 16, true).unwrap();
        assert_eq!(msg.reason(), Some(&b""[..]));
    }

    #[test]
    fn lenient_spacing_and_line_endings() {
        let raw = b"HTTP/1.1   301   Moved Permanently\nLocation: /x\n\nbody";
        assert!(parse_http_message(raw, raw.len() as u64, true).is_err());
        let msg = parse_http_message(raw, raw.len() as u64, false).unwrap();
        assert_eq!(msg.status_code(), Some(301));
        assert_eq!(msg.reason(), Some(&b"Moved Permanently"[..]));
        assert_eq!(msg.header("location"), Some(&b"/x"[..]));
        assert_eq!(msg.body_length, 4);
    }

    #[test]
    fn bad_header_lines_are_counted_or_rejected() {
        let raw = b"HTTP/1.1 200 OK\r\nGood: yes\r\nno colon here\r\nBad Name: x\r\n\r\n";
        let msg = parse_http_message(raw, raw.len() as u64, false).unwrap();
        assert_eq!(msg.headers.len(), 1);
        assert_eq!(msg.skipped_lines, 2);
        assert!(matches!(
            parse_http_message(raw, raw.len() as u64, true),
            Err(Error::MalformedHeaderLine { offset: 28 })
        ));
    }

    #[test]
    fn folded_lines() {
        let raw = b"HTTP/1.1 200 OK\r\nX-Long: a\r\n  b\r\n\r\n";
        let msg = parse_http_message(raw, raw.len() as u64, false).unwrap();
        assert_eq!(msg.header("x-long"), Some(&b"a b"[..]));
    }

    #[test]
    fn duplicate_headers() {
        let raw = b"HTTP/1.1 200 OK\r\nSet-Cookie: a=1\r\nSet-Cookie: b=2\r\n\r\n";
        let msg = parse_http_message(raw, raw.len() as u64, true).unwrap();
        assert_eq!(msg.header("set-cookie"), Some(&b"a=1"[..]));
        assert_eq!(msg.headers.get_all(b"Set-Cookie").count(), 2);
        assert_eq!(msg.header("absent"), None);
    }

    #[test]
    fn incomplete_and_oversized() {
        assert!(matches!(
            parse_http_message(b"HTTP/1.1 200 OK\r\nA: b\r\n", 1000, false),
            Err(Error::IncompleteHttpHeader)
        ));
        let mut big = b"HTTP/1.1 200 OK\r\n".to_vec();
        while big.len() < MAX_HEADER_SECTION + 100 {
            big.extend_from_slice(b"X-Filler: 0123456789012345678901234567890123456789\r\n");
        }
        assert!(matches!(
            parse_http_message(&big, big.len() as u64 + 10, false),
            Err(Error::HeaderSectionTooLarge { .. })
        ));
        big.extend_from_slice(b"\r\n");
        assert!(matches!(
            parse_http_message(&big, big.len() as u64, false),
            Err(Error::HeaderSectionTooLarge { .. })
        ));
    }

    #[test]
    fn header_end() {
        assert_eq!(
            find_header_end(b"HTTP/1.1 200 OK\r\nA: b\r\n\r\nxyz"),
            Some(25)
        );
        assert_eq!(find_header_end(b"HTTP/1.1 200 OK\nA: b\n\nxyz"), Some(22));
        assert_eq!(find_header_end(b"HTTP/1.1 200 OK\r\nA: b\r\n"), None);
    }

    proptest::proptest! {
        #[test]
        fn prefix_stable(extra in 0usize..40, body_len in 0u64..10_000) {
            let full = b"HTTP/1.1 200 OK\r\nContent-Type: text/html\r\nServer: x\r\n\r\n0123456789012345678901234567890123456789";
            let header_len = 55;
            let base = parse_http_message(&full[..header_len], header_len as u64 + body_len, false).unwrap();
            let longer = parse_http_message(&full[..header_len + extra], header_len as u64 + body_len, false).unwrap();
            proptest::prop_assert_eq!(&base, &longer);
            proptest::prop_assert_eq!(base.body_offset + base.body_length, header_len as u64 + body_len);
        }
    }
}
