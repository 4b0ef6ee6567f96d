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

//! Content digests as they appear in `WARC-Block-Digest` and
//! `WARC-Payload-Digest` headers.

use std::fmt;
use std::str::FromStr;

use data_encoding::{BASE32_NOPAD, HEXLOWER_PERMISSIVE};
use sha1::Digest as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigestAlgorithm {
    Md5,
    Sha1,
    Sha256,
}

impl DigestAlgorithm {
    pub const ALL: [DigestAlgorithm; 3] = [Self::Md5, Self::Sha1, Self::Sha256];

    pub fn output_len(self) -> usize {
        match self {
            DigestAlgorithm::Md5 => 16,
            DigestAlgorithm::Sha1 => 20,
            DigestAlgorithm::Sha256 => 32,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DigestAlgorithm::Md5 => "md5",
            DigestAlgorithm::Sha1 => "sha1",
            DigestAlgorithm::Sha256 => "sha256",
        }
    }

    pub fn from_token(token: &[u8]) -> Result<Self> {
        let token = token.trim_ascii();
        Self::ALL
            .into_iter()
            .find(|alg| token.eq_ignore_ascii_case(alg.as_str().as_bytes()))
            // "sha-1" and "sha-256" show up in the wild
            .or_else(|| match token.to_ascii_lowercase().as_slice() {
                b"sha-1" => Some(DigestAlgorithm::Sha1),
                b"sha-256" => Some(DigestAlgorithm::Sha256),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownAlgorithm(String::from_utf8_lossy(token).into_owned()))
    }

    pub fn hasher(self) -> DigestHasher {
        match self {
            DigestAlgorithm::Md5 => DigestHasher::Md5(md5::Md5::new()),
            DigestAlgorithm::Sha1 => DigestHasher::Sha1(sha1::Sha1::new()),
            DigestAlgorithm::Sha256 => DigestHasher::Sha256(sha2::Sha256::new()),
        }
    }
}

impl fmt::Display for DigestAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DigestAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_token(s.as_bytes())
    }
}

/// A digest value tagged with its algorithm.
///
/// The canonical text form is `<alg>:<BASE32>` (uppercase, unpadded). Parsing
/// also accepts lowercase base32, trailing `=` padding and hex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digest {
    algorithm: DigestAlgorithm,
    value: Vec<u8>,
}

impl Digest {
    pub fn new(algorithm: DigestAlgorithm, value: Vec<u8>) -> Result<Self> {
        if value.len() != algorithm.output_len() {
            return Err(Error::MalformedDigest(format!(
                "{} digest must be {} bytes, got {}",
                algorithm,
                algorithm.output_len(),
                value.len()
            )));
        }
        Ok(Digest { algorithm, value })
    }

    /// Hashes `data` in one go.
    pub fn compute(algorithm: DigestAlgorithm, data: &[u8]) -> Self {
        let mut h = algorithm.hasher();
        h.update(data);
        h.finalize()
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        let text = text.trim_ascii();
        let colon = memchr::memchr(b':', text)
            .ok_or_else(|| Error::MalformedDigest(String::from_utf8_lossy(text).into_owned()))?;
        let algorithm = DigestAlgorithm::from_token(&text[..colon])?;
        let encoded = text[colon + 1..].trim_ascii();
        let malformed = || Error::MalformedDigest(String::from_utf8_lossy(text).into_owned());

        let value = if encoded.len() == algorithm.output_len() * 2
            && encoded.iter().all(u8::is_ascii_hexdigit)
        {
            HEXLOWER_PERMISSIVE
                .decode(encoded)
                .map_err(|_| malformed())?
        } else {
            let mut upper = encoded.to_ascii_uppercase();
            while upper.last() == Some(&b'=') {
                upper.pop();
            }
            BASE32_NOPAD.decode(&upper).map_err(|_| malformed())?
        };
        if value.len() != algorithm.output_len() {
            return Err(malformed());
        }
        Ok(Digest { algorithm, value })
    }

    pub fn algorithm(&self) -> DigestAlgorithm {
        self.algorithm
    }

    pub fn value(&self) -> &[u8] {
        &self.value
    }

    pub fn canonical(&self) -> String {
        format!("{}:{}", self.algorithm, BASE32_NOPAD.encode(&self.value))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.value)
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.canonical())
    }
}

impl FromStr for Digest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s.as_bytes())
    }
}

/// Incremental hasher for any supported algorithm.
#[derive(Clone)]
pub enum DigestHasher {
    Md5(md5::Md5),
    Sha1(sha1::Sha1),
    Sha256(sha2::Sha256),
}

impl DigestHasher {
    pub fn algorithm(&self) -> DigestAlgorithm {
        match self {
            DigestHasher::Md5(_) => DigestAlgorithm::Md5,
            DigestHasher::Sha1(_) => DigestAlgorithm::Sha1,
            DigestHasher::Sha256(_) => DigestAlgorithm::Sha256,
        }
    }

    pub fn update(&mut self, data: &[u8]) {
        match self {
            DigestHasher::Md5(h) => h.update(data),
            DigestHasher::Sha1(h) => h.update(data),
            DigestHasher::Sha256(h) => h.update(data),
        }
    }

    pub fn finalize(self) -> Digest {
        let algorithm = self.algorithm();
        let value = match self {
            DigestHasher::Md5(h) => h.finalize().to_vec(),
            DigestHasher::Sha1(h) => h.finalize().to_vec(),
            DigestHasher::Sha256(h) => h.finalize().to_vec(),
        };
        Digest { algorithm, value }
    }
}
