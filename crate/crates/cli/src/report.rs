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

//! Tab-separated and JSON-lines output.

use std::fmt::Display;
use std::io::{self, Write};

use serde::{Serialize, Serializer};

/// A report row with a fixed set of columns.
pub trait Row: Serialize {
    const COLUMNS: &'static [&'static str];

    fn cells(&self) -> Vec<String>;
}

/// Writes `rows` as TSV with a header row, or as one JSON object per line.
pub fn emit<R: Row>(out: &mut dyn Write, rows: &[R], json: bool) -> io::Result<()> {
    if json {
        for row in rows {
            serde_json::to_writer(&mut *out, row)?;
            out.write_all(b"\n")?;
        }
    } else {
        writeln!(out, "{}", R::COLUMNS.join("\t"))?;
        for row in rows {
            writeln!(out, "{}", row.cells().join("\t"))?;
        }
    }
    out.flush()
}

pub(crate) fn display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}
