//! Corpus ingestion: directory loading, lexical markup stripping, and
//! speaker segmentation of debate transcripts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use crate::error::{Error, Result};

/// One document: a company's annual report for a year, or a candidate's text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilingDoc {
    pub entity: String,
    pub year: i32,
    pub text: String,
    /// Path relative to the corpus root.
    pub source: PathBuf,
}

/// Documents in canonical `(entity, year)` order with unique keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<FilingDoc>,
}

#[derive(Debug, Serialize)]
struct ManifestRow<'a> {
    entity: &'a str,
    year: i32,
    chars: usize,
    source_file: String,
}

impl Corpus {
    /// Sorts into canonical order and rejects duplicate `(entity, year)` keys.
    pub fn new(mut docs: Vec<FilingDoc>) -> Result<Self> {
        docs.sort_by(|a, b| {
            (a.entity.as_str(), a.year, &a.source).cmp(&(b.entity.as_str(), b.year, &b.source))
        });
        for pair in docs.windows(2) {
            if pair[0].entity == pair[1].entity && pair[0].year == pair[1].year {
                return Err(Error::DuplicateDocument {
                    entity: pair[0].entity.clone(),
                    year: pair[0].year,
                    first: pair[0].source.clone(),
                    second: pair[1].source.clone(),
                });
            }
        }
        Ok(Corpus { docs })
    }

    pub fn docs(&self) -> &[FilingDoc] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Manifest CSV: `entity,year,chars,source_file`.
    pub fn manifest_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<_> = self
            .docs
            .iter()
            .map(|d| ManifestRow {
                entity: &d.entity,
                year: d.year,
                chars: d.text.chars().count(),
                source_file: d.source.to_string_lossy().replace('\\', "/"),
            })
            .collect();
        crate::output::csv_bytes(&rows, &["entity", "year", "chars", "source_file"])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SourceKind {
    Text,
    Markup,
}

fn source_kind(path: &Path) -> Option<SourceKind> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "txt" => Some(SourceKind::Text),
        "htm" | "html" => Some(SourceKind::Markup),
        _ => None,
    }
}

/// `(directory name, file stem, path relative to root, kind)` for every
/// recognized file exactly two levels below `root`, sorted by path.
fn scan_tree(root: &Path) -> Result<Vec<(String, String, PathBuf, SourceKind)>> {
    if !root.is_dir() {
        return Err(Error::CorpusRootNotFound(root.to_path_buf()));
    }
    let mut found = Vec::new();
    for dir in fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let dir = dir.map_err(|e| Error::io(root, e))?;
        let dir_path = dir.path();
        if !dir_path.is_dir() {
            continue;
        }
        let dir_name = dir.file_name().to_string_lossy().into_owned();
        for file in fs::read_dir(&dir_path).map_err(|e| Error::io(&dir_path, e))? {
            let file = file.map_err(|e| Error::io(&dir_path, e))?;
            let path = file.path();
            if !path.is_file() {
                continue;
            }
            let Some(kind) = source_kind(&path) else {
                log::debug!("skipping {}", path.display());
                continue;
            };
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let rel = path.strip_prefix(root).unwrap_or(&path).to_path_buf();
            found.push((dir_name.clone(), stem, rel, kind));
        }
    }
    found.sort_by(|a, b| a.2.cmp(&b.2));
    Ok(found)
}

fn read_text(root: &Path, rel: &Path, kind: SourceKind) -> Result<String> {
    let full = root.join(rel);
    let bytes = fs::read(&full).map_err(|e| Error::io(&full, e))?;
    let text = match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => {
            let lossy = String::from_utf8_lossy(e.as_bytes()).into_owned();
            let replaced = lossy.matches('\u{FFFD}').count();
            log::warn!(
                "{}: replaced {replaced} invalid UTF-8 sequences",
                full.display()
            );
            lossy
        }
    };
    Ok(match kind {
        SourceKind::Text => text,
        SourceKind::Markup => {
            let stripped = strip_markup_counted(&text);
            if stripped.unterminated > 0 {
                log::warn!(
                    "{}: unterminated tag dropped through end of text",
                    full.display()
                );
            }
            stripped.text
        }
    })
}

/// Loads `<root>/<entity>/<year>.{txt,htm,html}`. Markup files are stripped;
/// `.txt` files are taken verbatim.
pub fn load_corpus(root: &Path) -> Result<Corpus> {
    let files = scan_tree(root)?;
    let docs = files
        .par_iter()
        .map(|(entity, stem, rel, kind)| {
            let year: i32 = stem
                .parse()
                .map_err(|_| Error::BadYearFileName(root.join(rel)))?;
            Ok(FilingDoc {
                entity: entity.clone(),
                year,
                text: read_text(root, rel, *kind)?,
                source: rel.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(docs)
}

/// One debate transcript, keyed by election year and debate name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub year: i32,
    pub debate: String,
    pub text: String,
}

/// Loads `<root>/<year>/<debate>.txt` (markup files are stripped), ordered by
/// `(year, debate)`.
pub fn load_transcripts(root: &Path) -> Result<Vec<Transcript>> {
    let files = scan_tree(root)?;
    let mut out = files
        .par_iter()
        .map(|(dir, stem, rel, kind)| {
            let year: i32 = dir
                .parse()
                .map_err(|_| Error::BadYearFileName(root.join(dir)))?;
            Ok(Transcript {
                year,
                debate: stem.clone(),
                text: read_text(root, rel, *kind)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| (a.year, &a.debate).cmp(&(b.year, &b.debate)));
    Ok(out)
}

/// Result of [`strip_markup_counted`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub text: String,
    /// 1 when a `<` was left open at end of input, else 0.
    pub unterminated: usize,
}

/// Removes `<...>` spans and decodes the common HTML entities.
pub fn strip_markup(raw: &str) -> String {
    strip_markup_counted(raw).text
}

const MAX_ENTITY_LEN: usize = 32;

/// Like [`strip_markup`], also reporting an unterminated trailing tag.
///
/// `&amp; &lt; &gt; &nbsp; &quot; &apos;` decode (nbsp to a plain space);
/// any other `&name;` or `&#...;` becomes a single space. A bare `&` with no
/// closing `;` nearby is kept.
pub fn strip_markup_counted(raw: &str) -> Stripped {
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    let mut unterminated = 0;
    while let Some(pos) = rest.find(['<', '&']) {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        if tail.starts_with('<') {
            match tail.find('>') {
                Some(end) => rest = &tail[end + 1..],
                None => {
                    unterminated = 1;
                    rest = "";
                }
            }
            continue;
        }
        match entity_at(tail) {
            Some((len, decoded)) => {
                out.push_str(decoded);
                rest = &tail[len..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    Stripped {
        text: out,
        unterminated,
    }
}

/// Byte length and replacement of the entity starting at `s` (which begins with `&`).
fn entity_at(s: &str) -> Option<(usize, &'static str)> {
    let body_end = s[1..]
        .char_indices()
        .take(MAX_ENTITY_LEN + 1)
        .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '#'))?;
    let (idx, c) = body_end;
    if c != ';' || idx == 0 {
        return None;
    }
    let name = &s[1..1 + idx];
    let decoded = match name {
        "amp" => "&",
        "lt" => "<",
        "gt" => ">",
        "nbsp" => " ",
        "quot" => "\"",
        "apos" => "'",
        _ => " ",
    };
    Some((idx + 2, decoded))
}

static SPEAKER_LABEL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([A-Z][A-Z.'\-]*(?: [A-Z][A-Z.'\-]*){0,2}):").expect("valid label regex")
});

/// Splits a transcript into speaker turns.
///
/// A line opening with one to three uppercase words and a colon starts a
/// turn. Each speaker's turns are joined with newlines; text before the first
/// label is filed under the empty speaker name.
pub fn segment_by_speaker(transcript: &str) -> BTreeMap<String, String> {
    let mut turns: Vec<(String, Vec<&str>)> = vec![(String::new(), Vec::new())];
    for line in transcript.lines() {
        match SPEAKER_LABEL.captures(line) {
            Some(caps) => {
                let whole = caps.get(0).expect("match");
                let label = caps[1].trim().to_string();
                let body = line[whole.end()..].trim_start();
                turns.push((label, vec![body]));
            }
            None => turns.last_mut().expect("nonempty").1.push(line),
        }
    }

    let labelled = turns.len() > 1;
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    for (speaker, lines) in turns {
        let text = lines.join("\n").trim().to_string();
        if speaker.is_empty() && labelled && text.is_empty() {
            continue;
        }
        out.entry(speaker)
            .and_modify(|acc| {
                if !text.is_empty() {
                    if !acc.is_empty() {
                        acc.push('\n');
                    }
                    acc.push_str(&text);
                }
            })
            .or_insert(text);
    }
    out
}
