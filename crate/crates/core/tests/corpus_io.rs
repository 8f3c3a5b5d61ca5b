use std::fs;
use std::path::{Path, PathBuf};

use promises::corpus::{load_corpus, load_transcripts};
use promises::Error;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn write(root: &Path, rel: &str, contents: &[u8]) {
    let p = root.join(rel);
    fs::create_dir_all(p.parent().unwrap()).unwrap();
    fs::write(p, contents).unwrap();
}

#[test]
fn empty_directory_gives_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_corpus(dir.path()).unwrap().is_empty());
}

#[test]
fn single_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "AAA/1999.txt", b"will");
    let c = load_corpus(dir.path()).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.docs()[0].entity, "AAA");
    assert_eq!(c.docs()[0].year, 1999);
    assert_eq!(c.docs()[0].text, "will");
}

#[test]
fn txt_and_htm_for_same_year_collide() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "AAA/1999.txt", b"will");
    write(dir.path(), "AAA/1999.htm", b"<p>will</p>");
    let err = load_corpus(dir.path()).unwrap_err();
    assert!(
        matches!(err, Error::DuplicateDocument { ref entity, year: 1999, .. } if entity == "AAA")
    );
    let msg = err.to_string();
    assert!(
        msg.contains("1999.txt") && msg.contains("1999.htm"),
        "{msg}"
    );
}

#[test]
fn missing_root_and_bad_year() {
    let err = load_corpus(Path::new("/definitely/not/here")).unwrap_err();
    assert!(err.to_string().starts_with("corpus root not found"));

    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "AAA/annual.txt", b"x");
    let err = load_corpus(dir.path()).unwrap_err();
    assert!(matches!(err, Error::BadYearFileName(_)));
    assert!(err.to_string().contains("annual.txt"));
}

#[test]
fn markup_stripped_invalid_utf8_replaced_other_files_ignored() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "BBB/2001.html",
        b"<p>we <i>shall</i> &amp; will</p>",
    );
    write(dir.path(), "BBB/2002.txt", b"bad \xff\xfe bytes will");
    write(dir.path(), "BBB/notes.md", b"ignored");
    write(dir.path(), "stray.txt", b"ignored");
    let c = load_corpus(dir.path()).unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c.docs()[0].text, "we shall & will");
    assert!(c.docs()[1].text.contains('\u{FFFD}'));
    assert!(c.docs()[1].text.ends_with("bytes will"));
}

#[test]
fn canonical_order_and_deterministic_manifest() {
    let root = fixture("corpus12");
    let a = load_corpus(&root).unwrap();
    let b = load_corpus(&root).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.manifest_csv().unwrap(), b.manifest_csv().unwrap());
    let keys: Vec<_> = a
        .docs()
        .iter()
        .map(|d| (d.entity.clone(), d.year))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(a
        .docs()
        .iter()
        .all(|d| !d.source.to_string_lossy().ends_with(".htm") || !d.text.contains('<')));
    let manifest = String::from_utf8(a.manifest_csv().unwrap()).unwrap();
    assert!(manifest.starts_with("entity,year,chars,source_file\nAAA,1999,"));
    assert!(manifest.contains("AAA,2001,"));
    assert!(manifest.contains(",AAA/2001.htm\n"));
}

#[test]
fn transcripts_layout() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "2004/first.txt",
        b"BUSH: We will.\nKERRY: I will.",
    );
    write(dir.path(), "2004/second.txt", b"KERRY: Going to win.");
    write(dir.path(), "2000/only.txt", b"GORE: Shall.");
    let t = load_transcripts(dir.path()).unwrap();
    let keys: Vec<_> = t.iter().map(|t| (t.year, t.debate.as_str())).collect();
    assert_eq!(
        keys,
        vec![(2000, "only"), (2004, "first"), (2004, "second")]
    );
}
