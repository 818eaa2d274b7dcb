//! FASTA with `><id>|<class_label>` headers and 80-column sequence lines.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const LINE_WIDTH: usize = 80;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub id: String,
    pub class_label: String,
    pub sequence: String,
}

impl SequenceRecord {
    pub fn new(id: impl Into<String>, class_label: impl Into<String>, sequence: impl Into<String>) -> Self {
        Self { id: id.into(), class_label: class_label.into(), sequence: sequence.into() }
    }
}

pub fn write_fasta<'a, W, I>(records: I, mut sink: W) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a SequenceRecord>,
{
    for rec in records {
        writeln!(sink, ">{}|{}", rec.id, rec.class_label)?;
        for chunk in rec.sequence.as_bytes().chunks(LINE_WIDTH) {
            sink.write_all(chunk)?;
            sink.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn parse_header(line: usize, text: &str) -> Result<(String, String)> {
    let err = |message: String| Error::FastaParse { line, message };
    let body = text.strip_prefix('>').ok_or_else(|| err("header must start with '>'".into()))?;
    let (id, class) =
        body.split_once('|').ok_or_else(|| err(format!("header {text:?} is missing the '|' separator")))?;
    if id.is_empty() || class.is_empty() {
        return Err(err(format!("header {text:?} needs a non-empty id and class")));
    }
    if class.contains('|') || body.chars().any(char::is_whitespace) {
        return Err(err(format!("header {text:?} must be `>id|class` without spaces")));
    }
    Ok((id.to_string(), class.to_string()))
}

/// Reads records written by [`write_fasta`]. Blank lines are ignored; a
/// trailing `\r` is tolerated. Sequence characters must be ASCII letters.
pub fn read_fasta<R: BufRead>(source: R) -> Result<Vec<SequenceRecord>> {
    let mut records: Vec<SequenceRecord> = Vec::new();
    let mut header_line = 0;
    let finish = |records: &[SequenceRecord], header_line: usize| -> Result<()> {
        match records.last() {
            Some(r) if r.sequence.is_empty() => {
                Err(Error::FastaParse { line: header_line, message: format!("record {:?} has no sequence", r.id) })
            }
            _ => Ok(()),
        }
    };
    for (i, line) in source.lines().enumerate() {
        let n = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        if line.starts_with('>') {
            finish(&records, header_line)?;
            let (id, class) = parse_header(n, line)?;
            records.push(SequenceRecord::new(id, class, String::new()));
            header_line = n;
            continue;
        }
        let rec = records
            .last_mut()
            .ok_or_else(|| Error::FastaParse { line: n, message: "sequence data before the first header".into() })?;
        if let Some((col, c)) = line.char_indices().find(|(_, c)| !c.is_ascii_alphabetic()) {
            return Err(Error::FastaParse {
                line: n,
                message: format!("illegal character {c:?} at column {}", col + 1),
            });
        }
        rec.sequence.push_str(line);
    }
    finish(&records, header_line)?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(text: &str) -> usize {
        match read_fasta(text.as_bytes()).unwrap_err() {
            Error::FastaParse { line, .. } => line,
            other => panic!("{other}"),
        }
    }

    #[test]
    fn wraps_at_80() {
        let rec = SequenceRecord::new("r0", "dna_at_rich", "A".repeat(120));
        let mut buf = Vec::new();
        write_fasta([&rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], ">r0|dna_at_rich");
        assert_eq!(lines[1].len(), 80);
        assert_eq!(lines[2].len(), 40);
        assert_eq!(read_fasta(text.as_bytes()).unwrap(), vec![rec]);
    }

    #[test]
    fn reader_errors_name_the_line() {
        assert_eq!(line_of(">r0|a\nACGT\n>r1\nACGT\n"), 3);
        assert_eq!(line_of("ACGT\n>r0|a\nACGT\n"), 1);
        assert_eq!(line_of(">r0|a\nAC GT\n"), 2);
        assert_eq!(line_of(">r0|a\nAC1T\n"), 2);
        assert_eq!(line_of(">r0|a\n>r1|b\nAAA\n"), 1);
        assert_eq!(line_of(">r0|a\nAAA\n>r1|b\n"), 3);
        assert_eq!(line_of(">|a\nAAA\n"), 1);
        assert_eq!(line_of(">r0|a|b\nAAA\n"), 1);
    }

    #[test]
    fn tolerant_of_blank_lines_and_crlf() {
        let recs = read_fasta("\n>r0|a\r\nAC\r\n\nGT\n".as_bytes()).unwrap();
        assert_eq!(recs, vec![SequenceRecord::new("r0", "a", "ACGT")]);
        assert!(read_fasta("".as_bytes()).unwrap().is_empty());
    }
}
