//! Physical-line classification: which lines start a statement, which
//! continue one (open brackets, triple-quoted strings, backslashes), and
//! which are blank or comments.

use alloc::vec::Vec;

use crate::text::lines_with_offsets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LineKind {
    Blank,
    Comment,
    Code,
    Continuation,
}

#[derive(Debug, Clone)]
pub(crate) struct PhysLine<'a> {
    pub start: usize,
    pub text: &'a str,
    pub indent: usize,
    pub kind: LineKind,
}

impl<'a> PhysLine<'a> {
    pub fn trimmed(&self) -> &'a str {
        self.text[self.indent..].trim_end()
    }
}

#[derive(Default)]
struct Scan {
    triple: Option<u8>,
    depth: usize,
    backslash: bool,
}

impl Scan {
    fn open(&self) -> bool {
        self.triple.is_some() || self.depth > 0 || self.backslash
    }

    fn feed(&mut self, line: &str) {
        let b = line.as_bytes();
        let mut i = 0;
        let mut single: Option<u8> = None;
        while i < b.len() {
            let c = b[i];
            if let Some(q) = self.triple {
                if c == b'\\' {
                    i += 2;
                    continue;
                }
                if c == q && b.get(i + 1) == Some(&q) && b.get(i + 2) == Some(&q) {
                    self.triple = None;
                    i += 3;
                    continue;
                }
            } else if let Some(q) = single {
                if c == b'\\' {
                    i += 2;
                    continue;
                }
                if c == q {
                    single = None;
                }
            } else {
                match c {
                    b'#' => break,
                    b'\'' | b'"' => {
                        if b.get(i + 1) == Some(&c) && b.get(i + 2) == Some(&c) {
                            self.triple = Some(c);
                            i += 3;
                            continue;
                        }
                        single = Some(c);
                    }
                    b'(' | b'[' | b'{' => self.depth += 1,
                    b')' | b']' | b'}' => self.depth = self.depth.saturating_sub(1),
                    _ => {}
                }
            }
            i += 1;
        }
        self.backslash = self.triple.is_none() && single.is_none() && line.trim_end().ends_with('\\');
    }
}

pub(crate) fn classify(text: &str) -> Vec<PhysLine<'_>> {
    let mut scan = Scan::default();
    let mut out = Vec::new();
    for (start, line) in lines_with_offsets(text) {
        let indent = line.len() - line.trim_start_matches([' ', '\t']).len();
        let trimmed = line.trim();
        let kind = if scan.open() {
            LineKind::Continuation
        } else if trimmed.is_empty() {
            LineKind::Blank
        } else if trimmed.starts_with('#') {
            LineKind::Comment
        } else {
            LineKind::Code
        };
        if kind != LineKind::Blank && kind != LineKind::Comment {
            scan.feed(line);
        }
        out.push(PhysLine { start, text: line, indent, kind });
    }
    out
}

/// Lines that hold code: the inside of the first ```python fence, or the
/// whole text when there is none.
pub(crate) struct Region {
    pub start: usize,
    /// Index of the closing fence line, if fenced.
    pub end: Option<usize>,
}

pub(crate) fn find_region(lines: &[PhysLine<'_>]) -> Region {
    let open = lines.iter().position(|l| {
        let t = l.text.trim();
        matches!(t.strip_prefix("```").map(str::trim), Some("python" | "py" | "python3"))
    });
    let Some(open) = open else {
        return Region { start: 0, end: None };
    };
    let close = lines[open + 1..].iter().position(|l| l.text.trim() == "```").map(|p| p + open + 1);
    Region { start: open + 1, end: Some(close.unwrap_or(lines.len())) }
}
