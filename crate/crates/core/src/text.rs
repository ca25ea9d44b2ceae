//! Small text helpers shared by both parsers.

use alloc::vec::Vec;

/// Maps byte offsets to 1-based (line, column) pairs and back. Columns count
/// bytes.
#[derive(Debug, Clone)]
pub(crate) struct LineIndex {
    starts: Vec<usize>,
    len: usize,
}

impl LineIndex {
    pub(crate) fn new(text: &str) -> Self {
        let mut starts = Vec::new();
        starts.push(0);
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                starts.push(i + 1);
            }
        }
        Self { starts, len: text.len() }
    }

    pub(crate) fn position(&self, offset: usize) -> (usize, usize) {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (line + 1, offset - self.starts[line] + 1)
    }

    pub(crate) fn offset(&self, line: usize, col: usize) -> Option<usize> {
        if line == 0 || col == 0 {
            return None;
        }
        let start = *self.starts.get(line - 1)?;
        let line_end = self.starts.get(line).copied().unwrap_or(self.len + 1);
        let off = start + col - 1;
        // the newline itself (or EOF) is addressable, nothing past it
        if off >= line_end || off > self.len {
            return None;
        }
        Some(off)
    }
}

/// Splits `text` into lines, yielding `(start_offset, line_without_newline)`.
pub(crate) fn lines_with_offsets(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut pos = 0;
    text.split_inclusive('\n').map(move |chunk| {
        let start = pos;
        pos += chunk.len();
        let line = chunk.strip_suffix('\n').unwrap_or(chunk);
        let line = line.strip_suffix('\r').unwrap_or(line);
        (start, line)
    })
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Length in bytes of the identifier at the start of `s`.
pub(crate) fn ident_len(s: &str) -> usize {
    let mut len = 0;
    for (i, c) in s.char_indices() {
        let ok = if i == 0 { c.is_alphabetic() || c == '_' } else { c.is_alphanumeric() || c == '_' };
        if !ok {
            break;
        }
        len = i + c.len_utf8();
    }
    len
}

/// Splits on commas that are not nested inside brackets or string literals.
/// Returns byte ranges relative to `s`.
pub(crate) fn split_top_level(s: &str, sep: u8) -> Vec<(usize, usize)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut quote: Option<u8> = None;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) => {
                if b == b'\\' {
                    i += 1;
                } else if b == q {
                    quote = None;
                }
            }
            None => match b {
                b'\'' | b'"' => quote = Some(b),
                b'(' | b'[' | b'{' | b'<' => depth += 1,
                b')' | b']' | b'}' | b'>' => depth -= 1,
                _ if b == sep && depth == 0 => {
                    out.push((start, i));
                    start = i + 1;
                }
                _ => {}
            },
        }
        i += 1;
    }
    out.push((start, bytes.len()));
    out
}

/// Returns the trimmed sub-range of `s[range]`.
pub(crate) fn trim_range(s: &str, (start, end): (usize, usize)) -> (usize, usize) {
    let piece = &s[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let trail = piece.len() - piece.trim_end().len();
    if lead == piece.len() {
        return (start, start);
    }
    (start + lead, end - trail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_index_round_trip() {
        let text = "ab\ncd\n\nx";
        let idx = LineIndex::new(text);
        for off in 0..=text.len() {
            let (l, c) = idx.position(off);
            assert_eq!(idx.offset(l, c), Some(off), "offset {off}");
        }
        assert_eq!(idx.offset(1, 4), None);
        assert_eq!(idx.offset(9, 1), None);
    }

    #[test]
    fn split_respects_nesting() {
        let s = "a: Dict[str, int], b = 'x,y', c";
        let parts: Vec<&str> = split_top_level(s, b',').into_iter().map(|(a, b)| s[a..b].trim()).collect();
        assert_eq!(parts, ["a: Dict[str, int]", "b = 'x,y'", "c"]);
    }

    #[test]
    fn identifiers() {
        assert!(is_ident("_x1"));
        assert!(!is_ident("1x"));
        assert!(!is_ident(""));
        assert_eq!(ident_len("abc(def"), 3);
    }
}
