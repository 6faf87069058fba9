//! Splitting a document into cells and joining cells back.
//!
//! A cell boundary is one or more blank lines outside passive quotes.

use std::ops::Range;

/// Byte ranges of the cells of `text`, in order.
pub fn cell_ranges(text: &str) -> Vec<Range<usize>> {
    let mut ranges = Vec::new();
    let mut current: Option<Range<usize>> = None;
    let mut in_quote = false;
    let mut offset = 0;

    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let content = line.strip_suffix('\n').unwrap_or(line);
        let blank = !in_quote && content.trim().is_empty();
        // Blank lines inside quotes join a cell only once more text follows.
        in_quote = scan_quotes(content, in_quote);

        if blank {
            if let Some(r) = current.take() {
                ranges.push(r);
            }
        } else if !content.trim().is_empty() {
            let end = start + content.len();
            match &mut current {
                Some(r) => r.end = end,
                None => current = Some(start..end),
            }
        }
    }
    if let Some(r) = current {
        ranges.push(r);
    }
    ranges
}

fn scan_quotes(line: &str, mut in_quote: bool) -> bool {
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' if in_quote && bytes.get(i + 1) == Some(&b'"') => i += 1,
            b'"' => in_quote = !in_quote,
            _ => {}
        }
        i += 1;
    }
    in_quote
}

/// Cell texts, each preserved byte-for-byte from the document.
pub fn split_cells(text: &str) -> Vec<String> {
    cell_ranges(text)
        .into_iter()
        .map(|r| text[r].to_string())
        .collect()
}

/// Joins cells with one blank line between them.
pub fn join_cells<S: AsRef<str>>(cells: &[S]) -> String {
    cells
        .iter()
        .map(AsRef::as_ref)
        .collect::<Vec<_>>()
        .join("\n\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn blank_lines_split() {
        assert_eq!(split_cells("a=2;\n\na+1;\n"), vec!["a=2;", "a+1;"]);
        assert_eq!(split_cells("a=2;\n  \n\t\n\na+1;"), vec!["a=2;", "a+1;"]);
        assert!(split_cells("").is_empty());
        assert!(split_cells("\n\n  \n").is_empty());
    }

    #[test]
    fn blank_lines_inside_quotes_do_not_split() {
        let text = "\"first\n\nsecond\" x = 1;\n\ny;";
        assert_eq!(split_cells(text), vec!["\"first\n\nsecond\" x = 1;", "y;"]);
    }

    #[test]
    fn escaped_quotes() {
        let text = "\"say \\\"hi\\\"\"\n\nx;";
        assert_eq!(split_cells(text).len(), 2);
    }

    #[test]
    fn single_cell_join() {
        assert_eq!(join_cells(&["a = 1;"]), "a = 1;");
        assert_eq!(join_cells::<&str>(&[]), "");
    }

    proptest! {
        #[test]
        fn split_join_round_trip(text in "[a-c \"=;\n]{0,80}") {
            let cells = split_cells(&text);
            prop_assert_eq!(split_cells(&join_cells(&cells)), cells);
        }
    }
}
