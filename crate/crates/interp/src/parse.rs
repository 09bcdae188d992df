//! Splitting a line of the command language into invocations.
//!
//! `%` starts a comment, `;` separates commands, `#N cmd` repeats a command,
//! `< file` includes a script, `name = value` sets a parameter and
//! `cmd > file` sends the output of one command to a file. Double quotes
//! group words and protect all of these characters.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invocation {
    Command { name: String, args: Vec<String>, redirect: Option<String> },
    Assign { name: String, value: String },
    Include(String),
}

impl Invocation {
    pub fn command(name: &str, args: &[&str]) -> Self {
        Invocation::Command { name: name.into(), args: args.iter().map(|s| s.to_string()).collect(), redirect: None }
    }
}

/// `column` counts characters from 1.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

/// Largest count accepted by `#N`.
pub const MAX_REPEAT: usize = 10_000;

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { column, message: message.into() })
}

/// Characters of one `;`-separated piece, each with its column.
type Piece = Vec<(usize, char)>;

fn pieces(text: &str) -> Result<Vec<Piece>, ParseError> {
    let mut out = vec![Vec::new()];
    let mut quote = None;
    for (i, ch) in text.chars().enumerate() {
        let col = i + 1;
        if quote.is_none() {
            match ch {
                '%' => break,
                ';' => {
                    out.push(Vec::new());
                    continue;
                }
                '"' => quote = Some(col),
                _ => {}
            }
        } else if ch == '"' {
            quote = None;
        }
        out.last_mut().unwrap().push((col, ch));
    }
    if let Some(col) = quote {
        return err(col, "unterminated quote");
    }
    Ok(out)
}

fn trim(p: &[(usize, char)]) -> &[(usize, char)] {
    let start = p.iter().position(|(_, c)| !c.is_whitespace()).unwrap_or(p.len());
    let end = p.iter().rposition(|(_, c)| !c.is_whitespace()).map_or(start, |e| e + 1);
    &p[start..end]
}

/// Index of the first unquoted `target`.
fn find_top(p: &[(usize, char)], target: char) -> Option<usize> {
    let mut quoted = false;
    for (i, (_, c)) in p.iter().enumerate() {
        if *c == '"' {
            quoted = !quoted;
        } else if !quoted && *c == target {
            return Some(i);
        }
    }
    None
}

fn words(p: &[(usize, char)]) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur: Option<String> = None;
    let mut quoted = false;
    for (_, c) in p {
        match c {
            '"' => {
                quoted = !quoted;
                cur.get_or_insert_with(String::new);
            }
            c if c.is_whitespace() && !quoted => {
                if let Some(w) = cur.take() {
                    out.push(w);
                }
            }
            c => cur.get_or_insert_with(String::new).push(*c),
        }
    }
    out.extend(cur);
    out
}

fn single_word(p: &[(usize, char)], col: usize, what: &str) -> Result<String, ParseError> {
    let w = words(p);
    match w.len() {
        1 => Ok(w.into_iter().next().unwrap()),
        0 => err(col, format!("missing {what}")),
        _ => err(col, format!("{what} must be a single word")),
    }
}

fn piece(p: &[(usize, char)], end_col: usize) -> Result<Vec<Invocation>, ParseError> {
    let p = trim(p);
    let Some(&(col, first)) = p.first() else {
        return Ok(Vec::new());
    };
    let after = p.last().map_or(end_col, |(c, _)| c + 1);
    if first == '#' {
        let digits = p[1..].iter().take_while(|(_, c)| c.is_ascii_digit()).count();
        if digits == 0 {
            return err(col + 1, "expected a repeat count after '#'");
        }
        let text: String = p[1..=digits].iter().map(|(_, c)| c).collect();
        let n = match text.parse::<usize>() {
            Ok(n) if n <= MAX_REPEAT => n,
            _ => return err(col + 1, format!("repeat count must be at most {MAX_REPEAT}")),
        };
        let body = piece(&p[1 + digits..], after)?;
        if body.is_empty() {
            return err(after, "nothing to repeat");
        }
        return Ok((0..n).flat_map(|_| body.clone()).collect());
    }
    if first == '<' {
        return Ok(vec![Invocation::Include(single_word(&p[1..], after, "script name")?)]);
    }
    if let Some(eq) = find_top(p, '=') {
        let name = single_word(&p[..eq], col, "parameter name")?;
        let value = words(&p[eq + 1..]).join(" ");
        if value.is_empty() {
            return err(p[eq].0 + 1, format!("missing value for '{name}'"));
        }
        return Ok(vec![Invocation::Assign { name, value }]);
    }
    let (body, redirect) = match find_top(p, '>') {
        Some(gt) => (&p[..gt], Some(single_word(&p[gt + 1..], p[gt].0 + 1, "output file")?)),
        None => (p, None),
    };
    let mut w = words(body).into_iter();
    match w.next() {
        Some(name) => Ok(vec![Invocation::Command { name, args: w.collect(), redirect }]),
        None => err(col, "missing command before '>'"),
    }
}

/// Never panics; every problem comes back as a [`ParseError`].
pub fn parse_line(text: &str) -> Result<Vec<Invocation>, ParseError> {
    let end = text.chars().count() + 1;
    let mut out = Vec::new();
    for p in pieces(text)? {
        out.extend(piece(&p, end)?);
    }
    Ok(out)
}

/// Replace `$0`, `$1`, … in an alias template with the call's arguments.
/// Missing arguments become empty.
pub fn expand_alias(template: &str, args: &[String]) -> String {
    let mut out = String::new();
    let mut chars = template.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '$' && chars.peek().is_some_and(|d| d.is_ascii_digit()) {
            let mut k = 0usize;
            while let Some(d) = chars.peek().and_then(|d| d.to_digit(10)) {
                k = k.saturating_mul(10).saturating_add(d as usize);
                chars.next();
            }
            out.push_str(args.get(k).map_or("", String::as_str));
        } else {
            out.push(c);
        }
    }
    out
}
