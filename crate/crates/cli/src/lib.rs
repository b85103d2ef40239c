//! Front end for the `virtual-ext` calculator.

pub mod diag;
pub mod eval;
pub mod syntax;

use std::io::{self, BufRead, Write};

use eval::Session;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub json: bool,
    /// Echo each statement as `> stmt` before its result.
    pub echo: bool,
    /// Stop at the first diagnostic.
    pub stop_on_error: bool,
    pub prompt: bool,
}

/// Evaluates `input` line by line. Text results go to `out` and text
/// diagnostics to `err`; in JSON mode both are JSON lines on `out`.
/// Returns the number of diagnostics.
pub fn run(
    session: &mut Session,
    input: impl BufRead,
    out: &mut impl Write,
    err: &mut impl Write,
    opts: RunOptions,
) -> io::Result<usize> {
    let mut errors = 0;
    if opts.prompt {
        write!(out, "> ")?;
        out.flush()?;
    }
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let result = session.run_line(&line, i + 1);
        if opts.echo && !matches!(result, Ok(None)) && !opts.json {
            writeln!(out, "> {}", line.trim())?;
        }
        match result {
            Ok(None) => {}
            Ok(Some(o)) if opts.json => writeln!(out, "{}", o.to_json(&line, &session.settings))?,
            Ok(Some(o)) => writeln!(out, "{}", o.text(&session.settings))?,
            Err(d) => {
                errors += 1;
                if opts.json {
                    writeln!(out, "{}", d.to_json())?;
                } else {
                    out.flush()?;
                    writeln!(err, "{d}")?;
                    err.flush()?;
                }
                if opts.stop_on_error {
                    break;
                }
            }
        }
        if opts.prompt {
            write!(out, "> ")?;
        }
        out.flush()?;
    }
    if opts.prompt {
        writeln!(out)?;
    }
    Ok(errors)
}
