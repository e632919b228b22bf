//! Human and machine renderings of a command's result.
//!
//! Machine mode prints `key: value` records, one per line, repeats the key
//! for list items, and wraps class dumps in `class-begin` / `class-end`.

use std::io::{self, Write};

/// How a decision came out; the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    True = 0,
    False = 1,
    Inconclusive = 2,
}

impl Status {
    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

enum Line {
    Field(String, String),
    Class(Vec<String>),
}

#[derive(Default)]
pub struct Out {
    lines: Vec<Line>,
}

impl Out {
    pub fn field(&mut self, key: &str, value: impl ToString) {
        self.lines.push(Line::Field(key.to_string(), value.to_string()));
    }

    pub fn items<I, T>(&mut self, key: &str, values: I)
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        for v in values {
            self.lines.push(Line::Field(key.to_string(), v.to_string()));
        }
    }

    pub fn class(&mut self, members: Vec<String>) {
        self.lines.push(Line::Class(members));
    }

    pub fn write(&self, machine: bool, mut w: impl Write) -> io::Result<()> {
        let width = self
            .lines
            .iter()
            .map(|l| match l {
                Line::Field(k, _) => k.len(),
                Line::Class(_) => 0,
            })
            .max()
            .unwrap_or(0);
        for line in &self.lines {
            match (line, machine) {
                (Line::Field(k, v), true) => writeln!(w, "{k}: {v}")?,
                (Line::Field(k, v), false) => writeln!(w, "{k:<width$}  {v}")?,
                (Line::Class(members), true) => {
                    writeln!(w, "class-begin")?;
                    for m in members {
                        writeln!(w, "{m}")?;
                    }
                    writeln!(w, "class-end")?;
                }
                (Line::Class(members), false) => {
                    for m in members {
                        writeln!(w, "    {m}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
