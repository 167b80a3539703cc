//! Text formats for groups and sections, plus the canonical writer.
//!
//! A group block is `group order=<n>` followed by `n` rows of `n`
//! indices. A section file either spells out the two groups and the two
//! projections, or names a builder:
//!
//! ```text
//! section
//! states: group order=2
//! 0 1
//! 1 0
//! branches: group order=4
//! ...
//! left: 0 1 0 1
//! right: 0 0 1 1
//! ```
//!
//! ```text
//! builder shift_register p=2 m=2
//! builder complete group=
//! group order=6
//! ...
//! ```
//!
//! Parsing is whitespace-insensitive; the canonical writer always emits
//! the explicit form, so `parse -> write` is a fixpoint after one round.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::section::TrellisSection;

/// How a section document came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    File,
    ShiftRegister { p: usize, m: usize },
    Complete,
    SearchHit,
}

/// A parsed section plus its origin.
#[derive(Debug, Clone)]
pub struct SectionDocument {
    pub section: TrellisSection,
    pub provenance: Provenance,
}

impl SectionDocument {
    pub fn new(section: TrellisSection, provenance: Provenance) -> Self {
        SectionDocument {
            section,
            provenance,
        }
    }

    /// Canonical explicit text; parsing it back reproduces it byte for
    /// byte.
    pub fn canonical_text(&self) -> String {
        write_section(&self.section)
    }
}

struct Tokens {
    items: Vec<(String, usize)>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> Self {
        let mut items = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                items.push((tok.to_string(), i + 1));
            }
        }
        Tokens { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos.min(self.items.len().saturating_sub(1)))
            .map(|(_, l)| *l)
            .unwrap_or(0)
    }

    fn next(&mut self, what: &str) -> Result<&str> {
        let line = self.line();
        match self.items.get(self.pos) {
            Some((t, _)) => {
                self.pos += 1;
                Ok(t.as_str())
            }
            None => Err(Error::Parse {
                line,
                msg: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        let line = self.line();
        let got = self.next(token)?;
        if got != token {
            return Err(Error::Parse {
                line,
                msg: format!("expected `{token}`, found `{got}`"),
            });
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let line = self.line();
        let tok = self.next(what)?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected {what}, found `{tok}`"),
        })
    }

    fn keyed_number(&mut self, key: &str) -> Result<usize> {
        let line = self.line();
        let tok = self.next(key)?;
        match tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            Some(v) => v.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad value in `{tok}`"),
            }),
            None => Err(Error::Parse {
                line,
                msg: format!("expected `{key}=<n>`, found `{tok}`"),
            }),
        }
    }

    fn done(&self) -> bool {
        self.pos == self.items.len()
    }
}

fn parse_group_block(tokens: &mut Tokens) -> Result<FiniteGroup> {
    tokens.expect("group")?;
    let order = tokens.keyed_number("order")?;
    let mut table = Vec::with_capacity(order);
    for row in 0..order {
        let mut entries = Vec::with_capacity(order);
        for col in 0..order {
            let line = tokens.line();
            let v = tokens.number(&format!("table entry ({row},{col})"))?;
            if v >= order {
                return Err(Error::Parse {
                    line,
                    msg: format!("table entry {v} out of range in row {row}"),
                });
            }
            entries.push(v);
        }
        table.push(entries);
    }
    FiniteGroup::from_table(order, &table)
}

/// Parses a standalone group file.
pub fn parse_group_str(text: &str) -> Result<FiniteGroup> {
    let mut tokens = Tokens::new(text);
    let group = parse_group_block(&mut tokens)?;
    if !tokens.done() {
        return Err(Error::Parse {
            line: tokens.line(),
            msg: "trailing input after the group table".into(),
        });
    }
    Ok(group)
}

/// Parses a section file: the explicit form or a builder line.
pub fn parse_section_str(text: &str) -> Result<SectionDocument> {
    let mut tokens = Tokens::new(text);
    let line = tokens.line();
    match tokens.next("`section` or `builder`")? {
        "section" => {
            tokens.expect("states:")?;
            let states = parse_group_block(&mut tokens)?;
            tokens.expect("branches:")?;
            let branches = parse_group_block(&mut tokens)?;
            let nb = branches.order();
            let ns = states.order();
            let mut read_projection = |key: &str| -> Result<Vec<usize>> {
                tokens.expect(key)?;
                let mut out = Vec::with_capacity(nb);
                for i in 0..nb {
                    let line = tokens.line();
                    let v = tokens.number(&format!("{key} entry {i}"))?;
                    if v >= ns {
                        return Err(Error::Parse {
                            line,
                            msg: format!("state index {v} out of range"),
                        });
                    }
                    out.push(v);
                }
                Ok(out)
            };
            let left = read_projection("left:")?;
            let right = read_projection("right:")?;
            if !tokens.done() {
                return Err(Error::Parse {
                    line: tokens.line(),
                    msg: "trailing input after the section".into(),
                });
            }
            let section = TrellisSection::from_parts(branches, states, left, right)?;
            Ok(SectionDocument::new(section, Provenance::File))
        }
        "builder" => {
            let line = tokens.line();
            match tokens.next("builder name")? {
                "shift_register" => {
                    let p = tokens.keyed_number("p")?;
                    let m = tokens.keyed_number("m")?;
                    let section = TrellisSection::shift_register(p, m)?;
                    Ok(SectionDocument::new(
                        section,
                        Provenance::ShiftRegister { p, m },
                    ))
                }
                "complete" => {
                    tokens.expect("group=")?;
                    let group = parse_group_block(&mut tokens)?;
                    let section = TrellisSection::complete(group)?;
                    Ok(SectionDocument::new(section, Provenance::Complete))
                }
                other => Err(Error::Parse {
                    line,
                    msg: format!("unknown builder `{other}`"),
                }),
            }
        }
        other => Err(Error::Parse {
            line,
            msg: format!("expected `section` or `builder`, found `{other}`"),
        }),
    }
}

pub fn write_group(group: &FiniteGroup) -> String {
    let n = group.order();
    let mut out = format!("group order={n}\n");
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| group.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_section(section: &TrellisSection) -> String {
    let mut out = String::from("section\n");
    out.push_str("states: ");
    out.push_str(&write_group(section.state_group()));
    out.push_str("branches: ");
    out.push_str(&write_group(section.branch_group()));
    let fmt = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("left: {}\n", fmt(section.left_map())));
    out.push_str(&format!("right: {}\n", fmt(section.right_map())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn group_roundtrip() {
        let g = FiniteGroup::symmetric3();
        let text = write_group(&g);
        let parsed = parse_group_str(&text).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn builder_shift_register() {
        let doc = parse_section_str("builder shift_register p=2 m=2\n").unwrap();
        assert_eq!(doc.provenance, Provenance::ShiftRegister { p: 2, m: 2 });
        assert_eq!(doc.section.branch_group().order(), 8);
    }

    #[test]
    fn builder_complete() {
        let text = format!(
            "builder complete group=\n{}",
            write_group(&FiniteGroup::symmetric3())
        );
        let doc = parse_section_str(&text).unwrap();
        assert_eq!(doc.provenance, Provenance::Complete);
        assert_eq!(doc.section.branch_group().order(), 36);
    }

    #[test]
    fn canonical_text_is_a_fixpoint() {
        let doc = parse_section_str("builder shift_register p=3 m=1\n").unwrap();
        let canonical = doc.canonical_text();
        let reparsed = parse_section_str(&canonical).unwrap();
        assert_eq!(reparsed.provenance, Provenance::File);
        assert_eq!(reparsed.canonical_text(), canonical);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "section\nstates: group order=2\n0 1\n1 9\n";
        match parse_section_str(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "builder frobnicate\n";
        assert!(matches!(
            parse_section_str(text),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn comments_and_spacing_are_ignored() {
        let text = "# a builder\nbuilder   shift_register   p=2   m=1  # inline\n";
        let doc = parse_section_str(text).unwrap();
        assert_eq!(doc.section.branch_group().order(), 4);
    }
}
