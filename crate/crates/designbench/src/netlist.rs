//! Netlist text format.
//!
//! ```text
//! # comment
//! <KIND> <name> <n+> <n-> <value...>
//! LOAD <element>
//! SCHEDULE <period> <duty>
//! PRIMARY <switch>
//! COMPLEMENT <switch>
//! END
//! ```
//!
//! `KIND` is one of `R L C V S D`. Values are written in shortest
//! exponent form (`4.7e-6`), so writing a parsed file reproduces it byte
//! for byte.

use std::fmt::Write as _;
use std::path::Path;

use designbench_core::circuits::{ElementKind, Netlist, SwitchPhase, SwitchSchedule};

use crate::{Error, Result};

pub fn write_netlist(net: &Netlist) -> String {
    let mut out = String::new();
    for e in &net.elements {
        write!(out, "{} {} {} {}", e.kind.letter(), e.name, e.pos, e.neg).unwrap();
        for v in &e.values {
            write!(out, " {v:e}").unwrap();
        }
        out.push('\n');
    }
    if let Some(load) = &net.load {
        writeln!(out, "LOAD {load}").unwrap();
    }
    if let Some(s) = &net.schedule {
        writeln!(out, "SCHEDULE {:e} {:e}", s.period, s.duty).unwrap();
        for (name, phase) in &s.phases {
            let word = match phase {
                SwitchPhase::Primary => "PRIMARY",
                SwitchPhase::Complement => "COMPLEMENT",
            };
            writeln!(out, "{word} {name}").unwrap();
        }
        out.push_str("END\n");
    }
    out
}

/// Parses netlist text. Structural checks (connectivity, arity, unique
/// names) are left to [`Netlist::validate`].
pub fn parse_netlist(text: &str) -> Result<Netlist> {
    parse_inner(text).map_err(|(line, message)| Error::Parse { path: "<netlist>".into(), line, message })
}

pub fn read_netlist(path: &Path) -> Result<Netlist> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_inner(&text).map_err(|(line, message)| Error::Parse { path: path.into(), line, message })
}

fn number<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T, String> {
    tok.parse().map_err(|_| format!("bad {what} `{tok}`"))
}

fn parse_inner(text: &str) -> Result<Netlist, (usize, String)> {
    let mut net = Netlist::new();
    let mut schedule: Option<SwitchSchedule> = None;
    let mut in_schedule = false;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(&head) = tokens.first() else { continue };
        let fail = |m: String| (line_no, m);
        if in_schedule {
            match (head, tokens.len()) {
                ("END", 1) => in_schedule = false,
                ("PRIMARY" | "COMPLEMENT", 2) => {
                    let phase = if head == "PRIMARY" { SwitchPhase::Primary } else { SwitchPhase::Complement };
                    let s = schedule.take().expect("open stanza");
                    schedule = Some(s.with(tokens[1], phase));
                }
                _ => return Err(fail(format!("expected PRIMARY <switch>, COMPLEMENT <switch> or END, got `{}`", content.trim()))),
            }
            continue;
        }
        match head {
            "LOAD" => {
                if tokens.len() != 2 {
                    return Err(fail("LOAD takes one element name".into()));
                }
                if net.load.is_some() {
                    return Err(fail("LOAD given twice".into()));
                }
                net.load = Some(tokens[1].to_string());
            }
            "SCHEDULE" => {
                if tokens.len() != 3 {
                    return Err(fail("SCHEDULE takes <period> <duty>".into()));
                }
                if schedule.is_some() {
                    return Err(fail("SCHEDULE given twice".into()));
                }
                let period = number(tokens[1], "period").map_err(fail)?;
                let duty = number(tokens[2], "duty").map_err(fail)?;
                schedule = Some(SwitchSchedule::new(period, duty));
                in_schedule = true;
            }
            _ => {
                let kind = ElementKind::from_letter(head).ok_or_else(|| fail(format!("unknown element kind `{head}`")))?;
                if tokens.len() < 4 {
                    return Err(fail("element lines need <KIND> <name> <n+> <n->".into()));
                }
                let pos: usize = number(tokens[2], "node").map_err(fail)?;
                let neg: usize = number(tokens[3], "node").map_err(fail)?;
                let values =
                    tokens[4..].iter().map(|t| number::<f64>(t, "value")).collect::<Result<Vec<_>, _>>().map_err(fail)?;
                net.add(kind, tokens[1], pos, neg, &values);
            }
        }
    }
    if in_schedule {
        return Err((last, "SCHEDULE stanza is missing END".into()));
    }
    net.schedule = schedule;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let net = parse_netlist("# divider\n\nV V1 1 0 10\nR R1 1 2 1e3 # top\nR R2 2 0 1e3\nLOAD R2\n").unwrap();
        assert_eq!(net.elements.len(), 3);
        assert_eq!(net.nodes, 3);
        assert_eq!(net.load.as_deref(), Some("R2"));
        assert_eq!(write_netlist(&net), "V V1 1 0 1e1\nR R1 1 2 1e3\nR R2 2 0 1e3\nLOAD R2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_netlist("R R1 1 0 1\nX X1 1 0 2\n").unwrap_err();
        assert!(e.to_string().contains(":2: unknown element kind `X`"), "{e}");
        let e = parse_netlist("R R1 1 0 abc\n").unwrap_err();
        assert!(e.to_string().contains("bad value `abc`"), "{e}");
        let e = parse_netlist("SCHEDULE 1e-6 0.5\nPRIMARY S1\n").unwrap_err();
        assert!(e.to_string().contains("missing END"), "{e}");
        let e = parse_netlist("SCHEDULE 1e-6 0.5\nR R1 1 0 1\nEND\n").unwrap_err();
        assert!(e.to_string().contains(":2:"), "{e}");
    }
}
