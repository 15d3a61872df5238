//! LP-format writer and a tokenizer for the subset it produces.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{ModelSpec, Sense, Var};

const WRAP: usize = 80;

fn write_terms(out: &mut String, terms: &[(i64, Var)]) {
    if terms.is_empty() {
        out.push_str("0 C");
        return;
    }
    for (i, &(coef, var)) in terms.iter().enumerate() {
        let sign = if coef < 0 { "-" } else { "+" };
        match (i, coef.abs()) {
            (0, 1) if coef > 0 => write!(out, "{var}"),
            (0, a) if coef > 0 => write!(out, "{a} {var}"),
            (0, 1) => write!(out, "- {var}"),
            (0, a) => write!(out, "- {a} {var}"),
            (_, 1) => write!(out, " {sign} {var}"),
            (_, a) => write!(out, " {sign} {a} {var}"),
        }
        .unwrap();
    }
}

pub fn write_lp(model: &ModelSpec) -> String {
    let mut out = String::new();
    writeln!(out, "\\ alwabp {} {} {}", model.variant, model.n_tasks, model.n_workers).unwrap();
    out.push_str("Minimize\n obj: C\nSubject To\n");
    for row in &model.rows {
        write!(out, " {}: ", row.name).unwrap();
        write_terms(&mut out, &row.terms);
        writeln!(out, " {} {}", row.sense.symbol(), row.rhs).unwrap();
    }
    out.push_str("Bounds\n C free\nBinaries\n");
    let mut line = String::new();
    for var in &model.binaries {
        let name = var.to_string();
        if !line.is_empty() && line.len() + 1 + name.len() > WRAP {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(&name);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LpSyntaxError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRow {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedLp {
    /// Comment lines without the leading backslash.
    pub comments: Vec<String>,
    pub objective: Vec<(i64, String)>,
    pub rows: Vec<ParsedRow>,
    pub free: Vec<String>,
    pub binaries: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimum" | "min" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn is_identifier(token: &str) -> bool {
    let mut chars = token.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits `name: body` and checks the name.
fn labelled(line: &str, at: usize) -> Result<(String, &str), LpSyntaxError> {
    let err = |message: &str| LpSyntaxError {
        line: at,
        message: message.to_string(),
    };
    let (name, body) = line.split_once(':').ok_or_else(|| err("missing row name"))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(err("invalid row name"));
    }
    Ok((name.to_string(), body))
}

fn parse_expression(tokens: &[&str], at: usize) -> Result<Vec<(i64, String)>, LpSyntaxError> {
    let err = |message: String| LpSyntaxError { line: at, message };
    let mut terms = Vec::new();
    let mut sign = 1;
    let mut coef: Option<i64> = None;
    let mut expect_operator = false;
    for &tok in tokens {
        match tok {
            "+" | "-" => {
                if coef.is_some() {
                    return Err(err(format!("operator after coefficient near `{tok}`")));
                }
                if !expect_operator && !terms.is_empty() {
                    return Err(err("two operators in a row".into()));
                }
                sign = if tok == "-" { -1 } else { 1 };
                expect_operator = false;
            }
            _ if tok.parse::<i64>().is_ok() => {
                if expect_operator || coef.is_some() {
                    return Err(err(format!("unexpected number `{tok}`")));
                }
                coef = Some(tok.parse().unwrap());
            }
            _ if is_identifier(tok) => {
                if expect_operator {
                    return Err(err(format!("missing operator before `{tok}`")));
                }
                terms.push((sign * coef.take().unwrap_or(1), tok.to_string()));
                sign = 1;
                expect_operator = true;
            }
            _ => return Err(err(format!("unexpected token `{tok}`"))),
        }
    }
    if !expect_operator {
        return Err(err("expression does not end with a variable".into()));
    }
    Ok(terms)
}

fn parse_row(line: &str, at: usize) -> Result<ParsedRow, LpSyntaxError> {
    let (name, body) = labelled(line, at)?;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let position = tokens
        .iter()
        .position(|t| matches!(*t, "<=" | ">=" | "="))
        .ok_or_else(|| LpSyntaxError {
            line: at,
            message: "missing comparison".into(),
        })?;
    let sense = match tokens[position] {
        "<=" => Sense::Le,
        ">=" => Sense::Ge,
        _ => Sense::Eq,
    };
    let rhs = match &tokens[position + 1..] {
        [value] => value.parse::<i64>().ok(),
        _ => None,
    }
    .ok_or_else(|| LpSyntaxError {
        line: at,
        message: "right-hand side must be one integer".into(),
    })?;
    Ok(ParsedRow {
        name,
        terms: parse_expression(&tokens[..position], at)?,
        sense,
        rhs,
    })
}

/// Tokenizes LP text, checking that the sections appear in order and that
/// every variable used by the objective or a row is declared.
pub fn parse_lp(text: &str) -> Result<ParsedLp, LpSyntaxError> {
    let mut out = ParsedLp::default();
    let mut section = Section::Start;
    let mut names = HashSet::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let at = i + 1;
        last = at;
        let err = |message: String| LpSyntaxError { line: at, message };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            out.comments.push(comment.trim().to_string());
            continue;
        }
        if section == Section::End {
            return Err(err("content after End".into()));
        }
        if let Some(next) = section_of(line) {
            if next <= section {
                return Err(err(format!("section `{line}` out of order")));
            }
            if next > Section::Objective && section < Section::Objective {
                return Err(err("missing objective".into()));
            }
            section = next;
            continue;
        }
        match section {
            Section::Start | Section::End => return Err(err(format!("unexpected `{line}`"))),
            Section::Objective => {
                if !out.objective.is_empty() {
                    return Err(err("second objective".into()));
                }
                let (_, body) = labelled(line, at)?;
                let tokens: Vec<&str> = body.split_whitespace().collect();
                out.objective = parse_expression(&tokens, at)?;
            }
            Section::Constraints => {
                let row = parse_row(line, at)?;
                if !names.insert(row.name.clone()) {
                    return Err(err(format!("duplicate row `{}`", row.name)));
                }
                out.rows.push(row);
            }
            Section::Bounds => match line.split_whitespace().collect::<Vec<_>>()[..] {
                [var, free] if is_identifier(var) && free.eq_ignore_ascii_case("free") => {
                    out.free.push(var.to_string())
                }
                _ => return Err(err(format!("unsupported bound `{line}`"))),
            },
            Section::Binaries => {
                for var in line.split_whitespace() {
                    if !is_identifier(var) {
                        return Err(err(format!("invalid variable `{var}`")));
                    }
                    out.binaries.push(var.to_string());
                }
            }
        }
    }
    if section != Section::End {
        return Err(LpSyntaxError {
            line: last,
            message: "missing End".into(),
        });
    }
    let declared: HashSet<&str> = out.free.iter().chain(&out.binaries).map(String::as_str).collect();
    let used = out
        .objective
        .iter()
        .chain(out.rows.iter().flat_map(|r| &r.terms))
        .map(|(_, v)| v.as_str());
    for var in used {
        if !declared.contains(var) {
            return Err(LpSyntaxError {
                line: last,
                message: format!("variable `{var}` is never declared"),
            });
        }
    }
    Ok(out)
}
