//! Canonical line-oriented text format.
//!
//! ```text
//! alwabp 1
//! tasks <n>
//! workers <m>
//! times                  # n lines of m tokens: positive integer or `inf`
//! 4 inf 3
//! ...
//! precedences            # "a b": task a precedes task b (1-based)
//! 1 2
//! end
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{Instance, InstanceError, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("cyclic precedence")]
    CyclicPrecedence,
    #[error("task {0} has no feasible worker")]
    NoFeasibleWorker(usize),
    #[error("instance needs at least one worker")]
    NoWorkers,
    #[error("duplicate precedence {0} {1}")]
    DuplicateEdge(usize, usize),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-empty line with comments stripped, as tokens.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (idx, raw) in self.inner.by_ref() {
            self.last = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((idx + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        self.next_tokens().ok_or_else(|| ParseError {
            line: self.last + 1,
            kind: ParseErrorKind::Syntax(format!("unexpected end of input, expected {what}")),
        })
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn keyword_count(lines: &mut Lines<'_>, keyword: &str) -> Result<(usize, usize), ParseError> {
    let (line, tokens) = lines.expect(keyword)?;
    match tokens.as_slice() {
        [k, v] if *k == keyword => v
            .parse::<usize>()
            .map(|n| (line, n))
            .map_err(|_| syntax(line, format!("invalid count '{v}' for {keyword}"))),
        _ => Err(syntax(line, format!("expected '{keyword} <count>'"))),
    }
}

fn keyword_line(lines: &mut Lines<'_>, keyword: &str) -> Result<(), ParseError> {
    let (line, tokens) = lines.expect(keyword)?;
    if tokens.as_slice() != [keyword] {
        return Err(syntax(line, format!("expected '{keyword}'")));
    }
    Ok(())
}

fn reaches(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(&adj[v]);
        }
    }
    false
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (line, tokens) = lines.expect("header")?;
    if tokens.as_slice() != ["alwabp", "1"] {
        return Err(syntax(line, "expected header 'alwabp 1'"));
    }
    let (_, n_tasks) = keyword_count(&mut lines, "tasks")?;
    let (workers_line, n_workers) = keyword_count(&mut lines, "workers")?;
    if n_workers < 1 {
        return Err(ParseError {
            line: workers_line,
            kind: ParseErrorKind::NoWorkers,
        });
    }
    keyword_line(&mut lines, "times")?;

    let mut times = Vec::with_capacity(n_tasks * n_workers);
    for task in 0..n_tasks {
        let (line, tokens) = lines.expect("a row of task times")?;
        if tokens.len() != n_workers {
            return Err(syntax(
                line,
                format!("task {} has {} times, expected {}", task + 1, tokens.len(), n_workers),
            ));
        }
        for tok in &tokens {
            if *tok == "inf" {
                times.push(None);
                continue;
            }
            match tok.parse::<Time>() {
                Ok(p) if p > 0 => times.push(Some(p)),
                _ => return Err(syntax(line, format!("invalid time '{tok}'"))),
            }
        }
        if times[task * n_workers..].iter().all(Option::is_none) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::NoFeasibleWorker(task + 1),
            });
        }
    }

    keyword_line(&mut lines, "precedences")?;
    let mut edges = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_tasks];
    loop {
        let (line, tokens) = lines.expect("'end'")?;
        if tokens.as_slice() == ["end"] {
            break;
        }
        let [a, b] = tokens.as_slice() else {
            return Err(syntax(line, "expected 'a b' or 'end'"));
        };
        let parse_task = |tok: &str| match tok.parse::<usize>() {
            Ok(v) if (1..=n_tasks).contains(&v) => Ok(v - 1),
            _ => Err(syntax(line, format!("invalid task index '{tok}'"))),
        };
        let (a, b) = (parse_task(a)?, parse_task(b)?);
        if adj[a].contains(&b) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::DuplicateEdge(a + 1, b + 1),
            });
        }
        if a == b || reaches(&adj, b, a) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::CyclicPrecedence,
            });
        }
        adj[a].push(b);
        edges.push((a, b));
    }
    if let Some((line, _)) = lines.next_tokens() {
        return Err(syntax(line, "content after 'end'"));
    }

    // every InstanceError case was already reported above with its own line
    Instance::new(n_tasks, n_workers, times, &edges).map_err(|e: InstanceError| syntax(lines.last, e.to_string()))
}

/// Canonical text: single spaces, one section per keyword, trailing newline.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alwabp 1");
    let _ = writeln!(out, "tasks {}", inst.n_tasks());
    let _ = writeln!(out, "workers {}", inst.n_workers());
    let _ = writeln!(out, "times");
    for t in 0..inst.n_tasks() {
        let row: Vec<String> = (0..inst.n_workers())
            .map(|w| match inst.time(t, w) {
                Some(p) => p.to_string(),
                None => "inf".to_string(),
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    let _ = writeln!(out, "precedences");
    for &(a, b) in inst.edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    let _ = writeln!(out, "end");
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{FIG1, SINGLE};
    use super::*;

    #[test]
    fn fig1_parses_and_round_trips() {
        let inst = parse_instance(FIG1).unwrap();
        assert_eq!(inst.closure().len(), 11);
        assert_eq!(write_instance(&inst), FIG1);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn single_has_empty_closure() {
        let inst = parse_instance(SINGLE).unwrap();
        assert!(inst.closure().is_empty());
        assert_eq!(inst.time(0, 0), Some(7));
        assert_eq!(write_instance(&inst), SINGLE);
    }

    #[test]
    fn back_edge_is_cyclic() {
        let text = FIG1.replace("5 6\nend", "5 6\n2 1\nend");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::CyclicPrecedence);
        assert_eq!(err.line, 18);
        assert_eq!(err.to_string(), "line 18: cyclic precedence");
    }

    #[test]
    fn redundant_arcs_are_reduced() {
        let text = FIG1.replace("5 6\nend", "5 6\n1 6\n1 5\nend");
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst, parse_instance(FIG1).unwrap());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# demo\nalwabp 1   # version\n\ntasks 2\nworkers 1\ntimes\n3\n4 # second\nprecedences\n1 2\nend\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.edges(), &[(0, 1)]);
    }

    #[test]
    fn error_cases_carry_line_numbers() {
        let cases = [
            ("alwabp 2\n", 1, "header"),
            ("alwabp 1\ntasks 1\nworkers 0\n", 3, "worker"),
            ("alwabp 1\ntasks 1\nworkers 1\ntimes\ninf\n", 5, "no feasible worker"),
            ("alwabp 1\ntasks 1\nworkers 1\ntimes\n0\n", 5, "invalid time"),
            ("alwabp 1\ntasks 1\nworkers 2\ntimes\n1\n", 5, "has 1 times"),
            (
                "alwabp 1\ntasks 2\nworkers 1\ntimes\n1\n1\nprecedences\n1 2\n1 2\nend\n",
                9,
                "duplicate",
            ),
            (
                "alwabp 1\ntasks 2\nworkers 1\ntimes\n1\n1\nprecedences\n1 3\nend\n",
                8,
                "invalid task index",
            ),
            (
                "alwabp 1\ntasks 2\nworkers 1\ntimes\n1\n1\nprecedences\n1 1\nend\n",
                8,
                "cyclic",
            ),
            (
                "alwabp 1\ntasks 1\nworkers 1\ntimes\n1\nprecedences\n",
                7,
                "end of input",
            ),
            (
                "alwabp 1\ntasks 1\nworkers 1\ntimes\n1\nprecedences\nend\nextra\n",
                8,
                "after 'end'",
            ),
        ];
        for (text, line, needle) in cases {
            let err = parse_instance(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?} -> {err}");
            assert!(err.to_string().contains(needle), "{text:?} -> {err}");
        }
    }
}
