//! Line-oriented text format for Hamiltonians and extension plans.
//!
//! ```text
//! # comment
//! size 3
//! hermitian true
//! label 1 left
//! meta source path
//! onsite 2 1/2
//! entry 1 2 1
//! entry 2 3 1
//! ```
//!
//! Sites are one-based. `entry i j v` sets `H[i][j]`; with `hermitian true`
//! the mirror entry is filled in, and an explicit mirror must agree.
//! `row i v₁ … v_N` gives a dense row instead. Values are exact rationals
//! (`3`, `-2/7`, `0.25`). Unlisted entries are zero.
//!
//! Extension plans use `onsite v` and `couple h i,j,k` lines.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::scalar::{format_scalar, parse_scalar};
use crate::exact::{Matrix, Scalar};
use crate::hamiltonian::Hamiltonian;
use crate::multiplets::ExtensionPlan;

#[derive(Clone, Debug, PartialEq)]
pub struct GraphDocument {
    pub hamiltonian: Hamiltonian,
    pub hermitian: bool,
    pub meta: Vec<(String, String)>,
}

impl GraphDocument {
    pub fn new(hamiltonian: Hamiltonian) -> Self {
        GraphDocument {
            hermitian: hamiltonian.is_symmetric(),
            hamiltonian,
            meta: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.push((key.into(), value.into()));
        self
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("line {line}: {msg}"))
}

fn site(line: usize, tok: &str, size: Option<usize>) -> Result<usize> {
    let n = size.ok_or_else(|| err(line, "`size` must come first"))?;
    let i: usize = tok.parse().map_err(|_| err(line, format!("bad site {tok:?}")))?;
    if i == 0 || i > n {
        return Err(err(line, format!("site {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

fn value(line: usize, tok: &str) -> Result<Scalar> {
    parse_scalar(tok).map_err(|e| err(line, e))
}

pub fn parse(text: &str) -> Result<GraphDocument> {
    let mut size: Option<usize> = None;
    let mut hermitian = false;
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    let mut meta = Vec::new();
    // (i, j) → (value, line)
    let mut explicit: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    let mut set = |line: usize, i: usize, j: usize, v: Scalar| -> Result<()> {
        match explicit.get(&(i, j)) {
            Some(old) if *old != v => Err(err(
                line,
                format!("conflicting values for ({}, {})", i + 1, j + 1),
            )),
            _ => {
                explicit.insert((i, j), v);
                Ok(())
            }
        }
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "size" => {
                if toks.len() != 2 || size.is_some() {
                    return Err(err(line, "expected a single `size N`"));
                }
                let n: usize = toks[1].parse().map_err(|_| err(line, "bad size"))?;
                if n == 0 {
                    return Err(err(line, "size must be positive"));
                }
                size = Some(n);
            }
            "hermitian" => {
                hermitian = match toks.get(1).copied() {
                    Some("true") => true,
                    Some("false") => false,
                    _ => return Err(err(line, "expected `hermitian true|false`")),
                };
            }
            "label" => {
                if toks.len() < 3 {
                    return Err(err(line, "expected `label i text`"));
                }
                labels.insert(site(line, toks[1], size)?, toks[2..].join(" "));
            }
            "meta" => {
                if toks.len() < 2 {
                    return Err(err(line, "expected `meta key value`"));
                }
                meta.push((toks[1].to_string(), toks[2..].join(" ")));
            }
            "onsite" => {
                if toks.len() != 3 {
                    return Err(err(line, "expected `onsite i v`"));
                }
                let i = site(line, toks[1], size)?;
                set(line, i, i, value(line, toks[2])?)?;
            }
            "entry" => {
                if toks.len() != 4 {
                    return Err(err(line, "expected `entry i j v`"));
                }
                let i = site(line, toks[1], size)?;
                let j = site(line, toks[2], size)?;
                set(line, i, j, value(line, toks[3])?)?;
            }
            "row" => {
                let i = site(line, toks.get(1).copied().unwrap_or(""), size)?;
                let n = size.expect("checked by site()");
                if toks.len() - 2 != n {
                    return Err(err(
                        line,
                        format!("row has {} entries but size is {n}; matrix is not square", toks.len() - 2),
                    ));
                }
                for (j, tok) in toks[2..].iter().enumerate() {
                    set(line, i, j, value(line, tok)?)?;
                }
            }
            other => return Err(err(line, format!("unknown keyword {other:?}"))),
        }
    }
    let n = size.ok_or_else(|| Error::Input("missing `size`".into()))?;
    let mut m = Matrix::<Scalar>::zeros(n, n);
    for ((i, j), v) in &explicit {
        m[(*i, *j)] = v.clone();
    }
    if hermitian {
        for ((i, j), v) in &explicit {
            match explicit.get(&(*j, *i)) {
                Some(w) if w != v => {
                    return Err(Error::Input(format!(
                        "marked hermitian but H[{}][{}] ≠ H[{}][{}]",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )))
                }
                Some(_) => {}
                None => m[(*j, *i)] = v.clone(),
            }
        }
    }
    let mut h = Hamiltonian::new(m)?;
    if !labels.is_empty() {
        let all: Vec<String> = (0..n)
            .map(|i| labels.get(&i).cloned().unwrap_or_else(|| (i + 1).to_string()))
            .collect();
        h = h.with_labels(all)?;
    }
    Ok(GraphDocument { hamiltonian: h, hermitian, meta })
}

pub fn render(doc: &GraphDocument) -> String {
    let h = &doc.hamiltonian;
    let n = h.size();
    let mut out = format!("size {n}\nhermitian {}\n", doc.hermitian);
    if let Some(labels) = h.labels() {
        for (i, l) in labels.iter().enumerate() {
            out += &format!("label {} {l}\n", i + 1);
        }
    }
    for (k, v) in &doc.meta {
        out += &format!("meta {k} {v}\n");
    }
    for i in 0..n {
        if !h.get(i, i).is_zero() {
            out += &format!("onsite {} {}\n", i + 1, format_scalar(h.get(i, i)));
        }
    }
    for i in 0..n {
        let start = if doc.hermitian { i + 1 } else { 0 };
        for j in start..n {
            if i != j && !h.get(i, j).is_zero() {
                out += &format!("entry {} {} {}\n", i + 1, j + 1, format_scalar(h.get(i, j)));
            }
        }
    }
    out
}

pub fn load(path: &Path) -> Result<GraphDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save(doc: &GraphDocument, path: &Path) -> Result<()> {
    std::fs::write(path, render(doc)).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

/// Parses `onsite v` and `couple h i,j,…` lines. Sites are one-based.
pub fn parse_plan(text: &str) -> Result<ExtensionPlan> {
    let mut plan = ExtensionPlan::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match (toks[0], toks.len()) {
            ("onsite", 2) => plan.onsite = value(line, toks[1])?,
            ("couple", 3) => {
                let sites = toks[2]
                    .split(',')
                    .map(|t| match t.trim().parse::<usize>() {
                        Ok(i) if i > 0 => Ok(i - 1),
                        _ => Err(err(line, format!("bad site {t:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                plan.couplings.push((sites, value(line, toks[1])?));
            }
            _ => return Err(err(line, "expected `onsite v` or `couple h i,j,…`")),
        }
    }
    Ok(plan)
}

pub fn render_plan(plan: &ExtensionPlan) -> String {
    let mut out = format!("onsite {}\n", format_scalar(&plan.onsite));
    for (sites, h) in &plan.couplings {
        let list: Vec<String> = sites.iter().map(|s| (s + 1).to_string()).collect();
        out += &format!("couple {} {}\n", format_scalar(h), list.join(","));
    }
    out
}
