//! Plain-text instance files.
//!
//! ```text
//! digraph n=3
//! arc 0 1
//! arc 1 2 w=0
//! family D {
//!   builder dicuts
//! }
//! family F {
//!   0 1
//!   0
//! }
//! fn f family=D builder=outdeg-minus:1
//! fn g family=F builder=table {
//!   set 0 1 = 2
//! }
//! ```
//!
//! Lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt;

use flipkit::setfam::{self, ValueRule};
use flipkit::{CrossingFamily, Digraph, SubmodularOracle, VertexSet};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyBuilder {
    Dicuts,
    AllProper,
    SingletonsComplements,
}

impl FamilyBuilder {
    fn keyword(self) -> &'static str {
        match self {
            FamilyBuilder::Dicuts => "dicuts",
            FamilyBuilder::AllProper => "all-proper",
            FamilyBuilder::SingletonsComplements => "singletons-complements",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [FamilyBuilder::Dicuts, FamilyBuilder::AllProper, FamilyBuilder::SingletonsComplements]
            .into_iter()
            .find(|b| b.keyword() == s)
    }
}

/// A family block: explicit members, or a builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Explicit(Vec<VertexSet>),
    Builder(FamilyBuilder),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnBuilder {
    OutdegMinus(i64),
    DicutSlack(i64),
    CeilHalfImbalance,
    Table(BTreeMap<VertexSet, i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnSpec {
    pub family: String,
    pub builder: FnBuilder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub digraph: Digraph,
    pub families: BTreeMap<String, FamilySpec>,
    pub functions: BTreeMap<String, FnSpec>,
}

fn err(line: usize, msg: impl fmt::Display) -> CliError {
    CliError::Parse(format!("line {line}: {msg}"))
}

fn parse_set(line: usize, words: &[&str], n: usize) -> Result<VertexSet, CliError> {
    let mut set = VertexSet::EMPTY;
    for w in words {
        let v: usize = w.parse().map_err(|_| err(line, format!("bad vertex id {w:?}")))?;
        if v >= n {
            return Err(err(line, format!("vertex {v} out of range (n={n})")));
        }
        set.insert(v);
    }
    Ok(set)
}

fn ident(line: usize, s: &str) -> Result<String, CliError> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(err(line, format!("bad name {s:?}")));
    }
    Ok(s.to_string())
}

fn key_value<'a>(line: usize, word: &'a str, key: &str) -> Result<&'a str, CliError> {
    word.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=..., found {word:?}")))
}

impl InstanceFile {
    pub fn from_digraph(digraph: Digraph) -> Self {
        InstanceFile {
            digraph,
            families: BTreeMap::new(),
            functions: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (first, header) = lines.next().ok_or_else(|| CliError::Parse("empty instance file".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        if words.len() != 2 || words[0] != "digraph" {
            return Err(err(first, "expected `digraph n=<int>`"));
        }
        let n: usize = key_value(first, words[1], "n")?
            .parse()
            .map_err(|_| err(first, "bad vertex count"))?;

        let mut arcs = Vec::new();
        let mut weights = Vec::new();
        let mut families = BTreeMap::new();
        let mut functions = BTreeMap::new();
        while let Some((no, line)) = lines.next() {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "arc" => {
                    if !(3..=4).contains(&words.len()) {
                        return Err(err(no, "expected `arc <tail> <head> [w=<0|1>]`"));
                    }
                    let t: usize = words[1].parse().map_err(|_| err(no, "bad tail"))?;
                    let h: usize = words[2].parse().map_err(|_| err(no, "bad head"))?;
                    let w: u8 = match words.get(3) {
                        Some(word) => key_value(no, word, "w")?.parse().map_err(|_| err(no, "bad weight"))?,
                        None => 1,
                    };
                    arcs.push((t, h));
                    weights.push(w);
                }
                "family" => {
                    if words.len() != 3 || words[2] != "{" {
                        return Err(err(no, "expected `family <name> {`"));
                    }
                    let name = ident(no, words[1])?;
                    let mut members = Vec::new();
                    let mut builder = None;
                    loop {
                        let (bno, body) = lines.next().ok_or_else(|| err(no, "unterminated family block"))?;
                        if body == "}" {
                            break;
                        }
                        let parts: Vec<&str> = body.split_whitespace().collect();
                        if parts[0] == "builder" {
                            if parts.len() != 2 || builder.is_some() || !members.is_empty() {
                                return Err(err(bno, "a family has either one builder or explicit members"));
                            }
                            builder = Some(FamilyBuilder::parse(parts[1]).ok_or_else(|| err(bno, format!("unknown family builder {:?}", parts[1])))?);
                        } else {
                            if builder.is_some() {
                                return Err(err(bno, "a family has either one builder or explicit members"));
                            }
                            members.push(parse_set(bno, &parts, n)?);
                        }
                    }
                    let spec = match builder {
                        Some(b) => FamilySpec::Builder(b),
                        None => FamilySpec::Explicit(members),
                    };
                    if families.insert(name.clone(), spec).is_some() {
                        return Err(err(no, format!("family {name} defined twice")));
                    }
                }
                "fn" => {
                    let has_block = words.last() == Some(&"{");
                    let body = if has_block { &words[..words.len() - 1] } else { &words[..] };
                    if body.len() != 4 {
                        return Err(err(no, "expected `fn <name> family=<fam> builder=<builder>`"));
                    }
                    let name = ident(no, body[1])?;
                    let family = ident(no, key_value(no, body[2], "family")?)?;
                    let spec = key_value(no, body[3], "builder")?;
                    let (kind, arg) = match spec.split_once(':') {
                        Some((k, a)) => (k, Some(a)),
                        None => (spec, None),
                    };
                    let int_arg = |a: Option<&str>| -> Result<i64, CliError> {
                        a.ok_or_else(|| err(no, format!("builder {kind} needs an integer argument")))?
                            .parse()
                            .map_err(|_| err(no, "bad builder argument"))
                    };
                    let builder = match kind {
                        "outdeg-minus" => FnBuilder::OutdegMinus(int_arg(arg)?),
                        "dicut-slack" => FnBuilder::DicutSlack(int_arg(arg)?),
                        "ceil-half-imbalance" if arg.is_none() => FnBuilder::CeilHalfImbalance,
                        "table" if arg.is_none() => FnBuilder::Table(BTreeMap::new()),
                        other => return Err(err(no, format!("unknown function builder {other:?}"))),
                    };
                    let builder = match builder {
                        FnBuilder::Table(mut rows) => {
                            if !has_block {
                                return Err(err(no, "table functions need a `{ ... }` block"));
                            }
                            loop {
                                let (bno, row) = lines.next().ok_or_else(|| err(no, "unterminated table block"))?;
                                if row == "}" {
                                    break;
                                }
                                let parts: Vec<&str> = row.split_whitespace().collect();
                                let eq = parts.iter().position(|&p| p == "=");
                                let (Some(eq), Some(&"set")) = (eq, parts.first()) else {
                                    return Err(err(bno, "expected `set <ids> = <int>`"));
                                };
                                if eq + 2 != parts.len() {
                                    return Err(err(bno, "expected `set <ids> = <int>`"));
                                }
                                let set = parse_set(bno, &parts[1..eq], n)?;
                                let value: i64 = parts[eq + 1].parse().map_err(|_| err(bno, "bad table value"))?;
                                if rows.insert(set, value).is_some() {
                                    return Err(err(bno, format!("set {set} listed twice")));
                                }
                            }
                            FnBuilder::Table(rows)
                        }
                        _ if has_block => return Err(err(no, format!("builder {spec} takes no block"))),
                        other => other,
                    };
                    if functions.insert(name.clone(), FnSpec { family, builder }).is_some() {
                        return Err(err(no, format!("function {name} defined twice")));
                    }
                }
                other => return Err(err(no, format!("unknown key {other:?}"))),
            }
        }
        let digraph = Digraph::with_weights(n, arcs, weights)?;
        let file = InstanceFile {
            digraph,
            families,
            functions,
        };
        for (name, spec) in &file.functions {
            if !file.families.contains_key(&spec.family) {
                return Err(CliError::Parse(format!("function {name} refers to unknown family {}", spec.family)));
            }
            file.oracle(name)?;
        }
        for name in file.families.keys() {
            file.family(name)?;
        }
        Ok(file)
    }

    pub fn family(&self, name: &str) -> Result<CrossingFamily, CliError> {
        let spec = self
            .families
            .get(name)
            .ok_or_else(|| CliError::Parse(format!("unknown family {name}")))?;
        let n = self.digraph.n();
        Ok(match spec {
            FamilySpec::Explicit(members) => CrossingFamily::explicit_checked(n, members.iter().copied())?,
            FamilySpec::Builder(FamilyBuilder::Dicuts) => setfam::dicut_family(&self.digraph)?,
            FamilySpec::Builder(FamilyBuilder::AllProper) => setfam::all_proper(n)?,
            FamilySpec::Builder(FamilyBuilder::SingletonsComplements) => setfam::singletons_and_complements(n)?,
        })
    }

    pub fn oracle(&self, name: &str) -> Result<SubmodularOracle, CliError> {
        let spec = self
            .functions
            .get(name)
            .ok_or_else(|| CliError::Parse(format!("unknown function {name}")))?;
        let family = self.family(&spec.family)?;
        let d = self.digraph.clone();
        let (rule, tag) = match &spec.builder {
            FnBuilder::OutdegMinus(k) => (ValueRule::OutdegMinus { digraph: d, offset: *k }, format!("outdeg-minus:{k}")),
            FnBuilder::DicutSlack(t) => (ValueRule::OutdegMinus { digraph: d, offset: *t }, format!("dicut-slack:{t}")),
            FnBuilder::CeilHalfImbalance => (ValueRule::CeilHalfImbalance { digraph: d }, "ceil-half-imbalance".into()),
            FnBuilder::Table(rows) => (ValueRule::Table(rows.clone()), "table".into()),
        };
        Ok(SubmodularOracle::new(family, rule, tag)?)
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: VertexSet) -> fmt::Result {
    for (i, v) in set.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digraph n={}", self.digraph.n())?;
        for (&(t, h), &w) in self.digraph.arcs().iter().zip(self.digraph.weights()) {
            if w == 1 {
                writeln!(f, "arc {t} {h}")?;
            } else {
                writeln!(f, "arc {t} {h} w={w}")?;
            }
        }
        for (name, spec) in &self.families {
            writeln!(f, "family {name} {{")?;
            match spec {
                FamilySpec::Builder(b) => writeln!(f, "  builder {}", b.keyword())?,
                FamilySpec::Explicit(members) => {
                    for &set in members {
                        write!(f, "  ")?;
                        write_set(f, set)?;
                        writeln!(f)?;
                    }
                }
            }
            writeln!(f, "}}")?;
        }
        for (name, spec) in &self.functions {
            write!(f, "fn {name} family={} builder=", spec.family)?;
            match &spec.builder {
                FnBuilder::OutdegMinus(k) => writeln!(f, "outdeg-minus:{k}")?,
                FnBuilder::DicutSlack(t) => writeln!(f, "dicut-slack:{t}")?,
                FnBuilder::CeilHalfImbalance => writeln!(f, "ceil-half-imbalance")?,
                FnBuilder::Table(rows) => {
                    writeln!(f, "table {{")?;
                    for (&set, value) in rows {
                        write!(f, "  set ")?;
                        write_set(f, set)?;
                        writeln!(f, " = {value}")?;
                    }
                    writeln!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}
