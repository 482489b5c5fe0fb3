//! Function spec files: line-oriented `key = value` with `#` comments.
//!
//! ```text
//! name = odd_mu
//! kind = rules
//! rules = p=2: 0; k=1: -1; otherwise: 0
//! prime_tail = finite:2
//! bounded = yes
//! ```
//!
//! Keys:
//! - `name`: label used in reports.
//! - `kind`: `builtin`, `rules` or `table`.
//! - `builtin`: a built-in name such as `mu`, `one`, `epsilon`, `id`,
//!   `reciprocal_id`, `liouville`, `squarefree` or `powers_of_<p>`.
//! - `rules` / `rule`: `pattern: expression` alternatives separated by `;`,
//!   first match wins. Patterns are comma-joined comparisons on `p` and `k`
//!   (`p=2, k>=2`) or `otherwise`. Expressions are rational arithmetic over
//!   `p` and `k` with `+ - * / ^` and parentheses.
//! - `row`: `n,value` for tables; unlisted indices are zero.
//! - `file`: a `n,value` CSV for tables, relative to the spec file.
//! - `prime_tail`: `none`, `finite:2|3`, `bound:<x>` or `divergent`; declares
//!   the primes where a multiplicative function vanishes.
//! - `bounded`: `yes`, `no` or `unknown`.
//! - `support_tail`: `finite`, `geometric:<r>`, `bound:<x>`, `divergent` or
//!   `unknown`; declares `Σ 1/n` over the support beyond the table.
//! - `weighted_tail`: the same forms for `Σ |f(n)|/n` beyond the table.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use nupair_core::arith::csv::parse_table;
use nupair_core::{builtins, ArithFunc, Boundedness, MultiplicativeSpec, PrimeTail, Rational, TailDeclaration};

use crate::expr::{parse_expr, parse_pattern, Expr, Pattern};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFileError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SpecFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for SpecFileError {}

fn err(line: usize, message: impl Into<String>) -> SpecFileError {
    SpecFileError { line, message: message.into() }
}

#[derive(Debug, Clone)]
pub enum Definition {
    Multiplicative(MultiplicativeSpec),
    /// A finitely supported table; indices past its end are zero.
    Table(ArithFunc),
}

#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub name: String,
    pub definition: Definition,
    pub support_tail: TailDeclaration,
    pub weighted_tail: TailDeclaration,
}

impl FunctionSpec {
    pub fn multiplicative(&self) -> Option<&MultiplicativeSpec> {
        match &self.definition {
            Definition::Multiplicative(m) => Some(m),
            Definition::Table(_) => None,
        }
    }

    /// Values on `[1, limit]`.
    pub fn tabulate(&self, limit: usize) -> nupair_core::Result<ArithFunc> {
        match &self.definition {
            Definition::Multiplicative(m) => m.tabulate(limit),
            Definition::Table(t) => {
                ArithFunc::from_fn(limit, |n| if n <= t.limit() { t.get(n).clone() } else { Rational::zero() })
            }
        }
    }
}

pub fn parse_prime_tail(s: &str) -> Result<PrimeTail, String> {
    let s = s.trim();
    match s {
        "none" => return Ok(PrimeTail::all_supported()),
        "divergent" => return Ok(PrimeTail::Divergent),
        _ => {}
    }
    if let Some(list) = s.strip_prefix("finite:") {
        let primes = list
            .split('|')
            .map(|p| p.trim().parse::<u64>().map_err(|_| format!("bad prime '{p}'")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(PrimeTail::Finite(primes));
    }
    if let Some(b) = s.strip_prefix("bound:") {
        return b.trim().parse().map(PrimeTail::ReciprocalSum).map_err(|_| format!("bad bound '{b}'"));
    }
    Err(format!("unknown prime tail '{s}'"))
}

pub fn parse_tail(s: &str) -> Result<TailDeclaration, String> {
    let s = s.trim();
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number '{v}'"));
    Ok(match s {
        "finite" => TailDeclaration::Finite,
        "divergent" => TailDeclaration::Divergent,
        "unknown" => TailDeclaration::Unknown,
        _ => {
            if let Some(r) = s.strip_prefix("geometric:") {
                TailDeclaration::Geometric(num(r)?)
            } else if let Some(b) = s.strip_prefix("bound:") {
                TailDeclaration::Bounded(num(b)?)
            } else {
                return Err(format!("unknown tail declaration '{s}'"));
            }
        }
    })
}

fn parse_rules(line: usize, src: &str, out: &mut Vec<(Pattern, Expr)>) -> Result<(), SpecFileError> {
    for alt in src.split(';').map(str::trim).filter(|a| !a.is_empty()) {
        let (pat, expr) = alt
            .split_once(':')
            .ok_or_else(|| err(line, format!("rule '{alt}' needs 'pattern: value'")))?;
        let pat = parse_pattern(pat).map_err(|m| err(line, m))?;
        let expr = parse_expr(expr).map_err(|m| err(line, m))?;
        out.push((pat, expr));
    }
    Ok(())
}

/// Parses spec text; `base_dir` resolves `file =` entries.
pub fn parse_spec(text: &str, base_dir: Option<&Path>) -> Result<FunctionSpec, SpecFileError> {
    let mut single: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut rules: Vec<(Pattern, Expr)> = Vec::new();
    let mut rows: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut first_rule_line = 0;
    let mut first_row_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(line, "expected 'key = value'"))?;
        match key {
            "rules" | "rule" => {
                first_rule_line = if first_rule_line == 0 { line } else { first_rule_line };
                parse_rules(line, value, &mut rules)?;
            }
            "row" => {
                first_row_line = if first_row_line == 0 { line } else { first_row_line };
                let (n, v) = value.split_once(',').ok_or_else(|| err(line, "row must be 'n,value'"))?;
                let n: usize = n.trim().parse().map_err(|_| err(line, format!("bad index '{n}'")))?;
                if n == 0 {
                    return Err(err(line, "indices start at 1"));
                }
                let v: Rational = v.trim().parse().map_err(|e| err(line, format!("{e}")))?;
                if rows.insert(n, v).is_some() {
                    return Err(err(line, format!("duplicate row {n}")));
                }
            }
            "name" | "kind" | "builtin" | "file" | "prime_tail" | "bounded" | "support_tail" | "weighted_tail" => {
                if single.insert(key.to_string(), (line, value.to_string())).is_some() {
                    return Err(err(line, format!("'{key}' given twice")));
                }
            }
            other => return Err(err(line, format!("unknown key '{other}'"))),
        }
    }

    let get = |k: &str| single.get(k).map(|(l, v)| (*l, v.as_str()));
    let (kind_line, kind) = get("kind").ok_or_else(|| err(0, "missing 'kind'"))?;
    let forbid = |present: bool, what: &str, line: usize| -> Result<(), SpecFileError> {
        if present {
            Err(err(line, format!("'{what}' does not apply to kind '{kind}'")))
        } else {
            Ok(())
        }
    };

    let mut name = get("name").map(|(_, v)| v.to_string());
    let mut support_default = TailDeclaration::Unknown;
    let definition = match kind {
        "builtin" => {
            forbid(!rules.is_empty(), "rules", first_rule_line)?;
            forbid(!rows.is_empty(), "row", first_row_line)?;
            forbid(get("file").is_some(), "file", get("file").map_or(0, |g| g.0))?;
            let (line, b) = get("builtin").ok_or_else(|| err(kind_line, "kind 'builtin' needs 'builtin ='"))?;
            let spec = builtins::by_name::<Rational>(b)
                .ok_or_else(|| err(line, format!("unknown builtin '{b}'")))?;
            if spec.name() == "epsilon" {
                support_default = TailDeclaration::Finite;
            }
            name.get_or_insert_with(|| spec.name().to_string());
            Definition::Multiplicative(spec)
        }
        "rules" => {
            forbid(!rows.is_empty(), "row", first_row_line)?;
            forbid(get("builtin").is_some(), "builtin", get("builtin").map_or(0, |g| g.0))?;
            forbid(get("file").is_some(), "file", get("file").map_or(0, |g| g.0))?;
            if rules.is_empty() {
                return Err(err(kind_line, "kind 'rules' needs at least one rule"));
            }
            let rule_name = name.clone().unwrap_or_else(|| "rules".into());
            Definition::Multiplicative(MultiplicativeSpec::new(rule_name, move |p, k| {
                rules
                    .iter()
                    .find(|(pat, _)| pat.matches(p, k))
                    .ok_or_else(|| "no rule covers this prime power".to_string())?
                    .1
                    .eval(p, k)
            }))
        }
        "table" => {
            forbid(!rules.is_empty(), "rules", first_rule_line)?;
            forbid(get("builtin").is_some(), "builtin", get("builtin").map_or(0, |g| g.0))?;
            for key in ["prime_tail", "bounded"] {
                forbid(get(key).is_some(), key, get(key).map_or(0, |g| g.0))?;
            }
            support_default = TailDeclaration::Finite;
            let mut values: Vec<Rational> = match get("file") {
                Some((line, path)) => {
                    let path = base_dir.map_or_else(|| Path::new(path).to_path_buf(), |d| d.join(path));
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| err(line, format!("{}: {e}", path.display())))?;
                    parse_table(&text)
                        .map_err(|e| err(line, format!("{}: {e}", path.display())))?
                        .into_values()
                }
                None => Vec::new(),
            };
            for (n, v) in rows {
                if values.len() < n {
                    values.resize(n, Rational::zero());
                }
                values[n - 1] = v;
            }
            if values.is_empty() {
                return Err(err(kind_line, "kind 'table' needs 'row' or 'file' entries"));
            }
            Definition::Table(ArithFunc::from_values(values).map_err(|e| err(kind_line, e.to_string()))?)
        }
        other => return Err(err(kind_line, format!("unknown kind '{other}'"))),
    };

    let definition = match definition {
        Definition::Multiplicative(mut m) => {
            if let Some((line, v)) = get("prime_tail") {
                m = m.with_prime_tail(parse_prime_tail(v).map_err(|e| err(line, e))?);
            }
            if let Some((line, v)) = get("bounded") {
                m = m.with_boundedness(match v {
                    "yes" => Boundedness::Bounded,
                    "no" => Boundedness::Unbounded,
                    "unknown" => Boundedness::Unknown,
                    _ => return Err(err(line, format!("bounded must be yes, no or unknown, not '{v}'"))),
                });
            }
            if let Some(n) = &name {
                m = m.with_name(n.clone());
            }
            Definition::Multiplicative(m)
        }
        t => t,
    };
    let tail = |key: &str, default| match get(key) {
        Some((line, v)) => parse_tail(v).map_err(|e| err(line, e)),
        None => Ok(default),
    };
    Ok(FunctionSpec {
        name: name.unwrap_or_else(|| "table".into()),
        support_tail: tail("support_tail", support_default)?,
        weighted_tail: tail("weighted_tail", support_default)?,
        definition,
    })
}

/// Loads a spec file, or resolves `builtin:NAME` without touching the disk.
pub fn load_spec(path: &Path) -> Result<FunctionSpec, SpecFileError> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return parse_spec(&format!("name = {name}\nkind = builtin\nbuiltin = {name}\n"), None)
            .map_err(|e| err(0, format!("builtin:{name}: {}", e.message)));
    }
    let text = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
    parse_spec(&text, path.parent()).map_err(|e| SpecFileError {
        line: e.line,
        message: if e.line == 0 {
            format!("{}: {}", path.display(), e.message)
        } else {
            format!("{} ({})", e.message, path.display())
        },
    })
}
