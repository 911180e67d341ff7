//! Predicate grammar for sampled events: conjunctions of comparisons on
//! cycle-count symbols.
//!
//!   expr  := cmp ('&' cmp)*
//!   cmp   := atom op integer
//!   atom  := 'C[' j ']' | 'C[' a '-' b ']' | 'Ctotal'
//!   op    := '=' | '!=' | '<=' | '>=' | '<' | '>'
//!
//! Examples: `C[1]=0`, `C[1]=0 & Ctotal>=3`, `C[2-5]>1`.

use cycletype::CycleType;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom {
    Single(usize),
    Range(usize, usize),
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Comparison {
    atom: Atom,
    op: Op,
    value: usize,
}

/// A parsed event predicate over cycle types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventExpr {
    terms: Vec<Comparison>,
    source: String,
}

impl EventExpr {
    pub fn parse(input: &str) -> Result<Self, String> {
        let mut terms = Vec::new();
        for raw in input.split('&') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(format!("empty term in event '{input}'"));
            }
            terms.push(parse_comparison(term)?);
        }
        Ok(EventExpr {
            terms,
            source: input.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, t: &CycleType) -> bool {
        self.terms.iter().all(|c| {
            let lhs = match c.atom {
                Atom::Single(j) => t.multiplicity(j),
                Atom::Range(a, b) => t.count_in_range(a, b),
                Atom::Total => t.total_cycles(),
            };
            match c.op {
                Op::Eq => lhs == c.value,
                Op::Ne => lhs != c.value,
                Op::Le => lhs <= c.value,
                Op::Ge => lhs >= c.value,
                Op::Lt => lhs < c.value,
                Op::Gt => lhs > c.value,
            }
        })
    }
}

fn parse_comparison(term: &str) -> Result<Comparison, String> {
    // operator: two-character forms first
    let ops = [
        ("<=", Op::Le),
        (">=", Op::Ge),
        ("!=", Op::Ne),
        ("<", Op::Lt),
        (">", Op::Gt),
        ("=", Op::Eq),
    ];
    for (sym, op) in ops {
        if let Some(pos) = term.find(sym) {
            let (lhs, rhs) = term.split_at(pos);
            let rhs = &rhs[sym.len()..];
            let atom = parse_atom(lhs.trim())?;
            let value: usize = rhs
                .trim()
                .parse()
                .map_err(|_| format!("bad comparison value '{}' in '{term}'", rhs.trim()))?;
            return Ok(Comparison { atom, op, value });
        }
    }
    Err(format!("no comparison operator in '{term}'"))
}

fn parse_atom(s: &str) -> Result<Atom, String> {
    if s == "Ctotal" {
        return Ok(Atom::Total);
    }
    let inner = s
        .strip_prefix("C[")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| format!("bad count symbol '{s}' (expected C[j], C[a-b] or Ctotal)"))?;
    match inner.split_once('-') {
        Some((a, b)) => {
            let lo: usize = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in '{s}'"))?;
            let hi: usize = b
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in '{s}'"))?;
            if lo == 0 || lo > hi {
                return Err(format!("bad range '{s}'"));
            }
            Ok(Atom::Range(lo, hi))
        }
        None => {
            let j: usize = inner
                .trim()
                .parse()
                .map_err(|_| format!("bad cycle length in '{s}'"))?;
            if j == 0 {
                return Err(format!("cycle length must be positive in '{s}'"));
            }
            Ok(Atom::Single(j))
        }
    }
}
