//! Text forms of exponent sets and exponent lists.
//!
//! ```text
//! box d=2 k=[1,3] deg<=3
//! set d=2 {(1,0),(0,1),(1,1)}
//! set d=1 {1,2,3}
//! ```

use decoupling::lattice::{BoxSpec, ExponentSet, MultiIndex};
use decoupling::rational::{parse_q, Rational};

/// A parsed set literal, remembering whether it was given as a box.
#[derive(Clone, Debug)]
pub enum SetLiteral {
    Box(BoxSpec),
    Explicit(ExponentSet),
}

impl SetLiteral {
    pub fn set(&self) -> ExponentSet {
        match self {
            SetLiteral::Box(b) => b.set(),
            SetLiteral::Explicit(s) => s.clone(),
        }
    }
}

fn parse_uint(text: &str, what: &str) -> Result<u32, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("expected a non-negative integer for {what}, got {:?}", text.trim()))
}

fn take_dim(text: &str) -> Result<(usize, &str), String> {
    let rest = text
        .trim_start()
        .strip_prefix("d=")
        .ok_or_else(|| format!("expected d=<dimension> in {text:?}"))?;
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let d = parse_uint(&rest[..end], "d")? as usize;
    Ok((d, &rest[end..]))
}

/// `[d=N] k=[a,b,...] deg<=M`, with or without a leading `box`.
pub fn parse_box(text: &str) -> Result<BoxSpec, String> {
    let body = text.trim();
    let body = body.strip_prefix("box").unwrap_or(body);
    let (d, rest) = take_dim(body)?;
    let rest = rest
        .trim_start()
        .strip_prefix("k=[")
        .ok_or_else(|| format!("expected k=[...] in box literal {text:?}"))?;
    let close = rest
        .find(']')
        .ok_or_else(|| format!("unclosed k=[ in box literal {text:?}"))?;
    let caps = rest[..close]
        .split(',')
        .map(|c| parse_uint(c, "a cap"))
        .collect::<Result<Vec<_>, _>>()?;
    if caps.len() != d {
        return Err(format!("box literal has d={d} but {} caps", caps.len()));
    }
    let deg = rest[close + 1..]
        .trim()
        .strip_prefix("deg<=")
        .ok_or_else(|| format!("expected deg<=N in box literal {text:?}"))?;
    BoxSpec::new(caps, parse_uint(deg, "deg")?).map_err(|e| e.to_string())
}

fn parse_element(text: &str, d: usize) -> Result<MultiIndex, String> {
    let t = text.trim();
    let entries = match t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(inner) => inner
            .split(',')
            .map(|c| parse_uint(c, "an exponent"))
            .collect::<Result<Vec<_>, _>>()?,
        None if d == 1 => vec![parse_uint(t, "an exponent")?],
        None => return Err(format!("expected a tuple like (1,0), got {t:?}")),
    };
    if entries.len() != d {
        return Err(format!("element {t} has {} entries, expected {d}", entries.len()));
    }
    Ok(MultiIndex::new(entries))
}

/// `set d=N {(..),(..)}`.
pub fn parse_explicit(text: &str) -> Result<ExponentSet, String> {
    let body = text
        .trim()
        .strip_prefix("set")
        .ok_or_else(|| format!("expected a literal starting with set, got {text:?}"))?;
    let (d, rest) = take_dim(body)?;
    let inner = rest
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected {{...}} in set literal {text:?}"))?;
    let mut elements = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                elements.push(parse_element(&inner[start..i], d)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !inner[start..].trim().is_empty() {
        elements.push(parse_element(&inner[start..], d)?);
    } else if !elements.is_empty() {
        return Err(format!("trailing comma in set literal {text:?}"));
    }
    ExponentSet::from_elements(d, elements).map_err(|e| e.to_string())
}

/// Either literal form.
pub fn parse_set(text: &str) -> Result<SetLiteral, String> {
    if text.trim_start().starts_with("set") {
        parse_explicit(text).map(SetLiteral::Explicit)
    } else {
        parse_box(text).map(SetLiteral::Box)
    }
}

/// An exponent `p >= 2`.
pub fn parse_p(text: &str) -> Result<Rational, String> {
    let p = parse_q(text).map_err(|e| e.to_string())?;
    if p < Rational::from_integer(2.into()) {
        return Err(format!("p must be at least 2, got {}", text.trim()));
    }
    Ok(p)
}

/// Comma-separated exponents.
pub fn parse_p_list(text: &str) -> Result<Vec<Rational>, String> {
    text.split(',').map(parse_p).collect()
}
