//! Text format for expressions.
//!
//! ```text
//! group s4 vars 2
//! x0 g5 X0 x1
//! ```
//!
//! `g<i>` is the constant with element index `i`, `x<i>` a variable and
//! `X<i>` its inverse. Tokens are separated by any whitespace.

use std::io::{BufRead, Write};

use super::{Expression, Term, Token, VarId};
use crate::error::{input, Error, Result};
use crate::group::Group;

pub fn token_str(t: Token) -> String {
    match t {
        Token::Const(c) => format!("g{c}"),
        Token::Var(v) => format!("x{}", v.0),
        Token::InvVar(v) => format!("X{}", v.0),
    }
}

pub fn parse_token(s: &str) -> Result<Token> {
    let bad = || Error::Input(format!("bad token {s:?}"));
    let (kind, num) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
    let n: u32 = num.parse().map_err(|_| bad())?;
    match kind {
        "g" => Ok(Token::Const(n as usize)),
        "x" => Ok(Token::Var(VarId(n))),
        "X" => Ok(Token::InvVar(VarId(n))),
        _ => Err(bad()),
    }
}

/// Header fields of an expression file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub group: String,
    pub vars: u32,
}

fn parse_header(line: &str) -> Result<Header> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        ["group", name, "vars", n] => Ok(Header {
            group: (*name).to_string(),
            vars: n.parse().map_err(|_| Error::Input(format!("bad var count {n:?}")))?,
        }),
        _ => input(format!("expected `group <name> vars <n>`, got {line:?}")),
    }
}

pub fn read_expression(reader: impl BufRead) -> Result<(Header, Expression)> {
    let mut lines = reader.lines();
    let header = loop {
        match lines.next() {
            None => return input("empty expression file"),
            Some(line) => {
                let line = line?;
                let line = line.trim();
                if !line.is_empty() && !line.starts_with('#') {
                    break parse_header(line)?;
                }
            }
        }
    };
    let mut tokens = Vec::new();
    for line in lines {
        for item in line?.split_whitespace() {
            tokens.push(parse_token(item)?);
        }
    }
    let e = Expression::new(tokens, header.vars)?;
    Ok((header, e))
}

pub fn parse_expression(text: &str) -> Result<(Header, Expression)> {
    read_expression(text.as_bytes())
}

pub fn write_expression(out: &mut dyn Write, group: &str, e: &Expression) -> std::io::Result<()> {
    writeln!(out, "group {group} vars {}", e.var_count())?;
    for (i, &t) in e.tokens().iter().enumerate() {
        let sep = if i % 32 == 31 { "\n" } else { " " };
        write!(out, "{}{sep}", token_str(t))?;
    }
    writeln!(out)
}

/// Streams a term in the same format without flattening it in memory.
pub fn write_term(out: &mut dyn Write, group: &str, g: &Group, t: &Term) -> std::io::Result<()> {
    writeln!(out, "group {group} vars {}", t.var_bound())?;
    t.write_tokens(g, out)
}
