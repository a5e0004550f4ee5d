//! Reading terms back from their s-expression form.
//!
//! ```text
//! term ::= (one k) | (comp gen term) | (schur term term)
//! gen  ::= (N k j) | (A k i j) | (P k p1 .. pk) | (S k j (i ..))
//!        | (I k j) | (F k j) | (NS k j1 (i ..) j2)
//! ```
//!
//! Slot indices are 1-based. Generators are validated as they are read.

use graphon_wl_core::bilabeled::{Generator, Term};
use graphon_wl_core::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedDocument(msg.into())
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            if !c.is_whitespace() {
                tokens.push(c.to_string());
            }
        } else {
            current.push(c);
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
    let Some(tok) = tokens.get(*pos) else {
        return Err(malformed("unexpected end of input"));
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    None => return Err(malformed("unclosed parenthesis")),
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                }
            }
        }
        ")" => Err(malformed("unexpected ')'")),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

fn number(s: &Sexp) -> Result<usize> {
    match s {
        Sexp::Atom(a) => a.parse().map_err(|_| malformed(format!("expected a number, found {a:?}"))),
        Sexp::List(_) => Err(malformed("expected a number, found a list")),
    }
}

/// A 1-based slot converted to 0-based.
fn slot(s: &Sexp) -> Result<usize> {
    match number(s)? {
        0 => Err(Error::BadGeneratorIndex("slots are numbered from 1".into())),
        i => Ok(i - 1),
    }
}

fn slot_set(s: &Sexp) -> Result<Vec<usize>> {
    match s {
        Sexp::List(items) => items.iter().map(slot).collect(),
        Sexp::Atom(a) => Err(malformed(format!("expected a slot list, found {a:?}"))),
    }
}

fn head(items: &[Sexp]) -> Result<&str> {
    match items.first() {
        Some(Sexp::Atom(a)) => Ok(a),
        _ => Err(malformed("list must start with a keyword")),
    }
}

fn expect_len(items: &[Sexp], n: usize) -> Result<()> {
    if items.len() != n {
        return Err(malformed(format!("({} ..) takes {} arguments, found {}", head(items)?, n - 1, items.len() - 1)));
    }
    Ok(())
}

fn generator(s: &Sexp) -> Result<Generator> {
    let Sexp::List(items) = s else {
        return Err(malformed("expected a generator"));
    };
    let name = head(items)?;
    let g = match name {
        "N" | "I" | "F" => {
            expect_len(items, 3)?;
            let (k, j) = (number(&items[1])?, slot(&items[2])?);
            match name {
                "N" => Generator::Neighbor(k, j),
                "I" => Generator::Introduce(k, j),
                _ => Generator::Forget(k, j),
            }
        }
        "A" => {
            expect_len(items, 4)?;
            Generator::Adjacency(number(&items[1])?, slot(&items[2])?, slot(&items[3])?)
        }
        "P" => {
            if items.len() < 2 {
                return Err(malformed("(P k ..) needs k"));
            }
            let k = number(&items[1])?;
            let perm = items[2..].iter().map(slot).collect::<Result<Vec<_>>>()?;
            Generator::Permutation(k, perm)
        }
        "S" => {
            expect_len(items, 4)?;
            Generator::AdjNei(number(&items[1])?, slot(&items[2])?, slot_set(&items[3])?)
        }
        "NS" => {
            expect_len(items, 5)?;
            Generator::NonObliviousSimple(
                number(&items[1])?,
                slot(&items[2])?,
                slot_set(&items[3])?,
                slot(&items[4])?,
            )
        }
        other => return Err(malformed(format!("unknown generator {other:?}"))),
    };
    g.validate()?;
    Ok(g)
}

fn term(s: &Sexp) -> Result<Term> {
    let Sexp::List(items) = s else {
        return Err(malformed("expected a term"));
    };
    match head(items)? {
        "one" => {
            expect_len(items, 2)?;
            let k = number(&items[1])?;
            Generator::One(k).validate()?;
            Ok(Term::One(k))
        }
        "comp" => {
            expect_len(items, 3)?;
            Ok(Term::compose(generator(&items[1])?, term(&items[2])?))
        }
        "schur" => {
            expect_len(items, 3)?;
            Ok(Term::schur(term(&items[1])?, term(&items[2])?))
        }
        other => Err(malformed(format!("unknown term form {other:?}"))),
    }
}

/// Parses a term and checks that its arities fit together.
pub fn parse_term(text: &str) -> Result<Term> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let s = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(malformed("trailing input after term"));
    }
    let t = term(&s)?;
    t.arity()?;
    Ok(t)
}

pub fn parse_generator(text: &str) -> Result<Generator> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let s = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(malformed("trailing input after generator"));
    }
    generator(&s)
}
