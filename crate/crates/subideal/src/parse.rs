//! Text grammar for polynomials: terms joined by `+`/`-`, each term a
//! coefficient and/or `*`-separated variable powers with `^`.
//! Scalars are decimal literals or `p/q` rationals.
//! The printer in [`crate::poly`] round-trips through this parser.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Coeff;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && matches!(chars[i], '0'..='9' | '.' | '/') {
                    i += 1;
                }
                // Scientific exponent, as printed for small floats.
                if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && matches!(chars[j], '+' | '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j + 1;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                tokens.push(Token::Number(chars[start..i].iter().collect()));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            c => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(tokens)
}

/// Parses a polynomial over the given variable names.
pub fn parse_polynomial<C: Coeff>(input: &str, names: &[String]) -> Result<Polynomial<C>> {
    let nvars = names.len();
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let var_index = |name: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))
    };

    let mut terms: Vec<(Term, C)> = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        // Sign
        let mut neg = false;
        match &tokens[i] {
            Token::Plus => i += 1,
            Token::Minus => {
                neg = true;
                i += 1;
            }
            _ if first => {}
            t => return Err(Error::Parse(format!("expected `+` or `-`, got {t:?}"))),
        }
        first = false;
        // Factors
        let mut coeff = C::one();
        let mut exps = vec![0u32; nvars];
        let mut have_factor = false;
        loop {
            match tokens.get(i) {
                Some(Token::Number(s)) => {
                    let v = C::parse_scalar(s)
                        .ok_or_else(|| Error::Parse(format!("bad scalar `{s}`")))?;
                    coeff = coeff * v;
                    i += 1;
                }
                Some(Token::Ident(name)) => {
                    let vi = var_index(name)?;
                    i += 1;
                    let mut e: u32 = 1;
                    if let Some(Token::Caret) = tokens.get(i) {
                        i += 1;
                        match tokens.get(i) {
                            Some(Token::Number(s)) => {
                                e = s
                                    .parse()
                                    .map_err(|_| Error::Parse(format!("bad exponent `{s}`")))?;
                                i += 1;
                            }
                            t => {
                                return Err(Error::Parse(format!(
                                    "expected exponent after `^`, got {t:?}"
                                )))
                            }
                        }
                    }
                    exps[vi] += e;
                }
                _ => {
                    if !have_factor {
                        return Err(Error::Parse("expected a term".into()));
                    }
                    break;
                }
            }
            have_factor = true;
            // Optional `*` between factors; adjacency also accepted.
            if let Some(Token::Star) = tokens.get(i) {
                i += 1;
            } else if !matches!(tokens.get(i), Some(Token::Number(_)) | Some(Token::Ident(_))) {
                break;
            }
        }
        if neg {
            coeff = -coeff;
        }
        terms.push((Term::new(exps), coeff));
    }
    Ok(Polynomial::from_terms(nvars, terms))
}
