//! Text syntax for sequences and patterns.
//!
//! Tokens are whitespace-separated; `(a b c)` groups items into one itemset,
//! a bare token is a singleton, and a `!` prefix negates the itemset (patterns
//! only). Formatting is canonical: items sorted, singletons unparenthesized,
//! itemsets separated by single spaces.

use super::{Error, Item, Itemset, NegativePattern, Sequence};

#[derive(Debug, PartialEq)]
enum Token {
    Bang,
    Open,
    Close,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, Error> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '!' => {
                chars.next();
                // `!` binds to the next itemset, no space in between
                match chars.peek() {
                    Some(&c) if c == '(' || c.is_ascii_alphanumeric() || c == '_' => {}
                    _ => return Err(Error::DanglingNegation),
                }
                tokens.push(Token::Bang);
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            _ if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "!()".contains(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                // Item::new re-validates the charset and reports the token.
                if !word.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::InvalidToken(word));
                }
                tokens.push(Token::Word(word));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug)]
enum Element {
    Positive(Itemset),
    Negated(Itemset),
}

fn parse_elements(text: &str) -> Result<Vec<Element>, Error> {
    let tokens = tokenize(text)?;
    let mut elements = Vec::new();
    let mut iter = tokens.into_iter().peekable();
    while let Some(tok) = iter.next() {
        let (negated, tok) = match tok {
            Token::Bang => match iter.next() {
                Some(next @ (Token::Word(_) | Token::Open)) => (true, next),
                _ => return Err(Error::DanglingNegation),
            },
            other => (false, other),
        };
        let itemset = match tok {
            Token::Word(w) => Itemset::new([Item::new(w)?]),
            Token::Open => {
                let mut items = Vec::new();
                loop {
                    match iter.next() {
                        Some(Token::Word(w)) => items.push(Item::new(w)?),
                        Some(Token::Close) => break,
                        Some(Token::Open) => return Err(Error::NestedGroup),
                        Some(Token::Bang) => return Err(Error::InvalidToken("!".into())),
                        None => return Err(Error::UnbalancedParens),
                    }
                }
                if items.is_empty() {
                    return Err(Error::EmptyGroup);
                }
                Itemset::new(items)
            }
            Token::Close => return Err(Error::UnbalancedParens),
            Token::Bang => unreachable!("bang handled above"),
        };
        elements.push(if negated {
            Element::Negated(itemset)
        } else {
            Element::Positive(itemset)
        });
    }
    if elements.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(elements)
}

/// Parse one line of text as a sequence. Item order inside a group is
/// irrelevant and duplicates collapse.
pub fn parse_sequence(text: &str) -> Result<Sequence, Error> {
    let elements = parse_elements(text)?;
    let mut itemsets = Vec::with_capacity(elements.len());
    for el in elements {
        match el {
            Element::Positive(set) => itemsets.push(set),
            Element::Negated(_) => return Err(Error::NegationInSequence),
        }
    }
    Sequence::new(itemsets)
}

/// Parse a pattern with negation, e.g. `d !(a f) b`.
pub fn parse_pattern(text: &str) -> Result<NegativePattern, Error> {
    let elements = parse_elements(text)?;
    let mut positives: Vec<Itemset> = Vec::new();
    let mut negatives: Vec<Itemset> = Vec::new();
    let mut pending: Option<Itemset> = None;
    for el in elements {
        match el {
            Element::Positive(set) => {
                if !positives.is_empty() {
                    negatives.push(pending.take().unwrap_or_else(Itemset::empty));
                }
                positives.push(set);
            }
            Element::Negated(set) => {
                if positives.is_empty() {
                    return Err(Error::LeadingNegation);
                }
                if pending.is_some() {
                    return Err(Error::ConsecutiveNegations);
                }
                pending = Some(set);
            }
        }
    }
    if pending.is_some() {
        return Err(Error::TrailingNegation);
    }
    NegativePattern::new(positives, negatives)
}

fn push_itemset(out: &mut String, set: &Itemset) {
    if set.len() == 1 {
        out.push_str(set.items()[0].as_str());
    } else {
        out.push('(');
        for (i, item) in set.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(item.as_str());
        }
        out.push(')');
    }
}

/// Canonical text for a sequence (id not included).
pub fn format_sequence(s: &Sequence) -> String {
    let mut out = String::new();
    for (i, set) in s.itemsets().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_itemset(&mut out, set);
    }
    out
}

/// Canonical text for a pattern; empty negation slots are omitted.
pub fn format_pattern(p: &NegativePattern) -> String {
    let mut out = String::new();
    for (i, set) in p.positives().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_itemset(&mut out, set);
        if let Some(q) = p.negatives().get(i) {
            if !q.is_empty() {
                out.push_str(" !");
                push_itemset(&mut out, q);
            }
        }
    }
    out
}
