//! A small regular-expression engine over tag sequences.
//!
//! Patterns are written over space-terminated tag tokens, e.g. `(DT )?(JJ )*(NN )+`.
//! Each `TAG ` literal becomes one alphabet symbol, so matching runs over
//! whole tags rather than characters and a match can never split a tag.
//! `[c]` is a one-character class, used for the `$` in `PRP[$] `.
//! Supported operators: grouping, `|`, `*`, `+`, `?`.
//!
//! The pattern compiles to a Thompson NFA and then to a DFA by subset
//! construction. Tags outside the pattern's alphabet map to a symbol with no
//! transitions, so they always end a match.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Empty,
    Symbol(usize),
    Concat(Vec<Node>),
    Alt(Vec<Node>),
    Star(Box<Node>),
    Plus(Box<Node>),
    Optional(Box<Node>),
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pattern: &'a str,
    symbols: HashMap<String, usize>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::InvalidInput(format!(
            "tag pattern `{}`: {}",
            self.pattern,
            message.into()
        ))
    }

    fn alternation(&mut self) -> Result<Node> {
        let mut branches = vec![self.concatenation()?];
        while self.chars.peek() == Some(&'|') {
            self.chars.next();
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Node::Alt(branches)
        })
    }

    fn concatenation(&mut self) -> Result<Node> {
        let mut items = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.repetition()?);
        }
        Ok(match items.len() {
            0 => Node::Empty,
            1 => items.pop().unwrap(),
            _ => Node::Concat(items),
        })
    }

    fn repetition(&mut self) -> Result<Node> {
        let mut node = self.atom()?;
        while let Some(&c) = self.chars.peek() {
            node = match c {
                '*' => Node::Star(Box::new(node)),
                '+' => Node::Plus(Box::new(node)),
                '?' => Node::Optional(Box::new(node)),
                _ => break,
            };
            self.chars.next();
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let inner = self.alternation()?;
                if self.chars.next() != Some(')') {
                    return Err(self.error("unbalanced `(`"));
                }
                Ok(inner)
            }
            Some('*' | '+' | '?') => Err(self.error("repetition operator with nothing to repeat")),
            Some(_) => self.literal(),
            None => Err(self.error("unexpected end of pattern")),
        }
    }

    /// Reads one tag literal up to and including its terminating space.
    fn literal(&mut self) -> Result<Node> {
        let mut name = String::new();
        loop {
            match self.chars.next() {
                Some(' ') if !name.is_empty() => break,
                Some('[') => {
                    let c = self
                        .chars
                        .next()
                        .ok_or_else(|| self.error("unterminated `[`"))?;
                    if self.chars.next() != Some(']') {
                        return Err(self.error("only single-character classes are supported"));
                    }
                    name.push(c);
                }
                Some(c) if !"()|*+? ]".contains(c) => name.push(c),
                _ => {
                    return Err(self.error(format!("tag literal `{name}` must end with one space")))
                }
            }
        }
        let next = self.symbols.len();
        Ok(Node::Symbol(*self.symbols.entry(name).or_insert(next)))
    }
}

#[derive(Default)]
struct Nfa {
    epsilon: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.epsilon.push(Vec::new());
        self.moves.push(Vec::new());
        self.epsilon.len() - 1
    }

    /// Thompson construction; returns the fragment's (start, accept) states.
    fn build(&mut self, node: &Node) -> (usize, usize) {
        match node {
            Node::Empty => {
                let s = self.state();
                (s, s)
            }
            Node::Symbol(sym) => {
                let (s, e) = (self.state(), self.state());
                self.moves[s].push((*sym, e));
                (s, e)
            }
            Node::Concat(items) => {
                let (start, mut end) = self.build(&items[0]);
                for item in &items[1..] {
                    let (s, e) = self.build(item);
                    self.epsilon[end].push(s);
                    end = e;
                }
                (start, end)
            }
            Node::Alt(branches) => {
                let (s, e) = (self.state(), self.state());
                for branch in branches {
                    let (bs, be) = self.build(branch);
                    self.epsilon[s].push(bs);
                    self.epsilon[be].push(e);
                }
                (s, e)
            }
            Node::Star(inner) | Node::Plus(inner) | Node::Optional(inner) => {
                let (s, e) = (self.state(), self.state());
                let (is, ie) = self.build(inner);
                self.epsilon[s].push(is);
                self.epsilon[ie].push(e);
                if !matches!(node, Node::Plus(_)) {
                    self.epsilon[s].push(e);
                }
                if !matches!(node, Node::Optional(_)) {
                    self.epsilon[ie].push(is);
                }
                (s, e)
            }
        }
    }

    fn closure(&self, states: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let mut stack: Vec<usize> = states.into_iter().collect();
        while let Some(s) = stack.pop() {
            if set.insert(s) {
                stack.extend(&self.epsilon[s]);
            }
        }
        set
    }
}

const DEAD: u32 = u32::MAX;

/// A compiled tag-sequence pattern.
#[derive(Debug, Clone)]
pub struct TagPattern {
    symbols: HashMap<String, usize>,
    /// `transitions[state * alphabet + symbol]`; state 0 is the start state.
    transitions: Vec<u32>,
    accepting: Vec<bool>,
    alphabet: usize,
}

impl TagPattern {
    pub fn new(pattern: &str) -> Result<Self> {
        let mut parser = Parser {
            chars: pattern.chars().peekable(),
            pattern,
            symbols: HashMap::new(),
        };
        let ast = parser.alternation()?;
        if parser.chars.next().is_some() {
            return Err(parser.error("unbalanced `)`"));
        }
        let symbols = parser.symbols;
        let alphabet = symbols.len();

        let mut nfa = Nfa::default();
        let (start, accept) = nfa.build(&ast);

        let mut ids: HashMap<BTreeSet<usize>, u32> = HashMap::new();
        let mut queue = vec![nfa.closure([start])];
        ids.insert(queue[0].clone(), 0);
        let mut transitions = Vec::new();
        let mut accepting = Vec::new();
        let mut next = 0;
        while next < queue.len() {
            let set = queue[next].clone();
            next += 1;
            accepting.push(set.contains(&accept));
            for sym in 0..alphabet {
                let targets = set
                    .iter()
                    .flat_map(|&s| nfa.moves[s].iter())
                    .filter(|(m, _)| *m == sym)
                    .map(|&(_, t)| t);
                let target = nfa.closure(targets);
                if target.is_empty() {
                    transitions.push(DEAD);
                    continue;
                }
                let id = *ids.entry(target.clone()).or_insert_with(|| {
                    queue.push(target);
                    (queue.len() - 1) as u32
                });
                transitions.push(id);
            }
        }
        Ok(TagPattern {
            symbols,
            transitions,
            accepting,
            alphabet,
        })
    }

    /// Number of DFA states, for diagnostics.
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    fn symbol(&self, tag: &str) -> Option<usize> {
        self.symbols.get(tag).copied()
    }

    /// Length of the longest non-empty match starting at `start`, if any.
    pub fn longest_match_at<S: AsRef<str>>(&self, tags: &[S], start: usize) -> Option<usize> {
        let mut state = 0u32;
        let mut best = None;
        for (offset, tag) in tags[start..].iter().enumerate() {
            let Some(sym) = self.symbol(tag.as_ref()) else {
                break;
            };
            state = self.transitions[state as usize * self.alphabet + sym];
            if state == DEAD {
                break;
            }
            if self.accepting[state as usize] {
                best = Some(offset + 1);
            }
        }
        best
    }

    /// Leftmost-longest, non-overlapping, non-empty matches.
    pub fn find_all<S: AsRef<str>>(&self, tags: &[S]) -> Vec<Range<usize>> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < tags.len() {
            match self.longest_match_at(tags, i) {
                Some(len) => {
                    spans.push(i..i + len);
                    i += len;
                }
                None => i += 1,
            }
        }
        spans
    }

    /// Whether the whole sequence matches.
    pub fn matches<S: AsRef<str>>(&self, tags: &[S]) -> bool {
        if tags.is_empty() {
            return self.accepting[0];
        }
        self.longest_match_at(tags, 0) == Some(tags.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> TagPattern {
        TagPattern::new(s).unwrap()
    }

    #[test]
    fn literals_are_whole_tags() {
        let pat = p("(NN )+");
        assert!(pat.matches(&["NN", "NN"]));
        assert!(!pat.matches(&["NNS"]));
        assert!(!pat.matches(&["NN", "VB"]));
    }

    #[test]
    fn character_class_is_a_literal_character() {
        let pat = p("PRP[$] NN ");
        assert!(pat.matches(&["PRP$", "NN"]));
        assert!(!pat.matches(&["PRP", "NN"]));
    }

    #[test]
    fn operators() {
        let pat = p("(DT )?(JJ |, )*(NN |CD )+|PRP ");
        assert!(pat.matches(&["NN"]));
        assert!(pat.matches(&["DT", "JJ", ",", "JJ", "NN", "CD"]));
        assert!(pat.matches(&["PRP"]));
        assert!(!pat.matches(&["DT"]));
        assert!(!pat.matches(&["PRP", "NN"]));
        assert!(!pat.matches::<&str>(&[]));
    }

    #[test]
    fn leftmost_longest_not_first_alternative() {
        let pat = p("NN |NN NN NN ");
        assert_eq!(pat.find_all(&["NN", "NN", "NN", "NN"]), vec![0..3, 3..4]);
    }

    #[test]
    fn empty_matches_are_skipped() {
        let pat = p("(NN )*");
        assert_eq!(pat.find_all(&["VB", "NN", "NN", "VB"]), vec![1..3]);
    }

    #[test]
    fn malformed_patterns_are_rejected() {
        for bad in ["(NN ", "NN )", "NN", "*NN ", "[$$] ", "(NN|VB )"] {
            assert!(TagPattern::new(bad).is_err(), "{bad}");
        }
    }
}
