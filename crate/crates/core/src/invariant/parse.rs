//! Text syntax for monomials: `tr(1,1,2)*tr(3,3,3)`.

use super::monomial::{Color, InvariantMonomial};
use crate::error::{Error, Result};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { location: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn color(&mut self) -> Result<Color> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected a color"));
        }
        self.pos += digits;
        self.text[start..self.pos].parse::<Color>().map_err(|_| Error::Parse {
            location: start,
            message: "color out of range".into(),
        })
    }

    fn color_list(&mut self) -> Result<Vec<Color>> {
        let mut letters = vec![self.color()?];
        while self.eat(",") {
            letters.push(self.color()?);
        }
        Ok(letters)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

/// Parse a product of traces over colors `1..=p`.
pub fn parse_monomial(text: &str, p: usize) -> Result<InvariantMonomial> {
    let mut cur = Cursor { text, pos: 0 };
    let mut words = Vec::new();
    loop {
        cur.expect("tr")?;
        cur.expect("(")?;
        let at = cur.pos;
        let letters = cur.color_list()?;
        if let Some(&c) = letters.iter().find(|&&c| c == 0 || c as usize > p) {
            return Err(Error::Parse { location: at, message: format!("color {c} outside 1..={p}") });
        }
        words.push(letters);
        cur.expect(")")?;
        if cur.at_end() {
            break;
        }
        cur.expect("*")?;
    }
    InvariantMonomial::canonicalize(&words, p)
}

/// Parse an open word written as comma-separated colors, e.g. `1,2,2`.
/// The empty string is the empty word.
pub fn parse_word(text: &str, p: usize) -> Result<Vec<Color>> {
    let mut cur = Cursor { text, pos: 0 };
    if cur.at_end() {
        return Ok(Vec::new());
    }
    let letters = cur.color_list()?;
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }
    if let Some(&c) = letters.iter().find(|&&c| c == 0 || c as usize > p) {
        return Err(Error::Parse { location: 0, message: format!("color {c} outside 1..={p}") });
    }
    Ok(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_traces() {
        let q = parse_monomial("tr(1,1,2)*tr(3,3,3)", 3).unwrap();
        assert_eq!(q.to_string(), "tr(1,1,2)*tr(3,3,3)");
        let r = parse_monomial(" tr( 3,3,3 ) * tr(2,1,1)", 3).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn errors_carry_location() {
        match parse_monomial("tr(1,1,2)*tr(3,,3)", 3) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, 15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_monomial("tr(1,2", 2), Err(Error::Parse { location: 6, .. })));
        assert!(matches!(parse_monomial("tr(1,5)", 2), Err(Error::Parse { location: 3, .. })));
        assert!(matches!(parse_monomial("tr(1)tr(2)", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn open_words() {
        assert_eq!(parse_word("1, 2,2", 2).unwrap(), vec![1, 2, 2]);
        assert!(parse_word("", 2).unwrap().is_empty());
        assert!(parse_word("1;2", 2).is_err());
    }
}
