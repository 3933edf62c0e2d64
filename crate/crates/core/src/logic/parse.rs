//! Recursive-descent parser for the ASCII sentence syntax.
//!
//! Precedence from loosest to tightest: `->` (right associative), `|`, `&`,
//! then prefix operators (`~` and quantifiers), which bind tightly:
//! `Ex P(x) & Q(y)` is `(Ex P(x)) & Q(y)`. The Unicode forms `∃ ∀ ¬ ∧ ∨ → ≠`
//! and a bare `v` for disjunction are also accepted.

use thiserror::Error;

use super::ast::{CharLeaf, Fixpoint, Formula};
use crate::bits::Bits;
use crate::vocab::{is_relation_name, is_variable_name, MAX_ARITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    /// Consumes `tok` after optional whitespace.
    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    /// Reads `[A-Za-z_][A-Za-z0-9_]*` without skipping whitespace first.
    fn ident_here(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        (end > 0).then(|| {
            self.pos += end;
            &rest[..end]
        })
    }

    fn variable(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.ident_here() {
            Some(v) if is_variable_name(v) => Ok(v.to_string()),
            _ => {
                self.pos = start;
                Err(self.err("expected a variable"))
            }
        }
    }

    fn relation_name(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.ident_here() {
            Some(r) if is_relation_name(r) => Ok(r.to_string()),
            _ => {
                self.pos = start;
                Err(self.err("expected a relation name"))
            }
        }
    }

    fn number(&mut self) -> Result<usize, SyntaxError> {
        self.skip_ws();
        let digits: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        let v = digits.parse().map_err(|_| self.err("number too large"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn variables(&mut self) -> Result<Vec<String>, SyntaxError> {
        let mut out = vec![self.variable()?];
        while self.eat(",") {
            out.push(self.variable()?);
        }
        // closures bind two tuples at once
        if out.len() > 2 * MAX_ARITY {
            return Err(self.err("too many terms"));
        }
        Ok(out)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if self.eat("->") || self.eat("→") {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn at_or(&mut self) -> bool {
        if self.eat("|") || self.eat("∨") {
            return true;
        }
        // a lone `v` between two formulas
        let r = self.rest();
        if r.starts_with('v')
            && !r[1..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
            return true;
        }
        false
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while self.at_or() {
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat("&") || self.eat("∧") {
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        if self.eat("~") || self.eat("¬") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        for (sym, existential) in [("∃", true), ("∀", false)] {
            if self.eat(sym) {
                self.skip_ws();
                let start = self.pos;
                let name = self
                    .ident_here()
                    .ok_or_else(|| self.err("expected a variable"))?;
                return self.quantified(existential, name, start);
            }
        }
        let start = self.pos;
        if let Some(id) = self.ident_here() {
            let (head, tail) = id.split_at(1);
            if head == "E" || head == "A" {
                let existential = head == "E";
                let next = self.peek();
                if next == Some('(') {
                    // an atom over a relation named like a quantifier
                } else if !tail.is_empty() {
                    return self.quantified(existential, tail, start + 1);
                } else if next.is_some_and(char::is_whitespace) {
                    self.skip_ws();
                    let at = self.pos;
                    if let Some(name) = self.ident_here() {
                        return self.quantified(existential, name, at);
                    }
                }
            }
            self.pos = start;
        }
        self.primary()
    }

    /// Parses what follows a quantifier symbol: `x body` or `Q:arity body`.
    fn quantified(
        &mut self,
        existential: bool,
        name: &str,
        at: usize,
    ) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(':') {
            if !is_relation_name(name) {
                self.pos = at;
                return Err(self.err(format!("`{name}` is not a relation variable")));
            }
            self.pos += 1;
            let arity = self.number()?;
            if arity == 0 || arity > MAX_ARITY {
                return Err(self.err("relation variable arity out of range"));
            }
            let body = Box::new(self.unary()?);
            let rel = name.to_string();
            return Ok(if existential {
                Formula::ExistsSo { rel, arity, body }
            } else {
                Formula::ForallSo { rel, arity, body }
            });
        }
        if !is_variable_name(name) {
            self.pos = at;
            return Err(self.err(format!("`{name}` is not a variable")));
        }
        let body = Box::new(self.unary()?);
        Ok(if existential {
            Formula::Exists(name.to_string(), body)
        } else {
            Formula::Forall(name.to_string(), body)
        })
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        if self.eat("(") {
            let f = self.implication()?;
            self.expect(")")?;
            return Ok(f);
        }
        let start = self.pos;
        let Some(id) = self.ident_here() else {
            return Err(self.err("expected a formula"));
        };
        match id {
            "TC" => self.tc(),
            "LFP" | "PFP" => self.fixpoint(id == "LFP"),
            "BIT" => {
                self.expect("(")?;
                let a = self.variable()?;
                self.expect(",")?;
                let b = self.variable()?;
                self.expect(")")?;
                Ok(Formula::Bit(a, b))
            }
            "CHAR_ORD" | "CHAR_UNORD" | "COCHAR_UNORD" | "CHAR_NPCONP" | "CHAR_CFG" => {
                self.char_leaf(id, start)
            }
            _ if is_relation_name(id) => {
                self.expect("(")?;
                let at = self.pos;
                let args = self.variables()?;
                if args.len() > MAX_ARITY {
                    self.pos = at;
                    return Err(self.err("too many arguments"));
                }
                self.expect(")")?;
                Ok(Formula::Atom {
                    rel: id.to_string(),
                    args,
                })
            }
            _ if is_variable_name(id) => {
                let a = id.to_string();
                let op = if self.eat("!=") || self.eat("≠") {
                    2
                } else if self.eat("=") {
                    1
                } else if self.eat("<") {
                    3
                } else {
                    return Err(self.err("expected `=`, `!=` or `<`"));
                };
                let b = self.variable()?;
                Ok(match op {
                    1 => Formula::Eq(a, b),
                    2 => Formula::Neq(a, b),
                    _ => Formula::Lt(a, b),
                })
            }
            _ => {
                self.pos = start;
                Err(self.err(format!("unexpected `{id}`")))
            }
        }
    }

    fn tc(&mut self) -> Result<Formula, SyntaxError> {
        self.expect("[")?;
        let at = self.pos;
        let bound = self.variables()?;
        if bound.len() % 2 != 0 {
            self.pos = at;
            return Err(self.err("closure binds an even number of variables"));
        }
        self.expect(":")?;
        let body = Box::new(self.implication()?);
        self.expect("]")?;
        self.expect("(")?;
        let at = self.pos;
        let applied = self.variables()?;
        if applied.len() != bound.len() {
            self.pos = at;
            return Err(self.err("closure applied to the wrong number of terms"));
        }
        self.expect(")")?;
        let k = bound.len() / 2;
        let (from, to) = bound.split_at(k);
        let (src, dst) = applied.split_at(k);
        Ok(Formula::Tc {
            from: from.to_vec(),
            to: to.to_vec(),
            body,
            src: src.to_vec(),
            dst: dst.to_vec(),
        })
    }

    fn fixpoint(&mut self, least: bool) -> Result<Formula, SyntaxError> {
        self.expect("[")?;
        let rel = self.relation_name()?;
        self.expect(",")?;
        let at = self.pos;
        let vars = self.variables()?;
        if vars.len() > MAX_ARITY {
            self.pos = at;
            return Err(self.err("too many fixpoint variables"));
        }
        self.expect(":")?;
        let body = Box::new(self.implication()?);
        self.expect("]")?;
        self.expect("(")?;
        let at = self.pos;
        let args = self.variables()?;
        if args.len() != vars.len() {
            self.pos = at;
            return Err(self.err("fixpoint applied to the wrong number of terms"));
        }
        self.expect(")")?;
        let fp = Fixpoint {
            rel,
            vars,
            body,
            args,
        };
        Ok(if least {
            Formula::Lfp(fp)
        } else {
            Formula::Pfp(fp)
        })
    }

    fn char_leaf(&mut self, keyword: &str, start: usize) -> Result<Formula, SyntaxError> {
        self.expect("{")?;
        let mut payloads = Vec::new();
        loop {
            let len = self.number()?;
            self.expect(":")?;
            self.skip_ws();
            let hex: String = self
                .rest()
                .chars()
                .take_while(|c| c.is_ascii_hexdigit())
                .collect();
            let bits = Bits::from_hex(&hex, len).ok_or_else(|| self.err("bad hex payload"))?;
            self.pos += hex.len();
            payloads.push(bits);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        let leaf = CharLeaf::from_parts(keyword, payloads).ok_or_else(|| SyntaxError {
            pos: start,
            msg: format!("wrong number of payloads for {keyword}"),
        })?;
        crate::charsets::validate_leaf(&leaf).map_err(|e| SyntaxError {
            pos: start,
            msg: e.to_string(),
        })?;
        Ok(Formula::Char(leaf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse("Ex R(x)").unwrap(), exists("x", atom("R", &["x"])));
        assert_eq!(parse("∃x R(x)").unwrap(), exists("x", atom("R", &["x"])));
        let f = parse("EQ:2 Ax Ay (Q(x,y) -> Q(y,x))").unwrap();
        assert_eq!(
            f,
            exists_so(
                "Q",
                2,
                forall(
                    "x",
                    forall("y", implies(atom("Q", &["x", "y"]), atom("Q", &["y", "x"])))
                )
            )
        );
        let e = parse("Ex R(x").unwrap_err();
        assert_eq!(e.pos, 6);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("P(x) | Q(x) & R(x) -> S(x) -> T(x)").unwrap();
        let expect = implies(
            or(atom("P", &["x"]), and(atom("Q", &["x"]), atom("R", &["x"]))),
            implies(atom("S", &["x"]), atom("T", &["x"])),
        );
        assert_eq!(f, expect);
        assert_eq!(
            parse("Ex P(x) & Q(x)").unwrap(),
            and(exists("x", atom("P", &["x"])), atom("Q", &["x"]))
        );
        assert_eq!(
            parse("x = x | x = x | x = x").unwrap(),
            or(or(eq("x", "x"), eq("x", "x")), eq("x", "x"))
        );
    }

    #[test]
    fn lone_v_is_disjunction() {
        assert_eq!(
            parse("EQ:1 Ax (Q(x) v ~Q(x))").unwrap(),
            exists_so(
                "Q",
                1,
                forall("x", or(atom("Q", &["x"]), not(atom("Q", &["x"]))))
            )
        );
        // but a variable named v still works
        assert_eq!(parse("Ev v = v").unwrap(), exists("v", eq("v", "v")));
    }

    #[test]
    fn relations_named_like_quantifiers() {
        assert_eq!(parse("Ex(y)").unwrap(), atom("Ex", &["y"]));
        assert_eq!(
            parse("E x E(x,x)").unwrap(),
            exists("x", atom("E", &["x", "x"]))
        );
    }

    #[test]
    fn fixpoints() {
        let f = parse("TC[x,y: E(x,y)](a,b)").unwrap();
        assert!(matches!(f, Formula::Tc { ref from, .. } if from == &["x"]));
        let f = parse("LFP[P,x,y: (E(x,y) | Ez (P(x,z) & E(z,y)))](a,b)").unwrap();
        assert!(matches!(f, Formula::Lfp(ref fp) if fp.vars.len() == 2));
        assert!(parse("TC[x,y,z: E(x,y)](a,b,c)").is_err());
        assert!(parse("PFP[P,x: P(x)](a,b)").is_err());
    }

    #[test]
    fn rejects_junk() {
        for bad in [
            "",
            "Ex",
            "R()",
            "x",
            "x = ",
            "(x = x",
            "x = x)",
            "E1 x = x",
            "EQ:0 x = x",
        ] {
            assert!(parse(bad).is_err(), "{bad:?} parsed");
        }
    }
}
