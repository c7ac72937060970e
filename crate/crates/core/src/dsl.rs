//! Text syntax for groups, elements, coefficients, fields, series and cuts.
//!
//! ```text
//! group   := "0" | "Z" | "Q" | "loc" "{" primes "}" | "lex" "(" group {"," group} ")"
//!          | "omega" "(" rule ")" | "omegaplus1" "(" rule "," group ")"
//! primes  := prime {"," prime} | ">=" prime
//! rule    := "const" "(" group ")" | "prefixprimes" ["(" nat ")"]
//! element := "{" [index ":" rational {"," index ":" rational}] "}"
//! index   := nat | "top"
//! field   := "Q" | "Q" "(" "sqrt" "(" nat ")" ")" | "RC" ["(" field ")"]
//! expr    := ["-"] term {("+" | "-") term}
//! term    := factor {"*" factor}
//! factor  := rational | "sqrt" "(" nat ")" | "t^(" element ")" | "(" expr ")"
//! cut     := ["group"] element | ["residue"] expr
//! ```
//!
//! Whitespace is ignored between tokens. Every error carries the byte offset
//! at which parsing failed.

use crate::defval::CutPoint;
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, HullElement, Index, PrimeSet, RationalSubgroup, Rule};
use crate::numeric::{QuadExt, Rational};
use crate::series::{CoefficientField, Series};

use num_bigint::BigInt;
use num_traits::{One, Zero};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type Terms = Vec<(QuadExt, HullElement)>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos, msg))
    }

    fn err_at<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(pos, msg))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected '{tok}'"))
        }
    }

    /// Consumes an identifier if the next word is exactly `word`.
    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        if &r[..end] == word {
            self.pos += end;
            true
        } else {
            false
        }
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return self.err("expected a natural number");
        }
        let v = r[..len]
            .parse::<u64>()
            .or_else(|_| self.err("number out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return self.err("expected a number");
        }
        let v: BigInt = r[..len].parse().expect("digits parse");
        self.pos += len;
        Ok(v)
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = self.eat("-");
        let n = self.bigint()?;
        let d = if self.eat("/") {
            let at = self.pos;
            let d = self.bigint()?;
            if d.is_zero() {
                return self.err_at(at, "zero denominator");
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn prime(&mut self) -> Result<u64> {
        let at = self.pos;
        let p = self.nat()?;
        if !crate::numeric::is_prime(p) {
            return self.err_at(at, format!("{p} is not prime"));
        }
        Ok(p)
    }

    fn subgroup(&mut self) -> Result<Option<RationalSubgroup>> {
        if self.eat_word("Z") {
            return Ok(Some(RationalSubgroup::integers()));
        }
        if self.eat_word("Q") {
            return Ok(Some(RationalSubgroup::rationals()));
        }
        if !self.eat_word("loc") {
            return Ok(None);
        }
        self.expect("{")?;
        let allowed = if self.eat(">=") {
            PrimeSet::at_least(self.prime()?)?
        } else {
            let mut ps = vec![self.prime()?];
            while self.eat(",") {
                ps.push(self.prime()?);
            }
            PrimeSet::finite(ps)?
        };
        self.expect("}")?;
        Ok(Some(RationalSubgroup { allowed }))
    }

    fn leaf(&mut self) -> Result<RationalSubgroup> {
        let at = self.pos;
        match self.subgroup()? {
            Some(c) => Ok(c),
            None => self.err_at(at, "expected a subgroup of Q (Z, Q or loc{...})"),
        }
    }

    fn group(&mut self) -> Result<GroupDescriptor> {
        self.skip_ws();
        let at = self.pos;
        if let Some(c) = self.subgroup()? {
            return Ok(GroupDescriptor::single(c));
        }
        if self.eat_word("lex") {
            self.expect("(")?;
            let mut cs = Vec::new();
            loop {
                self.skip_ws();
                let item = self.pos;
                match self.group()? {
                    GroupDescriptor::FiniteLex(inner) if !inner.is_empty() => cs.extend(inner),
                    _ => return self.err_at(item, "lex components must be finite lex sums"),
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            return Ok(GroupDescriptor::FiniteLex(cs));
        }
        if self.eat_word("omega") {
            self.expect("(")?;
            let r = self.rule()?;
            self.expect(")")?;
            return Ok(GroupDescriptor::OmegaLex(r));
        }
        if self.eat_word("omegaplus1") {
            self.expect("(")?;
            let r = self.rule()?;
            self.expect(",")?;
            let top = self.leaf()?;
            self.expect(")")?;
            return Ok(GroupDescriptor::OmegaPlusOneLex(r, top));
        }
        if self.eat_word("0") {
            return Ok(GroupDescriptor::trivial());
        }
        self.err_at(at, "expected a group")
    }

    fn rule(&mut self) -> Result<Rule> {
        if self.eat_word("const") {
            self.expect("(")?;
            let c = self.leaf()?;
            self.expect(")")?;
            return Ok(Rule::Constant(c));
        }
        if self.eat_word("prefixprimes") {
            let skip = if self.eat("(") {
                let k = self.nat()?;
                self.expect(")")?;
                k
            } else {
                0
            };
            return Ok(Rule::PrefixPrimes { skip });
        }
        self.err("expected a rule (const(...) or prefixprimes)")
    }

    fn index(&mut self) -> Result<Index> {
        if self.eat_word("top") {
            return Ok(Index::Top);
        }
        let at = self.pos;
        let i = self.nat()?;
        if i == 0 {
            return self.err_at(at, "indices start at 1");
        }
        Ok(Index::At(i))
    }

    fn element(&mut self) -> Result<HullElement> {
        self.expect("{")?;
        let mut pairs = Vec::new();
        if !self.eat("}") {
            loop {
                let i = self.index()?;
                self.expect(":")?;
                pairs.push((i, self.rational()?));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
        }
        Ok(HullElement::from_pairs(pairs))
    }

    fn field(&mut self) -> Result<CoefficientField> {
        if self.eat_word("RC") {
            let base = if self.eat("(") {
                let f = self.field()?;
                self.expect(")")?;
                f
            } else {
                CoefficientField::PlainRationals
            };
            return Ok(CoefficientField::declared_real_closed(base));
        }
        if self.eat_word("Q") {
            if self.eat("(") {
                if !self.eat_word("sqrt") {
                    return self.err("expected 'sqrt'");
                }
                self.expect("(")?;
                let at = self.pos;
                let d = self.nat()?;
                self.expect(")")?;
                self.expect(")")?;
                return CoefficientField::quadratic(d).or_else(|e| self.err_at(at, e.to_string()));
            }
            return Ok(CoefficientField::PlainRationals);
        }
        self.err("expected a field (Q, Q(sqrt(d)) or RC(...))")
    }

    fn sqrt(&mut self) -> Result<QuadExt> {
        self.expect("(")?;
        let at = self.pos;
        let d = self.nat()?;
        self.expect(")")?;
        QuadExt::sqrt_of(d).or_else(|e| self.err_at(at, e.to_string()))
    }

    fn factor(&mut self) -> Result<Terms> {
        self.skip_ws();
        let at = self.pos;
        if self.eat("t^(") {
            let e = self.element()?;
            self.expect(")")?;
            return Ok(vec![(QuadExt::one(), e)]);
        }
        if self.eat_word("sqrt") {
            return Ok(vec![(self.sqrt()?, HullElement::zero())]);
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(vec![(
                QuadExt::rational(self.rational()?),
                HullElement::zero(),
            )]),
            _ => self.err_at(at, "expected a coefficient, sqrt(d), t^(...) or '('"),
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.factor()?;
        while self.eat("*") {
            let at = self.pos;
            let rhs = self.factor()?;
            acc = multiply(&acc, &rhs).or_else(|e| self.err_at(at, e.to_string()))?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut neg = self.eat("-");
        let mut acc = Vec::new();
        loop {
            let t = self.term()?;
            acc.extend(t.into_iter().map(|(c, e)| (if neg { -c } else { c }, e)));
            if self.eat("+") {
                neg = self.eat("-");
            } else if self.eat("-") {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }
}

fn multiply(a: &Terms, b: &Terms) -> Result<Terms> {
    let mut out = Vec::new();
    for (c1, e1) in a {
        for (c2, e2) in b {
            out.push((c1.checked_mul(c2)?, e1 + e2));
        }
    }
    Ok(out)
}

fn sum_constant(terms: Terms) -> Result<(QuadExt, bool)> {
    let mut acc = QuadExt::zero();
    let mut constant = true;
    for (c, e) in terms {
        constant &= e.is_zero();
        acc = acc.checked_add(&c)?;
    }
    Ok((acc, constant))
}

/// Runs `f` on a fresh parser, reporting any failure as a parse error at the
/// position reached.
fn guarded<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src);
    f(&mut p).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(p.pos, other.to_string()),
    })
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    guarded(src, |p| {
        let v = f(p)?;
        p.end()?;
        Ok(v)
    })
}

pub fn parse_group_expr(text: &str) -> Result<GroupDescriptor> {
    whole(text, |p| p.group())
}

pub fn parse_element(text: &str) -> Result<HullElement> {
    whole(text, |p| p.element())
}

/// An element literal whose indices must belong to `group` (membership in
/// the group itself is not required, so hull elements are accepted).
pub fn parse_hull_element(text: &str, group: &GroupDescriptor) -> Result<HullElement> {
    let e = parse_element(text)?;
    for i in e.indices() {
        if !group.contains_index(i) {
            let at = text.find(&i.to_string()).unwrap_or(0);
            return Err(Error::parse(at, format!("index {i} is not in {group}")));
        }
    }
    Ok(e)
}

pub fn parse_field(text: &str) -> Result<CoefficientField> {
    whole(text, |p| p.field())
}

pub fn parse_coefficient(text: &str) -> Result<QuadExt> {
    guarded(text, |p| {
        let terms = p.expr()?;
        p.end()?;
        let (c, constant) = sum_constant(terms).map_err(|e| Error::parse(0, e.to_string()))?;
        if !constant {
            return Err(Error::parse(0, "a coefficient cannot mention t"));
        }
        Ok(c)
    })
}

pub fn parse_series_expr(
    text: &str,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Series> {
    guarded(text, |p| series_body(p, field, group))
}

fn series_body(
    p: &mut Parser,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Series> {
    p.skip_ws();
    if p.eat_word("0") && p.end().is_ok() {
        return Ok(Series::zero(field, group));
    }
    p.pos = 0;
    let mut terms = Vec::new();
    let mut neg = p.eat("-");
    loop {
        p.skip_ws();
        let at = p.pos;
        for (c, e) in p.term()? {
            let c = if neg { -c } else { c };
            if let Some(i) = e.indices().find(|i| !group.contains_index(*i)) {
                return p.err_at(at, format!("index {i} is not in {group}"));
            }
            if !crate::groups::g_member(&e, group)? {
                return p.err_at(at, format!("exponent {e} is not in group {group}"));
            }
            if !field.contains(&c) {
                return p.err_at(at, format!("coefficient {c} is not in {field}"));
            }
            terms.push((e, c));
        }
        if p.eat("+") {
            neg = p.eat("-");
        } else if p.eat("-") {
            neg = true;
        } else {
            break;
        }
    }
    p.end()?;
    Series::from_terms(field, group, terms).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn parse_cut(text: &str) -> Result<CutPoint> {
    guarded(text, cut_body)
}

fn cut_body(p: &mut Parser) -> Result<CutPoint> {
    let keyword_group = p.eat_word("group");
    let keyword_residue = !keyword_group && p.eat_word("residue");
    if p.peek() == Some('{') && !keyword_residue {
        let g0 = p.element()?;
        p.end()?;
        return Ok(CutPoint::GroupCut { g0 });
    }
    if keyword_group {
        return p.err("expected an element literal");
    }
    let start = p.pos;
    let terms = p.expr()?;
    p.end()?;
    let (a, constant) = sum_constant(terms).map_err(|e| Error::parse(start, e.to_string()))?;
    if !constant {
        return Err(Error::parse(start, "a residue cut cannot mention t"));
    }
    Ok(CutPoint::ResidueCut { a })
}

/// The syntactic categories accepted by [`canonical`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntaxKind {
    Group,
    Element,
    Field,
    Coefficient,
    Series,
    Cut,
}

impl SyntaxKind {
    pub const ALL: [SyntaxKind; 6] = [
        SyntaxKind::Group,
        SyntaxKind::Element,
        SyntaxKind::Field,
        SyntaxKind::Coefficient,
        SyntaxKind::Series,
        SyntaxKind::Cut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntaxKind::Group => "group",
            SyntaxKind::Element => "element",
            SyntaxKind::Field => "field",
            SyntaxKind::Coefficient => "coefficient",
            SyntaxKind::Series => "series",
            SyntaxKind::Cut => "cut",
        }
    }

    pub fn from_name(name: &str) -> Option<SyntaxKind> {
        SyntaxKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Parses `text` as `kind` and prints the result canonically. Series are
/// read over `field` and `group`.
pub fn canonical(
    kind: SyntaxKind,
    text: &str,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<String> {
    Ok(match kind {
        SyntaxKind::Group => parse_group_expr(text)?.to_string(),
        SyntaxKind::Element => parse_element(text)?.to_string(),
        SyntaxKind::Field => parse_field(text)?.to_string(),
        SyntaxKind::Coefficient => parse_coefficient(text)?.to_string(),
        SyntaxKind::Series => parse_series_expr(text, field, group)?.to_string(),
        SyntaxKind::Cut => parse_cut(text)?.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn offset(e: Error) -> usize {
        match e {
            Error::Parse { offset, .. } => offset,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn group_examples() {
        assert_eq!(
            parse_group_expr("lex(Q, loc{2})").unwrap(),
            GroupDescriptor::FiniteLex(vec![
                RationalSubgroup::rationals(),
                RationalSubgroup::localization(vec![2]).unwrap()
            ])
        );
        assert_eq!(
            parse_group_expr("omega(prefixprimes)").unwrap(),
            GroupDescriptor::OmegaLex(Rule::PrefixPrimes { skip: 0 })
        );
        assert_eq!(offset(parse_group_expr("lex(").unwrap_err()), 4);
    }

    #[test]
    fn group_details() {
        assert_eq!(
            parse_group_expr(" lex( lex(Z,Q) , loc{ >= 3 } ) ")
                .unwrap()
                .to_string(),
            "lex(Z, Q, loc{>=3})"
        );
        assert_eq!(offset(parse_group_expr("loc{4}").unwrap_err()), 4);
        assert!(parse_group_expr("lex(omega(const(Z)))").is_err());
        assert_eq!(
            parse_group_expr("omegaplus1(prefixprimes(2), loc{2})")
                .unwrap()
                .to_string(),
            "omegaplus1(prefixprimes(2), loc{2})"
        );
        assert_eq!(parse_group_expr("0").unwrap(), GroupDescriptor::trivial());
        assert_eq!(offset(parse_group_expr("Q Q").unwrap_err()), 2);
    }

    #[test]
    fn elements_and_fields() {
        let e = parse_element("{1: 1/3, top: -2}").unwrap();
        assert_eq!(e.coefficient(Index::At(1)), rat(1, 3));
        assert_eq!(e.coefficient(Index::Top), int(-2));
        assert_eq!(parse_element("{}").unwrap(), HullElement::zero());
        assert_eq!(
            parse_field("Q(sqrt(2))").unwrap(),
            CoefficientField::QuadraticExt(2)
        );
        assert_eq!(parse_field("RC(Q)").unwrap().to_string(), "RC(Q)");
        assert!(parse_field("Q(sqrt(4))").is_err());
    }

    #[test]
    fn coefficients() {
        let c = parse_coefficient("1 + -1/2*sqrt(2)").unwrap();
        assert_eq!(c.to_string(), "1 + -1/2*sqrt(2)");
        assert_eq!(parse_coefficient("3 - 2*sqrt(2)").unwrap().sign(), 1);
        assert_eq!(
            parse_coefficient("-7/3").unwrap(),
            QuadExt::rational(rat(-7, 3))
        );
    }

    #[test]
    fn series_examples() {
        let q = CoefficientField::PlainRationals;
        let gq = GroupDescriptor::single(RationalSubgroup::rationals());
        let s = parse_series_expr("3*t^({1:1/2}) + t^({1:2})", &q, &gq).unwrap();
        assert_eq!(s.len(), 2);
        let gz = GroupDescriptor::single(RationalSubgroup::integers());
        assert!(parse_series_expr("t^({1:1/2})", &q, &gz).is_err());
        let z = parse_series_expr("2*t^({1:1}) + -2*t^({1:1})", &q, &gq).unwrap();
        assert!(z.is_zero());
        assert!(parse_series_expr("0", &q, &gq).unwrap().is_zero());
        let k = CoefficientField::QuadraticExt(2);
        let s = parse_series_expr("(1 + sqrt(2))*t^({1: -1}) - 1/2", &k, &gq).unwrap();
        assert_eq!(parse_series_expr(&s.to_string(), &k, &gq).unwrap(), s);
        assert!(parse_series_expr("sqrt(2)", &q, &gq).is_err());
    }

    #[test]
    fn cuts() {
        assert_eq!(
            parse_cut("{2: 1/3}").unwrap(),
            CutPoint::GroupCut {
                g0: parse_element("{2: 1/3}").unwrap()
            }
        );
        assert_eq!(
            parse_cut("sqrt(2)").unwrap(),
            CutPoint::ResidueCut {
                a: QuadExt::sqrt_of(2).unwrap()
            }
        );
        for c in ["group {1: 1/2}", "residue 1 + sqrt(3)"] {
            let cut = parse_cut(c).unwrap();
            assert_eq!(parse_cut(&cut.to_string()).unwrap(), cut);
        }
    }
}
