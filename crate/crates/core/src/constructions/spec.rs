//! The group-spec mini-language.
//!
//! ```text
//! atom := "S(" int ")" | "A(" int ")" | "C(" int ")" | "D(" int ")"
//!       | "M11" | "M12" | "AGL1(" prime ")"
//!       | "gens{degree=" int ";" perm (";" perm)* "}"
//! expr := atom | "prod(" expr "," expr ")" | "wr(" expr "," expr ")"
//!       | "wrprod(" expr "," expr ")"
//! ```
//!
//! `D`'s parameter is the group order. Whitespace between tokens is ignored.

use std::fmt;

use super::{
    affine_line, alternating, cyclic, dihedral, direct_product, is_prime, mathieu, symmetric,
    wreath_imprimitive, wreath_product_action,
};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{parse_cycles_at, Permutation, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    /// Parameter is the group order.
    Dihedral(usize),
    M11,
    M12,
    AffineLine(usize),
    Gens {
        degree: usize,
        perms: Vec<Permutation>,
    },
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Wreath(Box<GroupSpec>, Box<GroupSpec>),
    WreathProductAction(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser { text, pos: 0 };
        let spec = parser.expr()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    /// Degree of the constructed group, without constructing it.
    pub fn degree(&self) -> Option<usize> {
        let d = match self {
            GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) | GroupSpec::Cyclic(n) => *n,
            GroupSpec::Dihedral(4) => 4,
            GroupSpec::Dihedral(order) => order / 2,
            GroupSpec::M11 => 11,
            GroupSpec::M12 => 12,
            GroupSpec::AffineLine(p) => *p,
            GroupSpec::Gens { degree, .. } => *degree,
            GroupSpec::Product(a, b) => a.degree()?.checked_add(b.degree()?)?,
            GroupSpec::Wreath(a, b) => a.degree()?.checked_mul(b.degree()?)?,
            GroupSpec::WreathProductAction(a, b) => {
                let m = a.degree()?;
                (0..b.degree()?).try_fold(1usize, |acc, _| acc.checked_mul(m))?
            }
        };
        Some(d)
    }

    pub fn build(&self) -> Result<PermGroup> {
        match self {
            GroupSpec::Symmetric(n) => symmetric(*n),
            GroupSpec::Alternating(n) => alternating(*n),
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::Dihedral(order) => dihedral(*order),
            GroupSpec::M11 => mathieu(11),
            GroupSpec::M12 => mathieu(12),
            GroupSpec::AffineLine(p) => affine_line(*p),
            GroupSpec::Gens { degree, perms } => PermGroup::new(*degree, perms.clone()),
            GroupSpec::Product(a, b) => direct_product(&a.build()?, &b.build()?),
            GroupSpec::Wreath(a, b) => wreath_imprimitive(&a.build()?, &b.build()?),
            GroupSpec::WreathProductAction(a, b) => wreath_product_action(&a.build()?, &b.build()?),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(n) => write!(f, "S({n})"),
            GroupSpec::Alternating(n) => write!(f, "A({n})"),
            GroupSpec::Cyclic(n) => write!(f, "C({n})"),
            GroupSpec::Dihedral(n) => write!(f, "D({n})"),
            GroupSpec::M11 => f.write_str("M11"),
            GroupSpec::M12 => f.write_str("M12"),
            GroupSpec::AffineLine(p) => write!(f, "AGL1({p})"),
            GroupSpec::Gens { degree, perms } => {
                write!(f, "gens{{degree={degree}")?;
                for p in perms {
                    write!(f, ";{p}")?;
                }
                f.write_str("}")
            }
            GroupSpec::Product(a, b) => write!(f, "prod({a},{b})"),
            GroupSpec::Wreath(a, b) => write!(f, "wr({a},{b})"),
            GroupSpec::WreathProductAction(a, b) => write!(f, "wrprod({a},{b})"),
        }
    }
}

/// Parses and constructs a group from its spec text.
pub fn parse_group_spec(text: &str) -> Result<PermGroup> {
    GroupSpec::parse(text)?.build()
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
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
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn int(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let value = self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer too large".into(),
            })?;
        Ok((value, start))
    }

    fn int_arg(&mut self) -> Result<(usize, usize)> {
        let v = self.int()?;
        self.expect(")")?;
        Ok(v)
    }

    fn pair(&mut self) -> Result<(Box<GroupSpec>, Box<GroupSpec>)> {
        let a = self.expr()?;
        self.expect(",")?;
        let b = self.expr()?;
        self.expect(")")?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn expr(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        let range = |name: &str, n: usize, at: usize, ok: bool| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::ParamOutOfRange(format!(
                    "{name}({n}) at offset {at}"
                )))
            }
        };
        // longer keywords first
        if self.eat("wrprod(") {
            let (a, b) = self.pair()?;
            return Ok(GroupSpec::WreathProductAction(a, b));
        }
        if self.eat("wr(") {
            let (a, b) = self.pair()?;
            return Ok(GroupSpec::Wreath(a, b));
        }
        if self.eat("prod(") {
            let (a, b) = self.pair()?;
            return Ok(GroupSpec::Product(a, b));
        }
        if self.eat("gens{") {
            self.expect("degree=")?;
            let (degree, at) = self.int()?;
            range("degree", degree, at, (1..=MAX_DEGREE).contains(&degree))?;
            let mut perms = Vec::new();
            while self.eat(";") {
                self.skip_ws();
                let start = self.pos;
                let rest = &self.text[start..];
                let end = rest.find([';', '}']).ok_or_else(|| Error::Parse {
                    offset: self.text.len(),
                    message: "expected '}'".into(),
                })?;
                let chunk = rest[..end].trim_end();
                perms.push(parse_cycles_at(chunk, degree, start)?);
                self.pos = start + end;
            }
            if perms.is_empty() {
                return Err(self.error("expected ';' and at least one permutation"));
            }
            self.expect("}")?;
            return Ok(GroupSpec::Gens { degree, perms });
        }
        if self.eat("AGL1(") {
            let (p, at) = self.int_arg()?;
            range("AGL1", p, at, is_prime(p) && p <= 97)?;
            return Ok(GroupSpec::AffineLine(p));
        }
        if self.eat("M11") {
            return Ok(GroupSpec::M11);
        }
        if self.eat("M12") {
            return Ok(GroupSpec::M12);
        }
        for (token, make) in [
            ("S(", GroupSpec::Symmetric as fn(usize) -> GroupSpec),
            ("A(", GroupSpec::Alternating),
            ("C(", GroupSpec::Cyclic),
        ] {
            if self.eat(token) {
                let (n, at) = self.int_arg()?;
                range(&token[..1], n, at, (1..=MAX_DEGREE).contains(&n))?;
                return Ok(make(n));
            }
        }
        if self.eat("D(") {
            let (n, at) = self.int_arg()?;
            range("D", n, at, n >= 4 && n % 2 == 0 && n / 2 <= MAX_DEGREE)?;
            return Ok(GroupSpec::Dihedral(n));
        }
        Err(self.error("expected a group expression"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FamilyTag;
    use proptest::prelude::*;

    #[test]
    fn atoms() {
        let s4 = parse_group_spec("S(4)").unwrap();
        assert_eq!((s4.degree(), s4.order_u64()), (4, Some(24)));
        assert!(matches!(s4.tag(), FamilyTag::Symmetric(4)));
        let g = parse_group_spec("gens{degree=4;(1,2)(3,4);(1,3)(2,4)}").unwrap();
        assert_eq!(g.order_u64(), Some(4));
        assert_eq!(parse_group_spec("M11").unwrap().order_u64(), Some(7920));
        assert_eq!(parse_group_spec("AGL1(7)").unwrap().order_u64(), Some(42));
    }

    #[test]
    fn combinators() {
        let g = parse_group_spec("prod(D(8),D(8))").unwrap();
        assert_eq!((g.degree(), g.order_u64()), (8, Some(64)));
        let g = parse_group_spec("wr(D(8),C(2))").unwrap();
        assert_eq!((g.degree(), g.order_u64()), (8, Some(128)));
        let g = parse_group_spec(" wr( S(2) , S(3) ) ").unwrap();
        assert!(matches!(g.tag(), FamilyTag::WreathSym { n: 3, .. }));
        let g = parse_group_spec("wrprod(S(3),S(2))").unwrap();
        assert_eq!((g.degree(), g.order_u64()), (9, Some(72)));
    }

    #[test]
    fn errors() {
        match GroupSpec::parse("S(4") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        match GroupSpec::parse("prod(S(4),Q(2))") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("{other:?}"),
        }
        match GroupSpec::parse("gens{degree=3;(1,4)}") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            GroupSpec::parse("S(0)"),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            GroupSpec::parse("D(7)"),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            GroupSpec::parse("AGL1(15)"),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            GroupSpec::parse("S(4)x"),
            Err(Error::Parse { offset: 4, .. })
        ));
    }

    fn atom() -> impl Strategy<Value = GroupSpec> {
        prop_oneof![
            (1usize..30).prop_map(GroupSpec::Symmetric),
            (1usize..30).prop_map(GroupSpec::Alternating),
            (1usize..30).prop_map(GroupSpec::Cyclic),
            (2usize..15).prop_map(|n| GroupSpec::Dihedral(2 * n)),
            Just(GroupSpec::M11),
            Just(GroupSpec::M12),
            prop::sample::select(vec![2usize, 3, 5, 7, 11, 97]).prop_map(GroupSpec::AffineLine),
            Just(GroupSpec::Gens {
                degree: 4,
                perms: vec![
                    Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap(),
                    Permutation::parse_cycles("(1,3)(2,4)", 4).unwrap(),
                ],
            }),
        ]
    }

    fn expr() -> impl Strategy<Value = GroupSpec> {
        atom().prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| GroupSpec::Product(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| GroupSpec::Wreath(Box::new(a), Box::new(b))),
                (inner.clone(), inner)
                    .prop_map(|(a, b)| GroupSpec::WreathProductAction(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_print_parses_back(spec in expr()) {
            let text = spec.to_string();
            let reparsed = GroupSpec::parse(&text).unwrap();
            prop_assert_eq!(&reparsed, &spec);
            prop_assert_eq!(reparsed.to_string(), text);
        }
    }
}
