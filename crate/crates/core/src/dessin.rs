//! Dessins as permutation pairs `(a, b)` on edges `{0..n-1}`.
//!
//! Text form, 1-based, statements in any order separated by whitespace:
//!
//! ```text
//! n=5
//! a=(1 2 3 4 5)
//! b=(1 2)(3 4)
//! ```
//!
//! `()` denotes the identity; points left out of the cycle notation are fixed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{enumerate_group, GroupTable, Perm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dessin {
    a: Perm,
    b: Perm,
}

/// Cycle types of `a`, `b` and the face permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Passport {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl Dessin {
    /// A connected dessin; disconnected pairs are rejected.
    pub fn new(a: Perm, b: Perm) -> Result<Self> {
        let d = Self::pair(a, b)?;
        if !d.validate_connected() {
            return Err(Error::input(format!(
                "{d} is not connected: <a, b> is not transitive"
            )));
        }
        Ok(d)
    }

    /// Any pair of equal degree, connected or not.
    pub fn pair(a: Perm, b: Perm) -> Result<Self> {
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch {
                left: a.degree(),
                right: b.degree(),
            });
        }
        Ok(Dessin { a, b })
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }

    pub fn a(&self) -> &Perm {
        &self.a
    }

    pub fn b(&self) -> &Perm {
        &self.b
    }

    /// `c = (ab)⁻¹`, so that `a∘b∘c` is the identity.
    pub fn face(&self) -> Perm {
        self.a.compose_unchecked(&self.b).inverse()
    }

    /// Whether `<a, b>` is transitive, by a search from point 0.
    pub fn validate_connected(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for y in [self.a.apply(x), self.b.apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == n
    }

    pub fn passport(&self) -> Passport {
        Passport {
            a: self.a.cycle_type(),
            b: self.b.cycle_type(),
            c: self.face().cycle_type(),
        }
    }

    /// Genus of the underlying surface from `V − E + F = 2 − 2g`, fixed
    /// points counted as cycles.
    pub fn genus(&self) -> Result<usize> {
        if !self.validate_connected() {
            return Err(Error::input("genus is only defined for connected dessins"));
        }
        let v = self.a.cycle_count() + self.b.cycle_count();
        let f = self.face().cycle_count();
        let euler = (v + f) as i64 - self.degree() as i64;
        debug_assert!(euler <= 2 && euler % 2 == 0);
        Ok(((2 - euler) / 2) as usize)
    }

    /// The group `<a, b>`, with `a` and `b` as generators 0 and 1.
    pub fn monodromy_group(&self, cap: usize) -> Result<GroupTable> {
        let g = enumerate_group(&[self.a.clone(), self.b.clone()], cap)?;
        if !g.is_transitive() {
            return Err(Error::internal(
                "monodromy group of a connected dessin is intransitive",
            ));
        }
        Ok(g)
    }

    /// Simultaneous relabeling `(g⁻¹ag, g⁻¹bg)`.
    pub fn relabel(&self, g: &Perm) -> Result<Dessin> {
        Ok(Dessin {
            a: self.a.conjugate(g)?,
            b: self.b.conjugate(g)?,
        })
    }
}

impl fmt::Display for Dessin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} a={} b={}", self.degree(), self.a, self.b)
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |p: &[usize]| {
            let s: Vec<String> = p.iter().map(usize::to_string).collect();
            format!("[{}]", s.join(","))
        };
        write!(
            f,
            "({}, {}, {})",
            part(&self.a),
            part(&self.b),
            part(&self.c)
        )
    }
}

impl FromStr for Dessin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dessin(s)
    }
}

/// Parses and validates a dessin; see the module docs for the format.
pub fn parse_dessin(text: &str) -> Result<Dessin> {
    let mut p = Parser::new(text);
    let mut n: Option<usize> = None;
    let mut a: Option<Vec<Vec<usize>>> = None;
    let mut b: Option<Vec<Vec<usize>>> = None;
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("expected a statement"));
    }
    while !p.at_end() {
        let (line, column) = (p.line, p.column);
        let key = p.bump().unwrap();
        p.expect('=')?;
        let dup = |what: &str| Error::Syntax {
            line,
            column,
            message: format!("'{what}' given twice"),
        };
        match key {
            'n' => {
                if n.is_some() {
                    return Err(dup("n"));
                }
                n = Some(p.integer()?);
            }
            'a' => {
                if a.is_some() {
                    return Err(dup("a"));
                }
                a = Some(p.cycles()?);
            }
            'b' => {
                if b.is_some() {
                    return Err(dup("b"));
                }
                b = Some(p.cycles()?);
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected '{other}', expected n=, a= or b="),
                })
            }
        }
        let separated =
            p.last.is_some_and(char::is_whitespace) || p.peek().is_some_and(char::is_whitespace);
        if !p.at_end() && !separated {
            return Err(p.error("expected whitespace between statements"));
        }
        p.skip_ws();
    }
    let missing = |what: &str| Error::input(format!("missing '{what}=' statement"));
    let n = n.ok_or_else(|| missing("n"))?;
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let a = to_perm(n, a.ok_or_else(|| missing("a"))?)?;
    let b = to_perm(n, b.ok_or_else(|| missing("b"))?)?;
    Dessin::new(a, b)
}

fn to_perm(n: usize, cycles: Vec<Vec<usize>>) -> Result<Perm> {
    let zero_based: Vec<Vec<usize>> = cycles
        .into_iter()
        .map(|c| c.into_iter().map(|x| x - 1).collect())
        .collect();
    Perm::from_cycles(n, &zero_based)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    last: Option<char>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
            last: None,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = Some(c);
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Spaces and tabs only; cycles never span lines.
    fn skip_blanks(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn integer(&mut self) -> Result<usize> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        digits
            .parse()
            .map_err(|_| self.error(format!("integer {digits} is too large")))
    }

    fn cycles(&mut self) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        if self.peek() != Some('(') {
            return Err(self.error("expected '(' to start a cycle"));
        }
        while self.peek() == Some('(') {
            self.bump();
            self.skip_blanks();
            if self.peek() == Some(')') {
                self.bump();
                if !out.is_empty() {
                    return Err(self.error("'()' must stand alone"));
                }
                self.skip_blanks();
                if self.peek() == Some('(') {
                    return Err(self.error("'()' must stand alone"));
                }
                return Ok(out);
            }
            let mut cycle = Vec::new();
            loop {
                let (line, column) = (self.line, self.column);
                let x = self.integer()?;
                if x == 0 {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "points are numbered from 1".into(),
                    });
                }
                cycle.push(x);
                self.skip_blanks();
                if self.peek() == Some(')') {
                    self.bump();
                    break;
                }
            }
            out.push(cycle);
            self.skip_blanks();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_GROUP_CAP;
    use proptest::prelude::*;

    fn d(s: &str) -> Dessin {
        parse_dessin(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let s3 = d("n=3 a=(1 2 3) b=(1 2)");
        assert_eq!(s3.degree(), 3);
        assert_eq!(s3.a().images(), &[1, 2, 0]);
        assert_eq!(s3.b().images(), &[1, 0, 2]);
        let triv = d("n=1 a=() b=()");
        assert!(triv.a().is_identity() && triv.b().is_identity());
        let err = parse_dessin("n=3 a=(1 2 4) b=()").unwrap_err();
        assert!(err.to_string().contains("point 4 out of range"), "{err}");
    }

    #[test]
    fn layout_is_flexible() {
        let spaced = d("\n  b=(1 2)\n\ta=( 1  2 3 )   n=3\n");
        assert_eq!(spaced, d("n=3 a=(1 2 3) b=(1 2)"));
        let q8 = d("n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6) (3 8 4 7)");
        assert_eq!(q8.a().cycle_type(), vec![4, 4]);
        assert_eq!(q8.b().cycle_type(), vec![4, 4]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_dessin("n=3\na=(1 x 3) b=()") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("{other:?}"),
        }
        match parse_dessin("n=3 c=(1 2)") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
        for bad in [
            "",
            "n=",
            "n=3 a=(1 2 3)",
            "n=3 n=3 a=() b=()",
            "n=3 a=(1 2 3)b=()",
            "n=3 a=(1 2 3 b=()",
            "n=3 a=(0 1) b=()",
            "n=3 a=()(1 2) b=()",
            "n=3 a=(1 2)(2 3) b=()",
            "n=0 a=() b=()",
        ] {
            assert!(parse_dessin(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn connectivity() {
        assert!(d("n=3 a=(1 2 3) b=(1 2)").validate_connected());
        assert!(d("n=1 a=() b=()").validate_connected());
        let split = Dessin::pair(
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
        )
        .unwrap();
        assert!(!split.validate_connected());
        assert!(split.genus().is_err());
        assert!(parse_dessin("n=3 a=(1 2) b=(1 2)").is_err());
        assert!(matches!(
            Dessin::pair(Perm::identity(2), Perm::identity(3)),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn passports_and_genus() {
        let s3 = d("n=3 a=(1 2 3) b=(1 2)");
        assert_eq!(s3.face(), Perm::from_cycles(3, &[vec![0, 2]]).unwrap());
        let p = s3.passport();
        assert_eq!((p.a, p.b, p.c), (vec![3], vec![2, 1], vec![2, 1]));
        assert_eq!(s3.genus().unwrap(), 0);

        let z3 = d("n=3 a=(1 2 3) b=(1 2 3)");
        let p = z3.passport();
        assert_eq!((p.a, p.b, p.c), (vec![3], vec![3], vec![3]));
        assert_eq!(z3.genus().unwrap(), 1);

        let triv = d("n=1 a=() b=()");
        assert_eq!(triv.passport().to_string(), "([1], [1], [1])");
        assert_eq!(triv.genus().unwrap(), 0);
    }

    #[test]
    fn face_closes_the_triangle() {
        let q8 = d("n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6)(3 8 4 7)");
        let abc = q8
            .a()
            .compose(&q8.b().compose(&q8.face()).unwrap())
            .unwrap();
        assert!(abc.is_identity());
    }

    #[test]
    fn monodromy_examples() {
        let g = d("n=3 a=(1 2 3) b=(1 2)")
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(
            g.generators(),
            &[
                g.index_of(&Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap())
                    .unwrap(),
                g.index_of(&Perm::from_cycles(3, &[vec![0, 1]]).unwrap())
                    .unwrap()
            ]
        );
        let g = d("n=3 a=(1 2 3) b=(1 2 3)")
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap();
        assert_eq!(g.order(), 3);
        let g = d("n=5 a=(1 2 3 4 5) b=(1 2)")
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap();
        assert_eq!(g.order(), 120);
        assert!(matches!(
            d("n=5 a=(1 2 3 4 5) b=(1 2)").monodromy_group(100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "n=1 a=() b=()",
            "n=3 a=(1 2 3) b=(1 2)",
            "n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6)(3 8 4 7)",
        ] {
            let x = d(s);
            assert_eq!(d(&x.to_string()), x);
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    fn arb_connected() -> impl Strategy<Value = Dessin> {
        (1usize..9)
            .prop_flat_map(|n| (arb_perm(n), arb_perm(n)))
            .prop_filter_map("connected", |(a, b)| Dessin::new(a, b).ok())
    }

    proptest! {
        #[test]
        fn genus_is_well_defined(x in arb_connected()) {
            let v = x.a().cycle_count() + x.b().cycle_count();
            let f = x.face().cycle_count();
            let euler = (v + f) as i64 - x.degree() as i64;
            prop_assert!(euler <= 2 && euler % 2 == 0);
            let p = x.passport();
            for part in [&p.a, &p.b, &p.c] {
                prop_assert_eq!(part.iter().sum::<usize>(), x.degree());
            }
        }

        #[test]
        fn genus_invariant_under_relabeling(
            (x, g) in arb_connected().prop_flat_map(|x| { let n = x.degree(); (Just(x), arb_perm(n)) })
        ) {
            let y = x.relabel(&g).unwrap();
            prop_assert_eq!(x.genus().unwrap(), y.genus().unwrap());
            prop_assert_eq!(x.passport(), y.passport());
        }

        #[test]
        fn genus_independent_of_face_convention(x in arb_connected()) {
            let other_face = x.b().compose(x.a()).unwrap().inverse();
            let v = x.a().cycle_count() + x.b().cycle_count();
            let euler = (v + other_face.cycle_count()) as i64 - x.degree() as i64;
            prop_assert_eq!(((2 - euler) / 2) as usize, x.genus().unwrap());
        }
    }
}
