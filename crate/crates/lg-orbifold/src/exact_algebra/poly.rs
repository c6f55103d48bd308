use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{fmt_rational, parse_rational, Rational};
use super::AlgebraError;

pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial over the rationals with a fixed, ordered
/// variable list. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The coordinate function of variable `i` (0-based).
    pub fn var(vars: &[String], i: usize) -> Result<Self, AlgebraError> {
        if i >= vars.len() {
            return Err(AlgebraError::IndexOutOfRange(i, vars.len()));
        }
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e, Rational::one()))
    }

    pub fn monomial(vars: &[String], exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length must match variable count");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(
        vars: &[String],
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(AlgebraError::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Rows of the exponent matrix, one per monomial, in canonical order.
    pub fn exponent_rows(&self) -> Vec<Exponents> {
        self.terms.keys().cloned().collect()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = out.mul(self).expect("same variables");
        }
        out
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Self, AlgebraError> {
        if i >= self.nvars() {
            return Err(AlgebraError::IndexOutOfRange(i, self.nvars()));
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[i].into()));
        }
        Ok(out)
    }

    /// Replaces variable `i` by `q` (which must live on the same variables).
    pub fn substitute(&self, i: usize, q: &Self) -> Result<Self, AlgebraError> {
        if i >= self.nvars() {
            return Err(AlgebraError::IndexOutOfRange(i, self.nvars()));
        }
        self.check_same(q)?;
        let maxdeg = self.degree_in(i).unwrap_or(0);
        let mut powers = vec![Self::one(&self.vars)];
        for k in 1..=maxdeg as usize {
            let next = powers[k - 1].mul(q)?;
            powers.push(next);
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            let m = Self::monomial(&self.vars, rest, c.clone());
            out = out.add(&m.mul(&powers[e[i] as usize])?)?;
        }
        Ok(out)
    }

    /// Sets every variable outside `keep` (0-based indices) to zero.
    pub fn restrict_to_coordinates(&self, keep: &BTreeSet<usize>) -> Result<Self, AlgebraError> {
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.nvars()) {
            return Err(AlgebraError::IndexOutOfRange(bad, self.nvars()));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().enumerate().all(|(j, &x)| x == 0 || keep.contains(&j)))
            .map(|(e, c)| (e.clone(), c.clone()));
        Self::from_terms(&self.vars, terms)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::IndexOutOfRange(point.len(), self.nvars()));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Parses with variables collected from the text, naturally sorted
    /// (x2 before x10).
    pub fn parse(s: &str) -> Result<Self, AlgebraError> {
        let raw = tokenize(s)?;
        let mut names: BTreeSet<String> = BTreeSet::new();
        for t in &raw {
            if let Tok::Ident(n) = t {
                names.insert(n.clone());
            }
        }
        let mut vars: Vec<String> = names.into_iter().collect();
        vars.sort_by_key(|a| natural_key(a));
        Self::parse_tokens(&raw, &vars)
    }

    /// Parses several texts over the union of their variables, naturally
    /// sorted, so the results can be combined.
    pub fn parse_common(texts: &[&str]) -> Result<Vec<Self>, AlgebraError> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        let mut toks = Vec::with_capacity(texts.len());
        for t in texts {
            let raw = tokenize(t)?;
            for tok in &raw {
                if let Tok::Ident(n) = tok {
                    names.insert(n.clone());
                }
            }
            toks.push(raw);
        }
        let mut vars: Vec<String> = names.into_iter().collect();
        vars.sort_by_key(|a| natural_key(a));
        toks.iter().map(|raw| Self::parse_tokens(raw, &vars)).collect()
    }

    /// The same polynomial over another variable list, matched by name.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self, AlgebraError> {
        let pos: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut f = vec![0u32; vars.len()];
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match pos[k] {
                    Some(j) => f[j] = x,
                    None => return Err(AlgebraError::VariableMismatch(self.vars.clone(), vars.to_vec())),
                }
            }
            terms.push((f, c.clone()));
        }
        Self::from_terms(vars, terms)
    }

    /// Parses against a declared variable list.
    pub fn parse_with_vars(s: &str, vars: &[String]) -> Result<Self, AlgebraError> {
        let raw = tokenize(s)?;
        Self::parse_tokens(&raw, vars)
    }

    fn parse_tokens(toks: &[Tok], vars: &[String]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(vars);
        let mut pos = 0;
        if toks.is_empty() {
            return Err(AlgebraError::Parse("empty polynomial".into()));
        }
        loop {
            let mut sign = Rational::one();
            while let Some(Tok::Plus | Tok::Minus) = toks.get(pos) {
                if toks[pos] == Tok::Minus {
                    sign = -sign;
                }
                pos += 1;
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; vars.len()];
            let mut nfactors = 0;
            loop {
                match toks.get(pos) {
                    Some(Tok::Num(q)) => {
                        coeff *= q;
                        pos += 1;
                    }
                    Some(Tok::Ident(name)) => {
                        let idx = vars
                            .iter()
                            .position(|v| v == name)
                            .ok_or_else(|| AlgebraError::Parse(format!("undeclared variable {name}")))?;
                        pos += 1;
                        let mut e = 1u32;
                        if let Some(Tok::Caret) = toks.get(pos) {
                            pos += 1;
                            match toks.get(pos) {
                                Some(Tok::Num(q)) if q.is_integer() && !q.is_negative() => {
                                    e = q
                                        .to_integer()
                                        .try_into()
                                        .map_err(|_| AlgebraError::Parse("exponent too large".into()))?;
                                    pos += 1;
                                }
                                _ => return Err(AlgebraError::Parse("bad exponent".into())),
                            }
                        }
                        exps[idx] += e;
                    }
                    _ => return Err(AlgebraError::Parse(format!("unexpected token at {pos}"))),
                }
                nfactors += 1;
                if let Some(Tok::Star) = toks.get(pos) {
                    pos += 1;
                    continue;
                }
                break;
            }
            debug_assert!(nfactors > 0);
            out.add_term(exps, coeff);
            match toks.get(pos) {
                None => break,
                Some(Tok::Plus | Tok::Minus) => continue,
                Some(_) => return Err(AlgebraError::Parse(format!("unexpected token at {pos}"))),
            }
        }
        Ok(out)
    }
}

fn natural_key(s: &str) -> (String, u64, String) {
    let stem: String = s.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let digits = &s[stem.len()..];
    (stem, digits.parse().unwrap_or(0), s.to_string())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, AlgebraError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(parse_rational(&text)?));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(AlgebraError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

impl fmt::Display for Polynomial {
    /// Highest total degree first; ties broken by reverse exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Exponents, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| if x == 1 { self.vars[j].clone() } else { format!("{}^{}", self.vars[j], x) })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serialized as the canonical text form together with the variable list.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Polynomial::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::{int, rat};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["x1^2*x2 + x2^4", "-x^2 + 3/2*x*y - 7", "0 + x", "x10 + x2"] {
            let q = p(s);
            assert_eq!(Polynomial::parse(&q.to_string()).unwrap(), q, "{s}");
        }
        assert_eq!(p("x2 + x10").vars(), &["x2".to_string(), "x10".to_string()]);
        assert_eq!(p("x*x - x^2").to_string(), "0");
    }

    #[test]
    fn derivative_of_chain() {
        let w = p("x^2*y + y^4");
        assert_eq!(w.partial_derivative(0).unwrap(), Polynomial::parse_with_vars("2*x*y", w.vars()).unwrap());
        assert!(w.partial_derivative(2).is_err());
    }

    #[test]
    fn restriction_kills_chain_on_first_axis() {
        let w = p("x^2*y + y^4");
        let k: BTreeSet<usize> = [0].into_iter().collect();
        assert!(w.restrict_to_coordinates(&k).unwrap().is_zero());
    }

    #[test]
    fn substitute_z_zero() {
        let u = p("x^2 + y^2 + x*y*z");
        let zero = Polynomial::zero(u.vars());
        let v = u.substitute(2, &zero).unwrap();
        assert_eq!(v, Polynomial::parse_with_vars("x^2+y^2", u.vars()).unwrap());
    }

    #[test]
    fn mismatched_variables_error() {
        let a = p("x + y");
        let b = p("x + z");
        assert!(matches!(a.add(&b), Err(AlgebraError::VariableMismatch(..))));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn evaluation_matches_arithmetic() {
        let a = p("x^2 - 1/2*x*y");
        assert_eq!(a.eval(&[int(2), rat(1, 3)]).unwrap(), rat(11, 3));
    }
}
