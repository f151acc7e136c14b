//! Sparse multivariate polynomials over the rationals.
//!
//! Internal representation for [`super::ScalarExpr`]. Terms live in a
//! `BTreeMap` keyed by monomial under a graded lexicographic order, so
//! iteration, display, and hashing are deterministic for a given set of
//! interned symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use super::Symbol;

/// A power product of symbols. Factors are sorted by symbol id and every
/// stored exponent is positive; the empty product is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct Monomial {
    factors: Vec<(Symbol, u32)>,
}

impl Monomial {
    pub(crate) fn one() -> Self {
        Monomial::default()
    }

    pub(crate) fn symbol(s: Symbol) -> Self {
        Monomial { factors: vec![(s, 1)] }
    }

    pub(crate) fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub(crate) fn degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub(crate) fn factors(&self) -> &[(Symbol, u32)] {
        &self.factors
    }

    pub(crate) fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(sa, ea)), Some(&&(sb, eb))) => match sa.cmp(&sb) {
                    Ordering::Less => {
                        out.push((sa, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((sb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((sa, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    out.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial { factors: out }
    }

    /// Componentwise gcd of the exponent vectors.
    pub(crate) fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let mut b_iter = other.factors.iter().peekable();
        for &(sa, ea) in &self.factors {
            while let Some(&&(sb, _)) = b_iter.peek() {
                if sb < sa {
                    b_iter.next();
                } else {
                    break;
                }
            }
            if let Some(&&(sb, eb)) = b_iter.peek() {
                if sb == sa {
                    out.push((sa, ea.min(eb)));
                }
            }
        }
        Monomial { factors: out }
    }

    /// Divide by `other`; `None` when some exponent would go negative.
    pub(crate) fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut b_iter = other.factors.iter().peekable();
        for &(sa, ea) in &self.factors {
            let mut rem = ea;
            while let Some(&&(sb, eb)) = b_iter.peek() {
                match sb.cmp(&sa) {
                    Ordering::Less => return None,
                    Ordering::Equal => {
                        if eb > ea {
                            return None;
                        }
                        rem = ea - eb;
                        b_iter.next();
                        break;
                    }
                    Ordering::Greater => break,
                }
            }
            if rem > 0 {
                out.push((sa, rem));
            }
        }
        if b_iter.next().is_some() {
            return None;
        }
        Some(Monomial { factors: out })
    }
}

/// Graded lexicographic order: total degree first, then lexicographic on
/// exponents with earlier-interned symbols weighing more.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ne => return ne,
        }
        let (mut a, mut b) = (self.factors.iter(), other.factors.iter());
        loop {
            match (a.next(), b.next()) {
                (Some(&(sa, ea)), Some(&(sb, eb))) => match sa.cmp(&sb) {
                    // The side that still has the earlier symbol carries a
                    // positive exponent there, so it compares greater.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => continue,
                        ne => return ne,
                    },
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly::default()
    }

    pub(crate) fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub(crate) fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub(crate) fn symbol(s: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::symbol(s), BigRational::one());
        Poly { terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The constant value when the polynomial has no symbolic part.
    pub(crate) fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub(crate) fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the monomial order (largest key).
    pub(crate) fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn insert_add(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), -c);
        }
        out
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub(crate) fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub(crate) fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Gcd of all monomials: the largest power product dividing every term.
    pub(crate) fn monomial_content(&self) -> Monomial {
        let mut iter = self.terms.keys();
        let mut acc = match iter.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in iter {
            if acc.is_one() {
                break;
            }
            acc = acc.gcd(m);
        }
        acc
    }

    /// Divide every monomial by `m`; caller guarantees divisibility.
    pub(crate) fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial content divides"), c.clone()))
                .collect(),
        }
    }

    /// Rational content `c` with sign of the leading coefficient, so that
    /// `self / c` has coprime integer coefficients and positive leading term.
    pub(crate) fn content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if let Some((_, lead)) = self.leading() {
            if lead.is_negative() {
                content = -content;
            }
        }
        content
    }

    /// Exact polynomial division: `Some(q)` with `self == q * divisor`,
    /// `None` when the division leaves a remainder. Implemented as repeated
    /// leading-term elimination, which for exact divisibility terminates in
    /// `deg(self) - deg(divisor) + 1` rounds at most.
    pub(crate) fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            // Subtract (qc * qm) * divisor from the remainder.
            for (m, c) in &divisor.terms {
                rem.insert_add(qm.mul(m), -(c * &qc));
            }
            quot.insert_add(qm, qc);
        }
        Some(quot)
    }

    pub(crate) fn symbols_into(&self, out: &mut std::collections::BTreeSet<Symbol>) {
        for m in self.terms.keys() {
            for &(s, _) in m.factors() {
                out.insert(s);
            }
        }
    }

    /// Evaluate at a total assignment of the symbols that occur.
    pub(crate) fn eval(
        &self,
        lookup: &dyn Fn(Symbol) -> Option<BigRational>,
    ) -> crate::error::Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(s, e) in m.factors() {
                let v = lookup(s)
                    .ok_or_else(|| crate::error::Error::MissingSymbol(s.name()))?;
                for _ in 0..e {
                    term *= &v;
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Symbol;

    fn sym(n: &str) -> Symbol {
        Symbol::new(n)
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn graded_lex_ranks_degree_first() {
        let x = sym("pt_x");
        let y = sym("pt_y");
        let xy = Monomial::symbol(x).mul(&Monomial::symbol(y));
        let x1 = Monomial::symbol(x);
        assert!(xy > x1);
        assert!(Monomial::one() < x1);
    }

    #[test]
    fn graded_lex_breaks_ties_on_earlier_symbol() {
        let x = sym("pt_x");
        let y = sym("pt_y");
        assert!(x < y, "interner must keep creation order");
        let x2 = Monomial::symbol(x).mul(&Monomial::symbol(x));
        let xy = Monomial::symbol(x).mul(&Monomial::symbol(y));
        let y2 = Monomial::symbol(y).mul(&Monomial::symbol(y));
        assert!(x2 > xy);
        assert!(xy > y2);
    }

    #[test]
    fn mul_merges_and_cancels() {
        let x = sym("pm_x");
        let p = Poly::symbol(x).add(&Poly::one()); // x + 1
        let q = Poly::symbol(x).sub(&Poly::one()); // x - 1
        let prod = p.mul(&q); // x^2 - 1
        assert_eq!(prod.num_terms(), 2);
        let sq = Poly::symbol(x).pow(2);
        assert_eq!(prod.add(&Poly::one()), sq);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let x = sym("pd_x");
        let y = sym("pd_y");
        let p = Poly::symbol(x).add(&Poly::symbol(y)); // x + y
        let q = Poly::symbol(x).sub(&Poly::symbol(y)); // x - y
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&p), Some(q.clone()));
        assert_eq!(prod.div_exact(&q), Some(p.clone()));
        // x^2 - y^2 is not divisible by x + 1.
        let bad = Poly::symbol(x).add(&Poly::one());
        assert_eq!(prod.div_exact(&bad), None);
    }

    #[test]
    fn content_normalizes_sign_and_denominators() {
        let x = sym("pc_x");
        // -3/2 x - 9/4  ->  content -3/4, primitive part 2x + 3
        let p = Poly::symbol(x)
            .scale(&BigRational::new((-3).into(), 2.into()))
            .add(&Poly::constant(BigRational::new((-9).into(), 4.into())));
        let c = p.content();
        assert_eq!(c, BigRational::new((-3).into(), 4.into()));
        let prim = p.scale(&(BigRational::one() / &c));
        let expected = Poly::symbol(x).scale(&r(2)).add(&Poly::constant(r(3)));
        assert_eq!(prim, expected);
    }

    #[test]
    fn monomial_content_and_division() {
        let x = sym("pg_x");
        let y = sym("pg_y");
        // x^2 y + x y^2 has monomial content x y.
        let p = Poly::symbol(x)
            .pow(2)
            .mul(&Poly::symbol(y))
            .add(&Poly::symbol(x).mul(&Poly::symbol(y).pow(2)));
        let mc = p.monomial_content();
        assert_eq!(mc, Monomial::symbol(x).mul(&Monomial::symbol(y)));
        let reduced = p.div_monomial(&mc);
        assert_eq!(reduced, Poly::symbol(x).add(&Poly::symbol(y)));
    }

    #[test]
    fn eval_reports_missing_symbol() {
        let x = sym("pe_x");
        let p = Poly::symbol(x).add(&Poly::one());
        let err = p.eval(&|_| None).unwrap_err();
        assert!(matches!(err, crate::error::Error::MissingSymbol(_)));
        let v = p.eval(&|_| Some(r(4))).unwrap();
        assert_eq!(v, r(5));
    }
}
