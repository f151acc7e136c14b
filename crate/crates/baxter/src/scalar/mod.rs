//! Exact symbolic scalars: multivariate rational functions over `Q`.
//!
//! A [`ScalarExpr`] is a quotient of two sparse polynomials kept in a
//! canonical-enough form that the zero test in expand mode is a complete
//! decision procedure: the numerator of a canonicalized expression is the
//! empty polynomial exactly when the expression is identically zero.
//!
//! Symbols are interned globally. A symbol is either plain (`q`, `lambda`,
//! `h`, ...) or a square-root pair symbol `s_i_j` with `i < j`, squaring to
//! the deformation entry `phi_i_j`. The reciprocal pair `s_j_i` and the
//! entry `phi_i_j` itself are not symbols: the expression layer resolves
//! `s_j_i = 1/s_i_j`, `s_i_i = 1`, `phi_i_j = s_i_j^2`, `phi_j_i = s_i_j^-2`,
//! and `phi_i_i = 1`, so the antisymmetry `phi_i_j * phi_j_i = 1` holds by
//! construction.

mod parse;
mod poly;
mod sample;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::RwLock;

use num::rational::BigRational;
use num::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
pub use parse::parse_expr;
pub use sample::{PointSampler, SampleConfig};
use poly::Poly;

// ---------------------------------------------------------------------------
// Symbol interner
// ---------------------------------------------------------------------------

/// What a symbol stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// An ordinary indeterminate.
    Plain,
    /// The square root `s_i_j` (with `i < j`) of the deformation entry
    /// `phi_i_j`.
    RootPair(u32, u32),
}

#[derive(Default)]
struct Registry {
    names: Vec<String>,
    kinds: Vec<SymbolKind>,
    by_name: HashMap<String, u32>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| RwLock::new(Registry::default()));

/// An interned indeterminate. Ordering follows interning order, which fixes
/// the monomial order; all orderings derived from it are deterministic
/// within one process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

/// Splits `name` as `<prefix>_<i>_<j>` with decimal `i`, `j`.
fn split_indexed(name: &str, prefix: &str) -> Option<(u32, u32)> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('_')?;
    let (a, b) = rest.split_once('_')?;
    if a.is_empty() || b.is_empty() || !a.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if !b.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn intern(name: &str, kind: SymbolKind) -> Symbol {
    {
        let reg = REGISTRY.read().expect("symbol registry poisoned");
        if let Some(&id) = reg.by_name.get(name) {
            return Symbol(id);
        }
    }
    let mut reg = REGISTRY.write().expect("symbol registry poisoned");
    if let Some(&id) = reg.by_name.get(name) {
        return Symbol(id);
    }
    let id = reg.names.len() as u32;
    reg.names.push(name.to_string());
    reg.kinds.push(kind);
    reg.by_name.insert(name.to_string(), id);
    Symbol(id)
}

impl Symbol {
    /// Interns a plain symbol. Names of the shape `s_i_j` or `phi_i_j` are
    /// reserved for the root-pair machinery and rejected here.
    ///
    /// # Panics
    /// Panics on an empty name or a reserved root-pair or `phi` name; use
    /// [`Symbol::root_pair`] and [`ScalarExpr::phi`] for those.
    pub fn new(name: &str) -> Symbol {
        assert!(!name.is_empty(), "symbol name must be nonempty");
        assert!(
            split_indexed(name, "s").is_none() && split_indexed(name, "phi").is_none(),
            "`{name}` is reserved; use Symbol::root_pair / ScalarExpr::phi"
        );
        intern(name, SymbolKind::Plain)
    }

    /// Interns the root symbol `s_i_j`; requires `i < j` (the reciprocal
    /// orientation is an expression, not a symbol).
    pub fn root_pair(i: u32, j: u32) -> Symbol {
        assert!(i < j, "root symbol wants i < j, got ({i}, {j})");
        intern(&format!("s_{i}_{j}"), SymbolKind::RootPair(i, j))
    }

    /// The interned name.
    pub fn name(self) -> String {
        REGISTRY.read().expect("symbol registry poisoned").names[self.0 as usize].clone()
    }

    /// Plain or root-pair.
    pub fn kind(self) -> SymbolKind {
        REGISTRY.read().expect("symbol registry poisoned").kinds[self.0 as usize]
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Interning helpers for the symbols the builders use throughout.
pub mod names {
    use super::Symbol;

    /// `q`: the trigonometric deformation parameter.
    pub fn q() -> Symbol {
        Symbol::new("q")
    }
    /// `h`: the rational deformation step.
    pub fn h() -> Symbol {
        Symbol::new("h")
    }
    /// `lambda`: first spectral parameter.
    pub fn lambda() -> Symbol {
        Symbol::new("lambda")
    }
    /// `mu`: second spectral parameter.
    pub fn mu() -> Symbol {
        Symbol::new("mu")
    }
    /// `nu`: third spectral parameter.
    pub fn nu() -> Symbol {
        Symbol::new("nu")
    }
    /// `alpha`: first colour parameter.
    pub fn alpha() -> Symbol {
        Symbol::new("alpha")
    }
    /// `beta`: second colour parameter.
    pub fn beta() -> Symbol {
        Symbol::new("beta")
    }
    /// `gamma`: third colour parameter.
    pub fn gamma() -> Symbol {
        Symbol::new("gamma")
    }
}

// ---------------------------------------------------------------------------
// ScalarExpr
// ---------------------------------------------------------------------------

/// Total assignment of rational values to symbols, for evaluation.
pub type Assignment = BTreeMap<Symbol, BigRational>;

/// How a zero test (or an operator identity check) is decided.
#[derive(Debug, Clone)]
pub enum CheckMode {
    /// Full symbolic expansion; a complete decision procedure.
    Expand,
    /// Evaluation at seeded random rational points; sound for nonzero
    /// detection, probabilistic for zero.
    Sample(SampleConfig),
}

/// A multivariate rational function with exact rational coefficients.
///
/// Invariants after construction: the denominator is never the zero
/// polynomial; a zero numerator forces denominator `1`; numerator and
/// denominator share no monomial factor; when one divides the other the
/// quotient is taken; the denominator has coprime integer coefficients and
/// positive leading coefficient.
#[derive(Debug, Clone)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    fn make(num: Poly, den: Poly) -> ScalarExpr {
        assert!(!den.is_zero(), "denominator must not be the zero polynomial");
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return ScalarExpr { num, den: Poly::one() };
        }
        // Cancel the shared monomial factor.
        let mc = num.monomial_content().gcd(&den.monomial_content());
        if !mc.is_one() {
            num = num.div_monomial(&mc);
            den = den.div_monomial(&mc);
        }
        // Cancel when one side divides the other outright.
        if !den.is_one() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Poly::one();
            } else if let Some(q) = den.div_exact(&num) {
                num = Poly::one();
                den = q;
            }
        }
        // Normalize the denominator's rational content into the numerator.
        let c = den.content();
        if !c.is_one() {
            let inv = BigRational::one() / &c;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarExpr { num, den }
    }

    /// The additive identity.
    pub fn zero() -> ScalarExpr {
        ScalarExpr { num: Poly::zero(), den: Poly::one() }
    }

    /// The multiplicative identity.
    pub fn one() -> ScalarExpr {
        ScalarExpr { num: Poly::one(), den: Poly::one() }
    }

    /// An integer constant.
    pub fn int(n: i64) -> ScalarExpr {
        ScalarExpr::rat(BigRational::from_integer(n.into()))
    }

    /// A rational constant.
    pub fn rat(r: BigRational) -> ScalarExpr {
        ScalarExpr { num: Poly::constant(r), den: Poly::one() }
    }

    /// The expression consisting of one symbol.
    pub fn sym(s: Symbol) -> ScalarExpr {
        ScalarExpr { num: Poly::symbol(s), den: Poly::one() }
    }

    /// Shorthand: intern a plain symbol and lift it.
    pub fn var(name: &str) -> ScalarExpr {
        ScalarExpr::sym(Symbol::new(name))
    }

    /// The square root `s_i_j` of the deformation entry, in any orientation:
    /// `i < j` gives the symbol, `i > j` its reciprocal, `i == j` gives `1`.
    pub fn root(i: u32, j: u32) -> ScalarExpr {
        match i.cmp(&j) {
            Ordering::Less => ScalarExpr::sym(Symbol::root_pair(i, j)),
            Ordering::Equal => ScalarExpr::one(),
            Ordering::Greater => ScalarExpr {
                num: Poly::one(),
                den: Poly::symbol(Symbol::root_pair(j, i)),
            },
        }
    }

    /// The deformation entry `phi_i_j = s_i_j^2`, in any orientation; the
    /// antisymmetry `phi_i_j * phi_j_i = 1` and `phi_i_i = 1` hold by
    /// construction.
    pub fn phi(i: u32, j: u32) -> ScalarExpr {
        ScalarExpr::root(i, j).pow(2)
    }

    /// True exactly when the expression is identically zero.
    pub fn is_zero_expand(&self) -> bool {
        self.num.is_zero()
    }

    /// True exactly when the expression is identically one.
    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The constant value, when no symbol occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// All symbols occurring in numerator or denominator.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.num.symbols_into(&mut out);
        self.den.symbols_into(&mut out);
        out
    }

    /// Term counts `(numerator, denominator)`, a crude size measure.
    pub fn size(&self) -> (usize, usize) {
        (self.num.num_terms(), self.den.num_terms())
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<ScalarExpr> {
        if self.is_zero_expand() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarExpr::make(self.den.clone(), self.num.clone()))
    }

    /// Integer power, negative exponents allowed.
    ///
    /// # Panics
    /// Panics when raising zero to a negative power.
    pub fn pow(&self, e: i64) -> ScalarExpr {
        if e == 0 {
            return ScalarExpr::one();
        }
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mag = e.unsigned_abs();
        let mag = u32::try_from(mag).expect("exponent magnitude fits in u32");
        ScalarExpr::make(base.num.pow(mag), base.den.pow(mag))
    }

    /// Division with an error instead of a panic on an identically zero
    /// divisor.
    pub fn checked_div(&self, other: &ScalarExpr) -> Result<ScalarExpr> {
        if other.is_zero_expand() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarExpr::make(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    /// Evaluate at a point; every occurring symbol needs a value.
    pub fn eval(&self, point: &Assignment) -> Result<BigRational> {
        let lookup = |s: Symbol| point.get(&s).cloned();
        let d = self.den.eval(&lookup)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let n = self.num.eval(&lookup)?;
        Ok(n / d)
    }

    /// Simultaneous substitution of symbols by expressions. Errors when the
    /// substituted denominator collapses to zero.
    pub fn subst(&self, map: &BTreeMap<Symbol, ScalarExpr>) -> Result<ScalarExpr> {
        let num = subst_poly(&self.num, map);
        let den = subst_poly(&self.den, map);
        if den.is_zero_expand() {
            return Err(Error::SubstitutionCollapse);
        }
        num.checked_div(&den)
    }

    /// Symbol-for-symbol renaming; infallible.
    pub fn rename(&self, map: &BTreeMap<Symbol, Symbol>) -> ScalarExpr {
        let exprs: BTreeMap<Symbol, ScalarExpr> =
            map.iter().map(|(&a, &b)| (a, ScalarExpr::sym(b))).collect();
        self.subst(&exprs).expect("renaming cannot collapse a denominator")
    }

    /// Decides whether the expression is identically zero, by full
    /// expansion or by seeded sampling.
    pub fn is_zero(&self, mode: &CheckMode) -> Result<bool> {
        match mode {
            CheckMode::Expand => Ok(self.is_zero_expand()),
            CheckMode::Sample(cfg) => {
                let symbols = self.symbols();
                let mut sampler = PointSampler::new(cfg.clone());
                for _ in 0..cfg.points {
                    let (point, value) = sampler.eval_with_retry(&symbols, self)?;
                    if !value.is_zero() {
                        let _ = point;
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

}

fn subst_poly(p: &Poly, map: &BTreeMap<Symbol, ScalarExpr>) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for (m, c) in p.terms() {
        let mut term = ScalarExpr::rat(c.clone());
        for &(s, e) in m.factors() {
            let base = match map.get(&s) {
                Some(expr) => expr.clone(),
                None => ScalarExpr::sym(s),
            };
            term = term * base.pow(e as i64);
        }
        acc = acc + term;
    }
    acc
}

/// Equality is extensional: cross-multiplied difference is the zero
/// polynomial.
impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for ScalarExpr {}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        &self + &rhs
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.den == rhs.den {
            return ScalarExpr::make(self.num.add(&rhs.num), self.den.clone());
        }
        ScalarExpr::make(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: ScalarExpr) -> ScalarExpr {
        &self - &rhs
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.den == rhs.den {
            return ScalarExpr::make(self.num.sub(&rhs.num), self.den.clone());
        }
        ScalarExpr::make(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        &self * &rhs
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::make(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

/// # Panics
/// Panics when the divisor is identically zero; use
/// [`ScalarExpr::checked_div`] for data-driven divisors.
impl Div for ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: ScalarExpr) -> ScalarExpr {
        &self / &rhs
    }
}

impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.checked_div(rhs).expect("division by identically zero expression")
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr { num: self.num.neg(), den: self.den }
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.clone().neg()
    }
}

impl std::iter::Sum for ScalarExpr {
    fn sum<I: Iterator<Item = ScalarExpr>>(iter: I) -> ScalarExpr {
        iter.fold(ScalarExpr::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for ScalarExpr {
    fn product<I: Iterator<Item = ScalarExpr>>(iter: I) -> ScalarExpr {
        iter.fold(ScalarExpr::one(), |a, b| a * b)
    }
}

// ---------------------------------------------------------------------------
// Display: a form the parser reads back
// ---------------------------------------------------------------------------

fn fmt_rational(c: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    // Terms print leading-first for readability.
    for (idx, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let abs = c.abs();
        if idx == 0 {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        let coeff_is_one = abs.is_one();
        if m.is_one() {
            fmt_rational(&abs, f)?;
        } else {
            if !coeff_is_one {
                fmt_rational(&abs, f)?;
                f.write_str("*")?;
            }
            for (fidx, &(s, e)) in m.factors().iter().enumerate() {
                if fidx > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{}", s)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_poly(&self.num, f);
        }
        let num_needs_parens = self.num.num_terms() > 1;
        if num_needs_parens {
            f.write_str("(")?;
        }
        fmt_poly(&self.num, f)?;
        if num_needs_parens {
            f.write_str(")")?;
        }
        f.write_str(" / ")?;
        let den_needs_parens = self.den.num_terms() > 1 || {
            // A single term with several factors or a coefficient also needs
            // parens, since `/` binds like `*`.
            match self.den.leading() {
                Some((m, c)) => !(m.factors().len() == 1 && m.factors()[0].1 == 1 && c.is_one()),
                None => false,
            }
        };
        if den_needs_parens {
            f.write_str("(")?;
        }
        fmt_poly(&self.den, f)?;
        if den_needs_parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl serde::Serialize for ScalarExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ScalarExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_expr(&s).map_err(serde::de::Error::custom)
    }
}
