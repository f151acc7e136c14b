//! Noncommutative quadratic-algebra engine.
//!
//! Elements are finite linear combinations of words over interned
//! generators, with coefficients in the exact scalar field. A
//! [`QuadraticPresentation`] carries an ordered generator list and one
//! rewrite rule per disordered adjacent pair (plus optional annihilation
//! rules like `x*x -> 0`); rewriting strictly decreases a degree-lex
//! well-order, so [`QuadraticPresentation::normal_form`] always
//! terminates, with leftmost-first and rightmost-first strategies exposed
//! for confluence spot-checks.

mod checks;
mod presentations;
mod rtt;
mod span;

pub use checks::{
    verify_coaction_invariance, verify_primed_qybe, verify_realization_gl,
    verify_realization_single_tau, verify_x_relations,
};
pub use presentations::{
    coaction_presentation, extended_presentation, gl_multiparam_presentation, gl_presentation,
    multiparam_relations, multiparam_relations_with, plane_presentation, single_tau_presentation,
    t_gen, tau_gen, tilde_gen, x_gen, y_gen, PlaneKind,
};
pub use rtt::{generate_rtt_relations, generate_rtt_relations_with, verify_rtt_match};
pub use span::SpanBasis;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::ScalarExpr;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct GenRegistry {
    names: Vec<String>,
    by_name: HashMap<String, u32>,
}

static GEN_REGISTRY: Lazy<RwLock<GenRegistry>> = Lazy::new(|| {
    RwLock::new(GenRegistry { names: Vec::new(), by_name: HashMap::new() })
});

/// An interned free-algebra generator. Identity is by name; the ordering
/// used for rewriting comes from a presentation's generator list, not
/// from interning order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u32);

impl Gen {
    pub fn new(name: &str) -> Gen {
        assert!(
            !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
            "generator names are ascii identifiers, got {name:?}"
        );
        {
            let reg = GEN_REGISTRY.read().unwrap();
            if let Some(&id) = reg.by_name.get(name) {
                return Gen(id);
            }
        }
        let mut reg = GEN_REGISTRY.write().unwrap();
        if let Some(&id) = reg.by_name.get(name) {
            return Gen(id);
        }
        let id = u32::try_from(reg.names.len()).expect("generator space exhausted");
        reg.names.push(name.to_string());
        reg.by_name.insert(name.to_string(), id);
        Gen(id)
    }

    pub fn name(self) -> String {
        GEN_REGISTRY.read().unwrap().names[self.0 as usize].clone()
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A word: a finite product of generators. The empty word is the unit.
pub type Word = Vec<Gen>;

fn word_string(w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|g| g.name()).collect::<Vec<_>>().join("*")
    }
}

// ---------------------------------------------------------------------------
// Free elements
// ---------------------------------------------------------------------------

/// A linear combination of words with exact scalar coefficients.
/// Zero-coefficient terms are pruned on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeElement {
    terms: BTreeMap<Word, ScalarExpr>,
}

impl FreeElement {
    pub fn zero() -> FreeElement {
        FreeElement { terms: BTreeMap::new() }
    }

    pub fn one() -> FreeElement {
        FreeElement::term(ScalarExpr::one(), Vec::new())
    }

    pub fn gen(g: Gen) -> FreeElement {
        FreeElement::term(ScalarExpr::one(), vec![g])
    }

    pub fn word(w: &[Gen]) -> FreeElement {
        FreeElement::term(ScalarExpr::one(), w.to_vec())
    }

    pub fn term(coeff: ScalarExpr, word: Word) -> FreeElement {
        let mut e = FreeElement::zero();
        e.add_term(coeff, word);
        e
    }

    pub fn add_term(&mut self, coeff: ScalarExpr, word: Word) {
        if coeff.is_zero_expand() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero_expand() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarExpr)> {
        self.terms.iter()
    }

    /// The greatest word under the storage order, used as elimination
    /// pivot.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, w: &Word) -> ScalarExpr {
        self.terms.get(w).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(-c.clone(), w.clone());
        }
        out
    }

    pub fn scale(&self, c: &ScalarExpr) -> FreeElement {
        if c.is_zero_expand() {
            return FreeElement::zero();
        }
        let mut out = FreeElement::zero();
        for (w, k) in &self.terms {
            out.add_term(k * c, w.clone());
        }
        out
    }

    pub fn neg(&self) -> FreeElement {
        self.scale(&-ScalarExpr::one())
    }

    pub fn mul(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(c1 * c2, w);
            }
        }
        out
    }

    /// Replaces every occurrence of a generator by a scaled word, e.g. a
    /// realization formula. Generators without an image stay themselves.
    pub fn substitute(&self, images: &BTreeMap<Gen, (ScalarExpr, Word)>) -> FreeElement {
        let mut out = FreeElement::zero();
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Vec::with_capacity(w.len());
            for g in w {
                match images.get(g) {
                    Some((s, img)) => {
                        coeff = &coeff * s;
                        word.extend_from_slice(img);
                    }
                    None => word.push(*g),
                }
            }
            out.add_term(coeff, word);
        }
        out
    }

    /// Applies a scalar-level substitution to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> FreeElement {
        let mut out = FreeElement::zero();
        for (w, c) in &self.terms {
            out.add_term(f(c), w.clone());
        }
        out
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*{}", word_string(w))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

/// Reduction strategy: which disordered pair of a word is rewritten
/// first. Both must agree on a confluent rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// An ordered generator alphabet with quadratic rewrite rules. Each rule
/// maps an adjacent pair `g*h` (with `g` strictly after `h` in the order,
/// or `g == h` for annihilation rules) to a combination of words that are
/// strictly smaller in the degree-lex order, so rewriting terminates.
#[derive(Debug, Clone)]
pub struct QuadraticPresentation {
    name: String,
    gens: Vec<Gen>,
    rules: HashMap<(Gen, Gen), Vec<(ScalarExpr, Word)>>,
}

impl QuadraticPresentation {
    pub fn new(
        name: &str,
        gens: Vec<Gen>,
        rules: Vec<((Gen, Gen), Vec<(ScalarExpr, Word)>)>,
    ) -> Result<QuadraticPresentation> {
        let mut rank = HashMap::new();
        for (pos, g) in gens.iter().enumerate() {
            if rank.insert(*g, pos).is_some() {
                return Err(Error::Invalid(format!("duplicate generator {g}")));
            }
        }
        let mut table = HashMap::new();
        for ((g, h), rhs) in rules {
            let (rg, rh) = match (rank.get(&g), rank.get(&h)) {
                (Some(a), Some(b)) => (*a, *b),
                _ => {
                    return Err(Error::Invalid(format!(
                        "rule pair {g}*{h} uses an undeclared generator"
                    )))
                }
            };
            if rg < rh {
                return Err(Error::Invalid(format!(
                    "rule pair {g}*{h} is already ordered; rules rewrite disordered pairs"
                )));
            }
            for (_, w) in &rhs {
                if w.len() > 2 {
                    return Err(Error::Invalid(format!(
                        "rule for {g}*{h} has a right side of degree {}",
                        w.len()
                    )));
                }
                for x in w {
                    if !rank.contains_key(x) {
                        return Err(Error::Invalid(format!(
                            "rule for {g}*{h} mentions undeclared generator {x}"
                        )));
                    }
                }
                // Termination: every full-degree replacement must be
                // strictly smaller in lex order on ranks.
                if w.len() == 2 {
                    let key = (rank[&w[0]], rank[&w[1]]);
                    if key >= (rg, rh) {
                        return Err(Error::Invalid(format!(
                            "rule for {g}*{h} does not decrease the word order ({} {})",
                            w[0], w[1]
                        )));
                    }
                }
            }
            if table.insert((g, h), rhs).is_some() {
                return Err(Error::Invalid(format!("duplicate rule for pair {g}*{h}")));
            }
        }
        Ok(QuadraticPresentation { name: name.to_string(), gens, rules: table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    fn rule(&self, g: Gen, h: Gen) -> Option<&[(ScalarExpr, Word)]> {
        self.rules.get(&(g, h)).map(|r| r.as_slice())
    }

    /// Each rule as a defining element: the disordered word minus its
    /// replacement. Sorted by the disordered pair for stable output.
    pub fn rule_elements(&self) -> Vec<((Gen, Gen), FreeElement)> {
        let mut out: Vec<((Gen, Gen), FreeElement)> = self
            .rules
            .iter()
            .map(|(&(g, h), rhs)| {
                let mut e = FreeElement::word(&[g, h]);
                for (c, w) in rhs {
                    e.add_term(-c.clone(), w.clone());
                }
                ((g, h), e)
            })
            .collect();
        out.sort_by_key(|&((g, h), _)| (g, h));
        out
    }

    /// The position of the first rewritable adjacent pair under the given
    /// strategy.
    fn redex(&self, w: &Word, strategy: Strategy) -> Option<usize> {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..w.len().saturating_sub(1)),
            Strategy::Rightmost => Box::new((0..w.len().saturating_sub(1)).rev()),
        };
        for t in positions {
            if self.rules.contains_key(&(w[t], w[t + 1])) {
                return Some(t);
            }
        }
        None
    }

    /// Fully reduces an element. Terminates because every rewrite
    /// strictly decreases the degree-lex order on words.
    pub fn normal_form(&self, e: &FreeElement, strategy: Strategy) -> FreeElement {
        let mut out = FreeElement::zero();
        let mut work: Vec<(ScalarExpr, Word)> =
            e.terms().map(|(w, c)| (c.clone(), w.clone())).collect();
        while let Some((coeff, word)) = work.pop() {
            match self.redex(&word, strategy) {
                None => out.add_term(coeff, word),
                Some(t) => {
                    let rhs = self.rule(word[t], word[t + 1]).expect("redex has a rule");
                    for (c, repl) in rhs {
                        let mut w = Vec::with_capacity(word.len() - 2 + repl.len());
                        w.extend_from_slice(&word[..t]);
                        w.extend_from_slice(repl);
                        w.extend_from_slice(&word[t + 2..]);
                        work.push((&coeff * c, w));
                    }
                }
            }
        }
        out
    }

    /// True when the element reduces to zero.
    pub fn reduces_to_zero(&self, e: &FreeElement) -> bool {
        self.normal_form(e, Strategy::Leftmost).is_zero()
    }
}

// ---------------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    name: String,
    generators: Vec<String>,
    /// Each rule: [[left1, left2], [[coeff, [word...]], ...]]
    rules: Vec<((String, String), Vec<(String, Vec<String>)>)>,
}

impl Serialize for QuadraticPresentation {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rules: Vec<((String, String), Vec<(String, Vec<String>)>)> = self
            .rules
            .iter()
            .map(|((g, h), rhs)| {
                (
                    (g.name(), h.name()),
                    rhs.iter()
                        .map(|(c, w)| (c.to_string(), w.iter().map(|x| x.name()).collect()))
                        .collect(),
                )
            })
            .collect();
        rules.sort();
        PresentationJson {
            name: self.name.clone(),
            generators: self.gens.iter().map(|g| g.name()).collect(),
            rules,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QuadraticPresentation {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = PresentationJson::deserialize(de)?;
        let gens: Vec<Gen> = raw.generators.iter().map(|s| Gen::new(s)).collect();
        let rules = raw
            .rules
            .into_iter()
            .map(|((g, h), rhs)| {
                let rhs = rhs
                    .into_iter()
                    .map(|(c, w)| {
                        let coeff: ScalarExpr = c.parse().map_err(D::Error::custom)?;
                        Ok((coeff, w.iter().map(|x| Gen::new(x)).collect::<Word>()))
                    })
                    .collect::<std::result::Result<Vec<_>, D::Error>>()?;
                Ok(((Gen::new(&g), Gen::new(&h)), rhs))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        QuadraticPresentation::new(&raw.name, gens, rules).map_err(D::Error::custom)
    }
}
