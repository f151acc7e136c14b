//! Exact linear algebra over free-algebra elements: membership of an
//! element in the scalar-linear span of a relation list, with the
//! combination coefficients returned as a certificate.

use std::collections::BTreeMap;

use crate::scalar::ScalarExpr;

use super::{FreeElement, Word};

/// A pivot: element with leading coefficient one, plus its expression as
/// a combination of the originally inserted relations.
struct Pivot {
    element: FreeElement,
    combo: BTreeMap<usize, ScalarExpr>,
}

/// Row-echelon basis of a list of FreeElements over the scalar fraction
/// field. Insertion order indexes the certificate coefficients.
pub struct SpanBasis {
    pivots: BTreeMap<Word, Pivot>,
    inserted: usize,
}

impl Default for SpanBasis {
    fn default() -> Self {
        SpanBasis::new()
    }
}

impl SpanBasis {
    pub fn new() -> SpanBasis {
        SpanBasis { pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn from_relations<'a>(rels: impl IntoIterator<Item = &'a FreeElement>) -> SpanBasis {
        let mut basis = SpanBasis::new();
        for r in rels {
            basis.insert(r);
        }
        basis
    }

    /// Number of elements inserted (certificate index space).
    pub fn len(&self) -> usize {
        self.inserted
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce_tracked(
        &self,
        e: &FreeElement,
    ) -> (FreeElement, BTreeMap<usize, ScalarExpr>) {
        let mut rem = e.clone();
        let mut combo: BTreeMap<usize, ScalarExpr> = BTreeMap::new();
        loop {
            // Eliminate the greatest word that matches a pivot; terms
            // iterate in ascending word order, so the last hit is it.
            let hit = rem
                .terms()
                .filter(|(w, _)| self.pivots.contains_key(*w))
                .last()
                .map(|(w, c)| (w.clone(), c.clone()));
            match hit {
                None => return (rem, combo),
                Some((w, c)) => {
                    let pivot = &self.pivots[&w];
                    rem = rem.sub(&pivot.element.scale(&c));
                    for (idx, k) in &pivot.combo {
                        let entry = combo.entry(*idx).or_insert_with(ScalarExpr::zero);
                        *entry = &*entry + &(&c * k);
                    }
                }
            }
        }
    }

    /// Inserts a relation; returns true when it enlarged the span.
    pub fn insert(&mut self, e: &FreeElement) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce_tracked(e);
        match rem.leading_word().cloned() {
            None => false,
            Some(lead) => {
                let lc = rem.coeff(&lead);
                let inv = lc.pow(-1);
                let element = rem.scale(&inv);
                // pivot = (e - sum combo_i rel_i) / lc, so as a combination
                // of originals: coeff of e is 1/lc, the rest are -combo/lc.
                let mut pivot_combo: BTreeMap<usize, ScalarExpr> = combo
                    .into_iter()
                    .map(|(i, c)| (i, -(&c * &inv)))
                    .collect();
                pivot_combo.insert(idx, inv);
                self.pivots.insert(lead, Pivot { element, combo: pivot_combo });
                true
            }
        }
    }

    /// Reduces an element modulo the span; the remainder is zero exactly
    /// when the element is a scalar-linear combination of the inserted
    /// relations.
    pub fn reduce(&self, e: &FreeElement) -> FreeElement {
        self.reduce_tracked(e).0
    }

    /// Span membership with certificate: `e = sum over i of c_i * rel_i`
    /// where `rel_i` is the i-th inserted relation. Returns None when the
    /// element is outside the span.
    pub fn express(&self, e: &FreeElement) -> Option<Vec<(usize, ScalarExpr)>> {
        let (rem, combo) = self.reduce_tracked(e);
        if !rem.is_zero() {
            return None;
        }
        Some(combo.into_iter().filter(|(_, c)| !c.is_zero_expand()).collect())
    }

    pub fn contains(&self, e: &FreeElement) -> bool {
        self.reduce(e).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::super::Gen;
    use super::*;

    fn e(terms: &[(i64, &[Gen])]) -> FreeElement {
        let mut out = FreeElement::zero();
        for (c, w) in terms {
            out.add_term(ScalarExpr::int(*c), w.to_vec());
        }
        out
    }

    #[test]
    fn membership_and_certificate() {
        let (a, b) = (Gen::new("sa"), Gen::new("sb"));
        let r1 = e(&[(1, &[a, b]), (2, &[b, a])]);
        let r2 = e(&[(1, &[b, a]), (1, &[a, a])]);
        let mut basis = SpanBasis::new();
        assert!(basis.insert(&r1));
        assert!(basis.insert(&r2));
        // target = 3 r1 - 2 r2
        let target = r1.scale(&ScalarExpr::int(3)).sub(&r2.scale(&ScalarExpr::int(2)));
        let cert = basis.express(&target).unwrap();
        let mut rebuilt = FreeElement::zero();
        for (i, c) in &cert {
            let rel = if *i == 0 { &r1 } else { &r2 };
            rebuilt = rebuilt.add(&rel.scale(c));
        }
        assert_eq!(rebuilt, target);
        assert_eq!(cert.len(), 2);
    }

    #[test]
    fn dependent_insert_reports_no_growth() {
        let (a, b) = (Gen::new("sa"), Gen::new("sb"));
        let r1 = e(&[(1, &[a, b]), (2, &[b, a])]);
        let mut basis = SpanBasis::new();
        assert!(basis.insert(&r1));
        assert!(!basis.insert(&r1.scale(&ScalarExpr::int(5))));
        assert_eq!(basis.rank(), 1);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn outside_element_rejected() {
        let (a, b) = (Gen::new("sa"), Gen::new("sb"));
        let r1 = e(&[(1, &[a, b])]);
        let basis = SpanBasis::from_relations([&r1]);
        let target = e(&[(1, &[b, b])]);
        assert!(basis.express(&target).is_none());
        assert!(!basis.contains(&target));
    }
}
