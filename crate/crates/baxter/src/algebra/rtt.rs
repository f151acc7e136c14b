//! Quadratic relations generated by a solution matrix: the exchange
//! equation `R T1 T2 = T2 T1 R` read entrywise. For a particle-conserving
//! matrix each index quadruple `(i, j, k, l)` contributes
//!
//! ```text
//! f_ij T_ik T_jl + g_ij T_jk T_il - f_kl T_jl T_ik - g_lk T_jk T_il = 0
//! ```
//!
//! (the two middle words coincide without spectral parameters and merge).
//! [`verify_rtt_match`] compares the generated set against a hand-coded
//! presentation in both directions: every generated relation reduces to
//! zero under the rules, and every rule is a linear combination of
//! generated relations.

use crate::error::{Error, Result};
use crate::report::{CheckItem, CheckReport};
use crate::rmatrix::{ParticleConservingR, SpectralKind};

use super::presentations::t_gen;
use super::span::SpanBasis;
use super::{FreeElement, Gen, QuadraticPresentation};

/// Drops identically-zero relations and keeps one representative per
/// scalar-multiple class.
fn prune(raw: Vec<(String, FreeElement)>) -> Vec<(String, FreeElement)> {
    let mut kept: Vec<(String, FreeElement)> = Vec::new();
    let mut normals: Vec<FreeElement> = Vec::new();
    for (label, rel) in raw {
        if rel.is_zero() {
            continue;
        }
        let lead = rel.leading_word().expect("nonzero element").clone();
        let normal = rel.scale(&rel.coeff(&lead).pow(-1));
        if normals.iter().any(|seen| seen.sub(&normal).is_zero()) {
            continue;
        }
        normals.push(normal);
        kept.push((label, rel));
    }
    kept
}

/// Relation elements over caller-chosen generators; the matrix must be
/// free of spectral parameters.
pub fn generate_rtt_relations_with(
    r: &ParticleConservingR,
    gen_of: &dyn Fn(usize, usize) -> Gen,
) -> Result<Vec<(String, FreeElement)>> {
    if r.spectral_kind() != SpectralKind::None {
        return Err(Error::Invalid(
            "relation generation over a single alphabet needs parameter-free tables".into(),
        ));
    }
    let n = r.n();
    let mut raw = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let mut rel = FreeElement::zero();
                    rel.add_term(r.f(i, j), vec![gen_of(i, k), gen_of(j, l)]);
                    rel.add_term(&r.g(i, j) - &r.g(l, k), vec![gen_of(j, k), gen_of(i, l)]);
                    rel.add_term(-r.f(k, l), vec![gen_of(j, l), gen_of(i, k)]);
                    raw.push((format!("quadruple ({i}, {j}, {k}, {l})"), rel));
                }
            }
        }
    }
    Ok(prune(raw))
}

/// Relation elements of the exchange equation. In spectralless mode the
/// entries live on one alphabet `T_i_j`; otherwise the two parameter slots
/// get separate alphabets `Ta_i_j` and `Tb_i_j` and the coefficients keep
/// their parameter dependence.
pub fn generate_rtt_relations(
    r: &ParticleConservingR,
    spectralless: bool,
) -> Result<Vec<(String, FreeElement)>> {
    if spectralless {
        return generate_rtt_relations_with(r, &t_gen);
    }
    let ta = |i: usize, j: usize| Gen::new(&format!("Ta_{i}_{j}"));
    let tb = |i: usize, j: usize| Gen::new(&format!("Tb_{i}_{j}"));
    let n = r.n();
    let mut raw = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let mut rel = FreeElement::zero();
                    rel.add_term(r.f(i, j), vec![ta(i, k), tb(j, l)]);
                    rel.add_term(r.g(i, j), vec![ta(j, k), tb(i, l)]);
                    rel.add_term(-r.f(k, l), vec![tb(j, l), ta(i, k)]);
                    rel.add_term(-r.g(l, k), vec![tb(j, k), ta(i, l)]);
                    raw.push((format!("quadruple ({i}, {j}, {k}, {l})"), rel));
                }
            }
        }
    }
    Ok(prune(raw))
}

/// Bidirectional equivalence between the generated relation set and a
/// hand-coded presentation over the same alphabet: generated relations
/// reduce to zero under the rules, and each rule element is expressed as
/// an explicit linear combination of generated relations.
pub fn verify_rtt_match(
    r: &ParticleConservingR,
    p: &QuadraticPresentation,
    gen_of: &dyn Fn(usize, usize) -> Gen,
) -> Result<CheckReport> {
    let generated = generate_rtt_relations_with(r, gen_of)?;
    let mut checks = Vec::new();
    for (label, rel) in &generated {
        let name = format!("generated {label} reduces to zero");
        if p.reduces_to_zero(rel) {
            checks.push(CheckItem::pass(name));
        } else {
            let nf = p.normal_form(rel, super::Strategy::Leftmost);
            checks.push(CheckItem::fail(name).with_detail(format!("normal form {nf}")));
        }
    }
    let span = SpanBasis::from_relations(generated.iter().map(|(_, rel)| rel));
    for ((g, h), elem) in p.rule_elements() {
        let name = format!("rule ({g}, {h}) in the generated span");
        match span.express(&elem) {
            Some(combo) => {
                let parts: Vec<String> = combo
                    .iter()
                    .map(|(idx, c)| format!("({c})*[{}]", generated[*idx].0))
                    .collect();
                checks.push(CheckItem::pass(name).with_detail(parts.join(" + ")));
            }
            None => {
                checks.push(CheckItem::fail(name).with_detail("no linear combination found"));
            }
        }
    }
    Ok(CheckReport::new(
        format!("rtt-match: {}", p.name()),
        "expand",
        None,
        checks,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::presentations::{
        gl_multiparam_presentation, gl_presentation, tilde_gen,
    };
    use super::*;
    use crate::scalar::ScalarExpr;
    use crate::rmatrix::StandardKind;
    use crate::scalar::names;

    fn trig(n: usize) -> ParticleConservingR {
        ParticleConservingR::build_standard(StandardKind::Trig { n }).unwrap()
    }

    fn multiparam(n: usize) -> ParticleConservingR {
        ParticleConservingR::build_standard(StandardKind::Multiparam { n }).unwrap()
    }

    fn rational(n: usize) -> ParticleConservingR {
        ParticleConservingR::build_standard(StandardKind::Rational { n }).unwrap()
    }

    fn failures(report: &CheckReport) -> Vec<String> {
        report.failures().map(|c| format!("{}: {:?}", c.name, c.detail)).collect()
    }

    #[test]
    fn single_parameter_solution_matches_hand_rules() {
        for n in [2, 3] {
            let r = trig(n);
            let p = gl_presentation(n).unwrap();
            let report = verify_rtt_match(&r, &p, &t_gen).unwrap();
            assert!(report.passed(), "{:?}", failures(&report));
        }
    }

    #[test]
    fn multiparam_solution_matches_hand_rules() {
        for n in [2, 3] {
            let r = multiparam(n);
            let p = gl_multiparam_presentation(n).unwrap();
            let report = verify_rtt_match(&r, &p, &tilde_gen).unwrap();
            assert!(report.passed(), "{:?}", failures(&report));
        }
    }

    #[test]
    fn repeated_index_quadruples_give_row_and_column_relations() {
        // (i, j, k, l) = (1, 1, 1, 2) yields q*T_11*T_12 - T_12*T_11,
        // a scalar multiple of the same-row rule.
        let r = trig(2);
        let rels = generate_rtt_relations(&r, true).unwrap();
        let q = ScalarExpr::sym(names::q());
        let target = FreeElement::term(q, vec![t_gen(1, 1), t_gen(1, 2)])
            .sub(&FreeElement::word(&[t_gen(1, 2), t_gen(1, 1)]));
        assert!(
            rels.iter().any(|(_, rel)| {
                let lead = rel.leading_word().unwrap().clone();
                let tl = target.leading_word().unwrap().clone();
                rel.scale(&rel.coeff(&lead).pow(-1))
                    .sub(&target.scale(&target.coeff(&tl).pow(-1)))
                    .is_zero()
            }),
            "no generated relation is proportional to the same-row rule"
        );
    }

    #[test]
    fn flip_solution_generates_no_relations() {
        // The transposition matrix satisfies the exchange equation with
        // both sides literally equal, so every quadruple cancels.
        let r = ParticleConservingR::flip(3).unwrap();
        let rels = generate_rtt_relations(&r, true).unwrap();
        assert!(rels.is_empty(), "expected empty set, got {} relations", rels.len());
    }

    #[test]
    fn identity_operator_generates_plain_commutators() {
        // The identity matrix is not the trivial solution in this
        // convention; it forces all entries to commute.
        let r = ParticleConservingR::identity(2).unwrap();
        let rels = generate_rtt_relations(&r, true).unwrap();
        assert!(!rels.is_empty());
        for (label, rel) in &rels {
            assert_eq!(rel.num_terms(), 2, "{label} is not a commutator: {rel}");
            let words: Vec<_> = rel.terms().map(|(w, _)| w.clone()).collect();
            let mut rev = words[0].clone();
            rev.reverse();
            assert_eq!(rev, words[1], "{label} is not a commutator: {rel}");
        }
    }

    #[test]
    fn spectral_tables_refuse_the_single_alphabet_mode() {
        let r = rational(2);
        assert!(generate_rtt_relations(&r, true).is_err());
    }

    #[test]
    fn spectral_relations_keep_parameters_and_slot_alphabets() {
        let r = rational(2);
        let rels = generate_rtt_relations(&r, false).unwrap();
        assert!(!rels.is_empty());
        let (_, rel) = rels
            .iter()
            .find(|(label, _)| label == "quadruple (1, 1, 2, 2)")
            .expect("quadruple present");
        let ta12 = Gen::new("Ta_1_2");
        let tb12 = Gen::new("Tb_1_2");
        let c = rel.coeff(&vec![ta12, tb12]);
        assert!(!c.is_zero_expand());
        let syms = c.symbols();
        assert!(syms.contains(&names::lambda()) && syms.contains(&names::mu()));
    }
}
