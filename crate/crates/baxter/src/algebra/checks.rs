//! Structural verifications built on the rewriting engine: the scaled
//! realization of the multiparametric algebra inside the extended one,
//! the block-matrix quantum group on doubled indices, coaction invariance
//! of the noncommutative planes, and the exchange relations of the
//! composite coordinates `X_i = x_i y_i`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::report::{CheckItem, CheckReport};
use crate::scalar::{names, ScalarExpr};

use super::presentations::{
    coaction_presentation, extended_presentation, multiparam_relations,
    multiparam_relations_with, plane_presentation, single_tau_presentation, t_gen, tau_gen,
    tilde_gen, x_gen, y_gen, PlaneKind,
};
use super::{FreeElement, Gen, QuadraticPresentation, Strategy, Word};

fn q() -> ScalarExpr {
    ScalarExpr::sym(names::q())
}

fn qinv() -> ScalarExpr {
    q().pow(-1)
}

fn zero_item(p: &QuadraticPresentation, name: String, e: &FreeElement) -> CheckItem {
    let nf = p.normal_form(e, Strategy::Leftmost);
    if nf.is_zero() {
        CheckItem::pass(name)
    } else {
        CheckItem::fail(name).with_detail(format!("normal form {nf}"))
    }
}

/// Substitutes each multiparametric generator by its scaled pair of
/// diagonal generators, `Tt_ij -> (1/root_ij) tau_i tau_j T_ij`, and
/// reduces every defining relation in the extended presentation.
pub fn verify_realization_gl(n: usize) -> Result<CheckReport> {
    let p = extended_presentation(n)?;
    let mut images: BTreeMap<Gen, (ScalarExpr, Word)> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            images.insert(
                tilde_gen(i, j),
                (
                    ScalarExpr::root(i as u32, j as u32).pow(-1),
                    vec![tau_gen(i), tau_gen(j), t_gen(i, j)],
                ),
            );
        }
    }
    let mut checks = Vec::new();
    for (label, rel) in multiparam_relations(n) {
        let image = rel.substitute(&images);
        checks.push(zero_item(&p, format!("relation {label} maps to zero"), &image));
    }
    Ok(CheckReport::new(
        format!("realization: scaled pairs in the extended algebra, n = {n}"),
        "expand",
        None,
        checks,
    ))
}

/// Single-diagonal-generator variant, valid when the deformation
/// parameters split through a vector of roots: `phi_ij = (rho_i/rho_j)^2`.
/// The image of `Tt_ij` is `(rho_j/rho_i) tau tau T_ij`.
pub fn verify_realization_single_tau(n: usize, rho: &[ScalarExpr]) -> Result<CheckReport> {
    let p = single_tau_presentation(n, rho)?;
    let tau = Gen::new("tau");
    let root_of = |i: usize, j: usize| &rho[i - 1] / &rho[j - 1];
    let mut images: BTreeMap<Gen, (ScalarExpr, Word)> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            images.insert(
                tilde_gen(i, j),
                (root_of(i, j).pow(-1), vec![tau, tau, t_gen(i, j)]),
            );
        }
    }
    let mut checks = Vec::new();
    for (label, rel) in multiparam_relations_with(n, &root_of) {
        let image = rel.substitute(&images);
        checks.push(zero_item(&p, format!("relation {label} maps to zero"), &image));
    }
    Ok(CheckReport::new(
        format!("realization: single diagonal generator, n = {n}"),
        "expand",
        None,
        checks,
    ))
}

/// The doubled-index solution: entries indexed by `1..=2n`, where the
/// first block carries the matrix generators, the second the diagonal
/// ones, and mixed diagonal entries carry parameter roots.
struct DoubledTables {
    n: usize,
}

impl DoubledTables {
    fn base(&self, a: usize) -> usize {
        if a <= self.n {
            a
        } else {
            a - self.n
        }
    }

    fn primed(&self, a: usize) -> bool {
        a > self.n
    }

    fn f(&self, a: usize, b: usize) -> ScalarExpr {
        if self.primed(a) == self.primed(b) {
            if a == b {
                q()
            } else {
                ScalarExpr::one()
            }
        } else {
            ScalarExpr::root(self.base(a) as u32, self.base(b) as u32)
        }
    }

    fn g(&self, a: usize, b: usize) -> ScalarExpr {
        if a < b {
            &q() - &qinv()
        } else {
            ScalarExpr::zero()
        }
    }

    fn entry(&self, a: usize, b: usize) -> FreeElement {
        match (self.primed(a), self.primed(b)) {
            (false, false) => FreeElement::word(&[t_gen(a, b)]),
            (true, true) if a == b => FreeElement::word(&[tau_gen(self.base(a))]),
            _ => FreeElement::zero(),
        }
    }
}

/// Feeds the doubled-index matrix through the exchange equation and
/// reduces every resulting relation in the extended presentation. One
/// item per left index pair, aggregating its `(k, l)` quadruples.
pub fn verify_primed_qybe(n: usize) -> Result<CheckReport> {
    let p = extended_presentation(n)?;
    let d = DoubledTables { n };
    let m = 2 * n;
    let mut checks = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            let mut first_fail: Option<(usize, usize, FreeElement)> = None;
            let mut nontrivial = 0usize;
            for k in 1..=m {
                for l in 1..=m {
                    let mut rel = d.entry(i, k).mul(&d.entry(j, l)).scale(&d.f(i, j));
                    rel = rel.add(&d.entry(j, k).mul(&d.entry(i, l)).scale(&d.g(i, j)));
                    rel = rel.sub(&d.entry(j, l).mul(&d.entry(i, k)).scale(&d.f(k, l)));
                    rel = rel.sub(&d.entry(j, k).mul(&d.entry(i, l)).scale(&d.g(l, k)));
                    if rel.is_zero() {
                        continue;
                    }
                    nontrivial += 1;
                    let nf = p.normal_form(&rel, Strategy::Leftmost);
                    if !nf.is_zero() && first_fail.is_none() {
                        first_fail = Some((k, l, nf));
                    }
                }
            }
            let name = format!("left pair ({i}, {j}): {nontrivial} nontrivial quadruples");
            checks.push(match first_fail {
                None => CheckItem::pass(name),
                Some((k, l, nf)) => CheckItem::fail(name)
                    .with_detail(format!("right pair ({k}, {l}) has normal form {nf}")),
            });
        }
    }
    Ok(CheckReport::new(
        format!("doubled-index exchange relations, n = {n}"),
        "expand",
        None,
        checks,
    ))
}

/// The transformed coordinates: `x'_i = sum_j T_ij x_j` and
/// `y'_i = tau_i y_i`.
fn primed_x(n: usize, i: usize) -> FreeElement {
    let mut e = FreeElement::zero();
    for j in 1..=n {
        e.add_term(ScalarExpr::one(), vec![t_gen(i, j), x_gen(j)]);
    }
    e
}

fn primed_y(i: usize) -> FreeElement {
    FreeElement::word(&[tau_gen(i), y_gen(i)])
}

/// Checks that the transformed coordinates satisfy the same plane
/// relations as the original ones, inside the combined presentation.
pub fn verify_coaction_invariance(n: usize, kind: PlaneKind) -> Result<CheckReport> {
    let p = coaction_presentation(n, kind)?;
    let xp: Vec<FreeElement> = (1..=n).map(|i| primed_x(n, i)).collect();
    let yp: Vec<FreeElement> = (1..=n).map(primed_y).collect();
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let (name, rel) = match kind {
                PlaneKind::Symmetric => (
                    format!("coordinate product ({i}, {j})"),
                    xp[i - 1].mul(&xp[j - 1]).sub(&xp[j - 1].mul(&xp[i - 1]).scale(&qinv())),
                ),
                PlaneKind::Exterior => (
                    format!("coordinate anticommutation ({i}, {j})"),
                    xp[i - 1].mul(&xp[j - 1]).add(&xp[j - 1].mul(&xp[i - 1]).scale(&q())),
                ),
            };
            checks.push(zero_item(&p, name, &rel));
        }
    }
    if kind == PlaneKind::Exterior {
        for i in 1..=n {
            let rel = xp[i - 1].mul(&xp[i - 1]);
            checks.push(zero_item(&p, format!("coordinate square ({i})"), &rel));
        }
    }
    for k in 1..=n {
        for l in 1..=n {
            let rel = xp[k - 1].mul(&yp[l - 1]).sub(
                &yp[l - 1]
                    .mul(&xp[k - 1])
                    .scale(&ScalarExpr::root(l as u32, k as u32)),
            );
            checks.push(zero_item(&p, format!("mixed pair ({k}, {l})"), &rel));
        }
    }
    for k in 1..=n {
        for l in (k + 1)..=n {
            let rel = yp[k - 1].mul(&yp[l - 1]).sub(&yp[l - 1].mul(&yp[k - 1]));
            checks.push(zero_item(&p, format!("second-family pair ({k}, {l})"), &rel));
        }
    }
    Ok(CheckReport::new(
        format!("coaction invariance, {} plane, n = {n}", kind.label()),
        "expand",
        None,
        checks,
    ))
}

/// Exchange relations of the composite coordinates `X_i = x_i y_i` in the
/// plane algebra: a parameter-laden scale for the symmetric plane, an
/// anticommutation plus vanishing squares for the exterior one.
pub fn verify_x_relations(n: usize, kind: PlaneKind) -> Result<CheckReport> {
    let p = plane_presentation(n, kind)?;
    let big_x = |i: usize| FreeElement::word(&[x_gen(i), y_gen(i)]);
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let phi_ji = ScalarExpr::phi(j as u32, i as u32);
            let (name, rel) = match kind {
                PlaneKind::Symmetric => (
                    format!("composite product ({i}, {j})"),
                    big_x(i).mul(&big_x(j)).sub(&big_x(j).mul(&big_x(i)).scale(&(&qinv() * &phi_ji))),
                ),
                PlaneKind::Exterior => (
                    format!("composite anticommutation ({i}, {j})"),
                    big_x(i).mul(&big_x(j)).add(&big_x(j).mul(&big_x(i)).scale(&(&q() * &phi_ji))),
                ),
            };
            checks.push(zero_item(&p, name, &rel));
        }
    }
    if kind == PlaneKind::Exterior {
        for i in 1..=n {
            checks.push(zero_item(&p, format!("composite square ({i})"), &big_x(i).mul(&big_x(i))));
        }
    }
    Ok(CheckReport::new(
        format!("composite coordinate relations, {} plane, n = {n}", kind.label()),
        "expand",
        None,
        checks,
    ))
}
