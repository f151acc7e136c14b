//! Concrete presentations: the single-parameter deformation of the N by N
//! matrix algebra, its multiparametric extension, the version extended by
//! diagonal scaling generators, noncommutative planes, and the coaction
//! alphabet combining algebra and plane generators.
//!
//! Generator order everywhere: scaling generators, then matrix entries in
//! row-major order, then `x` coordinates, then `y` coordinates. Every
//! relation rewrites its disordered word to ordered ones, left to right.

use crate::error::Result;
use crate::scalar::{names, ScalarExpr};

use super::{FreeElement, Gen, QuadraticPresentation, Word};

pub fn tau_gen(i: usize) -> Gen {
    Gen::new(&format!("tau_{i}"))
}

pub fn t_gen(i: usize, j: usize) -> Gen {
    Gen::new(&format!("T_{i}_{j}"))
}

/// Generator of the multiparametric algebra realized through [`t_gen`]s.
pub fn tilde_gen(i: usize, j: usize) -> Gen {
    Gen::new(&format!("Tt_{i}_{j}"))
}

pub fn x_gen(i: usize) -> Gen {
    Gen::new(&format!("x_{i}"))
}

pub fn y_gen(i: usize) -> Gen {
    Gen::new(&format!("y_{i}"))
}

fn q() -> ScalarExpr {
    ScalarExpr::sym(names::q())
}

fn qinv() -> ScalarExpr {
    q().pow(-1)
}

fn phi(i: usize, j: usize) -> ScalarExpr {
    ScalarExpr::phi(i as u32, j as u32)
}

fn root(i: usize, j: usize) -> ScalarExpr {
    ScalarExpr::root(i as u32, j as u32)
}

type Rule = ((Gen, Gen), Vec<(ScalarExpr, Word)>);

/// Exchange rules among matrix entries, with the deformation scales of the
/// multiparametric family; `phi_of` supplies the extra parameters (the
/// constant 1 recovers the single-parameter algebra).
fn matrix_rules(n: usize, gen: &dyn Fn(usize, usize) -> Gen, phi_of: &dyn Fn(usize, usize) -> ScalarExpr) -> Vec<Rule> {
    let mut rules = Vec::new();
    // Same row i, columns j < k.
    for i in 1..=n {
        for j in 1..=n {
            for k in (j + 1)..=n {
                rules.push((
                    (gen(i, k), gen(i, j)),
                    vec![(&q() * &phi_of(k, j), vec![gen(i, j), gen(i, k)])],
                ));
            }
        }
    }
    // Same column k, rows i < l.
    for k in 1..=n {
        for i in 1..=n {
            for l in (i + 1)..=n {
                rules.push((
                    (gen(l, k), gen(i, k)),
                    vec![(&q() * &phi_of(i, l), vec![gen(i, k), gen(l, k)])],
                ));
            }
        }
    }
    for i in 1..=n {
        for l in (i + 1)..=n {
            for j in 1..=n {
                for k in (j + 1)..=n {
                    // Antidiagonal pair: entries (i,k) and (l,j) exchange
                    // with a pure parameter scale.
                    rules.push((
                        (gen(l, j), gen(i, k)),
                        vec![(&phi_of(i, l) * &phi_of(j, k), vec![gen(i, k), gen(l, j)])],
                    ));
                    // Diagonal pair: entries (i,j) and (l,k) exchange with
                    // an extra cross term.
                    rules.push((
                        (gen(l, k), gen(i, j)),
                        vec![
                            (&phi_of(i, l) * &phi_of(k, j), vec![gen(i, j), gen(l, k)]),
                            ((&q() - &qinv()) * phi_of(i, l), vec![gen(i, k), gen(l, j)]),
                        ],
                    ));
                }
            }
        }
    }
    rules
}

fn row_major(n: usize, gen: &dyn Fn(usize, usize) -> Gen) -> Vec<Gen> {
    let mut gens = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            gens.push(gen(i, j));
        }
    }
    gens
}

/// The single-parameter deformed matrix algebra on entries `T_ij`.
pub fn gl_presentation(n: usize) -> Result<QuadraticPresentation> {
    let one = |_: usize, _: usize| ScalarExpr::one();
    QuadraticPresentation::new(
        "gl-deformed",
        row_major(n, &t_gen),
        matrix_rules(n, &t_gen, &one),
    )
}

/// The multiparametric deformation on entries `Tt_ij`, with parameters
/// `phi_ij` as squared root symbols.
pub fn gl_multiparam_presentation(n: usize) -> Result<QuadraticPresentation> {
    let phi_of = |a: usize, b: usize| phi(a, b);
    QuadraticPresentation::new(
        "gl-multiparam",
        row_major(n, &tilde_gen),
        matrix_rules(n, &tilde_gen, &phi_of),
    )
}

fn tau_rules(n: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            rules.push(((tau_gen(j), tau_gen(i)), vec![(ScalarExpr::one(), vec![tau_gen(i), tau_gen(j)])]));
        }
    }
    // T_kl passes tau_m at the cost of root(phi_mk/phi_ml).
    for m in 1..=n {
        for k in 1..=n {
            for l in 1..=n {
                rules.push((
                    (t_gen(k, l), tau_gen(m)),
                    vec![(root(m, k) / root(m, l), vec![tau_gen(m), t_gen(k, l)])],
                ));
            }
        }
    }
    rules
}

/// The deformed matrix algebra extended by commuting scaling generators
/// `tau_i` that pick up a root-of-parameter scale when crossing a matrix
/// entry.
pub fn extended_presentation(n: usize) -> Result<QuadraticPresentation> {
    let mut gens: Vec<Gen> = (1..=n).map(tau_gen).collect();
    gens.extend(row_major(n, &t_gen));
    let one = |_: usize, _: usize| ScalarExpr::one();
    let mut rules = tau_rules(n);
    rules.extend(matrix_rules(n, &t_gen, &one));
    QuadraticPresentation::new("extended", gens, rules)
}

/// Variant with a single scaling generator, valid when every parameter
/// splits as `phi_ij = (rho_i / rho_j)^2`; `rho` lists the square roots.
/// The crossing scale is the specialization of the general one:
/// `root(phi_mk/phi_ml)` loses its `m` dependence and becomes `rho_l/rho_k`.
pub fn single_tau_presentation(n: usize, rho: &[ScalarExpr]) -> Result<QuadraticPresentation> {
    assert_eq!(rho.len(), n, "one root value per index");
    let tau = Gen::new("tau");
    let mut gens = vec![tau];
    gens.extend(row_major(n, &t_gen));
    let mut rules = Vec::new();
    for k in 1..=n {
        for l in 1..=n {
            rules.push((
                (t_gen(k, l), tau),
                vec![(&rho[l - 1] / &rho[k - 1], vec![tau, t_gen(k, l)])],
            ));
        }
    }
    let one = |_: usize, _: usize| ScalarExpr::one();
    rules.extend(matrix_rules(n, &t_gen, &one));
    QuadraticPresentation::new("extended-single-tau", gens, rules)
}

/// The two noncommutative planes: symmetric (`x_i x_j = q^{-1} x_j x_i`)
/// and exterior (`x_i^2 = 0`, `x_i x_j = -q x_j x_i`), both with
/// `x_k y_l = root(phi_lk) y_l x_k` and commuting `y`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    Symmetric,
    Exterior,
}

impl PlaneKind {
    pub fn label(self) -> &'static str {
        match self {
            PlaneKind::Symmetric => "symmetric",
            PlaneKind::Exterior => "exterior",
        }
    }
}

fn plane_rules(n: usize, kind: PlaneKind) -> Vec<Rule> {
    let mut rules = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            match kind {
                PlaneKind::Symmetric => {
                    rules.push(((x_gen(j), x_gen(i)), vec![(q(), vec![x_gen(i), x_gen(j)])]));
                }
                PlaneKind::Exterior => {
                    rules.push(((x_gen(j), x_gen(i)), vec![(-qinv(), vec![x_gen(i), x_gen(j)])]));
                }
            }
        }
    }
    if kind == PlaneKind::Exterior {
        for i in 1..=n {
            rules.push(((x_gen(i), x_gen(i)), vec![]));
        }
    }
    for k in 1..=n {
        for l in 1..=n {
            rules.push((
                (y_gen(l), x_gen(k)),
                vec![(root(k, l), vec![x_gen(k), y_gen(l)])],
            ));
        }
    }
    for k in 1..=n {
        for l in (k + 1)..=n {
            rules.push(((y_gen(l), y_gen(k)), vec![(ScalarExpr::one(), vec![y_gen(k), y_gen(l)])]));
        }
    }
    rules
}

/// Plane coordinates alone.
pub fn plane_presentation(n: usize, kind: PlaneKind) -> Result<QuadraticPresentation> {
    let mut gens: Vec<Gen> = (1..=n).map(x_gen).collect();
    gens.extend((1..=n).map(y_gen));
    QuadraticPresentation::new(
        &format!("plane-{}", kind.label()),
        gens,
        plane_rules(n, kind),
    )
}

/// Algebra and plane generators together; matrix entries and scaling
/// generators commute with the coordinates.
pub fn coaction_presentation(n: usize, kind: PlaneKind) -> Result<QuadraticPresentation> {
    let mut gens: Vec<Gen> = (1..=n).map(tau_gen).collect();
    gens.extend(row_major(n, &t_gen));
    gens.extend((1..=n).map(x_gen));
    gens.extend((1..=n).map(y_gen));
    let one = |_: usize, _: usize| ScalarExpr::one();
    let mut rules = tau_rules(n);
    rules.extend(matrix_rules(n, &t_gen, &one));
    rules.extend(plane_rules(n, kind));
    for coord in (1..=n).flat_map(|i| [x_gen(i), y_gen(i)]) {
        for m in 1..=n {
            rules.push(((coord, tau_gen(m)), vec![(ScalarExpr::one(), vec![tau_gen(m), coord])]));
        }
        for i in 1..=n {
            for j in 1..=n {
                rules.push((
                    (coord, t_gen(i, j)),
                    vec![(ScalarExpr::one(), vec![t_gen(i, j), coord])],
                ));
            }
        }
    }
    QuadraticPresentation::new(&format!("coaction-{}", kind.label()), gens, rules)
}

/// The defining relation instances of the multiparametric algebra as
/// labelled elements (left minus right), over the `Tt` generators with
/// parameters supplied by `root_of` (squared to give each `phi`).
pub fn multiparam_relations_with(
    n: usize,
    root_of: &dyn Fn(usize, usize) -> ScalarExpr,
) -> Vec<(String, FreeElement)> {
    let phi_of = |a: usize, b: usize| root_of(a, b).pow(2);
    let g = tilde_gen;
    let mut rels = Vec::new();
    let w = |a: Gen, b: Gen| FreeElement::word(&[a, b]);
    for i in 1..=n {
        for j in 1..=n {
            for k in (j + 1)..=n {
                let e = w(g(i, j), g(i, k))
                    .sub(&w(g(i, k), g(i, j)).scale(&(&qinv() * &phi_of(j, k))));
                rels.push((format!("row {i}: columns ({j}, {k})"), e));
            }
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for l in (i + 1)..=n {
                let e = w(g(i, k), g(l, k))
                    .sub(&w(g(l, k), g(i, k)).scale(&(&qinv() * &phi_of(l, i))));
                rels.push((format!("column {k}: rows ({i}, {l})"), e));
            }
        }
    }
    for i in 1..=n {
        for l in (i + 1)..=n {
            for j in 1..=n {
                for k in (j + 1)..=n {
                    let anti = w(g(i, k), g(l, j))
                        .scale(&phi_of(i, l))
                        .sub(&w(g(l, j), g(i, k)).scale(&phi_of(k, j)));
                    rels.push((format!("antidiagonal ({i},{k})x({l},{j})"), anti));
                    let diag = w(g(i, j), g(l, k))
                        .scale(&phi_of(i, l))
                        .sub(&w(g(l, k), g(i, j)).scale(&phi_of(j, k)))
                        .sub(&w(g(l, j), g(i, k)).scale(&(&qinv() - &q())));
                    rels.push((format!("diagonal ({i},{j})x({l},{k})"), diag));
                }
            }
        }
    }
    rels
}

/// [`multiparam_relations_with`] with the standard root symbols.
pub fn multiparam_relations(n: usize) -> Vec<(String, FreeElement)> {
    multiparam_relations_with(n, &|a, b| root(a, b))
}
