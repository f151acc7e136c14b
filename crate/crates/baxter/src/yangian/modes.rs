//! Mode-level relation generation for the additive-spectral exchange
//! algebras, and span-membership certificates for the combined relations.
//!
//! The spectral prefactor `(lambda - mu)` mixes adjacent series orders, so
//! the generator multiplies it through *before* extracting coefficients
//! and emits relations indexed by the monomial grid `lambda^-a mu^-b`
//! rather than by levels directly. A classification pass re-labels the
//! grid into level families; the structural tests pin each family to its
//! expected closed form.

use std::collections::BTreeMap;

use crate::algebra::{FreeElement, Gen, SpanBasis};
use crate::error::{Error, Result};
use crate::report::{CheckItem, CheckReport};
use crate::scalar::{names, ScalarExpr};

use super::{ModeKind, Slot};

/// The mode generator `t_level^{ij}`, optionally tagged with the colour
/// slot that carries it.
pub fn mode_gen(level: usize, i: usize, j: usize, slot: Option<Slot>) -> Gen {
    match slot {
        None => Gen::new(&format!("t{level}_{i}_{j}")),
        Some(s) => Gen::new(&format!("t{level}_{i}_{j}_{}", s.suffix())),
    }
}

/// The operator-valued leading coefficient of a coloured diagonal series,
/// optionally tagged with its colour slot.
pub fn tau_mode_gen(i: usize, slot: Option<Slot>) -> Gen {
    match slot {
        None => Gen::new(&format!("tauc_{i}")),
        Some(s) => Gen::new(&format!("tauc_{i}_{}", s.suffix())),
    }
}

fn colour_fn(which: u8, i: usize, slot: Slot) -> ScalarExpr {
    ScalarExpr::var(&format!("u{which}_{i}_{}", slot.suffix()))
}

fn colour_prod(i: usize, slot: Slot) -> ScalarExpr {
    colour_fn(1, i, slot) * colour_fn(2, i, slot)
}

/// The exchange weight `u_ij` of the coloured defining relation: the
/// constant deformation entry times the ratio of colour-function products
/// across the two slots.
pub(crate) fn exchange_weight(i: usize, j: usize) -> ScalarExpr {
    ScalarExpr::phi(i as u32, j as u32) * colour_prod(j, Slot::First)
        / colour_prod(i, Slot::Second)
}

/// The ladder weight `v_ij` of the coloured defining relation.
pub(crate) fn ladder_weight(i: usize, j: usize) -> ScalarExpr {
    (colour_fn(1, i, Slot::First) * colour_fn(2, j, Slot::First))
        / (colour_fn(1, i, Slot::Second) * colour_fn(2, j, Slot::Second))
}

// ---------------------------------------------------------------------------
// The truncated series and the relation engine
// ---------------------------------------------------------------------------

enum Leading {
    Unit,
    #[allow(dead_code)] // exercised by the multiparametric-limit tests
    TauPlain,
    TauTagged,
}

struct EngineCfg {
    n: usize,
    n_max: usize,
    leading: Leading,
    u: Box<dyn Fn(usize, usize) -> ScalarExpr>,
    v: Box<dyn Fn(usize, usize) -> ScalarExpr>,
}

impl EngineCfg {
    fn standard(n: usize, n_max: usize) -> EngineCfg {
        EngineCfg {
            n,
            n_max,
            leading: Leading::Unit,
            u: Box::new(|_, _| ScalarExpr::one()),
            v: Box::new(|_, _| ScalarExpr::one()),
        }
    }

    fn coloured(n: usize, n_max: usize) -> EngineCfg {
        EngineCfg {
            n,
            n_max,
            leading: Leading::TauTagged,
            u: Box::new(|i, j| exchange_weight(i, j)),
            v: Box::new(|i, j| ladder_weight(i, j)),
        }
    }

    /// Colourless multiparametric variant: operator leading coefficients
    /// without colour tags, constant deformation weights, unit ladder
    /// weights. Used as the comparison target of the colour-dropping limit.
    #[cfg(test)]
    fn multiparam(n: usize, n_max: usize) -> EngineCfg {
        EngineCfg {
            n,
            n_max,
            leading: Leading::TauPlain,
            u: Box::new(|i, j| ScalarExpr::phi(i as u32, j as u32)),
            v: Box::new(|_, _| ScalarExpr::one()),
        }
    }

    fn for_kind(kind: ModeKind, n: usize, n_max: usize) -> Result<EngineCfg> {
        if n < 2 {
            return Err(Error::Invalid(format!("index range must be at least 2, got {n}")));
        }
        if n_max < 1 {
            return Err(Error::Invalid(format!("truncation order must be at least 1, got {n_max}")));
        }
        Ok(match kind {
            ModeKind::Standard => EngineCfg::standard(n, n_max),
            ModeKind::Coloured => EngineCfg::coloured(n, n_max),
        })
    }

    fn tagged(&self) -> bool {
        matches!(self.leading, Leading::TauTagged)
    }

    fn slot_tag(&self, slot: Slot) -> Option<Slot> {
        if self.tagged() {
            Some(slot)
        } else {
            None
        }
    }

    /// Series coefficient of `x^-order` in the slot's spectral variable,
    /// or None outside the stored window `0 ..= n_max + 1`.
    fn coeff(&self, i: usize, j: usize, slot: Slot, order: i64) -> Option<FreeElement> {
        if order < 0 || order > self.n_max as i64 + 1 {
            return None;
        }
        if order == 0 {
            if i != j {
                return Some(FreeElement::zero());
            }
            return Some(match self.leading {
                Leading::Unit => FreeElement::one(),
                Leading::TauPlain => FreeElement::word(&[tau_mode_gen(i, None)]),
                Leading::TauTagged => FreeElement::word(&[tau_mode_gen(i, Some(slot))]),
            });
        }
        let level = (order - 1) as usize;
        Some(FreeElement::term(
            ScalarExpr::sym(names::h()),
            vec![mode_gen(level, i, j, self.slot_tag(slot))],
        ))
    }

    /// `u_ik C_ij(p) C_kl(q) - u_jl C_kl(q) C_ij(p)` at the given series
    /// orders (first slot order `p`, second slot order `q`).
    fn exchange_part(&self, q4: (usize, usize, usize, usize), p: i64, qq: i64) -> FreeElement {
        let (i, j, k, l) = q4;
        match (self.coeff(i, j, Slot::First, p), self.coeff(k, l, Slot::Second, qq)) {
            (Some(x), Some(y)) => {
                let left = x.mul(&y).scale(&(self.u)(i, k));
                let right = y.mul(&x).scale(&(self.u)(j, l));
                left.sub(&right)
            }
            _ => FreeElement::zero(),
        }
    }

    /// `v_lj C_kj(second, q) C_il(first, p) - v_ik C_kj(first, p)
    /// C_il(second, q)`.
    fn ladder_part(&self, q4: (usize, usize, usize, usize), p: i64, qq: i64) -> FreeElement {
        let (i, j, k, l) = q4;
        let mut out = FreeElement::zero();
        if let (Some(x), Some(y)) =
            (self.coeff(k, j, Slot::Second, qq), self.coeff(i, l, Slot::First, p))
        {
            out = out.add(&x.mul(&y).scale(&(self.v)(l, j)));
        }
        if let (Some(x), Some(y)) =
            (self.coeff(k, j, Slot::First, p), self.coeff(i, l, Slot::Second, qq))
        {
            out = out.sub(&x.mul(&y).scale(&(self.v)(i, k)));
        }
        out
    }

    /// Coefficient of `lambda^-a mu^-b` in the defining relation after the
    /// spectral prefactor has been multiplied through.
    fn residual(&self, q4: (usize, usize, usize, usize), a: i64, b: i64) -> FreeElement {
        let h = ScalarExpr::sym(names::h());
        self.exchange_part(q4, a + 1, b)
            .sub(&self.exchange_part(q4, a, b + 1))
            .sub(&self.ladder_part(q4, a, b).scale(&h))
    }

    /// The exact-coefficient window of the premultiplied grid. Interior
    /// points need both neighbouring product orders; the `x^+1` edges only
    /// ever read one slot, so they reach one order deeper.
    fn in_window(&self, a: i64, b: i64) -> bool {
        let top = self.n_max as i64;
        match (a, b) {
            (-1, -1) => false,
            (-1, b) => (0..=top + 1).contains(&b),
            (a, -1) => (0..=top + 1).contains(&a),
            (a, b) => (0..=top).contains(&a) && (0..=top).contains(&b),
        }
    }

    /// The combined relation at levels `(lev_n, lev_m)`: commutator-type
    /// head, level-sum tail, and the ladder sum over split levels.
    fn combined_target(
        &self,
        q4: (usize, usize, usize, usize),
        lev_n: usize,
        lev_m: usize,
    ) -> FreeElement {
        let (i, j, k, l) = q4;
        let h = ScalarExpr::sym(names::h());
        let sa = self.slot_tag(Slot::First);
        let sb = self.slot_tag(Slot::Second);
        let tn_ij = mode_gen(lev_n, i, j, sa);
        let tm_kl = mode_gen(lev_m, k, l, sb);
        let mut target = FreeElement::term((self.u)(i, k), vec![tn_ij, tm_kl])
            .sub(&FreeElement::term((self.u)(j, l), vec![tm_kl, tn_ij]));
        if i == l {
            let word = match sa {
                Some(slot) => vec![mode_gen(lev_n + lev_m, k, j, sb), tau_mode_gen(i, Some(slot))],
                None => vec![mode_gen(lev_n + lev_m, k, j, None)],
            };
            target = target.sub(&FreeElement::term((self.v)(l, j), word));
        }
        if j == k {
            let word = match sa {
                Some(slot) => vec![tau_mode_gen(k, Some(slot)), mode_gen(lev_n + lev_m, i, l, sb)],
                None => vec![mode_gen(lev_n + lev_m, i, l, None)],
            };
            target = target.add(&FreeElement::term((self.v)(i, k), word));
        }
        for p in 0..lev_n {
            let lo = lev_n - 1 - p;
            target = target.sub(&FreeElement::term(
                &h * &(self.v)(l, j),
                vec![mode_gen(lev_m + p, k, j, sb), mode_gen(lo, i, l, sa)],
            ));
            target = target.add(&FreeElement::term(
                &h * &(self.v)(i, k),
                vec![mode_gen(lo, k, j, sa), mode_gen(lev_m + p, i, l, sb)],
            ));
        }
        target
    }
}

/// A truncated mode series: unit or operator leading coefficient, then
/// `h t_level` at order `level + 1`. Only levels `0 ..= n_max` are stored;
/// asking past the window is flagged as an error rather than silently
/// returning zero.
#[derive(Debug, Clone, Copy)]
pub struct ModeSeries {
    kind: ModeKind,
    n: usize,
    n_max: usize,
}

impl ModeSeries {
    pub fn new(kind: ModeKind, n: usize, n_max: usize) -> Result<ModeSeries> {
        EngineCfg::for_kind(kind, n, n_max)?;
        Ok(ModeSeries { kind, n, n_max })
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Coefficient of `x^-order` of the series `T_ij` in the given slot.
    /// Orders beyond `n_max + 1` reference discarded modes and error out.
    pub fn coefficient(&self, i: usize, j: usize, slot: Slot, order: usize) -> Result<FreeElement> {
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(Error::Invalid(format!(
                "series index ({i}, {j}) out of range 1..={}",
                self.n
            )));
        }
        let cfg = EngineCfg::for_kind(self.kind, self.n, self.n_max)?;
        cfg.coeff(i, j, slot, order as i64).ok_or_else(|| {
            Error::Invalid(format!(
                "order {order} references modes beyond the truncation window (n_max = {})",
                self.n_max
            ))
        })
    }
}

// ---------------------------------------------------------------------------
// Generation and classification
// ---------------------------------------------------------------------------

/// One generated relation: the surviving coefficient of a grid monomial,
/// tagged with the quadruple it came from and the level family the
/// re-labelling pass assigns to its grid position.
#[derive(Debug, Clone)]
pub struct ModeRelation {
    pub family: String,
    pub indices: (usize, usize, usize, usize),
    /// Exponent pair `(a, b)` of the monomial `lambda^-a mu^-b`; the value
    /// `-1` marks the positive-power edge produced by the prefactor.
    pub grid: (i64, i64),
    /// Ladder levels `(n, m)` for the families that carry them.
    pub levels: Option<(usize, usize)>,
    pub element: FreeElement,
}

fn classify(a: i64, b: i64) -> (String, Option<(usize, usize)>) {
    match (a, b) {
        (-1, 0) | (0, -1) => ("leader-exchange".to_string(), None),
        (-1, _) => ("leader-crossing/first".to_string(), None),
        (_, -1) => ("leader-crossing/second".to_string(), None),
        (0, 0) => ("level-zero/both".to_string(), None),
        (0, b) => ("level-zero/first".to_string(), Some((0, (b - 1) as usize))),
        (a, 0) => ("level-zero/second".to_string(), Some(((a - 1) as usize, 0))),
        (a, b) => ("ladder".to_string(), Some(((a - 1) as usize, (b - 1) as usize))),
    }
}

/// Substitutes the truncated series into the defining relation, multiplies
/// the spectral prefactor through, and emits every surviving coefficient
/// inside the exact window as a [`ModeRelation`].
pub fn generate_mode_relations(
    kind: ModeKind,
    n: usize,
    n_max: usize,
) -> Result<Vec<ModeRelation>> {
    let cfg = EngineCfg::for_kind(kind, n, n_max)?;
    let mut out = Vec::new();
    let top = n_max as i64 + 1;
    for i in 1..=cfg.n {
        for j in 1..=cfg.n {
            for k in 1..=cfg.n {
                for l in 1..=cfg.n {
                    for a in -1..=top {
                        for b in -1..=top {
                            if !cfg.in_window(a, b) {
                                continue;
                            }
                            let element = cfg.residual((i, j, k, l), a, b);
                            if element.is_zero() {
                                continue;
                            }
                            let (family, levels) = classify(a, b);
                            out.push(ModeRelation {
                                family,
                                indices: (i, j, k, l),
                                grid: (a, b),
                                levels,
                                element,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Proves the combined relation at levels `(lev_n, lev_m)` lies in the
/// scalar-linear span of the generated relations, quadruple by quadruple.
/// Every certificate is re-verified by substituting the combination back
/// and checking exact cancellation; the report lists the coefficients.
pub fn check_combined_relation(
    kind: ModeKind,
    n: usize,
    lev_n: usize,
    lev_m: usize,
    n_max: usize,
) -> Result<CheckReport> {
    if lev_n + lev_m + 1 > n_max {
        return Err(Error::Invalid(format!(
            "combined levels ({lev_n}, {lev_m}) need modes up to {}, beyond the truncation window (n_max = {n_max})",
            lev_n + lev_m + 1
        )));
    }
    let cfg = EngineCfg::for_kind(kind, n, n_max)?;
    let relations = generate_mode_relations(kind, n, n_max)?;
    let mut by_quad: BTreeMap<(usize, usize, usize, usize), Vec<&ModeRelation>> = BTreeMap::new();
    for rel in &relations {
        by_quad.entry(rel.indices).or_default().push(rel);
    }
    let mut items = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let quad = (i, j, k, l);
                    let name = format!("quadruple ({i}, {j}, {k}, {l})");
                    let target = cfg.combined_target(quad, lev_n, lev_m);
                    if target.is_zero() {
                        items.push(CheckItem::pass(name).with_detail("target vanishes identically"));
                        continue;
                    }
                    let group = by_quad.get(&quad).map(Vec::as_slice).unwrap_or(&[]);
                    let basis = SpanBasis::from_relations(group.iter().map(|r| &r.element));
                    let Some(cert) = basis.express(&target) else {
                        items.push(CheckItem::fail(name).with_detail(format!(
                            "not in the span of the {} generated relations for this quadruple",
                            group.len()
                        )));
                        continue;
                    };
                    let mut rebuilt = FreeElement::zero();
                    let mut pieces = Vec::new();
                    for (idx, coeff) in &cert {
                        let rel = group[*idx];
                        rebuilt = rebuilt.add(&rel.element.scale(coeff));
                        pieces.push(format!(
                            "({coeff}) * [{} at ({}, {})]",
                            rel.family, rel.grid.0, rel.grid.1
                        ));
                    }
                    if rebuilt.sub(&target).is_zero() {
                        items.push(
                            CheckItem::pass(name)
                                .with_detail(format!("target = {}", pieces.join(" + "))),
                        );
                    } else {
                        items.push(CheckItem::fail(name).with_detail(
                            "certificate failed re-verification by substitution".to_string(),
                        ));
                    }
                }
            }
        }
    }
    Ok(CheckReport::new(
        format!("combined-relation: {}, levels ({lev_n}, {lev_m})", kind.label()),
        "expand",
        None,
        items,
    ))
}
