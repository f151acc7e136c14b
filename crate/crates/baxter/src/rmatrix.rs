//! Particle-conserving vertex matrices on `V (x) V`.
//!
//! A matrix here is determined by two coefficient tables `f`, `g`: the only
//! nonzero entries are `[(i,j), (i,j)] = f_ij` and `[(i,j), (j,i)] = g_ij`,
//! so both the occupied sites and their multiset of labels are conserved.
//! The canonical form keeps `g_ii = 0`: the diagonal weight lives entirely
//! in `f_ii` (the two possible twist prefactors agree there, which is what
//! makes the convention stable under twisting).
//!
//! Tables may be constant, depend on a spectral pair `(lambda, mu)`, or
//! additionally on a colour pair `(alpha, beta)`; the chain rule for the
//! three-leg consistency check renames `(lambda, mu) -> (lambda, nu) ->
//! (mu, nu)` (and `(alpha, beta)` likewise) across the three slots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{mode_label, CheckItem, CheckReport};
use crate::scalar::{names, parse_expr, CheckMode, PointSampler, ScalarExpr, Symbol};
use crate::tensor::Operator;

// ---------------------------------------------------------------------------
// Twist data
// ---------------------------------------------------------------------------

/// The data of a twist: a constant antisymmetric deformation table given
/// through its square roots, and two families of colour functions given
/// through their square roots `v1`, `v2` (so `u1 = v1^2`, `u2 = v2^2`),
/// written in one designated colour symbol.
#[derive(Debug, Clone)]
pub struct TwistData {
    n: usize,
    /// Square roots of the deformation entries, keyed by `(i, j)` with
    /// `i < j`; the other orientations follow from antisymmetry.
    s: BTreeMap<(usize, usize), ScalarExpr>,
    v1: Vec<ScalarExpr>,
    v2: Vec<ScalarExpr>,
    colour: Symbol,
}

impl TwistData {
    /// Builds twist data after validating shapes and nonvanishing.
    pub fn new(
        n: usize,
        s: BTreeMap<(usize, usize), ScalarExpr>,
        v1: Vec<ScalarExpr>,
        v2: Vec<ScalarExpr>,
        colour: Symbol,
    ) -> Result<TwistData> {
        if n < 2 {
            return Err(Error::Invalid(format!("twist data wants n >= 2, got {n}")));
        }
        for &(i, j) in s.keys() {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::Invalid(format!(
                    "root table key ({i}, {j}) must satisfy 1 <= i < j <= {n}"
                )));
            }
        }
        if s.values().any(|e| e.is_zero_expand()) {
            return Err(Error::Invalid("root table entries must be nonzero".to_string()));
        }
        if v1.len() != n || v2.len() != n {
            return Err(Error::Invalid(format!(
                "colour tables want length {n}, got {} and {}",
                v1.len(),
                v2.len()
            )));
        }
        if v1.iter().chain(&v2).any(|e| e.is_zero_expand()) {
            return Err(Error::Invalid("colour functions must be nonzero".to_string()));
        }
        Ok(TwistData { n, s, v1, v2, colour })
    }

    /// Fully symbolic twist data: root symbols for the deformation table
    /// and monomial colour functions `w1_i * c^i`, `w2_i * c^i` whose
    /// coefficients are fresh symbols. Monomials keep every twist prefactor
    /// a monomial ratio, so expand-mode checks stay small.
    pub fn symbolic(n: usize) -> TwistData {
        let colour = names::alpha();
        let c = ScalarExpr::sym(colour);
        let mut v1 = Vec::with_capacity(n);
        let mut v2 = Vec::with_capacity(n);
        for i in 1..=n {
            v1.push(ScalarExpr::var(&format!("w1_{i}")) * c.pow(i as i64));
            v2.push(ScalarExpr::var(&format!("w2_{i}")) * c.pow(i as i64));
        }
        TwistData::new(n, BTreeMap::new(), v1, v2, colour).expect("symbolic data is well-formed")
    }

    /// The identity twist: all deformation entries one, all colour
    /// functions one.
    pub fn identity(n: usize) -> TwistData {
        let s = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| ((i, j), ScalarExpr::one())))
            .collect();
        let v1 = vec![ScalarExpr::one(); n];
        let v2 = vec![ScalarExpr::one(); n];
        TwistData::new(n, s, v1, v2, names::alpha()).expect("identity data is well-formed")
    }

    /// Seeded random twist data: rational constants for the roots and
    /// degree-`deg` polynomials with nonzero constant term for the colour
    /// functions. Suitable for sample-mode checks.
    pub fn random(n: usize, deg: usize, seed: u64) -> TwistData {
        use crate::scalar::SampleConfig;
        let colour = names::alpha();
        let c = ScalarExpr::sym(colour);
        let mut sampler = PointSampler::new(SampleConfig { bound: 9, ..SampleConfig::new(1, seed) });
        let dummy: std::collections::BTreeSet<Symbol> = [colour].into_iter().collect();
        let mut draw_const = || {
            let point = sampler.draw(&dummy);
            ScalarExpr::rat(point[&colour].clone())
        };
        let mut s = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                s.insert((i, j), draw_const());
            }
        }
        let mut poly = |_i: usize| {
            // Nonzero constant term keeps the function nonvanishing at 0 and
            // generically elsewhere.
            let mut acc = draw_const();
            for d in 1..=deg {
                acc = acc + draw_const() * c.pow(d as i64);
            }
            acc
        };
        let v1 = (1..=n).map(&mut poly).collect();
        let v2 = (1..=n).map(&mut poly).collect();
        TwistData::new(n, s, v1, v2, colour).expect("random data is well-formed")
    }

    /// Dimension of the index range.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The colour symbol the tables are written in.
    pub fn colour(&self) -> Symbol {
        self.colour
    }

    /// Square root of the deformation entry, any orientation.
    pub fn root(&self, i: usize, j: usize) -> ScalarExpr {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => ScalarExpr::one(),
            Less => self
                .s
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| ScalarExpr::root(i as u32, j as u32)),
            Greater => ScalarExpr::one() / self.root(j, i),
        }
    }

    /// The deformation entry `phi_ij = root^2`.
    pub fn phi(&self, i: usize, j: usize) -> ScalarExpr {
        self.root(i, j).pow(2)
    }

    /// `v1_i` with the colour symbol renamed to `at`.
    pub fn v1_at(&self, i: usize, at: Symbol) -> ScalarExpr {
        let map: BTreeMap<Symbol, Symbol> = [(self.colour, at)].into_iter().collect();
        self.v1[i - 1].rename(&map)
    }

    /// `v2_i` with the colour symbol renamed to `at`.
    pub fn v2_at(&self, i: usize, at: Symbol) -> ScalarExpr {
        let map: BTreeMap<Symbol, Symbol> = [(self.colour, at)].into_iter().collect();
        self.v2[i - 1].rename(&map)
    }

    /// `u1_i = v1_i^2` at the given colour symbol.
    pub fn u1_at(&self, i: usize, at: Symbol) -> ScalarExpr {
        self.v1_at(i, at).pow(2)
    }

    /// `u2_i = v2_i^2` at the given colour symbol.
    pub fn u2_at(&self, i: usize, at: Symbol) -> ScalarExpr {
        self.v2_at(i, at).pow(2)
    }

    /// `u1_i * u2_i` at the given colour symbol.
    pub fn u_prod_at(&self, i: usize, at: Symbol) -> ScalarExpr {
        self.u1_at(i, at) * self.u2_at(i, at)
    }

    /// Pointwise product of two twists: roots multiply, colour functions
    /// multiply. Twisting by the product equals twisting twice.
    pub fn pointwise_mul(&self, other: &TwistData) -> Result<TwistData> {
        if self.n != other.n {
            return Err(Error::Invalid("twist product wants equal n".to_string()));
        }
        if self.colour != other.colour {
            return Err(Error::Invalid("twist product wants a shared colour symbol".to_string()));
        }
        let mut s = BTreeMap::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                s.insert((i, j), self.root(i, j) * other.root(i, j));
            }
        }
        let v1 = (1..=self.n)
            .map(|i| &self.v1[i - 1] * &other.v1[i - 1])
            .collect();
        let v2 = (1..=self.n)
            .map(|i| &self.v2[i - 1] * &other.v2[i - 1])
            .collect();
        TwistData::new(self.n, s, v1, v2, self.colour)
    }

    /// The diagonal two-site factors `F`, `Fhat` of the matrix form of the
    /// twist, in colour variables: `F[(i,j),(i,j)] = root_ji * u1_i(beta) /
    /// u2_j(alpha)` and `Fhat[(i,j),(i,j)] = root_ji * u2_i(beta) /
    /// u1_j(alpha)`. The twisted matrix equals `F^-1 * R * Fhat^-1`.
    pub fn ff_matrices(&self) -> (Operator, Operator) {
        let alpha = names::alpha();
        let beta = names::beta();
        let mut f = Operator::zero(vec![self.n, self.n]);
        let mut fhat = Operator::zero(vec![self.n, self.n]);
        for i in 1..=self.n {
            for j in 1..=self.n {
                let root_ji = self.root(j, i);
                let fe = &root_ji * &(self.u1_at(i, beta) / self.u2_at(j, alpha));
                let fhe = &root_ji * &(self.u2_at(i, beta) / self.u1_at(j, alpha));
                f.set(vec![i, j], vec![i, j], fe).expect("index in range");
                fhat.set(vec![i, j], vec![i, j], fhe).expect("index in range");
            }
        }
        (f, fhat)
    }
}

// ---------------------------------------------------------------------------
// The R-matrix type
// ---------------------------------------------------------------------------

/// Which parameters the tables depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralKind {
    /// Constant tables.
    None,
    /// Tables in the spectral pair `(lambda, mu)`.
    Single,
    /// Tables in the spectral pair and the colour pair `(alpha, beta)`.
    Bicomponent,
}

/// A particle-conserving matrix given by its `f`/`g` tables, in canonical
/// form (`g_ii = 0`).
#[derive(Debug, Clone)]
pub struct ParticleConservingR {
    n: usize,
    spectral: SpectralKind,
    f: BTreeMap<(usize, usize), ScalarExpr>,
    g: BTreeMap<(usize, usize), ScalarExpr>,
}

/// The standard builders.
#[derive(Debug, Clone)]
pub enum StandardKind {
    /// Constant solution with diagonal weight `q`: `f_ii = q`, `f_ij = 1`,
    /// `g_ij = q - q^-1` for `i < j`, zero for `i > j`.
    Trig { n: usize },
    /// The trig solution with its unit off-diagonal weights deformed to
    /// `phi_ij`.
    Multiparam { n: usize },
    /// Additive spectral solution: `f_ii = (lambda - mu) + h`,
    /// `f_ij = lambda - mu`, `g_ij = h` off the diagonal.
    Rational { n: usize },
    /// The rational solution dressed by colour-dependent weights drawn
    /// from twist data.
    ColouredRational { n: usize, tw: TwistData },
}

impl ParticleConservingR {
    /// Builds a matrix from tables, folding any diagonal `g_ii` into
    /// `f_ii` to reach canonical form.
    pub fn from_tables(
        n: usize,
        spectral: SpectralKind,
        f: BTreeMap<(usize, usize), ScalarExpr>,
        g: BTreeMap<(usize, usize), ScalarExpr>,
    ) -> Result<ParticleConservingR> {
        if n < 2 {
            return Err(Error::Invalid(format!("dimension must be at least 2, got {n}")));
        }
        let check = |table: &BTreeMap<(usize, usize), ScalarExpr>| -> Result<()> {
            for &(i, j) in table.keys() {
                if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                    return Err(Error::Invalid(format!(
                        "table index ({i}, {j}) out of range 1..={n}"
                    )));
                }
            }
            Ok(())
        };
        check(&f)?;
        check(&g)?;
        let mut f = f;
        let mut g = g;
        for i in 1..=n {
            if let Some(gii) = g.remove(&(i, i)) {
                let fii = f.remove(&(i, i)).unwrap_or_else(ScalarExpr::zero);
                let folded = fii + gii;
                if !folded.is_zero_expand() {
                    f.insert((i, i), folded);
                }
            }
        }
        f.retain(|_, e| !e.is_zero_expand());
        g.retain(|_, e| !e.is_zero_expand());
        Ok(ParticleConservingR { n, spectral, f, g })
    }

    /// One of the standard solutions.
    pub fn build_standard(kind: StandardKind) -> Result<ParticleConservingR> {
        match kind {
            StandardKind::Trig { n } => {
                let q = ScalarExpr::sym(names::q());
                let gap = &q - &q.pow(-1);
                let mut f = BTreeMap::new();
                let mut g = BTreeMap::new();
                for i in 1..=n {
                    for j in 1..=n {
                        f.insert((i, j), if i == j { q.clone() } else { ScalarExpr::one() });
                        if i < j {
                            g.insert((i, j), gap.clone());
                        }
                    }
                }
                ParticleConservingR::from_tables(n, SpectralKind::None, f, g)
            }
            StandardKind::Multiparam { n } => {
                let mut r = ParticleConservingR::build_standard(StandardKind::Trig { n })?;
                for ((i, j), e) in r.f.iter_mut() {
                    if i != j {
                        *e = ScalarExpr::phi(*i as u32, *j as u32);
                    }
                }
                Ok(r)
            }
            StandardKind::Rational { n } => {
                let diff = ScalarExpr::sym(names::lambda()) - ScalarExpr::sym(names::mu());
                let h = ScalarExpr::sym(names::h());
                let mut f = BTreeMap::new();
                let mut g = BTreeMap::new();
                for i in 1..=n {
                    for j in 1..=n {
                        if i == j {
                            f.insert((i, j), &diff + &h);
                        } else {
                            f.insert((i, j), diff.clone());
                            g.insert((i, j), h.clone());
                        }
                    }
                }
                ParticleConservingR::from_tables(n, SpectralKind::Single, f, g)
            }
            StandardKind::ColouredRational { n, tw } => {
                if tw.n() != n {
                    return Err(Error::Invalid(format!(
                        "twist data has n = {}, builder wants {n}",
                        tw.n()
                    )));
                }
                ParticleConservingR::build_standard(StandardKind::Rational { n })?.twist(&tw)
            }
        }
    }

    /// The identity solution: `f = 1` everywhere, `g = 0`.
    pub fn identity(n: usize) -> Result<ParticleConservingR> {
        let f = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| ((i, j), ScalarExpr::one())))
            .collect();
        ParticleConservingR::from_tables(n, SpectralKind::None, f, BTreeMap::new())
    }

    /// The flip solution: the matrix of the transposition on `V (x) V`
    /// (`f_ii = 1` by diagonal folding, `g_ij = 1` off the diagonal).
    pub fn flip(n: usize) -> Result<ParticleConservingR> {
        let mut f = BTreeMap::new();
        let mut g = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    f.insert((i, j), ScalarExpr::one());
                } else {
                    g.insert((i, j), ScalarExpr::one());
                }
            }
        }
        ParticleConservingR::from_tables(n, SpectralKind::None, f, g)
    }

    /// Dimension of one leg.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Parameter dependence of the tables.
    pub fn spectral_kind(&self) -> SpectralKind {
        self.spectral
    }

    /// `f_ij`, zero when absent.
    pub fn f(&self, i: usize, j: usize) -> ScalarExpr {
        self.f.get(&(i, j)).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    /// `g_ij`; always zero on the diagonal.
    pub fn g(&self, i: usize, j: usize) -> ScalarExpr {
        self.g.get(&(i, j)).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    /// The matrix on two legs: `f_ij` at `[(i,j),(i,j)]`, `g_ij` at
    /// `[(i,j),(j,i)]`.
    pub fn to_operator(&self) -> Operator {
        let mut op = Operator::zero(vec![self.n, self.n]);
        for (&(i, j), e) in &self.f {
            op.add_to(vec![i, j], vec![i, j], e.clone()).expect("index in range");
        }
        for (&(i, j), e) in &self.g {
            op.add_to(vec![i, j], vec![j, i], e.clone()).expect("index in range");
        }
        op
    }

    /// Applies a substitution to every table entry (for specializing
    /// parameters); the declared spectral kind is kept.
    pub fn subst(&self, map: &BTreeMap<Symbol, ScalarExpr>) -> Result<ParticleConservingR> {
        let sub_table = |t: &BTreeMap<(usize, usize), ScalarExpr>| -> Result<BTreeMap<_, _>> {
            let mut out = BTreeMap::new();
            for (&k, e) in t {
                let e2 = e.subst(map)?;
                if !e2.is_zero_expand() {
                    out.insert(k, e2);
                }
            }
            Ok(out)
        };
        Ok(ParticleConservingR {
            n: self.n,
            spectral: self.spectral,
            f: sub_table(&self.f)?,
            g: sub_table(&self.g)?,
        })
    }

    /// Entrywise table equality in the given mode.
    pub fn tables_equal(&self, other: &ParticleConservingR, mode: &CheckMode) -> Result<bool> {
        if self.n != other.n {
            return Ok(false);
        }
        for i in 1..=self.n {
            for j in 1..=self.n {
                let df = self.f(i, j) - other.f(i, j);
                let dg = self.g(i, j) - other.g(i, j);
                if !df.is_zero(mode)? || !dg.is_zero(mode)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The renames sending the `(lambda, mu)` (and `(alpha, beta)`) slots of
    /// the stored tables to the three pairwise slots of the consistency
    /// check: slot 12 keeps `(lambda, mu)`, slot 13 uses `(lambda, nu)`,
    /// slot 23 uses `(mu, nu)`.
    fn slot_renames(&self) -> [BTreeMap<Symbol, Symbol>; 3] {
        let mut r13 = BTreeMap::new();
        let mut r23 = BTreeMap::new();
        match self.spectral {
            SpectralKind::None => {}
            SpectralKind::Single | SpectralKind::Bicomponent => {
                r13.insert(names::mu(), names::nu());
                r23.insert(names::lambda(), names::mu());
                r23.insert(names::mu(), names::nu());
                if self.spectral == SpectralKind::Bicomponent {
                    r13.insert(names::beta(), names::gamma());
                    r23.insert(names::alpha(), names::beta());
                    r23.insert(names::beta(), names::gamma());
                }
            }
        }
        [BTreeMap::new(), r13, r23]
    }

    /// The three embedded factors of the consistency check, on legs
    /// `(1,2)`, `(1,3)`, `(2,3)` of a three-leg product.
    pub fn ybe_factors(&self) -> Result<[Operator; 3]> {
        let dims = vec![self.n, self.n, self.n];
        let base = self.to_operator();
        let [r12m, r13m, r23m] = self.slot_renames();
        let r12 = base.rename(&r12m).embed(&[1, 2], &dims)?;
        let r13 = base.rename(&r13m).embed(&[1, 3], &dims)?;
        let r23 = base.rename(&r23m).embed(&[2, 3], &dims)?;
        Ok([r12, r13, r23])
    }

    /// Verifies the three-leg consistency identity
    /// `R12 R13 R23 = R23 R13 R12` on `(C^n)^(x3)`, with the spectral and
    /// colour slots chained per [`Self::ybe_factors`]. Expand mode proves
    /// the identity; sample mode tests it at seeded rational points,
    /// logging (never hiding) points skipped for vanishing denominators.
    pub fn check_ybe(&self, mode: &CheckMode) -> Result<CheckReport> {
        let [r12, r13, r23] = self.ybe_factors()?;
        let name = match self.spectral {
            SpectralKind::Bicomponent => "ybe-bicomponent",
            _ => "ybe",
        };
        let (mode_name, seed) = mode_label(mode);
        match mode {
            CheckMode::Expand => {
                let lhs = r12.compose(&r13)?.compose(&r23)?;
                let rhs = r23.compose(&r13)?.compose(&r12)?;
                let diff = lhs.sub(&rhs)?;
                let item = match diff.find_nonzero(&CheckMode::Expand)? {
                    None => CheckItem::pass("entrywise difference"),
                    Some(w) => CheckItem::fail("entrywise difference").with_witness(w),
                };
                Ok(CheckReport::new(name, mode_name, seed, vec![item]))
            }
            CheckMode::Sample(cfg) => {
                let mut symbols = r12.symbols();
                symbols.extend(r13.symbols());
                symbols.extend(r23.symbols());
                let mut sampler = PointSampler::new(cfg.clone());
                let mut checks = Vec::new();
                let mut evaluated = 0usize;
                let mut attempts = 0usize;
                let budget = cfg.points + cfg.max_retries;
                while evaluated < cfg.points && attempts < budget {
                    attempts += 1;
                    let point = sampler.draw(&symbols);
                    let point_desc = point
                        .iter()
                        .map(|(s, v)| format!("{}={}", s.name(), v))
                        .collect::<Vec<_>>()
                        .join(", ");
                    let dense = (|| -> Result<_> {
                        Ok((
                            r12.eval_dense(&point)?,
                            r13.eval_dense(&point)?,
                            r23.eval_dense(&point)?,
                        ))
                    })();
                    let (d12, d13, d23) = match dense {
                        Ok(t) => t,
                        Err(Error::DenominatorVanishes) => {
                            checks.push(CheckItem::skipped(
                                format!("point {attempts}"),
                                format!("denominator vanishes at {point_desc}"),
                            ));
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    evaluated += 1;
                    let lhs = d12.mul(&d13).mul(&d23);
                    let rhs = d23.mul(&d13).mul(&d12);
                    let diff = lhs.sub(&rhs);
                    let item = match diff.first_nonzero() {
                        None => CheckItem::pass(format!("point {attempts}")).with_detail(point_desc),
                        Some((i, j, v)) => CheckItem::fail(format!("point {attempts}"))
                            .with_detail(format!("residual {v} at flat ({i}, {j}) for {point_desc}")),
                    };
                    checks.push(item);
                }
                if evaluated == 0 {
                    checks.push(CheckItem::fail("no point evaluated").with_detail(
                        "every sampled point hit a vanishing denominator".to_string(),
                    ));
                }
                Ok(CheckReport::new(name, mode_name, seed, checks))
            }
        }
    }

    /// The twist: multiplies `f_ij` by `phi_ij * u1_j(alpha) u2_j(alpha) /
    /// (u1_i(beta) u2_i(beta))` and `g_ij` by `u1_i(alpha) u2_j(alpha) /
    /// (u1_i(beta) u2_j(beta))`. Input must not already carry colour
    /// dependence; the output is bicomponent. On the diagonal the two
    /// prefactors coincide, so canonical form is preserved.
    pub fn twist(&self, tw: &TwistData) -> Result<ParticleConservingR> {
        if self.spectral == SpectralKind::Bicomponent {
            return Err(Error::Invalid(
                "twist input must be constant or single-spectral".to_string(),
            ));
        }
        if tw.n() != self.n {
            return Err(Error::Invalid(format!(
                "twist data has n = {}, matrix has n = {}",
                tw.n(),
                self.n
            )));
        }
        let alpha = names::alpha();
        let beta = names::beta();
        let mut f = BTreeMap::new();
        let mut g = BTreeMap::new();
        for (&(i, j), e) in &self.f {
            let pf = tw.phi(i, j) * tw.u_prod_at(j, alpha) / tw.u_prod_at(i, beta);
            f.insert((i, j), pf * e.clone());
        }
        for (&(i, j), e) in &self.g {
            let pg = (tw.u1_at(i, alpha) * tw.u2_at(j, alpha))
                / (tw.u1_at(i, beta) * tw.u2_at(j, beta));
            g.insert((i, j), pg * e.clone());
        }
        ParticleConservingR::from_tables(self.n, SpectralKind::Bicomponent, f, g)
    }

    /// Collapses colours onto the spectral pair (`alpha := lambda`,
    /// `beta := mu`), turning a bicomponent matrix into the single-spectral
    /// twisted form.
    pub fn colour_collapse(&self) -> Result<ParticleConservingR> {
        if self.spectral != SpectralKind::Bicomponent {
            return Err(Error::Invalid("colour collapse wants a bicomponent matrix".to_string()));
        }
        let map: BTreeMap<Symbol, ScalarExpr> = [
            (names::alpha(), ScalarExpr::sym(names::lambda())),
            (names::beta(), ScalarExpr::sym(names::mu())),
        ]
        .into_iter()
        .collect();
        let mut out = self.subst(&map)?;
        out.spectral = SpectralKind::Single;
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Serialization and spec files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TablesJson {
    n: usize,
    spectral: SpectralKind,
    f: Vec<(usize, usize, String)>,
    g: Vec<(usize, usize, String)>,
}

impl Serialize for ParticleConservingR {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = TablesJson {
            n: self.n,
            spectral: self.spectral,
            f: self.f.iter().map(|(&(i, j), e)| (i, j, e.to_string())).collect(),
            g: self.g.iter().map(|(&(i, j), e)| (i, j, e.to_string())).collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParticleConservingR {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = TablesJson::deserialize(deserializer)?;
        let parse_table = |entries: Vec<(usize, usize, String)>| {
            let mut out = BTreeMap::new();
            for (i, j, s) in entries {
                let e = parse_expr(&s).map_err(serde::de::Error::custom)?;
                if out.insert((i, j), e).is_some() {
                    return Err(serde::de::Error::custom(format!(
                        "duplicate table entry ({i}, {j})"
                    )));
                }
            }
            Ok(out)
        };
        let f = parse_table(json.f)?;
        let g = parse_table(json.g)?;
        ParticleConservingR::from_tables(json.n, json.spectral, f, g)
            .map_err(serde::de::Error::custom)
    }
}

/// On-disk description of a matrix: either a builder kind with optional
/// parameter overrides, or explicit tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RSpecFile {
    /// Leg dimension.
    #[serde(rename = "N")]
    pub n: usize,
    /// `"trig"`, `"multiparam"`, `"rational"`, `"coloured_rational"`, or
    /// absent when explicit tables are given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Substitutions `symbol -> expression` applied after building.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, String>>,
    /// Explicit `f` table entries `[i, j, expression]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<(usize, usize, String)>>,
    /// Explicit `g` table entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<(usize, usize, String)>>,
    /// Parameter dependence for explicit tables; builders imply theirs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralKind>,
}

impl RSpecFile {
    /// Realizes the description. `tw` supplies colour data for the
    /// `coloured_rational` builder and is ignored otherwise.
    pub fn build(&self, tw: Option<&TwistData>) -> Result<ParticleConservingR> {
        let base = match self.kind.as_deref() {
            Some("trig") => ParticleConservingR::build_standard(StandardKind::Trig { n: self.n })?,
            Some("multiparam") => {
                ParticleConservingR::build_standard(StandardKind::Multiparam { n: self.n })?
            }
            Some("rational") => {
                ParticleConservingR::build_standard(StandardKind::Rational { n: self.n })?
            }
            Some("coloured_rational") => {
                let tw = tw
                    .cloned()
                    .unwrap_or_else(|| TwistData::symbolic(self.n));
                ParticleConservingR::build_standard(StandardKind::ColouredRational {
                    n: self.n,
                    tw,
                })?
            }
            Some(other) => {
                return Err(Error::Invalid(format!("unknown builder kind `{other}`")));
            }
            None => {
                let spectral = self.spectral.ok_or_else(|| {
                    Error::Invalid("explicit tables need a `spectral` field".to_string())
                })?;
                let parse_table = |entries: &Option<Vec<(usize, usize, String)>>| -> Result<BTreeMap<(usize, usize), ScalarExpr>> {
                    let mut out = BTreeMap::new();
                    if let Some(list) = entries {
                        for (i, j, s) in list {
                            let e = parse_expr(s)?;
                            if out.insert((*i, *j), e).is_some() {
                                return Err(Error::Invalid(format!(
                                    "duplicate table entry ({i}, {j})"
                                )));
                            }
                        }
                    }
                    Ok(out)
                };
                ParticleConservingR::from_tables(
                    self.n,
                    spectral,
                    parse_table(&self.f)?,
                    parse_table(&self.g)?,
                )?
            }
        };
        match &self.params {
            None => Ok(base),
            Some(params) => {
                let mut map = BTreeMap::new();
                for (name, value) in params {
                    let sym = base
                        .to_operator()
                        .symbols()
                        .into_iter()
                        .find(|s| &s.name() == name)
                        .ok_or_else(|| {
                            Error::Invalid(format!("parameter `{name}` does not occur"))
                        })?;
                    map.insert(sym, parse_expr(value)?);
                }
                base.subst(&map)
            }
        }
    }
}

/// On-disk description of twist data. `phi` entries supply the square root
/// of each deformation entry (the value listed for `(i, j)` is the root,
/// and the entry itself is its square), which keeps all arithmetic
/// rational. `v1`, `v2` are expressions in the colour symbol `alpha`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistFile {
    pub phi: Vec<(usize, usize, String)>,
    pub v1: Vec<String>,
    pub v2: Vec<String>,
}

impl TwistFile {
    /// Realizes the description for index range `n`. Pairs absent from
    /// `phi` stay symbolic roots.
    pub fn build(&self, n: usize) -> Result<TwistData> {
        let mut s = BTreeMap::new();
        for (i, j, text) in &self.phi {
            if !(1 <= *i && i < j && *j <= n) {
                return Err(Error::Invalid(format!(
                    "phi root entry ({i}, {j}) must satisfy 1 <= i < j <= {n}"
                )));
            }
            if s.insert((*i, *j), parse_expr(text)?).is_some() {
                return Err(Error::Invalid(format!("duplicate phi root entry ({i}, {j})")));
            }
        }
        let parse_list = |list: &[String]| -> Result<Vec<ScalarExpr>> {
            list.iter().map(|t| parse_expr(t)).collect()
        };
        TwistData::new(n, s, parse_list(&self.v1)?, parse_list(&self.v2)?, names::alpha())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Assignment, SampleConfig};
    use crate::tensor::flat_index;
    use num::rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn trig(n: usize) -> ParticleConservingR {
        ParticleConservingR::build_standard(StandardKind::Trig { n }).unwrap()
    }

    fn rational(n: usize) -> ParticleConservingR {
        ParticleConservingR::build_standard(StandardKind::Rational { n }).unwrap()
    }

    #[test]
    fn trig_matrix_at_q_two_is_pinned() {
        let op = trig(2).to_operator();
        let point: Assignment = [(names::q(), r(2))].into_iter().collect();
        let dense = op.eval_dense(&point).unwrap();
        // Basis order (1,1), (1,2), (2,1), (2,2).
        for (k, expect) in [r(2), r(1), r(1), r(2)].into_iter().enumerate() {
            assert_eq!(dense.get(k + 1, k + 1), &expect);
        }
        let row = flat_index(&[1, 2], &[2, 2]);
        let col = flat_index(&[2, 1], &[2, 2]);
        assert_eq!(dense.get(row, col), &BigRational::new(3.into(), 2.into()));
        assert_eq!(dense.get(col, row), &r(0));
        assert_eq!(op.num_entries(), 5);
    }

    #[test]
    fn rational_tables_at_pinned_point() {
        let rm = rational(2);
        let point: Assignment = [
            (names::lambda(), r(2)),
            (names::mu(), r(1)),
            (names::h(), r(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(rm.f(1, 1).eval(&point).unwrap(), r(2));
        assert_eq!(rm.f(1, 2).eval(&point).unwrap(), r(1));
        assert_eq!(rm.g(1, 2).eval(&point).unwrap(), r(1));
        assert_eq!(rm.g(2, 2), ScalarExpr::zero());
    }

    #[test]
    fn multiparam_with_unit_phi_is_trig() {
        let mp = ParticleConservingR::build_standard(StandardKind::Multiparam { n: 3 }).unwrap();
        let map: BTreeMap<Symbol, ScalarExpr> = [
            (Symbol::root_pair(1, 2), ScalarExpr::one()),
            (Symbol::root_pair(1, 3), ScalarExpr::one()),
            (Symbol::root_pair(2, 3), ScalarExpr::one()),
        ]
        .into_iter()
        .collect();
        let collapsed = mp.subst(&map).unwrap();
        assert!(collapsed.tables_equal(&trig(3), &CheckMode::Expand).unwrap());
    }

    #[test]
    fn diagonal_g_folds_into_f() {
        let mut f = BTreeMap::new();
        let mut g = BTreeMap::new();
        f.insert((1, 1), ScalarExpr::one());
        g.insert((1, 1), ScalarExpr::var("t"));
        let rm = ParticleConservingR::from_tables(2, SpectralKind::None, f, g).unwrap();
        assert_eq!(rm.f(1, 1), ScalarExpr::one() + ScalarExpr::var("t"));
        assert!(rm.g(1, 1).is_zero_expand());
    }

    #[test]
    fn identity_and_flip_satisfy_ybe() {
        for rm in [
            ParticleConservingR::identity(2).unwrap(),
            ParticleConservingR::flip(3).unwrap(),
        ] {
            let report = rm.check_ybe(&CheckMode::Expand).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn trig_satisfies_ybe_expand() {
        let report = trig(2).check_ybe(&CheckMode::Expand).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn trig_three_satisfies_ybe_at_sampled_points() {
        let mode = CheckMode::Sample(SampleConfig::new(5, 17));
        let report = trig(3).check_ybe(&mode).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn rational_satisfies_ybe_expand() {
        let report = rational(2).check_ybe(&CheckMode::Expand).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn corrupted_table_fails_ybe_with_witness() {
        let mut rm = trig(2);
        rm.f.insert((1, 2), ScalarExpr::sym(names::q()) + ScalarExpr::int(1));
        let report = rm.check_ybe(&CheckMode::Expand).unwrap();
        assert!(!report.passed());
        let failure = report.failures().next().unwrap();
        assert!(failure.witness.is_some());
        let sample = rm.check_ybe(&CheckMode::Sample(SampleConfig::new(4, 3))).unwrap();
        assert!(!sample.passed());
    }

    #[test]
    fn twist_with_unit_colours_gives_multiparam() {
        let n = 3;
        let s: BTreeMap<(usize, usize), ScalarExpr> = BTreeMap::new();
        let v1 = vec![ScalarExpr::one(); n];
        let v2 = vec![ScalarExpr::one(); n];
        let tw = TwistData::new(n, s, v1, v2, names::alpha()).unwrap();
        let twisted = trig(n).twist(&tw).unwrap();
        let mp = ParticleConservingR::build_standard(StandardKind::Multiparam { n }).unwrap();
        assert!(twisted.tables_equal(&mp, &CheckMode::Expand).unwrap());
    }

    #[test]
    fn identity_twist_is_inert() {
        let tw = TwistData::identity(2);
        let twisted = trig(2).twist(&tw).unwrap();
        assert!(twisted.tables_equal(&trig(2), &CheckMode::Expand).unwrap());
    }

    #[test]
    fn coloured_rational_builder_equals_twisted_rational() {
        let tw = TwistData::symbolic(2);
        let built = ParticleConservingR::build_standard(StandardKind::ColouredRational {
            n: 2,
            tw: tw.clone(),
        })
        .unwrap();
        let twisted = rational(2).twist(&tw).unwrap();
        assert!(built.tables_equal(&twisted, &CheckMode::Expand).unwrap());
        // The dressed diagonal folds the step into the spectral difference.
        let u_ratio = tw.u_prod_at(1, names::alpha()) / tw.u_prod_at(1, names::beta());
        let expected = (ScalarExpr::sym(names::lambda()) - ScalarExpr::sym(names::mu())
            + ScalarExpr::sym(names::h()))
            * u_ratio;
        assert_eq!(built.f(1, 1), expected);
    }

    #[test]
    fn twisted_trig_passes_bicomponent_ybe() {
        let tw = TwistData::symbolic(2);
        let twisted = trig(2).twist(&tw).unwrap();
        assert_eq!(twisted.spectral_kind(), SpectralKind::Bicomponent);
        let report = twisted.check_ybe(&CheckMode::Expand).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn twisted_rational_passes_bicomponent_ybe() {
        let tw = TwistData::symbolic(2);
        let twisted = rational(2).twist(&tw).unwrap();
        let report = twisted.check_ybe(&CheckMode::Expand).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn random_twist_closure_at_sampled_points() {
        let tw = TwistData::random(3, 2, 99);
        let twisted = trig(3).twist(&tw).unwrap();
        let report = twisted
            .check_ybe(&CheckMode::Sample(SampleConfig::new(5, 23)))
            .unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn ff_matrices_reproduce_the_twist() {
        let tw = TwistData::symbolic(2);
        let (f, fhat) = tw.ff_matrices();
        let rm = trig(2);
        let conjugated = f
            .invert_diagonal()
            .unwrap()
            .compose(&rm.to_operator())
            .unwrap()
            .compose(&fhat.invert_diagonal().unwrap())
            .unwrap();
        let twisted = rm.twist(&tw).unwrap().to_operator();
        assert!(conjugated.equals(&twisted, &CheckMode::Expand).unwrap());
    }

    #[test]
    fn ff_matrices_coincide_when_v1_equals_v2() {
        let n = 2;
        let v: Vec<ScalarExpr> = (1..=n)
            .map(|i| ScalarExpr::var(&format!("w1_{i}")) * ScalarExpr::sym(names::alpha()))
            .collect();
        let tw = TwistData::new(n, BTreeMap::new(), v.clone(), v, names::alpha()).unwrap();
        let (f, fhat) = tw.ff_matrices();
        assert!(f.equals(&fhat, &CheckMode::Expand).unwrap());
        let id = TwistData::identity(2);
        let (fi, fhi) = id.ff_matrices();
        let identity = Operator::identity(vec![2, 2]);
        assert!(fi.equals(&identity, &CheckMode::Expand).unwrap());
        assert!(fhi.equals(&identity, &CheckMode::Expand).unwrap());
    }

    #[test]
    fn colour_collapse_recovers_single_spectral_twist() {
        let tw = TwistData::symbolic(2);
        let collapsed = rational(2).twist(&tw).unwrap().colour_collapse().unwrap();
        assert_eq!(collapsed.spectral_kind(), SpectralKind::Single);
        // Collapsed tables: prefactors now in lambda and mu.
        let lam = names::lambda();
        let mu = names::mu();
        let expected_g = tw.u1_at(1, lam) * tw.u2_at(2, lam)
            / (tw.u1_at(1, mu) * tw.u2_at(2, mu))
            * ScalarExpr::sym(names::h());
        assert_eq!(collapsed.g(1, 2), expected_g);
        let report = collapsed.check_ybe(&CheckMode::Expand).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn twist_composition_matches_pointwise_product() {
        let n = 2;
        let tw1 = TwistData::symbolic(n);
        // A second, structurally different twist with its own symbols.
        let s2: BTreeMap<(usize, usize), ScalarExpr> =
            [((1, 2), ScalarExpr::var("z_12"))].into_iter().collect();
        let v1: Vec<ScalarExpr> = (1..=n)
            .map(|i| ScalarExpr::var(&format!("y1_{i}")) * ScalarExpr::sym(names::alpha()).pow(2 * i as i64))
            .collect();
        let v2: Vec<ScalarExpr> = (1..=n)
            .map(|i| ScalarExpr::var(&format!("y2_{i}")))
            .collect();
        let tw2 = TwistData::new(n, s2, v1, v2, names::alpha()).unwrap();
        let once = trig(n)
            .twist(&tw1)
            .unwrap()
            .colour_collapse()
            .unwrap()
            .twist(&tw2)
            .unwrap()
            .colour_collapse()
            .unwrap();
        let product = trig(n)
            .twist(&tw1.pointwise_mul(&tw2).unwrap())
            .unwrap()
            .colour_collapse()
            .unwrap();
        assert!(once.tables_equal(&product, &CheckMode::Expand).unwrap());
    }

    #[test]
    fn spec_file_builders_and_tables() {
        let spec: RSpecFile = serde_json::from_str(
            r#"{"N": 2, "kind": "trig", "params": {"q": "3"}}"#,
        )
        .unwrap();
        let rm = spec.build(None).unwrap();
        assert_eq!(rm.f(1, 1), ScalarExpr::int(3));
        assert_eq!(rm.g(1, 2), ScalarExpr::int(3) - ScalarExpr::rat(BigRational::new(1.into(), 3.into())));

        let explicit: RSpecFile = serde_json::from_str(
            r#"{"N": 2, "spectral": "none",
                "f": [[1,1,"1"],[2,2,"1"]],
                "g": [[1,2,"1"],[2,1,"1"]]}"#,
        )
        .unwrap();
        let rm = explicit.build(None).unwrap();
        assert!(rm.tables_equal(&ParticleConservingR::flip(2).unwrap(), &CheckMode::Expand).unwrap());

        let bad: RSpecFile =
            serde_json::from_str(r#"{"N": 2, "kind": "nope"}"#).unwrap();
        assert!(bad.build(None).is_err());
    }

    #[test]
    fn serde_round_trip_preserves_tables() {
        let rm = rational(3);
        let text = serde_json::to_string(&rm).unwrap();
        let back: ParticleConservingR = serde_json::from_str(&text).unwrap();
        assert!(rm.tables_equal(&back, &CheckMode::Expand).unwrap());
        assert_eq!(back.spectral_kind(), SpectralKind::Single);
    }

    #[test]
    fn twist_file_round_trip() {
        let file: TwistFile = serde_json::from_str(
            r#"{"phi": [[1, 2, "3"]], "v1": ["1 + alpha", "2"], "v2": ["alpha", "alpha^2"]}"#,
        )
        .unwrap();
        let tw = file.build(2).unwrap();
        assert_eq!(tw.phi(1, 2), ScalarExpr::int(9));
        assert_eq!(tw.phi(2, 1), ScalarExpr::one() / ScalarExpr::int(9));
        assert_eq!(
            tw.u1_at(1, names::beta()),
            (ScalarExpr::one() + ScalarExpr::sym(names::beta())).pow(2)
        );
        let bad: TwistFile = serde_json::from_str(
            r#"{"phi": [[2, 1, "3"]], "v1": ["1", "1"], "v2": ["1", "1"]}"#,
        )
        .unwrap();
        assert!(bad.build(2).is_err());
    }
}
