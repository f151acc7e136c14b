//! Sparse operators on tensor products of finite-dimensional spaces.
//!
//! An [`Operator`] acts on `V_1 (x) ... (x) V_k` with the dimension of each
//! leg recorded in `site_dims`. Entries are indexed by 1-based multi-indices
//! `(row, col)` and stored sparsely; absent entries are zero, and inserting
//! an identically zero expression removes the entry. The map is a `BTreeMap`
//! with `Vec<usize>` keys ordered lexicographically, which coincides with
//! row-major order of the flattened matrix, so iteration and serialization
//! are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Assignment, CheckMode, PointSampler, ScalarExpr, Symbol};

/// A sparse matrix on a tensor product, with exact symbolic entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    site_dims: Vec<usize>,
    entries: BTreeMap<(Vec<usize>, Vec<usize>), ScalarExpr>,
}

/// Location and value of a nonzero entry found by a check, JSON-ready.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonzeroWitness {
    /// 1-based row multi-index.
    pub row: Vec<usize>,
    /// 1-based column multi-index.
    pub col: Vec<usize>,
    /// The offending entry, or its value at `point` in sample mode.
    pub value: String,
    /// The sample point, when the witness came from sampling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<BTreeMap<String, String>>,
}

fn point_to_strings(point: &Assignment) -> BTreeMap<String, String> {
    point.iter().map(|(s, v)| (s.name(), v.to_string())).collect()
}

impl Operator {
    /// The zero operator on the given legs.
    pub fn zero(site_dims: Vec<usize>) -> Operator {
        assert!(site_dims.iter().all(|&d| d > 0), "site dimensions must be positive");
        Operator { site_dims, entries: BTreeMap::new() }
    }

    /// The identity operator on the given legs.
    pub fn identity(site_dims: Vec<usize>) -> Operator {
        let mut op = Operator::zero(site_dims);
        let dims = op.site_dims.clone();
        for idx in MultiIndex::all(&dims) {
            op.entries.insert((idx.clone(), idx), ScalarExpr::one());
        }
        op
    }

    /// The single-site matrix unit `e_{i j}`: one at row `i`, column `j`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Operator {
        assert!((1..=dim).contains(&i) && (1..=dim).contains(&j), "unit index out of range");
        let mut op = Operator::zero(vec![dim]);
        op.entries.insert((vec![i], vec![j]), ScalarExpr::one());
        op
    }

    /// The flip `P(x (x) y) = y (x) x` on two legs of dimension `n`.
    pub fn swap(n: usize) -> Operator {
        let mut op = Operator::zero(vec![n, n]);
        for i in 1..=n {
            for j in 1..=n {
                op.entries.insert((vec![i, j], vec![j, i]), ScalarExpr::one());
            }
        }
        op
    }

    /// Leg dimensions.
    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    /// Total (flattened) dimension.
    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    /// Number of stored (nonzero) entries.
    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Iterates stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<usize>, &ScalarExpr)> {
        self.entries.iter().map(|((r, c), e)| (r, c, e))
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.site_dims.len() {
            return Err(Error::Shape(format!(
                "index rank {} does not match {} legs",
                idx.len(),
                self.site_dims.len()
            )));
        }
        for (pos, (&i, &d)) in idx.iter().zip(&self.site_dims).enumerate() {
            if i < 1 || i > d {
                return Err(Error::Shape(format!(
                    "index {i} out of range 1..={d} at leg {}",
                    pos + 1
                )));
            }
        }
        Ok(())
    }

    /// Sets an entry, removing it when the expression is identically zero.
    pub fn set(&mut self, row: Vec<usize>, col: Vec<usize>, expr: ScalarExpr) -> Result<()> {
        self.check_index(&row)?;
        self.check_index(&col)?;
        if expr.is_zero_expand() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), expr);
        }
        Ok(())
    }

    /// Adds into an entry.
    pub fn add_to(&mut self, row: Vec<usize>, col: Vec<usize>, expr: ScalarExpr) -> Result<()> {
        self.check_index(&row)?;
        self.check_index(&col)?;
        let key = (row, col);
        let current = self.entries.remove(&key).unwrap_or_else(ScalarExpr::zero);
        let sum = current + expr;
        if !sum.is_zero_expand() {
            self.entries.insert(key, sum);
        }
        Ok(())
    }

    /// The entry at `(row, col)`, zero when absent.
    pub fn get(&self, row: &[usize], col: &[usize]) -> ScalarExpr {
        self.entries
            .get(&(row.to_vec(), col.to_vec()))
            .cloned()
            .unwrap_or_else(ScalarExpr::zero)
    }

    /// Kronecker product: `self` on the left legs, `other` on the right.
    pub fn kron(&self, other: &Operator) -> Operator {
        let mut dims = self.site_dims.clone();
        dims.extend_from_slice(&other.site_dims);
        let mut out = Operator::zero(dims);
        for ((ra, ca), ea) in &self.entries {
            for ((rb, cb), eb) in &other.entries {
                let mut row = ra.clone();
                row.extend_from_slice(rb);
                let mut col = ca.clone();
                col.extend_from_slice(cb);
                let prod = ea * eb;
                if !prod.is_zero_expand() {
                    out.entries.insert((row, col), prod);
                }
            }
        }
        out
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if self.site_dims != other.site_dims {
            return Err(Error::Shape(format!(
                "compose wants equal legs, got {:?} and {:?}",
                self.site_dims, other.site_dims
            )));
        }
        // Group the right factor's entries by row for the contraction.
        let mut by_row: BTreeMap<&Vec<usize>, Vec<(&Vec<usize>, &ScalarExpr)>> = BTreeMap::new();
        for ((rb, cb), eb) in &other.entries {
            by_row.entry(rb).or_default().push((cb, eb));
        }
        let mut out = Operator::zero(self.site_dims.clone());
        for ((ra, ca), ea) in &self.entries {
            if let Some(right) = by_row.get(ca) {
                for (cb, eb) in right {
                    let key = (ra.clone(), (*cb).clone());
                    let current = out.entries.remove(&key).unwrap_or_else(ScalarExpr::zero);
                    let sum = current + ea * eb;
                    if !sum.is_zero_expand() {
                        out.entries.insert(key, sum);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Embeds `self` into a larger tensor product: leg `k` of `self` lands
    /// on the 1-based position `legs[k]` of a product with dimensions
    /// `total_dims`, identity on every other position.
    pub fn embed(&self, legs: &[usize], total_dims: &[usize]) -> Result<Operator> {
        if legs.len() != self.site_dims.len() {
            return Err(Error::Shape(format!(
                "{} target legs for an operator with {} legs",
                legs.len(),
                self.site_dims.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for (&leg, &dim) in legs.iter().zip(&self.site_dims) {
            if leg < 1 || leg > total_dims.len() {
                return Err(Error::Shape(format!(
                    "target leg {leg} out of range 1..={}",
                    total_dims.len()
                )));
            }
            if !seen.insert(leg) {
                return Err(Error::Shape(format!("target leg {leg} repeated")));
            }
            if total_dims[leg - 1] != dim {
                return Err(Error::Shape(format!(
                    "leg {leg} has dimension {}, operator wants {dim}",
                    total_dims[leg - 1]
                )));
            }
        }
        let passive: Vec<usize> = (1..=total_dims.len()).filter(|p| !seen.contains(p)).collect();
        let passive_dims: Vec<usize> = passive.iter().map(|&p| total_dims[p - 1]).collect();
        let mut out = Operator::zero(total_dims.to_vec());
        for ((r, c), e) in &self.entries {
            for idle in MultiIndex::all(&passive_dims) {
                let mut row = vec![0usize; total_dims.len()];
                let mut col = vec![0usize; total_dims.len()];
                for (k, &leg) in legs.iter().enumerate() {
                    row[leg - 1] = r[k];
                    col[leg - 1] = c[k];
                }
                for (k, &p) in passive.iter().enumerate() {
                    row[p - 1] = idle[k];
                    col[p - 1] = idle[k];
                }
                out.entries.insert((row, col), e.clone());
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.site_dims != other.site_dims {
            return Err(Error::Shape("add wants equal legs".to_string()));
        }
        let mut out = self.clone();
        for ((r, c), e) in &other.entries {
            out.add_to(r.clone(), c.clone(), e.clone())?;
        }
        Ok(out)
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        if self.site_dims != other.site_dims {
            return Err(Error::Shape("sub wants equal legs".to_string()));
        }
        let mut out = self.clone();
        for ((r, c), e) in &other.entries {
            out.add_to(r.clone(), c.clone(), -e.clone())?;
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &ScalarExpr) -> Operator {
        if s.is_zero_expand() {
            return Operator::zero(self.site_dims.clone());
        }
        Operator {
            site_dims: self.site_dims.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, e)| (k.clone(), e * s))
                .collect(),
        }
    }

    /// All symbols occurring in any entry.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for e in self.entries.values() {
            out.extend(e.symbols());
        }
        out
    }

    /// Applies a substitution to every entry.
    pub fn subst(&self, map: &BTreeMap<Symbol, ScalarExpr>) -> Result<Operator> {
        let mut out = Operator::zero(self.site_dims.clone());
        for ((r, c), e) in &self.entries {
            let e2 = e.subst(map)?;
            if !e2.is_zero_expand() {
                out.entries.insert((r.clone(), c.clone()), e2);
            }
        }
        Ok(out)
    }

    /// Renames symbols in every entry.
    pub fn rename(&self, map: &BTreeMap<Symbol, Symbol>) -> Operator {
        Operator {
            site_dims: self.site_dims.clone(),
            entries: self
                .entries
                .iter()
                .map(|((r, c), e)| ((r.clone(), c.clone()), e.rename(map)))
                .collect(),
        }
    }

    /// Searches for a nonzero entry, by expansion or at sampled points.
    /// `None` means the operator passed the zero test in the given mode.
    pub fn find_nonzero(&self, mode: &CheckMode) -> Result<Option<NonzeroWitness>> {
        match mode {
            CheckMode::Expand => {
                // Entries are stored canonicalized, so any stored entry that
                // is not syntactically zero is a genuine nonzero.
                for ((r, c), e) in &self.entries {
                    if !e.is_zero_expand() {
                        return Ok(Some(NonzeroWitness {
                            row: r.clone(),
                            col: c.clone(),
                            value: e.to_string(),
                            point: None,
                        }));
                    }
                }
                Ok(None)
            }
            CheckMode::Sample(cfg) => {
                let symbols = self.symbols();
                let mut sampler = PointSampler::new(cfg.clone());
                for _ in 0..cfg.points {
                    let (point, values) = self.eval_entries_with_retry(&symbols, &mut sampler)?;
                    for ((r, c), v) in values {
                        if !v.is_zero() {
                            return Ok(Some(NonzeroWitness {
                                row: r,
                                col: c,
                                value: v.to_string(),
                                point: Some(point_to_strings(&point)),
                            }));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    fn eval_entries_with_retry(
        &self,
        symbols: &BTreeSet<Symbol>,
        sampler: &mut PointSampler,
    ) -> Result<(Assignment, Vec<((Vec<usize>, Vec<usize>), BigRational)>)> {
        let retries = sampler.config().max_retries.max(1);
        'point: for _ in 0..retries {
            let point = sampler.draw(symbols);
            let mut values = Vec::with_capacity(self.entries.len());
            for ((r, c), e) in &self.entries {
                match e.eval(&point) {
                    Ok(v) => values.push(((r.clone(), c.clone()), v)),
                    Err(Error::DenominatorVanishes) => continue 'point,
                    Err(e) => return Err(e),
                }
            }
            return Ok((point, values));
        }
        Err(Error::SamplingExhausted(retries))
    }

    /// Zero test in the given mode.
    pub fn is_zero(&self, mode: &CheckMode) -> Result<bool> {
        Ok(self.find_nonzero(mode)?.is_none())
    }

    /// Equality test in the given mode.
    pub fn equals(&self, other: &Operator, mode: &CheckMode) -> Result<bool> {
        Ok(self.sub(other)?.find_nonzero(mode)?.is_none())
    }

    /// Inverts an operator whose stored entries all sit on the diagonal and
    /// cover it completely.
    pub fn invert_diagonal(&self) -> Result<Operator> {
        let expected: usize = self.dim();
        if self.entries.len() != expected {
            return Err(Error::Invalid(format!(
                "diagonal inverse wants {expected} diagonal entries, found {}",
                self.entries.len()
            )));
        }
        let mut out = Operator::zero(self.site_dims.clone());
        for ((r, c), e) in &self.entries {
            if r != c {
                return Err(Error::Invalid(format!(
                    "entry at ({r:?}, {c:?}) is off the diagonal"
                )));
            }
            out.entries.insert((r.clone(), c.clone()), e.inv()?);
        }
        Ok(out)
    }

    /// Evaluates every entry at `point` into a dense row-major matrix.
    pub fn eval_dense(&self, point: &Assignment) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut data = vec![BigRational::zero(); n * n];
        for ((r, c), e) in &self.entries {
            let i = flat_index(r, &self.site_dims);
            let j = flat_index(c, &self.site_dims);
            data[(i - 1) * n + (j - 1)] = e.eval(point)?;
        }
        Ok(DenseMatrix { n, data })
    }
}

/// Row-major flattening of a 1-based multi-index: with dimensions
/// `(d_1, ..., d_k)`, index `(i_1, ..., i_k)` maps to
/// `1 + sum_m (i_m - 1) * d_{m+1} * ... * d_k`.
pub fn flat_index(idx: &[usize], dims: &[usize]) -> usize {
    let mut acc = 0usize;
    for (m, &i) in idx.iter().enumerate() {
        let stride: usize = dims[m + 1..].iter().product();
        acc += (i - 1) * stride;
    }
    acc + 1
}

/// Iterator over all 1-based multi-indices for the given dimensions, in
/// row-major order.
pub struct MultiIndex {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndex {
    /// All multi-indices for `dims`.
    pub fn all(dims: &[usize]) -> MultiIndex {
        let next = if dims.iter().any(|&d| d == 0) {
            None
        } else {
            Some(vec![1; dims.len()])
        };
        MultiIndex { dims: dims.to_vec(), next }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        // Advance like an odometer, last position fastest.
        let mut bump = current.clone();
        let mut pos = bump.len();
        loop {
            if pos == 0 {
                self.next = None;
                break;
            }
            pos -= 1;
            if bump[pos] < self.dims[pos] {
                bump[pos] += 1;
                for p in pos + 1..bump.len() {
                    bump[p] = 1;
                }
                self.next = Some(bump);
                break;
            }
        }
        Some(current)
    }
}

/// Dense square matrix of rationals, for fast sample-mode products.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl DenseMatrix {
    /// Side length.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    /// Matrix product.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "dense product wants equal dimensions");
        let n = self.n;
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        DenseMatrix { n, data }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "dense difference wants equal dimensions");
        DenseMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// First nonzero entry as 1-based `(i, j)`, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &BigRational)> {
        for i in 0..self.n {
            for j in 0..self.n {
                let v = &self.data[i * self.n + j];
                if !v.is_zero() {
                    return Some((i + 1, j + 1, v));
                }
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    site_dims: Vec<usize>,
    entries: Vec<(Vec<usize>, Vec<usize>, String)>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = OperatorJson {
            site_dims: self.site_dims.clone(),
            entries: self
                .entries
                .iter()
                .map(|((r, c), e)| (r.clone(), c.clone(), e.to_string()))
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = OperatorJson::deserialize(deserializer)?;
        let mut op = Operator::zero(json.site_dims);
        for (r, c, s) in json.entries {
            let expr = crate::scalar::parse_expr(&s).map_err(serde::de::Error::custom)?;
            if op.entries.contains_key(&(r.clone(), c.clone())) {
                return Err(serde::de::Error::custom(format!(
                    "duplicate entry at ({r:?}, {c:?})"
                )));
            }
            op.set(r, c, expr).map_err(serde::de::Error::custom)?;
        }
        Ok(op)
    }
}
