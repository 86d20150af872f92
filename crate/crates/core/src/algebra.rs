//! The twisted group algebra `F^σG` over exact rationals.
//!
//! The algebra has basis `{ε_g : g ∈ G}` with `ε_g ε_h = σ(g,h) ε_{gh}` and
//! unit `σ(e,e)⁻¹ ε_e`; each homogeneous component `ℚ·ε_g` is 1-dimensional.
//! Associativity is equivalent to σ satisfying the 2-cocycle identity, and
//! non-cocycle tables are allowed on the same multiplication path so that
//! non-associative examples (the octonions) work too; operations that need
//! associativity guard explicitly.

use crate::cocycles::{self, build_sigma, Bicharacter, Cocycle, SignMap};
use crate::error::{Error, Result};
use crate::groups::{FinAbGroup, GroupElement};
use crate::scalar::{rat_int, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A twisted group algebra `F^σG` with its defining grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedAlgebra {
    group: FinAbGroup,
    sigma: Cocycle,
}

/// An element `Σ c_g ε_g`, kept sparse with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<GroupElement, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(g: GroupElement) -> Self {
        Self::from_terms([(g, rat_int(1))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, Rational)>) -> Self {
        let mut out = AlgebraElement::default();
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: GroupElement, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &GroupElement) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.terms.iter()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(g, v)| (g.clone(), v * c))
                .collect(),
        }
    }

    /// Largest coefficient magnitude; zero for the zero element.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(|| rat_int(0))
    }
}

impl TwistedAlgebra {
    /// Wraps a cocycle table as an algebra. The σ values being nonzero (a
    /// construction invariant of [`Cocycle`]) makes this a graded-division
    /// algebra.
    pub fn new(group: FinAbGroup, sigma: Cocycle) -> Result<Self> {
        if sigma.group() != &group {
            return Err(Error::Validation(
                "cocycle is defined on a different group".into(),
            ));
        }
        Ok(TwistedAlgebra { group, sigma })
    }

    /// Builds `F^σG` from the presentation data (generator orders, power
    /// scalars `x_i^{m_i} = μ_i`, commutation bicharacter
    /// `x_i x_j = β(g_i,g_j) x_j x_i`), verifying the generator relations on
    /// construction.
    pub fn from_presentation(
        orders: Vec<u32>,
        mu: &[Rational],
        beta: &Bicharacter,
    ) -> Result<Self> {
        let group = FinAbGroup::new(orders)?;
        let sigma = build_sigma(group.clone(), beta, mu)?;
        let algebra = TwistedAlgebra { group, sigma };
        algebra.verify_presentation(mu, beta)?;
        Ok(algebra)
    }

    fn verify_presentation(&self, mu: &[Rational], beta: &Bicharacter) -> Result<()> {
        let one = self.one();
        for i in 0..self.group.rank() {
            let gi = self.group.generator(i);
            let xi = AlgebraElement::basis(gi.clone());
            let mut power = one.clone();
            for _ in 0..self.group.orders()[i] {
                power = self.multiply(&power, &xi);
            }
            if power != one.scale(&mu[i]) {
                return Err(Error::Validation(format!(
                    "generator {} does not satisfy its power relation",
                    i + 1
                )));
            }
            for j in 0..i {
                let gj = self.group.generator(j);
                let xj = AlgebraElement::basis(gj.clone());
                let lhs = self.multiply(&xi, &xj);
                let rhs = self
                    .multiply(&xj, &xi)
                    .scale(&beta.eval_rational(&gi, &gj));
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "generators {} and {} do not satisfy their commutation relation",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn sigma(&self) -> &Cocycle {
        &self.sigma
    }

    pub fn dimension(&self) -> u64 {
        self.group.size()
    }

    /// The unit `σ(e,e)⁻¹ ε_e`.
    pub fn one(&self) -> AlgebraElement {
        let e = self.group.identity();
        let s = self.sigma.eval(&e, &e);
        AlgebraElement::from_terms([(e, s.recip())])
    }

    pub fn basis_element(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement::basis(g.clone())
    }

    /// Bilinear extension of `ε_g ε_h = σ(g,h) ε_{gh}`.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, cg) in &x.terms {
            for (h, ch) in &y.terms {
                let gh = self.group.mul_reduced(g, h);
                out.add_term(gh, cg * ch * self.sigma.eval(g, h));
            }
        }
        out
    }

    /// Checks `(ε_g ε_h) ε_k = ε_g (ε_h ε_k)` on basis triples; exhaustive
    /// for |G| ≤ 256, a seeded 10⁵-triple sample above.
    pub fn is_associative(&self) -> bool {
        let n = self.group.size();
        if n <= 256 {
            let size = n as usize;
            let mul = cocycles::mul_table(&self.group);
            if let Some(signs) = self.sigma.sign_table() {
                for g in 0..size {
                    for h in 0..size {
                        let gh = mul[g * size + h] as usize;
                        for k in 0..size {
                            let hk = mul[h * size + k] as usize;
                            if signs[g * size + h] ^ signs[gh * size + k]
                                != signs[h * size + k] ^ signs[g * size + hk]
                            {
                                return false;
                            }
                        }
                    }
                }
                return true;
            }
            let elems: Vec<_> = self.group.enumerate().collect();
            for g in &elems {
                for h in &elems {
                    let gh_elem = self.multiply(&AlgebraElement::basis(g.clone()), &AlgebraElement::basis(h.clone()));
                    for k in &elems {
                        let lhs = self.multiply(&gh_elem, &AlgebraElement::basis(k.clone()));
                        let hk_elem = self.multiply(&AlgebraElement::basis(h.clone()), &AlgebraElement::basis(k.clone()));
                        let rhs = self.multiply(&AlgebraElement::basis(g.clone()), &hk_elem);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            true
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            for _ in 0..100_000 {
                let g = self.group.element(rng.gen_range(0..n));
                let h = self.group.element(rng.gen_range(0..n));
                let k = self.group.element(rng.gen_range(0..n));
                let gh = self.group.mul_reduced(&g, &h);
                let hk = self.group.mul_reduced(&h, &k);
                let lhs = self.sigma.eval(&g, &h) * self.sigma.eval(&gh, &k);
                let rhs = self.sigma.eval(&h, &k) * self.sigma.eval(&g, &hk);
                if lhs != rhs {
                    return false;
                }
            }
            true
        }
    }

    /// Evaluates the alternative laws `x(xy) = (xx)y` and `(yx)x = y(xx)` at
    /// seeded random rational points, and looks for a nonzero associator on
    /// basis triples.
    pub fn alternativity_report(&self, trials: u32, seed: u64) -> AlternativityReport {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut left_violations = 0;
        let mut right_violations = 0;
        let mut max_violation = rat_int(0);
        for _ in 0..trials {
            let x = self.random_element(&mut rng);
            let y = self.random_element(&mut rng);
            let xx = self.multiply(&x, &x);
            let left = self
                .multiply(&x, &self.multiply(&x, &y))
                .sub(&self.multiply(&xx, &y));
            let right = self
                .multiply(&self.multiply(&y, &x), &x)
                .sub(&self.multiply(&y, &xx));
            if !left.is_zero() {
                left_violations += 1;
                max_violation = max_violation.max(left.max_abs_coeff());
            }
            if !right.is_zero() {
                right_violations += 1;
                max_violation = max_violation.max(right.max_abs_coeff());
            }
        }
        let associator_witness = self.basis_associator_witness();
        AlternativityReport {
            trials,
            left_violations,
            right_violations,
            max_violation,
            associator_witness,
        }
    }

    /// First basis triple with `(ε_g ε_h) ε_k ≠ ε_g (ε_h ε_k)`, if any.
    fn basis_associator_witness(
        &self,
    ) -> Option<(GroupElement, GroupElement, GroupElement, AlgebraElement)> {
        if self.group.size() > 256 {
            return None;
        }
        let elems: Vec<_> = self.group.enumerate().collect();
        for g in &elems {
            for h in &elems {
                for k in &elems {
                    let eg = AlgebraElement::basis(g.clone());
                    let eh = AlgebraElement::basis(h.clone());
                    let ek = AlgebraElement::basis(k.clone());
                    let assoc = self
                        .multiply(&self.multiply(&eg, &eh), &ek)
                        .sub(&self.multiply(&eg, &self.multiply(&eh, &ek)));
                    if !assoc.is_zero() {
                        return Some((g.clone(), h.clone(), k.clone(), assoc));
                    }
                }
            }
        }
        None
    }

    fn random_element(&self, rng: &mut impl Rng) -> AlgebraElement {
        // numerators and denominators from [-9,9] \ {0}, reproducible
        let mut terms = Vec::new();
        for g in self.group.enumerate() {
            let num = loop {
                let v = rng.gen_range(-9i64..=9);
                if v != 0 {
                    break v;
                }
            };
            let den = rng.gen_range(1i64..=9);
            terms.push((g, Rational::new(BigInt::from(num), BigInt::from(den))));
        }
        AlgebraElement::from_terms(terms)
    }

    /// Checks that every `ε_g` has a two-sided inverse by direct
    /// multiplication against the candidate `σ(g,g⁻¹)⁻¹ σ(e,e)⁻¹ ε_{g⁻¹}`
    /// (and its mirrored variant).
    pub fn is_graded_division(&self) -> bool {
        let one = self.one();
        let e = self.group.identity();
        let s_ee = self.sigma.eval(&e, &e);
        for g in self.group.enumerate() {
            let ginv = self.group.inverse(&g);
            let eg = AlgebraElement::basis(g.clone());
            let mut found = false;
            for s in [
                self.sigma.eval(&g, &ginv),
                self.sigma.eval(&ginv, &g),
            ] {
                let candidate = AlgebraElement::from_terms([(
                    ginv.clone(),
                    (s * &s_ee).recip(),
                )]);
                if self.multiply(&eg, &candidate) == one
                    && self.multiply(&candidate, &eg) == one
                {
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }

    /// Basis of the center, from the exact linear system `x ε_g = ε_g x` for
    /// all generators `g`. Since multiplication permutes the basis, the
    /// system is diagonal in the coefficients: `ε_h` is central iff
    /// `σ(h,g) = σ(g,h)` for every generator.
    pub fn center(&self) -> Result<Vec<AlgebraElement>> {
        if self.group.size() > 1 << 10 {
            return Err(Error::Capacity(format!(
                "center computation is capped at |G| = 2^10, got {}",
                self.group.size()
            )));
        }
        if !self.is_associative() {
            return Err(Error::Domain(
                "center of a non-associative table is not defined here".into(),
            ));
        }
        let gens: Vec<_> = (0..self.group.rank()).map(|i| self.group.generator(i)).collect();
        let mut basis = Vec::new();
        for h in self.group.enumerate() {
            let central = gens
                .iter()
                .all(|g| self.sigma.eval(&h, g) == self.sigma.eval(g, &h));
            if central {
                basis.push(AlgebraElement::basis(h));
            }
        }
        Ok(basis)
    }

    /// Checks a proposed grading by another group: the listed elements must
    /// be independent and span, products of listed elements must land in the
    /// span of the elements of the product degree, and every listed element
    /// must be invertible.
    pub fn verify_grading(&self, assignment: &GradingAssignment) -> bool {
        let dim = self.group.size() as usize;
        if assignment.entries.len() != dim {
            return false;
        }
        // independence and span over the coefficient space
        let vectors: Vec<Vec<Rational>> = assignment
            .entries
            .iter()
            .map(|(_, el)| self.coefficient_vector(el))
            .collect();
        if rank(vectors.clone()) != dim {
            return false;
        }
        // closure: product of homogeneous elements lies in the right component
        for (da, a) in &assignment.entries {
            for (db, b) in &assignment.entries {
                let product_degree = assignment.target.mul_reduced(da, db);
                let component: Vec<Vec<Rational>> = assignment
                    .entries
                    .iter()
                    .filter(|(d, _)| *d == product_degree)
                    .map(|(_, el)| self.coefficient_vector(el))
                    .collect();
                let prod = self.coefficient_vector(&self.multiply(a, b));
                if !in_span(&component, &prod) {
                    return false;
                }
            }
        }
        // invertibility of each listed element
        for (_, a) in &assignment.entries {
            if self.inverse_of(a).is_none() {
                return false;
            }
        }
        true
    }

    /// Two-sided inverse of an element, if one exists.
    pub fn inverse_of(&self, a: &AlgebraElement) -> Option<AlgebraElement> {
        let dim = self.group.size() as usize;
        // right-multiplication matrix: column g holds coeffs of ε_g · a
        let mut cols = Vec::with_capacity(dim);
        for g in self.group.enumerate() {
            let col = self.multiply(&AlgebraElement::basis(g), a);
            cols.push(self.coefficient_vector(&col));
        }
        let target = self.coefficient_vector(&self.one());
        let x = solve_columns(&cols, &target)?;
        let mut terms = Vec::new();
        for (idx, c) in x.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push((self.group.element(idx as u64), c));
            }
        }
        let candidate = AlgebraElement::from_terms(terms);
        // solved x·a = 1; require a·x = 1 as well
        if self.multiply(a, &candidate) == self.one() {
            Some(candidate)
        } else {
            None
        }
    }

    /// Dense coefficient vector in lexicographic basis order.
    pub fn coefficient_vector(&self, a: &AlgebraElement) -> Vec<Rational> {
        let mut v = vec![rat_int(0); self.group.size() as usize];
        for (g, c) in &a.terms {
            v[self.group.index_of(g) as usize] = c.clone();
        }
        v
    }

    /// Structure-constant JSON export:
    /// `{"orders": [...], "table": [{"g": [...], "h": [...], "num": ..., "den": ...}]}`.
    pub fn to_structure_json(&self) -> Result<String> {
        let elems: Vec<_> = self.group.enumerate().collect();
        let mut table = Vec::new();
        for g in &elems {
            for h in &elems {
                let v = self.sigma.eval(g, h);
                let num = i64::try_from(v.numer()).map_err(|_| {
                    Error::Capacity("structure constant exceeds the JSON schema".into())
                })?;
                let den = i64::try_from(v.denom()).map_err(|_| {
                    Error::Capacity("structure constant exceeds the JSON schema".into())
                })?;
                table.push(StructureEntryJson {
                    g: self.group.exponents(g),
                    h: self.group.exponents(h),
                    num,
                    den,
                });
            }
        }
        let doc = StructureJson {
            orders: self.group.orders().to_vec(),
            table,
        };
        serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Validation(format!("serialization failed: {e}")))
    }

    /// Imports structure constants, validating exponent ranges, nonzero
    /// values, and absence of duplicates. Missing pairs default to +1, which
    /// keeps the format closed under the grading by construction.
    pub fn from_structure_json(text: &str) -> Result<Self> {
        let doc: StructureJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let group = FinAbGroup::new(doc.orders)?;
        let n = group.size();
        let mut values = vec![rat_int(1); (n * n) as usize];
        let mut seen = vec![false; (n * n) as usize];
        for entry in &doc.table {
            if entry.g.len() != group.rank() || entry.h.len() != group.rank() {
                return Err(Error::DimensionMismatch(
                    "exponent vector does not match the generator count".into(),
                ));
            }
            for (exps, label) in [(&entry.g, "g"), (&entry.h, "h")] {
                for (&a, &m) in exps.iter().zip(group.orders()) {
                    if a >= m {
                        return Err(Error::Validation(format!(
                            "{label} = {exps:?} is not reduced modulo the orders"
                        )));
                    }
                }
            }
            if entry.den == 0 || entry.num == 0 {
                return Err(Error::Validation(
                    "structure constants must be nonzero rationals".into(),
                ));
            }
            let g = group.from_exponents(&entry.g)?;
            let h = group.from_exponents(&entry.h)?;
            let idx = (group.index_of(&g) * n + group.index_of(&h)) as usize;
            if seen[idx] {
                return Err(Error::Validation(format!(
                    "duplicate structure constant for ({:?}, {:?})",
                    entry.g, entry.h
                )));
            }
            seen[idx] = true;
            values[idx] = Rational::new(BigInt::from(entry.num), BigInt::from(entry.den));
        }
        let sigma = Cocycle::from_table(group.clone(), values)?;
        TwistedAlgebra::new(group, sigma)
    }

    /// Diagonal map `ε_g ↦ μ(g) ε'_g` applied to an element.
    pub fn apply_diagonal(&self, map: &SignMap, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_terms(
            a.terms
                .iter()
                .map(|(g, c)| (g.clone(), c * map.eval(g).to_rational())),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    orders: Vec<u32>,
    table: Vec<StructureEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct StructureEntryJson {
    g: Vec<u32>,
    h: Vec<u32>,
    num: i64,
    den: i64,
}

/// Outcome of the alternative-law evaluation.
#[derive(Debug, Clone)]
pub struct AlternativityReport {
    pub trials: u32,
    pub left_violations: u32,
    pub right_violations: u32,
    /// Largest coefficient magnitude seen in any violated law; exact zero
    /// when both laws hold at every sampled point.
    pub max_violation: Rational,
    /// A basis triple with nonzero associator, when the algebra is
    /// non-associative (searched exhaustively for |G| ≤ 256).
    pub associator_witness:
        Option<(GroupElement, GroupElement, GroupElement, AlgebraElement)>,
}

impl AlternativityReport {
    pub fn alternative_laws_hold(&self) -> bool {
        self.left_violations == 0 && self.right_violations == 0
    }
}

/// A proposed grading of an algebra by `target`: homogeneous spanning
/// elements listed with their degrees.
#[derive(Debug, Clone)]
pub struct GradingAssignment {
    target: FinAbGroup,
    entries: Vec<(GroupElement, AlgebraElement)>,
}

impl GradingAssignment {
    pub fn new(
        target: FinAbGroup,
        entries: Vec<(GroupElement, AlgebraElement)>,
    ) -> Result<Self> {
        for (d, _) in &entries {
            // degree must be an element of the target group
            let exps = target.exponents(d);
            if target.from_exponents(&exps)? != *d {
                return Err(Error::Validation(
                    "degree is not a reduced element of the target group".into(),
                ));
            }
        }
        Ok(GradingAssignment { target, entries })
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn entries(&self) -> &[(GroupElement, AlgebraElement)] {
        &self.entries
    }

    /// Same entries with two degrees swapped; handy for perturbation tests.
    pub fn with_degrees_swapped(&self, a: usize, b: usize) -> Self {
        let mut entries = self.entries.clone();
        let da = entries[a].0.clone();
        let db = entries[b].0.clone();
        entries[a].0 = db;
        entries[b].0 = da;
        GradingAssignment {
            target: self.target.clone(),
            entries,
        }
    }
}

/// Rank of a list of rational row vectors.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = &rows[i][col] / &pivot;
                for c in col..cols {
                    let sub = &rows[r][c] * &factor;
                    rows[i][c] -= sub;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Whether `target` lies in the span of `rows`.
fn in_span(rows: &[Vec<Rational>], target: &[Rational]) -> bool {
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    let mut all = rows.to_vec();
    let base = rank(all.clone());
    all.push(target.to_vec());
    rank(all) == base
}

/// Solves `Σ_g x_g · cols[g] = target`; returns the coefficients.
fn solve_columns(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n_rows = target.len();
    let n_cols = cols.len();
    // augmented matrix, rows are equations
    let mut m: Vec<Vec<Rational>> = (0..n_rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let Some(p) = (r..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for c in col..=n_cols {
            m[r][c] = &m[r][c] / &pivot;
        }
        for i in 0..n_rows {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for c in col..=n_cols {
                    let sub = &m[r][c] * &factor;
                    m[i][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == n_rows {
            break;
        }
    }
    // inconsistent?
    for row in m.iter().skip(r) {
        if row[..n_cols].iter().all(Zero::is_zero) && !row[n_cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![rat_int(0); n_cols];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[row][n_cols].clone();
    }
    Some(x)
}

/// The complex numbers as the twisted group algebra over `C₂` with
/// `ε² = −1`.
pub fn complex_algebra() -> TwistedAlgebra {
    let group = FinAbGroup::elementary2(1).unwrap();
    let beta = Bicharacter::trivial(group.clone());
    TwistedAlgebra::from_presentation(vec![2], &[rat_int(-1)], &beta).unwrap()
}

/// The quaternions as the twisted group algebra over `C₂²`: generators
/// `i, j` with `i² = j² = −1` and `ij = −ji`.
pub fn quaternion_algebra() -> TwistedAlgebra {
    let group = FinAbGroup::elementary2(2).unwrap();
    let beta = Bicharacter::all_pairs_minus(group.clone()).unwrap();
    TwistedAlgebra::from_presentation(vec![2, 2], &[rat_int(-1), rat_int(-1)], &beta)
        .unwrap()
}

/// The octonions as the twisted group algebra over `C₂³` with the tabulated
/// (non-cocycle) twist of [`cocycles::octonion_cocycle`].
pub fn octonion_algebra() -> TwistedAlgebra {
    let sigma = cocycles::octonion_cocycle();
    let group = sigma.group().clone();
    TwistedAlgebra::new(group, sigma).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Sign};

    #[test]
    fn complex_arithmetic() {
        let a = complex_algebra();
        let g = a.group().clone();
        let eps = AlgebraElement::basis(g.generator(0));
        assert_eq!(a.multiply(&eps, &eps), a.one().scale(&rat_int(-1)));

        // (x + y eps)(x - y eps) = (x^2 + y^2) 1
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9));
            let y = rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9));
            let u = a.one().scale(&x).add(&eps.scale(&y));
            let v = a.one().scale(&x).sub(&eps.scale(&y));
            let prod = a.multiply(&u, &v);
            assert_eq!(prod, a.one().scale(&(&x * &x + &y * &y)));
        }
    }

    use rand::Rng;

    #[test]
    fn unit_law_at_random_points() {
        let a = quaternion_algebra();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x = a.random_element(&mut rng);
            assert_eq!(a.multiply(&a.one(), &x), x);
            assert_eq!(a.multiply(&x, &a.one()), x);
        }
    }

    #[test]
    fn quaternions_reproduce_the_hamilton_table() {
        let a = quaternion_algebra();
        let g = a.group().clone();
        let i = AlgebraElement::basis(g.from_exponents(&[1, 0]).unwrap());
        let j = AlgebraElement::basis(g.from_exponents(&[0, 1]).unwrap());
        let k = a.multiply(&i, &j);
        assert_eq!(k, AlgebraElement::basis(g.from_exponents(&[1, 1]).unwrap()));

        let minus_one = a.one().scale(&rat_int(-1));
        assert_eq!(a.multiply(&i, &i), minus_one);
        assert_eq!(a.multiply(&j, &j), minus_one);
        assert_eq!(a.multiply(&k, &k), minus_one);
        assert_eq!(a.multiply(&j, &k), i);
        assert_eq!(a.multiply(&k, &i), j);
        assert_eq!(a.multiply(&j, &i), k.scale(&rat_int(-1)));
        assert_eq!(a.multiply(&k, &j), i.scale(&rat_int(-1)));
        assert_eq!(a.multiply(&i, &k), j.scale(&rat_int(-1)));
        // (eps_i eps_j)^2 = -1
        assert_eq!(a.multiply(&k, &k), minus_one);
    }

    #[test]
    fn presentation_relations_hold_for_clifford_style_input() {
        let g = FinAbGroup::elementary2(2).unwrap();
        let beta = Bicharacter::all_pairs_minus(g).unwrap();
        let a =
            TwistedAlgebra::from_presentation(vec![2, 2], &[rat_int(1), rat_int(1)], &beta)
                .unwrap();
        let x1 = AlgebraElement::basis(a.group().generator(0));
        let x2 = AlgebraElement::basis(a.group().generator(1));
        assert_eq!(a.multiply(&x1, &x1), a.one());
        assert_eq!(
            a.multiply(&x1, &x2),
            a.multiply(&x2, &x1).scale(&rat_int(-1))
        );
    }

    #[test]
    fn associativity_verdicts() {
        assert!(quaternion_algebra().is_associative());
        assert!(!octonion_algebra().is_associative());
        let g = FinAbGroup::elementary2(3).unwrap();
        let trivial = TwistedAlgebra::from_presentation(
            vec![2, 2, 2],
            &[rat_int(1), rat_int(1), rat_int(1)],
            &Bicharacter::trivial(g),
        )
        .unwrap();
        assert!(trivial.is_associative());
    }

    #[test]
    fn associativity_agrees_with_cocycle_identity_on_random_tables() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3usize);
            let group = FinAbGroup::elementary2(n).unwrap();
            let size = group.size();
            let sigma = if rng.gen_bool(0.5) {
                // random sign table, usually not a cocycle
                let values: Vec<Rational> = (0..size * size)
                    .map(|_| rat_int(if rng.gen() { 1 } else { -1 }))
                    .collect();
                Cocycle::from_table(group.clone(), values).unwrap()
            } else {
                // a genuine cocycle, possibly corrupted at one entry
                let beta = Bicharacter::from_sign_fn(group.clone(), |_, _| {
                    Sign::from_parity(rng.gen())
                })
                .unwrap();
                let mu: Vec<Rational> = (0..n)
                    .map(|_| rat_int(if rng.gen() { 1 } else { -1 }))
                    .collect();
                let built = build_sigma(group.clone(), &beta, &mu).unwrap();
                if rng.gen_bool(0.5) {
                    let mut values = built.value_table();
                    let idx = rng.gen_range(0..values.len());
                    values[idx] = -values[idx].clone();
                    Cocycle::from_table(group.clone(), values).unwrap()
                } else {
                    built
                }
            };
            let algebra = TwistedAlgebra::new(group, sigma.clone()).unwrap();
            assert_eq!(algebra.is_associative(), sigma.is_cocycle());
        }
    }

    #[test]
    fn octonions_are_alternative_with_nonzero_associator() {
        let o = octonion_algebra();
        let report = o.alternativity_report(100, 0);
        assert!(report.alternative_laws_hold());
        assert!(report.max_violation.is_zero());
        let (g, h, k, assoc) = report.associator_witness.expect("octonions associate?");
        assert!(!assoc.is_zero());
        let eg = AlgebraElement::basis(g);
        let eh = AlgebraElement::basis(h);
        let ek = AlgebraElement::basis(k);
        let recomputed = o
            .multiply(&o.multiply(&eg, &eh), &ek)
            .sub(&o.multiply(&eg, &o.multiply(&eh, &ek)));
        assert_eq!(recomputed, assoc);
    }

    #[test]
    fn associative_algebras_have_zero_associators() {
        for a in [quaternion_algebra(), complex_algebra()] {
            let report = a.alternativity_report(100, 0);
            assert!(report.alternative_laws_hold());
            assert!(report.associator_witness.is_none());
        }
        let g = FinAbGroup::elementary2(3).unwrap();
        let group_algebra = TwistedAlgebra::from_presentation(
            vec![2, 2, 2],
            &[rat_int(1), rat_int(1), rat_int(1)],
            &Bicharacter::trivial(g),
        )
        .unwrap();
        let report = group_algebra.alternativity_report(50, 0);
        assert!(report.alternative_laws_hold());
        assert!(report.associator_witness.is_none());
    }

    #[test]
    fn graded_division_holds_for_twisted_algebras() {
        assert!(complex_algebra().is_graded_division());
        assert!(quaternion_algebra().is_graded_division());
        assert!(octonion_algebra().is_graded_division());
        // rational scalars beyond signs work too
        let g = FinAbGroup::new(vec![4]).unwrap();
        let a = TwistedAlgebra::from_presentation(
            vec![4],
            &[rat(2, 3)],
            &Bicharacter::trivial(g),
        )
        .unwrap();
        assert!(a.is_graded_division());
    }

    #[test]
    fn centers() {
        assert_eq!(quaternion_algebra().center().unwrap().len(), 1);
        assert!(matches!(
            octonion_algebra().center(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn basis_powers_match_power_scalars() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        let beta = Bicharacter::new(g.clone(), vec![rat_int(-1)]).unwrap();
        let mu = [rat(3, 5), rat_int(-1)];
        let a = TwistedAlgebra::from_presentation(vec![4, 2], &mu, &beta).unwrap();
        for h in a.group().clone().enumerate() {
            let order = a.group().order_of(&h);
            let scalar = a.sigma().power_scalar(&h, order).unwrap();
            let eh = AlgebraElement::basis(h);
            let mut power = a.one();
            for _ in 0..order {
                power = a.multiply(&power, &eh);
            }
            assert_eq!(power, a.one().scale(&scalar));
        }
    }

    #[test]
    fn diagonal_equivalence_is_an_algebra_isomorphism() {
        let a = quaternion_algebra();
        let sigma = a.sigma().clone();
        let other_sigma = crate::cocycles::quaternion_exponent_cocycle();
        let map = sigma.cohomologous(&other_sigma).unwrap().unwrap();
        let b = TwistedAlgebra::new(other_sigma.group().clone(), other_sigma).unwrap();
        let g = a.group().clone();
        // phi(eps_g) = mu(g) eps'_g must satisfy phi(xy) = phi(x)phi(y)
        for x in g.enumerate() {
            for y in g.enumerate() {
                let ex = AlgebraElement::basis(x.clone());
                let ey = AlgebraElement::basis(y.clone());
                let lhs = a.apply_diagonal(&map, &a.multiply(&ex, &ey));
                let rhs = b.multiply(
                    &a.apply_diagonal(&map, &ex),
                    &a.apply_diagonal(&map, &ey),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn natural_grading_verifies() {
        let a = quaternion_algebra();
        let g = a.group().clone();
        let entries: Vec<_> = g
            .enumerate()
            .map(|h| (h.clone(), AlgebraElement::basis(h)))
            .collect();
        let asg = GradingAssignment::new(g, entries).unwrap();
        assert!(a.verify_grading(&asg));
    }

    #[test]
    fn non_spanning_assignment_fails() {
        let a = quaternion_algebra();
        let g = a.group().clone();
        let mut entries: Vec<_> = g
            .enumerate()
            .map(|h| (h.clone(), AlgebraElement::basis(h)))
            .collect();
        // duplicate one element: count right, but dependent
        entries[1].1 = entries[2].1.clone();
        let asg = GradingAssignment::new(g, entries).unwrap();
        assert!(!a.verify_grading(&asg));
    }

    #[test]
    fn structure_json_roundtrip() {
        let a = quaternion_algebra();
        let text = a.to_structure_json().unwrap();
        let back = TwistedAlgebra::from_structure_json(&text).unwrap();
        let g = a.group().clone();
        for x in g.enumerate() {
            for y in g.enumerate() {
                assert_eq!(
                    a.sigma().eval(&x, &y),
                    back.sigma().eval(&x, &y)
                );
            }
        }
        assert!(back.is_associative());
    }

    #[test]
    fn structure_json_import_validation() {
        let zero = r#"{"orders":[2],"table":[{"g":[1],"h":[1],"num":0,"den":1}]}"#;
        assert!(matches!(
            TwistedAlgebra::from_structure_json(zero),
            Err(Error::Validation(_))
        ));
        let unreduced = r#"{"orders":[2],"table":[{"g":[7],"h":[1],"num":1,"den":1}]}"#;
        assert!(matches!(
            TwistedAlgebra::from_structure_json(unreduced),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn inverse_of_general_elements() {
        let a = quaternion_algebra();
        let g = a.group().clone();
        // 1 + i + j + k has norm 4, invertible
        let x = AlgebraElement::from_terms(
            g.enumerate().map(|h| (h, rat_int(1))),
        );
        let inv = a.inverse_of(&x).unwrap();
        assert_eq!(a.multiply(&x, &inv), a.one());
        assert_eq!(a.multiply(&inv, &x), a.one());
        assert!(a.inverse_of(&AlgebraElement::zero()).is_none());
    }
}
