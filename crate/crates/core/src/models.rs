//! Explicit rational matrix models of `Cl_{p,q}(ℝ)`, built recursively from
//! the periodicity isomorphisms and verified independently of the
//! closed-formula classification.
//!
//! A model is a list of `N` anticommuting generator matrices over ℚ with the
//! prescribed squares. Verification checks the relations, the linear
//! independence of the `2^N` ordered products (fraction-free Gaussian
//! elimination on their flattened vectors), the center dimension of the
//! spanned algebra, the sign of the discriminant of the minimal polynomial
//! of a central element (separating ℂ from the doubled types), and a trace
//! signature that must reproduce the Arf count difference of `μ_{p,q}`
//! obtained by GF(2) enumeration; matrix traces and popcount enumeration
//! are two independent routes to the same integer.

use crate::clifford::{classify, IsoClass, Signature};
use crate::error::{Error, Result};
use crate::forms::QuadraticFormF2;
use crate::scalar::{rat_int, signum, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// A dense matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![rat_int(0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat_int(1));
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, rat_int(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn neg(&self) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        let b = other.get(r, c);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + r, j * other.cols + c, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        let mut t = rat_int(0);
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    pub fn is_scalar_multiple_of_identity(&self) -> Option<Rational> {
        if self.rows != self.cols {
            return None;
        }
        let lambda = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { lambda.clone() } else { rat_int(0) };
                if self.get(i, j) != &expect {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    pub fn flatten(&self) -> Vec<Rational> {
        self.entries.clone()
    }
}

/// Rank over ℚ of a list of row vectors: denominators are cleared rowwise,
/// then fraction-free (Bareiss) elimination runs over big integers.
pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .map(|v| v.denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();
    let n_rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in (rank + 1)..n_rows {
            for j in (col + 1)..cols {
                let v = (&m[i][j] * &pivot - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    rank
}

/// A matrix realization of `Cl_{p,q}(ℝ)`: `N` generator matrices of common
/// size `d` satisfying the generator relations exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixModel {
    pub sig: Signature,
    pub ambient: usize,
    pub generators: Vec<RatMatrix>,
}

impl MatrixModel {
    fn assert_relations(&self) {
        let report = check_relations(self);
        assert!(
            report,
            "constructed model for {} violates the generator relations",
            self.sig
        );
    }

    /// Ordered products `gen_I` (increasing index order), indexed by subset
    /// bitmask with bit `i` for generator `i`.
    pub fn subset_products(&self) -> Vec<RatMatrix> {
        let n = self.generators.len();
        let mut products = Vec::with_capacity(1 << n);
        products.push(RatMatrix::identity(self.ambient));
        for mask in 1usize..(1 << n) {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let rest = mask & !(1 << top);
            products.push(products[rest].mul(&self.generators[top]));
        }
        products
    }

    /// JSON dump of the generators, exact rationals as "num/den" strings.
    pub fn to_json(&self) -> Result<String> {
        let generators: Vec<Vec<Vec<String>>> = self
            .generators
            .iter()
            .map(|g| {
                (0..g.rows())
                    .map(|i| {
                        (0..g.cols())
                            .map(|j| {
                                let v = g.get(i, j);
                                format!("{}/{}", v.numer(), v.denom())
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let doc = ModelJson {
            p: self.sig.p,
            q: self.sig.q,
            ambient: self.ambient,
            generators,
        };
        serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Validation(format!("serialization failed: {e}")))
    }
}

#[derive(Serialize)]
struct ModelJson {
    p: u32,
    q: u32,
    ambient: usize,
    generators: Vec<Vec<Vec<String>>>,
}

fn diag_a() -> RatMatrix {
    RatMatrix::from_i64_rows(&[&[1, 0], &[0, -1]])
}

fn b_plus() -> RatMatrix {
    RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])
}

fn b_minus() -> RatMatrix {
    RatMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]])
}

/// Left-regular representation of the quaternion `i` on the basis (1,i,j,k).
fn quaternion_i() -> RatMatrix {
    RatMatrix::from_i64_rows(&[
        &[0, -1, 0, 0],
        &[1, 0, 0, 0],
        &[0, 0, 0, -1],
        &[0, 0, 1, 0],
    ])
}

fn quaternion_j() -> RatMatrix {
    RatMatrix::from_i64_rows(&[
        &[0, 0, -1, 0],
        &[0, 0, 0, 1],
        &[1, 0, 0, 0],
        &[0, -1, 0, 0],
    ])
}

/// Hand-picked models for the six smallest signatures.
pub fn base_model(sig: Signature) -> Result<MatrixModel> {
    let model = match (sig.p, sig.q) {
        (0, 0) => MatrixModel {
            sig,
            ambient: 1,
            generators: vec![],
        },
        (1, 0) => MatrixModel {
            sig,
            ambient: 2,
            generators: vec![diag_a()],
        },
        (0, 1) => MatrixModel {
            sig,
            ambient: 2,
            generators: vec![RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])],
        },
        (1, 1) => MatrixModel {
            sig,
            ambient: 2,
            generators: vec![diag_a(), b_minus()],
        },
        (2, 0) => MatrixModel {
            sig,
            ambient: 2,
            generators: vec![diag_a(), b_plus()],
        },
        (0, 2) => MatrixModel {
            sig,
            ambient: 4,
            generators: vec![quaternion_i(), quaternion_j()],
        },
        _ => {
            return Err(Error::Domain(format!(
                "no base model for signature ({}, {})",
                sig.p, sig.q
            )))
        }
    };
    model.assert_relations();
    Ok(model)
}

/// Builds the model for any `p + q ≤ 8` by memoized recursion on the
/// periodicity isomorphisms, preferring (1) `Cl_{p,q} ⊗ M₂(ℝ)` over
/// (2) the `(q, p−2)` transport over (3) the `(q−2, p) ⊗ ℍ` transport.
pub fn build_model(sig: Signature) -> Result<MatrixModel> {
    if sig.n() > 8 {
        return Err(Error::Capacity(format!(
            "matrix models are capped at p+q = 8, got {}",
            sig.n()
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), MatrixModel>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(sig.p, sig.q)) {
        return Ok(hit.clone());
    }
    let model = build_model_uncached(sig)?;
    model.assert_relations();
    cache
        .lock()
        .unwrap()
        .insert((sig.p, sig.q), model.clone());
    Ok(model)
}

fn build_model_uncached(sig: Signature) -> Result<MatrixModel> {
    let (p, q) = (sig.p as usize, sig.q as usize);
    if p >= 1 && q >= 1 {
        let inner = build_model(Signature::new(sig.p - 1, sig.q - 1))?;
        let eye = RatMatrix::identity(inner.ambient);
        let (old_plus, old_minus) = inner.generators.split_at(p - 1);
        let mut generators = Vec::with_capacity(p + q);
        for m in old_plus {
            generators.push(m.kronecker(&diag_a()));
        }
        generators.push(eye.kronecker(&b_plus()));
        for m in old_minus {
            generators.push(m.kronecker(&diag_a()));
        }
        generators.push(eye.kronecker(&b_minus()));
        Ok(MatrixModel {
            sig,
            ambient: inner.ambient * 2,
            generators,
        })
    } else if p >= 2 {
        // transport from (q, p-2): squares flip under tensoring with AB+
        let inner = build_model(Signature::new(sig.q, sig.p - 2))?;
        let eye = RatMatrix::identity(inner.ambient);
        let ab = diag_a().mul(&b_plus());
        let (old_plus, old_minus) = inner.generators.split_at(q);
        let mut generators = Vec::with_capacity(p + q);
        generators.push(eye.kronecker(&diag_a()));
        generators.push(eye.kronecker(&b_plus()));
        for m in old_minus {
            generators.push(m.kronecker(&ab));
        }
        for m in old_plus {
            generators.push(m.kronecker(&ab));
        }
        Ok(MatrixModel {
            sig,
            ambient: inner.ambient * 2,
            generators,
        })
    } else if q >= 2 {
        // transport from (q-2, p) tensored with the quaternion model
        let inner = build_model(Signature::new(sig.q - 2, sig.p))?;
        let eye = RatMatrix::identity(inner.ambient);
        let k_h = quaternion_i().mul(&quaternion_j());
        let (old_plus, old_minus) = inner.generators.split_at(q - 2);
        let mut generators = Vec::with_capacity(p + q);
        for m in old_minus {
            generators.push(m.kronecker(&k_h));
        }
        generators.push(eye.kronecker(&quaternion_i()));
        generators.push(eye.kronecker(&quaternion_j()));
        for m in old_plus {
            generators.push(m.kronecker(&k_h));
        }
        Ok(MatrixModel {
            sig,
            ambient: inner.ambient * 4,
            generators,
        })
    } else {
        base_model(sig)
    }
}

fn check_relations(model: &MatrixModel) -> bool {
    let n = model.generators.len();
    if n != model.sig.n() as usize {
        return false;
    }
    let eye = RatMatrix::identity(model.ambient);
    for (i, g) in model.generators.iter().enumerate() {
        let square = g.mul(g);
        let expect = if (i as u32) < model.sig.p {
            eye.clone()
        } else {
            eye.neg()
        };
        if square != expect {
            return false;
        }
        for h in model.generators.iter().skip(i + 1) {
            if g.mul(h) != h.mul(g).neg() {
                return false;
            }
        }
    }
    true
}

/// Sign of the discriminant of the quadratic minimal polynomial of a
/// central element: negative means a ℂ-type center, positive a split
/// (doubled) center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantSign {
    Positive,
    Negative,
}

/// Findings of [`verify_model`].
#[derive(Debug, Clone)]
pub struct ModelReport {
    pub sig: Signature,
    pub ambient: usize,
    pub expected_class: IsoClass,
    pub relations_ok: bool,
    pub span_rank: usize,
    pub rank_ok: bool,
    pub center_dim: usize,
    pub center_ok: bool,
    pub discriminant: Option<DiscriminantSign>,
    pub discriminant_ok: bool,
    pub trace_signature: i64,
    pub trace_ok: bool,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.relations_ok
            && self.rank_ok
            && self.center_ok
            && self.discriminant_ok
            && self.trace_ok
    }
}

/// Runs the five checks against the closed-formula classification.
pub fn verify_model(model: &MatrixModel) -> Result<ModelReport> {
    let sig = model.sig;
    let n = sig.n() as usize;
    let expected_class = classify(sig);
    let relations_ok = check_relations(model);

    let products = model.subset_products();
    let flattened: Vec<Vec<Rational>> = products.iter().map(RatMatrix::flatten).collect();
    let span_rank = rank_of_rows(&flattened);
    let rank_ok = span_rank == 1 << n;

    // Center of the spanned algebra. Each product gen_I gen_i is a scalar
    // multiple of another subset product, so with the products linearly
    // independent (rank check) a combination commutes with every generator
    // iff each contributing gen_I does.
    let mut central_masks = Vec::new();
    let mut commutator_structure_ok = true;
    for (mask, prod) in products.iter().enumerate() {
        let mut central = true;
        for gen in &model.generators {
            let pg = prod.mul(gen);
            let gp = gen.mul(prod);
            if pg == gp {
                continue;
            }
            if pg == gp.neg() {
                central = false;
            } else {
                commutator_structure_ok = false;
                central = false;
            }
        }
        if central {
            central_masks.push(mask);
        }
    }
    let center_dim = central_masks.len();
    let expected_center_dim = match expected_class {
        IsoClass::MatR(_) | IsoClass::MatH(_) => 1,
        IsoClass::MatC(_) | IsoClass::MatR2(_) | IsoClass::MatH2(_) => 2,
    };
    let center_ok =
        commutator_structure_ok && rank_ok && center_dim == expected_center_dim;

    // Discriminant of the minimal polynomial z^2 = b z + a of a non-identity
    // central element, when the center is 2-dimensional.
    let mut discriminant = None;
    let mut discriminant_ok = center_dim == 1;
    if center_dim == 2 {
        let z_mask = central_masks
            .iter()
            .copied()
            .find(|&m| m != 0)
            .expect("two central elements include a non-identity one");
        let z = &products[z_mask];
        if let Some((a, b)) = quadratic_relation(z, model.ambient) {
            let disc = &b * &b + rat_int(4) * &a;
            let sign = match signum(&disc) {
                1 => Some(DiscriminantSign::Positive),
                -1 => Some(DiscriminantSign::Negative),
                _ => None,
            };
            discriminant = sign;
            discriminant_ok = match expected_class {
                IsoClass::MatC(_) => sign == Some(DiscriminantSign::Negative),
                IsoClass::MatR2(_) | IsoClass::MatH2(_) => {
                    sign == Some(DiscriminantSign::Positive)
                }
                _ => false,
            };
        } else {
            discriminant_ok = false;
        }
    }

    // Trace signature: Σ_I sign(trace(gen_I²)) equals the Arf count
    // difference of μ_{p,q}, counted independently over GF(2).
    let mut trace_signature = 0i64;
    for prod in &products {
        let square = prod.mul(prod);
        trace_signature += signum(&square.trace()) as i64;
    }
    let arf_difference = QuadraticFormF2::q_pq(sig.p as usize, sig.q as usize)?
        .arf_brute()
        .count_difference;
    let trace_ok = trace_signature == arf_difference;

    Ok(ModelReport {
        sig,
        ambient: model.ambient,
        expected_class,
        relations_ok,
        span_rank,
        rank_ok,
        center_dim,
        center_ok,
        discriminant,
        discriminant_ok,
        trace_signature,
        trace_ok,
    })
}

/// Solves `z² = b·z + a·I` exactly; `None` if no such relation holds.
fn quadratic_relation(z: &RatMatrix, d: usize) -> Option<(Rational, Rational)> {
    let z2 = z.mul(z);
    // two unknowns (a, b); pick independent positions, then verify all
    let mut a = None;
    let mut b = None;
    // diagonal dominates: z2[i][i] = a + b z[i][i]
    // off-diagonal: z2[i][j] = b z[i][j]
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            if !z.get(i, j).is_zero() {
                b = Some(z2.get(i, j) / z.get(i, j));
                break;
            }
        }
        if b.is_some() {
            break;
        }
    }
    let b = b.unwrap_or_else(|| rat_int(0));
    for i in 0..d {
        let v = z2.get(i, i) - &b * z.get(i, i);
        match &a {
            None => a = Some(v),
            Some(prev) if *prev == v => {}
            _ => return None,
        }
    }
    let a = a?;
    // full verification
    for i in 0..d {
        for j in 0..d {
            let expect = &b * z.get(i, j)
                + if i == j { a.clone() } else { rat_int(0) };
            if z2.get(i, j) != &expect {
                return None;
            }
        }
    }
    Some((a, b))
}
