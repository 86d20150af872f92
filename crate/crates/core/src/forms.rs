//! Quadratic forms over GF(2).
//!
//! A form on `𝔽₂ⁿ` is stored as a polynomial: a linear part (coefficients of
//! `x_i`, which equal `x_i²` over GF(2)) and a strictly upper-triangular
//! matrix of cross-term coefficients `x_i x_j`, `i < j`. Coordinates are
//! bitmasks with `x_i` at bit `i-1`, so `n ≤ 32` throughout.
//!
//! The Arf invariant used here is three-valued: the sign of
//! `#{q=0} − #{q=1}` over all vectors. Forms with radical dimension at most 1
//! fall into the canonical classes `q₀` (Arf +1), `q₁` (Arf −1) and, in odd
//! dimension, `q₂` (Arf 0); equivalence is decided by those invariants and
//! witnessed by an explicit change of basis.
//!
//! Convention for the signature forms `q_{p,q}`: all cross terms are present
//! and the square terms sit on the *last* `q` coordinates, i.e.
//! `q(𝐞_i) = 0` for `i ≤ p` and `1` for `i > p`. Multiplicatively,
//! `μ_{p,q}(𝐞_i) = +1` for `i ≤ p` and `−1` for `i > p`, matching the
//! generator squares of `Cl_{p,q}(ℝ)`.

use crate::cocycles::Bicharacter;
use crate::error::{Error, Result};
use crate::groups::FinAbGroup;
use crate::scalar::Sign;
use std::fmt;

pub const MAX_DIM: usize = 32;

/// A quadratic form `q : 𝔽₂ⁿ → 𝔽₂` in polynomial representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticFormF2 {
    n: usize,
    /// bit i-1 set iff the term x_i is present
    linear: u32,
    /// quad[i] has bit j set iff the cross term x_{i+1} x_{j+1} is present; only j > i
    quad: Vec<u32>,
}

impl QuadraticFormF2 {
    /// The zero form on `𝔽₂ⁿ`.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::Capacity(format!(
                "dimension {n} exceeds the bit-parallel limit {MAX_DIM}"
            )));
        }
        Ok(QuadraticFormF2 {
            n,
            linear: 0,
            quad: vec![0; n],
        })
    }

    /// Form from raw coefficient masks. `quad[i]` may only have bits `> i`.
    pub fn from_coeffs(n: usize, linear: u32, quad: Vec<u32>) -> Result<Self> {
        let mut f = Self::zero(n)?;
        if quad.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} cross-term rows, got {}",
                quad.len()
            )));
        }
        let coord_mask = mask_n(n);
        if linear & !coord_mask != 0 {
            return Err(Error::DimensionMismatch(
                "linear coefficients outside the coordinate range".into(),
            ));
        }
        for (i, &row) in quad.iter().enumerate() {
            if row & !coord_mask != 0 || row & mask_n(i + 1) != 0 {
                return Err(Error::Validation(format!(
                    "cross-term row {i} is not strictly upper triangular"
                )));
            }
        }
        f.linear = linear;
        f.quad = quad;
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Toggles the linear term `x_i` (1-based). Terms cancel mod 2.
    pub fn toggle_linear(&mut self, i: usize) {
        assert!((1..=self.n).contains(&i));
        self.linear ^= 1 << (i - 1);
    }

    /// Toggles the cross term `x_i x_j` (1-based, `i < j`).
    pub fn toggle_cross(&mut self, i: usize, j: usize) {
        assert!(i < j && (1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.quad[i - 1] ^= 1 << (j - 1);
    }

    pub fn linear_mask(&self) -> u32 {
        self.linear
    }

    pub fn cross_rows(&self) -> &[u32] {
        &self.quad
    }

    /// Evaluates the form at a coordinate bitmask.
    pub fn evaluate(&self, x: u32) -> bool {
        let x = x & mask_n(self.n);
        let mut acc = (self.linear & x).count_ones();
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc += (self.quad[i] & x).count_ones();
        }
        acc % 2 == 1
    }

    /// The value table `q(0), q(1), …, q(2ⁿ−1)` indexed by coordinate mask.
    pub fn value_table(&self) -> Vec<bool> {
        let size = 1usize << self.n;
        let mut table = vec![false; size];
        let brows = self.bilinear().rows;
        // Gray-code walk: q(x ⊕ e_i) = q(x) + q(e_i) + b(x, e_i)
        let mut x = 0u32;
        let mut v = false;
        for k in 1..size as u64 {
            let i = k.trailing_zeros() as usize;
            v ^= (self.linear >> i) & 1 == 1;
            v ^= (brows[i] & x).count_ones() % 2 == 1;
            x ^= 1 << i;
            table[x as usize] = v;
        }
        table
    }

    /// Reconstructs the polynomial from a value table, verifying that the
    /// table actually comes from a quadratic form.
    pub fn from_value_table(n: usize, table: &[bool]) -> Result<Self> {
        if n > MAX_DIM || table.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "value table of length {} does not match dimension {n}",
                table.len()
            )));
        }
        if table[0] {
            return Err(Error::Validation("q(0) must be 0".into()));
        }
        let mut f = Self::zero(n)?;
        for i in 1..=n {
            if table[1 << (i - 1)] {
                f.toggle_linear(i);
            }
        }
        for i in 1..=n {
            for j in (i + 1)..=n {
                let ei = 1usize << (i - 1);
                let ej = 1usize << (j - 1);
                if table[ei | ej] ^ table[ei] ^ table[ej] {
                    f.toggle_cross(i, j);
                }
            }
        }
        if f.value_table() != table {
            return Err(Error::Validation(
                "value table is not quadratic (degree exceeds 2)".into(),
            ));
        }
        Ok(f)
    }

    /// The alternating bilinear form `b(u,v) = q(u+v) + q(u) + q(v)`.
    pub fn bilinear(&self) -> BilinearFormF2 {
        let mut rows = vec![0u32; self.n];
        for i in 0..self.n {
            rows[i] |= self.quad[i];
            for j in 0..i {
                rows[i] |= ((self.quad[j] >> i) & 1) << j;
            }
        }
        BilinearFormF2 { n: self.n, rows }
    }

    /// True iff `rad(b_q) = 0`, or `dim rad = 1` and `q` is nonzero on the
    /// nonzero radical vector.
    pub fn is_regular(&self) -> bool {
        let rad = self.bilinear().radical();
        match rad.len() {
            0 => true,
            1 => self.evaluate(rad[0]),
            _ => false,
        }
    }

    /// Exhaustive Arf invariant: enumerates all `2ⁿ` vectors and returns the
    /// sign of `#{q=0} − #{q=1}` together with the exact count difference.
    ///
    /// For the signature forms `q_{p,q}` (all cross terms, squares on a
    /// suffix) the evaluation reduces to popcounts, which keeps `n = 24`
    /// enumeration cheap; other forms take a Gray-code walk with O(1) work
    /// per vector.
    pub fn arf_brute(&self) -> ArfResult {
        let diff = self.count_difference_range(0, 1u64 << self.n);
        ArfResult {
            value: ArfValue::from_count_difference(diff),
            count_difference: diff,
        }
    }

    /// Same as [`arf_brute`](Self::arf_brute) but splits the enumeration
    /// range over `threads` workers. The signed counts are summed, so the
    /// result does not depend on the partition.
    pub fn arf_brute_parallel(&self, threads: usize) -> ArfResult {
        let total = 1u64 << self.n;
        let threads = threads.clamp(1, 64) as u64;
        let diff = if threads == 1 || total < 1 << 12 {
            self.count_difference_range(0, total)
        } else {
            let chunk = total.div_ceil(threads);
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads)
                    .map(|t| {
                        let lo = t * chunk;
                        let hi = total.min(lo + chunk);
                        scope.spawn(move || self.count_difference_range(lo, hi))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).sum()
            })
        };
        ArfResult {
            value: ArfValue::from_count_difference(diff),
            count_difference: diff,
        }
    }

    /// Signed count over masks in `[lo, hi)`.
    fn count_difference_range(&self, lo: u64, hi: u64) -> i64 {
        if let Some(p) = self.signature_form_p() {
            // q(x) = C(w,2) + popcount(high part) with w = popcount(x):
            // C(w,2) mod 2 is bit 1 of w.
            let mut diff = 0i64;
            for x in lo..hi {
                let x = x as u32;
                let w = x.count_ones();
                let s = (x >> p).count_ones();
                let v = ((w >> 1) ^ s) & 1;
                diff += 1 - 2 * v as i64;
            }
            return diff;
        }
        let brows = self.bilinear().rows;
        let mut diff = 0i64;
        let mut x = gray(lo);
        let mut v = self.evaluate(x);
        diff += if v { -1 } else { 1 };
        for k in (lo + 1)..hi {
            let i = k.trailing_zeros() as usize;
            v ^= (self.linear >> i) & 1 == 1;
            v ^= (brows[i] & x).count_ones() % 2 == 1;
            x ^= 1 << i;
            diff += if v { -1 } else { 1 };
        }
        diff
    }

    /// If this form is `q_{p,q}` for some split, returns `p`.
    fn signature_form_p(&self) -> Option<usize> {
        for i in 0..self.n {
            let expect = mask_n(self.n) & !mask_n(i + 1);
            if self.quad[i] != expect {
                return None;
            }
        }
        // linear part must be a suffix of coordinates
        let l = self.linear;
        if l == 0 {
            return Some(self.n);
        }
        let p = l.trailing_zeros() as usize;
        if l == mask_n(self.n) & !mask_n(p) {
            Some(p)
        } else {
            None
        }
    }

    /// Dickson canonical representative of the given kind on `𝔽₂ⁿ`.
    ///
    /// `q₀` is the sum of hyperbolic pairs `x₁x₂ + x₃x₄ + ⋯`; `q₁` adds
    /// `x₁ + x₂`; `q₂` (odd `n` only) adds the lone square `x_n`.
    pub fn dickson_canonical(n: usize, kind: DicksonKind) -> Result<Self> {
        let mut f = Self::zero(n)?;
        match kind {
            DicksonKind::Q0 | DicksonKind::Q1 => {
                if kind == DicksonKind::Q1 && n < 2 {
                    return Err(Error::Domain(
                        "q1 needs dimension at least 2 for the x1+x2 tail".into(),
                    ));
                }
            }
            DicksonKind::Q2 => {
                if n % 2 == 0 {
                    return Err(Error::Domain(format!(
                        "q2 requires odd dimension, got {n}"
                    )));
                }
            }
        }
        let pairs = n / 2;
        for k in 0..pairs {
            f.toggle_cross(2 * k + 1, 2 * k + 2);
        }
        match kind {
            DicksonKind::Q0 => {}
            DicksonKind::Q1 => {
                f.toggle_linear(1);
                f.toggle_linear(2);
            }
            DicksonKind::Q2 => f.toggle_linear(n),
        }
        Ok(f)
    }

    /// The signature form `q_{p,q}` on `𝔽₂^{p+q}`: all cross terms plus
    /// square terms on the last `q` coordinates.
    pub fn q_pq(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        let mut f = Self::zero(n)?;
        for i in 1..=n {
            for j in (i + 1)..=n {
                f.toggle_cross(i, j);
            }
        }
        for i in (p + 1)..=n {
            f.toggle_linear(i);
        }
        Ok(f)
    }

    /// Orthogonal sum as a block form on `𝔽₂^{n+n'}`.
    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        let n = self.n + other.n;
        let mut f = Self::zero(n)?;
        f.linear = self.linear | (other.linear << self.n);
        for i in 0..self.n {
            f.quad[i] = self.quad[i];
        }
        for i in 0..other.n {
            f.quad[self.n + i] = other.quad[i] << self.n;
        }
        Ok(f)
    }

    /// Decides equivalence within the classified family (radical dimension
    /// at most 1 on both sides) by comparing the complete invariant set
    /// (dimension, radical dimension, regularity, Arf).
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        let inv_a = self.dickson_invariants()?;
        let inv_b = other.dickson_invariants()?;
        Ok(inv_a == inv_b)
    }

    fn dickson_invariants(&self) -> Result<(usize, usize, bool, ArfValue)> {
        let rad_dim = self.bilinear().radical().len();
        if rad_dim >= 2 {
            return Err(Error::Unsupported(format!(
                "radical dimension {rad_dim} is outside the classified family"
            )));
        }
        Ok((self.n, rad_dim, self.is_regular(), self.arf_brute().value))
    }

    /// Searches for an invertible `φ` with `q'(φ(w)) = q(w)` for all `w`.
    ///
    /// Backtracking over the images of the canonical basis, pruning on
    /// `q`-values and pairwise `b`-values; any returned witness has been
    /// verified exhaustively. Capped at `n ≤ 6`.
    pub fn find_witness(&self, other: &Self) -> Result<Option<LinearMapF2>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "witness search needs equal dimensions, got {} and {}",
                self.n, other.n
            )));
        }
        if self.n > 6 {
            return Err(Error::Capacity(format!(
                "witness search is capped at dimension 6, got {}",
                self.n
            )));
        }
        let n = self.n;
        let size = 1u32 << n;
        // value-count histogram is equivalence-invariant; cheap reject
        let tab_q = self.value_table();
        let tab_p = other.value_table();
        if tab_q.iter().filter(|&&v| v).count() != tab_p.iter().filter(|&&v| v).count() {
            return Ok(None);
        }
        let b_q = self.bilinear();
        let b_p = other.bilinear();

        let mut cols = vec![0u32; n];
        // row-reduced basis of the span of chosen images, for independence
        let mut reduced: Vec<u32> = Vec::with_capacity(n);
        if !search_images(
            0, n, size, &tab_q, &tab_p, &b_q, &b_p, &mut cols, &mut reduced,
        ) {
            return Ok(None);
        }
        let map = LinearMapF2 { n, cols };
        for w in 0..size {
            if other.evaluate(map.apply(w)) != self.evaluate(w) {
                return Ok(None);
            }
        }
        Ok(Some(map))
    }

    /// The multiplicative version `μ(w) = (−1)^{q(w)}`.
    pub fn to_multiplicative(&self) -> MultQuadForm {
        MultQuadForm { base: self.clone() }
    }
}

fn mask_n(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn gray(k: u64) -> u32 {
    (k ^ (k >> 1)) as u32
}

#[allow(clippy::too_many_arguments)]
fn search_images(
    k: usize,
    n: usize,
    size: u32,
    tab_q: &[bool],
    tab_p: &[bool],
    b_q: &BilinearFormF2,
    b_p: &BilinearFormF2,
    cols: &mut [u32],
    reduced: &mut Vec<u32>,
) -> bool {
    if k == n {
        return true;
    }
    let want_q = tab_q[1usize << k];
    'candidates: for c in 1..size {
        if tab_p[c as usize] != want_q {
            continue;
        }
        for j in 0..k {
            if b_p.eval(cols[j], c) != b_q.eval(1 << j, 1 << k) {
                continue 'candidates;
            }
        }
        // independence: reduce c against the chosen images
        let mut r = c;
        for &v in reduced.iter() {
            let pivot = 31 - v.leading_zeros();
            if r >> pivot & 1 == 1 {
                r ^= v;
            }
        }
        if r == 0 {
            continue;
        }
        cols[k] = c;
        reduced.push(r);
        if search_images(k + 1, n, size, tab_q, tab_p, b_q, b_p, cols, reduced) {
            return true;
        }
        reduced.pop();
    }
    false
}

impl fmt::Display for QuadraticFormF2 {
    /// Renders in the input grammar: cross terms first, then linear terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if self.quad[i - 1] >> (j - 1) & 1 == 1 {
                    terms.push(format!("x{i}*x{j}"));
                }
            }
        }
        for i in 1..=self.n {
            if self.linear >> (i - 1) & 1 == 1 {
                terms.push(format!("x{i}"));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Dickson canonical form kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DicksonKind {
    Q0,
    Q1,
    Q2,
}

impl fmt::Display for DicksonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DicksonKind::Q0 => write!(f, "q0"),
            DicksonKind::Q1 => write!(f, "q1"),
            DicksonKind::Q2 => write!(f, "q2"),
        }
    }
}

/// An alternating bilinear form on `𝔽₂ⁿ` (symmetric matrix, zero diagonal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearFormF2 {
    n: usize,
    /// rows[i] = row i of the symmetric matrix as a bitmask
    rows: Vec<u32>,
}

impl BilinearFormF2 {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn eval(&self, u: u32, v: u32) -> bool {
        let mut acc = 0u32;
        let mut rest = u;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc ^= (self.rows[i] & v).count_ones() & 1;
        }
        acc == 1
    }

    /// Basis of the radical (null space of the matrix), via GF(2) Gaussian
    /// elimination. Vectors are coordinate bitmasks.
    pub fn radical(&self) -> Vec<u32> {
        // eliminate on rows; free columns give the null-space basis
        let n = self.n;
        let mut rows = self.rows.clone();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut pivot_cols = 0u32;
        for col in 0..n {
            let Some(r) = (pivot_col_of_row.len()..rows.len())
                .find(|&r| rows[r] >> col & 1 == 1)
            else {
                continue;
            };
            rows.swap(pivot_col_of_row.len(), r);
            let pr = pivot_col_of_row.len();
            for r2 in 0..rows.len() {
                if r2 != pr && rows[r2] >> col & 1 == 1 {
                    rows[r2] ^= rows[pr];
                }
            }
            pivot_col_of_row.push(col);
            pivot_cols |= 1 << col;
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_cols >> free & 1 == 1 {
                continue;
            }
            let mut v = 1u32 << free;
            for (r, &pc) in pivot_col_of_row.iter().enumerate() {
                if rows[r] >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.n - self.radical().len()
    }
}

/// The three-valued Arf invariant: the sign of `#{q=0} − #{q=1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArfValue {
    Minus,
    Zero,
    Plus,
}

impl ArfValue {
    pub fn from_count_difference(diff: i64) -> Self {
        match diff.signum() {
            1 => ArfValue::Plus,
            0 => ArfValue::Zero,
            _ => ArfValue::Minus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            ArfValue::Plus => 1,
            ArfValue::Zero => 0,
            ArfValue::Minus => -1,
        }
    }

    /// Negation with the convention `−0 = 0`.
    pub fn negated(self) -> Self {
        match self {
            ArfValue::Plus => ArfValue::Minus,
            ArfValue::Zero => ArfValue::Zero,
            ArfValue::Minus => ArfValue::Plus,
        }
    }
}

impl fmt::Display for ArfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// Result of an exhaustive Arf computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArfResult {
    pub value: ArfValue,
    /// Exact `#{q=0} − #{q=1}`.
    pub count_difference: i64,
}

/// An invertible-candidate linear map on `𝔽₂ⁿ`, stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMapF2 {
    n: usize,
    /// cols[i] = image of the basis vector e_{i+1}, as a coordinate bitmask
    cols: Vec<u32>,
}

impl LinearMapF2 {
    pub fn identity(n: usize) -> Self {
        LinearMapF2 {
            n,
            cols: (0..n).map(|i| 1 << i).collect(),
        }
    }

    pub fn from_columns(n: usize, cols: Vec<u32>) -> Result<Self> {
        if cols.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} columns, got {}",
                cols.len()
            )));
        }
        Ok(LinearMapF2 { n, cols })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[u32] {
        &self.cols
    }

    pub fn apply(&self, x: u32) -> u32 {
        let mut y = 0;
        let mut rest = x & mask_n(self.n);
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            y ^= self.cols[i];
        }
        y
    }

    pub fn is_invertible(&self) -> bool {
        let mut reduced: Vec<u32> = Vec::new();
        for &c in &self.cols {
            let mut r = c;
            for &v in &reduced {
                let pivot = 31 - v.leading_zeros();
                if r >> pivot & 1 == 1 {
                    r ^= v;
                }
            }
            if r == 0 {
                return false;
            }
            reduced.push(r);
        }
        true
    }
}

/// A multiplicative quadratic form `μ(w) = (−1)^{q(w)}` on `C₂ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultQuadForm {
    base: QuadraticFormF2,
}

impl MultQuadForm {
    pub fn base(&self) -> &QuadraticFormF2 {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.n
    }

    /// `μ(w) = (−1)^{q(w)}` at a coordinate bitmask.
    pub fn eval(&self, w: u32) -> Sign {
        Sign::from_parity(self.base.evaluate(w))
    }

    /// The polarization bicharacter `β_μ(r,s) = μ(rs)μ(r)μ(s)`, tabulated on
    /// generator pairs and extended bimultiplicatively.
    pub fn beta(&self) -> Bicharacter {
        let group = FinAbGroup::elementary2(self.base.n)
            .expect("forms dimension is within the group size limit");
        Bicharacter::from_sign_fn(group, |i, j| {
            // generators indices are 0-based with i > j
            let r = 1u32 << i;
            let s = 1u32 << j;
            Sign::from_parity(
                self.base.evaluate(r | s) ^ self.base.evaluate(r) ^ self.base.evaluate(s),
            )
        })
        .expect("signs on an elementary 2-group are always order-compatible")
    }
}

/// Parses the form input grammar.
///
/// Terms joined by `+`; each term is `xI`, `xI^2` (normalized to `xI`), or
/// `xI*xJ` with `1 ≤ I < J ≤ n`. Whitespace is ignored and duplicate terms
/// cancel mod 2. The dimension is the largest index mentioned unless `dim`
/// overrides it. The literal `0` denotes the zero form and requires `dim`.
pub fn parse_form(input: &str, dim: Option<usize>) -> Result<QuadraticFormF2> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty form expression".into()));
    }
    if compact == "0" {
        let n = dim.ok_or_else(|| {
            Error::Parse("the zero form needs an explicit dimension".into())
        })?;
        return QuadraticFormF2::zero(n);
    }

    enum Term {
        Linear(usize),
        Cross(usize, usize),
    }

    let mut terms = Vec::new();
    let mut max_index = 0usize;
    for piece in compact.split('+') {
        if piece.is_empty() {
            return Err(Error::Parse("empty term (stray '+')".into()));
        }
        let term = if let Some((a, b)) = piece.split_once('*') {
            let i = parse_var(a)?;
            let j = parse_var(b)?;
            if i >= j {
                return Err(Error::Parse(format!(
                    "cross term {piece:?} must have strictly increasing indices"
                )));
            }
            max_index = max_index.max(j);
            Term::Cross(i, j)
        } else {
            let name = piece.strip_suffix("^2").unwrap_or(piece);
            let i = parse_var(name)?;
            max_index = max_index.max(i);
            Term::Linear(i)
        };
        terms.push(term);
    }

    let n = match dim {
        Some(n) => {
            if max_index > n {
                return Err(Error::Parse(format!(
                    "index {max_index} exceeds the declared dimension {n}"
                )));
            }
            n
        }
        None => max_index,
    };
    let mut f = QuadraticFormF2::zero(n)?;
    for term in terms {
        match term {
            Term::Linear(i) => f.toggle_linear(i),
            Term::Cross(i, j) => f.toggle_cross(i, j),
        }
    }
    Ok(f)
}

fn parse_var(s: &str) -> Result<usize> {
    let digits = s
        .strip_prefix('x')
        .ok_or_else(|| Error::Parse(format!("expected a variable like x3, got {s:?}")))?;
    let i: usize = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad variable index in {s:?}")))?;
    if i == 0 || i > MAX_DIM {
        return Err(Error::Parse(format!(
            "variable index must be in 1..={MAX_DIM}, got {i}"
        )));
    }
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn form(expr: &str) -> QuadraticFormF2 {
        parse_form(expr, None).unwrap()
    }

    #[test]
    fn bilinear_of_single_cross_term() {
        let b = form("x1*x2").bilinear();
        assert!(b.entry(0, 1) && b.entry(1, 0));
        assert!(!b.entry(0, 0) && !b.entry(1, 1));
    }

    #[test]
    fn bilinear_of_linear_form_vanishes() {
        let b = parse_form("x1", Some(1)).unwrap().bilinear();
        assert_eq!(b.rows(), &[0]);
    }

    #[test]
    fn bilinear_of_q_pq_is_all_ones_off_diagonal() {
        for (p, q) in [(2, 1), (0, 3), (3, 2)] {
            let b = QuadraticFormF2::q_pq(p, q).unwrap().bilinear();
            let n = p + q;
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(b.entry(i, j), i != j);
                }
            }
        }
    }

    #[test]
    fn bilinear_matches_polarization_exhaustively() {
        // b(u,v) = q(u+v) + q(u) + q(v) for every pair, several forms
        for expr in ["x1*x2+x3", "x1*x3+x2*x4+x1", "x1*x2+x1+x2", "x2+x1*x2"] {
            let q = form(expr);
            let b = q.bilinear();
            let size = 1u32 << q.dim();
            for u in 0..size {
                for v in 0..size {
                    assert_eq!(
                        b.eval(u, v),
                        q.evaluate(u ^ v) ^ q.evaluate(u) ^ q.evaluate(v)
                    );
                }
            }
        }
    }

    #[test]
    fn radical_dimensions() {
        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        assert_eq!(q0_2.bilinear().radical().len(), 0);
        let q2_3 = QuadraticFormF2::dickson_canonical(3, DicksonKind::Q2).unwrap();
        assert_eq!(q2_3.bilinear().radical().len(), 1);
        let zero = QuadraticFormF2::zero(2).unwrap();
        assert_eq!(zero.bilinear().radical().len(), 2);
    }

    #[test]
    fn radical_vectors_are_in_the_radical() {
        let q = form("x1*x2+x3");
        let b = q.bilinear();
        for v in b.radical() {
            for u in 0..(1u32 << q.dim()) {
                assert!(!b.eval(v, u));
            }
        }
    }

    #[test]
    fn regularity() {
        let q2_3 = QuadraticFormF2::dickson_canonical(3, DicksonKind::Q2).unwrap();
        assert!(q2_3.is_regular());
        let q0_3 = QuadraticFormF2::dickson_canonical(3, DicksonKind::Q0).unwrap();
        assert!(!q0_3.is_regular());
        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        assert!(q0_2.is_regular());
    }

    #[test]
    fn arf_of_small_canonicals() {
        let r = form("x1*x2").arf_brute();
        assert_eq!((r.value, r.count_difference), (ArfValue::Plus, 2));
        let r = form("x1*x2+x1+x2").arf_brute();
        assert_eq!((r.value, r.count_difference), (ArfValue::Minus, -2));
        let r = parse_form("x1", Some(1)).unwrap().arf_brute();
        assert_eq!((r.value, r.count_difference), (ArfValue::Zero, 0));
    }

    #[test]
    fn arf_of_canonicals_up_to_dim_12() {
        for n in 0..=12 {
            let q0 = QuadraticFormF2::dickson_canonical(n, DicksonKind::Q0).unwrap();
            assert_eq!(q0.arf_brute().value, ArfValue::Plus, "q0^{n}");
            if n >= 2 {
                let q1 = QuadraticFormF2::dickson_canonical(n, DicksonKind::Q1).unwrap();
                assert_eq!(q1.arf_brute().value, ArfValue::Minus, "q1^{n}");
            }
            if n % 2 == 1 {
                let q2 = QuadraticFormF2::dickson_canonical(n, DicksonKind::Q2).unwrap();
                assert_eq!(q2.arf_brute().value, ArfValue::Zero, "q2^{n}");
            }
        }
    }

    #[test]
    fn dickson_polynomials_match_the_listed_ones() {
        assert_eq!(
            QuadraticFormF2::dickson_canonical(4, DicksonKind::Q0)
                .unwrap()
                .to_string(),
            "x1*x2+x3*x4"
        );
        assert_eq!(
            QuadraticFormF2::dickson_canonical(2, DicksonKind::Q1)
                .unwrap()
                .to_string(),
            "x1*x2+x1+x2"
        );
        assert_eq!(
            QuadraticFormF2::dickson_canonical(3, DicksonKind::Q2)
                .unwrap()
                .to_string(),
            "x1*x2+x3"
        );
        assert!(matches!(
            QuadraticFormF2::dickson_canonical(4, DicksonKind::Q2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn q_pq_examples() {
        let q = QuadraticFormF2::q_pq(2, 0).unwrap();
        assert_eq!(q.to_string(), "x1*x2");
        assert_eq!(q.arf_brute().value, ArfValue::Plus);

        let q = QuadraticFormF2::q_pq(0, 2).unwrap();
        assert_eq!(q.to_string(), "x1*x2+x1+x2");
        assert_eq!(q.arf_brute().value, ArfValue::Minus);

        let q = QuadraticFormF2::q_pq(1, 1).unwrap();
        assert_eq!(q.to_string(), "x1*x2+x2");
        assert_eq!(q.arf_brute().value, ArfValue::Plus);
    }

    #[test]
    fn q_pq_squares_sit_on_the_last_q_coordinates() {
        let q = QuadraticFormF2::q_pq(2, 3).unwrap();
        for i in 0..5u32 {
            assert_eq!(q.evaluate(1 << i), i >= 2, "value on e_{}", i + 1);
        }
    }

    #[test]
    fn orthogonal_sums() {
        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        let q0_4 = QuadraticFormF2::dickson_canonical(4, DicksonKind::Q0).unwrap();
        assert_eq!(q0_2.orthogonal_sum(&q0_2).unwrap(), q0_4);

        let empty = QuadraticFormF2::zero(0).unwrap();
        assert_eq!(q0_2.orthogonal_sum(&empty).unwrap(), q0_2);

        let q1_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q1).unwrap();
        let sum = q0_2.orthogonal_sum(&q1_2).unwrap();
        assert_eq!(sum.arf_brute().value, ArfValue::Minus);
        // block values: (q ⊥ q')(w, w') = q(w) + q'(w')
        for w in 0..4u32 {
            for w2 in 0..4u32 {
                assert_eq!(
                    sum.evaluate(w | (w2 << 2)),
                    q0_2.evaluate(w) ^ q1_2.evaluate(w2)
                );
            }
        }
    }

    #[test]
    fn count_difference_is_multiplicative_under_orthogonal_sum() {
        // exhaustive over all forms in dimensions <= 2, plus random pairs
        let mut small = Vec::new();
        for n in 0..=2usize {
            let rows = n * (n.saturating_sub(1)) / 2;
            for bits in 0..(1u32 << (n + rows)) {
                small.push(random_form_from_bits(n, bits));
            }
        }
        for a in &small {
            for b in &small {
                let sum = a.orthogonal_sum(b).unwrap();
                assert_eq!(
                    sum.arf_brute().count_difference,
                    a.arf_brute().count_difference * b.arf_brute().count_difference
                );
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let na = rng.gen_range(0..=6);
            let nb = rng.gen_range(0..=6);
            let a = random_form(&mut rng, na);
            let b = random_form(&mut rng, nb);
            let sum = a.orthogonal_sum(&b).unwrap();
            assert_eq!(
                sum.arf_brute().count_difference,
                a.arf_brute().count_difference * b.arf_brute().count_difference
            );
        }
    }

    fn random_form_from_bits(n: usize, mut bits: u32) -> QuadraticFormF2 {
        let mut f = QuadraticFormF2::zero(n).unwrap();
        for i in 1..=n {
            if bits & 1 == 1 {
                f.toggle_linear(i);
            }
            bits >>= 1;
        }
        for i in 1..=n {
            for j in (i + 1)..=n {
                if bits & 1 == 1 {
                    f.toggle_cross(i, j);
                }
                bits >>= 1;
            }
        }
        f
    }

    fn random_form(rng: &mut impl Rng, n: usize) -> QuadraticFormF2 {
        let mut f = QuadraticFormF2::zero(n).unwrap();
        for i in 1..=n {
            if rng.gen() {
                f.toggle_linear(i);
            }
            for j in (i + 1)..=n {
                if rng.gen() {
                    f.toggle_cross(i, j);
                }
            }
        }
        f
    }

    #[test]
    fn value_table_roundtrip_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let n = rng.gen_range(0..=10);
            let f = random_form(&mut rng, n);
            let table = f.value_table();
            let back = QuadraticFormF2::from_value_table(n, &table).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn from_value_table_rejects_non_quadratic() {
        // x1 x2 x3 is cubic: table has a single 1 at 111
        let mut table = vec![false; 8];
        table[7] = true;
        assert!(matches!(
            QuadraticFormF2::from_value_table(3, &table),
            Err(Error::Validation(_))
        ));
        let table = vec![true, false];
        assert!(matches!(
            QuadraticFormF2::from_value_table(1, &table),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn equivalence_by_invariants() {
        let q0_4 = QuadraticFormF2::dickson_canonical(4, DicksonKind::Q0).unwrap();
        let other = form("x1*x3+x2*x4");
        assert!(q0_4.equivalent(&other).unwrap());

        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        let q1_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q1).unwrap();
        assert!(!q0_2.equivalent(&q1_2).unwrap());

        let q2_3 = QuadraticFormF2::dickson_canonical(3, DicksonKind::Q2).unwrap();
        let q0_3 = QuadraticFormF2::dickson_canonical(3, DicksonKind::Q0).unwrap();
        assert!(!q2_3.equivalent(&q0_3).unwrap());

        let zero2 = QuadraticFormF2::zero(2).unwrap();
        assert!(matches!(
            zero2.equivalent(&q0_2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn witnesses() {
        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        let w = q0_2.find_witness(&q0_2).unwrap().unwrap();
        assert!(w.is_invertible());

        // swap of variables is itself x1*x2; a permutation works
        let swapped = form("x1*x2");
        assert!(q0_2.find_witness(&swapped).unwrap().is_some());

        let q0_4 = QuadraticFormF2::dickson_canonical(4, DicksonKind::Q0).unwrap();
        let other = form("x1*x3+x2*x4");
        let w = q0_4.find_witness(&other).unwrap().unwrap();
        assert!(w.is_invertible());
        for v in 0..16u32 {
            assert_eq!(other.evaluate(w.apply(v)), q0_4.evaluate(v));
        }

        let q1_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q1).unwrap();
        assert!(q0_2.find_witness(&q1_2).unwrap().is_none());

        assert!(matches!(
            QuadraticFormF2::zero(7)
                .unwrap()
                .find_witness(&QuadraticFormF2::zero(7).unwrap()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn multiplicative_form_and_beta() {
        let q = QuadraticFormF2::q_pq(1, 2).unwrap();
        let m = q.to_multiplicative();
        let beta = m.beta();
        let g = beta.group();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(
                        beta.eval(&g.generator(i), &g.generator(j)),
                        Sign::Minus
                    );
                }
            }
        }

        let zero = QuadraticFormF2::zero(3).unwrap().to_multiplicative();
        for w in 0..8u32 {
            assert_eq!(zero.eval(w), Sign::Plus);
        }
        let bz = zero.beta();
        let gz = bz.group();
        for a in gz.enumerate() {
            for b in gz.enumerate() {
                assert_eq!(bz.eval(&a, &b), Sign::Plus);
            }
        }

        let q0_2 = QuadraticFormF2::dickson_canonical(2, DicksonKind::Q0).unwrap();
        let beta = q0_2.to_multiplicative().beta();
        let g = beta.group().clone();
        assert_eq!(beta.eval(&g.generator(0), &g.generator(1)), Sign::Minus);
    }

    #[test]
    fn beta_mu_matches_its_defining_formula_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let q = random_form(&mut rng, n);
            let m = q.to_multiplicative();
            let beta = m.beta();
            let g = beta.group().clone();
            for r in 0..(1u32 << n) {
                for s in 0..(1u32 << n) {
                    let er = g.element(r as u64);
                    let es = g.element(s as u64);
                    let expect = m.eval(mask_from_index(r, n))
                        * m.eval(mask_from_index(s, n))
                        * m.eval(mask_from_index(r ^ s, n));
                    assert_eq!(beta.eval(&er, &es), expect);
                }
            }
        }
    }

    /// Group indices order generator 1 at the most significant bit while form
    /// masks keep x1 in the least significant bit; reverse accordingly.
    fn mask_from_index(idx: u32, n: usize) -> u32 {
        let mut m = 0;
        for i in 0..n {
            if idx >> (n - 1 - i) & 1 == 1 {
                m |= 1 << i;
            }
        }
        m
    }

    #[test]
    fn parser_accepts_the_grammar() {
        assert_eq!(form("x1*x2 + x1 + x2").to_string(), "x1*x2+x1+x2");
        assert_eq!(form("x1^2").to_string(), "x1");
        assert_eq!(form("x1 + x1").to_string(), "0");
        assert_eq!(parse_form("0", Some(3)).unwrap(), QuadraticFormF2::zero(3).unwrap());
        assert_eq!(parse_form("x2", Some(4)).unwrap().dim(), 4);
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert!(parse_form("", None).is_err());
        assert!(parse_form("0", None).is_err());
        assert!(parse_form("x2*x1", None).is_err());
        assert!(parse_form("x1*x1", None).is_err());
        assert!(parse_form("y1", None).is_err());
        assert!(parse_form("x0", None).is_err());
        assert!(parse_form("x3", Some(2)).is_err());
        assert!(parse_form("x1+", None).is_err());
    }

    #[test]
    fn parallel_arf_agrees_with_sequential() {
        let q = QuadraticFormF2::q_pq(5, 8).unwrap();
        let seq = q.arf_brute();
        for threads in [1, 2, 3, 7] {
            assert_eq!(q.arf_brute_parallel(threads), seq);
        }
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(bits in 0u32..1 << 15) {
            let f = random_form_from_bits(5, bits);
            let rendered = f.to_string();
            let parsed = parse_form(&rendered, Some(5)).unwrap();
            prop_assert_eq!(parsed, f);
        }

        #[test]
        fn gray_walk_matches_direct_evaluation(bits in 0u32..1 << 15) {
            let f = random_form_from_bits(5, bits);
            let table = f.value_table();
            for x in 0..32u32 {
                prop_assert_eq!(table[x as usize], f.evaluate(x));
            }
        }
    }
}
