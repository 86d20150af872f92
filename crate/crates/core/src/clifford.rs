//! Real Clifford algebras `Cl_{p,q}(ℝ)` as twisted group algebras over
//! `C₂^N`, and their classification up to isomorphism.
//!
//! The generators anticommute and square to +1 (the first `p`) or −1 (the
//! last `q`). The isomorphism class depends only on `(p−q+1) mod 8`:
//!
//! ```text
//! Arf = +1  if p−q+1 ≡ 1,2,3 (mod 8)
//! Arf =  0  if p−q+1 ≡ 0,4   (mod 8)
//! Arf = −1  if p−q+1 ≡ 5,6,7 (mod 8)
//! ```
//!
//! and then, with `N = p+q`:
//!
//! * `N` even, Arf +1 → `M_{2^{N/2}}(ℝ)`
//! * `N` even, Arf −1 → `M_{2^{(N−2)/2}}(ℍ)`
//! * `N` odd,  Arf +1 → `M_{2^{(N−1)/2}}(ℝ)²`
//! * `N` odd,  Arf −1 → `M_{2^{(N−3)/2}}(ℍ)²`
//! * `N` odd,  Arf  0 → `M_{2^{(N−1)/2}}(ℂ)`
//!
//! The residue table *is* the implementation; the equivalent trigonometric
//! sign expression never touches floating point. The closed formula is
//! cross-checked against exhaustive counting (`arf_pq_brute`), against
//! binomial sums evaluated through exact Gaussian-integer arithmetic, and
//! against explicit matrix models (the `models` module).

use crate::algebra::{AlgebraElement, GradingAssignment, TwistedAlgebra};
use crate::cocycles::Bicharacter;
use crate::error::{Error, Result};
use crate::forms::{ArfResult, ArfValue, MultQuadForm, QuadraticFormF2};
use crate::groups::FinAbGroup;
use crate::scalar::rat_int;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// A signature `(p, q)`: `p` generators squaring to +1 and `q` to −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub p: u32,
    pub q: u32,
}

impl Signature {
    pub fn new(p: u32, q: u32) -> Self {
        Signature { p, q }
    }

    pub fn n(&self) -> u32 {
        self.p + self.q
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},{})", self.p, self.q)
    }
}

/// Wedderburn type of a real Clifford algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsoClass {
    MatR(u64),
    MatC(u64),
    MatH(u64),
    /// `M_k(ℝ) × M_k(ℝ)`
    MatR2(u64),
    /// `M_k(ℍ) × M_k(ℍ)`
    MatH2(u64),
}

impl IsoClass {
    pub fn matrix_size(&self) -> u64 {
        match *self {
            IsoClass::MatR(k)
            | IsoClass::MatC(k)
            | IsoClass::MatH(k)
            | IsoClass::MatR2(k)
            | IsoClass::MatH2(k) => k,
        }
    }

    /// Dimension as a real vector space.
    pub fn real_dimension(&self) -> u64 {
        match *self {
            IsoClass::MatR(k) => k * k,
            IsoClass::MatC(k) => 2 * k * k,
            IsoClass::MatH(k) => 4 * k * k,
            IsoClass::MatR2(k) => 2 * k * k,
            IsoClass::MatH2(k) => 8 * k * k,
        }
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IsoClass::MatR(k) => write!(f, "M_{k}(R)"),
            IsoClass::MatC(k) => write!(f, "M_{k}(C)"),
            IsoClass::MatH(k) => write!(f, "M_{k}(H)"),
            IsoClass::MatR2(k) => write!(f, "M_{k}(R)xM_{k}(R)"),
            IsoClass::MatH2(k) => write!(f, "M_{k}(H)xM_{k}(H)"),
        }
    }
}

/// A Gaussian integer, used to evaluate `(1+i)^N` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: i64, im: i64) -> Self {
        GaussianInt {
            re: BigInt::from(re),
            im: BigInt::from(im),
        }
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianInt {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

/// `Cl_{p,q}(ℝ)` as the twisted group algebra over `C₂^N` with all
/// generator pairs anticommuting and squares `+1` (first `p`) / `−1`
/// (last `q`). Capped at `N ≤ 16`.
pub fn clifford_algebra(sig: Signature) -> Result<TwistedAlgebra> {
    let n = sig.n() as usize;
    if n > 16 {
        return Err(Error::Capacity(format!(
            "clifford_algebra is capped at p+q = 16, got {n}"
        )));
    }
    let group = FinAbGroup::elementary2(n)?;
    let beta = Bicharacter::all_pairs_minus(group)?;
    let mu: Vec<_> = (0..n)
        .map(|i| rat_int(if (i as u32) < sig.p { 1 } else { -1 }))
        .collect();
    TwistedAlgebra::from_presentation(vec![2; n], &mu, &beta)
}

/// Closed-formula Arf invariant of `μ_{p,q}`, the mod-8 residue table above.
pub fn arf_closed(sig: Signature) -> ArfValue {
    let r = (sig.p as i64 - sig.q as i64 + 1).rem_euclid(8);
    match r {
        1 | 2 | 3 => ArfValue::Plus,
        0 | 4 => ArfValue::Zero,
        _ => ArfValue::Minus,
    }
}

/// Arf invariant of `μ_{p,q}` by exhaustive enumeration of `2^N` vectors;
/// the central cross-check against [`arf_closed`]. Capped at `N ≤ 24`.
pub fn arf_pq_brute(sig: Signature) -> Result<ArfResult> {
    if sig.n() > 24 {
        return Err(Error::Capacity(format!(
            "brute-force Arf is capped at p+q = 24, got {}",
            sig.n()
        )));
    }
    Ok(QuadraticFormF2::q_pq(sig.p as usize, sig.q as usize)?.arf_brute())
}

/// Isomorphism class of `Cl_{p,q}(ℝ)`, from the parity of `N` and the
/// closed-formula Arf invariant.
pub fn classify(sig: Signature) -> IsoClass {
    let n = sig.n() as u64;
    match (n % 2 == 0, arf_closed(sig)) {
        (true, ArfValue::Plus) => IsoClass::MatR(1 << (n / 2)),
        (true, ArfValue::Minus) => IsoClass::MatH(1 << ((n - 2) / 2)),
        (true, ArfValue::Zero) => {
            unreachable!("even N has odd p−q+1, so the Arf invariant is ±1")
        }
        (false, ArfValue::Plus) => IsoClass::MatR2(1 << ((n - 1) / 2)),
        (false, ArfValue::Minus) => IsoClass::MatH2(1 << ((n - 3) / 2)),
        (false, ArfValue::Zero) => IsoClass::MatC(1 << ((n - 1) / 2)),
    }
}

/// Isomorphism class of the twisted algebra of a multiplicative quadratic
/// form with radical dimension at most 1, from its dimension parity and
/// counted Arf invariant.
pub fn classify_form(m: &MultQuadForm) -> Result<IsoClass> {
    let base = m.base();
    let rad_dim = base.bilinear().radical().len();
    if rad_dim >= 2 {
        return Err(Error::Unsupported(format!(
            "form has radical dimension {rad_dim}, outside the classified family"
        )));
    }
    let n = base.dim() as u64;
    let arf = base.arf_brute().value;
    Ok(match (n % 2 == 0, arf) {
        (true, ArfValue::Plus) => IsoClass::MatR(1 << (n / 2)),
        (true, ArfValue::Minus) => IsoClass::MatH(1 << ((n - 2) / 2)),
        (true, ArfValue::Zero) => {
            return Err(Error::Unsupported(
                "even-dimensional form with zero Arf is outside the classified family"
                    .into(),
            ))
        }
        (false, ArfValue::Plus) => IsoClass::MatR2(1 << ((n - 1) / 2)),
        (false, ArfValue::Minus) => IsoClass::MatH2(1 << ((n - 3) / 2)),
        (false, ArfValue::Zero) => IsoClass::MatC(1 << ((n - 1) / 2)),
    })
}

/// Tensor product at the level of isomorphism classes, for the two right
/// factors the periodicity identities use: `M₂(ℝ)` and `ℍ`.
pub fn tensor_iso(a: IsoClass, b: IsoClass) -> Result<IsoClass> {
    match b {
        IsoClass::MatR(2) => Ok(match a {
            IsoClass::MatR(k) => IsoClass::MatR(2 * k),
            IsoClass::MatC(k) => IsoClass::MatC(2 * k),
            IsoClass::MatH(k) => IsoClass::MatH(2 * k),
            IsoClass::MatR2(k) => IsoClass::MatR2(2 * k),
            IsoClass::MatH2(k) => IsoClass::MatH2(2 * k),
        }),
        IsoClass::MatH(1) => Ok(match a {
            // D ⊗ ℍ: ℝ → ℍ, ℂ → M₂(ℂ), ℍ → M₄(ℝ)
            IsoClass::MatR(k) => IsoClass::MatH(k),
            IsoClass::MatC(k) => IsoClass::MatC(2 * k),
            IsoClass::MatH(k) => IsoClass::MatR(4 * k),
            IsoClass::MatR2(k) => IsoClass::MatH2(k),
            IsoClass::MatH2(k) => IsoClass::MatR2(4 * k),
        }),
        _ => Err(Error::Domain(format!(
            "unsupported right tensor factor {b}"
        ))),
    }
}

/// One periodicity violation, with the identity that failed.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityViolation {
    pub p: u32,
    pub q: u32,
    pub identity: String,
    pub expected: String,
    pub actual: String,
}

/// Report of [`check_periodicity`].
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReport {
    pub max: u32,
    pub identities_checked: u64,
    pub violations: Vec<PeriodicityViolation>,
}

impl PeriodicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, for all `p, q ≤ max`, the four periodicity identities at the
/// level of isomorphism classes:
///
/// 1. `Cl_{p+1,q+1} ≅ Cl_{p,q} ⊗ M₂(ℝ)`
/// 2. `Cl_{p+2,q} ≅ Cl_{q,p} ⊗ M₂(ℝ)`
/// 3. `Cl_{p,q+2} ≅ Cl_{q,p} ⊗ ℍ`
/// 4. `Cl_{p+4,q} ≅ Cl_{p,q+4}`
pub fn check_periodicity(max: u32) -> Result<PeriodicityReport> {
    if max > 16 {
        return Err(Error::Capacity(format!(
            "periodicity sweep is capped at max = 16, got {max}"
        )));
    }
    let m2r = IsoClass::MatR(2);
    let quaternions = IsoClass::MatH(1);
    let mut report = PeriodicityReport {
        max,
        identities_checked: 0,
        violations: Vec::new(),
    };
    let mut check = |p: u32,
                     q: u32,
                     identity: &str,
                     expected: IsoClass,
                     actual: IsoClass,
                     report: &mut PeriodicityReport| {
        report.identities_checked += 1;
        if expected != actual {
            report.violations.push(PeriodicityViolation {
                p,
                q,
                identity: identity.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    };
    for p in 0..=max {
        for q in 0..=max {
            let swapped = classify(Signature::new(q, p));
            check(
                p,
                q,
                "Cl(p+1,q+1) = Cl(p,q) x M_2(R)",
                tensor_iso(classify(Signature::new(p, q)), m2r)?,
                classify(Signature::new(p + 1, q + 1)),
                &mut report,
            );
            check(
                p,
                q,
                "Cl(p+2,q) = Cl(q,p) x M_2(R)",
                tensor_iso(swapped, m2r)?,
                classify(Signature::new(p + 2, q)),
                &mut report,
            );
            check(
                p,
                q,
                "Cl(p,q+2) = Cl(q,p) x H",
                tensor_iso(swapped, quaternions)?,
                classify(Signature::new(p, q + 2)),
                &mut report,
            );
            check(
                p,
                q,
                "Cl(p+4,q) = Cl(p,q+4)",
                classify(Signature::new(p, q + 4)),
                classify(Signature::new(p + 4, q)),
                &mut report,
            );
        }
    }
    Ok(report)
}

/// The four residue-class binomial sums `S_r = Σ_{k ≡ r (mod 4)} C(N,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialSums {
    pub s0: BigInt,
    pub s1: BigInt,
    pub s2: BigInt,
    pub s3: BigInt,
}

impl BinomialSums {
    pub fn total(&self) -> BigInt {
        &self.s0 + &self.s1 + &self.s2 + &self.s3
    }

    /// `S₀ + S₁ − S₂ − S₃`, the count difference of `μ_{N,0}`.
    pub fn combination_pp(&self) -> BigInt {
        &self.s0 + &self.s1 - &self.s2 - &self.s3
    }

    /// `S₀ − S₁ − S₂ + S₃`, the count difference of `μ_{0,N}`.
    pub fn combination_pm(&self) -> BigInt {
        &self.s0 - &self.s1 - &self.s2 + &self.s3
    }
}

/// Direct evaluation by big-integer binomial coefficients. `N ≤ 64`.
pub fn binomial_sums_direct(n: u32) -> Result<BinomialSums> {
    if n > 64 {
        return Err(Error::Capacity(format!(
            "binomial sums are capped at N = 64, got {n}"
        )));
    }
    let mut sums = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut binom = BigInt::one();
    for r in 0..=n {
        sums[(r % 4) as usize] += &binom;
        // C(n, r+1) = C(n, r) * (n - r) / (r + 1)
        binom = binom * BigInt::from(n - r) / BigInt::from(r + 1);
    }
    let [s0, s1, s2, s3] = sums;
    Ok(BinomialSums { s0, s1, s2, s3 })
}

/// Evaluation through the factor algebras of `ℝ[T]/(T⁴−1)`: the triple
/// `(2^N, 0^N, (1+i)^N)` is pulled back along
/// `φ⁻¹(1,0,0) = (1+t+t²+t³)/4`, `φ⁻¹(0,1,0) = (1−t+t²−t³)/4`,
/// `φ⁻¹(0,0,1) = (1−t²)/2`, `φ⁻¹(0,0,i) = (t−t³)/2`, giving
/// `S₀ = (A+B+2c)/4`, `S₁ = (A−B+2d)/4`, `S₂ = (A+B−2c)/4`,
/// `S₃ = (A−B−2d)/4` with `A = 2^N`, `B = 0^N`, `(1+i)^N = c + di`.
pub fn binomial_sums_closed(n: u32) -> Result<BinomialSums> {
    if n > 64 {
        return Err(Error::Capacity(format!(
            "binomial sums are capped at N = 64, got {n}"
        )));
    }
    let a = BigInt::one() << n;
    let b = if n == 0 { BigInt::one() } else { BigInt::zero() };
    let z = GaussianInt::new(1, 1).pow(n);
    let (c, d) = (z.re, z.im);
    let four = BigInt::from(4);
    let exact_quarter = |v: BigInt| -> BigInt {
        debug_assert!((&v % &four).is_zero(), "φ⁻¹ pullback must be integral");
        v / &four
    };
    Ok(BinomialSums {
        s0: exact_quarter(&a + &b + 2 * &c),
        s1: exact_quarter(&a - &b + 2 * &d),
        s2: exact_quarter(&a + &b - 2 * &c),
        s3: exact_quarter(&a - &b - 2 * &d),
    })
}

/// Output formats for [`clock_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

#[derive(Serialize)]
struct ClockEntry {
    p: u32,
    q: u32,
    n: u32,
    arf: i8,
    iso_class: String,
    real_dimension: u64,
}

/// The classification table for all `p + q ≤ max_n`, rows indexed by `p`,
/// columns by `q`.
pub fn clock_table(max_n: u32, format: TableFormat) -> Result<String> {
    if max_n > 32 {
        return Err(Error::Capacity(format!(
            "classification table is capped at p+q = 32, got {max_n}"
        )));
    }
    match format {
        TableFormat::Csv => {
            let mut out = String::from("p,q,N,arf,iso_class,real_dimension\n");
            for p in 0..=max_n {
                for q in 0..=(max_n - p) {
                    let sig = Signature::new(p, q);
                    let class = classify(sig);
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        p,
                        q,
                        sig.n(),
                        arf_closed(sig).as_i8(),
                        class,
                        class.real_dimension()
                    ));
                }
            }
            Ok(out)
        }
        TableFormat::Markdown => {
            let mut out = String::from("| p\\q |");
            for q in 0..=max_n {
                out.push_str(&format!(" {q} |"));
            }
            out.push('\n');
            out.push_str("|---|");
            for _ in 0..=max_n {
                out.push_str("---|");
            }
            out.push('\n');
            for p in 0..=max_n {
                out.push_str(&format!("| {p} |"));
                for q in 0..=max_n {
                    if p + q <= max_n {
                        out.push_str(&format!(" {} |", classify(Signature::new(p, q))));
                    } else {
                        out.push_str("  |");
                    }
                }
                out.push('\n');
            }
            Ok(out)
        }
        TableFormat::Json => {
            let mut entries = Vec::new();
            for p in 0..=max_n {
                for q in 0..=(max_n - p) {
                    let sig = Signature::new(p, q);
                    let class = classify(sig);
                    entries.push(ClockEntry {
                        p,
                        q,
                        n: sig.n(),
                        arf: arf_closed(sig).as_i8(),
                        iso_class: class.to_string(),
                        real_dimension: class.real_dimension(),
                    });
                }
            }
            serde_json::to_string_pretty(&entries)
                .map_err(|e| Error::Validation(format!("serialization failed: {e}")))
        }
    }
}

/// The division grading of `Cl_{3,0}(ℝ)` by `ℤ₂ × ℤ₄ = ⟨a⟩ × ⟨b⟩`:
///
/// ```text
/// e   = deg 1            a   = deg v₁
/// b   = deg (v₂ + v₃v₁)  ab  = deg (v₃ − v₁v₂)
/// b²  = deg v₁v₂v₃       ab² = deg v₂v₃
/// b³  = deg (v₂ − v₃v₁)  ab³ = deg (v₃ + v₁v₂)
/// ```
pub fn z2z4_division_grading_on_cl3() -> Result<(TwistedAlgebra, GradingAssignment)> {
    let algebra = clifford_algebra(Signature::new(3, 0))?;
    let g = algebra.group().clone();
    let v1 = algebra.basis_element(&g.generator(0));
    let v2 = algebra.basis_element(&g.generator(1));
    let v3 = algebra.basis_element(&g.generator(2));
    let v3v1 = algebra.multiply(&v3, &v1);
    let v1v2 = algebra.multiply(&v1, &v2);
    let v2v3 = algebra.multiply(&v2, &v3);
    let v1v2v3 = algebra.multiply(&v1v2, &v3);

    let target = FinAbGroup::new(vec![2, 4])?;
    let deg = |a: u32, b: u32| target.from_exponents(&[a, b]).unwrap();
    let entries = vec![
        (deg(0, 0), algebra.one()),
        (deg(1, 0), v1),
        (deg(0, 1), v2.add(&v3v1)),
        (deg(1, 1), v3.sub(&v1v2)),
        (deg(0, 2), v1v2v3),
        (deg(1, 2), v2v3),
        (deg(0, 3), v2.sub(&v3v1)),
        (deg(1, 3), v3.add(&v1v2)),
    ];
    let assignment = GradingAssignment::new(target, entries)?;
    Ok((algebra, assignment))
}

/// Natural `C₂^N` grading assignment of a twisted group algebra (each basis
/// element in its own degree).
pub fn natural_grading(algebra: &TwistedAlgebra) -> Result<GradingAssignment> {
    let g = algebra.group().clone();
    let entries: Vec<_> = g
        .enumerate()
        .map(|h| (h.clone(), AlgebraElement::basis(h)))
        .collect();
    GradingAssignment::new(g, entries)
}
