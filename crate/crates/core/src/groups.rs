//! Finite abelian groups presented by generator orders.
//!
//! A group is `⟨g₁⟩ × ⋯ × ⟨g_N⟩` with `g_i` of order `m_i ≥ 2`. Elements are
//! exponent vectors `(a₁, …, a_N)` kept reduced (`0 ≤ a_i < m_i`). When every
//! order equals 2 the element is a packed bit vector in one machine word,
//! which is what makes exhaustive enumeration over `C₂^N` cheap.
//!
//! Enumeration order is fixed (lexicographic on exponent vectors, identity
//! first) so exported tables are byte-stable.

use crate::error::{Error, Result};

/// A finite abelian group `⟨g₁⟩ × ⋯ × ⟨g_N⟩` with `g_i` of order `orders[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAbGroup {
    orders: Vec<u32>,
    is_elementary2: bool,
    size: u64,
    /// strides[i] = ∏_{j>i} orders[j]; index_of is the mixed-radix value with
    /// the first exponent most significant, which is exactly lexicographic rank.
    strides: Vec<u64>,
}

/// An element of a [`FinAbGroup`], stored in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Repr);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    /// Packed bits for elementary 2-groups; bit `N-1-i` holds exponent `a_{i+1}`
    /// so that the numeric value of the word equals the lexicographic rank.
    Bits(u64),
    Mixed(Box<[u32]>),
}

impl FinAbGroup {
    /// Builds the group with the given generator orders.
    ///
    /// Every order must be at least 2 and the group size `∏ m_i` must not
    /// exceed 2^32 (every group in this crate is enumeration-capable).
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if let Some(&m) = orders.iter().find(|&&m| m < 2) {
            return Err(Error::Domain(format!("generator order {m} is below 2")));
        }
        let mut size: u64 = 1;
        for &m in &orders {
            size = size
                .checked_mul(m as u64)
                .filter(|&s| s <= 1 << 32)
                .ok_or_else(|| {
                    Error::Capacity(format!(
                        "group size exceeds 2^32 for orders {orders:?}"
                    ))
                })?;
        }
        let is_elementary2 = orders.iter().all(|&m| m == 2);
        let mut strides = vec![1u64; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as u64;
        }
        Ok(FinAbGroup {
            orders,
            is_elementary2,
            size,
            strides,
        })
    }

    /// The elementary abelian 2-group `C₂^n`.
    pub fn elementary2(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of generators `N`.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_elementary2(&self) -> bool {
        self.is_elementary2
    }

    pub fn identity(&self) -> GroupElement {
        if self.is_elementary2 {
            GroupElement(Repr::Bits(0))
        } else {
            GroupElement(Repr::Mixed(vec![0; self.rank()].into_boxed_slice()))
        }
    }

    /// The `i`-th canonical generator (0-based).
    pub fn generator(&self, i: usize) -> GroupElement {
        assert!(i < self.rank(), "generator index {i} out of range");
        if self.is_elementary2 {
            GroupElement(Repr::Bits(1 << (self.rank() - 1 - i)))
        } else {
            let mut exps = vec![0; self.rank()];
            exps[i] = 1;
            GroupElement(Repr::Mixed(exps.into_boxed_slice()))
        }
    }

    /// Element from an exponent vector, reduced modulo the generator orders.
    pub fn from_exponents(&self, exps: &[u32]) -> Result<GroupElement> {
        if exps.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} exponents, got {}",
                self.rank(),
                exps.len()
            )));
        }
        if self.is_elementary2 {
            let mut mask = 0u64;
            for (i, &a) in exps.iter().enumerate() {
                if a % 2 == 1 {
                    mask |= 1 << (self.rank() - 1 - i);
                }
            }
            Ok(GroupElement(Repr::Bits(mask)))
        } else {
            let reduced: Vec<u32> = exps
                .iter()
                .zip(&self.orders)
                .map(|(&a, &m)| a % m)
                .collect();
            Ok(GroupElement(Repr::Mixed(reduced.into_boxed_slice())))
        }
    }

    /// The reduced exponent vector of an element.
    pub fn exponents(&self, g: &GroupElement) -> Vec<u32> {
        match &g.0 {
            Repr::Bits(mask) => (0..self.rank())
                .map(|i| ((mask >> (self.rank() - 1 - i)) & 1) as u32)
                .collect(),
            Repr::Mixed(exps) => exps.to_vec(),
        }
    }

    /// Exponent of generator `i` in `g`.
    pub fn exponent(&self, g: &GroupElement, i: usize) -> u32 {
        match &g.0 {
            Repr::Bits(mask) => ((mask >> (self.rank() - 1 - i)) & 1) as u32,
            Repr::Mixed(exps) => exps[i],
        }
    }

    fn check_compatible(&self, g: &GroupElement) -> Result<()> {
        let ok = match &g.0 {
            Repr::Bits(mask) => {
                self.is_elementary2
                    && (self.rank() == 64 || mask >> self.rank() == 0)
            }
            Repr::Mixed(exps) => {
                !self.is_elementary2
                    && exps.len() == self.rank()
                    && exps.iter().zip(&self.orders).all(|(&a, &m)| a < m)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "element {g:?} does not belong to a group with orders {:?}",
                self.orders
            )))
        }
    }

    /// Componentwise product `a·b` (sum of exponents mod the orders).
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_compatible(a)?;
        self.check_compatible(b)?;
        Ok(self.mul_reduced(a, b))
    }

    /// Product without the compatibility check; for internal hot loops where
    /// both operands came out of this group.
    pub(crate) fn mul_reduced(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (&a.0, &b.0) {
            (Repr::Bits(x), Repr::Bits(y)) => GroupElement(Repr::Bits(x ^ y)),
            (Repr::Mixed(x), Repr::Mixed(y)) => {
                let exps: Vec<u32> = x
                    .iter()
                    .zip(y.iter())
                    .zip(&self.orders)
                    .map(|((&xa, &ya), &m)| (xa + ya) % m)
                    .collect();
                GroupElement(Repr::Mixed(exps.into_boxed_slice()))
            }
            _ => unreachable!("mixed representations within one group"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match &a.0 {
            Repr::Bits(x) => GroupElement(Repr::Bits(*x)),
            Repr::Mixed(x) => {
                let exps: Vec<u32> = x
                    .iter()
                    .zip(&self.orders)
                    .map(|(&a, &m)| if a == 0 { 0 } else { m - a })
                    .collect();
                GroupElement(Repr::Mixed(exps.into_boxed_slice()))
            }
        }
    }

    /// Multiplicative order of an element.
    pub fn order_of(&self, a: &GroupElement) -> u64 {
        let mut ord = 1u64;
        for (i, &m) in self.orders.iter().enumerate() {
            let e = self.exponent(a, i) as u64;
            let m = m as u64;
            let component = m / gcd(e, m);
            ord = ord / gcd(ord, component) * component;
        }
        ord
    }

    /// Lexicographic rank of an element; the identity has rank 0.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        match &g.0 {
            Repr::Bits(mask) => *mask,
            Repr::Mixed(exps) => exps
                .iter()
                .zip(&self.strides)
                .map(|(&a, &s)| a as u64 * s)
                .sum(),
        }
    }

    /// Element with the given lexicographic rank.
    pub fn element(&self, index: u64) -> GroupElement {
        debug_assert!(index < self.size);
        if self.is_elementary2 {
            GroupElement(Repr::Bits(index))
        } else {
            let exps: Vec<u32> = self
                .strides
                .iter()
                .zip(&self.orders)
                .map(|(&s, &m)| ((index / s) % m as u64) as u32)
                .collect();
            GroupElement(Repr::Mixed(exps.into_boxed_slice()))
        }
    }

    /// Iterates over all elements exactly once, identity first, in
    /// lexicographic exponent order.
    pub fn enumerate(&self) -> Elements<'_> {
        Elements {
            group: self,
            next: 0,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// Iterator over the elements of a [`FinAbGroup`].
pub struct Elements<'a> {
    group: &'a FinAbGroup,
    next: u64,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.next >= self.group.size() {
            return None;
        }
        let g = self.group.element(self.next);
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.group.size() - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Elements<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(
            FinAbGroup::new(vec![2, 1]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            FinAbGroup::new(vec![1 << 20, 1 << 20]),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn c2_squared_products() {
        let g = FinAbGroup::elementary2(2).unwrap();
        let a = g.from_exponents(&[1, 0]).unwrap();
        let b = g.from_exponents(&[0, 1]).unwrap();
        assert_eq!(g.mul(&a, &b).unwrap(), g.from_exponents(&[1, 1]).unwrap());
        let c = g.from_exponents(&[1, 1]).unwrap();
        assert_eq!(g.mul(&c, &c).unwrap(), g.identity());
    }

    #[test]
    fn c4_products() {
        let g = FinAbGroup::new(vec![4]).unwrap();
        let a = g.from_exponents(&[3]).unwrap();
        let b = g.from_exponents(&[2]).unwrap();
        assert_eq!(g.mul(&a, &b).unwrap(), g.from_exponents(&[1]).unwrap());
    }

    #[test]
    fn mul_rejects_foreign_elements() {
        let g2 = FinAbGroup::elementary2(2).unwrap();
        let g3 = FinAbGroup::elementary2(3).unwrap();
        let a = g3.generator(0);
        assert!(matches!(
            g2.mul(&a, &g3.generator(1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let g = FinAbGroup::elementary2(1).unwrap();
        let all: Vec<_> = g.enumerate().map(|e| g.exponents(&e)).collect();
        assert_eq!(all, vec![vec![0], vec![1]]);

        let g = FinAbGroup::elementary2(2).unwrap();
        let all: Vec<_> = g.enumerate().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], g.identity());

        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        let all: Vec<_> = g.enumerate().collect();
        assert_eq!(all.len(), 8);
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 8);
        // lexicographic: (0,0), (0,1), ..., (1,3)
        assert_eq!(g.exponents(&all[1]), vec![0, 1]);
        assert_eq!(g.exponents(&all[4]), vec![1, 0]);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(g.index_of(e), i as u64);
            assert_eq!(&g.element(i as u64), e);
        }
    }

    #[test]
    fn group_laws_exhaustive_small() {
        for orders in [vec![2, 2], vec![4], vec![2, 4], vec![3, 5], vec![2, 2, 2]] {
            let g = FinAbGroup::new(orders).unwrap();
            let elems: Vec<_> = g.enumerate().collect();
            let e = g.identity();
            for a in &elems {
                assert_eq!(&g.mul(a, &e).unwrap(), a);
                assert_eq!(&g.mul(&e, a).unwrap(), a);
                assert_eq!(g.mul(a, &g.inverse(a)).unwrap(), e);
            }
            for a in &elems {
                for b in &elems {
                    assert_eq!(g.mul(a, b).unwrap(), g.mul(b, a).unwrap());
                    for c in &elems {
                        let ab_c = g.mul(&g.mul(a, b).unwrap(), c).unwrap();
                        let a_bc = g.mul(a, &g.mul(b, c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_and_inverse_laws_larger_group() {
        // exhaustive element sweep on a group of size 2^10
        let g = FinAbGroup::new(vec![2, 2, 2, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        assert_eq!(g.size(), 1024);
        let e = g.identity();
        for a in g.enumerate() {
            assert_eq!(g.mul(&a, &e).unwrap(), a);
            assert_eq!(g.mul(&a, &g.inverse(&a)).unwrap(), e);
        }
    }

    #[test]
    fn element_orders() {
        let g = FinAbGroup::new(vec![4, 2]).unwrap();
        assert_eq!(g.order_of(&g.identity()), 1);
        assert_eq!(g.order_of(&g.generator(0)), 4);
        assert_eq!(g.order_of(&g.from_exponents(&[2, 0]).unwrap()), 2);
        assert_eq!(g.order_of(&g.from_exponents(&[1, 1]).unwrap()), 4);
    }

    prop_compose! {
        fn arb_group()(orders in proptest::collection::vec(2u32..6, 1..5)) -> FinAbGroup {
            FinAbGroup::new(orders).unwrap()
        }
    }

    proptest! {
        #[test]
        fn mul_associative_and_commutative((g, ia, ib, ic) in arb_group().prop_flat_map(|g| {
            let n = g.size();
            (Just(g), 0..n, 0..n, 0..n)
        })) {
            let (a, b, c) = (g.element(ia), g.element(ib), g.element(ic));
            prop_assert_eq!(g.mul(&a, &b).unwrap(), g.mul(&b, &a).unwrap());
            let ab_c = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn index_roundtrip((g, i) in arb_group().prop_flat_map(|g| {
            let n = g.size();
            (Just(g), 0..n)
        })) {
            let e = g.element(i);
            prop_assert_eq!(g.index_of(&e), i);
            let exps = g.exponents(&e);
            prop_assert_eq!(g.from_exponents(&exps).unwrap(), e);
        }
    }
}
