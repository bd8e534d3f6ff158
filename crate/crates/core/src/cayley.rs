//! Finite commutative semigroups given by their Cayley tables.
//!
//! Elements are the dense ids `0..n`. A [`Semigroup`] can only be obtained
//! through validation, so every downstream routine may assume commutativity
//! and associativity.

use std::fmt;

use thiserror::Error;

/// Index of an element in its semigroup, always `< order`.
pub type ElementId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: i64 },
    #[error("table is not commutative: ({i}, {j}) differs from ({j}, {i})")]
    NotCommutative { i: ElementId, j: ElementId },
    #[error("table is not associative at ({i}, {j}, {k})")]
    NotAssociative {
        i: ElementId,
        j: ElementId,
        k: ElementId,
    },
}

/// A validated finite commutative semigroup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Semigroup {
    order: usize,
    table: Vec<ElementId>,
}

/// Index `r` and period `t` of an element: `r·a = (r+t)·a` with both minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct IndexPeriod {
    pub index: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialElements {
    pub identity: Option<ElementId>,
    pub zero: Option<ElementId>,
    pub idempotents: Vec<ElementId>,
}

/// A closed subset of a semigroup together with the restricted operation.
///
/// `members[i]` is the parent id of element `i` of `semigroup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub semigroup: Semigroup,
    pub members: Vec<ElementId>,
}

impl Restriction {
    pub fn local_id(&self, parent: ElementId) -> Option<ElementId> {
        self.members.iter().position(|&m| m == parent)
    }
}

impl Semigroup {
    /// Validates a table given as rows. Checks range, then symmetry, then
    /// associativity, reporting the first witness in row-major order.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, CayleyError> {
        let order = rows.len();
        if order == 0 {
            return Err(CayleyError::Empty);
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in rows.iter().enumerate() {
            let entries = entries.as_ref();
            if entries.len() != order {
                return Err(CayleyError::RaggedRow {
                    row,
                    len: entries.len(),
                    expected: order,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value < 0 || value as usize >= order {
                    return Err(CayleyError::EntryOutOfRange { row, col, value });
                }
                table.push(value as usize);
            }
        }
        Self::from_flat(order, table)
    }

    /// Validates a row-major table of `order * order` entries.
    pub fn from_flat(order: usize, table: Vec<ElementId>) -> Result<Self, CayleyError> {
        if order == 0 {
            return Err(CayleyError::Empty);
        }
        assert_eq!(table.len(), order * order, "flat table has wrong length");
        if let Some(pos) = table.iter().position(|&v| v >= order) {
            return Err(CayleyError::EntryOutOfRange {
                row: pos / order,
                col: pos % order,
                value: table[pos] as i64,
            });
        }
        let s = Semigroup { order, table };
        s.check_commutative()?;
        s.check_associative()?;
        Ok(s)
    }

    /// Builds a table from a closure and validates it.
    pub fn from_fn(
        order: usize,
        mut f: impl FnMut(ElementId, ElementId) -> ElementId,
    ) -> Result<Self, CayleyError> {
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                table.push(f(i, j));
            }
        }
        Self::from_flat(order, table)
    }

    fn check_commutative(&self) -> Result<(), CayleyError> {
        for i in 0..self.order {
            for j in i + 1..self.order {
                if self.add(i, j) != self.add(j, i) {
                    return Err(CayleyError::NotCommutative { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<(), CayleyError> {
        for i in 0..self.order {
            for j in 0..self.order {
                let ij = self.add(i, j);
                for k in 0..self.order {
                    if self.add(ij, k) != self.add(i, self.add(j, k)) {
                        return Err(CayleyError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The cyclic group of order `n` written additively.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |a, b| (a + b) % n).expect("cyclic group table")
    }

    /// Direct product; element `(a, b)` has id `a * other.order() + b`.
    pub fn product(&self, other: &Semigroup) -> Self {
        let m = other.order;
        Self::from_fn(self.order * m, |x, y| {
            self.add(x / m, y / m) * m + other.add(x % m, y % m)
        })
        .expect("direct product of semigroups is a semigroup")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.order + b]
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.order
    }

    /// Row-major table entries.
    pub fn table(&self) -> &[ElementId] {
        &self.table
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ElementId]> {
        self.table.chunks(self.order)
    }

    /// `k·a` for `k ≥ 1`.
    pub fn multiple(&self, a: ElementId, k: usize) -> ElementId {
        assert!(k >= 1, "multiples start at 1");
        let IndexPeriod { index, period } = self.index_and_period(a);
        let k = if k > index {
            index + (k - index) % period
        } else {
            k
        };
        let mut x = a;
        for _ in 1..k {
            x = self.add(x, a);
        }
        x
    }

    /// The distinct multiples `a, 2a, …, (r+t−1)a`.
    pub fn multiples(&self, a: ElementId) -> Vec<ElementId> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        let mut x = a;
        while !seen[x] {
            seen[x] = true;
            out.push(x);
            x = self.add(x, a);
        }
        out
    }

    pub fn index_and_period(&self, a: ElementId) -> IndexPeriod {
        // position[x] = k means x = k·a was first reached at step k
        let mut position = vec![0usize; self.order];
        let mut x = a;
        let mut k = 1;
        loop {
            if position[x] != 0 {
                return IndexPeriod {
                    index: position[x],
                    period: k - position[x],
                };
            }
            position[x] = k;
            x = self.add(x, a);
            k += 1;
        }
    }

    /// Least common multiple of all periods.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.index_and_period(a).period)
            .fold(1, lcm)
    }

    pub fn identity(&self) -> Option<ElementId> {
        self.elements()
            .find(|&e| self.elements().all(|a| self.add(e, a) == a))
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.elements()
            .find(|&z| self.elements().all(|a| self.add(z, a) == z))
    }

    pub fn is_idempotent(&self, a: ElementId) -> bool {
        self.add(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<ElementId> {
        self.elements().filter(|&a| self.is_idempotent(a)).collect()
    }

    pub fn special_elements(&self) -> SpecialElements {
        SpecialElements {
            identity: self.identity(),
            zero: self.zero(),
            idempotents: self.idempotents(),
        }
    }

    pub fn is_monoid(&self) -> bool {
        self.identity().is_some()
    }

    /// True when the semigroup has an identity and every element is invertible.
    pub fn is_group(&self) -> bool {
        match self.identity() {
            Some(e) => self
                .elements()
                .all(|a| self.elements().any(|b| self.add(a, b) == e)),
            None => false,
        }
    }

    /// `S⁰`: the semigroup itself when it has an identity, otherwise `S`
    /// with a new identity element `n` appended.
    pub fn adjoin_identity(&self) -> Semigroup {
        if self.is_monoid() {
            return self.clone();
        }
        let n = self.order;
        Semigroup::from_fn(n + 1, |a, b| {
            if a == n {
                b
            } else if b == n {
                a
            } else {
                self.add(a, b)
            }
        })
        .expect("adjoining an identity preserves associativity")
    }

    /// Id of the identity of [`adjoin_identity`](Self::adjoin_identity).
    pub fn identity_in_adjoined(&self) -> ElementId {
        self.identity().unwrap_or(self.order)
    }

    pub fn is_closed(&self, subset: &[ElementId]) -> bool {
        let mut member = vec![false; self.order];
        for &a in subset {
            member[a] = true;
        }
        subset
            .iter()
            .all(|&a| subset.iter().all(|&b| member[self.add(a, b)]))
    }

    /// The subsemigroup on `subset`, or `None` when `subset` is empty or not closed.
    pub fn restrict(&self, subset: &[ElementId]) -> Option<Restriction> {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() || !self.is_closed(&members) {
            return None;
        }
        let mut local = vec![usize::MAX; self.order];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let semigroup = Semigroup::from_fn(members.len(), |i, j| {
            local[self.add(members[i], members[j])]
        })
        .expect("restriction of a semigroup to a closed subset");
        Some(Restriction { semigroup, members })
    }

    /// Relabels element `a` as `perm[a]`.
    pub fn relabel(&self, perm: &[ElementId]) -> Semigroup {
        assert_eq!(perm.len(), self.order);
        let mut inverse = vec![0; self.order];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let table = (0..self.order * self.order)
            .map(|pos| {
                let (i, j) = (inverse[pos / self.order], inverse[pos % self.order]);
                perm[self.add(i, j)]
            })
            .collect();
        Semigroup {
            order: self.order,
            table,
        }
    }
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Small named semigroups used across tests and documentation.
pub mod fixtures {
    use super::Semigroup;

    /// The trivial semigroup `{0}`.
    pub fn z1() -> Semigroup {
        Semigroup::from_rows(&[[0]]).unwrap()
    }

    pub fn c2() -> Semigroup {
        Semigroup::cyclic(2)
    }

    pub fn c3() -> Semigroup {
        Semigroup::cyclic(3)
    }

    /// Null semigroup `{a = 0, ∞ = 1}`.
    pub fn n2() -> Semigroup {
        Semigroup::from_rows(&[[1, 1], [1, 1]]).unwrap()
    }

    /// Two-element chain `{e = 0, f = 1}` with `e` the identity.
    pub fn sl2() -> Semigroup {
        Semigroup::from_rows(&[[0, 1], [1, 1]]).unwrap()
    }

    /// `C2 ∪ {∞}` as `{0_G = 0, g = 1, ∞ = 2}`.
    pub fn e3() -> Semigroup {
        Semigroup::from_rows(&[[0, 1, 2], [1, 0, 2], [2, 2, 2]]).unwrap()
    }

    /// Monogenic `⟨x⟩` with `4x = 2x`, as `{x = 0, 2x = 1, 3x = 2}`.
    pub fn m3() -> Semigroup {
        Semigroup::from_rows(&[[1, 2, 1], [2, 1, 2], [1, 2, 1]]).unwrap()
    }

    /// Monogenic nilsemigroup `{a = 0, 2a = 1, ∞ = 2}` with `3a = ∞`.
    pub fn nil3() -> Semigroup {
        Semigroup::from_rows(&[[1, 2, 2], [2, 2, 2], [2, 2, 2]]).unwrap()
    }

    /// Every named fixture with its label.
    pub fn all() -> Vec<(&'static str, Semigroup)> {
        vec![
            ("Z1", z1()),
            ("C2", c2()),
            ("C3", c3()),
            ("N2", n2()),
            ("SL2", sl2()),
            ("E3", e3()),
            ("M3", m3()),
            ("NIL3", nil3()),
        ]
    }
}
