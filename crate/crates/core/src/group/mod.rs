//! Finite-group kernel.
//!
//! Groups are multiplication tables over dense element indices; subgroups
//! are bitsets into a parent table. Everything is validated eagerly at
//! construction and immutable afterwards, so values can be shared freely.

mod elems;
mod iso;
mod series;
mod subgroup;

pub use elems::ElemSet;
pub use iso::{find_isomorphism, QuotientData, VerifiedIsomorphism, ISO_ORDER_CAP};
pub use series::{
    composition_refinement, derived_series, eta, factor_summary, is_simple_step, is_solvable,
    jordan_holder_factors, normal_subgroups_between, SimpleFactor,
};
pub use subgroup::{product_set, Chain, CosetList, Subgroup};

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use std::fmt;
use std::sync::Arc;

/// Largest group order the table representation accepts.
pub const ORDER_CAP: usize = 4096;

/// Orders up to this bound get the exhaustive associativity check;
/// larger tables are spot-checked on 10^5 seeded random triples.
pub const EXHAUSTIVE_ASSOC_CAP: usize = 512;

struct GroupData {
    order: usize,
    /// Row-major products: `table[a * order + b]` is the index of a·b.
    table: Vec<u16>,
    identity: usize,
    inverse: Vec<u16>,
}

/// A finite group given by its multiplication table.
///
/// Cloning is cheap (shared storage). Two values represent the same group
/// for the purposes of subgroup arithmetic when they share storage or have
/// identical tables.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order())
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.order == other.data.order && self.data.table == other.data.table)
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a raw multiplication table and computes identity and
    /// inverse tables. Rejects anything that is not a group, reporting the
    /// first failing row, pair, or triple.
    pub fn from_table(order: usize, table: &[Vec<usize>]) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotAGroup("order must be positive".into()));
        }
        if order > ORDER_CAP {
            return Err(Error::TooLarge {
                order,
                cap: ORDER_CAP,
            });
        }
        if table.len() != order {
            return Err(Error::NotAGroup(format!(
                "expected {} rows, found {}",
                order,
                table.len()
            )));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotAGroup(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    order
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::NotAGroup(format!(
                        "entry ({i},{j}) = {v} is out of range"
                    )));
                }
                flat.push(v as u16);
            }
        }
        Self::from_flat(order, flat)
    }

    fn from_flat(order: usize, table: Vec<u16>) -> Result<Self> {
        // Latin square: each row and column is a permutation.
        let mut seen = vec![false; order];
        for i in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..order {
                let v = table[i * order + j] as usize;
                if seen[v] {
                    return Err(Error::NotAGroup(format!(
                        "row {i} repeats element {v}"
                    )));
                }
                seen[v] = true;
            }
        }
        for j in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for i in 0..order {
                let v = table[i * order + j] as usize;
                if seen[v] {
                    return Err(Error::NotAGroup(format!(
                        "column {j} repeats element {v}"
                    )));
                }
                seen[v] = true;
            }
        }

        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|x| {
                    table[e * order + x] as usize == x && table[x * order + e] as usize == x
                })
            })
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        let mut inverse = vec![0u16; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| table[x * order + y] as usize == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {x} has no right inverse")))?;
            if table[y * order + x] as usize != identity {
                return Err(Error::NotAGroup(format!(
                    "right inverse {y} of {x} is not a left inverse"
                )));
            }
            inverse[x] = y as u16;
        }

        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        if order <= EXHAUSTIVE_ASSOC_CAP {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::NotAGroup(format!(
                                "associativity fails on triple ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..100_000 {
                let (a, b, c) = (
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                );
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails on triple ({a},{b},{c})"
                    )));
                }
            }
        }

        Ok(FiniteGroup {
            data: Arc::new(GroupData {
                order,
                table,
                identity,
                inverse,
            }),
        })
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn identity(&self) -> usize {
        self.data.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.data.table[a * self.data.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.data.inverse[a] as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.data.order
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.order())
    }

    /// Multiplicative order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        self == other
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        Self::from_table(1, &[vec![0]]).expect("trivial table is a group")
    }

    /// Cyclic group of order `n` under addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group needs n >= 1".into()));
        }
        if n > ORDER_CAP {
            return Err(Error::TooLarge {
                order: n,
                cap: ORDER_CAP,
            });
        }
        let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(n, &table)
    }

    /// Direct product with the index convention `(a, b) -> a * |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (n, m) = (g.order(), h.order());
        let order = n.checked_mul(m).filter(|&o| o <= ORDER_CAP).ok_or(Error::TooLarge {
            order: n.saturating_mul(m),
            cap: ORDER_CAP,
        })?;
        let mut table = vec![vec![0usize; order]; order];
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        table[a1 * m + b1][a2 * m + b2] = g.mul(a1, a2) * m + h.mul(b1, b2);
                    }
                }
            }
        }
        Self::from_table(order, &table)
    }

    /// Symmetric group on three letters. Elements are the permutations of
    /// `[0,1,2]` in lexicographic one-line order, composed as
    /// `(p * q)(x) = p(q(x))`, so the identity gets index 0.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index_of = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = vec![vec![0usize; 6]; 6];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let composed = [p[q[0]], p[q[1]], p[q[2]]];
                table[i][j] = index_of(composed);
            }
        }
        Self::from_table(6, &table).expect("composition table of S3 is a group")
    }

    /// Klein four-group, for convenience in tests and search baselines.
    pub fn klein_four() -> Self {
        let z2 = Self::cyclic(2).unwrap();
        Self::direct_product(&z2, &z2).unwrap()
    }
}
