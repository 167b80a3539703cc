//! Subgroups, cosets, and quotients over a fixed parent table.

use super::{ElemSet, FiniteGroup};
use crate::error::{Error, Result};

/// A subgroup of a parent [`FiniteGroup`], stored as a member bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    group: FiniteGroup,
    members: ElemSet,
}

impl Subgroup {
    /// Wraps a member set after checking the subgroup axioms.
    pub fn new(group: &FiniteGroup, members: ElemSet) -> Result<Self> {
        if members.universe() != group.order() {
            return Err(Error::NotASubgroup(
                "member set universe does not match the parent order".into(),
            ));
        }
        if !members.contains(group.identity()) {
            return Err(Error::NotASubgroup("identity is missing".into()));
        }
        for a in members.iter() {
            if !members.contains(group.inv(a)) {
                return Err(Error::NotASubgroup(format!("inverse of {a} is missing")));
            }
            for b in members.iter() {
                let ab = group.mul(a, b);
                if !members.contains(ab) {
                    return Err(Error::NotASubgroup(format!(
                        "product {a}*{b}={ab} escapes the member set"
                    )));
                }
            }
        }
        Ok(Subgroup {
            group: group.clone(),
            members,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Subgroup {
            group: group.clone(),
            members: ElemSet::singleton(group.order(), group.identity()),
        }
    }

    pub fn full(group: &FiniteGroup) -> Self {
        Subgroup {
            group: group.clone(),
            members: group.full_set(),
        }
    }

    /// Smallest subgroup containing `seed`: closure under product and
    /// inverse by orbit expansion.
    pub fn closure(group: &FiniteGroup, seed: &ElemSet) -> Self {
        let mut members = ElemSet::singleton(group.order(), group.identity());
        let mut frontier: Vec<usize> = Vec::new();
        for s in seed.iter() {
            if !members.contains(s) {
                members.insert(s);
                frontier.push(s);
            }
        }
        while let Some(x) = frontier.pop() {
            let xi = group.inv(x);
            if !members.contains(xi) {
                members.insert(xi);
                frontier.push(xi);
            }
            // Products with everything collected so far, both orders.
            for y in members.to_vec() {
                for p in [group.mul(x, y), group.mul(y, x)] {
                    if !members.contains(p) {
                        members.insert(p);
                        frontier.push(p);
                    }
                }
            }
        }
        Subgroup {
            group: group.clone(),
            members,
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.members.contains(elem)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.members.is_subset(&other.members)
    }

    /// True iff `g h g^-1 = h-set` for every g in `ambient`.
    ///
    /// Requires `self <= ambient`; anything else is reported as
    /// [`Error::NotASubgroup`].
    pub fn is_normal_in(&self, ambient: &Subgroup) -> Result<bool> {
        if !self.is_subgroup_of(ambient) {
            return Err(Error::NotASubgroup(
                "normality query needs the subgroup inside the ambient".into(),
            ));
        }
        let g = &self.group;
        for a in ambient.members.iter() {
            let ai = g.inv(a);
            for h in self.members.iter() {
                if !self.members.contains(g.mul(g.mul(a, h), ai)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Set intersection; always a subgroup when both sides are.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        debug_assert!(self.group == other.group);
        Subgroup {
            group: self.group.clone(),
            members: self.members.intersection(&other.members),
        }
    }

    /// Product set with `other`, returned as a subgroup. The caller must
    /// know the product is a group (true throughout this crate where one
    /// factor normalizes the other); this is re-checked in debug builds.
    pub fn product_subgroup(&self, other: &Subgroup) -> Subgroup {
        let (set, is_group) = product_set(&self.group, &self.members, &other.members);
        debug_assert!(is_group, "product set is not a subgroup");
        Subgroup {
            group: self.group.clone(),
            members: set,
        }
    }

    /// Right cosets `Hx` of `self` in `ambient`, with the canonical
    /// transversal: the identity represents the subgroup itself and every
    /// other coset is represented by its smallest element index. Cosets are
    /// listed subgroup first, then by representative index.
    pub fn right_cosets(&self, ambient: &Subgroup) -> Result<CosetList> {
        if !self.is_subgroup_of(ambient) {
            return Err(Error::NotASubgroup(
                "coset decomposition needs the subgroup inside the ambient".into(),
            ));
        }
        let g = &self.group;
        let mut assigned = ElemSet::empty(g.order());
        let mut cosets: Vec<(usize, ElemSet)> = Vec::new();
        for x in ambient.members.iter() {
            if assigned.contains(x) {
                continue;
            }
            let coset = ElemSet::from_iter(g.order(), self.members.iter().map(|h| g.mul(h, x)));
            assigned.union_with(&coset);
            let rep = if coset.contains(g.identity()) {
                g.identity()
            } else {
                coset.min().expect("coset is nonempty")
            };
            cosets.push((rep, coset));
        }
        cosets.sort_by_key(|(rep, c)| (!c.contains(g.identity()), *rep));
        let mut index_of = vec![usize::MAX; g.order()];
        for (i, (_, c)) in cosets.iter().enumerate() {
            for e in c.iter() {
                index_of[e] = i;
            }
        }
        Ok(CosetList {
            subgroup: self.clone(),
            ambient: ambient.clone(),
            transversal: cosets.iter().map(|(rep, _)| *rep).collect(),
            cosets: cosets.into_iter().map(|(_, c)| c).collect(),
            index_of,
        })
    }

    /// Quotient by a normal subgroup, materialized as a fresh group on
    /// coset indices together with the projection map.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !normal.is_normal_in(self)? {
            return Err(Error::NotNormal(format!(
                "order-{} subgroup is not normal in the order-{} ambient",
                normal.order(),
                self.order()
            )));
        }
        let cosets = normal.right_cosets(self)?;
        let n = cosets.len();
        let g = &self.group;
        let table: Vec<Vec<usize>> = cosets
            .transversal
            .iter()
            .map(|&a| {
                cosets
                    .transversal
                    .iter()
                    .map(|&b| cosets.index_of(g.mul(a, b)))
                    .collect()
            })
            .collect();
        let quotient = FiniteGroup::from_table(n, &table)?;
        let projection = self
            .group
            .elements()
            .map(|e| if self.contains(e) { cosets.index_of(e) } else { usize::MAX })
            .collect();
        Ok((quotient, projection))
    }

    /// Deterministic order used for tie-breaking: larger order first, then
    /// lexicographically smaller member set.
    pub fn preference_cmp(&self, other: &Subgroup) -> std::cmp::Ordering {
        other
            .order()
            .cmp(&self.order())
            .then_with(|| self.members.lex_cmp(&other.members))
    }
}

/// `{a*b : a in A, b in B}` together with a flag telling whether the
/// result is closed as a subgroup.
pub fn product_set(group: &FiniteGroup, a: &ElemSet, b: &ElemSet) -> (ElemSet, bool) {
    let mut out = ElemSet::empty(group.order());
    for x in a.iter() {
        for y in b.iter() {
            out.insert(group.mul(x, y));
        }
    }
    let is_group = out.contains(group.identity())
        && out.iter().all(|x| out.contains(group.inv(x)))
        && out
            .iter()
            .all(|x| out.iter().all(|y| out.contains(group.mul(x, y))));
    (out, is_group)
}

/// Right-coset decomposition of an ambient subgroup by a subgroup.
#[derive(Debug, Clone)]
pub struct CosetList {
    pub subgroup: Subgroup,
    pub ambient: Subgroup,
    pub cosets: Vec<ElemSet>,
    pub transversal: Vec<usize>,
    index_of: Vec<usize>,
}

impl CosetList {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Coset index of an ambient element.
    pub fn index_of(&self, elem: usize) -> usize {
        self.index_of[elem]
    }

    pub fn contains_elem(&self, elem: usize) -> bool {
        self.index_of[elem] != usize::MAX
    }
}

/// An ascending chain of subgroups of one parent, with display labels.
#[derive(Debug, Clone)]
pub struct Chain {
    pub groups: Vec<Subgroup>,
    pub labels: Vec<String>,
}

impl Chain {
    pub fn new(groups: Vec<Subgroup>, labels: Vec<String>) -> Result<Self> {
        debug_assert_eq!(groups.len(), labels.len());
        for w in groups.windows(2) {
            if !w[0].is_subgroup_of(&w[1]) {
                return Err(Error::NotASubgroup(
                    "chain entries are not ascending".into(),
                ));
            }
        }
        Ok(Chain { groups, labels })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.order()).collect()
    }
}
