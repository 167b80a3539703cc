//! Brute-force discovery of trellis sections: enumerate the subgroups of
//! a square product of the state group, keep the ones projecting onto
//! both coordinates, and filter by controllability and the caller's
//! predicate.

use crate::error::{Error, Result};
use crate::format::{Provenance, SectionDocument};
use crate::group::{ElemSet, FiniteGroup, Subgroup};
use crate::section::TrellisSection;
use std::collections::HashSet;

/// Cap on the product order; subgroup enumeration is exponential-ish and
/// only meant for example discovery.
pub const SEARCH_ORDER_CAP: usize = 256;

/// What a search hit must satisfy.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchWant {
    pub nonabelian: bool,
    pub min_memory: usize,
}

/// One controllable subdirect product found by the search.
#[derive(Debug)]
pub struct SearchHit {
    pub document: SectionDocument,
    pub branch_order: usize,
    pub memory: usize,
    pub abelian: bool,
}

/// All subgroups of `group`, by breadth-first closure extension.
pub fn all_subgroups(group: &FiniteGroup) -> Vec<Subgroup> {
    let trivial = Subgroup::trivial(group);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(trivial.members().to_vec());
    let mut queue = vec![trivial.clone()];
    let mut out = vec![trivial];
    while let Some(current) = queue.pop() {
        for g in group.elements() {
            if current.contains(g) {
                continue;
            }
            let mut seed = current.members().clone();
            seed.insert(g);
            let bigger = Subgroup::closure(group, &seed);
            if seen.insert(bigger.members().to_vec()) {
                queue.push(bigger.clone());
                out.push(bigger);
            }
        }
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.members().lex_cmp(b.members())));
    out
}

/// Enumerates subdirect products of `state x state`, keeps the
/// controllable ones matching `want`, and wraps each hit as a loadable
/// section document.
pub fn search_subdirect(
    state: &FiniteGroup,
    max_branch_order: usize,
    want: SearchWant,
) -> Result<Vec<SearchHit>> {
    let n = state.order();
    let product_order = n * n;
    if product_order > SEARCH_ORDER_CAP {
        return Err(Error::TooLarge {
            order: product_order,
            cap: SEARCH_ORDER_CAP,
        });
    }
    let square = FiniteGroup::direct_product(state, state)?;
    let mut hits = Vec::new();
    for candidate in all_subgroups(&square) {
        if candidate.order() > max_branch_order {
            continue;
        }
        // Subdirect: both coordinate projections onto the state group.
        let mut lefts = ElemSet::empty(n);
        let mut rights = ElemSet::empty(n);
        for e in candidate.members().iter() {
            lefts.insert(e / n);
            rights.insert(e % n);
        }
        if lefts.len() != n || rights.len() != n {
            continue;
        }
        // Re-materialize the candidate as its own branch group.
        let elems = candidate.members().to_vec();
        let index_of = |e: usize| elems.binary_search(&e).unwrap();
        let order = elems.len();
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| index_of(square.mul(a, b))).collect())
            .collect();
        let branch = FiniteGroup::from_table(order, &table)?;
        let left = elems.iter().map(|&e| e / n).collect();
        let right = elems.iter().map(|&e| e % n).collect();
        let section = TrellisSection::from_parts(branch, state.clone(), left, right)?;
        let memory = match section.memory() {
            Ok(m) => m,
            Err(Error::NotControllable { .. }) => continue,
            Err(e) => return Err(e),
        };
        let abelian = section.branch_group().is_abelian();
        if memory < want.min_memory || (want.nonabelian && abelian) {
            continue;
        }
        hits.push(SearchHit {
            branch_order: section.branch_group().order(),
            memory,
            abelian,
            document: SectionDocument::new(section, Provenance::SearchHit),
        });
    }
    hits.sort_by_key(|h| (h.branch_order, h.memory));
    Ok(hits)
}
