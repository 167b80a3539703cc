//! Composition-series refinement of the Schreier matrix: the indexed
//! composition chain built by refining column 0 and pushing it across the
//! columns, its dual, the Schreier array pages assembled from the dual
//! chain, and the refined generator table whose cells are single
//! composition steps.
//!
//! Every construction here re-verifies the properties it relies on
//! (simple factors, pushforward equalities, cross-column isomorphisms);
//! a failure signals an implementation bug and surfaces as
//! [`Error::VerificationFailed`].

use crate::error::{Error, Result};
use crate::generators::GeneratorTable;
use crate::group::{
    composition_refinement, derived_series, find_isomorphism, is_simple_step, is_solvable,
    jordan_holder_factors, Chain, QuotientData, SimpleFactor, Subgroup, ISO_ORDER_CAP,
};
use crate::schreier::{dual_entry, matrix_entry, next_set_iso};
use crate::section::TrellisSection;
use std::collections::BTreeMap;

/// One cell of an indexed composition chain: the refinement terms between
/// two adjacent matrix entries of one column.
#[derive(Debug, Clone)]
pub struct ChainCell {
    pub col: usize,
    pub row: isize,
    /// Ascending terms, endpoints included; `terms.len() - 1` simple steps.
    pub terms: Vec<Subgroup>,
}

impl ChainCell {
    pub fn steps(&self) -> usize {
        self.terms.len() - 1
    }
}

/// A composition chain of the branch group refining one Schreier matrix,
/// indexed by column, row, and position within the cell.
#[derive(Debug, Clone)]
pub struct IndexedCompositionChain {
    /// False for the splitting-chain refinement, true for its dual.
    pub dual: bool,
    pub memory: usize,
    /// Cells ordered column-major ascending; together they tile one
    /// composition chain from the trivial group to the branch group.
    pub cells: Vec<ChainCell>,
    /// Steps per cell, a function of the row sum `col + row` alone.
    pub sigma_bounds: BTreeMap<isize, usize>,
}

impl IndexedCompositionChain {
    pub fn cell(&self, col: usize, row: isize) -> Option<&ChainCell> {
        self.cells
            .iter()
            .find(|c| c.col == col && c.row == row)
    }

    /// Term lookup by the (column, row, sigma) index.
    pub fn term(&self, col: usize, row: isize, sigma: usize) -> Option<&Subgroup> {
        self.cell(col, row).and_then(|c| c.terms.get(sigma))
    }

    /// The deduplicated ascending chain with per-term labels.
    pub fn flattened(&self) -> Vec<(String, Subgroup)> {
        let mut out: Vec<(String, Subgroup)> = Vec::new();
        for cell in &self.cells {
            for (sigma, term) in cell.terms.iter().enumerate() {
                match out.last() {
                    Some((_, prev)) if prev.members() == term.members() => continue,
                    _ => out.push((
                        format!("({},{},{sigma})", cell.col, cell.row),
                        term.clone(),
                    )),
                }
            }
        }
        out
    }

    /// Number of simple factors of the full chain.
    pub fn length(&self) -> usize {
        self.flattened().len() - 1
    }
}

/// Shared construction for the chain and its dual: the first column is
/// refined directly, subsequent columns are pushforward images, and
/// everything is re-verified.
fn composition_chain(section: &TrellisSection, dual: bool) -> Result<IndexedCompositionChain> {
    let memory = section.memory()? as isize;
    let chains = section.chains()?;
    let g = section.branch_group();
    let kernel_at = |i: isize| {
        if dual {
            chains.merging_at(i)
        } else {
            chains.splitting_at(i)
        }
    };
    let other_at = |i: isize| {
        if dual {
            chains.splitting_at(i)
        } else {
            chains.merging_at(i)
        }
    };
    let entry = |col: isize, row: isize| -> Result<Subgroup> {
        if dual {
            dual_entry(section, col, row)
        } else {
            matrix_entry(section, col, row)
        }
    };
    let push = |set: &crate::group::ElemSet| {
        if dual {
            section.prev_set(set)
        } else {
            section.next_set(set)
        }
    };

    // Column 0: refine the chain of intersections directly.
    let mut boundary_groups = vec![Subgroup::trivial(g)];
    let mut boundary_labels = vec!["-1".to_string()];
    for row in -1..memory {
        boundary_groups.push(kernel_at(0).intersect(other_at(row + 1)));
        boundary_labels.push(format!("{}", row + 1));
    }
    let refined = composition_refinement(&Chain::new(boundary_groups.clone(), boundary_labels)?)?;

    let mut cells: Vec<ChainCell> = Vec::new();
    let mut sigma_bounds: BTreeMap<isize, usize> = BTreeMap::new();
    let mut cursor = 0usize;
    for row in -1..memory {
        let upper = &boundary_groups[(row + 2) as usize];
        let mut terms = vec![refined.groups[cursor].clone()];
        while refined.groups[cursor].order() < upper.order() {
            cursor += 1;
            terms.push(refined.groups[cursor].clone());
        }
        sigma_bounds.insert(row, terms.len() - 1);
        cells.push(ChainCell { col: 0, row, terms });
    }

    // Later columns: pushforward of the previous column's row >= 0 cells.
    for col in 1..=memory {
        let prev: Vec<ChainCell> = cells
            .iter()
            .filter(|c| c.col == col as usize - 1 && c.row >= 0)
            .cloned()
            .collect();
        for cell in prev {
            let terms: Vec<Subgroup> = cell
                .terms
                .iter()
                .map(|t| Subgroup::new(g, push(t.members())))
                .collect::<Result<_>>()?;
            for w in terms.windows(2) {
                if w[0].order() >= w[1].order() {
                    return Err(Error::VerificationFailed(format!(
                        "pushforward collapsed a step in column {col}"
                    )));
                }
            }
            cells.push(ChainCell {
                col: col as usize,
                row: cell.row - 1,
                terms,
            });
        }
    }

    let chain = IndexedCompositionChain {
        dual,
        memory: memory as usize,
        cells,
        sigma_bounds,
    };
    verify_indexed_chain(section, &chain, &entry)?;
    Ok(chain)
}

fn verify_indexed_chain(
    section: &TrellisSection,
    chain: &IndexedCompositionChain,
    entry: &dyn Fn(isize, isize) -> Result<Subgroup>,
) -> Result<()> {
    // Cell endpoints match the matrix entries, bounds depend only on the
    // row sum, and every step is simple and normal-in-next.
    for cell in &chain.cells {
        let col = cell.col as isize;
        let bottom = entry(col, cell.row)?;
        let top = entry(col, cell.row + 1)?;
        if cell.terms.first().unwrap().members() != bottom.members()
            || cell.terms.last().unwrap().members() != top.members()
        {
            return Err(Error::VerificationFailed(format!(
                "cell ({},{}) endpoints disagree with the matrix entries",
                cell.col, cell.row
            )));
        }
        if chain.sigma_bounds.get(&(col + cell.row)) != Some(&cell.steps()) {
            return Err(Error::VerificationFailed(format!(
                "cell ({},{}) step count differs from its row-sum bound",
                cell.col, cell.row
            )));
        }
        for w in cell.terms.windows(2) {
            if !w[0].is_normal_in(&w[1])? || !is_simple_step(&w[0], &w[1]) {
                return Err(Error::VerificationFailed(format!(
                    "cell ({},{}) contains a non-simple or non-normal step",
                    cell.col, cell.row
                )));
            }
        }
    }
    // The flattened chain runs from the trivial group to the branch group.
    let flat = chain.flattened();
    if flat.first().unwrap().1.order() != 1
        || flat.last().unwrap().1.order() != section.branch_group().order()
    {
        return Err(Error::VerificationFailed(
            "indexed chain does not run from the trivial group to the branch group".into(),
        ));
    }
    for w in flat.windows(2) {
        if !w[0].1.is_subgroup_of(&w[1].1) {
            return Err(Error::VerificationFailed(
                "indexed chain is not ascending".into(),
            ));
        }
    }
    // Anti-diagonal factors are pairwise isomorphic: equal orders always,
    // an explicit isomorphism at small orders.
    for (&row_sum, &bound) in &chain.sigma_bounds {
        for sigma in 1..=bound {
            let reference = quotient_of(chain, 0, row_sum, sigma)?;
            for col in 1..=(row_sum + 1).min(chain.memory as isize) {
                if col < 0 {
                    continue;
                }
                let factor = quotient_of(chain, col as usize, row_sum - col, sigma)?;
                if factor.order() != reference.order() {
                    return Err(Error::VerificationFailed(format!(
                        "anti-diagonal factor orders differ at row sum {row_sum}, sigma {sigma}"
                    )));
                }
                if factor.order() <= ISO_ORDER_CAP
                    && find_isomorphism(&reference.group, &factor.group)?.is_none()
                {
                    return Err(Error::VerificationFailed(format!(
                        "anti-diagonal factors not isomorphic at row sum {row_sum}, sigma {sigma}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn quotient_of(
    chain: &IndexedCompositionChain,
    col: usize,
    row: isize,
    sigma: usize,
) -> Result<QuotientData> {
    let cell = chain.cell(col, row).ok_or_else(|| {
        Error::VerificationFailed(format!("missing cell ({col},{row}) in the indexed chain"))
    })?;
    QuotientData::new(&cell.terms[sigma], &cell.terms[sigma - 1])
}

/// The composition chain of the splitting chain built along the next-set
/// pushforward.
pub fn splitting_composition_chain(section: &TrellisSection) -> Result<IndexedCompositionChain> {
    composition_chain(section, false)
}

/// The dual chain: previous-set pushforward of the merging column.
pub fn merging_composition_chain(section: &TrellisSection) -> Result<IndexedCompositionChain> {
    composition_chain(section, true)
}

/// One term of a Schreier array page.
#[derive(Debug, Clone)]
pub struct PageTerm {
    pub rho: isize,
    pub sigma: usize,
    pub group: Subgroup,
}

/// The Schreier array: per-page subchains obtained by intersecting each
/// column with the dual composition chain, glued into one composition
/// chain of the branch group.
#[derive(Debug)]
pub struct SchreierArrayPages {
    pub memory: usize,
    /// Pages keyed by (column, page index), both in `0..=memory` with
    /// column + page <= memory; beyond that the page degenerates to the
    /// column's splitting group and is not materialized.
    pub pages: BTreeMap<(usize, usize), Vec<PageTerm>>,
    /// The glued, deduplicated chain from the trivial group to the branch
    /// group, with page-coordinate labels.
    pub full_chain: Vec<(String, Subgroup)>,
    /// Orders of the simple factors of `full_chain`, in chain order.
    pub factor_orders: Vec<usize>,
    /// How many cross-page isomorphisms were verified.
    pub verified_isos: usize,
}

pub fn schreier_array(section: &TrellisSection) -> Result<SchreierArrayPages> {
    let memory = section.memory()?;
    let dual_chain = merging_composition_chain(section)?;
    let chains = section.chains()?;
    let g = section.branch_group();

    let mut pages = BTreeMap::new();
    for col in 0..=memory {
        for page in 0..=(memory - col) {
            let mut terms = Vec::new();
            for cell in dual_chain.cells.iter().filter(|c| c.col == page) {
                for (sigma, y_term) in cell.terms.iter().enumerate() {
                    let group = chains.splitting_at(col as isize - 1).product_subgroup(
                        &chains.splitting_at(col as isize).intersect(y_term),
                    );
                    terms.push(PageTerm {
                        rho: cell.row,
                        sigma,
                        group,
                    });
                }
            }
            // Page endpoints agree with the coarse matrix entries.
            let bottom = matrix_entry(section, col as isize, page as isize - 1)?;
            let top = matrix_entry(section, col as isize, page as isize)?;
            if terms.first().unwrap().group.members() != bottom.members()
                || terms.last().unwrap().group.members() != top.members()
            {
                return Err(Error::VerificationFailed(format!(
                    "page ({col},{page}) endpoints disagree with the matrix entries"
                )));
            }
            pages.insert((col, page), terms);
        }
    }

    // Glue pages column-major into one chain.
    let mut full_chain: Vec<(String, Subgroup)> = vec![("1".into(), Subgroup::trivial(g))];
    for col in 0..=memory {
        for page in 0..=(memory - col) {
            for term in &pages[&(col, page)] {
                let last = &full_chain.last().unwrap().1;
                if !last.is_subgroup_of(&term.group) {
                    return Err(Error::VerificationFailed(format!(
                        "page ({col},{page}) breaks the ascending chain"
                    )));
                }
                if last.order() < term.group.order() {
                    full_chain.push((
                        format!("({col},{page},{},{})", term.rho, term.sigma),
                        term.group.clone(),
                    ));
                }
            }
        }
    }
    if full_chain.last().unwrap().1.order() != g.order() {
        return Err(Error::VerificationFailed(
            "page matrix chain stops short of the branch group".into(),
        ));
    }
    let mut factor_orders = Vec::new();
    for w in full_chain.windows(2) {
        if !w[0].1.is_normal_in(&w[1].1)? || !is_simple_step(&w[0].1, &w[1].1) {
            return Err(Error::VerificationFailed(format!(
                "page matrix step {} -> {} is not a simple normal step",
                w[0].0, w[1].0
            )));
        }
        factor_orders.push(w[1].1.order() / w[0].1.order());
    }
    // Its factor multiset is the Jordan-Hoelder multiset of the branch group.
    let mut from_pages: Vec<SimpleFactor> = full_chain
        .windows(2)
        .map(|w| {
            let (q, _) = w[1].1.quotient(&w[0].1)?;
            Ok(SimpleFactor {
                order: q.order(),
                abelian: q.is_abelian(),
            })
        })
        .collect::<Result<_>>()?;
    from_pages.sort();
    if from_pages != jordan_holder_factors(&Subgroup::full(g))? {
        return Err(Error::VerificationFailed(
            "page matrix factors differ from the Jordan-Hoelder multiset".into(),
        ));
    }

    // Cross-page isomorphisms: each refined step of a page maps onto the
    // matching step one column right and one page down.
    let mut verified_isos = 0;
    for col in 0..memory {
        for page in 1..=(memory - col) {
            for cell in dual_chain.cells.iter().filter(|c| c.col == page) {
                for sigma in 1..=cell.steps() {
                    let source_hi = &dual_chain.term(page, cell.row, sigma).unwrap();
                    let source_lo = &dual_chain.term(page, cell.row, sigma - 1).unwrap();
                    let target_cell = dual_chain.cell(page - 1, cell.row + 1);
                    let (target_hi, target_lo) = match target_cell {
                        Some(c) => (&c.terms[sigma], &c.terms[sigma - 1]),
                        None => continue,
                    };
                    let ci = col as isize;
                    let dom_upper = chains
                        .splitting_at(ci - 1)
                        .product_subgroup(&chains.splitting_at(ci).intersect(source_hi));
                    let dom_lower = chains
                        .splitting_at(ci - 1)
                        .product_subgroup(&chains.splitting_at(ci).intersect(source_lo));
                    let cod_upper = chains
                        .splitting_at(ci)
                        .product_subgroup(&chains.splitting_at(ci + 1).intersect(target_hi));
                    let cod_lower = chains
                        .splitting_at(ci)
                        .product_subgroup(&chains.splitting_at(ci + 1).intersect(target_lo));
                    next_set_iso(
                        section,
                        format!("page({col},{page})/rho={},sigma={sigma}", cell.row),
                        &dom_upper,
                        &dom_lower,
                        &cod_upper,
                        &cod_lower,
                    )?;
                    verified_isos += 1;
                }
            }
        }
    }

    Ok(SchreierArrayPages {
        memory,
        pages,
        full_chain,
        factor_orders,
        verified_isos,
    })
}

/// Solvability of the branch group next to solvability of the splitting
/// kernel; the two always agree on a controllable section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolvabilityCheck {
    pub branch_solvable: bool,
    pub kernel_solvable: bool,
    pub agree: bool,
}

pub fn solvability_equivalence(section: &TrellisSection) -> Result<SolvabilityCheck> {
    section.chains()?;
    let branch_solvable = is_solvable(&Subgroup::full(section.branch_group()));
    let kernel_solvable = {
        let series = derived_series(&section.left_kernel());
        series.last().unwrap().is_trivial()
    };
    Ok(SolvabilityCheck {
        branch_solvable,
        kernel_solvable,
        agree: branch_solvable == kernel_solvable,
    })
}

/// The refined generator table: one family per simple step of the dual
/// composition chain's first-column pages, so every nontrivial cell
/// transversal has simple-factor size (prime size when the branch group
/// is solvable). Plugs into the encoder unchanged.
pub fn refined_representative_array(section: &TrellisSection) -> Result<GeneratorTable> {
    let memory = section.memory()?;
    let chains = section.chains()?;
    let dual_chain = merging_composition_chain(section)?;
    let mut specs = Vec::new();
    for span in 0..=memory {
        for cell in dual_chain.cells.iter().filter(|c| c.col == span) {
            for sigma in 1..=cell.steps() {
                let mut windows = Vec::with_capacity(span + 1);
                let mut bounds = Vec::with_capacity(span + 1);
                for offset in 0..=span {
                    let hi = dual_chain
                        .term(span - offset, cell.row + offset as isize, sigma)
                        .ok_or_else(|| {
                            Error::VerificationFailed(format!(
                                "missing dual term for span {span} offset {offset}"
                            ))
                        })?;
                    let lo = dual_chain
                        .term(span - offset, cell.row + offset as isize, sigma - 1)
                        .unwrap();
                    let oi = offset as isize;
                    windows.push(chains.splitting_at(oi).intersect(hi));
                    bounds.push((
                        chains
                            .splitting_at(oi - 1)
                            .product_subgroup(&chains.splitting_at(oi).intersect(lo)),
                        chains
                            .splitting_at(oi - 1)
                            .product_subgroup(&chains.splitting_at(oi).intersect(hi)),
                    ));
                }
                specs.push(crate::generators::FamilySpec {
                    span,
                    label: format!("span {span} ({},{sigma})", cell.row),
                    windows,
                    bounds,
                });
            }
        }
    }
    GeneratorTable::build(section, specs)
}
