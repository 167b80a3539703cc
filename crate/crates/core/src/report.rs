//! Text reports: chain summaries, matrix grids of subgroup orders with a
//! normality legend, generator-table listings, and the composition-chain
//! report. Each renderer has a deterministic human layout and a flat
//! `key=value` machine form.

use crate::error::Result;
use crate::generators::GeneratorTable;
use crate::group::{factor_summary, jordan_holder_factors, Subgroup};
use crate::refine;
use crate::schreier;
use crate::section::TrellisSection;
use std::fmt::Write as _;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    /// Summary when passing, concrete witness when failing.
    pub detail: String,
}

impl CheckResult {
    pub fn pass(suite: &'static str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn fail(suite: &'static str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:>width$}", width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn chain_line(label: &str, groups: &[Subgroup]) -> String {
    let orders: Vec<String> = groups.iter().map(|g| g.order().to_string()).collect();
    format!("{label}: {}", orders.join(" < "))
}

/// Full analysis: controllability index, kernel chains, both matrix
/// grids, the triangular form, and the composition-length summary.
pub fn render_analysis(section: &TrellisSection, machine: bool) -> Result<String> {
    let chains = section.chains()?;
    let memory = chains.memory;
    let smf = schreier::schreier_matrix(section)?;
    let dual = schreier::dual_matrix(section)?;
    let full = Subgroup::full(section.branch_group());
    let factors = jordan_holder_factors(&full)?;
    let eta = factors.len();

    if machine {
        let mut out = String::new();
        writeln!(out, "branch_order={}", section.branch_group().order()).unwrap();
        writeln!(out, "state_order={}", section.state_group().order()).unwrap();
        writeln!(out, "memory={memory}").unwrap();
        for (i, g) in chains.splitting.iter().enumerate() {
            writeln!(out, "splitting.{i}={}", g.order()).unwrap();
        }
        for (i, g) in chains.merging.iter().enumerate() {
            writeln!(out, "merging.{i}={}", g.order()).unwrap();
        }
        writeln!(out, "matrix_controllable={}", smf.controllable).unwrap();
        writeln!(out, "dual_controllable={}", dual.controllable).unwrap();
        writeln!(out, "eta={eta}").unwrap();
        return Ok(out);
    }

    let mut out = String::new();
    writeln!(
        out,
        "section: |branches| = {}, |states| = {}, memory = {memory}",
        section.branch_group().order(),
        section.state_group().order()
    )
    .unwrap();
    writeln!(out, "{}", chain_line("splitting chain", &chains.splitting)).unwrap();
    writeln!(out, "{}", chain_line("merging chain  ", &chains.merging)).unwrap();
    let star = schreier::star_chain(section)?;
    writeln!(out, "{}", chain_line("star chain     ", &star.groups)).unwrap();
    out.push('\n');

    for (title, m) in [("refinement matrix", &smf), ("dual matrix", &dual)] {
        writeln!(
            out,
            "{title} (orders; rows top-down, controllable = {}):",
            m.controllable
        )
        .unwrap();
        let rows: Vec<Vec<String>> = m
            .order_grid()
            .into_iter()
            .map(|r| r.into_iter().map(|o| o.to_string()).collect())
            .collect();
        out.push_str(&grid(&rows));
        out.push('\n');
    }

    let cf = schreier::controllable_form(&smf)?;
    writeln!(out, "triangular form (orders; row = chain position):").unwrap();
    let mut rows = Vec::new();
    for row in (0..=memory as isize).rev() {
        let mut line = vec![format!("row {row}")];
        for col in 0..=memory {
            let cell = cf.columns[col]
                .iter()
                .find(|(r, _)| *r == row)
                .map(|(_, g)| g.order().to_string())
                .unwrap_or_default();
            line.push(cell);
        }
        rows.push(line);
    }
    out.push_str(&grid(&rows));
    out.push('\n');

    // Legend: cell orders are member counts; every entry of both matrices
    // is normal in the branch group on a controllable section.
    let mut all_normal = true;
    for col in 0..=memory as isize {
        for row in -1..=memory as isize {
            if !smf.entry(col, row).is_normal_in(&full)? {
                all_normal = false;
            }
        }
    }
    writeln!(out, "all matrix entries normal in branch group: {all_normal}").unwrap();
    writeln!(
        out,
        "composition length eta = {eta}, factors = {}",
        factor_summary(&factors)
    )
    .unwrap();
    Ok(out)
}

/// Generator-table listing: one block per cell, one block per span.
pub fn render_generators(table: &GeneratorTable, machine: bool) -> Result<String> {
    let check = table.eta_check()?;
    let mut out = String::new();
    if machine {
        writeln!(out, "cells={}", check.cell_count).unwrap();
        writeln!(out, "nontrivial_cells={}", check.nontrivial_cell_count).unwrap();
        writeln!(out, "cells_product={}", check.cells_product).unwrap();
        writeln!(out, "eta={}", check.eta).unwrap();
        for (i, cell) in table.cells().iter().enumerate() {
            writeln!(
                out,
                "cell.{i}={};{};{}",
                cell.offset,
                cell.span,
                cell.transversal
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
            .unwrap();
        }
        for family in table.families() {
            for (i, path) in family.paths.iter().enumerate() {
                writeln!(
                    out,
                    "generator.{}.{i}={}",
                    family.span,
                    path.branches()
                        .iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
                .unwrap();
            }
        }
        return Ok(out);
    }
    writeln!(
        out,
        "generator table: {} cells ({} nontrivial), cell product {}, eta {}",
        check.cell_count, check.nontrivial_cell_count, check.cells_product, check.eta
    )
    .unwrap();
    writeln!(out, "\ncells (offset, quotient orders, representatives):").unwrap();
    for cell in table.cells() {
        writeln!(
            out,
            "  [{}] {}/{} -> {:?}",
            cell.label,
            cell.upper.order(),
            cell.lower.order(),
            cell.transversal
        )
        .unwrap();
    }
    writeln!(out, "\ngenerator paths by span:").unwrap();
    for family in table.families() {
        writeln!(out, "  {}:", family.label).unwrap();
        for path in &family.paths {
            writeln!(out, "    {:?}", path.branches()).unwrap();
        }
    }
    Ok(out)
}

/// Composition-chain report: the indexed chain terms, the page grid, the
/// factor multiset, and the solvability verdict.
pub fn render_compose(section: &TrellisSection, machine: bool) -> Result<String> {
    let chain = refine::splitting_composition_chain(section)?;
    let pages = refine::schreier_array(section)?;
    let solv = refine::solvability_equivalence(section)?;
    let refined = refine::refined_representative_array(section)?;
    let check = refined.eta_check()?;
    let factors = jordan_holder_factors(&Subgroup::full(section.branch_group()))?;

    let mut out = String::new();
    if machine {
        writeln!(out, "chain_length={}", chain.length()).unwrap();
        writeln!(out, "page_chain_length={}", pages.factor_orders.len()).unwrap();
        writeln!(out, "verified_page_isos={}", pages.verified_isos).unwrap();
        writeln!(out, "branch_solvable={}", solv.branch_solvable).unwrap();
        writeln!(out, "kernel_solvable={}", solv.kernel_solvable).unwrap();
        writeln!(out, "solvability_agree={}", solv.agree).unwrap();
        writeln!(out, "refined_cells_product={}", check.cells_product).unwrap();
        writeln!(out, "refined_nontrivial_cells={}", check.nontrivial_cell_count).unwrap();
        writeln!(out, "eta={}", check.eta).unwrap();
        return Ok(out);
    }
    writeln!(out, "indexed composition chain (column, row, sigma, order):").unwrap();
    for (label, group) in chain.flattened() {
        writeln!(out, "  {label} order={}", group.order()).unwrap();
    }
    writeln!(out, "\npage grid (steps per page):").unwrap();
    let memory = pages.memory;
    let mut rows = Vec::new();
    for page in (0..=memory).rev() {
        let mut line = vec![format!("page {page}")];
        for col in 0..=memory {
            line.push(match pages.pages.get(&(col, page)) {
                Some(terms) => {
                    let steps = terms
                        .windows(2)
                        .filter(|w| w[0].group.order() < w[1].group.order())
                        .count();
                    steps.to_string()
                }
                None => String::new(),
            });
        }
        rows.push(line);
    }
    out.push_str(&grid(&rows));
    writeln!(
        out,
        "\npage-matrix chain: {} simple steps, factors {}",
        pages.factor_orders.len(),
        factor_summary(&factors)
    )
    .unwrap();
    writeln!(
        out,
        "verified cross-page isomorphisms: {}",
        pages.verified_isos
    )
    .unwrap();
    writeln!(
        out,
        "solvable: branch group {} / splitting kernel {} (agree: {})",
        solv.branch_solvable, solv.kernel_solvable, solv.agree
    )
    .unwrap();
    writeln!(
        out,
        "refined table: {} nontrivial cells (eta {}), cell product {}",
        check.nontrivial_cell_count, check.eta, check.cells_product
    )
    .unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analysis_report_mentions_the_memory() {
        let s = TrellisSection::shift_register(2, 2).unwrap();
        let text = render_analysis(&s, false).unwrap();
        assert!(text.contains("memory = 2"));
        assert!(text.contains("2 < 4 < 8"));
        let machine = render_analysis(&s, true).unwrap();
        assert!(machine.contains("memory=2\n"));
        assert!(machine.contains("eta=3\n"));
    }

    #[test]
    fn reports_are_deterministic() {
        let s = TrellisSection::shift_register(2, 2).unwrap();
        let t = crate::generators::representative_array(&s).unwrap();
        assert_eq!(
            render_generators(&t, false).unwrap(),
            render_generators(&t, false).unwrap()
        );
        let s2 = TrellisSection::shift_register(2, 2).unwrap();
        assert_eq!(
            render_compose(&s, true).unwrap(),
            render_compose(&s2, true).unwrap()
        );
    }
}
