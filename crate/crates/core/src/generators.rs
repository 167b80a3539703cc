//! Chain-coset generator tables: per-cell coset transversals whose
//! aligned forward extensions are the generator paths, and the unique
//! factorization of every branch along the resulting chain.
//!
//! The same machinery serves the coarse table (one cell per column/span
//! pair) and the composition-refined table (one cell per simple step);
//! only the family specifications differ.

use crate::error::{Error, Result};
use crate::group::{eta, ElemSet, Subgroup};
use crate::section::{PathSegment, TrellisSection};

/// One cell of a generator table: a single coset quotient step of the
/// factorization chain, together with its transversal. Entry `i` of the
/// transversal is branch `offset` of path `i` of the owning family.
#[derive(Debug, Clone)]
pub struct TableCell {
    /// Column of the factorization chain this cell sits in.
    pub offset: usize,
    /// Span of the owning generator family.
    pub span: usize,
    /// Index of the owning family in the table.
    pub family: usize,
    pub lower: Subgroup,
    pub upper: Subgroup,
    pub transversal: Vec<usize>,
    pub label: String,
}

/// A family of generator paths sharing one span: path `i` starts at the
/// `i`-th transversal representative of the family's offset-0 cell and
/// stays inside the prescribed component windows.
#[derive(Debug, Clone)]
pub struct GeneratorFamily {
    pub span: usize,
    pub label: String,
    pub paths: Vec<PathSegment>,
}

/// Specification of one family: component windows the path must thread
/// and the quotient bounds of the cell at each offset.
pub(crate) struct FamilySpec {
    pub span: usize,
    pub label: String,
    /// Window subgroup per offset; components are drawn from here.
    pub windows: Vec<Subgroup>,
    /// `(lower, upper)` of the chain cell per offset.
    pub bounds: Vec<(Subgroup, Subgroup)>,
}

/// A chain-coset decomposition of the branch group wired to the trellis:
/// multiplying one representative per cell in chain order reaches every
/// branch exactly once, and the per-family paths are valid trellis paths.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    section: TrellisSection,
    memory: usize,
    families: Vec<GeneratorFamily>,
    /// All cells in factorization-chain order (column-major, ascending).
    cells: Vec<TableCell>,
    /// Cell indices of column 0, ascending; these decompose the input group.
    column_zero: Vec<usize>,
}

impl GeneratorTable {
    pub(crate) fn build(section: &TrellisSection, specs: Vec<FamilySpec>) -> Result<Self> {
        let memory = section.memory()?;
        let g = section.branch_group();
        let id = g.identity();

        let mut families = Vec::with_capacity(specs.len());
        for spec in &specs {
            debug_assert_eq!(spec.windows.len(), spec.span + 1);
            debug_assert_eq!(spec.bounds.len(), spec.span + 1);
            let window0 = &spec.windows[0];
            let seed = spec.bounds[0].0.intersect(window0);
            let cosets = seed.right_cosets(window0)?;
            let mut paths = Vec::with_capacity(cosets.len());
            for &rep in &cosets.transversal {
                let mut branches = vec![rep];
                for j in 1..=spec.span {
                    let next = section
                        .next_set(&ElemSet::singleton(g.order(), branches[j - 1]))
                        .intersection(spec.windows[j].members());
                    let succ = if next.contains(id) {
                        id
                    } else {
                        next.min().ok_or_else(|| {
                            Error::VerificationFailed(format!(
                                "family {} has no successor inside its window at offset {j}",
                                spec.label
                            ))
                        })?
                    };
                    branches.push(succ);
                }
                let path = PathSegment::new(branches);
                section.validate_path(&path)?;
                paths.push(path);
            }
            families.push(GeneratorFamily {
                span: spec.span,
                label: spec.label.clone(),
                paths,
            });
        }

        // Assemble cells column-major; family order within a column is the
        // spec order, which the callers arrange to make the chain ascend.
        let mut cells = Vec::new();
        let mut column_zero = Vec::new();
        for offset in 0..=memory {
            for (fi, spec) in specs.iter().enumerate() {
                if spec.span < offset {
                    continue;
                }
                let (lower, upper) = spec.bounds[offset].clone();
                let transversal: Vec<usize> =
                    families[fi].paths.iter().map(|p| p.branch(offset)).collect();
                // The aligned components must be a transversal of the cell.
                let cosets = lower.right_cosets(&upper)?;
                if transversal.len() != cosets.len() {
                    return Err(Error::VerificationFailed(format!(
                        "cell {} offset {offset}: {} components for {} cosets",
                        spec.label,
                        transversal.len(),
                        cosets.len()
                    )));
                }
                let mut hit = vec![false; cosets.len()];
                for (&t, _) in transversal.iter().zip(0..) {
                    if !spec.windows[offset].contains(t) {
                        return Err(Error::VerificationFailed(format!(
                            "cell {} offset {offset}: component {t} escapes its window",
                            spec.label
                        )));
                    }
                    if !cosets.contains_elem(t) || hit[cosets.index_of(t)] {
                        return Err(Error::VerificationFailed(format!(
                            "cell {} offset {offset}: components do not form a transversal",
                            spec.label
                        )));
                    }
                    hit[cosets.index_of(t)] = true;
                }
                if offset == 0 {
                    column_zero.push(cells.len());
                }
                cells.push(TableCell {
                    offset,
                    span: spec.span,
                    family: fi,
                    lower,
                    upper,
                    transversal,
                    label: format!("{} @{offset}", spec.label),
                });
            }
        }

        // The cells must tile one ascending chain from 1 to the branch group.
        let mut expected_lower = Subgroup::trivial(g);
        for cell in &cells {
            if cell.lower.members() != expected_lower.members() {
                return Err(Error::VerificationFailed(format!(
                    "cell {} does not continue the factorization chain",
                    cell.label
                )));
            }
            expected_lower = cell.upper.clone();
        }
        if expected_lower.order() != g.order() {
            return Err(Error::VerificationFailed(
                "factorization chain stops short of the branch group".into(),
            ));
        }

        Ok(GeneratorTable {
            section: section.clone(),
            memory,
            families,
            cells,
            column_zero,
        })
    }

    pub fn section(&self) -> &TrellisSection {
        &self.section
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn cells(&self) -> &[TableCell] {
        &self.cells
    }

    pub fn families(&self) -> &[GeneratorFamily] {
        &self.families
    }

    pub fn column_zero_cells(&self) -> impl Iterator<Item = &TableCell> {
        self.column_zero.iter().map(|&i| &self.cells[i])
    }

    /// Generator paths of a given span, identity generator included.
    pub fn generators_at(&self, span: usize) -> Result<Vec<PathSegment>> {
        if span > self.memory {
            return Err(Error::IndexOutOfRange(format!(
                "span {span} exceeds the memory {}",
                self.memory
            )));
        }
        Ok(self
            .families
            .iter()
            .filter(|f| f.span == span)
            .flat_map(|f| f.paths.iter().cloned())
            .collect())
    }

    /// Unique chain-coset factorization of a branch: peel transversal
    /// representatives from the top of the chain, then re-multiply in
    /// chain order as a self-check.
    pub fn factorize(&self, branch: usize) -> Result<Factorization> {
        let g = self.section.branch_group();
        let mut positions = vec![0usize; self.cells.len()];
        let mut parts = vec![g.identity(); self.cells.len()];
        let mut rest = branch;
        for (ci, cell) in self.cells.iter().enumerate().rev() {
            let pos = cell
                .transversal
                .iter()
                .position(|&t| cell.lower.contains(g.mul(rest, g.inv(t))))
                .ok_or_else(|| {
                    Error::VerificationFailed(format!(
                        "no representative of cell {} peels branch {rest}",
                        cell.label
                    ))
                })?;
            positions[ci] = pos;
            parts[ci] = cell.transversal[pos];
            rest = g.mul(rest, g.inv(parts[ci]));
        }
        if rest != g.identity() {
            return Err(Error::VerificationFailed(format!(
                "peeling branch {branch} leaves a nontrivial remainder"
            )));
        }
        let product = parts.iter().fold(g.identity(), |acc, &p| g.mul(acc, p));
        if product != branch {
            return Err(Error::VerificationFailed(format!(
                "re-multiplied factorization of {branch} gives {product}"
            )));
        }
        Ok(Factorization {
            target: branch,
            positions,
            parts,
        })
    }

    /// Composition length of the branch group next to the cell-size
    /// product; the latter must equal the branch-group order.
    pub fn eta_check(&self) -> Result<EtaCheck> {
        let cells_product = self
            .cells
            .iter()
            .map(|c| c.transversal.len())
            .product::<usize>();
        Ok(EtaCheck {
            eta: eta(&Subgroup::full(self.section.branch_group()))?,
            cells_product,
            cell_count: self.cells.len(),
            nontrivial_cell_count: self
                .cells
                .iter()
                .filter(|c| c.transversal.len() > 1)
                .count(),
        })
    }
}

/// The unique decomposition of one branch along the table's chain.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub target: usize,
    /// Transversal position chosen in each cell, in chain order.
    pub positions: Vec<usize>,
    /// The representative element chosen in each cell, in chain order.
    pub parts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaCheck {
    pub eta: usize,
    pub cells_product: usize,
    pub cell_count: usize,
    pub nontrivial_cell_count: usize,
}

/// The coarse chain-coset table: one family per span `k`, its offset-`j`
/// cell being the quotient of consecutive merging-chain cells in column
/// `j` of the controllable Schreier matrix, with components drawn from
/// the window `X_j ∩ Y_{k-j}`.
pub fn representative_array(section: &TrellisSection) -> Result<GeneratorTable> {
    let memory = section.memory()?;
    let chains = section.chains()?;
    let mut specs = Vec::with_capacity(memory + 1);
    for span in 0..=memory {
        let k = span as isize;
        let mut windows = Vec::with_capacity(span + 1);
        let mut bounds = Vec::with_capacity(span + 1);
        for j in 0..=k {
            windows.push(chains.splitting_at(j).intersect(chains.merging_at(k - j)));
            bounds.push((
                crate::schreier::matrix_entry(section, j, k - j - 1)?,
                crate::schreier::matrix_entry(section, j, k - j)?,
            ));
        }
        specs.push(FamilySpec {
            span,
            label: format!("span {span}"),
            windows,
            bounds,
        });
    }
    GeneratorTable::build(section, specs)
}
