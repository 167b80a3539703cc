//! The sliding-window encoder driven by a generator table.
//!
//! Each epoch consumes one element of the input group (the splitting
//! kernel), factorizes it along column 0 of the table into one generator
//! selection per family, and emits the input times the state branch. The
//! state branch is the chain-order product of the surviving components of
//! the selections made over the last `memory` epochs, so the machine is a
//! convolution over the table's representatives.

use crate::error::{Error, Result};
use crate::generators::GeneratorTable;
use crate::section::{PathSegment, TrellisSection};
use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct Encoder {
    table: GeneratorTable,
    input_group: crate::group::Subgroup,
    /// `window[a-1][f]` is the path index selected in family `f` exactly
    /// `a` epochs ago. Depth is always the table memory.
    window: VecDeque<Vec<usize>>,
    state_branch: usize,
    time: usize,
}

impl Encoder {
    /// Fresh encoder: all-identity selections, identity state branch.
    pub fn new(table: &GeneratorTable) -> Self {
        let input_group = table.section().left_kernel();
        debug_assert!(table.families().iter().all(|f| {
            f.paths[0]
                .branches()
                .iter()
                .all(|&b| b == table.section().branch_group().identity())
        }));
        let window = vec![vec![0usize; table.families().len()]; table.memory()].into();
        Encoder {
            table: table.clone(),
            input_group,
            window,
            state_branch: table.section().branch_group().identity(),
            time: 0,
        }
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn section(&self) -> &TrellisSection {
        self.table.section()
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// The branch the encoder would emit for the identity input: the
    /// sliding-block summary of the last `memory` epochs.
    pub fn state_branch(&self) -> usize {
        self.state_branch
    }

    /// Selections for one input: the path index per family read off the
    /// column-zero factorization.
    fn select(&self, input: usize) -> Result<Vec<usize>> {
        let g = self.section().branch_group();
        let mut selection = vec![0usize; self.table.families().len()];
        let mut rest = input;
        let cells: Vec<_> = self.table.column_zero_cells().collect();
        for cell in cells.into_iter().rev() {
            let pos = cell
                .transversal
                .iter()
                .position(|&t| cell.lower.contains(g.mul(rest, g.inv(t))))
                .ok_or(Error::InvalidInput(input))?;
            selection[cell.family] = pos;
            rest = g.mul(rest, g.inv(cell.transversal[pos]));
        }
        if rest != g.identity() {
            return Err(Error::InvalidInput(input));
        }
        Ok(selection)
    }

    fn recompute_state(&mut self) {
        let g = self.section().branch_group();
        let mut acc = g.identity();
        for cell in self.table.cells() {
            if cell.offset == 0 {
                continue;
            }
            let selection = &self.window[cell.offset - 1];
            let component = self.table.families()[cell.family].paths[selection[cell.family]]
                .branch(cell.offset);
            acc = g.mul(acc, component);
        }
        self.state_branch = acc;
    }

    /// One epoch: emits `input * state` and slides the window.
    pub fn step(&mut self, input: usize) -> Result<usize> {
        if input >= self.section().branch_group().order() || !self.input_group.contains(input)
        {
            return Err(Error::InvalidInput(input));
        }
        let selection = self.select(input)?;
        let emitted = self
            .section()
            .branch_group()
            .mul(input, self.state_branch);
        self.window.push_front(selection);
        if self.window.len() > self.table.memory() {
            self.window.pop_back();
        }
        self.recompute_state();
        self.time += 1;
        Ok(emitted)
    }

    /// The per-age factors of the emitted product: entry 0 is the identity
    /// placeholder for the not-yet-chosen input, entry `a` collects the
    /// age-`a` components in chain order. Their ordered product is the
    /// state branch.
    pub fn register_view(&self) -> Vec<usize> {
        let g = self.section().branch_group();
        let mut factors = vec![g.identity(); self.table.memory() + 1];
        for cell in self.table.cells() {
            if cell.offset == 0 {
                continue;
            }
            let selection = &self.window[cell.offset - 1];
            let component = self.table.families()[cell.family].paths[selection[cell.family]]
                .branch(cell.offset);
            factors[cell.offset] = g.mul(factors[cell.offset], component);
        }
        factors
    }
}

/// Inputs that make a fresh encoder emit `branch` on the final step: one
/// input per age from the memory down to zero, read off the branch's
/// chain-coset factorization.
pub fn seed_inputs(table: &GeneratorTable, branch: usize) -> Result<Vec<usize>> {
    let g = table.section().branch_group();
    let factorization = table.factorize(branch)?;
    let memory = table.memory();
    let mut inputs = Vec::with_capacity(memory + 1);
    for age in (0..=memory).rev() {
        let mut x = g.identity();
        for cell in table.column_zero_cells() {
            let family = &table.families()[cell.family];
            if family.span < age {
                continue;
            }
            // Which member must be active at this age to contribute the
            // factorization part at offset `age`?
            let target_cell = table
                .cells()
                .iter()
                .position(|c| c.family == cell.family && c.offset == age)
                .expect("family spans the offset");
            let pos = factorization.positions[target_cell];
            x = g.mul(x, family.paths[pos].branch(0));
        }
        inputs.push(x);
    }
    Ok(inputs)
}

/// Result of tracking a target path.
#[derive(Debug, Clone)]
pub struct TrackResult {
    /// Inputs fed before the target's first epoch to seed the state.
    pub preroll: Vec<usize>,
    /// Inputs aligned with the target branches.
    pub inputs: Vec<usize>,
    pub reproduced: PathSegment,
    pub exact: bool,
}

/// Drives an encoder so it reproduces `target` exactly: the state is
/// seeded from the factorization of the first branch, and from then on
/// each correction input is the target branch divided by the state.
pub fn track(table: &GeneratorTable, target: &PathSegment, initial: usize) -> Result<TrackResult> {
    if target.is_empty() {
        return Err(Error::IndexOutOfRange("cannot track an empty path".into()));
    }
    let section = table.section();
    section.validate_path(target)?;
    if target.branch(0) != initial {
        return Err(Error::InitialMismatch);
    }
    let g = section.branch_group();
    let mut encoder = Encoder::new(table);
    let seeds = seed_inputs(table, initial)?;
    let (preroll, head) = seeds.split_at(seeds.len() - 1);
    for &x in preroll {
        encoder.step(x)?;
    }
    let mut inputs = vec![head[0]];
    let mut reproduced = vec![encoder.step(head[0])?];
    if reproduced[0] != initial {
        return Err(Error::VerificationFailed(
            "seeding did not reproduce the initial branch".into(),
        ));
    }
    for t in 1..target.len() {
        let correction = g.mul(target.branch(t), g.inv(encoder.state_branch()));
        // Guaranteed to lie in the input group for a valid target path.
        let emitted = encoder.step(correction).map_err(|_| {
            Error::VerificationFailed(format!(
                "correction at epoch {t} left the input group"
            ))
        })?;
        inputs.push(correction);
        reproduced.push(emitted);
    }
    let reproduced = PathSegment::new(reproduced);
    let exact = reproduced == *target;
    Ok(TrackResult {
        preroll: preroll.to_vec(),
        inputs,
        reproduced,
        exact,
    })
}

/// Feeds a single generator's first component into a fresh encoder and
/// returns the emitted path: the stored generator extended by identities.
pub fn impulse_response(table: &GeneratorTable, span: usize, which: usize) -> Result<PathSegment> {
    let generators = table.generators_at(span)?;
    let generator = generators
        .get(which)
        .ok_or_else(|| Error::IndexOutOfRange(format!("no generator {which} at span {span}")))?
        .clone();
    let g = table.section().branch_group();
    let mut encoder = Encoder::new(table);
    let mut emitted = vec![encoder.step(generator.branch(0))?];
    for _ in 0..span + table.memory() {
        emitted.push(encoder.step(g.identity())?);
    }
    for (j, &b) in emitted.iter().enumerate() {
        let expect = if j <= span {
            generator.branch(j)
        } else {
            g.identity()
        };
        if b != expect {
            return Err(Error::VerificationFailed(format!(
                "impulse response differs from the generator at offset {j}"
            )));
        }
    }
    Ok(PathSegment::new(emitted))
}

/// For two equal-length paths with the same first branch: at each later
/// offset, the least splitting-chain index whose coset already contains
/// both branches (-1 when they agree exactly).
pub fn degradation_profile(
    section: &TrellisSection,
    a: &PathSegment,
    b: &PathSegment,
) -> Result<Vec<isize>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    section.validate_path(a)?;
    section.validate_path(b)?;
    if a.is_empty() || a.branch(0) != b.branch(0) {
        return Err(Error::FirstBranchMismatch);
    }
    let chains = section.chains()?;
    let g = section.branch_group();
    let mut profile = Vec::with_capacity(a.len() - 1);
    for d in 1..a.len() {
        let diff = g.mul(b.branch(d), g.inv(a.branch(d)));
        let mut level = chains.memory as isize;
        for r in -1..=chains.memory as isize {
            if chains.splitting_at(r).contains(diff) {
                level = r;
                break;
            }
        }
        if d <= chains.memory && level > d as isize - 1 {
            return Err(Error::VerificationFailed(format!(
                "degradation level {level} at offset {d} exceeds the bound"
            )));
        }
        profile.push(level);
    }
    Ok(profile)
}

/// All state branches reachable from the fresh encoder, by breadth-first
/// search over window configurations.
///
/// There are two state-count readings: the raw window configurations can
/// outnumber the branches, while the distinct state branches land one per
/// coset of the input group, i.e. exactly the state-group order. Both
/// counts are observable here; the returned list is the second.
pub fn reachable_states(table: &GeneratorTable) -> Result<Vec<usize>> {
    use std::collections::{BTreeSet, HashSet};
    let input_group = table.section().left_kernel();
    let mut seen_windows = HashSet::new();
    let mut states = BTreeSet::new();
    let fresh = Encoder::new(table);
    states.insert(fresh.state_branch());
    seen_windows.insert(fresh.window.clone());
    let mut queue = vec![fresh];
    while let Some(encoder) = queue.pop() {
        for x in input_group.members().iter() {
            let mut next = encoder.clone();
            next.step(x)?;
            states.insert(next.state_branch());
            if seen_windows.insert(next.window.clone()) {
                queue.push(next);
            }
        }
    }
    Ok(states.into_iter().collect())
}
