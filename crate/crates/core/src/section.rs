//! Group trellis sections: a branch group, a state group, and two
//! surjective homomorphisms picking the left and right state of each
//! branch. Everything downstream (Schreier forms, generator tables, the
//! encoders) is driven by the two kernel chains computed here.

use crate::error::{Error, Result};
use crate::group::{ElemSet, FiniteGroup, Subgroup};
use std::sync::OnceLock;

/// Branch-group order cap for the canonical builders.
pub const SECTION_ORDER_CAP: usize = crate::group::ORDER_CAP;

/// A group trellis section. Branches are elements of `branch_group`; a
/// branch `b` runs from state `left(b)` to state `right(b)`, and a branch
/// sequence is a path when adjacent states agree.
///
/// Clones share the cached chain computation state at the time of cloning;
/// all values are immutable, so this is purely a cost question.
#[derive(Debug, Clone)]
pub struct TrellisSection {
    branch_group: FiniteGroup,
    state_group: FiniteGroup,
    left: Vec<usize>,
    right: Vec<usize>,
    /// Branches with a given left state (indexed by state).
    left_fiber: Vec<ElemSet>,
    /// Branches with a given right state (indexed by state).
    right_fiber: Vec<ElemSet>,
    chains: OnceLock<Result<ChainPair>>,
}

impl TrellisSection {
    /// Validates the two projections: both must be homomorphisms onto the
    /// state group.
    pub fn from_parts(
        branch_group: FiniteGroup,
        state_group: FiniteGroup,
        left: Vec<usize>,
        right: Vec<usize>,
    ) -> Result<Self> {
        let nb = branch_group.order();
        let ns = state_group.order();
        if left.len() != nb || right.len() != nb {
            return Err(Error::LengthMismatch(left.len().max(right.len()), nb));
        }
        for (name, proj) in [("left", &left), ("right", &right)] {
            if let Some(&bad) = proj.iter().find(|&&s| s >= ns) {
                return Err(Error::NotHomomorphism(format!(
                    "{name} projection maps outside the state group (state {bad})"
                )));
            }
            for a in 0..nb {
                for b in 0..nb {
                    if proj[branch_group.mul(a, b)] != state_group.mul(proj[a], proj[b]) {
                        return Err(Error::NotHomomorphism(format!(
                            "{name} projection fails on branch pair ({a},{b})"
                        )));
                    }
                }
            }
            let mut seen = ElemSet::empty(ns);
            for &s in proj.iter() {
                seen.insert(s);
            }
            if seen.len() != ns {
                return Err(Error::NotSubdirect(format!(
                    "{name} projection reaches only {} of {} states",
                    seen.len(),
                    ns
                )));
            }
        }
        let mut left_fiber = vec![ElemSet::empty(nb); ns];
        let mut right_fiber = vec![ElemSet::empty(nb); ns];
        for b in 0..nb {
            left_fiber[left[b]].insert(b);
            right_fiber[right[b]].insert(b);
        }
        Ok(TrellisSection {
            branch_group,
            state_group,
            left,
            right,
            left_fiber,
            right_fiber,
            chains: OnceLock::new(),
        })
    }

    /// The canonical example family: branches are `(x, s_1 .. s_m)` over
    /// `Z_p`, the left state reads `(s_1 .. s_m)` and the right state
    /// `(x, s_1 .. s_{m-1})`, so the register shifts one digit per epoch.
    pub fn shift_register(p: usize, m: usize) -> Result<Self> {
        if p < 2 || m < 1 {
            return Err(Error::IndexOutOfRange(format!(
                "shift register needs p >= 2 and m >= 1, got p={p} m={m}"
            )));
        }
        let branch_order = p
            .checked_pow(m as u32 + 1)
            .filter(|&o| o <= SECTION_ORDER_CAP)
            .ok_or(Error::TooLarge {
                order: usize::MAX,
                cap: SECTION_ORDER_CAP,
            })?;
        let zp = FiniteGroup::cyclic(p)?;
        let mut branch = zp.clone();
        for _ in 0..m {
            branch = FiniteGroup::direct_product(&branch, &zp)?;
        }
        let mut state = zp.clone();
        for _ in 1..m {
            state = FiniteGroup::direct_product(&state, &zp)?;
        }
        let state_order = branch_order / p;
        let left = (0..branch_order).map(|b| b % state_order).collect();
        let right = (0..branch_order).map(|b| b / p).collect();
        Self::from_parts(branch, state, left, right)
    }

    /// The complete section on `S`: every state pair is a branch.
    pub fn complete(state: FiniteGroup) -> Result<Self> {
        let branch = FiniteGroup::direct_product(&state, &state)?;
        let n = state.order();
        let left = (0..n * n).map(|b| b / n).collect();
        let right = (0..n * n).map(|b| b % n).collect();
        Self::from_parts(branch, state, left, right)
    }

    pub fn trivial() -> Self {
        Self::complete(FiniteGroup::trivial()).expect("trivial section is valid")
    }

    pub fn branch_group(&self) -> &FiniteGroup {
        &self.branch_group
    }

    pub fn state_group(&self) -> &FiniteGroup {
        &self.state_group
    }

    pub fn left_state(&self, branch: usize) -> usize {
        self.left[branch]
    }

    pub fn right_state(&self, branch: usize) -> usize {
        self.right[branch]
    }

    pub fn left_map(&self) -> &[usize] {
        &self.left
    }

    pub fn right_map(&self) -> &[usize] {
        &self.right
    }

    /// Kernel of the left projection: the branches splitting from the
    /// identity state.
    pub fn left_kernel(&self) -> Subgroup {
        Subgroup::new(
            &self.branch_group,
            self.left_fiber[self.state_group.identity()].clone(),
        )
        .expect("kernel of a homomorphism is a subgroup")
    }

    /// Kernel of the right projection: the branches merging to the
    /// identity state.
    pub fn right_kernel(&self) -> Subgroup {
        Subgroup::new(
            &self.branch_group,
            self.right_fiber[self.state_group.identity()].clone(),
        )
        .expect("kernel of a homomorphism is a subgroup")
    }

    /// Branches that can follow a branch of `U` in a valid path. Always a
    /// union of cosets of the left kernel.
    pub fn next_set(&self, u: &ElemSet) -> ElemSet {
        let mut states = ElemSet::empty(self.state_group.order());
        for b in u.iter() {
            states.insert(self.right[b]);
        }
        let mut out = ElemSet::empty(self.branch_group.order());
        for s in states.iter() {
            out.union_with(&self.left_fiber[s]);
        }
        out
    }

    /// Branches that can precede a branch of `U`; dual to [`next_set`].
    pub fn prev_set(&self, u: &ElemSet) -> ElemSet {
        let mut states = ElemSet::empty(self.state_group.order());
        for b in u.iter() {
            states.insert(self.left[b]);
        }
        let mut out = ElemSet::empty(self.branch_group.order());
        for s in states.iter() {
            out.union_with(&self.right_fiber[s]);
        }
        out
    }

    /// `prev_set` cut down to the splitting group one step earlier:
    /// the preceding branches of `U` that already split from the identity
    /// `j` epochs ago.
    pub fn prev_in_splitting(&self, j: usize, u: &ElemSet) -> Result<ElemSet> {
        let chains = self.chains()?;
        if j + 1 > chains.memory {
            return Err(Error::IndexOutOfRange(format!(
                "offset {j} needs splitting group {} beyond the memory {}",
                j + 1,
                chains.memory
            )));
        }
        if !u.is_subset(chains.splitting_at(j as isize + 1).members()) {
            return Err(Error::IndexOutOfRange(
                "input set is not inside the next splitting group".into(),
            ));
        }
        Ok(self
            .prev_set(u)
            .intersection(chains.splitting_at(j as isize).members()))
    }

    /// The two kernel chains and the controllability index, computed once
    /// and cached. A section whose splitting chain stabilizes below the
    /// branch group is rejected as not controllable.
    pub fn chains(&self) -> Result<&ChainPair> {
        self.chains
            .get_or_init(|| self.compute_chains())
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Controllability index: the least `l` with the `l`-th splitting
    /// group equal to the whole branch group.
    pub fn memory(&self) -> Result<usize> {
        Ok(self.chains()?.memory)
    }

    fn compute_chains(&self) -> Result<ChainPair> {
        let full = Subgroup::full(&self.branch_group);
        let mut splitting = vec![self.left_kernel()];
        while !splitting.last().unwrap().is_full() {
            let next = self.next_set(splitting.last().unwrap().members());
            if next.len() == splitting.last().unwrap().order() {
                return Err(Error::NotControllable {
                    stable: next.to_vec(),
                });
            }
            splitting.push(
                Subgroup::new(&self.branch_group, next)
                    .expect("next set of a subgroup is a subgroup"),
            );
        }
        let memory = splitting.len() - 1;
        let mut merging = vec![self.right_kernel()];
        while !merging.last().unwrap().is_full() && merging.len() <= memory {
            let prev = self.prev_set(merging.last().unwrap().members());
            merging.push(
                Subgroup::new(&self.branch_group, prev)
                    .expect("prev set of a subgroup is a subgroup"),
            );
        }
        if merging.len() != memory + 1 || !merging.last().unwrap().is_full() {
            return Err(Error::VerificationFailed(
                "merging chain does not reach the branch group at the memory index".into(),
            ));
        }
        Ok(ChainPair {
            splitting,
            merging,
            memory,
            trivial: Subgroup::trivial(&self.branch_group),
            full,
        })
    }

    /// All valid path segments of length `l + 1` whose first branch lies
    /// in `U`, in lexicographic branch order.
    pub fn join_paths(&self, u: &ElemSet, l: usize) -> Vec<PathSegment> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(l + 1);
        for b in u.iter() {
            prefix.push(b);
            self.extend_paths(l, &mut prefix, &mut out);
            prefix.pop();
        }
        out
    }

    fn extend_paths(&self, l: usize, prefix: &mut Vec<usize>, out: &mut Vec<PathSegment>) {
        if prefix.len() == l + 1 {
            out.push(PathSegment::new(prefix.clone()));
            return;
        }
        let last = *prefix.last().unwrap();
        for e in self.left_fiber[self.right[last]].iter() {
            prefix.push(e);
            self.extend_paths(l, prefix, out);
            prefix.pop();
        }
    }

    /// Checks the adjacency condition along a branch sequence.
    pub fn validate_path(&self, path: &PathSegment) -> Result<()> {
        for w in path.branches.windows(2) {
            if self.right[w[0]] != self.left[w[1]] {
                return Err(Error::InvalidPath(w[0], w[1]));
            }
        }
        Ok(())
    }

    /// Branchwise product of two equal-length segments; valid paths are
    /// closed under this because both projections are homomorphisms.
    pub fn componentwise_product(
        &self,
        a: &PathSegment,
        b: &PathSegment,
    ) -> Result<PathSegment> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        let branches = a
            .branches
            .iter()
            .zip(&b.branches)
            .map(|(&x, &y)| self.branch_group.mul(x, y))
            .collect();
        let product = PathSegment::new(branches);
        debug_assert!(self.validate_path(&product).is_ok());
        Ok(product)
    }

    /// The identity path of a given length.
    pub fn identity_path(&self, len: usize) -> PathSegment {
        PathSegment::new(vec![self.branch_group.identity(); len])
    }
}

/// The splitting chain, the merging chain, and the controllability index.
#[derive(Debug, Clone)]
pub struct ChainPair {
    /// Splitting groups indexed `0..=memory`; entry 0 is the left kernel,
    /// the last entry is the branch group.
    pub splitting: Vec<Subgroup>,
    /// Merging groups indexed `0..=memory`, dual to `splitting`.
    pub merging: Vec<Subgroup>,
    pub memory: usize,
    trivial: Subgroup,
    full: Subgroup,
}

impl ChainPair {
    /// Splitting group with index clamping: negative indices give the
    /// trivial group, indices past the memory give the branch group.
    pub fn splitting_at(&self, i: isize) -> &Subgroup {
        if i < 0 {
            &self.trivial
        } else if (i as usize) >= self.splitting.len() {
            &self.full
        } else {
            &self.splitting[i as usize]
        }
    }

    /// Merging group with the same clamping convention.
    pub fn merging_at(&self, i: isize) -> &Subgroup {
        if i < 0 {
            &self.trivial
        } else if (i as usize) >= self.merging.len() {
            &self.full
        } else {
            &self.merging[i as usize]
        }
    }

    pub fn splitting_orders(&self) -> Vec<usize> {
        self.splitting.iter().map(|g| g.order()).collect()
    }

    pub fn merging_orders(&self) -> Vec<usize> {
        self.merging.iter().map(|g| g.order()).collect()
    }
}

/// A finite window of consecutive branches.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSegment {
    branches: Vec<usize>,
}

impl PathSegment {
    pub fn new(branches: Vec<usize>) -> Self {
        PathSegment { branches }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branch(&self, i: usize) -> usize {
        self.branches[i]
    }

    pub fn branches(&self) -> &[usize] {
        &self.branches
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sr22() -> TrellisSection {
        TrellisSection::shift_register(2, 2).unwrap()
    }

    #[test]
    fn trivial_section_has_memory_zero() {
        let s = TrellisSection::trivial();
        assert_eq!(s.branch_group().order(), 1);
        assert_eq!(s.memory().unwrap(), 0);
        assert_eq!(s.chains().unwrap().splitting_orders(), vec![1]);
    }

    #[test]
    fn from_parts_accepts_the_z2_square() {
        // Branches (x, s) over Z2 with left = s and right = x.
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let b = FiniteGroup::direct_product(&z2, &z2).unwrap();
        let left = vec![0, 1, 0, 1];
        let right = vec![0, 0, 1, 1];
        let s = TrellisSection::from_parts(b, z2, left, right).unwrap();
        assert_eq!(s.memory().unwrap(), 1);
    }

    #[test]
    fn from_parts_rejects_non_surjective_projection() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let b = FiniteGroup::direct_product(&z2, &z2).unwrap();
        // Both projections constant: homomorphisms but not onto.
        let err =
            TrellisSection::from_parts(b, z2, vec![0; 4], vec![0; 4]).unwrap_err();
        assert!(matches!(err, Error::NotSubdirect(_)));
    }

    #[test]
    fn from_parts_rejects_non_homomorphism() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let b = FiniteGroup::direct_product(&z2, &z2).unwrap();
        let err = TrellisSection::from_parts(b, z2, vec![0, 1, 1, 0], vec![1, 0, 0, 1])
            .unwrap_err();
        assert!(matches!(err, Error::NotHomomorphism(_)));
    }

    #[test]
    fn shift_register_sizes() {
        let s = TrellisSection::shift_register(2, 1).unwrap();
        assert_eq!((s.branch_group().order(), s.state_group().order()), (4, 2));
        let s = sr22();
        assert_eq!((s.branch_group().order(), s.state_group().order()), (8, 4));
        let s = TrellisSection::shift_register(3, 1).unwrap();
        assert_eq!((s.branch_group().order(), s.state_group().order()), (9, 3));
    }

    #[test]
    fn sr22_kernels_and_chain() {
        let s = sr22();
        // Branch (x, s1, s2) has index 4x + 2 s1 + s2.
        assert_eq!(s.left_kernel().members().to_vec(), vec![0, 4]);
        assert_eq!(s.right_kernel().members().to_vec(), vec![0, 1]);
        let chains = s.chains().unwrap();
        assert_eq!(chains.memory, 2);
        assert_eq!(chains.splitting_orders(), vec![2, 4, 8]);
        assert_eq!(chains.merging_orders(), vec![2, 4, 8]);
        // The next set of the left kernel is the next splitting group.
        let n = s.next_set(s.left_kernel().members());
        assert_eq!(n.to_vec(), chains.splitting_at(1).members().to_vec());
        assert_eq!(n.to_vec(), vec![0, 2, 4, 6]);
        // Dually for the merging side.
        let p = s.prev_set(s.right_kernel().members());
        assert_eq!(p.to_vec(), chains.merging_at(1).members().to_vec());
        assert_eq!(p.to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn sr22_kernel_product_and_quotient() {
        let s = sr22();
        // {000,100} * {000,010} expands to the four even-last-digit
        // branches.
        let chains = s.chains().unwrap();
        let x1y1 = chains.splitting_at(1).intersect(chains.merging_at(1));
        let (prod, is_group) = crate::group::product_set(
            s.branch_group(),
            s.left_kernel().members(),
            x1y1.members(),
        );
        assert_eq!(prod.to_vec(), vec![0, 2, 4, 6]);
        assert!(is_group);
        // The branch group modulo the left kernel is the Klein four-group.
        let full = Subgroup::full(s.branch_group());
        let (q, _) = full.quotient(&s.left_kernel()).unwrap();
        assert!(
            crate::group::find_isomorphism(&q, &FiniteGroup::klein_four())
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn sr22_intersections_match_the_digit_picture() {
        let s = sr22();
        let chains = s.chains().unwrap();
        let x1 = chains.splitting_at(1);
        let y1 = chains.merging_at(1);
        let y0 = chains.merging_at(0);
        assert_eq!(x1.intersect(y1).order(), 2);
        assert_eq!(x1.intersect(y0).order(), 1);
    }

    #[test]
    fn complete_s3_chains() {
        let s = TrellisSection::complete(FiniteGroup::symmetric3()).unwrap();
        assert_eq!(s.branch_group().order(), 36);
        let chains = s.chains().unwrap();
        assert_eq!(chains.memory, 1);
        assert_eq!(chains.splitting_at(0).order(), 6);
        assert_eq!(chains.merging_at(0).order(), 6);
        // Left kernel fixes the left state: branches (identity, y).
        assert!(chains
            .splitting_at(0)
            .members()
            .iter()
            .all(|b| s.left_state(b) == 0));
    }

    #[test]
    fn diagonal_section_is_not_controllable() {
        // B = Z2 embedded diagonally in S x S for S = Z2: left = right = id.
        // The projections validate fine; the splitting chain stalls at the
        // trivial group.
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let s =
            TrellisSection::from_parts(z2.clone(), z2, vec![0, 1], vec![0, 1]).unwrap();
        match s.chains() {
            Err(Error::NotControllable { stable }) => assert_eq!(stable, vec![0]),
            other => panic!("expected NotControllable, got {other:?}"),
        }
    }

    #[test]
    fn next_set_of_empty_is_empty() {
        let s = sr22();
        assert!(s.next_set(&ElemSet::empty(8)).is_empty());
    }

    #[test]
    fn prev_in_splitting_on_sr22() {
        let s = sr22();
        let chains = s.chains().unwrap();
        let x1 = chains.splitting_at(1).members().clone();
        let back = s.prev_in_splitting(0, &x1).unwrap();
        assert_eq!(back.to_vec(), chains.splitting_at(0).members().to_vec());
        // A single branch pulls back to one coset of the (here trivial)
        // intersection of the two kernels.
        let single = ElemSet::singleton(8, 2);
        let back = s.prev_in_splitting(0, &single).unwrap();
        assert_eq!(back.to_vec(), vec![4]);
    }

    #[test]
    fn join_paths_counts_on_sr22() {
        let s = sr22();
        let chains = s.chains().unwrap();
        let x0 = chains.splitting_at(0).members();
        assert_eq!(s.join_paths(x0, 1).len(), 4);
        assert_eq!(s.join_paths(x0, 2).len(), 8);
        let identity_only = ElemSet::singleton(8, 0);
        let segs = s.join_paths(&identity_only, 1);
        assert_eq!(segs.len(), 2);
        assert!(segs
            .iter()
            .all(|p| chains.splitting_at(0).contains(p.branch(1))));
    }

    #[test]
    fn componentwise_product_is_a_valid_path() {
        let s = sr22();
        let a = PathSegment::new(vec![4, 2, 1]);
        s.validate_path(&a).unwrap();
        let sq = s.componentwise_product(&a, &a).unwrap();
        assert_eq!(sq.branches(), &[0, 0, 0]);
        let id = s.identity_path(3);
        assert_eq!(s.componentwise_product(&a, &id).unwrap(), a);
        let short = PathSegment::new(vec![0]);
        assert!(matches!(
            s.componentwise_product(&a, &short),
            Err(Error::LengthMismatch(3, 1))
        ));
    }

    /// Path-enumeration oracle for the splitting groups: branches at the
    /// final epoch of identity-started paths of each length.
    fn splitting_by_paths(s: &TrellisSection, i: usize) -> Vec<usize> {
        let identity_state = s.state_group().identity();
        let start = ElemSet::from_iter(
            s.branch_group().order(),
            s.branch_group()
                .elements()
                .filter(|&b| s.left_state(b) == identity_state),
        );
        let mut finals = ElemSet::empty(s.branch_group().order());
        for p in s.join_paths(&start, i) {
            finals.insert(p.branch(i));
        }
        finals.to_vec()
    }

    #[test]
    fn chain_iteration_matches_path_enumeration_on_sr22() {
        let s = sr22();
        let chains = s.chains().unwrap();
        for i in 0..=2 {
            assert_eq!(
                splitting_by_paths(&s, i),
                chains.splitting_at(i as isize).members().to_vec(),
                "splitting group {i}"
            );
        }
    }
}
