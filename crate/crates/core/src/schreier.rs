//! The Schreier matrix of the two kernel chains, its controllable
//! triangular form, the dual matrix, and the explicitly constructed and
//! exhaustively verified isomorphisms between its cells.

use crate::error::{Error, Result};
use crate::group::{product_set, Chain, QuotientData, Subgroup, VerifiedIsomorphism};
use crate::section::TrellisSection;
use std::collections::BTreeMap;

/// `X_{j-1} (X_j ∩ Y_k)` with clamped indices: the workhorse cell of the
/// whole construction. `dual` swaps the two chains.
fn cell(section: &TrellisSection, j: isize, k: isize, dual: bool) -> Result<Subgroup> {
    let chains = section.chains()?;
    let (lo, hi, other) = if dual {
        (
            chains.merging_at(j - 1),
            chains.merging_at(j),
            chains.splitting_at(k),
        )
    } else {
        (
            chains.splitting_at(j - 1),
            chains.splitting_at(j),
            chains.merging_at(k),
        )
    };
    Ok(lo.product_subgroup(&hi.intersect(other)))
}

/// Primal cell `X_{j-1}(X_j ∩ Y_k)`.
pub fn matrix_entry(section: &TrellisSection, j: isize, k: isize) -> Result<Subgroup> {
    cell(section, j, k, false)
}

/// Dual cell `Y_{k-1}(Y_k ∩ X_j)`.
pub fn dual_entry(section: &TrellisSection, k: isize, j: isize) -> Result<Subgroup> {
    cell(section, k, j, true)
}

/// The refinement matrix of one chain by the other: columns follow the
/// first chain, rows the second. `entry(col, row)` is
/// `X_{col-1}(X_col ∩ Y_row)` for the primal matrix and the same with the
/// chains swapped for the dual.
#[derive(Debug)]
pub struct SchreierMatrixForm {
    pub memory: usize,
    pub dual: bool,
    pub controllable: bool,
    entries: BTreeMap<(isize, isize), Subgroup>,
}

impl SchreierMatrixForm {
    fn build(section: &TrellisSection, dual: bool) -> Result<Self> {
        let memory = section.memory()? as isize;
        let mut entries = BTreeMap::new();
        for col in 0..=memory {
            for row in -1..=memory {
                entries.insert((col, row), cell(section, col, row, dual)?);
            }
        }
        let chains = section.chains()?;
        let controllable = (0..=memory).all(|col| {
            let diag = &entries[&(col, memory - col)];
            let target = if dual {
                chains.merging_at(col)
            } else {
                chains.splitting_at(col)
            };
            diag.members() == target.members()
        });
        Ok(SchreierMatrixForm {
            memory: memory as usize,
            dual,
            controllable,
            entries,
        })
    }

    pub fn entry(&self, col: isize, row: isize) -> &Subgroup {
        &self.entries[&(col, row)]
    }

    pub fn order_grid(&self) -> Vec<Vec<usize>> {
        let m = self.memory as isize;
        (-1..=m)
            .rev()
            .map(|row| (0..=m).map(|col| self.entry(col, row).order()).collect())
            .collect()
    }
}

/// Full Schreier matrix of the splitting chain refined by the merging
/// chain. Requires a controllable section; the matrix controllability
/// flag is still computed honestly from the diagonal condition.
pub fn schreier_matrix(section: &TrellisSection) -> Result<SchreierMatrixForm> {
    SchreierMatrixForm::build(section, false)
}

/// The dual matrix, obtained by interchanging the two chains.
pub fn dual_matrix(section: &TrellisSection) -> Result<SchreierMatrixForm> {
    SchreierMatrixForm::build(section, true)
}

/// Triangular reduction of a controllable matrix: the entry in column
/// `col` and row `r` is the cell with row index `r - col`, and everything
/// above the diagonal collapses onto it.
#[derive(Debug)]
pub struct ControllableForm {
    pub memory: usize,
    pub dual: bool,
    /// `columns[col]` lists `(row, subgroup)` pairs, row ascending from
    /// `col - 1` (the chain group entering the column) up to the memory.
    pub columns: Vec<Vec<(isize, Subgroup)>>,
}

pub fn controllable_form(smf: &SchreierMatrixForm) -> Result<ControllableForm> {
    if !smf.controllable {
        return Err(Error::NotControllableMatrix);
    }
    let m = smf.memory as isize;
    let mut columns = Vec::new();
    for col in 0..=m {
        let mut column = Vec::new();
        for row in (col - 1).max(0)..=m {
            column.push((row, smf.entry(col, row - col).clone()));
        }
        columns.push(column);
    }
    Ok(ControllableForm {
        memory: smf.memory,
        dual: smf.dual,
        columns,
    })
}

/// The chief-series refinement threading the column-0 products between
/// consecutive chain groups: `1, X_{-1}*, X_0, X_0*, X_1, ...` with
/// `X_{j-1}* = X_{j-1}(X_j ∩ Y_0)`, deduplicated where terms coincide.
pub fn star_chain(section: &TrellisSection) -> Result<Chain> {
    let memory = section.memory()? as isize;
    let chains = section.chains()?;
    let mut groups: Vec<Subgroup> = vec![chains.splitting_at(-1).clone()];
    let mut labels: Vec<String> = vec!["1".into()];
    for j in 0..=memory {
        let star = matrix_entry(section, j, 0)?;
        for (g, label) in [
            (star, format!("star({})", j - 1)),
            (chains.splitting_at(j).clone(), format!("split({j})")),
        ] {
            if g.members() == groups.last().unwrap().members() {
                let last = labels.last_mut().unwrap();
                *last = format!("{last}={label}");
            } else {
                groups.push(g);
                labels.push(label);
            }
        }
    }
    if groups.last().unwrap().order() != section.branch_group().order() {
        return Err(Error::VerificationFailed(
            "star chain does not reach the branch group".into(),
        ));
    }
    let full = Subgroup::full(section.branch_group());
    for (g, label) in groups.iter().zip(&labels) {
        if !g.is_normal_in(&full)? {
            return Err(Error::VerificationFailed(format!(
                "star chain term {label} is not normal in the branch group"
            )));
        }
    }
    Chain::new(groups, labels)
}

/// Smallest successor branch, preferring the identity; total because the
/// right projection is onto.
fn canonical_successor(section: &TrellisSection, branch: usize) -> usize {
    let next = section.next_set(&crate::group::ElemSet::singleton(
        section.branch_group().order(),
        branch,
    ));
    let id = section.branch_group().identity();
    if next.contains(id) {
        id
    } else {
        next.min().expect("next set is nonempty")
    }
}

/// The explicit cross-matrix isomorphism
/// `X_{j-1}(X_j∩Y_k) / X_{j-1}(X_j∩Y_{k-1})  ≅  Y_{k-1}(Y_k∩X_j) / Y_{k-1}(Y_k∩X_{j-1})`
/// built through the middle quotient `(X_j∩Y_k) / D` with
/// `D = (X_j∩Y_{k-1})(X_{j-1}∩Y_k)`, checking well-definedness on every
/// element of every coset.
pub fn zassenhaus_iso(
    section: &TrellisSection,
    j: usize,
    k: usize,
) -> Result<VerifiedIsomorphism> {
    let memory = section.memory()?;
    if j > memory || k > memory {
        return Err(Error::IndexOutOfRange(format!(
            "zassenhaus indices ({j},{k}) exceed the memory {memory}"
        )));
    }
    let (j, k) = (j as isize, k as isize);
    let chains = section.chains()?;
    let x_lo = chains.splitting_at(j - 1);
    let y_lo = chains.merging_at(k - 1);
    let middle = chains.splitting_at(j).intersect(chains.merging_at(k));

    let dom = QuotientData::new(&matrix_entry(section, j, k)?, &matrix_entry(section, j, k - 1)?)?;
    let cod = QuotientData::new(&dual_entry(section, k, j)?, &dual_entry(section, k, j - 1)?)?;

    let g = section.branch_group();
    let (d_set, d_is_group) = product_set(
        g,
        chains.splitting_at(j).intersect(chains.merging_at(k - 1)).members(),
        chains.splitting_at(j - 1).intersect(chains.merging_at(k)).members(),
    );
    if !d_is_group {
        return Err(Error::VerificationFailed(
            "zassenhaus middle normal subgroup is not a group".into(),
        ));
    }
    // The same product in the other order must give the same set.
    let (d_rev, _) = product_set(
        g,
        chains.splitting_at(j - 1).intersect(chains.merging_at(k)).members(),
        chains.splitting_at(j).intersect(chains.merging_at(k - 1)).members(),
    );
    if d_set != d_rev {
        return Err(Error::VerificationFailed(
            "zassenhaus middle subgroup differs between factor orders".into(),
        ));
    }
    let d_group = Subgroup::new(g, d_set)?;
    if !d_group.is_normal_in(&middle)? {
        return Err(Error::VerificationFailed(
            "zassenhaus middle subgroup is not normal in the middle intersection".into(),
        ));
    }
    let middle_cosets = d_group.right_cosets(&middle)?;

    // Factor every domain element as u * u_star with u in the lower
    // splitting group and u_star in the middle; the middle coset of
    // u_star must be constant on each domain coset.
    let factor_to_middle = |elem: usize| -> Result<usize> {
        for u_star in middle.members().iter() {
            if x_lo.contains(g.mul(elem, g.inv(u_star))) {
                return Ok(middle_cosets.index_of(u_star));
            }
        }
        Err(Error::VerificationFailed(format!(
            "element {elem} has no factorization through the middle subgroup"
        )))
    };
    let mut map = vec![usize::MAX; dom.order()];
    for (ci, coset) in dom.cosets.cosets.iter().enumerate() {
        let mut image = usize::MAX;
        for elem in coset.iter() {
            let mid = factor_to_middle(elem)?;
            if image == usize::MAX {
                image = mid;
            } else if image != mid {
                return Err(Error::VerificationFailed(format!(
                    "zassenhaus map is not well defined on domain coset {ci}"
                )));
            }
        }
        // Transport the middle coset into the codomain quotient.
        let rep = middle_cosets.cosets[image].min().unwrap();
        map[ci] = cod.project(rep);
    }
    // Mirror check: each codomain coset collapses to one middle coset.
    for (ci, coset) in cod.cosets.cosets.iter().enumerate() {
        let mut image = usize::MAX;
        for elem in coset.iter() {
            let mut mid = usize::MAX;
            for u_star in middle.members().iter() {
                if y_lo.contains(g.mul(elem, g.inv(u_star))) {
                    mid = middle_cosets.index_of(u_star);
                    break;
                }
            }
            if mid == usize::MAX {
                return Err(Error::VerificationFailed(format!(
                    "element {elem} has no factorization on the codomain side"
                )));
            }
            if image == usize::MAX {
                image = mid;
            } else if image != mid {
                return Err(Error::VerificationFailed(format!(
                    "zassenhaus map is not well defined on codomain coset {ci}"
                )));
            }
        }
    }
    VerifiedIsomorphism::checked(format!("zassenhaus({j},{k})"), dom, cod, map)
}

/// Quotient isomorphism by coset transport through the next-set map,
/// verified on the nose: the next set of each domain coset must equal the
/// member set of its image coset.
pub(crate) fn next_set_iso(
    section: &TrellisSection,
    name: String,
    dom_upper: &Subgroup,
    dom_lower: &Subgroup,
    cod_upper: &Subgroup,
    cod_lower: &Subgroup,
) -> Result<VerifiedIsomorphism> {
    for (label, sub, sup) in [
        ("upper", dom_upper, cod_upper),
        ("lower", dom_lower, cod_lower),
    ] {
        let pushed = section.next_set(sub.members());
        if &pushed != sup.members() {
            return Err(Error::VerificationFailed(format!(
                "{name}: next set of the {label} group does not match the codomain"
            )));
        }
    }
    let dom = QuotientData::new(dom_upper, dom_lower)?;
    let cod = QuotientData::new(cod_upper, cod_lower)?;
    let mut map = vec![usize::MAX; dom.order()];
    for (ci, coset) in dom.cosets.cosets.iter().enumerate() {
        let image_set = section.next_set(coset);
        let rep = image_set.min().unwrap();
        let image = cod.project(rep);
        if !image_set.is_subset(&cod.cosets.cosets[image]) || image_set != cod.cosets.cosets[image]
        {
            return Err(Error::VerificationFailed(format!(
                "{name}: next set of domain coset {ci} is not a codomain coset"
            )));
        }
        map[ci] = image;
    }
    VerifiedIsomorphism::checked(name, dom, cod, map)
}

/// The column-shift isomorphism `X_j / X_{j-1}* ≅ X_{j+1} / X_j` on a
/// controllable section, realized as coset-of-next-set assignment.
pub fn column_shift_iso(section: &TrellisSection, j: usize) -> Result<VerifiedIsomorphism> {
    let memory = section.memory()?;
    if j >= memory {
        return Err(Error::IndexOutOfRange(format!(
            "column shift needs column below the memory {memory}, got {j}"
        )));
    }
    let chains = section.chains()?;
    let ji = j as isize;
    let star = matrix_entry(section, ji, 0)?;
    next_set_iso(
        section,
        format!("column_shift({j})"),
        chains.splitting_at(ji),
        &star,
        chains.splitting_at(ji + 1),
        chains.splitting_at(ji),
    )
}

/// The adjacent-column isomorphism between same-row quotients of columns
/// `j` and `j+1`, through the next-set map.
pub fn adjacent_column_iso(
    section: &TrellisSection,
    j: usize,
    k: usize,
    m: usize,
) -> Result<VerifiedIsomorphism> {
    let memory = section.memory()?;
    if k < 1 || j + k > memory || m < 1 || k < m {
        return Err(Error::IndexOutOfRange(format!(
            "adjacent-column indices (j={j}, k={k}, m={m}) violate the preconditions"
        )));
    }
    let (j, k, m) = (j as isize, k as isize, m as isize);
    next_set_iso(
        section,
        format!("adjacent_column({j},{k},{m})"),
        &matrix_entry(section, j, k)?,
        &matrix_entry(section, j, k - m)?,
        &matrix_entry(section, j + 1, k - 1)?,
        &matrix_entry(section, j + 1, k - m - 1)?,
    )
}

/// The rectangle of rows `k` and `k - m` pushed `l` columns to the right:
/// recursively next-set images of the first-column pair, the per-column
/// component subgroups, and the verified column-to-column maps.
#[derive(Debug)]
pub struct RectangleFamily {
    pub span: usize,
    pub depth: usize,
    pub length: usize,
    /// `H_0 .. H_l`, the upper row.
    pub upper: Vec<Subgroup>,
    /// `J_0 .. J_l`, the lower row.
    pub lower: Vec<Subgroup>,
    /// Per-column normal subgroups of the component intersections whose
    /// cosets carry the canonical transversal representatives.
    pub component_normals: Vec<Subgroup>,
    /// Verified first-to-j-th column isomorphisms, j = 1..=l.
    pub maps: Vec<VerifiedIsomorphism>,
}

pub fn rectangle_family(
    section: &TrellisSection,
    k: usize,
    m: usize,
    l: usize,
) -> Result<RectangleFamily> {
    let memory = section.memory()?;
    if k == 0 || k > memory || m == 0 || m > k || l == 0 || l > k - m + 1 {
        return Err(Error::IndexOutOfRange(format!(
            "rectangle parameters (k={k}, m={m}, l={l}) violate the preconditions"
        )));
    }
    let chains = section.chains()?;
    let (ki, mi) = (k as isize, m as isize);
    let mut upper = vec![matrix_entry(section, 0, ki)?];
    let mut lower = vec![matrix_entry(section, 0, ki - mi)?];
    for j in 1..=l {
        let ji = j as isize;
        for (row, expect_k) in [(&mut upper, ki - ji), (&mut lower, ki - ji - mi)] {
            let pushed = section.next_set(row.last().unwrap().members());
            let expected = matrix_entry(section, ji, expect_k)?;
            if &pushed != expected.members() {
                return Err(Error::VerificationFailed(format!(
                    "rectangle row does not push forward to the expected cell at column {j}"
                )));
            }
            row.push(expected);
        }
    }
    let quotient_size = upper[0].order() / lower[0].order();
    let mut component_normals = Vec::new();
    for j in 0..=l {
        let ji = j as isize;
        if upper[j].order() / lower[j].order() != quotient_size {
            return Err(Error::VerificationFailed(format!(
                "rectangle factor order changes at column {j}"
            )));
        }
        let window = chains.splitting_at(ji).intersect(chains.merging_at(ki - ji));
        let (d_set, d_group) = product_set(
            section.branch_group(),
            chains
                .splitting_at(ji)
                .intersect(chains.merging_at(ki - ji - mi))
                .members(),
            chains
                .splitting_at(ji - 1)
                .intersect(chains.merging_at(ki - ji))
                .members(),
        );
        if !d_group {
            return Err(Error::VerificationFailed(format!(
                "component normal subgroup at column {j} is not a group"
            )));
        }
        let d = Subgroup::new(section.branch_group(), d_set)?;
        if !d.is_normal_in(&window)? {
            return Err(Error::VerificationFailed(format!(
                "component subgroup at column {j} is not normal in the window"
            )));
        }
        // Each coset of the lower row inside the upper row must meet the
        // window in exactly one coset of the component subgroup.
        let window_cosets = d.right_cosets(&window)?;
        if window_cosets.len() != quotient_size {
            return Err(Error::VerificationFailed(format!(
                "window quotient size mismatch at column {j}"
            )));
        }
        let row_cosets = lower[j].right_cosets(&upper[j])?;
        let mut seen = vec![false; row_cosets.len()];
        for wc in &window_cosets.cosets {
            let indices: Vec<usize> = wc.iter().map(|e| row_cosets.index_of(e)).collect();
            let first = indices[0];
            if indices.iter().any(|&i| i != first) || seen[first] {
                return Err(Error::VerificationFailed(format!(
                    "window cosets do not embed into row cosets at column {j}"
                )));
            }
            seen[first] = true;
        }
        component_normals.push(d);
    }
    let mut maps = Vec::new();
    for j in 1..=l {
        let dom = QuotientData::new(&upper[0], &lower[0])?;
        let cod = QuotientData::new(&upper[j], &lower[j])?;
        let mut map = vec![usize::MAX; dom.order()];
        for (ci, _) in dom.cosets.cosets.iter().enumerate() {
            let mut rep = dom.cosets.transversal[ci];
            for _ in 0..j {
                rep = canonical_successor(section, rep);
            }
            map[ci] = cod.project(rep);
        }
        maps.push(VerifiedIsomorphism::checked(
            format!("rectangle(k={k},m={m}).f(0,{j})"),
            dom,
            cod,
            map,
        )?);
    }
    Ok(RectangleFamily {
        span: k,
        depth: m,
        length: l,
        upper,
        lower,
        component_normals,
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn sr22() -> TrellisSection {
        TrellisSection::shift_register(2, 2).unwrap()
    }

    fn complete_s3() -> TrellisSection {
        TrellisSection::complete(FiniteGroup::symmetric3()).unwrap()
    }

    #[test]
    fn trivial_matrix() {
        let s = TrellisSection::trivial();
        let m = schreier_matrix(&s).unwrap();
        assert!(m.controllable);
        assert_eq!(m.order_grid(), vec![vec![1], vec![1]]);
    }

    #[test]
    fn sr22_matrix_diagonal_is_the_splitting_chain() {
        let s = sr22();
        let m = schreier_matrix(&s).unwrap();
        assert!(m.controllable);
        let diag: Vec<usize> = (0..=2).map(|j| m.entry(j, 2 - j).order()).collect();
        assert_eq!(diag, vec![2, 4, 8]);
        // Column-0 entries below the diagonal are the bare intersections.
        assert_eq!(m.entry(0, 0).order(), 1);
        assert_eq!(m.entry(0, 1).order(), 1);
        assert_eq!(m.entry(1, -1).order(), 2);
    }

    #[test]
    fn complete_s3_matrix_entry_above_diagonal() {
        let s = complete_s3();
        let m = schreier_matrix(&s).unwrap();
        assert!(m.controllable);
        assert_eq!(m.entry(1, 0).order(), 36);
        assert_eq!(m.entry(0, 0).order(), 1);
        assert_eq!(m.entry(0, 1).order(), 6);
    }

    #[test]
    fn controllability_product_identity() {
        // The product of the anti-diagonal intersections rebuilds each
        // splitting group.
        for s in [sr22(), complete_s3()] {
            let chains = s.chains().unwrap();
            let memory = chains.memory as isize;
            for j in 0..=memory {
                let mut acc = crate::group::ElemSet::singleton(
                    s.branch_group().order(),
                    s.branch_group().identity(),
                );
                for i in 0..=j {
                    let term = chains
                        .splitting_at(i)
                        .intersect(chains.merging_at(memory - i));
                    let (next, _) = product_set(s.branch_group(), &acc, term.members());
                    acc = next;
                }
                assert_eq!(&acc, chains.splitting_at(j).members());
            }
        }
    }

    #[test]
    fn controllable_form_of_sr22() {
        let s = sr22();
        let m = schreier_matrix(&s).unwrap();
        let cf = controllable_form(&m).unwrap();
        let col0: Vec<usize> = cf.columns[0].iter().map(|(_, g)| g.order()).collect();
        assert_eq!(col0, vec![1, 1, 2]);
        let top: Vec<usize> = cf
            .columns
            .iter()
            .map(|col| col.last().unwrap().1.order())
            .collect();
        assert_eq!(top, vec![2, 4, 8]);
    }

    #[test]
    fn dual_matrix_mirrors_the_primal() {
        let s = sr22();
        let d = dual_matrix(&s).unwrap();
        assert!(d.controllable);
        let diag: Vec<usize> = (0..=2).map(|k| d.entry(k, 2 - k).order()).collect();
        assert_eq!(diag, vec![2, 4, 8]);
        let s = complete_s3();
        assert!(dual_matrix(&s).unwrap().controllable);
    }

    #[test]
    fn zassenhaus_on_sr22() {
        let s = sr22();
        // Both quotients of the (0,2) cell pair have order 2.
        let iso = zassenhaus_iso(&s, 0, 2).unwrap();
        assert_eq!(iso.domain.order(), 2);
        assert_eq!(iso.codomain.order(), 2);
        // Trivial quotients give the identity map.
        let iso = zassenhaus_iso(&s, 0, 0).unwrap();
        assert_eq!(iso.domain.order(), 1);
        // Every (j,k) pair verifies.
        for j in 0..=2 {
            for k in 0..=2 {
                zassenhaus_iso(&s, j, k).unwrap();
            }
        }
    }

    #[test]
    fn zassenhaus_on_complete_s3() {
        let s = complete_s3();
        for j in 0..=1 {
            for k in 0..=1 {
                let iso = zassenhaus_iso(&s, j, k).unwrap();
                assert_eq!(iso.domain.order(), iso.codomain.order());
            }
        }
        // The two off-diagonal cells carry the full state-group factor;
        // the (1,1) pair has already collapsed to the branch group twice.
        assert_eq!(zassenhaus_iso(&s, 0, 1).unwrap().domain.order(), 6);
        assert_eq!(zassenhaus_iso(&s, 1, 0).unwrap().domain.order(), 6);
        assert_eq!(zassenhaus_iso(&s, 1, 1).unwrap().domain.order(), 1);
    }

    #[test]
    fn star_chain_orders() {
        let s = sr22();
        let chain = star_chain(&s).unwrap();
        assert_eq!(chain.orders(), vec![1, 2, 4, 8]);
        let s = complete_s3();
        let chain = star_chain(&s).unwrap();
        assert_eq!(chain.orders(), vec![1, 6, 36]);
        let s = TrellisSection::trivial();
        assert_eq!(star_chain(&s).unwrap().orders(), vec![1]);
    }

    #[test]
    fn column_shift_isos() {
        let s = sr22();
        for j in 0..2 {
            let iso = column_shift_iso(&s, j).unwrap();
            assert_eq!(iso.domain.order(), 2);
        }
        let s = complete_s3();
        let iso = column_shift_iso(&s, 0).unwrap();
        assert_eq!(iso.domain.order(), 6);
        assert!(column_shift_iso(&s, 1).is_err());
    }

    #[test]
    fn adjacent_column_isos_on_sr22() {
        let s = sr22();
        let iso = adjacent_column_iso(&s, 0, 2, 1).unwrap();
        assert_eq!(iso.domain.order(), 2);
        let iso = adjacent_column_iso(&s, 0, 2, 2).unwrap();
        assert_eq!(iso.domain.order(), 2);
        assert!(adjacent_column_iso(&s, 0, 0, 1).is_err());
    }

    #[test]
    fn rectangles() {
        let s = sr22();
        let rect = rectangle_family(&s, 2, 1, 2).unwrap();
        let upper: Vec<usize> = rect.upper.iter().map(|g| g.order()).collect();
        let lower: Vec<usize> = rect.lower.iter().map(|g| g.order()).collect();
        assert_eq!(upper, vec![2, 4, 8]);
        assert_eq!(lower, vec![1, 2, 4]);
        assert_eq!(rect.maps.len(), 2);

        let s = complete_s3();
        let rect = rectangle_family(&s, 1, 1, 1).unwrap();
        assert_eq!(rect.upper[0].order() / rect.lower[0].order(), 6);
        assert_eq!(rect.upper[1].order() / rect.lower[1].order(), 6);
    }
}
