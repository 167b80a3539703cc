//! Derived and composition series, Jordan-Hoelder factors, and the
//! normal-subgroup searches that back them.

use super::{ElemSet, Subgroup};
#[cfg(test)]
use super::FiniteGroup;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Bound on how many normal subgroups a single saturation search may
/// enumerate before giving up. Desk-scale inputs sit far below this.
const NORMAL_LATTICE_CAP: usize = 200_000;

/// Commutator subgroup `[H, H]` of a subgroup, inside the same parent.
pub fn derived_subgroup(h: &Subgroup) -> Subgroup {
    let g = h.parent();
    let mut seed = ElemSet::empty(g.order());
    for a in h.members().iter() {
        for b in h.members().iter() {
            let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
            seed.insert(c);
        }
    }
    Subgroup::closure(g, &seed)
}

/// Descending derived series `[H, H', H'', ...]` until stabilization.
pub fn derived_series(h: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![h.clone()];
    loop {
        let next = derived_subgroup(series.last().unwrap());
        if next.order() == series.last().unwrap().order() {
            break;
        }
        series.push(next);
    }
    series
}

/// A group is solvable iff its derived series reaches the trivial group.
pub fn is_solvable(h: &Subgroup) -> bool {
    derived_series(h).last().unwrap().is_trivial()
}

/// Conjugacy classes of `h` acting on itself, in ascending order of their
/// smallest member.
pub fn conjugacy_classes(h: &Subgroup) -> Vec<ElemSet> {
    let g = h.parent();
    let mut seen = ElemSet::empty(g.order());
    let mut classes = Vec::new();
    for x in h.members().iter() {
        if seen.contains(x) {
            continue;
        }
        let class = ElemSet::from_iter(
            g.order(),
            h.members().iter().map(|a| g.mul(g.mul(a, x), g.inv(a))),
        );
        seen.union_with(&class);
        classes.push(class);
    }
    classes
}

/// Smallest subgroup of `ambient` that contains `lower` and `extra` and is
/// closed under conjugation by all of `ambient`.
pub fn normal_closure(lower: &Subgroup, extra: &ElemSet, ambient: &Subgroup) -> Subgroup {
    let g = lower.parent();
    let mut seed = lower.members().clone();
    // Conjugate the new generators by everything in the ambient first, then
    // close; the closure of a union of full conjugacy classes with a normal
    // subgroup stays conjugation-closed.
    for x in extra.iter() {
        for a in ambient.members().iter() {
            seed.insert(g.mul(g.mul(a, x), g.inv(a)));
        }
    }
    let mut out = Subgroup::closure(g, &seed);
    // Products can escape the class union; iterate until stable.
    loop {
        let mut grow = ElemSet::empty(g.order());
        for x in out.members().iter() {
            for a in ambient.members().iter() {
                let c = g.mul(g.mul(a, x), g.inv(a));
                if !out.contains(c) {
                    grow.insert(c);
                }
            }
        }
        if grow.is_empty() {
            return out;
        }
        let mut seed = out.members().clone();
        seed.union_with(&grow);
        out = Subgroup::closure(g, &seed);
    }
}

/// `upper/lower` has no proper nontrivial normal subgroup. Checked without
/// materializing the quotient: every element outside `lower` must already
/// generate all of `upper` together with `lower`, up to conjugation.
pub fn is_simple_step(lower: &Subgroup, upper: &Subgroup) -> bool {
    if lower.order() == upper.order() {
        return false;
    }
    for x in upper.members().iter() {
        if lower.contains(x) {
            continue;
        }
        let gen = normal_closure(lower, &ElemSet::singleton(upper.parent().order(), x), upper);
        if gen.order() != upper.order() {
            return false;
        }
    }
    true
}

/// All subgroups `W` with `lower <= W <= upper` and `W` normal in `upper`,
/// found by saturating joins of class closures. Errors out when the lattice
/// exceeds the desk-scale cap.
pub fn normal_subgroups_between(lower: &Subgroup, upper: &Subgroup) -> Result<Vec<Subgroup>> {
    let mut found: Vec<Subgroup> = vec![normal_closure(
        lower,
        &ElemSet::empty(lower.parent().order()),
        upper,
    )];
    // Atoms: closures of the lower group with a single class of the upper.
    let mut atoms: Vec<Subgroup> = Vec::new();
    for class in conjugacy_classes(upper) {
        let rep = class.min().unwrap();
        if found[0].contains(rep) {
            continue;
        }
        let atom = normal_closure(lower, &ElemSet::singleton(lower.parent().order(), rep), upper);
        if !atoms.contains(&atom) {
            atoms.push(atom);
        }
    }
    let mut frontier: Vec<Subgroup> = found.clone();
    while let Some(base) = frontier.pop() {
        for atom in &atoms {
            if atom.is_subgroup_of(&base) {
                continue;
            }
            let mut seed = base.members().clone();
            seed.union_with(atom.members());
            let joined = normal_closure(
                &Subgroup::closure(lower.parent(), &seed),
                &ElemSet::empty(lower.parent().order()),
                upper,
            );
            if !found.contains(&joined) {
                if found.len() >= NORMAL_LATTICE_CAP {
                    return Err(Error::TooLarge {
                        order: found.len(),
                        cap: NORMAL_LATTICE_CAP,
                    });
                }
                found.push(joined.clone());
                frontier.push(joined);
            }
        }
    }
    Ok(found)
}

/// Groups strictly between `lower` and `upper` completing a composition
/// chain for the step, deterministic per the tie-break rule: at each step
/// the proper normal-in-upper subgroup of largest order wins, ties broken
/// by lexicographically smallest member set.
fn refine_step(lower: &Subgroup, upper: &Subgroup) -> Result<Vec<Subgroup>> {
    if lower.order() == upper.order() {
        return Ok(Vec::new());
    }
    let mut candidates: Vec<Subgroup> = normal_subgroups_between(lower, upper)?
        .into_iter()
        .filter(|w| w.order() < upper.order() && w.order() > lower.order())
        .collect();
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    candidates.sort_by(|a, b| a.preference_cmp(b));
    let mid = candidates.swap_remove(0);
    let mut out = refine_step(lower, &mid)?;
    out.push(mid);
    Ok(out)
}

/// Refines every non-simple step of an ascending normal chain into
/// composition steps. Steps where adjacent groups coincide are dropped.
pub fn composition_refinement(chain: &super::Chain) -> Result<super::Chain> {
    let mut groups: Vec<Subgroup> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    if chain.groups.is_empty() {
        return super::Chain::new(groups, labels);
    }
    groups.push(chain.groups[0].clone());
    labels.push(chain.labels[0].clone());
    for i in 1..chain.groups.len() {
        let lower = &chain.groups[i - 1];
        let upper = &chain.groups[i];
        if lower.order() == upper.order() {
            continue;
        }
        if !lower.is_normal_in(upper)? {
            return Err(Error::NotNormalStep(format!(
                "step {} -> {} of the input chain",
                chain.labels[i - 1],
                chain.labels[i]
            )));
        }
        for (n, mid) in refine_step(lower, upper)?.into_iter().enumerate() {
            labels.push(format!("{}+{}", chain.labels[i - 1], n + 1));
            groups.push(mid);
        }
        groups.push(upper.clone());
        labels.push(chain.labels[i].clone());
    }
    super::Chain::new(groups, labels)
}

/// One simple factor of a composition series: its order plus whether it is
/// abelian (at desk scale that pins the isomorphism type).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleFactor {
    pub order: usize,
    pub abelian: bool,
}

/// Multiset of composition factors of a subgroup, sorted.
pub fn jordan_holder_factors(h: &Subgroup) -> Result<Vec<SimpleFactor>> {
    let base = super::Chain::new(
        vec![Subgroup::trivial(h.parent()), h.clone()],
        vec!["1".into(), "G".into()],
    )?;
    let chain = composition_refinement(&base)?;
    let mut factors = Vec::new();
    for w in chain.groups.windows(2) {
        let (q, _) = w[1].quotient(&w[0])?;
        factors.push(SimpleFactor {
            order: q.order(),
            abelian: q.is_abelian(),
        });
    }
    factors.sort();
    Ok(factors)
}

/// Composition length: the count of simple factors in any composition
/// series, invariant by Jordan-Hoelder.
pub fn eta(h: &Subgroup) -> Result<usize> {
    Ok(jordan_holder_factors(h)?.len())
}

/// Renders a factor multiset like `{2^3, 3}` for reports.
pub fn factor_summary(factors: &[SimpleFactor]) -> String {
    let mut counts: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for f in factors {
        *counts.entry((f.order, f.abelian)).or_insert(0) += 1;
    }
    let parts: Vec<String> = counts
        .into_iter()
        .map(|((order, abelian), n)| {
            let tag = if abelian { String::new() } else { "!".into() };
            if n == 1 {
                format!("{order}{tag}")
            } else {
                format!("{order}{tag}^{n}")
            }
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric3()
    }

    #[test]
    fn abelian_derived_series_is_two_steps() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let series = derived_series(&Subgroup::full(&g));
        assert_eq!(series.len(), 2);
        assert!(series[1].is_trivial());
        assert!(is_solvable(&Subgroup::full(&g)));
    }

    #[test]
    fn s3_derived_series() {
        let g = s3();
        let series = derived_series(&Subgroup::full(&g));
        let orders: Vec<usize> = series.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![6, 3, 1]);
        assert!(is_solvable(&Subgroup::full(&g)));
    }

    #[test]
    fn s3_times_s3_is_solvable() {
        let g = FiniteGroup::direct_product(&s3(), &s3()).unwrap();
        assert!(is_solvable(&Subgroup::full(&g)));
    }

    #[test]
    fn refinement_of_z4() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let chain = super::super::Chain::new(
            vec![Subgroup::trivial(&g), Subgroup::full(&g)],
            vec!["1".into(), "G".into()],
        )
        .unwrap();
        let refined = composition_refinement(&chain).unwrap();
        assert_eq!(refined.orders(), vec![1, 2, 4]);
        assert_eq!(refined.groups[1].members().to_vec(), vec![0, 2]);
    }

    #[test]
    fn refinement_of_z2_is_unchanged() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let chain = super::super::Chain::new(
            vec![Subgroup::trivial(&g), Subgroup::full(&g)],
            vec!["1".into(), "G".into()],
        )
        .unwrap();
        assert_eq!(composition_refinement(&chain).unwrap().orders(), vec![1, 2]);
    }

    #[test]
    fn refinement_of_s3_inserts_a3() {
        let g = s3();
        let chain = super::super::Chain::new(
            vec![Subgroup::trivial(&g), Subgroup::full(&g)],
            vec!["1".into(), "G".into()],
        )
        .unwrap();
        let refined = composition_refinement(&chain).unwrap();
        assert_eq!(refined.orders(), vec![1, 3, 6]);
        // Every factor simple, by brute-force normal subgroup search.
        for w in refined.groups.windows(2) {
            assert!(is_simple_step(&w[0], &w[1]));
        }
    }

    #[test]
    fn jordan_holder_of_small_groups() {
        let trivial = FiniteGroup::trivial();
        assert!(jordan_holder_factors(&Subgroup::full(&trivial))
            .unwrap()
            .is_empty());
        assert_eq!(eta(&Subgroup::full(&trivial)).unwrap(), 0);

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z2c = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2).unwrap(), &z2)
            .unwrap();
        let factors = jordan_holder_factors(&Subgroup::full(&z2c)).unwrap();
        assert_eq!(factors.len(), 3);
        assert!(factors.iter().all(|f| f.order == 2 && f.abelian));

        let ss = FiniteGroup::direct_product(&s3(), &s3()).unwrap();
        let factors = jordan_holder_factors(&Subgroup::full(&ss)).unwrap();
        let orders: Vec<usize> = factors.iter().map(|f| f.order).collect();
        assert_eq!(orders, vec![2, 2, 3, 3]);
        assert_eq!(eta(&Subgroup::full(&ss)).unwrap(), 4);
    }

    #[test]
    fn jordan_holder_invariant_under_chain_choice() {
        // Two different normal chains from 1 to Z12 refine to the same
        // factor multiset.
        let g = FiniteGroup::cyclic(12).unwrap();
        let full = Subgroup::full(&g);
        let h2 = Subgroup::closure(&g, &ElemSet::singleton(12, 6)); // order 2
        let h3 = Subgroup::closure(&g, &ElemSet::singleton(12, 4)); // order 3
        let via2 = super::super::Chain::new(
            vec![Subgroup::trivial(&g), h2, full.clone()],
            vec!["1".into(), "A".into(), "G".into()],
        )
        .unwrap();
        let via3 = super::super::Chain::new(
            vec![Subgroup::trivial(&g), h3, full.clone()],
            vec!["1".into(), "B".into(), "G".into()],
        )
        .unwrap();
        let collect = |c: &super::super::Chain| -> Vec<SimpleFactor> {
            let refined = composition_refinement(c).unwrap();
            let mut fs: Vec<SimpleFactor> = refined
                .groups
                .windows(2)
                .map(|w| {
                    let (q, _) = w[1].quotient(&w[0]).unwrap();
                    SimpleFactor {
                        order: q.order(),
                        abelian: q.is_abelian(),
                    }
                })
                .collect();
            fs.sort();
            fs
        };
        assert_eq!(collect(&via2), collect(&via3));
    }

    #[test]
    fn eta_is_additive_on_direct_products() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let s = s3();
        let prod = FiniteGroup::direct_product(&z6, &s).unwrap();
        assert_eq!(
            eta(&Subgroup::full(&prod)).unwrap(),
            eta(&Subgroup::full(&z6)).unwrap() + eta(&Subgroup::full(&s)).unwrap()
        );
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let prod2 = FiniteGroup::direct_product(&z4, &z4).unwrap();
        assert_eq!(eta(&Subgroup::full(&prod2)).unwrap(), 4);
    }

    #[test]
    fn normal_lattice_of_s3() {
        let g = s3();
        let all =
            normal_subgroups_between(&Subgroup::trivial(&g), &Subgroup::full(&g)).unwrap();
        let mut orders: Vec<usize> = all.iter().map(|h| h.order()).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 3, 6]);
    }
}
