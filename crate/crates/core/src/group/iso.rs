//! Brute-force isomorphism search and exhaustively verified quotient
//! isomorphisms.

use super::{CosetList, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// Search cap for [`find_isomorphism`]; only small quotient factors need it.
pub const ISO_ORDER_CAP: usize = 64;

/// A product-preserving bijection between two groups of order <= 64, or
/// `None` when the groups are not isomorphic. The search assigns images to
/// a greedy generating sequence and prunes by element order.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    if n.max(h.order()) > ISO_ORDER_CAP {
        return Err(Error::TooLarge {
            order: n.max(h.order()),
            cap: ISO_ORDER_CAP,
        });
    }
    if n != h.order() {
        return Ok(None);
    }
    let mut g_profile: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let mut h_profile: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    let orders_g = g_profile.clone();
    let orders_h = h_profile.clone();
    g_profile.sort();
    h_profile.sort();
    if g_profile != h_profile {
        return Ok(None);
    }

    // Greedy generating sequence: repeatedly the smallest element outside
    // the subgroup generated so far.
    let mut generators = Vec::new();
    let mut span = Subgroup::trivial(g);
    while span.order() < n {
        let next = g.elements().find(|&x| !span.contains(x)).unwrap();
        generators.push(next);
        let mut seed = span.members().clone();
        seed.insert(next);
        span = Subgroup::closure(g, &seed);
    }

    let mut map = vec![usize::MAX; n];
    map[g.identity()] = h.identity();
    let mut known: Vec<usize> = vec![g.identity()];
    if assign(g, h, &orders_g, &orders_h, &generators, 0, &mut map, &mut known) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    g: &FiniteGroup,
    h: &FiniteGroup,
    orders_g: &[usize],
    orders_h: &[usize],
    generators: &[usize],
    depth: usize,
    map: &mut [usize],
    known: &mut Vec<usize>,
) -> bool {
    if depth == generators.len() {
        return known.len() == g.order();
    }
    let gen = generators[depth];
    let taken: Vec<bool> = {
        let mut t = vec![false; h.order()];
        for &x in known.iter() {
            t[map[x]] = true;
        }
        t
    };
    for image in h.elements() {
        if taken[image] || orders_h[image] != orders_g[gen] {
            continue;
        }
        let snapshot = known.len();
        if extend(g, h, gen, image, map, known)
            && assign(g, h, orders_g, orders_h, generators, depth + 1, map, known)
        {
            return true;
        }
        for &x in &known[snapshot..] {
            map[x] = usize::MAX;
        }
        known.truncate(snapshot);
        map[gen] = usize::MAX;
    }
    false
}

/// Extends the partial map with `gen -> image` and closes under products
/// with all known elements, checking consistency as it goes.
fn extend(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gen: usize,
    image: usize,
    map: &mut [usize],
    known: &mut Vec<usize>,
) -> bool {
    if map[gen] != usize::MAX {
        return map[gen] == image;
    }
    map[gen] = image;
    known.push(gen);
    let mut cursor = known.len() - 1;
    while cursor < known.len() {
        let x = known[cursor];
        cursor += 1;
        for i in 0..known.len() {
            let y = known[i];
            for (p, q) in [
                (g.mul(x, y), h.mul(map[x], map[y])),
                (g.mul(y, x), h.mul(map[y], map[x])),
            ] {
                if map[p] == usize::MAX {
                    map[p] = q;
                    known.push(p);
                } else if map[p] != q {
                    return false;
                }
            }
        }
    }
    // Injectivity over the known set.
    let mut hit = vec![false; h.order()];
    for &x in known.iter() {
        if hit[map[x]] {
            return false;
        }
        hit[map[x]] = true;
    }
    true
}

/// A quotient `ambient/normal` materialized as a fresh group on coset
/// indices, together with its coset decomposition.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub ambient: Subgroup,
    pub normal: Subgroup,
    pub cosets: CosetList,
    pub group: FiniteGroup,
}

impl QuotientData {
    pub fn new(ambient: &Subgroup, normal: &Subgroup) -> Result<Self> {
        let (group, _) = ambient.quotient(normal)?;
        let cosets = normal.right_cosets(ambient)?;
        Ok(QuotientData {
            ambient: ambient.clone(),
            normal: normal.clone(),
            cosets,
            group,
        })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Coset index of an ambient element.
    pub fn project(&self, elem: usize) -> usize {
        self.cosets.index_of(elem)
    }
}

/// An explicit coset-level map between two quotients that has passed the
/// exhaustive bijectivity and homomorphism checks.
#[derive(Debug, Clone)]
pub struct VerifiedIsomorphism {
    pub domain: QuotientData,
    pub codomain: QuotientData,
    /// Domain coset index -> codomain coset index.
    pub map: Vec<usize>,
    pub name: String,
}

impl VerifiedIsomorphism {
    /// Runs every check and only then hands the map back. Failures mean an
    /// implementation bug, not bad input.
    pub fn checked(
        name: impl Into<String>,
        domain: QuotientData,
        codomain: QuotientData,
        map: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        let fail = |msg: String| Error::VerificationFailed(format!("{name}: {msg}"));
        if domain.order() != codomain.order() {
            return Err(fail(format!(
                "quotient orders differ: {} vs {}",
                domain.order(),
                codomain.order()
            )));
        }
        if map.len() != domain.order() {
            return Err(fail("map length does not match the domain".into()));
        }
        let mut hit = vec![false; codomain.order()];
        for &img in &map {
            if img >= codomain.order() || hit[img] {
                return Err(fail("map is not a bijection".into()));
            }
            hit[img] = true;
        }
        for a in 0..domain.order() {
            for b in 0..domain.order() {
                let lhs = map[domain.group.mul(a, b)];
                let rhs = codomain.group.mul(map[a], map[b]);
                if lhs != rhs {
                    return Err(fail(format!(
                        "homomorphism fails on coset pair ({a},{b})"
                    )));
                }
            }
        }
        Ok(VerifiedIsomorphism {
            domain,
            codomain,
            map,
            name,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_isomorphism() {
        let g = FiniteGroup::symmetric3();
        let iso = find_isomorphism(&g, &g).unwrap().unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(iso[g.mul(a, b)], g.mul(iso[a], iso[b]));
            }
        }
    }

    #[test]
    fn z4_not_isomorphic_to_klein_four() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let v4 = FiniteGroup::klein_four();
        assert!(find_isomorphism(&z4, &v4).unwrap().is_none());
    }

    #[test]
    fn z6_isomorphic_to_z2_times_z3() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let p = FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(3).unwrap(),
        )
        .unwrap();
        let iso = find_isomorphism(&z6, &p).unwrap().unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(iso[z6.mul(a, b)], p.mul(iso[a], iso[b]));
            }
        }
    }

    #[test]
    fn s3_not_isomorphic_to_z6() {
        let s3 = FiniteGroup::symmetric3();
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(find_isomorphism(&s3, &z6).unwrap().is_none());
    }

    #[test]
    fn order_cap_is_enforced() {
        let big = FiniteGroup::cyclic(65).unwrap();
        assert!(matches!(
            find_isomorphism(&big, &big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn verified_isomorphism_rejects_non_hom() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let full = Subgroup::full(&g);
        let trivial = Subgroup::trivial(&g);
        let q = QuotientData::new(&full, &trivial).unwrap();
        // A bijection that is not a homomorphism: swap 0 and 1.
        let map = vec![1, 0, 2, 3];
        assert!(matches!(
            VerifiedIsomorphism::checked("bad", q.clone(), q, map),
            Err(Error::VerificationFailed(_))
        ));
    }
}
