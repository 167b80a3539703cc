//! Property tests over randomized sections, streams, and paths.

use gtrellis_core::encoder::Encoder;
use gtrellis_core::generators::representative_array;
use gtrellis_core::group::{ElemSet, FiniteGroup, Subgroup};
use gtrellis_core::section::{PathSegment, TrellisSection};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_path(section: &TrellisSection, len: usize, rng: &mut ChaCha8Rng) -> PathSegment {
    let g = section.branch_group();
    let mut branches = vec![rng.gen_range(0..g.order())];
    while branches.len() < len {
        let succ = section
            .next_set(&ElemSet::singleton(g.order(), *branches.last().unwrap()))
            .to_vec();
        branches.push(succ[rng.gen_range(0..succ.len())]);
    }
    PathSegment::new(branches)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Valid paths of the nonabelian complete section are closed under
    /// the componentwise product.
    #[test]
    fn path_products_stay_valid(seed in any::<u64>(), len in 2usize..8) {
        let section = TrellisSection::complete(FiniteGroup::symmetric3()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_path(&section, len, &mut rng);
        let b = random_path(&section, len, &mut rng);
        let product = section.componentwise_product(&a, &b).unwrap();
        section.validate_path(&product).unwrap();
    }

    /// Joined segments over a subgroup form a group: closed under the
    /// product and containing each segment's inverse.
    #[test]
    fn join_of_a_subgroup_is_a_group(p in 2usize..=3, m in 1usize..=2, l in 1usize..=2) {
        let section = TrellisSection::shift_register(p, m).unwrap();
        let kernel = section.left_kernel();
        let segments = section.join_paths(kernel.members(), l);
        let set: std::collections::HashSet<&PathSegment> = segments.iter().collect();
        let g = section.branch_group();
        for a in &segments {
            let inverse = PathSegment::new(a.branches().iter().map(|&x| g.inv(x)).collect());
            prop_assert!(set.contains(&inverse));
            for b in &segments {
                let ab = section.componentwise_product(a, b).unwrap();
                prop_assert!(set.contains(&ab));
            }
        }
    }

    /// Any input stream drives the encoder along a valid trellis path,
    /// and the emitted branch is always input times state.
    #[test]
    fn encoder_streams_are_valid_paths(p in 2usize..=3, m in 1usize..=3, seed in any::<u64>()) {
        let section = TrellisSection::shift_register(p, m).unwrap();
        let table = representative_array(&section).unwrap();
        let inputs = section.left_kernel().members().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut encoder = Encoder::new(&table);
        let mut prev = None;
        for _ in 0..40 {
            let x = inputs[rng.gen_range(0..inputs.len())];
            let state = encoder.state_branch();
            let b = encoder.step(x).unwrap();
            prop_assert_eq!(b, section.branch_group().mul(x, state));
            if let Some(p) = prev {
                prop_assert_eq!(section.right_state(p), section.left_state(b));
            }
            prev = Some(b);
        }
    }

    /// Chain-coset factorization round-trips every branch and never
    /// repeats a representative tuple.
    #[test]
    fn factorization_roundtrip(p in 2usize..=3, m in 1usize..=3) {
        let section = TrellisSection::shift_register(p, m).unwrap();
        let table = representative_array(&section).unwrap();
        let mut seen = std::collections::HashSet::new();
        for b in section.branch_group().elements() {
            let f = table.factorize(b).unwrap();
            prop_assert_eq!(f.target, b);
            prop_assert!(seen.insert(f.positions.clone()));
        }
    }

    /// Coset decompositions partition the ambient group.
    #[test]
    fn cosets_partition(seed in any::<u64>()) {
        let g = FiniteGroup::direct_product(
            &FiniteGroup::symmetric3(),
            &FiniteGroup::cyclic(2).unwrap(),
        ).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seedset = ElemSet::empty(g.order());
        for _ in 0..2 {
            seedset.insert(rng.gen_range(0..g.order()));
        }
        let h = Subgroup::closure(&g, &seedset);
        let full = Subgroup::full(&g);
        let cosets = h.right_cosets(&full).unwrap();
        prop_assert_eq!(cosets.len() * h.order(), g.order());
        let mut union = ElemSet::empty(g.order());
        for c in &cosets.cosets {
            prop_assert!(union.intersection(c).is_empty());
            prop_assert_eq!(c.len(), h.order());
            union.union_with(c);
        }
        prop_assert_eq!(union.len(), g.order());
    }
}
