//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `--nocapture` to see them). Every tolerance is exact.

use gtrellis_core::encoder;
use gtrellis_core::generators::representative_array;
use gtrellis_core::group::{
    composition_refinement, find_isomorphism, jordan_holder_factors, Chain, ElemSet, FiniteGroup,
    SimpleFactor, Subgroup,
};
use gtrellis_core::refine;
use gtrellis_core::schreier;
use gtrellis_core::search::{search_subdirect, SearchWant};
use gtrellis_core::section::{PathSegment, TrellisSection};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shift_register(p: usize, m: usize) -> TrellisSection {
    TrellisSection::shift_register(p, m).unwrap()
}

fn complete_s3() -> TrellisSection {
    TrellisSection::complete(FiniteGroup::symmetric3()).unwrap()
}

/// The controllable sections bundled with the repository.
fn bundled() -> Vec<(&'static str, TrellisSection)> {
    let dihedral = {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../sections/d4_m2.section");
        let text = std::fs::read_to_string(path).unwrap();
        gtrellis_core::format::parse_section_str(&text).unwrap().section
    };
    vec![
        ("sr21", shift_register(2, 1)),
        ("sr22", shift_register(2, 2)),
        ("sr23", shift_register(2, 3)),
        ("sr31", shift_register(3, 1)),
        ("sr32", shift_register(3, 2)),
        ("complete_s3", complete_s3()),
        (
            "complete_v4",
            TrellisSection::complete(FiniteGroup::klein_four()).unwrap(),
        ),
        // A nonabelian memory-2 branch group found by the search command
        // over the dihedral group of the square.
        ("d4_m2", dihedral),
    ]
}

/// Independent oracle: the splitting group at depth `i` collected from
/// every valid branch tuple of length `i + 1` that leaves the identity
/// state, checked with nothing but the raw projection maps.
fn splitting_by_tuples(section: &TrellisSection, i: usize) -> Vec<usize> {
    let n = section.branch_group().order();
    let mut found = ElemSet::empty(n);
    let mut tuple = vec![0usize; i + 1];
    enumerate_tuples(section, &mut tuple, 0, &mut |t: &[usize]| {
        if section.left_state(t[0]) == section.state_group().identity() {
            found.insert(*t.last().unwrap());
        }
    });
    found.to_vec()
}

/// Dual oracle: first branches of valid tuples merging to the identity.
fn merging_by_tuples(section: &TrellisSection, i: usize) -> Vec<usize> {
    let n = section.branch_group().order();
    let mut found = ElemSet::empty(n);
    let mut tuple = vec![0usize; i + 1];
    enumerate_tuples(section, &mut tuple, 0, &mut |t: &[usize]| {
        if section.right_state(*t.last().unwrap()) == section.state_group().identity() {
            found.insert(t[0]);
        }
    });
    found.to_vec()
}

fn enumerate_tuples(
    section: &TrellisSection,
    tuple: &mut Vec<usize>,
    depth: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    let n = section.branch_group().order();
    for b in 0..n {
        if depth > 0 && section.right_state(tuple[depth - 1]) != section.left_state(b) {
            continue;
        }
        tuple[depth] = b;
        if depth + 1 == tuple.len() {
            visit(tuple);
        } else {
            enumerate_tuples(section, tuple, depth + 1, visit);
        }
    }
}

#[test]
fn criterion_01_chains_and_controllability() {
    for p in [2usize, 3] {
        for m in [1usize, 2, 3] {
            let section = shift_register(p, m);
            let chains = section.chains().unwrap();
            assert_eq!(chains.memory, m, "memory of the ({p},{m}) register");
            for j in 0..=m {
                assert_eq!(
                    chains.splitting_at(j as isize).order(),
                    p.pow(j as u32 + 1),
                    "splitting order at {j} for ({p},{m})"
                );
            }
        }
    }
    // One cross-check against raw tuple enumeration.
    for section in [shift_register(2, 2), shift_register(3, 1)] {
        let chains = section.chains().unwrap();
        for i in 0..=chains.memory {
            assert_eq!(
                splitting_by_tuples(&section, i),
                chains.splitting_at(i as isize).members().to_vec()
            );
            assert_eq!(
                merging_by_tuples(&section, i),
                chains.merging_at(i as isize).members().to_vec()
            );
        }
    }
    println!("criterion 01 chains/controllability: PASS");
}

#[test]
fn criterion_02_schreier_matrix_diagonal_and_dual() {
    for (name, section) in bundled() {
        let primal = schreier::schreier_matrix(&section).unwrap();
        let dual = schreier::dual_matrix(&section).unwrap();
        assert!(primal.controllable, "{name} primal diagonal");
        assert_eq!(primal.controllable, dual.controllable, "{name} dual iff");
        schreier::controllable_form(&primal).unwrap();
    }
    println!("criterion 02 Schreier matrix: PASS");
}

#[test]
fn criterion_03_verified_isomorphisms() {
    for section in [
        shift_register(2, 2),
        shift_register(2, 3),
        shift_register(3, 2),
        complete_s3(),
    ] {
        let memory = section.memory().unwrap();
        for j in 0..=memory {
            for k in 0..=memory {
                schreier::zassenhaus_iso(&section, j, k).unwrap();
            }
        }
        for j in 0..memory {
            schreier::column_shift_iso(&section, j).unwrap();
        }
        for j in 0..memory {
            for k in 1..=memory - j {
                for m in 1..=k {
                    schreier::adjacent_column_iso(&section, j, k, m).unwrap();
                }
            }
        }
        for k in 1..=memory {
            for m in 1..=k {
                for l in 1..=(k - m + 1) {
                    let rect = schreier::rectangle_family(&section, k, m, l).unwrap();
                    let size = rect.upper[0].order() / rect.lower[0].order();
                    for j in 0..=l {
                        assert_eq!(rect.upper[j].order() / rect.lower[j].order(), size);
                    }
                }
            }
        }
    }
    println!("criterion 03 verified isomorphisms: PASS");
}

#[test]
fn criterion_04_generator_table() {
    for (name, section) in bundled() {
        let table = representative_array(&section).unwrap();
        let chains = section.chains().unwrap();
        let check = table.eta_check().unwrap();
        assert_eq!(
            check.cells_product,
            section.branch_group().order(),
            "{name} cell product"
        );
        for family in table.families() {
            let span = family.span as isize;
            for path in &family.paths {
                for j in 0..=family.span {
                    let window = chains
                        .splitting_at(j as isize)
                        .intersect(chains.merging_at(span - j as isize));
                    assert!(window.contains(path.branch(j)), "{name} component window");
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for b in section.branch_group().elements() {
            let f = table.factorize(b).unwrap();
            assert!(seen.insert(f.positions.clone()), "{name} uniqueness");
        }
    }
    println!("criterion 04 generator table: PASS");
}

fn encoder_suite(name: &str, table: &gtrellis_core::generators::GeneratorTable, seed: u64) {
    let section = table.section().clone();
    let g = section.branch_group().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // (a) completeness
    for b in g.elements() {
        let seeds = encoder::seed_inputs(table, b).unwrap();
        let mut e = encoder::Encoder::new(table);
        let mut last = g.identity();
        for x in seeds {
            last = e.step(x).unwrap();
        }
        assert_eq!(last, b, "{name} completeness at branch {b}");
    }
    // (b) validity over 10^4 random steps
    let inputs: Vec<usize> = section.left_kernel().members().to_vec();
    let mut e = encoder::Encoder::new(table);
    let mut prev: Option<usize> = None;
    for _ in 0..10_000 {
        let b = e.step(inputs[rng.gen_range(0..inputs.len())]).unwrap();
        if let Some(p) = prev {
            assert_eq!(
                section.right_state(p),
                section.left_state(b),
                "{name} adjacency"
            );
        }
        prev = Some(b);
    }
    // (c) tracking 100 random length-50 paths
    for _ in 0..100 {
        let mut branches = vec![rng.gen_range(0..g.order())];
        for _ in 0..49 {
            let succ = section
                .next_set(&ElemSet::singleton(g.order(), *branches.last().unwrap()))
                .to_vec();
            branches.push(succ[rng.gen_range(0..succ.len())]);
        }
        let target = PathSegment::new(branches);
        let result = encoder::track(table, &target, target.branch(0)).unwrap();
        assert!(result.exact, "{name} tracking");
    }
    // (d) impulse responses
    for span in 0..=table.memory() {
        for which in 0..table.generators_at(span).unwrap().len() {
            encoder::impulse_response(table, span, which).unwrap();
        }
    }
    // (e) reachable states
    assert_eq!(
        encoder::reachable_states(table).unwrap().len(),
        section.state_group().order(),
        "{name} state count"
    );
}

#[test]
fn criterion_05_encoder() {
    for (name, section) in bundled() {
        let table = representative_array(&section).unwrap();
        encoder_suite(name, &table, 100);
    }
    println!("criterion 05 encoder: PASS");
}

#[test]
fn criterion_06_degradation_bound_exhaustive() {
    let section = shift_register(2, 2);
    let memory = section.memory().unwrap();
    let all = section.join_paths(&section.branch_group().full_set(), memory);
    let mut pairs = 0usize;
    for p in &all {
        for q in &all {
            if p.branch(0) != q.branch(0) {
                continue;
            }
            let profile = encoder::degradation_profile(&section, p, q).unwrap();
            for (i, &level) in profile.iter().enumerate() {
                assert!(level <= i as isize);
            }
            pairs += 1;
        }
    }
    assert_eq!(pairs, 128);
    println!("criterion 06 degradation bound ({pairs} pairs): PASS");
}

#[test]
fn criterion_07_composition_refinement() {
    for (name, section) in bundled() {
        // Construction re-verifies simplicity, pushforward equalities, and
        // anti-diagonal isomorphisms internally.
        let chain = refine::splitting_composition_chain(&section).unwrap();
        let pages = refine::schreier_array(&section).unwrap();
        let expected = jordan_holder_factors(&Subgroup::full(section.branch_group())).unwrap();
        assert_eq!(chain.length(), expected.len(), "{name} chain length");
        let mut page_factors: Vec<SimpleFactor> = pages
            .full_chain
            .windows(2)
            .map(|w| {
                let (q, _) = w[1].1.quotient(&w[0].1).unwrap();
                SimpleFactor {
                    order: q.order(),
                    abelian: q.is_abelian(),
                }
            })
            .collect();
        page_factors.sort();
        assert_eq!(page_factors, expected, "{name} page factors");
        let solv = refine::solvability_equivalence(&section).unwrap();
        assert!(solv.agree, "{name} solvability");
    }
    println!("criterion 07 composition refinement: PASS");
}

#[test]
fn criterion_08_refined_encoder() {
    for (name, section) in bundled() {
        let table = refine::refined_representative_array(&section).unwrap();
        encoder_suite(name, &table, 200);
    }
    let table = refine::refined_representative_array(&complete_s3()).unwrap();
    let check = table.eta_check().unwrap();
    assert_eq!(check.eta, 4);
    assert_eq!(check.nontrivial_cell_count, 4);
    let sizes: Vec<usize> = table
        .cells()
        .iter()
        .map(|c| c.transversal.len())
        .filter(|&n| n > 1)
        .collect();
    assert_eq!(sizes, vec![3, 2, 3, 2]);
    println!("criterion 08 refined encoder: PASS");
}

#[test]
fn criterion_09_eta_invariance() {
    let z12 = FiniteGroup::cyclic(12).unwrap();
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let z2c = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2).unwrap(), &z2)
        .unwrap();
    let s3s3 =
        FiniteGroup::direct_product(&FiniteGroup::symmetric3(), &FiniteGroup::symmetric3())
            .unwrap();

    let cases: Vec<(FiniteGroup, Vec<usize>, Vec<usize>)> = vec![
        // (group, seed of the first mid subgroup, seed of the second)
        (z12, vec![6], vec![4]),
        (z2c, vec![4], vec![4, 2]),
        (s3s3.clone(), vec![6, 12, 18, 24, 30], vec![1, 2, 3, 4, 5]),
    ];
    for (g, seed_a, seed_b) in cases {
        let full = Subgroup::full(&g);
        let trivial = Subgroup::trivial(&g);
        let factors_via = |seed: &[usize]| {
            let mid = Subgroup::closure(&g, &ElemSet::from_iter(g.order(), seed.iter().copied()));
            assert!(mid.order() > 1 && mid.order() < g.order(), "mid subgroup is proper");
            let chain = Chain::new(
                vec![trivial.clone(), mid, full.clone()],
                vec!["1".into(), "M".into(), "G".into()],
            )
            .unwrap();
            let refined = composition_refinement(&chain).unwrap();
            let mut factors: Vec<SimpleFactor> = refined
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
            factors.sort();
            factors
        };
        assert_eq!(factors_via(&seed_a), factors_via(&seed_b));
    }
    println!("criterion 09 eta invariance: PASS");
}

#[test]
fn criterion_10_search_oracle() {
    // Over the Klein four-group the search rediscovers a section whose
    // branch group is isomorphic to the (2,2) register's with the same
    // memory and chain profile.
    let v4 = FiniteGroup::klein_four();
    let hits = search_subdirect(
        &v4,
        16,
        SearchWant {
            nonabelian: false,
            min_memory: 2,
        },
    )
    .unwrap();
    let reference = shift_register(2, 2);
    let ref_chains = reference.chains().unwrap();
    let found = hits.iter().any(|h| {
        h.memory == 2
            && find_isomorphism(h.document.section.branch_group(), reference.branch_group())
                .unwrap()
                .is_some()
            && h.document.section.chains().unwrap().splitting_orders()
                == ref_chains.splitting_orders()
    });
    assert!(found, "no register-like hit over the Klein four-group");

    // Over the symmetric group the search yields a controllable
    // nonabelian branch group.
    let s3 = FiniteGroup::symmetric3();
    let hits = search_subdirect(
        &s3,
        36,
        SearchWant {
            nonabelian: true,
            min_memory: 1,
        },
    )
    .unwrap();
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|h| !h.abelian));
    println!("criterion 10 search oracle: PASS");
}
