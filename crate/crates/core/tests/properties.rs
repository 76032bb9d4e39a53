mod support;

use std::cmp::Ordering;

use hedonic_core::preference::{utility_fo, UtilityTable};
use hedonic_core::search::{enumerate_graphs, enumerate_partitions};
use hedonic_core::stability::{
    find_blocking_coalition, is_individually_rational, is_individually_stable, is_nash_stable,
    verify_witness, StabilityNotion, Witness,
};
use hedonic_core::{
    compare, compute_core, fixtures, utility, Aggregation, Coalition, Game, ModelAssignment,
    Partition, PreferenceModel, PreferenceOrdering, Rational,
};
use rand::Rng;
use rayon::prelude::*;
use support::oracle::{self, RefGame};

#[test]
fn utilities_match_reference_formulas() {
    let mut rng = oracle::rng(11);
    for round in 0..200 {
        let n = 1 + round % 6;
        let model = oracle::MODELS[round % oracle::MODELS.len()];
        let game = oracle::random_game(&mut rng, n, model);
        let reference = RefGame::from_game(&game);
        for bits in 1..(1u64 << n) {
            let c = Coalition::from_bits(bits);
            let members: Vec<usize> = c.members().collect();
            for &i in &members {
                assert_eq!(
                    utility(&game, i, c).unwrap().to_string(),
                    reference.utility(i, &members).to_string(),
                    "model {model} n={n} i={i} C={c:?}"
                );
            }
        }
    }
}

#[test]
fn blocking_search_is_sound_and_complete() {
    let mut rng = oracle::rng(7);
    let mut games = vec![(
        fixtures::story(PreferenceModel::FriendOriented),
        Partition::singletons(5),
    )];
    for round in 0..1200 {
        let n = rng.random_range(1..=6);
        let model = oracle::MODELS[round % oracle::MODELS.len()];
        let game = oracle::random_game(&mut rng, n, model);
        let p = oracle::random_partition(&mut rng, n);
        games.push((game, p));
    }
    for (game, p) in &games {
        let reference = RefGame::from_game(game);
        let blockers = reference.blockers(&p.to_index_lists());
        let found = find_blocking_coalition(game, p);
        assert_eq!(found.is_some(), !blockers.is_empty(), "{game:?} {p:?}");
        if let Some(c) = found {
            // lowest bitmask among all blockers
            let least = blockers
                .iter()
                .map(|b| Coalition::from_members(b.iter().copied()))
                .min();
            assert_eq!(Some(c), least);
            for i in c.members() {
                assert_eq!(
                    compare(game, i, c, p.coalition_of(i)).unwrap(),
                    PreferenceOrdering::StrictlyPrefers
                );
            }
        }
    }
}

#[test]
fn stability_implications() {
    let mut rng = oracle::rng(3);
    for round in 0..600 {
        let n = rng.random_range(1..=6);
        let model = oracle::MODELS[round % oracle::MODELS.len()];
        let game = oracle::random_game(&mut rng, n, model);
        let p = oracle::random_partition(&mut rng, n);
        let core = find_blocking_coalition(&game, &p).is_none();
        let ir = is_individually_rational(&game, &p);
        let nash = is_nash_stable(&game, &p);
        let is = is_individually_stable(&game, &p);
        if core {
            assert!(ir.is_stable());
        }
        if nash.is_stable() {
            assert!(is.is_stable());
        }
        for (notion, v) in [
            (StabilityNotion::IndividualRationality, ir),
            (StabilityNotion::Nash, nash),
            (StabilityNotion::Individual, is),
        ] {
            if let Some(w) = v.witness() {
                assert!(verify_witness(&game, &p, notion, w));
            }
        }
        // IR is exactly "no profitable move to the empty target"
        let solo_move = (0..n).find(|&i| {
            compare(&game, i, Coalition::singleton(i), p.coalition_of(i)).unwrap()
                == PreferenceOrdering::StrictlyPrefers
        });
        assert_eq!(ir.witness(), solo_move.map(Witness::Player));
    }
}

#[test]
fn fo_and_eo_match_lexicographic_definitions() {
    for n in 1..=5 {
        for (_, graph) in enumerate_graphs(n, false) {
            let fo = Game::homogeneous(graph.clone(), PreferenceModel::FriendOriented);
            let eo = Game::homogeneous(graph, PreferenceModel::EnemyOriented);
            for i in 0..n {
                let f = fo.friends(i);
                let e = fo.enemies(i);
                let coalitions: Vec<Coalition> = (1..1u64 << n)
                    .map(Coalition::from_bits)
                    .filter(|c| c.contains(i))
                    .collect();
                for &c in &coalitions {
                    for &d in &coalitions {
                        let (cf, ce) = (c.intersection(f).len(), c.intersection(e).len());
                        let (df, de) = (d.intersection(f).len(), d.intersection(e).len());
                        let fo_lex = cf > df || (cf == df && ce <= de);
                        let eo_lex = ce < de || (ce == de && cf >= df);
                        assert_eq!(compare(&fo, i, c, d).unwrap().weakly_prefers(), fo_lex);
                        assert_eq!(compare(&eo, i, c, d).unwrap().weakly_prefers(), eo_lex);
                    }
                }
            }
        }
    }
}

#[test]
fn fractional_sum_is_monotone_for_nonnegative_valuations() {
    let mut rng = oracle::rng(19);
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::new(rng.random_range(0..=5), rng.random_range(1..=4)))
                    .collect()
            })
            .collect();
        let game = Game::build(
            hedonic_core::game::default_labels(n),
            &[],
            Some(rows),
            ModelAssignment::Uniform(PreferenceModel::Fractional(Aggregation::Sum)),
        )
        .unwrap();
        for bits in 1..1u64 << n {
            let c = Coalition::from_bits(bits);
            for i in c.members() {
                for j in (0..n).filter(|&j| !c.contains(j)) {
                    assert_ne!(
                        compare(&game, i, c.with(j), c).unwrap(),
                        PreferenceOrdering::StrictlyDispreferred
                    );
                }
            }
        }
    }
}

#[test]
fn core_listing_matches_analyzer_on_every_partition() {
    let mut rng = oracle::rng(5);
    for round in 0..120 {
        let n = rng.random_range(1..=6);
        let model = oracle::MODELS[round % oracle::MODELS.len()];
        let game = oracle::random_game(&mut rng, n, model);
        let core = compute_core(&game).unwrap();
        let expected: Vec<Partition> = enumerate_partitions(n)
            .unwrap()
            .filter(|p| find_blocking_coalition(&game, p).is_none())
            .collect();
        assert_eq!(core.partitions, expected);
        assert_eq!(core.scanned, oracle::bell(n));
    }
}

#[test]
fn partition_stream_is_canonical_complete_and_duplicate_free() {
    for n in 0..=8 {
        let all: Vec<Partition> = enumerate_partitions(n).unwrap().collect();
        assert_eq!(all.len() as u64, oracle::bell(n), "n={n}");
        let mut seen = std::collections::HashSet::new();
        for p in &all {
            let again = hedonic_core::canonicalize(n, &p.to_index_lists()).unwrap();
            assert_eq!(&again, p);
            assert!(seen.insert(p.to_index_lists()));
        }
    }
}

#[test]
fn eo_core_blocks_are_cliques() {
    for n in 1..=6 {
        let graphs: Vec<_> = enumerate_graphs(n, false).collect();
        graphs.par_iter().for_each(|(mask, graph)| {
            let game = Game::homogeneous(graph.clone(), PreferenceModel::EnemyOriented);
            let core = compute_core(&game).unwrap();
            assert!(!core.is_empty(), "n={n} mask={mask}");
            for p in &core.partitions {
                assert!(
                    p.blocks().iter().all(|&b| graph.is_clique(b)),
                    "n={n} mask={mask} {p:?}"
                );
            }
        });
    }
}

#[test]
fn utility_table_is_a_pure_cache() {
    let mut rng = oracle::rng(23);
    for model in oracle::MODELS {
        let game = oracle::random_game(&mut rng, 6, model);
        let table = UtilityTable::build(&game);
        for bits in 1..64u64 {
            let c = Coalition::from_bits(bits);
            for i in c.members() {
                assert_eq!(table.get(c, i), utility(&game, i, c).unwrap());
            }
        }
    }
}

#[test]
fn fo_utilities_are_integers_and_ordering_is_total() {
    let game = fixtures::story(PreferenceModel::FriendOriented);
    let coalitions: Vec<Coalition> = (1..32u64)
        .map(Coalition::from_bits)
        .filter(|c| c.contains(0))
        .collect();
    for &c in &coalitions {
        assert!(utility_fo(&game, 0, c).unwrap().is_integer());
        for &d in &coalitions {
            let cd = compare(&game, 0, c, d).unwrap();
            let dc = compare(&game, 0, d, c).unwrap();
            let flipped = match cd {
                PreferenceOrdering::StrictlyPrefers => PreferenceOrdering::StrictlyDispreferred,
                PreferenceOrdering::StrictlyDispreferred => PreferenceOrdering::StrictlyPrefers,
                PreferenceOrdering::Indifferent => PreferenceOrdering::Indifferent,
            };
            assert_eq!(dc, flipped);
            let (uc, ud) = (utility(&game, 0, c).unwrap(), utility(&game, 0, d).unwrap());
            assert_eq!(
                uc.cmp(&ud) == Ordering::Greater,
                cd == PreferenceOrdering::StrictlyPrefers
            );
        }
    }
}
