mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use rmlprune::algebra::{eval_torb, materialize, Attribute, MappingTuple, RmlMappingExpr, TorbExpr, TorbPart, Value};
use rmlprune::pruner::{prune, regex_of, tp_incompatible, MatchingPattern, PatternOptions, Pruned};
use rmlprune::rdf::{eval_bgp, eval_triple_pattern, Bgp, Literal, PatternTerm, TriplePattern};

fn part() -> impl Strategy<Value = TorbPart> {
    prop_oneof![
        "[a-c./:*+?()\\[\\]{}|^$\\\\-]{1,4}".prop_map(TorbPart::Str),
        (0..3usize).prop_map(|i| TorbPart::Attr(Attribute::new(format!("c{i}")))),
    ]
}

fn torb() -> impl Strategy<Value = TorbExpr> {
    prop::collection::vec(part(), 1..5).prop_map(TorbExpr::from_parts)
}

fn tuple(values: &[String]) -> MappingTuple {
    let mut t = MappingTuple::new();
    for (i, v) in values.iter().enumerate() {
        t.insert(Attribute::new(format!("c{i}")), Value::from(rmlprune::rdf::RdfTerm::from(Literal::string(v.clone()))));
    }
    t
}

fn reference(p: &MatchingPattern) -> Regex {
    Regex::new(&format!(r"\A(?s:{})\z", p.as_str())).unwrap()
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn materialized_answers(m: &Pruned, patterns: &[TriplePattern], seed: u64, ncols: usize) -> (BTreeSet<rmlprune::rdf::SolutionMapping>, rmlprune::rdf::RdfGraph) {
    let sigma = common::random_sigma(&mut seeded(seed), ncols);
    let g = m.materialize(&sigma).unwrap();
    (eval_bgp(&Bgp::new(patterns.to_vec()).unwrap(), &g), g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn evaluations_match_their_pattern(phi in torb(), values in prop::collection::vec("[a-c./*(\\n]{1,3}", 3)) {
        let p = regex_of(&phi, PatternOptions::default());
        let s = eval_torb(&phi, &tuple(&values)).unwrap().unwrap();
        prop_assert!(p.is_full_match(&s), "{s:?} !~ {}", p.as_str());
        prop_assert!(reference(&p).is_match(&s));
    }

    #[test]
    fn empty_cells_need_the_relaxed_pattern(phi in torb(), values in prop::collection::vec("[ab]{0,2}", 3)) {
        let s = eval_torb(&phi, &tuple(&values)).unwrap().unwrap();
        let relaxed = regex_of(&phi, PatternOptions { assume_nonempty_refs: false });
        prop_assert!(relaxed.is_full_match(&s));
    }

    #[test]
    fn matcher_agrees_with_regex_engine(phi in torb(), candidate in "[a-c./:*+()\\\\\\n-]{0,10}") {
        for opts in [PatternOptions::default(), PatternOptions { assume_nonempty_refs: false }] {
            let p = regex_of(&phi, opts);
            prop_assert_eq!(p.is_full_match(&candidate), reference(&p).is_match(&candidate), "{}", p.as_str());
        }
    }

    #[test]
    fn parse_accepts_its_own_output(phi in torb()) {
        let p = regex_of(&phi, PatternOptions::default());
        prop_assert_eq!(MatchingPattern::parse(p.as_str()).unwrap(), p);
    }

    #[test]
    fn pruning_preserves_answers(seed in any::<u64>()) {
        let inst = common::random_instance(&mut seeded(seed));
        let full = Pruned::Mapping(inst.mapping.clone());
        let pruned = prune(&inst.patterns, &inst.mapping);
        let (before, g_full) = materialized_answers(&full, &inst.patterns, seed ^ 1, inst.ncols);
        let (after, g_pruned) = materialized_answers(&pruned, &inst.patterns, seed ^ 1, inst.ncols);
        prop_assert_eq!(&before, &after);
        prop_assert_eq!(&before, &common::naive_bgp(&inst.patterns, &g_full));
        prop_assert!(g_pruned.is_subgraph_of(&g_full));
    }

    #[test]
    fn incompatible_pairs_produce_no_matches(seed in any::<u64>()) {
        let inst = common::random_instance(&mut seeded(seed));
        let sigma = common::random_sigma(&mut seeded(!seed), inst.ncols);
        for tm in inst.mapping.trmaps() {
            let g = materialize(&RmlMappingExpr::new(vec![tm.clone()]).unwrap(), &sigma).unwrap();
            for tp in &inst.patterns {
                if tp_incompatible(tp, tm) {
                    prop_assert!(eval_triple_pattern(tp, &g).is_empty(), "{tp} matched {}", tm.provenance());
                }
            }
        }
    }

    #[test]
    fn more_patterns_keep_more(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let inst = common::random_instance(&mut rng);
        let extra = common::random_bgp(&mut rng, 3);
        let mut all = inst.patterns.clone();
        all.extend(extra);
        let small: BTreeSet<_> = prune(&inst.patterns, &inst.mapping).trmaps().iter().map(|t| t.provenance().clone()).collect();
        let large: BTreeSet<_> = prune(&all, &inst.mapping).trmaps().iter().map(|t| t.provenance().clone()).collect();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn pruning_is_idempotent(seed in any::<u64>()) {
        let inst = common::random_instance(&mut seeded(seed));
        let once = prune(&inst.patterns, &inst.mapping);
        if let Some(m) = once.as_mapping() {
            prop_assert_eq!(prune(&inst.patterns, m), once.clone());
        }
    }

    #[test]
    fn all_variable_pattern_keeps_everything(seed in any::<u64>()) {
        let inst = common::random_instance(&mut seeded(seed));
        let all = TriplePattern::new(PatternTerm::var("s"), PatternTerm::var("p"), PatternTerm::var("o")).unwrap();
        let mut patterns = inst.patterns.clone();
        patterns.push(all);
        prop_assert_eq!(prune(&patterns, &inst.mapping), Pruned::Mapping(inst.mapping.clone()));
    }
}
