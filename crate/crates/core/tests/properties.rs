use ccsynth::automaton::Automaton;
use ccsynth::format::{parse_automaton, serialize_automaton};
use ccsynth::relation::{
    check_relation, greatest_relation, holds, match_predicate, PairRelation, Preorder, RelationKind,
};
use ccsynth::synthesis::{
    build_supervisor, f_step, greatest_family, greatest_fixpoint, is_controllability_family,
    is_solvable, pairs_universe, synthesize, PairSetFamily, Strategy, SynthesisConfig,
};
use ccsynth::testkit::{
    isomorphic, random_alphabet, random_automaton, random_instance, InstanceSpec,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(
    seed: u64,
    g: usize,
    r: usize,
    events: usize,
    deterministic: bool,
) -> (Automaton, Automaton) {
    random_instance(&InstanceSpec {
        g_states: g,
        r_states: r,
        events,
        density: 0.35,
        seed,
        deterministic,
        ..InstanceSpec::default()
    })
}

fn triple(seed: u64, n: usize, events: usize) -> [Automaton; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let al = random_alphabet(&mut rng, events, 0.5, 0.5);
    [
        random_automaton(&mut rng, &al, n, 0.4, false, "a"),
        random_automaton(&mut rng, &al, n, 0.4, false, "b"),
        random_automaton(&mut rng, &al, n, 0.4, false, "c"),
    ]
}

fn relation_from_mask(g: &Automaton, r: &Automaton, mask: u64) -> PairRelation {
    let m = r.num_states();
    PairRelation::from_pairs(
        g.num_states(),
        m,
        (0..g.num_states() * m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i / m, i % m)),
    )
}

fn compose(left: &PairRelation, right: &PairRelation, n: usize, m: usize) -> PairRelation {
    let mut out = PairRelation::empty(n, m);
    for (x, y) in left.iter() {
        for (y2, z) in right.iter() {
            if y == y2 {
                out.insert(x, z);
            }
        }
    }
    out
}

fn small_universe(g: &Automaton, r: &Automaton, limit: usize) -> bool {
    pairs_universe(g, r)
        .map(|u| u.len() <= limit)
        .unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preorders_are_reflexive(seed in any::<u64>(), n in 1usize..5, events in 1usize..4) {
        let (g, _) = instance(seed, n, 1, events, false);
        for p in Preorder::ALL {
            prop_assert!(holds(&g, &g, &p.kind(g.alphabet())).unwrap().holds, "{} not reflexive", p.name());
        }
    }

    #[test]
    fn greatest_relations_compose(seed in any::<u64>(), n in 1usize..4, events in 1usize..4) {
        let [a, b, c] = triple(seed, n, events);
        for p in Preorder::ALL {
            let kind = p.kind(a.alphabet());
            let ab = greatest_relation(&a, &b, &kind).unwrap();
            let bc = greatest_relation(&b, &c, &kind).unwrap();
            let ac = greatest_relation(&a, &c, &kind).unwrap();
            prop_assert!(compose(&ab, &bc, a.num_states(), c.num_states()).is_subset(&ac), "{}", p.name());
            let chained = holds(&a, &b, &kind).unwrap().holds && holds(&b, &c, &kind).unwrap().holds;
            prop_assert!(!chained || holds(&a, &c, &kind).unwrap().holds, "{} not transitive", p.name());
        }
    }

    #[test]
    fn greatest_relation_is_a_fixpoint(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let (g, r) = instance(seed, n, m, 2, false);
        for p in Preorder::ALL {
            let kind = p.kind(g.alphabet()).without_initial();
            let rel = greatest_relation(&g, &r, &kind).unwrap();
            prop_assert_eq!(check_relation(&g, &r, &rel, &kind).unwrap(), None);
        }
    }

    #[test]
    fn match_is_antitone_then_monotone(
        seed in any::<u64>(),
        w in any::<u64>(),
        extra in any::<u64>(),
        w2 in any::<u64>(),
        extra2 in any::<u64>(),
        e in 0usize..2,
    ) {
        let (g, r) = instance(seed, 3, 3, 2, false);
        let small = relation_from_mask(&g, &r, w);
        let large = relation_from_mask(&g, &r, w | extra);
        let target = relation_from_mask(&g, &r, w2);
        let wider = relation_from_mask(&g, &r, w2 | extra2);
        let e = g.alphabet().events().nth(e).unwrap();
        if match_predicate(&g, &r, &large, e, &target).unwrap() {
            prop_assert!(match_predicate(&g, &r, &small, e, &target).unwrap());
            prop_assert!(match_predicate(&g, &r, &large, e, &wider).unwrap());
        }
    }

    #[test]
    fn strategies_agree(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, events in 1usize..3) {
        let (g, r) = instance(seed, n, m, events, false);
        prop_assume!(small_universe(&g, &r, 9));
        let config = |strategy| SynthesisConfig { strategy, ..SynthesisConfig::default() };
        let a = greatest_fixpoint(&g, &r, &config(Strategy::Antichain)).unwrap();
        let b = greatest_fixpoint(&g, &r, &config(Strategy::Enumeration)).unwrap();
        prop_assert_eq!(&a.family, &b.family);
        prop_assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn greatest_family_is_a_closed_fixpoint(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let (g, r) = instance(seed, n, m, 2, false);
        prop_assume!(small_universe(&g, &r, 12));
        let top = greatest_family(&g, &r).unwrap();
        prop_assert!(top.is_downward_closed());
        prop_assert_eq!(f_step(&top, &g, &r).unwrap(), top.clone());
        prop_assert_eq!(is_controllability_family(&top, &g, &r).unwrap(), is_solvable(&g, &r).unwrap());
    }

    #[test]
    fn synthesized_supervisors_verify(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, events in 1usize..4) {
        let (g, r) = instance(seed, n, m, events, false);
        prop_assume!(small_universe(&g, &r, 9));
        let out = synthesize(&g, &r).unwrap();
        prop_assert_eq!(out.solvable, is_solvable(&g, &r).unwrap());
        if out.solvable {
            prop_assert!(out.report.unwrap().overall);
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), n in 1usize..6, events in 1usize..4, det in any::<bool>()) {
        let (g, _) = instance(seed, n, 1, events, det);
        let text = serialize_automaton(&g);
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(serialize_automaton(&back), text);
        prop_assert!(isomorphic(&g, &back));
    }

    #[test]
    fn larger_families_give_more_permissive_supervisors(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let (g, r) = instance(seed, n, m, 2, false);
        prop_assume!(small_universe(&g, &r, 8));
        let top = greatest_family(&g, &r).unwrap();
        let maxes = top.maximal_members();
        prop_assume!(maxes.len() <= 8);
        let big = match build_supervisor(&top, &g, &r) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let sim = RelationKind::simulation(g.alphabet());
        for pick in 1u32..(1 << maxes.len()) {
            let chosen = maxes.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &w)| w);
            let sub = PairSetFamily::new(top.universe().to_vec(), chosen).unwrap();
            if !is_controllability_family(&sub, &g, &r).unwrap() {
                continue;
            }
            if let Ok(small) = build_supervisor(&sub, &g, &r) {
                prop_assert!(holds(small.automaton(), big.automaton(), &sim).unwrap().holds);
            }
        }
    }
}
