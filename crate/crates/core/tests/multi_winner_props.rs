use fvr_core::oracles::{
    conditional_expected_score, enumerate_instances, gen_jr_hard, gen_party_split, gen_symmetric,
    jr_by_subsets, random_instance, DEFAULT_BUDGET,
};
use fvr_core::{
    all_committees, binomial, brute_best_committee, committee_score, empirical_fvr_committee,
    expanded_rule, flexibility_grid, hyp_cdf, jr_check, multiwinner_bound, ropt_winner,
    sequential_picks, sequential_rule, Frac, HypParams, Instance, MultiParams,
};
use proptest::prelude::*;

fn all_params(m: usize) -> impl Iterator<Item = MultiParams> {
    (1..m).flat_map(move |k| (1..=k).map(move |t| MultiParams::new(k, t, m).unwrap()))
}

fn included_voters(inst: &Instance, params: MultiParams) -> usize {
    (0..inst.n())
        .filter(|&i| {
            let hp = HypParams::new(inst.m(), inst.approval_count(i), params.k()).unwrap();
            !hyp_cdf(&hp, params.t() as i64 - 1).is_zero()
        })
        .count()
}

fn check_rules(inst: &Instance, params: MultiParams) {
    let (k, t, m) = (params.k(), params.t(), inst.m());
    let seq = sequential_rule(inst, params).unwrap();
    assert!(
        committee_score(inst, &seq, t) <= Frac::from(inst.n()),
        "score bound on {inst:?}, k={k} t={t}"
    );
    let exp = expanded_rule(inst, params).unwrap();
    for s in flexibility_grid(m) {
        let bound = multiwinner_bound(m, &s, k, t).unwrap();
        for (name, w) in [("sequential", &seq), ("expanded", &exp)] {
            let audit = empirical_fvr_committee(inst, w, &s, t);
            assert!(
                audit <= bound,
                "{name} audit {audit} > {bound} at s={s}, k={k}, t={t} on {inst:?}"
            );
        }
        let best = brute_best_committee(inst, params, &s).unwrap();
        assert!(empirical_fvr_committee(inst, &best, &s, t) <= bound);
    }
}

fn check_conditional_expectations(inst: &Instance, params: MultiParams) {
    let picks = sequential_picks(inst, params).unwrap();
    let mut prev = conditional_expected_score(inst, params, &[]).unwrap();
    assert_eq!(prev, Frac::from(included_voters(inst, params)));
    for j in 1..=picks.len() {
        let next = conditional_expected_score(inst, params, &picks[..j]).unwrap();
        assert!(
            next <= prev,
            "step {j} raised the conditional expectation on {inst:?}"
        );
        prev = next;
    }
}

#[test]
fn small_sweep() {
    for n in 1..=3 {
        for m in 2..=4 {
            for inst in enumerate_instances(n, m, DEFAULT_BUDGET).unwrap() {
                for params in all_params(m) {
                    check_rules(&inst, params);
                    check_conditional_expectations(&inst, params);
                }
                let single = MultiParams::new(1, 1, m).unwrap();
                let a = ropt_winner(&inst);
                assert_eq!(sequential_rule(&inst, single).unwrap().members(), &[a]);
                assert_eq!(expanded_rule(&inst, single).unwrap().members(), &[a]);
            }
        }
    }
}

#[test]
fn expected_score_identity() {
    for seed in 0..40 {
        let m = 3 + seed as usize % 3;
        let inst = random_instance(4, m, seed).unwrap();
        for params in all_params(m) {
            let total: Frac = all_committees(m, params.k())
                .map(|w| committee_score(&inst, &w, params.t()))
                .sum();
            let count = Frac::from(
                binomial(m, params.k())
                    .to_string()
                    .parse::<usize>()
                    .unwrap(),
            );
            assert_eq!(total / count, Frac::from(included_voters(&inst, params)));
        }
    }
}

#[test]
fn symmetric_instances_are_uniformly_disapproved() {
    for m in 2..=6 {
        for l in 1..m {
            let inst = gen_symmetric(m, l).unwrap();
            let s = Frac::ratio(l, m);
            for params in all_params(m) {
                let expected = multiwinner_bound(m, &s, params.k(), params.t()).unwrap();
                for w in all_committees(m, params.k()) {
                    assert_eq!(empirical_fvr_committee(&inst, &w, &s, params.t()), expected);
                }
            }
        }
    }
}

#[test]
fn generator_outputs_respect_bounds() {
    let mut instances = vec![
        gen_party_split(2, 1).unwrap(),
        gen_party_split(3, 2).unwrap(),
    ];
    for m in 4..=7 {
        for k in 2..m.min(4) {
            instances.push(gen_jr_hard(m, k).unwrap());
        }
        instances.push(gen_symmetric(m, 2).unwrap());
    }
    for inst in &instances {
        for params in all_params(inst.m()) {
            if binomial(inst.m(), params.k()) <= 2000u32.into() {
                check_rules(inst, params);
            }
        }
    }
}

#[test]
fn jr_check_matches_subset_oracle() {
    for seed in 0..150u64 {
        let n = 1 + seed as usize % 6;
        let m = 2 + seed as usize % 5;
        let inst = random_instance(n, m, seed).unwrap();
        for k in 1..m {
            for w in all_committees(m, k) {
                assert_eq!(
                    jr_check(&inst, &w).passes(),
                    jr_by_subsets(&inst, &w),
                    "{inst:?} {w}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_instances_respect_bounds(n in 1usize..9, m in 2usize..7, seed in any::<u64>()) {
        let inst = random_instance(n, m, seed).unwrap();
        for params in all_params(m) {
            check_rules(&inst, params);
        }
    }
}
