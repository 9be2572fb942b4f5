mod common;

use common::{
    eval_lasso, oracle_suite, path_lasso, random_deterministic, random_dtmc, random_formula,
};
use pltl_learn::bench::{random_strategy, uniform_strategy, Grid, DEFAULT_LAYOUT};
use pltl_learn::dtmc::{bsccs, sccs, Chain, Dtmc};
use pltl_learn::engine::{check_ltl, check_ltl_inspect, ProbVector};
use pltl_learn::learner::enumerate::Enumerator;
use pltl_learn::ltl::{parse_ltl, Ltl};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AP: [&str; 2] = ["a", "b"];

fn check(m: &Dtmc, f: &Ltl) -> ProbVector {
    check_ltl(m, f).unwrap_or_else(|e| panic!("{f}: {e}"))
}

fn small_formulas(max_size: usize) -> Vec<Ltl> {
    let ap: Vec<String> = AP.iter().map(|p| p.to_string()).collect();
    let mut e = Enumerator::new(&ap, 2).unwrap();
    while e.size() < max_size {
        e.grow();
    }
    (1..=max_size).flat_map(|n| e.formulas(n)).collect()
}

#[test]
fn engine_matches_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let m = random_dtmc(&mut rng, 20, &AP);
        for case in oracle_suite() {
            let got = check(&m, &parse_ltl(case.formula).unwrap());
            let want = (case.oracle)(&m);
            for (s, (g, w)) in got.values().iter().zip(&want).enumerate() {
                assert!(
                    (g - w).abs() <= 1e-6,
                    "{} at state {s}: {g} vs {w}",
                    case.formula
                );
            }
        }
    }
}

#[test]
fn deterministic_chains_agree_with_lasso_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let m = random_deterministic(&mut rng, 10, &AP);
        let f = random_formula(&mut rng, &AP, 4);
        let v = check(&m, &f);
        for s in 0..m.num_states() {
            let expect = eval_lasso(&f, &path_lasso(&m, s), &AP) & 1 == 1;
            let got = v.get(s);
            assert!(
                (got - if expect { 1.0 } else { 0.0 }).abs() < 1e-9,
                "{f} at state {s}: {got}, lasso says {expect}"
            );
        }
    }
}

#[test]
fn refinement_stays_stochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let m = random_dtmc(&mut rng, 12, &AP);
        let f = random_formula(&mut rng, &AP, 4);
        let mut worst: f64 = 0.0;
        check_ltl_inspect(&m, &f, |c| worst = worst.max(c.stochastic_defect())).unwrap();
        assert!(worst <= 1e-9, "{f}: defect {worst}");
    }
}

#[test]
fn boolean_connectives_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let formulas = small_formulas(3);
    for _ in 0..2 {
        let m = random_dtmc(&mut rng, 8, &AP);
        let values: Vec<ProbVector> = formulas.iter().map(|f| check(&m, f)).collect();
        for (i, f) in formulas.iter().enumerate() {
            for (j, g) in formulas.iter().enumerate().skip(i + 1) {
                let or = check(&m, &Ltl::or(f.clone(), g.clone()));
                let and = check(&m, &Ltl::and(f.clone(), g.clone()));
                for s in 0..m.num_states() {
                    let (x, y) = (values[i].get(s), values[j].get(s));
                    assert!(or.get(s) >= x.max(y) - 1e-9, "{f} | {g} at {s}");
                    assert!(and.get(s) <= x.min(y) + 1e-9, "{f} & {g} at {s}");
                }
            }
        }
    }
}

#[test]
fn zero_vectors_survive_wrapping() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let formulas = small_formulas(3);
    let mut zeros = 0;
    for _ in 0..10 {
        let m = random_dtmc(&mut rng, 10, &AP);
        for f in &formulas {
            if !check(&m, f).is_all_zero(1e-12) {
                continue;
            }
            zeros += 1;
            let psi = &formulas[rng.gen_range(0..formulas.len())];
            let wrapped = [
                Ltl::next(f.clone()),
                Ltl::finally(f.clone()),
                Ltl::globally(f.clone()),
                Ltl::until(psi.clone(), f.clone()),
                Ltl::and(psi.clone(), f.clone()),
            ];
            for w in &wrapped {
                assert!(
                    check(&m, w).is_all_zero(1e-12),
                    "{w} is not zero although {f} is"
                );
            }
        }
    }
    assert!(zeros > 0, "no zero vector was exercised");
}

#[test]
fn tautology_folds_back_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..30 {
        let m = random_dtmc(&mut rng, 15, &AP);
        // temporal prefix forces refinements before the tautology is read
        let f = parse_ltl("(a | !a) | (F G a & X b)").unwrap();
        assert!(check(&m, &f)
            .values()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-9));
        let f = parse_ltl("G F b | F G !b").unwrap();
        assert!(check(&m, &f)
            .values()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-9));
    }
}

fn closure(m: &Dtmc) -> Vec<Vec<bool>> {
    let n = m.num_states();
    let mut r = vec![vec![false; n]; n];
    for (s, row) in r.iter_mut().enumerate() {
        row[s] = true;
        for &(t, _) in m.successors(s) {
            row[t] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let via = r[k].clone();
                for (x, y) in r[i].iter_mut().zip(via) {
                    *x |= y;
                }
            }
        }
    }
    r
}

#[test]
fn bottom_components_match_transitive_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let m = random_dtmc(&mut rng, 12, &AP);
        let r = closure(&m);
        let n = m.num_states();
        let mut expect: Vec<usize> = (0..n)
            .filter(|&s| (0..n).all(|t| !r[s][t] || r[t][s]))
            .collect();
        let mut got: Vec<usize> = bsccs(&m).into_iter().flatten().collect();
        got.sort_unstable();
        expect.sort_unstable();
        assert_eq!(got, expect);
        for comp in sccs(&m) {
            for &s in &comp {
                for &t in &comp {
                    assert!(
                        r[s][t],
                        "{s} and {t} share a component but {t} is unreachable"
                    );
                }
            }
        }
    }
}

#[test]
fn induced_chains_validate() {
    let mdp = Grid::parse(DEFAULT_LAYOUT).unwrap().mdp(1.0 / 3.0).unwrap();
    mdp.induced_dtmc(&uniform_strategy(&mdp))
        .unwrap()
        .validate()
        .unwrap();
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_strategy(&mdp, &mut rng);
        let m = mdp.induced_dtmc(&s).unwrap();
        assert_eq!(m.validate(), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn safety_and_reachability_are_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_dtmc(&mut rng, 20, &AP);
        let g = check(&m, &parse_ltl("G a").unwrap());
        let f = check(&m, &parse_ltl("F !a").unwrap());
        for s in 0..m.num_states() {
            prop_assert!((g.get(s) + f.get(s) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn probabilities_stay_in_range(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_dtmc(&mut rng, 12, &AP);
        let f = random_formula(&mut rng, &AP, 4);
        let v = check(&m, &f);
        prop_assert_eq!(v.len(), m.num_states());
        prop_assert!(v.values().iter().all(|x| (0.0..=1.0).contains(x)));
    }
}
