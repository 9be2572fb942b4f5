//! One-step and until probabilities for propositional operands.

use std::collections::VecDeque;

use super::linear::solve_in_place;
use super::EngineError;
use crate::dtmc::Chain;

/// `V(s) = sum of P(s, t)` over successors `t` satisfying `a`.
pub fn next_prob<C: Chain + ?Sized>(chain: &C, a: &[bool]) -> Vec<f64> {
    (0..chain.num_states())
        .map(|s| {
            let v: f64 = chain
                .successors(s)
                .iter()
                .filter(|(t, _)| a[*t])
                .map(|(_, p)| p)
                .sum();
            v.clamp(0.0, 1.0)
        })
        .collect()
}

fn predecessors<C: Chain + ?Sized>(chain: &C) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); chain.num_states()];
    for s in 0..chain.num_states() {
        for &(t, _) in chain.successors(s) {
            pred[t].push(s);
        }
    }
    pred
}

/// Backward closure of `seed` through states allowed by `through`.
fn backward(pred: &[Vec<usize>], seed: Vec<bool>, through: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut mark = seed;
    let mut queue: VecDeque<usize> = (0..mark.len()).filter(|&s| mark[s]).collect();
    while let Some(t) = queue.pop_front() {
        for &s in &pred[t] {
            if !mark[s] && through(s) {
                mark[s] = true;
                queue.push_back(s);
            }
        }
    }
    mark
}

/// `V(s) = Pr_s(a U b)`.
///
/// States with probability 0 or 1 are found by graph search, so those
/// entries are exact. The rest solve `x = P x` restricted to them, which is
/// nonsingular once the zero states are fixed.
pub fn until_prob<C: Chain + ?Sized>(
    chain: &C,
    a: &[bool],
    b: &[bool],
) -> Result<Vec<f64>, EngineError> {
    let n = chain.num_states();
    let pred = predecessors(chain);
    let positive = backward(&pred, b.to_vec(), |s| a[s]);
    let no: Vec<bool> = positive.iter().map(|p| !p).collect();
    let below_one = backward(&pred, no.clone(), |s| a[s] && !b[s]);

    let mut x: Vec<f64> = below_one
        .iter()
        .map(|&f| if f { 0.0 } else { 1.0 })
        .collect();
    let maybe: Vec<usize> = (0..n).filter(|&s| positive[s] && below_one[s]).collect();
    if maybe.is_empty() {
        return Ok(x);
    }
    let mut slot = vec![usize::MAX; n];
    for (i, &s) in maybe.iter().enumerate() {
        slot[s] = i;
    }
    let m = maybe.len();
    let mut mat = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for (i, &s) in maybe.iter().enumerate() {
        mat[i * m + i] += 1.0;
        for &(t, p) in chain.successors(s) {
            if slot[t] != usize::MAX {
                mat[i * m + slot[t]] -= p;
            } else if !below_one[t] {
                rhs[i] += p;
            }
        }
    }
    solve_in_place(&mat, &mut rhs)?;
    for (i, &s) in maybe.iter().enumerate() {
        x[s] = rhs[i].clamp(0.0, 1.0);
    }
    Ok(x)
}

/// `V(s) = Pr_s(F a)`.
pub fn finally_prob<C: Chain + ?Sized>(chain: &C, a: &[bool]) -> Result<Vec<f64>, EngineError> {
    until_prob(chain, &vec![true; chain.num_states()], a)
}

/// `V(s) = Pr_s(G a) = 1 - Pr_s(F !a)`.
pub fn globally_prob<C: Chain + ?Sized>(chain: &C, a: &[bool]) -> Result<Vec<f64>, EngineError> {
    let not_a: Vec<bool> = a.iter().map(|v| !v).collect();
    Ok(finally_prob(chain, &not_a)?
        .into_iter()
        .map(|v| 1.0 - v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtmc::Dtmc;

    // s0 -0.3-> s1{a}, -0.7-> s2; s1, s2 absorbing
    fn c1() -> Dtmc {
        Dtmc::from_triples(
            vec!["a".into()],
            0,
            vec![vec![], vec![0], vec![]],
            &[(0, 1, 0.3), (0, 2, 0.7), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap()
    }

    // s0 -0.5-> s0, -0.5-> s1{a}; s1 absorbing
    fn c2() -> Dtmc {
        Dtmc::from_triples(
            vec!["a".into()],
            0,
            vec![vec![], vec![0]],
            &[(0, 0, 0.5), (0, 1, 0.5), (1, 1, 1.0)],
        )
        .unwrap()
    }

    // s0{a} -0.4-> s1{b}, -0.6-> s2; absorbing
    fn c3() -> Dtmc {
        Dtmc::from_triples(
            vec!["a".into(), "b".into()],
            0,
            vec![vec![0], vec![1], vec![]],
            &[(0, 1, 0.4), (0, 2, 0.6), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn next_one_step_sums() {
        let m = c1();
        let v = next_prob(&m, &m.prop_states("a"));
        assert!((v[0] - 0.3).abs() < 1e-12);
        assert_eq!(v[1], 1.0);
        let m = c2();
        assert_eq!(next_prob(&m, &m.prop_states("a"))[0], 0.5);
    }

    #[test]
    fn until_examples() {
        let m = c3();
        let v = until_prob(&m, &m.prop_states("a"), &m.prop_states("b")).unwrap();
        assert!((v[0] - 0.4).abs() < 1e-12);
        assert_eq!(v, vec![v[0], 1.0, 0.0]);

        let m = c2();
        let v = until_prob(&m, &[true, true], &m.prop_states("a")).unwrap();
        assert_eq!(v, vec![1.0, 1.0]);

        let v = until_prob(&m, &[true, true], &[false, false]).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn until_needs_solve_for_loops() {
        // s0 -0.5-> s0, -0.25-> s1{b}, -0.25-> s2; all a except s2
        let m = Dtmc::from_triples(
            vec![],
            0,
            vec![vec![]; 3],
            &[
                (0, 0, 0.5),
                (0, 1, 0.25),
                (0, 2, 0.25),
                (1, 1, 1.0),
                (2, 2, 1.0),
            ],
        )
        .unwrap();
        let v = until_prob(&m, &[true, true, false], &[false, true, false]).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn globally_complements_finally() {
        let m = c1();
        let not_a: Vec<bool> = m.prop_states("a").iter().map(|v| !v).collect();
        let v = globally_prob(&m, &not_a).unwrap();
        assert!((v[0] - 0.7).abs() < 1e-12);
        assert_eq!(v[1], 0.0);
        assert_eq!(v[2], 1.0);
    }
}
