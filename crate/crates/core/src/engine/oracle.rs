//! Reference computations that bypass refinement, for cross-checking
//! [`check_ltl`](super::check_ltl).
//!
//! Almost every path eventually stays inside one bottom SCC and visits each
//! of its states infinitely often, so `GF a` and `FG a` reduce to reaching
//! the right kind of bottom SCC.

use super::{until_prob, EngineError};
use crate::dtmc::{bsccs, Chain};

fn reach_bsccs_where<C: Chain + ?Sized>(
    chain: &C,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Vec<f64>, EngineError> {
    let n = chain.num_states();
    let mut target = vec![false; n];
    for comp in bsccs(chain) {
        if accept(&comp) {
            for s in comp {
                target[s] = true;
            }
        }
    }
    until_prob(chain, &vec![true; n], &target)
}

/// `Pr_s(G F a)`: probability of reaching a bottom SCC containing an
/// `a`-state.
pub fn gf_oracle<C: Chain + ?Sized>(chain: &C, a: &[bool]) -> Result<Vec<f64>, EngineError> {
    reach_bsccs_where(chain, |comp| comp.iter().any(|&s| a[s]))
}

/// `Pr_s(F G a)`: probability of reaching a bottom SCC made only of
/// `a`-states.
pub fn fg_oracle<C: Chain + ?Sized>(chain: &C, a: &[bool]) -> Result<Vec<f64>, EngineError> {
    reach_bsccs_where(chain, |comp| comp.iter().all(|&s| a[s]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtmc::Dtmc;

    #[test]
    fn one_bottom_component_of_each_kind() {
        // s0 -0.5-> s1{a}, -0.5-> s2; both absorbing
        let m = Dtmc::from_triples(
            vec!["a".into()],
            0,
            vec![vec![], vec![0], vec![]],
            &[(0, 1, 0.5), (0, 2, 0.5), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        let a = m.prop_states("a");
        assert!((gf_oracle(&m, &a).unwrap()[0] - 0.5).abs() < 1e-12);
        assert!((fg_oracle(&m, &a).unwrap()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strongly_connected_with_one_a_state() {
        let m = Dtmc::from_triples(
            vec!["a".into()],
            0,
            vec![vec![], vec![0], vec![]],
            &[(0, 1, 0.5), (0, 2, 0.5), (1, 0, 1.0), (2, 0, 1.0)],
        )
        .unwrap();
        let a = m.prop_states("a");
        assert_eq!(gf_oracle(&m, &a).unwrap(), vec![1.0; 3]);
        assert_eq!(fg_oracle(&m, &a).unwrap(), vec![0.0; 3]);
        let none = vec![false; 3];
        assert_eq!(gf_oracle(&m, &none).unwrap(), vec![0.0; 3]);
        assert_eq!(fg_oracle(&m, &none).unwrap(), vec![0.0; 3]);
    }
}
