use super::ExtTable;
use serde::Serialize;

/// `e(G_a, G_b)` for every ordered pair: the smallest `p` with a nonzero
/// `Ext^p`, `None` when all vanish.
pub fn relative_heights(t: &ExtTable) -> Vec<Vec<Option<u32>>> {
    t.triples()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| [x.h0, x.h1, x.h2].iter().position(|&h| h != 0).map(|p| p as u32))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoheightBound {
    /// Lower bound for the anticanonical pseudoheight.
    pub lower_bound: i64,
    /// A chain `a_0 < … < a_p` attaining it, with the wrap term taken as 0.
    pub chain: Vec<usize>,
}

/// Minimum over chains `a_0 < … < a_p` of `Σ e(a_{i-1}, a_i) - p + w` with
/// the wrap term `w` replaced by its lower bound 0.
///
/// `best[b]` is the smallest value of a chain ending at `b`; a one-element
/// chain contributes 0 and each further link `a → b` adds `e(a,b) - 1`.
pub fn pseudoheight_ac(e: &[Vec<Option<u32>>]) -> PseudoheightBound {
    let n = e.len();
    let mut best = vec![0i64; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for b in 0..n {
        for a in 0..b {
            if let Some(h) = e[a][b] {
                let v = best[a] + h as i64 - 1;
                if v < best[b] {
                    best[b] = v;
                    prev[b] = Some(a);
                }
            }
        }
    }
    let Some((end, &lower_bound)) = best.iter().enumerate().min_by_key(|(_, v)| **v) else {
        return PseudoheightBound { lower_bound: 0, chain: Vec::new() };
    };
    let mut chain = vec![end];
    while let Some(a) = prev[*chain.last().unwrap()] {
        chain.push(a);
    }
    chain.reverse();
    PseudoheightBound { lower_bound, chain }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    fn brute(e: &[Vec<Option<u32>>]) -> i64 {
        let n = e.len();
        let mut best = 0i64;
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let mut sum = 0i64;
            let mut finite = true;
            for w in idx.windows(2) {
                match e[w[0]][w[1]] {
                    Some(h) => sum += h as i64,
                    None => finite = false,
                }
            }
            if finite {
                best = best.min(sum - (idx.len() as i64 - 1));
            }
        }
        best
    }

    #[test]
    fn toy_tables() {
        assert_eq!(pseudoheight_ac(&[vec![None]]).lower_bound, 0);
        assert_eq!(pseudoheight_ac(&[]).lower_bound, 0);
        let two = vec![vec![None, Some(1)], vec![None, None]];
        assert_eq!(pseudoheight_ac(&two).lower_bound, 0);
        let zero = vec![vec![None, Some(0), None], vec![None, None, Some(0)], vec![None, None, None]];
        let r = pseudoheight_ac(&zero);
        assert_eq!(r.lower_bound, -2);
        assert_eq!(r.chain, vec![0, 1, 2]);
    }

    #[test]
    fn matches_brute_force() {
        let strat = (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec(proptest::option::of(0u32..4), n * n).prop_map(move |v| {
                v.chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>()
            })
        });
        let mut runner = TestRunner::new_with_rng(
            Config { cases: 256, ..Config::default() },
            TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]),
        );
        runner
            .run(&strat, |e| {
                let r = pseudoheight_ac(&e);
                prop_assert_eq!(r.lower_bound, brute(&e));
                let mut v = 0i64;
                for w in r.chain.windows(2) {
                    v += e[w[0]][w[1]].unwrap() as i64 - 1;
                }
                prop_assert_eq!(v, r.lower_bound);
                Ok(())
            })
            .unwrap();
    }
}
