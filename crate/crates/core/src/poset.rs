//! Small dense-relation helpers for finite posets.

/// Reflexive-transitive closure of `pairs` (each `(a, b)` meaning `a <= b`)
/// on `0..n`.
pub fn reflexive_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    leq
}

/// First pair of distinct elements below each other, if the relation is not
/// antisymmetric.
pub fn antisymmetry_witness(leq: &[Vec<bool>]) -> Option<(usize, usize)> {
    let n = leq.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| leq[i][j] && leq[j][i])
}

/// Pairs `(lower, upper)` with `lower < upper` and nothing strictly between.
pub fn covering_pairs(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut out = Vec::new();
    for lo in 0..n {
        for up in 0..n {
            if lo != up
                && leq[lo][up]
                && !(0..n).any(|m| m != lo && m != up && leq[lo][m] && leq[m][up])
            {
                out.push((lo, up));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_closure_and_covers() {
        let leq = reflexive_closure(3, &[(0, 1), (1, 2)]);
        assert!(leq[0][2]);
        assert!(!leq[2][0]);
        assert_eq!(covering_pairs(&leq), vec![(0, 1), (1, 2)]);
        assert_eq!(antisymmetry_witness(&leq), None);
    }

    #[test]
    fn cycles_break_antisymmetry() {
        let leq = reflexive_closure(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(antisymmetry_witness(&leq), Some((0, 1)));
    }
}
