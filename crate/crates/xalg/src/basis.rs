//! Lexicographic k-subset indexing.

use crate::{Result, XalgError, MAX_DIM};

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All k-subsets of `{0..n}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Position of a strictly increasing index set in the lexicographic order.
pub fn rank(n: usize, set: &[usize]) -> Result<usize> {
    validate(n, set)?;
    let k = set.len();
    let mut r = 0;
    let mut prev = 0;
    for (pos, &s) in set.iter().enumerate() {
        for skipped in prev..s {
            r += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = s + 1;
    }
    Ok(r)
}

pub(crate) fn validate(n: usize, set: &[usize]) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(XalgError::UnsupportedDimension(n));
    }
    let ok = set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&s| s < n);
    if ok {
        Ok(())
    } else {
        Err(XalgError::InvalidIndexSet(set.to_vec()))
    }
}

/// Sorts an arbitrary index tuple, returning the sorted set and the sign of
/// the sorting permutation, or `None` when an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Concatenates two sorted sets. Returns the merged set and the sign of the
/// shuffle, or `None` if they intersect.
pub fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            if i < a.len() && a[i] == b[j] {
                return None;
            }
            // b[j] jumps over the remaining elements of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    Some((out, sign))
}

/// Complement of a sorted set in `{0..n}`.
pub fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn rank_inverts_enumeration() {
        for n in 1..=8 {
            for k in 0..=n {
                let all = subsets(n, k);
                assert_eq!(all.len(), binomial(n, k));
                for (i, s) in all.iter().enumerate() {
                    assert_eq!(rank(n, s).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn merge_signs() {
        assert_eq!(merge(&[0], &[1]), Some((vec![0, 1], 1.0)));
        assert_eq!(merge(&[1], &[0]), Some((vec![0, 1], -1.0)));
        assert_eq!(merge(&[0, 2], &[1]), Some((vec![0, 1, 2], -1.0)));
        assert_eq!(merge(&[0], &[0]), None);
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1.0)));
        assert_eq!(sort_with_sign(&[1, 0, 2]), Some((vec![0, 1, 2], -1.0)));
    }

    #[test]
    fn rank_rejects_bad_sets() {
        assert!(rank(3, &[1, 0]).is_err());
        assert!(rank(3, &[0, 3]).is_err());
        assert!(rank(9, &[0]).is_err());
    }
}
