//! The iterated blow-up of a single hyperedge and the extremal product-sum
//! bound, each with an exact counting companion.

use std::collections::HashMap;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

/// Part sizes used at every recursion level: `floor(n/3)`,
/// `floor((n+1)/3)`, `floor((n+2)/3)`.
pub fn part_sizes(n: usize) -> [usize; 3] {
    [n / 3, (n + 1) / 3, n.div_ceil(3)]
}

/// Materializes the iterated blow-up on `n` vertices: all crossing triples
/// over the three parts, plus a recursive copy inside each part. Parts
/// occupy contiguous vertex ranges, first part first; no edges for
/// `n <= 2`.
pub fn iterated_blowup(n: usize) -> Result<Hypergraph3> {
    if n == 0 {
        return Err(Error::invalid("iterated blow-up needs at least one vertex"));
    }
    let total = e_n_edge_count(n);
    let cap = crate::max_edges_cap();
    if total > cap as u64 {
        return Err(Error::ResourceLimit(format!(
            "iterated blow-up on {n} vertices has {total} edges, cap is {cap}"
        )));
    }
    let mut h = Hypergraph3::new(n);
    fill(&mut h, 0, n)?;
    debug_assert_eq!(h.edge_count() as u64, total);
    Ok(h)
}

fn fill(h: &mut Hypergraph3, offset: u32, n: usize) -> Result<()> {
    if n <= 2 {
        return Ok(());
    }
    let [s1, s2, s3] = part_sizes(n);
    let start2 = offset + s1 as u32;
    let start3 = start2 + s2 as u32;
    for a in offset..start2 {
        for b in start2..start3 {
            for c in start3..offset + n as u32 {
                h.insert([a, b, c])?;
            }
        }
    }
    fill(h, offset, s1)?;
    fill(h, start2, s2)?;
    fill(h, start3, s3)
}

/// Exact edge count of the iterated blow-up, by the size recursion alone.
pub fn e_n_edge_count(n: usize) -> u64 {
    fn rec(n: usize, memo: &mut HashMap<usize, u64>) -> u64 {
        if n <= 2 {
            return 0;
        }
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let [s1, s2, s3] = part_sizes(n);
        let v = (s1 * s2 * s3) as u64 + rec(s1, memo) + rec(s2, memo) + rec(s3, memo);
        memo.insert(n, v);
        v
    }
    rec(n, &mut HashMap::new())
}

/// Closed-form upper bound `floor(a/b) * b^2/4 + (a - b*floor(a/b))^2 / 4`
/// for the maximum of `sum x_i y_i` over non-negative integer sequences with
/// `sum (x_i + y_i) = a` and `x_j + y_j <= b`.
pub fn max_xy_sum_bound(a: i64, b: i64) -> Result<Rational64> {
    if b <= 0 || a < b {
        return Err(Error::invalid(format!("need a >= b > 0, got a={a}, b={b}")));
    }
    let q = a / b;
    let r = a - b * q;
    Ok(Rational64::new(q * b * b, 4) + Rational64::new(r * r, 4))
}

/// Exact integer maximum of `sum x_i y_i` by exhaustive search over all
/// partitions of `a` into parts of size at most `b`, with every split of
/// each part tried. Independent of the closed form above.
pub fn max_xy_sum_exact(a: i64, b: i64) -> Result<u64> {
    if b <= 0 || a < b {
        return Err(Error::invalid(format!("need a >= b > 0, got a={a}, b={b}")));
    }
    if a > 24 {
        return Err(Error::UnsupportedSize(format!(
            "exhaustive search capped at a <= 24, got {a}"
        )));
    }
    fn best_split(s: u64) -> u64 {
        (0..=s).map(|x| x * (s - x)).max().unwrap()
    }
    fn rec(remaining: u64, max_part: u64) -> u64 {
        if remaining == 0 {
            return 0;
        }
        let mut best = 0;
        for s in 1..=max_part.min(remaining) {
            best = best.max(best_split(s) + rec(remaining - s, s));
        }
        best
    }
    Ok(rec(a as u64, b as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn small_blowups() {
        assert!(iterated_blowup(0).is_err());
        assert!(iterated_blowup(1).unwrap().is_empty());
        assert!(iterated_blowup(2).unwrap().is_empty());
        assert_eq!(iterated_blowup(3).unwrap().edge_count(), 1);
        assert_eq!(iterated_blowup(9).unwrap().edge_count(), 30);
        assert_eq!(e_n_edge_count(3), 1);
        assert_eq!(e_n_edge_count(9), 30);
    }

    #[test]
    fn count_matches_materialization() {
        for n in 1..=40 {
            assert_eq!(
                iterated_blowup(n).unwrap().edge_count() as u64,
                e_n_edge_count(n),
                "count mismatch at n={n}"
            );
        }
        assert_eq!(
            iterated_blowup(27).unwrap().edge_count() as u64,
            e_n_edge_count(27)
        );
    }

    #[test]
    fn parts_sum() {
        for n in 1..100 {
            let [s1, s2, s3] = part_sizes(n);
            assert_eq!(s1 + s2 + s3, n);
            assert!(s1 <= s2 && s2 <= s3);
        }
    }

    #[test]
    fn edge_cap_guards_materialization() {
        assert!(matches!(
            iterated_blowup(5000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn xy_bound_examples() {
        assert_eq!(max_xy_sum_bound(4, 2).unwrap(), Rational64::from_integer(2));
        assert_eq!(max_xy_sum_bound(3, 3).unwrap(), Rational64::new(9, 4));
        assert_eq!(max_xy_sum_bound(5, 5).unwrap(), Rational64::new(25, 4));
        assert!(max_xy_sum_bound(2, 3).is_err());
        assert!(max_xy_sum_bound(2, 0).is_err());
    }

    #[test]
    fn xy_exact_examples() {
        assert_eq!(max_xy_sum_exact(4, 2).unwrap(), 2);
        assert_eq!(max_xy_sum_exact(5, 5).unwrap(), 6);
        assert_eq!(max_xy_sum_exact(1, 1).unwrap(), 0);
        assert!(max_xy_sum_exact(30, 2).is_err());
    }

    #[test]
    fn exact_never_exceeds_bound() {
        for a in 1..=12i64 {
            for b in 1..=a {
                let exact = max_xy_sum_exact(a, b).unwrap();
                let bound = max_xy_sum_bound(a, b).unwrap();
                assert!(
                    Rational64::from_integer(exact as i64) <= bound,
                    "a={a} b={b}: {exact} > {bound}"
                );
            }
        }
    }

    #[test]
    fn counts_meet_cubic_lower_bound() {
        for n in 2..=2000usize {
            let count = e_n_edge_count(n) as f64;
            let bound = (n as f64).powi(3) / 24.0 - 5.0 * n as f64 * (n as f64).log2();
            assert!(count >= bound, "n={n}: {count} < {bound}");
        }
    }

    #[test]
    fn bound_is_exact_rational() {
        let b = max_xy_sum_bound(7, 3).unwrap();
        // floor(7/3)=2, remainder 1: 2*9/4 + 1/4 = 19/4.
        assert_eq!(b, Rational64::new(19, 4));
        assert_eq!(b.to_f64().unwrap(), 4.75);
    }
}
