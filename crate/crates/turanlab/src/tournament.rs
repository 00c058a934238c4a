//! Tournaments, cyclic-triangle counting, and the small tournaments the
//! stability analysis singles out.
//!
//! The orientation is a row-major bit matrix so that arc queries inside the
//! triple-enumeration loops are single bit tests.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::walks::naive_contains;

/// A complete oriented graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Tournament {
    /// Tournament with every pair oriented from the lower to the higher
    /// vertex (the transitive tournament).
    pub fn transitive(n: usize) -> Self {
        let mut t = Tournament::empty(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                t.set_arc(u, v);
            }
        }
        t
    }

    fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64);
        Tournament {
            n,
            stride,
            bits: vec![0u64; stride * n],
        }
    }

    /// Builds from an arc list, requiring exactly one arc per pair.
    pub fn from_arcs(n: usize, arcs: &[(u32, u32)]) -> Result<Self> {
        let mut t = Tournament::empty(n);
        let mut seen = vec![false; n * n];
        for &(u, v) in arcs {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!("bad arc {u}->{v} for n={n}")));
            }
            let key = u.min(v) as usize * n + u.max(v) as usize;
            if seen[key] {
                return Err(Error::invalid(format!("pair {{{u},{v}}} oriented twice")));
            }
            seen[key] = true;
            t.set_arc(u, v);
        }
        let expected = n * (n - 1) / 2;
        let got = arcs.len();
        if got != expected {
            return Err(Error::invalid(format!(
                "expected {expected} arcs, got {got}"
            )));
        }
        Ok(t)
    }

    /// Decodes from the bit encoding used by [`all_tournaments`]: pair
    /// `(i, j)` with `i < j` in lexicographic order corresponds to one bit,
    /// set meaning `i -> j`.
    pub fn from_bit_code(n: usize, code: u64) -> Self {
        let mut t = Tournament::empty(n);
        let mut bit = 0;
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                if code >> bit & 1 == 1 {
                    t.set_arc(i, j);
                } else {
                    t.set_arc(j, i);
                }
                bit += 1;
            }
        }
        t
    }

    /// The bit encoding described at [`Tournament::from_bit_code`].
    pub fn bit_code(&self) -> u64 {
        assert!(self.n <= 11, "bit code only defined for small tournaments");
        let mut code = 0u64;
        let mut bit = 0;
        for i in 0..self.n as u32 {
            for j in i + 1..self.n as u32 {
                if self.beats(i, j) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    /// Uniformly random tournament from the given generator.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        let mut t = Tournament::empty(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random::<bool>() {
                    t.set_arc(u, v);
                } else {
                    t.set_arc(v, u);
                }
            }
        }
        t
    }

    /// Circulant tournament on `Z_n`: `u -> v` iff `(v - u) mod n` lies in
    /// the difference set, which must contain exactly one of `{d, n-d}` for
    /// every nonzero residue `d`.
    pub fn circulant(n: usize, diffs: &[usize]) -> Result<Self> {
        let mut chosen = vec![false; n];
        for &d in diffs {
            if d == 0 || d >= n {
                return Err(Error::invalid(format!("difference {d} out of range")));
            }
            chosen[d] = true;
        }
        for (d, &picked) in chosen.iter().enumerate().skip(1) {
            if picked == chosen[n - d] {
                return Err(Error::invalid(format!(
                    "difference set must pick exactly one of {{{d}, {}}}",
                    n - d
                )));
            }
        }
        let mut t = Tournament::empty(n);
        for u in 0..n {
            for (d, &picked) in chosen.iter().enumerate().skip(1) {
                if picked {
                    t.set_arc(u as u32, ((u + d) % n) as u32);
                }
            }
        }
        Ok(t)
    }

    /// Rotational tournament on odd `n`: `u -> v` iff
    /// `(v - u) mod n <= (n-1)/2`. Regular, so it attains the cyclic
    /// triangle maximum.
    pub fn rotational(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::invalid("rotational tournament needs odd n"));
        }
        let diffs: Vec<usize> = (1..=(n - 1) / 2).collect();
        Tournament::circulant(n, &diffs)
    }

    /// Quadratic-residue tournament on a prime `p` congruent to 3 mod 4:
    /// `u -> v` iff `v - u` is a nonzero square mod `p`. (For other moduli
    /// the squares are not an antisymmetric difference set.)
    pub fn quadratic_residue(p: usize) -> Result<Self> {
        let mut squares = Vec::new();
        let mut is_square = vec![false; p];
        for x in 1..p {
            let s = x * x % p;
            if s != 0 && !is_square[s] {
                is_square[s] = true;
                squares.push(s);
            }
        }
        Tournament::circulant(p, &squares)
    }

    fn set_arc(&mut self, u: u32, v: u32) {
        let (u, v) = (u as usize, v as usize);
        self.bits[u * self.stride + v / 64] |= 1 << (v % 64);
        self.bits[v * self.stride + u / 64] &= !(1 << (u % 64));
    }

    /// Whether the arc `u -> v` is present.
    #[inline]
    pub fn beats(&self, u: u32, v: u32) -> bool {
        debug_assert!(u != v);
        self.bits[u as usize * self.stride + v as usize / 64] >> (v as usize % 64) & 1 == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn out_degree(&self, v: u32) -> usize {
        let row = &self.bits[v as usize * self.stride..(v as usize + 1) * self.stride];
        row.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.n - 1 - self.out_degree(v)
    }

    pub fn out_neighbors(&self, v: u32) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&u| u != v && self.beats(v, u))
            .collect()
    }

    pub fn in_neighbors(&self, v: u32) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&u| u != v && self.beats(u, v))
            .collect()
    }

    /// Whether the triple `{a,b,c}` is a directed 3-cycle.
    #[inline]
    pub fn is_cyclic_triple(&self, a: u32, b: u32, c: u32) -> bool {
        let ab = self.beats(a, b);
        let bc = self.beats(b, c);
        let ac = self.beats(a, c);
        (ab && bc && !ac) || (!ab && !bc && ac)
    }

    /// Number of cyclic triangles, computed by the closed form
    /// `C(n,3) - 1/2 * sum_v [C(d+(v),2) + C(d-(v),2)]` and cross-checked by
    /// direct triple enumeration. Panics if the two routes disagree.
    pub fn cyclic_triangle_count(&self) -> u64 {
        let enumerated = self.count_cyclic_by_enumeration();
        let closed = self.count_cyclic_closed_form();
        assert_eq!(
            closed, enumerated,
            "cyclic triangle closed form and enumeration disagree"
        );
        closed
    }

    fn count_cyclic_by_enumeration(&self) -> u64 {
        let mut count = 0u64;
        for a in 0..self.n as u32 {
            for b in a + 1..self.n as u32 {
                for c in b + 1..self.n as u32 {
                    if self.is_cyclic_triple(a, b, c) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn count_cyclic_closed_form(&self) -> u64 {
        let n = self.n as u64;
        let total = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
        let binom2 = |x: u64| x * x.saturating_sub(1) / 2;
        let non_cyclic: u64 = (0..self.n as u32)
            .map(|v| binom2(self.out_degree(v) as u64) + binom2(self.in_degree(v) as u64))
            .sum();
        debug_assert_eq!(non_cyclic % 2, 0);
        total - non_cyclic / 2
    }

    /// Number of cyclic triangles containing the pair `{u,v}`.
    pub fn pair_cyclic_count(&self, u: u32, v: u32) -> usize {
        (0..self.n as u32)
            .filter(|&w| w != u && w != v && self.is_cyclic_triple(u, v, w))
            .count()
    }

    /// The hypergraph whose edges are exactly the cyclic triangles.
    pub fn cyclic_hypergraph(&self) -> Hypergraph3 {
        let mut h = Hypergraph3::new(self.n);
        for a in 0..self.n as u32 {
            for b in a + 1..self.n as u32 {
                for c in b + 1..self.n as u32 {
                    if self.is_cyclic_triple(a, b, c) {
                        h.insert([a, b, c]).unwrap();
                    }
                }
            }
        }
        h
    }

    /// The near-regular vertex set: vertices whose in- and out-degrees both
    /// lie strictly between `(n-1)/2 - eps2*n` and `(n-1)/2 + eps2*n`.
    pub fn near_regular_set(&self, eps2: f64) -> Vec<u32> {
        let n = self.n as f64;
        let lo = (n - 1.0) / 2.0 - eps2 * n;
        let hi = (n - 1.0) / 2.0 + eps2 * n;
        (0..self.n as u32)
            .filter(|&v| {
                let dp = self.out_degree(v) as f64;
                let dm = self.in_degree(v) as f64;
                lo < dp && dp < hi && lo < dm && dm < hi
            })
            .collect()
    }

    /// Pairs lying in at most `eps2 * n` cyclic triangles.
    pub fn low_coverage_pairs(&self, eps2: f64) -> Vec<[u32; 2]> {
        let bound = eps2 * self.n as f64;
        let mut out = Vec::new();
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if self.pair_cyclic_count(u, v) as f64 <= bound {
                    out.push([u, v]);
                }
            }
        }
        out
    }

    /// Induced subtournament on the given vertices (in their sorted order).
    pub fn induced(&self, vertices: &[u32]) -> Tournament {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut t = Tournament::empty(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate() {
                if i != j && self.beats(u, v) {
                    t.set_arc(i as u32, j as u32);
                }
            }
        }
        t
    }

    /// Whether some relabeling turns `self` into `other`.
    pub fn isomorphic_to(&self, other: &Tournament) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut score_a: Vec<usize> = (0..self.n as u32).map(|v| self.out_degree(v)).collect();
        let mut score_b: Vec<usize> = (0..self.n as u32).map(|v| other.out_degree(v)).collect();
        score_a.sort_unstable();
        score_b.sort_unstable();
        if score_a != score_b {
            return false;
        }
        let mut perm: Vec<u32> = (0..self.n as u32).collect();
        permute_until(&mut perm, 0, &mut |p: &[u32]| {
            (0..self.n as u32).all(|u| {
                (0..self.n as u32).all(|v| {
                    u == v || self.beats(u, v) == other.beats(p[u as usize], p[v as usize])
                })
            })
        })
    }

    /// Number of vertex subsets inducing a copy of `d`.
    pub fn count_induced(&self, d: &Tournament) -> u64 {
        let k = d.vertex_count();
        if k > self.n {
            return 0;
        }
        let mut count = 0u64;
        let mut subset: Vec<u32> = Vec::with_capacity(k);
        count_induced_rec(self, d, 0, &mut subset, &mut count);
        count
    }

    /// Text form: `n <count>` then `a u v` per arc, pairs in lexicographic
    /// order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if self.beats(u, v) {
                    out.push_str(&format!("a {u} {v}\n"));
                } else {
                    out.push_str(&format!("a {v} {u}\n"));
                }
            }
        }
        out
    }

    /// Parses the text form, requiring exactly one arc per pair.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty file".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("n") {
            return Err(Error::Parse("expected header line 'n <count>'".into()));
        }
        let n: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
        let mut arcs = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            if it.next() != Some("a") {
                return Err(Error::Parse(format!("expected arc line, got '{line}'")));
            }
            let u: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad arc line '{line}'")))?;
            let v: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad arc line '{line}'")))?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("trailing tokens on '{line}'")));
            }
            arcs.push((u, v));
        }
        Tournament::from_arcs(n, &arcs).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn count_induced_rec(
    t: &Tournament,
    d: &Tournament,
    from: u32,
    subset: &mut Vec<u32>,
    count: &mut u64,
) {
    if subset.len() == d.vertex_count() {
        if t.induced(subset).isomorphic_to(d) {
            *count += 1;
        }
        return;
    }
    let needed = d.vertex_count() - subset.len();
    for v in from..=(t.vertex_count() as u32).saturating_sub(needed as u32) {
        subset.push(v);
        count_induced_rec(t, d, v + 1, subset, count);
        subset.pop();
    }
}

fn permute_until(
    items: &mut Vec<u32>,
    start: usize,
    pred: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if start == items.len() {
        return pred(items);
    }
    for i in start..items.len() {
        items.swap(start, i);
        if permute_until(items, start + 1, pred) {
            items.swap(start, i);
            return true;
        }
        items.swap(start, i);
    }
    false
}

/// Kendall–Smith upper bound on the number of cyclic triangles of an
/// `n`-vertex tournament: `(n^3 - n)/24` for odd `n`, `(n^3 - 4n)/24` for
/// even `n`.
pub fn kendall_smith_bound(n: u64) -> u64 {
    if n % 2 == 1 {
        (n * n * n - n) / 24
    } else {
        (n * n * n - 4 * n) / 24
    }
}

/// The five-vertex tournament the stability argument removes, with the
/// paper's vertex labels shifted to be 0-based.
pub fn d5() -> Tournament {
    Tournament::from_arcs(
        5,
        &[
            (0, 1),
            (0, 2),
            (3, 0),
            (4, 0),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (4, 2),
            (4, 3),
        ],
    )
    .unwrap()
}

/// All `2^C(n,2)` labeled tournaments on `n` vertices, in ascending bit-code
/// order.
pub fn all_tournaments(n: usize) -> impl Iterator<Item = Tournament> {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs < 64, "too many pairs to enumerate");
    (0u64..1 << pairs).map(move |code| Tournament::from_bit_code(n, code))
}

/// The labeled 5-vertex tournaments whose cyclic hypergraph contains an
/// injective copy of the tight 5-cycle minus one hyperedge, in ascending
/// bit-code order.
pub fn t5_family() -> Vec<Tournament> {
    let c5m = crate::hypergraph::cycle_minus_one(5);
    all_tournaments(5)
        .filter(|t| naive_contains(&t.cyclic_hypergraph(), &c5m, true).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn three_cycle() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn cyclic_count_examples() {
        assert_eq!(three_cycle().cyclic_triangle_count(), 1);
        for n in 1..10 {
            assert_eq!(Tournament::transitive(n).cyclic_triangle_count(), 0);
        }
        // The squares mod 5 are {1, 4} = {1, -1}, not an antisymmetric
        // difference set, so there is no quadratic-residue tournament here;
        // the regular rotational tournament plays its role.
        assert!(Tournament::quadratic_residue(5).is_err());
        let rot5 = Tournament::rotational(5).unwrap();
        assert!(rot5.beats(0, 1) && rot5.beats(0, 2) && !rot5.beats(0, 3));
        assert_eq!(rot5.cyclic_triangle_count(), 5);
    }

    #[test]
    fn kendall_smith_examples() {
        assert_eq!(kendall_smith_bound(5), 5);
        assert_eq!(kendall_smith_bound(4), 2);
        assert_eq!(kendall_smith_bound(1), 0);
        assert_eq!(kendall_smith_bound(0), 0);
    }

    #[test]
    fn regular_tournaments_attain_the_bound() {
        assert_eq!(
            Tournament::rotational(5).unwrap().cyclic_triangle_count(),
            kendall_smith_bound(5)
        );
        let qr7 = Tournament::quadratic_residue(7).unwrap();
        assert!(qr7.beats(0, 1) && qr7.beats(0, 2) && qr7.beats(0, 4));
        assert_eq!(qr7.cyclic_triangle_count(), kendall_smith_bound(7));
        assert_eq!(kendall_smith_bound(7), 14);
        assert_eq!(
            Tournament::rotational(7).unwrap().cyclic_triangle_count(),
            14
        );
    }

    #[test]
    fn cyclic_hypergraph_examples() {
        assert!(Tournament::transitive(5).cyclic_hypergraph().is_empty());
        assert_eq!(three_cycle().cyclic_hypergraph().edges(), vec![[0, 1, 2]]);
        assert_eq!(
            Tournament::rotational(5)
                .unwrap()
                .cyclic_hypergraph()
                .edge_count(),
            5
        );
    }

    #[test]
    fn near_regular_examples() {
        assert_eq!(three_cycle().near_regular_set(0.01), vec![0, 1, 2]);
        // Transitive on 5: degree list 4,3,2,1,0; only the middle vertex.
        assert_eq!(Tournament::transitive(5).near_regular_set(0.1), vec![2]);
        assert_eq!(
            Tournament::transitive(5).near_regular_set(1.0),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn low_coverage_examples() {
        assert!(three_cycle().low_coverage_pairs(0.1).is_empty());
        let t5 = Tournament::transitive(5);
        assert_eq!(t5.low_coverage_pairs(0.0).len(), 10);
        // A pair lies in at most n-2 triangles, so eps2*n >= n-2 is vacuous.
        let rot5 = Tournament::rotational(5).unwrap();
        assert_eq!(rot5.low_coverage_pairs(0.6).len(), 10);
    }

    #[test]
    fn epsilon_monotonicity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = Tournament::random(9, &mut rng);
            let mut prev_v = t.near_regular_set(0.0).len();
            let mut prev_b = t.low_coverage_pairs(0.0).len();
            for eps in [0.05, 0.1, 0.2, 0.4, 1.0] {
                let v = t.near_regular_set(eps).len();
                let b = t.low_coverage_pairs(eps).len();
                assert!(v >= prev_v && b >= prev_b);
                prev_v = v;
                prev_b = b;
            }
        }
    }

    #[test]
    fn d5_matches_figure() {
        let t = d5();
        let expected = [
            (0, 1),
            (0, 2),
            (3, 0),
            (4, 0),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (4, 2),
            (4, 3),
        ];
        for (u, v) in expected {
            assert!(t.beats(u, v), "expected {u}->{v}");
        }
        // Triangle on 0-based {0,1,3} is cyclic: 0->1, 1->3, 3->0.
        assert!(t.is_cyclic_triple(0, 1, 3));
        assert!(t.cyclic_triangle_count() > 0);
        // The 0-based pair {3,4} lies in no cyclic triangle.
        assert_eq!(t.pair_cyclic_count(3, 4), 0);
    }

    #[test]
    fn count_induced_examples() {
        let d = d5();
        assert_eq!(d.count_induced(&d), 1);
        assert_eq!(Tournament::transitive(8).count_induced(&d), 0);
        let single = Tournament::transitive(1);
        assert_eq!(Tournament::transitive(6).count_induced(&single), 6);
        assert_eq!(single.count_induced(&d), 0);
    }

    #[test]
    fn exhaustive_small_counts_stay_under_bound() {
        // cyclic_triangle_count itself asserts closed form == enumeration.
        for n in 0..=6 {
            for t in all_tournaments(n) {
                assert!(t.cyclic_triangle_count() <= kendall_smith_bound(n as u64));
            }
        }
    }

    #[test]
    fn cyclic_hypergraphs_avoid_k4_minus() {
        use crate::hypergraph::k4_minus;
        for n in 4..=5 {
            for t in all_tournaments(n) {
                assert!(!naive_contains(&t.cyclic_hypergraph(), &k4_minus(), true).unwrap());
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let t = Tournament::random(6, &mut rng);
            assert!(!naive_contains(&t.cyclic_hypergraph(), &k4_minus(), true).unwrap());
        }
    }

    #[test]
    fn score_sum_is_pair_count() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 5, 12, 20] {
            let t = Tournament::random(n, &mut rng);
            let total: usize = (0..n as u32).map(|v| t.out_degree(v)).sum();
            assert_eq!(total, n * (n - 1) / 2);
        }
    }

    #[test]
    fn text_roundtrip() {
        let t = d5();
        let text = t.to_text();
        assert_eq!(Tournament::from_text(&text).unwrap(), t);
        assert!(Tournament::from_text("n 3\na 0 1\na 1 2\n").is_err());
        assert!(Tournament::from_text("n 3\na 0 1\na 1 0\na 1 2\n").is_err());
    }

    #[test]
    fn bit_code_roundtrip() {
        for code in [0u64, 1, 37, 1023] {
            assert_eq!(Tournament::from_bit_code(5, code).bit_code(), code);
        }
    }

    #[test]
    fn circulant_validation() {
        assert!(Tournament::rotational(4).is_err());
        assert!(Tournament::circulant(5, &[1, 4]).is_err()); // both of {1, -1}
        assert!(Tournament::circulant(5, &[1]).is_err()); // pair {2, 3} unoriented
        assert!(Tournament::circulant(5, &[0, 1, 2]).is_err());
        assert!(Tournament::circulant(5, &[1, 2]).is_ok());
    }
}
