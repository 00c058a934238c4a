//! 3-uniform hypergraphs on dense vertex labels `0..n`.
//!
//! The edge set is a fixed-capacity bitset indexed by a combinatorial ranking
//! of triples for `n <= 64`, and a sorted triple list beyond that. Membership
//! tests are the hot operation of every detector in this crate, so they must
//! stay O(1) in the common case.

use crate::error::{Error, Result};

/// Number of ways to choose 2 from `x`.
#[inline]
pub(crate) fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// Number of ways to choose 3 from `x`.
#[inline]
pub(crate) fn binom3(x: usize) -> usize {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

/// Colex rank of a sorted triple `a < b < c`.
#[inline]
fn triple_rank(a: u32, b: u32, c: u32) -> usize {
    binom3(c as usize) + binom2(b as usize) + a as usize
}

/// Inverse of [`triple_rank`].
fn triple_unrank(mut r: usize) -> [u32; 3] {
    let mut c = 2usize;
    while binom3(c + 1) <= r {
        c += 1;
    }
    r -= binom3(c);
    let mut b = 1usize;
    while binom2(b + 1) <= r {
        b += 1;
    }
    r -= binom2(b);
    [r as u32, b as u32, c as u32]
}

fn sort3(t: [u32; 3]) -> [u32; 3] {
    let mut t = t;
    t.sort_unstable();
    t
}

const BITSET_MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum EdgeStore {
    /// Bit `triple_rank(a,b,c)` is set iff `{a,b,c}` is an edge.
    Bits { words: Vec<u64>, count: usize },
    /// Sorted list of sorted triples, for vertex counts past the bitset cap.
    List(Vec<[u32; 3]>),
}

/// A 3-uniform hypergraph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph3 {
    n: usize,
    store: EdgeStore,
}

impl Hypergraph3 {
    /// Empty hypergraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let store = if n <= BITSET_MAX_VERTICES {
            EdgeStore::Bits {
                words: vec![0u64; binom3(n).div_ceil(64)],
                count: 0,
            }
        } else {
            EdgeStore::List(Vec::new())
        };
        Hypergraph3 { n, store }
    }

    /// Builds from an edge list; duplicates collapse, invalid triples error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = [u32; 3]>,
    {
        let mut h = Hypergraph3::new(n);
        for t in edges {
            h.insert(t)?;
        }
        Ok(h)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        match &self.store {
            EdgeStore::Bits { count, .. } => *count,
            EdgeStore::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count() == 0
    }

    fn check_triple(&self, t: [u32; 3]) -> Result<[u32; 3]> {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] {
            return Err(Error::invalid(format!(
                "triple {{{},{},{}}} has a repeated vertex",
                t[0], t[1], t[2]
            )));
        }
        if s[2] as usize >= self.n {
            return Err(Error::invalid(format!(
                "vertex {} out of range for n={}",
                s[2], self.n
            )));
        }
        Ok(s)
    }

    /// Inserts an edge; returns whether it was new.
    pub fn insert(&mut self, t: [u32; 3]) -> Result<bool> {
        let s = self.check_triple(t)?;
        Ok(match &mut self.store {
            EdgeStore::Bits { words, count } => {
                let r = triple_rank(s[0], s[1], s[2]);
                let (w, m) = (r / 64, 1u64 << (r % 64));
                let fresh = words[w] & m == 0;
                words[w] |= m;
                if fresh {
                    *count += 1;
                }
                fresh
            }
            EdgeStore::List(v) => match v.binary_search(&s) {
                Ok(_) => false,
                Err(i) => {
                    v.insert(i, s);
                    true
                }
            },
        })
    }

    /// Removes an edge; returns whether it was present.
    pub fn remove(&mut self, t: [u32; 3]) -> bool {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] || s[2] as usize >= self.n {
            return false;
        }
        match &mut self.store {
            EdgeStore::Bits { words, count } => {
                let r = triple_rank(s[0], s[1], s[2]);
                let (w, m) = (r / 64, 1u64 << (r % 64));
                let present = words[w] & m != 0;
                words[w] &= !m;
                if present {
                    *count -= 1;
                }
                present
            }
            EdgeStore::List(v) => match v.binary_search(&s) {
                Ok(i) => {
                    v.remove(i);
                    true
                }
                Err(_) => false,
            },
        }
    }

    /// Membership test; degenerate or out-of-range triples are simply absent.
    pub fn contains(&self, t: [u32; 3]) -> bool {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] || s[2] as usize >= self.n {
            return false;
        }
        match &self.store {
            EdgeStore::Bits { words, .. } => {
                let r = triple_rank(s[0], s[1], s[2]);
                words[r / 64] & (1u64 << (r % 64)) != 0
            }
            EdgeStore::List(v) => v.binary_search(&s).is_ok(),
        }
    }

    /// All edges as sorted triples, in lexicographic order.
    pub fn edges(&self) -> Vec<[u32; 3]> {
        let mut out: Vec<[u32; 3]> = match &self.store {
            EdgeStore::Bits { words, .. } => {
                let mut v = Vec::with_capacity(self.edge_count());
                for (wi, word) in words.iter().enumerate() {
                    let mut w = *word;
                    while w != 0 {
                        let bit = w.trailing_zeros() as usize;
                        v.push(triple_unrank(wi * 64 + bit));
                        w &= w - 1;
                    }
                }
                v
            }
            EdgeStore::List(v) => v.clone(),
        };
        out.sort_unstable();
        out
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.edges().iter().filter(|e| e.contains(&v)).count()
    }

    /// Vertices contained in at least one edge, ascending.
    pub fn covered_vertices(&self) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        for e in self.edges() {
            for &v in &e {
                seen[v as usize] = true;
            }
        }
        (0..self.n as u32).filter(|&v| seen[v as usize]).collect()
    }

    /// Codegree of the pair `{u,v}` inside `s`: the vertices `w` of `s` with
    /// `{u,v,w}` an edge, together with their number.
    pub fn codegree(&self, u: u32, v: u32, s: &[u32]) -> Result<(usize, Vec<u32>)> {
        if u == v {
            return Err(Error::invalid("codegree of a vertex with itself"));
        }
        if u as usize >= self.n || v as usize >= self.n {
            return Err(Error::invalid("codegree vertex out of range"));
        }
        let mut neighbors: Vec<u32> = s
            .iter()
            .copied()
            .filter(|&w| self.contains([u, v, w]))
            .collect();
        neighbors.sort_unstable();
        neighbors.dedup();
        Ok((neighbors.len(), neighbors))
    }

    /// Codegree neighbors of `{u,v}` over the whole vertex set.
    pub fn codegree_neighbors(&self, u: u32, v: u32) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&w| self.contains([u, v, w]))
            .collect()
    }

    /// Link graph of `v` between `s1` and `s2`: the pairs `{x,y}` with
    /// `{v,x,y}` an edge, `x` in `s1`, `y` in `s2`. Pairs are sorted.
    pub fn link_graph(&self, v: u32, s1: &[u32], s2: &[u32]) -> Result<Vec<[u32; 2]>> {
        if v as usize >= self.n {
            return Err(Error::invalid("link vertex out of range"));
        }
        let mut in1 = vec![false; self.n];
        let mut in2 = vec![false; self.n];
        for &x in s1 {
            if (x as usize) < self.n {
                in1[x as usize] = true;
            }
        }
        for &x in s2 {
            if (x as usize) < self.n {
                in2[x as usize] = true;
            }
        }
        let mut out = Vec::new();
        for e in self.edges() {
            if !e.contains(&v) {
                continue;
            }
            let rest: Vec<u32> = e.into_iter().filter(|&x| x != v).collect();
            let (x, y) = (rest[0], rest[1]);
            if (in1[x as usize] && in2[y as usize]) || (in1[y as usize] && in2[x as usize]) {
                out.push([x.min(y), x.max(y)]);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Classifies every edge against a 3-partition: one vertex in each part
    /// (crossing), two in one part and one in another (bad), or fully inside
    /// a part (left implicit). Also reports the crossing triples missing
    /// from the hypergraph.
    pub fn classify_partition(&self, pi: &Partition3) -> Result<PartitionReport> {
        if pi.n != self.n {
            return Err(Error::invalid(format!(
                "partition is over {} vertices, hypergraph has {}",
                pi.n, self.n
            )));
        }
        let mut crossing = Vec::new();
        let mut bad = Vec::new();
        for e in self.edges() {
            let parts = [
                pi.part_of(e[0]).unwrap(),
                pi.part_of(e[1]).unwrap(),
                pi.part_of(e[2]).unwrap(),
            ];
            let mut counts = [0usize; 3];
            for p in parts {
                counts[p] += 1;
            }
            match counts.iter().max().unwrap() {
                1 => crossing.push(e),
                2 => bad.push(e),
                _ => {}
            }
        }
        let mut missing = Vec::new();
        for &a in &pi.parts[0] {
            for &b in &pi.parts[1] {
                for &c in &pi.parts[2] {
                    let t = sort3([a, b, c]);
                    if !self.contains(t) {
                        missing.push(t);
                    }
                }
            }
        }
        crossing.sort_unstable();
        bad.sort_unstable();
        missing.sort_unstable();
        Ok(PartitionReport {
            crossing,
            missing_crossing: missing,
            bad,
        })
    }

    /// The `t`-blow-up: vertex `(v, i)` is encoded as `v*t + i`, and a triple
    /// of clones is an edge iff the underlying triple is.
    pub fn blow_up(&self, t: usize) -> Result<Hypergraph3> {
        if t == 0 {
            return Err(Error::invalid("blow-up factor must be at least 1"));
        }
        let new_edges = self.edge_count() * t * t * t;
        let cap = crate::max_edges_cap();
        if new_edges > cap {
            return Err(Error::ResourceLimit(format!(
                "blow-up would have {new_edges} edges, cap is {cap}"
            )));
        }
        let mut out = Hypergraph3::new(self.n * t);
        for e in self.edges() {
            for i in 0..t {
                for j in 0..t {
                    for k in 0..t {
                        out.insert([
                            e[0] * t as u32 + i as u32,
                            e[1] * t as u32 + j as u32,
                            e[2] * t as u32 + k as u32,
                        ])?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Symmetrization: replace the vertices of `s` by fresh clones of `v`,
    /// keeping only the part of `v`'s link that avoids `s`. Kept vertices are
    /// relabeled in ascending order starting at 0 and the clones take the
    /// tail of the range, so the result again lives on `0..n`.
    pub fn symmetrize(&self, s: &[u32], v: u32) -> Result<Symmetrized> {
        if v as usize >= self.n {
            return Err(Error::invalid("symmetrize vertex out of range"));
        }
        let mut in_s = vec![false; self.n];
        for &x in s {
            if x as usize >= self.n {
                return Err(Error::invalid("symmetrize set vertex out of range"));
            }
            in_s[x as usize] = true;
        }
        if in_s[v as usize] {
            return Err(Error::invalid("symmetrize target vertex lies in the set"));
        }
        let s_size = in_s.iter().filter(|&&b| b).count();
        let mut old_to_new: Vec<Option<u32>> = vec![None; self.n];
        let mut next = 0u32;
        for old in 0..self.n {
            if !in_s[old] {
                old_to_new[old] = Some(next);
                next += 1;
            }
        }
        let clones: Vec<u32> = (0..s_size as u32).map(|i| next + i).collect();

        let mut out = Hypergraph3::new(self.n);
        for e in self.edges() {
            if e.iter().any(|&x| in_s[x as usize]) {
                continue;
            }
            out.insert([
                old_to_new[e[0] as usize].unwrap(),
                old_to_new[e[1] as usize].unwrap(),
                old_to_new[e[2] as usize].unwrap(),
            ])?;
        }
        // Each clone copies v's link restricted away from s.
        for e in self.edges() {
            if !e.contains(&v) {
                continue;
            }
            let rest: Vec<u32> = e.into_iter().filter(|&x| x != v).collect();
            if rest.iter().any(|&x| in_s[x as usize]) {
                continue;
            }
            let (x, y) = (
                old_to_new[rest[0] as usize].unwrap(),
                old_to_new[rest[1] as usize].unwrap(),
            );
            for &c in &clones {
                out.insert([c, x, y])?;
            }
        }
        Ok(Symmetrized {
            graph: out,
            old_to_new,
            clones,
        })
    }

    /// Canonical byte string: equal strings iff isomorphic. Minimizes the
    /// relabeled edge-rank sequence over all vertex permutations respecting
    /// the degree partition. Supported for `n <= 9` only.
    pub fn canonical_form(&self) -> Result<Vec<u8>> {
        const LIMIT: usize = 9;
        if self.n > LIMIT {
            return Err(Error::UnsupportedSize(format!(
                "canonical form supports n <= {LIMIT}, got {}",
                self.n
            )));
        }
        let edges = self.edges();
        if edges.is_empty() {
            return Ok(vec![self.n as u8]);
        }
        // Vertices grouped by degree; a permutation may only map a vertex to
        // a slot reserved for its degree class.
        let mut degs: Vec<(usize, u32)> = (0..self.n as u32)
            .map(|v| (edges.iter().filter(|e| e.contains(&v)).count(), v))
            .collect();
        degs.sort_unstable();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut last_deg = usize::MAX;
        for (d, v) in degs {
            if d != last_deg {
                classes.push(Vec::new());
                last_deg = d;
            }
            classes.last_mut().unwrap().push(v);
        }

        let mut best: Option<Vec<u8>> = None;
        let mut perm = vec![0u32; self.n];
        let mut image = Vec::with_capacity(edges.len());
        assign_classes(&classes, 0, 0, &mut perm, &mut |perm: &[u32]| {
            image.clear();
            for e in &edges {
                let t = sort3([
                    perm[e[0] as usize],
                    perm[e[1] as usize],
                    perm[e[2] as usize],
                ]);
                image.push(triple_rank(t[0], t[1], t[2]) as u8);
            }
            image.sort_unstable();
            match &best {
                Some(b) if b[1..] <= image[..] => {}
                _ => {
                    let mut enc = Vec::with_capacity(image.len() + 1);
                    enc.push(self.n as u8);
                    enc.extend_from_slice(&image);
                    best = Some(enc);
                }
            }
        });
        Ok(best.unwrap())
    }

    /// Text form: `n <count>` then one `e a b c` line per edge in
    /// lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for e in self.edges() {
            out.push_str(&format!("e {} {} {}\n", e[0], e[1], e[2]));
        }
        out
    }

    /// Parses the text form. Edge lines may come in any order; duplicate
    /// edges are rejected.
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
        if it.next().is_some() {
            return Err(Error::Parse("trailing tokens on header line".into()));
        }
        let mut h = Hypergraph3::new(n);
        for line in lines {
            let mut it = line.split_whitespace();
            if it.next() != Some("e") {
                return Err(Error::Parse(format!("expected edge line, got '{line}'")));
            }
            let mut t = [0u32; 3];
            for slot in &mut t {
                *slot = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad edge line '{line}'")))?;
            }
            if it.next().is_some() {
                return Err(Error::Parse(format!("trailing tokens on '{line}'")));
            }
            if !h.insert(t).map_err(|e| Error::Parse(e.to_string()))? {
                return Err(Error::Parse(format!(
                    "duplicate edge {} {} {}",
                    t[0], t[1], t[2]
                )));
            }
        }
        Ok(h)
    }
}

fn assign_classes(
    classes: &[Vec<u32>],
    class_idx: usize,
    slot_base: u32,
    perm: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if class_idx == classes.len() {
        f(perm);
        return;
    }
    let members = &classes[class_idx];
    let k = members.len();
    let mut order: Vec<usize> = (0..k).collect();
    permute_rec(&mut order, 0, &mut |ord: &[usize]| {
        for (offset, &mi) in ord.iter().enumerate() {
            perm[members[mi] as usize] = slot_base + offset as u32;
        }
        assign_classes(classes, class_idx + 1, slot_base + k as u32, perm, f);
    });
}

fn permute_rec(items: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        f(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute_rec(items, start + 1, f);
        items.swap(start, i);
    }
}

/// Result of [`Hypergraph3::symmetrize`]: the new hypergraph plus the
/// relabeling that produced it.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub graph: Hypergraph3,
    /// For each old vertex, its new label, or `None` if it was replaced.
    pub old_to_new: Vec<Option<u32>>,
    /// New labels of the fresh clone vertices, ascending.
    pub clones: Vec<u32>,
}

/// An ordered 3-partition of `{0..n}` into disjoint covering parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition3 {
    n: usize,
    parts: [Vec<u32>; 3],
    part_index: Vec<u8>,
}

impl Partition3 {
    pub fn new(n: usize, parts: [Vec<u32>; 3]) -> Result<Self> {
        let mut part_index = vec![u8::MAX; n];
        for (pi, part) in parts.iter().enumerate() {
            for &v in part {
                if v as usize >= n {
                    return Err(Error::invalid(format!("partition vertex {v} out of range")));
                }
                if part_index[v as usize] != u8::MAX {
                    return Err(Error::invalid(format!("vertex {v} in two parts")));
                }
                part_index[v as usize] = pi as u8;
            }
        }
        if part_index.contains(&u8::MAX) {
            return Err(Error::invalid("partition does not cover all vertices"));
        }
        let mut parts = parts;
        for p in &mut parts {
            p.sort_unstable();
        }
        Ok(Partition3 {
            n,
            parts,
            part_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<u32>; 3] {
        &self.parts
    }

    pub fn part_sizes(&self) -> [usize; 3] {
        [
            self.parts[0].len(),
            self.parts[1].len(),
            self.parts[2].len(),
        ]
    }

    pub fn part_of(&self, v: u32) -> Option<usize> {
        self.part_index.get(v as usize).map(|&p| p as usize)
    }
}

/// Edge classification against a [`Partition3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    /// Edges with one vertex in each part.
    pub crossing: Vec<[u32; 3]>,
    /// Crossing-template triples that are not edges.
    pub missing_crossing: Vec<[u32; 3]>,
    /// Edges with exactly two vertices in one part and one elsewhere.
    pub bad: Vec<[u32; 3]>,
}

/// The tight cycle minus one hyperedge: vertices `0..l`, edges
/// `{i, i+1, i+2}` mod `l` for `i = 0..l-2`.
pub fn cycle_minus_one(l: usize) -> Hypergraph3 {
    assert!(l >= 4, "tight cycles need at least 4 vertices");
    let mut h = Hypergraph3::new(l);
    for i in 0..l - 1 {
        h.insert([i as u32, ((i + 1) % l) as u32, ((i + 2) % l) as u32])
            .unwrap();
    }
    h
}

/// The full tight cycle on `l` vertices.
pub fn tight_cycle(l: usize) -> Hypergraph3 {
    assert!(l >= 4, "tight cycles need at least 4 vertices");
    let mut h = Hypergraph3::new(l);
    for i in 0..l {
        h.insert([i as u32, ((i + 1) % l) as u32, ((i + 2) % l) as u32])
            .unwrap();
    }
    h
}

/// K4 minus an edge, i.e. the tight cycle minus one hyperedge of size 4.
pub fn k4_minus() -> Hypergraph3 {
    cycle_minus_one(4)
}

/// The complete 3-graph on `n` vertices.
pub fn complete(n: usize) -> Hypergraph3 {
    let mut h = Hypergraph3::new(n);
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            for c in b + 1..n as u32 {
                h.insert([a, b, c]).unwrap();
            }
        }
    }
    h
}
