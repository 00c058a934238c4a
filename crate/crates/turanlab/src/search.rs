//! Desk-scale exact Turán numbers, local improvement by symmetrization, the
//! codegree cleaning loop, and the constructive stability-partition
//! extractor.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{cycle_minus_one, Hypergraph3, Partition3, PartitionReport};
use crate::orientation::{orient, OrientationOutcome};
use crate::tournament::Tournament;
use crate::walks::{is_fcm_free, naive_contains};

/// A family of forbidden subhypergraphs. Explicit patterns are matched as
/// injective copies; the tight-cycle-minus-one family is matched by walk
/// detection, which also covers its non-injective pseudo images.
#[derive(Clone, Debug)]
pub enum ForbiddenFamily {
    /// The single pattern K4 minus an edge.
    K4Minus,
    /// The single pattern C5 minus a hyperedge.
    C5Minus,
    /// All pseudo-cycles minus one hyperedge of size `4..=L` not divisible
    /// by 3.
    Fcm(usize),
    /// Explicit small patterns, each on at most 7 vertices.
    Explicit(Vec<Hypergraph3>),
}

impl ForbiddenFamily {
    pub fn name(&self) -> String {
        match self {
            ForbiddenFamily::K4Minus => "k4-minus".into(),
            ForbiddenFamily::C5Minus => "c5-minus".into(),
            ForbiddenFamily::Fcm(l) => format!("fcm({l})"),
            ForbiddenFamily::Explicit(ps) => format!("explicit({} patterns)", ps.len()),
        }
    }

    /// Whether `h` avoids every member of the family.
    pub fn is_free(&self, h: &Hypergraph3) -> Result<bool> {
        match self {
            ForbiddenFamily::K4Minus => Ok(!naive_contains(h, &cycle_minus_one(4), true)?),
            ForbiddenFamily::C5Minus => Ok(!naive_contains(h, &cycle_minus_one(5), true)?),
            ForbiddenFamily::Fcm(l) => Ok(is_fcm_free(h, *l).0),
            ForbiddenFamily::Explicit(patterns) => {
                for p in patterns {
                    if naive_contains(h, p, true)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Output of [`exact_turan`].
#[derive(Clone, Debug)]
pub struct TuranResult {
    pub n: usize,
    pub family_name: String,
    pub max_edges: usize,
    /// One representative per isomorphism class of extremal example, keyed
    /// and sorted by canonical form.
    pub extremal_examples: Vec<Hypergraph3>,
    pub nodes_explored: u64,
}

impl TuranResult {
    pub fn canonical_forms(&self) -> Vec<Vec<u8>> {
        self.extremal_examples
            .iter()
            .map(|h| h.canonical_form().expect("n <= 8"))
            .collect()
    }
}

fn all_triples(n: usize) -> Vec<[u32; 3]> {
    let mut v = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            for c in b + 1..n as u32 {
                v.push([a, b, c]);
            }
        }
    }
    v
}

/// Exact maximum edge count of a family-free hypergraph on `n` vertices,
/// with all extremal examples up to isomorphism. Depth-first search over
/// triples in lexicographic order; a branch is cut when even adding every
/// individually addable triple cannot beat the best known count, so the
/// result is independent of traversal order.
pub fn exact_turan(n: usize, family: &ForbiddenFamily) -> Result<TuranResult> {
    if n > 8 {
        return Err(Error::UnsupportedSize(format!(
            "exact search capped at n <= 8, got {n}"
        )));
    }
    let empty = Hypergraph3::new(n);
    if !family.is_free(&empty)? {
        return Err(Error::invalid(
            "family forbids the empty hypergraph; no feasible solution",
        ));
    }
    let mut state = SearchState {
        family,
        best: 0,
        examples: BTreeMap::new(),
        nodes: 0,
    };
    let mut initial = Vec::new();
    for t in all_triples(n) {
        let mut h2 = empty.clone();
        h2.insert(t)?;
        if family.is_free(&h2)? {
            initial.push(t);
        }
    }
    state.record(&empty)?;
    state.dfs(empty, initial)?;
    Ok(TuranResult {
        n,
        family_name: family.name(),
        max_edges: state.best,
        extremal_examples: state.examples.into_values().collect(),
        nodes_explored: state.nodes,
    })
}

struct SearchState<'a> {
    family: &'a ForbiddenFamily,
    best: usize,
    examples: BTreeMap<Vec<u8>, Hypergraph3>,
    nodes: u64,
}

impl SearchState<'_> {
    fn record(&mut self, h: &Hypergraph3) -> Result<()> {
        let count = h.edge_count();
        if count > self.best {
            self.best = count;
            self.examples.clear();
        }
        if count == self.best {
            self.examples
                .entry(h.canonical_form()?)
                .or_insert_with(|| h.clone());
        }
        Ok(())
    }

    /// `cands` holds the not-yet-decided triples, each individually addable
    /// to `h` without violating the family.
    fn dfs(&mut self, h: Hypergraph3, cands: Vec<[u32; 3]>) -> Result<()> {
        self.nodes += 1;
        let reach = h.edge_count() + cands.len();
        if reach < self.best {
            return Ok(());
        }
        if reach == self.best {
            // Only taking every candidate can tie the best; try that one
            // completion directly.
            let mut full = h.clone();
            for &t in &cands {
                full.insert(t)?;
            }
            if self.family.is_free(&full)? {
                self.record(&full)?;
            }
            return Ok(());
        }
        let Some((&t, rest)) = cands.split_first() else {
            return Ok(());
        };

        // Include t first; greedy depth finds large solutions early.
        let mut with_t = h.clone();
        with_t.insert(t)?;
        let mut filtered = Vec::with_capacity(rest.len());
        for &c in rest {
            let mut probe = with_t.clone();
            probe.insert(c)?;
            if self.family.is_free(&probe)? {
                filtered.push(c);
            }
        }
        self.record(&with_t)?;
        self.dfs(with_t, filtered)?;

        self.dfs(h, rest.to_vec())
    }
}

/// Local improvement: starting from a family-free seed, repeatedly try
/// random edge additions that keep the family out, plus occasional
/// symmetrization of a minimum-degree vertex toward a maximum-degree one,
/// accepted only when the edge count strictly increases and the result
/// re-checks as free. Deterministic for a fixed `rng_seed`.
pub fn local_search(
    seed: &Hypergraph3,
    family: &ForbiddenFamily,
    steps: usize,
    rng_seed: u64,
) -> Result<Hypergraph3> {
    if !family.is_free(seed)? {
        return Err(Error::invalid("seed hypergraph is not family-free"));
    }
    let n = seed.vertex_count();
    let triples = all_triples(n);
    if triples.is_empty() {
        return Ok(seed.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut cur = seed.clone();
    for _ in 0..steps {
        if rng.random_range(0..8) == 0 {
            // Symmetrize the poorest vertex toward the richest.
            let degrees: Vec<usize> = (0..n as u32).map(|v| cur.degree(v)).collect();
            let u = (0..n).min_by_key(|&v| (degrees[v], v)).unwrap() as u32;
            let v = (0..n)
                .max_by_key(|&v| (degrees[v], usize::MAX - v))
                .unwrap() as u32;
            if u == v {
                continue;
            }
            let candidate = cur.symmetrize(&[u], v)?.graph;
            if candidate.edge_count() > cur.edge_count() && family.is_free(&candidate)? {
                cur = candidate;
            }
        } else {
            let t = triples[rng.random_range(0..triples.len())];
            if cur.contains(t) {
                continue;
            }
            let mut candidate = cur.clone();
            candidate.insert(t)?;
            if family.is_free(&candidate)? {
                cur = candidate;
            }
        }
    }
    Ok(cur)
}

/// Codegree cleaning: while some pair has codegree strictly between 0 and
/// `threshold`, delete every edge containing that pair. Pairs are examined
/// in lexicographic order and the scan restarts after each deletion batch;
/// the fixed point has every codegree in `{0} ∪ [threshold, ∞)`.
pub fn codegree_clean(h: &Hypergraph3, threshold: usize) -> Hypergraph3 {
    let mut cur = h.clone();
    let n = cur.vertex_count();
    'outer: loop {
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                let cd = cur.codegree_neighbors(u, v).len();
                if 0 < cd && cd < threshold {
                    for w in cur.codegree_neighbors(u, v) {
                        cur.remove([u, v, w]);
                    }
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Diagnostics accompanying [`stability_partition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityDiagnostics {
    /// The vertex of maximum degree the extraction pivots on.
    pub pivot: u32,
    pub link_component_count: usize,
    pub largest_component_size: usize,
    pub part_sizes: [usize; 3],
}

/// Extracts the three-part structure of an orientable hypergraph: pivot on
/// a maximum-degree vertex, split its link by the witness tournament's
/// out/in-neighborhoods, and take the largest link component as the second
/// and third parts. Fails with the bottle certificate when the input is not
/// orientable.
pub fn stability_partition(
    h: &Hypergraph3,
) -> Result<(Partition3, PartitionReport, StabilityDiagnostics)> {
    let witness = orientation_witness(h)?;
    let n = h.vertex_count();
    if n == 0 {
        return Err(Error::invalid("empty vertex set"));
    }
    let pivot = (0..n as u32)
        .max_by_key(|&v| (h.degree(v), u32::MAX - v))
        .unwrap();
    let all: Vec<u32> = (0..n as u32).collect();
    let link = h.link_graph(pivot, &all, &all)?;
    let comps = edge_components(n, &link);
    let largest = comps
        .iter()
        .max_by_key(|c| (c.len(), usize::MAX - c[0] as usize))
        .cloned()
        .unwrap_or_default();

    let mut v2 = Vec::new();
    let mut v3 = Vec::new();
    for &x in &largest {
        if witness.beats(pivot, x) {
            v2.push(x);
        } else {
            v3.push(x);
        }
    }
    let mut v1: Vec<u32> = (0..n as u32)
        .filter(|x| !v2.contains(x) && !v3.contains(x))
        .collect();
    v1.sort_unstable();
    let pi = Partition3::new(n, [v1, v2, v3])?;
    let report = h.classify_partition(&pi)?;
    let diagnostics = StabilityDiagnostics {
        pivot,
        link_component_count: comps.len(),
        largest_component_size: largest.len(),
        part_sizes: pi.part_sizes(),
    };
    Ok((pi, report, diagnostics))
}

/// Connected components of a graph given by an edge list; isolated vertices
/// form no component. Components come sorted by their minimum vertex, with
/// members ascending.
fn edge_components(n: usize, edges: &[[u32; 2]]) -> Vec<Vec<u32>> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut Vec<u32>, x: u32) -> u32 {
        if parent[x as usize] != x {
            let r = find(parent, parent[x as usize]);
            parent[x as usize] = r;
        }
        parent[x as usize]
    }
    let mut touched = vec![false; n];
    for e in edges {
        touched[e[0] as usize] = true;
        touched[e[1] as usize] = true;
        let (ra, rb) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi as usize] = lo;
        }
    }
    let mut by_root: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n as u32 {
        if touched[v as usize] {
            by_root.entry(find(&mut parent, v)).or_default().push(v);
        }
    }
    by_root.into_values().collect()
}

/// Diagnostic for the complete-bipartite link structure: true iff every
/// connected component of `v`'s link graph, bipartitioned by the witness
/// tournament's out/in-split at `v`, is complete bipartite. Reports, never
/// assumes; orientable inputs containing a 5-cycle minus an edge can
/// legitimately return false.
pub fn check_link_components_bipartite_complete(h: &Hypergraph3, v: u32) -> Result<bool> {
    if v as usize >= h.vertex_count() {
        return Err(Error::invalid("vertex out of range"));
    }
    let witness = orientation_witness(h)?;
    let n = h.vertex_count();
    let all: Vec<u32> = (0..n as u32).collect();
    let link = h.link_graph(v, &all, &all)?;
    for comp in edge_components(n, &link) {
        let plus = comp.iter().filter(|&&x| witness.beats(v, x)).count();
        let minus = comp.len() - plus;
        let m = link
            .iter()
            .filter(|e| comp.contains(&e[0]) && comp.contains(&e[1]))
            .count();
        if m != plus * minus {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness tournament for an orientable hypergraph, or the certificate.
pub fn orientation_witness(h: &Hypergraph3) -> Result<Tournament> {
    match orient(h) {
        OrientationOutcome::Witness(t) => Ok(t),
        OrientationOutcome::Certificate(c) => Err(Error::NotOrientable(c)),
    }
}
