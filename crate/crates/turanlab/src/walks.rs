//! Tight-walk detection in the pair digraph.
//!
//! The pair digraph has a node for every ordered pair of covered vertices
//! and an arc `(a,b) -> (b,c)` for every edge `{a,b,c}`. A tight walk of a
//! hypergraph corresponds exactly to a directed walk here, which turns every
//! pseudo-path/pseudo-cycle question into plain layered reachability. Arcs
//! only exist for genuine 3-sets, so degenerate windows are excluded
//! structurally and need no checks downstream.

use crate::error::{Error, Result};
use crate::hypergraph::{cycle_minus_one, Hypergraph3};

/// Directed graph on ordered pairs of covered vertices, with
/// `(a,b) -> (b,c)` present iff `{a,b,c}` is an edge.
#[derive(Clone, Debug)]
pub struct PairDigraph {
    n: usize,
    adj: Vec<Vec<u32>>,
    covered: Vec<bool>,
    arc_count: usize,
}

impl PairDigraph {
    pub fn new(h: &Hypergraph3) -> Self {
        let n = h.vertex_count();
        let mut adj = vec![Vec::new(); n * n];
        let mut covered = vec![false; n];
        let mut arc_count = 0;
        for e in h.edges() {
            for v in e {
                covered[v as usize] = true;
            }
            let [a, b, c] = e;
            for (p, q, r) in [
                (a, b, c),
                (a, c, b),
                (b, a, c),
                (b, c, a),
                (c, a, b),
                (c, b, a),
            ] {
                adj[p as usize * n + q as usize].push(q * n as u32 + r);
                arc_count += 1;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        PairDigraph {
            n,
            adj,
            covered,
            arc_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pair_id(&self, a: u32, b: u32) -> usize {
        a as usize * self.n + b as usize
    }

    #[inline]
    pub fn id_to_pair(&self, id: usize) -> (u32, u32) {
        ((id / self.n) as u32, (id % self.n) as u32)
    }

    #[inline]
    pub fn successors(&self, id: usize) -> &[u32] {
        &self.adj[id]
    }

    /// Ordered pairs of covered vertices, ascending by id.
    pub fn nodes(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..self.n as u32 {
            if !self.covered[a as usize] {
                continue;
            }
            for b in 0..self.n as u32 {
                if a != b && self.covered[b as usize] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn covered_vertices(&self) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&v| self.covered[v as usize])
            .collect()
    }

    pub fn has_arc(&self, from: (u32, u32), to: (u32, u32)) -> bool {
        self.adj[self.pair_id(from.0, from.1)]
            .binary_search(&(self.pair_id(to.0, to.1) as u32))
            .is_ok()
    }
}

/// What a vertex sequence claims to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    /// Windows `{v_i, v_{i+1}, v_{i+2}}` for `0 <= i <= len-3`.
    PseudoPath,
    /// Windows taken mod `len` for `0 <= i <= len-2`.
    CycleMinusOne,
    /// Windows taken mod `len` for `0 <= i <= len-1`.
    PseudoCycle,
}

/// A vertex sequence (repetition allowed) together with the walk semantics
/// it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkWitness {
    pub vertices: Vec<u32>,
    pub kind: WalkKind,
}

impl WalkWitness {
    /// Re-validates the witness against `h` by direct triple membership.
    pub fn validate(&self, h: &Hypergraph3) -> bool {
        let l = self.vertices.len();
        let windows = match self.kind {
            WalkKind::PseudoPath => {
                if l < 3 {
                    return false;
                }
                l - 2
            }
            WalkKind::CycleMinusOne => l.saturating_sub(1),
            WalkKind::PseudoCycle => l,
        };
        if matches!(self.kind, WalkKind::CycleMinusOne | WalkKind::PseudoCycle) && l < 4 {
            return false;
        }
        for i in 0..windows {
            let t = [
                self.vertices[i],
                self.vertices[(i + 1) % l],
                self.vertices[(i + 2) % l],
            ];
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || !h.contains(t) {
                return false;
            }
        }
        true
    }
}

/// Scratch space for the layered reachability runs.
struct Layers {
    in_layer: Vec<Vec<bool>>,
    frontier: Vec<Vec<u32>>,
    parent: Vec<Vec<u32>>,
}

impl Layers {
    fn new(steps: usize, pairs: usize) -> Self {
        Layers {
            in_layer: vec![vec![false; pairs]; steps],
            frontier: vec![Vec::new(); steps],
            parent: vec![vec![u32::MAX; pairs]; steps],
        }
    }

    fn reset(&mut self) {
        for s in 0..self.in_layer.len() {
            for &p in &self.frontier[s] {
                self.in_layer[s][p as usize] = false;
                self.parent[s][p as usize] = u32::MAX;
            }
            self.frontier[s].clear();
        }
    }

    fn seed(&mut self, pair: u32) {
        if !self.in_layer[0][pair as usize] {
            self.in_layer[0][pair as usize] = true;
            self.frontier[0].push(pair);
        }
    }

    fn advance(&mut self, dg: &PairDigraph, step: usize) {
        let (done, rest) = self.in_layer.split_at_mut(step + 1);
        let next_layer = &mut rest[0];
        let next_parent = &mut self.parent[step + 1];
        let mut next_frontier = std::mem::take(&mut self.frontier[step + 1]);
        for &p in &self.frontier[step] {
            debug_assert!(done[step][p as usize]);
            for &q in dg.successors(p as usize) {
                if !next_layer[q as usize] {
                    next_layer[q as usize] = true;
                    next_parent[q as usize] = p;
                    next_frontier.push(q);
                }
            }
        }
        self.frontier[step + 1] = next_frontier;
    }

    /// Walk node ids from layer 0 to `(step, pair)` along stored parents.
    fn walk_to(&self, step: usize, pair: u32) -> Vec<u32> {
        let mut nodes = vec![pair];
        let mut cur = pair;
        for s in (1..=step).rev() {
            cur = self.parent[s][cur as usize];
            nodes.push(cur);
        }
        nodes.reverse();
        nodes
    }
}

/// Searches for a tight cycle minus one hyperedge of size `l`: a vertex
/// sequence `v0..v_{l-1}` whose mod-`l` windows for `i = 0..l-2` are all
/// edges. Detection is a walk of `l-1` arcs in the pair digraph from some
/// `(v0, v1)` to a pair of the form `(x, v0)`, run once per anchor `v0`.
pub fn find_cycle_minus_one(h: &Hypergraph3, l: usize) -> Result<Option<WalkWitness>> {
    let dg = PairDigraph::new(h);
    find_cycle_minus_one_in(&dg, l)
}

/// As [`find_cycle_minus_one`] but reusing a prebuilt pair digraph.
pub fn find_cycle_minus_one_in(dg: &PairDigraph, l: usize) -> Result<Option<WalkWitness>> {
    if l < 4 {
        return Err(Error::invalid(format!("cycle length {l} < 4")));
    }
    let n = dg.vertex_count();
    let mut layers = Layers::new(l, n * n);
    for v0 in dg.covered_vertices() {
        layers.reset();
        for w in 0..n as u32 {
            if w != v0 {
                layers.seed(dg.pair_id(v0, w) as u32);
            }
        }
        for s in 0..l - 1 {
            layers.advance(dg, s);
        }
        for x in 0..n as u32 {
            if x == v0 {
                continue;
            }
            let end = dg.pair_id(x, v0) as u32;
            if layers.in_layer[l - 1][end as usize] {
                let nodes = layers.walk_to(l - 1, end);
                let vertices: Vec<u32> = nodes
                    .iter()
                    .map(|&id| dg.id_to_pair(id as usize).0)
                    .collect();
                return Ok(Some(WalkWitness {
                    vertices,
                    kind: WalkKind::CycleMinusOne,
                }));
            }
        }
    }
    Ok(None)
}

/// Searches for a pseudo-cycle of size `l`: a closed walk of exactly `l`
/// arcs in the pair digraph, returned as its vertex sequence.
pub fn find_pseudo_cycle(h: &Hypergraph3, l: usize) -> Result<Option<WalkWitness>> {
    if l < 4 {
        return Err(Error::invalid(format!("cycle length {l} < 4")));
    }
    let dg = PairDigraph::new(h);
    let n = dg.vertex_count();
    let mut layers = Layers::new(l + 1, n * n);
    for (a, b) in dg.nodes() {
        let start = dg.pair_id(a, b) as u32;
        if dg.successors(start as usize).is_empty() {
            continue;
        }
        layers.reset();
        layers.seed(start);
        for s in 0..l {
            layers.advance(&dg, s);
        }
        if layers.in_layer[l][start as usize] {
            let nodes = layers.walk_to(l, start);
            // The last node repeats the first; the vertex sequence is the
            // first coordinate of the first l nodes.
            let vertices: Vec<u32> = nodes[..l]
                .iter()
                .map(|&id| dg.id_to_pair(id as usize).0)
                .collect();
            return Ok(Some(WalkWitness {
                vertices,
                kind: WalkKind::PseudoCycle,
            }));
        }
    }
    Ok(None)
}

/// Checks freeness of the family of pseudo-cycles minus one hyperedge of
/// size `l` for `4 <= l <= max_len` with `l` not divisible by 3. On failure
/// the witness is the smallest-size violation.
pub fn is_fcm_free(h: &Hypergraph3, max_len: usize) -> (bool, Option<WalkWitness>) {
    let dg = PairDigraph::new(h);
    for l in 4..=max_len {
        if l % 3 == 0 {
            continue;
        }
        if let Some(w) = find_cycle_minus_one_in(&dg, l).expect("l >= 4 by construction") {
            return (false, Some(w));
        }
    }
    (true, None)
}

/// Brute-force containment of `f` in `h` via explicit vertex maps, the
/// independent oracle for the walk detectors. With `injective` set this is
/// subhypergraph containment of a copy of `f`.
pub fn naive_contains(h: &Hypergraph3, f: &Hypergraph3, injective: bool) -> Result<bool> {
    let k = f.vertex_count();
    if k > 7 {
        return Err(Error::UnsupportedSize(format!(
            "pattern has {k} > 7 vertices"
        )));
    }
    let f_edges = f.edges();
    let n = h.vertex_count();
    if injective && k > n {
        return Ok(false);
    }
    let mut assignment = vec![u32::MAX; k];
    let mut used = vec![false; n];
    fn rec(
        h: &Hypergraph3,
        f_edges: &[[u32; 3]],
        injective: bool,
        pos: usize,
        assignment: &mut Vec<u32>,
        used: &mut Vec<bool>,
    ) -> bool {
        let k = assignment.len();
        if pos == k {
            return true;
        }
        let n = h.vertex_count();
        for img in 0..n as u32 {
            if injective && used[img as usize] {
                continue;
            }
            assignment[pos] = img;
            let ok = f_edges.iter().all(|e| {
                if e.iter().any(|&v| assignment[v as usize] == u32::MAX) {
                    return true;
                }
                h.contains([
                    assignment[e[0] as usize],
                    assignment[e[1] as usize],
                    assignment[e[2] as usize],
                ])
            });
            if ok {
                used[img as usize] = true;
                if rec(h, f_edges, injective, pos + 1, assignment, used) {
                    return true;
                }
                used[img as usize] = false;
            }
            assignment[pos] = u32::MAX;
        }
        false
    }
    Ok(rec(h, &f_edges, injective, 0, &mut assignment, &mut used))
}

/// Brute-force reference for [`find_cycle_minus_one`]: enumerates all
/// length-`l` vertex sequences and checks their windows directly, never
/// touching the pair digraph.
pub fn naive_find_cycle_minus_one(h: &Hypergraph3, l: usize) -> Option<Vec<u32>> {
    assert!(l >= 4);
    let mut seq = vec![0u32; l];
    fn rec(h: &Hypergraph3, seq: &mut Vec<u32>, pos: usize) -> bool {
        let l = seq.len();
        if pos == l {
            let wrap = [seq[l - 2], seq[l - 1], seq[0]];
            return h.contains(wrap);
        }
        let n = h.vertex_count();
        for v in 0..n as u32 {
            seq[pos] = v;
            let ok = pos < 2 || h.contains([seq[pos - 2], seq[pos - 1], seq[pos]]);
            if ok && rec(h, seq, pos + 1) {
                return true;
            }
        }
        false
    }
    if rec(h, &mut seq, 0) {
        Some(seq)
    } else {
        None
    }
}

/// An explicit tight-cycle-minus-one witness inside a blow-up, together
/// with the host it lives in.
#[derive(Clone, Debug)]
pub struct BlowupEmbedding {
    pub witness: WalkWitness,
    pub host: Hypergraph3,
    pub factor: usize,
}

/// Smallest blow-up factor the explicit embedding of a size-`l1` cycle
/// minus one hyperedge into a blow-up of the size-`l2` one needs: the
/// number of distinct clone layers the case formula consumes.
pub fn minimal_blowup_factor(l1: usize, l2: usize) -> Result<usize> {
    check_embedding_sizes(l1, l2)?;
    Ok(match l1 % 3 {
        0 => l1 / 3,
        r if r == l2 % 3 => (l1 - l2) / 3 + 1,
        _ => (l1 + 3 - 2 * l2) / 3 + 2,
    })
}

fn check_embedding_sizes(l1: usize, l2: usize) -> Result<()> {
    if l1 < 4 || l2 < 4 {
        return Err(Error::invalid("cycle sizes must be at least 4"));
    }
    if l2.is_multiple_of(3) {
        return Err(Error::invalid("host cycle size must not be divisible by 3"));
    }
    if l1 + 3 < 2 * l2 {
        return Err(Error::invalid(format!(
            "need l1 >= 2*l2 - 3, got l1={l1}, l2={l2}"
        )));
    }
    Ok(())
}

/// Builds the explicit copy of the size-`l1` tight cycle minus one hyperedge
/// inside the `t`-blow-up of the size-`l2` one, by the three congruence
/// cases, and self-verifies the resulting windows before returning.
/// Vertex `(v, layer)` of the blow-up is encoded as `v*t + layer`.
pub fn embed_cm_in_blowup(l1: usize, l2: usize, t: usize) -> Result<BlowupEmbedding> {
    check_embedding_sizes(l1, l2)?;
    let t_min = minimal_blowup_factor(l1, l2)?;
    if t < t_min {
        return Err(Error::invalid(format!(
            "blow-up factor {t} below the minimum {t_min} for l1={l1}, l2={l2}"
        )));
    }
    let enc = |v: usize, layer: usize| (v * t + layer) as u32;
    let mut seq: Vec<u32> = Vec::with_capacity(l1);
    if l1.is_multiple_of(3) {
        // Repeated traversals of one hyperedge across distinct layers.
        let reps = l1 / 3;
        for r in 0..reps {
            seq.extend([enc(0, r), enc(1, r), enc(2, r)]);
        }
    } else if l1 % 3 == l2 % 3 {
        // A power prefix, then one full traversal of the host cycle.
        let reps = (l1 - l2) / 3;
        for r in 0..reps {
            seq.extend([enc(0, r + 1), enc(1, r + 1), enc(2, r + 1)]);
        }
        for v in 0..l2 {
            seq.push(enc(v, 0));
        }
    } else {
        // A reversed-order power prefix, then the interleaved two-layer tail.
        let reps = (l1 + 3 - 2 * l2) / 3;
        for r in 0..reps {
            seq.extend([enc(0, r + 2), enc(2, r + 2), enc(1, r + 2)]);
        }
        seq.extend([enc(0, 0), enc(2, 0), enc(1, 0)]);
        for v in 3..l2 {
            seq.push(enc(v, 0));
            seq.push(enc(v - 1, 1));
        }
    }
    if seq.len() != l1 {
        return Err(Error::Internal(format!(
            "embedding produced {} vertices, wanted {l1}",
            seq.len()
        )));
    }
    let host = cycle_minus_one(l2).blow_up(t)?;
    let witness = WalkWitness {
        vertices: seq,
        kind: WalkKind::CycleMinusOne,
    };
    if !witness.validate(&host) {
        return Err(Error::Internal(format!(
            "embedding witness for l1={l1}, l2={l2}, t={t} failed self-verification"
        )));
    }
    Ok(BlowupEmbedding {
        witness,
        host,
        factor: t,
    })
}
