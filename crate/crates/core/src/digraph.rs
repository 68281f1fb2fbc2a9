//! Finite loopless digraphs on the vertex set `0..n`.
//!
//! A [`Digraph`] stores its darts sorted by `(tail, head)` without duplicates,
//! so two digraphs are equal exactly when their orders and dart lists agree.
//! Out- and in-adjacency are kept in CSR form for the search code.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub tail: usize,
    pub head: usize,
}

impl Dart {
    pub fn new(tail: usize, head: usize) -> Self {
        Dart { tail, head }
    }

    pub fn inverse(self) -> Self {
        Dart { tail: self.head, head: self.tail }
    }
}

impl From<(usize, usize)> for Dart {
    fn from((tail, head): (usize, usize)) -> Self {
        Dart { tail, head }
    }
}

#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    darts: Vec<Dart>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.darts == other.darts
    }
}

impl Eq for Digraph {}

impl Digraph {
    /// Builds a digraph, rejecting loops, duplicate darts and out-of-range vertices.
    pub fn new<I, D>(n: usize, darts: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: Into<Dart>,
    {
        let mut list: Vec<Dart> = Vec::new();
        for d in darts {
            let d = d.into();
            if d.tail >= n {
                return Err(Error::VertexOutOfRange { vertex: d.tail, n });
            }
            if d.head >= n {
                return Err(Error::VertexOutOfRange { vertex: d.head, n });
            }
            if d.tail == d.head {
                return Err(Error::Loop(d.tail));
            }
            list.push(d);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateDart(w[0].tail, w[0].head));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Builds from a dart list known to be loopless and in range; sorts and dedups.
    pub(crate) fn from_darts_dedup(n: usize, mut darts: Vec<Dart>) -> Self {
        darts.sort_unstable();
        darts.dedup();
        debug_assert!(darts.iter().all(|d| d.tail != d.head && d.tail < n && d.head < n));
        Self::from_sorted(n, darts)
    }

    fn from_sorted(n: usize, darts: Vec<Dart>) -> Self {
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for d in &darts {
            out_offsets[d.tail + 1] += 1;
            in_offsets[d.head + 1] += 1;
        }
        for v in 0..n {
            out_offsets[v + 1] += out_offsets[v];
            in_offsets[v + 1] += in_offsets[v];
        }
        let out_targets: Vec<usize> = darts.iter().map(|d| d.head).collect();
        let mut in_sources = vec![0usize; darts.len()];
        let mut fill = in_offsets.clone();
        // darts are sorted by tail, so every in-list comes out sorted
        for d in &darts {
            in_sources[fill[d.head]] = d.tail;
            fill[d.head] += 1;
        }
        Digraph { n, darts, out_offsets, out_targets, in_offsets, in_sources }
    }

    /// The digraph with `n` vertices and no darts.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn has_dart(&self, tail: usize, head: usize) -> bool {
        self.dart_index(tail, head).is_some()
    }

    /// Position of the dart in the sorted dart list.
    pub fn dart_index(&self, tail: usize, head: usize) -> Option<usize> {
        if tail >= self.n {
            return None;
        }
        self.out_neighbors(tail)
            .binary_search(&head)
            .ok()
            .map(|i| self.out_offsets[tail] + i)
    }

    /// `(out-valence, in-valence)` of `v`.
    pub fn valences(&self, v: usize) -> (usize, usize) {
        (self.out_neighbors(v).len(), self.in_neighbors(v).len())
    }

    pub fn is_k_valent(&self, k: usize) -> bool {
        (0..self.n).all(|v| self.valences(v) == (k, k))
    }

    pub fn has_sources_or_sinks(&self) -> bool {
        (0..self.n).any(|v| {
            let (o, i) = self.valences(v);
            o == 0 || i == 0
        })
    }

    pub fn reverse(&self) -> Digraph {
        Self::from_darts_dedup(self.n, self.darts.iter().map(|d| d.inverse()).collect())
    }

    pub fn underlying(&self) -> Digraph {
        let mut all = self.darts.clone();
        all.extend(self.darts.iter().map(|d| d.inverse()));
        Self::from_darts_dedup(self.n, all)
    }

    /// True iff the dart set is closed under inversion.
    pub fn is_graph(&self) -> bool {
        self.darts.iter().all(|d| self.has_dart(d.head, d.tail))
    }

    /// True iff no dart has its inverse in the dart set.
    pub fn is_orientation(&self) -> bool {
        self.darts.iter().all(|d| !self.has_dart(d.head, d.tail))
    }

    /// All pairs of darts `(x, y)` with `head(x) = tail(y)` and `tail(x) != head(y)`.
    pub fn two_darts(&self) -> Vec<(Dart, Dart)> {
        let mut out = Vec::new();
        for &x in &self.darts {
            for &w in self.out_neighbors(x.head) {
                if w != x.tail {
                    out.push((x, Dart::new(x.head, w)));
                }
            }
        }
        out
    }

    /// Neighbours in the underlying graph, sorted and deduplicated.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut nb: Vec<usize> =
            self.out_neighbors(v).iter().chain(self.in_neighbors(v)).copied().collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    }

    /// Components of the underlying graph, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// A proper 2-colouring of the underlying graph, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut colour = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[v];
                        queue.push_back(w);
                    } else if colour[w] == colour[v] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// BFS distances in the underlying graph; `usize::MAX` marks unreachable.
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle of the underlying simple graph, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let u = self.underlying();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; u.n];
        let mut parent = vec![usize::MAX; u.n];
        let mut queue = VecDeque::new();
        for s in 0..u.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(v) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[v] + 1 >= b {
                        break 'bfs;
                    }
                }
                for &w in u.out_neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        if best.map_or(true, |b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Maximum eccentricity in the underlying graph.
    pub fn diameter(&self) -> Result<usize> {
        if self.n == 0 {
            return Ok(0);
        }
        let mut diam = 0;
        for s in 0..self.n {
            let d = self.distances_from(s);
            let ecc = *d.iter().max().unwrap();
            if ecc == usize::MAX {
                return Err(Error::Disconnected);
            }
            diam = diam.max(ecc);
        }
        Ok(diam)
    }

    /// Subdigraph induced on `vertices`, relabelled by position in the slice.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut darts = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.out_neighbors(v) {
                if index[w] != usize::MAX {
                    darts.push(Dart::new(i, index[w]));
                }
            }
        }
        Self::from_darts_dedup(vertices.len(), darts)
    }

    /// Image of the digraph under the vertex map `v -> map[v]` (a bijection).
    pub fn relabel(&self, map: &[usize]) -> Digraph {
        assert_eq!(map.len(), self.n);
        Self::from_darts_dedup(
            self.n,
            self.darts.iter().map(|d| Dart::new(map[d.tail], map[d.head])).collect(),
        )
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let k = self.n;
        let mut darts = self.darts.clone();
        darts.extend(other.darts.iter().map(|d| Dart::new(d.tail + k, d.head + k)));
        Self::from_darts_dedup(k + other.n, darts)
    }
}

/// The cycle `C_n` viewed as a 2-valent digraph (both directions on every edge).
pub fn dcyc(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidOrder(n));
    }
    let darts = (0..n).flat_map(|i| [Dart::new(i, (i + 1) % n), Dart::new((i + 1) % n, i)]);
    Ok(Digraph::from_darts_dedup(n, darts.collect()))
}

/// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(Digraph::from_darts_dedup(n, (0..n).map(|i| Dart::new(i, (i + 1) % n)).collect()))
}

/// A walk given by its vertex sequence; step signs are read off the digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<usize>,
    pub signs: Vec<i8>,
}

impl Walk {
    pub fn trivial(v: usize) -> Self {
        Walk { vertices: vec![v], signs: Vec::new() }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Number of positive minus number of negative darts.
    pub fn sum(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Checks every step against the digraph: `+1` needs a forward dart, `-1` a backward one.
    pub fn is_valid_in(&self, g: &Digraph) -> bool {
        if self.vertices.is_empty() || self.signs.len() + 1 != self.vertices.len() {
            return false;
        }
        self.vertices.windows(2).zip(&self.signs).all(|(w, &s)| match s {
            1 => g.has_dart(w[0], w[1]),
            -1 => g.has_dart(w[1], w[0]),
            _ => false,
        })
    }
}
