//! Individualisation–refinement search over ordered partitions.
//!
//! One engine serves automorphism groups, canonical forms and isomorphism.
//! Refinement is direction-aware: a cell splits by the number of out- and
//! in-neighbours each vertex has in a splitter cell. Each search level records
//! a hash of its refinement trace; these hashes act as node invariants.
//!
//! The automorphisms found form a strong generating set relative to the
//! individualised vertices of the first leaf, so the group order is the product
//! of the basic orbit lengths along that path.

use std::cmp::Ordering;

use crate::digraph::Digraph;
use crate::perm::Perm;

const SPLIT_TAG: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(SPLIT_TAG).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ordered partition of `0..n` with an undo log of splits.
struct Partition {
    lab: Vec<usize>,
    pos: Vec<usize>,
    /// start of the cell containing each position
    cell_of: Vec<usize>,
    /// exclusive end, valid at cell starts
    cell_end: Vec<usize>,
    cells: usize,
    /// starts of cells created by splits, in creation order
    log: Vec<usize>,
}

impl Partition {
    fn new(keys: &[(u64, usize, usize)]) -> Self {
        let n = keys.len();
        let mut lab: Vec<usize> = (0..n).collect();
        lab.sort_by_key(|&v| keys[v]);
        let mut pos = vec![0; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        let mut cells = 0;
        let mut s = 0;
        while s < n {
            let mut e = s + 1;
            while e < n && keys[lab[e]] == keys[lab[s]] {
                e += 1;
            }
            for c in &mut cell_of[s..e] {
                *c = s;
            }
            cell_end[s] = e;
            cells += 1;
            s = e;
        }
        Partition { lab, pos, cell_of, cell_end, cells, log: Vec::new() }
    }

    fn n(&self) -> usize {
        self.lab.len()
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.n() {
            out.push(s);
            s = self.cell_end[s];
        }
        out
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        let mut s = 0;
        while s < self.n() {
            if self.cell_end[s] - s > 1 {
                return Some(s);
            }
            s = self.cell_end[s];
        }
        None
    }

    fn swap(&mut self, i: usize, j: usize) {
        let (a, b) = (self.lab[i], self.lab[j]);
        self.lab[i] = b;
        self.lab[j] = a;
        self.pos[b] = i;
        self.pos[a] = j;
    }

    /// Splits `[at, end)` off the cell containing `at - 1`.
    fn split_at(&mut self, at: usize) {
        let start = self.cell_of[at - 1];
        let end = self.cell_end[start];
        for c in &mut self.cell_of[at..end] {
            *c = at;
        }
        self.cell_end[start] = at;
        self.cell_end[at] = end;
        self.cells += 1;
        self.log.push(at);
    }

    /// Places `v` first in its cell and makes it a singleton; returns its position.
    fn individualise(&mut self, v: usize) -> usize {
        let s = self.cell_of[self.pos[v]];
        self.swap(s, self.pos[v]);
        self.split_at(s + 1);
        s
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let at = self.log.pop().unwrap();
            let start = self.cell_of[at - 1];
            let end = self.cell_end[at];
            for c in &mut self.cell_of[at..end] {
                *c = start;
            }
            self.cell_end[start] = end;
            self.cells -= 1;
        }
    }
}

/// Scratch space for refinement.
struct Refiner {
    out_cnt: Vec<u32>,
    in_cnt: Vec<u32>,
    touched: Vec<usize>,
    is_touched: Vec<bool>,
    queued: Vec<bool>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            out_cnt: vec![0; n],
            in_cnt: vec![0; n],
            touched: Vec::new(),
            is_touched: vec![false; n],
            queued: vec![false; n],
        }
    }

    /// Refines to the coarsest equitable partition below `p`, starting from the
    /// given splitter cells. Returns a hash of the refinement trace.
    fn refine(&mut self, g: &Digraph, p: &mut Partition, initial: &[usize]) -> u64 {
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for &s in initial {
            if !self.queued[s] {
                self.queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut trace: u64 = p.cells as u64;
        while let Some(w) = queue.pop_front() {
            self.queued[w] = false;
            trace = mix(trace, w as u64);
            if p.is_discrete() {
                continue;
            }
            let w_end = p.cell_end[w];
            for i in w..w_end {
                let x = p.lab[i];
                for &y in g.out_neighbors(x) {
                    // y has an in-neighbour in W
                    self.in_cnt[y] += 1;
                    if !self.is_touched[y] {
                        self.is_touched[y] = true;
                        self.touched.push(y);
                    }
                }
                for &y in g.in_neighbors(x) {
                    self.out_cnt[y] += 1;
                    if !self.is_touched[y] {
                        self.is_touched[y] = true;
                        self.touched.push(y);
                    }
                }
            }
            let mut touched = std::mem::take(&mut self.touched);
            // group touched vertices by cell, cells in increasing start order
            touched.sort_unstable_by_key(|&v| (p.cell_of[p.pos[v]], v));
            let mut i = 0;
            while i < touched.len() {
                let s = p.cell_of[p.pos[touched[i]]];
                let mut j = i;
                while j < touched.len() && p.cell_of[p.pos[touched[j]]] == s {
                    j += 1;
                }
                trace = self.split_cell(p, s, &touched[i..j], trace, &mut queue);
                i = j;
            }
            for &v in &touched {
                self.is_touched[v] = false;
                self.out_cnt[v] = 0;
                self.in_cnt[v] = 0;
            }
            touched.clear();
            self.touched = touched;
        }
        mix(trace, p.cells as u64)
    }

    fn split_cell(
        &mut self,
        p: &mut Partition,
        s: usize,
        members: &[usize],
        mut trace: u64,
        queue: &mut std::collections::VecDeque<usize>,
    ) -> u64 {
        let e = p.cell_end[s];
        let t = members.len();
        if e - s == 1 {
            return trace;
        }
        let key = |v: usize| (self.out_cnt[v], self.in_cnt[v]);
        if t == e - s {
            let k0 = key(members[0]);
            if members.iter().all(|&v| key(v) == k0) {
                trace = mix(trace, ((k0.0 as u64) << 32) | k0.1 as u64);
                return trace;
            }
        }
        // move touched vertices to the tail of the cell, then sort the tail by key
        for (placed, &v) in members.iter().enumerate() {
            let q = e - 1 - placed;
            p.swap(p.pos[v], q);
        }
        let tail = e - t;
        let mut seg: Vec<usize> = p.lab[tail..e].to_vec();
        seg.sort_unstable_by_key(|&v| (key(v), v));
        for (k, &v) in seg.iter().enumerate() {
            p.lab[tail + k] = v;
            p.pos[v] = tail + k;
        }
        // fragment boundaries
        let mut starts = Vec::new();
        if tail > s {
            starts.push(s);
        }
        let mut k = tail;
        while k < e {
            starts.push(k);
            let kv = key(p.lab[k]);
            trace = mix(trace, ((kv.0 as u64) << 32) | kv.1 as u64);
            let mut m = k + 1;
            while m < e && key(p.lab[m]) == kv {
                m += 1;
            }
            k = m;
        }
        trace = mix(trace, (s as u64) << 20 | starts.len() as u64);
        if starts.len() == 1 {
            return trace;
        }
        for &f in &starts[1..] {
            p.split_at(f);
        }
        let size = |f: usize| p.cell_end[f] - f;
        if self.queued[s] {
            for &f in &starts[1..] {
                self.queued[f] = true;
                queue.push_back(f);
            }
        } else {
            let mut largest = starts[0];
            for &f in &starts[1..] {
                if size(f) > size(largest) {
                    largest = f;
                }
            }
            for &f in &starts {
                if f != largest {
                    self.queued[f] = true;
                    queue.push_back(f);
                }
            }
        }
        trace
    }
}

/// Comparable canonical certificate of a digraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub invariants: Vec<u64>,
    /// sorted `pos(tail) * n + pos(head)` over all darts at the canonical leaf
    pub certificate: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub generators: Vec<Perm>,
    /// vertices individualised along the first leaf
    pub base: Vec<usize>,
    pub orbit_lengths: Vec<usize>,
    pub order: u128,
    /// canonical position of each vertex, when requested
    pub canonical_position: Option<Vec<usize>>,
    pub canonical_form: Option<CanonicalForm>,
    pub nodes: u64,
}

struct Leaf {
    lab: Vec<usize>,
    inv: Vec<u64>,
    path: Vec<usize>,
    cert: Vec<u64>,
}

struct Search<'a> {
    g: &'a Digraph,
    p: Partition,
    r: Refiner,
    canon: bool,
    gens: Vec<Perm>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    path: Vec<usize>,
    inv: Vec<u64>,
    nodes: u64,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

struct CellOrbits {
    cell: Vec<usize>,
    parent: Vec<usize>,
    gens_seen: usize,
}

impl CellOrbits {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn index(&self, v: usize) -> usize {
        self.cell.binary_search(&v).expect("generator preserves cells")
    }

    fn absorb(&mut self, gens: &[Perm], path: &[usize]) {
        for g in &gens[self.gens_seen..] {
            if path.iter().any(|&v| g.image(v) != v) {
                continue;
            }
            for i in 0..self.cell.len() {
                let j = self.index(g.image(self.cell[i]));
                let (a, b) = (self.find(i), self.find(j));
                if a != b {
                    self.parent[a.max(b)] = a.min(b);
                }
            }
        }
        self.gens_seen = gens.len();
    }
}

impl<'a> Search<'a> {
    fn leaf_cert(&self) -> Vec<u64> {
        let n = self.g.n() as u64;
        let mut cert: Vec<u64> =
            self.g.darts().iter().map(|d| self.p.pos[d.tail] as u64 * n + self.p.pos[d.head] as u64).collect();
        cert.sort_unstable();
        cert
    }

    fn map_between(&self, from: &[usize]) -> Perm {
        let mut images = vec![0; from.len()];
        for (i, &v) in from.iter().enumerate() {
            images[v] = self.p.lab[i];
        }
        Perm::from_images_unchecked(images)
    }

    fn snapshot(&self) -> Leaf {
        Leaf {
            lab: self.p.lab.clone(),
            inv: self.inv.clone(),
            path: self.path.clone(),
            cert: if self.canon { self.leaf_cert() } else { Vec::new() },
        }
    }

    fn add_generator(&mut self, gamma: Perm) {
        if !gamma.is_identity() && !self.gens.contains(&gamma) {
            self.gens.push(gamma);
        }
    }

    /// Returns the level to jump back to, if any.
    fn leaf(&mut self) -> Option<usize> {
        let Some(first) = &self.first else {
            let leaf = self.snapshot();
            if self.canon {
                self.best = Some(Leaf { lab: leaf.lab.clone(), inv: leaf.inv.clone(), path: leaf.path.clone(), cert: leaf.cert.clone() });
            }
            self.first = Some(leaf);
            return None;
        };
        if self.inv == first.inv {
            let gamma = self.map_between(&first.lab);
            if gamma.is_automorphism_of(self.g) {
                let back = common_prefix(&self.path, &first.path);
                self.add_generator(gamma);
                return Some(back);
            }
        }
        if !self.canon {
            return None;
        }
        let best = self.best.as_ref().unwrap();
        let by_inv = self.inv.as_slice().cmp(best.inv.as_slice());
        if by_inv == Ordering::Less {
            return None;
        }
        let cert = self.leaf_cert();
        let ord = by_inv.then_with(|| cert.cmp(&best.cert));
        match ord {
            Ordering::Less => None,
            Ordering::Equal => {
                let gamma = self.map_between(&best.lab);
                debug_assert!(gamma.is_automorphism_of(self.g));
                let back = common_prefix(&self.path, &best.path);
                self.add_generator(gamma);
                Some(back)
            }
            Ordering::Greater => {
                self.best = Some(Leaf { lab: self.p.lab.clone(), inv: self.inv.clone(), path: self.path.clone(), cert });
                None
            }
        }
    }

    fn keep(&self) -> bool {
        let Some(first) = &self.first else { return true };
        let k = self.inv.len();
        if first.inv.len() >= k && first.inv[..k] == self.inv[..] {
            return true;
        }
        if !self.canon {
            return false;
        }
        let best = self.best.as_ref().unwrap();
        let m = k.min(best.inv.len());
        self.inv[..m] >= best.inv[..m]
    }

    fn visit(&mut self) -> Option<usize> {
        self.nodes += 1;
        let level = self.path.len();
        let Some(s) = self.p.first_nonsingleton() else {
            return self.leaf();
        };
        let mut cell: Vec<usize> = self.p.lab[s..self.p.cell_end[s]].to_vec();
        cell.sort_unstable();
        let mut orbits = CellOrbits { parent: (0..cell.len()).collect(), cell, gens_seen: 0 };
        let mut explored_roots: Vec<usize> = Vec::new();
        for i in 0..orbits.cell.len() {
            orbits.absorb(&self.gens, &self.path);
            let root = orbits.find(i);
            if explored_roots.iter().any(|&r| orbits.find(r) == root) {
                continue;
            }
            explored_roots.push(i);
            let v = orbits.cell[i];
            let mark = self.p.log.len();
            let at = self.p.individualise(v);
            let h = self.r.refine(self.g, &mut self.p, &[at]);
            self.path.push(v);
            self.inv.push(mix(h, self.p.is_discrete() as u64));
            let jump = if self.keep() { self.visit() } else { None };
            self.path.pop();
            self.inv.pop();
            self.p.undo_to(mark);
            if let Some(target) = jump {
                if target < level {
                    return Some(target);
                }
            }
        }
        None
    }
}

/// Runs the search. `colours`, when given, fixes an initial vertex colouring
/// that automorphisms must preserve.
pub fn search(g: &Digraph, colours: Option<&[u64]>, canonical: bool) -> SearchOutcome {
    let n = g.n();
    let keys: Vec<(u64, usize, usize)> = (0..n)
        .map(|v| {
            let (o, i) = g.valences(v);
            (colours.map_or(0, |c| c[v]), o, i)
        })
        .collect();
    let mut p = Partition::new(&keys);
    let mut r = Refiner::new(n);
    let starts = p.cell_starts();
    let mut cell_sizes: Vec<u64> = starts.iter().map(|&s| (p.cell_end[s] - s) as u64).collect();
    cell_sizes.push(n as u64);
    let mut root_inv = cell_sizes.iter().fold(0u64, |h, &x| mix(h, x));
    // initial cell keys are part of the invariant
    for &s in &starts {
        let k = keys[p.lab[s]];
        root_inv = mix(root_inv, mix(mix(k.0, k.1 as u64), k.2 as u64));
    }
    root_inv = mix(root_inv, r.refine(g, &mut p, &starts));
    p.log.clear();
    let mut st = Search {
        g,
        p,
        r,
        canon: canonical,
        gens: Vec::new(),
        first: None,
        best: None,
        path: Vec::new(),
        inv: vec![root_inv],
        nodes: 0,
    };
    st.visit();
    let first = st.first.take().expect("search reaches a leaf");
    let base = first.path.clone();
    let mut orbit_lengths = Vec::with_capacity(base.len());
    for (k, &b) in base.iter().enumerate() {
        let gens: Vec<&Perm> =
            st.gens.iter().filter(|g| base[..k].iter().all(|&c| g.image(c) == c)).collect();
        orbit_lengths.push(orbit_len(n, &gens, b));
    }
    let order = orbit_lengths.iter().map(|&l| l as u128).product();
    let (canonical_position, canonical_form) = match st.best.take() {
        Some(best) if canonical => {
            let mut position = vec![0; n];
            for (i, &v) in best.lab.iter().enumerate() {
                position[v] = i;
            }
            (Some(position), Some(CanonicalForm { n, invariants: best.inv, certificate: best.cert }))
        }
        _ => (None, None),
    };
    SearchOutcome {
        generators: st.gens,
        base,
        orbit_lengths,
        order,
        canonical_position,
        canonical_form,
        nodes: st.nodes,
    }
}

fn orbit_len(n: usize, gens: &[&Perm], start: usize) -> usize {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{dcyc, directed_cycle};

    #[test]
    fn partition_undo_restores_cells() {
        let mut p = Partition::new(&[(0, 0, 0); 5]);
        assert_eq!(p.cells, 1);
        let mark = p.log.len();
        p.individualise(3);
        p.individualise(1);
        assert_eq!(p.cells, 3);
        p.undo_to(mark);
        assert_eq!(p.cells, 1);
        assert_eq!(p.cell_end[0], 5);
        assert!(p.cell_of.iter().all(|&c| c == 0));
    }

    #[test]
    fn cycle_orders() {
        for n in 3..12 {
            assert_eq!(search(&dcyc(n).unwrap(), None, false).order, 2 * n as u128);
            assert_eq!(search(&directed_cycle(n).unwrap(), None, true).order, n as u128);
        }
    }

    #[test]
    fn empty_and_complete() {
        assert_eq!(search(&Digraph::empty(6), None, false).order, 720);
        let k5 = Digraph::new(5, (0..5).flat_map(|a| (0..5).filter(move |&b| b != a).map(move |b| (a, b)))).unwrap();
        assert_eq!(search(&k5, None, true).order, 120);
        assert_eq!(search(&Digraph::empty(0), None, true).order, 1);
        assert_eq!(search(&Digraph::empty(1), None, true).order, 1);
    }

    #[test]
    fn colours_restrict_the_group() {
        let c = dcyc(6).unwrap();
        let colours = [0, 1, 0, 1, 0, 1];
        assert_eq!(search(&c, Some(&colours), false).order, 6);
    }

    #[test]
    fn canonical_forms_agree_on_relabelling() {
        let g = Digraph::new(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 4)]).unwrap();
        let f = search(&g, None, true).canonical_form.unwrap();
        let h = g.relabel(&[5, 3, 1, 0, 2, 4]);
        assert_eq!(search(&h, None, true).canonical_form.unwrap(), f);
        let skew = Digraph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let fs = search(&skew, None, true).canonical_form.unwrap();
        assert_ne!(search(&skew.reverse(), None, true).canonical_form.unwrap(), fs);
    }
}
