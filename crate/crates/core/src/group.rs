//! Finitely generated permutation groups backed by a stabiliser chain.
//!
//! The chain is built with the deterministic Schreier–Sims algorithm on first
//! use, unless the group was created from a known base and strong generating set.

use std::cell::OnceCell;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// One level of a stabiliser chain.
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// strong generators fixing all earlier base points
    gens: Vec<Perm>,
    inv_gens: Vec<Perm>,
    /// `parent[x] = Some(k)`: `x` was reached by applying `gens[k]`
    parent: Vec<Option<usize>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, gens: Vec<Perm>, degree: usize) -> Self {
        let mut level = Level {
            base,
            inv_gens: gens.iter().map(Perm::inverse).collect(),
            gens,
            parent: vec![None; degree],
            orbit: Vec::new(),
        };
        level.rebuild();
        level
    }

    fn push(&mut self, g: Perm) {
        self.inv_gens.push(g.inverse());
        self.gens.push(g);
        self.rebuild();
    }

    fn rebuild(&mut self) {
        self.parent.iter_mut().for_each(|p| *p = None);
        self.orbit.clear();
        self.orbit.push(self.base);
        // the base point is marked with a sentinel index
        self.parent[self.base] = Some(usize::MAX);
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            i += 1;
            for (k, g) in self.gens.iter().enumerate() {
                let y = g.image(x);
                if self.parent[y].is_none() {
                    self.parent[y] = Some(k);
                    self.orbit.push(y);
                }
            }
        }
    }

    fn contains(&self, x: usize) -> bool {
        self.parent[x].is_some()
    }

    /// `h * u_x^{-1}` where `u_x` maps the base point to `x = base^h`.
    fn strip(&self, mut h: Perm) -> Perm {
        let mut x = h.image(self.base);
        while x != self.base {
            let k = self.parent[x].unwrap();
            h = h.then(&self.inv_gens[k]);
            x = self.inv_gens[k].image(x);
        }
        h
    }

    /// Transversal element mapping the base point to `x`.
    fn transversal(&self, x: usize) -> Perm {
        let degree = self.parent.len();
        let mut word = Vec::new();
        let mut y = x;
        while y != self.base {
            let k = self.parent[y].unwrap();
            word.push(k);
            y = self.inv_gens[k].image(y);
        }
        word.iter().rev().fold(Perm::identity(degree), |acc, &k| acc.then(&self.gens[k]))
    }
}

#[derive(Clone, Debug, Default)]
struct Chain {
    levels: Vec<Level>,
}

impl Chain {
    /// Sifts `h` starting at `from`; returns the residue and the level where it stopped.
    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            if !level.contains(h.image(level.base)) {
                return (h, i);
            }
            h = level.strip(h);
        }
        (h, self.levels.len())
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }
}

fn first_moved(p: &Perm) -> Option<usize> {
    (0..p.degree()).find(|&x| p.image(x) != x)
}

fn schreier_sims(degree: usize, gens: &[Perm]) -> Chain {
    let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut base: Vec<usize> = Vec::new();
    for g in &gens {
        if base.iter().all(|&b| g.image(b) == b) {
            base.push(first_moved(g).unwrap());
        }
    }
    let mut chain = Chain::default();
    for (i, &b) in base.iter().enumerate() {
        let level_gens =
            gens.iter().filter(|g| base[..i].iter().all(|&c| g.image(c) == c)).cloned().collect();
        chain.levels.push(Level::new(b, level_gens, degree));
    }
    let mut i = chain.levels.len() as isize - 1;
    while i >= 0 {
        let li = i as usize;
        let mut found = None;
        'search: {
            let level = &chain.levels[li];
            for &x in &level.orbit {
                let ux = level.transversal(x);
                for s in &level.gens {
                    let xs = s.image(x);
                    // u_x s u_{x^s}^{-1}, stripped through this level
                    let y = level.strip(ux.then(s));
                    debug_assert_eq!(y.image(level.base), level.base, "point {xs}");
                    let (h, j) = chain.sift(y, li + 1);
                    if !h.is_identity() {
                        found = Some((h, j));
                        break 'search;
                    }
                }
            }
        }
        match found {
            None => i -= 1,
            Some((h, j)) => {
                if j == chain.levels.len() {
                    let b = first_moved(&h).unwrap();
                    chain.levels.push(Level::new(b, Vec::new(), degree));
                }
                for l in li + 1..=j {
                    chain.levels[l].push(h.clone());
                }
                i = j as isize;
            }
        }
    }
    chain
}

/// Permutation domains a group acting on a digraph's vertices induces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Vertices,
    Darts,
    /// unordered pairs `{u, v}` joined by a dart in either direction
    Edges,
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceCell<Chain>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: g.degree() });
            }
        }
        Ok(PermGroup { degree, gens, chain: OnceCell::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, gens: Vec::new(), chain: OnceCell::new() }
    }

    /// Group with a known base and strong generating set; no Schreier–Sims pass is run.
    ///
    /// `strong_gens` must contain, for every `i`, generators of the pointwise
    /// stabiliser of `base[..i]`.
    pub fn from_strong_generators(degree: usize, base: &[usize], strong_gens: Vec<Perm>) -> Self {
        let mut chain = Chain::default();
        for (i, &b) in base.iter().enumerate() {
            let level_gens: Vec<Perm> = strong_gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.image(c) == c))
                .cloned()
                .collect();
            chain.levels.push(Level::new(b, level_gens, degree));
        }
        // drop trailing levels with trivial orbits
        while chain.levels.last().is_some_and(|l| l.orbit.len() == 1) {
            chain.levels.pop();
        }
        let cell = OnceCell::new();
        let _ = cell.set(chain);
        PermGroup { degree, gens: strong_gens, chain: cell }
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| schreier_sims(self.degree, &self.gens))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.base).collect()
    }

    /// Lengths of the basic orbits along the base.
    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: p.degree() });
        }
        let (h, _) = self.chain().sift(p.clone(), 0);
        Ok(h.is_identity())
    }

    /// `<gens ∪ extra>`.
    pub fn with_generators(&self, extra: impl IntoIterator<Item = Perm>) -> Result<PermGroup> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        PermGroup::new(self.degree, gens)
    }

    /// Orbit partition; each orbit sorted, orbits ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.gens, |g, x| g.image(x))
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            i += 1;
            for g in &self.gens {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn stabiliser_order(&self, point: usize) -> u128 {
        self.order() / self.orbit_of(point).len() as u128
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_of(0).len() == self.degree
    }

    /// Fails unless every generator preserves the dart set of `g`.
    pub fn check_automorphisms_of(&self, g: &Digraph) -> Result<()> {
        if g.n() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: g.n() });
        }
        for (k, p) in self.gens.iter().enumerate() {
            if !p.is_automorphism_of(g) {
                return Err(Error::NotSubgroup(format!("generator {k} does not preserve the darts")));
            }
        }
        Ok(())
    }

    /// Orbits of the induced action; dart orbits index `g.darts()`, edge orbits
    /// index [`edge_list`].
    pub fn action_orbits(&self, g: &Digraph, action: Action) -> Result<Vec<Vec<usize>>> {
        self.check_automorphisms_of(g)?;
        Ok(match action {
            Action::Vertices => self.orbits(),
            Action::Darts => orbits_of(g.dart_count(), &self.gens, |p, k| {
                let d = g.darts()[k];
                g.dart_index(p.image(d.tail), p.image(d.head)).unwrap()
            }),
            Action::Edges => {
                let u = g.underlying();
                let edges = edge_list(g);
                // edge id of each underlying dart with tail < head
                let mut edge_of_dart = vec![usize::MAX; u.dart_count()];
                for (k, &(a, b)) in edges.iter().enumerate() {
                    edge_of_dart[u.dart_index(a, b).unwrap()] = k;
                }
                orbits_of(edges.len(), &self.gens, |p, k| {
                    let (a, b) = edges[k];
                    let (x, y) = (p.image(a), p.image(b));
                    edge_of_dart[u.dart_index(x.min(y), x.max(y)).unwrap()]
                })
            }
        })
    }

    pub fn is_transitive_on(&self, g: &Digraph, action: Action) -> Result<bool> {
        Ok(self.action_orbits(g, action)?.len() <= 1)
    }

    /// Setwise stabiliser of one block of a system of blocks, via Schreier's lemma.
    /// `block_of[x]` names the block of point `x`; the blocks must be permuted by the group.
    pub fn block_stabiliser(&self, block_of: &[usize], block: usize) -> Result<PermGroup> {
        let image_block = |p: &Perm, b: usize, rep: &[usize]| block_of[p.image(rep[b])];
        let nblocks = block_of.iter().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; nblocks];
        for (x, &b) in block_of.iter().enumerate() {
            if rep[b] == usize::MAX {
                rep[b] = x;
            }
        }
        for p in &self.gens {
            for (x, &b) in block_of.iter().enumerate() {
                if block_of[p.image(x)] != image_block(p, b, &rep) {
                    return Err(Error::Precondition("partition is not a block system".into()));
                }
            }
        }
        let mut transversal: Vec<Option<Perm>> = vec![None; nblocks];
        transversal[block] = Some(Perm::identity(self.degree));
        let mut queue = vec![block];
        let mut i = 0;
        while i < queue.len() {
            let b = queue[i];
            i += 1;
            for p in &self.gens {
                let c = image_block(p, b, &rep);
                if transversal[c].is_none() {
                    transversal[c] = Some(transversal[b].as_ref().unwrap().then(p));
                    queue.push(c);
                }
            }
        }
        let mut gens: Vec<Perm> = Vec::new();
        for &b in &queue {
            let t = transversal[b].as_ref().unwrap();
            for p in &self.gens {
                let c = image_block(p, b, &rep);
                let s = t.then(p).then(&transversal[c].as_ref().unwrap().inverse());
                if !s.is_identity() && !gens.contains(&s) {
                    gens.push(s);
                }
            }
        }
        PermGroup::new(self.degree, gens)
    }

    /// Action on an invariant subset, relabelled by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Result<PermGroup> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.restrict(points).ok_or_else(|| Error::Precondition("subset is not invariant".into())))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(points.len(), gens)
    }
}

/// Edges of the underlying graph as `(min, max)` pairs in sorted order.
pub fn edge_list(g: &Digraph) -> Vec<(usize, usize)> {
    g.underlying().darts().iter().filter(|d| d.tail < d.head).map(|d| (d.tail, d.head)).collect()
}

fn orbits_of(n: usize, gens: &[Perm], act: impl Fn(&Perm, usize) -> usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, act(g, x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(x);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(n: usize, c: &[usize]) -> Perm {
        Perm::from_cycles(n, &[c]).unwrap()
    }

    fn enumerate(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
        let mut all = HashSet::from([Perm::identity(degree)]);
        let mut frontier = vec![Perm::identity(degree)];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q = p.then(g);
                if all.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        all
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::trivial(4);
        assert_eq!(g.order(), 1);
        assert_eq!(g.orbits(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(g.contains(&Perm::identity(4)).unwrap());
    }

    #[test]
    fn dihedral_of_square() {
        let g = PermGroup::new(4, vec![cyc(4, &[0, 1, 2, 3]), cyc(4, &[0, 2])]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(enumerate(4, g.generators()).len(), 8);
        assert!(g.is_transitive());
        assert_eq!(g.stabiliser_order(0), 2);
    }

    #[test]
    fn membership() {
        let g = PermGroup::new(3, vec![cyc(3, &[0, 1])]).unwrap();
        assert!(!g.contains(&cyc(3, &[0, 1, 2])).unwrap());
        assert!(g.contains(&cyc(3, &[0, 1])).unwrap());
        assert!(matches!(g.contains(&Perm::identity(4)), Err(Error::DegreeMismatch { .. })));
        assert!(PermGroup::new(3, vec![Perm::identity(2)]).is_err());
    }

    #[test]
    fn symmetric_groups() {
        for n in 2..8usize {
            let g = PermGroup::new(n, vec![cyc(n, &(0..n).collect::<Vec<_>>()), cyc(n, &[0, 1])]).unwrap();
            assert_eq!(g.order(), (1..=n as u128).product::<u128>());
        }
    }

    #[test]
    fn orders_match_enumeration() {
        // a few assorted groups on up to 9 points
        let cases: Vec<(usize, Vec<Perm>)> = vec![
            (6, vec![cyc(6, &[0, 1, 2]), cyc(6, &[3, 4, 5])]),
            (6, vec![cyc(6, &[0, 1, 2, 3, 4, 5]), cyc(6, &[1, 5])]),
            (8, vec![cyc(8, &[0, 1, 2, 3]), cyc(8, &[4, 5, 6, 7]), Perm::from_cycles(8, &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]]).unwrap()]),
            (9, vec![cyc(9, &[0, 1, 2, 3, 4, 5, 6, 7, 8]), Perm::from_cycles(9, &[&[1, 2, 4, 8, 7, 5]]).unwrap()]),
            (7, vec![cyc(7, &[0, 1, 2, 3, 4, 5, 6]), Perm::from_cycles(7, &[&[1, 2, 4], &[3, 6, 5]]).unwrap()]),
        ];
        for (n, gens) in cases {
            let g = PermGroup::new(n, gens.clone()).unwrap();
            let all = enumerate(n, &gens);
            assert_eq!(g.order(), all.len() as u128);
            for p in &all {
                assert!(g.contains(p).unwrap());
            }
        }
    }

    #[test]
    fn block_stabiliser_of_wreath() {
        // C3 wr C2 on two blocks {0,1,2} and {3,4,5}
        let swap = Perm::from_cycles(6, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap();
        let g = PermGroup::new(6, vec![cyc(6, &[0, 1, 2]), swap]).unwrap();
        assert_eq!(g.order(), 18);
        let blocks = [0, 0, 0, 1, 1, 1];
        let h = g.block_stabiliser(&blocks, 0).unwrap();
        assert_eq!(h.order(), 9);
        let r = h.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(r.order(), 3);
    }

    #[test]
    fn strong_generators_constructor_agrees() {
        let gens = vec![cyc(5, &[0, 1, 2, 3, 4]), Perm::from_cycles(5, &[&[1, 4], &[2, 3]]).unwrap()];
        let g = PermGroup::new(5, gens.clone()).unwrap();
        let known = PermGroup::from_strong_generators(5, &[0, 1], gens);
        assert_eq!(g.order(), 10);
        assert_eq!(known.order(), 10);
    }
}
