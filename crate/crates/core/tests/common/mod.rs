//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sbp_core::harness::census::generate_atd;
use sbp_core::products::dart_digraph;
use sbp_core::{dcyc, directed_cycle, Digraph};

pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Digraph {
    Digraph::new(n, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])).unwrap()
}

pub fn k4() -> Digraph {
    undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn k33() -> Digraph {
    let e: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    undirected(6, &e)
}

pub fn cube() -> Digraph {
    let e: Vec<_> = (0..8usize).flat_map(|v| (0..3).map(move |k| (v, v ^ (1 << k)))).filter(|&(a, b)| a < b).collect();
    undirected(8, &e)
}

pub fn petersen() -> Digraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    undirected(10, &e)
}

/// Cubic graph from LCF notation.
pub fn lcf(n: usize, jumps: &[i64], repeats: usize) -> Digraph {
    let mut e = BTreeSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        e.insert((i.min(j), i.max(j)));
    }
    let seq: Vec<i64> = jumps.iter().copied().cycle().take(jumps.len() * repeats).collect();
    assert_eq!(seq.len(), n);
    for (i, &s) in seq.iter().enumerate() {
        let j = (i as i64 + s).rem_euclid(n as i64) as usize;
        e.insert((i.min(j), i.max(j)));
    }
    undirected(n, &e.into_iter().collect::<Vec<_>>())
}

/// Tutte's 8-cage on 30 vertices.
pub fn tutte_8_cage() -> Digraph {
    lcf(30, &[-13, -9, 7, -7, 9, 13], 5)
}

/// Named small digraphs used across the suites.
pub fn corpus() -> Vec<(String, Digraph)> {
    let mut v: Vec<(String, Digraph)> = Vec::new();
    for n in 3..=8 {
        v.push((format!("DCyc[{n}]"), dcyc(n).unwrap()));
        v.push((format!("C{n}"), directed_cycle(n).unwrap()));
    }
    v.push(("K4".into(), k4()));
    v.push(("K3,3".into(), k33()));
    v.push(("Q3".into(), cube()));
    v.push(("skew".into(), Digraph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()));
    v.push(("path".into(), Digraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap()));
    v.push(("empty5".into(), Digraph::empty(5)));
    v.push(("D(K3)".into(), dart_digraph(&dcyc(3).unwrap())));
    v.push(("two triangles".into(), directed_cycle(3).unwrap().disjoint_union(&directed_cycle(3).unwrap())));
    for n in [6, 8] {
        for e in generate_atd(n).unwrap() {
            v.push((e.name, e.digraph));
        }
    }
    v
}

/// Random digraph without loops; each ordered pair is a dart with probability `p`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let darts: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b).filter(|_| rng.gen_bool(p)).collect();
    Digraph::new(n, darts).unwrap()
}

/// Connected orientation without sources or sinks: a directed Hamiltonian cycle
/// plus up to `extra` directed cycles on random vertex subsets, dropping any dart
/// that would repeat a dart or close a digon.
pub fn random_orientation(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Digraph {
    let mut darts: HashSet<(usize, usize)> = HashSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let add_cycle = |cyc: &[usize], darts: &mut HashSet<(usize, usize)>| {
        for k in 0..cyc.len() {
            let (a, b) = (cyc[k], cyc[(k + 1) % cyc.len()]);
            if !darts.contains(&(b, a)) {
                darts.insert((a, b));
            }
        }
    };
    add_cycle(&order, &mut darts);
    for _ in 0..rng.gen_range(0..=extra) {
        let len = rng.gen_range(3..=n);
        order.shuffle(rng);
        let sub = order[..len].to_vec();
        add_cycle(&sub, &mut darts);
    }
    let mut darts: Vec<_> = darts.into_iter().collect();
    darts.sort_unstable();
    Digraph::new(n, darts).unwrap()
}

/// Connected orientation without sources or sinks whose alter-perimeter is a
/// multiple of `m`: vertices get residues mod `m` and every dart steps a residue
/// up by one. Built as a union of directed cycles whose lengths are multiples of
/// `m`, added until every vertex lies on one and the result is connected.
pub fn random_periodic_orientation(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Digraph {
    let min_lap = if m >= 3 { 1 } else { 3_usize.div_ceil(m) };
    assert!(m >= 1 && n >= m * min_lap, "{n} vertices cannot carry period {m}");
    loop {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut class: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (k, &v) in order.iter().enumerate() {
            class[k % m].push(v);
        }
        let max_laps = class.iter().map(Vec::len).min().unwrap();
        let mut darts: HashSet<(usize, usize)> = HashSet::new();
        let mut covered = vec![false; n];
        let mut attempts = 0;
        while (covered.iter().any(|&c| !c) || !connected(n, &darts)) && attempts < 50 * n {
            attempts += 1;
            let laps = rng.gen_range(min_lap..=max_laps);
            // one distinct vertex per residue per lap
            let picks: Vec<Vec<usize>> = class.iter().map(|c| c.choose_multiple(rng, laps).copied().collect()).collect();
            let cycle: Vec<usize> = (0..laps).flat_map(|l| (0..m).map(move |r| (l, r))).map(|(l, r)| picks[r][l]).collect();
            for k in 0..cycle.len() {
                let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                if !darts.contains(&(b, a)) {
                    darts.insert((a, b));
                }
            }
            for &v in &cycle {
                covered[v] = true;
            }
        }
        let mut darts: Vec<_> = darts.into_iter().collect();
        darts.sort_unstable();
        let g = Digraph::new(n, darts).unwrap();
        if g.is_connected() && !g.has_sources_or_sinks() {
            return g;
        }
    }
}

fn connected(n: usize, darts: &HashSet<(usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in darts {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Random `k`-valent orientation: a union of `k` directed 2-factors built from
/// random permutations; retried until no dart repeats and no digon appears.
/// Needs `n >= 2k + 1`, the least order of a `k`-valent orientation.
pub fn random_k_valent(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Digraph {
    assert!(n > 2 * k, "no {k}-valent orientation on {n} vertices");
    loop {
        let mut darts = HashSet::new();
        let mut ok = true;
        for _ in 0..k {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            for (a, &b) in perm.iter().enumerate() {
                if a == b || darts.contains(&(b, a)) || !darts.insert((a, b)) {
                    ok = false;
                }
            }
        }
        if ok {
            let mut darts: Vec<_> = darts.into_iter().collect();
            darts.sort_unstable();
            return Digraph::new(n, darts).unwrap();
        }
    }
}

pub fn random_relabelling(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Every dart-preserving bijection `V(g) -> V(h)`, by plain backtracking.
pub fn all_isomorphisms(g: &Digraph, h: &Digraph) -> Vec<Vec<usize>> {
    fn go(g: &Digraph, h: &Digraph, map: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let k = map.len();
        if k == g.n() {
            out.push(map.clone());
            return;
        }
        for c in 0..h.n() {
            if used[c] || g.valences(k) != h.valences(c) {
                continue;
            }
            let fits = (0..k).all(|j| g.has_dart(k, j) == h.has_dart(c, map[j]) && g.has_dart(j, k) == h.has_dart(map[j], c));
            if fits {
                used[c] = true;
                map.push(c);
                go(g, h, map, used, out);
                map.pop();
                used[c] = false;
            }
        }
    }
    if g.n() != h.n() || g.dart_count() != h.dart_count() {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(g, h, &mut Vec::new(), &mut vec![false; h.n()], &mut out);
    out
}

/// Closure of a generating set by breadth-first multiplication.
pub fn enumerate_group(degree: usize, gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Alter relation by search over `(vertex, running sum)` with `|sum| <= bound`.
/// Returns `related[u][v]`.
pub fn alter_relation(g: &Digraph, bound: i64) -> Vec<Vec<bool>> {
    let n = g.n();
    let width = (2 * bound + 1) as usize;
    let mut rel = vec![vec![false; n]; n];
    for (u, row) in rel.iter_mut().enumerate() {
        let mut seen = vec![false; n * width];
        let idx = |v: usize, s: i64| v * width + (s + bound) as usize;
        seen[idx(u, 0)] = true;
        let mut queue = VecDeque::from([(u, 0i64)]);
        while let Some((v, s)) = queue.pop_front() {
            let steps = g.out_neighbors(v).iter().map(|&w| (w, s + 1)).chain(g.in_neighbors(v).iter().map(|&w| (w, s - 1)));
            for (w, t) in steps {
                if t.abs() <= bound && !seen[idx(w, t)] {
                    seen[idx(w, t)] = true;
                    queue.push_back((w, t));
                }
            }
        }
        for (v, r) in row.iter_mut().enumerate() {
            *r = seen[idx(v, 0)];
        }
    }
    rel
}
