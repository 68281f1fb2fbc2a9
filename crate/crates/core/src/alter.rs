//! Walk sums, alter classes and the alter-perimeter.
//!
//! Potentials are assigned along a BFS spanning tree of the underlying graph
//! (`p(head) = p(tail) + 1` across tree darts). Every dart `(u, v)` then has a
//! discrepancy `p(u) + 1 - p(v)`, and the alter-perimeter is the number of
//! classes of `p` modulo the gcd of all discrepancies.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::digraph::{Digraph, Walk};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlterLabeling {
    /// gcd of dart discrepancies; 0 when all vanish and classes are free integers
    pub modulus: u64,
    /// number of alter classes
    pub perimeter: usize,
    /// class index per vertex, vertex 0 always in class 0
    pub class_of: Vec<i64>,
}

impl AlterLabeling {
    pub fn same_class(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }
}

fn potentials(g: &Digraph) -> Result<Vec<i64>> {
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut p: Vec<Option<i64>> = vec![None; n];
    p[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let pv = p[v].unwrap();
        for &w in g.out_neighbors(v) {
            if p[w].is_none() {
                p[w] = Some(pv + 1);
                queue.push_back(w);
            }
        }
        for &w in g.in_neighbors(v) {
            if p[w].is_none() {
                p[w] = Some(pv - 1);
                queue.push_back(w);
            }
        }
    }
    p.into_iter().map(|x| x.ok_or(Error::Disconnected)).collect()
}

pub fn alter_labeling(g: &Digraph) -> Result<AlterLabeling> {
    let p = potentials(g)?;
    let modulus = g
        .darts()
        .iter()
        .fold(0u64, |acc, d| num_integer::gcd(acc, (p[d.tail] + 1 - p[d.head]).unsigned_abs()));
    let class_of: Vec<i64> = if modulus == 0 {
        p
    } else {
        p.iter().map(|&x| x.rem_euclid(modulus as i64)).collect()
    };
    let perimeter = class_of.iter().collect::<BTreeSet<_>>().len();
    Ok(AlterLabeling { modulus, perimeter, class_of })
}

pub fn alter_perimeter(g: &Digraph) -> Result<usize> {
    Ok(alter_labeling(g)?.perimeter)
}

/// A sum-zero walk from `u` to `v`, found by BFS over `(vertex, partial sum)`.
///
/// Partial sums are confined to `[-2n, 2n]`.
pub fn sum_zero_walk(g: &Digraph, u: usize, v: usize) -> Option<Walk> {
    if u == v {
        return Some(Walk::trivial(u));
    }
    let bound = 2 * g.n() as i64;
    let start = (u, 0i64);
    let mut prev: HashMap<(usize, i64), ((usize, i64), i8)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    let target = (v, 0i64);
    while let Some((x, s)) = queue.pop_front() {
        if (x, s) == target {
            break;
        }
        let steps = g
            .out_neighbors(x)
            .iter()
            .map(|&w| (w, 1i8))
            .chain(g.in_neighbors(x).iter().map(|&w| (w, -1i8)));
        for (w, sign) in steps {
            let next = (w, s + sign as i64);
            if next.1.abs() > bound || !seen.insert(next) {
                continue;
            }
            prev.insert(next, ((x, s), sign));
            queue.push_back(next);
        }
    }
    if !seen.contains(&target) {
        return None;
    }
    let mut vertices = vec![v];
    let mut signs = Vec::new();
    let mut cur = target;
    while cur != start {
        let (p, sign) = prev[&cur];
        vertices.push(p.0);
        signs.push(sign);
        cur = p;
    }
    vertices.reverse();
    signs.reverse();
    Some(Walk { vertices, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{dcyc, directed_cycle};

    #[test]
    fn cycles() {
        assert_eq!(alter_perimeter(&dcyc(3).unwrap()).unwrap(), 1);
        assert_eq!(alter_perimeter(&dcyc(4).unwrap()).unwrap(), 2);
        for n in 3..10 {
            let t = directed_cycle(n).unwrap();
            assert_eq!(alter_perimeter(&t).unwrap(), n);
            assert_eq!(alter_perimeter(&t.reverse()).unwrap(), n);
        }
    }

    #[test]
    fn graphs_have_perimeter_one_or_two() {
        for n in 3..10 {
            let expected = if n % 2 == 0 { 2 } else { 1 };
            assert_eq!(alter_perimeter(&dcyc(n).unwrap()).unwrap(), expected);
        }
    }

    #[test]
    fn labels_advance_along_darts() {
        let t = directed_cycle(5).unwrap();
        let l = alter_labeling(&t).unwrap();
        assert_eq!(l.class_of[0], 0);
        for d in t.darts() {
            assert_eq!((l.class_of[d.head] - l.class_of[d.tail]).rem_euclid(5), 1);
        }
    }

    #[test]
    fn free_labeling_for_paths() {
        let path = Digraph::new(3, [(0, 1), (2, 1)]).unwrap();
        let l = alter_labeling(&path).unwrap();
        assert_eq!(l.modulus, 0);
        assert_eq!(l.class_of, vec![0, 1, 0]);
        assert_eq!(l.perimeter, 2);
    }

    #[test]
    fn disconnected_is_an_error() {
        let two = dcyc(3).unwrap().disjoint_union(&dcyc(3).unwrap());
        assert!(matches!(alter_labeling(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn witnesses() {
        let w = sum_zero_walk(&dcyc(5).unwrap(), 2, 2).unwrap();
        assert_eq!(w.vertices, vec![2]);
        let c3 = dcyc(3).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let w = sum_zero_walk(&c3, u, v).unwrap();
                assert!(w.is_valid_in(&c3));
                assert_eq!((w.start(), w.end(), w.sum()), (u, v, 0));
            }
        }
        let t = directed_cycle(3).unwrap();
        assert!(sum_zero_walk(&t, 0, 1).is_none());
        assert!(sum_zero_walk(&t, 2, 0).is_none());
    }
}
