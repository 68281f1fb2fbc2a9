//! Product and derived-digraph constructions.
//!
//! Vertex flattening is row-major throughout:
//! * box product: `(a, x) -> a * n2 + x`
//! * separated box product: `(a, x, i) -> (a * n2 + x) * 2 + i`
//! * canonical double cover: `(u, i) -> u * 2 + i`
//! * dart digraph / A²D: darts are indexed by their position in the sorted dart
//!   list, and a pair of darts `(x, y)` by `x * m + y`.

use crate::alter::alter_perimeter;
use crate::digraph::{Dart, Digraph};
use crate::error::{Error, Result};

/// White vertices carry colour 0, black ones colour 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SbpVertex {
    pub a: usize,
    pub x: usize,
    pub colour: u8,
}

impl SbpVertex {
    pub fn encode(self, n2: usize) -> usize {
        (self.a * n2 + self.x) * 2 + self.colour as usize
    }

    pub fn decode(index: usize, n2: usize) -> Self {
        let colour = (index % 2) as u8;
        let ax = index / 2;
        SbpVertex { a: ax / n2, x: ax % n2, colour }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DartKind {
    /// white -> black, first coordinate moves
    Horizontal,
    /// black -> white, second coordinate moves
    Vertical,
}

/// Kind of an SBP dart, read off the colour of its tail.
pub fn dart_kind(d: Dart) -> DartKind {
    if d.tail % 2 == 0 {
        DartKind::Horizontal
    } else {
        DartKind::Vertical
    }
}

pub fn box_product(g1: &Digraph, g2: &Digraph) -> Digraph {
    let n2 = g2.n();
    let mut darts = Vec::with_capacity(g1.dart_count() * n2 + g1.n() * g2.dart_count());
    for d in g1.darts() {
        for x in 0..n2 {
            darts.push(Dart::new(d.tail * n2 + x, d.head * n2 + x));
        }
    }
    for a in 0..g1.n() {
        for d in g2.darts() {
            darts.push(Dart::new(a * n2 + d.tail, a * n2 + d.head));
        }
    }
    Digraph::from_darts_dedup(g1.n() * n2, darts)
}

/// The separated box product `SBP(g1, g2)`.
pub fn sbp(g1: &Digraph, g2: &Digraph) -> Digraph {
    let n2 = g2.n();
    let v = |a: usize, x: usize, c: u8| SbpVertex { a, x, colour: c }.encode(n2);
    let mut darts = Vec::with_capacity(g1.dart_count() * n2 + g1.n() * g2.dart_count());
    for d in g1.darts() {
        for x in 0..n2 {
            darts.push(Dart::new(v(d.tail, x, 0), v(d.head, x, 1)));
        }
    }
    for a in 0..g1.n() {
        for d in g2.darts() {
            darts.push(Dart::new(v(a, d.tail, 1), v(a, d.head, 0)));
        }
    }
    Digraph::from_darts_dedup(2 * g1.n() * n2, darts)
}

/// Canonical double cover: darts `((u,i),(v,1-i))`.
pub fn cdc(g: &Digraph) -> Digraph {
    let mut darts = Vec::with_capacity(2 * g.dart_count());
    for d in g.darts() {
        for i in 0..2 {
            darts.push(Dart::new(d.tail * 2 + i, d.head * 2 + 1 - i));
        }
    }
    Digraph::from_darts_dedup(2 * g.n(), darts)
}

/// Vertices are the darts of `g` (in sorted order), darts are its 2-darts.
pub fn dart_digraph(g: &Digraph) -> Digraph {
    let mut darts = Vec::with_capacity(g.dart_count() * 2);
    for (x, y) in g.two_darts() {
        let i = g.dart_index(x.tail, x.head).unwrap();
        let j = g.dart_index(y.tail, y.head).unwrap();
        darts.push(Dart::new(i, j));
    }
    Digraph::from_darts_dedup(g.dart_count(), darts)
}

/// The digraph on pairs of darts of `lambda`: `((x,y),(y,w))` for every 2-dart `(x,w)`.
pub fn a2d(lambda: &Digraph) -> Result<Digraph> {
    if !lambda.is_graph() {
        return Err(Error::NotAGraph);
    }
    let m = lambda.dart_count();
    let two: Vec<(usize, usize)> = lambda
        .two_darts()
        .into_iter()
        .map(|(x, w)| {
            (lambda.dart_index(x.tail, x.head).unwrap(), lambda.dart_index(w.tail, w.head).unwrap())
        })
        .collect();
    let mut darts = Vec::with_capacity(m * two.len());
    for &(x, w) in &two {
        for y in 0..m {
            darts.push(Dart::new(x * m + y, y * m + w));
        }
    }
    Ok(Digraph::from_darts_dedup(m * m, darts))
}

pub fn a2g(lambda: &Digraph) -> Result<Digraph> {
    Ok(a2d(lambda)?.underlying())
}

/// The explicit vertex map `CDC(A²D(Λ)) -> SBP(DΛ, DΛ)`,
/// `((x,y),0) -> (x,y,0)` and `((x,y),1) -> (y,x,1)`, verified dart by dart.
pub fn phi_iso(lambda: &Digraph) -> Result<Vec<usize>> {
    if !lambda.is_graph() || !lambda.is_connected() || !lambda.is_k_valent(3) {
        return Err(Error::Precondition("expected a connected cubic graph".into()));
    }
    let m = lambda.dart_count();
    let map: Vec<usize> = (0..2 * m * m)
        .map(|idx| {
            let (xy, i) = (idx / 2, idx % 2);
            let (x, y) = (xy / m, xy % m);
            if i == 0 {
                idx
            } else {
                (y * m + x) * 2 + 1
            }
        })
        .collect();
    let source = cdc(&a2d(lambda)?);
    let dl = dart_digraph(lambda);
    let target = sbp(&dl, &dl);
    if !is_isomorphism(&source, &target, &map) {
        return Err(Error::Internal("phi does not preserve darts".into()));
    }
    Ok(map)
}

/// True iff `map` is a bijection `V(g) -> V(h)` carrying `D(g)` onto `D(h)`.
pub fn is_isomorphism(g: &Digraph, h: &Digraph, map: &[usize]) -> bool {
    if g.n() != h.n() || map.len() != g.n() || g.dart_count() != h.dart_count() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &v in map {
        if v >= h.n() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    g.darts().iter().all(|d| h.has_dart(map[d.tail], map[d.head]))
}

/// A connected component extracted from a larger digraph.
#[derive(Clone, Debug)]
pub struct Component {
    pub digraph: Digraph,
    /// `vertices[i]` is the original vertex relabelled as `i`
    pub vertices: Vec<usize>,
}

pub fn extract_component(g: &Digraph, seed: usize) -> Component {
    let dist = g.distances_from(seed);
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| dist[v] != usize::MAX).collect();
    Component { digraph: g.induced(&vertices), vertices }
}

/// `g1 # g2`: the component of `SBP(g1, g2)` containing the white vertex `(0,0,0)`.
#[derive(Clone, Debug)]
pub struct HashProduct {
    /// the component as an orientation, before taking the underlying graph
    pub oriented: Component,
    /// underlying graph of the component
    pub graph: Digraph,
    pub component_count: usize,
    /// set when the product is disconnected and the caller has not vouched that
    /// all components are isomorphic
    pub warning: bool,
}

/// `factors_dart_transitive` is the caller's knowledge about the factors; when the
/// SBP is disconnected and this is false the returned value carries a warning.
pub fn hash_product_with(g1: &Digraph, g2: &Digraph, factors_dart_transitive: bool) -> HashProduct {
    let whole = sbp(g1, g2);
    let component_count = whole.connected_components().len();
    let oriented = extract_component(&whole, 0);
    let graph = oriented.digraph.underlying();
    HashProduct { oriented, graph, component_count, warning: component_count > 1 && !factors_dart_transitive }
}

pub fn hash_product(g1: &Digraph, g2: &Digraph) -> Digraph {
    hash_product_with(g1, g2, true).graph
}

/// `gcd(AP(g1), AP(g2))`, valid for connected orientations without sources and sinks.
pub fn predicted_component_count(g1: &Digraph, g2: &Digraph) -> Result<usize> {
    for (name, g) in [("first", g1), ("second", g2)] {
        if !g.is_connected() {
            return Err(Error::HypothesesNotMet(format!("{name} factor is disconnected")));
        }
        if !g.is_orientation() {
            return Err(Error::HypothesesNotMet(format!("{name} factor is not an orientation")));
        }
        if g.has_sources_or_sinks() {
            return Err(Error::HypothesesNotMet(format!("{name} factor has sources or sinks")));
        }
    }
    Ok(num_integer::gcd(alter_perimeter(g1)?, alter_perimeter(g2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{dcyc, directed_cycle};

    fn k4() -> Digraph {
        let d: Vec<(usize, usize)> =
            (0..4).flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        Digraph::new(4, d).unwrap()
    }

    fn k33() -> Digraph {
        let d: Vec<(usize, usize)> =
            (0..3).flat_map(|a| (3..6).flat_map(move |b| [(a, b), (b, a)])).collect();
        Digraph::new(6, d).unwrap()
    }

    #[test]
    fn sbp_vertex_encoding_roundtrips() {
        for idx in 0..2 * 5 * 7 {
            let v = SbpVertex::decode(idx, 7);
            assert!(v.a < 5 && v.x < 7 && v.colour < 2);
            assert_eq!(v.encode(7), idx);
        }
    }

    #[test]
    fn box_of_triangles() {
        let c3 = dcyc(3).unwrap();
        let b = box_product(&c3, &c3);
        assert_eq!(b.n(), 9);
        assert!(b.is_k_valent(4));
        let single = Digraph::empty(1);
        assert_eq!(box_product(&c3, &single), c3);
    }

    #[test]
    fn sbp_of_triangles() {
        let c3 = dcyc(3).unwrap();
        let s = sbp(&c3, &c3);
        assert_eq!(s.n(), 18);
        assert_eq!(s.dart_count(), 36);
        assert!(s.is_orientation());
        assert!(s.is_k_valent(2));
        for d in s.darts() {
            let (t, h) = (SbpVertex::decode(d.tail, 3), SbpVertex::decode(d.head, 3));
            match dart_kind(*d) {
                DartKind::Horizontal => assert!(t.colour == 0 && h.colour == 1 && t.x == h.x),
                DartKind::Vertical => assert!(t.colour == 1 && h.colour == 0 && t.a == h.a),
            }
        }
    }

    #[test]
    fn sbp_valences_follow_factors() {
        // 0 -> 1, 0 -> 2, 1 -> 2 : mixed valences
        let g1 = Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let g2 = directed_cycle(4).unwrap();
        let s = sbp(&g1, &g2);
        for idx in 0..s.n() {
            let v = SbpVertex::decode(idx, g2.n());
            let (o, i) = s.valences(idx);
            if v.colour == 0 {
                assert_eq!((o, i), (g1.valences(v.a).0, g2.valences(v.x).1));
            } else {
                assert_eq!((o, i), (g2.valences(v.x).0, g1.valences(v.a).1));
            }
        }
    }

    #[test]
    fn cdc_examples() {
        let c3 = dcyc(3).unwrap();
        let c = cdc(&c3);
        assert_eq!((c.n(), c.dart_count()), (6, 12));
        assert!(c.is_connected());
        assert!(c.is_k_valent(2) && c.is_graph() && c.girth() == Some(6));
        let c4 = cdc(&dcyc(4).unwrap());
        assert_eq!(c4.connected_components().len(), 2);
    }

    #[test]
    fn dart_digraph_examples() {
        let d = dart_digraph(&k33());
        assert_eq!((d.n(), d.dart_count()), (18, 36));
        assert!(d.is_k_valent(2));
        for n in 3..8 {
            let d = dart_digraph(&dcyc(n).unwrap());
            assert_eq!((d.n(), d.dart_count()), (2 * n, 2 * n));
        }
    }

    #[test]
    fn a2d_and_a2g_of_k33() {
        let k = k33();
        let d = a2d(&k).unwrap();
        assert_eq!(d.n(), 324);
        assert!(d.is_k_valent(2));
        assert!(d.is_orientation());
        let g = a2g(&k).unwrap();
        assert!(g.is_k_valent(4));
        assert_eq!(g, d.underlying());
        assert!(matches!(a2d(&directed_cycle(3).unwrap()), Err(Error::NotAGraph)));
    }

    #[test]
    fn phi_is_an_isomorphism() {
        let map = phi_iso(&k4()).unwrap();
        assert_eq!(map.len(), 288);
        // white fibre goes to white vertices
        assert!((0..288).step_by(2).all(|i| map[i] % 2 == 0));
        assert_eq!(phi_iso(&k33()).unwrap().len(), 648);
        assert!(phi_iso(&dcyc(4).unwrap()).is_err());
    }

    #[test]
    fn component_extraction() {
        let two = dcyc(3).unwrap().disjoint_union(&dcyc(4).unwrap());
        let c = extract_component(&two, 4);
        assert_eq!(c.vertices, vec![3, 4, 5, 6]);
        assert_eq!(c.digraph, dcyc(4).unwrap());
    }

    #[test]
    fn predicted_count_checks_hypotheses() {
        let c3 = dcyc(3).unwrap();
        let t = directed_cycle(3).unwrap();
        assert!(matches!(predicted_component_count(&c3, &t), Err(Error::HypothesesNotMet(_))));
        assert_eq!(predicted_component_count(&t, &t).unwrap(), 3);
        let t6 = directed_cycle(6).unwrap();
        assert_eq!(predicted_component_count(&t, &t6).unwrap(), 3);
        assert_eq!(sbp(&t, &t6).connected_components().len(), 3);
    }
}
