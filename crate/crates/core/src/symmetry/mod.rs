//! Automorphisms, isomorphisms and reversals of digraphs, plus the explicit
//! symmetries of separated box products and of A²D constructions.

mod a2g;
mod expected;
pub mod search;

pub use a2g::{build_a2g_groups, build_a2g_groups_with_alpha, preserves_fibres, unexpected_symmetry, A2gGroups};
pub use expected::{
    build_expected_group, lift_pair, mu_reversal, mu_reversal_via, sigma_reversal, tau_swap,
    tau_swap_via, ExpectedGroup, ExpectedOrbits,
};
pub use search::CanonicalForm;

use crate::digraph::Digraph;
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::products::is_isomorphism;
use search::{search, SearchOutcome};

/// Depth of the search tree can reach `n`; large inputs get a roomier stack.
fn run_search(g: &Digraph, colours: Option<&[u64]>, canonical: bool) -> SearchOutcome {
    if g.n() < 2048 {
        return search(g, colours, canonical);
    }
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || search(g, colours, canonical))
            .expect("spawn search thread")
            .join()
            .expect("search thread")
    })
}

#[derive(Clone, Debug)]
pub struct AutResult {
    pub group: PermGroup,
    pub order: u128,
}

fn aut_from(g: &Digraph, out: SearchOutcome) -> AutResult {
    debug_assert!(out.generators.iter().all(|p| p.is_automorphism_of(g)));
    let group = PermGroup::from_strong_generators(g.n(), &out.base, out.generators);
    debug_assert_eq!(group.order(), out.order);
    AutResult { order: out.order, group }
}

pub fn automorphism_group(g: &Digraph) -> AutResult {
    aut_from(g, run_search(g, None, false))
}

/// Automorphisms preserving a vertex colouring.
pub fn coloured_automorphism_group(g: &Digraph, colours: &[u64]) -> AutResult {
    assert_eq!(colours.len(), g.n());
    aut_from(g, run_search(g, Some(colours), false))
}

/// Second route to `Aut(g)`: every dart `(u, v)` is replaced by a path
/// `u - t - h - v` with `t`, `h` coloured apart, and the automorphisms of the
/// resulting undirected coloured graph are restricted to the original vertices.
pub fn automorphism_group_via_reduction(g: &Digraph) -> AutResult {
    let (n, m) = (g.n(), g.dart_count());
    let mut edges = Vec::with_capacity(6 * m);
    for (k, d) in g.darts().iter().enumerate() {
        let (t, h) = (n + 2 * k, n + 2 * k + 1);
        for (a, b) in [(d.tail, t), (t, h), (h, d.head)] {
            edges.push((a, b));
            edges.push((b, a));
        }
    }
    let reduced = Digraph::new(n + 2 * m, edges).expect("subdivision of a loopless digraph");
    let colours: Vec<u64> = (0..n + 2 * m).map(|v| if v < n { 0 } else { 1 + ((v - n) % 2) as u64 }).collect();
    let out = run_search(&reduced, Some(&colours), false);
    // dart vertices follow their endpoints, so restriction is faithful
    let gens: Vec<Perm> = out
        .generators
        .iter()
        .map(|p| Perm::from_images_unchecked(p.images()[..n].to_vec()))
        .filter(|p| !p.is_identity())
        .collect();
    debug_assert!(gens.iter().all(|p| p.is_automorphism_of(g)));
    AutResult { group: PermGroup::new(n, gens).expect("restricted generators"), order: out.order }
}

pub fn canonical_form(g: &Digraph) -> CanonicalForm {
    run_search(g, None, true).canonical_form.expect("canonical search")
}

/// Canonical position of every vertex together with the canonical form.
pub fn canonical_labelling(g: &Digraph) -> (Vec<usize>, CanonicalForm) {
    let out = run_search(g, None, true);
    (out.canonical_position.unwrap(), out.canonical_form.unwrap())
}

/// A dart-preserving bijection `V(g1) -> V(g2)`, verified before it is returned.
pub fn are_isomorphic(g1: &Digraph, g2: &Digraph) -> Option<Vec<usize>> {
    if g1.n() != g2.n() || g1.dart_count() != g2.dart_count() {
        return None;
    }
    let mut d1: Vec<(usize, usize)> = (0..g1.n()).map(|v| g1.valences(v)).collect();
    let mut d2: Vec<(usize, usize)> = (0..g2.n()).map(|v| g2.valences(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return None;
    }
    let (pos1, f1) = canonical_labelling(g1);
    let (pos2, f2) = canonical_labelling(g2);
    if f1 != f2 {
        return None;
    }
    let mut at2 = vec![0; g2.n()];
    for (v, &p) in pos2.iter().enumerate() {
        at2[p] = v;
    }
    let map: Vec<usize> = pos1.iter().map(|&p| at2[p]).collect();
    assert!(is_isomorphism(g1, g2, &map), "canonical forms agree but the induced map is not an isomorphism");
    Some(map)
}

#[derive(Clone, Debug)]
pub struct ReversalResult {
    pub exists: bool,
    pub witness: Option<Perm>,
}

pub fn find_reversal(g: &Digraph) -> ReversalResult {
    if g.is_graph() {
        return ReversalResult { exists: true, witness: Some(Perm::identity(g.n())) };
    }
    match are_isomorphic(g, &g.reverse()) {
        Some(map) => {
            let w = Perm::from_images_unchecked(map);
            debug_assert!(w.is_reversal_of(g));
            ReversalResult { exists: true, witness: Some(w) }
        }
        None => ReversalResult { exists: false, witness: None },
    }
}

/// Brute-force automorphism enumeration, for cross-checks on small inputs.
pub fn brute_force_automorphisms(g: &Digraph) -> Vec<Perm> {
    fn extend(g: &Digraph, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        let k = map.len();
        if k == g.n() {
            out.push(Perm::from_images_unchecked(map.clone()));
            return;
        }
        for c in 0..g.n() {
            if used[c] {
                continue;
            }
            // darts between k and already-mapped vertices must match
            let ok = (0..k).all(|j| {
                g.has_dart(k, j) == g.has_dart(c, map[j]) && g.has_dart(j, k) == g.has_dart(map[j], c)
            });
            if ok {
                used[c] = true;
                map.push(c);
                extend(g, map, used, out);
                map.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()], &mut out);
    out
}
