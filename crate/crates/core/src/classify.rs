//! Symmetry types of tetravalent graphs and the type predicted for `g1 # g2`.

use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::group::{Action, PermGroup};
use crate::products::hash_product;
use crate::symmetry::{are_isomorphic, automorphism_group, coloured_automorphism_group, find_reversal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SymTag {
    DT,
    HT,
    SS,
    LR,
    Other,
}

impl std::fmt::Display for SymTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SymTag::DT => "DT",
            SymTag::HT => "HT",
            SymTag::SS => "SS",
            SymTag::LR => "LR",
            SymTag::Other => "Other",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryType {
    pub tag: SymTag,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub dart_orbits: usize,
    /// order of the stabiliser of vertex 0
    pub vs: u128,
    pub aut_order: u128,
    /// every dart orbit has a nontrivial stabiliser
    pub dart_stab_nontrivial: bool,
    /// for SS: the vertex orbits are the two bipartition classes
    pub orbits_are_halves: Option<bool>,
    /// vertex stabiliser acts on the neighbours of vertex 0 as an intransitive Klein 4-group;
    /// computed for graphs of moderate order only
    pub klein4_local: Option<bool>,
}

fn require_tetravalent_graph(g: &Digraph) -> Result<()> {
    if !g.is_graph() {
        return Err(Error::Precondition("input is not a graph".into()));
    }
    if !g.is_k_valent(4) {
        return Err(Error::Precondition("input is not tetravalent".into()));
    }
    Ok(())
}

struct OrbitEvidence {
    vertex_orbits: Vec<Vec<usize>>,
    edge_orbits: usize,
    dart_orbits: Vec<Vec<usize>>,
    order: u128,
}

fn evidence(g: &Digraph, group: &PermGroup) -> Result<OrbitEvidence> {
    Ok(OrbitEvidence {
        vertex_orbits: group.orbits(),
        edge_orbits: group.action_orbits(g, Action::Edges)?.len(),
        dart_orbits: group.action_orbits(g, Action::Darts)?,
        order: group.order(),
    })
}

fn lr_shape(e: &OrbitEvidence) -> bool {
    e.vertex_orbits.len() == 1
        && e.edge_orbits == 2
        && e.dart_orbits.len() == 2
        && e.dart_orbits.iter().all(|o| e.order / o.len() as u128 > 1)
}

/// `G ≤ Aut(g)` makes `g` a G-LR graph.
pub fn is_g_lr(g: &Digraph, group: &PermGroup) -> Result<bool> {
    require_tetravalent_graph(g)?;
    group.check_automorphisms_of(g)?;
    Ok(lr_shape(&evidence(g, group)?))
}

/// Local action of the stabiliser of vertex 0 on its four neighbours.
fn klein4_local(g: &Digraph) -> bool {
    let mut colours = vec![0u64; g.n()];
    colours[0] = 1;
    let stab = coloured_automorphism_group(g, &colours).group;
    let nbrs = g.out_neighbors(0).to_vec();
    let Ok(local) = stab.restrict(&nbrs) else { return false };
    local.order() == 4 && local.orbits().iter().all(|o| o.len() == 2)
}

/// Classification under the full automorphism group.
pub fn symmetry_type(g: &Digraph) -> Result<SymmetryType> {
    require_tetravalent_graph(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let aut = automorphism_group(g);
    let e = evidence(g, &aut.group)?;
    let vs = aut.order / aut.group.orbit_of(0).len() as u128;
    let dart_stab_nontrivial = e.dart_orbits.iter().all(|o| e.order / o.len() as u128 > 1);
    let tag = if e.dart_orbits.len() == 1 {
        SymTag::DT
    } else if e.edge_orbits == 1 && e.vertex_orbits.len() == 1 {
        SymTag::HT
    } else if e.edge_orbits == 1 && e.vertex_orbits.len() == 2 {
        SymTag::SS
    } else if lr_shape(&e) {
        SymTag::LR
    } else {
        SymTag::Other
    };
    let orbits_are_halves = (tag == SymTag::SS).then(|| {
        g.bipartition().is_some_and(|col| {
            e.vertex_orbits.iter().all(|o| o.iter().all(|&v| col[v] == col[o[0]]))
        })
    });
    let klein4_local = (tag == SymTag::LR && g.n() <= 4096).then(|| klein4_local(g));
    Ok(SymmetryType {
        tag,
        vertex_orbits: e.vertex_orbits.len(),
        edge_orbits: e.edge_orbits,
        dart_orbits: e.dart_orbits.len(),
        vs,
        aut_order: aut.order,
        dart_stab_nontrivial,
        orbits_are_halves,
        klein4_local,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpectedTag {
    LR,
    HT,
    SS,
    DT,
    NotCovered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedType {
    pub tag: ExpectedTag,
    /// clause 1..=4 that fired; `None` for `NotCovered`
    pub clause: Option<u8>,
    pub iso12: bool,
    pub iso12_inv: bool,
    pub reversible1: bool,
    pub reversible2: bool,
}

fn check_factor(g: &Digraph, name: &str) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::HypothesesNotMet(format!("{name} factor is disconnected")));
    }
    if !g.is_k_valent(2) {
        return Err(Error::HypothesesNotMet(format!("{name} factor is not 2-valent")));
    }
    if !automorphism_group(g).group.is_transitive_on(g, Action::Darts)? {
        return Err(Error::HypothesesNotMet(format!("{name} factor is not dart-transitive")));
    }
    Ok(())
}

pub fn expected_type(g1: &Digraph, g2: &Digraph) -> Result<ExpectedType> {
    check_factor(g1, "first")?;
    check_factor(g2, "second")?;
    let iso12 = are_isomorphic(g1, g2).is_some();
    let iso12_inv = are_isomorphic(g1, &g2.reverse()).is_some();
    let reversible1 = find_reversal(g1).exists;
    let reversible2 = find_reversal(g2).exists;
    let (tag, clause) = match (iso12, iso12_inv) {
        (false, false) if reversible1 && reversible2 => (ExpectedTag::LR, Some(1)),
        (true, false) => (ExpectedTag::HT, Some(2)),
        (false, true) => (ExpectedTag::SS, Some(3)),
        (true, true) => (ExpectedTag::DT, Some(4)),
        _ => (ExpectedTag::NotCovered, None),
    };
    Ok(ExpectedType { tag, clause, iso12, iso12_inv, reversible1, reversible2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub expected: ExpectedType,
    pub actual: SymmetryType,
    /// the containment rule for the expected tag holds
    pub consistent: bool,
    /// the actual type differs from the expected one
    pub unexpected: bool,
}

pub fn type_consistency(g1: &Digraph, g2: &Digraph) -> Result<ConsistencyReport> {
    let expected = expected_type(g1, g2)?;
    let actual = symmetry_type(&hash_product(g1, g2))?;
    Ok(consistency(expected, actual))
}

/// Applies the containment rules to an already classified product.
pub fn consistency(expected: ExpectedType, actual: SymmetryType) -> ConsistencyReport {
    let t = actual.tag;
    let (consistent, unexpected) = match expected.tag {
        ExpectedTag::LR => (matches!(t, SymTag::LR | SymTag::DT), t != SymTag::LR),
        ExpectedTag::DT => (t == SymTag::DT, t != SymTag::DT),
        ExpectedTag::HT => (actual.edge_orbits == 1, t != SymTag::HT),
        ExpectedTag::SS => (actual.edge_orbits == 1, t != SymTag::SS),
        ExpectedTag::NotCovered => (true, false),
    };
    ConsistencyReport { expected, actual, consistent, unexpected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{dcyc, directed_cycle};
    use crate::products::box_product;

    #[test]
    fn torus_grid_is_dt() {
        let t = box_product(&dcyc(5).unwrap(), &dcyc(5).unwrap());
        let s = symmetry_type(&t).unwrap();
        assert_eq!(s.tag, SymTag::DT);
        assert_eq!(s.vs, 8);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(symmetry_type(&dcyc(5).unwrap()).is_err());
        assert!(symmetry_type(&directed_cycle(5).unwrap()).is_err());
        let t = box_product(&dcyc(3).unwrap(), &dcyc(3).unwrap());
        assert!(matches!(
            is_g_lr(&t, &PermGroup::new(9, vec![crate::perm::Perm::from_cycles(9, &[&[0, 1]]).unwrap()]).unwrap()),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn expected_clauses() {
        let (c3, c4) = (dcyc(3).unwrap(), dcyc(4).unwrap());
        let e = expected_type(&c3, &c4).unwrap();
        assert_eq!((e.tag, e.clause), (ExpectedTag::LR, Some(1)));
        let e = expected_type(&c3, &c3).unwrap();
        assert_eq!((e.tag, e.clause), (ExpectedTag::DT, Some(4)));
        assert!(matches!(expected_type(&directed_cycle(3).unwrap(), &c3), Err(Error::HypothesesNotMet(_))));
    }

    #[test]
    fn cycle_products_are_consistent() {
        let (c3, c4) = (dcyc(3).unwrap(), dcyc(4).unwrap());
        let r = type_consistency(&c3, &c4).unwrap();
        assert!(r.consistent);
        let r = type_consistency(&c4, &c4).unwrap();
        assert_eq!(r.actual.tag, SymTag::DT);
        assert!(r.consistent && !r.unexpected);
    }
}
