//! Symmetries of `SBP(g1, g2)` induced by symmetries of the factors.
//!
//! Every map is checked against the product's dart set before it is returned.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::group::{Action, PermGroup};
use crate::perm::Perm;
use crate::products::{extract_component, sbp, Component, SbpVertex};

use super::{are_isomorphic, find_reversal};

fn sbp_map(n1: usize, n2: usize, f: impl Fn(SbpVertex) -> SbpVertex) -> Perm {
    let images = (0..2 * n1 * n2).map(|idx| f(SbpVertex::decode(idx, n2)).encode(n2)).collect();
    Perm::from_images_unchecked(images)
}

fn lift(n1: usize, n2: usize, p1: &Perm, p2: &Perm) -> Perm {
    sbp_map(n1, n2, |v| SbpVertex { a: p1.image(v.a), x: p2.image(v.x), colour: v.colour })
}

fn require_automorphism(p: &Perm, g: &Digraph, what: &str) -> Result<()> {
    if p.is_automorphism_of(g) {
        Ok(())
    } else {
        Err(Error::NotAutomorphism(what.into()))
    }
}

fn require_reversal(p: &Perm, g: &Digraph, what: &str) -> Result<()> {
    if p.is_reversal_of(g) {
        Ok(())
    } else {
        Err(Error::NotReversal(what.into()))
    }
}

/// `(a, x, i) -> (a^p1, x^p2, i)`.
pub fn lift_pair(g1: &Digraph, g2: &Digraph, p1: &Perm, p2: &Perm) -> Result<Perm> {
    require_automorphism(p1, g1, "first factor map")?;
    require_automorphism(p2, g2, "second factor map")?;
    let p = lift(g1.n(), g2.n(), p1, p2);
    require_automorphism(&p, &sbp(g1, g2), "lifted pair").map_err(|_| Error::Internal("lift".into()))?;
    Ok(p)
}

/// `(a, x, i) -> (a^r1, x^r2, 1 - i)`, a reversal of the product.
pub fn sigma_reversal(g1: &Digraph, g2: &Digraph, r1: &Perm, r2: &Perm) -> Result<Perm> {
    require_reversal(r1, g1, "first factor map")?;
    require_reversal(r2, g2, "second factor map")?;
    let p = sbp_map(g1.n(), g2.n(), |v| SbpVertex { a: r1.image(v.a), x: r2.image(v.x), colour: 1 - v.colour });
    require_reversal(&p, &sbp(g1, g2), "sigma").map_err(|_| Error::Internal("sigma".into()))?;
    Ok(p)
}

fn tau_map(n: usize, psi: &Perm) -> Perm {
    let inv = psi.inverse();
    sbp_map(n, n, |v| SbpVertex { a: inv.image(v.x), x: psi.image(v.a), colour: 1 - v.colour })
}

fn mu_map(n: usize, psi: &Perm) -> Perm {
    let inv = psi.inverse();
    sbp_map(n, n, |v| SbpVertex { a: inv.image(v.x), x: psi.image(v.a), colour: v.colour })
}

/// `(a, x, i) -> (x, a, 1 - i)` on `SBP(delta, delta)`.
pub fn tau_swap(delta: &Digraph) -> Result<Perm> {
    tau_swap_via(delta, delta, &Perm::identity(delta.n()))
}

/// `(a, x, i) -> (x^(psi^-1), a^psi, 1 - i)` on `SBP(g1, g2)` for an isomorphism `psi: g1 -> g2`.
pub fn tau_swap_via(g1: &Digraph, g2: &Digraph, psi: &Perm) -> Result<Perm> {
    if psi.degree() != g1.n() || g1.n() != g2.n() || !crate::products::is_isomorphism(g1, g2, psi.images()) {
        return Err(Error::Precondition("psi is not an isomorphism between the factors".into()));
    }
    let p = tau_map(g1.n(), psi);
    require_automorphism(&p, &sbp(g1, g2), "tau").map_err(|_| Error::Internal("tau".into()))?;
    Ok(p)
}

/// `(a, x, i) -> (x, a, i)`, a reversal of `SBP(delta, delta^-1)`.
pub fn mu_reversal(delta: &Digraph) -> Result<Perm> {
    mu_reversal_via(delta, &delta.reverse(), &Perm::identity(delta.n()))
}

/// `(a, x, i) -> (x^(psi^-1), a^psi, i)` on `SBP(g1, g2)` for an isomorphism `psi: g1 -> g2^-1`.
pub fn mu_reversal_via(g1: &Digraph, g2: &Digraph, psi: &Perm) -> Result<Perm> {
    if psi.degree() != g1.n() || g1.n() != g2.n() || !crate::products::is_isomorphism(g1, &g2.reverse(), psi.images()) {
        return Err(Error::Precondition("psi is not an isomorphism onto the reverse of the second factor".into()));
    }
    let p = mu_map(g1.n(), psi);
    require_reversal(&p, &sbp(g1, g2), "mu").map_err(|_| Error::Internal("mu".into()))?;
    Ok(p)
}

/// The group generated by the expected symmetries of `SBP(g1, g2)`.
#[derive(Clone, Debug)]
pub struct ExpectedGroup {
    pub product: Digraph,
    /// generators of the lifted `G1 x G2`
    pub lifts: Vec<Perm>,
    pub sigma: Option<Perm>,
    pub tau: Option<Perm>,
    pub mu: Option<Perm>,
    /// action on all product vertices, as automorphisms of the underlying graph
    pub full: PermGroup,
    /// the component containing the white vertex `(0, 0, 0)`
    pub component: Component,
    /// setwise stabiliser of the component, acting on it
    pub group: PermGroup,
}

/// `G1`, `G2` must act dart-transitively on `g1`, `g2`. Adds `sigma` when both
/// factors are reversible, `tau` when `g1 ≅ g2` and `mu` when `g1 ≅ g2^-1`.
pub fn build_expected_group(g1: &Digraph, g2: &Digraph, gg1: &PermGroup, gg2: &PermGroup) -> Result<ExpectedGroup> {
    for (name, g, gg) in [("first", g1, gg1), ("second", g2, gg2)] {
        if !gg.is_transitive_on(g, Action::Darts)? {
            return Err(Error::HypothesesNotMet(format!("{name} group is not dart-transitive")));
        }
    }
    let (n1, n2) = (g1.n(), g2.n());
    let product = sbp(g1, g2);
    let mut lifts = Vec::new();
    for p in gg1.generators() {
        lifts.push(lift(n1, n2, p, &Perm::identity(n2)));
    }
    for p in gg2.generators() {
        lifts.push(lift(n1, n2, &Perm::identity(n1), p));
    }
    for p in &lifts {
        require_automorphism(p, &product, "lifted generator").map_err(|_| Error::Internal("lift".into()))?;
    }
    let sigma = match (find_reversal(g1).witness, find_reversal(g2).witness) {
        (Some(r1), Some(r2)) => Some(sigma_reversal(g1, g2, &r1, &r2)?),
        _ => None,
    };
    let witness = |map: Vec<usize>| Perm::from_images_unchecked(map);
    let tau = if g1 == g2 {
        Some(tau_swap(g1)?)
    } else {
        are_isomorphic(g1, g2).map(|m| tau_swap_via(g1, g2, &witness(m))).transpose()?
    };
    let g2r = g2.reverse();
    let mu = if *g1 == g2r {
        Some(mu_reversal_via(g1, g2, &Perm::identity(n1))?)
    } else {
        are_isomorphic(g1, &g2r).map(|m| mu_reversal_via(g1, g2, &witness(m))).transpose()?
    };
    let mut gens = lifts.clone();
    gens.extend(sigma.iter().cloned());
    gens.extend(tau.iter().cloned());
    gens.extend(mu.iter().cloned());
    let full = PermGroup::new(product.n(), gens)?;
    let component = extract_component(&product, 0);
    let group = if component.vertices.len() == product.n() {
        full.clone()
    } else {
        let comps = product.connected_components();
        let mut block_of = vec![0; product.n()];
        for (b, comp) in comps.iter().enumerate() {
            for &v in comp {
                block_of[v] = b;
            }
        }
        full.block_stabiliser(&block_of, block_of[0])?.restrict(&component.vertices)?
    };
    Ok(ExpectedGroup { product, lifts, sigma, tau, mu, full, component, group })
}

/// Orbit data for an expected group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedOrbits {
    /// lifted `G1 x G2` on all product vertices
    pub lift_vertex_orbits: usize,
    /// lifted `G1 x G2` on the product's darts
    pub lift_dart_orbits: usize,
    /// automorphisms among the generators (lifts and `tau`) on the product's darts
    pub oriented_dart_orbits: usize,
    pub order: u128,
    /// the component group on the underlying component graph
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub dart_orbits: usize,
    /// stabiliser order of one dart per dart orbit
    pub dart_stabilisers: Vec<u128>,
}

impl ExpectedGroup {
    pub fn orbits(&self) -> Result<ExpectedOrbits> {
        let n = self.product.n();
        let lifted = PermGroup::new(n, self.lifts.clone())?;
        let oriented = lifted.with_generators(self.tau.iter().cloned())?;
        let ug = self.component.digraph.underlying();
        let dart_orbits = self.group.action_orbits(&ug, Action::Darts)?;
        let order = self.group.order();
        let dart_stabilisers = dart_orbits.iter().map(|o| order / o.len() as u128).collect();
        Ok(ExpectedOrbits {
            lift_vertex_orbits: lifted.orbits().len(),
            lift_dart_orbits: lifted.action_orbits(&self.product, Action::Darts)?.len(),
            oriented_dart_orbits: oriented.action_orbits(&self.product, Action::Darts)?.len(),
            order,
            vertex_orbits: self.group.orbits().len(),
            edge_orbits: self.group.action_orbits(&ug, Action::Edges)?.len(),
            dart_orbits: dart_orbits.len(),
            dart_stabilisers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{dcyc, directed_cycle};
    use crate::products::{dart_digraph, hash_product};
    use crate::symmetry::automorphism_group;

    #[test]
    fn lifting_identity_is_identity() {
        let c = dcyc(3).unwrap();
        let p = lift_pair(&c, &c, &Perm::identity(3), &Perm::identity(3)).unwrap();
        assert!(p.is_identity());
        let bad = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let c4 = dcyc(4).unwrap();
        assert!(matches!(lift_pair(&c4, &c4, &bad, &Perm::identity(4)), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn colour_swap_reverses_cycle_product() {
        let c = dcyc(3).unwrap();
        let s = sigma_reversal(&c, &c, &Perm::identity(3), &Perm::identity(3)).unwrap();
        assert!(s.is_reversal_of(&sbp(&c, &c)));
        assert!(s.then(&s).is_automorphism_of(&sbp(&c, &c)));
    }

    #[test]
    fn tau_and_mu_are_involutions() {
        let t = directed_cycle(4).unwrap();
        let tau = tau_swap(&t).unwrap();
        assert!(tau.then(&tau).is_identity());
        let mu = mu_reversal(&t).unwrap();
        assert!(mu.then(&mu).is_identity());
        assert!(mu.is_reversal_of(&sbp(&t, &t.reverse())));
    }

    #[test]
    fn expected_group_for_distinct_cycles_is_lr() {
        let (g1, g2) = (dcyc(3).unwrap(), dcyc(4).unwrap());
        let e = build_expected_group(&g1, &g2, &automorphism_group(&g1).group, &automorphism_group(&g2).group).unwrap();
        assert!(e.sigma.is_some() && e.tau.is_none() && e.mu.is_none());
        let o = e.orbits().unwrap();
        assert_eq!((o.lift_vertex_orbits, o.lift_dart_orbits), (2, 2));
        assert_eq!((o.vertex_orbits, o.edge_orbits, o.dart_orbits), (1, 2, 2));
        assert!(o.dart_stabilisers.iter().all(|&s| s > 1));
        assert_eq!(e.component.digraph.underlying(), hash_product(&g1, &g2));
    }

    #[test]
    fn wreath_order_with_sigma() {
        // dart digraph of K4 with itself: <G x G, tau, sigma> has order 4|G|^2
        let k4 = Digraph::new(4, (0..4).flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b)))).unwrap();
        let d = dart_digraph(&k4);
        let aut = automorphism_group(&d);
        let e = build_expected_group(&d, &d, &aut.group, &aut.group).unwrap();
        assert!(e.sigma.is_some() && e.tau.is_some() && e.mu.is_some());
        let core = PermGroup::new(e.product.n(), e.lifts.clone()).unwrap();
        assert_eq!(core.order(), aut.order * aut.order);
        let wreath = core.with_generators([e.tau.clone().unwrap()]).unwrap();
        assert_eq!(wreath.order(), 2 * aut.order * aut.order);
        let with_sigma = wreath.with_generators([e.sigma.clone().unwrap()]).unwrap();
        assert_eq!(with_sigma.order(), 4 * aut.order * aut.order);
    }
}
