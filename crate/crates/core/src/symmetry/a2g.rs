//! Dart-transitive groups of `A²D(Λ)` and `A²G(Λ)` for bipartite cubic `Λ`.
//!
//! Groups are first built on `CDC(A²D(Λ))`, vertex `((x, y), i)` at index
//! `(x * m + y) * 2 + i`, then transported to `A²D(Λ)` through the component
//! `Ω` holding the blue vertices of fibre 0 and the red vertices of fibre 1.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::products::{a2d, cdc, extract_component};

#[derive(Clone, Debug)]
pub struct A2gGroups {
    /// dart-transitive on `A²D(Λ)`
    pub a: PermGroup,
    /// dart-transitive on `A²G(Λ)`
    pub b: PermGroup,
    /// `<H x H, (α, α)>`, the colour-preserving part of `A`
    pub a0: PermGroup,
    pub h_order: u128,
    /// first generator of `G` swapping the colour classes of `Λ`
    pub alpha: Perm,
    /// `true` for blue vertices of `A²D(Λ)`
    pub blue: Vec<bool>,
    /// vertices of `Ω` in `CDC(A²D(Λ))`
    pub omega: Vec<usize>,
}

/// Action of a vertex permutation of `Λ` on its darts.
fn dart_perm(lambda: &Digraph, g: &Perm) -> Perm {
    let images = lambda.darts().iter().map(|d| lambda.dart_index(g.image(d.tail), g.image(d.head)).unwrap()).collect();
    Perm::from_images_unchecked(images)
}

fn pair_action(m: usize, g1: &Perm, g2: &Perm) -> Perm {
    let images = (0..2 * m * m)
        .map(|idx| {
            let (xy, i) = (idx / 2, idx % 2);
            let (x, y) = (xy / m, xy % m);
            let (x2, y2) = if i == 0 { (g1.image(x), g2.image(y)) } else { (g2.image(x), g1.image(y)) };
            (x2 * m + y2) * 2 + i
        })
        .collect();
    Perm::from_images_unchecked(images)
}

fn cdc_index(m: usize, x: usize, y: usize, i: usize) -> usize {
    (x * m + y) * 2 + i
}

/// Checks that `gg` acts transitively on the 2-darts of `lambda`.
fn two_dart_transitive(lambda: &Digraph, gg: &PermGroup) -> bool {
    let two = lambda.two_darts();
    if two.is_empty() {
        return false;
    }
    let index: std::collections::HashMap<(usize, usize, usize), usize> =
        two.iter().enumerate().map(|(k, (x, w))| ((x.tail, x.head, w.head), k)).collect();
    let mut seen = vec![false; two.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(k) = stack.pop() {
        let (x, w) = two[k];
        for g in gg.generators() {
            let key = (g.image(x.tail), g.image(x.head), g.image(w.head));
            let j = index[&key];
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == two.len()
}

/// `Λ` connected cubic bipartite, `gg ≤ Aut(Λ)` transitive on 2-darts.
fn check_a2g_input(lambda: &Digraph, gg: &PermGroup) -> Result<Vec<u8>> {
    if !lambda.is_graph() || !lambda.is_connected() || !lambda.is_k_valent(3) {
        return Err(Error::Precondition("expected a connected cubic graph".into()));
    }
    let colour = lambda.bipartition().ok_or_else(|| Error::Precondition("graph is not bipartite".into()))?;
    gg.check_automorphisms_of(lambda)?;
    if !two_dart_transitive(lambda, gg) {
        return Err(Error::Precondition("group is not transitive on 2-darts".into()));
    }
    Ok(colour)
}

pub fn build_a2g_groups(lambda: &Digraph, gg: &PermGroup) -> Result<A2gGroups> {
    let colour = check_a2g_input(lambda, gg)?;
    let alpha = gg
        .generators()
        .iter()
        .find(|g| colour[g.image(0)] != colour[0])
        .cloned()
        .ok_or_else(|| Error::Precondition("group preserves the colour classes".into()))?;
    build_with_alpha(lambda, gg, &colour, alpha)
}

/// As [`build_a2g_groups`] with a chosen `alpha`, which must lie in `G` and swap
/// the colour classes.
pub fn build_a2g_groups_with_alpha(lambda: &Digraph, gg: &PermGroup, alpha: &Perm) -> Result<A2gGroups> {
    let colour = check_a2g_input(lambda, gg)?;
    if !gg.contains(alpha)? || colour[alpha.image(0)] == colour[0] {
        return Err(Error::Precondition("alpha must be an element of G swapping the colour classes".into()));
    }
    build_with_alpha(lambda, gg, &colour, alpha.clone())
}

fn build_with_alpha(lambda: &Digraph, gg: &PermGroup, colour: &[u8], alpha: Perm) -> Result<A2gGroups> {
    let m = lambda.dart_count();
    let block_of: Vec<usize> = colour.iter().map(|&c| c as usize).collect();
    let h = gg.block_stabiliser(&block_of, 0)?;

    let one = Perm::identity(m);
    let alpha_d = dart_perm(lambda, &alpha);
    let tau = Perm::from_images_unchecked((0..2 * m * m).map(|idx| idx ^ 1).collect());
    let inv_dart: Vec<usize> =
        lambda.darts().iter().map(|d| lambda.dart_index(d.head, d.tail).unwrap()).collect();
    let sigma = Perm::from_images_unchecked(
        (0..2 * m * m)
            .map(|idx| {
                let (xy, i) = (idx / 2, idx % 2);
                let (x, y) = (xy / m, xy % m);
                cdc_index(m, inv_dart[y], inv_dart[x], 1 - i)
            })
            .collect(),
    );
    let mut a_gens = Vec::new();
    for p in h.generators() {
        let pd = dart_perm(lambda, p);
        a_gens.push(pair_action(m, &pd, &one));
        a_gens.push(pair_action(m, &one, &pd));
    }
    a_gens.push(pair_action(m, &alpha_d, &alpha_d));
    a_gens.push(pair_action(m, &one, &alpha_d).then(&tau));
    let tau_sigma = tau.then(&sigma);

    // dart colour is the colour of its tail
    let dart_colour: Vec<u8> = lambda.darts().iter().map(|d| colour[d.tail]).collect();
    let blue: Vec<bool> = (0..m * m).map(|v| dart_colour[v / m] == dart_colour[v % m]).collect();
    let psi: Vec<usize> = (0..m * m).map(|v| 2 * v + usize::from(!blue[v])).collect();
    let mut psi_inv = vec![usize::MAX; 2 * m * m];
    for (v, &w) in psi.iter().enumerate() {
        psi_inv[w] = v;
    }
    let a2d_l = a2d(lambda)?;
    let double = cdc(&a2d_l);
    let seed = psi[blue.iter().position(|&b| b).unwrap()];
    let omega = extract_component(&double, seed).vertices;
    let mut expected_omega = psi.clone();
    expected_omega.sort_unstable();
    if omega != expected_omega {
        return Err(Error::Internal("blue/red component does not match".into()));
    }
    let transport = |p: &Perm| -> Result<Perm> {
        let images: Option<Vec<usize>> = (0..m * m)
            .map(|v| Some(psi_inv[p.image(psi[v])]).filter(|&w| w != usize::MAX))
            .collect();
        images.map(Perm::from_images_unchecked).ok_or_else(|| Error::Internal("generator leaves the component".into()))
    };
    let a_local = a_gens.iter().map(transport).collect::<Result<Vec<_>>>()?;
    let mut b_local = a_local.clone();
    b_local.push(transport(&tau_sigma)?);
    for p in &a_local {
        if !p.is_automorphism_of(&a2d_l) {
            return Err(Error::Internal("generator of A is not an automorphism".into()));
        }
    }
    let a2g_l = a2d_l.underlying();
    for p in &b_local {
        if !p.is_automorphism_of(&a2g_l) {
            return Err(Error::Internal("generator of B is not an automorphism".into()));
        }
    }
    let a0 = PermGroup::new(m * m, a_local[..a_local.len() - 1].to_vec())?;
    Ok(A2gGroups {
        a: PermGroup::new(m * m, a_local)?,
        a0,
        b: PermGroup::new(m * m, b_local)?,
        h_order: h.order(),
        alpha,
        blue,
        omega,
    })
}

/// `((x,y),0) -> ((x^g,y),0)`, `((x,y),1) -> ((x,y^g),1)` on `CDC(A²D(Λ))`,
/// checked to be an automorphism.
pub fn unexpected_symmetry(lambda: &Digraph, g: &Perm) -> Result<Perm> {
    if !g.is_automorphism_of(lambda) {
        return Err(Error::NotAutomorphism("map is not an automorphism of the base graph".into()));
    }
    let m = lambda.dart_count();
    let gd = dart_perm(lambda, g);
    let images = (0..2 * m * m)
        .map(|idx| {
            let (xy, i) = (idx / 2, idx % 2);
            let (x, y) = (xy / m, xy % m);
            if i == 0 {
                cdc_index(m, gd.image(x), y, 0)
            } else {
                cdc_index(m, x, gd.image(y), 1)
            }
        })
        .collect();
    let p = Perm::from_images_unchecked(images);
    if !p.is_automorphism_of(&cdc(&a2d(lambda)?)) {
        return Err(Error::Internal("unexpected symmetry failed verification".into()));
    }
    Ok(p)
}

/// True iff `p` maps every fibre `{(v,0), (v,1)}` of a double cover onto a fibre.
pub fn preserves_fibres(p: &Perm) -> bool {
    (0..p.degree() / 2).all(|v| p.image(2 * v) / 2 == p.image(2 * v + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Action;
    use crate::products::a2g;
    use crate::symmetry::automorphism_group;

    fn k33() -> Digraph {
        Digraph::new(6, (0..3).flat_map(|a| (3..6).flat_map(move |b| [(a, b), (b, a)]))).unwrap()
    }

    #[test]
    fn k33_groups() {
        let l = k33();
        let g = automorphism_group(&l).group;
        let r = build_a2g_groups(&l, &g).unwrap();
        assert_eq!(r.h_order, 36);
        assert_eq!(r.a.order(), 72 * 72);
        assert_eq!(r.b.order(), 2 * 72 * 72);
        assert!(r.a.is_transitive_on(&a2d(&l).unwrap(), Action::Darts).unwrap());
        assert!(r.b.is_transitive_on(&a2g(&l).unwrap(), Action::Darts).unwrap());
        // (1, α)τ swaps blue and red; without it they are the two orbits
        assert_eq!(r.a.orbits().len(), 1);
        assert_eq!(r.a0.orbits().len(), 2);
        assert_eq!(r.a0.orbit_of(0).iter().all(|&v| r.blue[v]), r.blue[0]);
    }

    #[test]
    fn rejects_non_bipartite() {
        let g = automorphism_group(&k4()).group;
        assert!(matches!(build_a2g_groups(&k4(), &g), Err(Error::Precondition(_))));
    }

    fn k4() -> Digraph {
        Digraph::new(4, (0..4).flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b)))).unwrap()
    }

    #[test]
    fn unexpected_symmetries_move_fibres() {
        for l in [k33(), k4()] {
            for g in automorphism_group(&l).group.generators() {
                let p = unexpected_symmetry(&l, g).unwrap();
                assert!(!preserves_fibres(&p));
            }
        }
    }

    #[test]
    fn groups_do_not_depend_on_alpha() {
        let l = k33();
        let g = automorphism_group(&l).group;
        let r = build_a2g_groups(&l, &g).unwrap();
        // another colour-swapping element: alpha times a colour-preserving generator
        let colour = l.bipartition().unwrap();
        let h = g.generators().iter().find(|p| colour[p.image(0)] == colour[0] && !p.is_identity()).unwrap();
        let other = r.alpha.then(h);
        assert_ne!(other, r.alpha);
        let s = build_a2g_groups_with_alpha(&l, &g, &other).unwrap();
        assert_eq!(s.a.order(), r.a.order());
        assert!(s.a.generators().iter().all(|p| r.a.contains(p).unwrap()));
        assert!(s.b.generators().iter().all(|p| r.b.contains(p).unwrap()));
        let fixed = Perm::identity(6);
        assert!(build_a2g_groups_with_alpha(&l, &g, &fixed).is_err());
    }

    #[test]
    fn a2d_of_k4_is_not_dart_transitive() {
        let d = a2d(&k4()).unwrap();
        assert!(!automorphism_group(&d).group.is_transitive_on(&d, Action::Darts).unwrap());
    }
}
