//! Small 2-valent dart-transitive digraphs: exhaustive generation, ingestion
//! and name resolution.
//!
//! Generation builds every connected 2-in/2-out orientation on `n` vertices in
//! breadth-first labelling from vertex 0: vertices are completed in label
//! order, and a slot is filled either by a discovered vertex with spare
//! capacity or by the next unused label. Partial digraphs are pruned when two
//! vertices with complete neighbourhoods show different local signatures.
//! Leaves are kept when their automorphism group is transitive on darts, and
//! isomorphs are removed by canonical form.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::alter::alter_perimeter;
use crate::digraph::{dcyc, Digraph};
use crate::error::{Error, Result};
use crate::group::Action;
use crate::io::{parse_any, to_dg};
use crate::symmetry::{automorphism_group, canonical_form, CanonicalForm};

pub const DEFAULT_ORDER_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Generated,
    Ingested,
    /// `DCyc[n]`, built directly
    Builtin,
}

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub name: String,
    pub digraph: Digraph,
    pub provenance: Provenance,
    pub is_graph: bool,
    pub alter_perimeter: usize,
}

/// Outcome of validating a digraph as a census entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub connected: bool,
    pub two_valent: bool,
    pub dart_transitive: bool,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.connected && self.two_valent && self.dart_transitive
    }

    pub fn failures(&self) -> String {
        let mut v = Vec::new();
        if !self.connected {
            v.push("disconnected");
        }
        if !self.two_valent {
            v.push("not 2-valent");
        }
        if !self.dart_transitive {
            v.push("not dart-transitive");
        }
        v.join(", ")
    }
}

pub fn validate(g: &Digraph) -> Validation {
    let connected = g.n() > 0 && g.is_connected();
    let two_valent = g.is_k_valent(2);
    let dart_transitive = g.dart_count() > 0
        && automorphism_group(g).group.is_transitive_on(g, Action::Darts).unwrap_or(false);
    Validation { connected, two_valent, dart_transitive }
}

/// Reference numbering by `(order, alter-perimeter)`.
const REFERENCE: &[(usize, usize, usize)] = &[
    (6, 3, 1),
    (8, 2, 1),
    (8, 4, 2),
    (9, 3, 1),
    (10, 2, 1),
    (10, 5, 2),
    (12, 1, 1),
    (12, 4, 2),
    (12, 2, 3),
    (12, 3, 4),
    (12, 6, 5),
];

fn reference_index(order: usize, ap: usize) -> Option<usize> {
    REFERENCE.iter().find(|&&(n, a, _)| n == order && a == ap).map(|&(_, _, i)| i)
}

struct Builder {
    n: usize,
    adj: Vec<Vec<bool>>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    next: usize,
    reference_sig: Option<[usize; 8]>,
    leaves: Vec<Digraph>,
}

impl Builder {
    fn add(&mut self, u: usize, v: usize) {
        self.adj[u][v] = true;
        self.out[u].push(v);
        self.inn[v].push(u);
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u][v] = false;
        self.out[u].pop();
        self.inn[v].pop();
    }

    fn free_pair(&self, u: usize, v: usize) -> bool {
        u != v && !self.adj[u][v] && !self.adj[v][u]
    }

    /// Local signature of `u`; valid once `u` and its neighbours are complete.
    fn signature(&self, u: usize) -> [usize; 8] {
        let (o, i) = (&self.out[u], &self.inn[u]);
        let count = |a: &[usize], b: &[usize]| a.iter().map(|&x| b.iter().filter(|&&y| self.adj[x][y]).count()).sum::<usize>();
        let reach = |from: &[usize], forward: bool| {
            let mut s: Vec<usize> = from
                .iter()
                .flat_map(|&x| if forward { self.out[x].clone() } else { self.inn[x].clone() })
                .collect();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        [count(o, o), count(i, i), count(o, i), count(i, o), reach(o, true), reach(i, false), reach(i, true), reach(o, false)]
    }

    fn complete(&self, u: usize) -> bool {
        self.out[u].len() == 2 && self.inn[u].len() == 2
    }

    fn signatures_agree(&mut self, upto: usize) -> bool {
        for u in 0..=upto {
            let nb = self.out[u].iter().chain(&self.inn[u]);
            if !nb.clone().all(|&w| w <= upto) {
                continue;
            }
            let s = self.signature(u);
            match self.reference_sig {
                None => self.reference_sig = Some(s),
                Some(r) if r != s => return false,
                _ => {}
            }
        }
        true
    }

    fn candidates(&self, v: usize, outgoing: bool) -> Vec<usize> {
        (v + 1..self.next)
            .filter(|&w| {
                let cap = if outgoing { self.inn[w].len() } else { self.out[w].len() };
                cap < 2 && self.free_pair(v, w)
            })
            .collect()
    }

    fn vertex(&mut self, v: usize) {
        if v == self.n {
            let darts: Vec<(usize, usize)> =
                (0..self.n).flat_map(|u| self.out[u].iter().map(move |&w| (u, w))).collect();
            self.leaves.push(Digraph::new(self.n, darts).expect("builder keeps darts valid"));
            return;
        }
        if v >= self.next {
            return;
        }
        self.fill(v, true);
    }

    /// Fills the remaining out-slots (then in-slots) of `v` with a set of
    /// discovered vertices plus fresh labels.
    fn fill(&mut self, v: usize, outgoing: bool) {
        let have = if outgoing { self.out[v].len() } else { self.inn[v].len() };
        let r = 2 - have;
        let cands = self.candidates(v, outgoing);
        let mut chosen: Vec<usize> = Vec::with_capacity(2);
        self.choose(v, outgoing, r, &cands, 0, &mut chosen);
    }

    fn choose(&mut self, v: usize, outgoing: bool, r: usize, cands: &[usize], from: usize, chosen: &mut Vec<usize>) {
        let fresh = r - chosen.len();
        if self.next + fresh <= self.n {
            let first = self.next;
            for k in 0..fresh {
                chosen.push(first + k);
            }
            self.next += fresh;
            for &w in chosen.iter() {
                if outgoing {
                    self.add(v, w)
                } else {
                    self.add(w, v)
                }
            }
            self.stage_done(v, outgoing);
            for &w in chosen.iter().rev() {
                if outgoing {
                    self.remove(v, w)
                } else {
                    self.remove(w, v)
                }
            }
            self.next -= fresh;
            chosen.truncate(chosen.len() - fresh);
        }
        if chosen.len() == r {
            return;
        }
        for k in from..cands.len() {
            chosen.push(cands[k]);
            self.choose(v, outgoing, r, cands, k + 1, chosen);
            chosen.pop();
        }
    }

    fn stage_done(&mut self, v: usize, outgoing: bool) {
        if outgoing {
            self.fill(v, false);
            return;
        }
        debug_assert!(self.complete(v));
        let saved = self.reference_sig;
        if self.signatures_agree(v) {
            self.vertex(v + 1);
        }
        self.reference_sig = saved;
    }
}

/// All 2-valent dart-transitive orientations of order `n` up to isomorphism,
/// in canonical-form order, named by the reference numbering where it applies.
pub fn generate_atd(n: usize) -> Result<Vec<CensusEntry>> {
    generate_atd_bounded(n, DEFAULT_ORDER_BOUND)
}

pub fn generate_atd_bounded(n: usize, bound: usize) -> Result<Vec<CensusEntry>> {
    if n > bound {
        return Err(Error::InvalidOrder(n));
    }
    if n < 5 {
        // four distinct neighbours are needed
        return Ok(Vec::new());
    }
    let mut b = Builder {
        n,
        adj: vec![vec![false; n]; n],
        out: vec![Vec::new(); n],
        inn: vec![Vec::new(); n],
        next: 1,
        reference_sig: None,
        leaves: Vec::new(),
    };
    b.vertex(0);
    let mut found: BTreeMap<CanonicalForm, Digraph> = BTreeMap::new();
    for g in b.leaves {
        if !automorphism_group(&g).group.is_transitive_on(&g, Action::Darts)? {
            continue;
        }
        found.entry(canonical_form(&g)).or_insert(g);
    }
    let graphs: Vec<(Digraph, usize)> = found
        .into_values()
        .map(|g| {
            let ap = alter_perimeter(&g)?;
            Ok((g, ap))
        })
        .collect::<Result<_>>()?;
    let mut per_ap: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, ap) in &graphs {
        *per_ap.entry(*ap).or_default() += 1;
    }
    let mut entries: Vec<(usize, CensusEntry)> = graphs
        .into_iter()
        .enumerate()
        .map(|(k, (g, ap))| {
            let (key, name) = match reference_index(n, ap) {
                Some(i) if per_ap[&ap] == 1 => (i, format!("ATD[{n},{i}]")),
                _ => (usize::MAX, format!("ATD-local[{n},{}]", k + 1)),
            };
            (key, CensusEntry { name, digraph: g, provenance: Provenance::Generated, is_graph: false, alter_perimeter: ap })
        })
        .collect();
    // reference names first, in index order; the sort is stable for local names
    entries.sort_by_key(|(key, _)| *key);
    Ok(entries.into_iter().map(|(_, e)| e).collect())
}

pub fn dcyc_entry(n: usize) -> Result<CensusEntry> {
    let g = dcyc(n)?;
    let ap = alter_perimeter(&g)?;
    Ok(CensusEntry { name: format!("DCyc[{n}]"), digraph: g, provenance: Provenance::Builtin, is_graph: true, alter_perimeter: ap })
}

/// Name recorded in a `# name: ...` comment line, if any.
fn declared_name(text: &str) -> Option<String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("name:").map(|s| s.trim().to_string()))
}

/// Loads and validates an entry. With `force`, validation failures are
/// tolerated and the entry is returned anyway.
pub fn ingest(path: impl AsRef<Path>, force: bool) -> Result<(CensusEntry, Validation)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let g = parse_any(&text)?;
    let v = validate(&g);
    if !v.ok() && !force {
        return Err(Error::Validation(format!("{}: {}", path.display(), v.failures())));
    }
    let name = declared_name(&text)
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let ap = if v.connected { alter_perimeter(&g)? } else { 0 };
    let entry = CensusEntry { name, is_graph: g.is_graph(), digraph: g, provenance: Provenance::Ingested, alter_perimeter: ap };
    Ok((entry, v))
}

/// `.dg` text with a name comment, readable by [`ingest`].
pub fn entry_to_dg(e: &CensusEntry) -> String {
    format!("# name: {}\n{}", e.name, to_dg(&e.digraph))
}

/// Named entries, generated on demand and extended by ingested files.
#[derive(Default)]
pub struct Census {
    entries: BTreeMap<String, CensusEntry>,
    generated: std::collections::BTreeSet<usize>,
}

fn parse_bracket(name: &str, prefix: &str) -> Option<Vec<usize>> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Normalises `ATD[6, 1]` and `ATD[6,1]` to the same key.
pub fn normalise_name(name: &str) -> String {
    name.chars().filter(|c| !c.is_whitespace()).collect()
}

impl Census {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: CensusEntry) {
        self.entries.insert(normalise_name(&e.name), e);
    }

    /// Ingests every `.dg` and `.json` file of a directory.
    pub fn ingest_dir(&mut self, dir: impl AsRef<Path>) -> Result<usize> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "dg" || x == "json"))
            .collect();
        paths.sort();
        let mut count = 0;
        for p in paths {
            let (e, _) = ingest(&p, false)?;
            self.insert(e);
            count += 1;
        }
        Ok(count)
    }

    pub fn get(&mut self, name: &str) -> Result<CensusEntry> {
        let key = normalise_name(name);
        if let Some(e) = self.entries.get(&key) {
            return Ok(e.clone());
        }
        if let Some([n]) = parse_bracket(&key, "DCyc").as_deref() {
            let e = dcyc_entry(*n)?;
            self.insert(e.clone());
            return Ok(e);
        }
        if let Some([n, _]) = parse_bracket(&key, "ATD").as_deref() {
            if *n <= DEFAULT_ORDER_BOUND && self.generated.insert(*n) {
                for e in generate_atd(*n)? {
                    self.insert(e);
                }
                return self.get(name);
            }
        }
        Err(Error::UnknownEntry(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::directed_cycle;

    #[test]
    fn order_six_has_one_entry() {
        let v = generate_atd(6).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].name, "ATD[6,1]");
        assert_eq!(v[0].alter_perimeter, 3);
    }

    #[test]
    fn small_orders_are_empty() {
        for n in 0..5 {
            assert!(generate_atd(n).unwrap().is_empty());
        }
        assert!(matches!(generate_atd(13), Err(Error::InvalidOrder(13))));
    }

    #[test]
    fn validation_flags() {
        assert!(validate(&dcyc(5).unwrap()).ok());
        let v = validate(&directed_cycle(3).unwrap());
        assert!(v.connected && v.dart_transitive && !v.two_valent);
    }

    #[test]
    fn names_resolve() {
        let mut c = Census::new();
        assert_eq!(c.get("DCyc[4]").unwrap().alter_perimeter, 2);
        assert_eq!(c.get("ATD[6, 1]").unwrap().digraph.n(), 6);
        assert!(matches!(c.get("ATD[6,2]"), Err(Error::UnknownEntry(_))));
        assert!(matches!(c.get("Foo"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn declared_names() {
        assert_eq!(declared_name("# name: ATD[21,1]\nn 1\n").as_deref(), Some("ATD[21,1]"));
        assert_eq!(declared_name("n 1\n"), None);
    }
}
