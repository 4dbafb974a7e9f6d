//! Kontsevich admissible graphs.
//!
//! Vertices are labelled `1..=n` (aerial) and `n+1..=n+m` (ground). Edges go
//! out of aerial vertices only, carry no loops or repeated arrows, and are
//! kept sorted by source and then by target. Graphs are labelled: nothing is
//! quotiented by automorphisms.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleGraph {
    n: usize,
    m: usize,
    epsilon: i64,
    edges: Vec<Edge>,
}

/// Required edge count `2n + m - 2 - ε`.
pub fn edge_count(n: usize, m: usize, epsilon: i64) -> Result<usize> {
    let e = 2 * n as i64 + m as i64 - 2 - epsilon;
    if e < 0 {
        return Err(Error::NegativeEdgeCount(e));
    }
    Ok(e as usize)
}

impl AdmissibleGraph {
    /// Validates every admissibility clause; edges are normalized to sorted order.
    pub fn new(n: usize, m: usize, epsilon: i64, mut edges: Vec<Edge>) -> Result<Self> {
        let want = edge_count(n, m, epsilon)?;
        let total = n + m;
        for &(s, t) in &edges {
            if s == 0 || s > n {
                return Err(Error::InvalidGraph(format!("edge ({s},{t}) leaves a non-aerial vertex")));
            }
            if t == 0 || t > total {
                return Err(Error::InvalidGraph(format!("edge ({s},{t}) targets a missing vertex")));
            }
            if s == t {
                return Err(Error::InvalidGraph(format!("loop at vertex {s}")));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("repeated arrow".into()));
        }
        if edges.len() != want {
            return Err(Error::InvalidGraph(format!(
                "expected {want} edges, found {}",
                edges.len()
            )));
        }
        Ok(Self { n, m, epsilon, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> i64 {
        self.epsilon
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.n + self.m
    }

    pub fn is_ground(&self, v: usize) -> bool {
        v > self.n
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.0 == v)
    }

    /// Sum of out-degrees equals `2n + m - 2 - ε`, sources are aerial,
    /// no loops, no repeated arrows.
    pub fn check_admissible(&self) -> bool {
        AdmissibleGraph::new(self.n, self.m, self.epsilon, self.edges.clone()).as_ref() == Ok(self)
    }
}

impl fmt::Display for AdmissibleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}, m={}):", self.n, self.m)?;
        for (s, t) in &self.edges {
            write!(f, " {s}->{t}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    m: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "is_zero")]
    epsilon: i64,
}

fn is_zero(e: &i64) -> bool {
    *e == 0
}

impl Serialize for AdmissibleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            m: self.m,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            epsilon: self.epsilon,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdmissibleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        let edges = j.edges.into_iter().map(|[a, b]| (a, b)).collect();
        AdmissibleGraph::new(j.n, j.m, j.epsilon, edges).map_err(serde::de::Error::custom)
    }
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if pool.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// All labelled graphs whose aerial vertex `v` has out-degree `degrees[v-1]`.
pub fn enumerate_with_out_degrees(n: usize, m: usize, epsilon: i64, degrees: &[usize]) -> Result<Vec<AdmissibleGraph>> {
    let want = edge_count(n, m, epsilon)?;
    if degrees.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: degrees.len(),
        });
    }
    if degrees.iter().sum::<usize>() != want {
        return Ok(Vec::new());
    }
    let choices: Vec<Vec<Vec<usize>>> = (1..=n)
        .map(|v| {
            let pool: Vec<usize> = (1..=n + m).filter(|&t| t != v).collect();
            combinations(&pool, degrees[v - 1])
        })
        .collect();
    let mut out = vec![Vec::new()];
    for (idx, opts) in choices.iter().enumerate() {
        let v = idx + 1;
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for targets in opts {
                let mut e: Vec<Edge> = prefix.clone();
                e.extend(targets.iter().map(|&t| (v, t)));
                next.push(e);
            }
        }
        out = next;
    }
    let mut graphs: Vec<AdmissibleGraph> = out
        .into_iter()
        .map(|edges| AdmissibleGraph::new(n, m, epsilon, edges))
        .collect::<Result<_>>()?;
    graphs.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(graphs)
}

fn out_degree_vectors(n: usize, total: usize, max_each: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total.min(max_each) {
        for mut rest in out_degree_vectors(n - 1, total - first, max_each) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Every admissible graph in `G_{n,m,ε}`, sorted lexicographically by edge list.
pub fn enumerate_graphs(n: usize, m: usize, epsilon: i64) -> Result<Vec<AdmissibleGraph>> {
    let want = edge_count(n, m, epsilon)?;
    let max_each = (n + m).saturating_sub(1);
    let parts: Vec<Vec<AdmissibleGraph>> = out_degree_vectors(n, want, max_each)
        .par_iter()
        .map(|deg| enumerate_with_out_degrees(n, m, epsilon, deg))
        .collect::<Result<_>>()?;
    let mut all: Vec<AdmissibleGraph> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(all)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "snake_case")]
pub enum VanishingTag {
    /// An aerial vertex whose only incident edge is a single incoming arrow.
    DeadEnd { vertex: usize },
    /// A one-out-edge vertex with no incoming arrow from another such vertex.
    UnfedOmega { vertex: usize },
    /// The reflection `z ↦ -z̄` preserves the configuration space (at most
    /// one ground point) and reverses the sign of the integrand.
    ReflectionOdd,
}

/// Role-free patterns that force the weight to vanish.
pub fn vanishing_detector(g: &AdmissibleGraph) -> Option<VanishingTag> {
    if let Some(vertex) = (1..=g.n).find(|&v| g.out_degree(v) == 0 && g.in_degree(v) == 1 && g.n > 1) {
        return Some(VanishingTag::DeadEnd { vertex });
    }
    // degree of the reflection is (-1)^{n-1+m}, each angle form flips sign
    if g.epsilon == 0 && g.m <= 1 && g.n >= 1 && (g.edges.len() + g.n - 1 + g.m) % 2 == 1 {
        return Some(VanishingTag::ReflectionOdd);
    }
    None
}

/// Detector for the wheel setting: vertices `1..=j` are the ω-vertices and
/// `center` is the γ-vertex.
pub fn wheel_vanishing_detector(g: &AdmissibleGraph, j: usize, center: usize) -> Option<VanishingTag> {
    debug_assert!(center > j && center <= g.n);
    for v in 1..=j {
        let fed = g.edges.iter().any(|&(s, t)| t == v && s <= j && s != v);
        if !fed {
            return Some(VanishingTag::UnfedOmega { vertex: v });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelFamily {
    pub j: usize,
    pub center: usize,
    /// Cycle lengths `l_1 ≤ ... ≤ l_s`, all at least 2.
    pub cycles: Vec<usize>,
    pub m: usize,
    /// Number of labelled graphs with this cycle type.
    pub multiplicity: u128,
}

impl WheelFamily {
    /// Representative graph: cycles over consecutive ω labels, each vertex
    /// pointing to the next one in its cycle, the center feeding every
    /// ω-vertex and every ground vertex.
    pub fn representative(&self) -> AdmissibleGraph {
        let mut edges = Vec::new();
        let mut start = 1;
        for &l in &self.cycles {
            for k in 0..l {
                edges.push((start + k, start + (k + 1) % l));
            }
            start += l;
        }
        for t in (1..=self.j).chain(self.center + 1..=self.center + self.m) {
            edges.push((self.center, t));
        }
        AdmissibleGraph::new(self.j + 1, self.m, 0, edges).expect("wheel graphs are admissible")
    }
}

/// Partitions of `j` into parts of size at least `min`, each non-decreasing.
pub fn partitions(j: usize, min: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in min.max(1)..=j {
        for rest in partitions(j - first, first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn fact(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `j! / (Π τ_i! Π i^{τ_i})` for the cycle type with `τ_i` cycles of length `i`.
pub fn cycle_type_multiplicity(cycles: &[usize]) -> u128 {
    let j: usize = cycles.iter().sum();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in cycles {
        *counts.entry(l).or_default() += 1;
    }
    let denom: u128 = counts
        .iter()
        .map(|(&l, &t)| fact(t) * (l as u128).pow(t as u32))
        .product();
    fact(j) / denom
}

/// Surviving wheel families for `j` ω-vertices and a center of degree `p + 1`.
pub fn classify_wheels(j: usize, p: usize) -> Result<Vec<WheelFamily>> {
    let m = p as i64 - j as i64 + 1;
    if m < 0 {
        return Err(Error::InvalidGraph(format!("ground count {m} is negative")));
    }
    Ok(partitions(j, 2)
        .into_iter()
        .map(|cycles| WheelFamily {
            j,
            center: j + 1,
            multiplicity: cycle_type_multiplicity(&cycles),
            cycles,
            m: m as usize,
        })
        .collect())
}

/// All graphs of the wheel setting: vertices `1..=j` of out-degree one,
/// center `j + 1` of out-degree `p + 1`, and `p - j + 1` grounds.
pub fn wheel_setting_graphs(j: usize, p: usize) -> Result<Vec<AdmissibleGraph>> {
    let m = p as i64 - j as i64 + 1;
    if m < 0 {
        return Err(Error::InvalidGraph(format!("ground count {m} is negative")));
    }
    let mut deg = vec![1; j];
    deg.push(p + 1);
    enumerate_with_out_degrees(j + 1, m as usize, 0, &deg)
}

/// Cycle type of the ω-part of a surviving wheel graph, if it is a
/// fixed-point-free permutation of `1..=j`.
pub fn omega_cycle_type(g: &AdmissibleGraph, j: usize) -> Option<Vec<usize>> {
    let mut next = vec![0; j + 1];
    for v in 1..=j {
        let mut outs = g.out_edges(v);
        let (_, t) = *outs.next()?;
        if outs.next().is_some() || t == 0 || t > j {
            return None;
        }
        next[v] = t;
    }
    let mut seen = vec![false; j + 1];
    let mut cycles = Vec::new();
    for v in 1..=j {
        if seen[v] {
            continue;
        }
        let mut len = 0;
        let mut w = v;
        while !seen[w] {
            seen[w] = true;
            w = next[w];
            len += 1;
        }
        if w != v {
            return None;
        }
        cycles.push(len);
    }
    cycles.sort_unstable();
    Some(cycles)
}

/// SHA-256 over the normalized labelled edge set.
pub fn canonical_hash(g: &AdmissibleGraph) -> String {
    let mut edges = g.edges.clone();
    edges.sort_unstable();
    let mut h = Sha256::new();
    h.update(format!("n={};m={};eps={};", g.n, g.m, g.epsilon));
    for (s, t) in edges {
        h.update(format!("{s}>{t};"));
    }
    hex::encode(h.finalize())
}

/// The graph `Γ_0` of `G_{1,m}`: one aerial vertex feeding every ground.
pub fn gamma_zero(m: usize) -> AdmissibleGraph {
    AdmissibleGraph::new(1, m, 0, (2..=m + 1).map(|t| (1, t)).collect()).expect("Γ_0 is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent generator: all subsets of the candidate edge set.
    fn naive(n: usize, m: usize, eps: i64) -> Vec<Vec<Edge>> {
        let want = edge_count(n, m, eps).unwrap();
        let cand: Vec<Edge> = (1..=n)
            .flat_map(|s| (1..=n + m).filter(move |&t| t != s).map(move |t| (s, t)))
            .collect();
        assert!(cand.len() < 24);
        let mut out = Vec::new();
        for mask in 0u32..(1 << cand.len()) {
            if mask.count_ones() as usize == want {
                let e: Vec<Edge> = (0..cand.len()).filter(|&i| mask >> i & 1 == 1).map(|i| cand[i]).collect();
                out.push(e);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_examples() {
        for m in 0..5 {
            let g = enumerate_graphs(1, m, 0).unwrap();
            assert_eq!(g, vec![gamma_zero(m)]);
        }
        let g = enumerate_graphs(0, 2, 0).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].edges().is_empty());
        assert!(matches!(enumerate_graphs(0, 1, 0), Err(Error::NegativeEdgeCount(-1))));
        assert_eq!(enumerate_graphs(2, 0, 0).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_matches_naive_generator() {
        for (n, m, eps) in [(2, 0, 0), (2, 1, 0), (2, 2, 0), (3, 0, 0), (3, 1, 0), (2, 2, 1), (3, 0, 1), (2, 3, 0)] {
            let got: Vec<Vec<Edge>> = enumerate_graphs(n, m, eps)
                .unwrap()
                .into_iter()
                .inspect(|g| {
                    assert!(g.check_admissible());
                    let outs: usize = (1..=n).map(|v| g.out_degree(v)).sum();
                    assert_eq!(outs, edge_count(n, m, eps).unwrap());
                })
                .map(|g| g.edges().to_vec())
                .collect();
            assert_eq!(got, naive(n, m, eps), "n={n} m={m} eps={eps}");
        }
    }

    #[test]
    fn admissibility_errors() {
        assert!(AdmissibleGraph::new(1, 1, 0, vec![(2, 1)]).is_err());
        assert!(AdmissibleGraph::new(2, 0, 0, vec![(1, 1), (2, 1)]).is_err());
        assert!(AdmissibleGraph::new(2, 0, 0, vec![(1, 2), (1, 2)]).is_err());
        assert!(AdmissibleGraph::new(1, 2, 0, vec![(1, 2)]).is_err());
        assert!(AdmissibleGraph::new(1, 2, 0, vec![(1, 4), (1, 2)]).is_err());
    }

    #[test]
    fn detector_examples() {
        // ω1, ω2 point at the center, the center points back
        let g = AdmissibleGraph::new(3, 0, 0, vec![(1, 3), (2, 3), (3, 1), (3, 2)]).unwrap();
        assert!(matches!(wheel_vanishing_detector(&g, 2, 3), Some(VanishingTag::UnfedOmega { .. })));
        let g = AdmissibleGraph::new(3, 0, 0, vec![(1, 2), (2, 1), (3, 1), (3, 2)]).unwrap();
        assert_eq!(wheel_vanishing_detector(&g, 2, 3), None);
        // single ω pointing at a ground vertex
        let g = AdmissibleGraph::new(2, 1, 0, vec![(1, 3), (2, 1), (2, 3)]).unwrap();
        assert_eq!(wheel_vanishing_detector(&g, 1, 2), Some(VanishingTag::UnfedOmega { vertex: 1 }));
        let g = AdmissibleGraph::new(2, 1, 0, vec![(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(vanishing_detector(&g), Some(VanishingTag::ReflectionOdd));
        let g = AdmissibleGraph::new(2, 2, 0, vec![(1, 2), (1, 3), (2, 3), (2, 4)]).unwrap();
        assert_eq!(vanishing_detector(&g), None);
        let g = AdmissibleGraph::new(2, 0, 1, vec![(1, 2)]).unwrap();
        assert_eq!(vanishing_detector(&g), Some(VanishingTag::DeadEnd { vertex: 2 }));
        let eye = AdmissibleGraph::new(2, 0, 0, vec![(1, 2), (2, 1)]).unwrap();
        assert_eq!(vanishing_detector(&eye), Some(VanishingTag::ReflectionOdd));
        assert_eq!(vanishing_detector(&gamma_zero(1)), None);
        assert_eq!(vanishing_detector(&gamma_zero(2)), None);
        let odd_wheel = AdmissibleGraph::new(4, 0, 0, vec![(1, 2), (2, 3), (3, 1), (4, 1), (4, 2), (4, 3)]).unwrap();
        assert_eq!(vanishing_detector(&odd_wheel), Some(VanishingTag::ReflectionOdd));
    }

    #[test]
    fn vector_fields_alone_give_no_surviving_graphs() {
        for j in 2..=3 {
            for m in 0..=3 {
                let Ok(graphs) = enumerate_graphs(j, m, 0) else { continue };
                for g in graphs {
                    let all_one = (1..=j).all(|v| g.out_degree(v) == 1);
                    assert!(!all_one || vanishing_detector(&g).is_some(), "{g}");
                }
            }
        }
    }

    #[test]
    fn wheel_classification_examples() {
        let w = classify_wheels(2, 1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].cycles.clone(), w[0].multiplicity), (vec![2], 1));
        let w = classify_wheels(0, 0).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].cycles.is_empty());
        assert_eq!(w[0].m, 1);
        assert_eq!(cycle_type_multiplicity(&[2, 2]), 3);
        assert!(classify_wheels(3, 1).is_err());
        let rep = classify_wheels(2, 1).unwrap()[0].representative();
        assert_eq!(rep.edges(), &[(1, 2), (2, 1), (3, 1), (3, 2)]);
    }

    #[test]
    fn survivors_are_exactly_the_wheels() {
        for j in 0..=3 {
            for p in 0..=3 {
                let Ok(families) = classify_wheels(j, p) else {
                    continue;
                };
                let mut counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
                for g in wheel_setting_graphs(j, p).unwrap() {
                    if wheel_vanishing_detector(&g, j, j + 1).is_none() {
                        let ct = omega_cycle_type(&g, j).expect("survivor is a wheel");
                        assert!(ct.iter().all(|&l| l >= 2));
                        assert!((1..=j).chain(j + 2..=j + 1 + families[0].m).all(|t| g.edges().contains(&(j + 1, t))));
                        *counts.entry(ct).or_default() += 1;
                    }
                }
                let want: BTreeMap<Vec<usize>, u128> =
                    families.iter().map(|f| (f.cycles.clone(), f.multiplicity)).collect();
                assert_eq!(counts, want, "j={j} p={p}");
            }
        }
    }

    #[test]
    fn hashing() {
        let a = canonical_hash(&gamma_zero(2));
        assert_eq!(a, canonical_hash(&gamma_zero(2)));
        assert_ne!(a, canonical_hash(&gamma_zero(3)));
        let g1 = AdmissibleGraph::new(3, 0, 0, vec![(3, 2), (1, 2), (2, 1), (3, 1)]).unwrap();
        let g2 = AdmissibleGraph::new(3, 0, 0, vec![(1, 2), (2, 1), (3, 1), (3, 2)]).unwrap();
        assert_eq!(canonical_hash(&g1), canonical_hash(&g2));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn json_roundtrip() {
        let g = gamma_zero(2);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":1,"m":2,"edges":[[1,2],[1,3]]}"#);
        let back: AdmissibleGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<AdmissibleGraph>(r#"{"n":1,"m":2,"edges":[[1,1],[1,3]]}"#).is_err());
    }
}
