//! The four families of boundary graphs of the pyramidal locus in genus `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CanonicalForm, StableGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("genus must be at least 3, got {0}")]
    GenusTooSmall(u32),
    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: u32, value: u32 },
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: u32, n: u32 },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} takes {expected} parameters, got {found}")]
    Arity {
        family: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    G1 { n: u32, m: u32 },
    G2 { n: u32, k: u32 },
    G3 { n: u32, m: u32 },
    G4 { n: u32, m: u32, d: u32 },
}

fn genus_ok(n: u32) -> Result<(), FamilyError> {
    if n < 3 {
        Err(FamilyError::GenusTooSmall(n))
    } else {
        Ok(())
    }
}

fn divides(divisor: u32, value: u32) -> Result<(), FamilyError> {
    if divisor == 0 || !value.is_multiple_of(divisor) {
        Err(FamilyError::NotADivisor { divisor, value })
    } else {
        Ok(())
    }
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `gcd(n, k) + gcd(n, k + 1)`.
pub fn g2_edges(n: u32, k: u32) -> u32 {
    n.gcd(&k) + n.gcd(&(k + 1))
}

/// One vertex of weight `n − n/m` carrying `n/m` loops.
pub fn make_g1(n: u32, m: u32) -> Result<StableGraph, FamilyError> {
    genus_ok(n)?;
    divides(m, n)?;
    let mut g = StableGraph::with_weights(vec![n - n / m]);
    g.add_edges(0, 0, n / m).expect("vertex exists");
    Ok(g)
}

/// Two vertices of equal weight `w` joined by `E` edges, `2w + E − 1 = n`.
pub fn make_g2(n: u32, k: u32) -> Result<StableGraph, FamilyError> {
    genus_ok(n)?;
    if k == 0 || k > n {
        return Err(FamilyError::KOutOfRange { k, n });
    }
    let e = g2_edges(n, k);
    let w = (n + 1 - e) / 2;
    let mut g = StableGraph::with_weights(vec![w, w]);
    g.add_edges(0, 1, e).expect("vertices exist");
    Ok(g)
}

/// A weight-0 hub joined by `m` edges to each of `n/m` weight-1 leaves.
pub fn make_g3(n: u32, m: u32) -> Result<StableGraph, FamilyError> {
    genus_ok(n)?;
    divides(m, n)?;
    let leaves = (n / m) as usize;
    let mut weights = vec![1; leaves + 1];
    weights[0] = 0;
    let mut g = StableGraph::with_weights(weights);
    for v in 1..=leaves {
        g.add_edges(0, v, m).expect("vertices exist");
    }
    Ok(g)
}

/// A weight-0 hub joined by `m` edges to each of `n/m` weight-0 outer
/// vertices, the outer vertices forming cycles of length `d` in
/// consecutive blocks.
pub fn make_g4(n: u32, m: u32, d: u32) -> Result<StableGraph, FamilyError> {
    genus_ok(n)?;
    divides(m, n)?;
    let k = n / m;
    divides(d, k)?;
    let (k, d) = (k as usize, d as usize);
    let mut g = StableGraph::with_weights(vec![0; k + 1]);
    for v in 1..=k {
        g.add_edges(0, v, m).expect("vertices exist");
    }
    for block in 0..k / d {
        let base = 1 + block * d;
        for i in 0..d {
            g.add_edge(base + i, base + (i + 1) % d).expect("vertices exist");
        }
    }
    Ok(g)
}

/// Lengths of the cycles formed by the edges not incident to `hub`, sorted.
/// `None` when those edges are not a disjoint union of cycles covering
/// every other vertex.
pub fn outer_cycles(g: &StableGraph, hub: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut deg = vec![0u32; n];
    let mut adj = vec![Vec::new(); n];
    for (a, b, m) in g.edges() {
        if a == hub || b == hub {
            continue;
        }
        deg[a] += m;
        deg[b] += m;
        adj[a].push(b);
        adj[b].push(a);
    }
    if (0..n).any(|v| v != hub && deg[v] != 2) {
        return None;
    }
    let mut seen = vec![false; n];
    seen[hub] = true;
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        lengths.push(size);
    }
    lengths.sort_unstable();
    Some(lengths)
}

impl FamilyTag {
    pub fn n(&self) -> u32 {
        match *self {
            FamilyTag::G1 { n, .. }
            | FamilyTag::G2 { n, .. }
            | FamilyTag::G3 { n, .. }
            | FamilyTag::G4 { n, .. } => n,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            FamilyTag::G1 { .. } => "G1",
            FamilyTag::G2 { .. } => "G2",
            FamilyTag::G3 { .. } => "G3",
            FamilyTag::G4 { .. } => "G4",
        }
    }

    pub fn params(&self) -> Vec<u32> {
        match *self {
            FamilyTag::G1 { n, m } | FamilyTag::G3 { n, m } => vec![n, m],
            FamilyTag::G2 { n, k } => vec![n, k],
            FamilyTag::G4 { n, m, d } => vec![n, m, d],
        }
    }

    pub fn from_parts(family: &str, params: &[u32]) -> Result<FamilyTag, FamilyError> {
        let arity = |expected: usize| {
            if params.len() == expected {
                Ok(())
            } else {
                Err(FamilyError::Arity {
                    family: family.to_string(),
                    expected,
                    found: params.len(),
                })
            }
        };
        let tag = match family {
            "G1" => {
                arity(2)?;
                FamilyTag::G1 { n: params[0], m: params[1] }
            }
            "G2" => {
                arity(2)?;
                FamilyTag::G2 { n: params[0], k: params[1] }
            }
            "G3" => {
                arity(2)?;
                FamilyTag::G3 { n: params[0], m: params[1] }
            }
            "G4" => {
                arity(3)?;
                FamilyTag::G4 { n: params[0], m: params[1], d: params[2] }
            }
            other => return Err(FamilyError::UnknownFamily(other.to_string())),
        };
        tag.build()?;
        Ok(tag)
    }

    pub fn build(&self) -> Result<StableGraph, FamilyError> {
        match *self {
            FamilyTag::G1 { n, m } => make_g1(n, m),
            FamilyTag::G2 { n, k } => make_g2(n, k),
            FamilyTag::G3 { n, m } => make_g3(n, m),
            FamilyTag::G4 { n, m, d } => make_g4(n, m, d),
        }
    }

    /// Every tag with valid parameters for genus `n`, family by family.
    pub fn all(n: u32) -> Vec<FamilyTag> {
        let divs = divisors(n);
        let mut tags: Vec<FamilyTag> = divs.iter().map(|&m| FamilyTag::G1 { n, m }).collect();
        tags.extend((1..=n).map(|k| FamilyTag::G2 { n, k }));
        tags.extend(divs.iter().map(|&m| FamilyTag::G3 { n, m }));
        for &m in &divs {
            for d in divisors(n / m) {
                tags.push(FamilyTag::G4 { n, m, d });
            }
        }
        tags
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(u32::to_string).collect();
        write!(f, "{}({})", self.family(), params.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct RawTag {
    family: String,
    params: Vec<u32>,
}

impl Serialize for FamilyTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawTag {
            family: self.family().to_string(),
            params: self.params(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FamilyTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawTag::deserialize(d)?;
        FamilyTag::from_parts(&raw.family, &raw.params).map_err(serde::de::Error::custom)
    }
}

/// One isomorphism class with every tag that produces it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub graph: StableGraph,
    pub tags: Vec<FamilyTag>,
}

/// All family graphs of genus `n`, merged by isomorphism, in order of first
/// appearance.
pub fn enumerate_boundary(n: u32) -> Result<Vec<Stratum>, FamilyError> {
    genus_ok(n)?;
    let mut strata: Vec<Stratum> = Vec::new();
    let mut index: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    for tag in FamilyTag::all(n) {
        let graph = tag.build()?;
        let form = graph.canonical_form();
        match index.get(&form) {
            Some(&i) => strata[i].tags.push(tag),
            None => {
                index.insert(form, strata.len());
                strata.push(Stratum {
                    graph,
                    tags: vec![tag],
                });
            }
        }
    }
    Ok(strata)
}

pub fn catalog_json(strata: &[Stratum]) -> serde_json::Value {
    serde_json::to_value(strata).expect("catalog serializes")
}

/// Plain-text listing grouped into the four families.
pub fn catalog_table(n: u32, strata: &[Stratum]) -> String {
    let mut out = String::new();
    writeln!(out, "genus {n}: {} strata", strata.len()).unwrap();
    for family in ["G1", "G2", "G3", "G4"] {
        let rows: Vec<&Stratum> = strata
            .iter()
            .filter(|s| s.tags[0].family() == family)
            .collect();
        writeln!(out, "\n{family} ({} graphs)", rows.len()).unwrap();
        writeln!(out, "  {:<28} {:>3} {:>4}  weights / degrees", "tags", "V", "E").unwrap();
        for s in rows {
            let tags: Vec<String> = s.tags.iter().map(FamilyTag::to_string).collect();
            let wd: Vec<String> = s
                .graph
                .weights()
                .iter()
                .zip(s.graph.degrees())
                .map(|(w, d)| format!("{w}/{d}"))
                .collect();
            writeln!(
                out,
                "  {:<28} {:>3} {:>4}  {}",
                tags.join(" "),
                s.graph.vertex_count(),
                s.graph.edge_count(),
                compress(&wd)
            )
            .unwrap();
        }
    }
    out
}

/// `a a a b` becomes `a×3 b`.
fn compress(items: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let mut j = i;
        while j < items.len() && items[j] == items[i] {
            j += 1;
        }
        if j - i > 1 {
            parts.push(format!("{}×{}", items[i], j - i));
        } else {
            parts.push(items[i].clone());
        }
        i = j;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_shapes() {
        let g = make_g1(5, 5).unwrap();
        assert_eq!((g.weight(0), g.loops(0)), (4, 1));
        let g = make_g1(6, 2).unwrap();
        assert_eq!((g.weight(0), g.loops(0), g.degree(0)), (3, 3, 6));
        assert_eq!(
            make_g1(6, 4),
            Err(FamilyError::NotADivisor { divisor: 4, value: 6 })
        );
    }

    #[test]
    fn g2_shapes() {
        let g = make_g2(6, 2).unwrap();
        assert_eq!((g.multiplicity(0, 1), g.weight(0)), (5, 1));
        let g = make_g2(7, 7).unwrap();
        assert_eq!((g.multiplicity(0, 1), g.weight(0)), (8, 0));
        assert!(make_g2(7, 8).is_err());
        assert!(make_g2(7, 0).is_err());
    }

    #[test]
    fn g3_and_g4_shapes() {
        let g = make_g3(6, 3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.multiplicity(0, 2), 3);
        let g = make_g4(6, 2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 9));
        assert_eq!(outer_cycles(&g, 0), Some(vec![3]));
        let g = make_g4(5, 5, 1).unwrap();
        assert_eq!((g.loops(1), g.edge_count()), (1, 6));
        assert_eq!(
            make_g4(6, 2, 2),
            Err(FamilyError::NotADivisor { divisor: 2, value: 3 })
        );
    }

    #[test]
    fn genus_and_stability() {
        for n in 3..=16 {
            for tag in FamilyTag::all(n) {
                let g = tag.build().unwrap();
                assert_eq!(g.genus().unwrap(), n, "{tag}");
                assert!(g.is_stable(), "{tag}");
            }
        }
    }

    #[test]
    fn g2_weight_parity() {
        for n in 1..=100 {
            for k in 1..=n {
                let e = g2_edges(n, k);
                assert!(e <= n + 1);
                assert_eq!((n + 1 - e) % 2, 0);
            }
        }
    }

    #[test]
    fn genus_three_catalog() {
        let strata = enumerate_boundary(3).unwrap();
        let g2 = strata
            .iter()
            .find(|s| s.tags.contains(&FamilyTag::G2 { n: 3, k: 2 }))
            .unwrap();
        assert!(g2.tags.contains(&FamilyTag::G2 { n: 3, k: 3 }));
        assert_eq!(FamilyTag::all(3).len(), strata.iter().map(|s| s.tags.len()).sum::<usize>());
    }

    #[test]
    fn tag_json() {
        let tag = FamilyTag::G4 { n: 6, m: 2, d: 3 };
        let v = serde_json::to_value(tag).unwrap();
        assert_eq!(v, serde_json::json!({"family": "G4", "params": [6, 2, 3]}));
        assert_eq!(serde_json::from_value::<FamilyTag>(v).unwrap(), tag);
        let bad = serde_json::json!({"family": "G4", "params": [6, 2]});
        assert!(serde_json::from_value::<FamilyTag>(bad).is_err());
    }

    #[test]
    fn table_has_four_sections() {
        let strata = enumerate_boundary(6).unwrap();
        let table = catalog_table(6, &strata);
        for f in ["G1 (", "G2 (", "G3 (", "G4 ("] {
            assert!(table.contains(f));
        }
        assert!(table.contains("G4(6,2,3)"));
    }
}
