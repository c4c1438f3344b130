//! Zero-twist Dehn–Thurston coordinates on pants decompositions of punctured
//! spheres, and tracing of the resulting curve system.
//!
//! Each pair of pants lists its three boundary slots anticlockwise. Inside a
//! pants the curve system is put in standard position: `t_ij` arcs between
//! slots `i` and `j`, and when slot `i` dominates, `t_ii` arcs from slot `i`
//! back to itself going around slot `i + 2`. Points on slot `i` are numbered
//! in one direction as
//!
//! ```text
//! [ loop exits | arcs to i+2 | loop returns | arcs to i+1 ]
//! ```
//!
//! and two pants sharing a curve with `N` points glue position `p` on one
//! side to `N − 1 − p` on the other.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DtError {
    #[error("malformed pants decomposition: {0}")]
    Decomposition(String),
    #[error("expected {expected} coordinates, got {found}")]
    Length { expected: usize, found: usize },
    #[error("cannot parse coordinates `{0}`")]
    Parse(String),
    #[error("twist of {label} is {twist}; only zero twists are supported")]
    NonzeroTwist { label: String, twist: i64 },
    #[error("odd intersection total in pants {}", .0.join(", "))]
    NotAdmissible(Vec<String>),
    #[error("inconsistent strand model: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pants {
    pub name: String,
    /// Boundary labels, anticlockwise.
    pub slots: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PantsDecomposition {
    name: String,
    interior: Vec<String>,
    boundary: Vec<String>,
    pants: Vec<Pants>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    O5,
    Oprime4,
}

impl Preset {
    pub fn decomposition(self) -> PantsDecomposition {
        match self {
            Preset::O5 => PantsDecomposition::o5(),
            Preset::Oprime4 => PantsDecomposition::oprime4(),
        }
    }
}

impl FromStr for Preset {
    type Err = DtError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O5" | "o5" => Ok(Preset::O5),
            "Oprime4" | "oprime4" | "O'4" => Ok(Preset::Oprime4),
            other => Err(DtError::Parse(format!("unknown preset {other:?}"))),
        }
    }
}

fn pants(name: &str, a: &str, b: &str, c: &str) -> Pants {
    Pants {
        name: name.into(),
        slots: [a.into(), b.into(), c.into()],
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl PantsDecomposition {
    pub fn new(
        name: &str,
        interior: Vec<String>,
        boundary: Vec<String>,
        pants: Vec<Pants>,
    ) -> Result<PantsDecomposition, DtError> {
        let bad = |m: String| Err(DtError::Decomposition(m));
        let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &pants {
            for s in &p.slots {
                *uses.entry(s.as_str()).or_insert(0) += 1;
            }
        }
        for l in &interior {
            if uses.remove(l.as_str()) != Some(2) {
                return bad(format!("interior curve {l} must bound exactly two slots"));
            }
        }
        for l in &boundary {
            if uses.remove(l.as_str()) != Some(1) {
                return bad(format!("boundary curve {l} must bound exactly one slot"));
            }
        }
        if let Some(l) = uses.keys().next() {
            return bad(format!("slot label {l} is not declared"));
        }
        if pants.len() != interior.len() + 1 {
            return bad("a sphere needs one more pants than interior curves".into());
        }
        let d = PantsDecomposition {
            name: name.into(),
            interior,
            boundary,
            pants,
        };
        if !d.pants_connected() {
            return bad("pants adjacency is disconnected".into());
        }
        Ok(d)
    }

    /// Five-holed sphere: `q1` bounds `{p2, p3}`, `q2` bounds `{p4, p5}`.
    pub fn o5() -> PantsDecomposition {
        PantsDecomposition::new(
            "O5",
            strings(&["q1", "q2"]),
            strings(&["p1", "p2", "p3", "p4", "p5"]),
            vec![
                pants("A", "q1", "p2", "p3"),
                pants("B", "q2", "p4", "p5"),
                pants("C", "p1", "q1", "q2"),
            ],
        )
        .expect("preset is well formed")
    }

    /// Four-holed sphere: `q` separates `{p2', p4'}` from `{p1', p3'}`.
    pub fn oprime4() -> PantsDecomposition {
        PantsDecomposition::new(
            "Oprime4",
            strings(&["q"]),
            strings(&["p1'", "p2'", "p3'", "p4'"]),
            vec![pants("D", "q", "p2'", "p4'"), pants("E", "q", "p1'", "p3'")],
        )
        .expect("preset is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interior(&self) -> &[String] {
        &self.interior
    }

    pub fn boundary(&self) -> &[String] {
        &self.boundary
    }

    pub fn pants(&self) -> &[Pants] {
        &self.pants
    }

    /// Interior labels followed by boundary labels: the coordinate order.
    pub fn labels(&self) -> Vec<String> {
        self.interior.iter().chain(&self.boundary).cloned().collect()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }

    pub fn is_interior(&self, label: &str) -> bool {
        self.interior.iter().any(|l| l == label)
    }

    fn pants_connected(&self) -> bool {
        let k = self.pants.len();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if !seen[j]
                    && self.pants[i]
                        .slots
                        .iter()
                        .any(|s| self.pants[j].slots.contains(s))
                {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Intersection numbers in the order of [`PantsDecomposition::labels`];
/// twists are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DtCoordinates(pub Vec<u32>);

impl DtCoordinates {
    pub fn for_decomposition(d: &PantsDecomposition, values: &[u32]) -> Result<DtCoordinates, DtError> {
        let expected = d.interior.len() + d.boundary.len();
        if values.len() != expected {
            return Err(DtError::Length {
                expected,
                found: values.len(),
            });
        }
        Ok(DtCoordinates(values.to_vec()))
    }

    /// Accepts `8,0,0,1,1,0,0` or the paired form `((8,0),(0,0),0,1,1,0,0)`.
    pub fn parse(d: &PantsDecomposition, s: &str) -> Result<DtCoordinates, DtError> {
        let paired = s.contains('(');
        let nums = s
            .split(|c: char| c == ',' || c == '(' || c == ')' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| DtError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let k = d.interior.len();
        let mut values = Vec::new();
        let mut rest = nums.as_slice();
        if paired {
            if rest.len() < 2 * k {
                return Err(DtError::Parse(s.to_string()));
            }
            for (i, pair) in rest[..2 * k].chunks(2).enumerate() {
                if pair[1] != 0 {
                    return Err(DtError::NonzeroTwist {
                        label: d.interior[i].clone(),
                        twist: pair[1],
                    });
                }
                values.push(pair[0]);
            }
            rest = &rest[2 * k..];
        }
        values.extend_from_slice(rest);
        let values = values
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| DtError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        DtCoordinates::for_decomposition(d, &values)
    }

    pub fn get(&self, d: &PantsDecomposition, label: &str) -> u32 {
        self.0[d.label_index(label).expect("known label")]
    }

    /// The paired notation `((x,0),…,b,…)`.
    pub fn display(&self, d: &PantsDecomposition) -> String {
        let k = d.interior.len();
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, x)| if i < k { format!("({x},0)") } else { x.to_string() })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// Arc counts of the standard model in one pants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PantsModel {
    t: [[u32; 3]; 3],
}

impl PantsModel {
    pub fn t(&self, i: usize, j: usize) -> u32 {
        self.t[i][j]
    }

    /// Number of strand ends on slot `i`.
    pub fn total(&self, i: usize) -> u32 {
        (0..3).map(|j| if i == j { 2 * self.t[i][i] } else { self.t[i][j] }).sum()
    }

    /// `(t_ii, t_{i,i+2}, t_{i,i+1})`.
    fn layout(&self, i: usize) -> (u32, u32, u32) {
        let tt = self.t[i][i];
        let a = self.t[i][(i + 2) % 3];
        let b = self.t[i][(i + 1) % 3];
        (tt, a, b)
    }
}

impl fmt::Display for PantsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t11={} t22={} t33={} t12={} t13={} t23={}",
            self.t[0][0], self.t[1][1], self.t[2][2], self.t[0][1], self.t[0][2], self.t[1][2]
        )
    }
}

pub fn standard_model_in_pants(x: [u32; 3]) -> Result<PantsModel, DtError> {
    if !(x[0] + x[1] + x[2]).is_multiple_of(2) {
        return Err(DtError::NotAdmissible(vec![format!("{x:?}")]));
    }
    let mut t = [[0u32; 3]; 3];
    let dominant = (0..3).find(|&i| x[i] > x[(i + 1) % 3] + x[(i + 2) % 3]);
    match dominant {
        Some(i) => {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            t[i][i] = (x[i] - x[j] - x[k]) / 2;
            t[i][j] = x[j];
            t[j][i] = x[j];
            t[i][k] = x[k];
            t[k][i] = x[k];
        }
        None => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let v = (x[i] + x[j] - x[k]) / 2;
                t[i][j] = v;
                t[j][i] = v;
            }
        }
    }
    Ok(PantsModel { t })
}

pub fn check_admissible(d: &PantsDecomposition, coords: &DtCoordinates) -> Result<(), DtError> {
    let failing: Vec<String> = d
        .pants
        .iter()
        .filter(|p| p.slots.iter().map(|s| coords.get(d, s)).sum::<u32>() % 2 != 0)
        .map(|p| p.name.clone())
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(DtError::NotAdmissible(failing))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Closed,
    /// An arc with endpoints on these boundary curves, sorted.
    Arc(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// Intersection number with every pants curve, in label order.
    pub intersections: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSystem {
    pub labels: Vec<String>,
    pub models: Vec<(String, PantsModel)>,
    pub components: Vec<Component>,
}

impl CurveSystem {
    pub fn is_single_arc(&self) -> bool {
        self.components.len() == 1 && matches!(self.components[0].kind, ComponentKind::Arc(..))
    }

    pub fn arc_endpoints(&self) -> Option<(&str, &str)> {
        match &self.components[..] {
            [Component {
                kind: ComponentKind::Arc(a, b),
                ..
            }] => Some((a, b)),
            _ => None,
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = v;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra.max(rb)] = ra.min(rb);
    }
}

pub fn trace_components(d: &PantsDecomposition, coords: &DtCoordinates) -> Result<CurveSystem, DtError> {
    check_admissible(d, coords)?;
    let labels = d.labels();

    // one node per strand end: (pants, slot, position)
    let mut offset = Vec::new();
    let mut total = 0usize;
    for p in &d.pants {
        let mut row = [0usize; 3];
        for (s, label) in p.slots.iter().enumerate() {
            row[s] = total;
            total += coords.get(d, label) as usize;
        }
        offset.push(row);
    }
    let mut uf = UnionFind((0..total).collect());

    let mut models = Vec::new();
    for (pi, p) in d.pants.iter().enumerate() {
        let x = [0, 1, 2].map(|s| coords.get(d, &p.slots[s]));
        let model = standard_model_in_pants(x)?;
        for (s, &xs) in x.iter().enumerate() {
            if model.total(s) != xs {
                return Err(DtError::Internal(format!(
                    "pants {} slot {} carries {} ends, expected {}",
                    p.name,
                    p.slots[s],
                    model.total(s),
                    xs
                )));
            }
        }
        let node = |s: usize, pos: u32| offset[pi][s] + pos as usize;
        for i in 0..3 {
            let (tt, a, _) = model.layout(i);
            for l in 0..tt {
                uf.union(node(i, l), node(i, 2 * tt + a - 1 - l));
            }
            let j = (i + 1) % 3;
            let (tt_j, _, _) = model.layout(j);
            for c in 0..model.t(i, j) {
                uf.union(node(i, x[i] - 1 - c), node(j, tt_j + c));
            }
        }
        models.push((p.name.clone(), model));
    }

    let slots_of = |label: &str| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (pi, p) in d.pants.iter().enumerate() {
            for (s, l) in p.slots.iter().enumerate() {
                if l == label {
                    out.push((pi, s));
                }
            }
        }
        out
    };
    for label in &d.interior {
        let sides = slots_of(label);
        let n = coords.get(d, label);
        let ((p1, s1), (p2, s2)) = (sides[0], sides[1]);
        for pos in 0..n {
            uf.union(offset[p1][s1] + pos as usize, offset[p2][s2] + (n - 1 - pos) as usize);
        }
    }

    // first occurrence of every label, so glued points count once
    let mut counted: Vec<(usize, usize)> = Vec::new();
    let mut endpoint_labels: Vec<Option<usize>> = vec![None; total];
    for (li, label) in labels.iter().enumerate() {
        let (pi, s) = slots_of(label)[0];
        counted.push((pi, s));
        if !d.is_interior(label) {
            let n = coords.get(d, label) as usize;
            for node in &mut endpoint_labels[offset[pi][s]..offset[pi][s] + n] {
                *node = Some(li);
            }
        }
    }

    let mut by_root: BTreeMap<usize, (Vec<u32>, Vec<usize>)> = BTreeMap::new();
    for (li, &(pi, s)) in counted.iter().enumerate() {
        let n = coords.0[li] as usize;
        for pos in 0..n {
            let root = uf.find(offset[pi][s] + pos);
            let entry = by_root
                .entry(root)
                .or_insert_with(|| (vec![0; labels.len()], Vec::new()));
            entry.0[li] += 1;
            if let Some(b) = endpoint_labels[offset[pi][s] + pos] {
                entry.1.push(b);
            }
        }
    }

    let mut components = Vec::new();
    for (_, (intersections, mut ends)) in by_root {
        ends.sort_unstable();
        let kind = match ends[..] {
            [] => ComponentKind::Closed,
            [a, b] => ComponentKind::Arc(labels[a].clone(), labels[b].clone()),
            _ => {
                return Err(DtError::Internal(format!(
                    "component with {} boundary ends",
                    ends.len()
                )))
            }
        };
        components.push(Component {
            kind,
            intersections,
        });
    }
    Ok(CurveSystem {
        labels,
        models,
        components,
    })
}

/// JSON input `{"preset": "O5", "coords": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtInput {
    pub preset: Preset,
    pub coords: Vec<u32>,
}

impl DtInput {
    pub fn trace(&self) -> Result<CurveSystem, DtError> {
        let d = self.preset.decomposition();
        let c = DtCoordinates::for_decomposition(&d, &self.coords)?;
        trace_components(&d, &c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(x: [u32; 3]) -> [u32; 6] {
        let m = standard_model_in_pants(x).unwrap();
        [m.t(0, 0), m.t(1, 1), m.t(2, 2), m.t(0, 1), m.t(0, 2), m.t(1, 2)]
    }

    #[test]
    fn standard_models() {
        assert_eq!(model([2, 2, 2]), [0, 0, 0, 1, 1, 1]);
        assert_eq!(model([4, 1, 1]), [1, 0, 0, 1, 1, 0]);
        assert_eq!(model([1, 3, 0]), [0, 1, 0, 1, 0, 0]);
        assert_eq!(model([0, 0, 0]), [0; 6]);
        assert!(standard_model_in_pants([1, 1, 1]).is_err());
    }

    #[test]
    fn admissibility_names_failing_pants() {
        let d = PantsDecomposition::o5();
        let c = DtCoordinates::for_decomposition(&d, &[1, 0, 0, 1, 1, 0, 0]).unwrap();
        assert_eq!(check_admissible(&d, &c), Err(DtError::NotAdmissible(vec!["A".into(), "C".into()])));
    }

    #[test]
    fn reference_arcs() {
        let d = PantsDecomposition::o5();
        let c = DtCoordinates::parse(&d, "((8,0),(0,0),0,1,1,0,0)").unwrap();
        let sys = trace_components(&d, &c).unwrap();
        assert_eq!(sys.arc_endpoints(), Some(("p2", "p3")));
        let c = DtCoordinates::parse(&d, "((7,0),(0,0),1,1,0,0,0)").unwrap();
        let sys = trace_components(&d, &c).unwrap();
        assert_eq!(sys.arc_endpoints(), Some(("p1", "p2")));
    }

    #[test]
    fn closed_curves() {
        let d = PantsDecomposition::o5();
        let c = DtCoordinates::for_decomposition(&d, &[0; 7]).unwrap();
        assert!(trace_components(&d, &c).unwrap().components.is_empty());
        let d = PantsDecomposition::oprime4();
        let c = DtCoordinates::for_decomposition(&d, &[2, 0, 0, 0, 0]).unwrap();
        let sys = trace_components(&d, &c).unwrap();
        assert_eq!(sys.components.len(), 1);
        assert_eq!(sys.components[0].kind, ComponentKind::Closed);
        assert_eq!(sys.components[0].intersections, vec![2, 0, 0, 0, 0]);
    }

    #[test]
    fn parse_forms() {
        let d = PantsDecomposition::oprime4();
        assert_eq!(
            DtCoordinates::parse(&d, "5,0,1,1,0").unwrap(),
            DtCoordinates::parse(&d, "((5,0),0,1,1,0)").unwrap()
        );
        assert!(matches!(
            DtCoordinates::parse(&d, "((5,1),0,1,1,0)"),
            Err(DtError::NonzeroTwist { .. })
        ));
        assert!(matches!(
            DtCoordinates::parse(&d, "5,0,1"),
            Err(DtError::Length { .. })
        ));
        let c = DtCoordinates::parse(&d, "5,0,1,1,0").unwrap();
        assert_eq!(c.display(&d), "((5,0),0,1,1,0)");
    }

    #[test]
    fn bad_decompositions() {
        let r = PantsDecomposition::new(
            "x",
            strings(&["q"]),
            strings(&["a", "b", "c"]),
            vec![pants("P", "q", "a", "b"), pants("Q", "q", "c", "d")],
        );
        assert!(r.is_err());
    }

    #[test]
    fn json_input() {
        let v = serde_json::json!({"preset": "Oprime4", "coords": [3, 0, 1, 1, 0]});
        let input: DtInput = serde_json::from_value(v).unwrap();
        assert!(input.trace().unwrap().is_single_arc());
    }
}
