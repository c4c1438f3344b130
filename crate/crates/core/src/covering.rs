//! Dual graph of the preimage of a multicurve under a finite group action.
//!
//! The input is already reduced to group data: for each complementary piece
//! its orbifold Euler characteristic and image subgroup `H_j`, for each curve
//! its image subgroup `I_γ` and holonomy element `c_γ`. Vertices of the dual
//! graph are the cosets `gH_j`, edges the cosets `gI_γ`, and the edge `gI_γ`
//! joins `gH_{j1}` to `g c_γ H_{j2}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, StabilityReport, StableGraph};
use crate::group::{DihedralGroup, GroupElement, GroupError, Subgroup};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceData {
    pub id: u32,
    pub chi: Rational,
    pub image: Subgroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Both sides of the curve lie in piece `j`.
    Interior(u32),
    /// The curve separates piece `j1` from piece `j2`, `j1 < j2`.
    Separating(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    pub id: String,
    pub kind: CurveKind,
    pub image: Subgroup,
    pub holonomy: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringData {
    pub group: DihedralGroup,
    pub pieces: Vec<PieceData>,
    pub curves: Vec<CurveData>,
    pub expected_genus: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    #[error("no pieces")]
    NoPieces,
    #[error("piece id {0} used twice")]
    DuplicatePiece(u32),
    #[error("curve id {0:?} used twice")]
    DuplicateCurve(String),
    #[error("piece {piece}: Euler characteristic {chi} is not negative")]
    NonNegativeChi { piece: u32, chi: String },
    #[error("{what} lives in D_{found}, expected D_{expected}")]
    WrongGroup {
        what: String,
        expected: u32,
        found: u32,
    },
    #[error("curve {curve:?} refers to unknown piece {piece}")]
    UnknownPiece { curve: String, piece: u32 },
    #[error("curve {curve:?}: separating pieces must be listed in increasing order, got ({j1}, {j2})")]
    SeparatingOrder { curve: String, j1: u32, j2: u32 },
    #[error("curve {curve:?}: {element} is in its image but moves the coset {coset} of piece {piece}")]
    NotContained {
        curve: String,
        piece: u32,
        element: String,
        coset: String,
    },
    #[error("curve {curve:?}: {element} conjugated by the holonomy leaves the image of piece {piece} (coset {coset})")]
    TargetNotContained {
        curve: String,
        piece: u32,
        element: String,
        coset: String,
    },
    #[error("curve {curve:?}: {element} does not preserve the endpoint pair {{H, cH}} of piece {piece}")]
    InteriorNotInvariant {
        curve: String,
        piece: u32,
        element: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("invalid covering data:\n{}", list(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("cannot read covering data: {0}")]
    Parse(String),
    #[error("piece {piece}: weight 1 - (|H| chi + D)/2 = {value} is not an integer")]
    NonIntegralWeight { piece: u32, value: Rational },
    #[error("piece {piece}: weight 1 - (|H| chi + D)/2 = {value} is negative")]
    NegativeWeight { piece: u32, value: Rational },
    #[error("piece {piece}: vertex {vertex} has degree {actual}, formula gives {formula}")]
    DegreeMismatch {
        piece: u32,
        vertex: usize,
        formula: Rational,
        actual: u32,
    },
    #[error("Riemann-Hurwitz genus 1 - |G| chi / 2 = {0} is not a nonnegative integer")]
    NonIntegralGenus(Rational),
    #[error("genus mismatch: dual graph {dual}, Riemann-Hurwitz {riemann_hurwitz}, expected {expected:?}")]
    GenusMismatch {
        dual: u32,
        riemann_hurwitz: u32,
        expected: Option<u32>,
    },
    #[error("dual graph: {0}")]
    Graph(#[from] GraphError),
}

fn list(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| format!("  - {d}")).collect::<Vec<_>>().join("\n")
}

/// `gH` identified by its minimal element.
pub fn coset_rep(g: &GroupElement, h: &Subgroup) -> GroupElement {
    h.iter().map(|x| *g * *x).min().expect("subgroups contain the identity")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLabel {
    pub piece: u32,
    pub coset: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeLabel {
    pub curve: String,
    pub coset: GroupElement,
    pub ends: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceSummary {
    pub piece: u32,
    pub vertices: u32,
    pub degree: u32,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub graph: StableGraph,
    pub vertices: Vec<VertexLabel>,
    pub edges: Vec<EdgeLabel>,
    pub pieces: Vec<PieceSummary>,
    pub genus: u32,
    pub riemann_hurwitz_genus: u32,
    /// `None` when the graph is stable.
    pub instability: Option<StabilityReport>,
}

impl CoveringData {
    /// The open stratum: one piece carrying the whole group, no curves.
    pub fn single_piece(group: DihedralGroup, chi: Rational) -> CoveringData {
        CoveringData {
            group,
            pieces: vec![PieceData {
                id: 1,
                chi,
                image: group.full(),
            }],
            curves: Vec::new(),
            expected_genus: None,
        }
    }

    pub fn piece(&self, id: u32) -> Option<&PieceData> {
        self.pieces.iter().find(|p| p.id == id)
    }

    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut out = Vec::new();
        let n = self.group.n();
        if self.pieces.is_empty() {
            out.push(Diagnostic::NoPieces);
        }
        let mut ids = BTreeSet::new();
        for p in &self.pieces {
            if !ids.insert(p.id) {
                out.push(Diagnostic::DuplicatePiece(p.id));
            }
            if p.chi >= Rational::from_integer(0) {
                out.push(Diagnostic::NonNegativeChi {
                    piece: p.id,
                    chi: p.chi.to_string(),
                });
            }
            if p.image.n() != n {
                out.push(Diagnostic::WrongGroup {
                    what: format!("image of piece {}", p.id),
                    expected: n,
                    found: p.image.n(),
                });
            }
        }
        let mut names = BTreeSet::new();
        for c in &self.curves {
            if !names.insert(c.id.clone()) {
                out.push(Diagnostic::DuplicateCurve(c.id.clone()));
            }
            let mut wrong = |what: &str, found: u32| {
                if found != n {
                    out.push(Diagnostic::WrongGroup {
                        what: format!("{what} of curve {:?}", c.id),
                        expected: n,
                        found,
                    });
                    true
                } else {
                    false
                }
            };
            let bad_image = wrong("image", c.image.n());
            let bad_hol = wrong("holonomy", c.holonomy.n());
            if bad_image || bad_hol {
                continue;
            }
            self.validate_curve(c, &mut out);
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn validate_curve(&self, c: &CurveData, out: &mut Vec<Diagnostic>) {
        let lookup = |j: u32, out: &mut Vec<Diagnostic>| {
            let p = self.piece(j);
            if p.is_none() {
                out.push(Diagnostic::UnknownPiece {
                    curve: c.id.clone(),
                    piece: j,
                });
            }
            p.filter(|p| p.image.n() == self.group.n())
        };
        let hol = c.holonomy;
        match c.kind {
            CurveKind::Interior(j) => {
                let Some(p) = lookup(j, out) else { return };
                let h = &p.image;
                let base: BTreeSet<GroupElement> =
                    [coset_rep(&self.group.identity(), h), coset_rep(&hol, h)].into();
                for x in c.image.iter() {
                    let moved: BTreeSet<GroupElement> =
                        [coset_rep(x, h), coset_rep(&(*x * hol), h)].into();
                    if moved != base {
                        out.push(Diagnostic::InteriorNotInvariant {
                            curve: c.id.clone(),
                            piece: j,
                            element: x.to_string(),
                        });
                        return;
                    }
                }
            }
            CurveKind::Separating(j1, j2) => {
                if j1 >= j2 {
                    out.push(Diagnostic::SeparatingOrder {
                        curve: c.id.clone(),
                        j1,
                        j2,
                    });
                }
                let (p1, p2) = (lookup(j1, out), lookup(j2, out));
                if let Some(p1) = p1 {
                    if let Some(x) = c.image.iter().find(|x| !p1.image.contains(x)) {
                        out.push(Diagnostic::NotContained {
                            curve: c.id.clone(),
                            piece: j1,
                            element: x.to_string(),
                            coset: coset_rep(x, &p1.image).to_string(),
                        });
                    }
                }
                if let Some(p2) = p2 {
                    let conj = c.image.conjugate_by(&hol);
                    let escaped = conj.iter().find(|x| !p2.image.contains(x)).copied();
                    if let Some(x) = escaped {
                        out.push(Diagnostic::TargetNotContained {
                            curve: c.id.clone(),
                            piece: j2,
                            element: x.to_string(),
                            coset: coset_rep(&x, &p2.image).to_string(),
                        });
                    }
                }
            }
        }
    }

    /// Endpoints of the edge `gI_γ` of curve number `curve`, computed from
    /// the representative `g` as given.
    pub fn edge_endpoints(&self, curve: usize, g: &GroupElement) -> (VertexLabel, VertexLabel) {
        let c = &self.curves[curve];
        let (j1, j2) = match c.kind {
            CurveKind::Interior(j) => (j, j),
            CurveKind::Separating(j1, j2) => (j1, j2),
        };
        let h1 = &self.piece(j1).expect("validated piece").image;
        let h2 = &self.piece(j2).expect("validated piece").image;
        (
            VertexLabel {
                piece: j1,
                coset: coset_rep(g, h1),
            },
            VertexLabel {
                piece: j2,
                coset: coset_rep(&(*g * c.holonomy), h2),
            },
        )
    }

    /// `D_j = |H_j| (Σ_separating 1/|I_γ| + 2 Σ_interior 1/|I_γ|)`.
    pub fn degree_formula(&self, piece: u32) -> Rational {
        let h = self.piece(piece).expect("known piece").image.order() as i64;
        let mut total = Rational::from_integer(0);
        for c in &self.curves {
            let inv = Rational::new(1, c.image.order() as i64);
            match c.kind {
                CurveKind::Interior(j) if j == piece => total += inv * 2,
                CurveKind::Separating(a, b) if a == piece || b == piece => total += inv,
                _ => {}
            }
        }
        total * h
    }

    /// `1 − (|H_j| χ_j + D_j) / 2`.
    pub fn weight_formula(&self, piece: u32) -> Rational {
        let p = self.piece(piece).expect("known piece");
        let h = Rational::from_integer(p.image.order() as i64);
        Rational::from_integer(1) - (h * p.chi + self.degree_formula(piece)) / 2
    }

    pub fn chi_total(&self) -> Rational {
        self.pieces.iter().map(|p| p.chi).sum()
    }

    pub fn riemann_hurwitz_genus(&self) -> Result<u32, CoveringError> {
        let g = Rational::from_integer(1)
            - Rational::from_integer(self.group.order() as i64) * self.chi_total() / 2;
        if !g.is_integer() || *g.numer() < 0 {
            return Err(CoveringError::NonIntegralGenus(g));
        }
        Ok(*g.numer() as u32)
    }

    pub fn dual_graph(&self) -> Result<DualGraph, CoveringError> {
        self.validate().map_err(CoveringError::Invalid)?;

        let mut vertices = Vec::new();
        let mut index: BTreeMap<(u32, GroupElement), usize> = BTreeMap::new();
        let mut weights = Vec::new();
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let w = self.weight_formula(p.id);
            if !w.is_integer() {
                return Err(CoveringError::NonIntegralWeight { piece: p.id, value: w });
            }
            if *w.numer() < 0 {
                return Err(CoveringError::NegativeWeight { piece: p.id, value: w });
            }
            let cosets = self.group.left_cosets(&p.image).expect("validated subgroup");
            for c in &cosets {
                index.insert((p.id, c.representative), vertices.len());
                vertices.push(VertexLabel {
                    piece: p.id,
                    coset: c.representative,
                });
                weights.push(*w.numer() as u32);
            }
            pieces.push(PieceSummary {
                piece: p.id,
                vertices: cosets.len() as u32,
                degree: 0,
                weight: *w.numer() as u32,
            });
        }

        let mut graph = StableGraph::with_weights(weights);
        let mut edges = Vec::new();
        for (ci, c) in self.curves.iter().enumerate() {
            for coset in self.group.left_cosets(&c.image).expect("validated subgroup") {
                let (a, b) = self.edge_endpoints(ci, &coset.representative);
                let ends = (index[&(a.piece, a.coset)], index[&(b.piece, b.coset)]);
                graph.add_edge(ends.0, ends.1)?;
                edges.push(EdgeLabel {
                    curve: c.id.clone(),
                    coset: coset.representative,
                    ends,
                });
            }
        }

        let degrees = graph.degrees();
        for summary in &mut pieces {
            let formula = self.degree_formula(summary.piece);
            for (v, label) in vertices.iter().enumerate() {
                if label.piece == summary.piece
                    && Rational::from_integer(degrees[v] as i64) != formula
                {
                    return Err(CoveringError::DegreeMismatch {
                        piece: summary.piece,
                        vertex: v,
                        formula,
                        actual: degrees[v],
                    });
                }
            }
            summary.degree = *formula.numer() as u32;
        }

        let genus = graph.genus()?;
        let rh = self.riemann_hurwitz_genus()?;
        if genus != rh || self.expected_genus.is_some_and(|e| e != genus) {
            return Err(CoveringError::GenusMismatch {
                dual: genus,
                riemann_hurwitz: rh,
                expected: self.expected_genus,
            });
        }
        let instability = graph.validate_stability().err();
        Ok(DualGraph {
            graph,
            vertices,
            edges,
            pieces,
            genus,
            riemann_hurwitz_genus: rh,
            instability,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("covering data serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<CoveringData, CoveringError> {
        let raw: RawCovering =
            serde_json::from_value(v.clone()).map_err(|e| CoveringError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V[{}; {}]", self.piece, self.coset)
    }
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    #[serde(rename = "type")]
    kind: String,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    id: u32,
    chi: String,
    image: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    id: String,
    kind: CurveKind,
    image: Vec<String>,
    holonomy: String,
}

#[derive(Serialize, Deserialize)]
struct RawCovering {
    group: RawGroup,
    pieces: Vec<RawPiece>,
    curves: Vec<RawCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected_genus: Option<u32>,
}

fn strings(h: &Subgroup) -> Vec<String> {
    h.iter().map(GroupElement::to_string).collect()
}

impl From<&CoveringData> for RawCovering {
    fn from(d: &CoveringData) -> Self {
        RawCovering {
            group: RawGroup {
                kind: "dihedral".into(),
                n: d.group.n(),
            },
            pieces: d
                .pieces
                .iter()
                .map(|p| RawPiece {
                    id: p.id,
                    chi: p.chi.to_string(),
                    image: strings(&p.image),
                })
                .collect(),
            curves: d
                .curves
                .iter()
                .map(|c| RawCurve {
                    id: c.id.clone(),
                    kind: c.kind,
                    image: strings(&c.image),
                    holonomy: c.holonomy.to_string(),
                })
                .collect(),
            expected_genus: d.expected_genus,
        }
    }
}

fn parse_subgroup(group: &DihedralGroup, what: &str, elems: &[String]) -> Result<Subgroup, CoveringError> {
    let parsed = elems
        .iter()
        .map(|s| group.parse_element(s))
        .collect::<Result<Vec<_>, GroupError>>()
        .map_err(|e| CoveringError::Parse(format!("{what}: {e}")))?;
    Subgroup::from_elements(group, &parsed).map_err(|e| CoveringError::Parse(format!("{what}: {e}")))
}

impl TryFrom<RawCovering> for CoveringData {
    type Error = CoveringError;

    fn try_from(raw: RawCovering) -> Result<Self, Self::Error> {
        if raw.group.kind != "dihedral" {
            return Err(CoveringError::Parse(format!(
                "unsupported group type {:?}",
                raw.group.kind
            )));
        }
        let group = DihedralGroup::new(raw.group.n).map_err(|e| CoveringError::Parse(e.to_string()))?;
        let mut pieces = Vec::new();
        for p in &raw.pieces {
            let chi: Rational = p
                .chi
                .trim()
                .parse()
                .map_err(|_| CoveringError::Parse(format!("piece {}: bad rational {:?}", p.id, p.chi)))?;
            pieces.push(PieceData {
                id: p.id,
                chi,
                image: parse_subgroup(&group, &format!("piece {}", p.id), &p.image)?,
            });
        }
        let mut curves = Vec::new();
        for c in &raw.curves {
            let what = format!("curve {:?}", c.id);
            curves.push(CurveData {
                id: c.id.clone(),
                kind: c.kind,
                image: parse_subgroup(&group, &what, &c.image)?,
                holonomy: group
                    .parse_element(&c.holonomy)
                    .map_err(|e| CoveringError::Parse(format!("{what}: {e}")))?,
            });
        }
        Ok(CoveringData {
            group,
            pieces,
            curves,
            expected_genus: raw.expected_genus,
        })
    }
}

impl Serialize for CoveringData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawCovering::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoveringData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCovering::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}
