//! The pyramidal action of `D_n` on a genus-`n` surface and the explicit
//! realization of every graph `G4(n, m, d)` as a dual graph.
//!
//! The quotient orbifold is a sphere with four cone points of order 2 and one
//! of order `n`. An arc `γ1` joining two order-2 points has holonomy pair
//! `(S, S_b)` with `S S_b = ρ^x`, and a closed curve `γ2` around `γ1` and a
//! further cone point cuts off the piece carrying `γ1`. The arc fixes `m`,
//! the curve fixes the cycle length `d`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::{CoveringData, CoveringError, CurveData, CurveKind, DualGraph, PieceData, Rational};
use crate::dehn_thurston::{trace_components, DtCoordinates, DtError, PantsDecomposition};
use crate::families::{make_g4, outer_cycles, FamilyError, FamilyTag};
use crate::graph::StableGraph;
use crate::group::{Assignment, DihedralGroup, GroupElement, GroupError, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PyramidalError {
    #[error("genus must be at least 3, got {0}")]
    GenusTooSmall(u32),
    #[error("arc parameter x must be positive")]
    ZeroX,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("epsilon must be 1 or -1, got {0}")]
    BadEpsilon(i64),
    #[error("sigma1 must be a reflection, got {0}")]
    NotAReflection(GroupElement),
    #[error("n/m = 1 forces d = 1, got d = {0}")]
    ImpossibleD(u32),
    #[error("the congruence for x0 needs n/m > 1")]
    TrivialQuotient,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("models belong to different groups")]
    Mismatch,
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Dt(#[from] DtError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl PyramidalError {
    /// True for failures that indicate a broken construction rather than
    /// bad parameters.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            PyramidalError::Covering(_) | PyramidalError::Dt(_) | PyramidalError::Internal(_)
        )
    }
}

fn internal(msg: String) -> PyramidalError {
    PyramidalError::Internal(msg)
}

fn group(n: u32) -> Result<DihedralGroup, PyramidalError> {
    if n < 3 {
        return Err(PyramidalError::GenusTooSmall(n));
    }
    Ok(DihedralGroup::new(n)?)
}

/// Images of the five standard generators of the orbifold group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PyramidalAction {
    pub n: u32,
    pub images: [GroupElement; 5],
}

pub fn pyramidal_epimorphism(n: u32) -> Result<PyramidalAction, PyramidalError> {
    let g = group(n)?;
    let rs = g.reflection(1);
    let images = [g.sigma(), rs, rs, rs, g.rho()];
    let product = images.iter().fold(g.identity(), |acc, x| acc * *x);
    if !product.is_identity() {
        return Err(internal(format!("generator product is {product}")));
    }
    for (i, x) in images.iter().take(4).enumerate() {
        if !(*x * *x).is_identity() {
            return Err(internal(format!("image of x{} is not an involution", i + 1)));
        }
    }
    if g.subgroup_generated(&images)?.order() != g.order() {
        return Err(internal("images do not generate the group".into()));
    }
    Ok(PyramidalAction { n, images })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// The arc `γ1` on the five-holed sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawArc", try_from = "RawArc")]
pub struct ArcModel {
    pub n: u32,
    pub x: u32,
    pub parity: Parity,
    /// Holonomy of the first half of the arc.
    pub s_a: GroupElement,
    /// Holonomy of the second half of the arc.
    pub s_b: GroupElement,
    pub m: u32,
    pub dt: DtCoordinates,
}

/// `((s r s)^(l-1) s) (r s) ((s r s)^(l-1) s)^-1`, the second-half holonomy
/// for `x = 2l`.
pub fn even_arc_word(l: i64) -> Word {
    let srs = Word::product([&Word::gen("s"), &Word::gen("r"), &Word::gen("s")]);
    let u = srs.pow(l - 1).then(&Word::gen("s"));
    Word::product([&u, &Word::gen("r"), &Word::gen("s"), &u.inverse()])
}

/// `(r s s)^l (r s) (r s s)^-l`, the first-half holonomy for `x = 2l + 1`.
pub fn odd_arc_word(l: i64) -> Word {
    let rss = Word::product([&Word::gen("r"), &Word::gen("s"), &Word::gen("s")]);
    Word::product([&rss.pow(l), &Word::gen("r"), &Word::gen("s"), &rss.pow(-l)])
}

pub fn arc_for_x(n: u32, x: u32) -> Result<ArcModel, PyramidalError> {
    let g = group(n)?;
    if x == 0 {
        return Err(PyramidalError::ZeroX);
    }
    let std = Assignment::standard(&g);
    let xi = x as i64;
    let o5 = PantsDecomposition::o5();
    let (parity, s_a, s_b, coords) = if x.is_multiple_of(2) {
        let s_b = g.reflection(1 - xi);
        let word = g.evaluate_word(&even_arc_word(xi / 2), &std)?;
        if word != s_b {
            return Err(internal(format!("even arc word gives {word}, expected {s_b}")));
        }
        (Parity::Even, g.reflection(1), s_b, [x, 0, 0, 1, 1, 0, 0])
    } else {
        let s_a = g.reflection(xi);
        let word = g.evaluate_word(&odd_arc_word(xi / 2), &std)?;
        if word != s_a {
            return Err(internal(format!("odd arc word gives {word}, expected {s_a}")));
        }
        (Parity::Odd, s_a, g.sigma(), [x, 0, 1, 1, 0, 0, 0])
    };
    let product = s_a * s_b;
    if product != g.rotation(xi) {
        return Err(internal(format!("S S_b = {product}, expected r^{x}")));
    }
    Ok(ArcModel {
        n,
        x,
        parity,
        s_a,
        s_b,
        m: product.order(),
        dt: DtCoordinates::for_decomposition(&o5, &coords)?,
    })
}

pub fn arc_for_m(n: u32, m: u32) -> Result<ArcModel, PyramidalError> {
    group(n)?;
    if m == 0 || !n.is_multiple_of(m) {
        return Err(FamilyError::NotADivisor { divisor: m, value: n }.into());
    }
    let arc = arc_for_x(n, n / m)?;
    if arc.m != m {
        return Err(internal(format!("arc for m = {m} has m = {}", arc.m)));
    }
    Ok(arc)
}

pub fn m_of_arc(arc: &ArcModel) -> u32 {
    (arc.s_a * arc.s_b).order()
}

fn check_epsilon(epsilon: i64) -> Result<(), PyramidalError> {
    if epsilon == 1 || epsilon == -1 {
        Ok(())
    } else {
        Err(PyramidalError::BadEpsilon(epsilon))
    }
}

fn check_reflection(g: &DihedralGroup, s: &GroupElement) -> Result<(), PyramidalError> {
    g.check(s)?;
    if s.is_rotation() {
        Err(PyramidalError::NotAReflection(*s))
    } else {
        Ok(())
    }
}

/// The word for `Φ(z)` in the generators `s1, s2`, by parity of `x`.
pub fn phi_z_word(x: u32) -> Word {
    let s1 = Word::gen("s1");
    let s2 = Word::gen("s2");
    let s1s2 = s1.then(&s2);
    if x == 0 {
        s2
    } else if x % 2 == 1 {
        let l = (x / 2) as i64;
        Word::product([&s1s2.pow(l), &s1, &s1s2.pow(-l)])
    } else {
        let l = (x / 2) as i64;
        let u = s1s2.pow(l - 1).then(&s1);
        Word::product([&u, &s2, &u.inverse()])
    }
}

/// `σ2` with `σ1 σ2 = ρ^(k+ε)`.
pub fn sigma2(g: &DihedralGroup, k: u32, epsilon: i64, sigma1: &GroupElement) -> GroupElement {
    *sigma1 * g.rotation(k as i64 + epsilon)
}

/// `ρ^((k+ε)(x−1)) σ1`, checked against the case-by-case word.
pub fn phi_z(n: u32, k: u32, epsilon: i64, sigma1: &GroupElement, x: u32) -> Result<GroupElement, PyramidalError> {
    let g = group(n)?;
    check_epsilon(epsilon)?;
    check_reflection(&g, sigma1)?;
    let closed = g.rotation((k as i64 + epsilon) * (x as i64 - 1)) * *sigma1;
    let assignment = Assignment::standard(&g)
        .with("s1", *sigma1)
        .with("s2", sigma2(&g, k, epsilon, sigma1));
    let by_cases = g.evaluate_word(&phi_z_word(x), &assignment)?;
    if by_cases != closed {
        return Err(internal(format!(
            "phi(z) for x = {x}: word gives {by_cases}, closed form {closed}"
        )));
    }
    Ok(closed)
}

/// `t` with `S σ1 = ρ^t`.
fn t_of(s_a: &GroupElement, sigma1: &GroupElement) -> Result<u32, PyramidalError> {
    let p = *s_a * *sigma1;
    if !p.is_rotation() {
        return Err(internal(format!("S sigma1 = {p} is not a rotation")));
    }
    Ok(p.rot())
}

fn inverse_mod(a: i64, k: i64) -> Option<i64> {
    let e = a.extended_gcd(&k);
    (e.gcd == 1).then(|| e.x.rem_euclid(k))
}

/// Least positive `x0 ≡ −(k+ε)^(−1)(d′ − t) + 1 (mod k)`, `k = n/m`,
/// `d′ = k/d`.
pub fn solve_x0(n: u32, m: u32, d: u32, epsilon: i64, sigma1: &GroupElement) -> Result<u32, PyramidalError> {
    let g = group(n)?;
    check_epsilon(epsilon)?;
    check_reflection(&g, sigma1)?;
    make_g4(n, m, d)?;
    let k = n / m;
    if k == 1 {
        return Err(PyramidalError::TrivialQuotient);
    }
    let arc = arc_for_m(n, m)?;
    let t = t_of(&arc.s_a, sigma1)? as i64;
    let (ki, dp) = (k as i64, (k / d) as i64);
    let inv = inverse_mod(ki + epsilon, ki).ok_or_else(|| internal(format!("k + ε not invertible mod {k}")))?;
    let r = (-inv * (dp - t) + 1).rem_euclid(ki);
    Ok(if r == 0 { k } else { r as u32 })
}

/// The closed curve `γ2'` on the four-holed sphere and the data it fixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawCurve", try_from = "RawCurve")]
pub struct CurveModel {
    pub n: u32,
    pub k: u32,
    pub epsilon: i64,
    pub sigma1: GroupElement,
    pub sigma2: GroupElement,
    pub t: u32,
    pub x0: u32,
    /// `Φ(z)`.
    pub s: GroupElement,
    /// `S s`.
    pub r: GroupElement,
    pub d: u32,
    pub dt: DtCoordinates,
}

impl CurveModel {
    /// `⟨ρ^k, s⟩`.
    pub fn piece_image(&self) -> Result<crate::group::Subgroup, PyramidalError> {
        let g = DihedralGroup::new(self.n)?;
        Ok(g.subgroup_generated(&[g.rotation(self.k as i64), self.s])?)
    }
}

pub fn curve_for_d(arc: &ArcModel, d: u32, epsilon: i64, sigma1: &GroupElement) -> Result<CurveModel, PyramidalError> {
    let n = arc.n;
    let g = group(n)?;
    check_epsilon(epsilon)?;
    check_reflection(&g, sigma1)?;
    let k = n / arc.m;
    if d == 0 || !k.is_multiple_of(d) {
        return Err(FamilyError::NotADivisor { divisor: d, value: k }.into());
    }
    let x0 = if k == 1 {
        if d != 1 {
            return Err(PyramidalError::ImpossibleD(d));
        }
        1
    } else {
        solve_x0(n, arc.m, d, epsilon, sigma1)?
    };
    let s = phi_z(n, k, epsilon, sigma1, x0)?;
    let sigma2 = sigma2(&g, k, epsilon, sigma1);
    if *sigma1 * sigma2 != g.rotation(k as i64 + epsilon) {
        return Err(internal("sigma1 sigma2 is not r^(k+ε)".into()));
    }
    let r = arc.s_a * s;
    if !r.is_rotation() {
        return Err(internal(format!("R = {r} is not a rotation")));
    }
    let coords = if x0 % 2 == 1 {
        [x0, 0, 1, 1, 0]
    } else {
        [x0, 1, 0, 1, 0]
    };
    let mut curve = CurveModel {
        n,
        k,
        epsilon,
        sigma1: *sigma1,
        sigma2,
        t: t_of(&arc.s_a, sigma1)?,
        x0,
        s,
        r,
        d: 0,
        dt: DtCoordinates::for_decomposition(&PantsDecomposition::oprime4(), &coords)?,
    };
    curve.d = d_of_pair(arc, &curve)?;
    if curve.d != d {
        return Err(internal(format!("constructed curve has d = {}, wanted {d}", curve.d)));
    }
    Ok(curve)
}

/// Order of `R` modulo the rotations of `⟨ρ^k, s⟩`.
pub fn d_of_pair(arc: &ArcModel, curve: &CurveModel) -> Result<u32, PyramidalError> {
    if arc.n != curve.n {
        return Err(PyramidalError::Mismatch);
    }
    let g = DihedralGroup::new(arc.n)?;
    let r = arc.s_a * curve.s;
    Ok(g.quotient_coset_order(&r, &curve.piece_image()?.rotations())?)
}

pub fn build_covering_data(arc: &ArcModel, curve: &CurveModel) -> Result<CoveringData, PyramidalError> {
    if arc.n != curve.n {
        return Err(PyramidalError::Mismatch);
    }
    let n = arc.n;
    let g = DihedralGroup::new(n)?;
    let rk = g.rotation(curve.k as i64);
    Ok(CoveringData {
        group: g,
        pieces: vec![
            PieceData {
                id: 1,
                chi: Rational::new(-1, 2),
                image: curve.piece_image()?,
            },
            PieceData {
                id: 2,
                chi: Rational::new(1, n as i64) - Rational::new(1, 2),
                image: g.full(),
            },
        ],
        curves: vec![
            CurveData {
                id: "g1".into(),
                kind: CurveKind::Interior(1),
                image: g.subgroup_generated(&[arc.s_a, arc.s_b])?,
                holonomy: arc.s_a,
            },
            CurveData {
                id: "g2".into(),
                kind: CurveKind::Separating(1, 2),
                image: g.subgroup_generated(&[rk * curve.s])?,
                holonomy: g.identity(),
            },
        ],
        expected_genus: Some(n),
    })
}

/// Everything needed to re-check one realization of `G4(n, m, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationWitness {
    pub target: FamilyTag,
    pub arc: ArcModel,
    pub curve: CurveModel,
    pub covering: CoveringData,
    pub graph: StableGraph,
}

pub fn realize_g4(n: u32, m: u32, d: u32, epsilon: i64, sigma1: &GroupElement) -> Result<RealizationWitness, PyramidalError> {
    group(n)?;
    let target_graph = make_g4(n, m, d)?;
    let arc = arc_for_m(n, m)?;
    let curve = curve_for_d(&arc, d, epsilon, sigma1)?;
    let covering = build_covering_data(&arc, &curve)?;
    let dual = covering.dual_graph()?;
    if !dual.graph.is_isomorphic(&target_graph) {
        return Err(internal(format!("dual graph is not G4({n},{m},{d})")));
    }
    Ok(RealizationWitness {
        target: FamilyTag::G4 { n, m, d },
        arc,
        curve,
        covering,
        graph: dual.graph,
    })
}

/// `realize_g4` with `ε = 1`, `σ1 = σ`.
pub fn realize_g4_default(n: u32, m: u32, d: u32) -> Result<RealizationWitness, PyramidalError> {
    let sigma = group(n)?.sigma();
    realize_g4(n, m, d, 1, &sigma)
}

/// The hub and the shape facts every realized `G4` graph must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct G4Shape {
    pub vertices: usize,
    pub edges: u32,
    pub hub_degree: u32,
    pub outer_degrees: Vec<u32>,
    pub outer_cycles: Vec<usize>,
}

pub fn g4_shape(dual: &DualGraph, hub_piece: u32) -> Option<G4Shape> {
    let hub = dual.vertices.iter().position(|v| v.piece == hub_piece)?;
    let deg = dual.graph.degrees();
    Some(G4Shape {
        vertices: dual.graph.vertex_count(),
        edges: dual.graph.edge_count(),
        hub_degree: deg[hub],
        outer_degrees: (0..deg.len()).filter(|&v| v != hub).map(|v| deg[v]).collect(),
        outer_cycles: outer_cycles(&dual.graph, hub)?,
    })
}

impl RealizationWitness {
    /// Re-derives every stored quantity from the witness alone.
    pub fn check(&self) -> Result<(), PyramidalError> {
        let FamilyTag::G4 { n, m, d } = self.target else {
            return Err(internal(format!("target {} is not a G4 graph", self.target)));
        };
        let g = group(n)?;
        let arc = &self.arc;
        let curve = &self.curve;
        if arc.n != n || curve.n != n || self.covering.group.n() != n {
            return Err(PyramidalError::Mismatch);
        }
        if arc.s_a * arc.s_b != g.rotation(arc.x as i64) || m_of_arc(arc) != m || arc.m != m {
            return Err(internal("arc holonomy does not give a rotation of order m".into()));
        }
        if curve.k != n / m || curve.r != arc.s_a * curve.s || !curve.r.is_rotation() {
            return Err(internal("curve data inconsistent with the arc".into()));
        }
        if phi_z(n, curve.k, curve.epsilon, &curve.sigma1, curve.x0)? != curve.s {
            return Err(internal("stored phi(z) differs from the closed form".into()));
        }
        if d_of_pair(arc, curve)? != d || curve.d != d {
            return Err(internal("coset order of R differs from d".into()));
        }
        for (decomp, dt) in [
            (PantsDecomposition::o5(), &arc.dt),
            (PantsDecomposition::oprime4(), &curve.dt),
        ] {
            if !trace_components(&decomp, dt)?.is_single_arc() {
                return Err(internal(format!(
                    "{} does not trace to a single arc",
                    dt.display(&decomp)
                )));
            }
        }
        if self.covering != build_covering_data(arc, curve)? {
            return Err(internal("covering data does not match the models".into()));
        }
        let dual = self.covering.dual_graph()?;
        if dual.graph != self.graph {
            return Err(internal("stored graph differs from the computed dual graph".into()));
        }
        if !self.graph.is_isomorphic(&make_g4(n, m, d)?) {
            return Err(internal(format!("graph is not G4({n},{m},{d})")));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawArc {
    n: u32,
    x: u32,
    parity: Parity,
    #[serde(rename = "S")]
    s_a: String,
    #[serde(rename = "S_b")]
    s_b: String,
    m: u32,
    dt: Vec<u32>,
}

impl From<ArcModel> for RawArc {
    fn from(a: ArcModel) -> Self {
        RawArc {
            n: a.n,
            x: a.x,
            parity: a.parity,
            s_a: a.s_a.to_string(),
            s_b: a.s_b.to_string(),
            m: a.m,
            dt: a.dt.0,
        }
    }
}

impl TryFrom<RawArc> for ArcModel {
    type Error = PyramidalError;

    fn try_from(r: RawArc) -> Result<Self, Self::Error> {
        let g = DihedralGroup::new(r.n)?;
        Ok(ArcModel {
            n: r.n,
            x: r.x,
            parity: r.parity,
            s_a: g.parse_element(&r.s_a)?,
            s_b: g.parse_element(&r.s_b)?,
            m: r.m,
            dt: DtCoordinates::for_decomposition(&PantsDecomposition::o5(), &r.dt)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    n: u32,
    k: u32,
    epsilon: i64,
    sigma1: String,
    sigma2: String,
    t: u32,
    x0: u32,
    s: String,
    #[serde(rename = "R")]
    r: String,
    d: u32,
    dt: Vec<u32>,
}

impl From<CurveModel> for RawCurve {
    fn from(c: CurveModel) -> Self {
        RawCurve {
            n: c.n,
            k: c.k,
            epsilon: c.epsilon,
            sigma1: c.sigma1.to_string(),
            sigma2: c.sigma2.to_string(),
            t: c.t,
            x0: c.x0,
            s: c.s.to_string(),
            r: c.r.to_string(),
            d: c.d,
            dt: c.dt.0,
        }
    }
}

impl TryFrom<RawCurve> for CurveModel {
    type Error = PyramidalError;

    fn try_from(r: RawCurve) -> Result<Self, Self::Error> {
        let g = DihedralGroup::new(r.n)?;
        Ok(CurveModel {
            n: r.n,
            k: r.k,
            epsilon: r.epsilon,
            sigma1: g.parse_element(&r.sigma1)?,
            sigma2: g.parse_element(&r.sigma2)?,
            t: r.t,
            x0: r.x0,
            s: g.parse_element(&r.s)?,
            r: g.parse_element(&r.r)?,
            d: r.d,
            dt: DtCoordinates::for_decomposition(&PantsDecomposition::oprime4(), &r.dt)?,
        })
    }
}

impl std::fmt::Display for PyramidalAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|g| g.to_string()).collect();
        write!(f, "D_{}: ({})", self.n, parts.join(", "))
    }
}
