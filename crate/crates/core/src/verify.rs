//! Self-checks over whole parameter ranges. Each check is a pure function of
//! one parameter value, so callers can run them in parallel and sort.

use serde::Serialize;

use crate::covering::CoveringData;
use crate::dehn_thurston::{trace_components, ComponentKind, DtCoordinates, PantsDecomposition};
use crate::families::{divisors, enumerate_boundary, g2_edges, make_g4};
use crate::group::{Assignment, DihedralGroup, GroupElement};
use crate::pyramidal::{
    arc_for_m, arc_for_x, build_covering_data, curve_for_d, even_arc_word, g4_shape, odd_arc_word, phi_z,
    phi_z_word, sigma2, G4Shape,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Case {
    pub n: u32,
    pub m: u32,
    pub d: u32,
    pub epsilon: i64,
    /// `σ1 = ρ^sigma1 σ`.
    pub sigma1: u32,
}

/// All `(n, m, d)` with `3 <= n <= max_n`, `m | n`, `d | n/m`.
pub fn g4_triples(max_n: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        for m in divisors(n) {
            for d in divisors(n / m) {
                out.push((n, m, d));
            }
        }
    }
    out
}

/// Realization cases in parameter order; with `sweep`, every `ε` and `σ1`.
pub fn realization_cases(max_n: u32, sweep: bool) -> Vec<Case> {
    let mut out = Vec::new();
    for (n, m, d) in g4_triples(max_n) {
        if sweep {
            for epsilon in [-1, 1] {
                for sigma1 in 0..n {
                    out.push(Case { n, m, d, epsilon, sigma1 });
                }
            }
        } else {
            out.push(Case { n, m, d, epsilon: 1, sigma1: 0 });
        }
    }
    out
}

/// Closed-form shape of `G4(n, m, d)`.
pub fn expected_shape(n: u32, m: u32, d: u32) -> G4Shape {
    let k = (n / m) as usize;
    G4Shape {
        vertices: k + 1,
        edges: n + n / m,
        hub_degree: n,
        outer_degrees: vec![m + 2; k],
        outer_cycles: vec![d as usize; k / d as usize],
    }
}

/// Runs the whole chain for one case and checks every derived quantity.
pub fn check_case(c: &Case) -> Result<(), String> {
    let g = DihedralGroup::new(c.n).map_err(|e| e.to_string())?;
    let sigma1 = g.reflection(c.sigma1 as i64);
    let arc = arc_for_m(c.n, c.m).map_err(|e| e.to_string())?;
    let curve = curve_for_d(&arc, c.d, c.epsilon, &sigma1).map_err(|e| e.to_string())?;
    let data = build_covering_data(&arc, &curve).map_err(|e| e.to_string())?;
    let dual = data.dual_graph().map_err(|e| e.to_string())?;
    let target = make_g4(c.n, c.m, c.d).map_err(|e| e.to_string())?;
    if !dual.graph.is_isomorphic(&target) {
        return Err("dual graph not isomorphic to G4".into());
    }
    if dual.genus != c.n || dual.riemann_hurwitz_genus != c.n {
        return Err(format!(
            "genus {} / Riemann-Hurwitz {} instead of {}",
            dual.genus, dual.riemann_hurwitz_genus, c.n
        ));
    }
    let shape = g4_shape(&dual, 2).ok_or("outer edges do not form cycles")?;
    let expected = expected_shape(c.n, c.m, c.d);
    if shape != expected {
        return Err(format!("shape {shape:?}, expected {expected:?}"));
    }
    let loops = dual
        .edges
        .iter()
        .filter(|e| e.curve == "g1")
        .all(|e| e.ends.0 == e.ends.1);
    if loops != (c.d == 1) {
        return Err(format!("g1 edges are loops: {loops}, but d = {}", c.d));
    }
    if dual.instability.is_some() {
        return Err("dual graph is not stable".into());
    }
    for (decomp, dt) in [
        (PantsDecomposition::o5(), &arc.dt),
        (PantsDecomposition::oprime4(), &curve.dt),
    ] {
        let sys = trace_components(&decomp, dt).map_err(|e| e.to_string())?;
        if !sys.is_single_arc() {
            return Err(format!("{} is not a single arc", dt.display(&decomp)));
        }
    }
    Ok(())
}

/// Genus, stability and pairwise distinctness of the catalog for genus `n`.
pub fn check_families(n: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let strata = match enumerate_boundary(n) {
        Ok(s) => s,
        Err(e) => return vec![e.to_string()],
    };
    for s in &strata {
        let tag = s.tags[0];
        if s.graph.genus() != Ok(n) {
            failures.push(format!("{tag}: genus {:?}", s.graph.genus()));
        }
        if !s.graph.is_stable() {
            failures.push(format!("{tag}: not stable"));
        }
    }
    for i in 0..strata.len() {
        for j in i + 1..strata.len() {
            if strata[i].graph.is_isomorphic(&strata[j].graph) {
                failures.push(format!("{} and {} are isomorphic", strata[i].tags[0], strata[j].tags[0]));
            }
        }
    }
    for k in 1..=n {
        let e = g2_edges(n, k);
        if e > n + 1 || !(n + 1 - e).is_multiple_of(2) {
            failures.push(format!("G2({n},{k}): E = {e} gives no integral weight"));
        }
    }
    failures
}

/// Arc conjugation identities for `l <= max_l` and the case words for
/// `Φ(z)` with `x <= 2k + 2`, every `m | n`, `ε` and `σ1`.
pub fn check_words(n: u32, max_l: i64) -> Vec<String> {
    let mut failures = Vec::new();
    let g = DihedralGroup::new(n).expect("n >= 1");
    let std = Assignment::standard(&g);
    for l in 1..=max_l {
        let even = g.evaluate_word(&even_arc_word(l), &std).expect("r, s assigned");
        if even != g.reflection(1 - 2 * l) {
            failures.push(format!("n={n} l={l}: even arc word gives {even}"));
        }
        let odd = g.evaluate_word(&odd_arc_word(l), &std).expect("r, s assigned");
        if odd != g.reflection(2 * l + 1) {
            failures.push(format!("n={n} l={l}: odd arc word gives {odd}"));
        }
    }
    for m in divisors(n) {
        let k = n / m;
        for epsilon in [-1i64, 1] {
            for j in 0..n {
                let s1 = g.reflection(j as i64);
                let a = Assignment::standard(&g)
                    .with("s1", s1)
                    .with("s2", sigma2(&g, k, epsilon, &s1));
                for x in 0..=2 * k + 2 {
                    let word = g.evaluate_word(&phi_z_word(x), &a).expect("s1, s2 assigned");
                    let closed = g.rotation((k as i64 + epsilon) * (x as i64 - 1)) * s1;
                    if word != closed || phi_z(n, k, epsilon, &s1, x).ok() != Some(closed) {
                        failures.push(format!("n={n} k={k} ε={epsilon} σ1=r^{j} s x={x}: {word} vs {closed}"));
                    }
                }
            }
        }
    }
    failures
}

/// Group axioms over all of `D_n`, and closure and Lagrange for the
/// subgroups generated by every pair of elements.
pub fn check_group(n: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let g = DihedralGroup::new(n).expect("n >= 1");
    let els: Vec<GroupElement> = g.elements().collect();
    let e = g.identity();
    for &a in &els {
        if a * e != a || e * a != a || a * a.inverse() != e || a.inverse() * a != e {
            failures.push(format!("D_{n}: identity or inverse fails at {a}"));
        }
        for &b in &els {
            let ab = a * b;
            for &c in &els {
                if ab * c != a * (b * c) {
                    failures.push(format!("D_{n}: ({a})({b})({c}) not associative"));
                }
            }
        }
    }
    for (i, &a) in els.iter().enumerate() {
        for &b in &els[i..] {
            let h = g.subgroup_generated(&[a, b]).expect("nonempty generators");
            if !(2 * n).is_multiple_of(h.order()) {
                failures.push(format!("D_{n}: <{a}, {b}> has order {}", h.order()));
            }
            if h.iter().any(|x| h.iter().any(|y| !h.contains(&(*x * *y)))) || !h.contains(&e) {
                failures.push(format!("D_{n}: <{a}, {b}> not closed"));
            }
            if a.flip() && b.flip() && h.order() != 2 * (a * b).order() {
                failures.push(format!("D_{n}: <{a}, {b}> has order {}", h.order()));
            }
        }
    }
    failures
}

/// The arc and curve coordinates used by the construction trace to single
/// arcs with the expected endpoints.
pub fn check_tracer(max_x: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let o5 = PantsDecomposition::o5();
    let op = PantsDecomposition::oprime4();
    for x in 1..=max_x {
        let arc = arc_for_x(3, x).expect("x >= 1").dt;
        let want = if x % 2 == 0 { ("p2", "p3") } else { ("p1", "p2") };
        match trace_components(&o5, &arc) {
            Ok(sys) if sys.arc_endpoints() == Some(want) => {}
            other => failures.push(format!("arc x={x}: {other:?}")),
        }
    }
    for x in 0..=max_x {
        let coords = if x % 2 == 1 { [x, 0, 1, 1, 0] } else { [x, 1, 0, 1, 0] };
        let want = if x % 2 == 1 { ("p2'", "p3'") } else { ("p1'", "p3'") };
        let dt = DtCoordinates::for_decomposition(&op, &coords).expect("five labels");
        match trace_components(&op, &dt) {
            Ok(sys) if sys.arc_endpoints() == Some(want) => {}
            other => failures.push(format!("curve x={x}: {other:?}")),
        }
    }
    failures
}

/// Every admissible vector with entries `<= max`: components account for
/// every intersection exactly once.
pub fn check_tracer_totals(decomp: &PantsDecomposition, max: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let len = decomp.labels().len();
    let mut v = vec![0u32; len];
    loop {
        let dt = DtCoordinates(v.clone());
        if crate::dehn_thurston::check_admissible(decomp, &dt).is_ok() {
            match trace_components(decomp, &dt) {
                Ok(sys) => {
                    let mut sum = vec![0; len];
                    for c in &sys.components {
                        for (s, x) in sum.iter_mut().zip(&c.intersections) {
                            *s += x;
                        }
                        let ends = matches!(c.kind, ComponentKind::Arc(..));
                        let on_boundary: u32 = c.intersections[decomp.interior().len()..].iter().sum();
                        if ends != (on_boundary > 0) {
                            failures.push(format!("{v:?}: component {c:?} has inconsistent ends"));
                        }
                    }
                    if sum != v {
                        failures.push(format!("{v:?}: components sum to {sum:?}"));
                    }
                }
                Err(e) => failures.push(format!("{v:?}: {e}")),
            }
        }
        let mut i = 0;
        while i < len && v[i] == max {
            v[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
        v[i] += 1;
    }
    failures
}

/// The open stratum: one piece, no curves, a single vertex of weight `n`.
pub fn check_identity_stratum(n: u32) -> Vec<String> {
    let g = DihedralGroup::new(n).expect("n >= 1");
    let chi = crate::covering::Rational::new(1 - n as i64, n as i64);
    let data = CoveringData::single_piece(g, chi);
    match data.dual_graph() {
        Ok(d) if d.graph.vertex_count() == 1 && d.graph.edge_count() == 0 && d.graph.weight(0) == n => Vec::new(),
        other => vec![format!("n={n}: {other:?}")],
    }
}
