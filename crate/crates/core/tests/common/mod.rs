//! Slow reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::HashMap;

use strata_core::dehn_thurston::{ComponentKind, CurveSystem, PantsDecomposition};
use strata_core::graph::StableGraph;

// ---------------------------------------------------------------------------
// graph isomorphism by backtracking

fn vertex_class(g: &StableGraph, v: usize) -> (u32, u32, u32) {
    (g.weight(v), g.loops(v), g.degree(v))
}

/// Searches every weight, loop and degree preserving bijection.
pub fn brute_isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut ca: Vec<_> = (0..n).map(|v| vertex_class(a, v)).collect();
    let mut cb: Vec<_> = (0..n).map(|v| vertex_class(b, v)).collect();
    let (ka, kb) = (ca.clone(), cb.clone());
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return false;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(a, b, &ka, &kb, 0, &mut image, &mut used)
}

fn extend(
    a: &StableGraph,
    b: &StableGraph,
    ka: &[(u32, u32, u32)],
    kb: &[(u32, u32, u32)],
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == image.len() {
        return true;
    }
    for w in 0..image.len() {
        if used[w] || ka[v] != kb[w] {
            continue;
        }
        if (0..v).any(|u| a.multiplicity(u, v) != b.multiplicity(image[u], w)) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend(a, b, ka, kb, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    image[v] = usize::MAX;
    false
}

// ---------------------------------------------------------------------------
// curve systems by explicit hexagon chords

/// Arc counts `t[i][j]` in one pair of pants, symmetric.
pub type Counts = [[u32; 3]; 3];

/// Every count vector with the given totals whose arcs can be drawn
/// disjointly with at most one family of loops.
pub fn all_models(x: [u32; 3]) -> Vec<Counts> {
    let mut out = Vec::new();
    for t01 in 0..=x[0].min(x[1]) {
        for t02 in 0..=x[0].min(x[2]) {
            for t12 in 0..=x[1].min(x[2]) {
                let off = [t01 + t02, t01 + t12, t02 + t12];
                if (0..3).any(|i| off[i] > x[i] || (x[i] - off[i]) % 2 == 1) {
                    continue;
                }
                let diag: Vec<u32> = (0..3).map(|i| (x[i] - off[i]) / 2).collect();
                let loops: Vec<usize> = (0..3).filter(|&i| diag[i] > 0).collect();
                let ok = match loops[..] {
                    [] => true,
                    [i] => [t12, t02, t01][i] == 0,
                    _ => false,
                };
                if ok {
                    out.push([[diag[0], t01, t02], [t01, diag[1], t12], [t02, t12, diag[2]]]);
                }
            }
        }
    }
    out
}

/// `all_models` tabulated for every triple with entries up to `max`,
/// computed on demand beyond that.
pub struct ModelTable {
    max: u32,
    table: HashMap<[u32; 3], Counts>,
}

impl ModelTable {
    pub fn new(max: u32) -> ModelTable {
        let mut table = HashMap::new();
        for a in 0..=max {
            for b in 0..=max {
                for c in 0..=max {
                    if (a + b + c) % 2 == 1 {
                        continue;
                    }
                    let models = all_models([a, b, c]);
                    assert_eq!(models.len(), 1, "({a},{b},{c}) has {} models", models.len());
                    table.insert([a, b, c], models[0]);
                }
            }
        }
        ModelTable { max, table }
    }

    pub fn get(&self, x: [u32; 3]) -> Counts {
        if x.iter().all(|&v| v <= self.max) {
            return self.table[&x];
        }
        let models = all_models(x);
        assert_eq!(models.len(), 1, "{x:?} has {} models", models.len());
        models[0]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Boundary(usize),
    Seam(usize),
}

use Side::{Boundary as B, Seam as S};

// Sides of the two hexagons, each listed anticlockwise. Seam k runs
// between the two boundaries other than k.
const RED: [Side; 6] = [B(0), S(2), B(1), S(0), B(2), S(1)];
const WHITE: [Side; 6] = [B(0), S(1), B(2), S(0), B(1), S(2)];

fn index_of(hex: &[Side; 6], s: Side) -> usize {
    hex.iter().position(|&h| h == s).unwrap()
}

/// Places parallel families of chords in a hexagon without crossings.
/// Returns, for every side, the chord ids met along it anticlockwise.
fn layout(bundles: &[(usize, usize, u32)], first_id: usize) -> ([Vec<usize>; 6], usize) {
    let mut ends: [Vec<((usize, u32), usize)>; 6] = Default::default();
    let mut id = first_id;
    for &(a, b, count) in bundles {
        for c in 0..count {
            // farther anticlockwise sides are met first; parallel chords reverse
            ends[a].push(((6 - (b + 6 - a) % 6, c), id));
            ends[b].push(((6 - (a + 6 - b) % 6, count - 1 - c), id));
            id += 1;
        }
    }
    let mut sides: [Vec<usize>; 6] = Default::default();
    for (k, list) in ends.iter_mut().enumerate() {
        list.sort_unstable();
        sides[k] = list.iter().map(|&(_, id)| id).collect();
    }

    let mut spans = vec![(usize::MAX, 0); id - first_id];
    let mut pos = 0;
    for side in &sides {
        for &c in side {
            let span = &mut spans[c - first_id];
            if span.0 == usize::MAX {
                span.0 = pos;
            } else {
                span.1 = pos;
            }
            pos += 1;
        }
    }
    for (i, &(p, q)) in spans.iter().enumerate() {
        for &(r, s) in &spans[i + 1..] {
            let cross = (p < r && r < q && q < s) || (r < p && p < s && s < q);
            assert!(!cross, "chords cross in {bundles:?}");
        }
    }
    (sides, id)
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    parent[v] = r;
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    parent[ra] = rb;
}

/// A component as (boundary labels of its ends, intersections per label).
pub type OracleComponent = (Option<(String, String)>, Vec<u32>);

/// Components of the zero-twist curve system, found by drawing every pants
/// as a red and a white hexagon and following chords through seams and
/// pants curves. `None` when some pants has an odd total.
pub fn oracle_components(
    d: &PantsDecomposition,
    coords: &[u32],
    table: &ModelTable,
) -> Option<Vec<OracleComponent>> {
    let labels = d.labels();
    let value = |l: &str| coords[labels.iter().position(|x| x == l).unwrap()];

    // boundary points of every pants slot, in order along the curve
    let mut slot_points: Vec<[Vec<usize>; 3]> = Vec::new();
    let mut seam_pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut next = 0;
    for p in d.pants() {
        let x = [0, 1, 2].map(|s| value(&p.slots[s]));
        if x.iter().sum::<u32>() % 2 == 1 {
            return None;
        }
        let t = table.get(x);
        let mut red = Vec::new();
        let mut white = Vec::new();
        let r = |s| index_of(&RED, s);
        let w = |s| index_of(&WHITE, s);
        for i in 0..3 {
            for j in i + 1..3 {
                red.push((r(B(i)), r(B(j)), t[i][j]));
            }
            // a loop at i runs around boundary i+2 across the two seams touching it
            let k = (i + 1) % 3;
            red.push((r(B(i)), r(S(i)), t[i][i]));
            red.push((r(S(k)), r(B(i)), t[i][i]));
            white.push((w(S(i)), w(S(k)), t[i][i]));
        }
        let (red_sides, after_red) = layout(&red, next);
        let (white_sides, after_white) = layout(&white, after_red);
        next = after_white;

        for k in 0..3 {
            seam_pairs.push((
                red_sides[r(S(k))].clone(),
                white_sides[w(S(k))].clone(),
            ));
            assert!(white_sides[w(B(k))].is_empty());
        }
        slot_points.push([0, 1, 2].map(|i| red_sides[r(B(i))].clone()));
    }

    let mut parent: Vec<usize> = (0..next).collect();
    // seams are traversed in opposite directions by the two hexagons
    for (red, white) in &seam_pairs {
        assert_eq!(red.len(), white.len());
        for (p, &c) in red.iter().enumerate() {
            union(&mut parent, c, white[white.len() - 1 - p]);
        }
    }

    let occurrences = |label: &str| -> Vec<&Vec<usize>> {
        let mut out = Vec::new();
        for (pi, p) in d.pants().iter().enumerate() {
            for s in 0..3 {
                if p.slots[s] == label {
                    out.push(&slot_points[pi][s]);
                }
            }
        }
        out
    };
    for label in d.interior() {
        let sides = occurrences(label);
        let (a, b) = (sides[0], sides[1]);
        assert_eq!(a.len(), b.len());
        for (p, &c) in a.iter().enumerate() {
            union(&mut parent, c, b[b.len() - 1 - p]);
        }
    }

    let mut by_root: HashMap<usize, (Vec<u32>, Vec<usize>)> = HashMap::new();
    for (li, label) in labels.iter().enumerate() {
        let points = occurrences(label)[0];
        for &c in points {
            let root = find(&mut parent, c);
            let entry = by_root.entry(root).or_insert_with(|| (vec![0; labels.len()], Vec::new()));
            entry.0[li] += 1;
            if !d.is_interior(label) {
                entry.1.push(li);
            }
        }
    }
    let mut out: Vec<OracleComponent> = by_root
        .into_values()
        .map(|(counts, mut ends)| {
            ends.sort_unstable();
            let kind = match ends[..] {
                [] => None,
                [a, b] => Some((labels[a].clone(), labels[b].clone())),
                _ => panic!("component with {} ends", ends.len()),
            };
            (kind, counts)
        })
        .collect();
    out.sort();
    Some(out)
}

/// The library's components in the oracle's shape.
pub fn library_components(sys: &CurveSystem) -> Vec<OracleComponent> {
    let mut out: Vec<OracleComponent> = sys
        .components
        .iter()
        .map(|c| {
            let kind = match &c.kind {
                ComponentKind::Closed => None,
                ComponentKind::Arc(a, b) => Some((a.clone(), b.clone())),
            };
            (kind, c.intersections.clone())
        })
        .collect();
    out.sort();
    out
}

/// Calls `f` on every vector of `len` entries in `0..=max`.
pub fn for_each_vector(len: usize, max: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; len];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if v[i] < max {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// the dihedral group as permutations of the vertices of an n-gon

pub type Perm = Vec<u32>;

pub fn rot_perm(n: u32, a: i64) -> Perm {
    (0..n).map(|i| (i as i64 + a).rem_euclid(n as i64) as u32).collect()
}

pub fn flip_perm(n: u32) -> Perm {
    (0..n).map(|i| (-(i as i64)).rem_euclid(n as i64) as u32).collect()
}

/// `f ∘ g`.
pub fn compose(f: &Perm, g: &Perm) -> Perm {
    g.iter().map(|&i| f[i as usize]).collect()
}

pub fn invert(f: &Perm) -> Perm {
    let mut out = vec![0; f.len()];
    for (i, &j) in f.iter().enumerate() {
        out[j as usize] = i as u32;
    }
    out
}

pub fn perm_of(e: &strata_core::group::GroupElement) -> Perm {
    let r = rot_perm(e.n(), e.rot() as i64);
    if e.flip() {
        compose(&r, &flip_perm(e.n()))
    } else {
        r
    }
}

/// Evaluates a word letter by letter.
pub fn perm_of_word(n: u32, w: &strata_core::group::Word, value: &dyn Fn(&str) -> Perm) -> Perm {
    let mut acc = rot_perm(n, 0);
    for (name, e) in w.letters() {
        let base = value(name);
        let step = if *e < 0 { invert(&base) } else { base };
        for _ in 0..e.unsigned_abs() {
            acc = compose(&acc, &step);
        }
    }
    acc
}

/// Size of the permutation group generated by `gens`.
pub fn closure_size(n: u32, gens: &[Perm]) -> usize {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![rot_perm(n, 0)];
    seen.insert(rot_perm(n, 0));
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    seen.len()
}

// ---------------------------------------------------------------------------
// graph invariants straight from the edge list

pub fn genus_by_edges(g: &StableGraph) -> i64 {
    let w: i64 = (0..g.vertex_count()).map(|v| g.weight(v) as i64).sum();
    let e: i64 = g.edges().map(|(_, _, m)| m as i64).sum();
    w + e - g.vertex_count() as i64 + 1
}

pub fn stable_by_edges(g: &StableGraph) -> bool {
    let n = g.vertex_count();
    let mut deg = vec![0u32; n];
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b, m) in g.edges() {
        deg[a] += m;
        deg[b] += m;
        union(&mut parent, a, b);
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root) && (0..n).all(|v| g.weight(v) > 0 || deg[v] >= 3)
}
