//! Canonical labeling of small weighted multigraphs.
//!
//! Individualization-refinement search: an ordered vertex partition is
//! refined until equitable, a vertex of the first non-singleton cell is
//! individualized, and the search recurses until the partition is discrete.
//! Each leaf yields a vertex order; the canonical form is the minimum over
//! leaves of `(trace, adjacency code)`, where the trace records the cell
//! sizes seen along the path. Leaves with equal keys give automorphisms,
//! which are used to skip equivalent children and to jump back to the node
//! where the two paths diverge.

use std::cmp::Ordering;

use super::StableGraph;

/// Isomorphism invariant of a [`StableGraph`]: equal iff isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    /// Sorted `(weight, degree)` pairs.
    profile: Vec<(u32, u32)>,
    /// Weights, loop counts and the upper triangle of the adjacency matrix
    /// in canonical vertex order.
    code: Vec<u32>,
}

type Partition = Vec<Vec<usize>>;

#[derive(Clone)]
struct Leaf {
    trace: Vec<Vec<usize>>,
    code: Vec<u32>,
    order: Vec<usize>,
    prefix: Vec<usize>,
}

impl Leaf {
    fn same_key(&self, trace: &[Vec<usize>], code: &[u32]) -> bool {
        self.trace == trace && self.code == code
    }
}

struct Search {
    n: usize,
    weight: Vec<u32>,
    adj: Vec<Vec<u32>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

pub(super) fn canonical_form(g: &StableGraph) -> CanonicalForm {
    let order = canonical_order(g);
    let n = g.vertex_count();
    let mut code = Vec::with_capacity(2 * n + n * n / 2);
    code.extend(order.iter().map(|&v| g.weight(v)));
    code.extend(order.iter().map(|&v| g.loops(v)));
    for i in 0..n {
        for j in i + 1..n {
            code.push(g.multiplicity(order[i], order[j]));
        }
    }
    let mut profile: Vec<(u32, u32)> = g.weights().iter().copied().zip(g.degrees()).collect();
    profile.sort_unstable();
    CanonicalForm { profile, code }
}

/// Vertex order (position → vertex) realizing the canonical form.
pub(super) fn canonical_order(g: &StableGraph) -> Vec<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let mut adj = vec![vec![0u32; n]; n];
    for (a, b, m) in g.edges() {
        adj[a][b] = m;
        adj[b][a] = m;
    }
    let mut search = Search {
        n,
        weight: g.weights().to_vec(),
        adj,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    let root = search.refine(search.initial_partition());
    let mut trace = vec![shape(&root)];
    search.descend(root, &mut Vec::new(), &mut trace);
    search.best.expect("search visits at least one leaf").order
}

fn shape(p: &Partition) -> Vec<usize> {
    p.iter().map(Vec::len).collect()
}

fn divergence(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search {
    fn initial_partition(&self) -> Partition {
        let degree: Vec<u32> = (0..self.n)
            .map(|v| (0..self.n).map(|w| self.adj[v][w]).sum::<u32>() + self.adj[v][v])
            .collect();
        let mut verts: Vec<usize> = (0..self.n).collect();
        let key = |v: usize| (self.weight[v], self.adj[v][v], degree[v]);
        verts.sort_by_key(|&v| (key(v), v));
        let mut cells: Partition = Vec::new();
        for v in verts {
            match cells.last_mut() {
                Some(c) if key(c[0]) == key(v) => c.push(v),
                _ => cells.push(vec![v]),
            }
        }
        cells
    }

    /// Split cells by each vertex's multiset of (cell, multiplicity) pairs
    /// until nothing changes. Cells are split in place, so singleton cells
    /// never move.
    fn refine(&self, mut p: Partition) -> Partition {
        loop {
            let mut cell_of = vec![0; self.n];
            for (i, c) in p.iter().enumerate() {
                for &v in c {
                    cell_of[v] = i;
                }
            }
            let mut out: Partition = Vec::with_capacity(p.len());
            let mut changed = false;
            for cell in &p {
                if cell.len() == 1 {
                    out.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u32)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig: Vec<(usize, u32)> = (0..self.n)
                            .filter(|&w| w != v && self.adj[v][w] > 0)
                            .map(|w| (cell_of[w], self.adj[v][w]))
                            .collect();
                        sig.sort_unstable();
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let before = out.len();
                for (i, (sig, v)) in keyed.iter().enumerate() {
                    if i > 0 && keyed[i - 1].0 == *sig {
                        out.last_mut().expect("cell started").push(*v);
                    } else {
                        out.push(vec![*v]);
                    }
                }
                if out.len() - before > 1 {
                    changed = true;
                }
            }
            p = out;
            if !changed {
                return p;
            }
        }
    }

    fn trace_vs_best(&self, trace: &[Vec<usize>]) -> Ordering {
        let Some(best) = &self.best else {
            return Ordering::Less;
        };
        for (i, level) in trace.iter().enumerate() {
            match best.trace.get(i) {
                None => return Ordering::Greater,
                Some(b) => match level.cmp(b) {
                    Ordering::Equal => {}
                    other => return other,
                },
            }
        }
        Ordering::Equal
    }

    /// Returns `Some(depth)` to abandon everything below the node at `depth`.
    fn descend(&mut self, p: Partition, prefix: &mut Vec<usize>, trace: &mut Vec<Vec<usize>>) -> Option<usize> {
        if self.trace_vs_best(trace) == Ordering::Greater {
            return None;
        }
        let Some(target) = p.iter().position(|c| c.len() > 1) else {
            return self.leaf(&p, prefix, trace);
        };
        let depth = prefix.len();
        let cell = p[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let orbit = self.orbits_fixing(prefix);
                if explored.iter().any(|&u| orbit.same(u, v)) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = p.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
            child.splice(target..=target, [vec![v], rest]);
            let child = self.refine(child);
            prefix.push(v);
            trace.push(shape(&child));
            let jump = self.descend(child, prefix, trace);
            prefix.pop();
            trace.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, p: &Partition, prefix: &[usize], trace: &[Vec<usize>]) -> Option<usize> {
        let order: Vec<usize> = p.iter().map(|c| c[0]).collect();
        let code = self.code(&order);
        let leaf = Leaf {
            trace: trace.to_vec(),
            code,
            order,
            prefix: prefix.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };
        if first.same_key(&leaf.trace, &leaf.code) {
            let jump = divergence(&first.prefix, &leaf.prefix);
            let auto = automorphism(&first.order, &leaf.order);
            self.automorphisms.push(auto);
            return Some(jump);
        }
        let best = self.best.as_ref().expect("best is set with first");
        if best.same_key(&leaf.trace, &leaf.code) {
            let jump = divergence(&best.prefix, &leaf.prefix);
            let auto = automorphism(&best.order, &leaf.order);
            self.automorphisms.push(auto);
            return Some(jump);
        }
        if (&leaf.trace, &leaf.code) < (&best.trace, &best.code) {
            self.best = Some(leaf);
        }
        None
    }

    fn code(&self, order: &[usize]) -> Vec<u32> {
        let mut code = Vec::with_capacity(self.n * (self.n + 1) / 2 + self.n);
        for &v in order {
            code.push(self.weight[v]);
            code.push(self.adj[v][v]);
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                code.push(self.adj[order[i]][order[j]]);
            }
        }
        code
    }

    fn orbits_fixing(&self, prefix: &[usize]) -> Orbits {
        let mut orbits = Orbits::new(self.n);
        for a in &self.automorphisms {
            if prefix.iter().all(|&v| a[v] == v) {
                for (v, &w) in a.iter().enumerate() {
                    orbits.union(v, w);
                }
            }
        }
        orbits
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        perm[a] = b;
    }
    perm
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Orbits {
        Orbits {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = v;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let root = |mut v: usize| {
            while self.parent[v] != v {
                v = self.parent[v];
            }
            v
        };
        root(a) == root(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_with_hub(outer: usize, cycle: usize) -> StableGraph {
        let mut g = StableGraph::with_weights(vec![0; outer + 1]);
        for v in 1..=outer {
            g.add_edge(0, v).unwrap();
        }
        for block in 0..outer / cycle {
            for i in 0..cycle {
                let a = 1 + block * cycle + i;
                let b = 1 + block * cycle + (i + 1) % cycle;
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    #[test]
    fn order_is_a_permutation() {
        let g = cycle_with_hub(12, 3);
        let mut order = canonical_order(&g);
        order.sort_unstable();
        assert_eq!(order, (0..13).collect::<Vec<_>>());
    }

    #[test]
    fn symmetric_graphs_finish_quickly() {
        // 30 interchangeable outer vertices; plain permutation search would
        // never terminate here.
        for cycle in [1, 2, 3, 5, 6, 10, 15, 30] {
            let g = cycle_with_hub(30, cycle);
            let perm: Vec<usize> = (0..31).map(|v| (v * 7) % 31).collect();
            assert_eq!(g.canonical_form(), g.relabel(&perm).canonical_form());
        }
    }

    #[test]
    fn cycle_lengths_are_distinguished() {
        let forms: Vec<CanonicalForm> = [1, 2, 3, 5, 6]
            .iter()
            .map(|&c| cycle_with_hub(30, c).canonical_form())
            .collect();
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                assert_ne!(forms[i], forms[j]);
            }
        }
    }

    #[test]
    fn petersen_relabeled() {
        let mut g = StableGraph::with_weights(vec![0; 10]);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        }
        let perm = [3, 7, 1, 9, 0, 4, 8, 2, 6, 5];
        assert_eq!(g.canonical_form(), g.relabel(&perm).canonical_form());
    }
}
