//! Equivariant maps from gain graphs into the tree, energy descent and the
//! contraction of flat edges.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::arith::LaurentSeries;
use crate::bttree::{act, distance, geodesic, geodesic_point, midpoint, LMatrix, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GainEdge {
    pub from: usize,
    pub to: usize,
    pub gain: LMatrix,
    pub label: String,
}

/// A connected graph whose directed edges carry SL(2) elements. An edge
/// `u -> v` with gain `g` asks for `a(u) = g a(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GainGraph {
    names: Vec<String>,
    edges: Vec<GainEdge>,
}

impl GainGraph {
    pub fn new(names: Vec<String>, edges: Vec<GainEdge>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::DegenerateInput("gain graph has no vertices".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Invalid(format!("duplicate graph vertex '{n}'")));
            }
        }
        for e in &edges {
            if e.from >= names.len() || e.to >= names.len() {
                return Err(Error::Invalid(format!("edge {} refers to a missing vertex", e.label)));
            }
            if !e.gain.det().congruent(&LaurentSeries::one(e.gain.a.modulus())) {
                return Err(Error::DeterminantNotOne(format!("edge gain {}", e.label)));
            }
        }
        let g = GainGraph { names, edges };
        if g.components().iter().collect::<BTreeSet<_>>().len() != 1 {
            return Err(Error::Invalid("gain graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[GainEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn modulus(&self) -> Option<u32> {
        self.edges.first().map(|e| e.gain.a.modulus())
    }

    /// Same graph with every gain conjugated to `h g h^{-1}`.
    pub fn conjugated(&self, h: &LMatrix) -> GainGraph {
        let hinv = h.inverse();
        let edges = self
            .edges
            .iter()
            .map(|e| GainEdge { gain: h.mul(&e.gain).mul(&hinv), ..e.clone() })
            .collect();
        GainGraph { names: self.names.clone(), edges }
    }

    fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.names.len());
        for e in &self.edges {
            uf.union(e.from, e.to);
        }
        (0..self.names.len()).map(|i| uf.find(i)).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAssignment(Vec<Vertex>);

impl TreeAssignment {
    pub fn new(graph: &GainGraph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() != graph.vertex_count() {
            return Err(Error::Invalid(format!(
                "assignment has {} vertices, graph has {}",
                vertices.len(),
                graph.vertex_count()
            )));
        }
        Ok(TreeAssignment(vertices))
    }

    /// Every graph vertex at the standard vertex.
    pub fn constant(graph: &GainGraph, v: &Vertex) -> Self {
        TreeAssignment(vec![v.clone(); graph.vertex_count()])
    }

    pub fn get(&self, u: usize) -> &Vertex {
        &self.0[u]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn translated(&self, h: &LMatrix) -> Result<Self> {
        Ok(TreeAssignment(self.0.iter().map(|v| act(h, v)).collect::<Result<_>>()?))
    }

    /// Vertexwise midpoints; `None` if some pair is at odd distance.
    pub fn midpoint_with(&self, o: &Self) -> Option<Self> {
        self.0.iter().zip(&o.0).map(|(v, w)| midpoint(v, w)).collect::<Option<Vec<_>>>().map(TreeAssignment)
    }
}

pub fn edge_displacements(g: &GainGraph, a: &TreeAssignment) -> Result<Vec<u64>> {
    g.edges.iter().map(|e| Ok(distance(a.get(e.from), &act(&e.gain, a.get(e.to))?))).collect()
}

/// Sum over edges of the squared displacement `d(a(u), g a(v))^2`.
pub fn energy(g: &GainGraph, a: &TreeAssignment) -> Result<u64> {
    Ok(edge_displacements(g, a)?.iter().map(|d| d * d).sum())
}

/// Cost of placing a block: squared distances to fixed targets plus squared
/// displacements of loop gains.
struct LocalProblem {
    targets: Vec<Vertex>,
    loops: Vec<LMatrix>,
}

impl LocalProblem {
    fn cost(&self, x: &Vertex) -> Result<u64> {
        let mut c: u64 = self.targets.iter().map(|y| distance(x, y).pow(2)).sum();
        for g in &self.loops {
            c += distance(x, &act(g, x)?).pow(2);
        }
        Ok(c)
    }

    /// Minimizer over the subtree spanned by the targets and, for each loop `g`,
    /// the midpoint of `[x, g x]`, which lies on the minimal set of `g`.
    /// Projecting onto this subtree never increases any term.
    fn best(&self, here: &Vertex) -> Result<Vertex> {
        let mut anchors = self.targets.clone();
        for h in &self.loops {
            let moved = act(h, here)?;
            let d = distance(here, &moved);
            anchors.push(geodesic_point(here, &moved, d / 2));
        }
        if anchors.is_empty() {
            return Ok(here.clone());
        }
        let mut hull = BTreeSet::new();
        for s in &anchors {
            hull.extend(geodesic(&anchors[0], s).vertices().iter().cloned());
        }
        let mut best: Option<(u64, Vertex)> = None;
        for x in hull {
            let c = self.cost(&x)?;
            if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                best = Some((c, x));
            }
        }
        Ok(best.expect("hull is nonempty").1)
    }
}

/// A set of graph vertices moved rigidly: `a(v) = frame[v] a(root)`.
struct Block {
    root: usize,
    frames: Vec<Option<LMatrix>>,
    tree_edges: BTreeSet<usize>,
}

impl Block {
    fn single(g: &GainGraph, u: usize) -> Block {
        let mut frames = vec![None; g.vertex_count()];
        let id = g.edges.first().map(|e| crate::matrix::Matrix2::identity_like(&e.gain.a));
        frames[u] = id;
        Block { root: u, frames, tree_edges: BTreeSet::new() }
    }

    fn problem(&self, g: &GainGraph, a: &TreeAssignment) -> Result<LocalProblem> {
        let mut targets = Vec::new();
        let mut loops = Vec::new();
        for (k, e) in g.edges.iter().enumerate() {
            if self.tree_edges.contains(&k) {
                continue;
            }
            match (&self.frames[e.from], &self.frames[e.to]) {
                (Some(fu), Some(fv)) => loops.push(fu.inverse().mul(&e.gain).mul(fv)),
                (Some(fu), None) => targets.push(act(&fu.inverse().mul(&e.gain), a.get(e.to))?),
                (None, Some(fv)) => targets.push(act(&fv.inverse().mul(&e.gain.inverse()), a.get(e.from))?),
                (None, None) => {}
            }
        }
        Ok(LocalProblem { targets, loops })
    }

    /// Moves the block if that strictly lowers the energy.
    fn improve(&self, g: &GainGraph, a: &mut TreeAssignment) -> Result<bool> {
        let problem = self.problem(g, a)?;
        let here = a.get(self.root).clone();
        let cand = problem.best(&here)?;
        if cand == here || problem.cost(&cand)? >= problem.cost(&here)? {
            return Ok(false);
        }
        for (v, f) in self.frames.iter().enumerate() {
            if let Some(f) = f {
                a.0[v] = act(f, &cand)?;
            }
        }
        Ok(true)
    }
}

/// Connected components of the zero-displacement edges with more than one
/// vertex, each with frames along a spanning tree.
fn flat_blocks(g: &GainGraph, a: &TreeAssignment) -> Result<Vec<Block>> {
    let disp = edge_displacements(g, a)?;
    let mut placed = vec![false; g.vertex_count()];
    let mut blocks = Vec::new();
    for root in 0..g.vertex_count() {
        if placed[root] {
            continue;
        }
        let mut block = Block::single(g, root);
        placed[root] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for (k, e) in g.edges.iter().enumerate() {
                if disp[k] != 0 || e.from == e.to {
                    continue;
                }
                let (fu, fv) = (block.frames[e.from].clone(), block.frames[e.to].clone());
                match (fu, fv) {
                    (Some(fu), None) if !placed[e.to] => {
                        block.frames[e.to] = Some(e.gain.inverse().mul(&fu));
                        placed[e.to] = true;
                    }
                    (None, Some(fv)) if !placed[e.from] => {
                        block.frames[e.from] = Some(e.gain.mul(&fv));
                        placed[e.from] = true;
                    }
                    _ => continue,
                }
                block.tree_edges.insert(k);
                grew = true;
            }
        }
        if !block.tree_edges.is_empty() {
            blocks.push(block);
        }
    }
    Ok(blocks)
}

/// Best position for graph vertex `u` with all other positions fixed.
pub fn local_update(g: &GainGraph, a: &TreeAssignment, u: usize) -> Result<Vertex> {
    Block::single(g, u).problem(g, a)?.best(a.get(u))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicRun {
    pub assignment: TreeAssignment,
    /// Energy before the first sweep and after each sweep.
    pub energies: Vec<u64>,
    pub sweeps: usize,
    /// False when the sweep budget ran out before a sweep left everything in place.
    pub converged: bool,
}

impl HarmonicRun {
    pub fn final_energy(&self) -> u64 {
        *self.energies.last().expect("initial energy recorded")
    }

    pub fn into_result(self) -> Result<HarmonicRun> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::SweepBudgetExceeded(self.sweeps))
        }
    }
}

/// Cyclic coordinate descent in vertex order. A vertex moves only when its
/// local cost strictly drops, so the energy trace is nonincreasing. A sweep
/// that moves no single vertex then tries to move each flat component
/// rigidly; the run has converged when neither kind of move helps.
pub fn minimize(g: &GainGraph, init: TreeAssignment, max_sweeps: usize) -> Result<HarmonicRun> {
    let mut a = init;
    let mut energies = vec![energy(g, &a)?];
    for sweep in 1..=max_sweeps {
        let mut changed = false;
        for u in 0..g.vertex_count() {
            changed |= Block::single(g, u).improve(g, &mut a)?;
        }
        if !changed {
            for block in flat_blocks(g, &a)? {
                if block.improve(g, &mut a)? {
                    changed = true;
                    break;
                }
            }
        }
        energies.push(energy(g, &a)?);
        if !changed {
            return Ok(HarmonicRun { assignment: a, energies, sweeps: sweep, converged: true });
        }
    }
    Ok(HarmonicRun { assignment: a, energies, sweeps: max_sweeps, converged: false })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
    pub label: String,
}

/// Quotient of a gain graph by its zero-displacement edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebGraph {
    /// Graph vertices in each node, sorted.
    pub nodes: Vec<Vec<usize>>,
    pub edges: Vec<ReebEdge>,
}

impl ReebGraph {
    pub fn is_point(&self) -> bool {
        self.nodes.len() == 1 && self.edges.is_empty()
    }

    /// Number of independent cycles.
    pub fn first_betti_number(&self) -> usize {
        self.edges.len() + 1 - self.nodes.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn to_dot(&self, names: &[String]) -> String {
        let mut s = String::from("digraph reeb {\n");
        for (i, members) in self.nodes.iter().enumerate() {
            let label: Vec<&str> = members.iter().map(|&u| names[u].as_str()).collect();
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", label.join(","));
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{} ({})\"];", e.from, e.to, e.weight, e.label);
        }
        s.push_str("}\n");
        s
    }
}

pub fn reeb_contract(g: &GainGraph, a: &TreeAssignment) -> Result<ReebGraph> {
    let disp = edge_displacements(g, a)?;
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, &d) in g.edges.iter().zip(&disp) {
        if d == 0 {
            uf.union(e.from, e.to);
        }
    }
    let roots: BTreeSet<usize> = (0..g.vertex_count()).map(|u| uf.find(u)).collect();
    let roots: Vec<usize> = roots.into_iter().collect();
    let node_of = |uf: &mut UnionFind, u: usize| roots.binary_search(&uf.find(u)).expect("root listed");
    let mut nodes = vec![Vec::new(); roots.len()];
    for u in 0..g.vertex_count() {
        let k = node_of(&mut uf, u);
        nodes[k].push(u);
    }
    let mut edges = Vec::new();
    for (e, &d) in g.edges.iter().zip(&disp) {
        if d > 0 {
            let (from, to) = (node_of(&mut uf, e.from), node_of(&mut uf, e.to));
            edges.push(ReebEdge { from, to, weight: d, label: e.label.clone() });
        }
    }
    Ok(ReebGraph { nodes, edges })
}

/// Minimum energy over all assignments with values within `radius` of `center`.
/// Exponential in the vertex count; meant for checking small cases.
pub fn brute_force_minimum(g: &GainGraph, center: &Vertex, radius: u64) -> Result<u64> {
    let ball = crate::bttree::ball(center, radius);
    let n = g.vertex_count();
    let mut idx = vec![0usize; n];
    let mut best = u64::MAX;
    loop {
        let a = TreeAssignment(idx.iter().map(|&i| ball[i].clone()).collect());
        best = best.min(energy(g, &a)?);
        let mut k = 0;
        loop {
            if k == n {
                return Ok(best);
            }
            idx[k] += 1;
            if idx[k] < ball.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
