//! Co-word graphs over researcher term sets and a Fruchterman–Reingold layout
//! for drawing them as a semantic map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::normalize::{CleanCorpus, Facet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Phrase,
    Word,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "phrase" | "phrases" => Ok(Level::Phrase),
            "word" | "words" => Ok(Level::Word),
            _ => Err(Error::Enum {
                kind: "level",
                token: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CowordGraph {
    pub facet: Facet,
    pub level: Level,
    /// Term -> number of researchers using it.
    pub nodes: BTreeMap<String, usize>,
    /// Unordered pair (smaller norm first) -> number of researchers using both.
    pub edges: BTreeMap<(String, String), usize>,
}

impl CowordGraph {
    pub fn empty(facet: Facet, level: Level) -> Self {
        CowordGraph {
            facet,
            level,
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Adds one researcher's term set: +1 per term, +1 per unordered pair.
    pub fn add_set<'a, I>(&mut self, terms: I)
    where
        I: IntoIterator<Item = &'a str>,
    {
        let set: BTreeSet<&str> = terms.into_iter().collect();
        for t in &set {
            *self.nodes.entry((*t).to_string()).or_default() += 1;
        }
        let items: Vec<&str> = set.into_iter().collect();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                *self
                    .edges
                    .entry(((*a).to_string(), (*b).to_string()))
                    .or_default() += 1;
            }
        }
    }

    pub fn weight(&self, a: &str, b: &str) -> usize {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges
            .get(&(key.0.to_string(), key.1.to_string()))
            .copied()
            .unwrap_or(0)
    }
}

pub fn cooccurrence_graph(corpus: &CleanCorpus, facet: Facet, level: Level) -> CowordGraph {
    let mut g = CowordGraph::empty(facet, level);
    for terms in &corpus.per_researcher {
        let set = terms.facet(facet);
        match level {
            Level::Phrase => g.add_set(set.phrase_norms()),
            Level::Word => g.add_set(set.words.iter().map(String::as_str)),
        }
    }
    g
}

/// Share of terms used by exactly one researcher; 0 for an empty graph.
pub fn isolation_ratio(graph: &CowordGraph) -> f64 {
    if graph.nodes.is_empty() {
        return 0.0;
    }
    let singles = graph.nodes.values().filter(|&&c| c == 1).count();
    singles as f64 / graph.nodes.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub width: f64,
    pub height: f64,
}

impl Frame {
    pub fn center(&self) -> [f64; 2] {
        [self.width / 2.0, self.height / 2.0]
    }

    fn clamp(&self, p: &mut [f64; 2]) {
        p[0] = p[0].clamp(0.0, self.width);
        p[1] = p[1].clamp(0.0, self.height);
    }
}

impl Default for Frame {
    fn default() -> Self {
        Frame {
            width: 1000.0,
            height: 1000.0,
        }
    }
}

pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutParams {
    pub iterations: usize,
    pub frame: Frame,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            iterations: DEFAULT_ITERATIONS,
            frame: Frame::default(),
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub positions: BTreeMap<String, [f64; 2]>,
    pub frame: Frame,
    /// Ideal edge length `sqrt(W*H/n)`.
    pub k: f64,
    /// Mean distance moved per node, one entry per iteration.
    pub mean_displacement: Vec<f64>,
}

/// Optimal pairwise distance for `n` nodes in `frame`.
pub fn ideal_distance(frame: Frame, n: usize) -> f64 {
    (frame.width * frame.height / n.max(1) as f64).sqrt()
}

/// Runs the force simulation in place.
///
/// Repulsion `k²/d` acts between every pair, attraction `d²/k` along every
/// edge. Each node moves along its net force by at most the current
/// temperature, which starts at `t0` and falls linearly to zero over the run.
/// With `clamp` set, nodes are held inside the frame after every iteration.
///
/// Returns the mean per-node displacement of each iteration.
pub fn simulate(
    positions: &mut [[f64; 2]],
    edges: &[(usize, usize)],
    k: f64,
    t0: f64,
    iterations: usize,
    clamp: Option<Frame>,
) -> Vec<f64> {
    let n = positions.len();
    let mut history = Vec::with_capacity(iterations);
    let mut disp = vec![[0.0f64; 2]; n];
    for it in 0..iterations {
        let temperature = t0 * (1.0 - it as f64 / iterations as f64);
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);

        for i in 0..n {
            for j in i + 1..n {
                let (dir, dist) = separation(positions, i, j, k);
                let force = k * k / dist;
                for a in 0..2 {
                    disp[i][a] += dir[a] * force;
                    disp[j][a] -= dir[a] * force;
                }
            }
        }
        for &(i, j) in edges {
            if i == j {
                continue;
            }
            let (dir, dist) = separation(positions, i, j, k);
            let force = dist * dist / k;
            for a in 0..2 {
                disp[i][a] -= dir[a] * force;
                disp[j][a] += dir[a] * force;
            }
        }

        let mut moved = 0.0;
        for (p, d) in positions.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            let before = *p;
            if len > 0.0 {
                let step = len.min(temperature) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
            if let Some(frame) = clamp {
                frame.clamp(p);
            }
            moved += (p[0] - before[0]).hypot(p[1] - before[1]);
        }
        history.push(if n > 0 { moved / n as f64 } else { 0.0 });
    }
    history
}

/// Unit vector from `j` to `i` and their distance. Coincident nodes are
/// separated along a fixed, index-dependent direction.
fn separation(positions: &[[f64; 2]], i: usize, j: usize, k: f64) -> ([f64; 2], f64) {
    let dx = positions[i][0] - positions[j][0];
    let dy = positions[i][1] - positions[j][1];
    let dist = dx.hypot(dy);
    if dist > 1e-9 * k.max(1.0) {
        return ([dx / dist, dy / dist], dist);
    }
    let angle = (i * 7 + j * 13) as f64;
    ([angle.cos(), angle.sin()], 1e-3 * k.max(1e-9))
}

/// Lays the graph out in `params.frame` from a seeded uniform scatter.
pub fn layout_fr(graph: &CowordGraph, params: &LayoutParams) -> Result<Layout> {
    let frame = params.frame;
    if params.iterations == 0 {
        return Err(Error::Format("layout needs at least one iteration".into()));
    }
    if !(frame.width > 0.0 && frame.height > 0.0) {
        return Err(Error::Format("layout frame must have positive area".into()));
    }
    let names: Vec<&String> = graph.nodes.keys().collect();
    let n = names.len();
    let k = ideal_distance(frame, n);
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let edges: Vec<(usize, usize)> = graph
        .edges
        .keys()
        .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
        .collect();

    let (positions, history) = if n == 1 {
        (vec![frame.center()], vec![0.0; params.iterations])
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut pos: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.gen::<f64>() * frame.width, rng.gen::<f64>() * frame.height])
            .collect();
        let history = simulate(&mut pos, &edges, k, frame.width / 10.0, params.iterations, Some(frame));
        (pos, history)
    };

    Ok(Layout {
        positions: names.into_iter().cloned().zip(positions).collect(),
        frame,
        k,
        mean_displacement: history,
    })
}

/// Tab-separated edge list sorted by endpoint, then (with a layout) a blank
/// line and one `node<TAB>count<TAB>x<TAB>y` line per node.
pub fn export_graph(graph: &CowordGraph, layout: Option<&Layout>) -> String {
    let mut out = String::new();
    for ((a, b), w) in &graph.edges {
        let _ = writeln!(out, "{a}\t{b}\t{w}");
    }
    if let Some(layout) = layout {
        out.push('\n');
        for (node, count) in &graph.nodes {
            let [x, y] = layout.positions.get(node).copied().unwrap_or([f64::NAN; 2]);
            let _ = writeln!(out, "{node}\t{count}\t{x:.3}\t{y:.3}");
        }
    }
    out
}

/// Node and edge tables for external graph tools.
pub fn export_csv(graph: &CowordGraph, layout: Option<&Layout>) -> Result<(String, String)> {
    let mut nodes = csv::Writer::from_writer(Vec::new());
    nodes.write_record(["Id", "Label", "Count", "X", "Y"])?;
    for (node, count) in &graph.nodes {
        let (x, y) = layout
            .and_then(|l| l.positions.get(node))
            .map(|p| (format!("{:.3}", p[0]), format!("{:.3}", p[1])))
            .unwrap_or_default();
        nodes.write_record([node.as_str(), node.as_str(), &count.to_string(), &x, &y])?;
    }
    let mut edges = csv::Writer::from_writer(Vec::new());
    edges.write_record(["Source", "Target", "Weight", "Type"])?;
    for ((a, b), w) in &graph.edges {
        edges.write_record([a.as_str(), b.as_str(), &w.to_string(), "Undirected"])?;
    }
    let finish = |w: csv::Writer<Vec<u8>>| -> Result<String> {
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    };
    Ok((finish(nodes)?, finish(edges)?))
}
