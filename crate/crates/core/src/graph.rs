//! Simple undirected host graphs and their total red/blue edge colourings.
//!
//! Text format (both kinds):
//!
//! ```text
//! n m
//! u v        # uncoloured
//! u v c      # coloured, c ∈ {r, b}
//! ```
//!
//! Vertices are 0-indexed, edges are written with `u < v` and sorted
//! lexicographically. Blank lines and `#` comments are ignored on input.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub const BOTH: [Colour; 2] = [Colour::Red, Colour::Blue];

    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn code(self) -> char {
        match self {
            Colour::Red => 'r',
            Colour::Blue => 'b',
        }
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        match self {
            Colour::Red => 0,
            Colour::Blue => 1,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

impl FromStr for Colour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" | "red" => Ok(Colour::Red),
            "b" | "blue" => Ok(Colour::Blue),
            other => Err(Error::InvalidArgument(format!("unknown colour `{other}`"))),
        }
    }
}

/// A simple graph on the vertex set `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::new(n); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n);
                s.remove(v);
                s
            })
            .collect();
        Self {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph, rejecting self-loops, repeated edges and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if !g.adj[u].insert(v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            g.adj[v].insert(u);
            g.edge_count += 1;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Subgraph induced on `keep`, relabelled to `0..keep.len()` in increasing order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                    g.edge_count += 1;
                }
            }
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the text format; colour tokens, if present, are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let (n, edges) = parse_edge_list(text)?;
        Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A graph together with a total 2-colouring of its edges.
#[derive(Clone, PartialEq, Eq)]
pub struct ColouredGraph {
    graph: Graph,
    /// `by_colour[c][v]`: neighbours of `v` along edges of colour `c`.
    by_colour: [Vec<VertexSet>; 2],
}

impl ColouredGraph {
    /// Colours every edge of `graph` with `colour_of(u, v)` (called with `u < v`).
    pub fn from_fn<F>(graph: Graph, mut colour_of: F) -> Self
    where
        F: FnMut(usize, usize) -> Colour,
    {
        let n = graph.n();
        let mut by_colour = [vec![VertexSet::new(n); n], vec![VertexSet::new(n); n]];
        let edges: Vec<_> = graph.edges().collect();
        for (u, v) in edges {
            let c = colour_of(u, v).index();
            by_colour[c][u].insert(v);
            by_colour[c][v].insert(u);
        }
        Self { graph, by_colour }
    }

    pub fn monochromatic(graph: Graph, colour: Colour) -> Self {
        Self::from_fn(graph, |_, _| colour)
    }

    pub fn from_coloured_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Colour)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let graph = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
        let mut by_colour = [vec![VertexSet::new(n); n], vec![VertexSet::new(n); n]];
        for (u, v, c) in edges {
            by_colour[c.index()][u].insert(v);
            by_colour[c.index()][v].insert(u);
        }
        Ok(Self { graph, by_colour })
    }

    /// Colours the edges of `graph` from a bitmask over its lexicographically ordered
    /// edges: bit `i` set means edge `i` is red. Only for graphs with ≤ 64 edges.
    pub fn from_mask(graph: &Graph, red_mask: u64) -> Self {
        debug_assert!(graph.edge_count() <= 64);
        let mut i = 0;
        Self::from_fn(graph.clone(), |_, _| {
            let c = if (red_mask >> i) & 1 == 1 {
                Colour::Red
            } else {
                Colour::Blue
            };
            i += 1;
            c
        })
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn colour(&self, u: usize, v: usize) -> Option<Colour> {
        if u >= self.n() {
            None
        } else if self.by_colour[0][u].contains(v) {
            Some(Colour::Red)
        } else if self.by_colour[1][u].contains(v) {
            Some(Colour::Blue)
        } else {
            None
        }
    }

    /// Adjacency restricted to edges of one colour.
    #[inline]
    pub fn colour_adjacency(&self, colour: Colour) -> &[VertexSet] {
        &self.by_colour[colour.index()]
    }

    pub fn colour_edge_count(&self, colour: Colour) -> usize {
        self.by_colour[colour.index()].iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// The same graph with red and blue exchanged.
    pub fn swapped(&self) -> Self {
        let [red, blue] = self.by_colour.clone();
        Self {
            graph: self.graph.clone(),
            by_colour: [blue, red],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        self.graph.edges().map(|(u, v)| {
            let c = self.colour(u, v).expect("total colouring");
            (u, v, c)
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.graph.edge_count());
        for (u, v, c) in self.edges() {
            let _ = writeln!(out, "{u} {v} {}", c.code());
        }
        out
    }

    /// Parses the coloured text format; every edge line must carry a colour.
    pub fn from_text(text: &str) -> Result<Self> {
        let (n, edges) = parse_edge_list(text)?;
        let mut coloured = Vec::with_capacity(edges.len());
        for (u, v, c) in edges {
            let c = c.ok_or_else(|| Error::InvalidGraph(format!("edge ({u}, {v}) has no colour")))?;
            coloured.push((u, v, c));
        }
        Self::from_coloured_edges(n, coloured)
    }
}

impl fmt::Debug for ColouredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColouredGraph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

type EdgeLine = (usize, usize, Option<Colour>);

fn parse_edge_list(text: &str) -> Result<(usize, Vec<EdgeLine>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n m` header".into(),
    })?;
    let mut it = header.split_whitespace();
    let n = parse_num(it.next(), hline, "n")?;
    let m = parse_num(it.next(), hline, "m")?;

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let colour = match toks.len() {
            2 => None,
            3 => Some(toks[2].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad colour `{}`", toks[2]),
            })?),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected `u v` or `u v c`".into(),
                })
            }
        };
        let u = parse_num(Some(toks[0]), line, "u")?;
        let v = parse_num(Some(toks[1]), line, "v")?;
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        edges.push((u, v, colour));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what}"),
    })
}
