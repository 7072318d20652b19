//! Simple undirected graphs, vertex sets and the two graph file formats.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A set of vertices stored as a bitset over `0..capacity`.
///
/// Ordering is lexicographic on the sorted element list, which is the merge
/// order used by every sweep.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet { words: Vec::new() }
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = VertexSet::new();
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / WORD, v % WORD);
        self.words.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Largest element, if any.
    pub fn last(&self) -> Option<usize> {
        self.iter().last()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let n = self.words.len().max(other.words.len());
        let words = (0..n).map(|i| self.word(i) | other.word(i)).collect::<Vec<_>>();
        VertexSet { words }.trimmed()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let n = self.words.len().min(other.words.len());
        let words = (0..n).map(|i| self.word(i) & other.word(i)).collect::<Vec<_>>();
        VertexSet { words }.trimmed()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let words = (0..self.words.len())
            .map(|i| self.word(i) & !other.word(i))
            .collect::<Vec<_>>();
        VertexSet { words }.trimmed()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        (0..self.words.len()).all(|i| self.word(i) & !other.word(i) == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn trimmed(mut self) -> Self {
        self.trim();
        self
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<usize>::deserialize(d)?.into_iter().collect())
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![VertexSet::new(); n];
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !adjacency[i].insert(j) {
                return Err(Error::DuplicateEdge(i.min(j), i.max(j)));
            }
            adjacency[j].insert(i);
        }
        Ok(Graph { adjacency })
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Graph::new(n, &[])
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|i| self.adjacency[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i).is_some_and(|a| a.contains(j))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            Err(Error::IndexOutOfRange { index: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn neighborhood(&self, i: usize) -> Result<&VertexSet> {
        self.check(i)?;
        Ok(&self.adjacency[i])
    }

    /// Neighborhood together with the vertex itself.
    pub fn closed_neighborhood(&self, i: usize) -> Result<VertexSet> {
        let mut s = self.neighborhood(i)?.clone();
        s.insert(i);
        Ok(s)
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        Ok(self.neighborhood(i)?.len())
    }

    /// Maximum degree.
    pub fn n_max(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Vertices of maximum degree.
    pub fn roots(&self) -> VertexSet {
        let m = self.n_max();
        (0..self.n()).filter(|&i| self.adjacency[i].len() == m).collect()
    }

    pub fn is_root(&self, i: usize) -> bool {
        i < self.n() && self.adjacency[i].len() == self.n_max()
    }

    /// Union of the closed neighborhoods of every vertex in `set`.
    pub fn closed_neighborhood_of_set(&self, set: &VertexSet) -> VertexSet {
        set.iter().fold(set.clone(), |acc, v| acc.union(&self.adjacency[v]))
    }

    /// Union of the open neighborhoods of every vertex in `set`.
    pub fn neighborhood_of_set(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .fold(VertexSet::new(), |acc, v| acc.union(&self.adjacency[v]))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = VertexSet::singleton(0);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for u in self.adjacency[v].iter() {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.n()
    }

    /// The subgraph induced on `keep`, relabelled to `0..|keep|` in
    /// increasing order of the original index.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, Relabeling)> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        if let Some(m) = keep.last() {
            self.check(m)?;
        }
        let map = Relabeling::new(self.n(), keep);
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter_map(|(i, j)| Some((map.forward(i)?, map.forward(j)?)))
            .collect();
        let g = Graph::new(keep.len(), &edges).expect("induced edges are valid");
        Ok((g, map))
    }

    /// Short stable identifier: `n<N>-e<E>-<hash>` using FNV-1a over the edge list.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.n() as u64);
        for (i, j) in self.edges() {
            feed(i as u64);
            feed(j as u64);
        }
        format!("n{}-e{}-{:016x}", self.n(), self.edge_count(), h)
    }

    /// Parses either the JSON document form or the `n=<N>` edge-list form.
    pub fn parse(text: &str) -> Result<Graph> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            Graph::from_json(text)
        } else {
            Graph::from_edge_list(text)
        }
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.try_into()
    }

    /// Edge-list text: a header line `n=<N>` followed by `i j` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let col = line.len() - line.trim_start().len() + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                column: col,
                message,
            };
            if n.is_none() {
                let value = line
                    .strip_prefix("n=")
                    .or_else(|| line.strip_prefix("n ="))
                    .ok_or_else(|| err(format!("expected header `n=<N>`, found `{line}`")))?;
                n = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| err(format!("bad vertex count: {e}")))?,
                );
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected `i j`, found `{line}`")));
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    column: s.as_ptr() as usize - raw.as_ptr() as usize + 1,
                    message: format!("bad vertex `{s}`: {e}"),
                })
            };
            edges.push((parse(fields[0])?, parse(fields[1])?));
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "missing `n=<N>` header".into(),
        })?;
        Graph::new(n, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph serializes")
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n());
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Canonical document form of a graph.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;
    fn try_from(doc: GraphDoc) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(doc.n, &edges)
    }
}

/// Old-to-new vertex index map produced by [`Graph::induced_subgraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    forward: Vec<Option<usize>>,
    backward: Vec<usize>,
}

impl Relabeling {
    fn new(n: usize, keep: &VertexSet) -> Self {
        let backward = keep.to_vec();
        let mut forward = vec![None; n];
        for (new, &old) in backward.iter().enumerate() {
            forward[old] = Some(new);
        }
        Relabeling { forward, backward }
    }

    /// New index of an original vertex, `None` if it was removed.
    pub fn forward(&self, old: usize) -> Option<usize> {
        self.forward.get(old).copied().flatten()
    }

    /// Original index of a new vertex.
    pub fn backward(&self, new: usize) -> usize {
        self.backward[new]
    }

    pub fn is_identity(&self) -> bool {
        self.forward.len() == self.backward.len() && self.backward.iter().enumerate().all(|(i, &o)| i == o)
    }

    pub fn map_set(&self, set: &VertexSet) -> VertexSet {
        set.iter().filter_map(|v| self.forward(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn ring(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn neighborhoods() {
        let s = star(4);
        assert_eq!(s.neighborhood(0).unwrap(), &set(&[1, 2, 3]));
        assert_eq!(s.neighborhood(2).unwrap(), &set(&[0]));
        assert_eq!(ring(5).neighborhood(0).unwrap(), &set(&[1, 4]));
        assert_eq!(s.neighborhood(4), Err(Error::IndexOutOfRange { index: 4, n: 4 }));
    }

    #[test]
    fn closed_neighborhoods() {
        let s = star(4);
        assert_eq!(s.closed_neighborhood(0).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(s.closed_neighborhood(3).unwrap(), set(&[0, 3]));
        let e = Graph::edgeless(3).unwrap();
        assert_eq!(e.closed_neighborhood(1).unwrap(), set(&[1]));
        assert!(e.closed_neighborhood(3).is_err());
    }

    #[test]
    fn roots_of_ring() {
        let r = ring(6);
        assert_eq!(r.n_max(), 2);
        assert_eq!(r.roots(), VertexSet::full(6));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::new(0, &[]), Err(Error::EmptyGraph));
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::new(3, &[(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::new(2, &[(0, 2)]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn induced_subgraphs() {
        let r = ring(5);
        let (all, map) = r.induced_subgraph(&r.vertices()).unwrap();
        assert_eq!(all, r);
        assert!(map.is_identity());

        let (path, map) = r.induced_subgraph(&set(&[0, 1, 2])).unwrap();
        assert_eq!(path, Graph::new(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(map.forward(2), Some(2));
        assert_eq!(map.forward(4), None);

        let (g, map) = r.induced_subgraph(&set(&[1, 3, 4])).unwrap();
        assert_eq!(g.edges(), vec![(1, 2)]);
        assert_eq!(map.backward(0), 1);
        assert_eq!(map.forward(3), Some(1));

        assert_eq!(r.induced_subgraph(&VertexSet::new()), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn vertex_set_algebra() {
        let a = set(&[1, 5, 70]);
        let b = set(&[5, 6]);
        assert_eq!(a.union(&b), set(&[1, 5, 6, 70]));
        assert_eq!(a.intersection(&b), set(&[5]));
        assert_eq!(a.difference(&b), set(&[1, 70]));
        assert!(set(&[5]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(a.len(), 3);
        assert_eq!(a.last(), Some(70));
        // Trimmed representation keeps equality structural.
        let mut c = set(&[1, 100]);
        c.remove(100);
        assert_eq!(c, set(&[1]));
        assert!(set(&[0, 5]) < set(&[1]));
        assert!(set(&[1]) < set(&[1, 2]));
        assert_eq!(a.to_string(), "{1,5,70}");
    }

    #[test]
    fn parse_json_and_edge_list() {
        let g = Graph::parse(r#"{"n": 4, "edges": [[0,1],[0,2],[0,3]]}"#).unwrap();
        assert_eq!(g, star(4));
        let h = Graph::parse("# star\nn=4\n0 1\n0 2\n\n0 3\n").unwrap();
        assert_eq!(h, g);
        assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g);
        assert_eq!(Graph::parse(&g.to_json()).unwrap(), g);

        match Graph::parse("n=3\n0 1\n0 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match Graph::parse("{\"n\": 3,\n \"edges\": [[0,1],]}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(Graph::parse("0 1\n").is_err());
    }

    #[test]
    fn connectivity_and_fingerprint() {
        assert!(ring(5).is_connected());
        assert!(!Graph::new(3, &[(0, 1)]).unwrap().is_connected());
        assert_eq!(ring(5).fingerprint(), ring(5).fingerprint());
        assert_ne!(ring(5).fingerprint(), star(5).fingerprint());
    }
}
