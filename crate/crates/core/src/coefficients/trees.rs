use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CoeffError;

/// Directed graph on vertices `0..n`; an edge `(i, j)` reads `i -> j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Which family of trees to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeMode {
    /// Every labelled tree with every orientation of its edges.
    Oriented,
    /// Labelled trees with each edge pointing from the smaller label to the larger.
    Increasing,
}

impl Digraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self, CoeffError> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(CoeffError::Shape(format!("bad edge {a}->{b} on {n} vertices")));
        }
        edges.sort_unstable();
        Ok(Digraph { n, edges })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Connected with `n - 1` edges and no multi-edges, ignoring orientation.
    pub fn is_tree(&self) -> bool {
        if self.n == 0 || self.edges.len() + 1 != self.n {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Reverse the orientation of edge number `k`.
    pub fn reverse_edge(&self, k: usize) -> Digraph {
        let mut edges = self.edges.clone();
        let (a, b) = edges[k];
        edges[k] = (b, a);
        edges.sort_unstable();
        Digraph { n: self.n, edges }
    }
}

impl fmt::Display for Digraph {
    /// One-based edges, e.g. `1>2,1>3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.edges.iter().map(|(a, b)| format!("{}>{}", a + 1, b + 1)).collect();
        f.write_str(&v.join(","))
    }
}

impl FromStr for Digraph {
    type Err = CoeffError;

    /// Parses one-based edge lists `1>2,2>3`; the vertex count is the largest
    /// label, or `n:` may be prefixed (`3:1>2,1>3`).
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let bad = || CoeffError::Shape(format!("bad edge list {s:?}"));
        let (n_hint, body) = match s.split_once(':') {
            Some((n, rest)) => (Some(n.trim().parse::<usize>().map_err(|_| bad())?), rest),
            None => (None, s),
        };
        let mut edges = Vec::new();
        for e in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (a, b) = e.split_once('>').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            edges.push((a - 1, b - 1));
        }
        let n = n_hint.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1));
        Digraph::new(n, edges)
    }
}

/// JSON form: one-based edge pairs `[[1,2],[1,3]]`. On input the vertex count
/// is the larger of the top label and `edges + 1`, so trees round trip.
impl Serialize for Digraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[usize; 2]> = self.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[usize; 2]>::deserialize(d)?;
        if pairs.iter().any(|p| p[0] == 0 || p[1] == 0) {
            return Err(serde::de::Error::custom("edge labels start at 1"));
        }
        let top = pairs.iter().map(|p| p[0].max(p[1])).max().unwrap_or(1);
        let n = top.max(pairs.len() + 1);
        Digraph::new(n, pairs.iter().map(|p| (p[0] - 1, p[1] - 1)).collect()).map_err(serde::de::Error::custom)
    }
}

/// Undirected labelled trees on `n` vertices via Prüfer sequences, edges `(min, max)`.
fn labelled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![vec![]];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            *s = c % n;
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("Prüfer decoding always has a leaf");
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        out.push(edges);
    }
    out
}

/// All trees of the given family on `n >= 1` vertices.
pub fn enumerate_trees(n: usize, mode: TreeMode) -> Vec<Digraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for edges in labelled_trees(n) {
        match mode {
            TreeMode::Increasing => out.push(Digraph { n, edges }),
            TreeMode::Oriented => {
                for mask in 0u64..(1u64 << edges.len()) {
                    let oriented: Vec<(usize, usize)> =
                        edges.iter().enumerate().map(|(k, &(a, b))| if mask >> k & 1 == 1 { (b, a) } else { (a, b) }).collect();
                    out.push(Digraph::new(n, oriented).expect("edges are in range"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        for n in 1..=6usize {
            let inc = enumerate_trees(n, TreeMode::Increasing);
            let ori = enumerate_trees(n, TreeMode::Oriented);
            let cayley = if n == 1 { 1 } else { n.pow(n as u32 - 2) };
            assert_eq!(inc.len(), cayley);
            assert_eq!(ori.len(), cayley << (n - 1));
            assert!(ori.iter().all(Digraph::is_tree));
            assert_eq!(inc.iter().collect::<BTreeSet<_>>().len(), inc.len());
            assert_eq!(ori.iter().collect::<BTreeSet<_>>().len(), ori.len());
            assert!(inc.iter().all(|g| g.edges().iter().all(|&(a, b)| a < b)));
        }
    }

    #[test]
    fn parse_and_display() {
        let g: Digraph = "1>2,3>1".parse().unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.to_string(), "1>2,3>1");
        assert!(g.is_tree());
        let h: Digraph = "4:1>2,2>3".parse().unwrap();
        assert!(!h.is_tree());
        assert!("1>1".parse::<Digraph>().is_err());
        let single: Digraph = "1:".parse().unwrap();
        assert!(single.is_tree());
    }

    #[test]
    fn cycle_is_not_tree() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!g.is_tree());
        let two_components = Digraph::new(4, vec![(0, 1), (1, 0), (2, 3)]).unwrap();
        assert!(!two_components.is_tree());
    }

    #[test]
    fn json_edge_lists() {
        let g: Digraph = "1>2,3>1".parse().unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, "[[1,2],[3,1]]");
        assert_eq!(serde_json::from_str::<Digraph>(&js).unwrap(), g);
        let single: Digraph = serde_json::from_str("[]").unwrap();
        assert!(single.is_tree() && single.len() == 1);
        assert!(serde_json::from_str::<Digraph>("[[0,1]]").is_err());
    }
}
