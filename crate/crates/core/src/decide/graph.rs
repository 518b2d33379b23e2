//! Literal-graph decision procedure for S and S†.
//!
//! Universal sentences `∀x(ℓ → m)` become edges `ℓ → m` and `m̄ → ℓ̄`. A set
//! is unsatisfiable iff some `∃x(ℓ ∧ m)` has `ℓ ⇒ ℓ̄`, `m ⇒ m̄` or `ℓ ⇒ m̄`, or
//! some literal `o` has both `o ⇒ ō` and `ō ⇒ o`. Paths may be empty.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{DecideError, Verdict};
use crate::syntax::{Literal, Noun, Quant, Sentence};

#[derive(Clone, Debug)]
pub struct LiteralGraph {
    nouns: Vec<Noun>,
    index: HashMap<Noun, usize>,
    adj: Vec<Vec<usize>>,
}

impl LiteralGraph {
    /// Graph over the given nouns plus every noun occurring in `sentences`.
    /// Only universal syllogistic sentences contribute edges.
    pub fn over(nouns: impl IntoIterator<Item = Noun>, sentences: &[Sentence]) -> Self {
        let set: BTreeSet<Noun> = nouns.into_iter().chain(sentences.iter().flat_map(Sentence::nouns)).collect();
        let nouns: Vec<Noun> = set.into_iter().collect();
        let index = nouns.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut g = Self { adj: vec![Vec::new(); 2 * nouns.len()], nouns, index };
        for s in sentences {
            if let Sentence::Syllogistic { q: Quant::Universal, subject, predicate } = *s {
                g.add_implication(subject, predicate);
            }
        }
        g
    }

    pub fn build(sentences: &[Sentence]) -> Self {
        Self::over([], sentences)
    }

    fn vertex(&self, l: Literal) -> usize {
        2 * self.index[&l.noun] + usize::from(!l.positive)
    }

    fn literal(&self, v: usize) -> Literal {
        Literal { noun: self.nouns[v / 2], positive: v.is_multiple_of(2) }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        if !self.adj[a].contains(&b) {
            self.adj[a].push(b);
        }
    }

    fn add_implication(&mut self, from: Literal, to: Literal) {
        let (a, b) = (self.vertex(from), self.vertex(to));
        self.add_edge(a, b);
        self.add_edge(b ^ 1, a ^ 1);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> Vec<(Literal, Literal)> {
        let mut out: Vec<_> = (0..self.adj.len())
            .flat_map(|a| self.adj[a].iter().map(move |&b| (a, b)))
            .map(|(a, b)| (self.literal(a), self.literal(b)))
            .collect();
        out.sort();
        out
    }

    pub fn has_edge(&self, from: Literal, to: Literal) -> bool {
        match (self.index.get(&from.noun), self.index.get(&to.noun)) {
            (Some(_), Some(_)) => self.adj[self.vertex(from)].contains(&self.vertex(to)),
            _ => false,
        }
    }

    fn bfs(&self, from: usize) -> Vec<Option<usize>> {
        // parent pointers; the source points at itself
        let mut parent = vec![None; self.adj.len()];
        parent[from] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    fn path(&self, parent: &[Option<usize>], to: usize) -> Option<Vec<Literal>> {
        parent[to]?;
        let mut rev = vec![to];
        let mut v = to;
        while let Some(p) = parent[v].filter(|&p| p != v) {
            rev.push(p);
            v = p;
        }
        Some(rev.into_iter().rev().map(|v| self.literal(v)).collect())
    }

    /// A shortest path (as its literal sequence) from `from` to `to`, if any.
    pub fn shortest_path(&self, from: Literal, to: Literal) -> Option<Vec<Literal>> {
        let (Some(_), Some(_)) = (self.index.get(&from.noun), self.index.get(&to.noun)) else {
            return None;
        };
        self.path(&self.bfs(self.vertex(from)), self.vertex(to))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// `ℓ ⇒ ℓ̄`
    I,
    /// `m ⇒ m̄`
    II,
    /// `ℓ ⇒ m̄`
    III,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigKind {
    PathViolation { condition: Condition, sentence: usize, path: Vec<Literal> },
    MutualUniversal { literal: Literal, forward: Vec<Literal>, backward: Vec<Literal> },
    ForallForall { d: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenConfig {
    pub kind: ConfigKind,
    /// Number of edges on the witnessing path (the longer one for mutual configurations).
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigSummary {
    pub kind: String,
    pub size: usize,
}

impl ForbiddenConfig {
    pub fn summary(&self) -> ConfigSummary {
        let kind = match &self.kind {
            ConfigKind::PathViolation { condition, .. } => match condition {
                Condition::I => "path-i",
                Condition::II => "path-ii",
                Condition::III => "path-iii",
            },
            ConfigKind::MutualUniversal { .. } => "mutual",
            ConfigKind::ForallForall { .. } => "forall-forall",
        };
        ConfigSummary { kind: kind.to_string(), size: self.size }
    }
}

/// Every forbidden configuration found in `sentences`, in reporting order:
/// existential sentences by index (conditions i, ii, iii), then mutual pairs by noun.
pub fn forbidden_configs(sentences: &[Sentence]) -> Result<Vec<ForbiddenConfig>, DecideError> {
    for (i, s) in sentences.iter().enumerate() {
        if !matches!(s, Sentence::Syllogistic { .. }) {
            return Err(DecideError::WrongFragment { method: "graph", sentence: i });
        }
    }
    let g = LiteralGraph::build(sentences);
    let parents: Vec<_> = (0..g.vertex_count()).map(|v| g.bfs(v)).collect();
    let path = |a: usize, b: usize| g.path(&parents[a], b);
    let mut out = Vec::new();
    for (idx, s) in sentences.iter().enumerate() {
        let Sentence::Syllogistic { q: Quant::Existential, subject, predicate } = *s else {
            continue;
        };
        let (l, m) = (g.vertex(subject), g.vertex(predicate));
        for (condition, from, to) in [(Condition::I, l, l ^ 1), (Condition::II, m, m ^ 1), (Condition::III, l, m ^ 1)] {
            if let Some(p) = path(from, to) {
                out.push(ForbiddenConfig {
                    size: p.len() - 1,
                    kind: ConfigKind::PathViolation { condition, sentence: idx, path: p },
                });
            }
        }
    }
    for o in (0..g.vertex_count()).step_by(2) {
        if let (Some(f), Some(b)) = (path(o, o ^ 1), path(o ^ 1, o)) {
            out.push(ForbiddenConfig {
                size: (f.len() - 1).max(b.len() - 1),
                kind: ConfigKind::MutualUniversal { literal: g.literal(o), forward: f, backward: b },
            });
        }
    }
    Ok(out)
}

/// Decides a set of syllogistic sentences, reporting a minimum-size
/// forbidden configuration (first in reporting order among ties).
pub fn decide_graph(sentences: &[Sentence]) -> Result<Verdict, DecideError> {
    let configs = forbidden_configs(sentences)?;
    let best = configs.into_iter().enumerate().min_by_key(|(i, c)| (c.size, *i)).map(|(_, c)| c);
    Ok(match best {
        Some(config) => Verdict::Unsatisfiable { config: Some(config), proof: None },
        None => Verdict::Satisfiable { witness: None },
    })
}

/// Size of the smallest forbidden configuration, `None` if satisfiable.
pub fn min_config_size(sentences: &[Sentence]) -> Result<Option<usize>, DecideError> {
    Ok(forbidden_configs(sentences)?.iter().map(|c| c.size).min())
}
