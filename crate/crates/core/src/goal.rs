//! Soft-goal forests: weighted satisfaction propagation, root verdicts and
//! signed contribution links.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::fuzzy::weighted_score;

pub const DEFAULT_ROOT_THRESHOLD: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GoalError {
    #[error("duplicate goal id `{0}`")]
    DuplicateId(String),
    #[error("goal `{parent}` references unknown child `{child}`")]
    DanglingChild { parent: String, child: String },
    #[error("goal `{parent}` lists child `{child}` more than once")]
    DuplicateChild { parent: String, child: String },
    #[error("goal `{node}` has several parents: {}", parents.join(", "))]
    MultipleParents { node: String, parents: Vec<String> },
    #[error("goal decomposition has a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("goal `{node}` has no children and no requirement binding")]
    Childless { node: String },
    #[error("goal `{node}` has weight {weight}; weights must be positive")]
    InvalidWeight { node: String, weight: f64 },
    #[error("goal `{node}` has threshold {threshold} outside [0, 1]")]
    InvalidThreshold { node: String, threshold: f64 },
    #[error("no satisfaction supplied for requirement `{0}`")]
    MissingLeaf(String),
    #[error("satisfaction {value} of requirement `{requirement}` is outside [0, 1]")]
    SatisfactionOutOfRange { requirement: String, value: f64 },
    #[error("invalid link {from} -> {to}: {reason}")]
    InvalidLink { from: String, to: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalKind {
    Children(Vec<String>),
    /// Bound to the satisfaction of a requirement.
    Leaf(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftGoalNode {
    pub id: String,
    pub label: String,
    /// Relative to siblings.
    pub weight: f64,
    pub kind: GoalKind,
    /// Only meaningful on roots; defaults to [`DEFAULT_ROOT_THRESHOLD`].
    pub threshold: Option<f64>,
}

impl SoftGoalNode {
    pub fn internal(id: impl Into<String>, weight: f64, children: Vec<String>) -> Self {
        let id = id.into();
        Self {
            label: id.clone(),
            id,
            weight,
            kind: GoalKind::Children(children),
            threshold: None,
        }
    }

    pub fn leaf(id: impl Into<String>, weight: f64, requirement: impl Into<String>) -> Self {
        let id = id.into();
        Self {
            label: id.clone(),
            id,
            weight,
            kind: GoalKind::Leaf(requirement.into()),
            threshold: None,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }
}

/// A validated, immutable set of soft-goal trees.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    nodes: Vec<SoftGoalNode>,
    index: HashMap<String, usize>,
    roots: Vec<usize>,
    /// Children before parents.
    post_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootVerdict {
    pub id: String,
    pub value: Option<f64>,
    pub threshold: f64,
    pub satisfied: bool,
}

/// Checks ids, references, weights and the tree shape, and identifies roots.
pub fn validate_forest(nodes: Vec<SoftGoalNode>) -> Result<Forest, GoalError> {
    let mut index = HashMap::new();
    for (i, node) in nodes.iter().enumerate() {
        if index.insert(node.id.clone(), i).is_some() {
            return Err(GoalError::DuplicateId(node.id.clone()));
        }
        if !(node.weight > 0.0 && node.weight.is_finite()) {
            return Err(GoalError::InvalidWeight {
                node: node.id.clone(),
                weight: node.weight,
            });
        }
        if let Some(t) = node.threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(GoalError::InvalidThreshold {
                    node: node.id.clone(),
                    threshold: t,
                });
            }
        }
    }

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        if let GoalKind::Children(ids) = &node.kind {
            if ids.is_empty() {
                return Err(GoalError::Childless { node: node.id.clone() });
            }
            let mut seen = HashSet::new();
            for child in ids {
                if !seen.insert(child.as_str()) {
                    return Err(GoalError::DuplicateChild {
                        parent: node.id.clone(),
                        child: child.clone(),
                    });
                }
                let &c = index.get(child).ok_or_else(|| GoalError::DanglingChild {
                    parent: node.id.clone(),
                    child: child.clone(),
                })?;
                children[i].push(c);
            }
        }
    }

    if let Some(cycle) = find_cycle(&children) {
        return Err(GoalError::Cycle(
            cycle.into_iter().map(|i| nodes[i].id.clone()).collect(),
        ));
    }

    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (p, cs) in children.iter().enumerate() {
        for &c in cs {
            parents[c].push(p);
        }
    }
    if let Some(c) = parents.iter().position(|ps| ps.len() > 1) {
        return Err(GoalError::MultipleParents {
            node: nodes[c].id.clone(),
            parents: parents[c].iter().map(|&p| nodes[p].id.clone()).collect(),
        });
    }

    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parents[i].is_empty()).collect();
    let mut post_order = Vec::with_capacity(nodes.len());
    for &root in &roots {
        // Iterative post-order; depth is bounded by node count, not stack.
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if expanded {
                post_order.push(n);
            } else {
                stack.push((n, true));
                for &c in children[n].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
    }

    Ok(Forest {
        nodes,
        index,
        roots,
        post_order,
    })
}

fn find_cycle(children: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut marks = vec![Mark::New; children.len()];
    for start in 0..children.len() {
        if marks[start] != Mark::New {
            continue;
        }
        let mut path = vec![start];
        let mut cursor = vec![0usize];
        marks[start] = Mark::Open;
        while let Some(&node) = path.last() {
            let next = cursor.last_mut().unwrap();
            if let Some(&child) = children[node].get(*next) {
                *next += 1;
                match marks[child] {
                    Mark::Open => {
                        let from = path.iter().position(|&n| n == child).unwrap();
                        return Some(path[from..].to_vec());
                    }
                    Mark::New => {
                        marks[child] = Mark::Open;
                        path.push(child);
                        cursor.push(0);
                    }
                    Mark::Done => {}
                }
            } else {
                marks[node] = Mark::Done;
                path.pop();
                cursor.pop();
            }
        }
    }
    None
}

impl Forest {
    pub fn nodes(&self) -> &[SoftGoalNode] {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&SoftGoalNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn roots(&self) -> impl Iterator<Item = &SoftGoalNode> {
        self.roots.iter().map(|&i| &self.nodes[i])
    }

    pub fn is_root(&self, id: &str) -> bool {
        self.index.get(id).is_some_and(|i| self.roots.contains(i))
    }

    /// Requirement ids bound to leaves, in node order.
    pub fn leaf_requirements(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().filter_map(|n| match &n.kind {
            GoalKind::Leaf(r) => Some(r.as_str()),
            GoalKind::Children(_) => None,
        })
    }

    /// Bottom-up weighted average of leaf satisfactions. Every leaf must have
    /// a satisfaction in `[0, 1]`.
    pub fn propagate(&self, leaf_satisfactions: &HashMap<String, f64>) -> Result<IndexMap<String, f64>, GoalError> {
        if let Some(missing) = self.leaf_requirements().find(|r| !leaf_satisfactions.contains_key(*r)) {
            return Err(GoalError::MissingLeaf(missing.to_string()));
        }
        Ok(self
            .propagate_available(leaf_satisfactions)?
            .into_iter()
            .map(|(id, v)| (id, v.expect("every leaf is bound")))
            .collect())
    }

    /// Like [`Forest::propagate`], but leaves without a satisfaction are left
    /// out of their parent's average. A goal none of whose children have a
    /// value has no value itself.
    pub fn propagate_available(
        &self,
        leaf_satisfactions: &HashMap<String, f64>,
    ) -> Result<IndexMap<String, Option<f64>>, GoalError> {
        let mut values: Vec<Option<f64>> = vec![None; self.nodes.len()];
        for &i in &self.post_order {
            let node = &self.nodes[i];
            values[i] = match &node.kind {
                GoalKind::Leaf(req) => match leaf_satisfactions.get(req) {
                    Some(&v) if (0.0..=1.0).contains(&v) => Some(v),
                    Some(&v) => {
                        return Err(GoalError::SatisfactionOutOfRange {
                            requirement: req.clone(),
                            value: v,
                        })
                    }
                    None => None,
                },
                GoalKind::Children(ids) => {
                    let parts: Vec<(f64, f64)> = ids
                        .iter()
                        .map(|c| self.index[c])
                        .filter_map(|c| values[c].map(|v| (v, self.nodes[c].weight)))
                        .collect();
                    if parts.is_empty() {
                        None
                    } else {
                        Some(weighted_score(&parts).expect("weights and degrees validated"))
                    }
                }
            };
        }
        Ok(self.nodes.iter().zip(values).map(|(n, v)| (n.id.clone(), v)).collect())
    }

    /// A root is satisfied when its value reaches its threshold (inclusive).
    /// Roots without a value are unsatisfied.
    pub fn roots_satisfied(&self, values: &IndexMap<String, f64>) -> Vec<RootVerdict> {
        self.roots()
            .map(|root| {
                let threshold = root.threshold.unwrap_or(DEFAULT_ROOT_THRESHOLD);
                let value = values.get(&root.id).copied();
                RootVerdict {
                    id: root.id.clone(),
                    value,
                    threshold,
                    satisfied: value.is_some_and(|v| v >= threshold),
                }
            })
            .collect()
    }
}

/// A signed contribution: `source` helps (positive) or hurts (negative)
/// the goal `target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContributionLink {
    pub source: String,
    pub target: String,
    pub sign: f64,
}

impl ContributionLink {
    pub fn new(source: impl Into<String>, target: impl Into<String>, sign: f64) -> Result<Self, GoalError> {
        let (source, target) = (source.into(), target.into());
        let reason = if source == target {
            Some("source and target are the same".to_string())
        } else if !(-1.0..=1.0).contains(&sign) || sign == 0.0 {
            Some(format!("sign {sign} must be nonzero and within [-1, 1]"))
        } else {
            None
        };
        match reason {
            Some(reason) => Err(GoalError::InvalidLink {
                from: source,
                to: target,
                reason,
            }),
            None => Ok(Self { source, target, sign }),
        }
    }
}

/// One concern that helps one goal while hurting another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conflict {
    pub source: String,
    pub helps: String,
    pub hurts: String,
    pub help_sign: f64,
    pub hurt_sign: f64,
}

/// Every (helped, hurt) target pair of each source, sorted by source and
/// then by target names. The result does not depend on link order.
pub fn detect_conflicts(links: &[ContributionLink]) -> Vec<Conflict> {
    let mut by_source: HashMap<&str, Vec<&ContributionLink>> = HashMap::new();
    for link in links {
        by_source.entry(link.source.as_str()).or_default().push(link);
    }
    let mut out = Vec::new();
    for (source, group) in by_source {
        for help in group.iter().filter(|l| l.sign > 0.0) {
            for hurt in group.iter().filter(|l| l.sign < 0.0) {
                if help.target != hurt.target {
                    out.push(Conflict {
                        source: source.to_string(),
                        helps: help.target.clone(),
                        hurts: hurt.target.clone(),
                        help_sign: help.sign,
                        hurt_sign: hurt.sign,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.source, &a.helps, &a.hurts)
            .cmp(&(&b.source, &b.helps, &b.hurts))
            .then(a.help_sign.total_cmp(&b.help_sign))
            .then(a.hurt_sign.total_cmp(&b.hurt_sign))
    });
    out.dedup();
    out
}
