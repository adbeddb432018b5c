//! The extensive-form protocol object: a finite query tree walked by the
//! auctioneer, bidder information sets with perfect recall, and per-infoset
//! deterministic answer functions.
//!
//! Strategies are stored per information set (the answer function maps the
//! owner's type to an action), which makes the perfect-recall and infoset
//! merge constraints local. Infoset ids are stable opaque labels supplied at
//! construction; [`ProtocolTree::canonicalize`] renumbers them by first
//! on-path appearance for comparison and serialization.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{ModelError, ObservationStructure, Outcome, ProfileId, TypeProfile, TypeSpace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("answer function at infoset {infoset} selects action {action} missing at node {node}")]
    MissingEdge { node: u32, infoset: String, action: String },
    #[error("profile out of range for the protocol's type space")]
    BadProfile,
    #[error("observation structure error: {0}")]
    Observation(#[from] ModelError),
}

/// An information set: owner bidder, ordered action list, and the owner's
/// answer function (total over the owner's type list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infoset {
    pub owner: usize,
    pub label: String,
    pub actions: Vec<String>,
    /// Action index per owner type index.
    pub answer: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Internal {
        infoset: u32,
        /// Children in action-index order: (action index, child node).
        children: Vec<(u32, u32)>,
    },
    Leaf { outcome: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// (parent node, action index leading here); `None` at the root.
    pub parent: Option<(u32, u32)>,
    pub label: String,
    pub kind: NodeKind,
}

/// A deterministic bilateral communication protocol over a finite type space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolTree {
    pub space: Arc<TypeSpace>,
    pub nodes: Vec<Node>,
    pub root: u32,
    pub infosets: Vec<Infoset>,
    pub outcomes: Vec<Outcome>,
}

/// What one play of the protocol produces: the auctioneer's full history and
/// each bidder's experience.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transcript {
    /// Full (infoset, action) sequence in play order.
    pub auctioneer_history: Vec<(u32, u32)>,
    pub experiences: Vec<Experience>,
    pub leaf: u32,
    pub outcome: Outcome,
}

/// Bidder-side view of one play: own type, own-move subsequence, and the
/// Ω-cell of the terminal outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Experience {
    pub own_type: usize,
    pub moves: Vec<(u32, u32)>,
    pub omega_cell: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    /// Node unreachable from the root or reachable twice.
    NotATree { node: u32, detail: String },
    /// A node's outgoing edges differ from its infoset's action set.
    ActionSetMismatch { node: u32, infoset: u32 },
    /// Node owner disagrees with its infoset, or infoset malformed.
    BadInfoset { infoset: u32, detail: String },
    /// Two nodes share an infoset but give the owner different experiences.
    PerfectRecallBreach { infoset: u32, node_a: u32, node_b: u32 },
    /// Answer function not total or maps outside the action set.
    BadAnswer { infoset: u32, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<InvariantViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Result of the reachability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneCheck {
    pub pruned: bool,
    pub first_unreachable: Option<u32>,
}

impl ProtocolTree {
    pub fn leaf_outcome(&self, node: u32) -> Option<&Outcome> {
        match &self.nodes[node as usize].kind {
            NodeKind::Leaf { outcome } => Some(&self.outcomes[*outcome as usize]),
            _ => None,
        }
    }

    pub fn intern_outcome(outcomes: &mut Vec<Outcome>, o: Outcome) -> u32 {
        if let Some(i) = outcomes.iter().position(|x| *x == o) {
            i as u32
        } else {
            outcomes.push(o);
            (outcomes.len() - 1) as u32
        }
    }

    /// Checks every structural invariant and reports each breach with
    /// witness nodes; `ok` implies the tree is safe to simulate.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        // Infoset sanity.
        for (ii, inf) in self.infosets.iter().enumerate() {
            if inf.owner >= self.space.bidder_count() {
                violations.push(InvariantViolation::BadInfoset {
                    infoset: ii as u32,
                    detail: format!("owner {} out of range", inf.owner),
                });
                continue;
            }
            if inf.actions.is_empty() {
                violations.push(InvariantViolation::BadInfoset {
                    infoset: ii as u32,
                    detail: "empty action set".into(),
                });
            }
            for (i, a) in inf.actions.iter().enumerate() {
                if inf.actions[..i].contains(a) {
                    violations.push(InvariantViolation::BadInfoset {
                        infoset: ii as u32,
                        detail: format!("duplicate action {a:?}"),
                    });
                }
            }
            let want = self.space.type_count(inf.owner);
            if inf.answer.len() != want {
                violations.push(InvariantViolation::BadAnswer {
                    infoset: ii as u32,
                    detail: format!("answer rows: {} of {}", inf.answer.len(), want),
                });
            }
            for (t, &a) in inf.answer.iter().enumerate() {
                if a as usize >= inf.actions.len() {
                    violations.push(InvariantViolation::BadAnswer {
                        infoset: ii as u32,
                        detail: format!("type {t} maps to action index {a} out of range"),
                    });
                }
            }
        }

        // Tree shape: every node visited exactly once from the root, parent
        // links consistent, edges match the infoset's action set.
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        if self.root as usize >= self.nodes.len() {
            violations.push(InvariantViolation::NotATree {
                node: self.root,
                detail: "root out of range".into(),
            });
            return ValidationReport { violations };
        }
        while let Some(n) = stack.pop() {
            if seen[n as usize] {
                violations.push(InvariantViolation::NotATree {
                    node: n,
                    detail: "node reachable along two paths".into(),
                });
                continue;
            }
            seen[n as usize] = true;
            if let NodeKind::Internal { infoset, children } = &self.nodes[n as usize].kind {
                let Some(inf) = self.infosets.get(*infoset as usize) else {
                    violations.push(InvariantViolation::BadInfoset {
                        infoset: *infoset,
                        detail: format!("node {n} references missing infoset"),
                    });
                    continue;
                };
                let mut edge_actions: Vec<u32> = children.iter().map(|(a, _)| *a).collect();
                edge_actions.sort_unstable();
                let want: Vec<u32> = (0..inf.actions.len() as u32).collect();
                if edge_actions != want {
                    violations.push(InvariantViolation::ActionSetMismatch {
                        node: n,
                        infoset: *infoset,
                    });
                }
                for &(a, c) in children {
                    if c as usize >= self.nodes.len() {
                        violations.push(InvariantViolation::NotATree {
                            node: c,
                            detail: "child out of range".into(),
                        });
                        continue;
                    }
                    if self.nodes[c as usize].parent != Some((n, a)) {
                        violations.push(InvariantViolation::NotATree {
                            node: c,
                            detail: "parent link disagrees with child edge".into(),
                        });
                    }
                    stack.push(c);
                }
            }
        }
        for (n, s) in seen.iter().enumerate() {
            if !s {
                violations.push(InvariantViolation::NotATree {
                    node: n as u32,
                    detail: "node not reachable from root".into(),
                });
            }
        }
        if !violations.is_empty() {
            // Perfect recall needs a well-formed tree to be meaningful.
            return ValidationReport { violations };
        }

        // Perfect recall: nodes sharing an infoset give the owner identical
        // (infoset, action) experience prefixes.
        let experiences = self.owner_experiences();
        let mut by_infoset: HashMap<u32, (u32, &Vec<(u32, u32)>)> = HashMap::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if let NodeKind::Internal { infoset, .. } = &node.kind {
                let exp = &experiences[n];
                match by_infoset.get(infoset) {
                    None => {
                        by_infoset.insert(*infoset, (n as u32, exp));
                    }
                    Some((first, first_exp)) => {
                        if *first_exp != exp {
                            violations.push(InvariantViolation::PerfectRecallBreach {
                                infoset: *infoset,
                                node_a: *first,
                                node_b: n as u32,
                            });
                        }
                    }
                }
            }
        }

        ValidationReport { violations }
    }

    /// For each node, the owner-experience prefix of the node's infoset owner
    /// along the path from the root (own moves only, excluding the node
    /// itself). Leaves get an empty vector.
    fn owner_experiences(&self) -> Vec<Vec<(u32, u32)>> {
        let mut result = vec![Vec::new(); self.nodes.len()];
        // Walk ancestors for each internal node; trees are shallow at the
        // scales this library targets.
        for (n, node) in self.nodes.iter().enumerate() {
            let NodeKind::Internal { infoset, .. } = &node.kind else {
                continue;
            };
            let owner = self.infosets[*infoset as usize].owner;
            let mut path = Vec::new();
            let mut cur = self.nodes[n].parent;
            while let Some((p, a)) = cur {
                if let NodeKind::Internal { infoset: pi, .. } = &self.nodes[p as usize].kind {
                    if self.infosets[*pi as usize].owner == owner {
                        path.push((*pi, a));
                    }
                }
                cur = self.nodes[p as usize].parent;
            }
            path.reverse();
            result[n] = path;
        }
        result
    }

    /// Walk the tree at profile `θ`, returning the (infoset, action) history
    /// and the leaf reached.
    pub fn path(&self, p: ProfileId) -> Result<(Vec<(u32, u32)>, u32), ProtocolError> {
        let mut history = Vec::new();
        let mut cur = self.root;
        loop {
            match &self.nodes[cur as usize].kind {
                NodeKind::Leaf { .. } => return Ok((history, cur)),
                NodeKind::Internal { infoset, children } => {
                    let inf = &self.infosets[*infoset as usize];
                    let t = self.space.component(p, inf.owner);
                    let action = inf.answer[t];
                    let Some(&(_, child)) = children.iter().find(|(a, _)| *a == action) else {
                        return Err(ProtocolError::MissingEdge {
                            node: cur,
                            infoset: inf.label.clone(),
                            action: inf.actions[action as usize].clone(),
                        });
                    };
                    history.push((*infoset, action));
                    cur = child;
                }
            }
        }
    }

    /// Run the protocol at `θ` and assemble the transcript, including each
    /// bidder's experience and the Ω-cell of the terminal outcome.
    pub fn run(
        &self,
        profile: &TypeProfile,
        omega: &ObservationStructure,
    ) -> Result<Transcript, ProtocolError> {
        if profile.0.len() != self.space.bidder_count()
            || profile
                .0
                .iter()
                .enumerate()
                .any(|(i, &t)| t >= self.space.type_count(i))
        {
            return Err(ProtocolError::BadProfile);
        }
        let pid = self.space.profile_id(profile);
        let (history, leaf) = self.path(pid)?;
        let outcome = self.leaf_outcome(leaf).expect("path ends at a leaf").clone();
        let mut experiences = Vec::with_capacity(self.space.bidder_count());
        for bidder in 0..self.space.bidder_count() {
            let moves: Vec<(u32, u32)> = history
                .iter()
                .copied()
                .filter(|(i, _)| self.infosets[*i as usize].owner == bidder)
                .collect();
            let omega_cell = omega.cell(bidder, &outcome)?;
            experiences.push(Experience {
                own_type: profile.0[bidder],
                moves,
                omega_cell,
            });
        }
        Ok(Transcript {
            auctioneer_history: history,
            experiences,
            leaf,
            outcome,
        })
    }

    /// True iff every node lies on some profile's path; otherwise reports the
    /// first unreachable node.
    pub fn is_pruned(&self) -> PruneCheck {
        let reachable = self.reachable_nodes();
        for (n, r) in reachable.iter().enumerate() {
            if !r {
                return PruneCheck {
                    pruned: false,
                    first_unreachable: Some(n as u32),
                };
            }
        }
        PruneCheck {
            pruned: true,
            first_unreachable: None,
        }
    }

    fn reachable_nodes(&self) -> Vec<bool> {
        let mut reachable = vec![false; self.nodes.len()];
        for p in self.space.profiles() {
            let mut cur = self.root;
            reachable[cur as usize] = true;
            loop {
                match &self.nodes[cur as usize].kind {
                    NodeKind::Leaf { .. } => break,
                    NodeKind::Internal { infoset, children } => {
                        let inf = &self.infosets[*infoset as usize];
                        let action = inf.answer[self.space.component(p, inf.owner)];
                        match children.iter().find(|(a, _)| *a == action) {
                            Some(&(_, child)) => {
                                cur = child;
                                reachable[cur as usize] = true;
                            }
                            None => break,
                        }
                    }
                }
            }
        }
        reachable
    }

    /// Restrict the tree to histories reached at some profile. Surviving
    /// infosets keep their identity; their action sets shrink to the actions
    /// that survive somewhere in the infoset, and answers of types that can
    /// no longer reach the infoset are remapped onto a surviving action so
    /// totality still holds. On-path behavior is untouched.
    pub fn prune(&self) -> ProtocolTree {
        let reachable = self.reachable_nodes();
        // Per infoset, which action indices survive at reachable nodes.
        let mut used_actions: HashMap<u32, Vec<bool>> = HashMap::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if !reachable[n] {
                continue;
            }
            if let NodeKind::Internal { infoset, children } = &node.kind {
                let inf = &self.infosets[*infoset as usize];
                let used = used_actions
                    .entry(*infoset)
                    .or_insert_with(|| vec![false; inf.actions.len()]);
                for &(a, c) in children {
                    if reachable[c as usize] {
                        used[a as usize] = true;
                    }
                }
            }
        }

        // Rebuild infosets with compacted action lists.
        let mut infoset_map: HashMap<u32, u32> = HashMap::new();
        let mut new_infosets = Vec::new();
        let mut action_map: HashMap<u32, Vec<Option<u32>>> = HashMap::new();
        let mut keys: Vec<u32> = used_actions.keys().copied().collect();
        keys.sort_unstable();
        for old_id in keys {
            let used = &used_actions[&old_id];
            let inf = &self.infosets[old_id as usize];
            let mut remap = vec![None; inf.actions.len()];
            let mut actions = Vec::new();
            for (i, u) in used.iter().enumerate() {
                if *u {
                    remap[i] = Some(actions.len() as u32);
                    actions.push(inf.actions[i].clone());
                }
            }
            let fallback = remap.iter().flatten().next().copied().unwrap_or(0);
            let answer = inf
                .answer
                .iter()
                .map(|&a| remap[a as usize].unwrap_or(fallback))
                .collect();
            infoset_map.insert(old_id, new_infosets.len() as u32);
            new_infosets.push(Infoset {
                owner: inf.owner,
                label: inf.label.clone(),
                actions,
                answer,
            });
            action_map.insert(old_id, remap);
        }

        // Rebuild surviving nodes.
        let mut node_map: HashMap<u32, u32> = HashMap::new();
        let mut new_nodes = Vec::new();
        for (n, node) in self.nodes.iter().enumerate() {
            if !reachable[n] {
                continue;
            }
            node_map.insert(n as u32, new_nodes.len() as u32);
            new_nodes.push(node.clone());
        }
        let mut outcomes = Vec::new();
        for node in new_nodes.iter_mut() {
            node.parent = node.parent.and_then(|(p, a)| {
                let np = *node_map.get(&p)?;
                let NodeKind::Internal { infoset, .. } = &self.nodes[p as usize].kind else {
                    return None;
                };
                let na = action_map[infoset][a as usize]?;
                Some((np, na))
            });
            node.kind = match &node.kind {
                NodeKind::Leaf { outcome } => {
                    let o = ProtocolTree::intern_outcome(
                        &mut outcomes,
                        self.outcomes[*outcome as usize].clone(),
                    );
                    NodeKind::Leaf { outcome: o }
                }
                NodeKind::Internal { infoset, children } => {
                    let remap = &action_map[infoset];
                    let kids = children
                        .iter()
                        .filter_map(|&(a, c)| {
                            let nc = *node_map.get(&c)?;
                            Some((remap[a as usize].expect("surviving edge"), nc))
                        })
                        .collect();
                    NodeKind::Internal {
                        infoset: infoset_map[infoset],
                        children: kids,
                    }
                }
            };
        }

        ProtocolTree {
            space: self.space.clone(),
            nodes: new_nodes,
            root: node_map[&self.root],
            infosets: new_infosets,
            outcomes,
        }
    }

    /// Renumber nodes and infosets by first on-path appearance under
    /// lexicographic profile order, so structurally equal protocols compare
    /// and serialize identically. Off-path nodes follow in preorder; infosets
    /// never referenced by a node are dropped.
    pub fn canonicalize(&self) -> ProtocolTree {
        let mut node_rank: Vec<Option<u32>> = vec![None; self.nodes.len()];
        let mut infoset_rank: Vec<Option<u32>> = vec![None; self.infosets.len()];
        let mut next_node = 0u32;
        let mut next_infoset = 0u32;
        let visit = |n: u32,
                         node_rank: &mut Vec<Option<u32>>,
                         infoset_rank: &mut Vec<Option<u32>>,
                         next_node: &mut u32,
                         next_infoset: &mut u32| {
            if node_rank[n as usize].is_none() {
                node_rank[n as usize] = Some(*next_node);
                *next_node += 1;
                if let NodeKind::Internal { infoset, .. } = &self.nodes[n as usize].kind {
                    if infoset_rank[*infoset as usize].is_none() {
                        infoset_rank[*infoset as usize] = Some(*next_infoset);
                        *next_infoset += 1;
                    }
                }
            }
        };
        for p in self.space.profiles() {
            let mut cur = self.root;
            visit(cur, &mut node_rank, &mut infoset_rank, &mut next_node, &mut next_infoset);
            loop {
                match &self.nodes[cur as usize].kind {
                    NodeKind::Leaf { .. } => break,
                    NodeKind::Internal { infoset, children } => {
                        let inf = &self.infosets[*infoset as usize];
                        let action = inf.answer[self.space.component(p, inf.owner)];
                        match children.iter().find(|(a, _)| *a == action) {
                            Some(&(_, child)) => {
                                visit(
                                    child,
                                    &mut node_rank,
                                    &mut infoset_rank,
                                    &mut next_node,
                                    &mut next_infoset,
                                );
                                cur = child;
                            }
                            None => break,
                        }
                    }
                }
            }
        }
        // Off-path nodes in preorder after the on-path ones.
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            visit(n, &mut node_rank, &mut infoset_rank, &mut next_node, &mut next_infoset);
            if let NodeKind::Internal { children, .. } = &self.nodes[n as usize].kind {
                for &(_, c) in children.iter().rev() {
                    stack.push(c);
                }
            }
        }

        let node_count = next_node as usize;
        let mut nodes: Vec<Node> = vec![
            Node {
                parent: None,
                label: String::new(),
                kind: NodeKind::Leaf { outcome: 0 },
            };
            node_count
        ];
        let mut outcomes = Vec::new();
        let mut infosets: Vec<Infoset> = Vec::new();
        let mut infoset_order: Vec<(u32, u32)> = infoset_rank
            .iter()
            .enumerate()
            .filter_map(|(old, r)| r.map(|rank| (rank, old as u32)))
            .collect();
        infoset_order.sort_unstable();
        for (rank, old) in &infoset_order {
            let inf = &self.infosets[*old as usize];
            infosets.push(Infoset {
                owner: inf.owner,
                label: format!("i{rank}"),
                actions: inf.actions.clone(),
                answer: inf.answer.clone(),
            });
        }
        let infoset_new = |old: u32| infoset_rank[old as usize].expect("referenced infoset ranked");
        // Inverse rank so outcomes are interned in new-id order; canonical
        // trees must agree on the outcome list, not just the leaf values.
        let mut old_of_new = vec![0u32; node_count];
        for (old, rank) in node_rank.iter().enumerate() {
            if let Some(r) = rank {
                old_of_new[*r as usize] = old as u32;
            }
        }
        for new_id in 0..node_count as u32 {
            let old = old_of_new[new_id as usize] as usize;
            let node = &self.nodes[old];
            let parent = node
                .parent
                .map(|(p, a)| (node_rank[p as usize].expect("parent ranked"), a));
            let kind = match &node.kind {
                NodeKind::Leaf { outcome } => {
                    let o = ProtocolTree::intern_outcome(
                        &mut outcomes,
                        self.outcomes[*outcome as usize].clone(),
                    );
                    NodeKind::Leaf { outcome: o }
                }
                NodeKind::Internal { infoset, children } => {
                    let mut kids: Vec<(u32, u32)> = children
                        .iter()
                        .map(|&(a, c)| (a, node_rank[c as usize].expect("child ranked")))
                        .collect();
                    kids.sort_unstable();
                    NodeKind::Internal {
                        infoset: infoset_new(*infoset),
                        children: kids,
                    }
                }
            };
            nodes[new_id as usize] = Node {
                parent,
                label: format!("n{new_id}"),
                kind,
            };
        }
        ProtocolTree {
            space: self.space.clone(),
            nodes,
            root: 0,
            infosets,
            outcomes,
        }
    }

    /// Collect transcripts for every profile (lexicographic order).
    pub fn run_all(&self, omega: &ObservationStructure) -> Result<Vec<Transcript>, ProtocolError> {
        self.space
            .profiles()
            .map(|p| self.run(&self.space.profile(p), omega))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Partition;

    /// Two-bidder space and a hand-built sealed-bid-style tree for rule
    /// "A wins iff a ≥ b".
    fn tiny_space() -> Arc<TypeSpace> {
        TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap()
    }

    fn sealed_tree(space: &Arc<TypeSpace>) -> ProtocolTree {
        let infosets = vec![
            Infoset {
                owner: 0,
                label: "iA".into(),
                actions: vec!["1".into(), "2".into()],
                answer: vec![0, 1],
            },
            Infoset {
                owner: 1,
                label: "iB".into(),
                actions: vec!["1".into(), "2".into()],
                answer: vec![0, 1],
            },
        ];
        let outcomes = vec![Outcome::Labeled("A".into()), Outcome::Labeled("B".into())];
        // n0: ask A; n1,n2: ask B; leaves by comparison.
        let nodes = vec![
            Node {
                parent: None,
                label: "n0".into(),
                kind: NodeKind::Internal { infoset: 0, children: vec![(0, 1), (1, 2)] },
            },
            Node {
                parent: Some((0, 0)),
                label: "n1".into(),
                kind: NodeKind::Internal { infoset: 1, children: vec![(0, 3), (1, 4)] },
            },
            Node {
                parent: Some((0, 1)),
                label: "n2".into(),
                kind: NodeKind::Internal { infoset: 1, children: vec![(0, 5), (1, 6)] },
            },
            Node { parent: Some((1, 0)), label: "n3".into(), kind: NodeKind::Leaf { outcome: 0 } },
            Node { parent: Some((1, 1)), label: "n4".into(), kind: NodeKind::Leaf { outcome: 1 } },
            Node { parent: Some((2, 0)), label: "n5".into(), kind: NodeKind::Leaf { outcome: 0 } },
            Node { parent: Some((2, 1)), label: "n6".into(), kind: NodeKind::Leaf { outcome: 0 } },
        ];
        ProtocolTree {
            space: space.clone(),
            nodes,
            root: 0,
            infosets,
            outcomes,
        }
    }

    #[test]
    fn sealed_tree_validates_and_runs() {
        let space = tiny_space();
        let tree = sealed_tree(&space);
        assert!(tree.validate().is_ok());
        let omega =
            ObservationStructure::discrete(2, tree.outcomes.clone()).unwrap();
        let t = tree.run(&TypeProfile(vec![0, 1]), &omega).unwrap();
        assert_eq!(t.outcome, Outcome::Labeled("B".into()));
        assert_eq!(t.auctioneer_history.len(), 2);
        assert_eq!(t.experiences[0].moves.len(), 1);
        // Determinism: repeated runs are identical.
        let t2 = tree.run(&TypeProfile(vec![0, 1]), &omega).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn perfect_recall_breach_is_reported_with_witnesses() {
        let space = tiny_space();
        let mut tree = sealed_tree(&space);
        // Re-ask A below both of B's answers at n1, merging the two new nodes
        // into one infoset although A took different earlier actions... here
        // A took the same earlier action, so instead merge a node under n1
        // (A played "1") with a node under n2 (A played "2").
        let extra_infoset = tree.infosets.len() as u32;
        tree.infosets.push(Infoset {
            owner: 0,
            label: "iA2".into(),
            actions: vec!["x".into(), "y".into()],
            answer: vec![0, 1],
        });
        // Replace leaves n3 (path A=1) and n6 (path A=2) by internal nodes of
        // the same new infoset.
        let leaf_a = ProtocolTree::intern_outcome(&mut tree.outcomes, Outcome::Labeled("A".into()));
        for (node, parent) in [(3u32, (1u32, 0u32)), (6u32, (2u32, 1u32))] {
            let base = tree.nodes.len() as u32;
            tree.nodes[node as usize].kind = NodeKind::Internal {
                infoset: extra_infoset,
                children: vec![(0, base), (1, base + 1)],
            };
            tree.nodes.push(Node {
                parent: Some((node, 0)),
                label: format!("x{base}"),
                kind: NodeKind::Leaf { outcome: leaf_a },
            });
            tree.nodes.push(Node {
                parent: Some((node, 1)),
                label: format!("x{}", base + 1),
                kind: NodeKind::Leaf { outcome: leaf_a },
            });
            let _ = parent;
        }
        let report = tree.validate();
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            InvariantViolation::PerfectRecallBreach { node_a: 3, node_b: 6, .. }
        )));
    }

    #[test]
    fn prune_removes_unreachable_edge_and_is_idempotent() {
        let space = tiny_space();
        let mut tree = sealed_tree(&space);
        // Add an action to B's infoset that no type ever selects; every node
        // of the infoset gets the edge so the tree stays valid.
        tree.infosets[1].actions.push("never".into());
        for n in [1u32, 2u32] {
            let base = tree.nodes.len() as u32;
            let leaf = ProtocolTree::intern_outcome(&mut tree.outcomes, Outcome::Labeled("junk".into()));
            if let NodeKind::Internal { children, .. } = &mut tree.nodes[n as usize].kind {
                children.push((2, base));
            }
            tree.nodes.push(Node {
                parent: Some((n, 2)),
                label: format!("junk{n}"),
                kind: NodeKind::Leaf { outcome: leaf },
            });
        }
        assert!(tree.validate().is_ok());
        let check = tree.is_pruned();
        assert!(!check.pruned);
        assert!(check.first_unreachable.is_some());

        let pruned = tree.prune();
        assert!(pruned.validate().is_ok());
        assert!(pruned.is_pruned().pruned);
        assert_eq!(pruned.infosets[1].actions.len(), 2);
        // Idempotence on the already-pruned result.
        let again = pruned.prune();
        assert_eq!(again.canonicalize(), pruned.canonicalize());
        // The induced auctioneer partition is unchanged by pruning.
        let before = crate::observation::auctioneer_view(&tree);
        let after = crate::observation::auctioneer_view(&pruned);
        assert_eq!(before, after);
        let _ = Partition::discrete(space);
    }

    #[test]
    fn canonicalize_is_stable_under_relabeling() {
        let space = tiny_space();
        let tree = sealed_tree(&space);
        let mut renamed = tree.clone();
        for inf in &mut renamed.infosets {
            inf.label = format!("renamed-{}", inf.label);
        }
        for node in &mut renamed.nodes {
            node.label = format!("renamed-{}", node.label);
        }
        assert_eq!(tree.canonicalize(), renamed.canonicalize());
    }
}
