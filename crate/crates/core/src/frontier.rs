//! Exhaustive enumeration of pruned implementing protocols on micro
//! instances, canonical deduplication by privacy signature, dominance graph
//! construction, and frontier certification.
//!
//! The search runs in two phases. Phase one enumerates query-tree shapes
//! over knowledge states (the per-bidder sets of types still consistent with
//! the auctioneer's history), memoized by state so branches share work: at
//! each state a protocol may stop (when the rule is already determined),
//! split any contending bidder's remaining types by any set partition, or —
//! within the padding budget — insert a non-splitting dummy query. Phase two
//! enumerates every perfect-recall-valid grouping of same-bidder query nodes
//! into information sets (nodes qualify when they agree on the owner's
//! experience so far and on the split they apply), materializes each choice
//! as a protocol, and deduplicates by privacy-profile signature.
//!
//! Every emitted protocol implements the rule by construction: leaves exist
//! only where the rule is constant on the knowledge state. Dedup by
//! signature is lossless for frontier purposes since dominance is a function
//! of the induced partitions alone.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{combine_orders, implements, AnalysisError, Dominance};
use crate::model::{refinement_compare, ChoiceRule, ModelError, ObservationStructure, TypeProfile};
use crate::observation::{privacy_profile, PrivacyProfile};
use crate::protocol::{Infoset, Node, NodeKind, ProtocolTree};

#[derive(Debug, Error)]
pub enum FrontierError {
    #[error("instance exceeds the search bounds: {0}")]
    OutOfBounds(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergingMode {
    /// One infoset per query node.
    Off,
    /// All perfect-recall-valid groupings.
    Exhaustive,
}

/// Bounds on the enumerated class. Verdicts always record the bounds used.
#[derive(Debug, Clone, Serialize)]
pub struct SearchBounds {
    pub max_bidders: usize,
    pub max_types_per_bidder: usize,
    /// `None` means the intrinsic bound Σ(|Θ_i|−1) plus the padding budget.
    pub max_depth: Option<usize>,
    /// Extra non-splitting (single-action) queries allowed per path.
    pub padding: usize,
    pub merging: MergingMode,
    /// Cap on materialized candidate protocols.
    pub node_budget: u64,
    #[serde(skip)]
    pub time_budget: Option<Duration>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_bidders: 4,
            max_types_per_bidder: 4,
            max_depth: None,
            padding: 0,
            merging: MergingMode::Exhaustive,
            node_budget: 10_000_000,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassDescription {
    pub bidders: usize,
    pub types_per_bidder: Vec<usize>,
    pub padding: usize,
    pub merging: MergingMode,
    pub max_depth: usize,
}

impl std::fmt::Display for ClassDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pruned implementing protocols, {} bidders, types {:?}, depth<={}, padding={}, merging={}",
            self.bidders,
            self.types_per_bidder,
            self.max_depth,
            self.padding,
            match self.merging {
                MergingMode::Off => "off",
                MergingMode::Exhaustive => "exhaustive",
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub reason: String,
}

/// The deduplicated stream of canonical protocols for one instance/class.
#[derive(Debug)]
pub struct Enumeration {
    pub class: ClassDescription,
    /// One canonical representative per distinct privacy signature, in
    /// deterministic generation order.
    pub protocols: Vec<ProtocolTree>,
    pub signatures: Vec<PrivacyProfile>,
    /// Candidates materialized before deduplication.
    pub examined: u64,
    pub truncated: Option<Truncation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontierStatus {
    OnFrontierWithinClass,
    Dominated,
    /// The scan was truncated before finding a dominator; frontier
    /// membership is never claimed from a truncated scan.
    Inconclusive,
}

#[derive(Debug)]
pub struct FrontierVerdict {
    pub status: FrontierStatus,
    /// A replayable strict dominator when `status == Dominated`.
    pub dominator: Option<ProtocolTree>,
    pub class: ClassDescription,
    /// Distinct canonical signatures examined.
    pub examined: u64,
    pub truncated: Option<Truncation>,
}

/// Frontier signatures plus the strict-dominance graph over all enumerated
/// signatures. Edge (u, v) means signature u strictly privacy-dominates v.
#[derive(Debug)]
pub struct ParetoResult {
    pub class: ClassDescription,
    pub signatures: Vec<PrivacyProfile>,
    pub frontier: Vec<usize>,
    pub edges: Vec<(u32, u32)>,
    pub examined: u64,
    pub truncated: Option<Truncation>,
}

type Mask = u16;

#[derive(Debug)]
enum Shape {
    Leaf,
    Query {
        bidder: usize,
        /// Partition blocks of the bidder's remaining mask, ordered by least
        /// type index; a single full block marks a dummy query.
        blocks: Vec<Mask>,
        children: Vec<Rc<Shape>>,
    },
}

struct Budget {
    node_budget: u64,
    deadline: Option<Instant>,
    examined: u64,
    truncated: Option<Truncation>,
}

impl Budget {
    fn tick(&mut self) -> bool {
        if self.truncated.is_some() {
            return false;
        }
        self.examined += 1;
        if self.examined > self.node_budget {
            self.truncated = Some(Truncation {
                reason: format!("node budget of {} exhausted", self.node_budget),
            });
            return false;
        }
        if let Some(deadline) = self.deadline {
            if self.examined % 256 == 0 && Instant::now() > deadline {
                self.truncated = Some(Truncation {
                    reason: "time budget exhausted".to_string(),
                });
                return false;
            }
        }
        true
    }
}

/// All set partitions of the bits of `mask` (blocks keyed by least member),
/// via restricted-growth strings. `min_blocks` filters the trivial one.
fn mask_partitions(mask: Mask, min_blocks: usize) -> Vec<Vec<Mask>> {
    let bits: Vec<u16> = (0..16).filter(|b| mask & (1 << b) != 0).collect();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; bits.len()];
    loop {
        let block_count = rgs.iter().copied().max().unwrap_or(0) + 1;
        if block_count >= min_blocks {
            let mut blocks = vec![0 as Mask; block_count];
            for (i, &g) in rgs.iter().enumerate() {
                blocks[g] |= 1 << bits[i];
            }
            out.push(blocks);
        }
        // Next restricted-growth string.
        let mut i = bits.len();
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}

/// All set partitions of `0..n` as block lists (each block sorted, blocks by
/// least member). Used for grouping query nodes into infosets.
fn index_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let block_count = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![Vec::new(); block_count];
        for (i, &g) in rgs.iter().enumerate() {
            blocks[g].push(i);
        }
        out.push(blocks);
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}

struct ShapeGen<'a> {
    rule: &'a ChoiceRule,
    memo: HashMap<(Vec<Mask>, usize, usize), Rc<Vec<Rc<Shape>>>>,
}

impl<'a> ShapeGen<'a> {
    fn const_outcome(&self, state: &[Mask]) -> Option<u32> {
        let space = self.rule.space();
        let lists: Vec<Vec<usize>> = state
            .iter()
            .map(|m| (0..16).filter(|b| m & (1 << b) != 0).map(|b| b as usize).collect())
            .collect();
        let mut first = None;
        let mut idx = vec![0usize; lists.len()];
        loop {
            let profile = TypeProfile(idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect());
            let o = self.rule.outcome_id(space.profile_id(&profile));
            match first {
                None => first = Some(o),
                Some(f) if f != o => return None,
                _ => {}
            }
            let mut k = lists.len();
            loop {
                if k == 0 {
                    return first;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn shapes(&mut self, state: &[Mask], padding_left: usize, depth_left: usize) -> Rc<Vec<Rc<Shape>>> {
        let key = (state.to_vec(), padding_left, depth_left);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out: Vec<Rc<Shape>> = Vec::new();
        if self.const_outcome(state).is_some() {
            out.push(Rc::new(Shape::Leaf));
        }
        if depth_left > 0 {
            for bidder in 0..state.len() {
                if (state[bidder].count_ones() as usize) >= 2 {
                    for blocks in mask_partitions(state[bidder], 2) {
                        let child_lists: Vec<Rc<Vec<Rc<Shape>>>> = blocks
                            .iter()
                            .map(|&b| {
                                let mut child_state = state.to_vec();
                                child_state[bidder] = b;
                                self.shapes(&child_state, padding_left, depth_left - 1)
                            })
                            .collect();
                        if child_lists.iter().any(|l| l.is_empty()) {
                            continue;
                        }
                        // Odometer over child alternatives.
                        let mut pick = vec![0usize; blocks.len()];
                        loop {
                            let children: Vec<Rc<Shape>> = pick
                                .iter()
                                .zip(&child_lists)
                                .map(|(&i, l)| l[i].clone())
                                .collect();
                            out.push(Rc::new(Shape::Query {
                                bidder,
                                blocks: blocks.clone(),
                                children,
                            }));
                            let mut k = blocks.len();
                            loop {
                                if k == 0 {
                                    break;
                                }
                                k -= 1;
                                pick[k] += 1;
                                if pick[k] < child_lists[k].len() {
                                    break;
                                }
                                pick[k] = 0;
                            }
                            if pick.iter().all(|&i| i == 0) {
                                break;
                            }
                        }
                    }
                }
                if padding_left > 0 {
                    let tails = self.shapes(state, padding_left - 1, depth_left - 1);
                    for tail in tails.iter() {
                        out.push(Rc::new(Shape::Query {
                            bidder,
                            blocks: vec![state[bidder]],
                            children: vec![tail.clone()],
                        }));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

/// A shape flattened to preorder nodes with knowledge states and the owner's
/// local move path.
struct FlatNode {
    parent: Option<(usize, u32)>,
    state: Vec<Mask>,
    /// `None` for leaves.
    query: Option<QueryInfo>,
}

struct QueryInfo {
    bidder: usize,
    blocks: Vec<Mask>,
    /// The owner's own-move path to this node: (flat index of the owner's
    /// earlier query, action taken there).
    own_path: Vec<(usize, u32)>,
}

fn flatten(shape: &Shape, root_state: &[Mask]) -> Vec<FlatNode> {
    let mut flat = Vec::new();
    fn walk(
        shape: &Shape,
        state: Vec<Mask>,
        parent: Option<(usize, u32)>,
        own_paths: &mut Vec<Vec<(usize, u32)>>,
        flat: &mut Vec<FlatNode>,
    ) {
        let id = flat.len();
        match shape {
            Shape::Leaf => flat.push(FlatNode {
                parent,
                state,
                query: None,
            }),
            Shape::Query { bidder, blocks, children } => {
                flat.push(FlatNode {
                    parent,
                    state: state.clone(),
                    query: Some(QueryInfo {
                        bidder: *bidder,
                        blocks: blocks.clone(),
                        own_path: own_paths[*bidder].clone(),
                    }),
                });
                for (a, child) in children.iter().enumerate() {
                    let mut child_state = state.clone();
                    child_state[*bidder] = blocks[a];
                    own_paths[*bidder].push((id, a as u32));
                    walk(child, child_state, Some((id, a as u32)), own_paths, flat);
                    own_paths[*bidder].pop();
                }
            }
        }
    }
    let mut own_paths = vec![Vec::new(); root_state.len()];
    walk(shape, root_state.to_vec(), None, &mut own_paths, &mut flat);
    flat
}

/// Enumerate, for one bidder, every perfect-recall-valid assignment of that
/// bidder's query nodes to information sets. An assignment maps each flat
/// node index to a bidder-local infoset id. Nodes may share an infoset only
/// when the owner's resolved experience (local infoset ids and actions of
/// their own earlier moves) and their split coincide.
fn bidder_assignments(
    flat: &[FlatNode],
    bidder: usize,
    merging: MergingMode,
) -> Vec<HashMap<usize, u32>> {
    // Bidder's query nodes by own depth.
    let mut by_depth: Vec<Vec<usize>> = Vec::new();
    for (i, node) in flat.iter().enumerate() {
        if let Some(q) = &node.query {
            if q.bidder == bidder {
                let d = q.own_path.len();
                while by_depth.len() <= d {
                    by_depth.push(Vec::new());
                }
                by_depth[d].push(i);
            }
        }
    }
    let mut results = Vec::new();
    // Depth-first over (depth, group) choices. `assigned` maps flat node ->
    // local infoset id; `next_id` grows deterministically.
    fn recurse(
        flat: &[FlatNode],
        by_depth: &[Vec<usize>],
        depth: usize,
        assigned: &mut HashMap<usize, u32>,
        next_id: &mut u32,
        merging: MergingMode,
        results: &mut Vec<HashMap<usize, u32>>,
    ) {
        if depth == by_depth.len() {
            results.push(assigned.clone());
            return;
        }
        // Group this depth's nodes by (resolved own history, split).
        let mut groups: Vec<(Vec<(u32, u32)>, Vec<Mask>, Vec<usize>)> = Vec::new();
        for &n in &by_depth[depth] {
            let q = flat[n].query.as_ref().unwrap();
            let hist: Vec<(u32, u32)> = q
                .own_path
                .iter()
                .map(|&(node, action)| (assigned[&node], action))
                .collect();
            match groups
                .iter_mut()
                .find(|(h, b, _)| *h == hist && *b == q.blocks)
            {
                Some((_, _, members)) => members.push(n),
                None => groups.push((hist, q.blocks.clone(), vec![n])),
            }
        }
        // Choose a set partition per group; combine via odometer.
        let options: Vec<Vec<Vec<Vec<usize>>>> = groups
            .iter()
            .map(|(_, _, members)| match merging {
                MergingMode::Off => {
                    vec![members.iter().map(|&m| vec![m]).collect::<Vec<_>>()]
                }
                MergingMode::Exhaustive => index_partitions(members.len())
                    .into_iter()
                    .map(|partition| {
                        partition
                            .into_iter()
                            .map(|block| block.into_iter().map(|i| members[i]).collect())
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let mut pick = vec![0usize; groups.len()];
        loop {
            let saved_next = *next_id;
            let mut touched = Vec::new();
            for (g, &p) in pick.iter().enumerate() {
                for block in &options[g][p] {
                    let id = *next_id;
                    *next_id += 1;
                    for &member in block {
                        assigned.insert(member, id);
                        touched.push(member);
                    }
                }
            }
            recurse(flat, by_depth, depth + 1, assigned, next_id, merging, results);
            for member in touched {
                assigned.remove(&member);
            }
            *next_id = saved_next;

            let mut k = groups.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break;
                }
                pick[k] = 0;
            }
            if pick.iter().all(|&p| p == 0) {
                return;
            }
        }
    }
    if by_depth.is_empty() {
        results.push(HashMap::new());
        return results;
    }
    let mut assigned = HashMap::new();
    let mut next_id = 0;
    recurse(flat, &by_depth, 0, &mut assigned, &mut next_id, merging, &mut results);
    results
}

/// Materialize a protocol from a flattened shape and per-bidder infoset
/// assignments.
fn materialize(
    rule: &ChoiceRule,
    flat: &[FlatNode],
    assignments: &[&HashMap<usize, u32>],
) -> ProtocolTree {
    let space = rule.space().clone();
    let mut infoset_ids: HashMap<(usize, u32), u32> = HashMap::new();
    let mut infosets: Vec<Infoset> = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut outcomes = Vec::new();
    for (i, fnode) in flat.iter().enumerate() {
        match &fnode.query {
            None => {
                let lists: Vec<Vec<usize>> = fnode
                    .state
                    .iter()
                    .map(|m| (0..16usize).filter(|b| m & (1 << b) != 0).collect())
                    .collect();
                let profile = TypeProfile(lists.iter().map(|l| l[0]).collect());
                let o = rule.outcome(space.profile_id(&profile)).clone();
                let o = ProtocolTree::intern_outcome(&mut outcomes, o);
                nodes.push(Node {
                    parent: fnode.parent.map(|(p, a)| (p as u32, a)),
                    label: format!("n{i}"),
                    kind: NodeKind::Leaf { outcome: o },
                });
            }
            Some(q) => {
                let local = assignments[q.bidder][&i];
                let infoset = *infoset_ids.entry((q.bidder, local)).or_insert_with(|| {
                    let id = infosets.len() as u32;
                    let actions: Vec<String> =
                        (0..q.blocks.len()).map(|a| format!("a{a}")).collect();
                    let answer: Vec<u32> = (0..space.type_count(q.bidder))
                        .map(|t| {
                            q.blocks
                                .iter()
                                .position(|b| b & (1 << t) != 0)
                                .unwrap_or(0) as u32
                        })
                        .collect();
                    infosets.push(Infoset {
                        owner: q.bidder,
                        label: format!("q{id}"),
                        actions,
                        answer,
                    });
                    id
                });
                // Children are the next flat nodes in preorder; recover them
                // from parent links lazily after the loop.
                nodes.push(Node {
                    parent: fnode.parent.map(|(p, a)| (p as u32, a)),
                    label: format!("n{i}"),
                    kind: NodeKind::Internal {
                        infoset,
                        children: Vec::new(),
                    },
                });
            }
        }
    }
    for i in 0..flat.len() {
        if let Some((p, a)) = flat[i].parent {
            if let NodeKind::Internal { children, .. } = &mut nodes[p].kind {
                children.push((a, i as u32));
            }
        }
    }
    ProtocolTree {
        space,
        nodes,
        root: 0,
        infosets,
        outcomes,
    }
}

fn intrinsic_depth(rule: &ChoiceRule, padding: usize) -> usize {
    let space = rule.space();
    (0..space.bidder_count())
        .map(|i| space.type_count(i) - 1)
        .sum::<usize>()
        + padding
}

fn class_description(rule: &ChoiceRule, bounds: &SearchBounds) -> ClassDescription {
    let space = rule.space();
    ClassDescription {
        bidders: space.bidder_count(),
        types_per_bidder: (0..space.bidder_count()).map(|i| space.type_count(i)).collect(),
        padding: bounds.padding,
        merging: bounds.merging,
        max_depth: bounds
            .max_depth
            .unwrap_or_else(|| intrinsic_depth(rule, bounds.padding)),
    }
}

/// Deterministic, exhaustive enumeration of the class. The stream holds one
/// canonical representative per privacy signature; a truncation marker means
/// the class was not exhausted.
pub fn enumerate(
    rule: &ChoiceRule,
    omega: &ObservationStructure,
    bounds: &SearchBounds,
) -> Result<Enumeration, FrontierError> {
    let space = rule.space();
    if space.bidder_count() > bounds.max_bidders {
        return Err(FrontierError::OutOfBounds(format!(
            "{} bidders exceed max_bidders={}",
            space.bidder_count(),
            bounds.max_bidders
        )));
    }
    for i in 0..space.bidder_count() {
        if space.type_count(i) > bounds.max_types_per_bidder || space.type_count(i) > 16 {
            return Err(FrontierError::OutOfBounds(format!(
                "bidder {} has {} types, over max_types_per_bidder={}",
                space.bidder_name(i),
                space.type_count(i),
                bounds.max_types_per_bidder
            )));
        }
    }
    let class = class_description(rule, bounds);
    let root_state: Vec<Mask> = (0..space.bidder_count())
        .map(|i| ((1u32 << space.type_count(i)) - 1) as Mask)
        .collect();
    let mut gen = ShapeGen {
        rule,
        memo: HashMap::new(),
    };
    let shapes = gen.shapes(&root_state, bounds.padding, class.max_depth);

    let mut budget = Budget {
        node_budget: bounds.node_budget,
        deadline: bounds.time_budget.map(|d| Instant::now() + d),
        examined: 0,
        truncated: None,
    };
    let mut seen: HashMap<PrivacyProfile, usize> = HashMap::new();
    let mut protocols = Vec::new();
    let mut signatures = Vec::new();

    'shapes: for shape in shapes.iter() {
        let flat = flatten(shape, &root_state);
        let per_bidder: Vec<Vec<HashMap<usize, u32>>> = (0..space.bidder_count())
            .map(|b| bidder_assignments(&flat, b, bounds.merging))
            .collect();
        let mut pick = vec![0usize; space.bidder_count()];
        loop {
            if !budget.tick() {
                break 'shapes;
            }
            let assignment: Vec<&HashMap<usize, u32>> = pick
                .iter()
                .zip(&per_bidder)
                .map(|(&i, l)| &l[i])
                .collect();
            let tree = materialize(rule, &flat, &assignment).canonicalize();
            debug_assert!(tree.validate().is_ok());
            debug_assert!(tree.is_pruned().pruned);
            let signature = privacy_profile(&tree, omega).map_err(AnalysisError::from)?;
            if !seen.contains_key(&signature) {
                seen.insert(signature.clone(), protocols.len());
                protocols.push(tree);
                signatures.push(signature);
            }
            let mut k = pick.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < per_bidder[k].len() {
                    break;
                }
                pick[k] = 0;
            }
            if pick.iter().all(|&i| i == 0) {
                break;
            }
        }
    }

    Ok(Enumeration {
        class,
        protocols,
        signatures,
        examined: budget.examined,
        truncated: budget.truncated,
    })
}

/// Does `q` strictly privacy-dominate `p` (reveal weakly less in every
/// component and strictly less in at least one)?
pub fn strictly_dominates(q: &PrivacyProfile, p: &PrivacyProfile) -> Result<bool, ModelError> {
    let auctioneer = refinement_compare(&q.auctioneer, &p.auctioneer)?;
    let bidders = q
        .bidders
        .iter()
        .zip(&p.bidders)
        .map(|(a, b)| refinement_compare(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(combine_orders(auctioneer, &bidders) == Dominance::FirstDominates)
}

impl Enumeration {
    /// Index of the first enumerated signature strictly dominating `target`.
    pub fn find_dominator(&self, target: &PrivacyProfile) -> Result<Option<usize>, ModelError> {
        for (i, sig) in self.signatures.iter().enumerate() {
            if strictly_dominates(sig, target)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Certify `tree` against an already-computed enumeration of its class.
pub fn certify_with(
    enumeration: &Enumeration,
    tree: &ProtocolTree,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<FrontierVerdict, FrontierError> {
    implements(tree, rule)?;
    let target = privacy_profile(tree, omega).map_err(AnalysisError::from)?;
    let dominator = enumeration.find_dominator(&target)?;
    let status = match (&dominator, &enumeration.truncated) {
        (Some(_), _) => FrontierStatus::Dominated,
        (None, None) => FrontierStatus::OnFrontierWithinClass,
        (None, Some(_)) => FrontierStatus::Inconclusive,
    };
    Ok(FrontierVerdict {
        status,
        dominator: dominator.map(|i| enumeration.protocols[i].clone()),
        class: enumeration.class.clone(),
        examined: enumeration.signatures.len() as u64,
        truncated: enumeration.truncated.clone(),
    })
}

/// Scan the enumerated class for a strict privacy dominator of `tree`.
/// `candidates` (typically the named auction protocols) are checked first as
/// a cheap early exit; a candidate only counts when it implements the rule.
pub fn certify(
    tree: &ProtocolTree,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
    bounds: &SearchBounds,
    candidates: &[&ProtocolTree],
) -> Result<FrontierVerdict, FrontierError> {
    implements(tree, rule)?;
    let target = privacy_profile(tree, omega).map_err(AnalysisError::from)?;
    for candidate in candidates {
        if implements(candidate, rule).is_err() {
            continue;
        }
        let sig = privacy_profile(candidate, omega).map_err(AnalysisError::from)?;
        if strictly_dominates(&sig, &target)? {
            return Ok(FrontierVerdict {
                status: FrontierStatus::Dominated,
                dominator: Some((*candidate).clone().canonicalize()),
                class: class_description(rule, bounds),
                examined: 1,
                truncated: None,
            });
        }
    }
    let enumeration = enumerate(rule, omega, bounds)?;
    certify_with(&enumeration, tree, rule, omega)
}

/// The maximal antichain of enumerated signatures under strict privacy
/// dominance, plus the full dominance graph.
pub fn pareto_signatures(
    rule: &ChoiceRule,
    omega: &ObservationStructure,
    bounds: &SearchBounds,
) -> Result<ParetoResult, FrontierError> {
    let enumeration = enumerate(rule, omega, bounds)?;
    let n = enumeration.signatures.len();
    let mut edges = Vec::new();
    let mut dominated = vec![false; n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            if strictly_dominates(&enumeration.signatures[u], &enumeration.signatures[v])? {
                edges.push((u as u32, v as u32));
                dominated[v] = true;
            }
        }
    }
    let frontier = (0..n).filter(|&i| !dominated[i]).collect();
    Ok(ParetoResult {
        class: enumeration.class,
        signatures: enumeration.signatures,
        frontier,
        edges,
        examined: enumeration.examined,
        truncated: enumeration.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auctions::{self, BidFunctions};
    use crate::model::{Outcome, TypeSpace};

    #[test]
    fn mask_partitions_of_three_bits() {
        let parts = mask_partitions(0b111, 2);
        // Bell(3) = 5 partitions, one of which is the single block.
        assert_eq!(parts.len(), 4);
        assert!(parts.contains(&vec![0b001, 0b110]));
        assert!(parts.contains(&vec![0b011, 0b100]));
        assert!(parts.contains(&vec![0b101, 0b010]));
        assert!(parts.contains(&vec![0b001, 0b010, 0b100]));
    }

    #[test]
    fn degenerate_instance_padding_dedups_to_empty_protocol() {
        let space = TypeSpace::shared_numeric(&["A"], &[1, 2]).unwrap();
        let rule = ChoiceRule::from_fn(space, |_, _| Outcome::Labeled("x".into()));
        let omega = ObservationStructure::discrete(1, rule.outcomes().to_vec()).unwrap();
        let plain = enumerate(&rule, &omega, &SearchBounds::default()).unwrap();
        assert!(plain.truncated.is_none());
        // The empty protocol plus the (wasteful but legal) splitting query.
        assert_eq!(plain.signatures.len(), 2);
        assert!(plain
            .protocols
            .iter()
            .any(|p| matches!(p.nodes[p.root as usize].kind, NodeKind::Leaf { .. })));

        let padded_bounds = SearchBounds {
            padding: 1,
            ..SearchBounds::default()
        };
        let padded = enumerate(&rule, &omega, &padded_bounds).unwrap();
        // Dummy queries add candidates but no new signatures.
        assert!(padded.examined > plain.examined);
        assert_eq!(padded.signatures.len(), plain.signatures.len());
        assert!(padded.truncated.is_none());
    }

    #[test]
    fn fpa_two_by_two_stream_contains_named_signatures() {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap();
        let inst = auctions::make_fpa(space, BidFunctions::Identity).unwrap();
        let enumeration = enumerate(&inst.rule, &inst.omega, &SearchBounds::default()).unwrap();
        assert!(enumeration.truncated.is_none());
        let sealed = crate::observation::privacy_profile(
            &auctions::sealed_bid(&inst.rule),
            &inst.omega,
        )
        .unwrap();
        let descending = crate::observation::privacy_profile(
            &auctions::descending(&inst).unwrap(),
            &inst.omega,
        )
        .unwrap();
        assert!(enumeration.signatures.contains(&sealed));
        assert!(enumeration.signatures.contains(&descending));
    }

    #[test]
    fn truncation_marks_the_stream_and_certify_is_inconclusive() {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
        let inst = auctions::make_fpa(space, BidFunctions::Identity).unwrap();
        let bounds = SearchBounds {
            node_budget: 3,
            ..SearchBounds::default()
        };
        let enumeration = enumerate(&inst.rule, &inst.omega, &bounds).unwrap();
        assert!(enumeration.truncated.is_some());
        let sealed = auctions::sealed_bid(&inst.rule);
        let verdict = certify_with(&enumeration, &sealed, &inst.rule, &inst.omega).unwrap();
        assert!(matches!(
            verdict.status,
            FrontierStatus::Inconclusive | FrontierStatus::Dominated
        ));
        assert!(verdict.truncated.is_some() || verdict.status == FrontierStatus::Dominated);
    }
}
