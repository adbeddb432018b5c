//! Seeded random instances and protocols for testing: random finite choice
//! rules with random observation structures, random valid protocol trees
//! (including merged information sets), unreachable-subtree injection, and
//! random utility tables.
//!
//! Generators are deterministic given the RNG, so test corpora are
//! reproducible from a fixed seed.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::model::{
    ChoiceRule, ObservationStructure, Outcome, Rational, TypeLabel, TypeSpace, UtilityModel,
};
use crate::protocol::{Infoset, Node, NodeKind, ProtocolTree};

pub fn random_space(rng: &mut impl Rng, max_bidders: usize, max_types: usize) -> Arc<TypeSpace> {
    let bidders = rng.gen_range(2..=max_bidders.max(2));
    let names: Vec<String> = (0..bidders)
        .map(|i| char::from(b'A' + i as u8).to_string())
        .collect();
    let types: Vec<Vec<TypeLabel>> = (0..bidders)
        .map(|_| {
            let k = rng.gen_range(1..=max_types.max(1));
            (1..=k).map(|v| TypeLabel::new(v.to_string())).collect()
        })
        .collect();
    TypeSpace::new(names, types).expect("generated spaces are valid")
}

pub fn random_rule(rng: &mut impl Rng, space: &Arc<TypeSpace>, max_outcomes: usize) -> ChoiceRule {
    let k = rng.gen_range(1..=max_outcomes.max(1));
    let table: Vec<usize> = (0..space.profile_count())
        .map(|_| rng.gen_range(0..k))
        .collect();
    ChoiceRule::from_fn(space.clone(), |_, p| {
        Outcome::Labeled(format!("o{}", table[p.0 as usize]))
    })
}

/// A random partition of the outcome set per bidder.
pub fn random_omega(
    rng: &mut impl Rng,
    bidder_count: usize,
    outcomes: Vec<Outcome>,
) -> ObservationStructure {
    let mut cells = Vec::new();
    for _ in 0..bidder_count {
        let mut groups: HashMap<usize, Vec<u32>> = HashMap::new();
        let mut max_group = 0;
        for o in 0..outcomes.len() {
            let g = rng.gen_range(0..=max_group);
            if g == max_group {
                max_group += 1;
            }
            groups.entry(g).or_default().push(o as u32);
        }
        let mut bidder_cells: Vec<Vec<u32>> = groups.into_values().collect();
        bidder_cells.sort_unstable_by_key(|c| c[0]);
        cells.push(bidder_cells);
    }
    ObservationStructure::from_cells(bidder_count, outcomes, cells).expect("generated omegas are valid")
}

/// A random valid protocol tree over `space` with leaves drawn from
/// `outcomes`. Queries partition the owner's full type list, so some edges
/// may be unreachable; information sets are sometimes shared between nodes
/// with the same owner experience.
pub fn random_protocol(
    rng: &mut impl Rng,
    space: &Arc<TypeSpace>,
    outcomes: &[Outcome],
    max_depth: usize,
) -> ProtocolTree {
    struct Gen<'a, R: Rng> {
        rng: &'a mut R,
        space: Arc<TypeSpace>,
        outcomes: Vec<Outcome>,
        nodes: Vec<Node>,
        infosets: Vec<Infoset>,
        interned: Vec<Outcome>,
        // (bidder, own history, partition key) -> infoset, for valid reuse.
        reusable: HashMap<(usize, Vec<(u32, u32)>, Vec<u32>), u32>,
    }

    impl<R: Rng> Gen<'_, R> {
        fn leaf(&mut self, parent: Option<(u32, u32)>) -> u32 {
            let id = self.nodes.len() as u32;
            let pick = self.rng.gen_range(0..self.outcomes.len());
            let o = ProtocolTree::intern_outcome(&mut self.interned, self.outcomes[pick].clone());
            self.nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: o },
            });
            id
        }

        fn build(
            &mut self,
            parent: Option<(u32, u32)>,
            depth: usize,
            own_hist: &mut Vec<Vec<(u32, u32)>>,
        ) -> u32 {
            if depth == 0 || self.rng.gen_bool(0.35) {
                return self.leaf(parent);
            }
            let bidder = self.rng.gen_range(0..self.space.bidder_count());
            let n = self.space.type_count(bidder);
            if n < 2 {
                return self.leaf(parent);
            }
            // Random 2–3 block partition of the owner's full type list.
            let blocks = self.rng.gen_range(2..=3.min(n));
            let mut assignment: Vec<u32> = (0..n).map(|t| (t % blocks) as u32).collect();
            for t in 0..n {
                let swap = self.rng.gen_range(0..n);
                assignment.swap(t, swap);
            }
            // Keep every block nonempty.
            for b in 0..blocks as u32 {
                if !assignment.contains(&b) {
                    let slot = self.rng.gen_range(0..n);
                    assignment[slot] = b;
                }
            }
            let key = (bidder, own_hist[bidder].clone(), assignment.clone());
            let reuse = self.rng.gen_bool(0.5);
            let infoset = match self.reusable.get(&key) {
                Some(&i) if reuse => i,
                _ => {
                    let i = self.infosets.len() as u32;
                    self.infosets.push(Infoset {
                        owner: bidder,
                        label: format!("g{i}"),
                        actions: (0..blocks).map(|b| format!("a{b}")).collect(),
                        answer: assignment.clone(),
                    });
                    self.reusable.insert(key, i);
                    i
                }
            };
            let id = self.nodes.len() as u32;
            self.nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: 0 }, // placeholder
            });
            let actions = self.infosets[infoset as usize].actions.len();
            let mut children = Vec::new();
            for a in 0..actions as u32 {
                own_hist[bidder].push((infoset, a));
                let child = self.build(Some((id, a)), depth - 1, own_hist);
                own_hist[bidder].pop();
                children.push((a, child));
            }
            self.nodes[id as usize].kind = NodeKind::Internal { infoset, children };
            id
        }
    }

    let mut gen = Gen {
        rng,
        space: space.clone(),
        outcomes: outcomes.to_vec(),
        nodes: Vec::new(),
        infosets: Vec::new(),
        interned: Vec::new(),
        reusable: HashMap::new(),
    };
    let mut own_hist = vec![Vec::new(); space.bidder_count()];
    gen.build(None, max_depth, &mut own_hist);
    let tree = ProtocolTree {
        space: space.clone(),
        nodes: gen.nodes,
        root: 0,
        infosets: gen.infosets,
        outcomes: gen.interned,
    };
    debug_assert!(tree.validate().is_ok());
    tree
}

/// Add a fresh never-chosen action to one infoset, with a fresh leaf under
/// every node of that infoset. Answer functions are unchanged, so the new
/// subtrees are unreachable and the tree stays valid.
pub fn inject_unreachable(rng: &mut impl Rng, tree: &ProtocolTree) -> ProtocolTree {
    if tree.infosets.is_empty() {
        return tree.clone();
    }
    let mut tree = tree.clone();
    let infoset = rng.gen_range(0..tree.infosets.len()) as u32;
    let new_action = tree.infosets[infoset as usize].actions.len() as u32;
    tree.infosets[infoset as usize]
        .actions
        .push(format!("a{new_action}"));
    let members: Vec<u32> = (0..tree.nodes.len() as u32)
        .filter(|&n| matches!(&tree.nodes[n as usize].kind, NodeKind::Internal { infoset: i, .. } if *i == infoset))
        .collect();
    let pick = rng.gen_range(0..tree.outcomes.len().max(1));
    for m in members {
        let leaf = tree.nodes.len() as u32;
        let outcome = (pick as u32).min(tree.outcomes.len().saturating_sub(1) as u32);
        tree.nodes.push(Node {
            parent: Some((m, new_action)),
            label: format!("n{leaf}"),
            kind: NodeKind::Leaf { outcome },
        });
        if let NodeKind::Internal { children, .. } = &mut tree.nodes[m as usize].kind {
            children.push((new_action, leaf));
        }
    }
    debug_assert!(tree.validate().is_ok());
    tree
}

/// A total random utility table with small integer values.
pub fn random_utility(
    rng: &mut impl Rng,
    space: &TypeSpace,
    outcomes: &[Outcome],
) -> UtilityModel {
    let mut map = HashMap::new();
    for o in outcomes {
        for bidder in 0..space.bidder_count() {
            for t in 0..space.type_count(bidder) {
                map.insert(
                    (o.clone(), bidder, t),
                    Rational::from_integer(rng.gen_range(-4..=4)),
                );
            }
        }
    }
    UtilityModel::Table(map)
}

/// Outcome universe `o0..ok` used together with [`random_rule`].
pub fn labeled_outcomes(k: usize) -> Vec<Outcome> {
    (0..k).map(|i| Outcome::Labeled(format!("o{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_protocols_validate_and_injection_unprunes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let space = random_space(&mut rng, 3, 3);
            let outcomes = labeled_outcomes(3);
            let tree = random_protocol(&mut rng, &space, &outcomes, 4);
            assert!(tree.validate().is_ok());
            let padded = inject_unreachable(&mut rng, &tree);
            assert!(padded.validate().is_ok());
            if !padded.is_pruned().pruned {
                let pruned = padded.prune();
                assert!(pruned.validate().is_ok());
                assert!(pruned.is_pruned().pruned);
            }
        }
    }
}
