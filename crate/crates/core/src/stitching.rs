//! Splitting a rule at a product preimage and composing sub-protocols.
//!
//! A split carves the rule into a quotient (the block collapsed to a fresh
//! sentinel outcome) and a restriction (the rule on the block's own smaller
//! type space). Stitching runs a protocol for the quotient and, where it
//! lands on the sentinel, continues with a protocol for the restriction.
//! The suffix protocol's infosets are instantiated once and shared across
//! all sentinel leaves, so merged infosets stay merged.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::analysis::{implements, AnalysisError};
use crate::model::{ChoiceRule, Outcome, ProfileId, TypeProfile, TypeSpace};
use crate::protocol::{Infoset, Node, NodeKind, ProtocolTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StitchError {
    #[error("no profile maps into the requested outcome subset")]
    EmptyPreimage,
    #[error("preimage is not a product set: {a:?} and {b:?} are inside but their mix {mixed:?} is not")]
    NotProduct {
        a: TypeProfile,
        b: TypeProfile,
        mixed: TypeProfile,
    },
    #[error("prefix protocol does not implement the quotient rule: {0}")]
    PrefixNotImplementing(String),
    #[error("suffix protocol does not implement the restricted rule: {0}")]
    SuffixNotImplementing(String),
    #[error("auctioneer separates block profiles {a:?} and {b:?} in the prefix protocol")]
    AuctioneerSeparatesBlock { a: TypeProfile, b: TypeProfile },
    #[error("bidder {bidder}'s prefix experience differs between block profiles {a:?} and {b:?}")]
    BidderExperienceDiffers {
        bidder: usize,
        a: TypeProfile,
        b: TypeProfile,
    },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// A rule split at a product preimage.
#[derive(Debug, Clone)]
pub struct RuleSplit {
    pub parent: ChoiceRule,
    /// X̂: the outcome values whose preimage forms the block.
    pub outcome_subset: Vec<Outcome>,
    /// Per-bidder sorted type indices of the block.
    pub block: Vec<Vec<usize>>,
    /// The quotient rule on the parent space: sentinel on the block,
    /// unchanged elsewhere.
    pub quotient: ChoiceRule,
    pub sentinel: Outcome,
    pub restricted_space: Arc<TypeSpace>,
    /// The parent rule restricted to the block, on the restricted space.
    pub restricted: ChoiceRule,
}

impl RuleSplit {
    /// Map a restricted-space profile id to the parent-space profile id.
    pub fn embed(&self, p: ProfileId) -> ProfileId {
        let space = self.parent.space();
        let rp = self.restricted_space.profile(p);
        let full: Vec<usize> = rp
            .0
            .iter()
            .enumerate()
            .map(|(i, &r)| self.block[i][r])
            .collect();
        space.profile_id(&TypeProfile(full))
    }

    pub fn contains(&self, p: ProfileId) -> bool {
        let space = self.parent.space();
        (0..space.bidder_count()).all(|i| self.block[i].contains(&space.component(p, i)))
    }
}

/// Split `rule` at the preimage of the outcome subset `xhat`. Rejects empty
/// and non-product preimages; the witness names two block profiles whose
/// coordinate mix escapes the block.
pub fn split_rule(rule: &ChoiceRule, xhat: &[Outcome]) -> Result<RuleSplit, StitchError> {
    let space = rule.space();
    let ids: Vec<u32> = xhat.iter().filter_map(|o| rule.lookup_outcome(o)).collect();
    let in_block: Vec<bool> = space
        .profiles()
        .map(|p| ids.contains(&rule.outcome_id(p)))
        .collect();
    let members: Vec<ProfileId> = space
        .profiles()
        .filter(|p| in_block[p.0 as usize])
        .collect();
    if members.is_empty() {
        return Err(StitchError::EmptyPreimage);
    }

    // Product check with a witness on failure.
    let mut block: Vec<Vec<usize>> = vec![Vec::new(); space.bidder_count()];
    for &p in &members {
        for (i, b) in block.iter_mut().enumerate() {
            let t = space.component(p, i);
            if !b.contains(&t) {
                b.push(t);
            }
        }
    }
    for b in block.iter_mut() {
        b.sort_unstable();
    }
    let closure: usize = block.iter().map(|b| b.len()).product();
    if closure != members.len() {
        for &a in &members {
            for &b in &members {
                for i in 0..space.bidder_count() {
                    let mixed = space.with_component(b, i, space.component(a, i));
                    if !in_block[mixed.0 as usize] {
                        return Err(StitchError::NotProduct {
                            a: space.profile(a),
                            b: space.profile(b),
                            mixed: space.profile(mixed),
                        });
                    }
                }
            }
        }
        unreachable!("non-product preimages always have a one-coordinate witness");
    }

    // Fresh sentinel, never serialized into final protocols.
    let mut sentinel = Outcome::Labeled("$stitch".to_string());
    let mut counter = 0;
    while rule.lookup_outcome(&sentinel).is_some() {
        counter += 1;
        sentinel = Outcome::Labeled(format!("$stitch{counter}"));
    }

    let quotient = ChoiceRule::from_fn(space.clone(), |_, p| {
        if in_block[p.0 as usize] {
            sentinel.clone()
        } else {
            rule.outcome(p).clone()
        }
    });

    let restricted_space = TypeSpace::new(
        (0..space.bidder_count())
            .map(|i| space.bidder_name(i).to_string())
            .collect(),
        block
            .iter()
            .enumerate()
            .map(|(i, b)| b.iter().map(|&t| space.types(i)[t].clone()).collect())
            .collect(),
    )
    .expect("restriction of a valid space is valid");

    let block_for_rule = block.clone();
    let parent_rule = rule.clone();
    let restricted = ChoiceRule::from_fn(restricted_space.clone(), move |rspace, p| {
        let rp = rspace.profile(p);
        let full: Vec<usize> = rp
            .0
            .iter()
            .enumerate()
            .map(|(i, &r)| block_for_rule[i][r])
            .collect();
        parent_rule
            .outcome(parent_rule.space().profile_id(&TypeProfile(full)))
            .clone()
    });

    Ok(RuleSplit {
        parent: rule.clone(),
        outcome_subset: xhat.to_vec(),
        block,
        quotient,
        sentinel,
        restricted_space,
        restricted,
    })
}

/// What `stitch_preconditions` reports when the prefix protocol qualifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StitchReport {
    /// The simpler sufficient condition: within the block, every bidder's
    /// whole prefix strategy is type-independent.
    pub strong_condition: bool,
}

/// Check the stitching conditions: the prefix protocol must merge the whole
/// block for the auctioneer, and within the block each bidder's experience
/// must depend only on their own type.
pub fn stitch_preconditions(
    prefix: &ProtocolTree,
    split: &RuleSplit,
) -> Result<StitchReport, StitchError> {
    implements(prefix, &split.quotient)
        .map_err(|e| StitchError::PrefixNotImplementing(e.to_string()))?;
    let space = split.parent.space();
    let members: Vec<ProfileId> = space.profiles().filter(|p| split.contains(*p)).collect();

    // Condition 1: one auctioneer history across the block.
    let first = members[0];
    let (first_history, _) = prefix.path(first).map_err(AnalysisError::from)?;
    for &p in &members[1..] {
        let (h, _) = prefix.path(p).map_err(AnalysisError::from)?;
        if h != first_history {
            return Err(StitchError::AuctioneerSeparatesBlock {
                a: space.profile(first),
                b: space.profile(p),
            });
        }
    }

    // Condition 2: within the block, a bidder's own-move subsequence is a
    // function of their own type alone. Outcome cells agree automatically
    // (every block profile ends at the sentinel).
    for bidder in 0..space.bidder_count() {
        let mut by_type: HashMap<usize, (ProfileId, Vec<(u32, u32)>)> = HashMap::new();
        for &p in &members {
            let (h, _) = prefix.path(p).map_err(AnalysisError::from)?;
            let own: Vec<(u32, u32)> = h
                .into_iter()
                .filter(|(i, _)| prefix.infosets[*i as usize].owner == bidder)
                .collect();
            let t = space.component(p, bidder);
            match by_type.get(&t) {
                None => {
                    by_type.insert(t, (p, own));
                }
                Some((q, prior)) => {
                    if *prior != own {
                        return Err(StitchError::BidderExperienceDiffers {
                            bidder,
                            a: space.profile(*q),
                            b: space.profile(p),
                        });
                    }
                }
            }
        }
    }

    // The stronger sufficient condition: block types of each bidder answer
    // identically at every prefix infoset.
    let mut strong = true;
    'outer: for (bidder, block_types) in split.block.iter().enumerate() {
        for inf in &prefix.infosets {
            if inf.owner != bidder {
                continue;
            }
            let first = inf.answer[block_types[0]];
            if block_types.iter().any(|&t| inf.answer[t] != first) {
                strong = false;
                break 'outer;
            }
        }
    }

    Ok(StitchReport {
        strong_condition: strong,
    })
}

/// Replace every sentinel leaf of the prefix protocol by a copy of the
/// suffix protocol. The suffix's infosets are imported once (answer
/// functions extended off the block onto a fixed surviving action) and
/// shared across all copies.
pub fn stitch(
    prefix: &ProtocolTree,
    suffix: &ProtocolTree,
    split: &RuleSplit,
) -> Result<ProtocolTree, StitchError> {
    stitch_preconditions(prefix, split)?;
    if suffix.space != split.restricted_space {
        return Err(StitchError::SuffixNotImplementing(
            "suffix protocol is not on the restricted type space".to_string(),
        ));
    }
    implements(suffix, &split.restricted)
        .map_err(|e| StitchError::SuffixNotImplementing(e.to_string()))?;

    let space = split.parent.space();
    let mut nodes = prefix.nodes.clone();
    let mut infosets = prefix.infosets.clone();
    let mut outcomes = Vec::new();

    // Re-intern prefix leaf outcomes, remembering sentinel leaves.
    let mut sentinel_leaves = Vec::new();
    for (n, node) in nodes.iter_mut().enumerate() {
        if let NodeKind::Leaf { outcome } = &node.kind {
            let value = prefix.outcomes[*outcome as usize].clone();
            if value == split.sentinel {
                sentinel_leaves.push(n as u32);
            } else {
                let o = ProtocolTree::intern_outcome(&mut outcomes, value);
                node.kind = NodeKind::Leaf { outcome: o };
            }
        }
    }

    // Import suffix infosets once, extending answers to the parent type
    // lists. Types outside the block never reach these infosets; they are
    // pinned to the first block type's action to keep answers total.
    let infoset_base = infosets.len() as u32;
    for inf in &suffix.infosets {
        let block_types = &split.block[inf.owner];
        let fallback = inf.answer[0];
        let mut answer = vec![fallback; space.type_count(inf.owner)];
        for (r, &t) in block_types.iter().enumerate() {
            answer[t] = inf.answer[r];
        }
        infosets.push(Infoset {
            owner: inf.owner,
            label: format!("s.{}", inf.label),
            actions: inf.actions.clone(),
            answer,
        });
    }

    // Copy the suffix tree under each sentinel leaf; nodes are fresh per
    // copy, infoset ids shared.
    for (copy, leaf) in sentinel_leaves.iter().enumerate() {
        let base = nodes.len() as u32;
        let offset = |id: u32| {
            if id == suffix.root {
                *leaf
            } else if id < suffix.root {
                base + id
            } else {
                base + id - 1
            }
        };
        for (sid, snode) in suffix.nodes.iter().enumerate() {
            let kind = match &snode.kind {
                NodeKind::Leaf { outcome } => {
                    let o = ProtocolTree::intern_outcome(
                        &mut outcomes,
                        suffix.outcomes[*outcome as usize].clone(),
                    );
                    NodeKind::Leaf { outcome: o }
                }
                NodeKind::Internal { infoset, children } => NodeKind::Internal {
                    infoset: infoset_base + infoset,
                    children: children.iter().map(|&(a, c)| (a, offset(c))).collect(),
                },
            };
            if sid as u32 == suffix.root {
                let parent = nodes[*leaf as usize].parent;
                nodes[*leaf as usize] = Node {
                    parent,
                    label: format!("g{copy}.{}", snode.label),
                    kind,
                };
            } else {
                nodes.push(Node {
                    parent: snode
                        .parent
                        .map(|(p, a)| (offset(p), a)),
                    label: format!("g{copy}.{}", snode.label),
                    kind,
                });
            }
        }
    }

    let stitched = ProtocolTree {
        space: space.clone(),
        nodes,
        root: prefix.root,
        infosets,
        outcomes,
    };
    debug_assert!(stitched.validate().is_ok());
    Ok(stitched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auctions::{self, BidFunctions};
    use crate::model::{Rational, TypeSpace};

    fn fpa5() -> crate::auctions::AuctionInstance {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3, 4, 5]).unwrap();
        auctions::make_fpa(space, BidFunctions::Identity).unwrap()
    }

    #[test]
    fn price_threshold_split_is_the_low_block() {
        let inst = fpa5();
        let xhat: Vec<Outcome> = inst
            .rule
            .outcomes()
            .iter()
            .filter(|o| matches!(o, Outcome::Auction { price, .. } if *price <= Rational::from_integer(3)))
            .cloned()
            .collect();
        let split = split_rule(&inst.rule, &xhat).unwrap();
        assert_eq!(split.block, vec![vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(split.restricted_space.profile_count(), 9);
        // Quotient is constant (the sentinel) on the block.
        for p in inst.rule.space().profiles() {
            if split.contains(p) {
                assert_eq!(split.quotient.outcome(p), &split.sentinel);
            } else {
                assert_eq!(split.quotient.outcome(p), inst.rule.outcome(p));
            }
        }
    }

    #[test]
    fn full_outcome_set_split_gives_constant_quotient() {
        let inst = fpa5();
        let xhat = inst.rule.outcomes().to_vec();
        let split = split_rule(&inst.rule, &xhat).unwrap();
        assert_eq!(split.restricted_space.profile_count(), 25);
        let q = crate::model::rule_partition(&split.quotient);
        assert_eq!(q.cell_count(), 1);
    }

    #[test]
    fn singleton_outcome_split_is_a_product() {
        // X̂ = {"A wins at 3"}: preimage {3}×{1,2,3} under identity bids.
        let inst = fpa5();
        let xhat = vec![Outcome::Auction {
            winner: 0,
            price: Rational::from_integer(3),
        }];
        let split = split_rule(&inst.rule, &xhat).unwrap();
        assert_eq!(split.block, vec![vec![2], vec![0, 1, 2]]);
    }

    #[test]
    fn non_product_preimage_is_rejected_with_witness() {
        // Rule whose "low" region is an L-shape, not a product.
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap();
        let rule = crate::model::ChoiceRule::from_fn(space, |s, p| {
            let a = s.component(p, 0);
            let b = s.component(p, 1);
            Outcome::Labeled(if a == 1 && b == 1 { "hi".into() } else { "lo".into() })
        });
        let err = split_rule(&rule, &[Outcome::Labeled("lo".into())]).unwrap_err();
        match err {
            StitchError::NotProduct { mixed, .. } => {
                assert_eq!(mixed, TypeProfile(vec![1, 1]));
            }
            other => panic!("expected NotProduct, got {other:?}"),
        }
    }

    #[test]
    fn sealed_bid_prefix_fails_condition_one() {
        let inst = fpa5();
        let xhat: Vec<Outcome> = inst
            .rule
            .outcomes()
            .iter()
            .filter(|o| matches!(o, Outcome::Auction { price, .. } if *price <= Rational::from_integer(3)))
            .cloned()
            .collect();
        let split = split_rule(&inst.rule, &xhat).unwrap();
        let sealed = auctions::sealed_bid(&split.quotient);
        let err = stitch_preconditions(&sealed, &split).unwrap_err();
        assert!(matches!(err, StitchError::AuctioneerSeparatesBlock { .. }));
    }
}
