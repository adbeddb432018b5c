//! First-price and second-price auction instances and the named protocols:
//! sealed-bid, descending, ascending, ascending-join, and
//! descending-then-sealed-bid.
//!
//! Ties break to the lowest bidder index in both rules. Auction constructors
//! require each bidder's type labels to be numeric and listed in increasing
//! value order, since the clock protocols walk thresholds through that order.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::model::{
    ChoiceRule, ModelError, ObservationStructure, Outcome, Rational, TypeSpace,
    UtilityModel,
};
use crate::protocol::{Infoset, Node, NodeKind, ProtocolTree};
use crate::stitching::{split_rule, stitch, StitchError};

#[derive(Debug, Error)]
pub enum AuctionError {
    #[error("bidder {bidder}'s type labels must be numeric and strictly increasing")]
    TypesNotIncreasing { bidder: String },
    #[error("bid functions must match the type lists and be strictly increasing (bidder {bidder})")]
    BadBids { bidder: String },
    #[error("this constructor needs a first-price instance")]
    NotFirstPrice,
    #[error("this constructor needs a second-price instance")]
    NotSecondPrice,
    #[error("second-price rule needs at least two bidders")]
    TooFewBidders,
    #[error("no bidder's top remaining type resolves the rule; the descending construction only fits first-price-like rules")]
    NoResolvingQuery,
    #[error("bidders {a} and {b} both resolve the rule at their top remaining type")]
    AmbiguousQuery { a: usize, b: usize },
    #[error(transparent)]
    Stitch(#[from] StitchError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuctionKind {
    FirstPrice,
    SecondPrice,
}

/// A complete auction environment: numeric ordered type space, choice rule,
/// the own-(allocation, transfer) observation structure, and quasilinear
/// utilities. First-price instances carry their bid functions.
#[derive(Debug, Clone)]
pub struct AuctionInstance {
    pub kind: AuctionKind,
    pub space: Arc<TypeSpace>,
    pub rule: ChoiceRule,
    pub omega: ObservationStructure,
    pub utility: UtilityModel,
    /// Bid per (bidder, type index); `None` for second-price instances.
    pub bids: Option<Vec<Vec<Rational>>>,
}

#[derive(Debug, Clone)]
pub enum BidFunctions {
    /// Bid equal to the type's numeric value.
    Identity,
    Explicit(Vec<Vec<Rational>>),
}

fn numeric_increasing(space: &TypeSpace) -> Result<Vec<Vec<Rational>>, AuctionError> {
    let mut values = Vec::new();
    for bidder in 0..space.bidder_count() {
        let mut row = Vec::new();
        for (t, label) in space.types(bidder).iter().enumerate() {
            let v = label.value.ok_or_else(|| AuctionError::TypesNotIncreasing {
                bidder: space.bidder_name(bidder).to_string(),
            })?;
            if t > 0 && v <= row[t - 1] {
                return Err(AuctionError::TypesNotIncreasing {
                    bidder: space.bidder_name(bidder).to_string(),
                });
            }
            row.push(v);
        }
        values.push(row);
    }
    Ok(values)
}

/// First-price rule: the lowest-index bidder among the highest bids wins and
/// pays their own bid; losers get (0, 0).
pub fn make_fpa(space: Arc<TypeSpace>, bids: BidFunctions) -> Result<AuctionInstance, AuctionError> {
    let values = numeric_increasing(&space)?;
    let bids = match bids {
        BidFunctions::Identity => values,
        BidFunctions::Explicit(b) => {
            for (bidder, row) in b.iter().enumerate() {
                let ok = row.len() == space.type_count(bidder)
                    && row.windows(2).all(|w| w[0] < w[1]);
                if b.len() != space.bidder_count() || !ok {
                    return Err(AuctionError::BadBids {
                        bidder: space.bidder_name(bidder.min(space.bidder_count() - 1)).to_string(),
                    });
                }
            }
            b
        }
    };
    let bids_for_rule = bids.clone();
    let rule = ChoiceRule::from_fn(space.clone(), move |s, p| {
        let mut winner = 0;
        let mut best = bids_for_rule[0][s.component(p, 0)];
        for i in 1..s.bidder_count() {
            let b = bids_for_rule[i][s.component(p, i)];
            if b > best {
                best = b;
                winner = i;
            }
        }
        Outcome::Auction { winner, price: best }
    });
    let omega = ObservationStructure::auction_default(space.bidder_count(), rule.outcomes().to_vec())?;
    Ok(AuctionInstance {
        kind: AuctionKind::FirstPrice,
        space,
        rule,
        omega,
        utility: UtilityModel::Quasilinear,
        bids: Some(bids),
    })
}

/// Second-price rule: the lowest-index bidder among the highest values wins
/// and pays the highest other value.
pub fn make_spa(space: Arc<TypeSpace>) -> Result<AuctionInstance, AuctionError> {
    if space.bidder_count() < 2 {
        return Err(AuctionError::TooFewBidders);
    }
    let values = numeric_increasing(&space)?;
    let values_for_rule = values;
    let rule = ChoiceRule::from_fn(space.clone(), move |s, p| {
        let vals: Vec<Rational> = (0..s.bidder_count())
            .map(|i| values_for_rule[i][s.component(p, i)])
            .collect();
        let best = *vals.iter().max().unwrap();
        let winner = vals.iter().position(|v| *v == best).unwrap();
        let price = vals
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != winner)
            .map(|(_, v)| *v)
            .max()
            .unwrap_or_else(Rational::zero);
        Outcome::Auction { winner, price }
    });
    let omega = ObservationStructure::auction_default(space.bidder_count(), rule.outcomes().to_vec())?;
    Ok(AuctionInstance {
        kind: AuctionKind::SecondPrice,
        space,
        rule,
        omega,
        utility: UtilityModel::Quasilinear,
        bids: None,
    })
}

/// Sealed-bid protocol for any rule: each bidder is queried once, in index
/// order, with their full type list as the action set; answers are truthful.
pub fn sealed_bid(rule: &ChoiceRule) -> ProtocolTree {
    let space = rule.space().clone();
    let infosets: Vec<Infoset> = (0..space.bidder_count())
        .map(|bidder| Infoset {
            owner: bidder,
            label: format!("report-{}", space.bidder_name(bidder)),
            actions: space.types(bidder).iter().map(|t| t.text.clone()).collect(),
            answer: (0..space.type_count(bidder) as u32).collect(),
        })
        .collect();
    let mut nodes = Vec::new();
    let mut outcomes = Vec::new();
    // Depth-first construction; `reports` pins the types chosen so far.
    fn build(
        rule: &ChoiceRule,
        space: &TypeSpace,
        nodes: &mut Vec<Node>,
        outcomes: &mut Vec<Outcome>,
        parent: Option<(u32, u32)>,
        reports: &mut Vec<usize>,
    ) -> u32 {
        let id = nodes.len() as u32;
        let bidder = reports.len();
        if bidder == space.bidder_count() {
            let p = space.profile_id(&crate::model::TypeProfile(reports.clone()));
            let o = ProtocolTree::intern_outcome(outcomes, rule.outcome(p).clone());
            nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: o },
            });
            return id;
        }
        nodes.push(Node {
            parent,
            label: format!("n{id}"),
            kind: NodeKind::Leaf { outcome: 0 }, // placeholder
        });
        let mut children = Vec::new();
        for t in 0..space.type_count(bidder) {
            reports.push(t);
            let child = build(rule, space, nodes, outcomes, Some((id, t as u32)), reports);
            reports.pop();
            children.push((t as u32, child));
        }
        nodes[id as usize].kind = NodeKind::Internal {
            infoset: bidder as u32,
            children,
        };
        id
    }
    let mut reports = Vec::new();
    build(rule, &space, &mut nodes, &mut outcomes, None, &mut reports);
    ProtocolTree {
        space,
        nodes,
        root: 0,
        infosets,
        outcomes,
    }
}

/// Is the rule constant on the product of per-bidder remaining prefixes?
fn const_outcome_on(
    rule: &ChoiceRule,
    remaining: &[Vec<usize>],
) -> Option<u32> {
    let space = rule.space();
    let mut first: Option<u32> = None;
    let mut idx = vec![0usize; remaining.len()];
    loop {
        let profile = crate::model::TypeProfile(
            idx.iter().zip(remaining).map(|(&i, r)| r[i]).collect(),
        );
        let o = rule.outcome_id(space.profile_id(&profile));
        match first {
            None => first = Some(o),
            Some(f) if f != o => return None,
            _ => {}
        }
        let mut k = remaining.len();
        loop {
            if k == 0 {
                return first;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < remaining[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The descending construction, generalized over any rule for which it is
/// well-defined: while the rule is not yet determined, exactly one bidder's
/// top remaining type must resolve it outright; ask that bidder whether
/// their value is at least that threshold. "Yes" settles the outcome; "no"
/// shaves the top of their range. Each query node is its own infoset.
pub fn descending_core(rule: &ChoiceRule) -> Result<ProtocolTree, AuctionError> {
    let space = rule.space().clone();
    let mut nodes: Vec<Node> = Vec::new();
    let mut infosets: Vec<Infoset> = Vec::new();
    let mut outcomes: Vec<Outcome> = Vec::new();

    // Remaining types per bidder are always prefixes [0, hi).
    fn build(
        rule: &ChoiceRule,
        space: &Arc<TypeSpace>,
        nodes: &mut Vec<Node>,
        infosets: &mut Vec<Infoset>,
        outcomes: &mut Vec<Outcome>,
        parent: Option<(u32, u32)>,
        hi: &mut Vec<usize>,
    ) -> Result<u32, AuctionError> {
        let remaining: Vec<Vec<usize>> = hi.iter().map(|&h| (0..h).collect()).collect();
        let id = nodes.len() as u32;
        if let Some(o) = const_outcome_on(rule, &remaining) {
            let o = ProtocolTree::intern_outcome(outcomes, rule.outcomes()[o as usize].clone());
            nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: o },
            });
            return Ok(id);
        }
        // Find the unique bidder whose top remaining type resolves the rule.
        let mut candidate: Option<(usize, u32)> = None;
        for bidder in 0..space.bidder_count() {
            if hi[bidder] < 2 {
                continue;
            }
            let mut slice = remaining.clone();
            slice[bidder] = vec![hi[bidder] - 1];
            if let Some(o) = const_outcome_on(rule, &slice) {
                match candidate {
                    None => candidate = Some((bidder, o)),
                    Some((first, _)) => {
                        return Err(AuctionError::AmbiguousQuery { a: first, b: bidder })
                    }
                }
            }
        }
        let Some((bidder, yes_outcome)) = candidate else {
            return Err(AuctionError::NoResolvingQuery);
        };
        let threshold = hi[bidder] - 1;
        let infoset = infosets.len() as u32;
        infosets.push(Infoset {
            owner: bidder,
            label: format!(
                "{}>={}",
                space.bidder_name(bidder),
                space.types(bidder)[threshold].text
            ),
            actions: vec!["yes".into(), "no".into()],
            answer: (0..space.type_count(bidder))
                .map(|t| if t >= threshold { 0 } else { 1 })
                .collect(),
        });
        nodes.push(Node {
            parent,
            label: format!("n{id}"),
            kind: NodeKind::Leaf { outcome: 0 }, // placeholder
        });
        let yes_leaf = nodes.len() as u32;
        let o = ProtocolTree::intern_outcome(outcomes, rule.outcomes()[yes_outcome as usize].clone());
        nodes.push(Node {
            parent: Some((id, 0)),
            label: format!("n{yes_leaf}"),
            kind: NodeKind::Leaf { outcome: o },
        });
        hi[bidder] -= 1;
        let no_child = build(rule, space, nodes, infosets, outcomes, Some((id, 1)), hi)?;
        hi[bidder] += 1;
        nodes[id as usize].kind = NodeKind::Internal {
            infoset,
            children: vec![(0, yes_leaf), (1, no_child)],
        };
        Ok(id)
    }

    let mut hi: Vec<usize> = (0..space.bidder_count()).map(|i| space.type_count(i)).collect();
    build(rule, &space, &mut nodes, &mut infosets, &mut outcomes, None, &mut hi)?;
    Ok(ProtocolTree {
        space,
        nodes,
        root: 0,
        infosets,
        outcomes,
    })
}

/// Descending (Dutch) protocol for a first-price instance.
pub fn descending(inst: &AuctionInstance) -> Result<ProtocolTree, AuctionError> {
    if inst.kind != AuctionKind::FirstPrice {
        return Err(AuctionError::NotFirstPrice);
    }
    descending_core(&inst.rule)
}

/// Ascending (English clock) protocol for a second-price instance. The
/// clock queries the contending bidder (two or more remaining types) whose
/// next own ladder price is lowest; on price ties the higher index answers
/// first, so the tie-favored lower-index bidder is asked only while the
/// outcome still depends on them. A bidder at their minimum remaining type
/// drops; the protocol ends the moment the rule is settled on the remaining
/// profiles. All query nodes of one bidder at one price share an
/// information set, so bidders never see how many rivals remain.
pub fn ascending(inst: &AuctionInstance) -> Result<ProtocolTree, AuctionError> {
    if inst.kind != AuctionKind::SecondPrice {
        return Err(AuctionError::NotSecondPrice);
    }
    let rule = &inst.rule;
    let space = rule.space().clone();
    let mut nodes: Vec<Node> = Vec::new();
    let mut infosets: Vec<Infoset> = Vec::new();
    let mut infoset_at: HashMap<(usize, usize), u32> = HashMap::new();
    let mut outcomes: Vec<Outcome> = Vec::new();

    // Remaining types per bidder are contiguous ranges [lo, hi).
    #[allow(clippy::too_many_arguments)]
    fn build(
        rule: &ChoiceRule,
        space: &Arc<TypeSpace>,
        nodes: &mut Vec<Node>,
        infosets: &mut Vec<Infoset>,
        infoset_at: &mut HashMap<(usize, usize), u32>,
        outcomes: &mut Vec<Outcome>,
        parent: Option<(u32, u32)>,
        ranges: &mut Vec<(usize, usize)>,
    ) -> Result<u32, AuctionError> {
        let remaining: Vec<Vec<usize>> =
            ranges.iter().map(|&(lo, hi)| (lo..hi).collect()).collect();
        let id = nodes.len() as u32;
        if let Some(o) = const_outcome_on(rule, &remaining) {
            let o = ProtocolTree::intern_outcome(outcomes, rule.outcomes()[o as usize].clone());
            nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: o },
            });
            return Ok(id);
        }
        // Lowest clock price among contenders; price ties go to the higher
        // index, leaving the tie-favored bidder unasked when settled.
        let mut pick: Option<(Rational, usize)> = None;
        for bidder in 0..space.bidder_count() {
            let (lo, hi) = ranges[bidder];
            if hi - lo < 2 {
                continue;
            }
            let price = space.numeric_value(bidder, lo)?;
            if pick.map_or(true, |(best, _)| price <= best) {
                pick = Some((price, bidder));
            }
        }
        let (_, bidder) = pick.expect("a non-constant product state has a contending bidder");
        let (lo, hi) = ranges[bidder];
        let infoset = *infoset_at.entry((bidder, lo)).or_insert_with(|| {
            let i = infosets.len() as u32;
            infosets.push(Infoset {
                owner: bidder,
                label: format!(
                    "{}@{}",
                    space.bidder_name(bidder),
                    space.types(bidder)[lo].text
                ),
                actions: vec!["stay".into(), "drop".into()],
                answer: (0..space.type_count(bidder))
                    .map(|t| if t <= lo { 1 } else { 0 })
                    .collect(),
            });
            i
        });
        nodes.push(Node {
            parent,
            label: format!("n{id}"),
            kind: NodeKind::Leaf { outcome: 0 }, // placeholder
        });
        ranges[bidder] = (lo + 1, hi);
        let stay = build(rule, space, nodes, infosets, infoset_at, outcomes, Some((id, 0)), ranges)?;
        ranges[bidder] = (lo, lo + 1);
        let drop = build(rule, space, nodes, infosets, infoset_at, outcomes, Some((id, 1)), ranges)?;
        ranges[bidder] = (lo, hi);
        nodes[id as usize].kind = NodeKind::Internal {
            infoset,
            children: vec![(0, stay), (1, drop)],
        };
        Ok(id)
    }

    let mut ranges: Vec<(usize, usize)> = (0..space.bidder_count())
        .map(|i| (0, space.type_count(i)))
        .collect();
    build(
        rule,
        &space,
        &mut nodes,
        &mut infosets,
        &mut infoset_at,
        &mut outcomes,
        None,
        &mut ranges,
    )?;
    Ok(ProtocolTree {
        space,
        nodes,
        root: 0,
        infosets,
        outcomes,
    })
}

fn auction_key(o: &Outcome) -> (Rational, usize) {
    match o {
        Outcome::Auction { winner, price } => (*price, *winner),
        Outcome::Labeled(_) => unreachable!("second-price outcomes carry payloads"),
    }
}

/// Ascending-join protocol for a second-price instance. Maintains the set of
/// remaining type profiles and a tentative outcome (the lexicographic
/// minimum by price then winner); bidders are asked, in index order, whether
/// they can rule the tentative outcome out. A rule-out updates the state and
/// restarts from the first bidder; a full pass with nobody ruling out ends
/// the auction. Queries that cannot split the asked bidder's remaining types
/// are skipped, and query nodes with the same bidder, same own history and
/// same split share an information set.
pub fn ascending_join(inst: &AuctionInstance) -> Result<ProtocolTree, AuctionError> {
    if inst.kind != AuctionKind::SecondPrice {
        return Err(AuctionError::NotSecondPrice);
    }
    let rule = &inst.rule;
    let space = rule.space().clone();
    let mut nodes: Vec<Node> = Vec::new();
    let mut infosets: Vec<Infoset> = Vec::new();
    type InfosetKey = (usize, Vec<(u32, u32)>, Vec<usize>);
    let mut infoset_at: HashMap<InfosetKey, u32> = HashMap::new();
    let mut outcomes: Vec<Outcome> = Vec::new();

    struct Ctx<'a> {
        rule: &'a ChoiceRule,
        space: Arc<TypeSpace>,
        nodes: Vec<Node>,
        infosets: Vec<Infoset>,
        infoset_at: HashMap<InfosetKey, u32>,
        outcomes: Vec<Outcome>,
    }

    fn tentative(ctx: &Ctx, remaining: &[Vec<usize>]) -> u32 {
        let space = ctx.rule.space();
        let mut best: Option<(Rational, usize, u32)> = None;
        let mut idx = vec![0usize; remaining.len()];
        loop {
            let profile = crate::model::TypeProfile(
                idx.iter().zip(remaining).map(|(&i, r)| r[i]).collect(),
            );
            let oid = ctx.rule.outcome_id(space.profile_id(&profile));
            let (price, winner) = auction_key(&ctx.rule.outcomes()[oid as usize]);
            if best.map_or(true, |(bp, bw, _)| (price, winner) < (bp, bw)) {
                best = Some((price, winner, oid));
            }
            let mut k = remaining.len();
            loop {
                if k == 0 {
                    return best.unwrap().2;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < remaining[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Can any opponent assignment of `remaining` give outcome `x` when
    /// `bidder` has type `t`?
    fn can_produce(ctx: &Ctx, remaining: &[Vec<usize>], bidder: usize, t: usize, x: u32) -> bool {
        let space = ctx.rule.space();
        let mut idx = vec![0usize; remaining.len()];
        loop {
            let profile = crate::model::TypeProfile(
                idx.iter()
                    .enumerate()
                    .map(|(i, &k)| if i == bidder { t } else { remaining[i][k] })
                    .collect(),
            );
            if ctx.rule.outcome_id(space.profile_id(&profile)) == x {
                return true;
            }
            let mut k = remaining.len();
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                if k == bidder {
                    continue;
                }
                idx[k] += 1;
                if idx[k] < remaining[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// One pass from `start`: ask each bidder in order whether they can rule
    /// out the tentative outcome `x`; a full quiet pass ends in a leaf.
    fn pass(
        ctx: &mut Ctx,
        parent: Option<(u32, u32)>,
        remaining: &mut Vec<Vec<usize>>,
        own_hist: &mut Vec<Vec<(u32, u32)>>,
        start: usize,
        x: u32,
    ) -> u32 {
        let n = ctx.space.bidder_count();
        for bidder in start..n {
            let yes_set: Vec<usize> = remaining[bidder]
                .iter()
                .copied()
                .filter(|&t| !can_produce(ctx, remaining, bidder, t, x))
                .collect();
            if yes_set.is_empty() {
                continue;
            }
            debug_assert!(yes_set.len() < remaining[bidder].len());
            let key: InfosetKey = (bidder, own_hist[bidder].clone(), yes_set.clone());
            let infoset = match ctx.infoset_at.get(&key) {
                Some(&i) => i,
                None => {
                    let i = ctx.infosets.len() as u32;
                    let in_yes: Vec<bool> = {
                        let mut v = vec![false; ctx.space.type_count(bidder)];
                        for &t in &yes_set {
                            v[t] = true;
                        }
                        v
                    };
                    ctx.infosets.push(Infoset {
                        owner: bidder,
                        label: format!("{}-ruleout-{}", ctx.space.bidder_name(bidder), i),
                        actions: vec!["yes".into(), "no".into()],
                        answer: in_yes.iter().map(|&b| if b { 0 } else { 1 }).collect(),
                    });
                    ctx.infoset_at.insert(key, i);
                    i
                }
            };
            let id = ctx.nodes.len() as u32;
            ctx.nodes.push(Node {
                parent,
                label: format!("n{id}"),
                kind: NodeKind::Leaf { outcome: 0 }, // placeholder
            });
            // "Yes" restarts from bidder 0 with a fresh tentative outcome.
            let no_set: Vec<usize> = remaining[bidder]
                .iter()
                .copied()
                .filter(|t| !yes_set.contains(t))
                .collect();
            let saved = remaining[bidder].clone();
            remaining[bidder] = yes_set;
            own_hist[bidder].push((infoset, 0));
            let fresh = tentative(ctx, remaining);
            let yes_child = pass(ctx, Some((id, 0)), remaining, own_hist, 0, fresh);
            own_hist[bidder].pop();
            remaining[bidder] = no_set;
            own_hist[bidder].push((infoset, 1));
            let no_child = pass(ctx, Some((id, 1)), remaining, own_hist, bidder + 1, x);
            own_hist[bidder].pop();
            remaining[bidder] = saved;
            ctx.nodes[id as usize].kind = NodeKind::Internal {
                infoset,
                children: vec![(0, yes_child), (1, no_child)],
            };
            return id;
        }
        // Nobody can rule the tentative outcome out: choose it.
        let id = ctx.nodes.len() as u32;
        let o = ProtocolTree::intern_outcome(
            &mut ctx.outcomes,
            ctx.rule.outcomes()[x as usize].clone(),
        );
        ctx.nodes.push(Node {
            parent,
            label: format!("n{id}"),
            kind: NodeKind::Leaf { outcome: o },
        });
        id
    }

    let mut ctx = Ctx {
        rule,
        space: space.clone(),
        nodes: std::mem::take(&mut nodes),
        infosets: std::mem::take(&mut infosets),
        infoset_at: std::mem::take(&mut infoset_at),
        outcomes: std::mem::take(&mut outcomes),
    };
    let mut remaining: Vec<Vec<usize>> = (0..space.bidder_count())
        .map(|i| (0..space.type_count(i)).collect())
        .collect();
    let mut own_hist = vec![Vec::new(); space.bidder_count()];
    let x = tentative(&ctx, &remaining);
    pass(&mut ctx, None, &mut remaining, &mut own_hist, 0, x);
    Ok(ProtocolTree {
        space,
        nodes: ctx.nodes,
        root: 0,
        infosets: ctx.infosets,
        outcomes: ctx.outcomes,
    })
}

/// Descend until the price would fall to `threshold` or lower, then run a
/// sealed-bid auction among the remaining low block. With the threshold at
/// or above the top price this is the sealed-bid protocol; with it below
/// every price it is the plain descending protocol.
pub fn descending_then_sealed(
    inst: &AuctionInstance,
    threshold: Rational,
) -> Result<ProtocolTree, AuctionError> {
    if inst.kind != AuctionKind::FirstPrice {
        return Err(AuctionError::NotFirstPrice);
    }
    let xhat: Vec<Outcome> = inst
        .rule
        .outcomes()
        .iter()
        .filter(|o| matches!(o, Outcome::Auction { price, .. } if *price <= threshold))
        .cloned()
        .collect();
    if xhat.is_empty() {
        return descending(inst);
    }
    let split = split_rule(&inst.rule, &xhat)?;
    let prefix = descending_core(&split.quotient)?;
    let suffix = sealed_bid(&split.restricted);
    Ok(stitch(&prefix, &suffix, &split)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TypeProfile;

    fn fpa(values: &[i64]) -> AuctionInstance {
        let space = TypeSpace::shared_numeric(&["A", "B"], values).unwrap();
        make_fpa(space, BidFunctions::Identity).unwrap()
    }

    #[test]
    fn fpa_table_matches_definition_points() {
        let inst = fpa(&[1, 2, 3, 4, 5]);
        let s = inst.rule.space();
        let at = |a: usize, b: usize| {
            inst.rule
                .outcome(s.profile_id(&TypeProfile(vec![a, b])))
                .clone()
        };
        // θ=(3,2): A wins paying 3; θ=(2,2): tie to A; θ=(2,4): B wins at 4.
        assert_eq!(at(2, 1), Outcome::Auction { winner: 0, price: Rational::from_integer(3) });
        assert_eq!(at(1, 1), Outcome::Auction { winner: 0, price: Rational::from_integer(2) });
        assert_eq!(at(1, 3), Outcome::Auction { winner: 1, price: Rational::from_integer(4) });
    }

    #[test]
    fn spa_table_matches_definition_points() {
        let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3, 4, 5]).unwrap();
        let inst = make_spa(space).unwrap();
        let s = inst.rule.space();
        let at = |v: [usize; 3]| inst.rule.outcome(s.profile_id(&TypeProfile(v.to_vec()))).clone();
        // θ=(3,5,2) → bidder 2 wins paying 3; θ=(1,2,2) → bidder 2 wins paying 2.
        assert_eq!(at([2, 4, 1]), Outcome::Auction { winner: 1, price: Rational::from_integer(3) });
        assert_eq!(at([0, 1, 1]), Outcome::Auction { winner: 1, price: Rational::from_integer(2) });
        // θ=(4,4) two-bidder tie handled by the shared rule: min index wins.
        let two = make_spa(TypeSpace::shared_numeric(&["1", "2"], &[1, 2, 3, 4]).unwrap()).unwrap();
        let p = two.rule.space().profile_id(&TypeProfile(vec![3, 3]));
        assert_eq!(
            two.rule.outcome(p),
            &Outcome::Auction { winner: 0, price: Rational::from_integer(4) }
        );
    }

    #[test]
    fn descending_simulates_the_paper_walk() {
        let inst = fpa(&[1, 2, 3, 4, 5]);
        let tree = descending(&inst).unwrap();
        assert!(tree.validate().is_ok());
        assert!(tree.is_pruned().pruned);
        // θ=(3,5): ask A "≥5" (no), ask B "≥5" (yes), B wins at 5.
        let t = tree.run(&TypeProfile(vec![2, 4]), &inst.omega).unwrap();
        assert_eq!(t.auctioneer_history.len(), 2);
        let labels: Vec<&str> = t
            .auctioneer_history
            .iter()
            .map(|(i, _)| tree.infosets[*i as usize].label.as_str())
            .collect();
        assert_eq!(labels, vec!["A>=5", "B>=5"]);
        assert_eq!(t.outcome, Outcome::Auction { winner: 1, price: Rational::from_integer(5) });
        // θ=(1,1): the all-no path; A wins at 1 without a final query.
        let t = tree.run(&TypeProfile(vec![0, 0]), &inst.omega).unwrap();
        assert_eq!(t.outcome, Outcome::Auction { winner: 0, price: Rational::from_integer(1) });
        assert_eq!(t.auctioneer_history.len(), 8);
    }

    #[test]
    fn descending_rejects_second_price_rules() {
        let space = TypeSpace::shared_numeric(&["1", "2"], &[1, 2, 3]).unwrap();
        let inst = make_spa(space).unwrap();
        assert!(matches!(
            descending_core(&inst.rule),
            Err(AuctionError::NoResolvingQuery)
        ));
    }

    #[test]
    fn ascending_clock_order_and_price() {
        let space = TypeSpace::shared_numeric(&["1", "2"], &[1, 2, 3, 4, 5]).unwrap();
        let inst = make_spa(space).unwrap();
        let tree = ascending(&inst).unwrap();
        assert!(tree.validate().is_ok());
        assert!(tree.is_pruned().pruned);
        // θ=(2,4): bidder 1 drops at 2; bidder 2 wins paying 2 and was
        // queried at prices 1 and 2 only.
        let t = tree.run(&TypeProfile(vec![1, 3]), &inst.omega).unwrap();
        assert_eq!(t.outcome, Outcome::Auction { winner: 1, price: Rational::from_integer(2) });
        let b2_prices: Vec<&str> = t.experiences[1]
            .moves
            .iter()
            .map(|(i, _)| tree.infosets[*i as usize].label.as_str())
            .collect();
        assert_eq!(b2_prices, vec!["2@1", "2@2"]);
        // Tie θ=(4,4): bidder 1 wins at 4 (both drop at the tie price).
        let t = tree.run(&TypeProfile(vec![3, 3]), &inst.omega).unwrap();
        assert_eq!(t.outcome, Outcome::Auction { winner: 0, price: Rational::from_integer(4) });
    }

    #[test]
    fn ascending_join_first_informative_query_is_bidder_two() {
        let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3]).unwrap();
        let inst = make_spa(space).unwrap();
        let tree = ascending_join(&inst).unwrap();
        assert!(tree.validate().is_ok());
        // Root asks bidder 2 (index 1) to separate {1} from {2,3}: bidder 1
        // can never rule out the tentative outcome "1 wins at 1".
        let NodeKind::Internal { infoset, .. } = &tree.nodes[tree.root as usize].kind else {
            panic!("root must query");
        };
        let inf = &tree.infosets[*infoset as usize];
        assert_eq!(inf.owner, 1);
        assert_eq!(inf.answer, vec![1, 0, 0]);
    }

    #[test]
    fn constructors_implement_their_rules() {
        let inst = fpa(&[1, 2, 3]);
        crate::analysis::implements(&sealed_bid(&inst.rule), &inst.rule).unwrap();
        crate::analysis::implements(&descending(&inst).unwrap(), &inst.rule).unwrap();
        let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3]).unwrap();
        let spa = make_spa(space).unwrap();
        crate::analysis::implements(&sealed_bid(&spa.rule), &spa.rule).unwrap();
        crate::analysis::implements(&ascending(&spa).unwrap(), &spa.rule).unwrap();
        crate::analysis::implements(&ascending_join(&spa).unwrap(), &spa.rule).unwrap();
        let dts = descending_then_sealed(&inst, Rational::from_integer(2)).unwrap();
        crate::analysis::implements(&dts, &inst.rule).unwrap();
    }

    #[test]
    fn descending_then_sealed_boundaries() {
        let inst = fpa(&[1, 2, 3]);
        // Threshold at the top price: sealed-bid behavior.
        let top = descending_then_sealed(&inst, Rational::from_integer(3)).unwrap();
        let sealed = sealed_bid(&inst.rule);
        assert_eq!(
            crate::observation::auctioneer_view(&top),
            crate::observation::auctioneer_view(&sealed)
        );
        // Threshold below the lowest price: plain descending.
        let low = descending_then_sealed(&inst, Rational::new(1, 2)).unwrap();
        let desc = descending(&inst).unwrap();
        assert_eq!(low.canonicalize(), desc.canonicalize());
    }
}
