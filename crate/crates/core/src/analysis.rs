//! Privacy detectors and comparators: the implementation check, contextual
//! privacy violations, minimal bidder-informativeness, corners conditions,
//! forced distinctions, the impossibility flag, privacy dominance, and
//! dominant-strategy checks.
//!
//! Scans are exhaustive over the finite space and emit witnesses in
//! lexicographic order, so reports are deterministic and diffable.

use serde::Serialize;

use crate::model::{
    refinement_compare, ChoiceRule, MaskedProfile, ModelError, ObservationStructure, Outcome,
    ProfileId, Rational, RefinementOrder, TypeProfile, UtilityModel,
};
use crate::observation::{auctioneer_view, bidder_view, privacy_profile};
use crate::protocol::{ProtocolError, ProtocolTree};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("protocol and rule live on different type spaces")]
    SpaceMismatch,
    #[error("protocol does not implement the rule at profile {profile:?}: expected {expected:?}, got {got:?}")]
    NotImplementing {
        profile: TypeProfile,
        expected: Outcome,
        got: Outcome,
    },
    #[error("protocol is not pruned (node {first_unreachable} unreachable); prune it first")]
    NotPruned { first_unreachable: u32 },
    #[error("bidder {bidder} has {strategies} interim strategies, over the guard of {guard}")]
    InterimSpaceTooLarge {
        bidder: usize,
        strategies: u128,
        guard: u128,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// ok iff the leaf outcome of every play equals the rule's outcome.
pub fn implements(tree: &ProtocolTree, rule: &ChoiceRule) -> Result<(), AnalysisError> {
    if tree.space != *rule.space() {
        return Err(AnalysisError::SpaceMismatch);
    }
    for p in tree.space.profiles() {
        let (_, leaf) = tree.path(p)?;
        let got = tree.leaf_outcome(leaf).expect("path ends at leaf");
        let expected = rule.outcome(p);
        if got != expected {
            return Err(AnalysisError::NotImplementing {
                profile: tree.space.profile(p),
                expected: expected.clone(),
                got: got.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Contextual,
    MbiBreach,
    Corners,
    IndistinguishableCorners,
}

/// Witness tuple of a violation; all indices refer to the instance's space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Contextual: the auctioneer separates `profile` from the profile with
    /// bidder's slot swapped to `alt_type` although the outcomes agree.
    TypeSwap { profile: TypeProfile, alt_type: usize },
    /// MBI breach: bidder distinguishes `a` from `b` despite equal own type
    /// and Ω-equivalent outcomes.
    ProfilePair { a: TypeProfile, b: TypeProfile },
    /// Corners / indistinguishable corners rectangle
    /// {type_a, type_b} × {others_a, others_b}.
    Rectangle {
        type_a: usize,
        type_b: usize,
        others_a: MaskedProfile,
        others_b: MaskedProfile,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport {
    pub kind: ViolationKind,
    pub bidder: usize,
    pub witness: Witness,
    /// For indistinguishable-corners reports: whether the same rectangle is
    /// also a plain corners violation.
    pub also_corners: bool,
    pub note: String,
}

/// All (bidder, profile, alternative type) triples where the auctioneer
/// separates two type profiles whose swap does not change the outcome.
pub fn contextual_violations(
    tree: &ProtocolTree,
    rule: &ChoiceRule,
) -> Result<Vec<ViolationReport>, AnalysisError> {
    implements(tree, rule)?;
    let view = auctioneer_view(tree);
    let space = rule.space();
    let mut out = Vec::new();
    for bidder in 0..space.bidder_count() {
        for p in space.profiles() {
            let own = space.component(p, bidder);
            for alt in 0..space.type_count(bidder) {
                if alt == own {
                    continue;
                }
                let q = space.with_component(p, bidder, alt);
                if rule.outcome_id(p) == rule.outcome_id(q) && !view.same_cell(p, q) {
                    out.push(ViolationReport {
                        kind: ViolationKind::Contextual,
                        bidder,
                        witness: Witness::TypeSwap {
                            profile: space.profile(p),
                            alt_type: alt,
                        },
                        also_corners: false,
                        note: format!(
                            "auctioneer separates {} from the same-outcome swap {}",
                            space.format_profile(p),
                            space.format_profile(q)
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// All (bidder, θ, θ′) pairs with equal own type and Ω-equivalent outcomes
/// that the bidder nevertheless distinguishes. Pairs are reported once with
/// the lexicographically smaller profile first.
pub fn mbi_violations(
    tree: &ProtocolTree,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<Vec<ViolationReport>, AnalysisError> {
    implements(tree, rule)?;
    let space = rule.space();
    let mut out = Vec::new();
    for bidder in 0..space.bidder_count() {
        let view = bidder_view(tree, bidder, omega)?;
        for a in space.profiles() {
            for b in space.profiles() {
                if b <= a || space.component(a, bidder) != space.component(b, bidder) {
                    continue;
                }
                let oa = rule.outcome(a);
                let ob = rule.outcome(b);
                if omega.equivalent(bidder, oa, ob)? && !view.same_cell(a, b) {
                    out.push(ViolationReport {
                        kind: ViolationKind::MbiBreach,
                        bidder,
                        witness: Witness::ProfilePair {
                            a: space.profile(a),
                            b: space.profile(b),
                        },
                        also_corners: false,
                        note: format!(
                            "bidder {} distinguishes {} from {}",
                            space.bidder_name(bidder),
                            space.format_profile(a),
                            space.format_profile(b)
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// ok (`None`) iff bidders learn nothing beyond own type and outcome cell;
/// otherwise the first witness in lexicographic order.
pub fn is_minimally_bidder_informative(
    tree: &ProtocolTree,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<Option<ViolationReport>, AnalysisError> {
    Ok(mbi_violations(tree, rule, omega)?.into_iter().next())
}

/// Iterate opponent profiles of `bidder` as full profiles with the bidder's
/// slot pinned to type 0.
fn masked_profiles(rule: &ChoiceRule, bidder: usize) -> Vec<ProfileId> {
    rule.space()
        .profiles()
        .filter(|p| rule.space().component(*p, bidder) == 0)
        .collect()
}

/// Exhaustive scan for corners-condition violations: three corners of a
/// 2×2 type rectangle share the outcome, the fourth differs.
pub fn corners_scan(rule: &ChoiceRule) -> Vec<ViolationReport> {
    let space = rule.space();
    let mut out = Vec::new();
    for bidder in 0..space.bidder_count() {
        let masked = masked_profiles(rule, bidder);
        for ta in 0..space.type_count(bidder) {
            for tb in 0..space.type_count(bidder) {
                if tb == ta {
                    continue;
                }
                for &pa in &masked {
                    for &pb in &masked {
                        if pb == pa {
                            continue;
                        }
                        let o = |t: usize, p: ProfileId| {
                            rule.outcome_id(space.with_component(p, bidder, t))
                        };
                        if o(ta, pa) == o(tb, pa)
                            && o(ta, pa) == o(ta, pb)
                            && o(ta, pb) != o(tb, pb)
                        {
                            out.push(ViolationReport {
                                kind: ViolationKind::Corners,
                                bidder,
                                witness: Witness::Rectangle {
                                    type_a: ta,
                                    type_b: tb,
                                    others_a: MaskedProfile {
                                        profile: space.profile(pa),
                                        masked: bidder,
                                    },
                                    others_b: MaskedProfile {
                                        profile: space.profile(pb),
                                        masked: bidder,
                                    },
                                },
                                also_corners: true,
                                note: String::new(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exhaustive scan for indistinguishable-corners violations; each report is
/// flagged when the rectangle is also a plain corners violation.
pub fn icc_scan(
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<Vec<ViolationReport>, ModelError> {
    let space = rule.space();
    let mut out = Vec::new();
    for bidder in 0..space.bidder_count() {
        let masked = masked_profiles(rule, bidder);
        for ta in 0..space.type_count(bidder) {
            for tb in 0..space.type_count(bidder) {
                if tb == ta {
                    continue;
                }
                for &pa in &masked {
                    for &pb in &masked {
                        if pb == pa {
                            continue;
                        }
                        let at = |t: usize, p: ProfileId| space.with_component(p, bidder, t);
                        // 1. ta, tb need not be distinguished at pa.
                        if rule.outcome_id(at(ta, pa)) != rule.outcome_id(at(tb, pa)) {
                            continue;
                        }
                        // 2. at ta, the bidder cannot tell pa from pb.
                        if !omega.equivalent(bidder, rule.outcome(at(ta, pa)), rule.outcome(at(ta, pb)))? {
                            continue;
                        }
                        // 3. ta, tb must be distinguished at pb.
                        if rule.outcome_id(at(ta, pb)) == rule.outcome_id(at(tb, pb)) {
                            continue;
                        }
                        let also_corners = rule.outcome_id(at(ta, pa)) == rule.outcome_id(at(ta, pb));
                        out.push(ViolationReport {
                            kind: ViolationKind::IndistinguishableCorners,
                            bidder,
                            witness: Witness::Rectangle {
                                type_a: ta,
                                type_b: tb,
                                others_a: MaskedProfile {
                                    profile: space.profile(pa),
                                    masked: bidder,
                                },
                                others_b: MaskedProfile {
                                    profile: space.profile(pb),
                                    masked: bidder,
                                },
                            },
                            also_corners,
                            note: String::new(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A pair of one bidder's types that every minimally bidder-informative
/// implementation's auctioneer must separate at the given opponent profile.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ForcedDistinction {
    pub bidder: usize,
    pub type_a: usize,
    pub type_b: usize,
    pub others: MaskedProfileKey,
}

/// Orderable stand-in for a masked profile (the packed id of the profile
/// with the masked slot pinned to type 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaskedProfileKey(pub ProfileId);

/// For each indistinguishable-corners violation at {θ_i,θ_i′}×{θ_{-i},θ_{-i}′},
/// the pair (i, θ_i, θ_i′, θ_{-i}); sorted and deduplicated with
/// type_a < type_b.
pub fn forced_distinctions(
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<Vec<ForcedDistinction>, ModelError> {
    let space = rule.space();
    let mut out = Vec::new();
    for report in icc_scan(rule, omega)? {
        let Witness::Rectangle { type_a, type_b, others_a, .. } = &report.witness else {
            unreachable!("icc_scan emits rectangles");
        };
        let pinned = space.profile_id(&TypeProfile({
            let mut v = others_a.profile.0.clone();
            v[report.bidder] = 0;
            v
        }));
        out.push(ForcedDistinction {
            bidder: report.bidder,
            type_a: *type_a.min(type_b),
            type_b: *type_a.max(type_b),
            others: MaskedProfileKey(pinned),
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Per-bidder impossibility flag: `true` means no implementing protocol can
/// be both contextual-violation-free for that bidder and minimally
/// bidder-informative.
pub fn impossibility_check(
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<Vec<bool>, ModelError> {
    let mut flags = vec![false; rule.space().bidder_count()];
    for report in icc_scan(rule, omega)? {
        flags[report.bidder] = true;
    }
    Ok(flags)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    FirstDominates,
    SecondDominates,
    Equivalent,
    Incomparable,
}

/// Componentwise refinement comparison of two protocols' privacy profiles,
/// combined by the privacy-domination rule: the dominator is weakly less
/// revealing in every component and strictly less in at least one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceVerdict {
    pub auctioneer: RefinementOrder,
    pub bidders: Vec<RefinementOrder>,
    pub overall: Dominance,
}

pub fn privacy_compare(
    first: &ProtocolTree,
    second: &ProtocolTree,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
) -> Result<DominanceVerdict, AnalysisError> {
    if first.space != second.space {
        return Err(AnalysisError::SpaceMismatch);
    }
    implements(first, rule)?;
    implements(second, rule)?;
    let pa = privacy_profile(first, omega)?;
    let pb = privacy_profile(second, omega)?;
    let auctioneer = refinement_compare(&pa.auctioneer, &pb.auctioneer)?;
    let bidders = pa
        .bidders
        .iter()
        .zip(&pb.bidders)
        .map(|(x, y)| refinement_compare(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DominanceVerdict {
        auctioneer,
        bidders: bidders.clone(),
        overall: combine_orders(auctioneer, &bidders),
    })
}

pub(crate) fn combine_orders(auctioneer: RefinementOrder, bidders: &[RefinementOrder]) -> Dominance {
    let mut all = vec![auctioneer];
    all.extend_from_slice(bidders);
    if all.iter().all(|o| *o == RefinementOrder::Equal) {
        return Dominance::Equivalent;
    }
    let first_coarser = all
        .iter()
        .all(|o| matches!(o, RefinementOrder::Equal | RefinementOrder::StrictlyCoarser));
    if first_coarser {
        return Dominance::FirstDominates;
    }
    let second_coarser = all
        .iter()
        .all(|o| matches!(o, RefinementOrder::Equal | RefinementOrder::StrictlyFiner));
    if second_coarser {
        return Dominance::SecondDominates;
    }
    Dominance::Incomparable
}

/// How a bidder deviates in the protocol-level incentive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deviation {
    /// Play the recommended strategy of another type.
    MimicType(usize),
    /// An arbitrary interim strategy: action index per owned infoset, in
    /// infoset-id order.
    Interim(Vec<(u32, u32)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsicCounterexample {
    pub bidder: usize,
    pub true_type: usize,
    pub others: MaskedProfile,
    pub deviation: Deviation,
    pub truthful_utility: Rational,
    pub deviation_utility: Rational,
}

/// Exhaustive dominant-strategy check of the rule itself: truthful reporting
/// beats any single-type misreport against any opponent profile.
pub fn dsic_rule(
    rule: &ChoiceRule,
    utility: &UtilityModel,
) -> Result<Option<DsicCounterexample>, ModelError> {
    let space = rule.space();
    for bidder in 0..space.bidder_count() {
        for p in space.profiles() {
            let own = space.component(p, bidder);
            let truthful = utility.eval(space, rule.outcome(p), bidder, own)?;
            for alt in 0..space.type_count(bidder) {
                if alt == own {
                    continue;
                }
                let q = space.with_component(p, bidder, alt);
                let deviated = utility.eval(space, rule.outcome(q), bidder, own)?;
                if deviated > truthful {
                    return Ok(Some(DsicCounterexample {
                        bidder,
                        true_type: own,
                        others: MaskedProfile {
                            profile: space.profile(p),
                            masked: bidder,
                        },
                        deviation: Deviation::MimicType(alt),
                        truthful_utility: truthful,
                        deviation_utility: deviated,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationMode {
    /// Deviations of the form "play another type's strategy". Sound as a full
    /// check only on pruned protocols, which is enforced.
    TypeMimicking,
    /// All assignments of actions to the bidder's infosets; exponential and
    /// gated by `interim_guard`.
    FullInterim,
}

pub const DEFAULT_INTERIM_GUARD: u128 = 100_000;

/// Protocol-level dominant-strategy check: following the recommended
/// strategy beats the mode's deviation class for every bidder, type and
/// opponent profile.
pub fn dsic_protocol(
    tree: &ProtocolTree,
    utility: &UtilityModel,
    mode: DeviationMode,
    interim_guard: u128,
) -> Result<Option<DsicCounterexample>, AnalysisError> {
    match mode {
        DeviationMode::TypeMimicking => {
            let check = tree.is_pruned();
            if let Some(first) = check.first_unreachable {
                return Err(AnalysisError::NotPruned {
                    first_unreachable: first,
                });
            }
            dsic_type_mimicking(tree, utility)
        }
        DeviationMode::FullInterim => dsic_full_interim(tree, utility, interim_guard),
    }
}

fn dsic_type_mimicking(
    tree: &ProtocolTree,
    utility: &UtilityModel,
) -> Result<Option<DsicCounterexample>, AnalysisError> {
    let space = &tree.space;
    for bidder in 0..space.bidder_count() {
        for p in space.profiles() {
            let own = space.component(p, bidder);
            let (_, truthful_leaf) = tree.path(p)?;
            let truthful = utility.eval(
                space,
                tree.leaf_outcome(truthful_leaf).expect("leaf"),
                bidder,
                own,
            )?;
            for alt in 0..space.type_count(bidder) {
                if alt == own {
                    continue;
                }
                let (_, leaf) = tree.path(space.with_component(p, bidder, alt))?;
                let deviated =
                    utility.eval(space, tree.leaf_outcome(leaf).expect("leaf"), bidder, own)?;
                if deviated > truthful {
                    return Ok(Some(DsicCounterexample {
                        bidder,
                        true_type: own,
                        others: MaskedProfile {
                            profile: space.profile(p),
                            masked: bidder,
                        },
                        deviation: Deviation::MimicType(alt),
                        truthful_utility: truthful,
                        deviation_utility: deviated,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Walk the tree with `bidder` playing `choice` (action per owned infoset)
/// and everyone else playing their recommended answer at profile `p`.
fn walk_with_interim(
    tree: &ProtocolTree,
    p: ProfileId,
    bidder: usize,
    choice: &[(u32, u32)],
) -> Result<u32, AnalysisError> {
    let mut cur = tree.root;
    loop {
        match &tree.nodes[cur as usize].kind {
            crate::protocol::NodeKind::Leaf { .. } => return Ok(cur),
            crate::protocol::NodeKind::Internal { infoset, children } => {
                let inf = &tree.infosets[*infoset as usize];
                let action = if inf.owner == bidder {
                    choice
                        .iter()
                        .find(|(i, _)| i == infoset)
                        .map(|(_, a)| *a)
                        .expect("choice covers every owned infoset")
                } else {
                    inf.answer[tree.space.component(p, inf.owner)]
                };
                let Some(&(_, child)) = children.iter().find(|(a, _)| *a == action) else {
                    return Err(AnalysisError::Protocol(ProtocolError::MissingEdge {
                        node: cur,
                        infoset: inf.label.clone(),
                        action: inf.actions[action as usize].clone(),
                    }));
                };
                cur = child;
            }
        }
    }
}

fn dsic_full_interim(
    tree: &ProtocolTree,
    utility: &UtilityModel,
    guard: u128,
) -> Result<Option<DsicCounterexample>, AnalysisError> {
    let space = &tree.space;
    for bidder in 0..space.bidder_count() {
        let owned: Vec<u32> = (0..tree.infosets.len() as u32)
            .filter(|i| tree.infosets[*i as usize].owner == bidder)
            .collect();
        let mut strategies: u128 = 1;
        for &i in &owned {
            strategies =
                strategies.saturating_mul(tree.infosets[i as usize].actions.len() as u128);
            if strategies > guard {
                return Err(AnalysisError::InterimSpaceTooLarge {
                    bidder,
                    strategies,
                    guard,
                });
            }
        }
        // Iterate all interim strategies as mixed-radix counters.
        let radices: Vec<u32> = owned
            .iter()
            .map(|&i| tree.infosets[i as usize].actions.len() as u32)
            .collect();
        let mut digits = vec![0u32; owned.len()];
        loop {
            let choice: Vec<(u32, u32)> = owned.iter().copied().zip(digits.iter().copied()).collect();
            for p in space.profiles() {
                let own = space.component(p, bidder);
                let (_, truthful_leaf) = tree.path(p)?;
                let truthful = utility.eval(
                    space,
                    tree.leaf_outcome(truthful_leaf).expect("leaf"),
                    bidder,
                    own,
                )?;
                let leaf = walk_with_interim(tree, p, bidder, &choice)?;
                let deviated =
                    utility.eval(space, tree.leaf_outcome(leaf).expect("leaf"), bidder, own)?;
                if deviated > truthful {
                    return Ok(Some(DsicCounterexample {
                        bidder,
                        true_type: own,
                        others: MaskedProfile {
                            profile: space.profile(p),
                            masked: bidder,
                        },
                        deviation: Deviation::Interim(choice),
                        truthful_utility: truthful,
                        deviation_utility: deviated,
                    }));
                }
            }
            // Increment mixed-radix counter.
            let mut i = owned.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|d| *d == 0) {
                break;
            }
            if owned.is_empty() {
                break;
            }
        }
    }
    Ok(None)
}

/// Re-evaluate a report's defining predicate on its stored witnesses.
pub fn reverify(
    report: &ViolationReport,
    rule: &ChoiceRule,
    omega: &ObservationStructure,
    tree: Option<&ProtocolTree>,
) -> Result<bool, AnalysisError> {
    let space = rule.space();
    match (&report.kind, &report.witness) {
        (ViolationKind::Contextual, Witness::TypeSwap { profile, alt_type }) => {
            let tree = tree.expect("contextual reports need the protocol");
            let p = space.profile_id(profile);
            let q = space.with_component(p, report.bidder, *alt_type);
            let view = auctioneer_view(tree);
            Ok(rule.outcome_id(p) == rule.outcome_id(q) && !view.same_cell(p, q))
        }
        (ViolationKind::MbiBreach, Witness::ProfilePair { a, b }) => {
            let tree = tree.expect("mbi reports need the protocol");
            let pa = space.profile_id(a);
            let pb = space.profile_id(b);
            let view = bidder_view(tree, report.bidder, omega)?;
            Ok(space.component(pa, report.bidder) == space.component(pb, report.bidder)
                && omega.equivalent(report.bidder, rule.outcome(pa), rule.outcome(pb))?
                && !view.same_cell(pa, pb))
        }
        (
            ViolationKind::Corners,
            Witness::Rectangle { type_a, type_b, others_a, others_b },
        ) => {
            let pa = space.profile_id(&others_a.profile);
            let pb = space.profile_id(&others_b.profile);
            let o = |t: usize, p: ProfileId| rule.outcome_id(space.with_component(p, report.bidder, t));
            Ok(o(*type_a, pa) == o(*type_b, pa)
                && o(*type_a, pa) == o(*type_a, pb)
                && o(*type_a, pb) != o(*type_b, pb))
        }
        (
            ViolationKind::IndistinguishableCorners,
            Witness::Rectangle { type_a, type_b, others_a, others_b },
        ) => {
            let pa = space.profile_id(&others_a.profile);
            let pb = space.profile_id(&others_b.profile);
            let at = |t: usize, p: ProfileId| space.with_component(p, report.bidder, t);
            Ok(rule.outcome_id(at(*type_a, pa)) == rule.outcome_id(at(*type_b, pa))
                && omega.equivalent(
                    report.bidder,
                    rule.outcome(at(*type_a, pa)),
                    rule.outcome(at(*type_a, pb)),
                )?
                && rule.outcome_id(at(*type_a, pb)) != rule.outcome_id(at(*type_b, pb)))
        }
        _ => Ok(false),
    }
}
