//! Structured reports: stable machine-readable encodings of verdicts and
//! violation lists. Serialized as JSON with deterministic field and entry
//! order, so identical inputs give byte-identical reports.

use serde::Serialize;

use crate::analysis::{
    Deviation, DominanceVerdict, DsicCounterexample, ForcedDistinction, ViolationKind,
    ViolationReport, Witness,
};
use crate::frontier::{ClassDescription, FrontierStatus, FrontierVerdict, ParetoResult};
use crate::model::{format_rational, Partition, TypeSpace};
use crate::observation::PrivacyProfile;
use crate::protocol::{Transcript, ProtocolTree};

#[derive(Serialize)]
pub struct TranscriptReport {
    pub profile: String,
    pub history: Vec<HistoryEntry>,
    pub outcome: String,
    pub experiences: Vec<ExperienceReport>,
}

#[derive(Serialize)]
pub struct HistoryEntry {
    pub infoset: String,
    pub bidder: String,
    pub action: String,
}

#[derive(Serialize)]
pub struct ExperienceReport {
    pub bidder: String,
    pub own_type: String,
    pub moves: Vec<HistoryEntry>,
    pub outcome_cell: u32,
}

pub fn transcript_report(
    tree: &ProtocolTree,
    profile: &crate::model::TypeProfile,
    transcript: &Transcript,
) -> TranscriptReport {
    let space = &tree.space;
    let entry = |infoset: u32, action: u32| {
        let inf = &tree.infosets[infoset as usize];
        HistoryEntry {
            infoset: inf.label.clone(),
            bidder: space.bidder_name(inf.owner).to_string(),
            action: inf.actions[action as usize].clone(),
        }
    };
    TranscriptReport {
        profile: space.format_profile(space.profile_id(profile)),
        history: transcript
            .auctioneer_history
            .iter()
            .map(|&(i, a)| entry(i, a))
            .collect(),
        outcome: transcript.outcome.display(space),
        experiences: transcript
            .experiences
            .iter()
            .enumerate()
            .map(|(b, e)| ExperienceReport {
                bidder: space.bidder_name(b).to_string(),
                own_type: space.types(b)[e.own_type].text.clone(),
                moves: e.moves.iter().map(|&(i, a)| entry(i, a)).collect(),
                outcome_cell: e.omega_cell,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct ViolationEntry {
    pub kind: ViolationKind,
    pub bidder: String,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub also_corners: Option<bool>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

pub fn violation_entry(report: &ViolationReport, space: &TypeSpace) -> ViolationEntry {
    let witness = match &report.witness {
        Witness::TypeSwap { profile, alt_type } => format!(
            "profile {} vs own-type swap to {}",
            space.format_profile(space.profile_id(profile)),
            space.types(report.bidder)[*alt_type].text
        ),
        Witness::ProfilePair { a, b } => format!(
            "{} vs {}",
            space.format_profile(space.profile_id(a)),
            space.format_profile(space.profile_id(b))
        ),
        Witness::Rectangle {
            type_a,
            type_b,
            others_a,
            others_b,
        } => format!(
            "types {{{}, {}}} x opponents {{{}, {}}}",
            space.types(report.bidder)[*type_a].text,
            space.types(report.bidder)[*type_b].text,
            others_a.format(space),
            others_b.format(space)
        ),
    };
    ViolationEntry {
        kind: report.kind,
        bidder: space.bidder_name(report.bidder).to_string(),
        witness,
        also_corners: matches!(report.kind, ViolationKind::IndistinguishableCorners)
            .then_some(report.also_corners),
        note: report.note.clone(),
    }
}

#[derive(Serialize)]
pub struct PartitionReport {
    pub cell_count: usize,
    pub cells: Vec<Vec<String>>,
}

pub fn partition_report(partition: &Partition) -> PartitionReport {
    let space = partition.space();
    PartitionReport {
        cell_count: partition.cell_count(),
        cells: partition
            .cells()
            .iter()
            .map(|cell| cell.iter().map(|&p| space.format_profile(p)).collect())
            .collect(),
    }
}

#[derive(Serialize)]
pub struct PrivacyProfileReport {
    pub auctioneer: PartitionReport,
    pub bidders: Vec<PartitionReport>,
}

pub fn privacy_profile_report(profile: &PrivacyProfile) -> PrivacyProfileReport {
    PrivacyProfileReport {
        auctioneer: partition_report(&profile.auctioneer),
        bidders: profile.bidders.iter().map(partition_report).collect(),
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub implements: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implement_failure: Option<String>,
    pub contextual_violations: Vec<ViolationEntry>,
    pub minimally_bidder_informative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mbi_witness: Option<ViolationEntry>,
    pub privacy: PrivacyProfileReport,
}

#[derive(Serialize)]
pub struct ScanReport {
    pub corners: Vec<ViolationEntry>,
    pub indistinguishable_corners: Vec<ViolationEntry>,
    pub forced_distinctions: Vec<ForcedEntry>,
    pub impossibility: Vec<BidderFlag>,
}

#[derive(Serialize)]
pub struct ForcedEntry {
    pub bidder: String,
    pub type_a: String,
    pub type_b: String,
    pub others: String,
}

pub fn forced_entry(fd: &ForcedDistinction, space: &TypeSpace) -> ForcedEntry {
    let mut profile = space.profile(fd.others.0);
    profile.0[fd.bidder] = fd.type_a;
    let masked = crate::model::MaskedProfile {
        profile,
        masked: fd.bidder,
    };
    ForcedEntry {
        bidder: space.bidder_name(fd.bidder).to_string(),
        type_a: space.types(fd.bidder)[fd.type_a].text.clone(),
        type_b: space.types(fd.bidder)[fd.type_b].text.clone(),
        others: masked.format(space),
    }
}

#[derive(Serialize)]
pub struct BidderFlag {
    pub bidder: String,
    pub flagged: bool,
}

#[derive(Serialize)]
pub struct CompareReport {
    pub first: String,
    pub second: String,
    pub verdict: DominanceVerdict,
}

#[derive(Serialize)]
pub struct DsicEntry {
    pub bidder: String,
    pub true_type: String,
    pub others: String,
    pub deviation: String,
    pub truthful_utility: String,
    pub deviation_utility: String,
}

pub fn dsic_entry(cx: &DsicCounterexample, space: &TypeSpace) -> DsicEntry {
    DsicEntry {
        bidder: space.bidder_name(cx.bidder).to_string(),
        true_type: space.types(cx.bidder)[cx.true_type].text.clone(),
        others: cx.others.format(space),
        deviation: match &cx.deviation {
            Deviation::MimicType(t) => {
                format!("mimic type {}", space.types(cx.bidder)[*t].text)
            }
            Deviation::Interim(choice) => format!("interim strategy {choice:?}"),
        },
        truthful_utility: format_rational(&cx.truthful_utility),
        deviation_utility: format_rational(&cx.deviation_utility),
    }
}

#[derive(Serialize)]
pub struct CertifyReport {
    pub status: FrontierStatus,
    pub class: ClassDescription,
    pub signatures_examined: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominator: Option<String>,
}

pub fn certify_report(verdict: &FrontierVerdict) -> CertifyReport {
    CertifyReport {
        status: verdict.status,
        class: verdict.class.clone(),
        signatures_examined: verdict.examined,
        truncated: verdict.truncated.as_ref().map(|t| t.reason.clone()),
        dominator: verdict
            .dominator
            .as_ref()
            .map(super::protocol_doc::emit_protocol),
    }
}

#[derive(Serialize)]
pub struct ParetoReport {
    pub class: ClassDescription,
    pub signature_count: usize,
    pub frontier: Vec<usize>,
    pub edges: Vec<(u32, u32)>,
    pub candidates_examined: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
    pub signatures: Vec<PrivacyProfileReport>,
}

pub fn pareto_report(result: &ParetoResult) -> ParetoReport {
    ParetoReport {
        class: result.class.clone(),
        signature_count: result.signatures.len(),
        frontier: result.frontier.clone(),
        edges: result.edges.clone(),
        candidates_examined: result.examined,
        truncated: result.truncated.as_ref().map(|t| t.reason.clone()),
        signatures: result.signatures.iter().map(privacy_profile_report).collect(),
    }
}

/// Stable JSON encoding used by `--format json` and the C API.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}
