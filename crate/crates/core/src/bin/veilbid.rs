//! Command-line surface: batch analysis of instances and protocols, the
//! named auction protocol constructors, stitching, and frontier search.
//!
//! Exit codes: 0 on success, 1 when `--expect-empty` (or a failed
//! certification with `--expect-frontier`) turns findings into a failure,
//! 2 on input errors. Diagnostics go to standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use veilbid::analysis::{
    self, contextual_violations, corners_scan, forced_distinctions, icc_scan,
    impossibility_check, is_minimally_bidder_informative, privacy_compare,
};
use veilbid::auctions::{self, AuctionKind};
use veilbid::frontier::{self, FrontierStatus, MergingMode, SearchBounds};
use veilbid::io::report::{self, to_json};
use veilbid::io::{emit_protocol, graph, parse_instance, parse_protocol, Instance};
use veilbid::model::{parse_rational, Outcome, TypeProfile};
use veilbid::observation::privacy_profile;
use veilbid::protocol::ProtocolTree;

#[derive(Parser)]
#[command(name = "veilbid", version, about = "Privacy analysis of deterministic auction protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a protocol at one type profile and print the transcript.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        protocol: PathBuf,
        /// Comma-separated type labels, one per bidder, e.g. `3,5`.
        #[arg(long)]
        profile: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Implementation check, contextual violations, bidder-informativeness
    /// and the induced privacy partitions of one protocol.
    Analyze {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        protocol: PathBuf,
        /// Exit 1 if the protocol fails to implement the rule, produces a
        /// contextual violation, or is not minimally bidder-informative.
        #[arg(long)]
        expect_empty: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Rule-level scans: corners, indistinguishable corners, forced
    /// distinctions and the impossibility flags.
    Scan {
        #[arg(long)]
        instance: PathBuf,
        /// Exit 1 if any indistinguishable-corners violation exists.
        #[arg(long)]
        expect_empty: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Compare two protocols by privacy domination.
    Compare {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Split the rule at a price threshold or outcome subset and compose a
    /// prefix and suffix protocol into one document.
    Stitch {
        #[arg(long)]
        instance: PathBuf,
        /// Collapse all outcomes with price <= this rational.
        #[arg(long, conflicts_with = "outcomes")]
        price_le: Option<String>,
        /// Comma-separated compact outcome literals, e.g. `A@1,B@2`.
        #[arg(long)]
        outcomes: Option<String>,
        /// Prefix construction for the quotient rule.
        #[arg(long, value_enum, default_value = "descending")]
        prefix: NamedStitchPart,
        /// Suffix construction for the restricted rule.
        #[arg(long, value_enum, default_value = "sealed-bid")]
        suffix: NamedStitchPart,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Enumerate the class and report the Pareto frontier, or certify one
    /// protocol against it.
    Frontier {
        #[arg(long)]
        instance: PathBuf,
        /// Protocol document (or builtin name) to certify instead of
        /// reporting the whole frontier.
        #[arg(long)]
        certify: Option<String>,
        /// Exit 1 unless the certified protocol is on the frontier.
        #[arg(long, requires = "certify")]
        expect_frontier: bool,
        #[arg(long)]
        padding: Option<usize>,
        #[arg(long, value_enum)]
        merging: Option<MergingArg>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        time_budget_secs: Option<u64>,
        /// Worker cap; the enumeration is deterministic and currently runs
        /// on a single worker.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Construct a named protocol for the instance and emit its document.
    Builtin {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        name: String,
        /// Price threshold for descending-then-sealed.
        #[arg(long)]
        threshold: Option<String>,
        /// Emit DOT graph output instead of the protocol document.
        #[arg(long)]
        graph: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedStitchPart {
    Descending,
    SealedBid,
}

#[derive(Clone, Copy, ValueEnum)]
enum MergingArg {
    Off,
    Exhaustive,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn findings(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("veilbid: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_protocol(path: &Path, instance: &Instance) -> Result<ProtocolTree, Failure> {
    parse_protocol(&read(path)?, instance).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn write_out(out: &OutputOpts, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn build_builtin(instance: &Instance, name: &str, threshold: Option<&str>) -> Result<ProtocolTree, Failure> {
    let auction = instance.auction();
    let tree = match name {
        "sealed-bid" => auctions::sealed_bid(instance.rule()),
        "descending" => {
            let a = auction.ok_or_else(|| fail("descending needs an auction instance"))?;
            auctions::descending(a).map_err(|e| fail(e.to_string()))?
        }
        "ascending" => {
            let a = auction.ok_or_else(|| fail("ascending needs an auction instance"))?;
            auctions::ascending(a).map_err(|e| fail(e.to_string()))?
        }
        "ascending-join" => {
            let a = auction.ok_or_else(|| fail("ascending-join needs an auction instance"))?;
            auctions::ascending_join(a).map_err(|e| fail(e.to_string()))?
        }
        "descending-then-sealed" => {
            let a = auction.ok_or_else(|| fail("descending-then-sealed needs an auction instance"))?;
            let t = threshold.ok_or_else(|| fail("descending-then-sealed needs --threshold"))?;
            let t = parse_rational(t).ok_or_else(|| fail("--threshold must be a rational"))?;
            auctions::descending_then_sealed(a, t).map_err(|e| fail(e.to_string()))?
        }
        other => {
            return Err(fail(format!(
                "unknown builtin {other:?}; expected sealed-bid, descending, ascending, ascending-join or descending-then-sealed"
            )))
        }
    };
    Ok(tree)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { instance, protocol, profile, out } => {
            let inst = load_instance(&instance)?;
            let tree = load_protocol(&protocol, &inst)?;
            let space = inst.space();
            let labels: Vec<&str> = profile.split(',').collect();
            if labels.len() != space.bidder_count() {
                return Err(fail(format!(
                    "--profile needs {} comma-separated labels",
                    space.bidder_count()
                )));
            }
            let mut entries = Vec::new();
            for (i, l) in labels.iter().enumerate() {
                let t = space.type_index(i, l.trim()).ok_or_else(|| {
                    fail(format!("unknown type {l:?} for bidder {}", space.bidder_name(i)))
                })?;
                entries.push(t);
            }
            let profile = TypeProfile(entries);
            let transcript = tree
                .run(&profile, inst.omega())
                .map_err(|e| fail(e.to_string()))?;
            let rep = report::transcript_report(&tree, &profile, &transcript);
            match out.format {
                Format::Json => write_out(&out, &to_json(&rep)),
                Format::Text => {
                    let mut text = format!("profile {}\n", rep.profile);
                    for h in &rep.history {
                        text.push_str(&format!("  ask {} at {} -> {}\n", h.bidder, h.infoset, h.action));
                    }
                    text.push_str(&format!("outcome {}\n", rep.outcome));
                    for e in &rep.experiences {
                        let moves: Vec<String> = e
                            .moves
                            .iter()
                            .map(|m| format!("{}:{}", m.infoset, m.action))
                            .collect();
                        text.push_str(&format!(
                            "bidder {} (type {}): [{}], outcome cell {}\n",
                            e.bidder,
                            e.own_type,
                            moves.join(" "),
                            e.outcome_cell
                        ));
                    }
                    write_out(&out, text.trim_end())
                }
            }
        }
        Command::Analyze { instance, protocol, expect_empty, out } => {
            let inst = load_instance(&instance)?;
            let tree = load_protocol(&protocol, &inst)?;
            let rule = inst.rule();
            let space = inst.space();
            let implement_failure = analysis::implements(&tree, rule).err();
            let implements_ok = implement_failure.is_none();
            let (contextual, mbi) = if implements_ok {
                let c = contextual_violations(&tree, rule).map_err(|e| fail(e.to_string()))?;
                let m = is_minimally_bidder_informative(&tree, rule, inst.omega())
                    .map_err(|e| fail(e.to_string()))?;
                (c, m)
            } else {
                (Vec::new(), None)
            };
            let privacy = privacy_profile(&tree, inst.omega()).map_err(|e| fail(e.to_string()))?;
            let rep = report::AnalyzeReport {
                implements: implements_ok,
                implement_failure: implement_failure.as_ref().map(|e| e.to_string()),
                contextual_violations: contextual
                    .iter()
                    .map(|v| report::violation_entry(v, space))
                    .collect(),
                minimally_bidder_informative: implements_ok && mbi.is_none(),
                mbi_witness: mbi.as_ref().map(|v| report::violation_entry(v, space)),
                privacy: report::privacy_profile_report(&privacy),
            };
            match out.format {
                Format::Json => write_out(&out, &to_json(&rep))?,
                Format::Text => {
                    let mut text = String::new();
                    text.push_str(&format!("implements: {}\n", rep.implements));
                    if let Some(f) = &rep.implement_failure {
                        text.push_str(&format!("  {f}\n"));
                    }
                    text.push_str(&format!(
                        "contextual violations: {}\n",
                        rep.contextual_violations.len()
                    ));
                    for v in &rep.contextual_violations {
                        text.push_str(&format!("  bidder {}: {}\n", v.bidder, v.witness));
                    }
                    text.push_str(&format!(
                        "minimally bidder-informative: {}\n",
                        rep.minimally_bidder_informative
                    ));
                    if let Some(w) = &rep.mbi_witness {
                        text.push_str(&format!("  witness: bidder {}: {}\n", w.bidder, w.witness));
                    }
                    text.push_str(&format!(
                        "auctioneer partition: {} cells; bidder partitions: {}\n",
                        rep.privacy.auctioneer.cell_count,
                        rep.privacy
                            .bidders
                            .iter()
                            .map(|b| b.cell_count.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ));
                    write_out(&out, text.trim_end())?;
                }
            }
            if expect_empty
                && (!rep.implements
                    || !rep.contextual_violations.is_empty()
                    || !rep.minimally_bidder_informative)
            {
                return Err(findings("analysis findings present (--expect-empty)"));
            }
            Ok(())
        }
        Command::Scan { instance, expect_empty, out } => {
            let inst = load_instance(&instance)?;
            let rule = inst.rule();
            let space = inst.space();
            let corners = corners_scan(rule);
            let icc = icc_scan(rule, inst.omega()).map_err(|e| fail(e.to_string()))?;
            let forced = forced_distinctions(rule, inst.omega()).map_err(|e| fail(e.to_string()))?;
            let flags = impossibility_check(rule, inst.omega()).map_err(|e| fail(e.to_string()))?;
            let rep = report::ScanReport {
                corners: corners.iter().map(|v| report::violation_entry(v, space)).collect(),
                indistinguishable_corners: icc
                    .iter()
                    .map(|v| report::violation_entry(v, space))
                    .collect(),
                forced_distinctions: forced.iter().map(|f| report::forced_entry(f, space)).collect(),
                impossibility: flags
                    .iter()
                    .enumerate()
                    .map(|(b, &flagged)| report::BidderFlag {
                        bidder: space.bidder_name(b).to_string(),
                        flagged,
                    })
                    .collect(),
            };
            match out.format {
                Format::Json => write_out(&out, &to_json(&rep))?,
                Format::Text => {
                    let mut text = String::new();
                    text.push_str(&format!("corners violations: {}\n", rep.corners.len()));
                    text.push_str(&format!(
                        "indistinguishable corners violations: {}\n",
                        rep.indistinguishable_corners.len()
                    ));
                    text.push_str(&format!(
                        "forced distinctions: {}\n",
                        rep.forced_distinctions.len()
                    ));
                    for f in &rep.impossibility {
                        text.push_str(&format!(
                            "impossibility for bidder {}: {}\n",
                            f.bidder, f.flagged
                        ));
                    }
                    write_out(&out, text.trim_end())?;
                }
            }
            if expect_empty && !rep.indistinguishable_corners.is_empty() {
                return Err(findings("indistinguishable-corners violations present (--expect-empty)"));
            }
            Ok(())
        }
        Command::Compare { instance, first, second, out } => {
            let inst = load_instance(&instance)?;
            let a = load_protocol(&first, &inst)?;
            let b = load_protocol(&second, &inst)?;
            let verdict = privacy_compare(&a, &b, inst.rule(), inst.omega())
                .map_err(|e| fail(e.to_string()))?;
            let rep = report::CompareReport {
                first: first.display().to_string(),
                second: second.display().to_string(),
                verdict,
            };
            match out.format {
                Format::Json => write_out(&out, &to_json(&rep)),
                Format::Text => {
                    let mut text = String::new();
                    text.push_str(&format!("auctioneer: {}\n", rep.verdict.auctioneer));
                    for (i, o) in rep.verdict.bidders.iter().enumerate() {
                        text.push_str(&format!(
                            "bidder {}: {}\n",
                            inst.space().bidder_name(i),
                            o
                        ));
                    }
                    text.push_str(&format!("overall: {:?}\n", rep.verdict.overall));
                    write_out(&out, text.trim_end())
                }
            }
        }
        Command::Stitch { instance, price_le, outcomes, prefix, suffix, out } => {
            let inst = load_instance(&instance)?;
            let rule = inst.rule();
            let xhat: Vec<Outcome> = if let Some(p) = price_le {
                let p = parse_rational(&p).ok_or_else(|| fail("--price-le must be a rational"))?;
                rule.outcomes()
                    .iter()
                    .filter(|o| matches!(o, Outcome::Auction { price, .. } if *price <= p))
                    .cloned()
                    .collect()
            } else if let Some(list) = outcomes {
                let mut xs = Vec::new();
                for item in list.split(',') {
                    xs.push(parse_outcome_literal(item.trim(), inst.space())?);
                }
                xs
            } else {
                return Err(fail("stitch needs --price-le or --outcomes"));
            };
            let split = veilbid::stitching::split_rule(rule, &xhat).map_err(|e| fail(e.to_string()))?;
            let prefix_tree = match prefix {
                NamedStitchPart::Descending => {
                    auctions::descending_core(&split.quotient).map_err(|e| fail(e.to_string()))?
                }
                NamedStitchPart::SealedBid => auctions::sealed_bid(&split.quotient),
            };
            let suffix_tree = match suffix {
                NamedStitchPart::Descending => {
                    auctions::descending_core(&split.restricted).map_err(|e| fail(e.to_string()))?
                }
                NamedStitchPart::SealedBid => auctions::sealed_bid(&split.restricted),
            };
            let stitched = veilbid::stitching::stitch(&prefix_tree, &suffix_tree, &split)
                .map_err(|e| fail(e.to_string()))?;
            write_out(&out, emit_protocol(&stitched).trim_end())
        }
        Command::Frontier {
            instance,
            certify,
            expect_frontier,
            padding,
            merging,
            max_depth,
            node_budget,
            time_budget_secs,
            jobs,
            out,
        } => {
            let inst = load_instance(&instance)?;
            if let Some(jobs) = jobs.or_else(|| env_u64("VEILBID_JOBS").map(|j| j as usize)) {
                if jobs == 0 {
                    return Err(fail("--jobs must be positive"));
                }
            }
            let mut bounds = SearchBounds::default();
            if let Some(p) = padding {
                bounds.padding = p;
            }
            if let Some(m) = merging {
                bounds.merging = match m {
                    MergingArg::Off => MergingMode::Off,
                    MergingArg::Exhaustive => MergingMode::Exhaustive,
                };
            }
            bounds.max_depth = max_depth;
            if let Some(n) = node_budget.or_else(|| env_u64("VEILBID_NODE_BUDGET")) {
                bounds.node_budget = n;
            }
            if let Some(t) = time_budget_secs.or_else(|| env_u64("VEILBID_TIME_BUDGET_SECS")) {
                bounds.time_budget = Some(Duration::from_secs(t));
            }
            match certify {
                None => {
                    let result = frontier::pareto_signatures(inst.rule(), inst.omega(), &bounds)
                        .map_err(|e| fail(e.to_string()))?;
                    let rep = report::pareto_report(&result);
                    match out.format {
                        Format::Json => write_out(&out, &to_json(&rep)),
                        Format::Text => {
                            let mut text = String::new();
                            text.push_str(&format!("class: {}\n", result.class));
                            text.push_str(&format!(
                                "signatures: {} (candidates examined: {})\n",
                                rep.signature_count, rep.candidates_examined
                            ));
                            if let Some(t) = &rep.truncated {
                                text.push_str(&format!("TRUNCATED: {t}\n"));
                            }
                            text.push_str(&format!(
                                "frontier: {} signatures {:?}\n",
                                rep.frontier.len(),
                                rep.frontier
                            ));
                            text.push_str(&format!("dominance edges: {}\n", rep.edges.len()));
                            write_out(&out, text.trim_end())
                        }
                    }
                }
                Some(target) => {
                    let tree = if Path::new(&target).exists() {
                        load_protocol(Path::new(&target), &inst)?
                    } else {
                        build_builtin(&inst, &target, None)?
                    };
                    // Named protocols give the scan a cheap early exit.
                    let mut candidates = Vec::new();
                    if let Some(a) = inst.auction() {
                        candidates.push(auctions::sealed_bid(&a.rule));
                        match a.kind {
                            AuctionKind::FirstPrice => {
                                if let Ok(d) = auctions::descending(a) {
                                    candidates.push(d);
                                }
                            }
                            AuctionKind::SecondPrice => {
                                if let Ok(x) = auctions::ascending(a) {
                                    candidates.push(x);
                                }
                                if let Ok(x) = auctions::ascending_join(a) {
                                    candidates.push(x);
                                }
                            }
                        }
                    }
                    let candidate_refs: Vec<&ProtocolTree> = candidates.iter().collect();
                    let verdict =
                        frontier::certify(&tree, inst.rule(), inst.omega(), &bounds, &candidate_refs)
                            .map_err(|e| fail(e.to_string()))?;
                    let rep = report::certify_report(&verdict);
                    match out.format {
                        Format::Json => write_out(&out, &to_json(&rep))?,
                        Format::Text => {
                            let mut text = String::new();
                            text.push_str(&format!("status: {:?}\n", verdict.status));
                            text.push_str(&format!("class: {}\n", verdict.class));
                            text.push_str(&format!("signatures examined: {}\n", verdict.examined));
                            if let Some(t) = &rep.truncated {
                                text.push_str(&format!("TRUNCATED: {t}\n"));
                            }
                            if verdict.dominator.is_some() {
                                text.push_str("a strict dominator exists; rerun with --format json for its document\n");
                            }
                            write_out(&out, text.trim_end())?;
                        }
                    }
                    if expect_frontier && verdict.status != FrontierStatus::OnFrontierWithinClass {
                        return Err(findings("protocol is not certified on the frontier"));
                    }
                    Ok(())
                }
            }
        }
        Command::Builtin { instance, name, threshold, graph: want_graph, out } => {
            let inst = load_instance(&instance)?;
            let tree = build_builtin(&inst, &name, threshold.as_deref())?;
            if want_graph {
                write_out(&out, graph::emit_graph(&tree).trim_end())
            } else {
                write_out(&out, emit_protocol(&tree).trim_end())
            }
        }
    }
}

fn parse_outcome_literal(text: &str, space: &veilbid::model::TypeSpace) -> Result<Outcome, Failure> {
    if let Some((name, price)) = text.split_once('@') {
        let winner = space
            .bidder_index(name)
            .ok_or_else(|| fail(format!("unknown bidder {name:?}")))?;
        let price = parse_rational(price).ok_or_else(|| fail(format!("bad rational {price:?}")))?;
        Ok(Outcome::Auction { winner, price })
    } else {
        Ok(Outcome::Labeled(text.to_string()))
    }
}
