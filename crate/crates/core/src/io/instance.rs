//! The `.inst` document: type space, rule (builtin or explicit table),
//! optional observation and utility blocks.

use std::collections::HashMap;
use std::sync::Arc;

use crate::auctions::{self, AuctionInstance, AuctionKind, BidFunctions};
use crate::model::{
    format_rational, parse_rational, ChoiceRule, ObservationStructure, Outcome, Rational,
    TypeLabel, TypeProfile, TypeSpace, UtilityModel,
};

use super::{check_ident, err, outcome_text, tokenize, ParseError, Token};

/// A parsed instance: either a full auction environment or a bare
/// (space, rule, Ω) triple with optional utilities.
#[derive(Debug, Clone)]
pub enum Instance {
    Auction(AuctionInstance),
    Bare {
        space: Arc<TypeSpace>,
        rule: ChoiceRule,
        omega: ObservationStructure,
        utility: Option<UtilityModel>,
    },
}

impl Instance {
    pub fn space(&self) -> &Arc<TypeSpace> {
        match self {
            Instance::Auction(a) => &a.space,
            Instance::Bare { space, .. } => space,
        }
    }

    pub fn rule(&self) -> &ChoiceRule {
        match self {
            Instance::Auction(a) => &a.rule,
            Instance::Bare { rule, .. } => rule,
        }
    }

    pub fn omega(&self) -> &ObservationStructure {
        match self {
            Instance::Auction(a) => &a.omega,
            Instance::Bare { omega, .. } => omega,
        }
    }

    pub fn utility(&self) -> Option<&UtilityModel> {
        match self {
            Instance::Auction(a) => Some(&a.utility),
            Instance::Bare { utility, .. } => utility.as_ref(),
        }
    }

    pub fn auction(&self) -> Option<&AuctionInstance> {
        match self {
            Instance::Auction(a) => Some(a),
            Instance::Bare { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RuleKind {
    Fpa,
    Spa,
    Table,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header_seen = false;
    let mut bidders: Vec<(String, Vec<TypeLabel>)> = Vec::new();
    let mut rule_kind: Option<(usize, RuleKind)> = None;
    let mut explicit_bids = false;
    let mut bid_lines: Vec<(usize, String, Vec<Rational>)> = Vec::new();
    let mut table_lines: Vec<(usize, Vec<Token<'_>>)> = Vec::new();
    let mut omega_lines: Vec<(usize, Vec<Token<'_>>)> = Vec::new();
    let mut util_lines: Vec<(usize, Vec<Token<'_>>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        match toks[0].text {
            "inst" => {
                if header_seen {
                    return Err(err(lineno, toks[0].col, "duplicate header"));
                }
                if toks.len() != 2 || toks[1].text != "v1" {
                    return Err(err(lineno, toks[0].col, "expected `inst v1`"));
                }
                header_seen = true;
            }
            "types" => {
                if toks.len() < 4 || toks[2].text != "=" {
                    return Err(err(lineno, toks[0].col, "expected `types <bidder> = <label>...`"));
                }
                let name = check_ident(lineno, toks[1])?;
                if bidders.iter().any(|(n, _)| *n == name) {
                    return Err(err(lineno, toks[1].col, format!("duplicate declaration of bidder {name:?}")));
                }
                let mut labels = Vec::new();
                for t in &toks[3..] {
                    let label = check_ident(lineno, *t)?;
                    if labels.iter().any(|l: &TypeLabel| l.text == label) {
                        return Err(err(lineno, t.col, format!("duplicate type label {label:?}")));
                    }
                    labels.push(TypeLabel::new(label));
                }
                bidders.push((name, labels));
            }
            "rule" => {
                if rule_kind.is_some() {
                    return Err(err(lineno, toks[0].col, "duplicate rule declaration"));
                }
                if toks.len() < 2 {
                    return Err(err(lineno, toks[0].col, "expected `rule fpa|spa|table`"));
                }
                let kind = match toks[1].text {
                    "fpa" => RuleKind::Fpa,
                    "spa" => RuleKind::Spa,
                    "table" => RuleKind::Table,
                    other => {
                        return Err(err(lineno, toks[1].col, format!("unknown rule kind {other:?}")))
                    }
                };
                for t in &toks[2..] {
                    match (kind, t.text) {
                        (RuleKind::Fpa, "bids=identity") => explicit_bids = false,
                        (RuleKind::Fpa, "bids=explicit") => explicit_bids = true,
                        (RuleKind::Fpa | RuleKind::Spa, "tiebreak=lex") => {}
                        _ => {
                            return Err(err(lineno, t.col, format!("unknown rule option {:?}", t.text)))
                        }
                    }
                }
                rule_kind = Some((lineno, kind));
            }
            "bid" => {
                if toks.len() < 4 || toks[2].text != "=" {
                    return Err(err(lineno, toks[0].col, "expected `bid <bidder> = <rational>...`"));
                }
                let name = check_ident(lineno, toks[1])?;
                let mut row = Vec::new();
                for t in &toks[3..] {
                    let v = parse_rational(t.text)
                        .ok_or_else(|| err(lineno, t.col, format!("bad rational {:?}", t.text)))?;
                    row.push(v);
                }
                bid_lines.push((lineno, name, row));
            }
            "table" => table_lines.push((lineno, toks)),
            "omega" => omega_lines.push((lineno, toks)),
            "util" => util_lines.push((lineno, toks)),
            other => {
                return Err(err(lineno, toks[0].col, format!("unknown key {other:?}")));
            }
        }
    }

    if !header_seen {
        return Err(err(1, 1, "missing `inst v1` header"));
    }
    if bidders.is_empty() {
        return Err(err(1, 1, "no `types` declarations"));
    }
    let space = TypeSpace::new(
        bidders.iter().map(|(n, _)| n.clone()).collect(),
        bidders.into_iter().map(|(_, l)| l).collect(),
    )
    .map_err(|e| err(1, 1, e.to_string()))?;

    let Some((rule_line, kind)) = rule_kind else {
        return Err(err(1, 1, "missing `rule` declaration"));
    };
    if kind != RuleKind::Fpa && (explicit_bids || !bid_lines.is_empty()) {
        let line = bid_lines.first().map(|(l, _, _)| *l).unwrap_or(rule_line);
        return Err(err(line, 1, "bid lines are only valid with `rule fpa bids=explicit`"));
    }
    if kind != RuleKind::Table && !table_lines.is_empty() {
        return Err(err(table_lines[0].0, 1, "table lines are only valid with `rule table`"));
    }
    if kind != RuleKind::Table && !util_lines.is_empty() {
        return Err(err(util_lines[0].0, 1, "builtin rules use quasilinear utilities; util lines are only valid with `rule table`"));
    }

    match kind {
        RuleKind::Fpa => {
            let bids = if explicit_bids {
                let mut rows: Vec<Option<Vec<Rational>>> = vec![None; space.bidder_count()];
                for (line, name, row) in bid_lines {
                    let i = space
                        .bidder_index(&name)
                        .ok_or_else(|| err(line, 1, format!("unknown bidder {name:?}")))?;
                    if rows[i].is_some() {
                        return Err(err(line, 1, format!("duplicate bid line for {name:?}")));
                    }
                    rows[i] = Some(row);
                }
                let rows: Option<Vec<Vec<Rational>>> = rows.into_iter().collect();
                BidFunctions::Explicit(rows.ok_or_else(|| err(rule_line, 1, "missing bid line for some bidder"))?)
            } else {
                BidFunctions::Identity
            };
            let mut inst = auctions::make_fpa(space, bids)
                .map_err(|e| err(rule_line, 1, e.to_string()))?;
            if let Some(omega) = parse_omega(&omega_lines, &inst.space, &inst.rule)? {
                inst.omega = omega;
            }
            Ok(Instance::Auction(inst))
        }
        RuleKind::Spa => {
            let mut inst =
                auctions::make_spa(space).map_err(|e| err(rule_line, 1, e.to_string()))?;
            if let Some(omega) = parse_omega(&omega_lines, &inst.space, &inst.rule)? {
                inst.omega = omega;
            }
            Ok(Instance::Auction(inst))
        }
        RuleKind::Table => {
            let rule = parse_table(&table_lines, &space, rule_line)?;
            let omega = match parse_omega(&omega_lines, &space, &rule)? {
                Some(o) => o,
                None => ObservationStructure::discrete(space.bidder_count(), rule.outcomes().to_vec())
                    .map_err(|e| err(rule_line, 1, e.to_string()))?,
            };
            let utility = parse_utility(&util_lines, &space, &rule)?;
            Ok(Instance::Bare {
                space,
                rule,
                omega,
                utility,
            })
        }
    }
}

/// Parse `(1,2)`-style profile literals.
fn parse_profile(
    line: usize,
    tok: Token<'_>,
    space: &TypeSpace,
) -> Result<TypeProfile, ParseError> {
    let inner = tok
        .text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(line, tok.col, "expected `(<label>,...)`"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != space.bidder_count() {
        return Err(err(
            line,
            tok.col,
            format!("expected {} components, got {}", space.bidder_count(), parts.len()),
        ));
    }
    let mut entries = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let t = space
            .type_index(i, part)
            .ok_or_else(|| err(line, tok.col, format!("unknown type {part:?} for bidder {}", space.bidder_name(i))))?;
        entries.push(t);
    }
    Ok(TypeProfile(entries))
}

fn parse_table(
    lines: &[(usize, Vec<Token<'_>>)],
    space: &Arc<TypeSpace>,
    rule_line: usize,
) -> Result<ChoiceRule, ParseError> {
    let mut table: HashMap<u32, Outcome> = HashMap::new();
    for (line, toks) in lines {
        // table (1,2) -> win=B pay=2
        if toks.len() < 4 || toks[2].text != "->" {
            return Err(err(*line, toks[0].col, "expected `table (<profile>) -> <outcome>`"));
        }
        let profile = parse_profile(*line, toks[1], space)?;
        let outcome = outcome_text::parse_verbose(*line, &toks[3..], space)?;
        let pid = space.profile_id(&profile);
        if table.insert(pid.0, outcome).is_some() {
            return Err(err(*line, toks[1].col, "duplicate table entry for this profile"));
        }
    }
    let missing: Vec<String> = space
        .profiles()
        .filter(|p| !table.contains_key(&p.0))
        .map(|p| space.format_profile(p))
        .take(8)
        .collect();
    if !missing.is_empty() {
        return Err(err(
            rule_line,
            1,
            format!("incomplete table; missing profiles: {}", missing.join(" ")),
        ));
    }
    Ok(ChoiceRule::from_fn(space.clone(), |_, p| {
        table[&p.0].clone()
    }))
}

fn parse_omega(
    lines: &[(usize, Vec<Token<'_>>)],
    space: &Arc<TypeSpace>,
    rule: &ChoiceRule,
) -> Result<Option<ObservationStructure>, ParseError> {
    if lines.is_empty() {
        return Ok(None);
    }
    let outcomes = rule.outcomes().to_vec();
    let mut per_bidder: Vec<Option<(usize, Vec<Vec<u32>>)>> = vec![None; space.bidder_count()];
    for (line, toks) in lines {
        // omega A = {A@1 A@2} {B@2}
        if toks.len() < 4 || toks[2].text != "=" {
            return Err(err(*line, toks[0].col, "expected `omega <bidder> = {<outcome>...}...`"));
        }
        let bidder = space
            .bidder_index(toks[1].text)
            .ok_or_else(|| err(*line, toks[1].col, format!("unknown bidder {:?}", toks[1].text)))?;
        if per_bidder[bidder].is_some() {
            return Err(err(*line, toks[1].col, "duplicate omega line for this bidder"));
        }
        let mut cells: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        for t in &toks[3..] {
            let mut text = t.text;
            let mut col = t.col;
            while let Some(rest) = text.strip_prefix('{') {
                if current.is_some() {
                    return Err(err(*line, col, "nested '{'"));
                }
                current = Some(Vec::new());
                text = rest;
                col += 1;
            }
            let mut closes = 0;
            while let Some(rest) = text.strip_suffix('}') {
                closes += 1;
                text = rest;
            }
            if !text.is_empty() {
                let outcome = outcome_text::parse_compact(*line, Token { col, text }, space)?;
                let id = rule
                    .lookup_outcome(&outcome)
                    .ok_or_else(|| err(*line, col, format!("outcome {text:?} not in the rule's table")))?;
                match &mut current {
                    Some(cell) => cell.push(id),
                    None => return Err(err(*line, col, "outcome outside '{...}' cell")),
                }
            }
            for _ in 0..closes {
                match current.take() {
                    Some(cell) if !cell.is_empty() => cells.push(cell),
                    _ => return Err(err(*line, col, "empty or unmatched '}'")),
                }
            }
        }
        if current.is_some() {
            return Err(err(*line, toks[3].col, "unclosed '{'"));
        }
        per_bidder[bidder] = Some((*line, cells));
    }
    let mut cells = Vec::new();
    for (bidder, entry) in per_bidder.into_iter().enumerate() {
        match entry {
            Some((_, c)) => cells.push(c),
            None => {
                return Err(err(
                    lines[0].0,
                    1,
                    format!("omega block missing bidder {}", space.bidder_name(bidder)),
                ))
            }
        }
    }
    ObservationStructure::from_cells(space.bidder_count(), outcomes, cells)
        .map(Some)
        .map_err(|e| err(lines[0].0, 1, e.to_string()))
}

fn parse_utility(
    lines: &[(usize, Vec<Token<'_>>)],
    space: &Arc<TypeSpace>,
    rule: &ChoiceRule,
) -> Result<Option<UtilityModel>, ParseError> {
    if lines.is_empty() {
        return Ok(None);
    }
    let mut map = HashMap::new();
    for (line, toks) in lines {
        // util A B@2 1 = 3/2
        if toks.len() != 6 || toks[4].text != "=" {
            return Err(err(*line, toks[0].col, "expected `util <bidder> <outcome> <type> = <rational>`"));
        }
        let bidder = space
            .bidder_index(toks[1].text)
            .ok_or_else(|| err(*line, toks[1].col, format!("unknown bidder {:?}", toks[1].text)))?;
        let outcome = outcome_text::parse_compact(*line, toks[2], space)?;
        if rule.lookup_outcome(&outcome).is_none() {
            return Err(err(*line, toks[2].col, "outcome not in the rule's table"));
        }
        let t = space
            .type_index(bidder, toks[3].text)
            .ok_or_else(|| err(*line, toks[3].col, format!("unknown type {:?}", toks[3].text)))?;
        let v = parse_rational(toks[5].text)
            .ok_or_else(|| err(*line, toks[5].col, format!("bad rational {:?}", toks[5].text)))?;
        if map.insert((outcome, bidder, t), v).is_some() {
            return Err(err(*line, toks[0].col, "duplicate util entry"));
        }
    }
    Ok(Some(UtilityModel::Table(map)))
}

/// Canonical text for an instance. Omega is always written explicitly; for
/// table rules the table rows appear in lexicographic profile order.
pub fn emit_instance(instance: &Instance) -> String {
    let space = instance.space();
    let rule = instance.rule();
    let mut out = String::from("inst v1\n");
    for i in 0..space.bidder_count() {
        out.push_str(&format!(
            "types {} = {}\n",
            space.bidder_name(i),
            space
                .types(i)
                .iter()
                .map(|t| t.text.clone())
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    match instance {
        Instance::Auction(a) => match a.kind {
            AuctionKind::FirstPrice => {
                let identity = a.bids.as_ref().is_some_and(|bids| {
                    (0..space.bidder_count()).all(|i| {
                        space
                            .types(i)
                            .iter()
                            .zip(&bids[i])
                            .all(|(t, b)| t.value == Some(*b))
                    })
                });
                if identity {
                    out.push_str("rule fpa bids=identity tiebreak=lex\n");
                } else {
                    out.push_str("rule fpa bids=explicit tiebreak=lex\n");
                    if let Some(bids) = &a.bids {
                        for i in 0..space.bidder_count() {
                            out.push_str(&format!(
                                "bid {} = {}\n",
                                space.bidder_name(i),
                                bids[i]
                                    .iter()
                                    .map(format_rational)
                                    .collect::<Vec<_>>()
                                    .join(" ")
                            ));
                        }
                    }
                }
            }
            AuctionKind::SecondPrice => out.push_str("rule spa tiebreak=lex\n"),
        },
        Instance::Bare { .. } => {
            out.push_str("rule table\n");
            for p in space.profiles() {
                out.push_str(&format!(
                    "table {} -> {}\n",
                    space.format_profile(p),
                    outcome_text::verbose(rule.outcome(p), space)
                ));
            }
        }
    }
    let omega = instance.omega();
    for bidder in 0..space.bidder_count() {
        let cells: Vec<String> = omega
            .cells(bidder)
            .iter()
            .map(|cell| {
                let refs: Vec<String> = cell
                    .iter()
                    .map(|&o| outcome_text::compact(&rule.outcomes()[o as usize], space))
                    .collect();
                format!("{{{}}}", refs.join(" "))
            })
            .collect();
        out.push_str(&format!(
            "omega {} = {}\n",
            space.bidder_name(bidder),
            cells.join(" ")
        ));
    }
    if let Some(UtilityModel::Table(map)) = instance.utility() {
        let mut rows: Vec<(u32, usize, usize, Rational)> = map
            .iter()
            .map(|((o, b, t), v)| (rule.lookup_outcome(o).expect("utility over rule outcomes"), *b, *t, *v))
            .collect();
        rows.sort_by_key(|(o, b, t, _)| (*b, *o, *t));
        for (o, b, t, v) in rows {
            out.push_str(&format!(
                "util {} {} {} = {}\n",
                space.bidder_name(b),
                outcome_text::compact(&rule.outcomes()[o as usize], space),
                space.types(b)[t].text,
                format_rational(&v)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FPA5: &str = "\
inst v1
types A = 1 2 3 4 5
types B = 1 2 3 4 5
rule fpa bids=identity tiebreak=lex
";

    #[test]
    fn parse_fpa_instance() {
        let inst = parse_instance(FPA5).unwrap();
        assert_eq!(inst.space().profile_count(), 25);
        let p = inst.space().profile_id(&TypeProfile(vec![2, 1]));
        assert_eq!(
            inst.rule().outcome(p),
            &Outcome::Auction { winner: 0, price: Rational::from_integer(3) }
        );
    }

    #[test]
    fn emit_parse_round_trip() {
        let inst = parse_instance(FPA5).unwrap();
        let emitted = emit_instance(&inst);
        let again = parse_instance(&emitted).unwrap();
        assert_eq!(emit_instance(&again), emitted);
    }

    #[test]
    fn incomplete_table_lists_missing_profiles() {
        let doc = "\
inst v1
types A = 1 2
types B = 1 2
rule table
table (1,1) -> out=x
";
        let e = parse_instance(doc).unwrap_err();
        assert!(e.message.contains("missing profiles"));
        assert!(e.message.contains("(1,2)"));
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let doc = "inst v1\ntypes A = 1\nrule spa\nfrobnicate yes\n";
        let e = parse_instance(doc).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("frobnicate"));
    }

    #[test]
    fn table_rule_round_trips() {
        let doc = "\
inst v1
types A = 1 2
types B = 1 2
rule table
table (1,1) -> out=lo
table (1,2) -> win=B pay=2
table (2,1) -> win=A pay=2
table (2,2) -> out=lo
omega A = {lo} {B@2 A@2}
omega B = {lo A@2} {B@2}
util A lo 1 = 0
util A lo 2 = 1/2
util A B@2 1 = 0
util A B@2 2 = 0
util A A@2 1 = -1
util A A@2 2 = 0
util B lo 1 = 0
util B lo 2 = 0
util B B@2 1 = -1
util B B@2 2 = 0
util B A@2 1 = 0
util B A@2 2 = 0
";
        let inst = parse_instance(doc).unwrap();
        let emitted = emit_instance(&inst);
        let again = parse_instance(&emitted).unwrap();
        assert_eq!(emit_instance(&again), emitted);
        assert!(matches!(inst, Instance::Bare { .. }));
    }
}
