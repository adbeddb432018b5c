//! The `.proto` document: infoset records with answer rows, then node and
//! leaf records in parent-before-child order.

use std::collections::HashMap;

use crate::protocol::{Infoset, Node, NodeKind, ProtocolTree};

use super::{check_ident, err, outcome_text, tokenize, Instance, ParseError, Token};

fn kv<'a>(tok: &Token<'a>, key: &str) -> Option<&'a str> {
    tok.text.strip_prefix(key).and_then(|s| s.strip_prefix('='))
}

/// Parse a protocol document against its instance. The tree is validated
/// structurally and every leaf outcome must belong to the instance's
/// outcome set.
pub fn parse_protocol(text: &str, instance: &Instance) -> Result<ProtocolTree, ParseError> {
    let space = instance.space().clone();
    let rule = instance.rule();

    struct InfosetDecl {
        line: usize,
        owner: usize,
        actions: Vec<String>,
        answers: HashMap<usize, (usize, u32)>,
    }

    let mut header_seen = false;
    let mut infosets: Vec<InfosetDecl> = Vec::new();
    let mut infoset_ids: HashMap<String, usize> = HashMap::new();
    let mut node_lines: Vec<(usize, Vec<Token<'_>>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        match toks[0].text {
            "proto" => {
                if header_seen {
                    return Err(err(lineno, toks[0].col, "duplicate header"));
                }
                if toks.len() != 2 || toks[1].text != "v1" {
                    return Err(err(lineno, toks[0].col, "expected `proto v1`"));
                }
                header_seen = true;
            }
            "infoset" => {
                // infoset i0 bidder=A actions = yes no
                if toks.len() < 6 || toks[3].text != "actions" || toks[4].text != "=" {
                    return Err(err(
                        lineno,
                        toks[0].col,
                        "expected `infoset <id> bidder=<name> actions = <a>...`",
                    ));
                }
                let id = check_ident(lineno, toks[1])?;
                if infoset_ids.contains_key(&id) {
                    return Err(err(lineno, toks[1].col, format!("duplicate infoset {id:?}")));
                }
                let owner_name = kv(&toks[2], "bidder")
                    .ok_or_else(|| err(lineno, toks[2].col, "expected bidder=<name>"))?;
                let owner = space
                    .bidder_index(owner_name)
                    .ok_or_else(|| err(lineno, toks[2].col, format!("unknown bidder {owner_name:?}")))?;
                let mut actions = Vec::new();
                for t in &toks[5..] {
                    let a = check_ident(lineno, *t)?;
                    if actions.contains(&a) {
                        return Err(err(lineno, t.col, format!("duplicate action {a:?}")));
                    }
                    actions.push(a);
                }
                infoset_ids.insert(id, infosets.len());
                infosets.push(InfosetDecl {
                    line: lineno,
                    owner,
                    actions,
                    answers: HashMap::new(),
                });
            }
            "answer" => {
                // answer i0 5 -> yes
                if toks.len() != 5 || toks[3].text != "->" {
                    return Err(err(lineno, toks[0].col, "expected `answer <infoset> <type> -> <action>`"));
                }
                let Some(&i) = infoset_ids.get(toks[1].text) else {
                    return Err(err(lineno, toks[1].col, format!("unknown infoset {:?}", toks[1].text)));
                };
                let decl = &mut infosets[i];
                let t = space
                    .type_index(decl.owner, toks[2].text)
                    .ok_or_else(|| {
                        err(lineno, toks[2].col, format!("unknown type {:?} for the infoset owner", toks[2].text))
                    })?;
                let a = decl
                    .actions
                    .iter()
                    .position(|x| x == toks[4].text)
                    .ok_or_else(|| err(lineno, toks[4].col, format!("unknown action {:?}", toks[4].text)))?;
                if decl.answers.insert(t, (lineno, a as u32)).is_some() {
                    return Err(err(lineno, toks[2].col, "duplicate answer row"));
                }
            }
            "node" | "leaf" => node_lines.push((lineno, toks)),
            other => return Err(err(lineno, toks[0].col, format!("unknown key {other:?}"))),
        }
    }
    if !header_seen {
        return Err(err(1, 1, "missing `proto v1` header"));
    }

    // Answer totality.
    let mut built_infosets = Vec::new();
    for decl in &infosets {
        let want = space.type_count(decl.owner);
        let missing: Vec<String> = (0..want)
            .filter(|t| !decl.answers.contains_key(t))
            .map(|t| space.types(decl.owner)[t].text.clone())
            .collect();
        if !missing.is_empty() {
            return Err(err(
                decl.line,
                1,
                format!("answer rows missing for types: {}", missing.join(" ")),
            ));
        }
        built_infosets.push(Infoset {
            owner: decl.owner,
            label: String::new(),
            actions: decl.actions.clone(),
            answer: (0..want).map(|t| decl.answers[&t].1).collect(),
        });
    }
    for (label, &i) in &infoset_ids {
        built_infosets[i].label = label.clone();
    }

    // Nodes, parent-before-child.
    let mut nodes: Vec<Node> = Vec::new();
    let mut node_ids: HashMap<String, u32> = HashMap::new();
    let mut outcomes = Vec::new();
    let mut root: Option<u32> = None;
    for (lineno, toks) in &node_lines {
        let lineno = *lineno;
        let is_leaf = toks[0].text == "leaf";
        if toks.len() < 2 {
            return Err(err(lineno, toks[0].col, "missing node id"));
        }
        let id = check_ident(lineno, toks[1])?;
        if node_ids.contains_key(&id) {
            return Err(err(lineno, toks[1].col, format!("duplicate node {id:?}")));
        }
        let (parent, rest): (Option<(u32, u32)>, &[Token<'_>]) = if toks.len() > 2 && toks[2].text == "root" {
            if root.is_some() {
                return Err(err(lineno, toks[2].col, "second root declared"));
            }
            (None, &toks[3..])
        } else if toks.len() > 3 {
            let pid = kv(&toks[2], "parent")
                .ok_or_else(|| err(lineno, toks[2].col, "expected `root` or parent=<id>"))?;
            let action = kv(&toks[3], "action")
                .ok_or_else(|| err(lineno, toks[3].col, "expected action=<label>"))?;
            let &pnode = node_ids
                .get(pid)
                .ok_or_else(|| err(lineno, toks[2].col, format!("unknown parent {pid:?} (parents must be declared first)")))?;
            let NodeKind::Internal { infoset, .. } = &nodes[pnode as usize].kind else {
                return Err(err(lineno, toks[2].col, "parent is a leaf"));
            };
            let actions = &built_infosets[*infoset as usize].actions;
            let a = actions
                .iter()
                .position(|x| x == action)
                .ok_or_else(|| err(lineno, toks[3].col, format!("action {action:?} not offered by the parent's infoset")))?;
            (Some((pnode, a as u32)), &toks[4..])
        } else {
            return Err(err(lineno, toks[0].col, "expected `root` or `parent=<id> action=<label>`"));
        };

        let kind = if is_leaf {
            // ... -> win=A pay=5 | out=x
            let arrow = rest
                .first()
                .ok_or_else(|| err(lineno, toks[0].col, "leaf is missing `-> <outcome>`"))?;
            if arrow.text != "->" {
                return Err(err(lineno, arrow.col, "expected `->`"));
            }
            let outcome = outcome_text::parse_verbose(lineno, &rest[1..], &space)?;
            if rule.lookup_outcome(&outcome).is_none() {
                return Err(err(
                    lineno,
                    arrow.col,
                    "leaf outcome is not a member of the instance's outcome set",
                ));
            }
            let o = ProtocolTree::intern_outcome(&mut outcomes, outcome);
            NodeKind::Leaf { outcome: o }
        } else {
            // node ... bidder=A infoset=i0
            if rest.len() != 2 {
                return Err(err(lineno, toks[0].col, "expected `bidder=<name> infoset=<id>`"));
            }
            let bidder_name = kv(&rest[0], "bidder")
                .ok_or_else(|| err(lineno, rest[0].col, "expected bidder=<name>"))?;
            let bidder = space
                .bidder_index(bidder_name)
                .ok_or_else(|| err(lineno, rest[0].col, format!("unknown bidder {bidder_name:?}")))?;
            let iid = kv(&rest[1], "infoset")
                .ok_or_else(|| err(lineno, rest[1].col, "expected infoset=<id>"))?;
            let &i = infoset_ids
                .get(iid)
                .ok_or_else(|| err(lineno, rest[1].col, format!("unknown infoset {iid:?}")))?;
            if built_infosets[i].owner != bidder {
                return Err(err(lineno, rest[0].col, "node bidder disagrees with the infoset's owner"));
            }
            NodeKind::Internal {
                infoset: i as u32,
                children: Vec::new(),
            }
        };
        let this = nodes.len() as u32;
        if parent.is_none() {
            root = Some(this);
        }
        if let Some((p, a)) = parent {
            let NodeKind::Internal { children, .. } = &mut nodes[p as usize].kind else {
                unreachable!("checked above");
            };
            if children.iter().any(|(x, _)| *x == a) {
                return Err(err(lineno, toks[2].col, "parent already has a child on this action"));
            }
            children.push((a, this));
            children.sort_unstable();
        }
        node_ids.insert(id.clone(), this);
        nodes.push(Node {
            parent,
            label: id,
            kind,
        });
    }
    let Some(root) = root else {
        return Err(err(1, 1, "no root node declared"));
    };

    let tree = ProtocolTree {
        space,
        nodes,
        root,
        infosets: built_infosets,
        outcomes,
    };
    let report = tree.validate();
    if let Some(v) = report.violations.first() {
        let name = |n: u32| tree.nodes[n as usize].label.clone();
        let msg = match v {
            crate::protocol::InvariantViolation::PerfectRecallBreach { infoset, node_a, node_b } => {
                format!(
                    "perfect recall breach at infoset {:?}: nodes {:?} and {:?} give the owner different experiences",
                    tree.infosets[*infoset as usize].label,
                    name(*node_a),
                    name(*node_b)
                )
            }
            crate::protocol::InvariantViolation::ActionSetMismatch { node, infoset } => format!(
                "node {:?} does not offer exactly the action set of infoset {:?}",
                name(*node),
                tree.infosets[*infoset as usize].label
            ),
            other => format!("{other:?}"),
        };
        return Err(err(1, 1, format!("protocol fails validation: {msg}")));
    }
    Ok(tree)
}

/// Canonical text for a protocol: canonicalize, then infoset records with
/// their answer rows, then node and leaf records in canonical node order.
pub fn emit_protocol(tree: &ProtocolTree) -> String {
    let tree = tree.canonicalize();
    let space = &tree.space;
    let mut out = String::from("proto v1\n");
    for inf in &tree.infosets {
        out.push_str(&format!(
            "infoset {} bidder={} actions = {}\n",
            inf.label,
            space.bidder_name(inf.owner),
            inf.actions.join(" ")
        ));
        for (t, &a) in inf.answer.iter().enumerate() {
            out.push_str(&format!(
                "answer {} {} -> {}\n",
                inf.label,
                space.types(inf.owner)[t].text,
                inf.actions[a as usize]
            ));
        }
    }
    for (n, node) in tree.nodes.iter().enumerate() {
        let position = match node.parent {
            None => "root".to_string(),
            Some((p, a)) => {
                let NodeKind::Internal { infoset, .. } = &tree.nodes[p as usize].kind else {
                    unreachable!("parents are internal");
                };
                format!(
                    "parent={} action={}",
                    tree.nodes[p as usize].label,
                    tree.infosets[*infoset as usize].actions[a as usize]
                )
            }
        };
        match &node.kind {
            NodeKind::Leaf { outcome } => {
                out.push_str(&format!(
                    "leaf n{n} {position} -> {}\n",
                    outcome_text::verbose(&tree.outcomes[*outcome as usize], space)
                ));
            }
            NodeKind::Internal { infoset, .. } => {
                let inf = &tree.infosets[*infoset as usize];
                out.push_str(&format!(
                    "node n{n} {position} bidder={} infoset={}\n",
                    space.bidder_name(inf.owner),
                    inf.label
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_instance;
    use super::*;

    const INST: &str = "\
inst v1
types A = 1 2
types B = 1 2
rule fpa bids=identity tiebreak=lex
";

    #[test]
    fn round_trip_sealed_bid() {
        let inst = parse_instance(INST).unwrap();
        let tree = crate::auctions::sealed_bid(inst.rule());
        let text = emit_protocol(&tree);
        let parsed = parse_protocol(&text, &inst).unwrap();
        assert_eq!(parsed.canonicalize(), tree.canonicalize());
        assert_eq!(emit_protocol(&parsed), text);
    }

    #[test]
    fn recall_breach_is_a_parse_error_naming_nodes() {
        let inst = parse_instance(INST).unwrap();
        // B's two nodes share an infoset but B has already acted differently
        // ... A acts differently, which is fine; instead merge two A-nodes
        // after A answered differently at an earlier own infoset.
        let doc = "\
proto v1
infoset first bidder=A actions = l r
answer first 1 -> l
answer first 2 -> r
infoset again bidder=A actions = l r
answer again 1 -> l
answer again 2 -> r
node n0 root bidder=A infoset=first
node n1 parent=n0 action=l bidder=A infoset=again
node n2 parent=n0 action=r bidder=A infoset=again
leaf n3 parent=n1 action=l -> win=A pay=1
leaf n4 parent=n1 action=r -> win=A pay=2
leaf n5 parent=n2 action=l -> win=B pay=2
leaf n6 parent=n2 action=r -> win=A pay=2
";
        let e = parse_protocol(doc, &inst).unwrap_err();
        assert!(e.message.contains("perfect recall"));
        assert!(e.message.contains("n1") && e.message.contains("n2"));
    }

    #[test]
    fn single_bidder_two_node_protocol_parses_and_implements() {
        let inst = parse_instance(
            "inst v1\ntypes A = 1 2\nrule table\ntable (1) -> out=lo\ntable (2) -> out=hi\n",
        )
        .unwrap();
        let doc = "\
proto v1
infoset ask bidder=A actions = lo hi
answer ask 1 -> lo
answer ask 2 -> hi
node n0 root bidder=A infoset=ask
leaf n1 parent=n0 action=lo -> out=lo
leaf n2 parent=n0 action=hi -> out=hi
";
        let tree = parse_protocol(doc, &inst).unwrap();
        crate::analysis::implements(&tree, inst.rule()).unwrap();
    }
}
