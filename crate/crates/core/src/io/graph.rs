//! DOT export of a protocol tree with infoset grouping annotations: nodes of
//! one infoset share a fill color and carry the infoset id in their label.

use crate::protocol::{NodeKind, ProtocolTree};

const PALETTE: &[&str] = &[
    "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99", "#1f78b4", "#33a02c",
    "#e31a1c", "#ff7f00", "#6a3d9a", "#b15928",
];

pub fn emit_graph(tree: &ProtocolTree) -> String {
    let tree = tree.canonicalize();
    let space = &tree.space;
    let mut out = String::from("digraph protocol {\n  rankdir=TB;\n  node [shape=box, style=filled, fillcolor=white];\n");
    for (n, node) in tree.nodes.iter().enumerate() {
        match &node.kind {
            NodeKind::Leaf { outcome } => {
                out.push_str(&format!(
                    "  n{n} [shape=ellipse, label=\"{}\"];\n",
                    tree.outcomes[*outcome as usize].display(space)
                ));
            }
            NodeKind::Internal { infoset, .. } => {
                let inf = &tree.infosets[*infoset as usize];
                let color = PALETTE[*infoset as usize % PALETTE.len()];
                out.push_str(&format!(
                    "  n{n} [fillcolor=\"{color}\", label=\"{}? [{}]\"];\n",
                    space.bidder_name(inf.owner),
                    inf.label
                ));
            }
        }
    }
    for (n, node) in tree.nodes.iter().enumerate() {
        if let NodeKind::Internal { infoset, children } = &node.kind {
            let inf = &tree.infosets[*infoset as usize];
            for &(a, c) in children {
                out.push_str(&format!(
                    "  n{n} -> n{c} [label=\"{}\"];\n",
                    inf.actions[a as usize]
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_export_mentions_every_node() {
        let space = crate::model::TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap();
        let inst = crate::auctions::make_fpa(space, crate::auctions::BidFunctions::Identity).unwrap();
        let tree = crate::auctions::sealed_bid(&inst.rule);
        let dot = emit_graph(&tree);
        assert!(dot.starts_with("digraph"));
        for n in 0..tree.nodes.len() {
            assert!(dot.contains(&format!("n{n} ")));
        }
    }
}
