//! Induced information partitions: what the auctioneer and each bidder learn
//! about the type profile from one play of a protocol.
//!
//! The auctioneer observes the full (infoset, action) history, including
//! forced moves at single-action infosets. A bidder observes their own type,
//! the subsequence of their own moves, and the Ω-cell of the terminal
//! outcome; experience equality compares infoset ids by identity.

use crate::model::{quotient, ObservationStructure, Partition};
use crate::protocol::{ProtocolError, ProtocolTree};

/// The auctioneer's partition: profiles merged iff they produce identical
/// full query/answer histories.
pub fn auctioneer_view(tree: &ProtocolTree) -> Partition {
    quotient(&tree.space, |p| tree.path(p).ok())
        .expect("validated protocols have total paths")
}

/// Bidder `i`'s partition: profiles merged iff own type, own-move experience
/// and outcome cell all coincide.
pub fn bidder_view(
    tree: &ProtocolTree,
    bidder: usize,
    omega: &ObservationStructure,
) -> Result<Partition, ProtocolError> {
    let mut failure: Option<ProtocolError> = None;
    let part = quotient(&tree.space, |p| {
        let profile = tree.space.profile(p);
        match tree.run(&profile, omega) {
            Ok(t) => Some(t.experiences[bidder].clone()),
            Err(e) => {
                failure = Some(e);
                None
            }
        }
    });
    match part {
        Ok(p) => Ok(p),
        Err(_) => Err(failure.expect("quotient only fails when a run failed")),
    }
}

/// Both views bundled; this is the protocol's privacy signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrivacyProfile {
    pub auctioneer: Partition,
    pub bidders: Vec<Partition>,
}

pub fn privacy_profile(
    tree: &ProtocolTree,
    omega: &ObservationStructure,
) -> Result<PrivacyProfile, ProtocolError> {
    let auctioneer = auctioneer_view(tree);
    let bidders = (0..tree.space.bidder_count())
        .map(|i| bidder_view(tree, i, omega))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PrivacyProfile { auctioneer, bidders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auctions;
    use crate::model::TypeSpace;

    #[test]
    fn sealed_bid_auctioneer_view_is_all_singletons() {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
        let inst = auctions::make_fpa(space, auctions::BidFunctions::Identity).unwrap();
        let tree = auctions::sealed_bid(&inst.rule);
        let view = auctioneer_view(&tree);
        assert_eq!(view.cell_count(), 9);
    }

    #[test]
    fn bidder_view_never_merges_across_own_types() {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
        let inst = auctions::make_spa(space).unwrap();
        let tree = auctions::ascending(&inst).unwrap();
        for bidder in 0..2 {
            let view = bidder_view(&tree, bidder, &inst.omega).unwrap();
            for cell in view.cells() {
                let t0 = tree.space.component(cell[0], bidder);
                assert!(cell.iter().all(|p| tree.space.component(*p, bidder) == t0));
            }
        }
    }
}
