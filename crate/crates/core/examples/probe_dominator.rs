use veilbid::analysis::*;
use veilbid::auctions;
use veilbid::frontier::{enumerate, SearchBounds};
use veilbid::io::emit_protocol;
use veilbid::model::TypeSpace;
use veilbid::observation::privacy_profile;

fn main() {
    let s32 = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2]).unwrap();
    let spa = auctions::make_spa(s32).unwrap();
    let e = enumerate(&spa.rule, &spa.omega, &SearchBounds::default()).unwrap();
    let sealed = auctions::sealed_bid(&spa.rule);
    let sig_sealed = privacy_profile(&sealed, &spa.omega).unwrap();
    let idx = e.find_dominator(&sig_sealed).unwrap().unwrap();
    let dom = &e.protocols[idx];
    println!("dominator index {idx}");
    println!("validate ok: {}", dom.validate().is_ok());
    println!("pruned: {}", dom.is_pruned().pruned);
    println!("implements: {:?}", implements(dom, &spa.rule).is_ok());
    let sig = privacy_profile(dom, &spa.omega).unwrap();
    println!("auctioneer cells: {} (sealed {})", sig.auctioneer.cell_count(), sig_sealed.auctioneer.cell_count());
    for b in 0..3 {
        println!("bidder {} cells: {} (sealed {})", b + 1, sig.bidders[b].cell_count(), sig_sealed.bidders[b].cell_count());
    }
    println!("MBI: {:?}", is_minimally_bidder_informative(dom, &spa.rule, &spa.omega).unwrap().is_none());
    println!("auctioneer cells of dominator:");
    for cell in sig.auctioneer.cells() {
        let names: Vec<String> = cell.iter().map(|&p| spa.rule.space().format_profile(p)).collect();
        println!("  {}", names.join(" "));
    }
    println!("{}", emit_protocol(dom));
}
