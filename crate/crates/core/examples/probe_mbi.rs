use veilbid::analysis::*;
use veilbid::auctions;
use veilbid::model::TypeSpace;

fn main() {
    let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3]).unwrap();
    let spa = auctions::make_spa(space).unwrap();
    let asc = auctions::ascending(&spa).unwrap();
    for v in mbi_violations(&asc, &spa.rule, &spa.omega).unwrap() {
        println!("bidder {} note: {}", v.bidder + 1, v.note);
    }
    // Print experiences of the first witness pair.
    let v = &mbi_violations(&asc, &spa.rule, &spa.omega).unwrap()[0];
    if let Witness::ProfilePair { a, b } = &v.witness {
        for p in [a, b] {
            let t = asc.run(p, &spa.omega).unwrap();
            let moves: Vec<String> = t.experiences[v.bidder]
                .moves
                .iter()
                .map(|(i, act)| format!("{}:{}", asc.infosets[*i as usize].label, asc.infosets[*i as usize].actions[*act as usize]))
                .collect();
            println!("profile {:?}: bidder {} moves {:?} outcome {}", p.0, v.bidder + 1, moves, t.outcome.display(&asc.space));
            let hist: Vec<String> = t.auctioneer_history.iter()
                .map(|(i, act)| format!("{}:{}", asc.infosets[*i as usize].label, asc.infosets[*i as usize].actions[*act as usize]))
                .collect();
            println!("  full history {:?}", hist);
        }
    }
}
