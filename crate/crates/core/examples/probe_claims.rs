use veilbid::analysis::*;
use veilbid::auctions::{self, BidFunctions};
use veilbid::frontier::{enumerate, SearchBounds};
use veilbid::model::TypeSpace;
use veilbid::observation::privacy_profile;

fn main() {
    // Prop 6: ascending vs sealed-bid on SPA 3 x {1,2,3}.
    let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3]).unwrap();
    let spa = auctions::make_spa(space).unwrap();
    let asc = auctions::ascending(&spa).unwrap();
    let sealed = auctions::sealed_bid(&spa.rule);
    let verdict = privacy_compare(&asc, &sealed, &spa.rule, &spa.omega).unwrap();
    println!("Prop6 ascending vs sealed SPA3x3: {:?} (auctioneer {:?}, bidders {:?})",
        verdict.overall, verdict.auctioneer, verdict.bidders);

    // Prop 5: ascending-join not MBI; incomparable with sealed-bid.
    let aj = auctions::ascending_join(&spa).unwrap();
    let mbi = is_minimally_bidder_informative(&aj, &spa.rule, &spa.omega).unwrap();
    println!("Prop5 ascending-join MBI witness exists: {}", mbi.is_some());
    let verdict = privacy_compare(&aj, &sealed, &spa.rule, &spa.omega).unwrap();
    println!("Prop5 ascending-join vs sealed: {:?}", verdict.overall);

    // Ascending bidder partitions equal sealed-bid's (Prop 6 ingredient).
    let pa = privacy_profile(&asc, &spa.omega).unwrap();
    let ps = privacy_profile(&sealed, &spa.omega).unwrap();
    println!("ascending bidder views == sealed: {}", pa.bidders == ps.bidders);

    // Descending vs sealed-bid FPA {1..5}^2: incomparable.
    let space5 = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3, 4, 5]).unwrap();
    let fpa = auctions::make_fpa(space5, BidFunctions::Identity).unwrap();
    let desc = auctions::descending(&fpa).unwrap();
    let sealed_fpa = auctions::sealed_bid(&fpa.rule);
    let verdict = privacy_compare(&desc, &sealed_fpa, &fpa.rule, &fpa.omega).unwrap();
    println!("FPA descending vs sealed: {:?}", verdict.overall);
    // Lemma 6: descending has no contextual violations; sealed has some.
    println!("descending contextual: {}", contextual_violations(&desc, &fpa.rule).unwrap().len());
    println!("sealed FPA contextual: {}", contextual_violations(&sealed_fpa, &fpa.rule).unwrap().len());
    // Descending not MBI (witness expected), sealed is MBI (Lemma 1).
    println!("descending MBI witness: {:?}", is_minimally_bidder_informative(&desc, &fpa.rule, &fpa.omega).unwrap().is_some());
    println!("sealed MBI ok: {:?}", is_minimally_bidder_informative(&sealed_fpa, &fpa.rule, &fpa.omega).unwrap().is_none());
    // Descending auctioneer partition cells.
    let pd = privacy_profile(&desc, &fpa.omega).unwrap();
    println!("descending auctioneer cells: {}", pd.auctioneer.cell_count());

    // Scans: FPA {1..4} corners empty, icc nonempty per bidder (Lemma 7).
    let s4 = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3, 4]).unwrap();
    let fpa4 = auctions::make_fpa(s4, BidFunctions::Identity).unwrap();
    println!("FPA4 corners: {}", corners_scan(&fpa4.rule).len());
    let icc = icc_scan(&fpa4.rule, &fpa4.omega).unwrap();
    let per_bidder: Vec<usize> = (0..2).map(|b| icc.iter().filter(|v| v.bidder == b).count()).collect();
    println!("FPA4 icc per bidder: {:?}", per_bidder);

    // SPA 3 x {1..6}: corners nonempty; icc-not-corners per bidder (Lemma 8).
    let s6 = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2, 3, 4, 5, 6]).unwrap();
    let spa6 = auctions::make_spa(s6).unwrap();
    println!("SPA6 corners: {}", corners_scan(&spa6.rule).len());
    let icc6 = icc_scan(&spa6.rule, &spa6.omega).unwrap();
    let not_corners: Vec<usize> = (0..3)
        .map(|b| icc6.iter().filter(|v| v.bidder == b && !v.also_corners).count())
        .collect();
    println!("SPA6 icc-not-corners per bidder: {:?}", not_corners);

    // DSIC: SPA rule ok; FPA identity-bid rule has a counterexample.
    println!("SPA dsic: {:?}", dsic_rule(&spa.rule, &spa.utility).unwrap().is_none());
    println!("FPA dsic counterexample: {:?}", dsic_rule(&fpa.rule, &fpa.utility).unwrap().is_some());

    // Named signatures present in the enumerated streams.
    let s2 = TypeSpace::shared_numeric(&["1", "2"], &[1, 2, 3]).unwrap();
    let spa23 = auctions::make_spa(s2).unwrap();
    let e = enumerate(&spa23.rule, &spa23.omega, &SearchBounds::default()).unwrap();
    let asc23 = privacy_profile(&auctions::ascending(&spa23).unwrap(), &spa23.omega).unwrap();
    println!("SPA 2x3 stream contains ascending: {}", e.signatures.contains(&asc23));

    let s32 = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2]).unwrap();
    let spa32 = auctions::make_spa(s32).unwrap();
    let e = enumerate(&spa32.rule, &spa32.omega, &SearchBounds::default()).unwrap();
    for (name, tree) in [
        ("sealed", auctions::sealed_bid(&spa32.rule)),
        ("ascending", auctions::ascending(&spa32).unwrap()),
        ("ascending-join", auctions::ascending_join(&spa32).unwrap()),
    ] {
        let sig = privacy_profile(&tree, &spa32.omega).unwrap();
        println!("SPA 3x2 stream contains {name}: {} (dominator: {:?})",
            e.signatures.contains(&sig),
            e.find_dominator(&sig).unwrap());
    }
}
