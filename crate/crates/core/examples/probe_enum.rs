use std::time::Instant;
use veilbid::auctions::{self, BidFunctions};
use veilbid::frontier::{enumerate, SearchBounds};
use veilbid::model::TypeSpace;

fn main() {
    // FPA 2 x {1,2,3}
    let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
    let inst = auctions::make_fpa(space, BidFunctions::Identity).unwrap();
    let t = Instant::now();
    let e = enumerate(&inst.rule, &inst.omega, &SearchBounds::default()).unwrap();
    println!(
        "FPA 2x3: candidates={} signatures={} truncated={:?} in {:?}",
        e.examined, e.signatures.len(), e.truncated.is_some(), t.elapsed()
    );

    // SPA 2 x {1,2,3}
    let space = TypeSpace::shared_numeric(&["1", "2"], &[1, 2, 3]).unwrap();
    let inst = auctions::make_spa(space).unwrap();
    let t = Instant::now();
    let e = enumerate(&inst.rule, &inst.omega, &SearchBounds::default()).unwrap();
    println!(
        "SPA 2x3: candidates={} signatures={} truncated={:?} in {:?}",
        e.examined, e.signatures.len(), e.truncated.is_some(), t.elapsed()
    );

    // SPA 3 x {1,2}
    let space = TypeSpace::shared_numeric(&["1", "2", "3"], &[1, 2]).unwrap();
    let inst = auctions::make_spa(space).unwrap();
    let t = Instant::now();
    let e = enumerate(&inst.rule, &inst.omega, &SearchBounds::default()).unwrap();
    println!(
        "SPA 3x2: candidates={} signatures={} truncated={:?} in {:?}",
        e.examined, e.signatures.len(), e.truncated.is_some(), t.elapsed()
    );

    // FPA 2 x {1,2}
    let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap();
    let inst = auctions::make_fpa(space, BidFunctions::Identity).unwrap();
    let t = Instant::now();
    let e = enumerate(&inst.rule, &inst.omega, &SearchBounds::default()).unwrap();
    println!(
        "FPA 2x2: candidates={} signatures={} truncated={:?} in {:?}",
        e.examined, e.signatures.len(), e.truncated.is_some(), t.elapsed()
    );
}
