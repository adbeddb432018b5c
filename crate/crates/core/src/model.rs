//! Foundational value types: type spaces, outcomes, choice rules,
//! outcome-distinguishability structures, and the partition algebra over
//! type profiles.
//!
//! All transfers and utilities are exact rationals; outcome equality and
//! incentive comparisons are exact identities, never floating point.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

/// Exact rational scalar used for bids, transfers and utilities.
pub type Rational = num_rational::Ratio<i64>;

/// Parse an exact rational written as `p/q` or as an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num.trim().parse().ok()?;
            let den: i64 = den.trim().parse().ok()?;
            if den == 0 {
                None
            } else {
                Some(Rational::new(num, den))
            }
        }
        None => {
            let n: i64 = s.trim().parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

/// Render a rational as `p/q`, or as a bare integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("type space must have at least one bidder")]
    NoBidders,
    #[error("bidder {0} has an empty type list")]
    EmptyTypeList(String),
    #[error("bidder {bidder} has duplicate type label {label:?}")]
    DuplicateType { bidder: String, label: String },
    #[error("duplicate bidder name {0:?}")]
    DuplicateBidder(String),
    #[error("key function undefined on profile {0}")]
    KeyUndefined(String),
    #[error("partitions have different ground sets")]
    GroundSetMismatch,
    #[error("observation structure: {0}")]
    BadObservation(String),
    #[error("utility undefined for outcome {outcome:?}, bidder {bidder}, type {label:?}")]
    UtilityUndefined {
        outcome: String,
        bidder: String,
        label: String,
    },
    #[error("type label {label:?} of bidder {bidder} has no numeric value")]
    NonNumericType { bidder: String, label: String },
    #[error("outcome {0:?} carries no auction payload")]
    NoPayload(String),
}

/// One label in a bidder's ordered type list. `value` is present for numeric
/// labels and is what auction rules compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeLabel {
    pub text: String,
    pub value: Option<Rational>,
}

impl TypeLabel {
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into();
        let value = parse_rational(&text);
        TypeLabel { text, value }
    }
}

/// A finite per-bidder type structure. Bidders are indexed `0..n` internally
/// and displayed by name; each type list is ordered and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeSpace {
    bidder_names: Vec<String>,
    types: Vec<Vec<TypeLabel>>,
    strides: Vec<u32>,
    profile_count: u32,
}

impl TypeSpace {
    pub fn new(bidder_names: Vec<String>, types: Vec<Vec<TypeLabel>>) -> Result<Arc<Self>, ModelError> {
        if bidder_names.is_empty() || bidder_names.len() != types.len() {
            return Err(ModelError::NoBidders);
        }
        for (i, name) in bidder_names.iter().enumerate() {
            if bidder_names[..i].contains(name) {
                return Err(ModelError::DuplicateBidder(name.clone()));
            }
        }
        for (name, list) in bidder_names.iter().zip(&types) {
            if list.is_empty() {
                return Err(ModelError::EmptyTypeList(name.clone()));
            }
            for (i, label) in list.iter().enumerate() {
                if list[..i].iter().any(|l| l.text == label.text) {
                    return Err(ModelError::DuplicateType {
                        bidder: name.clone(),
                        label: label.text.clone(),
                    });
                }
            }
        }
        // Row-major strides: profile ids are lexicographic in bidder order.
        let n = types.len();
        let mut strides = vec![1u32; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * types[i + 1].len() as u32;
        }
        let profile_count = strides[0] * types[0].len() as u32;
        Ok(Arc::new(TypeSpace {
            bidder_names,
            types,
            strides,
            profile_count,
        }))
    }

    /// Shared numeric type list for every bidder; labels are the decimal values.
    pub fn shared_numeric(bidder_names: &[&str], values: &[i64]) -> Result<Arc<Self>, ModelError> {
        let list: Vec<TypeLabel> = values.iter().map(|v| TypeLabel::new(v.to_string())).collect();
        TypeSpace::new(
            bidder_names.iter().map(|s| s.to_string()).collect(),
            vec![list; bidder_names.len()],
        )
    }

    pub fn bidder_count(&self) -> usize {
        self.types.len()
    }

    pub fn bidder_name(&self, i: usize) -> &str {
        &self.bidder_names[i]
    }

    pub fn bidder_index(&self, name: &str) -> Option<usize> {
        self.bidder_names.iter().position(|n| n == name)
    }

    pub fn types(&self, bidder: usize) -> &[TypeLabel] {
        &self.types[bidder]
    }

    pub fn type_count(&self, bidder: usize) -> usize {
        self.types[bidder].len()
    }

    pub fn type_index(&self, bidder: usize, label: &str) -> Option<usize> {
        self.types[bidder].iter().position(|l| l.text == label)
    }

    /// Numeric value of a type, or an error for non-numeric labels.
    pub fn numeric_value(&self, bidder: usize, type_idx: usize) -> Result<Rational, ModelError> {
        self.types[bidder][type_idx]
            .value
            .ok_or_else(|| ModelError::NonNumericType {
                bidder: self.bidder_names[bidder].clone(),
                label: self.types[bidder][type_idx].text.clone(),
            })
    }

    pub fn profile_count(&self) -> u32 {
        self.profile_count
    }

    pub fn profiles(&self) -> impl Iterator<Item = ProfileId> {
        (0..self.profile_count).map(ProfileId)
    }

    /// Type index of `bidder` within the packed profile id.
    pub fn component(&self, p: ProfileId, bidder: usize) -> usize {
        (p.0 / self.strides[bidder]) as usize % self.types[bidder].len()
    }

    /// Replace one bidder's component of a packed profile id.
    pub fn with_component(&self, p: ProfileId, bidder: usize, type_idx: usize) -> ProfileId {
        let old = self.component(p, bidder);
        ProfileId(p.0 - (old as u32) * self.strides[bidder] + (type_idx as u32) * self.strides[bidder])
    }

    pub fn profile(&self, p: ProfileId) -> TypeProfile {
        TypeProfile((0..self.bidder_count()).map(|i| self.component(p, i)).collect())
    }

    pub fn profile_id(&self, profile: &TypeProfile) -> ProfileId {
        let mut id = 0u32;
        for (i, &t) in profile.0.iter().enumerate() {
            id += t as u32 * self.strides[i];
        }
        ProfileId(id)
    }

    pub fn format_profile(&self, p: ProfileId) -> String {
        let parts: Vec<&str> = (0..self.bidder_count())
            .map(|i| self.types[i][self.component(p, i)].text.as_str())
            .collect();
        format!("({})", parts.join(","))
    }
}

/// Packed row-major profile index; ordering is lexicographic in bidder order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileId(pub u32);

/// One type index per bidder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeProfile(pub Vec<usize>);

impl TypeProfile {
    pub fn entry(&self, bidder: usize) -> usize {
        self.0[bidder]
    }
}

/// A full profile with one bidder's slot masked out; stands for an opponent
/// profile without inventing a second indexing scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskedProfile {
    pub profile: TypeProfile,
    pub masked: usize,
}

impl MaskedProfile {
    pub fn format(&self, space: &TypeSpace) -> String {
        let parts: Vec<String> = self
            .profile
            .0
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                if i == self.masked {
                    "_".to_string()
                } else {
                    space.types(i)[t].text.clone()
                }
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// An outcome of the choice rule. Auction outcomes carry the winner and the
/// winner's transfer; losers receive (0, 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Auction { winner: usize, price: Rational },
    Labeled(String),
}

impl Outcome {
    /// Allocation/transfer pair as seen by `bidder`.
    pub fn payload_for(&self, bidder: usize) -> Option<(bool, Rational)> {
        match self {
            Outcome::Auction { winner, price } => Some(if *winner == bidder {
                (true, *price)
            } else {
                (false, Rational::zero())
            }),
            Outcome::Labeled(_) => None,
        }
    }

    pub fn display(&self, space: &TypeSpace) -> String {
        match self {
            Outcome::Auction { winner, price } => {
                format!("win={} pay={}", space.bidder_name(*winner), format_rational(price))
            }
            Outcome::Labeled(l) => format!("out={l}"),
        }
    }
}

/// Total table from type profiles to outcomes. Outcomes are interned so that
/// equality tests are index comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceRule {
    space: Arc<TypeSpace>,
    outcomes: Vec<Outcome>,
    table: Vec<u32>,
}

impl ChoiceRule {
    pub fn from_fn(space: Arc<TypeSpace>, mut f: impl FnMut(&TypeSpace, ProfileId) -> Outcome) -> Self {
        let mut outcomes: Vec<Outcome> = Vec::new();
        let mut index: HashMap<Outcome, u32> = HashMap::new();
        let mut table = Vec::with_capacity(space.profile_count() as usize);
        for p in space.profiles() {
            let o = f(&space, p);
            let id = *index.entry(o.clone()).or_insert_with(|| {
                outcomes.push(o);
                (outcomes.len() - 1) as u32
            });
            table.push(id);
        }
        ChoiceRule { space, outcomes, table }
    }

    pub fn space(&self) -> &Arc<TypeSpace> {
        &self.space
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn outcome_id(&self, p: ProfileId) -> u32 {
        self.table[p.0 as usize]
    }

    pub fn outcome(&self, p: ProfileId) -> &Outcome {
        &self.outcomes[self.table[p.0 as usize] as usize]
    }

    pub fn lookup_outcome(&self, o: &Outcome) -> Option<u32> {
        self.outcomes.iter().position(|x| x == o).map(|i| i as u32)
    }
}

/// Comparison of two partitions of the same ground set in the refinement
/// lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementOrder {
    Equal,
    StrictlyFiner,
    StrictlyCoarser,
    Incomparable,
}

/// A partition of the full profile set of a type space.
///
/// Canonical form: every cell is sorted ascending and cells are ordered by
/// their least profile, so equal partitions have identical serializations.
#[derive(Debug, Clone)]
pub struct Partition {
    space: Arc<TypeSpace>,
    cells: Vec<Vec<ProfileId>>,
    cell_of: Vec<u32>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.cells == other.cells
    }
}
impl Eq for Partition {}

impl Hash for Partition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl Partition {
    fn from_cells_unchecked(space: Arc<TypeSpace>, mut cells: Vec<Vec<ProfileId>>) -> Self {
        for cell in &mut cells {
            cell.sort_unstable();
        }
        cells.sort_unstable_by_key(|c| c[0]);
        let mut cell_of = vec![0u32; space.profile_count() as usize];
        for (ci, cell) in cells.iter().enumerate() {
            for p in cell {
                cell_of[p.0 as usize] = ci as u32;
            }
        }
        Partition { space, cells, cell_of }
    }

    pub fn space(&self) -> &Arc<TypeSpace> {
        &self.space
    }

    pub fn cells(&self) -> &[Vec<ProfileId>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index(&self, p: ProfileId) -> u32 {
        self.cell_of[p.0 as usize]
    }

    pub fn same_cell(&self, a: ProfileId, b: ProfileId) -> bool {
        self.cell_of[a.0 as usize] == self.cell_of[b.0 as usize]
    }

    /// The all-singletons partition (finest element of the lattice).
    pub fn discrete(space: Arc<TypeSpace>) -> Self {
        let cells = space.profiles().map(|p| vec![p]).collect();
        Partition::from_cells_unchecked(space, cells)
    }

    /// The single-cell partition (coarsest element of the lattice).
    pub fn indiscrete(space: Arc<TypeSpace>) -> Self {
        let cells = vec![space.profiles().collect()];
        Partition::from_cells_unchecked(space, cells)
    }
}

/// Partition the profile set by an opaque key. Two profiles share a cell iff
/// their keys are equal; returns a domain error where the key is undefined.
pub fn quotient<K: Eq + Hash>(
    space: &Arc<TypeSpace>,
    mut key: impl FnMut(ProfileId) -> Option<K>,
) -> Result<Partition, ModelError> {
    let mut groups: HashMap<K, Vec<ProfileId>> = HashMap::new();
    for p in space.profiles() {
        let k = key(p).ok_or_else(|| ModelError::KeyUndefined(space.format_profile(p)))?;
        groups.entry(k).or_default().push(p);
    }
    Ok(Partition::from_cells_unchecked(
        space.clone(),
        groups.into_values().collect(),
    ))
}

/// Where `p` and `q` sit relative to each other in the refinement order.
/// `StrictlyFiner` means every cell of `p` is contained in a cell of `q` and
/// the partitions differ.
pub fn refinement_compare(p: &Partition, q: &Partition) -> Result<RefinementOrder, ModelError> {
    if p.space != q.space {
        return Err(ModelError::GroundSetMismatch);
    }
    if p == q {
        return Ok(RefinementOrder::Equal);
    }
    let finer = |a: &Partition, b: &Partition| {
        a.cells
            .iter()
            .all(|cell| cell.iter().all(|x| b.same_cell(cell[0], *x)))
    };
    if finer(p, q) {
        Ok(RefinementOrder::StrictlyFiner)
    } else if finer(q, p) {
        Ok(RefinementOrder::StrictlyCoarser)
    } else {
        Ok(RefinementOrder::Incomparable)
    }
}

/// The partition induced by outcome equality under the rule.
pub fn rule_partition(rule: &ChoiceRule) -> Partition {
    quotient(rule.space(), |p| Some(rule.outcome_id(p)))
        .expect("rule tables are total by construction")
}

/// Per-bidder partitions of the outcome set describing which outcomes each
/// bidder can inherently distinguish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationStructure {
    outcomes: Vec<Outcome>,
    lookup: HashMap<Outcome, u32>,
    cells: Vec<Vec<Vec<u32>>>,
    cell_of: Vec<Vec<u32>>,
}

impl ObservationStructure {
    pub fn from_cells(
        bidder_count: usize,
        outcomes: Vec<Outcome>,
        cells: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self, ModelError> {
        if cells.len() != bidder_count {
            return Err(ModelError::BadObservation(format!(
                "expected {} bidder partitions, got {}",
                bidder_count,
                cells.len()
            )));
        }
        let mut cell_of = Vec::with_capacity(bidder_count);
        for (bidder, partition) in cells.iter().enumerate() {
            let mut seen = vec![false; outcomes.len()];
            let mut of = vec![u32::MAX; outcomes.len()];
            for (ci, cell) in partition.iter().enumerate() {
                if cell.is_empty() {
                    return Err(ModelError::BadObservation(format!(
                        "bidder {bidder} has an empty cell"
                    )));
                }
                for &o in cell {
                    let o = o as usize;
                    if o >= outcomes.len() || seen[o] {
                        return Err(ModelError::BadObservation(format!(
                            "bidder {bidder}: outcome {o} out of range or repeated"
                        )));
                    }
                    seen[o] = true;
                    of[o] = ci as u32;
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(ModelError::BadObservation(format!(
                    "bidder {bidder}'s cells do not cover every outcome"
                )));
            }
            cell_of.push(of);
        }
        let lookup = outcomes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, o)| (o, i as u32))
            .collect();
        Ok(ObservationStructure {
            outcomes,
            lookup,
            cells,
            cell_of,
        })
    }

    /// Auction default: bidder `i` distinguishes two outcomes iff their own
    /// (allocation, transfer) pairs differ.
    pub fn auction_default(bidder_count: usize, outcomes: Vec<Outcome>) -> Result<Self, ModelError> {
        let mut cells = Vec::with_capacity(bidder_count);
        for bidder in 0..bidder_count {
            let mut groups: HashMap<Option<(bool, Rational)>, Vec<u32>> = HashMap::new();
            for (oi, o) in outcomes.iter().enumerate() {
                groups.entry(o.payload_for(bidder)).or_default().push(oi as u32);
            }
            let mut bidder_cells: Vec<Vec<u32>> = groups.into_values().collect();
            bidder_cells.sort_unstable_by_key(|c| c[0]);
            cells.push(bidder_cells);
        }
        ObservationStructure::from_cells(bidder_count, outcomes, cells)
    }

    /// Every bidder distinguishes every outcome.
    pub fn discrete(bidder_count: usize, outcomes: Vec<Outcome>) -> Result<Self, ModelError> {
        let singletons: Vec<Vec<u32>> = (0..outcomes.len() as u32).map(|i| vec![i]).collect();
        ObservationStructure::from_cells(bidder_count, outcomes, vec![singletons; bidder_count])
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn cells(&self, bidder: usize) -> &[Vec<u32>] {
        &self.cells[bidder]
    }

    pub fn bidder_count(&self) -> usize {
        self.cells.len()
    }

    /// Ω_i-cell of an outcome value; unknown outcomes are a domain error.
    pub fn cell(&self, bidder: usize, outcome: &Outcome) -> Result<u32, ModelError> {
        let id = self.lookup.get(outcome).ok_or_else(|| {
            ModelError::BadObservation(format!("outcome {outcome:?} not covered by the observation structure"))
        })?;
        Ok(self.cell_of[bidder][*id as usize])
    }

    pub fn cell_by_id(&self, bidder: usize, outcome_id: u32) -> u32 {
        self.cell_of[bidder][outcome_id as usize]
    }

    /// Whether two outcome values are Ω_i-equivalent for `bidder`.
    pub fn equivalent(&self, bidder: usize, a: &Outcome, b: &Outcome) -> Result<bool, ModelError> {
        Ok(self.cell(bidder, a)? == self.cell(bidder, b)?)
    }
}

/// Bidder utilities over (outcome, own type). The quasilinear form is
/// value × allocation − transfer.
#[derive(Debug, Clone, PartialEq)]
pub enum UtilityModel {
    Quasilinear,
    Table(HashMap<(Outcome, usize, usize), Rational>),
}

impl UtilityModel {
    pub fn eval(
        &self,
        space: &TypeSpace,
        outcome: &Outcome,
        bidder: usize,
        type_idx: usize,
    ) -> Result<Rational, ModelError> {
        match self {
            UtilityModel::Quasilinear => {
                let (alloc, transfer) = outcome
                    .payload_for(bidder)
                    .ok_or_else(|| ModelError::NoPayload(format!("{outcome:?}")))?;
                let value = space.numeric_value(bidder, type_idx)?;
                Ok(if alloc { value - transfer } else { -transfer })
            }
            UtilityModel::Table(map) => map
                .get(&(outcome.clone(), bidder, type_idx))
                .copied()
                .ok_or_else(|| ModelError::UtilityUndefined {
                    outcome: format!("{outcome:?}"),
                    bidder: space.bidder_name(bidder).to_string(),
                    label: space.types(bidder)[type_idx].text.clone(),
                }),
        }
    }
}

impl fmt::Display for RefinementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RefinementOrder::Equal => "equal",
            RefinementOrder::StrictlyFiner => "strictly_finer",
            RefinementOrder::StrictlyCoarser => "strictly_coarser",
            RefinementOrder::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_2x2() -> Arc<TypeSpace> {
        TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap()
    }

    #[test]
    fn profile_ids_are_lexicographic() {
        let s = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
        let mut seen = Vec::new();
        for p in s.profiles() {
            seen.push(s.profile(p).0);
        }
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen.last().unwrap(), &vec![2, 2]);
    }

    #[test]
    fn quotient_constant_key_single_cell() {
        let s = space_2x2();
        let p = quotient(&s, |_| Some(0u8)).unwrap();
        assert_eq!(p.cell_count(), 1);
    }

    #[test]
    fn quotient_identity_key_all_singletons() {
        let s = space_2x2();
        let p = quotient(&s, Some).unwrap();
        assert_eq!(p.cell_count(), s.profile_count() as usize);
        assert_eq!(p, Partition::discrete(s));
    }

    #[test]
    fn quotient_undefined_key_is_domain_error() {
        let s = space_2x2();
        let err = quotient(&s, |p| if p.0 == 2 { None } else { Some(0u8) }).unwrap_err();
        assert!(matches!(err, ModelError::KeyUndefined(_)));
    }

    #[test]
    fn refinement_extremes() {
        let s = space_2x2();
        let fine = Partition::discrete(s.clone());
        let coarse = Partition::indiscrete(s);
        assert_eq!(
            refinement_compare(&fine, &coarse).unwrap(),
            RefinementOrder::StrictlyFiner
        );
        assert_eq!(
            refinement_compare(&coarse, &fine).unwrap(),
            RefinementOrder::StrictlyCoarser
        );
        assert_eq!(
            refinement_compare(&fine, &fine).unwrap(),
            RefinementOrder::Equal
        );
    }

    #[test]
    fn refinement_crossing_partitions_incomparable() {
        // p groups by bidder A's type, q groups by bidder B's type.
        let s = space_2x2();
        let p = quotient(&s, |pid| Some(s.component(pid, 0))).unwrap();
        let q = quotient(&s, |pid| Some(s.component(pid, 1))).unwrap();
        assert_eq!(
            refinement_compare(&p, &q).unwrap(),
            RefinementOrder::Incomparable
        );
    }

    #[test]
    fn refinement_mismatched_grounds_is_error() {
        let s1 = space_2x2();
        let s2 = TypeSpace::shared_numeric(&["A", "B"], &[1, 3]).unwrap();
        let p = Partition::discrete(s1);
        let q = Partition::discrete(s2);
        assert_eq!(
            refinement_compare(&p, &q).unwrap_err(),
            ModelError::GroundSetMismatch
        );
    }

    #[test]
    fn rule_partition_cells_map_to_single_outcome() {
        let s = TypeSpace::shared_numeric(&["A", "B"], &[1, 2, 3]).unwrap();
        let rule = ChoiceRule::from_fn(s, |space, p| {
            let a = space.component(p, 0);
            let b = space.component(p, 1);
            Outcome::Labeled(if a >= b { "hi".into() } else { "lo".into() })
        });
        let part = rule_partition(&rule);
        assert_eq!(part.cell_count(), 2);
        for cell in part.cells() {
            let first = rule.outcome_id(cell[0]);
            assert!(cell.iter().all(|p| rule.outcome_id(*p) == first));
        }
    }

    #[test]
    fn quotient_cell_count_equals_key_range() {
        let s = TypeSpace::shared_numeric(&["A", "B", "C"], &[1, 2]).unwrap();
        let p = quotient(&s, |pid| Some(pid.0 % 3)).unwrap();
        assert_eq!(p.cell_count(), 3);
    }

    #[test]
    fn rational_parsing_round_trip() {
        assert_eq!(parse_rational("3"), Some(Rational::from_integer(3)));
        assert_eq!(parse_rational("3/2"), Some(Rational::new(3, 2)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
        assert_eq!(format_rational(&Rational::from_integer(5)), "5");
    }

    #[test]
    fn auction_omega_groups_by_own_payload() {
        let outcomes = vec![
            Outcome::Auction { winner: 0, price: Rational::from_integer(1) },
            Outcome::Auction { winner: 0, price: Rational::from_integer(2) },
            Outcome::Auction { winner: 1, price: Rational::from_integer(2) },
        ];
        let omega = ObservationStructure::auction_default(2, outcomes.clone()).unwrap();
        // Bidder B cannot distinguish the two outcomes where A wins.
        assert!(omega.equivalent(1, &outcomes[0], &outcomes[1]).unwrap());
        assert!(!omega.equivalent(0, &outcomes[0], &outcomes[1]).unwrap());
        assert!(!omega.equivalent(1, &outcomes[1], &outcomes[2]).unwrap());
    }
}
