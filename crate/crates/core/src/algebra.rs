//! The closed relation-type inventory and its composition table.
//!
//! `compose(r1, r2)` answers whether chaining two typed relations licenses an
//! inferred relation. The table is total over the 13 x 13 ordered pairs: the
//! rows stated by the three source tables carry their `+`/`-`/`O` judgment,
//! every other pair is [`TransitivityStatus::Unspecified`].
//!
//! Orientation: `compose(r1, r2)` is relational composition read right to
//! left. For an association `X r1 Y` and a hierarchy edge `Z r2 X` (Z below
//! X), a `Given` entry licenses `Z r1 Y`. A walk `e1, e2, .., ek` is therefore
//! folded over its types in reverse order, see [`path_status`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::UnknownToken;

/// One of the 13 relation types of the inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationType {
    Synonym,
    HierGeneric,
    HierPartitive,
    EarlierLater,
    LaterEarlier,
    UnspecificAssociation,
    RawMaterialProduct,
    Causality,
    PersonActorAction,
    InstitutionActorAction,
    PersonActorProduct,
    InstitutionActorProduct,
    ActionProduct,
}

/// Broad family of a relation type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationFamily {
    Equivalence,
    Hierarchical,
    Chronological,
    Associative,
}

impl RelationType {
    pub const ALL: [RelationType; 13] = [
        RelationType::Synonym,
        RelationType::HierGeneric,
        RelationType::HierPartitive,
        RelationType::EarlierLater,
        RelationType::LaterEarlier,
        RelationType::UnspecificAssociation,
        RelationType::RawMaterialProduct,
        RelationType::Causality,
        RelationType::PersonActorAction,
        RelationType::InstitutionActorAction,
        RelationType::PersonActorProduct,
        RelationType::InstitutionActorProduct,
        RelationType::ActionProduct,
    ];

    /// The eight typed associative relations, in inventory order.
    pub const ASSOCIATIVE: [RelationType; 8] = [
        RelationType::UnspecificAssociation,
        RelationType::RawMaterialProduct,
        RelationType::Causality,
        RelationType::PersonActorAction,
        RelationType::InstitutionActorAction,
        RelationType::PersonActorProduct,
        RelationType::InstitutionActorProduct,
        RelationType::ActionProduct,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RelationType::Synonym => "synonym",
            RelationType::HierGeneric => "generic",
            RelationType::HierPartitive => "partitive",
            RelationType::EarlierLater => "earlier_later",
            RelationType::LaterEarlier => "later_earlier",
            RelationType::UnspecificAssociation => "assoc",
            RelationType::RawMaterialProduct => "raw_material_product",
            RelationType::Causality => "causality",
            RelationType::PersonActorAction => "person_action",
            RelationType::InstitutionActorAction => "institution_action",
            RelationType::PersonActorProduct => "person_product",
            RelationType::InstitutionActorProduct => "institution_product",
            RelationType::ActionProduct => "action_product",
        }
    }

    pub fn family(self) -> RelationFamily {
        match self {
            RelationType::Synonym => RelationFamily::Equivalence,
            RelationType::HierGeneric | RelationType::HierPartitive => RelationFamily::Hierarchical,
            RelationType::EarlierLater | RelationType::LaterEarlier => RelationFamily::Chronological,
            _ => RelationFamily::Associative,
        }
    }

    pub fn is_hierarchical(self) -> bool {
        self.family() == RelationFamily::Hierarchical
    }

    pub fn is_chronological(self) -> bool {
        self.family() == RelationFamily::Chronological
    }

    pub fn is_associative(self) -> bool {
        self.family() == RelationFamily::Associative
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for RelationType {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationType::ALL.iter().copied().find(|r| r.token() == s).ok_or_else(|| UnknownToken::new("relation type", s))
    }
}

/// Transitivity judgment for an ordered pair of relation types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitivityStatus {
    /// `+`
    Given,
    /// `-`
    NotExpected,
    /// `O`
    NotAllowed,
    /// `?`, pair not covered by any table.
    Unspecified,
}

impl TransitivityStatus {
    pub fn token(self) -> &'static str {
        match self {
            TransitivityStatus::Given => "+",
            TransitivityStatus::NotExpected => "-",
            TransitivityStatus::NotAllowed => "O",
            TransitivityStatus::Unspecified => "?",
        }
    }
}

impl fmt::Display for TransitivityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for TransitivityStatus {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" => Ok(TransitivityStatus::Given),
            "-" => Ok(TransitivityStatus::NotExpected),
            "O" => Ok(TransitivityStatus::NotAllowed),
            "?" => Ok(TransitivityStatus::Unspecified),
            _ => Err(UnknownToken::new("transitivity status", s)),
        }
    }
}

/// Which table an entry was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableSource {
    /// Same type of relation on both sides.
    Table1,
    /// Equivalence, hierarchy and chronology mixed.
    Table2,
    /// Typed association followed by hierarchy or chronology.
    Table3,
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositionEntry {
    pub r1: RelationType,
    pub r2: RelationType,
    pub status: TransitivityStatus,
    /// Present iff `status` is `Given`.
    pub result: Option<RelationType>,
    pub source: TableSource,
}

use RelationType::*;
use TransitivityStatus::{Given, NotAllowed, NotExpected};

const TABLE_1: [(RelationType, RelationType, TransitivityStatus); 17] = [
    (Synonym, Synonym, NotAllowed),
    (HierGeneric, HierGeneric, Given),
    (HierPartitive, HierPartitive, Given),
    (HierGeneric, HierPartitive, NotExpected),
    (HierPartitive, HierGeneric, NotExpected),
    (EarlierLater, EarlierLater, Given),
    (LaterEarlier, LaterEarlier, Given),
    (EarlierLater, LaterEarlier, NotExpected),
    (LaterEarlier, EarlierLater, NotExpected),
    (UnspecificAssociation, UnspecificAssociation, NotExpected),
    (RawMaterialProduct, RawMaterialProduct, Given),
    (Causality, Causality, Given),
    (PersonActorAction, PersonActorAction, NotExpected),
    (InstitutionActorAction, InstitutionActorAction, NotExpected),
    (PersonActorProduct, PersonActorProduct, NotExpected),
    (InstitutionActorProduct, InstitutionActorProduct, NotExpected),
    (ActionProduct, ActionProduct, NotExpected),
];

// The printed table repeats two rows and garbles the synonym/chronology
// block; each distinct ordered pair appears once here.
const TABLE_2: [(RelationType, RelationType, TransitivityStatus); 16] = [
    (Synonym, HierGeneric, Given),
    (Synonym, HierPartitive, Given),
    (HierGeneric, Synonym, NotAllowed),
    (HierPartitive, Synonym, NotAllowed),
    (Synonym, EarlierLater, Given),
    (Synonym, LaterEarlier, Given),
    (EarlierLater, Synonym, NotAllowed),
    (LaterEarlier, Synonym, NotAllowed),
    (HierGeneric, EarlierLater, Given),
    (HierGeneric, LaterEarlier, Given),
    (EarlierLater, HierGeneric, Given),
    (LaterEarlier, HierGeneric, Given),
    (HierPartitive, EarlierLater, Given),
    (HierPartitive, LaterEarlier, Given),
    (EarlierLater, HierPartitive, Given),
    (LaterEarlier, HierPartitive, Given),
];

/// Second operands of the third table; every typed association composes
/// positively with each of them (the chronological row also covers its
/// reverse direction).
const TABLE_3_SECOND: [RelationType; 4] = [HierGeneric, HierPartitive, EarlierLater, LaterEarlier];

/// Rows as stated by the source tables, after deduplication. The third table
/// is expanded to one row per ordered pair.
pub fn stated_rows() -> Vec<(RelationType, RelationType, TransitivityStatus, TableSource)> {
    let mut rows = Vec::with_capacity(65);
    rows.extend(TABLE_1.iter().map(|&(a, b, s)| (a, b, s, TableSource::Table1)));
    rows.extend(TABLE_2.iter().map(|&(a, b, s)| (a, b, s, TableSource::Table2)));
    for assoc in RelationType::ASSOCIATIVE {
        for second in TABLE_3_SECOND {
            rows.push((assoc, second, Given, TableSource::Table3));
        }
    }
    rows
}

/// Result type of a `Given` composition: the non-structural relation carried
/// along the structure survives.
fn result_type(r1: RelationType, r2: RelationType) -> RelationType {
    use RelationFamily as F;
    if r1 == r2 {
        return r1;
    }
    match (r1.family(), r2.family()) {
        (F::Equivalence, _) => r2,
        (F::Hierarchical, F::Chronological) => r2,
        (F::Chronological, F::Hierarchical) => r1,
        (F::Associative, _) => r1,
        _ => unreachable!("no positive entry for {r1} o {r2}"),
    }
}

struct CompositionTable {
    cells: [[CompositionEntry; 13]; 13],
}

impl CompositionTable {
    fn build() -> Self {
        let mut cells: [[Option<CompositionEntry>; 13]; 13] = [[None; 13]; 13];
        for (r1, r2, status, source) in stated_rows() {
            let cell = &mut cells[r1.index()][r2.index()];
            assert!(cell.is_none(), "composition table states {r1} o {r2} twice");
            let result = (status == Given).then(|| result_type(r1, r2));
            *cell = Some(CompositionEntry { r1, r2, status, result, source });
        }
        let cells = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                cells[i][j].unwrap_or(CompositionEntry {
                    r1: RelationType::ALL[i],
                    r2: RelationType::ALL[j],
                    status: TransitivityStatus::Unspecified,
                    result: None,
                    source: TableSource::Default,
                })
            })
        });
        CompositionTable { cells }
    }
}

fn table() -> &'static CompositionTable {
    static TABLE: OnceLock<CompositionTable> = OnceLock::new();
    TABLE.get_or_init(CompositionTable::build)
}

/// Looks up the composition of `r1` after `r2`.
pub fn compose(r1: RelationType, r2: RelationType) -> CompositionEntry {
    table().cells[r1.index()][r2.index()]
}

/// Named inverse of a relation type. Hierarchical types are their own inverse
/// (direction is a traversal concern); associations and synonymy have none.
pub fn invert(r: RelationType) -> Option<RelationType> {
    match r.family() {
        RelationFamily::Chronological => Some(match r {
            EarlierLater => LaterEarlier,
            _ => EarlierLater,
        }),
        RelationFamily::Hierarchical => Some(r),
        RelationFamily::Equivalence | RelationFamily::Associative => None,
    }
}

/// Folds a composition sequence left to right.
///
/// A single type is trivially `(Given, r)`. The fold stops at the first step
/// that is not `Given` and reports that step's status. Returns `None` for an
/// empty sequence.
///
/// For a witness walk `e1 .. ek` the sequence to fold is the walk's types in
/// reverse order (`[type(ek), .., type(e1)]`).
pub fn path_status(path: &[RelationType]) -> Option<(TransitivityStatus, Option<RelationType>)> {
    let (&first, rest) = path.split_first()?;
    let mut current = first;
    for &next in rest {
        let entry = compose(current, next);
        match entry.result {
            Some(r) => current = r,
            None => return Some((entry.status, None)),
        }
    }
    Some((Given, Some(current)))
}
