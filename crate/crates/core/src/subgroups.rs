//! Finite subgroups of PGL(2, Z): closure, isomorphism type and conjugacy class.
//!
//! Every finite subgroup has 1, 2, 3, 4 or 6 elements and is conjugate to
//! exactly one of seven canonical groups:
//!
//! | class     | elements                                           | type |
//! |-----------|----------------------------------------------------|------|
//! | `Trivial` | `x`                                                | C1   |
//! | `PairNeg` | `x, -x`                                            | C2   |
//! | `PairInv` | `x, 1/x`                                           | C2   |
//! | `PairRot` | `x, -1/x`                                          | C2   |
//! | `G3`      | `x, -1/(x+1), (-x-1)/x`                            | C3   |
//! | `G4`      | `x, 1/x, -x, -1/x`                                 | D2   |
//! | `G6`      | `x, -1/(x+1), (-x-1)/x, 1/x, -x/(x+1), -x-1`       | D3   |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{self, ClassifyError, ElementClass, UnknownLabel};
use crate::matrix::{named, ArithmeticError, Determinant, OrderResult, ProjectiveMatrix};

/// Largest finite subgroup; a partial closure beyond this is infinite.
pub const MAX_FINITE_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("generated group is infinite ({0})")]
    InfiniteGroup(String),
    #[error("malformed group: {0}")]
    MalformedGroup(String),
    #[error("closure needs at least one generator")]
    NoGenerators,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// A finite subgroup, elements kept in ascending `(a, b, c, d)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubgroup {
    elements: BTreeSet<ProjectiveMatrix>,
}

impl FiniteSubgroup {
    /// Checks identity, closure under products and inverses, and size.
    pub fn from_elements<I>(elements: I) -> Result<Self, SubgroupError>
    where
        I: IntoIterator<Item = ProjectiveMatrix>,
    {
        let elements: BTreeSet<_> = elements.into_iter().collect();
        if !elements.contains(&named::IDENTITY) {
            return Err(SubgroupError::MalformedGroup("missing identity".into()));
        }
        if !matches!(elements.len(), 1 | 2 | 3 | 4 | 6) {
            return Err(SubgroupError::MalformedGroup(format!(
                "size {} is not a finite subgroup order",
                elements.len()
            )));
        }
        for g in &elements {
            if !elements.contains(&g.inverse()?) {
                return Err(SubgroupError::MalformedGroup(format!(
                    "inverse of {g} missing"
                )));
            }
            for h in &elements {
                if !elements.contains(&g.mul(h)?) {
                    return Err(SubgroupError::MalformedGroup(format!(
                        "product {g}·{h} missing"
                    )));
                }
            }
        }
        Ok(FiniteSubgroup { elements })
    }

    pub fn trivial() -> Self {
        FiniteSubgroup {
            elements: BTreeSet::from([named::IDENTITY]),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &ProjectiveMatrix) -> bool {
        self.elements.contains(m)
    }

    pub fn elements(&self) -> impl Iterator<Item = &ProjectiveMatrix> {
        self.elements.iter()
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// `{P g P⁻¹ : g ∈ self}`.
    pub fn conjugated_by(&self, p: &ProjectiveMatrix) -> Result<FiniteSubgroup, ArithmeticError> {
        let p_inv = p.inverse()?;
        let elements = self
            .elements
            .iter()
            .map(|g| p.mul(g)?.mul(&p_inv))
            .collect::<Result<_, _>>()?;
        Ok(FiniteSubgroup { elements })
    }

    /// Sorted `(determinant, order)` of every element; a conjugacy invariant.
    pub fn signature(&self) -> Vec<(Determinant, OrderResult)> {
        let mut sig: Vec<_> = self
            .elements
            .iter()
            .map(|g| (g.determinant(), g.order()))
            .collect();
        sig.sort();
        sig
    }
}

impl fmt::Display for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, g) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// Subgroup generated by `generators`.
///
/// Saturates under products breadth-first and gives up with
/// [`SubgroupError::InfiniteGroup`] as soon as an element of infinite order
/// appears or the partial closure exceeds [`MAX_FINITE_ORDER`] elements.
/// Inverses come for free: in a finite group they are positive powers.
pub fn closure(generators: &[ProjectiveMatrix]) -> Result<FiniteSubgroup, SubgroupError> {
    if generators.is_empty() {
        return Err(SubgroupError::NoGenerators);
    }
    for g in generators {
        if !g.order().is_finite() {
            return Err(SubgroupError::InfiniteGroup(format!(
                "generator {g} has infinite order"
            )));
        }
    }
    let mut elements = BTreeSet::from([named::IDENTITY]);
    let mut frontier: Vec<ProjectiveMatrix> = Vec::new();
    for g in generators {
        if elements.insert(*g) {
            frontier.push(*g);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in generators {
                let p = f.mul(g)?;
                if elements.contains(&p) {
                    continue;
                }
                if !p.order().is_finite() {
                    return Err(SubgroupError::InfiniteGroup(format!(
                        "product {p} has infinite order"
                    )));
                }
                elements.insert(p);
                if elements.len() > MAX_FINITE_ORDER {
                    return Err(SubgroupError::InfiniteGroup(format!(
                        "closure exceeds {MAX_FINITE_ORDER} elements"
                    )));
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    FiniteSubgroup::from_elements(elements)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IsomorphismType {
    C1,
    C2,
    C3,
    D2,
    D3,
}

impl fmt::Display for IsomorphismType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Isomorphism type from the size, after checking the element orders
/// match (Klein four-group for 4, S3 for 6).
pub fn isomorphism_type(g: &FiniteSubgroup) -> Result<IsomorphismType, SubgroupError> {
    let count = |n: u32| {
        g.elements()
            .filter(|e| e.order() == OrderResult::Finite(n))
            .count()
    };
    let ty = match g.len() {
        1 => IsomorphismType::C1,
        2 => IsomorphismType::C2,
        3 => IsomorphismType::C3,
        4 => IsomorphismType::D2,
        6 => IsomorphismType::D3,
        n => return Err(SubgroupError::MalformedGroup(format!("size {n}"))),
    };
    let expected = match ty {
        IsomorphismType::C1 => (0, 0),
        IsomorphismType::C2 => (1, 0),
        IsomorphismType::C3 => (0, 2),
        IsomorphismType::D2 => (3, 0),
        IsomorphismType::D3 => (3, 2),
    };
    let found = (count(2), count(3));
    if found != expected {
        return Err(SubgroupError::MalformedGroup(format!(
            "{ty} needs (order-2, order-3) counts {expected:?}, found {found:?}"
        )));
    }
    Ok(ty)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SubgroupClass {
    Trivial,
    PairNeg,
    PairInv,
    PairRot,
    G3,
    G4,
    G6,
}

impl SubgroupClass {
    pub const ALL: [SubgroupClass; 7] = [
        SubgroupClass::Trivial,
        SubgroupClass::PairNeg,
        SubgroupClass::PairInv,
        SubgroupClass::PairRot,
        SubgroupClass::G3,
        SubgroupClass::G4,
        SubgroupClass::G6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubgroupClass::Trivial => "Trivial",
            SubgroupClass::PairNeg => "PairNeg",
            SubgroupClass::PairInv => "PairInv",
            SubgroupClass::PairRot => "PairRot",
            SubgroupClass::G3 => "G3",
            SubgroupClass::G4 => "G4",
            SubgroupClass::G6 => "G6",
        }
    }

    pub fn canonical_group(self) -> FiniteSubgroup {
        canonical_group(self)
    }
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubgroupClass {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SubgroupClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

pub fn canonical_group(class: SubgroupClass) -> FiniteSubgroup {
    use named::*;
    let elements: &[ProjectiveMatrix] = match class {
        SubgroupClass::Trivial => &[IDENTITY],
        SubgroupClass::PairNeg => &[IDENTITY, NEG],
        SubgroupClass::PairInv => &[IDENTITY, INV],
        SubgroupClass::PairRot => &[IDENTITY, NEG_INV],
        SubgroupClass::G3 => &[IDENTITY, ROT3, ROT3_SQ],
        SubgroupClass::G4 => &[IDENTITY, INV, NEG, NEG_INV],
        SubgroupClass::G6 => &[
            IDENTITY,
            ROT3,
            ROT3_SQ,
            INV,
            NEG_X_OVER_X_PLUS_1,
            NEG_X_MINUS_1,
        ],
    };
    FiniteSubgroup {
        elements: elements.iter().copied().collect(),
    }
}

/// `conjugator` maps every element of `subject` onto `canonical_group(class)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWitness {
    subject: FiniteSubgroup,
    class: SubgroupClass,
    conjugator: ProjectiveMatrix,
}

impl GroupWitness {
    pub fn new(
        subject: FiniteSubgroup,
        class: SubgroupClass,
        conjugator: ProjectiveMatrix,
    ) -> Result<Self, SubgroupError> {
        let image = subject.conjugated_by(&conjugator)?;
        if image != canonical_group(class) {
            return Err(SubgroupError::MalformedGroup(format!(
                "conjugating {subject} by {conjugator} gives {image}, not {class}"
            )));
        }
        Ok(GroupWitness {
            subject,
            class,
            conjugator,
        })
    }

    pub fn subject(&self) -> &FiniteSubgroup {
        &self.subject
    }

    pub fn class(&self) -> SubgroupClass {
        self.class
    }

    pub fn conjugator(&self) -> ProjectiveMatrix {
        self.conjugator
    }
}

/// Finds the class of `g` and a conjugator onto the canonical group.
///
/// Sizes 2 and 3 reduce to a single element. Size 4 conjugates the unique
/// det +1 involution to `-1/x`; size 6 conjugates an order-3 element to
/// `-1/(x+1)`. In both cases only one subgroup of that size contains the
/// canonical element, which the final set comparison confirms.
pub fn classify_subgroup(g: &FiniteSubgroup) -> Result<GroupWitness, SubgroupError> {
    let ty = isomorphism_type(g)?;
    let nontrivial = || g.elements().filter(|e| !e.is_identity());
    let (class, anchor) = match ty {
        IsomorphismType::C1 => {
            return GroupWitness::new(g.clone(), SubgroupClass::Trivial, named::IDENTITY)
        }
        IsomorphismType::C2 => {
            let e = *nontrivial().next().expect("size 2");
            let class = match classify::classify_element(&e)? {
                ElementClass::RefNeg => SubgroupClass::PairNeg,
                ElementClass::RefInv => SubgroupClass::PairInv,
                ElementClass::RotTwo => SubgroupClass::PairRot,
                other => {
                    return Err(SubgroupError::MalformedGroup(format!(
                        "size-2 group generated by {e} of class {other}"
                    )))
                }
            };
            (class, e)
        }
        IsomorphismType::C3 => (SubgroupClass::G3, *nontrivial().next().expect("size 3")),
        IsomorphismType::D2 => {
            let rotations: Vec<_> = nontrivial()
                .filter(|e| e.determinant() == Determinant::Plus)
                .collect();
            if rotations.len() != 1 {
                return Err(SubgroupError::MalformedGroup(format!(
                    "size-4 group has {} det +1 involutions, expected exactly 1",
                    rotations.len()
                )));
            }
            (SubgroupClass::G4, *rotations[0])
        }
        IsomorphismType::D3 => {
            // Elements iterate in ascending order, so this is the smaller of m, m².
            let m = *nontrivial()
                .find(|e| e.order() == OrderResult::Finite(3))
                .expect("D3 has order-3 elements");
            (SubgroupClass::G6, m)
        }
    };
    let witness = classify::conjugator_to_canonical(&anchor)?;
    GroupWitness::new(g.clone(), class, witness.conjugator())
}

/// Outcome of the commuting-involution scan for size-4 groups containing `-1/x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Size4Scan {
    /// Involutions `p ≠ -1/x` with entries in `{-1,0,1}` commuting with `-1/x`.
    pub solutions: Vec<ProjectiveMatrix>,
    /// Candidates where the matrix-product test and the entrywise relation disagree.
    pub route_disagreements: Vec<ProjectiveMatrix>,
}

/// Enumerates `p = (ax+b)/(cx-a)` with `a² + bc = ±1` and entries in
/// `{-1, 0, 1}` such that `p(-1/x) = -1/p(x)`.
///
/// The relation is tested twice: by multiplying matrices, and entrywise as
/// `[[b,-a],[-a,-c]] = ±[[c,-a],[-a,-b]]`.
pub fn uniqueness_scan_size4() -> Size4Scan {
    let r = named::NEG_INV;
    let mut solutions = BTreeSet::new();
    let mut route_disagreements = BTreeSet::new();
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                if (a * a + b * c).abs() != 1 {
                    continue;
                }
                let p = ProjectiveMatrix::new(a, b, c, -a).expect("a² + bc = ±1");
                if p == r {
                    continue;
                }
                let by_product = p.mul(&r).expect("small") == r.mul(&p).expect("small");
                let lhs = [b, -a, -a, -c];
                let rhs = [c, -a, -a, -b];
                let by_entries = lhs == rhs || lhs == rhs.map(|e| -e);
                if by_product != by_entries {
                    route_disagreements.insert(p);
                }
                if by_product {
                    solutions.insert(p);
                }
            }
        }
    }
    Size4Scan {
        solutions: solutions.into_iter().collect(),
        route_disagreements: route_disagreements.into_iter().collect(),
    }
}

/// Outcome of the `a² + ac + c² = ±1`, `b = a + c` scan for size-6 groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Size6Scan {
    /// Distinct involutions from the `+1` branch.
    pub plus_one: Vec<ProjectiveMatrix>,
    /// Solutions of `a² + ac + c² = -1`; the form is positive definite.
    pub minus_one: Vec<ProjectiveMatrix>,
    /// `(a, b, c)` satisfying the `+` sign of `m²∘p = p∘m` entrywise.
    pub plus_sign_solutions: Vec<(i64, i64, i64)>,
    /// Every involution with entries in `{-1,0,1}` satisfying `m²∘p = p∘m` by
    /// direct multiplication; must agree with `plus_one`.
    pub direct_solutions: Vec<ProjectiveMatrix>,
    /// The third involution as printed alongside `-x-1` and `1/x` in the
    /// source derivation.
    pub listed_third: ProjectiveMatrix,
    pub listed_third_order: OrderResult,
    /// Set when `listed_third` is not among the enumerated solutions.
    pub discrepancy: Option<String>,
}

pub fn uniqueness_scan_size6() -> Size6Scan {
    let branch = |target: i64| -> Vec<ProjectiveMatrix> {
        let mut out = BTreeSet::new();
        for a in -1i64..=1 {
            for c in -1i64..=1 {
                if a * a + a * c + c * c != target {
                    continue;
                }
                let b = a + c;
                if let Ok(p) = ProjectiveMatrix::new(a, b, c, -a) {
                    out.insert(p);
                }
            }
        }
        out.into_iter().collect()
    };

    let mut plus_sign_solutions = Vec::new();
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                // [[-a-c, a-b],[a, b]] = [[b, b-a],[-a, -a-c]]
                if [-a - c, a - b, a, b] == [b, b - a, -a, -a - c] {
                    plus_sign_solutions.push((a, b, c));
                }
            }
        }
    }

    let m = named::ROT3;
    let m_sq = named::ROT3_SQ;
    let mut direct = BTreeSet::new();
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                for d in -1i64..=1 {
                    let Ok(p) = ProjectiveMatrix::new(a, b, c, d) else {
                        continue;
                    };
                    if p.order() != OrderResult::Finite(2) {
                        continue;
                    }
                    if m_sq.mul(&p).expect("small") == p.mul(&m).expect("small") {
                        direct.insert(p);
                    }
                }
            }
        }
    }

    let plus_one = branch(1);
    let listed_third = named::ROT3;
    let listed_third_order = listed_third.order();
    let discrepancy = (!plus_one.contains(&listed_third)).then(|| {
        let extra: Vec<String> = plus_one
            .iter()
            .filter(|p| **p != named::NEG_X_MINUS_1 && **p != named::INV)
            .map(|p| p.to_string())
            .collect();
        format!(
            "listed third solution {listed_third} has order {listed_third_order} and is not an \
             involution; enumeration gives {} instead",
            extra.join(", ")
        )
    });

    Size6Scan {
        plus_one,
        minus_one: branch(-1),
        plus_sign_solutions,
        direct_solutions: direct.into_iter().collect(),
        listed_third,
        listed_third_order,
        discrepancy,
    }
}
