//! Conjugacy classes of torsion elements and explicit conjugator witnesses.
//!
//! A nontrivial torsion element is conjugate to exactly one of `-x`, `1/x`,
//! `-1/x` or `-1/(x+1)`. The class is read off from cheap conjugation
//! invariants (determinant, `|trace|`, reduction mod 2). The witness is found
//! by greedy norm descent under conjugation by `x+1`, `x-1` and `1/x`,
//! finished from a lookup table of the small torsion elements. When no step
//! lowers the norm, a bounded breadth-first search looks for the nearest
//! state that does and descent resumes from there. Every witness is
//! re-checked exactly before it is handed out.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{named, ArithmeticError, Determinant, OrderResult, ProjectiveMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} has infinite order")]
    NotTorsion(ProjectiveMatrix),
    #[error("the identity has no conjugator to a nontrivial representative")]
    Identity,
    #[error("no conjugator found for {0} within the search bound")]
    SearchExhausted(ProjectiveMatrix),
    #[error("conjugator {conjugator} does not carry {subject} to {expected}")]
    InvalidWitness {
        subject: ProjectiveMatrix,
        conjugator: ProjectiveMatrix,
        expected: ProjectiveMatrix,
    },
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// Conjugacy class of a torsion element, named after its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementClass {
    /// `x`
    Identity,
    /// `-x`
    RefNeg,
    /// `1/x`
    RefInv,
    /// `-1/x`
    RotTwo,
    /// `-1/(x+1)`
    RotThree,
}

impl ElementClass {
    pub const ALL: [ElementClass; 5] = [
        ElementClass::Identity,
        ElementClass::RefNeg,
        ElementClass::RefInv,
        ElementClass::RotTwo,
        ElementClass::RotThree,
    ];

    pub const NONTRIVIAL: [ElementClass; 4] = [
        ElementClass::RefNeg,
        ElementClass::RefInv,
        ElementClass::RotTwo,
        ElementClass::RotThree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementClass::Identity => "Identity",
            ElementClass::RefNeg => "RefNeg",
            ElementClass::RefInv => "RefInv",
            ElementClass::RotTwo => "RotTwo",
            ElementClass::RotThree => "RotThree",
        }
    }

    pub fn canonical_rep(self) -> ProjectiveMatrix {
        canonical_rep(self)
    }

    pub fn order(self) -> u32 {
        match self {
            ElementClass::Identity => 1,
            ElementClass::RotThree => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown element class {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for ElementClass {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

pub fn canonical_rep(class: ElementClass) -> ProjectiveMatrix {
    match class {
        ElementClass::Identity => named::IDENTITY,
        ElementClass::RefNeg => named::NEG,
        ElementClass::RefInv => named::INV,
        ElementClass::RotTwo => named::NEG_INV,
        ElementClass::RotThree => named::ROT3,
    }
}

pub fn classify_element(m: &ProjectiveMatrix) -> Result<ElementClass, ClassifyError> {
    if m.order() == OrderResult::Infinite {
        return Err(ClassifyError::NotTorsion(*m));
    }
    if m.is_identity() {
        return Ok(ElementClass::Identity);
    }
    Ok(match (m.determinant(), m.abs_trace()) {
        (Determinant::Plus, 1) => ElementClass::RotThree,
        (Determinant::Plus, _) => ElementClass::RotTwo,
        (Determinant::Minus, _) if m.mod2_image().is_identity() => ElementClass::RefNeg,
        (Determinant::Minus, _) => ElementClass::RefInv,
    })
}

/// A conjugator `P` with `P · subject · P⁻¹ = canonical_rep(class)`.
///
/// Only constructible through [`ElementWitness::new`], which performs the
/// exact check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementWitness {
    subject: ProjectiveMatrix,
    class: ElementClass,
    conjugator: ProjectiveMatrix,
}

impl ElementWitness {
    pub fn new(
        subject: ProjectiveMatrix,
        class: ElementClass,
        conjugator: ProjectiveMatrix,
    ) -> Result<Self, ClassifyError> {
        let expected = canonical_rep(class);
        if conjugator.conjugate(&subject)? != expected {
            return Err(ClassifyError::InvalidWitness {
                subject,
                conjugator,
                expected,
            });
        }
        Ok(ElementWitness {
            subject,
            class,
            conjugator,
        })
    }

    pub fn subject(&self) -> ProjectiveMatrix {
        self.subject
    }

    pub fn class(&self) -> ElementClass {
        self.class
    }

    pub fn conjugator(&self) -> ProjectiveMatrix {
        self.conjugator
    }

    pub fn canonical(&self) -> ProjectiveMatrix {
        canonical_rep(self.class)
    }
}

/// Limits for the breadth-first fallback of the witness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub depth_bound: usize,
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth_bound: 64,
            max_states: 1 << 20,
        }
    }
}

/// Conjugation steps, in tie-break order.
const STEPS: [ProjectiveMatrix; 3] = [named::SHIFT, named::SHIFT_INV, named::INV];

/// Entry cap for the states explored while building the lookup table.
const TABLE_ENTRY_CAP: u64 = 3;

/// Small torsion element -> conjugator onto its canonical representative.
fn lookup_table() -> &'static HashMap<ProjectiveMatrix, ProjectiveMatrix> {
    static TABLE: OnceLock<HashMap<ProjectiveMatrix, ProjectiveMatrix>> = OnceLock::new();
    TABLE.get_or_init(build_lookup_table)
}

fn build_lookup_table() -> HashMap<ProjectiveMatrix, ProjectiveMatrix> {
    let mut table = HashMap::new();
    for class in ElementClass::NONTRIVIAL {
        let rep = canonical_rep(class);
        // States are (Q·rep·Q⁻¹, Q); the element reached has witness Q⁻¹.
        let mut seen = HashSet::from([rep]);
        let mut queue = VecDeque::from([(rep, named::IDENTITY)]);
        while let Some((state, q)) = queue.pop_front() {
            if state.max_abs_entry() <= 1 {
                let witness = q.inverse().expect("small entries");
                debug_assert_eq!(witness.conjugate(&state), Ok(rep));
                table.entry(state).or_insert(witness);
            }
            for step in STEPS {
                let (Ok(next), Ok(next_q)) = (step.conjugate(&state), step.mul(&q)) else {
                    continue;
                };
                if next.max_abs_entry() <= TABLE_ENTRY_CAP && seen.insert(next) {
                    queue.push_back((next, next_q));
                }
            }
        }
    }
    table
}

/// Same as [`conjugator_to_canonical_with`] under the default search limits.
pub fn conjugator_to_canonical(m: &ProjectiveMatrix) -> Result<ElementWitness, ClassifyError> {
    conjugator_to_canonical_with(m, &SearchConfig::default())
}

pub fn conjugator_to_canonical_with(
    m: &ProjectiveMatrix,
    config: &SearchConfig,
) -> Result<ElementWitness, ClassifyError> {
    find_witness(m, config).map(|(w, _)| w)
}

/// How the witness search reached the lookup table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPath {
    Descent,
    Fallback,
}

/// Witness search that also reports whether the breadth-first fallback ran.
pub fn find_witness(
    m: &ProjectiveMatrix,
    config: &SearchConfig,
) -> Result<(ElementWitness, SearchPath), ClassifyError> {
    let class = classify_element(m)?;
    if class == ElementClass::Identity {
        return Err(ClassifyError::Identity);
    }
    let table = lookup_table();
    let mut path = SearchPath::Descent;
    let mut current = *m;
    let mut acc = named::IDENTITY;
    // Each pass either reaches the table or strictly lowers the entry sum.
    let finish = loop {
        if current.max_abs_entry() <= 1 {
            if let Some(p) = table.get(&current) {
                break *p;
            }
        }
        let (next, q) = match descend(&current)? {
            Some(step) if current.max_abs_entry() > 1 => step,
            _ => {
                path = SearchPath::Fallback;
                bfs_escape(&current, table, config)?
            }
        };
        current = next;
        acc = q.mul(&acc)?;
    };
    let conjugator = finish.mul(&acc)?;
    Ok((ElementWitness::new(*m, class, conjugator)?, path))
}

/// Best single conjugation step if it strictly lowers the absolute entry sum.
fn descend(
    m: &ProjectiveMatrix,
) -> Result<Option<(ProjectiveMatrix, ProjectiveMatrix)>, ArithmeticError> {
    let mut best: Option<(ProjectiveMatrix, ProjectiveMatrix)> = None;
    for step in STEPS {
        let next = step.conjugate(m)?;
        if best.is_none_or(|(b, _)| next.abs_sum() < b.abs_sum()) {
            best = Some((next, step));
        }
    }
    Ok(best.filter(|(b, _)| b.abs_sum() < m.abs_sum()))
}

/// Breadth-first search from a stalled state to the first state that is a
/// table key or has a smaller absolute entry sum. Returns that state and `Q`
/// with `Q · m · Q⁻¹` equal to it.
fn bfs_escape(
    m: &ProjectiveMatrix,
    table: &HashMap<ProjectiveMatrix, ProjectiveMatrix>,
    config: &SearchConfig,
) -> Result<(ProjectiveMatrix, ProjectiveMatrix), ClassifyError> {
    let norm = m.abs_sum();
    let mut seen = HashSet::from([*m]);
    let mut queue = VecDeque::from([(*m, named::IDENTITY, 0usize)]);
    while let Some((state, q, depth)) = queue.pop_front() {
        if table.contains_key(&state) || state.abs_sum() < norm {
            return Ok((state, q));
        }
        if depth >= config.depth_bound {
            continue;
        }
        for step in STEPS {
            // Steps that overflow are dead ends, not failures.
            let (Ok(next), Ok(next_q)) = (step.conjugate(&state), step.mul(&q)) else {
                continue;
            };
            if seen.len() >= config.max_states {
                return Err(ClassifyError::SearchExhausted(*m));
            }
            if seen.insert(next) {
                queue.push_back((next, next_q, depth + 1));
            }
        }
    }
    Err(ClassifyError::SearchExhausted(*m))
}

/// Torsion elements with all entries in `{-1, 0, 1}` covered by the lookup table.
pub fn small_torsion_table_keys() -> Vec<ProjectiveMatrix> {
    let mut keys: Vec<_> = lookup_table().keys().copied().collect();
    keys.sort();
    keys
}
