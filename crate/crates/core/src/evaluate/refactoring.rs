//! Effect of common refactoring methods on CK metrics, and the lookup from
//! a plan's metric changes to the methods that are consistent with it.

use serde::{Deserialize, Serialize};

use crate::metrics::Metric;
use crate::planners::{Direction, Plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    None,
    Increase,
    Decrease,
    /// Observed in some applications but not all.
    MaybeIncrease,
    MaybeDecrease,
}

impl Effect {
    fn from_code(c: u8) -> Effect {
        match c {
            b'+' => Effect::Increase,
            b'-' => Effect::Decrease,
            b'i' => Effect::MaybeIncrease,
            b'd' => Effect::MaybeDecrease,
            _ => Effect::None,
        }
    }

    fn supports(self, d: Direction) -> bool {
        matches!(
            (self, d),
            (Effect::Increase | Effect::MaybeIncrease, Direction::Increase)
                | (Effect::Decrease | Effect::MaybeDecrease, Direction::Decrease)
        )
    }

    fn contradicts(self, d: Direction) -> bool {
        matches!(
            (self, d),
            (Effect::Increase, Direction::Decrease) | (Effect::Decrease, Direction::Increase)
        )
    }
}

/// Column order of the effect strings below.
const COLUMNS: [Metric; 20] = [
    Metric::Amc,
    Metric::AvgCc,
    Metric::Ca,
    Metric::Cam,
    Metric::Cbm,
    Metric::Cbo,
    Metric::Ce,
    Metric::Dam,
    Metric::Dit,
    Metric::Ic,
    Metric::Lcom,
    Metric::Lcom3,
    Metric::Loc,
    Metric::MaxCc,
    Metric::Mfa,
    Metric::Moa,
    Metric::Noc,
    Metric::Npm,
    Metric::Rfc,
    Metric::Wmc,
];

// `+`/`-` definite, `i`/`d` occasional increase/decrease, `.` no effect.
const METHODS: [(u8, &str, &str); 16] = [
    (1, "inline methods", "d+..........di...d--"),
    (2, "extract method", "i-..........id...i++"),
    (3, "extract class", "--.i.++...dd-d.d..--"),
    (4, "inline class", "++.d.--...ii+i.i..++"),
    (5, "move method", "-i..........-d.d.d.-"),
    (6, "hide delegate", "..-..-.............."),
    (7, "consolidate conditional", "--.-......++-d....++"),
    (8, "replace conditional with polymorphism", "--....+.++...d..+..."),
    (9, "flatten conditional", "--..........-d......"),
    (10, "hide method", "...+...+............"),
    (11, "simplify parameters", "--...........-......"),
    (12, "factory method", "++..........+i....++"),
    (13, "push down method", "-d..-.............--"),
    (14, "encapsulate field", "...-......+++......+"),
    (15, "extract subclass", "--+i..+...dd-d-.+.--"),
    (16, "inline subclass", "++-d..-...ii+i+.-.++"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefactoringMethod {
    pub id: u8,
    pub name: &'static str,
}

pub fn refactoring_methods() -> Vec<RefactoringMethod> {
    METHODS
        .iter()
        .map(|&(id, name, _)| RefactoringMethod { id, name })
        .collect()
}

/// Effect of method `id` (1-based) on `metric`.
pub fn effect(id: u8, metric: Metric) -> Option<Effect> {
    let (_, _, codes) = METHODS.iter().find(|m| m.0 == id)?;
    let col = COLUMNS.iter().position(|&m| m == metric)?;
    Some(Effect::from_code(codes.as_bytes()[col]))
}

/// Ids of methods that move at least one planned metric in the planned
/// direction and move none definitely the other way.
pub fn map_changes(changes: &[(Metric, Direction)]) -> Vec<u8> {
    if changes.is_empty() {
        return Vec::new();
    }
    METHODS
        .iter()
        .filter(|(id, _, _)| {
            let effects: Vec<(Effect, Direction)> = changes
                .iter()
                .map(|&(m, d)| (effect(*id, m).unwrap_or(Effect::None), d))
                .collect();
            effects.iter().any(|(e, d)| e.supports(*d)) && !effects.iter().any(|(e, d)| e.contradicts(*d))
        })
        .map(|m| m.0)
        .collect()
}

/// [`map_changes`] over the moves of a plan that have a direction.
pub fn map_to_refactorings(plan: &Plan) -> Vec<u8> {
    let changes: Vec<(Metric, Direction)> = plan
        .actions
        .iter()
        .enumerate()
        .filter_map(|(f, a)| Some((Metric::from_index(f)?, a.direction()?)))
        .collect();
    map_changes(&changes)
}
