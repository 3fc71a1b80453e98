//! The twenty CK object-oriented metrics used as features.
//!
//! The enum order is the canonical feature order used everywhere in this
//! crate (and the column order of the release CSV files).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const N_FEATURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Wmc,
    Dit,
    Noc,
    Cbo,
    Rfc,
    Lcom,
    Ca,
    Ce,
    Npm,
    Lcom3,
    Loc,
    Dam,
    Moa,
    Mfa,
    Cam,
    Ic,
    Cbm,
    Amc,
    MaxCc,
    AvgCc,
}

impl Metric {
    pub const ALL: [Metric; N_FEATURES] = [
        Metric::Wmc,
        Metric::Dit,
        Metric::Noc,
        Metric::Cbo,
        Metric::Rfc,
        Metric::Lcom,
        Metric::Ca,
        Metric::Ce,
        Metric::Npm,
        Metric::Lcom3,
        Metric::Loc,
        Metric::Dam,
        Metric::Moa,
        Metric::Mfa,
        Metric::Cam,
        Metric::Ic,
        Metric::Cbm,
        Metric::Amc,
        Metric::MaxCc,
        Metric::AvgCc,
    ];

    /// Feature index of this metric.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Metric> {
        Metric::ALL.get(index).copied()
    }

    /// Lower-case column name as it appears in the CSV header.
    pub fn name(self) -> &'static str {
        match self {
            Metric::Wmc => "wmc",
            Metric::Dit => "dit",
            Metric::Noc => "noc",
            Metric::Cbo => "cbo",
            Metric::Rfc => "rfc",
            Metric::Lcom => "lcom",
            Metric::Ca => "ca",
            Metric::Ce => "ce",
            Metric::Npm => "npm",
            Metric::Lcom3 => "lcom3",
            Metric::Loc => "loc",
            Metric::Dam => "dam",
            Metric::Moa => "moa",
            Metric::Mfa => "mfa",
            Metric::Cam => "cam",
            Metric::Ic => "ic",
            Metric::Cbm => "cbm",
            Metric::Amc => "amc",
            Metric::MaxCc => "max_cc",
            Metric::AvgCc => "avg_cc",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Metric::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}
