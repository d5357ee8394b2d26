//! JSON report shapes. Integers are serialized as decimal strings so
//! consumers never face 64-bit ambiguity; field order is fixed by the
//! struct definitions, making the output byte-stable.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::arrangement::Counters;
use crate::arithmetic::CountRecord;
use crate::deformations::EquisingularReport;
use crate::invariants::InvariantSet;

fn s(v: impl Display) -> String {
    v.to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountersReport {
    pub p3: String,
    pub p4_0: String,
    pub p4_1: String,
    pub p5_0: String,
    pub p5_1: String,
    pub p5_2: String,
    pub l3: String,
}

impl From<&Counters> for CountersReport {
    fn from(c: &Counters) -> Self {
        CountersReport {
            p3: s(c.p3),
            p4_0: s(c.p40),
            p4_1: s(c.p41),
            p5_0: s(c.p50),
            p5_1: s(c.p51),
            p5_2: s(c.p52),
            l3: s(c.l3),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub e: String,
    pub rho_y: String,
    pub h11: String,
    pub h12: String,
    pub skew_rank: String,
}

impl From<&InvariantSet> for InvariantsReport {
    fn from(inv: &InvariantSet) -> Self {
        InvariantsReport {
            e: s(inv.e),
            rho_y: s(inv.rho_y),
            h11: s(inv.h11),
            h12: s(inv.h12),
            skew_rank: s(inv.skew_rank),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub name: String,
    pub admissible: bool,
    pub counters: CountersReport,
    pub invariants: InvariantsReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HodgeReport {
    pub name: String,
    pub h12: String,
    pub dim_jacobian: String,
    pub dim_equisingular: String,
    pub strata: String,
}

impl HodgeReport {
    pub fn new(name: &str, r: &EquisingularReport) -> Self {
        HodgeReport {
            name: name.to_string(),
            h12: s(r.h12),
            dim_jacobian: s(r.dim_jacobian),
            dim_equisingular: s(r.dim_equisingular),
            strata: s(r.strata),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountRecordReport {
    pub p: String,
    pub raw: String,
    pub line_corr: String,
    pub fourfold_corr: String,
    pub total: String,
    pub ap: String,
}

impl From<&CountRecord> for CountRecordReport {
    fn from(r: &CountRecord) -> Self {
        CountRecordReport {
            p: s(r.p),
            raw: s(r.raw),
            line_corr: s(r.line_corr),
            fourfold_corr: s(r.fourfold_corr),
            total: s(r.total),
            ap: s(r.ap),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub name: String,
    pub h11: String,
    pub records: Vec<CountRecordReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularReport {
    pub name: String,
    pub ap: BTreeMap<String, String>,
    /// label agreeing at every reference prime, if any
    pub matched: Option<String>,
    /// closest table row and how it fares prime by prime
    pub nearest: String,
    pub agreement: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogRow {
    pub key: String,
    pub family: bool,
    pub counters: CountersReport,
    pub h12: String,
    pub h11: String,
    pub e: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newform: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Row {
    pub key: String,
    pub matches: bool,
    pub expected: CatalogRow,
    pub computed: CatalogRow,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Report {
    pub all_match: bool,
    pub rows: Vec<Table1Row>,
}
