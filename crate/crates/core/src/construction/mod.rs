//! Exact-rational build of the annulus construction: box families, row colourings
//! from balanced codes, the circles' image measures, numeric checks of the two
//! distance claims and the certified emergence bound.

mod boxes;
mod claims;
mod coloring;
mod onion;
mod params;
mod pushforward;

use num_rational::BigRational;
use serde::Serialize;

pub use boxes::{build_families, BoxFamilies, Rect};
pub use claims::{
    apart_bound, construction_epsilon, emergence_lower_bound, together_bound, verify_claims, ClaimReport,
    EmergenceBound, PairDistance, RefutationCheck, DEFAULT_ROW_BUDGET, REFUTATION_ROWS,
};
pub use coloring::{color_families, ColoredBoxFamilies};
pub use onion::{onion_chain, LayerSpec, OnionLayer, OnionReport};
pub use params::{derive_params, paper_row_bound, ConstructionParams};
pub use pushforward::{circle_w1, max_height_shift, pushforward_circle, Atom, PushforwardCircle};

use crate::codes::{separated_code, CodeMode};
use crate::error::Result;

const CODE_REJECTIONS: usize = 10_000;

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub(crate) fn ratio_string<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Everything one construction produces.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionRun {
    pub params: ConstructionParams,
    /// Codeword of each U-row in hex.
    pub coloring: Vec<String>,
    pub min_color_difference: usize,
    /// Smallest number of colours present in one row and absent from another,
    /// over the closest pair of rows.
    pub min_one_sided_difference: usize,
    pub claims: ClaimReport,
    pub certified: Option<EmergenceBound>,
    pub failure: Option<String>,
    #[serde(skip)]
    pub colored: ColoredBoxFamilies,
}

/// Builds, colours and checks one construction. Certification failures are recorded
/// in the run; structural errors are returned.
pub fn run_construction(n: u64, rows_cap: Option<u64>, seed: u64, budget: usize) -> Result<ConstructionRun> {
    let params = derive_params(n, rows_cap)?;
    let families = build_families(&params)?;
    let colors = params.colors as usize;
    let code = separated_code(
        colors,
        colors / 4,
        Some(params.rows as usize),
        CodeMode::Randomized {
            max_rejections: CODE_REJECTIONS,
        },
        seed,
    )?;
    let colored = color_families(families, &code)?;
    let claims = verify_claims(&colored, budget, seed)?;
    let (certified, failure) = match emergence_lower_bound(&colored, &claims, seed) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (a, b) = colored.closest_rows;
    Ok(ConstructionRun {
        params,
        coloring: colored.words.iter().map(|w| w.to_hex()).collect(),
        min_color_difference: colored.min_color_difference,
        min_one_sided_difference: colored.one_sided_difference(a, b),
        claims,
        certified,
        failure,
        colored,
    })
}
