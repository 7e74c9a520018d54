use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::params::ConstructionParams;
use super::{ratio, ratio_string};
use crate::error::{Error, Result};

/// Closed box `[theta, theta + width] x [rho, rho + height]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rect {
    #[serde(serialize_with = "ratio_string")]
    pub theta: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub rho: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub width: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub height: BigRational,
}

impl Rect {
    pub fn theta_end(&self) -> BigRational {
        &self.theta + &self.width
    }

    pub fn rho_end(&self) -> BigRational {
        &self.rho + &self.height
    }

    pub fn centre_theta(&self) -> BigRational {
        &self.theta + &self.width / ratio(2, 1)
    }

    pub fn contains(&self, other: &Rect) -> bool {
        self.theta <= other.theta
            && other.theta_end() <= self.theta_end()
            && self.rho <= other.rho
            && other.rho_end() <= self.rho_end()
    }
}

/// The families G, L and U. L-boxes share one layout inside every G-square and are
/// produced on demand.
#[derive(Debug, Clone)]
pub struct BoxFamilies {
    pub params: ConstructionParams,
    /// Offsets of the L-columns and L-rows inside a G-square.
    l_columns: Vec<BigRational>,
    l_rows: Vec<BigRational>,
    u_columns: Vec<BigRational>,
    u_rows: Vec<BigRational>,
}

impl BoxFamilies {
    pub fn grid_columns(&self) -> u64 {
        8 * self.params.n
    }

    pub fn grid_rows(&self) -> u64 {
        4 * self.params.n
    }

    /// G-square of `color`; colours run along rows from the bottom left.
    pub fn square(&self, color: u32) -> Rect {
        let cols = self.grid_columns();
        let (row, col) = (color as u64 / cols, color as u64 % cols);
        let n = self.params.n as i64;
        Rect {
            theta: ratio(col as i64, 8 * n),
            rho: self.params.gap() + ratio(row as i64, 8 * n),
            width: self.params.side(),
            height: self.params.side(),
        }
    }

    /// The `rank`-th L-box of `color`, counted bottom to top, then left to right.
    pub fn l_box(&self, color: u32, rank: u32) -> Rect {
        let n = self.params.n as usize;
        let g = self.square(color);
        let (row, col) = (rank as usize / n, rank as usize % n);
        Rect {
            theta: g.theta + &self.l_columns[col],
            rho: g.rho + &self.l_rows[row],
            width: self.params.box_width(),
            height: self.params.box_height(),
        }
    }

    pub fn u_box(&self, row: usize, column: usize) -> Rect {
        Rect {
            theta: self.u_columns[column].clone(),
            rho: self.u_rows[row].clone(),
            width: self.params.box_width(),
            height: self.params.box_height(),
        }
    }

    /// Heights `J_i` met by the `i`-th U-row.
    pub fn row_interval(&self, row: usize) -> (BigRational, BigRational) {
        let lo = self.u_rows[row].clone();
        let hi = &lo + self.params.box_height();
        (lo, hi)
    }

    /// Point `J_i` at fraction `t` of its length.
    pub fn row_height(&self, row: usize, t: &BigRational) -> BigRational {
        &self.u_rows[row] + self.params.box_height() * t
    }

    pub fn row_of(&self, rho: &BigRational) -> Option<usize> {
        let i = self.u_rows.partition_point(|r| r <= rho).checked_sub(1)?;
        (*rho <= self.row_interval(i).1).then_some(i)
    }

    /// Where the mass off the U-columns is parked.
    pub fn junk_point() -> (BigRational, BigRational) {
        (BigRational::zero(), ratio(99, 100))
    }

    pub fn l_box_count(&self) -> u64 {
        self.params.colors * self.params.n * self.params.rows_per_square
    }
}

fn evenly(count: u64, len: &BigRational, span: &BigRational, start: &BigRational) -> Vec<BigRational> {
    let k = count as i64;
    let gap = (span - len * ratio(k, 1)) / ratio(k + 1, 1);
    (0..k)
        .map(|i| start + &gap + (len + &gap) * ratio(i, 1))
        .collect()
}

/// Checks sorted intervals `[s, s + len]` lie in `[lo, hi]` with gaps of at least
/// `min_gap` (strictly positive), and across the wrap when `period` is given.
fn check_intervals(
    what: &str,
    starts: &[BigRational],
    len: &BigRational,
    (lo, hi): (&BigRational, &BigRational),
    min_gap: &BigRational,
    period: Option<&BigRational>,
) -> Result<()> {
    let fail = |detail: String| Err(Error::GeometryInfeasible(format!("{what}: {detail}")));
    let (Some(first), Some(last)) = (starts.first(), starts.last()) else {
        return fail("empty".into());
    };
    if first < lo || &(last + len) > hi {
        return fail(format!("leaves [{lo}, {hi}]"));
    }
    let mut gaps: Vec<BigRational> = starts.windows(2).map(|w| &w[1] - &w[0] - len).collect();
    if let Some(p) = period {
        gaps.push(first + p - last - len);
    }
    match gaps.iter().find(|g| *g < min_gap || g.is_zero() || *g < &BigRational::zero()) {
        Some(g) => fail(format!("gap {g} below {min_gap}")),
        None => Ok(()),
    }
}

pub fn build_families(params: &ConstructionParams) -> Result<BoxFamilies> {
    let p = params;
    let n = p.n as i64;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let half = ratio(1, 2);
    let side = p.side();
    let width = p.box_width();
    let height = p.box_height();

    let fam = BoxFamilies {
        params: p.clone(),
        l_columns: evenly(p.n, &width, &side, &zero),
        l_rows: evenly(p.rows_per_square, &height, &side, &zero),
        u_columns: (0..p.colors as i64 / 2).map(|c| ratio(2 * c, p.colors as i64)).collect(),
        u_rows: evenly(p.rows, &height, &ratio(9, 20), &half),
    };

    let g_columns: Vec<BigRational> = (0..8 * n).map(|i| ratio(i, 8 * n)).collect();
    let g_rows: Vec<BigRational> = (0..4 * n).map(|j| p.gap() + ratio(j, 8 * n)).collect();
    check_intervals("G columns", &g_columns, &side, (&zero, &one), &p.gap(), Some(&one))?;
    check_intervals("G rows", &g_rows, &side, (&zero, &half), &p.gap(), None)?;
    check_intervals("L columns", &fam.l_columns, &width, (&zero, &side), &zero, None)?;
    check_intervals("L rows", &fam.l_rows, &height, (&zero, &side), &zero, None)?;
    check_intervals("U columns", &fam.u_columns, &width, (&zero, &one), &zero, Some(&one))?;
    check_intervals("U rows", &fam.u_rows, &height, (&half, &one), &zero, None)?;
    if fam.u_rows[0] <= half {
        return Err(Error::GeometryInfeasible("U touches the lower half".into()));
    }
    let (_, junk) = BoxFamilies::junk_point();
    if fam.row_of(&junk).is_some() || junk <= half {
        return Err(Error::GeometryInfeasible("junk point meets U or G".into()));
    }
    // sample containment through the exact box constructors
    let last = (p.colors - 1) as u32;
    for (color, rank) in [(0, 0), (last, (p.rows - 1) as u32)] {
        if !fam.square(color).contains(&fam.l_box(color, rank)) {
            return Err(Error::GeometryInfeasible(format!("L-box {rank} of colour {color} leaves its square")));
        }
    }
    Ok(fam)
}
