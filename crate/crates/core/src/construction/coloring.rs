use rayon::prelude::*;

use super::boxes::BoxFamilies;
use crate::codes::{BalancedCode, Word};
use crate::error::{Error, Result};

/// Box families with every U-row coloured by a codeword and every U-box matched to
/// an L-box of its colour.
#[derive(Debug, Clone)]
pub struct ColoredBoxFamilies {
    pub families: BoxFamilies,
    pub words: Vec<Word>,
    /// Colours of each U-row in ascending order; column `k` gets the `k`-th.
    pub row_colors: Vec<Vec<u32>>,
    /// Rank of the matched L-box among the boxes of the same colour.
    pub ranks: Vec<Vec<u32>>,
    /// Smallest number of colours in which two rows differ (symmetric difference).
    pub min_color_difference: usize,
    /// Rows attaining it.
    pub closest_rows: (usize, usize),
}

impl ColoredBoxFamilies {
    pub fn rows(&self) -> usize {
        self.row_colors.len()
    }

    /// Colours present in row `i` and absent from row `j`.
    pub fn one_sided_difference(&self, i: usize, j: usize) -> usize {
        self.words[i]
            .ones()
            .filter(|&c| !self.words[j].get(c))
            .count()
    }

    /// For each colour, the L-box of a later row never sits below that of an earlier one.
    pub fn matching_is_ordered(&self) -> bool {
        let n = self.families.params.n as u32;
        let mut last = vec![None::<u32>; self.families.params.colors as usize];
        for (colors, ranks) in self.row_colors.iter().zip(&self.ranks) {
            for (&c, &r) in colors.iter().zip(ranks) {
                let l_row = r / n;
                if last[c as usize].is_some_and(|prev| prev > l_row) {
                    return false;
                }
                last[c as usize] = Some(l_row);
            }
        }
        true
    }
}

pub fn color_families(families: BoxFamilies, code: &BalancedCode) -> Result<ColoredBoxFamilies> {
    let p = &families.params;
    let colors = p.colors as usize;
    let rows = p.rows as usize;
    if code.n_bits != colors {
        return Err(Error::SizeMismatch(format!("code words have {} bits, need {colors}", code.n_bits)));
    }
    if code.len() < rows {
        return Err(Error::CodeTooSmall {
            got: code.len(),
            need: rows,
        });
    }
    let words: Vec<Word> = code.words[..rows].to_vec();
    let row_colors: Vec<Vec<u32>> = words.iter().map(|w| w.ones().map(|c| c as u32).collect()).collect();
    if let Some(i) = row_colors.iter().position(|r| r.len() != colors / 2) {
        return Err(Error::ClaimViolated {
            claim: "distinct row colours",
            i,
            j: i,
            detail: format!("{} colours instead of {}", row_colors[i].len(), colors / 2),
        });
    }

    let (min_color_difference, closest_rows) = (0..rows)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..rows).map(move |j| (i, j)))
        .map(|(i, j)| (words[i].hamming(&words[j]).expect("equal lengths"), (i, j)))
        .min()
        .unwrap_or((colors, (0, 0)));
    if min_color_difference < colors / 4 {
        return Err(Error::ClaimViolated {
            claim: "row colour difference",
            i: closest_rows.0,
            j: closest_rows.1,
            detail: format!("rows differ in {min_color_difference} colours, need {}", colors / 4),
        });
    }

    // bottom row first: each box takes the lowest unused L-box of its colour
    let mut used = vec![0u32; colors];
    let ranks = row_colors
        .iter()
        .map(|row| {
            row.iter()
                .map(|&c| {
                    let r = used[c as usize];
                    used[c as usize] += 1;
                    r
                })
                .collect()
        })
        .collect();
    let colored = ColoredBoxFamilies {
        families,
        words,
        row_colors,
        ranks,
        min_color_difference,
        closest_rows,
    };
    if !colored.matching_is_ordered() {
        return Err(Error::GeometryInfeasible("matching puts a later box below an earlier one".into()));
    }
    Ok(colored)
}
