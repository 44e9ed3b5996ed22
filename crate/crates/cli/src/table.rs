//! Density table for the lower-bound construction.

use std::fmt::Write as _;

use oddfan::generators::{rt_lower_construction, PartGraph};
use oddfan::invariants::independence_number;
use oddfan::witness::find_clique;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub r: usize,
    pub edges: usize,
    /// `(1 - 1/r) n^2 / 2`
    pub turan_density_edges: f64,
    pub alpha: usize,
    /// Whether the construction avoids `K_{2r+1}`.
    pub clique_free: bool,
}

/// One row per order, computed in parallel and returned sorted by `n`.
pub fn density_table(r: usize, part: &PartGraph, orders: &[usize]) -> oddfan::Result<Vec<TableRow>> {
    let mut rows = orders
        .par_iter()
        .map(|&n| {
            let g = rt_lower_construction(n, r, part)?;
            Ok(TableRow {
                n,
                r,
                edges: g.size(),
                turan_density_edges: (1.0 - 1.0 / r as f64) * (n * n) as f64 / 2.0,
                alpha: independence_number(&g),
                clique_free: find_clique(&g, 2 * r + 1).is_none(),
            })
        })
        .collect::<oddfan::Result<Vec<_>>>()?;
    rows.sort_by_key(|row| (row.n, row.r));
    Ok(rows)
}

pub fn render_tsv(rows: &[TableRow]) -> String {
    let mut out = String::from("n\tr\tedges\tturan_density_edges\talpha\tclique_free\n");
    for row in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            row.n, row.r, row.edges, row.turan_density_edges, row.alpha, row.clique_free
        )
        .expect("writing to a String");
    }
    out
}
