#![allow(dead_code)]

use std::path::PathBuf;

use dispersive::visibility::visibility_mask;
use dispersive::{geodesic::pairwise_distances, Cell, Dispersion, Polyomino};

pub fn fixture(rel: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn grid(rel: &str) -> Polyomino {
    Polyomino::from_grid(&fixture(rel)).unwrap()
}

/// Every `fixtures/small/*.grid`, sorted by name.
pub fn small_corpus() -> Vec<(String, Polyomino)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/small");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".grid"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), grid(&format!("small/{n}")))).collect()
}

/// Brute force over all vertex subsets of size at most `max_size`: the best
/// dispersion of a covering subset, and for each `l` in `levels` whether some
/// covering subset reaches it.
pub fn naive(poly: &Polyomino, max_size: usize, levels: &[u32]) -> (Option<Dispersion>, Vec<bool>) {
    naive_with(poly, &[], max_size, levels)
}

/// `naive` with some cells already covered from outside.
pub fn naive_with(poly: &Polyomino, pre_covered: &[Cell], max_size: usize, levels: &[u32]) -> (Option<Dispersion>, Vec<bool>) {
    let verts = poly.vertices();
    let n = verts.len();
    let masks: Vec<Vec<u64>> = verts
        .iter()
        .map(|&v| {
            let m = visibility_mask(v, poly);
            let mut words = vec![0u64; m.len().div_ceil(64)];
            for (i, &b) in m.iter().enumerate() {
                if b {
                    words[i / 64] |= 1 << (i % 64);
                }
            }
            words
        })
        .collect();
    let dist = pairwise_distances(verts, poly);
    let cells = poly.len();
    let mut full = vec![0u64; cells.div_ceil(64)];
    for (i, c) in poly.cells().iter().enumerate() {
        if !pre_covered.contains(c) {
            full[i / 64] |= 1 << (i % 64);
        }
    }
    let mut best: Option<Dispersion> = None;
    let mut reach = vec![false; levels.len()];
    let mut chosen = Vec::new();
    let mut cover = vec![0u64; full.len()];
    fn rec(
        start: usize,
        n: usize,
        max_size: usize,
        chosen: &mut Vec<usize>,
        cover: &mut Vec<u64>,
        min_d: u32,
        ctx: &(&Vec<Vec<u64>>, &Vec<u32>, &Vec<u64>, &[u32]),
        best: &mut Option<Dispersion>,
        reach: &mut Vec<bool>,
    ) {
        let (masks, dist, full, levels) = *ctx;
        let done = cover.iter().zip(full).all(|(c, f)| c & f == *f);
        if (!chosen.is_empty() || full.iter().all(|&f| f == 0)) && done {
            let d = if chosen.len() <= 1 { Dispersion::Infinite } else { Dispersion::Finite(min_d) };
            *best = (*best).max(Some(d));
            for (k, &l) in levels.iter().enumerate() {
                if d >= Dispersion::Finite(l) {
                    reach[k] = true;
                }
            }
        }
        if chosen.len() == max_size {
            return;
        }
        for v in start..n {
            let md = chosen.iter().map(|&u| dist[u * n + v]).fold(min_d, u32::min);
            let saved = cover.clone();
            for (w, m) in cover.iter_mut().zip(&masks[v]) {
                *w |= m;
            }
            chosen.push(v);
            rec(v + 1, n, max_size, chosen, cover, md, ctx, best, reach);
            chosen.pop();
            *cover = saved;
        }
    }
    let ctx = (&masks, &dist, &full, levels);
    rec(0, n, max_size, &mut chosen, &mut cover, u32::MAX, &ctx, &mut best, &mut reach);
    (best, reach)
}
