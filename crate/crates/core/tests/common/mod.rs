//! Reference implementations used to check the library. These are kept
//! deliberately naive and share no code with the paths they check.
#![allow(dead_code)]

use std::collections::HashSet;

use proxy_data::{ExampleStat, StatsTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Counts `1 -> 0` transitions by scanning index pairs.
pub fn forgetting_oracle(seq: &[bool]) -> u32 {
    let mut count = 0;
    for i in 1..seq.len() {
        if seq[i - 1] && !seq[i] {
            count += 1;
        }
    }
    count
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).powi(2);
    }
    s.sqrt()
}

/// Greedy k-center by full rescans: every step recomputes each candidate's
/// distance to the whole pool from scratch.
pub fn kcenter_oracle(points: &[(u64, Vec<f64>)], pool: &[u64], k: usize) -> Vec<u64> {
    let mut pool: Vec<u64> = pool.to_vec();
    let mut out = Vec::new();
    for _ in 0..k {
        let mut best: Option<(u64, f64)> = None;
        let mut candidates: Vec<&(u64, Vec<f64>)> =
            points.iter().filter(|p| !pool.contains(&p.0)).collect();
        candidates.sort_by_key(|p| p.0);
        for (id, f) in candidates {
            let mut nearest = f64::INFINITY;
            for q in &pool {
                let g = &points.iter().find(|p| p.0 == *q).unwrap().1;
                let d = distance(f, g);
                if d < nearest {
                    nearest = d;
                }
            }
            match best {
                Some((_, d)) if nearest <= d => {}
                _ => best = Some((*id, nearest)),
            }
        }
        let (id, _) = best.unwrap();
        pool.push(id);
        out.push(id);
    }
    out
}

/// Probability of each ordered outcome of `k` successive draws without
/// replacement, each proportional to the remaining mass.
pub fn sequential_draw_oracle(probs: &[f64], k: usize) -> Vec<(Vec<usize>, f64)> {
    fn recurse(
        probs: &[f64],
        k: usize,
        prefix: &mut Vec<usize>,
        p: f64,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        if prefix.len() == k {
            out.push((prefix.clone(), p));
            return;
        }
        let used: f64 = prefix.iter().map(|&i| probs[i]).sum();
        for i in 0..probs.len() {
            if prefix.contains(&i) || probs[i] == 0.0 {
                continue;
            }
            prefix.push(i);
            recurse(probs, k, prefix, p * probs[i] / (1.0 - used), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(probs, k, &mut Vec::new(), 1.0, &mut out);
    out
}

/// Tail selection by repeated extremum picking: the high side is taken
/// first, then the low side from what is left.
pub fn tail_oracle(rows: &[(u64, f64)], k: usize, n_bottom: usize) -> Vec<u64> {
    let mut left: Vec<(u64, f64)> = rows.to_vec();
    let mut top = Vec::new();
    for _ in 0..(k - n_bottom) {
        let mut best = 0;
        for i in 1..left.len() {
            let (id, e) = left[i];
            let (bid, be) = left[best];
            if e > be || (e == be && id < bid) {
                best = i;
            }
        }
        top.push(left.remove(best).0);
    }
    let mut bottom = Vec::new();
    for _ in 0..n_bottom {
        let mut best = 0;
        for i in 1..left.len() {
            let (id, e) = left[i];
            let (bid, be) = left[best];
            if e < be || (e == be && id < bid) {
                best = i;
            }
        }
        bottom.push(left.remove(best).0);
    }
    bottom.extend(top);
    bottom
}

/// Table with `n` examples whose log10-entropy is normal around `center`.
pub fn unimodal_table(n: u64, center: f64, spread: f64, seed: u64) -> StatsTable {
    let mut r = rng(seed);
    let normal = Normal::new(center, spread).unwrap();
    StatsTable::from_rows(
        (0..n)
            .map(|i| {
                let e = 10f64.powf(normal.sample(&mut r));
                ExampleStat::new(i, r.gen_range(0..10), e).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

/// Random table with occasional exact zeros and repeated entropies.
pub fn random_table(r: &mut impl Rng, n: u64) -> StatsTable {
    let pool: Vec<f64> = (0..5).map(|_| r.gen_range(0.0..2.3)).collect();
    StatsTable::from_rows(
        (0..n)
            .map(|i| {
                let e = match r.gen_range(0..10) {
                    0 => 0.0,
                    1..=3 => pool[r.gen_range(0..pool.len())],
                    _ => 10f64.powf(r.gen_range(-8.0..0.36)),
                };
                ExampleStat::new(i * 3 + 1, r.gen_range(0..4), e).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

pub fn is_cover(train: &[u64], val: &[u64], all: &[u64]) -> bool {
    let t: HashSet<u64> = train.iter().copied().collect();
    let v: HashSet<u64> = val.iter().copied().collect();
    let a: HashSet<u64> = all.iter().copied().collect();
    t.len() == train.len()
        && v.len() == val.len()
        && t.is_disjoint(&v)
        && t.union(&v).copied().collect::<HashSet<_>>() == a
}
