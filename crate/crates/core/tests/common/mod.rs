//! Shared independent oracles and random-set generators for the
//! integration suites. Everything here is deliberately written against the
//! definitions, not against the library's own algorithms.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sumfree_core::field::FieldCtx;
use sumfree_core::subsets::FieldSubset;

/// Sum-free test on a full-field bitmask, bit i = element i.
pub fn is_sum_free_mask(mask: u32, p: u32) -> bool {
    let pm = if p == 32 { u32::MAX } else { (1 << p) - 1 };
    let mut bits = mask;
    while bits != 0 {
        let a = bits.trailing_zeros();
        let rot = ((mask << a) | (mask >> (p - a))) & pm;
        if rot & mask != 0 {
            return false;
        }
        bits &= bits - 1;
    }
    true
}

/// Largest sum-free subset size by blind enumeration of all 2^p subsets.
pub fn naive_sigma(p: u64) -> u64 {
    let p = p as u32;
    let mut best = 0u64;
    for mask in 0u32..1 << p {
        if u64::from(mask.count_ones()) > best && is_sum_free_mask(mask, p) {
            best = mask.count_ones() as u64;
        }
    }
    best
}

/// Largest sum-free inverse-closed subset size by blind enumeration of all
/// 2^(p-1) subsets of the multiplicative group.
pub fn naive_mu(p: u64) -> u64 {
    let field = FieldCtx::prime(p).unwrap();
    let inv: Vec<u64> = (1..p).map(|x| field.inverse(x)).collect();
    let mut best = 0u64;
    for mask in 0u32..1 << (p - 1) {
        if u64::from(mask.count_ones()) <= best {
            continue;
        }
        let inv_closed = (1..p)
            .filter(|&x| mask >> (x - 1) & 1 == 1)
            .all(|x| mask >> (inv[(x - 1) as usize] - 1) & 1 == 1);
        if inv_closed && is_sum_free_mask(mask << 1, p as u32) {
            best = mask.count_ones() as u64;
        }
    }
    best
}

/// Random maximal-ish sum-free subset: greedy over a shuffled element order,
/// stopping at a random target size. Incremental feasibility via the
/// sums / differences / half-elements bitmaps.
pub fn random_sum_free(field: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> FieldSubset {
    let order = field.order();
    let mut elements: Vec<u64> = (1..order).collect();
    elements.shuffle(rng);
    let target = rng.gen_range(1..=order / 3 + 1);

    let n = order as usize;
    let mut sums = vec![false; n];
    let mut diffs = vec![false; n];
    let mut halves = vec![false; n];
    let mut chosen: Vec<u64> = Vec::new();
    let half_scale = match field.as_ref() {
        FieldCtx::Prime(f) => f.inverse(2),
        FieldCtx::Binary(_) => 0,
    };
    for x in elements {
        if chosen.len() as u64 >= target {
            break;
        }
        if sums[x as usize] || diffs[x as usize] || halves[x as usize] {
            continue;
        }
        for &y in chosen.iter().chain(std::iter::once(&x)) {
            sums[field.add(x, y) as usize] = true;
            diffs[field.add(x, field.neg(y)) as usize] = true;
            diffs[field.add(y, field.neg(x)) as usize] = true;
        }
        if let FieldCtx::Prime(f) = field.as_ref() {
            halves[f.mul(x, half_scale) as usize] = true;
        }
        chosen.push(x);
    }
    chosen.sort_unstable();
    FieldSubset::from_elements(field.clone(), &chosen).unwrap()
}

/// Random inverse-closed subset: a random union of inversion orbits.
pub fn random_inverse_closed(field: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> FieldSubset {
    let order = field.order();
    let density: f64 = rng.gen_range(0.05..0.6);
    let mut member = vec![false; order as usize];
    for a in 1..order {
        if member[a as usize] {
            continue;
        }
        if rng.gen_bool(density) {
            member[a as usize] = true;
            member[field.inverse(a) as usize] = true;
        }
    }
    let els: Vec<u64> = (1..order).filter(|&x| member[x as usize]).collect();
    FieldSubset::from_elements(field.clone(), &els).unwrap()
}
