//! Exact branch-and-bound and randomized local search for the largest
//! sum-free (and sum-free inverse-closed) subsets, plus the density scan
//! comparing the two quantities across primes.
//!
//! Both searches branch over inclusion units: single elements for the plain
//! sum-free problem, whole inversion orbits {a, a^{-1}} for the
//! inverse-closed one. Units are ordered by descending size, then smallest
//! element. Pruning: remaining-capacity bound, the (p+1)/3 cap in prime
//! fields (|F|/2 in characteristic 2), and forbidden-triple checks against
//! the membership bitmap. Negation x -> -x preserves both predicates, so in
//! prime fields the search only visits sets whose smallest element lies in
//! the lower half, and never takes p-1's orbit without 1's.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::FieldCtx;
use crate::subsets::FieldSubset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    SumFree,
    SumFreeInverseClosed,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Override for the exhaustive field-size limit; `None` takes the
    /// per-problem default.
    pub exhaustive_limit: Option<u64>,
    /// Seed for the heuristic fallback.
    pub seed: u64,
    /// Move budget for the heuristic fallback.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            exhaustive_limit: None,
            seed: 0,
            budget: 100_000,
        }
    }
}

pub const SIGMA_EXHAUSTIVE_LIMIT_PRIME: u64 = 43;
pub const MU_EXHAUSTIVE_LIMIT_PRIME: u64 = 61;
pub const EXHAUSTIVE_LIMIT_BINARY: u64 = 64;

pub fn default_exhaustive_limit(field: &FieldCtx, kind: SearchKind) -> u64 {
    match (field, kind) {
        (FieldCtx::Prime(_), SearchKind::SumFree) => SIGMA_EXHAUSTIVE_LIMIT_PRIME,
        (FieldCtx::Prime(_), SearchKind::SumFreeInverseClosed) => MU_EXHAUSTIVE_LIMIT_PRIME,
        (FieldCtx::Binary(_), _) => EXHAUSTIVE_LIMIT_BINARY,
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_set: FieldSubset,
    pub best_size: u64,
    /// True when produced by exhaustive branch-and-bound: no strictly larger
    /// feasible set exists.
    pub optimal: bool,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Largest sum-free subset. Fields beyond the exhaustive limit fall back to
/// the seeded heuristic with `optimal = false`.
pub fn max_sum_free(field: &Arc<FieldCtx>, opts: &SearchOptions) -> SearchResult {
    run(field, SearchKind::SumFree, opts)
}

/// Largest subset that is both sum-free and closed under inverses.
pub fn max_sum_free_inverse_closed(field: &Arc<FieldCtx>, opts: &SearchOptions) -> SearchResult {
    run(field, SearchKind::SumFreeInverseClosed, opts)
}

fn run(field: &Arc<FieldCtx>, kind: SearchKind, opts: &SearchOptions) -> SearchResult {
    let limit = opts
        .exhaustive_limit
        .unwrap_or_else(|| default_exhaustive_limit(field, kind));
    if field.order() <= limit {
        exhaustive(field, kind)
    } else {
        heuristic_search(field, kind, opts.seed, opts.budget)
    }
}

/// Inclusion units: singletons, or inversion orbits (pairs and the
/// self-inverse fixed points), ordered by descending size then smallest
/// element. 0 never appears: 0 + 0 = 0 rules it out of any sum-free set.
fn build_units(field: &FieldCtx, kind: SearchKind) -> Vec<Vec<u64>> {
    let order = field.order();
    let mut units: Vec<Vec<u64>> = Vec::new();
    match kind {
        SearchKind::SumFree => {
            units.extend((1..order).map(|x| vec![x]));
        }
        SearchKind::SumFreeInverseClosed => {
            let mut seen = vec![false; order as usize];
            for a in 1..order {
                if seen[a as usize] {
                    continue;
                }
                let b = field.inverse(a);
                seen[a as usize] = true;
                seen[b as usize] = true;
                units.push(if a == b { vec![a] } else { vec![a.min(b), a.max(b)] });
            }
        }
    }
    units.sort_by_key(|u| (std::cmp::Reverse(u.len()), u[0]));
    units
}

struct Dfs<'a> {
    field: &'a FieldCtx,
    units: &'a [Vec<u64>],
    /// Elements contained in units[i..].
    suffix_size: Vec<u64>,
    /// Whether any unit in units[i..] has smallest element in the lower half.
    suffix_has_low: Vec<bool>,
    cap: u64,
    half: u64,
    prime: bool,
    member: Vec<bool>,
    chosen: Vec<u64>,
    size: u64,
    best: Vec<u64>,
    best_size: u64,
    nodes: u64,
    done: bool,
}

impl Dfs<'_> {
    fn can_add(&self, unit: &[u64]) -> bool {
        // With S already feasible, adding the unit stays feasible iff no new
        // element x sees y in the extended set with x + y or x - y inside it.
        let probe = |x: u64, y: u64| -> bool {
            let s = self.field.add(x, y);
            if self.member[s as usize] || unit.contains(&s) {
                return true;
            }
            let d = self.field.add(x, self.field.neg(y));
            self.member[d as usize] || unit.contains(&d)
        };
        for &x in unit {
            for &y in &self.chosen {
                if probe(x, y) {
                    return false;
                }
            }
            for &y in unit {
                if probe(x, y) {
                    return false;
                }
            }
        }
        true
    }

    fn record_if_best(&mut self) {
        if self.size > self.best_size {
            self.best_size = self.size;
            self.best = self.chosen.clone();
            if self.best_size >= self.cap {
                self.done = true;
            }
        }
    }

    fn recurse(&mut self, i: usize) {
        if self.done {
            return;
        }
        self.nodes += 1;
        self.record_if_best();
        if i == self.units.len() {
            return;
        }
        if self.size + self.suffix_size[i] <= self.best_size {
            return;
        }
        // Negation-symmetry: some chosen or future unit must reach the lower half.
        if self.prime && self.size > 0 && !self.has_low() && !self.suffix_has_low[i] {
            return;
        }

        let unit = &self.units[i];
        // Never take p-1's orbit with 1's orbit excluded: negation maps that
        // configuration to one the search already covers.
        let blocked = self.prime
            && unit[0] == self.half * 2
            && unit.len() == 1
            && !self.member[1]
            && self.units[..i].iter().any(|u| u[0] == 1);
        if !blocked && self.can_add(unit) {
            for &x in unit {
                self.member[x as usize] = true;
                self.chosen.push(x);
            }
            self.size += unit.len() as u64;
            self.recurse(i + 1);
            self.size -= unit.len() as u64;
            for &x in unit {
                self.member[x as usize] = false;
                self.chosen.pop();
            }
        }
        if self.done {
            return;
        }
        self.recurse(i + 1);
    }

    fn has_low(&self) -> bool {
        self.chosen.iter().any(|&x| x <= self.half)
    }
}

fn exhaustive(field: &Arc<FieldCtx>, kind: SearchKind) -> SearchResult {
    let start = Instant::now();
    let order = field.order();
    let units = build_units(field, kind);
    let n = units.len();
    let mut suffix_size = vec![0u64; n + 1];
    let mut suffix_has_low = vec![false; n + 1];
    let (prime, cap, half) = match field.as_ref() {
        FieldCtx::Prime(f) => (true, (f.p() + 1) / 3, (f.p() - 1) / 2),
        FieldCtx::Binary(_) => (false, order / 2, 0),
    };
    for i in (0..n).rev() {
        suffix_size[i] = suffix_size[i + 1] + units[i].len() as u64;
        suffix_has_low[i] = suffix_has_low[i + 1] || units[i][0] <= half;
    }
    let mut dfs = Dfs {
        field,
        units: &units,
        suffix_size,
        suffix_has_low,
        cap,
        half,
        prime,
        member: vec![false; order as usize],
        chosen: Vec::new(),
        size: 0,
        best: vec![1],
        best_size: 1,
        nodes: 0,
        done: false,
    };
    dfs.recurse(0);
    let best_set = FieldSubset::from_elements(field.clone(), &sorted(&dfs.best))
        .expect("search result is a valid subset");
    debug_assert!(best_set.is_sum_free());
    debug_assert!(kind == SearchKind::SumFree || best_set.is_inverse_closed());
    if prime {
        assert!(dfs.best_size <= cap, "sum-free set exceeds the (p+1)/3 cap");
    }
    SearchResult {
        best_size: best_set.len(),
        best_set,
        optimal: true,
        nodes_explored: dfs.nodes,
        wall_time: start.elapsed(),
    }
}

fn sorted(v: &[u64]) -> Vec<u64> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// Randomized local search over unit unions: greedy seeded construction,
/// then random unit toggles with a short tabu list, keeping the best
/// feasible set seen. Deterministic for a fixed seed; never marked optimal.
pub fn heuristic_search(
    field: &Arc<FieldCtx>,
    kind: SearchKind,
    seed: u64,
    budget: u64,
) -> SearchResult {
    let start = Instant::now();
    let order = field.order();
    let units = build_units(field, kind);
    let n = units.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut state = Dfs {
        field,
        units: &units,
        suffix_size: vec![0; n + 1],
        suffix_has_low: vec![false; n + 1],
        cap: u64::MAX,
        half: 0,
        prime: false,
        member: vec![false; order as usize],
        chosen: Vec::new(),
        size: 0,
        best: Vec::new(),
        best_size: 0,
        nodes: 0,
        done: false,
    };
    let mut included = vec![false; n];

    let insert = |state: &mut Dfs, included: &mut Vec<bool>, i: usize| {
        for &x in &units[i] {
            state.member[x as usize] = true;
            state.chosen.push(x);
        }
        state.size += units[i].len() as u64;
        included[i] = true;
    };
    let remove = |state: &mut Dfs, included: &mut Vec<bool>, i: usize| {
        for &x in &units[i] {
            state.member[x as usize] = false;
            state.chosen.retain(|&y| y != x);
        }
        state.size -= units[i].len() as u64;
        included[i] = false;
    };

    let mut greedy_order: Vec<usize> = (0..n).collect();
    greedy_order.shuffle(&mut rng);
    for i in greedy_order {
        if state.can_add(&units[i]) {
            insert(&mut state, &mut included, i);
        }
    }
    let mut best = state.chosen.clone();
    let mut best_size = state.size;

    const TABU_TENURE: u64 = 7;
    let mut tabu_until = vec![0u64; n];
    for step in 0..budget {
        state.nodes += 1;
        let i = rng.gen_range(0..n);
        if tabu_until[i] > step && state.size + units[i].len() as u64 <= best_size {
            continue;
        }
        if included[i] {
            remove(&mut state, &mut included, i);
        } else if state.can_add(&units[i]) {
            insert(&mut state, &mut included, i);
        } else {
            continue;
        }
        tabu_until[i] = step + TABU_TENURE;
        if state.size > best_size {
            best_size = state.size;
            best = state.chosen.clone();
        }
    }

    let best_set = FieldSubset::from_elements(field.clone(), &sorted(&best))
        .expect("heuristic result is a valid subset");
    debug_assert!(best_set.is_sum_free());
    SearchResult {
        best_size,
        best_set,
        optimal: false,
        nodes_explored: state.nodes,
        wall_time: start.elapsed(),
    }
}

/// One row of the density scan: sigma, mu, sigma^2, and mu - sigma^2, exact.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub p: u64,
    pub sigma: Ratio<i64>,
    pub mu: Ratio<i64>,
    pub sigma_squared: Ratio<i64>,
    pub gap: Ratio<i64>,
    pub optimal: bool,
}

/// Per-prime sigma, mu, sigma^2, and gap. Purely exploratory: no pass/fail
/// judgement on how the gap behaves.
pub fn conjecture_scan(primes: &[u64], opts: &SearchOptions) -> crate::error::Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(primes.len());
    for &p in primes {
        let field = Arc::new(FieldCtx::prime(p)?);
        let sigma_res = max_sum_free(&field, opts);
        let mu_res = max_sum_free_inverse_closed(&field, opts);
        let sigma = Ratio::new(sigma_res.best_size as i64, p as i64);
        let mu = Ratio::new(mu_res.best_size as i64, p as i64);
        let sigma_squared = sigma * sigma;
        rows.push(ScanRow {
            p,
            sigma,
            mu,
            sigma_squared,
            gap: mu - sigma_squared,
            optimal: sigma_res.optimal && mu_res.optimal,
        });
    }
    Ok(rows)
}
