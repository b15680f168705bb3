use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::Serialize;
use sumfree_core::field::{primes_in_range, BinaryFieldCtx, FieldCtx, PrimeFieldCtx};
use sumfree_core::interval::{self, ExpressionId, Status};
use sumfree_core::search::{
    self, default_exhaustive_limit, SearchKind, SearchOptions, SearchResult,
};
use sumfree_core::spectrum::{self, ReportOptions};
use sumfree_core::subsets::{self, FieldSubset, SetFile};

use crate::output::{ratio, sig12};
use crate::{
    ConstructArgs, ConstructionKind, FigureArgs, KloostermanArgs, ProblemKind, SearchArgs,
    SpectrumArgs, VerifyArgs,
};

fn write_or_stdout(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn parse_bitmask(s: &str) -> anyhow::Result<u64> {
    let t = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"));
    let v = match t {
        Some(d) => u64::from_str_radix(d, 16),
        None => s.parse(),
    };
    v.with_context(|| format!("bad bitmask {s:?}"))
}

fn binary_field(n: u32, modulus: &Option<String>) -> anyhow::Result<FieldCtx> {
    Ok(match modulus {
        Some(m) => FieldCtx::binary_with_modulus(n, parse_bitmask(m)?)?,
        None => FieldCtx::binary(n)?,
    })
}

fn load_set(path: &Path) -> anyhow::Result<FieldSubset> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SetFile::from_json(&text)?.into_subset()?)
}

pub fn spectrum(args: &SpectrumArgs) -> anyhow::Result<(u8, String)> {
    let set = load_set(&args.set_file)?;
    if args.require_inverse_closed && !set.is_inverse_closed() {
        bail!("set is not inverse-closed (required by --require-inverse-closed)");
    }
    let report = spectrum::build_report(
        &set,
        &ReportOptions {
            k: args.k,
            m: args.m,
            r: args.r,
            alpha0: args.alpha0,
        },
    )?;
    eprintln!(
        "p={} |A|={} alpha={} sum_free={} inverse_closed={} records={} all_hold={}",
        report.p,
        report.size,
        sig12(report.alpha),
        report.sum_free,
        report.inverse_closed,
        report.records.len(),
        report.all_hold()
    );
    write_or_stdout(&args.out, &serde_json::to_string_pretty(&report)?)?;
    let summary = format!("records={} all_hold={}", report.records.len(), report.all_hold());
    Ok((0, summary))
}

#[derive(Serialize)]
struct SearchReport {
    kind: &'static str,
    field: SetFileField,
    best_size: u64,
    elements: Vec<u64>,
    density_num: u64,
    density_den: u64,
    optimal: bool,
    nodes_explored: u64,
    wall_time_ms: u128,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SetFileField {
    Prime { p: u64 },
    Binary { n: u32, modulus: String },
}

fn field_descriptor(field: &FieldCtx) -> SetFileField {
    match field {
        FieldCtx::Prime(f) => SetFileField::Prime { p: f.p() },
        FieldCtx::Binary(f) => SetFileField::Binary {
            n: f.n(),
            modulus: format!("0x{:x}", f.modulus()),
        },
    }
}

pub fn search(args: &SearchArgs) -> anyhow::Result<(u8, String)> {
    let kind = match args.kind {
        ProblemKind::Sigma => SearchKind::SumFree,
        ProblemKind::Mu => SearchKind::SumFreeInverseClosed,
    };
    if let Some(range) = &args.scan {
        return scan(args, kind, range);
    }

    let field = Arc::new(match (args.p, args.n) {
        (Some(p), None) => FieldCtx::prime(p)?,
        (None, Some(n)) => binary_field(n, &args.modulus)?,
        _ => bail!("specify exactly one of --p or --n (or --scan)"),
    });
    let limit = args
        .limit
        .unwrap_or_else(|| default_exhaustive_limit(&field, kind));
    let result = if field.order() <= limit {
        let opts = SearchOptions {
            exhaustive_limit: Some(limit),
            seed: args.seed,
            budget: args.budget,
        };
        match kind {
            SearchKind::SumFree => search::max_sum_free(&field, &opts),
            SearchKind::SumFreeInverseClosed => search::max_sum_free_inverse_closed(&field, &opts),
        }
    } else if args.heuristic {
        search::heuristic_search(&field, kind, args.seed, args.budget)
    } else {
        bail!(
            "field of order {} is beyond the exhaustive limit {limit}; pass --heuristic for a non-optimal search",
            field.order()
        );
    };
    let report = search_report(&field, kind, &result);
    eprintln!(
        "{} best_size={} density={}/{} optimal={} nodes={} in {} ms",
        report.kind,
        report.best_size,
        report.density_num,
        report.density_den,
        report.optimal,
        report.nodes_explored,
        report.wall_time_ms
    );
    write_or_stdout(&args.out, &serde_json::to_string_pretty(&report)?)?;
    let summary = format!("best_size={} optimal={}", report.best_size, report.optimal);
    Ok((0, summary))
}

fn search_report(field: &Arc<FieldCtx>, kind: SearchKind, r: &SearchResult) -> SearchReport {
    SearchReport {
        kind: match kind {
            SearchKind::SumFree => "sigma",
            SearchKind::SumFreeInverseClosed => "mu",
        },
        field: field_descriptor(field),
        best_size: r.best_size,
        elements: r.best_set.elements(),
        density_num: r.best_size,
        density_den: field.order(),
        optimal: r.optimal,
        nodes_explored: r.nodes_explored,
        wall_time_ms: r.wall_time.as_millis(),
    }
}

fn scan(args: &SearchArgs, _kind: SearchKind, range: &str) -> anyhow::Result<(u8, String)> {
    let (lo, hi) = range
        .split_once("..")
        .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
        .with_context(|| format!("bad scan range {range:?}, expected lo..hi"))?;
    let primes: Vec<u64> = primes_in_range(lo.max(3), hi);
    if primes.is_empty() {
        bail!("no odd primes in {lo}..{hi}");
    }
    if !args.heuristic {
        for &p in &primes {
            let sig_limit = args.limit.unwrap_or(search::SIGMA_EXHAUSTIVE_LIMIT_PRIME);
            let mu_limit = args.limit.unwrap_or(search::MU_EXHAUSTIVE_LIMIT_PRIME);
            if p > sig_limit.min(mu_limit) {
                bail!(
                    "p={p} is beyond the exhaustive limit; pass --heuristic to scan non-optimally"
                );
            }
        }
    }
    let opts = SearchOptions {
        exhaustive_limit: args.limit,
        seed: args.seed,
        budget: args.budget,
    };
    let rows = search::conjecture_scan(&primes, &opts)?;
    let mut csv = String::from("p,sigma_num,sigma_den,mu_num,mu_den,gap_num,gap_den,optimal\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.p,
            row.sigma.numer(),
            row.sigma.denom(),
            row.mu.numer(),
            row.mu.denom(),
            row.gap.numer(),
            row.gap.denom(),
            row.optimal
        ));
    }
    write_or_stdout(&args.out, csv.trim_end())?;
    Ok((0, format!("rows={}", rows.len())))
}

pub fn construct(args: &ConstructArgs) -> anyhow::Result<(u8, String)> {
    let set = match args.kind {
        ConstructionKind::Char2 => {
            let n = args.n.context("construct char2 needs --n")?;
            let field = Arc::new(binary_field(n, &args.modulus)?);
            let set = subsets::construct_char2(&field)?;
            let q = field.order();
            eprintln!(
                "alpha = {} = {}; |alpha - 1/4| = {} <= (1 + 2 sqrt q)/(4q) = {}",
                ratio(&set.alpha_exact()),
                sig12(set.alpha()),
                sig12((set.alpha() - 0.25).abs()),
                sig12(subsets::char2_density_bound(q)),
            );
            set
        }
        ConstructionKind::Interval => {
            let p = args.p.context("construct interval needs --p")?;
            let field = Arc::new(FieldCtx::prime(p)?);
            let set = subsets::construct_interval_intersection(&field)?;
            if set.is_empty() {
                eprintln!("warning: interval intersection is empty at p={p}");
            }
            eprintln!(
                "alpha = {} = {} (approaches 1/9 for large p)",
                ratio(&set.alpha_exact()),
                sig12(set.alpha()),
            );
            set
        }
    };
    write_or_stdout(&args.out, &SetFile::from_subset(&set).to_json())?;
    Ok((0, format!("size={} alpha={}", set.len(), sig12(set.alpha()))))
}

pub fn verify(args: &VerifyArgs, results_dir: &Path) -> anyhow::Result<(u8, String)> {
    let claims = if args.theorem {
        interval::theorem_claims(args.budget.unwrap_or(interval::DEFAULT_BUDGET))
    } else {
        let path = args.claims_file.as_ref().expect("clap enforces");
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        interval::parse_claims(&text)?
    };
    let report = interval::verify_claims(&claims)?;
    for o in &report.outcomes {
        let extra = match (&o.result.bound, &o.result.refutation_point) {
            (Some(b), _) => format!(" bound={}", sig12(*b)),
            (_, Some(rp)) => format!(
                " refuted_at={:?} value=[{}, {}]",
                rp.coords,
                sig12(rp.value_lo),
                sig12(rp.value_hi)
            ),
            _ => String::new(),
        };
        println!(
            "{}: {} ({} {} {}; boxes={} depth={}{})",
            o.name,
            match o.result.status {
                Status::Proved => "proved",
                Status::Refuted => "REFUTED",
                Status::Inconclusive => "INCONCLUSIVE",
            },
            o.expr,
            o.kind.name(),
            o.threshold,
            o.result.boxes_processed,
            o.result.max_depth,
            extra
        );
    }
    println!(
        "{} proved, {} refuted, {} inconclusive",
        report.proved, report.refuted, report.inconclusive
    );
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| results_dir.join("verify_report.json"));
    if let Some(dir) = report_path.parent() {
        std::fs::create_dir_all(dir).ok();
    }
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("writing {}", report_path.display()))?;
    eprintln!("wrote {}", report_path.display());
    let code = if report.refuted > 0 {
        1
    } else if report.inconclusive > 0 {
        2
    } else {
        0
    };
    let summary = format!(
        "proved={} refuted={} inconclusive={}",
        report.proved, report.refuted, report.inconclusive
    );
    Ok((code, summary))
}

pub fn figure(args: &FigureArgs) -> anyhow::Result<(u8, String)> {
    let expr: ExpressionId = args.expr.parse()?;
    let rows = interval::emit_figure_data(expr, args.lo, args.hi, args.samples)?;
    println!("# expr,{expr}");
    println!("# reference,0.75");
    println!("x,value");
    for (x, v) in &rows {
        println!("{},{}", sig12(*x), sig12(*v));
    }
    Ok((0, format!("samples={}", rows.len())))
}

pub fn kloosterman(args: &KloostermanArgs) -> anyhow::Result<(u8, String)> {
    match (args.p, args.n) {
        (Some(p), None) => {
            let b = args.b.context("prime kloosterman needs --b")?;
            let ctx = PrimeFieldCtx::new(p)?;
            let k = spectrum::kloosterman_prime(&ctx, args.a, b)?;
            let bound = spectrum::weil_bound(p);
            println!(
                "K({p}; {}, {b}) = {} |K| <= 2*sqrt(p) = {}: {}",
                args.a,
                sig12(k),
                sig12(bound),
                k.abs() <= bound
            );
            Ok((0, format!("K={}", sig12(k))))
        }
        (None, Some(n)) => {
            if args.b.is_some() {
                bail!("--b applies to prime fields only");
            }
            let field = binary_field(n, &args.modulus)?;
            let ctx: &BinaryFieldCtx = field.as_binary().expect("binary field");
            let a = u64::try_from(args.a).context("char-2 element must be nonnegative")?;
            let k = spectrum::kloosterman_char2(ctx, a)?;
            let bound = spectrum::weil_bound(ctx.order());
            println!(
                "K(2^{n}; 0x{a:x}) = {k}, |K| <= 2*sqrt(q) = {}: {}",
                sig12(bound),
                (k * k) as f64 <= 4.0 * ctx.order() as f64
            );
            Ok((0, format!("K={k}")))
        }
        _ => bail!("specify exactly one of --p or --n"),
    }
}
