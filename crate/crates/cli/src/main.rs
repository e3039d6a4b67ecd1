//! Command-line front end: classification, posets, families, invariant
//! models, E2 pages, stability scans, and the shift-algebra checks, over
//! the JSON GCM document format. All output is deterministic and exact.

mod cache;
mod report;

use anyhow::{anyhow, bail, Context, Result};
use cache::{cache_key, canonical_hash, default_cache_dir, Cache};
use clap::{Parser, Subcommand};
use kmstab::classify::{classify, positive_roots, weyl_data, CatalogType, DEFAULT_ROOT_CAP};
use kmstab::family::{extend, find_stable_base, relabel_with_pivot, FamilySpec};
use kmstab::gcm::{Gcm, Label, NodeSet};
use kmstab::invariants::{
    hilbert_series, invariant_basis, molien_oracle, monomials, reflection_matrices,
    InvariantError,
};
use kmstab::limits::{e2_page, stability_scan, weyl_family_scan, LimitsConfig};
use kmstab::poset::{is_cofinal, verify_observation, SphericalPoset};
use report::Format;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "kmstab",
    version,
    about = "Exact computations for generalized Cartan matrices: classification, spherical posets, extension families, invariant models, and higher-limit stability scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value = "markdown")]
    format: Format,

    /// Disable the on-disk result cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Cache directory (default: $KMSTAB_CACHE_DIR or ./.kmstab-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Polynomial degree cutoff for invariant-model commands.
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: usize,

    /// Chain depth cap for limit computations.
    #[arg(long, global = true, default_value_t = 12)]
    depth: usize,

    /// Highest derived-limit index to compute.
    #[arg(long, global = true, default_value_t = 8)]
    imax: usize,

    /// Group order bound for the Molien oracle.
    #[arg(long, global = true, default_value_t = 1000)]
    molien_bound: usize,

    /// Maximum number of components a cochain complex may have.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    guardrail: usize,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a GCM document against the Cartan axioms.
    Validate { file: PathBuf },
    /// Classify each component: finite (with catalog type), affine, or
    /// indefinite.
    Classify { file: PathBuf },
    /// Enumerate the positive roots of a finite-type GCM.
    Roots {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ROOT_CAP)]
        cap: usize,
    },
    /// Enumerate the spherical poset: element count, Hasse edges, longest
    /// chain; `--list` prints every element.
    Poset {
        file: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Check subset control and cofinality for one extension of a base.
    CofinalCheck {
        file: PathBuf,
        #[arg(long)]
        pivot: Label,
        #[arg(short, long)]
        n: u32,
        #[arg(long)]
        list: bool,
    },
    /// Extend a base GCM at a pivot node by a chain on negative labels.
    Extend {
        file: PathBuf,
        #[arg(long)]
        pivot: Label,
        #[arg(short, long)]
        n: u32,
    },
    /// Probe an extension family for its stable base member.
    StableBase {
        file: PathBuf,
        #[arg(long)]
        pivot: Label,
        #[arg(long, default_value_t = 8)]
        probe: u32,
    },
    /// Numerical Weyl data for a catalog type (e.g. A3, D5, E8).
    Weyl { catalog_type: String },
    /// Hilbert series of the invariant model for a spherical subset, with
    /// kernel and Molien cross-checks.
    Hilbert {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<Label>,
    },
    /// Explicit invariant basis at one degree.
    Invariants {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<Label>,
        #[arg(long)]
        degree: usize,
    },
    /// E2 table of the spherical-poset decomposition.
    E2 {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// Stability scan across an extension family, with reindexed
    /// subcategory comparison.
    Stability {
        file: PathBuf,
        #[arg(long)]
        pivot: Label,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long, default_value_t = 3)]
        cofinal_max: u32,
    },
    /// Constant-functor limit dimensions across an extension family.
    WeylScan {
        file: PathBuf,
        #[arg(long)]
        pivot: Label,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Exhaustive verification of the shift-matrix composition law.
    SigmaCheck {
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[arg(long, default_value_t = 12)]
        det_bound: usize,
    },
}

fn read_gcm(path: &PathBuf) -> Result<Gcm> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Gcm::from_json(&text).map_err(|e| anyhow!("bad input {}: {e}", path.display()))
}

fn limits_config(cli: &Cli) -> LimitsConfig {
    LimitsConfig {
        guardrail: cli.guardrail,
        depth_cap: cli.depth,
        ..LimitsConfig::default()
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text.as_bytes())
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn subset_of(g: &Gcm, labels: &[Label]) -> Result<NodeSet> {
    let set: NodeSet = labels.iter().copied().collect();
    for l in &set {
        if !g.has_node(*l) {
            bail!("unknown node label {l}");
        }
    }
    Ok(set)
}

/// Computes a report through the cache: on a hit the stored bytes are
/// reproduced verbatim.
fn cached(
    cli: &Cli,
    g: &Gcm,
    operation: &str,
    params: &str,
    compute: impl FnOnce() -> Result<String>,
) -> Result<String> {
    let cache = if cli.no_cache {
        Cache::new(None)
    } else {
        Cache::new(Some(
            cli.cache_dir.clone().unwrap_or_else(default_cache_dir),
        ))
    };
    let key = cache_key(&canonical_hash(g), operation, params);
    if let Some(hit) = cache.lookup(&key)? {
        return Ok(hit);
    }
    let fresh = compute()?;
    cache.store(&key, &fresh)?;
    Ok(fresh)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let fmt = cli.format;
    let text = match &cli.command {
        Command::Validate { file } => {
            let g = read_gcm(file)?;
            format!(
                "valid GCM: rank {}, {} component(s)\n",
                g.rank(),
                g.components().len()
            )
        }
        Command::Classify { file } => {
            let g = read_gcm(file)?;
            let c = classify(&g).context("classification failed")?;
            report::render_classification(&c, fmt)
        }
        Command::Roots { file, cap } => {
            let g = read_gcm(file)?;
            let roots = positive_roots(&g, *cap).context("root enumeration failed")?;
            report::render_roots(&roots, fmt)
        }
        Command::Poset { file, list } => {
            let g = read_gcm(file)?;
            let p = SphericalPoset::enumerate(&g).context("poset enumeration failed")?;
            let elems = list.then(|| p.elements());
            report::render_poset_summary(
                p.len(),
                p.hasse_edge_count(),
                p.longest_chain(),
                elems.as_deref(),
                fmt,
            )
        }
        Command::CofinalCheck {
            file,
            pivot,
            n,
            list,
        } => {
            let g = read_gcm(file)?;
            let base = relabel_with_pivot(&g, *pivot).context("relabeling failed")?;
            let member = extend(&FamilySpec::new(base.clone(), *n).context("bad family spec")?);
            let obs = verify_observation(&base, &member, &base.node_set());
            let poset = SphericalPoset::enumerate(&member).context("poset enumeration failed")?;
            let sub = poset.extended_subcategory(&base.node_set());
            let cof = is_cofinal(&sub, &poset);
            let mut out = report::render_observation(&obs);
            out.push_str(&report::render_cofinal(&cof, fmt, *list));
            out
        }
        Command::Extend { file, pivot, n } => {
            let g = read_gcm(file)?;
            let base = relabel_with_pivot(&g, *pivot).context("relabeling failed")?;
            let member = extend(&FamilySpec::new(base, *n).context("bad family spec")?);
            let mut s = member.to_json();
            s.push('\n');
            s
        }
        Command::StableBase { file, pivot, probe } => {
            let g = read_gcm(file)?;
            let rep = find_stable_base(&g, *pivot, *probe).context("stable-base probe failed")?;
            report::render_stable_base(&rep, fmt)
        }
        Command::Weyl { catalog_type } => {
            let t = CatalogType::parse(catalog_type)
                .ok_or_else(|| anyhow!("bad input: unknown catalog type {catalog_type}"))?;
            report::render_weyl(&weyl_data(t), fmt)
        }
        Command::Hilbert { file, subset } => {
            let g = read_gcm(file)?;
            let j = subset_of(&g, subset)?;
            let formula =
                hilbert_series(&g, &j, cli.cutoff).context("Hilbert series failed")?;
            let act = reflection_matrices(&g, &j);
            let mut kernel_dims = Vec::with_capacity(cli.cutoff + 1);
            for d in 0..=cli.cutoff {
                kernel_dims.push(
                    invariant_basis(&act, d, cli.cutoff)
                        .context("invariant basis failed")?
                        .len(),
                );
            }
            let molien = match molien_oracle(&act, cli.cutoff, cli.molien_bound) {
                Ok(m) => Some(m),
                Err(InvariantError::GroupTooLarge { .. }) => None,
                Err(e) => return Err(e).context("Molien oracle failed"),
            };
            report::render_hilbert(&formula, &kernel_dims, molien.as_ref(), fmt)
        }
        Command::Invariants {
            file,
            subset,
            degree,
        } => {
            let g = read_gcm(file)?;
            let j = subset_of(&g, subset)?;
            let act = reflection_matrices(&g, &j);
            let basis = invariant_basis(&act, *degree, cli.cutoff.max(*degree))
                .context("invariant basis failed")?;
            let monos = monomials(g.rank(), *degree);
            report::render_invariant_basis(&monos, &basis, fmt)
        }
        Command::E2 { file, window } => {
            let g = read_gcm(file)?;
            let cfg = limits_config(&cli);
            let params = format!(
                "w={window};imax={};depth={};guard={};fmt={fmt:?}",
                cli.imax, cli.depth, cli.guardrail
            );
            cached(&cli, &g, "e2", &params, || {
                let page = e2_page(&g, *window, cli.imax, &cfg).context("e2 failed")?;
                Ok(report::render_e2(&page, fmt))
            })?
        }
        Command::Stability {
            file,
            pivot,
            n_max,
            window,
            cofinal_max,
        } => {
            let g = read_gcm(file)?;
            let base = relabel_with_pivot(&g, *pivot).context("relabeling failed")?;
            let cfg = limits_config(&cli);
            let params = format!(
                "pivot={pivot};n={n_max};w={window};cof={cofinal_max};imax={};depth={};guard={};fmt={fmt:?}",
                cli.imax, cli.depth, cli.guardrail
            );
            cached(&cli, &base, "stability", &params, || {
                let rep = stability_scan(&base, *n_max, *window, cli.imax, *cofinal_max, &cfg)
                    .context("stability scan failed")?;
                Ok(report::render_stability(&rep, fmt))
            })?
        }
        Command::WeylScan { file, pivot, n_max } => {
            let g = read_gcm(file)?;
            let base = relabel_with_pivot(&g, *pivot).context("relabeling failed")?;
            let cfg = limits_config(&cli);
            let params = format!(
                "pivot={pivot};n={n_max};imax={};depth={};guard={};fmt={fmt:?}",
                cli.imax, cli.depth, cli.guardrail
            );
            cached(&cli, &base, "weyl-scan", &params, || {
                let rep = weyl_family_scan(&base, *n_max, cli.imax, &cfg)
                    .context("weyl scan failed")?;
                Ok(report::render_weyl_scan(&rep, fmt))
            })?
        }
        Command::SigmaCheck { bound, det_bound } => {
            report::render_sigma_check(*bound, *det_bound)
        }
    };
    emit(&cli, &text)
}
