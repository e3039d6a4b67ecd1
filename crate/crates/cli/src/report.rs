//! Deterministic report rendering. Every table exists in CSV and Markdown
//! form; numbers are integers or exact rationals rendered as "p/q".

use kmstab::classify::{Classification, ComponentVerdict, WeylData};
use kmstab::family::StableBaseReport;
use kmstab::gcm::NodeSet;
use kmstab::invariants::HilbertSeries;
use kmstab::limits::{E2Page, StabilityReport, WeylScanReport};
use kmstab::poset::{CofinalReport, ObservationReport};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Markdown,
    Csv,
}

pub fn nodeset_str(s: &NodeSet) -> String {
    let items: Vec<String> = s.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", items.join(" "))
}

fn table(fmt: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match fmt {
        Format::Csv => {
            let _ = writeln!(out, "{}", header.join(","));
            for row in rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        Format::Markdown => {
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(
                out,
                "|{}|",
                header.iter().map(|_| " --- ").collect::<Vec<_>>().join("|")
            );
            for row in rows {
                let _ = writeln!(out, "| {} |", row.join(" | "));
            }
        }
    }
    out
}

pub fn render_classification(c: &Classification, fmt: Format) -> String {
    let rows: Vec<Vec<String>> = c
        .components
        .iter()
        .enumerate()
        .map(|(k, comp)| {
            let catalog = match &comp.verdict {
                ComponentVerdict::Finite(t) => t.to_string(),
                _ => "-".to_string(),
            };
            let verdict = match &comp.verdict {
                ComponentVerdict::Finite(_) => "Finite".to_string(),
                ComponentVerdict::Affine => "Affine".to_string(),
                ComponentVerdict::Indefinite => "Indefinite".to_string(),
            };
            vec![
                format!("{}", k + 1),
                nodeset_str(&comp.nodes),
                verdict,
                catalog,
                comp.determinant.to_string(),
            ]
        })
        .collect();
    let mut out = table(
        fmt,
        &["component", "nodes", "verdict", "catalog", "determinant"],
        &rows,
    );
    let _ = writeln!(out, "is_finite: {}", c.is_finite);
    out
}

pub fn render_roots(roots: &std::collections::BTreeSet<Vec<i64>>, fmt: Format) -> String {
    let rows: Vec<Vec<String>> = roots
        .iter()
        .map(|r| {
            vec![r
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")]
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "positive_roots: {}", roots.len());
    out.push_str(&table(fmt, &["root"], &rows));
    out
}

pub fn render_weyl(w: &WeylData, fmt: Format) -> String {
    let rows = vec![vec![
        w.catalog.to_string(),
        w.order.to_string(),
        w.degrees
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        w.positive_root_count.to_string(),
    ]];
    table(
        fmt,
        &["type", "weyl_order", "degrees", "positive_roots"],
        &rows,
    )
}

pub fn render_poset_summary(
    size: usize,
    hasse_edges: usize,
    longest_chain: usize,
    elements: Option<&[NodeSet]>,
    fmt: Format,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "elements: {size}");
    let _ = writeln!(out, "hasse_edges: {hasse_edges}");
    let _ = writeln!(out, "longest_chain: {longest_chain}");
    if let Some(elems) = elements {
        let rows: Vec<Vec<String>> = elems
            .iter()
            .map(|e| vec![format!("{}", e.len()), nodeset_str(e)])
            .collect();
        out.push_str(&table(fmt, &["size", "subset"], &rows));
    }
    out
}

pub fn render_observation(rep: &ObservationReport) -> String {
    match (&rep.holds, &rep.witness) {
        (true, _) => "observation: holds\n".to_string(),
        (false, Some(w)) => format!("observation: fails, witness {}\n", nodeset_str(w)),
        (false, None) => "observation: fails\n".to_string(),
    }
}

pub fn render_cofinal(rep: &CofinalReport, fmt: Format, list: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cofinal: {}", rep.cofinal);
    if let Some(f) = &rep.failure {
        let _ = writeln!(out, "failure_witness: {}", nodeset_str(f));
    }
    if rep.cofinal && list {
        let rows: Vec<Vec<String>> = rep
            .minima
            .iter()
            .map(|(j, m)| vec![nodeset_str(j), nodeset_str(m)])
            .collect();
        out.push_str(&table(fmt, &["element", "minimum_upper_bound"], &rows));
    }
    out
}

pub fn render_stable_base(rep: &StableBaseReport, fmt: Format) -> String {
    let rows: Vec<Vec<String>> = rep
        .trace
        .iter()
        .map(|t| {
            let catalog = t
                .catalog
                .as_ref()
                .map(|v| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" x ")
                })
                .unwrap_or_else(|| "-".to_string());
            let verdicts = t
                .verdicts
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" + ");
            vec![t.n.to_string(), verdicts, catalog]
        })
        .collect();
    let mut out = table(fmt, &["n", "verdict", "catalog"], &rows);
    let _ = writeln!(out, "probe_bound: {}", rep.n_probe);
    let _ = writeln!(
        out,
        "stable_base: {} (verdict is exhaustive only up to the probe bound)",
        rep.verdict
    );
    out
}

pub fn render_hilbert(
    formula: &HilbertSeries,
    kernel_dims: &[usize],
    molien: Option<&HilbertSeries>,
    fmt: Format,
) -> String {
    let mut rows = Vec::new();
    for d in 0..formula.coeffs.len() {
        let f = formula.coeff(d);
        let k = kernel_dims.get(d).copied().unwrap_or(0) as u64;
        let kernel_flag = if f == k { "yes" } else { "NO" };
        let molien_flag = match molien {
            Some(m) => {
                if m.coeff(d) == f {
                    "yes"
                } else {
                    "NO"
                }
            }
            None => "skipped",
        };
        rows.push(vec![
            d.to_string(),
            (2 * d).to_string(),
            f.to_string(),
            kernel_flag.to_string(),
            molien_flag.to_string(),
        ]);
    }
    table(
        fmt,
        &[
            "poly_degree",
            "cohomological_degree",
            "dimension",
            "kernel_agrees",
            "molien_agrees",
        ],
        &rows,
    )
}

pub fn render_invariant_basis(
    monomials: &[Vec<u8>],
    basis: &[Vec<kmstab::linalg::Int>],
    fmt: Format,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", basis.len());
    let header: Vec<String> = monomials
        .iter()
        .map(|m| {
            m.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<String>> = basis
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect();
    out.push_str(&table(fmt, &header_refs, &rows));
    out
}

pub fn render_e2(page: &E2Page, fmt: Format) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "poset_size: {}", page.poset_size);
    let _ = writeln!(out, "window: {}", page.window);
    if !page.modular_rows.is_empty() {
        let _ = writeln!(
            out,
            "modular_rows: {}",
            page.modular_rows
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    match fmt {
        Format::Csv => {
            let rows: Vec<Vec<String>> = page
                .cells
                .iter()
                .map(|(&(i, j), &v)| vec![i.to_string(), j.to_string(), v.to_string()])
                .collect();
            out.push_str(&table(fmt, &["i", "j", "dim"], &rows));
        }
        Format::Markdown => {
            // Grid with i across, even j down; odd rows are identically
            // zero and omitted.
            let max_i = page.cells.keys().map(|&(i, _)| i).max().unwrap_or(0);
            let js: Vec<usize> = {
                let mut v: Vec<usize> = page.cells.keys().map(|&(_, j)| j).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let mut header: Vec<String> = vec!["j \\ i".to_string()];
            header.extend((0..=max_i).map(|i| i.to_string()));
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut rows = Vec::new();
            for &j in js.iter().rev() {
                let mut row = vec![j.to_string()];
                for i in 0..=max_i {
                    row.push(
                        page.cells
                            .get(&(i, j))
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| ".".to_string()),
                    );
                }
                rows.push(row);
            }
            out.push_str(&table(fmt, &header_refs, &rows));
        }
    }
    out
}

pub fn render_stability(rep: &StabilityReport, fmt: Format) -> String {
    let mut out = String::new();
    for (n, page) in &rep.pages {
        let _ = writeln!(out, "## n = {n}");
        out.push_str(&render_e2(page, fmt));
    }
    for (n, page, agree) in &rep.cofinal_pages {
        let _ = writeln!(out, "## cofinal n = {n} (agrees with full poset: {agree})");
        out.push_str(&render_e2(page, fmt));
    }
    let rows: Vec<Vec<String>> = rep
        .thresholds
        .iter()
        .map(|(&(i, j), &t)| vec![i.to_string(), j.to_string(), t.to_string()])
        .collect();
    let _ = writeln!(out, "## stabilization thresholds");
    out.push_str(&table(fmt, &["i", "j", "stable_from_n"], &rows));
    let _ = writeln!(out, "stabilized: {}", rep.stabilized);
    out
}

pub fn render_weyl_scan(rep: &WeylScanReport, fmt: Format) -> String {
    let mut rows = Vec::new();
    for (n, dims) in &rep.per_n {
        let mut row = vec![n.to_string()];
        row.extend(dims.iter().map(|d| d.to_string()));
        rows.push(row);
    }
    let mut header: Vec<String> = vec!["n".to_string()];
    header.extend((0..=rep.i_max).map(|i| format!("lim^{i}")));
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut out = table(fmt, &header_refs, &rows);
    let _ = writeln!(
        out,
        "thresholds: {}",
        rep.thresholds
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(out, "stabilized: {}", rep.stabilized);
    out
}

pub fn render_sigma_check(bound: usize, det_bound: usize) -> String {
    let mut out = String::new();
    let mut all_ok = true;
    for m1 in 1..bound {
        for m2 in 1..bound {
            if m1 + m2 <= bound {
                let ok = kmstab::shift::verify_composition(m1, m2);
                all_ok &= ok;
                let _ = writeln!(out, "sigma_{m2} . sigma_{m1} = sigma_{}: {ok}", m1 + m2);
            }
        }
    }
    for m in 1..=det_bound {
        let det = kmstab::shift::sigma(m).matrix.det();
        let ok = det == kmstab::linalg::Int::from(1);
        all_ok &= ok;
        let _ = writeln!(out, "det sigma_{m} = {det}: {ok}");
    }
    let s1 = kmstab::shift::sigma(1);
    let sq = s1.matrix.mul(&s1.matrix);
    let minus_id = kmstab::shift::IntMatrix::identity(2).neg();
    let ok = sq == minus_id;
    all_ok &= ok;
    let _ = writeln!(out, "sigma_1^2 = -Id: {ok}");
    let _ = writeln!(out, "all_checks: {all_ok}");
    out
}

