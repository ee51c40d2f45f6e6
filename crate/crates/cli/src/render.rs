//! Plain-text and CSV renderings of the reports.

use std::io::{self, Write};

use tnomial::degree::{ConjectureReport, Verdict};
use tnomial::FactorSpec;

use crate::{CountOutput, EstimateOutput, LeastOutput};

fn factors_line(out: &mut impl Write, factors: &[FactorSpec]) -> io::Result<()> {
    let list: Vec<String> = factors
        .iter()
        .map(|f| format!("{} (degree {}, e = {})", f.poly, f.degree, f.exponent))
        .collect();
    writeln!(out, "factors: {}", list.join(" * "))
}

fn or_dash<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn count_text(out: &mut impl Write, c: &CountOutput, max_e: u64) -> io::Result<()> {
    let r = &c.report;
    factors_line(out, &r.factors)?;
    writeln!(out, "product order: {}", c.product_exponent)?;
    writeln!(out, "weight: {}", r.weight)?;
    writeln!(out, "exact count: {}", r.exact_count)?;
    writeln!(out, "lower bound: {}", r.lower_bound)?;
    writeln!(out, "route: {}", r.route.as_str())?;
    match (c.oracle, c.agree) {
        (Some(n), Some(agree)) => {
            writeln!(out, "oracle: {n} ({})", if agree { "agrees" } else { "DISAGREES" })
        }
        _ => writeln!(out, "oracle: skipped (order above --max-e {max_e})"),
    }
}

pub fn count_csv_row(c: &CountOutput) -> String {
    format!("{};{};{}", c.report.csv_row(), or_dash(c.oracle), or_dash(c.agree))
}

pub fn least_text(out: &mut impl Write, l: &LeastOutput, csv: bool) -> io::Result<()> {
    let line = |m: &tnomial::Tnomial| {
        if csv {
            m.to_csv()
        } else {
            format!("{m} (degree {})", m.degree())
        }
    };
    match &l.ties {
        Some(ties) => {
            for m in ties {
                writeln!(out, "{}", line(m))?;
            }
            Ok(())
        }
        None => writeln!(out, "{}", line(&l.multiple)),
    }
}

pub fn estimate_text(out: &mut impl Write, e: &EstimateOutput) -> io::Result<()> {
    let r = &e.report;
    factors_line(out, &e.factors)?;
    writeln!(out, "weight: {}", r.weight)?;
    writeln!(out, "exact count: {}", r.exact_n)?;
    writeln!(out, "product order: {}", r.product_exponent)?;
    writeln!(out, "total degree: {}", r.total_degree)?;
    writeln!(out, "crude c: {:.4}", r.crude_c)?;
    writeln!(out, "refined c: {}", r.refined_c)?;
    writeln!(out, "observed least degree: {}", or_dash(r.observed_least_degree))
}

pub fn conjecture_text(out: &mut impl Write, r: &ConjectureReport) -> io::Result<()> {
    factors_line(out, &r.factors)?;
    writeln!(out, "weight: {} (product weight {})", r.weight, r.product_weight)?;
    writeln!(
        out,
        "least multiple: {} (degree {})",
        r.least_multiple,
        r.least_multiple.degree()
    )?;
    for (f, row) in r.factors.iter().zip(&r.residue_matrix) {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(out, "residues mod {}: {}", f.exponent, cells.join(" "))?;
    }
    for c in &r.collisions {
        writeln!(
            out,
            "collision: I{} = I{} = {} mod {} (factor {})",
            c.v, c.w, c.residue, c.modulus, c.factor
        )?;
    }
    for (f, v) in &r.zero_residues {
        writeln!(out, "zero residue: I{v} mod e of factor {f}")?;
    }
    let h = &r.hypotheses;
    writeln!(
        out,
        "hypotheses: 4 <= t < weight: {}; all factor counts positive: {} {:?}",
        h.weight_in_range, h.counts_positive, h.factor_counts
    )?;
    let verdict = match r.verdict {
        Verdict::ConjectureHolds => "conjecture holds",
        Verdict::Counterexample => "counterexample",
        Verdict::NotApplicable => "not applicable",
    };
    writeln!(out, "verdict: {verdict}")
}
