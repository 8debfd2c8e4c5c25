//! Human-readable and canonical JSON renderings of a report.

use std::fmt::Write as _;
use std::path::Path;

use discernlab_core::report::{Branch, PairResult, SpectrumEvidence, Witness};
use discernlab_core::{DiscernibilityReport, Relation};

use crate::config::OutputFormat;
use crate::error::CliError;

pub fn load_report(path: &Path) -> Result<DiscernibilityReport, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read report {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("corrupt report {}: {e}", path.display())))
}

/// Reads the report at `path` and renders it.
pub fn render_report(path: &Path, format: OutputFormat) -> Result<String, CliError> {
    let report = load_report(path)?;
    render(&report, format)
}

pub fn render(report: &DiscernibilityReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Markdown => Ok(to_markdown(report)),
    }
}

pub fn to_json(report: &DiscernibilityReport) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn unit(power: i32) -> &'static str {
    match power {
        1 => "ħ",
        2 => "ħ²",
        _ => "",
    }
}

fn number(x: f64) -> String {
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 {
        format!("{}", rounded as i64)
    } else {
        format!("{x:.10}")
    }
}

fn complex(re: f64, im: f64) -> String {
    match (re.abs() < 1e-12, im.abs() < 1e-12) {
        (_, true) => number(re),
        (true, false) if im == -1.0 => "−i".into(),
        (true, false) if im == 1.0 => "i".into(),
        (true, false) => format!("{}i", number(im)),
        (false, false) => format!(
            "{} {} {}i",
            number(re),
            if im < 0.0 { "−" } else { "+" },
            number(im.abs())
        ),
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "",
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::ScalarIdentity => "scalar identity",
        Branch::NotScalarIdentity => "not a scalar identity",
        Branch::PropertyMatches => "property matches",
        Branch::PropertyDiffers => "property differs",
        Branch::NoProperty => "no property",
    }
}

fn witness_text(w: &Witness, power: i32) -> String {
    let mut out = w.kind.clone();
    if let Some(i) = w.index {
        let _ = write!(out, " #{i}");
    }
    if let Some(seed) = w.seed {
        let _ = write!(out, " (seed {seed})");
    }
    let _ = write!(out, ": {}", branch_name(w.branch));
    if let Some(v) = &w.value {
        let _ = write!(out, ", value {} {}", complex(v.re, v.im), unit(power));
    }
    out
}

fn pair_row(p: &PairResult, power: i32) -> String {
    let deviation = p.operator_deviation.map(|d| format!("{d:.1e}")).unwrap_or_default();
    let witness = p.witness.as_ref().map(|w| witness_text(w, power)).unwrap_or_default();
    format!(
        "| {} | {} | {} | {} | {} | {} | {} | {}/{} | {} |",
        p.a,
        p.b,
        yes_no(p.reflexive),
        yes_no(p.off_diagonal_fails),
        yes_no(p.symmetric),
        if p.operator_identity { "yes" } else { "no" },
        deviation,
        p.samples.holding,
        p.samples.checked,
        witness
    )
}

fn spectrum_section(out: &mut String, relation: Relation, s: &SpectrumEvidence) {
    let u = unit(s.unit_power);
    let operator = match relation {
        Relation::T => "(𝐒_a + 𝐒_b)²",
        Relation::C => "[P_a, Q_b]",
    };
    let _ = writeln!(out, "## Spectrum\n");
    let _ = writeln!(out, "| quantity | value |");
    let _ = writeln!(out, "|---|---|");
    let _ = writeln!(out, "| defining operator | {operator} |");
    let _ = writeln!(out, "| target value | {} {u} |", complex(s.target.re, s.target.im));
    let _ = writeln!(
        out,
        "| reflexive eigenvalue (a = b) | {} {u} |",
        complex(s.reflexive_value.re, s.reflexive_value.im)
    );
    let levels: Vec<String> = s
        .off_diagonal_levels
        .iter()
        .map(|l| match l.multiplicity {
            Some(m) => format!("{} {u} (×{m})", number(l.value)),
            None => format!("{} {u}", number(l.value)),
        })
        .collect();
    let _ = writeln!(out, "| spectrum for a ≠ b | {{{}}} |", levels.join(", "));
    if let Some(max) = s.off_diagonal_max {
        let _ = writeln!(out, "| largest eigenvalue for a ≠ b | {} {u} |", number(max));
    }
    if let Some(gap) = s.exact_gap {
        let _ = writeln!(out, "| exact gap to target | {gap} {u} |");
    }
    out.push('\n');
}

pub fn to_markdown(r: &DiscernibilityReport) -> String {
    let mut out = String::new();
    let power = r.spectrum.as_ref().map_or(0, |s| s.unit_power);
    let _ = writeln!(out, "# Discernibility report: relation {}\n", r.relation);
    let _ = writeln!(out, "**Verdict:** `{}`\n", r.verdict);
    let modes: Vec<String> = r
        .mode
        .iter()
        .map(|m| {
            serde_json::to_value(m)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        })
        .collect();
    let _ = writeln!(out, "| setting | value |");
    let _ = writeln!(out, "|---|---|");
    let _ = writeln!(out, "| particles | {} |", r.n_particles);
    let _ = writeln!(out, "| 2s | {} |", r.two_s);
    let _ = writeln!(out, "| sector | {} |", r.sector);
    let _ = writeln!(out, "| modes | {} |", modes.join(", "));
    let _ = writeln!(
        out,
        "| samples | {} pure, {} mixed (rank {}) |",
        r.samples.pure, r.samples.mixed, r.samples.mixed_rank
    );
    if let Some(reason) = &r.samples.skipped {
        let _ = writeln!(out, "| sampling skipped | {reason} |");
    }
    let _ = writeln!(out, "| seed | {} |", r.seed);
    let _ = writeln!(
        out,
        "| tolerances | abs {:e}, rel {:e}, level grouping {:e} |",
        r.tolerances.abs, r.tolerances.rel, r.tolerances.level_grouping
    );
    let _ = writeln!(
        out,
        "| permutation invariant | {} |",
        yes_no(Some(r.permutation_invariant))
    );
    if let Some(ts) = &r.timestamp {
        let _ = writeln!(out, "| timestamp | {ts} |");
    }
    out.push('\n');

    if let Some(s) = &r.spectrum {
        spectrum_section(&mut out, r.relation, s);
    }

    let _ = writeln!(out, "## Pairs\n");
    let _ = writeln!(
        out,
        "| a | b | reflexive | fails | symmetric | operator identity | deviation | holding/checked | witness |"
    );
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|");
    for p in &r.pairs {
        let _ = writeln!(out, "{}", pair_row(p, power));
    }
    out
}
