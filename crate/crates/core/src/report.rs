//! Canonical JSON and markdown rendering.
//!
//! JSON output is `serde_json` pretty printing of the report structs, whose
//! field order is fixed by declaration order. Every number is an integer, so
//! the bytes depend only on the inputs (seed, prime, parameters).

use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::{CohomologyTable, Provenance};
use crate::moduli::WildnessReport;
use crate::restriction::{AcmVerdict, Justification, VanishingChaseTrace};

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn provenance_mark(p: Provenance) -> &'static str {
    match p {
        Provenance::ExactRank => "",
        Provenance::CertifiedVanishing => "*",
        Provenance::ClosedForm => "'",
        Provenance::EulerCharacteristic => "^",
    }
}

/// Rows `h^i`, columns `t`. Marks: `*` certified vanishing, `'` closed form,
/// `^` forced by the Euler characteristic; unmarked cells are exact ranks.
pub fn table_markdown(table: &CohomologyTable) -> String {
    let mut out = String::new();
    out.push_str("| i \\ t |");
    for t in table.twists() {
        let _ = write!(out, " {t} |");
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in table.twists() {
        out.push_str("---|");
    }
    out.push('\n');
    for i in 0..=table.dim {
        let _ = write!(out, "| h^{i} |");
        for t in table.twists() {
            let v = table.get(i, t).unwrap_or(0);
            let mark = table.provenance_of(i, t).map(provenance_mark).unwrap_or("");
            let _ = write!(out, " {v}{mark} |");
        }
        out.push('\n');
    }
    if let Some(top) = &table.top_cokernel {
        if top.iter().any(|&c| c != 0) {
            out.push_str("| coker H^top |");
            for c in top {
                let _ = write!(out, " {c} |");
            }
            out.push('\n');
        }
    }
    out
}

fn justification_text(j: &Option<Justification>) -> &'static str {
    match j {
        Some(Justification::IntermediateVanishing) => "intermediate vanishing on P^n",
        Some(Justification::FirstCohomologyAwayFromExceptions) => "h^1 = 0 away from t = -1, -2",
        None => "unjustified",
    }
}

pub fn chase_markdown(trace: &VanishingChaseTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "- h^{}(E|_X(t)) = 0:", trace.target_index);
    for step in &trace.chain {
        let _ = writeln!(
            out,
            "  - level {}: H^{} at offsets {:?} ({})",
            step.level,
            step.index,
            step.twist_offsets,
            justification_text(&step.justification)
        );
    }
    out
}

pub fn verdict_text(v: &AcmVerdict) -> String {
    match v {
        AcmVerdict::Acm => "ACM".into(),
        AcmVerdict::NotAcm { witnesses } => {
            let cells: Vec<String> = witnesses
                .iter()
                .map(|w| format!("h^{}(E(s*{})) = {}", w.index, w.t, w.value))
                .collect();
            format!("not ACM: {}", cells.join(", "))
        }
        AcmVerdict::Inconclusive { missing, unbounded } => {
            if *unbounded {
                "inconclusive: no bound on exceptional twists".into()
            } else {
                format!("inconclusive: twists {missing:?} outside the window")
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn wildness_markdown(r: &WildnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Wildness certificate\n");
    let _ = writeln!(out, "- X: {}", r.variety_summary);
    let _ = writeln!(out, "- embedding: O_X({}) into P^{}", r.s, r.ambient_dim_for_s);
    let _ = writeln!(
        out,
        "- bundles: rank {} (a = {}), family dimension {}",
        r.rank, r.a, r.family_dimension
    );
    let _ = writeln!(out, "- prime {}, seed {}, version {}", r.prime, r.seed, r.tool_version);
    let _ = writeln!(out, "\n## Checks\n");
    let _ = writeln!(out, "| check | result |\n|---|---|");
    let c = &r.checks;
    for (name, ok) in [
        ("genericity", c.genericity),
        ("H^0(phi(1)) iso", c.h0_iso),
        ("simplicity", c.simplicity),
        ("vanishing certificate", c.vanishing_certificate),
        ("ACM w.r.t. O_X(s)", c.acm_wrt_s),
    ] {
        let _ = writeln!(out, "| {name} | {} |", yes(ok));
    }
    let _ = writeln!(
        out,
        "\nstabilizer dimension {} ({} equations, {} unknowns), Kac value {}",
        r.stabilizer.stab_dimension, r.stabilizer.equations, r.stabilizer.unknowns, r.stabilizer.kac_value
    );
    let _ = writeln!(out, "ACM verdict: {}", verdict_text(&r.acm));
    let _ = writeln!(out, "\n## Vanishing chase\n");
    for tr in &r.vanishing {
        out.push_str(&chase_markdown(tr));
    }
    if let Some(table) = &r.restricted_table {
        let _ = writeln!(out, "\n## Cohomology of E restricted to X\n");
        out.push_str(&table_markdown(table));
    }
    let _ = writeln!(
        out,
        "\n**verdict: {}**",
        if r.verdict { "wild (certified)" } else { "not certified" }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::closed_form_table;

    #[test]
    fn table_layout() {
        let t = closed_form_table(2, 1, -2, 1);
        let md = table_markdown(&t);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| i \\ t | -2 | -1 | 0 | 1 |");
        assert_eq!(lines.len(), 2 + 3);
        assert!(lines[3].starts_with("| h^1 | 2' | 2' | 0' |"));
    }

    #[test]
    fn json_is_stable() {
        let t = closed_form_table(3, 2, -1, 2);
        let a = to_canonical_json(&t);
        assert_eq!(a, to_canonical_json(&t));
        assert!(a.ends_with("}\n"));
        let back: CohomologyTable = serde_json::from_str(&a).unwrap();
        assert_eq!(back, t);
    }
}
