//! Validation report: `key = value` lines, then one `PASS`/`FAIL` line per
//! check, then one summary line per variant and an overall status.

use std::fmt::Write;

use numerov_core::{ScenarioResult, ValidationReport};

use crate::output::fmt12;

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn variant_section(out: &mut String, r: &ValidationReport) {
    let _ = writeln!(out, "[variant {}]", r.label);
    for m in &r.modes {
        let _ = write!(
            out,
            "mode {} energy_eV = {} parity = {}",
            m.mode_index + 1,
            fmt12(m.energy),
            m.parity.name()
        );
        if let Some(q) = m.quantization_rel_error {
            let _ = write!(out, " quantization_rel_error = {}", fmt12(q));
        }
        if let Some(q) = m.quantization_residual {
            let _ = write!(out, " quantization_residual = {}", fmt12(q));
        }
        out.push('\n');
        for (b, j) in m.jumps.iter().enumerate() {
            let _ = writeln!(
                out,
                "jump mode {} barrier {} center_nm = {} g1_right_minus_left = {} g1_left_minus_right = {} g2 = {} abs_residual = {} rel_residual = {}",
                m.mode_index + 1,
                b + 1,
                fmt12(j.barrier_center),
                fmt12(j.g1),
                fmt12(j.left_minus_right()),
                fmt12(j.g2),
                fmt12(j.abs_residual),
                fmt12(j.rel_residual)
            );
        }
    }
    if let Some(f) = &r.first_order {
        let _ = writeln!(
            out,
            "first_order mode {} solved_eV = {} predicted_eV = {} difference_eV = {}",
            f.mode_index + 1,
            fmt12(f.solved),
            fmt12(f.predicted),
            fmt12(f.solved - f.predicted)
        );
    }
    if let Some(s) = &r.spectral_sum {
        let _ = writeln!(
            out,
            "spectral_sum terms = {} partial_sum = {} target = {} gap = {}",
            s.n_terms,
            fmt12(s.partial_sum),
            fmt12(s.target),
            fmt12(s.gap)
        );
    }
    if let (Some(l2), Some(n)) = (r.expansion_l2_error, r.expansion_norm_check) {
        let _ = writeln!(
            out,
            "expansion l2_error = {} norm_check = {}",
            fmt12(l2),
            fmt12(n)
        );
    }
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{} variant={} {} value={} threshold={}",
            status(c.passed),
            r.label,
            c.name,
            fmt12(c.value),
            fmt12(c.threshold)
        );
    }
    let failed = r.failures().count();
    let _ = writeln!(
        out,
        "summary variant={} checks={} failed={} status={}",
        r.label,
        r.checks.len(),
        failed,
        status(failed == 0)
    );
    out.push('\n');
}

pub fn render(result: &ScenarioResult) -> (String, bool) {
    let mut out = String::new();
    let g = &result.grid;
    let _ = writeln!(out, "scenario = {}", result.name);
    let _ = writeln!(out, "grid.x_min_nm = {}", g.x_min());
    let _ = writeln!(out, "grid.x_max_nm = {}", g.x_max());
    let _ = writeln!(out, "grid.n_points = {}", g.n_points());
    let _ = writeln!(out, "grid.dx_nm = {}", fmt12(g.dx()));
    out.push('\n');
    let mut all = true;
    for r in result.reports() {
        variant_section(&mut out, r);
        all &= r.passed();
    }
    let _ = writeln!(out, "overall = {}", status(all));
    (out, all)
}
