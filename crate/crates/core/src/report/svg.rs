//! Minimal line plots of blend sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::analysis::{Group, GroupAssignment};
use crate::blend::BlendSweep;
use crate::country::MemberState;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlotError {
    #[error("nothing to plot: the sweep is empty")]
    EmptySweep,
}

/// Budgets along `sweep` for `countries`, one polyline each.
pub fn sweep_plot(sweep: &BlendSweep, countries: &[MemberState], title: &str) -> Result<String, PlotError> {
    if sweep.is_empty() || countries.is_empty() {
        return Err(PlotError::EmptySweep);
    }
    let xs: Vec<f64> = sweep.params().iter().map(|p| p.w).collect();
    let traces: Vec<(MemberState, Vec<f64>)> = countries.iter().map(|&m| (m, sweep.trace(m))).collect();
    let (lo, hi) = traces
        .iter()
        .flat_map(|(_, t)| t.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let px = |x: f64| PAD + x * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - lo) / (hi - lo) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for (v, label) in [(lo, lo), (hi, hi)] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{label:.0}</text>"#, PAD - 4.0, py(v) + 4.0);
    }
    for x in [0.0, 0.5, 1.0] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x:.1}</text>"#, px(x), H - PAD + 16.0);
    }
    for (i, (m, trace)) in traces.iter().enumerate() {
        let hue = (i * 360 / traces.len().max(1)) % 360;
        let pts: Vec<String> = xs
            .iter()
            .zip(trace)
            .map(|(&x, &y)| format!("{:.1},{:.1}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="hsl({hue},70%,40%)" stroke-width="1.5"><title>{}</title></polyline>"#,
            pts.join(" "),
            m.code()
        );
        if let (Some(&x), Some(&y)) = (xs.last(), trace.last()) {
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, px(x) + 3.0, py(y) + 3.0, m.code());
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// One plot per non-empty group, named by the group's short label.
pub fn group_plots(
    diagonal: &BlendSweep,
    groups: &BTreeMap<MemberState, GroupAssignment>,
) -> Result<Vec<(Group, String)>, PlotError> {
    let mut by_group: BTreeMap<Group, Vec<MemberState>> = BTreeMap::new();
    for (m, g) in groups {
        by_group.entry(g.group).or_default().push(*m);
    }
    by_group
        .into_iter()
        .map(|(g, members)| Ok((g, sweep_plot(diagonal, &members, &format!("{g}: budget along t = w = z"))?)))
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
