//! Deterministic text output: float formatting, CSV tables and the SVG
//! rendering of puncture-exponent lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::modes::{Family, NormClass, SpectrumEntry, TowerPoint};

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest representation of `x` after rounding to 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 || (1e-5..1e16).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map(|x| Value::from(round12(x))).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float rounded to 12 significant digits. Non-finite
/// floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
    serde_json::to_string_pretty(&round_value(v)).map_err(|e| Error::Internal(e.to_string()))
}

pub fn towers_csv(rows: &[TowerPoint]) -> String {
    let mut out = String::from("q,m,family,gamma,class\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", fmt_float(r.q), r.m, r.family.name(), fmt_float(r.gamma), r.class.name());
    }
    out
}

pub fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("sector,m,family,n,lambda,gamma,class\n");
    for e in entries {
        let d = &e.descriptor;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            d.config.sector.index(),
            d.m,
            d.family.map(Family::name).unwrap_or("none"),
            d.n,
            fmt_float(e.eigenvalue),
            fmt_float(e.gamma),
            e.norm_class.name()
        );
    }
    out
}

fn dash(class: NormClass) -> &'static str {
    match class {
        NormClass::Regular | NormClass::Section => "",
        NormClass::SingularNormalizable => " stroke-dasharray=\"8 5\"",
        NormClass::NonNormalizable => " stroke-dasharray=\"2 4\"",
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// Gamma-versus-q plot: one polyline per `(m, family)`, split wherever the
/// class changes; solid for regular, dashed for singular normalizable,
/// dotted for non-normalizable.
pub fn towers_svg(rows: &[TowerPoint], title: &str) -> String {
    let (w, h) = (820.0, 520.0);
    let (left, right, top, bottom) = (70.0, 190.0, 40.0, 60.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let q_lo = rows.iter().map(|r| r.q).fold(f64::INFINITY, f64::min);
    let q_hi = rows.iter().map(|r| r.q).fold(f64::NEG_INFINITY, f64::max);
    let (q_lo, q_hi) = if q_hi > q_lo { (q_lo, q_hi) } else { (q_lo - 1.0, q_lo + 1.0) };
    let (g_lo, g_hi) = (-3.0, 3.0);
    let px = |q: f64| left + (q - q_lo) / (q_hi - q_lo) * pw;
    let py = |g: f64| top + (g_hi - g.clamp(g_lo - 0.5, g_hi + 0.5)) / (g_hi - g_lo) * ph;

    let mut lines: BTreeMap<(i64, Family), Vec<&TowerPoint>> = BTreeMap::new();
    for r in rows {
        lines.entry((r.m, r.family)).or_default().push(r);
    }
    let mut s = String::new();
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">");
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(s, "<defs><clipPath id=\"plot\"><rect x=\"{left}\" y=\"{top}\" width=\"{pw}\" height=\"{ph}\"/></clipPath></defs>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{title}</text>", left + pw / 2.0);
    // axes and ticks
    let _ = writeln!(s, "<rect x=\"{left}\" y=\"{top}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>");
    for g in [-3, -2, -1, 0, 1, 2, 3] {
        let y = py(g as f64);
        let _ = writeln!(s, "<line x1=\"{left}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>", left + pw);
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{g}</text>", left - 8.0, y + 4.0);
    }
    let q_ticks = ((q_hi - q_lo).ceil() as i64).clamp(1, 10);
    for i in 0..=q_ticks {
        let q = q_lo + (q_hi - q_lo) * i as f64 / q_ticks as f64;
        let x = px(q);
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>", top + ph + 18.0, fmt_float(round12(q * 1e6) / 1e6));
    }
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">q</text>", left + pw / 2.0, h - 16.0);
    let _ = writeln!(s, "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {:.2})\" text-anchor=\"middle\">gamma</text>", top + ph / 2.0, top + ph / 2.0);

    let _ = writeln!(s, "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.6\">");
    for ((m, family), pts) in &lines {
        let color = PALETTE[(m.rem_euclid(PALETTE.len() as i64)) as usize];
        let mut i = 0;
        while i + 1 < pts.len() {
            let class = pts[i].class;
            let mut j = i + 1;
            while j + 1 < pts.len() && pts[j].class == class {
                j += 1;
            }
            let coords: Vec<String> = pts[i..=j].iter().map(|p| format!("{:.2},{:.2}", px(p.q), py(p.gamma))).collect();
            let _ = writeln!(
                s,
                "<polyline points=\"{}\" stroke=\"{color}\"{}><title>m={m} {}</title></polyline>",
                coords.join(" "),
                dash(class),
                family.name()
            );
            i = j;
        }
    }
    let _ = writeln!(s, "</g>");

    // legend
    let lx = left + pw + 20.0;
    let mut ly = top + 10.0;
    for (label, class) in [
        ("regular", NormClass::Regular),
        ("singular normalizable", NormClass::SingularNormalizable),
        ("non-normalizable", NormClass::NonNormalizable),
    ] {
        let _ = writeln!(s, "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"black\" stroke-width=\"1.6\"{}/>", lx + 30.0, dash(class));
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>", lx + 38.0, ly + 4.0);
        ly += 20.0;
    }
    let ms: Vec<i64> = lines.keys().map(|k| k.0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    ly += 10.0;
    for m in ms {
        let color = PALETTE[(m.rem_euclid(PALETTE.len() as i64)) as usize];
        let _ = writeln!(s, "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"3\"/>", lx + 30.0);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">m = {m}</text>", lx + 38.0, ly + 4.0);
        ly += 18.0;
    }
    s.push_str("</svg>\n");
    s
}
