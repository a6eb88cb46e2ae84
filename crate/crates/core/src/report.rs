//! Composite reports: game profiles, vertex runs from the three generators,
//! and exact comparisons between runs, each with a JSON and a text form.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::achievable::FamilyAtlas;
use crate::corevert::{
    core_constraints, order_vertices, verify_vertex, vertices_n_minus_1, CoreVariant, OrderRequirement,
    VertexCertificate,
};
use crate::error::{Error, Result};
use crate::io::{certificate_to_value, game_to_value, mobius_to_value, GameForm};
use crate::oracle::{enumerate_vertices, OracleGuard};
use crate::orders::{CompatibilityReport, EnumerationGuard, SubsetOrder};
use crate::rational::format_with_decimal;
use crate::setfn::{additivity_degree, is_infinitely_monotone, is_k_monotone, GameTable, MobiusVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameProfile {
    pub monotone: bool,
    /// `(k, v is k-monotone)` for `k = 2..=n`.
    pub k_monotone: Vec<(usize, bool)>,
    pub infinitely_monotone: bool,
    /// `None` for the zero game.
    pub additivity_degree: Option<usize>,
}

pub fn game_profile(v: &GameTable) -> GameProfile {
    GameProfile {
        monotone: v.is_monotone(),
        k_monotone: (2..=v.n()).map(|k| (k, is_k_monotone(v, k))).collect(),
        infinitely_monotone: is_infinitely_monotone(v),
        additivity_degree: additivity_degree(&v.mobius()).ok(),
    }
}

pub fn profile_to_value(v: &GameTable, p: &GameProfile) -> Value {
    let k_monotone: Map<String, Value> = p
        .k_monotone
        .iter()
        .map(|(k, b)| (k.to_string(), Value::Bool(*b)))
        .collect();
    json!({
        "game": game_to_value(v, GameForm::Game),
        "mobius": game_to_value(v, GameForm::Mobius),
        "monotone": p.monotone,
        "k_monotone": k_monotone,
        "infinitely_monotone": p.infinitely_monotone,
        "additivity_degree": p.additivity_degree,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_profile(v: &GameTable, p: &GameProfile) -> String {
    let m = v.mobius();
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", v.n());
    let _ = writeln!(out, "{:<12} {:<24} m", "coalition", "v");
    for s in v.ground().nonempty_subsets() {
        let _ = writeln!(
            out,
            "{:<12} {:<24} {}",
            s.to_string(),
            format_with_decimal(v.value(s)),
            format_with_decimal(m.coeff(s))
        );
    }
    let _ = writeln!(out, "monotone: {}", yes_no(p.monotone));
    for (k, b) in &p.k_monotone {
        let _ = writeln!(out, "{k}-monotone: {}", yes_no(*b));
    }
    let _ = writeln!(out, "infinitely monotone: {}", yes_no(p.infinitely_monotone));
    match p.additivity_degree {
        Some(d) => {
            let _ = writeln!(out, "additivity degree: {d}");
        }
        None => {
            let _ = writeln!(out, "additivity degree: undefined (zero game)");
        }
    }
    out
}

pub fn classification_to_value(order: &SubsetOrder, r: &CompatibilityReport) -> Value {
    json!({
        "sequence": order.sequence().iter().map(|s| s.key()).collect::<Vec<_>>(),
        "compatible": r.compatible,
        "subset_compatible": r.subset_compatible,
        "strongly_compatible": r.strongly_compatible,
    })
}

pub fn render_classification(order: &SubsetOrder, r: &CompatibilityReport) -> String {
    let seq: Vec<String> = order.sequence().iter().map(|s| s.key()).collect();
    format!(
        "{}  compatible={} subset_compatible={} strongly_compatible={}",
        seq.join(" < "),
        yes_no(r.compatible),
        yes_no(r.subset_compatible),
        yes_no(r.strongly_compatible)
    )
}

pub fn render_atlas(atlas: &FamilyAtlas) -> String {
    let mut out = String::new();
    for f in atlas.families() {
        let members: Vec<String> = f.members().iter().map(|s| s.to_string()).collect();
        let tail = match (f.is_empty(), f.top()) {
            (true, _) => String::new(),
            (false, Some(t)) => format!("  top {t}"),
            (false, None) => "  not a lattice".to_string(),
        };
        let _ = writeln!(out, "  A({}) = {{{}}}{tail}", f.center(), members.join(", "));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexMode {
    /// Points induced by (strongly) compatible orders.
    Orders,
    /// Closed form for `k = n - 1`.
    TheoremNMinus1,
    /// Brute-force enumeration.
    Oracle,
}

impl VertexMode {
    pub fn name(self) -> &'static str {
        match self {
            VertexMode::Orders => "orders",
            VertexMode::TheoremNMinus1 => "theorem-n-1",
            VertexMode::Oracle => "oracle",
        }
    }
}

impl FromStr for VertexMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orders" => Ok(VertexMode::Orders),
            "theorem-n-1" => Ok(VertexMode::TheoremNMinus1),
            "oracle" => Ok(VertexMode::Oracle),
            other => Err(Error::input(format!(
                "unknown mode {other:?} (expected orders, theorem-n-1 or oracle)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunLimits {
    /// Maximum number of orders scanned in `orders` mode.
    pub cap: Option<usize>,
    pub orders: EnumerationGuard,
    pub oracle: OracleGuard,
}

#[derive(Debug, Clone)]
pub struct VertexRun {
    pub mode: VertexMode,
    pub k: usize,
    pub variant: CoreVariant,
    /// Certificates against the requested core, sorted by point.
    pub certificates: Vec<VertexCertificate>,
    /// Extreme rays; only the oracle looks for them.
    pub rays: Vec<MobiusVector>,
    /// Known only in oracle mode.
    pub bounded: Option<bool>,
    pub notes: Vec<String>,
}

impl VertexRun {
    /// Points whose certificate confirms vertexhood.
    pub fn vertex_points(&self) -> BTreeSet<MobiusVector> {
        self.certificates
            .iter()
            .filter(|c| c.is_vertex)
            .map(|c| c.point.clone())
            .collect()
    }
}

/// Runs one generator and certifies every point against the core of the
/// requested variant.
pub fn run_vertices(
    v: &GameTable,
    k: usize,
    mode: VertexMode,
    variant: CoreVariant,
    limits: RunLimits,
) -> Result<VertexRun> {
    let n = v.n();
    if k < 1 || k > n {
        return Err(Error::domain(format!("k must lie in 1..={n}, got {k}")));
    }
    let mut notes = Vec::new();
    let mut rays = Vec::new();
    let mut bounded = None;
    let mut certificates = match mode {
        VertexMode::Orders => {
            let require = match variant {
                CoreVariant::Infinite => OrderRequirement::Compatible,
                _ => OrderRequirement::Strong,
            };
            let report = order_vertices(v, k, require, limits.cap, limits.orders)?;
            if !report.guaranteed {
                notes.push(format!("v is not {}-monotone; vertexhood is not guaranteed", k + 1));
            }
            if report.truncated {
                notes.push(format!(
                    "order enumeration truncated after {} orders",
                    report.orders_scanned
                ));
            }
            notes.push(format!("{} orders scanned", report.orders_scanned));
            report
                .vertices
                .into_iter()
                .map(|x| {
                    if x.certificate.variant == variant {
                        Ok(x.certificate)
                    } else {
                        verify_vertex(&x.certificate.point, v, k, variant)
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        VertexMode::TheoremNMinus1 => {
            if n < 2 || k != n - 1 {
                return Err(Error::domain(format!(
                    "theorem-n-1 mode needs k = n - 1 = {}, got {k}",
                    n.saturating_sub(1)
                )));
            }
            if variant != CoreVariant::Plain {
                return Err(Error::domain("theorem-n-1 mode describes the plain core only"));
            }
            vertices_n_minus_1(v)?.into_iter().map(|x| x.certificate).collect()
        }
        VertexMode::Oracle => {
            let system = core_constraints(v, k, variant)?;
            let summary = enumerate_vertices(&system, limits.oracle)?;
            if !summary.feasible {
                notes.push("the core is empty".to_string());
            }
            bounded = Some(summary.bounded);
            for d in &summary.rays {
                rays.push(
                    system
                        .point_of(d)
                        .ok_or_else(|| Error::internal("ray outside the variable space"))?,
                );
            }
            summary
                .vertices
                .iter()
                .map(|x| {
                    let point = system
                        .point_of(&x.point)
                        .ok_or_else(|| Error::internal("vertex outside the variable space"))?;
                    verify_vertex(&point, v, k, variant)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    certificates.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(VertexRun {
        mode,
        k,
        variant,
        certificates,
        rays,
        bounded,
        notes,
    })
}

pub fn run_to_value(run: &VertexRun) -> Value {
    let mut out = json!({
        "mode": run.mode.name(),
        "k": run.k,
        "variant": run.variant.name(),
        "vertices": run.certificates.iter().map(certificate_to_value).collect::<Vec<_>>(),
    });
    if let Some(b) = run.bounded {
        out["bounded"] = Value::Bool(b);
        out["rays"] = Value::Array(run.rays.iter().map(|r| mobius_to_value(r, run.k)).collect());
    }
    if !run.notes.is_empty() {
        out["notes"] = json!(run.notes);
    }
    out
}

fn render_point(out: &mut String, m: &MobiusVector, k: usize) {
    for s in m.ground().bounded_subsets(k) {
        let q = m.coeff(s);
        if !num_traits::Zero::is_zero(q) {
            let _ = writeln!(out, "    m({}) = {}", s.key(), format_with_decimal(q));
        }
    }
}

pub fn render_run(run: &VertexRun) -> String {
    let mut out = String::new();
    let certified = run.certificates.iter().filter(|c| c.is_vertex).count();
    let _ = writeln!(
        out,
        "mode {}, k = {}, {} core: {} points, {} certified vertices",
        run.mode.name(),
        run.k,
        run.variant,
        run.certificates.len(),
        certified
    );
    for note in &run.notes {
        let _ = writeln!(out, "note: {note}");
    }
    for (i, c) in run.certificates.iter().enumerate() {
        let status = if c.is_vertex {
            "vertex".to_string()
        } else if !c.feasible {
            format!("infeasible ({})", c.violated.map(|t| t.to_string()).unwrap_or_default())
        } else {
            "not a vertex".to_string()
        };
        let _ = writeln!(out, "point {}: {status}, tight rank {}/{}", i + 1, c.rank, c.num_vars);
        render_point(&mut out, &c.point, run.k);
    }
    if let Some(b) = run.bounded {
        let _ = writeln!(out, "bounded: {}", yes_no(b));
        for (i, r) in run.rays.iter().enumerate() {
            let _ = writeln!(out, "ray {}:", i + 1);
            render_point(&mut out, r, run.k);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexComparison {
    pub common: Vec<MobiusVector>,
    pub only_first: Vec<MobiusVector>,
    pub only_second: Vec<MobiusVector>,
}

impl VertexComparison {
    pub fn identical(&self) -> bool {
        self.only_first.is_empty() && self.only_second.is_empty()
    }
}

/// Exact comparison of the certified vertex sets of two runs.
pub fn compare_runs(a: &VertexRun, b: &VertexRun) -> VertexComparison {
    let (pa, pb) = (a.vertex_points(), b.vertex_points());
    VertexComparison {
        common: pa.intersection(&pb).cloned().collect(),
        only_first: pa.difference(&pb).cloned().collect(),
        only_second: pb.difference(&pa).cloned().collect(),
    }
}

pub fn comparison_to_value(a: &VertexRun, b: &VertexRun, cmp: &VertexComparison) -> Value {
    let points = |list: &[MobiusVector]| list.iter().map(|m| mobius_to_value(m, a.k)).collect::<Vec<_>>();
    json!({
        "identical": cmp.identical(),
        "common": cmp.common.len(),
        "only": {
            a.mode.name(): points(&cmp.only_first),
            b.mode.name(): points(&cmp.only_second),
        },
        "runs": [run_to_value(a), run_to_value(b)],
    })
}

pub fn render_comparison(a: &VertexRun, b: &VertexRun, cmp: &VertexComparison) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} vs {}: {} common vertices, {} only in {}, {} only in {}",
        a.mode.name(),
        b.mode.name(),
        cmp.common.len(),
        cmp.only_first.len(),
        a.mode.name(),
        cmp.only_second.len(),
        b.mode.name()
    );
    for (label, list) in [(a.mode.name(), &cmp.only_first), (b.mode.name(), &cmp.only_second)] {
        for m in list.iter() {
            let _ = writeln!(out, "only in {label}:");
            render_point(&mut out, m, a.k);
        }
    }
    let _ = writeln!(out, "{}", if cmp.identical() { "identical" } else { "different" });
    out
}
