//! Structured analysis reports: every depth parameter, circuit/Graver norm
//! and complexity measure of a matrix, JSON- and text-rendered. Budget
//! overruns degrade to partial reports with per-section error notes.

use serde_json::{json, Value};

use crate::depth::{
    cdd_depth, contraction_depth, csdd_depth, cstar_depth, deletion_depth, DepthReport,
    Exactness, SubspaceConfig,
};
use crate::graph::{dual_graph, incidence_graph, primal_graph, tree_depth, Graph, TreeDepth};
use crate::graver::{graver_basis, matrix_circuits};
use crate::matrix::{entry_complexity, RatMatrix};
use crate::matroid::{FieldSpec, LinearMatroid};

pub const SCHEMA: &str = "graver-forge/1";

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub field: FieldSpec,
    pub budget_depth: Option<usize>,
    pub graver_box: Option<u64>,
    pub subspace: SubspaceConfig,
    /// Include decomposition-tree witnesses in the JSON output.
    pub witnesses: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            field: FieldSpec::Rationals,
            budget_depth: None,
            graver_box: None,
            subspace: SubspaceConfig::default(),
            witnesses: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub json: Value,
    /// Some section hit a search budget and is reported partially.
    pub budget_hit: bool,
}

fn graph_section(g: &Graph, budget: Option<usize>, budget_hit: &mut bool) -> Value {
    if g.n() > 24 {
        *budget_hit = true;
        return json!({"error": "graph too large for exact tree-depth"});
    }
    match tree_depth(g, budget) {
        TreeDepth::Exact(v, _) => json!(v),
        TreeDepth::ExceedsBudget(b) => {
            *budget_hit = true;
            json!({"error": format!("exceeds depth budget {b}")})
        }
    }
}

fn depth_section(
    rep: Result<DepthReport, crate::depth::DepthError>,
    witnesses: bool,
    budget_hit: &mut bool,
) -> Value {
    match rep {
        Ok(r) => {
            let mut v = json!({
                "value": r.value,
                "exact": r.exactness == Exactness::Exact,
            });
            if let Some(note) = &r.note {
                v["note"] = json!(note);
            }
            if witnesses {
                v["witness"] = r.witness.to_json();
            }
            v
        }
        Err(e) => {
            *budget_hit = true;
            json!({"error": e.to_string()})
        }
    }
}

/// Full analysis of a matrix: derived-graph tree-depths, matroid depth
/// parameters of its column matroid, circuit and Graver norms, and entry
/// complexity.
pub fn analyze_matrix(a: &RatMatrix, cfg: &AnalysisConfig) -> AnalysisReport {
    let mut budget_hit = false;
    let mut root = json!({
        "schema": SCHEMA,
        "kind": "analysis",
        "rows": a.rows(),
        "cols": a.cols(),
        "rank": a.rank(),
        "entry_complexity": entry_complexity(a),
    });

    root["tree_depth"] = json!({
        "primal": graph_section(&primal_graph(a), cfg.budget_depth, &mut budget_hit),
        "dual": graph_section(&dual_graph(a), cfg.budget_depth, &mut budget_hit),
        "incidence": graph_section(&incidence_graph(a), cfg.budget_depth, &mut budget_hit),
    });

    match LinearMatroid::matroid_of(a, cfg.field) {
        Ok(m) => {
            let b = cfg.budget_depth;
            root["matroid_depth"] = json!({
                "dd": depth_section(deletion_depth(&m, b), cfg.witnesses, &mut budget_hit),
                "cd": depth_section(contraction_depth(&m, b), cfg.witnesses, &mut budget_hit),
                "cdd": depth_section(cdd_depth(&m, b), cfg.witnesses, &mut budget_hit),
                "csd": depth_section(cstar_depth(&m, b, &cfg.subspace), cfg.witnesses, &mut budget_hit),
                "csdd": depth_section(csdd_depth(&m, b, &cfg.subspace), cfg.witnesses, &mut budget_hit),
            });
        }
        Err(e) => {
            budget_hit = true;
            root["matroid_depth"] = json!({"error": e.to_string()});
        }
    }

    root["circuits"] = matrix_circuits(a).to_json();
    root["graver"] = match graver_basis(a, cfg.graver_box) {
        Ok(g) => g.to_json(),
        Err(e) => {
            budget_hit = true;
            json!({"error": e.to_string()})
        }
    };

    AnalysisReport { json: root, budget_hit }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::Object(map) => match map.get("error") {
            Some(e) => format!("({})", e.as_str().unwrap_or("error")),
            None => {
                let exact = map.get("exact").and_then(Value::as_bool).unwrap_or(true);
                let value = map.get("value").cloned().unwrap_or(Value::Null);
                if exact {
                    value.to_string()
                } else {
                    format!("<= {value}")
                }
            }
        },
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Plain-text rendering of an analysis report.
pub fn render_text(report: &AnalysisReport) -> String {
    let j = &report.json;
    let mut out = String::new();
    out.push_str(&format!(
        "matrix: {} x {}, rank {}, entry complexity {}\n",
        j["rows"], j["cols"], j["rank"], j["entry_complexity"]
    ));
    out.push_str(&format!(
        "tree-depth: primal {}  dual {}  incidence {}\n",
        render_scalar(&j["tree_depth"]["primal"]),
        render_scalar(&j["tree_depth"]["dual"]),
        render_scalar(&j["tree_depth"]["incidence"]),
    ));
    let md = &j["matroid_depth"];
    if md.get("error").is_some() {
        out.push_str(&format!("matroid depths: ({})\n", md["error"]));
    } else {
        out.push_str(&format!(
            "matroid depths: dd {}  cd {}  cdd {}  csd {}  csdd {}\n",
            render_scalar(&md["dd"]),
            render_scalar(&md["cd"]),
            render_scalar(&md["cdd"]),
            render_scalar(&md["csd"]),
            render_scalar(&md["csdd"]),
        ));
    }
    let c = &j["circuits"];
    out.push_str(&format!(
        "circuits: {} vectors  c1 {}  c_inf {}  kappa_dot {}\n",
        c["count"],
        render_scalar(&c["c1"]),
        render_scalar(&c["c_inf"]),
        render_scalar(&c["kappa_dot"]),
    ));
    let g = &j["graver"];
    if g.get("error").is_some() {
        out.push_str(&format!("graver: ({})\n", g["error"]));
    } else {
        out.push_str(&format!(
            "graver: {} vectors  g1 {}  g_inf {}\n",
            g["count"],
            render_scalar(&g["g1"]),
            render_scalar(&g["g_inf"]),
        ));
    }
    if report.budget_hit {
        out.push_str("note: some sections hit a budget; report is partial\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_analysis() {
        let a = RatMatrix::identity(3);
        let r = analyze_matrix(&a, &AnalysisConfig::default());
        assert!(!r.budget_hit);
        assert_eq!(r.json["schema"], "graver-forge/1");
        assert_eq!(r.json["tree_depth"]["primal"], 1);
        assert_eq!(r.json["tree_depth"]["dual"], 1);
        for p in ["dd", "cd", "cdd", "csd", "csdd"] {
            assert_eq!(r.json["matroid_depth"][p]["value"], 1, "{p}");
        }
        assert_eq!(r.json["circuits"]["count"], 0);
        assert_eq!(r.json["graver"]["count"], 0);
    }

    #[test]
    fn json_deterministic() {
        let a = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]]);
        let cfg = AnalysisConfig::default();
        let x = analyze_matrix(&a, &cfg).json.to_string();
        let y = analyze_matrix(&a, &cfg).json.to_string();
        assert_eq!(x, y);
    }

    #[test]
    fn text_rendering_mentions_values() {
        let a = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]]);
        let r = analyze_matrix(&a, &AnalysisConfig::default());
        let text = render_text(&r);
        assert!(text.contains("c1 7"), "{text}");
        assert!(text.contains("matroid depths"), "{text}");
    }

    #[test]
    fn budget_flags_partial_report() {
        let a = RatMatrix::from_i64(&[&[1, 2, 0, 1], &[0, 1, 2, 1], &[1, 0, 1, 2]]);
        let cfg = AnalysisConfig { budget_depth: Some(0), ..Default::default() };
        let r = analyze_matrix(&a, &cfg);
        assert!(r.budget_hit);
    }
}
