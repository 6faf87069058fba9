//! JSON-friendly view of cell results.

use serde::{Deserialize, Serialize};

use crate::render::{render_expr, render_symbol, Style};
use crate::session::{CellResult, Severity};
use crate::syntax::Span;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputReport {
    pub label: Option<String>,
    pub display: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: usize,
    pub outputs: Vec<OutputReport>,
    pub diagnostics: Vec<DiagnosticReport>,
}

impl CellReport {
    pub fn new(cell: usize, result: &CellResult) -> Self {
        CellReport {
            cell,
            outputs: result
                .outputs
                .iter()
                .map(|o| OutputReport {
                    label: o.label.as_ref().map(render_symbol),
                    display: render_expr(&o.value, Style::Display),
                    source: render_expr(&o.value, Style::Source),
                })
                .collect(),
            diagnostics: result
                .diagnostics
                .iter()
                .map(|d| DiagnosticReport {
                    severity: d.severity,
                    code: d.code.clone(),
                    message: d.message.clone(),
                    span: d.span,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Env;

    #[test]
    fn json_shape() {
        let mut env = Env::new();
        let r = env.eval_cell("g = \\sin(2x); \\print(g);");
        let json = serde_json::to_value(CellReport::new(0, &r)).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "cell": 0,
                "outputs": [{"label": "g", "display": "\\sin(2x)", "source": "\\sin(2 x)"}],
                "diagnostics": []
            })
        );
        let r = env.eval_cell("1/0;");
        let json = serde_json::to_value(CellReport::new(1, &r)).unwrap();
        assert_eq!(json["diagnostics"][0]["severity"], "error");
        assert_eq!(json["diagnostics"][0]["code"], "DivisionByZero");
        assert_eq!(json["diagnostics"][0]["span"], serde_json::json!({"start": 0, "end": 3}));
    }
}
