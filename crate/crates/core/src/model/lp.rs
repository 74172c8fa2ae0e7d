//! CPLEX-style LP text output.

use std::fmt::Write;

use super::{integerize, Coef, IlpModel, VarId};

const WRAP: usize = 100;

/// Renders the model as an LP file. Rational rows are integerized first, so
/// every coefficient is printed as an integer.
pub fn export_lp(m: &IlpModel) -> String {
    let integral;
    let m = if m.is_integral() {
        m
    } else {
        integral = integerize(m);
        &integral
    };
    let md = &m.metadata;
    let mut out = String::new();
    writeln!(out, "\\ model={} fidelity={} graph={}", md.id, md.fidelity, md.graph).unwrap();
    out.push_str("Minimize\n");
    let objective = expression(m, &m.objective);
    push_wrapped(&mut out, &format!(" obj: {objective}"));
    out.push_str("Subject To\n");
    for row in &m.constraints {
        let line = format!(
            " c_{}: {} {} {}",
            row.tag,
            expression(m, &row.terms),
            row.sense.symbol(),
            row.rhs.to_integer()
        );
        push_wrapped(&mut out, &line);
    }
    out.push_str("Binary\n");
    let names: Vec<String> = m.variables.iter().map(|v| v.name()).collect();
    if !names.is_empty() {
        push_wrapped(&mut out, &format!(" {}", names.join(" ")));
    }
    out.push_str("End\n");
    out
}

fn expression(m: &IlpModel, terms: &[(Coef, VarId)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (c, v)) in terms.iter().enumerate() {
        let value = c.to_integer();
        let name = m.variable(*v).name();
        match (i, value < 0) {
            (0, false) => write!(s, "{value} {name}"),
            (0, true) => write!(s, "- {} {name}", -value),
            (_, false) => write!(s, " + {value} {name}"),
            (_, true) => write!(s, " - {} {name}", -value),
        }
        .unwrap();
    }
    s
}

/// Breaks long lines at spaces; continuation lines are indented.
fn push_wrapped(out: &mut String, line: &str) {
    let body = line.trim_start();
    let mut current = line[..line.len() - body.len()].to_string();
    let mut first = true;
    for word in body.split(' ') {
        if !first && current.len() + word.len() + 1 > WRAP {
            out.push_str(&current);
            out.push('\n');
            current = String::from("   ");
            first = true;
        }
        if !first {
            current.push(' ');
        }
        current.push_str(word);
        first = false;
    }
    out.push_str(&current);
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::model::{build, Fidelity, ModelId, ModelMetadata};

    #[test]
    fn empty_model() {
        let m = IlpModel::new(ModelMetadata {
            id: ModelId::M3RdpAn,
            fidelity: Fidelity::Corrected,
            graph: "none".into(),
            vertex_count: 0,
        });
        assert_eq!(
            export_lp(&m),
            "\\ model=M3RDP_AN fidelity=corrected graph=none\nMinimize\n obj: 0\nSubject To\nBinary\nEnd\n"
        );
    }

    #[test]
    fn deterministic_and_wrapped() {
        let g = crate::graph::erdos_renyi(30, 0.5, 1).unwrap();
        let m = build(&g, ModelId::M4Rdp1).unwrap();
        let a = export_lp(&m);
        assert_eq!(a, export_lp(&m));
        assert!(a.lines().all(|l| l.len() <= WRAP + 20));
        assert!(a.contains("c_4b@v0: 4 p0 + 4 q0"));
        assert!(!a.contains('/'));
    }

    #[test]
    fn leading_negative_term() {
        let m = build(&Graph::complete(2), ModelId::M3Rdp1).unwrap();
        let text = export_lp(&m);
        assert!(text.contains(" c_link-t@v0: 1 t0 - 1 q1 <= 0\n"), "{text}");
        assert!(text.contains(" c_1c@v0: - 2 p0 + 1 q1 + 2 r1 + 2 s1 >= 0\n"), "{text}");
    }
}
