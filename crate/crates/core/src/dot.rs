//! DOT export of embedded diagrams.
//!
//! X-edges render as undirected solid edges, y-edges as bold directed
//! edges; the face list and the genus go into graph comments. Pipe the
//! output through `dot -Tsvg` for a drawing.

use crate::embedding::{EdgeKind, EmbeddedDiagram, FaceKind};

pub fn to_dot(diagram: &EmbeddedDiagram) -> String {
    let mut out = String::new();
    let label = |v: u32| diagram.domain().label(v).to_string();

    match diagram.genus() {
        Ok(g) => out.push_str(&format!("// genus {g}\n")),
        Err(_) => out.push_str(&format!(
            "// disconnected: component genera {:?}\n",
            diagram.component_genera()
        )),
    }
    for face in diagram.faces() {
        let points: Vec<String> = match face.kind {
            FaceKind::Y { cycle } => diagram.y_orbits()[cycle].iter().map(|&v| label(v)).collect(),
            FaceKind::Xy { orbit } => diagram.xy_orbits()[orbit]
                .iter()
                .map(|&v| label(v))
                .collect(),
        };
        let kind = match face.kind {
            FaceKind::Y { .. } => "y-face",
            FaceKind::Xy { .. } => "xy-face",
        };
        out.push_str(&format!("// {kind} ({})\n", points.join(",")));
    }

    out.push_str("digraph coset_diagram {\n");
    out.push_str("  node [shape=circle];\n");
    for v in 0..diagram.vertex_count() as u32 {
        out.push_str(&format!("  \"{}\";\n", label(v)));
    }
    for e in diagram.edges() {
        match e.kind {
            EdgeKind::X => out.push_str(&format!(
                "  \"{}\" -> \"{}\" [dir=none, style=solid];\n",
                label(e.tail),
                label(e.head)
            )),
            EdgeKind::Y => out.push_str(&format!(
                "  \"{}\" -> \"{}\" [style=bold];\n",
                label(e.tail),
                label(e.head)
            )),
        }
    }
    out.push_str("}\n");
    out
}
