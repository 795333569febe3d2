use super::{FinCat, FinStrictLcc};

/// Graphviz rendering of the non-identity arrows; chosen structure, when
/// given, is listed in a comment block and the terminal object is boxed.
pub fn to_dot(c: &FinCat, chosen: Option<&FinStrictLcc>) -> String {
    let mut s = String::from("digraph fincat {\n  rankdir=BT;\n");
    for (i, o) in c.objects.iter().enumerate() {
        let shape = if chosen.is_some_and(|l| l.terminal == i) { "box" } else { "ellipse" };
        s.push_str(&format!("  o{i} [label=\"{}\", shape={shape}];\n", o.replace('"', "\\\"")));
    }
    for (i, a) in c.arrows.iter().enumerate() {
        if c.ident.contains(&i) {
            continue;
        }
        s.push_str(&format!("  o{} -> o{} [label=\"{}\"];\n", a.dom, a.cod, a.name.replace('"', "\\\"")));
    }
    if let Some(l) = chosen {
        for d in l.chosen_diagrams() {
            s.push_str(&format!("  // chosen {}\n", c.describe(&d)));
        }
    }
    for m in &c.markings {
        s.push_str(&format!("  // marked {}\n", c.describe(m)));
    }
    s.push_str("}\n");
    s
}
