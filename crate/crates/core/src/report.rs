//! Deterministic report rendering: a key/value tree for machines and an
//! aligned table for humans. Identical inputs produce byte-identical text.

/// One node of a report tree: a `key = value` leaf or a keyed group of
/// children.
#[derive(Debug, Clone)]
pub struct Node {
    key: String,
    value: Option<String>,
    children: Vec<Node>,
}

impl Node {
    pub fn group(key: impl Into<String>) -> Node {
        Node {
            key: key.into(),
            value: None,
            children: Vec::new(),
        }
    }

    pub fn leaf(key: impl Into<String>, value: impl Into<String>) -> Node {
        Node {
            key: key.into(),
            value: Some(value.into()),
            children: Vec::new(),
        }
    }

    pub fn push(&mut self, child: Node) -> &mut Node {
        self.children.push(child);
        self
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Node {
        self.children.push(Node::leaf(key, value));
        self
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match &self.value {
            Some(v) => {
                out.push_str(&pad);
                out.push_str(&self.key);
                out.push_str(" = ");
                out.push_str(v);
                out.push('\n');
            }
            None => {
                out.push_str(&pad);
                out.push_str(&self.key);
                out.push_str(":\n");
                for child in &self.children {
                    child.render_into(indent + 1, out);
                }
            }
        }
    }
}

/// A whole report: top-level nodes rendered in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Report {
    nodes: Vec<Node>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, node: Node) -> &mut Report {
        self.nodes.push(node);
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            node.render_into(0, &mut out);
        }
        out
    }
}

/// Fixed-precision float with no scientific notation and no negative zero.
pub fn fmt_f(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Volumes print at 4 decimals in cm³ (and mm³ for symmetry).
pub fn fmt_volume_cm3(mm3: f64) -> String {
    fmt_f(mm3 / 1000.0, 4)
}

pub fn fmt_point(p: crate::geometry::Point3) -> String {
    format!("({}, {}, {})", fmt_f(p.x, 4), fmt_f(p.y, 4), fmt_f(p.z, 4))
}

/// Renders rows as an aligned table with a header rule.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let ncol = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(ncol) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String], out: &mut String| {
        for (i, cell) in cells.iter().enumerate().take(ncol) {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            for _ in cell.len()..widths[i] {
                out.push(' ');
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    render_row(
        &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        &mut out,
    );
    let total: usize = widths.iter().sum::<usize>() + 2 * (ncol - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        render_row(row, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_rendering_is_stable() {
        let mut report = Report::new();
        let mut g = Node::group("tetrahedron");
        g.add("volume_cm3", fmt_f(668.624, 4));
        g.add("loadable", "true");
        report.push(g);
        assert_eq!(
            report.render(),
            "tetrahedron:\n  volume_cm3 = 668.6240\n  loadable = true\n"
        );
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(fmt_f(-0.000001, 4), "0.0000");
        assert_eq!(fmt_f(-0.001, 2), "0.00");
        assert_eq!(fmt_f(-0.5, 2), "-0.50");
    }

    #[test]
    fn table_alignment() {
        let s = render_table(
            &["pattern", "type", "volume"],
            &[
                vec!["B->A->D<-C".into(), "I".into(), "1.4318".into()],
                vec!["C->D->A->B".into(), "II".into(), "0.0067".into()],
            ],
        );
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("pattern"));
        assert!(lines[1].chars().all(|c| c == '-'));
    }
}
