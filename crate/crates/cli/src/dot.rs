//! Graphviz rendering of reports. Each sub-report is a box; a failing
//! check's witness hangs off it, with the two paths of the diagram as
//! separate nodes.

use std::fmt::Write;

use weaklaw::{LawReport, Status};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn colour(s: Status) -> &'static str {
    match s {
        Status::Pass => "darkgreen",
        Status::SampledPass => "olivedrab",
        Status::BudgetExceeded => "darkorange",
        Status::Fail => "red",
    }
}

pub fn render(r: &LawReport) -> String {
    let mut out = String::from("digraph report {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut next = 0usize;
    walk(r, &mut out, &mut next);
    out.push_str("}\n");
    out
}

fn walk(r: &LawReport, out: &mut String, next: &mut usize) -> usize {
    let id = *next;
    *next += 1;
    let label = format!("[{}] {}\nchecked {}", r.status.as_str(), r.name, r.checked);
    let _ = writeln!(out, "  n{id} [label=\"{}\", color={}];", escape(&label), colour(r.status));
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "  w{id} [shape=ellipse, label=\"{}\"];", escape(&format!("{}\n{}", w.label, w.input)));
        let _ = writeln!(out, "  n{id} -> w{id} [label=\"witness\"];");
        if let Some(l) = &w.left {
            let _ = writeln!(out, "  l{id} [shape=note, label=\"{}\"];", escape(&l.to_string()));
            let _ = writeln!(out, "  w{id} -> l{id} [label=\"upper path\"];");
        }
        if let Some(rv) = &w.right {
            let _ = writeln!(out, "  r{id} [shape=note, label=\"{}\"];", escape(&rv.to_string()));
            let _ = writeln!(out, "  w{id} -> r{id} [label=\"lower path\"];");
        }
    }
    for c in &r.children {
        let cid = walk(c, out, next);
        let _ = writeln!(out, "  n{id} -> n{cid};");
    }
    id
}
