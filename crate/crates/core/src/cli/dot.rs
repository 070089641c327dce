use std::fmt::Write;

use crate::covering::{Instance, LinkTag};
use crate::rational::Rational;

fn cost_label(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: graph edges in green labelled with their
/// multiplicity, links dashed and coloured by tag, labelled with their cost.
pub fn to_dot(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    let _ = writeln!(out, "graph instance {{");
    let _ = writeln!(out, "  label={};", quote(&format!("k = {}", inst.k)));
    let _ = writeln!(out, "  node [shape=circle];");
    for v in 0..g.node_count() {
        let _ = writeln!(out, "  n{v} [label={}];", quote(&g.display_name(v)));
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  n{} -- n{} [color=green, label={}];",
            e.u,
            e.v,
            quote(&e.mult.to_string())
        );
    }
    for l in &inst.links {
        let colour = match l.tag {
            Some(LinkTag::Red) => "red",
            Some(LinkTag::Blue) => "blue",
            None => "black",
        };
        let _ = writeln!(
            out,
            "  n{} -- n{} [color={colour}, style=dashed, label={}];",
            l.u,
            l.v,
            quote(&cost_label(&l.cost))
        );
    }
    out.push_str("}\n");
    out
}
