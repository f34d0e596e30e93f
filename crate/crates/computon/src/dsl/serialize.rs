use std::collections::BTreeMap;

use computon_core::{Computon, ComputonMorphism, Id};

use super::lexer::is_name_char;

/// `name` as it must be written in a document.
pub fn quote(name: &str) -> String {
    let bare = !name.is_empty() && name.chars().all(is_name_char) && !name.bytes().all(|b| b.is_ascii_digit());
    if bare {
        return name.to_string();
    }
    let mut s = String::from("\"");
    for c in name.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

const WIDTH: usize = 80;

// Lists that fit within WIDTH stay on the section line; longer ones get a
// line per item.
fn section(out: &mut String, label: &str, items: Vec<String>) {
    out.push_str("  ");
    out.push_str(label);
    out.push(':');
    let one_line = label.len() + 5 + items.iter().map(|s| s.len() + 2).sum::<usize>();
    if one_line <= WIDTH {
        if !items.is_empty() {
            out.push(' ');
        }
        out.push_str(&items.join(", "));
        out.push_str(";\n");
    } else {
        out.push('\n');
        for (i, item) in items.iter().enumerate() {
            out.push_str("    ");
            out.push_str(item);
            out.push_str(if i + 1 == items.len() { ";\n" } else { ",\n" });
        }
    }
}

pub fn serialize_computon(name: &str, c: &Computon) -> String {
    let mut out = format!("computon {} {{\n", quote(name));
    section(
        &mut out,
        "colours",
        c.colours().iter().map(|c| c.0.to_string()).collect(),
    );
    section(
        &mut out,
        "ports",
        c.ports()
            .iter()
            .map(|(p, col)| format!("{}:{}", quote(p), col.0))
            .collect(),
    );
    section(&mut out, "units", c.units().iter().map(|u| quote(u)).collect());
    let mut edges: Vec<(&Id, u8, String)> = Vec::new();
    for (f, e) in c.in_edges() {
        edges.push((f, 0, format!("{}: {} -> {}", quote(f), quote(&e.port), quote(&e.unit))));
    }
    for (id, e) in c.out_edges() {
        edges.push((
            id,
            1,
            format!("{}: {} -> {}", quote(id), quote(&e.unit), quote(&e.port)),
        ));
    }
    edges.sort();
    section(&mut out, "edges", edges.into_iter().map(|(_, _, s)| s).collect());
    out.push_str("}\n");
    out
}

fn maps(m: &BTreeMap<Id, Id>) -> Vec<String> {
    m.iter().map(|(a, b)| format!("{} => {}", quote(a), quote(b))).collect()
}

pub fn serialize_morphism(name: &str, source: &str, target: &str, m: &ComputonMorphism) -> String {
    let d = m.data();
    let mut out = format!("morphism {}: {} -> {} {{\n", quote(name), quote(source), quote(target));
    section(&mut out, "ports", maps(&d.ports));
    section(&mut out, "units", maps(&d.units));
    let mut edges = maps(&d.in_edges);
    edges.extend(maps(&d.out_edges));
    edges.sort();
    section(&mut out, "edges", edges);
    out.push_str("}\n");
    out
}

pub fn serialize_span(name: &str, apex: &str, left: &str, right: &str) -> String {
    format!(
        "span {} {{\n  apex: {};\n  left: {};\n  right: {};\n}}\n",
        quote(name),
        quote(apex),
        quote(left),
        quote(right)
    )
}

pub fn serialize_marking(name: &str, on: &str, counts: &BTreeMap<Id, usize>) -> String {
    let items: Vec<String> = counts
        .iter()
        .filter(|(_, n)| **n > 0)
        .map(|(p, n)| format!("{} = {n}", quote(p)))
        .collect();
    if items.is_empty() {
        return format!("marking {} on {} {{ }}\n", quote(name), quote(on));
    }
    format!("marking {} on {} {{ {}; }}\n", quote(name), quote(on), items.join(", "))
}
