//! JSON documents, CSV output and hexadecimal floats.

use std::sync::Arc;

use cellforge::error::CellforgeError;
use cellforge::hecke::hecke_operators;
use cellforge::io::{format_hex, parse_hex};
use cellforge::{
    build_graph, cells_from_json, cells_to_json, construct_cells, graph_from_json, graph_to_json,
    hecke_to_csv, solve_cells, solve_report_to_json, GraphSpec, SolveOptions, Variant,
};
use proptest::prelude::*;

#[test]
fn graph_documents_round_trip() {
    for spec in GraphSpec::catalog() {
        let g = build_graph(spec).unwrap();
        let text = graph_to_json(&g).unwrap();
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back.spec(), Some(spec));
        assert_eq!(graph_to_json(&back).unwrap(), text, "{spec}");
        assert_eq!(back.pf_weights(), g.pf_weights());
    }
}

#[test]
fn cell_documents_round_trip() {
    for spec in GraphSpec::catalog() {
        for v in Variant::admissible(spec) {
            let cs = construct_cells(spec, v).unwrap();
            let text = cells_to_json(&cs).unwrap();
            let back = cells_from_json(&text, None).unwrap();
            assert_eq!(back.values(), cs.values(), "{spec} {v}");
            assert_eq!(back.variant(), v);
            assert_eq!(cells_to_json(&back).unwrap(), text);
        }
    }
}

#[test]
fn custom_graph_keeps_cells() {
    let cs = construct_cells("A:6".parse().unwrap(), Variant::Default).unwrap();
    let gtext = graph_to_json(cs.graph())
        .unwrap()
        .replace("\"A(6)\"", "\"my-graph\"");
    let g = Arc::new(graph_from_json(&gtext).unwrap());
    assert_eq!(g.spec(), None);
    let ctext = cells_to_json(&cs)
        .unwrap()
        .replace("\"A(6)\"", "\"my-graph\"");
    let back = cells_from_json(&ctext, Some(g)).unwrap();
    assert_eq!(back.values(), cs.values());
}

#[test]
fn malformed_cell_documents() {
    let cs = construct_cells("A:5".parse().unwrap(), Variant::Default).unwrap();
    let text = cells_to_json(&cs).unwrap();
    let other = Arc::new(build_graph("A:6".parse().unwrap()).unwrap());
    assert!(matches!(
        cells_from_json(&text, Some(other)),
        Err(CellforgeError::GraphMismatch(..))
    ));
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["cells"].as_array_mut().unwrap().pop();
    assert!(cells_from_json(&v.to_string(), None).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = v["cells"][0].clone();
    v["cells"].as_array_mut().unwrap().push(first);
    assert!(cells_from_json(&v.to_string(), None).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["cells"][0]["re"] = serde_json::json!("1.5");
    assert!(cells_from_json(&v.to_string(), None).is_err());
    assert!(cells_from_json("{", None).is_err());
}

#[test]
fn hecke_csv_layout() {
    let cs = construct_cells("A:5".parse().unwrap(), Variant::Default).unwrap();
    let ops = hecke_operators(&cs);
    let csv = hecke_to_csv(cs.graph(), &ops);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,row,col,re,im"));
    let entries: usize = ops.iter().map(|u| u.dim() * u.dim()).sum();
    assert_eq!(lines.count(), entries);
    assert!(csv.contains("\"(0,0)\""));
}

#[test]
fn solve_report_document() {
    let g = build_graph("A:5".parse().unwrap()).unwrap();
    let out = solve_cells(&g, &SolveOptions::default()).unwrap();
    let text = solve_report_to_json(&out, true).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "solved");
    assert!(parse_hex(v["objective"].as_str().unwrap()).unwrap() <= 1e-16);
    assert!(v["cells"]["cells"].as_array().unwrap().len() == 4);
    let brief: serde_json::Value =
        serde_json::from_str(&solve_report_to_json(&out, false).unwrap()).unwrap();
    assert!(brief.get("cells").is_none());
}

#[test]
fn hex_literals() {
    assert_eq!(parse_hex("0x1.8p+1").unwrap(), 3.0);
    assert_eq!(parse_hex("-0x1p-2").unwrap(), -0.25);
    assert_eq!(format_hex(0.1).unwrap(), "0x1.999999999999ap-4");
    assert!(parse_hex("3.0").is_err());
    assert!(format_hex(f64::INFINITY).is_err());
}

proptest! {
    #[test]
    fn hex_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back = parse_hex(&format_hex(x).unwrap()).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
