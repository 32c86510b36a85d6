//! Instance file formats and random instance generators.
//!
//! The native format is line based, with 1-based ids:
//!
//! ```text
//! c <comment>
//! p wlcp <n> <e> <c>
//! e <u> <v>
//! w <j> <weight>
//! l <v> <len> <j1> ... <jlen>
//! ```

mod clique;
mod generate;

pub use clique::max_clique;
pub use generate::{
    gen_set1, gen_set1_with_report, gen_set2, gen_set3, rng_from_seed, GenParamsSet1,
    GenParamsSet2, GenParamsSet3,
};

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Color, Graph, Instance, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing problem line")]
    MissingHeader,
    #[error("count mismatch: {0}")]
    Count(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

fn one_based(x: usize, bound: usize, line: usize, what: &str) -> Result<usize, ParseError> {
    if x == 0 || x > bound {
        return Err(syntax(line, format!("{what} {x} out of range 1..={bound}")));
    }
    Ok(x - 1)
}

/// Parses the native WLCP format.
pub fn parse_wlcp(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut weights: Vec<Option<u64>> = Vec::new();
    let mut lists: Vec<Option<Vec<Color>>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate problem line"));
                }
                if toks.next() != Some("wlcp") {
                    return Err(syntax(line, "expected `p wlcp <n> <e> <c>`"));
                }
                let n = parse_num(toks.next(), line, "vertex count")?;
                let e = parse_num(toks.next(), line, "edge count")?;
                let c = parse_num(toks.next(), line, "color count")?;
                header = Some((n, e, c));
                weights = vec![None; c];
                lists = vec![None; n];
            }
            "e" | "w" | "l" => {
                let (n, _, c) = header.ok_or_else(|| syntax(line, "data before problem line"))?;
                match tag {
                    "e" => {
                        let u =
                            one_based(parse_num(toks.next(), line, "vertex")?, n, line, "vertex")?;
                        let v =
                            one_based(parse_num(toks.next(), line, "vertex")?, n, line, "vertex")?;
                        edges.push((u, v));
                    }
                    "w" => {
                        let j =
                            one_based(parse_num(toks.next(), line, "color")?, c, line, "color")?;
                        let w: u64 = parse_num(toks.next(), line, "weight")?;
                        if weights[j].replace(w).is_some() {
                            return Err(syntax(
                                line,
                                format!("duplicate weight for color {}", j + 1),
                            ));
                        }
                    }
                    _ => {
                        let v =
                            one_based(parse_num(toks.next(), line, "vertex")?, n, line, "vertex")?;
                        let len: usize = parse_num(toks.next(), line, "list length")?;
                        let mut list = Vec::with_capacity(len);
                        for _ in 0..len {
                            let j = one_based(
                                parse_num(toks.next(), line, "color")?,
                                c,
                                line,
                                "color",
                            )?;
                            list.push(j);
                        }
                        if lists[v].replace(list).is_some() {
                            return Err(syntax(
                                line,
                                format!("duplicate list for vertex {}", v + 1),
                            ));
                        }
                    }
                }
                if let Some(extra) = toks.next() {
                    return Err(syntax(line, format!("unexpected token `{extra}`")));
                }
            }
            other => return Err(syntax(line, format!("unknown line type `{other}`"))),
        }
    }

    let (n, e, c) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != e {
        return Err(ParseError::Count(format!(
            "declared {e} edges, found {}",
            edges.len()
        )));
    }
    let found_w = weights.iter().flatten().count();
    if found_w != c {
        return Err(ParseError::Count(format!(
            "declared {c} colors, found {found_w} weight lines"
        )));
    }
    let found_l = lists.iter().flatten().count();
    if found_l != n {
        return Err(ParseError::Count(format!(
            "declared {n} vertices, found {found_l} list lines"
        )));
    }
    let graph = Graph::from_edges(n, edges)?;
    let lists = lists.into_iter().map(Option::unwrap).collect();
    let weights = weights.into_iter().map(Option::unwrap).collect();
    Ok(Instance::new(graph, lists, weights)?)
}

/// Serializes an instance in the native format: edges in lexicographic
/// order, weights by color, lists by vertex.
pub fn write_wlcp(inst: &Instance) -> String {
    write_wlcp_with_comments(inst, &[])
}

pub fn write_wlcp_with_comments(inst: &Instance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(
        out,
        "p wlcp {} {} {}",
        inst.n(),
        inst.graph().edge_count(),
        inst.color_capacity()
    );
    for (u, v) in inst.graph().edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    for (j, w) in inst.weights().iter().enumerate() {
        let _ = writeln!(out, "w {} {}", j + 1, w);
    }
    for v in 0..inst.n() {
        let list = inst.list(v);
        let _ = write!(out, "l {} {}", v + 1, list.len());
        for &j in list {
            let _ = write!(out, " {}", j + 1);
        }
        out.push('\n');
    }
    out
}

/// Parses a DIMACS `.col` graph as a graph coloring instance: every vertex
/// gets the list `{1, …, Δ(G)+1}` and every color the given weight.
pub fn parse_dimacs_col(text: &str, weight: u64) -> Result<Instance, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(syntax(line, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge" | "edges" | "col") => {}
                    _ => return Err(syntax(line, "expected `p edge <n> <m>`")),
                }
                n = Some(parse_num(toks.next(), line, "vertex count")?);
                let _m: usize = parse_num(toks.next(), line, "edge count")?;
            }
            Some("e") => {
                let nv = n.ok_or_else(|| syntax(line, "edge before problem line"))?;
                let u = one_based(parse_num(toks.next(), line, "vertex")?, nv, line, "vertex")?;
                let v = one_based(parse_num(toks.next(), line, "vertex")?, nv, line, "vertex")?;
                if u == v {
                    return Err(syntax(line, format!("self-loop on vertex {}", u + 1)));
                }
                edges.push((u, v));
            }
            // node weights and other extensions are irrelevant here
            Some("n" | "x") => {}
            Some(other) => return Err(syntax(line, format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or(ParseError::MissingHeader)?;
    let graph = Graph::from_edges_dedup(n, edges)?;
    Ok(gcp_instance(graph, weight))
}

/// Graph coloring as WLCP: lists `{0, …, Δ}` everywhere, uniform weight.
pub fn gcp_instance(graph: Graph, weight: u64) -> Instance {
    let colors = graph.max_degree() + 1;
    let lists = vec![(0..colors).collect(); graph.n()];
    Instance::new(graph, lists, vec![weight; colors]).expect("non-empty lists")
}

/// Writes a graph in DIMACS `.col` format.
pub fn write_dimacs_col(graph: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", graph.n(), graph.edge_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Parses an OR-Library set covering file: rows become the vertices of an
/// edgeless graph, columns become colors, `L(v)` is the set of columns
/// covering row `v` and column costs are the color weights.
pub fn parse_orlib_scp(text: &str) -> Result<Instance, ParseError> {
    // Tokens paired with their line numbers; the format is free-form.
    let mut toks = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let mut next_num = |what: &str| -> Result<usize, ParseError> {
        match toks.next() {
            Some((line, t)) => t
                .parse()
                .map_err(|_| syntax(line, format!("invalid {what} `{t}`"))),
            None => Err(ParseError::Count(format!(
                "unexpected end of file reading {what}"
            ))),
        }
    };
    let rows = next_num("row count")?;
    let cols = next_num("column count")?;
    let mut costs = Vec::with_capacity(cols);
    for _ in 0..cols {
        costs.push(next_num("cost")? as u64);
    }
    let mut lists = Vec::with_capacity(rows);
    for r in 0..rows {
        let count = next_num("cover count")?;
        let mut list = Vec::with_capacity(count);
        for _ in 0..count {
            let j = next_num("column index")?;
            if j == 0 || j > cols {
                return Err(ParseError::Count(format!(
                    "row {} lists column {j} of {cols}",
                    r + 1
                )));
            }
            list.push(j - 1);
        }
        if list.is_empty() {
            return Err(ModelError::EmptyList(r).into());
        }
        lists.push(list);
    }
    if next_num("trailing data").is_ok() {
        return Err(ParseError::Count("trailing data after last row".into()));
    }
    Ok(Instance::new(Graph::empty(rows), lists, costs)?)
}

/// Reads a solution file: one `v <vertex> <color>` line per vertex, 1-based.
pub fn parse_solution(text: &str, n: usize) -> Result<Vec<Color>, ParseError> {
    let mut f: Vec<Option<Color>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("v") => {
                let v = one_based(parse_num(toks.next(), line, "vertex")?, n, line, "vertex")?;
                let c: usize = parse_num(toks.next(), line, "color")?;
                if c == 0 {
                    return Err(syntax(line, "colors are 1-based"));
                }
                if f[v].replace(c - 1).is_some() {
                    return Err(syntax(line, format!("vertex {} assigned twice", v + 1)));
                }
            }
            Some(other) => return Err(syntax(line, format!("unknown line type `{other}`"))),
        }
    }
    f.into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| ParseError::Count(format!("vertex {} unassigned", v + 1))))
        .collect()
}

pub fn write_solution(assignment: &[Color]) -> String {
    let mut out = String::new();
    for (v, &c) in assignment.iter().enumerate() {
        let _ = writeln!(out, "v {} {}", v + 1, c + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonicalize;
    use crate::model::fixtures::cycle4;

    const CYCLE4: &str = "p wlcp 4 4 7
e 1 2
e 1 3
e 2 4
e 3 4
w 1 1
w 2 1
w 3 1
w 4 1
w 5 1
w 6 1
w 7 1
l 1 7 1 2 3 4 5 6 7
l 2 6 1 2 3 4 5 6
l 3 6 1 2 3 4 5 6
l 4 2 1 2
";

    #[test]
    fn cycle4_round_trips_byte_identically() {
        let inst = parse_wlcp(CYCLE4).unwrap();
        assert_eq!(inst, cycle4());
        assert_eq!(write_wlcp(&inst), CYCLE4);
    }

    #[test]
    fn single_vertex_round_trip() {
        let inst = Instance::new(Graph::empty(1), vec![vec![0]], vec![1]).unwrap();
        let text = write_wlcp(&inst);
        assert_eq!(text, "p wlcp 1 0 1\nw 1 1\nl 1 1 1\n");
        assert_eq!(parse_wlcp(&text).unwrap(), inst);
    }

    #[test]
    fn wlcp_errors() {
        let empty = "p wlcp 1 0 1\nw 1 1\nl 1 0\n";
        assert_eq!(
            parse_wlcp(empty),
            Err(ParseError::Model(ModelError::EmptyList(0)))
        );

        let short = CYCLE4.replace("l 4 2 1 2\n", "");
        assert!(matches!(parse_wlcp(&short), Err(ParseError::Count(_))));

        let bad = CYCLE4.replace("e 1 3", "e 1 x");
        assert!(matches!(
            parse_wlcp(&bad),
            Err(ParseError::Syntax { line: 3, .. })
        ));

        assert_eq!(parse_wlcp("c nothing\n"), Err(ParseError::MissingHeader));
    }

    #[test]
    fn comments_are_ignored() {
        let text = format!("c hello\n{}c trailing\n", CYCLE4);
        assert_eq!(parse_wlcp(&text).unwrap(), cycle4());
        let with = write_wlcp_with_comments(&cycle4(), &["note".to_string()]);
        assert!(with.starts_with("c note\np wlcp"));
        assert_eq!(parse_wlcp(&with).unwrap(), cycle4());
    }

    #[test]
    fn dimacs_single_edge() {
        let inst = parse_dimacs_col("c x\np edge 2 1\ne 1 2\n", 1).unwrap();
        assert_eq!(inst.lists(), &[vec![0, 1], vec![0, 1]]);
        let canon = canonicalize(inst);
        assert_eq!(canon.num_classes(), 1);
        assert_eq!(canon.multiplicity(0), 2);
    }

    #[test]
    fn dimacs_duplicates_are_merged() {
        let inst = parse_dimacs_col("p edge 3 4\ne 1 2\ne 2 1\ne 2 3\ne 3 2\n", 2).unwrap();
        assert_eq!(inst.graph().edge_count(), 2);
        assert_eq!(inst.weights(), &[2, 2, 2]);
        assert_eq!(
            parse_dimacs_col("e 1 2\n", 1),
            Err(ParseError::Syntax {
                line: 1,
                msg: "edge before problem line".into()
            })
        );
        assert_eq!(
            parse_dimacs_col("c only\n", 1),
            Err(ParseError::MissingHeader)
        );
    }

    #[test]
    fn orlib_scp_parsing() {
        // 3 rows, columns {1,2}, {2,3}, {1,3}
        let text = "3 3\n1 1 1\n2 1 3\n2 1 2\n2 2 3\n";
        let inst = parse_orlib_scp(text).unwrap();
        assert_eq!(inst.graph().edge_count(), 0);
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.lists(), &[vec![0, 2], vec![0, 1], vec![1, 2]]);

        let uncovered = "2 1\n5\n1 1\n0\n";
        assert_eq!(
            parse_orlib_scp(uncovered),
            Err(ParseError::Model(ModelError::EmptyList(1)))
        );
        assert!(parse_orlib_scp("2 1\n5\n1 1\n").is_err());
    }

    #[test]
    fn solution_round_trip() {
        let f = vec![2, 3, 3, 0];
        assert_eq!(parse_solution(&write_solution(&f), 4).unwrap(), f);
        assert!(parse_solution("v 1 1\n", 2).is_err());
    }
}
