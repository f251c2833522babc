//! Edge-list and membership file codecs. Files use 1-based ids (LFR-ecosystem
//! convention); everything in memory is 0-based.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{CommunityAssignment, Graph};

/// One edge per line: two 1-based ids, TAB-separated, smaller endpoint first,
/// sorted numerically.
pub fn write_edge_list<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    for (i, j) in g.edges() {
        writeln!(w, "{}\t{}", i + 1, j + 1)?;
    }
    Ok(())
}

pub fn write_edge_list_path<P: AsRef<Path>>(path: P, g: &Graph) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_edge_list(&mut w, g)?;
    w.flush()?;
    Ok(())
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    let raw: usize = token.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("expected positive integer node id, got `{token}`"),
    })?;
    if raw == 0 {
        return Err(Error::Parse {
            line,
            reason: "node ids are 1-based; 0 is invalid".into(),
        });
    }
    Ok(raw - 1)
}

/// Parses an edge list; node count is the largest id seen. Rejects malformed
/// lines, self-loops, and duplicate edges with the offending line number.
pub fn read_edge_list<R: Read>(r: R) -> Result<Graph> {
    let reader = BufReader::new(r);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split('\t');
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    reason: "expected exactly two TAB-separated ids".into(),
                })
            }
        };
        let i = parse_id(a, line_no)?;
        let j = parse_id(b, line_no)?;
        if i == j {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("self-loop at node {}", i + 1),
            });
        }
        max_id = max_id.max(i).max(j);
        edges.push((i, j, line_no));
    }
    let mut g = Graph::new(if edges.is_empty() { 0 } else { max_id + 1 });
    for &(i, j, line_no) in &edges {
        if !g.add_edge(i, j)? {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("duplicate edge {}-{}", i + 1, j + 1),
            });
        }
    }
    Ok(g)
}

pub fn read_edge_list_path<P: AsRef<Path>>(path: P) -> Result<Graph> {
    read_edge_list(File::open(path)?)
}

/// One line per node: 1-based node id, TAB, space-separated sorted 1-based
/// community ids.
pub fn write_membership<W: Write>(mut w: W, asg: &CommunityAssignment) -> Result<()> {
    for node in 0..asg.node_count() {
        let ids: Vec<String> = asg
            .memberships(node)
            .iter()
            .map(|&c| (c + 1).to_string())
            .collect();
        writeln!(w, "{}\t{}", node + 1, ids.join(" "))?;
    }
    Ok(())
}

pub fn write_membership_path<P: AsRef<Path>>(path: P, asg: &CommunityAssignment) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_membership(&mut w, asg)?;
    w.flush()?;
    Ok(())
}

/// Parses a membership file. Every node 1..=n must appear exactly once with
/// at least one community id.
pub fn read_membership<R: Read>(r: R) -> Result<CommunityAssignment> {
    let reader = BufReader::new(r);
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut max_node = 0usize;
    let mut max_comm = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (node_tok, comm_toks) = trimmed.split_once('\t').ok_or_else(|| Error::Parse {
            line: line_no,
            reason: "expected `node<TAB>community ids`".into(),
        })?;
        let node = parse_id(node_tok, line_no)?;
        let comms: Vec<usize> = comm_toks
            .split_whitespace()
            .map(|t| parse_id(t, line_no))
            .collect::<Result<_>>()?;
        if comms.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("node {} has no community", node + 1),
            });
        }
        max_node = max_node.max(node);
        max_comm = max_comm.max(*comms.iter().max().unwrap());
        rows.push((node, comms));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            reason: "empty membership file".into(),
        });
    }
    let n = max_node + 1;
    let mut seen = vec![false; n];
    let mut asg = CommunityAssignment::new(n, max_comm + 1);
    for (node, comms) in rows {
        if seen[node] {
            return Err(Error::Parse {
                line: 0,
                reason: format!("node {} listed twice", node + 1),
            });
        }
        seen[node] = true;
        for c in comms {
            asg.add_membership(node, c);
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Parse {
            line: 0,
            reason: format!("missing membership line for node {}", missing + 1),
        });
    }
    Ok(asg)
}

pub fn read_membership_path<P: AsRef<Path>>(path: P) -> Result<CommunityAssignment> {
    read_membership(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_triangle_format() {
        let mut g = Graph::new(3);
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            g.add_edge(i, j).unwrap();
        }
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1\t2\n1\t3\n2\t3\n");
    }

    #[test]
    fn edge_list_rejects_self_loop_with_line() {
        let err = read_edge_list("1\t2\n3\t3\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("self-loop"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn edge_list_rejects_duplicates_and_garbage() {
        assert!(read_edge_list("1\t2\n2\t1\n".as_bytes()).is_err());
        assert!(read_edge_list("1\tx\n".as_bytes()).is_err());
        assert!(read_edge_list("0\t1\n".as_bytes()).is_err());
    }

    #[test]
    fn membership_overlap_format() {
        let mut asg = CommunityAssignment::new(2, 2);
        asg.add_membership(0, 0);
        asg.add_membership(1, 0);
        asg.add_membership(1, 1);
        let mut buf = Vec::new();
        write_membership(&mut buf, &asg).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1\t1\n2\t1 2\n");
    }

    #[test]
    fn membership_missing_node_named() {
        let err = read_membership("1\t1\n3\t1\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { reason, .. } => assert!(reason.contains("node 2"), "{reason}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn membership_empty_community_rejected() {
        assert!(read_membership("1\t\n".as_bytes()).is_err());
    }
}
