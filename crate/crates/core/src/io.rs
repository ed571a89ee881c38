//! Text formats for complexes and cochains.
//!
//! Complex files hold one facet per line as whitespace-separated vertex labels; `#` starts
//! a comment. Labels are interned in order of first appearance.
//!
//! Cochain files start with `group <spec>` and then list `u v <images>` meaning
//! `φ(u, v)`, where `<images>` is the permutation of the group element, either
//! comma-separated (`1,0,2`) or as separate tokens. Unlisted edges carry the identity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::cochains::{Cochain1, CochainSpace};
use crate::complex::{SimplicialComplex, VertexId};
use crate::groups::{Elem, GroupAction, Permutation};
use crate::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
  text.lines().enumerate().filter_map(|(i, line)| {
    let line = line.split('#').next().unwrap_or("").trim();
    (!line.is_empty()).then_some((i + 1, line))
  })
}

pub fn read_to_string(path: &Path) -> Result<String> {
  std::fs::read_to_string(path)
    .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
  let mut ids: HashMap<&str, VertexId> = HashMap::new();
  let mut labels: Vec<String> = Vec::new();
  let mut facets: Vec<Vec<VertexId>> = Vec::new();
  for (line_no, line) in content_lines(text) {
    let mut facet = Vec::new();
    for token in line.split_whitespace() {
      let id = *ids.entry(token).or_insert_with(|| {
        labels.push(token.to_string());
        (labels.len() - 1) as VertexId
      });
      if facet.contains(&id) {
        return Err(Error::Parse {
          line: line_no,
          msg: format!("vertex {token} repeated in a facet"),
        });
      }
      facet.push(id);
    }
    facets.push(facet);
  }
  SimplicialComplex::from_labeled_facets(labels, &facets)
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
  parse_complex(&read_to_string(path)?)
}

/// Facets, one per line, by label.
pub fn write_complex(x: &SimplicialComplex) -> String {
  let mut out = String::new();
  for f in x.facets() {
    let labels: Vec<&str> = f.vertices().iter().map(|&v| x.label(v)).collect();
    writeln!(out, "{}", labels.join(" ")).unwrap();
  }
  out
}

/// Label → vertex lookup for `x`.
pub fn label_index(x: &SimplicialComplex) -> HashMap<&str, VertexId> {
  x.vertices().map(|v| (x.label(v), v)).collect()
}

/// Reads the group header only.
pub fn parse_cochain_group(text: &str) -> Result<GroupAction> {
  let (line_no, header) =
    content_lines(text).next().ok_or_else(|| Error::MalformedInput("empty cochain file".into()))?;
  let spec = header
    .strip_prefix("group")
    .filter(|rest| rest.starts_with(char::is_whitespace))
    .ok_or_else(|| Error::Parse { line: line_no, msg: "expected `group <spec>`".into() })?;
  GroupAction::from_spec(spec.trim())
}

/// Parses a cochain file against `x`; returns the group of the header and the cochain.
pub fn parse_cochain(text: &str, x: &SimplicialComplex) -> Result<(GroupAction, Cochain1)> {
  let group = parse_cochain_group(text)?;
  let phi = parse_cochain_values(text, x, &group)?;
  Ok((group, phi))
}

fn parse_cochain_values(
  text: &str,
  x: &SimplicialComplex,
  group: &GroupAction,
) -> Result<Cochain1> {
  let labels = label_index(x);
  let mut values: Vec<Option<Elem>> = vec![None; x.edges().len()];
  for (line_no, line) in content_lines(text).skip(1) {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 3 {
      return Err(err("expected `u v <images>`".into()));
    }
    let vertex = |t: &str| labels.get(t).copied().ok_or_else(|| err(format!("unknown vertex {t}")));
    let (u, v) = (vertex(tokens[0])?, vertex(tokens[1])?);
    let e = x
      .edge_index(u, v)
      .ok_or_else(|| err(format!("{} {} is not an edge", tokens[0], tokens[1])))?;
    let perm: Permutation = tokens[2..].join(",").parse().map_err(|e: Error| err(e.to_string()))?;
    let g = group.find(&perm).ok_or_else(|| err(format!("{perm} is not in {}", group.spec())))?;
    // stored orientation is the smaller vertex id first
    let g = if u < v { g } else { group.inv(g) };
    match values[e] {
      Some(prev) if prev != g => {
        return Err(err(format!(
          "edge {} {} listed with inconsistent values",
          tokens[0], tokens[1]
        )))
      }
      _ => values[e] = Some(g),
    }
  }
  Ok(Cochain1::from_values(values.into_iter().map(|v| v.unwrap_or(Elem::IDENTITY)).collect()))
}

pub fn read_cochain(path: &Path, x: &SimplicialComplex) -> Result<(GroupAction, Cochain1)> {
  parse_cochain(&read_to_string(path)?, x)
}

/// Writes `group <spec>` and every non-identity edge value.
pub fn write_cochain(space: &CochainSpace, phi: &Cochain1) -> String {
  let x = space.complex();
  let group = space.group();
  let mut out = format!("group {}\n", group.spec());
  for (e, edge) in x.edges().iter().enumerate() {
    let g = phi.value(e);
    if g.is_identity() {
      continue;
    }
    let [u, v] = [edge.vertices()[0], edge.vertices()[1]];
    writeln!(out, "{} {} {}", x.label(u), x.label(v), group.permutation(g)).unwrap();
  }
  out
}
