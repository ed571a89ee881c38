//! One function per subcommand, each returning the command-specific part of the report.

use std::path::Path;

use coverlab::cochains::{Cochain1, CochainSpace};
use coverlab::complex::SimplicialComplex;
use coverlab::covers::lift_complex;
use coverlab::expansion::{
  h1_exact_with, nearest_cocycle_bound_check, verify_main_theorem, verify_sandwich,
  ExpansionOptions, NearestInputs,
};
use coverlab::groups::GroupAction;
use coverlab::io;
use coverlab::lattice::{
  decode as decode_cochain, gamma_certificate, order_complex, subspace_lattice, DecodeOptions,
  GammaOptions, OrderComplex, OrderingScheme,
};
use coverlab::search::SearchLimits;
use coverlab::{ratio, Rational};
use serde_json::{json, Value};

use crate::report::{cochain_value, rational_value, simplex_labels, Report};
use crate::{
  BuildingArgs, CliError, CliResult, CochainArgs, ComplexArgs, DecodeArgs, GammaArgs, GammaMode,
  GroupArgs, H1Args, LiftArgs, StabilityArgs, TestArgs, VerifyArgs, WeightsArgs,
};

fn write_file(path: &Path, text: &str) -> CliResult<()> {
  std::fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_cochain(a: &CochainArgs) -> CliResult<(SimplicialComplex, GroupAction, Cochain1)> {
  let x = io::read_complex(&a.complex)?;
  let (group, phi) = io::read_cochain(&a.cochain, &x)?;
  if let Some(t) = a.set_size {
    if t != group.t() {
      return Err(CliError::Invalid(format!(
        "--set-size {t} but the group {} acts on {} points",
        group.spec(),
        group.t()
      )));
    }
  }
  Ok((x, group, phi))
}

fn load_group(a: &GroupArgs) -> CliResult<(SimplicialComplex, GroupAction)> {
  Ok((io::read_complex(&a.complex)?, GroupAction::from_spec(&a.group)?))
}

pub fn info(a: &ComplexArgs) -> CliResult<Value> {
  let x = io::read_complex(&a.complex)?;
  let mut r = Report::new();
  r.set("f_vector", x.f_vector())
    .set("dimension", x.n() as i64 - 1)
    .set("pure", x.is_pure())
    .set("facets", x.facets().len());
  Ok(r.into_value())
}

pub fn weights(a: &WeightsArgs) -> CliResult<Value> {
  let x = io::read_complex(&a.complex)?;
  let table = x.weight_table()?;
  let dims: Vec<usize> = match a.dim {
    Some(k) => {
      x.faces(k)?;
      vec![k]
    }
    None => (0..x.n()).collect(),
  };
  let mut by_dim = Vec::new();
  for k in dims {
    let faces: Vec<Value> = x
      .faces(k)?
      .iter()
      .enumerate()
      .map(|(i, s)| json!({ "face": simplex_labels(&x, s), "weight": rational_value(table.get(k, i)) }))
      .collect();
    by_dim.push(json!({ "dim": k, "total": rational_value(&table.total(k)), "faces": faces }));
  }
  let mut r = Report::new();
  r.set("weights", by_dim);
  Ok(r.into_value())
}

pub fn lift(a: &LiftArgs) -> CliResult<Value> {
  let (x, group, phi) = load_cochain(&a.input)?;
  let cover = lift_complex(&x, &phi, &group)?;
  cover.validate()?;
  if let Some(path) = &a.out {
    write_file(path, &io::write_complex(cover.total()))?;
  }
  let violated: Vec<Value> =
    cover.violated_triangles().iter().map(|&t| simplex_labels(&x, &x.triangles()[t])).collect();
  let mut r = Report::new();
  r.set("t", group.t())
    .set("base_f_vector", x.f_vector())
    .set("total_f_vector", cover.total().f_vector())
    .set("covering", cover.is_covering()?)
    .set("violated_triangles", violated)
    .set("extract_round_trip", cover.extract_cochain()? == phi);
  Ok(r.into_value())
}

pub fn deficiency(a: &CochainArgs) -> CliResult<Value> {
  let (x, group, phi) = load_cochain(a)?;
  let cover = lift_complex(&x, &phi, &group)?;
  let def = cover.deficiency_exact()?;
  let sandwich = verify_sandwich(&x, &group, &phi)?;
  let mut r = Report::new();
  r.rational("m", &def.m)
    .rational("d1_norm", &sandwich.upper)
    .rational("lower_bound", &sandwich.lower)
    .set("sandwich_holds", sandwich.holds)
    .set("violated_triangles", def.violated.len());
  Ok(r.into_value())
}

pub fn test(a: &TestArgs) -> CliResult<Value> {
  let (x, group, phi) = load_cochain(&a.input)?;
  let cover = lift_complex(&x, &phi, &group)?;
  let t = cover.triangle_test(a.samples, a.seed)?;
  let mut r = Report::new();
  r.set("samples", t.samples)
    .set("failures", t.failures)
    .set("frequency", t.frequency)
    .set("std_error", t.std_error)
    .rational("exact_failure", &t.exact_failure)
    .set("seed", t.seed);
  Ok(r.into_value())
}

pub fn h1(a: &H1Args, limits: SearchLimits) -> CliResult<Value> {
  let (x, group) = load_group(&a.input)?;
  let options = ExpansionOptions { gauge_fixed: !a.no_gauge, table: a.table };
  let rep = h1_exact_with(&x, &group, options, limits)?;
  let space = CochainSpace::new(&x, &group);
  let mut r = Report::new();
  r.rational("h1", &rep.h1)
    .rational("d1_norm", &rep.d1_norm)
    .rational("csy_norm", &rep.csy_norm)
    .set("witness", cochain_value(&space, &rep.witness))
    .set("scanned", rep.scanned);
  if let Some(rows) = &rep.table {
    let rows: Vec<Value> = rows
      .iter()
      .map(|row| {
        json!({
          "cochain": cochain_value(&space, &row.cochain),
          "d1_norm": rational_value(&row.d1_norm),
          "csy_norm": rational_value(&row.csy_norm),
          "ratio": rational_value(&row.ratio),
        })
      })
      .collect();
    r.set("table", rows);
  }
  Ok(r.into_value())
}

pub fn stability(a: &StabilityArgs, limits: SearchLimits) -> CliResult<Value> {
  let (x, group) = load_group(&a.input)?;
  let rep = coverlab::covers::cover_stability_exact(&x, &group, !a.no_gauge, limits)?;
  let space = CochainSpace::new(&x, &group);
  let mut r = Report::new();
  r.rational("stability", &rep.stability)
    .rational("deficiency", &rep.deficiency)
    .rational("distance", &rep.distance)
    .set("witness", cochain_value(&space, &rep.witness))
    .set("scanned", rep.scanned);
  Ok(r.into_value())
}

pub fn verify(a: &VerifyArgs, limits: SearchLimits) -> CliResult<Value> {
  let (x, group) = load_group(&a.input)?;
  let main = verify_main_theorem(&x, &group, limits)?;
  let mut r = Report::new();
  r.rational("h1", &main.h1)
    .rational("stability", &main.stability)
    .rational("fixity_bound", &main.fixity_bound)
    .rational("free_bound", &main.free_bound)
    .set("fixity", main.fixity)
    .set("t", main.t)
    .set("holds", main.holds);
  if let Some(path) = &a.cochain {
    let (cgroup, phi) = io::read_cochain(path, &x)?;
    if cgroup.spec() != group.spec() {
      return Err(CliError::Invalid(format!(
        "cochain group {} differs from --group {}",
        cgroup.spec(),
        group.spec()
      )));
    }
    let sandwich = verify_sandwich(&x, &group, &phi)?;
    let inputs = NearestInputs { h1_lower_bound: Some(main.h1.clone()), ..Default::default() };
    let nearest = nearest_cocycle_bound_check(&x, &group, &phi, inputs, limits)?;
    let mut s = Report::new();
    s.rational("lower", &sandwich.lower)
      .rational("deficiency", &sandwich.deficiency)
      .rational("upper", &sandwich.upper)
      .set("holds", sandwich.holds);
    let mut n = Report::new();
    n.rational("distance", &nearest.distance).set("holds", nearest.holds);
    if let Some(b) = &nearest.bound {
      n.rational("bound", b);
    }
    r.set("sandwich", s.into_value()).set("nearest", n.into_value());
  }
  Ok(r.into_value())
}

pub fn building(a: &BuildingArgs) -> CliResult<Value> {
  let l = subspace_lattice(a.q)?;
  let oc = order_complex(l.lattice())?;
  if let Some(path) = &a.out {
    write_file(path, &io::write_complex(oc.complex()))?;
  }
  let mut r = Report::new();
  r.set("q", a.q)
    .set("f_vector", oc.complex().f_vector())
    .set("lattice_elements", l.lattice().len());
  Ok(r.into_value())
}

pub fn gamma(a: &GammaArgs, limits: SearchLimits) -> CliResult<Value> {
  let l = subspace_lattice(a.q)?;
  let oc = order_complex(l.lattice())?;
  let scheme = match a.mode {
    GammaMode::Exact => OrderingScheme::gl_exact(&l, limits)?,
    GammaMode::Sampled => OrderingScheme::gl_sampled(&l, a.samples, a.seed)?,
  };
  // δ does not depend on the coefficient group; any group gives the weights
  let z2 = GroupAction::cyclic(2)?;
  let space = CochainSpace::new(oc.complex(), &z2);
  let cert = gamma_certificate(
    &oc,
    l.lattice(),
    &space,
    &scheme,
    GammaOptions { verify_discs: !a.no_verify },
  )?;
  let mut r = Report::new();
  r.set("q", a.q)
    .rational("gamma", &cert.gamma)
    .set("mode", serde_json::to_value(a.mode).expect("mode"))
    .set("samples", scheme.len())
    .set(
      "seed",
      match a.mode {
        GammaMode::Exact => Value::Null,
        GammaMode::Sampled => json!(a.seed),
      },
    )
    .set("delta_constant", cert.constant)
    .set("fillings", cert.fillings)
    .set("discs_verified", cert.discs_verified)
    .set("max_disc_triangles", cert.max_disc_triangles)
    .set("gamma_at_most_9", cert.gamma <= ratio(9, 1));
  match &cert.lower_bound {
    Some(b) => r.rational("h1_lower_bound", b),
    None => r.set("h1_lower_bound", Value::Null),
  };
  if cert.gamma <= ratio(9, 1) {
    r.rational("certified_h1_bound", &ratio(1, 9));
  }
  Ok(r.into_value())
}

pub fn decode(a: &DecodeArgs) -> CliResult<Value> {
  let l = subspace_lattice(a.q)?;
  let x = io::read_complex(&a.complex)?;
  let oc = OrderComplex::identify(l.lattice(), x, |label| l.element_of_label(label))?;
  let (group, phi) = io::read_cochain(&a.cochain, oc.complex())?;
  let space = CochainSpace::new(oc.complex(), &group);
  let scheme = OrderingScheme::gl_sampled(&l, a.orderings, a.seed)?;
  let rep = decode_cochain(&oc, l.lattice(), &space, &phi, &scheme, DecodeOptions::default())?;
  if let Some(path) = &a.out {
    write_file(path, &io::write_cochain(&space, &rep.candidate))?;
  }
  let bound: Rational = ratio(9, 1) * &rep.d1_norm;
  let mut r = Report::new();
  r.rational("distance", &rep.distance)
    .rational("mean_distance", &rep.mean_distance)
    .rational("d1_norm", &rep.d1_norm)
    .rational("bound", &bound)
    .set("holds", rep.distance <= bound)
    .set("best_order", rep.best_order)
    .set("edge_checks", rep.edge_checks)
    .set("candidate", cochain_value(&space, &rep.candidate));
  Ok(r.into_value())
}
