//! Finite permutation groups acting on `S = {0, .., t-1}`.
//!
//! Groups are always materialized: every element is enumerated once, in breadth-first
//! order from the generators (identity first, lexicographic within a level), and
//! referred to afterwards by its [`Elem`] index.

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

/// Default upper bound on the number of elements a closure may produce.
pub const DEFAULT_GROUP_GUARD: usize = 1_000_000;

/// Multiplication tables are precomputed up to this order.
const TABLE_LIMIT: usize = 2048;

/// A bijection of `{0, .., t-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
  pub fn new(images: Vec<u32>) -> Result<Self> {
    let t = images.len();
    let mut seen = vec![false; t];
    for &i in &images {
      if i as usize >= t || seen[i as usize] {
        return Err(Error::MalformedInput(format!("{images:?} is not a permutation")));
      }
      seen[i as usize] = true;
    }
    Ok(Self(images))
  }

  pub fn identity(t: usize) -> Self {
    Self((0..t as u32).collect())
  }

  pub fn images(&self) -> &[u32] {
    &self.0
  }

  pub fn len(&self) -> usize {
    self.0.len()
  }

  pub fn is_empty(&self) -> bool {
    self.0.is_empty()
  }

  pub fn apply(&self, s: u32) -> u32 {
    self.0[s as usize]
  }

  /// `self ∘ other`: apply `other` first.
  pub fn compose(&self, other: &Permutation) -> Permutation {
    Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
  }

  pub fn inverse(&self) -> Permutation {
    let mut inv = vec![0; self.0.len()];
    for (i, &j) in self.0.iter().enumerate() {
      inv[j as usize] = i as u32;
    }
    Permutation(inv)
  }

  pub fn fixed_points(&self) -> usize {
    self.0.iter().enumerate().filter(|(i, &j)| *i as u32 == j).count()
  }

  pub fn is_identity(&self) -> bool {
    self.fixed_points() == self.0.len()
  }
}

impl fmt::Display for Permutation {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, v) in self.0.iter().enumerate() {
      if i > 0 {
        write!(f, ",")?;
      }
      write!(f, "{v}")?;
    }
    Ok(())
  }
}

impl std::str::FromStr for Permutation {
  type Err = Error;

  /// Parses an image list such as `2,0,1`.
  fn from_str(s: &str) -> Result<Self> {
    let images = s
      .split(',')
      .map(|tok| {
        tok.trim().parse::<u32>().map_err(|_| Error::MalformedInput(format!("bad image {tok:?}")))
      })
      .collect::<Result<Vec<_>>>()?;
    Permutation::new(images)
  }
}

/// Index of an element within its [`GroupAction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u32);

impl Elem {
  pub const IDENTITY: Elem = Elem(0);

  pub fn is_identity(self) -> bool {
    self == Elem::IDENTITY
  }

  pub fn index(self) -> usize {
    self.0 as usize
  }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
  Symmetric,
  Cyclic,
  Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixityReport {
  pub fixity: usize,
  pub faithful: bool,
  pub free: bool,
}

/// A finite group together with its action on `S`.
#[derive(Clone, Debug)]
pub struct GroupAction {
  t: usize,
  kind: GroupKind,
  spec: String,
  elements: Vec<Permutation>,
  lookup: HashMap<Permutation, Elem>,
  inverses: Vec<Elem>,
  fixes: Vec<usize>,
  table: Option<Vec<Elem>>,
}

impl GroupAction {
  /// `Sym(t)` acting naturally on `t` points.
  pub fn symmetric(t: usize) -> Result<Self> {
    Self::symmetric_guarded(t, DEFAULT_GROUP_GUARD)
  }

  pub fn symmetric_guarded(t: usize, guard: usize) -> Result<Self> {
    if t == 0 {
      return Err(Error::MalformedInput("symmetric group needs t >= 1".into()));
    }
    let mut gens = Vec::new();
    if t >= 2 {
      let mut swap: Vec<u32> = (0..t as u32).collect();
      swap.swap(0, 1);
      gens.push(Permutation(swap));
    }
    if t >= 3 {
      gens.push(Permutation((0..t as u32).map(|i| (i + 1) % t as u32).collect()));
    }
    let mut g = Self::closure_of(t, &gens, guard)?;
    g.kind = GroupKind::Symmetric;
    g.spec = format!("sym:{t}");
    Ok(g)
  }

  /// The cyclic group `Z_t` acting regularly on `t` points.
  pub fn cyclic(t: usize) -> Result<Self> {
    if t == 0 {
      return Err(Error::MalformedInput("cyclic group needs t >= 1".into()));
    }
    let shift = Permutation((0..t as u32).map(|i| (i + 1) % t as u32).collect());
    let mut g = Self::closure_of(t, &[shift], DEFAULT_GROUP_GUARD)?;
    g.kind = GroupKind::Cyclic;
    g.spec = format!("cyc:{t}");
    Ok(g)
  }

  /// The group generated by `generators`.
  pub fn closure(generators: &[Permutation]) -> Result<Self> {
    Self::closure_guarded(generators, DEFAULT_GROUP_GUARD)
  }

  pub fn closure_guarded(generators: &[Permutation], guard: usize) -> Result<Self> {
    let t = generators
      .first()
      .map(Permutation::len)
      .ok_or_else(|| Error::MalformedInput("no generators".into()))?;
    if t == 0 || generators.iter().any(|g| g.len() != t) {
      return Err(Error::MalformedInput("generators must share a nonzero length".into()));
    }
    let mut g = Self::closure_of(t, generators, guard)?;
    g.spec =
      format!("gen:{}", generators.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"));
    Ok(g)
  }

  fn closure_of(t: usize, generators: &[Permutation], guard: usize) -> Result<Self> {
    let id = Permutation::identity(t);
    let mut elements = vec![id.clone()];
    let mut lookup = HashMap::from([(id, Elem(0))]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
      let mut level = Vec::new();
      for &i in &frontier {
        for g in generators {
          let p = g.compose(&elements[i]);
          if !lookup.contains_key(&p) && !level.contains(&p) {
            level.push(p);
          }
        }
      }
      level.sort_unstable();
      frontier.clear();
      for p in level {
        if elements.len() >= guard {
          return Err(Error::capacity("group closure", format!("more than {guard}"), guard as u64));
        }
        lookup.insert(p.clone(), Elem(elements.len() as u32));
        frontier.push(elements.len());
        elements.push(p);
      }
    }
    let inverses = elements.iter().map(|p| lookup[&p.inverse()]).collect();
    let fixes = elements.iter().map(Permutation::fixed_points).collect();
    let order = elements.len();
    let table = (order <= TABLE_LIMIT).then(|| {
      let mut table = Vec::with_capacity(order * order);
      for a in &elements {
        for b in &elements {
          table.push(lookup[&a.compose(b)]);
        }
      }
      table
    });
    Ok(Self {
      t,
      kind: GroupKind::Custom,
      spec: String::new(),
      elements,
      lookup,
      inverses,
      fixes,
      table,
    })
  }

  /// Size of the set `S` being acted on.
  pub fn t(&self) -> usize {
    self.t
  }

  pub fn order(&self) -> usize {
    self.elements.len()
  }

  pub fn kind(&self) -> &GroupKind {
    &self.kind
  }

  /// Spec string (`sym:t`, `cyc:t` or `gen:...`) that rebuilds this action.
  pub fn spec(&self) -> &str {
    &self.spec
  }

  pub fn identity(&self) -> Elem {
    Elem::IDENTITY
  }

  pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
    (0..self.elements.len() as u32).map(Elem)
  }

  pub fn permutation(&self, a: Elem) -> &Permutation {
    &self.elements[a.index()]
  }

  pub fn find(&self, p: &Permutation) -> Option<Elem> {
    self.lookup.get(p).copied()
  }

  /// Group product `a·b` (apply `b` first).
  pub fn mul(&self, a: Elem, b: Elem) -> Elem {
    match &self.table {
      Some(table) => table[a.index() * self.elements.len() + b.index()],
      None => self.lookup[&self.elements[a.index()].compose(&self.elements[b.index()])],
    }
  }

  pub fn inv(&self, a: Elem) -> Elem {
    self.inverses[a.index()]
  }

  pub fn apply(&self, a: Elem, s: u32) -> u32 {
    self.elements[a.index()].apply(s)
  }

  /// Number of points of `S` fixed by `a`.
  pub fn fix(&self, a: Elem) -> usize {
    self.fixes[a.index()]
  }

  /// `max_{g ≠ 1} fix(g)` together with the faithful/free flags.
  pub fn fixity(&self) -> Result<FixityReport> {
    let fixity = self.fixes.iter().skip(1).copied().max().ok_or(Error::UndefinedFixity)?;
    Ok(FixityReport { fixity, faithful: fixity < self.t, free: fixity == 0 })
  }

  /// Parses `sym:t`, `cyc:t` or `gen:<perm>;<perm>;...`.
  pub fn from_spec(spec: &str) -> Result<Self> {
    let spec = spec.trim();
    let (kind, rest) = spec
      .split_once(':')
      .ok_or_else(|| Error::MalformedInput(format!("group spec {spec:?} has no ':'")))?;
    let size = || {
      rest.trim().parse::<usize>().map_err(|_| Error::MalformedInput(format!("bad size {rest:?}")))
    };
    match kind.trim() {
      "sym" => Self::symmetric(size()?),
      "cyc" => Self::cyclic(size()?),
      "gen" => {
        let gens = rest
          .split(';')
          .filter(|p| !p.trim().is_empty())
          .map(str::parse)
          .collect::<Result<Vec<Permutation>>>()?;
        Self::closure(&gens)
      }
      other => Err(Error::MalformedInput(format!("unknown group kind {other:?}"))),
    }
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn perm(v: &[u32]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
  }

  #[test]
  fn orders() {
    assert_eq!(GroupAction::symmetric(3).unwrap().order(), 6);
    assert_eq!(GroupAction::symmetric(4).unwrap().order(), 24);
    assert_eq!(GroupAction::cyclic(4).unwrap().order(), 4);
    assert_eq!(GroupAction::closure(&[perm(&[1, 0, 2])]).unwrap().order(), 2);
    assert_eq!(GroupAction::symmetric(1).unwrap().order(), 1);
  }

  #[test]
  fn fixities() {
    let s3 = GroupAction::symmetric(3).unwrap().fixity().unwrap();
    assert_eq!(s3, FixityReport { fixity: 1, faithful: true, free: false });
    let c5 = GroupAction::cyclic(5).unwrap().fixity().unwrap();
    assert_eq!(c5, FixityReport { fixity: 0, faithful: true, free: true });
    let s2 = GroupAction::symmetric(2).unwrap().fixity().unwrap();
    assert!(s2.free);
    assert_eq!(GroupAction::symmetric(1).unwrap().fixity(), Err(Error::UndefinedFixity));
  }

  #[test]
  fn symmetric_fixity_is_t_minus_two() {
    for t in 3..=6 {
      assert_eq!(GroupAction::symmetric(t).unwrap().fixity().unwrap().fixity, t - 2);
    }
  }

  #[test]
  fn element_order_is_deterministic_and_starts_at_identity() {
    let a = GroupAction::symmetric(4).unwrap();
    let b = GroupAction::symmetric(4).unwrap();
    assert!(a.permutation(Elem::IDENTITY).is_identity());
    let pa: Vec<_> = a.elements().map(|e| a.permutation(e).clone()).collect();
    let pb: Vec<_> = b.elements().map(|e| b.permutation(e).clone()).collect();
    assert_eq!(pa, pb);
  }

  #[test]
  fn size_guard() {
    let err = GroupAction::symmetric_guarded(6, 100).unwrap_err();
    assert!(err.is_capacity());
  }

  #[test]
  fn specs_round_trip() {
    for spec in ["sym:3", "cyc:4", "gen:1,0,2;0,2,1"] {
      let g = GroupAction::from_spec(spec).unwrap();
      assert_eq!(g.spec(), spec);
    }
    assert_eq!(GroupAction::from_spec("gen:1,0,2;0,2,1").unwrap().order(), 6);
    assert!(GroupAction::from_spec("dih:4").is_err());
    assert!(GroupAction::from_spec("gen:1,1").is_err());
    assert!(GroupAction::from_spec("gen:1,0;0,1,2").is_err());
  }

  #[test]
  fn table_agrees_with_composition() {
    let g = GroupAction::symmetric(4).unwrap();
    for a in g.elements() {
      for b in g.elements() {
        let p = g.permutation(a).compose(g.permutation(b));
        assert_eq!(g.permutation(g.mul(a, b)), &p);
      }
      assert!(g.mul(a, g.inv(a)).is_identity());
    }
  }
}
