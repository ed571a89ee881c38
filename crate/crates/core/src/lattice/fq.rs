//! Linear algebra over the prime fields `F_2` and `F_3` in dimension four.
//!
//! Vectors are stored as digit arrays and encoded as integers `Σ v_i q^{3-i}`; a
//! subspace is canonically represented both by its reduced row echelon basis and by the
//! bitmask of the (at most 81) vectors it contains.

use rand::Rng as _;

use crate::rng::Rng;
use crate::{Error, Result};

pub const DIM: usize = 4;

pub type Vector = [u8; DIM];
pub type Matrix = [[u8; DIM]; DIM];

/// Prime field `F_q` for `q ∈ {2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
  q: u8,
}

impl PrimeField {
  pub fn new(q: u32) -> Result<Self> {
    match q {
      2 | 3 => Ok(Self { q: q as u8 }),
      _ => Err(Error::capacity(
        format!("subspace lattice over F_{q}"),
        "a field other than F_2, F_3",
        0,
      )),
    }
  }

  pub fn q(self) -> u8 {
    self.q
  }

  pub fn add(self, a: u8, b: u8) -> u8 {
    (a + b) % self.q
  }

  pub fn sub(self, a: u8, b: u8) -> u8 {
    (a + self.q - b) % self.q
  }

  pub fn mul(self, a: u8, b: u8) -> u8 {
    (a * b) % self.q
  }

  /// Multiplicative inverse of a nonzero element (every nonzero element of `F_2`, `F_3`
  /// is its own inverse).
  pub fn inv(self, a: u8) -> u8 {
    debug_assert!(a != 0);
    a
  }

  pub fn num_vectors(self) -> usize {
    (self.q as usize).pow(DIM as u32)
  }

  pub fn encode(self, v: &Vector) -> usize {
    v.iter().fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
  }

  pub fn decode(self, mut index: usize) -> Vector {
    let mut v = [0u8; DIM];
    for slot in v.iter_mut().rev() {
      *slot = (index % self.q as usize) as u8;
      index /= self.q as usize;
    }
    v
  }

  pub fn add_vec(self, a: &Vector, b: &Vector) -> Vector {
    std::array::from_fn(|i| self.add(a[i], b[i]))
  }

  pub fn scale_vec(self, c: u8, a: &Vector) -> Vector {
    std::array::from_fn(|i| self.mul(c, a[i]))
  }

  /// Reduced row echelon form of the span of `rows`, zero rows removed.
  pub fn rref(self, rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivot_row = 0;
    for col in 0..DIM {
      let Some(p) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else { continue };
      m.swap(pivot_row, p);
      let inv = self.inv(m[pivot_row][col]);
      m[pivot_row] = self.scale_vec(inv, &m[pivot_row]);
      for r in 0..m.len() {
        if r != pivot_row && m[r][col] != 0 {
          let factor = m[r][col];
          let scaled = self.scale_vec(factor, &m[pivot_row]);
          m[r] = std::array::from_fn(|i| self.sub(m[r][i], scaled[i]));
        }
      }
      pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
  }

  pub fn rank(self, rows: &[Vector]) -> usize {
    self.rref(rows).len()
  }

  /// Bitmask of all vectors in the span of `rows`.
  pub fn span_mask(self, rows: &[Vector]) -> u128 {
    let mut members = vec![[0u8; DIM]];
    for row in rows {
      let mut next = Vec::with_capacity(members.len() * self.q as usize);
      for v in &members {
        for c in 0..self.q {
          next.push(self.add_vec(v, &self.scale_vec(c, row)));
        }
      }
      next.sort_unstable();
      next.dedup();
      members = next;
    }
    members.iter().fold(0u128, |mask, v| mask | 1u128 << self.encode(v))
  }

  pub fn apply(self, m: &Matrix, v: &Vector) -> Vector {
    std::array::from_fn(|i| (0..DIM).fold(0u8, |acc, j| self.add(acc, self.mul(m[i][j], v[j]))))
  }

  /// Image of a vector bitmask under `m`.
  pub fn apply_mask(self, m: &Matrix, mask: u128) -> u128 {
    let mut out = 0u128;
    for i in 0..self.num_vectors() {
      if mask >> i & 1 == 1 {
        out |= 1u128 << self.encode(&self.apply(m, &self.decode(i)));
      }
    }
    out
  }

  pub fn is_invertible(self, m: &Matrix) -> bool {
    self.rank(m) == DIM
  }

  pub fn inverse(self, m: &Matrix) -> Option<Matrix> {
    // row-reduce [m | I]
    let mut aug: Vec<[u8; 2 * DIM]> = (0..DIM)
      .map(|i| std::array::from_fn(|j| if j < DIM { m[i][j] } else { (j - DIM == i) as u8 }))
      .collect();
    for col in 0..DIM {
      let p = (col..DIM).find(|&r| aug[r][col] != 0)?;
      aug.swap(col, p);
      let inv = self.inv(aug[col][col]);
      aug[col] = std::array::from_fn(|j| self.mul(inv, aug[col][j]));
      for r in 0..DIM {
        if r != col && aug[r][col] != 0 {
          let factor = aug[r][col];
          aug[r] = std::array::from_fn(|j| self.sub(aug[r][j], self.mul(factor, aug[col][j])));
        }
      }
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| aug[i][DIM + j])))
  }

  pub fn mat_mul(self, a: &Matrix, b: &Matrix) -> Matrix {
    std::array::from_fn(|i| {
      std::array::from_fn(|j| {
        (0..DIM).fold(0u8, |acc, k| self.add(acc, self.mul(a[i][k], b[k][j])))
      })
    })
  }

  /// `|GL_4(F_q)| = Π (q⁴ − q^i)`.
  pub fn gl_order(self) -> u64 {
    let q = self.q as u64;
    let n = q.pow(DIM as u32);
    (0..DIM as u32).map(|i| n - q.pow(i)).product()
  }

  /// Every invertible matrix, in lexicographic order of entries.
  pub fn general_linear_group(self) -> Vec<Matrix> {
    let q = self.q as u64;
    let total = q.pow((DIM * DIM) as u32);
    let mut out = Vec::with_capacity(self.gl_order() as usize);
    for index in 0..total {
      let mut rest = index;
      let mut m = [[0u8; DIM]; DIM];
      for i in (0..DIM).rev() {
        for j in (0..DIM).rev() {
          m[i][j] = (rest % q) as u8;
          rest /= q;
        }
      }
      if self.is_invertible(&m) {
        out.push(m);
      }
    }
    out
  }

  /// A uniform invertible matrix, by rejection.
  pub fn random_invertible(self, rng: &mut Rng) -> Matrix {
    loop {
      let m: Matrix = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(0..self.q)));
      if self.is_invertible(&m) {
        return m;
      }
    }
  }
}
