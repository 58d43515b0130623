//! Dense matrices over F_{p^nu} with a Frobenius twist, and exact Gaussian
//! elimination.
//!
//! A [`SemilinMatrix`] (A, e) represents the map v -> A sigma^(-e)(v) in a
//! fixed basis. Composition follows (A, e)(B, f) = (A sigma^(-e)(B), e + f);
//! with nu = 1 every twist is the identity and everything is plain linear
//! algebra. Entries are stored flat (rows x cols x nu coordinate words) so
//! products and elimination run without per-entry allocation.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldParams};
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinMatrix {
    params: Arc<FieldParams>,
    rows: usize,
    cols: usize,
    twist: i64,
    /// Row-major; entry (i, j) occupies data[(i*cols + j)*nu ..][..nu].
    data: Vec<u64>,
}

impl SemilinMatrix {
    pub fn zeros(params: &Arc<FieldParams>, rows: usize, cols: usize, twist: i64) -> Self {
        let nu = params.nu();
        SemilinMatrix {
            params: params.clone(),
            rows,
            cols,
            twist,
            data: vec![0; rows * cols * nu],
        }
    }

    pub fn identity(params: &Arc<FieldParams>, n: usize) -> Self {
        let mut m = Self::zeros(params, n, n, 0);
        for i in 0..n {
            let idx = m.index(i, i);
            m.data[idx] = 1;
        }
        m
    }

    fn index(&self, i: usize, j: usize) -> usize {
        (i * self.cols + j) * self.params.nu()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        let idx = self.index(i, j);
        let nu = self.params.nu();
        self.params
            .from_coords(&self.data[idx..idx + nu])
            .expect("stored coords are valid")
    }

    pub fn set(&mut self, i: usize, j: usize, v: &FieldElem) {
        let idx = self.index(i, j);
        let nu = self.params.nu();
        self.data[idx..idx + nu].copy_from_slice(v.coords());
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Entrywise sigma^k (k-fold frobenius, k may be negative).
    pub fn map_frobenius(&self, k: i64) -> Self {
        if self.params.nu() == 1 || k == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        let nu = self.params.nu();
        for chunk in out.data.chunks_mut(nu) {
            let e = self
                .params
                .from_coords(chunk)
                .expect("valid coords")
                .frobenius_iter(k);
            chunk.copy_from_slice(e.coords());
        }
        out
    }

    /// Plain matrix product (twists are NOT consulted; see `compose`).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let nu = self.params.nu();
        let p = self.params.p();
        let mut out = Self::zeros(&self.params, self.rows, other.cols, self.twist);
        if nu == 1 {
            // accumulate with deferred reduction; p < 2^8 so no overflow risk
            // until ~2^48 terms
            for i in 0..self.rows {
                for kk in 0..self.cols {
                    let a = self.data[i * self.cols + kk];
                    if a == 0 {
                        continue;
                    }
                    let row_b = kk * other.cols;
                    let row_o = i * other.cols;
                    for j in 0..other.cols {
                        out.data[row_o + j] += a * other.data[row_b + j];
                    }
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] %= p;
                }
            }
            return Ok(out);
        }
        let mut prod = vec![0u64; nu];
        for i in 0..self.rows {
            for kk in 0..self.cols {
                let ai = self.index(i, kk);
                let a = &self.data[ai..ai + nu];
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..other.cols {
                    let bi = other.index(kk, j);
                    let b = &other.data[bi..bi + nu];
                    self.params.mul_slices(a, b, &mut prod);
                    let oi = out.index(i, j);
                    let (head, tail) = out.data.split_at_mut(oi);
                    let _ = head;
                    self.params.add_slices(&mut tail[..nu], &prod);
                }
            }
        }
        Ok(out)
    }

    /// Semilinear composition: (A, e)(B, f) = (A sigma^(-e)(B), e + f).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let twisted = other.map_frobenius(-self.twist);
        let mut prod = self.matmul(&twisted)?;
        prod.twist = self.twist + other.twist;
        Ok(prod)
    }

    /// The r-fold composite of this map with itself: the matrix
    /// A sigma^(-1)(A) ... sigma^(-(r-1))(A) with twist r * twist.
    pub fn iterate(&self, r: u32) -> Result<Self> {
        if r == 0 {
            let mut id = Self::identity(&self.params, self.rows);
            id.twist = 0;
            return Ok(id);
        }
        let mut acc = self.clone();
        for _ in 1..r {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Rank by Gaussian elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let nu = self.params.nu();
        let mut m = self.data.clone();
        let rows = self.rows;
        let cols = self.cols;
        let mut rank = 0usize;
        let mut pivot_row = 0usize;
        let mut scratch = vec![0u64; nu];
        let at = |i: usize, j: usize| (i * cols + j) * nu;
        for col in 0..cols {
            // pivot search
            let mut pr = None;
            for i in pivot_row..rows {
                if !self.params.is_zero_slice(&m[at(i, col)..at(i, col) + nu]) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != pivot_row {
                for j in 0..cols {
                    let (a, b) = (at(pr, j), at(pivot_row, j));
                    for t in 0..nu {
                        m.swap(a + t, b + t);
                    }
                }
            }
            // normalize the pivot row
            let piv = self
                .params
                .from_coords(&m[at(pivot_row, col)..at(pivot_row, col) + nu])
                .unwrap();
            let inv = piv.inv().expect("pivot is nonzero");
            for j in col..cols {
                let idx = at(pivot_row, j);
                self.params
                    .mul_slices(&m[idx..idx + nu], inv.coords(), &mut scratch);
                m[idx..idx + nu].copy_from_slice(&scratch);
            }
            // eliminate below
            for i in (pivot_row + 1)..rows {
                let lead = m[at(i, col)..at(i, col) + nu].to_vec();
                if self.params.is_zero_slice(&lead) {
                    continue;
                }
                for j in col..cols {
                    let pidx = at(pivot_row, j);
                    let pv = m[pidx..pidx + nu].to_vec();
                    self.params.mul_slices(&lead, &pv, &mut scratch);
                    let idx = at(i, j);
                    let mut cur = m[idx..idx + nu].to_vec();
                    self.params.sub_slices(&mut cur, &scratch);
                    m[idx..idx + nu].copy_from_slice(&cur);
                }
            }
            rank += 1;
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }
        rank
    }

    /// Kernel dimension of the underlying matrix. For a semilinear map this
    /// equals the kernel dimension of the map itself, since sigma is a
    /// bijection.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Deterministic textual serialization (basis order is the caller's).
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.twist);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.get(i, j).to_string());
            }
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Arc<FieldParams> {
        FieldParams::prime(5).unwrap()
    }

    #[test]
    fn rank_and_nullity() {
        let k = f5();
        let mut m = SemilinMatrix::zeros(&k, 3, 3, 1);
        // rows: (1,2,3), (2,4,6), (0,0,1) -> rank 2
        for (j, v) in [1u64, 2, 3].iter().enumerate() {
            m.set(0, j, &k.from_int(*v as i64));
        }
        for (j, v) in [2u64, 4, 6].iter().enumerate() {
            m.set(1, j, &k.from_int(*v as i64));
        }
        m.set(2, 2, &k.one());
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullity(), 1);
        let empty = SemilinMatrix::zeros(&k, 0, 0, 1);
        assert_eq!(empty.nullity(), 0);
    }

    #[test]
    fn twist_composition_rule() {
        // Over F_4, check (A,1)(B,1) = (A sigma^{-1}(B), 2) on entries.
        let k = FieldParams::extension(2, vec![1, 1, 1]).unwrap();
        let u = k.from_coords(&[0, 1]).unwrap();
        let mut a = SemilinMatrix::zeros(&k, 1, 1, 1);
        a.set(0, 0, &u);
        let mut b = SemilinMatrix::zeros(&k, 1, 1, 1);
        b.set(0, 0, &u);
        let c = a.compose(&b).unwrap();
        assert_eq!(c.twist(), 2);
        assert_eq!(c.get(0, 0), u.mul(&u.frobenius_inverse()));
    }

    #[test]
    fn iterate_matches_manual_product() {
        let k = f5();
        let mut a = SemilinMatrix::zeros(&k, 2, 2, 1);
        a.set(0, 0, &k.from_int(1));
        a.set(0, 1, &k.from_int(2));
        a.set(1, 1, &k.from_int(3));
        let a3 = a.iterate(3).unwrap();
        let manual = a.matmul(&a.matmul(&a).unwrap()).unwrap();
        assert_eq!(a3.get(0, 1), manual.get(0, 1));
        assert_eq!(a3.twist(), 3);
    }

    #[test]
    fn serialization_is_deterministic() {
        let k = f5();
        let mut a = SemilinMatrix::zeros(&k, 2, 2, 1);
        a.set(0, 1, &k.from_int(4));
        assert_eq!(a.serialize(), a.clone().serialize());
        assert!(a.serialize().starts_with("2 2 1\n"));
    }
}
