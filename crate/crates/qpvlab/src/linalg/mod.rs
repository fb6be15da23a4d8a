//! Dense complex-matrix kernel.
//!
//! Matrices carry an optional tensor factorization (`factor_dims`) naming the
//! subsystem dimensions; the partial trace and partial transpose act on those
//! factors. Entries are `Complex<T>` for any ring scalar `T`, so the same code
//! serves the `f64` numeric lane and the exact rational lane used by the
//! certificate checks. Eigendecomposition and PSD tests require `T: Real`.

mod eigh;

pub(crate) use eigh::real_symmetric_eigh;

use crate::scalar::{cone, czero, Real, Scalar};
use crate::{Error, Result};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Which tensor factors each party holds. Partial transposition acts on the
/// factors owned by party B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    a_factors: Vec<usize>,
    b_factors: Vec<usize>,
}

impl Bipartition {
    /// Validates that `a` and `b` are disjoint, nonempty and together cover
    /// `0..n_factors` exactly once.
    pub fn new(a: Vec<usize>, b: Vec<usize>, n_factors: usize) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Bipartition("both parties must own factors".into()));
        }
        let mut seen = vec![false; n_factors];
        for &f in a.iter().chain(b.iter()) {
            if f >= n_factors {
                return Err(Error::Bipartition(format!(
                    "factor {f} out of range (n_factors = {n_factors})"
                )));
            }
            if seen[f] {
                return Err(Error::Bipartition(format!("factor {f} assigned twice")));
            }
            seen[f] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Bipartition("not all factors covered".into()));
        }
        Ok(Self { a_factors: a, b_factors: b })
    }

    /// Round-major split of `2n` factors: A owns `0..n`, B owns `n..2n`.
    pub fn half(n_factors: usize) -> Self {
        let n = n_factors / 2;
        Self {
            a_factors: (0..n).collect(),
            b_factors: (n..n_factors).collect(),
        }
    }

    /// Pair-major split: A owns even factors, B owns odd factors.
    pub fn pairs(n_factors: usize) -> Self {
        Self {
            a_factors: (0..n_factors).step_by(2).collect(),
            b_factors: (1..n_factors).step_by(2).collect(),
        }
    }

    pub fn a_factors(&self) -> &[usize] {
        &self.a_factors
    }

    pub fn b_factors(&self) -> &[usize] {
        &self.b_factors
    }
}

/// Dense matrix with complex entries, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T: Scalar> {
    rows: usize,
    cols: usize,
    /// Subsystem dimensions; nonempty only for square matrices where the
    /// tensor structure is known. Product equals `rows`.
    factors: Vec<usize>,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            factors: Vec::new(),
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = cone();
        }
        m
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dim("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            factors: Vec::new(),
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Column vector.
    pub fn col(entries: Vec<Complex<T>>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            factors: Vec::new(),
            data: entries,
        }
    }

    /// Attaches a tensor factorization. The product of the factor dimensions
    /// must equal the row count and the matrix must be square.
    pub fn with_factors(mut self, factors: Vec<usize>) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dim("factorization requires a square matrix".into()));
        }
        let prod: usize = factors.iter().product();
        if prod != self.rows {
            return Err(Error::Dim(format!(
                "factor product {prod} != dimension {}",
                self.rows
            )));
        }
        self.factors = factors;
        Ok(self)
    }

    /// Tensor factorization into `n` qubit factors (dimension must be `2^n`).
    pub fn with_qubit_factors(self) -> Result<Self> {
        let mut n = 0;
        let mut d = 1;
        while d < self.rows {
            d *= 2;
            n += 1;
        }
        if d != self.rows {
            return Err(Error::Dim(format!("{} is not a power of two", self.rows)));
        }
        self.with_factors(vec![2; n])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dim(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.clone() + b.clone();
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.clone() - b.clone();
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -a.clone();
        }
        out
    }

    /// Scales by a real scalar.
    pub fn scale(&self, s: T) -> Self {
        self.scale_c(Complex::new(s, T::zero()))
    }

    /// Scales by a complex scalar.
    pub fn scale_c(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.clone() * s.clone();
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dim(format!(
                "matmul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k].clone();
                if aik == czero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.data[i * other.cols + j].clone();
                    out.data[i * other.cols + j] =
                        cur + aik.clone() * other.data[k * other.cols + j].clone();
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        out.factors = self.factors.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        out.factors = self.factors.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.conj();
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        let mut t = czero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self.data[i * self.cols + i].clone();
        }
        t
    }

    /// Hilbert-Schmidt pairing `Tr[self * other]`.
    pub fn trace_prod(&self, other: &Self) -> Result<Complex<T>> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::Dim("trace_prod shape".into()));
        }
        let mut t = czero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                t = t + self.data[i * self.cols + k].clone()
                    * other.data[k * other.cols + i].clone();
            }
        }
        Ok(t)
    }

    /// Kronecker product. Factor lists concatenate when both operands carry
    /// them; otherwise the result carries none.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.data[i1 * self.cols + j1].clone();
                if a == czero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let i = i1 * other.rows + i2;
                        let j = j1 * other.cols + j2;
                        out.data[i * cols + j] = a.clone() * other.data[i2 * other.cols + j2].clone();
                    }
                }
            }
        }
        if !self.factors.is_empty() && !other.factors.is_empty() {
            out.factors = self
                .factors
                .iter()
                .chain(other.factors.iter())
                .copied()
                .collect();
        }
        out
    }

    /// `|u><v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        let mut out = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                out.data[i * v.len() + j] = a.clone() * b.conj();
            }
        }
        out
    }

    /// `|u><u|`.
    pub fn projector(u: &[Complex<T>]) -> Self {
        Self::outer(u, u)
    }

    fn require_factors(&self) -> Result<&[usize]> {
        if self.factors.is_empty() {
            return Err(Error::MissingFactors);
        }
        Ok(&self.factors)
    }

    /// Reorders tensor factors: position `p` of the result holds the factor
    /// that was at `order[p]`. `order` must be a permutation.
    pub fn permute_factors(&self, order: &[usize]) -> Result<Self> {
        let factors = self.require_factors()?;
        let nf = factors.len();
        if order.len() != nf {
            return Err(Error::Dim("permutation length".into()));
        }
        let mut seen = vec![false; nf];
        for &p in order {
            if p >= nf || seen[p] {
                return Err(Error::Dim("not a permutation".into()));
            }
            seen[p] = true;
        }
        let new_factors: Vec<usize> = order.iter().map(|&p| factors[p]).collect();
        let old_strides = strides(factors);
        let new_strides = strides(&new_factors);
        let d = self.rows;
        // index map: row i (old digits) -> row i' (digits permuted)
        let mut map = vec![0usize; d];
        let mut digits = vec![0usize; nf];
        for (i, entry) in map.iter_mut().enumerate() {
            decode(i, factors, &old_strides, &mut digits);
            let mut i_new = 0;
            for p in 0..nf {
                i_new += digits[order[p]] * new_strides[p];
            }
            *entry = i_new;
        }
        let mut out = Self::zeros(d, d);
        out.factors = new_factors;
        for i in 0..d {
            for j in 0..d {
                out.data[map[i] * d + map[j]] = self.data[i * d + j].clone();
            }
        }
        Ok(out)
    }

    /// Transposes the factors owned by party B of the bipartition.
    pub fn partial_transpose(&self, part: &Bipartition) -> Result<Self> {
        let factors = self.require_factors()?.to_vec();
        let nf = factors.len();
        // Validate the bipartition against this factor structure.
        Bipartition::new(part.a_factors.clone(), part.b_factors.clone(), nf)?;
        self.partial_transpose_factors(&part.b_factors)
    }

    /// Transposes the given subset of factors.
    pub fn partial_transpose_factors(&self, t_factors: &[usize]) -> Result<Self> {
        let factors = self.require_factors()?.to_vec();
        let nf = factors.len();
        let st = strides(&factors);
        let d = self.rows;
        let mut transposed = vec![false; nf];
        for &f in t_factors {
            if f >= nf {
                return Err(Error::Bipartition(format!("factor {f} out of range")));
            }
            transposed[f] = true;
        }
        let mut out = Self::zeros(d, d);
        out.factors = factors.clone();
        let mut di = vec![0usize; nf];
        let mut dj = vec![0usize; nf];
        for i in 0..d {
            decode(i, &factors, &st, &mut di);
            for j in 0..d {
                decode(j, &factors, &st, &mut dj);
                let mut i2 = 0;
                let mut j2 = 0;
                for f in 0..nf {
                    let (a, b) = if transposed[f] { (dj[f], di[f]) } else { (di[f], dj[f]) };
                    i2 += a * st[f];
                    j2 += b * st[f];
                }
                out.data[i2 * d + j2] = self.data[i * d + j].clone();
            }
        }
        Ok(out)
    }

    /// Traces out every factor not in `keep`; the result acts on the kept
    /// factors in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let factors = self.require_factors()?.to_vec();
        let nf = factors.len();
        if keep.is_empty() {
            return Err(Error::Dim("partial_trace: empty keep set".into()));
        }
        let mut kept = vec![false; nf];
        for &f in keep {
            if f >= nf {
                return Err(Error::Bipartition(format!("factor {f} out of range")));
            }
            kept[f] = true;
        }
        let keep_sorted: Vec<usize> = (0..nf).filter(|&f| kept[f]).collect();
        let traced: Vec<usize> = (0..nf).filter(|&f| !kept[f]).collect();
        let keep_dims: Vec<usize> = keep_sorted.iter().map(|&f| factors[f]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&f| factors[f]).collect();
        let dk: usize = keep_dims.iter().product();
        let dt: usize = traced_dims.iter().product();
        let st = strides(&factors);
        let keep_strides = strides(&keep_dims);
        let traced_strides = strides(&traced_dims);

        let mut out = Self::zeros(dk, dk);
        out.factors = keep_dims.clone();
        let mut kd = vec![0usize; keep_sorted.len()];
        let mut ld = vec![0usize; keep_sorted.len()];
        let mut td = vec![0usize; traced.len()];
        for ik in 0..dk {
            decode(ik, &keep_dims, &keep_strides, &mut kd);
            for jk in 0..dk {
                decode(jk, &keep_dims, &keep_strides, &mut ld);
                let mut acc = czero();
                for t in 0..dt {
                    decode(t, &traced_dims, &traced_strides, &mut td);
                    let mut i = 0;
                    let mut j = 0;
                    for (p, &f) in keep_sorted.iter().enumerate() {
                        i += kd[p] * st[f];
                        j += ld[p] * st[f];
                    }
                    for (p, &f) in traced.iter().enumerate() {
                        i += td[p] * st[f];
                        j += td[p] * st[f];
                    }
                    acc = acc + self.data[i * self.cols + j].clone();
                }
                out.data[ik * dk + jk] = acc;
            }
        }
        Ok(out)
    }

    /// Largest entry deviation from `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| {
                let d = a.clone() - b.clone();
                let re = d.re.to_f64().unwrap_or(f64::INFINITY).abs();
                let im = d.im.to_f64().unwrap_or(f64::INFINITY).abs();
                re.hypot(im)
            })
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|a| {
                let re = a.re.to_f64().unwrap_or(f64::INFINITY).abs();
                let im = a.im.to_f64().unwrap_or(f64::INFINITY).abs();
                re.hypot(im)
            })
            .fold(0.0, f64::max)
    }

    /// Converts entries to `f64`, keeping the factor structure.
    pub fn to_f64(&self) -> Mat<f64> {
        Mat::<f64> {
            rows: self.rows,
            cols: self.cols,
            factors: self.factors.clone(),
            data: self
                .data
                .iter()
                .map(|c| {
                    Complex::new(
                        c.re.to_f64().expect("scalar convertible to f64"),
                        c.im.to_f64().expect("scalar convertible to f64"),
                    )
                })
                .collect(),
        }
    }
}

impl<T: Real> Mat<T> {
    /// Absolute Hermiticity tolerance for the `f64` lane.
    pub const HERM_TOL: f64 = 1e-12;

    /// `max_ij |M[i][j] - conj(M[j][i])|`.
    pub fn hermiticity_error(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.data[i * self.cols + j] - self.data[j * self.cols + i].conj();
                let mag = d.re.hypot(d.im);
                if mag > worst {
                    worst = mag;
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermiticity_error() <= tol
    }

    fn herm_check_tol(&self) -> T {
        // The pinned f64 tolerance, widened only when the type's own epsilon
        // demands it (f32).
        let scale = T::from_f64(self.max_abs()).unwrap_or_else(T::one);
        let eps_floor = T::epsilon() * scale * T::of(64.0);
        T::of(Self::HERM_TOL).max(eps_floor)
    }

    /// Eigendecomposition of a Hermitian matrix. Returns eigenvalues in
    /// ascending order and the matrix whose columns are the eigenvectors.
    pub fn eigh(&self) -> Result<(Vec<T>, Mat<T>)> {
        if !self.is_square() {
            return Err(Error::Dim("eigh requires a square matrix".into()));
        }
        let err = self.hermiticity_error();
        if err > self.herm_check_tol() {
            return Err(Error::NotHermitian(err.to_f64().unwrap_or(f64::NAN)));
        }
        eigh::hermitian_eigh(self)
    }

    /// PSD test with the minimum eigenvalue as witness.
    pub fn is_psd(&self, tol: T) -> Result<(bool, T)> {
        let (vals, _) = self.eigh()?;
        let min = vals.first().copied().unwrap_or_else(T::zero);
        Ok((min >= -tol, min))
    }

    /// Minimum eigenvalue (Hermitian input).
    pub fn min_eig(&self) -> Result<T> {
        let (vals, _) = self.eigh()?;
        Ok(vals.first().copied().unwrap_or_else(T::zero))
    }
}

#[inline]
pub(crate) fn strides(factors: &[usize]) -> Vec<usize> {
    let nf = factors.len();
    let mut st = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        st[f] = st[f + 1] * factors[f + 1];
    }
    st
}

#[inline]
pub(crate) fn decode(mut idx: usize, factors: &[usize], st: &[usize], out: &mut [usize]) {
    for f in 0..factors.len() {
        out[f] = idx / st[f];
        idx %= st[f];
    }
}

/// JSON exchange format: `{dims, factor_dims, entries: [[re, im], ...]}`
/// row-major.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: (usize, usize),
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factor_dims: Vec<usize>,
    pub entries: Vec<(f64, f64)>,
}

impl MatrixJson {
    pub fn from_mat(m: &Mat<f64>) -> Self {
        Self {
            dims: (m.rows, m.cols),
            factor_dims: m.factors.clone(),
            entries: m.data.iter().map(|c| (c.re, c.im)).collect(),
        }
    }

    pub fn into_mat(self) -> Result<Mat<f64>> {
        let (r, c) = self.dims;
        if self.entries.len() != r * c {
            return Err(Error::Dim(format!(
                "entry count {} != {}x{}",
                self.entries.len(),
                r,
                c
            )));
        }
        let m = Mat::<f64> {
            rows: r,
            cols: c,
            factors: Vec::new(),
            data: self
                .entries
                .into_iter()
                .map(|(re, im)| Complex::new(re, im))
                .collect(),
        };
        if self.factor_dims.is_empty() {
            Ok(m)
        } else {
            m.with_factors(self.factor_dims)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn phi_plus() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]
    }

    #[test]
    fn kron_identities() {
        let i2 = Mat::<f64>::identity(2).with_factors(vec![2]).unwrap();
        let i4 = i2.kron(&i2);
        assert_eq!(i4.factors(), &[2, 2]);
        assert!(i4.max_diff(&Mat::identity(4).with_factors(vec![2, 2]).unwrap()) == 0.0);
    }

    #[test]
    fn kron_basis_projector() {
        let p0 = Mat::projector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let p1 = Mat::projector(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let k = p0.kron(&p1);
        // diag(0, 1, 0, 0)
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert!((k.get(i, j).re - want).abs() < 1e-15);
                assert!(k.get(i, j).im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_transpose_bell_eigenvalues() {
        // Oracle: PT(|Phi+><Phi+|) = SWAP/2, whose action on the four Bell
        // vectors is checked directly, no eigensolver involved.
        let p = Mat::projector(&phi_plus()).with_factors(vec![2, 2]).unwrap();
        let part = Bipartition::new(vec![0], vec![1], 2).unwrap();
        let pt = p.partial_transpose(&part).unwrap();
        // PT should equal SWAP/2
        let mut swap = Mat::<f64>::zeros(4, 4);
        swap.set(0, 0, c(1.0, 0.0));
        swap.set(1, 2, c(1.0, 0.0));
        swap.set(2, 1, c(1.0, 0.0));
        swap.set(3, 3, c(1.0, 0.0));
        assert!(pt.max_diff(&swap.scale(0.5)) < 1e-15);
        // frozen spectrum from the oracle
        let (vals, _) = pt.eigh().unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn partial_transpose_involution_and_trace() {
        let m = random_hermitian(8, 7);
        let m = m.with_factors(vec![2, 2, 2]).unwrap();
        let part = Bipartition::new(vec![0], vec![1, 2], 3).unwrap();
        let pt = m.partial_transpose(&part).unwrap();
        assert!((pt.trace().re - m.trace().re).abs() < 1e-12);
        let back = pt.partial_transpose(&part).unwrap();
        assert!(back.max_diff(&m) < 1e-14);
    }

    #[test]
    fn partial_trace_product_state() {
        let a = random_hermitian(2, 3);
        let b = random_hermitian(3, 4);
        let tb = b.trace().re;
        let k = a
            .clone()
            .with_factors(vec![2])
            .unwrap()
            .kron(&b.with_factors(vec![3]).unwrap());
        let first = k.partial_trace(&[0]).unwrap();
        assert!(first.max_diff(&a.scale(tb)) < 1e-12);
    }

    #[test]
    fn partial_trace_bell_marginal() {
        let p = Mat::projector(&phi_plus()).with_factors(vec![2, 2]).unwrap();
        let m = p.partial_trace(&[0]).unwrap();
        assert!(m.max_diff(&Mat::identity(2).scale(0.5)) < 1e-15);
        let m1 = p.partial_trace(&[1]).unwrap();
        assert!(m1.max_diff(&Mat::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_empty_keep_fails() {
        let p = Mat::projector(&phi_plus()).with_factors(vec![2, 2]).unwrap();
        assert!(p.partial_trace(&[]).is_err());
    }

    #[test]
    fn missing_factors_is_error() {
        let m = Mat::<f64>::identity(4);
        let part = Bipartition::new(vec![0], vec![1], 2).unwrap();
        assert!(matches!(
            m.partial_transpose(&part),
            Err(Error::MissingFactors)
        ));
    }

    #[test]
    fn eigh_diag() {
        let m = Mat::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let (vals, _) = m.eigh().unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = Mat::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(m.eigh(), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigh_reconstruction_complex() {
        for (dim, seed) in [(2usize, 1u64), (5, 2), (16, 3), (33, 4)] {
            let m = random_hermitian(dim, seed);
            let (vals, v) = m.eigh().unwrap();
            assert_reconstructs(&m, &vals, &v, 1e-10);
        }
    }

    #[test]
    fn eigh_degenerate_spectrum() {
        // projector with a 3-fold degenerate eigenvalue
        let mut m = Mat::<f64>::identity(4);
        m.set(0, 0, c(0.0, 0.0));
        let (vals, v) = m.eigh().unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-14);
        for k in 1..4 {
            assert!((vals[k] - 1.0).abs() < 1e-14);
        }
        assert_reconstructs(&m, &vals, &v, 1e-12);
    }

    #[test]
    fn eigh_dim_256() {
        let m = random_hermitian(256, 99);
        let (vals, v) = m.eigh().unwrap();
        assert_reconstructs(&m, &vals, &v, 1e-10);
    }

    #[test]
    fn is_psd_witness() {
        let m = Mat::<f64>::identity(2).scale(-1.0);
        let (ok, w) = m.is_psd(1e-9).unwrap();
        assert!(!ok);
        assert!((w + 1.0).abs() < 1e-12);
        let (ok, w) = Mat::<f64>::identity(3).is_psd(1e-9).unwrap();
        assert!(ok);
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permute_factors_roundtrip() {
        let m = random_hermitian(8, 11).with_factors(vec![2, 2, 2]).unwrap();
        let p = m.permute_factors(&[2, 0, 1]).unwrap();
        // inverse permutation: position of factor f in [2,0,1]
        let back = p.permute_factors(&[1, 2, 0]).unwrap();
        assert!(back.max_diff(&m) < 1e-15);
    }

    #[test]
    fn permute_matches_kron_swap() {
        let a = random_hermitian(2, 21).with_factors(vec![2]).unwrap();
        let b = random_hermitian(2, 22).with_factors(vec![2]).unwrap();
        let ab = a.kron(&b);
        let ba = b.kron(&a);
        let perm = ab.permute_factors(&[1, 0]).unwrap();
        assert!(perm.max_diff(&ba) < 1e-15);
    }

    #[test]
    fn matrix_json_roundtrip() {
        let m = random_hermitian(4, 5).with_factors(vec![2, 2]).unwrap();
        let j = MatrixJson::from_mat(&m);
        let s = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&s).unwrap();
        let m2 = back.into_mat().unwrap();
        assert!(m.max_diff(&m2) == 0.0);
        assert_eq!(m2.factors(), m.factors());
    }

    #[test]
    fn rational_lane_trace_identities() {
        use crate::Rational;
        let half = Rational::new(1, 2);
        let mut m = Mat::<Rational>::identity(2);
        m = m.scale(half);
        let k = m.kron(&m);
        assert_eq!(k.trace().re, Rational::new(1, 1));
    }

    pub(super) fn random_hermitian(dim: usize, seed: u64) -> Mat<f64> {
        // splitmix64-driven entries; deterministic, no rand dependency here
        let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z = z ^ (z >> 31);
            (z as f64 / u64::MAX as f64) * 2.0 - 1.0
        };
        let mut m = Mat::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                if i == j {
                    m.set(i, j, c(next(), 0.0));
                } else {
                    let v = c(next(), next());
                    m.set(i, j, v);
                    m.set(j, i, v.conj());
                }
            }
        }
        m
    }

    fn assert_reconstructs(m: &Mat<f64>, vals: &[f64], v: &Mat<f64>, tol: f64) {
        let d = m.rows();
        let mut lam = Mat::<f64>::zeros(d, d);
        for (i, val) in vals.iter().enumerate() {
            lam.set(i, i, c(*val, 0.0));
        }
        let rec = v.matmul(&lam).unwrap().matmul(&v.dagger()).unwrap();
        let err = rec.max_diff(m);
        assert!(err <= tol, "reconstruction error {err} > {tol} (dim {d})");
        // orthonormality
        let vtv = v.dagger().matmul(v).unwrap();
        assert!(vtv.max_diff(&Mat::identity(d)) < 1e-10);
        // ascending
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }
}
