//! Hermitian eigendecomposition.
//!
//! A complex Hermitian matrix `M = A + iB` is embedded as the real symmetric
//! `[[A, -B], [B, A]]`, tridiagonalized by Householder reflections and
//! diagonalized with implicit-shift QL iteration (the classic EISPACK
//! tred2/tql2 pair). Each eigenvalue of `M` appears twice in the embedding;
//! complex eigenvectors are recovered by Gram-Schmidt selection over the
//! complexified real eigenvectors.

use super::Mat;
use crate::scalar::Real;
use crate::{Error, Result};
use num_complex::Complex;

/// Eigendecomposition of a real symmetric matrix, row-major `n x n`.
/// Returns eigenvalues ascending and the eigenvector matrix `v` (columns are
/// eigenvectors, `v[k*n + j]` = component `k` of eigenvector `j`).
pub(crate) fn real_symmetric_eigh<T: Real>(m: &[T], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let mut v = m.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e, n);
    tql2(&mut v, &mut d, &mut e, n)?;
    Ok((d, v))
}

// Householder reduction to tridiagonal form, derived from the Algol procedure
// tred2 (Bowdler, Martin, Reinsch, Wilkinson; EISPACK).
fn tred2<T: Real>(v: &mut [T], d: &mut [T], e: &mut [T], n: usize) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale = scale + d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = T::zero();
                v[j * n + i] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] = d[k] / scale;
                h = h + d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g = g + v[k * n + j] * d[k];
                    e[k] = e[k] + v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] = v[k * n + j] - (f * e[k] + g * d[k]);
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = T::zero();
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..(n - 1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g = g + v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] = v[k * n + j] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = T::zero();
    }
    v[(n - 1) * n + (n - 1)] = T::one();
    e[0] = T::zero();
}

// Symmetric tridiagonal QL with implicit shifts, derived from the Algol
// procedure tql2 (EISPACK). Sorts eigenvalues ascending.
fn tql2<T: Real>(v: &mut [T], d: &mut [T], e: &mut [T], n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m >= n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::EighNonConvergence);
                }

                let g = d[l];
                let two = T::of(2.0);
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item = *item - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g2 = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g2;
                    d[i + 1] = h + s * (c * g2 + s * d[i]);

                    for k in 0..n {
                        h = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }

    // Selection sort of eigenvalues and vectors, ascending.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for j in 0..n {
                v.swap(j * n + i, j * n + k);
            }
        }
    }
    Ok(())
}

/// Complex Hermitian eigendecomposition via the real-symmetric embedding.
pub(crate) fn hermitian_eigh<T: Real>(m: &Mat<T>) -> Result<(Vec<T>, Mat<T>)> {
    let d = m.rows();
    if d == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let n = 2 * d;
    let mut emb = vec![T::zero(); n * n];
    for i in 0..d {
        for j in 0..d {
            let z = m.get(i, j);
            emb[i * n + j] = z.re;
            emb[(i + d) * n + (j + d)] = z.re;
            emb[i * n + (j + d)] = -z.im;
            emb[(i + d) * n + j] = z.im;
        }
    }
    let (vals, vecs) = real_symmetric_eigh(&emb, n)?;

    // Each eigenvalue of m shows up twice; complexify the real eigenvectors
    // and keep a Gram-Schmidt-selected orthonormal set of d of them.
    let scale = {
        let a = vals[0].abs();
        let b = vals[n - 1].abs();
        a.max(b).max(T::one())
    };
    let accept_tol = T::of(1e-3);
    let mut out_vals: Vec<T> = Vec::with_capacity(d);
    let mut out_vecs: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
    for col in 0..n {
        if out_vals.len() == d {
            break;
        }
        let lam = vals[col];
        let mut v: Vec<Complex<T>> = (0..d)
            .map(|k| Complex::new(vecs[k * n + col], vecs[(k + d) * n + col]))
            .collect();
        // project out everything accepted so far with a nearby eigenvalue
        let cluster = T::epsilon() * scale * T::of(256.0) + T::of(1e-11) * scale;
        for (w_lam, w) in out_vals.iter().zip(out_vecs.iter()) {
            if (*w_lam - lam).abs() > cluster {
                continue;
            }
            let mut ip = Complex::new(T::zero(), T::zero());
            for (a, b) in w.iter().zip(v.iter()) {
                ip = ip + a.conj() * *b;
            }
            for (a, b) in w.iter().zip(v.iter_mut()) {
                *b = *b - *a * ip;
            }
        }
        let norm2 = v
            .iter()
            .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
        if norm2 > accept_tol {
            let inv = norm2.sqrt().recip();
            for z in v.iter_mut() {
                *z = Complex::new(z.re * inv, z.im * inv);
            }
            out_vals.push(lam);
            out_vecs.push(v);
        }
    }
    if out_vals.len() != d {
        return Err(Error::EighNonConvergence);
    }
    let mut v = Mat::zeros(d, d);
    for (j, vec) in out_vecs.iter().enumerate() {
        for (k, z) in vec.iter().enumerate() {
            v.set(k, j, *z);
        }
    }
    Ok((out_vals, v))
}
