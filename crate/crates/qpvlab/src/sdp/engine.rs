//! Primal-dual interior-point core over real symmetric blocks.
//!
//! Solves   minimize <C, X>  s.t.  <A_i, X> = b_i,  X in (+) S^{d_1} x ... x S^{d_k}
//! with Nesterov-Todd scaling and a Mehrotra predictor-corrector step. Complex
//! Hermitian problems reach this core through their real-symmetric embedding
//! (see the parent module). Constraint coefficients are sparse symmetric
//! triplets; the Schur complement is formed densely and factored by Cholesky.

use crate::linalg::real_symmetric_eigh;
use crate::{Error, Result};

/// Symmetric sparse coefficient matrix: upper-triangle triplets `(i, j, v)`
/// with `i <= j`; an off-diagonal triplet stands for both mirror entries.
#[derive(Debug, Clone, Default)]
pub struct SparseSym {
    pub entries: Vec<(u32, u32, f64)>,
}

impl SparseSym {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `<A, X>` with the symmetric convention (off-diagonals count twice).
    fn pair(&self, x: &[f64], d: usize) -> f64 {
        let mut s = 0.0;
        for &(i, j, v) in &self.entries {
            let (i, j) = (i as usize, j as usize);
            if i == j {
                s += v * x[i * d + i];
            } else {
                s += 2.0 * v * x[i * d + j];
            }
        }
        s
    }

    /// `dense += scale * A` (both triangles).
    fn add_into(&self, dense: &mut [f64], d: usize, scale: f64) {
        for &(i, j, v) in &self.entries {
            let (i, j) = (i as usize, j as usize);
            dense[i * d + j] += v * scale;
            if i != j {
                dense[j * d + i] += v * scale;
            }
        }
    }

    /// `W A W` for symmetric dense `W`, using outer products of `W`'s columns.
    fn congruence(&self, w: &[f64], d: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for &(i, j, v) in &self.entries {
            let (i, j) = (i as usize, j as usize);
            let wi = &w[i * d..(i + 1) * d];
            let wj = &w[j * d..(j + 1) * d];
            if i == j {
                for r in 0..d {
                    let f = v * wi[r];
                    let row = &mut out[r * d..(r + 1) * d];
                    for (c, val) in row.iter_mut().enumerate() {
                        *val += f * wj[c];
                    }
                }
            } else {
                for r in 0..d {
                    let f1 = v * wi[r];
                    let f2 = v * wj[r];
                    let row = &mut out[r * d..(r + 1) * d];
                    for (c, val) in row.iter_mut().enumerate() {
                        *val += f1 * wj[c] + f2 * wi[c];
                    }
                }
            }
        }
    }
}

/// One equality row: sparse coefficients on a subset of blocks.
#[derive(Debug, Clone, Default)]
pub struct EngineRow {
    pub coeffs: Vec<(usize, SparseSym)>,
}

/// Problem in engine form.
#[derive(Debug, Clone)]
pub struct EngineProblem {
    pub block_dims: Vec<usize>,
    /// Objective coefficient per block (minimize).
    pub objective: Vec<SparseSym>,
    pub rows: Vec<EngineRow>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct EngineSolution {
    pub status: EngineStatus,
    /// `<C, X>` at the final iterate (minimize sense).
    pub primal_value: f64,
    /// `b^T y` at the final iterate.
    pub dual_value: f64,
    pub iterations: usize,
    /// Dense row-major primal blocks.
    pub x_blocks: Vec<Vec<f64>>,
    /// Dense row-major dual slack blocks.
    pub z_blocks: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub max_iterations: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            gap_tol: 1e-9,
            feas_tol: 1e-9,
        }
    }
}

// dense d x d helpers ------------------------------------------------------

fn mat_mul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[k * d..(k + 1) * d];
            let orow = &mut out[i * d..(i + 1) * d];
            for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                *o += aik * bv;
            }
        }
    }
    out
}

fn symmetrize(a: &mut [f64], d: usize) {
    for i in 0..d {
        for j in (i + 1)..d {
            let v = 0.5 * (a[i * d + j] + a[j * d + i]);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
}

/// `Q diag(f(vals)) Q^T`.
fn spectral_fn(vals: &[f64], q: &[f64], d: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut scaled = vec![0.0; d * d]; // Q * diag
    for i in 0..d {
        for j in 0..d {
            scaled[i * d + j] = q[i * d + j] * f(vals[j]);
        }
    }
    // scaled * Q^T
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += scaled[i * d + k] * q[j * d + k];
            }
            out[i * d + j] = s;
        }
    }
    out
}

/// In-place dense Cholesky (lower). Returns false if not positive definite.
fn cholesky(m: &mut [f64], n: usize) -> bool {
    for i in 0..n {
        for j in 0..=i {
            let (head, tail) = m.split_at_mut(i * n);
            let (li, lj): (&[f64], &[f64]) = if i == j {
                (&tail[..j], &tail[..j])
            } else {
                (&tail[..j], &head[j * n..j * n + j])
            };
            let s: f64 = dot(li, lj);
            let v = m[i * n + j] - s;
            if i == j {
                if v <= 0.0 {
                    return false;
                }
                m[i * n + i] = v.sqrt();
            } else {
                m[i * n + j] = v / m[j * n + j];
            }
        }
    }
    true
}

fn chol_solve(l: &[f64], n: usize, rhs: &[f64]) -> Vec<f64> {
    let mut y = rhs.to_vec();
    for i in 0..n {
        let s = dot(&l[i * n..i * n + i], &y[..i]);
        y[i] = (y[i] - s) / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}

// per-block NT scaling data -------------------------------------------------

struct Scaling {
    /// `W = R R^T`.
    w: Vec<f64>,
    r: Vec<f64>,
    r_inv: Vec<f64>,
    /// Scaled eigenvalues (diagonal of the scaled point).
    lambda: Vec<f64>,
}

fn nt_scaling(x: &[f64], z: &[f64], d: usize) -> Result<Scaling> {
    let (xv, xq) = real_symmetric_eigh(x, d)?;
    if xv[0] <= 0.0 {
        return Err(Error::Sdp("primal iterate lost definiteness".into()));
    }
    let x_h = spectral_fn(&xv, &xq, d, |v| v.sqrt());
    let x_hi = spectral_fn(&xv, &xq, d, |v| 1.0 / v.sqrt());
    let m = mat_mul(&x_h, &mat_mul(z, &x_h, d), d);
    let mut msym = m;
    symmetrize(&mut msym, d);
    let (mv, mq) = real_symmetric_eigh(&msym, d)?;
    if mv[0] <= 0.0 {
        return Err(Error::Sdp("dual iterate lost definiteness".into()));
    }
    // R = X^{1/2} Qm diag(mv^{-1/4}), Rinv = diag(mv^{1/4}) Qm^T X^{-1/2}
    let mut qm_scaled = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            qm_scaled[i * d + j] = mq[i * d + j] * mv[j].powf(-0.25);
        }
    }
    let r = mat_mul(&x_h, &qm_scaled, d);
    let mut qm_t_scaled = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            // row i of diag(mv^{1/4}) Qm^T is mv[i]^{1/4} * column i of Qm
            qm_t_scaled[i * d + j] = mv[i].powf(0.25) * mq[j * d + i];
        }
    }
    let r_inv = mat_mul(&qm_t_scaled, &x_hi, d);
    let mut w = mat_mul(&r, &transpose(&r, d), d);
    symmetrize(&mut w, d);
    Ok(Scaling {
        w,
        r,
        r_inv,
        lambda: mv.iter().map(|v| v.sqrt()).collect(),
    })
}

fn transpose(a: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = a[i * d + j];
        }
    }
    out
}

/// Largest `alpha` with `I + alpha * G >= 0` for the scaled direction `G`,
/// shrunk by the fraction-to-boundary coefficient.
fn step_length(g_scaled: &[f64], d: usize, fraction: f64) -> Result<f64> {
    let (vals, _) = real_symmetric_eigh(g_scaled, d)?;
    let min = vals[0];
    if min >= 0.0 {
        Ok(1.0)
    } else {
        Ok((fraction / (-min)).min(1.0))
    }
}

pub fn solve_engine(p: &EngineProblem, opts: &EngineOptions) -> Result<EngineSolution> {
    let nb = p.block_dims.len();
    let m = p.rows.len();
    let total_dim: usize = p.block_dims.iter().sum();
    if total_dim == 0 {
        return Err(Error::Sdp("empty problem".into()));
    }

    let b_norm = 1.0 + max_abs(&p.rhs);
    let c_norm = 1.0
        + p.objective
            .iter()
            .flat_map(|c| c.entries.iter().map(|e| e.2.abs()))
            .fold(0.0f64, f64::max);

    let mut x: Vec<Vec<f64>> = p.block_dims.iter().map(|&d| eye(d, b_norm)).collect();
    let mut z: Vec<Vec<f64>> = p.block_dims.iter().map(|&d| eye(d, c_norm)).collect();
    let mut y = vec![0.0; m];

    let fraction = 0.98;
    let mut status = EngineStatus::MaxIterations;
    let mut iterations = 0;
    let mut primal_residual = f64::INFINITY;
    let mut dual_residual = f64::INFINITY;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;

        // residuals
        let mut rp = p.rhs.clone();
        for (i, row) in p.rows.iter().enumerate() {
            for (bi, a) in &row.coeffs {
                rp[i] -= a.pair(&x[*bi], p.block_dims[*bi]);
            }
        }
        let mut rd: Vec<Vec<f64>> = Vec::with_capacity(nb);
        for bi in 0..nb {
            let d = p.block_dims[bi];
            let mut r = vec![0.0; d * d];
            p.objective[bi].add_into(&mut r, d, 1.0);
            for (v, zi) in r.iter_mut().zip(z[bi].iter()) {
                *v -= zi;
            }
            rd.push(r);
        }
        for (i, row) in p.rows.iter().enumerate() {
            for (bi, a) in &row.coeffs {
                a.add_into(&mut rd[*bi], p.block_dims[*bi], -y[i]);
            }
        }

        let pobj: f64 = (0..nb)
            .map(|bi| p.objective[bi].pair(&x[bi], p.block_dims[bi]))
            .sum();
        let dobj = dot(&p.rhs, &y);
        let gap_rel = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        primal_residual = max_abs(&rp) / b_norm;
        dual_residual = rd
            .iter()
            .map(|r| max_abs(r))
            .fold(0.0f64, f64::max)
            / c_norm;

        if gap_rel <= opts.gap_tol
            && primal_residual <= opts.feas_tol
            && dual_residual <= opts.feas_tol
        {
            status = EngineStatus::Optimal;
            break;
        }

        // primal-infeasibility certificate: y-direction with A*(y) <= 0 and
        // b^T y > 0 (dual ray of the internal minimize form)
        if iter > 10 && iter % 5 == 0 {
            let yn = max_abs(&y);
            if yn > 1e5 {
                let scale = 1.0 / yn;
                let mut ray_ok = dot(&p.rhs, &y) * scale > 1e-6;
                if ray_ok {
                    for bi in 0..nb {
                        let d = p.block_dims[bi];
                        let mut ay = vec![0.0; d * d];
                        for (i, row) in p.rows.iter().enumerate() {
                            for (bj, a) in &row.coeffs {
                                if *bj == bi {
                                    a.add_into(&mut ay, d, y[i] * scale);
                                }
                            }
                        }
                        symmetrize(&mut ay, d);
                        let (vals, _) = real_symmetric_eigh(&ay, d)?;
                        if vals[d - 1] > 1e-7 {
                            ray_ok = false;
                            break;
                        }
                    }
                }
                if ray_ok {
                    status = EngineStatus::Infeasible;
                    break;
                }
            }
        }

        // NT scaling
        let scalings: Vec<Scaling> = {
            let mut s = Vec::with_capacity(nb);
            for bi in 0..nb {
                match nt_scaling(&x[bi], &z[bi], p.block_dims[bi]) {
                    Ok(sc) => s.push(sc),
                    Err(_) => {
                        return finish(
                            p, status, x, z, y, iterations, primal_residual, dual_residual,
                        )
                    }
                }
            }
            s
        };

        let n_cone: f64 = p.block_dims.iter().map(|&d| d as f64).sum();
        let mu: f64 = (0..nb)
            .map(|bi| dot(&x[bi], &z[bi]))
            .sum::<f64>()
            / n_cone;

        // Schur complement
        let mut schur = vec![0.0; m * m];
        let mut g_cache: Vec<Vec<(usize, Vec<f64>)>> = Vec::with_capacity(m);
        for (j, row) in p.rows.iter().enumerate() {
            let mut per_block = Vec::with_capacity(row.coeffs.len());
            for (bi, a) in &row.coeffs {
                let d = p.block_dims[*bi];
                let mut g = vec![0.0; d * d];
                if a.nnz() * 2 > d {
                    let dense = sparse_to_dense(a, d);
                    let tmp = mat_mul(&scalings[*bi].w, &dense, d);
                    g = mat_mul(&tmp, &scalings[*bi].w, d);
                } else {
                    a.congruence(&scalings[*bi].w, d, &mut g);
                }
                per_block.push((*bi, g));
            }
            for i in 0..=j {
                let mut s = 0.0;
                for (bi, a) in &p.rows[i].coeffs {
                    for (bj, g) in &per_block {
                        if bi == bj {
                            s += a.pair(g, p.block_dims[*bi]);
                        }
                    }
                }
                schur[i * m + j] = s;
                schur[j * m + i] = s;
            }
            g_cache.push(per_block);
        }
        // light static regularization keeps the factorization alive near the
        // optimum where the Schur matrix gets ill-conditioned
        let reg = 1e-14 * (0..m).map(|i| schur[i * m + i]).fold(0.0f64, f64::max) + 1e-300;
        for i in 0..m {
            schur[i * m + i] += reg;
        }
        let mut chol = schur.clone();
        if !cholesky(&mut chol, m) {
            let reg2 = 1e-8 * (0..m).map(|i| schur[i * m + i]).fold(0.0f64, f64::max);
            for i in 0..m {
                schur[i * m + i] += reg2;
            }
            chol = schur.clone();
            if !cholesky(&mut chol, m) {
                return finish(p, status, x, z, y, iterations, primal_residual, dual_residual);
            }
        }

        // generic direction solve for a given scaled complementarity target
        let solve_direction = |d_hat: &[Vec<f64>]| -> (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) {
            // rhs = rp - A(R D R^T) + A(W Rd W)
            let mut rhs = rp.clone();
            let mut s1: Vec<Vec<f64>> = Vec::with_capacity(nb);
            let mut wrdw: Vec<Vec<f64>> = Vec::with_capacity(nb);
            for bi in 0..nb {
                let d = p.block_dims[bi];
                let sc = &scalings[bi];
                let tmp = mat_mul(&sc.r, &d_hat[bi], d);
                let mut s1b = mat_mul(&tmp, &transpose(&sc.r, d), d);
                symmetrize(&mut s1b, d);
                let tmp2 = mat_mul(&sc.w, &rd[bi], d);
                let mut wr = mat_mul(&tmp2, &sc.w, d);
                symmetrize(&mut wr, d);
                s1.push(s1b);
                wrdw.push(wr);
            }
            for (i, row) in p.rows.iter().enumerate() {
                for (bi, a) in &row.coeffs {
                    let d = p.block_dims[*bi];
                    rhs[i] += a.pair(&wrdw[*bi], d) - a.pair(&s1[*bi], d);
                }
            }
            let dy = chol_solve(&chol, m, &rhs);
            // dZ = Rd - A*(dy); dX = S1 - W dZ W
            let mut dz: Vec<Vec<f64>> = rd.clone();
            for (i, row) in p.rows.iter().enumerate() {
                for (bi, a) in &row.coeffs {
                    a.add_into(&mut dz[*bi], p.block_dims[*bi], -dy[i]);
                }
            }
            let mut dx: Vec<Vec<f64>> = Vec::with_capacity(nb);
            for bi in 0..nb {
                let d = p.block_dims[bi];
                let sc = &scalings[bi];
                let tmp = mat_mul(&sc.w, &dz[bi], d);
                let mut wdzw = mat_mul(&tmp, &sc.w, d);
                symmetrize(&mut wdzw, d);
                let mut dxb = s1[bi].clone();
                for (o, v) in dxb.iter_mut().zip(wdzw.iter()) {
                    *o -= v;
                }
                dx.push(dxb);
            }
            (dx, dy, dz)
        };

        // scaled directions and step lengths
        let scaled_steps = |dx: &[Vec<f64>],
                            dz: &[Vec<f64>]|
         -> Result<(f64, f64, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
            let mut ap = 1.0f64;
            let mut ad = 1.0f64;
            let mut us = Vec::with_capacity(nb);
            let mut vs = Vec::with_capacity(nb);
            for bi in 0..nb {
                let d = p.block_dims[bi];
                let sc = &scalings[bi];
                let mut u = mat_mul(
                    &mat_mul(&sc.r_inv, &dx[bi], d),
                    &transpose(&sc.r_inv, d),
                    d,
                );
                symmetrize(&mut u, d);
                let mut v = mat_mul(&mat_mul(&transpose(&sc.r, d), &dz[bi], d), &sc.r, d);
                symmetrize(&mut v, d);
                let mut gu = vec![0.0; d * d];
                let mut gv = vec![0.0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let s = (sc.lambda[i] * sc.lambda[j]).sqrt();
                        gu[i * d + j] = u[i * d + j] / s;
                        gv[i * d + j] = v[i * d + j] / s;
                    }
                }
                ap = ap.min(step_length(&gu, d, fraction)?);
                ad = ad.min(step_length(&gv, d, fraction)?);
                us.push(u);
                vs.push(v);
            }
            Ok((ap, ad, us, vs))
        };

        // predictor (affine)
        let d_aff: Vec<Vec<f64>> = (0..nb)
            .map(|bi| {
                let d = p.block_dims[bi];
                let mut m_ = vec![0.0; d * d];
                for i in 0..d {
                    m_[i * d + i] = -scalings[bi].lambda[i];
                }
                m_
            })
            .collect();
        let (dx_a, _dy_a, dz_a) = solve_direction(&d_aff);
        let (ap_a, ad_a, u_a, v_a) = match scaled_steps(&dx_a, &dz_a) {
            Ok(t) => t,
            Err(_) => {
                return finish(p, status, x, z, y, iterations, primal_residual, dual_residual)
            }
        };

        let mut gap_aff = 0.0;
        for bi in 0..nb {
            let d = p.block_dims[bi];
            let mut xa = x[bi].clone();
            let mut za = z[bi].clone();
            for (o, v) in xa.iter_mut().zip(dx_a[bi].iter()) {
                *o += ap_a * v;
            }
            for (o, v) in za.iter_mut().zip(dz_a[bi].iter()) {
                *o += ad_a * v;
            }
            gap_aff += dot(&xa, &za);
            let _ = d;
        }
        let mu_aff = gap_aff / n_cone;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-10, 0.9999);

        // corrector
        let d_comb: Vec<Vec<f64>> = (0..nb)
            .map(|bi| {
                let d = p.block_dims[bi];
                let lam = &scalings[bi].lambda;
                let mut h = vec![0.0; d * d];
                // sym(U_aff V_aff)
                let uv = mat_mul(&u_a[bi], &v_a[bi], d);
                for i in 0..d {
                    for j in 0..d {
                        h[i * d + j] = 0.5 * (uv[i * d + j] + uv[j * d + i]);
                    }
                }
                let mut out = vec![0.0; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let target = if i == j {
                            sigma * mu - lam[i] * lam[i] - h[i * d + i]
                        } else {
                            -h[i * d + j]
                        };
                        out[i * d + j] = 2.0 * target / (lam[i] + lam[j]);
                    }
                }
                out
            })
            .collect();
        let (dx, dy, dz) = solve_direction(&d_comb);
        let (ap, ad, _, _) = match scaled_steps(&dx, &dz) {
            Ok(t) => t,
            Err(_) => {
                return finish(p, status, x, z, y, iterations, primal_residual, dual_residual)
            }
        };

        for bi in 0..nb {
            let d = p.block_dims[bi];
            for (o, v) in x[bi].iter_mut().zip(dx[bi].iter()) {
                *o += ap * v;
            }
            for (o, v) in z[bi].iter_mut().zip(dz[bi].iter()) {
                *o += ad * v;
            }
            symmetrize(&mut x[bi], d);
            symmetrize(&mut z[bi], d);
        }
        for (yi, v) in y.iter_mut().zip(dy.iter()) {
            *yi += ad * v;
        }
    }

    finish(p, status, x, z, y, iterations, primal_residual, dual_residual)
}

fn eye(d: usize, scale: f64) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = scale;
    }
    m
}

fn sparse_to_dense(a: &SparseSym, d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    a.add_into(&mut out, d, 1.0);
    out
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: &EngineProblem,
    status: EngineStatus,
    x: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
    y: Vec<f64>,
    iterations: usize,
    primal_residual: f64,
    dual_residual: f64,
) -> Result<EngineSolution> {
    let pobj: f64 = (0..p.block_dims.len())
        .map(|bi| p.objective[bi].pair(&x[bi], p.block_dims[bi]))
        .sum();
    let dobj = dot(&p.rhs, &y);
    Ok(EngineSolution {
        status,
        primal_value: pobj,
        dual_value: dobj,
        iterations,
        x_blocks: x,
        z_blocks: z,
        y,
        primal_residual,
        dual_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triplets(v: &[(u32, u32, f64)]) -> SparseSym {
        SparseSym { entries: v.to_vec() }
    }

    #[test]
    fn scalar_lp_as_sdp() {
        // minimize x s.t. x = 3, x >= 0  (1x1 block)
        let p = EngineProblem {
            block_dims: vec![1],
            objective: vec![triplets(&[(0, 0, 1.0)])],
            rows: vec![EngineRow {
                coeffs: vec![(0, triplets(&[(0, 0, 1.0)]))],
            }],
            rhs: vec![3.0],
        };
        let s = solve_engine(&p, &EngineOptions::default()).unwrap();
        assert_eq!(s.status, EngineStatus::Optimal);
        assert!((s.primal_value - 3.0).abs() < 1e-7);
    }

    #[test]
    fn trace_constrained_min_eig() {
        // minimize <C, X> s.t. Tr X = 1, X >= 0 with C = diag(2, 5):
        // optimum 2 at X = e0 e0^T
        let p = EngineProblem {
            block_dims: vec![2],
            objective: vec![triplets(&[(0, 0, 2.0), (1, 1, 5.0)])],
            rows: vec![EngineRow {
                coeffs: vec![(0, triplets(&[(0, 0, 1.0), (1, 1, 1.0)]))],
            }],
            rhs: vec![1.0],
        };
        let s = solve_engine(&p, &EngineOptions::default()).unwrap();
        assert_eq!(s.status, EngineStatus::Optimal);
        assert!((s.primal_value - 2.0).abs() < 1e-7, "{}", s.primal_value);
        assert!((s.dual_value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn off_diagonal_objective() {
        // minimize <C, X>, C = [[0,1],[1,0]], Tr X = 1: optimum -1 (eigvec of -1)
        let p = EngineProblem {
            block_dims: vec![2],
            objective: vec![triplets(&[(0, 1, 1.0)])],
            rows: vec![EngineRow {
                coeffs: vec![(0, triplets(&[(0, 0, 1.0), (1, 1, 1.0)]))],
            }],
            rhs: vec![1.0],
        };
        let s = solve_engine(&p, &EngineOptions::default()).unwrap();
        assert_eq!(s.status, EngineStatus::Optimal);
        assert!((s.primal_value + 1.0).abs() < 1e-7, "{}", s.primal_value);
    }

    #[test]
    fn two_blocks_coupled() {
        // minimize tr(X1) + tr(X2) with tr(X1) + tr(X2) = 4 and
        // X1_00 - X2_00 = 1: optimum 4 (any feasible), checks multi-block rows
        let p = EngineProblem {
            block_dims: vec![2, 2],
            objective: vec![
                triplets(&[(0, 0, 1.0), (1, 1, 1.0)]),
                triplets(&[(0, 0, 1.0), (1, 1, 1.0)]),
            ],
            rows: vec![
                EngineRow {
                    coeffs: vec![
                        (0, triplets(&[(0, 0, 1.0), (1, 1, 1.0)])),
                        (1, triplets(&[(0, 0, 1.0), (1, 1, 1.0)])),
                    ],
                },
                EngineRow {
                    coeffs: vec![
                        (0, triplets(&[(0, 0, 1.0)])),
                        (1, triplets(&[(0, 0, -1.0)])),
                    ],
                },
            ],
            rhs: vec![4.0, 1.0],
        };
        let s = solve_engine(&p, &EngineOptions::default()).unwrap();
        assert_eq!(s.status, EngineStatus::Optimal);
        assert!((s.primal_value - 4.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_by_ray() {
        // Tr X = -1 with X >= 0 is infeasible
        let p = EngineProblem {
            block_dims: vec![2],
            objective: vec![triplets(&[(0, 0, 1.0), (1, 1, 1.0)])],
            rows: vec![EngineRow {
                coeffs: vec![(0, triplets(&[(0, 0, 1.0), (1, 1, 1.0)]))],
            }],
            rhs: vec![-1.0],
        };
        let s = solve_engine(&p, &EngineOptions::default()).unwrap();
        assert_eq!(s.status, EngineStatus::Infeasible);
    }
}
