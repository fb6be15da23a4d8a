//! Two-qubit states and projectors used by the protocol, plus Haar sampling
//! of input pairs with a prescribed overlap.
//!
//! Everything with dyadic-rational entries is available on any scalar lane
//! (including the exact one); `rho_beta` for general overlap and the samplers
//! live on the float lanes.

use crate::linalg::Mat;
use crate::scalar::{cre, czero, Real, Scalar};
use crate::{Error, Result};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

/// Single-qubit state vector.
pub type Qubit<T> = [Complex<T>; 2];

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// The antisymmetric singlet is the only odd one.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, BellState::PsiMinus)
    }

    pub fn label(&self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

/// Bell state vector in the computational basis `{|00>, |01>, |10>, |11>}`.
pub fn bell_state<T: Real>(which: BellState) -> Vec<Complex<T>> {
    let s = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let z = czero::<T>();
    let p = cre(s);
    let m = cre(-s);
    match which {
        BellState::PhiPlus => vec![p, z.clone(), z, p],
        BellState::PhiMinus => vec![p, z.clone(), z, m],
        BellState::PsiPlus => vec![z.clone(), p, p, z],
        BellState::PsiMinus => vec![z.clone(), p, m, z],
    }
}

/// Bell projector `|w><w|`; entries are dyadic so this exists on every lane.
pub fn bell_projector<T: Scalar>(which: BellState) -> Mat<T> {
    let half = T::one() / (T::one() + T::one());
    let h = cre(half.clone());
    let nh = cre(-half);
    let z = czero::<T>();
    let rows = match which {
        BellState::PhiPlus => vec![
            vec![h.clone(), z.clone(), z.clone(), h.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![h.clone(), z.clone(), z.clone(), h.clone()],
        ],
        BellState::PhiMinus => vec![
            vec![h.clone(), z.clone(), z.clone(), nh.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![nh.clone(), z.clone(), z.clone(), h.clone()],
        ],
        BellState::PsiPlus => vec![
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), h.clone(), z.clone()],
            vec![z.clone(), h.clone(), h.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
        ],
        BellState::PsiMinus => vec![
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), nh.clone(), z.clone()],
            vec![z.clone(), nh.clone(), h.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
        ],
    };
    Mat::from_rows(rows)
        .expect("static shape")
        .with_factors(vec![2, 2])
        .expect("4 = 2*2")
}

/// Two-qubit SWAP gate.
pub fn swap_gate<T: Scalar>() -> Mat<T> {
    let mut m = Mat::zeros(4, 4);
    m.set(0, 0, crate::scalar::cone());
    m.set(1, 2, crate::scalar::cone());
    m.set(2, 1, crate::scalar::cone());
    m.set(3, 3, crate::scalar::cone());
    m.with_factors(vec![2, 2]).expect("4 = 2*2")
}

/// Projectors onto the symmetric (rank 3) and antisymmetric (rank 1)
/// two-qubit subspaces: `(1 ± SWAP)/2`.
pub fn sym_antisym_projectors<T: Scalar>() -> (Mat<T>, Mat<T>) {
    let half = T::one() / (T::one() + T::one());
    let id = Mat::<T>::identity(4).with_factors(vec![2, 2]).expect("4 = 2*2");
    let swap = swap_gate::<T>();
    let sym = id.add(&swap).expect("shape").scale(half.clone());
    let asym = id.sub(&swap).expect("shape").scale(half);
    (sym, asym)
}

/// The verifiers' twirled two-qubit input state for overlap `beta`:
/// `(1/3)((1+b^2)/2) P_sym + ((1-b^2)/2) P_asym`.
pub fn rho_beta<T: Real>(beta: T) -> Result<Mat<T>> {
    if beta < T::zero() || beta > T::one() {
        return Err(Error::Domain(format!(
            "overlap must lie in [0,1], got {:?}",
            beta
        )));
    }
    let (sym, asym) = sym_antisym_projectors::<T>();
    let b2 = beta * beta;
    let half = T::of(0.5);
    let w_sym = (T::one() + b2) * half / T::of(3.0);
    let w_asym = (T::one() - b2) * half;
    sym.scale(w_sym).add(&asym.scale(w_asym))
}

/// `rho_beta(1) = P_sym/3` on an arbitrary scalar lane (entries in (1/6)Z).
pub fn rho_equal<T: Scalar>() -> Mat<T> {
    let third = T::one() / (T::one() + T::one() + T::one());
    sym_antisym_projectors::<T>().0.scale(third)
}

/// `rho_beta(0) = P_sym/6 + P_asym/2` on an arbitrary scalar lane.
pub fn rho_orthogonal<T: Scalar>() -> Mat<T> {
    let (sym, asym) = sym_antisym_projectors::<T>();
    let six = small_int::<T>(6);
    let two = small_int::<T>(2);
    sym.scale(T::one() / six)
        .add(&asym.scale(T::one() / two))
        .expect("shape")
}

/// Inputs of the sym/antisym protocol: `(P_sym/3, |Psi-><Psi-|)`.
pub fn rho_sym_antisym<T: Scalar>() -> (Mat<T>, Mat<T>) {
    (rho_equal::<T>(), bell_projector::<T>(BellState::PsiMinus))
}

/// Small positive integer as a scalar.
pub(crate) fn small_int<T: Scalar>(n: u32) -> T {
    let mut acc = T::zero();
    for _ in 0..n {
        acc = acc + T::one();
    }
    acc
}

/// Distinct sorted overlaps the protocol is run with.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSet {
    betas: Vec<f64>,
}

impl OverlapSet {
    pub fn new(mut betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::Domain("overlap set must be nonempty".into()));
        }
        for &b in &betas {
            if !(0.0..=1.0).contains(&b) || !b.is_finite() {
                return Err(Error::Domain(format!("overlap {b} outside [0,1]")));
            }
        }
        betas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if betas.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate overlaps".into()));
        }
        Ok(Self { betas })
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }
}

/// A sampled input pair with its overlap.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub psi: Qubit<f64>,
    pub phi: Qubit<f64>,
    pub beta: f64,
}

/// Draws `psi` Haar-uniform and `phi = b psi + e^{i d} sqrt(1-b^2) psi_perp`
/// with `d` uniform, so that `|<psi|phi>| = b` exactly and the pair average
/// reproduces `rho_beta(b)`.
pub fn sample_state_pair<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<StatePair> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("overlap {beta} outside [0,1]")));
    }
    let psi = haar_qubit(rng);
    let psi_perp = [-psi[1].conj(), psi[0].conj()];
    let delta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase = Complex::from_polar(1.0, delta);
    let c1 = Complex::new(beta, 0.0);
    let c2 = phase * (1.0 - beta * beta).sqrt();
    let phi = [
        c1 * psi[0] + c2 * psi_perp[0],
        c1 * psi[1] + c2 * psi_perp[1],
    ];
    Ok(StatePair { psi, phi, beta })
}

/// Haar-uniform qubit state (two complex Gaussians, normalized).
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit<f64> {
    loop {
        let g: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n2 = g.iter().map(|x| x * x).sum::<f64>();
        if n2 > 1e-12 {
            let inv = n2.sqrt().recip();
            return [
                Complex::new(g[0] * inv, g[1] * inv),
                Complex::new(g[2] * inv, g[3] * inv),
            ];
        }
    }
}

/// Overlap `<u|v>`.
pub fn qubit_inner<T: Real>(u: &Qubit<T>, v: &Qubit<T>) -> Complex<T> {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// The three mutually unbiased qubit bases: Z, X, Y eigenbases.
pub fn mub_bases<T: Real>() -> [[Qubit<T>; 2]; 3] {
    let one = crate::scalar::cone::<T>();
    let zero = czero::<T>();
    let s = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let h = cre(s);
    let ih = Complex::new(T::zero(), s);
    [
        [[one, zero], [zero, one]],
        [[h, h], [h, cre(-s)]],
        [[h, ih], [h, Complex::new(T::zero(), -s)]],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CMatrix, Rational, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn bell_vectors_orthonormal_complete() {
        let mut sum = CMatrix::zeros(4, 4);
        for w in BellState::ALL {
            let v = bell_state::<f64>(w);
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-15);
            sum = sum.add(&Mat::projector(&v)).unwrap();
            for w2 in BellState::ALL {
                if w2 != w {
                    let v2 = bell_state::<f64>(w2);
                    let ip: C64 = v.iter().zip(v2.iter()).map(|(a, b)| a.conj() * b).sum();
                    assert!(ip.norm() < 1e-15, "{w:?} vs {w2:?}");
                }
            }
        }
        assert!(sum.max_diff(&CMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn psi_minus_vector() {
        let v = bell_state::<f64>(BellState::PsiMinus);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].norm()) < 1e-15);
        assert!((v[1].re - s).abs() < 1e-15);
        assert!((v[2].re + s).abs() < 1e-15);
        assert!((v[3].norm()) < 1e-15);
    }

    #[test]
    fn projectors_rank_and_orthogonality() {
        let (sym, asym) = sym_antisym_projectors::<f64>();
        assert!((sym.trace().re - 3.0).abs() < 1e-15);
        assert!((asym.trace().re - 1.0).abs() < 1e-15);
        assert!(sym.add(&asym).unwrap().max_diff(&CMatrix::identity(4)) < 1e-15);
        assert!(sym.matmul(&asym).unwrap().max_abs() < 1e-15);
        assert!(sym.matmul(&sym).unwrap().max_diff(&sym) < 1e-15);
        assert!(asym.matmul(&asym).unwrap().max_diff(&asym) < 1e-15);
        let psi_minus = bell_projector::<f64>(BellState::PsiMinus);
        assert!(asym.max_diff(&psi_minus) < 1e-15);
    }

    #[test]
    fn rho_beta_matches_mixed_state_matrices() {
        // exact rational comparison against the analytic matrices
        let r0 = rho_equal::<Rational>();
        let r1 = rho_orthogonal::<Rational>();
        let six = |n: i64| Rational::new(n, 6);
        let expect0 = [
            [six(2), six(0), six(0), six(0)],
            [six(0), six(1), six(1), six(0)],
            [six(0), six(1), six(1), six(0)],
            [six(0), six(0), six(0), six(2)],
        ];
        let expect1 = [
            [six(1), six(0), six(0), six(0)],
            [six(0), six(2), six(-1), six(0)],
            [six(0), six(-1), six(2), six(0)],
            [six(0), six(0), six(0), six(1)],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(r0.get(i, j).re, expect0[i][j], "rho_equal[{i}][{j}]");
                assert_eq!(r0.get(i, j).im, Rational::new(0, 1));
                assert_eq!(r1.get(i, j).re, expect1[i][j], "rho_orthogonal[{i}][{j}]");
            }
        }
        // float builders agree
        assert!(rho_beta(1.0).unwrap().max_diff(&r0.to_f64()) < 1e-15);
        assert!(rho_beta(0.0).unwrap().max_diff(&r1.to_f64()) < 1e-15);
    }

    #[test]
    fn rho_beta_props() {
        let (sym, _) = sym_antisym_projectors::<f64>();
        let swap = swap_gate::<f64>();
        for &b in &[0.0f64, 0.25, 0.5, 0.75, 1.0] {
            let rho = rho_beta(b).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-14);
            let (psd, _) = rho.is_psd(1e-12).unwrap();
            assert!(psd);
            // commutes with SWAP
            let c = swap.matmul(&rho).unwrap().sub(&rho.matmul(&swap).unwrap()).unwrap();
            assert!(c.max_abs() < 1e-15);
            // projector weight
            let w = sym.trace_prod(&rho).unwrap().re;
            assert!((w - (1.0 + b * b) / 2.0).abs() < 1e-14, "beta={b}");
        }
        assert!(rho_beta(1.5).is_err());
        assert!(rho_beta(-0.1).is_err());
    }

    #[test]
    fn rho_sym_antisym_matrices() {
        let (rs, ra) = rho_sym_antisym::<f64>();
        assert!(rs.max_diff(&rho_beta(1.0).unwrap()) < 1e-15);
        assert!((ra.trace().re - 1.0).abs() < 1e-15);
        let expect = [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, -0.5, 0.0],
            [0.0, -0.5, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((ra.get(i, j).re - expect[i][j]).abs() < 1e-15);
            }
        }
        // uniform mixture of the three symmetric Bell projectors
        let mut mix = CMatrix::zeros(4, 4);
        for w in BellState::ALL {
            if w.is_symmetric() {
                mix = mix.add(&bell_projector::<f64>(w)).unwrap();
            }
        }
        assert!(mix.scale(1.0 / 3.0).max_diff(&rs) < 1e-15);
    }

    #[test]
    fn sampling_exact_overlaps() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p1 = sample_state_pair(1.0, &mut rng).unwrap();
            let ov = qubit_inner(&p1.psi, &p1.phi).norm();
            assert!((ov - 1.0).abs() < 1e-12);
            let p0 = sample_state_pair(0.0, &mut rng).unwrap();
            assert!(qubit_inner(&p0.psi, &p0.phi).norm() < 1e-12);
            let ph = sample_state_pair(0.5, &mut rng).unwrap();
            assert!((qubit_inner(&ph.psi, &ph.phi).norm() - 0.5).abs() < 1e-10);
            for q in [&p1.psi, &p1.phi, &ph.psi, &ph.phi] {
                let n: f64 = q.iter().map(|z| z.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_average_reproduces_rho_beta() {
        // Monte Carlo vs the closed form; 1e5 samples, max-entry 0.01
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let beta = 0.5;
        let mut acc = CMatrix::zeros(4, 4);
        let n = 100_000;
        for _ in 0..n {
            let p = sample_state_pair(beta, &mut rng).unwrap();
            let joint = [
                p.psi[0] * p.phi[0],
                p.psi[0] * p.phi[1],
                p.psi[1] * p.phi[0],
                p.psi[1] * p.phi[1],
            ];
            acc = acc.add(&Mat::projector(&joint)).unwrap();
        }
        let avg = acc.scale(1.0 / n as f64);
        let err = avg.max_diff(&rho_beta(beta).unwrap());
        assert!(err < 0.01, "MC deviation {err}");
    }

    #[test]
    fn mub_unbiasedness() {
        let bases = mub_bases::<f64>();
        for (i, b1) in bases.iter().enumerate() {
            for e in b1 {
                let n: f64 = e.iter().map(|z| z.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-14);
            }
            let ip = qubit_inner(&b1[0], &b1[1]);
            assert!(ip.norm() < 1e-14);
            for (j, b2) in bases.iter().enumerate() {
                if i == j {
                    continue;
                }
                for e in b1 {
                    for f in b2 {
                        let ov = qubit_inner(e, f).norm_sqr();
                        assert!((ov - 0.5).abs() < 1e-13, "bases {i},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn mub_equal_pairs_sum_to_primal_povm() {
        // (1/3) sum of the six equal-pair projectors equals 2*rho_equal,
        // the Pi_0 of the optimal PPT measurement.
        let bases = mub_bases::<f64>();
        let mut sum = CMatrix::zeros(4, 4);
        for b in &bases {
            for e in b {
                let joint = [
                    e[0] * e[0],
                    e[0] * e[1],
                    e[1] * e[0],
                    e[1] * e[1],
                ];
                sum = sum.add(&Mat::projector(&joint)).unwrap();
            }
        }
        let pi0 = rho_equal::<f64>().scale(2.0);
        assert!(sum.scale(1.0 / 3.0).max_diff(&pi0) < 1e-14);
    }
}
