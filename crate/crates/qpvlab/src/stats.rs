//! The verifiers' statistical machinery: exact binomial CDF/quantiles in log
//! space, central acceptance regions around `p_beta = (1+beta^2)/2`, the
//! attacker acceptance cases, and the Gaussian suppression bound.
//!
//! The exact binomial path is used up to [`EXACT_MAX_N`] trials; beyond that
//! the normal approximation takes over (the analysis works in that regime
//! anyway). All protocol-scale computations stay well below the crossover.

use crate::{Error, Result};

/// Largest `n` for which the binomial CDF is computed by exact log-space
/// summation; beyond this the normal approximation is used.
pub const EXACT_MAX_N: u64 = 100_000;

/// Central acceptance interval for one overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceRegion {
    pub beta: f64,
    pub r_rounds: u64,
    pub alpha: f64,
    /// `z_{alpha/2} / R`.
    pub lower: f64,
    /// `z_{1-alpha/2} / R`.
    pub upper: f64,
    /// Count form of `lower` (`z_{alpha/2}`).
    pub k_lo: u64,
    /// Count form of `upper` (`z_{1-alpha/2}`).
    pub k_hi: u64,
}

impl AcceptanceRegion {
    /// Honest answer-0 probability for this overlap.
    pub fn p_beta(&self) -> f64 {
        (1.0 + self.beta * self.beta) / 2.0
    }

    /// Whether an observed count of zeros passes the test.
    pub fn contains_count(&self, zeros: u64) -> bool {
        (self.k_lo..=self.k_hi).contains(&zeros)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::Domain(format!("probability {p} outside [0,1]")));
    }
    Ok(())
}

fn ln_factorials(n: u64) -> Vec<f64> {
    let mut t = vec![0.0; (n + 1) as usize];
    for i in 1..=n as usize {
        t[i] = t[i - 1] + (i as f64).ln();
    }
    t
}

/// `P(X <= k)` for `X ~ Bin(n, p)`, exact partial sum in log space for
/// `n <= EXACT_MAX_N`, normal approximation with continuity correction beyond.
pub fn binom_cdf(k: u64, n: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if k >= n {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0); // k < n here
    }
    if n > EXACT_MAX_N {
        let mu = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        return Ok(normal_cdf((k as f64 + 0.5 - mu) / sigma));
    }
    Ok(interval_mass_exact(n, p, 0, k))
}

/// `P(k_lo <= X <= k_hi)` for `X ~ Bin(n, p)`, exact for `n <= EXACT_MAX_N`.
pub fn binom_interval_mass(n: u64, p: f64, k_lo: u64, k_hi: u64) -> Result<f64> {
    check_p(p)?;
    if k_lo > k_hi || k_lo > n {
        return Ok(0.0);
    }
    let k_hi = k_hi.min(n);
    if p == 0.0 {
        return Ok(if k_lo == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if k_hi == n { 1.0 } else { 0.0 });
    }
    if n > EXACT_MAX_N {
        let mu = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let hi = normal_cdf((k_hi as f64 + 0.5 - mu) / sigma);
        let lo = if k_lo == 0 {
            0.0
        } else {
            normal_cdf((k_lo as f64 - 0.5 - mu) / sigma)
        };
        return Ok((hi - lo).max(0.0));
    }
    Ok(interval_mass_exact(n, p, k_lo, k_hi))
}

fn interval_mass_exact(n: u64, p: f64, k_lo: u64, k_hi: u64) -> f64 {
    let lnf = ln_factorials(n);
    let lp = p.ln();
    let lq = (1.0 - p).ln();
    let mut sum = 0.0;
    for j in k_lo..=k_hi {
        let ln_pmf = lnf[n as usize] - lnf[j as usize] - lnf[(n - j) as usize]
            + j as f64 * lp
            + (n - j) as f64 * lq;
        sum += ln_pmf.exp();
    }
    sum.min(1.0)
}

/// Smallest `k` with `CDF(k) >= q`.
pub fn binom_quantile(q: f64, n: u64, p: f64) -> Result<u64> {
    check_p(p)?;
    if !(0.0 < q && q < 1.0) {
        return Err(Error::Domain(format!("quantile level {q} outside (0,1)")));
    }
    if p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    if n > EXACT_MAX_N {
        let mu = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let k = (mu + sigma * probit(q) - 0.5).ceil().max(0.0);
        return Ok((k as u64).min(n));
    }
    let lnf = ln_factorials(n);
    let lp = p.ln();
    let lq = (1.0 - p).ln();
    let mut cum = 0.0;
    for j in 0..=n {
        let ln_pmf = lnf[n as usize] - lnf[j as usize] - lnf[(n - j) as usize]
            + j as f64 * lp
            + (n - j) as f64 * lq;
        cum += ln_pmf.exp();
        if cum >= q {
            return Ok(j);
        }
    }
    Ok(n)
}

/// Central `(1-alpha)` acceptance region around `p_beta = (1+beta^2)/2`.
/// Honest acceptance probability is at least `1 - alpha` by construction.
pub fn acceptance_region(beta: f64, r: u64, alpha: f64) -> Result<AcceptanceRegion> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("overlap {beta} outside [0,1]")));
    }
    if r == 0 {
        return Err(Error::Domain("need at least one round".into()));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    let p = (1.0 + beta * beta) / 2.0;
    let k_lo = binom_quantile(alpha / 2.0, r, p)?;
    let k_hi = binom_quantile(1.0 - alpha / 2.0, r, p)?;
    Ok(AcceptanceRegion {
        beta,
        r_rounds: r,
        alpha,
        lower: k_lo as f64 / r as f64,
        upper: k_hi as f64 / r as f64,
        k_lo,
        k_hi,
    })
}

/// Exact probability that an honest sample lands in the region.
pub fn honest_interval_mass(region: &AcceptanceRegion) -> Result<f64> {
    binom_interval_mass(region.r_rounds, region.p_beta(), region.k_lo, region.k_hi)
}

/// Which of the four acceptance cases applies to one overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptCase {
    /// `Delta_beta = 0`: the attack is statistically identical to honest.
    ZeroDelta,
    /// `p_beta != 1` but the attack answers `0` deterministically.
    DeterministicAttack,
    /// `p_beta = 1`: the region degenerates to the point `{1}`.
    DegeneratePoint,
    /// Generic binomial-vs-region overlap.
    Generic,
}

/// Per-overlap acceptance analysis.
#[derive(Debug, Clone)]
pub struct BetaAcceptance {
    pub beta: f64,
    pub case: AcceptCase,
    /// The case-formula value entering the product.
    pub mass: f64,
    /// Exact interval mass of the attack distribution (authoritative in
    /// simulations; equals `mass` except in the zero-delta case, where the
    /// case formula is `1 - alpha`).
    pub exact_mass: f64,
    /// Gaussian suppression estimate, when its regime applies.
    pub bound: Option<f64>,
}

/// `P(acc | attack)` across all overlaps: the product of the per-overlap
/// case values. Cases follow the protocol analysis: zero deviation gives
/// `1 - alpha` per overlap, a degenerate `p_beta = 1` region gives
/// `(p_ab)^R`, a deterministic attack against a proper region gives 0, and
/// the generic case is the exact binomial interval mass.
pub fn attacker_accept_prob(
    delta: &[f64],
    regions: &[AcceptanceRegion],
    p_ab: &[f64],
) -> Result<f64> {
    Ok(attacker_accept_breakdown(delta, regions, p_ab)?
        .iter()
        .map(|b| b.mass)
        .product())
}

/// Per-overlap breakdown behind [`attacker_accept_prob`].
pub fn attacker_accept_breakdown(
    delta: &[f64],
    regions: &[AcceptanceRegion],
    p_ab: &[f64],
) -> Result<Vec<BetaAcceptance>> {
    if delta.len() != regions.len() || p_ab.len() != regions.len() {
        return Err(Error::Dim(format!(
            "misaligned lists: {} deltas, {} regions, {} attack probabilities",
            delta.len(),
            regions.len(),
            p_ab.len()
        )));
    }
    let mut out = Vec::with_capacity(regions.len());
    for ((&d, region), &pab) in delta.iter().zip(regions.iter()).zip(p_ab.iter()) {
        check_p(pab)?;
        let p = region.p_beta();
        let r = region.r_rounds;
        let exact = binom_interval_mass(r, pab, region.k_lo, region.k_hi)?;
        let (case, mass) = if d == 0.0 {
            let m = if p == 1.0 { 1.0 } else { 1.0 - region.alpha };
            (AcceptCase::ZeroDelta, m)
        } else if p == 1.0 {
            (AcceptCase::DegeneratePoint, pab.powi(r as i32))
        } else if pab == 1.0 {
            let m = if region.upper >= 1.0 { 1.0 } else { 0.0 };
            (AcceptCase::DeterministicAttack, m)
        } else {
            (AcceptCase::Generic, exact)
        };
        let bound = suppression_bound(d, r, region.alpha, p, pab).ok();
        out.push(BetaAcceptance {
            beta: region.beta,
            case,
            mass,
            exact_mass: exact,
            bound,
        });
    }
    Ok(out)
}

/// Closed-form Gaussian upper estimate of the per-overlap acceptance
/// probability:
/// `sqrt(2) f_ab / (sqrt(pi R) |Delta|) * exp(-((sqrt(R)|Delta| - f_p c)/f_ab)^2)`
/// with `c = erfinv(1-alpha)` and `f_x = sqrt(2 p_x (1-p_x))`.
///
/// Applies in the Gaussian regime only: both probabilities in `[1/2, 1)`,
/// nonzero deviation, and `R(1-p) >= 10`.
pub fn suppression_bound(delta: f64, r: u64, alpha: f64, p_beta: f64, p_ab: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::Domain(
            "zero deviation: no suppression, bound not applicable".into(),
        ));
    }
    for p in [p_beta, p_ab] {
        if !(0.5..1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "probability {p} outside the Gaussian regime [1/2, 1)"
            )));
        }
        if (r as f64) * (1.0 - p) < 10.0 {
            return Err(Error::Domain(format!(
                "R(1-p) = {} < 10: normal approximation invalid",
                (r as f64) * (1.0 - p)
            )));
        }
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    let c = erf_inv(1.0 - alpha);
    let f_p = (2.0 * p_beta * (1.0 - p_beta)).sqrt();
    let f_ab = (2.0 * p_ab * (1.0 - p_ab)).sqrt();
    let x = (r as f64).sqrt() * delta.abs();
    let prefactor = std::f64::consts::SQRT_2 * f_ab / ((std::f64::consts::PI * r as f64).sqrt() * delta.abs());
    let arg = (x - f_p * c) / f_ab;
    Ok(prefactor * (-arg * arg).exp())
}

/// Lower bound on `||Delta||_1` implied by a success-probability bound on the
/// `{0,1}` protocol: `p_succ <= u` forces `||Delta||_1 >= 3/2 - 2u`.
pub fn delta_relation(p_succ: f64) -> Result<f64> {
    if !(0.0..=0.75).contains(&p_succ) {
        return Err(Error::Domain(format!(
            "p_succ {p_succ} outside [0, 3/4]"
        )));
    }
    Ok((1.5 - 2.0 * p_succ).max(0.0))
}

/// Outcome of a two-sample proportion test.
#[derive(Debug, Clone)]
pub struct TwoSampleTest {
    pub z: f64,
    pub threshold: f64,
    pub indistinguishable: bool,
}

/// Two-sided two-sample proportion z-test at level `alpha`.
pub fn two_sample_proportion_test(
    k1: u64,
    n1: u64,
    k2: u64,
    n2: u64,
    alpha: f64,
) -> Result<TwoSampleTest> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Domain("empty sample".into()));
    }
    let p1 = k1 as f64 / n1 as f64;
    let p2 = k2 as f64 / n2 as f64;
    let pool = (k1 + k2) as f64 / (n1 + n2) as f64;
    let var = pool * (1.0 - pool) * (1.0 / n1 as f64 + 1.0 / n2 as f64);
    let z = if var == 0.0 {
        0.0
    } else {
        (p1 - p2) / var.sqrt()
    };
    let threshold = probit(1.0 - alpha / 2.0);
    Ok(TwoSampleTest {
        z,
        threshold,
        indistinguishable: z.abs() <= threshold,
    })
}

// ---------------------------------------------------------------------------
// Special functions: rational approximations, no external dependency.
// ---------------------------------------------------------------------------

/// Error function. Power series on `|x| <= 2`, complementary Chebyshev
/// fraction beyond; absolute error well under 1e-7 everywhere.
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let z = x.abs();
    if z <= 2.0 {
        // 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1))
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        for n in 1..80 {
            term *= -z2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        sign * sum * 2.0 / std::f64::consts::PI.sqrt()
    } else {
        sign * (1.0 - erfc_large(z))
    }
}

// Chebyshev-fraction approximation of erfc for z > 0 (fractional error
// ~1.2e-7, so absolute error below 1e-9 once z > 2).
fn erfc_large(z: f64) -> f64 {
    let t = 1.0 / (1.0 + 0.5 * z);
    t * (-z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277)))))))))
    .exp()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Inverse standard normal CDF (Acklam's rational approximation with one
/// Halley refinement through `erf`).
pub fn probit(q: f64) -> f64 {
    assert!(q > 0.0 && q < 1.0, "probit argument outside (0,1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if q < P_LOW {
        let u = (-2.0 * q.ln()).sqrt();
        (((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5])
            / ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0)
    } else if q <= 1.0 - P_LOW {
        let u = q - 0.5;
        let r = u * u;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * u
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let u = (-2.0 * (1.0 - q).ln()).sqrt();
        -((((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5])
            / ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0))
    };
    // One Halley step against the exact CDF residual.
    let e = normal_cdf(x) - q;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Inverse error function via the probit: `erfinv(p) = probit((p+1)/2)/sqrt(2)`.
pub fn erf_inv(p: f64) -> f64 {
    assert!(p > -1.0 && p < 1.0, "erf_inv argument outside (-1,1)");
    probit((p + 1.0) / 2.0) / std::f64::consts::SQRT_2
}
