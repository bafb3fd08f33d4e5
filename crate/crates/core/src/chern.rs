//! Exact combinatorics of the degree data.
//!
//! A complete complex submanifold of `CP^n(λ)` cut out by `n − q` homogeneous
//! polynomials of degrees `a_{q+1}, …, a_n` contributes, through its Chern
//! classes, the integers `β_c`: the complete homogeneous symmetric sums of the
//! shifted degrees `a_j − 1`. Everything here is done in big integers and
//! rationals; `λ` only ever enters as a recorded power.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial as num_binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CurvatureVector;

/// Degrees of the polynomials defining a center of complex dimension `q` in `CP^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub n: usize,
    pub q: usize,
    pub degrees: Vec<u32>,
}

impl DegreeProfile {
    pub fn new(n: usize, q: usize, degrees: Vec<u32>) -> Result<Self> {
        if q >= n {
            return Err(Error::InvalidInput(format!("need q < n, got n = {n}, q = {q}")));
        }
        if degrees.len() != n - q {
            return Err(Error::InvalidInput(format!(
                "expected n - q = {} degrees, got {}",
                n - q,
                degrees.len()
            )));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 1) {
            return Err(Error::InvalidInput(format!("degrees must be >= 1, got {d}")));
        }
        Ok(DegreeProfile { n, q, degrees })
    }

    /// Degrees all equal to one: the totally geodesic `CP^q`.
    pub fn linear(n: usize, q: usize) -> Result<Self> {
        Self::new(n, q, vec![1; n.saturating_sub(q)])
    }

    pub fn is_linear(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }
}

/// Exact binomial coefficient; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    num_binomial(BigUint::from(n as u64), BigUint::from(k as u64))
}

fn binomial_int(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// `β_0, …, β_q`: complete homogeneous symmetric sums of `a_j − 1`.
pub fn beta_table(profile: &DegreeProfile) -> Vec<BigUint> {
    let q = profile.q;
    let mut h = vec![BigUint::zero(); q + 1];
    h[0] = BigUint::one();
    // Adding one variable x: h_c <- h_c + x h_{c-1} (in increasing c)
    for &a in &profile.degrees {
        let x = BigUint::from(a - 1);
        if x.is_zero() {
            continue;
        }
        for c in 1..=q {
            let add = &h[c - 1] * &x;
            h[c] += add;
        }
    }
    h
}

/// `β_c` for one `c` in `0..=q`.
pub fn beta(profile: &DegreeProfile, c: usize) -> Result<BigUint> {
    if c > profile.q {
        return Err(Error::InvalidInput(format!("c = {c} outside 0..={}", profile.q)));
    }
    Ok(beta_table(profile).swap_remove(c))
}

/// The rational `ρ_i` with `a(i)b(i)/(a(0)b(0)) = ρ_i λ^i`:
/// `(−1)^i C(n−1, q−i)/C(n−1, q) · β_i`.
pub fn ab_ratio(n: usize, q: usize, profile: &DegreeProfile, i: usize) -> Result<BigRational> {
    if profile.n != n || profile.q != q {
        return Err(Error::InvalidInput(format!(
            "profile is for (n, q) = ({}, {}), not ({n}, {q})",
            profile.n, profile.q
        )));
    }
    let b = beta(profile, i)?;
    Ok(ab_ratio_from_beta(n, q, i, &BigRational::from(BigInt::from(b))))
}

fn ab_ratio_from_beta(n: usize, q: usize, i: usize, beta_i: &BigRational) -> BigRational {
    let (n, q, i) = (n as i64, q as i64, i as i64);
    let r = BigRational::new(binomial_int(n - 1, q - i), binomial_int(n - 1, q)) * beta_i;
    if i % 2 == 1 {
        -r
    } else {
        r
    }
}

/// All of `β` and `ρ_i` for a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub beta: Vec<BigUint>,
    pub ab_ratio: Vec<BigRational>,
}

pub fn coefficient_table(profile: &DegreeProfile) -> CoefficientTable {
    let beta = beta_table(profile);
    let ab_ratio = beta
        .iter()
        .enumerate()
        .map(|(i, b)| {
            ab_ratio_from_beta(profile.n, profile.q, i, &BigRational::from(BigInt::from(b.clone())))
        })
        .collect();
    CoefficientTable { beta, ab_ratio }
}

/// Signed elementary symmetric sum `(−1)^c e_c(k_1², …, k_q²)`.
pub fn psi(k: &CurvatureVector, c: usize) -> f64 {
    let q = k.len();
    if c > q {
        return 0.0;
    }
    let mut e = vec![0.0; c + 1];
    e[0] = 1.0;
    for &ki in &k.k {
        let x = ki * ki;
        for j in (1..=c).rev() {
            e[j] += x * e[j - 1];
        }
    }
    if c % 2 == 1 {
        -e[c]
    } else {
        e[c]
    }
}

/// Outcome of an exact identity check, keeping both sides for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// `(i − (n−1))·C(n−1, n−1−i) = −(i+1)·C(n−1, n−2−i)` for `0 ≤ i ≤ n−2`.
pub fn quadric_binomial_identity(n: usize, i: usize) -> Result<IdentityCheck> {
    if n < 2 || i + 2 > n {
        return Err(Error::InvalidInput(format!("need 0 <= i <= n-2, got n = {n}, i = {i}")));
    }
    let (n, i) = (n as i64, i as i64);
    let lhs = BigInt::from(i - (n - 1)) * binomial_int(n - 1, n - 1 - i);
    let rhs = -BigInt::from(i + 1) * binomial_int(n - 1, n - 2 - i);
    Ok(IdentityCheck { holds: lhs == rhs, lhs, rhs })
}

/// Checks `(Σ_c (−1)^c β_c x^c) · ∏_j (1 + (a_j − 1) x) ≡ 1 (mod x^{q+1})`
/// in exact integers. Returns the truncated product coefficients on failure.
pub fn gamma_generating_check(profile: &DegreeProfile) -> std::result::Result<(), Vec<BigInt>> {
    let q = profile.q;
    let mut prod: Vec<BigInt> = beta_table(profile)
        .into_iter()
        .enumerate()
        .map(|(c, b)| if c % 2 == 1 { -BigInt::from(b) } else { BigInt::from(b) })
        .collect();
    for &a in &profile.degrees {
        let x = BigInt::from(a) - 1;
        for c in (1..=q).rev() {
            let add = &prod[c - 1] * &x;
            prod[c] += add;
        }
    }
    let ok = prod[0].is_one() && prod[1..].iter().all(Zero::is_zero);
    if ok {
        Ok(())
    } else {
        Err(prod)
    }
}

/// Curvature moments entering the correction term, stored as exact rationals
/// `β_0, …, β_q` normalized so that `a(i)b(i)/(a(0)b(0)) = ρ_i λ^i`.
///
/// Degree profiles give integer `β`. A surrogate center whose curvatures are
/// `zk` copies of `√λ` and `q − zk` zeros at every point has
/// `β_i = C(zk, i)·C(n−1, q)/C(n−1, q−i)`, generally not an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub n: usize,
    pub q: usize,
    pub beta: Vec<BigRational>,
}

impl Moments {
    pub fn from_profile(profile: &DegreeProfile) -> Self {
        Moments {
            n: profile.n,
            q: profile.q,
            beta: beta_table(profile)
                .into_iter()
                .map(|b| BigRational::from(BigInt::from(b)))
                .collect(),
        }
    }

    pub fn from_curvature_count(n: usize, q: usize, zk: usize) -> Result<Self> {
        if q >= n || zk > q {
            return Err(Error::InvalidInput(format!(
                "need zk <= q < n, got n = {n}, q = {q}, zk = {zk}"
            )));
        }
        let (ni, qi) = (n as i64, q as i64);
        let beta = (0..=q as i64)
            .map(|i| {
                BigRational::new(
                    binomial_int(zk as i64, i) * binomial_int(ni - 1, qi),
                    binomial_int(ni - 1, qi - i),
                )
            })
            .collect();
        Ok(Moments { n, q, beta })
    }

    pub fn beta_at(&self, i: usize) -> BigRational {
        self.beta.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `ρ_i` (coefficient of `λ^i`).
    pub fn ab_ratio(&self, i: usize) -> BigRational {
        ab_ratio_from_beta(self.n, self.q, i, &self.beta_at(i))
    }

    /// Volume coefficients `(−1)^i q! β_i / ((q−i)! (n−q+i−1)!)`, so that
    /// `a(i)·b(i)/vol(P) = 2 π^{n−q} λ^i` times this value.
    pub fn volume_coefficient(&self, i: usize) -> BigRational {
        let (n, q) = (self.n, self.q);
        let num = factorial(q);
        let den = factorial(q - i) * factorial(n - q + i - 1);
        let r = BigRational::new(BigInt::from(num), BigInt::from(den)) * self.beta_at(i);
        if i % 2 == 1 {
            -r
        } else {
            r
        }
    }
}

pub(crate) fn factorial(m: usize) -> BigUint {
    (1..=m as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
