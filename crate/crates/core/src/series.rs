//! Exact-rational power series for the half-line first-return generating
//! functions, the `r*ₙ` coefficients and the renewal reconstruction of the
//! amplitude at the origin.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, WalkError};
use crate::walk::{check_phase, phase, Spinor, WalkParams};

/// Largest `n` accepted by [`path_oracle_first_return`].
pub const PATH_ENUMERATION_MAX: usize = 23;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formal power series in `z` truncated after `z^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigRational::one(), order)
    }

    /// `c·z^power`, truncated at `order`.
    pub fn monomial(power: usize, c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Pads with zeros or truncates so that the result has exactly `order + 1` terms.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// `f(z)/z`; the constant term must vanish. The order drops by one.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(WalkError::Domain(
                "division by z needs a vanishing constant term".into(),
            ));
        }
        if self.order() == 0 {
            return Err(WalkError::Domain("division by z of an order-0 series".into()));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Square root with constant term 1, from `s² = f` term by term.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(WalkError::Domain(
                "series square root needs constant term 1".into(),
            ));
        }
        let two = rat(2, 1);
        let mut s: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        s.push(BigRational::one());
        for n in 1..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                if !s[k].is_zero() && !s[n - k].is_zero() {
                    acc -= &s[k] * &s[n - k];
                }
            }
            s.push(acc / &two);
        }
        Ok(Self { coeffs: s })
    }

    /// Floating-point copy of the coefficients.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: Self) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: Self) -> PowerSeries {
        self + &(-rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient `C(1/2, k)`.
fn half_binomials(kmax: usize) -> Vec<BigRational> {
    let half = rat(1, 2);
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(BigRational::one());
    for k in 1..=kmax {
        let prev = &out[k - 1];
        let next = prev * (&half - BigRational::from_integer(BigInt::from(k - 1)))
            / BigRational::from_integer(BigInt::from(k));
        out.push(next);
    }
    out
}

/// `(1 + z⁴)^{1/2}` through `z^order`, by the binomial series.
pub fn sqrt1z4_series(order: usize) -> PowerSeries {
    let mut s = PowerSeries::zero(order);
    for (k, c) in half_binomials(order / 4).into_iter().enumerate() {
        s.coeffs[4 * k] = c;
    }
    s
}

/// `Σ r*ₙ zⁿ = (−1 − z² + √(1+z⁴))/z` through `z^order`.
pub fn rstar_series(order: usize) -> PowerSeries {
    let mut num = sqrt1z4_series(order + 1);
    num.coeffs[0] -= BigRational::one();
    if order + 1 >= 2 {
        num.coeffs[2] -= BigRational::one();
    }
    num.div_z().expect("constant term cancels")
}

/// `r*ₙ` in closed form:
/// `(−1)^{m−1}(2m−2)!/(2^{2m−1}(m−1)!m!)` for `n = 4m−1`, `−1` for `n = 1`, else 0.
pub fn rstar(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(WalkError::Domain("r*_n is defined for n >= 1".into()));
    }
    if n == 1 {
        return Ok(rat(-1, 1));
    }
    if !(n + 1).is_multiple_of(4) {
        return Ok(BigRational::zero());
    }
    let m = (n + 1) / 4;
    let num = factorial(2 * m - 2);
    let den = (BigInt::one() << (2 * m - 1)) * factorial(m - 1) * factorial(m);
    let v = BigRational::new(num, den);
    Ok(if m % 2 == 1 { v } else { -v })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `r^{(∞,1)}(z) = (−1 + √(1+z⁴))/z` through `z^order`.
pub fn first_return_series(order: usize) -> PowerSeries {
    let mut num = sqrt1z4_series(order + 1);
    num.coeffs[0] -= BigRational::one();
    num.div_z().expect("constant term cancels")
}

/// `s^{(−∞,−1)}(z) = (1 − √(1+z⁴))/z`, the coefficientwise negation of
/// [`first_return_series`].
pub fn first_return_s_series(order: usize) -> PowerSeries {
    -&first_return_series(order)
}

/// Coordinates of a first-return passage sum in the orthonormal basis
/// `{P, Q, R, S}` of 2×2 matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstReturnCoefficients {
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
    pub s: BigRational,
}

type IntMat = [[i64; 2]; 2];

const P_HAT: IntMat = [[1, 1], [0, 0]];
const Q_HAT: IntMat = [[0, 0], [1, -1]];
const R_HAT: IntMat = [[1, -1], [0, 0]];
const S_HAT: IntMat = [[0, 0], [1, 1]];

fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn frobenius(a: &IntMat, b: &IntMat) -> i64 {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[i][j] * b[i][j]).sum()
}

/// Brute-force first-return data: sums the products of Hadamard blocks `P`, `Q`
/// over every walk of length `n` that starts at site 1, stays `≥ 1` up to time
/// `n − 1` and sits at 0 at time `n`, then projects on `{P, Q, R, S}` with
/// `⟨A|B⟩ = tr(A*B)`.
pub fn path_oracle_first_return(n: usize) -> Result<FirstReturnCoefficients> {
    if n == 0 || n > PATH_ENUMERATION_MAX {
        return Err(WalkError::Budget {
            n,
            max: PATH_ENUMERATION_MAX,
        });
    }
    if n.is_multiple_of(2) {
        // site parity forbids an even-length walk from 1 to 0
        let z = BigRational::zero();
        return Ok(FirstReturnCoefficients {
            p: z.clone(),
            q: z.clone(),
            r: z.clone(),
            s: z,
        });
    }
    let mut total: IntMat = [[0; 2]; 2];
    enumerate(1, n, [[1, 0], [0, 1]], &mut total);
    // each block carries 1/√2 and so does each basis element
    let scale = BigInt::one() << n.div_ceil(2);
    let coord = |b: &IntMat| BigRational::new(BigInt::from(frobenius(b, &total)), scale.clone());
    Ok(FirstReturnCoefficients {
        p: coord(&P_HAT),
        q: coord(&Q_HAT),
        r: coord(&R_HAT),
        s: coord(&S_HAT),
    })
}

fn enumerate(pos: i64, remaining: usize, prod: IntMat, total: &mut IntMat) {
    if remaining == 0 {
        if pos == 0 {
            for i in 0..2 {
                for j in 0..2 {
                    total[i][j] += prod[i][j];
                }
            }
        }
        return;
    }
    if pos as usize > remaining {
        return;
    }
    // left move
    let next = pos - 1;
    if next >= 1 || (next == 0 && remaining == 1) {
        enumerate(next, remaining - 1, int_mul(&P_HAT, &prod), total);
    }
    // right move
    enumerate(pos + 1, remaining - 1, int_mul(&Q_HAT, &prod), total);
}

/// Time-tagged 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2Q {
    pub time: usize,
    pub entries: [[Complex64; 2]; 2],
}

impl Matrix2Q {
    pub fn apply(&self, v: &Spinor) -> Spinor {
        let m = &self.entries;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.norm() == 0.0)
    }
}

/// The matrix `[[−1, 1], [−1, −1]]` shared by every nonzero `Ξ*ₙ`.
pub const RENEWAL_MATRIX: [[i64; 2]; 2] = [[-1, 1], [-1, -1]];

fn xi_star_from(n: usize, r: f64, omega: Complex64) -> Matrix2Q {
    let k = omega * (r / 2.0);
    let entries = RENEWAL_MATRIX.map(|row| row.map(|e| k * e as f64));
    Matrix2Q { time: n, entries }
}

/// `Ξ*ₙ = Ξₙ⁺ + Ξₙ⁻ = (ω r*_{n−1}/2)[[−1, 1], [−1, −1]]`, zero for odd `n`.
pub fn xi_star(n: usize, phi: f64) -> Result<Matrix2Q> {
    if n < 2 {
        return Err(WalkError::Domain("first-return matrices start at n = 2".into()));
    }
    check_phase(phi)?;
    let omega = phase(phi);
    if n % 2 == 1 {
        return Ok(Matrix2Q {
            time: n,
            entries: [[Complex64::new(0.0, 0.0); 2]; 2],
        });
    }
    Ok(xi_star_from(n, rational_to_f64(&rstar(n - 1)?), omega))
}

/// `Ψ₂ₖ(0)` for `k = 0..=n` by the renewal recursion
/// `Ψ₂ₙ(0) = Σ_{a=1}^{n} Ξ*₂ₐ Ψ₂₍ₙ₋ₐ₎(0)`, `Ψ₀(0) = ᵀ[α, β]`.
pub fn psi_origin_sequence(n: usize, params: &WalkParams) -> Vec<Spinor> {
    let zero = Complex64::new(0.0, 0.0);
    let rs = if n == 0 {
        Vec::new()
    } else {
        rstar_series(2 * n - 1).to_f64()
    };
    let kernels: Vec<Matrix2Q> = (1..=n)
        .map(|a| xi_star_from(2 * a, rs[2 * a - 1], params.omega()))
        .collect();
    let mut psi: Vec<Spinor> = Vec::with_capacity(n + 1);
    psi.push(params.coin_state());
    for k in 1..=n {
        let mut acc = [zero; 2];
        for a in 1..=k {
            let kernel = &kernels[a - 1];
            if kernel.is_zero() {
                continue;
            }
            let v = kernel.apply(&psi[k - a]);
            acc[0] += v[0];
            acc[1] += v[1];
        }
        psi.push(acc);
    }
    psi
}

/// `Ψ₂ₙ(0)` via the renewal recursion.
pub fn psi_origin(n: usize, params: &WalkParams) -> Spinor {
    psi_origin_sequence(n, params)[n]
}
