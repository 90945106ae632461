//! Closed-form energies in units of `ħω_z`.
//!
//! Every expression is generic over [`Scalar`], so the same code yields
//! exact rationals (for tests and tables) or `f64` (for sweeps).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Scalar;

/// Level label `(n, n_z)`.
///
/// `n` is the combined Landau + spin index, so `n = 0` is the only level
/// without a spin partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub nz: u32,
}

impl QuantumNumbers {
    pub const fn new(n: u32, nz: u32) -> Self {
        QuantumNumbers { n, nz }
    }

    /// Spin multiplicity: 1 for `n = 0`, else 2.
    pub const fn spin_mult(&self) -> u32 {
        if self.n == 0 {
            1
        } else {
            2
        }
    }

    /// Principal index `N = n + n_z` of the `w = 1` shell.
    pub const fn shell(&self) -> u32 {
        self.n + self.nz
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.nz)
    }
}

/// Perturbation order of an energy or spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Zero,
    One,
    Two,
}

impl Order {
    pub const fn as_u8(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Order::Zero),
            1 => Ok(Order::One),
            2 => Ok(Order::Two),
            _ => Err(Error::Domain(format!("perturbation order must be 0, 1 or 2, got {v}"))),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

/// Dimensionless model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    /// `ω_c / ω_z`.
    pub w: T,
    /// `ħω_z / (m_e c²)`.
    pub eps: T,
    pub include_rest_mass: bool,
}

impl<T: Scalar> ModelParams<T> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(w: T, eps: T) -> Result<Self> {
        // Negated so that NaN is rejected too.
        if !(w > T::zero()) {
            return Err(Error::Domain(format!("w must be positive, got {w:?}")));
        }
        if eps < T::zero() {
            return Err(Error::Domain(format!("eps must be non-negative, got {eps:?}")));
        }
        Ok(ModelParams {
            w,
            eps,
            include_rest_mass: false,
        })
    }

    pub fn with_rest_mass(mut self, include: bool) -> Self {
        self.include_rest_mass = include;
        self
    }

    pub fn to_f64(&self) -> ModelParams<f64> {
        ModelParams {
            w: self.w.to_f64(),
            eps: self.eps.to_f64(),
            include_rest_mass: self.include_rest_mass,
        }
    }
}

fn int<T: Scalar>(v: i64) -> T {
    T::from_int(v)
}

fn ratio<T: Scalar>(n: i64, d: i64) -> T {
    T::ratio(n, d)
}

/// Axial polynomial `6n_z² + 6n_z + 3`, the `⟨(a†−a)⁴⟩` moment.
fn quartic_moment(nz: i64) -> i64 {
    6 * nz * nz + 6 * nz + 3
}

/// Non-relativistic energy `n·w + n_z + 1/2`, plus `1/ε` with the rest mass.
pub fn e0<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> Result<T> {
    let base = int::<T>(q.n as i64) * p.w.clone() + int(q.nz as i64) + ratio(1, 2);
    if p.include_rest_mass {
        if p.eps == T::zero() {
            return Err(Error::DivisionByZero("rest mass term 1/eps with eps = 0"));
        }
        Ok(base + T::one() / p.eps.clone())
    } else {
        Ok(base)
    }
}

/// The three first-order expectation values, before the `−ε/2` prefactor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstOrderTerms<T> {
    /// `⟨H_x²⟩ → n² w²`
    pub hx_squared: T,
    /// `⟨H_x p_z²/m⟩ → w n (n_z + 1/2)`
    pub hx_pz_squared: T,
    /// `⟨p_z⁴/4m²⟩ → (6n_z² + 6n_z + 3)/16`
    pub pz_quartic: T,
}

impl<T: Scalar> FirstOrderTerms<T> {
    pub fn sum(&self) -> T {
        self.hx_squared.clone() + self.hx_pz_squared.clone() + self.pz_quartic.clone()
    }
}

pub fn first_order_terms<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> FirstOrderTerms<T> {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let w = p.w.clone();
    FirstOrderTerms {
        hx_squared: int::<T>(n * n) * w.clone() * w.clone(),
        hx_pz_squared: w * int(n) * ratio(2 * nz + 1, 2),
        pz_quartic: ratio(quartic_moment(nz), 16),
    }
}

/// First-order correction `−(ε/2)(n²w² + w n (n_z+1/2) + (6n_z²+6n_z+3)/16)`.
///
/// Strictly negative whenever `ε > 0`.
pub fn e1<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
    -(p.eps.clone() * ratio(1, 2)) * first_order_terms(q, p).sum()
}

/// Axial polynomial `4n_z³ + 6n_z² + 8n_z + 3`; `⟨(a†−a)⁶⟩ = −5×` this.
fn sextic_moment(nz: i64) -> i64 {
    4 * nz * nz * nz + 6 * nz * nz + 8 * nz + 3
}

/// Expectation value of the second-order Hamiltonian in `|n, n_z⟩`:
/// `(ε²/2)(n³w³ + (3/4)w²n²(2n_z+1) + (3/16)wn(6n_z²+6n_z+3) + (5/64)(4n_z³+6n_z²+8n_z+3))`.
///
/// `H⁽²⁾` is a positive operator, so the `p_z⁶` moment enters with a plus
/// sign: `p_z⁶ ∝ i⁶(a†−a)⁶ = −(a†−a)⁶` and `⟨(a†−a)⁶⟩ < 0`.
pub fn h2_diagonal<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
    h2_bracket(q, p, 1) * eps_squared_half(p)
}

fn h2_bracket<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>, sextic_sign: i64) -> T {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let w = p.w.clone();
    let w2 = w.clone() * w.clone();
    let w3 = w2.clone() * w.clone();
    int::<T>(n * n * n) * w3
        + ratio::<T>(3, 4) * w2 * int(n * n * (2 * nz + 1))
        + ratio::<T>(3, 16) * w * int(n * quartic_moment(nz))
        + ratio::<T>(5 * sextic_sign, 64) * int(sextic_moment(nz))
}

fn eps_squared_half<T: Scalar>(p: &ModelParams<T>) -> T {
    p.eps.clone() * p.eps.clone() * ratio(1, 2)
}

/// Intermediate axial state `p = n_z + offset` in the second-order sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseId {
    Minus4,
    Minus2,
    Plus2,
    Plus4,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Minus4, CaseId::Minus2, CaseId::Plus2, CaseId::Plus4];

    /// Offset `p − n_z` of the intermediate state.
    pub const fn offset(self) -> i32 {
        match self {
            CaseId::Minus4 => -4,
            CaseId::Minus2 => -2,
            CaseId::Plus2 => 2,
            CaseId::Plus4 => 4,
        }
    }
}

impl TryFrom<i32> for CaseId {
    type Error = Error;

    fn try_from(v: i32) -> Result<Self> {
        match v {
            -4 => Ok(CaseId::Minus4),
            -2 => Ok(CaseId::Minus2),
            2 => Ok(CaseId::Plus2),
            4 => Ok(CaseId::Plus4),
            _ => Err(Error::Domain(format!("case id must be one of -4, -2, 2, 4, got {v}"))),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.offset())
    }
}

/// Contribution `|⟨n,p|H⁽¹⁾|n,n_z⟩|² / (E⁰_{n_z} − E⁰_p)` of one intermediate state.
///
/// Falling factorials make the lowering cases vanish below their threshold.
pub fn case_contribution<T: Scalar>(case: CaseId, q: &QuantumNumbers, p: &ModelParams<T>) -> T {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let eps2 = p.eps.clone() * p.eps.clone();
    let wn4 = p.w.clone() * int(4 * n);
    match case {
        CaseId::Minus4 => eps2 * ratio(nz * (nz - 1) * (nz - 2) * (nz - 3), 4096),
        CaseId::Plus4 => -(eps2 * ratio((nz + 1) * (nz + 2) * (nz + 3) * (nz + 4), 4096)),
        CaseId::Plus2 => {
            let f = wn4 + int(2 * nz + 3);
            -(eps2 * ratio((nz + 1) * (nz + 2), 512) * f.clone() * f)
        }
        CaseId::Minus2 => {
            let f = wn4 + int(2 * nz - 1);
            eps2 * ratio(nz * (nz - 1), 512) * f.clone() * f
        }
    }
}

/// Second-order perturbation sum over intermediate axial states.
pub fn second_order_sum<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let w = p.w.clone();
    let bracket = int::<T>(32 * n * n * (2 * nz + 1)) * w.clone() * w.clone()
        + int::<T>(48 * n * (2 * nz * nz + 2 * nz + 1)) * w
        + int(34 * nz * nz * nz + 51 * nz * nz + 59 * nz + 21);
    -(p.eps.clone() * p.eps.clone() * ratio(1, 512) * bracket)
}

/// Axial constant of the full second-order bracket.
fn e2_axial(nz: i64) -> i64 {
    46 * nz * nz * nz + 69 * nz * nz + 101 * nz + 39
}

/// Full second-order correction
/// `(ε²/2)(n³w³ + (5/8)n²w²(2n_z+1) + (1/8)nw(6n_z²+6n_z+3) + (46n_z³+69n_z²+101n_z+39)/256)`;
/// identical to `h2_diagonal + second_order_sum`.
pub fn e2<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let w = p.w.clone();
    let w2 = w.clone() * w.clone();
    let w3 = w2.clone() * w.clone();
    let bracket = int::<T>(n * n * n) * w3
        + ratio::<T>(5, 8) * w2 * int(n * n * (2 * nz + 1))
        + ratio::<T>(1, 8) * w * int(n * quartic_moment(nz))
        + ratio::<T>(e2_axial(nz), 256);
    eps_squared_half(p) * bracket
}

/// Second-order expressions with the `p_z⁶` moment entering with a minus
/// sign (the `i⁶` factor dropped). Kept so the size of that error can be
/// quantified against the oracle; not used by anything else.
pub mod sign_flipped {
    use super::*;

    /// `h2_diagonal` with `−(5/64)(4n_z³+6n_z²+8n_z+3)`.
    pub fn h2_diagonal<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
        h2_bracket(q, p, -1) * eps_squared_half(p)
    }

    /// `e2` with axial constant `−(114n_z³+171n_z²+219n_z+81)/256`.
    pub fn e2<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>) -> T {
        h2_diagonal(q, p) + second_order_sum(q, p)
    }
}

/// Energy broken down by perturbation order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyDecomposition<T> {
    pub order: Order,
    pub e0: T,
    pub e1: T,
    pub e2: T,
    pub total: T,
}

impl<T: Scalar> EnergyDecomposition<T> {
    pub fn to_f64(&self) -> EnergyDecomposition<f64> {
        EnergyDecomposition {
            order: self.order,
            e0: self.e0.to_f64(),
            e1: self.e1.to_f64(),
            e2: self.e2.to_f64(),
            total: self.total.to_f64(),
        }
    }
}

/// Energy through `order`; corrections above `order` are reported as zero.
pub fn decompose<T: Scalar>(q: &QuantumNumbers, p: &ModelParams<T>, order: Order) -> Result<EnergyDecomposition<T>> {
    let e0 = e0(q, p)?;
    let e1 = if order >= Order::One { e1(q, p) } else { T::zero() };
    let e2 = if order >= Order::Two { e2(q, p) } else { T::zero() };
    let total = e0.clone() + e1.clone() + e2.clone();
    Ok(EnergyDecomposition {
        order,
        e0,
        e1,
        e2,
        total,
    })
}

/// Coefficients (ascending powers of `w`) of the energy through `order`,
/// without the rest mass. Degree is `order + 1`.
pub fn energy_polynomial<T: Scalar>(q: &QuantumNumbers, eps: &T, order: Order) -> Vec<T> {
    let n = q.n as i64;
    let nz = q.nz as i64;
    let mut c: Vec<T> = vec![ratio(2 * nz + 1, 2), int(n)];
    if order >= Order::One {
        let half_eps = eps.clone() * ratio(1, 2);
        c[0] = c[0].clone() - half_eps.clone() * ratio(quartic_moment(nz), 16);
        c[1] = c[1].clone() - half_eps.clone() * ratio(n * (2 * nz + 1), 2);
        c.push(-(half_eps * int(n * n)));
    }
    if order >= Order::Two {
        let k = eps.clone() * eps.clone() * ratio(1, 2);
        c[0] = c[0].clone() + k.clone() * ratio(e2_axial(nz), 256);
        c[1] = c[1].clone() + k.clone() * ratio(n * quartic_moment(nz), 8);
        c[2] = c[2].clone() + k.clone() * ratio(5 * n * n * (2 * nz + 1), 8);
        c.push(k * int(n * n * n));
    }
    c
}

/// `⟨n_z|(a† − a)^k|n_z⟩` for `k ≤ 6`.
pub fn axial_moment<T: Scalar>(k: u32, nz: u32) -> Result<T> {
    let nz = nz as i64;
    match k {
        _ if k % 2 == 1 && k <= 6 => Ok(T::zero()),
        0 => Ok(T::one()),
        2 => Ok(int(-(2 * nz + 1))),
        4 => Ok(int(quartic_moment(nz))),
        6 => Ok(int(-5 * sextic_moment(nz))),
        _ => Err(Error::Domain(format!("moment power must be at most 6, got {k}"))),
    }
}
