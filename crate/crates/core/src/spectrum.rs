//! Level enumeration, degeneracy grouping and level crossings of the
//! perturbed spectrum `E(w)`.
//!
//! Each level at a fixed perturbation order is a polynomial in `w` of
//! degree `order + 1` with exact rational coefficients. Crossings are found
//! pairwise from the difference polynomial, expanded around the unperturbed
//! crossing point so that shifts of order `ε` keep full relative precision.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::closed_form::{self, ModelParams, Order, QuantumNumbers};
use crate::error::{Error, Result};
use crate::rational::{rational_to_f64, Rational, Scalar};

/// All `(n, n_z)` with `n ≤ n_max`, `n_z ≤ nz_max`, ordered by `(n, n_z)`.
pub fn enumerate_levels(n_max: u32, nz_max: u32) -> Vec<QuantumNumbers> {
    (0..=n_max)
        .flat_map(|n| (0..=nz_max).map(move |nz| QuantumNumbers::new(n, nz)))
        .collect()
}

/// Levels sharing one exact non-relativistic energy at rational `w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyGroup {
    #[serde(with = "crate::rational::as_string")]
    pub energy: Rational,
    pub members: Vec<QuantumNumbers>,
    pub total_multiplicity: u32,
}

/// Groups levels by exact `E⁰` at rational `w`, ascending in energy.
/// Levels above `e_max` (when given) are dropped.
pub fn degeneracy_groups(
    w: &Rational,
    e_max: Option<&Rational>,
    n_max: u32,
    nz_max: u32,
) -> Result<Vec<DegeneracyGroup>> {
    let params = ModelParams::new(w.clone(), Rational::zero())?;
    let mut by_energy: BTreeMap<Rational, Vec<QuantumNumbers>> = BTreeMap::new();
    for q in enumerate_levels(n_max, nz_max) {
        let e = closed_form::e0(&q, &params)?;
        if e_max.is_some_and(|cap| &e > cap) {
            continue;
        }
        by_energy.entry(e).or_default().push(q);
    }
    Ok(by_energy
        .into_iter()
        .map(|(energy, members)| DegeneracyGroup {
            total_multiplicity: members.iter().map(QuantumNumbers::spin_mult).sum(),
            energy,
            members,
        })
        .collect())
}

/// One member of the `w = 1` shell `N` with its first-order correction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitEntry {
    pub q: QuantumNumbers,
    #[serde(with = "crate::rational::as_string")]
    pub e0: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub e1: Rational,
    /// `e1 / ε`, the coefficient in units of `ħ²ω_c²/m_e`.
    #[serde(with = "crate::rational::as_string")]
    pub e1_per_eps: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub total: Rational,
}

/// Members of shell `N` at `w = 1`, in increasing `n` (and so strictly
/// decreasing corrected energy when `ε > 0`).
pub fn split_diagram(shell: u32, eps: &Rational) -> Result<Vec<SplitEntry>> {
    let unit = ModelParams::new(Rational::one(), Rational::one())?;
    let params = ModelParams::new(Rational::one(), eps.clone())?;
    (0..=shell)
        .map(|n| {
            let q = QuantumNumbers::new(n, shell - n);
            let e0 = closed_form::e0(&q, &params)?;
            let e1 = closed_form::e1(&q, &params);
            Ok(SplitEntry {
                q,
                e1_per_eps: closed_form::e1(&q, &unit),
                total: e0.clone() + e1.clone(),
                e0,
                e1,
            })
        })
        .collect()
}

/// A level's energy as a polynomial in `w` at a fixed order and `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub q: QuantumNumbers,
    pub order: Order,
    pub eps: Rational,
    /// Ascending powers of `w`, in units of `ħω_z`.
    pub coeffs: Vec<Rational>,
}

impl SpectralLine {
    pub fn new(q: QuantumNumbers, eps: &Rational, order: Order) -> Self {
        SpectralLine {
            q,
            order,
            eps: eps.clone(),
            coeffs: closed_form::energy_polynomial(&q, eps, order),
        }
    }

    pub fn eval(&self, w: &Rational) -> Rational {
        horner_exact(&self.coeffs, w)
    }

    pub fn eval_f64(&self, w: f64) -> f64 {
        let c: Vec<f64> = self.coeffs.iter().map(rational_to_f64).collect();
        horner(&c, w)
    }
}

/// Lines for every level in the `(n_max, nz_max)` box.
pub fn spectral_lines(n_max: u32, nz_max: u32, eps: &Rational, order: Order) -> Vec<SpectralLine> {
    enumerate_levels(n_max, nz_max)
        .into_iter()
        .map(|q| SpectralLine::new(q, eps, order))
        .collect()
}

/// One sample of a line for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSample {
    pub q: QuantumNumbers,
    pub w: f64,
    pub energy: f64,
}

/// Samples each line on a uniform `w` grid; ordered by `(n, n_z, w)`.
pub fn sample_lines(lines: &[SpectralLine], w_lo: f64, w_hi: f64, samples: usize) -> Result<Vec<LineSample>> {
    if !(w_lo > 0.0 && w_hi > w_lo && w_hi.is_finite()) {
        return Err(Error::Domain(format!("invalid w range ({w_lo}, {w_hi})")));
    }
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let mut sorted: Vec<&SpectralLine> = lines.iter().collect();
    sorted.sort_by_key(|l| l.q);
    let step = (w_hi - w_lo) / (samples - 1) as f64;
    let mut out = Vec::with_capacity(sorted.len() * samples);
    for line in sorted {
        let c: Vec<f64> = line.coeffs.iter().map(rational_to_f64).collect();
        for i in 0..samples {
            let w = if i == samples - 1 { w_hi } else { w_lo + step * i as f64 };
            out.push(LineSample {
                q: line.q,
                w,
                energy: horner(&c, w),
            });
        }
    }
    Ok(out)
}

/// Intersection of two spectral lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub line_a: QuantumNumbers,
    pub line_b: QuantumNumbers,
    pub order: Order,
    pub w_star: f64,
    pub e_star: f64,
    /// Where the same pair crosses at order 0, if it does for some `w > 0`.
    #[serde(serialize_with = "crate::rational::as_string::option")]
    pub unperturbed_w: Option<Rational>,
    /// `w_star − unperturbed_w`, computed without cancellation.
    pub shift: Option<f64>,
}

impl Crossing {
    /// Combined spin degeneracy of the two lines at the crossing.
    pub fn spin_degeneracy(&self) -> u32 {
        spin_degeneracy_at_crossing(self)
    }
}

/// `spin_mult(a) + spin_mult(b)`: 3 when one line has `n = 0`, else 4
/// (or 2 if both do).
pub fn spin_degeneracy_at_crossing(c: &Crossing) -> u32 {
    c.line_a.spin_mult() + c.line_b.spin_mult()
}

/// Result of intersecting one pair of lines.
#[derive(Debug, Clone, PartialEq)]
pub enum PairOutcome {
    /// Real crossings inside the range, possibly none.
    Crossings(Vec<Crossing>),
    /// The two polynomials are identical.
    Coincident,
}

/// All crossings within a set of lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
    pub coincident_pairs: Vec<(QuantumNumbers, QuantumNumbers)>,
}

/// Intersects every unordered pair of distinct lines within `[w_lo, w_hi]`.
///
/// Crossings are ordered by `(line_a, line_b, w_star)` with `line_a < line_b`.
pub fn find_crossings(lines: &[SpectralLine], w_lo: f64, w_hi: f64) -> Result<CrossingReport> {
    check_range(w_lo, w_hi)?;
    let mut sorted: Vec<&SpectralLine> = lines.iter().collect();
    sorted.sort_by_key(|l| l.q);
    let mut report = CrossingReport::default();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if a.q == b.q {
                continue;
            }
            match crossings_between(a, b, w_lo, w_hi)? {
                PairOutcome::Crossings(cs) => report.crossings.extend(cs),
                PairOutcome::Coincident => report.coincident_pairs.push((a.q, b.q)),
            }
        }
    }
    Ok(report)
}

fn check_range(w_lo: f64, w_hi: f64) -> Result<()> {
    if !(w_lo > 0.0 && w_hi > w_lo && w_hi.is_finite()) {
        return Err(Error::Domain(format!("invalid w range ({w_lo}, {w_hi})")));
    }
    Ok(())
}

/// Crossings of one pair of lines inside `[w_lo, w_hi]`.
///
/// Linear and quadratic differences are solved in closed form; cubics by
/// bisection on monotone brackets. The result does not depend on argument
/// order: the pair is canonicalised so that `line_a < line_b`.
pub fn crossings_between(a: &SpectralLine, b: &SpectralLine, w_lo: f64, w_hi: f64) -> Result<PairOutcome> {
    check_range(w_lo, w_hi)?;
    if a.order != b.order || a.eps != b.eps {
        return Err(Error::Domain(format!(
            "lines {} and {} were built at different order or eps",
            a.q, b.q
        )));
    }
    let (a, b) = if a.q <= b.q { (a, b) } else { (b, a) };

    let diff = poly_sub(&a.coeffs, &b.coeffs);
    if diff.iter().all(Zero::is_zero) {
        return Ok(PairOutcome::Coincident);
    }

    let unperturbed = unperturbed_crossing(&a.q, &b.q);
    let center = unperturbed
        .clone()
        .unwrap_or_else(|| crate::rational::rational_from_f64(0.5 * (w_lo + w_hi)).expect("finite"));
    let shifted = trim(taylor_shift(&diff, &center));
    let line_a_shifted = taylor_shift(&a.coeffs, &center);

    let center_f = rational_to_f64(&center);
    let lo = w_lo - center_f;
    let hi = w_hi - center_f;

    let mut out = Vec::new();
    match shifted.len() {
        0 => unreachable!("non-zero difference"),
        1 => {}
        2 => {
            // Exact root.
            let delta = -(shifted[0].clone() / shifted[1].clone());
            let w = center.clone() + delta.clone();
            let wf = rational_to_f64(&w);
            if wf >= w_lo && wf <= w_hi && w.is_positive() {
                out.push(Crossing {
                    line_a: a.q,
                    line_b: b.q,
                    order: a.order,
                    w_star: wf,
                    e_star: rational_to_f64(&a.eval(&w)),
                    shift: unperturbed.as_ref().map(|_| rational_to_f64(&delta)),
                    unperturbed_w: unperturbed.clone(),
                });
            }
        }
        _ => {
            let coeffs: Vec<f64> = shifted.iter().map(rational_to_f64).collect();
            let ea: Vec<f64> = line_a_shifted.iter().map(rational_to_f64).collect();
            for delta in real_roots_in(&coeffs, lo, hi) {
                let wf = center_f + delta;
                // Also rejects NaN.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(wf > 0.0) {
                    continue;
                }
                out.push(Crossing {
                    line_a: a.q,
                    line_b: b.q,
                    order: a.order,
                    w_star: wf,
                    e_star: horner(&ea, delta),
                    shift: unperturbed.as_ref().map(|_| delta),
                    unperturbed_w: unperturbed.clone(),
                });
            }
        }
    }
    Ok(PairOutcome::Crossings(out))
}

/// `w₀ > 0` where `n_a w + n_z,a = n_b w + n_z,b`, if any.
pub fn unperturbed_crossing(a: &QuantumNumbers, b: &QuantumNumbers) -> Option<Rational> {
    if a.n == b.n {
        return None;
    }
    let w = Rational::ratio(b.nz as i64 - a.nz as i64, a.n as i64 - b.n as i64);
    w.is_positive().then_some(w)
}

/// Crossings lying within `tol` of each other in both `w` and `E`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingCluster {
    pub w_center: f64,
    pub e_center: f64,
    pub members: Vec<Crossing>,
    /// Distinct lines involved.
    pub lines: BTreeSet<QuantumNumbers>,
}

/// Single-linkage clustering of crossings (Chebyshev distance in `(w, E)`).
///
/// Clusters are ordered by their first member's `(w_star, e_star)`.
pub fn crossing_clusters(crossings: &[Crossing], tol: f64) -> Vec<CrossingCluster> {
    let mut items: Vec<&Crossing> = crossings.iter().collect();
    items.sort_by(|x, y| {
        x.w_star
            .total_cmp(&y.w_star)
            .then(x.e_star.total_cmp(&y.e_star))
            .then(x.line_a.cmp(&y.line_a))
            .then(x.line_b.cmp(&y.line_b))
    });
    let m = items.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            let dw = (items[i].w_star - items[j].w_star).abs();
            let de = (items[i].e_star - items[j].e_star).abs();
            if dw <= tol && de <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Crossing>> = BTreeMap::new();
    for (i, c) in items.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push((*c).clone());
    }
    groups
        .into_values()
        .map(|members| {
            let k = members.len() as f64;
            let w_center = members.iter().map(|c| c.w_star).sum::<f64>() / k;
            let e_center = members.iter().map(|c| c.e_star).sum::<f64>() / k;
            let lines = members.iter().flat_map(|c| [c.line_a, c.line_b]).collect();
            CrossingCluster {
                w_center,
                e_center,
                members,
                lines,
            }
        })
        .collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn horner_exact(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, ci| acc * x + ci)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// Coefficients of `p(x + s)` in powers of `x`.
fn taylor_shift(c: &[Rational], s: &Rational) -> Vec<Rational> {
    let mut out = c.to_vec();
    let d = out.len();
    // Repeated synthetic division.
    for i in 0..d {
        for j in (i..d.saturating_sub(1)).rev() {
            let t = out[j + 1].clone() * s;
            out[j] += t;
        }
    }
    out
}

/// Real roots of a polynomial of degree 1–3 inside `[lo, hi]`, ascending.
fn real_roots_in(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut roots = match c.len() {
        2 => vec![-c[0] / c[1]],
        3 => quadratic_roots(c[2], c[1], c[0]),
        4 => {
            let deriv = [c[1], 2.0 * c[2], 3.0 * c[3]];
            let mut knots = vec![lo];
            knots.extend(
                quadratic_roots(deriv[2], deriv[1], deriv[0])
                    .into_iter()
                    .filter(|&x| x > lo && x < hi),
            );
            knots.push(hi);
            let mut r = Vec::new();
            for pair in knots.windows(2) {
                if let Some(x) = bisect(c, pair[0], pair[1]) {
                    r.push(x);
                }
            }
            r
        }
        _ => Vec::new(),
    };
    roots.retain(|&x| x >= lo && x <= hi);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs()));
    roots
}

/// Roots of `a x² + b x + c` (`a ≠ 0`), without cancellation.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    let mut r = vec![q / a, c / q];
    r.sort_by(f64::total_cmp);
    r
}

/// Root of a polynomial monotone on `[lo, hi]`, if it changes sign there.
fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = horner(c, lo);
    let f_hi = horner(c, hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = horner(c, mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn qn(n: u32, nz: u32) -> QuantumNumbers {
        QuantumNumbers::new(n, nz)
    }

    fn line(n: u32, nz: u32, eps: &Rational, order: Order) -> SpectralLine {
        SpectralLine::new(qn(n, nz), eps, order)
    }

    fn single(outcome: PairOutcome) -> Vec<Crossing> {
        match outcome {
            PairOutcome::Crossings(c) => c,
            PairOutcome::Coincident => panic!("unexpected coincident pair"),
        }
    }

    #[test]
    fn enumerate_small_boxes() {
        let levels = enumerate_levels(1, 1);
        assert_eq!(levels, vec![qn(0, 0), qn(0, 1), qn(1, 0), qn(1, 1)]);
        let mults: Vec<u32> = levels.iter().map(QuantumNumbers::spin_mult).collect();
        assert_eq!(mults, vec![1, 1, 2, 2]);
        assert_eq!(enumerate_levels(0, 0), vec![qn(0, 0)]);
        let total: u32 = enumerate_levels(2, 0).iter().map(QuantumNumbers::spin_mult).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn degeneracy_at_w_one() {
        let groups = degeneracy_groups(&q(1, 1), Some(&q(21, 2)), 10, 10).unwrap();
        assert_eq!(groups.len(), 11);
        for (shell, g) in groups.iter().enumerate() {
            assert_eq!(g.energy, q(2 * shell as i64 + 1, 2));
            assert_eq!(g.total_multiplicity, 2 * shell as u32 + 1);
        }
        assert_eq!(groups[1].members, vec![qn(0, 1), qn(1, 0)]);
    }

    #[test]
    fn degeneracy_at_w_quarter() {
        let groups = degeneracy_groups(&q(1, 4), None, 16, 4).unwrap();
        let g = groups.iter().find(|g| g.energy == q(9, 2)).unwrap();
        let expected: Vec<_> = [(0, 4), (4, 3), (8, 2), (12, 1), (16, 0)]
            .iter()
            .map(|&(n, nz)| qn(n, nz))
            .collect();
        assert_eq!(g.members, expected);
        assert_eq!(g.total_multiplicity, 9);
    }

    #[test]
    fn degeneracy_rejects_non_positive_w() {
        assert!(degeneracy_groups(&q(0, 1), None, 2, 2).is_err());
        assert!(degeneracy_groups(&q(-1, 3), None, 2, 2).is_err());
    }

    #[test]
    fn split_diagram_shells() {
        let eps = q(1, 1);
        let s0 = split_diagram(0, &eps).unwrap();
        assert_eq!(s0.len(), 1);
        assert_eq!(s0[0].e1_per_eps, q(-3, 32));

        let s1: Vec<_> = split_diagram(1, &eps)
            .unwrap()
            .into_iter()
            .map(|e| e.e1_per_eps)
            .collect();
        assert_eq!(s1, vec![q(-15, 32), q(-27, 32)]);

        let s2 = split_diagram(2, &q(1, 1000)).unwrap();
        let coeffs: Vec<_> = s2.iter().map(|e| e.e1_per_eps.clone()).collect();
        assert_eq!(coeffs, vec![q(-39, 32), q(-55, 32), q(-83, 32)]);
        assert!(s2.windows(2).all(|p| p[0].total > p[1].total));
        let mult: u32 = s2.iter().map(|e| e.q.spin_mult()).sum();
        assert_eq!(mult, 5);
    }

    #[test]
    fn order_zero_crossing_is_exact() {
        let eps = q(1, 1_000_000);
        let c = single(
            crossings_between(&line(2, 0, &eps, Order::Zero), &line(0, 2, &eps, Order::Zero), 0.5, 2.0).unwrap(),
        );
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].w_star, 1.0);
        assert_eq!(c[0].e_star, 2.5);
        assert_eq!(c[0].shift, Some(0.0));
        assert_eq!(c[0].line_a, qn(0, 2));
    }

    #[test]
    fn order_one_crossing_shift() {
        let eps = q(1, 1_000_000);
        let c =
            single(crossings_between(&line(2, 0, &eps, Order::One), &line(0, 2, &eps, Order::One), 0.5, 2.0).unwrap());
        assert_eq!(c.len(), 1);
        let shift = c[0].shift.unwrap();
        assert!((shift / 1e-6 - 0.6875).abs() < 1e-5, "shift = {shift}");
        assert_eq!(c[0].unperturbed_w, Some(q(1, 1)));
    }

    #[test]
    fn parallel_lines_do_not_cross() {
        let eps = q(1, 1_000_000);
        for order in [Order::Zero, Order::One] {
            let c = single(crossings_between(&line(0, 1, &eps, order), &line(0, 3, &eps, order), 0.01, 100.0).unwrap());
            assert!(c.is_empty());
        }
    }

    #[test]
    fn coincident_lines_reported() {
        let eps = q(1, 10);
        let a = line(1, 1, &eps, Order::Two);
        assert_eq!(
            crossings_between(&a, &a.clone(), 0.1, 3.0).unwrap(),
            PairOutcome::Coincident
        );
        let report = find_crossings(&[a.clone(), a], 0.1, 3.0).unwrap();
        assert!(report.crossings.is_empty());
    }

    #[test]
    fn mismatched_lines_rejected() {
        let a = line(1, 0, &q(1, 10), Order::One);
        let b = line(0, 1, &q(1, 10), Order::Two);
        let c = line(0, 1, &q(1, 20), Order::One);
        assert!(crossings_between(&a, &b, 0.5, 2.0).is_err());
        assert!(crossings_between(&a, &c, 0.5, 2.0).is_err());
        assert!(crossings_between(&a, &a, 0.0, 2.0).is_err());
        assert!(crossings_between(&a, &a, 2.0, 1.0).is_err());
    }

    #[test]
    fn crossing_is_symmetric() {
        let eps = q(1, 1000);
        for order in [Order::Zero, Order::One, Order::Two] {
            let a = line(3, 1, &eps, order);
            let b = line(1, 5, &eps, order);
            assert_eq!(
                crossings_between(&a, &b, 0.5, 4.0).unwrap(),
                crossings_between(&b, &a, 0.5, 4.0).unwrap()
            );
        }
    }

    #[test]
    fn cubic_crossing_satisfies_both_lines() {
        let eps = q(1, 1000);
        let a = line(2, 0, &eps, Order::Two);
        let b = line(1, 1, &eps, Order::Two);
        let c = single(crossings_between(&a, &b, 0.5, 2.0).unwrap());
        assert_eq!(c.len(), 1);
        let x = &c[0];
        assert!((a.eval_f64(x.w_star) - b.eval_f64(x.w_star)).abs() < 1e-12);
        assert!((x.e_star - a.eval_f64(x.w_star)).abs() < 1e-12);
        assert!((x.w_star - 1.0 - x.shift.unwrap()).abs() < 1e-15);
    }

    #[test]
    fn spin_degeneracy_values() {
        let eps = q(1, 1_000_000);
        let c = |a: (u32, u32), b: (u32, u32)| {
            single(
                crossings_between(
                    &line(a.0, a.1, &eps, Order::One),
                    &line(b.0, b.1, &eps, Order::One),
                    0.5,
                    2.0,
                )
                .unwrap(),
            )
            .remove(0)
        };
        assert_eq!(c((0, 2), (1, 1)).spin_degeneracy(), 3);
        assert_eq!(c((1, 1), (2, 0)).spin_degeneracy(), 4);
    }

    #[test]
    fn clusters_merge_at_order_zero_and_split_at_order_one() {
        let family = [(0, 4), (4, 3), (8, 2), (12, 1), (16, 0)];
        let eps = q(1, 1_000_000);
        let lines0: Vec<_> = family.iter().map(|&(n, nz)| line(n, nz, &eps, Order::Zero)).collect();
        let r0 = find_crossings(&lines0, 0.2, 0.3).unwrap();
        assert_eq!(r0.crossings.len(), 10);
        let c0 = crossing_clusters(&r0.crossings, 1e-12 * 1e-6);
        assert_eq!(c0.len(), 1);
        assert_eq!(c0[0].members.len(), 10);
        assert_eq!(c0[0].lines.len(), 5);

        let lines1: Vec<_> = family.iter().map(|&(n, nz)| line(n, nz, &eps, Order::One)).collect();
        let r1 = find_crossings(&lines1, 0.2, 0.3).unwrap();
        assert_eq!(r1.crossings.len(), 10);
        let c1 = crossing_clusters(&r1.crossings, 1e-12 * 1e-6);
        assert_eq!(c1.len(), 10);
        assert!(crossing_clusters(&[], 1.0).is_empty());
    }

    #[test]
    fn taylor_shift_matches_direct_evaluation() {
        let p = vec![q(3, 1), q(-2, 5), q(7, 3), q(1, 9)];
        let s = q(5, 4);
        let shifted = taylor_shift(&p, &s);
        for x in [q(0, 1), q(1, 3), q(-2, 1)] {
            assert_eq!(horner_exact(&shifted, &x), horner_exact(&p, &(x.clone() + s.clone())));
        }
    }

    #[test]
    fn cubic_root_finder() {
        // (x - 1)(x - 2)(x + 3) = x³ - 7x + 6
        let c = [6.0, -7.0, 0.0, 1.0];
        let r = real_roots_in(&c, -5.0, 5.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(real_roots_in(&c, 1.5, 1.9), Vec::<f64>::new());
    }

    #[test]
    fn sampling_grid() {
        let eps = q(1, 1_000_000);
        let lines = spectral_lines(4, 4, &eps, Order::One);
        let s = sample_lines(&lines, 0.5, 1.5, 11).unwrap();
        assert_eq!(s.len(), 25 * 11);
        assert_eq!(s[10].w, 1.5);
        assert!(sample_lines(&lines, 0.0, 1.0, 5).is_err());
        assert!(sample_lines(&lines, 1.0, 2.0, 1).is_err());
    }
}
