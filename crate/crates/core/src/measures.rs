//! Atomic angular measures on the circle `[0, 2π)`.
//!
//! Each segment of length `|ℓ|` at direction `α` contributes the two atoms
//! `(α, |ℓ|/2)` and `(α+π, |ℓ|/2)`; the boundary measure applies the same rule
//! to the polygon edges and halves the result. Fourier coefficients are exact
//! atomic sums in the unnormalized convention `μ̂(ℓ) = Σ m_j e^{-iℓα_j}`; the
//! Ḣ⁻² norm divides by `√(2π)` to work in the orthonormal basis.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{circular_distance, reduce_angle, ConvexPolygon, Interval, SegmentSet, ANGLE_TOL};

/// Default truncation frequency for Ḣ⁻² sums.
pub const DEFAULT_ELL_MAX: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

/// Finite positive combination of Dirac masses on the circle.
///
/// Atoms keep first-occurrence order; angles within [`ANGLE_TOL`] (including
/// across the `2π ≡ 0` seam) are merged on construction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AngularMeasure {
    atoms: Vec<Atom>,
}

impl AngularMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a measure from raw `(angle, mass)` pairs. Angles are reduced to
    /// `[0, 2π)`; masses must be finite and positive.
    pub fn from_atoms(raw: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms = Vec::new();
        for (angle, mass) in raw {
            if !angle.is_finite() {
                return Err(Error::Parameter(format!("non-finite atom angle {angle}")));
            }
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(Error::Parameter(format!("atom mass must be positive, got {mass}")));
            }
            atoms.push(Atom {
                angle: reduce_angle(angle),
                mass,
            });
        }
        Ok(Self {
            atoms: merge_atoms(atoms),
        })
    }

    #[inline]
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Unnormalized Fourier coefficient `Σ m_j e^{-iℓα_j}`.
    pub fn fourier(&self, ell: i64) -> Complex64 {
        let l = ell as f64;
        self.atoms
            .iter()
            .map(|a| Complex64::from_polar(a.mass, -l * a.angle))
            .sum()
    }

    /// Coefficients for `ℓ = 0..=ell_max`.
    pub fn fourier_coefficients(&self, ell_max: usize) -> Vec<Complex64> {
        (0..=ell_max as i64).map(|l| self.fourier(l)).collect()
    }

    /// `∫ φ dμ` for a trigonometric test function.
    pub fn integrate(&self, phi: &TrigSeries) -> f64 {
        self.atoms.iter().map(|a| a.mass * phi.eval(a.angle)).sum()
    }

    /// Mass of the atoms lying in the union of closed arcs.
    pub fn mass_on_arcs(&self, arcs: &[Interval]) -> f64 {
        self.atoms
            .iter()
            .filter(|a| arcs.iter().any(|arc| on_arc(a.angle, arc)))
            .map(|a| a.mass)
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_atoms(self.atoms.iter().map(|a| (a.angle, a.mass * factor)))
    }
}

fn on_arc(angle: f64, arc: &Interval) -> bool {
    let span = arc.hi - arc.lo;
    if span >= TAU - ANGLE_TOL {
        return true;
    }
    (angle - arc.lo).rem_euclid(TAU) <= span + ANGLE_TOL
        || circular_distance(angle, arc.lo) <= ANGLE_TOL
}

fn merge_atoms(atoms: Vec<Atom>) -> Vec<Atom> {
    let n = atoms.len();
    if n < 2 {
        return atoms;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| atoms[i].angle.total_cmp(&atoms[j].angle).then(i.cmp(&j)));

    // group[i] = representative (smallest original index) of atom i's cluster
    let mut group: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for w in 1..=n {
        let split = w == n || atoms[order[w]].angle - atoms[order[w - 1]].angle > ANGLE_TOL;
        if split {
            let rep = order[start..w].iter().copied().min().unwrap();
            for &k in &order[start..w] {
                group[k] = rep;
            }
            start = w;
        }
    }
    // seam between the largest angles and 0
    let first = order[0];
    let last = order[n - 1];
    if group[first] != group[last] && atoms[first].angle + TAU - atoms[last].angle <= ANGLE_TOL {
        let (keep, drop) = {
            let (a, b) = (group[first], group[last]);
            (a.min(b), a.max(b))
        };
        for g in group.iter_mut() {
            if *g == drop {
                *g = keep;
            }
        }
    }

    let mut out: Vec<Atom> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let rep = group[i];
        if slot[rep] == usize::MAX {
            slot[rep] = out.len();
            out.push(Atom {
                angle: atoms[rep].angle,
                mass: 0.0,
            });
        }
        out[slot[rep]].mass += atoms[i].mass;
    }
    out
}

/// `μ_O`: two atoms of mass `|ℓ|/2` per segment, at its direction and antipode.
pub fn measure_of_segments(segs: &SegmentSet) -> AngularMeasure {
    let raw = segs.iter().flat_map(|s| {
        let (alpha, half) = (s.angle(), 0.5 * s.length());
        [(alpha, half), (alpha + PI, half)]
    });
    AngularMeasure::from_atoms(raw).expect("segments have positive length")
}

/// `μ_∂Ω`: the segment construction on the boundary edges, halved.
pub fn measure_of_boundary(poly: &ConvexPolygon) -> AngularMeasure {
    let raw = poly.edge_segments().segments().iter().flat_map(|s| {
        let (alpha, quarter) = (s.angle(), 0.25 * s.length());
        [(alpha, quarter), (alpha + PI, quarter)]
    }).collect::<Vec<_>>();
    AngularMeasure::from_atoms(raw).expect("edges have positive length")
}

/// Truncated Ḣ⁻² distance with its certified remainder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HMinus2 {
    /// `sqrt(Σ_{0<|ℓ|≤ell_max} |ν̂(ℓ)|² / (2π ℓ⁴))`.
    pub value: f64,
    /// Upper bound on the omitted squared tail `Σ_{|ℓ|>ell_max}`.
    pub tail: f64,
    pub ell_max: usize,
}

impl HMinus2 {
    /// Upper bound on the untruncated norm.
    pub fn upper(&self) -> f64 {
        (self.value * self.value + self.tail).sqrt()
    }
}

/// Ḣ⁻² distance between two measures in the orthonormal Fourier convention.
pub fn h_minus2_distance(mu1: &AngularMeasure, mu2: &AngularMeasure, ell_max: usize) -> Result<HMinus2> {
    if ell_max < 2 {
        return Err(Error::Parameter(format!("ell_max must be >= 2, got {ell_max}")));
    }
    let mut sum = 0.0;
    for ell in 1..=ell_max as i64 {
        let nu = mu1.fourier(ell) - mu2.fourier(ell);
        let l2 = (ell * ell) as f64;
        sum += nu.norm_sqr() / (l2 * l2);
    }
    // ±ℓ contribute equally for real measures
    let value_sq = 2.0 * sum / TAU;
    let mass = mu1.total_mass() + mu2.total_mass();
    let tail = mass * mass / TAU * 2.0 / (3.0 * (ell_max as f64).powi(3));
    Ok(HMinus2 {
        value: value_sq.sqrt(),
        tail,
        ell_max,
    })
}

pub fn fourier(mu: &AngularMeasure, ell: i64) -> Complex64 {
    mu.fourier(ell)
}

pub fn mass_on_arcs(mu: &AngularMeasure, arcs: &[Interval]) -> f64 {
    mu.mass_on_arcs(arcs)
}

/// Closed arcs of directions at angular distance at least `beta` from both axes.
pub fn j_beta_arcs(beta: f64) -> [Interval; 4] {
    let q = PI / 2.0;
    [0.0, q, PI, 3.0 * q].map(|start| Interval {
        lo: start + beta,
        hi: start + q - beta,
    })
}

/// One real Fourier mode `c·cos(kθ) + s·sin(kθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigTerm {
    pub frequency: u32,
    pub cos: f64,
    pub sin: f64,
}

/// A real trigonometric polynomial with zero mean.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    terms: Vec<TrigTerm>,
}

impl TrigSeries {
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.frequency == 0 && t.cos != 0.0) {
            return Err(Error::Parameter(
                "test function must have zero mean (no constant term)".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn cos(frequency: u32) -> Result<Self> {
        Self::new(vec![TrigTerm {
            frequency,
            cos: 1.0,
            sin: 0.0,
        }])
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let (s, c) = (t.frequency as f64 * theta).sin_cos();
                t.cos * c + t.sin * s
            })
            .sum()
    }

    pub fn max_frequency(&self) -> u32 {
        self.terms.iter().map(|t| t.frequency).max().unwrap_or(0)
    }

    /// `‖φ‖_{Ḣ²} = sqrt(Σ ℓ⁴ |φ̃(ℓ)|²)` with `φ̃` the orthonormal coefficients;
    /// a mode `c cos kθ + s sin kθ` contributes `π k⁴ (c² + s²)`.
    pub fn h2_norm(&self) -> f64 {
        let mut by_freq: Vec<(u32, f64, f64)> = Vec::new();
        for t in &self.terms {
            match by_freq.iter_mut().find(|(k, _, _)| *k == t.frequency) {
                Some(entry) => {
                    entry.1 += t.cos;
                    entry.2 += t.sin;
                }
                None => by_freq.push((t.frequency, t.cos, t.sin)),
            }
        }
        by_freq
            .iter()
            .map(|&(k, c, s)| PI * (k as f64).powi(4) * (c * c + s * s))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pairing {
    pub pairing_gap: f64,
    pub h2_norm_phi: f64,
}

/// `|∫φ dμ1 − ∫φ dμ2|` together with `‖φ‖_{Ḣ²}`.
pub fn pair_with_test_function(mu1: &AngularMeasure, mu2: &AngularMeasure, phi: &TrigSeries) -> Pairing {
    Pairing {
        pairing_gap: (mu1.integrate(phi) - mu2.integrate(phi)).abs(),
        h2_norm_phi: phi.h2_norm(),
    }
}
