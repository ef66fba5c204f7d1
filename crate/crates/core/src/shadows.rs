//! Shadow functions `f(θ)` (width of the domain) and `g(θ)` (total projected
//! length of the segment set), their `|cos|` Fourier multipliers, and the L²
//! gap `∫(g−f)²` by quadrature and by Parseval.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::ConvexPolygon;
use crate::measures::{measure_of_boundary, AngularMeasure};

/// Default number of θ samples on `[0, 2π)`.
pub const DEFAULT_GRID: usize = 8192;

/// `a_ℓ = ∫₀^{2π} |cos θ| e^{-iℓθ} dθ`: zero for odd `ℓ`, `4/(ℓ²−1)` with sign
/// `+` for `ℓ ≡ 2 (mod 4)` and `−` for `ℓ ≡ 0 (mod 4)`. `a_0 = 4`.
pub fn abs_cos_coefficient(ell: i64) -> f64 {
    if ell % 2 != 0 {
        return 0.0;
    }
    let l = ell as f64;
    let magnitude = 4.0 / (l * l - 1.0);
    if ell.rem_euclid(4) == 2 {
        magnitude
    } else {
        -magnitude
    }
}

/// `g(θ) = Σ m_j |cos(θ − α_j)|`.
pub fn shadow_g(mu: &AngularMeasure, theta: f64) -> f64 {
    mu.atoms()
        .iter()
        .map(|a| a.mass * (theta - a.angle).cos().abs())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShadowRoute {
    /// Width of the support interval.
    Geometric,
    /// `|cos|` convolved with the boundary measure.
    Convolution,
}

pub fn shadow_f(poly: &ConvexPolygon, theta: f64, route: ShadowRoute) -> f64 {
    match route {
        ShadowRoute::Geometric => poly.width(theta),
        ShadowRoute::Convolution => shadow_g(&measure_of_boundary(poly), theta),
    }
}

/// `f`, `g` and `g − f` on the periodic grid `θ_k = 2πk/n`, integrated with
/// the trapezoid rule.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowProfile {
    n_grid: usize,
    f: Vec<f64>,
    g: Vec<f64>,
    gap: Vec<f64>,
}

impl ShadowProfile {
    #[inline]
    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        TAU / self.n_grid as f64
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_grid as f64
    }

    pub fn f_values(&self) -> &[f64] {
        &self.f
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g
    }

    pub fn gap_values(&self) -> &[f64] {
        &self.gap
    }

    /// Periodic trapezoid rule on `[0, 2π)`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.spacing() * values.iter().sum::<f64>()
    }

    /// `∫(g − f) dθ`.
    pub fn integral_gap(&self) -> f64 {
        self.integrate(&self.gap)
    }

    pub fn integral_f(&self) -> f64 {
        self.integrate(&self.f)
    }

    pub fn integral_g(&self) -> f64 {
        self.integrate(&self.g)
    }
}

pub fn sample_profile(poly: &ConvexPolygon, mu_o: &AngularMeasure, n_grid: usize) -> Result<ShadowProfile> {
    if n_grid < 16 || n_grid % 2 != 0 {
        return Err(Error::Parameter(format!(
            "n_grid must be even and at least 16, got {n_grid}"
        )));
    }
    let mut f = Vec::with_capacity(n_grid);
    let mut g = Vec::with_capacity(n_grid);
    for k in 0..n_grid {
        let theta = TAU * k as f64 / n_grid as f64;
        f.push(poly.width(theta));
        g.push(shadow_g(mu_o, theta));
    }
    let gap = g.iter().zip(&f).map(|(g, f)| g - f).collect();
    Ok(ShadowProfile { n_grid, f, g, gap })
}

/// `∫(g − f)² dθ` by the trapezoid rule.
pub fn l2_gap_quadrature(profile: &ShadowProfile) -> f64 {
    profile.spacing() * profile.gap.iter().map(|h| h * h).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParsevalGap {
    /// Truncated Parseval sum.
    pub value: f64,
    /// Bound on the omitted `|ℓ| > ell_max` terms.
    pub tail: f64,
}

/// `∫(g − f)² = (4L − 2|∂Ω|)²/(2π) + Σ_{ℓ≠0} a_ℓ² |μ̂_O(ℓ) − μ̂_∂Ω(ℓ)|² / (2π)`,
/// truncated at `ell_max`.
pub fn l2_gap_parseval(mu_o: &AngularMeasure, mu_boundary: &AngularMeasure, ell_max: usize) -> Result<ParsevalGap> {
    if ell_max < 2 {
        return Err(Error::Parameter(format!("ell_max must be >= 2, got {ell_max}")));
    }
    let zero = 4.0 * mu_o.total_mass() - 4.0 * mu_boundary.total_mass();
    let mut sum = 0.0;
    for ell in (2..=ell_max as i64).step_by(2) {
        let a = abs_cos_coefficient(ell);
        let nu = mu_o.fourier(ell) - mu_boundary.fourier(ell);
        sum += a * a * nu.norm_sqr();
    }
    let value = (zero * zero + 2.0 * sum) / TAU;
    let mass = mu_o.total_mass() + mu_boundary.total_mass();
    // a_ℓ² ≤ 16/ℓ⁴ · (1 − 1/ℓ²)⁻² and Σ_{ℓ>N} ℓ⁻⁴ ≤ 1/(3N³)
    let next = (ell_max + 1) as f64;
    let inflation = 1.0 / (1.0 - 1.0 / (next * next)).powi(2);
    let tail = mass * mass / TAU * 2.0 * 16.0 * inflation / (3.0 * (ell_max as f64).powi(3));
    Ok(ParsevalGap { value, tail })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxGap {
    /// Largest sampled value of `g − f`.
    pub value: f64,
    pub theta: f64,
    /// Golden-section refinement on the bracketing cells.
    pub refined_value: f64,
    pub refined_theta: f64,
    /// `2L · π / n_grid`: the true maximum is at most `value + lipschitz_slack`.
    pub lipschitz_slack: f64,
}

/// Grid maximum of `g − f`, refined to `1e-10` in θ.
pub fn max_gap(profile: &ShadowProfile, poly: &ConvexPolygon, mu_o: &AngularMeasure) -> MaxGap {
    let (k, value) = profile
        .gap
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let theta = profile.theta(k);
    let h = |t: f64| shadow_g(mu_o, t) - poly.width(t);
    let (refined_theta, refined_value) =
        golden_section_max(h, theta - profile.spacing(), theta + profile.spacing(), 1e-10);
    let (refined_theta, refined_value) = if refined_value >= value {
        (refined_theta, refined_value)
    } else {
        (theta, value)
    };
    MaxGap {
        value,
        theta,
        refined_value,
        refined_theta,
        lipschitz_slack: 2.0 * mu_o.total_mass() * PI / profile.n_grid as f64,
    }
}

fn golden_section_max(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    while b - a > tol {
        if hc > hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, h(t))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzEstimate {
    pub f: f64,
    pub g: f64,
}

/// Largest finite-difference slope of `f` and `g` over consecutive grid points.
pub fn lipschitz_estimate(profile: &ShadowProfile) -> LipschitzEstimate {
    let slope = |v: &[f64]| {
        let n = v.len();
        (0..n)
            .map(|k| (v[(k + 1) % n] - v[k]).abs())
            .fold(0.0, f64::max)
            / profile.spacing()
    };
    LipschitzEstimate {
        f: slope(&profile.f),
        g: slope(&profile.g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{direction, Point2, Segment, SegmentSet};
    use crate::measures::measure_of_segments;
    use std::f64::consts::FRAC_PI_4;

    fn unit_square_boundary() -> (ConvexPolygon, AngularMeasure) {
        let sq = ConvexPolygon::unit_square();
        let mu = measure_of_segments(&sq.edge_segments());
        (sq, mu)
    }

    /// Midpoint-rule oracle for `∫ |cos θ| e^{-iℓθ} dθ` (real part; the
    /// imaginary part vanishes by symmetry).
    fn quadrature_coefficient(ell: i64) -> f64 {
        // kinks of |cos| sit at π/2 + kπ; integrate piecewise-smooth pieces with
        // composite Simpson on [−π/2, π/2] and [π/2, 3π/2]
        let simpson = |a: f64, b: f64| {
            let n = 20_000;
            let h = (b - a) / n as f64;
            let f = |t: f64| t.cos().abs() * (ell as f64 * t).cos();
            let mut s = f(a) + f(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + i as f64 * h);
            }
            s * h / 3.0
        };
        simpson(-PI / 2.0, PI / 2.0) + simpson(PI / 2.0, 3.0 * PI / 2.0)
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(abs_cos_coefficient(2), 4.0 / 3.0);
        assert_eq!(abs_cos_coefficient(3), 0.0);
        assert_eq!(abs_cos_coefficient(4), -4.0 / 15.0);
        assert_eq!(abs_cos_coefficient(0), 4.0);
        assert_eq!(abs_cos_coefficient(-6), abs_cos_coefficient(6));
    }

    #[test]
    fn coefficients_match_quadrature() {
        for ell in -64..=64 {
            let q = quadrature_coefficient(ell);
            assert!((q - abs_cos_coefficient(ell)).abs() < 1e-8, "ell={ell} q={q}");
        }
    }

    #[test]
    fn even_coefficients_bounded_below() {
        for ell in (2..2000).step_by(2) {
            let l = ell as f64;
            assert!(abs_cos_coefficient(ell).abs() >= 4.0 / (l * l));
        }
    }

    #[test]
    fn shadow_g_examples() {
        let seg = SegmentSet::new(vec![Segment::new(Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap()]);
        let mu = measure_of_segments(&seg);
        for k in 0..20 {
            let t = 0.37 * k as f64;
            assert!((shadow_g(&mu, t) - t.cos().abs()).abs() < 1e-15);
            assert!((shadow_g(&mu, t) - shadow_g(&mu, t + PI)).abs() < 1e-14);
        }
        let (_, sq) = unit_square_boundary();
        assert!((shadow_g(&sq, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn shadow_f_examples() {
        let sq = ConvexPolygon::unit_square();
        let expected = (3f64.sqrt() + 1.0) / 2.0;
        for route in [ShadowRoute::Geometric, ShadowRoute::Convolution] {
            assert!((shadow_f(&sq, PI / 6.0, route) - expected).abs() < 1e-15);
            assert!((shadow_f(&sq, FRAC_PI_4, route) - 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn square_boundary_profile() {
        let (sq, mu) = unit_square_boundary();
        let p = sample_profile(&sq, &mu, 8192).unwrap();
        for k in 0..p.n_grid() {
            let t = p.theta(k);
            assert!((p.gap_values()[k] - (t.cos().abs() + t.sin().abs())).abs() < 1e-14);
            assert!((p.g_values()[k] - 2.0 * p.f_values()[k]).abs() < 1e-14);
            assert!(p.gap_values()[k] >= 1.0 - 1e-15);
        }
        let mean_g = p.integral_g() / TAU;
        assert!((mean_g - 4.0 * 4.0 / TAU).abs() < 1e-6 * mean_g);
        assert!(sample_profile(&sq, &mu, 15).is_err());
        assert!(sample_profile(&sq, &mu, 17).is_err());
        assert!(sample_profile(&sq, &mu, 8).is_err());
    }

    #[test]
    fn square_boundary_l2_gap_both_routes() {
        let (sq, mu) = unit_square_boundary();
        let exact = TAU + 4.0;
        let p = sample_profile(&sq, &mu, 8192).unwrap();
        assert!((l2_gap_quadrature(&p) - exact).abs() < 1e-5);
        let pg = l2_gap_parseval(&mu, &measure_of_boundary(&sq), 256).unwrap();
        assert!(pg.value <= exact + 1e-12 && exact <= pg.value + pg.tail);
        assert!((pg.value - exact).abs() < 1e-5);
    }

    #[test]
    fn empty_set_l2_gap() {
        let sq = ConvexPolygon::unit_square();
        let empty = AngularMeasure::empty();
        let p = sample_profile(&sq, &empty, 8192).unwrap();
        assert!((l2_gap_quadrature(&p) - (TAU + 4.0)).abs() < 1e-5);
        let pg = l2_gap_parseval(&empty, &measure_of_boundary(&sq), 256).unwrap();
        assert!((pg.value - (TAU + 4.0)).abs() < 1e-5);
        let m = max_gap(&p, &sq, &empty);
        assert!((m.value + 1.0).abs() < 1e-15 && m.theta == 0.0);
    }

    #[test]
    fn square_boundary_max_gap() {
        let (sq, mu) = unit_square_boundary();
        let p = sample_profile(&sq, &mu, 8192).unwrap();
        let m = max_gap(&p, &sq, &mu);
        assert!((m.value - 2f64.sqrt()).abs() < 1e-14);
        // attained at every odd multiple of π/4; all are grid points
        let quarter = m.theta / FRAC_PI_4;
        assert!((quarter - quarter.round()).abs() < 1e-12 && quarter.round() as i64 % 2 == 1);
        assert!(m.refined_value >= m.value);
        assert!(m.refined_value <= m.value + m.lipschitz_slack);
    }

    #[test]
    fn lipschitz_examples() {
        let seg = SegmentSet::new(vec![Segment::new(Point2::ORIGIN, direction(0.0)).unwrap()]);
        let sq = ConvexPolygon::unit_square();
        let p = sample_profile(&sq, &measure_of_segments(&seg), 4096).unwrap();
        let est = lipschitz_estimate(&p);
        assert!(est.g <= 1.0 + 1e-9);
        // |cos|+|sin| has slope at most 1, well inside |∂Ω|/2 = 2
        assert!(est.f <= 2.0);
        assert!((est.f - 1.0).abs() < 1e-3);
    }

    mod props {
        use super::*;
        use crate::constructions::random_scene;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn routes_agree(seed in any::<u64>(), theta in 0.0f64..TAU) {
                let s = random_scene(seed, 12, 0).unwrap();
                let a = shadow_f(&s.domain, theta, ShadowRoute::Geometric);
                let b = shadow_f(&s.domain, theta, ShadowRoute::Convolution);
                prop_assert!((a - b).abs() < 1e-9);
            }

            #[test]
            fn profile_invariants(seed in any::<u64>()) {
                let s = random_scene(seed, 10, 6).unwrap();
                let mu = measure_of_segments(&s.segments);
                let p = sample_profile(&s.domain, &mu, 1024).unwrap();
                let half = p.n_grid() / 2;
                for k in 0..half {
                    prop_assert!((p.f_values()[k] - p.f_values()[k + half]).abs() < 1e-9);
                    prop_assert!((p.g_values()[k] - p.g_values()[k + half]).abs() < 1e-9);
                }
                let est = lipschitz_estimate(&p);
                prop_assert!(est.g <= mu.total_mass() + 1e-6);
                prop_assert!(est.f <= s.domain.perimeter() / 2.0 + 1e-6);
            }
        }
    }
}
