//! Gauss-Legendre rules, plain panel integration, and nested (dyadically
//! refined) quadrature for integrands with an endpoint singularity.
//!
//! The nested scheme integrates the current tail interval with a fixed Gauss
//! rule, bisects toward the singular end, and accepts once the whole-tail
//! estimate agrees with the sum of the two half estimates to within the
//! prescribed tolerance. Interior panels committed along the way are kept.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Hard cap on bisections toward the singular end. The relative refinement
/// floor terminates integrable cases long before this; the cap guards
/// against pathological integrands only.
pub const BISECTION_CAP: usize = 60;

/// Tail panels are not refined below this fraction of the original interval.
/// The floor keeps the innermost Gauss nodes representably distinct from the
/// singular endpoint (no evaluation lands on the singularity itself) and
/// makes left- and right-singular runs structurally mirror images. For an
/// integrable endpoint power p > -1 the committed tail error at the floor is
/// O(floor^(p+1)), at most ~1e-9 of the panel scale for p = -1/2.
pub const RELATIVE_WIDTH_FLOOR: f64 = 9.094947017729282e-13; // 2^-40

/// Nodes and weights of a quadrature rule on a finite interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    /// Weighted sum of `f` over the rule's own interval.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// End of the interval that carries the (potential) singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Left,
    Right,
}

/// n-point Gauss-Legendre rule on (-1, 1).
///
/// Nodes are the roots of the degree-n Legendre polynomial, found by Newton
/// iteration from the Tricomi asymptotic guesses; weights follow from the
/// derivative. Nodes come out ascending and exactly antisymmetric.
pub fn legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "legendre_rule requires n >= 1".into(),
        ));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n / 2;
    for i in 0..(half + n % 2) {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = -p / d;
            x += dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_pd(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[half] = 0.0;
        let (_, d) = legendre_pd(n, 0.0);
        weights[half] = 2.0 / (d * d);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (-1.0, 1.0),
    })
}

/// Legendre P_n(x) and its derivative via the three-term recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n from P_n and P_{n-1}
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Affine image of a rule on (a, b); weights scale by (b-a)/2 of the source
/// interval ratio.
pub fn map_rule(rule: &QuadratureRule, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!(
            "map_rule requires a < b, got a = {a}, b = {b}"
        )));
    }
    let (sa, sb) = rule.interval;
    let scale = (b - a) / (sb - sa);
    let nodes = rule
        .nodes
        .iter()
        .map(|&x| a + (x - sa) * scale)
        .collect();
    let weights = rule.weights.iter().map(|&w| w * scale).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (a, b),
    })
}

/// Value types the nested quadrature can accumulate: scalars, complex
/// numbers, or whole vectors of complex values sharing one panel refinement.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    /// self += c * rhs
    fn axpy(&mut self, c: f64, rhs: &Self);
    fn add_value(&mut self, rhs: &Self);
    /// Max-abs distance to another value.
    fn dist(&self, rhs: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn axpy(&mut self, c: f64, rhs: &Self) {
        *self += c * rhs;
    }
    fn add_value(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn dist(&self, rhs: &Self) -> f64 {
        (self - rhs).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn axpy(&mut self, c: f64, rhs: &Self) {
        *self += c * rhs;
    }
    fn add_value(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn dist(&self, rhs: &Self) -> f64 {
        (self - rhs).norm()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Vec<Complex64> {
    fn zero_like(&self) -> Self {
        vec![Complex64::new(0.0, 0.0); self.len()]
    }
    fn axpy(&mut self, c: f64, rhs: &Self) {
        for (s, r) in self.iter_mut().zip(rhs) {
            *s += c * r;
        }
    }
    fn add_value(&mut self, rhs: &Self) {
        for (s, r) in self.iter_mut().zip(rhs) {
            *s += r;
        }
    }
    fn dist(&self, rhs: &Self) -> f64 {
        self.iter()
            .zip(rhs)
            .map(|(s, r)| (s - r).norm())
            .fold(0.0, f64::max)
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

fn gauss_panel<V: QuadValue, F: FnMut(f64) -> V>(
    f: &mut F,
    base: &QuadratureRule,
    a: f64,
    b: f64,
) -> V {
    let mid = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut acc = f(mid + hw * base.nodes[0]);
    let mut out = acc.zero_like();
    out.axpy(hw * base.weights[0], &acc);
    for i in 1..base.nodes.len() {
        acc = f(mid + hw * base.nodes[i]);
        out.axpy(hw * base.weights[i], &acc);
    }
    out
}

/// Nested Gauss-Legendre quadrature over (a, b) with any non-smoothness
/// confined to `singular_end`, generic over the accumulated value type.
///
/// Divergent integrands terminate at the floating-point refinement floor and
/// return a finite (meaningless) value rather than looping; genuinely
/// integrable ones converge long before the cap.
pub fn nested_integrate_value<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
    eps: f64,
    singular_end: SingularEnd,
) -> Result<V> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!(
            "nested_integrate requires a < b, got a = {a}, b = {b}"
        )));
    }
    let base = legendre_rule(n)?;
    let floor = RELATIVE_WIDTH_FLOOR * (b - a);
    match singular_end {
        SingularEnd::Right => {
            let mut lo = a;
            let mut whole = gauss_panel(&mut f, &base, lo, b);
            let mut acc: Option<V> = None;
            for _ in 0..BISECTION_CAP {
                let m = 0.5 * (lo + b);
                if b - lo <= floor || !(m > lo && m < b) {
                    // refinement floor reached
                    return Ok(finish(acc, whole));
                }
                let left = gauss_panel(&mut f, &base, lo, m);
                let right = gauss_panel(&mut f, &base, m, b);
                let mut sum = left.clone();
                sum.add_value(&right);
                if whole.dist(&sum) < eps {
                    return Ok(finish(acc, sum));
                }
                match acc.as_mut() {
                    Some(t) => t.add_value(&left),
                    None => acc = Some(left),
                }
                lo = m;
                whole = right;
            }
            let m = 0.5 * (lo + b);
            let left = gauss_panel(&mut f, &base, lo, m);
            let right = gauss_panel(&mut f, &base, m, b);
            let mut sum = left;
            sum.add_value(&right);
            Err(Error::QuadratureDivergence {
                bisections: BISECTION_CAP,
                gap: whole.dist(&sum),
                estimate: finish(acc, whole).magnitude(),
            })
        }
        SingularEnd::Left => {
            let mut hi = b;
            let mut whole = gauss_panel(&mut f, &base, a, hi);
            let mut acc: Option<V> = None;
            for _ in 0..BISECTION_CAP {
                let m = 0.5 * (a + hi);
                if hi - a <= floor || !(m > a && m < hi) {
                    return Ok(finish(acc, whole));
                }
                let left = gauss_panel(&mut f, &base, a, m);
                let right = gauss_panel(&mut f, &base, m, hi);
                let mut sum = left.clone();
                sum.add_value(&right);
                if whole.dist(&sum) < eps {
                    return Ok(finish(acc, sum));
                }
                match acc.as_mut() {
                    Some(t) => t.add_value(&right),
                    None => acc = Some(right),
                }
                hi = m;
                whole = left;
            }
            let m = 0.5 * (a + hi);
            let left = gauss_panel(&mut f, &base, a, m);
            let right = gauss_panel(&mut f, &base, m, hi);
            let mut sum = left;
            sum.add_value(&right);
            Err(Error::QuadratureDivergence {
                bisections: BISECTION_CAP,
                gap: whole.dist(&sum),
                estimate: finish(acc, whole).magnitude(),
            })
        }
    }
}

fn finish<V: QuadValue>(acc: Option<V>, tail: V) -> V {
    match acc {
        Some(mut t) => {
            t.add_value(&tail);
            t
        }
        None => tail,
    }
}

/// Real-valued nested quadrature (see [`nested_integrate_value`]).
pub fn nested_integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    n: usize,
    eps: f64,
    singular_end: SingularEnd,
) -> Result<f64> {
    nested_integrate_value(f, a, b, n, eps, singular_end)
}

/// Complex-valued nested quadrature (see [`nested_integrate_value`]).
pub fn nested_integrate_complex<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    n: usize,
    eps: f64,
    singular_end: SingularEnd,
) -> Result<Complex64> {
    nested_integrate_value(f, a, b, n, eps, singular_end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule16_on(a: f64, b: f64) -> QuadratureRule {
        map_rule(&legendre_rule(16).unwrap(), a, b).unwrap()
    }

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = legendre_rule(1).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule_closed_form() {
        let r = legendre_rule(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15);
        assert!((r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_points_is_invalid() {
        assert!(matches!(legendre_rule(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn nodes_increasing_weights_positive_sum_matches_interval() {
        for n in [1usize, 2, 3, 5, 8, 16, 31, 64] {
            let r = legendre_rule(n).unwrap();
            for i in 1..n {
                assert!(r.nodes[i] > r.nodes[i - 1]);
            }
            assert!(r.nodes[0] > -1.0 && r.nodes[n - 1] < 1.0);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n} weight sum {s}");
        }
    }

    #[test]
    fn exactness_up_to_degree_2n_minus_1() {
        for n in [2usize, 4, 9, 16] {
            let r = legendre_rule(n).unwrap();
            for deg in 0..2 * n {
                let got = r.integrate(|x| x.powi(deg as i32));
                let exact = if deg % 2 == 0 {
                    2.0 / (deg as f64 + 1.0)
                } else {
                    0.0
                };
                assert!(
                    (got - exact).abs() < 1e-13,
                    "n={n} deg={deg} got {got} want {exact}"
                );
            }
        }
    }

    #[test]
    fn sixteen_point_odd_monomial() {
        let r = legendre_rule(16).unwrap();
        let got = r.integrate(|x| x.powi(31));
        assert!(got.abs() < 1e-13);
    }

    #[test]
    fn map_rule_examples() {
        let r1 = map_rule(&legendre_rule(1).unwrap(), 0.0, 1.0).unwrap();
        assert!((r1.nodes[0] - 0.5).abs() < 1e-15);
        assert!((r1.weights[0] - 1.0).abs() < 1e-15);

        let r2 = map_rule(&legendre_rule(2).unwrap(), 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        for w in &r2.weights {
            assert!((w - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        }

        let r3 = rule16_on(0.0, 1.0);
        assert!((r3.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn map_rule_rejects_degenerate_interval() {
        let r = legendre_rule(4).unwrap();
        assert!(map_rule(&r, 1.0, 1.0).is_err());
        assert!(map_rule(&r, 2.0, 1.0).is_err());
    }

    #[test]
    fn nested_sqrt_endpoint() {
        let v = nested_integrate(|x| (1.0 - x).sqrt(), 0.0, 1.0, 16, 1e-15, SingularEnd::Right)
            .unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn nested_inverse_sqrt_beats_single_panel() {
        let nested =
            nested_integrate(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, 16, 1e-15, SingularEnd::Right)
                .unwrap();
        let single = rule16_on(0.0, 1.0).integrate(|x| 1.0 / (1.0 - x).sqrt());
        let nested_err = (nested - 2.0).abs();
        let single_err = (single - 2.0).abs();
        assert!(nested_err < 1e-6, "nested err {nested_err}");
        assert!(
            nested_err < single_err / 1e3,
            "nested {nested_err} single {single_err}"
        );
    }

    /// Brute-force reference integrator, independent of the nested scheme:
    /// uniform composite Simpson with interval doubling until stable.
    fn reference_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
        let mut prev = f64::NAN;
        let mut m = 64usize;
        loop {
            let h = (b - a) / m as f64;
            let mut s = 0.0;
            for i in 0..m {
                let x0 = a + i as f64 * h;
                s += h / 6.0 * (f(x0 + 1e-14) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h - 1e-14));
            }
            if (s - prev).abs() < 1e-13 || m > 1 << 22 {
                return s;
            }
            prev = s;
            m *= 2;
        }
    }

    #[test]
    fn nested_fractional_power_matches_reference() {
        let v = nested_integrate(
            |x| (1.0 - x).powf(2.5),
            0.0,
            1.0,
            16,
            1e-15,
            SingularEnd::Right,
        )
        .unwrap();
        assert!((v - 1.0 / 3.5).abs() < 1e-12, "analytic check, got {v}");
        let r = reference_integral(|x| (1.0 - x).powf(2.5), 0.0, 1.0);
        assert!((v - r).abs() < 1e-10, "reference check, got {v} vs {r}");
    }

    #[test]
    fn polynomial_terminates_on_first_check_and_matches_plain_rule() {
        let mut count = 0usize;
        let v = nested_integrate(
            |x| {
                count += 1;
                3.0 * x * x - x + 0.25
            },
            0.0,
            1.0,
            16,
            1e-15,
            SingularEnd::Right,
        )
        .unwrap();
        // whole + two halves = 3 panels of 16 nodes
        assert_eq!(count, 48);
        let plain = rule16_on(0.0, 1.0).integrate(|x| 3.0 * x * x - x + 0.25);
        assert!((v - plain).abs() < 1e-13);
    }

    #[test]
    fn mirrored_integrand_matches_within_tolerance() {
        for p in [0.5, 1.3, 2.5, -0.4] {
            let right = nested_integrate(
                |x: f64| (1.0 - x).powf(p),
                0.0,
                1.0,
                16,
                1e-15,
                SingularEnd::Right,
            )
            .unwrap();
            let left =
                nested_integrate(|x: f64| x.powf(p), 0.0, 1.0, 16, 1e-15, SingularEnd::Left)
                    .unwrap();
            assert!((right - left).abs() < 1e-13, "p={p}: {right} vs {left}");
        }
    }

    #[test]
    fn power_sweep_nested_no_worse_than_traditional() {
        let single_rule = rule16_on(0.0, 1.0);
        let mut p = -0.9;
        while p <= 5.0 + 1e-9 {
            let exact = 1.0 / (p + 1.0);
            let nested = nested_integrate(
                |x: f64| (1.0 - x).powf(p),
                0.0,
                1.0,
                16,
                1e-15,
                SingularEnd::Right,
            )
            .unwrap();
            let single = single_rule.integrate(|x| (1.0 - x).powf(p));
            let ne = (nested - exact).abs();
            let se = (single - exact).abs();
            assert!(
                ne <= se.max(5e-15),
                "p={p}: nested err {ne} > traditional err {se}"
            );
            p += 0.1;
        }
    }

    #[test]
    fn complex_integrand() {
        let v = nested_integrate_complex(
            |x| Complex64::new(x.cos(), x.sin()),
            0.0,
            1.0,
            16,
            1e-15,
            SingularEnd::Right,
        )
        .unwrap();
        assert!((v.re - 1f64.sin()).abs() < 1e-14);
        assert!((v.im - (1.0 - 1f64.cos())).abs() < 1e-14);
    }
}
