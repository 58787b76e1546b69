//! Acceptance suite: one pass/fail line per criterion, nonzero exit when any
//! criterion fails. Tolerances and basis sizes are pinned here.

use num_complex::Complex64;
use plate_hole::assembler::{assemble, solve, SolverConfig};
use plate_hole::corner::{ling_corner_asymptote, wedge_root_t1, williams_exponent};
use plate_hole::field::{
    boundary_trace, field_grid, l2_error_phi, l2_error_trace, recover_h, stress_at,
};
use plate_hole::linsolve::{lstsq, RowLabel};
use plate_hole::oracles::{circle_phi, ellipse_phi, ling_trace, LingParams};
use plate_hole::quadrature::{legendre_rule, map_rule, nested_integrate, SingularEnd};
use plate_hole::shapes::BoundaryShape;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Result<Vec<(bool, String)>, String>,
}

fn main() {
    let criteria = [
        Criterion {
            name: "criterion 1 (corner exponents)",
            budget: Duration::from_secs(1),
            run: criterion_1,
        },
        Criterion {
            name: "criterion 2 (nested quadrature)",
            budget: Duration::from_secs(5),
            run: criterion_2,
        },
        Criterion {
            name: "criterion 3 (circle)",
            budget: Duration::from_secs(60),
            run: criterion_3,
        },
        Criterion {
            name: "criterion 4 (ellipse)",
            budget: Duration::from_secs(300),
            run: criterion_4,
        },
        Criterion {
            name: "criterion 5 (overlap alpha = pi/3)",
            budget: Duration::from_secs(600),
            run: criterion_5,
        },
        Criterion {
            name: "criterion 6 (overlap alpha = 2pi/3, corner term)",
            budget: Duration::from_secs(600),
            run: criterion_6,
        },
        Criterion {
            name: "criterion 7 (property suite)",
            budget: Duration::from_secs(600),
            run: criterion_7,
        },
    ];

    let mut failures = 0usize;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        match outcome {
            Ok(subs) => {
                let in_budget = elapsed <= c.budget;
                let all = subs.iter().all(|(ok, _)| *ok) && in_budget;
                println!(
                    "{}: {} ({:.1} s)",
                    c.name,
                    if all { "PASS" } else { "FAIL" },
                    elapsed.as_secs_f64()
                );
                for (ok, detail) in &subs {
                    println!("    [{}] {detail}", if *ok { "ok" } else { "FAIL" });
                }
                if !in_budget {
                    println!(
                        "    [FAIL] runtime {:.1} s exceeds budget {:.0} s",
                        elapsed.as_secs_f64(),
                        c.budget.as_secs_f64()
                    );
                }
                if !all {
                    failures += 1;
                }
            }
            Err(e) => {
                println!("{}: FAIL ({:.1} s)", c.name, elapsed.as_secs_f64());
                println!("    [FAIL] error: {e}");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}

fn criterion_1() -> Result<Vec<(bool, String)>, String> {
    let mut subs = Vec::new();
    let s = williams_exponent(2.0 * PI / 3.0).map_err(|e| e.to_string())?;
    subs.push((
        (s.lambda - 2.0465).abs() <= 5e-4,
        format!("williams_exponent(2pi/3) = {:.6} (want 2.0465 +- 5e-4)", s.lambda),
    ));
    let p = williams_exponent(PI).map_err(|e| e.to_string())?;
    subs.push((
        p.lambda == 2.0,
        format!("williams_exponent(pi) = {} (want exactly 2)", p.lambda),
    ));
    let t1 = wedge_root_t1(2.0 * PI / 3.0).map_err(|e| e.to_string())?;
    subs.push((
        (t1 - 0.6157).abs() <= 5e-4,
        format!("wedge_root_t1(2pi/3) = {t1:.6} (want 0.6157 +- 5e-4)"),
    ));
    Ok(subs)
}

fn criterion_2() -> Result<Vec<(bool, String)>, String> {
    let mut subs = Vec::new();
    for p in [0.5, 1.5, 2.5] {
        let v = nested_integrate(
            |x: f64| (1.0 - x).powf(p),
            0.0,
            1.0,
            16,
            1e-15,
            SingularEnd::Right,
        )
        .map_err(|e| e.to_string())?;
        let err = (v - 1.0 / (p + 1.0)).abs();
        subs.push((err <= 1e-12, format!("p = {p}: error {err:.2e} (want <= 1e-12)")));
    }
    let v = nested_integrate(
        |x: f64| (1.0 - x).powf(-0.5),
        0.0,
        1.0,
        16,
        1e-15,
        SingularEnd::Right,
    )
    .map_err(|e| e.to_string())?;
    let err = (v - 2.0).abs();
    subs.push((err <= 1e-6, format!("p = -0.5: error {err:.2e} (want <= 1e-6)")));

    let single = map_rule(&legendre_rule(16).map_err(|e| e.to_string())?, 0.0, 1.0)
        .map_err(|e| e.to_string())?;
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut p = -0.9;
    let mut all_ok = true;
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
        .map_err(|e| e.to_string())?;
        let ne = (nested - exact).abs();
        let se = (single.integrate(|x| (1.0 - x).powf(p)) - exact).abs();
        // 5e-15 allowance: at integer p both errors sit at the f64 noise floor
        if ne > se.max(5e-15) {
            all_ok = false;
            worst = Some((p, ne, se));
        }
        p += 0.1;
    }
    subs.push((
        all_ok,
        match worst {
            None => "sweep p in (-0.9, 5]: nested error <= traditional everywhere".into(),
            Some((p, ne, se)) => {
                format!("sweep violated at p = {p:.1}: nested {ne:.2e} vs traditional {se:.2e}")
            }
        },
    ));
    Ok(subs)
}

fn criterion_3() -> Result<Vec<(bool, String)>, String> {
    let shape = BoundaryShape::circle();
    let cfg_n = |n| SolverConfig {
        n_basis: n,
        ..SolverConfig::default()
    };
    let sol32 = solve(&shape, &cfg_n(32)).map_err(|e| e.to_string())?;
    let l2_32 = l2_error_phi(&sol32, circle_phi).map_err(|e| e.to_string())?;
    let sol8 = solve(&shape, &cfg_n(8)).map_err(|e| e.to_string())?;
    let l2_8 = l2_error_phi(&sol8, circle_phi).map_err(|e| e.to_string())?;
    let sol16 = solve(&shape, &cfg_n(16)).map_err(|e| e.to_string())?;
    let l2_16 = l2_error_phi(&sol16, circle_phi).map_err(|e| e.to_string())?;

    let mut subs = vec![
        (
            l2_32 <= 1e-10,
            format!("L2 error of phi at N = 32: {l2_32:.3e} (want <= 1e-10)"),
        ),
        (
            l2_8 >= 10.0 * l2_16,
            format!("spectral decay: L2(N=8) = {l2_8:.3e} >= 10 x L2(N=16) = {l2_16:.3e}"),
        ),
    ];
    let trace_pole = boundary_trace(&sol32, FRAC_PI_2).map_err(|e| e.to_string())?;
    subs.push((
        (trace_pole - 3.0).abs() <= 1e-8,
        format!("Kirsch concentration at theta = pi/2: {trace_pole:.12} (want 3 +- 1e-8)"),
    ));
    let trace_eq = boundary_trace(&sol32, 0.0).map_err(|e| e.to_string())?;
    subs.push((
        (trace_eq + 1.0).abs() <= 1e-8,
        format!("trace at theta = 0: {trace_eq:.12} (want -1 +- 1e-8)"),
    ));
    Ok(subs)
}

fn criterion_4() -> Result<Vec<(bool, String)>, String> {
    let shape = BoundaryShape::ellipse(0.5).map_err(|e| e.to_string())?;
    let sol = solve(
        &shape,
        &SolverConfig {
            n_basis: 80,
            ..SolverConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let l2 = l2_error_phi(&sol, |t| ellipse_phi(t, 0.5).expect("valid m"))
        .map_err(|e| e.to_string())?;
    Ok(vec![(
        l2 <= 1e-10,
        format!("L2 error of phi at N = 80: {l2:.3e} (want <= 1e-10)"),
    )])
}

fn criterion_5() -> Result<Vec<(bool, String)>, String> {
    let alpha = PI / 3.0;
    let shape = BoundaryShape::overlapping_circles(alpha).map_err(|e| e.to_string())?;
    let sol = solve(
        &shape,
        &SolverConfig {
            n_basis: 64,
            use_corner: true,
            ..SolverConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let params = LingParams::new(alpha, 1.0, 0.0).map_err(|e| e.to_string())?;
    let l2 = l2_error_trace(&sol, |t| ling_trace(t, &params).expect("interior angle"))
        .map_err(|e| e.to_string())?;
    let away = l2_away_from_corner(&sol, &params, 1e-2)?;
    Ok(vec![
        (
            l2 <= 5e-5,
            format!("L2 error of the trace at N = 64: {l2:.3e} (want <= 5e-5)"),
        ),
        (
            true,
            format!("diagnostic: L2 restricted to [0, pi/2 - 1e-2] is {away:.3e}"),
        ),
    ])
}

fn criterion_6() -> Result<Vec<(bool, String)>, String> {
    let alpha = 2.0 * PI / 3.0;
    let shape = BoundaryShape::overlapping_circles(alpha).map_err(|e| e.to_string())?;
    let params = LingParams::new(alpha, 1.0, 0.0).map_err(|e| e.to_string())?;
    let with_corner = solve(
        &shape,
        &SolverConfig {
            n_basis: 64,
            use_corner: true,
            ..SolverConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let l2 = l2_error_trace(&with_corner, |t| ling_trace(t, &params).expect("interior angle"))
        .map_err(|e| e.to_string())?;
    let away = l2_away_from_corner(&with_corner, &params, 1e-2)?;

    let eps_grid = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
    let mut max_rel: f64 = 0.0;
    let mut max_abs_on: f64 = 0.0;
    for &eps in &eps_grid {
        let theta = FRAC_PI_2 - eps;
        let exact = ling_trace(theta, &params).map_err(|e| e.to_string())?;
        let got = boundary_trace(&with_corner, theta).map_err(|e| e.to_string())?;
        max_rel = max_rel.max((got - exact).abs() / exact.abs());
        max_abs_on = max_abs_on.max((got - exact).abs());
    }

    let without_corner = solve(
        &shape,
        &SolverConfig {
            n_basis: 64,
            use_corner: false,
            ..SolverConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let mut max_abs_off: f64 = 0.0;
    for &eps in &eps_grid {
        let theta = FRAC_PI_2 - eps;
        let exact = ling_trace(theta, &params).map_err(|e| e.to_string())?;
        let got = boundary_trace(&without_corner, theta).map_err(|e| e.to_string())?;
        max_abs_off = max_abs_off.max((got - exact).abs());
    }

    Ok(vec![
        (
            l2 <= 1e-4,
            format!("L2 error of the trace at N = 64, corner on: {l2:.3e} (want <= 1e-4)"),
        ),
        (
            true,
            format!("diagnostic: L2 restricted to [0, pi/2 - 1e-2] is {away:.3e}"),
        ),
        (
            max_rel <= 1e-3,
            format!("max relative error approaching the corner: {max_rel:.3e} (want <= 1e-3)"),
        ),
        (
            max_abs_off >= 10.0 * max_abs_on,
            format!(
                "corner term off degrades the near-corner error by {:.0}x \
                 ({max_abs_off:.3e} vs {max_abs_on:.3e}, want >= 10x)",
                max_abs_off / max_abs_on
            ),
        ),
    ])
}

/// L2 error of the trace restricted to [0, pi/2 - delta] (diagnostic only).
fn l2_away_from_corner(
    sol: &plate_hole::assembler::BoundarySolution,
    params: &LingParams,
    delta: f64,
) -> Result<f64, String> {
    let sq = nested_integrate(
        |t| {
            let d = boundary_trace(sol, t).expect("interior angle")
                - ling_trace(t, params).expect("interior angle");
            d * d
        },
        0.0,
        FRAC_PI_2 - delta,
        16,
        1e-15,
        SingularEnd::Right,
    )
    .map_err(|e| e.to_string())?;
    Ok((2.0 / PI * sq.max(0.0)).sqrt())
}

fn criterion_7() -> Result<Vec<(bool, String)>, String> {
    let mut subs = Vec::new();
    let shape = BoundaryShape::circle();
    let cfg = SolverConfig {
        n_basis: 32,
        ..SolverConfig::default()
    };
    let sol = solve(&shape, &cfg).map_err(|e| e.to_string())?;
    let l2 = l2_error_phi(&sol, circle_phi).map_err(|e| e.to_string())?;

    // traction-free boundary via the full Goursat pair
    let chi = cfg.chi;
    let mut max_res: f64 = 0.0;
    for j in 0..64 {
        let t = FRAC_PI_2 * (j as f64 + 0.5) / 64.0;
        let z = sol.shape.z(t);
        let zp = sol.shape.zp(t);
        let varphi = sol.goursat.eval_phi(t).map_err(|e| e.to_string())?;
        let dvarphi = sol.goursat.eval_dphi(t).map_err(|e| e.to_string())? / zp;
        let h = recover_h(&sol, t).map_err(|e| e.to_string())?;
        let phi_full = 0.25 * (1.0 + chi) * z + varphi;
        let dphi_full = 0.25 * (1.0 + chi) + dvarphi;
        let psi_full = 0.5 * (chi - 1.0) * z + h;
        max_res = max_res.max((phi_full + z * dphi_full.conj() + psi_full.conj()).norm());
    }
    subs.push((
        max_res <= (10.0 * l2).max(1e-12),
        format!("traction-free residual {max_res:.3e} <= 10 x L2 error {l2:.3e}"),
    ));

    // far-field stresses at |zeta| = 100
    let s = stress_at(&sol, Complex64::from_polar(100.0, 0.63)).map_err(|e| e.to_string())?;
    let far_ok = (s.sigma_x - 1.0).abs() < 5e-3 && (s.sigma_y - chi).abs() < 5e-3
        && s.tau_xy.abs() < 5e-3;
    subs.push((
        far_ok,
        format!(
            "far field at |zeta| = 100: ({:.4}, {:.4}, {:.4}) vs (1, {chi}, 0) within 5e-3",
            s.sigma_x, s.sigma_y, s.tau_xy
        ),
    ));

    // mirror symmetry of an emitted grid
    let cells = field_grid(&sol, (-2.5, 2.5, -2.5, 2.5), 7, 7).map_err(|e| e.to_string())?;
    let mut sym_ok = true;
    let mut worst = 0.0f64;
    for j in 0..7 {
        for i in 0..7 {
            let a = &cells[j * 7 + i];
            let b = &cells[j * 7 + (6 - i)];
            let c = &cells[(6 - j) * 7 + i];
            if a.valid && b.valid {
                let d = (a.sigma_x - b.sigma_x)
                    .abs()
                    .max((a.sigma_y - b.sigma_y).abs())
                    .max((a.tau_xy + b.tau_xy).abs());
                worst = worst.max(d);
                sym_ok &= d < 1e-6;
            }
            if a.valid && c.valid {
                let d = (a.tau_xy + c.tau_xy).abs();
                worst = worst.max(d);
                sym_ok &= d < 1e-6;
            }
        }
    }
    subs.push((
        sym_ok,
        format!("stress-grid mirror symmetries within 1e-6 (worst {worst:.2e})"),
    ));

    // pointwise analyticity rows on the circle at N = 32
    let sys = assemble(&shape, &cfg).map_err(|e| e.to_string())?;
    let out = lstsq(&sys, false).map_err(|e| e.to_string())?;
    let residual = sys.residual(&out.x);
    let mut max_analyticity = 0.0f64;
    for (row, label) in sys.row_labels.iter().enumerate() {
        if matches!(label, RowLabel::AnalyticityRe(_) | RowLabel::AnalyticityIm(_)) {
            max_analyticity = max_analyticity.max(residual[row].abs());
        }
    }
    subs.push((
        max_analyticity <= 1e-9,
        format!("analyticity rows pointwise {max_analyticity:.3e} (want <= 1e-9)"),
    ));

    // asymptote versus direct exact trace at eps = 1e-3
    let alpha = 2.0 * PI / 3.0;
    let params = LingParams::new(alpha, 1.0, 0.0).map_err(|e| e.to_string())?;
    let eps = 1e-3;
    let exact = ling_trace(FRAC_PI_2 - eps, &params).map_err(|e| e.to_string())?;
    let asym = ling_corner_asymptote(alpha, params.k, 1.0, 0.0, eps).map_err(|e| e.to_string())?;
    let ratio = asym / exact;
    subs.push((
        (ratio - 1.0).abs() <= 0.05,
        format!("corner asymptote / exact trace at eps = 1e-3: {ratio:.4} (want 1 +- 0.05)"),
    ));

    Ok(subs)
}
