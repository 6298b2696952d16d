use std::fmt;

use nalgebra::DVector;

use super::{evaluate, node_map, tol, CheckOptions};
use crate::algebra::{algebra_inner, AlgebraElement};
use crate::calculus::{gradient_coeffs, laplace_beltrami};
use crate::error::{GeomError, Result};
use crate::report::{num, CheckReport};
use crate::surface::ParamSurface;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HemisphereVerdict {
    /// f_V ≡ 0 within tolerance.
    Vanishes,
    /// f_V ≤ 0 everywhere, not identically zero.
    NonPositive,
    /// f_V ≥ 0 everywhere (the hemisphere of −V).
    NonNegative,
    Mixed,
}

impl fmt::Display for HemisphereVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HemisphereVerdict::Vanishes => "vanishes identically",
            HemisphereVerdict::NonPositive => "f_V <= 0 (hemisphere)",
            HemisphereVerdict::NonNegative => "f_V >= 0 (hemisphere of -V)",
            HemisphereVerdict::Mixed => "mixed",
        })
    }
}

pub fn hemisphere_verdict(values: impl Iterator<Item = f64>, tol: f64) -> HemisphereVerdict {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    match (lo >= -tol, hi <= tol) {
        (true, true) => HemisphereVerdict::Vanishes,
        (false, true) => HemisphereVerdict::NonPositive,
        (true, false) => HemisphereVerdict::NonNegative,
        (false, false) => HemisphereVerdict::Mixed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdVerdict {
    Holds,
    Equality,
    Fails,
}

impl fmt::Display for ThresholdVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdVerdict::Holds => "holds",
            ThresholdVerdict::Equality => "holds with equality",
            ThresholdVerdict::Fails => "fails (2H^2+Ric_N<0)",
        })
    }
}

/// Verdict on 2H² + Ric_N ≥ 0 for the given value of the left side.
pub fn threshold_verdict(value: f64) -> ThresholdVerdict {
    if value.abs() <= tol::THRESHOLD {
        ThresholdVerdict::Equality
    } else if value > 0.0 {
        ThresholdVerdict::Holds
    } else {
        ThresholdVerdict::Fails
    }
}

/// Diagnostics around the hemisphere hypothesis for f_V = ⟨𝒩, V⟩.
///
/// Fields: `identity` = Δf_V + c_t⟨grad H, ζ(V)⟩ + (B2 + Ric(η)) f_V,
/// `gauss_equation`, `ricci_identity`, `subharmonic_defect` = max(0, −Δf_V)
/// (gated when the threshold holds and f_V ≤ 0), plus informational `f_V`
/// and `P` = Ric(η) + 2K̃ + 4H².
pub fn hos_diagnostic(s: &ParamSurface, v: &AlgebraElement, opts: &CheckOptions) -> Result<CheckReport> {
    let sp = s.space;
    if v.kind != sp.algebra_kind() {
        return Err(GeomError::KindMismatch {
            left: v.kind,
            right: sp.algebra_kind(),
        });
    }
    let (grid, raw) = evaluate(s, opts, |g| {
        let gauss = g.gauss_field();
        let f = gauss.map(|n| algebra_inner(n, v).expect("kind checked"));
        let h = g.sample(|j| j.h);
        let field = g.map_nodes(|i, j| {
            let lap = laplace_beltrami(g, &f, i, j)?;
            let gh = gradient_coeffs(g, &h, i, j)?;
            Ok(DVector::from_column_slice(&[lap, gh[0], gh[1]]))
        });
        vec![field]
    })?;
    let gauss = grid.gauss_field();
    let f_v = gauss.map(|n| algebra_inner(n, v).expect("kind checked"));
    let c_t = opts.c_t.unwrap_or(2.0);

    let identity = node_map(&raw[0], |i, j, x| {
        let jet = grid.jet(i, j);
        let zeta = sp.killing_field(v, &jet.p).expect("kind checked");
        let grad = jet.tangent([x[1], x[2]]);
        let ric = sp.ricci(&jet.p, &jet.eta).unwrap_or(f64::NAN);
        x[0] + c_t * sp.form(&grad, &zeta) + (jet.b2 + ric) * f_v.get(i, j)
    });
    let lap = node_map(&raw[0], |_, _, x| x[0]);

    let all = || (0..grid.domain.nu).flat_map(|i| (0..grid.domain.nv).map(move |j| (i, j)));
    let hemisphere = hemisphere_verdict(f_v.values.iter().copied(), tol::HEMISPHERE);
    let ric_n = sp.ricci_min();
    let h_of = |i: usize, j: usize| {
        let (u, w) = grid.domain.node(i, j);
        match &s.exact_h {
            Some(h) => h(u, w),
            None => grid.jet(i, j).h,
        }
    };
    let lhs = all()
        .map(|(i, j)| 2.0 * h_of(i, j).powi(2) + ric_n)
        .fold(f64::INFINITY, f64::min);
    let threshold = threshold_verdict(lhs);

    let p_field = grid.sample(|j| {
        let ric = sp.ricci(&j.p, &j.eta).unwrap_or(f64::NAN);
        Some(ric + 2.0 * j.k_ambient + 4.0 * j.h * j.h)
    });
    let gauss_eq = grid.sample(|j| Some(j.gauss_equation_residual()));
    let ricci_id = grid.sample(|j| {
        // orthonormal tangent frame by Gram–Schmidt
        let e1 = &j.fu / sp.form(&j.fu, &j.fu).sqrt();
        let w = &j.fv - &e1 * sp.form(&j.fv, &e1);
        let e2 = &w / sp.form(&w, &w).sqrt();
        let r = |x: &DVector<f64>| sp.ricci(&j.p, x).unwrap_or(f64::NAN);
        Some((r(&j.eta) + 2.0 * j.k_ambient - r(&e1) - r(&e2)).abs())
    });
    let applicable = threshold != ThresholdVerdict::Fails
        && matches!(hemisphere, HemisphereVerdict::NonPositive | HemisphereVerdict::Vanishes);
    let defect = node_map(&raw[0], |_, _, x| (-x[0]).max(0.0));

    let mut report = opts.report("hos", s);
    report.push_grid("identity", identity, Some(opts.tol("identity", tol::RUH_VILMS)))?;
    report.push_grid(
        "gauss_equation",
        gauss_eq,
        Some(opts.tol("gauss_equation", tol::GAUSS_EQUATION)),
    )?;
    report.push_grid(
        "ricci_identity",
        ricci_id,
        Some(opts.tol("ricci_identity", tol::RICCI_IDENTITY)),
    )?;
    report.push_grid(
        "subharmonic_defect",
        defect,
        applicable.then(|| opts.tol("subharmonic_defect", tol::SUBHARMONIC)),
    )?;
    report.push_grid("f_V", f_v.map(|x| Some(*x)), None)?;
    report.push_grid("laplacian_f_V", lap, None)?;
    let p_min = p_field.values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    report.push_grid("P", p_field, None)?;

    report.push_meta("hemisphere_verdict", hemisphere.to_string());
    report.push_meta("threshold_verdict", threshold.to_string());
    report.push_meta("threshold_value", num(lhs));
    report.push_meta("Ric_N", num(ric_n));
    report.push_meta("P_min", num(p_min));
    report.push_meta("c_t_used", num(c_t));
    let (ci, cj) = grid.domain.center_node();
    report.push_meta("H", num(h_of(ci, cj)));
    report.push_meta(
        "killing_coords",
        v.coords().iter().map(|&x| num(x)).collect::<Vec<_>>(),
    );
    Ok(report)
}
