use nalgebra::{DVector, Vector2};

use super::{element, evaluate, lsq_slope, node_map, tol, CheckOptions};
use crate::algebra::algebra_inner;
use crate::calculus::{gradient_coeffs, laplace_beltrami, GridField};
use crate::error::Result;
use crate::gaussmap::gamma_unchecked;
use crate::report::{num, CheckReport};
use crate::surface::ParamSurface;

/// Residual of Δ𝒩 + (B2 + s·Ric(η))𝒩 + c_t·Γ(grad H) = 0.
///
/// Fields: `normal` (the part of the residual off Γ(TM), independent of
/// c_t), `residual` (full, gated only for CMC surfaces or a pinned c_t) and
/// `tangential` (|Γ-tangential part of Δ𝒩|, informational). The audit
/// carries the fitted s and, when grad H does not vanish, the fitted c_t.
pub fn ruh_vilms_residual(s: &ParamSurface, opts: &CheckOptions) -> Result<CheckReport> {
    let kind = s.space.algebra_kind();
    let dim = kind.dim();
    let (grid, raw) = evaluate(s, opts, |g| {
        let gauss = g.gauss_field();
        let h = g.sample(|j| j.h);
        let lap = g.map_nodes(|i, j| laplace_beltrami(g, &gauss, i, j));
        let gh = g.map_nodes(|i, j| gradient_coeffs(g, &h, i, j));
        let field = GridField::from_fn(g.domain.nu, g.domain.nv, g.boundary(), |i, j| {
            let l = lap.get(i, j).as_ref()?;
            let gh = gh.get(i, j).as_ref()?;
            let mut c = l.coords().as_slice().to_vec();
            c.extend_from_slice(gh);
            Some(DVector::from_vec(c))
        });
        vec![field]
    })?;
    let sp = s.space;
    let gauss = grid.gauss_field();

    struct Node {
        lap_n: f64,
        normal_part: crate::algebra::AlgebraElement,
        tang: Vector2<f64>,
        grad: Vector2<f64>,
        ric: f64,
    }
    let nodes = node_map(&raw[0], |i, j, x| {
        let jet = grid.jet(i, j);
        let n = gauss.get(i, j);
        let lap = element(kind, &x.as_slice()[..dim]);
        let gf = [
            gamma_unchecked(sp, &jet.p, &jet.fu),
            gamma_unchecked(sp, &jet.p, &jet.fv),
        ];
        let t = Vector2::new(
            algebra_inner(&lap, &gf[0]).unwrap(),
            algebra_inner(&lap, &gf[1]).unwrap(),
        );
        let tang = jet.g_inv() * t;
        let tang_el = &(&gf[0] * tang[0]) + &(&gf[1] * tang[1]);
        Node {
            lap_n: algebra_inner(&lap, n).unwrap(),
            normal_part: &lap - &tang_el,
            tang,
            grad: Vector2::new(x[dim], x[dim + 1]),
            ric: sp.ricci(&jet.p, &jet.eta).unwrap_or(f64::NAN),
        }
    });

    let each = || {
        (0..grid.domain.nu)
            .flat_map(move |i| (0..grid.domain.nv).map(move |j| (i, j)))
            .filter_map(|(i, j)| nodes.get(i, j).as_ref().map(|n| (i, j, n)))
    };
    let s_fit = lsq_slope(each().map(|(i, j, n)| (n.ric, -(n.lap_n + grid.jet(i, j).b2))));
    let (mut tg, mut gg, mut grad_max) = (0.0, 0.0, 0.0f64);
    for (i, j, n) in each() {
        let g = grid.jet(i, j).g;
        tg += n.tang.dot(&(g * n.grad));
        gg += n.grad.dot(&(g * n.grad));
        grad_max = grad_max.max(n.grad.dot(&(g * n.grad)).sqrt());
    }
    let non_cmc = grad_max > 1e-6;
    let c_t_fit = (non_cmc && gg > 0.0).then(|| -tg / gg);
    let s_used = opts.s.unwrap_or(1.0);
    let c_t_used = opts.c_t.or(c_t_fit).unwrap_or(2.0);

    let normal = node_map(&raw[0], |i, j, _| {
        let n = nodes.get(i, j).as_ref().unwrap();
        let jet = grid.jet(i, j);
        let r = &n.normal_part + &(gauss.get(i, j) * (jet.b2 + s_used * n.ric));
        r.coord_norm()
    });
    let residual = node_map(&raw[0], |i, j, _| {
        let n = nodes.get(i, j).as_ref().unwrap();
        let jet = grid.jet(i, j);
        let gf_u = gamma_unchecked(sp, &jet.p, &jet.fu);
        let gf_v = gamma_unchecked(sp, &jet.p, &jet.fv);
        let tang = &(&gf_u * n.tang[0]) + &(&gf_v * n.tang[1]);
        let grad = &(&gf_u * n.grad[0]) + &(&gf_v * n.grad[1]);
        let r = &(&(&n.normal_part + &tang) + &(gauss.get(i, j) * (jet.b2 + s_used * n.ric)))
            + &(&grad * c_t_used);
        r.coord_norm()
    });
    let tangential = node_map(&raw[0], |i, j, _| {
        let n = nodes.get(i, j).as_ref().unwrap();
        n.tang.dot(&(grid.jet(i, j).g * n.tang)).sqrt()
    });

    let mut report = opts.report("ruh-vilms", s);
    let t = opts.tol("normal", tol::RUH_VILMS);
    report.push_grid("normal", normal, Some(t))?;
    let gate = s.is_cmc || opts.c_t.is_some();
    report.push_grid(
        "residual",
        residual,
        gate.then(|| opts.tol("residual", tol::RUH_VILMS)),
    )?;
    report.push_grid("tangential", tangential, None)?;
    report.audit.s_fit = s_fit;
    report.audit.c_t_fit = c_t_fit;

    let (ci, cj) = grid.domain.center_node();
    let jet = grid.jet(ci, cj);
    report.push_meta("H", num(jet.h));
    report.push_meta("B2", num(jet.b2));
    report.push_meta("Ric_eta", num(sp.ricci(&jet.p, &jet.eta)?));
    report.push_meta("s_used", num(s_used));
    report.push_meta("c_t_used", num(c_t_used));
    report.push_meta("grad_H_max", num(grad_max));
    report.push_meta("cmc", s.is_cmc);
    Ok(report)
}
