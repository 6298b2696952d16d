use nalgebra::DVector;

use super::{evaluate, node_map, tol, CheckOptions};
use crate::algebra::algebra_inner;
use crate::calculus::dgauss;
use crate::error::Result;
use crate::gaussmap::gamma_unchecked;
use crate::report::CheckReport;
use crate::surface::ParamSurface;

/// D(X,Y) = ⟨d𝒩(X), Γ(Y)⟩ + ⟨AX, Y⟩ over X, Y ∈ {F_u, F_v}.
///
/// The same computation runs on every space; on the products it is the
/// statement Q = −b for the tensor behind the quadratic-form check.
pub fn duality_check(s: &ParamSurface, opts: &CheckOptions) -> Result<CheckReport> {
    let sp = s.space;
    let (_, raw) = evaluate(s, opts, |g| {
        let gauss = g.gauss_field();
        let field = g.map_nodes(|i, j| {
            let jet = g.jet(i, j);
            let dn = [dgauss(g, &gauss, i, j, [1.0, 0.0])?, dgauss(g, &gauss, i, j, [0.0, 1.0])?];
            let gf = [
                gamma_unchecked(sp, &jet.p, &jet.fu),
                gamma_unchecked(sp, &jet.p, &jet.fv),
            ];
            let mut d = Vec::with_capacity(4);
            for a in 0..2 {
                for b in 0..2 {
                    d.push(algebra_inner(&dn[a], &gf[b])? + jet.b[(a, b)]);
                }
            }
            Ok(DVector::from_vec(d))
        });
        vec![field]
    })?;
    let worst = node_map(&raw[0], |_, _, d| d.amax());
    let mut report = opts.report("duality", s);
    report.push_grid("D", worst, Some(opts.tol("D", tol::DUALITY)))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{catalog, Params};

    #[test]
    fn great_sphere_passes() {
        let s = catalog("great-sphere-s3", &Params::new()).unwrap();
        let opts = CheckOptions {
            grid: Some((24, 24)),
            ..Default::default()
        };
        let r = duality_check(&s, &opts).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn equidistant_passes_at_default_tolerance() {
        let s = catalog("equidistant-h3", &Params::new()).unwrap();
        let opts = CheckOptions {
            grid: Some((64, 64)),
            ..Default::default()
        };
        let r = duality_check(&s, &opts).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
}
