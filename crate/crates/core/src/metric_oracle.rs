//! Metric-side curvature computed directly from `g = eᵀηe` by finite
//! differences: Christoffel symbols, Riemann, Ricci, Schouten and Weyl
//! tensors. Shares no code with the jet-based Cartan construction.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::field::Point;
use crate::frame::Vierbein;
use crate::spin_iso::ETA;

/// Default finite-difference step.
pub const STEP: f64 = 1e-2;

type T3 = [[[f64; 4]; 4]; 4];
type T4 = [[[[f64; 4]; 4]; 4]; 4];

/// Curvature data at one point, in coordinate and frame components.
#[derive(Clone, Debug)]
pub struct MetricCurvature {
    pub e: Matrix4<f64>,
    pub g: Matrix4<f64>,
    /// `Γ^ρ_{μν}` indexed `[ρ][μ][ν]`.
    pub christoffel: T3,
    /// `R^ρ_{σμν}` indexed `[ρ][σ][μ][ν]`.
    pub riemann: T4,
    /// Coordinate Ricci `R_{σν}`.
    pub ricci: Matrix4<f64>,
    pub scalar: f64,
    /// Coordinate Schouten `P_{μν} = −½(R_{μν} − (R/6)g_{μν})`.
    pub schouten: Matrix4<f64>,
    /// Frame Schouten `P_{ab}`.
    pub schouten_frame: Matrix4<f64>,
    /// Frame Weyl tensor with lowered first index, `W_{abcd}`.
    pub weyl_frame: T4,
}

fn vierbein_value(v: &Vierbein, p: &Point) -> Result<Matrix4<f64>> {
    let mut m = Matrix4::zeros();
    for a in 0..4 {
        for mu in 0..4 {
            m[(a, mu)] = v.e[a][mu].jet(p, 0)?.value().re;
        }
    }
    Ok(m)
}

fn metric_at(v: &Vierbein, p: &Point) -> Result<Matrix4<f64>> {
    let e = vierbein_value(v, p)?;
    let eta = Matrix4::from_diagonal(&nalgebra::Vector4::from(ETA));
    Ok(e.transpose() * eta * e)
}

fn shifted(p: &Point, mu: usize, h: f64) -> Point {
    let mut q = *p;
    q[mu] += h;
    q
}

const W1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// Fourth-order central first derivative `∂_μ F`.
fn d1<F>(f: &F, p: &Point, mu: usize, h: f64) -> Result<Matrix4<f64>>
where
    F: Fn(&Point) -> Result<Matrix4<f64>>,
{
    let mut acc = Matrix4::zeros();
    for (s, w) in W1 {
        acc += f(&shifted(p, mu, s * h))? * w;
    }
    Ok(acc / (12.0 * h))
}

/// Fourth-order central second derivative `∂_μ∂_ν F`.
fn d2<F>(f: &F, p: &Point, mu: usize, nu: usize, h: f64) -> Result<Matrix4<f64>>
where
    F: Fn(&Point) -> Result<Matrix4<f64>>,
{
    if mu == nu {
        let w = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];
        let mut acc = Matrix4::zeros();
        for (s, c) in w {
            acc += f(&shifted(p, mu, s * h))? * c;
        }
        Ok(acc / (12.0 * h * h))
    } else {
        let inner = |q: &Point| d1(f, q, nu, h);
        d1(&inner, p, mu, h)
    }
}

/// Curvature of the metric of `v` at `p` with step `h`.
pub fn metric_curvature(v: &Vierbein, p: &Point, h: f64) -> Result<MetricCurvature> {
    let gf = |q: &Point| metric_at(v, q);
    let e = vierbein_value(v, p)?;
    let g = gf(p)?;
    let ginv = g.try_inverse().ok_or(Error::DegenerateFrame)?;
    let einv = e.try_inverse().ok_or(Error::DegenerateFrame)?;
    let dg: Vec<Matrix4<f64>> = (0..4).map(|l| d1(&gf, p, l, h)).collect::<Result<_>>()?;
    let mut ddg = vec![vec![Matrix4::zeros(); 4]; 4];
    for l in 0..4 {
        for m in l..4 {
            let v = d2(&gf, p, l, m, h)?;
            ddg[l][m] = v;
            ddg[m][l] = v;
        }
    }
    // Γ_{σμν} and its derivatives with all indices down.
    let low = |s: usize, m: usize, n: usize| 0.5 * (dg[m][(s, n)] + dg[n][(s, m)] - dg[s][(m, n)]);
    let dlow = |l: usize, s: usize, m: usize, n: usize| {
        0.5 * (ddg[l][m][(s, n)] + ddg[l][n][(s, m)] - ddg[l][s][(m, n)])
    };
    let mut gam = [[[0.0; 4]; 4]; 4];
    for r in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                gam[r][m][n] = (0..4).map(|s| ginv[(r, s)] * low(s, m, n)).sum();
            }
        }
    }
    // ∂_λ Γ^ρ_{μν} = ∂_λ g^{ρσ} Γ_{σμν} + g^{ρσ} ∂_λ Γ_{σμν}
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for l in 0..4 {
        let dginv = -ginv * dg[l] * ginv;
        for r in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    dgam[l][r][m][n] = (0..4)
                        .map(|s| dginv[(r, s)] * low(s, m, n) + ginv[(r, s)] * dlow(l, s, m, n))
                        .sum();
                }
            }
        }
    }
    let mut riem = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut v = dgam[m][r][n][s] - dgam[n][r][m][s];
                    for l in 0..4 {
                        v += gam[r][m][l] * gam[l][n][s] - gam[r][n][l] * gam[l][m][s];
                    }
                    riem[r][s][m][n] = v;
                }
            }
        }
    }
    let ricci = Matrix4::from_fn(|s, n| (0..4).map(|r| riem[r][s][r][n]).sum());
    let scalar = (ginv.component_mul(&ricci)).sum();
    let schouten = (ricci - g * (scalar / 6.0)) * -0.5;
    let schouten_frame = einv.transpose() * schouten * einv;
    // Frame Riemann with lowered first index.
    let mut rf = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = 0.0;
                    for r in 0..4 {
                        for s in 0..4 {
                            for m in 0..4 {
                                for n in 0..4 {
                                    v += e[(a, r)] * riem[r][s][m][n] * einv[(s, b)] * einv[(m, c)] * einv[(n, d)];
                                }
                            }
                        }
                    }
                    rf[a][b][c][d] = ETA[a] * v;
                }
            }
        }
    }
    let eta = |a: usize, b: usize| if a == b { ETA[a] } else { 0.0 };
    let p_ = schouten_frame;
    let mut weyl = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    weyl[a][b][c][d] = rf[a][b][c][d] + eta(a, c) * p_[(b, d)] - eta(a, d) * p_[(b, c)]
                        + eta(b, d) * p_[(a, c)]
                        - eta(b, c) * p_[(a, d)];
                }
            }
        }
    }
    Ok(MetricCurvature {
        e,
        g,
        christoffel: gam,
        riemann: riem,
        ricci,
        scalar,
        schouten,
        schouten_frame,
        weyl_frame: weyl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;

    #[test]
    fn flat_metric_is_flat() {
        let c = metric_curvature(&Vierbein::identity(), &[0.1, 0.2, 0.3, 0.4], STEP).unwrap();
        assert!(c.schouten.amax() < 1e-12);
    }

    #[test]
    fn conformally_flat_scalar_curvature() {
        // g = z²η in 4D: R = −6 z⁻³ □_η z.
        let lam = 0.3;
        let z = ScalarField::coordinate(0).scale(lam).map(|j| Ok(j.exp()));
        let v = Vierbein::identity().rescaled(&z);
        let p = [0.2, 0.0, 0.0, 0.0];
        let c = metric_curvature(&v, &p, STEP).unwrap();
        let zv = (lam * p[0]).exp();
        let box_z = lam * lam * zv;
        assert!((c.scalar - (-6.0 * box_z / zv.powi(3))).abs() < 1e-8);
    }
}
