//! Shared test support: random valid structures and independent oracles.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use acbm_core::family::{build_family, FamilySpec};
use acbm_core::lie::LieAlgebra;
use acbm_core::linalg::{det, Matrix};
use acbm_core::scalar::{int, rat, Rational, Scalar, Vars};
use acbm_core::structure::{validate_structure, AcbmManifold};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

pub fn point(a: &Rational, b: &Rational) -> BTreeMap<String, Rational> {
    [("a".to_string(), a.clone()), ("b".to_string(), b.clone())].into_iter().collect()
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn eps(i: usize, j: usize, l: usize) -> i64 {
    match (i, j, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Structure constants of a random 3D Lie algebra,
/// `[e_i, e_j] = eps_{ijl} n^{lk} e_k + v_j e_i - v_i e_j` with `n` symmetric
/// and `n v = 0`, which is exactly the Jacobi condition.
pub fn random_algebra_constants(v: [i64; 3], s: [i64; 6]) -> [[[Rational; 3]; 3]; 3] {
    let v: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
    let s = [[s[0], s[1], s[2]], [s[1], s[3], s[4]], [s[2], s[4], s[5]]];
    let vv: Rational = v.iter().map(|x| x * x).sum();
    // projector orthogonal to v
    let p: Vec<Vec<Rational>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let id = if i == j { int(1) } else { int(0) };
                    if vv.is_zero() {
                        id
                    } else {
                        id - &v[i] * &v[j] / &vv
                    }
                })
                .collect()
        })
        .collect();
    let mut n = vec![vec![int(0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    n[i][l] += &p[i][j] * int(s[j][k]) * &p[k][l];
                }
            }
        }
    }
    let mut c: [[[Rational; 3]; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut x = int(0);
                for l in 0..3 {
                    x += int(eps(i, j, l)) * &n[l][k];
                }
                if k == i {
                    x += &v[j];
                }
                if k == j {
                    x -= &v[i];
                }
                c[i][j][k] = x;
            }
        }
    }
    c
}

/// The family's phi, xi, eta and g on a random 3D algebra, viewed in a
/// random rational frame. Always a valid almost contact B-metric structure.
pub fn generic_manifold(v: [i64; 3], s: [i64; 6], frame: [i64; 9]) -> Option<AcbmManifold> {
    let c = random_algebra_constants(v, s);
    let vars = Vars::empty();
    let mut l = LieAlgebra::abelian(3, &vars);
    for i in 0..3 {
        for j in i + 1..3 {
            for k in 0..3 {
                l.set_bracket(i, j, k, Scalar::from_rational(c[i][j][k].clone())).unwrap();
            }
        }
    }
    assert!(l.check_jacobi().holds_identically(), "generator must satisfy Jacobi");
    let base = build_family(&FamilySpec::numeric(int(0), int(0)));
    let m = AcbmManifold::new(
        l,
        (0..3).map(|i| (0..3).map(|j| base.phi_at(i, j).clone()).collect()).collect(),
        (0..3).map(|i| base.xi_at(i).clone()).collect(),
        (0..3).map(|i| base.eta_at(i).clone()).collect(),
        base.metric().clone(),
    )
    .unwrap();
    let a: Matrix = (0..3).map(|i| (0..3).map(|j| int(frame[3 * i + j])).collect()).collect();
    if det(&a).is_zero() {
        return None;
    }
    let out = m.change_frame(&a).unwrap();
    assert!(validate_structure(&out).is_empty());
    Some(out)
}

pub fn random_generic<R: Rng>(rng: &mut R) -> AcbmManifold {
    loop {
        let v = [(); 3].map(|_| rng.gen_range(-2..=2));
        let s = [(); 6].map(|_| rng.gen_range(-2..=2));
        let f = [(); 9].map(|_| rng.gen_range(-2..=2));
        if let Some(m) = generic_manifold(v, s, f) {
            return m;
        }
    }
}

pub fn constant(s: &Scalar) -> Rational {
    s.as_constant().expect("constant scalar")
}

/// Family quantities at a rational point, computed from the definitions
/// with nested loops over plain rationals.
pub struct Oracle {
    /// `gamma[i][j][k]`: coefficient of `e_k` in `∇_{e_i} e_j`.
    pub gamma: [[[Rational; 3]; 3]; 3],
    /// `f[i][j][k] = g((∇_{e_i} φ) e_j, e_k)`.
    pub f: [[[Rational; 3]; 3]; 3],
    /// `r[i][j][k][l] = g(R(e_i, e_j) e_k, e_l)`.
    pub r: [[[[Rational; 3]; 3]; 3]; 3],
    pub rho: [[Rational; 3]; 3],
    pub rho_star: [[Rational; 3]; 3],
    pub tau: Rational,
    pub tau_star: Rational,
    pub norm_phi: Rational,
    pub norm_eta: Rational,
    pub norm_xi: Rational,
}

impl Oracle {
    pub fn family(a: &Rational, b: &Rational) -> Oracle {
        let z = || int(0);
        let g = [int(1), int(1), int(-1)];
        // phi e_1 = e_2, phi e_2 = -e_1: phi[i][j] is the e_i coefficient of phi e_j
        let mut phi: [[Rational; 3]; 3] = Default::default();
        phi[2][1] = int(1);
        phi[1][2] = int(-1);
        let mut c: [[[Rational; 3]; 3]; 3] = Default::default();
        let mut set = |i: usize, j: usize, k: usize, x: Rational| {
            c[j][i][k] = -x.clone();
            c[i][j][k] = x;
        };
        set(0, 1, 1, -b.clone());
        set(0, 1, 2, -a.clone());
        set(0, 2, 1, a.clone());
        set(0, 2, 2, -b.clone());

        // 2 g(∇_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y), g diagonal
        let cl = |i: usize, j: usize, l: usize| &c[i][j][l] * &g[l];
        let mut gamma: [[[Rational; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    gamma[i][j][k] = (cl(i, j, k) - cl(j, k, i) + cl(k, i, j)) / int(2) / &g[k];
                }
            }
        }

        let mut f: [[[Rational; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                // (∇_i φ) e_j = ∇_i (φ e_j) - φ (∇_i e_j)
                let mut w = vec![z(); 3];
                for p in 0..3 {
                    for k in 0..3 {
                        w[k] += &phi[p][j] * &gamma[i][p][k];
                        w[k] -= &gamma[i][j][p] * &phi[k][p];
                    }
                }
                for k in 0..3 {
                    f[i][j][k] = &w[k] * &g[k];
                }
            }
        }

        let mut r: [[[[Rational; 3]; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    // R(e_i, e_j) e_k = ∇_i ∇_j e_k - ∇_j ∇_i e_k - ∇_{[e_i, e_j]} e_k
                    let mut w = vec![z(); 3];
                    for p in 0..3 {
                        for l in 0..3 {
                            w[l] += &gamma[j][k][p] * &gamma[i][p][l];
                            w[l] -= &gamma[i][k][p] * &gamma[j][p][l];
                            w[l] -= &c[i][j][p] * &gamma[p][k][l];
                        }
                    }
                    for l in 0..3 {
                        r[i][j][k][l] = &w[l] * &g[l];
                    }
                }
            }
        }

        let mut rho: [[Rational; 3]; 3] = Default::default();
        let mut rho_star: [[Rational; 3]; 3] = Default::default();
        for x in 0..3 {
            for y in 0..3 {
                for i in 0..3 {
                    // g^{ii} = g_{ii} for a diagonal ±1 metric
                    rho[x][y] += &g[i] * &r[i][x][y][i];
                    for p in 0..3 {
                        rho_star[x][y] += &g[i] * &phi[p][i] * &r[i][x][y][p];
                    }
                }
            }
        }
        let tau = (0..3).map(|i| &g[i] * &rho[i][i]).sum();
        let tau_star = (0..3).map(|i| &g[i] * &rho_star[i][i]).sum();

        let mut norm_phi = z();
        let mut norm_eta = z();
        let mut norm_xi = z();
        for i in 0..3 {
            for k in 0..3 {
                // (∇_i η)(e_k) = -η(∇_i e_k); (∇_i ξ) = ∇_i e_0
                let neta = -gamma[i][k][0].clone();
                norm_eta += &g[i] * &g[k] * &neta * &neta;
                norm_xi += &g[i] * &g[k] * &gamma[i][0][k] * &gamma[i][0][k];
                for s in 0..3 {
                    norm_phi += &g[i] * &g[k] * &g[s] * &f[i][k][s] * &f[i][k][s];
                }
            }
        }
        Oracle { gamma, f, r, rho, rho_star, tau, tau_star, norm_phi, norm_eta, norm_xi }
    }
}

/// Bianchi type computed in floating point from the structure constants by
/// matching `ad_x` on the derived algebra against canonical forms.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleType {
    I,
    V,
    VII0,
    VIIh(f64),
    Other,
}

pub fn bianchi_oracle(c: &[[[f64; 3]; 3]; 3]) -> OracleType {
    let tol = 1e-12;
    let nonzero: Vec<[f64; 3]> =
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i < j).map(|(i, j)| c[i][j]).collect();
    if nonzero.iter().all(|v| v.iter().all(|x| x.abs() < tol)) {
        return OracleType::I;
    }
    // derived algebra must be span(e1, e2) and abelian for the cases below
    let derived_in_plane = nonzero.iter().all(|v| v[0].abs() < tol);
    let abelian = c[1][2].iter().all(|x| x.abs() < tol);
    if !derived_in_plane || !abelian {
        return OracleType::Other;
    }
    // A = ad_{e0} on span(e1, e2), columns are images
    let a = [[c[0][1][1], c[0][2][1]], [c[0][1][2], c[0][2][2]]];
    let tr = a[0][0] + a[1][1];
    let dt = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (a[0][1]).abs() < tol && (a[1][0]).abs() < tol && (a[0][0] - a[1][1]).abs() < tol {
        return OracleType::V;
    }
    let disc = tr * tr - 4.0 * dt;
    if disc >= 0.0 || dt <= 0.0 {
        return OracleType::Other;
    }
    // eigenvalues re ± i im of A / mu, with mu = sqrt(det)
    let mu = dt.sqrt();
    let re = (tr / 2.0 / mu).abs();
    let im = (-disc).sqrt() / 2.0 / mu;
    let target = im.atan2(re);
    // [[0, -1], [1, h]] has eigenvalues h/2 ± i sqrt(1 - h^2/4)
    let angle = |h: f64| (1.0 - h * h / 4.0).max(0.0).sqrt().atan2(h / 2.0);
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if angle(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = (lo + hi) / 2.0;
    // confirm the match: with B = ±A/mu, f1 = e1, f2 = B f1, require B f2 = -f1 + h f2
    let sign = if tr < 0.0 { -1.0 } else { 1.0 };
    let bm =
        |v: [f64; 2]| [sign * (a[0][0] * v[0] + a[0][1] * v[1]) / mu, sign * (a[1][0] * v[0] + a[1][1] * v[1]) / mu];
    let f1 = [1.0, 0.0];
    let f2 = bm(f1);
    let lhs = bm(f2);
    let rhs = [-f1[0] + h * f2[0], -f1[1] + h * f2[1]];
    assert!((lhs[0] - rhs[0]).abs() < 1e-9 && (lhs[1] - rhs[1]).abs() < 1e-9, "canonical form mismatch");
    if h < 1e-12 {
        OracleType::VII0
    } else {
        OracleType::VIIh(h)
    }
}

pub fn family_constants_f64(a: &Rational, b: &Rational) -> [[[f64; 3]; 3]; 3] {
    let (a, b) = (a.to_f64().unwrap(), b.to_f64().unwrap());
    let mut c = [[[0.0; 3]; 3]; 3];
    let mut set = |i: usize, j: usize, k: usize, x: f64| {
        c[i][j][k] = x;
        c[j][i][k] = -x;
    };
    set(0, 1, 1, -b);
    set(0, 1, 2, -a);
    set(0, 2, 1, a);
    set(0, 2, 2, -b);
    c
}
