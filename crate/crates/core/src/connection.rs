//! Linear connections on a left-invariant frame: Levi-Civita via Koszul,
//! the fundamental tensor `F`, Lee forms, square norms, the phiB-connection,
//! torsion and the naturality tests.

use std::fmt;

use num_traits::Zero;

use crate::condition::ConditionSet;
use crate::lie::LieAlgebra;
use crate::scalar::{rat, Scalar, Vars};
use crate::structure::AcbmManifold;
use crate::tensor::{Tensor, Variance};

use Variance::{Lower, Upper};

/// Coefficients with `∇_{e_i} e_j = Γ^k_{ij} e_k`, stored as `[i][j][k]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Connection {
    dim: usize,
    vars: Vars,
    coeffs: Vec<Scalar>,
}

impl Connection {
    pub fn zero(dim: usize, vars: &Vars) -> Self {
        Connection { dim, vars: vars.clone(), coeffs: vec![Scalar::zero(vars); dim * dim * dim] }
    }

    pub fn from_fn<F: FnMut(usize, usize, usize) -> Scalar>(dim: usize, vars: &Vars, mut f: F) -> Self {
        let mut c = Self::zero(dim, vars);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c.coeffs[(i * dim + j) * dim + k] = f(i, j, k).lift(vars).unwrap_or_else(|e| panic!("{e}"));
                }
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    /// `∇_{e_i} e_j` as a component vector.
    pub fn apply(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.get(i, j, k).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Connection) -> Connection {
        Connection::from_fn(self.dim, &self.vars, |i, j, k| self.get(i, j, k) + other.get(i, j, k))
    }

    /// Nonzero `(i, j, k, Γ^k_{ij})`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn eval(
        &self,
        point: &std::collections::BTreeMap<String, crate::scalar::Rational>,
    ) -> Result<Connection, crate::scalar::ScalarError> {
        let coeffs = self.coeffs.iter().map(|c| c.eval(point).map(Scalar::from_rational)).collect::<Result<_, _>>()?;
        Ok(Connection { dim: self.dim, vars: Vars::empty(), coeffs })
    }
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nonzero().into_iter().map(|(i, j, k, c)| format!("G^{k}_{i}{j}={c}")).collect();
        write!(f, "Connection({})", parts.join(", "))
    }
}

/// Levi-Civita connection from the Koszul formula for left-invariant fields:
/// `2 g(∇_i e_j, e_k) = g([e_i,e_j],e_k) + g([e_k,e_i],e_j) + g([e_k,e_j],e_i)`.
pub fn levi_civita(m: &AcbmManifold) -> Connection {
    let d = m.dim();
    let l = m.algebra();
    let vars = m.vars();
    let bracket_dot = |i: usize, j: usize, k: usize| -> Scalar {
        // g([e_i, e_j], e_k)
        (0..d).fold(Scalar::zero(vars), |acc, p| {
            let g = m.metric().entry(p, k);
            if g.is_zero() {
                acc
            } else {
                acc + l.c(i, j, p).scale(g)
            }
        })
    };
    let mut lowered = vec![Scalar::zero(vars); d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let s = bracket_dot(i, j, k) + bracket_dot(k, i, j) + bracket_dot(k, j, i);
                lowered[(i * d + j) * d + k] = s.scale(&rat(1, 2));
            }
        }
    }
    Connection::from_fn(d, vars, |i, j, k| {
        (0..d).fold(Scalar::zero(vars), |acc, p| {
            let gi = m.metric().inv_entry(k, p);
            if gi.is_zero() {
                acc
            } else {
                acc + lowered[(i * d + j) * d + p].scale(gi)
            }
        })
    })
}

/// `F_{ijk} = g((∇_{e_i} phi) e_j, e_k)` from the covariant derivative of phi.
pub fn fundamental_tensor(m: &AcbmManifold, conn: &Connection) -> Tensor {
    let nabla_phi = m.phi().covariant_derivative(conn).expect("dimensions match");
    // nabla_phi[i][a][j] = (∇_i phi)^a_j; lower a and move it last.
    let d = m.dim();
    Tensor::from_fn(d, &[Lower, Lower, Lower], m.vars(), |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        (0..d).fold(m.zero(), |acc, a| {
            let g = m.metric().entry(a, k);
            if g.is_zero() {
                acc
            } else {
                acc + nabla_phi.get(&[i, a, j]).scale(g)
            }
        })
    })
}

/// `F` from brackets alone:
/// `2F_ijk = g([e_i,φe_j] − φ[e_i,e_j], e_k) + g(φ[e_k,e_i] − [φe_k,e_i], e_j)
///         + g([e_k,φe_j] − [φe_k,e_j], e_i)`.
pub fn fundamental_tensor_from_brackets(m: &AcbmManifold) -> Tensor {
    let d = m.dim();
    let l = m.algebra();
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| m.basis(i)).collect();
    let phi_e: Vec<Vec<Scalar>> = e.iter().map(|v| m.apply_phi(v)).collect();
    let sub = |u: Vec<Scalar>, v: Vec<Scalar>| -> Vec<Scalar> { u.iter().zip(&v).map(|(a, b)| a - b).collect() };
    Tensor::from_fn(d, &[Lower, Lower, Lower], m.vars(), |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let t1 = sub(l.bracket(&e[i], &phi_e[j]), m.apply_phi(&l.bracket_basis(i, j)));
        let t2 = sub(m.apply_phi(&l.bracket_basis(k, i)), l.bracket(&phi_e[k], &e[i]));
        let t3 = sub(l.bracket(&e[k], &phi_e[j]), l.bracket(&phi_e[k], &e[j]));
        (m.inner(&t1, &e[k]) + m.inner(&t2, &e[j]) + m.inner(&t3, &e[i])).scale(&rat(1, 2))
    })
}

/// Evaluate a `(0,3)` tensor on three component vectors.
pub fn eval3(t: &Tensor, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Scalar {
    let d = t.dim();
    let mut acc = Scalar::zero(t.vars());
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let xy = &x[i] * &y[j];
            for k in 0..d {
                if z[k].is_zero() {
                    continue;
                }
                let c = t.get(&[i, j, k]);
                if !c.is_zero() {
                    acc = acc + &xy * &z[k] * c;
                }
            }
        }
    }
    acc
}

/// Lee forms `θ(z) = g^{ij} F(e_i, e_j, z)`, `θ*(z) = g^{ij} F(e_i, φe_j, z)`
/// and `ω(z) = F(ξ, ξ, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeForms {
    pub theta: Tensor,
    pub theta_star: Tensor,
    pub omega: Tensor,
    /// `θ(ξ)`.
    pub theta0: Scalar,
    /// `θ*(ξ)`.
    pub theta_star0: Scalar,
}

pub fn lee_forms(m: &AcbmManifold, f: &Tensor) -> LeeForms {
    let d = m.dim();
    let vars = m.vars();
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| m.basis(i)).collect();
    let phi_e: Vec<Vec<Scalar>> = e.iter().map(|v| m.apply_phi(v)).collect();
    let xi = m.xi_vec();
    let mut theta = Vec::with_capacity(d);
    let mut theta_star = Vec::with_capacity(d);
    let mut omega = Vec::with_capacity(d);
    for z in 0..d {
        let mut t = Scalar::zero(vars);
        let mut ts = Scalar::zero(vars);
        for i in 0..d {
            for j in 0..d {
                let gi = m.metric().inv_entry(i, j);
                if gi.is_zero() {
                    continue;
                }
                t = t + f.get(&[i, j, z]).scale(gi);
                ts = ts + eval3(f, &e[i], &phi_e[j], &e[z]).scale(gi);
            }
        }
        theta.push(t);
        theta_star.push(ts);
        omega.push(eval3(f, &xi, &xi, &e[z]));
    }
    let dot = |w: &[Scalar]| w.iter().zip(&xi).fold(Scalar::zero(vars), |acc, (a, b)| acc + a * b);
    let theta0 = dot(&theta);
    let theta_star0 = dot(&theta_star);
    LeeForms {
        theta: Tensor::covector(theta, vars),
        theta_star: Tensor::covector(theta_star, vars),
        omega: Tensor::covector(omega, vars),
        theta0,
        theta_star0,
    }
}

/// Square norms of `∇φ`, `∇η` and `∇ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareNorms {
    pub nabla_phi: Scalar,
    pub nabla_eta: Scalar,
    pub nabla_xi: Scalar,
}

/// `(∇_{e_i} η) e_k` computed from the covariant derivative of `η`.
pub fn nabla_eta(m: &AcbmManifold, conn: &Connection) -> Tensor {
    m.eta().covariant_derivative(conn).expect("dimensions match")
}

/// `(∇_{e_i} η) e_k` computed as `g(∇_{e_i} ξ, e_k)`.
pub fn nabla_eta_via_xi(m: &AcbmManifold, conn: &Connection) -> Tensor {
    let nxi = m.xi().covariant_derivative(conn).expect("dimensions match");
    nxi.lower(1, m.metric()).expect("slot 1 is upper")
}

pub fn square_norms(m: &AcbmManifold, conn: &Connection) -> SquareNorms {
    let d = m.dim();
    let vars = m.vars();
    let nphi = m.phi().covariant_derivative(conn).expect("dimensions match");
    let neta = nabla_eta(m, conn);
    let nxi = m.xi().covariant_derivative(conn).expect("dimensions match");
    let gi = |i: usize, j: usize| m.metric().inv_entry(i, j).clone();
    let g = |i: usize, j: usize| m.metric().entry(i, j).clone();

    let mut n_phi = Scalar::zero(vars);
    let mut n_eta = Scalar::zero(vars);
    let mut n_xi = Scalar::zero(vars);
    for i in 0..d {
        for j in 0..d {
            let gij = gi(i, j);
            if gij.is_zero() {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    let gab = g(a, b);
                    if !gab.is_zero() {
                        n_xi = n_xi + (nxi.get(&[i, a]) * nxi.get(&[j, b])).scale(&(&gij * &gab));
                    }
                }
            }
            for k in 0..d {
                for s in 0..d {
                    let gks = gi(k, s);
                    if gks.is_zero() {
                        continue;
                    }
                    let w = &gij * &gks;
                    n_eta = n_eta + (neta.get(&[i, k]) * neta.get(&[j, s])).scale(&w);
                    // g((∇_i φ) e_k, (∇_j φ) e_s)
                    for a in 0..d {
                        let u = nphi.get(&[i, a, k]);
                        if u.is_zero() {
                            continue;
                        }
                        for b in 0..d {
                            let gab = g(a, b);
                            if !gab.is_zero() {
                                n_phi = n_phi + (u * nphi.get(&[j, b, s])).scale(&(&w * &gab));
                            }
                        }
                    }
                }
            }
        }
    }
    SquareNorms { nabla_phi: n_phi, nabla_eta: n_eta, nabla_xi: n_xi }
}

/// `Ḋ_x y = ∇_x y + ½{(∇_x φ) φ y + (∇_x η)(y) ξ} − η(y) ∇_x ξ`.
pub fn phi_b_connection(m: &AcbmManifold, conn: &Connection) -> Connection {
    let d = m.dim();
    let nphi = m.phi().covariant_derivative(conn).expect("dimensions match");
    let neta = nabla_eta(m, conn);
    let nxi = m.xi().covariant_derivative(conn).expect("dimensions match");
    let half = rat(1, 2);
    Connection::from_fn(d, m.vars(), |i, j, k| {
        // (∇_i φ)(φ e_j), component k
        let phi_phi = (0..d).fold(m.zero(), |acc, c| {
            let p = m.phi_at(c, j);
            if p.is_zero() {
                acc
            } else {
                acc + nphi.get(&[i, k, c]) * p
            }
        });
        let eta_term = neta.get(&[i, j]) * m.xi_at(k);
        conn.get(i, j, k) + (phi_phi + eta_term).scale(&half) - m.eta_at(j) * nxi.get(&[i, k])
    })
}

/// Torsion `T^k_{ij}` of `conn`, slots `[i, j, k]` with `k` upper.
pub fn torsion(conn: &Connection, l: &LieAlgebra) -> Tensor {
    let d = conn.dim();
    Tensor::from_fn(d, &[Lower, Lower, Upper], conn.vars(), |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        conn.get(i, j, k) - conn.get(j, i, k) - l.c(i, j, k)
    })
}

/// `T(x, y, z) = g(T(x, y), z)`.
pub fn torsion_lowered(m: &AcbmManifold, conn: &Connection) -> Tensor {
    torsion(conn, m.algebra()).lower(2, m.metric()).expect("slot 2 is upper")
}

/// Outcome of the naturality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Naturality {
    /// `Dφ = 0` and `Dg = 0` identically.
    pub natural: bool,
    /// Names of the structure tensors that are not parallel.
    pub violations: Vec<String>,
}

pub fn is_natural(m: &AcbmManifold, conn: &Connection) -> Naturality {
    let d = m.dim();
    let vars = m.vars();
    let g = Tensor::from_fn(d, &[Lower, Lower], vars, |i| m.g(i[0], i[1]));
    // g~ as a plain tensor so a non-constant phi is allowed here.
    let g_tilde = Tensor::from_fn(d, &[Lower, Lower], vars, |i| {
        m.inner(&m.basis(i[0]), &m.apply_phi(&m.basis(i[1]))) + m.eta_at(i[0]) * m.eta_at(i[1])
    });
    let parallel = |t: &Tensor| t.covariant_derivative(conn).expect("dimensions match").is_zero();
    let checks = [
        ("phi", parallel(m.phi())),
        ("g", parallel(&g)),
        ("xi", parallel(m.xi())),
        ("eta", parallel(m.eta())),
        ("g~", parallel(&g_tilde)),
    ];
    let violations: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| format!("D{n} != 0")).collect();
    Naturality { natural: checks[0].1 && checks[1].1, violations }
}

/// Residuals of the torsion identity characterizing the phi-canonical
/// connection, over all frame triples. Empty iff it holds identically.
pub fn phi_canonical_identity_holds(m: &AcbmManifold, conn: &Connection) -> ConditionSet {
    let d = m.dim();
    let t = torsion_lowered(m, conn);
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| m.basis(i)).collect();
    let pe: Vec<Vec<Scalar>> = e.iter().map(|v| m.apply_phi(v)).collect();
    let xi = m.xi_vec();
    let t3 = |x: &[Scalar], y: &[Scalar], z: &[Scalar]| eval3(&t, x, y, z);
    let cyc = |x: &[Scalar], j: usize, k: usize| {
        t3(x, &e[j], &e[k]) - t3(x, &e[k], &e[j]) - t3(x, &pe[j], &pe[k]) + t3(x, &pe[k], &pe[j])
    };
    let mut residuals = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = cyc(&e[i], j, k);
                let ex = m.eta_at(i);
                let rhs = ex * cyc(&xi, j, k)
                    + m.eta_at(j) * (t3(&e[i], &xi, &e[k]) - t3(&e[i], &e[k], &xi) - ex * t3(&e[k], &xi, &xi))
                    - m.eta_at(k) * (t3(&e[i], &xi, &e[j]) - t3(&e[i], &e[j], &xi) - ex * t3(&e[j], &xi, &xi));
                residuals.push(lhs - rhs);
            }
        }
    }
    ConditionSet::from_polys(residuals)
}

/// `F(x, φy, φz) + η(y) F(x, ξ, z) + η(z) F(x, y, ξ) - F(x, y, z)` for all
/// frame triples; zero for every almost contact B-metric structure.
pub fn f_property_residuals(m: &AcbmManifold, f: &Tensor) -> Vec<Scalar> {
    let d = m.dim();
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| m.basis(i)).collect();
    let pe: Vec<Vec<Scalar>> = e.iter().map(|v| m.apply_phi(v)).collect();
    let xi = m.xi_vec();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let rhs = eval3(f, &e[i], &pe[j], &pe[k])
                    + m.eta_at(j) * eval3(f, &e[i], &xi, &e[k])
                    + m.eta_at(k) * eval3(f, &e[i], &e[j], &xi);
                out.push(rhs - f.get(&[i, j, k]));
            }
        }
    }
    out
}
