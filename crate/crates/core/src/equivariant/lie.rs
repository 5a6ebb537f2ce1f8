use crate::bigraded::linalg::{solve, Row};
use crate::bigraded::{Algebra, Coeff, Polynomial};
use crate::error::{Error, Result};

/// A square matrix of exact coefficients, row-major.
pub type Matrix = Vec<Vec<Coeff>>;

/// Structure constants `f^a_{bc}` (0-based `f[a][b][c]`) with optional metric and representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub name: String,
    pub dim: usize,
    pub f: Vec<Vec<Vec<Coeff>>>,
    /// Invariant symmetric form `κ_{ab}`.
    pub metric: Option<Matrix>,
    /// Representation matrices `ρ_a` with entries `ρ^i_{aj} = rho[a][i][j]`.
    pub rho: Option<Vec<Matrix>>,
}

fn zeros3(n: usize) -> Vec<Vec<Vec<Coeff>>> {
    vec![vec![vec![Coeff::zero(); n]; n]; n]
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Coeff::zero();
                    for (k, bk) in b.iter().enumerate() {
                        if !a[i][k].is_zero() && !bk[j].is_zero() {
                            acc += &(&a[i][k] * &bk[j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_comm(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn flatten(m: &Matrix) -> Row {
    let n = m.first().map_or(0, |r| r.len());
    let mut row = Row::new();
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() {
                row.insert(i * n + j, x.clone());
            }
        }
    }
    row
}

/// Levi-Civita symbol on three 0-based indices.
pub fn epsilon3(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

impl LieAlgebraData {
    pub fn new(name: impl Into<String>, f: Vec<Vec<Vec<Coeff>>>) -> Self {
        LieAlgebraData {
            name: name.into(),
            dim: f.len(),
            f,
            metric: None,
            rho: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        let mut g = LieAlgebraData::new(format!("u1^{dim}"), zeros3(dim));
        g.metric = Some(identity(dim));
        g
    }

    /// su(2) with `f^a_{bc} = ε_{abc}`, metric δ, and its adjoint representation.
    pub fn su2() -> Self {
        let mut f = zeros3(3);
        for (a, fa) in f.iter_mut().enumerate() {
            for (b, fab) in fa.iter_mut().enumerate() {
                for (c, x) in fab.iter_mut().enumerate() {
                    *x = Coeff::int(epsilon3(a, b, c));
                }
            }
        }
        let mut g = LieAlgebraData::new("su2", f);
        g.metric = Some(identity(3));
        g.rho = Some(g.adjoint());
        g
    }

    /// Structure constants read off a matrix basis; the basis itself becomes `rho`.
    pub fn from_matrices(name: impl Into<String>, basis: Vec<Matrix>) -> Result<Self> {
        let n = basis.len();
        let cols: Vec<Row> = basis.iter().map(flatten).collect();
        let mut f = zeros3(n);
        for b in 0..n {
            for c in 0..n {
                let comm = flatten(&mat_comm(&basis[b], &basis[c]));
                let x = solve(&cols, &comm).ok_or_else(|| {
                    Error::InvalidLieAlgebra(format!("basis not closed under commutator at ({},{})", b + 1, c + 1))
                })?;
                for (a, v) in x.into_iter().enumerate() {
                    f[a][b][c] = v;
                }
            }
        }
        let mut g = LieAlgebraData::new(name, f);
        g.rho = Some(basis);
        Ok(g)
    }

    /// so(n) in the basis `E_{ij} - E_{ji}` (i < j) acting on ℝⁿ.
    pub fn so(n: usize) -> Self {
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut m = vec![vec![Coeff::zero(); n]; n];
                m[i][j] = Coeff::int(-1);
                m[j][i] = Coeff::int(1);
                basis.push(m);
            }
        }
        let mut g = LieAlgebraData::from_matrices(format!("so{n}"), basis).expect("so(n) closes");
        g.metric = Some(identity(g.dim));
        g
    }

    /// so(3) with the rotation generators `(L_a)_{bc} = -ε_{abc}`; its constants come out as ε.
    pub fn so3() -> Self {
        let basis = (0..3)
            .map(|a| {
                (0..3)
                    .map(|b| (0..3).map(|c| Coeff::int(-epsilon3(a, b, c))).collect())
                    .collect()
            })
            .collect();
        let mut g = LieAlgebraData::from_matrices("so3", basis).expect("so(3) closes");
        g.metric = Some(identity(3));
        g
    }

    pub fn fc(&self, a: usize, b: usize, c: usize) -> &Coeff {
        &self.f[a][b][c]
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().flatten().flatten().all(Coeff::is_zero)
    }

    /// `(ad_a)^b_c = f^b_{ac}`.
    pub fn adjoint(&self) -> Vec<Matrix> {
        let n = self.dim;
        (0..n)
            .map(|a| (0..n).map(|b| (0..n).map(|c| self.f[b][a][c].clone()).collect()).collect())
            .collect()
    }

    pub fn with_rho(mut self, rho: Vec<Matrix>) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn rep_dim(&self) -> usize {
        self.rho.as_ref().and_then(|r| r.first()).map_or(0, |m| m.len())
    }

    pub fn check_antisymmetry(&self) -> std::result::Result<(), String> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                for c in 0..self.dim {
                    if self.f[a][b][c] != -&self.f[a][c][b] {
                        return Err(format!("f[{},{},{}] not antisymmetric", a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// `f^e_{ab} f^d_{ec} + f^e_{bc} f^d_{ea} + f^e_{ca} f^d_{eb} = 0`.
    pub fn check_jacobi(&self) -> std::result::Result<(), String> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = Coeff::zero();
                        for e in 0..n {
                            s += &(&self.f[e][a][b] * &self.f[d][e][c]);
                            s += &(&self.f[e][b][c] * &self.f[d][e][a]);
                            s += &(&self.f[e][c][a] * &self.f[d][e][b]);
                        }
                        if !s.is_zero() {
                            return Err(format!(
                                "Jacobi fails at (a,b,c,d)=({},{},{},{}): {}",
                                a + 1,
                                b + 1,
                                c + 1,
                                d + 1,
                                s
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_antisymmetry().map_err(Error::InvalidLieAlgebra)?;
        self.check_jacobi().map_err(Error::InvalidLieAlgebra)
    }

    /// `ρ_a ρ_b - ρ_b ρ_a = f^c_{ab} ρ_c`.
    pub fn check_rho(&self) -> Result<()> {
        let rho = self
            .rho
            .as_ref()
            .ok_or_else(|| Error::InvalidRepresentation("no representation supplied".into()))?;
        if rho.len() != self.dim {
            return Err(Error::InvalidRepresentation(format!("{} matrices for dimension {}", rho.len(), self.dim)));
        }
        let m = self.rep_dim();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let lhs = mat_comm(&rho[a], &rho[b]);
                for i in 0..m {
                    for j in 0..m {
                        let mut rhs = Coeff::zero();
                        for (c, rc) in rho.iter().enumerate() {
                            rhs += &(&self.f[c][a][b] * &rc[i][j]);
                        }
                        if lhs[i][j] != rhs {
                            return Err(Error::InvalidRepresentation(format!(
                                "[rho_{}, rho_{}] differs from f^c rho_c at entry ({},{})",
                                a + 1,
                                b + 1,
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `κ([x_c, y], z) + κ(y, [x_c, z]) = 0`.
    pub fn check_metric(&self) -> Result<()> {
        let k = self.metric.as_ref().ok_or(Error::MissingMetric)?;
        let n = self.dim;
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = Coeff::zero();
                    for d in 0..n {
                        s += &(&self.f[d][c][a] * &k[d][b]);
                        s += &(&self.f[d][c][b] * &k[a][d]);
                    }
                    if !s.is_zero() {
                        return Err(Error::InvalidLieAlgebra(format!("metric not ad-invariant at ({},{},{})", c + 1, a + 1, b + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[X, Y]^a = f^a_{bc} X^b Y^c` for Lie-valued polynomials.
    pub fn bracket(&self, alg: &Algebra, x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
        let n = self.dim;
        let mut out = vec![Polynomial::zero(); n];
        for b in 0..n {
            if x[b].is_zero() {
                continue;
            }
            for c in 0..n {
                if y[c].is_zero() {
                    continue;
                }
                let prod = alg.mul(&x[b], &y[c]);
                if prod.is_zero() {
                    continue;
                }
                for (a, slot) in out.iter_mut().enumerate() {
                    let k = &self.f[a][b][c];
                    if !k.is_zero() {
                        *slot += prod.scale(k);
                    }
                }
            }
        }
        out
    }

    /// `Tr(XY) = κ_{ab} X^a Y^b`.
    pub fn trace(&self, alg: &Algebra, x: &[Polynomial], y: &[Polynomial]) -> Result<Polynomial> {
        let k = self.metric.as_ref().ok_or(Error::MissingMetric)?;
        let mut out = Polynomial::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                if !k[a][b].is_zero() {
                    out += alg.mul(&x[a], &y[b]).scale(&k[a][b]);
                }
            }
        }
        Ok(out)
    }
}

/// Componentwise sum of Lie-valued polynomials.
pub fn vadd(x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vsub(x: &[Polynomial], y: &[Polynomial]) -> Vec<Polynomial> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vscale(x: &[Polynomial], c: &Coeff) -> Vec<Polynomial> {
    x.iter().map(|a| a.scale(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_matches_epsilon() {
        let so3 = LieAlgebraData::so3();
        assert_eq!(so3.f, LieAlgebraData::su2().f);
        so3.check_rho().unwrap();
        so3.validate().unwrap();
    }

    #[test]
    fn su2_adjoint_is_a_representation() {
        let g = LieAlgebraData::su2();
        g.check_rho().unwrap();
        g.check_metric().unwrap();
    }

    #[test]
    fn broken_jacobi_detected() {
        let mut g = LieAlgebraData::su2();
        g.f[0][0][1] = Coeff::int(1);
        g.f[0][1][0] = Coeff::int(-1);
        assert!(g.check_jacobi().is_err());
        assert!(g.validate().is_err());
    }

    #[test]
    fn so4_is_consistent() {
        let g = LieAlgebraData::so(4);
        assert_eq!(g.dim, 6);
        g.validate().unwrap();
        g.check_rho().unwrap();
    }
}
