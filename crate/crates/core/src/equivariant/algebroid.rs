use crate::bigraded::{Algebra, Bidegree, Coeff, Convention, Derivation, GenId, Generator, Polynomial};
use crate::error::{Error, Result};
use crate::report::Report;

/// `E[1]` over formal even coordinates `x^μ` with `Q = -½ f^a_bc θ^b θ^c ∂_θa + ρ^μ_a θ^a ∂_xμ`.
#[derive(Debug, Clone)]
pub struct LieAlgebroid {
    pub alg: Algebra,
    pub x: Vec<GenId>,
    pub theta: Vec<GenId>,
    pub q: Derivation,
    pub report: Report,
}

/// Builds `Q` from constant data `f[a][b][c] = f^a_bc` and `rho[μ][a] = ρ^μ_a` and reports whether `Q² = 0`.
pub fn lie_algebroid_q(f: &[Vec<Vec<Coeff>>], rho: &[Vec<Coeff>]) -> Result<LieAlgebroid> {
    let rank = f.len();
    if f.iter().any(|fa| fa.len() != rank || fa.iter().any(|r| r.len() != rank)) {
        return Err(Error::InvalidLieAlgebra(format!("structure constants must be {rank}x{rank}x{rank}")));
    }
    if rho.iter().any(|r| r.len() != rank) {
        return Err(Error::InvalidRepresentation(format!("anchor rows must have length {rank}")));
    }
    let mut alg = Algebra::new(Convention::First);
    let x = (0..rho.len())
        .map(|m| alg.add(Generator::indexed("x", vec![m as i64 + 1], Bidegree::ZERO)))
        .collect::<Result<Vec<_>>>()?;
    let theta = (0..rank)
        .map(|a| alg.add(Generator::indexed("theta", vec![a as i64 + 1], Bidegree::new(0, 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut q = Derivation::new("Q", Bidegree::new(0, 1), Convention::First);
    for a in 0..rank {
        let mut img = Polynomial::zero();
        for b in 0..rank {
            for c in 0..rank {
                if !f[a][b][c].is_zero() {
                    img -= &alg.mul(&alg.var(theta[b]), &alg.var(theta[c])).scale(&(&f[a][b][c] * &Coeff::ratio(1, 2)));
                }
            }
        }
        q.set(theta[a], img);
    }
    for (m, row) in rho.iter().enumerate() {
        let img: Polynomial = row
            .iter()
            .enumerate()
            .filter(|(_, k)| !k.is_zero())
            .map(|(a, k)| alg.var(theta[a]).scale(k))
            .sum();
        q.set(x[m], img);
    }
    let mut report = Report::new("Lie algebroid Q");
    let q2 = alg.square(&q)?;
    report.check("Q^2 = 0", alg.vanishes_on(&q2, &alg.ids().collect::<Vec<_>>()));
    Ok(LieAlgebroid { alg, x, theta, q, report })
}
