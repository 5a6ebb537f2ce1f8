use crate::bigraded::{Algebra, Coeff, Polynomial, Tensor};
use crate::error::{Error, Result};

/// Antisymmetric components `X_{μν}` of `X = ½ X_{μν} dx^μ dx^ν`; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoForm {
    pub n: usize,
    comp: Vec<Vec<Polynomial>>,
}

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        TwoForm {
            n,
            comp: vec![vec![Polynomial::zero(); n]; n],
        }
    }

    /// Builds the form from its components with `μ < ν`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut out = TwoForm::zero(n);
        for mu in 1..=n {
            for nu in mu + 1..=n {
                out.set(mu, nu, f(mu, nu));
            }
        }
        out
    }

    pub fn get(&self, mu: usize, nu: usize) -> &Polynomial {
        &self.comp[mu - 1][nu - 1]
    }

    /// Sets `X_{μν}` and `X_{νμ} = -X_{μν}`.
    pub fn set(&mut self, mu: usize, nu: usize, p: Polynomial) {
        if mu == nu {
            return;
        }
        self.comp[nu - 1][mu - 1] = -&p;
        self.comp[mu - 1][nu - 1] = p;
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        TwoForm::from_upper(self.n, |m, v| self.get(m, v) + o.get(m, v))
    }

    pub fn sub(&self, o: &TwoForm) -> TwoForm {
        TwoForm::from_upper(self.n, |m, v| self.get(m, v) - o.get(m, v))
    }

    pub fn scale(&self, c: &Coeff) -> TwoForm {
        TwoForm::from_upper(self.n, |m, v| self.get(m, v).scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.comp.iter().flatten().all(Polynomial::is_zero)
    }

    /// `(*X)_{μν} = ½ ε_{μνρσ} X_{ρσ}` for the flat Euclidean metric.
    pub fn hodge(&self) -> Result<TwoForm> {
        if self.n != 4 {
            return Err(Error::Dim4Only(self.n));
        }
        let eps = Tensor::epsilon(4);
        Ok(TwoForm::from_upper(4, |mu, nu| {
            let mut acc = Polynomial::zero();
            for rho in 1..=4 {
                for sigma in rho + 1..=4 {
                    let e = eps.get(&[mu - 1, nu - 1, rho - 1, sigma - 1]);
                    if !e.is_zero() {
                        acc += self.get(rho, sigma).scale(e);
                    }
                }
            }
            acc
        }))
    }

    /// `Σ_{μ<ν} X_{μν} dx^μ dx^ν`.
    pub fn to_form(&self, alg: &Algebra, dx: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for mu in 1..=self.n {
            for nu in mu + 1..=self.n {
                let c = self.get(mu, nu);
                if !c.is_zero() {
                    out += alg.mul(c, &alg.mul(&dx[mu - 1], &dx[nu - 1]));
                }
            }
        }
        out
    }
}

/// `X_± = ½(X ± *X)`; `sign` is `+1` or `-1`.
pub fn selfdual_project(x: &TwoForm, sign: i32) -> Result<TwoForm> {
    let star = x.hodge()?;
    let half = Coeff::ratio(1, 2);
    Ok(if sign >= 0 { x.add(&star) } else { x.sub(&star) }.scale(&half))
}

/// Componentwise projection of a Lie-valued two-form.
pub fn selfdual_project_lie(x: &[TwoForm], sign: i32) -> Result<Vec<TwoForm>> {
    x.iter().map(|c| selfdual_project(c, sign)).collect()
}

/// `Σ_μ X_μ dx^μ`.
pub fn one_form(alg: &Algebra, comps: &[Polynomial], dx: &[Polynomial]) -> Polynomial {
    comps.iter().zip(dx).map(|(c, d)| alg.mul(c, d)).sum()
}
