use std::collections::HashMap;

use crate::bigraded::{Algebra, Bidegree, Convention, Derivation, GenId, GenKind, Generator, Image, Polynomial};
use crate::error::{Error, Result};

/// A field component whose jets `name[indices;I]` exist for `|I| ≤ J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetBase {
    pub name: String,
    pub indices: Vec<i64>,
    pub degree: Bidegree,
}

/// Truncated jet coordinates over an `n`-dimensional base, with `dx^μ` of degree (1,0).
#[derive(Debug, Clone)]
pub struct JetSpace {
    pub alg: Algebra,
    pub n: usize,
    pub order: usize,
    pub dx: Vec<GenId>,
    pub bases: Vec<JetBase>,
    jets: HashMap<(usize, Vec<u32>), GenId>,
    origin: HashMap<GenId, (usize, Vec<u32>)>,
    /// Total derivatives `D_μ`, undefined on jets of top order.
    pub total: Vec<Derivation>,
    /// Generators without jets, inert under every derivation unless set explicitly.
    pub params: Vec<GenId>,
}

/// All sorted multi-indices over `1..=n` of length `≤ order`.
pub fn multi_indices(n: usize, order: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..order {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(1);
            for mu in start..=n as u32 {
                let mut x = m.clone();
                x.push(mu);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn extend_index(i: &[u32], mu: u32) -> Vec<u32> {
    let mut out = i.to_vec();
    out.push(mu);
    out.sort_unstable();
    out
}

impl JetSpace {
    pub fn new(n: usize, order: usize, convention: Convention) -> Result<Self> {
        if n == 0 || order == 0 {
            return Err(Error::UnsupportedParameter(format!("jet space needs n >= 1 and J >= 1 (got n={n}, J={order})")));
        }
        let mut alg = Algebra::new(convention);
        let dx = (1..=n)
            .map(|m| alg.add(Generator::indexed("dx", vec![m as i64], Bidegree::new(1, 0))))
            .collect::<Result<Vec<_>>>()?;
        let total = (1..=n).map(|m| Derivation::new(format!("D[{m}]"), Bidegree::ZERO, convention)).collect();
        Ok(JetSpace {
            alg,
            n,
            order,
            dx,
            bases: Vec::new(),
            jets: HashMap::new(),
            origin: HashMap::new(),
            total,
            params: Vec::new(),
        })
    }

    /// Adds every jet of one field component and extends the total derivatives.
    pub fn add_field(&mut self, name: &str, indices: Vec<i64>, degree: Bidegree) -> Result<usize> {
        let b = self.bases.len();
        self.bases.push(JetBase {
            name: name.to_string(),
            indices: indices.clone(),
            degree,
        });
        let mis = multi_indices(self.n, self.order);
        for m in &mis {
            let g = Generator::indexed(name, indices.clone(), degree).with_jet(m.clone());
            let id = self.alg.add(g)?;
            self.jets.insert((b, m.clone()), id);
            self.origin.insert(id, (b, m.clone()));
        }
        for m in &mis {
            let id = self.jets[&(b, m.clone())];
            for mu in 1..=self.n as u32 {
                let d = &mut self.total[mu as usize - 1];
                if m.len() == self.order {
                    d.set_undefined(id);
                } else {
                    let next = self.jets[&(b, extend_index(m, mu))];
                    d.set(id, self.alg.var(next));
                }
            }
        }
        Ok(b)
    }

    /// Adds a family of components `name[i1,...,ik]` for every index tuple in `1..=dims[s]`.
    pub fn add_field_family(&mut self, name: &str, dims: &[usize], degree: Bidegree) -> Result<Vec<usize>> {
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for &d in dims {
            tuples = tuples.into_iter().flat_map(|t| (1..=d as i64).map(move |i| [t.clone(), vec![i]].concat())).collect();
        }
        tuples.into_iter().map(|t| self.add_field(name, t, degree)).collect()
    }

    pub fn add_param(&mut self, g: Generator) -> Result<GenId> {
        let id = self.alg.add(g.with_kind(GenKind::Plain))?;
        self.params.push(id);
        Ok(id)
    }

    pub fn base(&self, name: &str, indices: &[i64]) -> Option<usize> {
        self.bases.iter().position(|b| b.name == name && b.indices == indices)
    }

    pub fn jet_id(&self, base: usize, index: &[u32]) -> Result<GenId> {
        let mut key = index.to_vec();
        key.sort_unstable();
        if key.len() > self.order {
            return Err(Error::TruncationExceeded(crate::bigraded::label(
                &self.bases[base].name,
                &self.bases[base].indices,
                &key,
            )));
        }
        self.jets
            .get(&(base, key))
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(format!("{}[{:?}]", self.bases[base].name, index)))
    }

    pub fn jet(&self, base: usize, index: &[u32]) -> Result<Polynomial> {
        Ok(self.alg.var(self.jet_id(base, index)?))
    }

    /// `name[indices]` at order zero, looked up by name.
    pub fn field(&self, name: &str, indices: &[i64]) -> Result<Polynomial> {
        let b = self
            .base(name, indices)
            .ok_or_else(|| Error::UnknownGenerator(crate::bigraded::label(name, indices, &[])))?;
        self.jet(b, &[])
    }

    pub fn origin(&self, g: GenId) -> Option<&(usize, Vec<u32>)> {
        self.origin.get(&g)
    }

    pub fn dx(&self, mu: usize) -> Polynomial {
        self.alg.var(self.dx[mu - 1])
    }

    /// `D_μ f` (μ is 1-based).
    pub fn d_total(&self, mu: usize, f: &Polynomial) -> Result<Polynomial> {
        self.alg.apply(&self.total[mu - 1], f)
    }

    pub fn d_multi(&self, index: &[u32], f: &Polynomial) -> Result<Polynomial> {
        let mut g = f.clone();
        for &mu in index {
            g = self.d_total(mu as usize, &g)?;
        }
        Ok(g)
    }

    /// `L = Σ_μ dx^μ D_μ`.
    pub fn horizontal(&self) -> Result<Derivation> {
        let parts = (0..self.n)
            .map(|m| self.alg.left_mul(&self.alg.var(self.dx[m]), &self.total[m]))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<_> = parts.iter().map(|d| (crate::bigraded::Coeff::one(), d)).collect();
        Ok(self.alg.lincomb("L", &refs)?.renamed("L"))
    }

    /// Extends values on order-zero fields to all jets by `X(g_I) = D_I X(g)`.
    pub fn prolong(&self, name: &str, degree: Bidegree, base_images: &[(usize, Polynomial)]) -> Derivation {
        let mut d = Derivation::new(name, degree, self.alg.convention());
        for (b, img) in base_images {
            for m in multi_indices(self.n, self.order) {
                let id = self.jets[&(*b, m.clone())];
                match self.d_multi(&m, img) {
                    Ok(p) => d.set(id, p),
                    Err(_) => d.set_undefined(id),
                }
            }
        }
        d
    }

    /// Jet order of a generator (`0` for `dx` and parameters).
    pub fn order_of(&self, g: GenId) -> usize {
        self.origin.get(&g).map(|(_, m)| m.len()).unwrap_or(0)
    }

    /// Generators of jet order below `k`.
    pub fn below_order(&self, k: usize) -> Vec<GenId> {
        self.alg.ids().filter(|&g| self.order_of(g) < k).collect()
    }

    pub fn image_defined(d: &Derivation, g: GenId) -> bool {
        !matches!(d.image(g), Some(Image::Undefined))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(4, 2).len(), 15);
        assert_eq!(multi_indices(1, 3), vec![vec![], vec![1], vec![1, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn total_derivative_truncates() {
        let mut js = JetSpace::new(2, 1, Convention::First).unwrap();
        let u = js.add_field("u", vec![], Bidegree::ZERO).unwrap();
        let f = js.jet(u, &[]).unwrap();
        let du = js.d_total(2, &f).unwrap();
        assert_eq!(js.alg.render(&du), "u[;2]");
        assert!(matches!(js.d_total(1, &du), Err(Error::TruncationExceeded(_))));
        assert!(matches!(js.jet(u, &[1, 1]), Err(Error::TruncationExceeded(_))));
    }
}
