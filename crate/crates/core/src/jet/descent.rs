use super::presets::{JetPreset, QkStructure};
use crate::bigraded::{Algebra, Bidegree, Coeff, Degree, Polynomial, Tensor};
use crate::error::{Error, Result};
use crate::report::{Report, Witness};

/// `O[0], ..., O[n]` with `O[p]` of degree `(p, n-p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentSequence {
    pub n: usize,
    pub o: Vec<Polynomial>,
}

impl DescentSequence {
    pub fn render(&self, alg: &Algebra) -> Vec<String> {
        self.o.iter().enumerate().map(|(p, f)| format!("O[{p}] = {}", alg.render(f))).collect()
    }

    pub fn expected_degree(&self, p: usize) -> Bidegree {
        Bidegree::new(p as i32, self.n as i32 - p as i32)
    }
}

fn check_degree(alg: &Algebra, what: String, f: &Polynomial, want: Bidegree) -> Result<()> {
    match alg.degree(f) {
        Degree::Zero => Ok(()),
        Degree::Homogeneous(d) if d == want => Ok(()),
        d => Err(Error::DegreeMismatch {
            what,
            expected: want,
            found: match d {
                Degree::Homogeneous(x) => x.to_string(),
                _ => "mixed".into(),
            },
        }),
    }
}

fn require_closed(alg: &Algebra, qk: &QkStructure, q: usize, f: &Polynomial) -> Result<()> {
    let r = alg.apply(&qk.q, f)?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::NotClosed {
            q,
            residual: alg.render(&r),
        })
    }
}

/// `O[p] = K^p O[0] / p!`.
pub fn standard_k_sequence(alg: &Algebra, qk: &QkStructure, n: usize, o0: &Polynomial) -> Result<DescentSequence> {
    general_k_sequence(alg, qk, n, o0, &[])
}

/// `O[p] = K^p O[0]/p! + Σ_{q≤p} K^{p-q} W[q]/(p-q)!`; `w[q-1]` holds `W^(q)` and may be shorter than `n`.
pub fn general_k_sequence(alg: &Algebra, qk: &QkStructure, n: usize, o0: &Polynomial, w: &[Polynomial]) -> Result<DescentSequence> {
    check_degree(alg, "O[0]".into(), o0, Bidegree::new(0, n as i32))?;
    require_closed(alg, qk, 0, o0)?;
    for (k, wq) in w.iter().enumerate() {
        let q = k + 1;
        check_degree(alg, format!("W[{q}]"), wq, Bidegree::new(q as i32, n as i32 - q as i32))?;
        require_closed(alg, qk, q, wq)?;
    }
    let mut o = vec![o0.clone()];
    for p in 1..=n {
        let mut next = k_power_over_factorial(alg, qk, o0, p)?;
        for q in 1..=p.min(w.len()) {
            next += k_power_over_factorial(alg, qk, &w[q - 1], p - q)?;
        }
        o.push(next);
    }
    Ok(DescentSequence { n, o })
}

/// `K^p f / p!`.
fn k_power_over_factorial(alg: &Algebra, qk: &QkStructure, o0: &Polynomial, p: usize) -> Result<Polynomial> {
    let mut t = o0.clone();
    for j in 1..=p {
        t = alg.apply(&qk.k, &t)?.scale(&Coeff::ratio(1, j as i64));
    }
    Ok(t)
}

/// `Q O[0] = 0` and the residuals `Q O[p] - L O[p-1]`.
pub fn verify_descent(alg: &Algebra, qk: &QkStructure, seq: &DescentSequence) -> Result<Report> {
    let mut r = Report::new("descent equations");
    let mut wd = Vec::new();
    for (p, f) in seq.o.iter().enumerate() {
        if let Err(e) = check_degree(alg, format!("O[{p}]"), f, seq.expected_degree(p)) {
            wd.push(Witness::new(format!("O[{p}]"), e.to_string(), seq.expected_degree(p).to_string()));
        }
    }
    r.check("O[p] has degree (p, n-p)", wd);
    let q0 = alg.apply(&qk.q, &seq.o[0])?;
    r.expect("Q O[0] = 0", q0.is_zero(), || Witness::new("O[0]", alg.render(&q0), "0"));
    for p in 1..seq.o.len() {
        let lhs = alg.apply(&qk.q, &seq.o[p])?;
        let rhs = alg.apply(&qk.l, &seq.o[p - 1])?;
        let res = &lhs - &rhs;
        r.expect(format!("Q O[{p}] = d O[{}]", p - 1), res.is_zero(), || {
            Witness::new(format!("O[{p}]"), alg.render(&lhs), alg.render(&rhs))
        });
    }
    Ok(r)
}

/// `O[0] = Q ρ[0]`, `O[i] = Q ρ[i] + L ρ[i-1]`; `rho[i]` has degree `(i, n-i-1)`.
pub fn exact_sequence(alg: &Algebra, qk: &QkStructure, n: usize, rho: &[Polynomial]) -> Result<DescentSequence> {
    if rho.len() > n + 1 {
        return Err(Error::DegreeMismatch {
            what: "exact sequence length".into(),
            expected: Bidegree::new(n as i32, -1),
            found: format!("{} terms", rho.len()),
        });
    }
    for (i, f) in rho.iter().enumerate() {
        check_degree(alg, format!("rho[{i}]"), f, Bidegree::new(i as i32, n as i32 - i as i32 - 1))?;
    }
    let get = |i: usize| rho.get(i).cloned().unwrap_or_else(Polynomial::zero);
    let mut o = Vec::new();
    for i in 0..=n {
        let mut f = alg.apply(&qk.q, &get(i))?;
        if i > 0 {
            f += alg.apply(&qk.l, &get(i - 1))?;
        }
        o.push(f);
    }
    Ok(DescentSequence { n, o })
}

/// Checks `seq = general_k_sequence(O0, W) + exact_sequence(ρ)` term by term.
pub fn is_k_sequence_with_witness(
    alg: &Algebra,
    qk: &QkStructure,
    seq: &DescentSequence,
    o0: &Polynomial,
    w: &[Polynomial],
    rho: &[Polynomial],
) -> Result<Report> {
    let k = general_k_sequence(alg, qk, seq.n, o0, w)?;
    let e = exact_sequence(alg, qk, seq.n, rho)?;
    let mut r = Report::new("K-sequence up to an exact sequence");
    let mut first = None;
    let mut wit = Vec::new();
    for p in 0..=seq.n {
        let want = &k.o[p] + &e.o[p];
        if seq.o[p] != want {
            first.get_or_insert(p);
            wit.push(Witness::new(format!("O[{p}]"), alg.render(&seq.o[p]), alg.render(&want)));
        }
    }
    r.check("O = K-sequence + exact sequence", wit);
    if let Some(p) = first {
        r.note(format!("first mismatch at p = {p}"));
    }
    Ok(r)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `O[p] = C(r,p) α_{i1..ir} d_h u^{ip} ⋯ d_h u^{i1} δu^{i(p+1)} ⋯ δu^{ir}` for a closed r-form with
/// polynomial components; the horizontal factors are taken in reverse so that the result is the
/// standard K-sequence in the first-kind convention.
pub fn pullback_observable(p: &JetPreset, rank: usize, dim: usize, alpha: impl Fn(&[usize]) -> Polynomial) -> Result<DescentSequence> {
    let alg = p.alg();
    let mut idx = vec![vec![]];
    for _ in 0..rank {
        idx = idx.into_iter().flat_map(|t: Vec<usize>| (0..dim).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    for t in &idx {
        let a = alpha(t);
        for s in 0..rank.saturating_sub(1) {
            let mut sw = t.clone();
            sw.swap(s, s + 1);
            if alpha(&sw) != -a.clone() {
                return Err(Error::NotAntisymmetric(format!("component {:?}", t.iter().map(|i| i + 1).collect::<Vec<_>>())));
            }
        }
    }
    let mut o = Vec::new();
    for pp in 0..=rank {
        let mut total = Polynomial::zero();
        for t in &idx {
            let a = alpha(t);
            if a.is_zero() {
                continue;
            }
            let mut factors: Vec<Polynomial> = t[..pp].iter().rev().map(|&i| p.dh_u(i)).collect();
            factors.extend(t[pp..].iter().map(|&i| p.du(i)));
            let prod = alg.product(std::iter::once(&a).chain(factors.iter()));
            total += prod;
        }
        o.push(total.scale(&Coeff::int(binomial(rank, pp))));
    }
    Ok(DescentSequence { n: rank, o })
}

/// Constant-coefficient version of [`pullback_observable`].
pub fn pullback_constant(p: &JetPreset, alpha: &Tensor) -> Result<DescentSequence> {
    if let Some(v) = alpha.antisymmetry_violation() {
        return Err(Error::NotAntisymmetric(format!("component {:?}", v.iter().map(|i| i + 1).collect::<Vec<_>>())));
    }
    let dim = alpha.shape.first().copied().unwrap_or(0);
    pullback_observable(p, alpha.rank(), dim, |t| Polynomial::constant(alpha.get(t).clone()))
}

/// `α_{i1..ir} δu^{i1} ⋯ δu^{ir}`.
pub fn vertical_form(p: &JetPreset, alpha: &Tensor) -> Polynomial {
    let alg = p.alg();
    let mut out = Polynomial::zero();
    for t in alpha.indices() {
        let c = alpha.get(&t);
        if c.is_zero() {
            continue;
        }
        let f: Vec<Polynomial> = t.iter().map(|&i| p.du(i)).collect();
        out += alg.product(f.iter()).scale(c);
    }
    out
}
