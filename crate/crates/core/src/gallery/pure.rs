//! Pure-state null and alternative families: Gram-matrix evaluation of the
//! support-projection test of `Σ_i ψ_i^{⊗n}`.

use super::{CounterexampleReport, Inequality, Relation};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::hermcore::{CMat, HermitianOperator, C64};
use crate::tradeoff::hoeffding_quantum;
use nalgebra::DVector;
use serde::Serialize;

type Vector = DVector<C64>;

/// Quantities at one block length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureStep {
    pub n: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max_j ⟨φ_j^{⊗n}|T_n|φ_j^{⊗n}⟩`, with `T_n` the projection onto `span{ψ_i^{⊗n}}`.
    pub beta_exact: f64,
    /// `2 max_j Σ_i |⟨ψ_i, φ_j⟩|^{2n}`.
    pub beta_mid: f64,
    /// `2k (max_{ij} |⟨ψ_i, φ_j⟩|²)^n`.
    pub beta_bound: f64,
}

fn inner(a: &Vector, b: &Vector) -> C64 {
    a.dotc(b)
}

fn check_family(v: &[Vector], dim: usize) -> Result<()> {
    for (i, x) in v.iter().enumerate() {
        if x.len() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: x.len(),
            });
        }
        if (x.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::OutOfRange {
                what: "vector norm",
                value: x.norm(),
            });
        }
        for (l, y) in v.iter().enumerate().skip(i + 1) {
            if inner(x, y).norm_sqr() > 1.0 - 1e-12 {
                return Err(Error::DegenerateFamily(i, l));
            }
        }
    }
    Ok(())
}

fn gram(psis: &[Vector], n: usize) -> CMat {
    let k = psis.len();
    CMat::from_fn(k, k, |i, l| inner(&psis[i], &psis[l]).powu(n as u32))
}

/// Per-`n` Gram data for `n = 1..=n_max`.
pub fn pure_state_steps(psis: &[Vector], phis: &[Vector], n_max: usize) -> Result<Vec<PureStep>> {
    let dim = psis.first().ok_or_else(|| Error::ShapeMismatch("empty null family".into()))?.len();
    if phis.is_empty() {
        return Err(Error::ShapeMismatch("empty alternative family".into()));
    }
    check_family(psis, dim)?;
    check_family(phis, dim)?;
    let k = psis.len();
    let maxov = max_overlap(psis, phis);
    (1..=n_max)
        .map(|n| {
            let h = HermitianOperator::new(gram(psis, n))?;
            let e = h.eig()?;
            let (lmin, lmax) = (e.values[0], e.values[k - 1]);
            // ⟨φ^{⊗n}|T_n|φ^{⊗n}⟩ = c† G⁺ c with c_i = ⟨ψ_i, φ⟩^n; G may be singular when k > dim
            let cut = 1e-12 * lmax.max(1.0);
            let mut beta_exact = 0.0f64;
            let mut beta_mid = 0.0f64;
            for phi in phis {
                let c = Vector::from_fn(k, |i, _| inner(&psis[i], phi).powu(n as u32));
                let s: f64 = c.iter().map(|z| z.norm_sqr()).sum();
                beta_mid = beta_mid.max(2.0 * s);
                let b: f64 = (0..k)
                    .filter(|&l| e.values[l] > cut)
                    .map(|l| e.vectors.column(l).dotc(&c).norm_sqr() / e.values[l])
                    .sum();
                beta_exact = beta_exact.max(b.min(1.0));
            }
            Ok(PureStep {
                n,
                lambda_min: lmin,
                lambda_max: lmax,
                beta_exact,
                beta_mid,
                beta_bound: 2.0 * k as f64 * maxov.powi(n as i32),
            })
        })
        .collect()
}

fn max_overlap(psis: &[Vector], phis: &[Vector]) -> f64 {
    psis.iter()
        .flat_map(|p| phis.iter().map(move |f| inner(p, f).norm_sqr()))
        .fold(0.0, f64::max)
}

/// `C_ij = −log|⟨ψ_i,φ_j⟩|²`, the Gram-threshold `n₀`, and the bound chain for `n₀ ≤ n ≤ n_max`.
pub fn pure_state_report(psis: &[Vector], phis: &[Vector], n_max: usize) -> Result<CounterexampleReport> {
    let steps = pure_state_steps(psis, phis, n_max)?;
    let k = psis.len();
    let maxov = max_overlap(psis, phis);
    let c_min = if maxov > 0.0 { -maxov.ln() } else { f64::INFINITY };
    let mut rep = CounterexampleReport::new("pure_states");
    rep.param("k", k as f64)
        .param("m", phis.len() as f64)
        .param("n_max", n_max as f64)
        .quantity("C_min", c_min)
        .quantity("max overlap", maxov);
    for (i, p) in psis.iter().enumerate() {
        for (j, f) in phis.iter().enumerate() {
            let ov = inner(p, f).norm_sqr();
            let c = if ov > 0.0 { -ov.ln() } else { f64::INFINITY };
            rep.quantity(format!("C_{i}{j}"), c);
            // pairwise Hoeffding: +inf below C_ij, C_ij above
            if c.is_finite() && c > 0.0 {
                let rho = HermitianOperator::outer(p);
                let sigma = HermitianOperator::outer(f);
                for r in [0.5 * c, 2.0 * c] {
                    let h = hoeffding_quantum(&rho, &sigma, r)?;
                    let want = if r < c { ExtReal::PosInf } else { ExtReal::Finite(c) };
                    rep.push(Inequality::new(format!("H_r(rho_{i}||sigma_{j}) at r={r:.6}"), h, Relation::Eq, want, 1e-8));
                }
            }
        }
    }
    for w in steps.windows(2) {
        rep.push(Inequality::finite(
            format!("lambda_min(G^{}) >= lambda_min(G^{})", w[1].n, w[0].n),
            w[1].lambda_min,
            Relation::Ge,
            w[0].lambda_min,
            1e-12,
        ));
    }
    let n0 = steps.iter().find(|s| s.lambda_min > 0.5).map(|s| s.n);
    match n0 {
        None => {
            rep.note(format!("lambda_min(G^(n)) <= 1/2 up to n = {n_max}"));
        }
        Some(n0) => {
            rep.param("n0", n0 as f64);
        }
    }
    for s in steps.iter().filter(|s| Some(s.n) >= n0 && n0.is_some()) {
        let n = s.n as f64;
        rep.quantity(format!("lambda_min n={}", s.n), s.lambda_min)
            .quantity(format!("beta n={}", s.n), s.beta_exact);
        rep.push(Inequality::finite(format!("lambda_min > 1/2, n={}", s.n), s.lambda_min, Relation::Gt, 0.5, 0.0))
            .push(Inequality::finite(format!("beta <= 2 max_j sum_i |<psi_i,phi_j>|^2n, n={}", s.n), s.beta_exact, Relation::Le, s.beta_mid, 1e-15))
            .push(Inequality::finite(format!("beta <= 2k max^n, n={}", s.n), s.beta_exact, Relation::Le, s.beta_bound, 1e-15))
            .push(
                Inequality::finite(format!("beta <= 2 max^n (literal form), n={}", s.n), s.beta_exact, Relation::Le, 2.0 * maxov.powi(s.n as i32), 1e-15)
                    .informational(),
            );
        if c_min.is_finite() && s.beta_exact > 0.0 {
            let rate = -s.beta_exact.ln() / n;
            rep.push(Inequality::finite(format!("-(1/n) log beta <= C_min, n={}", s.n), rate, Relation::Le, c_min, 1e-9))
                .push(
                    Inequality::finite(
                        format!("|-(1/n) log beta - C_min| <= 2|log max overlap|/n, n={}", s.n),
                        (rate - c_min).abs(),
                        Relation::Le,
                        2.0 * c_min / n,
                        1e-12,
                    )
                    .informational(),
                )
                .push(Inequality::finite(
                format!("-(1/n) log beta >= C_min - log(2k)/n, n={}", s.n),
                rate,
                Relation::Ge,
                c_min - (2.0 * k as f64).ln() / n,
                1e-12,
            ));
        }
    }
    rep.note("alpha_n = 0 for the support projection test; the sum over the k null vectors contributes the factor k in 2k max^n");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[(f64, f64)]) -> Vector {
        let u = Vector::from_iterator(x.len(), x.iter().map(|&(a, b)| C64::new(a, b)));
        let n = u.norm();
        u / C64::new(n, 0.0)
    }

    #[test]
    fn two_vectors_gram_threshold() {
        let g: f64 = 0.9;
        let psis = vec![v(&[(1.0, 0.0), (0.0, 0.0)]), v(&[(g, 0.0), ((1.0 - g * g).sqrt(), 0.0)])];
        let phis = vec![v(&[(0.0, 0.0), (1.0, 0.0)])];
        let steps = pure_state_steps(&psis, &phis, 10).unwrap();
        for s in &steps {
            assert!((s.lambda_min - (1.0 - g.powi(s.n as i32))).abs() < 1e-12);
        }
        let n0 = steps.iter().find(|s| s.lambda_min > 0.5).unwrap().n;
        assert_eq!(n0, 7);
    }

    #[test]
    fn orthogonal_families() {
        let psis = vec![v(&[(1.0, 0.0), (0.0, 0.0)])];
        let phis = vec![v(&[(0.0, 0.0), (1.0, 0.0)])];
        let steps = pure_state_steps(&psis, &phis, 1).unwrap();
        assert_eq!(steps[0].beta_exact, 0.0);
        let rep = pure_state_report(&psis, &phis, 3).unwrap();
        assert!(rep.quantities["C_min"].is_inf());
        assert!(rep.pass());
    }

    #[test]
    fn repeated_vector_rejected() {
        let a = v(&[(1.0, 0.0), (1.0, 0.0)]);
        let err = pure_state_steps(&[a.clone(), a.clone()], &[a], 2).unwrap_err();
        assert_eq!(err, Error::DegenerateFamily(0, 1));
    }
}
