//! Exact finite-n classical computations over type classes.
//!
//! A [`SymmetricTest`] stores the probability of accepting the null hypothesis
//! for every type, so its errors against i.i.d. (or product) states are finite
//! sums over type classes. Sums run in log space because `β_n` is typically
//! far below the smallest normal double for moderate `n`.

use crate::classical::ClassicalWeight;
use crate::composite::{HypothesisSet, MinimizerPair};
use crate::divergence::classical as dc;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::scalar::{log_sum_exp, Exact};
use crate::special::ln_multinomial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Largest number of types [`enumerate_types`] will produce.
pub const TYPE_CAP: u128 = 10_000_000;
/// Largest number of strategies enumerated by [`adversarial_product_errors`].
pub const STRATEGY_CAP: u128 = 100_000;

/// Composition of `n` over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeVector {
    pub counts: Vec<usize>,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    /// Empirical distribution `counts/n`; `n = 0` gives an error.
    pub fn empirical(&self) -> Result<ClassicalWeight<f64>> {
        let n = self.n();
        if n == 0 {
            return Err(Error::ZeroOperator);
        }
        ClassicalWeight::new(self.counts.iter().map(|&c| c as f64 / n as f64).collect())
    }
}

/// Number of compositions of `n` into `k` parts.
pub fn type_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return u128::from(n == 0);
    }
    crate::special::binomial((n + k - 1) as u64, (k - 1) as u64)
}

/// Iterator over compositions in lexicographically decreasing order, starting at `(n, 0, …, 0)`.
#[derive(Debug, Clone)]
pub struct TypeIter {
    cur: Option<Vec<usize>>,
}

impl Iterator for TypeIter {
    type Item = TypeVector;

    fn next(&mut self) -> Option<TypeVector> {
        let out = self.cur.clone()?;
        let c = self.cur.as_mut().expect("checked above");
        let k = c.len();
        let mut advanced = false;
        if k >= 2 {
            let tail = c[k - 1];
            c[k - 1] = 0;
            if let Some(j) = (0..k - 1).rev().find(|&j| c[j] > 0) {
                c[j] -= 1;
                c[j + 1] = tail + 1;
                advanced = true;
            }
        }
        if !advanced {
            self.cur = None;
        }
        Some(TypeVector::new(out))
    }
}

/// All `n`-types over an alphabet of size `k`; fails above [`TYPE_CAP`].
pub fn enumerate_types(n: usize, k: usize) -> Result<TypeIter> {
    if k == 0 {
        return Err(Error::ShapeMismatch("empty alphabet".into()));
    }
    let count = type_count(n, k);
    if count > TYPE_CAP {
        return Err(Error::CapExceeded {
            required: usize::try_from(count).unwrap_or(usize::MAX),
            cap: TYPE_CAP as usize,
        });
    }
    let mut start = vec![0; k];
    start[0] = n;
    Ok(TypeIter { cur: Some(start) })
}

/// `(log |type class|, log p^{⊗n}(type class))`; the second is `−∞` when the type
/// uses a symbol of zero probability.
pub fn type_stats(p: &ClassicalWeight<f64>, t: &TypeVector) -> Result<(f64, f64)> {
    if p.len() != t.alphabet() {
        return Err(Error::DimMismatch {
            left: p.len(),
            right: t.alphabet(),
        });
    }
    let log_size = ln_multinomial(&t.counts);
    let mut lp = log_size;
    for (&k, &px) in t.counts.iter().zip(p.as_slice()) {
        if k > 0 {
            if px == 0.0 {
                return Ok((log_size, f64::NEG_INFINITY));
            }
            lp += k as f64 * px.ln();
        }
    }
    Ok((log_size, lp))
}

/// Permutation-symmetric test: acceptance probability of the null per type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricTest {
    pub n: usize,
    pub alphabet: usize,
    pub types: Vec<TypeVector>,
    pub accept: Vec<f64>,
}

impl SymmetricTest {
    /// Builds a test by evaluating `f` on every type.
    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(&TypeVector) -> f64) -> Result<Self> {
        let types: Vec<TypeVector> = enumerate_types(n, k)?.collect();
        let accept: Vec<f64> = types.iter().map(&mut f).collect();
        Self::new(n, k, types, accept)
    }

    pub fn new(n: usize, alphabet: usize, types: Vec<TypeVector>, accept: Vec<f64>) -> Result<Self> {
        if types.len() != accept.len() {
            return Err(Error::ShapeMismatch("one acceptance value per type".into()));
        }
        if let Some(&a) = accept.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::OutOfRange {
                what: "acceptance",
                value: a,
            });
        }
        if let Some(t) = types.iter().find(|t| t.n() != n || t.alphabet() != alphabet) {
            return Err(Error::ShapeMismatch(format!("type {:?} is not an {n}-type", t.counts)));
        }
        Ok(Self {
            n,
            alphabet,
            types,
            accept,
        })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.alphabet != other.alphabet || self.types != other.types {
            return Err(Error::ShapeMismatch("tests over different type sets".into()));
        }
        Ok(())
    }

    /// CSV with one row per type: counts, then acceptance.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let head: Vec<String> = (0..self.alphabet).map(|i| format!("c{i}")).collect();
        s.push_str(&head.join(","));
        s.push_str(",accept\n");
        for (t, a) in self.types.iter().zip(&self.accept) {
            for c in &t.counts {
                s.push_str(&format!("{c},"));
            }
            s.push_str(&format!("{a}\n"));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty test CSV".into()))?;
        let k = header.split(',').count().saturating_sub(1);
        let mut types = Vec::new();
        let mut accept = Vec::new();
        for (row, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != k + 1 {
                return Err(Error::Parse(format!("row {}: expected {} fields", row + 2, k + 1)));
            }
            let counts = f[..k]
                .iter()
                .map(|x| x.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))?;
            let a = f[k]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))?;
            types.push(TypeVector::new(counts));
            accept.push(a);
        }
        let n = types.first().map(TypeVector::n).unwrap_or(0);
        Self::new(n, k, types, accept)
    }
}

/// Worst-case error probabilities of a test, with their exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorPair {
    /// Type I: `max_i Tr ρᵢ^{⊗n}(I − T)`.
    pub alpha_n: f64,
    /// Type II: `max_j Tr σⱼ^{⊗n} T`.
    pub beta_n: f64,
    /// `−log α_n` (`+∞` when `α_n = 0`).
    pub neg_log_alpha: ExtReal,
    /// `−log β_n`.
    pub neg_log_beta: ExtReal,
}

impl ErrorPair {
    fn from_logs(la: f64, lb: f64) -> Self {
        Self {
            alpha_n: la.exp().min(1.0),
            beta_n: lb.exp().min(1.0),
            neg_log_alpha: ExtReal::from_float(-la),
            neg_log_beta: ExtReal::from_float(-lb),
        }
    }
}

/// `log Σ_t p^{⊗n}(t)·w(t)` over the test's types, in parallel chunks.
fn log_weighted_mass(test: &SymmetricTest, p: &ClassicalWeight<f64>, w: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    if p.len() != test.alphabet {
        return Err(Error::DimMismatch {
            left: p.len(),
            right: test.alphabet,
        });
    }
    let partial: Vec<f64> = test
        .types
        .par_chunks(4096)
        .zip(test.accept.par_chunks(4096))
        .map(|(ts, acc)| {
            let terms: Vec<f64> = ts
                .iter()
                .zip(acc)
                .map(|(t, &a)| {
                    let wa = w(a);
                    if wa <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        type_stats(p, t).expect("alphabet checked").1 + wa.ln()
                    }
                })
                .collect();
            log_sum_exp(&terms)
        })
        .collect();
    Ok(log_sum_exp(&partial))
}

/// Exact worst-case errors of `test` over the listed i.i.d. null and alternative states.
pub fn exact_errors(
    test: &SymmetricTest,
    nulls: &[ClassicalWeight<f64>],
    alts: &[ClassicalWeight<f64>],
) -> Result<ErrorPair> {
    if nulls.is_empty() || alts.is_empty() {
        return Err(Error::ShapeMismatch("empty hypothesis list".into()));
    }
    let mut la = f64::NEG_INFINITY;
    for p in nulls {
        la = la.max(log_weighted_mass(test, p, |a| 1.0 - a)?);
    }
    let mut lb = f64::NEG_INFINITY;
    for q in alts {
        lb = lb.max(log_weighted_mass(test, q, |a| a)?);
    }
    Ok(ErrorPair::from_logs(la, lb))
}

/// Per-symbol log-likelihood ratio `logn ρ(x) − logn σ(x)` (`logn 0 = 0`).
pub fn llr(rho: &ClassicalWeight<f64>, sigma: &ClassicalWeight<f64>) -> Vec<f64> {
    let logn = |x: f64| if x > 0.0 { x.ln() } else { 0.0 };
    rho.as_slice()
        .iter()
        .zip(sigma.as_slice())
        .map(|(&r, &s)| logn(r) - logn(s))
        .collect()
}

/// Relative slack for threshold ties in LLR and ball tests.
const TIE_TOL: f64 = 1e-12;

/// Test accepting the null on types with `(1/n)Σ k_x L(x) ≥ c`.
pub fn llr_test(l: &[f64], c: f64, n: usize) -> Result<SymmetricTest> {
    SymmetricTest::from_fn(n, l.len(), |t| {
        if n == 0 {
            return f64::from(c <= 0.0);
        }
        let s: f64 = t.counts.iter().zip(l).map(|(&k, &x)| k as f64 * x).sum::<f64>() / n as f64;
        f64::from(s >= c - TIE_TOL * (1.0 + c.abs()))
    })
}

/// Neyman–Pearson test for the pair (ρ, σ) at threshold `c`.
pub fn np_test(rho: &ClassicalWeight<f64>, sigma: &ClassicalWeight<f64>, c: f64, n: usize) -> Result<SymmetricTest> {
    rho.check_len(sigma)?;
    llr_test(&llr(rho, sigma), c, n)
}

/// Keeps the null on `B_{n,r} = {types with D(P‖σ) ≥ r}` (ties within `1e-12` included).
pub fn ball_test(sigma: &ClassicalWeight<f64>, r: f64, n: usize) -> Result<SymmetricTest> {
    if r < 0.0 {
        return Err(Error::OutOfRange { what: "r", value: r });
    }
    SymmetricTest::from_fn(n, sigma.len(), |t| {
        if n == 0 {
            return f64::from(r == 0.0);
        }
        let p = t.empirical().expect("n > 0");
        let d = dc::rel_entropy(&p, sigma).expect("same alphabet");
        f64::from(d.to_float() >= r - TIE_TOL)
    })
}

/// `(n+1)^{|X|} e^{−nr}`, the type-counting bound on `σ^{⊗n}(B_{n,r})`, in log form.
pub fn ball_log_beta_bound(n: usize, alphabet: usize, r: f64) -> f64 {
    alphabet as f64 * ((n + 1) as f64).ln() - n as f64 * r
}

/// Rounds ρ to an `n`-type inside the halfspace `Σ v ρ ≥ c`.
///
/// Pivot: the index of largest mass (at least `1/r`, `r = |supp ρ|`). Every other
/// support index rounds up when its `v` exceeds the pivot's and down otherwise; the
/// pivot takes the remainder. Then `(vᵢ − v_pivot)(kᵢ − nρᵢ) ≥ 0` termwise.
pub fn type_round_halfspace<E: Exact>(rho: &[E], v: &[E], c: &E, n: usize) -> Result<TypeVector> {
    if rho.len() != v.len() {
        return Err(Error::DimMismatch {
            left: rho.len(),
            right: v.len(),
        });
    }
    let zero = E::from_i64(0);
    let supp: Vec<usize> = (0..rho.len()).filter(|&i| rho[i] > zero).collect();
    let r = supp.len();
    if r == 0 {
        return Err(Error::ZeroOperator);
    }
    let needed = r * (r - 1);
    if n < needed {
        return Err(Error::NTooSmall { n, needed });
    }
    let dot = |w: &[E]| w.iter().zip(v).fold(zero.clone(), |acc, (a, b)| acc + a.clone() * b.clone());
    if dot(rho) < *c {
        return Err(Error::OutOfRange {
            what: "rho outside the halfspace",
            value: f64::NAN,
        });
    }
    let pivot = *supp
        .iter()
        .max_by(|&&a, &&b| rho[a].partial_cmp(&rho[b]).expect("ordered scalars"))
        .expect("nonempty support");
    let nn = E::from_i64(n as i64);
    let mut counts = vec![0usize; rho.len()];
    let mut used: i64 = 0;
    for &i in supp.iter().filter(|&&i| i != pivot) {
        let np = nn.clone() * rho[i].clone();
        let k = if v[i] > v[pivot] { np.ceil_i64() } else { np.floor_i64() };
        counts[i] = k.max(0) as usize;
        used += k.max(0);
    }
    let rest = n as i64 - used;
    if rest < 0 {
        return Err(Error::NTooSmall { n, needed });
    }
    counts[pivot] = rest as usize;
    Ok(TypeVector::new(counts))
}

/// Exact verification of the three rounding postconditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundingCheck {
    /// `Σ k = n` and `supp ρ_n ⊆ supp ρ`.
    pub is_type_within_support: bool,
    pub in_halfspace: bool,
    /// `‖ρ − ρ_n‖₁ ≤ 2(r−1)/n`.
    pub l1_ok: bool,
}

impl RoundingCheck {
    pub fn all(&self) -> bool {
        self.is_type_within_support && self.in_halfspace && self.l1_ok
    }
}

pub fn verify_rounding<E: Exact>(rho: &[E], v: &[E], c: &E, n: usize, t: &TypeVector) -> RoundingCheck {
    let zero = E::from_i64(0);
    let nn = E::from_i64(n as i64);
    let r = rho.iter().filter(|x| **x > zero).count() as i64;
    let within = t.n() == n
        && t.alphabet() == rho.len()
        && t.counts.iter().zip(rho).all(|(&k, p)| k == 0 || *p > zero);
    // compare n·Σ v ρ_n with n·c and n·‖·‖₁ with 2(r−1) to stay in exact arithmetic
    let lhs = t
        .counts
        .iter()
        .zip(v)
        .fold(zero.clone(), |acc, (&k, vi)| acc + E::from_i64(k as i64) * vi.clone());
    let in_half = lhs >= nn.clone() * c.clone();
    let l1 = t.counts.iter().zip(rho).fold(zero.clone(), |acc, (&k, p)| {
        acc + (E::from_i64(k as i64) - nn.clone() * p.clone()).abs()
    });
    let l1_ok = l1 <= E::from_i64(2 * (r - 1).max(0));
    RoundingCheck {
        is_type_within_support: within,
        in_halfspace: in_half,
        l1_ok,
    }
}

/// `T = maxᵢ minⱼ Tᵢⱼ` per type.
pub fn maxmin_combine(grid: &[Vec<SymmetricTest>]) -> Result<SymmetricTest> {
    let first = grid
        .first()
        .and_then(|row| row.first())
        .ok_or_else(|| Error::ShapeMismatch("empty test grid".into()))?;
    let m = grid[0].len();
    for row in grid {
        if row.len() != m {
            return Err(Error::ShapeMismatch("ragged test grid".into()));
        }
        for t in row {
            first.same_shape(t)?;
        }
    }
    let accept = (0..first.len())
        .map(|x| {
            grid.iter()
                .map(|row| row.iter().map(|t| t.accept[x]).fold(f64::INFINITY, f64::min))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    SymmetricTest::new(first.n, first.alphabet, first.types.clone(), accept)
}

/// Worst per-type slacks of `I − T ≤ Σⱼ(I − Tᵢⱼ)` (over all i) and `T ≤ Σᵢ Tᵢⱼ` (over all j).
pub fn maxmin_slacks(grid: &[Vec<SymmetricTest>], t: &SymmetricTest) -> Result<(f64, f64)> {
    let mut s_null = f64::INFINITY;
    let mut s_alt = f64::INFINITY;
    for row in grid {
        for x in row {
            t.same_shape(x)?;
        }
    }
    let m = grid.first().map_or(0, Vec::len);
    for x in 0..t.len() {
        for row in grid {
            let rhs: f64 = row.iter().map(|tij| 1.0 - tij.accept[x]).sum();
            s_null = s_null.min(rhs - (1.0 - t.accept[x]));
        }
        for j in 0..m {
            let rhs: f64 = grid.iter().map(|row| row[j].accept[x]).sum();
            s_alt = s_alt.min(rhs - t.accept[x]);
        }
    }
    Ok((s_null, s_alt))
}

/// Rounds each acceptance value to `1` if `≥ 1/2`, else `0`.
pub fn projectivize(test: &SymmetricTest) -> SymmetricTest {
    SymmetricTest {
        accept: test.accept.iter().map(|&a| f64::from(a >= 0.5)).collect(),
        ..test.clone()
    }
}

/// `σ ↦ (1 − θ)σ + θ·uniform`.
pub fn smooth_weight(sigma: &ClassicalWeight<f64>, theta: f64) -> Result<ClassicalWeight<f64>> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::OutOfRange {
            what: "theta",
            value: theta,
        });
    }
    sigma.mix(&ClassicalWeight::uniform(sigma.len()), theta)
}

/// Applies [`smooth_weight`] to every state of a classical set.
pub fn smooth_set(set: &HypothesisSet, theta: f64) -> Result<HypothesisSet> {
    let states = set
        .classical_states()?
        .iter()
        .map(|s| smooth_weight(s, theta))
        .collect::<Result<Vec<_>>>()?;
    HypothesisSet::classical(format!("{}~{theta}", set.label), states)
}

/// Exact distribution of the total type of independent draws, `mⱼ` draws from `pⱼ`.
fn product_type_distribution(gens: &[ClassicalWeight<f64>], mult: &[usize]) -> HashMap<Vec<usize>, f64> {
    let k = gens[0].len();
    let mut dist: HashMap<Vec<usize>, f64> = HashMap::from([(vec![0; k], 1.0)]);
    for (g, &m) in gens.iter().zip(mult) {
        for _ in 0..m {
            let mut next: HashMap<Vec<usize>, f64> = HashMap::with_capacity(dist.len() * k);
            for (t, &p) in &dist {
                for (x, &px) in g.as_slice().iter().enumerate() {
                    if px > 0.0 {
                        let mut u = t.clone();
                        u[x] += 1;
                        *next.entry(u).or_insert(0.0) += p * px;
                    }
                }
            }
            dist = next;
        }
    }
    dist
}

/// Outcome of the adversarial bound-chain check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialReport {
    pub n: usize,
    pub r: f64,
    pub alpha_star: f64,
    /// NP threshold `c = ψ′(α*)` of the minimizer pair.
    pub c: f64,
    pub theta: f64,
    /// `α*c − ψ(α*) + log(1 − θ)`: guaranteed type-II rate.
    pub r_eff: f64,
    /// `(α*−1)c − ψ(α*) + log(1 − θ)`: guaranteed type-I rate.
    pub h_eff: f64,
    pub strategies_alt: usize,
    pub strategies_null: usize,
    pub max_beta: f64,
    pub beta_bound: f64,
    pub max_alpha: f64,
    pub alpha_bound: f64,
    pub pass: bool,
}

fn compositions(n: usize, parts: usize) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_types(n, parts)?.map(|t| t.counts).collect())
}

/// Exact errors of the NP test of a certified minimizer pair against every
/// arbitrarily-varying product strategy, compared with the Markov bound chain.
///
/// `null_gens`/`alt_gens` are the original generators. The pair must come from
/// the θ-smoothed sets, so each original state is dominated by `1/(1−θ)` times its
/// smoothed version; that factor enters the rates as `log(1 − θ)`. Strategies are
/// enumerated as multisets of generator indices, which is exact because the test
/// is permutation invariant; the cap applies to the number of sequences `|S|ⁿ`.
pub fn adversarial_product_errors(
    null_gens: &[ClassicalWeight<f64>],
    alt_gens: &[ClassicalWeight<f64>],
    pair: &MinimizerPair,
    r: f64,
    theta: f64,
    n: usize,
) -> Result<AdversarialReport> {
    if !pair.certified {
        return Err(Error::CertificateFailed {
            side: "pair".into(),
            generator: 0,
            slack: f64::NAN,
        });
    }
    for (label, gens) in [("null", null_gens), ("alternative", alt_gens)] {
        let seqs = (gens.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if seqs > STRATEGY_CAP {
            return Err(Error::CapExceeded {
                required: usize::try_from(seqs).unwrap_or(usize::MAX),
                cap: STRATEGY_CAP as usize,
            });
        }
        if gens.is_empty() {
            return Err(Error::ShapeMismatch(format!("empty {label} generator list")));
        }
    }
    let a = pair.alpha_star;
    let (psi, c, _) = dc::psi_derivatives(&pair.rho_star, &pair.sigma_star, a)?;
    let smooth = (1.0 - theta).ln();
    let r_eff = a * c - psi + smooth;
    let h_eff = (a - 1.0) * c - psi + smooth;
    let l = llr(&pair.rho_star, &pair.sigma_star);
    let stat = |t: &Vec<usize>| t.iter().zip(&l).map(|(&k, &x)| k as f64 * x).sum::<f64>() / n as f64;
    let accepts = |t: &Vec<usize>| stat(t) >= c - TIE_TOL * (1.0 + c.abs());

    let comps_alt = compositions(n, alt_gens.len())?;
    let max_beta = comps_alt
        .par_iter()
        .map(|m| {
            product_type_distribution(alt_gens, m)
                .iter()
                .filter(|(t, _)| accepts(t))
                .map(|(_, &p)| p)
                .sum::<f64>()
        })
        .reduce(|| 0.0, f64::max);
    let comps_null = compositions(n, null_gens.len())?;
    let max_alpha = comps_null
        .par_iter()
        .map(|m| {
            product_type_distribution(null_gens, m)
                .iter()
                .filter(|(t, _)| !accepts(t))
                .map(|(_, &p)| p)
                .sum::<f64>()
        })
        .reduce(|| 0.0, f64::max);
    let beta_bound = (-(n as f64) * r_eff).exp();
    let alpha_bound = (-(n as f64) * h_eff).exp();
    let rel = 1e-12;
    Ok(AdversarialReport {
        n,
        r,
        alpha_star: a,
        c,
        theta,
        r_eff,
        h_eff,
        strategies_alt: comps_alt.len(),
        strategies_null: comps_null.len(),
        max_beta,
        beta_bound,
        max_alpha,
        alpha_bound,
        pass: max_beta <= beta_bound * (1.0 + rel) && max_alpha <= alpha_bound * (1.0 + rel),
    })
}
