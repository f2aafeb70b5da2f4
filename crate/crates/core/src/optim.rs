//! One-dimensional solvers shared by the divergence and exponent code.

use crate::scalar::Real;

/// Result of a bracketed maximization.
#[derive(Debug, Clone, Copy)]
pub struct Argmax<F> {
    pub x: F,
    pub value: F,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// The endpoints are evaluated too, so a maximum sitting on the boundary is
/// returned exactly.
pub fn golden_max<F: Real>(mut f: impl FnMut(F) -> F, a: F, b: F, tol: F) -> Argmax<F> {
    let invphi = F::c(0.618_033_988_749_894_8);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - invphi * (hi - lo);
    let mut x2 = lo + invphi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while (hi - lo) > tol && iters < 400 {
        iters += 1;
        if f1 < f2 || (f1.is_nan() && !f2.is_nan()) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 {
        Argmax { x: x1, value: f1 }
    } else {
        Argmax { x: x2, value: f2 }
    };
    for x in [a, b] {
        let v = f(x);
        if v > best.value {
            best = Argmax { x, value: v };
        }
    }
    best
}

/// Golden-section minimization; thin wrapper over [`golden_max`].
pub fn golden_min<F: Real>(mut f: impl FnMut(F) -> F, a: F, b: F, tol: F) -> Argmax<F> {
    let r = golden_max(|x| -f(x), a, b, tol);
    Argmax {
        x: r.x,
        value: -r.value,
    }
}

/// Bisection for a sign change of `g` on `[a, b]`; `g(a)` and `g(b)` must differ in sign.
/// Returns the midpoint of the final bracket.
pub fn bisect<F: Real>(mut g: impl FnMut(F) -> F, a: F, b: F, xtol: F, max_iter: usize) -> Option<F> {
    let (mut lo, mut hi) = (a, b);
    let glo = g(lo);
    let ghi = g(hi);
    if glo == F::zero() {
        return Some(lo);
    }
    if ghi == F::zero() {
        return Some(hi);
    }
    if (glo > F::zero()) == (ghi > F::zero()) {
        return None;
    }
    let lo_pos = glo > F::zero();
    for _ in 0..max_iter {
        let mid = lo + (hi - lo) / F::c(2.0);
        if mid <= lo || mid >= hi || (hi - lo) <= xtol {
            break;
        }
        let gm = g(mid);
        if gm == F::zero() {
            return Some(mid);
        }
        if (gm > F::zero()) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo + (hi - lo) / F::c(2.0))
}

/// Maximize a concave `f` on `[a, ∞)` by doubling the bracket until the
/// function decreases, then golden-section. `cap` bounds the search.
pub fn concave_max_halfline(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    cap: f64,
    tol: f64,
) -> Argmax<f64> {
    let mut step = 1.0;
    let mut prev = f(a);
    let mut hi = a + step;
    let mut lo = a;
    loop {
        let v = f(hi);
        if v < prev || hi >= cap {
            break;
        }
        prev = v;
        lo = (hi - step).max(a);
        step *= 2.0;
        hi = (a + step).min(cap);
    }
    golden_max(&mut f, lo, hi, tol * (1.0 + hi.abs()))
}
