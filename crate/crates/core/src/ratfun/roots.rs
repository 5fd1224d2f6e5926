//! Real root isolation for integer polynomials.
//!
//! Sturm sequences over the square-free part, evaluated exactly at dyadic
//! rationals, isolate every distinct real root; isolated roots are then
//! bisected down to `f64` resolution.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IntPoly, RatFunError};

const MAX_BISECTIONS: usize = 4096;

/// The point `m / 2^e`.
#[derive(Debug, Clone)]
struct Dyadic {
    m: BigInt,
    e: u32,
}

impl Dyadic {
    fn with_exponent(&self, e: u32) -> BigInt {
        debug_assert!(e >= self.e);
        &self.m << (e - self.e) as usize
    }

    /// `lo + (hi - lo) · num / 2^bits`.
    fn between(lo: &Dyadic, hi: &Dyadic, num: u64, bits: u32) -> Dyadic {
        let e = lo.e.max(hi.e);
        let (a, b) = (lo.with_exponent(e), hi.with_exponent(e));
        let m = (&a << bits as usize) + (b - &a) * BigInt::from(num);
        Dyadic { m, e: e + bits }.normalized()
    }

    fn normalized(mut self) -> Dyadic {
        while self.e > 0 && !self.m.is_zero() && (&self.m & BigInt::one()).is_zero() {
            self.m >>= 1;
            self.e -= 1;
        }
        if self.m.is_zero() {
            self.e = 0;
        }
        self
    }

    fn to_f64(&self) -> f64 {
        let bits = self.m.bits();
        let (m, shift) = if bits > 96 {
            let s = bits - 96;
            (&self.m >> s as usize, s as i64)
        } else {
            (self.m.clone(), 0)
        };
        m.to_f64().unwrap_or(f64::NAN) * 2f64.powi((shift - self.e as i64) as i32)
    }
}

fn sign_at(p: &IntPoly, x: &Dyadic) -> Ordering {
    p.sign_at_dyadic(&x.m, x.e)
}

fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let (a, b) = (&chain[chain.len() - 2], &chain[chain.len() - 1]);
        if b.degree().is_none_or(|d| d == 0) {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // pseudo_rem multiplies by lc(b)^(δ+1); undo a negative factor.
        let delta = a.degree().unwrap_or(0) + 1 - b.degree().unwrap_or(0);
        if b.leading().is_some_and(Signed::is_negative) && delta % 2 == 1 {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        let next = -&r;
        let content = next.content();
        chain.push(next.div_scalar(&content));
    }
    chain
}

fn sign_changes(chain: &[IntPoly], x: &Dyadic) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for p in chain {
        let s = sign_at(p, x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Distinct real roots of `p`, ascending.
pub fn real_roots(p: &IntPoly) -> Result<Vec<f64>, RatFunError> {
    let Some(deg) = p.degree() else {
        return Err(RatFunError::RootFindingFailure(
            "the zero polynomial has every number as a root".into(),
        ));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let g = p.gcd(&p.derivative());
    let sqfree = p
        .div_exact(&g)
        .ok_or_else(|| RatFunError::RootFindingFailure("square-free division failed".into()))?
        .primitive_part();
    let chain = sturm_chain(&sqfree);

    // Cauchy bound: every root has |x| < 1 + max|a_i / a_n| <= 2^bound_bits.
    let lead = sqfree.leading().expect("nonzero").abs();
    let max_ratio = sqfree
        .coeffs()
        .iter()
        .map(|c| (c.abs() + &lead - BigInt::one()) / &lead)
        .max()
        .unwrap_or_default();
    let bound_bits = (max_ratio + BigInt::from(2)).bits() as usize;
    let bound = BigInt::one() << bound_bits;
    let lo = Dyadic { m: -&bound, e: 0 };
    let hi = Dyadic { m: bound, e: 0 };

    let mut isolated = Vec::new();
    let mut stack = vec![(
        lo.clone(),
        hi.clone(),
        sign_changes(&chain, &lo),
        sign_changes(&chain, &hi),
    )];
    let mut splits = 0;
    while let Some((a, b, va, vb)) = stack.pop() {
        let count = va.saturating_sub(vb);
        if count == 0 {
            continue;
        }
        if count == 1 {
            isolated.push((a, b));
            continue;
        }
        splits += 1;
        if splits > MAX_BISECTIONS {
            return Err(RatFunError::RootFindingFailure(
                "root isolation did not terminate".into(),
            ));
        }
        let mid = split_point(&sqfree, &a, &b)?;
        let vm = sign_changes(&chain, &mid);
        stack.push((mid.clone(), b, vm, vb));
        stack.push((a, mid, va, vm));
    }

    let mut roots = isolated
        .into_iter()
        .map(|(a, b)| refine(&sqfree, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

// Midpoint, nudged off any exact root so interval endpoints stay non-roots.
fn split_point(p: &IntPoly, a: &Dyadic, b: &Dyadic) -> Result<Dyadic, RatFunError> {
    for bits in 1..64u32 {
        let num = (1u64 << bits) / 2 + u64::from(bits > 1);
        let mid = Dyadic::between(a, b, num, bits);
        if sign_at(p, &mid) != Ordering::Equal {
            return Ok(mid);
        }
    }
    Err(RatFunError::RootFindingFailure("could not place a split point".into()))
}

fn refine(p: &IntPoly, mut a: Dyadic, mut b: Dyadic) -> Result<f64, RatFunError> {
    let sa = sign_at(p, &a);
    for _ in 0..MAX_BISECTIONS {
        let (fa, fb) = (a.to_f64(), b.to_f64());
        let mid = Dyadic::between(&a, &b, 1, 1);
        let fm = mid.to_f64();
        if fm == fa || fm == fb || mid.e > 240 {
            return Ok(fm);
        }
        match sign_at(p, &mid) {
            Ordering::Equal => return Ok(fm),
            s if s == sa => a = mid,
            _ => b = mid,
        }
    }
    Err(RatFunError::RootFindingFailure("bisection did not converge".into()))
}
