//! Exact arithmetic in the projective modular group.
//!
//! Elements are integer matrices (a b; c d) with determinant 1, taken up to
//! sign. Every element is stored in a canonical representative: c > 0, or
//! c = 0 and a > 0. All entry arithmetic is checked; norms are computed in
//! i128 so that squares of any admissible i64 entries cannot wrap.

use crate::error::{Error, Result};
use num::integer::gcd;

/// Canonical representative of a projective unimodular integer matrix.
///
/// Invariants (enforced by every constructor):
/// - a*d - b*c = 1,
/// - c > 0, or c = 0 and a > 0,
/// - no entry is i64::MIN, so negation never overflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// Trace class of an element. The identity falls under Parabolic since the
/// classes are cut by |trace| alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ElementClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl std::fmt::Display for ElementClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ElementClass::Elliptic => write!(f, "elliptic"),
            ElementClass::Parabolic => write!(f, "parabolic"),
            ElementClass::Hyperbolic => write!(f, "hyperbolic"),
        }
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    /// Builds the canonical representative of (a b; c d), rejecting
    /// non-unimodular input.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a == i64::MIN || b == i64::MIN || c == i64::MIN || d == i64::MIN {
            return Err(Error::Overflow("entry magnitude"));
        }
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d, det });
        }
        Ok(if c < 0 || (c == 0 && a < 0) {
            GroupElement { a: -a, b: -b, c: -c, d: -d }
        } else {
            GroupElement { a, b, c, d }
        })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1, b: 0, c: 0, d: 1 }
    }

    /// The order-2 rotation z -> -1/z.
    pub fn rot2() -> Self {
        GroupElement { a: 0, b: -1, c: 1, d: 0 }
    }

    /// The unit translation z -> z + 1.
    pub fn shift() -> Self {
        GroupElement { a: 1, b: 1, c: 0, d: 1 }
    }

    /// Matrix product, canonicalized. Errors on i64 overflow.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let m = |x: i64, y: i64| x.checked_mul(y).ok_or(Error::Overflow("compose"));
        let s = |x: i64, y: i64| x.checked_add(y).ok_or(Error::Overflow("compose"));
        let a = s(m(self.a, other.a)?, m(self.b, other.c)?)?;
        let b = s(m(self.a, other.b)?, m(self.b, other.d)?)?;
        let c = s(m(self.c, other.a)?, m(self.d, other.c)?)?;
        let d = s(m(self.c, other.b)?, m(self.d, other.d)?)?;
        GroupElement::new(a, b, c, d)
    }

    /// Adjugate; exact inverse since det = 1.
    pub fn inverse(&self) -> Self {
        // Entries are never i64::MIN, so negation is safe, and the adjugate
        // of a canonical matrix only needs re-normalization of signs.
        GroupElement::new(self.d, -self.b, -self.c, self.a)
            .expect("adjugate of unimodular matrix is unimodular")
    }

    /// f * self * f^-1.
    pub fn conjugate_by(&self, f: &Self) -> Result<Self> {
        f.compose(self)?.compose(&f.inverse())
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut n = k.unsigned_abs();
        let mut acc = GroupElement::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// |a + d|. The sign of the trace is not well defined projectively, so
    /// the nonnegative representative is returned; it is invariant under
    /// conjugation.
    pub fn trace(&self) -> i128 {
        (self.a as i128 + self.d as i128).abs()
    }

    pub fn classify(&self) -> ElementClass {
        match self.trace().cmp(&2) {
            std::cmp::Ordering::Less => ElementClass::Elliptic,
            std::cmp::Ordering::Equal => ElementClass::Parabolic,
            std::cmp::Ordering::Greater => ElementClass::Hyperbolic,
        }
    }

    /// a^2 + b^2 + c^2 + d^2 in i128 (cannot overflow for i64 entries).
    pub fn frobenius_norm_sq(&self) -> i128 {
        let sq = |x: i64| x as i128 * x as i128;
        sq(self.a) + sq(self.b) + sq(self.c) + sq(self.d)
    }
}

/// Entries must satisfy entry^2 <= M, so M beyond this cannot be enumerated
/// in 64-bit entries.
pub const MAX_NORM_BOUND: i128 = (i64::MAX as i128) * (i64::MAX as i128);

fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    (n as u128).isqrt() as i128
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// x*d + y*c = gcd(d, c), extended Euclid.
fn egcd(d: i128, c: i128) -> (i128, i128, i128) {
    if c == 0 {
        (d.abs(), d.signum(), 0)
    } else {
        let (g, x, y) = egcd(c, d.rem_euclid(c));
        (g, y, x - d.div_euclid(c) * y)
    }
}

/// Visits every canonical element with Frobenius norm squared <= m, grouped
/// by bottom row. Emission order is unspecified; sort the collected output
/// when a canonical order is needed.
///
/// For each coprime bottom row (c, d) with c >= 0 the top rows form the
/// one-parameter family (a0 + k*c, b0 + k*d); the admissible k are cut out
/// exactly with integer arithmetic.
pub fn scan_norm_ball<F: FnMut(GroupElement)>(m: i128, mut emit: F) -> Result<()> {
    scan_norm_ball_rows(m, 0, 1, &mut emit)
}

/// Same scan restricted to bottom rows with c = c_start, c_start + stride, ...
/// Lets callers partition work by residue class of c.
fn scan_norm_ball_rows<F: FnMut(GroupElement)>(
    m: i128,
    c_start: i64,
    stride: i64,
    emit: &mut F,
) -> Result<()> {
    if m > MAX_NORM_BOUND {
        return Err(Error::Overflow("norm bound"));
    }
    if m < 2 {
        return Ok(());
    }
    let c_max = isqrt_i128(m) as i64;
    let mut c = c_start;
    if c == 0 {
        // c = 0 forces a = d = 1 in canonical form; b is free.
        let k_max = isqrt_i128(m - 2) as i64;
        for b in -k_max..=k_max {
            emit(GroupElement { a: 1, b, c: 0, d: 1 });
        }
        c = stride;
    }
    while c <= c_max {
        let cc = c as i128 * c as i128;
        let d_max = isqrt_i128(m - cc) as i64;
        for d in -d_max..=d_max {
            if gcd(c, d.abs()) != 1 {
                continue;
            }
            let (g, x, y) = egcd(d as i128, c as i128);
            debug_assert_eq!(g, 1);
            let a0 = x;
            let b0 = -y;
            let a2 = cc + d as i128 * d as i128;
            let s = m - a2;
            let bq = a0 * c as i128 + b0 * d as i128;
            let cq = a0 * a0 + b0 * b0 - s;
            let disc = bq * bq - a2 * cq;
            if disc < 0 {
                continue;
            }
            let root = isqrt_i128(disc);
            let ok = |k: i128| a2 * k * k + 2 * bq * k + cq <= 0;
            let lo0 = div_floor_i128(-bq - root, a2);
            let hi0 = div_floor_i128(-bq + root, a2);
            let mut klo = lo0 - 1;
            while klo <= hi0 + 1 && !ok(klo) {
                klo += 1;
            }
            let mut khi = hi0 + 1;
            while khi >= klo && !ok(khi) {
                khi -= 1;
            }
            for k in klo..=khi {
                let a = a0 + k * c as i128;
                let b = b0 + k * d as i128;
                emit(GroupElement { a: a as i64, b: b as i64, c, d });
            }
        }
        c += stride;
    }
    Ok(())
}

/// All canonical elements with Frobenius norm squared <= m, sorted
/// lexicographically by (a, b, c, d). Empty for m < 2.
pub fn enumerate_norm_ball(m: i128) -> Result<Vec<GroupElement>> {
    enumerate_norm_ball_threaded(m, 1)
}

/// Same output as `enumerate_norm_ball`, with bottom rows partitioned over
/// `workers` threads by c mod workers. The result is identical for every
/// worker count.
pub fn enumerate_norm_ball_threaded(m: i128, workers: usize) -> Result<Vec<GroupElement>> {
    let workers = workers.max(1);
    let mut all = if workers == 1 {
        let mut out = Vec::new();
        scan_norm_ball(m, |g| out.push(g))?;
        out
    } else {
        let chunks: Vec<Result<Vec<GroupElement>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        scan_norm_ball_rows(m, w as i64, workers as i64, &mut |g| out.push(g))?;
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        let mut out = Vec::new();
        for chunk in chunks {
            out.extend(chunk?);
        }
        out
    };
    all.sort_unstable();
    debug_assert!(all.windows(2).all(|w| w[0] != w[1]));
    Ok(all)
}
