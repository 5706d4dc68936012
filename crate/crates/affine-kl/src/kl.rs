//! Kazhdan-Lusztig polynomials, mu-coefficients, and the inverse family.
//!
//! `P_{y,w}` is computed by the classical descent recursion over Bruhat
//! intervals, memoized on normal-form pairs. The inverse polynomials
//! `Q_{x,y}` are obtained by exact triangular inversion of the defining
//! alternating-sum identity over the finite interval `[x, z]`; no closed
//! form is ever used. Coefficients are arbitrary-precision integers.

use crate::coxeter::{CoxeterElement, CoxeterSystem};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Polynomial in q with integer coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLPoly {
    pub coeffs: Vec<BigInt>,
}

impl KLPoly {
    pub fn zero() -> Self {
        KLPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        KLPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &KLPoly) -> KLPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        KLPoly { coeffs }.normalize()
    }

    pub fn sub(&self, other: &KLPoly) -> KLPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        KLPoly { coeffs }.normalize()
    }

    pub fn mul(&self, other: &KLPoly) -> KLPoly {
        if self.is_zero() || other.is_zero() {
            return KLPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        KLPoly { coeffs }.normalize()
    }

    pub fn shift(&self, k: usize) -> KLPoly {
        if self.is_zero() {
            return KLPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        KLPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> KLPoly {
        KLPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
        .normalize()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Text form `c0 + c1*q + c2*q^2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{k}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .coeffs
            .iter()
            .map(|c| i64::try_from(c).expect("coefficient fits in i64"))
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for KLPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

type WordPair = (Vec<u8>, Vec<u8>);

/// Memo table for P and Q, keyed by normal-form pairs. Concurrent readers
/// share the table; writers are serialized by the mutex, and entries are
/// deterministic so overlapping computations agree.
#[derive(Default)]
pub struct KLCache {
    p_memo: Mutex<HashMap<WordPair, KLPoly>>,
    q_memo: Mutex<HashMap<WordPair, KLPoly>>,
}

impl KLCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn p_entries(&self) -> Vec<(WordPair, KLPoly)> {
        self.p_memo
            .lock()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn preload_p(&self, entries: Vec<(WordPair, KLPoly)>) {
        let mut memo = self.p_memo.lock().unwrap();
        for (k, v) in entries {
            memo.insert(k, v);
        }
    }
}

/// The Kazhdan-Lusztig polynomial `P_{y,w}`.
pub fn kl_polynomial(
    cox: &CoxeterSystem,
    cache: &KLCache,
    y: &CoxeterElement,
    w: &CoxeterElement,
) -> Result<KLPoly> {
    if !cox.bruhat_leq(y, w)? {
        return Ok(KLPoly::zero());
    }
    kl_inner(cox, cache, y, w)
}

fn kl_inner(
    cox: &CoxeterSystem,
    cache: &KLCache,
    y: &CoxeterElement,
    w: &CoxeterElement,
) -> Result<KLPoly> {
    // callers guarantee y <= w
    if y == w {
        return Ok(KLPoly::one());
    }
    let key = (y.word.clone(), w.word.clone());
    if let Some(p) = cache.p_memo.lock().unwrap().get(&key) {
        return Ok(p.clone());
    }

    // descent recursion at the least left descent s of w, v = s w
    let s = w.word[0] as usize;
    let sgen = cox.generator(s);
    let v = cox.multiply(&sgen, w)?;
    let sy = cox.multiply(&sgen, y)?;
    let c = usize::from(sy.length() < y.length());

    let p_sy_v = kl_polynomial(cox, cache, &sy, &v)?;
    let p_y_v = kl_polynomial(cox, cache, y, &v)?;
    let mut p = p_sy_v.shift(1 - c).add(&p_y_v.shift(c));

    for z in cox.enumerate_interval(y, &v)? {
        let sz = cox.multiply(&sgen, &z)?;
        if sz.length() > z.length() {
            continue;
        }
        let m = mu_inner(cox, cache, &z, &v)?;
        if m.is_zero() {
            continue;
        }
        let gap = w.length() - z.length();
        debug_assert!(gap % 2 == 0, "mu term with odd total gap");
        let p_y_z = kl_inner(cox, cache, y, &z)?;
        p = p.sub(&p_y_z.scale(&m).shift(gap / 2));
    }

    // degree bound for strict pairs
    debug_assert!(
        p.degree().map(|d| 2 * d + 1 <= w.length() - y.length()).unwrap_or(true),
        "KL degree bound violated for {:?} <= {:?}: {}",
        y.word,
        w.word,
        p
    );
    cache.p_memo.lock().unwrap().insert(key, p.clone());
    Ok(p)
}

/// The mu-coefficient: coefficient of `q^((l(w)-l(y)-1)/2)` in `P_{y,w}`,
/// zero when the exponent is not an integer or `y` is not below `w`.
pub fn mu(
    cox: &CoxeterSystem,
    cache: &KLCache,
    y: &CoxeterElement,
    w: &CoxeterElement,
) -> Result<BigInt> {
    if !cox.bruhat_leq(y, w)? || y == w {
        return Ok(BigInt::zero());
    }
    mu_inner(cox, cache, y, w)
}

fn mu_inner(
    cox: &CoxeterSystem,
    cache: &KLCache,
    y: &CoxeterElement,
    w: &CoxeterElement,
) -> Result<BigInt> {
    let gap = w.length() - y.length();
    if gap % 2 == 0 {
        return Ok(BigInt::zero());
    }
    let p = kl_inner(cox, cache, y, w)?;
    Ok(p.coeff((gap - 1) / 2))
}

/// The inverse Kazhdan-Lusztig polynomial `Q_{x,z}`, defined by
/// `sum_{x <= y <= z} (-1)^(l(y)-l(x)) Q_{x,y} P_{y,z} = delta_{x,z}`
/// and computed by triangular solve over the interval.
pub fn inverse_kl(
    cox: &CoxeterSystem,
    cache: &KLCache,
    x: &CoxeterElement,
    z: &CoxeterElement,
) -> Result<KLPoly> {
    if !cox.bruhat_leq(x, z)? {
        return Err(Error::NotComparable);
    }
    inverse_inner(cox, cache, x, z)
}

fn inverse_inner(
    cox: &CoxeterSystem,
    cache: &KLCache,
    x: &CoxeterElement,
    z: &CoxeterElement,
) -> Result<KLPoly> {
    if x == z {
        return Ok(KLPoly::one());
    }
    let key = (x.word.clone(), z.word.clone());
    if let Some(q) = cache.q_memo.lock().unwrap().get(&key) {
        return Ok(q.clone());
    }
    // 0 = sum_{x <= y <= z} (-1)^(l(y)-l(x)) Q_{x,y} P_{y,z}; solve for y = z
    let mut acc = KLPoly::zero();
    for y in cox.enumerate_interval(x, z)? {
        if y == *z {
            continue;
        }
        let q_xy = inverse_inner(cox, cache, x, &y)?;
        let p_yz = kl_polynomial(cox, cache, &y, z)?;
        let term = q_xy.mul(&p_yz);
        if (y.length() - x.length()) % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    let sign_zx = (z.length() - x.length()) % 2 == 0;
    let q = if sign_zx {
        KLPoly::zero().sub(&acc)
    } else {
        acc
    };
    cache.q_memo.lock().unwrap().insert(key, q.clone());
    Ok(q)
}

/// Residual of the defining identity at a pair; zero exactly when the P and
/// Q families are mutually inverse over `[x, z]`.
pub fn inversion_residual(
    cox: &CoxeterSystem,
    cache: &KLCache,
    x: &CoxeterElement,
    z: &CoxeterElement,
) -> Result<KLPoly> {
    let mut acc = KLPoly::zero();
    for y in cox.enumerate_interval(x, z)? {
        let q_xy = inverse_kl(cox, cache, x, &y)?;
        let p_yz = kl_polynomial(cox, cache, &y, z)?;
        let term = q_xy.mul(&p_yz);
        if (y.length() - x.length()) % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    if x == z {
        acc = acc.sub(&KLPoly::one());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cartan::CartanData;
    use crate::base::weight::Weight;
    use crate::integral::compute_integral_system;
    use std::sync::Arc;

    fn dihedral() -> CoxeterSystem {
        let c = Arc::new(CartanData::from_type("A1~").unwrap());
        let sys = compute_integral_system(&Weight::zero(&c), &c).unwrap();
        CoxeterSystem::new(&sys)
    }

    #[test]
    fn kl_diagonal_and_incomparable() {
        let cox = dihedral();
        let cache = KLCache::new();
        let w = cox.element_from_word(&[0, 1, 0]);
        assert_eq!(kl_polynomial(&cox, &cache, &w, &w).unwrap(), KLPoly::one());
        let s0s1 = cox.element_from_word(&[0, 1]);
        let s1s0 = cox.element_from_word(&[1, 0]);
        assert!(kl_polynomial(&cox, &cache, &s0s1, &s1s0).unwrap().is_zero());
    }

    #[test]
    fn kl_trivial_in_dihedral() {
        // every P_{y,w} with y <= w is 1 in the infinite dihedral group
        let cox = dihedral();
        let cache = KLCache::new();
        let ball: Vec<_> = cox.enumerate_ball(8).into_iter().flatten().collect();
        for y in &ball {
            for w in &ball {
                if cox.bruhat_leq(y, w).unwrap() {
                    assert_eq!(
                        kl_polynomial(&cox, &cache, y, w).unwrap(),
                        KLPoly::one(),
                        "P for {:?} <= {:?}",
                        y.word,
                        w.word
                    );
                }
            }
        }
    }

    #[test]
    fn mu_values_dihedral() {
        let cox = dihedral();
        let cache = KLCache::new();
        let e = cox.identity();
        let s0 = cox.generator(0);
        let s0s1 = cox.element_from_word(&[0, 1]);
        assert_eq!(mu(&cox, &cache, &e, &s0).unwrap(), BigInt::one());
        assert_eq!(mu(&cox, &cache, &e, &s0s1).unwrap(), BigInt::zero());
        assert_eq!(mu(&cox, &cache, &s0s1, &s0).unwrap(), BigInt::zero());
    }

    #[test]
    fn inverse_kl_dihedral() {
        let cox = dihedral();
        let cache = KLCache::new();
        let e = cox.identity();
        let s0 = cox.generator(0);
        assert_eq!(inverse_kl(&cox, &cache, &e, &e).unwrap(), KLPoly::one());
        assert_eq!(inverse_kl(&cox, &cache, &e, &s0).unwrap(), KLPoly::one());
        let s1s0 = cox.element_from_word(&[1, 0]);
        let s0s1 = cox.element_from_word(&[0, 1]);
        assert_eq!(
            inverse_kl(&cox, &cache, &s0s1, &s1s0).unwrap_err(),
            Error::NotComparable
        );
    }

    #[test]
    fn inversion_identity_on_ball() {
        let cox = dihedral();
        let cache = KLCache::new();
        let ball: Vec<_> = cox.enumerate_ball(6).into_iter().flatten().collect();
        for x in &ball {
            for z in &ball {
                if cox.bruhat_leq(x, z).unwrap() {
                    let r = inversion_residual(&cox, &cache, x, z).unwrap();
                    assert!(r.is_zero(), "residual {:?} at {:?},{:?}", r, x.word, z.word);
                }
            }
        }
    }

    #[test]
    fn descent_compatibility_random_triples() {
        // P_{y,w} = P_{sy,w} when sy < y <= w and sw < w
        let cox = dihedral();
        let cache = KLCache::new();
        let ball: Vec<_> = cox.enumerate_ball(7).into_iter().flatten().collect();
        for w in &ball {
            if w.is_identity() {
                continue;
            }
            for s in cox.descents_left(w).unwrap() {
                let sgen = cox.generator(s);
                for y in &ball {
                    let sy = cox.multiply(&sgen, y).unwrap();
                    if sy.length() < y.length() && cox.bruhat_leq(y, w).unwrap() {
                        assert_eq!(
                            kl_polynomial(&cox, &cache, y, w).unwrap(),
                            kl_polynomial(&cox, &cache, &sy, w).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cache_transparency() {
        let cox = dihedral();
        let warm = KLCache::new();
        let w = cox.element_from_word(&[0, 1, 0, 1]);
        let e = cox.identity();
        let first = kl_polynomial(&cox, &warm, &e, &w).unwrap();
        let second = kl_polynomial(&cox, &warm, &e, &w).unwrap();
        let cold = kl_polynomial(&cox, &KLCache::new(), &e, &w).unwrap();
        assert_eq!(first, second);
        assert_eq!(first, cold);
    }

    #[test]
    fn poly_text_forms() {
        assert_eq!(KLPoly::zero().to_text(), "0");
        assert_eq!(KLPoly::one().to_text(), "1");
        let p = KLPoly {
            coeffs: vec![BigInt::from(1), BigInt::from(0), BigInt::from(2)],
        };
        assert_eq!(p.to_text(), "1 + 0*q + 2*q^2");
        assert_eq!(p.eval_at_one(), BigInt::from(3));
    }
}
