//! Naive Hecke-algebra construction of the canonical basis, used as an
//! independent cross-check of the Kazhdan-Lusztig recursion.
//!
//! Elements are expanded over the standard basis `T_w` with Laurent
//! coefficients in `v` (`q = v^2`). The canonical basis element
//! `C'_w = v^{-l(w)} sum_y P_{y,w}(v^2) T_y` is built bottom-up: multiply
//! `C'_s C'_u` for `w = s u` and subtract the lower canonical terms read
//! off the appropriate v-coefficients. This path shares no memoization
//! with the recursion in `kl`.

use crate::coxeter::{CoxeterElement, CoxeterSystem};
use crate::error::Result;
use crate::kl::KLPoly;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;

/// Laurent polynomial in v over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    /// coefficient of v^k
    terms: HashMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(k: i64, c: BigInt) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Laurent { terms }
    }

    pub fn one() -> Self {
        Laurent::monomial(0, BigInt::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_assign(&mut self, other: &Laurent) {
        for (k, c) in &other.terms {
            let entry = self.terms.entry(*k).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn sub_assign(&mut self, other: &Laurent) {
        for (k, c) in &other.terms {
            let entry = self.terms.entry(*k).or_insert_with(BigInt::zero);
            *entry -= c;
            if entry.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let entry = out.terms.entry(i + j).or_insert_with(BigInt::zero);
                *entry += a * b;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(i, c)| (i + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }
}

/// Element of the Hecke algebra over the standard basis.
#[derive(Debug, Clone, Default)]
pub struct HeckeElt {
    pub terms: HashMap<CoxeterElement, Laurent>,
}

impl HeckeElt {
    fn unit(w: CoxeterElement) -> Self {
        let mut terms = HashMap::new();
        terms.insert(w, Laurent::one());
        HeckeElt { terms }
    }

    fn add_term(&mut self, w: CoxeterElement, f: Laurent) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_default();
        entry.add_assign(&f);
        if entry.is_zero() {
            let dead: Vec<CoxeterElement> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }
}

/// Canonical-basis computer with its own memo (independent of `kl`).
pub struct HeckeOracle<'a> {
    cox: &'a CoxeterSystem,
    basis: HashMap<Vec<u8>, HeckeElt>,
}

impl<'a> HeckeOracle<'a> {
    pub fn new(cox: &'a CoxeterSystem) -> Self {
        HeckeOracle {
            cox,
            basis: HashMap::new(),
        }
    }

    /// Left multiplication by `C'_s = v^{-1}(T_e + T_s)`.
    fn cs_times(&self, s: usize, h: &HeckeElt) -> Result<HeckeElt> {
        let cox = self.cox;
        let sgen = cox.generator(s);
        let mut out = HeckeElt::default();
        for (w, f) in &h.terms {
            let sw = cox.multiply(&sgen, w)?;
            if sw.length() > w.length() {
                // v^{-1}(T_sw + T_w) f
                out.add_term(sw, f.shift(-1));
                out.add_term(w.clone(), f.shift(-1));
            } else {
                // v^{-1}((q-1)T_w + q T_sw + T_w) f = v (T_w + T_sw) f
                out.add_term(w.clone(), f.shift(1));
                out.add_term(sw, f.shift(1));
            }
        }
        Ok(out)
    }

    /// The canonical basis element `C'_w`.
    pub fn canonical(&mut self, w: &CoxeterElement) -> Result<HeckeElt> {
        if let Some(h) = self.basis.get(&w.word) {
            return Ok(h.clone());
        }
        let cox = self.cox;
        let h = if w.is_identity() {
            HeckeElt::unit(cox.identity())
        } else {
            let s = w.word[0] as usize;
            let u = cox.multiply(&cox.generator(s), w)?;
            let cu = self.canonical(&u)?;
            let mut x = self.cs_times(s, &cu)?;
            // subtract mu(z, u) C'_z over the z < u with s z < z; with
            // C'_u = v^{-l(u)} sum_z P_{z,u}(v^2) T_z the mu-coefficient is
            // the v^{-l(z)-1} coefficient of the T_z term
            let lower: Vec<(CoxeterElement, BigInt)> = cu
                .terms
                .iter()
                .filter_map(|(z, f)| {
                    let sz = cox.multiply(&cox.generator(s), z).ok()?;
                    if sz.length() < z.length() {
                        let m = f.coeff(-(z.length() as i64) - 1);
                        if m.is_zero() {
                            None
                        } else {
                            Some((z.clone(), m))
                        }
                    } else {
                        None
                    }
                })
                .collect();
            for (z, m) in lower {
                let cz = self.canonical(&z)?;
                for (u, f) in &cz.terms {
                    let mut neg = HeckeElt::default();
                    neg.add_term(u.clone(), f.scale(&m));
                    for (k, v) in neg.terms {
                        let mut minus = Laurent::zero();
                        minus.sub_assign(&v);
                        x.add_term(k, minus);
                    }
                }
            }
            x
        };
        self.basis.insert(w.word.clone(), h.clone());
        Ok(h)
    }

    /// `P_{y,w}` read off the canonical basis.
    pub fn kl_polynomial(&mut self, y: &CoxeterElement, w: &CoxeterElement) -> Result<KLPoly> {
        let cw = self.canonical(w)?;
        let Some(f) = cw.terms.get(y) else {
            return Ok(KLPoly::zero());
        };
        // T_y coefficient is v^{-l(w)} P_{y,w}(v^2)
        let shifted = f.shift(w.length() as i64);
        let mut max_pow = 0i64;
        for (&k, c) in &shifted.terms {
            assert!(k >= 0 && k % 2 == 0, "canonical coefficient is not polynomial in q");
            if !c.is_zero() {
                max_pow = max_pow.max(k / 2);
            }
        }
        let coeffs = (0..=max_pow).map(|d| shifted.coeff(2 * d)).collect::<Vec<_>>();
        let mut p = KLPoly { coeffs };
        while p.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.coeffs.pop();
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cartan::CartanData;
    use crate::base::weight::Weight;
    use crate::integral::compute_integral_system;
    use crate::kl::{kl_polynomial, KLCache};
    use std::sync::Arc;

    #[test]
    fn oracle_matches_recursion_dihedral() {
        let c = Arc::new(CartanData::from_type("A1~").unwrap());
        let sys = compute_integral_system(&Weight::zero(&c), &c).unwrap();
        let cox = CoxeterSystem::new(&sys);
        let cache = KLCache::new();
        let mut oracle = HeckeOracle::new(&cox);
        let ball: Vec<_> = cox.enumerate_ball(5).into_iter().flatten().collect();
        for w in &ball {
            for y in &ball {
                assert_eq!(
                    oracle.kl_polynomial(y, w).unwrap(),
                    kl_polynomial(&cox, &cache, y, w).unwrap(),
                    "mismatch at {:?}, {:?}",
                    y.word,
                    w.word
                );
            }
        }
    }

    #[test]
    fn oracle_matches_recursion_finite_a2() {
        let c = Arc::new(CartanData::from_type("A2").unwrap());
        let sys = compute_integral_system(&Weight::zero(&c), &c).unwrap();
        let cox = CoxeterSystem::new(&sys);
        let cache = KLCache::new();
        let mut oracle = HeckeOracle::new(&cox);
        let ball: Vec<_> = cox.enumerate_ball(3).into_iter().flatten().collect();
        assert_eq!(ball.len(), 6);
        for w in &ball {
            for y in &ball {
                assert_eq!(
                    oracle.kl_polynomial(y, w).unwrap(),
                    kl_polynomial(&cox, &cache, y, w).unwrap()
                );
            }
        }
    }
}
