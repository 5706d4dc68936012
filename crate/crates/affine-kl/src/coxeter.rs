//! The integral Weyl group as an explicit Coxeter group.
//!
//! Elements carry both a ShortLex-minimal reduced word over the simple
//! reflections of the integral system and the exact integer matrix of
//! their action on the root lattice. The matrix gives O(1) equality and
//! hashing (the ambient Weyl group acts faithfully on the root lattice);
//! the word gives length, descents and Bruhat subword structure. Normal
//! forms are recovered from matrices alone by stripping the least left
//! descent, so multiplication never needs a relation table.

use crate::base::cartan::CartanData;
use crate::base::root::{is_positive_vec, Root};
use crate::base::weight::Weight;
use crate::error::{Error, Result};
use crate::integral::{classify_chamber, ChamberClass, IntegralSystem, ProgressionRange};
use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static SYSTEM_COUNTER: AtomicU64 = AtomicU64::new(1);

/// Square integer matrix acting on root-lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub n: usize,
    pub a: Vec<i64>,
}

impl IntMat {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IntMat { n, a }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        let n = self.n;
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] += x * other.at(k, j);
                }
            }
        }
        IntMat { n, a }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat::identity(self.n)
    }
}

/// An element of the integral Weyl group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterElement {
    system_id: u64,
    /// ShortLex-minimal reduced word over simple-reflection indices.
    pub word: Vec<u8>,
    mat: IntMat,
    inv: IntMat,
}

impl CoxeterElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Action on a root-lattice vector.
    pub fn apply_vec(&self, v: &[i64]) -> Vec<i64> {
        self.mat.apply(v)
    }

    pub fn apply_inverse_vec(&self, v: &[i64]) -> Vec<i64> {
        self.inv.apply(v)
    }
}

/// Closed interval `[bottom, top]` in Bruhat order, grouped by length.
#[derive(Debug, Clone)]
pub struct BruhatInterval {
    pub bottom: CoxeterElement,
    pub top: CoxeterElement,
    pub by_length: Vec<Vec<CoxeterElement>>,
}

impl BruhatInterval {
    pub fn elements(&self) -> impl Iterator<Item = &CoxeterElement> {
        self.by_length.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_length.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Longest or shortest element of a coset modulo the stabilizer subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetExtreme {
    Longest,
    Shortest,
}

/// The Coxeter realization of an integral Weyl group, anchored at the
/// integral system it was built from.
pub struct CoxeterSystem {
    pub id: u64,
    pub cartan: Arc<CartanData>,
    /// Simple roots of the integral system.
    pub simples: Vec<Root>,
    /// Reflection matrices of the simple generators.
    gen_mats: Vec<IntMat>,
    /// The weight the system was computed at.
    pub lambda: Weight,
    sys: IntegralSystem,
    /// The finite stabilizer subgroup generated by the zero-pairing simples.
    w0: Vec<CoxeterElement>,
}

impl CoxeterSystem {
    pub fn new(sys: &IntegralSystem) -> CoxeterSystem {
        let cartan = sys.cartan.clone();
        let gen_mats: Vec<IntMat> = sys
            .simples
            .iter()
            .map(|alpha| reflection_matrix(&cartan, &alpha.coords))
            .collect();
        let mut cox = CoxeterSystem {
            id: SYSTEM_COUNTER.fetch_add(1, Ordering::Relaxed),
            cartan,
            simples: sys.simples.clone(),
            gen_mats,
            lambda: sys.lambda.clone(),
            sys: sys.clone(),
            w0: vec![],
        };
        cox.w0 = cox.generate_stabilizer();
        cox
    }

    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    pub fn integral_system(&self) -> &IntegralSystem {
        &self.sys
    }

    pub fn identity(&self) -> CoxeterElement {
        let n = self.cartan.nodes;
        CoxeterElement {
            system_id: self.id,
            word: vec![],
            mat: IntMat::identity(n),
            inv: IntMat::identity(n),
        }
    }

    pub fn generator(&self, i: usize) -> CoxeterElement {
        let m = self.gen_mats[i].clone();
        CoxeterElement {
            system_id: self.id,
            word: vec![i as u8],
            mat: m.clone(),
            inv: m,
        }
    }

    /// The reflection in any integral root, as a group element.
    pub fn reflection(&self, alpha: &Root) -> CoxeterElement {
        let m = reflection_matrix(&self.cartan, &alpha.coords);
        self.element_from_matrix(m)
    }

    /// Build the element for a word over generator indices
    /// (letters act right to left).
    pub fn element_from_word(&self, word: &[usize]) -> CoxeterElement {
        let mut m = IntMat::identity(self.cartan.nodes);
        for &i in word {
            m = m.mul(&self.gen_mats[i]);
        }
        self.element_from_matrix(m)
    }

    /// Recover the ShortLex normal form of the element with the given
    /// matrix by repeatedly stripping the least left descent.
    fn element_from_matrix(&self, mat: IntMat) -> CoxeterElement {
        let mut inv = invert_integer_unimodular(&mat);
        let inv_final = inv.clone();
        let mut m = mat.clone();
        let mut word: Vec<u8> = vec![];
        let mut guard = 0usize;
        while !m.is_identity() {
            let i = (0..self.rank())
                .find(|&i| {
                    // left descent: w^{-1}(alpha_i) < 0
                    !is_positive_vec(&inv.apply(&self.simples[i].coords))
                })
                .expect("non-identity element has a left descent");
            m = self.gen_mats[i].mul(&m);
            inv = inv.mul(&self.gen_mats[i]);
            word.push(i as u8);
            guard += 1;
            assert!(guard < 100_000, "normal form extraction out of control");
        }
        CoxeterElement {
            system_id: self.id,
            word,
            mat,
            inv: inv_final,
        }
    }

    fn check(&self, w: &CoxeterElement) -> Result<()> {
        if w.system_id != self.id {
            Err(Error::MixedSystems)
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, u: &CoxeterElement, v: &CoxeterElement) -> Result<CoxeterElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.element_from_matrix(u.mat.mul(&v.mat)))
    }

    pub fn inverse(&self, u: &CoxeterElement) -> Result<CoxeterElement> {
        self.check(u)?;
        Ok(self.element_from_matrix(u.inv.clone()))
    }

    pub fn length(&self, w: &CoxeterElement) -> usize {
        w.word.len()
    }

    /// Indices i with `l(s_i w) < l(w)`.
    pub fn descents_left(&self, w: &CoxeterElement) -> Result<Vec<usize>> {
        self.check(w)?;
        Ok((0..self.rank())
            .filter(|&i| !is_positive_vec(&w.inv.apply(&self.simples[i].coords)))
            .collect())
    }

    /// Indices i with `l(w s_i) < l(w)`.
    pub fn descents_right(&self, w: &CoxeterElement) -> Result<Vec<usize>> {
        self.check(w)?;
        Ok((0..self.rank())
            .filter(|&i| !is_positive_vec(&w.mat.apply(&self.simples[i].coords)))
            .collect())
    }

    /// Bruhat order by the lifting property.
    pub fn bruhat_leq(&self, y: &CoxeterElement, w: &CoxeterElement) -> Result<bool> {
        self.check(y)?;
        self.check(w)?;
        Ok(self.bruhat_leq_inner(y.clone(), w.clone()))
    }

    fn bruhat_leq_inner(&self, mut y: CoxeterElement, mut w: CoxeterElement) -> bool {
        loop {
            if y.word.len() > w.word.len() {
                return false;
            }
            if y.is_identity() || y == w {
                return true;
            }
            // lifting at the least left descent of w
            let i = w.word[0] as usize;
            let s = &self.gen_mats[i];
            let sy_is_shorter = !is_positive_vec(&y.inv.apply(&self.simples[i].coords));
            w = self.element_from_matrix(s.mul(&w.mat));
            if sy_is_shorter {
                y = self.element_from_matrix(s.mul(&y.mat));
            }
        }
    }

    /// The shifted action `w o lambda` through the reduced word.
    pub fn shifted_action(&self, w: &CoxeterElement, lambda: &Weight) -> Result<Weight> {
        self.check(w)?;
        let roots: Vec<Root> = w.word.iter().map(|&i| self.simples[i as usize].clone()).collect();
        crate::base::root::shifted_action(&self.cartan, &roots, lambda)
    }

    /// Height of `lambda - w o lambda`, a root-lattice vector along the orbit.
    pub fn orbit_drop(&self, w: &CoxeterElement, lambda: &Weight) -> Result<i64> {
        let moved = self.shifted_action(w, lambda)?;
        let diff = lambda
            .diff_as_root(&self.cartan, &moved)
            .expect("orbit difference lies in the root lattice");
        Ok(diff.iter().sum::<i64>().abs())
    }

    fn generate_stabilizer(&self) -> Vec<CoxeterElement> {
        let gens: Vec<CoxeterElement> = self
            .sys
            .simples0
            .iter()
            .map(|beta| self.reflection(beta))
            .collect();
        let mut seen: HashSet<CoxeterElement> = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.identity());
        while let Some(w) = queue.pop_front() {
            if !seen.insert(w.clone()) {
                continue;
            }
            for g in &gens {
                let next = self.element_from_matrix(w.mat.mul(&g.mat));
                if !seen.contains(&next) {
                    queue.push_back(next);
                }
            }
            assert!(seen.len() < 1_000_000, "stabilizer subgroup is not finite");
        }
        let mut out: Vec<CoxeterElement> = seen.into_iter().collect();
        out.sort_by_key(|w| (w.word.len(), w.word.clone()));
        out
    }

    /// The finite stabilizer subgroup `{w : w o lambda = lambda}`.
    pub fn stabilizer(&self) -> &[CoxeterElement] {
        &self.w0
    }

    /// The unique longest or shortest element of the coset `w W_0`.
    pub fn coset_extreme(&self, w: &CoxeterElement, mode: CosetExtreme) -> Result<CoxeterElement> {
        self.check(w)?;
        let mut best: Option<CoxeterElement> = None;
        let mut tie = false;
        for u in &self.w0 {
            let cand = self.element_from_matrix(w.mat.mul(&u.mat));
            match &best {
                None => best = Some(cand),
                Some(b) => {
                    let better = match mode {
                        CosetExtreme::Longest => cand.word.len() > b.word.len(),
                        CosetExtreme::Shortest => cand.word.len() < b.word.len(),
                    };
                    if better {
                        best = Some(cand);
                        tie = false;
                    } else if cand.word.len() == b.word.len() && cand != *b {
                        tie = true;
                    }
                }
            }
        }
        let best = best.expect("stabilizer contains the identity");
        debug_assert!(!tie, "coset extreme must be unique");
        Ok(best)
    }

    /// All elements of length at most `maxlen`, grouped by length.
    pub fn enumerate_ball(&self, maxlen: usize) -> Vec<Vec<CoxeterElement>> {
        let mut by_len: Vec<Vec<CoxeterElement>> = vec![vec![self.identity()]];
        let mut seen: HashSet<CoxeterElement> = by_len[0].iter().cloned().collect();
        for l in 1..=maxlen {
            let mut layer = vec![];
            for w in &by_len[l - 1] {
                for i in 0..self.rank() {
                    let next = self.element_from_matrix(w.mat.mul(&self.gen_mats[i]));
                    if next.word.len() == l && seen.insert(next.clone()) {
                        layer.push(next);
                    }
                }
            }
            layer.sort_by_key(|w| w.word.clone());
            if layer.is_empty() {
                break;
            }
            by_len.push(layer);
        }
        by_len
    }

    /// The interval `[e, w]` by the subword property.
    pub fn enumerate_interval_below(&self, w: &CoxeterElement) -> Result<BruhatInterval> {
        self.check(w)?;
        let l = w.word.len();
        let mut seen: HashSet<CoxeterElement> = HashSet::new();
        for mask in 0u64..(1u64 << l) {
            let sub: Vec<usize> = (0..l)
                .filter(|&p| mask & (1 << p) != 0)
                .map(|p| w.word[p] as usize)
                .collect();
            seen.insert(self.element_from_word(&sub));
        }
        let mut by_length: Vec<Vec<CoxeterElement>> = vec![vec![]; l + 1];
        for e in seen {
            let len = e.word.len();
            by_length[len].push(e);
        }
        for layer in &mut by_length {
            layer.sort_by_key(|w| w.word.clone());
        }
        Ok(BruhatInterval {
            bottom: self.identity(),
            top: w.clone(),
            by_length,
        })
    }

    /// The interval `[x, z]`.
    pub fn enumerate_interval(
        &self,
        x: &CoxeterElement,
        z: &CoxeterElement,
    ) -> Result<Vec<CoxeterElement>> {
        self.check(x)?;
        self.check(z)?;
        let below = self.enumerate_interval_below(z)?;
        let mut out = vec![];
        for e in below.elements() {
            if self.bruhat_leq(x, e)? {
                out.push(e.clone());
            }
        }
        Ok(out)
    }

    /// All `y >= w` that are longest in their stabilizer coset with
    /// `ht(w o lambda - y o lambda) <= height_budget`, for a dominant
    /// anchor. Exploration is a prefix tree whose orbit drop only grows,
    /// so the cut at the budget is complete.
    pub fn enumerate_above_within(
        &self,
        w: &CoxeterElement,
        height_budget: i64,
        lambda: &Weight,
        max_elements: usize,
    ) -> Result<Vec<CoxeterElement>> {
        self.check(w)?;
        if classify_chamber(&self.sys) != ChamberClass::CPlus || lambda != &self.lambda {
            return Err(Error::NotDominant(
                "enumeration above requires the system's dominant weight".into(),
            ));
        }
        if self.coset_extreme(w, CosetExtreme::Longest)? != *w {
            return Err(Error::NotDominant(
                "w must be the longest element of its stabilizer coset".into(),
            ));
        }
        let w_drop = self.orbit_drop(w, lambda)?;
        let cap = w_drop + height_budget;
        let mut seen: HashSet<CoxeterElement> = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.identity());
        let mut out = vec![];
        while let Some(y) = queue.pop_front() {
            if !seen.insert(y.clone()) {
                continue;
            }
            if seen.len() > max_elements {
                return Err(Error::BudgetExceeded(format!(
                    "more than {max_elements} elements within the height budget"
                )));
            }
            if self.orbit_drop(&y, lambda)? <= cap
                && self.coset_extreme(&y, CosetExtreme::Longest)? == y
                && self.bruhat_leq(w, &y)?
            {
                out.push(y.clone());
            }
            for i in 0..self.rank() {
                // ascend only: y s_i > y
                if is_positive_vec(&y.mat.apply(&self.simples[i].coords)) {
                    let next = self.element_from_matrix(y.mat.mul(&self.gen_mats[i]));
                    if self.orbit_drop(&next, lambda)? <= cap && !seen.contains(&next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        out.sort_by_key(|y| (y.word.len(), y.word.clone()));
        Ok(out)
    }

    /// All coset-extreme elements within an orbit-drop budget of the anchor
    /// weight, in either chamber. The drop is monotone along ascending
    /// words, so the pruned search is complete.
    pub fn enumerate_extreme_within(
        &self,
        mode: CosetExtreme,
        height_budget: i64,
        max_elements: usize,
    ) -> Result<Vec<CoxeterElement>> {
        let chamber = classify_chamber(&self.sys);
        if chamber != ChamberClass::CPlus && chamber != ChamberClass::CMinus {
            return Err(Error::NotDominant(
                "extreme enumeration requires a dominant or antidominant anchor".into(),
            ));
        }
        let lambda = &self.lambda;
        let mut seen: HashSet<CoxeterElement> = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.identity());
        let mut out = vec![];
        while let Some(y) = queue.pop_front() {
            if !seen.insert(y.clone()) {
                continue;
            }
            if seen.len() > max_elements {
                return Err(Error::BudgetExceeded(format!(
                    "more than {max_elements} elements within the height budget"
                )));
            }
            if self.coset_extreme(&y, mode)? == y {
                out.push(y.clone());
            }
            for i in 0..self.rank() {
                if is_positive_vec(&y.mat.apply(&self.simples[i].coords)) {
                    let next = self.element_from_matrix(y.mat.mul(&self.gen_mats[i]));
                    if self.orbit_drop(&next, lambda)? <= height_budget && !seen.contains(&next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        out.sort_by_key(|y| (self.orbit_drop(y, lambda).unwrap_or(0), y.word.clone()));
        Ok(out)
    }

    /// Stable identifier of the Coxeter data, for memo persistence.
    pub fn fingerprint(&self) -> String {
        let simples: Vec<String> = self
            .simples
            .iter()
            .map(|r| {
                r.coords
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("{}|{}", self.cartan.type_str, simples.join(";"))
    }

    /// Symbolic inversion count `|w Delta^+(lambda) cap Delta^-(lambda)|`,
    /// evaluated progression by progression. Used to cross-check lengths.
    pub fn inversion_count(&self, w: &CoxeterElement) -> Result<i64> {
        self.check(w)?;
        let cartan = &self.cartan;
        let mut count = 0i64;
        for p in &self.sys.progressions {
            match &p.range {
                ProgressionRange::Finite(ks) => {
                    for &k in ks {
                        let r = p.member(cartan, k);
                        if r.is_positive() && !is_positive_vec(&w.mat.apply(&r.coords)) {
                            count += 1;
                        }
                    }
                }
                ProgressionRange::AllZ => {
                    // image of base + k q delta is w(base) + k q delta; its
                    // height is increasing in k, so the negatives form an
                    // initial segment k = 0..t
                    let img = w.mat.apply(&p.base.coords);
                    let ht0: i64 = img.iter().sum();
                    if ht0 < 0 {
                        let step = p.period * cartan.delta_height();
                        let t = (-ht0) / step + 1;
                        count += t;
                    }
                }
            }
        }
        Ok(count)
    }
}

/// Reflection matrix of a real root on root-lattice coordinates.
fn reflection_matrix(cartan: &CartanData, alpha: &[i64]) -> IntMat {
    let n = cartan.nodes;
    let mut m = IntMat::identity(n);
    // s(v) = v - <alpha^vee, v> alpha
    for j in 0..n {
        let mut ej = vec![0i64; n];
        ej[j] = 1;
        let c = cartan.coroot_pairing(alpha, &ej);
        for i in 0..n {
            m.a[i * n + j] -= c * alpha[i];
        }
    }
    m
}

/// Exact inverse of a unimodular integer matrix.
fn invert_integer_unimodular(m: &IntMat) -> IntMat {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    let n = m.n;
    let mut left: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from(m.at(i, j))))
                .collect()
        })
        .collect();
    let mut right: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !left[i][c].is_zero()).expect("invertible matrix");
        left.swap(c, p);
        right.swap(c, p);
        let inv = left[c][c].recip();
        for j in 0..n {
            left[c][j] *= &inv;
            right[c][j] *= &inv;
        }
        for i in 0..n {
            if i != c && !left[i][c].is_zero() {
                let f = left[i][c].clone();
                for j in 0..n {
                    let t = &f * &left[c][j];
                    left[i][j] -= t;
                    let t = &f * &right[c][j];
                    right[i][j] -= t;
                }
            }
        }
    }
    let mut a = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            assert!(right[i][j].is_integer(), "inverse must be integral");
            a[i * n + j] = i64::try_from(right[i][j].to_integer()).expect("inverse entries fit in i64");
        }
    }
    IntMat { n, a }
}

/// Serialize elements as generator-index arrays.
pub fn elements_to_json(elements: &[CoxeterElement]) -> serde_json::Value {
    serde_json::json!(elements
        .iter()
        .map(|w| w.word.iter().map(|&i| i as u64).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}
