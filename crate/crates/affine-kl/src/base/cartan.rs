//! Cartan data for finite and untwisted affine types.
//!
//! A `CartanData` packages the generalized Cartan matrix, the symmetrizers
//! `d_i = (alpha_i, alpha_i)/2`, and for affine types the null-root
//! coefficients `delta = sum m_i alpha_i` and the central-element
//! coefficients `c = sum m^vee_i h_i`. The invariant bilinear form is
//! normalized so that `<c, lambda> = (delta, lambda)`, which forces
//! `d_i = m^vee_i / m_i` on affine diagrams.
//!
//! Data is loaded from a built-in table keyed by type strings such as
//! `"A2"` (finite) or `"A2~"` (untwisted affine); a JSON description may
//! be supplied instead to override the table.

use crate::base::scalar::{format_rational, parse_rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashSet;

/// Finite or untwisted affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanKind {
    Finite,
    Affine,
}

/// One delta-translation class of real roots (affine types).
///
/// The real roots over the class of `gamma_bar` are `tilde + k*delta`
/// for `k` in `Z`, with `tilde` the unique positive representative of
/// minimal height.
#[derive(Debug, Clone)]
pub struct RealRootClass {
    /// Representative with delta-coefficient zero; coordinates over all nodes.
    pub gamma_bar: Vec<i64>,
    /// Minimal positive member of the class.
    pub tilde: Vec<i64>,
    /// Half square length `(gamma, gamma)/2`, constant along the class.
    pub norm_half: BigRational,
    /// Translation period in delta-steps (1 for untwisted types).
    pub period: i64,
}

/// Cartan matrix, symmetrizers and root-system bookkeeping for one type.
#[derive(Debug, Clone)]
pub struct CartanData {
    pub type_str: String,
    pub kind: CartanKind,
    /// Number of simple roots.
    pub nodes: usize,
    /// Cartan matrix `a[i][j] = <h_i, alpha_j>`.
    pub a: Vec<Vec<i64>>,
    /// Symmetrizers `d_i = (alpha_i, alpha_i)/2`.
    pub d: Vec<BigRational>,
    /// Coefficients of delta in the simple-root basis (affine only).
    pub delta_coeffs: Option<Vec<i64>>,
    /// Coefficients of the central element in the simple-coroot basis (affine only).
    pub c_coeffs: Option<Vec<i64>>,
    /// Multiplicity of each imaginary root space (rank of the underlying finite type).
    pub imaginary_mult: usize,
    /// All roots of the finite subsystem used for real-root membership.
    /// For affine types these are the roots on nodes `1..nodes` (node 0 coordinate 0).
    pub finite_roots: Vec<Vec<i64>>,
    /// Classes of real roots modulo delta (affine); one entry per finite root.
    pub classes: Vec<RealRootClass>,
}

impl CartanData {
    /// Look up a built-in type: `A1`, `B3`, ..., `G2`, or the untwisted
    /// affine versions `A1~`, `C2~`, ....
    pub fn from_type(type_str: &str) -> Result<CartanData> {
        let (family, rank, affine) = parse_type_string(type_str)?;
        let (fa, fd) = finite_family(family, rank).ok_or_else(|| Error::UnknownType(type_str.into()))?;
        let data = if affine {
            build_affine(type_str, &fa, &fd)?
        } else {
            build_finite(type_str, fa, fd)?
        };
        data.validate()?;
        Ok(data)
    }

    /// Load Cartan data from a JSON object with fields
    /// `{"name", "kind": "finite"|"affine", "cartan": [[..]], "norm_half": ["1","1/2",..]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<CartanData> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected JSON object".into()))?;
        let name = obj
            .get("name")
            .and_then(|x| x.as_str())
            .unwrap_or("custom")
            .to_string();
        let kind = match obj.get("kind").and_then(|x| x.as_str()) {
            Some("finite") => CartanKind::Finite,
            Some("affine") => CartanKind::Affine,
            _ => return Err(Error::Parse("kind must be \"finite\" or \"affine\"".into())),
        };
        let a: Vec<Vec<i64>> = obj
            .get("cartan")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing cartan matrix".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("cartan rows must be arrays".into()))?
                    .iter()
                    .map(|e| e.as_i64().ok_or_else(|| Error::Parse("cartan entries must be integers".into())))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let d: Vec<BigRational> = obj
            .get("norm_half")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing norm_half".into()))?
            .iter()
            .map(|e| {
                e.as_str()
                    .ok_or_else(|| Error::Parse("norm_half entries must be strings".into()))
                    .and_then(parse_rational)
            })
            .collect::<Result<_>>()?;
        let data = match kind {
            CartanKind::Finite => build_finite(&name, a, d)?,
            CartanKind::Affine => {
                // Interpret node 0 as the affine node; nodes 1.. define the finite part.
                let n = a.len() - 1;
                let fa: Vec<Vec<i64>> = (1..=n).map(|i| (1..=n).map(|j| a[i][j]).collect()).collect();
                let fd: Vec<BigRational> = d[1..].to_vec();
                let built = build_affine(&name, &fa, &fd)?;
                if built.a != a {
                    return Err(Error::InvalidCartan(
                        "affine matrix is not the canonical extension of its finite part".into(),
                    ));
                }
                built
            }
        };
        data.validate()?;
        Ok(data)
    }

    pub fn is_affine(&self) -> bool {
        self.kind == CartanKind::Affine
    }

    /// Height of delta (affine) — the sum of the delta coefficients.
    pub fn delta_height(&self) -> i64 {
        self.delta_coeffs.as_ref().map(|m| m.iter().sum()).unwrap_or(0)
    }

    pub fn delta(&self) -> Option<&Vec<i64>> {
        self.delta_coeffs.as_ref()
    }

    /// `(alpha_i, alpha_j) = d_i a_{ij}`.
    pub fn form_simple(&self, i: usize, j: usize) -> BigRational {
        &self.d[i] * BigRational::from_integer(BigInt::from(self.a[i][j]))
    }

    /// `(alpha, beta)` for root-lattice vectors.
    pub fn form_roots(&self, alpha: &[i64], beta: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.nodes {
            if alpha[i] == 0 {
                continue;
            }
            // (alpha_i, beta) = d_i <h_i, beta>
            let mut pair = 0i64;
            for j in 0..self.nodes {
                pair += self.a[i][j] * beta[j];
            }
            acc += &self.d[i]
                * BigRational::from_integer(BigInt::from(alpha[i]))
                * BigRational::from_integer(BigInt::from(pair));
        }
        acc
    }

    /// Half square length of a real root.
    pub fn norm_half(&self, alpha: &[i64]) -> BigRational {
        self.form_roots(alpha, alpha) / BigRational::from_integer(BigInt::from(2))
    }

    /// `<h_i, alpha>` for a root-lattice vector.
    pub fn coroot_pairing_simple(&self, i: usize, alpha: &[i64]) -> i64 {
        (0..self.nodes).map(|j| self.a[i][j] * alpha[j]).sum()
    }

    /// Integer pairing `<alpha^vee, beta> = 2(alpha,beta)/(alpha,alpha)` of two real roots.
    pub fn coroot_pairing(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let v = self.form_roots(alpha, beta) / self.norm_half(alpha);
        assert!(v.is_integer(), "coroot pairing of real roots must be integral");
        v.to_integer().to_i64().expect("pairing fits in i64")
    }

    /// Is the vector a real root?
    pub fn is_real_root(&self, v: &[i64]) -> bool {
        match self.kind {
            CartanKind::Finite => self.finite_roots.iter().any(|r| r == v),
            CartanKind::Affine => {
                // v = gamma_bar + k*delta with gamma_bar a finite root;
                // untwisted: k = coefficient at node 0 (delta has m_0 = 1).
                let delta = self.delta_coeffs.as_ref().unwrap();
                let k = v[0] / delta[0];
                if v[0] % delta[0] != 0 {
                    return false;
                }
                let gb: Vec<i64> = (0..self.nodes).map(|i| v[i] - k * delta[i]).collect();
                self.finite_roots.iter().any(|r| r == &gb)
            }
        }
    }

    /// Is the vector proportional to delta with a nonzero integer factor?
    pub fn is_imaginary_root(&self, v: &[i64]) -> bool {
        match &self.delta_coeffs {
            None => false,
            Some(delta) => {
                if v.iter().all(|&x| x == 0) {
                    return false;
                }
                let k = v[0] / delta[0];
                k != 0 && (0..self.nodes).all(|i| v[i] == k * delta[i])
            }
        }
    }

    /// Positive real roots of height at most `h`, enumerated class by class.
    pub fn positive_real_roots_up_to(&self, h: i64) -> Vec<Vec<i64>> {
        let mut out = vec![];
        match self.kind {
            CartanKind::Finite => {
                for r in &self.finite_roots {
                    let ht: i64 = r.iter().sum();
                    if ht > 0 && ht <= h {
                        out.push(r.clone());
                    }
                }
            }
            CartanKind::Affine => {
                let dh = self.delta_height();
                for cls in &self.classes {
                    let base_ht: i64 = cls.tilde.iter().sum();
                    let mut k = 0i64;
                    while base_ht + k * dh * cls.period <= h {
                        let v: Vec<i64> = (0..self.nodes)
                            .map(|i| cls.tilde[i] + k * cls.period * self.delta_coeffs.as_ref().unwrap()[i])
                            .collect();
                        out.push(v);
                        k += 1;
                    }
                }
            }
        }
        out.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.nodes;
        if self.a.len() != n || self.a.iter().any(|r| r.len() != n) || self.d.len() != n {
            return Err(Error::InvalidCartan("dimension mismatch".into()));
        }
        for i in 0..n {
            if self.a[i][i] != 2 {
                return Err(Error::InvalidCartan("diagonal must be 2".into()));
            }
            if !self.d[i].is_positive() {
                return Err(Error::InvalidCartan("symmetrizers must be positive".into()));
            }
            for j in 0..n {
                if i != j && self.a[i][j] > 0 {
                    return Err(Error::InvalidCartan("off-diagonal entries must be <= 0".into()));
                }
                // d_i a_ij = d_j a_ji
                if self.form_simple(i, j) != self.form_simple(j, i) {
                    return Err(Error::InvalidCartan("matrix is not symmetrizable by d".into()));
                }
            }
            // (alpha_i, alpha_i)/2 restricted to the allowed lengths
            let allowed = ["1/3", "1/2", "1", "2", "3"];
            let ds = format_rational(&self.d[i]);
            if !allowed.contains(&ds.as_str()) {
                return Err(Error::InvalidCartan(format!("(alpha,alpha)/2 = {ds} out of range")));
            }
        }
        if let (Some(delta), Some(c)) = (&self.delta_coeffs, &self.c_coeffs) {
            for j in 0..n {
                let av: i64 = (0..n).map(|i| self.a[j][i] * delta[i]).sum();
                if av != 0 {
                    return Err(Error::InvalidCartan("A * delta != 0".into()));
                }
                let ca: i64 = (0..n).map(|i| c[i] * self.a[i][j]).sum();
                if ca != 0 {
                    return Err(Error::InvalidCartan("<c, alpha_j> != 0".into()));
                }
                // normalization <c,.> = (delta,.): d_j = m^vee_j / m_j
                let want = BigRational::new(BigInt::from(c[j]), BigInt::from(delta[j]));
                if self.d[j] != want {
                    return Err(Error::InvalidCartan("form not normalized by <c,.> = (delta,.)".into()));
                }
            }
        }
        Ok(())
    }
}

fn parse_type_string(s: &str) -> Result<(char, usize, bool)> {
    let s = s.trim();
    let affine = s.ends_with('~');
    let core = if affine { &s[..s.len() - 1] } else { s };
    let mut chars = core.chars();
    let family = chars
        .next()
        .ok_or_else(|| Error::UnknownType(s.into()))?
        .to_ascii_uppercase();
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::UnknownType(s.into()))?;
    Ok((family, rank, affine))
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Cartan matrix and symmetrizers of a finite family, normalized so long
/// roots have `(alpha, alpha) = 2`.
fn finite_family(family: char, n: usize) -> Option<(Vec<Vec<i64>>, Vec<BigRational>)> {
    let chain = |n: usize| -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    match (family, n) {
        ('A', n) if n >= 1 => Some((chain(n), vec![rat(1, 1); n])),
        ('B', n) if n >= 2 => {
            let mut a = chain(n);
            a[n - 1][n - 2] = -2; // alpha_n short
            let mut d = vec![rat(1, 1); n];
            d[n - 1] = rat(1, 2);
            Some((a, d))
        }
        ('C', n) if n >= 2 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = -2; // alpha_n long
            let mut d = vec![rat(1, 2); n];
            d[n - 1] = rat(1, 1);
            Some((a, d))
        }
        ('D', n) if n >= 4 => {
            let mut a = chain(n - 1);
            for row in &mut a {
                row.push(0);
            }
            a.push(vec![0; n]);
            a[n - 1][n - 1] = 2;
            a[n - 1][n - 3] = -1;
            a[n - 3][n - 1] = -1;
            Some((a, vec![rat(1, 1); n]))
        }
        ('E', n) if (6..=8).contains(&n) => {
            // Bourbaki: node 2 attaches to node 4 of the chain 1-3-4-5-6(-7-8)
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
            }
            let mut link = |i: usize, j: usize| {
                a[i - 1][j - 1] = -1;
                a[j - 1][i - 1] = -1;
            };
            link(1, 3);
            link(3, 4);
            link(2, 4);
            link(4, 5);
            link(5, 6);
            if n >= 7 {
                link(6, 7);
            }
            if n == 8 {
                link(7, 8);
            }
            Some((a, vec![rat(1, 1); n]))
        }
        ('F', 4) => {
            let a = vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
            Some((a, vec![rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 2)]))
        }
        ('G', 2) => {
            let a = vec![vec![2, -3], vec![-1, 2]];
            Some((a, vec![rat(1, 3), rat(1, 1)]))
        }
        _ => None,
    }
}

/// Enumerate all roots of a finite root system by closing the simple roots
/// under simple reflections.
fn enumerate_finite_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = vec![];
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        queue.push(v);
    }
    while let Some(v) = queue.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        for i in 0..n {
            // s_i(v) = v - <h_i, v> alpha_i
            let pair: i64 = (0..n).map(|j| a[i][j] * v[j]).sum();
            let mut w = v.clone();
            w[i] -= pair;
            if !seen.contains(&w) {
                queue.push(w);
            }
        }
    }
    let mut neg: Vec<Vec<i64>> = seen.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    for v in neg.drain(..) {
        seen.insert(v);
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    out
}

fn build_finite(name: &str, a: Vec<Vec<i64>>, d: Vec<BigRational>) -> Result<CartanData> {
    let roots = enumerate_finite_roots(&a);
    let data = CartanData {
        type_str: name.to_string(),
        kind: CartanKind::Finite,
        nodes: a.len(),
        a,
        d,
        delta_coeffs: None,
        c_coeffs: None,
        imaginary_mult: 0,
        finite_roots: roots,
        classes: vec![],
    };
    Ok(data)
}

fn build_affine(name: &str, fa: &[Vec<i64>], fd: &[BigRational]) -> Result<CartanData> {
    let n = fa.len();
    let finite = build_finite("finite-part", fa.to_vec(), fd.to_vec())?;
    // highest root = the unique root of maximal height
    let theta = finite
        .finite_roots
        .iter()
        .max_by_key(|r| r.iter().sum::<i64>())
        .cloned()
        .ok_or_else(|| Error::InvalidCartan("empty finite root system".into()))?;
    let theta_norm = finite.norm_half(&theta);
    if theta_norm != rat(1, 1) {
        return Err(Error::InvalidCartan(
            "normalization requires (theta, theta)/2 = 1 on the finite part".into(),
        ));
    }

    let nodes = n + 1;
    let mut a = vec![vec![0i64; nodes]; nodes];
    a[0][0] = 2;
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = fa[i][j];
        }
    }
    for j in 0..n {
        // <h_0, alpha_j> = -<theta^vee, alpha_j> = -(theta, alpha_j) when (theta,theta)=2
        let mut ej = vec![0i64; n];
        ej[j] = 1;
        let v = finite.form_roots(&theta, &ej);
        let v = -v;
        if !v.is_integer() {
            return Err(Error::InvalidCartan("non-integral affine extension".into()));
        }
        a[0][j + 1] = v.to_integer().to_i64().unwrap();
        // <h_j, alpha_0> = -<h_j, theta>
        a[j + 1][0] = -finite.coroot_pairing_simple(j, &theta);
    }

    let mut d = Vec::with_capacity(nodes);
    d.push(rat(1, 1));
    d.extend(fd.iter().cloned());

    // delta = alpha_0 + theta; c from the dual labels m^vee_i = d_i m_i
    let mut delta = vec![1i64];
    delta.extend(theta.iter().cloned());
    let mut c = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let mv = &d[i] * BigRational::from_integer(BigInt::from(delta[i]));
        if !mv.is_integer() {
            return Err(Error::InvalidCartan("dual labels must be integers".into()));
        }
        c.push(mv.to_integer().to_i64().unwrap());
    }

    // finite roots re-embedded with a leading zero coordinate
    let finite_roots: Vec<Vec<i64>> = finite
        .finite_roots
        .iter()
        .map(|r| {
            let mut v = vec![0i64];
            v.extend(r.iter().cloned());
            v
        })
        .collect();

    let data_stub = CartanData {
        type_str: name.to_string(),
        kind: CartanKind::Affine,
        nodes,
        a,
        d,
        delta_coeffs: Some(delta.clone()),
        c_coeffs: Some(c),
        imaginary_mult: n,
        finite_roots: finite_roots.clone(),
        classes: vec![],
    };

    // real-root classes: one per finite root; tilde = gamma_bar (positive)
    // or gamma_bar + delta (negative); period from Z r = Z cap Z (gamma,gamma)/2
    let mut classes = vec![];
    for gb in &finite_roots {
        let ht: i64 = gb.iter().sum();
        let tilde: Vec<i64> = if ht > 0 {
            gb.clone()
        } else {
            (0..nodes).map(|i| gb[i] + delta[i]).collect()
        };
        let norm_half = data_stub.norm_half(gb);
        let period = smallest_multiplier_to_integer(&norm_half);
        classes.push(RealRootClass {
            gamma_bar: gb.clone(),
            tilde,
            norm_half,
            period,
        });
    }

    let mut data = data_stub;
    data.classes = classes;
    Ok(data)
}

/// Generator of Z cap Z*x for positive rational x: with x = p/q in lowest
/// terms, k*x is integral iff q | k, so the intersection is p*Z.
fn smallest_multiplier_to_integer(x: &BigRational) -> i64 {
    x.numer().abs().to_i64().expect("small numerator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_affine_table() {
        let c = CartanData::from_type("A1~").unwrap();
        assert_eq!(c.a, vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(c.delta_coeffs, Some(vec![1, 1]));
        assert_eq!(c.c_coeffs, Some(vec![1, 1]));
        assert_eq!(c.imaginary_mult, 1);
        assert!(c.is_real_root(&[1, 0]));
        assert!(c.is_real_root(&[3, 2]));
        assert!(!c.is_real_root(&[1, 1]));
        assert!(c.is_imaginary_root(&[2, 2]));
    }

    #[test]
    fn untwisted_tables_validate() {
        for t in ["A1~", "A2~", "A3~", "B3~", "C2~", "C3~", "D4~", "G2~", "F4~", "E6~"] {
            let c = CartanData::from_type(t).unwrap();
            assert!(c.is_affine(), "{t}");
            // every class has period 1 in the untwisted tables
            for cls in &c.classes {
                assert_eq!(cls.period, 1, "{t}");
            }
        }
        for t in ["A1", "A2", "B2", "C3", "D4", "G2", "F4", "E6", "E7", "E8"] {
            let c = CartanData::from_type(t).unwrap();
            assert!(!c.is_affine(), "{t}");
        }
        assert!(CartanData::from_type("Z9").is_err());
        assert!(CartanData::from_type("D3").is_err());
    }

    #[test]
    fn root_counts() {
        assert_eq!(CartanData::from_type("A2").unwrap().finite_roots.len(), 6);
        assert_eq!(CartanData::from_type("G2").unwrap().finite_roots.len(), 12);
        assert_eq!(CartanData::from_type("F4").unwrap().finite_roots.len(), 48);
        assert_eq!(CartanData::from_type("E6").unwrap().finite_roots.len(), 72);
        assert_eq!(CartanData::from_type("B3").unwrap().finite_roots.len(), 18);
    }

    #[test]
    fn real_root_progression_form() {
        // every real root of height <= 12 appears in exactly one class list
        let c = CartanData::from_type("A2~").unwrap();
        let listed = c.positive_real_roots_up_to(12);
        let mut brute = vec![];
        // brute force: close simple roots under all simple reflections, keep ht <= 12
        let mut seen = HashSet::new();
        let mut queue: Vec<Vec<i64>> = (0..3)
            .map(|i| {
                let mut v = vec![0i64; 3];
                v[i] = 1;
                v
            })
            .collect();
        while let Some(v) = queue.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            for i in 0..3 {
                let pair: i64 = (0..3).map(|j| c.a[i][j] * v[j]).sum();
                let mut w = v.clone();
                w[i] -= pair;
                let ht: i64 = w.iter().sum();
                if ht.abs() <= 12 && !seen.contains(&w) {
                    queue.push(w);
                }
            }
        }
        for v in seen {
            let ht: i64 = v.iter().sum();
            if ht > 0 && ht <= 12 {
                brute.push(v);
            }
        }
        brute.sort_by_key(|r: &Vec<i64>| (r.iter().sum::<i64>(), r.clone()));
        assert_eq!(listed, brute);
    }

    #[test]
    fn custom_json_roundtrip() {
        let v = serde_json::json!({
            "name": "A1-custom",
            "kind": "finite",
            "cartan": [[2]],
            "norm_half": ["1"],
        });
        let c = CartanData::from_json(&v).unwrap();
        assert_eq!(c.nodes, 1);
        assert_eq!(c.finite_roots.len(), 2);
    }
}
