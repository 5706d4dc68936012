//! Weights in coordinates.
//!
//! A weight is stored by its pairings `<h_i, lambda>` with the simple
//! coroots plus, on affine types, the pairing `<d, lambda>` with the
//! scaling element (so the coordinate vector has length |I| + 1 and the
//! basis {h_0, ..., h_n, d} of the Cartan subalgebra determines lambda).
//! `rho` is normalized by `<h_i, rho> = 1` and `<d, rho> = 0`.

use crate::base::cartan::CartanData;
use crate::base::scalar::{format_rational, parse_rational, Scalar};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// A weight, by coroot pairings (plus the d-pairing on affine types).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    /// `<h_i, lambda>` for each node i.
    pub h: Vec<Scalar>,
    /// `<d, lambda>`; None on finite types.
    pub d: Option<Scalar>,
}

impl Weight {
    pub fn new(h: Vec<Scalar>, d: Option<Scalar>) -> Self {
        Weight { h, d }
    }

    pub fn zero(cartan: &CartanData) -> Self {
        Weight {
            h: vec![Scalar::zero(); cartan.nodes],
            d: cartan.is_affine().then(Scalar::zero),
        }
    }

    /// `rho`: all coroot pairings 1, d-pairing 0.
    pub fn rho(cartan: &CartanData) -> Self {
        Weight {
            h: vec![Scalar::one(); cartan.nodes],
            d: cartan.is_affine().then(Scalar::zero),
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            h: self
                .h
                .iter()
                .zip(&other.h)
                .map(|(x, y)| x.clone() + y)
                .collect(),
            d: match (&self.d, &other.d) {
                (Some(x), Some(y)) => Some(x.clone() + y),
                (None, None) => None,
                _ => panic!("mixing affine and finite weights"),
            },
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Weight {
        Weight {
            h: self.h.iter().map(|x| -x.clone()).collect(),
            d: self.d.as_ref().map(|x| -x.clone()),
        }
    }

    /// Add an integer root-lattice vector.
    pub fn add_root(&self, cartan: &CartanData, alpha: &[i64], times: &Scalar) -> Weight {
        let mut h = self.h.clone();
        for (i, hi) in h.iter_mut().enumerate() {
            let pair = cartan.coroot_pairing_simple(i, alpha);
            *hi += times.clone() * Scalar::from_int(pair);
        }
        let d = self.d.as_ref().map(|x| x.clone() + times.clone() * Scalar::from_int(alpha[0]));
        Weight { h, d }
    }

    /// `lambda + rho`.
    pub fn plus_rho(&self, cartan: &CartanData) -> Weight {
        self.add(&Weight::rho(cartan))
    }

    /// The level `(delta, lambda) = <c, lambda>` (affine only).
    pub fn level(&self, cartan: &CartanData) -> Scalar {
        let c = cartan.c_coeffs.as_ref().expect("level needs affine data");
        let mut acc = Scalar::zero();
        for (i, ci) in c.iter().enumerate() {
            acc += self.h[i].clone() * Scalar::from_int(*ci);
        }
        acc
    }

    /// `(delta, lambda)` computed through the bilinear form on coordinates,
    /// as `sum_i m_i d_i <h_i, lambda>`.
    pub fn delta_pairing_via_form(&self, cartan: &CartanData) -> Scalar {
        let delta = cartan.delta_coeffs.as_ref().expect("affine only");
        let mut acc = Scalar::zero();
        for i in 0..cartan.nodes {
            let w = Scalar::from_rational(
                &cartan.d[i] * BigRational::from_integer(BigInt::from(delta[i])),
            );
            acc += w * self.h[i].clone();
        }
        acc
    }

    /// True iff all coordinates are rational (no sqrt2 component).
    pub fn is_rational(&self) -> bool {
        self.h.iter().all(Scalar::is_rational)
            && self.d.as_ref().map(|x| x.is_rational()).unwrap_or(true)
    }

    /// True iff all coordinates are integers (lambda lies in the lattice P
    /// realized as the integer-pairing weights).
    pub fn is_integral(&self) -> bool {
        self.h.iter().all(Scalar::is_integer)
            && self.d.as_ref().map(|x| x.is_integer()).unwrap_or(true)
    }

    /// Express `self - other` as an integer root-lattice vector, if it is one.
    pub fn diff_as_root(&self, cartan: &CartanData, other: &Weight) -> Option<Vec<i64>> {
        let diff = self.sub(other);
        // solve A^T-free: <h_i, v> = diff.h[i], node-0 coefficient pinned by <d, v>
        let n = cartan.nodes;
        // coefficients over Q(sqrt2), must come out integral
        let mut rows: Vec<Vec<Scalar>> = vec![];
        let mut rhs: Vec<Scalar> = vec![];
        for i in 0..n {
            rows.push((0..n).map(|j| Scalar::from_int(cartan.a[i][j])).collect());
            rhs.push(diff.h[i].clone());
        }
        if cartan.is_affine() {
            let mut r = vec![Scalar::zero(); n];
            r[0] = Scalar::one();
            rows.push(r);
            rhs.push(diff.d.clone().unwrap());
        }
        let sol = solve_linear(&mut rows, &mut rhs, n)?;
        let mut out = Vec::with_capacity(n);
        for s in sol {
            out.push(s.to_i64()?);
        }
        // verify
        for i in 0..n {
            let mut acc = Scalar::zero();
            for j in 0..n {
                acc += Scalar::from_int(cartan.a[i][j] * out[j]);
            }
            if acc != diff.h[i] {
                return None;
            }
        }
        Some(out)
    }
}

/// Gaussian elimination over Q(sqrt2); returns one solution if consistent.
pub(crate) fn solve_linear(
    rows: &mut Vec<Vec<Scalar>>,
    rhs: &mut Vec<Scalar>,
    ncols: usize,
) -> Option<Vec<Scalar>> {
    let m = rows.len();
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        rhs[r] = rhs[r].clone() * &inv;
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = f.clone() * &rows[r][j];
                    rows[i][j] = rows[i][j].clone() - t;
                }
                let t = f * &rhs[r];
                rhs[i] = rhs[i].clone() - t;
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == m {
            break;
        }
    }
    // consistency
    for i in r..m {
        if !rhs[i].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Scalar::zero(); ncols];
    for (row, col) in pivots {
        sol[col] = rhs[row].clone();
    }
    Some(sol)
}

/// Row-reduce and return a particular solution together with a basis of the
/// homogeneous solution space.
pub(crate) fn solve_affine(
    rows: &[Vec<Scalar>],
    rhs: &[Scalar],
    ncols: usize,
) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let mut r = rows.to_vec();
    let mut b = rhs.to_vec();
    let m = r.len();
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut rank = 0usize;
    for c in 0..ncols {
        let Some(p) = (rank..m).find(|&i| !r[i][c].is_zero()) else {
            continue;
        };
        r.swap(rank, p);
        b.swap(rank, p);
        let inv = r[rank][c].inv();
        for x in r[rank].iter_mut() {
            *x = x.clone() * &inv;
        }
        b[rank] = b[rank].clone() * &inv;
        for i in 0..m {
            if i != rank && !r[i][c].is_zero() {
                let f = r[i][c].clone();
                for j in 0..ncols {
                    let t = f.clone() * &r[rank][j];
                    r[i][j] = r[i][j].clone() - t;
                }
                let t = f * &b[rank];
                b[i] = b[i].clone() - t;
            }
        }
        pivots.push((rank, c));
        rank += 1;
        if rank == m {
            break;
        }
    }
    for i in rank..m {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut particular = vec![Scalar::zero(); ncols];
    for &(row, col) in &pivots {
        particular[col] = b[row].clone();
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = vec![];
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for &(row, col) in &pivots {
            v[col] = -r[row][free].clone();
        }
        basis.push(v);
    }
    Some((particular, basis))
}

fn format_scalar_grammar(s: &Scalar) -> String {
    let a = format_rational(s.rational_part());
    if s.sqrt2_part().is_zero() {
        a
    } else {
        format!("{}+{}*t", a, format_rational(s.sqrt2_part()))
    }
}

fn parse_scalar_grammar(text: &str) -> Result<Scalar> {
    // <rat> or <rat>+<rat>*t, where t denotes sqrt2
    match text.split_once('+') {
        None => {
            if text.contains('t') {
                // allow a bare `<rat>*t`
                let head = text
                    .strip_suffix("*t")
                    .ok_or_else(|| Error::Parse(format!("bad scalar `{text}`")))?;
                Ok(Scalar::new(BigRational::zero(), parse_rational(head)?))
            } else {
                Ok(Scalar::from_rational(parse_rational(text)?))
            }
        }
        Some((a, bt)) => {
            let b = bt
                .strip_suffix("*t")
                .ok_or_else(|| Error::Parse(format!("expected `<rat>*t` after `+` in `{text}`")))?;
            Ok(Scalar::new(parse_rational(a)?, parse_rational(b)?))
        }
    }
}

impl Weight {
    /// Parse the grammar `h<i>=<rat>[+<rat>*t],...,d=<rat>[+<rat>*t]`.
    /// Every node must be assigned; `d=` is optional and defaults to 0 on
    /// affine types, and is rejected on finite types.
    pub fn parse(cartan: &CartanData, text: &str) -> Result<Weight> {
        let mut h: Vec<Option<Scalar>> = vec![None; cartan.nodes];
        let mut d: Option<Scalar> = None;
        for item in text.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key=value` in `{item}`")))?;
            let key = key.trim();
            let val = parse_scalar_grammar(val.trim())?;
            if key == "d" {
                if !cartan.is_affine() {
                    return Err(Error::Parse("finite types have no d coordinate".into()));
                }
                if d.replace(val).is_some() {
                    return Err(Error::Parse("duplicate d".into()));
                }
            } else if let Some(idx) = key.strip_prefix('h') {
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad node index `{key}`")))?;
                if i >= cartan.nodes {
                    return Err(Error::Parse(format!("node index {i} out of range")));
                }
                if h[i].replace(val).is_some() {
                    return Err(Error::Parse(format!("duplicate h{i}")));
                }
            } else {
                return Err(Error::Parse(format!("unknown key `{key}`")));
            }
        }
        let h: Vec<Scalar> = h
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing h{i}"))))
            .collect::<Result<_>>()?;
        Ok(Weight {
            h,
            d: if cartan.is_affine() {
                Some(d.unwrap_or_else(Scalar::zero))
            } else {
                None
            },
        })
    }

    /// Canonical text form of the grammar (d always included on affine types).
    pub fn format(&self) -> String {
        let mut parts: Vec<String> = self
            .h
            .iter()
            .enumerate()
            .map(|(i, s)| format!("h{}={}", i, format_scalar_grammar(s)))
            .collect();
        if let Some(d) = &self.d {
            parts.push(format!("d={}", format_scalar_grammar(d)));
        }
        parts.join(",")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cartan::CartanData;

    #[test]
    fn parse_spec_example() {
        let c = CartanData::from_type("A1~").unwrap();
        let w = Weight::parse(&c, "h0=-1,h1=-1/2,d=0").unwrap();
        assert_eq!(w.h[0], Scalar::from_int(-1));
        assert_eq!(w.h[1], Scalar::from_frac(-1, 2));
        assert_eq!(w.format(), "h0=-1,h1=-1/2,d=0");
    }

    #[test]
    fn parse_sqrt2_part() {
        let c = CartanData::from_type("A1~").unwrap();
        let w = Weight::parse(&c, "h0=1/2+1*t,h1=1/2+-1*t").unwrap();
        assert_eq!(w.h[0], Scalar::from_frac(1, 2) + Scalar::sqrt2());
        assert_eq!(w.h[1], Scalar::from_frac(1, 2) - Scalar::sqrt2());
        let text = w.format();
        let back = Weight::parse(&c, &text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn missing_node_rejected() {
        let c = CartanData::from_type("A2~").unwrap();
        assert!(Weight::parse(&c, "h0=1,h1=2").is_err());
        assert!(Weight::parse(&c, "h0=1,h1=2,h2=0,x=1").is_err());
        let f = CartanData::from_type("A2").unwrap();
        assert!(Weight::parse(&f, "h0=1,h1=2,d=0").is_err());
    }

    #[test]
    fn level_two_ways() {
        let c = CartanData::from_type("C2~").unwrap();
        let w = Weight::parse(&c, "h0=1/2,h1=-3,h2=5/7,d=1").unwrap();
        assert_eq!(w.level(&c), w.delta_pairing_via_form(&c));
    }

    #[test]
    fn diff_as_root_recovers_vectors() {
        let c = CartanData::from_type("A1~").unwrap();
        let zero = Weight::zero(&c);
        let shifted = zero.add_root(&c, &[2, -1], &Scalar::one());
        assert_eq!(shifted.diff_as_root(&c, &zero), Some(vec![2, -1]));
        let half = zero.add_root(&c, &[1, 0], &Scalar::from_frac(1, 2));
        assert_eq!(half.diff_as_root(&c, &zero), None);
    }
}
